//! Hamiltonicity sweeps over the extremal families and over Dirac samples.

use rayon::prelude::*;
use serde_json::json;

use super::{ClaimBacking, ClaimStatus, ExperimentReport, Finding, HamiltonClaim, HarnessError, InstanceOutcome, InstanceRecord};
use crate::closeness::{find_independent_set_certificate, parity_certificate_for, Certificate, HamiltonTarget};
use crate::collection::GraphCollection;
use crate::constructions::{make_h, make_half_split, make_half_split_with_part, random_min_degree_collection, BInternal, Bipartition};
use crate::solver::{find_transversal_hamilton_cycle, find_transversal_hamilton_path, SearchBudget};

/// Largest `n` for solver-backed sweeps.
pub const HAMILTON_SWEEP_MAX_N: usize = 9;
const SWEEP_MIN_N: usize = 4;

#[derive(Clone, Copy, PartialEq)]
enum Expect {
    Absent,
    Recorded,
}

struct Case {
    id: String,
    family: String,
    g: GraphCollection,
    target: HamiltonTarget,
    expect: Expect,
    certificate: Option<Certificate>,
}

impl Case {
    fn run(self, budget: &SearchBudget) -> Result<InstanceRecord, HarnessError> {
        let outcome = match self.target {
            HamiltonTarget::Cycle => find_transversal_hamilton_cycle(&self.g, budget)?,
            HamiltonTarget::Path => find_transversal_hamilton_path(&self.g, budget)?,
        };
        let claim = HamiltonClaim::new(&self.g, self.target, &outcome, self.certificate.as_ref());
        let certified = claim.backing.iter().any(|b| {
            matches!(b, ClaimBacking::ParityCertificate | ClaimBacking::IndependentSetCertificate)
        });
        let searched = claim.backing.contains(&ClaimBacking::SolverExhausted);
        let (agrees, note) = match self.expect {
            Expect::Recorded => (true, None),
            Expect::Absent if claim.status != ClaimStatus::NotFound => {
                (false, Some("expected no transversal Hamilton subgraph".to_owned()))
            }
            Expect::Absent if self.certificate.is_some() && !(certified && searched) => {
                (false, Some("certificate and search disagree".to_owned()))
            }
            Expect::Absent => (true, None),
        };
        Ok(InstanceRecord {
            id: self.id,
            n: self.g.n(),
            family: self.family,
            seed: None,
            outcome: InstanceOutcome::Hamilton(claim),
            agrees,
            note,
        })
    }
}

fn cases_for(n: usize) -> Result<Vec<Case>, HarnessError> {
    let mut cases = Vec::new();
    for b in 0..=n {
        let a = n - b;
        let g = make_h(n, a, b)?;
        let absent = b == 0 || b % 2 == 1;
        let certificate = if absent {
            parity_certificate_for(&g, &Bipartition::canonical(n)).map(Certificate::Parity)
        } else {
            None
        };
        cases.push(Case {
            id: format!("n{n:02}/h/a{a:02}-b{b:02}"),
            family: "h".into(),
            g,
            target: HamiltonTarget::Cycle,
            expect: if absent { Expect::Absent } else { Expect::Recorded },
            certificate,
        });
    }
    for (label, b_internal) in [("empty", BInternal::Empty), ("complete", BInternal::Complete)] {
        let g = make_half_split(n, n, b_internal)?;
        let certificate = find_independent_set_certificate(&g, HamiltonTarget::Cycle).map(Certificate::IndependentSet);
        cases.push(Case {
            id: format!("n{n:02}/half-split/{label}"),
            family: "half_split".into(),
            g,
            target: HamiltonTarget::Cycle,
            expect: Expect::Absent,
            certificate,
        });
        if n % 2 == 1 {
            // one vertex more in A also blocks a path on n - 1 colours
            let g = make_half_split_with_part(n, n - 1, n / 2 + 2, b_internal)?;
            let certificate = find_independent_set_certificate(&g, HamiltonTarget::Path).map(Certificate::IndependentSet);
            cases.push(Case {
                id: format!("n{n:02}/half-split-path/{label}"),
                family: "half_split_path".into(),
                g,
                target: HamiltonTarget::Path,
                expect: Expect::Absent,
                certificate,
            });
        }
    }
    cases.push(Case {
        id: format!("n{n:02}/h-path/a{:02}-b00", n - 1),
        family: "h_path".into(),
        g: make_h(n, n - 1, 0)?,
        target: HamiltonTarget::Path,
        expect: Expect::Absent,
        certificate: None,
    });
    Ok(cases)
}

/// For every `4 <= n <= n_max`: each `H_a^b` with `b` odd or zero has no
/// transversal Hamilton cycle by both a parity certificate and an exhausted
/// search; other `H_a^b` are recorded; half-split collections have no cycle
/// (and, for odd `n` with `A` one larger, no path); `H_{n-1}^0` has no path.
pub fn run_extremal_sweep(n_max: usize) -> Result<ExperimentReport, HarnessError> {
    if n_max > HAMILTON_SWEEP_MAX_N {
        return Err(HarnessError::TooLarge { n: n_max, max: HAMILTON_SWEEP_MAX_N });
    }
    let cases = (SWEEP_MIN_N..=n_max).map(cases_for).collect::<Result<Vec<_>, _>>()?;
    // the certificate must not feed the search it is checked against
    let budget = SearchBudget::unlimited().without_precheck();
    let instances = cases
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|case| case.run(&budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport::new(
        "extremal_sweep",
        json!({ "n_min": SWEEP_MIN_N, "n_max": n_max }),
        Vec::new(),
        instances,
    ))
}

/// Samples `trials` collections of `n` graphs with minimum degree at least
/// `ceil(n/2)`; trial `i` uses seed `seed + i`. Exhausted instances are kept
/// as findings.
pub fn run_dirac_sampling(n: usize, trials: usize, seed: u64) -> Result<ExperimentReport, HarnessError> {
    if n > HAMILTON_SWEEP_MAX_N {
        return Err(HarnessError::TooLarge { n, max: HAMILTON_SWEEP_MAX_N });
    }
    let seeds: Vec<u64> = (0..trials as u64).map(|i| seed.wrapping_add(i)).collect();
    let budget = SearchBudget::unlimited();
    let runs = seeds
        .par_iter()
        .map(|&s| {
            let g = random_min_degree_collection(n, n, n.div_ceil(2), s)?;
            let outcome = find_transversal_hamilton_cycle(&g, &budget)?;
            let claim = HamiltonClaim::new(&g, HamiltonTarget::Cycle, &outcome, None);
            let id = format!("n{n:02}/dirac/seed{s:020}");
            let finding = (claim.status == ClaimStatus::NotFound)
                .then(|| Finding::new(&id, "Dirac collection without a transversal Hamilton cycle", &g));
            let record = InstanceRecord {
                id,
                n,
                family: "dirac".into(),
                seed: Some(s),
                outcome: InstanceOutcome::Hamilton(claim),
                agrees: true,
                note: None,
            };
            Ok((record, finding))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let (instances, findings): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    let mut report = ExperimentReport::new(
        "dirac_sampling",
        json!({ "n": n, "trials": trials, "seed": seed, "min_degree": n.div_ceil(2) }),
        seeds,
        instances,
    );
    report.findings = findings.into_iter().flatten().collect();
    report.findings.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(report)
}
