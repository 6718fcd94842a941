use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use transversal_core::absorption::{
    build_absorbing_cycle_demo, check_absorbing_cycle, count_absorbing_paths, enumerate_absorbing_paths, DemoParams,
    EnumerationOptions, Forbidden,
};
use transversal_core::closeness::{
    certificate_from_json, certificate_to_json, distance_to_h_family, distance_to_half_split,
    find_independent_set_certificate, parity_certificate, verify_certificate, Certificate, DistanceMethod,
    HamiltonTarget,
};
use transversal_core::constructions::{
    make_balanced_bipartite, make_h, make_half_split_with_part, make_two_cliques, perturb, random_collection,
    random_min_degree_collection, BInternal,
};
use transversal_core::format::{collection_from_json, collection_to_json, witness_from_json, witness_to_json};
use transversal_core::harness::{
    run_dirac_sampling, run_extremal_sweep, run_stability_boundary, weak_mixture, ClaimStatus, ExperimentReport,
    HamiltonClaim,
};
use transversal_core::solver::{
    find_transversal_hamilton_cycle, find_transversal_hamilton_path, max_transversal_matching_with_budget,
    SearchBudget,
};
use transversal_core::structure::{
    classify_stability, extract_characteristic, extremality, is_collection_nice, is_nice, NicenessMode,
};
use transversal_core::{ColorSet, Graph, GraphCollection, Rational, Scalar, TransversalSubgraph};

use crate::args::{
    Absorb, Analyze, BSide, Cert, CertKind, Cli, Command, Dist, DistArgs, Format, Gen, Global, ModeArgs, Output,
    SearchArgs, Solve, Target, Verify,
};

pub const SUCCESS: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const BUDGET: u8 = 3;

/// A usage or input problem; always exit code 2.
#[derive(Debug)]
pub struct InputError(String);

impl Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn input_err(context: impl Display, e: impl Display) -> InputError {
    InputError(format!("{context}: {e}"))
}

type Exit = Result<u8, InputError>;

pub fn run(cli: &Cli) -> Exit {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(cmd) => gen(cmd, g),
        Command::Solve(cmd) => solve(cmd, g),
        Command::Analyze(cmd) => analyze(cmd, g),
        Command::Dist(cmd) => dist(cmd, g),
        Command::Cert(cmd) => cert(cmd, g),
        Command::Absorb(cmd) => absorb(cmd, g),
        Command::Verify(cmd) => verify(cmd, g),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| input_err(path.display(), e))
}

fn load(path: &Path) -> Result<GraphCollection, InputError> {
    collection_from_json(&read(path)?).map_err(|e| input_err(path.display(), e))
}

fn load_witness(path: &Path) -> Result<TransversalSubgraph, InputError> {
    witness_from_json(&read(path)?).map_err(|e| input_err(path.display(), e))
}

fn rational(name: &str, text: &str) -> Result<Rational, InputError> {
    Rational::parse(text).ok_or_else(|| input_err(format!("--{name}"), format!("not a number: {text:?}")))
}

fn mode(args: &ModeArgs, n: usize, seed: u64) -> NicenessMode {
    match args.heuristic {
        Some(restarts) => NicenessMode::Heuristic { restarts, seed },
        None => NicenessMode::auto(n),
    }
}

/// Writes to `-o` or standard output.
fn write_out(out: &Output, content: &str) -> Result<(), InputError> {
    match &out.output {
        Some(path) => fs::write(path, format!("{content}\n")).map_err(|e| input_err(path.display(), e)),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn emit(global: &Global, text: impl Display, value: &impl Serialize) {
    match global.format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("output serialises")),
    }
}

fn gen(cmd: &Gen, global: &Global) -> Exit {
    let seed = global.seed;
    let build = |r: Result<GraphCollection, _>| r.map_err(|e| input_err("gen", e));
    let (g, out) = match cmd {
        Gen::Hab { n, a, b, out } => (build(make_h(*n, *a, *b))?, out),
        Gen::HalfSplit { n, colors, part, b_internal, out } => {
            let side = match b_internal {
                BSide::Empty => BInternal::Empty,
                BSide::Complete => BInternal::Complete,
            };
            (build(make_half_split_with_part(*n, colors.unwrap_or(*n), part.unwrap_or(n / 2 + 1), side))?, out)
        }
        Gen::TwoCliques { n, out } => (build(make_two_cliques(*n))?, out),
        Gen::Bipartite { n, out } => (build(make_balanced_bipartite(*n))?, out),
        Gen::Complete { n, out } => (
            GraphCollection::uniform(Graph::complete(*n), *n).map_err(|e| input_err("gen", e))?,
            out,
        ),
        Gen::Random { n, colors, p, out } => (build(random_collection(*n, colors.unwrap_or(*n), *p, seed))?, out),
        Gen::Dirac { n, colors, min_degree, out } => (
            build(random_min_degree_collection(*n, colors.unwrap_or(*n), min_degree.unwrap_or(n.div_ceil(2)), seed))?,
            out,
        ),
        Gen::WeakMixture { n, out } => {
            if *n < 2 {
                return Err(input_err("--n", "need at least 2 vertices"));
            }
            (weak_mixture(*n, seed), out)
        }
        Gen::Perturb { input, edits, out } => (perturb(&load(input)?, *edits, seed), out),
    };
    write_out(out, &collection_to_json(&g))?;
    Ok(SUCCESS)
}

fn budget(args: &SearchArgs, global: &Global) -> SearchBudget {
    let mut b = SearchBudget::unlimited();
    if let Some(nodes) = args.node_limit {
        b = b.with_node_limit(nodes);
    }
    if let Some(ms) = global.timeout_ms {
        b = b.with_time_limit_ms(ms);
    }
    if args.no_precheck {
        b = b.without_precheck();
    }
    b
}

fn find_certificate(g: &GraphCollection, target: HamiltonTarget) -> Option<Certificate> {
    let parity = match target {
        HamiltonTarget::Cycle => parity_certificate(g, None).ok().flatten().map(Certificate::Parity),
        HamiltonTarget::Path => None,
    };
    parity.or_else(|| find_independent_set_certificate(g, target).map(Certificate::IndependentSet))
}

fn solve(cmd: &Solve, global: &Global) -> Exit {
    let (args, target) = match cmd {
        Solve::Hc(a) => (a, HamiltonTarget::Cycle),
        Solve::Hp(a) => (a, HamiltonTarget::Path),
        Solve::Matching(a) => return solve_matching(a, global),
    };
    let g = load(&args.input)?;
    let b = budget(args, global);
    let outcome = match target {
        HamiltonTarget::Cycle => find_transversal_hamilton_cycle(&g, &b),
        HamiltonTarget::Path => find_transversal_hamilton_path(&g, &b),
    }
    .map_err(|e| input_err(args.input.display(), e))?;
    let certificate = (!outcome.is_found()).then(|| find_certificate(&g, target)).flatten();
    let claim = HamiltonClaim::new(&g, target, &outcome, certificate.as_ref());
    let what = match target {
        HamiltonTarget::Cycle => "rainbow Hamilton cycle",
        HamiltonTarget::Path => "rainbow Hamilton path",
    };
    match (&claim.witness, &args.out.output) {
        (Some(w), Some(_)) => write_out(&args.out, &witness_to_json(w))?,
        (Some(w), None) if global.format == Format::Text => {
            println!("found {what} ({} nodes)", claim.nodes);
            println!("{}", witness_to_json(w));
            return Ok(SUCCESS);
        }
        _ => {}
    }
    let text = match claim.status {
        ClaimStatus::Found => format!("found {what} ({} nodes)", claim.nodes),
        ClaimStatus::NotFound => {
            let backing: Vec<String> = claim.backing.iter().map(|b| json!(b).as_str().unwrap_or_default().to_owned()).collect();
            format!("no {what}; backing: {}", backing.join(", "))
        }
        ClaimStatus::Indeterminate => format!("indeterminate: budget exceeded after {} nodes", claim.nodes),
    };
    emit(global, text, &json!({ "claim": claim, "certificate": certificate }));
    Ok(match claim.status {
        ClaimStatus::Found => SUCCESS,
        ClaimStatus::NotFound => NEGATIVE,
        ClaimStatus::Indeterminate => BUDGET,
    })
}

fn solve_matching(args: &SearchArgs, global: &Global) -> Exit {
    let g = load(&args.input)?;
    let outcome = max_transversal_matching_with_budget(&g, &budget(args, global));
    if args.out.output.is_some() {
        write_out(&args.out, &witness_to_json(&outcome.matching))?;
    }
    let text = format!(
        "rainbow matching of size {}{}\n{}",
        outcome.matching.len(),
        if outcome.optimal { " (maximum)" } else { " (search cut short)" },
        witness_to_json(&outcome.matching)
    );
    emit(global, text, &outcome);
    Ok(if outcome.optimal { SUCCESS } else { BUDGET })
}

fn analyze(cmd: &Analyze, global: &Global) -> Exit {
    let structure = |e| input_err("analyze", e);
    match cmd {
        Analyze::Color { input, color, eps, mode: m } => {
            let g = load(input)?;
            if *color >= g.colors() {
                return Err(input_err("--color", format!("{color} outside 0..{}", g.colors())));
            }
            let eps = rational("eps", eps)?;
            let mode = mode(m, g.n(), global.seed);
            let graph = g.graph(*color);
            let nice = is_nice(graph, eps, mode).map_err(structure)?;
            let extremal = extremality(graph, eps, mode).map_err(structure)?;
            let extraction =
                if extremal.nice { None } else { Some(extract_characteristic(graph, eps, mode).map_err(structure)?) };
            let mut text = format!(
                "colour {color}: {}-nice {}, {}-extremal {}",
                eps,
                nice.nice,
                eps,
                !extremal.nice
            );
            if let Some(x) = &extraction {
                match (&x.partition, &x.failure) {
                    (Some(p), _) => text += &format!(
                        "\n{:?} partition: A = {:?}, B = {:?}, C = {:?}",
                        p.kind,
                        p.a.to_vec(),
                        p.b.to_vec(),
                        p.c.to_vec()
                    ),
                    (None, Some(why)) => text += &format!("\nno characteristic partition: {why}"),
                    (None, None) => {}
                }
            }
            emit(global, text, &json!({ "color": color, "nice": nice, "extremality": extremal, "extraction": extraction }));
            Ok(SUCCESS)
        }
        Analyze::Stability { input, gamma, alpha, eps, delta, mode: m } => {
            let g = load(input)?;
            let verdict = classify_stability(
                &g,
                rational("gamma", gamma)?,
                rational("alpha", alpha)?,
                rational("eps", eps)?,
                rational("delta", delta)?,
                mode(m, g.n(), global.seed),
            )
            .map_err(structure)?;
            let text = format!(
                "{:?}: {} nice colours {:?}, {} cross edges",
                verdict.status,
                verdict.nice_colors.len(),
                verdict.nice_colors.to_vec(),
                verdict.cross_edge_count
            );
            emit(global, text, &verdict);
            Ok(SUCCESS)
        }
        Analyze::CollectionNice { input, mu, mode: m } => {
            let g = load(input)?;
            let report = is_collection_nice(&g, rational("mu", mu)?, mode(m, g.n(), global.seed)).map_err(structure)?;
            let text = match &report.witness {
                None => format!("{mu}-nice"),
                Some(w) => format!("not {mu}-nice: A = {:?} ({:?}, {} edges)", w.a.to_vec(), w.failure, w.count),
            };
            emit(global, text, &report);
            Ok(if report.nice { SUCCESS } else { NEGATIVE })
        }
    }
}

fn dist(cmd: &Dist, global: &Global) -> Exit {
    let method = |a: &DistArgs| match a.local_search {
        Some(restarts) => DistanceMethod::LocalSearch { restarts, seed: global.seed },
        None => DistanceMethod::Exhaustive,
    };
    let (args, report) = match cmd {
        Dist::H { args, require_b_odd } => {
            let g = load(&args.input)?;
            (args, distance_to_h_family::<Rational>(&g, *require_b_odd, method(args)))
        }
        Dist::HalfSplit { args } => {
            let g = load(&args.input)?;
            (args, distance_to_half_split::<Rational>(&g, method(args)))
        }
    };
    let report = report.map_err(|e| input_err(args.input.display(), e))?;
    let text = format!(
        "distance {} ({}), normalised {}",
        report.cost,
        if report.exact { "exact" } else { "upper bound" },
        report.normalized
    );
    emit(global, text, &report);
    Ok(SUCCESS)
}

fn cert(cmd: &Cert, global: &Global) -> Exit {
    match cmd {
        Cert::Find { input, kind, target, out } => {
            let g = load(input)?;
            let target = match target {
                Target::Cycle => HamiltonTarget::Cycle,
                Target::Path => HamiltonTarget::Path,
            };
            let found = match kind {
                CertKind::Parity => parity_certificate(&g, None)
                    .map_err(|e| input_err(input.display(), e))?
                    .map(Certificate::Parity),
                CertKind::IndependentSet => {
                    find_independent_set_certificate(&g, target).map(Certificate::IndependentSet)
                }
            };
            match found {
                Some(c) => {
                    write_out(out, &certificate_to_json(&c))?;
                    Ok(SUCCESS)
                }
                None => {
                    emit(global, "no certificate found", &Value::Null);
                    Ok(NEGATIVE)
                }
            }
        }
        Cert::Check { input, certificate } => {
            let g = load(input)?;
            let c = certificate_from_json(&read(certificate)?).map_err(|e| input_err(certificate.display(), e))?;
            match verify_certificate(&g, &c) {
                Ok(()) => {
                    emit(global, "valid", &json!({ "valid": true }));
                    Ok(SUCCESS)
                }
                Err(e) => {
                    emit(global, format!("invalid: {e}"), &json!({ "valid": false, "failed": e.to_string() }));
                    Ok(NEGATIVE)
                }
            }
        }
    }
}

fn absorb(cmd: &Absorb, global: &Global) -> Exit {
    match cmd {
        Absorb::Demo { input, lambda, mode: m, out } => {
            let g = load(input)?;
            let params = DemoParams { mode: mode(m, g.n(), global.seed), ..DemoParams::new(rational("lambda", lambda)?, g.n()) };
            let outcome = build_absorbing_cycle_demo(&g, &params, global.seed).map_err(|e| input_err("absorb", e))?;
            if let (Some(cycle), Some(_)) = (&outcome.cycle, &out.output) {
                write_out(out, &witness_to_json(cycle))?;
            }
            let text = match (&outcome.cycle, &outcome.failure) {
                (Some(c), _) => format!(
                    "absorbing cycle on {} vertices from {} paths{}\n{}",
                    c.len(),
                    outcome.paths.len(),
                    match &outcome.report {
                        Some(r) if r.holds() => ", absorbing conditions hold",
                        Some(_) => ", absorbing conditions fail at this size",
                        None => "",
                    },
                    witness_to_json(c)
                ),
                (None, Some(f)) => format!("no cycle: {f:?}"),
                (None, None) => "no cycle".to_owned(),
            };
            emit(global, text, &outcome);
            Ok(if outcome.cycle.is_some() { SUCCESS } else { NEGATIVE })
        }
        Absorb::Enumerate { input, color, v, u, limit, count } => {
            let g = load(input)?;
            let forbidden = Forbidden::default();
            let bad = |e| input_err("absorb", e);
            if *count {
                let total = count_absorbing_paths(&g, *color, *v, *u, &forbidden).map_err(bad)?;
                emit(global, total, &json!({ "count": total.to_string() }));
                return Ok(SUCCESS);
            }
            let options = EnumerationOptions { limit: *limit, seed: global.seed, ..EnumerationOptions::default() };
            let records = enumerate_absorbing_paths(&g, *color, *v, *u, &forbidden, options).map_err(bad)?;
            let text = records
                .iter()
                .map(|r| format!("{:?} colours {:?}", r.vertices, r.colors))
                .collect::<Vec<_>>()
                .join("\n");
            emit(global, text, &records);
            Ok(if records.is_empty() { NEGATIVE } else { SUCCESS })
        }
        Absorb::Check { input, cycle, delta_p, eps, gamma_p, mode: m } => {
            let g = load(input)?;
            let c = load_witness(cycle)?;
            let report = check_absorbing_cycle(
                &g,
                &c,
                &ColorSet::full(g.colors()),
                rational("delta-p", delta_p)?,
                rational("eps", eps)?,
                rational("gamma-p", gamma_p)?,
                mode(m, g.n(), global.seed),
            )
            .map_err(|e| input_err(cycle.display(), e))?;
            let text = format!(
                "condition (i) {}, condition (ii) {}",
                if report.condition_i { "holds" } else { "fails" },
                if report.condition_ii { "holds" } else { "fails" }
            );
            emit(global, text, &report);
            Ok(if report.holds() { SUCCESS } else { NEGATIVE })
        }
    }
}

fn finish_report(report: ExperimentReport, dir: Option<&Path>, global: &Global, strict: bool) -> Exit {
    if let Some(dir) = dir {
        let path = report.write_to(dir).map_err(|e| input_err(dir.display(), e))?;
        eprintln!("wrote {}", path.display());
    }
    let audit = report.audit();
    let mut text: Vec<String> = report.aggregate.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    text.extend(report.findings.iter().map(|f| format!("finding {}: {}", f.instance, f.reason)));
    if let Err(why) = &audit {
        text.push(format!("audit failed: {why}"));
    }
    match global.format {
        Format::Text => println!("{}", text.join("\n")),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(if audit.is_err() || (strict && report.disagreements() > 0) { NEGATIVE } else { SUCCESS })
}

fn verify(cmd: &Verify, global: &Global) -> Exit {
    let harness = |e| input_err("verify", e);
    match cmd {
        Verify::Witness { input, witness } => {
            let g = load(input)?;
            let w = load_witness(witness)?;
            match w.validate(&g) {
                Ok(()) => {
                    emit(global, format!("valid {:?} with {} edges", w.kind, w.len()), &json!({ "valid": true }));
                    Ok(SUCCESS)
                }
                Err(e) => {
                    emit(global, format!("invalid: {e}"), &json!({ "valid": false, "failed": e.to_string() }));
                    Ok(NEGATIVE)
                }
            }
        }
        Verify::Sweep { n_max, report_dir } => {
            finish_report(run_extremal_sweep(*n_max).map_err(harness)?, report_dir.as_deref(), global, true)
        }
        Verify::Dirac { n, trials, report_dir } => finish_report(
            run_dirac_sampling(*n, *trials, global.seed).map_err(harness)?,
            report_dir.as_deref(),
            global,
            true,
        ),
        Verify::Boundary { n, grid, report_dir } => finish_report(
            run_stability_boundary(*n, grid, global.seed).map_err(harness)?,
            report_dir.as_deref(),
            global,
            false,
        ),
    }
}
