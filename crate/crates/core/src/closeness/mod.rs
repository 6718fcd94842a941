//! Non-Hamiltonicity certificates and distances to the extremal families.

pub mod certificate;
pub mod distance;

pub use certificate::{
    certificate_from_json, certificate_to_json, find_independent_set_certificate, independent_set_certificate,
    independent_set_threshold, parity_candidates, parity_certificate, parity_certificate_for, verify_certificate,
    Certificate, CertificateError, ColorType, HamiltonTarget, IndependentSetCertificate, ParityCertificate,
};
pub use distance::{
    distance_to_h_family, distance_to_half_split, DistanceError, DistanceMethod, DistanceReport, DistanceTarget,
};
