//! Witness search, the finite and finite-exception solvers, iterative
//! densification and the stability/openness lifts.

mod densify;
mod lifts;
mod solver;
mod witness;

pub use densify::{densify, densify_trace, DensifyResult, DensifyStep};
pub use lifts::{choose_delta, comaximal_meet_approx, quotient_lift, stability_lift, Lift};
pub use solver::{
    brute_force_crt, crat_infinite, density_certificate, finite_crat, reduce_certificate,
    reduce_element, reduce_family, Certificate, CertificateAudit, CratSolution, DensityCertificate,
    ExactCrtBasis, FamilyReduction, Residual, ResidueSystem,
};
pub use witness::{
    combine_witnesses_product, intersection_witness, tcm_witness, witness_defect_value, TcmWitness,
};
