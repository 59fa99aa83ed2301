//! The proof-set LP, Δ(f), the LP-guided evaluator, and factored functions.

pub mod factored;
pub mod family;
pub mod lpa;
pub mod proof_lp;
pub mod simplex;

pub use factored::{
    factored_adversary, factored_feasible_solution, gamma_big, z_free_proofs_decompose, CertificateSide,
    FactoredAdversary, FactoredCertificate, FactoredFunction,
};
pub use family::{make_family, Family, FamilySpec};
pub use lpa::{lpa_evaluator, lpa_evaluator_with, Lpa, LpCache, LpaRule};
pub use proof_lp::{build_lp, delta, lp_objective, solve_lp, DeltaReport, LpSolution, LpStatus, ProofLp};
