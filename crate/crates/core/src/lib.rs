//! Priced evaluation of Boolean functions: exact competitive ratios,
//! adversaries, and the proof-set linear program, checked against
//! brute-force oracles on small instances.
//!
//! Variables are numbered from 0. All costs and ratios are exact rationals.

pub mod caps;
pub mod cost;
pub mod dnf;
pub mod error;
pub mod function;
pub mod generators;
pub mod harness;
pub mod lp;
pub mod proofs;
pub mod quadratic;
pub mod rational;
pub mod symmetric;
pub mod verify;

pub use caps::Caps;
pub use cost::CostVector;
pub use dnf::{Dnf, Literal, LiteralSet};
pub use error::{Error, Result};
pub use function::{Assignment, BooleanFunction, PartialAssignment, Restriction};
pub use harness::{EvaluationAlgorithm, EvaluationTranscript, RatioReport};
pub use lp::{LpSolution, ProofLp};
pub use proofs::{Certificates, Proof};
pub use quadratic::QuadraticAnalysis;
pub use rational::{Ratio, Rational};
pub use symmetric::{Block, SymmetricProfile};
