//! Discrete system-clock "history states".
//!
//! A history state encodes a whole discrete evolution
//! `|Ψ⟩ = N^{-1/2} Σ_t |ψ_t⟩|t⟩` of a system `S` against an `N`-dimensional
//! clock register `T` as a single static vector. This crate builds such
//! states from unitary schedules (dense construction and bit-indexed
//! statevector circuit simulation), constructs the joint translation
//! operator and its hermitian generator, and computes the entanglement,
//! spectral-spread and uncertainty quantities attached to them:
//!
//! - [`linalg`]: dense complex vectors/operators, tensor products, partial
//!   trace, SVD, hermitian eigendecomposition, Fourier clock states;
//! - [`history`]: history-state construction, time conditioning, circuit
//!   simulation, time-register measurement;
//! - [`translation`]: the translation super-operator, its phase
//!   eigenstates, hermitian parts, generator, and cyclic factorization;
//! - [`entanglement`]: Schmidt decomposition, von Neumann / quadratic /
//!   generic entropic entanglement, periodic reduction, permanence times;
//! - [`spectral`]: energy-spread coefficients, majorization and
//!   Schur-concave bounds, the entropic energy-time uncertainty relation;
//! - [`subsystem`]: mixed system-clock states for a subsystem, Wootters
//!   concurrence, fidelity identities, monogamy;
//! - [`scenarios`]: closed-form references (qubit clock, two-level
//!   expansion, Bloch-plane path and its large-N limit).

pub mod entanglement;
pub mod error;
pub mod history;
pub mod linalg;
pub mod random;
pub mod scenarios;
pub mod spectral;
pub mod subsystem;
pub mod tol;
pub mod translation;

pub use error::{Error, Result};
pub use linalg::{ComplexOperator, ComplexVector, EigenSystem};
