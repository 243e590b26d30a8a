//! Central numerical tolerances. Tests and invariant checks all read from
//! here so they can be calibrated with a single knob.

/// Norm deviation allowed for a vector flagged `normalized`.
pub const NORM: f64 = 1e-12;
/// Max-entry deviation allowed for unitarity (`‖O†O − 1‖_max`) and
/// hermiticity (`‖O − O†‖_max`) checks.
pub const HERM: f64 = 1e-10;
/// Per-pair eigen residual `‖Av − λv‖`.
pub const EIG: f64 = 1e-9;
/// Schmidt coefficients below this are treated as numerically zero rank.
pub const RANK: f64 = 1e-10;
/// Round-trip tolerance for the generator: `‖e^{−i𝒥} − 𝒰‖_max`.
pub const GENERATOR: f64 = 1e-8;
/// `|e^{−iE_k N} − 1|` threshold deciding whether a spectrum is cyclic.
pub const CYCLIC: f64 = 1e-8;
/// Squared-modulus threshold for counting a coefficient as nonzero support.
pub const SUPPORT: f64 = 1e-12;
/// Iteration cap for the dense SVD / eigensolver.
pub const SOLVER_MAX_ITER: usize = 1000;
