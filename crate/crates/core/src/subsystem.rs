//! Mixed-state system–clock correlations for a bipartite system S = A+B.
//!
//! Tracing the history state over A leaves a mixed state ρ_BT on B⊗T whose
//! time-conditional states reproduce the subsystem evolution. When B and T
//! are both qubits the B–T entanglement is the Wootters concurrence, which
//! for local evolution collapses to the closed form
//! `C² = (p−q)²(1−|⟨ψ₀|U_B|ψ₀⟩|²) = 1 − F²(ρ_B0, ρ_B1)` and is bounded by
//! the full system–time entanglement (monogamy).

use nalgebra::DMatrix;

use crate::entanglement::quadratic_entanglement;
use crate::error::{Error, Result};
use crate::history::HistoryState;
use crate::linalg::{eigh, ComplexOperator, ComplexVector, C64};
use crate::tol;

/// Reduced system–time state of the subsystem B, `ρ_BT = Tr_A |Ψ⟩⟨Ψ|`.
#[derive(Debug, Clone)]
pub struct SubsystemTimeState {
    rho_bt: ComplexOperator,
    dim_a: usize,
    dim_b: usize,
    n: usize,
}

impl SubsystemTimeState {
    /// The density operator on B⊗T (factor order: B slowest).
    pub fn rho_bt(&self) -> &ComplexOperator {
        &self.rho_bt
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Two-qubit B–T entanglement data for a local qubit evolution.
#[derive(Debug, Clone, Copy)]
pub struct ConcurrenceReport {
    /// Wootters concurrence C(B,T).
    pub c: f64,
    pub c_squared: f64,
    /// Uhlmann fidelity F(ρ_B0, ρ_B1).
    pub fidelity_f: f64,
    /// E₂(S,T) of the purifying system–time state.
    pub e2_total: f64,
}

/// Traces the history state over subsystem A. `split = (d_A, d_B)` with A
/// the slow factor of S.
pub fn reduce_to_bt(hs: &HistoryState, split: (usize, usize)) -> Result<SubsystemTimeState> {
    let (da, db) = split;
    let m = hs.system_dim();
    if da == 0 || db == 0 || da * db != m {
        return Err(Error::BadSplit(format!(
            "split {da}x{db} does not factor a system of dimension {m}"
        )));
    }
    let n = hs.n();
    let joint = hs.joint().clone().reshaped(vec![da, db, n])?;
    let rho_bt = joint.density().partial_trace(&[1, 2])?;

    let tr = rho_bt.trace();
    debug_assert!((tr.re - 1.0).abs() <= 1e-12 && tr.im.abs() <= 1e-12);
    debug_assert!(
        eigh(&rho_bt).map(|es| es.eigenvalues.iter().all(|&l| l >= -1e-10)).unwrap_or(false)
    );

    Ok(SubsystemTimeState { rho_bt, dim_a: da, dim_b: db, n })
}

/// Conditional state of B at clock time `t`:
/// `ρ_Bt = Tr_T[ρ_BT (1⊗|t⟩⟨t|)] / Tr[ρ_BT (1⊗|t⟩⟨t|)]`.
pub fn conditional_state(st: &SubsystemTimeState, t: usize) -> Result<ComplexOperator> {
    let (db, n) = (st.dim_b, st.n);
    if t >= n {
        return Err(Error::TimeOutOfRange { t, n });
    }
    let m = st.rho_bt.matrix();
    let mut block = DMatrix::from_element(db, db, C64::ZERO);
    for b in 0..db {
        for bp in 0..db {
            block[(b, bp)] = m[(b * n + t, bp * n + t)];
        }
    }
    let p_t = block.diagonal().iter().map(|z| z.re).sum::<f64>();
    if p_t <= tol::SUPPORT {
        return Err(Error::NotDensityMatrix(format!("time {t} has zero probability")));
    }
    ComplexOperator::square(block / C64::new(p_t, 0.0), vec![db])
}

fn check_density(rho: &ComplexOperator) -> Result<Vec<f64>> {
    if !rho.is_hermitian() {
        return Err(Error::NotDensityMatrix("not hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotDensityMatrix(format!("trace {tr}")));
    }
    let es = eigh(rho)?;
    if es.eigenvalues.iter().any(|&l| l < -1e-10) {
        return Err(Error::NotDensityMatrix(format!(
            "negative eigenvalue {}",
            es.eigenvalues[0]
        )));
    }
    Ok(es.eigenvalues)
}

/// `√λ` with round-off-scale eigenvalues clamped to zero: √ amplifies an
/// O(ε) perturbation of a zero eigenvalue to O(√ε), which would wreck the
/// tight agreement checks downstream.
fn clamped_sqrt(l: f64) -> f64 {
    if l > 1e-13 {
        l.sqrt()
    } else {
        0.0
    }
}

/// Hermitian PSD square root, with round-off negatives clamped to zero.
fn psd_sqrt(rho: &ComplexOperator) -> Result<ComplexOperator> {
    let es = eigh(rho)?;
    let d = es.dim();
    let mut out = DMatrix::from_element(d, d, C64::ZERO);
    for k in 0..d {
        let s = clamped_sqrt(es.eigenvalues[k]);
        let v = es.vectors.column(k);
        out += v * v.adjoint() * C64::new(s, 0.0);
    }
    ComplexOperator::square(out, rho.dims_out().to_vec())
}

/// Wootters concurrence of a two-qubit density matrix, in the
/// computational product basis of B⊗T.
pub fn wootters_concurrence(rho: &ComplexOperator) -> Result<f64> {
    if rho.dim_out() != 4 || rho.dim_in() != 4 {
        return Err(Error::NotTwoQubit);
    }
    check_density(rho)?;
    // spin flip ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)
    let yy = DMatrix::from_row_slice(
        4,
        4,
        &[
            C64::ZERO, C64::ZERO, C64::ZERO, -C64::ONE,
            C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO,
            C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO,
            -C64::ONE, C64::ZERO, C64::ZERO, C64::ZERO,
        ],
    );
    let tilde = &yy * rho.matrix().map(|z| z.conj()) * &yy;
    let sqrt_rho = psd_sqrt(rho)?;
    let m = sqrt_rho.matrix() * tilde * sqrt_rho.matrix();
    // enforce hermiticity lost to round-off before eigh
    let herm = ComplexOperator::square((&m + m.adjoint()) * C64::new(0.5, 0.0), vec![2, 2])?;
    let es = eigh(&herm)?;
    let mut lambdas: Vec<f64> = es.eigenvalues.iter().map(|&l| clamped_sqrt(l)).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Uhlmann fidelity `F(ρ₀, ρ₁) = Tr √(√ρ₀ ρ₁ √ρ₀)`.
pub fn uhlmann_fidelity(rho0: &ComplexOperator, rho1: &ComplexOperator) -> Result<f64> {
    check_density(rho0)?;
    check_density(rho1)?;
    if rho0.dim_out() != rho1.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dimensions {} and {}",
            rho0.dim_out(),
            rho1.dim_out()
        )));
    }
    let s0 = psd_sqrt(rho0)?;
    let m = s0.matrix() * rho1.matrix() * s0.matrix();
    let herm = ComplexOperator::square(
        (&m + m.adjoint()) * C64::new(0.5, 0.0),
        rho0.dims_out().to_vec(),
    )?;
    let es = eigh(&herm)?;
    Ok(es.eigenvalues.iter().map(|&l| clamped_sqrt(l)).sum())
}

/// Orthogonal complement of a qubit state `(a, b) ↦ (−b̄, ā)`.
pub fn qubit_complement(psi: &ComplexVector) -> Result<ComplexVector> {
    if psi.len() != 2 {
        return Err(Error::NotTwoQubit);
    }
    ComplexVector::new(vec![-psi.amp(1).conj(), psi.amp(0).conj()], vec![2])
}

/// Two-qubit mixed-state entanglement of B with a one-step clock, for a
/// local qubit evolution. `p` and `q = 1−p` are the eigenvalues of ρ_B0
/// with eigenvectors `psi0_b` and its orthogonal complement.
///
/// Verifies three routes to C²: the Wootters eigenvalue formula on the
/// assembled ρ_BT, the overlap form `(p−q)²(1−|⟨ψ₀|U_B|ψ₀⟩|²)`, and the
/// fidelity form `1 − F²(ρ_B0, ρ_B1)`.
pub fn concurrence_fidelity_identity(
    p: f64,
    psi0_b: &ComplexVector,
    u_b: &ComplexOperator,
) -> Result<ConcurrenceReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::NotDensityMatrix(format!("weight p = {p} outside [0, 1]")));
    }
    if psi0_b.len() != 2 || u_b.dim_out() != 2 {
        return Err(Error::NotTwoQubit);
    }
    if !u_b.is_unitary() {
        return Err(Error::NonUnitary);
    }
    psi0_b.assert_normalized()?;
    let q = 1.0 - p;

    let psi = [psi0_b.clone(), qubit_complement(psi0_b)?];
    let evolved = [u_b.apply(&psi[0])?, u_b.apply(&psi[1])?];

    // ρ_BT = p|Ψ₀⟩⟨Ψ₀| + q|Ψ₁⟩⟨Ψ₁|, |Ψ_j⟩ = (|ψ₀ʲ⟩|0⟩ + |ψ₁ʲ⟩|1⟩)/√2
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let branch = |j: usize| -> ComplexVector {
        psi[j]
            .kron(&ComplexVector::basis(2, 0))
            .add(&evolved[j].kron(&ComplexVector::basis(2, 1)))
            .scaled(half)
    };
    let rho_bt = branch(0)
        .density()
        .scaled(C64::new(p, 0.0))
        .add(&branch(1).density().scaled(C64::new(q, 0.0)));

    let c = wootters_concurrence(&rho_bt)?;
    let c_squared = c * c;

    let overlap = psi[0].inner(&evolved[0]).norm();
    let closed_overlap = (p - q).powi(2) * (1.0 - overlap * overlap);
    assert!(
        (c_squared - closed_overlap).abs() <= 1e-9,
        "Wootters {c_squared} vs overlap form {closed_overlap}"
    );

    let rho_b0 = psi[0]
        .density()
        .scaled(C64::new(p, 0.0))
        .add(&psi[1].density().scaled(C64::new(q, 0.0)));
    let rho_b1 = ComplexOperator::square(
        u_b.matrix() * rho_b0.matrix() * u_b.matrix().adjoint(),
        vec![2],
    )?;
    let fidelity_f = uhlmann_fidelity(&rho_b0, &rho_b1)?;
    let closed_fidelity = 1.0 - fidelity_f * fidelity_f;
    assert!(
        (c_squared - closed_fidelity).abs() <= 1e-9,
        "Wootters {c_squared} vs fidelity form {closed_fidelity}"
    );

    // E₂ of the purifying S+T state, S = A+B with A the purifier
    let z = evolved[0].inner(&psi[0]) * p + evolved[1].inner(&psi[1]) * q;
    let e2_total = 1.0 - z.norm_sqr();
    debug_assert!(c_squared <= e2_total + 1e-9);

    Ok(ConcurrenceReport { c, c_squared, fidelity_f, e2_total })
}

/// Outcome of the monogamy comparison E₂(S,T) ≥ C²(B,T) for a two-qubit
/// S with local evolution on B and a one-step clock.
#[derive(Debug, Clone, Copy)]
pub struct MonogamyReport {
    /// E₂(S,T) from the eigenbasis closed form.
    pub e2_closed: f64,
    /// E₂(S,T) from the dense Schmidt route.
    pub e2_dense: f64,
    pub c_squared: f64,
    /// Larger eigenvalue of ρ_B0.
    pub p: f64,
    pub gap: f64,
}

/// Extracts `U_B` from a local step `U = 1_A ⊗ U_B` on two qubits.
fn local_factor(u: &ComplexOperator) -> Result<ComplexOperator> {
    if u.dim_out() != 4 {
        return Err(Error::NotTwoQubit);
    }
    let m = u.matrix();
    let ub = DMatrix::from_fn(2, 2, |r, c| m[(r, c)]);
    let full = ComplexOperator::identity(&[2])
        .kron(&ComplexOperator::square(ub.clone(), vec![2])?);
    if u.sub(&full).max_abs() > 1e-10 {
        return Err(Error::Unsupported(
            "evolution is not of the local form 1_A ⊗ U_B".into(),
        ));
    }
    ComplexOperator::square(ub, vec![2])
}

/// Checks the monogamy inequality on a two-qubit history state with N=2
/// and a constant local step on B. E₂(S,T) is computed both by the
/// eigenbasis closed form and by the dense Schmidt route.
pub fn monogamy_check(hs: &HistoryState, split: (usize, usize)) -> Result<MonogamyReport> {
    if hs.system_dim() != 4 || split != (2, 2) {
        return Err(Error::NotTwoQubit);
    }
    if hs.n() != 2 {
        return Err(Error::BadN(hs.n()));
    }
    let u_b = local_factor(&hs.schedule().step_unitary(1)?)?;

    // eigendecomposition of ρ_B0
    let rho_b0 = hs.psi0().clone().reshaped(vec![2, 2])?.density().partial_trace(&[1])?;
    let es = eigh(&rho_b0)?;
    let (p, q) = (es.eigenvalues[1], es.eigenvalues[0]); // descending pair
    let v0 = es.eigenvector(1);
    let v1 = es.eigenvector(0);

    let z = u_b.apply(&v0)?.inner(&v0) * p + u_b.apply(&v1)?.inner(&v1) * q;
    let e2_closed = 1.0 - z.norm_sqr();
    let e2_dense = quadratic_entanglement(hs)?;
    assert!(
        (e2_closed - e2_dense).abs() <= 1e-10,
        "closed-form E₂ {e2_closed} vs dense {e2_dense}"
    );

    let st = reduce_to_bt(hs, split)?;
    let c = wootters_concurrence(st.rho_bt())?;
    let c_squared = c * c;
    let gap = e2_dense - c_squared;
    assert!(gap >= -1e-9, "monogamy violated: E₂ {e2_dense} < C² {c_squared}");
    if p * q <= 1e-12 {
        assert!(gap.abs() <= 1e-9, "pure-case equality violated, gap {gap}");
    }

    Ok(MonogamyReport { e2_closed, e2_dense, c_squared, p, gap })
}
