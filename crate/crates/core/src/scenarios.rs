//! Closed-form reference scenarios: the one-step (qubit) clock, the
//! energy-fluctuation expansion of E₂, and the Bloch-plane path with its
//! large-N limit. Every closed form is cross-checked against the dense
//! Schmidt machinery where it is produced.

use std::f64::consts::PI;

use crate::entanglement::{quadratic_entanglement, schmidt, schmidt_split, shannon_entropy};
use crate::error::{Error, Result};
use crate::history::{build_history, UnitarySchedule};
use crate::linalg::{eigh, ComplexOperator, ComplexVector, C64};

/// Schmidt data of a single-step clock, valid for any system dimension.
#[derive(Debug, Clone, Copy)]
pub struct QubitClockResult {
    /// Overlap (fidelity) `r = |⟨ψ₀|ψ₁⟩|`.
    pub overlap_r: f64,
    /// Schmidt pair `p_± = (1±r)/2`.
    pub p_plus: f64,
    pub p_minus: f64,
    /// Entanglement entropy, bits.
    pub e_vn: f64,
    /// `E₂ = 4p₊p₋ = 1−r²`.
    pub e2: f64,
    /// Phase of `⟨ψ₀|ψ₁⟩` entering the Schmidt bases (0 when r = 0).
    pub gamma_phase: f64,
}

/// Result of the discretized Bloch-plane rotation by total angle φ.
#[derive(Debug, Clone, Copy)]
pub struct BlochPathResult {
    pub phi: f64,
    /// Number of time slots (steps + 1).
    pub n: usize,
    /// `E₂(S,T_N) = 1 − sin²(Nφ/(N−1)) / (N² sin²(φ/(N−1)))`.
    pub e2_n: f64,
    /// `E₂(S,T_∞) = 1 − sin²φ/φ²` (0 at φ = 0).
    pub e2_limit: f64,
    /// RMS branch amplitudes `α, β` of the two-state decomposition.
    pub alpha: f64,
    pub beta: f64,
    /// Overlap magnitude `γ = N⁻¹|Σ_t β_t* α_t|`.
    pub gamma_overlap: f64,
}

/// One-step clock: `|Ψ⟩ = (|ψ₀⟩|0⟩ + U|ψ₀⟩|1⟩)/√2` has Schmidt pair
/// `p_± = (1 ± |⟨ψ₀|ψ₁⟩|)/2` for any system dimension. Cross-checks the
/// closed form (including the explicit phased Schmidt bases) against the
/// dense decomposition.
pub fn qubit_clock(psi0: &ComplexVector, u: &ComplexOperator) -> Result<QubitClockResult> {
    if !u.is_unitary() {
        return Err(Error::NonUnitary);
    }
    psi0.assert_normalized()?;
    let psi1 = u.apply(psi0)?;
    let z = psi0.inner(&psi1);
    let r = z.norm();
    let gamma_phase = if r > 1e-14 { z.arg() } else { 0.0 };
    let p_plus = (1.0 + r) / 2.0;
    let p_minus = (1.0 - r) / 2.0;
    let e_vn = shannon_entropy(&[p_plus, p_minus]);
    let e2 = 1.0 - r * r;

    // dense oracle
    let schedule = UnitarySchedule::constant_unitary(u.clone(), 2)?;
    let hs = build_history(schedule, psi0.clone())?;
    let sd = schmidt(&hs)?;
    assert!((sd.coefficients[0] - p_plus).abs() <= 1e-10);
    assert!(
        (sd.coefficients.get(1).copied().unwrap_or(0.0) - p_minus).abs() <= 1e-10
    );

    if r > 1e-12 && p_minus > 1e-12 {
        // explicit Schmidt bases: |±⟩_S ∝ |ψ₀⟩ ± e^{iγ}|ψ₁⟩,
        // |±⟩_T = (|0⟩ ± e^{−iγ}|1⟩)/√2; verify they reassemble |Ψ⟩
        let eg = C64::from_polar(1.0, gamma_phase);
        let mut rebuilt =
            ComplexVector::new(vec![C64::ZERO; hs.joint().len()], hs.joint().dims().to_vec())?;
        for (sign, p) in [(1.0, p_plus), (-1.0, p_minus)] {
            let s_vec = psi0
                .add(&psi1.clone().scaled(eg * sign))
                .scaled(C64::new(1.0 / (2.0 * (1.0 + sign * r)).sqrt(), 0.0));
            let t_vec = ComplexVector::new(
                vec![
                    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                    eg.conj() * sign * std::f64::consts::FRAC_1_SQRT_2,
                ],
                vec![2],
            )?;
            rebuilt = rebuilt.add(&s_vec.kron(&t_vec).scaled(C64::new(p.sqrt(), 0.0)));
        }
        let gap = rebuilt.sub(hs.joint()).norm();
        assert!(gap <= 1e-10, "phased Schmidt reconstruction off by {gap}");
    }

    Ok(QubitClockResult { overlap_r: r, p_plus, p_minus, e_vn, e2, gamma_phase })
}

/// Exact and quadratic-order `E₂` for a single Hamiltonian step of size
/// `epsilon`: returns `(1 − |Σ_k |c_k|² e^{−iεε_k}|², ε²·var(h))`.
pub fn small_step_expansion(
    h: &ComplexOperator,
    psi0: &ComplexVector,
    epsilon: f64,
) -> Result<(f64, f64)> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    psi0.assert_normalized()?;
    let es = eigh(h)?;
    let mut char_fn = C64::ZERO;
    let mut mean = 0.0;
    let mut mean_sq = 0.0;
    for k in 0..es.dim() {
        let w = es.eigenvector(k).inner(psi0).norm_sqr();
        let e = es.eigenvalues[k];
        char_fn += C64::from_polar(w, -epsilon * e);
        mean += w * e;
        mean_sq += w * e * e;
    }
    let exact = 1.0 - char_fn.norm_sqr();
    let variance = mean_sq - mean * mean;
    Ok((exact, epsilon * epsilon * variance))
}

/// Minimum time for a Hamiltonian evolution to generate quadratic
/// entanglement `E₂` at energy variance `var`: `arcsin(√E₂)/√var`.
pub fn minimum_evolution_time(e2: f64, variance: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&e2) {
        return Err(Error::Unsupported(format!("E₂ = {e2} outside [0, 1]")));
    }
    if variance <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(e2.sqrt().asin() / variance.sqrt())
}

/// `sin²(Nx)/(N² sin²x)` with the removable singularities at `x = mπ`
/// evaluated by the sinc ratio.
fn dirichlet_sq(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    let delta = x - PI * (x / PI).round();
    if delta.abs() < 1e-8 {
        let sinc = |y: f64| if y == 0.0 { 1.0 } else { y.sin() / y };
        let ratio = sinc(nf * delta) / sinc(delta);
        ratio * ratio
    } else {
        let ratio = (nf * delta).sin() / (nf * delta.sin());
        ratio * ratio
    }
}

/// Discretized rotation `|ψ_t⟩ = cos(φt/(N−1))|0⟩ + sin(φt/(N−1))|1⟩`,
/// t = 0..N−1. Evaluates `E₂(S,T_N)` three ways — closed form, the
/// generic two-state decomposition, and the dense Schmidt route on the
/// assembled history state — and requires agreement within 1e−9.
pub fn bloch_path(phi: f64, n: usize) -> Result<BlochPathResult> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let x = phi / (n - 1) as f64;
    let e2_n = 1.0 - dirichlet_sq(x, n);
    let e2_limit = if phi == 0.0 { 0.0 } else { 1.0 - (phi.sin() / phi).powi(2) };

    // generic two-state route
    let alpha_t: Vec<C64> =
        (0..n).map(|t| C64::new((x * t as f64).cos(), 0.0)).collect();
    let beta_t: Vec<C64> = (0..n).map(|t| C64::new((x * t as f64).sin(), 0.0)).collect();
    let (_, _, e2_two) = two_state_general(&alpha_t, &beta_t)?;
    assert!(
        (e2_n - e2_two).abs() <= 1e-9,
        "closed form {e2_n} vs two-state route {e2_two} (φ = {phi}, N = {n})"
    );

    // dense route: constant rotation step on the assembled history state
    let (c, s) = (x.cos(), x.sin());
    let step = ComplexOperator::from_rows(
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    )?;
    let hs = build_history(
        UnitarySchedule::constant_unitary(step, n)?,
        ComplexVector::basis(2, 0),
    )?;
    // the purity route inside quadratic_entanglement materializes the
    // (2N)² joint density matrix; above N = 512 fall back to the SVD of
    // the 2×N reshape, which is equally independent of the closed form
    let e2_dense = if n <= 512 {
        quadratic_entanglement(&hs)?
    } else {
        let sd = schmidt(&hs)?;
        2.0 * (1.0 - sd.coefficients.iter().map(|p| p * p).sum::<f64>())
    };
    assert!(
        (e2_n - e2_dense).abs() <= 1e-9,
        "closed form {e2_n} vs dense route {e2_dense} (φ = {phi}, N = {n})"
    );

    let alpha_sq = alpha_t.iter().map(|a| a.norm_sqr()).sum::<f64>() / n as f64;
    let beta_sq = beta_t.iter().map(|b| b.norm_sqr()).sum::<f64>() / n as f64;
    let gamma_overlap = alpha_t
        .iter()
        .zip(&beta_t)
        .map(|(a, b)| b.conj() * a)
        .sum::<C64>()
        .norm()
        / n as f64;

    Ok(BlochPathResult {
        phi,
        n,
        e2_n,
        e2_limit,
        alpha: alpha_sq.sqrt(),
        beta: beta_sq.sqrt(),
        gamma_overlap,
    })
}

/// Schmidt data of a history state confined to a two-dimensional system
/// subspace, `|ψ_t⟩ = α_t|0⟩ + β_t|1⟩`. Returns `(p₊, p₋, E₂)` with
/// `E₂ = 4(α²β² − γ²)`; verified against the dense Schmidt decomposition.
pub fn two_state_general(alpha_t: &[C64], beta_t: &[C64]) -> Result<(f64, f64, f64)> {
    let n = alpha_t.len();
    if n == 0 || beta_t.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "branch coefficient lists of lengths {} and {}",
            n,
            beta_t.len()
        )));
    }
    for t in 0..n {
        if (alpha_t[t].norm_sqr() + beta_t[t].norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalizedBranch(t));
        }
    }
    let nf = n as f64;
    let alpha_sq = alpha_t.iter().map(|a| a.norm_sqr()).sum::<f64>() / nf;
    let beta_sq = beta_t.iter().map(|b| b.norm_sqr()).sum::<f64>() / nf;
    let gamma = alpha_t
        .iter()
        .zip(beta_t)
        .map(|(a, b)| b.conj() * a)
        .sum::<C64>()
        .norm()
        / nf;

    // p_± = (1 ± √(1 − 4α²β²(1 − |⟨φ₁|φ₀⟩|²)))/2 with |⟨φ₁|φ₀⟩|² =
    // γ²/(α²β²); since α² + β² = 1 the radicand equals (α²−β²)² + 4γ²,
    // which avoids the catastrophic cancellation at p₊ ≈ p₋
    let disc = ((alpha_sq - beta_sq).powi(2) + 4.0 * gamma * gamma).sqrt();
    let p_plus = (1.0 + disc) / 2.0;
    let p_minus = (1.0 - disc) / 2.0;
    let e2 = 4.0 * (alpha_sq * beta_sq - gamma * gamma);

    // dense oracle on the assembled state
    let mut amps = vec![C64::ZERO; 2 * n];
    let scale = C64::new(1.0 / nf.sqrt(), 0.0);
    for t in 0..n {
        amps[t] = alpha_t[t] * scale;
        amps[n + t] = beta_t[t] * scale;
    }
    let joint = ComplexVector::new(amps, vec![2, n])?;
    let sd = schmidt_split(&joint, 1)?;
    let dense_p: [f64; 2] = [
        sd.coefficients.first().copied().unwrap_or(0.0),
        sd.coefficients.get(1).copied().unwrap_or(0.0),
    ];
    assert!(
        (p_plus - dense_p[0]).abs() <= 1e-10 && (p_minus - dense_p[1]).abs() <= 1e-10,
        "closed-form Schmidt pair ({p_plus}, {p_minus}) vs dense ({}, {})",
        dense_p[0],
        dense_p[1]
    );

    Ok((p_plus, p_minus, e2))
}
