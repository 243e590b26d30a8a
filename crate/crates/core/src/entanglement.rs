//! Schmidt decomposition and system-time entanglement measures.
//!
//! The Schmidt spectrum `{p_k}` across the S|T cut is read off an SVD of
//! the M×N reshape of the joint vector; `E(S,T)` is its base-2 entropy,
//! `E₂ = 2(1 − Tr ρ²)` its quadratic counterpart, and `τ_m = 2^E − 1`
//! the minimum number of elapsed steps. Periodic evolutions reduce to an
//! effective L-dimensional clock; clustered evolutions expose the
//! permanence-time reading of the Schmidt coefficients.

use crate::error::{Error, Result};
use crate::history::HistoryState;
use crate::linalg::{svd_matrix, ComplexVector, C64};
use crate::tol;

/// Schmidt data of a bipartite pure state: coefficients `p_k` descending
/// with `Σ p_k = 1`, orthonormal left (S-side) and right (T-side) bases,
/// and the numerical rank above `tol::RANK`.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<ComplexVector>,
    pub right_basis: Vec<ComplexVector>,
    pub rank: usize,
}

/// Entanglement summary of one history state.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementReport {
    /// von Neumann entanglement entropy, in bits.
    pub e_vn: f64,
    /// Quadratic entanglement `2(1 − Tr ρ²)`.
    pub e2: f64,
    /// Minimum elapsed time `2^{E_vn} − 1`.
    pub tau_min: f64,
    pub rank: usize,
}

/// Schmidt decomposition across the cut after `left_factors` factors.
/// Left-basis phases are fixed (first nonzero component real-positive)
/// with the compensating phase absorbed into the right basis.
pub fn schmidt_split(v: &ComplexVector, left_factors: usize) -> Result<SchmidtData> {
    let a = v.as_matrix(left_factors);
    let s = svd_matrix(&a)?;
    let rows = a.nrows();
    let cols = a.ncols();
    let k = s.singulars.len();
    let mut coefficients = Vec::with_capacity(k);
    let mut left_basis = Vec::with_capacity(k);
    let mut right_basis = Vec::with_capacity(k);
    for i in 0..k {
        coefficients.push(s.singulars[i] * s.singulars[i]);
        let mut l: Vec<C64> = (0..rows).map(|r| s.u[(r, i)]).collect();
        let mut r: Vec<C64> = (0..cols).map(|c| s.v_h[(i, c)]).collect();
        if let Some(z) = l.iter().find(|z| z.norm() > 1e-14) {
            let phase = z / z.norm();
            for x in &mut l {
                *x /= phase;
            }
            for x in &mut r {
                *x *= phase;
            }
        }
        left_basis.push(ComplexVector::new(l, v.dims()[..left_factors].to_vec())?);
        right_basis.push(ComplexVector::new(r, v.dims()[left_factors..].to_vec())?);
    }
    let rank = coefficients.iter().filter(|&&p| p > tol::RANK).count();
    Ok(SchmidtData { coefficients, left_basis, right_basis, rank })
}

/// Schmidt decomposition of a history state across the S|T cut.
pub fn schmidt(hs: &HistoryState) -> Result<SchmidtData> {
    schmidt_split(hs.joint(), 1)
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Base-2 entropy of a probability vector (`0·log 0 := 0`).
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Von Neumann system-time entanglement `E(S,T) = −Σ p_k log₂ p_k`, bits.
pub fn entanglement_entropy(sd: &SchmidtData) -> f64 {
    shannon_entropy(&sd.coefficients)
}

/// Generic entropic form `Σ_k f(p_k)` for concave `f` with `f(0)=f(1)=0`.
pub fn entropic_form<F: Fn(f64) -> f64>(sd: &SchmidtData, f: F) -> f64 {
    sd.coefficients.iter().map(|&p| f(p)).sum()
}

/// Quadratic entanglement `E₂(S,T)`, computed both as `2(1 − Tr ρ_T²)`
/// and through the pairwise branch-overlap (Gram) form; the two routes
/// must agree and the Gram value is returned.
pub fn quadratic_entanglement(hs: &HistoryState) -> Result<f64> {
    let n = hs.n();
    // route 1: purity of the reduced clock state
    let rho_t = hs.joint().density().partial_trace(&[1])?;
    let purity = rho_t.compose(&rho_t)?.trace().re;
    let via_purity = 2.0 * (1.0 - purity);

    // route 2: average pairwise squared fidelity of the visited states
    let branches: Vec<ComplexVector> = (0..n)
        .map(|t| hs.branch(t).map(|b| b.scaled(C64::new((n as f64).sqrt(), 0.0))))
        .collect::<Result<_>>()?;
    let via_gram = if n < 2 {
        0.0
    } else {
        let mut acc = 0.0;
        for t in 0..n {
            for tp in 0..n {
                if t != tp {
                    acc += branches[t].inner(&branches[tp]).norm_sqr();
                }
            }
        }
        let avg = acc / (n * (n - 1)) as f64;
        2.0 * (n as f64 - 1.0) / n as f64 * (1.0 - avg)
    };

    assert!(
        (via_purity - via_gram).abs() <= 1e-11,
        "purity and Gram routes disagree: {via_purity} vs {via_gram}"
    );
    Ok(via_gram)
}

/// Minimum elapsed time `τ_m = 2^E − 1` for an entropy in bits.
pub fn minimum_elapsed_time(e_vn: f64) -> f64 {
    2f64.powf(e_vn) - 1.0
}

/// Full entanglement report for a history state.
pub fn report(hs: &HistoryState) -> Result<EntanglementReport> {
    let sd = schmidt(hs)?;
    let e_vn = entanglement_entropy(&sd);
    let e2 = quadratic_entanglement(hs)?;
    Ok(EntanglementReport { e_vn, e2, tau_min: minimum_elapsed_time(e_vn), rank: sd.rank })
}

/// Verifies that a period-`L` evolution (`|ψ_{t+L}⟩ = e^{iγ}|ψ_t⟩`) has
/// the same entanglement as the `L`-dimensional effective clock built
/// from its first `L` branches, and returns the report of the reduced
/// state. Also checks orthonormality of the effective time states.
pub fn periodic_reduction(hs: &HistoryState, l: usize, gamma: f64) -> Result<EntanglementReport> {
    let n = hs.n();
    let m = hs.system_dim();
    if l == 0 || n % l != 0 {
        return Err(Error::BadPeriod { l, n });
    }
    let scale = C64::new((n as f64).sqrt(), 0.0);
    let branches: Vec<ComplexVector> =
        (0..n).map(|t| hs.branch(t).map(|b| b.scaled(scale))).collect::<Result<_>>()?;
    let phase = C64::from_polar(1.0, gamma);
    for t in 0..n - l {
        let dev = branches[t + l].sub(&branches[t].clone().scaled(phase)).norm();
        if dev > tol::EIG {
            return Err(Error::NotPeriodic(format!(
                "branch {t}+{l} deviates from e^(iγ)·branch {t} by {dev:.3e}"
            )));
        }
    }

    // effective time states |t_L⟩ = √(L/N) Σ_k e^{iγk} |t+Lk⟩
    let reps = n / l;
    let w = (l as f64 / n as f64).sqrt();
    let eff: Vec<ComplexVector> = (0..l)
        .map(|t| {
            let mut amps = vec![C64::ZERO; n];
            for k in 0..reps {
                amps[t + l * k] = C64::from_polar(w, gamma * k as f64);
            }
            ComplexVector::new(amps, vec![n]).expect("length n")
        })
        .collect();
    for (i, a) in eff.iter().enumerate() {
        for (j, b) in eff.iter().enumerate() {
            let want = if i == j { C64::ONE } else { C64::ZERO };
            assert!(
                (a.inner(b) - want).norm() <= tol::HERM,
                "effective time states not orthonormal"
            );
        }
    }

    // L-clock joint state from the first L branches
    let wl = 1.0 / (l as f64).sqrt();
    let mut amps = vec![C64::ZERO; m * l];
    for (t, b) in branches.iter().take(l).enumerate() {
        for s in 0..m {
            amps[s * l + t] = b.amp(s) * C64::new(wl, 0.0);
        }
    }
    let reduced = ComplexVector::new(amps, vec![m, l])?;

    let sd_full = schmidt(hs)?;
    let sd_red = schmidt_split(&reduced, 1)?;
    let e_full = entanglement_entropy(&sd_full);
    let e_red = entanglement_entropy(&sd_red);
    assert!(
        (e_full - e_red).abs() <= tol::EIG,
        "periodic reduction entropy mismatch: {e_full} vs {e_red}"
    );

    let purity: f64 = sd_red.coefficients.iter().map(|p| p * p).sum();
    let e2 = 2.0 * (1.0 - purity);
    Ok(EntanglementReport {
        e_vn: e_red,
        e2,
        tau_min: minimum_elapsed_time(e_red),
        rank: sd_red.rank,
    })
}

/// One orthogonal ray class of a clustered evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanenceEntry {
    /// Index of the first branch in the class.
    pub representative: usize,
    /// Number of time steps spent in the class.
    pub count: usize,
    /// The matching Schmidt coefficient `n_k / N`.
    pub weight: f64,
}

/// Clusters the branch states into orthogonal ray classes and verifies
/// the permanence-time reading `p_k = n_k/N` against the Schmidt
/// spectrum. Requires branches pairwise parallel or orthogonal within
/// `cluster_tol`.
pub fn permanence_profile(hs: &HistoryState, cluster_tol: f64) -> Result<Vec<PermanenceEntry>> {
    let n = hs.n();
    let scale = C64::new((n as f64).sqrt(), 0.0);
    let branches: Vec<ComplexVector> =
        (0..n).map(|t| hs.branch(t).map(|b| b.scaled(scale))).collect::<Result<_>>()?;

    let mut reps: Vec<usize> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    'outer: for t in 0..n {
        for (c, &r) in reps.iter().enumerate() {
            let ov = branches[r].inner(&branches[t]).norm();
            if ov >= 1.0 - cluster_tol {
                counts[c] += 1;
                continue 'outer;
            }
            if ov > cluster_tol {
                return Err(Error::NotClustered(format!(
                    "branches {r} and {t} have overlap modulus {ov:.3e}"
                )));
            }
        }
        reps.push(t);
        counts.push(1);
    }

    let mut entries: Vec<PermanenceEntry> = reps
        .iter()
        .zip(&counts)
        .map(|(&r, &c)| PermanenceEntry { representative: r, count: c, weight: c as f64 / n as f64 })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then(a.representative.cmp(&b.representative)));

    // the clustered weights must be the Schmidt spectrum
    let sd = schmidt(hs)?;
    let mut weights: Vec<f64> = entries.iter().map(|e| e.weight).collect();
    weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut p: Vec<f64> = sd.coefficients.iter().copied().filter(|&p| p > tol::RANK).collect();
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(weights.len(), p.len(), "cluster count differs from Schmidt rank");
    for (w, pk) in weights.iter().zip(&p) {
        assert!((w - pk).abs() <= tol::EIG, "permanence weight {w} vs Schmidt {pk}");
    }
    let total: usize = entries.iter().map(|e| e.count).sum();
    assert_eq!(total, n);
    Ok(entries)
}
