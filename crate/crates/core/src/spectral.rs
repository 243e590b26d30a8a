//! Energy-spread analysis for constant Hamiltonians.
//!
//! The initial state is resolved into projections `c_k|k⟩` onto the
//! eigenspaces of `H` with distinct energies. The entropy of `{|c_k|²}`
//! upper-bounds every entropic system-time entanglement (the weights are
//! majorized by the Schmidt spectrum), with equality exactly for cyclic
//! spectra `E_k = E_0 + 2πk/N`. In the cyclic case the Fourier-conjugate
//! coefficients `c̃_l` measure time localization and obey
//! `E + Ẽ ≥ log₂N` together with the support rule `n(c)·n(c̃) ≥ N`.

use std::f64::consts::PI;

use crate::entanglement::{shannon_entropy, SchmidtData};
use crate::error::{Error, Result};
use crate::history::HistoryState;
use crate::linalg::{eigh, ComplexOperator, ComplexVector, C64};
use crate::tol;

/// Conjugate (time-localization) coefficients of a cyclic spectrum.
#[derive(Debug, Clone)]
pub struct Conjugate {
    /// `c̃_l = N^{−1/2} Σ_k e^{−i2πkl/N} c_k` over the energy grid.
    pub coefficients: Vec<C64>,
    /// `Ẽ = −Σ |c̃_l|² log₂ |c̃_l|²`, bits.
    pub entropy: f64,
}

/// Spread of an initial state over the distinct-energy eigenspaces of a
/// constant Hamiltonian, relative to a clock of dimension `N`.
#[derive(Debug, Clone)]
pub struct SpectralSpread {
    /// Group representative energies, ascending.
    pub energies: Vec<f64>,
    /// Projection coefficients `c_k` (phases canonicalized).
    pub coefficients: Vec<C64>,
    pub group_tol: f64,
    /// `E = −Σ |c_k|² log₂ |c_k|²`, bits.
    pub spread_entropy: f64,
    /// Clock dimension the cyclicity test refers to.
    pub clock_dim: usize,
    /// Grid residues `k` with `E_k = E_0 + 2πk/N`, when the spectrum is
    /// cyclic; parallel to `energies`.
    pub grid: Option<Vec<usize>>,
    /// Conjugate coefficients, defined only for cyclic spectra.
    pub conjugate: Option<Conjugate>,
}

impl SpectralSpread {
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Weights placed on the full cyclic grid of length `N` (zeros on
    /// unoccupied levels). `None` for non-cyclic spectra.
    pub fn grid_coefficients(&self) -> Option<Vec<C64>> {
        let grid = self.grid.as_ref()?;
        let mut c = vec![C64::ZERO; self.clock_dim];
        for (&g, &ck) in grid.iter().zip(&self.coefficients) {
            c[g] = ck;
        }
        Some(c)
    }
}

/// Default grouping tolerance: relative to the spectral range.
pub fn default_group_tol(energies: &[f64]) -> f64 {
    let range = energies.iter().cloned().fold(f64::MIN, f64::max)
        - energies.iter().cloned().fold(f64::MAX, f64::min);
    1e-9 * range.max(1.0)
}

/// Resolve `psi0` into eigenspace projections of hermitian `h`, grouping
/// eigenvalues closer than `group_tol` (default: `1e−9·max(1, range)`).
pub fn spectral_spread(
    h: &ComplexOperator,
    psi0: &ComplexVector,
    clock_dim: usize,
    group_tol: Option<f64>,
) -> Result<SpectralSpread> {
    psi0.assert_normalized()?;
    let es = eigh(h)?;
    if es.dim() != psi0.len() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for a {}-dimensional Hamiltonian",
            psi0.len(),
            es.dim()
        )));
    }
    let group_tol = group_tol.unwrap_or_else(|| default_group_tol(&es.eigenvalues));

    // chain-group ascending eigenvalues
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..es.dim() {
        match groups.last_mut() {
            Some(g) if es.eigenvalues[i] - es.eigenvalues[*g.last().unwrap()] <= group_tol => {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }

    let mut energies = Vec::with_capacity(groups.len());
    let mut coefficients = Vec::with_capacity(groups.len());
    for g in &groups {
        let e_rep = g.iter().map(|&i| es.eigenvalues[i]).sum::<f64>() / g.len() as f64;
        // projection Π_E |ψ₀⟩ expressed in the eigenvector columns
        let mut proj = vec![C64::ZERO; psi0.len()];
        for &i in g {
            let v = es.eigenvector(i);
            let amp = v.inner(psi0);
            for (p, x) in proj.iter_mut().zip(v.data().iter()) {
                *p += amp * x;
            }
        }
        let norm: f64 = proj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // gauge: phase of the first nonzero component of the projection
        let phase = proj
            .iter()
            .find(|z| z.norm() > 1e-14)
            .map(|z| z / z.norm())
            .unwrap_or(C64::ONE);
        energies.push(e_rep);
        coefficients.push(phase * norm);
    }

    let weights: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr()).collect();
    let spread_entropy = shannon_entropy(&weights);

    // cyclicity relative to the clock: E_k = E_0 + 2πk/N
    let n = clock_dim;
    let mut grid: Option<Vec<usize>> = None;
    if n >= 1 {
        let e0 = energies[0];
        let mut residues = Vec::with_capacity(energies.len());
        let mut ok = true;
        for &e in &energies {
            let d = (e - e0) * n as f64 / (2.0 * PI);
            let dev = (C64::from_polar(1.0, -e * n as f64)
                - C64::from_polar(1.0, -e0 * n as f64))
            .norm();
            if dev > tol::CYCLIC {
                ok = false;
                break;
            }
            let r = (d.round() as i64).rem_euclid(n as i64) as usize;
            if residues.contains(&r) {
                ok = false; // two distinct groups on the same grid point
                break;
            }
            residues.push(r);
        }
        if ok && energies.len() <= n {
            grid = Some(residues);
        }
    }

    let conjugate = grid.as_ref().map(|grid| {
        let mut cgrid = vec![C64::ZERO; n];
        for (&g, &ck) in grid.iter().zip(&coefficients) {
            cgrid[g] = ck;
        }
        let norm = 1.0 / (n as f64).sqrt();
        let coefficients: Vec<C64> = (0..n)
            .map(|l| {
                let mut acc = C64::ZERO;
                for (k, &c) in cgrid.iter().enumerate() {
                    acc += c * C64::from_polar(norm, -2.0 * PI * (k * l) as f64 / n as f64);
                }
                acc
            })
            .collect();
        let w: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr()).collect();
        Conjugate { entropy: shannon_entropy(&w), coefficients }
    });

    Ok(SpectralSpread {
        energies,
        coefficients,
        group_tol,
        spread_entropy,
        clock_dim: n,
        grid,
        conjugate,
    })
}

/// Outcome of the cyclic-spectrum equality check `E(S,T) = E({|c_k|²})`.
#[derive(Debug, Clone)]
pub struct CyclicEqualityReport {
    pub spread_entropy: f64,
    pub entanglement_entropy: f64,
    pub entropy_gap: f64,
    /// Largest multiset distance between `{p_k}` and `{|c_k|²}`.
    pub max_weight_gap: f64,
    /// Largest deviation of the T-side Schmidt subspaces from the
    /// matching Fourier clock states.
    pub subspace_residual: f64,
}

/// For a cyclic spectrum, the Schmidt spectrum is exactly `{|c_k|²}` and
/// the T-side Schmidt basis spans the Fourier clock states. Verifies both
/// and the entropy equality.
pub fn verify_cyclic_equality(
    spread: &SpectralSpread,
    hs: &HistoryState,
    sd: &SchmidtData,
) -> Result<CyclicEqualityReport> {
    if spread.grid.is_none() {
        return Err(Error::NotCyclicSpectrum);
    }
    let e_st = shannon_entropy(&sd.coefficients);
    let entropy_gap = (e_st - spread.spread_entropy).abs();
    assert!(entropy_gap <= tol::EIG, "cyclic equality entropy gap {entropy_gap}");

    let mut p = sd.coefficients.clone();
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut w = spread.weights();
    w.sort_by(|a, b| b.partial_cmp(a).unwrap());
    w.resize(p.len().max(w.len()), 0.0);
    p.resize(w.len(), 0.0);
    let max_weight_gap =
        p.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(max_weight_gap <= tol::EIG, "Schmidt/spread weight gap {max_weight_gap}");

    // subspace check: cluster equal Schmidt values and compare the T-side
    // projectors against the matching |t̃_k⟩ = N^{−1/2} Σ_t e^{−iE_k t}|t⟩
    let n = hs.n();
    let cluster_tol = 1e-8;
    let mut subspace_residual: f64 = 0.0;
    let mut used = vec![false; sd.coefficients.len()];
    for (k, &e) in spread.energies.iter().enumerate() {
        let wk = spread.coefficients[k].norm_sqr();
        if wk <= tol::RANK {
            continue;
        }
        // Schmidt indices in this weight cluster
        let idx: Vec<usize> = sd
            .coefficients
            .iter()
            .enumerate()
            .filter(|&(i, &pv)| !used[i] && (pv - wk).abs() <= cluster_tol)
            .map(|(i, _)| i)
            .collect();
        // FT states in the same cluster (degenerate weights merge)
        let grid_ks: Vec<usize> = spread
            .coefficients
            .iter()
            .enumerate()
            .filter(|&(_, c)| (c.norm_sqr() - wk).abs() <= cluster_tol)
            .map(|(i, _)| i)
            .collect();
        if idx.len() < grid_ks.len() {
            continue; // cluster handled once all members are visible
        }
        for &i in &idx {
            used[i] = true;
        }
        let mut proj_schmidt = nalgebra::DMatrix::from_element(n, n, C64::ZERO);
        for &i in &idx {
            let v = sd.right_basis[i].data();
            proj_schmidt += v * v.adjoint();
        }
        let mut proj_ft = nalgebra::DMatrix::from_element(n, n, C64::ZERO);
        for &gk in &grid_ks {
            let ek = spread.energies[gk];
            let norm = 1.0 / (n as f64).sqrt();
            let ft = nalgebra::DVector::from_fn(n, |t, _| {
                C64::from_polar(norm, -ek * t as f64)
            });
            proj_ft += &ft * ft.adjoint();
        }
        let res = (&proj_schmidt - &proj_ft)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        subspace_residual = subspace_residual.max(res);
        let _ = e;
    }
    assert!(
        subspace_residual <= 1e-7,
        "T-side Schmidt basis off the Fourier states by {subspace_residual}"
    );

    Ok(CyclicEqualityReport {
        spread_entropy: spread.spread_entropy,
        entanglement_entropy: e_st,
        entropy_gap,
        max_weight_gap,
        subspace_residual,
    })
}

/// Result of a majorization comparison `{|c_k|²} ≺ {p_k}`.
#[derive(Debug, Clone, Copy)]
pub struct MajorizationReport {
    /// Largest partial-sum excess of the spread weights over the Schmidt
    /// spectrum (positive would violate the relation).
    pub max_violation: f64,
    pub holds: bool,
}

/// Checks `{|c_k|²} ≺ {p_k}` (the relation is a theorem; a violation
/// beyond tolerance signals an implementation bug).
pub fn majorization_check(spread: &SpectralSpread, sd: &SchmidtData) -> MajorizationReport {
    let mut c = spread.weights();
    let mut p = sd.coefficients.clone();
    c.sort_by(|a, b| b.partial_cmp(a).unwrap());
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let len = c.len().max(p.len());
    c.resize(len, 0.0);
    p.resize(len, 0.0);
    let mut max_violation = f64::MIN;
    let (mut sc, mut sp) = (0.0, 0.0);
    for j in 0..len {
        sc += c[j];
        sp += p[j];
        max_violation = max_violation.max(sc - sp);
    }
    // full sums both equal 1
    max_violation = max_violation.max((sc - 1.0).abs() - tol::EIG).max((sp - 1.0).abs() - tol::EIG);
    MajorizationReport { max_violation, holds: max_violation <= tol::EIG }
}

/// Result of the Schur-concave bound `Σf(p_k) ≤ Σf(|c_k|²)`.
#[derive(Debug, Clone, Copy)]
pub struct SchurBoundReport {
    pub entanglement_side: f64,
    pub spread_side: f64,
    pub holds: bool,
}

pub fn schur_bound_check<F: Fn(f64) -> f64>(
    spread: &SpectralSpread,
    sd: &SchmidtData,
    f: F,
) -> SchurBoundReport {
    let lhs: f64 = sd.coefficients.iter().map(|&p| f(p)).sum();
    let rhs: f64 = spread.weights().iter().map(|&w| f(w)).sum();
    SchurBoundReport { entanglement_side: lhs, spread_side: rhs, holds: lhs <= rhs + tol::EIG }
}

/// The entropic energy-time uncertainty data for a cyclic spectrum.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyReport {
    /// Energy-spread entropy `E`, bits.
    pub energy_entropy: f64,
    /// Time-spread entropy `Ẽ`, bits.
    pub time_entropy: f64,
    pub entropy_sum: f64,
    /// `n({c_k}) · n({c̃_l})`.
    pub support_product: usize,
    pub entropy_bound_holds: bool,
    pub support_bound_holds: bool,
}

/// Evaluates `E + Ẽ ≥ log₂N` and `n(c)·n(c̃) ≥ N`.
pub fn uncertainty_relation(spread: &SpectralSpread) -> Result<UncertaintyReport> {
    let conj = spread.conjugate.as_ref().ok_or(Error::NotCyclicSpectrum)?;
    let n = spread.clock_dim;
    let grid_c = spread.grid_coefficients().expect("cyclic by construction");
    let support = |cs: &[C64]| cs.iter().filter(|c| c.norm_sqr() > tol::SUPPORT).count();
    let n_energy = support(&grid_c);
    let n_time = support(&conj.coefficients);
    let sum = spread.spread_entropy + conj.entropy;
    Ok(UncertaintyReport {
        energy_entropy: spread.spread_entropy,
        time_entropy: conj.entropy,
        entropy_sum: sum,
        support_product: n_energy * n_time,
        entropy_bound_holds: sum >= (n as f64).log2() - tol::EIG,
        support_bound_holds: n_energy * n_time >= n,
    })
}

/// Convenience: the diagonal cyclic Hamiltonian `E_0 + 2πk/N` on the
/// computational basis, together with the state `Σ c_k |k⟩`.
pub fn cyclic_instance(
    c: &[C64],
    e0: f64,
) -> Result<(ComplexOperator, ComplexVector)> {
    let n = c.len();
    let mat = nalgebra::DMatrix::from_fn(n, n, |r, col| {
        if r == col {
            C64::new(e0 + 2.0 * PI * r as f64 / n as f64, 0.0)
        } else {
            C64::ZERO
        }
    });
    let h = ComplexOperator::square(mat, vec![n])?;
    let psi0 = ComplexVector::new(c.to_vec(), vec![n])?.normalized()?;
    Ok((h, psi0))
}
