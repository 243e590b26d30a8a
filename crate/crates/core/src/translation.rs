//! The joint S+T translation operator and its generator.
//!
//! `𝒰 = Σ_{t=1}^{N} U_{t,t−1} ⊗ |t mod N⟩⟨t−1|` advances the system one
//! step while cyclically shifting the clock, with the closing step
//! `U_{N,N−1} = U_{N−1}†` synthesized internally. History states are its
//! eigenvalue-1 eigenvectors; the remaining spectrum sits on the N-th
//! roots of unity, each M-fold degenerate. Since `𝒰^N = 1` exactly, the
//! hermitian generator `𝒥` (with `𝒰 = e^{−i𝒥}`) is assembled from the
//! spectral projectors `P_k = N^{−1} Σ_t e^{i2πkt/N} 𝒰^t` on the
//! principal branch (eigenphases `2πk/N ∈ [0, 2π)`).

use nalgebra::DMatrix;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::history::{HistoryState, UnitarySchedule};
use crate::linalg::{
    exp_minus_i_hermitian, fourier_matrix, unitary_from_spectrum, ComplexOperator, ComplexVector,
    C64,
};
use crate::tol;

/// The translation operator on the MN-dimensional joint space.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    op: ComplexOperator,
    cyclic_step: ComplexOperator,
    m: usize,
    n: usize,
}

impl SuperOperator {
    pub fn op(&self) -> &ComplexOperator {
        &self.op
    }

    /// The synthesized closing step `U_{N,N−1} = U_{N−1}†`.
    pub fn cyclic_step(&self) -> &ComplexOperator {
        &self.cyclic_step
    }

    pub fn system_dim(&self) -> usize {
        self.m
    }

    pub fn clock_dim(&self) -> usize {
        self.n
    }
}

/// Hermitian generator with `e^{−i𝒥} = 𝒰`.
#[derive(Debug, Clone)]
pub struct GeneratorJ {
    pub op: ComplexOperator,
    /// Branch offsets `n_k` (all zero on the principal branch); the
    /// eigenphase for index `k` is `2π(k/N + n_k)`.
    pub branch_offsets: Vec<i64>,
}

pub fn build_superoperator(schedule: &UnitarySchedule) -> Result<SuperOperator> {
    let (m, n) = (schedule.system_dim(), schedule.n());
    let mut mat = DMatrix::from_element(m * n, m * n, C64::ZERO);
    let mut cyclic_step = None;
    for t in 1..=n {
        let step = schedule.step_unitary(t)?;
        let (row_t, col_t) = (t % n, t - 1);
        for sr in 0..m {
            for sc in 0..m {
                mat[(sr * n + row_t, sc * n + col_t)] = step.matrix()[(sr, sc)];
            }
        }
        if t == n {
            cyclic_step = Some(step);
        }
    }
    let op = ComplexOperator::square(mat, vec![m, n])?;
    debug_assert!(op.is_unitary());
    Ok(SuperOperator { op, cyclic_step: cyclic_step.expect("n >= 1"), m, n })
}

/// The eigenstate `|Ψ_k⟩ = N^{−1/2} Σ_t e^{i2πkt/N} |ψ_t⟩|t⟩` of `𝒰`
/// with eigenvalue `e^{−i2πk/N}`.
pub fn phase_eigenstate(
    schedule: &UnitarySchedule,
    psi0: &ComplexVector,
    k: usize,
) -> Result<ComplexVector> {
    let (m, n) = (schedule.system_dim(), schedule.n());
    if k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    psi0.assert_normalized()?;
    let branches = schedule.evolved_states(psi0)?;
    let w = 1.0 / (n as f64).sqrt();
    let mut amps = vec![C64::ZERO; m * n];
    for (t, b) in branches.iter().enumerate() {
        let phase = C64::from_polar(w, 2.0 * PI * (k * t) as f64 / n as f64);
        for s in 0..m {
            amps[s * n + t] = b.amp(s) * phase;
        }
    }
    ComplexVector::new(amps, vec![m, n])
}

/// The hermitian parts `𝒰_+ = (𝒰+𝒰†)/2` and `𝒰_− = i(𝒰−𝒰†)/2`.
/// History states satisfy `𝒰_+|Ψ⟩ = |Ψ⟩` and `𝒰_−|Ψ⟩ = 0`.
pub fn hermitian_parts(su: &SuperOperator) -> (ComplexOperator, ComplexOperator) {
    let dag = su.op.dagger();
    let plus = su.op.add(&dag).scaled(C64::new(0.5, 0.0));
    let minus = su.op.sub(&dag).scaled(C64::new(0.0, 0.5));
    (plus, minus)
}

/// The principal-branch generator, assembled from the exact spectral
/// projectors of `𝒰` (which satisfies `𝒰^N = 1`).
pub fn generator_j(su: &SuperOperator) -> Result<GeneratorJ> {
    let n = su.n;
    let d = su.op.dim_in();
    // powers 𝒰^t for t = 0..N−1
    let mut powers = Vec::with_capacity(n);
    powers.push(ComplexOperator::identity(su.op.dims_in()));
    for _ in 1..n {
        powers.push(su.op.compose(powers.last().unwrap())?);
    }
    let mut j = DMatrix::from_element(d, d, C64::ZERO);
    for k in 1..n {
        // P_k = N^{−1} Σ_t e^{i2πkt/N} 𝒰^t ; k = 0 contributes phase 0
        let mut pk = DMatrix::from_element(d, d, C64::ZERO);
        for (t, pw) in powers.iter().enumerate() {
            let phase = C64::from_polar(1.0 / n as f64, 2.0 * PI * (k * t) as f64 / n as f64);
            pk += pw.matrix() * phase;
        }
        j += pk * C64::new(2.0 * PI * k as f64 / n as f64, 0.0);
    }
    // clean round-off asymmetry
    let j = (j.adjoint() + j) * C64::new(0.5, 0.0);
    let op = ComplexOperator::square(j, su.op.dims_in().to_vec())?;
    Ok(GeneratorJ { op, branch_offsets: vec![0; n] })
}

impl GeneratorJ {
    /// Round trip `e^{−i𝒥}`, for checking against `𝒰`.
    pub fn exponential(&self) -> Result<ComplexOperator> {
        exp_minus_i_hermitian(&self.op)
    }
}

/// Output of the cyclic-case factorization `𝒰 = U ⊗ V`.
#[derive(Debug, Clone)]
pub struct CyclicFactorization {
    pub u: ComplexOperator,
    /// Cyclic time shift `V = Σ |t mod N⟩⟨t−1|`.
    pub v: ComplexOperator,
    /// Time operator `T = Σ t |t⟩⟨t|`.
    pub t_op: ComplexOperator,
    /// Clock momentum `P = Σ (2πk/N) |k̃⟩⟨k̃|`, with `V = e^{−iP}`.
    pub p: ComplexOperator,
}

/// The cyclic shift `V = Σ_{t=1}^{N} |t mod N⟩⟨t−1|` on the clock.
pub fn shift_operator(n: usize) -> ComplexOperator {
    let mat = DMatrix::from_fn(n, n, |r, c_| if r == (c_ + 1) % n { C64::ONE } else { C64::ZERO });
    ComplexOperator::square(mat, vec![n]).expect("square by construction")
}

/// Factorizes `𝒰 = U ⊗ V` for a constant Hamiltonian whose spectrum
/// satisfies `U^N = 1`, i.e. `E_k ∈ (2π/N)·ℤ` within the cyclicity
/// tolerance. Returns the verified clock operators as well.
pub fn cyclic_factorization(
    energies: &[f64],
    basis: &DMatrix<C64>,
    n: usize,
) -> Result<CyclicFactorization> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    for &e in energies {
        let dev = (C64::from_polar(1.0, -e * n as f64) - C64::ONE).norm();
        if dev > tol::CYCLIC {
            return Err(Error::NotCyclic(format!(
                "e^(-iEN) deviates from 1 by {dev:.3e} at E = {e}"
            )));
        }
    }
    let u = unitary_from_spectrum(energies, basis, 1)?;
    let v = shift_operator(n);
    let t_mat = DMatrix::from_fn(n, n, |r, c_| {
        if r == c_ {
            C64::new(r as f64, 0.0)
        } else {
            C64::ZERO
        }
    });
    let t_op = ComplexOperator::square(t_mat, vec![n])?;
    let f = fourier_matrix(n);
    let p_diag = DMatrix::from_fn(n, n, |r, c_| {
        if r == c_ {
            C64::new(2.0 * PI * r as f64 / n as f64, 0.0)
        } else {
            C64::ZERO
        }
    });
    let p = ComplexOperator::square(&f * p_diag * f.adjoint(), vec![n])?;

    // verify 𝒰 = U ⊗ V against the schedule-built translation operator
    let schedule = UnitarySchedule::constant_hamiltonian(energies.to_vec(), basis.clone(), n)?;
    let su = build_superoperator(&schedule)?;
    let residual = su.op.sub(&u.kron(&v)).max_abs();
    if residual > 1e-10 {
        return Err(Error::NotCyclic(format!(
            "factorization residual {residual:.3e}"
        )));
    }
    // and V = e^{−iP}
    let v_exp = exp_minus_i_hermitian(&p)?;
    let vres = v_exp.sub(&v).max_abs();
    if vres > tol::EIG {
        return Err(Error::NotCyclic(format!("V = exp(-iP) residual {vres:.3e}")));
    }
    Ok(CyclicFactorization { u, v, t_op, p })
}

/// Residual `‖𝒰|Ψ⟩ − |Ψ⟩‖` of the invariance relation.
pub fn invariance_residual(su: &SuperOperator, hs: &HistoryState) -> Result<f64> {
    let out = su.op.apply(hs.joint())?;
    Ok(out.sub(hs.joint()).norm())
}
