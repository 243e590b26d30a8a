//! History-state construction and circuit simulation.
//!
//! A history state is the joint system-clock vector
//! `|Ψ⟩ = N^{-1/2} Σ_t U_t|ψ₀⟩ ⊗ |t⟩` for a schedule of unitaries `U_t`
//! with `U_0 = 1`. For constant generators the same state is produced by
//! the first stage of the phase-estimation circuit: Hadamards on `n` time
//! qubits followed by controlled `U^{2^{j-1}}` gates, simulated here by
//! bit-indexed statevector updates (no full joint matrices).

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::linalg::{unitary_from_spectrum, ComplexOperator, ComplexVector, C64};


/// A schedule of system unitaries over `N` clock ticks.
#[derive(Debug, Clone)]
pub enum ScheduleKind {
    /// The `N−1` step unitaries `U_{t,t−1}` for `t = 1..N−1` (`U_0 = 1`).
    Explicit(Vec<ComplexOperator>),
    /// Constant step: `U_t = U^t`.
    ConstantUnitary(ComplexOperator),
    /// Constant Hamiltonian given by its spectrum: `U_t = e^{−iHt}`.
    ConstantHamiltonian { energies: Vec<f64>, basis: DMatrix<C64> },
}

#[derive(Debug, Clone)]
pub struct UnitarySchedule {
    kind: ScheduleKind,
    n: usize,
}

impl UnitarySchedule {
    pub fn explicit(steps: Vec<ComplexOperator>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::BadN(1));
        }
        let dim = steps[0].dim_in();
        for (i, s) in steps.iter().enumerate() {
            if s.dim_in() != dim || s.dim_out() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "step {} has shape {}x{}, expected {dim}x{dim}",
                    i + 1,
                    s.dim_out(),
                    s.dim_in()
                )));
            }
            if !s.is_unitary() {
                return Err(Error::NonUnitaryStep(i + 1));
            }
        }
        let n = steps.len() + 1;
        Ok(Self { kind: ScheduleKind::Explicit(steps), n })
    }

    pub fn constant_unitary(u: ComplexOperator, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::BadN(n));
        }
        if !u.is_unitary() {
            return Err(Error::NonUnitary);
        }
        Ok(Self { kind: ScheduleKind::ConstantUnitary(u), n })
    }

    pub fn constant_hamiltonian(energies: Vec<f64>, basis: DMatrix<C64>, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::BadN(n));
        }
        // delegate the orthonormality check
        let _ = unitary_from_spectrum(&energies, &basis, 0)?;
        Ok(Self { kind: ScheduleKind::ConstantHamiltonian { energies, basis }, n })
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    /// Clock dimension `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system_dim(&self) -> usize {
        match &self.kind {
            ScheduleKind::Explicit(steps) => steps[0].dim_in(),
            ScheduleKind::ConstantUnitary(u) => u.dim_in(),
            ScheduleKind::ConstantHamiltonian { basis, .. } => basis.nrows(),
        }
    }

    /// The step unitary `U_{t,t−1}` for `t = 1..=N`. `t = N` is the
    /// synthesized cyclic closing step `U_{N,N−1} = U_{N−1}†`.
    pub fn step_unitary(&self, t: usize) -> Result<ComplexOperator> {
        if t < 1 || t > self.n {
            return Err(Error::TimeOutOfRange { t, n: self.n });
        }
        match &self.kind {
            ScheduleKind::Explicit(steps) => {
                if t < self.n {
                    Ok(steps[t - 1].clone())
                } else {
                    Ok(self.cumulative(self.n - 1)?.dagger())
                }
            }
            ScheduleKind::ConstantUnitary(u) => {
                if t < self.n {
                    Ok(u.clone())
                } else {
                    Ok(u.pow((self.n - 1) as u64).dagger())
                }
            }
            ScheduleKind::ConstantHamiltonian { energies, basis } => {
                let steps = if t < self.n { 1 } else { -((self.n as i64) - 1) };
                unitary_from_spectrum(energies, basis, steps)
            }
        }
    }

    /// Cumulative `U_t` for `t = 0..N−1` (left-to-right product of steps).
    pub fn cumulative(&self, t: usize) -> Result<ComplexOperator> {
        if t >= self.n {
            return Err(Error::TimeOutOfRange { t, n: self.n });
        }
        match &self.kind {
            ScheduleKind::Explicit(steps) => {
                let mut u = ComplexOperator::identity(&[self.system_dim()]);
                for s in steps.iter().take(t) {
                    u = s.compose(&u)?;
                }
                Ok(u)
            }
            ScheduleKind::ConstantUnitary(u) => Ok(u.pow(t as u64)),
            ScheduleKind::ConstantHamiltonian { energies, basis } => {
                unitary_from_spectrum(energies, basis, t as i64)
            }
        }
    }

    /// All branch states `|ψ_t⟩ = U_t|ψ₀⟩`, computed sequentially.
    pub fn evolved_states(&self, psi0: &ComplexVector) -> Result<Vec<ComplexVector>> {
        if psi0.len() != self.system_dim() {
            return Err(Error::DimensionMismatch(format!(
                "initial state of length {} for system dimension {}",
                psi0.len(),
                self.system_dim()
            )));
        }
        let mut out = Vec::with_capacity(self.n);
        let mut cur = psi0.clone();
        out.push(cur.clone());
        for t in 1..self.n {
            cur = self.step_unitary(t)?.apply(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// Binary time register for the circuit path: `N = 2^n`,
/// `t = Σ_j t_j 2^{j−1}` with qubit `j` holding bit `t_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeRegister {
    pub n_qubits: usize,
}

impl TimeRegister {
    pub fn for_dimension(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        Ok(Self { n_qubits: n.trailing_zeros() as usize })
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }
}

/// The joint S⊗T pure state with its construction metadata.
#[derive(Debug, Clone)]
pub struct HistoryState {
    joint: ComplexVector,
    schedule: UnitarySchedule,
    psi0: ComplexVector,
}

impl HistoryState {
    pub fn joint(&self) -> &ComplexVector {
        &self.joint
    }

    pub fn schedule(&self) -> &UnitarySchedule {
        &self.schedule
    }

    pub fn psi0(&self) -> &ComplexVector {
        &self.psi0
    }

    /// Clock dimension `N`.
    pub fn n(&self) -> usize {
        self.schedule.n()
    }

    /// System dimension `M`.
    pub fn system_dim(&self) -> usize {
        self.schedule.system_dim()
    }

    /// Unnormalized branch `⟨t|Ψ⟩` (norm `N^{−1/2}` for a valid state).
    pub fn branch(&self, t: usize) -> Result<ComplexVector> {
        let (m, n) = (self.system_dim(), self.n());
        if t >= n {
            return Err(Error::TimeOutOfRange { t, n });
        }
        let amps: Vec<C64> = (0..m).map(|s| self.joint.amp(s * n + t)).collect();
        ComplexVector::new(amps, vec![m])
    }

    /// Probability of clock outcome `t` (equals `1/N` for a valid state).
    pub fn time_probability(&self, t: usize) -> Result<f64> {
        Ok(self.branch(t)?.norm().powi(2))
    }
}

/// Dense construction of the history state `N^{−1/2} Σ_t U_t|ψ₀⟩ ⊗ |t⟩`.
pub fn build_history(schedule: UnitarySchedule, psi0: ComplexVector) -> Result<HistoryState> {
    psi0.assert_normalized()?;
    let branches = schedule.evolved_states(&psi0)?;
    let (m, n) = (schedule.system_dim(), schedule.n());
    let w = 1.0 / (n as f64).sqrt();
    let mut amps = vec![C64::ZERO; m * n];
    for (t, b) in branches.iter().enumerate() {
        for s in 0..m {
            amps[s * n + t] = b.amp(s) * w;
        }
    }
    let joint = ComplexVector::new(amps, vec![m, n])?;
    Ok(HistoryState { joint, schedule, psi0 })
}

/// Conditional system state after a clock measurement with result `t`,
/// returned normalized with the first nonzero amplitude real-positive.
pub fn condition_on_time(hs: &HistoryState, t: usize) -> Result<ComplexVector> {
    Ok(hs.branch(t)?.normalized()?.canonical_phase())
}

/// Gate-level simulation of the constant-generator circuit over `n` time
/// qubits: Hadamards on the time register, then controlled `U^{2^{j−1}}`
/// from qubit `j` onto the system, all as bit-indexed statevector updates.
pub fn simulate_circuit(
    schedule: UnitarySchedule,
    psi0: ComplexVector,
    n_qubits: usize,
) -> Result<HistoryState> {
    if n_qubits < 1 {
        return Err(Error::BadN(0));
    }
    let n = 1usize << n_qubits;
    if schedule.n() != n {
        return Err(Error::NotPowerOfTwo(schedule.n()));
    }
    let base = match schedule.kind() {
        ScheduleKind::ConstantUnitary(u) => u.clone(),
        ScheduleKind::ConstantHamiltonian { energies, basis } => {
            unitary_from_spectrum(energies, basis, 1)?
        }
        ScheduleKind::Explicit(_) => {
            return Err(Error::Unsupported(
                "circuit simulation requires a constant generator".into(),
            ))
        }
    };
    psi0.assert_normalized()?;
    let m = schedule.system_dim();
    if psi0.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "initial state of length {} for system dimension {m}",
            psi0.len()
        )));
    }

    // |ψ₀⟩ ⊗ |0⟩^⊗n, indexed as s·N + t with S slowest
    let mut a = vec![C64::ZERO; m * n];
    for s in 0..m {
        a[s * n] = psi0.amp(s);
    }

    // Hadamard on every time qubit
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..n_qubits {
        let mask = 1usize << b;
        for s in 0..m {
            for t in 0..n {
                if t & mask == 0 {
                    let i0 = s * n + t;
                    let i1 = s * n + (t | mask);
                    let (x, y) = (a[i0], a[i1]);
                    a[i0] = (x + y) * h;
                    a[i1] = (x - y) * h;
                }
            }
        }
    }

    // controlled U^{2^{j−1}} from time qubit j onto the system factor
    let mut w = base;
    for b in 0..n_qubits {
        for t in 0..n {
            if t & (1 << b) != 0 {
                let mut x = vec![C64::ZERO; m];
                for s in 0..m {
                    x[s] = a[s * n + t];
                }
                for s in 0..m {
                    let mut acc = C64::ZERO;
                    for sp in 0..m {
                        acc += w.matrix()[(s, sp)] * x[sp];
                    }
                    a[s * n + t] = acc;
                }
            }
        }
        if b + 1 < n_qubits {
            w = w.compose(&w)?;
        }
    }

    let joint = ComplexVector::new(a, vec![m, n])?;
    Ok(HistoryState { joint, schedule, psi0 })
}

/// Measure the clock register: draws `t` (uniform for a valid history
/// state) with a seeded portable generator and returns the collapsed
/// system state. Deterministic for a fixed seed.
pub fn measure_time_register(hs: &HistoryState, rng_seed: u64) -> Result<(usize, ComplexVector)> {
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    let u: f64 = rng.random();
    let n = hs.n();
    let mut acc = 0.0;
    let mut t = n - 1;
    for cand in 0..n {
        acc += hs.time_probability(cand)?;
        if u < acc {
            t = cand;
            break;
        }
    }
    Ok((t, condition_on_time(hs, t)?))
}
