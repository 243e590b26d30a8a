//! One function per subcommand; each returns a fully populated table.

use std::f64::consts::PI;

use histate::entanglement::{report, schmidt, schmidt_split, shannon_entropy};
use histate::history::{build_history, simulate_circuit, UnitarySchedule};
use histate::linalg::{eigh, ComplexOperator, ComplexVector, C64};
use histate::random;
use histate::scenarios::{bloch_path, qubit_clock};
use histate::spectral::{cyclic_instance, majorization_check, spectral_spread, uncertainty_relation};
use histate::subsystem::concurrence_fidelity_identity;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::config::{
    parse_complex_list, parse_grid, parse_n_list, parse_real_list, NSpec, Params,
};
use crate::output::{Field, Table};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn base_meta(table: &mut Table, mode: &str, seed: u64) {
    table.meta("version", env!("CARGO_PKG_VERSION"));
    table.meta("mode", mode);
    table.meta("seed", seed.to_string());
    table.meta("rng", "ChaCha12 (seeded, portable)");
    table.meta(
        "tolerances",
        "norm=1e-12 herm=1e-10 eig=1e-9 rank=1e-10 generator=1e-8",
    );
}

fn parse_single_n(p: &Params, default: usize) -> Result<usize, String> {
    match &p.n {
        None => Ok(default),
        Some(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("N must be a single positive integer, got '{s}'")),
    }
}

fn parse_state(spec: &str, label: &str) -> Result<ComplexVector, String> {
    let amps = parse_complex_list(spec)?;
    let dim = amps.len();
    ComplexVector::new(amps, vec![dim])
        .and_then(|v| v.normalized())
        .map_err(|e| format!("invalid {label}: {e}"))
}

/// Hamiltonian from explicit energies (identity or seeded random basis)
/// or fully random; returns eigen-data ready for a schedule.
fn resolve_hamiltonian(
    p: &Params,
    default_m: usize,
    r: &mut ChaCha12Rng,
) -> Result<(Vec<f64>, DMatrix<C64>, ComplexOperator), String> {
    let (energies, basis) = match &p.energies {
        Some(list) => {
            let energies = parse_real_list(list)?;
            let m = energies.len();
            let basis = match p.basis.as_deref() {
                None | Some("identity") => DMatrix::<C64>::identity(m, m),
                Some("random") => random::haar_unitary(m, r).into_matrix(),
                Some(other) => return Err(format!("unknown basis '{other}'")),
            };
            (energies, basis)
        }
        None => {
            let m = p.m.unwrap_or(default_m);
            if m < 2 {
                return Err("M must be at least 2".into());
            }
            let h = random::random_hermitian(m, r);
            let es = eigh(&h).map_err(|e| e.to_string())?;
            (es.eigenvalues, es.vectors)
        }
    };
    let m = energies.len();
    let mut h = DMatrix::from_element(m, m, C64::ZERO);
    for (k, &e) in energies.iter().enumerate() {
        let v = basis.column(k);
        h += v * v.adjoint() * C64::new(e, 0.0);
    }
    let h = ComplexOperator::square(h, vec![m]).map_err(|e| e.to_string())?;
    Ok((energies, basis, h))
}

pub fn history(p: &Params, seed: u64) -> Result<Table, String> {
    let n = parse_single_n(p, 8)?;
    let mut r = rng(seed);
    let (energies, basis, _) = resolve_hamiltonian(p, 2, &mut r)?;
    let m = energies.len();
    let psi0 = match &p.psi0 {
        Some(spec) => parse_state(spec, "psi0")?,
        None => random::random_state(m, &mut r),
    };
    if psi0.len() != m {
        return Err(format!("psi0 has length {}, Hamiltonian dimension is {m}", psi0.len()));
    }
    let schedule = UnitarySchedule::constant_hamiltonian(energies, basis, n)
        .map_err(|e| e.to_string())?;
    let hs = build_history(schedule, psi0.clone()).map_err(|e| e.to_string())?;
    let rep = report(&hs).map_err(|e| e.to_string())?;

    let mut table = Table::new(vec![
        "t",
        "p_t",
        "overlap_psi0",
        "E_vn",
        "E2",
        "tau_min",
        "rank",
    ]);
    base_meta(&mut table, "history", seed);
    table.meta("N", n.to_string());
    table.meta("M", m.to_string());
    let scale = (n as f64).sqrt();
    for t in 0..n {
        let branch = hs.branch(t).map_err(|e| e.to_string())?;
        let overlap = psi0.inner(&branch).norm() * scale;
        table.push(vec![
            Field::Int(t as i64),
            Field::Num(hs.time_probability(t).map_err(|e| e.to_string())?),
            Field::Num(overlap),
            Field::Num(rep.e_vn),
            Field::Num(rep.e2),
            Field::Num(rep.tau_min),
            Field::Int(rep.rank as i64),
        ]);
    }
    Ok(table)
}

pub fn circuit(p: &Params, seed: u64) -> Result<Table, String> {
    let n_qubits = p.n_qubits.unwrap_or(3);
    if !(1..=20).contains(&n_qubits) {
        return Err(format!("n_qubits must be in 1..=20, got {n_qubits}"));
    }
    let n = 1usize << n_qubits;
    let mut r = rng(seed);
    let (energies, basis, _) = resolve_hamiltonian(p, 2, &mut r)?;
    let m = energies.len();
    let psi0 = match &p.psi0 {
        Some(spec) => parse_state(spec, "psi0")?,
        None => random::random_state(m, &mut r),
    };
    let schedule = UnitarySchedule::constant_hamiltonian(energies, basis, n)
        .map_err(|e| e.to_string())?;
    let dense = build_history(schedule.clone(), psi0.clone()).map_err(|e| e.to_string())?;
    let circ = simulate_circuit(schedule, psi0, n_qubits).map_err(|e| e.to_string())?;
    let overlap = circ.joint().inner(dense.joint()).norm();

    let mut table = Table::new(vec!["n_qubits", "N", "M", "overlap"]);
    base_meta(&mut table, "circuit", seed);
    table.push(vec![
        Field::Int(n_qubits as i64),
        Field::Int(n as i64),
        Field::Int(m as i64),
        Field::Num(overlap),
    ]);
    Ok(table)
}

fn y_rotation(theta: f64) -> ComplexOperator {
    let (c, s) = (theta.cos(), theta.sin());
    ComplexOperator::from_rows(
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    )
    .expect("2x2 entries")
}

pub fn qubit_clock_mode(p: &Params, seed: u64) -> Result<Table, String> {
    let mut r = rng(seed);
    let psi0 = match &p.psi0 {
        Some(spec) => parse_state(spec, "psi0")?,
        None => ComplexVector::basis(p.m.unwrap_or(2), 0),
    };
    let m = psi0.len();
    let u = match p.u.as_deref().unwrap_or("random") {
        "identity" => ComplexOperator::identity(&[m]),
        "x" => {
            if m != 2 {
                return Err("U = x requires a qubit".into());
            }
            ComplexOperator::from_rows(2, &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
                .expect("2x2 entries")
        }
        "random" => random::haar_unitary(m, &mut r),
        spec => match spec.strip_prefix("ry:") {
            Some(theta) if m == 2 => {
                let theta: f64 =
                    theta.parse().map_err(|_| format!("bad rotation angle '{theta}'"))?;
                y_rotation(theta)
            }
            Some(_) => return Err("U = ry:<theta> requires a qubit".into()),
            None => return Err(format!("unknown U '{spec}'")),
        },
    };
    let res = qubit_clock(&psi0, &u).map_err(|e| e.to_string())?;

    let mut table =
        Table::new(vec!["r", "p_plus", "p_minus", "E_vn", "E2", "gamma_phase"]);
    base_meta(&mut table, "qubit-clock", seed);
    table.meta("M", m.to_string());
    table.push(vec![
        Field::Num(res.overlap_r),
        Field::Num(res.p_plus),
        Field::Num(res.p_minus),
        Field::Num(res.e_vn),
        Field::Num(res.e2),
        Field::Num(res.gamma_phase),
    ]);
    Ok(table)
}

/// Dense E₂ of the Bloch-path history state via the Schmidt spectrum.
fn bloch_dense_e2(phi: f64, n: usize) -> Result<f64, String> {
    let x = phi / (n - 1) as f64;
    let scale = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![C64::ZERO; 2 * n];
    for t in 0..n {
        amps[t] = C64::new((x * t as f64).cos(), 0.0) * scale;
        amps[n + t] = C64::new((x * t as f64).sin(), 0.0) * scale;
    }
    let joint = ComplexVector::new(amps, vec![2, n]).map_err(|e| e.to_string())?;
    let sd = schmidt_split(&joint, 1).map_err(|e| e.to_string())?;
    Ok(2.0 * (1.0 - sd.coefficients.iter().map(|p| p * p).sum::<f64>()))
}

pub fn bloch_path_mode(p: &Params, seed: u64) -> Result<Table, String> {
    let phis = match (&p.phi_grid, p.phi) {
        (Some(grid), _) => parse_grid(grid)?,
        (None, Some(single)) => vec![single],
        (None, None) => return Err("bloch-path needs phi or phi_grid".into()),
    };
    let ns = match &p.n {
        Some(list) => parse_n_list(list)?,
        None => vec![
            NSpec::Finite(2),
            NSpec::Finite(4),
            NSpec::Finite(16),
            NSpec::Finite(64),
            NSpec::Inf,
        ],
    };
    for n in &ns {
        if let NSpec::Finite(n) = n {
            if *n < 2 {
                return Err(format!("N must be at least 2, got {n}"));
            }
        }
    }

    // grid points evaluate in parallel; rows emit in grid order
    let points: Vec<(f64, NSpec)> = phis
        .iter()
        .flat_map(|&phi| ns.iter().map(move |&n| (phi, n)))
        .collect();
    let rows: Vec<Vec<Field>> = points
        .par_iter()
        .map(|&(phi, nspec)| -> Result<Vec<Field>, String> {
            match nspec {
                NSpec::Finite(n) => {
                    let res = bloch_path(phi, n).map_err(|e| e.to_string())?;
                    let dense = bloch_dense_e2(phi, n)?;
                    Ok(vec![
                        Field::Num(phi),
                        Field::Str(n.to_string()),
                        Field::Num(res.e2_n),
                        Field::Num(dense),
                        Field::Num((res.e2_n - dense).abs()),
                    ])
                }
                NSpec::Inf => {
                    let limit =
                        if phi == 0.0 { 0.0 } else { 1.0 - (phi.sin() / phi).powi(2) };
                    Ok(vec![
                        Field::Num(phi),
                        Field::Str("inf".to_string()),
                        Field::Num(limit),
                        Field::Empty,
                        Field::Empty,
                    ])
                }
            }
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(vec!["phi", "N", "E2_closed", "E2_dense", "abs_diff"]);
    base_meta(&mut table, "bloch-path", seed);
    table.meta("rows", rows.len().to_string());
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn spectrum(p: &Params, seed: u64) -> Result<Table, String> {
    let n = parse_single_n(p, 8)?;
    let mut r = rng(seed);
    let (energies, basis, h) = resolve_hamiltonian(p, 3, &mut r)?;
    let m = energies.len();
    let psi0 = match &p.psi0 {
        Some(spec) => parse_state(spec, "psi0")?,
        None => random::random_state(m, &mut r),
    };
    if psi0.len() != m {
        return Err(format!("psi0 has length {}, Hamiltonian dimension is {m}", psi0.len()));
    }
    let spread = spectral_spread(&h, &psi0, n, None).map_err(|e| e.to_string())?;
    let schedule = UnitarySchedule::constant_hamiltonian(energies, basis, n)
        .map_err(|e| e.to_string())?;
    let hs = build_history(schedule, psi0).map_err(|e| e.to_string())?;
    let sd = schmidt(&hs).map_err(|e| e.to_string())?;
    let e_st = shannon_entropy(&sd.coefficients);
    let maj = majorization_check(&spread, &sd);

    let mut table = Table::new(vec![
        "k",
        "energy",
        "weight",
        "spread_entropy",
        "E_vn",
        "majorization_violation",
        "cyclic",
    ]);
    base_meta(&mut table, "spectrum", seed);
    table.meta("N", n.to_string());
    table.meta("M", m.to_string());
    let cyclic = i64::from(spread.grid.is_some());
    for (k, (&e, w)) in spread.energies.iter().zip(spread.weights()).enumerate() {
        table.push(vec![
            Field::Int(k as i64),
            Field::Num(e),
            Field::Num(w),
            Field::Num(spread.spread_entropy),
            Field::Num(e_st),
            Field::Num(maj.max_violation.max(0.0)),
            Field::Int(cyclic),
        ]);
    }
    Ok(table)
}

pub fn uncertainty(p: &Params, seed: u64) -> Result<Table, String> {
    let (c, n) = match &p.c {
        Some(list) => {
            let c = parse_complex_list(list)?;
            let n = c.len();
            (c, n)
        }
        None => {
            let n = parse_single_n(p, 8)?;
            let mut r = rng(seed);
            let v = random::random_state(n, &mut r);
            ((0..n).map(|k| v.amp(k)).collect(), n)
        }
    };
    if n < 1 {
        return Err("empty coefficient list".into());
    }
    let (h, psi0) = cyclic_instance(&c, 0.0).map_err(|e| e.to_string())?;
    let spread = spectral_spread(&h, &psi0, n, None).map_err(|e| e.to_string())?;
    let rep = uncertainty_relation(&spread).map_err(|e| e.to_string())?;
    let energy_w = spread.grid_coefficients().expect("cyclic by construction");
    let time_w = &spread.conjugate.as_ref().expect("cyclic by construction").coefficients;

    let mut table = Table::new(vec![
        "l",
        "energy_weight",
        "time_weight",
        "E",
        "E_tilde",
        "entropy_sum",
        "log2_N",
        "support_product",
    ]);
    base_meta(&mut table, "uncertainty", seed);
    table.meta("N", n.to_string());
    for l in 0..n {
        table.push(vec![
            Field::Int(l as i64),
            Field::Num(energy_w[l].norm_sqr()),
            Field::Num(time_w[l].norm_sqr()),
            Field::Num(rep.energy_entropy),
            Field::Num(rep.time_entropy),
            Field::Num(rep.entropy_sum),
            Field::Num((n as f64).log2()),
            Field::Int(rep.support_product as i64),
        ]);
    }
    Ok(table)
}

pub fn subsystem(p: &Params, seed: u64) -> Result<Table, String> {
    let weight = p.p.unwrap_or(0.8);
    if !(0.0..=1.0).contains(&weight) {
        return Err(format!("p must lie in [0, 1], got {weight}"));
    }
    let psi0_b = match &p.psi0_b {
        Some(spec) => parse_state(spec, "psi0_b")?,
        None => ComplexVector::basis(2, 0),
    };
    if psi0_b.len() != 2 {
        return Err("psi0_b must be a qubit state (two amplitudes)".into());
    }
    let mut r = rng(seed);
    let u_b = match p.u.as_deref() {
        Some("random") => random::haar_unitary(2, &mut r),
        Some(other) => return Err(format!("unknown U '{other}' (expected random)")),
        None => y_rotation(p.theta.unwrap_or(PI / 3.0)),
    };
    let rep = concurrence_fidelity_identity(weight, &psi0_b, &u_b).map_err(|e| e.to_string())?;

    let mut table = Table::new(vec![
        "p",
        "C",
        "C_squared",
        "fidelity_F",
        "E2_total",
        "monogamy_gap",
    ]);
    base_meta(&mut table, "subsystem", seed);
    table.push(vec![
        Field::Num(weight),
        Field::Num(rep.c),
        Field::Num(rep.c_squared),
        Field::Num(rep.fidelity_f),
        Field::Num(rep.e2_total),
        Field::Num(rep.e2_total - rep.c_squared),
    ]);
    Ok(table)
}
