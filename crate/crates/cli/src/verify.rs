//! `histate verify`: reruns the cross-check suite end to end. Each check
//! prints one `check <name>: ok` line; the first failure is reported on
//! standard error and the process exits with code 2.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};

use histate::entanglement::{
    periodic_reduction, permanence_profile, report, schmidt, shannon_entropy,
};
use histate::history::{build_history, simulate_circuit, UnitarySchedule};
use histate::linalg::{eigh, ComplexOperator, ComplexVector, C64};
use histate::random;
use histate::scenarios::{bloch_path, qubit_clock, small_step_expansion};
use histate::spectral::{
    cyclic_instance, majorization_check, schur_bound_check, spectral_spread,
    uncertainty_relation, verify_cyclic_equality,
};
use histate::subsystem::{concurrence_fidelity_identity, monogamy_check, qubit_complement};
use histate::translation::{build_superoperator, generator_j, hermitian_parts};
use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::output::{Field, Table};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

/// Trial counts: the full suite mirrors the acceptance gate, the fast
/// suite trims the sample sizes but touches every check.
struct Counts {
    circuit: usize,
    invariance: usize,
    cyclic: usize,
    schur: usize,
    uncertainty: usize,
    clock: usize,
    concurrence: usize,
    permanence: usize,
}

fn counts(suite: &str) -> Result<Counts, String> {
    match suite {
        "fast" => Ok(Counts {
            circuit: 10,
            invariance: 5,
            cyclic: 5,
            schur: 40,
            uncertainty: 40,
            clock: 20,
            concurrence: 20,
            permanence: 5,
        }),
        "full" | "all" => Ok(Counts {
            circuit: 50,
            invariance: 20,
            cyclic: 20,
            schur: 200,
            uncertainty: 200,
            clock: 100,
            concurrence: 100,
            permanence: 20,
        }),
        other => Err(format!("unknown suite '{other}' (expected fast, full, or all)")),
    }
}

fn check_continuous_limit(_seed: u64, _c: &Counts) -> Result<(), String> {
    for phi in [0.1, 0.5, 1.0, PI / 2.0, 2.0, PI] {
        for n in [2usize, 3, 4, 8, 16, 64] {
            // three-way 1e−9 agreement enforced inside bloch_path
            let res = bloch_path(phi, n).map_err(|e| e.to_string())?;
            ensure(
                (0.0..=1.0 + 1e-12).contains(&res.e2_n),
                format!("E2 out of range at phi {phi}, N {n}"),
            )?;
        }
    }
    let limit = bloch_path(PI / 2.0, 4).map_err(|e| e.to_string())?.e2_limit;
    ensure(
        (limit - (1.0 - 4.0 / (PI * PI))).abs() <= 1e-12,
        "limit value at phi = pi/2",
    )
}

fn check_circuit(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x01);
    for trial in 0..c.circuit {
        let m = *[2usize, 4].choose(&mut r).unwrap();
        let n_qubits = r.random_range(1..=6usize);
        let n = 1usize << n_qubits;
        let h = random::random_hermitian(m, &mut r);
        let es = eigh(&h).map_err(|e| e.to_string())?;
        let schedule = UnitarySchedule::constant_hamiltonian(es.eigenvalues, es.vectors, n)
            .map_err(|e| e.to_string())?;
        let psi0 = random::random_state(m, &mut r);
        let dense = build_history(schedule.clone(), psi0.clone()).map_err(|e| e.to_string())?;
        let circuit = simulate_circuit(schedule, psi0, n_qubits).map_err(|e| e.to_string())?;
        let overlap = circuit.joint().inner(dense.joint()).norm();
        ensure(overlap >= 1.0 - 1e-12, format!("trial {trial}: overlap {overlap}"))?;
    }
    Ok(())
}

fn check_invariance(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x02);
    for trial in 0..c.invariance {
        let m = r.random_range(2..=3usize);
        let n = r.random_range(2..=8usize);
        let steps: Vec<ComplexOperator> =
            (1..n).map(|_| random::haar_unitary(m, &mut r)).collect();
        let schedule = UnitarySchedule::explicit(steps).map_err(|e| e.to_string())?;
        let psi0 = random::random_state(m, &mut r);
        let hs = build_history(schedule.clone(), psi0).map_err(|e| e.to_string())?;

        let sup = build_superoperator(&schedule).map_err(|e| e.to_string())?;
        let res_u = sup
            .op()
            .apply(hs.joint())
            .map_err(|e| e.to_string())?
            .sub(hs.joint())
            .norm();
        ensure(res_u <= 1e-11, format!("trial {trial}: translation residual {res_u}"))?;

        let gen = generator_j(&sup).map_err(|e| e.to_string())?;
        let res_j = gen.op.apply(hs.joint()).map_err(|e| e.to_string())?.norm();
        ensure(res_j <= 1e-8, format!("trial {trial}: generator residual {res_j}"))?;

        let (u_plus, u_minus) = hermitian_parts(&sup);
        let res_p = u_plus
            .apply(hs.joint())
            .map_err(|e| e.to_string())?
            .sub(hs.joint())
            .norm();
        let res_m = u_minus.apply(hs.joint()).map_err(|e| e.to_string())?.norm();
        ensure(
            res_p <= 1e-10 && res_m <= 1e-10,
            format!("trial {trial}: hermitian parts {res_p} {res_m}"),
        )?;
    }
    Ok(())
}

fn check_cyclic_equality(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x03);
    for n in [2usize, 4, 8] {
        for trial in 0..c.cyclic {
            let coeffs: Vec<C64> = (0..n).map(|_| random::random_complex(&mut r)).collect();
            let (h, psi0) = cyclic_instance(&coeffs, 0.0).map_err(|e| e.to_string())?;
            let es = eigh(&h).map_err(|e| e.to_string())?;
            let schedule =
                UnitarySchedule::constant_hamiltonian(es.eigenvalues, es.vectors, n)
                    .map_err(|e| e.to_string())?;
            let hs = build_history(schedule, psi0.clone()).map_err(|e| e.to_string())?;
            let sd = schmidt(&hs).map_err(|e| e.to_string())?;
            let spread = spectral_spread(&h, &psi0, n, None).map_err(|e| e.to_string())?;
            let rep = verify_cyclic_equality(&spread, &hs, &sd).map_err(|e| e.to_string())?;
            ensure(
                rep.entropy_gap <= 1e-9,
                format!("N {n} trial {trial}: entropy gap {}", rep.entropy_gap),
            )?;

            // non-cyclic spectra with the same weights stay below
            for _ in 0..10 {
                let energies: Vec<f64> =
                    (0..n).map(|_| r.random_range(0.0..2.0 * PI)).collect();
                let basis = DMatrix::<C64>::identity(n, n);
                let sched = UnitarySchedule::constant_hamiltonian(energies, basis, n)
                    .map_err(|e| e.to_string())?;
                let hs2 = build_history(sched, psi0.clone()).map_err(|e| e.to_string())?;
                let e2 =
                    shannon_entropy(&schmidt(&hs2).map_err(|e| e.to_string())?.coefficients);
                ensure(
                    e2 <= spread.spread_entropy + 1e-9,
                    format!("N {n} trial {trial}: extremality {e2}"),
                )?;
            }
        }
    }
    Ok(())
}

fn check_majorization(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x04);
    for trial in 0..c.schur {
        let m = r.random_range(2..=4usize);
        let n = r.random_range(2..=8usize);
        let h = random::random_hermitian(m, &mut r);
        let psi0 = random::random_state(m, &mut r);
        let es = eigh(&h).map_err(|e| e.to_string())?;
        let schedule = UnitarySchedule::constant_hamiltonian(es.eigenvalues, es.vectors, n)
            .map_err(|e| e.to_string())?;
        let hs = build_history(schedule, psi0.clone()).map_err(|e| e.to_string())?;
        let sd = schmidt(&hs).map_err(|e| e.to_string())?;
        let spread = spectral_spread(&h, &psi0, n, None).map_err(|e| e.to_string())?;
        let maj = majorization_check(&spread, &sd);
        ensure(maj.holds, format!("trial {trial}: violation {}", maj.max_violation))?;
        let vn = schur_bound_check(&spread, &sd, |p| {
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        });
        let quad = schur_bound_check(&spread, &sd, |p| 2.0 * p * (1.0 - p));
        ensure(vn.holds && quad.holds, format!("trial {trial}: Schur bound"))?;
    }
    Ok(())
}

fn check_uncertainty(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x05);
    let mut done = 0usize;
    while done < c.uncertainty {
        let n = *[2usize, 4, 8, 16].choose(&mut r).unwrap();
        let coeffs: Vec<C64> = (0..n)
            .map(|_| {
                if r.random_bool(0.8) {
                    random::random_complex(&mut r)
                } else {
                    C64::ZERO
                }
            })
            .collect();
        if coeffs.iter().all(|z| z.norm_sqr() == 0.0) {
            continue;
        }
        let (h, psi0) = cyclic_instance(&coeffs, 0.0).map_err(|e| e.to_string())?;
        let spread = spectral_spread(&h, &psi0, n, None).map_err(|e| e.to_string())?;
        let rep = uncertainty_relation(&spread).map_err(|e| e.to_string())?;
        ensure(
            rep.entropy_sum >= (n as f64).log2() - 1e-9,
            format!("N {n}: entropy sum {}", rep.entropy_sum),
        )?;
        ensure(rep.support_product >= n, format!("N {n}: support product"))?;
        done += 1;
    }
    Ok(())
}

fn check_qubit_clock(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x06);
    for trial in 0..c.clock {
        let m = r.random_range(2..=4usize);
        let u = random::haar_unitary(m, &mut r);
        let psi0 = random::random_state(m, &mut r);
        let res = qubit_clock(&psi0, &u).map_err(|e| e.to_string())?;
        let want_r = psi0.inner(&u.apply(&psi0).map_err(|e| e.to_string())?).norm();
        ensure(
            (res.p_plus - (1.0 + want_r) / 2.0).abs() <= 1e-10,
            format!("trial {trial}: p_plus"),
        )?;
        ensure(
            (res.e2 - (1.0 - want_r * want_r)).abs() <= 1e-10,
            format!("trial {trial}: E2"),
        )?;
    }
    // two-level exact small-clock formula
    let gap = 2.2;
    let h = ComplexOperator::from_rows(
        2,
        &[C64::ZERO, C64::ZERO, C64::ZERO, C64::new(gap, 0.0)],
    )
    .map_err(|e| e.to_string())?;
    let psi0 = ComplexVector::ket_real(&[0.42f64.sqrt(), 0.58f64.sqrt()]);
    for eps in [0.15, 0.6, 1.4] {
        let (exact, _) = small_step_expansion(&h, &psi0, eps).map_err(|e| e.to_string())?;
        let want = 4.0 * (eps * gap / 2.0).sin().powi(2) * 0.42 * 0.58;
        ensure((exact - want).abs() <= 1e-10, format!("eps {eps}: two-level form"))?;
    }
    Ok(())
}

fn check_concurrence(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x07);
    for trial in 0..c.concurrence {
        let p = r.random_range(0.0..1.0);
        let u_b = random::haar_unitary(2, &mut r);
        let psi0_b = random::random_state(2, &mut r);
        let rep =
            concurrence_fidelity_identity(p, &psi0_b, &u_b).map_err(|e| e.to_string())?;
        ensure(
            rep.c_squared <= rep.e2_total + 1e-9,
            format!("trial {trial}: monogamy direction"),
        )?;

        let q = 1.0 - p;
        let comp = qubit_complement(&psi0_b).map_err(|e| e.to_string())?;
        let psi0 = ComplexVector::basis(2, 0)
            .kron(&psi0_b)
            .scaled(C64::new(p.sqrt(), 0.0))
            .add(&ComplexVector::basis(2, 1).kron(&comp).scaled(C64::new(q.sqrt(), 0.0)));
        let joint_u = ComplexOperator::identity(&[2]).kron(&u_b);
        let hs = build_history(
            UnitarySchedule::constant_unitary(joint_u, 2).map_err(|e| e.to_string())?,
            psi0,
        )
        .map_err(|e| e.to_string())?;
        let mono = monogamy_check(&hs, (2, 2)).map_err(|e| e.to_string())?;
        ensure(mono.gap >= -1e-9, format!("trial {trial}: monogamy gap {}", mono.gap))?;
    }
    Ok(())
}

fn check_periodic_reduction(seed: u64, _c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x08);
    let n = 8usize;
    for l in [2usize, 4] {
        for trial in 0..5 {
            let m = 4usize;
            let basis = random::haar_unitary(m, &mut r);
            let gamma = r.random_range(0.0..2.0 * PI / n as f64);
            let energies: Vec<f64> = (0..m)
                .map(|_| gamma + 2.0 * PI * r.random_range(0..l as i64) as f64 / l as f64)
                .collect();
            let schedule = UnitarySchedule::constant_hamiltonian(
                energies,
                basis.matrix().clone(),
                n,
            )
            .map_err(|e| e.to_string())?;
            let psi0 = random::random_state(m, &mut r);
            let hs = build_history(schedule, psi0).map_err(|e| e.to_string())?;
            let full = report(&hs).map_err(|e| e.to_string())?;
            let reduced =
                periodic_reduction(&hs, l, -gamma * l as f64).map_err(|e| e.to_string())?;
            ensure(
                (full.e_vn - reduced.e_vn).abs() <= 1e-9,
                format!("L {l} trial {trial}: entropy mismatch"),
            )?;
        }
    }
    Ok(())
}

fn check_permanence(seed: u64, c: &Counts) -> Result<(), String> {
    let mut r = rng(seed ^ 0x09);
    for trial in 0..c.permanence {
        let n = r.random_range(3..=12usize);
        let clusters = r.random_range(1..=n.min(4));
        let m = clusters.max(2);
        let mut counts = vec![1usize; clusters];
        for _ in 0..n - clusters {
            *counts.choose_mut(&mut r).unwrap() += 1;
        }
        let q = random::haar_unitary(m, &mut r);
        let mut slots: Vec<usize> = (0..clusters)
            .flat_map(|k| std::iter::repeat(k).take(counts[k]))
            .collect();
        slots.shuffle(&mut r);
        let mut steps = Vec::with_capacity(n - 1);
        for t in 1..n {
            let (from, to) = (slots[t - 1], slots[t]);
            let phase = C64::from_polar(1.0, r.random_range(0.0..2.0 * PI));
            let mut p = DMatrix::from_element(m, m, C64::ZERO);
            for i in 0..m {
                if i != from && i != to {
                    p[(i, i)] = C64::ONE;
                }
            }
            if from == to {
                p[(from, from)] = phase;
            } else {
                p[(to, from)] = phase;
                p[(from, to)] = phase.conj();
            }
            let u = q.matrix() * p * q.matrix().adjoint();
            steps.push(ComplexOperator::square(u, vec![m]).map_err(|e| e.to_string())?);
        }
        let schedule = UnitarySchedule::explicit(steps).map_err(|e| e.to_string())?;
        let psi0 =
            ComplexVector::from_dvector(q.matrix().column(slots[0]).into_owned(), vec![m])
                .map_err(|e| e.to_string())?;
        let hs = build_history(schedule, psi0).map_err(|e| e.to_string())?;

        let profile = permanence_profile(&hs, 1e-8).map_err(|e| e.to_string())?;
        let mut got: Vec<f64> = profile.iter().map(|e| e.weight).collect();
        got.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut want: Vec<f64> = counts.iter().map(|&k| k as f64 / n as f64).collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ensure(got.len() == want.len(), format!("trial {trial}: cluster count"))?;
        for (g, w) in got.iter().zip(&want) {
            ensure((g - w).abs() <= 1e-9, format!("trial {trial}: weight {g} vs {w}"))?;
        }
    }
    Ok(())
}

type Check = fn(u64, &Counts) -> Result<(), String>;

const CHECKS: &[(&str, Check)] = &[
    ("continuous-limit", check_continuous_limit),
    ("circuit-equivalence", check_circuit),
    ("invariance", check_invariance),
    ("cyclic-equality", check_cyclic_equality),
    ("majorization", check_majorization),
    ("uncertainty", check_uncertainty),
    ("qubit-clock", check_qubit_clock),
    ("concurrence", check_concurrence),
    ("periodic-reduction", check_periodic_reduction),
    ("permanence", check_permanence),
];

/// Runs the suite. On success returns a summary table; the first failing
/// check is reported by name. Library-level assertion failures surface as
/// panics, so every check runs under `catch_unwind`.
pub fn run(suite: &str, seed: u64) -> Result<Table, String> {
    let c = counts(suite)?;
    let mut table = Table::new(vec!["check", "status"]);
    table.meta("version", env!("CARGO_PKG_VERSION"));
    table.meta("mode", "verify");
    table.meta("seed", seed.to_string());
    table.meta("suite", suite.to_string());
    for (name, check) in CHECKS {
        let outcome = catch_unwind(AssertUnwindSafe(|| check(seed, &c)));
        let result = match outcome {
            Ok(r) => r,
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| payload.downcast_ref::<&str>().copied())
                    .unwrap_or("internal assertion failed");
                Err(msg.to_string())
            }
        };
        match result {
            Ok(()) => {
                eprintln!("check {name}: ok");
                table.push(vec![Field::Str((*name).to_string()), Field::Str("ok".into())]);
            }
            Err(msg) => return Err(format!("check {name}: FAIL — {msg}")),
        }
    }
    Ok(table)
}
