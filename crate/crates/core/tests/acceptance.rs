//! Acceptance suite: one PASS/FAIL line per criterion, tolerances and
//! runtime limits pinned. Run with `--nocapture` to see the table.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use common::{bit_reversed_dft, collective, collective_exp, max_diff, phase_dev, phase_on};
use dfsqft::dfs::{
    eta_max, max_dfs_dimension, max_dfs_dimension_closed_form, min_physical_qubits, Ratio,
};
use dfsqft::encoding::scd::{self, TransformSource};
use dfsqft::encoding::wcd;
use dfsqft::encoding::{logical_basis, logical_bits, registry, synth_encoded_qft, Encoding};
use dfsqft::noise::{Granularity, NoiseExperiment, NoisePolicy, RunReport};
use dfsqft::qft::{resolve_output_order, synth_qft, OutputOrder};
use dfsqft::unitary::{circuit_unitary, restrict, restrict_circuit};
use dfsqft::{Circuit, CollectiveModel, Gate, StateVector, C64};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Name, check, runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn state_dev(a: &StateVector, b: &[C64]) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `sum_l c_l |l_L>` as physical amplitudes.
fn encode(enc: &dyn Encoding, coeffs: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); 1 << (enc.physical_per_logical() * n)];
    for (l, c) in coeffs.iter().enumerate() {
        let s = enc.logical_state(&logical_bits(l, n)).unwrap();
        for (o, a) in out.iter_mut().zip(s.amplitudes()) {
            *o += c * a;
        }
    }
    out
}

fn c1_wcd_hadamard() -> Outcome {
    let enc = registry().get("wcd").unwrap();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let (mut dev, mut leak) = (0.0f64, 0.0f64);
    for n in 1..=3 {
        let basis = logical_basis(enc, n).unwrap();
        for k in 1..=n {
            let circ = wcd::wcd_hadamard(k, n).unwrap();
            leak = leak.max(restrict_circuit(&circ, &basis).unwrap().leakage);
            for l in 0..1usize << n {
                let out = basis.vectors()[l].apply_circuit(&circ).unwrap();
                let bit = 1 << (k - 1);
                let mut e = vec![C64::new(0.0, 0.0); 1 << n];
                e[l & !bit] = h;
                e[l | bit] = if l & bit == 0 { h } else { -h };
                dev = dev.max(state_dev(&out, &encode(enc, &e, n)));
            }
        }
    }
    outcome(
        dev < TOL && leak < TOL,
        format!("deviation {dev:.2e}, leakage {leak:.2e}"),
    )
}

fn c2_wcd_phase() -> Outcome {
    let enc = registry().get("wcd").unwrap();
    let (mut dev, mut leak) = (0.0f64, 0.0f64);
    for n in 2..=3 {
        let basis = logical_basis(enc, n).unwrap();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for theta in [PI / 2.0, PI / 4.0, PI / 8.0] {
                    let circ = wcd::wcd_phase(i, j, theta, n).unwrap();
                    leak = leak.max(restrict_circuit(&circ, &basis).unwrap().leakage);
                    for l in 0..1usize << n {
                        let out = basis.vectors()[l].apply_circuit(&circ).unwrap();
                        let both = (l >> (i - 1)) & (l >> (j - 1)) & 1 == 1;
                        let mut e = vec![C64::new(0.0, 0.0); 1 << n];
                        e[l] = if both {
                            C64::from_polar(1.0, theta)
                        } else {
                            C64::new(1.0, 0.0)
                        };
                        dev = dev.max(state_dev(&out, &encode(enc, &e, n)));
                    }
                }
            }
        }
    }
    outcome(
        dev < TOL && leak < TOL,
        format!("deviation {dev:.2e}, leakage {leak:.2e}"),
    )
}

fn c3_conjugation_identities() -> Outcome {
    let mut dev = 0.0f64;
    for n in 1..=3 {
        let u = wcd::wcd_encoder_circuit(n).unwrap();
        let mut cmp = |gate: &Circuit, inner: Gate| {
            let lhs = circuit_unitary(gate, 2 * n).unwrap();
            let conj = wcd::conjugate(&u, &Circuit::from_gates(2 * n, [inner]).unwrap()).unwrap();
            let rhs = circuit_unitary(&conj, 2 * n).unwrap();
            dev = dev.max(lhs.max_deviation(&rhs).unwrap());
        };
        for k in 1..=n {
            cmp(&wcd::wcd_hadamard(k, n).unwrap(), Gate::h(2 * k));
        }
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for theta in [PI / 2.0, PI / 4.0, PI / 8.0] {
                    cmp(
                        &wcd::wcd_phase(i, j, theta, n).unwrap(),
                        Gate::p(2 * i, 2 * j, theta),
                    );
                }
            }
        }
    }
    outcome(
        dev < TOL,
        format!("max matrix deviation {dev:.2e} (up to 64-dim)"),
    )
}

fn encoded_qft(name: &str, ns: &[usize]) -> Outcome {
    let enc = registry().get(name).unwrap();
    let (mut dev, mut leak) = (0.0f64, 0.0f64);
    for &n in ns {
        let basis = logical_basis(enc, n).unwrap();
        let r = restrict_circuit(&synth_encoded_qft(enc, n).unwrap().circuit, &basis).unwrap();
        dev = dev.max(phase_dev(&bit_reversed_dft(n), &r.block));
        leak = leak.max(r.leakage);
    }
    outcome(
        dev < TOL && leak < TOL,
        format!("n={ns:?}: deviation {dev:.2e}, leakage {leak:.2e}"),
    )
}

fn c4_wcd_qft() -> Outcome {
    encoded_qft("wcd", &[1, 2, 3])
}

fn c5_scd_states() -> Outcome {
    let z = scd::scd_logical_state("0").unwrap();
    let o = scd::scd_logical_state("1").unwrap();
    let gram = z
        .inner(&o)
        .unwrap()
        .norm()
        .max((z.norm() - 1.0).abs())
        .max((o.norm() - 1.0).abs());
    let vz = DVector::from_column_slice(z.amplitudes());
    let vo = DVector::from_column_slice(o.amplitudes());
    let annihilation = (0..3)
        .flat_map(|a| {
            let s = collective(4, a);
            [(&s * &vz).norm(), (&s * &vo).norm()]
        })
        .fold(0.0, f64::max);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let u = collective_exp(4, [(); 3].map(|_| rng.random_range(0.0..2.0 * PI)));
        for v in [&vz, &vo] {
            worst = worst.max(1.0 - v.dotc(&(&u * v)).norm_sqr());
        }
    }
    outcome(
        gram < NORM_TOL && annihilation < TOL && worst <= TOL,
        format!("gram {gram:.2e}, annihilation {annihilation:.2e}, 1-F {worst:.2e}"),
    )
}

fn c6_scd_gates() -> Outcome {
    let enc = registry().get("scd").unwrap();
    let b1 = logical_basis(enc, 1).unwrap();
    let b2 = logical_basis(enc, 2).unwrap();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let hmat = nalgebra::DMatrix::from_row_slice(2, 2, &[h, h, h, -h]);

    let fh = restrict(&scd::fallback_hadamard_matrix(1, 1).unwrap(), &b1).unwrap();
    let mut fb_dev = max_diff(&fh.block, &hmat);
    let mut fb_leak = fh.leakage;
    for (i, j) in [(1, 2), (2, 1)] {
        for theta in [PI / 2.0, PI / 4.0, PI / 8.0] {
            let r = restrict(&scd::fallback_phase_matrix(i, j, theta, 2).unwrap(), &b2).unwrap();
            fb_dev = fb_dev.max(max_diff(&r.block, &phase_on(i, j, theta, 2)));
            fb_leak = fb_leak.max(r.leakage);
        }
    }
    let fallback_ok = fb_dev < TOL
        && fb_leak < TOL
        && scd::scd_transform_matrix(2, TransformSource::Fallback)
            .unwrap()
            .unitarity_deviation()
            < TOL;

    let report = scd::convention_report().unwrap();
    // the gate sequence must pass, or the resolver must say why not
    let seq_dev = report.selected.map(|_| {
        let sh = restrict_circuit(&scd::scd_hadamard(1, 1).unwrap(), &b1).unwrap();
        let mut d = max_diff(&sh.block, &hmat).max(sh.leakage);
        for theta in [PI / 2.0, PI / 4.0, PI / 8.0] {
            let r = restrict_circuit(&scd::scd_phase(2, 1, theta, 2).unwrap(), &b2).unwrap();
            d = d
                .max(max_diff(&r.block, &phase_on(2, 1, theta, 2)))
                .max(r.leakage);
        }
        d
    });
    let sequence_ok = seq_dev.is_some_and(|d| d < TOL) || report.erratum.is_some();
    let detail = match (&report.erratum, seq_dev) {
        (Some(e), _) => format!("fallback deviation {fb_dev:.2e}; erratum: {e}"),
        (None, Some(d)) => format!(
            "fallback deviation {fb_dev:.2e}, leakage {fb_leak:.2e}; sequence deviation {d:.2e} (as printed: {})",
            report.as_printed_passed
        ),
        (None, None) => "no convention selected and no erratum".to_string(),
    };
    outcome(fallback_ok && sequence_ok, detail)
}

fn c7_scd_qft() -> Outcome {
    encoded_qft("scd", &[2])
}

fn headline_arm(enc: &dyn Encoding, n: usize, model: CollectiveModel, seed: u64) -> RunReport {
    let qft = synth_encoded_qft(enc, n).unwrap();
    let basis = enc.model().map(|_| logical_basis(enc, n).unwrap());
    let input = enc.logical_state(&"0".repeat(n)).unwrap();
    let ideal = input.apply_circuit(&qft.circuit).unwrap();
    NoiseExperiment {
        circuit: &qft.circuit,
        input: &input,
        ideal_output: &ideal,
        model,
        boundaries: &qft.boundaries,
        code_space: basis.as_ref(),
    }
    .run(&NoisePolicy::new(Granularity::PerLogicalBlock, 200, seed))
    .unwrap()
}

fn c8_noise_headline() -> Outcome {
    let plain = registry().get("plain").unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, n) in [("wcd", 3), ("scd", 2)] {
        let enc = registry().get(name).unwrap();
        let model = enc.model().unwrap();
        let encoded = headline_arm(enc, n, model, 7);
        let unencoded = headline_arm(plain, n, model, 7);
        let repeat = headline_arm(enc, n, model, 7) == encoded
            && headline_arm(plain, n, model, 7) == unencoded;
        ok &= encoded.mean_fidelity >= 1.0 - TOL && unencoded.mean_fidelity < 0.99 && repeat;
        parts.push(format!(
            "{name} n={n}: encoded {:.12}, plain {:.4}, deterministic {repeat}",
            encoded.mean_fidelity, unencoded.mean_fidelity
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c9_efficiency() -> Outcome {
    use CollectiveModel::{Scd, Wcd};
    let eta_ok = eta_max(2, Wcd).unwrap() == Ratio::new(1, 2)
        && eta_max(4, Scd).unwrap() == Ratio::new(1, 4);
    let r_wcd = min_physical_qubits(1, Wcd).unwrap();
    let r_scd = min_physical_qubits(1, Scd).unwrap();
    let mut agree = true;
    for n in (2..=8).step_by(2) {
        for m in [Wcd, Scd] {
            agree &= max_dfs_dimension(n, m).ok() == Some(max_dfs_dimension_closed_form(n, m));
        }
    }
    outcome(
        eta_ok && r_wcd == 2 && r_scd == 4 && agree,
        format!(
            "eta wcd(2)={} scd(4)={}, r wcd={r_wcd} scd={r_scd}, brute force = closed form for even n<=8: {agree}",
            eta_max(2, Wcd).unwrap(),
            eta_max(4, Scd).unwrap()
        ),
    )
}

fn c10_oracle_consistency() -> Outcome {
    let mut dev = 0.0f64;
    let mut orders_ok = true;
    for n in 1..=5 {
        let u = circuit_unitary(&synth_qft(n).unwrap(), n).unwrap();
        dev = dev.max(phase_dev(&bit_reversed_dft(n), u.matrix()));
        let order = resolve_output_order(n).unwrap();
        orders_ok &= n == 1 || order == OutputOrder::BitReversal;
    }
    outcome(
        dev < TOL && orders_ok,
        format!("deviation {dev:.2e}, bit-reversal order resolved"),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("WCD logical Hadamard", c1_wcd_hadamard, 1),
        ("WCD logical phase", c2_wcd_phase, 1),
        ("WCD conjugation identities", c3_conjugation_identities, 5),
        ("WCD encoded QFT", c4_wcd_qft, 5),
        ("SCD logical states", c5_scd_states, 1),
        ("SCD logical gates", c6_scd_gates, 10),
        ("SCD encoded QFT", c7_scd_qft, 10),
        ("noise robustness headline", c8_noise_headline, 30),
        ("efficiency formulas", c9_efficiency, 60),
        ("QFT oracle consistency", c10_oracle_consistency, 5),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let passed = o.passed && in_time;
        println!(
            "{} [{:>2}] {name}: {} ({:.3}s, limit {limit}s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed.as_secs_f64()
        );
        if !passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
