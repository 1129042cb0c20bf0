//! Noise channel against dense exponentials and closed-form averages.

mod common;

use std::f64::consts::PI;

use common::collective_exp;
use dfsqft::encoding::{logical_basis, registry, synth_encoded_qft};
use dfsqft::noise::{
    apply_noise, collective_unitary_dense, noisy_run, Distribution, Granularity, NoiseEvent,
    NoiseExperiment, NoisePolicy,
};
use dfsqft::qft::synth_qft;
use dfsqft::{CollectiveModel, StateVector, C64};
use nalgebra::DVector;
use proptest::prelude::*;

fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            StateVector::normalized(n, v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
                .unwrap()
        })
}

proptest! {
    #[test]
    fn factorized_matches_dense_exponential(
        s in arb_state(3),
        phis in [-7.0f64..7.0, -7.0f64..7.0, -7.0f64..7.0],
    ) {
        let out = apply_noise(&s, &NoiseEvent::new(phis.to_vec()), CollectiveModel::Scd).unwrap();
        let dense = &collective_exp(3, phis) * DVector::from_column_slice(s.amplitudes());
        let d = out.amplitudes().iter().zip(dense.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-10);

        let z = apply_noise(&s, &NoiseEvent::new(vec![phis[2]]), CollectiveModel::Wcd).unwrap();
        let lib_dense = collective_unitary_dense(3, &NoiseEvent::new(vec![phis[2]]), CollectiveModel::Wcd).unwrap();
        prop_assert!(z.max_deviation(&lib_dense.apply(&s).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn noise_preserves_norm(s in arb_state(4), phis in [-7.0f64..7.0, -7.0f64..7.0, -7.0f64..7.0]) {
        let out = apply_noise(&s, &NoiseEvent::new(phis.to_vec()), CollectiveModel::Scd).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reports_are_deterministic_and_ordered(seed in any::<u64>(), trials in 1usize..20) {
        let c = synth_qft(2).unwrap();
        let input = StateVector::from_bits("01").unwrap();
        let ideal = input.apply_circuit(&c).unwrap();
        let p = NoisePolicy::new(Granularity::PerElementaryGate, trials, seed);
        let a = noisy_run(&c, &input, &ideal, &p, CollectiveModel::Scd, &[]).unwrap();
        let b = noisy_run(&c, &input, &ideal, &p, CollectiveModel::Scd, &[]).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(0.0 <= a.min_fidelity && a.min_fidelity <= a.mean_fidelity && a.mean_fidelity <= 1.0);
        prop_assert!(a.samples.iter().enumerate().all(|(i, s)| s.trial == i));
    }
}

#[test]
fn wcd_examples() {
    let phi = 1.3;
    let e = NoiseEvent::new(vec![phi]);
    let s = StateVector::from_bits("01").unwrap();
    assert_eq!(apply_noise(&s, &e, CollectiveModel::Wcd).unwrap(), s);
    let out = apply_noise(
        &StateVector::from_bits("00").unwrap(),
        &e,
        CollectiveModel::Wcd,
    )
    .unwrap();
    assert!((out.amplitudes()[0] - C64::from_polar(1.0, -2.0 * phi)).norm() < 1e-12);
}

#[test]
fn single_qubit_mean_fidelity_matches_quadrature() {
    // H on |0>, dephasing phi after it: F = cos^2(phi); the event before H
    // is a global phase on |0>.
    let steps = 100_000;
    let quad = (0..steps)
        .map(|k| (2.0 * PI * k as f64 / steps as f64).cos().powi(2))
        .sum::<f64>()
        / steps as f64;
    let c = synth_qft(1).unwrap();
    let input = StateVector::from_bits("0").unwrap();
    let ideal = input.apply_circuit(&c).unwrap();
    let p = NoisePolicy::new(Granularity::PerElementaryGate, 4000, 99);
    let r = noisy_run(&c, &input, &ideal, &p, CollectiveModel::Wcd, &[0, 1]).unwrap();
    // standard error of cos^2 is sqrt(1/8)/sqrt(4000) ~ 0.0056
    assert!(
        (r.mean_fidelity - quad).abs() < 0.03,
        "{} vs {quad}",
        r.mean_fidelity
    );
}

#[test]
fn unencoded_qft_degrades() {
    let c = synth_qft(2).unwrap();
    let input = StateVector::from_bits("00").unwrap();
    let ideal = input.apply_circuit(&c).unwrap();
    let p = NoisePolicy::new(Granularity::PerElementaryGate, 200, 1);
    let r = noisy_run(&c, &input, &ideal, &p, CollectiveModel::Wcd, &[]).unwrap();
    assert!(r.mean_fidelity < 0.99, "{}", r.mean_fidelity);
}

#[test]
fn zero_gaussian_noise_is_identity() {
    let c = synth_qft(3).unwrap();
    let input = StateVector::from_bits("101").unwrap();
    let ideal = input.apply_circuit(&c).unwrap();
    let p = NoisePolicy::new(Granularity::PerElementaryGate, 1, 0)
        .with_distribution(Distribution::Gaussian { sigma: 0.0 });
    for model in [CollectiveModel::Wcd, CollectiveModel::Scd] {
        let r = noisy_run(&c, &input, &ideal, &p, model, &[]).unwrap();
        assert!((r.mean_fidelity - 1.0).abs() < 1e-10);
    }
}

#[test]
fn encoded_circuits_immune_at_block_boundaries() {
    for (name, n) in [("wcd", 2), ("wcd", 3), ("scd", 2)] {
        let enc = registry().get(name).unwrap();
        let qft = synth_encoded_qft(enc, n).unwrap();
        let basis = logical_basis(enc, n).unwrap();
        // a superposition input exercises relative phases
        let v: Vec<_> = basis.vectors().iter().collect();
        let input =
            StateVector::superpose(&[(C64::new(0.6, 0.0), v[1]), (C64::new(0.0, 0.8), v[2])])
                .unwrap();
        let ideal = input.apply_circuit(&qft.circuit).unwrap();
        for g in [Granularity::PerLogicalBlock, Granularity::EndpointsOnly] {
            let exp = NoiseExperiment {
                circuit: &qft.circuit,
                input: &input,
                ideal_output: &ideal,
                model: enc.model().unwrap(),
                boundaries: &qft.boundaries,
                code_space: Some(&basis),
            };
            let r = exp.run(&NoisePolicy::new(g, 100, 42)).unwrap();
            assert!(
                r.mean_fidelity >= 1.0 - 1e-10,
                "{name} {n} {g}: {}",
                r.mean_fidelity
            );
            assert!(r.mean_leakage < 1e-10);
        }
    }
}

#[test]
fn per_gate_noise_inside_blocks_is_reported() {
    // Intermediate states of a conjugated gate leave the protected space,
    // so per-gate noise is not expected to be harmless.
    let enc = registry().get("wcd").unwrap();
    let qft = synth_encoded_qft(enc, 2).unwrap();
    let basis = logical_basis(enc, 2).unwrap();
    let input = basis.vectors()[0].clone();
    let ideal = input.apply_circuit(&qft.circuit).unwrap();
    let exp = NoiseExperiment {
        circuit: &qft.circuit,
        input: &input,
        ideal_output: &ideal,
        model: CollectiveModel::Wcd,
        boundaries: &qft.boundaries,
        code_space: Some(&basis),
    };
    let r = exp
        .run(&NoisePolicy::new(Granularity::PerElementaryGate, 100, 42))
        .unwrap();
    assert!(r.mean_fidelity < 1.0 - 1e-6);
    assert!(r.noise_events_per_trial == qft.circuit.len() + 1);
}

#[test]
fn invalid_boundaries_rejected() {
    let c = synth_qft(2).unwrap();
    let s = StateVector::from_bits("00").unwrap();
    let p = NoisePolicy::new(Granularity::PerLogicalBlock, 5, 0);
    assert!(noisy_run(&c, &s, &s, &p, CollectiveModel::Wcd, &[0, 2]).is_err());
    assert!(noisy_run(&c, &s, &s, &p, CollectiveModel::Wcd, &[0, 1, 2, 3]).is_ok());
}
