//! Synthesized circuits against checked-in text files.

use std::path::PathBuf;

use dfsqft::circuit::{parse_circuit, print_circuit};
use dfsqft::encoding::{scd, wcd};
use dfsqft::qft::synth_qft;
use dfsqft::{Circuit, Gate};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(name: &str, circuit: &Circuit) {
    assert_eq!(print_circuit(circuit), golden(name), "{name}");
}

#[test]
fn plain_qft_3() {
    assert_golden("plain_qft_3.txt", &synth_qft(3).unwrap());
}

#[test]
fn wcd_qft_2_and_3() {
    assert_golden("wcd_qft_2.txt", &wcd::synth_qft_wcd(2).unwrap().circuit);
    assert_golden("wcd_qft_3.txt", &wcd::synth_qft_wcd(3).unwrap().circuit);
}

#[test]
fn scd_block_transform_and_hadamard() {
    assert_golden(
        "scd_block_transform_1.txt",
        &scd::scd_block_transform(1).unwrap(),
    );
    assert_golden("scd_hadamard_1.txt", &scd::scd_hadamard(1, 1).unwrap());
}

#[test]
fn scd_golden_angles_match_closed_form() {
    let a = (1.0f64 / 3f64.sqrt()).asin();
    let expected = [
        Gate::cr(2, 1, -std::f64::consts::FRAC_PI_4),
        Gate::cr(1, 2, -std::f64::consts::PI + a),
        Gate::r(2, std::f64::consts::PI - a),
    ];
    let parsed = parse_circuit(&golden("scd_block_transform_1.txt")).unwrap();
    for (g, e) in parsed.gates()[8..11].iter().zip(expected) {
        assert_eq!((g.kind(), g.qubits()), (e.kind(), e.qubits()));
        assert!((g.angle().unwrap() - e.angle().unwrap()).abs() < 1e-15);
    }
}

#[test]
fn golden_files_round_trip() {
    for name in [
        "plain_qft_3.txt",
        "wcd_qft_2.txt",
        "wcd_qft_3.txt",
        "scd_block_transform_1.txt",
        "scd_hadamard_1.txt",
    ] {
        let text = golden(name);
        assert_eq!(
            print_circuit(&parse_circuit(&text).unwrap()),
            text,
            "{name}"
        );
    }
}
