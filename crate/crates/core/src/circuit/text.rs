//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! # comment
//! H 3
//! P 2 3 pi/2
//! CR 1 2 -2.1862760354652844
//! ```

use std::f64::consts::PI;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an angle literal: `pi`, `pi/N`, `-pi/N` or a finite decimal.
pub fn parse_angle(s: &str) -> Option<f64> {
    if s == "pi" {
        return Some(PI);
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    if let Some(den) = rest.strip_prefix("pi/") {
        if den.is_empty() || !den.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: u64 = den.parse().ok()?;
        if n == 0 {
            return None;
        }
        let a = PI / n as f64;
        return Some(if neg { -a } else { a });
    }
    let decimal_chars = |c: char| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E');
    if s.is_empty() || !s.chars().all(decimal_chars) || !s.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Formats an angle so that [`parse_angle`] recovers it bit for bit.
///
/// `pi` and `±pi/2^k` are printed symbolically; everything else as a
/// 17-significant-digit decimal.
pub fn format_angle(angle: f64) -> String {
    if angle == PI {
        return "pi".to_string();
    }
    for k in 1..=62u32 {
        let den = 1u64 << k;
        let a = PI / den as f64;
        if angle == a {
            return format!("pi/{den}");
        }
        if angle == -a {
            return format!("-pi/{den}");
        }
    }
    if angle == 0.0 {
        return "0".to_string();
    }
    let exp = angle.abs().log10().floor() as i32;
    let mut prec = (16 - exp).max(0) as usize;
    loop {
        let s = format!("{angle:.prec$}");
        if s.parse::<f64>() == Ok(angle) || prec > 400 {
            return s;
        }
        prec += 1;
    }
}

/// Parses the circuit text format. Gate order in the text is application order.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing \"qubits N\" header"))?;
    let mut words = header.split_whitespace();
    let n_qubits = match (words.next(), words.next(), words.next()) {
        (Some("qubits"), Some(n), None) => n
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| parse_err(1, format!("invalid qubit count {n:?}")))?,
        _ => return Err(parse_err(1, "expected header \"qubits N\"")),
    };

    let mut circuit = Circuit::new(n_qubits);
    for (line_no, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let kind = GateKind::from_mnemonic(tokens[0])
            .ok_or_else(|| parse_err(line_no, format!("unknown gate {:?}", tokens[0])))?;
        let expected = 1 + kind.arity() + usize::from(kind.has_angle());
        if tokens.len() != expected {
            return Err(parse_err(
                line_no,
                format!(
                    "{kind} expects {} qubit(s){}, got {} operand(s)",
                    kind.arity(),
                    if kind.has_angle() {
                        " and an angle"
                    } else {
                        ""
                    },
                    tokens.len() - 1
                ),
            ));
        }
        let qubits = tokens[1..=kind.arity()]
            .iter()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("invalid qubit index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let angle = if kind.has_angle() {
            let lit = tokens[expected - 1];
            Some(
                parse_angle(lit)
                    .ok_or_else(|| parse_err(line_no, format!("invalid angle {lit:?}")))?,
            )
        } else {
            None
        };
        let gate = Gate::from_parts(kind, &qubits, angle).map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(line_no, message),
            other => other,
        })?;
        circuit
            .push(gate)
            .map_err(|e| parse_err(line_no, e.to_string()))?;
    }
    Ok(circuit)
}

pub fn print_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits());
    for g in circuit.gates() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
