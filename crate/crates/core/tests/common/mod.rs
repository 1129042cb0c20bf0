#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use dfsqft::unitary::CMatrix;
use dfsqft::C64;
use nalgebra::DMatrix;

pub fn rev(x: usize, n: usize) -> usize {
    let mut y = 0;
    for b in 0..n {
        y |= ((x >> b) & 1) << (n - 1 - b);
    }
    y
}

/// Swap-free QFT: `|x> -> 2^(-n/2) sum_y exp(2 pi i x y / 2^n) |rev(y)>`.
pub fn bit_reversed_dft(n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            let phase = 2.0 * PI * ((x * y) % dim) as f64 / dim as f64;
            m[(rev(y, n), x)] = C64::from_polar(1.0 / (dim as f64).sqrt(), phase);
        }
    }
    m
}

/// `max |b - e^{i phi} a|` minimized over a global phase fixed by the
/// largest entry of `a`.
pub fn phase_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    let (idx, _) = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
        .unwrap();
    let ratio = b.as_slice()[idx] / a.as_slice()[idx];
    let phase = ratio / ratio.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (y - phase * x).norm())
        .fold(0.0, f64::max)
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `sigma_a` with `sigma_z |0> = +|0>`; index 0/1/2 = x/y/z.
pub fn pauli(axis: usize) -> CMatrix {
    let (z, o, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let e = match axis {
        0 => [z, o, o, z],
        1 => [z, -i, i, z],
        _ => [o, z, z, -o],
    };
    DMatrix::from_row_slice(2, 2, &e)
}

/// `sum_q sigma_a^(q)` built from Kronecker products.
pub fn collective(n: usize, axis: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut s = DMatrix::zeros(dim, dim);
    for q in 0..n {
        let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for t in (0..n).rev() {
            let f = if t == q {
                pauli(axis)
            } else {
                DMatrix::identity(2, 2)
            };
            m = m.kronecker(&f);
        }
        s += m;
    }
    s
}

/// `exp(-i sum_a phi_a S_a)` by dense exponential; `phis` is `[x, y, z]`.
pub fn collective_exp(n: usize, phis: [f64; 3]) -> CMatrix {
    let dim = 1usize << n;
    let mut h: CMatrix = DMatrix::zeros(dim, dim);
    for (a, phi) in phis.iter().enumerate() {
        if *phi != 0.0 {
            h += collective(n, a) * C64::new(*phi, 0.0);
        }
    }
    (h * C64::new(0.0, -1.0)).exp()
}

/// Hadamard on qubit `k` of a plain `n`-qubit register, by Kronecker product.
pub fn hadamard_on(k: usize, n: usize) -> CMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for t in (1..=n).rev() {
        let f = if t == k {
            DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
        } else {
            DMatrix::identity(2, 2)
        };
        m = m.kronecker(&f);
    }
    m
}

/// Diagonal controlled phase on logical indices.
pub fn phase_on(i: usize, j: usize, theta: f64, n: usize) -> CMatrix {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if (r >> (i - 1)) & 1 == 1 && (r >> (j - 1)) & 1 == 1 {
            C64::from_polar(1.0, theta)
        } else {
            C64::new(1.0, 0.0)
        }
    })
}
