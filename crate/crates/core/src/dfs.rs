//! Collective operators, brute-force DFS bases and dimensions, and encoding
//! efficiency.
//!
//! `S_a = sum_i sigma_a^(i)` with `sigma_z |0> = +|0>`. Under weak collective
//! decoherence only `S_z` couples to the bath and each `S_z` eigenspace is
//! protected; under strong collective decoherence all three operators couple
//! and the protected space is their common null space (the total-spin-zero
//! sector, which exists only for even `n`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{common_nullspace, NULLSPACE_TOL};
use crate::statevector::{StateVector, C64};
use crate::unitary::{CMatrix, SubspaceBasis};

/// Largest register handled by the dense brute-force routines.
pub const MAX_BRUTE_FORCE_QUBITS: usize = 10;

/// Upper bound of the search in [`min_physical_qubits`].
pub const SEARCH_BOUND: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollectiveModel {
    /// Weak collective decoherence: coupling through `S_z` only.
    Wcd,
    /// Strong collective decoherence: coupling through `S_x`, `S_y`, `S_z`.
    Scd,
}

impl CollectiveModel {
    pub fn axes(self) -> &'static [Axis] {
        match self {
            CollectiveModel::Wcd => &[Axis::Z],
            CollectiveModel::Scd => &[Axis::X, Axis::Y, Axis::Z],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CollectiveModel::Wcd => "wcd",
            CollectiveModel::Scd => "scd",
        }
    }
}

impl fmt::Display for CollectiveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CollectiveModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wcd" => Ok(CollectiveModel::Wcd),
            "scd" => Ok(CollectiveModel::Scd),
            _ => Err(Error::UnknownEncoding(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_BRUTE_FORCE_QUBITS {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max: MAX_BRUTE_FORCE_QUBITS,
        });
    }
    Ok(())
}

/// Dense `S_axis` on `n` qubits.
pub fn collective_operator(n: usize, axis: Axis) -> Result<CMatrix> {
    check_n(n)?;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    let i = C64::new(0.0, 1.0);
    for l in 0..dim {
        for bit in 0..n {
            let mask = 1usize << bit;
            let set = l & mask != 0;
            match axis {
                Axis::X => m[(l ^ mask, l)] += C64::new(1.0, 0.0),
                Axis::Y => m[(l ^ mask, l)] += if set { -i } else { i },
                Axis::Z => m[(l, l)] += C64::new(if set { -1.0 } else { 1.0 }, 0.0),
            }
        }
    }
    Ok(m)
}

/// Label of one protected sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorLabel {
    /// Eigenvalue of `S_z`.
    SzEigenvalue(i64),
    /// Total spin zero.
    Singlet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub label: SectorLabel,
    pub dim: usize,
}

/// Protected sectors of an `n`-qubit register, found by brute force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfsReport {
    pub n: usize,
    pub model: CollectiveModel,
    pub sectors: Vec<Sector>,
    pub max_dim: usize,
}

/// `S_z` eigenspaces, read off the operator column by column.
fn sz_eigenspaces(n: usize) -> Result<BTreeMap<i64, Vec<usize>>> {
    let sz = collective_operator(n, Axis::Z)?;
    let mut spaces: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for l in 0..sz.ncols() {
        let col = sz.column(l);
        let off_diagonal = col
            .iter()
            .enumerate()
            .any(|(r, z)| r != l && z.norm() > 0.0);
        debug_assert!(
            !off_diagonal,
            "S_z must be diagonal in the computational basis"
        );
        let eig = col[l].re.round() as i64;
        spaces.entry(eig).or_default().push(l);
    }
    Ok(spaces)
}

fn collective_operators(n: usize) -> Result<Vec<CMatrix>> {
    [Axis::X, Axis::Y, Axis::Z]
        .into_iter()
        .map(|a| collective_operator(n, a))
        .collect()
}

/// Common null space of `S_x, S_y, S_z`. Any such vector has `S_z = 0`, so the
/// search runs over the columns of that (diagonal) eigenspace; the full row
/// space is kept so `S_x` and `S_y` are tested exactly.
fn singlet_space(n: usize) -> Result<Vec<DVector<C64>>> {
    let dim = 1usize << n;
    let columns = sz_eigenspaces(n)?.remove(&0).unwrap_or_default();
    let ops: Vec<CMatrix> = collective_operators(n)?
        .iter()
        .map(|op| op.select_columns(&columns))
        .collect();
    Ok(common_nullspace(&ops, NULLSPACE_TOL)
        .into_iter()
        .map(|v| {
            let mut full = DVector::from_element(dim, C64::new(0.0, 0.0));
            for (k, &l) in columns.iter().enumerate() {
                full[l] = v[k];
            }
            full
        })
        .collect())
}

pub fn dfs_report(n: usize, model: CollectiveModel) -> Result<DfsReport> {
    check_n(n)?;
    let sectors: Vec<Sector> = match model {
        CollectiveModel::Wcd => sz_eigenspaces(n)?
            .into_iter()
            .rev()
            .map(|(eig, states)| Sector {
                label: SectorLabel::SzEigenvalue(eig),
                dim: states.len(),
            })
            .collect(),
        CollectiveModel::Scd if n % 2 == 1 => Vec::new(),
        CollectiveModel::Scd => vec![Sector {
            label: SectorLabel::Singlet,
            dim: singlet_space(n)?.len(),
        }],
    };
    let max_dim = sectors.iter().map(|s| s.dim).max().unwrap_or(0);
    Ok(DfsReport {
        n,
        model,
        sectors,
        max_dim,
    })
}

/// Orthonormal basis of the canonical protected sector: the `S_z = 0`
/// eigenspace (WCD) or the common null space of `S_x, S_y, S_z` (SCD).
pub fn dfs_basis(n: usize, model: CollectiveModel) -> Result<SubspaceBasis> {
    check_n(n)?;
    if n % 2 == 1 {
        return Err(Error::NoZeroSector {
            model: model.name(),
            n,
        });
    }
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 2,
            max: MAX_BRUTE_FORCE_QUBITS,
        });
    }
    let vectors = match model {
        CollectiveModel::Wcd => sz_eigenspaces(n)?
            .remove(&0)
            .unwrap_or_default()
            .into_iter()
            .map(|l| StateVector::basis(n, l))
            .collect::<Result<Vec<_>>>()?,
        CollectiveModel::Scd => singlet_space(n)?
            .into_iter()
            .map(|v| StateVector::normalized(n, v.as_slice().to_vec()))
            .collect::<Result<Vec<_>>>()?,
    };
    SubspaceBasis::new(vectors)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form largest protected dimension.
pub fn max_dfs_dimension_closed_form(n: usize, model: CollectiveModel) -> usize {
    match model {
        CollectiveModel::Wcd => binomial(n, n / 2),
        CollectiveModel::Scd if n % 2 == 1 => 0,
        CollectiveModel::Scd => binomial(n, n / 2) - binomial(n, n / 2 + 1),
    }
}

fn cache() -> &'static Mutex<HashMap<(usize, CollectiveModel), usize>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, CollectiveModel), usize>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Largest protected sector dimension, computed by brute force and checked
/// against the closed form. Zero means no protected sector (odd `n`, SCD).
pub fn max_dfs_dimension(n: usize, model: CollectiveModel) -> Result<usize> {
    check_n(n)?;
    if let Some(&d) = cache().lock().unwrap().get(&(n, model)) {
        return Ok(d);
    }
    let brute_force = dfs_report(n, model)?.max_dim;
    let closed_form = max_dfs_dimension_closed_form(n, model);
    if brute_force != closed_form {
        return Err(Error::ClosedFormMismatch {
            model: model.name(),
            n,
            brute_force,
            closed_form,
        });
    }
    cache().lock().unwrap().insert((n, model), brute_force);
    Ok(brute_force)
}

/// Exact non-negative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// `floor(log2(d))`: the number of logical qubits a `d`-dimensional space holds.
pub fn logical_capacity(dim: usize) -> usize {
    if dim == 0 {
        0
    } else {
        dim.ilog2() as usize
    }
}

/// Best-case encoding efficiency `floor(log2 max_dim) / n`.
pub fn eta_max(n: usize, model: CollectiveModel) -> Result<Ratio> {
    let d = max_dfs_dimension(n, model)?;
    if d == 0 {
        return Err(Error::NoZeroSector {
            model: model.name(),
            n,
        });
    }
    Ok(Ratio::new(logical_capacity(d) as u64, n as u64))
}

/// Smallest register whose largest protected sector holds `m` logical qubits.
pub fn min_physical_qubits(m: usize, model: CollectiveModel) -> Result<usize> {
    if m == 0 || m > 5 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            min: 1,
            max: 5,
        });
    }
    for n in 1..=SEARCH_BOUND {
        let d = if n <= MAX_BRUTE_FORCE_QUBITS {
            max_dfs_dimension(n, model)?
        } else {
            max_dfs_dimension_closed_form(n, model)
        };
        if logical_capacity(d) >= m {
            return Ok(n);
        }
    }
    Err(Error::SearchBoundExceeded {
        logical: m,
        bound: SEARCH_BOUND,
    })
}
