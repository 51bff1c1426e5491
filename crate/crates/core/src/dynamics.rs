//! Growth invariants: Nielsen number sequences, bounds on the asymptotic
//! Nielsen number, fundamental-group entropy estimates, and the letter
//! occurrence matrix with its Perron root.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::endo::{EndoError, Endomorphism};
use crate::remnant::remnant_decomposition;
use crate::wagner::{lefschetz_number, WagnerAnalysis, WagnerError};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_ITERATION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("no remnant at power {power}; the tail count is not certified")]
    NoRemnant { power: u32, source: WagnerError },
    #[error("length cap hit after {} completed powers: {source}", completed.len())]
    CapExceeded { completed: Vec<NielsenRow>, source: EndoError },
    #[error("length cap hit while computing image lengths: {0}")]
    LengthCap(EndoError),
    #[error("not in S_{l}; the lower bound l·m is not certified")]
    NotInSl { l: usize },
    #[error("power iteration did not converge in {iterations} steps; ρ ∈ [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64, iterations: usize },
    #[error("n_max must be at least 1")]
    EmptyRange,
}

/// `B[i][j] = Φ_{a_j}(φ(a_i))`, the number of `a_j^{±1}` in the image of `a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceMatrix {
    size: usize,
    entries: Vec<u64>,
}

impl OccurrenceMatrix {
    pub fn of(phi: &Endomorphism) -> OccurrenceMatrix {
        let m = phi.rank();
        let mut entries = alloc::vec![0u64; m * m];
        for (i, img) in phi.images().iter().enumerate() {
            for l in img.letters() {
                entries[i * m + l.generator()] += 1;
            }
        }
        OccurrenceMatrix { size: m, entries }
    }

    pub fn from_rows(rows: &[&[u64]]) -> OccurrenceMatrix {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        OccurrenceMatrix { size, entries: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.entries[i * self.size..(i + 1) * self.size].iter().sum()
    }

    pub fn transpose(&self) -> OccurrenceMatrix {
        let n = self.size;
        let mut entries = alloc::vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        OccurrenceMatrix { size: n, entries }
    }

    pub fn trace(&self) -> u64 {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    /// Exact `B^n`.
    pub fn power(&self, n: u32) -> BigMatrix {
        BigMatrix::from(self).pow(n)
    }

    /// Exact `trace(B^n)`.
    pub fn trace_of_power(&self, n: u32) -> BigUint {
        self.power(n).trace()
    }
}

/// The magnitude Fox Jacobian: entry `(i, j)` is `Φ_{a_i} φ(a_j)`, the transpose of [`OccurrenceMatrix`].
pub fn fox_magnitude_matrix(phi: &Endomorphism) -> OccurrenceMatrix {
    OccurrenceMatrix::of(phi).transpose()
}

/// Square matrix of arbitrary-precision naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    size: usize,
    entries: Vec<BigUint>,
}

impl From<&OccurrenceMatrix> for BigMatrix {
    fn from(m: &OccurrenceMatrix) -> BigMatrix {
        BigMatrix { size: m.size, entries: m.entries.iter().map(|&x| BigUint::from(x)).collect() }
    }
}

impl BigMatrix {
    pub fn identity(size: usize) -> BigMatrix {
        let mut entries = alloc::vec![BigUint::zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = BigUint::one();
        }
        BigMatrix { size, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.size + j]
    }

    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        let n = self.size;
        let mut entries = alloc::vec![BigUint::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        BigMatrix { size: n, entries }
    }

    pub fn pow(&self, mut n: u32) -> BigMatrix {
        let mut result = BigMatrix::identity(self.size);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> BigUint {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }
}

/// Perron root estimate with its Collatz-Wielandt bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// `(min_i (Ax)_i / x_i, max_i (Ax)_i / x_i)` for a positive vector `x`.
/// For any nonnegative `A` the spectral radius lies in this interval.
pub fn collatz_wielandt_bounds(a: &[Vec<f64>], x: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (row, &xi) in a.iter().zip(x) {
        let ax: f64 = row.iter().zip(x).map(|(r, v)| r * v).sum();
        let q = ax / xi;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}

/// Power iteration on `A + I` from the all-ones vector, yielding the
/// Collatz-Wielandt bracket of `A` at each step. The shift makes every
/// irreducible block primitive and keeps the iterate strictly positive.
pub struct PowerIteration {
    a: Vec<Vec<f64>>,
    x: Vec<f64>,
}

impl PowerIteration {
    pub fn new(a: Vec<Vec<f64>>) -> PowerIteration {
        let n = a.len();
        PowerIteration { a, x: alloc::vec![1.0; n] }
    }
}

impl Iterator for PowerIteration {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let bracket = collatz_wielandt_bounds(&self.a, &self.x);
        let mut y: Vec<f64> = self.a.iter().zip(&self.x).map(|(row, &xi)| xi + row.iter().zip(&self.x).map(|(r, v)| r * v).sum::<f64>()).collect();
        let scale = y.iter().copied().fold(0.0, f64::max);
        y.iter_mut().for_each(|v| *v /= scale);
        self.x = y;
        Some(bracket)
    }
}

/// Strongly connected components of the support graph of `m`, by reachability closure.
fn strong_components(m: &OccurrenceMatrix) -> Vec<Vec<usize>> {
    let n = m.size();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || m.get(i, j) > 0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = alloc::vec![false; n];
    let mut comps = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let comp: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        comp.iter().for_each(|&j| assigned[j] = true);
        comps.push(comp);
    }
    comps
}

/// Spectral radius of a nonnegative matrix to absolute accuracy `tol`.
///
/// The radius is the largest over the irreducible diagonal blocks; each block
/// is bracketed by power iteration until the bracket is narrower than `tol`.
pub fn spectral_radius(m: &OccurrenceMatrix, tol: f64, max_iterations: usize) -> Result<SpectralRadius, DynamicsError> {
    let mut best = SpectralRadius { value: 0.0, lower: 0.0, upper: 0.0, iterations: 0 };
    let mut total_iterations = 0;
    for comp in strong_components(m) {
        let block: Vec<Vec<f64>> = comp.iter().map(|&i| comp.iter().map(|&j| m.get(i, j) as f64).collect()).collect();
        if block.iter().flatten().all(|&v| v == 0.0) {
            continue;
        }
        let mut bracket = (0.0, f64::INFINITY);
        let mut converged = false;
        for (k, (lo, hi)) in PowerIteration::new(block).take(max_iterations).enumerate() {
            bracket = (lo, hi);
            total_iterations = total_iterations.max(k + 1);
            if hi - lo <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(DynamicsError::NonConvergence { lower: bracket.0, upper: bracket.1, iterations: max_iterations });
        }
        if bracket.1 > best.upper {
            best = SpectralRadius { value: 0.5 * (bracket.0 + bracket.1), lower: bracket.0, upper: bracket.1, iterations: 0 };
        }
    }
    best.iterations = total_iterations;
    Ok(best)
}

/// Bounds on the asymptotic Nielsen number.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticBounds {
    /// `l·m`, present only when `φ ∈ S_l`.
    pub lower: Option<f64>,
    /// `max(1, ρ(‖F̃₁‖))`, the upper bound.
    pub upper: f64,
    pub spectral: SpectralRadius,
    pub l: usize,
}

impl AsymptoticBounds {
    pub fn certified_lower(&self) -> Result<f64, DynamicsError> {
        self.lower.ok_or(DynamicsError::NotInSl { l: self.l })
    }
}

pub fn asymptotic_bounds(phi: &Endomorphism, l: usize, tol: f64) -> Result<AsymptoticBounds, DynamicsError> {
    let spectral = spectral_radius(&fox_magnitude_matrix(phi), tol, DEFAULT_ITERATION_BUDGET)?;
    let rem = remnant_decomposition(phi);
    let lower = (l >= 1 && rem.in_sl(phi, l)).then(|| (l * phi.rank()) as f64);
    Ok(AsymptoticBounds { lower, upper: spectral.value.max(1.0), spectral, l })
}

/// Closed-form lower bounds for maps in `S_l`. Values are raw and may be
/// negative; the `clamped_*` accessors floor them at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormBounds {
    /// `l^n m^n - 2m`, bounding `#W(φ^n)`.
    pub w_bound: BigInt,
    /// `m((m-1)l - 2)(m-1)^{n-2} l^{n-1}`, bounding `P_n`; only for `n ≥ 2`.
    pub pn_bound: Option<BigInt>,
    /// `l^n m^{n-1}`, bounding every `Φ_{a_i}(Rem_{φ^n} a_j)`.
    pub remnant_letter_bound: BigInt,
}

impl ClosedFormBounds {
    pub fn clamped_w_bound(&self) -> BigUint {
        clamp(&self.w_bound)
    }

    pub fn clamped_pn_bound(&self) -> Option<BigUint> {
        self.pn_bound.as_ref().map(clamp)
    }
}

fn clamp(x: &BigInt) -> BigUint {
    if x.is_negative() {
        BigUint::zero()
    } else {
        x.magnitude().clone()
    }
}

pub fn closed_form_bounds(l: u64, m: u64, n: u32) -> ClosedFormBounds {
    let l_big = BigInt::from(l);
    let m_big = BigInt::from(m);
    let w_bound = l_big.pow(n) * m_big.pow(n) - 2 * &m_big;
    let pn_bound = (n >= 2).then(|| {
        &m_big * (BigInt::from(m as i64 - 1) * &l_big - 2) * BigInt::from(m as i64 - 1).pow(n - 2) * l_big.pow(n - 1)
    });
    let remnant_letter_bound = l_big.pow(n) * m_big.pow(n.saturating_sub(1));
    ClosedFormBounds { w_bound, pn_bound, remnant_letter_bound }
}

/// One row of a Nielsen number table.
#[derive(Debug, Clone, PartialEq)]
pub struct NielsenRow {
    pub n: u32,
    pub nielsen: usize,
    /// `N(φ^n)^{1/n}`.
    pub root: f64,
    pub w_count: usize,
    pub isolated: usize,
    pub lefschetz: i64,
    pub tails: usize,
}

impl NielsenRow {
    /// Runs the tail analysis on an already computed power `φ^n`.
    pub fn from_power(n: u32, power: &Endomorphism) -> Result<NielsenRow, WagnerError> {
        let a = WagnerAnalysis::new(power);
        let nielsen = a.nielsen_number()?;
        Ok(NielsenRow {
            n,
            nielsen,
            root: libm::pow(nielsen as f64, 1.0 / f64::from(n)),
            w_count: a.w_count()?,
            isolated: a.isolated_tail_count()?,
            lefschetz: lefschetz_number(power),
            tails: a.tails.len(),
        })
    }
}

/// `N(φ^n)` for `n = 1..=n_max`. Stops with the completed rows when an
/// iterate exceeds `length_cap`.
pub fn nielsen_sequence(phi: &Endomorphism, n_max: u32, length_cap: usize) -> Result<Vec<NielsenRow>, DynamicsError> {
    if n_max == 0 {
        return Err(DynamicsError::EmptyRange);
    }
    let mut rows = Vec::new();
    let mut failure = None;
    let walk = phi.try_powers(n_max, length_cap, |k, power| {
        if failure.is_some() {
            return;
        }
        match NielsenRow::from_power(k, power) {
            Ok(row) => rows.push(row),
            Err(source) => failure = Some(DynamicsError::NoRemnant { power: k, source }),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match walk {
        Ok(()) => Ok(rows),
        Err(source) => Err(DynamicsError::CapExceeded { completed: rows, source }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimates {
    /// `L_n = max_i |φ^n(a_i)|` for `n = 1..=n_max`.
    pub lengths: Vec<usize>,
    /// `log(L_n)/n` per `n`; a zero length contributes 0.
    pub estimates: Vec<f64>,
    /// The estimate at `n_max`.
    pub h_sharp: f64,
    /// Largest `l` with `φ ∈ S_l`, when positive.
    pub sl_level: Option<usize>,
    /// `log(l·m)`, certified for maps in `S_l`.
    pub certified_lower: Option<f64>,
}

pub fn entropy_estimates(phi: &Endomorphism, n_max: u32, length_cap: usize) -> Result<EntropyEstimates, DynamicsError> {
    if n_max == 0 {
        return Err(DynamicsError::EmptyRange);
    }
    let mut lengths = Vec::new();
    phi.try_powers(n_max, length_cap, |_, p| lengths.push(p.max_image_length())).map_err(DynamicsError::LengthCap)?;
    let estimates: Vec<f64> =
        lengths.iter().enumerate().map(|(k, &len)| libm::log(len.max(1) as f64) / (k + 1) as f64).collect();
    let rem = remnant_decomposition(phi);
    let sl_level = rem.sl_level(phi).filter(|&l| l >= 1);
    Ok(EntropyEstimates {
        h_sharp: *estimates.last().expect("n_max ≥ 1"),
        certified_lower: sl_level.map(|l| libm::log((l * phi.rank()) as f64)),
        lengths,
        estimates,
        sl_level,
    })
}

/// Combined growth summary for one map.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<NielsenRow>,
    /// Set when the length cap stopped the table early.
    pub cap_hit: Option<EndoError>,
    pub bounds: AsymptoticBounds,
    pub entropy: EntropyEstimates,
}

/// Nielsen table, asymptotic bounds (with `l` taken as the map's own `S_l`
/// level) and entropy estimates over the powers that fit the cap.
pub fn growth_report(phi: &Endomorphism, n_max: u32, length_cap: usize, tol: f64) -> Result<GrowthReport, DynamicsError> {
    let (rows, cap_hit) = match nielsen_sequence(phi, n_max, length_cap) {
        Ok(rows) => (rows, None),
        Err(DynamicsError::CapExceeded { completed, source }) => (completed, Some(source)),
        Err(e) => return Err(e),
    };
    let reached = u32::try_from(rows.len()).unwrap_or(u32::MAX).max(1);
    let l = remnant_decomposition(phi).sl_level(phi).unwrap_or(0);
    let bounds = asymptotic_bounds(phi, l, tol)?;
    let entropy = entropy_estimates(phi, reached, length_cap)?;
    Ok(GrowthReport { rows, cap_hit, bounds, entropy })
}
