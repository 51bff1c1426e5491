//! Periodic points of the standard form of a bouquet map, through their
//! addresses.
//!
//! A location is a one-based index into the concatenation
//! `φ(a_1) φ(a_2) … φ(a_m)`; block `i` holds the locations of `φ(a_i)`. A
//! round trip of length `n` is a cyclic sequence of locations `(r_1, …, r_n)`
//! where each `r_{t+1}` lies in the block named by the generator of the letter
//! at `r_t`, and `r_1` lies in the block named by the letter at `r_n`. Fixed
//! points of the `n`-th iterate other than the base point correspond one to
//! one with round trips, so there are `1 + trace(Bⁿ)` of them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::dynamics::OccurrenceMatrix;
use crate::endo::Endomorphism;
use crate::remnant::remnant_decomposition;
use crate::word::Letter;

/// Default cap on the number of addresses an enumeration may produce.
pub const DEFAULT_ADDRESS_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodicError {
    #[error("{count} addresses exceed the budget of {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
    #[error("not in S_{l}")]
    NotInSl { l: usize },
    #[error("period must be at least {min}, got {n}")]
    PeriodTooSmall { n: usize, min: usize },
}

/// A location resolved to its block, its zero-based position in that image, and its letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub block: usize,
    pub position: usize,
    pub letter: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocationTable {
    /// Prefix sums `s_0 = 0, s_1, …, s_m` of image lengths.
    offsets: Vec<usize>,
    letters: Vec<Letter>,
}

impl LocationTable {
    pub fn new(phi: &Endomorphism) -> LocationTable {
        let mut offsets = alloc::vec![0];
        let mut letters = Vec::with_capacity(phi.total_length());
        for img in phi.images() {
            letters.extend_from_slice(img.letters());
            offsets.push(letters.len());
        }
        LocationTable { offsets, letters }
    }

    /// `s_0, …, s_m`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Total number of locations.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Locations of block `i`, i.e. `s_{i-1} < r ≤ s_i` in one-based terms.
    pub fn block_range(&self, block: usize) -> RangeInclusive<usize> {
        self.offsets[block] + 1..=self.offsets[block + 1]
    }

    pub fn locate(&self, r: usize) -> Option<Location> {
        if r == 0 || r > self.len() {
            return None;
        }
        let block = self.offsets.partition_point(|&s| s < r) - 1;
        Some(Location { block, position: r - 1 - self.offsets[block], letter: self.letters[r - 1] })
    }

    pub fn location_of(&self, block: usize, position: usize) -> usize {
        self.offsets[block] + position + 1
    }

    fn letter(&self, r: usize) -> Letter {
        self.letters[r - 1]
    }

    fn block(&self, r: usize) -> usize {
        self.offsets.partition_point(|&s| s < r) - 1
    }

    /// Whether `locations` is a round trip: each successor lies in the block of
    /// the current letter's generator, cyclically.
    pub fn is_round_trip(&self, locations: &[usize]) -> bool {
        let n = locations.len();
        n > 0
            && locations.iter().all(|&r| r >= 1 && r <= self.len())
            && (0..n).all(|t| self.block(locations[(t + 1) % n]) == self.letter(locations[t]).generator())
    }
}

/// A round trip `(r_1, …, r_n)` of one-based locations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn new(locations: Vec<usize>) -> Address {
        Address(locations)
    }

    pub fn locations(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(r_{k+1}, …, r_n, r_1, …, r_k)`.
    pub fn rotate(&self, k: usize) -> Address {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Address(v)
    }

    /// Least divisor `d` of `n` with `r_i = r_{i+d}` for all `i`; `n` when aperiodic.
    pub fn minimal_period(&self) -> usize {
        let n = self.0.len();
        (1..=n).filter(|d| n % d == 0).find(|&d| (0..n - d).all(|i| self.0[i] == self.0[i + d])).unwrap_or(n.max(1))
    }

    /// The distinct cyclic shifts, starting with `self`.
    pub fn orbit(&self) -> Vec<Address> {
        (0..self.minimal_period()).map(|k| self.rotate(k)).collect()
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

pub fn minimal_period(addr: &Address) -> usize {
    addr.minimal_period()
}

pub fn orbit_of(addr: &Address) -> Vec<Address> {
    addr.orbit()
}

/// `1 + trace(Bⁿ)`: fixed points of the `n`-th iterate of the standard form, base point included.
pub fn fixed_point_count(phi: &Endomorphism, n: u32) -> BigUint {
    OccurrenceMatrix::of(phi).trace_of_power(n) + 1u32
}

/// `reach[s][g][h]`: some walk of `s` steps leads from generator `g` to a letter of generator `h`,
/// i.e. `(B^s)[g][h] > 0`.
fn reachability(b: &OccurrenceMatrix, n: usize) -> Vec<Vec<Vec<bool>>> {
    let m = b.size();
    let mut reach = Vec::with_capacity(n + 1);
    reach.push((0..m).map(|g| (0..m).map(|h| g == h).collect::<Vec<bool>>()).collect::<Vec<_>>());
    for s in 1..=n {
        let prev: &Vec<Vec<bool>> = &reach[s - 1];
        let next = (0..m).map(|g| (0..m).map(|h| (0..m).any(|k| b.get(g, k) > 0 && prev[k][h])).collect()).collect();
        reach.push(next);
    }
    reach
}

fn check_budget(b: &OccurrenceMatrix, n: u32, budget: u64) -> Result<BigUint, PeriodicError> {
    let count = b.trace_of_power(n);
    if count > BigUint::from(budget) {
        return Err(PeriodicError::BudgetExceeded { count, budget });
    }
    Ok(count)
}

/// Every round trip of length `n`, each once, in lexicographic order.
pub fn enumerate_round_trips(phi: &Endomorphism, n: u32, budget: u64) -> Result<RoundTrips, PeriodicError> {
    if n == 0 {
        return Err(PeriodicError::PeriodTooSmall { n: 0, min: 1 });
    }
    let b = OccurrenceMatrix::of(phi);
    check_budget(&b, n, budget)?;
    Ok(RoundTrips {
        reach: reachability(&b, n as usize),
        table: LocationTable::new(phi),
        n: n as usize,
        path: Vec::with_capacity(n as usize),
        primed: false,
        exhausted: false,
    })
}

/// Depth-first stream of round trips; see [`enumerate_round_trips`].
pub struct RoundTrips {
    table: LocationTable,
    reach: Vec<Vec<Vec<bool>>>,
    n: usize,
    path: Vec<usize>,
    primed: bool,
    exhausted: bool,
}

impl RoundTrips {
    /// First admissible location at the current depth strictly after `after`.
    /// Candidates are pruned to those from which the trip can still close.
    fn candidate_after(&self, after: usize) -> Option<usize> {
        let depth = self.path.len();
        let remaining = self.n - 1 - depth;
        let range = match self.path.last() {
            None => 1..=self.table.len(),
            Some(&prev) => self.table.block_range(self.table.letter(prev).generator()),
        };
        let home = self.path.first().map(|&r| self.table.block(r));
        range.filter(|&r| r > after).find(|&r| {
            let target = home.unwrap_or_else(|| self.table.block(r));
            self.reach[remaining][self.table.letter(r).generator()][target]
        })
    }

    fn fill(&mut self) -> bool {
        while self.path.len() < self.n {
            match self.candidate_after(0) {
                Some(r) => self.path.push(r),
                None => return false,
            }
        }
        true
    }
}

impl Iterator for RoundTrips {
    type Item = Address;

    fn next(&mut self) -> Option<Address> {
        if self.exhausted {
            return None;
        }
        if !self.primed {
            self.primed = true;
            if self.fill() {
                return Some(Address(self.path.clone()));
            }
        }
        loop {
            let Some(last) = self.path.pop() else {
                self.exhausted = true;
                return None;
            };
            if let Some(r) = self.candidate_after(last) {
                self.path.push(r);
                if self.fill() {
                    return Some(Address(self.path.clone()));
                }
            }
        }
    }
}

/// A fixed point of the `n`-th iterate with its label `k_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPointRecord {
    pub label: usize,
    /// Empty for the base point `0_n`.
    pub address: Address,
    pub minimal_period: usize,
    /// Labels of the cyclic shifts of the address, starting with this one.
    pub orbit: Vec<usize>,
}

struct LabelScan<'a> {
    phi: &'a Endomorphism,
    table: &'a LocationTable,
    reach: &'a [Vec<Vec<bool>>],
    n: usize,
    home: usize,
    path: Vec<usize>,
    out: Vec<Address>,
}

impl LabelScan<'_> {
    /// Walks the unreduced expansion of `φ^{n-depth+1}(a_g^{inverted ? -1 : 1})`
    /// left to right. Inverted letters expand to the image read backwards.
    fn expand(&mut self, g: usize, inverted: bool, depth: usize) {
        let len = self.phi.image(g).len();
        for k in 0..len {
            let pos = if inverted { len - 1 - k } else { k };
            let letter = self.phi.image(g).letters()[pos];
            let h = letter.generator();
            if !self.reach[self.n - depth][h][self.home] {
                continue;
            }
            self.path.push(self.table.location_of(g, pos));
            if depth == self.n {
                self.out.push(Address(self.path.clone()));
            } else {
                let flips = letter.sign() == crate::word::Sign::Neg;
                self.expand(h, inverted != flips, depth + 1);
            }
            self.path.pop();
        }
    }
}

/// Addresses in label order: entry `k-1` is the address of `k_n`.
///
/// Labels scan the unreduced expansions of `φⁿ(a_1), …, φⁿ(a_m)` in turn,
/// numbering each occurrence of `a_i^{±1}` inside `φⁿ(a_i)`. The address of an
/// occurrence is the chain of locations it descends through.
pub fn label_scan(phi: &Endomorphism, n: u32, budget: u64) -> Result<Vec<Address>, PeriodicError> {
    if n == 0 {
        return Err(PeriodicError::PeriodTooSmall { n: 0, min: 1 });
    }
    let b = OccurrenceMatrix::of(phi);
    let count = check_budget(&b, n, budget)?;
    let table = LocationTable::new(phi);
    let reach = reachability(&b, n as usize);
    let mut scan = LabelScan {
        phi,
        table: &table,
        reach: &reach,
        n: n as usize,
        home: 0,
        path: Vec::with_capacity(n as usize),
        out: Vec::with_capacity(usize::try_from(count).unwrap_or(0)),
    };
    for i in 0..phi.rank() {
        scan.home = i;
        scan.expand(i, false, 1);
    }
    Ok(scan.out)
}

/// All `1 + trace(Bⁿ)` fixed points of the `n`-th iterate, labelled, with minimal periods and orbits.
pub fn label_fixed_points(phi: &Endomorphism, n: u32, budget: u64) -> Result<Vec<PeriodicPointRecord>, PeriodicError> {
    let addresses = label_scan(phi, n, budget)?;
    let index: BTreeMap<&Address, usize> = addresses.iter().enumerate().map(|(k, a)| (a, k + 1)).collect();
    let mut records = Vec::with_capacity(addresses.len() + 1);
    records.push(PeriodicPointRecord { label: 0, address: Address(Vec::new()), minimal_period: 1, orbit: alloc::vec![0] });
    for (k, addr) in addresses.iter().enumerate() {
        let orbit = addr.orbit().iter().map(|a| index[a]).collect();
        records.push(PeriodicPointRecord { label: k + 1, address: addr.clone(), minimal_period: addr.minimal_period(), orbit });
    }
    Ok(records)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn mobius(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Count of round trips of length `n` by minimal period, over every divisor of `n`.
pub fn minimal_period_census(phi: &Endomorphism, n: u32, budget: u64) -> Result<BTreeMap<usize, u64>, PeriodicError> {
    let mut census: BTreeMap<usize, u64> = divisors(n as usize).into_iter().map(|d| (d, 0)).collect();
    for addr in enumerate_round_trips(phi, n, budget)? {
        *census.get_mut(&addr.minimal_period()).expect("minimal period divides n") += 1;
    }
    Ok(census)
}

/// `Σ_{d | n} μ(n/d) trace(B^d)`: the number of round trips with minimal period exactly `n`.
pub fn aperiodic_round_trip_count(phi: &Endomorphism, n: u32) -> BigInt {
    let b = OccurrenceMatrix::of(phi);
    divisors(n as usize)
        .into_iter()
        .map(|d| BigInt::from(mobius(n as usize / d)) * BigInt::from(b.trace_of_power(d as u32)))
        .sum()
}

/// Generator-level transitions that avoid generator `k`: `B` with column `k` zeroed.
fn avoiding(b: &OccurrenceMatrix, k: usize) -> impl Fn(usize, usize) -> u64 + '_ {
    move |g, h| if h == k { 0 } else { b.get(g, h) }
}

fn check_sl(phi: &Endomorphism, l: usize, n: u32) -> Result<(), PeriodicError> {
    if n < 2 {
        return Err(PeriodicError::PeriodTooSmall { n: n as usize, min: 2 });
    }
    if l == 0 || !remnant_decomposition(phi).in_sl(phi, l) {
        return Err(PeriodicError::NotInSl { l });
    }
    Ok(())
}

/// Number of addresses built by the minimal-period construction for `φ ∈ S_l`:
/// pick a home generator `a_k`; `r_1` a letter strictly inside `Rem_φ a_k` whose
/// generator is not `a_k`; `r_2, …, r_{n-1}` letters avoiding `a_k`; `r_n` a
/// letter `a_k^{±1}`. Every such address has minimal period `n`.
pub fn certified_minimal_points(phi: &Endomorphism, l: usize, n: u32) -> Result<BigUint, PeriodicError> {
    check_sl(phi, l, n)?;
    let b = OccurrenceMatrix::of(phi);
    let rem = remnant_decomposition(phi);
    let m = phi.rank();
    let mut total = BigUint::zero();
    for k in 0..m {
        let step = avoiding(&b, k);
        let mut v = alloc::vec![BigUint::zero(); m];
        for (pos, l) in phi.image(k).letters().iter().enumerate() {
            if rem.is_interior(k, pos) && l.generator() != k {
                v[l.generator()] += 1u32;
            }
        }
        for _ in 2..n {
            v = (0..m).map(|h| (0..m).map(|g| &v[g] * step(g, h)).sum()).collect();
        }
        total += (0..m).map(|g| &v[g] * b.get(g, k)).sum::<BigUint>();
    }
    Ok(total)
}

/// The addresses counted by [`certified_minimal_points`], listed.
pub fn certified_minimal_addresses(phi: &Endomorphism, l: usize, n: u32, budget: u64) -> Result<Vec<Address>, PeriodicError> {
    let count = certified_minimal_points(phi, l, n)?;
    if count > BigUint::from(budget) {
        return Err(PeriodicError::BudgetExceeded { count, budget });
    }
    let table = LocationTable::new(phi);
    let rem = remnant_decomposition(phi);
    let mut out = Vec::new();
    let n = n as usize;
    for k in 0..phi.rank() {
        let mut path = Vec::with_capacity(n);
        for pos in 0..phi.image(k).len() {
            let g = phi.image(k).letters()[pos].generator();
            if rem.is_interior(k, pos) && g != k {
                path.push(table.location_of(k, pos));
                extend_certified(phi, &table, k, g, n, &mut path, &mut out);
                path.pop();
            }
        }
    }
    Ok(out)
}

fn extend_certified(
    phi: &Endomorphism,
    table: &LocationTable,
    k: usize,
    block: usize,
    n: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Address>,
) {
    let last = path.len() + 1 == n;
    for (pos, l) in phi.image(block).letters().iter().enumerate() {
        let g = l.generator();
        if (g == k) != last {
            continue;
        }
        path.push(table.location_of(block, pos));
        if last {
            out.push(Address(path.clone()));
        } else {
            extend_certified(phi, table, k, g, n, path, out);
        }
        path.pop();
    }
}
