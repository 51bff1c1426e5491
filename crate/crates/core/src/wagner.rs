//! Tail analysis for the Nielsen number of a remnant endomorphism.
//!
//! Each occurrence of `a_i^ε` in `φ(a_i)` splits the image as `v a_i^ε v̄` and
//! yields a tail `(w, w̄)`; together with the base tail `(1, 1)` these are the
//! candidate fixed points. Tails sharing a boundary word are directly related,
//! the transitive closure gives the fixed point classes, and for maps with
//! remnant the classes with nonzero index sum are counted by `N(φ)`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::endo::Endomorphism;
use crate::remnant::{remnant_decomposition, RemnantDecomposition};
use crate::word::{Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WagnerError {
    /// The tail count is not certified without remnant. The partition is
    /// still available for inspection.
    #[error("endomorphism has no remnant; the class count is not certified as N(φ)")]
    NoRemnant { partition: Box<FixedPointClassPartition> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailOrigin {
    Base,
    /// Occurrence of `a_generator^exponent` at zero-based `position` of `φ(a_generator)`.
    Occurrence { generator: usize, position: usize, exponent: Sign },
}

/// A boundary word of a tail: the first `len` letters of `φ(a_generator)`, or
/// of its inverse when `inverted` is set. Every tail word has this shape, so
/// tails can refer into the images instead of copying them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryWord {
    pub generator: usize,
    pub inverted: bool,
    pub len: usize,
}

impl BoundaryWord {
    const EMPTY: BoundaryWord = BoundaryWord { generator: 0, inverted: false, len: 0 };

    fn new(generator: usize, inverted: bool, len: usize) -> BoundaryWord {
        if len == 0 {
            BoundaryWord::EMPTY
        } else {
            BoundaryWord { generator, inverted, len }
        }
    }

    pub fn letters<'a>(&self, phi: &'a Endomorphism) -> impl Iterator<Item = Letter> + 'a {
        let img = phi.image(self.generator).letters();
        let (len, inverted) = (self.len, self.inverted);
        (0..len).map(move |k| if inverted { img[img.len() - 1 - k].inverse() } else { img[k] })
    }

    pub fn to_word(&self, phi: &Endomorphism) -> Word {
        Word::from_vec_unchecked(self.letters(phi).collect())
    }

    /// Letter-by-letter equality of the words the two views denote.
    pub fn same_word(&self, other: &BoundaryWord, phi: &Endomorphism) -> bool {
        self.len == other.len && self.letters(phi).eq(other.letters(phi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WagnerTail {
    pub w: BoundaryWord,
    pub w_bar: BoundaryWord,
    /// `+1` for the base tail, `-ε` for an occurrence of `a_i^ε`.
    pub index: i32,
    pub origin: TailOrigin,
    pub inside_remnant: bool,
}

impl WagnerTail {
    /// `(w, w̄)` as words.
    pub fn words(&self, phi: &Endomorphism) -> (Word, Word) {
        (self.w.to_word(phi), self.w_bar.to_word(phi))
    }

    pub fn directly_related(&self, other: &WagnerTail, phi: &Endomorphism) -> bool {
        [self.w, self.w_bar].iter().any(|a| [other.w, other.w_bar].iter().any(|b| a.same_word(b, phi)))
    }
}

/// The tails of `φ`: the base tail first, then occurrences by generator and position.
pub fn wagner_tails(phi: &Endomorphism) -> Vec<WagnerTail> {
    wagner_tails_with(phi, &remnant_decomposition(phi))
}

pub fn wagner_tails_with(phi: &Endomorphism, rem: &RemnantDecomposition) -> Vec<WagnerTail> {
    let mut tails = alloc::vec![WagnerTail {
        w: BoundaryWord::EMPTY,
        w_bar: BoundaryWord::EMPTY,
        index: 1,
        origin: TailOrigin::Base,
        inside_remnant: false,
    }];
    for (i, img) in phi.images().iter().enumerate() {
        let len = img.len();
        for (pos, l) in img.letters().iter().enumerate().filter(|(_, l)| l.generator() == i) {
            // v = letters[..pos], v̄ = letters[pos+1..]. For ε = +1 the tail is
            // (v, v̄⁻¹); for ε = -1 it is (v a_i⁻¹, v̄⁻¹ a_i), which are the prefix
            // through pos and the inverse of the suffix from pos.
            let (w_len, w_bar_len) = match l.sign() {
                Sign::Pos => (pos, len - pos - 1),
                Sign::Neg => (pos + 1, len - pos),
            };
            tails.push(WagnerTail {
                w: BoundaryWord::new(i, false, w_len),
                w_bar: BoundaryWord::new(i, true, w_bar_len),
                index: -l.sign().exponent(),
                origin: TailOrigin::Occurrence { generator: i, position: pos, exponent: l.sign() },
                inside_remnant: rem.has_remnant() && rem.is_interior(i, pos),
            });
        }
    }
    tails
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointClass {
    /// Indices into the tail list, ascending.
    pub tails: Vec<usize>,
    pub index_sum: i64,
}

impl FixedPointClass {
    pub fn is_essential(&self) -> bool {
        self.index_sum != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointClassPartition {
    /// Classes ordered by their smallest tail index; the base tail's class is first.
    pub classes: Vec<FixedPointClass>,
    pub tail_count: usize,
}

impl FixedPointClassPartition {
    /// Classes with nonzero index sum.
    pub fn essential_count(&self) -> usize {
        self.classes.iter().filter(|c| c.is_essential()).count()
    }

    /// Tails related to no other tail.
    pub fn singleton_count(&self) -> usize {
        self.classes.iter().filter(|c| c.tails.len() == 1).count()
    }

    pub fn index_total(&self) -> i64 {
        self.classes.iter().map(|c| c.index_sum).sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: alloc::vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Polynomial prefix hashes modulo `2^61 - 1` of every image and every image
/// inverse, under two bases.
struct PrefixHashes {
    /// Indexed by `2 * generator + inverted`.
    tables: Vec<Vec<(u64, u64)>>,
}

const MODULUS: u64 = (1 << 61) - 1;
const BASES: (u64, u64) = (1_000_003, 998_244_353);

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(MODULUS)) as u64
}

impl PrefixHashes {
    fn new(phi: &Endomorphism) -> PrefixHashes {
        let mut tables = Vec::with_capacity(2 * phi.rank());
        for g in 0..phi.rank() {
            for inverted in [false, true] {
                let view = BoundaryWord { generator: g, inverted, len: phi.image(g).len() };
                let mut h = (0u64, 0u64);
                let mut table = Vec::with_capacity(view.len + 1);
                table.push(h);
                for l in view.letters(phi) {
                    let code = u64::from(l.signed().unsigned_abs()) * 2 + u64::from(l.sign() == Sign::Neg);
                    h = ((mul_mod(h.0, BASES.0) + code) % MODULUS, (mul_mod(h.1, BASES.1) + code) % MODULUS);
                    table.push(h);
                }
                tables.push(table);
            }
        }
        PrefixHashes { tables }
    }

    fn key(&self, b: &BoundaryWord) -> (usize, u64, u64) {
        let (h1, h2) = self.tables[2 * b.generator + usize::from(b.inverted)][b.len];
        (b.len, h1, h2)
    }
}

/// Partition of the tails of `φ` into fixed point classes.
///
/// Each boundary word is keyed to the first tail that carries it; every later
/// tail carrying the same word is merged into that one. This realises the
/// transitive closure without comparing all pairs. Words are bucketed by
/// hash and compared letter by letter inside a bucket, so the result is exact.
pub fn partition_tails(phi: &Endomorphism, tails: &[WagnerTail]) -> FixedPointClassPartition {
    let hashes = PrefixHashes::new(phi);
    let mut uf = UnionFind::new(tails.len());
    let mut first: BTreeMap<(usize, u64, u64), Vec<(BoundaryWord, usize)>> = BTreeMap::new();
    for (k, t) in tails.iter().enumerate() {
        for word in [t.w, t.w_bar] {
            let bucket = first.entry(hashes.key(&word)).or_default();
            match bucket.iter().find(|(b, _)| b.same_word(&word, phi)) {
                Some(&(_, owner)) => uf.union(owner, k),
                None => bucket.push((word, k)),
            }
        }
    }
    let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<FixedPointClass> = Vec::new();
    for (k, t) in tails.iter().enumerate() {
        let root = uf.find(k);
        let c = *by_root.entry(root).or_insert_with(|| {
            classes.push(FixedPointClass { tails: Vec::new(), index_sum: 0 });
            classes.len() - 1
        });
        classes[c].tails.push(k);
        classes[c].index_sum += i64::from(t.index);
    }
    FixedPointClassPartition { classes, tail_count: tails.len() }
}

pub fn fixed_point_classes(phi: &Endomorphism) -> FixedPointClassPartition {
    partition_tails(phi, &wagner_tails(phi))
}

/// Everything the tail analysis computes for one endomorphism.
#[derive(Debug, Clone)]
pub struct WagnerAnalysis {
    pub remnant: RemnantDecomposition,
    pub tails: Vec<WagnerTail>,
    pub partition: FixedPointClassPartition,
}

impl WagnerAnalysis {
    pub fn new(phi: &Endomorphism) -> WagnerAnalysis {
        let remnant = remnant_decomposition(phi);
        let tails = wagner_tails_with(phi, &remnant);
        let partition = partition_tails(phi, &tails);
        WagnerAnalysis { remnant, tails, partition }
    }

    fn certify(&self) -> Result<(), WagnerError> {
        if self.remnant.has_remnant() {
            Ok(())
        } else {
            Err(WagnerError::NoRemnant { partition: Box::new(self.partition.clone()) })
        }
    }

    /// `N(φ)`: classes with nonzero index sum.
    pub fn nielsen_number(&self) -> Result<usize, WagnerError> {
        self.certify().map(|_| self.partition.essential_count())
    }

    /// Tails directly related to no other tail.
    pub fn isolated_tail_count(&self) -> Result<usize, WagnerError> {
        self.certify().map(|_| self.partition.singleton_count())
    }

    /// `#W(φ)`: tails arising from a letter strictly inside the remnant.
    pub fn w_count(&self) -> Result<usize, WagnerError> {
        self.certify().map(|_| self.tails.iter().filter(|t| t.inside_remnant).count())
    }
}

pub fn nielsen_number(phi: &Endomorphism) -> Result<usize, WagnerError> {
    WagnerAnalysis::new(phi).nielsen_number()
}

pub fn isolated_tail_count(phi: &Endomorphism) -> Result<usize, WagnerError> {
    WagnerAnalysis::new(phi).isolated_tail_count()
}

pub fn w_count(phi: &Endomorphism) -> Result<usize, WagnerError> {
    WagnerAnalysis::new(phi).w_count()
}

/// `1 - Σ_i` (exponent sum of `a_i` in `φ(a_i)`).
pub fn lefschetz_number(phi: &Endomorphism) -> i64 {
    1 - (0..phi.rank()).map(|i| phi.image(i).exponent_sum(i)).sum::<i64>()
}
