//! The remnant: for each generator `a_i`, the maximal subword of `φ(a_i)`
//! that survives free reduction in every product `φ(a_j)^{±1} φ(a_i) φ(a_k)^{±1}`,
//! where `φ(a_i)^{-1}` is excluded as a neighbour on either side.
//!
//! Cancellation against a fixed neighbour only eats a prefix (or suffix), so
//! the remnant is what is left after the worst left erosion and the worst
//! right erosion. When the two erosions meet, some product swallows the
//! whole image and the generator has no remnant.

use alloc::vec::Vec;
use core::ops::Range;

use crate::endo::Endomorphism;
use crate::word::{cancellation, Letter, Sign, Word};

/// Remnant spans, one per generator, as half-open zero-based ranges into `φ(a_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemnantDecomposition {
    spans: Vec<Option<Range<usize>>>,
}

/// Worst-case cancellation of `φ(a_i)` against its allowed neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erosion {
    pub left: usize,
    pub right: usize,
}

/// Allowed neighbours of `φ(a_i)`: every `φ(a_j)^{±1}` except `φ(a_i)^{-1}`.
pub fn allowed_neighbours(phi: &Endomorphism, i: usize) -> impl Iterator<Item = Word> + '_ {
    (0..phi.rank())
        .flat_map(|j| [(j, Sign::Pos), (j, Sign::Neg)])
        .filter(move |&(j, s)| !(j == i && s == Sign::Neg))
        .map(|(j, s)| phi.image(j).pow(s))
}

pub fn erosion(phi: &Endomorphism, i: usize) -> Erosion {
    let y = phi.image(i);
    let mut e = Erosion { left: 0, right: 0 };
    for z in allowed_neighbours(phi, i) {
        e.left = e.left.max(cancellation(&z, y));
        e.right = e.right.max(cancellation(y, &z));
    }
    e
}

pub fn remnant_decomposition(phi: &Endomorphism) -> RemnantDecomposition {
    let spans = (0..phi.rank())
        .map(|i| {
            let len = phi.image(i).len();
            if len == 0 {
                return None;
            }
            let e = erosion(phi, i);
            (e.left + e.right < len).then(|| e.left..len - e.right)
        })
        .collect();
    RemnantDecomposition { spans }
}

impl RemnantDecomposition {
    pub fn rank(&self) -> usize {
        self.spans.len()
    }

    pub fn span(&self, generator: usize) -> Option<Range<usize>> {
        self.spans[generator].clone()
    }

    pub fn spans(&self) -> &[Option<Range<usize>>] {
        &self.spans
    }

    /// `Rem_φ a_i` as a slice of the image.
    pub fn remnant<'a>(&self, phi: &'a Endomorphism, generator: usize) -> Option<&'a [Letter]> {
        self.span(generator).map(|r| &phi.image(generator).letters()[r])
    }

    pub fn remnant_len(&self, generator: usize) -> usize {
        self.spans[generator].as_ref().map_or(0, |r| r.len())
    }

    /// Every generator has a nontrivial remnant.
    pub fn has_remnant(&self) -> bool {
        self.spans.iter().all(Option::is_some)
    }

    /// Position `pos` of `φ(a_i)` is a letter of the remnant other than its first or last.
    pub fn is_interior(&self, generator: usize, pos: usize) -> bool {
        match &self.spans[generator] {
            Some(r) => pos > r.start && pos + 1 < r.end,
            None => false,
        }
    }

    /// Membership in `R_k`: every remnant has at least `k` letters.
    pub fn in_rk(&self, k: usize) -> bool {
        self.has_remnant() && (0..self.rank()).all(|g| self.remnant_len(g) >= k)
    }

    /// `Φ_{a_i}(Rem_φ a_j)`, or `None` when `a_j` has no remnant.
    pub fn remnant_letter_count(&self, phi: &Endomorphism, i: usize, j: usize) -> Option<usize> {
        self.remnant(phi, j).map(|rem| rem.iter().filter(|l| l.generator() == i).count())
    }

    /// Largest `l` with `φ ∈ S_l`: the least `Φ_{a_i}(Rem_φ a_j)` over all pairs.
    /// `None` without remnant; `Some(0)` means the map is in no `S_l`.
    pub fn sl_level(&self, phi: &Endomorphism) -> Option<usize> {
        if !self.has_remnant() {
            return None;
        }
        let m = self.rank();
        (0..m)
            .flat_map(|j| (0..m).map(move |i| (i, j)))
            .map(|(i, j)| self.remnant_letter_count(phi, i, j).unwrap_or(0))
            .min()
    }

    /// Membership in `S_l`: every remnant contains every generator at least `l` times.
    pub fn in_sl(&self, phi: &Endomorphism, l: usize) -> bool {
        self.sl_level(phi).is_some_and(|level| level >= l)
    }
}

pub fn has_remnant(phi: &Endomorphism) -> bool {
    remnant_decomposition(phi).has_remnant()
}

pub fn in_rk(phi: &Endomorphism, k: usize) -> bool {
    remnant_decomposition(phi).in_rk(k)
}

pub fn in_sl(phi: &Endomorphism, l: usize) -> bool {
    remnant_decomposition(phi).in_sl(phi, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_generator() -> Endomorphism {
        Endomorphism::from_signed(&[&[1, 2, 2, 1, -2], &[2, 1, -2, 1, 2]]).unwrap()
    }

    fn three_generator() -> Endomorphism {
        Endomorphism::from_signed(&[&[1, 2, 3], &[3, -1, 2, 1], &[-1, -3, 1, 2]]).unwrap()
    }

    #[test]
    fn underlined_remnants() {
        let phi = two_generator();
        let rem = remnant_decomposition(&phi);
        assert_eq!(rem.span(0), Some(0..4));
        assert_eq!(rem.span(1), Some(1..5));
        assert_eq!(Word::from_reduced(rem.remnant(&phi, 0).unwrap().to_vec()).unwrap(), Word::from_signed(&[1, 2, 2, 1]).unwrap());
        assert_eq!(Word::from_reduced(rem.remnant(&phi, 1).unwrap().to_vec()).unwrap(), Word::from_signed(&[1, -2, 1, 2]).unwrap());
        assert!(rem.has_remnant());
    }

    #[test]
    fn identity_keeps_every_generator() {
        let rem = remnant_decomposition(&Endomorphism::identity(2));
        assert_eq!(rem.spans(), &[Some(0..1), Some(0..1)]);
        assert!(!rem.in_rk(2));
    }

    #[test]
    fn conjugation_erodes_both_ends() {
        let phi = Endomorphism::from_signed(&[&[1, 2, -1], &[2]]).unwrap();
        let rem = remnant_decomposition(&phi);
        assert_eq!(rem.span(0), Some(1..2));
        assert_eq!(erosion(&phi, 0), Erosion { left: 1, right: 1 });
    }

    #[test]
    fn empty_image_has_no_remnant() {
        let phi = Endomorphism::from_signed(&[&[], &[1, 2]]).unwrap();
        assert!(!has_remnant(&phi));
        assert_eq!(remnant_decomposition(&phi).span(0), None);
    }

    #[test]
    fn meeting_erosions_kill_the_remnant() {
        // φ(b) = (ab)^{-1}, so φ(a)φ(b) = 1
        let phi = Endomorphism::from_signed(&[&[1, 2], &[-2, -1]]).unwrap();
        assert_eq!(erosion(&phi, 0), Erosion { left: 2, right: 2 });
        assert!(!has_remnant(&phi));
    }

    #[test]
    fn single_letter_erosions_leave_a_letter() {
        // φ(a)φ(b) = a·a erases b; φ(a)·φ(b) on the left erases the B of φ(b)
        let phi = Endomorphism::from_signed(&[&[1, 2], &[-2, 1]]).unwrap();
        let rem = remnant_decomposition(&phi);
        assert_eq!(rem.spans(), &[Some(0..1), Some(1..2)]);
        assert!(rem.has_remnant());
    }

    #[test]
    fn membership_examples() {
        let phi = two_generator();
        assert!(in_rk(&phi, 4));
        assert!(!in_rk(&phi, 5));
        assert!(in_sl(&phi, 2));
        assert!(!in_sl(&phi, 3));
        let psi = three_generator();
        assert!(in_sl(&psi, 1));
        assert!(!in_sl(&psi, 2));
        assert_eq!(remnant_decomposition(&psi).sl_level(&psi), Some(1));
    }

    #[test]
    fn circle_remnant_is_full_word() {
        for d in [-3i64, -1, 1, 4] {
            let phi = Endomorphism::circle(d);
            assert_eq!(remnant_decomposition(&phi).span(0), Some(0..d.unsigned_abs() as usize));
        }
        assert!(!has_remnant(&Endomorphism::circle(0)));
    }

    #[test]
    fn interior_positions() {
        let rem = remnant_decomposition(&two_generator());
        assert!(!rem.is_interior(1, 1));
        assert!(rem.is_interior(1, 2));
        assert!(rem.is_interior(1, 3));
        assert!(!rem.is_interior(1, 4));
    }
}
