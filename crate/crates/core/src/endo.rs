//! Endomorphisms of a free group, given by the images of the generators.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::word::{push_reducing, Letter, Sign, Word, WordError};

/// Default per-image length cap for [`Endomorphism::iterate`].
pub const DEFAULT_LENGTH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("an endomorphism needs rank at least 1")]
    ZeroRank,
    #[error("image of generator {generator}: {source}")]
    BadImage { generator: usize, source: WordError },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("image of generator {generator} in power {power} has {length} letters, over the cap of {cap}")]
    LengthCapExceeded { power: u32, generator: usize, length: usize, cap: usize },
    #[error("iteration exponent must be at least 1")]
    ZeroPower,
    #[error("not a permutation of 0..{rank}")]
    BadPermutation { rank: usize },
}

/// An endomorphism `φ` of the free group on `a_0, …, a_{m-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    /// The rank is the number of images; every image must use only those generators.
    pub fn new(images: Vec<Word>) -> Result<Endomorphism, EndoError> {
        if images.is_empty() {
            return Err(EndoError::ZeroRank);
        }
        let rank = images.len();
        for (generator, img) in images.iter().enumerate() {
            img.check_rank(rank).map_err(|source| EndoError::BadImage { generator, source })?;
        }
        Ok(Endomorphism { images })
    }

    /// Builds from one-based signed codes per image, reducing each image.
    pub fn from_signed(images: &[&[i32]]) -> Result<Endomorphism, EndoError> {
        let words = images
            .iter()
            .enumerate()
            .map(|(generator, codes)| Word::from_signed(codes).map_err(|source| EndoError::BadImage { generator, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Endomorphism::new(words)
    }

    pub fn identity(rank: usize) -> Endomorphism {
        assert!(rank >= 1, "rank must be positive");
        Endomorphism { images: (0..rank).map(|g| Word::letter(Letter::pos(g))).collect() }
    }

    /// The degree-`d` circle map `a ↦ a^d`.
    pub fn circle(degree: i64) -> Endomorphism {
        let letter = if degree >= 0 { Letter::pos(0) } else { Letter::neg(0) };
        let image = Word::from_vec_unchecked(alloc::vec![letter; degree.unsigned_abs() as usize]);
        Endomorphism { images: alloc::vec![image] }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of_letter(&self, l: Letter) -> Word {
        self.images[l.generator()].pow(l.sign())
    }

    /// Sum of image lengths.
    pub fn total_length(&self) -> usize {
        self.images.iter().map(Word::len).sum()
    }

    pub fn max_image_length(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Reduced image of `w`.
    pub fn apply(&self, w: &Word) -> Result<Word, EndoError> {
        w.check_rank(self.rank())
            .map_err(|_| EndoError::RankMismatch { expected: self.rank(), found: w.min_rank() })?;
        Ok(self.apply_unchecked(w.letters()))
    }

    pub(crate) fn apply_unchecked(&self, letters: &[Letter]) -> Word {
        let mut out = Vec::new();
        for &l in letters {
            let img = self.images[l.generator()].letters();
            match l.sign() {
                Sign::Pos => img.iter().for_each(|&x| push_reducing(&mut out, x)),
                Sign::Neg => img.iter().rev().for_each(|&x| push_reducing(&mut out, x.inverse())),
            }
        }
        Word::from_vec_unchecked(out)
    }

    /// `self ∘ other`, i.e. `a_i ↦ self(other(a_i))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, EndoError> {
        if self.rank() != other.rank() {
            return Err(EndoError::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(Endomorphism { images: other.images.iter().map(|w| self.apply_unchecked(w.letters())).collect() })
    }

    /// `φ^n` by repeated composition. Fails as soon as any image of an
    /// intermediate power is longer than `length_cap` letters.
    pub fn iterate(&self, n: u32, length_cap: usize) -> Result<Endomorphism, EndoError> {
        let mut result = None;
        self.try_powers(n, length_cap, |k, p| {
            if k == n {
                result = Some(p.clone());
            }
        })?;
        result.ok_or(EndoError::ZeroPower)
    }

    /// Calls `visit(k, φ^k)` for k = 1..=n. Stops with the cap error on overflow.
    pub fn try_powers<F>(&self, n: u32, length_cap: usize, mut visit: F) -> Result<(), EndoError>
    where
        F: FnMut(u32, &Endomorphism),
    {
        if n == 0 {
            return Err(EndoError::ZeroPower);
        }
        let mut power = self.clone();
        check_cap(&power, 1, length_cap)?;
        visit(1, &power);
        for k in 2..=n {
            power = power.compose(self)?;
            check_cap(&power, k, length_cap)?;
            visit(k, &power);
        }
        Ok(())
    }

    /// Conjugates by the generator relabeling `a_i ↦ a_{perm[i]}`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Endomorphism, EndoError> {
        let rank = self.rank();
        let mut seen = alloc::vec![false; rank];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || core::mem::replace(&mut seen[p], true)) {
            return Err(EndoError::BadPermutation { rank });
        }
        let mut images = alloc::vec![Word::identity(); rank];
        for (i, img) in self.images.iter().enumerate() {
            images[perm[i]] =
                Word::from_vec_unchecked(img.letters().iter().map(|l| Letter::new(perm[l.generator()], l.sign())).collect());
        }
        Ok(Endomorphism { images })
    }
}

fn check_cap(power: &Endomorphism, k: u32, cap: usize) -> Result<(), EndoError> {
    match power.images.iter().position(|w| w.len() > cap) {
        Some(generator) => Err(EndoError::LengthCapExceeded {
            power: k,
            generator,
            length: power.images[generator].len(),
            cap,
        }),
        None => Ok(()),
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The letter rule format `a->abbaB; b->baBab`, numeric generator names past rank 26.
impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, img) in self.images.iter().enumerate() {
            if g > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}->{}", Letter::pos(g), img)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_generator() -> Endomorphism {
        Endomorphism::from_signed(&[&[1, 2, 3], &[3, -1, 2, 1], &[-1, -3, 1, 2]]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let phi = three_generator();
        assert_eq!(phi.apply(&Word::from_signed(&[1]).unwrap()).unwrap(), Word::from_signed(&[1, 2, 3]).unwrap());
        assert!(phi.apply(&Word::identity()).unwrap().is_identity());
        // abc · cAba: nothing cancels at the boundary
        assert_eq!(
            phi.apply(&Word::from_signed(&[1, 2]).unwrap()).unwrap(),
            Word::from_signed(&[1, 2, 3, 3, -1, 2, 1]).unwrap()
        );
        assert!(matches!(phi.apply(&Word::from_signed(&[4]).unwrap()), Err(EndoError::RankMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let phi = three_generator();
        assert_eq!(phi.compose(&Endomorphism::identity(3)).unwrap(), phi);
        assert_eq!(Endomorphism::circle(2).compose(&Endomorphism::circle(3)).unwrap(), Endomorphism::circle(6));
        assert!(phi.compose(&Endomorphism::identity(2)).is_err());
    }

    #[test]
    fn square_of_three_generator_matches_bracketed_expansion() {
        // φ²(a) = φ(a)φ(b)φ(c) = abc · cAba · ACab; only the aA at the second boundary cancels
        let phi = three_generator();
        let sq = phi.compose(&phi).unwrap();
        let expected = Word::reduce(
            [&[1, 2, 3][..], &[3, -1, 2, 1], &[-1, -3, 1, 2]]
                .iter()
                .flat_map(|c| c.iter().map(|&x| Letter::from_signed(x).unwrap())),
        );
        assert_eq!(sq.image(0), &expected);
        assert_eq!(expected, Word::from_signed(&[1, 2, 3, 3, -1, 2, -3, 1, 2]).unwrap());
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(Endomorphism::identity(2).iterate(5, 10).unwrap(), Endomorphism::identity(2));
        assert_eq!(Endomorphism::circle(2).iterate(3, 100).unwrap(), Endomorphism::circle(8));
        assert_eq!(
            Endomorphism::circle(2).iterate(4, 10),
            Err(EndoError::LengthCapExceeded { power: 4, generator: 0, length: 16, cap: 10 })
        );
        assert_eq!(Endomorphism::circle(2).iterate(0, 10), Err(EndoError::ZeroPower));
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let phi = three_generator();
        assert!(phi.relabel(&[0, 0, 1]).is_err());
        assert!(phi.relabel(&[0, 1]).is_err());
        assert_eq!(phi.relabel(&[0, 1, 2]).unwrap(), phi);
    }

    #[test]
    fn display_letter_rules() {
        assert_eq!(alloc::format!("{}", three_generator()), "a->abc; b->cAba; c->ACab");
    }
}
