//! Reduced words in a free group of finite rank.
//!
//! Generators are indexed from zero. A [`Word`] never contains an adjacent
//! cancelling pair; every constructor reduces or rejects its input.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Neg};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {generator} out of range for rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },
    #[error("zero is not a valid signed letter code")]
    ZeroLetter,
    #[error("word is not reduced: letters {position} and {} cancel", position + 1)]
    NotReduced { position: usize },
}

/// Exponent of a letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn exponent(self) -> i32 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A generator or its inverse, stored as a nonzero signed code `±(g + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, sign: Sign) -> Letter {
        let code = i32::try_from(generator + 1).expect("generator index fits in i32");
        Letter(code * sign.exponent())
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, Sign::Pos)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, Sign::Neg)
    }

    /// Builds a letter from the one-based signed code used by the structured
    /// format: `2` is `a_2`, `-2` is its inverse.
    pub fn from_signed(code: i32) -> Result<Letter, WordError> {
        if code == 0 {
            Err(WordError::ZeroLetter)
        } else {
            Ok(Letter(code))
        }
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Returns the letter raised to `sign`.
    pub fn pow(self, sign: Sign) -> Letter {
        match sign {
            Sign::Pos => self,
            Sign::Neg => self.inverse(),
        }
    }

    /// Letter symbol: `a`..`z` and `A`..`Z` for inverses, `None` past rank 26.
    pub fn symbol(self) -> Option<char> {
        let g = self.generator();
        if g >= 26 {
            return None;
        }
        let base = if self.0 > 0 { b'a' } else { b'A' };
        Some((base + g as u8) as char)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbol() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "[{}]", self.0),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A reduced word; the empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(alloc::vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut out = Vec::new();
        for l in raw {
            push_reducing(&mut out, l);
        }
        Word(out)
    }

    /// Like [`Word::reduce`] but rejects generators outside the rank.
    pub fn reduce_in_rank<I: IntoIterator<Item = Letter>>(raw: I, rank: usize) -> Result<Word, WordError> {
        let mut out = Vec::new();
        for l in raw {
            check_generator(l, rank)?;
            push_reducing(&mut out, l);
        }
        Ok(Word(out))
    }

    /// Accepts an already reduced sequence, reporting the first cancelling pair otherwise.
    pub fn from_reduced(letters: Vec<Letter>) -> Result<Word, WordError> {
        if let Some(position) = letters.windows(2).position(|p| p[0] == p[1].inverse()) {
            return Err(WordError::NotReduced { position });
        }
        Ok(Word(letters))
    }

    /// Reduces a sequence of one-based signed codes.
    pub fn from_signed(codes: &[i32]) -> Result<Word, WordError> {
        let letters = codes.iter().map(|&c| Letter::from_signed(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, sign: Sign) -> Word {
        match sign {
            Sign::Pos => self.clone(),
            Sign::Neg => self.inverse(),
        }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let k = cancellation(self, other);
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * k);
        out.extend_from_slice(&self.0[..self.len() - k]);
        out.extend_from_slice(&other.0[k..]);
        Word(out)
    }

    /// Appends `other`, cancelling at the boundary.
    pub fn append(&mut self, other: &[Letter]) {
        for &l in other {
            push_reducing(&mut self.0, l);
        }
    }

    /// Number of occurrences of `a_g` or its inverse.
    pub fn letter_count(&self, generator: usize) -> usize {
        self.0.iter().filter(|l| l.generator() == generator).count()
    }

    /// Signed exponent sum of `a_g` (the abelianization coordinate).
    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator() == generator)
            .map(|l| i64::from(l.sign().exponent()))
            .sum()
    }

    /// Largest generator index plus one, zero for the identity.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WordError> {
        self.0.iter().try_for_each(|&l| check_generator(l, rank))
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word(letters)
    }
}

/// Number of letters cancelled when reducing `u · v`.
pub fn cancellation(u: &Word, v: &Word) -> usize {
    u.0.iter().rev().zip(v.0.iter()).take_while(|(x, y)| **x == y.inverse()).count()
}

fn check_generator(l: Letter, rank: usize) -> Result<(), WordError> {
    if l.generator() < rank {
        Ok(())
    } else {
        Err(WordError::GeneratorOutOfRange { generator: l.generator(), rank })
    }
}

#[inline]
pub(crate) fn push_reducing(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Word {
        Word::letter(l)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word::reduce(iter)
    }
}

impl AsRef<[Letter]> for Word {
    fn as_ref(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Letters `a`..`z` (uppercase for inverses) when every generator fits,
/// otherwise a bracketed list of signed one-based codes. The identity is `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        if self.min_rank() <= 26 {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            f.write_str("[")?;
            for (i, l) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", l.signed())?;
            }
            f.write_str("]")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn w(codes: &[i32]) -> Word {
        Word::from_signed(codes).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w(&[1, -1]).is_identity());
        assert_eq!(w(&[1, 2, -2, 1]), w(&[1, 1]));
        let phi_a = w(&[1, 2, 2, 1, -2]);
        assert_eq!(phi_a.len(), 5);
        assert_eq!(format!("{phi_a}"), "abbaB");
    }

    #[test]
    fn reduce_checks_rank() {
        let raw = [Letter::pos(0), Letter::pos(3)];
        assert_eq!(
            Word::reduce_in_rank(raw, 2),
            Err(WordError::GeneratorOutOfRange { generator: 3, rank: 2 })
        );
        assert_eq!(Letter::from_signed(0), Err(WordError::ZeroLetter));
    }

    #[test]
    fn from_reduced_rejects_cancelling_pairs() {
        let err = Word::from_reduced(alloc::vec![Letter::pos(0), Letter::pos(1), Letter::neg(1)]).unwrap_err();
        assert_eq!(err, WordError::NotReduced { position: 1 });
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w(&[1, 2]).concat(&w(&[-2, 3])), w(&[1, 3]));
        let u = w(&[1, 2, 2, 1, -2]);
        let v = w(&[2, 1, -2, 1, 2]);
        assert_eq!(&u * &v, w(&[1, 2, 2, 1, 1, -2, 1, 2]));
        assert!(u.concat(&u.inverse()).is_identity());
    }

    #[test]
    fn invert_examples() {
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(w(&[1]).inverse(), w(&[-1]));
        assert_eq!(w(&[2, 1, -2, 1, 2]).inverse(), w(&[-2, -1, 2, -1, -2]));
    }

    #[test]
    fn letter_counts() {
        let u = w(&[1, 2, 2, 1, -2]);
        assert_eq!(u.letter_count(0), 2);
        assert_eq!(u.letter_count(1), 3);
        assert_eq!(Word::identity().letter_count(2), 0);
        assert_eq!(u.exponent_sum(1), 1);
    }

    #[test]
    fn display_past_rank_26_is_numeric() {
        assert_eq!(format!("{}", w(&[1, -27])), "[1 -27]");
        assert_eq!(format!("{}", Word::identity()), "1");
    }
}
