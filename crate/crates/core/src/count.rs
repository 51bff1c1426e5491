//! Counting and uniform sampling of the ball `G_p` of
//! reduced words of length at most `p` in the free group of rank `m`.

use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use thiserror::Error;

use crate::word::{Letter, Sign, Word};

/// Default cap on the number of words an enumeration may emit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("enumeration of {count} words exceeds the budget of {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
}

/// Number of reduced words of length exactly `p`: `2m(2m-1)^{p-1}`, and 1 for `p = 0`.
pub fn count_words_exact(m: usize, p: u32) -> BigUint {
    if p == 0 {
        return BigUint::one();
    }
    BigUint::from(2 * m) * BigUint::from(2 * m - 1).pow(p - 1)
}

/// `|G_p|`. Uses `(m(2m-1)^p - 1)/(m-1)` for `m ≥ 2`; the circle case is `2p + 1`.
pub fn count_words_at_most(m: usize, p: u32) -> BigUint {
    assert!(m >= 1, "rank must be positive");
    if m == 1 {
        return BigUint::from(2 * p as u64 + 1);
    }
    (BigUint::from(m) * BigUint::from(2 * m - 1).pow(p) - 1u32) / BigUint::from(m - 1)
}

/// The `k`-th letter in the fixed order `a_0, a_0⁻¹, a_1, a_1⁻¹, …`.
fn nth_letter(k: usize) -> Letter {
    Letter::new(k / 2, if k % 2 == 0 { Sign::Pos } else { Sign::Neg })
}

/// The `d`-th letter (among `2m - 1`) that may follow `prev` without cancelling.
fn nth_follower(prev: Letter, d: usize) -> Letter {
    let forbidden = prev.inverse();
    let fk = 2 * forbidden.generator() + usize::from(forbidden.sign() == Sign::Neg);
    nth_letter(if d >= fk { d + 1 } else { d })
}

/// Enumerates every reduced word of length `≤ p` exactly once, in shortlex order.
pub fn enumerate_words(m: usize, p: u32, budget: u64) -> Result<WordEnumerator, CountError> {
    if m == 0 {
        return Err(CountError::ZeroRank);
    }
    let count = count_words_at_most(m, p);
    if count > BigUint::from(budget) {
        return Err(CountError::BudgetExceeded { count, budget });
    }
    Ok(WordEnumerator { m, p: p as usize, digits: Vec::new(), done: false, started: false })
}

/// Odometer over digit strings: the first digit ranges over `2m` letters,
/// later digits over the `2m - 1` non-cancelling followers.
#[derive(Debug, Clone)]
pub struct WordEnumerator {
    m: usize,
    p: usize,
    digits: Vec<usize>,
    done: bool,
    started: bool,
}

impl WordEnumerator {
    fn decode(&self) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(self.digits.len());
        for (i, &d) in self.digits.iter().enumerate() {
            let l = if i == 0 { nth_letter(d) } else { nth_follower(letters[i - 1], d) };
            letters.push(l);
        }
        Word::from_vec_unchecked(letters)
    }

    fn advance(&mut self) {
        let len = self.digits.len();
        for i in (0..len).rev() {
            let radix = if i == 0 { 2 * self.m } else { 2 * self.m - 1 };
            self.digits[i] += 1;
            if self.digits[i] < radix {
                return;
            }
            self.digits[i] = 0;
        }
        // wrapped around: move to the next length
        if len == self.p {
            self.done = true;
        } else {
            self.digits = alloc::vec![0; len + 1];
        }
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.started {
            self.advance();
            if self.done {
                return None;
            }
        }
        self.started = true;
        Some(self.decode())
    }
}

/// Per-length counts `|{w : |w| = j}|` for `j = 0..=p` together with their total.
#[derive(Debug, Clone)]
pub struct BallCounts {
    pub by_length: Vec<BigUint>,
    pub total: BigUint,
}

impl BallCounts {
    pub fn new(m: usize, p: u32) -> BallCounts {
        let by_length: Vec<BigUint> = (0..=p).map(|j| count_words_exact(m, j)).collect();
        let total = by_length.iter().sum();
        BallCounts { by_length, total }
    }

    /// Length of a uniform element of `G_p`.
    pub fn sample_length<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.by_length.len() == 1 {
            return 0;
        }
        let mut r = match self.total.to_u64() {
            Some(t) => BigUint::from(rng.gen_range(0..t)),
            None => rng.gen_biguint_below(&self.total),
        };
        for (j, c) in self.by_length.iter().enumerate() {
            if r < *c {
                return j;
            }
            r -= c;
        }
        unreachable!("r is below the total")
    }
}

/// A uniform random reduced word of length exactly `len`.
pub fn sample_word_of_length<R: Rng + ?Sized>(m: usize, len: usize, rng: &mut R) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for i in 0..len {
        let l = if i == 0 { nth_letter(rng.gen_range(0..2 * m)) } else { nth_follower(letters[i - 1], rng.gen_range(0..2 * m - 1)) };
        letters.push(l);
    }
    Word::from_vec_unchecked(letters)
}

/// A uniform random element of `G_p`.
pub fn sample_uniform_word<R: Rng + ?Sized>(m: usize, p: u32, rng: &mut R) -> Word {
    let counts = BallCounts::new(m, p);
    sample_word_of_length(m, counts.sample_length(rng), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_examples() {
        assert_eq!(count_words_exact(2, 2), BigUint::from(12u32));
        assert_eq!(count_words_at_most(2, 2), BigUint::from(17u32));
        assert_eq!(count_words_at_most(3, 0), BigUint::one());
        assert_eq!(count_words_at_most(1, 2), BigUint::from(5u32));
    }

    #[test]
    fn at_most_is_the_partial_sum() {
        for m in 1..=4 {
            for p in 0..=8 {
                let sum: BigUint = (0..=p).map(|j| count_words_exact(m, j)).sum();
                assert_eq!(sum, count_words_at_most(m, p), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let words: Vec<Word> = enumerate_words(1, 2, 100).unwrap().collect();
        let expected: Vec<Word> =
            [&[][..], &[1], &[-1], &[1, 1], &[-1, -1]].iter().map(|c| Word::from_signed(c).unwrap()).collect();
        assert_eq!(words, expected);
        assert_eq!(enumerate_words(2, 1, 100).unwrap().count(), 5);
        assert_eq!(enumerate_words(2, 2, 100).unwrap().count(), 17);
        assert_eq!(enumerate_words(2, 0, 100).unwrap().collect::<Vec<_>>(), alloc::vec![Word::identity()]);
    }

    #[test]
    fn enumeration_is_distinct_and_reduced() {
        let words: Vec<Word> = enumerate_words(3, 4, 10_000).unwrap().collect();
        let set: BTreeSet<Word> = words.iter().cloned().collect();
        assert_eq!(set.len(), words.len());
        assert!(words.iter().all(|w| Word::from_reduced(w.letters().to_vec()).is_ok() && w.len() <= 4));
    }

    #[test]
    fn enumeration_budget() {
        assert!(matches!(enumerate_words(2, 3, 50), Err(CountError::BudgetExceeded { .. })));
    }

    #[test]
    fn sampling_p_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(sample_uniform_word(3, 0, &mut rng).is_identity());
        }
    }

    #[test]
    fn big_ball_sampling_uses_bigint_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let counts = BallCounts::new(3, 60);
        assert!(counts.total.to_u64().is_none());
        let len = counts.sample_length(&mut rng);
        assert!(len <= 60);
        let w = sample_word_of_length(3, len, &mut rng);
        assert_eq!(w.len(), len);
    }
}
