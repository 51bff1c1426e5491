//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use nielsen_core::density::{sample_endomorphism, shard_rng};
use nielsen_core::endo::Endomorphism;
use nielsen_core::remnant::remnant_decomposition;
use nielsen_core::word::{Letter, Word};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Letters as signed codes, ±(generator + 1).
pub fn signed_letter(rank: usize) -> impl Strategy<Value = i32> {
    (0..rank as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -(g + 1) } else { g + 1 })
}

/// Raw (possibly unreduced) letter strings.
pub fn raw_word(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(signed_letter(rank), 0..=max_len)
}

pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    raw_word(rank, max_len).prop_map(|v| naive_reduce(&v))
}

pub fn endomorphism(max_rank: usize, max_len: usize) -> impl Strategy<Value = Endomorphism> {
    (1..=max_rank).prop_flat_map(move |m| {
        prop::collection::vec(word(m, max_len), m).prop_map(|imgs| Endomorphism::new(imgs).unwrap())
    })
}

pub fn endomorphism_of_rank(m: usize, max_len: usize) -> impl Strategy<Value = Endomorphism> {
    prop::collection::vec(word(m, max_len), m).prop_map(|imgs| Endomorphism::new(imgs).unwrap())
}

/// Repeatedly deletes the leftmost cancelling pair until none is left.
pub fn naive_reduce(codes: &[i32]) -> Word {
    let mut v = codes.to_vec();
    while let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] == -v[i + 1]) {
        v.drain(i..i + 2);
    }
    Word::from_signed(&v).unwrap()
}

/// Positions of the middle factor that survive free reduction of `left · mid · right`.
fn surviving(left: &Word, mid: &Word, right: &Word) -> Vec<usize> {
    let mut stack: Vec<(i32, Option<usize>)> = Vec::new();
    let tagged = left
        .to_signed()
        .into_iter()
        .map(|c| (c, None))
        .chain(mid.to_signed().into_iter().enumerate().map(|(i, c)| (c, Some(i))))
        .chain(right.to_signed().into_iter().map(|c| (c, None)));
    for (c, tag) in tagged {
        match stack.last() {
            Some(&(top, _)) if top == -c => {
                stack.pop();
            }
            _ => stack.push((c, tag)),
        }
    }
    stack.into_iter().filter_map(|(_, t)| t).collect()
}

/// Remnant of each generator by intersecting survivors over every allowed pair of neighbours.
/// Returns zero-based half-open spans.
pub fn brute_force_remnant(phi: &Endomorphism) -> Vec<Option<std::ops::Range<usize>>> {
    let m = phi.rank();
    (0..m)
        .map(|i| {
            let y = phi.image(i);
            let neighbours: Vec<Word> = (0..m)
                .flat_map(|j| [phi.image(j).clone(), phi.image(j).inverse()].into_iter().enumerate().map(move |(s, w)| (j, s, w)))
                .filter(|&(j, s, _)| !(j == i && s == 1))
                .map(|(_, _, w)| w)
                .collect();
            let mut alive = vec![true; y.len()];
            for l in &neighbours {
                for r in &neighbours {
                    let keep = surviving(l, y, r);
                    for (p, a) in alive.iter_mut().enumerate() {
                        *a &= keep.contains(&p);
                    }
                }
            }
            let first = alive.iter().position(|&a| a)?;
            let last = alive.iter().rposition(|&a| a).unwrap();
            assert!(alive[first..=last].iter().all(|&a| a), "survivors must be contiguous");
            Some(first..last + 1)
        })
        .collect()
}

/// Draws maps of rank `m` at radius `p` until one lies in `S_l`.
pub fn sample_in_sl(m: usize, l: usize, p: u32, rng: &mut ChaCha8Rng) -> Endomorphism {
    loop {
        let phi = sample_endomorphism(m, p, rng);
        if remnant_decomposition(&phi).in_sl(&phi, l) {
            return phi;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    shard_rng(seed, 0)
}

/// A random map with rank in `1..=max_rank` and images of raw length at most `max_len`, reduced.
pub fn random_map(rng: &mut ChaCha8Rng, max_rank: usize, max_len: usize) -> Endomorphism {
    let m = rng.gen_range(1..=max_rank);
    let images = (0..m)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            let codes: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(0..m) as i32 + 1;
                    if rng.gen_bool(0.5) { g } else { -g }
                })
                .collect();
            naive_reduce(&codes)
        })
        .collect();
    Endomorphism::new(images).unwrap()
}

/// `Σ_i (B^n)_{ii}` by summing over every closed walk of generators, without matrix powers.
pub fn closed_walks(phi: &Endomorphism, n: u32) -> u64 {
    let m = phi.rank();
    let b = |g: usize, h: usize| phi.image(g).letters().iter().filter(|l: &&Letter| l.generator() == h).count() as u64;
    fn walk(b: &dyn Fn(usize, usize) -> u64, m: usize, start: usize, cur: usize, left: u32) -> u64 {
        if left == 0 {
            return u64::from(cur == start);
        }
        (0..m).map(|h| b(cur, h) * walk(b, m, start, h, left - 1)).sum()
    }
    (0..m).map(|s| walk(&b, m, s, s, n)).sum()
}
