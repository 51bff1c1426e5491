use nielsen::cli::estimate_parallel;
use nielsen::{format_endomorphism, parse_endomorphism, ParseOptions};
use nielsen_core::density::{estimate_density_sharded, Predicate};
use nielsen_core::{Endomorphism, Word};
use proptest::prelude::*;

fn word(rank: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank as i32, any::<bool>()), 0..8)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, n)| nielsen_core::Letter::from_signed(if n { -(g + 1) } else { g + 1 }).unwrap())))
}

fn endomorphism(max_rank: usize) -> impl Strategy<Value = Endomorphism> {
    (1..=max_rank).prop_flat_map(|m| prop::collection::vec(word(m), m).prop_map(|w| Endomorphism::new(w).unwrap()))
}

proptest! {
    #[test]
    fn format_then_parse_is_identity(phi in endomorphism(5)) {
        let text = format_endomorphism(&phi);
        let back = parse_endomorphism(&text, ParseOptions::default()).unwrap();
        prop_assert_eq!(&back.map, &phi);
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(format_endomorphism(&back.map), text);
    }

    #[test]
    fn whitespace_is_ignored(phi in endomorphism(4), seed in any::<u64>()) {
        let text = format_endomorphism(&phi);
        let mut spaced = String::new();
        for (i, c) in text.chars().enumerate() {
            spaced.push(c);
            if (seed >> (i % 64)) & 1 == 1 {
                spaced.push(if i % 3 == 0 { '\t' } else { ' ' });
            }
        }
        prop_assert_eq!(parse_endomorphism(&spaced, ParseOptions::default()).unwrap().map, phi);
    }

    #[test]
    fn structured_round_trip(phi in endomorphism(4)) {
        let text = nielsen::format::format_structured(&phi).to_string();
        prop_assert_eq!(parse_endomorphism(&text, ParseOptions::default()).unwrap().map, phi);
    }
}

#[test]
fn parallel_estimates_match_the_sequential_ones() {
    for (pred, p, shards) in [(Predicate::Sl(1), 6, 8), (Predicate::HasRemnant, 3, 3), (Predicate::Rk(2), 10, 1)] {
        let seq = estimate_density_sharded(pred, 2, p, 1001, 77, shards).unwrap();
        assert_eq!(estimate_parallel(pred, 2, p, 1001, 77, shards), seq);
    }
}
