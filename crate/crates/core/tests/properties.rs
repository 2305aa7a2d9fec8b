//! Property tests for the structural invariants: involution and morphism
//! laws, parse/format round trips, square-free closure, run-length recovery,
//! and encounter-engine soundness.

use std::sync::Arc;

use proptest::prelude::*;

use revform::cyclic::{build_cyclic, find_bad_factor, run_length_encode, ExponentWord};
use revform::encounter::{encounters, oracle_encounters};
use revform::formula::{make_phi, parse_formula};
use revform::word::{square_free_stream, Alphabet, Morphism, Word};

fn word_over(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k as u8, 0..=max_len).prop_map(move |ids| {
        Word::from_ids(Alphabet::canonical(k).unwrap(), ids).unwrap()
    })
}

fn exponent_word(max_value: u32, max_len: usize) -> impl Strategy<Value = ExponentWord> {
    prop::collection::vec(1..=max_value, 1..=max_len)
        .prop_map(|v| ExponentWord::new(v).unwrap())
}

proptest! {
    #[test]
    fn reverse_is_an_involution(w in word_over(3, 16)) {
        prop_assert_eq!(w.reverse().reverse(), w);
    }

    #[test]
    fn reverse_of_concat_swaps(u in word_over(3, 8), v in word_over(3, 8)) {
        let lhs = u.concat(&v).unwrap().reverse();
        let rhs = v.reverse().concat(&u.reverse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_display_parses_back(w in word_over(4, 16)) {
        let again = Word::parse(w.alphabet(), &w.to_string()).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn morphism_is_a_homomorphism(u in word_over(3, 8), v in word_over(3, 8)) {
        let tern = Alphabet::new("012").unwrap();
        let ext = Alphabet::new("012ab").unwrap();
        let g = Morphism::new(&tern, &ext, &[('0', "0ab"), ('1', "1ab"), ('2', "2ab")]).unwrap();
        let joined = g.apply(&u.concat(&v).unwrap()).unwrap();
        let split = g.apply(&u).unwrap().concat(&g.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(joined, split);
        prop_assert_eq!(g.apply(&u).unwrap().len(), 3 * u.len());
    }

    #[test]
    fn square_free_stream_factors_are_square_free(
        start in 0usize..40, len in 0usize..20
    ) {
        let w = square_free_stream(64).unwrap();
        prop_assert!(w.factor(start, len.min(64 - start)).is_square_free());
    }

    #[test]
    fn run_length_encoding_recovers_exponents(
        w in exponent_word(4, 10), m in 2usize..5
    ) {
        let alphabet = Alphabet::canonical(m).unwrap();
        let c = build_cyclic(m, &w, &alphabet).unwrap();
        prop_assert_eq!(run_length_encode(&c).unwrap(), w);
    }

    #[test]
    fn exponent_csv_round_trips(w in exponent_word(9, 12)) {
        prop_assert_eq!(ExponentWord::parse(&w.to_csv()).unwrap(), w);
    }

    #[test]
    fn formula_text_round_trips(k in 1usize..8) {
        let phi = make_phi(k).unwrap();
        prop_assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn witnesses_always_validate(w in word_over(3, 10)) {
        let phi = make_phi(1).unwrap();
        if let Some(witness) = encounters(&w, &phi) {
            prop_assert!(witness.validate(&w, &phi).unwrap());
        }
    }

    #[test]
    fn encounters_are_monotone_in_factors(
        w in word_over(2, 10), start in 0usize..10, len in 1usize..10
    ) {
        let phi = make_phi(1).unwrap();
        let start = start.min(w.len());
        let u = w.factor(start, len.min(w.len() - start));
        if encounters(&u, &phi).is_some() {
            prop_assert!(encounters(&w, &phi).is_some());
        }
    }

    #[test]
    fn engine_matches_oracle_on_small_words(w in word_over(2, 8)) {
        for formula in ["x y1 x . y1^R", "x x", "x y x . y^R"] {
            let f = parse_formula(formula).unwrap();
            prop_assert_eq!(
                encounters(&w, &f).is_some(),
                oracle_encounters(&w, &f),
                "formula {} on {}", formula, w
            );
        }
    }

    #[test]
    fn relabeling_preserves_encounters(w in word_over(3, 9)) {
        let phi = make_phi(1).unwrap();
        let alphabet: Arc<Alphabet> = Alphabet::canonical(3).unwrap();
        // Rotate letter identities 0 -> 1 -> 2 -> 0.
        let rotated = Word::from_ids(
            Arc::clone(&alphabet),
            w.ids().iter().map(|&id| (id + 1) % 3).collect(),
        )
        .unwrap();
        prop_assert_eq!(
            encounters(&w, &phi).is_some(),
            encounters(&rotated, &phi).is_some()
        );
    }

    #[test]
    fn bad_factor_witnesses_check_out(w in exponent_word(2, 12)) {
        if let Some(bf) = find_bad_factor(&w, 1, 4).unwrap() {
            let e = w.exponents();
            let (s, n, j) = (bf.start, bf.n, bf.j);
            prop_assert_eq!(n % 4, (4 - j) % 4);
            let x1 = &e[s..s + n];
            let mid = &e[s + n..s + n + j];
            let x2 = &e[s + n + j..s + 2 * n + j];
            prop_assert_eq!(mid, &bf.alphas[..]);
            prop_assert!(mid.iter().sum::<u32>() >= 1);
            prop_assert!(x1[0] >= x2[0] && x1[n - 1] <= x2[n - 1]);
            for i in 1..n.saturating_sub(1) {
                prop_assert_eq!(x1[i], x2[i]);
            }
        }
    }
}
