use proptest::prelude::*;

use lyndon_bar::freelie::{expand, lie_bracket, rewrite_in_lyndon, LieElement};
use lyndon_bar::words::{is_lyndon, lyndon_words, lyndon_words_of_length, standard_factorization, LyndonWord, Word};

fn rotations_larger(letters: &[u8]) -> bool {
    (1..letters.len()).all(|k| {
        let mut r = letters[k..].to_vec();
        r.extend_from_slice(&letters[..k]);
        letters < r.as_slice()
    })
}

/// Number of binary Lyndon words of length n, by Moebius inversion.
fn necklace_count(n: usize) -> usize {
    fn mu(mut n: usize) -> i64 {
        let mut m = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let s: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mu(n / d) * (1i64 << d)).sum();
    (s / n as i64) as usize
}

proptest! {
    #[test]
    fn lyndon_means_strictly_below_its_rotations(letters in proptest::collection::vec(0u8..2, 1..12)) {
        let w = Word::new(letters.clone()).unwrap();
        prop_assert_eq!(is_lyndon(&w).unwrap(), rotations_larger(&letters));
    }

    #[test]
    fn factorization_is_standard(idx in any::<prop::sample::Index>(), n in 2usize..10) {
        let words = lyndon_words_of_length(n);
        let w = &words[idx.index(words.len())];
        let (u, v) = standard_factorization(w).unwrap();
        prop_assert_eq!(u.word().concat(v.word()), w.word().clone());
        prop_assert!(u < v);
        // v is the longest proper Lyndon suffix
        let letters = w.word().letters();
        for k in 1..letters.len() - v.weight() {
            prop_assert!(!is_lyndon(&Word::new(letters[k..].to_vec()).unwrap()).unwrap());
        }
    }

    #[test]
    fn bracket_is_antisymmetric(a in 0usize..14, b in 0usize..14) {
        let words: Vec<LyndonWord> = lyndon_words(5);
        let (x, y) = (LieElement::basis(words[a].clone()), LieElement::basis(words[b].clone()));
        prop_assert!(lie_bracket(&x, &y).plus(&lie_bracket(&y, &x)).is_zero());
    }

    #[test]
    fn rewriting_recovers_basis_elements(idx in any::<prop::sample::Index>(), n in 1usize..8) {
        let words = lyndon_words_of_length(n);
        let w = &words[idx.index(words.len())];
        prop_assert_eq!(rewrite_in_lyndon(&expand(w)).unwrap(), LieElement::basis(w.clone()));
    }
}

#[test]
fn lyndon_counts_match_necklace_formula() {
    for n in 1..=12 {
        assert_eq!(lyndon_words_of_length(n).len(), necklace_count(n), "length {n}");
    }
}
