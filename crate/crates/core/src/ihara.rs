//! Ihara's special derivations, the Ihara bracket, and the semidirect sum
//! `L[1;x] = L[x] ⊕ L[1]` with its structure constants.

use num_traits::One;

use crate::error::{Error, Result};
use crate::freelie::{lie_bracket, rewrite_in_lyndon, LieElement, StructureTable, WordPoly};
use crate::rational::Q;
use crate::words::{lyndon_words, Word};

/// Applies the associative extension of `D_f` to a word polynomial.
fn derive_words(f: &WordPoly, p: &WordPoly) -> WordPoly {
    // D_f(X1) = X1 f - f X1, D_f(X0) = 0
    let image_of_x1 = WordPoly::letter(1).commutator(f);
    let mut out = WordPoly::zero();
    for (w, c) in p.terms() {
        let letters = w.letters();
        for (i, _) in letters.iter().enumerate().filter(|(_, &l)| l == 1) {
            let prefix = WordPoly::monomial(Word::from_letters_unchecked(letters[..i].to_vec()), c.clone());
            let suffix = WordPoly::monomial(Word::from_letters_unchecked(letters[i + 1..].to_vec()), Q::one());
            out.add_scaled(&prefix.mul(&image_of_x1).mul(&suffix), &Q::one());
        }
    }
    out
}

/// `D_f(g)`: the derivation with `D_f(X0) = 0` and `D_f(X1) = [X1, f]`.
pub fn special_derivation(f: &LieElement, g: &LieElement) -> LieElement {
    rewrite_in_lyndon(&derive_words(&f.expand(), &g.expand()))
        .expect("derivations preserve the free Lie algebra")
}

/// `{f, g} = [f, g] + D_f(g) - D_g(f)`.
pub fn ihara_bracket(f: &LieElement, g: &LieElement) -> LieElement {
    let mut out = lie_bracket(f, g);
    out.add_scaled(&special_derivation(f, g), &Q::one());
    out.add_scaled(&special_derivation(g, f), &-Q::one());
    out
}

/// An element `f(x) + g(1)` of the semidirect sum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemidirectElement {
    pub x_part: LieElement,
    pub one_part: LieElement,
}

impl SemidirectElement {
    pub fn x(f: LieElement) -> Self {
        SemidirectElement { x_part: f, one_part: LieElement::zero() }
    }

    pub fn one(g: LieElement) -> Self {
        SemidirectElement { x_part: LieElement::zero(), one_part: g }
    }

    pub fn is_zero(&self) -> bool {
        self.x_part.is_zero() && self.one_part.is_zero()
    }

    pub fn add_scaled(&mut self, other: &SemidirectElement, c: &Q) {
        self.x_part.add_scaled(&other.x_part, c);
        self.one_part.add_scaled(&other.one_part, c);
    }
}

/// The bracket of `L[1;x]`: free bracket on `L[x]`, Ihara bracket on `L[1]`,
/// and `{g(1), f(x)} = D_g(f)(x)` on cross terms.
pub fn semidirect_bracket(a: &SemidirectElement, b: &SemidirectElement) -> SemidirectElement {
    let mut x_part = lie_bracket(&a.x_part, &b.x_part);
    x_part.add_scaled(&special_derivation(&a.one_part, &b.x_part), &Q::one());
    x_part.add_scaled(&special_derivation(&b.one_part, &a.x_part), &-Q::one());
    SemidirectElement { x_part, one_part: ihara_bracket(&a.one_part, &b.one_part) }
}

/// `beta^W_{U,V}` for every ordered pair (diagonal included) and
/// `gamma^W_{U,V}` for `U < V`, with `|U| + |V| <= max_weight`.
pub fn beta_gamma_tables(max_weight: usize) -> Result<(StructureTable, StructureTable)> {
    if max_weight < 2 {
        return Err(Error::InvalidInput("max_weight must be at least 2".into()));
    }
    let words = lyndon_words(max_weight - 1);
    let mut beta = StructureTable::default();
    let mut gamma = StructureTable::default();
    for u in &words {
        for v in &words {
            if u.weight() + v.weight() > max_weight {
                continue;
            }
            let fu = LieElement::basis(u.clone());
            let fv = LieElement::basis(v.clone());
            // {[U](x), [V](1)} = -D_[V]([U]) (x)
            let cross = semidirect_bracket(&SemidirectElement::x(fu.clone()), &SemidirectElement::one(fv.clone()));
            debug_assert!(cross.one_part.is_zero());
            beta.record(u, v, &cross.x_part);
            if u < v {
                gamma.record(u, v, &ihara_bracket(&fu, &fv));
            }
        }
    }
    Ok((beta, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::alpha_table;
    use crate::rational::q;
    use crate::words::LyndonWord;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lw(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    fn basis(s: &str) -> LieElement {
        LieElement::basis(lw(s))
    }

    fn random_lie(rng: &mut ChaCha8Rng, max_weight: usize) -> LieElement {
        let words = lyndon_words(max_weight);
        let mut e = LieElement::zero();
        for _ in 0..rng.gen_range(1..4) {
            e.add_term(words[rng.gen_range(0..words.len())].clone(), q(rng.gen_range(-2..=2)));
        }
        e
    }

    #[test]
    fn derivation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let f = random_lie(&mut rng, 4);
            assert!(special_derivation(&f, &LieElement::x0()).is_zero());
        }
        assert_eq!(special_derivation(&basis("0"), &basis("1")), basis("01").scaled(&q(-1)));
    }

    #[test]
    fn derivation_satisfies_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (x0, x1) = (LieElement::x0(), LieElement::x1());
        for _ in 0..25 {
            let f = random_lie(&mut rng, 4);
            let lhs = special_derivation(&f, &basis("01"));
            let mut rhs = lie_bracket(&special_derivation(&f, &x0), &x1);
            rhs.add_scaled(&lie_bracket(&x0, &special_derivation(&f, &x1)), &Q::one());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ihara_examples() {
        assert!(ihara_bracket(&LieElement::x0(), &LieElement::x1()).is_zero());
        let f = basis("001").plus(&basis("1"));
        assert!(ihara_bracket(&f, &f).is_zero());
    }

    #[test]
    fn derivation_commutator_is_derivation_of_ihara_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let f = random_lie(&mut rng, 3);
            let g = random_lie(&mut rng, 3);
            let h = ihara_bracket(&f, &g);
            for target in [LieElement::x1(), basis("01"), basis("011")] {
                let mut comm = special_derivation(&f, &special_derivation(&g, &target));
                comm.add_scaled(&special_derivation(&g, &special_derivation(&f, &target)), &-Q::one());
                assert_eq!(comm, special_derivation(&h, &target));
            }
        }
    }

    #[test]
    fn ihara_jacobi_on_basis_triples() {
        let words = lyndon_words(3);
        for a in &words {
            for b in &words {
                for c in &words {
                    if a.weight() + b.weight() + c.weight() > 5 {
                        continue;
                    }
                    let (a, b, c) = (
                        LieElement::basis(a.clone()),
                        LieElement::basis(b.clone()),
                        LieElement::basis(c.clone()),
                    );
                    let mut j = ihara_bracket(&ihara_bracket(&a, &b), &c);
                    j.add_scaled(&ihara_bracket(&ihara_bracket(&b, &c), &a), &Q::one());
                    j.add_scaled(&ihara_bracket(&ihara_bracket(&c, &a), &b), &Q::one());
                    assert!(j.is_zero());
                }
            }
        }
    }

    #[test]
    fn semidirect_restricts_to_free_bracket() {
        let alpha = alpha_table(6).unwrap();
        let words = lyndon_words(5);
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > 6 || u >= v {
                    continue;
                }
                let s = semidirect_bracket(
                    &SemidirectElement::x(LieElement::basis(u.clone())),
                    &SemidirectElement::x(LieElement::basis(v.clone())),
                );
                assert!(s.one_part.is_zero());
                for (w, c) in s.x_part.terms() {
                    assert_eq!(&alpha.get(w, u, v), c);
                }
                assert_eq!(
                    s.x_part.terms().len(),
                    alpha.iter().filter(|(_, a, b, _)| *a == u && *b == v).count()
                );
            }
        }
    }

    #[test]
    fn semidirect_cross_term_with_x0_is_alpha_row() {
        let alpha = alpha_table(5).unwrap();
        for v in lyndon_words(4).into_iter().filter(|v| v != &LyndonWord::zero()) {
            let s = semidirect_bracket(
                &SemidirectElement::x(LieElement::basis(v.clone())),
                &SemidirectElement::one(LieElement::x0()),
            );
            for (w, c) in s.x_part.terms() {
                assert_eq!(&alpha.get(w, &LyndonWord::zero(), &v), c);
            }
        }
    }

    #[test]
    fn semidirect_jacobi_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pick = |rng: &mut ChaCha8Rng| {
            let words = lyndon_words(2);
            let w = words[rng.gen_range(0..words.len())].clone();
            if rng.gen_bool(0.5) {
                SemidirectElement::x(LieElement::basis(w))
            } else {
                SemidirectElement::one(LieElement::basis(w))
            }
        };
        for _ in 0..40 {
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let mut j = semidirect_bracket(&semidirect_bracket(&a, &b), &c);
            j.add_scaled(&semidirect_bracket(&semidirect_bracket(&b, &c), &a), &Q::one());
            j.add_scaled(&semidirect_bracket(&semidirect_bracket(&c, &a), &b), &Q::one());
            assert!(j.is_zero());
        }
    }

    #[test]
    fn beta_gamma_are_integral_and_graded() {
        let (beta, gamma) = beta_gamma_tables(6).unwrap();
        assert!(beta.all_integral() && gamma.all_integral());
        for (w, u, v, _) in beta.iter().chain(gamma.iter()) {
            assert_eq!(w.weight(), u.weight() + v.weight());
        }
        assert_eq!(beta.get(&lw("01"), &lw("1"), &lw("0")), q(1));
        assert!(beta_gamma_tables(1).is_err());
    }
}
