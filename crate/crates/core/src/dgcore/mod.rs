//! Finitely presented graded-commutative dg algebras with Koszul signs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{add_into, Q};

mod models;

pub use models::*;

/// `ε^gr(σ)` for the action `v_1⊗…⊗v_n ↦ ±v_{σ⁻¹(1)}⊗…⊗v_{σ⁻¹(n)}`.
///
/// `sigma[i]` is the position that factor `i` moves to.
pub fn koszul_sign(sigma: &[usize], degrees: &[i64]) -> Result<i32> {
    if sigma.len() != degrees.len() {
        return Err(Error::InvalidInput(format!(
            "permutation of size {} with {} degrees",
            sigma.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidInput(format!("{sigma:?} is not a permutation")));
        }
    }
    let mut odd = false;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] && degrees[i] % 2 != 0 && degrees[j] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    Ok(if odd { -1 } else { 1 })
}

/// A sorted list of generator indices; the empty monomial is the unit.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64, weight: usize) -> Self {
        Generator { name: name.into(), degree, weight }
    }
}

/// Sorts `factors` into a monomial, returning the Koszul sign, or `None` if an
/// odd generator repeats.
fn normalize(factors: &[usize], degrees: &[i64]) -> Option<(Monomial, bool)> {
    let mut m = factors.to_vec();
    let mut odd = false;
    // insertion sort, tracking swaps of odd pairs
    for i in 1..m.len() {
        let mut j = i;
        while j > 0 && m[j - 1] > m[j] {
            if degrees[m[j - 1]] % 2 != 0 && degrees[m[j]] % 2 != 0 {
                odd = !odd;
            }
            m.swap(j - 1, j);
            j -= 1;
        }
    }
    if m.windows(2).any(|p| p[0] == p[1] && degrees[p[0]] % 2 != 0) {
        return None;
    }
    Some((m, odd))
}

/// Linear combination of monomials in some presentation's generators.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CdgaElement {
    terms: BTreeMap<Monomial, Q>,
}

impl CdgaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::default();
        e.terms.insert(Vec::new(), Q::one());
        e
    }

    pub fn generator(i: usize) -> Self {
        let mut e = Self::default();
        e.terms.insert(vec![i], Q::one());
        e
    }

    /// `c · f_1 ⋯ f_k`, sorted with its Koszul sign.
    pub fn product_of(factors: &[usize], c: Q, degrees: &[i64]) -> Self {
        let mut e = Self::default();
        if let Some((m, odd)) = normalize(factors, degrees) {
            add_into(&mut e.terms, m, if odd { -c } else { c });
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn coeff(&self, m: &[usize]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        add_into(&mut self.terms, m, c);
    }

    pub fn add_scaled(&mut self, other: &CdgaElement, c: &Q) {
        for (m, x) in &other.terms {
            add_into(&mut self.terms, m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> CdgaElement {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &CdgaElement) -> CdgaElement {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn minus(&self, other: &CdgaElement) -> CdgaElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub(crate) fn mul_with(&self, other: &CdgaElement, degrees: &[i64]) -> CdgaElement {
        let mut out = Self::zero();
        let mut buf = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                buf.clear();
                buf.extend_from_slice(m1);
                buf.extend_from_slice(m2);
                if let Some((m, odd)) = normalize(&buf, degrees) {
                    let c = c1 * c2;
                    add_into(&mut out.terms, m, if odd { -c } else { c });
                }
            }
        }
        out
    }
}

impl fmt::Debug for CdgaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m, c.to_string()))).finish()
    }
}

/// Generators with a differential; `d² = 0`, degree +1 and weight preservation
/// are checked by [`CdgaPresentation::new`].
#[derive(Clone, Debug)]
pub struct CdgaPresentation {
    generators: Vec<Generator>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
    differential: Vec<CdgaElement>,
}

impl CdgaPresentation {
    pub fn new(generators: Vec<Generator>, differential: Vec<CdgaElement>) -> Result<Self> {
        let p = Self::new_unchecked(generators, differential)?;
        p.check_grading()?;
        if let Some((name, dd)) = p.d_squared_defect() {
            return Err(Error::InvalidInput(format!("d^2 != 0 on {name}: {dd:?}")));
        }
        Ok(p)
    }

    /// Builds without checking gradings or `d² = 0`. Meant for negative tests.
    pub fn new_unchecked(generators: Vec<Generator>, differential: Vec<CdgaElement>) -> Result<Self> {
        if generators.len() != differential.len() {
            return Err(Error::InvalidInput("one differential per generator is required".into()));
        }
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate generator {}", g.name)));
            }
        }
        for d in &differential {
            if let Some(bad) = d.terms.keys().flatten().find(|&&i| i >= generators.len()) {
                return Err(Error::InvalidInput(format!("unknown generator index {bad}")));
            }
        }
        let degrees = generators.iter().map(|g| g.degree).collect();
        Ok(CdgaPresentation { generators, degrees, index, differential })
    }

    fn check_grading(&self) -> Result<()> {
        for (g, d) in self.generators.iter().zip(&self.differential) {
            for m in d.terms.keys() {
                if self.monomial_degree(m) != g.degree + 1 || self.monomial_weight(m) != g.weight {
                    return Err(Error::InvalidInput(format!(
                        "d({}) has a term of the wrong degree or weight",
                        g.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// The first generator with `d(d g) != 0`, if any.
    pub fn d_squared_defect(&self) -> Option<(String, CdgaElement)> {
        (0..self.generators.len()).find_map(|i| {
            let dd = self.d(&self.differential[i]);
            (!dd.is_zero()).then(|| (self.generators[i].name.clone(), dd))
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn generator_differential(&self, i: usize) -> &CdgaElement {
        &self.differential[i]
    }

    pub fn monomial_degree(&self, m: &[usize]) -> i64 {
        m.iter().map(|&i| self.degrees[i]).sum()
    }

    pub fn monomial_weight(&self, m: &[usize]) -> usize {
        m.iter().map(|&i| self.generators[i].weight).sum()
    }

    pub fn monomial_name(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        m.iter().map(|&i| self.generators[i].name.as_str()).collect::<Vec<_>>().join("*")
    }

    pub fn mul(&self, a: &CdgaElement, b: &CdgaElement) -> CdgaElement {
        a.mul_with(b, &self.degrees)
    }

    /// Product of generator indices, sorted with its sign.
    pub fn product(&self, factors: &[usize], c: Q) -> CdgaElement {
        CdgaElement::product_of(factors, c, &self.degrees)
    }

    /// The differential on a monomial, by the graded Leibniz rule.
    pub fn d_monomial(&self, m: &[usize]) -> CdgaElement {
        let mut out = CdgaElement::zero();
        let mut prefix_degree = 0;
        for (i, &g) in m.iter().enumerate() {
            let dg = &self.differential[g];
            if !dg.is_zero() {
                let left = CdgaElement::product_of(&m[..i], Q::one(), &self.degrees);
                let right = CdgaElement::product_of(&m[i + 1..], Q::one(), &self.degrees);
                let term = self.mul(&self.mul(&left, dg), &right);
                let sign = if prefix_degree % 2 != 0 { -Q::one() } else { Q::one() };
                out.add_scaled(&term, &sign);
            }
            prefix_degree += self.degrees[g];
        }
        out
    }

    pub fn d(&self, e: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (m, c) in &e.terms {
            out.add_scaled(&self.d_monomial(m), c);
        }
        out
    }

    /// Human-readable rendering of an element.
    pub fn render(&self, e: &CdgaElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        e.terms
            .iter()
            .map(|(m, c)| format!("({c}){}", self.monomial_name(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A Lie coalgebra with differential, on a finite graded basis.
///
/// The cobracket is given in tensor form: `δ(x_i) = Σ c · x_j ⊗ x_k`.
#[derive(Clone, Debug, Default)]
pub struct CoLiePresentation {
    pub basis: Vec<Generator>,
    pub differential: Vec<Vec<(usize, Q)>>,
    pub cobracket: Vec<Vec<(usize, usize, Q)>>,
}

/// The cobar-coLie construction: the free graded-commutative algebra on the
/// suspension `s x` (degree `|x| + 1`) with
/// `d(s x) = -s(d x) - Σ (-1)^{|x_1|} (s x_1)(s x_2)`.
///
/// Fails with `NotACoLieCoalgebra` when the result does not square to zero.
pub fn cobar_colie(l: &CoLiePresentation) -> Result<CdgaPresentation> {
    let n = l.basis.len();
    if l.differential.len() != n || l.cobracket.len() != n {
        return Err(Error::InvalidInput("coLie data must cover every basis element".into()));
    }
    let generators: Vec<Generator> = l
        .basis
        .iter()
        .map(|x| Generator::new(x.name.clone(), x.degree + 1, x.weight))
        .collect();
    let degrees: Vec<i64> = generators.iter().map(|g| g.degree).collect();
    let mut differential = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = CdgaElement::zero();
        for (j, c) in &l.differential[i] {
            check_index(*j, n)?;
            d.add_term(vec![*j], -c.clone());
        }
        for (j, k, c) in &l.cobracket[i] {
            check_index(*j, n)?;
            check_index(*k, n)?;
            let c = if l.basis[*j].degree % 2 != 0 { c.clone() } else { -c.clone() };
            d.add_scaled(&CdgaElement::product_of(&[*j, *k], c, &degrees), &Q::one());
        }
        differential.push(d);
    }
    let p = CdgaPresentation::new_unchecked(generators, differential)?;
    p.check_grading()?;
    if let Some((name, dd)) = p.d_squared_defect() {
        return Err(Error::NotACoLieCoalgebra(format!("{name}: {}", p.render(&dd))));
    }
    Ok(p)
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::InvalidInput(format!("basis index {i} out of range")));
    }
    Ok(())
}

/// An algebra map given on generators.
#[derive(Clone, Debug)]
pub struct CdgaMorphism {
    images: Vec<CdgaElement>,
    target_degrees: Vec<i64>,
}

impl CdgaMorphism {
    /// Checks that images preserve degree and weight and that `d f = f d`
    /// on every generator.
    pub fn new(source: &CdgaPresentation, target: &CdgaPresentation, images: Vec<CdgaElement>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::InvalidMorphism("one image per source generator is required".into()));
        }
        let f = CdgaMorphism { images, target_degrees: target.degrees.clone() };
        for (i, g) in source.generators.iter().enumerate() {
            for m in f.images[i].terms.keys() {
                if m.iter().any(|&j| j >= target.len()) {
                    return Err(Error::InvalidMorphism(format!("image of {} is not over the target", g.name)));
                }
                if target.monomial_degree(m) != g.degree || target.monomial_weight(m) != g.weight {
                    return Err(Error::InvalidMorphism(format!(
                        "image of {} changes degree or weight",
                        g.name
                    )));
                }
            }
            let lhs = target.d(&f.images[i]);
            let rhs = f.apply(source.generator_differential(i));
            if lhs != rhs {
                return Err(Error::InvalidMorphism(format!(
                    "not a chain map on {}: d f = {}, f d = {}",
                    g.name,
                    target.render(&lhs),
                    target.render(&rhs)
                )));
            }
        }
        Ok(f)
    }

    pub fn image(&self, i: usize) -> &CdgaElement {
        &self.images[i]
    }

    pub fn apply(&self, e: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (m, c) in &e.terms {
            let mut prod = CdgaElement::one();
            for &g in m {
                prod = prod.mul_with(&self.images[g], &self.target_degrees);
                if prod.is_zero() {
                    break;
                }
            }
            out.add_scaled(&prod, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn koszul_sign_examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]).unwrap(), 1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]).unwrap(), 1);
        assert!(koszul_sign(&[1, 0], &[1]).is_err());
        assert!(koszul_sign(&[1, 1], &[1, 1]).is_err());
    }

    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        // apply b first, then a: factor i goes to b[i], then to a[b[i]]
        b.iter().map(|&j| a[j]).collect()
    }

    #[test]
    fn koszul_sign_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(1..7);
            let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..4)).collect();
            let mut s: Vec<usize> = (0..n).collect();
            let mut t: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                s.swap(i, rng.gen_range(0..=i));
                t.swap(i, rng.gen_range(0..=i));
            }
            // after t, the factor originally at i sits at t[i]
            let mut moved = vec![0; n];
            for i in 0..n {
                moved[t[i]] = degrees[i];
            }
            let lhs = koszul_sign(&compose(&s, &t), &degrees).unwrap();
            let rhs = koszul_sign(&t, &degrees).unwrap() * koszul_sign(&s, &moved).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    fn toy() -> CdgaPresentation {
        let gens = vec![
            Generator::new("a", 1, 1),
            Generator::new("b", 1, 1),
            Generator::new("c", 2, 1),
            Generator::new("e", 1, 2),
        ];
        let degrees = [1, 1, 2, 1];
        let diff = vec![
            CdgaElement::zero(),
            CdgaElement::zero(),
            CdgaElement::zero(),
            CdgaElement::product_of(&[0, 1], q(1), &degrees),
        ];
        CdgaPresentation::new(gens, diff).unwrap()
    }

    #[test]
    fn graded_commutativity() {
        let p = toy();
        let (a, b, c) = (CdgaElement::generator(0), CdgaElement::generator(1), CdgaElement::generator(2));
        assert!(p.mul(&a, &a).is_zero());
        assert_eq!(p.mul(&a, &b), p.mul(&b, &a).scaled(&q(-1)));
        assert_eq!(p.mul(&c, &a), p.mul(&a, &c));
        assert!(!p.mul(&c, &c).is_zero());
    }

    fn random_element(rng: &mut ChaCha8Rng, n: usize) -> CdgaElement {
        let degrees = [1, 1, 2, 1];
        let mut e = CdgaElement::zero();
        for _ in 0..rng.gen_range(1..4) {
            let len = rng.gen_range(0..4);
            let factors: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            e.add_scaled(&CdgaElement::product_of(&factors, q(rng.gen_range(-3..=3)), &degrees), &Q::one());
        }
        e
    }

    #[test]
    fn product_is_associative() {
        let p = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let (a, b, c) = (random_element(&mut rng, 4), random_element(&mut rng, 4), random_element(&mut rng, 4));
            assert_eq!(p.mul(&p.mul(&a, &b), &c), p.mul(&a, &p.mul(&b, &c)));
        }
    }

    #[test]
    fn differential_is_a_derivation() {
        let p = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = CdgaElement::product_of(&[rng.gen_range(0..4)], q(1), p.degrees());
            let b = random_element(&mut rng, 4);
            let mut rhs = p.mul(&p.d(&a), &b);
            let sign = if p.monomial_degree(a.terms().keys().next().unwrap()) % 2 != 0 { q(-1) } else { q(1) };
            rhs.add_scaled(&p.mul(&a, &p.d(&b)), &sign);
            assert_eq!(p.d(&p.mul(&a, &b)), rhs);
        }
    }

    #[test]
    fn presentation_rejects_bad_data() {
        let gens = vec![Generator::new("a", 1, 1), Generator::new("b", 1, 1)];
        let bad_degree = vec![CdgaElement::generator(1), CdgaElement::zero()];
        assert!(CdgaPresentation::new(gens.clone(), bad_degree).is_err());
        assert!(CdgaPresentation::new(gens.clone(), vec![CdgaElement::zero()]).is_err());
        let dup = vec![Generator::new("a", 1, 1), Generator::new("a", 1, 1)];
        assert!(CdgaPresentation::new(dup, vec![CdgaElement::zero(), CdgaElement::zero()]).is_err());
    }

    #[test]
    fn abelian_colie_has_zero_differential() {
        let l = CoLiePresentation {
            basis: vec![Generator::new("x", 0, 1), Generator::new("y", 0, 1)],
            differential: vec![vec![], vec![]],
            cobracket: vec![vec![], vec![]],
        };
        let p = cobar_colie(&l).unwrap();
        assert!(p.generators().iter().all(|g| g.degree == 1));
        assert!((0..2).all(|i| p.generator_differential(i).is_zero()));
    }

    #[test]
    fn cobar_suspends_the_internal_differential() {
        // y in degree -1 with d y = x; zero cobracket
        let l = CoLiePresentation {
            basis: vec![Generator::new("x", 0, 1), Generator::new("y", -1, 1)],
            differential: vec![vec![], vec![(0, q(1))]],
            cobracket: vec![vec![], vec![]],
        };
        let p = cobar_colie(&l).unwrap();
        assert_eq!(p.generators()[1].degree, 0);
        assert_eq!(p.generator_differential(1), &CdgaElement::generator(0).scaled(&q(-1)));
    }

    #[test]
    fn cobar_of_a_lie_coalgebra_of_dimension_three() {
        // dual of the Heisenberg bracket [x,y] = z
        let l = CoLiePresentation {
            basis: vec![Generator::new("x", 0, 1), Generator::new("y", 0, 1), Generator::new("z", 0, 2)],
            differential: vec![vec![], vec![], vec![]],
            cobracket: vec![vec![], vec![], vec![(0, 1, q(1)), (1, 0, q(-1))]],
        };
        let p = cobar_colie(&l).unwrap();
        assert_eq!(p.generator_differential(2), &p.product(&[0, 1], q(-2)));
    }

    #[test]
    fn cobar_detects_failure_of_co_jacobi() {
        // dual to [x,y] = x, [y,z] = y, which violates Jacobi on (x, y, z);
        // y and z get weight 0 so the bracket is weight-homogeneous
        let l = CoLiePresentation {
            basis: vec![Generator::new("x", 0, 1), Generator::new("y", 0, 0), Generator::new("z", 0, 0)],
            differential: vec![vec![], vec![], vec![]],
            cobracket: vec![
                vec![(0, 1, q(1)), (1, 0, q(-1))],
                vec![(1, 2, q(1)), (2, 1, q(-1))],
                vec![],
            ],
        };
        assert!(matches!(cobar_colie(&l), Err(Error::NotACoLieCoalgebra(_))));
    }

    #[test]
    fn morphisms_must_commute_with_d() {
        let p = toy();
        let id: Vec<CdgaElement> = (0..4).map(CdgaElement::generator).collect();
        let f = CdgaMorphism::new(&p, &p, id).unwrap();
        let e = p.product(&[0, 1, 2], q(3));
        assert_eq!(f.apply(&e), e);
        // swapping a and b is not a chain map: d e = ab but f(ab) = ba = -ab
        let swap = vec![
            CdgaElement::generator(1),
            CdgaElement::generator(0),
            CdgaElement::generator(2),
            CdgaElement::generator(3),
        ];
        assert!(matches!(CdgaMorphism::new(&p, &p, swap), Err(Error::InvalidMorphism(_))));
    }
}
