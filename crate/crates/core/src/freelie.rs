//! The free Lie algebra on `X0, X1` over the rationals, in the Lyndon bracket basis.
//!
//! Lie elements are expanded into the free associative algebra of words
//! ([`WordPoly`]) and rewritten back by triangular elimination: the smallest
//! word in the expansion of `[W]` is `W` itself, with coefficient one.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{add_into, is_integer, Q};
use crate::words::{is_lyndon, lyndon_words, standard_factorization, LyndonWord, Word};

/// A noncommutative polynomial: finite linear combination of words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Word, Q>,
}

impl WordPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn letter(l: u8) -> Self {
        Self::monomial(Word::from_letters_unchecked(vec![l]), Q::one())
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        add_into(&mut self.terms, w, c);
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &WordPoly, c: &Q) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> WordPoly {
        let mut out = WordPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// The commutator `pq - qp`.
    pub fn commutator(&self, other: &WordPoly) -> WordPoly {
        let mut out = self.mul(other);
        out.add_scaled(&other.mul(self), &-Q::one());
        out
    }

    /// Splits into weight-homogeneous components keyed by word length.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, WordPoly> {
        let mut out: BTreeMap<usize, WordPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len()).or_default().add_term(w.clone(), c.clone());
        }
        out
    }
}

impl fmt::Debug for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}*{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of the free Lie algebra in the Lyndon bracket basis.
#[derive(Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct LieElement {
    terms: BTreeMap<LyndonWord, Q>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element `[w]`.
    pub fn basis(w: LyndonWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, Q::one());
        e
    }

    pub fn x0() -> Self {
        Self::basis(LyndonWord::zero())
    }

    pub fn x1() -> Self {
        Self::basis(LyndonWord::one())
    }

    pub fn add_term(&mut self, w: LyndonWord, c: Q) {
        add_into(&mut self.terms, w, c);
    }

    pub fn terms(&self) -> &BTreeMap<LyndonWord, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &LyndonWord) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Q) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> LieElement {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn minus(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    /// Image in the word algebra.
    pub fn expand(&self) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&expand(w), c);
        }
        out
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}*[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

thread_local! {
    static EXPANSIONS: RefCell<HashMap<LyndonWord, WordPoly>> = RefCell::new(HashMap::new());
}

/// Expansion of the Lyndon bracket `[w]` into words, with `[u, v] = uv - vu`
/// along the standard factorization.
pub fn expand(w: &LyndonWord) -> WordPoly {
    if let Some(p) = EXPANSIONS.with(|m| m.borrow().get(w).cloned()) {
        return p;
    }
    let p = if w.is_letter() {
        WordPoly::letter(w.word().letters()[0])
    } else {
        let (u, v) = standard_factorization(w).expect("length >= 2");
        expand(&u).commutator(&expand(&v))
    };
    EXPANSIONS.with(|m| m.borrow_mut().insert(w.clone(), p.clone()));
    p
}

/// The nested bracket `[w]` written out in `X_0, X_1`, e.g. `[X_0,[X_0,X_1]]`.
pub fn bracketing(w: &LyndonWord) -> String {
    if w.is_letter() {
        return format!("X_{}", w.word().letters()[0]);
    }
    let (u, v) = standard_factorization(w).expect("length >= 2");
    format!("[{},{}]", bracketing(&u), bracketing(&v))
}

/// Writes a Lie polynomial in the Lyndon bracket basis.
///
/// Repeatedly eliminates the lexicographically smallest word of each
/// homogeneous component; that word must be Lyndon, otherwise the input is
/// not in the free Lie algebra.
pub fn rewrite_in_lyndon(p: &WordPoly) -> Result<LieElement> {
    let mut out = LieElement::zero();
    for (_, mut rest) in p.homogeneous_components() {
        while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if w.is_empty() || !is_lyndon(&w)? {
                return Err(Error::NotALieElement(format!("{rest:?}")));
            }
            let lw = LyndonWord::from_word_unchecked(w);
            rest.add_scaled(&expand(&lw), &-c.clone());
            out.add_term(lw, c);
        }
    }
    Ok(out)
}

/// The Lie bracket, computed as a commutator of expansions.
pub fn lie_bracket(f: &LieElement, g: &LieElement) -> LieElement {
    rewrite_in_lyndon(&f.expand().commutator(&g.expand()))
        .expect("commutators of Lie polynomials are Lie polynomials")
}

/// Structure constants `c^W_{U,V}` indexed by `(W, U, V)`; absent keys are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureTable {
    entries: BTreeMap<(LyndonWord, LyndonWord, LyndonWord), Q>,
}

impl StructureTable {
    pub fn get(&self, w: &LyndonWord, u: &LyndonWord, v: &LyndonWord) -> Q {
        self.entries
            .get(&(w.clone(), u.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn insert(&mut self, w: LyndonWord, u: LyndonWord, v: LyndonWord, c: Q) {
        add_into(&mut self.entries, (w, u, v), c);
    }

    /// Nonzero entries in `(W, U, V)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&LyndonWord, &LyndonWord, &LyndonWord, &Q)> {
        self.entries.iter().map(|((w, u, v), c)| (w, u, v, c))
    }

    /// Nonzero entries with target `w`.
    pub fn row<'a>(&'a self, w: &'a LyndonWord) -> impl Iterator<Item = (&'a LyndonWord, &'a LyndonWord, &'a Q)> + 'a {
        // "0" is the smallest Lyndon word
        self.entries
            .range((w.clone(), LyndonWord::zero(), LyndonWord::zero())..)
            .take_while(move |((x, _, _), _)| x == w)
            .map(|((_, u, v), c)| (u, v, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn all_integral(&self) -> bool {
        self.entries.values().all(is_integer)
    }

    /// Records every coefficient of `e` as the entry `(W, u, v)`.
    pub(crate) fn record(&mut self, u: &LyndonWord, v: &LyndonWord, e: &LieElement) {
        for (w, c) in e.terms() {
            self.insert(w.clone(), u.clone(), v.clone(), c.clone());
        }
    }
}

/// `[[U],[V]] = sum_W alpha^W_{U,V} [W]` for Lyndon `U < V`, `|U| + |V| <= max_weight`.
pub fn alpha_table(max_weight: usize) -> Result<StructureTable> {
    if max_weight < 2 {
        return Err(Error::InvalidInput("max_weight must be at least 2".into()));
    }
    let words = lyndon_words(max_weight - 1);
    let mut table = StructureTable::default();
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            if u.weight() + v.weight() > max_weight {
                continue;
            }
            let e = lie_bracket(&LieElement::basis(u.clone()), &LieElement::basis(v.clone()));
            table.record(u, v, &e);
        }
    }
    Ok(table)
}
