//! The reduced bar construction of a presented cdga: differential,
//! deconcatenation, shuffle product, the projector onto indecomposables and
//! the induced cobracket.
//!
//! Slots are nonconstant monomials. A slot of algebra degree `d` contributes
//! `d - 1` to the bar degree.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::dgcore::{CdgaMorphism, CdgaPresentation, Monomial};
use crate::error::{Error, Result};
use crate::rational::{add_into, frac, Q};

mod lift;
mod sample;
mod trees;
mod verify;

pub use lift::*;
pub use sample::*;
pub use trees::*;
pub use verify::*;

/// A tensor word `[a_1|…|a_n]`; the empty word is the unit.
pub type BarWord = Vec<Monomial>;

#[derive(Clone, Default, PartialEq, Eq)]
pub struct BarElement {
    terms: BTreeMap<BarWord, Q>,
}

impl BarElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word.
    pub fn unit() -> Self {
        let mut b = Self::default();
        b.terms.insert(Vec::new(), Q::one());
        b
    }

    /// `c · [a_1|…|a_n]`; every slot must be a nonconstant monomial.
    pub fn word(slots: BarWord, c: Q) -> Result<Self> {
        if slots.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidElement("a slot is a constant".into()));
        }
        if slots.iter().any(|s| s.windows(2).any(|w| w[0] > w[1])) {
            return Err(Error::InvalidElement("slot monomials must list generators in increasing order".into()));
        }
        let mut b = Self::default();
        add_into(&mut b.terms, slots, c);
        Ok(b)
    }

    /// A single word with coefficient 1; the empty word gives the unit.
    pub(crate) fn basis_word(w: &[Monomial]) -> Self {
        let mut b = Self::default();
        b.terms.insert(w.to_vec(), Q::one());
        b
    }

    /// `[g_1|…|g_n]` for generator indices.
    pub fn generators(gens: &[usize]) -> Self {
        let mut b = Self::default();
        b.terms.insert(gens.iter().map(|&g| vec![g]).collect(), Q::one());
        b
    }

    pub fn terms(&self) -> &BTreeMap<BarWord, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &[Monomial]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add(&mut self, w: BarWord, c: Q) {
        add_into(&mut self.terms, w, c);
    }

    pub fn add_scaled(&mut self, other: &BarElement, c: &Q) {
        for (w, x) in &other.terms {
            add_into(&mut self.terms, w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> BarElement {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn minus(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    /// The part of tensor length `n`.
    pub fn length_component(&self, n: usize) -> BarElement {
        BarElement {
            terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Applies an algebra map to every slot.
    pub fn map_slots(&self, f: &CdgaMorphism) -> BarElement {
        let mut out = BarElement::zero();
        for (w, c) in &self.terms {
            let mut partial: Vec<(BarWord, Q)> = vec![(Vec::new(), c.clone())];
            for slot in w {
                let mut img = crate::dgcore::CdgaElement::zero();
                img.add_term(slot.clone(), Q::one());
                let img = f.apply(&img);
                let mut next = Vec::new();
                for (prefix, x) in &partial {
                    for (m, y) in img.terms() {
                        if m.is_empty() {
                            continue;
                        }
                        let mut p = prefix.clone();
                        p.push(m.clone());
                        next.push((p, x * y));
                    }
                }
                partial = next;
            }
            for (p, x) in partial {
                out.add(p, x);
            }
        }
        out
    }

    /// Text form using generator names, e.g. `(1/2)[L1_0|L0_1]`.
    pub fn render(&self, p: &CdgaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("({c}){}", render_word(w, p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for BarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(w, c)| (w, c.to_string()))).finish()
    }
}

pub fn render_word(w: &[Monomial], p: &CdgaPresentation) -> String {
    format!("[{}]", w.iter().map(|m| p.monomial_name(m)).collect::<Vec<_>>().join("|"))
}

pub fn bar_degree(w: &[Monomial], p: &CdgaPresentation) -> i64 {
    w.iter().map(|m| p.monomial_degree(m) - 1).sum()
}

pub fn bar_weight(w: &[Monomial], p: &CdgaPresentation) -> usize {
    w.iter().map(|m| p.monomial_weight(m)).sum()
}

fn desuspended_parities(w: &[Monomial], p: &CdgaPresentation) -> Vec<bool> {
    w.iter().map(|m| (p.monomial_degree(m) - 1) % 2 != 0).collect()
}

fn check_slots(b: &BarElement) -> Result<()> {
    if b.terms.keys().flatten().any(|m| m.is_empty()) {
        return Err(Error::InvalidElement("a slot is a constant".into()));
    }
    Ok(())
}

/// `d_B = D_1 + D_2` with
/// `D_1 = -Σ (-1)^{η(i-1)} […|d a_i|…]` and
/// `D_2 = -Σ (-1)^{η(i)} […|a_i a_{i+1}|…]`, where `η(i) = Σ_{k≤i} (|a_k| - 1)`.
pub fn bar_differential(b: &BarElement, p: &CdgaPresentation) -> Result<BarElement> {
    check_slots(b)?;
    let mut out = BarElement::zero();
    for (w, c) in &b.terms {
        let mut eta = 0i64;
        for i in 0..w.len() {
            // eta = η(i-1) here
            let sign = if eta % 2 != 0 { c.clone() } else { -c.clone() };
            for (m, x) in p.d_monomial(&w[i]).terms() {
                debug_assert!(!m.is_empty());
                let mut v = w.clone();
                v[i] = m.clone();
                out.add(v, &sign * x);
            }
            eta += p.monomial_degree(&w[i]) - 1;
            if i + 1 < w.len() {
                let sign = if eta % 2 != 0 { c.clone() } else { -c.clone() };
                let mut a = crate::dgcore::CdgaElement::zero();
                a.add_term(w[i].clone(), Q::one());
                let mut bb = crate::dgcore::CdgaElement::zero();
                bb.add_term(w[i + 1].clone(), Q::one());
                for (m, x) in p.mul(&a, &bb).terms() {
                    let mut v: BarWord = w[..i].to_vec();
                    v.push(m.clone());
                    v.extend_from_slice(&w[i + 2..]);
                    out.add(v, &sign * x);
                }
            }
        }
    }
    Ok(out)
}

/// An element of `B ⊗ B`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BarTensor {
    terms: BTreeMap<(BarWord, BarWord), Q>,
}

impl BarTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<(BarWord, BarWord), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, x: BarWord, y: BarWord, c: Q) {
        add_into(&mut self.terms, (x, y), c);
    }

    pub fn add_scaled(&mut self, other: &BarTensor, c: &Q) {
        for ((x, y), v) in &other.terms {
            self.add(x.clone(), y.clone(), v * c);
        }
    }

    /// `x ⊗ y`.
    pub fn tensor(x: &BarElement, y: &BarElement) -> BarTensor {
        let mut out = BarTensor::zero();
        for (u, a) in &x.terms {
            for (v, b) in &y.terms {
                out.add(u.clone(), v.clone(), a * b);
            }
        }
        out
    }

    /// `x ∧ y = (x⊗y - τ(x⊗y)) / 2`.
    pub fn wedge(x: &BarElement, y: &BarElement, p: &CdgaPresentation) -> BarTensor {
        let xy = BarTensor::tensor(x, y);
        let mut out = xy.clone();
        out.add_scaled(&xy.twisted(p), &-Q::one());
        out.scaled(&frac(1, 2))
    }

    pub fn scaled(&self, c: &Q) -> BarTensor {
        let mut out = BarTensor::zero();
        out.add_scaled(self, c);
        out
    }

    /// `τ(x⊗y) = (-1)^{|x||y|} y⊗x` with bar degrees.
    pub fn twisted(&self, p: &CdgaPresentation) -> BarTensor {
        let mut out = BarTensor::zero();
        for ((x, y), c) in &self.terms {
            let odd = bar_degree(x, p) % 2 != 0 && bar_degree(y, p) % 2 != 0;
            out.add(y.clone(), x.clone(), if odd { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Terms with left length `i` and right length `j`.
    pub fn component(&self, i: usize, j: usize) -> BarTensor {
        BarTensor {
            terms: self
                .terms
                .iter()
                .filter(|((x, y), _)| x.len() == i && y.len() == j)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// `f ⊗ g` applied slotwise on both sides.
    pub fn map_slots(&self, f: &CdgaMorphism) -> BarTensor {
        let mut out = BarTensor::zero();
        for ((x, y), c) in &self.terms {
            let fx = BarElement::word_unchecked(x.clone()).map_slots(f);
            let fy = BarElement::word_unchecked(y.clone()).map_slots(f);
            out.add_scaled(&BarTensor::tensor(&fx, &fy), c);
        }
        out
    }

    pub fn render(&self, p: &CdgaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((x, y), c)| format!("({c}){}⊗{}", render_word(x, p), render_word(y, p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for BarTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, c)| (k, c.to_string()))).finish()
    }
}

impl BarElement {
    fn word_unchecked(w: BarWord) -> Self {
        let mut b = BarElement::zero();
        b.terms.insert(w, Q::one());
        b
    }
}

/// Deconcatenation `Δ[a_1|…|a_n] = Σ_{k=0}^{n} [a_1|…|a_k] ⊗ [a_{k+1}|…|a_n]`.
pub fn deconcatenation(b: &BarElement) -> BarTensor {
    split(b, false)
}

/// Reduced deconcatenation: both sides nonempty.
pub fn reduced_deconcatenation(b: &BarElement) -> BarTensor {
    split(b, true)
}

fn split(b: &BarElement, reduced: bool) -> BarTensor {
    let mut out = BarTensor::zero();
    for (w, c) in &b.terms {
        let range = if reduced { 1..w.len().max(1) } else { 0..w.len() + 1 };
        for k in range {
            out.add(w[..k].to_vec(), w[k..].to_vec(), c.clone());
        }
    }
    out
}

/// All interleavings of `a` and `b` (as index lists), with the Koszul sign of
/// moving elements of `b` past elements of `a`.
fn shuffle_indices(a: &[usize], b: &[usize], odd: &[bool]) -> Vec<(Vec<usize>, bool)> {
    if a.is_empty() {
        return vec![(b.to_vec(), false)];
    }
    if b.is_empty() {
        return vec![(a.to_vec(), false)];
    }
    let mut out = Vec::new();
    for (mut rest, s) in shuffle_indices(&a[1..], b, odd) {
        rest.insert(0, a[0]);
        out.push((rest, s));
    }
    let a_odd = a.iter().filter(|&&i| odd[i]).count() % 2 == 1;
    let flip = odd[b[0]] && a_odd;
    for (mut rest, s) in shuffle_indices(a, &b[1..], odd) {
        rest.insert(0, b[0]);
        out.push((rest, s ^ flip));
    }
    out
}

/// Shuffle product, signed by desuspended slot degrees.
pub fn shuffle(x: &BarElement, y: &BarElement, p: &CdgaPresentation) -> BarElement {
    let mut out = BarElement::zero();
    for (u, a) in &x.terms {
        for (v, b) in &y.terms {
            let mut slots = u.clone();
            slots.extend_from_slice(v);
            let odd = desuspended_parities(&slots, p);
            let left: Vec<usize> = (0..u.len()).collect();
            let right: Vec<usize> = (u.len()..slots.len()).collect();
            let c = a * b;
            for (perm, s) in shuffle_indices(&left, &right, &odd) {
                let w: BarWord = perm.iter().map(|&i| slots[i].clone()).collect();
                out.add(w, if s { -c.clone() } else { c.clone() });
            }
        }
    }
    out
}

/// The product on `B ⊗ B`: `(a⊗b)(c⊗d) = (-1)^{|b||c|} (a ш c) ⊗ (b ш d)`.
pub fn tensor_shuffle(x: &BarTensor, y: &BarTensor, p: &CdgaPresentation) -> BarTensor {
    let mut out = BarTensor::zero();
    for ((a, b), s) in &x.terms {
        for ((c, d), t) in &y.terms {
            let odd = bar_degree(b, p) % 2 != 0 && bar_degree(c, p) % 2 != 0;
            let coeff = if odd { -(s * t) } else { s * t };
            let ac = shuffle(&BarElement::word_unchecked(a.clone()), &BarElement::word_unchecked(c.clone()), p);
            let bd = shuffle(&BarElement::word_unchecked(b.clone()), &BarElement::word_unchecked(d.clone()), p);
            out.add_scaled(&BarTensor::tensor(&ac, &bd), &coeff);
        }
    }
    out
}

type ProjectorKey = (usize, u64);
type Arrangements = Rc<Vec<(Vec<usize>, Q)>>;

thread_local! {
    static PROJECTOR_CACHE: RefCell<HashMap<ProjectorKey, Arrangements>> = RefCell::new(HashMap::new());
}

/// `Σ_{i=1}^{n} (-1)^{i-1}/i · ш∘Δ̄^{(i-1)}` on the abstract word `[0|1|…|n-1]`,
/// as a list of rearrangements with coefficients.
fn projector_arrangements(odd: &[bool]) -> Arrangements {
    let n = odd.len();
    assert!(n < 64, "tensor length {n} is out of range");
    let key = (n, odd.iter().enumerate().fold(0u64, |acc, (i, &o)| acc | ((o as u64) << i)));
    if let Some(hit) = PROJECTOR_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut acc: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    // compositions of n into i parts, encoded by cut sets
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut pieces: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..n {
            if mask & (1 << (k - 1)) != 0 {
                pieces.push(Vec::new());
            }
            pieces.last_mut().expect("nonempty").push(k);
        }
        let i = pieces.len() as i64;
        let c = frac(if i % 2 == 1 { 1 } else { -1 }, i);
        let mut partial: Vec<(Vec<usize>, bool)> = vec![(pieces[0].clone(), false)];
        for piece in &pieces[1..] {
            let mut next = Vec::new();
            for (seq, s) in &partial {
                for (r, t) in shuffle_indices(seq, piece, odd) {
                    next.push((r, s ^ t));
                }
            }
            partial = next;
        }
        for (seq, s) in partial {
            add_into(&mut acc, seq, if s { -c.clone() } else { c.clone() });
        }
    }
    let arr: Arrangements = Rc::new(acc.into_iter().collect());
    PROJECTOR_CACHE.with(|c| c.borrow_mut().insert(key, arr.clone()));
    arr
}

/// The projector `p_ш` onto indecomposables, applied word by word.
pub fn hain_projector(b: &BarElement, p: &CdgaPresentation) -> Result<BarElement> {
    check_slots(b)?;
    if b.terms.contains_key(&Vec::new()) {
        return Err(Error::InvalidElement("the projector is defined on the augmentation ideal only".into()));
    }
    let mut out = BarElement::zero();
    for (w, c) in &b.terms {
        apply_projector(w, c, p, &mut out);
    }
    Ok(out)
}

fn apply_projector(w: &[Monomial], c: &Q, p: &CdgaPresentation, out: &mut BarElement) {
    for (perm, x) in projector_arrangements(&desuspended_parities(w, p)).iter() {
        out.add(perm.iter().map(|&i| w[i].clone()).collect(), c * x);
    }
}

/// `δ_Q = (p_ш ⊗ p_ш) ∘ ½(Δ̄ - τΔ̄)`.
pub fn delta_q(b: &BarElement, p: &CdgaPresentation) -> Result<BarTensor> {
    check_slots(b)?;
    let reduced = reduced_deconcatenation(b);
    let mut half = reduced.clone();
    half.add_scaled(&reduced.twisted(p), &-Q::one());
    let half = half.scaled(&frac(1, 2));
    let mut memo: HashMap<BarWord, BarElement> = HashMap::new();
    let mut project = |w: &BarWord| -> BarElement {
        memo.entry(w.clone())
            .or_insert_with(|| {
                let mut e = BarElement::zero();
                apply_projector(w, &Q::one(), p, &mut e);
                e
            })
            .clone()
    };
    let mut out = BarTensor::zero();
    for ((x, y), c) in &half.terms {
        let px = project(x);
        let py = project(y);
        out.add_scaled(&BarTensor::tensor(&px, &py), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{generator_index, model_x, CdgaElement, Family};
    use crate::rational::q;
    use crate::words::LyndonWord;

    fn g(p: &CdgaPresentation, f: Family, w: &str) -> usize {
        generator_index(p, f, &w.parse::<LyndonWord>().unwrap()).unwrap()
    }

    #[test]
    fn weight_two_bar_differential() {
        let p = model_x(3).unwrap();
        let (l10, l01) = (g(&p, Family::L1, "0"), g(&p, Family::L0, "1"));
        let b = BarElement::generators(&[l10, l01]);
        let d = bar_differential(&b, &p).unwrap();
        // generator order puts L0_1 before L1_0
        assert!(l01 < l10);
        assert_eq!(d, BarElement::word(vec![vec![l01, l10]], q(1)).unwrap());

        let top = g(&p, Family::L0, "01");
        let d = bar_differential(&BarElement::generators(&[top]), &p).unwrap();
        // d L0_01 = -L1_0 L0_1 = L0_1 L1_0, so D_1 gives -[L0_1 L1_0]
        assert_eq!(d, BarElement::word(vec![vec![l01, l10]], q(-1)).unwrap());
        assert!(BarElement::word(vec![vec![l10, l01]], q(1)).is_err());
    }

    #[test]
    fn constant_slots_are_rejected() {
        let p = model_x(2).unwrap();
        assert!(BarElement::word(vec![vec![]], q(1)).is_err());
        assert!(hain_projector(&BarElement::unit(), &p).is_err());
    }

    #[test]
    fn deconcatenation_small_cases() {
        let b = BarElement::generators(&[0, 1]);
        let d = deconcatenation(&b);
        assert_eq!(d.terms().len(), 3);
        assert!(reduced_deconcatenation(&BarElement::generators(&[0])).is_zero());
        let r = reduced_deconcatenation(&b);
        assert_eq!(r, BarTensor::tensor(&BarElement::generators(&[0]), &BarElement::generators(&[1])));
    }

    #[test]
    fn shuffle_of_degree_one_generators() {
        let p = model_x(2).unwrap();
        let s = shuffle(&BarElement::generators(&[0]), &BarElement::generators(&[1]), &p);
        assert_eq!(s, BarElement::generators(&[0, 1]).plus(&BarElement::generators(&[1, 0])));
        assert_eq!(shuffle(&BarElement::unit(), &s, &p), s);
    }

    #[test]
    fn shuffle_signs_for_odd_slots() {
        // a degree-2 slot desuspends to degree 1
        let p = model_x(3).unwrap();
        let m = vec![g(&p, Family::L0, "1"), g(&p, Family::L1, "0")];
        let x = BarElement::word(vec![m.clone()], q(1)).unwrap();
        let s = shuffle(&x, &x, &p);
        assert!(s.is_zero());
    }

    #[test]
    fn projector_kills_a_shuffle_and_fixes_letters() {
        let p = model_x(2).unwrap();
        let s = shuffle(&BarElement::generators(&[0]), &BarElement::generators(&[1]), &p);
        assert!(hain_projector(&s, &p).unwrap().is_zero());
        let a = BarElement::generators(&[1]);
        assert_eq!(hain_projector(&a, &p).unwrap(), a);
    }

    /// Eulerian idempotent: a permutation with `d` descents gets
    /// `(-1)^d / (n · C(n-1, d))` (all slots of even desuspended degree).
    fn eulerian_coefficient(inv: &[usize]) -> Q {
        let n = inv.len() as i64;
        // a cut into consecutive input blocks shuffles to the arrangement iff
        // every descent of the position map is a cut
        let d = inv.windows(2).filter(|w| w[0] > w[1]).count() as i64;
        let mut binom = 1i64;
        for k in 0..d {
            binom = binom * (n - 1 - k) / (k + 1);
        }
        frac(if d % 2 == 0 { 1 } else { -1 }, n * binom)
    }

    #[test]
    fn projector_matches_eulerian_formula() {
        for n in 1..=6 {
            let arr = projector_arrangements(&vec![false; n]);
            let mut count = 0;
            for (perm, c) in arr.iter() {
                // the slot at output position k is input perm[k]
                let mut inv = vec![0; n];
                for (k, &i) in perm.iter().enumerate() {
                    inv[i] = k;
                }
                assert_eq!(c, &eulerian_coefficient(&inv), "{perm:?}");
                count += 1;
            }
            assert_eq!(count, (1..=n).product::<usize>());
        }
    }

    #[test]
    fn delta_q_of_a_single_slot_vanishes() {
        let p = model_x(2).unwrap();
        assert!(delta_q(&BarElement::generators(&[0]), &p).unwrap().is_zero());
    }

    #[test]
    fn map_slots_expands_multilinearly() {
        let p = model_x(2).unwrap();
        // rescaling by 2^weight is an algebra map commuting with d
        let images = (0..p.len())
            .map(|i| CdgaElement::generator(i).scaled(&q(1 << p.generators()[i].weight)))
            .collect();
        let f = CdgaMorphism::new(&p, &p, images).unwrap();
        let b = BarElement::generators(&[0, 1, 0]);
        assert_eq!(b.map_slots(&f), b.scaled(&q(8)));
    }
}
