//! Seeded random bar elements for property checks.

use rand::Rng;

use super::{BarElement, BarWord};
use crate::dgcore::CdgaPresentation;
use crate::rational::Q;

/// A random word of total weight at most `max_weight` and length in
/// `1..=max_len`; slots are products of one or two generators, so desuspended
/// degrees of both parities occur.
pub fn random_bar_word(rng: &mut impl Rng, p: &CdgaPresentation, max_weight: usize, max_len: usize) -> Option<BarWord> {
    let gens: Vec<usize> = (0..p.len()).filter(|&i| p.generators()[i].weight <= max_weight).collect();
    if gens.is_empty() {
        return None;
    }
    let len = rng.gen_range(1..=max_len.max(1));
    let mut budget = max_weight;
    let mut word = Vec::new();
    for _ in 0..len {
        let fits: Vec<usize> = gens.iter().copied().filter(|&g| p.generators()[g].weight <= budget).collect();
        if fits.is_empty() {
            break;
        }
        let a = fits[rng.gen_range(0..fits.len())];
        budget -= p.generators()[a].weight;
        let mut slot = vec![a];
        if rng.gen_bool(0.3) {
            let more: Vec<usize> = fits.iter().copied().filter(|&g| g != a && p.generators()[g].weight <= budget).collect();
            if !more.is_empty() {
                let b = more[rng.gen_range(0..more.len())];
                budget -= p.generators()[b].weight;
                slot.push(b);
                slot.sort_unstable();
            }
        }
        word.push(slot);
    }
    (!word.is_empty()).then_some(word)
}

/// A random sum of up to `terms` words with small integer coefficients.
pub fn random_bar_element(
    rng: &mut impl Rng,
    p: &CdgaPresentation,
    max_weight: usize,
    max_len: usize,
    terms: usize,
) -> BarElement {
    let mut b = BarElement::zero();
    for _ in 0..terms.max(1) {
        if let Some(w) = random_bar_word(rng, p, max_weight, max_len) {
            let c: i64 = rng.gen_range(-3..=3);
            b.add(w, Q::from_integer(c.into()));
        }
    }
    b
}
