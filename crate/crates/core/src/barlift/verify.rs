//! Literal checks of the cobracket formulas for the lifts, the geometric
//! projection, and the restriction maps.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{delta_q, BarElement, BarTensor, LiftContext, Variant};
use crate::colie::ab_by_extraction;
use crate::dgcore::{generator_index, parse_generator_name, Family};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{add_into, frac, Q};
use crate::words::LyndonWord;

/// A formal symbol `family_W`, used where the model itself has no generator
/// (for instance `L0_0`).
type Symbol = (Family, LyndonWord);

type FormalTensor = BTreeMap<(Symbol, Symbol), Q>;

fn formal_wedge(out: &mut FormalTensor, u: Symbol, v: Symbol, c: &Q) {
    let h = c * frac(1, 2);
    add_into(out, (u.clone(), v.clone()), h.clone());
    add_into(out, (v, u), -h);
}

#[derive(Clone, Debug, Serialize)]
pub struct EdqxReport {
    pub word: String,
    /// `a = α + β_{UV} - β_{VU}` and `b_{UV} = β_{VU}`, against tables read
    /// off the cobracket.
    pub coefficient_identities: bool,
    /// The `(1,1)` part of `δ_Q(L_W)` is `Σ a L0∧L0 + Σ b L1∧L0`.
    pub one_one_component: bool,
    /// After `L1_U ↦ L0_U - K_U` it becomes `Σ α L0∧L0 + Σ β L0_U∧K_V`.
    pub substitution: bool,
    /// `δ_Q(L_W) = Σ a L_U∧L_V + Σ b L1_U∧L_V` on the full tensor, with the
    /// lower lifts. Reported, not required.
    pub full_cobracket: bool,
    /// Nonzero `β^W_{U,U}` as `(U, value)`.
    pub diagonal_beta: Vec<(String, String)>,
}

impl EdqxReport {
    pub fn passed(&self) -> bool {
        self.coefficient_identities && self.one_one_component && self.substitution
    }
}

/// Checks the cobracket of `L^B_W` in three literal forms. Fails with
/// `IdentityViolation` if one of the three required checks fails.
pub fn verify_edqx(ctx: &LiftContext, w: &LyndonWord) -> Result<EdqxReport> {
    if w.weight() < 2 {
        return Err(Error::InvalidInput("|W| >= 2 is required".into()));
    }
    let coeffs = ctx.dual.coefficients();
    let (alpha, beta) = (&coeffs.alpha, &coeffs.beta);
    let extracted = ab_by_extraction(&ctx.dual)?;

    let mut identities = true;
    for (u, v) in coeffs.split_pairs(w) {
        if u < v && extracted.a.get(w, u, v) != alpha.get(w, u, v) + beta.get(w, u, v) - beta.get(w, v, u) {
            identities = false;
        }
        if extracted.b.get(w, u, v) != beta.get(w, v, u) {
            identities = false;
        }
    }

    let x = &ctx.models.x;
    let lift = ctx.lift(w, Variant::Plain)?;
    let dq = delta_q(&lift, x)?;
    let one_one = dq.component(1, 1);
    let one_one_ok = one_one == ctx.expected_cobracket(w, Variant::Plain)?;

    // formal substitution on the (1,1) part
    let symbol = |g: usize| parse_generator_name(&x.generators()[g].name).expect("model names parse");
    let substitute = |s: Symbol| -> Vec<(Symbol, Q)> {
        match s.0 {
            Family::L1 => vec![((Family::L0, s.1.clone()), Q::one()), ((Family::K, s.1), -Q::one())],
            _ => vec![(s, Q::one())],
        }
    };
    let mut got = FormalTensor::new();
    for ((l, r), c) in one_one.terms() {
        for (a, x_) in substitute(symbol(l[0][0])) {
            for (b, y) in substitute(symbol(r[0][0])) {
                add_into(&mut got, (a.clone(), b), c * &x_ * &y);
            }
        }
    }
    let mut expected = FormalTensor::new();
    for (u, v) in coeffs.split_pairs(w) {
        if u < v {
            formal_wedge(&mut expected, (Family::L0, u.clone()), (Family::L0, v.clone()), &alpha.get(w, u, v));
        }
        formal_wedge(&mut expected, (Family::L0, u.clone()), (Family::K, v.clone()), &beta.get(w, u, v));
    }
    let substitution = got == expected;

    // full tensor, with lower-weight lifts
    let mut full = BarTensor::zero();
    let ab = &coeffs.ab;
    for (u, v, c) in ab.a.row(w) {
        full.add_scaled(&BarTensor::wedge(&ctx.lift(u, Variant::Plain)?, &ctx.lift(v, Variant::Plain)?, x), c);
    }
    for (u, v, c) in ab.b.row(w) {
        full.add_scaled(&BarTensor::wedge(&ctx.lift(u, Variant::One)?, &ctx.lift(v, Variant::Plain)?, x), c);
    }
    let full_cobracket = dq == full;

    let diagonal_beta = coeffs
        .words
        .iter()
        .filter(|u| 2 * u.weight() == w.weight())
        .filter_map(|u| {
            let b = beta.get(w, u, u);
            (!b.is_zero()).then(|| (u.to_string(), b.to_string()))
        })
        .collect();

    let report = EdqxReport {
        word: w.to_string(),
        coefficient_identities: identities,
        one_one_component: one_one_ok,
        substitution,
        full_cobracket,
        diagonal_beta,
    };
    if !report.passed() {
        return Err(Error::IdentityViolation(format!("cobracket formula for L_{w}: {report:?}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeomWordRow {
    pub word: String,
    /// `(π⊗π) δ_Q(L_W) = Σ α P_U ∧ P_V`.
    pub projected_cobracket: bool,
    /// `δ_Q(π L_W) = Σ α P_U ∧ P_V`.
    pub cobracket_of_projection: bool,
    /// Wedge coefficients of the `(1,1)` part against `[G_U]∧[G_V]` equal `α`.
    pub pairing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeomWeightRow {
    pub weight: usize,
    pub words: usize,
    pub rank: usize,
    /// The tensor-length-one parts form the identity matrix.
    pub unitriangular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeomReport {
    pub words: Vec<GeomWordRow>,
    pub weights: Vec<GeomWeightRow>,
}

impl GeomReport {
    pub fn passed(&self) -> bool {
        self.words.iter().all(|r| r.projected_cobracket && r.cobracket_of_projection && r.pairing)
            && self.weights.iter().all(|r| r.rank == r.words && r.unitriangular)
    }
}

/// The projected family: `π(L_W)` for `|W| ≥ 2`, `[G_W]` in weight one.
pub fn projected_lift(ctx: &LiftContext, w: &LyndonWord) -> Result<BarElement> {
    if w.weight() == 1 {
        let g = generator_index(&ctx.models.geom, Family::G, w).expect("geometric model has every word");
        return Ok(BarElement::generators(&[g]));
    }
    Ok(ctx.lift(w, Variant::Plain)?.map_slots(&ctx.models.proj))
}

/// Projected cobrackets are pure `α`, and the projected family is a basis in
/// each weight.
pub fn verify_geom_basis(ctx: &LiftContext, max_weight: usize) -> Result<GeomReport> {
    if max_weight < 2 || max_weight > ctx.max_weight() {
        return Err(Error::InvalidInput(format!("max_weight must lie in 2..={}", ctx.max_weight())));
    }
    let geom = &ctx.models.geom;
    let coeffs = ctx.dual.coefficients();
    let mut projected: BTreeMap<LyndonWord, BarElement> = BTreeMap::new();
    for w in coeffs.words.iter().filter(|w| w.weight() <= max_weight) {
        projected.insert(w.clone(), projected_lift(ctx, w)?);
    }
    let mut words = Vec::new();
    for w in coeffs.words.iter().filter(|w| (2..=max_weight).contains(&w.weight())) {
        let mut expected = BarTensor::zero();
        for (u, v, c) in coeffs.alpha.row(w) {
            expected.add_scaled(&BarTensor::wedge(&projected[u], &projected[v], geom), c);
        }
        let lift = ctx.lift(w, Variant::Plain)?;
        let pushed = delta_q(&lift, &ctx.models.x)?.map_slots(&ctx.models.proj);
        let direct = delta_q(&projected[w], geom)?;
        let one_one = direct.component(1, 1);
        let g = |u: &LyndonWord| vec![vec![generator_index(geom, Family::G, u).expect("present")]];
        let pairing = coeffs.split_pairs(w).filter(|(u, v)| u < v).all(|(u, v)| {
            let key = |a: &LyndonWord, b: &LyndonWord| (g(a), g(b));
            let get = |k: (Vec<Vec<usize>>, Vec<Vec<usize>>)| one_one.terms().get(&k).cloned().unwrap_or_else(Q::zero);
            get(key(u, v)) - get(key(v, u)) == coeffs.alpha.get(w, u, v)
        });
        words.push(GeomWordRow {
            word: w.to_string(),
            projected_cobracket: pushed == expected,
            cobracket_of_projection: direct == expected,
            pairing,
        });
    }
    let mut weights = Vec::new();
    for weight in 1..=max_weight {
        let ws: Vec<&LyndonWord> = coeffs.words.iter().filter(|w| w.weight() == weight).collect();
        let rows: Vec<BTreeMap<usize, Q>> = ws
            .iter()
            .map(|w| {
                projected[*w]
                    .length_component(1)
                    .terms()
                    .iter()
                    .map(|(k, c)| (k[0][0], c.clone()))
                    .collect()
            })
            .collect();
        let unitriangular = ws.iter().zip(&rows).all(|(w, row)| {
            let g = generator_index(geom, Family::G, w).expect("present");
            row.len() == 1 && row.get(&g) == Some(&Q::one())
        });
        weights.push(GeomWeightRow { weight, words: ws.len(), rank: linalg::rank(&rows), unitriangular });
    }
    let report = GeomReport { words, weights };
    if !report.passed() {
        return Err(Error::IdentityViolation(format!("geometric basis: {report:?}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub word: String,
    /// `j*(L_diff) - L_plain + L_one` is closed.
    pub combination_closed: bool,
    /// ...and has no tensor-length-one part.
    pub combination_pi1_zero: bool,
    /// ...and is exactly zero.
    pub combination_zero: bool,
    /// `j*(L_diff) - L_plain + L_one + L_const` has zero length-one part.
    /// Reported only.
    pub with_const_pi1_zero: bool,
    /// `j*(L_diff) == L_const`. Reported only.
    pub restriction_equals_const: bool,
    /// `i1*(L_diff) == L_point`.
    pub fiber_matches_point: bool,
    /// `p*(L_point) == L_const`.
    pub pullback_matches_const: bool,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.combination_closed && self.combination_pi1_zero && self.fiber_matches_point && self.pullback_matches_const
    }
}

/// Compares the lifts across the restriction maps, slot by slot.
pub fn verify_restrictions(ctx: &LiftContext, w: &LyndonWord) -> Result<RestrictionReport> {
    let m = &ctx.models;
    let diff = ctx.lift(w, Variant::Diff)?;
    let plain = ctx.lift(w, Variant::Plain)?;
    let one = ctx.lift(w, Variant::One)?;
    let konst = ctx.lift(w, Variant::Const)?;
    let point = ctx.lift(w, Variant::Point)?;
    let restricted = diff.map_slots(&m.j);
    let combination = restricted.minus(&plain).plus(&one);
    let with_const = combination.plus(&konst);
    Ok(RestrictionReport {
        word: w.to_string(),
        combination_closed: super::bar_differential(&combination, &m.x)?.is_zero(),
        combination_pi1_zero: combination.length_component(1).is_zero(),
        combination_zero: combination.is_zero(),
        with_const_pi1_zero: with_const.length_component(1).is_zero(),
        restriction_equals_const: restricted == konst,
        fiber_matches_point: diff.map_slots(&m.i1) == point,
        pullback_matches_const: point.map_slots(&m.p1) == konst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lw(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    #[test]
    fn edqx_in_weight_two() {
        let ctx = LiftContext::new(3).unwrap();
        let r = verify_edqx(&ctx, &lw("01")).unwrap();
        assert!(r.passed() && r.full_cobracket);
        assert!(r.diagonal_beta.is_empty());
    }

    #[test]
    fn geom_basis_through_weight_four() {
        let ctx = LiftContext::new(4).unwrap();
        assert!(verify_geom_basis(&ctx, 4).unwrap().passed());
    }

    #[test]
    fn restrictions_through_weight_four() {
        let ctx = LiftContext::new(4).unwrap();
        for w in ctx.dual.coefficients().words.clone().iter().filter(|w| w.weight() >= 2) {
            let r = verify_restrictions(&ctx, w).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
