use serde_json::{json, Value};

use super::{Rows, SuiteConfig};
use crate::barlift::{
    audit_claim, claim_constant, gen_map_for, unit_components, verify_edqx, verify_geom_basis, verify_restrictions,
    BarElement, LiftContext, Variant,
};
use crate::colie::CoLieElement;
use crate::error::Result;
use crate::words::LyndonWord;

fn words_from_two(ctx: &LiftContext) -> Vec<LyndonWord> {
    ctx.dual.coefficients().words.iter().filter(|w| w.weight() >= 2).cloned().collect()
}

pub(super) fn lifts(cfg: &SuiteConfig, rows: &mut Rows) -> Result<()> {
    let ctx = LiftContext::new(cfg.max_weight)?;
    for v in Variant::ALL {
        for w in words_from_two(&ctx) {
            let name = format!("closed indecomposable lift exists for the {v} family");
            match ctx.oracle(&w, v).and_then(|o| Ok((o.nullity, ctx.check(&w, v, &o.element)?))) {
                Ok((nullity, checks)) => {
                    rows.check_with(name, Some(w.weight()), checks.all(), json!({ "word": w.to_string(), "nullity": nullity, "checks": checks }))
                }
                Err(e) => rows.error(format!("{name} ({w})"), Some(w.weight()), &e),
            }
        }
    }

    for w in words_from_two(&ctx) {
        let r = verify_restrictions(&ctx, &w)?;
        let weight = Some(w.weight());
        let wit = || json!(w.to_string());
        rows.check("j*(diff) - plain + one is closed", weight, r.combination_closed, wit);
        rows.check("j*(diff) - plain + one has no one-slot part", weight, r.combination_pi1_zero, wit);
        rows.info("j*(diff) - plain + one is exactly zero", weight, json!({ "word": w.to_string(), "value": r.combination_zero }));
        rows.info(
            "j*(diff) - plain + one + const has no one-slot part",
            weight,
            json!({ "word": w.to_string(), "value": r.with_const_pi1_zero }),
        );
        rows.info("j*(diff) equals the const lift", weight, json!({ "word": w.to_string(), "value": r.restriction_equals_const }));
        rows.check("i1* of the diff lift is the point lift, slot by slot", weight, r.fiber_matches_point, wit);
        rows.check("p* of the point lift is the const lift, slot by slot", weight, r.pullback_matches_const, wit);
    }

    // one-slot part of the tree formula, before and after its constant
    for v in Variant::ALL {
        let model = ctx.model(v);
        let map = gen_map_for(v, &ctx.dual, model)?;
        let mut raw_ok = true;
        let mut scaled_ok = true;
        for (tag, img) in map.images() {
            let comps = unit_components(&CoLieElement::tag(tag.clone()), &ctx.dual, model, &map, 1)?;
            let expected = img.map(|g| BarElement::generators(&[g])).unwrap_or_default();
            raw_ok &= comps[0] == expected;
            scaled_ok &= comps[0].scaled(&claim_constant(1)) == expected;
        }
        rows.check(format!("tree sum has the generator as one-slot part ({v})"), Some(cfg.max_weight), raw_ok, || Value::Null);
        rows.info(
            format!("tree formula with the stated constant has the generator as one-slot part ({v})"),
            Some(cfg.max_weight),
            json!(scaled_ok),
        );
    }
    Ok(())
}

pub(super) fn edqx(cfg: &SuiteConfig, rows: &mut Rows) -> Result<()> {
    let ctx = LiftContext::new(cfg.max_weight)?;
    for w in words_from_two(&ctx) {
        let weight = Some(w.weight());
        match verify_edqx(&ctx, &w) {
            Ok(r) => {
                rows.check_with("cobracket of the plain lift in a/b form, alpha/beta form and coefficient identities", weight, true, json!(w.to_string()));
                rows.info("cobracket of the plain lift on the full tensor", weight, json!({ "word": r.word, "holds": r.full_cobracket }));
                if !r.diagonal_beta.is_empty() {
                    rows.info("nonzero diagonal beta^W_{U,U}", weight, json!({ "word": r.word, "entries": r.diagonal_beta }));
                }
            }
            Err(e) => rows.error(format!("cobracket of the plain lift ({w})"), weight, &e),
        }
    }
    Ok(())
}

pub(super) fn basis(cfg: &SuiteConfig, rows: &mut Rows) -> Result<()> {
    let ctx = LiftContext::new(cfg.max_weight)?;
    match verify_geom_basis(&ctx, cfg.max_weight) {
        Ok(r) => {
            for row in &r.words {
                let w = Some(row.word.len());
                rows.check_with("projected cobracket is the alpha part", w, row.projected_cobracket && row.cobracket_of_projection, json!(row.word));
                rows.check_with("pairing of the projected cobracket returns alpha", w, row.pairing, json!(row.word));
            }
            for row in &r.weights {
                rows.check_with(
                    "projected family is unitriangular against the generators",
                    Some(row.weight),
                    row.rank == row.words && row.unitriangular,
                    json!({ "words": row.words, "rank": row.rank }),
                );
            }
        }
        Err(e) => rows.error("projected family is a basis with alpha cobrackets", Some(cfg.max_weight), &e),
    }
    Ok(())
}

pub(super) fn audit(cfg: &SuiteConfig, rows: &mut Rows) -> Result<()> {
    let ctx = LiftContext::new(cfg.max_weight)?;
    for w in words_from_two(&ctx) {
        let a = audit_claim(&ctx, &w, Variant::Plain)?;
        rows.info("tree formula with stated constants against the closed lift", Some(w.weight()), serde_json::to_value(&a).unwrap_or(Value::Null));
    }
    Ok(())
}
