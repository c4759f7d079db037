use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Rows, SuiteConfig};
use crate::colie::{ab_tables, change_basis, Basis, CoLieElement, Coefficients, DualCoalgebra, Tag, WedgeElement};
use crate::error::Result;
use crate::freelie::{alpha_table, expand, lie_bracket, rewrite_in_lyndon, LieElement};
use crate::ihara::{ihara_bracket, semidirect_bracket, special_derivation, SemidirectElement};
use crate::rational::{q, Q};
use crate::words::{is_lyndon, lyndon_words, standard_factorization, LyndonWord, Word};

fn first_failure<T>(items: impl IntoIterator<Item = T>, bad: impl Fn(&T) -> Option<String>) -> Option<String> {
    items.into_iter().find_map(|x| bad(&x))
}

fn witness(w: Option<String>) -> impl FnOnce() -> Value {
    move || w.map(Value::String).unwrap_or(Value::Null)
}

pub(super) fn words(cfg: &SuiteConfig, rows: &mut Rows) {
    for len in 1..=8usize {
        let bad = first_failure(0u32..(1 << len), |bits| {
            let letters: Vec<u8> = (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect();
            let scan = (1..len).all(|i| letters[..] < letters[i..]);
            let w = Word::new(letters).ok()?;
            (is_lyndon(&w).ok()? != scan).then(|| w.to_string())
        });
        rows.check("Lyndon test agrees with a scan of right factors", Some(len), bad.is_none(), witness(bad));
    }

    let listed: Vec<String> = lyndon_words(4).iter().map(|w| w.to_string()).collect();
    let expected = ["0", "0001", "001", "0011", "01", "011", "0111", "1"];
    rows.check("enumeration through length 4 in lexicographic order", Some(4), listed == expected, || json!(listed));

    let all = lyndon_words(cfg.max_weight);
    let bad = first_failure(all.windows(2), |p| (p[0] >= p[1]).then(|| format!("{} >= {}", p[0], p[1])));
    rows.check("enumeration is strictly increasing", None, bad.is_none(), witness(bad));

    for len in 2..=cfg.max_weight {
        let bad = first_failure(all.iter().filter(|w| w.weight() == len), |w| {
            let (u, v) = standard_factorization(w).ok()?;
            let ok = u < v && u.word().concat(v.word()) == *w.word() && all.contains(&u) && all.contains(&v);
            (!ok).then(|| format!("{w} -> ({u}, {v})"))
        });
        rows.check("standard factorization recombines into Lyndon factors U < V", Some(len), bad.is_none(), witness(bad));
    }
}

fn random_lie(rng: &mut ChaCha8Rng, basis: &[LyndonWord]) -> LieElement {
    let mut e = LieElement::zero();
    for _ in 0..rng.gen_range(1..5) {
        e.add_term(basis[rng.gen_range(0..basis.len())].clone(), q(rng.gen_range(-3..=3)));
    }
    e
}

fn basis_triples(max_weight: usize) -> Vec<[LyndonWord; 3]> {
    let words = lyndon_words(max_weight);
    let mut out = Vec::new();
    for a in &words {
        for b in &words {
            for c in &words {
                if a.weight() + b.weight() + c.weight() <= max_weight {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    out
}

fn jacobiator(br: impl Fn(&LieElement, &LieElement) -> LieElement, t: &[LyndonWord; 3]) -> LieElement {
    let [a, b, c] = t.clone().map(LieElement::basis);
    let mut s = br(&a, &br(&b, &c));
    s.add_scaled(&br(&b, &br(&c, &a)), &Q::one());
    s.add_scaled(&br(&c, &br(&a, &b)), &Q::one());
    s
}

pub(super) fn lie(cfg: &SuiteConfig, rows: &mut Rows) {
    let n = cfg.max_weight;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let bad = first_failure(lyndon_words(n + 1), |w| {
        let p = expand(w);
        let (first, c) = p.terms().iter().next()?;
        (first != w.word() || !c.is_one()).then(|| w.to_string())
    });
    rows.check("expansion has its own word as leading term with coefficient 1", Some(n + 1), bad.is_none(), witness(bad));

    let basis = lyndon_words(n);
    let mut bad = None;
    for _ in 0..cfg.samples {
        let e = random_lie(&mut rng, &basis);
        if rewrite_in_lyndon(&e.expand()).ok().as_ref() != Some(&e) {
            bad = Some(format!("{e:?}"));
            break;
        }
    }
    rows.check("rewriting inverts expansion on random elements", Some(n), bad.is_none(), witness(bad));

    let bad = first_failure(basis_triples(n), |t| {
        (!jacobiator(lie_bracket, t).is_zero()).then(|| format!("{} {} {}", t[0], t[1], t[2]))
    });
    rows.check("Jacobi identity for the free bracket on basis triples", Some(n), bad.is_none(), witness(bad));

    let ihara_weight = n.min(5);
    let bad = first_failure(basis_triples(ihara_weight), |t| {
        (!jacobiator(ihara_bracket, t).is_zero()).then(|| format!("{} {} {}", t[0], t[1], t[2]))
    });
    rows.check("Jacobi identity for the Ihara bracket on basis triples", Some(ihara_weight), bad.is_none(), witness(bad));

    let small = lyndon_words(3);
    let mut bad = None;
    for _ in 0..cfg.samples {
        let (f, g, h) = (random_lie(&mut rng, &small), random_lie(&mut rng, &small), random_lie(&mut rng, &small));
        let mut lhs = special_derivation(&f, &special_derivation(&g, &h));
        lhs.add_scaled(&special_derivation(&g, &special_derivation(&f, &h)), &-Q::one());
        if lhs != special_derivation(&ihara_bracket(&f, &g), &h) {
            bad = Some(format!("f={f:?} g={g:?} h={h:?}"));
            break;
        }
    }
    rows.check("commutator of special derivations is the derivation of the Ihara bracket", Some(3), bad.is_none(), witness(bad));

    let Ok(coeffs) = Coefficients::new(n) else {
        rows.check("structure constants", Some(n), false, || json!("tables could not be built"));
        return;
    };
    let (alpha, beta, gamma) = (&coeffs.alpha, &coeffs.beta, &coeffs.gamma);
    rows.check("alpha, beta and gamma entries are integers", Some(n), alpha.all_integral() && beta.all_integral() && gamma.all_integral(), || Value::Null);

    let zero = LyndonWord::zero();
    let one = LyndonWord::one();
    let ws = &coeffs.words;
    // (W, word) -> (lhs, rhs)
    type Relation<'a> = Box<dyn Fn(&LyndonWord, &LyndonWord) -> (Q, Q) + 'a>;
    let relations: [(&str, Relation); 4] = [
        ("beta^W_{0,V} = 0", Box::new(|w, v| (beta.get(w, &zero, v), Q::zero()))),
        ("beta^W_{V,0} = alpha^W_{0,V}", Box::new(|w, v| (beta.get(w, v, &zero), alpha.get(w, &zero, v)))),
        ("beta^W_{U,1} = 0", Box::new(|w, u| (beta.get(w, u, &one), Q::zero()))),
        ("beta^W_{1,U} = alpha^W_{U,1}", Box::new(|w, u| (beta.get(w, &one, u), alpha.get(w, u, &one)))),
    ];
    for (name, rel) in &relations {
        let bad = first_failure(ws.iter().flat_map(|w| ws.iter().map(move |v| (w, v))), |(w, v)| {
            let (l, r) = rel(w, v);
            (l != r).then(|| format!("W={w} word={v}: {l} != {r}"))
        });
        rows.check(*name, Some(n), bad.is_none(), witness(bad));
    }
    let bad = first_failure(ws.iter().filter(|w| w.weight() >= 2), |w| {
        coeffs.split_pairs(w).filter(|(u, v)| u < v).find_map(|(u, v)| {
            let rhs = alpha.get(w, u, v) + beta.get(w, u, v) - beta.get(w, v, u);
            (gamma.get(w, u, v) != rhs).then(|| format!("W={w} U={u} V={v}"))
        })
    });
    rows.check("gamma^W_{U,V} = alpha^W_{U,V} + beta^W_{U,V} - beta^W_{V,U}", Some(n), bad.is_none(), witness(bad));
    let bad = first_failure(ws.iter().filter(|w| w.weight() == 1), |w| {
        let nonzero = alpha.row(w).next().is_some() || beta.row(w).next().is_some() || gamma.row(w).next().is_some();
        nonzero.then(|| w.to_string())
    });
    rows.check("weight-one rows of alpha, beta and gamma vanish", Some(1), bad.is_none(), witness(bad));

    let bad = first_failure(ws.iter().flat_map(|u| ws.iter().map(move |v| (u, v))), |(u, v)| {
        if u.weight() + v.weight() > n {
            return None;
        }
        let (fu, fv) = (LieElement::basis((*u).clone()), LieElement::basis((*v).clone()));
        let s = semidirect_bracket(&SemidirectElement::x(fu.clone()), &SemidirectElement::x(fv.clone()));
        (s.x_part != lie_bracket(&fu, &fv) || !s.one_part.is_zero()).then(|| format!("{u} {v}"))
    });
    rows.check("semidirect bracket restricted to the x copy is the free bracket", Some(n), bad.is_none(), witness(bad));

    if let Ok(t) = alpha_table(n) {
        rows.check("alpha table from brackets matches the stored table", Some(n), &t == alpha, || Value::Null);
    }
}

fn tag(s: &str) -> Tag {
    s.parse().expect("static tag")
}

/// The structure constant of `L[1;x]` dual to `(u, v) ↦ w`.
fn bracket_constant(w: &Tag, u: &Tag, v: &Tag) -> Q {
    let elem = |t: &Tag| {
        let b = LieElement::basis(t.word().clone());
        match t {
            Tag::X(_) => SemidirectElement::x(b),
            _ => SemidirectElement::one(b),
        }
    };
    let s = semidirect_bracket(&elem(u), &elem(v));
    match w {
        Tag::X(x) => s.x_part.coeff(x),
        _ => s.one_part.coeff(w.word()),
    }
}

pub(super) fn colie(cfg: &SuiteConfig, rows: &mut Rows) -> Result<()> {
    let n = cfg.max_weight;
    let dual = DualCoalgebra::new(n)?;
    let coeffs = dual.coefficients();

    let mut expected = WedgeElement::zero(Basis::X1);
    expected.add_wedge(tag("Tx:0"), tag("Tx:1"), Q::one());
    expected.add_wedge(tag("Tx:1"), tag("T@1:0"), Q::one());
    let got = dual.cobracket_of(&tag("Tx:01"))?;
    rows.check("cobracket of T_01(x) is T_0(x)^T_1(x) + T_1(x)^T_0(1)", Some(2), got == expected, || json!(format!("{got:?}")));

    let weight_one: Vec<Tag> = ["Tx:0", "Tx:1", "T@1:0", "T@1:1", "T0:0", "T0:1", "T1:0", "T1:1"].map(tag).to_vec();
    let bad = first_failure(&weight_one, |t| (!dual.cobracket_of(t).ok()?.is_zero()).then(|| t.to_string()));
    rows.check("weight-one tags have zero cobracket", Some(1), bad.is_none(), witness(bad));

    for basis in [Basis::X1, Basis::T01] {
        let tags = dual.basis_tags(basis);
        let bad = first_failure(&tags, |t| {
            (!dual.co_jacobi_defect(&CoLieElement::tag((*t).clone())).ok()?.is_zero()).then(|| t.to_string())
        });
        rows.check(format!("co-Jacobi identity on every {basis:?} basis tag"), Some(n), bad.is_none(), witness(bad));
        let bad = first_failure(&tags, |t| {
            let d = dual.cobracket_of(t).ok()?.to_tensor();
            let mut sum = d.permuted(&[1, 0]);
            sum.add_scaled(&d, &Q::one());
            (!sum.is_zero()).then(|| t.to_string())
        });
        rows.check(format!("cobracket is antisymmetric as a tensor in the {basis:?} basis"), Some(n), bad.is_none(), witness(bad));
    }

    let tags = dual.basis_tags(Basis::X1);
    let bad = first_failure(tags.iter().filter(|t| t.weight() >= 2), |w| {
        let d = dual.cobracket_of(w).ok()?;
        tags.iter().flat_map(|u| tags.iter().map(move |v| (u, v))).find_map(|(u, v)| {
            if u >= v || u.weight() + v.weight() != w.weight() {
                return None;
            }
            let c = bracket_constant(w, u, v);
            (d.coeff(u, v) != c).then(|| format!("<d {w}, {u} (x) {v}> = {}, bracket gives {c}", d.coeff(u, v)))
        })
    });
    rows.check("cobracket pairs with the bracket of L[1;x]", Some(n), bad.is_none(), witness(bad));

    let ab = match ab_tables(n) {
        Ok(t) => {
            rows.check("a, b, a', b' from closed formulas agree with extraction after the change of basis", Some(n), true, || Value::Null);
            t
        }
        Err(e) => {
            rows.error("a, b, a', b' from closed formulas agree with extraction after the change of basis", Some(n), &e);
            coeffs.ab.clone()
        }
    };
    let ws = &coeffs.words;
    let pairs = || ws.iter().filter(|w| w.weight() >= 2).flat_map(|w| coeffs.split_pairs(w).map(move |(u, v)| (w, u, v)));
    let bad = first_failure(pairs().filter(|(_, u, v)| u < v), |(w, u, v)| {
        (ab.a.get(w, u, v) != coeffs.gamma.get(w, u, v)).then(|| format!("W={w} U={u} V={v}"))
    });
    rows.check("a = gamma", Some(n), bad.is_none(), witness(bad));
    let bad = first_failure(pairs().filter(|(_, u, v)| u < v), |(w, u, v)| {
        (ab.a_prime.get(w, u, v) != -ab.a.get(w, u, v)).then(|| format!("W={w} U={u} V={v}"))
    });
    rows.check("a' = -a", Some(n), bad.is_none(), witness(bad));
    let (zero, one) = (LyndonWord::zero(), LyndonWord::one());
    let bad = first_failure(pairs(), |(w, u, v)| {
        let checks = [
            (**u == zero, ab.a.get(w, u, v), "a_{0,V}"),
            (**u == zero, ab.a_prime.get(w, u, v), "a'_{0,V}"),
            (**v == one, ab.a.get(w, u, v), "a_{U,1}"),
            (**u == one, ab.b.get(w, u, v), "b_{1,V}"),
        ];
        checks
            .into_iter()
            .find(|(applies, c, _)| *applies && !c.is_zero())
            .map(|(_, c, name)| format!("{name} at W={w} U={u} V={v} is {c}"))
    });
    rows.check("a_{0,V}, a'_{0,V}, a_{U,1} and b_{1,V} vanish", Some(n), bad.is_none(), witness(bad));
    let bad = first_failure([&ab.a, &ab.b, &ab.a_prime, &ab.b_prime], |t| {
        t.iter().find(|(w, u, v, _)| u.weight() + v.weight() != w.weight()).map(|(w, u, v, _)| format!("W={w} U={u} V={v}"))
    });
    rows.check("a, b, a', b' vanish unless |U| + |V| = |W|", Some(n), bad.is_none(), witness(bad));

    let bad = first_failure(ws.iter().filter(|w| w.weight() >= 2), |w| {
        let got = dual.d_cy_in(&CoLieElement::tag(Tag::At1((*w).clone())), Basis::T01).ok()?;
        let mut expected = WedgeElement::zero(Basis::T01);
        for (u, v, c) in ab.a.row(w) {
            expected.add_wedge(Tag::T0(u.clone()), Tag::T0(v.clone()), c.clone());
            expected.add_wedge(Tag::T0(u.clone()), Tag::T1(v.clone()), -c.clone());
            expected.add_wedge(Tag::T1(u.clone()), Tag::T0(v.clone()), -c.clone());
            expected.add_wedge(Tag::T1(u.clone()), Tag::T1(v.clone()), c.clone());
        }
        (got != expected).then(|| w.to_string())
    });
    rows.check("cobracket of T_W(1) is the a-expansion in (T0 - T1)^(T0 - T1)", Some(n), bad.is_none(), witness(bad));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ok = true;
    for _ in 0..cfg.samples {
        let mut t = CoLieElement::zero(Basis::X1);
        for _ in 0..rng.gen_range(1..5) {
            let w = ws[rng.gen_range(0..ws.len())].clone();
            let tg = if rng.gen_bool(0.5) { Tag::X(w) } else { Tag::At1(w) };
            t.add_term(tg, q(rng.gen_range(-3..=3)))?;
        }
        ok &= change_basis(&change_basis(&t, Basis::T01), Basis::X1) == t;
    }
    rows.check("change of basis round trip on random elements", Some(n), ok, || Value::Null);
    Ok(())
}
