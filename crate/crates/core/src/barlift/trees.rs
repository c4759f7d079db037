//! Planar trivalent trees, iterated cobrackets along them, and the
//! tree-averaged map from the Lie coalgebra into the bar construction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{hain_projector, BarElement};
use crate::colie::{CoLieElement, DualCoalgebra, Tag, TagTensor};
use crate::dgcore::{CdgaElement, CdgaPresentation};
use crate::error::{Error, Result};
use crate::rational::Q;

/// A planar rooted binary tree; leaves are numbered left to right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TrivalentTree {
    Leaf,
    Node(Box<TrivalentTree>, Box<TrivalentTree>),
}

impl TrivalentTree {
    pub fn node(l: TrivalentTree, r: TrivalentTree) -> Self {
        TrivalentTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            TrivalentTree::Leaf => 1,
            TrivalentTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Leaf positions `i` such that leaves `i` and `i+1` hang from one vertex.
    pub fn cherries(&self) -> Vec<usize> {
        fn walk(t: &TrivalentTree, offset: usize, out: &mut Vec<usize>) {
            if let TrivalentTree::Node(l, r) = t {
                if **l == TrivalentTree::Leaf && **r == TrivalentTree::Leaf {
                    out.push(offset);
                } else {
                    walk(l, offset, out);
                    walk(r, offset + l.leaves(), out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    /// Collapses the cherry starting at leaf `i` into one leaf.
    pub fn strip_cherry(&self, i: usize) -> Option<TrivalentTree> {
        match self {
            TrivalentTree::Leaf => None,
            TrivalentTree::Node(l, r) => {
                if i == 0 && **l == TrivalentTree::Leaf && **r == TrivalentTree::Leaf {
                    return Some(TrivalentTree::Leaf);
                }
                let nl = l.leaves();
                if i < nl {
                    Some(TrivalentTree::node(l.strip_cherry(i)?, (**r).clone()))
                } else {
                    Some(TrivalentTree::node((**l).clone(), r.strip_cherry(i - nl)?))
                }
            }
        }
    }
}

impl fmt::Display for TrivalentTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrivalentTree::Leaf => f.write_str("*"),
            TrivalentTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Debug for TrivalentTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All planar trivalent trees with `n` leaves, ordered by the size of the
/// left subtree, then recursively.
pub fn enumerate_trees(n: usize) -> Result<Vec<TrivalentTree>> {
    if n == 0 {
        return Err(Error::InvalidInput("a tree needs at least one leaf".into()));
    }
    let mut table: Vec<Vec<TrivalentTree>> = vec![Vec::new(), vec![TrivalentTree::Leaf]];
    for k in 2..=n {
        let mut trees = Vec::new();
        for left in 1..k {
            for l in &table[left] {
                for r in &table[k - left] {
                    trees.push(TrivalentTree::node(l.clone(), r.clone()));
                }
            }
        }
        table.push(trees);
    }
    Ok(table.swap_remove(n))
}

/// The Catalan number `C(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for k in 0..n {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    c
}

fn as_tensor(t: &CoLieElement) -> TagTensor {
    let mut out = TagTensor::default();
    for (tag, c) in t.terms() {
        out.add(vec![tag.clone()], c.clone());
    }
    out
}

/// Applies the cobracket (tensor form) to factor `i` of every term.
fn cobracket_at(x: &TagTensor, i: usize, dual: &DualCoalgebra) -> Result<TagTensor> {
    let mut out = TagTensor::default();
    for (key, c) in x.terms() {
        let d = dual.cobracket_of(&key[i])?.to_tensor();
        for (pair, y) in d.terms() {
            let mut k = key[..i].to_vec();
            k.extend(pair.iter().cloned());
            k.extend_from_slice(&key[i + 1..]);
            out.add(k, c * y);
        }
    }
    Ok(out)
}

/// `δ_T(t)`, recursing from the root: `δ_T = (δ_{T_l} ⊗ δ_{T_r}) ∘ δ`.
pub fn delta_t(tree: &TrivalentTree, t: &CoLieElement, dual: &DualCoalgebra) -> Result<TagTensor> {
    fn go(tree: &TrivalentTree, x: TagTensor, pos: usize, dual: &DualCoalgebra) -> Result<TagTensor> {
        match tree {
            TrivalentTree::Leaf => Ok(x),
            TrivalentTree::Node(l, r) => {
                let split = cobracket_at(&x, pos, dual)?;
                // expand the right factor first so the left position is unchanged
                let after_right = go(r, split, pos + 1, dual)?;
                go(l, after_right, pos, dual)
            }
        }
    }
    go(tree, as_tensor(t), 0, dual)
}

/// `δ_T(t)` by stripping cherries: `δ_T = (id^{i} ⊗ δ ⊗ id) ∘ δ_{T'}` where `T'`
/// collapses the cherry at leaf `i`. `choose` picks which cherry to strip
/// among the available ones at each step.
pub fn delta_t_by_cherries(
    tree: &TrivalentTree,
    t: &CoLieElement,
    dual: &DualCoalgebra,
    choose: &dyn Fn(&[usize]) -> usize,
) -> Result<TagTensor> {
    if *tree == TrivalentTree::Leaf {
        return Ok(as_tensor(t));
    }
    let cherries = tree.cherries();
    let i = cherries[choose(&cherries) % cherries.len()];
    let smaller = tree.strip_cherry(i).expect("cherry position is valid");
    let inner = delta_t_by_cherries(&smaller, t, dual, choose)?;
    cobracket_at(&inner, i, dual)
}

/// Where each coalgebra basis tag goes: a degree-one generator, or zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenMap {
    images: BTreeMap<Tag, Option<usize>>,
}

impl GenMap {
    /// Checks compatibility with the model: for every tag `u` with
    /// `δu = Σ c x⊗y`, `d ψ(u) = -Σ c ψ(x) ψ(y)`.
    pub fn new(images: BTreeMap<Tag, Option<usize>>, dual: &DualCoalgebra, model: &CdgaPresentation) -> Result<Self> {
        let map = GenMap { images };
        for (tag, img) in &map.images {
            if let Some(g) = img {
                let gen = model
                    .generators()
                    .get(*g)
                    .ok_or_else(|| Error::InvalidMorphism(format!("{tag} maps to a missing generator")))?;
                if gen.degree != 1 || gen.weight != tag.weight() {
                    return Err(Error::InvalidMorphism(format!("{tag} maps to {} of the wrong grading", gen.name)));
                }
            }
            let mut expected = CdgaElement::zero();
            for (pair, c) in dual.cobracket_of(tag)?.to_tensor().terms() {
                let (x, y) = (map.image(&pair[0])?, map.image(&pair[1])?);
                if let (Some(x), Some(y)) = (x, y) {
                    expected.add_scaled(&model.product(&[x, y], -c.clone()), &Q::one());
                }
            }
            let actual = match img {
                Some(g) => model.generator_differential(*g).clone(),
                None => CdgaElement::zero(),
            };
            if actual != expected {
                return Err(Error::InvalidMorphism(format!(
                    "on {tag}: d of the image is {}, the cobracket gives {}",
                    model.render(&actual),
                    model.render(&expected)
                )));
            }
        }
        Ok(map)
    }

    pub fn image(&self, tag: &Tag) -> Result<Option<usize>> {
        self.images
            .get(tag)
            .copied()
            .ok_or_else(|| Error::InvalidMorphism(format!("{tag} is outside the map's domain")))
    }

    pub fn images(&self) -> &BTreeMap<Tag, Option<usize>> {
        &self.images
    }
}

/// Places each tensor factor, through `ψ`, in its own bar slot.
pub fn slotify(x: &TagTensor, gen_map: &GenMap) -> Result<BarElement> {
    let mut out = BarElement::zero();
    'terms: for (key, c) in x.terms() {
        let mut gens = Vec::with_capacity(key.len());
        for tag in key {
            match gen_map.image(tag)? {
                Some(g) => gens.push(g),
                None => continue 'terms,
            }
        }
        out.add_scaled(&BarElement::generators(&gens), c);
    }
    Ok(out)
}

/// `p_ш(Σ_{|T| = n} slotify(δ_T(t)))` for `n = 1..=max_len`, before any
/// normalizing constant. Entry `n - 1` has tensor length `n`.
pub fn unit_components(
    t: &CoLieElement,
    dual: &DualCoalgebra,
    model: &CdgaPresentation,
    gen_map: &GenMap,
    max_len: usize,
) -> Result<Vec<BarElement>> {
    let mut out = Vec::with_capacity(max_len);
    for n in 1..=max_len {
        let mut sum = TagTensor::default();
        for tree in enumerate_trees(n)? {
            sum.add_scaled(&delta_t(&tree, t, dual)?, &Q::one());
        }
        out.push(hain_projector(&slotify(&sum, gen_map)?, model)?);
    }
    Ok(out)
}

/// `1 / (n · C(n-1) · 2^n)`.
pub fn claim_constant(n: usize) -> Q {
    let denom = BigInt::from(n) * catalan(n - 1) * (BigInt::one() << n);
    Q::new(BigInt::one(), denom)
}

/// `φ(t) = p_ш(Σ_n 1/(n C(n-1) 2^n) Σ_{|T|=n} slotify(δ_T(t)))`, truncated at
/// the weight of `t`.
pub fn adjunction_unit(
    t: &CoLieElement,
    dual: &DualCoalgebra,
    model: &CdgaPresentation,
    gen_map: &GenMap,
) -> Result<BarElement> {
    let max_len = t.terms().keys().map(Tag::weight).max().unwrap_or(0);
    let mut out = BarElement::zero();
    for (k, comp) in unit_components(t, dual, model, gen_map, max_len)?.iter().enumerate() {
        out.add_scaled(comp, &claim_constant(k + 1));
    }
    Ok(out)
}
