//! Connes-Kreimer Hopf algebra of decorated rooted trees.
//!
//! Trees are unordered; the canonical form keeps children sorted, so
//! structural equality is isomorphism. Decorations are positive integers
//! standing for the loop order of the primitive a node represents. The
//! coproduct is computed by direct enumeration of admissible cuts (each
//! root-to-leaf path cut at most once); the 1-cocycle property of grafting
//! is then a theorem checked by `check_cocycle`, not a definition.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::rational::Rational;

pub type Decoration = u32;

/// Rooted tree with decorated vertices; children kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DecoratedTree {
    decoration: Decoration,
    children: Vec<DecoratedTree>,
}

impl DecoratedTree {
    pub fn new(decoration: Decoration, mut children: Vec<DecoratedTree>) -> Self {
        children.sort();
        DecoratedTree {
            decoration,
            children,
        }
    }

    pub fn leaf(decoration: Decoration) -> Self {
        Self::new(decoration, Vec::new())
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    pub fn children(&self) -> &[DecoratedTree] {
        &self.children
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Self::node_count).sum::<usize>()
    }

    /// Sum of decorations; grades the combinatorial Dyson-Schwinger series.
    pub fn decoration_weight(&self) -> usize {
        self.decoration as usize
            + self
                .children
                .iter()
                .map(Self::decoration_weight)
                .sum::<usize>()
    }

    /// All admissible cuts as (pruned forest, remaining tree) pairs.
    /// Includes the empty cut (I, T); the "cut everything" term T (x) I is
    /// not an edge cut and is added by the coproduct itself.
    fn admissible_cuts(&self) -> Vec<(Forest, DecoratedTree)> {
        // Per child: either sever its edge (child subtree joins the pruned
        // part) or keep it and cut inside it recursively.
        let mut partial: Vec<(Vec<DecoratedTree>, Vec<DecoratedTree>)> =
            vec![(Vec::new(), Vec::new())];
        for child in &self.children {
            let child_cuts = child.admissible_cuts();
            let mut next = Vec::with_capacity(partial.len() * (child_cuts.len() + 1));
            for (pruned, kept) in &partial {
                // sever the edge above this child
                let mut p = pruned.clone();
                p.push(child.clone());
                next.push((p, kept.clone()));
                // keep the child, with any admissible cut inside it
                for (sub_pruned, sub_kept) in &child_cuts {
                    let mut p = pruned.clone();
                    p.extend(sub_pruned.trees().iter().cloned());
                    let mut k = kept.clone();
                    k.push(sub_kept.clone());
                    next.push((p, k));
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(pruned, kept)| {
                (
                    Forest::from_trees(pruned),
                    DecoratedTree::new(self.decoration, kept),
                )
            })
            .collect()
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decoration)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", c)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for DecoratedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        fn parse(chars: &[u8], pos: &mut usize) -> Result<DecoratedTree, Error> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return Err(Error::BadInput("expected a decoration digit".into()));
            }
            let dec: Decoration = std::str::from_utf8(&chars[start..*pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::BadInput("decoration out of range".into()))?;
            let mut children = Vec::new();
            if *pos < chars.len() && chars[*pos] == b'(' {
                *pos += 1;
                loop {
                    children.push(parse(chars, pos)?);
                    match chars.get(*pos) {
                        Some(b',') => *pos += 1,
                        Some(b')') => {
                            *pos += 1;
                            break;
                        }
                        _ => return Err(Error::BadInput("expected ',' or ')'".into())),
                    }
                }
            }
            Ok(DecoratedTree::new(dec, children))
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = parse(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::BadInput(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }
}

/// Multiset of trees; the empty forest is the algebra unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Forest(Vec<DecoratedTree>);

impl Forest {
    pub fn empty() -> Self {
        Forest(Vec::new())
    }

    pub fn from_trees(mut trees: Vec<DecoratedTree>) -> Self {
        trees.sort();
        Forest(trees)
    }

    pub fn single(tree: DecoratedTree) -> Self {
        Forest(vec![tree])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trees(&self) -> &[DecoratedTree] {
        &self.0
    }

    pub fn node_count(&self) -> usize {
        self.0.iter().map(DecoratedTree::node_count).sum()
    }

    pub fn decoration_weight(&self) -> usize {
        self.0.iter().map(DecoratedTree::decoration_weight).sum()
    }

    /// Disjoint union.
    pub fn product(&self, rhs: &Forest) -> Forest {
        let mut trees = self.0.clone();
        trees.extend(rhs.0.iter().cloned());
        Forest::from_trees(trees)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

/// Grafting operator: new root above the trees of the forest.
pub fn b_plus(forest: &Forest, decoration: Decoration) -> DecoratedTree {
    DecoratedTree::new(decoration, forest.trees().to_vec())
}

/// Q-linear combination of forests; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HopfElement {
    terms: std::collections::BTreeMap<Forest, Rational>,
}

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_forest(Forest::empty())
    }

    pub fn from_forest(f: Forest) -> Self {
        let mut e = Self::zero();
        e.add_term(f, Rational::one());
        e
    }

    pub fn from_tree(t: DecoratedTree) -> Self {
        Self::from_forest(Forest::single(t))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, f: &Forest) -> Rational {
        self.terms.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, f: Forest, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(f) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HopfElement {
            terms: self
                .terms
                .iter()
                .map(|(f, a)| (f.clone(), a * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Product in the algebra (bilinear extension of disjoint union).
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (f1, c1) in &self.terms {
            for (f2, c2) in &rhs.terms {
                out.add_term(f1.product(f2), c1 * c2);
            }
        }
        out
    }

    /// Counit: coefficient of the empty forest.
    pub fn counit(&self) -> Rational {
        self.coefficient(&Forest::empty())
    }

    /// Apply B_+ term by term.
    pub fn b_plus(&self, decoration: Decoration) -> Self {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            out.add_term(Forest::single(b_plus(f, decoration)), c.clone());
        }
        out
    }
}

/// Element of H (x) H.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorElement {
    terms: std::collections::BTreeMap<(Forest, Forest), Rational>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Forest, Forest), &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, left: Forest, right: Forest, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TensorElement {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.clone(), a * c))
                .collect(),
        }
    }

    /// Componentwise product (H (x) H is an algebra).
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &rhs.terms {
                out.add_term(l1.product(l2), r1.product(r2), c1 * c2);
            }
        }
        out
    }

    /// a (x) b for Hopf elements a, b.
    pub fn of(a: &HopfElement, b: &HopfElement) -> Self {
        let mut out = Self::zero();
        for (f1, c1) in a.terms() {
            for (f2, c2) in b.terms() {
                out.add_term(f1.clone(), f2.clone(), c1 * c2);
            }
        }
        out
    }
}

/// Shared memo for tree-level coproducts and antipodes.
#[derive(Default)]
pub struct HopfCache {
    coproducts: HashMap<DecoratedTree, TensorElement>,
    antipodes: HashMap<DecoratedTree, HopfElement>,
}

impl HopfCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn tree_coproduct(&mut self, t: &DecoratedTree) -> TensorElement {
        if let Some(hit) = self.coproducts.get(t) {
            return hit.clone();
        }
        let mut out = TensorElement::zero();
        // the all-cut term T (x) I plus every admissible edge cut
        out.add_term(Forest::single(t.clone()), Forest::empty(), Rational::one());
        for (pruned, kept) in t.admissible_cuts() {
            out.add_term(pruned, Forest::single(kept), Rational::one());
        }
        self.coproducts.insert(t.clone(), out.clone());
        out
    }

    fn forest_coproduct(&mut self, f: &Forest) -> TensorElement {
        let mut out = TensorElement::zero();
        out.add_term(Forest::empty(), Forest::empty(), Rational::one());
        for t in f.trees() {
            let dt = self.tree_coproduct(t);
            out = out.mul(&dt);
        }
        out
    }

    fn tree_antipode(&mut self, t: &DecoratedTree) -> HopfElement {
        if let Some(hit) = self.antipodes.get(t) {
            return hit.clone();
        }
        // S(T) = -T - sum over proper cuts S(P_c) R_c
        let mut out = HopfElement::from_tree(t.clone()).neg();
        for (pruned, kept) in t.admissible_cuts() {
            if pruned.is_empty() {
                continue;
            }
            let s_pruned = self.forest_antipode(&pruned);
            out = out.add(&s_pruned.mul(&HopfElement::from_tree(kept)).neg());
        }
        self.antipodes.insert(t.clone(), out.clone());
        out
    }

    fn forest_antipode(&mut self, f: &Forest) -> HopfElement {
        let mut out = HopfElement::unit();
        for t in f.trees() {
            let st = self.tree_antipode(t);
            out = out.mul(&st);
        }
        out
    }
}

/// Coproduct, extended linearly and as an algebra homomorphism.
pub fn coproduct(e: &HopfElement) -> TensorElement {
    coproduct_cached(e, &mut HopfCache::new())
}

pub fn coproduct_cached(e: &HopfElement, cache: &mut HopfCache) -> TensorElement {
    let mut out = TensorElement::zero();
    for (f, c) in e.terms() {
        out = out.add(&cache.forest_coproduct(f).scale(c));
    }
    out
}

/// Antipode, extended linearly and (anti)multiplicatively.
pub fn antipode(e: &HopfElement) -> HopfElement {
    antipode_cached(e, &mut HopfCache::new())
}

pub fn antipode_cached(e: &HopfElement, cache: &mut HopfCache) -> HopfElement {
    let mut out = HopfElement::zero();
    for (f, c) in e.terms() {
        out = out.add(&cache.forest_antipode(f).scale(c));
    }
    out
}

/// Verifies Delta B_+ = (id (x) B_+) Delta + B_+ (x) I on the given forest.
pub fn check_cocycle(f: &Forest, decoration: Decoration) -> bool {
    let mut cache = HopfCache::new();
    let grafted = HopfElement::from_tree(b_plus(f, decoration));
    let lhs = coproduct_cached(&grafted, &mut cache);

    let mut rhs = TensorElement::zero();
    for ((left, right), c) in cache.forest_coproduct(f).terms() {
        let grafted_right = b_plus(right, decoration);
        rhs.add_term(left.clone(), Forest::single(grafted_right), c.clone());
    }
    rhs.add_term(
        Forest::single(b_plus(f, decoration)),
        Forest::empty(),
        Rational::one(),
    );
    lhs == rhs
}

/// Truncated power series with Hopf-element coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfSeries {
    coeffs: Vec<HopfElement>,
}

impl HopfSeries {
    pub fn unit(truncation: usize) -> Self {
        let mut coeffs = vec![HopfElement::zero(); truncation + 1];
        coeffs[0] = HopfElement::unit();
        HopfSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<HopfElement>) -> Self {
        HopfSeries { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &HopfElement {
        &self.coeffs[n]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.truncation().min(rhs.truncation());
        let mut coeffs = vec![HopfElement::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&rhs.coeffs[j]));
            }
        }
        HopfSeries { coeffs }
    }

    /// Reciprocal; the constant term must be a nonzero multiple of I.
    pub fn recip(&self) -> Self {
        let c0 = self.coeffs[0].counit();
        assert!(
            !c0.is_zero() && self.coeffs[0] == HopfElement::unit().scale(&c0),
            "constant term must be invertible"
        );
        let n = self.truncation();
        let inv0 = c0.recip();
        let mut coeffs = vec![HopfElement::zero(); n + 1];
        coeffs[0] = HopfElement::unit().scale(&inv0);
        for k in 1..=n {
            let mut acc = HopfElement::zero();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&coeffs[k - j]));
            }
            coeffs[k] = acc.scale(&-&inv0);
        }
        HopfSeries { coeffs }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::unit(self.truncation());
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::unit(self.truncation());
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }
}

fn sign(s: i64) -> i64 {
    if s < 0 {
        -1
    } else {
        1
    }
}

/// Order-by-order solution of X = I - sign(s) sum_k x^k B_+^k(X Q^k) with
/// Q = X^{-s} and one grafting operator per loop order k (decoration k).
/// Returns [x^0]X .. [x^N]X.
pub fn combinatorial_dse(s: i64, truncation: usize) -> Vec<HopfElement> {
    assert!(truncation >= 1);
    let sgn = Rational::from_int(sign(s));
    let mut xs = vec![HopfElement::zero(); truncation + 1];
    xs[0] = HopfElement::unit();
    for n in 1..=truncation {
        let mut order_n = HopfElement::zero();
        for k in 1..=n {
            // [x^{n-k}] X Q^k = [x^{n-k}] X^{1-sk}, known from orders < n
            let known = HopfSeries::from_coeffs(xs[..n].to_vec());
            let insertion_arg = known.pow(1 - s * k as i64);
            let arg = insertion_arg.coeff(n - k);
            order_n = order_n.add(&arg.b_plus(k as Decoration).scale(&-&sgn));
        }
        xs[n] = order_n;
    }
    xs
}

/// Checks Delta([x^k]X) = sum_j [x^j]XQ^{k-j} (x) [x^{k-j}]X exactly.
pub fn check_breaking_apart(s: i64, k: usize) -> bool {
    let xs = combinatorial_dse(s, k.max(1));
    let series = HopfSeries::from_coeffs(xs.clone());
    let mut cache = HopfCache::new();
    let lhs = coproduct_cached(&xs[k], &mut cache);
    let mut rhs = TensorElement::zero();
    for j in 0..=k {
        let left = series.pow(1 - s * (k - j) as i64);
        rhs = rhs.add(&TensorElement::of(left.coeff(j), &xs[k - j]));
    }
    lhs == rhs
}

/// All decorated rooted trees with exactly `nodes` nodes, decorations drawn
/// from `decorations`.
pub fn enumerate_trees(nodes: usize, decorations: &[Decoration]) -> Vec<DecoratedTree> {
    if nodes == 0 {
        return Vec::new();
    }
    let child_forests = enumerate_forests_exact(nodes - 1, decorations);
    let mut out = Vec::new();
    for &d in decorations {
        for f in &child_forests {
            out.push(DecoratedTree::new(d, f.trees().to_vec()));
        }
    }
    out
}

/// All forests with exactly `nodes` nodes total.
pub fn enumerate_forests_exact(nodes: usize, decorations: &[Decoration]) -> Vec<Forest> {
    // multisets of trees: enforce a non-increasing tree sequence
    fn go(
        remaining: usize,
        max_tree: Option<&DecoratedTree>,
        trees_by_size: &[Vec<DecoratedTree>],
        acc: &mut Vec<DecoratedTree>,
        out: &mut Vec<Forest>,
    ) {
        if remaining == 0 {
            out.push(Forest::from_trees(acc.clone()));
            return;
        }
        for size in (1..=remaining).rev() {
            for t in &trees_by_size[size] {
                if let Some(bound) = max_tree {
                    if t > bound {
                        continue;
                    }
                }
                acc.push(t.clone());
                go(remaining - size, Some(t), trees_by_size, acc, out);
                acc.pop();
            }
        }
    }

    let mut trees_by_size: Vec<Vec<DecoratedTree>> = vec![Vec::new()];
    for s in 1..=nodes {
        trees_by_size.push(enumerate_trees(s, decorations));
    }
    let mut out = Vec::new();
    go(nodes, None, &trees_by_size, &mut Vec::new(), &mut out);
    out
}

/// All forests with at most `max_nodes` nodes, including the empty forest.
pub fn enumerate_forests(max_nodes: usize, decorations: &[Decoration]) -> Vec<Forest> {
    let mut out = vec![Forest::empty()];
    for n in 1..=max_nodes {
        out.extend(enumerate_forests_exact(n, decorations));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(d: Decoration) -> DecoratedTree {
        DecoratedTree::leaf(d)
    }

    fn chain2() -> DecoratedTree {
        DecoratedTree::new(1, vec![leaf(1)])
    }

    #[test]
    fn display_and_parse() {
        let t = DecoratedTree::new(1, vec![leaf(1), DecoratedTree::new(2, vec![leaf(1)])]);
        let s = t.to_string();
        assert_eq!(s, "1(1,2(1))");
        let back: DecoratedTree = s.parse().unwrap();
        assert_eq!(back, t);
        // children order is canonical regardless of input order
        let swapped: DecoratedTree = "1(2(1),1)".parse().unwrap();
        assert_eq!(swapped, t);
    }

    #[test]
    fn coproduct_small_cases() {
        // Delta(I) = I (x) I
        let d = coproduct(&HopfElement::unit());
        let mut expect = TensorElement::zero();
        expect.add_term(Forest::empty(), Forest::empty(), Rational::one());
        assert_eq!(d, expect);

        // Delta(single node) = node (x) I + I (x) node
        let n = HopfElement::from_tree(leaf(1));
        let d = coproduct(&n);
        let mut expect = TensorElement::zero();
        expect.add_term(Forest::single(leaf(1)), Forest::empty(), Rational::one());
        expect.add_term(Forest::empty(), Forest::single(leaf(1)), Rational::one());
        assert_eq!(d, expect);

        // Delta(2-chain) = chain (x) I + I (x) chain + node (x) node
        let c = chain2();
        let d = coproduct(&HopfElement::from_tree(c.clone()));
        let mut expect = TensorElement::zero();
        expect.add_term(Forest::single(c.clone()), Forest::empty(), Rational::one());
        expect.add_term(Forest::empty(), Forest::single(c), Rational::one());
        expect.add_term(
            Forest::single(leaf(1)),
            Forest::single(leaf(1)),
            Rational::one(),
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn antipode_small_cases() {
        assert_eq!(antipode(&HopfElement::unit()), HopfElement::unit());
        // S(node) = -node
        assert_eq!(
            antipode(&HopfElement::from_tree(leaf(1))),
            HopfElement::from_tree(leaf(1)).neg()
        );
        // S(2-chain) = -chain + node*node
        let mut expect = HopfElement::from_tree(chain2()).neg();
        expect.add_term(
            Forest::from_trees(vec![leaf(1), leaf(1)]),
            Rational::one(),
        );
        assert_eq!(antipode(&HopfElement::from_tree(chain2())), expect);
    }

    #[test]
    fn cocycle_on_small_forests() {
        assert!(check_cocycle(&Forest::empty(), 1));
        assert!(check_cocycle(&Forest::single(leaf(1)), 1));
        assert!(check_cocycle(
            &Forest::from_trees(vec![leaf(1), chain2()]),
            2
        ));
    }

    #[test]
    fn b_plus_shapes() {
        assert_eq!(b_plus(&Forest::empty(), 1), leaf(1));
        let cherry = b_plus(&Forest::from_trees(vec![leaf(1), leaf(1)]), 1);
        assert_eq!(cherry.children().len(), 2);
        // nesting twice gives a 3-chain
        let three = b_plus(&Forest::single(b_plus(&Forest::single(leaf(1)), 1)), 1);
        assert_eq!(three.to_string(), "1(1(1))");
    }

    #[test]
    fn dse_low_orders() {
        let xs = combinatorial_dse(2, 2);
        assert_eq!(xs[0], HopfElement::unit());
        // [x] X = -B_+^1(I)
        assert_eq!(xs[1], HopfElement::from_tree(leaf(1)).neg());
        // [x^2] X: coefficient of the 2-chain is -1 and of the loop-2 node is -1
        assert_eq!(xs[2].coefficient(&Forest::single(chain2())), Rational::from_int(-1));
        assert_eq!(xs[2].coefficient(&Forest::single(leaf(2))), Rational::from_int(-1));
        // grading: every forest in [x^n]X has decoration weight n
        for (n, x) in xs.iter().enumerate() {
            for (f, _) in x.terms() {
                assert_eq!(f.decoration_weight(), n);
            }
        }
    }

    #[test]
    fn breaking_apart_small() {
        assert!(check_breaking_apart(2, 0));
        assert!(check_breaking_apart(2, 1));
        assert!(check_breaking_apart(2, 3));
        assert!(check_breaking_apart(-2, 3));
    }

    #[test]
    fn enumeration_counts() {
        // undecorated rooted trees: 1, 1, 2, 4, 9, 20 (n = 1..6)
        let counts: Vec<usize> = (1..=6)
            .map(|n| enumerate_trees(n, &[1]).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
        // forests with <= 3 nodes, one decoration: I, n, nn, c2, nnn, n*c2, c3a, c3b
        assert_eq!(enumerate_forests(3, &[1]).len(), 8);
    }
}
