//! The free Lie superalgebra over the integers on a graded generating set.
//!
//! The module basis consists of the basic commutators together with the
//! squares `[c,c]` for odd basic commutators `c`. Arbitrary brackets are
//! collected onto this basis using only super-antisymmetry, the two-term
//! expansion `[a,[b,c]] = [a,b,c] - (-1)^{|b||c|}[a,c,b]`, `[a,a] = 0` for
//! even `a` and `[a,a,a] = 0` for odd `a`. No division is ever performed,
//! so the collected structure constants are valid over every characteristic.

use crate::freelie::{
    enumerate_basic, BasisEnumeration, CommutatorId, Generator, Parity, Shape,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::rc::Rc;

/// Identifier of a superalgebra basis element within one [`SuperAlgebra`].
pub type ElemId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SuperBasisKind {
    /// A basic commutator.
    Basic(CommutatorId),
    /// `[c,c]` for an odd basic commutator `c`.
    Square(CommutatorId),
}

/// A basis element of the free Lie superalgebra: a basic commutator, or the
/// square of an odd one (weight doubled, even parity).
#[derive(Clone, Debug, Serialize)]
pub struct SuperBasisElement {
    pub kind: SuperBasisKind,
    pub weight: u32,
    pub multiweight: Vec<u32>,
    pub parity: Parity,
}

/// An integer linear combination of superalgebra basis elements. Zero
/// coefficients are never stored; the empty map is the zero element.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SuperElement {
    terms: BTreeMap<ElemId, BigInt>,
}

impl SuperElement {
    pub fn zero() -> Self {
        SuperElement::default()
    }

    pub fn basis(id: ElemId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, BigInt::from(1));
        SuperElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElemId, &BigInt)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, id: ElemId) -> BigInt {
        self.terms.get(&id).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_scaled(&mut self, other: &SuperElement, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (&id, c) in &other.terms {
            let entry = self.terms.entry(id).or_insert_with(BigInt::zero);
            *entry += c * scale;
            if entry.is_zero() {
                self.terms.remove(&id);
            }
        }
    }

    pub fn add_term(&mut self, id: ElemId, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(id).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn scaled(&self, scale: i64) -> SuperElement {
        let mut out = SuperElement::zero();
        out.add_scaled(self, &BigInt::from(scale));
        out
    }
}

/// A formal bracketing over generators, input to [`SuperAlgebra::normalize`].
#[derive(Clone, Debug)]
pub enum Expr {
    /// Generator by 1-based index.
    Gen(u32),
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(i: u32) -> Expr {
        Expr::Gen(i)
    }

    pub fn bracket(l: Expr, r: Expr) -> Expr {
        Expr::Bracket(Box::new(l), Box::new(r))
    }

    /// Left-normed bracket `[x1, x2, ..., xk]`.
    pub fn left_normed(parts: &[Expr]) -> Expr {
        assert!(!parts.is_empty());
        let mut it = parts.iter().cloned();
        let first = it.next().unwrap();
        it.fold(first, Expr::bracket)
    }
}

/// The free Lie superalgebra truncated at a class bound, with lazily
/// memoized basis products. Building the full table gives the structure
/// constants of every basis pair within the class bound.
pub struct SuperAlgebra {
    commutators: BasisEnumeration,
    elements: Vec<SuperBasisElement>,
    by_basic: Vec<ElemId>,
    square_of: HashMap<CommutatorId, ElemId>,
    class_bound: u32,
    caps: Option<Vec<u32>>,
    products: RefCell<HashMap<(ElemId, ElemId), Option<Rc<SuperElement>>>>,
    discarded: Cell<u64>,
}

impl SuperAlgebra {
    /// Builds the truncated free superalgebra on the given generators up to
    /// `class_bound`, with optional per-generator multiweight caps.
    pub fn new(generators: &[Generator], class_bound: u32, caps: Option<&[u32]>) -> Result<Self> {
        if class_bound < 1 {
            return Err(Error::InvalidInput("class bound must be >= 1".into()));
        }
        let commutators = enumerate_basic(generators, class_bound, caps)?;
        // basis: basic commutators plus squares of odd ones, ordered by
        // (weight, basic-before-square, commutator ordinal)
        let mut keyed: Vec<(u32, u8, u32, SuperBasisElement)> = Vec::new();
        for c in commutators.iter() {
            keyed.push((
                c.weight,
                0,
                c.ordinal,
                SuperBasisElement {
                    kind: SuperBasisKind::Basic(c.ordinal),
                    weight: c.weight,
                    multiweight: c.multiweight.clone(),
                    parity: c.parity,
                },
            ));
            if c.parity == Parity::Odd && 2 * c.weight <= class_bound {
                let mw: Vec<u32> = c.multiweight.iter().map(|&m| 2 * m).collect();
                let capped = caps
                    .map(|cp| mw.iter().zip(cp).any(|(m, cap)| m > cap))
                    .unwrap_or(false);
                if !capped {
                    keyed.push((
                        2 * c.weight,
                        1,
                        c.ordinal,
                        SuperBasisElement {
                            kind: SuperBasisKind::Square(c.ordinal),
                            weight: 2 * c.weight,
                            multiweight: mw,
                            parity: Parity::Even,
                        },
                    ));
                }
            }
        }
        keyed.sort_by_key(|(w, k, o, _)| (*w, *k, *o));
        let elements: Vec<SuperBasisElement> = keyed.into_iter().map(|(_, _, _, e)| e).collect();
        let mut by_basic = vec![0u32; commutators.len()];
        let mut square_of = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            match e.kind {
                SuperBasisKind::Basic(c) => by_basic[c as usize] = i as u32,
                SuperBasisKind::Square(c) => {
                    square_of.insert(c, i as u32);
                }
            }
        }
        Ok(SuperAlgebra {
            commutators,
            elements,
            by_basic,
            square_of,
            class_bound,
            caps: caps.map(|c| c.to_vec()),
            products: RefCell::new(HashMap::new()),
            discarded: Cell::new(0),
        })
    }

    pub fn commutators(&self) -> &BasisEnumeration {
        &self.commutators
    }

    pub fn generators(&self) -> &[Generator] {
        self.commutators.generators()
    }

    pub fn class_bound(&self) -> u32 {
        self.class_bound
    }

    pub fn caps(&self) -> Option<&[u32]> {
        self.caps.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, id: ElemId) -> &SuperBasisElement {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = (ElemId, &SuperBasisElement)> {
        self.elements.iter().enumerate().map(|(i, e)| (i as u32, e))
    }

    /// Ids of the basis elements of the given weight.
    pub fn weight_layer(&self, weight: u32) -> Vec<ElemId> {
        self.elements()
            .filter(|(_, e)| e.weight == weight)
            .map(|(i, _)| i)
            .collect()
    }

    /// Ids of the basis elements with exactly the given multiweight.
    pub fn component(&self, multiweight: &[u32]) -> Vec<ElemId> {
        self.elements()
            .filter(|(_, e)| e.multiweight == multiweight)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn basic_elem(&self, c: CommutatorId) -> ElemId {
        self.by_basic[c as usize]
    }

    pub fn generator_elem(&self, gen_index: u32) -> ElemId {
        self.basic_elem(self.commutators.leaf(gen_index))
    }

    /// Number of terms discarded so far because they exceeded the class
    /// bound or a multiweight cap.
    pub fn discarded_terms(&self) -> u64 {
        self.discarded.get()
    }

    fn discard(&self) {
        self.discarded.set(self.discarded.get() + 1);
    }

    fn within_caps(&self, mw: &[u32]) -> bool {
        match &self.caps {
            None => true,
            Some(c) => mw.iter().zip(c).all(|(m, cap)| m <= cap),
        }
    }

    /// The Lie product of two basis elements, as integer coordinates on the
    /// superalgebra basis. Memoized. Terms beyond the class bound or caps
    /// are discarded (counted in diagnostics).
    pub fn product(&self, u: ElemId, v: ElemId) -> Rc<SuperElement> {
        if let Some(p) = self.products.borrow().get(&(u, v)) {
            match p {
                Some(rc) => return rc.clone(),
                None => panic!("collection cycle on product ({}, {})", u, v),
            }
        }
        self.products.borrow_mut().insert((u, v), None);
        let result = Rc::new(self.product_uncached(u, v));
        self.products
            .borrow_mut()
            .insert((u, v), Some(result.clone()));
        result
    }

    fn product_uncached(&self, u: ElemId, v: ElemId) -> SuperElement {
        let (eu, ev) = (&self.elements[u as usize], &self.elements[v as usize]);
        if eu.weight + ev.weight > self.class_bound {
            self.discard();
            return SuperElement::zero();
        }
        let mw: Vec<u32> = eu
            .multiweight
            .iter()
            .zip(&ev.multiweight)
            .map(|(a, b)| a + b)
            .collect();
        if !self.within_caps(&mw) {
            self.discard();
            return SuperElement::zero();
        }
        if u == v {
            return match eu.kind {
                SuperBasisKind::Basic(c) if eu.parity == Parity::Odd => {
                    match self.square_of.get(&c) {
                        Some(&s) => SuperElement::basis(s),
                        None => {
                            // square pruned by caps or class bound
                            self.discard();
                            SuperElement::zero()
                        }
                    }
                }
                _ => SuperElement::zero(), // [a,a] = 0 for even a
            };
        }
        if u < v {
            // [u,v] = -(-1)^{|u||v|}[v,u]
            let sign = if eu.parity == Parity::Odd && ev.parity == Parity::Odd {
                1
            } else {
                -1
            };
            return self.product(v, u).scaled(sign);
        }
        match (eu.kind, ev.kind) {
            (SuperBasisKind::Basic(c), SuperBasisKind::Basic(d)) => {
                if self.commutators.is_basic_pair(c, d) {
                    let node = self
                        .commutators
                        .node(c, d)
                        .expect("basic pair within bounds must be enumerated");
                    return SuperElement::basis(self.basic_elem(node));
                }
                // c = [e,f] with f > d:
                // [[e,f],d] = [e,[f,d]] + (-1)^{|f||d|}[[e,d],f]
                let Shape::Node(e, f) = self.commutators.get(c).shape else {
                    unreachable!("a leaf pair with c > d is always basic");
                };
                let (fe, fd) = (self.commutators.get(f), self.commutators.get(d));
                let sign = if fe.parity == Parity::Odd && fd.parity == Parity::Odd {
                    -1i64
                } else {
                    1
                };
                let e_elem = SuperElement::basis(self.basic_elem(e));
                let f_elem = SuperElement::basis(self.basic_elem(f));
                let fd_prod = self.mul(
                    &SuperElement::basis(self.basic_elem(f)),
                    &SuperElement::basis(self.basic_elem(d)),
                );
                let ed_prod = self.mul(
                    &e_elem,
                    &SuperElement::basis(self.basic_elem(d)),
                );
                let mut out = self.mul(&e_elem, &fd_prod);
                out.add_scaled(&self.mul(&ed_prod, &f_elem), &BigInt::from(sign));
                out
            }
            (SuperBasisKind::Square(c), SuperBasisKind::Basic(d)) => {
                if c == d {
                    // [c,c,c] = 0 for odd c
                    return SuperElement::zero();
                }
                // [[c,c],d] = -[d,[c,c]] = -2[[d,c],c]
                let c_elem = SuperElement::basis(self.basic_elem(c));
                let d_elem = SuperElement::basis(self.basic_elem(d));
                let dc = self.mul(&d_elem, &c_elem);
                self.mul(&dc, &c_elem).scaled(-2)
            }
            (SuperBasisKind::Basic(d), SuperBasisKind::Square(c)) => {
                // [d,[c,c]] = 2[[d,c],c]  (c odd)
                let c_elem = SuperElement::basis(self.basic_elem(c));
                let d_elem = SuperElement::basis(self.basic_elem(d));
                let dc = self.mul(&d_elem, &c_elem);
                self.mul(&dc, &c_elem).scaled(2)
            }
            (SuperBasisKind::Square(c), SuperBasisKind::Square(d)) => {
                // [[c,c],[d,d]] = 2[[[c,c],d],d]
                let cc = SuperElement::basis(u);
                let d_elem = SuperElement::basis(self.basic_elem(d));
                let _ = c;
                let ccd = self.mul(&cc, &d_elem);
                self.mul(&ccd, &d_elem).scaled(2)
            }
        }
    }

    /// Bilinear extension of [`SuperAlgebra::product`].
    pub fn mul(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for (u, cu) in x.terms() {
            for (v, cv) in y.terms() {
                let p = self.product(u, v);
                out.add_scaled(&p, &(cu * cv));
            }
        }
        out
    }

    /// Collects a formal bracketing of generators into basis coordinates.
    pub fn normalize(&self, expr: &Expr) -> Result<SuperElement> {
        match expr {
            Expr::Gen(i) => {
                if *i == 0 || *i as usize > self.generators().len() {
                    return Err(Error::InvalidInput(format!(
                        "generator index {} out of range",
                        i
                    )));
                }
                Ok(SuperElement::basis(self.generator_elem(*i)))
            }
            Expr::Bracket(l, r) => {
                let (l, r) = (self.normalize(l)?, self.normalize(r)?);
                Ok(self.mul(&l, &r))
            }
        }
    }

    /// Forces every product of basis pairs within the class bound; the
    /// memoized products are then a complete structure-constant table.
    pub fn build_structure_table(&self) -> usize {
        let mut pairs = 0;
        for (u, eu) in self.elements.iter().enumerate() {
            for (v, ev) in self.elements.iter().enumerate() {
                if eu.weight + ev.weight <= self.class_bound {
                    self.product(u as u32, v as u32);
                    pairs += 1;
                    let _ = ev;
                }
            }
        }
        pairs
    }

    /// Per-weight dimensions (1-indexed by weight).
    pub fn weight_dims(&self) -> Vec<usize> {
        (1..=self.class_bound)
            .map(|w| self.weight_layer(w).len())
            .collect()
    }

    /// Deterministic text dump of the basis and every in-bound product, for
    /// regression diffing.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.elements() {
            let _ = writeln!(
                out,
                "basis {} {} w={} mw={:?} {}",
                i,
                self.display_elem(i),
                e.weight,
                e.multiweight,
                match e.parity {
                    Parity::Even => "even",
                    Parity::Odd => "odd",
                }
            );
        }
        for u in 0..self.elements.len() as u32 {
            for v in 0..self.elements.len() as u32 {
                let (eu, ev) = (&self.elements[u as usize], &self.elements[v as usize]);
                if eu.weight + ev.weight > self.class_bound {
                    continue;
                }
                let p = self.product(u, v);
                let rhs = if p.is_zero() {
                    "0".to_string()
                } else {
                    p.terms()
                        .map(|(id, c)| format!("{}*{}", c, id))
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                let _ = writeln!(out, "{} {} -> {}", u, v, rhs);
            }
        }
        out
    }

    pub fn display_elem(&self, id: ElemId) -> String {
        match self.elements[id as usize].kind {
            SuperBasisKind::Basic(c) => self.commutators.display(c),
            SuperBasisKind::Square(c) => {
                let s = self.commutators.display(c);
                format!("[{},{}]", s, s)
            }
        }
    }

    pub fn display_element(&self, x: &SuperElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms()
            .map(|(id, c)| format!("{}*{}", c, self.display_elem(id)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
