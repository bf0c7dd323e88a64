//! Graded nilpotent quotients over a prime field.
//!
//! The quotient of the free (super)algebra by the ideal generated by a
//! relation family is computed layer by layer. For each weight w the
//! relation subspace U_w inside the free weight-w component is the span of
//! (a) the generator-multiples [u, g] of the previous layer's subspace and
//! (b) the relation instances of total weight w with slots ranging over the
//! surviving quotient basis. Right-multiplication by generators suffices to
//! close the ideal because every homogeneous element is an integral
//! combination of left-normed brackets (squares expand by the Jacobi rule
//! [c,c] = [c,[e,f]] for non-leaf c), so the closure is division-free and
//! valid in every characteristic. The quotient layer is spanned by the
//! free basis elements avoiding the pivot columns of U_w.

use crate::engel::{expand_engel_sum, expand_group_sum, Coords, ProductOracle};
use crate::freelie::{Generator, Parity};
use crate::ring::{GFp, Ring};
use crate::superalg::{ElemId, SuperAlgebra};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Relation family imposed on the free algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationFamily {
    /// No relations: the free algebra truncated at the class bound.
    Free,
    /// The symmetrized n-Engel identity.
    Engel { n: u32 },
    /// 5-Engel together with the group-derived interleaved identity.
    GroupEngel5,
}

/// A graded presentation: generators with parities, a relation family, the
/// field characteristic, optional multiweight caps, and the class bound.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub parities: Vec<Parity>,
    pub relations: RelationFamily,
    pub p: u64,
    pub caps: Option<Vec<u32>>,
    pub max_class: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// A zero layer was reached: the class is exact.
    Closed,
    /// The class bound was reached with the last layer still nonzero: the
    /// reported class is a lower bound.
    HitMaxClass,
}

/// Reduced row echelon basis of a subspace of one weight layer, over GF(p).
#[derive(Clone, Debug, Default)]
struct Echelon {
    /// (pivot column, row) sorted by pivot; rows are reduced against each
    /// other and have a leading 1 at the pivot.
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn reduce(&self, field: &GFp, v: &mut [u64]) {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = field.add(x, &field.mul(&field.neg(&c), r));
                }
            }
        }
    }

    /// Reduces and inserts; returns true if the rank grew.
    fn insert(&mut self, field: &GFp, mut v: Vec<u64>) -> bool {
        self.reduce(field, &mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field.inv(v[piv]);
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (r, x) in row.iter_mut().zip(&v) {
                    *r = field.add(r, &field.mul(&field.neg(&c), x));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(at, (piv, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// The computed graded quotient.
pub struct GradedQuotient {
    alg: SuperAlgebra,
    field: GFp,
    /// Dimension of each quotient layer, index 0 being weight 1.
    pub layer_dims: Vec<usize>,
    /// Largest weight with a nonzero layer.
    pub class: u32,
    pub terminated: Termination,
    survivors: Vec<Vec<ElemId>>,
    echelons: Vec<Echelon>,
    layer_elems: Vec<Vec<ElemId>>,
    positions: HashMap<ElemId, (usize, usize)>,
}

impl GradedQuotient {
    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.alg
    }

    /// Surviving basis representatives of one weight layer.
    pub fn survivors(&self, weight: u32) -> &[ElemId] {
        static EMPTY: [ElemId; 0] = [];
        self.survivors
            .get(weight as usize - 1)
            .map(|v| v.as_slice())
            .unwrap_or(&EMPTY)
    }

    pub fn total_dim(&self) -> usize {
        self.layer_dims.iter().sum()
    }

    /// Dimension of the quotient component of one multiweight.
    pub fn component_dim(&self, multiweight: &[u32]) -> usize {
        self.survivors
            .iter()
            .flatten()
            .filter(|&&id| self.alg.element(id).multiweight == multiweight)
            .count()
    }

    /// Reduces a homogeneous mod-p vector onto the surviving representatives.
    pub fn reduce(&self, coords: &mut BTreeMap<ElemId, u64>) {
        coords.retain(|_, c| *c % self.field.modulus() != 0);
        let Some((&first, _)) = coords.iter().next() else {
            return;
        };
        let (wi, _) = self.positions[&first];
        if self.echelons[wi].rows.is_empty() {
            return;
        }
        let layer = &self.layer_elems[wi];
        let mut dense = vec![0u64; layer.len()];
        for (id, c) in coords.iter() {
            let (w, pos) = self.positions[id];
            debug_assert_eq!(w, wi, "vector must be weight homogeneous");
            dense[pos] = *c % self.field.modulus();
        }
        self.echelons[wi].reduce(&self.field, &mut dense);
        coords.clear();
        for (pos, &c) in dense.iter().enumerate() {
            if c != 0 {
                coords.insert(layer[pos], c);
            }
        }
    }

    /// Product of two surviving representatives, expressed on survivors.
    pub fn product(&self, u: ElemId, v: ElemId) -> BTreeMap<ElemId, u64> {
        let p = self.field.modulus();
        let mut out: BTreeMap<ElemId, u64> = BTreeMap::new();
        for (id, c) in self.alg.product(u, v).terms() {
            let r = self.field.from_bigint(c);
            if r != 0 {
                out.insert(id, r);
            }
        }
        let _ = p;
        self.reduce(&mut out);
        out
    }
}

/// Oracle used while layer w is being assembled: free products reduced
/// modulo the already-final relation subspaces of the lower weights.
struct QuotientOracle<'a> {
    alg: &'a SuperAlgebra,
    field: GFp,
    echelons: &'a [Echelon],
    layer_elems: &'a [Vec<ElemId>],
    positions: &'a HashMap<ElemId, (usize, usize)>,
}

impl ProductOracle for QuotientOracle<'_> {
    type R = GFp;

    fn ring(&self) -> &GFp {
        &self.field
    }

    fn parity(&self, u: ElemId) -> Parity {
        self.alg.element(u).parity
    }

    fn product_terms(&self, u: ElemId, v: ElemId) -> Vec<(ElemId, u64)> {
        self.alg
            .product(u, v)
            .terms()
            .filter_map(|(id, c)| {
                let r = self.field.from_bigint(c);
                (r != 0).then_some((id, r))
            })
            .collect()
    }

    fn reduce(&self, coords: &mut Coords<GFp>) {
        let Some((&first, _)) = coords.iter().next() else {
            return;
        };
        let (wi, _) = self.positions[&first];
        if wi >= self.echelons.len() || self.echelons[wi].rows.is_empty() {
            return;
        }
        let layer = &self.layer_elems[wi];
        let mut dense = vec![0u64; layer.len()];
        for (id, c) in coords.iter() {
            dense[self.positions[id].1] = *c;
        }
        self.echelons[wi].reduce(&self.field, &mut dense);
        coords.clear();
        for (pos, &c) in dense.iter().enumerate() {
            if c != 0 {
                coords.insert(layer[pos], c);
            }
        }
    }
}

/// Enumerates non-decreasing multisets of `count` slots from `pool` whose
/// weights sum to `budget` exactly.
fn weight_multisets(
    alg: &SuperAlgebra,
    pool: &[ElemId],
    count: usize,
    budget: u32,
    emit: &mut dyn FnMut(&[ElemId]),
) {
    fn rec(
        alg: &SuperAlgebra,
        pool: &[ElemId],
        start: usize,
        remaining: usize,
        budget: u32,
        chosen: &mut Vec<ElemId>,
        emit: &mut dyn FnMut(&[ElemId]),
    ) {
        if remaining == 0 {
            if budget == 0 {
                emit(chosen);
            }
            return;
        }
        if budget < remaining as u32 {
            return;
        }
        for (i, &cand) in pool.iter().enumerate().skip(start) {
            let w = alg.element(cand).weight;
            if w + (remaining as u32 - 1) > budget {
                continue;
            }
            chosen.push(cand);
            rec(alg, pool, i, remaining - 1, budget - w, chosen, emit);
            chosen.pop();
        }
    }
    let mut chosen = Vec::new();
    rec(alg, pool, 0, count, budget, &mut chosen, emit);
}

impl Presentation {
    fn validate(&self) -> Result<()> {
        if self.parities.is_empty() {
            return Err(Error::InvalidInput("at least one generator".into()));
        }
        if !crate::exactla::is_prime_u64(self.p) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.p)));
        }
        if self.max_class == 0 {
            return Err(Error::InvalidInput("class bound must be positive".into()));
        }
        if let RelationFamily::Engel { n } = self.relations {
            if n == 0 {
                return Err(Error::InvalidInput("Engel degree must be positive".into()));
            }
        }
        Ok(())
    }

    /// Computes the graded quotient layer by layer, stopping early once a
    /// layer vanishes (all higher layers then vanish too, since the
    /// quotient is generated in weight one).
    pub fn run(&self) -> Result<GradedQuotient> {
        self.validate()?;
        let gens: Vec<Generator> = crate::freelie::generators(&self.parities);
        let alg = SuperAlgebra::new(&gens, self.max_class, self.caps.as_deref())?;
        let field = GFp::new(self.p);

        let max_w = self.max_class as usize;
        let mut layer_elems: Vec<Vec<ElemId>> = Vec::with_capacity(max_w);
        let mut positions: HashMap<ElemId, (usize, usize)> = HashMap::new();
        for w in 1..=self.max_class {
            let layer = alg.weight_layer(w);
            for (pos, &id) in layer.iter().enumerate() {
                positions.insert(id, (w as usize - 1, pos));
            }
            layer_elems.push(layer);
        }

        let gen_elems: Vec<ElemId> = (1..=gens.len() as u32)
            .map(|i| alg.generator_elem(i))
            .collect();

        let mut echelons: Vec<Echelon> = vec![Echelon::default(); max_w];
        let mut survivors: Vec<Vec<ElemId>> = Vec::with_capacity(max_w);
        survivors.push(layer_elems[0].clone());
        let mut layer_dims: Vec<usize> = vec![layer_elems[0].len()];
        let mut terminated = Termination::HitMaxClass;

        let (engel_n, with_group) = match self.relations {
            RelationFamily::Free => (None, false),
            RelationFamily::Engel { n } => (Some(n), false),
            RelationFamily::GroupEngel5 => (Some(5), true),
        };

        for w in 2..=self.max_class {
            let wi = w as usize - 1;
            let layer = layer_elems[wi].clone();
            let mut echelon = Echelon::default();

            // (a) generator multiples of the previous relation subspace
            let prev = echelons[wi - 1].rows.clone();
            for (_, row) in &prev {
                let mut coords: BTreeMap<ElemId, u64> = BTreeMap::new();
                for (pos, &c) in row.iter().enumerate() {
                    if c != 0 {
                        coords.insert(layer_elems[wi - 1][pos], c);
                    }
                }
                for &g in &gen_elems {
                    let mut out = vec![0u64; layer.len()];
                    for (&u, &cu) in &coords {
                        for (id, c) in alg.product(u, g).terms() {
                            let r = field.from_bigint(c);
                            if r == 0 {
                                continue;
                            }
                            let (pw, pos) = positions[&id];
                            debug_assert_eq!(pw, wi);
                            out[pos] = field.add(&out[pos], &field.mul(&cu, &r));
                        }
                    }
                    echelon.insert(&field, out);
                }
            }

            // (b) relation instances of total weight w over the survivors
            if let Some(n) = engel_n {
                let pool: Vec<ElemId> = survivors.iter().flatten().copied().collect();
                let oracle = QuotientOracle {
                    alg: &alg,
                    field,
                    echelons: &echelons,
                    layer_elems: &layer_elems,
                    positions: &positions,
                };
                let mut sink = |coords: Coords<GFp>| {
                    let mut out = vec![0u64; layer.len()];
                    let mut any = false;
                    for (id, c) in coords {
                        let (pw, pos) = positions[&id];
                        debug_assert_eq!(pw, wi);
                        out[pos] = c;
                        any = true;
                    }
                    if any {
                        echelon.insert(&field, out);
                    }
                };
                for &leading in &pool {
                    let lw = alg.element(leading).weight;
                    if lw + n > w {
                        continue;
                    }
                    weight_multisets(&alg, &pool, n as usize, w - lw, &mut |slots| {
                        sink(expand_engel_sum(&oracle, leading, slots));
                    });
                }
                if with_group {
                    for &leading in &pool {
                        for &fixed in &pool {
                            let used = alg.element(leading).weight + alg.element(fixed).weight;
                            if used + 5 > w {
                                continue;
                            }
                            weight_multisets(&alg, &pool, 5, w - used, &mut |slots| {
                                sink(expand_group_sum(&oracle, leading, fixed, slots));
                            });
                        }
                    }
                }
            }

            let dim = layer.len() - echelon.rank();
            let pivots: Vec<usize> = echelon.rows.iter().map(|(p, _)| *p).collect();
            let surv: Vec<ElemId> = layer
                .iter()
                .enumerate()
                .filter(|(pos, _)| !pivots.contains(pos))
                .map(|(_, &id)| id)
                .collect();
            echelons[wi] = echelon;
            layer_dims.push(dim);
            survivors.push(surv);
            if dim == 0 {
                terminated = Termination::Closed;
                break;
            }
        }

        // once a layer dies every higher layer is zero (the quotient is
        // generated in weight one), so pad the report up to the bound
        if terminated == Termination::Closed {
            while layer_dims.len() < max_w {
                layer_dims.push(0);
                survivors.push(Vec::new());
            }
        }
        let class = layer_dims
            .iter()
            .rposition(|&d| d > 0)
            .map(|i| i as u32 + 1)
            .unwrap_or(0);
        Ok(GradedQuotient {
            alg,
            field,
            layer_dims,
            class,
            terminated,
            survivors,
            echelons,
            layer_elems,
            positions,
        })
    }
}
