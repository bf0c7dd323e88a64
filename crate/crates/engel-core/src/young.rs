//! Partitions, Young diagrams and tableaux, primitive idempotents of the
//! symmetric group algebra, strip decompositions, and the translation of
//! diagrams into 3/4-generator superalgebra case specifications.

use crate::freelie::Parity;
use crate::grassmann::GrassmannMonomial;
use crate::perm::{symmetric_group_on, Permutation};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// A partition of n: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidInput("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("parts must be weakly decreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Length of column `j` (0-based).
    pub fn column_len(&self, j: u32) -> u32 {
        self.parts.iter().filter(|&&p| p > j).count() as u32
    }

    /// Cells as (row, col), 0-based, row-major.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                out.push((r as u32, c));
            }
        }
        out
    }
}

/// All partitions of n in reverse-lexicographic order (so `(n)` first,
/// `(1,1,...,1)` last).
pub fn partitions(n: u32) -> Vec<Partition> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        let hi = remaining.min(max);
        for p in (1..=hi).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    out
}

/// A tableau: a shape plus a bijective filling of the cells with 1..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungTableau {
    pub shape: Partition,
    /// filling[i] is the entry of the i-th cell in row-major order, 1-based.
    pub filling: Vec<u32>,
}

impl YoungTableau {
    pub fn new(shape: Partition, filling: Vec<u32>) -> Result<Self> {
        let n = shape.n() as usize;
        if filling.len() != n {
            return Err(Error::InvalidInput("filling size mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &v in &filling {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::InvalidInput("filling must be a bijection".into()));
            }
            seen[v as usize - 1] = true;
        }
        Ok(YoungTableau { shape, filling })
    }

    /// Row-major filling 1,2,...,n.
    pub fn canonical(shape: Partition) -> Self {
        let n = shape.n();
        YoungTableau {
            shape,
            filling: (1..=n).collect(),
        }
    }

    /// Entries of each row (values are 0-based positions for Sym(n)).
    fn row_supports(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut idx = 0usize;
        for &len in &self.shape.parts {
            let row: Vec<usize> = (0..len)
                .map(|_| {
                    let v = self.filling[idx] as usize - 1;
                    idx += 1;
                    v
                })
                .collect();
            out.push(row);
        }
        out
    }

    fn column_supports(&self) -> Vec<Vec<usize>> {
        let cells = self.shape.cells();
        let ncols = self.shape.parts[0];
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols as usize];
        for (i, &(_, c)) in cells.iter().enumerate() {
            cols[c as usize].push(self.filling[i] as usize - 1);
        }
        cols
    }

    /// All standard tableaux of the given shape (entries increase along rows
    /// and down columns).
    pub fn standard(shape: &Partition) -> Vec<YoungTableau> {
        let cells = shape.cells();
        let n = cells.len();
        let mut out = Vec::new();
        let mut filling = vec![0u32; n];
        // cell index by (row,col)
        let pos: HashMap<(u32, u32), usize> =
            cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        fn rec(
            next: u32,
            n: u32,
            cells: &[(u32, u32)],
            pos: &HashMap<(u32, u32), usize>,
            filling: &mut Vec<u32>,
            out: &mut Vec<YoungTableau>,
            shape: &Partition,
        ) {
            if next > n {
                out.push(YoungTableau {
                    shape: shape.clone(),
                    filling: filling.clone(),
                });
                return;
            }
            for (i, &(r, c)) in cells.iter().enumerate() {
                if filling[i] != 0 {
                    continue;
                }
                let left_ok = c == 0 || filling[pos[&(r, c - 1)]] != 0;
                let up_ok = r == 0 || pos.get(&(r - 1, c)).is_none_or(|&j| filling[j] != 0);
                if left_ok && up_ok {
                    filling[i] = next;
                    rec(next + 1, n, cells, pos, filling, out, shape);
                    filling[i] = 0;
                }
            }
        }
        rec(1, n as u32, &cells, &pos, &mut filling, &mut out, shape);
        out
    }
}

/// A sparse integer element of the group ring of Sym(n).
pub type GroupRingElement = BTreeMap<Permutation, BigInt>;

fn group_ring_mul(x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
    let mut out: GroupRingElement = BTreeMap::new();
    for (p, a) in x {
        for (q, b) in y {
            let pq = p.compose(q);
            let e = out.entry(pq).or_insert_with(BigInt::zero);
            *e += a * b;
            if e.is_zero() {
                // keep map sparse
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The tableau idempotent `e = sum_{pi in V, rho in H} sign(pi) pi rho`,
/// together with the scalar `k` such that `e * e = k * e`. Aborts with an
/// internal error if `e^2` is not proportional to `e`.
pub fn idempotent(t: &YoungTableau) -> Result<(GroupRingElement, BigInt)> {
    let n = t.shape.n() as usize;
    // V = column group, H = row group, as direct products of the
    // per-column / per-row symmetric groups
    let mut v_group = vec![Permutation::identity(n)];
    for col in t.column_supports() {
        let mut next = Vec::new();
        for g in symmetric_group_on(n, &col) {
            for p in &v_group {
                next.push(p.compose(&g));
            }
        }
        v_group = next;
    }
    let mut h_group = vec![Permutation::identity(n)];
    for row in t.row_supports() {
        let mut next = Vec::new();
        for g in symmetric_group_on(n, &row) {
            for p in &h_group {
                next.push(p.compose(&g));
            }
        }
        h_group = next;
    }
    let mut e: GroupRingElement = BTreeMap::new();
    for pi in &v_group {
        let s = BigInt::from(pi.sign());
        for rho in &h_group {
            let g = pi.compose(rho);
            let entry = e.entry(g).or_insert_with(BigInt::zero);
            *entry += &s;
        }
    }
    e.retain(|_, v| !v.is_zero());

    let e2 = group_ring_mul(&e, &e);
    // find k via the identity coefficient, then verify e2 == k*e
    let id = Permutation::identity(n);
    let c_e = e.get(&id).cloned().unwrap_or_else(BigInt::zero);
    let c_e2 = e2.get(&id).cloned().unwrap_or_else(BigInt::zero);
    if c_e.is_zero() {
        return Err(Error::Internal("idempotent has no identity term".into()));
    }
    if (&c_e2 % &c_e) != BigInt::zero() {
        return Err(Error::Internal("e^2 not proportional to e".into()));
    }
    let k = &c_e2 / &c_e;
    let mut scaled = e.clone();
    for v in scaled.values_mut() {
        *v *= &k;
    }
    if scaled != e2 {
        return Err(Error::Internal("e^2 not proportional to e".into()));
    }
    Ok((e, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strip {
    pub orientation: Orientation,
    pub length: u32,
    pub cells: Vec<(u32, u32)>,
}

/// Disjoint cover of a diagram by at most 4 row/column segments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripDecomposition {
    pub strips: Vec<Strip>,
}

/// Decomposes a diagram into at most 4 strips: peel the first column as a
/// vertical strip while the column is taller than the remaining strip
/// budget, then cut the rest into horizontal row strips. A leftover single
/// column becomes one vertical strip rather than a stack of single-cell
/// rows.
pub fn strip_decompose(shape: &Partition) -> Result<StripDecomposition> {
    let mut strips = Vec::new();
    let mut parts = shape.parts.clone();
    let mut col_offset = 0u32;
    let mut budget = 4i32;
    loop {
        parts.retain(|&p| p > 0);
        if parts.is_empty() {
            break;
        }
        if budget == 0 {
            return Err(Error::InvalidInput(format!(
                "shape {:?} needs more than 4 strips",
                shape.parts
            )));
        }
        let rows = parts.len() as u32;
        let single_column = parts.iter().all(|&p| p == 1);
        if single_column && rows >= 2 {
            strips.push(Strip {
                orientation: Orientation::Vertical,
                length: rows,
                cells: (0..rows).map(|r| (r, col_offset)).collect(),
            });
            break;
        }
        if rows as i32 <= budget {
            for (r, &len) in parts.iter().enumerate() {
                strips.push(Strip {
                    orientation: Orientation::Horizontal,
                    length: len,
                    cells: (0..len).map(|c| (r as u32, col_offset + c)).collect(),
                });
            }
            break;
        }
        // peel the first column
        strips.push(Strip {
            orientation: Orientation::Vertical,
            length: rows,
            cells: (0..rows).map(|r| (r, col_offset)).collect(),
        });
        for p in parts.iter_mut() {
            *p -= 1;
        }
        col_offset += 1;
        budget -= 1;
    }
    Ok(StripDecomposition { strips })
}

/// One summand of a case generator: a base-generator slot tensored with a
/// Grassmann monomial tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSummand {
    pub slot: u32,
    pub monomial: GrassmannMonomial,
}

/// A 3- or 4-generator superalgebra problem distilled from a strip
/// decomposition: generator parities (odd per vertical strip, even per
/// horizontal strip), the target multiweight (strip lengths), and the
/// Grassmann embedding of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub generator_parities: Vec<Parity>,
    pub target_multiweight: Vec<u32>,
    pub grassmann_embedding: Vec<Vec<EmbeddingSummand>>,
    pub source_diagrams: Vec<Partition>,
    /// Include the group-derived identity when building relations.
    pub group_identity: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofTarget {
    /// 5-Engel, weight 12, general characteristic.
    Engel5Main,
    /// Characteristic 11, multiweight (4,1^8) via Sym(8).
    Char11Step1,
    /// Characteristic 11, multiweight (2,1^10) via Sym(10); first row <= 3.
    Char11Step2,
    /// 5-Engel group identity pipeline, weight 12.
    GroupEngel5,
}

impl ProofTarget {
    pub fn cell_count(self) -> u32 {
        match self {
            ProofTarget::Engel5Main | ProofTarget::GroupEngel5 => 12,
            ProofTarget::Char11Step1 => 8,
            ProofTarget::Char11Step2 => 10,
        }
    }
}

fn case_from_strips(decomp: &StripDecomposition, group_identity: bool) -> CaseSpec {
    // verticals first, longest first; ties keep discovery order
    let mut verts: Vec<&Strip> = decomp
        .strips
        .iter()
        .filter(|s| s.orientation == Orientation::Vertical)
        .collect();
    let mut horiz: Vec<&Strip> = decomp
        .strips
        .iter()
        .filter(|s| s.orientation == Orientation::Horizontal)
        .collect();
    verts.sort_by_key(|s| std::cmp::Reverse(s.length));
    horiz.sort_by_key(|s| std::cmp::Reverse(s.length));

    let mut parities = Vec::new();
    let mut multiweight = Vec::new();
    let mut embedding = Vec::new();
    let mut next_index = 1u32;
    for s in &verts {
        parities.push(Parity::Odd);
        multiweight.push(s.length);
        let mut summands = Vec::new();
        for slot in 0..s.length {
            summands.push(EmbeddingSummand {
                slot,
                monomial: GrassmannMonomial::generator(next_index),
            });
            next_index += 1;
        }
        embedding.push(summands);
    }
    for s in &horiz {
        parities.push(Parity::Even);
        multiweight.push(s.length);
        let mut summands = Vec::new();
        for slot in 0..s.length {
            summands.push(EmbeddingSummand {
                slot,
                monomial: GrassmannMonomial::new(vec![next_index, next_index + 1], 1),
            });
            next_index += 2;
        }
        embedding.push(summands);
    }
    CaseSpec {
        generator_parities: parities,
        target_multiweight: multiweight,
        grassmann_embedding: embedding,
        source_diagrams: Vec::new(),
        group_identity,
    }
}

/// Generates the deduplicated case list for a proof target: decompose every
/// diagram of the right cell count, merge cases with the same parity/
/// multiweight signature, accumulate the covered diagrams.
pub fn cases_for(target: ProofTarget) -> Result<Vec<CaseSpec>> {
    let n = target.cell_count();
    let group = target == ProofTarget::GroupEngel5;
    let mut merged: BTreeMap<(Vec<u8>, Vec<u32>), CaseSpec> = BTreeMap::new();
    for shape in partitions(n) {
        if target == ProofTarget::Char11Step2 && shape.parts[0] > 3 {
            continue;
        }
        let decomp = strip_decompose(&shape)?;
        let mut case = case_from_strips(&decomp, group);
        case.source_diagrams.push(shape.clone());
        let key = (
            case.generator_parities.iter().map(|p| p.bit()).collect(),
            case.target_multiweight.clone(),
        );
        merged
            .entry(key)
            .and_modify(|c| c.source_diagrams.push(shape.clone()))
            .or_insert(case);
    }
    Ok(merged.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(1), vec![Partition::new(vec![1]).unwrap()]);
        assert_eq!(partitions(12).len(), 77);
    }

    /// Independent oracle: Euler's pentagonal-free recurrence
    /// p(n) = sum over k of p(n - k) ... implemented as the simple
    /// coin-counting DP over part sizes.
    fn partition_count_oracle(n: usize) -> u64 {
        let mut dp = vec![0u64; n + 1];
        dp[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                dp[total] += dp[total - part];
            }
        }
        dp[n]
    }

    #[test]
    fn partition_counts_match_oracle_up_to_20() {
        for n in 1..=20u32 {
            assert_eq!(partitions(n).len() as u64, partition_count_oracle(n as usize));
        }
    }

    #[test]
    fn reverse_lex_order() {
        let ps = partitions(4);
        let parts: Vec<Vec<u32>> = ps.into_iter().map(|p| p.parts).collect();
        assert_eq!(
            parts,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    fn lengths(d: &StripDecomposition) -> Vec<(Orientation, u32)> {
        d.strips.iter().map(|s| (s.orientation, s.length)).collect()
    }

    #[test]
    fn strip_decomposition_53211() {
        let d = strip_decompose(&Partition::new(vec![5, 3, 2, 1, 1]).unwrap()).unwrap();
        assert_eq!(
            lengths(&d),
            vec![
                (Orientation::Vertical, 5),
                (Orientation::Horizontal, 4),
                (Orientation::Horizontal, 2),
                (Orientation::Horizontal, 1)
            ]
        );
    }

    #[test]
    fn strip_decomposition_43221() {
        let d = strip_decompose(&Partition::new(vec![4, 3, 2, 2, 1]).unwrap()).unwrap();
        assert_eq!(
            lengths(&d),
            vec![
                (Orientation::Vertical, 5),
                (Orientation::Vertical, 4),
                (Orientation::Horizontal, 2),
                (Orientation::Horizontal, 1)
            ]
        );
    }

    #[test]
    fn single_row_and_column() {
        let row = strip_decompose(&Partition::new(vec![12]).unwrap()).unwrap();
        assert_eq!(lengths(&row), vec![(Orientation::Horizontal, 12)]);
        let col = strip_decompose(&Partition::new(vec![1; 12]).unwrap()).unwrap();
        assert_eq!(lengths(&col), vec![(Orientation::Vertical, 12)]);
    }

    #[test]
    fn all_shapes_up_to_12_decompose_within_budget() {
        for n in 1..=12u32 {
            for shape in partitions(n) {
                let d = strip_decompose(&shape).unwrap();
                assert!(d.strips.len() <= 4, "shape {:?}", shape.parts);
                // disjoint cover
                let mut cells: Vec<(u32, u32)> =
                    d.strips.iter().flat_map(|s| s.cells.clone()).collect();
                cells.sort_unstable();
                let mut expected = shape.cells();
                expected.sort_unstable();
                assert_eq!(cells, expected, "shape {:?}", shape.parts);
                for s in &d.strips {
                    assert_eq!(s.cells.len() as u32, s.length);
                    match s.orientation {
                        Orientation::Vertical => {
                            assert!(s.cells.windows(2).all(|w| w[0].1 == w[1].1))
                        }
                        Orientation::Horizontal => {
                            assert!(s.cells.windows(2).all(|w| w[0].0 == w[1].0))
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_two_cells() {
        // single row on {1,2}: e = id + (12), k = 2
        let row = YoungTableau::canonical(Partition::new(vec![2]).unwrap());
        let (e, k) = idempotent(&row).unwrap();
        assert_eq!(k, BigInt::from(2));
        assert_eq!(e.len(), 2);
        assert!(e.values().all(|c| *c == BigInt::from(1)));
        // single column: e = id - (12), k = 2
        let col = YoungTableau::canonical(Partition::new(vec![1, 1]).unwrap());
        let (e, k) = idempotent(&col).unwrap();
        assert_eq!(k, BigInt::from(2));
        let signs: Vec<BigInt> = e.values().cloned().collect();
        assert!(signs.contains(&BigInt::from(1)) && signs.contains(&BigInt::from(-1)));
    }

    #[test]
    fn idempotent_single_cell() {
        let t = YoungTableau::canonical(Partition::new(vec![1]).unwrap());
        let (e, k) = idempotent(&t).unwrap();
        assert_eq!(k, BigInt::from(1));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn idempotent_scalars_divide_factorial_n_up_to_4() {
        // n = 5 is covered by the acceptance suite; keep the unit test quick
        for n in 1..=4u32 {
            let fact: BigInt = (1..=n as u64).product::<u64>().into();
            for shape in partitions(n) {
                for t in YoungTableau::standard(&shape) {
                    let (_, k) = idempotent(&t).unwrap();
                    assert!(!k.is_zero());
                    assert!((&fact % &k).is_zero(), "k={} shape={:?}", k, shape.parts);
                }
            }
        }
    }

    #[test]
    fn engel5_cases_contain_known_examples() {
        let cases = cases_for(ProofTarget::Engel5Main).unwrap();
        let has = |parities: &[Parity], mw: &[u32]| {
            cases
                .iter()
                .any(|c| c.generator_parities == parities && c.target_multiweight == mw)
        };
        use Parity::*;
        assert!(has(&[Odd, Even, Even, Even], &[5, 4, 2, 1]));
        assert!(has(&[Odd, Odd, Even, Even], &[5, 4, 2, 1]));
        for c in &cases {
            assert!(c.generator_parities.len() <= 4);
            assert_eq!(c.target_multiweight.iter().sum::<u32>(), 12);
            let odd = c
                .generator_parities
                .iter()
                .filter(|&&p| p == Parity::Odd)
                .count();
            let verts = c
                .grassmann_embedding
                .iter()
                .take(odd)
                .all(|s| s.iter().all(|m| m.monomial.indices().len() == 1));
            assert!(verts);
            // all e-indices distinct across the case
            let mut all: Vec<u32> = c
                .grassmann_embedding
                .iter()
                .flatten()
                .flat_map(|s| s.monomial.indices().to_vec())
                .collect();
            let total = all.len();
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), total);
        }
        // every diagram of 12 is covered exactly once
        let covered: usize = cases.iter().map(|c| c.source_diagrams.len()).sum();
        assert_eq!(covered, 77);
    }

    #[test]
    fn char11_step2_respects_row_bound() {
        let cases = cases_for(ProofTarget::Char11Step2).unwrap();
        for c in &cases {
            for d in &c.source_diagrams {
                assert!(d.parts[0] <= 3);
            }
            assert_eq!(c.target_multiweight.iter().sum::<u32>(), 10);
        }
    }

    #[test]
    fn group_target_sets_flag() {
        let cases = cases_for(ProofTarget::GroupEngel5).unwrap();
        assert!(cases.iter().all(|c| c.group_identity));
        let plain = cases_for(ProofTarget::Engel5Main).unwrap();
        assert_eq!(cases.len(), plain.len());
    }
}
