//! Symmetric association schemes and their intersection numbers.
//!
//! A scheme is stored as its relation matrix: entry `(x, y)` holds the index
//! of the relation containing the pair. The 0/1 adjacency matrices are views
//! derived from it on demand. Intersection numbers are counted over the
//! integers and validated against every pair of points.

use ndarray::Array2;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::SchemeError;

/// Index of a relation `R_i`.
pub type RelIndex = u16;

/// How thoroughly [`build_scheme_with`] checks that intersection numbers are constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    /// Every pair `(x, y)` is checked against its class representative.
    #[default]
    Full,
    /// Only one representative per class is counted. Unsound on invalid
    /// input: a non-scheme may be accepted with meaningless parameters.
    Fast,
}

/// An `n × n` array of relation indices in `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    n: usize,
    d: usize,
    rel: Vec<RelIndex>,
}

impl RelationMatrix {
    /// Wraps a row-major relation array, checking its length and index range.
    pub fn new(n: usize, d: usize, rel: Vec<RelIndex>) -> Result<Self, SchemeError> {
        if n == 0 {
            return Err(SchemeError::Empty);
        }
        if d == 0 {
            return Err(SchemeError::NoClasses);
        }
        if rel.len() != n * n {
            return Err(SchemeError::WrongLength { expected: n * n, found: rel.len() });
        }
        if let Some(pos) = rel.iter().position(|&r| r as usize > d) {
            return Err(SchemeError::IndexOutOfRange {
                x: pos / n,
                y: pos % n,
                value: rel[pos] as usize,
                d,
            });
        }
        Ok(Self { n, d, rel })
    }

    pub fn from_fn(
        n: usize,
        d: usize,
        mut f: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, SchemeError> {
        let mut rel = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let r = f(x, y);
                if r > d {
                    return Err(SchemeError::IndexOutOfRange { x, y, value: r, d });
                }
                rel.push(r as RelIndex);
            }
        }
        Self::new(n, d, rel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[RelIndex] {
        &self.rel[x * self.n..(x + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[RelIndex] {
        &self.rel
    }
}

/// Intersection numbers `p^k_{ij}` of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    d: usize,
    /// Indexed `[k][i][j]`, flattened.
    p: Vec<u64>,
}

impl IntersectionTensor {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize) -> u64) -> Self {
        let m = d + 1;
        let mut p = vec![0; m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    p[(k * m + i) * m + j] = f(i, j, k);
                }
            }
        }
        Self { d, p }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `p^k_{ij}`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let m = self.d + 1;
        self.p[(k * m + i) * m + j]
    }

    /// Valency `k_i = p^0_{ii}`.
    pub fn valency(&self, i: usize) -> u64 {
        self.get(i, i, 0)
    }

    pub fn valencies(&self) -> Vec<u64> {
        (0..=self.d).map(|i| self.valency(i)).collect()
    }

    /// The intersection matrix `B_i` with entry `[k][j] = p^k_{ij}`: the
    /// action of `A_i` on the basis `A_0..A_d` by left multiplication.
    pub fn matrix(&self, i: usize) -> Array2<u64> {
        Array2::from_shape_fn((self.d + 1, self.d + 1), |(k, j)| self.get(i, j, k))
    }

    /// Checks the standard identities `p^k_{ij} = p^k_{ji}`,
    /// `Σ_k p^k_{ij} k_k = k_i k_j`, and `p^0_{ij} = δ_{ij} k_i`.
    pub fn satisfies_identities(&self) -> bool {
        let m = self.d + 1;
        let k = self.valencies();
        for i in 0..m {
            for j in 0..m {
                if self.get(i, j, 0) != if i == j { k[i] } else { 0 } {
                    return false;
                }
                let mut total = 0;
                for l in 0..m {
                    if self.get(i, j, l) != self.get(j, i, l) {
                        return false;
                    }
                    total += self.get(i, j, l) * k[l];
                }
                if total != k[i] * k[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// A validated symmetric association scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    relations: RelationMatrix,
    tensor: IntersectionTensor,
    /// One pair `(x, y)` per relation, the first in row-major order.
    representatives: Vec<(usize, usize)>,
}

impl AssociationScheme {
    pub fn n(&self) -> usize {
        self.relations.n
    }

    pub fn d(&self) -> usize {
        self.relations.d
    }

    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.relations.get(x, y)
    }

    pub fn relations(&self) -> &RelationMatrix {
        &self.relations
    }

    pub fn intersection_numbers(&self) -> &IntersectionTensor {
        &self.tensor
    }

    pub fn valencies(&self) -> Vec<u64> {
        self.tensor.valencies()
    }

    pub fn representative(&self, k: usize) -> (usize, usize) {
        self.representatives[k]
    }

    /// Adjacency matrix `A_i` with entries in any numeric type.
    pub fn adjacency<T: Clone + Zero + One>(&self, i: usize) -> Array2<T> {
        let n = self.n();
        Array2::from_shape_fn((n, n), |(x, y)| {
            if self.relations.get(x, y) == i {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Neighbors of `x` in the graph `(X, R_i)`.
    pub fn neighbors(&self, i: usize, x: usize) -> Vec<usize> {
        self.relations
            .row(x)
            .iter()
            .enumerate()
            .filter(|(_, &r)| r as usize == i)
            .map(|(y, _)| y)
            .collect()
    }
}

/// Validates all axioms and computes the intersection numbers.
pub fn build_scheme(rm: RelationMatrix) -> Result<AssociationScheme, SchemeError> {
    build_scheme_with(rm, Validation::Full)
}

pub fn build_scheme_with(
    rm: RelationMatrix,
    validation: Validation,
) -> Result<AssociationScheme, SchemeError> {
    let n = rm.n;
    let d = rm.d;
    for x in 0..n {
        let v = rm.get(x, x);
        if v != 0 {
            return Err(SchemeError::DiagonalNotZero { x, value: v });
        }
    }
    let mut representatives: Vec<Option<(usize, usize)>> = vec![None; d + 1];
    for x in 0..n {
        for y in 0..n {
            let r = rm.get(x, y);
            if r != rm.get(y, x) {
                return Err(SchemeError::NotSymmetric { x, y });
            }
            if r == 0 && x != y {
                return Err(SchemeError::OffDiagonalZero { x, y });
            }
            if representatives[r].is_none() {
                representatives[r] = Some((x, y));
            }
        }
    }
    let representatives = representatives
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or(SchemeError::MissingRelation(i)))
        .collect::<Result<Vec<_>, _>>()?;

    let m = d + 1;
    let reference: Vec<Vec<u64>> = representatives
        .iter()
        .map(|&(x, y)| {
            let mut table = vec![0; m * m];
            count_pair(&rm, x, y, &mut table);
            table
        })
        .collect();

    if validation == Validation::Full {
        let violation = (0..n).into_par_iter().find_map_first(|x| {
            let mut table = vec![0; m * m];
            for y in 0..n {
                let k = rm.get(x, y);
                table.fill(0);
                count_pair(&rm, x, y, &mut table);
                if let Some(pos) = (0..m * m).find(|&p| table[p] != reference[k][p]) {
                    return Some(SchemeError::NotConstant {
                        i: pos / m,
                        j: pos % m,
                        k,
                        first: representatives[k],
                        first_count: reference[k][pos],
                        second: (x, y),
                        second_count: table[pos],
                    });
                }
            }
            None
        });
        if let Some(err) = violation {
            return Err(err);
        }
    }

    let tensor = IntersectionTensor::from_fn(d, |i, j, k| reference[k][i * m + j]);
    Ok(AssociationScheme { relations: rm, tensor, representatives })
}

/// Counts, for every `(i, j)`, the points `z` with `(x,z) ∈ R_i`, `(z,y) ∈ R_j`.
fn count_pair(rm: &RelationMatrix, x: usize, y: usize, table: &mut [u64]) {
    let m = rm.d + 1;
    let n = rm.n;
    let row_x = rm.row(x);
    for z in 0..n {
        // rel(z, y) = rel(y, z) by symmetry; read along row y for locality
        let i = row_x[z] as usize;
        let j = rm.rel[y * n + z] as usize;
        table[i * m + j] += 1;
    }
}

/// The intersection tensor of a validated scheme.
pub fn intersection_numbers(s: &AssociationScheme) -> IntersectionTensor {
    s.tensor.clone()
}

/// Relabels relation `i` as `perm[i]`. `perm` has length `d + 1` and must fix 0.
pub fn reorder_relations(
    s: &AssociationScheme,
    perm: &[usize],
) -> Result<AssociationScheme, SchemeError> {
    let d = s.d();
    if perm.len() != d + 1 {
        return Err(SchemeError::NotAPermutation { d });
    }
    if perm[0] != 0 {
        return Err(SchemeError::PermMovesZero);
    }
    let mut seen = vec![false; d + 1];
    for &p in perm {
        if p > d || seen[p] {
            return Err(SchemeError::NotAPermutation { d });
        }
        seen[p] = true;
    }
    let rel = s.relations.rel.iter().map(|&r| perm[r as usize] as RelIndex).collect();
    let relations = RelationMatrix { n: s.n(), d, rel };
    let mut inverse = vec![0; d + 1];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new] = old;
    }
    let tensor = IntersectionTensor::from_fn(d, |i, j, k| {
        s.tensor.get(inverse[i], inverse[j], inverse[k])
    });
    // representatives must stay first-in-row-major for the new labels
    let mut representatives = vec![(0, 0); d + 1];
    for (old, &new) in perm.iter().enumerate() {
        representatives[new] = s.representatives[old];
    }
    Ok(AssociationScheme { relations, tensor, representatives })
}
