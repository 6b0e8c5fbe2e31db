//! Generators for well-known association schemes.

use std::fmt;

use itertools::Itertools;

use crate::detect::Verdict;
use crate::error::FamilyError;
use crate::scheme::{build_scheme, reorder_relations, AssociationScheme, RelationMatrix};

/// Largest point count any generator will produce.
pub const MAX_POINTS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Words of length `n` over `q` symbols; relation = Hamming distance.
    Hamming { n: usize, q: usize },
    /// `k`-subsets of a `v`-set; relation = `k − |intersection|`.
    Johnson { v: usize, k: usize },
    /// Path distance on the cycle `C_n`.
    Cycle { n: usize },
    /// The one-class scheme on `n` points.
    Complete { n: usize },
    /// Relations: same point / same clique / different clique.
    DisjointCliques { cliques: usize, size: usize },
    /// `Z_13` with classes `{±1,±5}`, `{±2,±3}`, `{±4,±6}`: the cosets of the
    /// cubes in `GF(13)*`.
    Cyclotomic13,
    /// `johnson(5,2)` with `A_1` the disjointness relation.
    Petersen,
    /// `hamming(3,2)` with relation `i` relabeled `perm[i]`.
    HypercubeReordered { perm: Vec<usize> },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Hamming { n, q } => write!(f, "hamming({n},{q})"),
            Self::Johnson { v, k } => write!(f, "johnson({v},{k})"),
            Self::Cycle { n } => write!(f, "cycle({n})"),
            Self::Complete { n } => write!(f, "complete({n})"),
            Self::DisjointCliques { cliques, size } => write!(f, "disjoint_cliques({cliques},{size})"),
            Self::Cyclotomic13 => write!(f, "cyclotomic13"),
            Self::Petersen => write!(f, "petersen"),
            Self::HypercubeReordered { perm } => {
                write!(f, "hypercube_reordered({})", perm.iter().join(","))
            }
        }
    }
}

fn out_of_range(family: &'static str, reason: impl Into<String>) -> FamilyError {
    FamilyError::ParamOutOfRange { family, reason: reason.into() }
}

fn check_size(family: &'static str, n: Option<usize>) -> Result<usize, FamilyError> {
    match n {
        Some(n) if n <= MAX_POINTS => Ok(n),
        _ => Err(out_of_range(family, format!("more than {MAX_POINTS} points"))),
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

pub fn generate(spec: &FamilySpec) -> Result<AssociationScheme, FamilyError> {
    match spec {
        FamilySpec::Hamming { n, q } => hamming(*n, *q),
        FamilySpec::Johnson { v, k } => johnson(*v, *k),
        FamilySpec::Cycle { n } => cycle(*n),
        FamilySpec::Complete { n } => complete(*n),
        FamilySpec::DisjointCliques { cliques, size } => disjoint_cliques(*cliques, *size),
        FamilySpec::Cyclotomic13 => cyclotomic13(),
        FamilySpec::Petersen => Ok(reorder_relations(&johnson(5, 2)?, &[0, 2, 1])?),
        FamilySpec::HypercubeReordered { perm } => Ok(reorder_relations(&hamming(3, 2)?, perm)?),
    }
}

fn hamming(n: usize, q: usize) -> Result<AssociationScheme, FamilyError> {
    if n == 0 || q < 2 {
        return Err(out_of_range("hamming", "need n >= 1 and q >= 2"));
    }
    let size = check_size("hamming", u32::try_from(n).ok().and_then(|e| q.checked_pow(e)))?;
    // most significant digit first, so point order is lexicographic
    let words: Vec<Vec<usize>> = (0..size)
        .map(|mut x| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = x % q;
                x /= q;
            }
            w
        })
        .collect();
    let rm = RelationMatrix::from_fn(size, n, |x, y| {
        words[x].iter().zip(&words[y]).filter(|(a, b)| a != b).count()
    })?;
    Ok(build_scheme(rm)?)
}

fn johnson(v: usize, k: usize) -> Result<AssociationScheme, FamilyError> {
    if k == 0 || k >= v {
        return Err(out_of_range("johnson", "need 1 <= k < v"));
    }
    let size = check_size("johnson", binomial(v, k))?;
    let subsets: Vec<Vec<usize>> = (0..v).combinations(k).collect();
    let d = k.min(v - k);
    let rm = RelationMatrix::from_fn(size, d, |x, y| {
        let common = subsets[x].iter().filter(|e| subsets[y].binary_search(e).is_ok()).count();
        k - common
    })?;
    Ok(build_scheme(rm)?)
}

fn cycle(n: usize) -> Result<AssociationScheme, FamilyError> {
    if n < 3 {
        return Err(out_of_range("cycle", "need n >= 3"));
    }
    check_size("cycle", Some(n))?;
    let rm = RelationMatrix::from_fn(n, n / 2, |x, y| {
        let diff = x.abs_diff(y);
        diff.min(n - diff)
    })?;
    Ok(build_scheme(rm)?)
}

fn complete(n: usize) -> Result<AssociationScheme, FamilyError> {
    if n < 2 {
        return Err(out_of_range("complete", "need n >= 2"));
    }
    check_size("complete", Some(n))?;
    let rm = RelationMatrix::from_fn(n, 1, |x, y| usize::from(x != y))?;
    Ok(build_scheme(rm)?)
}

fn disjoint_cliques(cliques: usize, size: usize) -> Result<AssociationScheme, FamilyError> {
    if cliques < 2 || size < 2 {
        return Err(out_of_range("disjoint_cliques", "need at least 2 cliques of size >= 2"));
    }
    let n = check_size("disjoint_cliques", cliques.checked_mul(size))?;
    let rm = RelationMatrix::from_fn(n, 2, |x, y| match (x == y, x / size == y / size) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => 2,
    })?;
    Ok(build_scheme(rm)?)
}

fn cyclotomic13() -> Result<AssociationScheme, FamilyError> {
    const CLASS: [usize; 13] = [0, 1, 2, 2, 3, 1, 3, 3, 1, 3, 2, 2, 1];
    let rm = RelationMatrix::from_fn(13, 3, |x, y| CLASS[(x + 13 - y) % 13])?;
    Ok(build_scheme(rm)?)
}

/// One entry of the acceptance corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: FamilySpec,
    pub scheme: AssociationScheme,
    /// Expected detection outcome.
    pub expected: Verdict,
}

/// The fixed corpus of known P-polynomial, non-P-polynomial, and
/// precondition-failing schemes.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut specs: Vec<(FamilySpec, Verdict)> = Vec::new();
    for n in 5..=12 {
        specs.push((FamilySpec::Cycle { n }, Verdict::Yes));
    }
    for n in 1..=4 {
        for q in 2..=3 {
            specs.push((FamilySpec::Hamming { n, q }, Verdict::Yes));
        }
    }
    for v in 4..=8 {
        specs.push((FamilySpec::Johnson { v, k: 2 }, Verdict::Yes));
    }
    specs.push((FamilySpec::Johnson { v: 7, k: 3 }, Verdict::Yes));
    for n in 2..=6 {
        specs.push((FamilySpec::Complete { n }, Verdict::Yes));
    }
    specs.push((FamilySpec::Petersen, Verdict::Yes));
    specs.push((FamilySpec::Cyclotomic13, Verdict::No));
    specs.push((FamilySpec::DisjointCliques { cliques: 3, size: 3 }, Verdict::PreconditionFailed));
    specs.push((FamilySpec::HypercubeReordered { perm: vec![0, 3, 2, 1] }, Verdict::PreconditionFailed));

    specs
        .into_iter()
        .map(|(spec, expected)| CorpusEntry {
            name: spec.to_string(),
            scheme: generate(&spec).expect("corpus parameters are valid"),
            spec,
            expected,
        })
        .collect()
}
