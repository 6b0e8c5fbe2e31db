//! Graph-side tools: distances, excesses, spectra and distance-regularity.

use std::collections::VecDeque;

use ndarray::Array2;
use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::GraphError;
use crate::linalg::symmetric_eigen;
use crate::poly::{predistance_polynomials, Spectrum};
use crate::scalar::Real;
use crate::scheme::{build_scheme, AssociationScheme, RelationMatrix};

/// A simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, adj })
    }

    /// The graph `(X, R_i)` of a scheme.
    pub fn from_relation(s: &AssociationScheme, i: usize) -> Self {
        let adj = (0..s.n()).map(|x| s.neighbors(i, x)).collect();
        Self { n: s.n(), adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let edges: Vec<_> = self.edges().into_iter().filter(|&e| e != (u.min(v), u.max(v))).collect();
        Self::from_edges(self.n, &edges).expect("subgraph of a simple graph")
    }

    /// The common degree, or the degree range as an error.
    pub fn regularity(&self) -> Result<usize, GraphError> {
        let min = self.adj.iter().map(Vec::len).min().unwrap_or(0);
        let max = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        if min == max {
            Ok(min)
        } else {
            Err(GraphError::NotRegular { min, max })
        }
    }

    fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            for (v, d) in self.bfs(s).into_iter().enumerate() {
                if d != u32::MAX {
                    seen[v] = true;
                }
            }
        }
        count
    }

    pub fn adjacency_matrix<T: Real>(&self) -> Array2<T> {
        let mut a = Array2::zeros((self.n, self.n));
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                a[[u, v]] = T::one();
            }
        }
        a
    }
}

/// All-pairs distances with per-vertex layer sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceData {
    pub n: usize,
    /// Row-major `∂(x, y)`.
    pub dist: Vec<u32>,
    pub diameter: usize,
    /// `layers[x][i] = |Γ_i(x)|` for `i = 0..=D`.
    pub layers: Vec<Vec<usize>>,
    /// `|Γ_D(x)|`.
    pub excess: Vec<usize>,
}

impl DistanceData {
    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y] as usize
    }
}

pub fn distance_data(g: &Graph) -> Result<DistanceData, GraphError> {
    let n = g.n;
    let rows: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
    if rows.iter().flatten().any(|&d| d == u32::MAX) {
        return Err(GraphError::Disconnected { components: g.component_count() });
    }
    let diameter = rows.iter().flatten().copied().max().unwrap_or(0) as usize;
    let layers: Vec<Vec<usize>> = rows
        .iter()
        .map(|row| {
            let mut sizes = vec![0; diameter + 1];
            for &d in row {
                sizes[d as usize] += 1;
            }
            sizes
        })
        .collect();
    let excess = layers.iter().map(|l| l[diameter]).collect();
    Ok(DistanceData { n, dist: rows.concat(), diameter, layers, excess })
}

/// Eigenvalues of the adjacency matrix grouped with their multiplicities.
pub fn graph_spectrum<T: Real>(g: &Graph) -> Result<Spectrum<T>, GraphError> {
    graph_spectrum_with(g, 1e-9)
}

/// As [`graph_spectrum`], treating eigenvalues within `group · max(1, k)`
/// as equal.
pub fn graph_spectrum_with<T: Real>(g: &Graph, group: f64) -> Result<Spectrum<T>, GraphError> {
    let k = g.regularity()?;
    let components = g.component_count();
    if components != 1 {
        return Err(GraphError::Disconnected { components });
    }
    let (values, _) = symmetric_eigen(&g.adjacency_matrix::<T>());
    let tol = T::lit(group) * T::from_count(k.max(1));
    let mut theta: Vec<T> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    let mut anchor = T::zero();
    let mut sum = T::zero();
    for v in values {
        if theta.is_empty() || (anchor - v).abs() > tol {
            if let (Some(t), Some(&m)) = (theta.last_mut(), mult.last()) {
                *t = sum / T::from_count(m);
            }
            theta.push(v);
            mult.push(1);
            anchor = v;
            sum = v;
        } else {
            *mult.last_mut().unwrap() += 1;
            sum = sum + v;
        }
    }
    if let (Some(t), Some(&m)) = (theta.last_mut(), mult.last()) {
        *t = sum / T::from_count(m);
    }

    // Σ m_i θ_i² = n k, and the Perron eigenvalue is k with multiplicity 1
    let n = g.n;
    let total = theta.iter().zip(&mult).fold(T::zero(), |acc, (t, &m)| acc + T::from_count(m) * *t * *t);
    let nk = T::from_count(n * k);
    if (total - nk).abs() > T::lit(1e-6) * nk.max(T::one()) {
        return Err(GraphError::InconsistentSpectrum(format!("Σ mθ² = {} but nk = {}", total.approx(), n * k)));
    }
    if (theta[0] - T::from_count(k)).abs() > tol || mult[0] != 1 {
        return Err(GraphError::InconsistentSpectrum("Perron eigenvalue is not simple".into()));
    }
    theta[0] = T::from_count(k);
    Ok(Spectrum::new(n, theta, mult)?)
}

/// Distances against spectral data, with the combinatorial verdict.
#[derive(Debug, Clone)]
pub struct SpectralExcessReport {
    pub spectrum: Spectrum<f64>,
    /// Number of distinct eigenvalues minus one.
    pub d: usize,
    pub diameter: usize,
    /// `p_d(θ_0)`.
    pub pd_at_theta0: f64,
    pub excess: Vec<usize>,
    pub arithmetic_mean: f64,
    pub harmonic_mean: f64,
    /// Decided by validating the distance partition as a scheme.
    pub distance_regular: bool,
    /// Why the distance partition is not a scheme, when it is not.
    pub obstruction: Option<String>,
}

/// The distance partition as a relation matrix (relation = path distance).
pub fn distance_partition(dd: &DistanceData) -> RelationMatrix {
    let rel = dd.dist.iter().map(|&d| d as crate::scheme::RelIndex).collect();
    RelationMatrix::new(dd.n, dd.diameter.max(1), rel).expect("distances bounded by the diameter")
}

fn distance_scheme(dd: &DistanceData) -> Result<AssociationScheme, String> {
    if dd.diameter == 0 {
        return Err("single vertex".into());
    }
    build_scheme(distance_partition(dd)).map_err(|e| e.to_string())
}

pub fn spectral_excess_report(g: &Graph) -> Result<SpectralExcessReport, GraphError> {
    g.regularity()?;
    let dd = distance_data(g)?;
    let spectrum = graph_spectrum::<f64>(g)?;
    let d = spectrum.d();
    let ps = predistance_polynomials(&spectrum)?;
    let pd_at_theta0 = *ps.value(d, 0);
    let count = dd.excess.len() as f64;
    let arithmetic_mean = dd.excess.iter().map(|&e| e as f64).sum::<f64>() / count;
    let harmonic_mean = count / dd.excess.iter().map(|&e| 1.0 / e as f64).sum::<f64>();
    let (distance_regular, obstruction) = match distance_scheme(&dd) {
        Ok(_) if dd.diameter == d => (true, None),
        Ok(_) => (false, Some(format!("diameter {} differs from d = {d}", dd.diameter))),
        Err(e) => (false, Some(e)),
    };
    Ok(SpectralExcessReport {
        spectrum,
        d,
        diameter: dd.diameter,
        pd_at_theta0,
        excess: dd.excess,
        arithmetic_mean,
        harmonic_mean,
        distance_regular,
        obstruction,
    })
}

/// The distance partition of a distance-regular graph as a scheme.
pub fn scheme_from_drg(g: &Graph) -> Result<AssociationScheme, GraphError> {
    let dd = distance_data(g)?;
    distance_scheme(&dd).map_err(GraphError::NotDistanceRegular)
}

/// Exact distance-regularity test: the distance partition must satisfy the
/// scheme axioms. Needs only connectivity.
pub fn is_distance_regular(g: &Graph) -> Result<bool, GraphError> {
    let dd = distance_data(g)?;
    Ok(distance_scheme(&dd).is_ok())
}

/// A random simple connected `k`-regular graph on `n` vertices. Stubs are
/// paired one at a time, each with a random stub that keeps the graph simple;
/// a dead end or a disconnected result restarts the pairing.
pub fn random_regular_graph(n: usize, k: usize, rng: &mut impl Rng) -> Result<Graph, GraphError> {
    const ATTEMPTS: usize = 10_000;
    if k >= n || (n * k) % 2 == 1 {
        return Err(GraphError::GenerationFailed { n, k, attempts: 0 });
    }
    'attempt: for _ in 0..ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
        let mut adjacent = vec![false; n * n];
        let mut edges = Vec::with_capacity(n * k / 2);
        while let Some(u) = stubs.pop() {
            let options: Vec<usize> =
                (0..stubs.len()).filter(|&i| stubs[i] != u && !adjacent[u * n + stubs[i]]).collect();
            let Some(&i) = options.choose(rng) else { continue 'attempt };
            let v = stubs.swap_remove(i);
            adjacent[u * n + v] = true;
            adjacent[v * n + u] = true;
            edges.push((u, v));
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.component_count() == 1 {
            return Ok(g);
        }
    }
    Err(GraphError::GenerationFailed { n, k, attempts: ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilySpec};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn petersen() -> Graph {
        Graph::from_relation(&generate(&FamilySpec::Petersen).unwrap(), 1)
    }

    fn complete(n: usize) -> Graph {
        Graph::from_relation(&generate(&FamilySpec::Complete { n }).unwrap(), 1)
    }

    fn assert_spectrum(sp: &Spectrum<f64>, theta: &[f64], mult: &[usize]) {
        assert_eq!(sp.multiplicities(), mult);
        for (a, b) in sp.theta().iter().zip(theta) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn edge_list_validation() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]).unwrap_err(), GraphError::SelfLoop(0));
        assert_eq!(Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap_err(), GraphError::DuplicateEdge(1, 0));
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]).unwrap_err(),
            GraphError::VertexOutOfRange { vertex: 2, n: 2 }
        );
    }

    #[test]
    fn distances_and_excess() {
        let dd = distance_data(&cycle(5)).unwrap();
        assert_eq!(dd.diameter, 2);
        assert_eq!(dd.excess, vec![2; 5]);

        let dd = distance_data(&petersen()).unwrap();
        assert_eq!(dd.diameter, 2);
        assert_eq!(dd.excess, vec![6; 10]);

        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let dd = distance_data(&p4).unwrap();
        assert_eq!(dd.diameter, 3);
        assert_eq!(dd.excess, vec![1, 0, 0, 1]);
        assert_eq!(dd.layers[1], vec![1, 2, 1, 0]);

        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(distance_data(&two).unwrap_err(), GraphError::Disconnected { components: 2 });
    }

    #[test]
    fn spectra() {
        assert_spectrum(&graph_spectrum(&complete(4)).unwrap(), &[3.0, -1.0], &[1, 3]);
        assert_spectrum(&graph_spectrum(&petersen()).unwrap(), &[3.0, 1.0, -2.0], &[1, 5, 4]);
        assert_spectrum(&graph_spectrum(&cycle(6)).unwrap(), &[2.0, 1.0, -1.0, -2.0], &[1, 2, 2, 1]);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(graph_spectrum::<f64>(&star).unwrap_err(), GraphError::NotRegular { min: 1, max: 3 });
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(graph_spectrum::<f64>(&two).unwrap_err(), GraphError::Disconnected { components: 2 });
    }

    #[test]
    fn excess_reports() {
        let r = spectral_excess_report(&petersen()).unwrap();
        assert_eq!((r.d, r.diameter), (2, 2));
        assert!((r.pd_at_theta0 - 6.0).abs() < 1e-10);
        assert_eq!(r.excess, vec![6; 10]);
        assert!(r.distance_regular);

        let r = spectral_excess_report(&complete(4)).unwrap();
        assert_eq!((r.d, r.diameter), (1, 1));
        assert!((r.pd_at_theta0 - 3.0).abs() < 1e-12);
        assert!(r.distance_regular);
    }

    #[test]
    fn petersen_minus_edge_is_not_regular() {
        let g = petersen().without_edge(0, petersen().neighbors(0)[0]);
        assert!(matches!(spectral_excess_report(&g), Err(GraphError::NotRegular { .. })));
        assert_eq!(is_distance_regular(&g), Ok(false));
        match scheme_from_drg(&g) {
            Err(GraphError::NotDistanceRegular(why)) => assert!(why.contains("not constant"), "{why}"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(is_distance_regular(&petersen()), Ok(true));
    }

    #[test]
    fn drg_round_trips() {
        let s = scheme_from_drg(&cycle(7)).unwrap();
        assert_eq!(s, generate(&FamilySpec::Cycle { n: 7 }).unwrap());
        let q3 = Graph::from_relation(&generate(&FamilySpec::Hamming { n: 3, q: 2 }).unwrap(), 1);
        let s = scheme_from_drg(&q3).unwrap();
        assert_eq!(s, generate(&FamilySpec::Hamming { n: 3, q: 2 }).unwrap());
        let s = scheme_from_drg(&petersen()).unwrap();
        assert_eq!(
            s.intersection_numbers(),
            generate(&FamilySpec::Petersen).unwrap().intersection_numbers()
        );
    }

    #[test]
    fn random_regular_graphs_are_simple_and_connected() {
        let mut rng = StdRng::seed_from_u64(7);
        for (n, k) in [(10, 3), (12, 4), (20, 5), (30, 6)] {
            let g = random_regular_graph(n, k, &mut rng).unwrap();
            assert_eq!(g.regularity().unwrap(), k);
            assert_eq!(g.component_count(), 1);
            let sp = graph_spectrum::<f64>(&g).unwrap();
            let sum: f64 = sp.theta().iter().zip(sp.multiplicities()).map(|(t, &m)| m as f64 * t * t).sum();
            assert!((sum - (n * k) as f64).abs() < 1e-8);
        }
        assert!(random_regular_graph(5, 3, &mut rng).is_err());
    }
}
