//! Eigenmatrices, multiplicities, primitive idempotents and Krein parameters.
//!
//! The eigenvalues come from the `(d+1)`-dimensional intersection matrices
//! rather than the `n × n` adjacency matrices. `B_i` is similar to the
//! symmetric matrix `S_i = K^{1/2} B_i K^{-1/2}` (with `K = diag(k)`), whose
//! common unit eigenvectors `w` give the rows of `P` as Rayleigh quotients
//! `P_i(h) = wᵀ S_i w`.

use ndarray::{Array1, Array2};

use crate::error::SpectralError;
use crate::linalg::{max_abs, rayleigh, solve, symmetric_eigen};
use crate::poly::Spectrum;
use crate::scalar::Real;
use crate::scheme::AssociationScheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Eigenvalues of `B_i` closer than `eigen_group · max(1, k_i)` are one
    /// eigenvalue.
    pub eigen_group: f64,
    /// Allowed distance of each `m_j` from an integer.
    pub multiplicity: f64,
    /// Allowed residual `‖S_i w − P_i(h) w‖` of the common eigenvectors,
    /// relative to `max(1, k_i)`.
    pub eigenvector_residual: f64,
    /// Allowed residual of the Krein expansion `E_i ∘ E_j`, relative to `1/n`.
    pub krein_expansion: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { eigen_group: 1e-9, multiplicity: 1e-6, eigenvector_residual: 1e-7, krein_expansion: 1e-8 }
    }
}

/// First and second eigenmatrices with the derived spectrum of `A_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData<T> {
    n: usize,
    d: usize,
    /// `p[[j, i]] = P_i(j)`.
    p: Array2<T>,
    /// `q[[j, i]] = Q_i(j)`.
    q: Array2<T>,
    multiplicities: Vec<T>,
    rounded: Vec<usize>,
    valencies: Vec<u64>,
    q_cross_check: T,
    group_tol: T,
}

impl<T: Real> SpectralData<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `P_i(j)`: eigenvalue of `A_i` on `E_j`.
    pub fn p(&self, i: usize, j: usize) -> T {
        self.p[[j, i]]
    }

    /// `Q_i(j)`.
    pub fn q(&self, i: usize, j: usize) -> T {
        self.q[[j, i]]
    }

    /// Rows indexed by idempotent, columns by relation.
    pub fn p_matrix(&self) -> &Array2<T> {
        &self.p
    }

    pub fn q_matrix(&self) -> &Array2<T> {
        &self.q
    }

    /// `θ_j = P_1(j)`.
    pub fn theta(&self) -> Vec<T> {
        (0..=self.d).map(|j| self.p(1, j)).collect()
    }

    pub fn multiplicities(&self) -> &[T] {
        &self.multiplicities
    }

    pub fn rounded_multiplicities(&self) -> &[usize] {
        &self.rounded
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valencies
    }

    /// Largest `|Q_i(j) − m_i P_j(i)/k_j|` seen when cross-checking `Q`.
    pub fn q_cross_check(&self) -> T {
        self.q_cross_check
    }

    /// Tolerance at which two θ values count as equal.
    pub fn grouping_tolerance(&self) -> T {
        self.group_tol
    }

    /// `max |P Q − n I|`.
    pub fn pq_residual(&self) -> T {
        let n = T::from_count(self.n);
        max_abs(&(self.p.dot(&self.q) - Array2::eye(self.d + 1) * n))
    }

    /// The first pair `(i, j)`, `i < j`, with `θ_i = θ_j` within tolerance.
    pub fn repeated_theta(&self) -> Option<(usize, usize)> {
        let theta = self.theta();
        for i in 0..=self.d {
            for j in i + 1..=self.d {
                if (theta[i] - theta[j]).abs() <= self.group_tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The spectrum of `(X, R_1)` when its θ's are mutually distinct.
    pub fn spectrum(&self) -> Result<Spectrum<T>, crate::error::PolyError> {
        if let Some((i, j)) = self.repeated_theta() {
            return Err(crate::error::PolyError::DegenerateSpectrum { i, j });
        }
        Spectrum::new(self.n, self.theta(), self.rounded.clone())
    }
}

/// Krein parameters `q^k_{ij}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinTensor<T> {
    d: usize,
    /// Indexed `[k][i][j]`.
    q: Vec<T>,
    residual: T,
}

impl<T: Real> KreinTensor<T> {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let m = d + 1;
        let mut q = Vec::with_capacity(m * m * m);
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    q.push(f(i, j, k));
                }
            }
        }
        Self { d, q, residual: T::zero() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `q^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        let m = self.d + 1;
        self.q[(k * m + i) * m + j]
    }

    pub fn min(&self) -> T {
        self.q.iter().copied().fold(T::infinity(), T::min)
    }

    /// Largest entrywise residual of the idempotent expansion.
    pub fn expansion_residual(&self) -> T {
        self.residual
    }
}

/// Simultaneously diagonalizes the intersection matrices.
pub fn spectral_data<T: Real>(s: &AssociationScheme) -> Result<SpectralData<T>, SpectralError> {
    spectral_data_with(s, &SpectralConfig::default())
}

pub fn spectral_data_with<T: Real>(
    s: &AssociationScheme,
    cfg: &SpectralConfig,
) -> Result<SpectralData<T>, SpectralError> {
    let n = s.n();
    let d = s.d();
    let m = d + 1;
    let t = s.intersection_numbers();
    let k = t.valencies();
    let sqrt_k: Vec<T> = k.iter().map(|&v| T::from_count(v as usize).sqrt()).collect();
    let sym: Vec<Array2<T>> = (0..m)
        .map(|i| {
            Array2::from_shape_fn((m, m), |(a, b)| {
                T::from_count(t.get(i, b, a) as usize) * sqrt_k[a] / sqrt_k[b]
            })
        })
        .collect();

    // refine eigenspaces of S_1 by S_2, S_3, ... until all are lines
    let mut spaces: Vec<Array2<T>> = vec![Array2::eye(m)];
    for i in 1..m {
        if spaces.iter().all(|v| v.ncols() == 1) {
            break;
        }
        let tol = T::lit(cfg.eigen_group) * T::from_count(k[i].max(1) as usize);
        let mut next = Vec::with_capacity(m);
        for v in spaces {
            if v.ncols() == 1 {
                next.push(v);
                continue;
            }
            let restricted = v.t().dot(&sym[i]).dot(&v);
            let (vals, vecs) = symmetric_eigen(&restricted);
            let mut start = 0;
            for end in 1..=vals.len() {
                if end == vals.len() || (vals[end - 1] - vals[end]).abs() > tol {
                    let block = vecs.slice(ndarray::s![.., start..end]);
                    next.push(v.dot(&block));
                    start = end;
                }
            }
        }
        spaces = next;
    }
    if let Some(v) = spaces.iter().find(|v| v.ncols() > 1) {
        return Err(SpectralError::EigenSplitFailure { dimension: v.ncols(), residual: 0.0 });
    }

    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for v in &spaces {
        let w: Array1<T> = v.column(0).to_owned();
        let mut row = Vec::with_capacity(m);
        for (i, s_i) in sym.iter().enumerate() {
            let lambda = rayleigh(s_i, &w);
            let resid = s_i.dot(&w) - &w * lambda;
            let resid = resid.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
            let scale = T::from_count(k[i].max(1) as usize);
            if resid > T::lit(cfg.eigenvector_residual) * scale {
                return Err(SpectralError::EigenSplitFailure { dimension: 1, residual: resid.approx() });
            }
            row.push(lambda);
        }
        rows.push(row);
    }

    // m_j = n / Σ_i P_i(j)² / k_i
    let mult_of = |row: &[T]| {
        let s = row
            .iter()
            .zip(&k)
            .fold(T::zero(), |acc, (p, &ki)| acc + *p * *p / T::from_count(ki as usize));
        T::from_count(n) / s
    };

    // valency row first
    let perron = (0..m)
        .min_by(|&a, &b| {
            let dev = |r: &Vec<T>| {
                r.iter().zip(&k).fold(T::zero(), |acc, (p, &ki)| {
                    let ki = T::from_count(ki as usize);
                    acc.max((*p - ki).abs() / ki.max(T::one()))
                })
            };
            dev(&rows[a]).partial_cmp(&dev(&rows[b])).unwrap()
        })
        .expect("at least one row");
    let perron_row = rows.swap_remove(perron);
    let group_tol = T::lit(cfg.eigen_group) * T::from_count(k[1].max(1) as usize);
    rows.sort_by(|a, b| b[1].partial_cmp(&a[1]).unwrap());
    // within runs of tied θ: ascending multiplicity, then lexicographic row
    let mut start = 0;
    while start < rows.len() {
        let mut end = start + 1;
        while end < rows.len() && (rows[end - 1][1] - rows[end][1]).abs() <= group_tol {
            end += 1;
        }
        rows[start..end].sort_by(|a, b| {
            mult_of(a)
                .partial_cmp(&mult_of(b))
                .unwrap()
                .then_with(|| a.partial_cmp(b).unwrap())
        });
        start = end;
    }
    rows.insert(0, perron_row);

    let p = Array2::from_shape_fn((m, m), |(j, i)| rows[j][i]);
    let multiplicities: Vec<T> = rows.iter().map(|r| mult_of(r)).collect();
    let mut rounded = Vec::with_capacity(m);
    for (j, mj) in multiplicities.iter().enumerate() {
        let r = mj.round();
        if (*mj - r).abs() > T::lit(cfg.multiplicity) || r < T::one() {
            return Err(SpectralError::NonIntegralMultiplicity { index: j, value: mj.approx() });
        }
        rounded.push(r.to_usize().expect("positive integer"));
    }
    let sum: usize = rounded.iter().sum();
    if sum != n {
        return Err(SpectralError::MultiplicitySum { sum, n });
    }

    let nt = T::from_count(n);
    let q = solve(&p, &(Array2::eye(m) * nt)).ok_or(SpectralError::SingularEigenmatrix)?;
    let mut q_cross_check = T::zero();
    for j in 0..m {
        for i in 0..m {
            let alt = multiplicities[i] * p[[i, j]] / T::from_count(k[j] as usize);
            q_cross_check = q_cross_check.max((q[[j, i]] - alt).abs());
        }
    }

    Ok(SpectralData { n, d, p, q, multiplicities, rounded, valencies: k, q_cross_check, group_tol })
}

/// `E_i = (1/n) Σ_j Q_i(j) A_j` as dense `n × n` matrices.
pub fn primitive_idempotents<T: Real>(s: &AssociationScheme, sd: &SpectralData<T>) -> Vec<Array2<T>> {
    let n = s.n();
    let nt = T::from_count(n);
    (0..=sd.d)
        .map(|i| Array2::from_shape_fn((n, n), |(x, y)| sd.q(i, s.relation(x, y)) / nt))
        .collect()
}

/// Expands each `E_i ∘ E_j` in the idempotent basis.
///
/// Coefficients are read off with the trace inner product
/// `⟨E_i ∘ E_j, E_k⟩ = q^k_{ij} m_k / n`, then the full expansion is checked
/// entrywise.
pub fn krein_parameters<T: Real>(
    sd: &SpectralData<T>,
    idempotents: &[Array2<T>],
) -> Result<KreinTensor<T>, SpectralError> {
    krein_parameters_with(sd, idempotents, &SpectralConfig::default())
}

pub fn krein_parameters_with<T: Real>(
    sd: &SpectralData<T>,
    idempotents: &[Array2<T>],
    cfg: &SpectralConfig,
) -> Result<KreinTensor<T>, SpectralError> {
    let m = sd.d + 1;
    let nt = T::from_count(sd.n);
    let ranks: Vec<T> = idempotents.iter().map(|e| e.diag().sum()).collect();
    let mut q = vec![T::zero(); m * m * m];
    let mut worst = T::zero();
    for i in 0..m {
        for j in i..m {
            let hadamard = &idempotents[i] * &idempotents[j];
            let coeffs: Vec<T> = (0..m)
                .map(|k| nt * (&hadamard * &idempotents[k]).sum() / ranks[k])
                .collect();
            let mut rebuilt = Array2::<T>::zeros(hadamard.raw_dim());
            for (k, c) in coeffs.iter().enumerate() {
                rebuilt.scaled_add(*c / nt, &idempotents[k]);
            }
            let residual = max_abs(&(rebuilt - &hadamard));
            if residual * nt > T::lit(cfg.krein_expansion) {
                return Err(SpectralError::ExpansionResidual { i, j, residual: residual.approx() });
            }
            worst = worst.max(residual);
            for (k, c) in coeffs.into_iter().enumerate() {
                q[(k * m + i) * m + j] = c;
                q[(k * m + j) * m + i] = c;
            }
        }
    }
    Ok(KreinTensor { d: sd.d, q, residual: worst })
}
