//! Deciding the P-polynomial property.
//!
//! Four independent routes answer the same question for the ordering that
//! starts with `A_1`:
//!
//! * **tridiagonal**: the intersection matrix `(p^k_{1j})` can be reordered
//!   into an irreducible tridiagonal matrix (exact, integer).
//! * **nstar**: relations first appearing in `A_1^h` are singletons for every
//!   `h ≤ d` (exact walk counts).
//! * **excess**: some column `l` of `Q` satisfies `κ_i = −Q_i(l)` for all `i`.
//! * **predistance**: some column `l` of `P` equals `p_d(θ_h)`.
//!
//! The last two need mutually distinct eigenvalues. When the preconditions
//! hold all routes must agree, and `l` must be the last relation of the
//! recovered ordering; [`detect`] fails loudly otherwise.

use std::fmt;

use itertools::Itertools;
use ndarray::Array2;

use crate::error::DetectError;
use crate::poly::{kappa, predistance_polynomials, PredistanceSystem};
use crate::scalar::Real;
use crate::scheme::{AssociationScheme, IntersectionTensor};
use crate::spectral::{
    krein_parameters_with, primitive_idempotents, spectral_data_with, KreinTensor, SpectralConfig,
    SpectralData,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    PreconditionFailed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::PreconditionFailed => "precondition-failed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Tridiagonal,
    NStar,
    Excess,
    Predistance,
    QPolynomial,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Tridiagonal => "tridiagonal",
            Route::NStar => "nstar",
            Route::Excess => "excess",
            Route::Predistance => "predistance",
            Route::QPolynomial => "q_poly",
        })
    }
}

/// Outcome of one route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteVerdict {
    pub route: Route,
    pub verdict: Verdict,
    /// `ξ_0..ξ_d` (relations, or idempotents for the dual route).
    pub ordering: Option<Vec<usize>>,
    /// The index `l` with `A_l` playing the role of the last distance relation.
    pub l: Option<usize>,
    pub max_residual: f64,
    pub witness: Option<String>,
}

impl RouteVerdict {
    fn new(route: Route, verdict: Verdict) -> Self {
        Self { route, verdict, ordering: None, l: None, max_residual: 0.0, witness: None }
    }

    fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// The sets `N*_0..N*_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NStarChain {
    pub sets: Vec<Vec<usize>>,
    /// `coefficients[h][j]`: coefficient of `A_j` in `A_1^h`.
    pub coefficients: Vec<Vec<u128>>,
}

impl NStarChain {
    pub fn d(&self) -> usize {
        self.sets.len() - 1
    }

    /// Whether `N*_0 ∪ … ∪ N*_{d-1}` misses some relation.
    pub fn misses_a_relation_before_d(&self) -> bool {
        let d = self.d();
        let covered: usize = self.sets[..d].iter().map(Vec::len).sum();
        covered != d + 1
    }

    /// `ξ` with `N*_i = {ξ_i}`, when every set is a singleton.
    pub fn ordering(&self) -> Option<Vec<usize>> {
        self.sets.iter().map(|s| if s.len() == 1 { Some(s[0]) } else { None }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectConfig {
    /// Matching tolerance of the excess and predistance routes, relative to
    /// `max(1, |target|)`.
    pub route_tol: f64,
    /// Krein parameters at most `krein_tol · max(1, max |q|)` count as zero.
    pub krein_tol: f64,
    /// Run the dual (Krein) route.
    pub dual: bool,
    pub spectral: SpectralConfig,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self { route_tol: 1e-6, krein_tol: 1e-8, dual: true, spectral: SpectralConfig::default() }
    }
}

/// Everything [`detect`] learned about a scheme.
#[derive(Debug, Clone)]
pub struct DetectionReport<T> {
    pub n: usize,
    pub d: usize,
    pub valencies: Vec<u64>,
    pub spectral: SpectralData<T>,
    pub krein: Option<KreinTensor<T>>,
    pub tridiagonal: RouteVerdict,
    pub nstar: RouteVerdict,
    pub excess: RouteVerdict,
    pub predistance: RouteVerdict,
    pub q_polynomial: Option<RouteVerdict>,
    pub kappa: Option<Vec<T>>,
    pub predistance_system: Option<PredistanceSystem<T>>,
    /// `max |p_i(θ_h) − P_{ξ_i}(h)| / max(1, |P_{ξ_i}(h)|)` over all `i, h`,
    /// when the verdict is yes.
    pub coincidence_residual: Option<f64>,
    /// Agreed answer of the routes whose preconditions held.
    pub consensus: Verdict,
}

impl<T> DetectionReport<T> {
    /// Like [`Self::consensus`], but a negative answer reached while the
    /// spectral routes could not run is reported as
    /// [`Verdict::PreconditionFailed`].
    pub fn outcome(&self) -> Verdict {
        let spectral_blocked = self.excess.verdict == Verdict::PreconditionFailed
            && self.predistance.verdict == Verdict::PreconditionFailed;
        if self.consensus == Verdict::No && spectral_blocked {
            Verdict::PreconditionFailed
        } else {
            self.consensus
        }
    }

    /// The recovered P-polynomial ordering, if any.
    pub fn ordering(&self) -> Option<&[usize]> {
        self.tridiagonal.ordering.as_deref()
    }

    pub fn l(&self) -> Option<usize> {
        self.excess.l.or(self.predistance.l)
    }

    pub fn routes(&self) -> Vec<&RouteVerdict> {
        let mut r = vec![&self.tridiagonal, &self.nstar, &self.excess, &self.predistance];
        r.extend(self.q_polynomial.as_ref());
        r
    }
}

/// Greedy chain `ξ_{i+1}` = the unused `j` with `p^j_{1,ξ_i} > 0`, then an
/// irreducible-tridiagonal check of the reordered intersection matrix.
pub fn tridiagonal_route(t: &IntersectionTensor) -> RouteVerdict {
    let d = t.d();
    let entry = |a: usize, b: usize| t.get(1, b, a) as f64;
    match tridiagonal_chain(d, 1, |a, b| entry(a, b) > 0.0, |a, b| entry(a, b) != 0.0) {
        Ok(order) => RouteVerdict { ordering: Some(order), ..RouteVerdict::new(Route::Tridiagonal, Verdict::Yes) },
        Err(w) => RouteVerdict::new(Route::Tridiagonal, Verdict::No).with_witness(w),
    }
}

/// `positive(a, b)` / `nonzero(a, b)` test the entry `[a][b]` of the matrix
/// `(c^a_{g,b})` for generator `g`.
fn tridiagonal_chain(
    d: usize,
    generator: usize,
    positive: impl Fn(usize, usize) -> bool,
    nonzero: impl Fn(usize, usize) -> bool,
) -> Result<Vec<usize>, String> {
    let mut order = vec![0, generator];
    let mut used = vec![false; d + 1];
    used[0] = true;
    used[generator] = true;
    while order.len() <= d {
        let last = *order.last().unwrap();
        let candidates: Vec<usize> = (0..=d).filter(|&j| !used[j] && positive(j, last)).collect();
        if candidates.len() != 1 {
            return Err(format!(
                "step {}: {} candidates {:?} after ordering ({})",
                order.len(),
                candidates.len(),
                candidates,
                order.iter().join(",")
            ));
        }
        used[candidates[0]] = true;
        order.push(candidates[0]);
    }
    for a in 0..=d {
        for b in 0..=d {
            let (ra, rb) = (order[a], order[b]);
            if a.abs_diff(b) > 1 && nonzero(ra, rb) {
                return Err(format!("off-band entry at ({a},{b}) of the reordered matrix"));
            }
            if a.abs_diff(b) == 1 && !positive(ra, rb) {
                return Err(format!("zero band entry at ({a},{b}) of the reordered matrix"));
            }
        }
    }
    Ok(order)
}

/// Reads the coefficients of `A_1^h` in the basis `A_j` from exact walk
/// counts starting at one point.
pub fn nstar_sets<T: Real>(s: &AssociationScheme, sd: &SpectralData<T>) -> Result<NStarChain, DetectError> {
    let theta = sd.theta();
    let tol = sd.grouping_tolerance();
    if let Some(j) = (1..theta.len()).find(|&j| (theta[0] - theta[j]).abs() <= tol) {
        return Err(DetectError::PerronNotSeparated(j));
    }
    let n = s.n();
    let d = s.d();
    let x = 0;
    let targets: Vec<usize> = (0..=d)
        .map(|j| (0..n).find(|&y| s.relation(x, y) == j).expect("every relation meets every point"))
        .collect();
    let adjacency: Vec<Vec<usize>> = (0..n).map(|y| s.neighbors(1, y)).collect();

    let mut walks = vec![0u128; n];
    walks[x] = 1;
    let mut coefficients = Vec::with_capacity(d + 1);
    let mut sets = Vec::with_capacity(d + 1);
    let mut seen = vec![false; d + 1];
    for h in 0..=d {
        if h > 0 {
            let mut next = vec![0u128; n];
            for (y, nbrs) in adjacency.iter().enumerate() {
                let mut acc: u128 = 0;
                for &z in nbrs {
                    acc = acc.checked_add(walks[z]).ok_or(DetectError::WalkCountOverflow(h))?;
                }
                next[y] = acc;
            }
            walks = next;
        }
        let alpha: Vec<u128> = targets.iter().map(|&y| walks[y]).collect();
        let fresh: Vec<usize> = (0..=d).filter(|&j| alpha[j] != 0 && !seen[j]).collect();
        for &j in &fresh {
            seen[j] = true;
        }
        sets.push(fresh);
        coefficients.push(alpha);
    }
    Ok(NStarChain { sets, coefficients })
}

pub fn nstar_route<T: Real>(s: &AssociationScheme, sd: &SpectralData<T>) -> Result<RouteVerdict, DetectError> {
    match nstar_sets(s, sd) {
        Err(DetectError::PerronNotSeparated(j)) => Ok(RouteVerdict::new(Route::NStar, Verdict::PreconditionFailed)
            .with_witness(format!("θ_0 coincides with θ_{j}"))),
        Err(e) => Err(e),
        Ok(chain) => {
            let sets = chain.sets.iter().map(|s| format!("{{{}}}", s.iter().join(","))).join(" ");
            if chain.misses_a_relation_before_d() {
                let ordering = chain.ordering();
                debug_assert!(ordering.is_some(), "a P-polynomial chain has singleton N*_h");
                Ok(RouteVerdict { ordering, ..RouteVerdict::new(Route::NStar, Verdict::Yes) }.with_witness(sets))
            } else {
                Ok(RouteVerdict::new(Route::NStar, Verdict::No).with_witness(sets))
            }
        }
    }
}

/// Precondition shared by the spectral routes.
fn simple_spectrum<T: Real>(sd: &SpectralData<T>, route: Route) -> Option<RouteVerdict> {
    sd.repeated_theta().map(|(i, j)| {
        RouteVerdict::new(route, Verdict::PreconditionFailed).with_witness(format!("θ_{i} = θ_{j}"))
    })
}

fn pick_l(route: Route, residuals: &[(usize, f64)], tol: f64) -> Result<RouteVerdict, DetectError> {
    let passing: Vec<usize> = residuals.iter().filter(|(_, r)| *r <= tol).map(|(l, _)| *l).collect();
    let best = residuals.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    match passing.as_slice() {
        [] => Ok(RouteVerdict { max_residual: best, ..RouteVerdict::new(route, Verdict::No) }
            .with_witness(format!("smallest residual {best:e} over all l"))),
        [l] => Ok(RouteVerdict {
            l: Some(*l),
            max_residual: residuals[*l].1,
            ..RouteVerdict::new(route, Verdict::Yes)
        }),
        _ => Err(DetectError::MultipleL { route, candidates: passing }),
    }
}

/// Scans `l` for `κ_i + Q_i(l) = 0` (`i = 1..d`).
pub fn excess_route<T: Real>(
    sd: &SpectralData<T>,
    t: &IntersectionTensor,
    tol: f64,
) -> Result<RouteVerdict, DetectError> {
    if let Some(v) = simple_spectrum(sd, Route::Excess) {
        return Ok(v);
    }
    let sp = sd.spectrum()?;
    let d = sd.d();
    let kappas: Vec<T> = (1..=d).map(|i| kappa(&sp, i)).collect::<Result<_, _>>()?;
    let k = t.valencies();
    let residuals: Vec<(usize, f64)> = (0..=d)
        .map(|l| {
            let worst = (1..=d).fold(0.0f64, |acc, i| {
                let target = kappas[i - 1];
                let q = sd.q(i, l);
                let alt = sd.multiplicities()[i] * sd.p(l, i) / T::from_count(k[l] as usize);
                let scale = target.abs().max(T::one());
                let mismatch = ((target + q).abs() / scale).approx();
                let cross = ((q - alt).abs() / scale).approx();
                acc.max(mismatch).max(cross)
            });
            (l, worst)
        })
        .collect();
    pick_l(Route::Excess, &residuals, tol)
}

/// Scans `l` for `p_d(θ_h) = P_l(h)` (`h = 0..d`).
pub fn predistance_route<T: Real>(
    sd: &SpectralData<T>,
    ps: &PredistanceSystem<T>,
    tol: f64,
) -> Result<RouteVerdict, DetectError> {
    if let Some(v) = simple_spectrum(sd, Route::Predistance) {
        return Ok(v);
    }
    let d = sd.d();
    let residuals: Vec<(usize, f64)> = (0..=d)
        .map(|l| {
            let worst = (0..=d).fold(0.0f64, |acc, h| {
                let target = sd.p(l, h);
                let scale = target.abs().max(T::one());
                acc.max(((*ps.value(d, h) - target).abs() / scale).approx())
            });
            (l, worst)
        })
        .collect();
    pick_l(Route::Predistance, &residuals, tol)
}

/// `‖M*_i − (κ_i E_0 + E_i)‖_max` with
/// `M*_i = Π_{j=1..d, j≠i} (A_1 − θ_j I)/(θ_i − θ_j)`.
pub fn mstar_decomposition_residual<T: Real>(
    s: &AssociationScheme,
    sd: &SpectralData<T>,
    i: usize,
) -> Result<T, DetectError> {
    if let Some((a, b)) = sd.repeated_theta() {
        return Err(DetectError::SpectrumNotSimple { i: a, j: b });
    }
    let sp = sd.spectrum()?;
    let k = kappa(&sp, i)?;
    let theta = sp.theta();
    let n = s.n();
    let a1: Array2<T> = s.adjacency(1);
    let eye = Array2::<T>::eye(n);
    let mut m = eye.clone();
    for j in (1..=sd.d()).filter(|&j| j != i) {
        let factor = (&a1 - &(&eye * theta[j])) / (theta[i] - theta[j]);
        m = m.dot(&factor);
    }
    let e = primitive_idempotents(s, sd);
    let expected = &e[0] * k + &e[i];
    Ok(crate::linalg::max_abs(&(m - expected)))
}

/// Krein-side chain: for each candidate generator `E_g`, build the chain on
/// `q^j_{g,ξ_i}` and test irreducible tridiagonality.
pub fn q_polynomial_route<T: Real>(kt: &KreinTensor<T>, tol: f64) -> RouteVerdict {
    let d = kt.d();
    let scale = (0..=d)
        .flat_map(|i| (0..=d).flat_map(move |j| (0..=d).map(move |k| (i, j, k))))
        .fold(T::one(), |acc, (i, j, k)| acc.max(kt.get(i, j, k).abs()));
    let cutoff = T::lit(tol) * scale;
    let mut failures = Vec::new();
    for g in 1..=d {
        let positive = |a: usize, b: usize| kt.get(g, b, a) > cutoff;
        let nonzero = |a: usize, b: usize| kt.get(g, b, a).abs() > cutoff;
        match tridiagonal_chain(d, g, positive, nonzero) {
            Ok(order) => {
                return RouteVerdict { ordering: Some(order), ..RouteVerdict::new(Route::QPolynomial, Verdict::Yes) }
                    .with_witness(format!("generator E_{g}"));
            }
            Err(w) => failures.push(format!("E_{g}: {w}")),
        }
    }
    RouteVerdict::new(Route::QPolynomial, Verdict::No).with_witness(failures.join("; "))
}

pub fn detect<T: Real>(s: &AssociationScheme) -> Result<DetectionReport<T>, DetectError> {
    detect_with(s, &DetectConfig::default())
}

/// Runs every route and checks that they agree.
pub fn detect_with<T: Real>(s: &AssociationScheme, cfg: &DetectConfig) -> Result<DetectionReport<T>, DetectError> {
    let t = s.intersection_numbers();
    let sd: SpectralData<T> = spectral_data_with(s, &cfg.spectral)?;
    let d = s.d();

    let tridiagonal = tridiagonal_route(t);
    let nstar = nstar_route(s, &sd)?;

    let (excess, predistance, kappas, system) = if let Ok(sp) = sd.spectrum() {
        let ps = predistance_polynomials(&sp)?;
        let kappas = (1..=d).map(|i| kappa(&sp, i)).collect::<Result<Vec<_>, _>>()?;
        let excess = excess_route(&sd, t, cfg.route_tol)?;
        let predistance = predistance_route(&sd, &ps, cfg.route_tol)?;
        (excess, predistance, Some(kappas), Some(ps))
    } else {
        (
            simple_spectrum(&sd, Route::Excess).expect("spectrum rejected"),
            simple_spectrum(&sd, Route::Predistance).expect("spectrum rejected"),
            None,
            None,
        )
    };

    let (krein, q_polynomial) = if cfg.dual {
        let e = primitive_idempotents(s, &sd);
        let kt = krein_parameters_with(&sd, &e, &cfg.spectral)?;
        let route = q_polynomial_route(&kt, cfg.krein_tol);
        (Some(kt), Some(route))
    } else {
        (None, None)
    };

    let routes = [&tridiagonal, &nstar, &excess, &predistance];
    let decided: Vec<&RouteVerdict> =
        routes.iter().copied().filter(|r| r.verdict != Verdict::PreconditionFailed).collect();
    let describe = || routes.iter().map(|r| format!("{}={} (residual {:e})", r.route, r.verdict, r.max_residual)).join(", ");
    if decided.iter().any(|r| r.verdict != tridiagonal.verdict) {
        return Err(DetectError::RouteDisagreement(describe()));
    }
    let consensus = tridiagonal.verdict;

    let mut coincidence_residual = None;
    if consensus == Verdict::Yes {
        let order = tridiagonal.ordering.as_ref().expect("yes carries an ordering");
        if nstar.verdict == Verdict::Yes && nstar.ordering.as_ref() != Some(order) {
            return Err(DetectError::RouteDisagreement(format!(
                "tridiagonal ordering {:?} != nstar ordering {:?}",
                order, nstar.ordering
            )));
        }
        for r in [&excess, &predistance] {
            if r.verdict == Verdict::Yes && r.l != Some(order[d]) {
                return Err(DetectError::RouteDisagreement(format!(
                    "{} found l = {:?} but ξ_d = {}",
                    r.route, r.l, order[d]
                )));
            }
        }
        if let Some(ps) = &system {
            let mut worst = 0.0f64;
            for (i, &xi) in order.iter().enumerate() {
                for h in 0..=d {
                    worst = worst.max(crate::scalar::scaled_error(ps.value(i, h), &sd.p(xi, h)));
                }
            }
            coincidence_residual = Some(worst);
        }
    }

    Ok(DetectionReport {
        n: s.n(),
        d,
        valencies: s.valencies(),
        spectral: sd,
        krein,
        tridiagonal,
        nstar,
        excess,
        predistance,
        q_polynomial,
        kappa: kappas,
        predistance_system: system,
        coincidence_residual,
        consensus,
    })
}
