//! Predistance polynomials and the spectral products they are compared with.
//!
//! Everything here is generic over [`Scalar`], so the same code evaluates
//! identities in floating point or exactly over the rationals.

use std::fmt;

use crate::error::PolyError;
use crate::scalar::Scalar;

/// Distinct eigenvalues `θ_0 > θ_1 > … > θ_d` with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    n: usize,
    theta: Vec<T>,
    multiplicities: Vec<usize>,
}

impl<T: Scalar> Spectrum<T> {
    /// Checks that `θ` is strictly decreasing, `m_0 = 1`, every `m_i > 0`,
    /// and `Σ m_i = n`.
    pub fn new(n: usize, theta: Vec<T>, multiplicities: Vec<usize>) -> Result<Self, PolyError> {
        if theta.is_empty() || theta.len() != multiplicities.len() {
            return Err(PolyError::EmptySpectrum);
        }
        for i in 1..theta.len() {
            if theta[i] == theta[i - 1] {
                return Err(PolyError::DegenerateSpectrum { i: i - 1, j: i });
            }
            if theta[i] > theta[i - 1] {
                return Err(PolyError::Unordered(i));
            }
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(PolyError::NonPositiveMultiplicity(i));
        }
        if multiplicities[0] != 1 {
            return Err(PolyError::PerronMultiplicity(multiplicities[0]));
        }
        let sum: usize = multiplicities.iter().sum();
        if sum != n {
            return Err(PolyError::MultiplicitySum { sum, n });
        }
        Ok(Self { n, theta, multiplicities })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct eigenvalues minus one.
    pub fn d(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Re-expresses the spectrum in another scalar type, e.g. exactly as
    /// rationals.
    pub fn cast<U: Scalar>(&self) -> Spectrum<U> {
        Spectrum {
            n: self.n,
            theta: self.theta.iter().map(|t| U::lit(t.approx())).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }

    /// Weighted sum `(1/n) Σ m_i a_i b_i` over value vectors at the θ's.
    fn weighted_dot(&self, a: &[T], b: &[T]) -> T {
        let mut acc = T::zero();
        for ((m, x), y) in self.multiplicities.iter().zip(a).zip(b) {
            acc = acc + T::from_count(*m) * x.clone() * y.clone();
        }
        acc / T::from_count(self.n)
    }
}

/// Real polynomial in the monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, t: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `t · self`.
    pub fn shift(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `self - c · other`.
    pub fn sub_scaled(&self, c: &T, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                match other.coeffs.get(i) {
                    Some(b) => a - c.clone() * b.clone(),
                    None => a,
                }
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{i}")?,
            }
        }
        Ok(())
    }
}

/// The predistance polynomials `p_0..p_d` of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PredistanceSystem<T> {
    polys: Vec<Polynomial<T>>,
    /// `values[i][h] = p_i(θ_h)`.
    values: Vec<Vec<T>>,
    norms: Vec<T>,
}

impl<T: Scalar> PredistanceSystem<T> {
    pub fn d(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, i: usize) -> &Polynomial<T> {
        &self.polys[i]
    }

    pub fn polys(&self) -> &[Polynomial<T>] {
        &self.polys
    }

    /// `p_i(θ_h)`, accumulated alongside the coefficients rather than by
    /// evaluating them.
    pub fn value(&self, i: usize, h: usize) -> &T {
        &self.values[i][h]
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// `⟨p_i, p_i⟩`, equal to `p_i(θ_0)`.
    pub fn norm(&self, i: usize) -> &T {
        &self.norms[i]
    }
}

/// Breakdown threshold for Gram–Schmidt, relative to `‖t·q_{i-1}‖²`.
pub const BREAKDOWN: f64 = 1e-12;

/// `⟨p, q⟩ = (1/n) Σ_i m_i p(θ_i) q(θ_i)`.
pub fn inner_product<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>, sp: &Spectrum<T>) -> T {
    let a: Vec<T> = sp.theta.iter().map(|t| p.eval(t)).collect();
    let b: Vec<T> = sp.theta.iter().map(|t| q.eval(t)).collect();
    sp.weighted_dot(&a, &b)
}

/// Builds the predistance polynomials by Gram–Schmidt.
///
/// The monic orthogonal `q_i` are obtained from `t·q_{i-1}`, which spans the
/// same flag of subspaces as `1, t, …, t^d` but keeps the floating-point
/// case well conditioned. `p_i = q_i(θ_0)/⟨q_i,q_i⟩ · q_i`.
pub fn predistance_polynomials<T: Scalar>(sp: &Spectrum<T>) -> Result<PredistanceSystem<T>, PolyError> {
    let d = sp.d();
    let mut monic: Vec<Polynomial<T>> = vec![Polynomial::constant(T::one())];
    let mut vals: Vec<Vec<T>> = vec![vec![T::one(); d + 1]];
    let mut sq: Vec<T> = vec![T::one()];

    for i in 1..=d {
        let mut poly = monic[i - 1].shift();
        let mut v: Vec<T> = sp.theta.iter().zip(&vals[i - 1]).map(|(t, x)| t.clone() * x.clone()).collect();
        let reference = sp.weighted_dot(&v, &v);

        // exact arithmetic: t·q_{i-1} is already orthogonal to q_0..q_{i-3}
        let passes = if T::EXACT { 1 } else { 2 };
        let start = if T::EXACT { i.saturating_sub(2) } else { 0 };
        for _ in 0..passes {
            let coeffs: Vec<T> =
                (start..i).map(|j| sp.weighted_dot(&v, &vals[j]) / sq[j].clone()).collect();
            for (c, j) in coeffs.iter().zip(start..i) {
                poly = poly.sub_scaled(c, &monic[j]);
                for (x, y) in v.iter_mut().zip(&vals[j]) {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }

        let norm = sp.weighted_dot(&v, &v);
        if norm <= T::lit(BREAKDOWN) * reference.clone() || norm.is_zero() {
            let relative_norm = if reference.is_zero() { 0.0 } else { (norm / reference).approx() };
            return Err(PolyError::NumericalBreakdown { degree: i, relative_norm });
        }
        monic.push(poly);
        vals.push(v);
        sq.push(norm);
    }

    let mut polys = Vec::with_capacity(d + 1);
    let mut values = Vec::with_capacity(d + 1);
    let mut norms = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let c = vals[i][0].clone() / sq[i].clone();
        polys.push(monic[i].scale(&c));
        values.push(vals[i].iter().map(|x| x.clone() * c.clone()).collect::<Vec<_>>());
        norms.push(c.clone() * c * sq[i].clone());
    }
    Ok(PredistanceSystem { polys, values, norms })
}

/// `κ_i = Π_{j=1..d, j≠i} (θ_0 − θ_j)/(θ_i − θ_j)`.
pub fn kappa<T: Scalar>(sp: &Spectrum<T>, i: usize) -> Result<T, PolyError> {
    let d = sp.d();
    if i == 0 || i > d {
        return Err(PolyError::IndexOutOfRange { index: i, d });
    }
    let th = &sp.theta;
    let mut acc = T::one();
    for j in (1..=d).filter(|&j| j != i) {
        acc = acc * (th[0].clone() - th[j].clone()) / (th[i].clone() - th[j].clone());
    }
    Ok(acc)
}

/// `Σ_i β_i^h Π_{k≠i} (x − β_k)/(β_i − β_k)`, which equals `x^h` whenever
/// `h` is below the number of nodes.
pub fn lagrange_power_identity<T: Scalar>(betas: &[T], x: &T, h: usize) -> Result<T, PolyError> {
    let d = betas.len();
    if h >= d {
        return Err(PolyError::PowerOutOfRange { h, d });
    }
    for i in 0..d {
        for j in i + 1..d {
            if betas[i] == betas[j] {
                return Err(PolyError::RepeatedBeta { i, j });
            }
        }
    }
    let mut sum = T::zero();
    for (i, bi) in betas.iter().enumerate() {
        let mut term = num_traits::pow(bi.clone(), h);
        for (k, bk) in betas.iter().enumerate() {
            if k != i {
                term = term * (x.clone() - bk.clone()) / (bi.clone() - bk.clone());
            }
        }
        sum = sum + term;
    }
    Ok(sum)
}

/// `κ_i + m_i p_d(θ_i) / p_d(θ_0)`, which vanishes for any spectrum with
/// `m_0 = 1`.
pub fn graph_property_residual<T: Scalar>(
    sp: &Spectrum<T>,
    ps: &PredistanceSystem<T>,
    i: usize,
) -> Result<T, PolyError> {
    let d = sp.d();
    let k = kappa(sp, i)?;
    let m = T::from_count(sp.multiplicities[i]);
    Ok(k + m * ps.value(d, i).clone() / ps.value(d, 0).clone())
}

/// `h_i(t) = Π_{j=1..d, j≠i} (t − θ_j)`.
#[cfg(test)]
pub(crate) fn lagrange_numerator<T: Scalar>(sp: &Spectrum<T>, i: usize) -> Polynomial<T> {
    (1..=sp.d()).filter(|&j| j != i).fold(Polynomial::constant(T::one()), |acc, j| {
        acc.mul(&Polynomial::new(vec![-sp.theta[j].clone(), T::one()]))
    })
}

/// `Z(t) = Π_i (t − θ_i)`.
#[cfg(test)]
pub(crate) fn minimal_polynomial<T: Scalar>(sp: &Spectrum<T>) -> Polynomial<T> {
    sp.theta.iter().fold(Polynomial::constant(T::one()), |acc, t| {
        acc.mul(&Polynomial::new(vec![-t.clone(), T::one()]))
    })
}
