//! Small dense linear algebra over [`Real`] scalars.

use ndarray::{Array1, Array2};

use crate::scalar::Real;

/// Symmetric eigendecomposition by the cyclic Jacobi method.
///
/// Returns eigenvalues in decreasing order and the matching orthonormal
/// eigenvectors as columns.
pub fn symmetric_eigen<T: Real>(a: &Array2<T>) -> (Vec<T>, Array2<T>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v = Array2::<T>::eye(n);
    let two = T::one() + T::one();
    let scale = m.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();

    let mut previous = T::infinity();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + m[[p, q]] * m[[p, q]];
            }
        }
        let off = off.sqrt();
        let stalled = off >= previous * T::lit(0.5) && off <= T::epsilon().sqrt() * scale;
        if off <= T::epsilon() * scale || stalled {
            break;
        }
        previous = off;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[[p, q]];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
                // exact zero keeps the sweep from revisiting rounding noise
                m[[p, q]] = T::zero();
                m[[q, p]] = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[j, j]].partial_cmp(&m[[i, i]]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[[i, i]]).collect();
    let vectors = Array2::from_shape_fn((n, n), |(r, c)| v[[r, order[c]]]);
    (values, vectors)
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes.
pub fn solve<T: Real>(a: &Array2<T>, b: &Array2<T>) -> Option<Array2<T>> {
    let n = a.nrows();
    let mut a = a.clone();
    let mut b = b.clone();
    let scale = a.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[[i, col]].abs().partial_cmp(&a[[j, col]].abs()).unwrap())?;
        if a[[pivot, col]].abs() <= T::epsilon() * scale {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap([col, k], [pivot, k]);
            }
            for k in 0..b.ncols() {
                b.swap([col, k], [pivot, k]);
            }
        }
        for row in col + 1..n {
            let f = a[[row, col]] / a[[col, col]];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                a[[row, k]] = a[[row, k]] - f * a[[col, k]];
            }
            for k in 0..b.ncols() {
                b[[row, k]] = b[[row, k]] - f * b[[col, k]];
            }
        }
    }
    let mut x = Array2::<T>::zeros(b.raw_dim());
    for k in 0..b.ncols() {
        for row in (0..n).rev() {
            let mut acc = b[[row, k]];
            for c in row + 1..n {
                acc = acc - a[[row, c]] * x[[c, k]];
            }
            x[[row, k]] = acc / a[[row, row]];
        }
    }
    Some(x)
}

pub fn max_abs<T: Real>(m: &Array2<T>) -> T {
    m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Rayleigh quotient `wᵀ M w` for a unit vector `w`.
pub fn rayleigh<T: Real>(m: &Array2<T>, w: &Array1<T>) -> T {
    w.dot(&m.dot(w))
}
