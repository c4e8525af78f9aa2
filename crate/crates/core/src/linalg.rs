//! Dense 4x4 complex eigensolvers.
//!
//! The concurrence needs the spectrum of the non-Hermitian product
//! `ρ ρ~`, so [`general_eigenvalues4`] implements the standard dense path:
//! unitary Householder reduction to upper Hessenberg form followed by
//! explicitly shifted QR iterations (Wilkinson shift, Givens rotations) with
//! deflation. For a well-scaled 4x4 this converges in a handful of sweeps
//! with backward error at machine level.
//!
//! [`hermitian_eigenvalues4`] is a cyclic complex Jacobi solver used for
//! positive-semidefiniteness checks of density matrices and as an independent
//! cross-check of the QR path on Hermitian inputs.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 4x4 complex matrix in row-major order.
pub type Matrix4<T> = [[Complex<T>; 4]; 4];

#[inline]
fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Frobenius norm.
pub fn frobenius_norm<T: Scalar>(m: &Matrix4<T>) -> T {
    m.iter()
        .flatten()
        .map(|c| c.norm_sqr())
        .sum::<T>()
        .sqrt()
}

/// Matrix product `a * b`.
pub fn mat_mul<T: Scalar>(a: &Matrix4<T>, b: &Matrix4<T>) -> Matrix4<T> {
    let mut out = [[czero::<T>(); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == czero() {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(m: &Matrix4<T>) -> Matrix4<T> {
    let mut out = [[czero::<T>(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

/// Unitary reduction to upper Hessenberg form (in place).
fn hessenberg<T: Scalar>(h: &mut Matrix4<T>) {
    for k in 0..2 {
        // Householder vector for column k, rows k+1..4.
        let mut v = [czero::<T>(); 4];
        let mut norm_sq = T::zero();
        for i in (k + 1)..4 {
            v[i] = h[i][k];
            norm_sq += v[i].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm <= T::epsilon() * T::lit(16.0) * frobenius_norm(h) {
            continue;
        }
        let x0 = v[k + 1];
        let phase = if x0.norm() > T::zero() {
            x0 / x0.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let alpha = -phase.scale(norm);
        v[k + 1] -= alpha;
        let v_norm_sq: T = v.iter().map(|c| c.norm_sqr()).sum();
        if v_norm_sq <= T::zero() {
            continue;
        }
        let inv = T::one() / v_norm_sq.sqrt();
        for vi in &mut v {
            *vi = vi.scale(inv);
        }

        // H = I - 2 v v^dagger; apply from the left and the right.
        for j in 0..4 {
            let mut s = czero::<T>();
            for i in (k + 1)..4 {
                s += v[i].conj() * h[i][j];
            }
            let s2 = s.scale(T::two());
            for i in (k + 1)..4 {
                h[i][j] -= v[i] * s2;
            }
        }
        for i in 0..4 {
            let mut s = czero::<T>();
            for j in (k + 1)..4 {
                s += h[i][j] * v[j];
            }
            let s2 = s.scale(T::two());
            for j in (k + 1)..4 {
                h[i][j] -= s2 * v[j].conj();
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in (k + 2)..4 {
            h[i][k] = czero();
        }
    }
}

/// Eigenvalues of a complex 2x2 `[[a, b], [c, d]]`.
fn eig2<T: Scalar>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let half = T::half();
    let mean = (a + d).scale(half);
    let delta = (a - d).scale(half);
    let disc = (delta * delta + b * c).sqrt();
    (mean + disc, mean - disc)
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 closer to `d`.
fn wilkinson_shift<T: Scalar>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm_sqr() <= (l2 - d).norm_sqr() {
        l1
    } else {
        l2
    }
}

/// Complex Givens rotation `(c, s)` (with real `c`) zeroing `g` against `f`:
/// `[-conj(s), c] . (f, g)^T = 0`.
fn givens<T: Scalar>(f: Complex<T>, g: Complex<T>) -> (T, Complex<T>) {
    let g_norm = g.norm();
    if g_norm == T::zero() {
        return (T::one(), czero());
    }
    let f_norm = f.norm();
    let denom = (f.norm_sqr() + g.norm_sqr()).sqrt();
    if f_norm == T::zero() {
        return (T::zero(), g.conj() / g_norm);
    }
    let c = f_norm / denom;
    let s = (f / f_norm) * g.conj() / denom;
    (c, s)
}

/// Eigenvalues of a general complex 4x4 matrix.
///
/// Errors only if the QR iteration fails to converge, which for these
/// well-scaled inputs indicates corrupted data (NaN entries and the like).
pub fn general_eigenvalues4<T: Scalar>(m: &Matrix4<T>) -> Result<[Complex<T>; 4]> {
    let mut h = *m;
    if h.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    hessenberg(&mut h);

    let scale = frobenius_norm(&h).max(T::min_positive_value());
    let negligible =
        |x: T, local: T| x <= T::epsilon() * (local + scale * T::lit(1e-2)) * T::lit(4.0);

    let mut eigenvalues = [czero::<T>(); 4];
    let mut hi = 3usize;
    let mut iterations = 0usize;
    let mut stale = 0usize;

    loop {
        // Kill negligible subdiagonals.
        for i in 1..=hi {
            let local = h[i - 1][i - 1].norm() + h[i][i].norm();
            if negligible(h[i][i - 1].norm(), local) {
                h[i][i - 1] = czero();
            }
        }

        // Deflate converged trailing eigenvalues.
        if hi == 0 || h[hi][hi - 1] == czero() {
            eigenvalues[hi] = h[hi][hi];
            if hi == 0 {
                break;
            }
            hi -= 1;
            stale = 0;
            continue;
        }

        // Start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 && h[lo][lo - 1] != czero() {
            lo -= 1;
        }

        if hi - lo == 1 {
            let (l1, l2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            eigenvalues[hi] = l1;
            eigenvalues[lo] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            stale = 0;
            continue;
        }

        iterations += 1;
        stale += 1;
        if iterations > 200 {
            return Err(Error::Numeric("QR iteration did not converge".into()));
        }

        let mut mu = wilkinson_shift(
            h[hi - 1][hi - 1],
            h[hi - 1][hi],
            h[hi][hi - 1],
            h[hi][hi],
        );
        if stale > 0 && stale.is_multiple_of(12) {
            // Exceptional shift to break rare symmetric stalls.
            mu += Complex::new(h[hi][hi - 1].norm(), T::zero());
        }

        // Explicit shifted QR step on the active block: H - mu I = Q R,
        // then H <- R Q + mu I.
        for i in lo..=hi {
            h[i][i] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = givens(h[i][i], h[i + 1][i]);
            // Apply from the left to rows i, i+1.
            for j in i..4 {
                let top = h[i][j];
                let bot = h[i + 1][j];
                h[i][j] = top.scale(c) + s * bot;
                h[i + 1][j] = bot.scale(c) - s.conj() * top;
            }
            h[i + 1][i] = czero();
            rotations.push((i, c, s));
        }
        for &(i, c, s) in &rotations {
            // Apply the adjoint rotation from the right to columns i, i+1.
            for row in h.iter_mut().take((i + 2).min(hi + 1)) {
                let left = row[i];
                let right = row[i + 1];
                row[i] = left.scale(c) + right * s.conj();
                row[i + 1] = right.scale(c) - left * s;
            }
        }
        for i in lo..=hi {
            h[i][i] += mu;
        }
    }

    Ok(eigenvalues)
}

/// Eigenvalues of a Hermitian 4x4 matrix by cyclic complex Jacobi rotations,
/// in descending order. Only the upper triangle of `m` is read.
pub fn hermitian_eigenvalues4<T: Scalar>(m: &Matrix4<T>) -> [T; 4] {
    let mut a = *m;
    // Symmetrise from the upper triangle; diagonal imaginary parts dropped.
    for i in 0..4 {
        a[i][i] = Complex::new(a[i][i].re, T::zero());
        for j in (i + 1)..4 {
            a[j][i] = a[i][j].conj();
        }
    }
    let scale = frobenius_norm(&a).max(T::min_positive_value());
    let tol = T::epsilon() * scale;

    for _ in 0..32 {
        let mut off = T::zero();
        for i in 0..4 {
            for j in (i + 1)..4 {
                off += a[i][j].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let b = a[p][q];
                let b_norm = b.norm();
                if b_norm <= tol * T::lit(1e-2) {
                    continue;
                }
                let phase = b / b_norm;
                let tau = (a[q][q].re - a[p][p].re) / (T::two() * b_norm);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = phase.scale(t * c);

                // Similarity A <- G^dagger A G with G = [[c, s], [-conj(s), c]]
                // on the (p, q) plane; this choice of t zeroes A[p][q].
                for j in 0..4 {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = apj.scale(c) - s * aqj;
                    a[q][j] = s.conj() * apj + aqj.scale(c);
                }
                for i in 0..4 {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = aip.scale(c) - s.conj() * aiq;
                    a[i][q] = s * aip + aiq.scale(c);
                }
            }
        }
    }

    let mut eigs = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}
