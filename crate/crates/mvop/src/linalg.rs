//! Small dense complex square matrices.

use crate::scalar::{cx, Real, C};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Row-major `n x n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat<T: Real> {
    n: usize,
    data: Vec<C<T>>,
}

impl<T: Real> fmt::Debug for CMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re.to_f64(), z.im.to_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> CMat<T> {
    pub fn zeros(n: usize) -> Self {
        CMat { n, data: vec![C::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from real rows; panics if not square.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "matrix must be square");
            cx(rows[i][j], T::zero())
        })
    }

    pub fn diag(d: &[C<T>]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = cx(v, T::zero());
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C<T>> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C<T>]) {
        for i in 0..self.n {
            self[(i, j)] = v[i];
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_re(&self, s: T) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Entrywise real part, as a complex matrix.
    pub fn re_part(&self) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|z| cx(z.re, T::zero())).collect() }
    }

    /// Entrywise imaginary part, as a complex matrix with zero imaginary part.
    pub fn im_part(&self) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|z| cx(z.im, T::zero())).collect() }
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_imag(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }

    pub fn trace(&self) -> C<T> {
        (0..self.n).fold(C::zero(), |s, i| s + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        (0..self.n).map(|i| (0..self.n).fold(C::zero(), |s, k| s + self[(i, k)] * v[k])).collect()
    }

    /// `‖A − A*‖_F / max(1, ‖A‖_F)`.
    pub fn hermitian_defect(&self) -> T {
        (self - &self.adjoint()).norm_fro() / T::one().max(self.norm_fro())
    }

    /// `‖A A* − I‖_F`.
    pub fn unitary_defect(&self) -> T {
        (&(self * &self.adjoint()) - &Self::identity(self.n)).norm_fro()
    }

    pub fn lu(&self) -> Option<Lu<T>> {
        Lu::new(self)
    }

    pub fn det(&self) -> C<T> {
        match self.lu() {
            Some(lu) => lu.det(),
            None => C::zero(),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let lu = self.lu()?;
        let n = self.n;
        let mut inv = Self::zeros(n);
        for j in 0..n {
            let mut e = vec![C::zero(); n];
            e[j] = C::one();
            inv.set_col(j, &lu.solve(&e));
        }
        Some(inv)
    }

    /// `self · a⁻¹`, via a factorization of `aᵀ`.
    pub fn solve_right(&self, a: &Self) -> Option<Self> {
        let lu = a.transpose().lu()?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row: Vec<C<T>> = (0..n).map(|j| self[(i, j)]).collect();
            let x = lu.solve(&row);
            for j in 0..n {
                out[(i, j)] = x[j];
            }
        }
        Some(out)
    }

    pub fn svd(&self) -> Svd<T> {
        Svd::new(self)
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        CMat { n: self.n, data: self.data.iter().map(|&z| f(z)).collect() }
    }
}

impl<T: Real> Index<(usize, usize)> for CMat<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<'a, T: Real> Add<&'a CMat<T>> for &'a CMat<T> {
    type Output = CMat<T>;
    fn add(self, o: &CMat<T>) -> CMat<T> {
        assert_eq!(self.n, o.n);
        CMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a, T: Real> Sub<&'a CMat<T>> for &'a CMat<T> {
    type Output = CMat<T>;
    fn sub(self, o: &CMat<T>) -> CMat<T> {
        assert_eq!(self.n, o.n);
        CMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl<'a, T: Real> Mul<&'a CMat<T>> for &'a CMat<T> {
    type Output = CMat<T>;
    fn mul(self, o: &CMat<T>) -> CMat<T> {
        let n = self.n;
        assert_eq!(n, o.n);
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for CMat<T> {
    type Output = CMat<T>;
    fn add(self, o: CMat<T>) -> CMat<T> {
        &self + &o
    }
}

impl<T: Real> Sub for CMat<T> {
    type Output = CMat<T>;
    fn sub(self, o: CMat<T>) -> CMat<T> {
        &self - &o
    }
}

impl<T: Real> Mul for CMat<T> {
    type Output = CMat<T>;
    fn mul(self, o: CMat<T>) -> CMat<T> {
        &self * &o
    }
}

impl<T: Real> Neg for CMat<T> {
    type Output = CMat<T>;
    fn neg(self) -> CMat<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> AddAssign<&CMat<T>> for CMat<T> {
    fn add_assign(&mut self, o: &CMat<T>) {
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a += *b;
        }
    }
}

impl<T: Real> SubAssign<&CMat<T>> for CMat<T> {
    fn sub_assign(&mut self, o: &CMat<T>) {
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a -= *b;
        }
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
pub struct Lu<T: Real> {
    lu: CMat<T>,
    perm: Vec<usize>,
    sign: T,
}

impl<T: Real> Lu<T> {
    fn new(a: &CMat<T>) -> Option<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Some(Lu { lu, perm, sign })
    }

    pub fn det(&self) -> C<T> {
        let mut d = cx(self.sign, T::zero());
        for i in 0..self.lu.n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.lu.n;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Singular value decomposition `A = U diag(s) V*`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub u: CMat<T>,
    pub s: Vec<T>,
    pub v: CMat<T>,
}

impl<T: Real> Svd<T> {
    /// One-sided (Hestenes) Jacobi.
    fn new(a: &CMat<T>) -> Self {
        let n = a.n;
        let mut w = a.clone();
        let mut v = CMat::identity(n);
        let eps = T::epsilon();
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = C::<T>::zero();
                    for i in 0..n {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        alpha += wp.norm_sqr();
                        beta += wq.norm_sqr();
                        gamma += wp.conj() * wq;
                    }
                    let g = gamma.norm();
                    if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let ph = gamma / g;
                    let phc = ph.conj();
                    let zeta = (beta - alpha) / (g + g);
                    let sgn = if zeta >= T::zero() { T::one() } else { -T::one() };
                    let t = sgn / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    for m in [&mut w, &mut v] {
                        for i in 0..n {
                            let xp = m[(i, p)];
                            let xq = m[(i, q)] * phc;
                            m[(i, p)] = xp * c - xq * s;
                            m[(i, q)] = xp * s + xq * c;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let norms: Vec<T> = (0..n).map(|j| (0..n).map(|i| w[(i, j)].norm_sqr()).sum::<T>().sqrt()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
        let mut u = CMat::zeros(n);
        let mut vs = CMat::zeros(n);
        let mut s = Vec::with_capacity(n);
        for (k, &j) in order.iter().enumerate() {
            let sj = norms[j];
            s.push(sj);
            for i in 0..n {
                vs[(i, k)] = v[(i, j)];
                u[(i, k)] = if sj > T::zero() { w[(i, j)] / sj } else { C::zero() };
            }
        }
        Svd { u, s, v: vs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> CMat<f64> {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMat::from_fn(n, |_, _| cx(next(), next()))
    }

    #[test]
    fn inverse_roundtrip() {
        for n in 1..6 {
            let a = sample(n, n as u64);
            let inv = a.inverse().unwrap();
            assert!((&(&a * &inv) - &CMat::identity(n)).norm_fro() < 1e-12);
        }
    }

    #[test]
    fn det_of_triangular_is_diagonal_product() {
        let mut a = CMat::<f64>::identity(3);
        a[(0, 0)] = cx(2.0, 0.0);
        a[(1, 0)] = cx(5.0, 1.0);
        a[(2, 2)] = cx(0.0, 3.0);
        let d = a.det();
        assert!((d - cx(0.0, 6.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = CMat::<f64>::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(a.inverse().is_none() || a.det().norm() < 1e-14);
    }

    #[test]
    fn solve_right_matches_inverse() {
        let a = sample(4, 11);
        let b = sample(4, 12);
        let x = b.solve_right(&a).unwrap();
        assert!((&(&x * &a) - &b).norm_fro() < 1e-12);
    }

    #[test]
    fn svd_reconstructs() {
        for n in 1..7 {
            let a = sample(n, 100 + n as u64);
            let svd = a.svd();
            let us = CMat::from_fn(n, |i, j| svd.u[(i, j)] * svd.s[j]);
            let back = &us * &svd.v.adjoint();
            assert!((&back - &a).norm_fro() < 1e-13, "n={n}");
            assert!(svd.v.unitary_defect() < 1e-13);
            assert!(svd.u.unitary_defect() < 1e-13);
            assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_null_vector_of_rank_deficient() {
        let a = sample(4, 7);
        let mut b = a.clone();
        let c0 = a.col(0);
        let c1 = a.col(1);
        let combo: Vec<_> = c0.iter().zip(&c1).map(|(x, y)| *x * cx(0.3, -0.2) + *y * cx(1.5, 0.0)).collect();
        b.set_col(3, &combo);
        let svd = b.svd();
        let nv = svd.v.col(3);
        let r: f64 = b.mul_vec(&nv).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(r < 1e-14, "residual {r}");
        assert!(svd.s[3] < 1e-14);
    }

    #[test]
    fn f32_instantiation() {
        let a = CMat::<f32>::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let inv = a.inverse().unwrap();
        assert!((&(&a * &inv) - &CMat::identity(2)).norm_fro() < 1e-5);
        let s = a.svd().s;
        assert!((s[0] * s[1] - 5.0).abs() < 1e-4);
    }
}
