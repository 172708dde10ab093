//! Laurent polynomials with square complex matrix coefficients.

use crate::linalg::CMat;
use crate::scalar::{Real, C};
use num_traits::{One, Zero};

/// `Σ_{k=kmin}^{kmax} C_k z^k`, stored densely over the exponent window.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<T: Real> {
    r: usize,
    kmin: i32,
    coeffs: Vec<CMat<T>>,
}

impl<T: Real> LaurentMatrix<T> {
    pub fn zero(r: usize) -> Self {
        LaurentMatrix { r, kmin: 0, coeffs: Vec::new() }
    }

    pub fn constant(m: CMat<T>) -> Self {
        LaurentMatrix { r: m.n(), kmin: 0, coeffs: vec![m] }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kmin(&self) -> i32 {
        self.kmin
    }

    pub fn kmax(&self) -> i32 {
        self.kmin + self.coeffs.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponents with their coefficients, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &CMat<T>)> {
        self.coeffs.iter().enumerate().map(move |(i, m)| (self.kmin + i as i32, m))
    }

    pub fn coeff(&self, k: i32) -> CMat<T> {
        if self.coeffs.is_empty() || k < self.kmin || k > self.kmax() {
            CMat::zeros(self.r)
        } else {
            self.coeffs[(k - self.kmin) as usize].clone()
        }
    }

    fn slot(&mut self, k: i32) -> &mut CMat<T> {
        if self.coeffs.is_empty() {
            self.kmin = k;
            self.coeffs.push(CMat::zeros(self.r));
        }
        while k < self.kmin {
            self.coeffs.insert(0, CMat::zeros(self.r));
            self.kmin -= 1;
        }
        while k > self.kmax() {
            self.coeffs.push(CMat::zeros(self.r));
        }
        &mut self.coeffs[(k - self.kmin) as usize]
    }

    pub fn add_term(&mut self, k: i32, m: &CMat<T>) {
        *self.slot(k) += m;
    }

    pub fn set_term(&mut self, k: i32, m: CMat<T>) {
        *self.slot(k) = m;
    }

    pub fn eval(&self, z: C<T>) -> CMat<T> {
        let mut out = CMat::zeros(self.r);
        if self.coeffs.is_empty() {
            return out;
        }
        // Horner over the nonnegative part, then the negative part in 1/z.
        let mut acc = CMat::zeros(self.r);
        for k in (0.max(self.kmin)..=self.kmax()).rev() {
            acc = &acc.scale(z) + &self.coeff(k);
        }
        out += &acc;
        if self.kmin < 0 {
            let w = C::<T>::one() / z;
            let mut acc = CMat::zeros(self.r);
            for k in self.kmin..0 {
                acc = &acc + &self.coeff(k);
                acc = acc.scale(w);
            }
            out += &acc;
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.r);
        for (i, a) in self.terms() {
            for (j, b) in o.terms() {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        LaurentMatrix { r: self.r, kmin: self.kmin, coeffs: self.coeffs.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in o.terms() {
            out.add_term(k, m);
        }
        out
    }

    /// Right multiplication by a constant matrix.
    pub fn rmul_const(&self, u: &CMat<T>) -> Self {
        LaurentMatrix { r: self.r, kmin: self.kmin, coeffs: self.coeffs.iter().map(|m| m * u).collect() }
    }

    /// Right multiplication by `diag(1, …, z^s, …, 1)` with `z^s` in position `j`.
    pub fn col_shift(&self, j: usize, s: i32) -> Self {
        let mut out = Self::zero(self.r);
        for (k, m) in self.terms() {
            let mut keep = m.clone();
            let mut moved = CMat::zeros(self.r);
            for i in 0..self.r {
                moved[(i, j)] = m[(i, j)];
                keep[(i, j)] = C::zero();
            }
            out.add_term(k, &keep);
            out.add_term(k + s, &moved);
        }
        out.trim(T::zero());
        out
    }

    /// Drops leading and trailing coefficients whose entries are all at most `tol`.
    pub fn trim(&mut self, tol: T) {
        while self.coeffs.first().is_some_and(|m| m.max_abs() <= tol) {
            self.coeffs.remove(0);
            self.kmin += 1;
        }
        while self.coeffs.last().is_some_and(|m| m.max_abs() <= tol) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.kmin = 0;
        }
    }

    /// Largest Frobenius norm among coefficients with negative exponent.
    pub fn max_negative_norm(&self) -> T {
        self.terms().filter(|(k, _)| *k < 0).fold(T::zero(), |m, (_, c)| m.max(c.norm_fro()))
    }

    /// Removes all negative-exponent coefficients.
    pub fn drop_negative(&mut self) {
        while self.kmin < 0 && !self.coeffs.is_empty() {
            self.coeffs.remove(0);
            self.kmin += 1;
        }
        if self.coeffs.is_empty() {
            self.kmin = 0;
        }
    }

    pub fn max_coeff_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm_fro()))
    }
}
