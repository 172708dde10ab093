//! Weight `W_N(x) = e^{−N v(x)} e^{Ax} e^{A* x}`.

use crate::error::{MvopError, Result};
use crate::linalg::CMat;
use crate::scalar::{cx, re, Real, C};
use num_traits::Zero;

/// Strictly lower subdiagonal matrix with entries `alpha[0..r-1]` on the first subdiagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentMatrix<T: Real> {
    alpha: Vec<T>,
}

impl<T: Real> NilpotentMatrix<T> {
    pub fn new(alpha: Vec<T>) -> Self {
        NilpotentMatrix { alpha }
    }

    pub fn zero(r: usize) -> Self {
        assert!(r >= 1);
        NilpotentMatrix { alpha: vec![T::zero(); r - 1] }
    }

    pub fn r(&self) -> usize {
        self.alpha.len() + 1
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn scaled(&self, c: T) -> Self {
        NilpotentMatrix { alpha: self.alpha.iter().map(|&a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|a| *a == T::zero())
    }

    pub fn dense(&self) -> CMat<T> {
        let mut m = CMat::zeros(self.r());
        for (j, &a) in self.alpha.iter().enumerate() {
            m[(j + 1, j)] = re(a);
        }
        m
    }
}

/// `e^{A x}` as the exact finite sum `Σ_{k<r} (A x)^k / k!`.
pub fn exp_nilpotent<T: Real>(a: &NilpotentMatrix<T>, x: C<T>) -> CMat<T> {
    let r = a.r();
    let ad = a.dense().scale(x);
    let mut out = CMat::identity(r);
    let mut term = CMat::identity(r);
    for k in 1..r {
        term = (&term * &ad).scale_re(T::one() / T::of(k));
        out += &term;
    }
    out
}

/// `e^{A* x}` for complex `x` (not conjugated): the adjoint of `e^{A x̄}`.
pub fn exp_nilpotent_adj<T: Real>(a: &NilpotentMatrix<T>, x: C<T>) -> CMat<T> {
    exp_nilpotent(a, x.conj()).adjoint()
}

/// `M(x) = e^{Ax} e^{A* x}` continued analytically to complex `x`.
pub fn eval_m_of<T: Real>(a: &NilpotentMatrix<T>, x: C<T>) -> CMat<T> {
    &exp_nilpotent(a, x) * &exp_nilpotent_adj(a, x)
}

/// Monic even-degree polynomial `v(x) = Σ v_k x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T: Real> {
    coeffs: Vec<T>,
}

impl<T: Real> Potential<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(MvopError::InvalidInput("potential degree must be at least 2".into()));
        }
        if coeffs.len().is_multiple_of(2) {
            return Err(MvopError::InvalidInput("potential degree must be even".into()));
        }
        if *coeffs.last().unwrap() != T::one() {
            return Err(MvopError::InvalidInput("leading coefficient must be exactly 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(MvopError::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Potential { coeffs })
    }

    /// `x^{2m}`.
    pub fn monomial(two_m: usize) -> Self {
        let mut c = vec![T::zero(); two_m + 1];
        c[two_m] = T::one();
        Potential::new(c).expect("monomial of even degree")
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: C<T>) -> C<T> {
        self.coeffs.iter().rev().fold(C::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative_coeffs(&self) -> Vec<T> {
        self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * T::of(k)).collect()
    }

    pub fn eval_deriv(&self, x: T) -> T {
        self.derivative_coeffs().iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Coefficients of `x ↦ v(c x + d)`.
    pub fn rescaled_coeffs(&self, c: T, d: T) -> Vec<T> {
        compose_affine(&self.coeffs, c, d)
    }

    /// Coefficients of `v(x − s)`, i.e. the potential translated right by `s`.
    pub fn translated(&self, s: T) -> Self {
        Potential { coeffs: compose_affine(&self.coeffs, T::one(), -s) }
    }
}

/// Coefficients of `p(c x + d)` given coefficients of `p`.
pub fn compose_affine<T: Real>(p: &[T], c: T, d: T) -> Vec<T> {
    let mut out = vec![T::zero(); p.len()];
    // Horner in the polynomial ring: out = out*(c x + d) + p_k
    for &pk in p.iter().rev() {
        let mut next = vec![T::zero(); p.len()];
        for (i, &o) in out.iter().enumerate() {
            if o == T::zero() {
                continue;
            }
            next[i] += o * d;
            if i + 1 < next.len() {
                next[i + 1] += o * c;
            }
        }
        next[0] += pk;
        out = next;
    }
    out
}

pub fn poly_eval<T: Real>(p: &[T], x: T) -> T {
    p.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

pub fn poly_eval_c<T: Real>(p: &[T], z: C<T>) -> C<T> {
    p.iter().rev().fold(C::zero(), |acc, &c| acc * z + c)
}

pub fn poly_deriv<T: Real>(p: &[T]) -> Vec<T> {
    p.iter().enumerate().skip(1).map(|(k, &c)| c * T::of(k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWeight<T: Real> {
    pub potential: Potential<T>,
    pub a: NilpotentMatrix<T>,
}

impl<T: Real> MatrixWeight<T> {
    pub fn new(potential: Potential<T>, a: NilpotentMatrix<T>) -> Self {
        MatrixWeight { potential, a }
    }

    pub fn r(&self) -> usize {
        self.a.r()
    }

    pub fn eval_m(&self, x: C<T>) -> CMat<T> {
        eval_m_of(&self.a, x)
    }

    /// `e^{−N v(x)} M(x)`; exact zero once the scalar factor underflows.
    pub fn eval_w(&self, x: T, n: T) -> CMat<T> {
        let s = scalar_factor(&self.potential, x, n);
        if s == T::zero() {
            return CMat::zeros(self.r());
        }
        self.eval_m(cx(x, T::zero())).scale_re(s)
    }
}

/// `e^{−N v(x)}` with graceful underflow.
pub fn scalar_factor<T: Real>(v: &Potential<T>, x: T, n: T) -> T {
    let e = -n * v.eval(x);
    if e < T::min_positive_value().ln() {
        T::zero()
    } else {
        e.exp()
    }
}
