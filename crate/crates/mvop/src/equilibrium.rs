//! One-cut equilibrium measure on the rescaled interval `[−1, 1]`.

use crate::error::{MvopError, Result};
use crate::quadrature::{gauss_chebyshev2, gauss_jacobi};
use crate::scalar::{cx, i_unit, re, Real, C};
use crate::szego::sqrt_z2m1;
use crate::weight::{compose_affine, poly_deriv, poly_eval, poly_eval_c, Potential};
use num_traits::Zero;

/// Support `[a, b]` with `c = (b−a)/2`, `d = (b+a)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportInterval<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> SupportInterval<T> {
    pub fn from_endpoints(a: T, b: T) -> Self {
        SupportInterval { a, b, c: (b - a) / T::lit(2.0), d: (b + a) / T::lit(2.0) }
    }

    pub fn from_cd(c: T, d: T) -> Self {
        SupportInterval { a: d - c, b: d + c, c, d }
    }
}

/// The two endpoint conditions, each shifted to vanish at the solution.
pub fn mrs_residuals<T: Real>(v: &Potential<T>, c: T, d: T) -> [T; 2] {
    let (i1, i2, _) = mrs_integrals(v, c, d);
    [i1 - T::one(), i2 + T::one()]
}

/// Returns `(I1, I2, jacobian)` where the jacobian is with respect to `(c, d)`.
fn mrs_integrals<T: Real>(v: &Potential<T>, c: T, d: T) -> (T, T, [[T; 2]; 2]) {
    let dv = v.derivative_coeffs();
    let ddv = poly_deriv(&dv);
    let n = v.degree() + 2;
    let half = T::lit(0.5);
    let w1 = gauss_jacobi::<T>(n, -half, half);
    let w2 = gauss_jacobi::<T>(n, half, -half);
    let k = T::one() / (T::lit(2.0) * T::PI());
    let eval = |rule: &crate::quadrature::Rule<T>| {
        let mut i = T::zero();
        let mut di_dc = T::zero();
        let mut di_dd = T::zero();
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = d + c * u;
            let p1 = poly_eval(&dv, s);
            let p2 = poly_eval(&ddv, s);
            i += w * c * p1;
            di_dc += w * (p1 + c * u * p2);
            di_dd += w * c * p2;
        }
        (i * k, di_dc * k, di_dd * k)
    };
    let (i1, a11, a12) = eval(&w1);
    let (i2, a21, a22) = eval(&w2);
    (i1, i2, [[a11, a12], [a21, a22]])
}

/// MRS endpoints by damped Newton in `(c, d)` with the exact polynomial Jacobian.
pub fn solve_mrs<T: Real>(v: &Potential<T>, tol: T) -> Result<SupportInterval<T>> {
    let two_m = v.degree();
    // Pure monomial: I1 scales as c^{2m}.
    let mono = Potential::<T>::monomial(two_m);
    let (k1, _, _) = mrs_integrals(&mono, T::one(), T::zero());
    let mut c = k1.powf(-T::one() / T::of(two_m));
    let mut d = T::zero();
    let norm = |r: [T; 2]| r[0].abs().max(r[1].abs());
    let mut res = mrs_residuals(v, c, d);
    for it in 0..100 {
        if norm(res) < tol {
            log::debug!("MRS converged in {it} Newton steps: c={c}, d={d}");
            if c < T::lit(5e-11) {
                return Err(MvopError::DegenerateInterval((c + c).to_f64()));
            }
            return Ok(SupportInterval::from_cd(c, d));
        }
        let (i1, i2, j) = mrs_integrals(v, c, d);
        let f = [i1 - T::one(), i2 + T::one()];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == T::zero() || !det.is_finite() {
            return Err(MvopError::NonConvergence("singular MRS Jacobian".into()));
        }
        let dc = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dd = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let mut step = T::one();
        loop {
            let nc = c - step * dc;
            let nd = d - step * dd;
            if nc > T::zero() {
                let nr = mrs_residuals(v, nc, nd);
                if norm(nr) < norm(res) || step < T::lit(1e-3) {
                    c = nc;
                    d = nd;
                    res = nr;
                    break;
                }
            }
            step *= T::lit(0.5);
            if step < T::lit(1e-6) {
                return Err(MvopError::NonConvergence("line search failed".into()));
            }
        }
    }
    if norm(res) < tol * T::lit(100.0) {
        return Ok(SupportInterval::from_cd(c, d));
    }
    Err(MvopError::NonConvergence(format!("residual {:e} after 100 iterations", norm(res).to_f64())))
}

/// Polynomial part of `(d/dx) v(cx+d) / (x²−1)^{1/2}` at infinity.
pub fn compute_h<T: Real>(v: &Potential<T>, supp: &SupportInterval<T>) -> Vec<T> {
    let dv = v.derivative_coeffs();
    let p: Vec<T> = compose_affine(&dv, supp.c, supp.d).into_iter().map(|x| x * supp.c).collect();
    // (1 − 1/x²)^{-1/2} = Σ binom(2k,k)/4^k x^{-2k}
    let deg_p = p.len() - 1;
    let mut coef = vec![T::one()];
    for k in 1..=deg_p {
        let prev = coef[k - 1];
        coef.push(prev * T::of(2 * k - 1) / T::of(2 * k));
    }
    (0..deg_p)
        .map(|j| {
            let mut s = T::zero();
            let mut k = 0;
            while j + 2 * k < deg_p {
                s += p[j + 2 * k + 1] * coef[k];
                k += 1;
            }
            s
        })
        .collect()
}

/// Equilibrium data for a one-cut regular potential.
#[derive(Clone, Debug)]
pub struct EquilibriumData<T: Real> {
    pub potential: Potential<T>,
    pub support: SupportInterval<T>,
    pub h: Vec<T>,
    pub ell: T,
    /// Coefficients of `V(x) = v(cx + d)`.
    pub v_rescaled: Vec<T>,
    pub mrs_residuals: [T; 2],
    /// `|ℓ(z₀=2) − ℓ(z₀=3)|`.
    pub ell_consistency: T,
}

impl<T: Real> EquilibriumData<T> {
    pub fn new(v: &Potential<T>, tol: T) -> Result<Self> {
        let support = solve_mrs(v, tol)?;
        let h = compute_h(v, &support);
        for k in 0..=200 {
            let x = -T::one() + T::lit(2.0) * T::of(k) / T::lit(200.0);
            if poly_eval(&h, x) <= T::zero() {
                return Err(MvopError::NotRegular(format!("h({}) <= 0", x)));
            }
        }
        let v_rescaled = v.rescaled_coeffs(support.c, support.d);
        let mut eq = EquilibriumData {
            potential: v.clone(),
            support,
            h,
            ell: T::zero(),
            v_rescaled,
            mrs_residuals: mrs_residuals(v, support.c, support.d),
            ell_consistency: T::zero(),
        };
        let l2 = eq.ell_at(re(T::lit(2.0)));
        let l3 = eq.ell_at(re(T::lit(3.0)));
        eq.ell = l2;
        eq.ell_consistency = (l2 - l3).abs();
        if eq.ell_consistency > T::lit(1e-9).max(T::epsilon() * T::lit(1e4)) {
            return Err(MvopError::InconsistentEll(eq.ell_consistency.to_f64()));
        }
        Ok(eq)
    }

    fn ell_at(&self, z0: C<T>) -> T {
        (self.phi(z0).expect("probe off the cut") + self.g(z0).expect("probe off the cut") * T::lit(2.0)
            - self.v_of(z0))
        .re
    }

    pub fn c(&self) -> T {
        self.support.c
    }

    pub fn d(&self) -> T {
        self.support.d
    }

    pub fn h_at(&self, x: T) -> T {
        poly_eval(&self.h, x)
    }

    pub fn h_prime_at(&self, x: T) -> T {
        poly_eval(&poly_deriv(&self.h), x)
    }

    /// `V(z) = v(cz + d)`.
    pub fn v_of(&self, z: C<T>) -> C<T> {
        poly_eval_c(&self.v_rescaled, z)
    }

    /// `ψ(x) = h(x) √(1−x²) / (2π)`, zero outside `[−1,1]`.
    pub fn psi_density(&self, x: T) -> T {
        if x.abs() >= T::one() {
            return T::zero();
        }
        self.h_at(x) * (T::one() - x * x).sqrt() / (T::lit(2.0) * T::PI())
    }

    /// `∫ ψ` by Gauss–Chebyshev of the second kind.
    pub fn total_mass(&self) -> T {
        let n = self.h.len() + 4;
        gauss_chebyshev2::<T>(n).integrate(|x| self.h_at(x)) / (T::lit(2.0) * T::PI())
    }

    /// `Σ h_k J_k` with `J_k = ∫_1^z s^k S(s) ds`, given `S(z)` and `log(z + S(z))`.
    fn antiderivative(&self, z: C<T>, s: C<T>, lg: C<T>) -> C<T> {
        let s3 = s * s * s;
        let mut jm2 = (z * s - lg) * T::lit(0.5);
        let mut jm1 = s3 / T::lit(3.0);
        let mut total = jm2 * self.h[0];
        if self.h.len() > 1 {
            total += jm1 * self.h[1];
        }
        let mut zp = z;
        for k in 2..self.h.len() {
            let jk = (zp * s3 + jm2 * T::of(k - 1)) / T::of(k + 2);
            total += jk * self.h[k];
            zp *= z;
            jm2 = jm1;
            jm1 = jk;
        }
        total
    }

    /// `φ(z) = ∫_1^z h(s) (s²−1)^{1/2} ds`, analytic off `(−∞, 1]`.
    pub fn phi(&self, z: C<T>) -> Result<C<T>> {
        if z.im == T::zero() && z.re.abs() <= T::one() {
            return Err(MvopError::OnCut(format!("{z}")));
        }
        let s = sqrt_z2m1(z);
        Ok(self.antiderivative(z, s, (z + s).ln()))
    }

    /// Boundary value of `φ` from the upper half-plane on `(−1, 1)`; purely imaginary.
    pub fn phi_plus(&self, x: T) -> C<T> {
        let s = cx(T::zero(), (T::one() - x * x).max(T::zero()).sqrt());
        let lg = cx(T::zero(), x.max(-T::one()).min(T::one()).acos());
        self.antiderivative(re(x), s, lg)
    }

    pub fn phi_minus(&self, x: T) -> C<T> {
        self.phi_plus(x).conj()
    }

    /// `φ̃(z) = ∫_{−1}^z h(s)(s²−1)^{1/2} ds`, analytic off `[−1, ∞)`.
    pub fn phi_tilde(&self, z: C<T>) -> Result<C<T>> {
        if z.im == T::zero() && z.re >= -T::one() {
            return Err(MvopError::OnCut(format!("{z}")));
        }
        let upper = z.im > T::zero() || (z.im == T::zero() && z.im.is_sign_positive());
        let jump = cx(T::zero(), T::lit(2.0) * T::PI());
        let base = if z.im == T::zero() {
            let s = sqrt_z2m1(re(z.re));
            self.antiderivative(re(z.re), s, (re(z.re) + s).ln())
        } else {
            self.phi(z)?
        };
        Ok(if upper { base + jump } else { base - jump })
    }

    /// `g(z) = ∫ log(z−s) ψ(s) ds` by Gauss–Chebyshev-2 with order doubling.
    pub fn g(&self, z: C<T>) -> Result<C<T>> {
        if z.im == T::zero() && z.re <= T::one() {
            return Err(MvopError::OnCut(format!("{z}")));
        }
        let scale = T::one() / (T::lit(2.0) * T::PI());
        let eval = |n: usize| -> C<T> {
            let r = gauss_chebyshev2::<T>(n);
            let mut acc = C::<T>::zero();
            for (&s, &w) in r.nodes.iter().zip(&r.weights) {
                acc += (z - s).ln() * (w * self.h_at(s));
            }
            acc * scale
        };
        let tol = T::lit(1e-11).max(T::epsilon() * T::lit(100.0));
        let mut n = 64;
        let mut prev = eval(n);
        while n < 65536 {
            n *= 2;
            let cur = eval(n);
            if (cur - prev).norm() <= tol * T::one().max(cur.norm()) {
                return Ok(cur);
            }
            prev = cur;
        }
        log::warn!("g({z}) quadrature did not reach tolerance");
        Ok(prev)
    }

    /// Taylor coefficients of `h(±1 ± t) (2 + t)^{1/2}` divided by `k + 3/2`.
    fn local_series(&self, at_minus_one: bool) -> Vec<T> {
        let terms = 64;
        let hs = if at_minus_one {
            compose_affine(&self.h, -T::one(), -T::one())
        } else {
            compose_affine(&self.h, T::one(), T::one())
        };
        // (2+t)^{1/2} = √2 Σ binom(1/2, k) (t/2)^k
        let mut sq = Vec::with_capacity(terms);
        let mut b = T::lit(2.0).sqrt();
        for k in 0..terms {
            sq.push(b);
            b = b * (T::lit(0.5) - T::of(k)) / T::of(k + 1) / T::lit(2.0);
        }
        (0..terms)
            .map(|k| {
                let mut s = T::zero();
                for (i, &hi) in hs.iter().enumerate() {
                    if i <= k {
                        s += hi * sq[k - i];
                    }
                }
                s / (T::of(k) + T::lit(1.5))
            })
            .collect()
    }

    fn series_eval(coef: &[T], t: C<T>) -> C<T> {
        coef.iter().rev().fold(C::<T>::zero(), |acc, &c| acc * t + c)
    }

    /// `f(z) = (3φ(z)/4)^{2/3}`, conformal near `z = 1`, real-positive for `z > 1`.
    pub fn conformal_f(&self, z: C<T>) -> Result<C<T>> {
        let t = z - T::one();
        if t.norm() > T::lit(0.5) {
            return Err(MvopError::OutsideDomain(format!("{z}")));
        }
        let q = Self::series_eval(&self.local_series(false), t);
        Ok(t * (q * T::lit(0.75)).powf(T::lit(2.0) / T::lit(3.0)))
    }

    /// `f̃(z) = (3φ̃(z)/4)^{2/3}`, conformal near `z = −1` with negative derivative there.
    pub fn conformal_f_tilde(&self, z: C<T>) -> Result<C<T>> {
        let tau = -(z + T::one());
        if tau.norm() > T::lit(0.5) {
            return Err(MvopError::OutsideDomain(format!("{z}")));
        }
        let q = Self::series_eval(&self.local_series(true), tau);
        Ok(tau * (q * T::lit(0.75)).powf(T::lit(2.0) / T::lit(3.0)))
    }

    /// `|f(x)| / (1 − x²)` for real `x` near 1; finite at `x = 1`.
    pub fn f_over_one_minus_x2(&self, x: T) -> Result<T> {
        let t = x - T::one();
        if t.abs() > T::lit(0.5) {
            return Err(MvopError::OutsideDomain(format!("{x}")));
        }
        let q = Self::series_eval(&self.local_series(false), re(t)).re;
        Ok((q * T::lit(0.75)).powf(T::lit(2.0) / T::lit(3.0)) / (T::one() + x))
    }

    /// `2^{−1/3} h(1)^{2/3}`.
    pub fn f_prime_at_one(&self) -> T {
        T::lit(2.0).powf(-T::one() / T::lit(3.0)) * self.h_at(T::one()).powf(T::lit(2.0) / T::lit(3.0))
    }

    /// `ψ(x) = −(iN/2) φ_+(x) + arcsin(x)/2`.
    pub fn inner_phase(&self, x: T, n: T) -> T {
        let p = self.phi_plus(x);
        (-i_unit::<T>() * p * (n / T::lit(2.0))).re + x.asin() / T::lit(2.0)
    }
}
