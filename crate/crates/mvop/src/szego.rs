//! Matrix Szegő function for `e^{Ax} e^{A* x}` by column-wise removal of determinant zeros.

use crate::error::{MvopError, Result};
use crate::laurent::LaurentMatrix;
use crate::linalg::CMat;
use crate::scalar::{i_unit, re, Real, C};
use crate::weight::{eval_m_of, exp_nilpotent, NilpotentMatrix};
use num_traits::{One, Zero};

/// `(z + 1/z)/2`.
pub fn joukowski<T: Real>(z: C<T>) -> Result<C<T>> {
    if z.is_zero() {
        return Err(MvopError::InvalidInput("joukowski map at z = 0".into()));
    }
    Ok((z + z.inv()) * T::lit(0.5))
}

/// `(z−1)^{1/2}(z+1)^{1/2}`: analytic off `[−1,1]`, asymptotic to `z`.
pub fn sqrt_z2m1<T: Real>(z: C<T>) -> C<T> {
    (z - T::one()).sqrt() * (z + T::one()).sqrt()
}

/// `φ(z) = z + (z²−1)^{1/2}`; on `(−1,1)` this returns the boundary value from the side of `Im z`.
pub fn phi_map<T: Real>(z: C<T>) -> C<T> {
    z + sqrt_z2m1(z)
}

/// `φ_+(x) = e^{i arccos x}`.
pub fn phi_plus<T: Real>(x: T) -> C<T> {
    C::from_polar(T::one(), x.acos())
}

/// `φ_−(x) = e^{−i arccos x}`.
pub fn phi_minus<T: Real>(x: T) -> C<T> {
    C::from_polar(T::one(), -x.acos())
}

/// `G_0(z) = e^{A (z + 1/z)/2}` as a Laurent polynomial.
pub fn build_g0<T: Real>(a: &NilpotentMatrix<T>) -> LaurentMatrix<T> {
    let r = a.r();
    let half = a.dense().scale_re(T::lit(0.5));
    let mut x = LaurentMatrix::zero(r);
    x.add_term(-1, &half);
    x.add_term(1, &half);
    let mut out = LaurentMatrix::constant(CMat::identity(r));
    let mut term = LaurentMatrix::constant(CMat::identity(r));
    for k in 1..r {
        term = term.mul(&x).scale(re(T::one() / T::of(k)));
        out = out.add(&term);
    }
    out.trim(T::zero());
    out
}

/// How a unit null vector is completed to a unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Completion {
    /// Householder reflector (times a phase) sending `e_j` to `u`.
    #[default]
    Householder,
    /// Modified Gram–Schmidt of `u` against the standard basis.
    GramSchmidt,
}

/// Unitary matrix whose column `j` equals the unit vector `u`.
pub fn unitary_with_column<T: Real>(u: &[C<T>], j: usize, how: Completion) -> CMat<T> {
    let r = u.len();
    let nrm = u.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let u: Vec<C<T>> = u.iter().map(|&z| z / nrm).collect();
    match how {
        Completion::Householder => {
            let uj = u[j];
            let ph = if uj.norm() > T::zero() { uj / uj.norm() } else { C::one() };
            // Reflect ph·e_j onto −u; no cancellation in v_j.
            let mut v = u.clone();
            v[j] += ph;
            let vv = v.iter().map(|z| z.norm_sqr()).sum::<T>();
            let two = T::lit(2.0) / vv;
            let mut h = CMat::identity(r);
            for a in 0..r {
                for b in 0..r {
                    h[(a, b)] -= v[a] * v[b].conj() * two;
                }
            }
            h.scale(-ph)
        }
        Completion::GramSchmidt => {
            let mut basis: Vec<Vec<C<T>>> = vec![u.clone()];
            for k in 0..r {
                if basis.len() == r {
                    break;
                }
                let mut w: Vec<C<T>> = (0..r).map(|i| if i == k { C::one() } else { C::zero() }).collect();
                for _pass in 0..2 {
                    for b in &basis {
                        let p = b.iter().zip(&w).fold(C::<T>::zero(), |s, (x, y)| s + x.conj() * y);
                        for i in 0..r {
                            w[i] -= b[i] * p;
                        }
                    }
                }
                let wn = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
                if wn > T::lit(1e-3) {
                    basis.push(w.iter().map(|&z| z / wn).collect());
                }
            }
            let mut out = CMat::zeros(r);
            out.set_col(j, &basis[0]);
            let mut next = 1;
            for col in 0..r {
                if col != j {
                    out.set_col(col, &basis[next]);
                    next += 1;
                }
            }
            out
        }
    }
}

/// Result of the constructive factorization `M((z+1/z)/2) = G(z) G(z)*` on `|z| = 1`.
#[derive(Clone, Debug)]
pub struct SzegoFactorization<T: Real> {
    /// Polynomial factor, analytic in the unit disc.
    pub g: LaurentMatrix<T>,
    /// Nilpotent matrix the factorization was built for.
    pub a_eff: NilpotentMatrix<T>,
    /// Constant left factor applied in `D(z) = const_left · G(1/φ(z))`.
    pub const_left: CMat<T>,
    /// `D(∞) = const_left · G(0)`.
    pub d_infinity: CMat<T>,
    /// Constant unitaries applied on the right, in order (the last one is the polar normalization).
    pub unitary_log: Vec<CMat<T>>,
    /// Largest column residual `‖G(0)u‖` discarded when shifting by `z^{-1}`.
    pub dropped_residual: T,
}

/// Factorizes with the default Householder completion.
pub fn spectral_factorize<T: Real>(a_eff: &NilpotentMatrix<T>) -> Result<SzegoFactorization<T>> {
    spectral_factorize_with(a_eff, Completion::Householder)
}

pub fn spectral_factorize_with<T: Real>(a_eff: &NilpotentMatrix<T>, how: Completion) -> Result<SzegoFactorization<T>> {
    let r = a_eff.r();
    let mut g = build_g0(a_eff);
    for j in 0..r {
        g = g.col_shift(j, (r - 1 - j) as i32);
    }
    let mut log = Vec::new();
    let mut dropped = T::zero();
    let mut step = 0;
    for j in 0..r.saturating_sub(1) {
        for _ in 0..(r - 1 - j) {
            let g0 = g.coeff(0);
            let svd = g0.svd();
            let smax = svd.s[0];
            let smin = svd.s[r - 1];
            if smin > T::lit(1e-6) * smax.max(T::one()) {
                return Err(MvopError::NullVectorNotFound { sigma: smin.to_f64(), step });
            }
            let u = svd.v.col(r - 1);
            let h = unitary_with_column(&u, j, how);
            g = g.rmul_const(&h);
            g = g.col_shift(j, -1);
            dropped = dropped.max(g.max_negative_norm());
            g.drop_negative();
            log.push(h);
            step += 1;
        }
    }
    let g0 = g.coeff(0);
    let svd = g0.svd();
    let polar = &svd.v * &svd.u.adjoint();
    g = g.rmul_const(&polar);
    log.push(polar);
    let mut d_inf = g.coeff(0);
    // G(0) is Hermitian up to rounding; store the exactly Hermitian part.
    d_inf = (&d_inf + &d_inf.adjoint()).scale_re(T::lit(0.5));
    g.set_term(0, d_inf.clone());
    if a_eff.alpha().iter().all(|a| a.is_finite()) && dropped > T::lit(1e-6) * g.max_coeff_norm().max(T::one()) {
        return Err(MvopError::NegativePowersRemain(dropped.to_f64()));
    }
    log::debug!("szego factorization r={r}: {step} null-vector steps, dropped residual {dropped:e}");
    Ok(SzegoFactorization {
        g,
        a_eff: a_eff.clone(),
        const_left: CMat::identity(r),
        d_infinity: d_inf,
        unitary_log: log,
        dropped_residual: dropped,
    })
}

/// Expansion data of `L(z)` and `F(z) = G(1/φ(z))^{-1} e^{A z}` at `z = ±1`.
#[derive(Clone, Debug)]
pub struct SzegoBoundaryData<T: Real> {
    pub l1: CMat<T>,
    pub lm1: CMat<T>,
    pub d10: CMat<T>,
    pub d11: CMat<T>,
    pub dm10: CMat<T>,
    pub dm11: CMat<T>,
    /// Unit factor `β` with `(z+1)^{1/2} = β √t` at `z = −1 − t`.
    pub minus_branch: C<T>,
}

impl<T: Real> SzegoFactorization<T> {
    pub fn r(&self) -> usize {
        self.g.r()
    }

    /// Same factorization with `D(z) = e · G(1/φ(z))`.
    pub fn with_const_left(mut self, e: CMat<T>) -> Self {
        self.d_infinity = &e * &self.g.coeff(0);
        self.const_left = e;
        self
    }

    pub fn eval_g(&self, w: C<T>) -> CMat<T> {
        self.g.eval(w)
    }

    pub fn eval_d(&self, z: C<T>) -> Result<CMat<T>> {
        check_off_cut(z)?;
        Ok(&self.const_left * &self.g.eval(phi_map(z).inv()))
    }

    /// `D_+(x) = const_left · G(e^{−i arccos x})`.
    pub fn eval_d_plus(&self, x: T) -> Result<CMat<T>> {
        check_open_interval(x)?;
        Ok(&self.const_left * &self.g.eval(phi_minus(x)))
    }

    /// `D_−(x) = const_left · G(e^{i arccos x})`.
    pub fn eval_d_minus(&self, x: T) -> Result<CMat<T>> {
        check_open_interval(x)?;
        Ok(&self.const_left * &self.g.eval(phi_plus(x)))
    }

    /// `L(z) = D(z)^{-1} e^{A z} e^{A* z} D(z̄)^{-*}` for the effective matrix.
    pub fn eval_l(&self, z: C<T>) -> Result<CMat<T>> {
        check_off_cut(z)?;
        let gz = self.g.eval(phi_map(z).inv());
        let gzb = self.g.eval(phi_map(z.conj()).inv());
        let m = eval_m_of(&self.a_eff, z);
        let left = gz.inverse().ok_or_else(|| MvopError::OnCut(format!("{z}")))?;
        let right = gzb.adjoint();
        let lm = &left * &m;
        lm.solve_right(&right).ok_or_else(|| MvopError::OnCut(format!("{z}")))
    }

    /// `G(1/φ(z))^{-1} e^{A z}`; also valid at `z = ±1`.
    fn eval_f(&self, z: C<T>) -> CMat<T> {
        let w = if z == re(T::one()) {
            C::one()
        } else if z == re(-T::one()) {
            -C::<T>::one()
        } else {
            phi_map(z).inv()
        };
        let g = self.g.eval(w);
        g.inverse().expect("G is invertible on the closed disc") * exp_nilpotent(&self.a_eff, z)
    }

    /// Max over `n` equispaced circle points of `‖G G* − M((z+1/z)/2)‖_F`.
    pub fn circle_residual(&self, n: usize) -> T {
        let mut worst = T::zero();
        for k in 0..n {
            let th = T::TAU() * T::of(k) / T::of(n);
            let z = C::from_polar(T::one(), th);
            let g = self.g.eval(z);
            let m = eval_m_of(&self.a_eff, re(th.cos()));
            worst = worst.max((&(&g * &g.adjoint()) - &m).norm_fro());
        }
        worst
    }

    /// Max over circle samples of `| |det G| − 1 |`.
    pub fn det_defect(&self, n: usize) -> T {
        let mut worst = T::zero();
        for k in 0..n {
            let th = T::TAU() * T::of(k) / T::of(n);
            let z = C::from_polar(T::one(), th);
            worst = worst.max((self.g.eval(z).det().norm() - T::one()).abs());
        }
        worst
    }

    /// Product of the logged unitaries.
    pub fn unitary_product(&self) -> CMat<T> {
        self.unitary_log.iter().fold(CMat::identity(self.r()), |acc, u| &acc * u)
    }
}

fn check_off_cut<T: Real>(z: C<T>) -> Result<()> {
    if z.im == T::zero() && z.re.abs() <= T::one() {
        return Err(MvopError::OnCut(format!("{z}")));
    }
    Ok(())
}

fn check_open_interval<T: Real>(x: T) -> Result<()> {
    if !(x > -T::one() && x < T::one()) {
        return Err(MvopError::OutsideDomain(format!("{x}")));
    }
    Ok(())
}

/// Richardson extrapolation of `E_k = X + Σ c_m s_k^m` with `s_{k+1} = s_k / 2`.
fn richardson<T: Real>(mut e: Vec<CMat<T>>, levels: usize) -> (CMat<T>, T) {
    for lev in 1..=levels {
        let f = T::of(1 << lev);
        e = e.windows(2).map(|w| (&w[1].scale_re(f) - &w[0]).scale_re(T::one() / (f - T::one()))).collect();
    }
    let k = e.len();
    let spread =
        if k >= 2 { (&e[k - 1] - &e[k - 2]).norm_fro() / T::one().max(e[k - 1].norm_fro()) } else { T::zero() };
    (e[k - 1].clone(), spread)
}

/// Extracts `L_{±1}`, `D_{±1,0}`, `D_{±1,1}` from a ladder `t_k = 10^{-3} 4^{-k}`.
pub fn extract_boundary_data<T: Real>(f: &SzegoFactorization<T>) -> Result<SzegoBoundaryData<T>> {
    let r = f.r();
    let id = CMat::identity(r);
    let ts: Vec<T> = (0..6).map(|k| T::lit(1e-3) / T::of(1 << (2 * k))).collect();
    let tol = T::lit(1e-5);

    let ladder = |z0: T, sgn: T, g: &dyn Fn(C<T>) -> Result<CMat<T>>| -> Result<(CMat<T>, T)> {
        let e =
            ts.iter().map(|&t| Ok(g(re(z0 + sgn * t))?.scale_re(T::one() / t.sqrt()))).collect::<Result<Vec<_>>>()?;
        Ok(richardson(e, 3))
    };

    let (l1, s1) = ladder(T::one(), T::one(), &|z| Ok(&f.eval_l(z)? - &id))?;
    let d10 = f.eval_f(re(T::one()));
    let (d11, s2) = ladder(T::one(), T::one(), &|z| Ok(&f.eval_f(z) - &d10))?;
    let (lm1_raw, s3) = ladder(-T::one(), -T::one(), &|z| Ok(&f.eval_l(z)? - &id))?;
    let dm10 = f.eval_f(re(-T::one()));
    let (dm11_raw, s4) = ladder(-T::one(), -T::one(), &|z| Ok(&f.eval_f(z) - &dm10))?;
    let spread = s1.max(s2).max(s3).max(s4);
    if spread > tol {
        return Err(MvopError::BranchMismatch(spread.to_f64()));
    }

    let candidates = [i_unit::<T>(), -i_unit::<T>(), re(-T::one()), re(T::one())];
    let mut chosen = None;
    for beta in candidates {
        let cand = lm1_raw.scale(beta.inv());
        if cand.hermitian_defect() < T::lit(1e-8) {
            chosen = Some((beta, cand));
            break;
        }
    }
    let (beta, lm1) = chosen.ok_or_else(|| MvopError::BranchMismatch(lm1_raw.hermitian_defect().to_f64()))?;
    log::debug!("boundary data: (z+1)^(1/2) branch factor {beta}");
    let dm11 = dm11_raw.scale(beta.inv());
    Ok(SzegoBoundaryData { l1, lm1, d10, d11, dm10, dm11, minus_branch: beta })
}
