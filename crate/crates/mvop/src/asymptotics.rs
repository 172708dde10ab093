//! Large-N predictions for the monic family and their comparison with the direct solver.

use crate::airy::airy_ai;
use crate::direct::{compute_family_with, DirectOptions, MvopFamily};
use crate::equilibrium::EquilibriumData;
use crate::error::{MvopError, Result};
use crate::linalg::CMat;
use crate::scalar::{cx, re, Real, C};
use crate::szego::{extract_boundary_data, spectral_factorize, sqrt_z2m1, SzegoBoundaryData, SzegoFactorization};
use crate::weight::{exp_nilpotent, MatrixWeight, NilpotentMatrix};

/// Everything the predictions need for one weight.
#[derive(Clone, Debug)]
pub struct AsymptoticContext<T: Real> {
    pub weight: MatrixWeight<T>,
    pub eq: EquilibriumData<T>,
    pub szego: SzegoFactorization<T>,
    pub boundary: SzegoBoundaryData<T>,
}

impl<T: Real> AsymptoticContext<T> {
    pub fn new(weight: &MatrixWeight<T>, tol: T) -> Result<Self> {
        let eq = EquilibriumData::new(&weight.potential, tol)?;
        let a_eff = weight.a.scaled(eq.c());
        let szego = spectral_factorize(&a_eff)?.with_const_left(exp_nilpotent(&weight.a, re(eq.d())));
        let boundary = extract_boundary_data(&szego)?;
        Ok(AsymptoticContext { weight: weight.clone(), eq, szego, boundary })
    }

    pub fn r(&self) -> usize {
        self.weight.r()
    }

    fn d_inf(&self) -> &CMat<T> {
        &self.szego.d_infinity
    }

    /// `φ(z)^{1/2} / (√2 (z²−1)^{1/4}) · D(∞) D(z)^{-1}`.
    pub fn outer_leading(&self, z: C<T>) -> Result<CMat<T>> {
        if dist_to_interval(z) <= T::lit(0.05) {
            return Err(MvopError::OnCut(format!("{z} is within 0.05 of [-1, 1]")));
        }
        let s = sqrt_z2m1(z);
        let scalar = ((z + s) / (s * T::lit(2.0))).sqrt();
        let dz = self.szego.eval_d(z)?;
        let inv = dz.inverse().ok_or_else(|| MvopError::OnCut(format!("{z}")))?;
        Ok((self.d_inf() * &inv).scale(scalar))
    }

    pub fn inner_phase(&self, x: T, n: T) -> T {
        self.eq.inner_phase(x, n)
    }

    /// `√2 (1−x²)^{−1/4} D(∞) Re(e^{iψ} D_−(x)^{-1})`.
    pub fn inner_leading(&self, x: T, n: T) -> Result<CMat<T>> {
        if x.abs() > T::lit(0.9) {
            return Err(MvopError::OutsideDomain(format!("inner asymptotics need |x| <= 0.9, got {x}")));
        }
        let dm = self.szego.eval_d_minus(x)?;
        let inv = dm.inverse().ok_or(MvopError::SingularNorm(0))?;
        let ph = C::from_polar(T::one(), self.inner_phase(x, n));
        let amp = T::lit(2.0).sqrt() * (T::one() - x * x).powf(T::lit(-0.25));
        Ok((self.d_inf() * &inv.scale(ph).re_part()).scale_re(amp))
    }

    /// `√(2π) (|f(x)|/(1−x²))^{1/4} Ai(N^{2/3} f(x)) D(∞) Re(e^{i(π/4 − arcsin(x)/2)} D_+(x)^{-1})`.
    pub fn edge_leading(&self, x: T, n: T) -> Result<CMat<T>> {
        if !(x > T::lit(0.8) && x < T::one()) {
            return Err(MvopError::OutsideDomain(format!("edge asymptotics need 0.8 < x < 1, got {x}")));
        }
        let f = self.eq.conformal_f(re(x))?.re;
        let ratio = self.eq.f_over_one_minus_x2(x)?;
        let ai = airy_ai(n.powf(T::lit(2.0) / T::lit(3.0)) * f);
        let dp = self.szego.eval_d_plus(x)?;
        let inv = dp.inverse().ok_or(MvopError::SingularNorm(0))?;
        let ph = C::from_polar(T::one(), T::FRAC_PI_4() - x.asin() / T::lit(2.0));
        let amp = (T::lit(2.0) * T::PI()).sqrt() * ratio.powf(T::lit(0.25)) * ai;
        Ok((self.d_inf() * &inv.scale(ph).re_part()).scale_re(amp))
    }

    pub fn predict_b(&self) -> CMat<T> {
        CMat::identity(self.r()).scale_re(self.eq.d())
    }

    /// `(√2 c²/8) D(∞)(L_1/h(1) − L_{−1}/h(−1)) D(∞)^{-1}`.
    pub fn c1(&self) -> CMat<T> {
        let c = self.eq.c();
        let inner = &self.boundary.l1.scale_re(T::one() / self.eq.h_at(T::one()))
            - &self.boundary.lm1.scale_re(T::one() / self.eq.h_at(-T::one()));
        let dinv = self.d_inf().inverse().expect("D(∞) is invertible");
        (&(self.d_inf() * &inner) * &dinv).scale_re(T::lit(2.0).sqrt() * c * c / T::lit(8.0))
    }

    pub fn predict_c(&self, n: T) -> CMat<T> {
        let c = self.eq.c();
        &CMat::identity(self.r()).scale_re(c * c / T::lit(4.0)) + &self.c1().scale_re(T::one() / n)
    }

    /// First-order norm correction.
    pub fn h1(&self) -> CMat<T> {
        let (hp, hpp, hm, hmp) = self.h_endpoint_values();
        let id = CMat::identity(self.r());
        let s2 = id.scale_re(T::lit(2.0) * T::lit(2.0).sqrt());
        let l1 = &self.boundary.l1;
        let lm1 = &self.boundary.lm1;
        let scalar = (T::lit(4.0) * hp - T::lit(3.0) * hpp) / (T::lit(24.0) * hp * hp)
            + (T::lit(4.0) * hm + T::lit(3.0) * hmp) / (T::lit(24.0) * hm * hm);
        let plus = (l1 * &(&s2 + l1)).scale_re(T::one() / (T::lit(8.0) * hp));
        let minus = (lm1 * &(&s2 - lm1)).scale_re(T::one() / (T::lit(8.0) * hm));
        &(&id.scale_re(scalar) + &plus) - &minus
    }

    /// The correction with the L-terms over `24 h(±1)²` and a plus sign on both.
    pub fn h1_as_displayed(&self) -> CMat<T> {
        let (hp, hpp, hm, hmp) = self.h_endpoint_values();
        let id = CMat::identity(self.r());
        let s2 = id.scale_re(T::lit(2.0) * T::lit(2.0).sqrt());
        let l1 = &self.boundary.l1;
        let lm1 = &self.boundary.lm1;
        let scalar = (T::lit(4.0) * hp - T::lit(3.0) * hpp) / (T::lit(24.0) * hp * hp)
            + (T::lit(4.0) * hm + T::lit(3.0) * hmp) / (T::lit(24.0) * hm * hm);
        let plus = (l1 * &(&s2 + l1)).scale_re(T::one() / (T::lit(24.0) * hp * hp));
        let minus = (lm1 * &(&s2 - lm1)).scale_re(T::one() / (T::lit(24.0) * hm * hm));
        &(&id.scale_re(scalar) + &plus) + &minus
    }

    fn h_endpoint_values(&self) -> (T, T, T, T) {
        (self.eq.h_at(T::one()), self.eq.h_prime_at(T::one()), self.eq.h_at(-T::one()), self.eq.h_prime_at(-T::one()))
    }

    /// `ln(π c^{2N+1} e^{Nℓ})`.
    pub fn log_h_prefactor(&self, n: T) -> T {
        T::PI().ln() + (T::lit(2.0) * n + T::one()) * self.eq.c().ln() + n * self.eq.ell
    }

    /// `D(∞)(I + H^{(1)}/N)D(∞)*`; the full prediction is `e^{log_h_prefactor(N)}` times this.
    pub fn predict_h_scaled(&self, n: T, with_correction: bool) -> CMat<T> {
        let mut m = CMat::identity(self.r());
        if with_correction {
            m += &self.h1().scale_re(T::one() / n);
        }
        &(self.d_inf() * &m) * &self.d_inf().adjoint()
    }

    /// The full prediction, or `None` when the prefactor is not representable.
    pub fn predict_h(&self, n: T) -> Option<CMat<T>> {
        let e = self.log_h_prefactor(n).exp();
        if !e.is_finite() || e == T::zero() {
            return None;
        }
        Some(self.predict_h_scaled(n, true).scale_re(e))
    }
}

fn dist_to_interval<T: Real>(z: C<T>) -> T {
    let x = z.re.max(-T::one()).min(T::one());
    (z - x).norm()
}

/// `(4 + a²(2x²−1) + (4+a²) cos 2ψ) / (2(4+a²))` with the Hermite phase.
pub fn det_inner_2x2<T: Real>(a: T, n: T, x: T) -> T {
    let psi = hermite_phase(n, x);
    let a2 = a * a;
    let four = T::lit(4.0);
    (four + a2 * (T::lit(2.0) * x * x - T::one()) + (four + a2) * (T::lit(2.0) * psi).cos())
        / (T::lit(2.0) * (four + a2))
}

/// `N(x√(1−x²) − arccos x) + arcsin(x)/2`.
pub fn hermite_phase<T: Real>(n: T, x: T) -> T {
    n * (x * (T::one() - x * x).sqrt() - x.acos()) + x.asin() / T::lit(2.0)
}

/// `det D(∞) Re(e^{iψ} D_−(x)^{-1})` for the effective nilpotent matrix `alpha`, Hermite phase.
pub fn det_inner_numeric<T: Real>(f: &SzegoFactorization<T>, n: T, x: T) -> Result<T> {
    let dm = f.eval_d_minus(x)?;
    let inv = dm.inverse().ok_or(MvopError::SingularNorm(0))?;
    let ph = C::from_polar(T::one(), hermite_phase(n, x));
    Ok((&f.d_infinity * &inv.scale(ph).re_part()).det().re)
}

/// `points` equispaced samples on `(−1, 1)` (endpoints excluded) of the inner determinant.
pub fn detgrid<T: Real>(alpha: &[T], n: T, points: usize) -> Result<Vec<(T, T)>> {
    if alpha.is_empty() {
        return Err(MvopError::InvalidInput("detgrid needs r >= 2".into()));
    }
    if points == 0 {
        return Err(MvopError::InvalidInput("points must be positive".into()));
    }
    let xs: Vec<T> = (0..points).map(|k| -T::one() + T::lit(2.0) * T::of(k + 1) / T::of(points + 1)).collect();
    if alpha.len() == 1 {
        return Ok(xs.into_iter().map(|x| (x, det_inner_2x2(alpha[0], n, x))).collect());
    }
    let f = spectral_factorize(&NilpotentMatrix::new(alpha.to_vec()))?;
    xs.into_iter().map(|x| Ok((x, det_inner_numeric(&f, n, x)?))).collect()
}

/// Number of strict sign changes along the sampled values.
pub fn sign_changes<T: Real>(vals: &[T]) -> usize {
    let mut last = T::zero();
    let mut count = 0;
    for &v in vals {
        if v != T::zero() {
            if last != T::zero() && (v > T::zero()) != (last > T::zero()) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// Least-squares slope of `ln err` against `ln N`.
pub fn loglog_slope(ns: &[f64], errs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns.iter().zip(errs).filter(|(_, &e)| e > 0.0).map(|(&n, &e)| (n.ln(), e.ln())).collect();
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Errors of every prediction at one `N`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompareRow {
    pub n: usize,
    pub b_err: f64,
    pub c_err_leading: f64,
    pub c_err: f64,
    pub c_norm: f64,
    pub h_err_leading: f64,
    pub h_err: f64,
    pub outer_err: f64,
    pub inner_err: f64,
    pub edge_err: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub slopes: Vec<(String, f64)>,
}

pub const OUTER_Z: f64 = 2.0;
pub const INNER_X: f64 = 0.3;
pub const EDGE_X: f64 = 0.98;

/// `e^{−N g(z)} c^{−N} P_N(cz + d)`.
pub fn outer_lhs(ctx: &AsymptoticContext<f64>, fam: &MvopFamily<f64>, n: usize, z: C<f64>) -> Result<CMat<f64>> {
    let nf = n as f64;
    let g = ctx.eq.g(z)?;
    let c = ctx.eq.c();
    let p = fam.eval_p_scaled(n, z * c + ctx.eq.d(), nf * (g.re + c.ln()))?;
    Ok(p.scale(C::from_polar(1.0, -nf * g.im)))
}

/// `c^{−N} e^{−N(V(x)+ℓ)/2} P_N(cx + d)`.
pub fn inner_lhs(ctx: &AsymptoticContext<f64>, fam: &MvopFamily<f64>, n: usize, x: f64) -> Result<CMat<f64>> {
    let nf = n as f64;
    let c = ctx.eq.c();
    let v = ctx.eq.v_of(re(x)).re;
    let log_s = nf * c.ln() + nf * (v + ctx.eq.ell) / 2.0;
    fam.eval_p_scaled(n, cx(c * x + ctx.eq.d(), 0.0), log_s)
}

/// Direct-vs-predicted errors for each `N`. The family for `N` is computed with `n_max = N + 1`.
/// `n_max = None` uses `N + 1` for each `N`; otherwise it must exceed every `N`.
pub fn compare(
    w: &MatrixWeight<f64>,
    n_list: &[usize],
    n_max: Option<usize>,
    edge: bool,
    tol: f64,
    opts: &DirectOptions,
) -> Result<CompareReport> {
    let ctx = AsymptoticContext::new(w, tol)?;
    let mut rows = Vec::new();
    let dnorm = (ctx.d_inf() * &ctx.d_inf().adjoint()).norm_fro();
    for &n in n_list {
        if n == 0 {
            return Err(MvopError::InvalidInput("N must be positive".into()));
        }
        let nmax = match n_max {
            None => n + 1,
            Some(k) if k > n => k,
            Some(k) => return Err(MvopError::InvalidInput(format!("nmax {k} must exceed N={n}"))),
        };
        let nf = n as f64;
        let fam = compute_family_with(w, nf, nmax, opts)?;
        let bn = &fam.b[n];
        let cn = &fam.c[n];
        let b_err = (bn - &ctx.predict_b()).norm_fro();
        let lead_c = CMat::identity(ctx.r()).scale_re(ctx.eq.c() * ctx.eq.c() / 4.0);
        let c_err_leading = (cn - &lead_c).norm_fro();
        let c_err = (cn - &ctx.predict_c(nf)).norm_fro();
        let h_scaled = fam.h[n].scale_re((fam.log_scale - ctx.log_h_prefactor(nf)).exp());
        let h_err_leading = (&h_scaled - &ctx.predict_h_scaled(nf, false)).norm_fro() / dnorm;
        let h_err = (&h_scaled - &ctx.predict_h_scaled(nf, true)).norm_fro() / dnorm;

        let z = cx(OUTER_Z, 0.0);
        let ol = ctx.outer_leading(z)?;
        let outer_err = (&outer_lhs(&ctx, &fam, n, z)? - &ol).norm_fro() / ol.norm_fro();

        let il = ctx.inner_leading(INNER_X, nf)?;
        let envelope = 2f64.sqrt()
            * (1.0 - INNER_X * INNER_X).powf(-0.25)
            * ctx.d_inf().norm_fro()
            * ctx.szego.eval_d_minus(INNER_X)?.inverse().ok_or(MvopError::SingularNorm(n))?.norm_fro();
        let inner_err = (&inner_lhs(&ctx, &fam, n, INNER_X)? - &il).norm_fro() / envelope;

        let edge_err = if edge {
            let el = ctx.edge_leading(EDGE_X, nf)?;
            let lhs = inner_lhs(&ctx, &fam, n, EDGE_X)?.scale_re(nf.powf(-1.0 / 6.0));
            Some((&lhs - &el).norm_fro() / el.norm_fro())
        } else {
            None
        };
        log::info!("compare N={n}: C err {c_err:e}, H err {h_err:e}, outer {outer_err:e}, inner {inner_err:e}");
        rows.push(CompareRow {
            n,
            b_err,
            c_err_leading,
            c_err,
            c_norm: cn.norm_fro(),
            h_err_leading,
            h_err,
            outer_err,
            inner_err,
            edge_err,
        });
    }
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let col = |f: &dyn Fn(&CompareRow) -> f64| -> Vec<f64> { rows.iter().map(f).collect() };
    let mut slopes = vec![
        ("b".to_string(), loglog_slope(&ns, &col(&|r| r.b_err))),
        ("c_leading".to_string(), loglog_slope(&ns, &col(&|r| r.c_err_leading))),
        ("c".to_string(), loglog_slope(&ns, &col(&|r| r.c_err))),
        ("h_leading".to_string(), loglog_slope(&ns, &col(&|r| r.h_err_leading))),
        ("h".to_string(), loglog_slope(&ns, &col(&|r| r.h_err))),
        ("outer".to_string(), loglog_slope(&ns, &col(&|r| r.outer_err))),
        ("inner".to_string(), loglog_slope(&ns, &col(&|r| r.inner_err))),
    ];
    if edge {
        slopes.push(("edge".to_string(), loglog_slope(&ns, &col(&|r| r.edge_err.unwrap_or(f64::NAN)))));
    }
    Ok(CompareReport { rows, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Potential;

    fn ctx(alpha: Vec<f64>) -> AsymptoticContext<f64> {
        let r = alpha.len() + 1;
        let a = if alpha.is_empty() { NilpotentMatrix::zero(r) } else { NilpotentMatrix::new(alpha) };
        AsymptoticContext::new(&MatrixWeight::new(Potential::monomial(2), a), 1e-13).unwrap()
    }

    #[test]
    fn outer_tends_to_identity() {
        let c = ctx(vec![1.0]);
        let m = c.outer_leading(cx(1e7, 3e6)).unwrap();
        assert!((&m - &CMat::identity(2)).max_abs() < 1e-6);
        assert!(c.outer_leading(cx(0.5, 0.01)).is_err());
    }

    #[test]
    fn scalar_outer_reduces() {
        let c = ctx(vec![]);
        let z = cx(1.7, 0.4);
        let s = sqrt_z2m1(z);
        let want = ((z + s) / (s * 2.0)).sqrt();
        assert!((c.outer_leading(z).unwrap()[(0, 0)] - want).norm() < 1e-14);
        // also the negative real axis, where the factors have cancelling jumps
        let m = c.outer_leading(cx(-2.0, 0.0)).unwrap()[(0, 0)];
        let m2 = c.outer_leading(cx(-2.0, 1e-9)).unwrap()[(0, 0)];
        assert!((m - m2).norm() < 1e-8);
    }

    #[test]
    fn scalar_inner_is_plancherel_rotach() {
        let c = ctx(vec![]);
        let x = 0.4f64;
        let n = 12.0;
        let want = 2f64.sqrt() * (1.0 - x * x).powf(-0.25) * hermite_phase(n, x).cos();
        assert!((c.inner_leading(x, n).unwrap()[(0, 0)].re - want).abs() < 1e-12);
        assert!(c.inner_leading(0.95, n).is_err());
    }

    #[test]
    fn inner_phase_real_and_hermite() {
        let c = ctx(vec![1.0]);
        for k in 1..20 {
            let x = -0.95 + 0.1 * k as f64;
            assert!((c.inner_phase(x, 9.0) - hermite_phase(9.0, x)).abs() < 1e-12);
        }
        assert!((c.inner_phase(0.0, 6.0) + 3.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn inner_real_for_real_weight() {
        let c = ctx(vec![1.0]);
        assert!(c.inner_leading(0.3, 10.0).unwrap().max_imag() < 1e-13);
    }

    #[test]
    fn c1_closed_form() {
        for a in [0.5, 1.0, 2.0] {
            let c = ctx(vec![a]);
            let ae = 2f64.sqrt() * a;
            let k = ae * ae / (2.0 * (ae * ae + 4.0));
            let want = CMat::diag_real(&[-k, k]);
            assert!((&c.c1() - &want).max_abs() < 1e-7, "a={a}");
        }
        let c0 = ctx(vec![0.0]);
        assert!(c0.c1().max_abs() < 1e-12);
        assert!((c0.predict_c(10.0)[(0, 0)].re - 0.5).abs() < 1e-12);
        assert_eq!(c0.predict_b(), CMat::zeros(2));
    }

    #[test]
    fn h1_without_matrix_part() {
        let c = ctx(vec![0.0]);
        // h ≡ 4: each endpoint contributes 16/384
        let want = 2.0 * 16.0 / 384.0;
        assert!((&c.h1() - &CMat::identity(2).scale_re(want)).max_abs() < 1e-9);
        assert!((&c.h1_as_displayed() - &CMat::identity(2).scale_re(want)).max_abs() < 1e-9);
    }

    #[test]
    fn predict_h_scalar_leading() {
        let c = ctx(vec![]);
        let n = 4.0;
        let want = std::f64::consts::PI * 2f64.sqrt().powf(2.0 * n + 1.0) * (n * c.eq.ell).exp();
        let got = c.predict_h(n).unwrap()[(0, 0)].re;
        assert!((got / (want * (1.0 + 1.0 / 12.0 / n)) - 1.0).abs() < 1e-9);
        assert!(c.predict_h(1e6).is_none());
    }

    #[test]
    fn det_formula_values() {
        let a = 1.0f64;
        assert!((det_inner_2x2(a, 10.0, 0.0) - 0.8).abs() < 1e-12);
        assert!((det_inner_2x2(a, 11.0, 0.0) + 0.2).abs() < 1e-12);
        for k in 0..50 {
            let x = -0.98 + 0.04 * k as f64;
            let psi = hermite_phase(7.0, x);
            assert!((det_inner_2x2(0.0, 7.0, x) - psi.cos().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn det_numeric_matches_closed_form() {
        let f = spectral_factorize(&NilpotentMatrix::new(vec![1.0])).unwrap();
        for k in 1..10 {
            let x = -0.9 + 0.18 * k as f64;
            let d = det_inner_numeric(&f, 10.0, x).unwrap();
            assert!((d - det_inner_2x2(1.0, 10.0, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn detgrid_r3_is_bounded() {
        let g = detgrid(&[1.0f64, 1.0], 10.0, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert!(g.iter().all(|(x, v)| x.abs() < 1.0 && v.is_finite()));
        assert!(detgrid::<f64>(&[], 10.0, 10).is_err());
    }

    #[test]
    fn edge_is_finite_near_one() {
        let c = ctx(vec![1.0]);
        let m = c.edge_leading(1.0 - 1e-9, 20.0).unwrap();
        assert!(m.max_abs().is_finite() && m.max_abs() > 0.0);
        assert!(c.edge_leading(0.5, 20.0).is_err());
    }

    #[test]
    fn slope_fit() {
        let ns = [8.0, 16.0, 32.0];
        let e: Vec<f64> = ns.iter().map(|n: &f64| 3.0 * n.powf(-1.5)).collect();
        assert!((loglog_slope(&ns, &e) + 1.5).abs() < 1e-12);
        assert_eq!(sign_changes(&[1.0, -1.0, 0.0, -2.0, 3.0]), 2);
    }

    #[test]
    fn compare_scalar_hermite() {
        let w = MatrixWeight::new(Potential::monomial(2), NilpotentMatrix::zero(1));
        let rep = compare(&w, &[8, 16], None, false, 1e-13, &DirectOptions::default()).unwrap();
        assert_eq!(rep.rows.len(), 2);
        for r in &rep.rows {
            assert!(r.b_err < 1e-10);
            assert!(r.c_err < 1e-10);
            assert!(r.outer_err < 0.2 && r.inner_err < 0.2);
        }
    }
}
