//! Monic MVOPs by block Stieltjes iteration on a composite Gauss–Legendre grid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use crate::equilibrium::SupportInterval;
use crate::error::{MvopError, Result};
use crate::linalg::CMat;
use crate::quadrature::gauss_legendre;
use crate::scalar::{cx, re, Real, C};
use crate::weight::{exp_nilpotent, MatrixWeight, Potential};
use rayon::prelude::*;

const PANEL_POINTS: usize = 32;
const CHUNK: usize = 128;
const TAIL: f64 = 45.0;

/// Quadrature nodes with the scalar factor `e^{−N(v(x) − v_ref)}` folded into the weights.
#[derive(Clone, Debug)]
pub struct QuadratureGrid<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub lo: T,
    pub hi: T,
    pub n: T,
    /// True integrals are `e^{log_scale}` times grid sums.
    pub log_scale: T,
}

impl<T: Real> QuadratureGrid<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k W(x_k)` scaled back by `e^{log_scale}`.
    pub fn integrate_weight(&self, w: &MatrixWeight<T>) -> CMat<T> {
        let mut acc = CMat::zeros(w.r());
        for (&x, &wk) in self.nodes.iter().zip(&self.weights) {
            acc += &w.eval_m(re(x)).scale_re(wk);
        }
        acc.scale_re(self.log_scale.exp())
    }
}

fn cut_profile<T: Real>(w: &MatrixWeight<T>, n: T, n_max: usize, supp: &SupportInterval<T>, x: T) -> T {
    let u = (x - supp.d).abs() / supp.c;
    n * w.potential.eval(x)
        - T::lit(2.0) * T::of(n_max) * (T::one() + T::lit(2.0) * u).ln()
        - (T::one() + w.eval_m(re(x)).norm_fro()).ln()
}

fn find_cut<T: Real>(w: &MatrixWeight<T>, n: T, n_max: usize, supp: &SupportInterval<T>, dir: T) -> T {
    let start = supp.d + dir * supp.c;
    let target = cut_profile(w, n, n_max, supp, start) + T::lit(TAIL);
    let step = supp.c * T::lit(0.05);
    let mut inner = start;
    let mut outer = start + dir * step;
    let mut k = 1;
    while cut_profile(w, n, n_max, supp, outer) < target {
        inner = outer;
        k += 1;
        outer = start + dir * step * T::of(k) * T::of(k).sqrt();
        if k > 100_000 {
            break;
        }
    }
    for _ in 0..80 {
        let mid = (inner + outer) / T::lit(2.0);
        if cut_profile(w, n, n_max, supp, mid) < target {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    outer
}

/// Composite 32-point Gauss–Legendre grid on `[x_−, x_+]`, with panel width `c / panels_per_unit`.
/// The cut `x_±` is where `N v(x) − 2 n_max log(1 + 2|x−d|/c) − log(1 + ‖M(x)‖)` exceeds its value at
/// `d ± c` by 45.
pub fn build_grid<T: Real>(
    w: &MatrixWeight<T>,
    supp: &SupportInterval<T>,
    n: T,
    panels_per_unit: usize,
    n_max: usize,
) -> Result<QuadratureGrid<T>> {
    if !(n > T::zero()) {
        return Err(MvopError::InvalidInput("N must be positive".into()));
    }
    if panels_per_unit == 0 {
        return Err(MvopError::InvalidInput("panels_per_unit must be positive".into()));
    }
    let lo = find_cut(w, n, n_max, supp, -T::one());
    let hi = find_cut(w, n, n_max, supp, T::one());
    let width = supp.c / T::of(panels_per_unit);
    let panels = ((hi - lo) / width).ceil().to_f64() as usize;
    let panels = panels.max(1);
    let h = (hi - lo) / T::of(panels);
    let rule = gauss_legendre::<T>(PANEL_POINTS);
    let v_ref = w.potential.eval(supp.d);
    let log_scale = if (n * v_ref).abs() > T::lit(300.0) { -n * v_ref } else { T::zero() };
    let mut nodes = Vec::with_capacity(panels * PANEL_POINTS);
    let mut weights = Vec::with_capacity(panels * PANEL_POINTS);
    for p in 0..panels {
        let a = lo + h * T::of(p);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = a + h * (t + T::one()) / T::lit(2.0);
            let e = -n * w.potential.eval(x) - log_scale;
            let scalar = if e < T::min_positive_value().ln() { T::zero() } else { e.exp() };
            let wk = wt * h / T::lit(2.0) * scalar;
            if wk > T::zero() {
                nodes.push(x);
                weights.push(wk);
            }
        }
    }
    Ok(QuadratureGrid { nodes, weights, lo, hi, n, log_scale })
}

/// Recurrence data of the monic family for degrees `0..n_max`.
#[derive(Clone, Debug)]
pub struct MvopFamily<T: Real> {
    pub r: usize,
    pub n: T,
    pub n_max: usize,
    /// `H_n` divided by `e^{log_scale}`.
    pub h: Vec<CMat<T>>,
    pub log_scale: T,
    pub b: Vec<CMat<T>>,
    /// `C_0` is stored as zero.
    pub c: Vec<CMat<T>>,
    /// `X_{n,n−1}` for `n = 0..=n_max`.
    pub x_sub: Vec<CMat<T>>,
    /// `max(‖⟨P_n, P_{n−1}⟩‖, ‖⟨P_n, P_{n−2}⟩‖) / ‖H_n‖`.
    pub orth_residual: Vec<T>,
}

/// Options for [`compute_family_with`].
#[derive(Clone, Copy, Debug)]
pub struct DirectOptions {
    pub panels_per_unit: usize,
    /// `0` uses the global rayon pool.
    pub threads: usize,
    pub orth_tol: f64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions { panels_per_unit: 10, threads: 0, orth_tol: 1e-6 }
    }
}

struct Sums<T: Real> {
    h: CMat<T>,
    xh: CMat<T>,
    prev: CMat<T>,
    prev2: CMat<T>,
}

fn chunk_sums<T: Real>(
    nodes: &[T],
    cur: &[CMat<T>],
    prev: Option<&[CMat<T>]>,
    prev2: Option<&[CMat<T>]>,
    r: usize,
) -> Sums<T> {
    let mut s = Sums { h: CMat::zeros(r), xh: CMat::zeros(r), prev: CMat::zeros(r), prev2: CMat::zeros(r) };
    for (k, rk) in cur.iter().enumerate() {
        let ra = rk.adjoint();
        let g = rk * &ra;
        s.xh += &g.scale_re(nodes[k]);
        s.h += &g;
        if let Some(p) = prev {
            s.prev += &(rk * &p[k].adjoint());
        }
        if let Some(p) = prev2 {
            s.prev2 += &(rk * &p[k].adjoint());
        }
    }
    s
}

fn reduce_sums<T: Real>(
    nodes: &[T],
    cur: &[CMat<T>],
    prev: Option<&[CMat<T>]>,
    prev2: Option<&[CMat<T>]>,
    r: usize,
) -> Sums<T> {
    let parts: Vec<Sums<T>> = (0..cur.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|i| {
            let a = i * CHUNK;
            let b = (a + CHUNK).min(cur.len());
            chunk_sums(&nodes[a..b], &cur[a..b], prev.map(|p| &p[a..b]), prev2.map(|p| &p[a..b]), r)
        })
        .collect();
    let mut out = Sums { h: CMat::zeros(r), xh: CMat::zeros(r), prev: CMat::zeros(r), prev2: CMat::zeros(r) };
    for p in parts {
        out.h += &p.h;
        out.xh += &p.xh;
        out.prev += &p.prev;
        out.prev2 += &p.prev2;
    }
    out
}

fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + &m.adjoint()).scale_re(T::lit(0.5))
}

/// Runs the recurrence on `R_n(x_k) = P_n(x_k) e^{A x_k} √w_k`; `visit` sees every degree's values.
fn stieltjes<T: Real>(
    w: &MatrixWeight<T>,
    grid: &QuadratureGrid<T>,
    n_max: usize,
    orth_tol: T,
    mut visit: impl FnMut(usize, &[CMat<T>]),
) -> Result<MvopFamily<T>> {
    let r = w.r();
    let mut cur: Vec<CMat<T>> =
        grid.nodes.iter().zip(&grid.weights).map(|(&x, &wk)| exp_nilpotent(&w.a, re(x)).scale_re(wk.sqrt())).collect();
    let mut prev: Option<Vec<CMat<T>>> = None;
    let mut prev2: Option<Vec<CMat<T>>> = None;
    let mut fam = MvopFamily {
        r,
        n: grid.n,
        n_max,
        h: Vec::with_capacity(n_max),
        log_scale: grid.log_scale,
        b: Vec::with_capacity(n_max),
        c: Vec::with_capacity(n_max),
        x_sub: vec![CMat::zeros(r)],
        orth_residual: Vec::with_capacity(n_max),
    };
    for deg in 0..n_max {
        visit(deg, &cur);
        let s = reduce_sums(&grid.nodes, &cur, prev.as_deref(), prev2.as_deref(), r);
        let h = hermitize(&s.h);
        let sv = h.svd().s;
        let smax = sv[0];
        let smin = *sv.last().unwrap();
        if !(smin > smax * T::epsilon() * T::lit(10.0)) || !smin.is_finite() {
            return Err(MvopError::SingularNorm(deg));
        }
        let hn = h.norm_fro();
        let resid = s.prev.norm_fro().max(s.prev2.norm_fro()) / hn;
        if resid > orth_tol {
            return Err(MvopError::OrthogonalityLoss { degree: deg, residual: resid.to_f64() });
        }
        let b = s.xh.solve_right(&h).ok_or(MvopError::SingularNorm(deg))?;
        let c = if deg == 0 {
            CMat::zeros(r)
        } else {
            h.solve_right(&fam.h[deg - 1]).ok_or(MvopError::SingularNorm(deg))?
        };
        let next_x = &fam.x_sub[deg] - &b;
        let next: Vec<CMat<T>> = grid
            .nodes
            .par_iter()
            .enumerate()
            .map(|(k, &x)| {
                let mut v = &cur[k].scale_re(x) - &(&b * &cur[k]);
                if let Some(p) = &prev {
                    v -= &(&c * &p[k]);
                }
                v
            })
            .collect();
        fam.h.push(h);
        fam.b.push(b);
        fam.c.push(c);
        fam.x_sub.push(next_x);
        fam.orth_residual.push(resid);
        prev2 = prev.take();
        prev = Some(std::mem::replace(&mut cur, next));
    }
    Ok(fam)
}

fn run_in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("thread pool unavailable ({e}); using the global pool");
            f()
        }
    }
}

/// Degrees `0..n_max` of the monic family, on a grid fitted to `n_max`.
pub fn compute_family<T: Real>(w: &MatrixWeight<T>, n: T, n_max: usize) -> Result<MvopFamily<T>> {
    compute_family_with(w, n, n_max, &DirectOptions::default())
}

pub fn compute_family_with<T: Real>(
    w: &MatrixWeight<T>,
    n: T,
    n_max: usize,
    opts: &DirectOptions,
) -> Result<MvopFamily<T>> {
    if n_max == 0 {
        return Err(MvopError::InvalidInput("n_max must be at least 1".into()));
    }
    let supp = rough_support(&w.potential)?;
    let grid = build_grid(w, &supp, n, opts.panels_per_unit, n_max)?;
    log::debug!("direct grid: {} nodes on [{}, {}]", grid.len(), grid.lo, grid.hi);
    run_in_pool(opts.threads, || stieltjes(w, &grid, n_max, T::lit(opts.orth_tol), |_, _| {}))
}

/// MRS interval of `v`, or a crude coefficient bound when the solve fails.
fn rough_support<T: Real>(v: &Potential<T>) -> Result<SupportInterval<T>> {
    match crate::equilibrium::solve_mrs(v, T::lit(1e-10).max(T::epsilon() * T::lit(1e3))) {
        Ok(s) => Ok(s),
        Err(_) => {
            let bound = v.coeffs().iter().rev().skip(1).fold(T::one(), |m, c| m.max(c.abs())) + T::one();
            Ok(SupportInterval::from_cd(bound, T::zero()))
        }
    }
}

/// `max_{m<n≤n_max} ‖⟨P_n, P_m⟩‖ / ‖H_n‖`, by rerunning the recurrence on the same grid.
pub fn full_orthogonality_defect<T: Real>(w: &MatrixWeight<T>, n: T, n_max: usize, opts: &DirectOptions) -> Result<T> {
    let supp = rough_support(&w.potential)?;
    let grid = build_grid(w, &supp, n, opts.panels_per_unit, n_max + 1)?;
    let mut store: Vec<Vec<CMat<T>>> = Vec::new();
    run_in_pool(opts.threads, || stieltjes(w, &grid, n_max + 1, T::one(), |_, vals| store.push(vals.to_vec())))?;
    let r = w.r();
    let mut worst = T::zero();
    for nn in 1..store.len() {
        let hn = store[nn].iter().fold(CMat::zeros(r), |acc, x| &acc + &(x * &x.adjoint())).norm_fro();
        for m in 0..nn {
            let ip = store[nn].iter().zip(&store[m]).fold(CMat::zeros(r), |acc, (a, b)| &acc + &(a * &b.adjoint()));
            worst = worst.max(ip.norm_fro() / hn);
        }
    }
    Ok(worst)
}

impl<T: Real> MvopFamily<T> {
    /// `H_n` including the grid's scale factor.
    pub fn h_true(&self, n: usize) -> Result<CMat<T>> {
        self.check(n, self.n_max - 1)?;
        Ok(self.h[n].scale_re(self.log_scale.exp()))
    }

    fn check(&self, n: usize, max: usize) -> Result<()> {
        if n > max {
            return Err(MvopError::DegreeOutOfRange { n, max });
        }
        Ok(())
    }

    /// `P_n(z)` by forward recurrence.
    pub fn eval_p(&self, n: usize, z: C<T>) -> Result<CMat<T>> {
        self.check(n, self.n_max)?;
        let id = CMat::identity(self.r);
        let mut p_prev = CMat::zeros(self.r);
        let mut p = id.clone();
        for k in 0..n {
            let mut next = &p.scale(z) - &(&self.b[k] * &p);
            if k > 0 {
                next -= &(&self.c[k] * &p_prev);
            }
            p_prev = p;
            p = next;
        }
        Ok(p)
    }

    /// `e^{−s} P_n(z)`, with the scale removed one step at a time to avoid overflow.
    pub fn eval_p_scaled(&self, n: usize, z: C<T>, log_scale: T) -> Result<CMat<T>> {
        self.check(n, self.n_max)?;
        if n == 0 {
            return Ok(CMat::identity(self.r).scale_re((-log_scale).exp()));
        }
        let f = (-log_scale / T::of(n)).exp();
        let mut p_prev = CMat::zeros(self.r);
        let mut p = CMat::identity(self.r);
        for k in 0..n {
            let mut next = &p.scale(z) - &(&self.b[k] * &p);
            if k > 0 {
                next -= &(&self.c[k] * &p_prev.scale_re(f));
            }
            p_prev = p;
            p = next.scale_re(f);
        }
        Ok(p)
    }

    /// `(Y⁽¹⁾₁₁, Y⁽¹⁾₁₂, Y⁽¹⁾₂₁, Y⁽²⁾₁₂)` built from the recurrence data.
    pub fn y_blocks(&self, n: usize) -> Result<YBlocks<T>> {
        if n == 0 || n + 1 > self.n_max {
            return Err(MvopError::DegreeOutOfRange { n, max: self.n_max.saturating_sub(1) });
        }
        let two_pi_i = cx(T::zero(), T::lit(2.0) * T::PI());
        let inv = C::<T>::new(T::one(), T::zero()) / two_pi_i;
        let hn = self.h_true(n)?;
        let hm = self.h_true(n - 1)?;
        let hm_inv = hm.inverse().ok_or(MvopError::SingularNorm(n - 1))?;
        Ok(YBlocks {
            y1_11: self.x_sub[n].clone(),
            y1_12: hn.scale(-inv),
            y1_21: hm_inv.scale(-two_pi_i),
            y2_12: (&hn * &self.x_sub[n + 1].adjoint()).scale(inv),
        })
    }

    /// `‖(Y⁽¹⁾₁₁ − Y⁽²⁾₁₂* (Y⁽¹⁾₁₂)^{-1}) − (X_{n,n−1} − X_{n+1,n})‖`.
    pub fn verify_b_reformulation(&self, n: usize) -> Result<T> {
        let y = self.y_blocks(n)?;
        let y12_inv = y.y1_12.inverse().ok_or(MvopError::SingularNorm(n))?;
        let lhs = &y.y1_11 - &(&y.y2_12.adjoint() * &y12_inv);
        let rhs = &self.x_sub[n] - &self.x_sub[n + 1];
        Ok((&lhs - &rhs).norm_fro())
    }

    /// `max_n ‖C_n − H_n H_{n−1}^{-1}‖ / ‖C_n‖` and `max_n` Hermitian defect of `H_n` relative to `‖H_n‖`.
    pub fn consistency(&self) -> (T, T) {
        let mut cdef = T::zero();
        let mut hdef = T::zero();
        for n in 0..self.h.len() {
            hdef = hdef.max(self.h[n].hermitian_defect() / self.h[n].norm_fro());
            if n > 0 {
                let y = self.h_ratio(n);
                cdef = cdef.max((&self.c[n] - &y).norm_fro() / self.c[n].norm_fro());
            }
        }
        (cdef, hdef)
    }

    fn h_ratio(&self, n: usize) -> CMat<T> {
        let inv = self.h[n - 1].inverse().unwrap_or_else(|| CMat::zeros(self.r));
        &self.h[n] * &inv
    }
}

#[derive(Clone, Debug)]
pub struct YBlocks<T: Real> {
    pub y1_11: CMat<T>,
    pub y1_12: CMat<T>,
    pub y1_21: CMat<T>,
    pub y2_12: CMat<T>,
}

/// Largest absolute change of `B_n`, `C_n`, `H_n` (relative to their norms) when the panel count doubles.
pub fn grid_doubling_change<T: Real>(w: &MatrixWeight<T>, n: T, n_max: usize, panels_per_unit: usize) -> Result<T> {
    let o1 = DirectOptions { panels_per_unit, ..Default::default() };
    let o2 = DirectOptions { panels_per_unit: 2 * panels_per_unit, ..Default::default() };
    let a = compute_family_with(w, n, n_max, &o1)?;
    let b = compute_family_with(w, n, n_max, &o2)?;
    let rel = |x: &CMat<T>, y: &CMat<T>| {
        let s = x.norm_fro().max(y.norm_fro());
        if s == T::zero() {
            T::zero()
        } else {
            (x - y).norm_fro() / s
        }
    };
    let mut worst = T::zero();
    for k in 0..n_max {
        worst = worst.max(rel(&a.h[k], &b.h[k]));
        worst = worst.max(rel(&a.c[k], &b.c[k]));
        let bs = a.b[k].norm_fro().max(T::one());
        worst = worst.max((&a.b[k] - &b.b[k]).norm_fro() / bs);
    }
    Ok(worst)
}
