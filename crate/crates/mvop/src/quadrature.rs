//! Gauss rules on `[−1, 1]`.

use crate::scalar::Real;

/// Nodes ascending with matching positive weights.
#[derive(Clone, Debug)]
pub struct Rule<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule<T> {
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre by Newton iteration on the three-term recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> Rule<T> {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (T::PI() * (T::of(i) + T::lit(0.75)) / (T::of(n) + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, d) = legendre_and_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    Rule { nodes, weights }
}

fn legendre_and_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::of(k);
        let p2 = ((T::of(2 * k - 1)) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = T::of(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Gauss rule for `∫ f(x) √(1−x²) dx` (Chebyshev of the second kind).
pub fn gauss_chebyshev2<T: Real>(n: usize) -> Rule<T> {
    let h = T::PI() / T::of(n + 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let th = T::of(k) * h;
        nodes.push(th.cos());
        let s = th.sin();
        weights.push(h * s * s);
    }
    Rule { nodes, weights }
}

/// Gauss–Jacobi rule for `∫ f(x) (1−x)^α (1+x)^β dx` via Golub–Welsch.
pub fn gauss_jacobi<T: Real>(n: usize, alpha: T, beta: T) -> Rule<T> {
    assert!(n >= 1);
    assert!(alpha > -T::one() && beta > -T::one());
    let ab = alpha + beta;
    let two = T::lit(2.0);
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n];
    for k in 0..n {
        let kf = T::of(k);
        let s = two * kf + ab;
        diag[k] = if k == 0 { (beta - alpha) / (ab + two) } else { (beta * beta - alpha * alpha) / (s * (s + two)) };
        if k + 1 < n {
            let j = kf + T::one();
            let s = two * j + ab;
            let num = T::lit(4.0) * j * (j + alpha) * (j + beta) * (j + ab);
            let den = s * s * (s + T::one()) * (s - T::one());
            off[k] = (num / den).sqrt();
        }
    }
    let mu0 = (ln_gamma((alpha + T::one()).to_f64()) + ln_gamma((beta + T::one()).to_f64())
        - ln_gamma((ab + two).to_f64()))
    .exp()
        * 2f64.powf((ab + T::one()).to_f64());
    let (vals, first) = symmetric_tridiagonal_eigen(diag, off);
    let mut pairs: Vec<(T, T)> = vals.into_iter().zip(first).map(|(x, z)| (x, T::lit(mu0) * z * z)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix
/// (`off[k]` couples `k` and `k+1`), by implicit QL with Wilkinson shifts.
pub fn symmetric_tridiagonal_eigen<T: Real>(mut d: Vec<T>, mut e: Vec<T>) -> (Vec<T>, Vec<T>) {
    let n = d.len();
    let mut z = vec![T::zero(); n];
    if n == 0 {
        return (d, z);
    }
    z[0] = T::one();
    e.resize(n, T::zero());
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    (d, z)
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre::<f64>(8);
        for k in 0..16 {
            let got = r.integrate(|x| x.powi(k));
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_high_order() {
        let r = gauss_legendre::<f64>(32);
        let got = r.integrate(|x| x.exp());
        assert!((got - (1f64.exp() - (-1f64).exp())).abs() < 1e-14);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn chebyshev2_semicircle_moments() {
        let r = gauss_chebyshev2::<f64>(10);
        assert!((r.integrate(|_| 1.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((r.integrate(|x| x * x) - std::f64::consts::PI / 8.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_matches_chebyshev_kinds() {
        // (1+x)^{1/2}(1-x)^{-1/2}: ∫ = π, ∫ x = π/2
        let r = gauss_jacobi::<f64>(6, -0.5, 0.5);
        assert!((r.integrate(|_| 1.0) - std::f64::consts::PI).abs() < 1e-13);
        assert!((r.integrate(|x| x) - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        let r = gauss_jacobi::<f64>(6, 0.5, -0.5);
        assert!((r.integrate(|x| x) + std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        let r = gauss_jacobi::<f64>(12, 0.0, 0.0);
        let l = gauss_legendre::<f64>(12);
        for (a, b) in r.nodes.iter().zip(&l.nodes) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_general_exponents() {
        // ∫ (1-x)^2 (1+x)^3 dx over [-1,1] = 2^6 Γ(3)Γ(4)/Γ(7) = 64·2·6/720
        let r = gauss_jacobi::<f64>(5, 2.0, 3.0);
        assert!((r.integrate(|_| 1.0) - 64.0 * 12.0 / 720.0).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_values() {
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn f32_rules() {
        let r = gauss_legendre::<f32>(6);
        assert!((r.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-6);
    }
}
