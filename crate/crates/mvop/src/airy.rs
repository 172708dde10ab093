//! Airy function `Ai` and its derivative on the real line.

use crate::scalar::Real;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;

/// Asymptotic-series coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryCoeffs {
    pub k: usize,
    pub u: f64,
    pub v: f64,
}

/// `u_k = (2k+1)(2k+3)⋯(6k−1) / (216^k k!)`, `v_k = (6k+1)/(1−6k) u_k`.
pub fn uk_coeffs(k: usize) -> AiryCoeffs {
    let mut u = 1.0f64;
    for j in 1..=k {
        let jf = j as f64;
        u *= (6.0 * jf - 5.0) * (6.0 * jf - 3.0) * (6.0 * jf - 1.0) / ((2.0 * jf - 1.0) * 216.0 * jf);
    }
    let kf = k as f64;
    let v = if k == 0 { 1.0 } else { (6.0 * kf + 1.0) / (1.0 - 6.0 * kf) * u };
    AiryCoeffs { k, u, v }
}

pub fn airy_ai<T: Real>(x: T) -> T {
    T::lit(airy_pair(x.to_f64()).0)
}

pub fn airy_ai_prime<T: Real>(x: T) -> T {
    T::lit(airy_pair(x.to_f64()).1)
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x.abs() <= 2.0 {
        maclaurin(x)
    } else if x > 8.0 {
        decaying(x)
    } else if x > 2.0 {
        march(8.0, decaying(8.0), x)
    } else if x >= -12.0 {
        march(-2.0, maclaurin(-2.0), x)
    } else {
        oscillatory(-x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = Σ x^{3k}/…, g = Σ x^{3k+1}/…, with their derivatives
    let (mut f, mut g, mut fp, mut gp) = (1.0, x, 0.0, 1.0);
    let (mut tf, mut tg, mut tfp, mut tgp) = (1.0, x, x * x / 2.0, 1.0);
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tgp *= x3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        if k >= 2 {
            tfp *= x3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let scale = f.abs().max(g.abs()).max(1.0);
        if tf.abs().max(tg.abs()).max(tfp.abs()).max(tgp.abs()) < 1e-17 * scale {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

fn asymptotic_sums(zeta: f64, alternate: bool, even_odd: bool) -> [f64; 4] {
    // [Σu_k, Σv_k] or split by parity as [u_even, u_odd, v_even, v_odd]
    let mut out = [0.0; 4];
    let mut prev = f64::INFINITY;
    let mut p = 1.0;
    for k in 0..60 {
        let c = uk_coeffs(k);
        let sign = if alternate && (if even_odd { (k / 2) % 2 == 1 } else { k % 2 == 1 }) { -1.0 } else { 1.0 };
        let tu = sign * c.u * p;
        let tv = sign * c.v * p;
        if tu.abs() > prev {
            break;
        }
        prev = tu.abs();
        let slot = if even_odd { k % 2 } else { 0 };
        out[slot] += tu;
        out[2 + slot] += tv;
        if tu.abs() < 1e-18 {
            break;
        }
        p /= zeta;
    }
    out
}

fn decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let s = asymptotic_sums(zeta, true, false);
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pre * x.powf(-0.25) * s[0], -pre * x.powf(0.25) * s[2])
}

fn oscillatory(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let s = asymptotic_sums(zeta, true, true);
    let th = zeta + std::f64::consts::FRAC_PI_4;
    let (sn, cs) = th.sin_cos();
    let rp = 1.0 / std::f64::consts::PI.sqrt();
    let ai = rp * z.powf(-0.25) * (sn * s[0] - cs * s[1]);
    let aip = rp * z.powf(0.25) * (-cs * s[2] - sn * s[3]);
    (ai, aip)
}

/// Taylor stepping of `y'' = x y` from `start` to `x`.
fn march(start: f64, seed: (f64, f64), x: f64) -> (f64, f64) {
    let (mut y, mut yp) = seed;
    let steps = ((x - start).abs() / 0.5).ceil() as usize;
    for i in 0..steps {
        let x0 = start + (x - start) * (i as f64 / steps as f64);
        let x1 = start + (x - start) * ((i + 1) as f64 / steps as f64);
        (y, yp) = taylor_step(x0, y, yp, x1 - x0);
    }
    (y, yp)
}

fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // a_{k+2} (k+1)(k+2) = x0 a_k + a_{k−1}
    let mut a = vec![y, yp];
    let mut val = y + yp * h;
    let mut der = yp;
    let mut hp = h;
    for k in 0..60 {
        let prev = if k >= 1 { a[k - 1] } else { 0.0 };
        let next = (x0 * a[k] + prev) / (((k + 1) * (k + 2)) as f64);
        a.push(next);
        let n = k + 2;
        der += n as f64 * next * hp;
        hp *= h;
        val += next * hp;
        if next.abs() * hp.abs() < 1e-19 && k > 4 {
            break;
        }
    }
    (val, der)
}
