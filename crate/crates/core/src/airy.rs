//! Airy function `Ai(x)` on `|x| ≤ 20` and its negative zeros.
//!
//! Evaluation uses the Maclaurin pair `Ai = c₁f − c₂g` for `|x| ≤ 8` and the
//! standard large-argument expansions beyond, each summed until its terms
//! stop decreasing. The series is summed in double-double arithmetic: its
//! terms reach ~1e5 near `|x| = 8`, which would otherwise leave rounding
//! noise of ~1e−11 in the result.

use alloc::vec::Vec;
use libm::{cos, exp, fma, pow, sin, sqrt};

use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`airy_ai`].
pub const AIRY_RANGE: f64 = 20.0;

/// Switch point between the power series and the asymptotic expansions.
pub const SERIES_LIMIT: f64 = 8.0;

/// Number of zeros [`airy_zero`] supports.
pub const MAX_ZERO_INDEX: usize = 10;

/// `Ai(0) = 3^{−2/3}/Γ(2/3)`, as a double-double.
const AI0: Dd = Dd(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// `−Ai′(0) = 3^{−1/3}/Γ(1/3)`, as a double-double.
const AIP0: Dd = Dd(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

const PI: f64 = core::f64::consts::PI;

pub fn airy_ai(x: f64) -> Result<f64> {
    if !(x.abs() <= AIRY_RANGE) {
        return Err(Error::Domain { what: "airy_ai", value: x });
    }
    Ok(if x > SERIES_LIMIT {
        asymptotic_positive(x)
    } else if x < -SERIES_LIMIT {
        asymptotic_negative(-x)
    } else {
        maclaurin(x)
    })
}

pub(crate) fn maclaurin(x: f64) -> f64 {
    let x3 = Dd::product(x, x).mul_f64(x);
    let (mut f, mut g) = (Dd(1.0, 0.0), Dd(x, 0.0));
    let (mut tf, mut tg) = (f, g);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf = tf.mul(x3).div_f64((k3 - 1.0) * k3);
        tg = tg.mul(x3).div_f64(k3 * (k3 + 1.0));
        f = f.add(tf);
        g = g.add(tg);
        if tf.0.abs() <= 1e-33 * f.0.abs().max(1.0) && tg.0.abs() <= 1e-33 * g.0.abs().max(1.0) {
            break;
        }
    }
    AI0.mul(f).add(AIP0.mul(g).neg()).to_f64()
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Dd(s, b - (s - a))
    }

    fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        Dd(p, fma(a, b, -p))
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.0, o.0);
        Self::quick_two_sum(s.0, s.1 + self.1 + o.1)
    }

    fn neg(self) -> Self {
        Dd(-self.0, -self.1)
    }

    fn mul(self, o: Self) -> Self {
        let p = Self::product(self.0, o.0);
        Self::quick_two_sum(p.0, p.1 + self.0 * o.1 + self.1 * o.0)
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = Self::product(self.0, b);
        Self::quick_two_sum(p.0, p.1 + self.1 * b)
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.0 / b;
        let r = self.add(Self::product(q1, b).neg());
        let q2 = r.0 / b;
        Self::quick_two_sum(q1, q2)
    }

    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
}

/// `u_k = Γ(3k + ½) / (54ᵏ k! Γ(k + ½))` for `k = 0..count`.
fn asymptotic_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    let mut value = 1.0;
    u.push(value);
    for k in 1..count {
        let kf = k as f64;
        value *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0));
        u.push(value);
    }
    u
}

pub(crate) fn asymptotic_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * pow(x, 1.5);
    let u = asymptotic_coefficients(40);
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut term = 1.0;
    for (k, coeff) in u.iter().enumerate() {
        if k > 0 {
            term = -term / zeta;
        }
        let t = coeff * term;
        if t.abs() >= prev {
            break;
        }
        prev = t.abs();
        sum += t;
    }
    exp(-zeta) / (2.0 * sqrt(PI) * pow(x, 0.25)) * sum
}

/// `Ai(−a)` for large positive `a`.
pub(crate) fn asymptotic_negative(a: f64) -> f64 {
    let zeta = 2.0 / 3.0 * pow(a, 1.5);
    let u = asymptotic_coefficients(40);
    let (mut p, mut q) = (0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0..u.len() / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let tp = sign * u[2 * k] / pow(zeta, (2 * k) as f64);
        let tq = sign * u[2 * k + 1] / pow(zeta, (2 * k + 1) as f64);
        let size = tp.abs().max(tq.abs());
        if size >= prev {
            break;
        }
        prev = size;
        p += tp;
        q += tq;
    }
    let phase = zeta + PI / 4.0;
    (sin(phase) * p - cos(phase) * q) / (sqrt(PI) * pow(a, 0.25))
}

/// The `n`-th zero of `Ai` on the negative axis, `1 ≤ n ≤ 10`.
///
/// Zeros are bracketed by sign changes on a 0.05 grid walking from 0
/// towards −∞, then refined by bisection to adjacent floating-point values.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 || n > MAX_ZERO_INDEX {
        return Err(Error::Domain { what: "airy_zero", value: n as f64 });
    }
    const STEP: f64 = 0.05;
    let mut found = 0;
    let mut hi = 0.0;
    let mut f_hi = airy_ai(hi)?;
    loop {
        let lo = hi - STEP;
        let f_lo = airy_ai(lo)?;
        if f_lo == 0.0 {
            found += 1;
            if found == n {
                return Ok(lo);
            }
        } else if f_lo.signum() != f_hi.signum() && f_hi != 0.0 {
            found += 1;
            if found == n {
                return bisect(lo, hi, f_lo);
            }
        }
        hi = lo;
        f_hi = f_lo;
    }
}

fn bisect(mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = airy_ai(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // whichever end has the smaller residual
    Ok(if airy_ai(lo)?.abs() <= airy_ai(hi)?.abs() { lo } else { hi })
}

/// The first few negative zeros of `Ai`, most shallow first.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryZeroTable {
    zeros: Vec<f64>,
}

impl AiryZeroTable {
    pub fn new(count: usize) -> Result<Self> {
        if count > MAX_ZERO_INDEX {
            return Err(Error::Domain { what: "AiryZeroTable::new", value: count as f64 });
        }
        let zeros = (1..=count).map(airy_zero).collect::<Result<Vec<_>>>()?;
        Ok(Self { zeros })
    }

    /// 1-based lookup.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }
}
