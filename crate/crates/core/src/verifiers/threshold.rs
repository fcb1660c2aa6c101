use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_f64, in_unit_interval, show, to_f64, Rational};

const LN_2: f64 = std::f64::consts::LN_2;

/// A significance level `base · 2^(-halvings)`.
///
/// Disjunctions split α into `α/2^i`; keeping the exponent separate lets
/// deep indices stay exact and keeps `ln(1/α)` finite far past the range of
/// `f64`.
#[derive(Clone, Debug)]
pub struct Level {
    base: Rational,
    halvings: u32,
}

impl Level {
    pub fn new(alpha: Rational) -> Result<Self> {
        if alpha <= Rational::zero() || alpha >= Rational::one() {
            return Err(Error::AlphaOutOfRange);
        }
        Ok(Level { base: alpha, halvings: 0 })
    }

    pub fn from_f64(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::AlphaOutOfRange);
        }
        Self::new(from_f64(alpha)?)
    }

    /// `self / 2^i`.
    pub fn halved(&self, i: u32) -> Self {
        Level { base: self.base.clone(), halvings: self.halvings.saturating_add(i) }
    }

    pub fn value(&self) -> Rational {
        &self.base / Rational::from_integer(BigInt::one() << self.halvings)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.base) * (-(self.halvings as f64)).exp2()
    }

    /// `ln(1/α)`, slightly overestimated.
    fn ln_inv(&self) -> f64 {
        -to_f64(&self.base).ln() + self.halvings as f64 * LN_2
    }
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.halvings {
            0 => write!(f, "{}", show(&self.base)),
            h => write!(f, "{}/2^{h}", show(&self.base)),
        }
    }
}

fn bump(x: f64, ulps: f64) -> f64 {
    x * (1.0 + ulps * f64::EPSILON)
}

/// `n · t_n` with `t_n = sqrt(ln(π²n²/(6α)) / (2n))`, rounded upward.
pub(crate) fn n_times_t_up(n: u64, alpha: &Level) -> f64 {
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    // every term is nonnegative, so relative error stays a few ulps
    let x = 2.0 * pi.ln() - 6f64.ln() + 2.0 * nf.ln() + alpha.ln_inv();
    let x = bump(x, 16.0);
    let t = bump((x / (2.0 * nf)).sqrt(), 8.0);
    bump(nf * t, 4.0)
}

/// `t_n` as shipped (upward rounded).
pub fn t_n(n: u64, alpha: &Level) -> f64 {
    n_times_t_up(n, alpha) / n as f64
}

/// `⌈n(b + t_n)⌉`: the least count at which the sub-basic test accepts.
pub fn hoeffding_threshold(n: u64, b: &Rational, alpha: &Rational) -> Result<u64> {
    ThresholdSchedule::new(b.clone(), Level::new(alpha.clone())?)?.threshold(n)
}

/// Count thresholds `k(n)` for a fixed `b` and α.
#[derive(Clone, Debug)]
pub struct ThresholdSchedule {
    b: Rational,
    b_f64: f64,
    small: Option<(i64, i64)>,
    alpha: Level,
}

impl ThresholdSchedule {
    pub fn new(b: Rational, alpha: Level) -> Result<Self> {
        if !in_unit_interval(&b) {
            return Err(Error::InvalidHypothesis(format!("threshold {} outside [0,1]", show(&b))));
        }
        let small = match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(p), Some(q)) if q < (1 << 20) => Some((p, q)),
            _ => None,
        };
        Ok(ThresholdSchedule { b_f64: to_f64(&b), b, small, alpha })
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn alpha(&self) -> &Level {
        &self.alpha
    }

    pub fn t(&self, n: u64) -> f64 {
        t_n(n, &self.alpha)
    }

    /// `k(n)`, exact given the rounded `n·t_n`.
    pub fn threshold(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let nt = from_f64(n_times_t_up(n, &self.alpha))?;
        let y = Rational::from_integer(n.into()) * &self.b + nt;
        Ok(y.ceil().to_integer().to_u64().expect("threshold fits in u64"))
    }

    /// `count ≥ k(n)`, i.e. `count − n·b ≥ n·t_n`.
    pub fn accepts(&self, n: u64, count: u64) -> bool {
        let nt = n_times_t_up(n, &self.alpha);
        if let Some((p, q)) = self.small {
            // count − n·p/q ≥ nt  ⇔  ⌊·⌋ and fractional part split
            let num = count as i128 * q as i128 - n as i128 * p as i128;
            let (whole, rem) = num.div_mod_floor(&(q as i128));
            return cmp_rational_f64(whole, rem, q, nt) != Ordering::Less;
        }
        let approx = count as f64 - n as f64 * self.b_f64;
        let margin = 1e-9 * (n as f64 + 1.0);
        if approx < nt - margin {
            return false;
        }
        if approx > nt + margin {
            return true;
        }
        let lhs = Rational::from_integer(count.into()) - Rational::from_integer(n.into()) * &self.b;
        lhs >= from_f64(nt).expect("finite")
    }
}

/// Compares `whole + rem/q` (with `0 ≤ rem < q`) against a finite double.
fn cmp_rational_f64(whole: i128, rem: i128, q: i64, x: f64) -> Ordering {
    let fl = x.floor();
    if whole.unsigned_abs() < (1 << 52) {
        match (whole as f64).partial_cmp(&fl).expect("finite") {
            Ordering::Equal => {
                let frac = from_f64(x - fl).expect("finite");
                Rational::new(rem.into(), q.into()).cmp(&frac)
            }
            o => o,
        }
    } else {
        let lhs = Rational::new(BigInt::from(whole) * q + rem, q.into());
        lhs.cmp(&from_f64(x).expect("finite"))
    }
}

/// `Σ_{n ≤ N} 6α/(π²n²)`, the per-n error budget summed to `N`.
pub fn error_budget_partial_sum(alpha: f64, big_n: u64) -> f64 {
    let c = 6.0 * alpha / (std::f64::consts::PI * std::f64::consts::PI);
    // sum small terms first
    (1..=big_n).rev().map(|n| c / (n as f64 * n as f64)).sum()
}
