//! Independent reference computations used only by tests: thresholds at
//! 512-bit precision and exact binomial tails.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const P: usize = 512;
const RM: RoundingMode = RoundingMode::ToEven;

fn big(x: &BigInt) -> BigFloat {
    BigFloat::parse(&x.to_string(), astro_float::Radix::Dec, P, RM, &mut Consts::new().unwrap())
}

fn ratio_to_float(r: &BigRational) -> BigFloat {
    big(r.numer()).div(&big(r.denom()), P, RM)
}

/// `t_n = sqrt(ln(π²n²/(6α)) / (2n))` at 512-bit precision.
pub fn t_n_precise(n: u64, alpha: &BigRational) -> BigFloat {
    let mut cc = Consts::new().unwrap();
    let pi = cc.pi(P, RM);
    let nf = BigFloat::from_u64(n, P);
    let arg = pi.mul(&pi, P, RM).mul(&nf, P, RM).mul(&nf, P, RM).div(&BigFloat::from_u64(6, P), P, RM).div(
        &ratio_to_float(alpha),
        P,
        RM,
    );
    arg.ln(P, RM, &mut cc).div(&nf.mul(&BigFloat::from_u64(2, P), P, RM), P, RM).sqrt(P, RM)
}

pub fn t_n_f64(n: u64, alpha: &BigRational) -> f64 {
    t_n_precise(n, alpha).to_string().parse().unwrap()
}

/// `⌈n(b + t_n)⌉` at 512-bit precision. Panics when the value sits too
/// close to an integer to decide.
pub fn threshold(n: u64, b: &BigRational, alpha: &BigRational) -> u64 {
    let nf = BigFloat::from_u64(n, P);
    let v = nf.mul(&ratio_to_float(b).add(&t_n_precise(n, alpha), P, RM), P, RM);
    let c = v.ceil();
    let gap_up = c.sub(&v, P, RM);
    let gap_down = v.sub(&c.sub(&BigFloat::from_u64(1, P), P, RM), P, RM);
    let tiny = BigFloat::from_f64(1e-100, P);
    assert!(
        gap_up.is_zero() || (gap_up.cmp(&tiny) == Some(1) && gap_down.cmp(&tiny) == Some(1)),
        "threshold for n={n} is too close to an integer"
    );
    c.to_string().parse::<f64>().unwrap().round() as u64
}

fn binomial_terms(n: u64, p: &BigRational) -> (Vec<BigInt>, BigInt) {
    let a = p.numer().clone();
    let c = p.denom().clone();
    let d = &c - &a;
    let nn = n as usize;
    let mut pow_a = vec![BigInt::one(); nn + 1];
    let mut pow_d = vec![BigInt::one(); nn + 1];
    for j in 1..=nn {
        pow_a[j] = &pow_a[j - 1] * &a;
        pow_d[j] = &pow_d[j - 1] * &d;
    }
    let mut choose = BigUint::one();
    let mut terms = Vec::with_capacity(nn + 1);
    for j in 0..=nn {
        terms.push(BigInt::from(choose.clone()) * &pow_a[j] * &pow_d[nn - j]);
        choose = choose * BigUint::from(n - j as u64) / BigUint::from(j as u64 + 1);
    }
    (terms, num_traits::pow(c, nn))
}

/// `P(lo ≤ Bin(n, p) ≤ hi)`, exactly.
pub fn binomial_range(n: u64, p: &BigRational, lo: u64, hi: u64) -> BigRational {
    if lo > hi || lo > n {
        return BigRational::zero();
    }
    let (terms, denom) = binomial_terms(n, p);
    let num: BigInt = terms[lo as usize..=hi.min(n) as usize].iter().sum();
    BigRational::new(num, denom)
}

/// `P(Bin(n, p) ≥ k)`, exactly.
pub fn binomial_tail(n: u64, p: &BigRational, k: u64) -> BigRational {
    binomial_range(n, p, k, n)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}
