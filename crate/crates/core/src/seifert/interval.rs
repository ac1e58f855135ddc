//! Rigorous fixed-point interval arithmetic. A value is an integer pair
//! `[lo, hi]` at scale `2^-bits`; every operation rounds outward.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::Rational;

/// Guard bits added on top of the requested working precision.
const GUARD: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn floor_shr(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

fn ceil_shr(x: &BigInt, bits: u32) -> BigInt {
    -floor_shr(&-x, bits)
}

impl Interval {
    pub fn exact_int(v: impl Into<BigInt>, bits: u32) -> Self {
        let v: BigInt = v.into() << bits;
        Self {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    #[cfg(test)]
    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Self {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        Self {
            lo,
            hi,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Self {
            lo: floor_shr(min, self.bits),
            hi: ceil_shr(max, self.bits),
            bits: self.bits,
        }
    }

    #[cfg(test)]
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let scale = BigInt::one() << self.bits;
        let lo = Rational::new(self.lo.clone(), scale.clone());
        let hi = Rational::new(self.hi.clone(), scale);
        &lo <= q && q <= &hi
    }

    #[cfg(test)]
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

/// Fixed-point value of `pi` at scale `2^-w` and an error bound in ulps.
fn pi_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("pi cache").get(&w) {
        return v.clone();
    }
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let (a5, e5) = atan_inv(5, w);
    let (a239, e239) = atan_inv(239, w);
    let value: BigInt = 16 * a5 - 4 * a239;
    let err: BigInt = 16 * e5 + 4 * e239;
    cache.lock().expect("pi cache").insert(w, (value.clone(), err.clone()));
    (value, err)
}

/// `atan(1/n)` by its alternating series, truncated once a term vanishes
/// at the working scale.
fn atan_inv(n: u32, w: u32) -> (BigInt, BigInt) {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = (BigInt::one() << w).div_floor(&n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = power.div_floor(&n2);
        k += 1;
    }
    // each term carries < 2 ulps of floor error; the tail is < 2 ulps.
    (sum, BigInt::from(2 * k + 4))
}

/// `sin(x)` for a fixed-point `0 <= x <= 2`, with an error bound in ulps.
fn sin_fixed(x: &BigInt, w: u32) -> (BigInt, BigInt) {
    let x2 = floor_shr(&(x * x), w);
    let mut term = x.clone();
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !term.is_zero() {
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        j += 1;
        term = floor_shr(&(&term * &x2), w).div_floor(&BigInt::from((2 * j) * (2 * j + 1)));
    }
    // per-term error stays below 4 ulps since x^2 / ((2j)(2j+1)) < 1/2.
    (sum, BigInt::from(8 * j + 16))
}

/// Interval for `u = 4 sin^2(pi r) = 2 - 2 cos(2 pi r)` with `0 < r < 1`.
pub(crate) fn u_interval(r: &Rational, bits: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<(Rational, u32), Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (r.clone(), bits);
    if let Some(v) = cache.lock().expect("u cache").get(&key) {
        return v.clone();
    }
    let w = bits + GUARD;
    // fold into (0, 1/2]: sin^2(pi r) = sin^2(pi (1 - r))
    let half = Rational::new(1.into(), 2.into());
    let r = if r > &half { Rational::one() - r } else { r.clone() };
    let (pi, pi_err) = pi_fixed(w);
    let (num, den) = (r.numer(), r.denom());
    let x_lo = ((&pi - &pi_err) * num).div_floor(den);
    let x_hi = -((-(&pi + &pi_err) * num).div_floor(den));
    // sin is increasing on [0, pi/2]
    let (s_lo, e_lo) = sin_fixed(&x_lo, w);
    let (s_hi, e_hi) = sin_fixed(&x_hi, w);
    let s_lo = (s_lo - e_lo).max(BigInt::zero());
    let s_hi = s_hi + e_hi;
    let u = Interval {
        lo: floor_shr(&(4 * &s_lo * &s_lo), w),
        hi: ceil_shr(&(4 * &s_hi * &s_hi), w),
        bits: w,
    };
    cache.lock().expect("u cache").insert(key, u.clone());
    u
}

pub(crate) fn working_bits(bits: u32) -> u32 {
    bits + GUARD
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pi_is_bracketed() {
        let w = 200;
        let (pi, err) = pi_fixed(w);
        let scale = BigInt::one() << w;
        // 355/113 overshoots pi by ~2.7e-7; 3.14159265358979 undershoots.
        let lo = Rational::new(&pi - &err, scale.clone());
        let hi = Rational::new(&pi + &err, scale);
        assert!(hi < q(355, 113));
        assert!(lo > q(314_159_265_358_979, 100_000_000_000_000));
        assert!(err < BigInt::from(10_000));
    }

    #[test]
    fn exact_u_values_are_contained() {
        // u = 2 - 2cos(2 pi r): r=1/2 -> 4, r=1/6 -> 1, r=1/4 -> 2, r=1/3 -> 3
        for (r, u) in [(q(1, 2), 4), (q(1, 6), 1), (q(1, 4), 2), (q(1, 3), 3), (q(5, 6), 1)] {
            let iv = u_interval(&r, 256);
            assert!(iv.contains_rational(&q(u, 1)), "r={r}");
            assert!(iv.width_ulps() < BigInt::from(1u64 << 20));
        }
    }

    #[test]
    fn arithmetic_rounds_outward() {
        let w = 64;
        let third = Interval {
            lo: (BigInt::one() << w) / 3,
            hi: (BigInt::one() << w) / 3 + 1,
            bits: w,
        };
        let prod = third.mul(&third).mul_int(&BigInt::from(9));
        assert!(prod.contains_rational(&q(1, 1)));
        let diff = prod.sub(&Interval::exact_int(1, w));
        assert_eq!(diff.sign(), None);
        assert_eq!(Interval::exact_int(2, w).add(&third).sign(), Some(1));
        assert_eq!(third.mul_int(&BigInt::from(-3)).sign(), Some(-1));
    }
}
