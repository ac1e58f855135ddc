//! Levine-Tristram signatures `sigma_omega` of the Hermitian form
//! `H(omega) = (1 - omega) V + (1 - conj(omega)) V^T` and total
//! `p`-signatures.
//!
//! For the plumbing matrix `H(omega)` is tridiagonal with diagonal
//! `|1-omega|^2 a_i` and off-diagonal entries of modulus `|1-omega|`.
//! Scaling the leading principal minors gives integer polynomials `G_m(u)`
//! in `u = |1 - omega|^2 = 4 sin^2(pi r)`:
//!
//! ```text
//! G_0 = 1, G_1 = a_1,
//! G_2k   = a_2k u G_{2k-1} - G_{2k-2},
//! G_2k+1 = a_2k+1 G_2k     - G_{2k-1},
//! ```
//!
//! with `sign G_m = sign det H_m`. Since the off-diagonal never vanishes
//! for `omega != 1`, eigenvalues strictly interlace and the number of
//! negative eigenvalues equals the number of sign changes in
//! `G_0, ..., G_n` with zeros skipped; a zero `G_n` removes one eigenvalue
//! from the positive count (zero eigenvalues are dropped).
//!
//! Signs come from outward-rounded interval evaluation. An interval that
//! straddles zero is resolved exactly: `G_m(u) = 0` iff the cyclotomic
//! polynomial of the order of `omega` divides `t^d G_m(2 - t - 1/t)`.
//! Otherwise precision is doubled up to the configured maximum.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::framings;
use super::interval::{u_interval, working_bits, Interval};
use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::{rational_to_string, LaurentPolynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self {
            start_bits: 256,
            max_bits: 4096,
        }
    }
}

/// A way of computing `sigma_omega(K)` at `omega = exp(2 pi i r)`.
pub trait SignatureMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether results are certified (never silently wrong).
    fn certified(&self) -> bool;

    fn lt_signature(&self, k: &ConwayForm, r: &Rational) -> Result<i64>;

    /// Sum of `sigma_omega` over all `p`-th roots of unity.
    fn total_signature(&self, k: &ConwayForm, p: u32) -> Result<i64> {
        if p < 2 {
            return Err(Error::Precondition(format!("total signature needs p >= 2, got {p}")));
        }
        // sigma_omega = sigma_conj(omega); omega = 1 contributes 0.
        let mut total = 0;
        for j in 1..=p / 2 {
            let s = self.lt_signature(k, &Rational::new(j.into(), p.into()))?;
            total += if 2 * j == p { s } else { 2 * s };
        }
        Ok(total)
    }
}

/// Certified signature via leading-minor signs (see module docs).
#[derive(Clone, Copy, Debug, Default)]
pub struct CertifiedSignature {
    pub precision: PrecisionConfig,
}

impl SignatureMethod for CertifiedSignature {
    fn name(&self) -> &'static str {
        "certified"
    }

    fn certified(&self) -> bool {
        true
    }

    fn lt_signature(&self, k: &ConwayForm, r: &Rational) -> Result<i64> {
        let r = normalize_angle(r);
        if r.is_zero() {
            return Ok(0);
        }
        let a = framings(k);
        let signs = minor_signs(&a, &r, self.precision)?;
        signature_from_minor_signs(&signs)
    }
}

/// Double precision Hermitian eigenvalues. Not certified: a tiny eigenvalue
/// below `1e-9 * ||H||` is counted as zero. Kept as an independent
/// cross-check.
#[derive(Clone, Copy, Debug, Default)]
pub struct EigenF64Signature;

impl SignatureMethod for EigenF64Signature {
    fn name(&self) -> &'static str {
        "eigen-f64"
    }

    fn certified(&self) -> bool {
        false
    }

    fn lt_signature(&self, k: &ConwayForm, r: &Rational) -> Result<i64> {
        let r = normalize_angle(r);
        if r.is_zero() {
            return Ok(0);
        }
        let theta = 2.0 * std::f64::consts::PI * r.to_f64().unwrap_or(0.0);
        let omega = Complex::new(theta.cos(), theta.sin());
        let one = Complex::new(1.0, 0.0);
        let a = framings(k);
        let n = a.len();
        let mut h = DMatrix::<Complex<f64>>::zeros(n, n);
        for i in 0..n {
            for (j, v) in [(i, a[i] as f64), (i + 1, 1.0)] {
                if j < n {
                    // (1 - w) V + (1 - conj w) V^T
                    h[(i, j)] += (one - omega) * v;
                    h[(j, i)] += (one - omega.conj()) * v;
                }
            }
        }
        let norm = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = 1e-9 * norm.max(1.0) * n as f64;
        let eig = h.symmetric_eigenvalues();
        let pos = eig.iter().filter(|&&x| x > tol).count() as i64;
        let neg = eig.iter().filter(|&&x| x < -tol).count() as i64;
        Ok(pos - neg)
    }
}

fn normalize_angle(r: &Rational) -> Rational {
    let one = Rational::from_integer(1.into());
    let f = r - r.floor();
    if f == one {
        Rational::zero()
    } else {
        f
    }
}

/// `G_0, ..., G_n` as integer polynomials in `u`.
fn minor_polynomials(a: &[i64]) -> Vec<LaurentPolynomial> {
    let u = LaurentPolynomial::var();
    let mut out = vec![LaurentPolynomial::one()];
    for (idx, &am) in a.iter().enumerate() {
        let m = idx + 1;
        let am = BigInt::from(am);
        let prev = &out[m - 1];
        let prev2 = if m >= 2 {
            out[m - 2].clone()
        } else {
            LaurentPolynomial::zero()
        };
        let next = if m % 2 == 0 {
            &(&u * prev).scale(&am) - &prev2
        } else {
            &prev.scale(&am) - &prev2
        };
        out.push(next);
    }
    out
}

fn minor_intervals(a: &[i64], u: &Interval, w: u32) -> Vec<Interval> {
    let mut out = vec![Interval::exact_int(1, w)];
    for (idx, &am) in a.iter().enumerate() {
        let m = idx + 1;
        let am = BigInt::from(am);
        let prev2 = if m >= 2 {
            out[m - 2].clone()
        } else {
            Interval::exact_int(0, w)
        };
        let prev = &out[m - 1];
        let next = if m % 2 == 0 {
            u.mul(prev).mul_int(&am).sub(&prev2)
        } else {
            prev.mul_int(&am).sub(&prev2)
        };
        out.push(next);
    }
    out
}

fn cyclotomic(n: u64) -> LaurentPolynomial {
    static CACHE: OnceLock<Mutex<HashMap<u64, LaurentPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cyclotomic cache").get(&n) {
        return p.clone();
    }
    let mut p = LaurentPolynomial::from_terms([(n as i64, 1), (0, -1)]);
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = p.div_rem_monic(&cyclotomic(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    cache.lock().expect("cyclotomic cache").insert(n, p.clone());
    p
}

/// Exact test for `G(u) = 0` at `u = 2 - omega - conj(omega)`.
fn vanishes_at_root(g: &LaurentPolynomial, r: &Rational) -> bool {
    if g.is_zero() {
        return true;
    }
    let order = r.denom().to_u64().expect("root of unity order fits in u64");
    let deg = g.max_degree().unwrap_or(0);
    // u = (2t - t^2 - 1) / t
    let u_num = LaurentPolynomial::from_terms([(1, 2), (2, -1), (0, -1)]);
    let mut p = LaurentPolynomial::zero();
    for (e, c) in g.terms() {
        let term = &u_num.pow(e as u32) * &LaurentPolynomial::monomial(c.clone(), deg - e);
        p = &p + &term;
    }
    p.rem_monic(&cyclotomic(order)).is_zero()
}

fn minor_signs(a: &[i64], r: &Rational, cfg: PrecisionConfig) -> Result<Vec<i8>> {
    let mut exact: Option<Vec<LaurentPolynomial>> = None;
    let mut known: Vec<Option<i8>> = vec![None; a.len() + 1];
    let mut bits = cfg.start_bits.max(16);
    loop {
        let w = working_bits(bits);
        let u = u_interval(r, bits);
        let values = minor_intervals(a, &u, w);
        for (m, v) in values.iter().enumerate() {
            if known[m].is_some() {
                continue;
            }
            if let Some(s) = v.sign() {
                known[m] = Some(s);
            } else {
                let polys = exact.get_or_insert_with(|| minor_polynomials(a));
                if vanishes_at_root(&polys[m], r) {
                    known[m] = Some(0);
                }
            }
        }
        if known.iter().all(Option::is_some) {
            return Ok(known.into_iter().map(|s| s.expect("checked")).collect());
        }
        if bits >= cfg.max_bits {
            return Err(Error::Precision {
                angle: rational_to_string(r),
                bits,
            });
        }
        bits = (bits * 2).min(cfg.max_bits);
    }
}

fn signature_from_minor_signs(signs: &[i8]) -> Result<i64> {
    let n = signs.len() - 1;
    for m in 1..n {
        if signs[m] == 0 && (signs[m - 1] == 0 || signs[m - 1] != -signs[m + 1]) {
            return Err(Error::Internal(format!(
                "minor sign pattern {signs:?} impossible for an irreducible tridiagonal form"
            )));
        }
    }
    let mut last = signs[0];
    let mut negatives = 0i64;
    for &s in &signs[1..] {
        if s == 0 {
            continue;
        }
        if s != last {
            negatives += 1;
        }
        last = s;
    }
    let zeros = i64::from(signs[n] == 0);
    let positives = n as i64 - negatives - zeros;
    Ok(positives - negatives)
}

/// `sigma_omega(K)` at `omega = exp(2 pi i r)`, certified.
pub fn lt_signature(k: &ConwayForm, r: &Rational) -> Result<i64> {
    CertifiedSignature::default().lt_signature(k, r)
}

pub fn lt_signature_with(method: &dyn SignatureMethod, k: &ConwayForm, r: &Rational) -> Result<i64> {
    method.lt_signature(k, r)
}

/// `sigma(K, p)`, certified.
pub fn total_signature(k: &ConwayForm, p: u32) -> Result<i64> {
    CertifiedSignature::default().total_signature(k, p)
}

pub fn total_signature_with(method: &dyn SignatureMethod, k: &ConwayForm, p: u32) -> Result<i64> {
    method.total_signature(k, p)
}

/// Classical signature, `sigma_{-1}`.
pub fn ordinary_signature(k: &ConwayForm) -> Result<i64> {
    lt_signature(k, &Rational::new(1.into(), 2.into()))
}
