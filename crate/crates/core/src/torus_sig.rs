//! Signatures of torus links `T(q, n)` from the recursion of
//! Gordon, Litherland and Murasugi, with the standard two-sided bounds.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use crate::exactalg::Rational;

/// A torus link `T(q, n)` stored with `q <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusPair {
    pub q: u64,
    pub n: u64,
}

impl TorusPair {
    pub fn new(q: u64, n: u64) -> Self {
        assert!(q >= 1 && n >= 1, "torus parameters must be positive");
        if q <= n {
            Self { q, n }
        } else {
            Self { q: n, n: q }
        }
    }

    pub fn signature(&self) -> i64 {
        sigma_torus(self.q, self.n)
    }
}

/// `a(q)`: 1 for odd `q`, 2 for even `q`.
pub fn a_parity(q: u64) -> i64 {
    if q % 2 == 1 {
        1
    } else {
        2
    }
}

/// `b(q, n)`: 1/2 when `q` is odd and `n` even, else 0.
pub fn b_parity(q: u64, n: u64) -> Rational {
    if q % 2 == 1 && n % 2 == 0 {
        Rational::new(1.into(), 2.into())
    } else {
        Rational::from_integer(0.into())
    }
}

fn memo() -> &'static RwLock<HashMap<(u64, u64), i64>> {
    static MEMO: OnceLock<RwLock<HashMap<(u64, u64), i64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Signature of `T(q, n)`, positive for positive torus links.
pub fn sigma_torus(q: u64, n: u64) -> i64 {
    let TorusPair { q, n } = TorusPair::new(q, n);
    if let Some(&s) = memo().read().expect("torus memo").get(&(q, n)) {
        return s;
    }
    let s = sigma_uncached(q, n);
    memo().write().expect("torus memo").insert((q, n), s);
    s
}

fn sigma_uncached(q: u64, n: u64) -> i64 {
    if q == 1 {
        return 0;
    }
    let qi = q as i64;
    let a = a_parity(q);
    // n > 2q: sigma(q, n) = sigma(q, n - 2q) + q^2 + a - 2, applied k times
    let k = if n > 2 * q { (n - 1) / (2 * q) } else { 0 };
    let base = n - 2 * q * k;
    let inner = if base < q {
        sigma_torus(base, q)
    } else if base == q {
        (qi * qi - a) / 2
    } else if base < 2 * q {
        qi * qi - a - sigma_torus(2 * q - base, q)
    } else {
        qi * qi - 1
    };
    inner + k as i64 * (qi * qi + a - 2)
}

/// `(q-1)n/2 <= sigma(T(q, n)) <= q(n+1)/2 - a(q) - b(q, n)`.
pub fn check_bounds(q: u64, n: u64) -> bool {
    let TorusPair { q, n } = TorusPair::new(q, n);
    let s = Rational::from_integer(sigma_torus(q, n).into());
    let lower = Rational::new(((q - 1) * n).into(), 2.into());
    let upper =
        Rational::new((q * (n + 1)).into(), 2.into()) - Rational::from_integer(a_parity(q).into()) - b_parity(q, n);
    lower <= s && s <= upper
}

/// Total `p`-signature of `T(2, 2g+1)`, which is the signature of `T(2g+1, p)`.
pub fn total_sig_torus_2_odd(g: u64, p: u64) -> i64 {
    sigma_torus(2 * g + 1, p)
}

/// Lower density floor `sigma(T(2,2g+1), p) / (p g)` for `p >= 11`.
pub fn density_floor(g: u64) -> Rational {
    if g <= 5 {
        Rational::from_integer(1.into())
    } else {
        Rational::new(10.into(), 11.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parities() {
        assert_eq!(a_parity(3), 1);
        assert_eq!(a_parity(4), 2);
        assert_eq!(b_parity(3, 4), q(1, 2));
        assert_eq!(b_parity(2, 5), q(0, 1));
    }

    #[test]
    fn recursion_cases() {
        assert_eq!(sigma_torus(3, 3), 4);
        assert_eq!(sigma_torus(3, 6), 8);
        assert_eq!(sigma_torus(2, 5), 4);
        assert_eq!(sigma_torus(5, 2), 4);
        assert_eq!(sigma_torus(1, 17), 0);
        // T(3,4) = 8_19 has signature 6; T(3,5) = 10_124 has 8
        assert_eq!(sigma_torus(3, 4), 6);
        assert_eq!(sigma_torus(3, 5), 8);
        // T(2, n) has signature n - 1
        for n in 1..40 {
            assert_eq!(sigma_torus(2, n), n as i64 - 1);
        }
    }

    #[test]
    fn bound_examples() {
        assert!(check_bounds(3, 3));
        assert!(check_bounds(2, 5));
        assert!(check_bounds(1, 9));
    }

    #[test]
    fn total_signatures() {
        assert_eq!(total_sig_torus_2_odd(1, 6), 8);
        assert_eq!(total_sig_torus_2_odd(1, 2), 2);
        assert_eq!(total_sig_torus_2_odd(2, 2), 4);
    }

    #[test]
    fn bounds_exhaustive_small() {
        for n in 1..=40 {
            for qq in 1..=n {
                assert!(check_bounds(qq, n), "T({qq},{n})");
            }
        }
    }

    proptest! {
        #[test]
        fn symmetric(a in 1u64..200, b in 1u64..200) {
            prop_assert_eq!(sigma_torus(a, b), sigma_torus(b, a));
        }

        #[test]
        fn periodic_step(qq in 2u64..30, n in 1u64..200) {
            let n = n + 2 * qq;
            let step = qq as i64 * qq as i64 + a_parity(qq) - 2;
            prop_assert_eq!(sigma_torus(qq, n + 2 * qq), sigma_torus(qq, n) + step);
        }
    }
}
