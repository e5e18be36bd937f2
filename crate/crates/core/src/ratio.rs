//! Minimal exact rationals.
//!
//! The reference probabilities in this crate are dyadic or near-dyadic
//! fractions with tiny denominators, so a reduced `i64` pair with `i128`
//! cross-multiplication covers every comparison we need without pulling in a
//! bignum dependency.

use std::cmp::Ordering;
use std::fmt;

/// Reduced fraction with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Ratio {
    /// Builds `num/den` in lowest terms. Panics on a zero denominator; the
    /// callers in this crate only construct literal fractions.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Self {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub const fn numer(&self) -> i64 {
        self.num
    }

    pub const fn denom(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn add(&self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn sub(&self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    pub fn mul(&self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.num, self.den * o.den)
    }

    /// Scales by an integer (used for "k · per-outcome value" aggregates).
    pub fn scale(&self, k: i64) -> Ratio {
        Ratio::new(self.num * k, self.den)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order;
        // i128 keeps the products exact.
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Best rational approximation of `x` with denominator ≤ `max_den`, accepted
/// only when it reproduces `x` within `tol`. Uses the continued-fraction
/// convergents of `x`, so the returned fraction (when any) is the simplest one
/// in the window.
pub fn sniff(x: f64, max_den: i64, tol: f64) -> Option<Ratio> {
    if !x.is_finite() || max_den < 1 {
        return None;
    }
    // Convergents h_k/k_k of the continued-fraction expansion.
    let (mut h0, mut k0, mut h1, mut k1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    let mut best = Ratio { num: h1, den: k1 };
    for _ in 0..64 {
        if (best.to_f64() - x).abs() <= tol {
            return Some(best);
        }
        if frac.abs() < f64::EPSILON {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > i64::MAX as f64 {
            break;
        }
        let a = a as i64;
        frac = inv - a as f64;
        let (h2, k2) = match (
            a.checked_mul(h1).and_then(|v| v.checked_add(h0)),
            a.checked_mul(k1).and_then(|v| v.checked_add(k0)),
        ) {
            (Some(h), Some(k)) => (h, k),
            _ => break,
        };
        if k2 > max_den {
            break;
        }
        (h0, k0, h1, k1) = (h1, k1, h2, k2);
        best = Ratio { num: h1, den: k1 };
    }
    ((best.to_f64() - x).abs() <= tol).then(|| Ratio::new(best.num, best.den))
}
