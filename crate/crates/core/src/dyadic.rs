//! Exact comparisons between quantities of the form `m · 2^e` with integer
//! mantissa and (possibly negative) integer exponent, plus a floating-point
//! log-space route used as an independent cross-check.

use std::cmp::Ordering;

/// `mantissa · 2^exp`, never normalised; equality and ordering compare
/// values exactly.
#[derive(Debug, Clone, Copy)]
pub struct Dyadic {
    pub mantissa: u128,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mantissa: u128, exp: i64) -> Self {
        Dyadic { mantissa, exp }
    }

    pub fn int(x: u128) -> Self {
        Dyadic {
            mantissa: x,
            exp: 0,
        }
    }

    pub fn pow2(exp: i64) -> Self {
        Dyadic { mantissa: 1, exp }
    }

    /// Multiplies the mantissa; `None` on overflow.
    pub fn scale(self, by: u128) -> Option<Self> {
        Some(Dyadic {
            mantissa: self.mantissa.checked_mul(by)?,
            exp: self.exp,
        })
    }

    pub fn shifted(self, by: i64) -> Self {
        Dyadic {
            mantissa: self.mantissa,
            exp: self.exp + by,
        }
    }

    fn bit_len(self) -> i64 {
        128 - self.mantissa.leading_zeros() as i64
    }

    /// Log-space value; `-inf` for zero.
    pub fn log2(self) -> f64 {
        if self.mantissa == 0 {
            f64::NEG_INFINITY
        } else {
            (self.mantissa as f64).log2() + self.exp as f64
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa == 0, other.mantissa == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let top_a = self.bit_len() + self.exp;
        let top_b = other.bit_len() + other.exp;
        if top_a != top_b {
            return top_a.cmp(&top_b);
        }
        // equal leading bit position: the exponent gap is below 128
        let gap = self.exp - other.exp;
        if gap >= 0 {
            (self.mantissa << gap).cmp(&other.mantissa)
        } else {
            self.mantissa.cmp(&(other.mantissa << -gap))
        }
    }
}

/// Compares `a · 2^x` with `b · 2^y` through `log2`; ties within `1e-9`
/// count as equal. Only meant to cross-check [`Dyadic`] ordering.
pub fn cmp_log2(a: Dyadic, b: Dyadic) -> Ordering {
    let (la, lb) = (a.log2(), b.log2());
    if la == lb {
        return Ordering::Equal;
    }
    if (la - lb).abs() <= 1e-9 * la.abs().max(lb.abs()).max(1.0) {
        Ordering::Equal
    } else {
        la.partial_cmp(&lb).unwrap()
    }
}

/// `⌈log2 x⌉` for `x >= 1`, and 0 for `x <= 1`.
pub fn ceil_log2(x: u128) -> i64 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros() as i64
    }
}

/// `⌊log2(num / den)⌋` for positive `num`, `den`.
pub fn floor_log2_ratio(num: u128, den: u128) -> i64 {
    assert!(num > 0 && den > 0);
    let n = Dyadic::int(num);
    let mut e = (128 - num.leading_zeros() as i64) - (128 - den.leading_zeros() as i64);
    // 2^e · den <= num < 2^(e+1) · den after at most one step either way
    while Dyadic::new(den, e) > n {
        e -= 1;
    }
    while Dyadic::new(den, e + 1) <= n {
        e += 1;
    }
    e
}

/// `⌈log2(num / den)⌉` for positive `num`, `den`.
pub fn ceil_log2_ratio(num: u128, den: u128) -> i64 {
    let f = floor_log2_ratio(num, den);
    if Dyadic::new(den, f) == Dyadic::int(num) {
        f
    } else {
        f + 1
    }
}

/// `2^exp` as a count, saturating at `usize::MAX`; zero for negative
/// exponents (no integer lies in `(0, 1)`).
pub fn pow2_floor_usize(exp: i64) -> usize {
    if exp < 0 {
        0
    } else if exp >= usize::BITS as i64 {
        usize::MAX
    } else {
        1usize << exp
    }
}
