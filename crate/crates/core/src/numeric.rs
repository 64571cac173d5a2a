//! Exact and directed-rounding numeric helpers shared by the counting, bounds
//! and estimate modules.
//!
//! Transcendental quantities are evaluated with MPFR at the working precision
//! plus [`GUARD_BITS`] guard bits and then rounded outward to the working
//! precision, so an "upper" result is never below the true value and a "lower"
//! result is never above it.

use std::cmp::Ordering;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default mantissa width for transcendental evaluations.
pub const DEFAULT_PRECISION: u32 = 128;

/// Extra bits carried through intermediate steps before the final outward rounding.
pub const GUARD_BITS: u32 = 64;

/// Rounding side for a conservative result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
    Nearest,
}

impl Side {
    fn round(self) -> Round {
        match self {
            Side::Lower => Round::Down,
            Side::Upper => Round::Up,
            Side::Nearest => Round::Nearest,
        }
    }
}

/// Rounds a guard-precision value to `prec` bits on the requested side.
///
/// The extra ulp step absorbs the accumulated guard-precision error, which is
/// far below one ulp at `prec`.
pub fn settle(v: &Float, prec: u32, side: Side) -> Float {
    let (mut out, _) = Float::with_val_round(prec, v, side.round());
    match side {
        Side::Lower => out.next_down(),
        Side::Upper => out.next_up(),
        Side::Nearest => {}
    }
    out
}

pub fn log2_integer(x: &Integer, prec: u32, side: Side) -> Float {
    assert!(*x > 0, "log2 of non-positive integer");
    let (mut f, _) = Float::with_val_round(prec, x, side.round());
    f.log2_round(side.round());
    f
}

pub fn log2_rational(x: &Rational, prec: u32, side: Side) -> Float {
    assert!(*x > 0, "log2 of non-positive rational");
    let (mut f, _) = Float::with_val_round(prec, x, side.round());
    f.log2_round(side.round());
    f
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k as u32)
}

/// Row `n` of Pascal's triangle, computed multiplicatively.
pub fn binomial_row(n: usize) -> Vec<Integer> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = Integer::from(1);
    row.push(c.clone());
    for k in 0..n {
        c *= (n - k) as u64;
        c /= (k + 1) as u64;
        row.push(c.clone());
    }
    row
}

/// Memoized Pascal triangle of exact binomials, immutable once built.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<Integer>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![Integer::from(1)]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(Integer::from(1));
            for k in 1..n {
                row.push(Integer::from(&prev[k - 1] + &prev[k]));
            }
            row.push(Integer::from(1));
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[Integer] {
        &self.rows[n]
    }

    /// `C(n, k)`, zero when `k < 0` or `k > n`. Panics if `n` exceeds the table.
    pub fn get(&self, n: usize, k: i64) -> &Integer {
        static ZERO: Integer = Integer::ZERO;
        if k < 0 || k as usize > n {
            return &ZERO;
        }
        &self.rows[n][k as usize]
    }
}

/// Parses `"3"`, `"-2/5"`, `"0.125"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|_| bad());
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: Integer = all.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let mut r = Rational::from(num);
    if scale >= 0 {
        r *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        r /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn ceil_rational(r: &Rational) -> Integer {
    Integer::from(r.ceil_ref())
}

pub fn floor_rational(r: &Rational) -> Integer {
    Integer::from(r.floor_ref())
}

/// Compares `log2(x)` for a positive rational against a float, exactly
/// where MPFR can decide and conservatively otherwise.
pub fn cmp_log2(x: &Rational, bound: &Float) -> Ordering {
    let prec = bound.prec().max(DEFAULT_PRECISION) + GUARD_BITS;
    let lo = log2_rational(x, prec, Side::Lower);
    let hi = log2_rational(x, prec, Side::Upper);
    if hi <= *bound {
        if hi == *bound && lo == *bound {
            Ordering::Equal
        } else {
            Ordering::Less
        }
    } else if lo > *bound {
        Ordering::Greater
    } else {
        // Interval straddles the bound; report the unfavourable side.
        Ordering::Greater
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn float_string(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".into();
    }
    if !f.is_finite() {
        return f.to_string();
    }
    let s = f.to_string_radix(10, Some(digits));
    tidy_exponent(&s)
}

fn tidy_exponent(s: &str) -> String {
    // MPFR prints "1.2345e3"; keep plain notation for moderate exponents.
    let Some((m, e)) = s.split_once('e') else {
        return strip_zeros(s.to_string());
    };
    let Ok(exp) = e.parse::<i32>() else {
        return s.to_string();
    };
    if !(-6..=24).contains(&exp) {
        return s.to_string();
    }
    let (neg, m) = match m.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, m),
    };
    let (ip, fp) = m.split_once('.').unwrap_or((m, ""));
    let digits: String = format!("{ip}{fp}");
    let point = ip.len() as i32 + exp;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat('0').take(point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    strip_zeros(out)
}

fn strip_zeros(mut out: String) -> String {
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_matches_gmp() {
        let t = BinomialTable::new(40);
        for n in 0..=40u64 {
            for k in -1..=41i64 {
                assert_eq!(*t.get(n as usize, k), binomial(n, k), "C({n},{k})");
            }
        }
        assert_eq!(binomial_row(7), (0..=7).map(|k| binomial(7, k)).collect::<Vec<_>>());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), Rational::from((1, 10)));
        assert_eq!(parse_rational("-2/6").unwrap(), Rational::from((-1, 3)));
        assert_eq!(parse_rational("1.5e2").unwrap(), Rational::from(150));
        assert_eq!(parse_rational("25e-2").unwrap(), Rational::from((1, 4)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn directed_log2_brackets() {
        let x = Integer::from(3);
        let lo = log2_integer(&x, 128, Side::Lower);
        let hi = log2_integer(&x, 128, Side::Upper);
        assert!(lo < hi);
        assert_eq!(cmp_log2(&Rational::from(1024), &Float::with_val(128, 10)), Ordering::Equal);
        assert_eq!(cmp_log2(&Rational::from(743), &Float::with_val(128, 10)), Ordering::Less);
    }

    #[test]
    fn float_rendering() {
        assert_eq!(float_string(&Float::with_val(64, 10), 10), "10");
        assert_eq!(float_string(&Float::with_val(64, 0.25), 10), "0.25");
    }
}
