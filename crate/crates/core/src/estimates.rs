//! Analytic estimates for `i_t(Q_d)`: the activity `λ(t)`, the weight
//! `F_λ(a, g)`, the cut `f(t, d)`, the small-set sum evaluators, the error
//! factors `E1`/`E2` around `2 C(2^(d-1), t) exp{t(1 - t/2^(d-1))^(d-1)}`,
//! and the closing inequalities of the unimodality argument for `Q_d`.
//!
//! `log` means `log2` throughout. Transcendental values are rounded outward:
//! lower factors down, upper factors up.

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, log2_integer, settle, Side, DEFAULT_PRECISION, GUARD_BITS};

/// Largest dimension accepted by the estimate evaluators.
pub const MAX_ESTIMATE_DIMENSION: u32 = 1024;

/// Largest dimension for which `C(2^(d-1), t)` is formed exactly.
const EXACT_BINOMIAL_DIMENSION: u32 = 17;

fn check_dimension(d: u32) -> Result<()> {
    if d == 0 || d > MAX_ESTIMATE_DIMENSION {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} outside 1..={MAX_ESTIMATE_DIMENSION}"
        )));
    }
    Ok(())
}

/// `2^(d-1)`, the size of each parity class.
pub fn half_order(d: u32) -> Integer {
    Integer::from(1) << (d - 1)
}

/// `λ(t) = t / (2^(d-1) - t)`.
pub fn lambda_of_t(d: u32, t: &Integer) -> Result<Rational> {
    check_dimension(d)?;
    let n = half_order(d);
    if *t < 0 || *t >= n {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, 2^(d-1)) at d = {d}")));
    }
    Ok(Rational::from((t.clone(), n - t)))
}

/// `F_λ(a, g) = λ^a (1 + λ)^(-g)`; negative `g` is allowed for the
/// `kd - 2k(k-1)` arguments that go below zero at small `d`.
pub fn big_f(lambda: &Rational, a: u64, g: i64) -> Rational {
    let num = lambda.clone().pow(a as u32);
    let base = Rational::from(1 + lambda);
    let den = base.pow(g.unsigned_abs() as u32);
    if g >= 0 {
        num / den
    } else {
        num * den
    }
}

/// `log2 F_λ(a, g)` for large arguments, round-to-nearest.
pub fn big_f_log2(lambda: &Rational, a: &Integer, g: &Integer, prec: u32) -> Float {
    let wp = prec + GUARD_BITS;
    let mut out = Float::with_val(wp, g) * -Float::with_val(wp, Rational::from(1 + lambda)).log2();
    if *a != 0 {
        out += Float::with_val(wp, a) * Float::with_val(wp, lambda).log2();
    }
    settle(&out, prec, Side::Nearest)
}

/// `t (1 - t/2^(d-1))^(d-1)`, the exponent of the central estimate.
pub fn gld(d: u32, t: &Integer) -> Rational {
    let n = half_order(d);
    let ratio = Rational::from((Integer::from(&n - t), n));
    ratio.pow(d - 1) * t
}

fn e_interval(prec: u32) -> (Float, Float) {
    let mut lo = Float::with_val(prec, 1);
    lo.exp_round(Round::Down);
    let mut hi = Float::with_val(prec, 1);
    hi.exp_round(Round::Up);
    (lo, hi)
}

/// `f = max{d, ceil(5^7 e t(1 - t/2^(d-1))^(d-1))}`.
///
/// The ceiling is decided from a two-sided enclosure of `5^7 e x`, doubling
/// the precision until both ends agree.
pub fn f_cut(d: u32, t: &Integer) -> Result<Integer> {
    check_dimension(d)?;
    let n = half_order(d);
    if *t <= 0 || *t >= n {
        return Err(Error::InvalidParameter(format!("t = {t} outside (0, 2^(d-1)) at d = {d}")));
    }
    let scaled = gld(d, t) * 78125u32;
    let mut prec = DEFAULT_PRECISION;
    let ceiling = loop {
        let (e_lo, e_hi) = e_interval(prec);
        let (x_lo, _) = Float::with_val_round(prec, &scaled, Round::Down);
        let (x_hi, _) = Float::with_val_round(prec, &scaled, Round::Up);
        let (lo, _) = Float::with_val_round(prec, &x_lo * &e_lo, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &x_hi * &e_hi, Round::Up);
        let c_lo = lo.ceil().to_integer().expect("finite");
        let c_hi = hi.ceil().to_integer().expect("finite");
        if c_lo == c_hi {
            break c_lo;
        }
        prec *= 2;
    };
    Ok(ceiling.max(Integer::from(d)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeTag {
    /// `c log d / d^(1/3) <= t/2^(d-1) <= 1 - 1/sqrt 2 + 2 log d / d`.
    Middle,
    /// `1 - 1/sqrt 2 + 2 log d / d <= t/2^(d-1) <= 1`.
    Upper,
    Below,
    /// `t = 0` or `t = 2^(d-1)`.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumBound {
    #[serde(serialize_with = "crate::report::ser_float")]
    pub log2: Float,
    /// Whether `λ > c log d / d^(1/3)` for the configured `c`.
    pub in_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E1Factor {
    #[serde(serialize_with = "crate::report::ser_integer")]
    pub f: Integer,
    #[serde(serialize_with = "crate::report::ser_float")]
    pub e0: Float,
    #[serde(serialize_with = "crate::report::ser_float")]
    pub value: Float,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E2Factor {
    #[serde(serialize_with = "crate::report::ser_integer")]
    pub f: Integer,
    /// `exp{Y + d^2 f^2 / 2^(d-1)}` from sets of size at most `f`.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub type1: Float,
    /// `3^(-f)` from large sets with small 2-components.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub type2: Float,
    /// `3 e^5 d^10 2^(3d/2) F_λ(6, 6d - 60) exp{Y}` from sets with a 2-component of size at least 6.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub type3: Float,
    #[serde(serialize_with = "crate::report::ser_float")]
    pub value: Float,
    pub in_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeEstimate {
    pub d: u32,
    #[serde(serialize_with = "crate::report::ser_integer")]
    pub t: Integer,
    pub range: RangeTag,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub lambda: Option<Rational>,
    /// `log2` of `2 C(2^(d-1), t) exp{t(1 - t/2^(d-1))^(d-1)}`.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub central_log2: Float,
    pub f_cut: Option<String>,
    #[serde(serialize_with = "crate::report::ser_opt_float")]
    pub e1_lower: Option<Float>,
    #[serde(serialize_with = "crate::report::ser_opt_float")]
    pub e2_upper: Option<Float>,
    pub e1_note: Option<String>,
    pub e2_note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct EstimateEngine {
    prec: u32,
    c_constant: Rational,
}

impl Default for EstimateEngine {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION, Rational::from(1))
    }
}

impl EstimateEngine {
    pub fn new(prec: u32, c_constant: Rational) -> Self {
        Self {
            prec: prec.max(16),
            c_constant,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn c_constant(&self) -> &Rational {
        &self.c_constant
    }

    fn wp(&self) -> u32 {
        self.prec + GUARD_BITS
    }

    fn fl<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.wp(), v)
    }

    /// `c log d / d^(1/3)`.
    pub fn activity_threshold(&self, d: u32) -> Float {
        let ld = self.fl(d).log2();
        let cube = self.fl(d).cbrt();
        settle(&(self.fl(&self.c_constant) * ld / cube), self.prec, Side::Nearest)
    }

    /// `1 - 1/sqrt 2 + 2 log d / d`, the left end of the upper range as a fraction of `2^(d-1)`.
    pub fn upper_range_start(&self, d: u32) -> Float {
        let s = 1 - self.fl(2).sqrt().recip() + 2 * self.fl(d).log2() / d;
        settle(&s, self.prec, Side::Nearest)
    }

    pub fn range_tag(&self, d: u32, t: &Integer) -> Result<RangeTag> {
        check_dimension(d)?;
        let n = half_order(d);
        if *t < 0 || *t > n {
            return Err(Error::InvalidParameter(format!("t = {t} outside [0, 2^(d-1)] at d = {d}")));
        }
        if *t == 0 || *t == n {
            return Ok(RangeTag::Degenerate);
        }
        let frac = self.fl(&Rational::from((t.clone(), n)));
        Ok(if frac >= self.upper_range_start(d) {
            RangeTag::Upper
        } else if frac >= self.activity_threshold(d) {
            RangeTag::Middle
        } else {
            RangeTag::Below
        })
    }

    pub fn lambda_in_range(&self, d: u32, lambda: &Rational) -> bool {
        self.fl(lambda) > self.activity_threshold(d)
    }

    /// `log2` of `exp{(λ/2)(2/(1+λ))^d + d^2 λ^2 (1+λ)^2 2^d / (1+λ)^(2d)}`, rounded up.
    pub fn small_sum_bound(&self, d: u32, lambda: &Rational) -> Result<SumBound> {
        check_dimension(d)?;
        check_positive(lambda)?;
        let y = small_sum_exponent(d, lambda);
        let log2e = self.fl(Constant::Log2).recip();
        Ok(SumBound {
            log2: settle(&(self.fl(&y) * log2e), self.prec, Side::Upper),
            in_range: self.lambda_in_range(d, lambda),
        })
    }

    /// `log2` of `e^(k-1) d^(2k-2) 2^d F_λ(k, kd - 2k(k-1))`, rounded up.
    pub fn linked_sum_bound(&self, d: u32, lambda: &Rational, k: u64) -> Result<SumBound> {
        check_dimension(d)?;
        check_positive(lambda)?;
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let g = Integer::from(k) * d - Integer::from(2 * k * (k - 1));
        let log2e = self.fl(Constant::Log2).recip();
        let v = (k - 1) * log2e
            + self.fl(d).log2() * (2 * k - 2)
            + d
            + big_f_log2(lambda, &Integer::from(k), &g, self.wp());
        Ok(SumBound {
            log2: settle(&v, self.prec, Side::Upper),
            in_range: self.lambda_in_range(d, lambda),
        })
    }

    fn interior(&self, d: u32, t: &Integer) -> Result<Integer> {
        check_dimension(d)?;
        let n = half_order(d);
        if *t <= 0 || *t >= n {
            return Err(Error::NotApplicable(format!("t = {t} outside (0, 2^(d-1)) at d = {d}")));
        }
        Ok(n)
    }

    /// `E1 = exp{-3f^2/t} (1 - 2 (e x / f)^f e^(-x))` with `x = t(1 - t/2^(d-1))^(d-1)`,
    /// rounded down. Applies for `t <= (3/4) 2^(d-1)`, `f < t/2` and
    /// `f <= (2^(d-1) - t)/(2d)`.
    pub fn e1_factor(&self, d: u32, t: &Integer) -> Result<E1Factor> {
        let n = self.interior(d, t)?;
        if Integer::from(t * 4u32) > Integer::from(&n * 3u32) {
            return Err(Error::NotApplicable(format!("t = {t} above (3/4) 2^(d-1)")));
        }
        let f = f_cut(d, t)?;
        if Integer::from(&f * 2u32) >= *t {
            return Err(Error::NotApplicable(format!("f = {f} is not below t/2")));
        }
        if Integer::from(&f * (2 * d)) > Integer::from(&n - t) {
            return Err(Error::NotApplicable(format!("f = {f} exceeds (2^(d-1) - t)/(2d)")));
        }
        let x = self.fl(&gld(d, t));
        let e = self.fl(1).exp();
        let ratio = e * &x / self.fl(&f);
        let tail = 2 * ratio.pow(&f) * (-x).exp();
        let e0 = 1 - tail;
        let penalty = Rational::from((Integer::from(&f * &f) * 3u32, t.clone()));
        let value = (-self.fl(&penalty)).exp() * &e0;
        Ok(E1Factor {
            f,
            e0: settle(&e0, self.prec, Side::Lower),
            value: settle(&value, self.prec, Side::Lower),
        })
    }

    /// `E2`, the sum of the three type contributions, rounded up.
    pub fn e2_factor(&self, d: u32, t: &Integer) -> Result<E2Factor> {
        let n = self.interior(d, t)?;
        let f = f_cut(d, t)?;
        let lambda = lambda_of_t(d, t)?;
        let rest = Integer::from(&n - t);
        let y = Rational::from((Integer::from(t * t) * (Integer::from(1) << d) * d * d, Integer::from(&rest * &rest)))
            * Rational::from((rest, n.clone())).pow(2 * d - 2);
        let fy = self.fl(&y);
        let spread = Rational::from((Integer::from(&f * &f) * d * d, n));
        let type1 = (fy.clone() + self.fl(&spread)).exp();
        let type2 = self.fl(3).pow(-self.fl(&f));
        let ln2 = self.fl(Constant::Log2);
        let mut ln_type3: Float = self.fl(3).ln() + 5u32;
        ln_type3 += self.fl(d).ln() * 10u32;
        ln_type3 += Float::with_val(self.wp(), &ln2 * Rational::from((3 * d, 2)));
        ln_type3 += big_f_log2(&lambda, &Integer::from(6), &(Integer::from(6 * d) - 60), self.wp()) * &ln2;
        ln_type3 += &fy;
        let type3 = ln_type3.exp();
        let value = type1.clone() + &type2 + &type3;
        Ok(E2Factor {
            f,
            type1: settle(&type1, self.prec, Side::Upper),
            type2: settle(&type2, self.prec, Side::Upper),
            type3: settle(&type3, self.prec, Side::Upper),
            value: settle(&value, self.prec, Side::Upper),
            in_range: self.lambda_in_range(d, &lambda),
        })
    }

    /// `log2 C(2^(d-1), t)`: exact for small `d`, through `ln Γ` otherwise.
    pub fn log2_central_binomial(&self, d: u32, t: &Integer) -> Float {
        let n = half_order(d);
        if d <= EXACT_BINOMIAL_DIMENSION {
            let b = binomial(n.to_u64().expect("small"), t.to_i64().expect("small"));
            return log2_integer(&b, self.prec, Side::Nearest);
        }
        let wp = self.wp() + d + 32;
        let lg = |m: Integer| Float::with_val(wp, m + 1u32).ln_gamma();
        let ln_b = lg(n.clone()) - lg(t.clone()) - lg(n - t);
        let out = ln_b / Float::with_val(wp, Constant::Log2);
        settle(&out, self.prec, Side::Nearest)
    }

    /// `log2` of `2 C(2^(d-1), t) exp{t(1 - t/2^(d-1))^(d-1)}`.
    pub fn central_log2(&self, d: u32, t: &Integer) -> Result<Float> {
        check_dimension(d)?;
        let n = half_order(d);
        if *t < 0 || *t > n {
            return Err(Error::InvalidParameter(format!("t = {t} outside [0, 2^(d-1)] at d = {d}")));
        }
        let log2e = self.fl(Constant::Log2).recip();
        let v = 1 + self.log2_central_binomial(d, t) + self.fl(&gld(d, t)) * log2e;
        Ok(settle(&v, self.prec, Side::Nearest))
    }

    /// Central estimate with its `[E1, E2]` window where the factors apply.
    pub fn cube_window(&self, d: u32, t: &Integer) -> Result<CubeEstimate> {
        let range = self.range_tag(d, t)?;
        let central_log2 = self.central_log2(d, t)?;
        let interior = range != RangeTag::Degenerate;
        let split = |r: Result<Float>| match r {
            Ok(v) => Ok((Some(v), None)),
            Err(Error::NotApplicable(m)) => Ok((None, Some(m))),
            Err(e) => Err(e),
        };
        let (e1_lower, e1_note) = split(self.e1_factor(d, t).map(|e| e.value))?;
        let (e2_upper, e2_note) = split(self.e2_factor(d, t).map(|e| e.value))?;
        Ok(CubeEstimate {
            d,
            t: t.clone(),
            range,
            lambda: if interior { Some(lambda_of_t(d, t)?) } else { None },
            central_log2,
            f_cut: if interior { Some(f_cut(d, t)?.to_string()) } else { None },
            e1_lower,
            e2_upper,
            e1_note,
            e2_note,
        })
    }
}

fn check_positive(lambda: &Rational) -> Result<()> {
    if *lambda <= 0 {
        return Err(Error::InvalidParameter(format!("activity {lambda} must be positive")));
    }
    Ok(())
}

/// `(λ/2)(2/(1+λ))^d + d^2 λ^2 (1+λ)^2 2^d / (1+λ)^(2d)`, exactly.
pub fn small_sum_exponent(d: u32, lambda: &Rational) -> Rational {
    let one_plus = Rational::from(1 + lambda);
    let first = Rational::from(lambda / 2u32) * Rational::from(2u32 / one_plus.clone()).pow(d);
    let second = Rational::from(lambda * lambda) * Integer::from(d) * d * one_plus.clone().pow(2u32) * (Integer::from(1) << d)
        / one_plus.pow(2 * d);
    first + second
}

/// The three ranges where consecutive coefficients of `Q_d` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnimodalityCase {
    /// `2^(d-2) + 5d^4 <= t < (3/4) 2^(d-1)`, decreasing.
    UpperDecreasing,
    /// `2^(d-1)(1 - 1/sqrt 2 + 2 log d/d) <= t < 2^(d-1)(1/2 - 1/d)`, increasing.
    MiddleIncreasing,
    /// `2^(d-1)(1/2 - 1/d) <= t < 2^(d-2) - 15 d^2`, increasing.
    CentralIncreasing,
}

impl UnimodalityCase {
    pub const ALL: [UnimodalityCase; 3] = [Self::UpperDecreasing, Self::MiddleIncreasing, Self::CentralIncreasing];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseEvaluation {
    pub case: UnimodalityCase,
    pub d: u32,
    /// `None` when some factor of the ratio is not positive.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub ratio: Option<Rational>,
    pub holds: bool,
}

/// The closing ratio of a case, or `None` when a factor is not positive.
pub fn case_ratio(case: UnimodalityCase, d: u32) -> Option<Rational> {
    let dd = Integer::from(d);
    let pow_d = Integer::from(1) << d;
    let quarter = Integer::from(1) << (d - 2);
    let frac = |num: Integer| Rational::from((num, pow_d.clone()));
    let d2 = Integer::from(&dd * &dd);
    let d4 = Integer::from(&d2 * &d2);
    let (a, b, c, e): (Rational, Rational, Rational, Rational) = match case {
        UnimodalityCase::UpperDecreasing => (
            1 - frac(Integer::from(&d2 * 14u32)),
            Rational::from(Integer::from(&quarter + &d4 * 5u32) + 1u32),
            1 + frac(Integer::from(&d4 * 4u32)),
            Rational::from(quarter.clone() - Integer::from(&d4 * 5u32)),
        ),
        UnimodalityCase::MiddleIncreasing => {
            let step = Rational::from((half_order(d), dd.clone()));
            (
                1 + Rational::from((2, Integer::from(&d2 * &dd))),
                Rational::from(&quarter) - &step + 1u32,
                1 - Rational::from((1, Integer::from(&d4 * &dd))),
                Rational::from(&quarter) + step,
            )
        }
        UnimodalityCase::CentralIncreasing => (
            1 + frac(Integer::from(&d4 * 5u32)),
            Rational::from(Integer::from(&quarter - &d2 * 15u32) + 1u32),
            1 - frac(Integer::from(&d2 * 14u32)),
            Rational::from(quarter.clone() + Integer::from(&d2 * 15u32)),
        ),
    };
    if a <= 0 || b <= 0 || c <= 0 || e <= 0 {
        return None;
    }
    Some(a * b / (c * e))
}

pub fn case_evaluation(case: UnimodalityCase, d: u32) -> CaseEvaluation {
    let ratio = if d >= 2 { case_ratio(case, d) } else { None };
    let holds = match (&ratio, case) {
        (Some(r), UnimodalityCase::UpperDecreasing) => *r > 1,
        (Some(r), _) => *r < 1,
        (None, _) => false,
    };
    CaseEvaluation { case, d, ratio, holds }
}

pub fn closing_case_check(d: u32) -> Vec<CaseEvaluation> {
    UnimodalityCase::ALL.iter().map(|&c| case_evaluation(c, d)).collect()
}

/// Least `d0` such that a predicate holds on every `d` in `[d0, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanThreshold {
    pub name: String,
    pub lo: u32,
    pub hi: u32,
    pub d0: Option<u32>,
    /// Whether the tracked quantity is monotone on `[d0, hi]`.
    pub tail_monotone: bool,
}

fn scan<F>(name: &str, lo: u32, hi: u32, mut eval: F) -> ScanThreshold
where
    F: FnMut(u32) -> (bool, Option<Float>),
{
    let results: Vec<(u32, bool, Option<Float>)> = (lo..=hi).map(|d| {
        let (ok, v) = eval(d);
        (d, ok, v)
    }).collect();
    let mut d0 = None;
    for (d, ok, _) in results.iter().rev() {
        if !ok {
            break;
        }
        d0 = Some(*d);
    }
    let tail_monotone = match d0 {
        None => false,
        Some(start) => {
            let tail: Vec<&Float> = results.iter().filter(|r| r.0 >= start).filter_map(|r| r.2.as_ref()).collect();
            tail.windows(2).all(|w| w[0] <= w[1]) || tail.windows(2).all(|w| w[0] >= w[1])
        }
    };
    ScanThreshold {
        name: name.to_string(),
        lo,
        hi,
        d0,
        tail_monotone,
    }
}

/// Scans each closing inequality over `[lo, hi]`; the tail monotonicity is
/// checked on `|ratio - 1|`.
pub fn closing_thresholds(lo: u32, hi: u32) -> Vec<ScanThreshold> {
    UnimodalityCase::ALL
        .iter()
        .map(|&case| {
            let name = serde_json::to_value(case).expect("tag").as_str().unwrap_or_default().to_string();
            scan(&name, lo.max(2), hi, |d| {
                let ev = case_evaluation(case, d);
                let gap = ev.ratio.map(|r| Float::with_val(DEFAULT_PRECISION, r - 1u32).abs());
                (ev.holds, gap)
            })
        })
        .collect()
}

/// `h(a, b) = a (1 - b/2^(d-1))^(d-1)`.
pub fn h_ab(d: u32, a: &Integer, b: &Integer) -> Rational {
    let n = half_order(d);
    Rational::from((Integer::from(&n - b), n)).pow(d - 1) * a
}

/// `exp{y} <= 1 + r` decided as `y <= ln(1 + r)`, so tiny margins survive
/// the working precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuxiliaryCheck {
    pub d: u32,
    #[serde(serialize_with = "crate::report::ser_integer")]
    pub t: Integer,
    /// `h(t,t) - h(t+1,t+1)`, rounded up.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub literal_exponent: Float,
    /// `h(t,t) 2(d-1)/(2^(d-1) - t)`, rounded up.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub bound_exponent: Float,
    /// `ln(1 + r)` for the target `1 + r`, rounded down.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub target_log: Float,
    pub literal_holds: bool,
    pub bound_holds: bool,
}

fn auxiliary(d: u32, t: Integer, excess: Rational) -> Result<AuxiliaryCheck> {
    check_dimension(d)?;
    let n = half_order(d);
    if Integer::from(&n - &t) < 2 {
        return Err(Error::NotApplicable(format!("2^(d-1) - t < 2 at d = {d}")));
    }
    let prec = DEFAULT_PRECISION;
    let up = |r: Rational| Float::with_val_round(prec, r, Round::Up).0;
    let t1 = Integer::from(&t + 1u32);
    let literal_exponent = up(h_ab(d, &t, &t) - h_ab(d, &t1, &t1));
    let rest = Integer::from(&n - &t);
    let bound_exponent = up(h_ab(d, &t, &t) * Rational::from((2 * (d - 1), rest)));
    let mut target_log = Float::with_val_round(prec, &excess, Round::Down).0;
    target_log.ln_1p_round(Round::Down);
    target_log.next_down();
    Ok(AuxiliaryCheck {
        d,
        literal_holds: literal_exponent <= target_log,
        bound_holds: bound_exponent <= target_log,
        t,
        literal_exponent,
        bound_exponent,
        target_log,
    })
}

/// Middle-range auxiliary step at its worst point `t = 2^(d-3)` against `1 + 0.76^d`.
pub fn middle_auxiliary(d: u32) -> Result<AuxiliaryCheck> {
    if d < 4 {
        return Err(Error::InvalidParameter("needs d >= 4".into()));
    }
    let t = Integer::from(1) << (d - 3);
    auxiliary(d, t, Rational::from((19, 25)).pow(d))
}

/// Central-range auxiliary step at the left end `t = ceil(2^(d-1)(1/2 - 1/d))` against `1 + d^2/2^d`.
pub fn central_auxiliary(d: u32) -> Result<AuxiliaryCheck> {
    if d < 3 {
        return Err(Error::InvalidParameter("needs d >= 3".into()));
    }
    let n = half_order(d);
    let left = Rational::from((n, 1)) * (Rational::from((1, 2)) - Rational::from((1, d)));
    let t = Integer::from(left.ceil_ref());
    auxiliary(d, t, Rational::from((Integer::from(d) * d, Integer::from(1) << d)))
}

pub fn auxiliary_thresholds(lo: u32, hi: u32) -> Vec<ScanThreshold> {
    let mut out = Vec::new();
    for (name, f, min_d) in [
        ("middle-auxiliary", middle_auxiliary as fn(u32) -> Result<AuxiliaryCheck>, 4u32),
        ("central-auxiliary", central_auxiliary as fn(u32) -> Result<AuxiliaryCheck>, 3u32),
    ] {
        out.push(scan(name, lo.max(min_d), hi, |d| match f(d) {
            Ok(a) => (a.literal_holds, Some(a.literal_exponent)),
            Err(_) => (false, None),
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn int(v: u64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of_t(5, &int(8)).unwrap(), 1);
        assert_eq!(lambda_of_t(5, &int(4)).unwrap(), q("1/3"));
        assert_eq!(lambda_of_t(5, &int(0)).unwrap(), 0);
        assert!(lambda_of_t(5, &int(16)).is_err());
        for d in 2..=30 {
            assert_eq!(lambda_of_t(d, &(Integer::from(1) << (d - 2))).unwrap(), 1);
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(big_f(&q("3/7"), 0, 0), 1);
        for d in 1..=6u64 {
            for k in 0..4u64 {
                assert_eq!(big_f(&q("1"), k, (d * k) as i64), Rational::from((1, Integer::from(1) << (d * k) as u32)));
            }
        }
        assert_eq!(big_f(&q("1"), 1, -2), 4);
        let l = big_f_log2(&q("1"), &int(3), &int(10), 128).to_f64();
        assert_eq!(l, -10.0);
    }

    /// `F_{λ(t)}(k, dk) = (t/2^(d-1) (1 - t/2^(d-1))^(d-1))^k`.
    #[test]
    fn weight_identity_grid() {
        for d in 2..=10u32 {
            let n = 1u64 << (d - 1);
            for t in 1..n {
                for k in 0..=5u64 {
                    let lambda = lambda_of_t(d, &int(t)).unwrap();
                    let lhs = big_f(&lambda, k, (d as u64 * k) as i64);
                    let rhs = (gld(d, &int(t)) / Integer::from(n)).pow(k as u32);
                    assert_eq!(lhs, rhs, "d={d} t={t} k={k}");
                }
            }
        }
    }

    #[test]
    fn f_cut_examples() {
        // 5^7 e / 2 = 106182.88...
        for d in [20u32, 40, 100, 200] {
            let t = Integer::from(1) << (d - 2);
            assert_eq!(f_cut(d, &t).unwrap(), 106183);
        }
        let d = 30;
        let top = half_order(d) - 1u32;
        assert_eq!(f_cut(d, &top).unwrap(), d);
        assert!(f_cut(5, &int(0)).is_err());
        assert!(f_cut(5, &int(16)).is_err());
    }

    #[test]
    fn f_cut_decreasing_past_peak() {
        let d = 10u32;
        let n = 1u64 << (d - 1);
        let start = (n - 1).div_ceil(d as u64 - 1);
        let mut prev = f_cut(d, &int(start)).unwrap();
        for t in start + 1..n {
            let cur = f_cut(d, &int(t)).unwrap();
            assert!(cur <= prev, "t={t}");
            prev = cur;
        }
    }

    #[test]
    fn product_decreasing_past_peak() {
        for d in [8u32, 12] {
            let n = 1u64 << (d - 1);
            let start = (n - 1).div_ceil(d as u64 - 1);
            for t in start..n - 1 {
                assert!(gld(d, &int(t + 1)) < gld(d, &int(t)), "d={d} t={t}");
            }
        }
    }

    #[test]
    fn stirling_bracket() {
        let wp = 256;
        for n in 1u32..=60 {
            let fact = Float::with_val(wp, Integer::from(Integer::factorial(n)));
            let nf = Float::with_val(wp, n);
            let core = nf.clone().pow(&nf) * (-nf.clone()).exp() * nf.sqrt();
            assert!(core.clone() * 2u32 <= fact, "n={n}");
            assert!(fact <= core * 3u32, "n={n}");
        }
    }

    #[test]
    fn small_sum_at_unit_activity() {
        let eng = EstimateEngine::default();
        for d in 2..=30u32 {
            let expected = Rational::from((1, 2)) + Rational::from((Integer::from(4 * d * d), Integer::from(1) << d));
            assert_eq!(small_sum_exponent(d, &q("1")), expected);
            let b = eng.small_sum_bound(d, &q("1")).unwrap();
            let direct = expected.to_f64() / std::f64::consts::LN_2;
            assert!((b.log2.to_f64() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn small_sum_dominated_by_first_term() {
        let eng = EstimateEngine::default();
        let lambda = q("3/2");
        for d in 20..=40u32 {
            let first = Rational::from(&lambda / 2u32) * Rational::from(2u32 / Rational::from(1 + &lambda)).pow(d);
            let total = small_sum_exponent(d, &lambda);
            let ratio = Rational::from(&total / &first).to_f64();
            assert!(ratio >= 1.0 && ratio < 1.0 + 1e-2, "d={d} ratio={ratio}");
            assert!(eng.small_sum_bound(d, &lambda).is_ok());
        }
    }

    #[test]
    fn linked_sum_k1() {
        let eng = EstimateEngine::default();
        for d in [4u32, 5, 10] {
            for l in ["1/2", "1", "2"] {
                let lambda = q(l);
                let expected = big_f(&lambda, 1, d as i64) * (Integer::from(1) << d);
                let b = eng.linked_sum_bound(d, &lambda, 1).unwrap();
                let direct = expected.to_f64().log2();
                assert!((b.log2.to_f64() - direct).abs() < 1e-9);
            }
        }
        assert!(eng.linked_sum_bound(5, &q("1"), 0).is_err());
        assert!(eng.linked_sum_bound(5, &q("0"), 1).is_err());
    }

    #[test]
    fn small_dimension_not_applicable() {
        let eng = EstimateEngine::default();
        assert!(matches!(eng.e1_factor(5, &int(8)), Err(Error::NotApplicable(_))));
        let w = eng.cube_window(5, &int(8)).unwrap();
        assert!(w.e1_lower.is_none() && w.e1_note.is_some());
    }

    #[test]
    fn window_near_top_is_tight() {
        let eng = EstimateEngine::default();
        for (d, slack) in [(30u32, 1e-2), (64, 1e-6)] {
            let t = half_order(d) - 1u32;
            let w = eng.cube_window(d, &t).unwrap();
            assert_eq!(w.range, RangeTag::Upper);
            let e2 = w.e2_upper.unwrap().to_f64();
            assert!(e2 >= 1.0 && e2 < 1.0 + slack, "d={d} e2={e2}");
            // the lower factor is stated only up to (3/4) 2^(d-1)
            assert!(w.e1_lower.is_none());
        }
    }

    #[test]
    fn central_matches_exact_small() {
        let eng = EstimateEngine::default();
        let d = 6;
        for t in 0..=32u64 {
            let c = eng.central_log2(d, &int(t)).unwrap().to_f64();
            let b = binomial(32, t as i64).to_f64();
            let expected = 1.0 + b.log2() + gld(d, &int(t)).to_f64() * std::f64::consts::LOG2_E;
            assert!((c - expected).abs() < 1e-9);
        }
        // the lgamma path against the exact path at a dimension where both apply
        let d = 17;
        let t = Integer::from(40000);
        let exact = eng.log2_central_binomial(d, &t);
        let n = half_order(d);
        let wp = 300;
        let lg = |m: Integer| Float::with_val(wp, m + 1u32).ln_gamma();
        let via_gamma = (lg(n.clone()) - lg(t.clone()) - lg(n - &t)) / Float::with_val(wp, Constant::Log2);
        assert!((exact.to_f64() - via_gamma.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn range_tags() {
        let eng = EstimateEngine::default();
        assert_eq!(eng.range_tag(20, &int(0)).unwrap(), RangeTag::Degenerate);
        assert_eq!(eng.range_tag(20, &half_order(20)).unwrap(), RangeTag::Degenerate);
        // t = 2^(d-2) sits in the upper range once 2 log d / d < 1/sqrt 2 - 1/2
        let first = (2..=200u32)
            .find(|&d| (d..=200).all(|e| eng.range_tag(e, &(Integer::from(1) << (e - 2))).unwrap() == RangeTag::Upper))
            .unwrap();
        assert_eq!(first, 57);
        let small_c = EstimateEngine::new(128, q("1/100"));
        assert_eq!(small_c.range_tag(40, &(Integer::from(1) << 35)).unwrap(), RangeTag::Middle);
        assert_eq!(eng.range_tag(40, &(Integer::from(1) << 35)).unwrap(), RangeTag::Below);
    }

    #[test]
    fn e1_below_e2_where_both_apply() {
        let eng = EstimateEngine::default();
        let mut compared = 0;
        for d in (20..=100u32).step_by(8) {
            let n = half_order(d);
            let start = Integer::from((eng.upper_range_start(d) * Float::with_val(256, &n)).ceil().to_integer().unwrap());
            let width = Integer::from(&n - 1u32) - &start;
            for i in 0..50u32 {
                let t = Integer::from(&start + Integer::from(&width * i) / 49u32);
                if let (Ok(e1), Ok(e2)) = (eng.e1_factor(d, &t), eng.e2_factor(d, &t)) {
                    assert!(e1.value <= e2.value, "d={d} t={t}");
                    compared += 1;
                }
            }
        }
        assert!(compared > 0);
    }

    #[test]
    fn type2_negligible_at_quarter() {
        let eng = EstimateEngine::default();
        for d in 10..=40u32 {
            let t = Integer::from(1) << (d - 2);
            let e2 = eng.e2_factor(d, &t).unwrap();
            assert!(e2.type2 < e2.type1, "d={d}");
        }
    }

    #[test]
    fn case_inequalities() {
        assert!(case_evaluation(UnimodalityCase::UpperDecreasing, 50).holds);
        let ev = closing_case_check(30);
        assert_eq!(ev.len(), 3);
        assert!(case_ratio(UnimodalityCase::UpperDecreasing, 10).is_none());
        let th = closing_thresholds(2, 200);
        assert_eq!(th[0].d0, Some(23));
        assert_eq!(th[1].d0, Some(2));
        // (1 + 5d^4/2^d)(2^(d-2) - 15d^2 + 1) exceeds (1 - 14d^2/2^d)(2^(d-2) + 15d^2) for every d
        assert_eq!(th[2].d0, None);
        for d in 10..=200 {
            assert!(!case_evaluation(UnimodalityCase::CentralIncreasing, d).holds);
        }
    }

    #[test]
    fn auxiliaries() {
        let a = middle_auxiliary(60).unwrap();
        assert!(a.literal_exponent > 0 && a.bound_exponent >= a.literal_exponent);
        let c4 = central_auxiliary(40).unwrap();
        assert!(c4.bound_exponent >= c4.literal_exponent);
        let th = auxiliary_thresholds(4, 200);
        assert_eq!(th[0].d0, None);
        assert_eq!(th[1].d0, Some(4));
        let wide = auxiliary_thresholds(4, 700);
        assert_eq!(wide[0].d0, Some(389));
        assert!(central_auxiliary(2).is_err());
    }
}
