//! Closed-form bounds on `i_t(G)` and `P(G, lambda)`: the entropy sandwich for
//! regular graphs, the partition-function bound for regular graphs, its
//! almost-regular counterpart driven by `h(G, d)`, and the sufficient
//! conditions for `i_l > i_j`.
//!
//! All values are base-2 logarithms. Upper bounds are rounded up and lower
//! bounds rounded down (see [`crate::numeric::settle`]).

use std::cmp::Ordering;
use std::io::Write;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::count::IndSetSequence;
use crate::error::{Error, Result};
use crate::graph::{regularity_profile, Bipartition, Graph};
use crate::numeric::{
    binomial, cmp_log2, log2_integer, log2_rational, settle, Side, DEFAULT_PRECISION, GUARD_BITS,
};
use crate::report::opt_float_cell;

#[derive(Debug, Clone, Serialize)]
pub struct EntropyValue {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "crate::report::ser_float")]
    pub value: Float,
}

/// Exact-binomial lower bound on `i_t` with the entropy weakening alongside.
#[derive(Debug, Clone)]
pub struct LowerBound {
    pub binomial: Integer,
    pub log2: Float,
    pub weakened_log2: Float,
}

#[derive(Debug, Clone)]
pub struct PartitionBound {
    pub log2: Float,
    pub h_value: Rational,
    pub c_lambda: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepBound {
    /// Least gap `s` making every pair in the increasing range satisfy the sufficient condition.
    pub s: u64,
    /// `1 / H'((1 - eps)/2)`.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub c_eps: Float,
    /// `c_eps * (n/d + log2(2n))`.
    #[serde(serialize_with = "crate::report::ser_float")]
    pub analytic: Float,
}

/// Evaluates the bounds at a fixed working precision.
#[derive(Debug, Clone, Copy)]
pub struct BoundsEngine {
    prec: u32,
}

impl Default for BoundsEngine {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION)
    }
}

impl BoundsEngine {
    pub fn new(prec: u32) -> Self {
        Self { prec: prec.max(16) }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn guard(&self) -> u32 {
        self.prec + GUARD_BITS
    }

    fn rat(&self, r: &Rational) -> Float {
        Float::with_val(self.guard(), r)
    }

    fn log2(&self, r: &Rational) -> Float {
        log2_rational(r, self.guard(), Side::Nearest)
    }

    /// `H(x)` at guard precision, round-to-nearest.
    fn h_guard(&self, x: &Rational) -> Float {
        if *x == 0 || *x == 1 {
            return Float::new(self.guard());
        }
        let y = Rational::from(1 - x);
        let a = self.rat(x) * self.log2(x);
        let b = self.rat(&y) * self.log2(&y);
        -(a + b)
    }

    pub fn entropy(&self, x: &Rational) -> Result<EntropyValue> {
        check_unit(x)?;
        Ok(EntropyValue {
            x: x.clone(),
            value: settle(&self.h_guard(x), self.prec, Side::Nearest),
        })
    }

    /// `H(x)` rounded to the requested side.
    pub fn entropy_bound(&self, x: &Rational, side: Side) -> Result<Float> {
        check_unit(x)?;
        if *x == 0 || *x == 1 {
            return Ok(Float::new(self.prec));
        }
        Ok(settle(&self.h_guard(x), self.prec, side))
    }

    /// `H(2t/|V|) |V|/2 + |V|/(2d)`, an upper bound on `log2 i_t` for `d`-regular graphs.
    pub fn entropy_upper(&self, n_verts: u64, d: u64, t: u64) -> Result<Float> {
        check_degree(d)?;
        check_half(n_verts, t)?;
        let v = Rational::from(n_verts);
        let x = Rational::from((2 * t, n_verts.max(1)));
        let value = self.h_guard(&x) * self.rat(&Rational::from(&v / 2u32))
            + self.rat(&(v / Rational::from(2 * d)));
        Ok(settle(&value, self.prec, Side::Upper))
    }

    /// `log2 C(|V|/2, t)` and its Stirling weakening
    /// `H(2t/|V|) |V|/2 - log2(|V|)/2`, both lower bounds for bipartite graphs.
    pub fn binomial_lower(&self, n_verts: u64, t: u64) -> Result<LowerBound> {
        check_half(n_verts, t)?;
        let c = binomial(n_verts / 2, t as i64);
        let log2 = log2_integer(&c, self.prec, Side::Lower);
        let weakened = if n_verts == 0 {
            Float::new(self.guard())
        } else {
            let x = Rational::from((2 * t, n_verts));
            let v = Rational::from(n_verts);
            self.h_guard(&x) * self.rat(&Rational::from(&v / 2u32)) - self.log2(&v) / 2u32
        };
        Ok(LowerBound {
            binomial: c,
            log2,
            weakened_log2: settle(&weakened, self.prec, Side::Lower),
        })
    }

    /// `|V|/(2d) + (|V|/2) log2(1 + lambda)`, bounding `log2 P(G, lambda)` for `d`-regular graphs.
    pub fn regular_partition_bound(&self, n_verts: u64, d: u64, lambda: &Rational) -> Result<Float> {
        check_degree(d)?;
        check_positive(lambda)?;
        Ok(settle(&self.regular_partition_guard(n_verts, d, lambda), self.prec, Side::Upper))
    }

    fn regular_partition_guard(&self, n_verts: u64, d: u64, lambda: &Rational) -> Float {
        let v = Rational::from(n_verts);
        self.rat(&Rational::from(&v / Rational::from(2 * d)))
            + self.log2(&Rational::from(1 + lambda)) * self.rat(&(v / 2u32))
    }

    /// `log2(bound(lambda) / lambda^t)` for an arbitrary activity.
    pub fn it_bound_at_lambda(&self, n_verts: u64, d: u64, t: u64, lambda: &Rational) -> Result<Float> {
        check_degree(d)?;
        check_positive(lambda)?;
        let value = self.regular_partition_guard(n_verts, d, lambda) - self.log2(lambda) * t;
        Ok(settle(&value, self.prec, Side::Upper))
    }

    /// The same bound as [`Self::entropy_upper`], reached by minimizing
    /// `P/lambda^t` at `lambda = 2t/(|V| - 2t)` instead of through `H`.
    pub fn optimized_it_upper(&self, n_verts: u64, d: u64, t: u64) -> Result<Float> {
        check_degree(d)?;
        check_half(n_verts, t)?;
        if t == 0 || 2 * t == n_verts {
            let v = Rational::from((n_verts, 2 * d));
            return Ok(settle(&self.rat(&v), self.prec, Side::Upper));
        }
        let lambda = Rational::from((2 * t, n_verts - 2 * t));
        let value = self.regular_partition_guard(n_verts, d, &lambda) - self.log2(&lambda) * t;
        Ok(settle(&value, self.prec, Side::Upper))
    }

    /// `n log2(1 + lambda) + n h(G,d) log2 C(lambda)` with `2n = |V|`.
    pub fn almost_regular_partition_bound(&self, g: &Graph, b: &Bipartition, d: &Rational, lambda: &Rational) -> Result<PartitionBound> {
        check_positive(lambda)?;
        let profile = regularity_profile(g, b, d)?;
        let c_lambda = c_lambda(lambda);
        let n = self.rat(&profile.half_order);
        let value = self.log2(&Rational::from(1 + lambda)) * &n
            + n * self.rat(&profile.h_value) * self.log2(&c_lambda);
        Ok(PartitionBound {
            log2: settle(&value, self.prec, Side::Upper),
            h_value: profile.h_value,
            c_lambda,
        })
    }

    /// The piecewise coefficient `C(t, n)` for `0 < t < n`, rounded up.
    pub fn ctn_coefficient(&self, t: u64, n: u64) -> Result<Float> {
        if t == 0 || t >= n {
            return Err(Error::InvalidParameter(format!("C(t,n) needs 0 < t < n, got t={t}, n={n}")));
        }
        let value = match ctn_branch(t, n) {
            CtnBranch::High => self.log2(&Rational::from((2 * n, n - t))),
            CtnBranch::Middle => Float::with_val(self.guard(), 8),
            CtnBranch::Low => self.log2(&Rational::from((2 * n, t))),
        };
        Ok(settle(&value, self.prec, Side::Upper))
    }

    /// `max C(t, n)` over `t in [eps n, (1 - eps) n]`, namely `max{8, log2(2/eps)}`.
    pub fn c_epsilon(&self, eps: &Rational) -> Result<Float> {
        check_eps(eps)?;
        let tail = self.log2(&Rational::from(2 / eps));
        let value = if tail > 8 { tail } else { Float::with_val(self.guard(), 8) };
        Ok(settle(&value, self.prec, Side::Upper))
    }

    /// `H'(x) = log2((1 - x)/x)` at guard precision.
    fn h_prime(&self, x: &Rational) -> Float {
        self.log2(&Rational::from((1 - x.clone()) / x))
    }

    /// Whether `H(l/n) - H(j/n) > 1/d + log2(2n)/(2n)`, decided with the left
    /// side rounded down and the right side rounded up.
    pub fn suff_condition_regular(&self, n: u64, d: u64, j: u64, l: u64) -> Result<bool> {
        check_degree(d)?;
        if n == 0 || j > n || l > n {
            return Err(Error::InvalidParameter(format!("need 0 <= j, l <= n with n >= 1 (n={n}, j={j}, l={l})")));
        }
        if j == l {
            return Ok(false);
        }
        let hl = settle(&self.h_guard(&Rational::from((l, n))), self.guard(), Side::Lower);
        let hj = settle(&self.h_guard(&Rational::from((j, n))), self.guard(), Side::Upper);
        let lhs = settle(&(hl - hj), self.prec, Side::Lower);
        let rhs_exact = self.rat(&Rational::from((1, d)))
            + self.log2(&Rational::from(2 * n)) / Float::with_val(self.guard(), 2 * n);
        let rhs = settle(&rhs_exact, self.prec, Side::Upper);
        Ok(lhs > rhs)
    }

    /// Smallest `s >= 1` such that every `j < l <= floor((1-eps)n/2)` with
    /// `l - j >= s` meets [`Self::suff_condition_regular`].
    ///
    /// By concavity of `H` the binding pair for a gap `s` sits at the right end
    /// of the range, and the condition there is monotone in `s`, so a binary
    /// search over `s` suffices. Returns `R + 1` (vacuous) when no gap works.
    pub fn regular_step_bound(&self, n: u64, d: u64, eps: &Rational) -> Result<StepBound> {
        check_degree(d)?;
        check_eps(eps)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let right = right_end(n, eps);
        let (mut lo, mut hi) = (1u64, right + 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.suff_condition_regular(n, d, right - mid, right)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let x = Rational::from((1 - eps.clone()) / 2u32);
        let c_eps = Float::with_val(self.guard(), 1) / self.h_prime(&x);
        let analytic = c_eps.clone()
            * (self.rat(&Rational::from((n, d))) + self.log2(&Rational::from(2 * n)));
        Ok(StepBound {
            s: lo,
            c_eps: settle(&c_eps, self.prec, Side::Upper),
            analytic: settle(&analytic, self.prec, Side::Upper),
        })
    }

    /// `K(eps) = (C(eps) + 1) / H'((1 - eps)/2)`: with `s > K max{log2 n, n h}`
    /// every pair at gap `s` in either monotone range satisfies the
    /// almost-regular sufficient condition (valid for `n >= 2`).
    pub fn almost_regular_constant(&self, eps: &Rational) -> Result<Float> {
        let c = Float::with_val(self.guard(), self.c_epsilon(eps)?);
        let x = Rational::from((1 - eps.clone()) / 2u32);
        Ok(settle(&((c + 1u32) / self.h_prime(&x)), self.prec, Side::Upper))
    }

    /// Gap `s = floor(K(eps) * max{log2 n, n h}) + 1`.
    pub fn almost_regular_step(&self, n: u64, h_value: &Rational, eps: &Rational) -> Result<u64> {
        let k = Float::with_val(self.guard(), self.almost_regular_constant(eps)?);
        let log_n = self.log2(&Rational::from(n.max(1)));
        let nh = self.rat(&Rational::from(h_value * n));
        let m = if log_n > nh { log_n } else { nh };
        let prod = settle(&(k * m), self.prec, Side::Upper);
        let floor = prod.floor().to_integer().expect("finite step bound");
        floor
            .to_u64()
            .and_then(|f| f.checked_add(1))
            .ok_or_else(|| Error::InvalidParameter("step bound overflows u64".into()))
    }

    /// Per-`t` sandwich for a bipartite graph. Regular graphs of degree `d` use
    /// the entropy upper bound; others use the almost-regular bound with `h(G, d)`.
    pub fn bound_table(
        &self,
        g: &Graph,
        b: &Bipartition,
        d: &Rational,
        exact: Option<&IndSetSequence>,
    ) -> Result<BoundTable> {
        let n_verts = g.order() as u64;
        let half = n_verts / 2;
        let regular_degree = g.is_regular().filter(|&r| r > 0 && Rational::from(r) == *d);
        let h_value = if regular_degree.is_none() {
            Some(regularity_profile(g, b, d)?.h_value)
        } else {
            None
        };
        let last = exact.map_or(half as usize, |s| s.alpha().max(half as usize));
        let mut rows = Vec::with_capacity(last + 1);
        for t in 0..=last as u64 {
            let mut sources = Vec::new();
            let lower = if t <= half {
                sources.push("binomial-lower");
                Some(self.binomial_lower(n_verts, t)?)
            } else {
                None
            };
            let upper = match (regular_degree, &h_value) {
                (Some(r), _) if t <= half => {
                    sources.push("entropy-upper");
                    Some(self.entropy_upper(n_verts, r as u64, t)?)
                }
                (None, Some(h)) if t > 0 && t < half => {
                    sources.push("almost-regular-upper");
                    Some(self.almost_regular_upper(half, t, h)?)
                }
                _ if t == 0 => {
                    sources.push("trivial");
                    Some(Float::new(self.prec))
                }
                _ => None,
            };
            let exact_count = exact.map(|s| s.get(t as usize));
            let exact_log2 = exact_count
                .as_ref()
                .filter(|c| **c > 0)
                .map(|c| log2_integer(c, self.prec, Side::Nearest));
            rows.push(BoundRow {
                t,
                lower_binomial: lower.as_ref().map(|l| l.binomial.clone()),
                lower_log2: lower.map(|l| l.log2),
                upper_log2: upper,
                exact: exact_count,
                exact_log2,
                sources,
            });
        }
        Ok(BoundTable {
            n: Rational::from((n_verts, 2)),
            d: d.clone(),
            rows,
        })
    }

    /// `H(t/n) n + C(t, n) n h`, the almost-regular analogue of the entropy upper bound.
    pub fn almost_regular_upper(&self, n: u64, t: u64, h_value: &Rational) -> Result<Float> {
        let c = Float::with_val(self.guard(), self.ctn_coefficient(t, n)?);
        let value = self.h_guard(&Rational::from((t, n))) * n + c * self.rat(&Rational::from(h_value * n));
        Ok(settle(&value, self.prec, Side::Upper))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CtnBranch {
    High,
    Middle,
    Low,
}

fn ctn_branch(t: u64, n: u64) -> CtnBranch {
    let (t, n) = (t as u128 * 128, n as u128);
    if t >= 127 * n {
        CtnBranch::High
    } else if t >= n {
        CtnBranch::Middle
    } else {
        CtnBranch::Low
    }
}

/// `C(lambda)`: `2(1 + 1/lambda)` below `1/127`, `256` on `[1/127, 127]`, `2(1 + lambda)` above.
pub fn c_lambda(lambda: &Rational) -> Rational {
    if Rational::from(lambda * 127u32) <= 1 {
        Rational::from(2 * (1 + Rational::from(lambda.recip_ref())))
    } else if *lambda <= 127 {
        Rational::from(256)
    } else {
        Rational::from(2 * (1 + lambda.clone()))
    }
}

/// `floor((1 - eps) n / 2)`.
pub fn right_end(n: u64, eps: &Rational) -> u64 {
    let r = Rational::from((1 - eps.clone()) * n) / 2u32;
    r.floor().numer().to_u64().unwrap_or(0)
}

fn check_unit(x: &Rational) -> Result<()> {
    if *x < 0 || *x > 1 {
        return Err(Error::InvalidParameter(format!("entropy argument {x} outside [0, 1]")));
    }
    Ok(())
}

fn check_degree(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    Ok(())
}

fn check_half(n_verts: u64, t: u64) -> Result<()> {
    if 2 * t > n_verts {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds |V|/2 = {}/2", n_verts)));
    }
    Ok(())
}

fn check_positive(lambda: &Rational) -> Result<()> {
    if *lambda <= 0 {
        return Err(Error::InvalidParameter(format!("activity must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_eps(eps: &Rational) -> Result<()> {
    if *eps <= 0 || *eps >= 1 {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub t: u64,
    #[serde(skip)]
    pub lower_binomial: Option<Integer>,
    #[serde(serialize_with = "crate::report::ser_opt_float")]
    pub lower_log2: Option<Float>,
    #[serde(serialize_with = "crate::report::ser_opt_float")]
    pub upper_log2: Option<Float>,
    #[serde(skip)]
    pub exact: Option<Integer>,
    #[serde(serialize_with = "crate::report::ser_opt_float")]
    pub exact_log2: Option<Float>,
    pub sources: Vec<&'static str>,
}

/// A violated bound: `(t, which side)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub t: u64,
    pub side: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTable {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub n: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d: Rational,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    /// Rows where the exact count escapes the bounds. The lower side is an
    /// exact integer comparison; the upper side compares `log2 i_t` rounded
    /// against the bound.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for row in &self.rows {
            let Some(exact) = &row.exact else { continue };
            if let Some(lb) = &row.lower_binomial {
                if lb > exact {
                    out.push(Violation { t: row.t, side: "lower" });
                }
            }
            if let Some(ub) = &row.upper_log2 {
                let escaped = *exact > 0 && cmp_log2(&Rational::from(exact), ub) == Ordering::Greater;
                if escaped {
                    out.push(Violation { t: row.t, side: "upper" });
                }
            }
        }
        out
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "t,lower_log2,upper_log2,exact_log2,sources")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.t,
                opt_float_cell(&r.lower_log2),
                opt_float_cell(&r.upper_log2),
                opt_float_cell(&r.exact_log2),
                r.sources.join(";")
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartition, hypercube};
    use crate::numeric::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn f64_of(f: &Float) -> f64 {
        f.to_f64()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        let e = BoundsEngine::default();
        assert_eq!(e.entropy(&q("1/2")).unwrap().value, 1);
        assert_eq!(e.entropy(&q("0")).unwrap().value, 0);
        assert_eq!(e.entropy(&q("1")).unwrap().value, 0);
        let quarter = e.entropy(&q("1/4")).unwrap().value;
        let closed = 2.0 - 0.75 * 3f64.log2();
        assert!(close(&quarter, closed, 1e-15));
        // H(1/4) = 2 - (3/4) log2 3 to far more than double precision
        let three = Float::with_val(200, 3).log2();
        let exact = Float::with_val(200, 2) - three * 0.75f64;
        let diff = Float::with_val(200, &quarter - &exact).abs();
        assert!(diff < Float::with_val(200, 2f64.powi(-120)));
        assert!(e.entropy(&q("3/2")).is_err());
        assert!(e.entropy(&q("-1/2")).is_err());
    }

    #[test]
    fn entropy_directed_rounding_brackets() {
        let e = BoundsEngine::default();
        for s in ["1/3", "1/7", "99/100", "1/1000000"] {
            let x = q(s);
            let lo = e.entropy_bound(&x, Side::Lower).unwrap();
            let hi = e.entropy_bound(&x, Side::Upper).unwrap();
            let mid = e.entropy(&x).unwrap().value;
            assert!(lo < mid && mid < hi, "{s}");
        }
    }

    #[test]
    fn entropy_bound_examples() {
        let e = BoundsEngine::default();
        let up = e.entropy_upper(16, 4, 4).unwrap();
        assert!(up >= 10 && close(&up, 10.0, 1e-30));
        let t0 = e.entropy_upper(16, 4, 0).unwrap();
        assert!(t0 >= 2 && close(&t0, 2.0, 1e-30));
        let lo = e.binomial_lower(16, 4).unwrap();
        assert_eq!(lo.binomial, 70);
        assert!(close(&lo.log2, 70f64.log2(), 1e-14));
        assert!(lo.log2 <= 70f64.log2() + 1e-15);
        assert!(close(&lo.weakened_log2, 6.0, 1e-30) && lo.weakened_log2 <= 6);
        assert!(lo.weakened_log2 <= lo.log2);
        assert_eq!(e.binomial_lower(16, 0).unwrap().log2, 0);
        assert!(e.entropy_upper(16, 4, 9).is_err());
        assert!(e.binomial_lower(16, 9).is_err());
        assert!(e.entropy_upper(16, 0, 1).is_err());
    }

    #[test]
    fn regular_partition_examples() {
        let e = BoundsEngine::default();
        // K_{d,d}: 2^{d+1} against exact 2^{d+1} - 1
        for d in 2..=8u64 {
            let b = e.regular_partition_bound(2 * d, d, &q("1")).unwrap();
            assert!(close(&b, (d + 1) as f64, 1e-30) && b >= (d + 1) as u32);
        }
        let q4 = e.regular_partition_bound(16, 4, &q("1")).unwrap();
        assert!(close(&q4, 10.0, 1e-30));
        assert_eq!(cmp_log2(&Rational::from(743), &q4), Ordering::Less);
        let tiny = e.regular_partition_bound(16, 4, &q("1/1000000000000")).unwrap();
        assert!(tiny > 2 && close(&tiny, 2.0, 1e-9));
        assert!(e.regular_partition_bound(16, 4, &q("0")).is_err());
    }

    #[test]
    fn optimized_route_matches_entropy_route() {
        let e = BoundsEngine::default();
        for (v, d) in [(16u64, 4u64), (32, 5), (64, 6), (1000, 7), (1 << 20, 20)] {
            for t in [1, 2, v / 8, v / 4, v / 2 - 1, v / 2, 0] {
                let a = e.entropy_upper(v, d, t).unwrap();
                let b = e.optimized_it_upper(v, d, t).unwrap();
                let ulp = Float::with_val(128, 1u32) << (a.get_exp().unwrap_or(0) - 128);
                let diff = Float::with_val(128, &a - &b).abs();
                assert!(diff <= Float::with_val(128, &ulp * 2u32), "|V|={v} d={d} t={t}: {a} vs {b}");
            }
        }
        let t1 = e.optimized_it_upper(16, 4, 1).unwrap();
        assert!(t1 >= 4);
    }

    #[test]
    fn optimal_lambda_is_a_minimum() {
        let e = BoundsEngine::default();
        for (v, d, t) in [(16u64, 4u64, 4u64), (64, 6, 10), (100, 3, 45)] {
            let star = Rational::from((2 * t, v - 2 * t));
            let at_star = e.it_bound_at_lambda(v, d, t, &star).unwrap();
            for factor in ["9/10", "11/10", "1/2", "2"] {
                let other = e.it_bound_at_lambda(v, d, t, &Rational::from(&star * q(factor))).unwrap();
                assert!(other >= at_star, "{v} {d} {t} {factor}");
            }
        }
    }

    #[test]
    fn eg_examples() {
        let e = BoundsEngine::default();
        let g = hypercube(4);
        let b = bipartition(&g).unwrap();
        let eg = e.almost_regular_partition_bound(&g, &b, &q("4"), &q("1")).unwrap();
        assert_eq!(eg.c_lambda, 256);
        assert!(close(&eg.log2, 24.0, 1e-30) && eg.log2 >= 24);
        assert_eq!(cmp_log2(&Rational::from(743), &eg.log2), Ordering::Less);
        assert_eq!(c_lambda(&q("127")), 256);
        assert_eq!(c_lambda(&q("128")), 258);
        assert_eq!(c_lambda(&q("1/127")), 256);
        assert_eq!(c_lambda(&q("1/128")), 258);
    }

    #[test]
    fn ctn_examples() {
        let e = BoundsEngine::default();
        assert!(close(&e.ctn_coefficient(128, 256).unwrap(), 8.0, 1e-30));
        assert!(close(&e.ctn_coefficient(1, 256).unwrap(), 9.0, 1e-30));
        assert!(close(&e.ctn_coefficient(255, 256).unwrap(), 9.0, 1e-30));
        // both boundary points meet the middle branch
        assert!(close(&e.ctn_coefficient(2, 256).unwrap(), 8.0, 1e-30));
        assert!(close(&e.ctn_coefficient(254, 256).unwrap(), 8.0, 1e-30));
        assert!(e.ctn_coefficient(0, 256).is_err());
        assert!(e.ctn_coefficient(256, 256).is_err());
        assert!(close(&e.c_epsilon(&q("1/10")).unwrap(), 8.0, 1e-30));
        assert!(close(&e.c_epsilon(&q("1/1024")).unwrap(), 11.0, 1e-30));
    }

    #[test]
    fn sufficient_condition_examples() {
        let e = BoundsEngine::default();
        assert!(!e.suff_condition_regular(1024, 32, 100, 100).unwrap());
        assert!(e.suff_condition_regular(1024, 32, 100, 200).unwrap());
        assert!(!e.suff_condition_regular(1024, 4, 500, 501).unwrap());
        assert!(e.suff_condition_regular(1024, 4, 2000, 1).is_err());
    }

    #[test]
    fn step_bound_matches_pairwise_scan() {
        let e = BoundsEngine::default();
        for (n, d) in [(64u64, 8u64), (128, 16), (256, 16), (100, 50)] {
            let eps = q("1/2");
            let sb = e.regular_step_bound(n, d, &eps).unwrap();
            let right = right_end(n, &eps);
            let ok = |s: u64| {
                (0..=right).all(|l| (0..=l).all(|j| l - j < s || e.suff_condition_regular(n, d, j, l).unwrap()))
            };
            assert!(ok(sb.s), "n={n} d={d} s={}", sb.s);
            if sb.s > 1 {
                assert!(!ok(sb.s - 1), "n={n} d={d} s={} not minimal", sb.s);
            }
            assert!(sb.s >= 1);
        }
        let sb = e.regular_step_bound(1024, 32, &q("1/2")).unwrap();
        assert!(Float::with_val(128, sb.s) <= sb.analytic);
        let expected_c = 1.0 / (3f64).log2();
        assert!(close(&sb.c_eps, expected_c, 1e-14));
    }

    #[test]
    fn step_bound_monotone_in_degree() {
        let e = BoundsEngine::default();
        let eps = q("1/4");
        let mut last = u64::MAX;
        for d in [2u64, 4, 8, 16, 32, 64, 128] {
            let s = e.regular_step_bound(4096, d, &eps).unwrap().s;
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn entropy_is_symmetric() {
        let e = BoundsEngine::default();
        for k in (1..1000u64).step_by(37) {
            let x = Rational::from((k, 1000));
            let y = Rational::from(1 - x.clone());
            assert_eq!(e.entropy(&x).unwrap().value, e.entropy(&y).unwrap().value);
        }
    }

    #[test]
    fn almost_regular_upper_matches_ctn() {
        let e = BoundsEngine::default();
        let h = q("1/4");
        let v = e.almost_regular_upper(16, 8, &h).unwrap();
        // H(1/2) * 16 + 8 * 16 * 1/4
        assert!(close(&v, 48.0, 1e-30));
        let _ = f64_of(&v);
    }
}
