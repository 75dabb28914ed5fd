//! Finite Hahn series over the rationals with rational exponents.
//!
//! A series is a finite sum `sum c_i t^{e_i}` together with a precision cap:
//! when the cap is finite the value is only known modulo `t^{cap}`. Exact
//! values carry `LogVal::Infinite` as their precision. The valuation of a
//! series is the exponent of its first term.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::arith::{LogVal, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Rat,
    pub coeff: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnSeries {
    /// Strictly increasing exponents, nonzero coefficients, all below `precision`.
    terms: Vec<Term>,
    precision: LogVal,
}

impl Default for HahnSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl HahnSeries {
    pub fn zero() -> Self {
        HahnSeries {
            terms: Vec::new(),
            precision: LogVal::Infinite,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Rat::zero())
    }

    /// `c * t^exp`, exact.
    pub fn monomial(coeff: Rat, exp: Rat) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        HahnSeries {
            terms: vec![Term { exp, coeff }],
            precision: LogVal::Infinite,
        }
    }

    /// `t^exp`, exact.
    pub fn t_pow(exp: Rat) -> Self {
        Self::monomial(Rat::one(), exp)
    }

    /// Zero known only modulo `t^precision`.
    pub fn big_o(precision: Rat) -> Self {
        HahnSeries {
            terms: Vec::new(),
            precision: LogVal::Finite(precision),
        }
    }

    /// Builds a series from arbitrary `(coeff, exp)` pairs: like exponents are
    /// merged, zero coefficients and terms at or above `precision` dropped.
    pub fn from_terms(pairs: impl IntoIterator<Item = (Rat, Rat)>, precision: LogVal) -> Self {
        let mut acc: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (c, e) in pairs {
            if precision.cmp_rat(&e).is_le() {
                continue;
            }
            *acc.entry(e).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(acc, precision)
    }

    fn from_map(acc: BTreeMap<Rat, Rat>, precision: LogVal) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exp, coeff)| Term { exp, coeff })
            .collect();
        HahnSeries { terms, precision }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn precision(&self) -> &LogVal {
        &self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_infinite()
    }

    /// Exactly zero (empty and exact).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// All terms cancelled below a finite precision: the value is unknown
    /// beyond "valuation at least `precision`".
    pub fn is_semi_zero(&self) -> bool {
        self.terms.is_empty() && !self.is_exact()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Exponent of the first term; for an empty series, its precision
    /// (a lower bound, `+inf` for exact zero).
    pub fn valuation(&self) -> LogVal {
        match self.terms.first() {
            Some(t) => LogVal::Finite(t.exp.clone()),
            None => self.precision.clone(),
        }
    }

    /// The valuation is known exactly (not just bounded below).
    pub fn valuation_certified(&self) -> bool {
        !self.terms.is_empty() || self.is_exact()
    }

    pub fn is_one(&self) -> bool {
        self.is_exact() && self.terms.len() == 1 && self.terms[0].exp.is_zero() && self.terms[0].coeff.is_one()
    }

    /// Drops information above `cap`.
    pub fn truncate(&self, cap: &LogVal) -> HahnSeries {
        if *cap >= self.precision {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|t| cap.cmp_rat(&t.exp).is_gt())
            .cloned()
            .collect();
        HahnSeries {
            terms,
            precision: cap.clone(),
        }
    }

    pub fn neg(&self) -> HahnSeries {
        HahnSeries {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.clone(),
                    coeff: -&t.coeff,
                })
                .collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> HahnSeries {
        if c.is_zero() {
            return HahnSeries::zero();
        }
        HahnSeries {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: &Rat) -> HahnSeries {
        HahnSeries {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: &t.exp + e,
                    coeff: t.coeff.clone(),
                })
                .collect(),
            precision: self.precision.add_rat(e),
        }
    }

    /// Termwise merge; the result is known up to the smaller precision.
    pub fn add(&self, other: &HahnSeries) -> HahnSeries {
        let precision = self.precision.clone().min(other.precision.clone());
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => match x.exp.cmp(&y.exp) {
                    std::cmp::Ordering::Less => {
                        i += 1;
                        x.clone()
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        y.clone()
                    }
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        Term {
                            exp: x.exp.clone(),
                            coeff: &x.coeff + &y.coeff,
                        }
                    }
                },
                (Some(x), None) => {
                    i += 1;
                    x.clone()
                }
                (None, Some(y)) => {
                    j += 1;
                    y.clone()
                }
                (None, None) => unreachable!(),
            };
            if !precision.cmp_rat(&next.exp).is_gt() {
                break;
            }
            if !next.coeff.is_zero() {
                out.push(next);
            }
        }
        HahnSeries { terms: out, precision }
    }

    pub fn sub(&self, other: &HahnSeries) -> HahnSeries {
        self.add(&other.neg())
    }

    /// Product with precision `min(prec(a) + val(b), prec(b) + val(a))`.
    pub fn mul(&self, other: &HahnSeries) -> HahnSeries {
        self.mul_trunc(other, &LogVal::Infinite)
    }

    /// Product, additionally discarding everything at or above `limit`.
    pub fn mul_trunc(&self, other: &HahnSeries, limit: &LogVal) -> HahnSeries {
        if self.is_zero() || other.is_zero() {
            return HahnSeries::zero();
        }
        let natural = (&self.precision + &other.valuation()).min(&other.precision + &self.valuation());
        let precision = natural.min(limit.clone());
        let mut acc: BTreeMap<Rat, Rat> = BTreeMap::new();
        for x in &self.terms {
            for y in &other.terms {
                let e = &x.exp + &y.exp;
                if !precision.cmp_rat(&e).is_gt() {
                    // exponents of `other` increase, so later terms are also cut
                    break;
                }
                *acc.entry(e).or_insert_with(Rat::zero) += &x.coeff * &y.coeff;
            }
        }
        HahnSeries::from_map(acc, precision)
    }

    pub fn pow(&self, k: u32) -> HahnSeries {
        let mut out = HahnSeries::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient of exact series, or `None` when `divisor` does not
    /// divide `self` with finite support.
    pub fn div_exact(&self, divisor: &HahnSeries) -> Option<HahnSeries> {
        if !self.is_exact() || !divisor.is_exact() || divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(HahnSeries::zero());
        }
        let lead = divisor.terms[0].clone();
        let last = &self.terms.last()?.exp - &divisor.terms.last()?.exp;
        let mut quotient: Vec<Term> = Vec::new();
        let mut rem = self.clone();
        while let Some(top) = rem.terms.first() {
            let exp = &top.exp - &lead.exp;
            if exp > last {
                return None;
            }
            let coeff = &top.coeff / &lead.coeff;
            rem = rem.sub(&divisor.shift(&exp).scale(&coeff));
            quotient.push(Term { exp, coeff });
        }
        Some(HahnSeries {
            terms: quotient,
            precision: LogVal::Infinite,
        })
    }

    /// Truncated inverse. With `e = val(a)`, the result has valuation `-e`
    /// exactly and satisfies `a * inv(a) = 1` modulo `t^{cap - e}`; its own
    /// precision is `cap - 2e` (or less when `a` itself is inexact). A
    /// single exact term inverts exactly.
    pub fn inv(&self, cap: &LogVal) -> Result<HahnSeries> {
        let lead = match self.terms.first() {
            Some(t) => t.clone(),
            None => return Err(Error::InverseOfZero),
        };
        let e = &lead.exp;
        let c_inv = lead.coeff.recip();
        // unit part u = a / (c t^e) = 1 + r
        let unit = self.shift(&-e).scale(&c_inv);
        let rel_prec_a = &self.precision - e;

        if unit.terms.len() == 1 {
            return Ok(HahnSeries {
                terms: vec![Term { exp: -e, coeff: c_inv }],
                precision: &rel_prec_a - e,
            });
        }

        let r_min = unit.terms[1].exp.clone();
        let wanted = match cap {
            LogVal::Finite(c) => {
                let p = c - e;
                if p < r_min {
                    r_min.clone()
                } else {
                    p
                }
            }
            LogVal::Infinite => {
                return Err(Error::invalid(
                    "an infinite precision cap cannot invert a multi-term series",
                ))
            }
        };
        let target = LogVal::Finite(wanted).min(rel_prec_a);

        // Newton iteration y <- y + y (1 - u y), doubling the known precision.
        let unit_raw = HahnSeries {
            terms: unit.terms.clone(),
            precision: LogVal::Infinite,
        };
        let mut y = HahnSeries::one();
        let mut known = r_min;
        loop {
            let step = LogVal::Finite(&known + &known).min(target.clone());
            let uy = unit_raw.mul_trunc(&y, &step);
            let err = HahnSeries::one().sub(&uy).truncate(&step);
            let corr = y.mul_trunc(&err, &step);
            y = HahnSeries {
                terms: y.add(&corr).truncate(&step).terms,
                precision: LogVal::Infinite,
            };
            match step {
                LogVal::Finite(s) if LogVal::Finite(s.clone()) < target => known = s,
                _ => break,
            }
        }
        let y = HahnSeries {
            terms: y.terms,
            precision: target,
        };
        Ok(y.shift(&-e).scale(&c_inv))
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, t: &Term, first: bool) -> fmt::Result {
        let neg = t.coeff.is_negative();
        let mag = t.coeff.abs();
        if !first {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        if t.exp.is_zero() {
            write!(f, "{mag}")
        } else if mag.is_one() {
            write!(f, "t^({})", t.exp)
        } else {
            write!(f, "{mag}*t^({})", t.exp)
        }
    }
}

impl fmt::Display for HahnSeries {
    /// `c1*t^(e1) + c2*t^(e2) + ...`, with `+ O(t^(p))` for inexact values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return match &self.precision {
                LogVal::Infinite => f.write_str("0"),
                LogVal::Finite(p) => write!(f, "O(t^({p}))"),
            };
        }
        for (i, t) in self.terms.iter().enumerate() {
            Self::fmt_term(f, t, i == 0)?;
        }
        if let LogVal::Finite(p) = &self.precision {
            write!(f, " + O(t^({p}))")?;
        }
        Ok(())
    }
}

impl FromStr for HahnSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::text::parse_hahn(s)
    }
}
