//! The equidistribution measure of a Shilov-finite metric and the
//! convergence harness for the determinant-distortion limit.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{int, serde_rat, Rat};
use crate::cells;
use crate::error::{Error, Result};
use crate::metrics::{metric_distance, point_val, shilov_set, MetricSpec};
use crate::poly::{hilbert, monomials, HomPoly};
use crate::ultra::{wedge_top_val, ValMatrix};

fn check_index(s: &MetricSpec, a: usize) -> Result<()> {
    if a >= s.len() {
        return Err(Error::invalid(format!(
            "point index {a} out of range for {} points",
            s.len()
        )));
    }
    Ok(())
}

/// `chi_a(n)` for every point: degree-`n` monomials at which the point
/// attains the minimum. Tied monomials count once per attaining point.
pub fn chi_counts(s: &MetricSpec, n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; s.len()];
    for alpha in monomials(s.d(), n) {
        let vals: Vec<Rat> = s.points().iter().map(|p| p.monomial_val(&alpha)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        for (a, v) in vals.iter().enumerate() {
            if *v == min {
                counts[a] += 1;
            }
        }
    }
    counts
}

pub fn chi_a_count(s: &MetricSpec, a: usize, n: usize) -> Result<u64> {
    check_index(s, a)?;
    Ok(chi_counts(s, n)[a])
}

/// Normalized volume of the closed argmin cell of point `a` (`d <= 2`).
pub fn lambda_exact(s: &MetricSpec, a: usize) -> Result<Rat> {
    check_index(s, a)?;
    if s.d() > 2 {
        return Err(Error::DimensionGuard {
            d: s.d(),
            what: "lambda",
        });
    }
    cells::cell_volume(&s.hs(), a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Volume,
    Counting { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqMeasure {
    /// One coefficient per point of the spec; zero off the Shilov set.
    #[serde(with = "serde_rat::vec")]
    pub lambda: Vec<Rat>,
    #[serde(flatten)]
    pub method: Method,
    /// Estimated error of each coefficient (counting method only).
    #[serde(with = "serde_rat::opt", skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<Rat>,
}

impl EqMeasure {
    pub fn total(&self) -> Rat {
        self.lambda.iter().fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Counting level used for `d >= 3`.
pub const COUNT_LEVEL: usize = 32;

pub fn eq_measure(s: &MetricSpec) -> Result<EqMeasure> {
    eq_measure_at(s, COUNT_LEVEL)
}

/// As `eq_measure`, with the counting level for `d >= 3` given explicitly.
/// The error bound is `max_a |lambda_a(n / 2) - lambda_a(n)|`, the size
/// of a `C / n` error estimated from two levels.
pub fn eq_measure_at(s: &MetricSpec, count_level: usize) -> Result<EqMeasure> {
    let sh = shilov_set(s)?;
    if s.d() <= 2 {
        let vols = cells::cell_volumes(&s.hs())?;
        let lambda = vols
            .into_iter()
            .enumerate()
            .map(|(a, v)| if sh.contains(a) { v } else { Rat::zero() })
            .collect();
        return Ok(EqMeasure {
            lambda,
            method: Method::Volume,
            error_bound: None,
        });
    }
    let n = count_level.max(2);
    let est = |n: usize| -> Vec<Rat> {
        let chi = int(hilbert(s.d(), n) as i64);
        chi_counts(s, n)
            .into_iter()
            .enumerate()
            .map(|(a, c)| {
                if sh.contains(a) {
                    int(c as i64) / &chi
                } else {
                    Rat::zero()
                }
            })
            .collect()
    };
    let (fine, coarse) = (est(n), est(n / 2));
    let bound = fine
        .iter()
        .zip(&coarse)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(EqMeasure {
        lambda: fine,
        method: Method::Counting { n },
        error_bound: Some(bound),
    })
}

/// `-sum_a lambda_a v_a(s) / deg s`: the integral of `log|s|` per unit degree.
pub fn pair_measure(mu: &EqMeasure, s: &MetricSpec, sec: &HomPoly) -> Result<Rat> {
    s.check_poly(sec)?;
    if sec.is_zero() {
        return Err(Error::ZeroSection);
    }
    if sec.degree() == 0 {
        return Err(Error::invalid("the section must have positive degree"));
    }
    let mut acc = Rat::zero();
    for (z, lam) in s.points().iter().zip(&mu.lambda) {
        if lam.is_zero() {
            continue;
        }
        let v = point_val(z, sec).into_finite().expect("nonzero section");
        acc -= lam * v;
    }
    Ok(acc / int(sec.degree() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub chi: usize,
    #[serde(with = "serde_rat::opt")]
    pub lhs: Option<Rat>,
    #[serde(with = "serde_rat::opt")]
    pub err: Option<Rat>,
    #[serde(with = "serde_rat::opt")]
    pub n_err: Option<Rat>,
    /// Set when the row could not be certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ReportRow {
    pub fn certified(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
    pub rows: Vec<ReportRow>,
    /// `max |n err_n|` over certified rows.
    #[serde(with = "serde_rat")]
    pub c_fit: Rat,
    /// `min_a log|s|_a` and `max_a log|s|_a` over the Shilov set.
    #[serde(with = "serde_rat")]
    pub log_s_min: Rat,
    #[serde(with = "serde_rat")]
    pub log_s_max: Rat,
}

impl ConvergenceReport {
    pub fn all_certified(&self) -> bool {
        self.rows.iter().all(ReportRow::certified)
    }

    pub fn row(&self, n: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Error band at level `n`: `|err_n| <= (max - min) log|s| * C / n`,
    /// with `C = c_fit / (max - min)` when the oscillation is positive.
    /// When `log|s|` is constant on the Shilov set the band collapses to 0.
    pub fn within_band(&self, n: usize) -> Option<bool> {
        let row = self.row(n)?;
        let err = row.err.as_ref()?;
        let osc = &self.log_s_max - &self.log_s_min;
        if osc.is_zero() {
            return Some(err.is_zero());
        }
        Some(err.abs() * int(n as i64) <= self.c_fit)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "chi", "lhs", "rhs", "err", "n_err"])?;
        let show = |x: &Option<Rat>| x.as_ref().map_or_else(|| "NA".to_string(), Rat::to_string);
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.chi.to_string(),
                show(&r.lhs),
                self.rhs.to_string(),
                show(&r.err),
                show(&r.n_err),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `lhs_n = -wedge_top_val(. s) / chi(n)` against `rhs = int log|s| d mu`
/// for `n = 1..=n_max`, degrees computed in parallel.
pub fn theorem_harness(s: &MetricSpec, sec: &HomPoly, n_max: usize, cap: &Rat) -> Result<ConvergenceReport> {
    s.check_poly(sec)?;
    if sec.is_zero() {
        return Err(Error::ZeroSection);
    }
    if sec.degree() != 1 {
        return Err(Error::invalid("the harness expects a section of degree 1"));
    }
    let mu = eq_measure(s)?;
    let rhs = pair_measure(&mu, s, sec)?;
    let rows: Vec<ReportRow> = (1..=n_max)
        .into_par_iter()
        .map(|n| harness_row(s, sec, n, &rhs, cap))
        .collect::<Result<_>>()?;
    let c_fit = rows
        .iter()
        .filter_map(|r| r.n_err.as_ref().map(Signed::abs))
        .max()
        .unwrap_or_else(Rat::zero);
    let sh = shilov_set(s)?;
    let logs: Vec<Rat> = sh
        .members
        .iter()
        .map(|&a| {
            let v = point_val(&s.points()[a], sec);
            (-&v).expect("nonzero section")
        })
        .collect();
    Ok(ConvergenceReport {
        rhs,
        rows,
        c_fit,
        log_s_min: logs.iter().min().expect("nonempty").clone(),
        log_s_max: logs.iter().max().expect("nonempty").clone(),
    })
}

fn harness_row(s: &MetricSpec, sec: &HomPoly, n: usize, rhs: &Rat, cap: &Rat) -> Result<ReportRow> {
    let chi = hilbert(s.d(), n);
    let m = ValMatrix::mult(s, sec, n)?;
    match wedge_top_val(&m, cap) {
        Ok(w) => {
            let lhs = -w / int(chi as i64);
            let err = &lhs - rhs;
            let n_err = &err * int(n as i64);
            Ok(ReportRow {
                n,
                chi,
                lhs: Some(lhs),
                err: Some(err),
                n_err: Some(n_err),
                failure: None,
            })
        }
        Err(e @ (Error::PrecisionExhausted { .. } | Error::RankDeficient { .. })) => Ok(ReportRow {
            n,
            chi,
            lhs: None,
            err: None,
            n_err: None,
            failure: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureCheck {
    #[serde(with = "serde_rat")]
    pub d_mono: Rat,
    #[serde(with = "serde_rat")]
    pub bound: Rat,
    pub holds: bool,
}

/// Distance between the two equidistribution measures tested on monomial
/// sections, against twice the `d_1` distance of the metrics.
pub fn measure_distance_check(s1: &MetricSpec, s2: &MetricSpec) -> Result<MeasureCheck> {
    let dist = metric_distance(s1, s2)?;
    if !dist.d_1_exact {
        return Err(Error::DimensionGuard { d: s1.d(), what: "d_1" });
    }
    let (mu, nu) = (eq_measure(s1)?, eq_measure(s2)?);
    let (h1, h2) = (s1.hs(), s2.hs());
    let mut d_mono = Rat::zero();
    for k in 0..=s1.d() {
        let mut acc = Rat::zero();
        for (lam, h) in mu.lambda.iter().zip(&h1) {
            acc += lam * &h[k];
        }
        for (lam, h) in nu.lambda.iter().zip(&h2) {
            acc -= lam * &h[k];
        }
        d_mono = d_mono.max(acc.abs());
    }
    let bound = dist.d_1 * int(2);
    Ok(MeasureCheck {
        holds: d_mono <= bound,
        d_mono,
        bound,
    })
}

/// Reference value of `sum_a chi_a(n) - chi(n)`, the tie overlap.
pub fn tie_excess(s: &MetricSpec, n: usize) -> i64 {
    let total: u64 = chi_counts(s, n).iter().sum();
    total as i64 - hilbert(s.d(), n) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::metrics::MonomialPoint;
    use crate::ultra::DEFAULT_CAP;

    fn spec(ws: &[&[i64]]) -> MetricSpec {
        MetricSpec::from_weights(
            1,
            &ws.iter()
                .map(|w| w.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn residual_counts() {
        let s = spec(&[&[0, 1], &[1, 0]]);
        assert_eq!(chi_a_count(&s, 0, 4).unwrap(), 3);
        assert_eq!(chi_counts(&s, 4).iter().sum::<u64>(), 6);
        assert_eq!(tie_excess(&s, 4), 1);
        let one = spec(&[&[2, 5]]);
        assert_eq!(chi_a_count(&one, 0, 7).unwrap(), 8);
        assert!(chi_a_count(&one, 1, 7).is_err());
    }

    #[test]
    fn exact_lambdas() {
        let s = spec(&[&[0, 1], &[1, 0]]);
        assert_eq!(lambda_exact(&s, 0).unwrap(), rat(1, 2));
        assert_eq!(lambda_exact(&spec(&[&[3, 1]]), 0).unwrap(), int(1));
        let dom = spec(&[&[0, 1], &[1, 0], &[0, 0]]);
        assert_eq!(eq_measure(&dom).unwrap().lambda, vec![int(0), int(0), int(1)]);
        assert_eq!(eq_measure(&s).unwrap().total(), int(1));
    }

    #[test]
    fn counting_in_higher_dimension() {
        let w: Vec<Vec<Rat>> = (0..4).map(|k| (0..4).map(|j| int((j == k) as i64)).collect()).collect();
        let s = MetricSpec::from_weights(3, &w).unwrap();
        assert!(lambda_exact(&s, 0).is_err());
        let mu = eq_measure_at(&s, 16).unwrap();
        assert_eq!(mu.method, Method::Counting { n: 16 });
        for l in &mu.lambda {
            assert!((l - rat(1, 4)).abs() <= rat(1, 2));
        }
    }

    #[test]
    fn pairings() {
        let s = spec(&[&[0, 1], &[1, 0]]);
        let mu = eq_measure(&s).unwrap();
        let x1 = HomPoly::parse("x1", 2).unwrap();
        assert_eq!(pair_measure(&mu, &s, &x1).unwrap(), rat(-1, 2));
        let one = spec(&[&[0, 0]]);
        let tx0 = HomPoly::parse("t x0", 2).unwrap();
        assert_eq!(pair_measure(&eq_measure(&one).unwrap(), &one, &tx0).unwrap(), int(-1));
        assert!(pair_measure(&mu, &s, &HomPoly::zero(2, 1)).is_err());
    }

    #[test]
    fn harness_on_the_two_point_line() {
        let s = spec(&[&[0, 1], &[1, 0]]);
        let x1 = HomPoly::parse("x1", 2).unwrap();
        let rep = theorem_harness(&s, &x1, 8, &int(DEFAULT_CAP)).unwrap();
        assert_eq!(rep.rhs, rat(-1, 2));
        let r4 = rep.row(4).unwrap();
        assert_eq!(r4.lhs, Some(rat(-2, 5)));
        assert_eq!(r4.err, Some(rat(1, 10)));
        for r in &rep.rows {
            let n = r.n as i64;
            let closed = rat(1, 2) - Rat::new(((n + 1) / 2).into(), (n + 1).into());
            assert_eq!(r.err.clone().unwrap(), closed, "n = {n}");
        }
    }

    #[test]
    fn harness_is_exact_for_one_point() {
        let s = MetricSpec::new(1, vec![MonomialPoint::new(vec![rat(1, 3), int(-1)], rat(1, 2))]).unwrap();
        let sec = HomPoly::parse("t^(1/2) x0 + (1 + t) x1", 2).unwrap();
        let rep = theorem_harness(&s, &sec, 6, &int(DEFAULT_CAP)).unwrap();
        assert!(rep.rows.iter().all(|r| r.err == Some(Rat::zero())));
    }

    #[test]
    fn measure_checks() {
        let s = spec(&[&[0, 1], &[1, 0]]);
        let c = measure_distance_check(&s, &s).unwrap();
        assert_eq!((c.d_mono, c.bound), (int(0), int(0)));
        let c = measure_distance_check(&spec(&[&[0, 0]]), &spec(&[&[0, 1]])).unwrap();
        assert_eq!(c.bound, int(1));
        assert_eq!(c.d_mono, int(1));
    }
}
