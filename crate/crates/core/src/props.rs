//! Randomized property suites, runnable from tests and from the `props`
//! subcommand. Every check is exact unless it compares floating-point
//! solver output, in which case the tolerance sits next to the check.

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::arith::{from_f64, int, rat, to_f64, LogVal, Rat};
use crate::equi::{chi_counts, eq_measure, lambda_exact, theorem_harness};
use crate::error::Result;
use crate::hahn::HahnSeries;
use crate::metrics::{
    dominance, localized_val, metric_distance, point_val, shilov_set, spec_val, MetricSpec, MonomialPoint,
};
use crate::poly::{hilbert, monomials, mult_operator, HomPoly, MonomialBasis};
use crate::random;
use crate::solver::{cell_volumes, functional, solve_prescribed, SolveOptions};
use crate::ultra::{minor_oracle, na_svd, op_norm_val, wedge_top_val, ValMatrix, DEFAULT_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct PropReport {
    pub name: &'static str,
    pub cases: usize,
    /// Cases that drew an instance outside the property's domain.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl PropReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Check {
    report: PropReport,
}

impl Check {
    fn new(name: &'static str, cases: usize) -> Self {
        Check {
            report: PropReport {
                name,
                cases,
                skipped: 0,
                failures: Vec::new(),
            },
        }
    }

    fn expect(&mut self, case: usize, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.report.failures.push(format!("case {case}: {}", msg()));
        }
    }

    fn skip(&mut self) {
        self.report.skipped += 1;
    }

    fn done(self) -> Result<PropReport> {
        Ok(self.report)
    }
}

pub type Suite = fn(u64, usize) -> Result<PropReport>;

pub const SUITES: &[(&str, Suite)] = &[
    ("hahn-valuation", hahn_valuation),
    ("hahn-inverse", hahn_inverse),
    ("hahn-ring", hahn_ring),
    ("hilbert", hilbert_counts),
    ("mult-operator", mult_operator_consistency),
    ("power-multiplicativity", power_multiplicativity),
    ("boundary-identity", boundary_identity),
    ("dominance", dominated_points),
    ("localization", localization),
    ("d1-le-dinf", d1_le_dinf),
    ("oracle-equivalence", oracle_equivalence),
    ("det-distortion", det_distortion),
    ("operator-norm-change", operator_norm_change),
    ("max-norm", max_norm),
    ("inverse-multiplication", inverse_multiplication),
    ("isometric-embedding", isometric_embedding),
    ("lambda-sum", lambda_sum),
    ("rescaling-invariance", rescaling_invariance),
    ("gradient", gradient_check),
    ("monotone-ascent", monotone_ascent),
    ("gauge-invariance", gauge_invariance),
    ("solver-round-trip", solver_round_trip),
    ("continuity", continuity),
];

pub fn suite(name: &str) -> Option<Suite> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn run_all(seed: u64, cases: usize) -> Result<Vec<PropReport>> {
    SUITES.iter().map(|(_, s)| s(seed, cases)).collect()
}

fn small_spec<R: Rng>(r: &mut R, max_d: usize, max_m: usize) -> MetricSpec {
    let d = r.random_range(1..=max_d);
    let m = r.random_range(1..=max_m);
    random::spec(r, d, m)
}

fn finite(v: LogVal) -> Rat {
    v.into_finite().expect("nonzero section")
}

pub fn hahn_valuation(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("hahn-valuation", cases);
    for k in 0..cases {
        let a = random::hahn(&mut r, 3, -1);
        let b = random::hahn(&mut r, 3, -1);
        let (va, vb) = (a.valuation(), b.valuation());
        c.expect(k, a.mul(&b).valuation() == &va + &vb, || format!("val({a} * {b})"));
        let vs = a.add(&b).valuation();
        let lo = va.clone().min(vb.clone());
        c.expect(k, vs >= lo, || format!("val({a} + {b}) below the minimum"));
        if va != vb {
            c.expect(k, vs == lo, || format!("val({a} + {b}) not equal to the minimum"));
        }
    }
    c.done()
}

pub fn hahn_inverse(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("hahn-inverse", cases);
    for k in 0..cases {
        let a = random::hahn(&mut r, 3, -1);
        let e = finite(a.valuation());
        for gap in [1, 2, 5] {
            let cap = &e + int(gap);
            let inv = a.inv(&LogVal::Finite(cap.clone()))?;
            c.expect(k, inv.valuation() == LogVal::Finite(-&e), || format!("val(inv({a}))"));
            let bound = &cap - &e;
            let diff = a.mul(&inv).sub(&HahnSeries::one());
            c.expect(k, diff.terms().iter().all(|t| t.exp >= bound), || {
                format!("{a} * inv at cap {cap} = 1 + {diff}")
            });
        }
    }
    c.done()
}

pub fn hahn_ring(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("hahn-ring", cases);
    for k in 0..cases {
        let a = random::hahn(&mut r, 3, -1);
        let b = random::hahn(&mut r, 3, -1);
        let d = random::hahn(&mut r, 3, -1);
        c.expect(k, a.mul(&b).mul(&d) == a.mul(&b.mul(&d)), || "associativity".into());
        c.expect(k, a.mul(&b.add(&d)) == a.mul(&b).add(&a.mul(&d)), || {
            "distributivity".into()
        });
        c.expect(k, a.mul(&b) == b.mul(&a), || "commutativity".into());
    }
    c.done()
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn hilbert_counts(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("hilbert", cases);
    for k in 0..cases {
        let d = r.random_range(1..=4);
        let n = r.random_range(0..=8);
        let ms = monomials(d, n);
        c.expect(k, hilbert(d, n) as u128 == binomial(n + d, d), || {
            format!("chi({d}, {n})")
        });
        c.expect(k, ms.len() == hilbert(d, n), || format!("monomial count ({d}, {n})"));
        let mut sorted = ms.clone();
        sorted.sort();
        sorted.dedup();
        c.expect(k, sorted.len() == ms.len(), || {
            format!("duplicate monomials ({d}, {n})")
        });
    }
    c.done()
}

pub fn mult_operator_consistency(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("mult-operator", cases);
    for k in 0..cases {
        let d = r.random_range(1..=2);
        let deg = r.random_range(1..=2);
        let s = random::section(&mut r, d, deg, 4, 2);
        let n = r.random_range(0..=3);
        let f = random::section(&mut r, d, n, 5, 2);
        let m = mult_operator(&s, n)?;
        let got = m.apply(&f.coeff_vector(&MonomialBasis::new(d, n)));
        let want = s.mul(&f)?.coeff_vector(&MonomialBasis::new(d, n + s.degree()));
        c.expect(k, got == want, || format!("({s}) * ({f})"));
    }
    c.done()
}

pub fn power_multiplicativity(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("power-multiplicativity", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 4);
        let deg = r.random_range(1..=2);
        let f = random::section(&mut r, s.d(), deg, 3, 2);
        let e = r.random_range(1..=4u32);
        let v = finite(spec_val(&s, &f));
        let ve = finite(spec_val(&s, &f.pow(e)));
        c.expect(k, ve == &v * int(e as i64), || {
            format!("spec_val(({f})^{e}) = {ve}, spec_val = {v}")
        });
    }
    c.done()
}

pub fn boundary_identity(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("boundary-identity", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 5);
        let deg = r.random_range(1..=3);
        let f = random::section(&mut r, s.d(), deg, 4, 2);
        let sh = shilov_set(&s)?;
        let on_boundary = sh
            .members
            .iter()
            .map(|&a| point_val(&s.points()[a], &f))
            .min()
            .expect("nonempty Shilov set");
        c.expect(k, on_boundary == spec_val(&s, &f), || format!("{f}"));
    }
    c.done()
}

/// A point above `w`: same `h` plus a nonnegative, nonzero bump.
fn dominated_copy<R: Rng>(r: &mut R, w: &MonomialPoint) -> MonomialPoint {
    loop {
        let bump: Vec<Rat> = w.w.iter().map(|_| random::nonneg_rat(r, 1)).collect();
        let dc = random::nonneg_rat(r, 1);
        if bump.iter().all(Zero::is_zero) && dc.is_zero() {
            continue;
        }
        return MonomialPoint::new(w.w.iter().zip(&bump).map(|(x, y)| x + y).collect(), &w.c + dc);
    }
}

pub fn dominated_points(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("dominance", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 4);
        let wi = r.random_range(0..s.len());
        let z = dominated_copy(&mut r, &s.points()[wi]);
        let mut pts = s.points().to_vec();
        pts.push(z.clone());
        let Ok(bigger) = MetricSpec::new(s.d(), pts) else {
            c.skip();
            continue;
        };
        c.expect(k, dominance(&z, &s.points()[wi]), || "dominance relation".into());
        let before = shilov_set(&s)?;
        let after = shilov_set(&bigger)?;
        c.expect(k, !after.contains(s.len()), || "dominated point is Shilov".into());
        c.expect(k, after.members == before.members, || {
            format!("Shilov set changed: {:?} -> {:?}", before.members, after.members)
        });
    }
    c.done()
}

/// `f` rescaled by a power of `t` so that `spec_val(f) = 0`.
fn normalized<R: Rng>(r: &mut R, s: &MetricSpec, deg: usize) -> HomPoly {
    let f = random::section(r, s.d(), deg, 3, 1);
    let v = finite(spec_val(s, &f));
    f.scale(&HahnSeries::t_pow(-v))
}

/// Largest `n*` the localization suite evaluates directly.
pub const LOCALIZATION_MAX_N: u64 = 40;

/// Checks one localization instance; `Ok(false)` means the instance was
/// skipped because `n*` is beyond direct evaluation.
pub fn check_localization(s: &MetricSpec, f: &HomPoly, b: &HomPoly, failures: &mut Vec<String>) -> Result<bool> {
    let loc = localized_val(s, f, b)?;
    if loc.n_star > LOCALIZATION_MAX_N {
        return Ok(false);
    }
    let mut cur = b.clone();
    let mut prev: Option<LogVal> = None;
    for n in 0..=loc.n_star + 3 {
        let v = spec_val(s, &cur);
        if let Some(p) = &prev {
            if v < *p {
                failures.push(format!("spec_val(f^{n} b) = {v} decreased from {p}"));
            }
        }
        if n >= loc.n_star && v != loc.value {
            failures.push(format!(
                "spec_val(f^{n} b) = {v}, limit {} from n* = {}",
                loc.value, loc.n_star
            ));
        }
        prev = Some(v);
        cur = cur.mul(f)?;
    }
    Ok(true)
}

pub fn localization(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("localization", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 4);
        let f = normalized(&mut r, &s, 1);
        let deg = r.random_range(0..=2);
        let b = random::section(&mut r, s.d(), deg, 4, 2);
        let mut failures = Vec::new();
        if !check_localization(&s, &f, &b, &mut failures)? {
            c.skip();
        }
        for msg in failures {
            c.expect(k, false, || format!("f = {f}, b = {b}: {msg}"));
        }
    }
    c.done()
}

pub fn d1_le_dinf(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("d1-le-dinf", cases);
    for k in 0..cases {
        let d = r.random_range(1..=3);
        let m = r.random_range(1..=4);
        let s1 = random::spec(&mut r, d, m);
        let m = r.random_range(1..=4);
        let s2 = random::spec(&mut r, d, m);
        let dist = metric_distance(&s1, &s2)?;
        c.expect(k, dist.d_1 <= dist.d_inf, || {
            format!("d_1 = {} > d_inf = {}", dist.d_1, dist.d_inf)
        });
    }
    c.done()
}

/// Compares partial sums of singular valuations with minimal minors.
pub fn check_oracle(m: &ValMatrix) -> Result<Option<String>> {
    let prof = na_svd(m, &int(DEFAULT_CAP))?;
    for rk in 1..=prof.rank() {
        let want = minor_oracle(m, rk)?;
        let got = LogVal::Finite(prof.partial_sum(rk));
        if got != want {
            return Ok(Some(format!("rank {rk}: partial sum {got}, minors {want}")));
        }
    }
    if prof.rank() < m.rows().min(m.cols()) {
        let beyond = minor_oracle(m, prof.rank() + 1)?;
        if beyond != LogVal::Infinite {
            return Ok(Some(format!(
                "rank {} but a nonzero larger minor {beyond}",
                prof.rank()
            )));
        }
    }
    Ok(None)
}

pub fn oracle_equivalence(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("oracle-equivalence", cases);
    for k in 0..cases {
        let rows = r.random_range(1..=6);
        let cols = r.random_range(1..=6);
        let m = random::val_matrix(&mut r, rows, cols, 3);
        if let Some(msg) = check_oracle(&m)? {
            c.expect(k, false, || msg);
        }
    }
    c.done()
}

/// An invertible `k x k` matrix with random diagonal norms.
fn invertible<R: Rng>(r: &mut R, k: usize) -> Result<ValMatrix> {
    loop {
        let m = random::val_matrix(r, k, k, 2);
        if na_svd(&m, &int(DEFAULT_CAP))?.rank() == k {
            return Ok(m);
        }
    }
}

pub fn det_distortion(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("det-distortion", cases);
    let cap = int(DEFAULT_CAP);
    for k in 0..cases {
        let size = r.random_range(2..=5);
        let s = invertible(&mut r, size)?;
        let prof = na_svd(&s, &cap)?;
        let codim = r.random_range(1..size);
        let mut keep: Vec<usize> = sample(&mut r, size, size - codim).into_vec();
        keep.sort_unstable();
        let full = prof.partial_sum(size);
        let sub = wedge_top_val(&s.restrict_cols(&keep), &cap)?;
        let (first, last) = (&prof.sigma[0], &prof.sigma[size - 1]);
        // log ||S|| = -first, log ||S^-1|| = last
        let log_c = (-first).max(last.clone());
        let gap = (&sub - &full).abs();
        let m = int(codim as i64);
        c.expect(k, gap <= &m * &log_c, || {
            format!("|{sub} - {full}| > {codim} * {log_c}")
        });
        let loose = first.abs().max(last.abs());
        c.expect(k, gap <= &m * loose, || "loose bound".into());
    }
    c.done()
}

pub fn operator_norm_change(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("operator-norm-change", cases);
    for k in 0..cases {
        let rows = r.random_range(1..=6);
        let cols = r.random_range(1..=6);
        let m = random::val_matrix(&mut r, rows, cols, 3);
        let (src2, tgt2) = (random::diag(&mut r, m.cols()), random::diag(&mut r, m.rows()));
        let other = m.with_norms(src2.clone(), tgt2.clone())?;
        match (op_norm_val(&m), op_norm_val(&other)) {
            (LogVal::Finite(a), LogVal::Finite(b)) => {
                let bound = m.src.dist(&src2) + m.tgt.dist(&tgt2);
                c.expect(k, (&a - &b).abs() <= bound, || {
                    format!("|{a} - {b}| beyond the norm distances")
                });
            }
            (LogVal::Infinite, LogVal::Infinite) => c.skip(),
            (a, b) => c.expect(k, false, || format!("only one side is zero: {a}, {b}")),
        }
    }
    c.done()
}

pub fn max_norm(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("max-norm", cases);
    for k in 0..cases {
        let size = r.random_range(1..=6);
        let m = random::val_matrix(&mut r, size, size, 3);
        let n1 = random::diag(&mut r, size);
        let n2 = random::diag(&mut r, size);
        let nm = n1.max_norm(&n2);
        let v1 = op_norm_val(&m.with_norms(n1.clone(), n1)?);
        let v2 = op_norm_val(&m.with_norms(n2.clone(), n2)?);
        let vm = op_norm_val(&m.with_norms(nm.clone(), nm)?);
        let lo = v1.clone().min(v2.clone());
        c.expect(k, vm >= lo, || format!("max-norm {vm} below min({v1}, {v2})"));
    }
    c.done()
}

pub fn inverse_multiplication(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("inverse-multiplication", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 4);
        let deg = r.random_range(1..=2);
        let sec = random::section(&mut r, s.d(), deg, 4, 2);
        let n = r.random_range(0..=3);
        let prof = na_svd(&ValMatrix::mult(&s, &sec, n)?, &int(DEFAULT_CAP))?;
        let sh = shilov_set(&s)?;
        let bound = sh
            .members
            .iter()
            .map(|&a| finite(point_val(&s.points()[a], &sec)))
            .max()
            .expect("nonempty Shilov set");
        let worst = prof.sigma.last().expect("injective");
        c.expect(k, *worst <= bound, || {
            format!("sigma {worst} > {bound} for {sec} at n = {n}")
        });
    }
    c.done()
}

pub fn isometric_embedding(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("isometric-embedding", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 4);
        let deg = r.random_range(1..=3);
        let f = random::section(&mut r, s.d(), deg, 5, 2);
        let sh = shilov_set(&s)?;
        let mut best = LogVal::Infinite;
        for &a in &sh.members {
            let pa = &s.points()[a];
            for (alpha, coef) in f.terms() {
                if pa.monomial_val(alpha) == s.monomial_val(alpha) {
                    best = best.min(coef.valuation().add_rat(&pa.monomial_val(alpha)));
                }
            }
        }
        c.expect(k, best == spec_val(&s, &f), || format!("{f}: components give {best}"));
    }
    c.done()
}

pub fn lambda_sum(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("lambda-sum", cases);
    for k in 0..cases {
        let s = small_spec(&mut r, 2, 6);
        let mu = eq_measure(&s)?;
        c.expect(k, mu.total().is_one(), || format!("sum = {}", mu.total()));
        let raw = (0..s.len()).map(|a| lambda_exact(&s, a)).collect::<Result<Vec<_>>>()?;
        let total = raw.iter().fold(Rat::zero(), |acc, x| acc + x);
        c.expect(k, total.is_one(), || format!("cell volumes sum to {total}"));
        c.expect(k, raw.iter().all(|x| !x.is_negative()), || "negative volume".into());
    }
    c.done()
}

pub fn rescaling_invariance(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("rescaling-invariance", cases);
    let cap = int(DEFAULT_CAP);
    for k in 0..cases {
        let m = r.random_range(1..=3);
        let s = random::spec(&mut r, 1, m);
        let sec = random::section(&mut r, 1, 1, 2, 2);
        let delta = random::small_rat(&mut r, 2);
        let a = theorem_harness(&s, &sec, 4, &cap)?;
        let b = theorem_harness(&s.shifted(&delta), &sec, 4, &cap)?;
        c.expect(k, b.rhs == &a.rhs - &delta, || "rhs shift".into());
        for (x, y) in a.rows.iter().zip(&b.rows) {
            c.expect(k, x.err == y.err, || format!("err_{} changed under shift {delta}", x.n));
            if let (Some(lx), Some(ly)) = (&x.lhs, &y.lhs) {
                c.expect(k, *ly == lx - &delta, || format!("lhs_{} shift", x.n));
            }
        }
    }
    c.done()
}

/// Finite-difference step and relative agreement for the gradient check.
pub const FD_STEP: f64 = 1e-4;
pub const FD_REL_TOL: f64 = 1e-6;

fn random_shifts<R: Rng>(r: &mut R, m: usize) -> Result<Vec<Rat>> {
    (0..m).map(|_| from_f64(r.random_range(-1.0..1.0))).collect()
}

/// Largest discrepancy between central differences of `F` and `V - lambda`,
/// relative to `max(|V - lambda|_inf, 1)`.
pub fn gradient_gap(ws: &[Vec<Rat>], c: &[Rat], target: &[Rat]) -> Result<f64> {
    let h = from_f64(FD_STEP)?;
    let vols = cell_volumes(ws, c)?;
    let grad: Vec<Rat> = vols.iter().zip(target).map(|(v, l)| v - l).collect();
    let scale = grad.iter().map(|g| to_f64(g).abs()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for k in 0..c.len() {
        let mut up = c.to_vec();
        let mut dn = c.to_vec();
        up[k] += &h;
        dn[k] -= &h;
        let fd = (functional(ws, &up, target)? - functional(ws, &dn, target)?) / (&h * int(2));
        worst = worst.max(to_f64(&(fd - &grad[k])).abs() / scale);
    }
    Ok(worst)
}

pub fn gradient_check(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("gradient", cases);
    for k in 0..cases {
        let d = r.random_range(1..=2);
        let m = r.random_range(2..=5);
        let p = random::solve_problem(&mut r, d, m);
        let ws: Vec<Vec<Rat>> = p.points.iter().map(|w| w.0.clone()).collect();
        let shifts = random_shifts(&mut r, ws.len())?;
        let gap = gradient_gap(&ws, &shifts, &p.target)?;
        c.expect(k, gap <= FD_REL_TOL, || format!("relative gap {gap:e}"));
    }
    c.done()
}

fn solve_random<R: Rng>(r: &mut R) -> Result<(crate::solver::SolveProblem, crate::solver::SolveResult)> {
    let d = r.random_range(1..=2);
    let m = r.random_range(2..=5);
    let p = random::solve_problem(r, d, m);
    let res = solve_prescribed(&p, &SolveOptions::default())?;
    Ok((p, res))
}

pub fn monotone_ascent(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("monotone-ascent", cases);
    for k in 0..cases {
        let (_, res) = solve_random(&mut r)?;
        let ok = res.trace.windows(2).all(|w| w[1] >= w[0]);
        c.expect(k, ok, || "F decreased along accepted steps".into());
    }
    c.done()
}

pub fn gauge_invariance(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("gauge-invariance", cases);
    for k in 0..cases {
        let d = r.random_range(1..=2);
        let m = r.random_range(1..=5);
        let p = random::solve_problem(&mut r, d, m);
        let ws: Vec<Vec<Rat>> = p.points.iter().map(|w| w.0.clone()).collect();
        let shifts = random_shifts(&mut r, ws.len())?;
        let g = random::small_rat(&mut r, 3);
        let moved: Vec<Rat> = shifts.iter().map(|x| x + &g).collect();
        c.expect(k, cell_volumes(&ws, &shifts)? == cell_volumes(&ws, &moved)?, || {
            format!("volumes moved under gauge {g}")
        });
    }
    c.done()
}

/// Level for the lattice cross-check of solved measures on `P^1`, and the
/// constant in its `C / n` bound (`|count - n lambda| <= 1` per interval).
pub const ROUND_TRIP_LEVEL: usize = 500;
pub const ROUND_TRIP_C: i64 = 2;

pub fn solver_round_trip(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("solver-round-trip", cases);
    let opts = SolveOptions::default();
    let tol = from_f64(opts.tol)?;
    for k in 0..cases {
        let (p, res) = solve_random(&mut r)?;
        let pts = p
            .points
            .iter()
            .zip(&res.c)
            .map(|(w, c)| MonomialPoint::new(w.0.clone(), c.clone()))
            .collect();
        let s = MetricSpec::new(p.d, pts)?;
        let mu = eq_measure(&s)?;
        let gap = mu
            .lambda
            .iter()
            .zip(&p.target)
            .map(|(x, y)| (x - y).abs())
            .max()
            .expect("nonempty");
        c.expect(k, gap <= tol, || format!("measure off by {gap}"));
        if p.d == 1 {
            let n = ROUND_TRIP_LEVEL;
            let chi = int(hilbert(1, n) as i64);
            let bound = rat(ROUND_TRIP_C, n as i64);
            for (cnt, lam) in chi_counts(&s, n).iter().zip(&mu.lambda) {
                let e = (int(*cnt as i64) / &chi - lam).abs();
                c.expect(k, e <= bound, || format!("count ratio off by {e}"));
            }
        }
    }
    c.done()
}

pub fn continuity(seed: u64, cases: usize) -> Result<PropReport> {
    let mut r = random::rng(seed);
    let mut c = Check::new("continuity", cases);
    for k in 0..cases {
        let d = r.random_range(1..=2);
        let m = r.random_range(2..=5);
        let p = random::solve_problem(&mut r, d, m);
        let ws: Vec<Vec<Rat>> = p.points.iter().map(|w| w.0.clone()).collect();
        let shifts = random_shifts(&mut r, ws.len())?;
        let base = cell_volumes(&ws, &shifts)?;
        let dir: Vec<f64> = (0..ws.len()).map(|_| r.random_range(-1.0..1.0)).collect();
        let mut gaps = Vec::new();
        for scale in [1e-2, 1e-4, 1e-6] {
            let moved = shifts
                .iter()
                .zip(&dir)
                .map(|(x, y)| Ok(x + from_f64(scale * y)?))
                .collect::<Result<Vec<_>>>()?;
            let v = cell_volumes(&ws, &moved)?;
            let gap = v
                .iter()
                .zip(&base)
                .map(|(a, b)| to_f64(&(a - b)).abs())
                .fold(0.0, f64::max);
            gaps.push(gap);
        }
        // shrinking perturbations must give vanishing volume changes
        c.expect(k, gaps[2] <= 1e-3, || format!("gaps {gaps:?}"));
    }
    c.done()
}
