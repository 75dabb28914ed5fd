//! Acceptance run: one PASS/FAIL line per criterion. Oracles here are
//! written independently of the library code they check wherever that is
//! practical; every tolerance and sample size is a named constant.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::Rng;

use shilov_core::arith::{from_f64, int, rat, to_f64, LogVal, Rat};
use shilov_core::equi::{eq_measure, lambda_exact, measure_distance_check, theorem_harness};
use shilov_core::metrics::{localized_val, metric_distance, MetricSpec, MonomialPoint};
use shilov_core::poly::{monomials, ExpVec, HomPoly};
use shilov_core::props;
use shilov_core::random;
use shilov_core::solver::{solve_prescribed, SolveOptions, SolveProblem, WeightVec};
use shilov_core::ultra::{na_svd, wedge_top_val, ValMatrix, DEFAULT_CAP};
use shilov_core::HahnSeries;

const SEED: u64 = 20_261_016;

// 1
const ONE_POINT_CASES: usize = 20;
const ONE_POINT_NMAX: usize = 10;
const ONE_POINT_BUDGET: Duration = Duration::from_secs(60);
// 2
const ORACLE_CASES: usize = 200;
const ORACLE_MAX_SIZE: usize = 6;
const ORACLE_MAX_TERMS: usize = 3;
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
// 3
const LIMIT_NMAX: usize = 20;
const LIMIT_RANDOM_SPECS: usize = 10;
const LIMIT_GROWTH_FACTOR: i64 = 3;
const LIMIT_BUDGET: Duration = Duration::from_secs(600);
// 4
const LAMBDA_SPECS: usize = 50;
const LAMBDA_LEVEL_P1: usize = 200;
const LAMBDA_LEVEL_P2: usize = 60;
/// Values of `n * err_n` past the fitting range may exceed the fitted `C`
/// by at most this factor.
const LAMBDA_FIT_SLACK: i64 = 2;
const LAMBDA_BUDGET: Duration = Duration::from_secs(300);
// 5
const INEQUALITY_CASES: usize = 500;
const INEQUALITY_BUDGET: Duration = Duration::from_secs(180);
// 6
const LOCALIZATION_CASES: usize = 50;
const LOCALIZATION_TAIL: u64 = 3;
const LOCALIZATION_BUDGET: Duration = Duration::from_secs(60);
// 7
const SOLVER_CASES: usize = 30;
const SOLVER_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-12;
const GRADIENT_REL_TOL: f64 = 1e-6;
const SOLVER_BUDGET: Duration = Duration::from_secs(120);
// 8
const CONTINUITY_PAIRS: usize = 50;
const CONTINUITY_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(k: usize, title: &str, budget: Duration, f: fn() -> Outcome) -> bool {
    let t = Instant::now();
    let mut o = f();
    let took = t.elapsed();
    if took > budget {
        o.pass = false;
        o.detail = format!("{}; over the {budget:?} budget", o.detail);
    }
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {k} [{tag}] {title}: {} ({took:.2?})", o.detail);
    o.pass
}

// ---- independent oracles ----

/// `<h, alpha>` for a point, straight from the weights.
fn pairing(p: &MonomialPoint, alpha: &ExpVec) -> Rat {
    p.w.iter()
        .zip(alpha.as_slice())
        .map(|(w, &a)| (w + &p.c) * int(a as i64))
        .fold(Rat::zero(), |acc, x| acc + x)
}

fn val_at(p: &MonomialPoint, f: &HomPoly) -> LogVal {
    f.terms()
        .iter()
        .map(|(alpha, c)| c.valuation().add_rat(&pairing(p, alpha)))
        .min()
        .unwrap_or(LogVal::Infinite)
}

fn sup_val(s: &MetricSpec, f: &HomPoly) -> LogVal {
    s.points().iter().map(|p| val_at(p, f)).min().expect("nonempty spec")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<HahnSeries>]) -> HahnSeries {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = HahnSeries::zero();
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<HahnSeries>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if n < r {
        return Vec::new();
    }
    let mut out = subsets(n - 1, r);
    for mut s in subsets(n - 1, r - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Smallest valuation of an `r x r` minor in orthonormal coordinates.
fn min_minor_val(m: &ValMatrix, r: usize) -> LogVal {
    let mut best = LogVal::Infinite;
    for rows in subsets(m.rows(), r) {
        for cols in subsets(m.cols(), r) {
            let sub: Vec<Vec<HahnSeries>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m.entries[i][j].clone()).collect())
                .collect();
            let shift = rows.iter().map(|&i| m.tgt.weights[i].clone()).sum::<Rat>()
                - cols.iter().map(|&j| m.src.weights[j].clone()).sum::<Rat>();
            best = best.min(det(&sub).valuation().add_rat(&shift));
        }
    }
    best
}

// ---- criteria ----

fn one_point_identity() -> Outcome {
    let mut r = random::rng(SEED);
    let mut checked = 0;
    for d in [1usize, 2] {
        for case in 0..ONE_POINT_CASES {
            let s = random::spec(&mut r, d, 1);
            let sec = random::section(&mut r, d, 1, d + 1, 2);
            let v = sup_val(&s, &sec).into_finite().expect("nonzero section");
            for n in 0..=ONE_POINT_NMAX {
                let m = ValMatrix::mult(&s, &sec, n).expect("valid");
                let w = match wedge_top_val(&m, &int(DEFAULT_CAP)) {
                    Ok(w) => w,
                    Err(e) => return outcome(false, format!("d={d} case {case} n={n}: {e}")),
                };
                let want = &v * int(binomial(n + d, d) as i64);
                if w != want {
                    return outcome(false, format!("d={d} case {case} n={n}: {w} vs {want}"));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} (spec, section, n) triples exact"))
}

fn oracle_equivalence() -> Outcome {
    let mut r = random::rng(SEED + 2);
    for case in 0..ORACLE_CASES {
        let rows = r.random_range(1..=ORACLE_MAX_SIZE);
        let cols = r.random_range(1..=ORACLE_MAX_SIZE);
        let m = random::val_matrix(&mut r, rows, cols, ORACLE_MAX_TERMS);
        let prof = match na_svd(&m, &int(DEFAULT_CAP)) {
            Ok(p) => p,
            Err(e) => return outcome(false, format!("case {case}: {e}")),
        };
        for k in 1..=rows.min(cols) {
            let want = min_minor_val(&m, k);
            let got = if k <= prof.rank() {
                LogVal::Finite(prof.partial_sum(k))
            } else {
                LogVal::Infinite
            };
            if got != want {
                return outcome(false, format!("case {case} ({rows}x{cols}) r={k}: {got} vs {want}"));
            }
        }
    }
    outcome(true, format!("{ORACLE_CASES} matrices, all ranks"))
}

fn max_abs_n_err(rep: &shilov_core::equi::ConvergenceReport, ns: std::ops::RangeInclusive<usize>) -> Rat {
    ns.map(|n| rep.row(n).and_then(|x| x.n_err.clone()).expect("certified").abs())
        .max()
        .expect("nonempty range")
}

fn main_theorem() -> Outcome {
    let cap = int(DEFAULT_CAP);
    let pts = vec![
        MonomialPoint::new(vec![int(0), int(1)], int(0)),
        MonomialPoint::new(vec![int(1), int(0)], int(0)),
    ];
    let s = MetricSpec::new(1, pts).expect("valid");
    let x1 = HomPoly::parse("x1", 2).expect("valid");
    let rep = theorem_harness(&s, &x1, LIMIT_NMAX, &cap).expect("harness");
    if !rep.all_certified() {
        return outcome(false, "closed-form rows not certified");
    }
    for n in 1..=LIMIT_NMAX {
        // chi(n) = n + 1 and the wedge picks ceil(n/2) unit valuations
        let want = rat(1, 2) - rat(n.div_ceil(2) as i64, n as i64 + 1);
        let err = rep.row(n).and_then(|x| x.err.clone()).expect("certified");
        if err != want {
            return outcome(false, format!("closed form n={n}: err {err}, expected {want}"));
        }
        if (&err * int(n as i64)).abs() > int(1) {
            return outcome(false, format!("|n err_n| > 1 at n={n}"));
        }
    }
    if rep.row(4).and_then(|x| x.err.clone()) != Some(rat(1, 10)) {
        return outcome(false, "err_4 is not 1/10");
    }

    let mut r = random::rng(SEED + 3);
    let mut worst = 0.0f64;
    for case in 0..LIMIT_RANDOM_SPECS {
        let m = r.random_range(2..=3);
        let s = random::spec(&mut r, 1, m);
        let sec = random::section(&mut r, 1, 1, 2, 2);
        let rep = match theorem_harness(&s, &sec, LIMIT_NMAX, &cap) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("random case {case}: {e}")),
        };
        if !rep.all_certified() {
            return outcome(false, format!("random case {case}: uncertified rows"));
        }
        let half = LIMIT_NMAX / 2;
        let early = max_abs_n_err(&rep, 1..=half);
        let late = max_abs_n_err(&rep, half + 1..=LIMIT_NMAX);
        if early.is_zero() {
            if !late.is_zero() {
                return outcome(false, format!("random case {case}: error appears late"));
            }
            continue;
        }
        let ratio = &late / &early;
        worst = worst.max(to_f64(&ratio));
        if ratio > int(LIMIT_GROWTH_FACTOR) {
            return outcome(false, format!("random case {case}: C grew by {ratio}"));
        }
    }
    outcome(
        true,
        format!("closed form exact for n <= {LIMIT_NMAX}; worst late/early C ratio {worst:.3}"),
    )
}

/// `chi_a(n) / chi(n)` by direct enumeration, ties counted for each point.
fn counting_lambda(s: &MetricSpec, n: usize) -> Vec<Rat> {
    let ms = monomials(s.d(), n);
    let mut counts = vec![0i64; s.len()];
    for alpha in &ms {
        let vals: Vec<Rat> = s.points().iter().map(|p| pairing(p, alpha)).collect();
        let lo = vals.iter().min().expect("nonempty").clone();
        for (a, v) in vals.iter().enumerate() {
            if *v == lo {
                counts[a] += 1;
            }
        }
    }
    counts.into_iter().map(|c| rat(c, ms.len() as i64)).collect()
}

fn lambda_cross_validation() -> Outcome {
    let mut r = random::rng(SEED + 4);
    let mut worst = 0.0f64;
    for case in 0..LAMBDA_SPECS {
        let d = r.random_range(1..=2);
        let m = r.random_range(1..=5);
        let s = random::spec(&mut r, d, m);
        let lam: Vec<Rat> = (0..m).map(|a| lambda_exact(&s, a).expect("d <= 2")).collect();
        let total: Rat = lam.iter().cloned().sum();
        if total != int(1) {
            return outcome(false, format!("case {case}: volumes sum to {total}"));
        }
        let level = if d == 1 { LAMBDA_LEVEL_P1 } else { LAMBDA_LEVEL_P2 };
        let n_err = |n: usize| -> Rat {
            let est = counting_lambda(&s, n);
            let e = est
                .iter()
                .zip(&lam)
                .map(|(x, y)| (x - y).abs())
                .max()
                .expect("nonempty");
            e * int(n as i64)
        };
        let c_fit = (1..=level / 2).map(n_err).max().expect("nonempty");
        let tail = (level / 2 + 1..=level).map(n_err).max().expect("nonempty");
        if c_fit.is_zero() {
            if !tail.is_zero() {
                return outcome(false, format!("case {case}: zero fit, tail {tail}"));
            }
            continue;
        }
        if tail > &c_fit * int(LAMBDA_FIT_SLACK) {
            return outcome(false, format!("case {case}: tail {tail} vs fitted C {c_fit}"));
        }
        // on P^1 every cell is an interval: |count - n lambda| <= 1 of n + 1 points
        if d == 1 && c_fit > int(2) {
            return outcome(false, format!("case {case}: fitted C {c_fit} above the interval bound"));
        }
        worst = worst.max(to_f64(&(tail / c_fit)));
    }
    outcome(true, format!("{LAMBDA_SPECS} specs; worst tail/fit ratio {worst:.3}"))
}

fn inequality_suite() -> Outcome {
    let suites: [(&str, props::Suite); 4] = [
        ("det distortion", props::det_distortion),
        ("operator norm change", props::operator_norm_change),
        ("max norm", props::max_norm),
        ("inverse of multiplication", props::inverse_multiplication),
    ];
    let mut notes = Vec::new();
    for (k, (name, suite)) in suites.iter().enumerate() {
        let rep = match suite(SEED + 5 + k as u64, INEQUALITY_CASES) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        if !rep.passed() {
            return outcome(false, format!("{name}: {}", rep.failures[0]));
        }
        notes.push(format!("{name} {}/{}", rep.cases - rep.skipped, rep.cases));
    }
    outcome(true, notes.join(", "))
}

fn localized_limit() -> Outcome {
    let mut r = random::rng(SEED + 6);
    let mut verified = 0;
    let mut drawn = 0;
    let mut max_n_star = 0;
    while verified < LOCALIZATION_CASES {
        drawn += 1;
        if drawn > 20 * LOCALIZATION_CASES {
            return outcome(false, format!("only {verified} instances with small n*"));
        }
        let d = r.random_range(1..=2);
        let m = r.random_range(1..=4);
        let s = random::spec(&mut r, d, m);
        let raw = random::section(&mut r, d, 1, 3, 1);
        let v = sup_val(&s, &raw).into_finite().expect("nonzero");
        let f = raw.scale(&HahnSeries::t_pow(-v));
        let deg = r.random_range(0..=2);
        let b = random::section(&mut r, d, deg, 4, 2);
        let loc = localized_val(&s, &f, &b).expect("spec_val(f) = 0");
        if loc.n_star > props::LOCALIZATION_MAX_N {
            continue;
        }
        let mut cur = b.clone();
        let mut seq = Vec::new();
        for _ in 0..=loc.n_star + LOCALIZATION_TAIL {
            seq.push(sup_val(&s, &cur));
            cur = cur.mul(&f).expect("same ring");
        }
        let ns = loc.n_star as usize;
        if seq[ns..].iter().any(|x| *x != loc.value) {
            return outcome(
                false,
                format!("instance {drawn}: {seq:?} vs {} from n*={ns}", loc.value),
            );
        }
        if ns > 0 && seq[ns - 1] == loc.value {
            return outcome(false, format!("instance {drawn}: n* = {ns} is not minimal"));
        }
        if seq.windows(2).any(|w| w[1] < w[0]) {
            return outcome(false, format!("instance {drawn}: valuations decrease"));
        }
        max_n_star = max_n_star.max(ns);
        verified += 1;
    }
    outcome(true, format!("{verified} instances, largest n* = {max_n_star}"))
}

/// Cell lengths on `P^1` from the envelope breakpoints.
fn interval_volumes(ws: &[Vec<Rat>], c: &[Rat]) -> Vec<Rat> {
    // g_i(u) = a_i + b_i u on [0, 1]
    let lines: Vec<(Rat, Rat)> = ws.iter().zip(c).map(|(w, c)| (&w[0] + c, &w[1] - &w[0])).collect();
    let mut cuts = vec![Rat::zero(), int(1)];
    for i in 0..lines.len() {
        for j in 0..i {
            let db = &lines[i].1 - &lines[j].1;
            if !db.is_zero() {
                let u = (&lines[j].0 - &lines[i].0) / db;
                if u > Rat::zero() && u < int(1) {
                    cuts.push(u);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut vols = vec![Rat::zero(); lines.len()];
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let vals: Vec<Rat> = lines.iter().map(|(a, b)| a + b * &mid).collect();
        let lo = vals.iter().min().expect("nonempty");
        let k = vals.iter().position(|v| v == lo).expect("attained");
        vols[k] += &w[1] - &w[0];
    }
    vols
}

fn solver_round_trip() -> Outcome {
    let opts = SolveOptions {
        tol: SOLVER_TOL,
        ..SolveOptions::default()
    };
    let tol = from_f64(SOLVER_TOL).expect("finite");
    let mut r = random::rng(SEED + 7);
    let mut worst_grad = 0.0f64;
    for case in 0..SOLVER_CASES {
        let d = r.random_range(1..=2);
        let m = r.random_range(1..=5);
        let p = random::solve_problem(&mut r, d, m);
        let res = match solve_prescribed(&p, &opts) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("case {case}: {e}")),
        };
        let ws: Vec<Vec<Rat>> = p.points.iter().map(|w| w.0.clone()).collect();
        let pts = ws
            .iter()
            .zip(&res.c)
            .map(|(w, c)| MonomialPoint::new(w.clone(), c.clone()))
            .collect();
        let shifted = MetricSpec::new(d, pts).expect("distinct");
        let mu = eq_measure(&shifted).expect("d <= 2");
        let off = mu
            .lambda
            .iter()
            .zip(&p.target)
            .map(|(x, y)| (x - y).abs())
            .max()
            .expect("nonempty");
        if off > tol {
            return outcome(false, format!("case {case}: measure off by {off}"));
        }
        if d == 1 {
            let vols = interval_volumes(&ws, &res.c);
            let off = vols
                .iter()
                .zip(&p.target)
                .map(|(x, y)| (x - y).abs())
                .max()
                .expect("nonempty");
            if off > tol {
                return outcome(false, format!("case {case}: interval oracle off by {off}"));
            }
        }
        if ws.len() > 1 {
            let probe: Vec<Rat> = (0..ws.len())
                .map(|_| from_f64(r.random_range(-1.0..1.0)).expect("finite"))
                .collect();
            let gap = props::gradient_gap(&ws, &probe, &p.target).expect("d <= 2");
            worst_grad = worst_grad.max(gap);
            if gap > GRADIENT_REL_TOL {
                return outcome(false, format!("case {case}: gradient gap {gap:e}"));
            }
        }
    }

    let closed = SolveProblem {
        d: 1,
        points: vec![WeightVec(vec![int(0), int(1)]), WeightVec(vec![int(1), int(0)])],
        target: vec![rat(3, 4), rat(1, 4)],
    };
    let res = solve_prescribed(&closed, &opts).expect("solvable");
    let c = res.c_f64();
    if c[0].abs() > CLOSED_FORM_TOL || (c[1] - 0.5).abs() > CLOSED_FORM_TOL {
        return outcome(false, format!("closed form gave {c:?}"));
    }

    // boundary targets: the solved measure is the prescribed Dirac or face measure
    let faces = [
        (1, vec![vec![0, 1], vec![1, 0]], vec![int(1), int(0)]),
        (
            1,
            vec![vec![0, 1], vec![1, 0], vec![0, 0]],
            vec![int(0), rat(1, 3), rat(2, 3)],
        ),
        (
            2,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![int(0), int(0), int(1)],
        ),
        (
            2,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![rat(1, 2), int(0), rat(1, 2)],
        ),
    ];
    for (k, (d, ws, target)) in faces.into_iter().enumerate() {
        let p = SolveProblem {
            d,
            points: ws
                .iter()
                .map(|w| WeightVec(w.iter().map(|&x| int(x)).collect()))
                .collect(),
            target: target.clone(),
        };
        let res = match solve_prescribed(&p, &opts) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("face case {k}: {e}")),
        };
        for (i, (v, t)) in res.volumes.iter().zip(&target).enumerate() {
            if t.is_zero() && !v.is_zero() {
                return outcome(false, format!("face case {k}: dropped point {i} kept volume {v}"));
            }
            if (v - t).abs() > tol {
                return outcome(false, format!("face case {k}: point {i} has {v}, target {t}"));
            }
        }
    }
    outcome(
        true,
        format!("{SOLVER_CASES} problems, closed form, 4 face targets; worst gradient gap {worst_grad:.1e}"),
    )
}

fn continuity_bound() -> Outcome {
    let mut r = random::rng(SEED + 8);
    let mut violations = Vec::new();
    for case in 0..CONTINUITY_PAIRS {
        let d = r.random_range(1..=2);
        let (m1, m2) = (r.random_range(1..=4), r.random_range(1..=4));
        let s1 = random::spec(&mut r, d, m1);
        let s2 = random::spec(&mut r, d, m2);
        let check = measure_distance_check(&s1, &s2).expect("d <= 2");
        // recompute the monomial-restricted distance from the measures
        let (mu, nu) = (eq_measure(&s1).expect("d <= 2"), eq_measure(&s2).expect("d <= 2"));
        let mut d_mono = Rat::zero();
        for k in 0..=d {
            let a: Rat = mu
                .lambda
                .iter()
                .zip(s1.points())
                .map(|(l, p)| l * (&p.w[k] + &p.c))
                .sum();
            let b: Rat = nu
                .lambda
                .iter()
                .zip(s2.points())
                .map(|(l, p)| l * (&p.w[k] + &p.c))
                .sum();
            d_mono = d_mono.max((a - b).abs());
        }
        let d_1 = metric_distance(&s1, &s2).expect("same d").d_1;
        if d_mono != check.d_mono || check.bound != &d_1 * int(2) {
            return outcome(false, format!("pair {case}: library and oracle disagree"));
        }
        if d_mono > &d_1 * int(2) {
            violations.push(format!("pair {case}: d = {d_mono} > 2 d_1 = {}", &d_1 * int(2)));
        }
    }
    // g = u - 1/2 against g = 0: equal integrals of the envelopes, different points
    let tilted = MetricSpec::new(1, vec![MonomialPoint::new(vec![rat(-1, 2), rat(1, 2)], Rat::zero())]).expect("valid");
    let flat = MetricSpec::new(1, vec![MonomialPoint::new(vec![int(0), int(0)], Rat::zero())]).expect("valid");
    let check = measure_distance_check(&tilted, &flat).expect("d = 1");
    if !check.holds {
        violations.push(format!("explicit pair: d = {} > 2 d_1 = {}", check.d_mono, check.bound));
    }
    if violations.is_empty() {
        outcome(true, format!("{CONTINUITY_PAIRS} pairs"))
    } else {
        outcome(
            false,
            format!(
                "{} of {} pairs violate the bound, first {}",
                violations.len(),
                CONTINUITY_PAIRS + 1,
                violations[0]
            ),
        )
    }
}

fn main() {
    let results = [
        run(1, "one-point identity", ONE_POINT_BUDGET, one_point_identity),
        run(2, "oracle equivalence", ORACLE_BUDGET, oracle_equivalence),
        run(3, "main theorem convergence", LIMIT_BUDGET, main_theorem),
        run(4, "lambda cross-validation", LAMBDA_BUDGET, lambda_cross_validation),
        run(5, "inequality suite", INEQUALITY_BUDGET, inequality_suite),
        run(6, "localized-norm limit", LOCALIZATION_BUDGET, localized_limit),
        run(7, "solver round-trip", SOLVER_BUDGET, solver_round_trip),
        run(8, "continuity bound", CONTINUITY_BUDGET, continuity_bound),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed < results.len() {
        std::process::exit(1);
    }
}
