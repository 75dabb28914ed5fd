//! Seeded generators for random test instances.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, rat, LogVal, Rat};
use crate::hahn::HahnSeries;
use crate::metrics::{MetricSpec, MonomialPoint};
use crate::poly::{monomials, HomPoly};
use crate::solver::{SolveProblem, WeightVec};
use crate::ultra::{DiagNorm, ValMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMS: [i64; 5] = [1, 2, 3, 4, 6];

/// A rational `p / q` with `|p / q| <= bound` and small denominator.
pub fn small_rat<R: Rng>(r: &mut R, bound: i64) -> Rat {
    let q = DENOMS[r.random_range(0..DENOMS.len())];
    rat(r.random_range(-bound * q..=bound * q), q)
}

pub fn nonneg_rat<R: Rng>(r: &mut R, bound: i64) -> Rat {
    let q = DENOMS[r.random_range(0..DENOMS.len())];
    rat(r.random_range(0..=bound * q), q)
}

fn nonzero_coeff<R: Rng>(r: &mut R) -> Rat {
    loop {
        let c = small_rat(r, 3);
        if c != int(0) {
            return c;
        }
    }
}

/// An exact series with `1..=max_terms` terms and exponents in `[lo, lo + 3]`.
pub fn hahn<R: Rng>(r: &mut R, max_terms: usize, lo: i64) -> HahnSeries {
    let k = r.random_range(1..=max_terms);
    let pairs: Vec<(Rat, Rat)> = (0..k).map(|_| (nonzero_coeff(r), int(lo) + nonneg_rat(r, 3))).collect();
    let s = HahnSeries::from_terms(pairs, LogVal::Infinite);
    if s.is_zero() {
        HahnSeries::one()
    } else {
        s
    }
}

pub fn point<R: Rng>(r: &mut R, d: usize) -> MonomialPoint {
    MonomialPoint::new((0..=d).map(|_| small_rat(r, 2)).collect(), small_rat(r, 1))
}

/// A spec with `m` distinct points.
pub fn spec<R: Rng>(r: &mut R, d: usize, m: usize) -> MetricSpec {
    loop {
        let pts = (0..m).map(|_| point(r, d)).collect();
        if let Ok(s) = MetricSpec::new(d, pts) {
            return s;
        }
    }
}

/// A nonzero degree-`n` section with up to `nterms` monomials.
pub fn section<R: Rng>(r: &mut R, d: usize, n: usize, nterms: usize, max_coeff_terms: usize) -> HomPoly {
    let basis = monomials(d, n);
    let k = r.random_range(1..=nterms.min(basis.len()));
    let picks = sample(r, basis.len(), k);
    let terms: Vec<_> = picks
        .iter()
        .map(|i| (basis[i].clone(), hahn(r, max_coeff_terms, 0)))
        .collect();
    HomPoly::from_terms(d + 1, n, terms).expect("homogeneous by construction")
}

pub fn diag<R: Rng>(r: &mut R, len: usize) -> DiagNorm {
    DiagNorm::from_weights((0..len).map(|_| small_rat(r, 2)).collect())
}

/// Dense matrix with entries of up to `max_terms` terms; about a fifth of
/// the entries are zero.
pub fn val_matrix<R: Rng>(r: &mut R, rows: usize, cols: usize, max_terms: usize) -> ValMatrix {
    let entries = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if r.random_ratio(1, 5) {
                        HahnSeries::zero()
                    } else {
                        hahn(r, max_terms, -1)
                    }
                })
                .collect()
        })
        .collect();
    let src = diag(r, cols);
    let tgt = diag(r, rows);
    ValMatrix::new(entries, src, tgt).expect("consistent sizes")
}

/// A target in the open simplex, with small denominators.
pub fn interior_target<R: Rng>(r: &mut R, m: usize) -> Vec<Rat> {
    let ws: Vec<i64> = (0..m).map(|_| r.random_range(1..=6)).collect();
    let total: i64 = ws.iter().sum();
    ws.into_iter().map(|w| rat(w, total)).collect()
}

/// `m` pairwise non-parallel weight vectors with an interior target.
pub fn solve_problem<R: Rng>(r: &mut R, d: usize, m: usize) -> SolveProblem {
    loop {
        let points: Vec<Vec<Rat>> = (0..m).map(|_| (0..=d).map(|_| small_rat(r, 2)).collect()).collect();
        let lin: Vec<Vec<Rat>> = points
            .iter()
            .map(|w| w[1..].iter().map(|x| x - &w[0]).collect())
            .collect();
        let distinct = (0..m).all(|i| (0..i).all(|j| lin[i] != lin[j]));
        if distinct {
            return SolveProblem {
                d,
                points: points.into_iter().map(WeightVec).collect(),
                target: interior_target(r, m),
            };
        }
    }
}
