//! Ultrametric linear algebra between spaces with diagonal norms.
//!
//! A diagonal norm gives each basis vector a valuation weight and makes the
//! basis orthogonal, so `||x^alpha|| = exp(-rho_alpha)`. Operator norms,
//! singular valuations and top-wedge norms of a matrix are computed after
//! rescaling it to orthonormal bases: `N_ij = M_ij t^(tau_i - rho_j)`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{int, LogVal, Rat};
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::metrics::MetricSpec;
use crate::poly::{monomials, mult_operator, ExpVec, HomPoly};

/// Valuation weights of an orthogonal monomial basis at level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagNorm {
    pub n: usize,
    pub basis: Vec<ExpVec>,
    pub weights: Vec<Rat>,
}

impl DiagNorm {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights without a monomial basis, for abstract spaces.
    pub fn from_weights(weights: Vec<Rat>) -> Self {
        DiagNorm {
            n: 0,
            basis: Vec::new(),
            weights,
        }
    }

    pub fn weight(&self, alpha: &ExpVec) -> Option<&Rat> {
        self.basis.iter().position(|b| b == alpha).map(|k| &self.weights[k])
    }

    /// The norm `max(||.||_1, ||.||_2)`: componentwise minimum of weights.
    pub fn max_norm(&self, other: &DiagNorm) -> DiagNorm {
        DiagNorm {
            n: self.n,
            basis: self.basis.clone(),
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        }
    }

    /// `sup |log(||v||_1 / ||v||_2)|`, attained on basis vectors.
    pub fn dist(&self, other: &DiagNorm) -> Rat {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| {
                let d = a - b;
                if d < Rat::zero() {
                    -d
                } else {
                    d
                }
            })
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

/// `rho_alpha = min_i <h_i, alpha>` over the degree-`n` monomials.
pub fn diag_norm(s: &MetricSpec, n: usize) -> DiagNorm {
    let basis = monomials(s.d(), n);
    let weights = basis.iter().map(|a| s.monomial_val(a)).collect();
    DiagNorm { n, basis, weights }
}

/// A dense matrix between two diagonally normed spaces.
#[derive(Clone, Debug)]
pub struct ValMatrix {
    pub entries: Vec<Vec<HahnSeries>>,
    pub src: DiagNorm,
    pub tgt: DiagNorm,
}

impl ValMatrix {
    pub fn new(entries: Vec<Vec<HahnSeries>>, src: DiagNorm, tgt: DiagNorm) -> Result<Self> {
        if entries.len() != tgt.len() {
            return Err(Error::DimensionMismatch {
                expected: tgt.len(),
                found: entries.len(),
            });
        }
        for row in &entries {
            if row.len() != src.len() {
                return Err(Error::DimensionMismatch {
                    expected: src.len(),
                    found: row.len(),
                });
            }
        }
        Ok(ValMatrix { entries, src, tgt })
    }

    /// Multiplication by `s` from level `n` to level `n + deg s`, with the
    /// diagonal norms induced by `spec`.
    pub fn mult(spec: &MetricSpec, s: &HomPoly, n: usize) -> Result<Self> {
        spec.check_poly(s)?;
        let m = mult_operator(s, n)?;
        let src = diag_norm(spec, n);
        let tgt = diag_norm(spec, n + s.degree());
        Self::new(m.to_dense(), src, tgt)
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    /// The restriction to the span of the chosen source basis vectors.
    pub fn restrict_cols(&self, keep: &[usize]) -> ValMatrix {
        let entries = self
            .entries
            .iter()
            .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let src = DiagNorm {
            n: self.src.n,
            basis: if self.src.basis.is_empty() {
                Vec::new()
            } else {
                keep.iter().map(|&j| self.src.basis[j].clone()).collect()
            },
            weights: keep.iter().map(|&j| self.src.weights[j].clone()).collect(),
        };
        ValMatrix {
            entries,
            src,
            tgt: self.tgt.clone(),
        }
    }

    pub fn with_norms(&self, src: DiagNorm, tgt: DiagNorm) -> Result<Self> {
        Self::new(self.entries.clone(), src, tgt)
    }

    /// Entries in orthonormal coordinates.
    pub fn rescaled(&self) -> Vec<Vec<HahnSeries>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| x.shift(&(&self.tgt.weights[i] - &self.src.weights[j])))
                    .collect()
            })
            .collect()
    }
}

/// `min (val(M_ij) + tau_i - rho_j)`; `+inf` for the zero map.
pub fn op_norm_val(m: &ValMatrix) -> LogVal {
    m.rescaled()
        .iter()
        .flatten()
        .map(HahnSeries::valuation)
        .min()
        .unwrap_or(LogVal::Infinite)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularProfile {
    /// Ascending singular valuations, one per pivot.
    #[serde(serialize_with = "ser_rats")]
    pub sigma: Vec<Rat>,
    pub certified: Vec<bool>,
    /// Pivot positions `(row, col)` in elimination order.
    pub pivots: Vec<(usize, usize)>,
    #[serde(serialize_with = "ser_rat")]
    pub cap: Rat,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::arith::serde_rat::vec::serialize(v, s)
}

fn ser_rat<S: serde::Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::arith::serde_rat::serialize(v, s)
}

impl SingularProfile {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn all_certified(&self) -> bool {
        self.certified.iter().all(|&c| c)
    }

    /// `sigma_1 + ... + sigma_r`.
    pub fn partial_sum(&self, r: usize) -> Rat {
        self.sigma[..r].iter().fold(Rat::zero(), |acc, x| acc + x)
    }
}

pub const DEFAULT_CAP: i64 = 64;
pub const MAX_RETRIES: u32 = 4;

fn product(a: &HahnSeries, b: &HahnSeries, cap: &LogVal) -> HahnSeries {
    if a.is_exact() && b.is_exact() {
        a.mul(b)
    } else {
        a.mul_trunc(b, cap)
    }
}

/// One elimination pass at a fixed precision cap. Entries of the result are
/// flagged uncertified when the chosen pivot was only known as `O(t^p)`.
pub fn na_svd_at(m: &ValMatrix, cap: &Rat) -> Result<SingularProfile> {
    let mut a = m.rescaled();
    let (nr, nc) = (m.rows(), m.cols());
    let capv = LogVal::Finite(cap.clone());
    let mut row_live = vec![true; nr];
    let mut col_live = vec![true; nc];
    let mut prof = SingularProfile {
        sigma: Vec::new(),
        certified: Vec::new(),
        pivots: Vec::new(),
        cap: cap.clone(),
    };
    for _ in 0..nr.min(nc) {
        // minimal valuation; on ties prefer known entries, then (row, col)
        let mut best: Option<(LogVal, bool, usize, usize)> = None;
        for i in (0..nr).filter(|&i| row_live[i]) {
            for j in (0..nc).filter(|&j| col_live[j]) {
                let x = &a[i][j];
                if x.is_zero() {
                    continue;
                }
                let key = (x.valuation(), x.is_semi_zero(), i, j);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((v, unknown, p, q)) = best else { break };
        let LogVal::Finite(v) = v else {
            unreachable!("nonzero entries have finite valuation")
        };
        prof.sigma.push(v);
        prof.certified.push(!unknown);
        prof.pivots.push((p, q));
        if unknown {
            break;
        }
        let inv = a[p][q].inv(&capv)?;
        row_live[p] = false;
        col_live[q] = false;
        for i in (0..nr).filter(|&i| row_live[i]) {
            if a[i][q].is_zero() {
                continue;
            }
            let factor = product(&a[i][q], &inv, &capv);
            for j in (0..nc).filter(|&j| col_live[j]) {
                if a[p][j].is_zero() {
                    continue;
                }
                let upd = a[i][j].sub(&product(&factor, &a[p][j], &capv));
                a[i][j] = if upd.is_exact() { upd } else { upd.truncate(&capv) };
            }
            a[i][q] = HahnSeries::zero();
        }
    }
    Ok(prof)
}

/// Elimination without division by pivots: after `k` steps entry `(i, j)`
/// is the minor on the pivot rows and columns plus `i` and `j`, so the
/// Schur complement entry is that minor over the previous pivot. The same
/// pivots are chosen as by the truncated pass, and nothing is truncated.
fn fraction_free(mut a: Vec<Vec<HahnSeries>>, cap: &Rat) -> SingularProfile {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut row_live = vec![true; nr];
    let mut col_live = vec![true; nc];
    let mut prev = HahnSeries::one();
    let mut prof = SingularProfile {
        sigma: Vec::new(),
        certified: Vec::new(),
        pivots: Vec::new(),
        cap: cap.clone(),
    };
    let prev_val = |p: &HahnSeries| p.valuation().into_finite().expect("nonzero pivot");
    for _ in 0..nr.min(nc) {
        let mut best: Option<(LogVal, usize, usize)> = None;
        for i in (0..nr).filter(|&i| row_live[i]) {
            for j in (0..nc).filter(|&j| col_live[j]) {
                if a[i][j].is_zero() {
                    continue;
                }
                let key = (a[i][j].valuation(), i, j);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((LogVal::Finite(v), p, q)) = best else { break };
        prof.sigma.push(v - prev_val(&prev));
        prof.certified.push(true);
        prof.pivots.push((p, q));
        row_live[p] = false;
        col_live[q] = false;
        let piv = a[p][q].clone();
        for i in (0..nr).filter(|&i| row_live[i]) {
            for j in (0..nc).filter(|&j| col_live[j]) {
                let cross = a[i][j].mul(&piv).sub(&a[i][q].mul(&a[p][j]));
                a[i][j] = cross.div_exact(&prev).expect("Sylvester identity: division is exact");
            }
        }
        prev = piv;
    }
    prof
}

/// Working precision for the first pass: just above the largest entry
/// valuation, so easy matrices never carry long expansions.
fn starting_precision(m: &ValMatrix) -> Rat {
    let top = m
        .rescaled()
        .iter()
        .flatten()
        .filter_map(|x| x.valuation().into_finite())
        .max()
        .unwrap_or_else(Rat::zero);
    top.max(Rat::zero()).floor() + Rat::one()
}

/// Singular valuations with certified precision. Passes run at doubling
/// working precisions below `cap`; a certified pass is exact. If none
/// certifies, an exact matrix is finished by fraction-free elimination,
/// and an inexact one retries from `cap`, doubling up to `MAX_RETRIES`
/// times.
pub fn na_svd(m: &ValMatrix, cap: &Rat) -> Result<SingularProfile> {
    let mut c = starting_precision(m);
    while c < *cap {
        let prof = na_svd_at(m, &c)?;
        if prof.all_certified() {
            return Ok(prof);
        }
        c = &c * int(2);
    }
    if m.entries.iter().flatten().all(HahnSeries::is_exact) {
        return Ok(fraction_free(m.rescaled(), cap));
    }
    let mut c = cap.clone();
    for attempt in 0..=MAX_RETRIES {
        let prof = na_svd_at(m, &c)?;
        if prof.all_certified() {
            return Ok(prof);
        }
        if attempt < MAX_RETRIES {
            c = &c * int(2);
        }
    }
    Err(Error::PrecisionExhausted { cap: c })
}

/// `-log` of the top-wedge operator norm of an injective map.
pub fn wedge_top_val(m: &ValMatrix, cap: &Rat) -> Result<Rat> {
    let prof = na_svd(m, cap)?;
    if prof.rank() < m.cols() {
        return Err(Error::RankDeficient {
            rank: prof.rank(),
            cols: m.cols(),
        });
    }
    Ok(prof.partial_sum(prof.rank()))
}

pub const ORACLE_MAX: usize = 12;

/// Minimal valuation of an `r x r` minor in orthonormal coordinates,
/// by exact Laplace expansion.
pub fn minor_oracle(m: &ValMatrix, r: usize) -> Result<LogVal> {
    let (nr, nc) = (m.rows(), m.cols());
    if nr > ORACLE_MAX || nc > ORACLE_MAX {
        return Err(Error::SizeGuard { rows: nr, cols: nc });
    }
    if r == 0 || r > nr.min(nc) {
        return Err(Error::invalid(format!("minor size {r} out of range")));
    }
    let a = m.rescaled();
    let mut best = LogVal::Infinite;
    for rows in subsets(nr, r) {
        // det over rows[..k] and column set `mask`, expanded along the last row
        let mut memo: HashMap<u32, HahnSeries> = HashMap::new();
        memo.insert(0, HahnSeries::one());
        for k in 1..=r {
            let row = &a[rows[k - 1]];
            let mut next = HashMap::new();
            for cols in subsets(nc, k) {
                let mask: u32 = cols.iter().map(|&c| 1u32 << c).sum();
                let mut acc = HahnSeries::zero();
                for (pos, &c) in cols.iter().enumerate() {
                    if row[c].is_zero() {
                        continue;
                    }
                    let sub = &memo[&(mask & !(1 << c))];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = row[c].mul(sub);
                    // sign of moving column c to the end of the k chosen columns
                    acc = if (k - 1 - pos) % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                next.insert(mask, acc);
            }
            memo = next;
        }
        for det in memo.values() {
            best = best.min(det.valuation());
        }
    }
    Ok(best)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::metrics::MonomialPoint;

    fn hs(s: &str) -> HahnSeries {
        s.parse().unwrap()
    }

    fn unit(n: usize) -> DiagNorm {
        DiagNorm::from_weights(vec![int(0); n])
    }

    fn two_point() -> MetricSpec {
        MetricSpec::from_weights(1, &[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap()
    }

    fn cap() -> Rat {
        int(DEFAULT_CAP)
    }

    #[test]
    fn diagonal_norms() {
        assert_eq!(diag_norm(&two_point(), 2).weights, vec![int(0), int(1), int(0)]);
        let s = MetricSpec::from_weights(1, &[vec![int(0), int(0)]]).unwrap();
        assert!(diag_norm(&s, 5).weights.iter().all(Zero::is_zero));
        let s = MetricSpec::new(1, vec![MonomialPoint::new(vec![int(0), int(1)], int(1))]).unwrap();
        let dn = diag_norm(&s, 3);
        assert_eq!(dn.weight(&ExpVec::new(vec![3, 0])), Some(&int(3)));
    }

    #[test]
    fn operator_norms() {
        let id = vec![vec![hs("1"), hs("0")], vec![hs("0"), hs("1")]];
        assert_eq!(
            op_norm_val(&ValMatrix::new(id, unit(2), unit(2)).unwrap()),
            LogVal::zero()
        );
        let m = ValMatrix::new(vec![vec![hs("t^(2)")]], unit(1), unit(1)).unwrap();
        assert_eq!(op_norm_val(&m), LogVal::Finite(int(2)));
        let x1 = HomPoly::parse("x1", 2).unwrap();
        let m = ValMatrix::mult(&two_point(), &x1, 1).unwrap();
        assert_eq!(op_norm_val(&m), LogVal::zero());
    }

    #[test]
    fn singular_values() {
        let z = hs("0");
        let m = ValMatrix::new(
            vec![
                vec![hs("1"), z.clone(), z.clone()],
                vec![z.clone(), hs("t"), z.clone()],
                vec![z.clone(), z.clone(), hs("t^(3)")],
            ],
            unit(3),
            unit(3),
        )
        .unwrap();
        assert_eq!(na_svd(&m, &cap()).unwrap().sigma, vec![int(0), int(1), int(3)]);

        let m = ValMatrix::new(
            vec![vec![hs("1"), hs("1")], vec![hs("1"), hs("1 + t")]],
            unit(2),
            unit(2),
        )
        .unwrap();
        let p = na_svd(&m, &cap()).unwrap();
        assert_eq!(p.sigma, vec![int(0), int(1)]);
        assert_eq!(LogVal::Finite(p.sigma[0].clone()), op_norm_val(&m));
        assert_eq!(minor_oracle(&m, 2).unwrap(), LogVal::Finite(int(1)));
        assert_eq!(minor_oracle(&m, 1).unwrap(), op_norm_val(&m));
    }

    #[test]
    fn truncated_pivots_are_certified() {
        let m = ValMatrix::new(
            vec![
                vec![hs("1 + t^(1/3)"), hs("2 - t"), hs("t^(1/2)")],
                vec![hs("1 - t^(2)"), hs("2 + t^(5/2)"), hs("3")],
                vec![hs("t"), hs("1 + t^(1/3) + t"), hs("1")],
            ],
            unit(3),
            DiagNorm::from_weights(vec![int(0), rat(1, 2), int(-1)]),
        )
        .unwrap();
        let p = na_svd(&m, &int(8)).unwrap();
        for r in 1..=3 {
            assert_eq!(
                LogVal::Finite(p.partial_sum(r)),
                minor_oracle(&m, r).unwrap(),
                "r = {r}"
            );
        }
    }

    #[test]
    fn wedge_of_multiplication() {
        let x1 = HomPoly::parse("x1", 2).unwrap();
        let m = ValMatrix::mult(&two_point(), &x1, 2).unwrap();
        assert_eq!(na_svd(&m, &cap()).unwrap().sigma, vec![int(0), int(0), int(1)]);
        assert_eq!(wedge_top_val(&m, &cap()).unwrap(), int(1));
        let m = ValMatrix::mult(&two_point(), &x1, 4).unwrap();
        assert_eq!(wedge_top_val(&m, &cap()).unwrap(), int(2));
    }

    #[test]
    fn rank_deficiency_and_guards() {
        let m = ValMatrix::new(vec![vec![hs("1"), hs("1")], vec![hs("1"), hs("1")]], unit(2), unit(2)).unwrap();
        assert!(matches!(
            wedge_top_val(&m, &cap()),
            Err(Error::RankDeficient { rank: 1, cols: 2 })
        ));
        let big = ValMatrix::new(vec![vec![hs("1"); 13]; 13], unit(13), unit(13)).unwrap();
        assert!(matches!(minor_oracle(&big, 2), Err(Error::SizeGuard { .. })));
    }
}
