//! Shilov-finite metrics as envelopes of monomial (Gauss) valuation points.
//!
//! A point `(w, c)` values a degree-`n` section `f` at
//! `min over terms (val(coeff) + <w, alpha>) + n c`. Since `|alpha| = n` this
//! is `min (val(coeff) + <h, alpha>)` with vertex values `h_j = w_j + c`, and
//! on the simplex the point is the affine function `g(u) = <h, u>`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, lcm_denominators, serde_rat, LogVal, Rat};
use crate::cells;
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::lp::{Cmp, Lp};
use crate::poly::{hilbert, monomials, ExpVec, HomPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialPoint {
    #[serde(with = "serde_rat::vec")]
    pub w: Vec<Rat>,
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub c: Rat,
}

impl MonomialPoint {
    pub fn new(w: Vec<Rat>, c: Rat) -> Self {
        MonomialPoint { w, c }
    }

    /// Vertex values `h_j = w_j + c`.
    pub fn h(&self) -> Vec<Rat> {
        self.w.iter().map(|x| x + &self.c).collect()
    }

    /// `<h, alpha>`: the valuation of the monomial `x^alpha`.
    pub fn monomial_val(&self, alpha: &ExpVec) -> Rat {
        self.w
            .iter()
            .zip(alpha.as_slice())
            .fold(Rat::zero(), |acc, (w, &a)| acc + (w + &self.c) * int(a as i64))
    }
}

/// Gauss valuation of `f` at `z`; `+inf` iff `f = 0`.
pub fn point_val(z: &MonomialPoint, f: &HomPoly) -> LogVal {
    f.terms()
        .iter()
        .map(|(alpha, c)| c.valuation().add_rat(&z.monomial_val(alpha)))
        .min()
        .unwrap_or(LogVal::Infinite)
}

/// Componentwise order: `z` lies below `w` in the envelope order iff
/// `v_z >= v_w` on every monomial, i.e. `h_z >= h_w` at every vertex.
pub fn dominance(z: &MonomialPoint, w: &MonomialPoint) -> bool {
    z.h().iter().zip(w.h()).all(|(a, b)| *a >= b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "RawSpec")]
pub struct MetricSpec {
    d: usize,
    points: Vec<MonomialPoint>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    d: usize,
    points: Vec<MonomialPoint>,
}

impl From<MetricSpec> for RawSpec {
    fn from(s: MetricSpec) -> Self {
        RawSpec {
            d: s.d,
            points: s.points,
        }
    }
}

impl<'de> Deserialize<'de> for MetricSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        MetricSpec::new(raw.d, raw.points).map_err(serde::de::Error::custom)
    }
}

impl MetricSpec {
    /// Validates dimensions and rejects points defining the same valuation.
    pub fn new(d: usize, points: Vec<MonomialPoint>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d must be at least 1"));
        }
        if points.is_empty() {
            return Err(Error::invalid("a metric needs at least one point"));
        }
        for p in &points {
            if p.w.len() != d + 1 {
                return Err(Error::DimensionMismatch {
                    expected: d + 1,
                    found: p.w.len(),
                });
            }
        }
        let hs: Vec<Vec<Rat>> = points.iter().map(MonomialPoint::h).collect();
        for i in 0..hs.len() {
            for j in 0..i {
                if hs[i] == hs[j] {
                    return Err(Error::DuplicatePoints(j, i));
                }
            }
        }
        Ok(MetricSpec { d, points })
    }

    /// Points given by weights only (`c = 0`).
    pub fn from_weights(d: usize, ws: &[Vec<Rat>]) -> Result<Self> {
        Self::new(
            d,
            ws.iter().map(|w| MonomialPoint::new(w.clone(), Rat::zero())).collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[MonomialPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn hs(&self) -> Vec<Vec<Rat>> {
        self.points.iter().map(MonomialPoint::h).collect()
    }

    /// The same points with shifts replaced.
    pub fn with_shifts(&self, c: &[Rat]) -> Result<Self> {
        if c.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                found: c.len(),
            });
        }
        let pts = self
            .points
            .iter()
            .zip(c)
            .map(|(p, c)| MonomialPoint::new(p.w.clone(), c.clone()))
            .collect();
        Self::new(self.d, pts)
    }

    /// Adds `delta` to every shift.
    pub fn shifted(&self, delta: &Rat) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| MonomialPoint::new(p.w.clone(), &p.c + delta))
            .collect();
        MetricSpec { d: self.d, points }
    }

    /// `min_i <h_i, alpha>`.
    pub fn monomial_val(&self, alpha: &ExpVec) -> Rat {
        self.points
            .iter()
            .map(|p| p.monomial_val(alpha))
            .min()
            .expect("nonempty")
    }

    pub fn check_poly(&self, f: &HomPoly) -> Result<()> {
        if f.nvars() != self.d + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.d + 1,
                found: f.nvars(),
            });
        }
        Ok(())
    }
}

/// Sup-norm valuation of the envelope metric: the minimum over points.
pub fn spec_val(s: &MetricSpec, f: &HomPoly) -> LogVal {
    s.points
        .iter()
        .map(|z| point_val(z, f))
        .min()
        .unwrap_or(LogVal::Infinite)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShilovSet {
    pub members: Vec<usize>,
    /// Interior witness `u` (barycentric) per member.
    #[serde(serialize_with = "ser_witnesses")]
    pub witnesses: Vec<Vec<Rat>>,
}

fn ser_witnesses<S: serde::Serializer>(w: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(w.len()))?;
    for u in w {
        seq.serialize_element(&u.iter().map(|r| r.to_string()).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl ShilovSet {
    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(&a)
    }

    pub fn witness(&self, a: usize) -> Option<&[Rat]> {
        self.members
            .iter()
            .position(|&m| m == a)
            .map(|k| self.witnesses[k].as_slice())
    }
}

/// Maximal margin by which `a` is the strict argmin somewhere inside the
/// simplex, with the point attaining it; `None` if the margin is not positive.
fn strict_argmin_witness(hs: &[Vec<Rat>], a: usize) -> Result<Option<Vec<Rat>>> {
    let nv = hs[a].len();
    // variables u_0..u_d, eps
    let mut obj = vec![Rat::zero(); nv + 1];
    obj[nv] = Rat::one();
    let mut lp = Lp::maximize(obj);
    let mut row = vec![Rat::one(); nv + 1];
    row[nv] = Rat::zero();
    lp.add(row, Cmp::Eq, Rat::one());
    for j in 0..nv {
        let mut row = vec![Rat::zero(); nv + 1];
        row[j] = Rat::one();
        row[nv] = -Rat::one();
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for (i, h) in hs.iter().enumerate() {
        if i == a {
            continue;
        }
        let mut row: Vec<Rat> = h.iter().zip(&hs[a]).map(|(x, y)| x - y).collect();
        row.push(-Rat::one());
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    let mut cap = vec![Rat::zero(); nv + 1];
    cap[nv] = Rat::one();
    lp.add(cap, Cmp::Le, Rat::one());
    match lp.solve() {
        crate::lp::Outcome::Optimal { value, x } if value.is_positive() => Ok(Some(x[..nv].to_vec())),
        crate::lp::Outcome::Optimal { .. } | crate::lp::Outcome::Infeasible => Ok(None),
        crate::lp::Outcome::Unbounded => Err(Error::Lp("unbounded")),
    }
}

pub fn shilov_set(s: &MetricSpec) -> Result<ShilovSet> {
    let hs = s.hs();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for a in 0..hs.len() {
        if let Some(u) = strict_argmin_witness(&hs, a)? {
            members.push(a);
            witnesses.push(u);
        }
    }
    Ok(ShilovSet { members, witnesses })
}

/// Whether `z` lies in the envelope of `s`: `<h_z, u> >= min_i <h_i, u>` on
/// the whole simplex, decided by `min_u max_i <h_z - h_i, u> >= 0`.
pub fn envelope_contains(s: &MetricSpec, z: &MonomialPoint) -> Result<bool> {
    if z.w.len() != s.d + 1 {
        return Err(Error::DimensionMismatch {
            expected: s.d + 1,
            found: z.w.len(),
        });
    }
    let hz = z.h();
    let nv = hz.len();
    let mut obj = vec![Rat::zero(); nv + 1];
    obj[nv] = Rat::one();
    let mut lp = Lp::minimize(obj);
    lp.set_free(nv);
    let mut row = vec![Rat::one(); nv + 1];
    row[nv] = Rat::zero();
    lp.add(row, Cmp::Eq, Rat::one());
    for h in s.hs() {
        // t - <h_z - h_i, u> >= 0
        let mut row: Vec<Rat> = hz.iter().zip(&h).map(|(x, y)| y - x).collect();
        row.push(Rat::one());
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    let (neg_min, _) = lp.solve().optimal()?;
    Ok(!neg_min.is_positive())
}

/// Lowest-degree, graded-lex-first exponent vector `alpha` with `alpha / n`
/// in the closed cell of `i` and strictly off the points in `strict`.
fn cell_monomial(hs: &[Vec<Rat>], i: usize, strict: &[usize], witness: &[Rat]) -> ExpVec {
    let d = hs[0].len() - 1;
    let ok = |alpha: &[u32]| {
        hs.iter().enumerate().all(|(k, h)| {
            if k == i {
                return true;
            }
            let gap = h
                .iter()
                .zip(&hs[i])
                .zip(alpha)
                .fold(Rat::zero(), |acc, ((x, y), &a)| acc + (x - y) * int(a as i64));
            if strict.contains(&k) {
                gap.is_positive()
            } else {
                !gap.is_negative()
            }
        })
    };
    let mut budget = 20_000usize;
    let mut n = 1;
    while budget > 0 {
        for alpha in monomials(d, n) {
            if ok(alpha.as_slice()) {
                return alpha;
            }
        }
        budget = budget.saturating_sub(hilbert(d, n));
        n += 1;
    }
    // the witness direction is strictly inside the open cell
    let l = lcm_denominators(witness);
    let exps = witness
        .iter()
        .map(|u| {
            let v = (u * Rat::from_integer(l.clone())).to_integer();
            u32::try_from(v).expect("witness exponent fits in u32")
        })
        .collect();
    ExpVec::new(exps)
}

/// A section with `spec_val = 0`, positive valuation at every Shilov point
/// in `j`, and valuation 0 at the remaining Shilov points.
pub fn separating_section(s: &MetricSpec, j: &[usize]) -> Result<HomPoly> {
    let sh = shilov_set(s)?;
    let j: BTreeSet<usize> = j.iter().copied().collect();
    if j.is_empty() {
        return Err(Error::Precondition("the subset J must be nonempty".into()));
    }
    if let Some(bad) = j.iter().find(|x| !sh.contains(**x)) {
        return Err(Error::Precondition(format!("index {bad} is not a Shilov point")));
    }
    if j.len() == sh.members.len() {
        return Err(Error::Precondition(
            "J must be a proper subset of the Shilov set".into(),
        ));
    }
    let hs = s.hs();
    let strict: Vec<usize> = j.iter().copied().collect();
    let nvars = s.d + 1;
    let mut pieces = Vec::new();
    for (k, &i) in sh.members.iter().enumerate() {
        if j.contains(&i) {
            continue;
        }
        let alpha = cell_monomial(&hs, i, &strict, &sh.witnesses[k]);
        let beta = -s.points[i].monomial_val(&alpha);
        pieces.push(HomPoly::monomial(HahnSeries::t_pow(beta), alpha));
    }
    let lcm = pieces.iter().fold(1usize, |acc, p| num_integer::lcm(acc, p.degree()));
    let mut f = HomPoly::zero(nvars, lcm);
    for p in pieces {
        f = f.add(&p.pow((lcm / p.degree()) as u32))?;
    }
    Ok(f)
}

/// Sections `f_i`, one per Shilov point in index order, with positive
/// valuation at their own point and valuation 0 at every other Shilov point.
pub fn peak_system(s: &MetricSpec) -> Result<(Vec<usize>, Vec<HomPoly>)> {
    let sh = shilov_set(s)?;
    if sh.members.len() == 1 {
        let a = sh.members[0];
        let h = s.points[a].h();
        let nvars = s.d + 1;
        let f = match h.iter().position(|x| x.is_positive()) {
            Some(j) => HomPoly::var(nvars, j),
            None => HomPoly::monomial(HahnSeries::t_pow(Rat::one() - &h[0]), ExpVec::unit(nvars, 0)),
        };
        return Ok((sh.members, vec![f]));
    }
    let fs = sh
        .members
        .iter()
        .map(|&i| separating_section(s, &[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok((sh.members, fs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localized {
    pub value: LogVal,
    /// `spec_val(f^n b) = value` for every `n >= n_star`.
    pub n_star: u64,
}

/// Limit of `spec_val(f^n b)` for a section `f` with `spec_val(f) = 0`.
pub fn localized_val(s: &MetricSpec, f: &HomPoly, b: &HomPoly) -> Result<Localized> {
    s.check_poly(f)?;
    s.check_poly(b)?;
    if spec_val(s, f) != LogVal::zero() {
        return Err(Error::Precondition("localizing section must have spec_val 0".into()));
    }
    let vf: Vec<Rat> = s
        .points
        .iter()
        .map(|z| point_val(z, f).into_finite().expect("f is nonzero"))
        .collect();
    let vb: Vec<LogVal> = s.points.iter().map(|z| point_val(z, b)).collect();
    let value = (0..s.len())
        .filter(|&a| vf[a].is_zero())
        .map(|a| vb[a].clone())
        .min()
        .expect("some point attains spec_val");
    let mut n_star = 0u64;
    if let LogVal::Finite(l) = &value {
        for a in 0..s.len() {
            if vf[a].is_positive() {
                let vba = vb[a].finite().expect("b is nonzero");
                let need = ((l - vba) / &vf[a]).ceil().to_integer();
                if let Ok(k) = u64::try_from(need) {
                    n_star = n_star.max(k);
                }
            }
        }
    }
    Ok(Localized { value, n_star })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricDistance {
    pub d_inf: Rat,
    pub d_1: Rat,
    /// False when `d_1` is a lattice estimate (`d >= 3`).
    pub d_1_exact: bool,
}

/// Level at which `d_1` is estimated by a lattice sum for `d >= 3`.
pub const D1_ESTIMATE_LEVEL: usize = 12;

/// `max_u (g_1 - g_2)(u)` on the simplex.
fn max_gap(h1: &[Vec<Rat>], h2: &[Vec<Rat>]) -> Result<Rat> {
    let nv = h1[0].len();
    let mut best: Option<Rat> = None;
    for hj in h2 {
        // max t, t <= <h1_i - h2_j, u>
        let mut obj = vec![Rat::zero(); nv + 1];
        obj[nv] = Rat::one();
        let mut lp = Lp::maximize(obj);
        lp.set_free(nv);
        let mut row = vec![Rat::one(); nv + 1];
        row[nv] = Rat::zero();
        lp.add(row, Cmp::Eq, Rat::one());
        for hi in h1 {
            let mut row: Vec<Rat> = hi.iter().zip(hj).map(|(x, y)| x - y).collect();
            row.push(-Rat::one());
            lp.add(row, Cmp::Ge, Rat::zero());
        }
        let (v, _) = lp.solve().optimal()?;
        best = Some(match best {
            Some(b) if b >= v => b,
            _ => v,
        });
    }
    Ok(best.expect("nonempty"))
}

pub fn metric_distance(s1: &MetricSpec, s2: &MetricSpec) -> Result<MetricDistance> {
    if s1.d != s2.d {
        return Err(Error::DimensionMismatch {
            expected: s1.d,
            found: s2.d,
        });
    }
    let (h1, h2) = (s1.hs(), s2.hs());
    let up = max_gap(&h1, &h2)?;
    let down = max_gap(&h2, &h1)?;
    let d_inf = if up >= down { up } else { down };
    let (d_1, d_1_exact) = if s1.d <= 2 {
        let diff = cells::integral_of_min(&h1)? - cells::integral_of_min(&h2)?;
        (diff.abs(), true)
    } else {
        (d1_lattice(s1, s2, D1_ESTIMATE_LEVEL), false)
    };
    Ok(MetricDistance { d_inf, d_1, d_1_exact })
}

/// `|sum_alpha (rho1 - rho2)| / (n chi(n))` at level `n`.
pub fn d1_lattice(s1: &MetricSpec, s2: &MetricSpec, n: usize) -> Rat {
    let mut acc = Rat::zero();
    for alpha in monomials(s1.d, n) {
        acc += s1.monomial_val(&alpha) - s2.monomial_val(&alpha);
    }
    acc.abs() / int((n * hilbert(s1.d, n)) as i64)
}
