//! The graded section algebra of `O(1)` on `P^d`: homogeneous polynomials
//! in `d + 1` variables with Hahn series coefficients.
//!
//! All bases are indexed in graded-lex order: by degree, then
//! lexicographically with larger leading exponents first, so degree 2 in
//! two variables is `x0^2, x0 x1, x1^2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::hahn::HahnSeries;

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpVec(Vec<u32>);

impl ExpVec {
    pub fn new(exps: Vec<u32>) -> Self {
        ExpVec(exps)
    }

    pub fn zero(nvars: usize) -> Self {
        ExpVec(vec![0; nvars])
    }

    pub fn unit(nvars: usize, k: usize) -> Self {
        let mut v = vec![0; nvars];
        v[k] = 1;
        ExpVec(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{k}")?;
            } else {
                write!(f, "x{k}^{a}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// `C(n + d, d)`: the number of degree-`n` monomials in `d + 1` variables.
pub fn hilbert(d: usize, n: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (n as u128 + i) / i;
    }
    acc as usize
}

/// All exponent vectors of degree `n` in `d + 1` variables, graded-lex.
pub fn monomials(d: usize, n: usize) -> Vec<ExpVec> {
    fn rec(nvars: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        if nvars == 1 {
            prefix.push(n);
            out.push(ExpVec(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=n).rev() {
            prefix.push(a);
            rec(nvars - 1, n - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(hilbert(d, n));
    rec(d + 1, n as u32, &mut Vec::with_capacity(d + 1), &mut out);
    out
}

/// Monomial basis of one graded piece with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub d: usize,
    pub n: usize,
    exps: Vec<ExpVec>,
    index: HashMap<ExpVec, usize>,
}

impl MonomialBasis {
    pub fn new(d: usize, n: usize) -> Self {
        let exps = monomials(d, n);
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        MonomialBasis { d, n, exps, index }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[ExpVec] {
        &self.exps
    }

    pub fn index_of(&self, e: &ExpVec) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// A section of `O(n)`: a homogeneous polynomial of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<ExpVec, HahnSeries>,
}

impl HomPoly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Checks homogeneity and drops exact-zero coefficients.
    pub fn from_terms(
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (ExpVec, HahnSeries)>,
    ) -> Result<Self> {
        let mut out = HomPoly::zero(nvars, degree);
        for (e, c) in terms {
            if e.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.nvars(),
                });
            }
            if e.degree() as usize != degree {
                return Err(Error::invalid(format!(
                    "monomial {e} has degree {} in a degree-{degree} polynomial",
                    e.degree()
                )));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn monomial(coeff: HahnSeries, exp: ExpVec) -> Self {
        let nvars = exp.nvars();
        let degree = exp.degree() as usize;
        let mut out = HomPoly::zero(nvars, degree);
        out.add_term(exp, coeff);
        out
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        Self::monomial(HahnSeries::one(), ExpVec::unit(nvars, k))
    }

    pub fn constant(nvars: usize, c: HahnSeries) -> Self {
        Self::monomial(c, ExpVec::zero(nvars))
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        crate::text::parse_poly(text, nvars)
    }

    fn add_term(&mut self, e: ExpVec, c: HahnSeries) {
        let merged = match self.terms.remove(&e) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(e, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension `d = nvars - 1`.
    pub fn dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ExpVec, HahnSeries> {
        &self.terms
    }

    pub fn coeff(&self, e: &ExpVec) -> Option<&HahnSeries> {
        self.terms.get(e)
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::invalid("cannot add polynomials of different degrees"));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = self.clone();
        out.degree = degree;
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product in the graded algebra: degrees add.
    pub fn mul(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_compatible(other)?;
        let mut out = HomPoly::zero(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> HomPoly {
        let mut out = HomPoly::constant(self.nvars, HahnSeries::one());
        for _ in 0..k {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &HahnSeries) -> HomPoly {
        let mut out = HomPoly::zero(self.nvars, self.degree);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c));
        }
        out
    }

    /// Coefficients in the monomial basis of the polynomial's degree.
    pub fn coeff_vector(&self, basis: &MonomialBasis) -> Vec<HahnSeries> {
        basis
            .exps()
            .iter()
            .map(|e| self.terms.get(e).cloned().unwrap_or_default())
            .collect()
    }

    fn check_compatible(&self, other: &HomPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }
}

impl fmt::Display for HomPoly {
    /// `coef * x0^a0 x1^a1 + ...`; multi-term coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let is_const = e.degree() == 0;
            if c.is_one() && !is_const {
                write!(f, "{e}")?;
            } else if c.terms().len() == 1 && c.is_exact() {
                if is_const {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c} * {e}")?;
                }
            } else if is_const {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) * {e}")?;
            }
        }
        Ok(())
    }
}

/// Matrix of `f -> s f` from degree `n` to degree `n + deg s`, columns
/// indexed by the source monomial basis and rows by the target basis.
#[derive(Clone, Debug)]
pub struct MultOpMatrix {
    pub src: MonomialBasis,
    pub tgt: MonomialBasis,
    entries: BTreeMap<(usize, usize), HahnSeries>,
}

impl MultOpMatrix {
    pub fn rows(&self) -> usize {
        self.tgt.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), HahnSeries> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> HahnSeries {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn to_dense(&self) -> Vec<Vec<HahnSeries>> {
        let mut m = vec![vec![HahnSeries::zero(); self.cols()]; self.rows()];
        for ((r, c), v) in &self.entries {
            m[*r][*c] = v.clone();
        }
        m
    }

    /// Applies the matrix to a coefficient vector in the source basis.
    pub fn apply(&self, x: &[HahnSeries]) -> Vec<HahnSeries> {
        let mut y = vec![HahnSeries::zero(); self.rows()];
        for ((r, c), v) in &self.entries {
            y[*r] = y[*r].add(&v.mul(&x[*c]));
        }
        y
    }
}

/// The multiplication map `R_n -> R_{n+m}` by a nonzero section `s` of degree `m`.
pub fn mult_operator(s: &HomPoly, n: usize) -> Result<MultOpMatrix> {
    if s.is_zero() {
        return Err(Error::ZeroSection);
    }
    let d = s.dim();
    let src = MonomialBasis::new(d, n);
    let tgt = MonomialBasis::new(d, n + s.degree());
    let mut entries = BTreeMap::new();
    for (col, alpha) in src.exps().iter().enumerate() {
        for (beta, c) in s.terms() {
            let row = tgt
                .index_of(&alpha.add(beta))
                .expect("product of monomials lies in the target basis");
            entries.insert((row, col), c.clone());
        }
    }
    Ok(MultOpMatrix { src, tgt, entries })
}
