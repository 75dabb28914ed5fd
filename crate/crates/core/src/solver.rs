//! Shifts realizing a prescribed equidistribution measure.
//!
//! For fixed weights `w_i`, the cell volumes `V(c)` are the gradient of the
//! concave functional `F(c) = int min_i (<w_i, u> + c_i) du - sum lambda_i c_i`,
//! so a maximizer of `F` solves `V(c) = lambda`. It is found by damped
//! Newton steps with an exact acceptance test on every iterate.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{from_f64, int, serde_rat, to_f64, Rat};
use crate::cells;
use crate::error::{Error, Result};

pub use crate::metrics::peak_system;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveProblem {
    pub d: usize,
    /// Weight vectors; their shifts are the unknowns.
    pub points: Vec<WeightVec>,
    #[serde(with = "serde_rat::vec")]
    pub target: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVec(#[serde(with = "serde_rat::vec")] pub Vec<Rat>);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    /// Shifts, normalized so that `c_0 = 0`.
    #[serde(with = "serde_rat::vec")]
    pub c: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub volumes: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub residual_exact: Rat,
    pub residual: f64,
    pub dropped: Vec<usize>,
    pub iterations: usize,
    /// `F` at every accepted iterate of the face problem.
    #[serde(skip)]
    pub trace: Vec<Rat>,
}

impl SolveResult {
    pub fn c_f64(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iter: 20_000,
        }
    }
}

fn vertex_values(ws: &[Vec<Rat>], c: &[Rat]) -> Vec<Vec<Rat>> {
    ws.iter()
        .zip(c)
        .map(|(w, c)| w.iter().map(|x| x + c).collect())
        .collect()
}

/// Normalized volumes of the argmin cells of `<w_i, u> + c_i`.
pub fn cell_volumes(ws: &[Vec<Rat>], c: &[Rat]) -> Result<Vec<Rat>> {
    if ws.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: ws.len(),
            found: c.len(),
        });
    }
    cells::cell_volumes(&vertex_values(ws, c))
}

/// `F(c)`, exactly.
pub fn functional(ws: &[Vec<Rat>], c: &[Rat], target: &[Rat]) -> Result<Rat> {
    let integral = cells::integral_of_min(&vertex_values(ws, c))?;
    Ok(c.iter().zip(target).fold(integral, |acc, (c, l)| acc - c * l))
}

/// `w_i - w_j` is a multiple of `(1, ..., 1)`: one of the two always dominates.
fn parallel(a: &[Rat], b: &[Rat]) -> bool {
    let d0 = &a[0] - &b[0];
    a.iter().zip(b).all(|(x, y)| x - y == d0)
}

fn validate(p: &SolveProblem) -> Result<()> {
    if p.points.is_empty() {
        return Err(Error::invalid("no points"));
    }
    if p.d > 2 {
        return Err(Error::DimensionGuard {
            d: p.d,
            what: "solving",
        });
    }
    for w in &p.points {
        if w.0.len() != p.d + 1 {
            return Err(Error::DimensionMismatch {
                expected: p.d + 1,
                found: w.0.len(),
            });
        }
    }
    if p.target.len() != p.points.len() {
        return Err(Error::DimensionMismatch {
            expected: p.points.len(),
            found: p.target.len(),
        });
    }
    if p.target.iter().any(Signed::is_negative) {
        return Err(Error::invalid("target coefficients must be nonnegative"));
    }
    let total = p.target.iter().fold(Rat::zero(), |acc, x| acc + x);
    if total != int(1) {
        return Err(Error::invalid(format!("target coefficients sum to {total}, not 1")));
    }
    Ok(())
}

pub fn solve_prescribed(p: &SolveProblem, opts: &SolveOptions) -> Result<SolveResult> {
    validate(p)?;
    let ws: Vec<Vec<Rat>> = p.points.iter().map(|w| w.0.clone()).collect();
    let active: Vec<usize> = (0..ws.len()).filter(|&i| p.target[i].is_positive()).collect();
    let dropped: Vec<usize> = (0..ws.len()).filter(|&i| p.target[i].is_zero()).collect();
    for (k, &i) in active.iter().enumerate() {
        for &j in &active[..k] {
            if parallel(&ws[i], &ws[j]) {
                return Err(Error::DominatedTarget(i));
            }
        }
    }

    let face_ws: Vec<Vec<Rat>> = active.iter().map(|&i| ws[i].clone()).collect();
    let face_target: Vec<Rat> = active.iter().map(|&i| p.target[i].clone()).collect();
    let (face_c, iterations, trace) = ascend(&face_ws, &face_target, opts)?;

    // dropped points sit strictly above the first active one everywhere
    let k0 = active[0];
    let mut c = vec![Rat::zero(); ws.len()];
    for (k, &i) in active.iter().enumerate() {
        c[i] = face_c[k].clone();
    }
    for &i in &dropped {
        let gap = ws[k0]
            .iter()
            .zip(&ws[i])
            .map(|(a, b)| a - b)
            .max()
            .expect("nonempty weights");
        c[i] = &c[k0] + gap + int(1);
    }
    let c0 = c[0].clone();
    for x in c.iter_mut() {
        *x -= &c0;
    }

    let volumes = cell_volumes(&ws, &c)?;
    let residual_exact = volumes
        .iter()
        .zip(&p.target)
        .map(|(v, l)| (v - l).abs())
        .max()
        .expect("nonempty");
    let residual = to_f64(&residual_exact);
    if residual_exact > from_f64(opts.tol)? {
        return Err(Error::TargetUnreachable { residual, iterations });
    }
    Ok(SolveResult {
        c,
        volumes,
        residual_exact,
        residual,
        dropped,
        iterations,
        trace,
    })
}

/// Step for the difference quotients of the volume Jacobian. Volumes are
/// piecewise polynomial of degree `d` in `c`, so central differences are
/// exact away from combinatorial changes.
const JACOBIAN_STEP: f64 = 1e-7;

/// Newton direction `-J^{-1} g` on the gauge slice `delta_0 = 0`, where
/// `J = dV/dc`; `None` when `J` is singular there (an empty cell, say).
fn newton_direction(ws: &[Vec<Rat>], c: &[Rat], g: &[f64]) -> Result<Option<Vec<f64>>> {
    let m = c.len();
    let h = from_f64(JACOBIAN_STEP)?;
    let mut jac = vec![vec![0.0f64; m - 1]; m - 1];
    for k in 1..m {
        let mut up = c.to_vec();
        let mut dn = c.to_vec();
        up[k] += &h;
        dn[k] -= &h;
        let (vu, vd) = (cell_volumes(ws, &up)?, cell_volumes(ws, &dn)?);
        for i in 1..m {
            jac[i - 1][k - 1] = to_f64(&((&vu[i] - &vd[i]) / (&h * int(2))));
        }
    }
    let rhs: Vec<f64> = g[1..].iter().map(|x| -x).collect();
    Ok(solve_dense(jac, rhs).map(|x| std::iter::once(0.0).chain(x).collect()))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *x -= f * y;
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Damped Newton ascent on `F` over the face, `c_0` pinned to 0, falling
/// back to the gradient when the Jacobian is singular or its direction
/// admits no acceptable step.
fn ascend(ws: &[Vec<Rat>], target: &[Rat], opts: &SolveOptions) -> Result<(Vec<Rat>, usize, Vec<Rat>)> {
    let m = ws.len();
    let to_rat = |c: &[f64]| -> Result<Vec<Rat>> { c.iter().map(|&x| from_f64(x)).collect() };
    let tol = from_f64(opts.tol)?;
    let mut c = vec![0.0f64; m];
    if m == 1 {
        return Ok((vec![Rat::zero()], 0, Vec::new()));
    }
    let mut cr = to_rat(&c)?;
    let mut vols = cell_volumes(ws, &cr)?;
    let mut f = functional(ws, &cr, target)?;
    let mut trace = vec![f.clone()];
    let mut iterations = 0;
    loop {
        let grad: Vec<Rat> = vols.iter().zip(target).map(|(v, l)| v - l).collect();
        let residual = grad.iter().map(Signed::abs).max().expect("nonempty");
        if residual <= tol {
            return Ok((cr, iterations, trace));
        }
        let stuck = || Error::TargetUnreachable {
            residual: to_f64(&residual),
            iterations,
        };
        if iterations >= opts.max_iter {
            return Err(stuck());
        }
        let g: Vec<f64> = grad.iter().map(to_f64).collect();
        let mut directions = Vec::with_capacity(2);
        if let Some(dir) = newton_direction(ws, &cr, &g)? {
            directions.push(dir);
        }
        directions.push(g);
        let mut accepted = false;
        'search: for dir in &directions {
            let mut step = 1.0f64;
            while step >= 1e-20 {
                let mut trial: Vec<f64> = c.iter().zip(dir).map(|(x, d)| x + step * d).collect();
                let t0 = trial[0];
                for x in trial.iter_mut() {
                    *x -= t0;
                }
                let tr = to_rat(&trial)?;
                let tv = cell_volumes(ws, &tr)?;
                let emptied = vols.iter().zip(&tv).any(|(a, b)| a.is_positive() && b.is_zero());
                let tf = functional(ws, &tr, target)?;
                if !emptied && tf >= f && trial != c {
                    c = trial;
                    cr = tr;
                    vols = tv;
                    f = tf;
                    trace.push(f.clone());
                    accepted = true;
                    break 'search;
                }
                step /= 2.0;
            }
        }
        if !accepted {
            return Err(stuck());
        }
        iterations += 1;
    }
}
