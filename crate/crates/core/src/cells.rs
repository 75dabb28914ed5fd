//! Exact argmin cells of finitely many affine functions on the simplex
//! `Delta_d`, for `d <= 2`.
//!
//! An affine function is given by its values `h` at the `d + 1` vertices,
//! so `g(u) = <h, u>`. Points of the simplex are written in the reduced
//! coordinates `(u_1, ..., u_d)` with `u_0 = 1 - sum u_j`. Volumes and
//! integrals are normalized so the whole simplex has volume 1.

use num_traits::{Signed, Zero};

use crate::arith::{int, Rat};
use crate::error::{Error, Result};

/// `g(u) = <h, u>` in reduced coordinates: `(constant, linear part)`.
fn reduce(h: &[Rat]) -> (Rat, Vec<Rat>) {
    let lin = h[1..].iter().map(|x| x - &h[0]).collect();
    (h[0].clone(), lin)
}

fn eval(h: &[Rat], p: &[Rat]) -> Rat {
    let (k, lin) = reduce(h);
    lin.iter().zip(p).fold(k, |acc, (a, x)| acc + a * x)
}

fn guard(d: usize) -> Result<()> {
    if d == 0 || d > 2 {
        return Err(Error::DimensionGuard { d, what: "cell volume" });
    }
    Ok(())
}

fn check_widths(hs: &[Vec<Rat>]) -> Result<usize> {
    let n = hs
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::invalid("no affine functions"))?;
    if let Some(bad) = hs.iter().find(|h| h.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(n - 1)
}

/// A convex region of the simplex: an interval for `d = 1`, a polygon
/// (vertices in order) for `d = 2`. Empty regions have no vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub d: usize,
    pub vertices: Vec<Vec<Rat>>,
}

impl Region {
    pub fn simplex(d: usize) -> Result<Self> {
        guard(d)?;
        let mut vertices = vec![vec![int(0); d]];
        for j in 0..d {
            let mut v = vec![int(0); d];
            v[j] = int(1);
            vertices.push(v);
        }
        Ok(Region { d, vertices })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Intersects with `{p : k + <lin, p> >= 0}`.
    pub fn clip(&self, k: &Rat, lin: &[Rat]) -> Region {
        let f = |p: &[Rat]| lin.iter().zip(p).fold(k.clone(), |acc, (a, x)| acc + a * x);
        if self.d == 1 {
            if self.vertices.is_empty() {
                return self.clone();
            }
            let (mut lo, mut hi) = (self.vertices[0][0].clone(), self.vertices[1][0].clone());
            let a = &lin[0];
            if a.is_zero() {
                if k.is_negative() {
                    return Region { d: 1, vertices: vec![] };
                }
            } else {
                let root = -k / a;
                if a.is_positive() {
                    lo = lo.max(root);
                } else {
                    hi = hi.min(root);
                }
            }
            if lo > hi {
                return Region { d: 1, vertices: vec![] };
            }
            return Region {
                d: 1,
                vertices: vec![vec![lo], vec![hi]],
            };
        }
        let n = self.vertices.len();
        let mut out: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            let (fp, fq) = (f(p), f(q));
            if !fp.is_negative() {
                out.push(p.clone());
            }
            if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
                let s = &fp / (&fp - &fq);
                out.push(p.iter().zip(q).map(|(a, b)| a + (b - a) * &s).collect());
            }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        Region { d: 2, vertices: out }
    }

    /// Normalized volume: length for `d = 1`, twice the area for `d = 2`.
    pub fn volume(&self) -> Rat {
        self.integral(&vec![int(1); self.d + 1])
    }

    /// Normalized integral of `<h, u>` over the region.
    pub fn integral(&self, h: &[Rat]) -> Rat {
        if self.vertices.is_empty() {
            return int(0);
        }
        if self.d == 1 {
            let (a, b) = (&self.vertices[0][0], &self.vertices[1][0]);
            let mid = vec![(a + b) / int(2)];
            return (b - a) * eval(h, &mid);
        }
        // triangle fan from the first vertex; area * value at centroid
        let p0 = &self.vertices[0];
        let mut acc = int(0);
        for w in self.vertices[1..].windows(2) {
            let (p1, p2) = (&w[0], &w[1]);
            let cross = (&p1[0] - &p0[0]) * (&p2[1] - &p0[1]) - (&p1[1] - &p0[1]) * (&p2[0] - &p0[0]);
            let centroid: Vec<Rat> = (0..2).map(|j| (&p0[j] + &p1[j] + &p2[j]) / int(3)).collect();
            // normalized volume of a triangle is |cross| (twice its area)
            acc += cross * eval(h, &centroid);
        }
        // clipping keeps the counter-clockwise orientation of the simplex
        acc
    }
}

/// The closed argmin cell of function `a` among `hs`.
pub fn cell(hs: &[Vec<Rat>], a: usize) -> Result<Region> {
    let d = check_widths(hs)?;
    let mut region = Region::simplex(d)?;
    for (i, h) in hs.iter().enumerate() {
        if i == a {
            continue;
        }
        let diff: Vec<Rat> = h.iter().zip(&hs[a]).map(|(x, y)| x - y).collect();
        let (k, lin) = reduce(&diff);
        region = region.clip(&k, &lin);
        if region.is_empty() {
            break;
        }
    }
    Ok(region)
}

pub fn cell_volume(hs: &[Vec<Rat>], a: usize) -> Result<Rat> {
    Ok(cell(hs, a)?.volume())
}

pub fn cell_volumes(hs: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    (0..hs.len()).map(|a| cell_volume(hs, a)).collect()
}

/// Normalized integral of `min_i <h_i, u>` over the simplex.
pub fn integral_of_min(hs: &[Vec<Rat>]) -> Result<Rat> {
    check_widths(hs)?;
    let mut acc = int(0);
    for a in 0..hs.len() {
        // identical functions share one cell
        if hs[..a].contains(&hs[a]) {
            continue;
        }
        acc += cell(hs, a)?.integral(&hs[a]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn hv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn two_cells_on_the_segment() {
        let hs = vec![hv(&[0, 1]), hv(&[1, 0])];
        assert_eq!(cell_volumes(&hs).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        // int_0^1 min(u, 1 - u) = 1/4
        assert_eq!(integral_of_min(&hs).unwrap(), rat(1, 4));
    }

    #[test]
    fn shifted_boundary() {
        // u vs 1 - u + 1/2: boundary at u = 3/4
        let hs = vec![vec![int(0), int(1)], vec![rat(3, 2), rat(1, 2)]];
        assert_eq!(cell_volumes(&hs).unwrap(), vec![rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn dominated_cells_are_empty() {
        let hs = vec![hv(&[0, 1]), hv(&[1, 0]), hv(&[0, 0])];
        assert_eq!(cell_volumes(&hs).unwrap(), vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn triangle_volumes() {
        let hs = vec![hv(&[1, 0, 0]), hv(&[0, 1, 0]), hv(&[0, 0, 1])];
        let v = cell_volumes(&hs).unwrap();
        assert_eq!(v, vec![rat(1, 3); 3]);
        assert_eq!(Region::simplex(2).unwrap().volume(), int(1));
        // int of u_1 over the triangle, normalized: 1/3
        assert_eq!(Region::simplex(2).unwrap().integral(&hv(&[0, 1, 0])), rat(1, 3));
    }

    #[test]
    fn higher_dimensions_are_guarded() {
        let hs = vec![hv(&[0, 0, 0, 1])];
        assert!(matches!(cell_volumes(&hs), Err(Error::DimensionGuard { d: 3, .. })));
    }
}
