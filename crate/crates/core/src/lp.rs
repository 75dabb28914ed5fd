//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are stated as `maximize c.x` subject to linear rows with
//! `<=`, `>=` or `=`; variables are nonnegative unless declared free, in
//! which case they are split into a difference of two nonnegative ones.

use num_traits::{Signed, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<Rat>,
    pub cmp: Cmp,
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub struct Lp {
    nvars: usize,
    objective: Vec<Rat>,
    rows: Vec<Row>,
    free: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl Outcome {
    /// The optimum, treating infeasible and unbounded problems as errors.
    pub fn optimal(self) -> Result<(Rat, Vec<Rat>)> {
        match self {
            Outcome::Optimal { value, x } => Ok((value, x)),
            Outcome::Infeasible => Err(Error::Lp("infeasible")),
            Outcome::Unbounded => Err(Error::Lp("unbounded")),
        }
    }
}

impl Lp {
    /// `maximize objective.x`, all variables nonnegative.
    pub fn maximize(objective: Vec<Rat>) -> Self {
        let nvars = objective.len();
        Lp {
            nvars,
            objective,
            rows: Vec::new(),
            free: vec![false; nvars],
        }
    }

    pub fn minimize(objective: Vec<Rat>) -> Self {
        Self::maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars, "row width");
        self.rows.push(Row { coeffs, cmp, rhs });
        self
    }

    /// Solves the problem. For `minimize` problems the reported value is
    /// the maximum of the negated objective.
    pub fn solve(&self) -> Outcome {
        // column map: original var -> (plus column, optional minus column)
        let mut cols = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for j in 0..self.nvars {
            if self.free[j] {
                cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                cols.push((ncols, None));
                ncols += 1;
            }
        }
        let n_struct = ncols;
        let m = self.rows.len();

        // slack/surplus columns, then artificials
        let mut rows: Vec<(Vec<Rat>, Cmp, Rat)> = Vec::with_capacity(m);
        for r in &self.rows {
            let mut a = vec![Rat::zero(); n_struct];
            for (j, c) in r.coeffs.iter().enumerate() {
                let (p, q) = cols[j];
                a[p] = c.clone();
                if let Some(q) = q {
                    a[q] = -c;
                }
            }
            let (mut cmp, mut rhs) = (r.cmp, r.rhs.clone());
            if rhs.is_negative() {
                for x in a.iter_mut() {
                    *x = -&*x;
                }
                rhs = -rhs;
                cmp = match cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
            rows.push((a, cmp, rhs));
        }
        let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let width = n_struct + n_slack + n_art;
        let art_start = n_struct + n_slack;

        let mut t = Tableau {
            a: Vec::with_capacity(m),
            rhs: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            obj: vec![Rat::zero(); width],
            obj_rhs: Rat::zero(),
            allowed: vec![true; width],
        };
        let (mut s, mut art) = (n_struct, art_start);
        for (coeffs, cmp, rhs) in rows {
            let mut row = coeffs;
            row.resize(width, Rat::zero());
            match cmp {
                Cmp::Le => {
                    row[s] = Rat::from_integer(1.into());
                    t.basis.push(s);
                    s += 1;
                }
                Cmp::Ge => {
                    row[s] = Rat::from_integer((-1).into());
                    row[art] = Rat::from_integer(1.into());
                    t.basis.push(art);
                    s += 1;
                    art += 1;
                }
                Cmp::Eq => {
                    row[art] = Rat::from_integer(1.into());
                    t.basis.push(art);
                    art += 1;
                }
            }
            t.a.push(row);
            t.rhs.push(rhs);
        }

        // phase 1: maximize -sum(artificials)
        if n_art > 0 {
            for j in art_start..width {
                t.obj[j] = Rat::from_integer(1.into());
            }
            for i in 0..m {
                if t.basis[i] >= art_start {
                    for j in 0..width {
                        t.obj[j] = &t.obj[j] - &t.a[i][j];
                    }
                    t.obj_rhs = &t.obj_rhs - &t.rhs[i];
                }
            }
            if !t.run() {
                unreachable!("phase 1 is bounded");
            }
            if t.obj_rhs.is_negative() {
                return Outcome::Infeasible;
            }
            // drive remaining zero-level artificials out of the basis
            let mut i = 0;
            while i < t.a.len() {
                if t.basis[i] >= art_start {
                    match (0..art_start).find(|&j| !t.a[i][j].is_zero()) {
                        Some(j) => {
                            t.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            t.a.remove(i);
                            t.rhs.remove(i);
                            t.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
            for j in art_start..width {
                t.allowed[j] = false;
            }
        }

        // phase 2
        let mut c = vec![Rat::zero(); width];
        for (j, cj) in self.objective.iter().enumerate() {
            let (p, q) = cols[j];
            c[p] = cj.clone();
            if let Some(q) = q {
                c[q] = -cj;
            }
        }
        t.obj = c.iter().map(|x| -x).collect();
        t.obj_rhs = Rat::zero();
        for i in 0..t.a.len() {
            let cb = &c[t.basis[i]];
            if !cb.is_zero() {
                for j in 0..width {
                    t.obj[j] = &t.obj[j] + cb * &t.a[i][j];
                }
                t.obj_rhs = &t.obj_rhs + cb * &t.rhs[i];
            }
        }
        if !t.run() {
            return Outcome::Unbounded;
        }

        let mut xs = vec![Rat::zero(); width];
        for (i, &b) in t.basis.iter().enumerate() {
            xs[b] = t.rhs[i].clone();
        }
        let x = cols
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => &xs[p] - &xs[q],
                None => xs[p].clone(),
            })
            .collect();
        Outcome::Optimal { value: t.obj_rhs, x }
    }
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    /// Reduced costs in `z - c.x` form: negative entries improve.
    obj: Vec<Rat>,
    obj_rhs: Rat,
    allowed: Vec<bool>,
}

impl Tableau {
    /// Pivots to optimality; false if unbounded.
    fn run(&mut self) -> bool {
        loop {
            let entering = (0..self.obj.len()).find(|&j| self.allowed[j] && self.obj[j].is_negative());
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if self.a[i][j].is_positive() {
                    let ratio = &self.rhs[i] / &self.a[i][j];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for x in self.a[r].iter_mut() {
            *x = &*x / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let prow = self.a[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (x, y) in self.a[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
            self.rhs[i] = &self.rhs[i] - &f * &prhs;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, y) in self.obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
            self.obj_rhs = &self.obj_rhs - &f * &prhs;
        }
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = Lp::maximize(vec![int(3), int(5)]);
        lp.add(vec![int(1), int(0)], Cmp::Le, int(4))
            .add(vec![int(0), int(2)], Cmp::Le, int(12))
            .add(vec![int(3), int(2)], Cmp::Le, int(18));
        let (v, x) = lp.solve().optimal().unwrap();
        assert_eq!(v, int(36));
        assert_eq!(x, vec![int(2), int(6)]);
    }

    #[test]
    fn equality_and_free_variables() {
        // max t s.t. t <= u, t <= 1 - u, u free in [0,1] via equality slack
        let mut lp = Lp::maximize(vec![int(0), int(1)]);
        lp.set_free(1);
        lp.add(vec![int(-1), int(1)], Cmp::Le, int(0))
            .add(vec![int(1), int(1)], Cmp::Le, int(1));
        let (v, x) = lp.solve().optimal().unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);

        let mut lp = Lp::minimize(vec![int(1)]);
        lp.set_free(0);
        lp.add(vec![int(1)], Cmp::Ge, int(-3));
        assert_eq!(lp.solve().optimal().unwrap().0, int(3));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::maximize(vec![int(1)]);
        lp.add(vec![int(1)], Cmp::Ge, int(2)).add(vec![int(1)], Cmp::Le, int(1));
        assert_eq!(lp.solve(), Outcome::Infeasible);

        let mut lp = Lp::maximize(vec![int(1), int(0)]);
        lp.add(vec![int(1), int(-1)], Cmp::Le, int(1));
        assert_eq!(lp.solve(), Outcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::maximize(vec![int(1), int(1)]);
        lp.add(vec![int(1), int(1)], Cmp::Eq, int(1))
            .add(vec![int(2), int(2)], Cmp::Eq, int(2));
        assert_eq!(lp.solve().optimal().unwrap().0, int(1));
    }
}
