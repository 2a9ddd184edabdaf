//! Dense two-phase simplex over an exact scalar type.
//!
//! Sized for the certificate work in this crate: a few dozen variables and
//! constraints, all arithmetic exact, Bland's rule throughout so the solver
//! terminates on degenerate inputs. Variables are nonnegative; callers
//! encode sign flips and free variables themselves.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub rel: Rel,
    pub rhs: S,
}

/// `maximize c . x` subject to the constraints, `x >= 0`.
#[derive(Clone, Debug)]
pub struct Program<S> {
    pub maximize: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<S> {
    Optimal {
        x: Vec<S>,
        value: S,
    },
    /// Feasible direction with positive objective: `x >= 0`, `A x (<=,=,>=) 0`
    /// componentwise as appropriate, `c . ray > 0`.
    Unbounded {
        ray: Vec<S>,
    },
    Infeasible,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    obj: Vec<S>,
    basis: Vec<usize>,
    banned: Vec<bool>,
}

impl<S: Scalar> Tableau<S> {
    fn ncols(&self) -> usize {
        self.obj.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let lead = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / lead;
        for r2 in 0..self.rows.len() {
            if r2 == r || self.rows[r2][c].is_zero() {
                continue;
            }
            let factor = self.rows[r2][c].clone();
            for j in 0..self.ncols() {
                let delta = factor.clone() * self.rows[r][j].clone();
                self.rows[r2][j] = self.rows[r2][j].clone() - delta;
            }
            let delta = factor * self.rhs[r].clone();
            self.rhs[r2] = self.rhs[r2].clone() - delta;
        }
        if !self.obj[c].is_zero() {
            let factor = self.obj[c].clone();
            for j in 0..self.ncols() {
                let delta = factor.clone() * self.rows[r][j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
        }
        self.basis[r] = c;
    }

    /// Zeroes the reduced costs of basic columns.
    fn price_out(&mut self) {
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !self.obj[b].is_zero() {
                let factor = self.obj[b].clone();
                for j in 0..self.ncols() {
                    let delta = factor.clone() * self.rows[r][j].clone();
                    self.obj[j] = self.obj[j].clone() - delta;
                }
            }
        }
    }

    /// Bland's rule: smallest improving column, ratio ties broken by the
    /// smallest basic variable index. Returns the unbounded column if the
    /// ratio test fails.
    fn run(&mut self) -> Option<usize> {
        loop {
            let entering = (0..self.ncols()).find(|&c| !self.banned[c] && self.obj[c] > S::zero());
            let Some(c) = entering else {
                return None;
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][c] > S::zero() {
                    let better = match leave {
                        None => true,
                        Some(cur) => {
                            let lhs = self.rhs[r].clone() * self.rows[cur][c].clone();
                            let rhs = self.rhs[cur].clone() * self.rows[r][c].clone();
                            lhs < rhs || (lhs == rhs && self.basis[r] < self.basis[cur])
                        }
                    };
                    if better {
                        leave = Some(r);
                    }
                }
            }
            match leave {
                Some(r) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }
}

/// Solves the program exactly.
pub fn solve<S: Scalar>(program: &Program<S>) -> Outcome<S> {
    let nv = program.maximize.len();
    let m = program.constraints.len();
    // Normalize right-hand sides to be nonnegative.
    let mut norm: Vec<(Vec<S>, Rel, S)> = Vec::with_capacity(m);
    for c in &program.constraints {
        assert_eq!(
            c.coeffs.len(),
            nv,
            "constraint arity matches variable count"
        );
        if c.rhs < S::zero() {
            let coeffs = c.coeffs.iter().map(|v| -v.clone()).collect();
            let rel = match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Eq => Rel::Eq,
                Rel::Ge => Rel::Le,
            };
            norm.push((coeffs, rel, -c.rhs.clone()));
        } else {
            norm.push((c.coeffs.clone(), c.rel, c.rhs.clone()));
        }
    }
    let n_slack = norm.iter().filter(|(_, rel, _)| *rel != Rel::Eq).count();
    let n_art = norm.iter().filter(|(_, rel, _)| *rel != Rel::Le).count();
    let ncols = nv + n_slack + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificials = Vec::new();
    let mut slack_at = nv;
    let mut art_at = nv + n_slack;
    for (coeffs, rel, b) in &norm {
        let mut row = vec![S::zero(); ncols];
        row[..nv].clone_from_slice(coeffs);
        match rel {
            Rel::Le => {
                row[slack_at] = S::one();
                basis.push(slack_at);
                slack_at += 1;
            }
            Rel::Ge => {
                row[slack_at] = -S::one();
                slack_at += 1;
                row[art_at] = S::one();
                basis.push(art_at);
                artificials.push(art_at);
                art_at += 1;
            }
            Rel::Eq => {
                row[art_at] = S::one();
                basis.push(art_at);
                artificials.push(art_at);
                art_at += 1;
            }
        }
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut t = Tableau {
        rows,
        rhs,
        obj: vec![S::zero(); ncols],
        basis,
        banned: vec![false; ncols],
    };

    if !artificials.is_empty() {
        for &a in &artificials {
            t.obj[a] = -S::one();
        }
        t.price_out();
        let unbounded = t.run();
        debug_assert!(unbounded.is_none(), "phase one is bounded above by zero");
        let infeasibility = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(b, _)| artificials.contains(b))
            .fold(S::zero(), |acc, (_, v)| acc + v.clone());
        if !infeasibility.is_zero() {
            return Outcome::Infeasible;
        }
        // Drive artificials out of the basis; rows that cannot pivot are
        // redundant and get dropped.
        let mut r = 0;
        while r < t.rows.len() {
            if artificials.contains(&t.basis[r]) {
                let col = (0..nv + n_slack).find(|&c| !t.rows[r][c].is_zero());
                match col {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for &a in &artificials {
            t.banned[a] = true;
        }
    }

    t.obj = vec![S::zero(); ncols];
    t.obj[..nv].clone_from_slice(&program.maximize);
    t.price_out();
    match t.run() {
        None => {
            let mut x = vec![S::zero(); nv];
            for (r, &b) in t.basis.iter().enumerate() {
                if b < nv {
                    x[b] = t.rhs[r].clone();
                }
            }
            let value = program
                .maximize
                .iter()
                .zip(&x)
                .fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
            Outcome::Optimal { x, value }
        }
        Some(col) => {
            let mut ray = vec![S::zero(); ncols];
            ray[col] = S::one();
            for (r, &b) in t.basis.iter().enumerate() {
                ray[b] = -t.rows[r][col].clone();
            }
            Outcome::Unbounded {
                ray: ray[..nv].to_vec(),
            }
        }
    }
}
