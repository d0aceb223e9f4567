//! Exact linear programming and vertex enumeration over H-polytopes.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::cone::extreme_rays_with_equalities;
use crate::error::{Error, Result};
use crate::linalg::rank_of;
use crate::rational::{RatVector, Rational};

/// `{x : aᵢ·x ≥ bᵢ, cⱼ·x = dⱼ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub inequalities: Vec<(RatVector, Rational)>,
    pub equalities: Vec<(RatVector, Rational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: RatVector,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn with_inequality(mut self, normal: RatVector, offset: Rational) -> Self {
        self.push_inequality(normal, offset);
        self
    }

    pub fn with_equality(mut self, normal: RatVector, offset: Rational) -> Self {
        self.push_equality(normal, offset);
        self
    }

    pub fn push_inequality(&mut self, normal: RatVector, offset: Rational) {
        debug_assert_eq!(normal.dim(), self.dim);
        self.inequalities.push((normal, offset));
    }

    pub fn push_equality(&mut self, normal: RatVector, offset: Rational) {
        debug_assert_eq!(normal.dim(), self.dim);
        self.equalities.push((normal, offset));
    }

    /// Axis-aligned box `lo ≤ xᵢ ≤ hi`.
    pub fn unit_box(dim: usize, lo: Rational, hi: Rational) -> Self {
        let mut p = HPolytope::new(dim);
        for i in 0..dim {
            let e = RatVector::unit(dim, i);
            p.push_inequality(-&e, -hi.clone());
            p.push_inequality(e, lo.clone());
        }
        p
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        self.inequalities.iter().all(|(a, b)| &a.dot(x) >= b)
            && self.equalities.iter().all(|(a, b)| &a.dot(x) == b)
    }

    /// Rank of the constraint normals active at `x`.
    pub fn active_rank(&self, x: &RatVector) -> usize {
        let active: Vec<RatVector> = self
            .inequalities
            .iter()
            .filter(|(a, b)| &a.dot(x) == b)
            .chain(self.equalities.iter())
            .map(|(a, _)| a.clone())
            .collect();
        rank_of(&active, self.dim)
    }
}

/// Exact two-phase simplex with Bland's rule.
pub fn lp_solve(objective: &RatVector, p: &HPolytope, sense: Sense) -> Result<LpSolution> {
    if objective.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            got: objective.dim(),
        });
    }
    let c = match sense {
        Sense::Maximize => objective.clone(),
        Sense::Minimize => -objective,
    };
    let point = Simplex::build(p).solve(&c)?;
    Ok(LpSolution {
        value: objective.dot(&point),
        point,
    })
}

/// Some feasible point, or `Infeasible`.
pub fn feasible_point(p: &HPolytope) -> Result<RatVector> {
    let mut s = Simplex::build(p);
    s.phase_one()?;
    Ok(s.extract())
}

/// All vertices of a bounded polytope, sorted and without duplicates.
pub fn polytope_vertices(p: &HPolytope) -> Result<Vec<RatVector>> {
    feasible_point(p)?;
    let n = p.dim;
    let homog = |a: &RatVector, b: &Rational| {
        let mut v = a.clone().into_entries();
        v.push(-b.clone());
        RatVector::new(v)
    };
    let mut ineq: Vec<RatVector> = p.inequalities.iter().map(|(a, b)| homog(a, b)).collect();
    ineq.push(RatVector::unit(n + 1, n));
    let eq: Vec<RatVector> = p.equalities.iter().map(|(a, b)| homog(a, b)).collect();
    let rays = match extreme_rays_with_equalities(n + 1, &ineq, &eq) {
        Ok(r) => r,
        Err(Error::NotPointed) => return Err(Error::Unbounded),
        Err(e) => return Err(e),
    };
    let mut out = BTreeSet::new();
    for r in rays {
        let t = r[n].clone();
        if t.is_zero() {
            return Err(Error::Unbounded);
        }
        out.insert(r.slice(0..n).scale(&t.recip()));
    }
    Ok(out.into_iter().collect())
}

/// Dense tableau in standard form. Columns: x⁺, x⁻, slacks, artificials.
struct Simplex {
    n: usize,
    n_struct: usize,
    n_total: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Simplex {
    fn build(p: &HPolytope) -> Simplex {
        let n = p.dim;
        let m_ineq = p.inequalities.len();
        let m = m_ineq + p.equalities.len();
        let n_struct = 2 * n + m_ineq;
        let n_total = n_struct + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let constraints = p
            .inequalities
            .iter()
            .map(|c| (c, true))
            .chain(p.equalities.iter().map(|c| (c, false)));
        for (i, ((a, b), is_ineq)) in constraints.enumerate() {
            let mut row = vec![Rational::zero(); n_total];
            for j in 0..n {
                row[j] = a[j].clone();
                row[n + j] = -a[j].clone();
            }
            if is_ineq {
                row[2 * n + i] = -Rational::one();
            }
            let mut b = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            row[n_struct + i] = Rational::one();
            rows.push(row);
            rhs.push(b);
        }
        Simplex {
            n,
            n_struct,
            n_total,
            rows,
            rhs,
            basis: (n_struct..n_total).collect(),
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.n_total {
                if !self.rows[r][j].is_zero() {
                    let d = &f * &self.rows[r][j];
                    self.rows[i][j] -= d;
                }
            }
            let d = &f * &self.rhs[r];
            self.rhs[i] -= d;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · z` over columns `< allowed`, starting from the current basis.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Result<()> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .fold(cost[j].clone(), |acc, (row, &b)| acc - &cost[b] * &row[j]);
                reduced.is_positive()
            });
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Err(Error::Unbounded),
            }
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        let mut cost = vec![Rational::zero(); self.n_total];
        for c in cost.iter_mut().skip(self.n_struct) {
            *c = -Rational::one();
        }
        self.optimize(&cost, self.n_total)?;
        if self
            .basis
            .iter()
            .zip(&self.rhs)
            .any(|(&b, v)| b >= self.n_struct && !v.is_zero())
        {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n_struct {
                match (0..self.n_struct).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn solve(mut self, c: &RatVector) -> Result<RatVector> {
        self.phase_one()?;
        let mut cost = vec![Rational::zero(); self.n_total];
        for j in 0..self.n {
            cost[j] = c[j].clone();
            cost[self.n + j] = -c[j].clone();
        }
        self.optimize(&cost, self.n_struct)?;
        Ok(self.extract())
    }

    fn extract(&self) -> RatVector {
        let mut x = vec![Rational::zero(); self.n];
        for (&b, v) in self.basis.iter().zip(&self.rhs) {
            if b < self.n {
                x[b] += v;
            } else if b < 2 * self.n {
                x[b - self.n] -= v;
            }
        }
        RatVector::new(x)
    }
}
