//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{RatVector, Rational};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<Vec<Rational>>,
    ncols: usize,
}

impl RatMatrix {
    pub fn from_rows(rows: &[RatVector], ncols: usize) -> Self {
        RatMatrix {
            rows: rows.iter().map(|r| r.entries().to_vec()).collect(),
            ncols,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVector], nrows: usize) -> Self {
        let rows = (0..nrows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        RatMatrix {
            rows,
            ncols: cols.len(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| RatVector::unit(n, i)).collect::<Vec<_>>();
        Self::from_rows(&rows, n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> RatVector {
        RatVector::new(self.rows[i].clone())
    }

    pub fn column(&self, j: usize) -> RatVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v.iter())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter()
                            .enumerate()
                            .fold(Rational::zero(), |acc, (k, a)| acc + a * &other.rows[k][j])
                    })
                    .collect()
            })
            .collect();
        RatMatrix {
            rows,
            ncols: other.ncols,
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let cols = (0..self.ncols).map(|j| self.column(j)).collect::<Vec<_>>();
        RatMatrix::from_rows(&cols, self.nrows())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            RatMatrix {
                rows: m,
                ncols: self.ncols,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.rows[i][f].clone();
                }
                RatVector::new(v)
            })
            .collect()
    }

    /// Some solution of `M x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &RatVector) -> Option<RatVector> {
        let mut aug = self.rows.clone();
        for (row, bi) in aug.iter_mut().zip(b.iter()) {
            row.push(bi.clone());
        }
        let aug = RatMatrix {
            rows: aug,
            ncols: self.ncols + 1,
        };
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.rows[i][self.ncols].clone();
        }
        Some(RatVector::new(x))
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let mut aug = self.rows.clone();
        for (i, row) in aug.iter_mut().enumerate() {
            row.extend(RatVector::unit(n, i).into_entries());
        }
        let (r, pivots) = RatMatrix {
            rows: aug,
            ncols: 2 * n,
        }
        .rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(RatMatrix {
            rows: r.rows.into_iter().map(|row| row[n..].to_vec()).collect(),
            ncols: n,
        })
    }
}

pub fn rank_of(vectors: &[RatVector], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(vectors, dim).rank()
}

/// Indices of a maximal linearly independent prefix-greedy subset.
pub fn independent_subset(vectors: &[RatVector], dim: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<RatVector> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank_of(&basis, dim) == basis.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        } else {
            basis.pop();
        }
    }
    chosen
}
