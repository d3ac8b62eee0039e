//! Bounding-box sweep over `nP` with exact half-space tests.
//!
//! The sweep fixes coordinates one at a time. At every level each constraint
//! is relaxed over the box of the coordinates not yet fixed, which yields an
//! exact integer interval for the current coordinate; on the last coordinate
//! the interval is counted without iterating it.

use rayon::prelude::*;

/// Constraints `a_f · x ≤ b_f`, one per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaces {
    normals: Vec<Vec<i64>>,
    offsets: Vec<i64>,
}

struct Sweep<'a> {
    normals: Vec<Vec<i128>>,
    rhs: Vec<i128>,
    lo: &'a [i128],
    hi: &'a [i128],
    /// `relax[k][f]`: least value of `Σ_{j ≥ k} a_fj x_j` over the box.
    relax: Vec<Vec<i128>>,
}

impl HalfSpaces {
    pub fn new(normals: Vec<Vec<i64>>, offsets: Vec<i64>) -> Self {
        assert_eq!(normals.len(), offsets.len());
        Self { normals, offsets }
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn contains(&self, x: &[i64], n: u64, interior_only: bool) -> bool {
        let slack = i128::from(interior_only);
        self.normals.iter().zip(&self.offsets).all(|(a, &b)| {
            let lhs: i128 = a.iter().zip(x).map(|(&a, &x)| i128::from(a) * i128::from(x)).sum();
            lhs <= i128::from(b) * i128::from(n) - slack
        })
    }

    /// Lattice points of `n·{a·x ≤ b}` inside the box `n·[lo, hi]`.
    pub fn count_dilation(&self, lo: &[i64], hi: &[i64], n: u64, interior_only: bool) -> u64 {
        let dim = lo.len();
        let n = i128::from(n);
        if dim == 0 {
            return u64::from(self.offsets.iter().all(|&b| i128::from(b) * n - i128::from(interior_only) >= 0));
        }
        let lo: Vec<i128> = lo.iter().map(|&x| i128::from(x) * n).collect();
        let hi: Vec<i128> = hi.iter().map(|&x| i128::from(x) * n).collect();
        let normals: Vec<Vec<i128>> = self
            .normals
            .iter()
            .map(|a| a.iter().map(|&x| i128::from(x)).collect())
            .collect();
        let rhs: Vec<i128> = self
            .offsets
            .iter()
            .map(|&b| i128::from(b) * n - i128::from(interior_only))
            .collect();

        let mut relax = vec![vec![0i128; normals.len()]; dim + 1];
        for k in (0..dim).rev() {
            for (f, a) in normals.iter().enumerate() {
                relax[k][f] = relax[k + 1][f] + (a[k] * lo[k]).min(a[k] * hi[k]);
            }
        }
        let sweep = Sweep { normals, rhs, lo: &lo, hi: &hi, relax };

        let partial = vec![0i128; sweep.normals.len()];
        let Some((first_lo, first_hi)) = sweep.interval(0, &partial) else {
            return 0;
        };
        if dim == 1 {
            return (first_hi - first_lo + 1) as u64;
        }
        // slabs along the first coordinate are independent
        (first_lo..=first_hi)
            .into_par_iter()
            .map(|x0| {
                let mut partial = partial.clone();
                sweep.fix(0, x0, &mut partial);
                sweep.descend(1, &mut partial)
            })
            .sum()
    }
}

impl Sweep<'_> {
    /// Feasible integer interval for coordinate `k` given the partial sums.
    fn interval(&self, k: usize, partial: &[i128]) -> Option<(i128, i128)> {
        let (mut lo, mut hi) = (self.lo[k], self.hi[k]);
        for (f, a) in self.normals.iter().enumerate() {
            let slack = self.rhs[f] - partial[f] - self.relax[k + 1][f];
            let c = a[k];
            if c > 0 {
                hi = hi.min(slack.div_euclid(c));
            } else if c < 0 {
                // c·x ≤ slack  ⇔  x ≥ ceil(slack / c)
                lo = lo.max(-(slack.div_euclid(-c)));
            } else if slack < 0 {
                return None;
            }
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }

    fn fix(&self, k: usize, x: i128, partial: &mut [i128]) {
        for (f, a) in self.normals.iter().enumerate() {
            partial[f] += a[k] * x;
        }
    }

    fn unfix(&self, k: usize, x: i128, partial: &mut [i128]) {
        for (f, a) in self.normals.iter().enumerate() {
            partial[f] -= a[k] * x;
        }
    }

    fn descend(&self, k: usize, partial: &mut [i128]) -> u64 {
        let Some((lo, hi)) = self.interval(k, partial) else {
            return 0;
        };
        if k + 1 == self.lo.len() {
            return (hi - lo + 1) as u64;
        }
        let mut total = 0;
        for x in lo..=hi {
            self.fix(k, x, partial);
            total += self.descend(k + 1, partial);
            self.unfix(k, x, partial);
        }
        total
    }
}

/// Lattice points of `n·conv{0, r_1, …, r_d}` for the rows `r_i` of a lower
/// triangular matrix with positive diagonal.
///
/// Coordinates are fixed from last to first. With `D = Π h_ii`, the scaled
/// barycentric coordinates `Λ_k = D·λ_k` of the fixed tail are integers and
/// determine the exact projection of the simplex, so no dead branches are
/// explored beyond it.
#[derive(Clone, Debug)]
pub struct TriangularSimplex {
    h: Vec<Vec<i128>>,
    det: i128,
}

impl TriangularSimplex {
    pub fn new(h: Vec<Vec<i128>>) -> Self {
        let d = h.len();
        for (i, row) in h.iter().enumerate() {
            assert_eq!(row.len(), d);
            assert!(row[i] > 0 && row[i + 1..].iter().all(|&x| x == 0), "not lower triangular");
        }
        let det = h.iter().enumerate().map(|(i, r)| r[i]).product();
        Self { h, det }
    }

    pub fn count_dilation(&self, n: u64, interior_only: bool) -> u64 {
        let d = self.h.len();
        if d == 0 {
            return u64::from(!interior_only || n > 0);
        }
        let budget = self.det * i128::from(n);
        let k = d - 1;
        let Some((lo, hi)) = self.interval(k, 0, 0, budget, interior_only) else {
            return 0;
        };
        (lo..=hi)
            .into_par_iter()
            .map(|x| {
                let mut lambdas = vec![0i128; d];
                lambdas[k] = (self.det * x) / self.h[k][k];
                self.descend(k, lambdas[k], &mut lambdas, budget, interior_only)
            })
            .sum()
    }

    /// Integer range of `x_k` given `C = Σ_{i>k} Λ_i h_ik` and `S = Σ_{i>k} Λ_i`.
    fn interval(&self, k: usize, c: i128, s: i128, budget: i128, interior: bool) -> Option<(i128, i128)> {
        let hk = self.h[k][k];
        let strict = i128::from(interior);
        // Λ_k = (D x_k - C) / h_kk with strict ≤ Λ_k ≤ budget - S - strict
        let room = budget - s - strict;
        if room < strict {
            return None;
        }
        let lo = (c + strict * hk).div_euclid(self.det) + i128::from((c + strict * hk).rem_euclid(self.det) != 0);
        let hi = (c + room * hk).div_euclid(self.det);
        (lo <= hi).then_some((lo, hi))
    }

    /// Counts completions of coordinates `0..k` once `x_k` (through `Λ_k`) is fixed.
    fn descend(&self, k: usize, lambda_k: i128, lambdas: &mut [i128], budget: i128, interior: bool) -> u64 {
        lambdas[k] = lambda_k;
        if k == 0 {
            return 1;
        }
        let j = k - 1;
        let (c, s) = (k..self.h.len()).fold((0, 0), |(c, s), i| (c + lambdas[i] * self.h[i][j], s + lambdas[i]));
        let Some((lo, hi)) = self.interval(j, c, s, budget, interior) else {
            return 0;
        };
        if j == 0 {
            return (hi - lo + 1) as u64;
        }
        let hj = self.h[j][j];
        (lo..=hi)
            .map(|x| self.descend(j, (self.det * x - c) / hj, lambdas, budget, interior))
            .sum()
    }
}
