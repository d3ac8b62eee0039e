//! Ehrhart δ-vectors.
//!
//! Two engines that share nothing beyond the vertex list:
//!
//! * [`delta_from_box`] enumerates the half-open fundamental parallelepiped of
//!   the cone over a simplex. The lattice points are the cosets of the column
//!   lattice of the homogenized vertex matrix inside its saturation, read off
//!   from a Smith normal form, so the cost is proportional to the volume.
//! * [`delta_from_counts`] counts lattice points of dilations by a
//!   bounding-box sweep and applies the `(1 - λ)^{d+1}` transform to the
//!   Ehrhart series (and its interior counterpart).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla;
use crate::polytope::{count_lattice_points, LatticePolytope, Simplex};

/// `(δ_0, …, δ_d)`; always `δ_0 = 1` and `δ_1 ≥ δ_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DeltaVector(Vec<u64>);

impl DeltaVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.first() != Some(&1) {
            return Err(Error::Domain(format!("δ_0 must be 1 in {entries:?}")));
        }
        let d = entries.len() - 1;
        if d >= 1 && entries[1] < entries[d] {
            return Err(Error::Domain(format!("δ_1 < δ_d in {entries:?}")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn volume(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `max{i : δ_i ≠ 0}`.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&x| x != 0).unwrap_or(0)
    }

    /// `min{i > 0 : δ_i ≠ 0}`, if any.
    pub fn first_positive(&self) -> Option<usize> {
        self.0.iter().skip(1).position(|&x| x != 0).map(|i| i + 1)
    }
}

impl std::ops::Index<usize> for DeltaVector {
    type Output = u64;

    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

/// Lattice point `Σ r_j (v_j, 1) = (point, degree)` of the fundamental box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPoint {
    pub point: Vec<i64>,
    pub degree: u64,
    pub coefficients: Vec<BigRational>,
}

impl BoxPoint {
    pub fn has_zero_coefficient(&self) -> bool {
        self.coefficients.iter().any(Zero::is_zero)
    }
}

/// Quotient-group data for one simplex: `r = frac(W·k / L)` over the mixed-radix range of `k`.
struct CosetTable {
    moduli: Vec<i128>,
    /// `weights[j][i] = V_ji · (L / d_i) mod L`, nontrivial `i` only.
    weights: Vec<Vec<i128>>,
    common: i128,
    matrix: Vec<Vec<i128>>,
}

impl CosetTable {
    fn new(s: &Simplex) -> Self {
        let a = s.homogenized_matrix();
        let snf = exactla::smith_normal_form(&a);
        let diag = snf.diagonal();
        assert!(diag.iter().all(|x| !x.is_zero()), "simplex has full column rank");
        let common = diag.iter().fold(BigInt::one(), |l, x| l.lcm(x));
        let nontrivial: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
        let weights = (0..a.cols())
            .map(|j| {
                nontrivial
                    .iter()
                    .map(|&i| {
                        let w = (&snf.v[(j, i)] * (&common / &diag[i])).mod_floor(&common);
                        w.to_i128().expect("reduced below the volume")
                    })
                    .collect()
            })
            .collect();
        let matrix = (0..a.rows())
            .map(|i| a.row(i).iter().map(|x| x.to_i128().expect("i64 input")).collect())
            .collect();
        Self {
            moduli: nontrivial.iter().map(|&i| diag[i].to_i128().expect("volume fits")).collect(),
            weights,
            common: common.to_i128().expect("volume fits"),
            matrix,
        }
    }

    fn volume(&self) -> u64 {
        self.moduli.iter().product::<i128>() as u64
    }

    /// Box point for coset number `index`; `dual` reduces into `(0, 1]` instead of `[0, 1)`.
    fn point(&self, mut index: u64, dual: bool) -> BoxPoint {
        let ks: Vec<i128> = self
            .moduli
            .iter()
            .map(|&m| {
                let k = index as i128 % m;
                index /= m as u64;
                k
            })
            .collect();
        let l = self.common;
        let nums: Vec<i128> = self
            .weights
            .iter()
            .map(|w| {
                let r = w.iter().zip(&ks).map(|(a, b)| a * b).sum::<i128>().rem_euclid(l);
                if dual && r == 0 {
                    l
                } else {
                    r
                }
            })
            .collect();
        let rows = self.matrix.len();
        let homog: Vec<i128> = self
            .matrix
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(&nums).map(|(a, n)| a * n).sum();
                debug_assert_eq!(s % l, 0, "coset representative is a lattice point");
                s / l
            })
            .collect();
        BoxPoint {
            point: homog[..rows - 1].iter().map(|&x| x as i64).collect(),
            degree: homog[rows - 1] as u64,
            coefficients: nums.iter().map(|&n| BigRational::new(n.into(), l.into())).collect(),
        }
    }

    fn all(&self, dual: bool) -> Vec<BoxPoint> {
        (0..self.volume()).into_par_iter().map(|i| self.point(i, dual)).collect()
    }

    fn degree_histogram(&self, dim: usize) -> Vec<u64> {
        (0..self.volume())
            .into_par_iter()
            .fold(
                || vec![0u64; dim + 2],
                |mut h, i| {
                    h[self.point(i, false).degree as usize] += 1;
                    h
                },
            )
            .reduce(
                || vec![0u64; dim + 2],
                |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
            )
    }
}

/// The set `S`: lattice points with all barycentric coefficients in `[0, 1)`.
pub fn box_points(s: &Simplex) -> Vec<BoxPoint> {
    CosetTable::new(s).all(false)
}

/// The set `S*`: lattice points with all barycentric coefficients in `(0, 1]`.
pub fn dual_box_points(s: &Simplex) -> Vec<BoxPoint> {
    CosetTable::new(s).all(true)
}

pub fn delta_from_box(s: &Simplex) -> DeltaVector {
    let d = s.dim();
    let mut hist = CosetTable::new(s).degree_histogram(d);
    debug_assert_eq!(hist[d + 1], 0, "box degrees never exceed d");
    hist.truncate(d + 1);
    DeltaVector::new(hist).expect("box enumeration yields a valid δ-vector")
}

fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * i128::from(n - i) / i128::from(i + 1))
}

/// `i(P, 0), …, i(P, n_max)`.
pub fn ehrhart_counts(p: &LatticePolytope, n_max: u64) -> Result<Vec<u64>> {
    (0..=n_max).map(|n| count_lattice_points(p, n, false)).collect()
}

/// `i*(P, 0), …, i*(P, n_max)` with `i*(P, 0) = 0`.
pub fn interior_counts(p: &LatticePolytope, n_max: u64) -> Result<Vec<u64>> {
    (0..=n_max)
        .map(|n| if n == 0 { Ok(0) } else { count_lattice_points(p, n, true) })
        .collect()
}

/// Which dilation counts feed the series transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountScheme {
    /// `δ_i = Σ_j (-1)^j C(d+1, j) i(P, i-j)` from `i(P, 0..=d)`.
    Closed,
    /// Lower half of `δ` from closed counts, upper half from interior counts
    /// through the reciprocal series; dilations only go up to `⌈d/2⌉`.
    Split,
}

fn transform(counts: &[u64], d: usize, upto: usize) -> Vec<i128> {
    (0..=upto)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let term = binomial(d as u64 + 1, j as u64) * i128::from(counts[i - j]);
                    if j % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

pub fn delta_from_counts(p: &LatticePolytope) -> Result<DeltaVector> {
    delta_from_counts_with(p, CountScheme::Split)
}

pub fn delta_from_counts_with(p: &LatticePolytope, scheme: CountScheme) -> Result<DeltaVector> {
    let d = p.dimension();
    if d != p.ambient_dim() {
        return Err(Error::Domain(format!(
            "counting transform needs a full-dimensional polytope (dim {d} in ambient {})",
            p.ambient_dim()
        )));
    }
    let raw: Vec<i128> = match scheme {
        CountScheme::Closed => transform(&ehrhart_counts(p, d as u64)?, d, d),
        CountScheme::Split => {
            let low = d / 2;
            let mut delta = transform(&ehrhart_counts(p, low as u64)?, d, low);
            // coefficient of λ^t in (1-λ)^{d+1} Σ i*(n) λ^n is δ_{d+1-t}
            let high = d - low;
            let dual = transform(&interior_counts(p, high as u64)?, d, high);
            delta.extend((1..=high).rev().map(|t| dual[t]));
            delta
        }
    };
    let entries = raw
        .iter()
        .map(|&x| {
            u64::try_from(x).map_err(|_| Error::EngineMismatch(format!("negative δ entry in {raw:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    DeltaVector::new(entries)
}

/// `Σ δ_i`: exact determinant route for simplices, counting transform otherwise.
pub fn normalized_volume(p: &LatticePolytope) -> Result<u64> {
    if p.vertices().len() == p.dimension() + 1 {
        let s = Simplex::new(p.clone())?;
        return s
            .normalized_volume()
            .to_u64()
            .ok_or_else(|| Error::Unsupported("volume overflows u64".into()));
    }
    Ok(delta_from_counts(p)?.volume())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeIdentityReport {
    pub max_nonzero_index: usize,
    pub first_interior_dilation: u64,
    pub holds: bool,
}

/// Checks `max{i : δ_i ≠ 0} = d + 1 - min{n : int(nP) ∩ Z^N ≠ ∅}` by direct interior counting.
pub fn degree_identity_check(s: &Simplex) -> Result<DegreeIdentityReport> {
    let delta = delta_from_box(s);
    let d = s.dim() as u64;
    let p = s.polytope();
    let mut first = None;
    // (d+1)P always contains Σ v_j in its interior
    for n in 1..=d + 1 {
        if count_lattice_points(p, n, true)? > 0 {
            first = Some(n);
            break;
        }
    }
    let first = first.expect("interior of (d+1)P is nonempty");
    let max_index = delta.degree();
    Ok(DegreeIdentityReport {
        max_nonzero_index: max_index,
        first_interior_dilation: first,
        holds: max_index as u64 + first == d + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn simplex(v: &[&[i64]]) -> Simplex {
        Simplex::from_vertices(v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn shifted(d: usize, e: i64) -> Simplex {
        let mut v = vec![vec![-e; d]];
        for i in 0..d {
            let mut x = vec![0; d];
            x[i] = 1;
            v.push(x);
        }
        Simplex::from_vertices(v).unwrap()
    }

    fn augmented(d: usize, e: i64) -> Simplex {
        let mut v = vec![vec![e; d]];
        for i in 0..d {
            let mut x = vec![0; d];
            x[i] = 1;
            v.push(x);
        }
        Simplex::from_vertices(v).unwrap()
    }

    fn circulant(d: usize, m: usize) -> Simplex {
        let mut v = vec![vec![0; d]];
        for i in 0..d {
            v.push((0..d).map(|j| i64::from((j + d - i) % d < m)).collect());
        }
        Simplex::from_vertices(v).unwrap()
    }

    fn dv(x: &[u64]) -> DeltaVector {
        DeltaVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn delta_vector_invariants_enforced() {
        assert!(DeltaVector::new(vec![2, 0]).is_err());
        assert!(DeltaVector::new(vec![1, 0, 2]).is_err());
        let d = dv(&[1, 0, 1, 1, 0]);
        assert_eq!(d.degree(), 3);
        assert_eq!(d.first_positive(), Some(2));
        assert_eq!(d.volume(), 3);
        assert_eq!(dv(&[1, 0, 0]).first_positive(), None);
    }

    #[test]
    fn box_points_of_unimodular_simplex() {
        let pts = box_points(&shifted(3, 0));
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point, vec![0, 0, 0]);
        assert_eq!(pts[0].degree, 0);
        let dual = dual_box_points(&shifted(3, 0));
        assert_eq!(dual.len(), 1);
        assert_eq!(dual[0].degree, 4);
        assert!(dual[0].coefficients.iter().all(One::is_one));
    }

    #[test]
    fn box_points_of_skew_triangle() {
        let s = simplex(&[&[0, 0], &[1, 0], &[1, 2]]);
        let mut pts: Vec<(Vec<i64>, u64)> = box_points(&s).into_iter().map(|b| (b.point, b.degree)).collect();
        pts.sort();
        assert_eq!(pts, vec![(vec![0, 0], 0), (vec![1, 1], 1)]);
        let mut dual: Vec<u64> = dual_box_points(&s).iter().map(|b| b.degree).collect();
        dual.sort();
        assert_eq!(dual, vec![2, 3]);
    }

    #[test]
    fn box_points_of_shifted_standard() {
        let s = shifted(3, 2);
        let pts = box_points(&s);
        assert_eq!(pts.len(), 7);
        let mut nonzero: Vec<(Vec<i64>, u64)> = pts
            .iter()
            .filter(|b| b.degree > 0)
            .map(|b| (b.point.clone(), b.degree))
            .collect();
        nonzero.sort();
        assert_eq!(nonzero.len(), 6);
        // (j-e, …, j-e, 1) for j = 1, 2 and their degree-2/3 companions
        assert!(nonzero.contains(&(vec![-1, -1, -1], 1)));
        assert!(nonzero.contains(&(vec![0, 0, 0], 1)));
        for b in &pts {
            assert!(b.coefficients.iter().all(|r| *r >= rat(0, 1) && *r < rat(1, 1)));
            let bary = s.barycentric(&b.point, b.degree as i64).unwrap();
            assert_eq!(bary, b.coefficients);
        }
    }

    #[test]
    fn box_engine_examples() {
        assert_eq!(delta_from_box(&shifted(4, 3)), dv(&[1, 3, 3, 3, 3]));
        assert_eq!(delta_from_box(&augmented(3, 2)), dv(&[1, 1, 2, 1]));
        for d in 1..6 {
            let mut unit = vec![0; d + 1];
            unit[0] = 1;
            assert_eq!(delta_from_box(&shifted(d, 0)).entries(), &unit[..]);
        }
    }

    #[test]
    fn counting_engine_examples() {
        let square = LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], None).unwrap();
        assert_eq!(delta_from_counts(&square).unwrap(), dv(&[1, 1, 0]));
        assert_eq!(delta_from_counts(shifted(2, 1).polytope()).unwrap(), dv(&[1, 1, 1]));
    }

    #[test]
    fn count_schemes_agree() {
        for s in [shifted(3, 2), augmented(4, 2), circulant(5, 2), circulant(7, 3), shifted(5, 1)] {
            let p = s.polytope();
            assert_eq!(
                delta_from_counts_with(p, CountScheme::Closed).unwrap(),
                delta_from_counts_with(p, CountScheme::Split).unwrap()
            );
        }
    }

    #[test]
    fn normalized_volume_examples() {
        assert_eq!(normalized_volume(circulant(7, 4).polytope()).unwrap(), 4);
        assert_eq!(normalized_volume(augmented(3, 2).polytope()).unwrap(), 5);
        assert_eq!(normalized_volume(shifted(4, 0).polytope()).unwrap(), 1);
    }

    #[test]
    fn degree_identity_examples() {
        let r = degree_identity_check(&shifted(3, 1)).unwrap();
        assert_eq!((r.max_nonzero_index, r.first_interior_dilation, r.holds), (3, 1, true));
        let r = degree_identity_check(&shifted(3, 0)).unwrap();
        assert_eq!((r.max_nonzero_index, r.first_interior_dilation, r.holds), (0, 4, true));
        let r = degree_identity_check(&circulant(7, 3)).unwrap();
        assert_eq!((r.max_nonzero_index, r.first_interior_dilation, r.holds), (5, 3, true));
    }

    #[test]
    fn circulant_box_point_from_residues() {
        // (q, …, q, j) with q = 1, j = 3 for d = 5, m = 2
        let s = circulant(5, 2);
        let half = rat(1, 2);
        assert_eq!(s.barycentric(&[1, 1, 1, 1, 1], 3).unwrap(), vec![half; 6]);
    }

    #[test]
    fn counting_requires_full_dimension() {
        let seg = LatticePolytope::new(2, vec![vec![0, 0], vec![1, 1]], None).unwrap();
        assert!(matches!(delta_from_counts(&seg), Err(Error::Domain(_))));
    }
}
