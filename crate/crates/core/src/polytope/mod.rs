//! Lattice polytopes given by their vertex lists.

mod count;
mod io;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{self, IntMatrix};

pub use count::{HalfSpaces, TriangularSimplex};
pub use io::VertexFile;

/// Largest vertex list accepted by [`facet_enumeration`].
pub const FACET_VERTEX_GUARD: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<i64>>,
    name: Option<String>,
}

impl LatticePolytope {
    pub fn new(ambient_dim: usize, vertices: Vec<Vec<i64>>, name: Option<String>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Format("polytope needs at least one vertex".into()));
        }
        if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != ambient_dim) {
            return Err(Error::Format(format!(
                "vertex {i} has {} coordinates, expected {ambient_dim}",
                v.len()
            )));
        }
        for (i, j) in (0..vertices.len()).tuple_combinations() {
            if vertices[i] == vertices[j] {
                return Err(Error::Degenerate(format!("vertices {i} and {j} coincide")));
            }
        }
        Ok(Self { ambient_dim, vertices, name })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Matrix whose rows are `v_i - v_0`, or `None` for a single point.
    fn difference_matrix(&self) -> Option<IntMatrix> {
        if self.vertices.len() < 2 || self.ambient_dim == 0 {
            return None;
        }
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<i64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        Some(IntMatrix::from_rows(&rows).expect("nonempty rectangular rows"))
    }

    pub fn dimension(&self) -> usize {
        self.difference_matrix().map_or(0, |m| exactla::rank(&m))
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.ambient_dim
    }

    /// Half-space description `a·x ≤ b`: barycentric rows for simplices, facets otherwise.
    pub fn halfspaces(&self) -> Result<HalfSpaces> {
        if !self.is_full_dimensional() {
            return Err(Error::Domain(format!(
                "lattice-point counting needs a full-dimensional polytope (dim {} in ambient {})",
                self.dimension(),
                self.ambient_dim
            )));
        }
        if self.vertices.len() == self.ambient_dim + 1 {
            return Ok(Simplex::new(self.clone())?.halfspaces());
        }
        let facets = facet_enumeration(self)?;
        Ok(HalfSpaces::new(
            facets.iter().map(|f| f.normal.clone()).collect(),
            facets.iter().map(|f| f.offset).collect(),
        ))
    }

    /// Axis-aligned bounding box `(lo, hi)` of the vertex set.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.ambient_dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).min().unwrap_or(0))
            .collect();
        let hi = (0..self.ambient_dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).max().unwrap_or(0))
            .collect();
        (lo, hi)
    }
}

pub fn dimension(p: &LatticePolytope) -> usize {
    p.dimension()
}

/// A lattice simplex with affinely independent vertices `v_0, …, v_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    base: LatticePolytope,
}

impl Simplex {
    pub fn new(base: LatticePolytope) -> Result<Self> {
        let d = base.vertices.len() - 1;
        if base.dimension() != d {
            return Err(Error::Degenerate(format!(
                "{} vertices span only a {}-dimensional affine space",
                d + 1,
                base.dimension()
            )));
        }
        Ok(Self { base })
    }

    pub fn from_vertices(vertices: Vec<Vec<i64>>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        Self::new(LatticePolytope::new(n, vertices, None)?)
    }

    pub fn dim(&self) -> usize {
        self.base.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.base.vertices
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.base
    }

    pub fn into_polytope(self) -> LatticePolytope {
        self.base
    }

    /// `(N+1) × (d+1)` matrix whose columns are `(v_j, 1)`.
    pub fn homogenized_matrix(&self) -> IntMatrix {
        let n = self.base.ambient_dim;
        let verts = &self.base.vertices;
        let rows: Vec<Vec<i64>> = (0..=n)
            .map(|i| {
                verts
                    .iter()
                    .map(|v| if i < n { v[i] } else { 1 })
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(&rows).expect("rectangular")
    }

    /// Rows of the homogenized matrix forming a nonsingular square block.
    fn independent_rows(&self) -> Vec<usize> {
        let m = self.homogenized_matrix();
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..m.rows() {
            let mut trial = chosen.clone();
            trial.push(i);
            let sub = m.select(&trial, &(0..m.cols()).collect_vec()).expect("in range");
            if exactla::rank(&sub) == trial.len() {
                chosen = trial;
            }
            if chosen.len() == m.cols() {
                break;
            }
        }
        chosen
    }

    /// Unique rationals `r` with `Σ r_j (v_j, 1) = (point, height)`.
    pub fn barycentric(&self, point: &[i64], height: i64) -> Result<Vec<BigRational>> {
        let n = self.base.ambient_dim;
        if point.len() != n {
            return Err(Error::Shape(format!("point has {} coordinates, expected {n}", point.len())));
        }
        let m = self.homogenized_matrix();
        let target: Vec<BigInt> = point.iter().chain(std::iter::once(&height)).map(|&x| x.into()).collect();
        let rows = self.independent_rows();
        let square = m.select(&rows, &(0..m.cols()).collect_vec())?;
        let rhs: Vec<BigInt> = rows.iter().map(|&i| target[i].clone()).collect();
        let r = exactla::solve_exact(&square, &rhs)?;
        // remaining equations must hold as well
        for (i, t) in target.iter().enumerate() {
            let lhs: BigRational = m
                .row(i)
                .iter()
                .zip(&r)
                .map(|(a, x)| x * BigRational::from_integer(a.clone()))
                .sum();
            if lhs != BigRational::from_integer(t.clone()) {
                return Err(Error::Domain("point lies outside the affine span of the simplex".into()));
            }
        }
        Ok(r)
    }

    /// Normalized volume `|det|` of the homogenized matrix (index of its column lattice).
    pub fn normalized_volume(&self) -> BigInt {
        let m = self.homogenized_matrix();
        if m.is_square() {
            exactla::determinant(&m).expect("square").abs()
        } else {
            exactla::minor_gcd(&m, m.cols()).expect("full column rank")
        }
    }

    /// Barycentric half-spaces: `λ_j(x, n) ≥ 0`, scaled by the determinant.
    pub fn halfspaces(&self) -> HalfSpaces {
        let m = self.homogenized_matrix();
        assert!(m.is_square(), "half-space form needs a full-dimensional simplex");
        let dim = self.dim();
        let det = exactla::determinant(&m).expect("square");
        let sign = BigInt::from(if det.is_negative() { -1 } else { 1 });
        let mut normals = Vec::with_capacity(dim + 1);
        let mut offsets = Vec::with_capacity(dim + 1);
        // adjugate row j: cofactors of column j of m
        for j in 0..=dim {
            let other_cols: Vec<usize> = (0..=dim).filter(|&c| c != j).collect();
            let mut row: Vec<BigInt> = Vec::with_capacity(dim + 1);
            for i in 0..=dim {
                let other_rows: Vec<usize> = (0..=dim).filter(|&r| r != i).collect();
                let cof = if dim == 0 {
                    BigInt::from(1)
                } else {
                    exactla::determinant(&m.select(&other_rows, &other_cols).expect("in range"))
                        .expect("square")
                };
                let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                row.push(signed * &sign);
            }
            // λ_j · |det| = row · (x, n) ≥ 0   ⇔   -row[..d]·x ≤ row[d]·n
            let offset = row.pop().expect("homogenizing coordinate");
            let normal: Vec<BigInt> = row.into_iter().map(|c| -c).collect();
            let (normal, offset) = primitive(normal, offset);
            normals.push(normal);
            offsets.push(offset);
        }
        HalfSpaces::new(normals, offsets)
    }
}

/// Divides a constraint `a·x ≤ b` by the gcd of all its coefficients.
fn primitive(normal: Vec<BigInt>, offset: BigInt) -> (Vec<i64>, i64) {
    let g = normal.iter().fold(offset.clone(), |g, x| g.gcd(x));
    let (normal, offset) = if g.is_zero() || g == BigInt::from(1) {
        (normal, offset)
    } else {
        let off = &offset / &g;
        (normal.into_iter().map(|x| x / &g).collect(), off)
    };
    (
        normal.iter().map(|x| x.to_i64().expect("normal fits in i64")).collect(),
        offset.to_i64().expect("offset fits in i64"),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetDescription {
    /// Indices into the polytope's vertex list, ascending.
    pub vertex_indices: Vec<usize>,
    /// Primitive outward normal `a`.
    pub normal: Vec<i64>,
    /// `a·x = offset` on the facet, `a·x ≤ offset` on the polytope.
    pub offset: i64,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| i128::from(x) * i128::from(y)).sum()
}

/// Normal of the hyperplane through `points` (d points in R^d), or `None` if they are dependent.
fn hyperplane_normal(points: &[&Vec<i64>]) -> Option<Vec<BigInt>> {
    let d = points[0].len();
    if d == 1 {
        return Some(vec![BigInt::from(1)]);
    }
    let p0 = points[0];
    let edges: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let e = IntMatrix::from_rows(&edges).expect("rectangular");
    let rows: Vec<usize> = (0..d - 1).collect();
    let normal: Vec<BigInt> = (0..d)
        .map(|i| {
            let cols: Vec<usize> = (0..d).filter(|&c| c != i).collect();
            let minor = exactla::determinant(&e.select(&rows, &cols).expect("in range")).expect("square");
            if i % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect();
    if normal.iter().all(Zero::is_zero) {
        None
    } else {
        Some(normal)
    }
}

/// All facets of a full-dimensional simplicial polytope, by brute force over vertex subsets.
pub fn facet_enumeration(p: &LatticePolytope) -> Result<Vec<FacetDescription>> {
    let d = p.ambient_dim();
    if p.dimension() != d || d == 0 {
        return Err(Error::Domain(format!(
            "facet enumeration needs a full-dimensional polytope (dim {} in ambient {d})",
            p.dimension()
        )));
    }
    let verts = p.vertices();
    if verts.len() > FACET_VERTEX_GUARD {
        return Err(Error::Budget(format!(
            "{} vertices exceeds the facet-enumeration guard of {FACET_VERTEX_GUARD}",
            verts.len()
        )));
    }

    let mut facets = Vec::new();
    for subset in (0..verts.len()).combinations(d) {
        let points: Vec<&Vec<i64>> = subset.iter().map(|&i| &verts[i]).collect();
        let Some(normal) = hyperplane_normal(&points) else {
            continue;
        };
        let (mut normal, _) = primitive(normal, BigInt::zero());
        let mut offset = dot(&normal, points[0]);
        let others: Vec<i128> = (0..verts.len())
            .filter(|i| !subset.contains(i))
            .map(|i| dot(&normal, &verts[i]))
            .collect();
        let below = others.iter().any(|&s| s < offset);
        let above = others.iter().any(|&s| s > offset);
        if below && above {
            continue;
        }
        if let Some(pos) = others.iter().position(|&s| s == offset) {
            let extra = (0..verts.len()).filter(|i| !subset.contains(i)).nth(pos).expect("index");
            return Err(Error::NotSimplicial(format!(
                "supporting hyperplane through vertices {subset:?} also contains vertex {extra}"
            )));
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        facets.push(FacetDescription {
            vertex_indices: subset,
            normal,
            offset: i64::try_from(offset).map_err(|_| Error::Unsupported("facet offset overflows i64".into()))?,
        });
    }

    for i in 0..verts.len() {
        if !facets.iter().any(|f| f.vertex_indices.contains(&i)) {
            return Err(Error::Format(format!("point {i} is not a vertex of the polytope")));
        }
    }
    Ok(facets)
}

/// Unimodular image `conv{0, rows of H}` of a full-dimensional simplex, with
/// `H` the Hermite form of the edge matrix; lattice point counts of all
/// dilations are unchanged.
pub fn triangular_form(p: &LatticePolytope) -> Result<Option<TriangularSimplex>> {
    let d = p.ambient_dim();
    let verts = p.vertices();
    if verts.len() != d + 1 || p.dimension() != d {
        return Ok(None);
    }
    let edges: Vec<Vec<i64>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let h = exactla::hermite_normal_form(&IntMatrix::from_rows(&edges)?)?;
    let rows = (0..d)
        .map(|i| {
            h.row(i)
                .iter()
                .map(|x| x.to_i128().ok_or_else(|| Error::Unsupported("Hermite entry overflows i128".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(TriangularSimplex::new(rows)))
}

/// Number of lattice points in `nP` (or in its interior when `interior_only`).
pub fn count_lattice_points(p: &LatticePolytope, n: u64, interior_only: bool) -> Result<u64> {
    if let Some(t) = triangular_form(p)? {
        return Ok(t.count_dilation(n, interior_only));
    }
    count_lattice_points_by_halfspaces(p, n, interior_only)
}

/// Bounding-box sweep over the half-space description; works for every polytope.
pub fn count_lattice_points_by_halfspaces(p: &LatticePolytope, n: u64, interior_only: bool) -> Result<u64> {
    let hs = p.halfspaces()?;
    let (lo, hi) = p.bounding_box();
    Ok(hs.count_dilation(&lo, &hi, n, interior_only))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn standard_simplex(d: usize) -> LatticePolytope {
        let mut verts = vec![vec![0; d]];
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            verts.push(e);
        }
        LatticePolytope::new(d, verts, None).unwrap()
    }

    /// Vertices of the simplicial polytope with h-vector (1, n+1, …, n+1, 1).
    fn lower_bound_polytope(d: usize, n: i64) -> LatticePolytope {
        let mut verts = standard_simplex(d).vertices().to_vec();
        for j in 1..=n {
            let c = n + (n - j) * (j - 1) / 2;
            let mut v = vec![c; d];
            v[d - 1] = j;
            verts.push(v);
        }
        LatticePolytope::new(d, verts, None).unwrap()
    }

    #[test]
    fn construction_validation() {
        assert!(LatticePolytope::new(2, vec![], None).is_err());
        assert!(LatticePolytope::new(2, vec![vec![0, 0], vec![1]], None).is_err());
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![0, 0], vec![0, 0]], None),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            Simplex::from_vertices(vec![vec![0, 0], vec![1, 1], vec![2, 2]]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(LatticePolytope::new(3, vec![vec![1, 2, 3]], None).unwrap().dimension(), 0);
        for d in 1..5 {
            assert_eq!(standard_simplex(d).dimension(), d);
        }
        assert_eq!(lower_bound_polytope(3, 2).dimension(), 3);
    }

    #[test]
    fn simplex_facets_omit_one_vertex() {
        let p = standard_simplex(4);
        let facets = facet_enumeration(&p).unwrap();
        assert_eq!(facets.len(), 5);
        for omitted in 0..5 {
            assert!(facets.iter().any(|f| !f.vertex_indices.contains(&omitted)));
        }
    }

    #[test]
    fn lower_bound_polytope_facet_counts() {
        for (d, n, expected) in [(3, 2, 8), (4, 2, 11), (3, 4, 12), (4, 4, 17)] {
            let p = lower_bound_polytope(d, n);
            let facets = facet_enumeration(&p).unwrap();
            assert_eq!(facets.len(), expected, "d={d} n={n}");
            for f in &facets {
                for (i, v) in p.vertices().iter().enumerate() {
                    let s = dot(&f.normal, v);
                    if f.vertex_indices.contains(&i) {
                        assert_eq!(s, i128::from(f.offset));
                    } else {
                        assert!(s < i128::from(f.offset));
                    }
                }
            }
        }
    }

    #[test]
    fn facet_hyperplane_matches_printed_equation() {
        // x1 + x2 - (n(d-1) - 1) x3 = 1 through v1, v2, v_{d+1} for d = 3, n = 2
        let p = lower_bound_polytope(3, 2);
        let facets = facet_enumeration(&p).unwrap();
        let f = facets.iter().find(|f| f.vertex_indices == vec![1, 2, 4]).unwrap();
        assert_eq!((f.normal.clone(), f.offset), (vec![1, 1, -3], 1));
    }

    #[test]
    fn square_is_not_simplicial() {
        let cube = LatticePolytope::new(
            3,
            (0..8).map(|m| (0..3).map(|k| (m >> k) & 1).collect()).collect(),
            None,
        )
        .unwrap();
        assert!(matches!(facet_enumeration(&cube), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn interior_point_is_rejected() {
        let p = LatticePolytope::new(2, vec![vec![0, 0], vec![3, 0], vec![0, 3], vec![1, 1]], None).unwrap();
        assert!(matches!(facet_enumeration(&p), Err(Error::Format(_))));
    }

    #[test]
    fn vertex_guard() {
        let verts: Vec<Vec<i64>> = (0..21).map(|t: i64| vec![t, t * t]).collect();
        let p = LatticePolytope::new(2, verts, None).unwrap();
        assert!(matches!(facet_enumeration(&p), Err(Error::Budget(_))));
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_lattice_points(&standard_simplex(2), 2, false).unwrap(), 6);
        let tri = LatticePolytope::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], None).unwrap();
        assert_eq!(count_lattice_points(&tri, 1, true).unwrap(), 1);
        let aug = LatticePolytope::new(
            3,
            vec![vec![2, 2, 2], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            None,
        )
        .unwrap();
        assert_eq!(count_lattice_points(&aug, 0, false).unwrap(), 1);
        assert_eq!(count_lattice_points(&aug, 0, true).unwrap(), 0);
    }

    #[test]
    fn counting_unit_square_by_facets() {
        let sq = LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], None).unwrap();
        for n in 0..5u64 {
            assert_eq!(count_lattice_points(&sq, n, false).unwrap(), (n + 1) * (n + 1));
            assert_eq!(count_lattice_points(&sq, n, true).unwrap(), n.saturating_sub(1).pow(2));
        }
    }

    #[test]
    fn barycentric_examples() {
        let s = Simplex::from_vertices(vec![vec![-1, -1, -1], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(
            s.barycentric(&[0, 0, 0], 1).unwrap(),
            vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]
        );
        assert_eq!(
            s.barycentric(&[-1, -1, -1], 1).unwrap(),
            vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn barycentric_in_higher_ambient_space() {
        let s = Simplex::from_vertices(vec![vec![0, 0, 0], vec![2, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(s.barycentric(&[1, 0, 0], 1).unwrap(), vec![rat(1, 2), rat(1, 2), rat(0, 1)]);
        assert!(s.barycentric(&[0, 0, 1], 1).is_err());
        assert_eq!(s.normalized_volume(), BigInt::from(2));
    }

    proptest::proptest! {
        #[test]
        fn triangular_counts_match_halfspace_sweep(
            coords in proptest::collection::vec(-3i64..=3, 12),
            d in 1usize..=3,
        ) {
            let verts: Vec<Vec<i64>> = coords.chunks(3).take(d + 1).map(|c| c[..d].to_vec()).collect();
            let Ok(p) = LatticePolytope::new(d, verts, None) else { return Ok(()) };
            if p.dimension() != d {
                return Ok(());
            }
            for n in 0..4 {
                for interior in [false, true] {
                    proptest::prop_assert_eq!(
                        count_lattice_points(&p, n, interior).unwrap(),
                        count_lattice_points_by_halfspaces(&p, n, interior).unwrap()
                    );
                }
            }
        }
    }
}
