//! Property checkers for δ-vectors, simplices and simplicial boundary complexes.
//!
//! The inequality checkers take raw sequences rather than [`DeltaVector`]s so
//! that sequences violating them can be tested at all.

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ehrhart::{box_points, delta_from_box, DeltaVector};
use crate::error::{Error, Result};
use crate::exactla::{self, IntMatrix};
use crate::polytope::{count_lattice_points, facet_enumeration, LatticePolytope, Simplex};

/// `δ_{d-i} = δ_{i+1}` for `0 ≤ i ≤ ⌊(d-1)/2⌋`.
pub fn is_shifted_symmetric(delta: &[u64]) -> bool {
    let d = delta.len().saturating_sub(1);
    if d == 0 {
        return true;
    }
    (0..=(d - 1) / 2).all(|i| delta[d - i] == delta[i + 1])
}

fn top_index(delta: &[u64]) -> usize {
    delta.iter().rposition(|&x| x != 0).unwrap_or(0)
}

/// `δ_i = δ_{s-i}` with `s` the largest index of a nonzero entry.
pub fn is_symmetric(delta: &[u64]) -> bool {
    let s = top_index(delta);
    (0..=s / 2).all(|i| delta[i] == delta[s - i])
}

/// `δ_0 + … + δ_i ≤ δ_s + … + δ_{s-i}` for `0 ≤ i ≤ ⌊s/2⌋`.
pub fn stanley_holds(delta: &[u64]) -> bool {
    let s = top_index(delta);
    let (mut head, mut tail) = (0u64, 0u64);
    (0..=s / 2).all(|i| {
        head += delta[i];
        tail += delta[s - i];
        head <= tail
    })
}

/// `δ_d + … + δ_{d-i} ≤ δ_1 + … + δ_{i+1}` for `0 ≤ i ≤ ⌊(d-1)/2⌋`.
pub fn hibi_holds(delta: &[u64]) -> bool {
    let d = delta.len().saturating_sub(1);
    if d == 0 {
        return true;
    }
    let (mut top, mut bottom) = (0u64, 0u64);
    (0..=(d - 1) / 2).all(|i| {
        top += delta[d - i];
        bottom += delta[i + 1];
        top <= bottom
    })
}

/// Normalized volume of a lattice simplex inside its own affine lattice:
/// the gcd of the maximal minors of its edge matrix.
pub fn face_volume(vertices: &[&[i64]]) -> u64 {
    if vertices.len() <= 1 {
        return 1;
    }
    let edges: Vec<Vec<i64>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    let m = IntMatrix::from_rows(&edges).expect("rectangular");
    exactla::minor_gcd(&m, edges.len())
        .expect("order within range")
        .to_u64()
        .expect("face volume fits in u64")
}

/// Normalized volume of the facet opposite each vertex, in vertex order.
pub fn facet_volumes(s: &Simplex) -> Vec<u64> {
    let d = s.dim();
    let verts = s.vertices();
    (0..=d)
        .map(|omit| {
            let face: Vec<&[i64]> = (0..=d).filter(|&i| i != omit).map(|i| verts[i].as_slice()).collect();
            face_volume(&face)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetWitness {
    pub omitted_vertex: usize,
    pub volume: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxWitness {
    pub point: Vec<i64>,
    pub degree: u64,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub shifted_symmetric: bool,
    pub all_facets_unimodular: bool,
    pub box_strictly_interior: bool,
    pub facet_witness: Option<FacetWitness>,
    pub box_witness: Option<BoxWitness>,
}

impl TrichotomyReport {
    pub fn flags_agree(&self) -> bool {
        self.shifted_symmetric == self.all_facets_unimodular
            && self.all_facets_unimodular == self.box_strictly_interior
    }
}

/// Evaluates shifted symmetry, facet unimodularity and strict interiority of
/// the nonzero box points separately.
pub fn trichotomy_report(s: &Simplex) -> TrichotomyReport {
    let delta = delta_from_box(s);
    let volumes = facet_volumes(s);
    let facet_witness = volumes
        .iter()
        .position(|&v| v != 1)
        .map(|i| FacetWitness { omitted_vertex: i, volume: volumes[i] });
    let box_witness = box_points(s)
        .into_iter()
        .filter(|b| b.degree > 0)
        .find(|b| b.has_zero_coefficient())
        .map(|b| BoxWitness {
            point: b.point,
            degree: b.degree,
            coefficients: b.coefficients.iter().map(ToString::to_string).collect(),
        });
    TrichotomyReport {
        shifted_symmetric: is_shifted_symmetric(delta.entries()),
        all_facets_unimodular: facet_witness.is_none(),
        box_strictly_interior: box_witness.is_none(),
        facet_witness,
        box_witness,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeVolumeStatus {
    Inapplicable,
    Holds,
    Violation,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Prime volume together with `min{i > 0 : δ_i ≠ 0} = d + 1 - max{i : δ_i ≠ 0}`
/// must force a shifted-symmetric δ-vector.
pub fn prime_volume_check(p: &LatticePolytope) -> PrimeVolumeStatus {
    if p.vertices().len() != p.dimension() + 1 {
        return PrimeVolumeStatus::Inapplicable;
    }
    let Ok(s) = Simplex::new(p.clone()) else {
        return PrimeVolumeStatus::Inapplicable;
    };
    prime_volume_check_delta(&delta_from_box(&s))
}

pub fn prime_volume_check_delta(delta: &DeltaVector) -> PrimeVolumeStatus {
    let d = delta.dim();
    let applicable = is_prime(delta.volume())
        && delta.first_positive().is_some_and(|lo| lo + delta.degree() == d + 1);
    match (applicable, is_shifted_symmetric(delta.entries())) {
        (false, _) => PrimeVolumeStatus::Inapplicable,
        (true, true) => PrimeVolumeStatus::Holds,
        (true, false) => PrimeVolumeStatus::Violation,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HVector {
    /// `f_{-1}, f_0, …, f_{d-1}`.
    pub f_vector: Vec<u64>,
    pub h: Vec<i64>,
    /// `h_1 ≤ h_i` for `1 ≤ i ≤ d-1`.
    pub lower_bound_holds: bool,
    /// `h_1 = h_i` for `1 ≤ i ≤ d-1`.
    pub lower_bound_tight: bool,
}

impl HVector {
    pub fn is_dehn_sommerville_symmetric(&self) -> bool {
        let d = self.h.len() - 1;
        (0..=d).all(|i| self.h[i] == self.h[d - i])
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// h-vector of the boundary complex of a full-dimensional simplicial polytope.
pub fn h_vector(p: &LatticePolytope) -> Result<HVector> {
    let facets = facet_enumeration(p)?;
    let d = p.dimension();
    let mut faces: HashSet<u32> = HashSet::new();
    for f in &facets {
        let mask: u32 = f.vertex_indices.iter().map(|&i| 1u32 << i).sum();
        // every subset of the facet mask
        let mut sub = mask;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    let mut f_vector = vec![0u64; d + 1];
    for face in &faces {
        f_vector[face.count_ones() as usize] += 1;
    }
    let d = d as i64;
    let h: Vec<i64> = (0..=d)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - j, d - i) * f_vector[j as usize] as i64
                })
                .sum()
        })
        .collect();
    let h1 = h.get(1).copied().unwrap_or(0);
    let middle = || (1..d.max(1) as usize).map(|i| h[i]);
    Ok(HVector {
        lower_bound_holds: middle().all(|x| h1 <= x),
        lower_bound_tight: middle().all(|x| h1 == x),
        f_vector,
        h,
    })
}

/// Every identity and inequality a genuine δ-vector of `p` must satisfy;
/// returns a description of each one that fails.
pub fn audit_delta(p: &LatticePolytope, delta: &DeltaVector) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let e = delta.entries();
    let d = delta.dim();
    if d != p.dimension() {
        return Err(Error::Shape(format!("δ of length {} for a {}-polytope", e.len(), p.dimension())));
    }
    if e[0] != 1 {
        failures.push(format!("δ_0 = {} ≠ 1", e[0]));
    }
    if d >= 1 {
        let points = count_lattice_points(p, 1, false)?;
        if e[1] as i128 != points as i128 - (d as i128 + 1) {
            failures.push(format!("δ_1 = {} but |P ∩ Z^N| - (d+1) = {}", e[1], points as i128 - d as i128 - 1));
        }
        let interior = count_lattice_points(p, 1, true)?;
        if e[d] != interior {
            failures.push(format!("δ_d = {} but interior count = {interior}", e[d]));
        }
        if e[1] < e[d] {
            failures.push("δ_1 < δ_d".into());
        }
        if interior > 0 && (1..d).any(|i| e[1] > e[i]) {
            failures.push("interior point present but δ_1 > δ_i for some 1 ≤ i ≤ d-1".into());
        }
    }
    if !stanley_holds(e) {
        failures.push("Stanley inequalities fail".into());
    }
    if !hibi_holds(e) {
        failures.push("Hibi inequalities fail".into());
    }
    let mut first_interior = None;
    for n in 1..=d as u64 + 1 {
        if count_lattice_points(p, n, true)? > 0 {
            first_interior = Some(n);
            break;
        }
    }
    match first_interior {
        Some(n) if delta.degree() as u64 + n == d as u64 + 1 => {}
        other => failures.push(format!(
            "degree identity fails: max nonzero index {}, first interior dilation {other:?}",
            delta.degree()
        )),
    }
    Ok(failures)
}

/// Indices of the omitted vertices whose opposite facet has volume other than one.
pub fn non_unimodular_facets(s: &Simplex) -> Vec<usize> {
    facet_volumes(s).iter().positions(|&v| v != 1).collect()
}
