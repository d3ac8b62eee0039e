//! Constructors for the polytope families with shifted-symmetric δ-vectors
//! (or unimodular-facet boundary complexes), each carrying its predicted
//! invariant.
//!
//! Constructors never check their own predictions; callers compare the
//! prediction against an engine.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::ehrhart::DeltaVector;
use crate::error::{Error, Result};
use crate::polytope::{LatticePolytope, Simplex, VertexFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    ShiftedStandard,
    AugmentedStandard,
    Circulant,
    SimplicialLb,
    Vol4,
    Vol5a,
    Vol5b,
    Vol5c,
}

impl FamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::ShiftedStandard => "shifted_standard",
            FamilyId::AugmentedStandard => "augmented_standard",
            FamilyId::Circulant => "circulant",
            FamilyId::SimplicialLb => "simplicial_lb",
            FamilyId::Vol4 => "vol4",
            FamilyId::Vol5a => "vol5a",
            FamilyId::Vol5b => "vol5b",
            FamilyId::Vol5c => "vol5c",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let all = [
            FamilyId::ShiftedStandard,
            FamilyId::AugmentedStandard,
            FamilyId::Circulant,
            FamilyId::SimplicialLb,
            FamilyId::Vol4,
            FamilyId::Vol5a,
            FamilyId::Vol5b,
            FamilyId::Vol5c,
        ];
        all.into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Family parameters; unused ones stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let named: [(&str, Option<String>); 7] = [
            ("d", self.d.map(|x| x.to_string())),
            ("e", self.e.map(|x| x.to_string())),
            ("m", self.m.map(|x| x.to_string())),
            ("h1", self.h1.map(|x| x.to_string())),
            ("n", self.n.map(|x| x.to_string())),
            ("k", self.k.map(|x| x.to_string())),
            ("l", self.l.map(|x| x.to_string())),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                parts.push(format!("{key}={v}"));
            }
        }
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Delta(DeltaVector),
    HVector(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub predicted: Prediction,
    /// Where the prediction comes from, e.g. which construction was used.
    pub note: String,
}

impl FamilySpec {
    pub fn label(&self) -> String {
        format!("{}({})", self.family, self.params)
    }

    pub fn predicted_delta(&self) -> Option<&DeltaVector> {
        match &self.predicted {
            Prediction::Delta(d) => Some(d),
            Prediction::HVector(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub spec: FamilySpec,
    pub polytope: LatticePolytope,
}

#[derive(Serialize)]
struct GeneratedFile<'a> {
    ambient_dim: usize,
    vertices: &'a [Vec<i64>],
    name: String,
    family: &'a FamilySpec,
}

impl FamilyInstance {
    fn new(spec: FamilySpec, dim: usize, vertices: Vec<Vec<i64>>) -> Result<Self> {
        let label = spec.label();
        let polytope = LatticePolytope::new(dim, vertices, Some(label))?;
        Ok(Self { spec, polytope })
    }

    /// The polytope as a simplex; fails for the non-simplex members of `simplicial_lb`.
    pub fn simplex(&self) -> Result<Simplex> {
        Simplex::new(self.polytope.clone())
    }

    pub fn vertex_file(&self) -> VertexFile {
        VertexFile::from(&self.polytope)
    }

    /// Vertex file with the family record attached; readable by [`VertexFile::parse`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GeneratedFile {
            ambient_dim: self.polytope.ambient_dim(),
            vertices: self.polytope.vertices(),
            name: self.spec.label(),
            family: &self.spec,
        })
        .expect("plain data serializes")
    }
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// `(1, 0^{g_1}, 1, 0^{g_2}, …, 1, 0^{g_r})`.
pub fn delta_from_gaps(gaps: &[usize]) -> DeltaVector {
    let mut entries = Vec::new();
    for &g in gaps {
        entries.push(1);
        entries.extend(std::iter::repeat_n(0, g));
    }
    DeltaVector::new(entries).expect("gap patterns start with 1")
}

/// `conv{e_1, …, e_d, (-e, …, -e)}`, predicted `δ = (1, e, …, e)`.
pub fn shifted_standard(d: usize, e: i64) -> Result<FamilyInstance> {
    if d < 1 || e < 0 {
        return Err(Error::Domain(format!("shifted_standard needs d ≥ 1, e ≥ 0 (got d={d}, e={e})")));
    }
    let mut vertices = vec![vec![-e; d]];
    vertices.extend((0..d).map(|i| unit(d, i)));
    let mut delta = vec![e as u64; d + 1];
    delta[0] = 1;
    let spec = FamilySpec {
        family: FamilyId::ShiftedStandard,
        params: FamilyParams { d: Some(d), e: Some(e), ..Default::default() },
        predicted: Prediction::Delta(DeltaVector::new(delta)?),
        note: format!("(1, e, …, e) with volume ed + 1 = {}", e * d as i64 + 1),
    };
    FamilyInstance::new(spec, d, vertices)
}

/// `conv{e_1, …, e_d, (e, …, e)}`, predicted `δ = (1, e-1, e, …, e, e-1)`.
pub fn augmented_standard(d: usize, e: i64) -> Result<FamilyInstance> {
    if d < 3 || e < 1 {
        return Err(Error::Domain(format!("augmented_standard needs d ≥ 3, e ≥ 1 (got d={d}, e={e})")));
    }
    let mut vertices = vec![vec![e; d]];
    vertices.extend((0..d).map(|i| unit(d, i)));
    let mut delta = vec![e as u64; d + 1];
    delta[0] = 1;
    delta[1] = (e - 1) as u64;
    delta[d] = (e - 1) as u64;
    let spec = FamilySpec {
        family: FamilyId::AugmentedStandard,
        params: FamilyParams { d: Some(d), e: Some(e), ..Default::default() },
        predicted: Prediction::Delta(DeltaVector::new(delta)?),
        note: format!("(1, e-1, e, …, e, e-1) with volume ed - 1 = {}", e * d as i64 - 1),
    };
    FamilyInstance::new(spec, d, vertices)
}

/// Rows `v_i = e_i + e_{i+1} + … + e_{i+m-1}` (cyclic, 1-based), `i = 1..=d`.
pub fn circulant_rows(d: usize, m: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| i64::from((j + d - i) % d < m)).collect())
        .collect()
}

/// Quotients and remainders of `j·m = q_j·d + r_j`, and the `j_k` with `r_{j_k} = k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueTable {
    /// `q_j` for `j = 1..d-1` (index 0 unused).
    pub quotients: Vec<usize>,
    /// `r_j` for `j = 1..d-1` (index 0 unused).
    pub remainders: Vec<usize>,
    /// `j_k` for `k = 1..m-1` (index 0 unused).
    pub positions: Vec<usize>,
}

fn check_coprime(d: usize, m: usize) -> Result<()> {
    if m == 0 || d == 0 || d.gcd(&m) != 1 {
        return Err(Error::Degenerate(format!(
            "gcd(m, d) = {} for d={d}, m={m}: the circulant determinant vanishes",
            d.gcd(&m)
        )));
    }
    Ok(())
}

pub fn residue_table(d: usize, m: usize) -> Result<ResidueTable> {
    check_coprime(d, m)?;
    let mut quotients = vec![0; d];
    let mut remainders = vec![0; d];
    let mut positions = vec![0; m];
    for j in 1..d {
        quotients[j] = j * m / d;
        remainders[j] = j * m % d;
        if remainders[j] < m {
            positions[remainders[j]] = j;
        }
    }
    Ok(ResidueTable { quotients, remainders, positions })
}

/// `δ_i = 1` exactly when `i·m mod d ∈ {1, …, m-1}`, plus `δ_0 = 1`.
pub fn residue_delta(d: usize, m: usize) -> Result<DeltaVector> {
    check_coprime(d, m)?;
    let entries = (0..=d)
        .map(|i| {
            let r = i * m % d;
            u64::from(i == 0 || (1..m).contains(&r))
        })
        .collect();
    DeltaVector::new(entries)
}

/// `conv{0, v_1, …, v_d}` with circulant rows `v_i`.
pub fn circulant(d: usize, m: usize) -> Result<FamilyInstance> {
    if m < 1 || m >= d {
        return Err(Error::Domain(format!("circulant needs 1 ≤ m < d (got d={d}, m={m})")));
    }
    let predicted = residue_delta(d, m)?;
    let mut vertices = vec![vec![0; d]];
    vertices.extend(circulant_rows(d, m));
    let spec = FamilySpec {
        family: FamilyId::Circulant,
        params: FamilyParams { d: Some(d), m: Some(m), ..Default::default() },
        predicted: Prediction::Delta(predicted),
        note: "residue rule: δ_i = 1 iff i·m mod d ∈ {1, …, m-1}; volume m".into(),
    };
    FamilyInstance::new(spec, d, vertices)
}

/// Simplicial polytope whose facets all have normalized volume 1 and whose
/// boundary h-vector is `(1, h1, …, h1, 1)`.
pub fn simplicial_lb(d: usize, h1: usize) -> Result<FamilyInstance> {
    if d < 2 || h1 < 1 {
        return Err(Error::Domain(format!("simplicial_lb needs d ≥ 2, h1 ≥ 1 (got d={d}, h1={h1})")));
    }
    let mut h = vec![h1 as i64; d + 1];
    h[0] = 1;
    h[d] = 1;
    let mut params = FamilyParams { d: Some(d), h1: Some(h1), ..Default::default() };

    let (vertices, note) = if d == 2 {
        (primitive_polygon(h1 + 2), format!("lattice polygon with {} primitive edges", h1 + 2))
    } else if h1 == 1 {
        let mut v = vec![vec![0; d]];
        v.extend((0..d).map(|i| unit(d, i)));
        (v, "unimodular simplex".into())
    } else {
        let n = if h1 % 2 == 1 { h1 - 1 } else { h1 };
        params.n = Some(n);
        let n_i = n as i64;
        let mut v = vec![vec![0; d]];
        v.extend((0..d).map(|i| unit(d, i)));
        for j in 1..=n_i {
            let c = n_i + (n_i - j) * (j - 1) / 2;
            let mut w = vec![c; d];
            w[d - 1] = j;
            v.push(w);
        }
        if h1 % 2 == 1 {
            let facets = (n + 1) * (d - 1) + 2;
            (v, format!("{} vertices, {facets} facets", d + n + 1))
        } else {
            // drop the origin
            v.remove(0);
            (v, format!("origin removed, {} vertices", d + n))
        }
    };
    let spec = FamilySpec {
        family: FamilyId::SimplicialLb,
        params,
        predicted: Prediction::HVector(h),
        note,
    };
    FamilyInstance::new(spec, d, vertices)
}

/// Convex lattice polygon with `count ≥ 3` edges, every edge primitive.
fn primitive_polygon(count: usize) -> Vec<Vec<i64>> {
    assert!(count >= 3);
    let mut edges: Vec<(i64, i64)> = Vec::new();
    if count.is_multiple_of(2) {
        for t in 0..(count / 2) as i64 {
            edges.push((1, t));
            edges.push((-1, -t));
        }
    } else {
        edges.extend([(1, 0), (-1, 1), (0, -1)]);
        for t in 1..=((count - 3) / 2) as i64 {
            edges.push((1, t));
            edges.push((-1, -t));
        }
    }
    // counter-clockwise order by angle
    edges.sort_by(|a, b| {
        let half = |(x, y): (i64, i64)| u8::from(y < 0 || (y == 0 && x < 0));
        half(*a).cmp(&half(*b)).then_with(|| (b.0 * a.1).cmp(&(a.0 * b.1)))
    });
    let mut pos = (0i64, 0i64);
    edges
        .iter()
        .map(|&(dx, dy)| {
            let v = vec![pos.0, pos.1];
            pos = (pos.0 + dx, pos.1 + dy);
            v
        })
        .collect()
}

/// Appends padding blocks to the leading circulant rows and unit vectors in
/// the new coordinates.
///
/// `blocks[i]` is the repeating block appended to `v_{i+1}`; rows past the
/// listed ones get zeros. Each block is repeated `reps` times.
fn padded_circulant(base_d: usize, m: usize, blocks: &[&[i64]], reps: usize) -> Vec<Vec<i64>> {
    let width = blocks.first().map_or(0, |b| b.len()) * reps;
    let dim = base_d + width;
    let mut vertices = vec![vec![0; dim]];
    for (i, row) in circulant_rows(base_d, m).into_iter().enumerate() {
        let mut v = row;
        match blocks.get(i) {
            Some(block) => v.extend(block.iter().cycle().take(width)),
            None => v.extend(std::iter::repeat_n(0, width)),
        }
        vertices.push(v);
    }
    for i in base_d..dim {
        vertices.push(unit(dim, i));
    }
    vertices
}

/// Volume-4 simplex with gap profile `(k+l, k, k, k+l)`.
pub fn vol4_family(k: usize, l: usize) -> Result<FamilyInstance> {
    let predicted = delta_from_gaps(&[0, k + l, k, k, k + l][1..]);
    let params = FamilyParams { k: Some(k), l: Some(l), ..Default::default() };
    let (dim, vertices, note) = match l {
        0 if k == 0 => {
            let inst = shifted_standard(3, 1)?;
            (3, inst.polytope.vertices().to_vec(), "shifted_standard(d=3,e=1)".to_string())
        }
        0 | 1 => {
            let d = 4 * k + 3 + 2 * l;
            let inst = circulant(d, 4)?;
            (d, inst.polytope.vertices().to_vec(), format!("circulant(d={d},m=4)"))
        }
        _ => {
            let base = 4 * k + 5;
            let v = padded_circulant(base, 4, &[&[1, 1], &[0, 1], &[0, 1]], l - 1);
            (base + 2 * l - 2, v, format!("circulant(d={base},m=4) padded by {} coordinates", 2 * l - 2))
        }
    };
    let spec = FamilySpec { family: FamilyId::Vol4, params, predicted: Prediction::Delta(predicted), note };
    FamilyInstance::new(spec, dim, vertices)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Vol5Variant {
    A,
    B,
    C,
}

impl Vol5Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Vol5Variant::A),
            "b" | "B" => Ok(Vol5Variant::B),
            "c" | "C" => Ok(Vol5Variant::C),
            other => Err(Error::Domain(format!("unknown volume-5 variant {other:?}"))),
        }
    }

    pub fn family(self) -> FamilyId {
        match self {
            Vol5Variant::A => FamilyId::Vol5a,
            Vol5Variant::B => FamilyId::Vol5b,
            Vol5Variant::C => FamilyId::Vol5c,
        }
    }

    /// Gap profile `(p_1, …, p_5)` for parameters `(k, l)`.
    pub fn gaps(self, k: usize, l: usize) -> [usize; 5] {
        let (a, b) = (k + l, k);
        match self {
            Vol5Variant::A => [a, b, b, b, a],
            Vol5Variant::B => [a, b, a, b, a],
            Vol5Variant::C => [a, a, b, a, a],
        }
    }
}

/// Volume-5 simplex with the gap profile of the chosen variant.
pub fn vol5_family(k: usize, l: usize, variant: Vol5Variant) -> Result<FamilyInstance> {
    let predicted = delta_from_gaps(&variant.gaps(k, l));
    let params = FamilyParams { k: Some(k), l: Some(l), ..Default::default() };
    let extra = match variant {
        Vol5Variant::A => 2,
        Vol5Variant::B => 3,
        Vol5Variant::C => 4,
    };
    let (dim, vertices, note) = match l {
        0 if k == 0 => {
            let inst = shifted_standard(4, 1)?;
            (4, inst.polytope.vertices().to_vec(), "shifted_standard(d=4,e=1)".to_string())
        }
        0 | 1 => {
            let d = 5 * k + 4 + extra * l;
            let inst = circulant(d, 5)?;
            (d, inst.polytope.vertices().to_vec(), format!("circulant(d={d},m=5)"))
        }
        _ => {
            let base = 5 * k + 4 + extra;
            let blocks: &[&[i64]] = match variant {
                Vol5Variant::A => &[&[1, 1], &[0, 1], &[0, 1], &[0, 1]],
                Vol5Variant::B => &[&[1, 1, 1], &[1, 1, 1], &[0, 1, 1], &[0, 1, 1]],
                Vol5Variant::C => &[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1], &[0, 1, 1, 1]],
            };
            let width = extra * (l - 1);
            let v = padded_circulant(base, 5, blocks, l - 1);
            (base + width, v, format!("circulant(d={base},m=5) padded by {width} coordinates"))
        }
    };
    let spec = FamilySpec {
        family: variant.family(),
        params,
        predicted: Prediction::Delta(predicted),
        note,
    };
    FamilyInstance::new(spec, dim, vertices)
}
