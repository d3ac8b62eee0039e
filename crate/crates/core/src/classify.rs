//! Classification of shifted-symmetric (0,1) δ-vectors of normalized volume
//! at most five: candidate enumeration, realization by the known families,
//! and an exhaustive search over cyclic simplices for everything else.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::deltaprops::{hibi_holds, is_shifted_symmetric, stanley_holds};
use crate::ehrhart::{delta_from_box, delta_from_counts, DeltaVector};
use crate::error::{Error, Result};
use crate::families::{self, FamilyInstance, FamilySpec, Vol5Variant};
use crate::polytope::{LatticePolytope, Simplex};

pub const MAX_VOLUME: u64 = 5;
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub delta: DeltaVector,
    /// Runs of zeros after each one, trailing run included.
    pub gaps: Vec<usize>,
    /// The leading `⌈vol/2⌉` gaps, which determine the rest.
    pub profile: Vec<usize>,
    pub volume: u64,
}

impl Candidate {
    /// Validates a (0,1) sequence as a shifted-symmetric candidate.
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.iter().any(|&x| x > 1) {
            return Err(Error::Domain(format!("{entries:?} is not a (0,1) sequence")));
        }
        if !is_shifted_symmetric(&entries) || !stanley_holds(&entries) || !hibi_holds(&entries) {
            return Err(Error::Domain(format!(
                "{entries:?} is not a shifted-symmetric sequence satisfying both inequality systems"
            )));
        }
        let delta = DeltaVector::new(entries)?;
        let volume = delta.volume();
        let ones: Vec<usize> = delta.entries().iter().positions(|&x| x == 1).collect();
        let gaps: Vec<usize> = ones
            .iter()
            .zip(ones.iter().skip(1).chain(std::iter::once(&(delta.dim() + 1))))
            .map(|(a, b)| b - a - 1)
            .collect();
        let profile = gaps[..gaps.len().div_ceil(2)].to_vec();
        Ok(Self { delta, gaps, profile, volume })
    }

    pub fn dim(&self) -> usize {
        self.delta.dim()
    }
}

/// Every (0,1) sequence of length `d+1` with `δ_0 = 1` and `Σ δ_i = vol`
/// that is shifted symmetric and satisfies both inequality systems.
pub fn enumerate_candidates(d: usize, vol: u64) -> Result<Vec<Candidate>> {
    if vol == 0 || vol > MAX_VOLUME {
        return Err(Error::Unsupported(format!("volume {vol} outside 1..={MAX_VOLUME}")));
    }
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    Ok((1..=d)
        .combinations(vol as usize - 1)
        .filter_map(|ones| {
            let mut entries = vec![0u64; d + 1];
            entries[0] = 1;
            for i in ones {
                entries[i] = 1;
            }
            Candidate::new(entries).ok()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizationStatus {
    RealizedByFamily,
    RealizedBySearch,
    Unrealized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    /// Simplices whose δ-vector was computed.
    pub examined: u64,
    /// Size of the full search space.
    pub space: u64,
    /// False when the budget ran out first.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationResult {
    pub candidate: Candidate,
    pub status: RealizationStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
    /// The gap profile is not covered by any family construction.
    pub finding: bool,
    /// Family constructions whose δ-vector differed from the candidate.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<String>,
}

/// Family construction for the candidate's gap profile, if one applies.
pub fn dispatch_family(c: &Candidate) -> Option<Result<FamilyInstance>> {
    let d = c.dim();
    let p = &c.profile;
    Some(match c.volume {
        1 => families::shifted_standard(d, 0),
        _ if c.gaps.iter().all(|&g| g == 0) => families::shifted_standard(d, 1),
        4 => {
            let (p1, p2) = (p[0], p[1]);
            if p1 < p2 {
                return None;
            }
            families::vol4_family(p2, p1 - p2)
        }
        5 => {
            let (p1, p2, p3) = (p[0], p[1], p[2]);
            if p1 == p2 && p2 == p3 {
                families::vol5_family(p1, 0, Vol5Variant::A)
            } else if p2 == p3 && p2 < p1 {
                families::vol5_family(p2, p1 - p2, Vol5Variant::A)
            } else if p2 < p3 && p3 == p1 {
                families::vol5_family(p2, p1 - p2, Vol5Variant::B)
            } else if p3 < p2 && p2 == p1 {
                families::vol5_family(p3, p1 - p3, Vol5Variant::C)
            } else {
                return None;
            }
        }
        _ => return None,
    })
}

/// Both engines agree with the candidate.
fn confirms(p: &LatticePolytope, target: &DeltaVector) -> Result<bool> {
    let s = Simplex::new(p.clone())?;
    if delta_from_box(&s) != *target {
        return Ok(false);
    }
    let counted = delta_from_counts(p)?;
    if counted != *target {
        return Err(Error::EngineMismatch(format!(
            "box engine gives {:?}, counting gives {:?}",
            target.entries(),
            counted.entries()
        )));
    }
    Ok(true)
}

pub fn realize(c: &Candidate) -> Result<RealizationResult> {
    realize_with_budget(c, DEFAULT_SEARCH_BUDGET)
}

/// Family dispatch first, search second; a witness is reported only after
/// both engines reproduce the candidate.
pub fn realize_with_budget(c: &Candidate, budget: u64) -> Result<RealizationResult> {
    let dispatched = dispatch_family(c);
    let finding = dispatched.is_none() && c.volume >= 4;
    let mut rejected = Vec::new();
    if let Some(inst) = dispatched {
        let inst = inst?;
        if confirms(&inst.polytope, &c.delta)? {
            return Ok(RealizationResult {
                candidate: c.clone(),
                status: RealizationStatus::RealizedByFamily,
                witness: Some(inst.polytope.vertices().to_vec()),
                family: Some(inst.spec),
                search: None,
                finding,
                rejected,
            });
        }
        rejected.push(inst.spec.label());
    }
    let mut result = search_realization(c, budget)?;
    result.finding = finding;
    result.rejected = rejected;
    Ok(result)
}

/// δ-vector of `conv{0, e_1, …, e_{d-1}, (a_1, …, a_{d-1}, V)}`.
///
/// The box points are indexed by `k = 0..V`; point `k` has height
/// `⌈(k + Σ_i ((-k·a_i) mod V)) / V⌉`.
pub fn cyclic_simplex_delta(a: &[u64], vol: u64) -> Vec<u64> {
    let d = a.len() + 1;
    let mut delta = vec![0u64; d + 1];
    for k in 0..vol {
        let total: u64 = k + a.iter().map(|&ai| (vol - (k * ai) % vol) % vol).sum::<u64>();
        delta[total.div_ceil(vol) as usize] += 1;
    }
    delta
}

pub fn cyclic_simplex(a: &[u64], vol: u64) -> LatticePolytope {
    let d = a.len() + 1;
    let mut vertices = vec![vec![0i64; d]];
    for i in 0..d - 1 {
        let mut e = vec![0; d];
        e[i] = 1;
        vertices.push(e);
    }
    let mut w: Vec<i64> = a.iter().map(|&x| x as i64).collect();
    w.push(vol as i64);
    vertices.push(w);
    LatticePolytope::new(d, vertices, None).expect("distinct vertices")
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1)) as u64
}

/// Exhaustive search over `conv{0, e_1, …, e_{d-1}, w}` with `w_d = vol` and
/// `0 ≤ w_1 ≤ … ≤ w_{d-1} < vol`.
///
/// Up to lattice equivalence these are all simplices of the given volume
/// whose box group is cyclic (every simplex of prime volume). Coordinates
/// `1..d-1` are interchangeable, hence the sorted `w`.
pub fn search_realization(c: &Candidate, budget: u64) -> Result<RealizationResult> {
    if budget == 0 {
        return Err(Error::Domain("search budget must be positive".into()));
    }
    let d = c.dim();
    let vol = c.volume;
    let space = binomial(vol + d as u64 - 2, d as u64 - 1);
    let target = c.delta.entries();
    let mut examined = 0;
    let mut witness = None;
    for a in (0..vol).combinations_with_replacement(d - 1) {
        if examined == budget {
            break;
        }
        examined += 1;
        if cyclic_simplex_delta(&a, vol) == target {
            let p = cyclic_simplex(&a, vol);
            if confirms(&p, &c.delta)? {
                witness = Some(p);
                break;
            }
            return Err(Error::EngineMismatch(format!(
                "closed-form δ of cyclic simplex {a:?} disagrees with the box engine"
            )));
        }
    }
    let complete = witness.is_some() || examined == space;
    Ok(RealizationResult {
        candidate: c.clone(),
        status: if witness.is_some() { RealizationStatus::RealizedBySearch } else { RealizationStatus::Unrealized },
        family: None,
        witness: witness.map(|p| p.vertices().to_vec()),
        search: Some(SearchSummary { examined, space, complete }),
        finding: false,
        rejected: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub d: usize,
    pub delta: DeltaVector,
    pub profile: Vec<usize>,
    pub status: RealizationStatus,
    pub family: Option<String>,
    pub construction: Option<String>,
    pub witness_vertices: Option<Vec<Vec<i64>>>,
    pub finding: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
}

impl From<RealizationResult> for ReportEntry {
    fn from(r: RealizationResult) -> Self {
        Self {
            d: r.candidate.dim(),
            delta: r.candidate.delta,
            profile: r.candidate.profile,
            status: r.status,
            family: r.family.as_ref().map(FamilySpec::label),
            construction: r.family.map(|f| f.note),
            witness_vertices: r.witness,
            finding: r.finding,
            search: r.search,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub candidates: usize,
    pub realized_by_family: usize,
    pub realized_by_search: usize,
    pub unrealized: Vec<DeltaVector>,
    /// Candidates outside family coverage, with their search outcome.
    pub findings: Vec<ReportEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub volume: u64,
    pub d_max: usize,
    pub classification: Vec<ReportEntry>,
    pub summary: ReportSummary,
}

pub fn classification_report(d_max: usize, vol: u64) -> Result<ClassificationReport> {
    classification_report_with_budget(d_max, vol, DEFAULT_SEARCH_BUDGET)
}

pub fn classification_report_with_budget(d_max: usize, vol: u64, budget: u64) -> Result<ClassificationReport> {
    let mut candidates = Vec::new();
    for d in 1..=d_max {
        candidates.extend(enumerate_candidates(d, vol)?);
    }
    let classification: Vec<ReportEntry> = candidates
        .par_iter()
        .map(|c| realize_with_budget(c, budget).map(ReportEntry::from))
        .collect::<Result<_>>()?;

    let mut summary = ReportSummary { candidates: classification.len(), ..Default::default() };
    for e in &classification {
        match e.status {
            RealizationStatus::RealizedByFamily => summary.realized_by_family += 1,
            RealizationStatus::RealizedBySearch => summary.realized_by_search += 1,
            RealizationStatus::Unrealized => summary.unrealized.push(e.delta.clone()),
        }
        if e.finding {
            summary.findings.push(e.clone());
        }
    }
    Ok(ClassificationReport { volume: vol, d_max, classification, summary })
}
