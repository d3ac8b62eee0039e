//! Command-line front end. Every command prints one JSON document (or a
//! plain-text rendering with `--human`); failures print a one-line
//! `{"error": {"kind", "message"}}` record and exit nonzero.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{self, Candidate, RealizationStatus, DEFAULT_SEARCH_BUDGET};
use crate::deltaprops::{
    audit_delta, face_volume, h_vector, hibi_holds, is_shifted_symmetric, is_symmetric, prime_volume_check_delta,
    stanley_holds, trichotomy_report,
};
use crate::ehrhart::{degree_identity_check, delta_from_box, delta_from_counts, DeltaVector};
use crate::error::{Error, Result};
use crate::families::{self, FamilyId, Vol5Variant};
use crate::polytope::{facet_enumeration, LatticePolytope, Simplex, VertexFile};

pub const THREADS_ENV: &str = "DELTAVEC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "deltavec", version, about = "Exact δ-vectors of lattice polytopes")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Plain-text rendering instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Box,
    Count,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// δ-vector of the polytope in a vertex file.
    Delta {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Facets with normals, offsets and normalized volumes.
    Facets { input: PathBuf },
    /// f-vector and h-vector of the boundary complex.
    Hvector { input: PathBuf },
    /// Symmetry, inequality and simplex criteria for the δ-vector.
    Check { input: PathBuf },
    /// Vertex file of a family member with its predicted invariant.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        e: Option<i64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, visible_alias = "n")]
        h1: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        variant: Option<String>,
    },
    /// Candidates of one volume for every dimension up to `d-max`, with realizations.
    Classify {
        #[arg(long)]
        d_max: usize,
        #[arg(long)]
        vol: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Search cyclic simplices for a given (0,1) δ-vector, e.g. `--delta 1,0,1,0`.
    SearchRealize {
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
}

fn read_polytope(path: &Path) -> Result<LatticePolytope> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    VertexFile::parse(&text)?.to_polytope()
}

fn as_simplex(p: &LatticePolytope) -> Option<Simplex> {
    (p.vertices().len() == p.dimension() + 1)
        .then(|| Simplex::new(p.clone()).ok())
        .flatten()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn delta_command(input: &Path, method: Method) -> Result<Value> {
    let p = read_polytope(input)?;
    let simplex = as_simplex(&p);
    let full = p.dimension() == p.ambient_dim();
    let by_box = match (method, &simplex) {
        (Method::Count, _) => None,
        (_, Some(s)) => Some(delta_from_box(s)),
        (Method::Box, None) => {
            return Err(Error::Unsupported("box enumeration needs the vertices of a simplex".into()))
        }
        (Method::Both, None) => None,
    };
    let by_count = match method {
        Method::Box => None,
        Method::Count => Some(delta_from_counts(&p)?),
        Method::Both if full => Some(delta_from_counts(&p)?),
        Method::Both => None,
    };
    let delta = match (&by_box, &by_count) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::EngineMismatch(format!(
                "box enumeration gives {:?}, counting gives {:?}",
                a.entries(),
                b.entries()
            )))
        }
        (Some(a), _) => a.clone(),
        (None, Some(b)) => b.clone(),
        (None, None) => return Err(Error::Unsupported("no engine applies to this polytope".into())),
    };
    let methods: Vec<&str> = [by_box.as_ref().map(|_| "box"), by_count.as_ref().map(|_| "count")]
        .into_iter()
        .flatten()
        .collect();
    Ok(json!({
        "input": input.display().to_string(),
        "dimension": p.dimension(),
        "delta": delta,
        "volume": delta.volume(),
        "methods": methods,
        "agree": true,
    }))
}

fn facets_command(input: &Path) -> Result<Value> {
    let p = read_polytope(input)?;
    let facets: Vec<Value> = facet_enumeration(&p)?
        .into_iter()
        .map(|f| {
            let verts: Vec<&[i64]> = f.vertex_indices.iter().map(|&i| p.vertices()[i].as_slice()).collect();
            json!({
                "vertices": f.vertex_indices,
                "normal": f.normal,
                "offset": f.offset,
                "normalized_volume": face_volume(&verts),
            })
        })
        .collect();
    Ok(json!({
        "input": input.display().to_string(),
        "dimension": p.dimension(),
        "facets": facets,
    }))
}

fn hvector_command(input: &Path) -> Result<Value> {
    let p = read_polytope(input)?;
    let h = h_vector(&p)?;
    Ok(json!({
        "input": input.display().to_string(),
        "dimension": p.dimension(),
        "f_vector": h.f_vector,
        "h_vector": h.h,
        "dehn_sommerville": h.is_dehn_sommerville_symmetric(),
        "lower_bound_holds": h.lower_bound_holds,
        "lower_bound_tight": h.lower_bound_tight,
    }))
}

fn check_command(input: &Path) -> Result<Value> {
    let p = read_polytope(input)?;
    let simplex = as_simplex(&p);
    let delta: DeltaVector = match &simplex {
        Some(s) => delta_from_box(s),
        None => delta_from_counts(&p)?,
    };
    let e = delta.entries();
    let mut properties = json!({
        "shifted_symmetric": is_shifted_symmetric(e),
        "symmetric": is_symmetric(e),
        "stanley": stanley_holds(e),
        "hibi": hibi_holds(e),
        "prime_volume_criterion": prime_volume_check_delta(&delta),
    });
    if let Some(s) = &simplex {
        let report = trichotomy_report(s);
        properties["trichotomy"] = to_value(&report);
        properties["trichotomy"]["flags_agree"] = Value::Bool(report.flags_agree());
        properties["degree_identity"] = to_value(&degree_identity_check(s)?);
    }
    let failures = if p.dimension() == p.ambient_dim() { audit_delta(&p, &delta)? } else { Vec::new() };
    properties["audit_failures"] = to_value(&failures);
    Ok(json!({
        "input": input.display().to_string(),
        "dimension": p.dimension(),
        "delta": delta,
        "volume": delta.volume(),
        "properties": properties,
    }))
}

fn need<T>(value: Option<T>, name: &str, family: FamilyId) -> Result<T> {
    value.ok_or_else(|| Error::Domain(format!("family {family} needs --{name}")))
}

#[allow(clippy::too_many_arguments)]
fn generate_command(
    family: &str,
    d: Option<usize>,
    e: Option<i64>,
    m: Option<usize>,
    h1: Option<usize>,
    k: Option<usize>,
    l: Option<usize>,
    variant: Option<&str>,
) -> Result<Value> {
    let id = FamilyId::parse(family)?;
    let inst = match id {
        FamilyId::ShiftedStandard => families::shifted_standard(need(d, "d", id)?, need(e, "e", id)?)?,
        FamilyId::AugmentedStandard => families::augmented_standard(need(d, "d", id)?, need(e, "e", id)?)?,
        FamilyId::Circulant => families::circulant(need(d, "d", id)?, need(m, "m", id)?)?,
        FamilyId::SimplicialLb => families::simplicial_lb(need(d, "d", id)?, need(h1, "h1", id)?)?,
        FamilyId::Vol4 => families::vol4_family(need(k, "k", id)?, need(l, "l", id)?)?,
        FamilyId::Vol5a | FamilyId::Vol5b | FamilyId::Vol5c => {
            let implied = match id {
                FamilyId::Vol5a => Vol5Variant::A,
                FamilyId::Vol5b => Vol5Variant::B,
                _ => Vol5Variant::C,
            };
            if let Some(v) = variant {
                if Vol5Variant::parse(v)? != implied {
                    return Err(Error::Domain(format!("--variant {v} contradicts family {id}")));
                }
            }
            families::vol5_family(need(k, "k", id)?, need(l, "l", id)?, implied)?
        }
    };
    Ok(serde_json::from_str(&inst.to_json()).expect("valid JSON"))
}

fn classify_command(d_max: usize, vol: u64, budget: u64) -> Result<Value> {
    Ok(to_value(&classify::classification_report_with_budget(d_max, vol, budget)?))
}

fn parse_sequence(text: &str) -> Result<Vec<u64>> {
    let trimmed = text.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    trimmed
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Format(format!("{x:?} in --delta is not a nonnegative integer")))
        })
        .collect()
}

fn search_command(delta: &str, budget: u64) -> Result<Value> {
    let candidate = Candidate::new(parse_sequence(delta)?)?;
    if candidate.volume > classify::MAX_VOLUME {
        return Err(Error::Unsupported(format!(
            "volume {} outside 1..={}",
            candidate.volume,
            classify::MAX_VOLUME
        )));
    }
    let result = classify::search_realization(&candidate, budget)?;
    if let Some(s) = &result.search {
        if result.status == RealizationStatus::Unrealized && !s.complete {
            return Err(Error::Budget(format!(
                "examined {} of {} simplices without a match",
                s.examined, s.space
            )));
        }
    }
    Ok(to_value(&result))
}

pub fn execute(command: &Command) -> Result<Value> {
    match command {
        Command::Delta { input, method } => delta_command(input, *method),
        Command::Facets { input } => facets_command(input),
        Command::Hvector { input } => hvector_command(input),
        Command::Check { input } => check_command(input),
        Command::Generate { family, d, e, m, h1, k, l, variant } => {
            generate_command(family, *d, *e, *m, *h1, *k, *l, variant.as_deref())
        }
        Command::Classify { d_max, vol, budget } => classify_command(*d_max, *vol, *budget),
        Command::SearchRealize { delta, budget } => search_command(delta, *budget),
    }
}

fn render_human(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_human(v, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_human(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{key}: {}\n", inline(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if item.is_object() {
                    out.push_str(&format!("{pad}-\n"));
                    render_human(item, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("({})", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn error_record(err: &Error) -> String {
    json!({"error": {"kind": err.kind(), "message": err.to_string()}}).to_string()
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Domain(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn emit(cli: &Cli, value: &Value) -> Result<()> {
    let text = if cli.human {
        let mut s = String::new();
        render_human(value, 0, &mut s);
        s
    } else {
        format!("{value}\n")
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            println!("{}", json!({"error": {"kind": "usage", "message": first}}));
            return 2;
        }
    };
    let outcome = configure_threads()
        .and_then(|()| execute(&cli.command))
        .and_then(|value| emit(&cli, &value));
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            println!("{}", error_record(&err));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sequences() {
        assert_eq!(parse_sequence("1,0,1,0").unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(parse_sequence("[1, 1]").unwrap(), vec![1, 1]);
        assert!(parse_sequence("1,x").is_err());
    }

    #[test]
    fn human_rendering_is_flat_text() {
        let mut s = String::new();
        render_human(&json!({"delta": [1, 0, 1], "properties": {"hibi": true}}), 0, &mut s);
        assert_eq!(s, "delta: (1, 0, 1)\nproperties:\n  hibi: true\n");
    }

    #[test]
    fn error_record_is_single_line() {
        let rec = error_record(&Error::Format("vertex 0 is bad".into()));
        assert!(!rec.contains('\n'));
        let v: Value = serde_json::from_str(&rec).unwrap();
        assert_eq!(v["error"]["kind"], "format");
    }

    #[test]
    fn generate_requires_parameters() {
        let err = generate_command("circulant", Some(7), None, None, None, None, None, None).unwrap_err();
        assert_eq!(err.kind(), "domain");
        let err = generate_command("vol5a", None, None, None, None, Some(0), Some(1), Some("b")).unwrap_err();
        assert_eq!(err.kind(), "domain");
    }
}
