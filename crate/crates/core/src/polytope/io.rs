//! JSON vertex files: `{"ambient_dim": N, "vertices": [[...], ...], "name": "..."}`.

use serde::Serialize;
use serde_json::Value;

use super::LatticePolytope;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexFile {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn integer(v: &Value, what: &str) -> Result<i64> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| Error::Format(format!("{what} must be an integer, got {n}"))),
        other => Err(Error::Format(format!("{what} must be an integer, got {other}"))),
    }
}

impl VertexFile {
    /// Parses a vertex document. Extra top-level fields are ignored; any
    /// non-integer coordinate is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Format("vertex file must be a JSON object".into()))?;

        let ambient = obj
            .get("ambient_dim")
            .ok_or_else(|| Error::Format("missing field ambient_dim".into()))?;
        let ambient_dim = usize::try_from(integer(ambient, "ambient_dim")?)
            .map_err(|_| Error::Format("ambient_dim must be nonnegative".into()))?;

        let rows = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("missing or non-array field vertices".into()))?;
        let mut vertices = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let coords = row
                .as_array()
                .ok_or_else(|| Error::Format(format!("vertex {i} is not an array")))?;
            let v = coords
                .iter()
                .enumerate()
                .map(|(k, c)| integer(c, &format!("coordinate {k} of vertex {i}")))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != ambient_dim {
                return Err(Error::Format(format!(
                    "vertex {i} has {} coordinates, expected {ambient_dim}",
                    v.len()
                )));
            }
            vertices.push(v);
        }

        let name = match obj.get("name") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => return Err(Error::Format(format!("name must be a string, got {other}"))),
        };
        Ok(Self { ambient_dim, vertices, name })
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        LatticePolytope::new(self.ambient_dim, self.vertices.clone(), self.name.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl From<&LatticePolytope> for VertexFile {
    fn from(p: &LatticePolytope) -> Self {
        Self {
            ambient_dim: p.ambient_dim(),
            vertices: p.vertices().to_vec(),
            name: p.name().map(str::to_owned),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_file() {
        let f = VertexFile::parse(r#"{"ambient_dim": 2, "vertices": [[0,0],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(f.vertices.len(), 3);
        assert_eq!(f.name, None);
    }

    #[test]
    fn rejects_fractional_literal() {
        let err = VertexFile::parse(r#"{"ambient_dim": 2, "vertices": [[0,0],[1.5,0],[0,1]]}"#).unwrap_err();
        assert_eq!(err.kind(), "format");
        let err = VertexFile::parse(r#"{"ambient_dim": 1, "vertices": [[1.0]]}"#).unwrap_err();
        assert_eq!(err.kind(), "format");
    }

    #[test]
    fn rejects_malformed_documents() {
        for text in [
            "[1,2]",
            r#"{"vertices": [[0]]}"#,
            r#"{"ambient_dim": 2, "vertices": [[0,0],[1]]}"#,
            r#"{"ambient_dim": 1, "vertices": [["1"]]}"#,
            r#"{"ambient_dim": 1, "vertices": [[1]], "name": 3}"#,
            "not json",
        ] {
            assert!(VertexFile::parse(text).is_err(), "{text}");
        }
    }

    proptest! {
        #[test]
        fn json_round_trip(
            verts in prop::collection::vec(prop::collection::vec(-1000i64..1000, 3), 1..6),
            name in prop::option::of("[a-z0-9 ()=,]{0,12}"),
        ) {
            let f = VertexFile { ambient_dim: 3, vertices: verts, name };
            prop_assert_eq!(VertexFile::parse(&f.to_json()).unwrap(), f);
        }
    }
}
