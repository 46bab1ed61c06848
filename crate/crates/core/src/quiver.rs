//! Quivers, quiver specifications with relations and marked arrows, and the
//! on-disk spec format.
//!
//! # Spec file format
//!
//! A quiver spec is a TOML document:
//!
//! ```toml
//! field = "Q"            # or "GF(p)" with p prime
//! vertices = ["1", "2", "3"]
//! length_cap = 8         # optional, default 8
//!
//! [[arrows]]
//! name = "a"
//! source = "1"
//! target = "2"
//!
//! [[arrows]]
//! name = "b"
//! source = "2"
//! target = "3"
//!
//! # A relation is a linear combination of parallel paths of length >= 2.
//! # A path lists arrow names in traversal order: ["a", "b"] is the path
//! # that first traverses a, then b.
//! [[relations]]
//! terms = [{ coeff = "1", path = ["a", "b"] }]
//!
//! marked = ["b"]         # optional, default empty
//! ```
//!
//! Coefficients are written as integers or fractions (`"-3/2"`), interpreted
//! in the declared field.

use crate::scalar::{Field, Scalar};
use serde::Deserialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver: named vertices and named arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// True iff the arrow digraph contains a directed cycle.
    pub fn has_oriented_cycle(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.vertices.len();
        let mut color = vec![0u8; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arrows {
            out[a.source].push(a.target);
        }
        fn dfs(v: usize, color: &mut [u8], out: &[Vec<usize>]) -> bool {
            color[v] = 1;
            for &w in &out[v] {
                match color[w] {
                    0 => {
                        if dfs(w, color, out) {
                            return true;
                        }
                    }
                    1 => return true,
                    _ => {}
                }
            }
            color[v] = 2;
            false
        }
        (0..n).any(|v| color[v] == 0 && dfs(v, &mut color, &out))
    }
}

/// A path in a quiver. `arrows` lists arrow indices in traversal order;
/// an empty list is the trivial path at `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `next` (requires `self.target == next.source`).
    pub fn then(&self, next: &Path) -> Option<Path> {
        if self.target != next.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Some(Path {
            source: self.source,
            target: next.target,
            arrows,
        })
    }

    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// One term of a relation: a coefficient and a path (arrow indices in
/// traversal order).
#[derive(Clone, Debug)]
pub struct RelationTerm {
    pub coeff: Scalar,
    pub path: Path,
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
}

impl Relation {
    pub fn source(&self) -> usize {
        self.terms[0].path.source
    }
    pub fn target(&self) -> usize {
        self.terms[0].path.target
    }
}

/// A validated quiver specification: quiver, admissible relation generators,
/// marked arrow subset, coefficient field, and path-length cap.
#[derive(Clone, Debug)]
pub struct QuiverSpec {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub marked: Vec<usize>,
    pub field: Field,
    pub length_cap: usize,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("toml parse error: {0}")]
    Toml(String),
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> SpecError {
    SpecError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    field: String,
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<RawRelation>,
    #[serde(default)]
    marked: Vec<String>,
    #[serde(default)]
    length_cap: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    source: String,
    target: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(default = "default_coeff")]
    coeff: String,
    path: Vec<String>,
}

fn default_coeff() -> String {
    "1".to_string()
}

impl QuiverSpec {
    /// Parses and validates a spec document. Parse errors cite the line,
    /// validation errors cite the offending field.
    pub fn parse(text: &str) -> Result<QuiverSpec, SpecError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError::Toml(e.to_string()))?;
        let field = Field::parse(&raw.field).map_err(|m| invalid("field", m))?;
        let mut vertices = Vec::new();
        for v in &raw.vertices {
            if vertices.contains(v) {
                return Err(invalid("vertices", format!("duplicate vertex `{v}`")));
            }
            vertices.push(v.clone());
        }
        if vertices.is_empty() {
            return Err(invalid("vertices", "at least one vertex required"));
        }
        let mut arrows = Vec::new();
        for a in &raw.arrows {
            if arrows.iter().any(|x: &Arrow| x.name == a.name) {
                return Err(invalid("arrows", format!("duplicate arrow name `{}`", a.name)));
            }
            let source = vertices
                .iter()
                .position(|v| *v == a.source)
                .ok_or_else(|| invalid("arrows", format!("arrow `{}`: unknown source vertex `{}`", a.name, a.source)))?;
            let target = vertices
                .iter()
                .position(|v| *v == a.target)
                .ok_or_else(|| invalid("arrows", format!("arrow `{}`: unknown target vertex `{}`", a.name, a.target)))?;
            arrows.push(Arrow {
                name: a.name.clone(),
                source,
                target,
            });
        }
        let quiver = Quiver { vertices, arrows };
        let mut relations = Vec::new();
        for (ri, r) in raw.relations.iter().enumerate() {
            let ctx = format!("relations[{ri}]");
            if r.terms.is_empty() {
                return Err(invalid(&ctx, "relation has no terms"));
            }
            let mut terms = Vec::new();
            for t in &r.terms {
                let coeff = Scalar::parse(field, &t.coeff).map_err(|m| invalid(&ctx, m))?;
                if t.path.len() < 2 {
                    return Err(invalid(
                        &ctx,
                        format!("path {:?} has length {} < 2 (admissibility)", t.path, t.path.len()),
                    ));
                }
                let mut idx = Vec::new();
                for name in &t.path {
                    let k = quiver
                        .arrow_index(name)
                        .ok_or_else(|| invalid(&ctx, format!("unknown arrow `{name}` in path")))?;
                    idx.push(k);
                }
                for w in idx.windows(2) {
                    let (x, y) = (&quiver.arrows[w[0]], &quiver.arrows[w[1]]);
                    if x.target != y.source {
                        return Err(invalid(
                            &ctx,
                            format!(
                                "path not composable at arrow pair `{}`, `{}` (target {} != source {})",
                                x.name, y.name, quiver.vertices[x.target], quiver.vertices[y.source]
                            ),
                        ));
                    }
                }
                let path = Path {
                    source: quiver.arrows[idx[0]].source,
                    target: quiver.arrows[*idx.last().unwrap()].target,
                    arrows: idx,
                };
                terms.push(RelationTerm { coeff, path });
            }
            let (s0, t0) = (terms[0].path.source, terms[0].path.target);
            for t in &terms[1..] {
                if t.path.source != s0 || t.path.target != t0 {
                    return Err(invalid(&ctx, "relation terms are not parallel paths"));
                }
            }
            relations.push(Relation { terms });
        }
        let mut marked = Vec::new();
        for name in &raw.marked {
            let k = quiver
                .arrow_index(name)
                .ok_or_else(|| invalid("marked", format!("unknown arrow `{name}`")))?;
            if marked.contains(&k) {
                return Err(invalid("marked", format!("duplicate marked arrow `{name}`")));
            }
            marked.push(k);
        }
        marked.sort_unstable();
        let length_cap = raw.length_cap.unwrap_or(8);
        if length_cap < 1 {
            return Err(invalid("length_cap", "must be >= 1"));
        }
        Ok(QuiverSpec {
            quiver,
            relations,
            marked,
            field,
            length_cap,
        })
    }

    pub fn parse_file(path: &std::path::Path) -> Result<QuiverSpec, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("input", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serializes back to the spec file format (used by the surgery command).
    pub fn to_toml_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("field = \"{}\"\n", self.field));
        let verts: Vec<String> = self
            .quiver
            .vertices
            .iter()
            .map(|v| format!("\"{v}\""))
            .collect();
        s.push_str(&format!("vertices = [{}]\n", verts.join(", ")));
        s.push_str(&format!("length_cap = {}\n", self.length_cap));
        let marks: Vec<String> = self
            .marked
            .iter()
            .map(|&k| format!("\"{}\"", self.quiver.arrows[k].name))
            .collect();
        s.push_str(&format!("marked = [{}]\n", marks.join(", ")));
        for a in &self.quiver.arrows {
            s.push_str(&format!(
                "\n[[arrows]]\nname = \"{}\"\nsource = \"{}\"\ntarget = \"{}\"\n",
                a.name, self.quiver.vertices[a.source], self.quiver.vertices[a.target]
            ));
        }
        for r in &self.relations {
            let terms: Vec<String> = r
                .terms
                .iter()
                .map(|t| {
                    let names: Vec<String> = t
                        .path
                        .arrows
                        .iter()
                        .map(|&k| format!("\"{}\"", self.quiver.arrows[k].name))
                        .collect();
                    format!("{{ coeff = \"{}\", path = [{}] }}", t.coeff, names.join(", "))
                })
                .collect();
            s.push_str(&format!("\n[[relations]]\nterms = [{}]\n", terms.join(", ")));
        }
        s
    }

    /// All paths of length at most `max_len`, ordered by (length, lexicographic
    /// arrow sequence). Trivial paths come first in vertex order.
    pub fn paths_up_to(quiver: &Quiver, max_len: usize, budget: usize) -> Result<Vec<Path>, SpecError> {
        let mut all: Vec<Path> = (0..quiver.vertices.len()).map(Path::trivial).collect();
        let mut frontier: Vec<Path> = all.clone();
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for (k, a) in quiver.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(k);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            next.sort_by(|x, y| x.arrows.cmp(&y.arrows));
            all.extend(next.iter().cloned());
            if all.len() > budget {
                return Err(invalid(
                    "length_cap",
                    format!("path enumeration exceeded budget ({} paths)", budget),
                ));
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const A2: &str = r#"
field = "Q"
vertices = ["1", "2"]
marked = ["a"]

[[arrows]]
name = "a"
source = "1"
target = "2"
"#;

    #[test]
    fn parse_a2() {
        let spec = QuiverSpec::parse(A2).unwrap();
        assert_eq!(spec.quiver.vertices.len(), 2);
        assert_eq!(spec.quiver.arrows.len(), 1);
        assert_eq!(spec.marked, vec![0]);
        assert_eq!(spec.field, Field::Rational);
        assert_eq!(spec.length_cap, 8);
    }

    #[test]
    fn cycles() {
        let a2 = QuiverSpec::parse(A2).unwrap();
        assert!(!a2.quiver.has_oriented_cycle());

        let loop_q = Quiver {
            vertices: vec!["1".into()],
            arrows: vec![Arrow {
                name: "x".into(),
                source: 0,
                target: 0,
            }],
        };
        assert!(loop_q.has_oriented_cycle());

        let two_cycle = Quiver {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![
                Arrow {
                    name: "a".into(),
                    source: 0,
                    target: 1,
                },
                Arrow {
                    name: "b".into(),
                    source: 1,
                    target: 0,
                },
            ],
        };
        assert!(two_cycle.has_oriented_cycle());
    }

    #[test]
    fn malformed_relation_cites_arrow_pair() {
        let text = r#"
field = "Q"
vertices = ["1", "2", "3"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "2"
target = "3"

[[relations]]
terms = [{ coeff = "1", path = ["b", "a"] }]
"#;
        let err = QuiverSpec::parse(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("`b`") && msg.contains("`a`"), "{msg}");
        assert!(msg.contains("not composable"), "{msg}");
    }

    #[test]
    fn short_relation_rejected() {
        let text = r#"
field = "Q"
vertices = ["1"]

[[arrows]]
name = "x"
source = "1"
target = "1"

[[relations]]
terms = [{ coeff = "1", path = ["x"] }]
"#;
        let err = QuiverSpec::parse(text).unwrap_err();
        assert!(err.to_string().contains("length 1 < 2"));
    }

    #[test]
    fn toml_line_in_parse_error() {
        let text = "field = \"Q\"\nvertices = [\"1\"\n";
        let err = QuiverSpec::parse(text).unwrap_err();
        assert!(matches!(err, SpecError::Toml(_)));
    }

    #[test]
    fn paths_of_linear_quiver() {
        let text = r#"
field = "Q"
vertices = ["1", "2", "3"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "2"
target = "3"
"#;
        let spec = QuiverSpec::parse(text).unwrap();
        let paths = QuiverSpec::paths_up_to(&spec.quiver, 5, 10_000).unwrap();
        // e1, e2, e3, a, b, ab  (traversal order: a then b)
        assert_eq!(paths.len(), 6);
        assert_eq!(paths[5].arrows, vec![0, 1]);
        assert_eq!(paths[5].label(&spec.quiver), "a*b");
    }

    #[test]
    fn roundtrip_through_toml() {
        let spec = QuiverSpec::parse(A2).unwrap();
        let text = spec.to_toml_string();
        let spec2 = QuiverSpec::parse(&text).unwrap();
        assert_eq!(spec2.quiver, spec.quiver);
        assert_eq!(spec2.marked, spec.marked);
    }
}
