//! Sequential measurements as an oriented branching forest.
//!
//! Each measurement contributes one layer: a vertex per branch of the measured
//! wavefunction, hanging from the vertex it was attached at, with edges
//! weighted by Born probability. The first measurement of a chain hangs from
//! a synthetic root `<measurement>:*` standing for the unmeasured state.
//!
//! Every vertex has at most one parent, so the path between two vertices is
//! unique and the distance between them is the product of its edge weights.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::collapse::CollapseRecord;
use crate::error::{Error, Result};
use crate::state::WaveFunction;
use crate::tolerance::Tolerances;

/// Label of the synthetic vertex a chain starts from.
pub const ROOT_LABEL: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub measurement_id: String,
    pub label: String,
}

impl VertexId {
    pub fn new(measurement_id: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            measurement_id: measurement_id.into(),
            label: label.into(),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.measurement_id, self.label)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Vertex {
    id: VertexId,
    realized: bool,
    parent: Option<usize>,
    /// Weight of the edge from `parent`.
    weight: f64,
    expanded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchGraph {
    vertices: Vec<Vertex>,
    index: HashMap<VertexId, usize>,
    edges: Vec<Edge>,
    roots: Vec<usize>,
    measurements: HashSet<String>,
    tol: Tolerances,
}

/// Probability of following `r` then `s`.
pub fn compose(r: f64, s: f64) -> f64 {
    r * s
}

/// Product of `weights` carried in double-double and rounded once, so long
/// paths stay within an ulp of the exact product.
fn path_product(weights: impl Iterator<Item = f64>) -> f64 {
    let (mut hi, mut lo) = (1.0f64, 0.0f64);
    for w in weights {
        let p = hi * w;
        let err = hi.mul_add(w, -p);
        lo = lo.mul_add(w, err);
        hi = p;
    }
    hi + lo
}

impl BranchGraph {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            roots: Vec::new(),
            measurements: HashSet::new(),
            tol,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().map(|v| &v.id)
    }

    pub fn roots(&self) -> impl Iterator<Item = &VertexId> {
        self.roots.iter().map(|&i| &self.vertices[i].id)
    }

    pub fn contains(&self, id: &VertexId) -> bool {
        self.index.contains_key(id)
    }

    pub fn is_realized(&self, id: &VertexId) -> Result<bool> {
        Ok(self.vertices[self.lookup(id)?].realized)
    }

    /// Vertices that have not been measured further.
    pub fn leaves(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|v| !v.expanded).map(|v| &v.id)
    }

    pub fn children(&self, id: &VertexId) -> Result<Vec<&VertexId>> {
        let i = self.lookup(id)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.from == i)
            .map(|e| &self.vertices[e.to].id)
            .collect())
    }

    fn lookup(&self, id: &VertexId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    fn push_vertex(&mut self, v: Vertex) -> usize {
        let i = self.vertices.len();
        self.index.insert(v.id.clone(), i);
        self.vertices.push(v);
        i
    }

    /// Adds the layer produced by `record` (a measurement of `source`) below
    /// `attach_at`, or below a fresh root when `attach_at` is `None`.
    pub fn extend(
        &self,
        record: &CollapseRecord,
        source: &WaveFunction,
        attach_at: Option<&VertexId>,
    ) -> Result<BranchGraph> {
        let mid = &record.measurement_id;
        let parent = match attach_at {
            Some(at) => {
                let i = self.lookup(at)?;
                if at.measurement_id == *mid {
                    return Err(Error::CycleAttempt(mid.clone()));
                }
                if self.vertices[i].expanded {
                    return Err(Error::AlreadyExpanded(at.to_string()));
                }
                Some(i)
            }
            None => None,
        };
        if self.measurements.contains(mid) {
            return Err(Error::DuplicateMeasurement(mid.clone()));
        }
        if source.branch(&record.realized_label).is_none() {
            return Err(Error::UnknownLabel(record.realized_label.clone()));
        }

        let mut g = self.clone();
        g.measurements.insert(mid.clone());
        let from = match parent {
            Some(i) => i,
            None => {
                let root = g.push_vertex(Vertex {
                    id: VertexId::new(mid.clone(), ROOT_LABEL),
                    realized: true,
                    parent: None,
                    weight: 1.0,
                    expanded: false,
                });
                g.roots.push(root);
                root
            }
        };
        g.vertices[from].expanded = true;
        for b in &source.branches {
            let weight = b.born_probability();
            let to = g.push_vertex(Vertex {
                id: VertexId::new(mid.clone(), b.label.clone()),
                realized: b.label == record.realized_label,
                parent: Some(from),
                weight,
                expanded: false,
            });
            g.edges.push(Edge { from, to, weight });
        }
        Ok(g)
    }

    /// Indices on the path from `from` down to `to`, `to` first. `None` when
    /// `to` does not descend from `from`.
    fn path_up(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = self.vertices[cur].parent?;
            path.push(cur);
        }
        Some(path)
    }

    /// Product of edge weights along the directed path `from → to`, i.e. the
    /// probability of reaching `to` given that `from` was reached.
    pub fn distance(&self, from: &VertexId, to: &VertexId) -> Result<f64> {
        let (f, t) = (self.lookup(from)?, self.lookup(to)?);
        let path = self.path_up(f, t).ok_or_else(|| Error::Unreachable {
            from: from.to_string(),
            to: to.to_string(),
        })?;
        Ok(path_product(
            path[..path.len() - 1]
                .iter()
                .rev()
                .map(|&v| self.vertices[v].weight),
        ))
    }

    /// A non-empty directed path of non-absurd edges leads `from → to`.
    pub fn transitive_possibility(&self, from: &VertexId, to: &VertexId) -> Result<bool> {
        let (f, t) = (self.lookup(from)?, self.lookup(to)?);
        if f == t {
            return Ok(false);
        }
        Ok(self.path_up(f, t).is_some_and(|path| {
            path[..path.len() - 1]
                .iter()
                .all(|&v| !self.tol.is_zero(self.vertices[v].weight))
        }))
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            vertices: self
                .vertices
                .iter()
                .map(|v| ExportVertex {
                    id: v.id.to_string(),
                    measurement_id: v.id.measurement_id.clone(),
                    label: v.id.label.clone(),
                    realized: v.realized,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| ExportEdge {
                    from: self.vertices[e.from].id.to_string(),
                    to: self.vertices[e.to].id.to_string(),
                    weight: e.weight,
                })
                .collect(),
            roots: self.roots().map(ToString::to_string).collect(),
        }
    }

    /// Graphviz rendering; realized vertices are drawn bold, absurd edges
    /// dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph branches {\n  rankdir=LR;\n");
        for v in &self.vertices {
            let style = if v.realized { ", style=bold" } else { "" };
            let _ = writeln!(out, "  \"{}\" [label=\"{}\"{}];", v.id, v.id.label, style);
        }
        for e in &self.edges {
            let dash = if self.tol.is_zero(e.weight) {
                ", style=dashed"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"{}];",
                self.vertices[e.from].id, self.vertices[e.to].id, e.weight, dash
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Edge-list form of a [`BranchGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphExport {
    pub vertices: Vec<ExportVertex>,
    pub edges: Vec<ExportEdge>,
    pub roots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportVertex {
    pub id: String,
    pub measurement_id: String,
    pub label: String,
    pub realized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportEdge {
    pub from: String,
    pub to: String,
    pub weight: f64,
}
