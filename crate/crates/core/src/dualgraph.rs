//! Weighted dual graphs of curve configurations with simple normal
//! crossings: blow-ups, blow-downs and the search for a contraction onto a
//! smooth fiber.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertex {0} already exists")]
    NameCollision(String),
    #[error("no edge between {0} and {1}")]
    UnknownEdge(String, String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("{name} has weight {weight}, only (-1)-curves can be contracted")]
    NotMinusOne { name: String, weight: i64 },
    #[error("{name} meets {count} other curves, contracting it would break normal crossings")]
    TooManyNeighbors { name: String, count: usize },
    #[error("{0} meets {1} more than once")]
    MultipleIntersection(String, String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Vertices are curves weighted by self-intersection; an edge of
/// multiplicity `m` records `m` transversal intersection points.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedCurveGraph {
    weights: BTreeMap<String, i64>,
    edges: BTreeMap<(String, String), usize>,
}

impl WeightedCurveGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str, weight: i64) -> Result<(), GraphError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("bad vertex name {name:?}"),
            });
        }
        if self.weights.contains_key(name) {
            return Err(GraphError::NameCollision(name.to_string()));
        }
        self.weights.insert(name.to_string(), weight);
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        self.require(a)?;
        self.require(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        *self.edges.entry(key(a, b)).or_insert(0) += 1;
        Ok(())
    }

    /// Builds a graph from `(name, weight)` pairs and an edge list.
    pub fn from_parts(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for (n, w) in vertices {
            g.add_vertex(n, *w)?;
        }
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    fn require(&self, name: &str) -> Result<(), GraphError> {
        if self.weights.contains_key(name) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(name.to_string()))
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, name: &str) -> Option<i64> {
        self.weights.get(name).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, i64)> {
        self.weights.iter().map(|(n, w)| (n.as_str(), *w))
    }

    /// Edges as `(a, b, multiplicity)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.edges.iter().map(|((a, b), m)| (a.as_str(), b.as_str(), *m))
    }

    pub fn edge_multiplicity(&self, a: &str, b: &str) -> usize {
        self.edges.get(&key(a, b)).copied().unwrap_or(0)
    }

    /// Neighbors with the number of intersection points.
    pub fn neighbors(&self, name: &str) -> Vec<(&str, usize)> {
        self.edges
            .iter()
            .filter_map(|((a, b), m)| {
                if a == name {
                    Some((b.as_str(), *m))
                } else if b == name {
                    Some((a.as_str(), *m))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Number of intersection points on the curve.
    pub fn degree(&self, name: &str) -> usize {
        self.neighbors(name).iter().map(|(_, m)| m).sum()
    }

    fn fresh(&self, name: &str) -> Result<(), GraphError> {
        if self.weights.contains_key(name) {
            Err(GraphError::NameCollision(name.to_string()))
        } else {
            Ok(())
        }
    }

    /// Blows up a point lying on `curve` only.
    pub fn blow_up_on_curve(&self, curve: &str, new_name: &str) -> Result<Self, GraphError> {
        self.require(curve)?;
        self.fresh(new_name)?;
        let mut g = self.clone();
        *g.weights.get_mut(curve).unwrap() -= 1;
        g.add_vertex(new_name, -1)?;
        g.add_edge(curve, new_name)?;
        Ok(g)
    }

    /// Blows up one intersection point of `a` and `b`.
    pub fn blow_up_on_intersection(&self, a: &str, b: &str, new_name: &str) -> Result<Self, GraphError> {
        self.require(a)?;
        self.require(b)?;
        if self.edge_multiplicity(a, b) == 0 {
            return Err(GraphError::UnknownEdge(a.to_string(), b.to_string()));
        }
        self.fresh(new_name)?;
        let mut g = self.clone();
        let k = key(a, b);
        let m = g.edges.get_mut(&k).unwrap();
        *m -= 1;
        if *m == 0 {
            g.edges.remove(&k);
        }
        *g.weights.get_mut(a).unwrap() -= 1;
        *g.weights.get_mut(b).unwrap() -= 1;
        g.add_vertex(new_name, -1)?;
        g.add_edge(a, new_name)?;
        g.add_edge(b, new_name)?;
        Ok(g)
    }

    /// Contracts a (−1)-curve meeting at most two other curves, each once.
    pub fn blow_down(&self, curve: &str) -> Result<Self, GraphError> {
        let w = self
            .weight(curve)
            .ok_or_else(|| GraphError::UnknownVertex(curve.to_string()))?;
        if w != -1 {
            return Err(GraphError::NotMinusOne {
                name: curve.to_string(),
                weight: w,
            });
        }
        let nbrs: Vec<(String, usize)> = self
            .neighbors(curve)
            .into_iter()
            .map(|(n, m)| (n.to_string(), m))
            .collect();
        if let Some((n, _)) = nbrs.iter().find(|(_, m)| *m > 1) {
            return Err(GraphError::MultipleIntersection(curve.to_string(), n.clone()));
        }
        if nbrs.len() > 2 {
            return Err(GraphError::TooManyNeighbors {
                name: curve.to_string(),
                count: nbrs.len(),
            });
        }
        let mut g = self.clone();
        g.weights.remove(curve);
        g.edges.retain(|(a, b), _| a != curve && b != curve);
        for (n, _) in &nbrs {
            *g.weights.get_mut(n).unwrap() += 1;
        }
        if let [(a, _), (b, _)] = nbrs.as_slice() {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// The induced subgraph without the given vertices.
    pub fn without(&self, names: &[&str]) -> Result<Self, GraphError> {
        for n in names {
            self.require(n)?;
        }
        let drop: BTreeSet<&str> = names.iter().copied().collect();
        let mut g = self.clone();
        g.weights.retain(|n, _| !drop.contains(n.as_str()));
        g.edges
            .retain(|(a, b), _| !drop.contains(a.as_str()) && !drop.contains(b.as_str()));
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.weights.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start.as_str()]);
        let mut stack = vec![start.as_str()];
        while let Some(v) = stack.pop() {
            for (n, _) in self.neighbors(v) {
                if seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen.len() == self.len()
    }

    /// Connected, with exactly `|V| − 1` intersection points.
    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.edges.values().sum::<usize>() + 1 == self.len()
    }

    pub fn is_chain(&self) -> bool {
        self.is_tree() && self.weights.keys().all(|v| self.degree(v) <= 2)
    }

    /// Searches all orders of contracting (−1)-curves for one ending at a
    /// single curve of self-intersection 0.
    pub fn can_contract_to_fiber(&self) -> ContractionSearch {
        let mut visited = BTreeSet::new();
        let mut trace = Vec::new();
        let mut explored = 0;
        let found = self.contract_dfs(&mut visited, &mut trace, &mut explored);
        ContractionSearch {
            contractible: found,
            trace: if found { trace } else { Vec::new() },
            states_explored: explored,
        }
    }

    fn contract_dfs(
        &self,
        visited: &mut BTreeSet<WeightedCurveGraph>,
        trace: &mut Vec<String>,
        explored: &mut usize,
    ) -> bool {
        if !visited.insert(self.clone()) {
            return false;
        }
        *explored += 1;
        if self.len() == 1 {
            return self.weights.values().next() == Some(&0);
        }
        // components of a reducible fiber have negative self-intersection
        // and its dual graph is a tree
        if self.weights.values().any(|w| *w >= 0) || !self.is_tree() {
            return false;
        }
        let candidates: Vec<String> = self
            .weights
            .iter()
            .filter(|(_, w)| **w == -1)
            .map(|(n, _)| n.clone())
            .collect();
        for c in candidates {
            if let Ok(next) = self.blow_down(&c) {
                trace.push(c);
                if next.contract_dfs(visited, trace, explored) {
                    return true;
                }
                trace.pop();
            }
        }
        false
    }

    /// Reads the `vertex NAME WEIGHT` / `edge A B` text format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut g = Self::new();
        let at = |line: usize, e: GraphError| match e {
            GraphError::Parse { msg, .. } => GraphError::Parse { line, msg },
            other => GraphError::Parse {
                line,
                msg: other.to_string(),
            },
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks.as_slice() {
                ["vertex", name, weight] => {
                    let w: i64 = weight.parse().map_err(|_| GraphError::Parse {
                        line,
                        msg: format!("bad weight {weight:?}"),
                    })?;
                    g.add_vertex(name, w).map_err(|e| at(line, e))?;
                }
                ["edge", a, b] => g.add_edge(a, b).map_err(|e| at(line, e))?,
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("expected `vertex NAME WEIGHT` or `edge A B`, got {content:?}"),
                    })
                }
            }
        }
        Ok(g)
    }
}

impl fmt::Display for WeightedCurveGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, w) in &self.weights {
            writeln!(f, "vertex {n} {w}")?;
        }
        for ((a, b), m) in &self.edges {
            for _ in 0..*m {
                writeln!(f, "edge {a} {b}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionSearch {
    pub contractible: bool,
    /// Curves contracted, in order, when `contractible`.
    pub trace: Vec<String>,
    pub states_explored: usize,
}

pub const F_INF: &str = "Finf";
pub const D: &str = "D";
pub const F0: &str = "F0";
pub const E_M1: &str = "E-1";
pub const E_M4: &str = "E-4";
/// Closures of the four lines of the special fiber, `C̄_α` for α = 1, −1, 2, −2.
pub const C_BAR: [&str; 4] = ["C1", "C-1", "C2", "C-2"];

/// Starts from the section `D` (weight `−n`) of a Hirzebruch surface with
/// fibers `F₀`, `F∞`, blows up two points of `F₀`, then two points on each
/// of the resulting exceptional curves.
pub fn build_paper_compactification(n: u32) -> WeightedCurveGraph {
    let g = WeightedCurveGraph::from_parts(&[(F_INF, 0), (D, -i64::from(n)), (F0, 0)], &[(D, F0), (D, F_INF)])
        .expect("static graph");
    let g = g.blow_up_on_curve(F0, E_M1).unwrap();
    let g = g.blow_up_on_curve(F0, E_M4).unwrap();
    let g = g.blow_up_on_curve(E_M1, C_BAR[0]).unwrap();
    let g = g.blow_up_on_curve(E_M1, C_BAR[1]).unwrap();
    let g = g.blow_up_on_curve(E_M4, C_BAR[2]).unwrap();
    g.blow_up_on_curve(E_M4, C_BAR[3]).unwrap()
}

/// The boundary divisor: the compactification minus the `C̄_α`.
pub fn boundary_graph(n: u32) -> WeightedCurveGraph {
    build_paper_compactification(n).without(&C_BAR).unwrap()
}

/// The three candidate fibers through `D′` when the pencil meets `D`
/// transversally, with `D′` of weight 0, 0 and −1.
pub fn transversal_case_graphs() -> [(&'static str, WeightedCurveGraph); 3] {
    let case = |d: i64| {
        WeightedCurveGraph::from_parts(
            &[("D'", d), ("F0'", -2), ("E'-1", -3), ("E'-4", -3)],
            &[("D'", "F0'"), ("F0'", "E'-1"), ("F0'", "E'-4")],
        )
        .unwrap()
    };
    [
        ("base-point-on-D", case(0)),
        ("base-point-off-D", case(0)),
        ("base-point-iterated", case(-1)),
    ]
}
