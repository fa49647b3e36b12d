//! Colorings, clique-coloring validity and exact solvers.
//!
//! A coloring is valid when no inclusion-maximal clique with at least two
//! vertices is monochromatic. Isolated vertices never matter.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::ops::ControlFlow;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::clique::{for_each_maximal_clique_within, nontrivial_maximal_cliques, Clique};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Total map from vertices `0..n` to color ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Self {
        Self { colors }
    }

    /// Every vertex gets `color`.
    pub fn constant(n: usize, color: u32) -> Self {
        Self { colors: vec![color; n] }
    }

    /// Builds a coloring from a partial assignment, failing on the first gap.
    pub fn from_partial(colors: &[Option<u32>]) -> Result<Self> {
        colors
            .iter()
            .enumerate()
            .map(|(v, c)| c.ok_or(Error::PartialColoring(v + 1)))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn set_color(&mut self, v: usize, color: u32) {
        self.colors[v] = color;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Number of distinct colors used.
    pub fn palette_size(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn max_color(&self) -> Option<u32> {
        self.colors.iter().copied().max()
    }

    /// Color classes in increasing color order.
    pub fn classes(&self) -> Vec<(u32, VertexSet)> {
        let n = self.colors.len();
        let mut map: BTreeMap<u32, VertexSet> = BTreeMap::new();
        for (v, &c) in self.colors.iter().enumerate() {
            map.entry(c).or_insert_with(|| VertexSet::new(n)).insert(v);
        }
        map.into_iter().collect()
    }

    fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.n() {
            return Err(Error::ColoringSize {
                expected: g.n(),
                got: self.colors.len(),
            });
        }
        Ok(())
    }

    /// Parses `vertex color` lines with 1-based vertices; every vertex of
    /// `1..=n` must appear exactly once.
    pub fn read<R: BufRead>(reader: R, n: usize) -> Result<Self> {
        let mut colors = vec![None; n];
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let mut it = text.split_whitespace();
            let (Some(v), Some(c), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err("expected \"vertex color\"".into()));
            };
            let v: usize = v.parse().map_err(|e| parse_err(format!("{e}")))?;
            let c: u32 = c.parse().map_err(|e| parse_err(format!("{e}")))?;
            if v == 0 || v > n {
                return Err(parse_err(format!("vertex {v} out of range 1..={n}")));
            }
            if colors[v - 1].replace(c).is_some() {
                return Err(parse_err(format!("vertex {v} colored twice")));
            }
        }
        Self::from_partial(&colors)
    }

    pub fn load(path: &Path, n: usize) -> Result<Self> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?), n)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "{} {}", v + 1, c);
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Inclusion-maximal cliques of size at least 2 whose vertices share one
/// color, sorted, stopping after `limit` if given.
pub fn monochromatic_maximal_cliques(g: &Graph, c: &Coloring, limit: Option<usize>) -> Result<Vec<Clique>> {
    c.check_covers(g)?;
    let mut out = Vec::new();
    for (_, class) in c.classes() {
        if class.len() < 2 {
            continue;
        }
        let flow = for_each_maximal_clique_within(g, &class, &mut |k: &[usize]| {
            if k.len() >= 2 {
                out.push(Clique::new(k.to_vec()));
                if limit.is_some_and(|l| out.len() >= l) {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// True iff no maximal clique of size at least 2 is monochromatic.
pub fn is_valid(g: &Graph, c: &Coloring) -> Result<bool> {
    Ok(monochromatic_maximal_cliques(g, c, Some(1))?.is_empty())
}

/// Node limit for the exact solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactBudget {
    pub node_limit: u64,
}

impl Default for ExactBudget {
    fn default() -> Self {
        Self { node_limit: 50_000_000 }
    }
}

/// Exact optimum with a witness colored `1..=value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub value: u32,
    pub witness: Coloring,
    pub nodes: u64,
}

/// Exact `χ_c`: enumerates the maximal cliques of size at least 2 once, then
/// finds the smallest palette under which none is monochromatic.
pub fn exact_clique_chromatic_number(g: &Graph, budget: &ExactBudget) -> Result<ExactResult> {
    let edges: Vec<Vec<usize>> = nontrivial_maximal_cliques(g, budget.node_limit)?
        .into_iter()
        .map(|c| c.vertices().to_vec())
        .collect();
    solve_hypergraph(g.n(), &edges, budget.node_limit)
}

/// Exact proper chromatic number `χ`.
pub fn exact_chromatic_number(g: &Graph, budget: &ExactBudget) -> Result<ExactResult> {
    let edges: Vec<Vec<usize>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
    solve_hypergraph(g.n(), &edges, budget.node_limit)
}

/// Smallest `q` such that the vertices admit a `q`-coloring with no
/// monochromatic hyperedge. Vertex 0 is fixed to color 1 and each vertex
/// may open at most one new color; colors are tried in ascending order, so
/// the witness is the lexicographically least valid assignment for `q`.
pub fn solve_hypergraph(n: usize, edges: &[Vec<usize>], node_limit: u64) -> Result<ExactResult> {
    if n == 0 {
        return Ok(ExactResult {
            value: 0,
            witness: Coloring::new(Vec::new()),
            nodes: 0,
        });
    }
    let mut ending: Vec<Vec<&[usize]>> = vec![Vec::new(); n];
    for e in edges {
        if let Some(&last) = e.iter().max() {
            if e.len() >= 2 {
                ending[last].push(e.as_slice());
            }
        }
    }
    let mut nodes = 0u64;
    for q in 1..=n as u32 {
        let mut colors = vec![0u32; n];
        let mut search = HyperSearch {
            ending: &ending,
            q,
            colors: &mut colors,
            nodes: &mut nodes,
            node_limit,
        };
        match search.assign(0, 0) {
            Some(true) => {
                return Ok(ExactResult {
                    value: q,
                    witness: Coloring::new(colors),
                    nodes,
                })
            }
            Some(false) => continue,
            None => return Err(Error::BudgetExceeded { nodes }),
        }
    }
    unreachable!("n colors always suffice for hyperedges of size at least 2")
}

struct HyperSearch<'a> {
    ending: &'a [Vec<&'a [usize]>],
    q: u32,
    colors: &'a mut [u32],
    nodes: &'a mut u64,
    node_limit: u64,
}

impl HyperSearch<'_> {
    /// `Some(found)` or `None` on budget exhaustion.
    fn assign(&mut self, v: usize, max_used: u32) -> Option<bool> {
        if v == self.colors.len() {
            return Some(true);
        }
        let top = (max_used + 1).min(self.q);
        for color in 1..=top {
            *self.nodes += 1;
            if *self.nodes > self.node_limit {
                return None;
            }
            self.colors[v] = color;
            let ok = self.ending[v].iter().all(|e| e.iter().any(|&u| self.colors[u] != color));
            if ok && self.assign(v + 1, max_used.max(color))? {
                return Some(true);
            }
        }
        self.colors[v] = 0;
        Some(false)
    }
}
