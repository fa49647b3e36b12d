//! Undirected simple graphs with bitset adjacency.
//!
//! Vertices are `0..n` internally. The edge-list text format is 1-based:
//! a header line `n m` followed by `m` lines `u v` with `1 <= u < v <= n`.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Undirected simple graph; row `v` is the neighborhood `Γ(v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

/// Degree summary of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub max: usize,
    pub min: usize,
    pub degrees: Vec<usize>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![VertexSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            g.rows[u] = VertexSet::full(n);
            g.rows[u].remove(u);
        }
        g
    }

    /// Path `0 - 1 - .. - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.add_edge_unchecked(u - 1, u);
        }
        g
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge_unchecked(0, n - 1);
        }
        g
    }

    /// The Petersen graph: outer 5-cycle `0..5`, spokes `i - (i+5)`,
    /// inner pentagram on `5..10`.
    pub fn petersen() -> Self {
        let mut g = Self::empty(10);
        for i in 0..5 {
            g.add_edge_unchecked(i, (i + 1) % 5);
            g.add_edge_unchecked(i, i + 5);
            g.add_edge_unchecked(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// Builds a graph from 0-based edges, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Samples `G(n, p)` with a seeded Xoshiro256++ stream.
    ///
    /// Pairs are visited row-major over `u < v`; a pair becomes an edge iff
    /// the next 64-bit draw is below `p * 2^64`. The output depends only on
    /// `(n, p, seed)`.
    pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if p == 0.0 {
            return Ok(Self::empty(n));
        }
        if p == 1.0 {
            return Ok(Self::complete(n));
        }
        let threshold = edge_threshold(p);
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.next_u64() < threshold {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w + 1,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u + 1));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v) + 1, u.max(v) + 1));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    #[inline]
    fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    /// The neighborhood `Γ(v)`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// Number of neighbors of `v` inside `s`.
    #[inline]
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> usize {
        self.rows[v].intersection_len(s)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// `|Γ(u) ∩ Γ(v)|`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.rows[u].intersection_len(&self.rows[v])
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        DegreeStats {
            max: degrees.iter().copied().max().unwrap_or(0),
            min: degrees.iter().copied().min().unwrap_or(0),
            degrees,
        }
    }

    /// Vertices outside `s` adjacent to no member of `s`. Empty `s` gives `V`.
    pub fn common_non_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut out = s.complement();
        for u in s {
            out.difference_with(&self.rows[u]);
        }
        out
    }

    /// Vertices adjacent to every member of `s` (and not in `s`).
    pub fn common_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::full(self.n);
        for u in s {
            out.intersect_with(&self.rows[u]);
        }
        out
    }

    /// True iff every pair of members is adjacent.
    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| {
            let mut rest = s.clone();
            rest.remove(u);
            rest.is_subset(&self.rows[u])
        })
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| self.rows[u].is_disjoint(s))
    }

    /// Induced subgraph on `s`, relabelled to `0..|s|` in increasing order.
    /// Returns the graph and the map from new ids to old ids.
    pub fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(map.len());
        for (i, &u) in map.iter().enumerate() {
            for v in self.rows[u].intersection(s).iter() {
                g.rows[i].insert(index[v]);
            }
        }
        (g, map)
    }

    pub fn is_triangle_free(&self) -> bool {
        (0..self.n).all(|u| {
            self.rows[u]
                .iter()
                .filter(|&v| v > u)
                .all(|v| self.rows[u].is_disjoint(&self.rows[v]))
        })
    }

    /// Number of vertices with degree zero.
    pub fn isolated_count(&self) -> usize {
        self.rows.iter().filter(|r| r.is_empty()).count()
    }

    /// Parses the 1-based edge-list format.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() || l.trim_start().starts_with('#') => None,
            other => Some((i + 1, other)),
        });
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line \"n m\"".into(),
        })?;
        let header = header?;
        let (n, m) = parse_pair(&header, line)?;
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (line, text) in lines {
            let (u, v) = parse_pair(&text?, line)?;
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex out of range 1..={n}"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    msg: format!("self-loop at {u}"),
                });
            }
            if u > v {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected u < v, got {u} {v}"),
                });
            }
            g.add_edge(u - 1, v - 1).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line,
                msg: format!("header announces {m} edges, found {seen}"),
            });
        }
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_edge_list(std::io::BufReader::new(file))
    }

    /// Serializes to the 1-based edge-list format.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// `⌊p · 2^64⌋` saturated to `u64`, the acceptance bound for one pair.
fn edge_threshold(p: f64) -> u64 {
    let t = p * 18_446_744_073_709_551_616.0;
    if t >= u64::MAX as f64 {
        u64::MAX
    } else {
        t as u64
    }
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}
