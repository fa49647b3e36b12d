//! Brute-force oracles shared by the integration and acceptance suites.
//! Each works from the adjacency predicate alone, independent of the
//! library's bitset and search code.
#![allow(dead_code)]

use cliquecolor::Graph;

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn is_clique(g: &Graph, s: &[usize]) -> bool {
    s.iter()
        .enumerate()
        .all(|(i, &u)| s[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// A clique no outside vertex is adjacent to all of.
pub fn is_maximal(g: &Graph, s: &[usize]) -> bool {
    !s.is_empty() && is_clique(g, s) && (0..g.n()).all(|v| s.contains(&v) || s.iter().any(|&u| !g.has_edge(u, v)))
}

/// All inclusion-maximal cliques by scanning every subset, sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    assert!(n <= 20);
    let mut out: Vec<Vec<usize>> = (1u32..1 << n).map(|m| members(m, n)).filter(|s| is_maximal(g, s)).collect();
    out.sort();
    out
}

/// Validity by subset enumeration: no maximal clique of size ≥ 2 has one color.
pub fn is_valid(g: &Graph, colors: &[u32]) -> bool {
    let n = g.n();
    (1u32..1 << n).all(|m| {
        let s = members(m, n);
        s.len() < 2 || !is_maximal(g, &s) || s.iter().any(|&v| colors[v] != colors[s[0]])
    })
}

/// Smallest `q` such that some assignment in `1..=q` avoids a monochromatic
/// member of `edges`, by trying all `q^n` assignments.
fn min_palette(n: usize, edges: &[Vec<usize>]) -> u32 {
    if n == 0 {
        return 0;
    }
    for q in 1..=n as u32 {
        let total = (q as u64).pow(n as u32);
        let ok = (0..total).any(|mut code| {
            let colors: Vec<u32> = (0..n)
                .map(|_| {
                    let c = (code % q as u64) as u32;
                    code /= q as u64;
                    c
                })
                .collect();
            edges.iter().all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
        });
        if ok {
            return q;
        }
    }
    n as u32
}

pub fn clique_chromatic(g: &Graph) -> u32 {
    let edges: Vec<Vec<usize>> = maximal_cliques(g).into_iter().filter(|c| c.len() >= 2).collect();
    min_palette(g.n(), &edges)
}

pub fn chromatic(g: &Graph) -> u32 {
    let edges: Vec<Vec<usize>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
    min_palette(g.n(), &edges)
}

/// Relative closeness with a floor at the smallest normal float.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
