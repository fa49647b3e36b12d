//! Explicit upper-bound colorings and a repair loop.
//!
//! Both procedures color the neighborhoods of the first `s` vertices greedily
//! and then handle the leftover set `N` of vertices adjacent to none of them.
//! Procedure A splits `N` into `z = ⌈4/p⌉` blocks; procedure B colors `g[N]`
//! recursively with procedure A under a palette cap of `z = ⌈8/(p√ln n)⌉`.
//! The output of either is valid only with high probability, so
//! [`repair`] recolors residual monochromatic cliques with fresh colors.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::clique::Clique;
use crate::coloring::{monochromatic_maximal_cliques, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{floor_s, snap_ceil, DELTA_CLAMP};

/// `δ` used when the variant-A formula leaves `(0, 1)`.
pub const VARIANT_A_FALLBACK_DELTA: f64 = 0.5;
/// Monochromatic cliques collected per enumeration pass.
pub const MONO_BATCH: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Variant {
    A,
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::InvalidParameter(format!("unknown variant {other:?}"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

/// Output of [`greedy_phase`].
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyPhase {
    /// Colors `1..=s+1` on `V \ N`, `None` on `N`.
    pub colors: Vec<Option<u32>>,
    /// `S = {v_1, .., v_s}`: the first `s` vertices.
    pub s_set: Vec<usize>,
    /// `N = V \ (S ∪ ⋃ N(v_i))`.
    pub leftover: VertexSet,
}

/// Colors the uncolored neighbors of `v_i` with `i` for `i = 1..=s`, then
/// the still uncolored members of `S` with `s + 1`.
pub fn greedy_phase(g: &Graph, s: usize) -> GreedyPhase {
    let n = g.n();
    let s = s.min(n);
    let mut colors = vec![None; n];
    for (i, v) in (0..s).enumerate() {
        for u in g.neighbors(v) {
            colors[u].get_or_insert(i as u32 + 1);
        }
    }
    for c in colors.iter_mut().take(s) {
        c.get_or_insert(s as u32 + 1);
    }
    let leftover = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| colors[v].is_none()));
    GreedyPhase {
        colors,
        s_set: (0..s).collect(),
        leftover,
    }
}

/// `λ = 6 ln ln n / ln n`.
pub fn lambda(n: f64) -> f64 {
    let ln_n = n.ln();
    6.0 * ln_n.ln() / ln_n
}

/// Raw variant-A `δ = 1/2 − ρ/2 + ρ²/(1−λ) + λ` with `ρ = log_n(1/p)`.
pub fn delta_a_formula(n: f64, p: f64) -> f64 {
    let rho = -p.ln() / n.ln();
    let l = lambda(n);
    0.5 - rho / 2.0 + rho * rho / (1.0 - l) + l
}

/// Variant-A `δ` and whether it was clamped.
pub fn delta_a(n: f64, p: f64) -> (f64, bool) {
    let d = delta_a_formula(n, p);
    if lambda(n) < 1.0 && d > 0.0 && d < 1.0 {
        (d, false)
    } else {
        (VARIANT_A_FALLBACK_DELTA, true)
    }
}

/// Variant-B `δ = 5ε/2`, clamped into `(0, 1)`.
pub fn delta_b(epsilon: f64) -> (f64, bool) {
    let d = 2.5 * epsilon;
    if !(d > 0.0) {
        (DELTA_CLAMP.0, true)
    } else if d >= 1.0 {
        (DELTA_CLAMP.1, true)
    } else {
        (d, false)
    }
}

/// `ε` with `p = n^{−2/5+ε}`.
pub fn epsilon_from_p(n: f64, p: f64) -> f64 {
    p.ln() / n.ln() + 0.4
}

pub fn z_a(p: f64) -> usize {
    snap_ceil(4.0 / p) as usize
}

pub fn z_b(n: f64, p: f64) -> usize {
    snap_ceil(8.0 / (p * n.ln().sqrt())).max(1.0) as usize
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Per-run facts about a procedure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperReport {
    pub variant: Variant,
    /// Distinct colors used before repair.
    pub palette: usize,
    /// `s + z + 1`.
    pub bound: usize,
    pub s: usize,
    pub z: usize,
    pub delta: f64,
    pub delta_formula: f64,
    pub delta_clamped: bool,
    /// `λ` (variant A only).
    pub lambda: Option<f64>,
    /// `|N|`.
    pub leftover: usize,
    /// `½n^{1−δ} ≤ |N| ≤ 2n^{1−δ}`.
    pub leftover_in_window: bool,
    /// Monochromatic maximal cliques before repair, capped at [`MONO_BATCH`].
    pub mono_pre_repair: usize,
    pub mono_truncated: bool,
    /// Palette of the inner coloring of `g[N]` (variant B only).
    pub inner_palette: Option<usize>,
    /// The inner coloring needed more than `z` colors and was folded.
    pub cap_overflow: bool,
}

fn leftover_window(n: f64, delta: f64, size: usize) -> bool {
    let center = n.powf(1.0 - delta);
    let size = size as f64;
    0.5 * center <= size && size <= 2.0 * center
}

fn finish(g: &Graph, colors: Vec<Option<u32>>, mut report: UpperReport) -> Result<(Coloring, UpperReport, Vec<Clique>)> {
    let c = Coloring::from_partial(&colors)?;
    let mono = monochromatic_maximal_cliques(g, &c, Some(MONO_BATCH))?;
    report.palette = c.palette_size();
    report.mono_pre_repair = mono.len();
    report.mono_truncated = mono.len() >= MONO_BATCH;
    Ok((c, report, mono))
}

/// Procedure A. The palette is at most `s + z + 1` on every input.
pub fn procedure_a(g: &Graph, p: f64) -> Result<(Coloring, UpperReport)> {
    procedure_a_inner(g, p).map(|(c, r, _)| (c, r))
}

fn procedure_a_inner(g: &Graph, p: f64) -> Result<(Coloring, UpperReport, Vec<Clique>)> {
    check_p(p)?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let nf = n as f64;
    let (delta, delta_clamped) = delta_a(nf, p);
    let s = (floor_s(delta, nf.ln(), p) as usize).min(n);
    let z = z_a(p);
    let mut phase = greedy_phase(g, s);
    let members = phase.leftover.to_vec();
    let (q, r) = (members.len() / z, members.len() % z);
    let mut start = 0;
    for block in 0..z {
        let len = q + usize::from(block < r);
        for &v in &members[start..start + len] {
            phase.colors[v] = Some((s + 2 + block) as u32);
        }
        start += len;
    }
    let report = UpperReport {
        variant: Variant::A,
        palette: 0,
        bound: s + z + 1,
        s,
        z,
        delta,
        delta_formula: delta_a_formula(nf, p),
        delta_clamped,
        lambda: Some(lambda(nf)),
        leftover: members.len(),
        leftover_in_window: leftover_window(nf, delta, members.len()),
        mono_pre_repair: 0,
        mono_truncated: false,
        inner_palette: None,
        cap_overflow: false,
    };
    finish(g, phase.colors, report)
}

/// Procedure B with `p = n^{−2/5+ε}`; `epsilon` defaults to the value implied
/// by `(n, p)`.
pub fn procedure_b(g: &Graph, p: f64, epsilon: Option<f64>) -> Result<(Coloring, UpperReport)> {
    procedure_b_inner(g, p, epsilon).map(|(c, r, _)| (c, r))
}

fn procedure_b_inner(g: &Graph, p: f64, epsilon: Option<f64>) -> Result<(Coloring, UpperReport, Vec<Clique>)> {
    check_p(p)?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let nf = n as f64;
    let eps = epsilon.unwrap_or_else(|| epsilon_from_p(nf, p));
    let (delta, delta_clamped) = delta_b(eps);
    let s = (floor_s(delta, nf.ln(), p) as usize).min(n);
    let z = z_b(nf, p);
    let mut phase = greedy_phase(g, s);
    let leftover = phase.leftover.len();
    let (inner_palette, cap_overflow) = if leftover == 0 {
        (None, false)
    } else {
        let (sub, map) = g.induced(&phase.leftover);
        let inner = if sub.n() >= 3 {
            procedure_a_inner(&sub, p)?.0
        } else {
            Coloring::constant(sub.n(), 1)
        };
        // Relabel the inner palette to 1..=q in order of first use.
        let mut relabel = std::collections::BTreeMap::new();
        for v in 0..sub.n() {
            let next = relabel.len() as u32 + 1;
            relabel.entry(inner.color(v)).or_insert(next);
        }
        let q = relabel.len();
        for (i, &v) in map.iter().enumerate() {
            let c = relabel[&inner.color(i)] - 1;
            phase.colors[v] = Some(s as u32 + 2 + c % z as u32);
        }
        (Some(q), q > z)
    };
    let report = UpperReport {
        variant: Variant::B,
        palette: 0,
        bound: s + z + 1,
        s,
        z,
        delta,
        delta_formula: 2.5 * eps,
        delta_clamped,
        lambda: None,
        leftover,
        leftover_in_window: leftover_window(nf, delta, leftover),
        mono_pre_repair: 0,
        mono_truncated: false,
        inner_palette,
        cap_overflow,
    };
    finish(g, phase.colors, report)
}

/// Outcome of a successful [`repair`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    /// Recolored vertices in order.
    pub recolored: Vec<usize>,
    /// Fresh colors introduced (one per recolor).
    pub extra_colors: usize,
}

/// Recolors the least vertex of each monochromatic maximal clique with a
/// fresh color until none remain, spending at most `budget` recolors.
pub fn repair(g: &Graph, c: &Coloring, budget: usize) -> Result<(Coloring, RepairReport)> {
    repair_from(g, c.clone(), budget, None)
}

fn repair_from(g: &Graph, mut c: Coloring, budget: usize, known: Option<Vec<Clique>>) -> Result<(Coloring, RepairReport)> {
    let mut recolored = Vec::new();
    let mut batch = match known {
        Some(b) => b,
        None => monochromatic_maximal_cliques(g, &c, Some(MONO_BATCH))?,
    };
    while !batch.is_empty() {
        for k in &batch {
            let first = c.color(k.vertices()[0]);
            if k.vertices().iter().any(|&v| c.color(v) != first) {
                continue;
            }
            if recolored.len() >= budget {
                let remaining = monochromatic_maximal_cliques(g, &c, Some(MONO_BATCH))?.len();
                return Err(Error::RepairBudgetExhausted { budget, remaining });
            }
            let fresh = c.max_color().unwrap_or(0) + 1;
            c.set_color(k.vertices()[0], fresh);
            recolored.push(k.vertices()[0]);
        }
        // A recolor never creates a new monochromatic clique, so only a
        // truncated batch needs another pass.
        batch = if batch.len() >= MONO_BATCH {
            monochromatic_maximal_cliques(g, &c, Some(MONO_BATCH))?
        } else {
            Vec::new()
        };
    }
    let extra_colors = recolored.len();
    Ok((c, RepairReport { recolored, extra_colors }))
}

/// One procedure run followed by repair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorRun {
    pub report: UpperReport,
    pub pre_repair: Coloring,
    /// `None` when the repair budget ran out.
    pub repaired: Option<Coloring>,
    pub repair: Option<RepairReport>,
    pub repair_error: Option<String>,
}

impl ColorRun {
    pub fn valid_pre_repair(&self) -> bool {
        self.report.mono_pre_repair == 0
    }
}

/// Runs `variant` and repairs the result, reusing the pre-repair scan.
pub fn color_and_repair(g: &Graph, variant: Variant, p: f64, epsilon: Option<f64>, budget: usize) -> Result<ColorRun> {
    let (pre, report, mono) = match variant {
        Variant::A => procedure_a_inner(g, p)?,
        Variant::B => procedure_b_inner(g, p, epsilon)?,
    };
    let (repaired, repair, repair_error) = match repair_from(g, pre.clone(), budget, Some(mono)) {
        Ok((c, r)) => (Some(c), Some(r), None),
        Err(e @ Error::RepairBudgetExhausted { .. }) => (None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(ColorRun {
        report,
        pre_repair: pre,
        repaired,
        repair,
        repair_error,
    })
}
