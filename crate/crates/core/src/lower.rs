//! Lower-bound certification pipeline.
//!
//! Given a coloring with few classes, the pipeline picks a class `W` whose
//! outside vertices all keep many non-neighbors in it, splits `W` into a
//! pseudo-partition `A, B_1, .., B_m`, and searches the candidate family
//! `C⁺` (sets with `k − m` vertices in `A` and one in each `B_i`) for a
//! clique no outside vertex dominates. Its extension inside `W` is a
//! monochromatic inclusion-maximal clique, i.e. a certificate that the
//! coloring is invalid.

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::clique::{extend_to_maximal, find_clique_dominating_outside_with, is_maximal_clique, Clique, SearchBudget};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{lambda_terms, ln_binomial, ParamSchedule, SumOrder};

/// Non-neighbor threshold used for usefulness and for `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "fraction", rename_all = "snake_case")]
pub enum Threshold {
    /// `ℓ₁(W)` from the schedule.
    Schedule,
    /// A fixed fraction of `|W|`.
    Relaxed(f64),
}

impl Threshold {
    pub fn value(&self, w_size: usize, sch: &ParamSchedule) -> f64 {
        match *self {
            Threshold::Schedule => ell1(w_size, sch),
            Threshold::Relaxed(f) => f * w_size as f64,
        }
    }

    pub fn is_relaxed(&self) -> bool {
        matches!(self, Threshold::Relaxed(_))
    }
}

/// `ℓ₁(W) = max{(1−τ)n^{1−δ}/s, |W| − 2np}`.
pub fn ell1(w_size: usize, sch: &ParamSchedule) -> f64 {
    sch.ell1_for_size(w_size as f64)
}

/// `|V \ W| ≥ max{s−1, 1}` and every outside vertex has at least `ℓ₁(W)`
/// non-neighbors in `W`.
pub fn is_useful(g: &Graph, w: &VertexSet, sch: &ParamSchedule) -> bool {
    is_useful_with(g, w, sch, Threshold::Schedule)
}

pub fn is_useful_with(g: &Graph, w: &VertexSet, sch: &ParamSchedule, threshold: Threshold) -> bool {
    let outside = w.complement();
    let need_outside = sch.s.saturating_sub(1).max(1) as usize;
    if outside.len() < need_outside {
        return false;
    }
    let w_size = w.len();
    let t = threshold.value(w_size, sch);
    outside.iter().all(|v| (w_size - g.degree_into(v, w)) as f64 >= t)
}

/// Evidence of the class selection step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSelection {
    /// Index into the class list (color order).
    pub index: usize,
    pub color: Option<u32>,
    /// `S = {v_1, .., v_t}`: per class, an outside vertex with the fewest
    /// non-neighbors in it.
    pub s_set: Vec<usize>,
    /// `N`: common non-neighbors of `S`.
    pub n_set: Vec<usize>,
    /// `|W_j ∩ N|`.
    pub overlap: usize,
    /// True when the class maximizing the overlap was not useful and the
    /// first useful class was taken instead.
    pub fallback: bool,
}

/// The selection rule on explicit classes: build `S` from the minimizers,
/// `N = common_non_neighbors(S)`, and return the class with the largest
/// `|W_j ∩ N|` (least index on ties). `None` if no class has an outside.
pub fn select_from_classes(g: &Graph, classes: &[VertexSet]) -> Option<ClassSelection> {
    let n = g.n();
    let mut s = VertexSet::new(n);
    for w in classes {
        let w_size = w.len();
        let best = w.complement().iter().min_by_key(|&v| (w_size - g.degree_into(v, w), v));
        if let Some(v) = best {
            s.insert(v);
        }
    }
    if s.is_empty() {
        return None;
    }
    let n_set = g.common_non_neighbors(&s);
    let (index, overlap) = classes
        .iter()
        .enumerate()
        .map(|(j, w)| (j, w.intersection_len(&n_set)))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Some(ClassSelection {
        index,
        color: None,
        s_set: s.to_vec(),
        n_set: n_set.to_vec(),
        overlap,
        fallback: false,
    })
}

/// Applies [`select_from_classes`] to the classes of `c` and checks the
/// pick for usefulness; falls back to the first useful class. `None` when
/// no class is useful under `threshold`.
pub fn select_useful_class(g: &Graph, c: &Coloring, sch: &ParamSchedule, threshold: Threshold) -> Option<ClassSelection> {
    let classes = c.classes();
    let sets: Vec<VertexSet> = classes.iter().map(|(_, w)| w.clone()).collect();
    let mut sel = select_from_classes(g, &sets)?;
    if !is_useful_with(g, &sets[sel.index], sch, threshold) {
        sel.index = sets.iter().position(|w| is_useful_with(g, w, sch, threshold))?;
        sel.overlap = sets[sel.index].iter().filter(|v| sel.n_set.binary_search(v).is_ok()).count();
        sel.fallback = true;
    }
    sel.color = Some(classes[sel.index].0);
    Some(sel)
}

/// Disjoint `A, B_1, .., B_m ⊆ W` with `B_i` avoiding `Γ(u_i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionWitness {
    pub a_set: Vec<usize>,
    pub b_sets: Vec<Vec<usize>>,
    /// `a = ⌈|W|/4⌉`.
    pub a: usize,
    /// `b = ⌈ℓ₁(W)/(4m)⌉` under the threshold in force.
    pub b: usize,
    /// `V \ W` by `|Γ(u) ∩ A|` descending, ties by id.
    pub order: Vec<usize>,
    /// `L = {u_1, .., u_m}`.
    pub high_degree: Vec<usize>,
    pub ell1: f64,
    pub relaxed: bool,
}

/// Result of a successful [`pseudo_partition`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionOutcome {
    pub witness: PartitionWitness,
    /// Attempts used, including the successful one.
    pub attempts: usize,
    pub a_failures: usize,
    pub b_failures: usize,
}

impl PartitionWitness {
    pub fn a_vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_with_capacity(n, self.a_set.iter().copied())
    }

    pub fn b_vertex_sets(&self, n: usize) -> Vec<VertexSet> {
        self.b_sets
            .iter()
            .map(|b| VertexSet::from_iter_with_capacity(n, b.iter().copied()))
            .collect()
    }

    /// Deterministic re-check of every witness invariant.
    pub fn validate(&self, g: &Graph, w: &VertexSet, m: usize) -> std::result::Result<(), String> {
        let n = g.n();
        if self.a_set.len() != w.len().div_ceil(4) || self.a != self.a_set.len() {
            return Err(format!("|A| = {} but ⌈|W|/4⌉ = {}", self.a_set.len(), w.len().div_ceil(4)));
        }
        let expect_b = b_size(self.ell1, m);
        if self.b != expect_b {
            return Err(format!("b = {} but ⌈ℓ₁/(4m)⌉ = {expect_b}", self.b));
        }
        if self.b_sets.len() != m || self.high_degree.len() != m {
            return Err("wrong number of B parts".into());
        }
        let mut seen = VertexSet::new(n);
        for part in std::iter::once(&self.a_set).chain(&self.b_sets) {
            for &v in part {
                if !w.contains(v) {
                    return Err(format!("vertex {} outside W", v + 1));
                }
                if !seen.insert(v) {
                    return Err(format!("vertex {} in two parts", v + 1));
                }
            }
        }
        if self.b_sets.iter().any(|b| b.len() != self.b) {
            return Err("a B part has the wrong size".into());
        }
        let a = self.a_vertex_set(n);
        let expected = high_degree_order(g, w, &a);
        if expected != self.order || self.order[..m] != self.high_degree[..] {
            return Err("high-degree order mismatch".into());
        }
        for (u, b) in self.high_degree.iter().zip(&self.b_sets) {
            if b.iter().any(|&v| g.has_edge(*u, v)) {
                return Err(format!("u = {} has a neighbor in its B part", u + 1));
            }
        }
        Ok(())
    }
}

fn b_size(ell1: f64, m: usize) -> usize {
    (ell1 / (4.0 * m as f64)).ceil().max(0.0) as usize
}

/// `V \ W` sorted by neighbors in `A` descending, ties by id ascending.
pub fn high_degree_order(g: &Graph, w: &VertexSet, a: &VertexSet) -> Vec<usize> {
    let mut order: Vec<(usize, usize)> = w.complement().iter().map(|u| (g.degree_into(u, a), u)).collect();
    order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    order.into_iter().map(|(_, u)| u).collect()
}

/// Randomized two-stage construction of a [`PartitionWitness`], retried
/// up to `max_attempts` times.
pub fn pseudo_partition(
    g: &Graph,
    w: &VertexSet,
    sch: &ParamSchedule,
    threshold: Threshold,
    seed: u64,
    max_attempts: usize,
) -> Result<PartitionOutcome> {
    let n = g.n();
    let m = sch.m as usize;
    let outside = w.complement();
    if outside.len() < m {
        return Err(Error::InvalidParameter(format!(
            "|V \\ W| = {} is smaller than m = {m}",
            outside.len()
        )));
    }
    let ell1 = threshold.value(w.len(), sch);
    let a = w.len().div_ceil(4);
    let b = b_size(ell1, m);
    let members = w.to_vec();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let (mut a_failures, mut b_failures) = (0, 0);
    for attempt in 1..=max_attempts {
        let mut a_plus = Vec::new();
        let mut b_plus = vec![Vec::new(); m];
        for &v in &members {
            let x: f64 = rng.random();
            if x < 0.5 {
                a_plus.push(v);
            } else {
                let i = (((x - 0.5) * 2.0 * m as f64) as usize).min(m - 1);
                b_plus[i].push(v);
            }
        }
        if a_plus.len() < a {
            a_failures += 1;
            continue;
        }
        let a_set: Vec<usize> = a_plus[..a].to_vec();
        let a_vs = VertexSet::from_iter_with_capacity(n, a_set.iter().copied());
        let order = high_degree_order(g, w, &a_vs);
        let high_degree = order[..m].to_vec();
        let mut b_sets = Vec::with_capacity(m);
        for (i, &u) in high_degree.iter().enumerate() {
            let part: Vec<usize> = b_plus[i].iter().copied().filter(|&v| !g.has_edge(u, v)).take(b).collect();
            if part.len() < b {
                break;
            }
            b_sets.push(part);
        }
        if b_sets.len() < m {
            b_failures += 1;
            continue;
        }
        return Ok(PartitionOutcome {
            witness: PartitionWitness {
                a_set,
                b_sets,
                a,
                b,
                order,
                high_degree,
                ell1,
                relaxed: threshold.is_relaxed(),
            },
            attempts: attempt,
            a_failures,
            b_failures,
        });
    }
    Err(Error::PartitionExhausted {
        attempts: max_attempts,
        a_failures,
        b_failures,
    })
}

/// Classification of `V \ (W ∪ L)` and bad-candidate counts for `C⁺`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    /// `|C⁺| = C(a, k−m) b^m`.
    pub c_plus: f64,
    pub l: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// `Σ_{v ∈ X} C(deg_A v, k−m) Π_i deg_{B_i} v`, likewise for `Y`, `Z`.
    pub bad_x: f64,
    pub bad_y: f64,
    pub bad_z: f64,
    /// `bad_x + bad_y + bad_z`: pairs `(K, v)` with `K ⊆ Γ(v)`.
    pub bad_pairs: f64,
    /// Number of `K ∈ C⁺` inside some outside neighborhood, when `C⁺` was
    /// small enough to enumerate.
    pub bad_union: Option<u64>,
    /// `1 − bad/|C⁺|` using the union count when known, else the pair count.
    pub surviving_fraction: f64,
    /// Analytic `Λ` for the schedule, when its series is tractable.
    pub lambda: Option<f64>,
}

/// Largest `|C⁺|` enumerated for the exact union count.
pub const UNION_ENUMERATION_LIMIT: f64 = 200_000.0;

pub fn classify_and_count(g: &Graph, w: &VertexSet, pw: &PartitionWitness, sch: &ParamSchedule) -> CandidateReport {
    let n = g.n();
    let km = sch.k - sch.m;
    let a_vs = pw.a_vertex_set(n);
    let b_vs = pw.b_vertex_sets(n);
    let r1p = sch.r(1) * sch.p;
    let a_cut = r1p * pw.a as f64;
    let b_cut = r1p * pw.b as f64;
    let l_set = VertexSet::from_iter_with_capacity(n, pw.high_degree.iter().copied());
    let rest = w.complement().difference(&l_set);
    let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
    let (mut bad_x, mut bad_y, mut bad_z) = (0.0, 0.0, 0.0);
    for v in rest.iter() {
        let da = g.degree_into(v, &a_vs);
        let db: Vec<usize> = b_vs.iter().map(|b| g.degree_into(v, b)).collect();
        let count = binomial_f64(da as u64, km) * db.iter().map(|&d| d as f64).product::<f64>();
        if da as f64 >= a_cut {
            x.push(v);
            bad_x += count;
        } else if db.iter().any(|&d| d as f64 >= b_cut) {
            y.push(v);
            bad_y += count;
        } else {
            z.push(v);
            bad_z += count;
        }
    }
    let c_plus = binomial_f64(pw.a as u64, km) * (pw.b as f64).powi(sch.m as i32);
    let bad_union = (c_plus <= UNION_ENUMERATION_LIMIT).then(|| count_bad_union(g, w, pw, km as usize));
    let bad_pairs = bad_x + bad_y + bad_z;
    let bad = bad_union.map_or(bad_pairs, |u| u as f64);
    let surviving_fraction = if c_plus > 0.0 { 1.0 - (bad / c_plus).min(1.0) } else { 0.0 };
    let lambda = lambda_terms(sch, SumOrder::Forward).ok().map(|t| t.lambda);
    CandidateReport {
        c_plus,
        l: pw.high_degree.clone(),
        x,
        y,
        z,
        bad_x,
        bad_y,
        bad_z,
        bad_pairs,
        bad_union,
        surviving_fraction,
        lambda,
    }
}

/// `C(n, r)` as a float; exact while the value fits in 53 bits.
pub fn binomial_f64(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i + 1) as u128,
            None => return ln_binomial(n, r).exp(),
        }
    }
    acc as f64
}

/// Calls `f` on every member of `C⁺` (sorted vertex lists).
pub fn for_each_candidate<F: FnMut(&[usize])>(pw: &PartitionWitness, km: usize, mut f: F) {
    let mut combo: Vec<usize> = (0..km).collect();
    let a = pw.a_set.len();
    if km > a {
        return;
    }
    let m = pw.b_sets.len();
    let mut buf = Vec::with_capacity(km + m);
    loop {
        let mut picks = vec![0usize; m];
        loop {
            buf.clear();
            buf.extend(combo.iter().map(|&i| pw.a_set[i]));
            buf.extend(picks.iter().enumerate().map(|(i, &j)| pw.b_sets[i][j]));
            buf.sort_unstable();
            f(&buf);
            // Odometer over the B choices.
            let mut i = 0;
            while i < m {
                picks[i] += 1;
                if picks[i] < pw.b_sets[i].len() {
                    break;
                }
                picks[i] = 0;
                i += 1;
            }
            if i == m || pw.b_sets.iter().any(Vec::is_empty) {
                break;
            }
        }
        // Next (k−m)-combination of A in lexicographic order.
        let mut i = km;
        while i > 0 && combo[i - 1] == a - km + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        combo[i - 1] += 1;
        for j in i..km {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn count_bad_union(g: &Graph, w: &VertexSet, pw: &PartitionWitness, km: usize) -> u64 {
    let outside = w.complement().to_vec();
    let mut bad = 0;
    for_each_candidate(pw, km, |k| {
        if outside.iter().any(|&v| k.iter().all(|&u| g.has_edge(v, u))) {
            bad += 1;
        }
    });
    bad
}

/// Per-event outcome of the density checks on `(U, W)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    /// `|U| ≥ ℓ₀/ln²n`.
    pub applicable: bool,
    /// Event (i): for every `i ≥ 1` with `r_i p ≤ 1`, at most `x_i` outside
    /// vertices have `|Γ(v) ∩ U| ≥ r_i p |U|`.
    pub event_i: bool,
    /// First index violating event (i), if any.
    pub event_i_first_failure: Option<u64>,
    pub event_i_indices: u64,
    /// Event (ii), dense case: at most `m` outside vertices reach `α|U|`.
    pub event_ii: Option<bool>,
    /// Event (iii), sparse case: for `1 ≤ j ≤ 9 ln n`, at most `j` outside
    /// vertices reach `(1/(j+1) + 1/ln³n)|U|`.
    pub event_iii: Option<bool>,
    pub event_iii_first_failure: Option<u64>,
}

pub fn check_density_events(g: &Graph, w: &VertexSet, u: &VertexSet, sch: &ParamSchedule) -> DensityReport {
    let u_size = u.len() as f64;
    let mut degrees: Vec<usize> = w.complement().iter().map(|v| g.degree_into(v, u)).collect();
    degrees.sort_unstable();
    let at_least = |t: f64| degrees.len() - degrees.partition_point(|&d| (d as f64) < t);
    let hi = sch.x_series_len();
    let event_i_first_failure = (1..=hi).find(|&i| at_least(sch.r(i) * sch.p * u_size) as f64 > sch.x(i));
    let event_ii = (sch.m >= 2).then(|| at_least(sch.alpha * u_size) as u64 <= sch.m);
    let (event_iii, event_iii_first_failure) = if sch.m == 1 {
        let jmax = (9.0 * sch.ln_n).floor() as u64;
        let inv_ln3 = sch.ln_n.powi(-3);
        let fail = (1..=jmax).find(|&j| at_least((1.0 / (j + 1) as f64 + inv_ln3) * u_size) as u64 > j);
        (Some(fail.is_none()), fail)
    } else {
        (None, None)
    };
    DensityReport {
        applicable: u_size >= sch.ell0 / (sch.ln_n * sch.ln_n),
        event_i: event_i_first_failure.is_none(),
        event_i_first_failure,
        event_i_indices: hi,
        event_ii,
        event_iii,
        event_iii_first_failure,
    }
}

/// Knobs for [`certify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Candidates sampled from `C⁺`.
    pub candidate_budget: usize,
    /// Replace `ℓ₁` by this fraction of `|W|`.
    pub relax: Option<f64>,
    pub partition_attempts: usize,
    pub search: SearchBudget,
}

impl CertifyOptions {
    pub fn new(sch: &ParamSchedule, seed: u64) -> Self {
        Self {
            seed,
            candidate_budget: 10_000,
            relax: None,
            partition_attempts: 100,
            search: SearchBudget {
                seed,
                ..SearchBudget::for_clique_size(sch.k as usize)
            },
        }
    }
}

/// Which step produced the certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStage {
    Candidate,
    Search,
    ClassScan,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyReport {
    /// Monochromatic inclusion-maximal clique, 0-based.
    pub certificate: Option<Clique>,
    pub color: Option<u32>,
    pub stage: CertStage,
    pub relaxed: bool,
    /// The coloring uses more than `s` classes, outside the proof's premise.
    pub palette_exceeds_s: bool,
    pub selection: Option<ClassSelection>,
    pub partition_attempts: usize,
    pub partition_error: Option<String>,
    pub candidates_sampled: usize,
    pub candidate_cliques: usize,
    pub search_nodes: u64,
}

/// Searches for a monochromatic inclusion-maximal clique in `c`.
pub fn certify(g: &Graph, c: &Coloring, sch: &ParamSchedule, opts: &CertifyOptions) -> Result<CertifyReport> {
    if c.len() != g.n() {
        return Err(Error::ColoringSize {
            expected: g.n(),
            got: c.len(),
        });
    }
    let n = g.n();
    let threshold = opts.relax.map_or(Threshold::Schedule, Threshold::Relaxed);
    let mut report = CertifyReport {
        certificate: None,
        color: None,
        stage: CertStage::None,
        relaxed: threshold.is_relaxed(),
        palette_exceeds_s: c.palette_size() as u64 > sch.s,
        selection: None,
        partition_attempts: 0,
        partition_error: None,
        candidates_sampled: 0,
        candidate_cliques: 0,
        search_nodes: 0,
    };
    let classes = c.classes();
    let selection = select_useful_class(g, c, sch, threshold);
    report.selection = selection.clone();
    if let Some(sel) = selection {
        let (color, w) = &classes[sel.index];
        let outside = w.complement();
        match pseudo_partition(g, w, sch, threshold, opts.seed, opts.partition_attempts) {
            Ok(outcome) => {
                report.partition_attempts = outcome.attempts;
                let pw = &outcome.witness;
                let km = (sch.k - sch.m) as usize;
                let mut rng = Xoshiro256PlusPlus::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
                if km <= pw.a_set.len() && pw.b > 0 {
                    for _ in 0..opts.candidate_budget {
                        report.candidates_sampled += 1;
                        let mut k: Vec<usize> = rand::seq::index::sample(&mut rng, pw.a_set.len(), km)
                            .into_iter()
                            .map(|i| pw.a_set[i])
                            .collect();
                        k.extend(pw.b_sets.iter().map(|b| b[rng.random_range(0..b.len())]));
                        let kset = VertexSet::from_iter_with_capacity(n, k);
                        if !g.is_clique(&kset) {
                            continue;
                        }
                        report.candidate_cliques += 1;
                        if !g.common_neighbors(&kset).is_disjoint(&outside) {
                            continue;
                        }
                        let ext = extend_to_maximal(g, &kset, &outside)?;
                        if ext.to_set(n).is_subset(w) && is_maximal_clique(g, &ext.to_set(n)) {
                            report.certificate = Some(ext);
                            report.color = Some(*color);
                            report.stage = CertStage::Candidate;
                            return Ok(report);
                        }
                    }
                }
            }
            Err(e) => report.partition_error = Some(e.to_string()),
        }
        let found = find_clique_dominating_outside_with(g, w, &opts.search, true);
        report.search_nodes += found.nodes;
        if let Some(k) = found.clique.filter(|k| k.len() >= 2) {
            report.certificate = Some(k);
            report.color = Some(*color);
            report.stage = CertStage::Search;
            return Ok(report);
        }
    }
    for (color, w) in &classes {
        if w.len() < 2 {
            continue;
        }
        let found = find_clique_dominating_outside_with(g, w, &opts.search, true);
        report.search_nodes += found.nodes;
        if let Some(k) = found.clique.filter(|k| k.len() >= 2) {
            report.certificate = Some(k);
            report.color = Some(*color);
            report.stage = CertStage::ClassScan;
            return Ok(report);
        }
    }
    Ok(report)
}
