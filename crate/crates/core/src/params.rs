//! Parameter schedule and closed-form bound calculus.
//!
//! Everything here is a pure function of `(n, p, ε)`. Quantities that can
//! over- or underflow (`x_i`, `Λ`, `Π`, Janson exponents) are accumulated
//! in log-space with compensated summation and only exponentiated at the end.

use serde::Serialize;

use crate::error::{Error, Result};

/// `σ`: threshold exponent separating the two parameter cases.
pub const SIGMA: f64 = 1.0 / 100.0;
/// `α`: high-degree cutoff used by `Π_α`.
pub const ALPHA: f64 = 4.0 / 5.0;
/// `ν`: required surviving fraction of candidates.
pub const NU: f64 = 1.0 / 10.0;
/// Additive constant of the sparse-case `Λ` assembly.
pub const SPARSE_TAIL: f64 = 0.7;
/// Bounds applied when a formula `δ` leaves `(0, 1)`.
pub const DELTA_CLAMP: (f64, f64) = (0.01, 0.99);
/// Maximum number of terms evaluated for any single series.
pub const SERIES_TERM_LIMIT: u64 = 50_000_000;

const SNAP: f64 = 1e-9;

/// Which branch of the schedule applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleCase {
    /// `p ≥ n^{-σ}`, so `m ≥ 2`.
    Dense,
    /// `p < n^{-σ}`, so `m = 1`.
    Sparse,
}

/// Summation direction, exposed so callers can cross-check rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumOrder {
    Forward,
    Reverse,
}

/// The full parameter schedule for one `(n, p, ε)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamSchedule {
    pub n: f64,
    pub ln_n: f64,
    pub p: f64,
    pub rho: f64,
    pub zeta: f64,
    pub epsilon: f64,
    pub case: ScheduleCase,
    pub m: u64,
    pub k: u64,
    /// `δ` actually used for `s`, `τ` and `ℓ₀`.
    pub delta: f64,
    /// Raw case-formula value of `δ` before clamping.
    pub delta_formula: f64,
    pub delta_clamped: bool,
    /// True when `δ` was supplied by the caller instead of the formula.
    pub delta_overridden: bool,
    pub s: u64,
    pub sigma: f64,
    pub alpha: f64,
    pub nu: f64,
    pub tau: f64,
    pub ell0: f64,
}

/// `φ(x) = (1+x)ln(1+x) − x` for `x > −1`.
pub fn phi(x: f64) -> Result<f64> {
    if !(x > -1.0) {
        return Err(Error::InvalidParameter(format!("phi undefined at {x}")));
    }
    if x.abs() < 1e-3 {
        // Σ_{j≥2} (−1)^j x^j / (j(j−1)), alternating and fast for small |x|.
        let mut sum = 0.0;
        let mut pow = x * x;
        for j in 2..40u32 {
            let term = pow / f64::from(j * (j - 1));
            sum += if j % 2 == 0 { term } else { -term };
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow *= x;
        }
        return Ok(sum);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 + x) * x.ln_1p() - x)
}

/// Default `ε` for a given `ρ`: distance to the next threshold above.
pub fn default_epsilon(rho: f64) -> f64 {
    if rho >= 1.0 / 3.0 {
        2.0 / 5.0 - rho
    } else {
        1.0 / 3.0 - rho
    }
}

pub(crate) fn snap_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < SNAP {
        r
    } else {
        x.floor()
    }
}

pub(crate) fn snap_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < SNAP {
        r
    } else {
        x.ceil()
    }
}

/// `9 ln ln n / ln n`.
fn loglog_correction(ln_n: f64) -> f64 {
    9.0 * ln_n.ln() / ln_n
}

impl ParamSchedule {
    /// Builds the schedule for `G(n, p)`; `epsilon` defaults to
    /// [`default_epsilon`].
    pub fn build(n: f64, p: f64, epsilon: Option<f64>) -> Result<Self> {
        if !(n >= 3.0) || !n.is_finite() {
            return Err(Error::InvalidParameter(format!("n must be a finite value >= 3, got {n}")));
        }
        Self::build_ln(n.ln(), p, epsilon)
    }

    /// Builds the schedule with `n = e^{ln_n}` and `p = n^{-ρ}`.
    /// `ρ` is kept exactly as given rather than recomputed from `p`.
    pub fn from_rho(ln_n: f64, rho: f64, epsilon: Option<f64>) -> Result<Self> {
        Self::build_inner(ln_n, (-rho * ln_n).exp(), Some(rho), epsilon)
    }

    pub fn build_ln(ln_n: f64, p: f64, epsilon: Option<f64>) -> Result<Self> {
        Self::build_inner(ln_n, p, None, epsilon)
    }

    fn build_inner(ln_n: f64, p: f64, rho: Option<f64>, epsilon: Option<f64>) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        if !(ln_n >= 3f64.ln()) || !ln_n.is_finite() {
            return Err(Error::InvalidParameter(format!("ln n must be >= ln 3, got {ln_n}")));
        }
        let rho = rho.unwrap_or_else(|| -p.ln() / ln_n);
        let epsilon = epsilon.unwrap_or_else(|| default_epsilon(rho));
        let (case, m, k, delta_formula) = if rho <= SIGMA {
            let m = snap_floor(2.0 / (3.0 * rho)) as u64;
            let k = snap_ceil(1.0 / rho + 0.5) as u64;
            let d = 0.5 - 3.0 * rho - loglog_correction(ln_n);
            (ScheduleCase::Dense, m, k, d)
        } else {
            let ind = if rho <= 4.0 / 15.0 { 0.5 } else { 0.0 };
            let k = snap_ceil(1.0 / rho + ind) as u64;
            (ScheduleCase::Sparse, 1, k, epsilon.min(SIGMA / 2.0))
        };
        let (delta, delta_clamped) = clamp_delta(delta_formula);
        let mut sch = ParamSchedule {
            n: ln_n.exp(),
            ln_n,
            p,
            rho,
            zeta: ln_n.powi(-4),
            epsilon,
            case,
            m,
            k,
            delta,
            delta_formula,
            delta_clamped,
            delta_overridden: false,
            s: 0,
            sigma: SIGMA,
            alpha: ALPHA,
            nu: NU,
            tau: 0.0,
            ell0: 0.0,
        };
        sch.refresh_delta_dependents();
        Ok(sch)
    }

    /// Same schedule with a caller-supplied `δ ∈ (0, 1)`.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        let mut sch = self.clone();
        sch.delta = delta;
        sch.delta_clamped = false;
        sch.delta_overridden = true;
        sch.refresh_delta_dependents();
        Ok(sch)
    }

    fn refresh_delta_dependents(&mut self) {
        self.s = floor_s(self.delta, self.ln_n, self.p);
        self.tau = tau(self.ln_n, self.p, self.delta);
        self.ell0 = self.ell1_for_size(0.0);
    }

    /// `L = ln(1/(1−p))`.
    pub fn log_one_minus_p(&self) -> f64 {
        -(-self.p).ln_1p()
    }

    /// `log_{1/(1−p)} n`.
    pub fn log_base_n(&self) -> f64 {
        self.ln_n / self.log_one_minus_p()
    }

    /// `n^{1−δ}`.
    pub fn n_pow_one_minus_delta(&self) -> f64 {
        ((1.0 - self.delta) * self.ln_n).exp()
    }

    /// `ℓ₁` for a set of the given size; `s = 0` is treated as `s = 1`.
    pub fn ell1_for_size(&self, w: f64) -> f64 {
        let first = (1.0 - self.tau) * self.n_pow_one_minus_delta() / self.s.max(1) as f64;
        first.max(w - 2.0 * self.n * self.p)
    }

    /// `r_i = e^{ζ i}`.
    pub fn r(&self, i: u64) -> f64 {
        (self.zeta * i as f64).exp()
    }

    /// `ln x_i` where `x_i = ln n / (φ(r_i − 1) p)`.
    pub fn ln_x(&self, i: u64) -> f64 {
        let phi_i = phi((self.zeta * i as f64).exp_m1()).expect("r_i > 1");
        self.ln_n.ln() - phi_i.ln() - self.p.ln()
    }

    pub fn x(&self, i: u64) -> f64 {
        self.ln_x(i).exp()
    }

    /// Largest `i ≥ 0` with `r_i p ≤ cutoff`, so the indices of a series
    /// with that cutoff are exactly `lo..=last_index(cutoff)`.
    pub fn last_index(&self, cutoff: f64) -> u64 {
        let holds = |i: u64| self.r(i) * self.p <= cutoff;
        if !holds(0) {
            return 0;
        }
        let guess = ((cutoff.ln() - self.p.ln()) / self.zeta).max(0.0);
        let mut i = if guess > 1e18 { u64::MAX / 2 } else { guess as u64 };
        while i > 0 && !holds(i) {
            i -= 1;
        }
        while holds(i + 1) {
            i += 1;
        }
        i
    }

    /// Number of `x_i` with `r_i p ≤ 1` and `i ≥ 1`.
    pub fn x_series_len(&self) -> u64 {
        self.last_index(1.0)
    }
}

fn clamp_delta(d: f64) -> (f64, bool) {
    if !(d > 0.0) {
        (DELTA_CLAMP.0, true)
    } else if d >= 1.0 {
        (DELTA_CLAMP.1, true)
    } else {
        (d, false)
    }
}

/// `s = ⌊δ ln n / L⌋`, corrected so that `s L ≤ δ ln n < (s+1) L` holds in
/// floating point.
pub fn floor_s(delta: f64, ln_n: f64, p: f64) -> u64 {
    let l = -(-p).ln_1p();
    let target = delta * ln_n;
    let raw = (target / l).floor().max(0.0);
    if raw >= 2f64.powi(52) {
        // Past integer resolution of f64 the correction is meaningless.
        return raw as u64;
    }
    let mut s = raw as u64;
    while s > 0 && s as f64 * l > target {
        s -= 1;
    }
    while (s + 1) as f64 * l <= target {
        s += 1;
    }
    s
}

/// `τ = max{2 ln n/(np), √(32 ln²n / (n^{1−δ} p (1 − ln n/(np))))}`;
/// infinite when the bracket is not positive.
pub fn tau(ln_n: f64, p: f64, delta: f64) -> f64 {
    let n = ln_n.exp();
    let first = 2.0 * ln_n / (n * p);
    let bracket = 1.0 - ln_n / (n * p);
    if !(bracket > 0.0) {
        return f64::INFINITY;
    }
    let second = (32.0 * ln_n * ln_n / (((1.0 - delta) * ln_n).exp() * p * bracket)).sqrt();
    first.max(second)
}

/// Log of `Σ_{i ∈ lo..=hi} exp(term(i))` via a max pass and a Neumaier
/// compensated pass. Returns `-∞` for an empty range.
pub fn log_series<F: Fn(u64) -> f64>(lo: u64, hi: u64, order: SumOrder, term: F) -> Result<f64> {
    if hi < lo {
        return Ok(f64::NEG_INFINITY);
    }
    let count = hi - lo + 1;
    if count > SERIES_TERM_LIMIT {
        return Err(Error::SeriesTooLong {
            terms: count,
            limit: SERIES_TERM_LIMIT,
        });
    }
    let indices = |order: SumOrder| -> Box<dyn Iterator<Item = u64>> {
        match order {
            SumOrder::Forward => Box::new(lo..=hi),
            SumOrder::Reverse => Box::new((lo..=hi).rev()),
        }
    };
    let max = indices(order).map(&term).fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return Ok(max);
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in indices(order) {
        let t = (term(i) - max).exp();
        let next = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    Ok(max + (sum + comp).ln())
}

/// The three summands of `Λ` and their assembly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaTerms {
    /// `(m+1) x₁ (r₂p)^{k−m} + n (r₁p)^k`.
    pub lambda0: f64,
    /// `Σ_{i≥2: r_i p ≤ α} x_i (r_i p)^{k−m} (e^{ζ(k−m)} − 1)`.
    pub pi_alpha: f64,
    /// As `pi_alpha` with cutoff `r_i p ≤ 1/ln n`.
    pub pi_inv_log: f64,
    pub pi_alpha_terms: u64,
    pub pi_inv_log_terms: u64,
    pub lambda: f64,
    /// `1 − Λ ≥ ν`.
    pub counting_pass: bool,
}

/// `Λ₀` alone.
pub fn lambda0(sch: &ParamSchedule) -> f64 {
    let km = (sch.k - sch.m) as f64;
    let first = ((sch.m + 1) as f64).ln() + sch.ln_x(1) + km * (sch.r(2) * sch.p).ln();
    let second = sch.ln_n + sch.k as f64 * (sch.r(1) * sch.p).ln();
    first.exp() + second.exp()
}

/// `Π` with the given cutoff on `r_i p`, and its number of terms.
pub fn pi_series(sch: &ParamSchedule, cutoff: f64, order: SumOrder) -> Result<(f64, u64)> {
    let km = (sch.k - sch.m) as f64;
    let hi = sch.last_index(cutoff);
    let ln_factor = (sch.zeta * km).exp_m1().ln();
    let ln_p = sch.p.ln();
    let log = log_series(2, hi, order, |i| sch.ln_x(i) + km * (sch.zeta * i as f64 + ln_p) + ln_factor)?;
    Ok((log.exp(), hi.saturating_sub(1)))
}

/// `Λ = Λ₀ + [m≥2] Π_α + [m=1] (Π_{1/ln n} + 0.7)`.
pub fn assemble_lambda(case: ScheduleCase, lambda0: f64, pi_alpha: f64, pi_inv_log: f64) -> f64 {
    match case {
        ScheduleCase::Dense => lambda0 + pi_alpha,
        ScheduleCase::Sparse => lambda0 + (pi_inv_log + SPARSE_TAIL),
    }
}

pub fn lambda_terms(sch: &ParamSchedule, order: SumOrder) -> Result<LambdaTerms> {
    let l0 = lambda0(sch);
    let (pi_alpha, pi_alpha_terms) = pi_series(sch, sch.alpha, order)?;
    let (pi_inv_log, pi_inv_log_terms) = pi_series(sch, 1.0 / sch.ln_n, order)?;
    let lambda = assemble_lambda(sch.case, l0, pi_alpha, pi_inv_log);
    Ok(LambdaTerms {
        lambda0: l0,
        pi_alpha,
        pi_inv_log,
        pi_alpha_terms,
        pi_inv_log_terms,
        lambda,
        counting_pass: 1.0 - lambda >= sch.nu,
    })
}

/// Lower bounds on the Janson exponent `μ²/(2(μ+Δ))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JansonBounds {
    pub a: u64,
    pub b: u64,
    /// `ν/4 · min{(b/k²)² p/k², (b/k²)^k p^{C(k,2)}/k²}`.
    pub general: f64,
    /// `ν/4 · min{(a/k²)(b/k²) p/k², (a/k²)(b/k²)^{k−1} p^{C(k,2)}/k²}`,
    /// only for `m = 1`.
    pub improved: Option<f64>,
}

fn choose2(k: u64) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

pub fn janson_exponent(sch: &ParamSchedule, a: u64, b: u64) -> JansonBounds {
    janson_exponent_raw(sch.k, sch.m, sch.p, sch.nu, a, b)
}

pub fn janson_exponent_raw(k: u64, m: u64, p: f64, nu: f64, a: u64, b: u64) -> JansonBounds {
    let kf = k as f64;
    let ln_k2 = 2.0 * kf.ln();
    let ln_bk = (b as f64).ln() - ln_k2;
    let ln_ak = (a as f64).ln() - ln_k2;
    let ln_p = p.ln();
    let ln_nu4 = (nu / 4.0).ln();
    let first = 2.0 * ln_bk + ln_p - ln_k2;
    let last = kf * ln_bk + choose2(k) * ln_p - ln_k2;
    let general = (ln_nu4 + first.min(last)).exp();
    let improved = (m == 1).then(|| {
        let first = ln_ak + ln_bk + ln_p - ln_k2;
        let last = ln_ak + (kf - 1.0) * ln_bk + choose2(k) * ln_p - ln_k2;
        (ln_nu4 + first.min(last)).exp()
    });
    JansonBounds { a, b, general, improved }
}

/// `ln C(n, r)` via log-gamma free summation; `-∞` when `r > n`.
pub fn ln_binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return f64::NEG_INFINITY;
    }
    let r = r.min(n - r);
    (0..r).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// The `μ + Δ` upper assembly
/// `Σ_{r=2}^{k} Σ_{x+y=r} |C| C(k−m,x) C(a−(k−m),(k−m)−x) C(m,y) b^{m−y} p^{2C(k,2)−C(r,2)}`
/// with `0 ≤ x ≤ k−m` and `0 ≤ y ≤ m`.
pub fn janson_delta_assembly(k: u64, m: u64, a: u64, b: u64, p: f64, family_size: f64) -> f64 {
    let km = k - m;
    let ln_p = p.ln();
    let mut total = 0.0;
    for r in 2..=k {
        for y in 0..=m.min(r) {
            let x = r - y;
            if x > km {
                continue;
            }
            let rest = a.checked_sub(km).map_or(f64::NEG_INFINITY, |free| ln_binomial(free, km - x));
            let ln_term = ln_binomial(km, x)
                + rest
                + ln_binomial(m, y)
                + (m - y) as f64 * (b as f64).ln()
                + (2.0 * choose2(k) - choose2(r)) * ln_p;
            total += family_size * ln_term.exp();
        }
    }
    total
}

/// Finite-`n` truth values of the schedule's inequality system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityFlags {
    /// `m + 2 ≤ k ≤ ln n`.
    pub k_bound: bool,
    /// `δ ≤ min{1/2 − ρ, (k−1)/k (1 − ρ(k/2+1))} − 9 ln ln n/ln n`.
    pub delta_bound: bool,
    /// `min{ℓ₀, n^{1−δ}p} ≥ max{16m(1+ln(nm)), 8k², ln⁴n}`.
    pub partition: bool,
    /// `min_i ⌈x_i⌉(φ(r_i−1)p − ln³n/ℓ₀) ≥ 1 + max{ln(n ln²n e/ℓ₀), 0}`.
    pub density_x: bool,
    /// `1 − Λ ≥ ν`.
    pub counting: bool,
    /// `s ≥ m + 1`.
    pub s_bound: bool,
    /// The case matches `p ≥ n^{−σ}` versus `p < n^{−σ}`.
    pub p_case: bool,
    /// `δ` equals its case formula (no clamping, no override).
    pub delta_formula: bool,
    /// `(m+1)(φ(α/p−1)p − ln³n/ℓ₀) ≥ 1 + max{ln(n ln²n e/ℓ₀), 0}`; dense case only.
    pub density_alpha: Option<bool>,
}

impl InequalityFlags {
    pub fn all_pass(&self) -> bool {
        self.k_bound
            && self.delta_bound
            && self.partition
            && self.density_x
            && self.counting
            && self.s_bound
            && self.p_case
            && self.delta_formula
            && self.density_alpha.unwrap_or(true)
    }
}

fn density_rhs(sch: &ParamSchedule) -> f64 {
    1.0 + (sch.ln_n + 2.0 * sch.ln_n.ln() + 1.0 - sch.ell0.ln()).max(0.0)
}

pub fn inequality_check(sch: &ParamSchedule) -> Result<InequalityFlags> {
    let terms = lambda_terms(sch, SumOrder::Forward)?;
    inequality_check_with(sch, &terms)
}

fn inequality_check_with(sch: &ParamSchedule, terms: &LambdaTerms) -> Result<InequalityFlags> {
    let (k, m) = (sch.k as f64, sch.m as f64);
    let ln_n = sch.ln_n;
    let k_bound = sch.m + 2 <= sch.k && k <= ln_n;
    let delta_cap = (0.5 - sch.rho).min((k - 1.0) / k * (1.0 - sch.rho * (k / 2.0 + 1.0)));
    let delta_bound = sch.delta <= delta_cap - loglog_correction(ln_n);
    let lhs = sch.ell0.min(sch.n_pow_one_minus_delta() * sch.p);
    let rhs = (16.0 * m * (1.0 + ln_n + m.ln())).max(8.0 * k * k).max(ln_n.powi(4));
    let partition = lhs >= rhs;
    let ln3 = ln_n.powi(3);
    let density_x = if sch.ell0 > 0.0 {
        let target = density_rhs(sch);
        let hi = sch.x_series_len();
        if hi > SERIES_TERM_LIMIT {
            return Err(Error::SeriesTooLong {
                terms: hi,
                limit: SERIES_TERM_LIMIT,
            });
        }
        (1..=hi).all(|i| {
            let phi_i = phi((sch.zeta * i as f64).exp_m1()).expect("r_i > 1");
            sch.x(i).ceil() * (phi_i * sch.p - ln3 / sch.ell0) >= target
        })
    } else {
        false
    };
    let density_alpha = (sch.case == ScheduleCase::Dense).then(|| {
        sch.ell0 > 0.0
            && (m + 1.0) * (phi(sch.alpha / sch.p - 1.0).expect("α/p > 0") * sch.p - ln3 / sch.ell0) >= density_rhs(sch)
    });
    let dense = sch.p >= (-sch.sigma * ln_n).exp();
    Ok(InequalityFlags {
        k_bound,
        delta_bound,
        partition,
        density_x,
        counting: terms.counting_pass,
        s_bound: sch.s > sch.m,
        p_case: (sch.m >= 2) == dense && (sch.case == ScheduleCase::Dense) == dense,
        delta_formula: !sch.delta_clamped && !sch.delta_overridden,
        density_alpha,
    })
}

/// Refined `δ = min{1 − 5ρ/2, ρ} − 9 ln ln n/ln n` with `ρ = 2/5 − ε`.
pub fn refined_delta(n: f64, epsilon: f64) -> Result<f64> {
    refined_delta_ln(n.ln(), epsilon)
}

/// [`refined_delta`] taking `ln n`, for `n` beyond `f64` range.
pub fn refined_delta_ln(ln_n: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(ln_n > 1.0) {
        return Err(Error::InvalidParameter(format!("ln n must exceed 1, got {ln_n}")));
    }
    let rho = 2.0 / 5.0 - epsilon;
    Ok((1.0 - 2.5 * rho).min(rho) - loglog_correction(ln_n))
}

/// One leading-order prediction with `o(·)` terms dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictedBound {
    pub label: &'static str,
    pub value: f64,
    /// Whether `(n, p)` lies in the formula's stated range.
    pub in_range: bool,
}

pub const PREDICTION_LABELS: [&str; 7] = [
    "order_log_n_over_p",
    "sparse_half_log_n_over_p",
    "very_sparse_5_2",
    "upper_sparse_refined",
    "max_clique_3_lower",
    "constant_p_half_log_base",
    "lower_bound_delta_log_base",
];

/// Leading-order values of every closed-form prediction at `(n, p)`.
pub fn predicted_bounds(n: f64, p: f64) -> Result<Vec<PredictedBound>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if !(n > 1.0) {
        return Err(Error::InvalidParameter(format!("n must exceed 1, got {n}")));
    }
    let ln_n = n.ln();
    let rho = -p.ln() / ln_n;
    let log_base = ln_n / -(-p).ln_1p();
    let base = ln_n / p;
    let sch = ParamSchedule::build_ln(ln_n.max(3f64.ln()), p, None).ok();
    let in_main = rho > 0.0 && rho < 0.4;
    Ok(vec![
        PredictedBound {
            label: PREDICTION_LABELS[0],
            value: base,
            in_range: in_main,
        },
        PredictedBound {
            label: PREDICTION_LABELS[1],
            value: 0.5 * base,
            in_range: rho <= SIGMA,
        },
        PredictedBound {
            label: PREDICTION_LABELS[2],
            value: 2.5 * (0.4 * ln_n + p.ln()) / p,
            in_range: rho > 1.0 / 3.0 && rho < 0.4,
        },
        PredictedBound {
            label: PREDICTION_LABELS[3],
            value: (0.5 - rho * (0.5 - rho)) * base,
            in_range: rho < 0.5,
        },
        PredictedBound {
            label: PREDICTION_LABELS[4],
            value: 3.0 * (ln_n / 3.0 + p.ln()) / p,
            in_range: rho > 1.0 / 3.75 && rho < 1.0 / 3.0,
        },
        PredictedBound {
            label: PREDICTION_LABELS[5],
            value: 0.5 * log_base,
            in_range: rho <= SIGMA,
        },
        PredictedBound {
            label: PREDICTION_LABELS[6],
            value: sch.as_ref().map_or(f64::NAN, |s| s.delta * log_base),
            in_range: in_main && sch.is_some(),
        },
    ])
}

/// `(ln n / p) / log_{1/(1−p)} n = −ln(1−p)/p`, which exceeds 1 for every
/// `p ∈ (0, 1)` and grows without bound as `p → 1`.
pub fn log_base_ratio(p: f64) -> f64 {
    -(-p).ln_1p() / p
}

/// Everything computable from a schedule in one place.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub schedule: ParamSchedule,
    pub lambda: LambdaTerms,
    pub flags: InequalityFlags,
    /// Janson bounds at the smallest admissible set, `|W| = ℓ₀`.
    pub janson: JansonBounds,
    pub predictions: Vec<PredictedBound>,
}

pub fn lambda_report(sch: &ParamSchedule) -> Result<BoundReport> {
    let lambda = lambda_terms(sch, SumOrder::Forward)?;
    let flags = inequality_check_with(sch, &lambda)?;
    let ell0 = sch.ell0.max(1.0);
    let a = (ell0 / 4.0).ceil().max(1.0) as u64;
    let b = (ell0 / (4.0 * sch.m as f64)).ceil().max(1.0) as u64;
    let predictions = if sch.n.is_finite() {
        predicted_bounds(sch.n, sch.p)?
    } else {
        Vec::new()
    };
    Ok(BoundReport {
        schedule: sch.clone(),
        janson: janson_exponent(sch, a, b),
        lambda,
        flags,
        predictions,
    })
}
