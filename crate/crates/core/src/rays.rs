//! Dynamic rays of the exponential family by iterated pullback, and landing
//! detection for periodic rays.
//!
//! Deep in the tract the ray of address `s₁s₂s₃…` at potential `t` sits near
//! `t + 2πi·s₁`. One refinement step pulls the tail of the shifted address
//! back through the inverse branch: `g_a(t) = Log_{s₁}(g_{σa}(e^t) − c)`,
//! where `Log_n` is the logarithm branch with imaginary part in
//! `(2πn − π, 2πn + π]`. Because the potential ladder `t, e^t, e^{e^t}, …`
//! grows tower-fast, a handful of refinements already reproduce the ray to
//! machine accuracy.
//!
//! Sample points are carried internally as *reduced offsets* against
//! `t + 2πi·s₁`. That keeps the functional-equation defect meaningful at
//! potentials where `e^t` dwarfs double-precision resolution: the defect is
//! evaluated as `e^t(e^λ − 1) + (c − offset_{σa})`, all O(1) quantities.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use std::f64::consts::TAU;

use crate::address::ExternalAddress;
use crate::error::Error;
use crate::maps::{is_finite, Family, MapSpec};
use crate::polyoracle::ExternalAngle;
use crate::Result;

/// Symbolic name of a ray: an external address (exponential family) or an
/// external angle (quadratic oracle).
#[derive(Clone, Debug, PartialEq)]
pub enum RayLabel {
    Address(ExternalAddress),
    Angle(ExternalAngle),
}

impl RayLabel {
    pub fn as_address(&self) -> Option<&ExternalAddress> {
        match self {
            RayLabel::Address(a) => Some(a),
            RayLabel::Angle(_) => None,
        }
    }
}

impl fmt::Display for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayLabel::Address(a) => write!(f, "{a}"),
            RayLabel::Angle(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for RayLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Why a trace stopped where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    ReachedTMin,
    Nonconvergent,
    HitSingularNeighborhood,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RaySample {
    pub t: f64,
    pub z: Complex64,
}

/// Sampled polyline approximation of a dynamic ray.
#[derive(Clone, Debug, Serialize)]
pub struct RayTrace {
    pub label: RayLabel,
    /// Samples with strictly decreasing potential.
    pub samples: Vec<RaySample>,
    /// Max functional-equation defect over the samples; recorded, never
    /// assumed zero.
    pub residual: f64,
    pub truncation: Truncation,
}

impl RayTrace {
    pub fn endpoint(&self) -> Complex64 {
        self.samples.last().expect("samples nonempty").z
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceConfig {
    pub t_max: f64,
    pub t_min: f64,
    /// Pullback refinements per sample.
    pub depth: u32,
    /// Geometric grid ratio for the potential samples.
    pub grid_ratio: f64,
    /// Pullback steps are refused within this distance of the singular value.
    pub guard_radius: f64,
    /// Potentials above this are represented by the asymptotic tail seed;
    /// the first omitted correction is below e^{-50}.
    pub asym_threshold: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            t_max: 20.0,
            t_min: 0.05,
            depth: 12,
            grid_ratio: 0.9,
            guard_radius: 1e-4,
            asym_threshold: 50.0,
        }
    }
}

impl TraceConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t_max > self.t_min && self.t_min >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need t_max > t_min >= 0, got t_max={} t_min={}",
                self.t_max, self.t_min
            )));
        }
        if self.t_max > 300.0 {
            return Err(Error::InvalidArgument(
                "t_max beyond 300 leaves the range of double precision".into(),
            ));
        }
        if self.depth < 1 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        if !(self.grid_ratio > 0.0 && self.grid_ratio < 1.0) {
            return Err(Error::InvalidArgument("grid ratio must be in (0,1)".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LandConfig {
    pub trace: TraceConfig,
    /// Endpoint motion below this, sustained, declares a landing candidate.
    pub tol_cluster: f64,
    /// Consecutive small moves required for a candidate.
    pub cluster_run: u32,
    /// Newton polish target on |f^p(z) − z|.
    pub newton_tol: f64,
    /// Polished point must sit this close to the pullback candidate.
    pub tol_match: f64,
    /// Displacement decay ratio at or above this reads as subgeometric.
    pub parabolic_ratio: f64,
    /// Consecutive near-1 ratios required to flag a parabolic landing.
    pub parabolic_run: u32,
    pub max_pullbacks: u32,
    pub max_newton: u32,
}

impl Default for LandConfig {
    fn default() -> Self {
        Self {
            trace: TraceConfig::default(),
            tol_cluster: 1e-7,
            cluster_run: 3,
            newton_tol: 1e-10,
            tol_match: 1e-5,
            parabolic_ratio: 0.97,
            parabolic_run: 20,
            max_pullbacks: 3000,
            max_newton: 80,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LandingStatus {
    Landed,
    ParabolicSlow,
    Failed,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LandingDiagnostics {
    pub pullback_steps: u32,
    pub final_increment: f64,
    pub final_ratio: Option<f64>,
    pub hit_singular_guard: bool,
}

/// Outcome of landing a periodic ray. A failed landing keeps the last
/// endpoint and the decay diagnostics; it never fabricates a landing point.
#[derive(Clone, Debug, Serialize)]
pub struct LandingResult {
    pub label: RayLabel,
    pub landing_point: Complex64,
    pub period: u32,
    pub polish_residual: f64,
    pub status: LandingStatus,
    pub diagnostics: LandingDiagnostics,
}

impl LandingResult {
    /// Landing point usable for grouping and censuses: a clean landing, or a
    /// parabolic-slow approach whose Newton polish still certified a
    /// periodic point.
    pub fn confident_point(&self) -> Option<Complex64> {
        match self.status {
            LandingStatus::Landed => Some(self.landing_point),
            LandingStatus::ParabolicSlow if self.polish_residual < 1e-8 => {
                Some(self.landing_point)
            }
            _ => None,
        }
    }
}

pub(crate) enum PullIssue {
    SingularGuard,
    NotFinite,
}

/// `e^z − 1` without cancellation for small `z`.
fn cexpm1(z: Complex64) -> Complex64 {
    let s = (z.im * 0.5).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * s * s,
        z.re.exp() * z.im.sin(),
    )
}

/// Principal `log(1 + q)` without forming `1 + q`: keeps the low bits of a
/// tiny `q`, which the functional-equation defect multiplies back by `e^t`.
fn clog1p(q: Complex64) -> Complex64 {
    // |1+q|² − 1 = 2·Re q + |q|²
    let u = 2.0 * q.re + q.norm_sqr();
    Complex64::new(0.5 * u.ln_1p(), q.im.atan2(1.0 + q.re))
}

/// Reduced offset `w` of the ray of address `σ^shift(a)` at potential `t`,
/// refined `depth` times; the ray point is `t + 2πi·s₁ + w`.
fn reduced_offset(
    c: Complex64,
    a: &ExternalAddress,
    shift: usize,
    t: f64,
    depth: u32,
    cfg: &TraceConfig,
) -> std::result::Result<Complex64, PullIssue> {
    if depth == 0 || t > cfg.asym_threshold {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let next = reduced_offset(c, a, shift + 1, t.exp(), depth - 1, cfg)?;
    let s_next = a.symbol_at(shift + 1) as f64;
    let offset_next = Complex64::new(next.re, next.im + TAU * s_next);
    let damp = (-t).exp();
    let q = (offset_next - c) * damp;
    if !is_finite(q) {
        return Err(PullIssue::NotFinite);
    }
    // |g_{σa}(e^t) − c| = e^t |1 + q|
    let v_norm = Complex64::new(1.0 + q.re, q.im).norm();
    if v_norm <= cfg.guard_radius * damp {
        return Err(PullIssue::SingularGuard);
    }
    Ok(clog1p(q))
}

fn potential_grid(cfg: &TraceConfig) -> Vec<f64> {
    let floor = if cfg.t_min > 0.0 { cfg.t_min } else { 1e-3 };
    let mut ts = Vec::new();
    let mut t = cfg.t_max;
    while t > floor * (1.0 + 1e-12) && ts.len() < 4000 {
        ts.push(t);
        t *= cfg.grid_ratio;
    }
    match ts.last() {
        Some(&last) if (last - cfg.t_min).abs() > 1e-12 * cfg.t_max => ts.push(cfg.t_min),
        None => ts.push(cfg.t_min),
        _ => {}
    }
    ts
}

/// Traces the dynamic ray of `a` on a geometric potential grid.
///
/// The residual is the max over samples of `|f(g_a(t)) − g_{σa}(e^t)|`,
/// with the shifted address traced to the same depth.
pub fn trace_ray(m: &MapSpec, a: &ExternalAddress, cfg: &TraceConfig) -> Result<RayTrace> {
    if m.family != Family::Exponential {
        return Err(Error::UnsupportedFamily(
            "dynamic ray tracing by address requires the exponential family",
        ));
    }
    cfg.validate()?;
    let c = m.c;
    let s1 = a.symbol_at(0) as f64;
    let s2 = a.symbol_at(1) as f64;

    let mut samples: Vec<RaySample> = Vec::new();
    let mut residual = 0.0f64;
    let mut truncation = Truncation::ReachedTMin;

    'grid: for t in potential_grid(cfg) {
        let w = match reduced_offset(c, a, 0, t, cfg.depth, cfg) {
            Ok(w) => w,
            Err(_) => {
                truncation = Truncation::HitSingularNeighborhood;
                break 'grid;
            }
        };
        // Cauchy contraction check across the last two refinement depths
        if cfg.depth >= 3 {
            let shallower: std::result::Result<Vec<Complex64>, PullIssue> = (1..=2)
                .map(|k| reduced_offset(c, a, 0, t, cfg.depth - k, cfg))
                .collect();
            match shallower {
                Ok(ws) => {
                    let d_prev = (ws[0] - ws[1]).norm();
                    let d_last = (w - ws[0]).norm();
                    if d_last > d_prev + 1e-13 * (1.0 + w.norm()) && d_last > 1e-12 {
                        truncation = Truncation::Nonconvergent;
                        break 'grid;
                    }
                }
                Err(_) => {
                    truncation = Truncation::HitSingularNeighborhood;
                    break 'grid;
                }
            }
        }
        // functional-equation defect, evaluated in offset space
        let u = t.exp();
        let w_shift = match reduced_offset(c, a, 1, u, cfg.depth, cfg) {
            Ok(w) => w,
            Err(_) => {
                truncation = Truncation::HitSingularNeighborhood;
                break 'grid;
            }
        };
        let target_offset = Complex64::new(w_shift.re, w_shift.im + TAU * s2);
        let defect = cexpm1(w) * u + (c - target_offset);
        residual = residual.max(defect.norm());

        samples.push(RaySample {
            t,
            z: Complex64::new(t + w.re, TAU * s1 + w.im),
        });
    }

    if samples.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "ray {a} produced no valid samples (singular value too close to the tail)"
        )));
    }
    Ok(RayTrace {
        label: RayLabel::Address(a.clone()),
        samples,
        residual,
        truncation,
    })
}

/// Logarithm branch with imaginary part in `(2πn − π, 2πn + π]`.
pub(crate) fn log_branch(w: Complex64, n: i32) -> Complex64 {
    let l = w.ln();
    Complex64::new(l.re, l.im + TAU * n as f64)
}

/// One pullback of the full period block: the inverse branch of `f^p`
/// fixing the cycle of the ray's landing point.
pub(crate) fn pull_period_block(
    c: Complex64,
    symbols: &[i32],
    z: Complex64,
    guard_radius: f64,
) -> std::result::Result<Complex64, PullIssue> {
    let mut y = z;
    for &s in symbols.iter().rev() {
        let w = y - c;
        if w.norm() < guard_radius {
            return Err(PullIssue::SingularGuard);
        }
        y = log_branch(w, s);
        if !is_finite(y) {
            return Err(PullIssue::NotFinite);
        }
    }
    Ok(y)
}

/// Walks pullback endpoints toward the landing point and polishes the
/// candidate by Newton iteration on `f^p(z) − z`. Shared by the exponential
/// rays and the quadratic oracle rays.
pub(crate) fn drive_landing(
    m: &MapSpec,
    label: RayLabel,
    period: u32,
    start: Complex64,
    mut pull: impl FnMut(Complex64) -> std::result::Result<Complex64, PullIssue>,
    cfg: &LandConfig,
) -> LandingResult {
    let mut z = start;
    let mut prev_increment = f64::NAN;
    let mut last_ratio: Option<f64> = None;
    let mut small_run = 0u32;
    let mut ratio_run = 0u32;
    let mut steps = 0u32;
    let mut guard_hit = false;
    let mut parabolic = false;
    let mut candidate: Option<Complex64> = None;

    for n in 0..cfg.max_pullbacks {
        let next = match pull(z) {
            Ok(v) => v,
            Err(_) => {
                guard_hit = true;
                break;
            }
        };
        let increment = (next - z).norm();
        steps = n + 1;
        z = next;
        if prev_increment.is_finite() && prev_increment > 0.0 {
            let r = increment / prev_increment;
            last_ratio = Some(r);
            if r >= cfg.parabolic_ratio {
                ratio_run += 1;
            } else {
                ratio_run = 0;
            }
        }
        if increment < cfg.tol_cluster {
            small_run += 1;
        } else {
            small_run = 0;
        }
        prev_increment = increment;
        if small_run >= cfg.cluster_run {
            candidate = Some(z);
            break;
        }
        if ratio_run >= cfg.parabolic_run {
            parabolic = true;
            candidate = Some(z);
            break;
        }
    }

    let diagnostics = LandingDiagnostics {
        pullback_steps: steps,
        final_increment: if prev_increment.is_finite() {
            prev_increment
        } else {
            0.0
        },
        final_ratio: last_ratio,
        hit_singular_guard: guard_hit,
    };

    let Some(cand) = candidate else {
        return LandingResult {
            label,
            landing_point: z,
            period,
            polish_residual: f64::INFINITY,
            status: LandingStatus::Failed,
            diagnostics,
        };
    };

    let polish =
        crate::periodic::newton_periodic(m, cand, period, cfg.newton_tol, cfg.max_newton);

    let (landing_point, polish_residual, newton_ok) = match polish {
        Some((zp, res)) => (zp, res, res < cfg.newton_tol),
        None => (cand, f64::INFINITY, false),
    };

    let status = if parabolic {
        LandingStatus::ParabolicSlow
    } else if newton_ok && (landing_point - cand).norm() < cfg.tol_match {
        LandingStatus::Landed
    } else {
        LandingStatus::Failed
    };

    LandingResult {
        label,
        landing_point,
        period,
        polish_residual,
        status,
        diagnostics,
    }
}

/// Lands the purely periodic ray of `a`: traces to the low-potential end and
/// then pulls the endpoint back through the full period block until it
/// clusters (geometric decay, repelling landing) or decays subgeometrically
/// (parabolic landing).
pub fn land_ray(m: &MapSpec, a: &ExternalAddress, cfg: &LandConfig) -> Result<LandingResult> {
    if m.family != Family::Exponential {
        return Err(Error::UnsupportedFamily(
            "address-labelled rays require the exponential family",
        ));
    }
    if !a.is_purely_periodic() {
        return Err(Error::InvalidArgument(format!(
            "landing requires a purely periodic address, got {a}"
        )));
    }
    let trace = trace_ray(m, a, &cfg.trace)?;
    let period = a.period_len() as u32;
    let symbols: Vec<i32> = (0..a.period_len()).map(|k| a.symbol_at(k)).collect();
    let c = m.c;
    let guard = cfg.trace.guard_radius;
    let start = trace.endpoint();
    Ok(drive_landing(
        m,
        RayLabel::Address(a.clone()),
        period,
        start,
        |z| pull_period_block(c, &symbols, z, guard),
        cfg,
    ))
}

/// Traces and lands in one call, returning both.
pub fn trace_and_land(
    m: &MapSpec,
    a: &ExternalAddress,
    cfg: &LandConfig,
) -> Result<(RayTrace, LandingResult)> {
    let trace = trace_ray(m, a, &cfg.trace)?;
    let landing = land_ray(m, a, cfg)?;
    Ok((trace, landing))
}
