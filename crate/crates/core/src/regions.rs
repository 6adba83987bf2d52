//! Co-landing ray groups, separators, basic regions, point location,
//! region-type probes, and the per-region census of interior and virtual
//! fixed points.
//!
//! A separator is a pair of rays joined at their common landing point,
//! closed through infinity. Beyond the traced samples a ray is continued
//! horizontally inside the fundamental-domain strip it occupies
//! (exponential) or radially at its external angle (quadratic), and the
//! closure at infinity runs between the two continuations far beyond any
//! desk-scale query. Region ids are the sign vectors of a point against
//! every separator.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::address::enumerate_periodic;
use crate::error::Error;
use crate::maps::{is_finite, Family, MapSpec, Rect, TractGeometry};
use crate::periodic::{classify, CycleClass, PeriodicPointRecord, R_MAX, TOL_IND};
use crate::rays::{land_ray, trace_ray, LandConfig, LandingResult, RayLabel, RayTrace};
use crate::Result;

/// A ray that landed confidently: its trace and its landing result.
#[derive(Clone, Debug, Serialize)]
pub struct TracedRay {
    pub trace: RayTrace,
    pub landing: LandingResult,
}

impl TracedRay {
    pub fn landing_point(&self) -> Complex64 {
        self.landing.landing_point
    }

    pub fn label(&self) -> &RayLabel {
        &self.landing.label
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayFailure {
    pub label: RayLabel,
    pub reason: String,
}

/// Rays fixed by `f^p` that do not land alone, grouped by landing point.
#[derive(Clone, Debug, Serialize)]
pub struct RayPairGroup {
    pub landing_point: Complex64,
    /// Indices into the traced-ray list.
    pub rays: Vec<usize>,
}

/// Outcome of landing every enumerated ray: confident rays, failures, and
/// the co-landing groups.
#[derive(Clone, Debug, Serialize)]
pub struct GammaBuild {
    pub traced: Vec<TracedRay>,
    pub failures: Vec<RayFailure>,
    pub groups: Vec<RayPairGroup>,
}

/// Lands every purely periodic address of period dividing `p` with symbols
/// in `[-window, window]` and groups co-landing rays. Landing failures are
/// reported and excluded, never fatal.
pub fn build_gamma(m: &MapSpec, p: u32, window: u32, cfg: &LandConfig) -> Result<GammaBuild> {
    if m.family != Family::Exponential {
        return Err(Error::UnsupportedFamily(
            "address-window gamma requires the exponential family; use the quadratic oracle path",
        ));
    }
    let mut traced = Vec::new();
    let mut failures = Vec::new();
    for a in enumerate_periodic(p, window) {
        let trace = match trace_ray(m, &a, &cfg.trace) {
            Ok(t) => t,
            Err(e) => {
                failures.push(RayFailure {
                    label: RayLabel::Address(a),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let landing = land_ray(m, &a, cfg)?;
        if landing.confident_point().is_some() {
            traced.push(TracedRay { trace, landing });
        } else {
            failures.push(RayFailure {
                label: RayLabel::Address(a),
                reason: format!(
                    "landing status {:?}, final increment {:.3e}",
                    landing.status, landing.diagnostics.final_increment
                ),
            });
        }
    }
    let groups = group_by_landing_point(&traced, cfg.tol_match);
    Ok(GammaBuild {
        traced,
        failures,
        groups,
    })
}

/// Clusters confident landing points at `tol` and keeps clusters of at
/// least two rays. Rays that land alone are not part of the graph.
pub fn group_by_landing_point(traced: &[TracedRay], tol: f64) -> Vec<RayPairGroup> {
    let mut clusters: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (i, ray) in traced.iter().enumerate() {
        let pt = ray.landing_point();
        match clusters
            .iter_mut()
            .find(|(center, _)| (*center - pt).norm() < tol)
        {
            Some((center, members)) => {
                members.push(i);
                let n = members.len() as f64;
                *center = (*center * (n - 1.0) + pt) / n;
            }
            None => clusters.push((pt, vec![i])),
        }
    }
    clusters
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(landing_point, rays)| RayPairGroup {
            landing_point,
            rays,
        })
        .collect()
}

/// How a separator is closed through infinity.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureInfo {
    /// Exponential: the two fundamental-domain strips of the ray tails.
    StripPair { a: i32, b: i32 },
    /// Quadratic: the arc of external angles (in turns) swept at infinity.
    AngleArc { from: f64, to: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Separator {
    pub group: usize,
    pub ray_a: usize,
    pub ray_b: usize,
    pub landing_point: Complex64,
    pub closure: ClosureInfo,
    /// Closed polygon: the true separator polyline (first `boundary_len`
    /// vertices) followed by the bookkeeping closure through infinity.
    #[serde(skip)]
    pub polygon: Vec<Complex64>,
    #[serde(skip)]
    pub boundary_len: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegionConfig {
    /// Co-landing clustering distance.
    pub tol_match: f64,
    /// Queries closer than this to a separator are on the boundary.
    pub tol_boundary: f64,
    /// Abscissa/radius of the closure through infinity; far beyond any
    /// desk-scale query.
    pub far: f64,
}

impl Default for RegionConfig {
    fn default() -> Self {
        Self {
            tol_match: 1e-5,
            tol_boundary: 1e-6,
            far: 1e6,
        }
    }
}

/// The plane cut along every separator; regions are named by sign vectors.
#[derive(Clone, Debug)]
pub struct RegionDecomposition {
    pub map: MapSpec,
    pub p: u32,
    /// Symbol window used for the enumeration (exponential only).
    pub window: Option<u32>,
    pub traced: Vec<TracedRay>,
    pub failures: Vec<RayFailure>,
    pub groups: Vec<RayPairGroup>,
    pub separators: Vec<Separator>,
    pub config: RegionConfig,
}

pub type RegionId = String;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Located {
    Region(RegionId),
    OnBoundary,
}

impl Located {
    pub fn region(&self) -> Option<&RegionId> {
        match self {
            Located::Region(id) => Some(id),
            Located::OnBoundary => None,
        }
    }
}

/// Builds the region decomposition from grouped rays.
///
/// Each group of `k ≥ 3` rays at one landing point yields `k` separators
/// between angularly adjacent rays; a pair yields one. Separators from
/// distinct groups must not cross.
pub fn basic_regions(
    m: &MapSpec,
    gamma: GammaBuild,
    p: u32,
    window: Option<u32>,
    cfg: &RegionConfig,
) -> Result<RegionDecomposition> {
    let mut separators = Vec::new();
    for (gi, group) in gamma.groups.iter().enumerate() {
        let mut ordered: Vec<(f64, usize)> = group
            .rays
            .iter()
            .map(|&ri| {
                let tangent = incoming_direction(&gamma.traced[ri], group.landing_point);
                (tangent, ri)
            })
            .collect();
        ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
        let k = ordered.len();
        let pair_count = if k == 2 { 1 } else { k };
        for s in 0..pair_count {
            let (_, ra) = ordered[s];
            let (_, rb) = ordered[(s + 1) % k];
            separators.push(build_separator(
                m,
                &gamma.traced,
                gi,
                ra,
                rb,
                group.landing_point,
                cfg,
            )?);
        }
    }

    // separators of distinct groups must not cross
    for i in 0..separators.len() {
        for j in (i + 1)..separators.len() {
            if separators[i].group == separators[j].group {
                continue;
            }
            if polylines_cross(
                &separators[i].polygon[..separators[i].boundary_len],
                &separators[j].polygon[..separators[j].boundary_len],
            ) {
                return Err(Error::CrossingSeparators(
                    separators[i].group,
                    separators[j].group,
                ));
            }
        }
    }

    Ok(RegionDecomposition {
        map: *m,
        p,
        window,
        traced: gamma.traced,
        failures: gamma.failures,
        groups: gamma.groups,
        separators,
        config: *cfg,
    })
}

/// Convenience: enumerate, land, group, and decompose in one call.
pub fn decompose(
    m: &MapSpec,
    p: u32,
    window: u32,
    land: &LandConfig,
    cfg: &RegionConfig,
) -> Result<RegionDecomposition> {
    let gamma = build_gamma(m, p, window, land)?;
    basic_regions(m, gamma, p, Some(window), cfg)
}

fn incoming_direction(ray: &TracedRay, landing: Complex64) -> f64 {
    // last sample comfortably away from the landing point
    for s in ray.trace.samples.iter().rev() {
        let d = s.z - landing;
        if d.norm() > 1e-3 {
            return d.arg();
        }
    }
    (ray.trace.samples[0].z - landing).arg()
}

fn build_separator(
    m: &MapSpec,
    traced: &[TracedRay],
    group: usize,
    ray_a: usize,
    ray_b: usize,
    landing_point: Complex64,
    cfg: &RegionConfig,
) -> Result<Separator> {
    let a = &traced[ray_a];
    let b = &traced[ray_b];
    let mut polygon: Vec<Complex64> = Vec::new();
    // ray a from its far end down to the landing point
    polygon.extend(a.trace.samples.iter().map(|s| s.z));
    polygon.push(landing_point);
    // ray b from the landing point back out
    polygon.extend(b.trace.samples.iter().rev().map(|s| s.z));
    let boundary_len = polygon.len();

    let closure = match m.family {
        Family::Exponential => {
            let strip = |ray: &TracedRay| match ray.label() {
                RayLabel::Address(addr) => addr.first_symbol(),
                RayLabel::Angle(_) => 0,
            };
            let (sa, sb) = (strip(a), strip(b));
            let a_far = a.trace.samples[0].z;
            let b_far = *polygon.last().expect("nonempty");
            polygon.push(Complex64::new(cfg.far, b_far.im));
            polygon.push(Complex64::new(cfg.far, a_far.im));
            ClosureInfo::StripPair { a: sa, b: sb }
        }
        Family::Quadratic => {
            let angle = |ray: &TracedRay| match ray.label() {
                RayLabel::Angle(t) => t.turns(),
                RayLabel::Address(_) => 0.0,
            };
            let (ta, tb) = (angle(a), angle(b));
            let b_far = *polygon.last().expect("nonempty");
            polygon.push(Complex64::from_polar(cfg.far, TAU * tb));
            // arc at infinity, counterclockwise from b's angle to a's angle
            let sweep = (ta - tb).rem_euclid(1.0);
            let steps = ((sweep * 360.0).ceil() as usize).max(2);
            for k in 1..steps {
                let theta = tb + sweep * k as f64 / steps as f64;
                polygon.push(Complex64::from_polar(cfg.far, TAU * theta));
            }
            polygon.push(Complex64::from_polar(cfg.far, TAU * ta));
            let _ = b_far;
            ClosureInfo::AngleArc { from: tb, to: ta }
        }
    };

    Ok(Separator {
        group,
        ray_a,
        ray_b,
        landing_point,
        closure,
        polygon,
        boundary_len,
    })
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len_sqr = ab.norm_sqr();
    if len_sqr == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len_sqr;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn polylines_cross(a: &[Complex64], b: &[Complex64]) -> bool {
    for sa in a.windows(2) {
        for sb in b.windows(2) {
            if segments_intersect(sa[0], sa[1], sb[0], sb[1]) {
                return true;
            }
        }
    }
    false
}

fn point_in_polygon(polygon: &[Complex64], p: Complex64) -> bool {
    let mut inside = false;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x_at = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x_at {
                inside = !inside;
            }
        }
    }
    inside
}

impl RegionDecomposition {
    /// Region id of `z`: crossing parity against every separator, or
    /// `OnBoundary` within `tol_boundary` of a separator polyline.
    pub fn locate(&self, z: Complex64) -> Located {
        if !is_finite(z) {
            return Located::OnBoundary;
        }
        let mut id = String::with_capacity(self.separators.len());
        for sep in &self.separators {
            for w in sep.polygon[..sep.boundary_len].windows(2) {
                if segment_distance(z, w[0], w[1]) < self.config.tol_boundary {
                    return Located::OnBoundary;
                }
            }
            id.push(if point_in_polygon(&sep.polygon, z) {
                '+'
            } else {
                '-'
            });
        }
        Located::Region(id)
    }

    /// With zero separators there is exactly one region.
    pub fn region_count_lower_bound(&self, probe_box: &Rect) -> usize {
        self.discover_regions(probe_box, 41).len()
    }

    /// Probes a grid over `rect` plus small rings around every landing
    /// point, returning each discovered region id with a representative.
    pub fn discover_regions(&self, rect: &Rect, grid: usize) -> Vec<(RegionId, Complex64)> {
        let mut found: BTreeMap<RegionId, Complex64> = BTreeMap::new();
        let mut probes = rect.grid_centers(grid);
        for sep in &self.separators {
            for radius in [1e-2, 1e-1] {
                for k in 0..24 {
                    let dir = Complex64::from_polar(radius, TAU * k as f64 / 24.0);
                    probes.push(sep.landing_point + dir);
                }
            }
        }
        for z in probes {
            if let Located::Region(id) = self.locate(z) {
                found.entry(id).or_insert(z);
            }
        }
        found.into_iter().collect()
    }

    /// Confident landing points with the classification of their cycles.
    pub fn classified_landing_points(&self) -> Vec<(Complex64, CycleClass)> {
        let m = &self.map;
        self.traced
            .iter()
            .filter_map(|ray| {
                let pt = ray.landing.confident_point()?;
                let p = ray.landing.period;
                let minimal = (1..=p)
                    .filter(|d| p % d == 0)
                    .find(|&d| (m.iterate(pt, d) - pt).norm() < 1e-6)
                    .unwrap_or(p);
                let (_, mu) = m.iterate_with_deriv(pt, minimal);
                let (class, _) = classify(mu, TOL_IND, R_MAX);
                Some((pt, class))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CensusConfig {
    /// A cycle point within this distance of a traced landing point is that
    /// landing point, hence not interior.
    pub tol_match: f64,
    /// Probe ring radius around parabolic landing points.
    pub vfp_radius: f64,
    /// Iterations of f^p per probe.
    pub vfp_iters: usize,
    pub vfp_dirs: usize,
    /// Probe orbits leaving this distance are not converging locally.
    pub vfp_leash: f64,
    /// Final/initial distance ratio required to call a probe convergent.
    pub vfp_ratio: f64,
    /// Grid used to discover regions inside the census box.
    pub probe_grid: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            tol_match: 1e-5,
            vfp_radius: 1e-3,
            vfp_iters: 200,
            vfp_dirs: 16,
            vfp_leash: 0.5,
            vfp_ratio: 0.95,
            probe_grid: 41,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusVerdict {
    /// Exactly one interior or virtual fixed point.
    Pass,
    /// More than one: would contradict the separation property.
    Overfull,
    /// None found inside the search box; window-scale incompleteness, not a
    /// refutation.
    EmptyWithinBox,
}

/// An invariant parabolic basin, witnessed by a probe orbit converging to
/// the parabolic landing point from inside the region.
#[derive(Clone, Debug, Serialize)]
pub struct VirtualFixedPoint {
    pub parabolic_point: Complex64,
    pub witness: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub id: RegionId,
    pub interior: Vec<PeriodicPointRecord>,
    pub virtual_points: Vec<VirtualFixedPoint>,
    pub verdict: CensusVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionCensus {
    pub regions: Vec<RegionReport>,
    /// Cycle points identified as landing points of traced rays.
    pub excluded_landing_points: usize,
    /// Repelling cycle points whose branch itinerary leaves the symbol
    /// window: their rays exist beyond the enumeration, so the window
    /// cannot rule on them (exponential family only).
    pub window_excluded: usize,
    /// Cycle points that fell on a separator within tolerance.
    pub boundary_flagged: usize,
}

impl RegionCensus {
    pub fn all_pass(&self) -> bool {
        self.regions
            .iter()
            .all(|r| r.verdict == CensusVerdict::Pass)
    }

    pub fn none_overfull(&self) -> bool {
        self.regions
            .iter()
            .all(|r| r.verdict != CensusVerdict::Overfull)
    }
}

/// Branch itinerary of the `f^p`-orbit through `z`: the inverse-branch
/// index of each orbit point, `round(Im z / 2π)`. For the exponential
/// family this is the address a landing ray of the cycle must carry.
fn branch_itinerary(m: &MapSpec, z: Complex64, p: u32) -> Vec<i32> {
    let mut out = Vec::with_capacity(p as usize);
    let mut w = z;
    for _ in 0..p {
        out.push((w.im / TAU).round() as i32);
        w = m.eval(w);
    }
    out
}

/// Assigns every `f^p`-fixed point in `rect` to its region, excluding
/// landing points of traced rays, and marks virtual fixed points next to
/// parabolic landing points.
///
/// A repelling point whose branch itinerary uses symbols beyond the
/// enumeration window is excluded as window-unresolvable rather than
/// counted: its rays exist but were never traced. The exclusion count is
/// reported so desk-scale incompleteness stays visible.
pub fn census(
    m: &MapSpec,
    decomp: &RegionDecomposition,
    cycles: &[PeriodicPointRecord],
    rect: &Rect,
    cfg: &CensusConfig,
) -> RegionCensus {
    let landing = decomp.classified_landing_points();

    let mut interior_by_region: BTreeMap<RegionId, Vec<PeriodicPointRecord>> = BTreeMap::new();
    let mut virtual_by_region: BTreeMap<RegionId, Vec<VirtualFixedPoint>> = BTreeMap::new();
    let mut excluded = 0usize;
    let mut window_excluded = 0usize;
    let mut boundary_flagged = 0usize;

    for rec in cycles {
        if !rect.contains(rec.point) {
            continue;
        }
        if landing
            .iter()
            .any(|(pt, _)| (pt - rec.point).norm() < cfg.tol_match)
        {
            excluded += 1;
            continue;
        }
        if rec.class.is_repelling() {
            if let Some(window) = decomp.window {
                let itinerary = branch_itinerary(m, rec.point, decomp.p);
                if itinerary.iter().any(|s| s.unsigned_abs() > window) {
                    window_excluded += 1;
                    continue;
                }
            }
        }
        match decomp.locate(rec.point) {
            Located::Region(id) => interior_by_region.entry(id).or_default().push(rec.clone()),
            Located::OnBoundary => boundary_flagged += 1,
        }
    }

    // virtual fixed points: parabolic landing points attract probe orbits
    // inside the adjacent regions
    for (pt, class) in &landing {
        if !class.is_parabolic() || !rect.contains(*pt) {
            continue;
        }
        for k in 0..cfg.vfp_dirs {
            let dir = Complex64::from_polar(cfg.vfp_radius, TAU * k as f64 / cfg.vfp_dirs as f64);
            let w0 = pt + dir;
            if !probe_converges(m, *pt, w0, decomp.p, cfg) {
                continue;
            }
            if let Located::Region(id) = decomp.locate(w0) {
                let known = virtual_by_region.entry(id).or_default();
                if known
                    .iter()
                    .all(|v| (v.parabolic_point - pt).norm() > cfg.tol_match)
                {
                    known.push(VirtualFixedPoint {
                        parabolic_point: *pt,
                        witness: w0,
                    });
                }
            }
        }
    }

    let mut ids: std::collections::BTreeSet<RegionId> = decomp
        .discover_regions(rect, cfg.probe_grid)
        .into_iter()
        .map(|(id, _)| id)
        .collect();
    ids.extend(interior_by_region.keys().cloned());
    ids.extend(virtual_by_region.keys().cloned());

    let regions = ids
        .into_iter()
        .map(|id| {
            let interior = interior_by_region.remove(&id).unwrap_or_default();
            let virtual_points = virtual_by_region.remove(&id).unwrap_or_default();
            let count = interior.len() + virtual_points.len();
            let verdict = match count {
                0 => CensusVerdict::EmptyWithinBox,
                1 => CensusVerdict::Pass,
                _ => CensusVerdict::Overfull,
            };
            RegionReport {
                id,
                interior,
                virtual_points,
                verdict,
            }
        })
        .collect();

    RegionCensus {
        regions,
        excluded_landing_points: excluded,
        window_excluded,
        boundary_flagged,
    }
}

fn probe_converges(
    m: &MapSpec,
    target: Complex64,
    w0: Complex64,
    p: u32,
    cfg: &CensusConfig,
) -> bool {
    let initial = (w0 - target).norm();
    let mut w = w0;
    for _ in 0..cfg.vfp_iters {
        w = m.iterate(w, p);
        if !is_finite(w) || (w - target).norm() > cfg.vfp_leash {
            return false;
        }
    }
    (w - target).norm() <= cfg.vfp_ratio * initial
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionType {
    PolynomialType,
    TranscendentalType,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionTypeReport {
    pub id: RegionId,
    pub kind: RegionType,
    /// Number of probe stages that support the verdict.
    pub confidence: u32,
    /// Bounding box of the region's probes outside the tract.
    pub hull: Option<Rect>,
    pub outside_samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionProbeConfig {
    /// Distances of the far-left probe lines.
    pub stages: Vec<f64>,
    pub y_samples: usize,
    pub viewport: Rect,
    /// Grid for the bounded (non-tract) membership sweep.
    pub base_grid: usize,
}

impl RegionProbeConfig {
    pub fn for_viewport(viewport: Rect) -> Self {
        Self {
            stages: vec![10.0, 100.0, 1_000.0, 10_000.0],
            y_samples: 41,
            viewport,
            base_grid: 31,
        }
    }
}

/// Decides whether a region keeps unbounded membership outside the tract
/// (transcendental type) or its non-tract part stays confined
/// (polynomial type). The verdict is a probe-based heuristic; confidence is
/// the number of probe stages.
pub fn classify_region_type(
    decomp: &RegionDecomposition,
    id: &RegionId,
    tract: &TractGeometry,
    cfg: &RegionProbeConfig,
) -> RegionTypeReport {
    let mut hull: Option<Rect> = None;
    let mut outside_samples = 0usize;
    let mut extend = |z: Complex64| {
        outside_samples += 1;
        hull = Some(match hull {
            None => Rect {
                x0: z.re,
                y0: z.im,
                x1: z.re,
                y1: z.im,
            },
            Some(h) => h.expanded_to(z, 0.0),
        });
    };

    // bounded sweep across the viewport's non-tract part
    for z in cfg.viewport.grid_centers(cfg.base_grid) {
        if tract.outside_tract(z) && decomp.locate(z) == Located::Region(id.clone()) {
            extend(z);
        }
    }

    // far probe lines z = −r + iy at growing r
    let mut all_stages_hit = true;
    for &r in &cfg.stages {
        let mut hit = false;
        for j in 0..cfg.y_samples {
            let y = cfg.viewport.y0
                + (j as f64 + 0.5) / cfg.y_samples as f64 * cfg.viewport.height();
            let z = Complex64::new(-r, y);
            if !tract.outside_tract(z) {
                continue;
            }
            if decomp.locate(z) == Located::Region(id.clone()) {
                hit = true;
                extend(z);
            }
        }
        if !hit {
            all_stages_hit = false;
        }
    }

    RegionTypeReport {
        id: id.clone(),
        kind: if all_stages_hit {
            RegionType::TranscendentalType
        } else {
            RegionType::PolynomialType
        },
        confidence: cfg.stages.len() as u32,
        hull,
        outside_samples,
    }
}

/// Serializable summary of a decomposition for reports: groups, separator
/// polylines (decimated), failures.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSummary {
    pub p: u32,
    pub window: Option<u32>,
    pub traced_rays: usize,
    pub failures: Vec<RayFailure>,
    pub groups: Vec<GroupSummary>,
    pub separators: Vec<SeparatorSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub landing_point: Complex64,
    pub rays: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatorSummary {
    pub rays: (String, String),
    pub landing_point: Complex64,
    pub closure: ClosureInfo,
    pub polyline: Vec<(f64, f64)>,
}

impl RegionDecomposition {
    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            p: self.p,
            window: self.window,
            traced_rays: self.traced.len(),
            failures: self.failures.clone(),
            groups: self
                .groups
                .iter()
                .map(|g| GroupSummary {
                    landing_point: g.landing_point,
                    rays: g
                        .rays
                        .iter()
                        .map(|&i| self.traced[i].label().to_string())
                        .collect(),
                })
                .collect(),
            separators: self
                .separators
                .iter()
                .map(|s| {
                    let boundary = &s.polygon[..s.boundary_len];
                    let step = (boundary.len() / 64).max(1);
                    SeparatorSummary {
                        rays: (
                            self.traced[s.ray_a].label().to_string(),
                            self.traced[s.ray_b].label().to_string(),
                        ),
                        landing_point: s.landing_point,
                        closure: s.closure.clone(),
                        polyline: boundary
                            .iter()
                            .step_by(step)
                            .map(|z| (z.re, z.im))
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}
