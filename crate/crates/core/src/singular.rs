//! Singular orbits through the region decomposition: itinerary labels,
//! trapping verification, and the non-repelling cycle count against the
//! number of singular values.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::maps::{is_finite, Family, MapSpec, Rect};
use crate::periodic::{
    estimate_siegel_boundary, find_periodic_points, CycleClass, PeriodicPointRecord,
    PeriodicSearchConfig, SiegelBoundary, SiegelConfig,
};
use crate::polyoracle::{build_gamma_quadratic, QuadRayConfig};
use crate::rays::LandConfig;
use crate::regions::{
    basic_regions, build_gamma, Located, RegionConfig, RegionDecomposition, RegionId,
};
use crate::Result;

/// Label of one orbit point against a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointLabel {
    Region(RegionId),
    OnBoundary,
    Escaped,
}

/// A singular orbit with per-iterate region labels.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTrace {
    pub start: Complex64,
    pub points: Vec<Complex64>,
    pub labels: Vec<PointLabel>,
    pub escaped_at: Option<usize>,
}

/// Iterates every singular value `n` steps (or to escape), labelling each
/// point by its region. Boundary labels are recorded and counted, never
/// fatal.
pub fn trace_singular_orbit(
    m: &MapSpec,
    decomp: &RegionDecomposition,
    n: usize,
) -> Vec<OrbitTrace> {
    m.singular_values()
        .iter()
        .map(|sv| {
            let orbit = m.orbit(sv.value, n, m.default_escape_radius());
            let labels = orbit
                .points
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    if Some(k) == orbit.escaped_at || !is_finite(*z) {
                        PointLabel::Escaped
                    } else {
                        match decomp.locate(*z) {
                            Located::Region(id) => PointLabel::Region(id),
                            Located::OnBoundary => PointLabel::OnBoundary,
                        }
                    }
                })
                .collect();
            OrbitTrace {
                start: sv.value,
                points: orbit.points,
                labels,
                escaped_at: orbit.escaped_at,
            }
        })
        .collect()
}

/// A whole cycle: points in orbit order, minimal period, class.
#[derive(Clone, Debug, Serialize)]
pub struct CycleSummary {
    pub points: Vec<Complex64>,
    pub period: u32,
    pub multiplier: Complex64,
    pub class: CycleClass,
    /// Set when the boundary estimator ran on an irrationally indifferent
    /// cycle: a detected linearization disk is Siegel-consistent. The
    /// Siegel/Cremer distinction itself is not decidable in finite
    /// precision, so this stays a candidate flag.
    pub siegel_candidate: Option<bool>,
}

/// Groups per-point records into cycles, deduplicated by the cycle's
/// lexicographically smallest point.
pub fn group_cycles(m: &MapSpec, records: &[PeriodicPointRecord]) -> Vec<CycleSummary> {
    let mut cycles: Vec<CycleSummary> = Vec::new();
    for rec in records {
        let mut pts = vec![rec.point];
        for _ in 1..rec.period {
            pts.push(m.eval(*pts.last().unwrap()));
        }
        let key = canonical_point(&pts);
        let duplicate = cycles.iter().any(|c| {
            c.period == rec.period && (canonical_point(&c.points) - key).norm() < 1e-6
        });
        if !duplicate {
            cycles.push(CycleSummary {
                points: pts,
                period: rec.period,
                multiplier: rec.multiplier,
                class: rec.class.clone(),
                siegel_candidate: None,
            });
        }
    }
    cycles.sort_by(|a, b| {
        let ka = canonical_point(&a.points);
        let kb = canonical_point(&b.points);
        (a.period, ka.re, ka.im)
            .partial_cmp(&(b.period, kb.re, kb.im))
            .expect("finite")
    });
    cycles
}

fn canonical_point(pts: &[Complex64]) -> Complex64 {
    *pts.iter()
        .min_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite"))
        .expect("nonempty cycle")
}

/// Distances the verified orbit must keep from competing targets.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AvoidanceTargets {
    /// Points of every other non-repelling cycle.
    pub other_cycles: Vec<Complex64>,
    /// Repelling points fixed under the decomposition period that no traced
    /// ray landed on (rationally invisible within the window).
    pub invisible_repelling: Vec<Complex64>,
    /// Repelling landing points of the traced rays.
    pub traced_repelling_landing: Vec<Complex64>,
}

/// Builds the avoidance target set for `target` from the full cycle list
/// and the decomposition's traced rays.
pub fn avoidance_targets(
    cycles: &[CycleSummary],
    target: &CycleSummary,
    decomp: &RegionDecomposition,
) -> AvoidanceTargets {
    let target_key = canonical_point(&target.points);
    let landing = decomp.classified_landing_points();
    let mut out = AvoidanceTargets::default();
    for c in cycles {
        let is_target =
            c.period == target.period && (canonical_point(&c.points) - target_key).norm() < 1e-6;
        if is_target {
            continue;
        }
        if !c.class.is_repelling() {
            out.other_cycles.extend(c.points.iter().copied());
        } else {
            for &pt in &c.points {
                let matched = landing.iter().any(|(lp, _)| (lp - pt).norm() < 1e-5);
                if !matched {
                    out.invisible_repelling.push(pt);
                }
            }
        }
    }
    for (pt, class) in landing {
        if class.is_repelling() {
            out.traced_repelling_landing.push(pt);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrappingConfig {
    /// Orbit length N.
    pub iters: usize,
    /// Fraction of the orbit treated as the accumulation tail.
    pub tail_fraction: f64,
    /// Accumulation is accepted below this distance.
    pub accumulation_threshold: f64,
    /// Avoidance margins must exceed `margin_factor` times the
    /// accumulation threshold.
    pub margin_factor: f64,
    /// Also measure the tail at 2N and report both numbers.
    pub check_improvement: bool,
}

impl Default for TrappingConfig {
    fn default() -> Self {
        Self {
            iters: 10_000,
            tail_fraction: 0.5,
            accumulation_threshold: 1e-2,
            margin_factor: 10.0,
            check_improvement: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum AccumulationTarget {
    CyclePoint { point: Complex64 },
    SiegelBoundaryCloud,
}

#[derive(Clone, Debug, Serialize)]
pub struct AccumulationEntry {
    pub target: AccumulationTarget,
    pub min_tail_distance: f64,
    /// Tail distance after doubling the iterate budget, when requested.
    pub min_tail_distance_doubled: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AvoidanceEntry {
    pub point: Complex64,
    pub min_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AvoidanceReport {
    pub other_cycles: Vec<AvoidanceEntry>,
    pub invisible_repelling: Vec<AvoidanceEntry>,
    pub traced_repelling_landing: Vec<AvoidanceEntry>,
}

impl AvoidanceReport {
    fn margins_hold(&self, floor: f64) -> bool {
        self.other_cycles
            .iter()
            .chain(&self.invisible_repelling)
            .chain(&self.traced_repelling_landing)
            .all(|e| e.min_distance > floor)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrappingReport {
    pub q: u32,
    pub p: u32,
    /// Region containing the singular value (relabelled B₀).
    pub base_region: Option<RegionId>,
    /// Regions B₀ … B_{q−1} visited by the first q iterates.
    pub region_pattern: Vec<PointLabel>,
    /// `f^n(v)` sits in `B_{n mod q}` for every labelled iterate.
    pub pattern_ok: bool,
    pub boundary_hits: usize,
    pub escaped_at: Option<usize>,
    pub accumulation: Vec<AccumulationEntry>,
    pub avoidance: AvoidanceReport,
    pub accumulation_threshold: f64,
    pub margin_floor: f64,
    pub pass: bool,
}

/// Verifies that the singular orbit is trapped by the decomposition: the
/// value sits in some region B₀, follows the residue pattern
/// `f^n(v) ∈ B_{n mod q}`, accumulates on the target cycle (or its Siegel
/// boundary cloud), and keeps its distance from every competing target.
pub fn verify_trapping(
    m: &MapSpec,
    cycle: &CycleSummary,
    siegel: Option<&SiegelBoundary>,
    decomp: &RegionDecomposition,
    targets: &AvoidanceTargets,
    cfg: &TrappingConfig,
) -> Result<TrappingReport> {
    let q = cycle.period;
    let p = decomp.p;
    if p % q != 0 {
        return Err(Error::PeriodMismatch { p, q });
    }
    if cycle.class.is_repelling() {
        return Err(Error::InvalidArgument(
            "trapping target must be a non-repelling cycle".into(),
        ));
    }

    let v = m.singular_values()[0].value;
    let orbit = m.orbit(v, cfg.iters, m.default_escape_radius());
    let labels: Vec<PointLabel> = orbit
        .points
        .iter()
        .enumerate()
        .map(|(k, z)| {
            if Some(k) == orbit.escaped_at || !is_finite(*z) {
                PointLabel::Escaped
            } else {
                match decomp.locate(*z) {
                    Located::Region(id) => PointLabel::Region(id),
                    Located::OnBoundary => PointLabel::OnBoundary,
                }
            }
        })
        .collect();

    let region_pattern: Vec<PointLabel> = (0..q as usize)
        .map(|i| labels.get(i).cloned().unwrap_or(PointLabel::Escaped))
        .collect();
    let base_region = match region_pattern.first() {
        Some(PointLabel::Region(id)) => Some(id.clone()),
        _ => None,
    };

    let mut pattern_ok = base_region.is_some()
        && region_pattern
            .iter()
            .all(|l| matches!(l, PointLabel::Region(_)));
    let mut boundary_hits = 0usize;
    if pattern_ok {
        for (k, label) in labels.iter().enumerate() {
            match label {
                PointLabel::Region(id) => {
                    if *label != region_pattern[k % q as usize]
                        && Some(id) != region_pattern[k % q as usize].region_id()
                    {
                        pattern_ok = false;
                        break;
                    }
                }
                PointLabel::OnBoundary => boundary_hits += 1,
                PointLabel::Escaped => {
                    pattern_ok = false;
                    break;
                }
            }
        }
    }

    let tail_start = (orbit.points.len() as f64 * cfg.tail_fraction) as usize;
    let tail = finite_tail(&orbit.points, tail_start);

    let doubled_tail: Option<Vec<Complex64>> = if cfg.check_improvement {
        let orbit2 = m.orbit(v, cfg.iters * 2, m.default_escape_radius());
        Some(finite_tail(&orbit2.points, orbit.points.len()))
    } else {
        None
    };

    let mut accumulation = Vec::new();
    match siegel {
        Some(boundary) => {
            let dist = |pts: &[Complex64]| {
                pts.iter()
                    .map(|z| boundary.min_distance(*z))
                    .fold(f64::INFINITY, f64::min)
            };
            accumulation.push(AccumulationEntry {
                target: AccumulationTarget::SiegelBoundaryCloud,
                min_tail_distance: dist(&tail),
                min_tail_distance_doubled: doubled_tail.as_deref().map(dist),
            });
        }
        None => {
            for &pt in &cycle.points {
                let dist = |pts: &[Complex64]| {
                    pts.iter()
                        .map(|z| (z - pt).norm())
                        .fold(f64::INFINITY, f64::min)
                };
                accumulation.push(AccumulationEntry {
                    target: AccumulationTarget::CyclePoint { point: pt },
                    min_tail_distance: dist(&tail),
                    min_tail_distance_doubled: doubled_tail.as_deref().map(dist),
                });
            }
        }
    }

    let whole: Vec<Complex64> = orbit.points.iter().copied().filter(|z| is_finite(*z)).collect();
    let entry = |pt: Complex64| AvoidanceEntry {
        point: pt,
        min_distance: whole
            .iter()
            .map(|z| (z - pt).norm())
            .fold(f64::INFINITY, f64::min),
    };
    let avoidance = AvoidanceReport {
        other_cycles: targets.other_cycles.iter().map(|&p| entry(p)).collect(),
        invisible_repelling: targets
            .invisible_repelling
            .iter()
            .map(|&p| entry(p))
            .collect(),
        traced_repelling_landing: targets
            .traced_repelling_landing
            .iter()
            .map(|&p| entry(p))
            .collect(),
    };

    let margin_floor = cfg.margin_factor * cfg.accumulation_threshold;
    let accumulation_ok = accumulation
        .iter()
        .all(|a| a.min_tail_distance <= cfg.accumulation_threshold);
    let pass = pattern_ok
        && orbit.escaped_at.is_none()
        && accumulation_ok
        && avoidance.margins_hold(margin_floor);

    Ok(TrappingReport {
        q,
        p,
        base_region,
        region_pattern,
        pattern_ok,
        boundary_hits,
        escaped_at: orbit.escaped_at,
        accumulation,
        avoidance,
        accumulation_threshold: cfg.accumulation_threshold,
        margin_floor,
        pass,
    })
}

impl PointLabel {
    fn region_id(&self) -> Option<&RegionId> {
        match self {
            PointLabel::Region(id) => Some(id),
            _ => None,
        }
    }
}

fn finite_tail(points: &[Complex64], from: usize) -> Vec<Complex64> {
    points
        .iter()
        .skip(from)
        .copied()
        .filter(|z| is_finite(*z))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FsVerdict {
    Pass,
    /// The window or tolerances could not settle the question.
    Inconclusive,
    /// More non-repelling cycles than singular values: an implementation or
    /// tolerance defect, never accepted silently.
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct FsReport {
    pub max_period: u32,
    pub search: Rect,
    pub singular_count: usize,
    #[serde(rename = "cycles_found")]
    pub cycles: Vec<CycleSummary>,
    pub non_repelling: Vec<CycleSummary>,
    pub verdict: FsVerdict,
    pub note: String,
    pub siegel: Option<SiegelBoundary>,
    pub trapping: Option<TrappingReport>,
}

/// Everything the count needs; defaults mirror the per-module ledgers.
#[derive(Clone, Debug)]
pub struct FsConfig {
    pub max_period: u32,
    pub search: Rect,
    pub window: u32,
    pub land: LandConfig,
    pub periodic: PeriodicSearchConfig,
    pub region: RegionConfig,
    pub quad_ray: QuadRayConfig,
    pub siegel: SiegelConfig,
    pub trapping: TrappingConfig,
}

impl FsConfig {
    pub fn new(max_period: u32, search: Rect, window: u32) -> Self {
        Self {
            max_period,
            search,
            window,
            land: LandConfig::default(),
            periodic: PeriodicSearchConfig::default(),
            region: RegionConfig::default(),
            quad_ray: QuadRayConfig::default(),
            siegel: SiegelConfig::default(),
            trapping: TrappingConfig::default(),
        }
    }
}

/// Detects all non-repelling cycles of period up to `max_period` in the
/// box, asserts the count never exceeds the number of singular values, and
/// verifies the trapping of the singular orbit against the cycle found.
pub fn fatou_shishikura_report(m: &MapSpec, cfg: &FsConfig) -> Result<FsReport> {
    let mut records = Vec::new();
    for p in 1..=cfg.max_period {
        records.extend(find_periodic_points(m, p, &cfg.search, &cfg.periodic));
    }
    let cycles = group_cycles(m, &records);
    let non_repelling: Vec<CycleSummary> = cycles
        .iter()
        .filter(|c| !c.class.is_repelling())
        .cloned()
        .collect();
    let singular_count = m.singular_values().len();

    let (verdict, note) = if non_repelling.len() > singular_count {
        (
            FsVerdict::Fail,
            format!(
                "{} non-repelling cycles exceed {} singular values",
                non_repelling.len(),
                singular_count
            ),
        )
    } else {
        (
            FsVerdict::Pass,
            format!(
                "{} non-repelling cycle(s) within the bound of {}; complete only relative to \
                 the box and period window; the infinitely-many-singular-values trapping case \
                 is not applicable to this family",
                non_repelling.len(),
                singular_count
            ),
        )
    };

    let mut siegel = None;
    let mut trapping = None;
    let mut non_repelling = non_repelling;
    if let Some(target) = non_repelling.first_mut() {
        let q = target.period;
        let decomp = match m.family {
            Family::Exponential => {
                let gamma = build_gamma(m, q, cfg.window, &cfg.land)?;
                basic_regions(m, gamma, q, Some(cfg.window), &cfg.region)?
            }
            Family::Quadratic => {
                let gamma = build_gamma_quadratic(m.c, q, &cfg.land, &cfg.quad_ray)?;
                basic_regions(m, gamma, q, None, &cfg.region)?
            }
        };
        if matches!(target.class, CycleClass::IrrationallyIndifferent) {
            let boundary = estimate_siegel_boundary(m, target.points[0], q, &cfg.siegel)?;
            target.siegel_candidate = Some(!boundary.no_disk_detected);
            siegel = Some(boundary);
        }
        let targets = avoidance_targets(&cycles, target, &decomp);
        trapping = Some(verify_trapping(
            m,
            target,
            siegel.as_ref(),
            &decomp,
            &targets,
            &cfg.trapping,
        )?);
    }

    Ok(FsReport {
        max_period: cfg.max_period,
        search: cfg.search,
        singular_count,
        cycles,
        non_repelling,
        verdict,
        note,
        siegel,
        trapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::decompose;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn attracting_map() -> MapSpec {
        MapSpec::exponential(c64(-1.0 - (-1.0f64).exp(), 0.0))
    }

    fn rect() -> Rect {
        Rect::new(-4.0, -8.0, 4.0, 8.0).unwrap()
    }

    #[test]
    fn attracting_orbit_has_constant_labels() {
        let m = attracting_map();
        let d = decompose(&m, 1, 2, &LandConfig::default(), &RegionConfig::default()).unwrap();
        let traces = trace_singular_orbit(&m, &d, 200);
        assert_eq!(traces.len(), 1);
        let trace = &traces[0];
        assert!(trace.escaped_at.is_none());
        assert!(trace
            .labels
            .iter()
            .all(|l| *l == PointLabel::Region(String::new())));
    }

    #[test]
    fn escaping_singular_orbit_is_flagged() {
        let m = MapSpec::exponential(c64(1.0, 0.0));
        let d = decompose(&m, 1, 1, &LandConfig::default(), &RegionConfig::default()).unwrap();
        let traces = trace_singular_orbit(&m, &d, 200);
        assert!(traces[0].escaped_at.is_some(), "real orbit must escape");
        assert_eq!(*traces[0].labels.last().unwrap(), PointLabel::Escaped);
    }

    #[test]
    fn attracting_trapping_accumulates_geometrically() {
        let m = attracting_map();
        let d = decompose(&m, 1, 2, &LandConfig::default(), &RegionConfig::default()).unwrap();
        let cycles = group_cycles(
            &m,
            &find_periodic_points(&m, 1, &rect(), &PeriodicSearchConfig::default()),
        );
        let target = cycles
            .iter()
            .find(|c| !c.class.is_repelling())
            .expect("attracting fixed point");
        let targets = avoidance_targets(&cycles, target, &d);
        let cfg = TrappingConfig {
            iters: 200,
            ..TrappingConfig::default()
        };
        let report = verify_trapping(&m, target, None, &d, &targets, &cfg).unwrap();
        assert!(report.pattern_ok);
        // contraction rate e^{-1}: far below 1e-8 after 200 iterates
        assert!(report.accumulation[0].min_tail_distance < 1e-8);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn parabolic_trapping_accumulates_algebraically() {
        let m = MapSpec::exponential(c64(-1.0, 0.0));
        let d = decompose(&m, 1, 2, &LandConfig::default(), &RegionConfig::default()).unwrap();
        let cycles = group_cycles(
            &m,
            &find_periodic_points(&m, 1, &rect(), &PeriodicSearchConfig::default()),
        );
        let target = cycles
            .iter()
            .find(|c| c.class.is_parabolic())
            .expect("parabolic point at 0");
        let targets = avoidance_targets(&cycles, target, &d);
        let cfg = TrappingConfig {
            iters: 10_000,
            ..TrappingConfig::default()
        };
        let report = verify_trapping(&m, target, None, &d, &targets, &cfg).unwrap();
        assert!(report.pattern_ok);
        // real parabolic orbit decays like -2/n
        assert!(report.accumulation[0].min_tail_distance < 1e-2);
        assert!(report.pass, "{report:?}");

        // independent oracle: the singular orbit on the real axis decays
        // like -2/n under x ↦ e^x − 1
        let mut x = m.c.re;
        for _ in 0..10_000 {
            x = x.exp() - 1.0;
        }
        assert!(x.abs() < 1e-2 && x < 0.0);
    }

    #[test]
    fn period_mismatch_is_rejected() {
        let m = attracting_map();
        let d = decompose(&m, 1, 1, &LandConfig::default(), &RegionConfig::default()).unwrap();
        let fake = CycleSummary {
            points: vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            period: 2,
            multiplier: c64(0.5, 0.0),
            class: CycleClass::Attracting,
            siegel_candidate: None,
        };
        let err = verify_trapping(
            &m,
            &fake,
            None,
            &d,
            &AvoidanceTargets::default(),
            &TrappingConfig::default(),
        );
        assert!(matches!(err, Err(Error::PeriodMismatch { p: 1, q: 2 })));
    }

    #[test]
    fn fs_count_attracting() {
        let m = attracting_map();
        let cfg = FsConfig::new(2, rect(), 2);
        let report = fatou_shishikura_report(&m, &cfg).unwrap();
        assert_eq!(report.non_repelling.len(), 1);
        assert_eq!(report.verdict, FsVerdict::Pass);
        let trapping = report.trapping.expect("assignment attached");
        assert!(trapping.pass);
    }

    #[test]
    fn fs_count_escaping_parameter_is_zero() {
        let m = MapSpec::exponential(c64(1.0, 0.0));
        let cfg = FsConfig::new(2, rect(), 2);
        let report = fatou_shishikura_report(&m, &cfg).unwrap();
        assert_eq!(report.non_repelling.len(), 0);
        assert_eq!(report.verdict, FsVerdict::Pass);
        assert!(report.trapping.is_none());
    }

    #[test]
    fn fs_count_quadratic_superattracting() {
        let m = MapSpec::quadratic(c64(0.0, 0.0));
        let cfg = FsConfig::new(2, Rect::new(-2.0, -2.0, 2.0, 2.0).unwrap(), 2);
        let report = fatou_shishikura_report(&m, &cfg).unwrap();
        assert_eq!(report.non_repelling.len(), 1);
        assert_eq!(report.verdict, FsVerdict::Pass);
    }
}
