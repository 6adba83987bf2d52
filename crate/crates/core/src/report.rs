//! One-shot verification pipeline and its JSON report schema:
//! cycles → co-landing graph → regions → census → trapping → cycle count.

use serde::Serialize;

use crate::maps::{Family, MapSpec, Rect, TractGeometry};
use crate::periodic::{find_periodic_points, PeriodicSearchConfig, SiegelConfig};
use crate::polyoracle::{build_gamma_quadratic, QuadRayConfig};
use crate::rays::LandConfig;
use crate::regions::{
    basic_regions, build_gamma, census, classify_region_type, CensusConfig, CensusVerdict,
    DecompositionSummary, RegionConfig, RegionProbeConfig,
};
use crate::singular::{
    avoidance_targets, fatou_shishikura_report, group_cycles, trace_singular_orbit,
    verify_trapping, CycleSummary, FsConfig, FsReport, FsVerdict, OrbitTrace, TrappingConfig,
    TrappingReport,
};
use crate::Result;

/// Effective configuration of a verification run; echoed into the report
/// so every number is reproducible.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub p: u32,
    pub window: u32,
    pub search: Rect,
    pub max_period: u32,
    pub orbit_iters: usize,
    pub deterministic: bool,
    pub land: LandConfig,
    pub periodic: PeriodicSearchConfig,
    pub region: RegionConfig,
    pub census: CensusConfig,
    pub quad_ray: QuadRayConfig,
    pub siegel: SiegelConfig,
    pub trapping: TrappingConfig,
}

impl VerifyConfig {
    pub fn new(p: u32, window: u32, search: Rect) -> Self {
        Self {
            p,
            window,
            search,
            max_period: 3,
            orbit_iters: 10_000,
            deterministic: false,
            land: LandConfig::default(),
            periodic: PeriodicSearchConfig::default(),
            region: RegionConfig::default(),
            census: CensusConfig::default(),
            quad_ray: QuadRayConfig::default(),
            siegel: SiegelConfig::default(),
            trapping: TrappingConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallVerdict {
    Pass,
    /// Nothing contradicted, but the window could not settle everything.
    Inconclusive,
    /// A hard, theorem-contradicting observation: implementation or
    /// tolerance defect.
    Fail,
}

/// One region's census entry with its type verdict attached.
#[derive(Clone, Debug, Serialize)]
pub struct RegionEntry {
    pub id: String,
    pub interior: Vec<crate::periodic::PeriodicPointRecord>,
    pub virtual_points: Vec<crate::regions::VirtualFixedPoint>,
    pub verdict: crate::regions::CensusVerdict,
    pub region_type: crate::regions::RegionType,
    pub type_confidence: u32,
    pub hull: Option<Rect>,
    /// For a polynomial-type region holding the trapped singular value: the
    /// trapping value is expected to be a critical value, which only the
    /// quadratic family can provide.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_value_is_critical: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusStats {
    pub excluded_landing_points: usize,
    pub window_excluded: usize,
    pub boundary_flagged: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub map: String,
    pub family: Family,
    pub p: u32,
    pub q: Option<u32>,
    pub window: WindowSection,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub config: VerifyConfig,
    pub gamma: DecompositionSummary,
    pub census: Vec<RegionEntry>,
    pub census_stats: CensusStats,
    pub cycles: Vec<CycleSummary>,
    pub trapping: Option<TrappingReport>,
    pub fs: FsReport,
    pub singular_orbits: Vec<OrbitSummary>,
    pub verdict: OverallVerdict,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowSection {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "box")]
    pub search: Rect,
    #[serde(rename = "P")]
    pub max_period: u32,
}

/// Orbit summary kept small: full orbits can be tens of thousands of points.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub start: num_complex::Complex64,
    pub iterates: usize,
    pub escaped_at: Option<usize>,
    pub boundary_hits: usize,
    pub distinct_labels: usize,
}

fn summarize_orbit(trace: &OrbitTrace) -> OrbitSummary {
    let mut labels = std::collections::BTreeSet::new();
    let mut boundary = 0usize;
    for l in &trace.labels {
        match l {
            crate::singular::PointLabel::Region(id) => {
                labels.insert(id.clone());
            }
            crate::singular::PointLabel::OnBoundary => boundary += 1,
            crate::singular::PointLabel::Escaped => {}
        }
    }
    OrbitSummary {
        start: trace.start,
        iterates: trace.points.len(),
        escaped_at: trace.escaped_at,
        boundary_hits: boundary,
        distinct_labels: labels.len(),
    }
}

/// Runs the full pipeline at one parameter and assembles the report.
pub fn run_verification(m: &MapSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut notes = Vec::new();

    // cycles fixed under f^p inside the box
    let records = find_periodic_points(m, cfg.p, &cfg.search, &cfg.periodic);
    let cycles = group_cycles(m, &records);

    // co-landing graph and regions
    let gamma = match m.family {
        Family::Exponential => build_gamma(m, cfg.p, cfg.window, &cfg.land)?,
        Family::Quadratic => build_gamma_quadratic(m.c, cfg.p, &cfg.land, &cfg.quad_ray)?,
    };
    if !gamma.failures.is_empty() {
        notes.push(format!(
            "{} ray(s) without certified landing were excluded from the graph",
            gamma.failures.len()
        ));
    }
    let window = match m.family {
        Family::Exponential => Some(cfg.window),
        Family::Quadratic => None,
    };
    let decomp = basic_regions(m, gamma, cfg.p, window, &cfg.region)?;

    // census and region types
    let census_report = census(m, &decomp, &records, &cfg.search, &cfg.census);
    let tract = TractGeometry::for_map(m);
    let mut viewport = cfg.search;
    for g in &decomp.groups {
        viewport = viewport.expanded_to(g.landing_point, 2.0);
    }
    let probe_cfg = RegionProbeConfig::for_viewport(viewport);
    let singular_value = m.singular_values()[0];
    let census_entries: Vec<RegionEntry> = census_report
        .regions
        .iter()
        .map(|r| {
            let type_report = classify_region_type(&decomp, &r.id, &tract, &probe_cfg);
            let holds_singular_value = matches!(
                decomp.locate(singular_value.value),
                crate::regions::Located::Region(ref id) if *id == r.id
            );
            let singular_value_is_critical = (type_report.kind
                == crate::regions::RegionType::PolynomialType
                && holds_singular_value)
                .then(|| singular_value.kind == crate::maps::SingularKind::Critical);
            RegionEntry {
                id: r.id.clone(),
                interior: r.interior.clone(),
                virtual_points: r.virtual_points.clone(),
                verdict: r.verdict,
                region_type: type_report.kind,
                type_confidence: type_report.confidence,
                hull: type_report.hull,
                singular_value_is_critical,
            }
        })
        .collect();

    // trapping against the non-repelling cycle, if any
    let non_repelling: Vec<&CycleSummary> =
        cycles.iter().filter(|c| !c.class.is_repelling()).collect();
    let mut trapping = None;
    let mut q = None;
    if let Some(target) = non_repelling.first() {
        q = Some(target.period);
        if cfg.p % target.period == 0 {
            let siegel = match target.class {
                crate::periodic::CycleClass::IrrationallyIndifferent => {
                    Some(crate::periodic::estimate_siegel_boundary(
                        m,
                        target.points[0],
                        target.period,
                        &cfg.siegel,
                    )?)
                }
                _ => None,
            };
            let targets = avoidance_targets(&cycles, target, &decomp);
            trapping = Some(verify_trapping(
                m,
                target,
                siegel.as_ref(),
                &decomp,
                &targets,
                &cfg.trapping,
            )?);
        } else {
            notes.push(format!(
                "decomposition period {} is not a multiple of the cycle period {}; trapping \
                 skipped",
                cfg.p, target.period
            ));
        }
    }

    // the refined count, with its own decomposition at the cycle period
    let mut fs_cfg = FsConfig::new(cfg.max_period, cfg.search, cfg.window);
    fs_cfg.land = cfg.land;
    fs_cfg.periodic = cfg.periodic;
    fs_cfg.region = cfg.region;
    fs_cfg.quad_ray = cfg.quad_ray;
    fs_cfg.siegel = cfg.siegel;
    fs_cfg.trapping = cfg.trapping;
    let fs = fatou_shishikura_report(m, &fs_cfg)?;

    let orbit_traces = trace_singular_orbit(m, &decomp, cfg.orbit_iters);
    let singular_orbits: Vec<OrbitSummary> = orbit_traces.iter().map(summarize_orbit).collect();

    // verdict assembly
    let mut verdict = OverallVerdict::Pass;
    let demote = |v: OverallVerdict, notes: &mut Vec<String>, msg: String| {
        notes.push(msg);
        v
    };
    if !census_report.none_overfull() {
        verdict = demote(
            OverallVerdict::Fail,
            &mut notes,
            "census found an overfull region".into(),
        );
    }
    if fs.verdict == FsVerdict::Fail {
        verdict = demote(
            OverallVerdict::Fail,
            &mut notes,
            "non-repelling cycle count exceeds the singular value count".into(),
        );
    }
    if let Some(t) = &trapping {
        if !t.pattern_ok {
            verdict = demote(
                OverallVerdict::Fail,
                &mut notes,
                "singular orbit violates the residue pattern".into(),
            );
        } else if !t.pass && verdict == OverallVerdict::Pass {
            verdict = demote(
                OverallVerdict::Inconclusive,
                &mut notes,
                "trapping accumulation or margins not settled at this budget".into(),
            );
        }
    }
    if verdict == OverallVerdict::Pass
        && census_report
            .regions
            .iter()
            .any(|r| r.verdict == CensusVerdict::EmptyWithinBox)
    {
        verdict = demote(
            OverallVerdict::Inconclusive,
            &mut notes,
            "some regions are empty within the search box".into(),
        );
    }

    let timestamp = if cfg.deterministic {
        None
    } else {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };

    Ok(VerificationReport {
        map: m.to_string(),
        family: m.family,
        p: cfg.p,
        q,
        window: WindowSection {
            m: cfg.window,
            search: cfg.search,
            max_period: cfg.max_period,
        },
        version: crate::VERSION.to_string(),
        timestamp,
        config: cfg.clone(),
        gamma: decomp.summary(),
        census: census_entries,
        census_stats: CensusStats {
            excluded_landing_points: census_report.excluded_landing_points,
            window_excluded: census_report.window_excluded,
            boundary_flagged: census_report.boundary_flagged,
        },
        cycles,
        trapping,
        fs,
        singular_orbits,
        verdict,
        notes,
    })
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
