//! Quadratic external rays and the classical census machinery, used as an
//! oracle: the same grouping, region, census, and trapping code runs on
//! quadratic data, where every expected answer is classical.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::f64::consts::TAU;

use crate::error::Error;
use crate::maps::{is_finite, MapSpec, Rect};
use crate::periodic::{find_periodic_points, PeriodicSearchConfig, SiegelConfig};
use crate::rays::{
    drive_landing, LandConfig, LandingResult, PullIssue, RayLabel, RaySample, RayTrace,
    Truncation,
};
use crate::regions::{
    basic_regions, census, group_by_landing_point, CensusConfig, GammaBuild, RayFailure,
    RegionCensus, RegionConfig, TracedRay,
};
use crate::singular::{
    avoidance_targets, group_cycles, verify_trapping, CycleSummary, TrappingConfig,
    TrappingReport,
};
use crate::Result;

/// Rational external angle, a reduced fraction of turns in `[0, 1)`.
/// The doubling map acts by `θ ↦ 2θ mod 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExternalAngle {
    num: u64,
    den: u64,
}

impl ExternalAngle {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num >= den {
            return Err(Error::AngleParse(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn double(&self) -> Self {
        let num = (2 * self.num) % self.den;
        let g = gcd(num, self.den);
        Self {
            num: num / g,
            den: self.den / g,
        }
    }

    /// Forward orbit under doubling up to the first repeated angle: the
    /// full cycle for odd denominators, preperiod plus cycle otherwise.
    pub fn doubling_orbit(&self) -> Vec<ExternalAngle> {
        let mut orbit = vec![*self];
        let mut t = self.double();
        while !orbit.contains(&t) {
            orbit.push(t);
            t = t.double();
        }
        orbit
    }

    /// Cycle length under doubling (the minimal period for odd
    /// denominators).
    pub fn period_under_doubling(&self) -> u32 {
        let orbit = self.doubling_orbit();
        let last = orbit.last().unwrap().double();
        let entry = orbit.iter().position(|a| *a == last).expect("orbit closes");
        (orbit.len() - entry) as u32
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ExternalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExternalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::AngleParse(s.to_string());
        let (num, den) = s.split_once('/').ok_or_else(err)?;
        let num: u64 = num.trim().parse().map_err(|_| err())?;
        let den: u64 = den.trim().parse().map_err(|_| err())?;
        ExternalAngle::new(num, den).map_err(|_| err())
    }
}

impl Serialize for ExternalAngle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Angles fixed by `p` doublings: the fractions with denominator
/// `2^p − 1`, reduced.
pub fn angles_fixed_by(p: u32) -> Vec<ExternalAngle> {
    assert!((1..=20).contains(&p));
    let den = (1u64 << p) - 1;
    if den == 1 {
        return vec![ExternalAngle::zero()];
    }
    let mut out: Vec<ExternalAngle> = (0..den)
        .map(|k| ExternalAngle::new(k, den).expect("k < den"))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadRayConfig {
    /// Starting equipotential radius; the Böttcher coordinate is machine
    /// accurate there.
    pub start_radius: f64,
    /// Inverse-iteration levels; each halves the potential.
    pub depth: u32,
    /// Relative margin below which the two square-root branches are
    /// indistinguishable (near the critical orbit).
    pub ambiguity_margin: f64,
    /// Levels whose scale exceeds this are excluded from the residual.
    pub residual_scale_cap: f64,
}

impl Default for QuadRayConfig {
    fn default() -> Self {
        Self {
            start_radius: 1e4,
            depth: 60,
            ambiguity_margin: 1e-9,
            residual_scale_cap: 1e3,
        }
    }
}

/// One inverse-iteration level: pulls every angle in the doubling orbit
/// back through the square-root branch nearest its previous position.
/// `next_of[j]` indexes the doubled angle of orbit slot `j`.
fn advance_level(
    c: Complex64,
    current: &mut [Complex64],
    next_of: &[usize],
    margin: f64,
) -> std::result::Result<(), PullIssue> {
    let q = current.len();
    let mut next = vec![Complex64::new(0.0, 0.0); q];
    for j in 0..q {
        let target = current[next_of[j]] - c;
        let root = target.sqrt();
        let d_plus = (root - current[j]).norm();
        let d_minus = (-root - current[j]).norm();
        if (d_plus - d_minus).abs() <= margin * (d_plus + d_minus) {
            return Err(PullIssue::SingularGuard);
        }
        next[j] = if d_plus < d_minus { root } else { -root };
        if !is_finite(next[j]) {
            return Err(PullIssue::NotFinite);
        }
    }
    current.copy_from_slice(&next);
    Ok(())
}

struct QuadRayState {
    current: Vec<Complex64>,
    next_of: Vec<usize>,
}

fn trace_with_state(
    c: Complex64,
    angle: ExternalAngle,
    cfg: &QuadRayConfig,
) -> (RayTrace, QuadRayState) {
    let orbit = angle.doubling_orbit();
    let next_of: Vec<usize> = orbit
        .iter()
        .map(|a| {
            let d = a.double();
            orbit.iter().position(|b| *b == d).expect("orbit closes")
        })
        .collect();
    let mut current: Vec<Complex64> = orbit
        .iter()
        .map(|t| Complex64::from_polar(cfg.start_radius, TAU * t.turns()))
        .collect();
    let t0 = cfg.start_radius.ln();
    let mut samples = vec![RaySample {
        t: t0,
        z: current[0],
    }];
    let mut residual = 0.0f64;
    let mut truncation = Truncation::ReachedTMin;
    let m = MapSpec::quadratic(c);

    for level in 1..=cfg.depth {
        let previous_mate = current[next_of[0]];
        if advance_level(c, &mut current, &next_of, cfg.ambiguity_margin).is_err() {
            truncation = Truncation::HitSingularNeighborhood;
            break;
        }
        let t = t0 / 2f64.powi(level as i32);
        samples.push(RaySample { t, z: current[0] });
        // doubling equivariance defect at moderate scales
        if previous_mate.norm() <= cfg.residual_scale_cap {
            let defect = (m.eval(current[0]) - previous_mate).norm();
            residual = residual.max(defect);
        }
    }

    let trace = RayTrace {
        label: RayLabel::Angle(angle),
        samples,
        residual,
        truncation,
    };
    (trace, QuadRayState { current, next_of })
}

/// External ray of `z² + c` at a rational angle, traced inward from a large
/// equipotential by inverse iteration with branch choices following the
/// angle's doubling orbit.
pub fn external_ray_quadratic(
    c: Complex64,
    angle: ExternalAngle,
    cfg: &QuadRayConfig,
) -> Result<RayTrace> {
    let (trace, _) = trace_with_state(c, angle, cfg);
    Ok(trace)
}

/// Lands the external ray at a purely periodic angle (odd denominator):
/// keeps pulling the full doubling period and polishes by Newton on
/// `f^q(z) − z`, with the same diagnostics as the exponential landings.
pub fn land_ray_quadratic(
    c: Complex64,
    angle: ExternalAngle,
    cfg: &LandConfig,
    qcfg: &QuadRayConfig,
) -> Result<LandingResult> {
    if angle.denominator() % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "angle {angle} is not purely periodic under doubling"
        )));
    }
    let m = MapSpec::quadratic(c);
    let (_, mut state) = trace_with_state(c, angle, qcfg);
    let q = state.current.len() as u32;
    let margin = qcfg.ambiguity_margin;
    let start = state.current[0];
    let pull = move |_z: Complex64| -> std::result::Result<Complex64, PullIssue> {
        for _ in 0..q {
            advance_level(c, &mut state.current, &state.next_of, margin)?;
        }
        Ok(state.current[0])
    };
    Ok(drive_landing(
        &m,
        RayLabel::Angle(angle),
        q,
        start,
        pull,
        cfg,
    ))
}

/// Traces and lands every angle fixed by `p` doublings and groups
/// co-landing rays, producing the same structures as the exponential path.
pub fn build_gamma_quadratic(
    c: Complex64,
    p: u32,
    cfg: &LandConfig,
    qcfg: &QuadRayConfig,
) -> Result<GammaBuild> {
    let mut traced = Vec::new();
    let mut failures = Vec::new();
    for angle in angles_fixed_by(p) {
        let trace = external_ray_quadratic(c, angle, qcfg)?;
        let landing = land_ray_quadratic(c, angle, cfg, qcfg)?;
        if landing.confident_point().is_some() {
            traced.push(TracedRay { trace, landing });
        } else {
            failures.push(RayFailure {
                label: RayLabel::Angle(angle),
                reason: format!("landing status {:?}", landing.status),
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

/// Full quadratic cross-check at one parameter: build the period-`p`
/// decomposition from external angles, run the shared census, and verify
/// the trapping of the critical orbit.
#[derive(Clone, Debug, Serialize)]
pub struct GmCrossCheck {
    pub connected: bool,
    pub region_count: usize,
    pub census: RegionCensus,
    pub trapping: Option<TrappingReport>,
    pub pass: bool,
}

pub struct GmConfig {
    pub land: LandConfig,
    pub quad_ray: QuadRayConfig,
    pub region: RegionConfig,
    pub census: CensusConfig,
    pub periodic: PeriodicSearchConfig,
    pub siegel: SiegelConfig,
    pub trapping: TrappingConfig,
    pub search: Rect,
}

impl Default for GmConfig {
    fn default() -> Self {
        Self {
            land: LandConfig::default(),
            quad_ray: QuadRayConfig::default(),
            region: RegionConfig::default(),
            census: CensusConfig::default(),
            periodic: PeriodicSearchConfig::default(),
            siegel: SiegelConfig::default(),
            trapping: TrappingConfig::default(),
            search: Rect {
                x0: -2.5,
                y0: -2.5,
                x1: 2.5,
                y1: 2.5,
            },
        }
    }
}

pub fn gm_cross_check(c: Complex64, p: u32, cfg: &GmConfig) -> Result<GmCrossCheck> {
    let m = MapSpec::quadratic(c);
    // connected Julia set: the critical orbit stays bounded
    let orbit = m.orbit(Complex64::new(0.0, 0.0), 500, 1e5);
    if orbit.escaped_at.is_some() {
        return Err(Error::InvalidArgument(format!(
            "Julia set of quad:{},{} is disconnected (critical orbit escapes)",
            c.re, c.im
        )));
    }

    let gamma = build_gamma_quadratic(c, p, &cfg.land, &cfg.quad_ray)?;
    let decomp = basic_regions(&m, gamma, p, None, &cfg.region)?;
    let cycles = find_periodic_points(&m, p, &cfg.search, &cfg.periodic);
    let report = census(&m, &decomp, &cycles, &cfg.search, &cfg.census);
    let region_count = report.regions.len();

    let summaries = group_cycles(&m, &cycles);
    let non_repelling: Vec<&CycleSummary> =
        summaries.iter().filter(|s| !s.class.is_repelling()).collect();

    let mut trapping = None;
    if let Some(target) = non_repelling.first() {
        if p % target.period == 0 {
            let siegel = if matches!(
                target.class,
                crate::periodic::CycleClass::IrrationallyIndifferent
            ) {
                Some(crate::periodic::estimate_siegel_boundary(
                    &m,
                    target.points[0],
                    target.period,
                    &cfg.siegel,
                )?)
            } else {
                None
            };
            let targets = avoidance_targets(&summaries, target, &decomp);
            trapping = Some(verify_trapping(
                &m,
                target,
                siegel.as_ref(),
                &decomp,
                &targets,
                &cfg.trapping,
            )?);
        }
    }

    let pass = report.all_pass() && trapping.as_ref().map_or(true, |t| t.pass);
    Ok(GmCrossCheck {
        connected: true,
        region_count,
        census: report,
        trapping,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::quadratic_golden_siegel_parameter;
    use crate::rays::LandingStatus;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn angle_arithmetic() {
        let third: ExternalAngle = "1/3".parse().unwrap();
        assert_eq!(third.double(), "2/3".parse().unwrap());
        assert_eq!(third.period_under_doubling(), 2);
        assert_eq!(ExternalAngle::zero().period_under_doubling(), 1);
        let sixth = ExternalAngle::new(2, 12).unwrap();
        assert_eq!(sixth.to_string(), "1/6");
        assert!("5/3".parse::<ExternalAngle>().is_err());
        assert!("x/3".parse::<ExternalAngle>().is_err());
    }

    #[test]
    fn fixed_angle_sets() {
        assert_eq!(angles_fixed_by(1), vec![ExternalAngle::zero()]);
        let p2 = angles_fixed_by(2);
        assert_eq!(
            p2,
            vec![
                ExternalAngle::zero(),
                "1/3".parse().unwrap(),
                "2/3".parse().unwrap()
            ]
        );
    }

    #[test]
    fn angle_zero_ray_of_z_squared_is_the_real_segment_landing_at_one() {
        let trace =
            external_ray_quadratic(c64(0.0, 0.0), ExternalAngle::zero(), &QuadRayConfig::default())
                .unwrap();
        for s in &trace.samples {
            assert!(s.z.im.abs() < 1e-9, "ray must hug the real axis");
            assert!(s.z.re > 1.0 - 1e-9);
        }
        let landing = land_ray_quadratic(
            c64(0.0, 0.0),
            ExternalAngle::zero(),
            &LandConfig::default(),
            &QuadRayConfig::default(),
        )
        .unwrap();
        assert_eq!(landing.status, LandingStatus::Landed);
        assert!((landing.landing_point - c64(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn angle_half_lands_at_minus_one_for_z_squared() {
        // 1/2 is preperiodic (even denominator): trace works, landing is
        // rejected by contract
        let trace = external_ray_quadratic(
            c64(0.0, 0.0),
            ExternalAngle::new(1, 2).unwrap(),
            &QuadRayConfig::default(),
        )
        .unwrap();
        let end = trace.samples.last().unwrap().z;
        assert!((end - c64(-1.0, 0.0)).norm() < 1e-6);
        assert!(land_ray_quadratic(
            c64(0.0, 0.0),
            ExternalAngle::new(1, 2).unwrap(),
            &LandConfig::default(),
            &QuadRayConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn basilica_rays_one_third_and_two_thirds_coland_at_alpha() {
        let c = c64(-1.0, 0.0);
        let alpha = (1.0 - 5.0f64.sqrt()) / 2.0; // quadratic formula oracle
        for angle in ["1/3", "2/3"] {
            let landing = land_ray_quadratic(
                c,
                angle.parse().unwrap(),
                &LandConfig::default(),
                &QuadRayConfig::default(),
            )
            .unwrap();
            assert_eq!(landing.status, LandingStatus::Landed, "{angle}");
            assert!(
                (landing.landing_point - c64(alpha, 0.0)).norm() < 1e-8,
                "{angle} lands at {} vs alpha {alpha}",
                landing.landing_point
            );
        }
    }

    #[test]
    fn doubling_equivariance_across_independent_traces() {
        let c = c64(-1.0, 0.0);
        let cfg = QuadRayConfig::default();
        let third = external_ray_quadratic(c, "1/3".parse().unwrap(), &cfg).unwrap();
        let two_thirds = external_ray_quadratic(c, "2/3".parse().unwrap(), &cfg).unwrap();
        let m = MapSpec::quadratic(c);
        // f(P_n(1/3)) = P_{n-1}(2/3) on the shared potential range
        let mut checked = 0;
        for n in 1..third.samples.len() {
            let image = m.eval(third.samples[n].z);
            let mate = two_thirds.samples[n - 1].z;
            if mate.norm() <= 1e3 {
                assert!(
                    (image - mate).norm() < 1e-8,
                    "level {n}: {image} vs {mate}"
                );
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn basilica_cross_check_passes() {
        let check = gm_cross_check(c64(-1.0, 0.0), 2, &GmConfig::default()).unwrap();
        assert!(check.connected);
        assert_eq!(check.region_count, 2, "alpha ray pair splits the plane");
        assert!(check.census.all_pass());
        let trapping = check.trapping.expect("attracting 2-cycle present");
        assert!(trapping.pattern_ok, "critical orbit alternates regions");
        assert!(check.pass);
    }

    #[test]
    fn basilica_locate_separates_critical_orbit_and_flags_alpha_as_boundary() {
        use crate::regions::{basic_regions, Located, RegionConfig};
        let c = c64(-1.0, 0.0);
        let m = MapSpec::quadratic(c);
        let gamma =
            build_gamma_quadratic(c, 2, &LandConfig::default(), &QuadRayConfig::default())
                .unwrap();
        let d = basic_regions(&m, gamma, 2, None, &RegionConfig::default()).unwrap();
        let alpha = (1.0 - 5.0f64.sqrt()) / 2.0;
        // exactly the landing point: boundary by contract
        assert_eq!(d.locate(c64(alpha, 0.0)), Located::OnBoundary);
        // small real offsets from alpha point into the two sectors
        let right = d.locate(c64(alpha + 0.05, 0.0));
        let left = d.locate(c64(alpha - 0.05, 0.0));
        assert_ne!(right, left);
        assert_eq!(right, d.locate(c64(0.0, 0.0)), "0 sits right of alpha");
        assert_eq!(left, d.locate(c64(-1.0, 0.0)), "-1 sits left of alpha");
    }

    #[test]
    fn z_squared_cross_check_single_region() {
        let check = gm_cross_check(c64(0.0, 0.0), 1, &GmConfig::default()).unwrap();
        assert_eq!(check.region_count, 1, "angle 0 lands alone at beta");
        assert!(check.census.all_pass());
        assert!(check.pass);
    }

    #[test]
    fn golden_siegel_critical_orbit_accumulates_on_boundary_estimate() {
        let c = quadratic_golden_siegel_parameter();
        let mut cfg = GmConfig::default();
        cfg.siegel.n_rays = 32;
        cfg.trapping.iters = 10_000;
        let check = gm_cross_check(c, 1, &cfg).unwrap();
        let trapping = check.trapping.expect("Siegel fixed point present");
        let acc = &trapping.accumulation;
        assert!(!acc.is_empty());
        assert!(
            acc.iter().all(|a| a.min_tail_distance < 1e-2),
            "critical orbit should brush the Siegel boundary cloud: {acc:?}"
        );
    }

    #[test]
    fn disconnected_parameter_is_rejected() {
        assert!(gm_cross_check(c64(1.0, 1.0), 1, &GmConfig::default()).is_err());
    }
}
