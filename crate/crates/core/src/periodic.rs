//! Periodic points: Newton search over seed grids, multiplier
//! classification, and Siegel disk boundary estimation.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::maps::{is_finite, Family, MapSpec, Rect};
use crate::rays::pull_period_block;
use crate::Result;

/// Indifference shell: multipliers within this of the unit circle are
/// treated as indifferent; double precision cannot do better.
pub const TOL_IND: f64 = 1e-6;
/// Largest root-of-unity denominator matched when classifying parabolics.
pub const R_MAX: u32 = 64;
/// Residual bound certified for every returned periodic point.
pub const FIXED_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleClass {
    Attracting,
    Repelling,
    Parabolic { numerator: u32, denominator: u32 },
    IrrationallyIndifferent,
}

impl CycleClass {
    pub fn is_repelling(&self) -> bool {
        matches!(self, CycleClass::Repelling)
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self, CycleClass::Parabolic { .. })
    }
}

impl std::fmt::Display for CycleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CycleClass::Attracting => write!(f, "attracting"),
            CycleClass::Repelling => write!(f, "repelling"),
            CycleClass::Parabolic {
                numerator,
                denominator,
            } => write!(f, "parabolic({numerator}/{denominator})"),
            CycleClass::IrrationallyIndifferent => write!(f, "irrationally_indifferent"),
        }
    }
}

/// Continued-fraction estimate of the rotation number `arg(μ)/2π`.
#[derive(Clone, Debug, Serialize)]
pub struct RotationEstimate {
    pub theta: f64,
    /// Convergents p/q of theta, denominators increasing.
    pub convergents: Vec<(i64, i64)>,
}

/// One periodic point (not a whole cycle): location, minimal period,
/// cycle multiplier and classification.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicPointRecord {
    pub point: Complex64,
    /// Minimal period of the cycle through `point`.
    pub period: u32,
    /// Multiplier of the cycle: product of f' over the minimal cycle.
    pub multiplier: Complex64,
    pub class: CycleClass,
    pub rotation: Option<RotationEstimate>,
}

impl PeriodicPointRecord {
    pub fn is_non_repelling(&self) -> bool {
        !self.class.is_repelling()
    }
}

/// Multiplier of the cycle through `z`, as the chain-rule product over the
/// cycle. Errors unless `z` is fixed under `f^p` to 1e-8.
pub fn multiplier(m: &MapSpec, z: Complex64, p: u32) -> Result<Complex64> {
    let (w, d) = m.iterate_with_deriv(z, p);
    let residual = (w - z).norm();
    if residual > 1e-8 {
        return Err(Error::NotPeriodic {
            period: p,
            residual,
        });
    }
    Ok(d)
}

fn continued_fraction(theta: f64, max_terms: usize) -> Vec<(i64, i64)> {
    let mut convergents = Vec::new();
    // p_{-2} = 0, p_{-1} = 1; q_{-2} = 1, q_{-1} = 0
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut x = theta;
    for _ in 0..max_terms {
        let a = x.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let a_int = a as i64;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if k1 != 0 {
            convergents.push((h1, k1));
        }
        let frac = x - a;
        if frac < 1e-12 || k1 > 1_000_000_000 {
            break;
        }
        x = 1.0 / frac;
    }
    convergents
}

/// Classifies a multiplier. Indifference and parabolicity are decided up to
/// `tol_ind`; roots of unity are matched up to denominator `r_max`.
pub fn classify(mu: Complex64, tol_ind: f64, r_max: u32) -> (CycleClass, Option<RotationEstimate>) {
    let modulus = mu.norm();
    if modulus < 1.0 - tol_ind {
        return (CycleClass::Attracting, None);
    }
    if modulus > 1.0 + tol_ind {
        return (CycleClass::Repelling, None);
    }
    let theta = (mu.arg() / TAU).rem_euclid(1.0);
    // nearest root of unity with small denominator
    for den in 1..=r_max {
        for num in 0..den.max(1) {
            if num != 0 && gcd(num, den) != 1 {
                continue;
            }
            if den == 1 && num != 0 {
                continue;
            }
            let root = Complex64::from_polar(1.0, TAU * num as f64 / den as f64);
            if (mu - root).norm() < tol_ind {
                return (
                    CycleClass::Parabolic {
                        numerator: num,
                        denominator: den,
                    },
                    Some(RotationEstimate {
                        theta,
                        convergents: vec![(num as i64, den as i64)],
                    }),
                );
            }
        }
    }
    let convergents = continued_fraction(theta, 20);
    (
        CycleClass::IrrationallyIndifferent,
        Some(RotationEstimate { theta, convergents }),
    )
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Newton iteration on `f^p(z) − z` with a near-parabolic double-root
/// refinement. Returns the polished point and its residual, or `None` when
/// the iteration leaves the basin.
pub(crate) fn newton_periodic(
    m: &MapSpec,
    z0: Complex64,
    p: u32,
    tol: f64,
    max_iter: u32,
) -> Option<(Complex64, f64)> {
    let mut z = z0;
    let mut best: Option<(Complex64, f64)> = None;
    for _ in 0..max_iter {
        let (w, d) = m.iterate_with_deriv(z, p);
        if !is_finite(w) {
            return best;
        }
        let f = w - z;
        let res = f.norm();
        if best.map_or(true, |(_, b)| res < b) {
            best = Some((z, res));
        }
        if res < tol {
            break;
        }
        let fp = d - Complex64::new(1.0, 0.0);
        if fp.norm() < 1e-14 {
            break;
        }
        let step = f / fp;
        if !is_finite(step) || step.norm() > 50.0 {
            return best;
        }
        z -= step;
    }
    // near a multiplier-one point the root is (at least) double; the
    // multiplicity-2 step restores quadratic convergence there
    if let Some((zb, _)) = best {
        let (_, d) = m.iterate_with_deriv(zb, p);
        if is_finite(d) && (d - Complex64::new(1.0, 0.0)).norm() < 1e-4 {
            let mut z = zb;
            for _ in 0..16 {
                let (w, d) = m.iterate_with_deriv(z, p);
                if !is_finite(w) {
                    break;
                }
                let f = w - z;
                let res = f.norm();
                if best.map_or(true, |(_, b)| res < b) {
                    best = Some((z, res));
                }
                if res < 1e-14 {
                    break;
                }
                let fp = d - Complex64::new(1.0, 0.0);
                if fp.norm() < 1e-16 {
                    break;
                }
                let step = 2.0 * f / fp;
                if !is_finite(step) || step.norm() > 1.0 {
                    break;
                }
                z -= step;
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeriodicSearchConfig {
    /// Newton seeds per side of the uniform grid.
    pub grid: usize,
    pub newton_tol: f64,
    pub max_newton: u32,
    /// Converged roots closer than this are the same point.
    pub dedup_tol: f64,
    /// Residual bound for deciding the minimal period among divisors.
    pub min_period_tol: f64,
    pub tol_ind: f64,
    pub r_max: u32,
}

impl Default for PeriodicSearchConfig {
    fn default() -> Self {
        Self {
            grid: 40,
            newton_tol: FIXED_TOL,
            max_newton: 80,
            dedup_tol: 1e-6,
            min_period_tol: 1e-8,
            tol_ind: TOL_IND,
            r_max: R_MAX,
        }
    }
}

/// Seeds from symbolic backward orbits: for each itinerary over the strips
/// meeting the box, the composed inverse branches contract onto the
/// periodic point with that itinerary whenever one exists. This finds the
/// one repelling point per strip that a uniform grid misses in far strips.
fn itinerary_seeds(m: &MapSpec, p: u32, search: &Rect) -> Vec<Complex64> {
    let c = m.c;
    let lo = ((search.y0 - c.im) / TAU).floor() as i32 - 1;
    let hi = ((search.y1 - c.im) / TAU).ceil() as i32 + 1;
    let lo = lo.max(-8);
    let hi = hi.min(8);
    if lo > hi {
        return Vec::new();
    }
    let symbols: Vec<i32> = (lo..=hi).collect();
    let p = p as usize;
    let mut seeds = Vec::new();
    let mut idx = vec![0usize; p];
    let total = symbols.len().pow(p as u32).min(20_000);
    for _ in 0..total {
        let itinerary: Vec<i32> = idx.iter().map(|&i| symbols[i]).collect();
        let mut z = Complex64::new(1.0, TAU * itinerary[0] as f64);
        let mut converged = false;
        let mut prev = z;
        for step in 0..240 {
            match pull_period_block(c, &itinerary, z, 1e-8) {
                Ok(next) => {
                    if !is_finite(next) {
                        break;
                    }
                    let moved = (next - prev).norm();
                    prev = next;
                    z = next;
                    if step > 4 && moved < 1e-11 {
                        converged = true;
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        if converged {
            seeds.push(z);
        }
        // odometer
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < symbols.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == p {
                return seeds;
            }
        }
    }
    seeds
}

/// Finds points fixed under `f^p` inside `search`, classified. Completeness
/// is only relative to the box and the seed grids.
pub fn find_periodic_points(
    m: &MapSpec,
    p: u32,
    search: &Rect,
    cfg: &PeriodicSearchConfig,
) -> Vec<PeriodicPointRecord> {
    assert!(p >= 1);
    let mut seeds = search.grid_centers(cfg.grid);
    if m.family == Family::Exponential {
        seeds.extend(itinerary_seeds(m, p, search));
    }

    let mut roots: Vec<Complex64> = Vec::new();
    for seed in seeds {
        let Some((z, res)) = newton_periodic(m, seed, p, cfg.newton_tol, cfg.max_newton) else {
            continue;
        };
        if res > cfg.newton_tol || !search.contains(z) {
            continue;
        }
        if roots.iter().all(|r| (r - z).norm() > cfg.dedup_tol) {
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite points")
    });

    let mut records = Vec::with_capacity(roots.len());
    for z in roots {
        let minimal = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (m.iterate(z, d) - z).norm() < cfg.min_period_tol)
            .unwrap_or(p);
        let (_, mu) = m.iterate_with_deriv(z, minimal);
        let (class, rotation) = classify(mu, cfg.tol_ind, cfg.r_max);
        records.push(PeriodicPointRecord {
            point: z,
            period: minimal,
            multiplier: mu,
            class,
            rotation,
        });
    }
    records
}

/// Points of the cycle through `rec.point`, in orbit order.
pub fn cycle_points(m: &MapSpec, rec: &PeriodicPointRecord) -> Vec<Complex64> {
    let mut pts = vec![rec.point];
    for _ in 1..rec.period {
        pts.push(m.eval(*pts.last().unwrap()));
    }
    pts
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SiegelConfig {
    pub n_rays: usize,
    pub n_iter: usize,
    /// Orbits leaving this distance from the center are not circulating in
    /// a linearization disk.
    pub leash: f64,
    /// Required return: the orbit tail must come back within this fraction
    /// of the start radius. Bounded-type rotation numbers return within
    /// ~1e-3 of the radius by 10^4 iterates; bounded orbits outside the
    /// disk (filled-Julia wanderers, preimage components) do not, which is
    /// what separates the disk from the rest of a polynomial's filled
    /// Julia set.
    pub return_frac: f64,
    /// Radii below this in every direction read as no disk (Cremer-like).
    pub min_radius: f64,
    pub bisect_iters: u32,
}

impl Default for SiegelConfig {
    fn default() -> Self {
        Self {
            n_rays: 128,
            n_iter: 10_000,
            leash: 20.0,
            return_frac: 0.02,
            min_radius: 1e-6,
            bisect_iters: 40,
        }
    }
}

/// Boundary point cloud of a detected linearization disk.
#[derive(Clone, Debug, Serialize)]
pub struct SiegelBoundary {
    pub center: Complex64,
    pub period: u32,
    pub cloud: Vec<Complex64>,
    pub radii: Vec<f64>,
    pub inner_radius: f64,
    pub no_disk_detected: bool,
    /// Mean and variance of the best return distance at the accepted radii;
    /// small variance indicates clean invariant circles.
    pub return_mean: f64,
    pub return_variance: f64,
}

impl SiegelBoundary {
    pub fn min_distance(&self, z: Complex64) -> f64 {
        self.cloud
            .iter()
            .map(|b| (z - b).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Does the `f^p`-orbit from `w0` circulate in a bounded invariant annular
/// region around `center`: stays on the leash, and returns near its start?
/// Returns the best tail return distance on success.
fn circulates(
    m: &MapSpec,
    center: Complex64,
    w0: Complex64,
    p: u32,
    cfg: &SiegelConfig,
) -> Option<f64> {
    let rho = (w0 - center).norm();
    let mut w = w0;
    let mut best_return = f64::INFINITY;
    let half = cfg.n_iter / 2;
    for k in 1..=cfg.n_iter {
        w = m.iterate(w, p);
        if !is_finite(w) || (w - center).norm() > cfg.leash {
            return None;
        }
        if k > half {
            best_return = best_return.min((w - w0).norm());
        }
    }
    if best_return <= cfg.return_frac * rho {
        Some(best_return)
    } else {
        None
    }
}

/// Estimates the boundary of a Siegel disk around an irrationally
/// indifferent periodic point by bisecting, along each of `n_rays`
/// directions, the largest radius whose orbit still circulates.
pub fn estimate_siegel_boundary(
    m: &MapSpec,
    center: Complex64,
    p: u32,
    cfg: &SiegelConfig,
) -> Result<SiegelBoundary> {
    let mu = multiplier(m, center, p)?;
    let (class, _) = classify(mu, TOL_IND, R_MAX);
    if class != CycleClass::IrrationallyIndifferent {
        return Err(Error::NotIndifferent(class.to_string()));
    }

    let mut radii = Vec::with_capacity(cfg.n_rays);
    let mut cloud = Vec::with_capacity(cfg.n_rays);
    let mut returns = Vec::new();
    for j in 0..cfg.n_rays {
        let dir = Complex64::from_polar(1.0, TAU * j as f64 / cfg.n_rays as f64);
        // grow until the orbit stops circulating
        let mut lo = 0.0f64;
        let mut hi = 1e-4;
        let mut lo_return = None;
        while hi < cfg.leash {
            match circulates(m, center, center + hi * dir, p, cfg) {
                Some(r) => {
                    lo = hi;
                    lo_return = Some(r);
                    hi *= 2.0;
                }
                None => break,
            }
        }
        if lo == 0.0 {
            radii.push(0.0);
            cloud.push(center);
            continue;
        }
        for _ in 0..cfg.bisect_iters {
            let mid = 0.5 * (lo + hi);
            match circulates(m, center, center + mid * dir, p, cfg) {
                Some(r) => {
                    lo = mid;
                    lo_return = Some(r);
                }
                None => hi = mid,
            }
        }
        radii.push(lo);
        cloud.push(center + lo * dir);
        if let Some(r) = lo_return {
            returns.push(r);
        }
    }

    let inner_radius = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let no_disk_detected = radii.iter().all(|&r| r < cfg.min_radius);
    let (return_mean, return_variance) = if returns.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = returns.iter().sum::<f64>() / returns.len() as f64;
        let var = returns.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>()
            / returns.len() as f64;
        (mean, var)
    };

    Ok(SiegelBoundary {
        center,
        period: p,
        cloud,
        radii,
        inner_radius,
        no_disk_detected,
        return_mean,
        return_variance,
    })
}

/// Golden mean rotation number (√5 − 1)/2.
pub fn golden_theta() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// Quadratic parameter with a golden-mean Siegel fixed point:
/// c = μ/2 − μ²/4 with μ = e^{2πiθ}.
pub fn quadratic_golden_siegel_parameter() -> Complex64 {
    let mu = Complex64::from_polar(1.0, TAU * golden_theta());
    mu / 2.0 - mu * mu / 4.0
}

/// Exponential parameter with a golden-mean Siegel fixed point at
/// z₀ = 2πiθ: c = z₀ − e^{z₀}.
pub fn exponential_golden_siegel_parameter() -> Complex64 {
    let z0 = Complex64::new(0.0, TAU * golden_theta());
    z0 - z0.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn attracting_map() -> MapSpec {
        MapSpec::exponential(c64(-1.0 - (-1.0f64).exp(), 0.0))
    }

    fn bisect_root(c: f64, lo: f64, hi: f64) -> f64 {
        // root of e^x + c − x, independent of Newton
        let h = |x: f64| x.exp() + c - x;
        let (mut lo, mut hi) = if h(lo) < 0.0 { (lo, hi) } else { (hi, lo) };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn attracting_parameter_fixed_points_match_bisection_oracle() {
        let m = attracting_map();
        let rect = Rect::new(-3.0, -3.0, 3.0, 3.0).unwrap();
        let recs = find_periodic_points(&m, 1, &rect, &PeriodicSearchConfig::default());
        // the two real roots of e^x + c = x
        let attracting = bisect_root(m.c.re, -2.0, 0.0);
        assert!((attracting + 1.0).abs() < 1e-10, "oracle finds −1");
        let repelling = bisect_root(m.c.re, 0.0, 1.0);

        let find = |x: f64| {
            recs.iter()
                .find(|r| (r.point - c64(x, 0.0)).norm() < 1e-8)
                .unwrap_or_else(|| panic!("missing fixed point near {x}"))
        };
        let att = find(attracting);
        assert_eq!(att.class, CycleClass::Attracting);
        assert!((att.multiplier - c64((-1.0f64).exp(), 0.0)).norm() < 1e-9);
        let rep = find(repelling);
        assert_eq!(rep.class, CycleClass::Repelling);
        for r in &recs {
            assert!((m.iterate(r.point, r.period) - r.point).norm() < FIXED_TOL);
        }
    }

    #[test]
    fn quadratic_z_squared_fixed_points() {
        let m = MapSpec::quadratic(c64(0.0, 0.0));
        let rect = Rect::new(-2.0, -2.0, 2.0, 2.0).unwrap();
        let recs = find_periodic_points(&m, 1, &rect, &PeriodicSearchConfig::default());
        assert_eq!(recs.len(), 2);
        let zero = recs.iter().find(|r| r.point.norm() < 1e-9).unwrap();
        assert_eq!(zero.class, CycleClass::Attracting);
        assert!(zero.multiplier.norm() < 1e-9, "superattracting");
        let one = recs
            .iter()
            .find(|r| (r.point - c64(1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(one.class, CycleClass::Repelling);
        assert!((one.multiplier - c64(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn parabolic_parameter_finds_multiplier_one_point() {
        let m = MapSpec::exponential(c64(-1.0, 0.0));
        let rect = Rect::new(-3.0, -3.0, 3.0, 3.0).unwrap();
        let recs = find_periodic_points(&m, 1, &rect, &PeriodicSearchConfig::default());
        let zero = recs
            .iter()
            .find(|r| r.point.norm() < 1e-6)
            .expect("parabolic point at 0");
        assert!(matches!(
            zero.class,
            CycleClass::Parabolic {
                numerator: 0,
                denominator: 1
            }
        ));
        assert!((zero.multiplier - c64(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn basilica_two_cycle_has_zero_multiplier() {
        let m = MapSpec::quadratic(c64(-1.0, 0.0));
        let mu = multiplier(&m, c64(0.0, 0.0), 2).unwrap();
        assert!(mu.norm() < 1e-12, "cycle contains the critical point");
        let rect = Rect::new(-2.0, -2.0, 2.0, 2.0).unwrap();
        let recs = find_periodic_points(&m, 2, &rect, &PeriodicSearchConfig::default());
        let cycle_pts: Vec<_> = recs.iter().filter(|r| r.period == 2).collect();
        assert_eq!(cycle_pts.len(), 2, "both points of the 2-cycle");
        for r in cycle_pts {
            assert_eq!(r.class, CycleClass::Attracting);
        }
    }

    #[test]
    fn multiplier_requires_a_periodic_point() {
        let m = attracting_map();
        assert!(multiplier(&m, c64(0.5, 0.5), 1).is_err());
        let mu = multiplier(&m, c64(-1.0, 0.0), 1).unwrap();
        assert!((mu - c64((-1.0f64).exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let (class, _) = classify(c64(0.3679, 0.0), TOL_IND, R_MAX);
        assert_eq!(class, CycleClass::Attracting);
        let (class, _) = classify(c64(1.0, 0.0), TOL_IND, R_MAX);
        assert_eq!(
            class,
            CycleClass::Parabolic {
                numerator: 0,
                denominator: 1
            }
        );
        let mu = Complex64::from_polar(1.0, TAU * golden_theta());
        let (class, rot) = classify(mu, TOL_IND, R_MAX);
        assert_eq!(class, CycleClass::IrrationallyIndifferent);
        let rot = rot.unwrap();
        assert!((rot.theta - 0.618034).abs() < 1e-5);
        // golden mean convergents are ratios of Fibonacci numbers
        assert!(rot.convergents.iter().any(|&(p, q)| (p, q) == (5, 8)));
    }

    #[test]
    fn classification_is_stable_away_from_the_shells() {
        let samples = [
            (c64(0.5, 0.2), CycleClass::Attracting),
            (c64(1.5, -0.4), CycleClass::Repelling),
        ];
        for (mu, expect) in samples {
            for d in [c64(1e-12, 0.0), c64(0.0, 1e-12), c64(-1e-12, 1e-12)] {
                let (class, _) = classify(mu + d, TOL_IND, R_MAX);
                assert_eq!(class, expect);
            }
        }
    }

    #[test]
    fn minimal_period_divides_requested_period() {
        let m = attracting_map();
        let rect = Rect::new(-3.0, -3.0, 3.0, 3.0).unwrap();
        for rec in find_periodic_points(&m, 2, &rect, &PeriodicSearchConfig::default()) {
            assert_eq!(2 % rec.period, 0);
        }
    }

    #[test]
    fn quadratic_golden_siegel_disk_is_detected() {
        let c = quadratic_golden_siegel_parameter();
        let m = MapSpec::quadratic(c);
        let alpha = Complex64::from_polar(1.0, TAU * golden_theta()) / 2.0;
        let cfg = SiegelConfig {
            n_rays: 16,
            n_iter: 10_000,
            ..SiegelConfig::default()
        };
        let boundary = estimate_siegel_boundary(&m, alpha, 1, &cfg).unwrap();
        assert!(!boundary.no_disk_detected);
        assert!(
            boundary.inner_radius > 0.05,
            "inner radius {} too small",
            boundary.inner_radius
        );
        // nested invariant circles: an orbit at half the inner radius stays
        // clear of the boundary cloud
        let w0 = alpha + c64(boundary.inner_radius / 2.0, 0.0);
        let orbit = m.orbit(w0, 2000, 1e5);
        assert!(orbit.escaped_at.is_none());
        let min_gap = orbit
            .points
            .iter()
            .map(|z| boundary.min_distance(*z))
            .fold(f64::INFINITY, f64::min);
        assert!(min_gap > 1e-3, "orbit touches the boundary cloud: {min_gap}");
    }

    #[test]
    fn exponential_golden_siegel_disk_is_detected() {
        let c = exponential_golden_siegel_parameter();
        let m = MapSpec::exponential(c);
        let z0 = c64(0.0, TAU * golden_theta());
        // z0 really is fixed with golden-mean rotation
        assert!((m.eval(z0) - z0).norm() < 1e-12);
        let cfg = SiegelConfig {
            n_rays: 16,
            n_iter: 4_000,
            ..SiegelConfig::default()
        };
        let boundary = estimate_siegel_boundary(&m, z0, 1, &cfg).unwrap();
        assert!(!boundary.no_disk_detected);
        assert!(boundary.inner_radius > 0.01);
    }

    #[test]
    fn siegel_estimator_rejects_attracting_centers() {
        let m = attracting_map();
        let err = estimate_siegel_boundary(&m, c64(-1.0, 0.0), 1, &SiegelConfig::default());
        assert!(matches!(err, Err(Error::NotIndifferent(_))));
    }
}
