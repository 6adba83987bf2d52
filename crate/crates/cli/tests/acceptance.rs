//! Acceptance suite: every verification target the toolkit ships with, run
//! at its stated tolerance. Each test prints one pass/fail line; run with
//! `cargo test -p raysep-cli --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;

use raysep::address::{enumerate_periodic, ExternalAddress};
use raysep::maps::{MapSpec, Rect, TractGeometry};
use raysep::periodic::{
    estimate_siegel_boundary, exponential_golden_siegel_parameter, find_periodic_points,
    golden_theta, quadratic_golden_siegel_parameter, CycleClass, PeriodicSearchConfig,
    SiegelConfig,
};
use raysep::polyoracle::{
    build_gamma_quadratic, gm_cross_check, land_ray_quadratic, ExternalAngle, GmConfig,
    QuadRayConfig,
};
use raysep::rays::{land_ray, trace_ray, LandConfig, LandingStatus, TraceConfig, Truncation};
use raysep::regions::{
    basic_regions, census, classify_region_type, decompose, CensusConfig, CensusVerdict, Located,
    RegionConfig, RegionProbeConfig, RegionType,
};
use raysep::singular::{
    avoidance_targets, fatou_shishikura_report, group_cycles, verify_trapping, FsConfig,
    FsVerdict, TrappingConfig,
};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn attracting_c() -> Complex64 {
    c64(-1.0 - (-1.0f64).exp(), 0.0)
}

fn standard_box() -> Rect {
    Rect::new(-4.0, -8.0, 4.0, 8.0).unwrap()
}

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {n} ({name}) failed: {detail}");
}

/// 1. Functional equation for every address of period up to 3 with symbols
/// in [-2, 2], traced at depth 12 on t in [1, 20]: residual below 1e-8 at
/// every sample, in under 30 seconds.
#[test]
fn acceptance_1_ray_functional_equation() {
    let start = Instant::now();
    let m = MapSpec::exponential(attracting_c());
    let cfg = TraceConfig {
        t_max: 20.0,
        t_min: 1.0,
        depth: 12,
        ..TraceConfig::default()
    };
    let mut addresses: BTreeSet<ExternalAddress> = BTreeSet::new();
    for p in 1..=3u32 {
        addresses.extend(enumerate_periodic(p, 2));
    }
    assert_eq!(addresses.len(), 145, "5 + 20 + 120 primitive-orbit addresses");
    let mut worst: f64 = 0.0;
    for a in &addresses {
        let trace = trace_ray(&m, a, &cfg).unwrap();
        assert_eq!(trace.truncation, Truncation::ReachedTMin, "{a} truncated");
        worst = worst.max(trace.residual);
        assert!(
            trace.residual < 1e-8,
            "residual {} for {a} exceeds 1e-8",
            trace.residual
        );
    }
    let elapsed = start.elapsed();
    report(
        1,
        "ray functional equation",
        worst < 1e-8 && elapsed.as_secs() < 30,
        &format!(
            "{} addresses, worst residual {worst:.3e}, {:.2}s",
            addresses.len(),
            elapsed.as_secs_f64()
        ),
    );
}

/// 2. The fixed ray |0 lands on the bisection root of e^x + c = x in (0,1)
/// to 1e-8 with repelling multiplier; every strip fixed ray |n|<=2 lands at
/// a distinct point.
#[test]
fn acceptance_2_fixed_ray_landing() {
    let c = attracting_c();
    let m = MapSpec::exponential(c);
    let cfg = LandConfig::default();

    // independent bisection oracle on the real axis
    let h = |x: f64| x.exp() + c.re - x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    assert!(h(lo) < 0.0 && h(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    assert!((oracle - 0.7508).abs() < 5e-4, "oracle sanity: {oracle}");

    let zero_ray = land_ray(&m, &ExternalAddress::fixed(0), &cfg).unwrap();
    let landed = zero_ray.status == LandingStatus::Landed;
    let matches_oracle = (zero_ray.landing_point - c64(oracle, 0.0)).norm() < 1e-8;
    let repelling = zero_ray.landing_point.re.exp() > 1.0;

    let mut points = Vec::new();
    let mut all_landed = true;
    for n in -2..=2 {
        let res = land_ray(&m, &ExternalAddress::fixed(n), &cfg).unwrap();
        all_landed &= res.status == LandingStatus::Landed;
        points.push(res.landing_point);
    }
    let mut distinct = true;
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            distinct &= (a - b).norm() > 0.5;
        }
    }

    report(
        2,
        "fixed ray landing",
        landed && matches_oracle && repelling && all_landed && distinct,
        &format!(
            "landing {:.10} vs oracle {:.10}, |f'| = {:.4}",
            zero_ray.landing_point.re,
            oracle,
            zero_ray.landing_point.re.exp()
        ),
    );
}

/// 3. Separation census: attracting and parabolic parameters, p in {1, 2},
/// window 2, box [-4,4]x[-8,8]: every region passes with exactly one
/// interior or virtual fixed point; the parabolic parameter shows the
/// virtual fixed point at 0.
#[test]
fn acceptance_3_separation_census() {
    let rect = standard_box();
    let mut all_pass = true;
    let mut detail = String::new();
    for (c, parabolic) in [(attracting_c(), false), (c64(-1.0, 0.0), true)] {
        let m = MapSpec::exponential(c);
        for p in [1u32, 2] {
            let d = decompose(&m, p, 2, &LandConfig::default(), &RegionConfig::default())
                .unwrap();
            let cycles = find_periodic_points(&m, p, &rect, &PeriodicSearchConfig::default());
            let rep = census(&m, &d, &cycles, &rect, &CensusConfig::default());
            let pass = rep.all_pass();
            let vfp_ok = if parabolic {
                rep.regions.iter().any(|r| {
                    r.virtual_points
                        .iter()
                        .any(|v| v.parabolic_point.norm() < 1e-4)
                })
            } else {
                true
            };
            all_pass &= pass && vfp_ok;
            detail.push_str(&format!(
                "[{m} p={p}: {} regions, pass={pass}, vfp={vfp_ok}] ",
                rep.regions.len()
            ));
        }
    }
    report(3, "separation census", all_pass, detail.trim());
}

/// 4. Siegel trapping at c = 2πiθ − e^{2πiθ}: bounded singular orbit for
/// 10^4 iterates, residue pattern for p in {1, 2}, tail within 1e-2 of the
/// boundary cloud and not worse at 2·10^4, and margins above ten times the
/// accumulation threshold at every traced repelling landing point.
#[test]
fn acceptance_4_siegel_trapping() {
    let c = exponential_golden_siegel_parameter();
    let m = MapSpec::exponential(c);
    let rect = standard_box();
    let land = LandConfig::default();
    let region = RegionConfig::default();

    let records = find_periodic_points(&m, 1, &rect, &PeriodicSearchConfig::default());
    let cycles = group_cycles(&m, &records);
    let target = cycles
        .iter()
        .find(|cy| matches!(cy.class, CycleClass::IrrationallyIndifferent))
        .expect("Siegel fixed point in box")
        .clone();
    let z0 = c64(0.0, std::f64::consts::TAU * golden_theta());
    assert!((target.points[0] - z0).norm() < 1e-8, "center is 2πiθ");

    let boundary = estimate_siegel_boundary(&m, target.points[0], 1, &SiegelConfig::default())
        .unwrap();
    assert!(!boundary.no_disk_detected);

    let mut pattern_both = true;
    let mut main_report = None;
    for p in [1u32, 2] {
        let d = decompose(&m, p, 2, &land, &region).unwrap();
        let targets = avoidance_targets(&cycles, &target, &d);
        let cfg = TrappingConfig {
            iters: 10_000,
            check_improvement: true,
            ..TrappingConfig::default()
        };
        let rep = verify_trapping(&m, &target, Some(&boundary), &d, &targets, &cfg).unwrap();
        pattern_both &= rep.pattern_ok && rep.escaped_at.is_none();
        if p == 1 {
            main_report = Some(rep);
        }
    }
    let rep = main_report.unwrap();
    let acc = &rep.accumulation[0];
    let close = acc.min_tail_distance < 1e-2;
    let improved = acc
        .min_tail_distance_doubled
        .map_or(false, |d2| d2 <= acc.min_tail_distance);
    let margins = rep
        .avoidance
        .traced_repelling_landing
        .iter()
        .all(|e| e.min_distance > 10.0 * rep.accumulation_threshold);
    let has_landing_targets = !rep.avoidance.traced_repelling_landing.is_empty();

    report(
        4,
        "Siegel trapping",
        pattern_both && close && improved && margins && has_landing_targets,
        &format!(
            "tail {:.4e} -> {:.4e}, {} repelling landing targets, min margin {:.3}",
            acc.min_tail_distance,
            acc.min_tail_distance_doubled.unwrap_or(f64::NAN),
            rep.avoidance.traced_repelling_landing.len(),
            rep.avoidance
                .traced_repelling_landing
                .iter()
                .map(|e| e.min_distance)
                .fold(f64::INFINITY, f64::min)
        ),
    );
}

/// 5. Non-repelling cycle counts of period up to 3: exactly one for the
/// attracting, parabolic, and Siegel parameters, none for the escaping one,
/// never exceeding the single singular value.
#[test]
fn acceptance_5_fatou_shishikura_count() {
    let rect = standard_box();
    let cases = [
        (attracting_c(), 1usize),
        (c64(-1.0, 0.0), 1),
        (exponential_golden_siegel_parameter(), 1),
        (c64(1.0, 0.0), 0),
    ];
    let mut all = true;
    let mut detail = String::new();
    for (c, expect) in cases {
        let m = MapSpec::exponential(c);
        let cfg = FsConfig::new(3, rect, 2);
        let rep = fatou_shishikura_report(&m, &cfg).unwrap();
        let ok = rep.non_repelling.len() == expect
            && rep.non_repelling.len() <= rep.singular_count
            && rep.verdict == FsVerdict::Pass;
        all &= ok;
        detail.push_str(&format!(
            "[{m}: {} non-repelling, expect {expect}] ",
            rep.non_repelling.len()
        ));
    }
    report(5, "refined cycle count", all, detail.trim());
}

/// 6. Quadratic oracle: angle 0 lands at 1 to 1e-10 for z²; the basilica
/// rays 1/3 and 2/3 co-land at (1-√5)/2 to 1e-8; the basilica census
/// passes with two regions; the golden Siegel critical orbit reaches the
/// boundary estimate within 1e-2 at 10^4 iterates.
#[test]
fn acceptance_6_quadratic_oracle() {
    let land = LandConfig::default();
    let qcfg = QuadRayConfig::default();

    let beta = land_ray_quadratic(c64(0.0, 0.0), ExternalAngle::zero(), &land, &qcfg).unwrap();
    let beta_ok = beta.status == LandingStatus::Landed
        && (beta.landing_point - c64(1.0, 0.0)).norm() < 1e-10;

    let alpha = (1.0 - 5.0f64.sqrt()) / 2.0;
    let mut alpha_ok = true;
    for angle in ["1/3", "2/3"] {
        let res = land_ray_quadratic(c64(-1.0, 0.0), angle.parse().unwrap(), &land, &qcfg)
            .unwrap();
        alpha_ok &= res.status == LandingStatus::Landed
            && (res.landing_point - c64(alpha, 0.0)).norm() < 1e-8;
    }

    let basilica = gm_cross_check(c64(-1.0, 0.0), 2, &GmConfig::default()).unwrap();
    let basilica_ok = basilica.region_count == 2 && basilica.census.all_pass();

    let mut siegel_cfg = GmConfig::default();
    siegel_cfg.trapping.iters = 10_000;
    let siegel = gm_cross_check(quadratic_golden_siegel_parameter(), 1, &siegel_cfg).unwrap();
    let siegel_tail = siegel
        .trapping
        .as_ref()
        .map(|t| t.accumulation[0].min_tail_distance)
        .unwrap_or(f64::INFINITY);
    let siegel_ok = siegel_tail < 1e-2;

    report(
        6,
        "quadratic oracle",
        beta_ok && alpha_ok && basilica_ok && siegel_ok,
        &format!(
            "beta {:.3e}, basilica regions {}, Siegel tail {siegel_tail:.3e}",
            (beta.landing_point - c64(1.0, 0.0)).norm(),
            basilica.region_count
        ),
    );
}

/// 7. Polynomial-type regions: the basilica regions classify polynomial
/// type in agreement with the escaping-sector oracle on at least 95% of
/// probes, and the golden quadratic Siegel boundary cloud sits inside its
/// polynomial-type region's bounded probe hull.
#[test]
fn acceptance_7_polynomial_type_regions() {
    let land = LandConfig::default();
    let qcfg = QuadRayConfig::default();
    let region_cfg = RegionConfig::default();

    // basilica
    let c = c64(-1.0, 0.0);
    let m = MapSpec::quadratic(c);
    let gamma = build_gamma_quadratic(c, 2, &land, &qcfg).unwrap();
    let d = basic_regions(&m, gamma, 2, None, &region_cfg).unwrap();
    let rect = Rect::new(-2.5, -2.5, 2.5, 2.5).unwrap();
    let tract = TractGeometry::for_map(&m);
    let probe_cfg = RegionProbeConfig::for_viewport(rect);

    let regions = d.discover_regions(&rect, 41);
    assert_eq!(regions.len(), 2);
    let mut agree = 0usize;
    let mut total = 0usize;
    for (id, _) in &regions {
        let verdict = classify_region_type(&d, id, &tract, &probe_cfg);
        // oracle: every far-field ring point escapes, so the region's
        // non-tract membership is bounded and the region is polynomial type
        let ring_escapes = (0..64).all(|k| {
            let z = Complex64::from_polar(
                2.0 * tract.r,
                std::f64::consts::TAU * k as f64 / 64.0,
            );
            m.orbit(z, 60, 1e5).escaped_at.is_some()
        });
        let oracle = if ring_escapes {
            RegionType::PolynomialType
        } else {
            RegionType::TranscendentalType
        };
        total += 1;
        if verdict.kind == oracle {
            agree += 1;
        }
    }
    let verdict_agreement = agree as f64 / total as f64;

    // Böttcher sector oracle for the location structure: far-field angles
    // in the (1/3, 2/3) wake share the critical value's region, the rest
    // share the critical point's region
    let wake_id = match d.locate(c) {
        Located::Region(id) => id,
        _ => panic!("critical value on boundary"),
    };
    let co_id = match d.locate(c64(0.0, 0.0)) {
        Located::Region(id) => id,
        _ => panic!("critical point on boundary"),
    };
    assert_ne!(wake_id, co_id, "ray pair separates 0 from -1");
    let mut sector_total = 0usize;
    let mut sector_agree = 0usize;
    for k in 0..200 {
        let theta = (k as f64 + 0.5) / 200.0;
        if (theta - 1.0 / 3.0).abs() < 0.01 || (theta - 2.0 / 3.0).abs() < 0.01 {
            continue;
        }
        let z = Complex64::from_polar(50.0, std::f64::consts::TAU * theta);
        let expect = if theta > 1.0 / 3.0 && theta < 2.0 / 3.0 {
            &wake_id
        } else {
            &co_id
        };
        sector_total += 1;
        if d.locate(z) == Located::Region(expect.clone()) {
            sector_agree += 1;
        }
    }
    let sector_agreement = sector_agree as f64 / sector_total as f64;

    // golden quadratic Siegel: cloud inside the region's bounded probe hull
    let cs = quadratic_golden_siegel_parameter();
    let ms = MapSpec::quadratic(cs);
    let gamma = build_gamma_quadratic(cs, 1, &land, &qcfg).unwrap();
    let ds = basic_regions(&ms, gamma, 1, None, &region_cfg).unwrap();
    let alpha = Complex64::from_polar(1.0, std::f64::consts::TAU * golden_theta()) / 2.0;
    let boundary = estimate_siegel_boundary(&ms, alpha, 1, &SiegelConfig::default()).unwrap();
    let siegel_region = match ds.locate(alpha) {
        Located::Region(id) => id,
        _ => panic!("Siegel center on boundary"),
    };
    let tract_s = TractGeometry::for_map(&ms);
    let type_report = classify_region_type(
        &ds,
        &siegel_region,
        &tract_s,
        &RegionProbeConfig::for_viewport(rect),
    );
    let hull = type_report.hull.expect("bounded probes exist");
    let cloud_inside = boundary.cloud.iter().all(|z| {
        hull.contains(*z) && ds.locate(*z) == Located::Region(siegel_region.clone())
    });
    let siegel_polynomial = type_report.kind == RegionType::PolynomialType;

    report(
        7,
        "polynomial-type regions",
        verdict_agreement >= 0.95 && sector_agreement >= 0.95 && cloud_inside && siegel_polynomial,
        &format!(
            "type agreement {verdict_agreement:.2}, sector agreement {sector_agreement:.3}, \
             cloud inside hull: {cloud_inside}"
        ),
    );
}

/// 8. Determinism and robustness: two identical verify runs are
/// byte-identical under --deterministic, and the module invariant suites
/// (address order axioms, derivative consistency, graph invariance,
/// location path-consistency) hold.
#[test]
fn acceptance_8_determinism_and_invariants() {
    // byte-identical CLI runs
    let exe = env!("CARGO_BIN_EXE_raysep");
    let run = || {
        Command::new(exe)
            .args([
                "verify",
                "--map",
                "exp:-1.3678794411714423,0",
                "--p",
                "1",
                "--M",
                "2",
                "--box",
                "-4,-8,4,8",
                "--iters",
                "400",
                "--max-period",
                "2",
                "--deterministic",
            ])
            .output()
            .expect("verify runs")
    };
    let a = run();
    let b = run();
    let deterministic =
        a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();

    // address order axioms, exhaustive over the window-2 period-2 set
    let all = enumerate_periodic(2, 2);
    let mut order_ok = true;
    for x in &all {
        for y in &all {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => order_ok &= x == y,
                ord => order_ok &= y.cmp(x) == ord.reverse(),
            }
            for z in &all {
                if x <= y && y <= z {
                    order_ok &= x <= z;
                }
            }
        }
    }

    // eval/deriv finite differences at 1e-6
    let mut deriv_ok = true;
    let h = 1e-7;
    for m in [
        MapSpec::exponential(attracting_c()),
        MapSpec::quadratic(c64(-1.0, 0.0)),
    ] {
        for k in 0..40 {
            let z = Complex64::from_polar(
                (k as f64 * 0.23) % 4.0,
                k as f64 * 0.71,
            );
            let fd = (m.eval(z + c64(h, 0.0)) - m.eval(z)) / h;
            let d = m.deriv(z);
            deriv_ok &= (fd - d).norm() / (1.0 + d.norm()) < 1e-6;
        }
    }

    // graph forward invariance at the attracting parameter
    let m = MapSpec::exponential(attracting_c());
    let cfg = LandConfig::default();
    let mut invariance_ok = true;
    for a in enumerate_periodic(2, 1) {
        let res = land_ray(&m, &a, &cfg).unwrap();
        let shifted = land_ray(&m, &a.shift(), &cfg).unwrap();
        invariance_ok &= res.status == LandingStatus::Landed
            && shifted.status == LandingStatus::Landed
            && (m.eval(res.landing_point) - shifted.landing_point).norm() < 1e-5;
    }

    // location is constant along separator-free paths (basilica has a
    // genuine separator to dodge)
    let c = c64(-1.0, 0.0);
    let mq = MapSpec::quadratic(c);
    let gamma = build_gamma_quadratic(c, 2, &LandConfig::default(), &QuadRayConfig::default())
        .unwrap();
    let d = basic_regions(&mq, gamma, 2, None, &RegionConfig::default()).unwrap();
    let mut locate_ok = true;
    for (a, b) in [
        (c64(-0.1, 0.05), c64(1.4, 0.05)),
        (c64(-1.0, 0.02), c64(-1.4, 0.4)),
    ] {
        let mut ids = BTreeSet::new();
        for k in 0..=300 {
            let z = a + (b - a) * (k as f64 / 300.0);
            if let Located::Region(id) = d.locate(z) {
                ids.insert(id);
            }
        }
        locate_ok &= ids.len() == 1;
    }

    report(
        8,
        "determinism and invariants",
        deterministic && order_ok && deriv_ok && invariance_ok && locate_ok,
        &format!(
            "deterministic={deterministic} order={order_ok} deriv={deriv_ok} \
             invariance={invariance_ok} locate={locate_ok}"
        ),
    );
}

/// Census verdicts are the separation statement as a falsifiable assertion:
/// no tested parameter may produce an overfull region.
#[test]
fn acceptance_census_never_overfull() {
    let rect = standard_box();
    let mut checked = 0;
    for c in [
        attracting_c(),
        c64(-1.0, 0.0),
        exponential_golden_siegel_parameter(),
    ] {
        let m = MapSpec::exponential(c);
        for p in [1u32, 2] {
            let d = decompose(&m, p, 2, &LandConfig::default(), &RegionConfig::default())
                .unwrap();
            let cycles = find_periodic_points(&m, p, &rect, &PeriodicSearchConfig::default());
            let rep = census(&m, &d, &cycles, &rect, &CensusConfig::default());
            assert!(
                rep.regions
                    .iter()
                    .all(|r| r.verdict != CensusVerdict::Overfull),
                "overfull region at {m}, p={p}"
            );
            checked += 1;
        }
    }
    println!("ACCEPTANCE census-guard: PASS ({checked} parameter/period pairs, none overfull)");
}
