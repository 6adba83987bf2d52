//! Command-line behaviour: flags, exit codes, file outputs.

use std::process::Command;

fn raysep(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_raysep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_path(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("raysep-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn trace_ray_writes_json_with_small_residual() {
    let out = raysep(&[
        "trace-ray",
        "--map",
        "exp:-1.3679,0",
        "--address",
        "|0",
        "--tmax",
        "20",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let residual = v["residual"].as_f64().unwrap();
    assert!(residual < 1e-8, "residual {residual}");
    assert!(v["samples"].as_array().unwrap().len() > 10);
    assert_eq!(v["landing"]["status"], "landed");
}

#[test]
fn trace_ray_missing_address_is_usage_error() {
    let out = raysep(&["trace-ray", "--map", "exp:-1.3679,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn trace_ray_address_on_quadratic_is_usage_error() {
    let out = raysep(&[
        "trace-ray",
        "--map",
        "quad:0,0",
        "--address",
        "|0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_ray_angle_works_on_quadratic() {
    let out = raysep(&["trace-ray", "--map", "quad:0,0", "--angle", "1/3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["angle"], "1/3");
    assert_eq!(v["landing"]["status"], "landed");
}

#[test]
fn malformed_map_is_usage_error() {
    let out = raysep(&["verify", "--map", "cubic:1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_box_is_usage_error() {
    let out = raysep(&["verify", "--map", "exp:-1.3679,0", "--box", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_attracting_parameter_exits_zero_with_pass() {
    let path = tmp_path("verify.json");
    let out = raysep(&[
        "verify",
        "--map",
        "exp:-1.3679,0",
        "--p",
        "1",
        "--M",
        "2",
        "--iters",
        "400",
        "--max-period",
        "2",
        "--deterministic",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["fs"]["verdict"], "pass");
    assert!(v["timestamp"].is_null() || v.get("timestamp").is_none());
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_basilica_census_passes_both_regions() {
    let out = raysep(&[
        "verify",
        "--map",
        "quad:-1,0",
        "--p",
        "2",
        "--box",
        "-2.5,-2.5,2.5,2.5",
        "--iters",
        "400",
        "--max-period",
        "2",
        "--deterministic",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let regions = v["census"].as_array().unwrap();
    assert_eq!(regions.len(), 2);
    for r in regions {
        assert_eq!(r["verdict"], "pass");
        assert_eq!(r["region_type"], "polynomial_type");
    }
}

#[test]
fn render_produces_valid_ppm_deterministically() {
    let path_a = tmp_path("render-a.ppm");
    let path_b = tmp_path("render-b.ppm");
    for path in [&path_a, &path_b] {
        let out = raysep(&[
            "render",
            "--map",
            "exp:-1.3679,0",
            "--box",
            "-4,-8,4,8",
            "--render",
            "160x120",
            "--iters",
            "40",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert!(a.starts_with(b"P6\n160 120\n255\n"));
    assert_eq!(a.len(), 15 + 160 * 120 * 3);
    assert_eq!(a, b, "renders must be byte-identical");
    std::fs::remove_file(&path_a).ok();
    std::fs::remove_file(&path_b).ok();
}

#[test]
fn render_zero_area_viewport_is_usage_error() {
    let out = raysep(&[
        "render",
        "--map",
        "exp:-1.3679,0",
        "--box",
        "1,1,1,5",
        "--render",
        "100x100",
        "--out",
        "/tmp/raysep-zero.ppm",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_unwritable_path_is_io_error() {
    let out = raysep(&[
        "render",
        "--map",
        "quad:0,0",
        "--box",
        "-2,-2,2,2",
        "--render",
        "50x50",
        "--iters",
        "20",
        "--out",
        "/nonexistent-dir/out.ppm",
    ]);
    assert_eq!(out.status.code(), Some(5));
}
