//! End-to-end checks of the binary surface: output shapes and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_p1xp1"))
}

#[test]
fn packing_golden_line() {
    let out = bin()
        .args(["packing", "--r", "409", "--e1", "2", "--e2", "401"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"value":{"num":"654481","den":"656036"},"full":false}"#
    );
}

#[test]
fn seshadri_small_r_exact() {
    let out = bin()
        .args(["seshadri", "--r", "5", "--e1", "1", "--e2", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "exact");
    assert_eq!(v["value"]["a_num"], "3");
    assert_eq!(v["value"]["a_den"], "5");
}

#[test]
fn rational_bundle_input() {
    // (1/2, 7/3) scales the (3, 14) answer by 1/6.
    let a = bin()
        .args(["seshadri", "--r", "6", "--e1", "1/2", "--e2", "7/3"])
        .output()
        .unwrap();
    let b = bin()
        .args(["seshadri", "--r", "6", "--e1", "3", "--e2", "14"])
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    let va: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    let ratio = |v: &serde_json::Value| {
        let num: i64 = v["value"]["a_num"].as_str().unwrap().parse().unwrap();
        let den: i64 = v["value"]["a_den"].as_str().unwrap().parse().unwrap();
        (num, den)
    };
    let (an, ad) = ratio(&va);
    let (bn, bd) = ratio(&vb);
    assert_eq!(an * bd * 6, bn * ad, "homogeneity across the scaling");
}

#[test]
fn exit_codes() {
    // Usage error: unknown flag -> 2.
    let out = bin().args(["packing", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Domain error: nonpositive bundle -> 1, module error name on stderr.
    let out = bin()
        .args(["packing", "--r", "4", "--e1", "0", "--e2", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("LatticeError:"));
    // Success -> 0.
    let out = bin()
        .args(["packing", "--r", "4", "--e1", "1", "--e2", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unusual_r_json_or_null() {
    let out = bin()
        .args(["unusual-r", "--e1", "1", "--e2", "200"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"r": 400, "n": 1}));
    let out = bin()
        .args(["unusual-r", "--e1", "2", "--e2", "13"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "null");
}

#[test]
fn sequences_csv_shape() {
    let out = bin()
        .args(["sequences", "--r", "10", "--nmax", "2"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,p,m,q,slope");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[4], "1,10,1,1,5");
}

#[test]
fn cone_svg_deterministic() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("p1xp1-cone-a.svg");
    let p2 = dir.join("p1xp1-cone-b.svg");
    for p in [&p1, &p2] {
        let out = bin()
            .args(["cone", "--r", "8", "--window", "4", "--svg"])
            .arg(p)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert!(!a.is_empty() && a == b, "identical SVG bytes across runs");
    assert!(a.starts_with(b"<svg"));
}

#[test]
fn verify_fast_passes() {
    let out = bin().args(["verify", "--fast"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in String::from_utf8(out.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
}
