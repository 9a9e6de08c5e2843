use std::path::Path;
use std::process::Command;

use amoeba_cli::{run, EXIT_BUDGET, EXIT_INVALID, EXIT_OK};
use serde_json::Value;

fn amoeba(args: &[&str]) -> i32 {
    run(std::iter::once("amoeba").chain(args.iter().copied()))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amoeba"))
}

fn ppm_mask(path: &Path) -> (usize, usize, Vec<bool>) {
    let bytes = std::fs::read(path).unwrap();
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        fields.push(String::from_utf8(bytes[start..pos].to_vec()).unwrap());
    }
    assert_eq!(fields[0], "P6");
    let (w, h): (usize, usize) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
    let data = &bytes[pos + 1..];
    assert_eq!(data.len(), 3 * w * h);
    (w, h, data.chunks(3).map(|px| px != [255, 255, 255]).collect())
}

/// Painted pixels with no painted 8-neighbour, as a fraction of painted pixels.
fn isolated_fraction(path: &Path) -> f64 {
    let (w, h, m) = ppm_mask(path);
    let mut painted = 0;
    let mut isolated = 0;
    for j in 0..h {
        for i in 0..w {
            if !m[j * w + i] {
                continue;
            }
            painted += 1;
            let lonely = (-1i64..=1).all(|dj| {
                (-1i64..=1).all(|di| {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    (di, dj) == (0, 0)
                        || a < 0
                        || b < 0
                        || a >= w as i64
                        || b >= h as i64
                        || !m[b as usize * w + a as usize]
                })
            });
            if lonely {
                isolated += 1;
            }
        }
    }
    isolated as f64 / painted.max(1) as f64
}

#[test]
fn info_reports_bounds_and_sparsity() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("info.json");
    assert_eq!(amoeba(&["info", "z1+z2+1", "--report", report.to_str().unwrap()]), EXIT_OK);
    let v = read_json(&report);
    assert_eq!(v["bounds"]["min"], 3);
    assert_eq!(v["bounds"]["max"], 3);
    assert_eq!(v["maximally_sparse"], true);

    let out = bin().args(["info", "--fixture", "p1"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["terms"], 10);
    assert_eq!(v["maximally_sparse"], false);
}

#[test]
fn line_components_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("line.json");
    let image = dir.path().join("line.ppm");
    let args = [
        "components",
        "-p",
        "z1 + z2 + 1",
        "--domain",
        "x:-4:4,y:-4:4",
        "--report",
        report.to_str().unwrap(),
        "--out",
        image.to_str().unwrap(),
        "--res",
        "64x48",
    ];
    assert_eq!(amoeba(&args), EXIT_OK);
    let v = read_json(&report);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 3);
    assert!(comps.iter().all(|c| c["bounded"] == false));
    assert_eq!(v["flags"]["solid"], true);
    let (w, h, _) = ppm_mask(&image);
    assert_eq!((w, h), (64, 48));
}

#[test]
fn outputs_are_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    let mut images = Vec::new();
    for (k, threads) in ["1", "2", "1", "4"].iter().enumerate() {
        let report = dir.path().join(format!("r{k}.json"));
        let image = dir.path().join(format!("i{k}.ppm"));
        let code = amoeba(&[
            "components",
            "--fixture",
            "p1_sparse",
            "--depth",
            "6",
            "--seed",
            "3",
            "--threads",
            threads,
            "--report",
            report.to_str().unwrap(),
            "--out",
            image.to_str().unwrap(),
            "--res",
            "200x200",
        ]);
        assert_eq!(code, EXIT_OK);
        reports.push(std::fs::read(&report).unwrap());
        images.push(std::fs::read(&image).unwrap());
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
    assert!(images.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn p1_sparse_report_is_solid() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("p1s.json");
    assert_eq!(amoeba(&["components", "--fixture", "p1_sparse", "--report", report.to_str().unwrap()]), EXIT_OK);
    let v = read_json(&report);
    assert_eq!(v["flags"]["solid"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 8);
}

#[test]
fn p2_has_three_bounded_components() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("p2.json");
    assert_eq!(amoeba(&["components", "--fixture", "p2", "--depth", "9", "--report", report.to_str().unwrap()]), EXIT_OK);
    let v = read_json(&report);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 7);
    assert_eq!(comps.iter().filter(|c| c["bounded"] == true).count(), 3);
}

#[test]
fn empty_component_list_serializes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("inside.json");
    // a box deep inside the line's amoeba
    let args = ["components", "z1+z2+1", "--domain", "x:-0.1:0.1,y:-0.1:0.1", "--report", report.to_str().unwrap()];
    assert_eq!(amoeba(&args), EXIT_OK);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"components\": []"), "{text}");
}

#[test]
fn naive_grid_500_has_no_isolated_points() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = dir.path().join("n100.ppm");
    let fine = dir.path().join("n500.ppm");
    for (grid, path) in [("100", &coarse), ("500", &fine)] {
        let code = amoeba(&["draw", "--fixture", "p3", "--alg", "naive", "--grid", grid, "--out", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
    }
    let (c, f) = (isolated_fraction(&coarse), isolated_fraction(&fine));
    assert!(f < 0.005, "fine grid isolation {f}");
    assert!(c > f, "coarse {c}, fine {f}");
}

#[test]
fn draw_algorithms_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    for alg in ["naive", "grid", "greedy", "dichotomous"] {
        let path = dir.path().join(format!("{alg}.ppm"));
        let code = amoeba(&["draw", "z1+z2+1", "--alg", alg, "--res", "80x80", "--depth", "6", "--out", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{alg}");
        let (_, _, m) = ppm_mask(&path);
        assert!(m.iter().any(|b| *b), "{alg} painted nothing");
    }
    let svg = dir.path().join("line.svg");
    assert_eq!(amoeba(&["draw", "z1+z2+1", "--res", "40x40", "--out", svg.to_str().unwrap()]), EXIT_OK);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg "));
}

#[test]
fn maps_commands_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["coamoeba", "compactified", "contour"] {
        let img = dir.path().join(format!("{cmd}.ppm"));
        let rep = dir.path().join(format!("{cmd}.json"));
        let code = amoeba(&[
            cmd,
            "--fixture",
            "p1",
            "--grid",
            "30",
            "--res",
            "100x100",
            "--out",
            img.to_str().unwrap(),
            "--report",
            rep.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{cmd}");
        assert!(ppm_mask(&img).2.iter().any(|b| *b), "{cmd}");
        assert!(read_json(&rep).is_array() || read_json(&rep)["points"].is_array());
    }
}

#[test]
fn spine_command() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("spine.json");
    let svg = dir.path().join("spine.svg");
    let code = amoeba(&[
        "spine",
        "z1+z2+1",
        "--domain",
        "x:-4:4,y:-4:4",
        "--report",
        rep.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--res",
        "100x100",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = read_json(&rep);
    let vert = &v["vertices"][0];
    assert!(vert[0].as_f64().unwrap().abs() < 0.05 && vert[1].as_f64().unwrap().abs() < 0.05);
    assert_eq!(v["rays"].as_array().unwrap().len(), 3);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("polyline"));
}

#[test]
fn member_prints_classification() {
    let out = bin().args(["member", "-p", "z1+z2+1", "--point", "-3,-3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["status"], "complement");
    assert_eq!(v["order"], serde_json::json!([0, 0]));

    let out = bin().args(["member", "-p", "z1+z2+1", "--point", "0.1,0.2"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "amoeba");
}

#[test]
fn scan_of_sparse_fixture_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("scan.json");
    assert_eq!(amoeba(&["scan", "--fixture", "p1_sparse", "--report", rep.to_str().unwrap()]), EXIT_OK);
    let v = read_json(&rep);
    assert_eq!(v[0]["bounded_orders"], serde_json::json!([]));
    assert_eq!(amoeba(&["scan", "--fixture", "p1"]), EXIT_INVALID);
    let rep = dir.path().join("family.json");
    let code = amoeba(&["scan", "--count", "3", "--degree", "3", "--depth", "5", "--report", rep.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(read_json(&rep).as_array().unwrap().len(), 3);
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(amoeba(&["components", "--bogus"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "z1 +* z2"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "z1+z2+1", "--depth", "15"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "z1+z2+1", "--fixture", "p2"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "--fixture", "p9"]), EXIT_INVALID);
    assert_eq!(amoeba(&["draw", "z1+z2+1", "--res", "5000x10"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "z1+z2+1", "--domain", "x:1:0,y:0:1"]), EXIT_INVALID);
    assert_eq!(amoeba(&["components", "z1+z2+1", "--domain", "x:0:1"]), EXIT_INVALID);
    assert_eq!(amoeba(&["draw", "z1+z2+1", "--format", "json", "--out", "x.json"]), EXIT_INVALID);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("r.json");
    assert_eq!(amoeba(&["components", "z1+z2+1", "--depth", "4", "--report", bad.to_str().unwrap()]), EXIT_INVALID);
}

#[test]
fn budget_exceeded_exits_3() {
    let out = bin().args(["components", "z1+z2+1"]).env("AMOEBA_BUDGET", "50").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn summary_and_timing_lines() {
    let out = bin().args(["components", "z1+z2+1", "--depth", "5"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("components: 3"), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("timing: classification"));
}
