//! End-to-end tests of the `srr` binary: exit codes, output formats and
//! round trips through the printed JSON.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use srr::cli::report::RegionJson;
use srr::cli::{matfile, sysfile};
use srr::ratpoly::{contains, parse_rational, Rational};
use srr::recovery::RecoverySystem;
use srr::region::exact_region;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.mat"))
}

fn srr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = srr(args);
    (
        o.status.code().expect("exit code"),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn rats(v: &Value) -> Vec<Rational> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| parse_rational(s.as_str().unwrap()).unwrap())
        .collect()
}

fn r(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

#[test]
fn every_fixture_loads() {
    for entry in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")).unwrap()
    {
        let p = entry.unwrap().path();
        let (code, out, err) = run(&["info", path_str(&p)]);
        assert_eq!(code, 0, "{}: {err}", p.display());
        let info: Value = serde_json::from_str(&out).unwrap();
        let k = info["k"].as_u64().unwrap() as usize;
        assert_eq!(info["profiles"].as_array().unwrap().len(), k);
    }
}

#[test]
fn info_reports_distances_and_profiles() {
    let (code, out, _) = run(&["info", path_str(&fixture("mds-4-2-gf3"))]);
    assert_eq!(code, 0);
    let info: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(info["q"], 3);
    assert_eq!(info["d"], 3);
    assert_eq!(info["d_perp"], 3);
    assert_eq!(info["mds"], true);
    assert_eq!(info["systematic"], true);
    let objects: Vec<u64> = info["profiles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["object"].as_u64().unwrap())
        .collect();
    assert_eq!(objects, [1, 2]);
}

#[test]
fn region_csv_lists_vertices() {
    let (code, out, _) = run(&["region", path_str(&fixture("mds-4-2-gf3")), "--csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["0,0", "5/2,0", "2,1", "1,2", "0,5/2"]);
}

#[test]
fn region_csv_beyond_three_dimensions_is_unsupported() {
    let (code, out, err) = run(&["region", path_str(&fixture("reed-muller-1-3")), "--csv"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn region_json_round_trips() {
    for name in ["mds-4-2-gf3", "gf7-3x5", "reed-muller-1-3"] {
        let path = fixture(name);
        let (code, out, _) = run(&["region", path_str(&path)]);
        assert_eq!(code, 0);
        let parsed: RegionJson = serde_json::from_str(&out).unwrap();
        let printed = parsed.to_polytope().unwrap();

        let g = matfile::load(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let direct = exact_region(&RecoverySystem::minimal(&g).unwrap()).unwrap();
        assert_eq!(printed.dim(), direct.dim());
        assert!(contains(&printed, &direct).unwrap().contained, "{name}");
        assert!(contains(&direct, &printed).unwrap().contained, "{name}");
        assert_eq!(parsed.vertices.is_some(), g.k() <= 3);
    }
}

#[test]
fn section_drops_fixed_axes() {
    let (code, out, _) = run(&[
        "region",
        path_str(&fixture("reed-muller-1-3")),
        "--section",
        "l1=0,l2=0",
    ]);
    assert_eq!(code, 0);
    let parsed: RegionJson = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed.axes, ["l3", "l4"]);
    assert_eq!(parsed.dim, 2);
    assert_eq!(parsed.vertices.unwrap().len(), 4);
}

#[test]
fn check_prints_a_feasible_allocation() {
    let (code, out, _) = run(&["check", path_str(&fixture("mds-4-2-gf3")), "--rates", "2,1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("FEASIBLE mu=1"));
    let loads: Vec<Rational> = out
        .lines()
        .skip_while(|l| *l != "server\tload")
        .skip(1)
        .map(|l| r(l.split('\t').nth(1).unwrap()))
        .collect();
    assert_eq!(loads.len(), 4);
    assert!(loads.iter().all(|l| *l <= r("1")));
}

#[test]
fn check_infeasible_exits_one() {
    let (code, out, _) = run(&["check", path_str(&fixture("mds-4-2-gf3")), "--rates", "3,0"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "INFEASIBLE");
}

#[test]
fn check_scales_with_capacity() {
    let f = fixture("mds-4-2-gf3");
    let (code, _, _) = run(&["check", path_str(&f), "--rates", "8,0", "--mu", "3"]);
    assert_eq!(code, 1);
    let (code, out, _) = run(&["check", path_str(&f), "--rates", "15/2,0", "--mu", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("FEASIBLE mu=3"));
    let (code, _, err) = run(&["check", path_str(&f), "--rates", "1,0", "--mu", "1/2"]);
    assert_eq!(code, 0);
    assert!(err.contains("below 1"));
}

#[test]
fn check_rejects_wrong_rate_count_and_negative_rates() {
    let f = fixture("mds-4-2-gf3");
    let (code, _, err) = run(&["check", path_str(&f), "--rates", "1,1,1"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["check", path_str(&f), "--rates", "-1,0"]);
    assert_ne!(code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(
        run(&[
            "recovery",
            path_str(&fixture("mds-4-2-gf3")),
            "--all",
            "--minimal"
        ])
        .0,
        2
    );
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn zero_column_is_an_invariant_violation() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "z.mat", "q 2\nk 2\nn 4\nrow 1 0 0 1\nrow 0 1 0 1\n");
    let (code, _, err) = run(&["info", path_str(&p)]);
    assert_eq!(code, 4);
    assert!(err.contains("all-zero column at index"), "{err}");
}

#[test]
fn malformed_matrix_file_exits_four() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.mat", "q 3\nk 2\nn 3\nrow 1 0 x\nrow 0 1 1\n");
    let (code, _, err) = run(&["info", path_str(&p)]);
    assert_eq!(code, 4, "{err}");
}

#[test]
fn enumerating_every_recovery_set_of_a_long_code_hits_the_resource_limit() {
    let (k, n) = (10usize, 21usize);
    let rows: Vec<String> = (0..k)
        .map(|i| {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let bit = if j < k {
                        j == i
                    } else {
                        ((j - k + 1) >> (i % 4)) & 1 == 1 || i == j - k
                    };
                    (bit as u8).to_string()
                })
                .collect();
            format!("row {}", row.join(" "))
        })
        .collect();
    let text = format!("q 2\nk {k}\nn {n}\n{}\n", rows.join("\n"));
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "long.mat", &text);
    let (code, _, err) = run(&["recovery", path_str(&p), "--all"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("--minimal"), "{err}");
    let (code, out, err) = run(&["recovery", path_str(&p)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), k);
}

#[test]
fn recovery_json_lists_one_based_sets() {
    let (code, out, _) = run(&["recovery", path_str(&fixture("mds-4-2-gf3")), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["system"], "minimal");
    let fams = v["families"].as_array().unwrap();
    assert_eq!(fams.len(), 2);
    assert_eq!(fams[0]["object"], 1);
    let sets: Vec<Vec<u64>> = serde_json::from_value(fams[0]["sets"].clone()).unwrap();
    assert!(sets.contains(&vec![1]));
    assert!(sets.iter().all(|s| s.iter().all(|&j| (1..=4).contains(&j))));
}

#[test]
fn custom_system_file_is_used() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "s.sys", "# only the systematic copies\n1 1\n2 2\n");
    let f = fixture("mds-4-2-gf3");
    let (code, out, _) = run(&["region", path_str(&f), "--system", path_str(&sys), "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().collect::<Vec<_>>(),
        ["0,0", "1,0", "1,1", "0,1"]
    );

    let g = matfile::load(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let bad = sysfile::parse("1 3\n2 2\n", &g);
    assert!(bad.is_err(), "server 3 alone does not recover object 1");
    let p = write(&dir, "bad.sys", "1 3\n2 2\n");
    let (code, _, err) = run(&["region", path_str(&f), "--system", path_str(&p)]);
    assert_eq!(code, 2);
    assert!(err.contains("not a recovery set"), "{err}");
}

#[test]
fn bounds_compare_reports_containment_and_sharpness() {
    let (code, out, _) = run(&["bounds", path_str(&fixture("mds-4-2-gf3")), "--compare"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let bounds = v["bounds"].as_array().unwrap();
    assert_eq!(bounds.len(), 3);
    for b in bounds {
        assert_eq!(b["contains_exact"], true, "{}", b["kind"]);
    }
    let ddb2 = bounds.iter().find(|b| b["kind"] == "ddb2").unwrap();
    assert_eq!(ddb2["sharp"], true);

    let (code, out, _) = run(&["bounds", path_str(&fixture("gf7-3x5")), "--compare"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let ddb1 = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["kind"] == "ddb1")
        .unwrap();
    assert_eq!(ddb1["sharp"], false);
    let w = rats(&ddb1["witness"]);
    assert_eq!(w.len(), 3);
}

#[test]
fn first_dual_bound_needs_a_systematic_matrix() {
    let f = fixture("reed-muller-1-3");
    let (code, _, err) = run(&["bounds", path_str(&f), "--bound", "ddb1"]);
    assert_eq!(code, 4);
    assert!(err.contains("systematic"), "{err}");
    let (code, out, _) = run(&["bounds", path_str(&f)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let ddb1 = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["kind"] == "ddb1")
        .unwrap();
    assert!(ddb1["skipped"].is_string());
}

#[test]
fn bounds_separable_form_matches_formula() {
    let (code, out, _) = run(&[
        "bounds",
        path_str(&fixture("mds-4-2-gf3")),
        "--bound",
        "tcb",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let tcb = &v["bounds"][0];
    assert_eq!(rats(&tcb["lambda"]), [r("1"), r("1")]);
    assert_eq!(rats(&tcb["ell"]), [r("0"), r("0")]);
    assert_eq!(tcb["rhs"], "4");
}

#[test]
fn plot_writes_svg() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("p.svg");
    let (code, out, _) = run(&[
        "plot",
        path_str(&fixture("mds-4-2-gf3")),
        "-o",
        path_str(&out_path),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let svg = std::fs::read_to_string(&out_path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("l1") && svg.contains("l2"));
    assert!(svg.contains("<polygon") || svg.contains("<path"));
    assert!(!svg.contains("empty region"));
}

#[test]
fn plot_of_an_empty_section_says_so() {
    let (code, out, err) = run(&[
        "plot",
        path_str(&fixture("gf7-3x5")),
        "--fix",
        "l3=100",
        "--layers",
        "exact",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("empty region"));
}

#[test]
fn plot_needs_two_free_axes() {
    let f = fixture("gf7-3x5");
    let (code, _, err) = run(&["plot", path_str(&f)]);
    assert_eq!(code, 2);
    assert!(err.contains("--fix"), "{err}");
    let (code, _, _) = run(&["plot", path_str(&f), "--fix", "l1=0,l2=0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["plot", path_str(&f), "--fix", "l4=0"]);
    assert_eq!(code, 2);
}
