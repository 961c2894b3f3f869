use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sectorplan::{save_scenario, Disc, Point2, Scenario, ScenarioKind};
use sectorplan_cli::records::mask_last_column;
use sectorplan_cli::ResultFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sectorplan"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("SECTORPLAN_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn gen(dir: &Path, kind: &str, seed: &str) -> PathBuf {
    let out = dir.join(format!("{kind}-{seed}.json"));
    let o = run(&["gen-scenario", "--kind", kind, "--seed", seed, "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn enclosed_destination(dir: &Path) -> PathBuf {
    let dst = Point2::new(900.0, 900.0);
    let ring = (0..24)
        .map(|i| {
            let a = i as f64 * std::f64::consts::TAU / 24.0;
            Disc::new(dst.offset_polar(a, 60.0), 15.0).unwrap()
        })
        .collect();
    let sc = Scenario::new(
        1000.0,
        1000.0,
        ring,
        Point2::new(50.0, 50.0),
        dst,
        ScenarioKind::Custom,
        0,
    )
    .unwrap();
    let path = dir.join("enclosed.json");
    save_scenario(&sc, &path).unwrap();
    path
}

#[test]
fn gen_scenario_is_deterministic_and_validates_kind() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "S1", "42");
    let first = read(&a);
    let o = run(&["gen-scenario", "--kind", "S1", "--seed", "42", "--out", s(&a)]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(&a), first);
    assert!(String::from_utf8_lossy(&o.stdout).contains("obstacles=50"));
    let sc = sectorplan::load_scenario(&a).unwrap();
    assert_eq!(sc.obstacles().len(), 50);

    let bad = run(&["gen-scenario", "--kind", "S9", "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("S9"));
    assert_eq!(
        code(&run(&["gen-scenario", "--kind", "S4", "--seed", "-3", "--out", "x"])),
        2
    );

    let custom = dir.path().join("c.json");
    let o = run(&[
        "gen-scenario",
        "--kind",
        "S4",
        "--obstacles",
        "100",
        "--out",
        s(&custom),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(sectorplan::load_scenario(&custom).unwrap().obstacles().len(), 100);
}

#[test]
fn plan_render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let scn = gen(dir.path(), "S4", "3");
    let res = dir.path().join("r.json");
    let svg = dir.path().join("r.svg");
    let args = [
        "plan",
        "--scenario",
        s(&scn),
        "--planner",
        "ad-rrt-star",
        "--seed",
        "7",
        "--iterations",
        "1500",
        "--out",
        s(&res),
        "--svg",
        s(&svg),
    ];
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let file = ResultFile::load(&res).unwrap();
    assert!(file.success);
    assert_eq!(file.rng, sectorplan::RNG_ALGORITHM);
    let (r1, s1) = (read(&res), read(&svg));
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(read(&res), r1);
    assert_eq!(read(&svg), s1);

    // Parse the drawing back and count its parts.
    let doc = roxmltree::Document::parse(&s1).unwrap();
    let group = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("obstacles"))
        .unwrap();
    assert_eq!(group.children().filter(|n| n.has_tag_name("circle")).count(), 70);
    let poly = doc.descendants().find(|n| n.attribute("id") == Some("path")).unwrap();
    let points = poly.attribute("points").unwrap().split_whitespace().count();
    assert_eq!(points, file.path.as_ref().unwrap().len());
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("sector")));

    let rendered = dir.path().join("again.svg");
    let o = run(&[
        "render",
        "--result",
        s(&res),
        "--scenario",
        s(&scn),
        "--out",
        s(&rendered),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&rendered), s1);

    let other = gen(dir.path(), "S4", "4");
    let o = run(&[
        "render",
        "--result",
        s(&res),
        "--scenario",
        s(&other),
        "--out",
        s(&rendered),
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("digest"));
}

#[test]
fn plan_both_pairs_on_one_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scn = gen(dir.path(), "S2", "5");
    let out = dir.path().join("pair.json");
    let o = run(&[
        "plan",
        "--scenario",
        s(&scn),
        "--planner",
        "both",
        "--seed",
        "7",
        "--iterations",
        "800",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let base = ResultFile::load(&dir.path().join("pair-rrt_star.json")).unwrap();
    let ad = ResultFile::load(&dir.path().join("pair-ad_rrt_star.json")).unwrap();
    assert_eq!(base.scenario_digest, ad.scenario_digest);
    assert_eq!(base.seed, ad.seed);
    assert_ne!(base.config_digest, ad.config_digest);
}

#[test]
fn unreachable_destination_exits_3_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let scn = enclosed_destination(dir.path());
    let res = dir.path().join("r.json");
    let o = run(&["plan", "--scenario", s(&scn), "--iterations", "500", "--out", s(&res)]);
    assert_eq!(code(&o), 3);
    let file = ResultFile::load(&res).unwrap();
    assert!(!file.success);
    assert_eq!(file.total_path_cost, None);
    assert!(file.node_count >= 1);
}

#[test]
fn bad_inputs_exit_1_or_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["plan", "--scenario", s(&missing)])), 1);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let o = run(&["plan", "--scenario", s(&garbage)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(code(&run(&["plan", "--scenario", s(&garbage), "--planner", "prm"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn bench_rows_are_paired_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let summary = dir.path().join("s.csv");
    let args = [
        "bench",
        "--cells",
        "S4,S1:20",
        "--trials",
        "3",
        "--iterations",
        "400",
        "--out",
        s(&csv),
        "--summary",
        s(&summary),
    ];
    let o = bin().args(args).env("SECTORPLAN_THREADS", "2").output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = read(&csv);
    let lines: Vec<_> = first.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 3 * 2);
    assert_eq!(lines[0], sectorplan_cli::CSV_HEADER);
    assert!(lines[1].starts_with("rrt_star,S4,70,0,"));
    assert!(lines[2].starts_with("ad_rrt_star,S4,70,0,"));
    assert!(lines[12].starts_with("ad_rrt_star,S1,20,2,"));
    assert!(!first.contains('\r'));
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.lines().next().unwrap().trim_end().ends_with("time_s"));

    let first_summary = read(&summary);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(mask_last_column(&read(&csv)), mask_last_column(&first));
    assert_eq!(mask_last_column(&read(&summary)), mask_last_column(&first_summary));
}
