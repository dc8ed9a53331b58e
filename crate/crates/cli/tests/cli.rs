use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn out_dir(tag: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let n = N.fetch_add(1, Ordering::Relaxed);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{tag}-{}-{n}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn z2sim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2sim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], tag: &str) -> PathBuf {
    let dir = out_dir(tag);
    let o = z2sim(args, &dir);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    dir
}

struct Record {
    value: f64,
    observable: String,
    obs_value: f64,
    direction: String,
}

fn records(path: &Path) -> Vec<Record> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config sha256:"));
    assert_eq!(lines.next().unwrap(), "sweep,value,observable,obs_value,direction,T,M,engine");
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 8, "{l}");
            Record {
                value: f[1].parse().unwrap(),
                observable: f[2].to_string(),
                obs_value: f[3].parse().unwrap(),
                direction: f[4].to_string(),
            }
        })
        .collect()
}

#[test]
fn unknown_key_exits_with_config_code() {
    let dir = out_dir("badkey");
    let o = z2sim(&["exact-gs", "-s", "lattice.lz=3"], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lattice.lz"));

    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("bad.conf");
    std::fs::write(&conf, "[lattice]\nlx = 2\nwidth = 3\n").unwrap();
    let o = z2sim(&["exact-gs", "-c", conf.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn oversized_explicit_engine_exits_with_capacity_code() {
    let dir = out_dir("cap");
    let o = z2sim(&["adiabatic", "--engine", "full", "-s", "lattice.lx=3", "-s", "lattice.ly=3"], &dir);
    assert_eq!(o.status.code(), Some(3));
    let o = z2sim(&["wilson", "-s", "lattice.lx=3", "-s", "lattice.ly=3"], &dir);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn degenerate_gradient_is_rejected() {
    let dir = out_dir("degen");
    let o = z2sim(&["schedule-check", "-s", "photonics.q=1"], &dir);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curves_are_bitwise_reproducible() {
    let args = [
        "adiabatic",
        "-s",
        "sweep.ratios=0.5, 3",
        "-s",
        "schedule.steps=8",
        "-s",
        "observables.energy=true",
    ];
    let a = ok(&args, "det");
    let mut one_thread = args.to_vec();
    one_thread.extend(["--threads", "1"]);
    let b = ok(&one_thread, "det");
    let fa = std::fs::read(a.join("adiabatic.csv")).unwrap();
    let fb = std::fs::read(b.join("adiabatic.csv")).unwrap();
    assert_eq!(fa, fb);
    let log = std::fs::read_to_string(a.join("run.log")).unwrap();
    assert!(log.contains("engine: full (auto-selected)"));
}

#[test]
fn stator_readout_on_vacua() {
    for (state, want) in [("magnetic", 1.0), ("electric", 0.0)] {
        let dir = ok(&["wilson", "-s", &format!("wilson.state={state}"), "-s", "observables.loops=all"], "wil");
        let rs = records(&dir.join("wilson.csv"));
        assert_eq!(rs.len(), 9 * 3);
        for r in &rs {
            let expect = if r.observable.ends_with(".difference") { 0.0 } else { want };
            assert!((r.obs_value - expect).abs() < 1e-12, "{} {}", r.observable, r.obs_value);
        }
    }
}

#[test]
fn zero_time_ramp_keeps_initial_observables() {
    let dir = ok(
        &["adiabatic", "-s", "schedule.total_time=0", "-s", "schedule.steps=1", "-s", "sweep.ratios=2"],
        "t0",
    );
    let rs = records(&dir.join("adiabatic.csv"));
    let get = |d: &str| rs.iter().find(|r| r.direction == d).unwrap().obs_value;
    assert!(get("electric").abs() < 1e-12);
    assert!((get("magnetic") - 1.0).abs() < 1e-12);
}

#[test]
fn exact_ground_state_limits() {
    let dir = ok(
        &["exact-gs", "-s", "lattice.lx=4", "-s", "lattice.ly=4", "-s", "sweep.ratios=0, 1000"],
        "gs",
    );
    let rs = records(&dir.join("exact-gs.csv"));
    assert_eq!(rs.len(), 2);
    assert!(rs[0].obs_value.abs() < 1e-12);
    assert!(rs[1].obs_value >= 0.99);
}

#[test]
fn schedule_check_verdicts() {
    let dir = ok(&["schedule-check", "-s", "lattice.lx=4", "-s", "lattice.ly=4"], "sc");
    let report = std::fs::read_to_string(dir.join("schedule-check.txt")).unwrap();
    assert!(report.contains("verdict: NN-only"), "{report}");
    let rs = records(&dir.join("schedule-check.csv"));
    let get = |n: &str| rs.iter().find(|r| r.observable == n).unwrap().obs_value;
    assert_eq!(get("resonant_pairs"), 64.0);
    assert_eq!(get("spurious_pairs"), 0.0);

    let dir = ok(&["schedule-check", "-s", "lattice.lx=4", "-s", "lattice.ly=4", "-s", "photonics.q=2"], "sc");
    let report = std::fs::read_to_string(dir.join("schedule-check.txt")).unwrap();
    assert!(report.contains("collisions"), "{report}");
    assert!(report.contains("largest collision-free square lattice"));
    let coll = std::fs::read_to_string(dir.join("collisions.csv")).unwrap();
    assert!(coll.lines().count() > 1);
}

#[test]
fn budget_exponent_follows_gate_exponent() {
    for (gamma, want) in [("1", 2.0 / 3.0), ("2", 4.0 / 3.0)] {
        // C up to 1e3 keeps the optimal step count below the max_steps cap
        let dir = ok(
            &[
                "budget",
                "-s",
                &format!("budget.gate_exponent={gamma}"),
                "-s",
                "budget.cooperativities=logspace(1, 3, 9)",
                "--svg",
            ],
            "bud",
        );
        let rs = records(&dir.join("budget.csv"));
        let fit = rs.iter().find(|r| r.observable == "t_max_exponent").unwrap();
        assert!((fit.obs_value - want).abs() < 0.01, "{}", fit.obs_value);
        assert!((fit.value - want).abs() < 1e-12);
        assert!(dir.join("budget.svg").exists());
    }
}

#[test]
fn trotter_slopes() {
    let dir = ok(&["trotter-scan", "-s", "trotter.steps=20, 40, 80, 160"], "trot");
    let rs = records(&dir.join("trotter-scan.csv"));
    let slope = |o: &str| rs.iter().find(|r| r.observable == o).unwrap().obs_value;
    assert!((slope("slope.order1") + 1.0).abs() < 0.1);
    assert!((slope("slope.order2") + 2.0).abs() < 0.1);
}

#[test]
fn magnetic_preparation_probability() {
    let dir = ok(&["prep-magnetic"], "prep");
    let rs = records(&dir.join("prep-magnetic.csv"));
    let get = |n: &str| rs.iter().find(|r| r.observable == n).unwrap();
    assert_eq!(get("success_probability").value, 4.0);
    assert!((get("success_probability").obs_value - 1.0 / 16.0).abs() < 1e-12);
    assert!((get("fidelity").obs_value - 1.0).abs() < 1e-12);
}

#[test]
fn scenario_files_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for f in std::fs::read_dir(dir).unwrap() {
        let path = f.unwrap().path();
        let raw = z2sim_cli::config::RawConfig::load(&path).unwrap();
        z2sim_cli::config::RunConfig::from_raw(&raw).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
