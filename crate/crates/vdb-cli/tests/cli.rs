use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vdb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdb"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn vdb")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&vdb(&["--help"], dir.path()), 0);
    assert_code(&vdb(&["--version"], dir.path()), 0);
    assert_code(&vdb(&["distortion", "--help"], dir.path()), 0);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&vdb(&["no-such-command"], dir.path()), 1);
    assert_code(&vdb(&["distortion", "--width"], dir.path()), 1);
}

#[test]
fn stochastic_flags_require_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(&["distortion", "--monte-carlo", "100"], dir.path());
    assert_code(&out, 1);
    assert!(stderr(&out).contains("--seed"), "{}", stderr(&out));

    let out = vdb(&["optimize", "--constraint", "generated"], dir.path());
    assert_code(&out, 1);
    assert!(stderr(&out).contains("--seed"), "{}", stderr(&out));
}

#[test]
fn inconsistent_bench_measurements_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Logic-1 level rising with pull-up resistance breaks the divider model.
    let bench = serde_json::json!({
        "v_supply": 2.5, "v_th": 1.25, "r_on": 15.0, "sigma_n": 0.02,
        "t_clk": 5e-6, "full_scale_ohms": 100000.0, "taps": 256,
        "measurements": {
            "v0_min": 0.0589, "v1_min": 2.0, "v0_max": 0.0252, "v1_max": 2.2,
            "rise_min": 454e-9, "rise_max": 1092e-9,
            "fall_min": 18e-9, "fall_max": 17e-9,
            "r_dcp_min": 3920.0, "r_dcp_max": 62750.0
        }
    });
    let path = dir.path().join("bench.json");
    fs::write(&path, bench.to_string()).unwrap();
    let out = vdb(
        &[
            "power-sweep",
            "--params",
            &format!("bench:{}", path.display()),
            "--taps",
            "0-4",
        ],
        dir.path(),
    );
    assert_code(&out, 2);
    assert!(
        stderr(&out).contains("inconsistent measurements"),
        "{}",
        stderr(&out)
    );
}

fn read_series(csv: &str, name: &str) -> Vec<(u64, f64)> {
    let mut rows = Vec::new();
    for line in csv.lines().skip(1) {
        let mut fields = line.split(',');
        let m: u64 = fields.next().unwrap().parse().unwrap();
        let v: f64 = fields.next().unwrap().parse().unwrap();
        if fields.next() == Some(name) {
            rows.push((m, v));
        }
    }
    rows
}

#[test]
fn noiseless_channel_writes_all_zero_tail() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&vdb(&["distortion", "--width", "6"], dir.path()), 0);
    let csv = fs::read_to_string(dir.path().join("out/distortion.csv")).unwrap();
    assert!(csv.starts_with("m,value,series\n"));
    let tail = read_series(&csv, "tail");
    assert_eq!(tail.len(), 64);
    assert!(tail.iter().all(|&(_, v)| v == 0.0));
    let pmf = read_series(&csv, "pmf");
    assert_eq!(pmf[0], (0, 1.0));
}

#[test]
fn ingest_of_each_value_once_gives_uniform_pmf() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.csv");
    let body: String = (0..16).map(|v| format!("{v}\n")).collect();
    fs::write(&path, body).unwrap();
    let out = vdb(
        &["ingest", path.to_str().unwrap(), "--width", "4"],
        dir.path(),
    );
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("out/input_pmf.csv")).unwrap();
    let pmf = read_series(&csv, "pmf");
    assert_eq!(pmf.len(), 16);
    assert!(pmf.iter().all(|&(_, v)| v == 1.0 / 16.0));
}

#[test]
fn ingest_reports_bad_records_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");

    fs::write(&path, "").unwrap();
    let out = vdb(&["ingest", path.to_str().unwrap()], dir.path());
    assert_code(&out, 1);
    assert!(stderr(&out).contains("no records"), "{}", stderr(&out));

    fs::write(&path, "5\nnot-a-number,7\n9\n").unwrap();
    let out = vdb(&["ingest", path.to_str().unwrap()], dir.path());
    assert_code(&out, 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    // Out-of-range records are dropped with a report, not fatal.
    fs::write(&path, "5\n300\n9\n").unwrap();
    let out = vdb(
        &["ingest", path.to_str().unwrap(), "--width", "8"],
        dir.path(),
    );
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("kept 2 of 3"), "{stdout}");
}

#[test]
fn offset_flag_recenters_signed_samples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("signed.csv");
    fs::write(&path, "-8\n0\n7\n").unwrap();
    let out = vdb(
        &[
            "ingest",
            path.to_str().unwrap(),
            "--width",
            "4",
            "--offset",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("out/input_pmf.csv")).unwrap();
    let pmf = read_series(&csv, "pmf");
    let third = 1.0 / 3.0;
    assert_eq!(pmf[0], (0, third));
    assert_eq!(pmf[8], (8, third));
    assert_eq!(pmf[15], (15, third));
}

#[test]
fn scenario_file_reproduces_flag_run() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &vdb(
            &[
                "distortion",
                "--width",
                "5",
                "--channel",
                "pair:0.1,0.02",
                "--out",
                "flags",
            ],
            dir.path(),
        ),
        0,
    );
    // The JSON mirror embeds the resolved scenario; feed it back in.
    let mirror: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flags/distortion.json")).unwrap())
            .unwrap();
    let scenario_path = dir.path().join("scenario.json");
    fs::write(&scenario_path, mirror["scenario"].to_string()).unwrap();
    assert_code(
        &vdb(
            &[
                "distortion",
                "--scenario",
                scenario_path.to_str().unwrap(),
                "--out",
                "replay",
            ],
            dir.path(),
        ),
        0,
    );
    let a = fs::read(dir.path().join("flags/distortion.csv")).unwrap();
    let b = fs::read(dir.path().join("replay/distortion.csv")).unwrap();
    assert_eq!(a, b);
    // The emitted mirror itself is also a valid scenario file.
    assert_code(
        &vdb(
            &[
                "distortion",
                "--scenario",
                dir.path().join("flags/distortion.json").to_str().unwrap(),
                "--out",
                "replay2",
            ],
            dir.path(),
        ),
        0,
    );
    let c = fs::read(dir.path().join("replay2/distortion.csv")).unwrap();
    assert_eq!(a, c);
}

#[test]
fn seeded_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        assert_code(
            &vdb(
                &[
                    "distortion",
                    "--width",
                    "4",
                    "--channel",
                    "symmetric:0.03",
                    "--monte-carlo",
                    "20000",
                    "--seed",
                    "42",
                    "--out",
                    out,
                ],
                dir.path(),
            ),
            0,
        );
    };
    run("a");
    run("b");
    for name in ["distortion.csv", "distortion.json"] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical seeded runs");
    }
}

#[test]
fn i2c_sweep_includes_worst_case_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(&["i2c-sweep", "--taps", "8-9"], dir.path());
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("out/i2c_tails.csv")).unwrap();
    let worst = read_series(&csv, "worst-case");
    assert_eq!(worst.len(), 256);
    for &(m, v) in &worst {
        assert_eq!(v, (255 - m) as f64 / 256.0);
    }
    assert_eq!(read_series(&csv, "tap-8").len(), 256);
    assert_eq!(read_series(&csv, "tap-9").len(), 256);

    let out = vdb(
        &["i2c-sweep", "--taps", "8", "--no-worst-line", "--out", "bare"],
        dir.path(),
    );
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("bare/i2c_tails.csv")).unwrap();
    assert!(read_series(&csv, "worst-case").is_empty());
}

#[test]
fn fsm_trace_frames_each_word_with_the_nominal_register() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(
        &[
            "fsm-trace",
            "--word-length",
            "4",
            "--registers",
            "7,1,2,3,4",
            "--words",
            "2",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let text = fs::read_to_string(dir.path().join("out/fsm_trace.txt")).unwrap();
    let selections: Vec<u16> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(selections, [7, 1, 2, 3, 4, 7, 1, 2, 3, 4, 7]);
}

#[test]
fn fsm_trace_round_trips_through_a_stimulus_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(
        &["fsm-trace", "--word-length", "2", "--registers", "9,5,6", "--words", "3"],
        dir.path(),
    );
    assert_code(&out, 0);
    let trace = dir.path().join("out/fsm_trace.txt");
    // A trace is itself a stimulus: the selection column is ignored on input.
    let out = vdb(
        &[
            "fsm-trace",
            "--word-length",
            "2",
            "--registers",
            "9,5,6",
            "--stimulus",
            trace.to_str().unwrap(),
            "--out",
            "replay",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let first = fs::read_to_string(&trace).unwrap();
    let second = fs::read_to_string(dir.path().join("replay/fsm_trace.txt")).unwrap();
    let body = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(body(&first), body(&second));
}

#[test]
fn optimize_emits_result_and_tail_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(
        &[
            "optimize",
            "--width",
            "4",
            "--constraint",
            "generated",
            "--seed",
            "11",
            "--search",
            "bit-independent",
            "--resolution-log2",
            "3",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/search_result.json")).unwrap())
            .unwrap();
    assert_eq!(doc["feasible"], serde_json::Value::Bool(true));
    assert_eq!(doc["evaluations"], serde_json::json!(25));
    assert_eq!(doc["scenario"]["constraint"]["seed"], serde_json::json!(11));
    assert_eq!(doc["best"]["down"].as_array().unwrap().len(), 4);
    assert_eq!(doc["induced_tail"].as_array().unwrap().len(), 16);

    let csv = fs::read_to_string(dir.path().join("out/search_tails.csv")).unwrap();
    let bound = read_series(&csv, "constraint");
    let induced = read_series(&csv, "induced_tail");
    assert_eq!(bound.len(), 16);
    assert_eq!(induced.len(), 16);
    for (b, i) in bound.iter().zip(&induced) {
        assert!(i.1 <= b.1 + 1e-12);
    }
}

#[test]
fn power_sweep_emits_one_point_per_tap() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdb(&["power-sweep", "--taps", "0-15,32"], dir.path());
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("out/power_curve.csv")).unwrap();
    let power = read_series(&csv, "power");
    assert_eq!(power.len(), 17);
    assert_eq!(power.last().unwrap().0, 32);
    assert!(power.iter().all(|&(_, w)| w > 0.0));
}
