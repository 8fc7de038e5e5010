use ofdma_varalloc::cli::{run_cli, BASE_HEADER};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(std::iter::once("ofdma-sim").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const REFERENCE: &[&str] = &[
    "run", "--users", "8", "--subcarriers", "128", "--group-size", "4", "--epsilon", "0.5", "--gap", "1",
    "--l-param", "2", "--slots", "40", "--snr-db", "10", "--alpha", "2,1,3,1,2,2,4,4", "--seed", "7",
    "--algo", "variance",
];

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn reference_run_emits_one_row_with_manifest() {
    let (code, out, _) = run(REFERENCE);
    assert_eq!(code, 0);
    assert!(out.starts_with("# tool=ofdma-sim"));
    assert!(out.contains("seed=7"));
    let lines = data_lines(&out);
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with(BASE_HEADER));
    assert!(lines[1].starts_with("variance,10,8,128,4,0.5,1,2,40,7,"));
}

#[test]
fn identical_runs_are_byte_identical() {
    assert_eq!(run(REFERENCE).1, run(REFERENCE).1);
}

#[test]
fn indivisible_group_size_is_a_usage_error() {
    let (code, out, err) = run(&["run", "--group-size", "5", "--subcarriers", "128"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("--group-size"));
}

#[test]
fn gap_and_ber_together_are_rejected() {
    let (code, _, err) = run(&["run", "--gap", "1", "--ber", "0.001"]);
    assert_eq!(code, 2);
    assert!(err.contains("--gap") && err.contains("--ber"));
}

#[test]
fn bad_flag_values_name_the_flag() {
    for (args, flag) in [
        (&["run", "--algo", "nope"][..], "--algo"),
        (&["run", "--alpha", "1,2"][..], "--alpha"),
        (&["run", "--l-param", "9"][..], "--l-param"),
        (&["run", "--ber", "0.7"][..], "--ber"),
        (&["run", "--fairness-memory", "forever"][..], "--fairness-memory"),
        (&["sweep", "--axis", "xyz", "--values", "1"][..], "--axis"),
        (&["sweep", "--axis", "ng", "--values", "1", "--metric", "x"][..], "--metric"),
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(run(&["run", "--bogus"]).0, 2);
}

#[test]
fn empty_sweep_exits_2() {
    let (code, _, err) = run(&["sweep", "--axis", "ng", "--values", ""]);
    assert_eq!(code, 2);
    assert!(err.contains("--values"));
}

#[test]
fn sweep_emits_one_row_per_point_and_algorithm() {
    let (code, out, _) = run(&[
        "sweep", "--axis", "ng", "--values", "1,2,4,8", "--slots", "10", "--algo", "variance,best_gain",
    ]);
    assert_eq!(code, 0);
    let lines = data_lines(&out);
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[0].starts_with("sweep_axis,sweep_value,"));
    assert!(lines[1].starts_with("ng,1,variance,"));
    assert!(lines[2].starts_with("ng,1,best_gain,"));
    assert!(lines[8].starts_with("ng,8,best_gain,"));
    assert!(out.contains("# sweep axis=ng values=1,2,4,8"));
}

#[test]
fn users_sweep_with_jain_metric() {
    let (code, out, _) = run(&["sweep", "--axis", "users", "--values", "8,12,16,20,24", "--metric", "jain", "--slots", "10"]);
    assert_eq!(code, 0);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "sweep_axis,sweep_value,algo,snr_db,users,jain_index");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("users,24,variance,10,24,"));
}

#[test]
fn snr_sweep_accepts_negative_values() {
    let (code, out, _) = run(&["sweep", "--axis", "snr", "--values", "-5,0,5", "--slots", "5"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(data_lines(&out).len(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("ofdma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sim.conf");
    std::fs::write(&path, "# small run\nslots = 5\nusers = 4\nl_param = 1\nseed = 3\n").unwrap();
    let path = path.to_str().unwrap();
    let (code, out, _) = run(&["run", "--config", path, "--seed", "9"]);
    assert_eq!(code, 0);
    let row = data_lines(&out)[1];
    assert!(row.starts_with("variance,10,4,128,4,0.5,1,1,5,9,"), "{row}");
    let out_file = dir.join("out.csv");
    let (code, stdout, err) = run(&["run", "--config", path, "--out", out_file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(err.contains("wrote"));
    assert!(std::fs::read_to_string(&out_file).unwrap().contains("variance,10,4,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn example_passes_and_corrupt_example_fails() {
    let (code, out, _) = run(&["example"]);
    assert_eq!(code, 0);
    assert!(out.contains("V1=1366.67 V2=225.00 R_var=290 R_best=220"));
    let (code, out, _) = run(&["example", "--corrupt"]);
    assert_eq!(code, 1);
    assert!(out.contains("MISMATCH"));
}

#[test]
fn validate_passes_on_a_small_budget() {
    let (code, out, _) = run(&["validate", "--instances", "50", "--cases", "50"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("summary status=pass"));
    assert!(out.contains("metric=oracle_mean_ratio"));
}
