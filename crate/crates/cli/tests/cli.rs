use std::fs;
use std::path::Path;
use std::process::Command;

use cachenet::{exit, parse_config, run, Experiment};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cachenet"))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn optimize_reports_the_closed_form_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config("").unwrap();
    config.out_dir = dir.path().to_path_buf();
    let report = run(&config, Experiment::Optimize, None).unwrap();
    assert_eq!(report.exit_code(), exit::OK);
    let text = fs::read_to_string(dir.path().join("optimize.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 1 + 2 * 2 * 3);
    assert!(rows.contains(&"P1,static,5,0.01,50000,0.00108923162914,0.01,50000,0.00108923162914,budget|lambda_max"));
    assert!(rows.iter().any(|r| r.starts_with("P2,dynamic,2.5,0.0001,4950000,")));
}

#[test]
fn outputs_are_plain_decimal() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config("").unwrap();
    config.out_dir = dir.path().to_path_buf();
    for e in [
        Experiment::SweepHit,
        Experiment::FeasibleSet,
        Experiment::SweepDensityEe,
    ] {
        run(&config, e, None).unwrap();
    }
    for (name, bytes) in read_dir_sorted(dir.path()) {
        if !name.ends_with(".csv") {
            continue;
        }
        let text = String::from_utf8(bytes).unwrap();
        for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
            let v: f64 = cell.parse().unwrap_or_else(|_| panic!("{name}: {cell}"));
            assert!(v.is_finite());
            assert!(!cell.contains(['e', 'E']), "{name}: {cell}");
            let digits = cell.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 12, "{name}: {cell}");
        }
    }
}

#[test]
fn every_csv_has_a_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config("budget = 2").unwrap();
    config.out_dir = dir.path().to_path_buf();
    let report = run(&config, Experiment::SweepDensityAse, None).unwrap();
    let names: Vec<String> = report
        .files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        [
            "sweep_density_ase_c2.csv",
            "sweep_density_ase_c2.gp",
            "sweep_density_ase.effective.conf"
        ]
    );
    let gp = fs::read_to_string(dir.path().join("sweep_density_ase_c2.gp")).unwrap();
    assert!(gp.contains("\"sweep_density_ase_c2.csv\""));
    let conf = fs::read_to_string(dir.path().join("sweep_density_ase.effective.conf")).unwrap();
    let mut again = parse_config(&conf).unwrap();
    assert_eq!(again.experiment, Some(Experiment::SweepDensityAse));
    again.experiment = None;
    assert_eq!(again, config);
}

#[test]
fn small_validation_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config(
        "trials = 4096\nvalidate_lambda = 0.001\nvalidate_p_hit = 0, 1\nvalidate_theta = 1\nestimator = conditional",
    )
    .unwrap();
    config.out_dir = dir.path().to_path_buf();
    let report = run(&config, Experiment::Validate, Some(0)).unwrap();
    let v = report.validation.clone().unwrap();
    assert_eq!(v.policies.len(), 2);
    assert_eq!(report.exit_code(), exit::OK);
    let text = fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.starts_with("policy,lambda,p_hit,theta,analytic,p_hat,std_error,z,pass\n"));
    let dump = fs::read_to_string(dir.path().join("trial_0.csv")).unwrap();
    assert!(dump.starts_with("field,x_m,y_m,hit_flag,bh_angle_rad\n"));
    assert!(dump.lines().count() > 100);
}

#[test]
fn impossible_pass_fraction_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config(
        "trials = 4096\nvalidate_lambda = 0.001\nvalidate_p_hit = 0.5\nvalidate_theta = 1\npass_band = 0.000001",
    )
    .unwrap();
    config.out_dir = dir.path().to_path_buf();
    let report = run(&config, Experiment::Validate, None).unwrap();
    assert_eq!(report.exit_code(), exit::VALIDATION);
    assert!(dir.path().join("validate.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let empty = dir.path().join("empty.conf");
    fs::write(&empty, "").unwrap();
    let status = bin()
        .args(["sweep_hit", "--config"])
        .arg(&empty)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(exit::CONFIG));
    assert!(!out.exists(), "no output on config error");

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "alpha = 2\n").unwrap();
    let o = bin()
        .args(["sweep_hit", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(exit::CONFIG));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha > 2"));

    let status = bin()
        .args(["optimize", "--budget", "0.01", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(exit::INFEASIBLE));
    assert!(!out.exists());

    let status = bin().arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(exit::CONFIG));

    let o = bin()
        .args(["optimize", "--budget", "5", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(exit::OK));
    let csv = fs::read_to_string(out.join("optimize.csv")).unwrap();
    assert!(csv.contains("\nP1,static,5,0.01,50000,"));
    assert_eq!(csv.lines().count(), 1 + 4);

    let help = bin().arg("--help").output().unwrap();
    let help = String::from_utf8_lossy(&help.stdout);
    assert!(help.contains("truncation_fraction") && help.contains("$/m²"));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "# sweep a few points\nexperiment = sweep_hit\np_hit_points = 3\nout_dir = ignored\n",
    )
    .unwrap();
    let out = dir.path().join("flag");
    let status = bin()
        .arg("--config")
        .arg(&conf)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(exit::OK));
    let csv = fs::read_to_string(out.join("sweep_hit.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = "trials = 5000\nvalidate_lambda = 0.01\nvalidate_theta = 2\nseed = 99";
    for dir in [a.path(), b.path()] {
        let mut config = parse_config(text).unwrap();
        config.out_dir = dir.to_path_buf();
        for e in Experiment::ALL {
            run(&config, e, Some(7)).unwrap();
        }
    }
    // The effective config records the output directory, so only tables
    // and plot scripts are compared.
    let results = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        read_dir_sorted(dir)
            .into_iter()
            .filter(|(name, _)| !name.ends_with(".conf"))
            .collect()
    };
    let (ra, rb) = (results(a.path()), results(b.path()));
    assert_eq!(ra.len(), 2 * (1 + 3 + 3 + 3 + 1 + 1 + 1));
    for ((na, ba), (nb, bb)) in ra.iter().zip(&rb) {
        assert_eq!(na, nb);
        assert!(ba == bb, "{na} differs between runs");
    }
}
