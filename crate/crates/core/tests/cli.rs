use std::path::Path;
use std::process::{Command, Output};

const BASE: &str = r#"
energy_eV = 1.0e9
dp_A = 1.92
u0_eV = 23.0
length_A = 2.0e5
theta_in_rad = 0.0
theta_min_rad = 0.0
theta_max_rad = 1.5e-3
theta_count = 3
omega_min_eV = 2.0e6
omega_max_eV = 4.5e6
omega_count = 5
"#;

fn run(dir: &Path, args: &[&str], config: &str) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chanrad"));
    cmd.current_dir(dir).args(args).arg("--config").arg(&path);
    cmd.output().unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn levels_on_reference_has_52_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["levels", "--out", "ref"], BASE);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("ref_levels.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# n,energy_eV"));
    assert!(lines
        .next()
        .unwrap()
        .contains("intensities in arbitrary units"));
    let rows = data_rows(&dir.path().join("ref_levels.csv"));
    assert_eq!(rows.len(), 52);
    assert!(rows[0].starts_with("0,2.2042667887637862e-1"));
    assert!(rows[51].starts_with("51,"));
}

#[test]
fn every_table_has_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let schemas = [
        ("populate", "populations.csv", "# n,re_c,im_c,abs2_c"),
        (
            "lines",
            "lines.csv",
            "# n_initial,n_final,delta_eps_eV,re_amp,im_amp",
        ),
        (
            "spectrum",
            "spectrum.csv",
            "# theta_rad,omega_eV,I_incoherent_arb,I_coherent_arb,ratio",
        ),
        ("peaks", "peaks.csv", "# theta_rad,omega_eV,height_arb,rank"),
    ];
    for (cmd, file, header) in schemas {
        let out = run(dir.path(), &[cmd, "--out", "t"], BASE);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = std::fs::read_to_string(dir.path().join(format!("t_{file}"))).unwrap();
        assert_eq!(text.lines().next(), Some(header));
    }
    assert_eq!(data_rows(&dir.path().join("t_spectrum.csv")).len(), 15);
    // lines from empty initial states are still listed, with zero amplitude
    assert_eq!(data_rows(&dir.path().join("t_lines.csv")).len(), 51);
}

#[test]
fn one_by_one_spectrum_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BASE
        .replace("theta_count = 3", "theta_count = 1")
        .replace("omega_count = 5", "omega_count = 1");
    let out = run(dir.path(), &["spectrum"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&dir.path().join("chanrad_spectrum.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').count(), 5);
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BASE.replace("theta_in_rad = 0.0", "theta_in_rad = 1.0e-4");
    run(
        dir.path(),
        &["spectrum", "--out", "a", "--workers", "1"],
        &cfg,
    );
    run(
        dir.path(),
        &["spectrum", "--out", "b", "--workers", "7"],
        &cfg,
    );
    let a = std::fs::read(dir.path().join("a_spectrum.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b_spectrum.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["levels"],
        &format!("{BASE}speciess = \"positron\"\n"),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("speciess"));
    let out = run(dir.path(), &["levels"], &BASE.replace("dp_A = 1.92\n", ""));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dp_A"));
    let out = run(dir.path(), &["frobnicate"], BASE);
    assert_eq!(out.status.code(), Some(1));
    let missing = Command::new(env!("CARGO_BIN_EXE_chanrad"))
        .args(["levels", "--config", "/nonexistent/x.toml"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn physics_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["levels"],
        &BASE.replace("theta_in_rad = 0.0", "theta_in_rad = 3.0e-4"),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr)
        .to_lowercase()
        .contains("barrier"));
    let out = run(
        dir.path(),
        &["levels"],
        &BASE.replace("energy_eV = 1.0e9", "energy_eV = 4.0e5"),
    );
    assert_eq!(out.status.code(), Some(2));
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, vec![std::ffi::OsString::from("run.toml")]);
}

#[test]
fn tabulated_potential_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("# x_A, U_eV\n");
    for i in 0..=400 {
        let x = -1.5 + 3.0 * i as f64 / 400.0;
        table.push_str(&format!("{x}, {}\n", 23.0 * (x / 0.1f64).tanh().powi(2)));
    }
    std::fs::write(dir.path().join("well.dat"), table).unwrap();
    let cfg = format!(
        "{BASE}potential = \"tabulated\"\npotential_path = \"well.dat\"\ngrid_half_width_A = 1.5\ngrid_points = 4001\n"
    );
    let out = run(dir.path(), &["levels"], &cfg);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the tanh² well holds eleven levels; linear interpolation shifts them slightly
    assert_eq!(data_rows(&dir.path().join("chanrad_levels.csv")).len(), 11);

    std::fs::write(dir.path().join("well.dat"), "0.0 1.0\n-1.0 2.0\n").unwrap();
    let out = run(dir.path(), &["levels"], &cfg);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_exit_code_follows_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["validate"], BASE);
    let table = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 10);
    let any_fail = rows.iter().any(|r| r.contains(" FAIL "));
    assert_eq!(out.status.code(), Some(if any_fail { 3 } else { 0 }));
}
