use std::path::PathBuf;
use std::process::{Command, Output};

use matschroed::families::{build_family, FamilySpec, Kind, QuadOrder};
use matschroed::io::{gaussian_from_json, gaussian_to_json};
use matschroed::structmat::phase_diag;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matschroed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matschroed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn check_kind1_passes() {
    let o = bin(&["check", "--kind", "1", "--N", "2", "--nu", "1.0", "--nmax", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn check_kind2_n3_passes() {
    let o = bin(&["check", "--kind", "2", "--N", "3", "--nu", "1.0,0.5", "--nmax", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn unreachable_tolerance_fails() {
    let o = bin(&[
        "check", "--kind", "1", "--N", "2", "--nu", "1.0", "--nmax", "8", "--tol", "1e-30",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&bin(&["check", "--kind", "1", "--N", "2"])), 2);
    assert_eq!(
        code(&bin(&["density", "--kind", "1", "--nu", "1", "--entry", "3,1"])),
        2
    );
    assert_eq!(
        code(&bin(&["density", "--kind", "1", "--nu", "1", "--grid", "1:0:0.1"])),
        2
    );
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        code(&bin(&["transform", "--input", bad.to_str().unwrap(), "--k", "1"])),
        2
    );
}

#[test]
fn seed_variable_is_honoured() {
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_matschroed"))
            .args(["check", "--kind", "2", "--nu", "0.5", "--nmax", "3"])
            .env("MATSCHROED_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        String::from_utf8(o.stdout).unwrap()
    };
    let line = |s: &str| s.lines().find(|l| l.contains("commutation")).unwrap().to_string();
    assert!(line(&run("7")).contains("seed=7"));
    assert_eq!(run("7"), run("7"));
}

fn trapezoid(rows: &[Vec<f64>], col: usize) -> f64 {
    rows.windows(2)
        .map(|w| 0.5 * (w[0][col] + w[1][col]) * (w[1][0] - w[0][0]))
        .sum()
}

fn density_rows(args: &[&str]) -> Vec<Vec<f64>> {
    let o = bin(args);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(header, ["x", "n0", "n1", "n2", "n3", "n4", "n5"]);
    rows
}

// Mass outside [-4, 4] is 2.4e-3 for n = 4 and 1.0e-2 for n = 5, so a
// trapezoid over [-4, 4] cannot reach 1 within 1e-3 for those columns.
#[test]
#[ignore = "tail mass beyond |x| = 4 exceeds 1e-3 for n = 4, 5"]
fn density_kind1_normalizes_on_short_grid() {
    let rows = density_rows(&[
        "density",
        "--kind",
        "1",
        "--nu",
        "1",
        "--nmax",
        "5",
        "--entry",
        "1,1",
        "--grid",
        "-4:4:0.05",
    ]);
    for col in 1..=6 {
        let s = trapezoid(&rows, col);
        assert!((s - 1.0).abs() < 1e-3, "column {col}: {s}");
    }
}

#[test]
fn density_kind1_normalizes() {
    let short = density_rows(&[
        "density",
        "--kind",
        "1",
        "--nu",
        "1",
        "--nmax",
        "5",
        "--entry",
        "1,1",
        "--grid",
        "-4:4:0.05",
    ]);
    let wide = density_rows(&[
        "density",
        "--kind",
        "1",
        "--nu",
        "1",
        "--nmax",
        "5",
        "--entry",
        "1,1",
        "--grid",
        "-9:9:0.05",
    ]);
    for col in 1..=6 {
        let s = trapezoid(&wide, col);
        assert!((s - 1.0).abs() < 1e-3, "column {col}: {s}");
        // short-grid shortfall is the tail mass, which grows with n
        let t = trapezoid(&short, col);
        assert!(t < 1.0 + 1e-12 && t > 0.98, "column {col}: {t}");
    }
    for col in 1..=4 {
        assert!((trapezoid(&short, col) - 1.0).abs() < 1e-3, "column {col}");
    }
}

#[test]
fn density_kind2_maxima_and_zeros() {
    let rows = density_rows(&[
        "density",
        "--kind",
        "2",
        "--nu",
        "0.5",
        "--nmax",
        "5",
        "--entry",
        "2,2",
        "--grid",
        "-5:5:0.01",
    ]);
    let origin = rows.iter().position(|r| r[0].abs() < 1e-12).unwrap();
    for n in 0..=5 {
        let col: Vec<f64> = rows.iter().map(|r| r[n + 1]).collect();
        let maxima = col.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count();
        assert_eq!(maxima, n + 1, "n={n}");
        if n % 2 == 0 {
            assert!(col.iter().all(|&v| v > 0.0), "n={n}");
        } else {
            // both Hermite functions in the entry are odd
            assert!(col[origin].abs() < 1e-30, "n={n}");
            assert!(col.iter().enumerate().all(|(i, &v)| i == origin || v > 0.0), "n={n}");
        }
    }
}

#[test]
fn density_decoupled_off_diagonal_is_zero() {
    let o = bin(&[
        "density", "--kind", "1", "--nu", "0", "--nmax", "5", "--entry", "1,2", "--grid", "-3:3:0.5",
    ]);
    let (_, rows) = csv(&String::from_utf8(o.stdout).unwrap());
    assert!(rows.iter().all(|r| r[1..].iter().all(|&v| v == 0.0)));
}

#[test]
fn density_is_deterministic() {
    let out = scratch("density.csv");
    let p = out.to_str().unwrap();
    let args = ["density", "--kind", "2", "--nu", "0.5", "--entry", "1,1", "--out", p];
    assert_eq!(code(&bin(&args)), 0);
    let first = std::fs::read(&out).unwrap();
    assert_eq!(code(&bin(&args)), 0);
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn transform_of_ground_state_and_back() {
    let phi0 = scratch("phi0.json");
    let fwd = scratch("phi0_fwd.json");
    let back = scratch("phi0_back.json");
    let o = bin(&[
        "export",
        "--kind",
        "1",
        "--nu",
        "1",
        "--nmax",
        "0",
        "--n",
        "0",
        "--out",
        phi0.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = bin(&[
        "transform",
        "--input",
        phi0.to_str().unwrap(),
        "--k",
        "1",
        "--out",
        fwd.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let f = gaussian_from_json(&std::fs::read_to_string(&phi0).unwrap()).unwrap();
    let g = gaussian_from_json(&std::fs::read_to_string(&fwd).unwrap()).unwrap();
    let want = f.left_phase(&phase_diag(2, 1)).unwrap();
    assert!(g.distance(&want).unwrap() < 1e-10);

    let o = bin(&[
        "transform",
        "--input",
        fwd.to_str().unwrap(),
        "--k",
        "1",
        "--direction",
        "-1",
        "--out",
        back.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let h = gaussian_from_json(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert!(h.distance(&f).unwrap() < 1e-10);
}

#[test]
fn transform_of_zero_with_k0() {
    let zero = scratch("zero.json");
    std::fs::write(
        &zero,
        r#"{"N":3,"degree":0,"coeffs":[[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]]}"#,
    )
    .unwrap();
    let o = bin(&["transform", "--input", zero.to_str().unwrap(), "--k", "0"]);
    assert_eq!(code(&o), 0);
    let g = gaussian_from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(g.poly().is_zero());
}

#[test]
fn expand_refuses_then_projects() {
    let spec = FamilySpec::new(Kind::Two, 2, vec![0.5]).unwrap();
    let ctx = build_family(&spec, 6, QuadOrder::Auto).unwrap();
    let input = scratch("phi6.json");
    std::fs::write(&input, gaussian_to_json(ctx.phi_tilde(6).unwrap())).unwrap();
    let p = input.to_str().unwrap();
    let base = ["expand", "--kind", "2", "--nu", "0.5", "--input", p];

    let o = bin(&[&base[..], &["--nmax", "4"]].concat());
    assert_eq!(code(&o), 2);
    let o = bin(&[&base[..], &["--nmax", "4", "--project"]].concat());
    assert_eq!(code(&o), 0);
    let o = bin(&[&base[..], &["--nmax", "6", "--verify"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    let json_end = text.rfind('}').unwrap() + 1;
    let v: serde_json::Value = serde_json::from_str(&text[..json_end]).unwrap();
    assert_eq!(v["n_max"], 6);
    assert!((v["coeffs"][6][0][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn matrix_elements_star_pattern_and_closed_form() {
    let o = bin(&["matrix-elements", "--kind", "1", "--nu", "1", "--nmax", "4", "--verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    let mask: Vec<&str> = text.lines().take(10).collect();
    assert_eq!(mask[0], "0**0000000");
    assert_eq!(mask[3], "0**00*0000");
    assert!(text.lines().any(|l| l.starts_with("row,c0_re,c0_im")));
}
