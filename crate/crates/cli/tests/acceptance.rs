//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances are
//! pinned in the assertions, not configurable.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::Command;
use symplecta_core::dynamics::{energy, evolve_trajectory, evolve_with, PhaseState};
use symplecta_core::linalg::{givens_decompose, givens_reconstruct, Mat, OrthoMatrix};
use symplecta_core::oracle::{dynamics_spectrum, matexp_series, rk4_hamilton};
use symplecta_core::pipeline::{decompose, OscillatorNetwork};
use symplecta_core::quantum::{
    evolve_single_excitation, survival_probability, QuantumNetwork, SingleExcitationState,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn stable_triple(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let w1: f64 = rng.gen_range(0.3..3.0);
    let w2: f64 = rng.gen_range(0.3..3.0);
    let s: f64 = rng.gen_range(-0.95..0.95);
    (w1, w2, s * (w1 * w2).sqrt())
}

fn stable_net(rng: &mut ChaCha8Rng, n: usize) -> OscillatorNetwork {
    let freqs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.5)).collect();
    let couplings: Vec<f64> = (1..n)
        .map(|j| {
            let cap = 0.8 * (freqs[0] * freqs[j]).sqrt() / (n as f64 - 1.0);
            -rng.gen_range(0.0..cap)
        })
        .collect();
    OscillatorNetwork::new(freqs, couplings).unwrap()
}

fn quantum_net(rng: &mut ChaCha8Rng, n: usize) -> QuantumNetwork {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let couple: Vec<f64> = (1..n).map(|_| -rng.gen_range(0.0..0.3)).collect();
    QuantumNetwork::new(diag, couple).unwrap()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize, reflect: bool) -> OrthoMatrix {
    let mut m = Mat::identity(n);
    if reflect {
        m.set(n - 1, n - 1, -1.0);
    }
    for _ in 0..n * (n - 1).max(1) {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let alpha: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (s, c) = alpha.sin_cos();
        for k in 0..n {
            let rik = m.get(i, k);
            let rjk = m.get(j, k);
            m.set(i, k, c * rik + s * rjk);
            m.set(j, k, -s * rik + c * rjk);
        }
    }
    OrthoMatrix::from_mat(m).unwrap()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn report(criterion: u32, name: &str, max_err: f64, tol: f64) {
    let verdict = if max_err <= tol { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {criterion} ({name}): {verdict} max_error={max_err:.3e} tol={tol:.1e}");
    assert!(
        max_err <= tol,
        "criterion {criterion} ({name}): {max_err:.3e} > {tol:.1e}"
    );
}

#[test]
fn criterion_1_two_oscillator_closed_form() {
    let mut rng = rng(42);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (w1, w2, g) = stable_triple(&mut rng);
        let net = OscillatorNetwork::new(vec![w1, w2], vec![g]).unwrap();
        let dec = decompose(&net).unwrap();
        let inner = ((w1 * w1 - w2 * w2).powi(2) + 4.0 * g * g * w1 * w2).sqrt();
        let closed = [
            (0.5 * (w1 * w1 + w2 * w2 + inner)).sqrt(),
            (0.5 * (w1 * w1 + w2 * w2 - inner)).sqrt(),
        ];
        worst = worst.max(max_rel(&dec.omegas, &closed));
    }
    report(1, "n2 closed form", worst, 1e-10);
}

#[test]
fn criterion_2_spectral_oracle() {
    let mut rng = rng(43);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = 2 + case % 7;
        let net = stable_net(&mut rng, n);
        let dec = decompose(&net).unwrap();
        let oracle = dynamics_spectrum(&net).unwrap();
        worst = worst.max(max_rel(&dec.omegas, &oracle));
    }
    report(2, "spectral oracle", worst, 1e-9);
}

#[test]
fn criterion_3_symplectic_condition() {
    // Same nets as criteria 1 and 2 (same seeds and draw order).
    let mut worst = 0.0f64;
    let mut rng1 = rng(42);
    for _ in 0..1000 {
        let (w1, w2, g) = stable_triple(&mut rng1);
        let net = OscillatorNetwork::new(vec![w1, w2], vec![g]).unwrap();
        worst = worst.max(decompose(&net).unwrap().symplectic_residual());
    }
    let mut rng2 = rng(43);
    for case in 0..200 {
        let n = 2 + case % 7;
        let net = stable_net(&mut rng2, n);
        worst = worst.max(decompose(&net).unwrap().symplectic_residual());
    }
    report(3, "symplectic condition", worst, 1e-10);
}

#[test]
fn criterion_4_classical_evolution() {
    let mut rng = rng(44);
    let mut worst_gap = 0.0f64;
    for case in 0..6 {
        let n = 2 + case % 3; // 2..=4
        let net = stable_net(&mut rng, n);
        let dec = decompose(&net).unwrap();
        for _ in 0..3 {
            let q = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x0 = PhaseState::new(q, p).unwrap();
            for &t in &[5.0, 20.0] {
                let exact = evolve_with(&dec, &x0, t).unwrap();
                let rk = rk4_hamilton(&net, &x0, t, 1e-3).unwrap();
                worst_gap = worst_gap.max(max_abs(&exact.to_vec(), &rk.to_vec()));
            }
        }
    }
    report(4, "evolve vs rk4", worst_gap, 1e-6);

    let mut worst_drift = 0.0f64;
    for case in 0..4 {
        let n = 2 + case % 3;
        let net = stable_net(&mut rng, n);
        let q = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x0 = PhaseState::new(q, p).unwrap();
        let e0 = energy(&net, &x0);
        for state in evolve_trajectory(&net, &x0, 100.0, 2.0).unwrap() {
            worst_drift =
                worst_drift.max((energy(&net, &state) - e0).abs() / e0.abs().max(1e-300));
        }
    }
    report(4, "energy drift", worst_drift, 1e-9);
}

#[test]
fn criterion_5_quantum_evolution() {
    let mut rng = rng(45);
    let mut worst_amp = 0.0f64;
    let mut worst_norm = 0.0f64;
    for case in 0..14 {
        let n = 2 + case % 7; // 2..=8
        let qnet = quantum_net(&mut rng, n);
        let h = qnet.coupling_matrix();
        for site in 0..2.min(n) {
            let c0 = SingleExcitationState::basis(n, site).unwrap();
            for &t in &[1.0, 25.0, 100.0] {
                let fast = evolve_single_excitation(&qnet, &c0, t).unwrap();
                let slow = matexp_series(&h, t, c0.amps());
                let gap = fast
                    .amps()
                    .iter()
                    .zip(slow.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                worst_amp = worst_amp.max(gap);
                let norm: f64 = fast.amps().iter().map(|z| z.norm_sqr()).sum();
                worst_norm = worst_norm.max((norm - 1.0).abs());
            }
        }
    }
    report(5, "quantum evolve vs matexp", worst_amp, 1e-9);
    report(5, "norm conservation", worst_norm, 1e-12);

    let g = -0.1f64;
    let qnet = QuantumNetwork::new(vec![1.0, 1.0], vec![g]).unwrap();
    let mut worst_survival = 0.0f64;
    let mut t = 0.0;
    while t <= 100.0 {
        let p = survival_probability(&qnet, 0, t).unwrap();
        worst_survival = worst_survival.max((p - (g.abs() * t).cos().powi(2)).abs());
        t += 0.5;
    }
    report(5, "two-mode survival cos^2", worst_survival, 1e-9);
}

#[test]
fn criterion_6_givens_roundtrip() {
    let mut rng = rng(46);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let n = 2 + case % 9; // 2..=10
        let reflect = case % 2 == 1;
        let m = random_orthogonal(&mut rng, n, reflect);
        let seq = givens_decompose(&m).unwrap();
        assert!(
            seq.rotations.len() <= n * (n - 1) / 2,
            "rotation count bound violated"
        );
        let back = givens_reconstruct(&seq).unwrap();
        worst = worst.max(back.as_mat().sub(m.as_mat()).max_abs());
    }
    report(6, "givens roundtrip", worst, 1e-12);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symplecta"))
}

fn tmp_path(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn criterion_7_stability_gate() {
    // g^2 > w1 w2 must exit with code 2.
    let unstable = tmp_path("unstable.json");
    std::fs::write(
        &unstable,
        r#"{"kind":"classical","n":2,"diag_freq":[1.0,1.0],"couplings":[-1.1]}"#,
    )
    .unwrap();
    let status = bin()
        .args(["normal-modes", "--config"])
        .arg(&unstable)
        .arg("--out")
        .arg(tmp_path("unstable-out.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2), "unstable config must exit 2");

    // Every spring-mass-derived config is stable.
    let mut rng = rng(47);
    for case in 0..20 {
        let config = tmp_path(&format!("sm-{case}.json"));
        let out = tmp_path(&format!("sm-{case}-modes.json"));
        let m1: f64 = rng.gen_range(0.1..10.0);
        let k1: f64 = rng.gen_range(0.1..10.0);
        let m2: f64 = rng.gen_range(0.1..10.0);
        let k2: f64 = rng.gen_range(0.1..10.0);
        let k: f64 = rng.gen_range(0.0..10.0);
        let status = bin()
            .args([
                "from-spring-mass",
                "--m1",
                &m1.to_string(),
                "--k1",
                &k1.to_string(),
                "--m2",
                &m2.to_string(),
                "--k2",
                &k2.to_string(),
                "--k",
                &k.to_string(),
                "--out",
            ])
            .arg(&config)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        let status = bin()
            .args(["normal-modes", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(
            status.code(),
            Some(0),
            "spring-mass config {case} unexpectedly failed"
        );
    }
    println!("[acceptance] criterion 7 (stability gate): PASS exit codes 2/0 as specified");
}

fn read_section_points(path: &PathBuf) -> Vec<[f64; 2]> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('u'))
        .map(|l| {
            let mut it = l.split(',');
            let u: f64 = it.next().unwrap().parse().unwrap();
            let v: f64 = it.next().unwrap().parse().unwrap();
            [u, v]
        })
        .collect()
}

fn axis_ratio_minus_one(points: &[[f64; 2]]) -> f64 {
    let radii: Vec<f64> = points
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
        .collect();
    let rmax = radii.iter().cloned().fold(0.0, f64::max);
    let rmin = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    rmax / rmin - 1.0
}

/// Fit a u^2 + 2 b u v + c v^2 = E through three section points.
fn fitted_cross_term(points: &[[f64; 2]], e: f64) -> f64 {
    let idx = [0, points.len() / 8, points.len() / 4];
    let rows: Vec<[f64; 3]> = idx
        .iter()
        .map(|&k| {
            let [u, v] = points[k];
            [u * u, 2.0 * u * v, v * v]
        })
        .collect();
    let m = [rows[0], rows[1], rows[2]];
    let det3 = |m: &[[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&m);
    assert!(d.abs() > 1e-14, "degenerate conic fit");
    let col = |col: usize| -> f64 {
        let mut mm = m;
        for row in mm.iter_mut() {
            row[col] = e;
        }
        det3(&mm) / d
    };
    let (a, b, c) = (col(0), col(1), col(2));
    b.abs() / a.abs().max(c.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_8_section_geometry() {
    let config = tmp_path("sections-net.json");
    std::fs::write(
        &config,
        r#"{"kind":"classical","n":3,"diag_freq":[1.3,0.8,1.9],"couplings":[-0.3,-0.25]}"#,
    )
    .unwrap();

    let run_section = |stage: &str, plane: &str, out_name: &str| -> Vec<[f64; 2]> {
        let out = tmp_path(out_name);
        let status = bin()
            .args(["sections", "--config"])
            .arg(&config)
            .args([
                "--stage", stage, "--plane", plane, "--energy", "1.0", "--samples", "64", "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        read_section_points(&out)
    };

    let mut worst_circle = 0.0f64;
    worst_circle = worst_circle.max(axis_ratio_minus_one(&run_section(
        "after-s", "p1,p2", "sec-s.csv",
    )));
    for i in 1..=3 {
        let points = run_section("after-t", &format!("q{i},p{i}"), &format!("sec-t{i}.csv"));
        worst_circle = worst_circle.max(axis_ratio_minus_one(&points));
    }
    report(8, "section circles", worst_circle, 1e-10);

    let mut worst_cross = 0.0f64;
    for (a, b) in [(1, 2), (1, 3), (2, 3)] {
        let points = run_section(
            "after-r",
            &format!("q{a},q{b}"),
            &format!("sec-r{a}{b}.csv"),
        );
        worst_cross = worst_cross.max(fitted_cross_term(&points, 1.0));
    }
    report(8, "section cross terms", worst_cross, 1e-10);
}
