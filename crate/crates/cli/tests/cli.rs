use msdd_cli::config::{InitialKindName, PotentialConfig};
use msdd_cli::csvio::{read_diagnostics, read_table, write_diagnostics, write_table};
use msdd_cli::plots::{emit_ensemble_plot, emit_plots};
use msdd_cli::snapshot::{decode, encode, into_state, load, save};
use msdd_cli::{parse_config, simulate, spectrum, verify, CliError, Suite, Task};
use msdd_core::dynamics::{make_initial, stability_bound, InitialKind, InitialSpec};
use msdd_core::Domain;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_msdd");

fn small(dir: &Path, extra: &str) -> String {
    format!(
        r#"
[domain]
modes = [4, 4, 4]

[params]
sigma = 0.2
epsilon = 0.1
gamma = 0.1
coulomb = true
dt = 0.002
t_final = 0.1
seed = 5

[potential]
preset = "well"
offset = 1.0
scale = 1.0

[[pump]]
mode = [1, 1, 1]
pattern = [1.0, -1.0, 0.0]
amplitude = 0.5
omega = 2.0

[initial]
kind = "random"
a_norm = 0.5
pi_norm = 0.5

[output]
directory = "{}"
record_every = 5
{extra}
"#,
        dir.display()
    )
}

fn with_t_final(text: &str, t: f64) -> String {
    text.replace("t_final = 0.1", &format!("t_final = {t}"))
}

#[test]
fn minimal_config_gets_defaults() {
    let c = parse_config("[domain]\nmodes = [4, 4, 4]\n").unwrap();
    assert_eq!(c.domain.lengths, [1.0; 3]);
    assert_eq!(c.params.dt, 1e-3);
    assert_eq!(c.params.t_final, 1.0);
    assert_eq!(c.potential, PotentialConfig::Constant { value: 1.0 });
    assert!(c.pump.is_empty());
    assert_eq!(c.initial.kind, InitialKindName::Ground);
    assert_eq!(c.output.record_every, 10);
    assert_eq!(c.verify.radii, vec![0.1, 1.0, 10.0]);
}

#[test]
fn validation_names_the_key() {
    let base = "[domain]\nmodes = [4, 4, 4]\n[params]\n";
    let key = |text: &str| match parse_config(text) {
        Err(CliError::Validation { key, message }) => (key, message),
        other => panic!("expected validation error, got {other:?}"),
    };
    let (k, m) = key(&format!("{base}gamma = -1.0\n"));
    assert_eq!(k, "params.gamma");
    assert!(m.contains(">= 0"));

    let d = Domain::new([1.0; 3], [4; 3]).unwrap();
    let bound = stability_bound(&d, 0.0);
    let (k, m) = key(&format!("{base}dt = {}\n", 2.0 * bound));
    assert_eq!(k, "params.dt");
    assert!(m.contains(&format!("{bound:.6e}")), "{m}");

    let (k, _) = key("[domain]\nmodes = [4, 4, 4]\n[potential]\npreset = \"constant\"\nvalue = 0.0\n");
    assert_eq!(k, "potential");
    let (k, _) = key("[domain]\nmodes = [4, 4, 4]\n[[pump]]\nmode = [9, 1, 1]\npattern = [0.0, 1.0, 0.0]\namplitude = 1.0\n");
    assert_eq!(k, "pump[0]");
    let (k, _) = key("[domain]\nmodes = [4, 4, 4]\nlengths = [1.0, -1.0, 1.0]\n");
    assert_eq!(k, "domain");
}

#[test]
fn syntax_and_unknown_keys_report_lines() {
    match parse_config("[domain]\nmodes = [4, 4, 4]\n\n[params]\nsigmaa = 1.0\n") {
        Err(CliError::Parse { line, message }) => {
            assert_eq!(line, 5);
            assert!(message.contains("sigmaa"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    match parse_config("[domain]\nmodes = [4, 4, 4]\n[params]\nsigma = = 1\ndt = 0.1\n") {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_config("[params]\nsigma = 1.0\n"), Err(CliError::Parse { .. })));
}

#[test]
fn zero_horizon_writes_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&with_t_final(&small(dir.path(), ""), 0.0)).unwrap();
    simulate(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("t,Q,E,canonical_energy"));
}

#[test]
fn simulate_is_deterministic_and_damps_charge() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    simulate(&parse_config(&small(a.path(), "")).unwrap()).unwrap();
    simulate(&parse_config(&small(b.path(), "")).unwrap()).unwrap();
    let x = std::fs::read(a.path().join("diagnostics.csv")).unwrap();
    let y = std::fs::read(b.path().join("diagnostics.csv")).unwrap();
    assert_eq!(x, y);
    let rows = read_diagnostics(&a.path().join("diagnostics.csv")).unwrap();
    assert!(rows.last().unwrap().charge < rows[0].charge);
    for f in ["charge.gp", "lyapunov.gp", "xnorm.gp", "final.msw"] {
        assert!(a.path().join(f).exists(), "{f}");
    }
}

#[test]
fn snapshots_follow_the_schedule_and_restart_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let text = small(dir.path(), "snapshot_every = 25");
    let cfg = parse_config(&text).unwrap();
    let rep = simulate(&cfg).unwrap();
    let snaps: Vec<_> = rep
        .files
        .iter()
        .filter(|p| p.to_string_lossy().contains("snapshot_"))
        .collect();
    assert_eq!(snaps.len(), 3);
    let d = cfg.domain().unwrap();
    let last = load(snaps[2], &d).unwrap();
    let fin = load(&dir.path().join("final.msw"), &d).unwrap();
    assert_eq!(last, fin);
}

#[test]
fn snapshot_format() {
    let d = Domain::new([1.0; 3], [4, 3, 5]).unwrap();
    let spec = InitialSpec { kind: InitialKind::Random, a_norm: 1.0, pi_norm: 2.0, charge: 1.0, band: 3 };
    let mut s = make_initial(&d, &spec, 9);
    s.t = 0.123456789;
    let bytes = encode(&s);
    assert_eq!(&bytes[..4], b"MSW1");
    assert_eq!(bytes[4], 1);
    assert_eq!(u32::from_le_bytes(bytes[5..9].try_into().unwrap()), 4);
    assert_eq!(u32::from_le_bytes(bytes[9..13].try_into().unwrap()), 3);
    let back = into_state(&decode(&bytes).unwrap(), &d).unwrap();
    assert_eq!(back.t.to_bits(), s.t.to_bits());
    let (x, y) = (back.to_flat(), s.to_flat());
    assert!(x.iter().zip(&y).all(|(a, b)| a.to_bits() == b.to_bits()));

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(decode(&bad), Err(CliError::Format(_))));
    let mut bad = bytes.clone();
    bad[4] = 7;
    assert!(matches!(decode(&bad), Err(CliError::Format(_))));
    assert!(matches!(decode(&bytes[..20]), Err(CliError::Corrupt(_))));
    assert!(matches!(decode(&bytes[..bytes.len() - 3]), Err(CliError::Corrupt(_))));
    let short = decode(&bytes[..bytes.len() - 8]).unwrap();
    assert!(matches!(into_state(&short, &d), Err(CliError::Corrupt(_))));
    let other = Domain::new([1.0; 3], [4; 3]).unwrap();
    assert!(matches!(
        into_state(&decode(&bytes).unwrap(), &other),
        Err(CliError::Core(msdd_core::Error::Dimension(_)))
    ));
}

#[test]
fn csv_round_trips_every_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&small(dir.path(), "")).unwrap();
    simulate(&cfg).unwrap();
    let p = dir.path().join("diagnostics.csv");
    let rows = read_diagnostics(&p).unwrap();
    let q = dir.path().join("copy.csv");
    write_diagnostics(&q, &rows).unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
    let again = read_diagnostics(&q).unwrap();
    for (a, b) in rows.iter().zip(&again) {
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    let awkward = [std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2];
    write_table(&q, &["v"], awkward.iter().map(|v| vec![*v])).unwrap();
    let (_, back) = read_table(&q, &["v"]).unwrap();
    for (v, r) in awkward.iter().zip(&back) {
        assert_eq!(v.to_bits(), r[0].to_bits());
    }
}

#[test]
fn plot_scripts() {
    let dir = tempfile::tempdir().unwrap();
    simulate(&parse_config(&small(dir.path(), "")).unwrap()).unwrap();
    let files = emit_plots(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(files.len(), 3);
    for f in &files {
        let s = std::fs::read_to_string(f).unwrap();
        assert!(s.contains("\"diagnostics.csv\""));
    }

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert!(matches!(emit_plots(&empty), Err(CliError::Schema(_))));
    let header_only = dir.path().join("header.csv");
    write_diagnostics(&header_only, &[]).unwrap();
    assert!(matches!(emit_plots(&header_only), Err(CliError::Schema(_))));
    let wrong = dir.path().join("wrong.csv");
    std::fs::write(&wrong, "t,Q\n0,1\n").unwrap();
    assert!(matches!(emit_plots(&wrong), Err(CliError::Schema(_))));

    let tables: Vec<_> = (0..3)
        .map(|i| {
            let p = dir.path().join(format!("ens_{i}.csv"));
            write_table(&p, &["t", "x_norm_sq"], (0..4).map(|k| vec![k as f64, 1.0 + i as f64])).unwrap();
            p
        })
        .collect();
    let out = emit_ensemble_plot(&tables, &dir.path().join("ensemble.gp")).unwrap();
    let s = std::fs::read_to_string(out).unwrap();
    assert!(s.contains("ens_0.csv") && s.contains("ens_2.csv"));
}

#[test]
fn verify_and_spectrum_reports() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "[domain]\nmodes = [4, 4, 4]\n[params]\nepsilon = 0.1\ngamma = 0.1\ndt = 0.004\nt_final = 0.4\n[output]\ndirectory = \"{}\"\n",
        dir.path().display()
    );
    let cfg = parse_config(&text).unwrap();
    let rep = verify(&cfg, Suite::Charge).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep.checks.iter().any(|c| c.name == "closed-form charge oracle"));
    let rep = verify(&cfg, Suite::Gradcheck).unwrap();
    assert!(rep.passed(), "{rep}");

    let rep = spectrum(&cfg, Task::LambdaMin).unwrap();
    assert!(rep.passed());
    assert!(rep.to_string().contains("1.973920880218e1"));
    let zero = parse_config(&format!("{text}[spectrum]\nfield = \"zero\"\n")).unwrap();
    let rep = spectrum(&zero, Task::Equivalence).unwrap();
    assert!(rep.passed() && rep.checks.iter().any(|c| c.name.contains("identity")));
    let rep = spectrum(&zero, Task::RelativeBound).unwrap();
    assert!(rep.passed() && rep.checks.iter().any(|c| c.detail == "C_delta = 0"));
    assert!(dir.path().join("verify_charge.txt").exists());
}

#[test]
fn suite_preconditions_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let undamped = parse_config(&format!(
        "[domain]\nmodes = [4, 4, 4]\n[output]\ndirectory = \"{}\"\n",
        dir.path().display()
    ))
    .unwrap();
    assert!(matches!(verify(&undamped, Suite::Charge), Err(CliError::Validation { .. })));
    let driven = parse_config(&small(dir.path(), "")).unwrap();
    assert!(matches!(verify(&driven, Suite::Conservation), Err(CliError::Validation { .. })));
}

#[test]
fn binary_exit_codes_and_output_override() {
    let dir = tempfile::tempdir().unwrap();
    let over = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, small(&dir.path().join("unused"), "")).unwrap();
    let st = Command::new(BIN)
        .arg("simulate")
        .arg(&cfg)
        .env("MSDD_OUTPUT_DIR", over.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(over.path().join("diagnostics.csv").exists());
    assert!(!dir.path().join("unused").exists());

    // a conservative run has no decay, so the Lyapunov suite fails its check
    let flat = dir.path().join("flat.toml");
    std::fs::write(
        &flat,
        format!(
            "[domain]\nmodes = [4, 4, 4]\n[params]\ndt = 0.004\nt_final = 0.4\n[initial]\nkind = \"random\"\na_norm = 1.0\n[output]\ndirectory = \"{}\"\nrecord_every = 2\n",
            dir.path().display()
        ),
    )
    .unwrap();
    let st = Command::new(BIN).args(["verify", "--suite", "lyapunov"]).arg(&flat).output().unwrap();
    assert_eq!(st.status.code(), Some(1), "{}", String::from_utf8_lossy(&st.stdout));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[domain]\nmodes = [4, 4, 4]\n[params]\ngamma = -1.0\n").unwrap();
    let st = Command::new(BIN).arg("simulate").arg(&bad).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("params.gamma"));
}

#[test]
fn divergence_leaves_partial_output_and_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let d = Domain::new([1.0; 3], [4; 3]).unwrap();
    let mut s = make_initial(&d, &InitialSpec::default(), 0);
    s.psi.re[5] = f64::INFINITY;
    let snap = dir.path().join("broken.msw");
    save(&snap, &s).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "[domain]\nmodes = [4, 4, 4]\n[initial]\nsnapshot = \"{}\"\n[output]\ndirectory = \"{}\"\n",
            snap.display(),
            dir.path().join("out").display()
        ),
    )
    .unwrap();
    let st = Command::new(BIN).arg("simulate").arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&st.stderr).contains("diverged"));
    let text = std::fs::read_to_string(dir.path().join("out/diagnostics.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn snapshot_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let d = Domain::new([1.0; 3], [4; 3]).unwrap();
    let s = make_initial(&d, &InitialSpec { kind: InitialKind::Random, ..InitialSpec::default() }, 2);
    let a = dir.path().join("a.msw");
    let b = dir.path().join("b.msw");
    save(&a, &s).unwrap();
    let st = Command::new(BIN)
        .args(["snapshot", "--in"])
        .arg(&a)
        .arg("--out")
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::write(&b, b"NOPE").unwrap();
    let st = Command::new(BIN).args(["snapshot", "--in"]).arg(&b).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}
