//! The four subcommands. Each returns a [`Report`]; the binary maps a failed
//! check to exit status 1 and errors to 2 or 3.

use crate::config::{FieldSource, OrderName, RunConfig};
use crate::csvio::{write_diagnostics, write_table};
use crate::error::{CliError, Result};
use crate::plots::{emit_ensemble_plot, emit_plots};
use crate::snapshot;
use msdd_core::dynamics::{grad_check, run, x_norm_sq};
use msdd_core::estimates::{
    absorbing_experiment, charge_ode_oracle, charge_residual, current_ratio, lambda_min,
    lambda_min_lanczos, lyapunov_feasibility, lyapunov_fit, max_charge_increase, measured_order,
    rayleigh_equivalence, relative_bound_t, EquivalenceOrder,
};
use msdd_core::spectral::BasisFamily;
use msdd_core::{Domain, Params, State, System, Vector};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl Report {
    fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for l in &self.lines {
            writeln!(f, "  {l}")?;
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  {tag}  {}: {}", c.name, c.detail)?;
        }
        for p in &self.files {
            writeln!(f, "  wrote {}", p.display())?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Charge,
    Conservation,
    Lyapunov,
    Absorbing,
    Gradcheck,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Charge => "charge",
            Suite::Conservation => "conservation",
            Suite::Lyapunov => "lyapunov",
            Suite::Absorbing => "absorbing",
            Suite::Gradcheck => "gradcheck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    LambdaMin,
    Equivalence,
    RelativeBound,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::LambdaMin => "lambda-min",
            Task::Equivalence => "equivalence",
            Task::RelativeBound => "relative-bound",
        }
    }
}

fn prepare_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn setup(cfg: &RunConfig) -> Result<(System, State)> {
    let sys = cfg.system()?;
    let s0 = cfg.initial_state(&sys.domain)?;
    Ok((sys, s0))
}

fn with_params(sys: &System, params: Params) -> Result<System> {
    Ok(System::new(
        sys.domain.clone(),
        params,
        sys.pump.clone(),
        sys.potentials.clone(),
    )?)
}

/// Integrates the configured run and writes `diagnostics.csv`, snapshots, the
/// final state and plot scripts. A diverged run still leaves its partial CSV.
pub fn simulate(cfg: &RunConfig) -> Result<Report> {
    let (sys, s0) = setup(cfg)?;
    let dir = prepare_dir(cfg)?;
    let out = run(&sys, &s0, cfg.output.record_every, cfg.output.snapshot_every);
    let mut rep = Report::new("simulate");
    let csv = dir.join("diagnostics.csv");
    write_diagnostics(&csv, &out.rows)?;
    rep.files.push(csv.clone());
    if let Some(every) = cfg.output.snapshot_every {
        for (k, s) in out.snapshots.iter().enumerate() {
            let p = dir.join(format!("snapshot_{:08}.msw", k * every));
            snapshot::save(&p, s)?;
            rep.files.push(p);
        }
    }
    if let Some(e) = out.error {
        return Err(e.into());
    }
    let fin = dir.join("final.msw");
    snapshot::save(&fin, &out.final_state)?;
    rep.files.push(fin);
    rep.files.extend(emit_plots(&csv)?);
    if let (Some(first), Some(last)) = (out.rows.first(), out.rows.last()) {
        rep.line(format!("rows: {}", out.rows.len()));
        rep.line(format!("t: {} -> {}", first.t, last.t));
        rep.line(format!("Q: {:.12e} -> {:.12e}", first.charge, last.charge));
        rep.line(format!(
            "canonical energy: {:.12e} -> {:.12e}",
            first.canonical_energy, last.canonical_energy
        ));
        rep.line(format!("||X||^2: {:.6e} -> {:.6e}", first.x_norm_sq, last.x_norm_sq));
    }
    Ok(rep)
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<Report> {
    let (sys, s0) = setup(cfg)?;
    let dir = prepare_dir(cfg)?;
    let mut rep = Report::new(format!("verify {}", suite.name()));
    match suite {
        Suite::Charge => verify_charge(cfg, &sys, &s0, &mut rep)?,
        Suite::Conservation => verify_conservation(cfg, &sys, &s0, &dir, &mut rep)?,
        Suite::Lyapunov => verify_lyapunov(cfg, &sys, &s0, &dir, &mut rep)?,
        Suite::Absorbing => verify_absorbing(cfg, &sys, &s0, &dir, &mut rep)?,
        Suite::Gradcheck => verify_gradcheck(cfg, &sys, &s0, &mut rep)?,
    }
    write_report(&dir, &format!("verify_{}", suite.name()), &mut rep)?;
    Ok(rep)
}

fn write_report(dir: &Path, stem: &str, rep: &mut Report) -> Result<()> {
    let p = dir.join(format!("{stem}.txt"));
    rep.files.push(p.clone());
    std::fs::write(&p, format!("{rep}\n")).map_err(|e| CliError::io(&p, e))
}

fn verify_charge(cfg: &RunConfig, sys: &System, s0: &State, rep: &mut Report) -> Result<()> {
    let p = sys.params;
    if p.epsilon <= 0.0 && p.gamma <= 0.0 {
        return Err(CliError::invalid(
            "params.epsilon",
            "the charge suite needs epsilon > 0 or gamma > 0",
        ));
    }
    rep.line("charge law: dQ/dt = -2 eps E - 2 gamma E Q, and Q(t) <= Q(0)");
    let mut residuals = Vec::new();
    let mut finest = None;
    for level in 0..cfg.verify.refinements {
        let dt = p.dt / f64::from(1u32 << level);
        let s = with_params(sys, Params { dt, ..p })?;
        let out = run(&s, s0, 1, None);
        if let Some(e) = out.error {
            return Err(e.into());
        }
        let res = charge_residual(&out.rows, p.epsilon, p.gamma)?;
        let inc = max_charge_increase(&out.rows);
        rep.line(format!("dt = {dt:.4e}: residual {res:.4e}, largest step increase of Q {inc:.3e}"));
        rep.check(
            format!("Q nonincreasing at dt = {dt:.4e}"),
            inc <= 1e-10,
            format!("max increase {inc:.3e} <= 1e-10"),
        );
        residuals.push(res);
        finest = Some((s, out.rows));
    }
    for w in residuals.windows(2) {
        let order = measured_order(w[0], w[1]);
        rep.check("residual order", order >= 3.5, format!("measured {order:.3} >= 3.5"));
    }
    let (s, rows) = finest.expect("at least two levels");
    match charge_ode_oracle(&s, s0) {
        Ok(o) => {
            let rel = rows
                .iter()
                .map(|r| ((r.charge - o.q(r.t)) / o.q(r.t)).abs())
                .fold(0.0, f64::max);
            rep.check(
                "closed-form charge oracle",
                rel < 1e-5,
                format!("max relative error {rel:.3e} < 1e-5 at dt = {:.4e}", s.params.dt),
            );
        }
        Err(e) => rep.line(format!("closed-form oracle not applicable: {e}")),
    }
    Ok(())
}

fn verify_conservation(
    cfg: &RunConfig,
    sys: &System,
    s0: &State,
    dir: &Path,
    rep: &mut Report,
) -> Result<()> {
    if !sys.pump.is_static() {
        return Err(CliError::invalid("pump", "the conservation suite needs omega = 0 for every term"));
    }
    let p = sys.params;
    if p.sigma != 0.0 || p.epsilon != 0.0 || p.gamma != 0.0 {
        rep.line("sigma, epsilon and gamma set to zero for this suite");
    }
    let s = with_params(
        sys,
        Params {
            sigma: 0.0,
            epsilon: 0.0,
            gamma: 0.0,
            ..p
        },
    )?;
    let out = run(&s, s0, cfg.output.record_every, None);
    if let Some(e) = out.error {
        return Err(e.into());
    }
    let csv = dir.join("conservation.csv");
    write_diagnostics(&csv, &out.rows)?;
    rep.files.push(csv);
    let e0 = out.rows[0].canonical_energy;
    let h0 = out.rows[0].hamiltonian_paper;
    let drift = |f: &dyn Fn(&msdd_core::Row) -> f64, base: f64| {
        out.rows
            .iter()
            .map(|r| (f(r) - base).abs() / base.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    };
    let dc = drift(&|r| r.canonical_energy, e0);
    let dp = drift(&|r| r.hamiltonian_paper, h0);
    rep.line(format!("canonical energy at t = 0: {e0:.12e}"));
    rep.line(format!("printed Hamiltonian functional drift (reported only): {dp:.3e}"));
    rep.check(
        "canonical energy conserved",
        dc < cfg.verify.drift_tol,
        format!("relative drift {dc:.3e} < {:.1e} over T = {}", cfg.verify.drift_tol, p.t_final),
    );
    Ok(())
}

fn verify_lyapunov(
    cfg: &RunConfig,
    sys: &System,
    s0: &State,
    dir: &Path,
    rep: &mut Report,
) -> Result<()> {
    let out = run(sys, s0, cfg.output.record_every, None);
    if let Some(e) = out.error {
        return Err(e.into());
    }
    let csv = dir.join("lyapunov.csv");
    write_diagnostics(&csv, &out.rows)?;
    rep.files.push(csv.clone());
    rep.files.extend(emit_plots(&csv)?);
    let t: Vec<f64> = out.rows.iter().map(|r| r.t).collect();
    let phi: Vec<f64> = out.rows.iter().map(|r| r.phi).collect();
    let fit = lyapunov_fit(&t, &phi)?;
    rep.line("envelope: Phi(t) <= Phi(0) exp(-beta t) + C_p / beta");
    rep.line(format!(
        "beta = {:.6e}, C_p = {:.6e}, C_p / beta = {:.6e}",
        fit.beta, fit.c_p, fit.plateau
    ));
    let worst = t
        .iter()
        .zip(&phi)
        .map(|(ti, p)| p - fit.envelope(phi[0], ti - t[0]))
        .fold(f64::NEG_INFINITY, f64::max);
    rep.check("decay rate", fit.beta > 0.0 && !fit.degenerate, format!("beta = {:.4e} > 0", fit.beta));
    rep.check("forcing constant", fit.c_p.is_finite(), format!("C_p = {:.4e} finite", fit.c_p));
    rep.check(
        "envelope dominates",
        worst <= 1e-12 * phi[0].abs().max(1.0),
        format!("max of Phi minus envelope {worst:.3e} <= 0"),
    );
    let c1 = [s0, &out.final_state]
        .iter()
        .filter_map(|s| current_ratio(sys, s))
        .fold(0.0, f64::max);
    if c1 > 0.0 {
        let c2 = 0.5 * c1 * c1;
        let f = lyapunov_feasibility(sys.params.sigma, sys.params.gamma, c2);
        rep.line(format!(
            "measured C1 = {c1:.4e}, C2 = {c2:.4e}; parameter condition {} (eta = {:.4e}, delta = {:.4e}, margin = {:.4e})",
            if f.feasible { "feasible" } else { "infeasible" },
            f.eta,
            f.delta,
            f.margin
        ));
    }
    Ok(())
}

fn verify_absorbing(
    cfg: &RunConfig,
    sys: &System,
    s0: &State,
    dir: &Path,
    rep: &mut Report,
) -> Result<()> {
    let radii = &cfg.verify.radii;
    let positive: Vec<f64> = radii.iter().copied().filter(|r| *r > 0.0).collect();
    if positive.len() > 1 {
        let lo = positive.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = positive.iter().copied().fold(0.0, f64::max);
        if hi / lo < 100.0 {
            return Err(CliError::invalid("verify.radii", "radii must span at least two decades"));
        }
    }
    let base = x_norm_sq(sys, s0).sqrt();
    if base == 0.0 && radii.iter().any(|r| *r > 0.0) {
        return Err(CliError::invalid("initial", "the initial state sets the direction and must be nonzero"));
    }
    let r = absorbing_experiment(sys, s0, radii, cfg.output.record_every)?;
    let mut tables = Vec::new();
    for (i, tr) in r.trajectories.iter().enumerate() {
        let p = dir.join(format!("ensemble_{i}.csv"));
        write_table(
            &p,
            &["t", "x_norm_sq"],
            tr.times.iter().zip(&tr.x_norm_sq).map(|(t, x)| vec![*t, *x]),
        )?;
        rep.line(format!(
            "R = {:.3e}: terminal {:.6e}, entry time {}{}",
            tr.radius,
            tr.terminal,
            tr.entry_time.map_or("never".to_string(), |t| format!("{t:.4}")),
            tr.error.as_ref().map_or(String::new(), |e| format!(", halted: {e}"))
        ));
        tables.push(p);
    }
    rep.files.extend(tables.iter().cloned());
    rep.files.push(emit_ensemble_plot(&tables, &dir.join("ensemble.gp"))?);
    rep.line(format!("common bound B = {:.6e}; ball radius 2B", r.b_hat));
    let diverged = r.trajectories.iter().filter(|t| t.error.is_some()).count();
    rep.check("all runs finite", diverged == 0, format!("{diverged} diverged"));
    rep.check("common terminal bound", r.spread < 0.2, format!("relative spread {:.4} < 0.2", r.spread));
    rep.check("entry order", r.entry_monotone, "entry times nondecreasing in R");
    rep.check("absorption", r.all_stay, "no trajectory leaves the 2B ball after entry");
    Ok(())
}

fn verify_gradcheck(cfg: &RunConfig, sys: &System, s0: &State, rep: &mut Report) -> Result<()> {
    let g = grad_check(sys, s0, cfg.verify.fd_step, cfg.verify.directions, cfg.params.seed)?;
    rep.line(format!(
        "relative errors by block: A {:.3e}, Pi {:.3e}, Re psi {:.3e}, Im psi {:.3e}",
        g.a, g.pi, g.psi_re, g.psi_im
    ));
    rep.check(
        "energy gradient",
        g.max_rel_err < 1e-6,
        format!("max relative error {:.3e} < 1e-6 at step {:.1e}", g.max_rel_err, cfg.verify.fd_step),
    );
    rep.check(
        "gradient of sum |grad A_k|^2 equals -2 Laplace A",
        g.field_gradient < 1e-8,
        format!("relative error {:.3e} < 1e-8", g.field_gradient),
    );
    rep.check(
        "right-hand side in Hamiltonian form",
        g.rhs_consistency < 1e-10,
        format!("mismatch {:.3e} < 1e-10", g.rhs_consistency),
    );
    Ok(())
}

fn spectrum_field(cfg: &RunConfig, d: &Domain) -> Result<Vector> {
    Ok(match cfg.spectrum.field {
        FieldSource::Zero => Vector::zeros(d, BasisFamily::MaxwellVector),
        FieldSource::Initial => cfg.initial_state(d)?.a,
    })
}

pub fn spectrum(cfg: &RunConfig, task: Task) -> Result<Report> {
    let sys = cfg.system()?;
    let d = &sys.domain;
    let dir = prepare_dir(cfg)?;
    let mut rep = Report::new(format!("spectrum {}", task.name()));
    match task {
        Task::LambdaMin => {
            let lm = lambda_min(d);
            let it = lambda_min_lanczos(d, 1e-10, cfg.params.seed)?;
            rep.line("<A, Lambda A> >= lambda_min ||A||^2 and ||A||^2 <= C ||grad A||^2 with C = 1 / lambda_min");
            rep.line(format!(
                "lambda_min = {:.12e} at mode {:?}, amplitude {:?}",
                lm.value, lm.mode, lm.pattern
            ));
            rep.line(format!("C = {:.12e}", lm.poincare_constant()));
            rep.check("positive", lm.value > 0.0, format!("{:.6e} > 0", lm.value));
            let diff = (lm.value - it).abs();
            rep.check(
                "iterative eigensolve agrees",
                diff < 1e-8,
                format!("Lanczos {it:.12e}, difference {diff:.2e} < 1e-8"),
            );
        }
        Task::Equivalence => {
            if d.modes().iter().any(|n| *n > 12) {
                return Err(CliError::invalid("domain.modes", "equivalence needs at most 12 modes per axis"));
            }
            let a = spectrum_field(cfg, d)?;
            let orders: &[EquivalenceOrder] = match cfg.spectrum.order {
                OrderName::H1 => &[EquivalenceOrder::H1],
                OrderName::H2 => &[EquivalenceOrder::H2],
                OrderName::Both => &[EquivalenceOrder::H1, EquivalenceOrder::H2],
            };
            rep.line("H1: c1 ||psi||_H1^2 <= ||D psi||^2 + ||psi||^2 <= c2 ||psi||_H1^2");
            rep.line("H2: c1 ||psi||_H2^2 <= ||H psi||^2 + ||psi||^2 <= c2 ||psi||_H2^2");
            rep.line("(the squared sum (||D psi|| + ||psi||)^2 lies within a factor 2 of these forms)");
            for &order in orders {
                for &alpha in &cfg.spectrum.alphas {
                    let pot = (order == EquivalenceOrder::H2).then_some(&sys.potentials.phi);
                    let r = rayleigh_equivalence(d, &a.scaled(alpha), pot, order)?;
                    let label = format!("{order:?} alpha = {alpha}");
                    rep.line(format!(
                        "{label}: ||A||_H1 = {:.4e}, c1 = {:.10e}, c2 = {:.10e}",
                        r.a_h1_norm, r.c1, r.c2
                    ));
                    rep.check(
                        label.clone(),
                        r.c1 > 0.0 && r.c2.is_finite(),
                        format!("0 < {:.4e} <= {:.4e} < inf", r.c1, r.c2),
                    );
                    if order == EquivalenceOrder::H1 && r.a_h1_norm == 0.0 {
                        let off = (r.c1 - 1.0).abs().max((r.c2 - 1.0).abs());
                        rep.check(
                            format!("{label}: identity at A = 0"),
                            off <= 1e-12,
                            format!("|c - 1| = {off:.2e} <= 1e-12"),
                        );
                    }
                }
            }
        }
        Task::RelativeBound => {
            let a = spectrum_field(cfg, d)?;
            rep.line("|<u, T u>| <= delta <u, (1 - Laplace) u> + C_delta ||u||^2 with T = 2i A.grad + |A|^2");
            let mut prev: Option<f64> = None;
            let mut deltas = cfg.spectrum.deltas.clone();
            deltas.sort_by(|x, y| y.total_cmp(x));
            let zero = a.max_abs() == 0.0;
            for delta in deltas {
                let b = relative_bound_t(d, &a, delta)?;
                rep.line(format!(
                    "delta = {delta}: C_delta = {:.10e}, asymmetry {:.2e}",
                    b.c_delta, b.asymmetry
                ));
                rep.check(
                    format!("delta = {delta}"),
                    b.c_delta.is_finite() && b.asymmetry < cfg.spectrum.tol,
                    format!("C_delta finite, asymmetry {:.2e} < {:.1e}", b.asymmetry, cfg.spectrum.tol),
                );
                if zero {
                    rep.check(format!("delta = {delta}: A = 0"), b.c_delta == 0.0, "C_delta = 0");
                }
                if let Some(p) = prev {
                    rep.check(
                        format!("delta = {delta}: monotone"),
                        b.c_delta >= p,
                        format!("{:.4e} >= {p:.4e}", b.c_delta),
                    );
                }
                prev = Some(b.c_delta);
            }
        }
    }
    write_report(&dir, &format!("spectrum_{}", task.name()), &mut rep)?;
    Ok(rep)
}

/// Reads a snapshot, checks it against `cfg` when given, prints a summary and
/// optionally writes it back out.
pub fn snapshot_cmd(input: &Path, output: Option<&Path>, cfg: Option<&RunConfig>) -> Result<Report> {
    let raw = snapshot::read_raw(input)?;
    let domain = match cfg {
        Some(c) => c.domain()?,
        None => Domain::new([1.0; 3], raw.modes)?,
    };
    let state = snapshot::into_state(&raw, &domain)?;
    let mut rep = Report::new("snapshot");
    rep.line(format!("file: {}", input.display()));
    rep.line(format!("modes: {:?}, t = {}", raw.modes, raw.t));
    rep.line(format!("coefficients: {}", raw.data.len()));
    rep.line(format!(
        "||A||^2 = {:.12e}, ||Pi||^2 = {:.12e}, Q = {:.12e}",
        state.a.norm_sq(),
        state.pi.norm_sq(),
        state.psi.norm_sq()
    ));
    if let Some(out) = output {
        snapshot::save(out, &state)?;
        rep.files.push(out.to_path_buf());
    }
    Ok(rep)
}
