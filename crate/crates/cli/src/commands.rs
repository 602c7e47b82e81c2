//! Subcommand implementations. Each writes into the configured output
//! directory, starting with the resolved configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Serialize;
use wavecharge::energy::{audit_chain_with_shift, AuditStepId};
use wavecharge::fields::FieldState;
use wavecharge::snapshot::{write_slice_csv, write_snapshot};
use wavecharge::{
    attraction_experiment, soliton_energy, to_grid, Integrator, IntegratorConfig, Lattice, ParticleState,
    PhaseState, SolitonParams, TrajectoryRecord, Vec3,
};

use crate::config::{InitialState, RunConfig};

/// Error raised when a simulation exceeds its drift budget.
#[derive(Debug)]
pub struct DriftExceeded {
    pub max_drift: f64,
    pub budget: f64,
}

impl std::fmt::Display for DriftExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "energy drift {:e} exceeds budget {:e}", self.max_drift, self.budget)
    }
}

impl std::error::Error for DriftExceeded {}

fn prepare(cfg: &RunConfig) -> anyhow::Result<PathBuf> {
    let dir = cfg.output.directory.clone();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("resolved_config.toml"), cfg.resolved_toml()?)?;
    Ok(dir)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn vec_fields(v: &Vec3) -> String {
    format!("{:.16e},{:.16e},{:.16e}", v.x, v.y, v.z)
}

#[derive(Serialize)]
struct SolitonSummary {
    v: Vec3,
    a: Vec3,
    p_v: Vec3,
    lambda: f64,
    h_quadrature: f64,
    h_grid: f64,
    energy_grid: wavecharge::EnergyBreakdown,
}

pub fn cmd_soliton(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = prepare(cfg)?;
    let f = cfg.form_factor()?;
    let s = SolitonParams::new(cfg.scenario.soliton.v, cfg.scenario.soliton.a)?;
    let lattice = Lattice::new(&f, cfg.grid_spec()?)?;
    let y = lattice.soliton_state(&s);
    let energy = lattice.hamiltonian(&y, &wavecharge::Potential::Zero);
    let report = soliton_energy(&f, &s.v)?;
    write_json(
        &dir.join("soliton.json"),
        &SolitonSummary {
            v: s.v,
            a: s.a,
            p_v: s.momentum(),
            lambda: s.lambda(),
            h_quadrature: report.h_total,
            h_grid: energy.total,
            energy_grid: energy,
        },
    )?;
    let grid_field = to_grid(&y.field);
    let mut out = create(&dir.join("soliton_slice.csv"))?;
    write_slice_csv(&mut out, &grid_field)?;
    out.flush()?;
    if cfg.output.snapshots {
        let mut out = create(&dir.join("soliton.snap"))?;
        write_snapshot(&mut out, &grid_field)?;
        out.flush()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AuditSummary {
    rows: usize,
    delta_rho: f64,
    asserted_steps_pass: bool,
    min_margin_s1: f64,
    min_margin_s2: f64,
    min_margin_s3: f64,
    min_margin_s5: f64,
    s4_margins: Vec<f64>,
    reports: Vec<wavecharge::AuditReport>,
}

pub fn cmd_audit(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = prepare(cfg)?;
    let f = cfg.form_factor()?;
    let sc = &cfg.scenario.audit;
    let n = sc.direction.norm();
    if !(n > 0.0) {
        bail!("audit direction must be nonzero");
    }
    let e = sc.direction / n;
    let reports = sc
        .speeds
        .iter()
        .map(|&s| audit_chain_with_shift(&f, &(e * s), &sc.shift))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = create(&dir.join("audit.csv"))?;
    writeln!(
        out,
        "speed,t_pi,t_grad,c_cross,c_unshifted,delta_rho,kinetic,h_total,margin_s1,margin_s2,margin_s3,margin_s4,margin_s5"
    )?;
    for r in &reports {
        let c_unshifted = r.c_unshifted.map_or(f64::NAN, |c| c.value);
        write!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.v.norm(),
            r.t_pi,
            r.t_grad,
            r.c_cross,
            c_unshifted,
            r.delta_rho,
            r.kinetic,
            r.h_total
        )?;
        for step in &r.steps {
            write!(out, ",{:.16e}", step.margin)?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    let min_margin = |id| {
        reports
            .iter()
            .map(|r| r.step(id).margin)
            .fold(f64::INFINITY, f64::min)
    };
    write_json(
        &dir.join("audit_summary.json"),
        &AuditSummary {
            rows: reports.len(),
            delta_rho: f.delta_rho(),
            asserted_steps_pass: reports.iter().all(|r| r.asserted_pass()),
            min_margin_s1: min_margin(AuditStepId::S1),
            min_margin_s2: min_margin(AuditStepId::S2),
            min_margin_s3: min_margin(AuditStepId::S3),
            min_margin_s5: min_margin(AuditStepId::S5),
            s4_margins: reports.iter().map(|r| r.step(AuditStepId::S4).margin).collect(),
            reports,
        },
    )?;
    Ok(())
}

/// Initial state of the simulate scenario.
pub fn initial_state(cfg: &RunConfig, lattice: &Lattice) -> anyhow::Result<PhaseState> {
    let sc = &cfg.scenario.simulate;
    let g = *lattice.grid();
    let mut y = match sc.initial {
        InitialState::Stationary { q } => lattice.stationary_state(&q),
        InitialState::Soliton { v, a } => lattice.soliton_state(&SolitonParams::new(v, a)?),
        InitialState::Density { eps, q } => PhaseState {
            field: FieldState::from_psi(g, lattice.density_field(&q, -eps))?,
            particle: ParticleState::at_rest(q),
        },
        InitialState::Vacuum { q } => PhaseState {
            field: FieldState::zeros(g),
            particle: ParticleState::at_rest(q),
        },
    };
    y.particle.p += sc.p0;
    Ok(y)
}

fn simulate_run(cfg: &RunConfig, dt: f64) -> anyhow::Result<(Lattice, TrajectoryRecord)> {
    let f = cfg.form_factor()?;
    let lattice = Lattice::new(&f, cfg.grid_spec()?)?;
    let y0 = initial_state(cfg, &lattice)?;
    let icfg = IntegratorConfig { dt, ..cfg.integrator };
    let record = Integrator::new(lattice.clone(), cfg.potential, dt)?.run(&y0, &icfg)?;
    Ok((lattice, record))
}

#[derive(Serialize)]
struct SimulateSummary {
    dt: f64,
    t_end: f64,
    steps: usize,
    max_drift: f64,
    final_drift: f64,
    drift_budget: f64,
    sup_qdot: f64,
    reduced_steps: usize,
    horizon_budget: f64,
}

pub fn cmd_simulate(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = prepare(cfg)?;
    let (_, record) = simulate_run(cfg, cfg.integrator.dt)?;
    let mut out = create(&dir.join("trajectory.csv"))?;
    writeln!(
        out,
        "t,qx,qy,qz,px,py,pz,qdot,kinetic,potential,field_pi,field_grad,interaction,h_total,drift"
    )?;
    for pt in &record.points {
        let e = &pt.energy;
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            pt.t,
            vec_fields(&pt.q),
            vec_fields(&pt.p),
            pt.qdot_norm,
            e.kinetic,
            e.potential,
            e.field_pi,
            e.field_grad,
            e.interaction,
            e.total,
            pt.drift
        )?;
    }
    out.flush()?;
    let budget = cfg.scenario.simulate.drift_budget;
    write_json(
        &dir.join("simulate_summary.json"),
        &SimulateSummary {
            dt: cfg.integrator.dt,
            t_end: cfg.integrator.t_end,
            steps: cfg.integrator.steps(),
            max_drift: record.max_drift,
            final_drift: record.points.last().map_or(0.0, |p| p.drift),
            drift_budget: budget,
            sup_qdot: record.sup_qdot,
            reduced_steps: record.reduced_steps,
            horizon_budget: record.horizon_budget,
        },
    )?;
    if cfg.output.snapshots {
        let mut out = create(&dir.join("final.snap"))?;
        write_snapshot(&mut out, &to_grid(&record.final_state.field))?;
        out.flush()?;
    }
    if record.max_drift > budget {
        return Err(DriftExceeded {
            max_drift: record.max_drift,
            budget,
        }
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct ExperimentManifest<'a> {
    config: &'a RunConfig,
    summary: wavecharge::attraction::ExperimentSummary,
}

pub fn cmd_experiment(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = prepare(cfg)?;
    let f = cfg.form_factor()?;
    let output = attraction_experiment(&f, cfg.grid_spec()?, &cfg.scenario.experiment.to_config())?;
    let mut out = create(&dir.join("experiment.csv"))?;
    writeln!(
        out,
        "t,h_total,drift,dist_e,v_star_x,v_star_y,v_star_z,a_star_x,a_star_y,a_star_z,local_seminorm,floor"
    )?;
    for r in &output.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e}",
            r.t,
            r.h_total,
            r.drift,
            r.dist_e,
            vec_fields(&r.v_star),
            vec_fields(&r.a_star),
            r.local_seminorm,
            r.floor
        )?;
    }
    out.flush()?;
    write_json(
        &dir.join("experiment_manifest.json"),
        &ExperimentManifest {
            config: cfg,
            summary: output.summary,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct ConvergenceRow {
    dt: f64,
    max_drift: f64,
    final_drift: f64,
    ratio_to_previous: Option<f64>,
}

pub fn cmd_convergence(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = prepare(cfg)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &dt in &cfg.scenario.convergence.dts {
        let (_, record) = simulate_run(cfg, dt)?;
        let ratio = rows.last().map(|prev| prev.max_drift / record.max_drift);
        rows.push(ConvergenceRow {
            dt,
            max_drift: record.max_drift,
            final_drift: record.points.last().map_or(0.0, |p| p.drift),
            ratio_to_previous: ratio,
        });
    }
    let mut out = create(&dir.join("convergence.csv"))?;
    writeln!(out, "dt,max_drift,final_drift,ratio_to_previous")?;
    for r in &rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.dt,
            r.max_drift,
            r.final_drift,
            r.ratio_to_previous.unwrap_or(f64::NAN)
        )?;
    }
    out.flush()?;
    write_json(&dir.join("convergence.json"), &rows)?;
    Ok(())
}
