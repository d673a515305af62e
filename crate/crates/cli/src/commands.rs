//! The four pipelines. Each builds its table in memory; the `cmd_*` wrappers
//! also write it.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use tcdyn_core::closedform::ClosedFormParams;
use tcdyn_core::engine::{run_to_order, PerturbativeSolution};
use tcdyn_core::propagator::{propagate, sample_times};

use crate::config::{Run, RunConfig};
use crate::error::Result;
use crate::output::Table;

pub const EXACT_HEADER: [&str; 4] = ["t_ns", "p_excite", "photon_exp", "norm"];
pub const PERTURB_HEADER: [&str; 3] = ["t_ns", "p_excite", "norm_truncated"];
pub const COMPARE_HEADER: [&str; 6] = ["t_ns", "p_exact", "p_pert", "p_closedform", "abs_diff_pert", "abs_diff_cf"];
pub const SWEEP_HEADER: [&str; 4] = ["switch_ratio", "sup_abs_diff", "max_p_pert", "max_p_exact"];

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    /// Rows whose closed-form cell was left empty by the resonance guard.
    pub guarded_rows: usize,
    pub summary: Option<Summary>,
}

impl Report {
    fn plain(table: Table) -> Self {
        Report { table, guarded_rows: 0, summary: None }
    }

    pub fn write(&self, out: &Path) -> Result<()> {
        self.table.write_file(out)
    }
}

/// Sup and RMS of the comparison columns over the rows where they exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub sup_pert: f64,
    pub rms_pert: f64,
    pub sup_cf: Option<f64>,
    pub rms_cf: Option<f64>,
}

fn sup_rms(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (mut n, mut sup, mut sq) = (0usize, 0.0f64, 0.0f64);
    for v in values {
        n += 1;
        sup = sup.max(v);
        sq += v * v;
    }
    (n > 0).then(|| (sup, (sq / n as f64).sqrt()))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "n/a".to_string());
        write!(
            f,
            "sup_abs_diff_pert={:.6e} rms_abs_diff_pert={:.6e} sup_abs_diff_cf={} rms_abs_diff_cf={}",
            self.sup_pert,
            self.rms_pert,
            opt(self.sup_cf),
            opt(self.rms_cf)
        )
    }
}

fn perturbative(run: &Run) -> Result<PerturbativeSolution> {
    Ok(run_to_order(&run.params, &run.schedule, run.order, run.t_final)?)
}

pub fn exact(cfg: &RunConfig) -> Result<Report> {
    let run = cfg.run()?;
    let traj = propagate(&run.params, &run.schedule, run.t_final, run.sample_dt)?;
    let mut table = Table::new(&EXACT_HEADER);
    for s in &traj.samples {
        table.push(vec![
            Some(s.t),
            Some(s.state.excitation_probability(run.qubit)?),
            Some(s.state.photon_expectation()),
            Some(s.state.norm()),
        ]);
    }
    Ok(Report::plain(table))
}

pub fn perturb(cfg: &RunConfig) -> Result<Report> {
    let run = cfg.run()?;
    let sol = perturbative(&run)?;
    let mut table = Table::new(&PERTURB_HEADER);
    for t in sample_times(run.t_final, run.sample_dt) {
        let psi = sol.state_at(t)?;
        table.push(vec![Some(t), Some(psi.excitation_probability(run.qubit)?), Some(psi.norm())]);
    }
    Ok(Report::plain(table))
}

pub fn compare(cfg: &RunConfig) -> Result<Report> {
    let run = cfg.run()?;
    let traj = propagate(&run.params, &run.schedule, run.t_final, run.sample_dt)?;
    let sol = perturbative(&run)?;
    let space = run.params.space();
    let closed = (space.n_qubits() == 2 && space.n_max() >= 1 && run.order >= 2)
        .then(|| ClosedFormParams::from_system(&run.params, &run.schedule))
        .transpose()?;
    let mut table = Table::new(&COMPARE_HEADER);
    let mut guarded_rows = 0;
    for s in &traj.samples {
        let p_exact = s.state.excitation_probability(run.qubit)?;
        let p_pert = sol.excitation_probability(run.qubit, s.t)?;
        let p_cf = match &closed {
            Some(cf) => match cf.state(s.t) {
                Ok(psi) => Some(psi.excitation_probability(run.qubit)?),
                Err(tcdyn_core::Error::Resonance { .. } | tcdyn_core::Error::DegenerateFrequencies) => {
                    guarded_rows += 1;
                    None
                }
                Err(e) => return Err(e.into()),
            },
            None => None,
        };
        table.push(vec![
            Some(s.t),
            Some(p_exact),
            Some(p_pert),
            p_cf,
            Some((p_exact - p_pert).abs()),
            p_cf.map(|p| (p_exact - p).abs()),
        ]);
    }
    let diff_pert = table.column("abs_diff_pert").unwrap();
    let diff_cf = table.column("abs_diff_cf").unwrap();
    let (sup_pert, rms_pert) = sup_rms(diff_pert.into_iter().flatten()).unwrap_or((0.0, 0.0));
    let cf = sup_rms(diff_cf.into_iter().flatten());
    let summary = Summary { sup_pert, rms_pert, sup_cf: cf.map(|c| c.0), rms_cf: cf.map(|c| c.1) };
    Ok(Report { table, guarded_rows, summary: Some(summary) })
}

/// One sweep point: exact and perturbative curves at `ratio`, reduced to
/// `[ratio, sup|p_exact − p_pert|, max p_pert, max p_exact]`.
pub fn sweep_point(cfg: &RunConfig, ratio: f64) -> Result<[f64; 4]> {
    let run = cfg.with_switch_ratio(ratio).run()?;
    let traj = propagate(&run.params, &run.schedule, run.t_final, run.sample_dt)?;
    let sol = perturbative(&run)?;
    let (mut sup, mut max_pert, mut max_exact) = (0.0f64, 0.0f64, 0.0f64);
    for s in &traj.samples {
        let p_exact = s.state.excitation_probability(run.qubit)?;
        let p_pert = sol.excitation_probability(run.qubit, s.t)?;
        sup = sup.max((p_exact - p_pert).abs());
        max_pert = max_pert.max(p_pert);
        max_exact = max_exact.max(p_exact);
    }
    Ok([ratio, sup, max_pert, max_exact])
}

pub fn sweep(cfg: &RunConfig) -> Result<Report> {
    let mut rows = cfg.sweep_ratios().into_par_iter().map(|r| sweep_point(cfg, r)).collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut table = Table::new(&SWEEP_HEADER);
    for row in rows {
        table.push(row.iter().copied().map(Some).collect());
    }
    Ok(Report::plain(table))
}

pub fn cmd_exact(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let report = exact(cfg)?;
    report.write(out)?;
    Ok(report)
}

pub fn cmd_perturb(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let report = perturb(cfg)?;
    report.write(out)?;
    Ok(report)
}

pub fn cmd_compare(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let report = compare(cfg)?;
    report.write(out)?;
    Ok(report)
}

pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let report = sweep(cfg)?;
    report.write(out)?;
    Ok(report)
}
