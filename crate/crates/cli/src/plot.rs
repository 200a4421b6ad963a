//! Plot-data emission: small CSV files meant for external plotting tools.
//! Each kind computes the curve it needs from the config potential, reusing
//! the grids of the config's tasks where that makes sense.

use crate::config::{RunConfig, TaskSpec};
use crate::report::Emitter;
use clap::ValueEnum;
use ssf_core::oracle::GridOracle;
use ssf_core::potential::Potential;
use ssf_core::radial3d;
use ssf_core::scattering1d as s1d;
use ssf_core::tracelab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Shift function over energy.
    Ssf,
    /// Modulus and phase of the boundary determinant over energy.
    LogDet,
    /// Scattering phases over momentum.
    Phase,
    /// Heat-trace residual of the grid route against the exact series,
    /// as the mesh is refined; the residual column decreases monotonically.
    ResidualSweep,
}

fn task_grid(cfg: &RunConfig) -> Vec<f64> {
    for t in &cfg.tasks {
        if let TaskSpec::Ssf { grid } = t {
            return grid.clone();
        }
    }
    (0..7).map(|i| 0.25 * 2f64.powi(i)).collect()
}

fn task_time(cfg: &RunConfig) -> f64 {
    for t in &cfg.tasks {
        if let TaskSpec::Heat { times, .. } = t {
            return times[0];
        }
    }
    0.05
}

pub fn emit(kind: PlotKind, cfg: &RunConfig, p: &Potential, em: &Emitter) -> Result<String, String> {
    match kind {
        PlotKind::Ssf => ssf_plot(cfg, p, em),
        PlotKind::LogDet => log_det_plot(cfg, p, em),
        PlotKind::Phase => phase_plot(cfg, p, em),
        PlotKind::ResidualSweep => residual_sweep_plot(cfg, p, em),
    }
}

fn ssf_plot(cfg: &RunConfig, p: &Potential, em: &Emitter) -> Result<String, String> {
    let grid = task_grid(cfg);
    let rows: Vec<Vec<String>> = match p.dim() {
        1 => {
            let curve = s1d::ssf_1d(p, &grid).map_err(|e| e.to_string())?;
            curve
                .lambda
                .iter()
                .zip(&curve.xi)
                .map(|(l, x)| vec![em.cell(*l), em.cell(*x)])
                .collect()
        }
        3 => {
            let curve = radial3d::ssf_3d(p, &grid).map_err(|e| e.to_string())?;
            curve
                .lambda
                .iter()
                .zip(&curve.xi)
                .map(|(l, x)| vec![em.cell(*l), em.cell(*x)])
                .collect()
        }
        d => return Err(format!("no shift-function route in dimension {d}")),
    };
    let path = em.csv("plot_ssf.csv", &["lambda", "xi"], &rows)?;
    Ok(path.display().to_string())
}

fn log_det_plot(cfg: &RunConfig, p: &Potential, em: &Emitter) -> Result<String, String> {
    if p.dim() != 1 {
        return Err("determinant curves are one-dimensional".into());
    }
    let curve = s1d::ssf_1d(p, &task_grid(cfg)).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = curve
        .lambda
        .iter()
        .zip(&curve.det)
        .map(|(l, d)| {
            vec![
                em.cell(*l),
                em.cell(d.norm().ln()),
                em.cell(d.arg()),
            ]
        })
        .collect();
    let path = em.csv("plot_log_det.csv", &["lambda", "log_abs_det", "arg_det"], &rows)?;
    Ok(path.display().to_string())
}

fn phase_plot(cfg: &RunConfig, p: &Potential, em: &Emitter) -> Result<String, String> {
    let ks: Vec<f64> = task_grid(cfg).iter().map(|l| l.sqrt()).collect();
    match p.dim() {
        1 => {
            // transmission phase: arg 1/a, continued from the top where a -> 1
            let mut rows = Vec::new();
            let mut prev = 0.0f64;
            for &k in ks.iter().rev() {
                let a = s1d::jost_solve(p, k).map_err(|e| e.to_string())?.a;
                let mut ph = -a.arg();
                while ph - prev > std::f64::consts::PI {
                    ph -= 2.0 * std::f64::consts::PI;
                }
                while prev - ph > std::f64::consts::PI {
                    ph += 2.0 * std::f64::consts::PI;
                }
                prev = ph;
                rows.push(vec![em.cell(k), em.cell(ph)]);
            }
            rows.reverse();
            let path = em.csv("plot_phase.csv", &["k", "transmission_phase"], &rows)?;
            Ok(path.display().to_string())
        }
        3 => {
            let l_top = 4u32;
            let mut columns: Vec<Vec<f64>> = Vec::new();
            for l in 0..=l_top {
                columns.push(radial3d::phase_shifts_on_grid(p, l, &ks).map_err(|e| e.to_string())?);
            }
            let header: Vec<String> = std::iter::once("k".to_string())
                .chain((0..=l_top).map(|l| format!("delta_{l}")))
                .collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = ks
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    std::iter::once(em.cell(*k))
                        .chain(columns.iter().map(|c| em.cell(c[i])))
                        .collect()
                })
                .collect();
            let path = em.csv("plot_phase.csv", &header_refs, &rows)?;
            Ok(path.display().to_string())
        }
        d => Err(format!("no phase-shift route in dimension {d}")),
    }
}

fn residual_sweep_plot(cfg: &RunConfig, p: &Potential, em: &Emitter) -> Result<String, String> {
    if p.dim() != 1 {
        return Err("the mesh sweep uses the one-dimensional grid route".into());
    }
    let t = task_time(cfg);
    let (series, _) = tracelab::heat_series_1d(p, t).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for &mesh in &[0.2, 0.1, 0.05, 0.025, 0.0125] {
        let oracle = GridOracle::build_1d(p, 12.5, mesh).map_err(|e| e.to_string())?;
        let residual = (oracle.heat_trace_diff(t) - series).abs();
        rows.push(vec![em.cell(mesh), em.cell(residual)]);
    }
    let path = em.csv("plot_residual_sweep.csv", &["mesh", "residual"], &rows)?;
    Ok(path.display().to_string())
}
