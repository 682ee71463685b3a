//! Experiment drivers: fidelity scans, scaling fits, dynamics traces and
//! gate budgets, plus their CSV and manifest output.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::ion::{compile_plan, GateCounts};
use crate::jw::jw_hamiltonian;
use crate::linalg::DEFAULT_DENSE_LIMIT;
use crate::models::{
    build_hubbard, build_kondo, build_tunneling, HubbardSpec, KondoSpec, TunnelingSpec,
};
use crate::pauli::PauliSum;
use crate::sim::{
    evolve_exact, evolve_trotter, fidelity, prepare_occupation_state, uniform_grid,
    EvolutionResult, ExactEvolver, StateVector,
};
use crate::trotter::{make_plan, make_plan_ordered};

/// Points on the exact-evolution time grid.
pub const EXACT_GRID_POINTS: usize = 200;

/// Gate total above which a run is flagged as beyond near-term hardware.
pub const DEFAULT_GATE_THRESHOLD: usize = 1000;

/// Source of the fermionic Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Hubbard(HubbardSpec),
    Kondo(KondoSpec),
    Tunneling(TunnelingSpec),
    File { path: PathBuf },
}

impl ModelSpec {
    pub fn build(&self) -> Result<FermionHamiltonian> {
        match self {
            ModelSpec::Hubbard(s) => build_hubbard(s),
            ModelSpec::Kondo(s) => build_kondo(s),
            ModelSpec::Tunneling(s) => build_tunneling(s),
            ModelSpec::File { path } => FermionHamiltonian::load(path),
        }
    }

    /// One-line description for CSV headers.
    pub fn describe(&self) -> String {
        match self {
            ModelSpec::Hubbard(s) => format!(
                "hubbard sites={} w={} u={} range={}",
                s.n_sites, s.w, s.u, s.neighbor_range
            ),
            ModelSpec::Kondo(s) => format!(
                "kondo momenta={:?} epsilons={:?} j={} impurities={:?}",
                s.momenta, s.epsilons, s.j, s.impurity_positions
            ),
            ModelSpec::Tunneling(s) => format!(
                "tunneling modes={} from={} to={} g={}",
                s.n_modes, s.from, s.to, s.g
            ),
            ModelSpec::File { path } => format!("file {}", path.display()),
        }
    }
}

fn default_order() -> u8 {
    1
}

fn default_dense_limit() -> usize {
    DEFAULT_DENSE_LIMIT
}

fn default_threshold() -> usize {
    DEFAULT_GATE_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub t_final: f64,
    pub n_trotter: Vec<usize>,
    #[serde(default = "default_order")]
    pub order: u8,
    /// Modes occupied in the initial basis state.
    #[serde(default)]
    pub initial_occupied: Vec<usize>,
    /// Modes whose occupation is recorded. Empty means all modes.
    #[serde(default)]
    pub observables: Vec<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Seed for randomized diagnostics only.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dense_limit")]
    pub dense_limit: usize,
    #[serde(default = "default_threshold")]
    pub gate_threshold: usize,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, t_final: f64, n_trotter: Vec<usize>) -> Self {
        Self {
            model,
            t_final,
            n_trotter,
            order: 1,
            initial_occupied: Vec::new(),
            observables: Vec::new(),
            out_dir: None,
            seed: 0,
            dense_limit: DEFAULT_DENSE_LIMIT,
            gate_threshold: DEFAULT_GATE_THRESHOLD,
        }
    }
}

/// Everything derived from a validated config.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub fermions: FermionHamiltonian,
    pub qubit: PauliSum,
    pub psi0: StateVector,
    pub modes: Vec<usize>,
}

/// Builds the model, maps it and checks every referenced mode.
pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    if !cfg.t_final.is_finite() || cfg.t_final < 0.0 {
        return Err(Error::Precondition(format!(
            "t_final must be finite and non-negative, got {}",
            cfg.t_final
        )));
    }
    if cfg.n_trotter.contains(&0) {
        return Err(Error::Precondition("n_T values must be positive".into()));
    }
    let fermions = cfg.model.build()?;
    let qubit = jw_hamiltonian(&fermions)?;
    let n_modes = fermions.n_modes;
    for &m in cfg.initial_occupied.iter().chain(&cfg.observables) {
        if m == 0 || m > n_modes {
            return Err(Error::IndexOutOfRange {
                what: "mode",
                index: m,
                max: n_modes,
            });
        }
    }
    let psi0 = prepare_occupation_state(&cfg.initial_occupied, qubit.n_qubits(), cfg.dense_limit)?;
    let modes = if cfg.observables.is_empty() {
        (1..=n_modes).collect()
    } else {
        cfg.observables.clone()
    };
    Ok(Prepared {
        fermions,
        qubit,
        psi0,
        modes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub n_trotter: usize,
    pub fidelity: f64,
}

/// Final-time fidelity between exact and product-formula evolution for
/// every configured `n_T`, ordered by `n_T`.
pub fn run_fidelity_scan(cfg: &ExperimentConfig) -> Result<Vec<ScanPoint>> {
    let p = prepare(cfg)?;
    let exact = ExactEvolver::new(&p.qubit, cfg.dense_limit)?.state_at(&p.psi0, cfg.t_final)?;
    let mut ns = cfg.n_trotter.clone();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            let plan = make_plan(&p.qubit, cfg.t_final, n, cfg.order)?;
            let r = evolve_trotter(&plan, &p.qubit, &p.psi0, false, &[])?;
            let last = r.final_state().expect("final state is recorded");
            Ok(ScanPoint {
                n_trotter: n,
                fidelity: fidelity(&exact, last)?,
            })
        })
        .collect()
}

/// Final-time fidelities at `n_T` for `count` random orderings of the
/// Hamiltonian terms. Deterministic for a fixed seed.
pub fn ordering_diagnostic(cfg: &ExperimentConfig, n_trotter: usize, count: usize) -> Result<Vec<f64>> {
    let p = prepare(cfg)?;
    let exact = ExactEvolver::new(&p.qubit, cfg.dense_limit)?.state_at(&p.psi0, cfg.t_final)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let orders: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut perm: Vec<usize> = (0..p.qubit.len()).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();
    orders
        .par_iter()
        .map(|perm| {
            let plan = make_plan_ordered(&p.qubit, cfg.t_final, n_trotter, cfg.order, perm)?;
            let r = evolve_trotter(&plan, &p.qubit, &p.psi0, false, &[])?;
            fidelity(&exact, r.final_state().expect("final state is recorded"))
        })
        .collect()
}

/// Parameters of `1 - F = C / n^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub c: f64,
    pub p: f64,
    /// Sum of squared fidelity residuals.
    pub residual: f64,
}

/// Least-squares fit of `F = 1 - C / n^p`. With `fix_exponent` the fit is
/// linear in `C`; otherwise `log(1 - F)` is regressed on `log n`.
pub fn fit_trotter_scaling(points: &[ScanPoint], fix_exponent: Option<f64>) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().all(|q| q.fidelity >= 1.0) {
        return Err(Error::Numerical(
            "degenerate scan: every fidelity is 1".into(),
        ));
    }
    if let Some(q) = points.iter().find(|q| q.fidelity >= 1.0 || q.n_trotter == 0) {
        return Err(Error::Precondition(format!(
            "fit point n_T={} F={} is outside the model's range",
            q.n_trotter, q.fidelity
        )));
    }
    let data: Vec<(f64, f64)> = points
        .iter()
        .map(|q| (q.n_trotter as f64, 1.0 - q.fidelity))
        .collect();
    let (c, p) = match fix_exponent {
        Some(p) => {
            let num: f64 = data.iter().map(|(n, e)| e * n.powf(-p)).sum();
            let den: f64 = data.iter().map(|(n, _)| n.powf(-2.0 * p)).sum();
            (num / den, p)
        }
        None => {
            let xs: Vec<f64> = data.iter().map(|(n, _)| n.ln()).collect();
            let ys: Vec<f64> = data.iter().map(|(_, e)| e.ln()).collect();
            let k = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / k;
            let my = ys.iter().sum::<f64>() / k;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            if sxx == 0.0 {
                return Err(Error::Precondition(
                    "free-exponent fit needs at least two distinct n_T".into(),
                ));
            }
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = sxy / sxx;
            ((my - slope * mx).exp(), -slope)
        }
    };
    let residual = data
        .iter()
        .map(|(n, e)| (e - c * n.powf(-p)).powi(2))
        .sum();
    Ok(FitResult { c, p, residual })
}

/// Exact curve plus one product-formula trace per `n_T`.
#[derive(Debug, Clone, Serialize)]
pub struct Dynamics {
    pub exact: EvolutionResult,
    pub trotter: Vec<(usize, EvolutionResult)>,
}

pub fn run_dynamics(cfg: &ExperimentConfig) -> Result<Dynamics> {
    let p = prepare(cfg)?;
    let grid = uniform_grid(cfg.t_final, EXACT_GRID_POINTS);
    let exact = evolve_exact(&p.qubit, &p.psi0, &grid, &p.modes, cfg.dense_limit)?;
    let ev = ExactEvolver::new(&p.qubit, cfg.dense_limit)?;
    let mut ns = cfg.n_trotter.clone();
    ns.sort_unstable();
    ns.dedup();
    let trotter = ns
        .par_iter()
        .map(|&n| {
            let plan = make_plan(&p.qubit, cfg.t_final, n, cfg.order)?;
            let mut r = evolve_trotter(&plan, &p.qubit, &p.psi0, true, &p.modes)?;
            r.compare_with_exact(&ev, &p.psi0)?;
            Ok((n, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dynamics { exact, trotter })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetRow {
    pub n_trotter: usize,
    pub per_step: GateCounts,
    pub total: GateCounts,
    pub exceeds_threshold: bool,
}

/// Gate counts of the compiled schedule for each `n_T`.
pub fn report_gate_budget(cfg: &ExperimentConfig) -> Result<Vec<BudgetRow>> {
    let fermions = cfg.model.build()?;
    let h = jw_hamiltonian(&fermions)?;
    let mut ns = cfg.n_trotter.clone();
    ns.sort_unstable();
    ns.dedup();
    ns.iter()
        .map(|&n| {
            let tau = cfg.t_final / n as f64;
            let step = compile_plan(&make_plan(&h, tau, 1, cfg.order)?, &h)?.counts();
            let total = compile_plan(&make_plan(&h, cfg.t_final, n, cfg.order)?, &h)?.counts();
            Ok(BudgetRow {
                n_trotter: n,
                per_step: step,
                total,
                exceeds_threshold: total.counted > cfg.gate_threshold,
            })
        })
        .collect()
}

/// Fixed 12-significant-digit float formatting used in every CSV.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

fn header(out: &mut String, lines: &[String]) {
    for l in lines {
        let _ = writeln!(out, "# {l}");
    }
}

pub fn scan_csv(cfg: &ExperimentConfig, points: &[ScanPoint], fit: Option<&FitResult>) -> String {
    let mut s = String::new();
    header(
        &mut s,
        &[
            format!("model: {}", cfg.model.describe()),
            format!("t_final: {}", cfg.t_final),
            format!("order: {}", cfg.order),
            format!("initial_occupied: {:?}", cfg.initial_occupied),
            "method: trotter-matrix vs exact".into(),
        ],
    );
    if let Some(f) = fit {
        header(
            &mut s,
            &[format!(
                "fit 1 - C/n^p: C={} p={} residual={}",
                fmt_f64(f.c),
                fmt_f64(f.p),
                fmt_f64(f.residual)
            )],
        );
    }
    s.push_str("n_trotter,fidelity\n");
    for q in points {
        let _ = writeln!(s, "{},{}", q.n_trotter, fmt_f64(q.fidelity));
    }
    s
}

/// Time series as CSV: time, one column per mode, then fidelity when present.
pub fn evolution_csv(cfg: &ExperimentConfig, r: &EvolutionResult, n_trotter: Option<usize>) -> String {
    let mut s = String::new();
    header(
        &mut s,
        &[
            format!("model: {}", cfg.model.describe()),
            format!("t_final: {}", cfg.t_final),
            format!(
                "n_trotter: {}",
                n_trotter.map_or_else(|| "-".to_string(), |n| n.to_string())
            ),
            format!("order: {}", cfg.order),
            format!("method: {}", r.method.tag()),
        ],
    );
    s.push_str("time");
    for m in &r.modes {
        let _ = write!(s, ",n{m}");
    }
    if r.fidelity_vs_exact.is_some() {
        s.push_str(",fidelity_vs_exact");
    }
    s.push('\n');
    for (k, t) in r.times.iter().enumerate() {
        s.push_str(&fmt_f64(*t));
        for series in &r.occupations {
            let _ = write!(s, ",{}", fmt_f64(series[k]));
        }
        if let Some(f) = &r.fidelity_vs_exact {
            let _ = write!(s, ",{}", fmt_f64(f[k]));
        }
        s.push('\n');
    }
    s
}

pub fn budget_csv(cfg: &ExperimentConfig, rows: &[BudgetRow]) -> String {
    let mut s = String::new();
    header(
        &mut s,
        &[
            format!("model: {}", cfg.model.describe()),
            format!("order: {}", cfg.order),
            "counted: MS + collective rotations + sandwiched local rotations".into(),
            "local_layer: exponentials of weight-one strings, reported separately".into(),
            format!("threshold: {}", cfg.gate_threshold),
        ],
    );
    s.push_str(
        "n_trotter,counted_per_step,local_layer_per_step,counted_total,local_layer_total,raw_total,exceeds_threshold\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.n_trotter,
            r.per_step.counted,
            r.per_step.local_layer,
            r.total.counted,
            r.total.local_layer,
            r.total.total_raw,
            r.exceeds_threshold
        );
    }
    s
}

/// Run manifest: config echo, crate version, wall time.
pub fn manifest(command: &str, cfg: &serde_json::Value, seconds: f64, outputs: &[String]) -> serde_json::Value {
    serde_json::json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "wall_seconds": seconds,
        "outputs": outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: f64, p: f64, ns: &[usize]) -> Vec<ScanPoint> {
        ns.iter()
            .map(|&n| ScanPoint {
                n_trotter: n,
                fidelity: 1.0 - c / (n as f64).powf(p),
            })
            .collect()
    }

    #[test]
    fn fit_recovers_exact_model() {
        let data = pts(0.5, 2.0, &[10, 20, 30, 40]);
        let free = fit_trotter_scaling(&data, None).unwrap();
        assert!((free.c - 0.5).abs() < 1e-9 && (free.p - 2.0).abs() < 1e-9);
        assert!(free.residual < 1e-20);
        let fixed = fit_trotter_scaling(&data, Some(2.0)).unwrap();
        assert!((fixed.c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_reproduces_its_own_model() {
        let data = pts(3.7, 1.6, &[5, 9, 14, 33]);
        let first = fit_trotter_scaling(&data, None).unwrap();
        let again = fit_trotter_scaling(&pts(first.c, first.p, &[5, 9, 14, 33]), None).unwrap();
        assert!((first.c - again.c).abs() < 1e-9 && (first.p - again.p).abs() < 1e-9);
    }

    #[test]
    fn fit_preconditions() {
        assert!(matches!(
            fit_trotter_scaling(&pts(0.5, 2.0, &[10, 20]), None),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            fit_trotter_scaling(&pts(0.0, 2.0, &[10, 20, 30]), None),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn huge_step_count_converges() {
        let mut cfg = ExperimentConfig::new(
            ModelSpec::Hubbard(HubbardSpec::new(2, 0.4, 1.0)),
            1.0,
            vec![10_000],
        );
        cfg.initial_occupied = vec![1, 2];
        let scan = run_fidelity_scan(&cfg).unwrap();
        assert!(scan[0].fidelity >= 1.0 - 1e-5);
    }

    #[test]
    fn empty_hamiltonian_budget_is_zero() {
        let dir = std::env::temp_dir().join("jwion_empty_budget.json");
        std::fs::write(&dir, r#"{"n_modes": 3, "terms": []}"#).unwrap();
        let cfg = ExperimentConfig::new(ModelSpec::File { path: dir.clone() }, 1.0, vec![1, 5]);
        let rows = report_gate_budget(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.total.total_raw == 0));
        let _ = std::fs::remove_file(dir);
    }

    #[test]
    fn bad_mode_is_rejected() {
        let mut cfg = ExperimentConfig::new(
            ModelSpec::Hubbard(HubbardSpec::new(1, 0.4, 1.0)),
            1.0,
            vec![1],
        );
        cfg.initial_occupied = vec![3];
        assert!(matches!(prepare(&cfg), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn csv_is_deterministic() {
        let mut cfg = ExperimentConfig::new(
            ModelSpec::Hubbard(HubbardSpec::new(2, 0.4, 1.0)),
            1.0,
            vec![4, 2],
        );
        cfg.initial_occupied = vec![1, 2];
        let a = scan_csv(&cfg, &run_fidelity_scan(&cfg).unwrap(), None);
        let b = scan_csv(&cfg, &run_fidelity_scan(&cfg).unwrap(), None);
        assert_eq!(a, b);
        assert!(a.contains("\n2,"));
    }
}
