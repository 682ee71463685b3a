//! `jwion` command-line driver.
//!
//! Exit codes: 0 success, 2 configuration error, 3 precondition violation,
//! 4 numerical-tolerance failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jwion::experiment::{
    budget_csv, evolution_csv, fit_trotter_scaling, fmt_f64, manifest, ordering_diagnostic, prepare,
    report_gate_budget, run_dynamics, run_fidelity_scan, scan_csv, ExperimentConfig, ModelSpec,
    EXACT_GRID_POINTS,
};
use jwion::ion::compile_plan;
use jwion::sim::{evolve_circuit_steps, evolve_exact, evolve_trotter, uniform_grid, ExactEvolver};
use jwion::trotter::{gate_count_bound, make_plan, norm_bound, BoundQuery};
use jwion::{jw_hamiltonian, Error, HubbardSpec, KondoSpec, TunnelingSpec};

#[derive(Parser, Debug)]
#[command(name = "jwion", version, about = "Fermion models to trapped-ion circuits, with dense verification")]
struct Cli {
    #[command(flatten)]
    model: ModelArgs,
    /// Directory for CSV/JSON outputs and the run manifest. Prints to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest register handled densely.
    #[arg(long, global = true, default_value_t = jwion::linalg::DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Hubbard,
    Kondo,
    Tunneling,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Fermionic Hamiltonian JSON file.
    #[arg(long, global = true, conflicts_with = "model")]
    hamiltonian: Option<PathBuf>,
    /// Experiment configuration JSON; its model overrides the model flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    model: Option<ModelKind>,
    /// Hubbard: number of sites.
    #[arg(long, global = true, default_value_t = 3)]
    sites: usize,
    /// Hubbard: hopping amplitude (signed).
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    w: f64,
    /// Hubbard: on-site interaction.
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    u: f64,
    /// Hubbard: hopping range in sites.
    #[arg(long, global = true, default_value_t = 1)]
    range: usize,
    /// Kondo: momenta, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    momenta: Vec<f64>,
    /// Kondo: kinetic energies, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    epsilons: Vec<f64>,
    /// Kondo: exchange coupling.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    j: f64,
    /// Kondo: impurity positions, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    impurities: Vec<f64>,
    /// Tunneling: register size in modes.
    #[arg(long, global = true, default_value_t = 10)]
    modes: usize,
    /// Tunneling: source and destination mode.
    #[arg(long, global = true, num_args = 2, value_names = ["FROM", "TO"])]
    hop: Option<Vec<usize>>,
    /// Tunneling: amplitude.
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    g: f64,
}

#[derive(Args, Debug, Clone)]
struct Schedule {
    /// Total evolution time.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Product-formula order (1 or 2).
    #[arg(long, default_value_t = 1)]
    order: u8,
}

#[derive(Args, Debug, Clone)]
struct Initial {
    /// Modes occupied at t = 0, comma separated.
    #[arg(long, value_delimiter = ',')]
    occupied: Vec<usize>,
    /// Modes whose occupation is reported (default: all).
    #[arg(long = "observe", value_delimiter = ',')]
    observe: Vec<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SimMethod {
    Exact,
    TrotterMatrix,
    TrotterCircuit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FitKind {
    None,
    Free,
    Quadratic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map the model to a Pauli sum.
    Map {
        /// Also write the fermionic Hamiltonian as JSON.
        #[arg(long)]
        save_hamiltonian: bool,
    },
    /// Emit the product-formula schedule.
    Plan {
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Compile the schedule into MS-gate circuits and count gates.
    Compile {
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Evaluate the exponential-count bound.
    Bound {
        /// Number of summands (default: non-identity strings of the model).
        #[arg(long)]
        m: Option<usize>,
        /// Norm bound (default: sum of absolute coefficients).
        #[arg(long)]
        h_norm: Option<f64>,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Evolve and record occupations.
    Simulate {
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        initial: Initial,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SimMethod::TrotterMatrix)]
        method: SimMethod,
        /// Grid points for the exact method.
        #[arg(long, default_value_t = EXACT_GRID_POINTS)]
        points: usize,
    },
    /// Final-time fidelity against exact evolution for several step counts.
    FidelityScan {
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        initial: Initial,
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,35,40,45,50,55,60")]
        steps: Vec<usize>,
        #[arg(long, value_enum, default_value_t = FitKind::Free)]
        fit: FitKind,
        /// Also report fidelities of this many random term orderings at the smallest step count.
        #[arg(long, default_value_t = 0)]
        random_orders: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact curves plus product-formula points for several step counts.
    Dynamics {
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        initial: Initial,
        #[arg(long, value_delimiter = ',', default_value = "15,30,45,60")]
        steps: Vec<usize>,
    },
    /// Gate counts per step and in total.
    GateBudget {
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long, value_delimiter = ',', default_value = "1,10")]
        steps: Vec<usize>,
        #[arg(long, default_value_t = jwion::experiment::DEFAULT_GATE_THRESHOLD)]
        threshold: usize,
    },
}

/// CLI failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::InvalidTerm(_) => 2,
            Error::Numerical(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn model_spec(args: &ModelArgs) -> Result<ModelSpec, Failure> {
    if let Some(path) = &args.hamiltonian {
        return Ok(ModelSpec::File { path: path.clone() });
    }
    match args.model {
        None => Err(config_error("no model: pass --model, --hamiltonian or --config")),
        Some(ModelKind::Hubbard) => Ok(ModelSpec::Hubbard(HubbardSpec {
            n_sites: args.sites,
            w: args.w,
            u: args.u,
            neighbor_range: args.range,
        })),
        Some(ModelKind::Kondo) => Ok(ModelSpec::Kondo(KondoSpec {
            momenta: args.momenta.clone(),
            epsilons: args.epsilons.clone(),
            j: args.j,
            impurity_positions: args.impurities.clone(),
        })),
        Some(ModelKind::Tunneling) => {
            let hop = args.hop.clone().unwrap_or_else(|| vec![1, args.modes]);
            Ok(ModelSpec::Tunneling(TunnelingSpec {
                n_modes: args.modes,
                from: hop[0],
                to: hop[1],
                g: args.g,
            }))
        }
    }
}

/// Config from `--config` if given, else assembled from flags.
fn experiment_config(
    cli: &Cli,
    schedule: &Schedule,
    steps: Vec<usize>,
    initial: Option<&Initial>,
) -> Result<ExperimentConfig, Failure> {
    if let Some(path) = &cli.model.config {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        return Ok(cfg);
    }
    let mut cfg = ExperimentConfig::new(model_spec(&cli.model)?, schedule.t, steps);
    cfg.order = schedule.order;
    cfg.dense_limit = cli.dense_limit;
    if let Some(i) = initial {
        cfg.initial_occupied = i.occupied.clone();
        cfg.observables = i.observe.clone();
    }
    cfg.out_dir = cli.out.clone();
    Ok(cfg)
}

/// Collects named outputs, then writes them to `--out` or stdout.
struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
    started: Instant,
}

impl Sink {
    fn new(dir: Option<PathBuf>) -> Result<Self, Failure> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d).map_err(|e| config_error(format!("{}: {e}", d.display())))?;
        }
        Ok(Self {
            dir,
            written: Vec::new(),
            started: Instant::now(),
        })
    }

    fn emit(&mut self, name: &str, content: &str) -> Result<(), Failure> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                std::fs::write(&path, content).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                self.written.push(name.to_string());
            }
            None => {
                println!("## {name}");
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
            }
        }
        Ok(())
    }

    fn finish(self, command: &str, config: serde_json::Value) -> Result<(), Failure> {
        if let Some(d) = &self.dir {
            let m = manifest(command, &config, self.started.elapsed().as_secs_f64(), &self.written);
            let path: &Path = d.as_ref();
            std::fs::write(path.join("manifest.json"), serde_json::to_string_pretty(&m).expect("manifest serializes"))
                .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
            for w in &self.written {
                println!("wrote {}", path.join(w).display());
            }
        }
        Ok(())
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("value serializes")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut sink = Sink::new(cli.out.clone())?;
    let name;
    let echo;
    match &cli.command {
        Command::Map { save_hamiltonian } => {
            name = "map";
            let spec = model_spec(&cli.model)?;
            let f = spec.build()?;
            if *save_hamiltonian {
                sink.emit("hamiltonian.json", &f.to_json()?)?;
            }
            let h = jw_hamiltonian(&f)?;
            let mut summary = String::new();
            summary.push_str(&format!("# model: {}\n", spec.describe()));
            summary.push_str(&format!("# qubits: {}\n# strings: {}\n", h.n_qubits(), h.len()));
            summary.push_str(&format!("# strings of weight >= 2: {}\n", h.nonlocal_count()));
            summary.push_str(&format!("# weight histogram: {:?}\n", h.weight_histogram()));
            summary.push_str(&h.to_text());
            sink.emit("hamiltonian.pauli", &summary)?;
            echo = to_json(&spec);
        }
        Command::Plan { schedule, steps } => {
            name = "plan";
            let spec = model_spec(&cli.model)?;
            let h = jw_hamiltonian(&spec.build()?)?;
            let plan = make_plan(&h, schedule.t, *steps, schedule.order)?;
            let text = serde_json::to_string_pretty(&plan.to_json(&h)?).expect("plan serializes");
            sink.emit("plan.json", &text)?;
            echo = to_json(&spec);
        }
        Command::Compile { schedule, steps } => {
            name = "compile";
            let spec = model_spec(&cli.model)?;
            let h = jw_hamiltonian(&spec.build()?)?;
            let plan = make_plan(&h, schedule.t, *steps, schedule.order)?;
            let circuit = compile_plan(&plan, &h)?;
            let step = compile_plan(&make_plan(&h, schedule.t / *steps as f64, 1, schedule.order)?, &h)?.counts();
            let total = circuit.counts();
            let table = format!(
                "# counted: MS + collective rotations + sandwiched local rotations\n\
                 # local_layer: weight-one exponentials, reported separately\n\
                 scope,counted,local_layer,total_raw,ms\n\
                 per_step,{},{},{},{}\ntotal,{},{},{},{}\n",
                step.counted, step.local_layer, step.total_raw, step.ms,
                total.counted, total.local_layer, total.total_raw, total.ms
            );
            sink.emit("circuit.json", &serde_json::to_string_pretty(&circuit.to_json()).expect("circuit serializes"))?;
            sink.emit("gate_counts.csv", &table)?;
            echo = to_json(&spec);
        }
        Command::Bound { m, h_norm, t, epsilon, k } => {
            name = "bound";
            let (m, h_norm) = match (m, h_norm) {
                (Some(m), Some(n)) => (*m, *n),
                _ => {
                    let spec = model_spec(&cli.model)?;
                    let h = jw_hamiltonian(&spec.build()?)?;
                    let active = h.terms().filter(|t| !t.string.is_identity()).count();
                    (m.unwrap_or(active), h_norm.unwrap_or_else(|| norm_bound(&h)))
                }
            };
            let q = BoundQuery { m, h_norm, t: *t, epsilon: *epsilon, k: *k };
            let text = match gate_count_bound(&q) {
                Ok(b) => format!(
                    "m,h_norm,t,epsilon,k,validity_product,valid,bound\n{},{},{},{},{},{},true,{}\n",
                    m, fmt_f64(h_norm), fmt_f64(*t), fmt_f64(*epsilon), k, fmt_f64(q.validity_product()), fmt_f64(b)
                ),
                Err(e) => {
                    eprintln!("validity condition epsilon <= 1 <= 2 m 5^(k-1) ||H|| t fails");
                    return Err(e.into());
                }
            };
            sink.emit("bound.csv", &text)?;
            echo = to_json(&q);
        }
        Command::Simulate { schedule, initial, steps, method, points } => {
            name = "simulate";
            let cfg = experiment_config(cli, schedule, vec![*steps], Some(initial))?;
            let p = prepare(&cfg)?;
            let ev = ExactEvolver::new(&p.qubit, cfg.dense_limit)?;
            let n = cfg.n_trotter[0];
            let result = match method {
                SimMethod::Exact => {
                    evolve_exact(&p.qubit, &p.psi0, &uniform_grid(cfg.t_final, *points), &p.modes, cfg.dense_limit)?
                }
                SimMethod::TrotterMatrix => {
                    let plan = make_plan(&p.qubit, cfg.t_final, n, cfg.order)?;
                    let mut r = evolve_trotter(&plan, &p.qubit, &p.psi0, true, &p.modes)?;
                    r.compare_with_exact(&ev, &p.psi0)?;
                    r
                }
                SimMethod::TrotterCircuit => {
                    let tau = cfg.t_final / n as f64;
                    let step = compile_plan(&make_plan(&p.qubit, tau, 1, cfg.order)?, &p.qubit)?;
                    let mut r = evolve_circuit_steps(&step, n, tau, &p.psi0, &p.modes)?;
                    r.compare_with_exact(&ev, &p.psi0)?;
                    r
                }
            };
            let tag = (*method != SimMethod::Exact).then_some(n);
            sink.emit("simulation.csv", &evolution_csv(&cfg, &result, tag))?;
            echo = to_json(&cfg);
        }
        Command::FidelityScan { schedule, initial, steps, fit, random_orders, seed } => {
            name = "fidelity-scan";
            let mut cfg = experiment_config(cli, schedule, steps.clone(), Some(initial))?;
            cfg.seed = *seed;
            let points = run_fidelity_scan(&cfg)?;
            let fitted = match fit {
                FitKind::None => None,
                FitKind::Free => Some(fit_trotter_scaling(&points, None)?),
                FitKind::Quadratic => Some(fit_trotter_scaling(&points, Some(2.0))?),
            };
            sink.emit("fidelity_scan.csv", &scan_csv(&cfg, &points, fitted.as_ref()))?;
            if *random_orders > 0 {
                let n = *cfg.n_trotter.iter().min().expect("non-empty step list");
                let f = ordering_diagnostic(&cfg, n, *random_orders)?;
                let mut text = format!("# random term orderings at n_T={n}, seed {}\nsample,fidelity\n", cfg.seed);
                for (i, x) in f.iter().enumerate() {
                    text.push_str(&format!("{i},{}\n", fmt_f64(*x)));
                }
                sink.emit("ordering_diagnostic.csv", &text)?;
            }
            echo = to_json(&cfg);
        }
        Command::Dynamics { schedule, initial, steps } => {
            name = "dynamics";
            let cfg = experiment_config(cli, schedule, steps.clone(), Some(initial))?;
            let d = run_dynamics(&cfg)?;
            sink.emit("dynamics_exact.csv", &evolution_csv(&cfg, &d.exact, None))?;
            for (n, r) in &d.trotter {
                sink.emit(&format!("dynamics_trotter_{n}.csv"), &evolution_csv(&cfg, r, Some(*n)))?;
            }
            echo = to_json(&cfg);
        }
        Command::GateBudget { schedule, steps, threshold } => {
            name = "gate-budget";
            let mut cfg = experiment_config(cli, schedule, steps.clone(), None)?;
            cfg.gate_threshold = *threshold;
            let rows = report_gate_budget(&cfg)?;
            sink.emit("gate_budget.csv", &budget_csv(&cfg, &rows))?;
            echo = to_json(&cfg);
        }
    }
    sink.finish(name, echo)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
