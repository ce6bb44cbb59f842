//! `tempinf`: generate reduction instances, simulate schedules, solve,
//! verify properties and benchmark solvers.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or validation error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tempinf_core::objectives::summarize;
use tempinf_core::random::{random_graph, random_setcover, stream};
use tempinf_core::reductions::{gen_minnonviral_tree, gen_periodic_path, gen_spread_tree, gen_viral_tree, gen_window_star};
use tempinf_core::verify::{run_suite, Suite};
use tempinf_core::{
    parse_graph, serialize_graph, solve, DynamicsKind, ExactOptions, GeneratedInstance, Method, Objective,
    ProblemInstance, RunSummary, ScheduleConstraint, SetCoverInstance, SolveOptions, TransmissionSchedule,
    VertexCoverInstance, VertexSet, WindowRegime,
};

#[derive(Parser)]
#[command(name = "tempinf", version, about = "Influence maximization on temporal graphs with δ-counter spreading")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a hardness-reduction instance from a SetCover or VertexCover file.
    Generate(GenerateArgs),
    /// Run one schedule and report what it reaches.
    Simulate(SimulateArgs),
    /// Find a schedule with the exact, greedy or periodic FPT solver.
    Solve(SolveArgs),
    /// Run seeded property suites.
    Verify(VerifyArgs),
    /// Time solvers on generated instance families; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    SpreadTree,
    ViralTree,
    MinnonviralTree,
    WindowStar,
    PeriodicPath,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    Fixed,
    Shifting,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    reduction: Reduction,
    /// `sc` file for the tree and path reductions, `vc` file for window-star.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    delta: u32,
    /// Period of the periodic path.
    #[arg(long)]
    tmax: Option<usize>,
    /// Window regime of window-star.
    #[arg(long, value_enum, default_value = "fixed")]
    regime: Regime,
    /// Also emit the checkpoint (MaxViralTstep) objective for viral-tree.
    #[arg(long)]
    tstep: bool,
    /// Writes `<out>.tgft` and `<out>.cert.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InstanceArgs {
    /// TGF-T graph file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    source: usize,
    #[arg(long)]
    delta: u32,
    /// `renewal` or `sis`.
    #[arg(long, default_value = "renewal")]
    dynamics: DynamicsKind,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Comma-separated transmission steps; empty for none.
    #[arg(long, default_value = "")]
    schedule: String,
    /// Steps to simulate. Defaults to t_max, or the settled cycle on periodic graphs.
    #[arg(long)]
    horizon: Option<usize>,
    /// Checkpoint for the MaxViralTstep value.
    #[arg(long)]
    tstep: Option<usize>,
    /// Allowed inactive run for the MinNonViralTime feasibility flag.
    #[arg(long)]
    dgap: Option<usize>,
    /// Print `t: v1 v2 ...` per step instead of the JSON summary.
    #[arg(long)]
    dump: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MaxSpread,
    MaxViral,
    MaxViralTstep,
    MinNonViralTime,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    #[arg(long)]
    budget: usize,
    /// Decision target: reports `answer` = value ≥ k.
    #[arg(long)]
    k: Option<usize>,
    /// Checkpoint t* for max-viral-tstep.
    #[arg(long)]
    tstep: Option<usize>,
    /// Largest allowed run of inactive steps for min-non-viral-time.
    #[arg(long)]
    dgap: Option<usize>,
    /// `fixed:W` or `shifting:X,Y`.
    #[arg(long)]
    window: Option<ScheduleConstraint>,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Abort the exact solver above this many candidate schedules.
    #[arg(long)]
    candidate_cap: Option<u128>,
    /// Transmission horizon for exact MaxViral/MinNonViralTime on periodic graphs.
    #[arg(long)]
    tx_horizon: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `union`, `horizon`, `walk-oracle`, `reductions` or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Simulate with a broken decrement rule; the union suite must fail.
    /// Debug builds only.
    #[arg(long)]
    mutate: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Random,
    SpreadTree,
    Periodic,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// random: vertices (t_max = size); spread-tree: universe size;
    /// periodic: t_max.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "exact,greedy")]
    method: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instances per size.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    delta: u32,
    #[arg(long, default_value_t = 3)]
    budget: usize,
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: tempinf_core::Error| e.to_string())
}

/// Distinguishes property failures (exit 1) from everything else (exit 2).
struct PropertyFailure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(PropertyFailure)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = anyhow::Result<Result<(), PropertyFailure>>;

fn set_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let text = read(&a.input)?;
    let ctx = || format!("parsing {}", a.input.display());
    let mut g: GeneratedInstance = match a.reduction {
        Reduction::WindowStar => {
            let vc = VertexCoverInstance::parse(&text).with_context(ctx)?;
            let regime = match a.regime {
                Regime::Fixed => WindowRegime::Fixed,
                Regime::Shifting => WindowRegime::Shifting,
            };
            gen_window_star(&vc, a.delta, regime)?
        }
        r => {
            let sc = SetCoverInstance::parse(&text).with_context(ctx)?;
            match r {
                Reduction::SpreadTree => gen_spread_tree(&sc, a.delta)?,
                Reduction::ViralTree => gen_viral_tree(&sc, a.delta)?,
                Reduction::MinnonviralTree => gen_minnonviral_tree(&sc, a.delta)?,
                Reduction::PeriodicPath => {
                    let t = a.tmax.ok_or_else(|| anyhow!("periodic-path needs --tmax"))?;
                    gen_periodic_path(&sc, a.delta, t)?
                }
                Reduction::WindowStar => unreachable!(),
            }
        }
    };
    if a.tstep {
        g = g.tstep_variant().ok_or_else(|| anyhow!("--tstep needs a reduction with a checkpoint"))?;
    }
    let tgft = with_ext(&a.out, "tgft");
    let cert = with_ext(&a.out, "cert.json");
    fs::write(&tgft, serialize_graph(&g.problem.graph)).with_context(|| format!("writing {}", tgft.display()))?;
    fs::write(&cert, g.to_sidecar_json() + "\n").with_context(|| format!("writing {}", cert.display()))?;
    print_json(&json!({
        "graph": tgft,
        "certificate": cert,
        "vertices": g.problem.graph.n(),
        "t_max": g.problem.graph.t_max(),
        "answer": g.certificate.answer,
        "k": g.certificate.target_k,
        "budget": g.problem.budget,
        "objective": g.problem.objective,
    }))?;
    Ok(Ok(()))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn load_instance(a: &InstanceArgs, budget: usize, objective: Objective) -> anyhow::Result<ProblemInstance> {
    let graph = parse_graph(&read(&a.graph)?).with_context(|| format!("parsing {}", a.graph.display()))?;
    Ok(ProblemInstance::new(graph, a.source, a.delta, budget, objective)?.with_dynamics(a.dynamics))
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let schedule: TransmissionSchedule = a.schedule.parse()?;
    let inst = load_instance(&a.inst, schedule.len(), Objective::MaxSpread)?;
    let p = inst.process();
    let n = inst.graph.n();
    schedule.check_against(&inst.graph)?;

    if a.dump {
        let horizon = a.horizon.unwrap_or(inst.graph.t_max());
        let tr = p.simulate(&schedule, horizon)?;
        io::stdout().lock().write_all(tr.dump().as_bytes())?;
        return Ok(Ok(()));
    }

    let sum = match a.horizon {
        Some(h) => {
            let tr = p.simulate(&schedule, h)?;
            let mut s = RunSummary::new(n, inst.source, a.tstep);
            for t in 1..=h {
                s.observe(t, tr.active_at(t));
            }
            if let Some(ts) = a.tstep.filter(|&ts| ts > h) {
                bail!("--tstep {ts} lies beyond --horizon {h}");
            }
            s
        }
        None => {
            let obj = match a.tstep {
                Some(t_star) => Objective::MaxViralTstep { t_star },
                None => Objective::MaxSpread,
            };
            summarize(&p, &schedule, obj)?
        }
    };
    let mut objectives = serde_json::Map::new();
    let mut add = |o: Objective| {
        objectives.insert(o.name().into(), serde_json::to_value(sum.value(o)).expect("serializable"));
    };
    add(Objective::MaxSpread);
    add(Objective::MaxViral);
    if let Some(t_star) = a.tstep {
        add(Objective::MaxViralTstep { t_star });
    }
    if let Some(d_gap) = a.dgap {
        add(Objective::MinNonViralTime { d_gap });
    }
    let excl = |s: &VertexSet| s.count() - s.contains(inst.source) as usize;
    print_json(&json!({
        "schedule": schedule,
        "dynamics": a.inst.dynamics,
        "ever_active": excl(&sum.ever),
        "ever_active_vertices": sum.ever.to_vec(),
        "max_viral": sum.peak_excl,
        "argmax_t": sum.peak_t,
        "max_gap": sum.max_gap,
        "objectives": objectives,
    }))?;
    Ok(Ok(()))
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    set_threads(a.threads)?;
    let objective = match a.objective {
        ObjectiveArg::MaxSpread => Objective::MaxSpread,
        ObjectiveArg::MaxViral => Objective::MaxViral,
        ObjectiveArg::MaxViralTstep => Objective::MaxViralTstep {
            t_star: a.tstep.ok_or_else(|| anyhow!("max-viral-tstep needs --tstep"))?,
        },
        ObjectiveArg::MinNonViralTime => Objective::MinNonViralTime {
            d_gap: a.dgap.ok_or_else(|| anyhow!("min-non-viral-time needs --dgap"))?,
        },
    };
    let mut inst = load_instance(&a.inst, a.budget, objective)?;
    if let Some(w) = a.window {
        inst = inst.with_constraint(w);
        inst.validate()?;
    }
    let mut opts = SolveOptions::default();
    if let Some(cap) = a.candidate_cap {
        opts.exact.candidate_cap = cap;
    }
    opts.exact.periodic_tx_horizon = a.tx_horizon;
    let out = solve(&inst, a.method, &opts, a.k)?;
    print_json(&out)?;
    Ok(Ok(()))
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    set_threads(a.threads)?;
    if a.mutate && !cfg!(debug_assertions) {
        bail!("--mutate is only available in debug builds");
    }
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let mut reports = Vec::new();
    for s in suites {
        let start = Instant::now();
        let r = run_suite(s, a.seed, a.trials, a.mutate);
        if !a.json {
            println!(
                "{}: {}/{} passed ({:.2}s)",
                r.suite,
                r.passed,
                r.trials,
                start.elapsed().as_secs_f64()
            );
            for f in &r.failures {
                println!("  {f}");
            }
        }
        reports.push(r);
    }
    if a.json {
        print_json(&reports)?;
    }
    Ok(if reports.iter().all(|r| r.ok()) {
        Ok(())
    } else {
        Err(PropertyFailure)
    })
}

fn bench_instances(a: &BenchArgs, size: usize) -> anyhow::Result<Vec<ProblemInstance>> {
    let mut rng = stream(a.seed, &format!("bench-{size}"));
    (0..a.reps)
        .map(|_| match a.family {
            Family::Random | Family::Periodic => {
                let periodic = a.family == Family::Periodic;
                let (n, t) = if periodic { (6, size) } else { (size, size) };
                let g = random_graph(&mut rng, n, t, periodic, 0.3);
                let inst = ProblemInstance::new(g, 0, a.delta, a.budget, Objective::MaxSpread)?;
                Ok(inst)
            }
            Family::SpreadTree => {
                let mut sc = random_setcover(&mut rng, size, size.max(2) / 2 + 1);
                sc.b = sc.b.min(a.budget);
                Ok(gen_spread_tree(&sc, a.delta)?.problem)
            }
        })
        .collect()
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    set_threads(a.threads)?;
    let mut out = io::stdout().lock();
    writeln!(out, "family,size,rep,method,wall_ms,explored,value,best_value,gap")?;
    for &size in &a.sizes {
        for (rep, inst) in bench_instances(&a, size)?.into_iter().enumerate() {
            let opts = SolveOptions {
                exact: ExactOptions::default(),
                fpt_cap: None,
            };
            let rows: Vec<_> = a
                .method
                .iter()
                .map(|&m| (m, solve(&inst, m, &opts, None)))
                .collect();
            let best = rows
                .iter()
                .filter_map(|(_, r)| r.as_ref().ok()?.value.as_ref().map(|v| v.value_excl_source))
                .max();
            for (m, r) in rows {
                let family = a.family.to_possible_value().expect("no skipped variants");
                let method = serde_json::to_value(m)?;
                match r {
                    Ok(o) => {
                        let v = o.value.as_ref().map(|v| v.value_excl_source);
                        writeln!(
                            out,
                            "{},{size},{rep},{},{:.3},{},{},{},{}",
                            family.get_name(),
                            method.as_str().unwrap_or_default(),
                            o.wall_ms,
                            o.explored,
                            fmt_opt(v),
                            fmt_opt(best),
                            fmt_opt(best.zip(v).map(|(b, v)| b - v)),
                        )?;
                    }
                    Err(e) => {
                        eprintln!("{} size {size} rep {rep} {}: {e}", family.get_name(), method);
                        writeln!(out, "{},{size},{rep},{},,,,,", family.get_name(), method.as_str().unwrap_or_default())?;
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}
