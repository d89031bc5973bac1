use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use spectral_core::verify::{self, Target};
use spectral_kit::cache::Cache;
use spectral_kit::corpus::{self, CorpusConfig};
use spectral_kit::error::KitError;
use spectral_kit::export::{self, Artifact};
use spectral_kit::formats::ReportJson;
use spectral_kit::parse::{module_arg, poset_arg, ring_arg};
use spectral_kit::run::{self, Instance, Limits, RunOptions};

#[derive(Parser)]
#[command(name = "spectral-kit", version, about = "Instance verification for spectral spaces of finite rings, modules and posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checkers on one ring, module or poset.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Checker names; all checkers for the instance kind when omitted.
        checkers: Vec<String>,
        /// Write the reports as JSON (`-` for stdout).
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        /// Write the Hasse diagram of the instance's default space.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the built-in corpus through every applicable checker.
    Corpus {
        /// Write the aggregate report as JSON (`-` for stdout).
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Drop corpus rings with more elements than this.
        #[arg(long, value_name = "N", default_value_t = 256)]
        max_ring_size: usize,
        /// Enumerate all posets up to this many points (at most 6).
        #[arg(long, value_name = "N", default_value_t = 5)]
        max_poset: usize,
        /// Number of seeded random posets.
        #[arg(long, value_name = "N", default_value_t = 100)]
        random_posets: usize,
        /// Print each failing report.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a Hasse diagram (hasse, lattice) or topology dump (topology).
    Export {
        #[command(flatten)]
        instance: InstanceArgs,
        /// hasse, lattice or topology.
        artifact: String,
        /// Output file (`-` for stdout).
        path: PathBuf,
        /// Which space to draw, e.g. id, rd, spec, smod, zariski, lower-vietoris.
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List the available checkers.
    ListCheckers {
        /// Only checkers for ring, module or poset instances.
        #[arg(long)]
        target: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InstanceArgs {
    /// Ring spec such as `Z/12`, `GF(2)[x]/(x^2)`, `Z/2 x F4` or JSON.
    #[arg(long)]
    ring: Option<String>,
    /// Module spec such as `Z/4 + Z/2` or `R + R/(x) over GF(2)[x]/(x^2)`, or JSON.
    #[arg(long)]
    module: Option<String>,
    /// Poset JSON file, inline JSON, `chainN` or `antichainN`.
    #[arg(long)]
    poset: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Include wall-clock times in JSON reports.
    #[arg(long)]
    timings: bool,
    /// Largest module (or ring) whose submodules are enumerated.
    #[arg(long, value_name = "N")]
    max_module_size: Option<usize>,
    /// Largest base space for hyperspace constructions.
    #[arg(long, value_name = "N")]
    max_hyper_base: Option<usize>,
    /// Largest poset the hyperspace suite runs on.
    #[arg(long, value_name = "N")]
    max_suite_poset: Option<usize>,
}

impl CommonArgs {
    fn options(&self, axiom_scan: bool) -> RunOptions {
        let d = Limits::default();
        RunOptions {
            limits: Limits {
                module: self.max_module_size.unwrap_or(d.module),
                hyper_base: self.max_hyper_base.unwrap_or(d.hyper_base),
                hyper_suite: self.max_suite_poset.unwrap_or(d.hyper_suite),
                maps: d.maps,
            },
            seed: self.seed,
            cache: Cache::from_env(),
            axiom_scan,
            timings: self.timings,
            ..RunOptions::default()
        }
    }
}

impl InstanceArgs {
    fn instance(&self) -> Result<Instance, KitError> {
        if let Some(r) = &self.ring {
            Ok(Instance::Ring(ring_arg(r)?))
        } else if let Some(m) = &self.module {
            Ok(Instance::Module(module_arg(m)?))
        } else if let Some(p) = &self.poset {
            Ok(Instance::poset(poset_arg(p)?))
        } else {
            Err(KitError::Usage("one of --ring, --module, --poset is required".into()))
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), KitError> {
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), KitError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(path, &text)
}

fn sizes_line(r: &ReportJson) -> String {
    r.sizes.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn print_report(r: &ReportJson) {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    println!("  {verdict} {:<16} {}", r.check, sizes_line(r));
    if let Some(w) = &r.witness {
        println!("       witness: {}", w.reason);
        if !w.items.is_empty() {
            println!("       items: {}", w.items.join(", "));
        }
    }
}

fn cmd_check(
    instance: &InstanceArgs,
    checkers: &[String],
    json: Option<&Path>,
    dot: Option<&Path>,
    common: &CommonArgs,
) -> Result<bool, KitError> {
    let inst = instance.instance()?;
    let opts = common.options(true);
    let outcomes = run::run_checks(&inst, checkers, &opts)?;
    let reports: Vec<ReportJson> = outcomes
        .into_iter()
        .map(|o| ReportJson::new(o.report, opts.timings.then_some(o.elapsed_ms)))
        .collect();
    let to_stdout = json.is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        println!("instance verification: {} ({})", inst.id(), inst.target().name());
        for r in &reports {
            print_report(r);
        }
    }
    if let Some(path) = json {
        write_json(path, &reports)?;
    }
    if let Some(path) = dot {
        write_out(path, &export::render(&inst, Artifact::Hasse, None, &opts)?)?;
    }
    Ok(reports.iter().all(|r| r.passed))
}

#[allow(clippy::too_many_arguments)]
fn cmd_corpus(
    json: Option<&Path>,
    jobs: Option<usize>,
    max_ring_size: usize,
    max_poset: usize,
    random_posets: usize,
    verbose: bool,
    common: &CommonArgs,
) -> Result<bool, KitError> {
    let cfg = CorpusConfig {
        max_ring_size,
        max_poset,
        random_posets,
        seed: common.seed,
        ..CorpusConfig::default()
    };
    let opts = common.options(false);
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(KitError::Usage("--jobs must be positive".into()));
    }
    let report = corpus::run_corpus(&cfg, &opts, jobs)?;
    let to_stdout = json.is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        println!("instance verification over the built-in corpus (seed {})", cfg.seed);
        for (kind, n) in &report.counts {
            println!("  {kind}: {n} instances");
        }
        println!("  checks: {}, failed: {}", report.checks, report.failed);
        if verbose {
            for r in report.failures() {
                println!("  {}", r.instance);
                print_report(r);
            }
        }
    }
    if let Some(path) = json {
        write_json(path, &report)?;
    }
    Ok(report.failed == 0)
}

fn cmd_list(target: Option<&str>) -> Result<bool, KitError> {
    let filter = match target {
        None => None,
        Some(t) => Some(
            corpus::target_of(t).ok_or_else(|| KitError::Usage(format!("unknown target {t:?}; expected ring, module or poset")))?,
        ),
    };
    for c in verify::CHECKERS {
        if filter.is_none_or(|t: Target| t == c.target) {
            println!("{:<16} {:<7} {}", c.name, c.target.name(), c.summary);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check {
            instance,
            checkers,
            json,
            dot,
            common,
        } => cmd_check(instance, checkers, json.as_deref(), dot.as_deref(), common),
        Command::Corpus {
            json,
            jobs,
            max_ring_size,
            max_poset,
            random_posets,
            verbose,
            common,
        } => cmd_corpus(json.as_deref(), *jobs, *max_ring_size, *max_poset, *random_posets, *verbose, common),
        Command::Export {
            instance,
            artifact,
            path,
            space,
            common,
        } => artifact.parse::<Artifact>().and_then(|a| {
            let inst = instance.instance()?;
            let text = export::render(&inst, a, space.as_deref(), &common.options(false))?;
            write_out(path, &text)?;
            Ok(true)
        }),
        Command::ListCheckers { target } => cmd_list(target.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("spectral-kit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
