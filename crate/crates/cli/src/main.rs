use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use decay_cli::config::{Family, RunConfig};
use decay_cli::suite::{self, CriterionReport, SuiteOptions};
use decay_cli::{figures, output, run};

#[derive(Parser)]
#[command(
    name = "decay",
    version,
    about = "Dissipative dynamics of cat and Gaussian states: sweeps, figure data and oracle validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a coherent superposition state over time.
    Css(StateRun),
    /// Sweep a displaced squeezed thermal state over time.
    Gss(StateRun),
    /// Fidelity between the evolved CSS and GSS over time.
    Fidelity(StateRun),
    /// Compare analytic results with the Fock-space oracle.
    OracleCompare {
        /// Named suite (default, css, gss, fidelity) instead of the configured states.
        #[arg(long)]
        suite: Option<String>,
        #[command(flatten)]
        run: StateRun,
    },
    /// Emit the data grid behind a figure.
    Figure {
        /// Figure tags; see --list.
        tags: Vec<String>,
        #[arg(long, conflicts_with = "tags")]
        all: bool,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value = "decay-figures")]
        out: PathBuf,
    },
    /// Run the acceptance criteria and write a JSON report.
    Validate {
        /// Criteria to run, e.g. 1,3,7; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value = "decay-validation")]
        out: PathBuf,
    },
}

#[derive(Args, Clone, Default)]
struct StateRun {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Number of time points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    pn_head: Option<usize>,
    /// Half width of the square (x, p) grid for the Wigner minimum.
    #[arg(long)]
    grid_half_width: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Real part of the CSS amplitude.
    #[arg(long, allow_hyphen_values = true)]
    beta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta0_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha0_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha0_im: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<f64>,
    #[arg(long)]
    nu0: Option<f64>,
}

impl StateRun {
    fn resolve(&self, family: Family) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.family = family;
        fn set<T: Copy>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.reservoir.omega, self.omega);
        set(&mut cfg.reservoir.k, self.k);
        set(&mut cfg.reservoir.nbar, self.nbar);
        set(&mut cfg.time.t_start, self.t_start);
        set(&mut cfg.time.t_end, self.t_end);
        set(&mut cfg.time.n_points, self.points);
        set(&mut cfg.pn_head, self.pn_head);
        if let Some(h) = self.grid_half_width {
            cfg.phase_grid.x_min = -h;
            cfg.phase_grid.x_max = h;
            cfg.phase_grid.p_min = -h;
            cfg.phase_grid.p_max = h;
        }
        set(&mut cfg.phase_grid.points_per_axis, self.grid_points);
        set(&mut cfg.css.beta0.re, self.beta0);
        set(&mut cfg.css.beta0.im, self.beta0_im);
        set(&mut cfg.css.theta, self.theta);
        set(&mut cfg.gss.alpha0.re, self.alpha0_re);
        set(&mut cfg.gss.alpha0.im, self.alpha0_im);
        set(&mut cfg.gss.r0, self.r0);
        set(&mut cfg.gss.phi0, self.phi0);
        set(&mut cfg.gss.nu0, self.nu0);
        if let Some(out) = &self.out {
            cfg.output = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run_family(args: &StateRun, family: Family, command: &str) -> Result<()> {
    let cfg = args.resolve(family)?;
    let out = run::run(&cfg)?;
    let manifest = output::write_output(&cfg.output, command, &out)?;
    // the resolved config, re-readable with --config
    std::fs::write(cfg.output.join("config.json"), cfg.to_json() + "\n")
        .with_context(|| format!("writing config to {}", cfg.output.display()))?;
    println!("{}", serde_json::to_string_pretty(&out.summary)?);
    for f in &manifest.files {
        eprintln!(
            "wrote {} ({} rows)",
            cfg.output.join(&f.file).display(),
            f.rows
        );
    }
    if family == Family::OracleCompare && out.summary["pass"] != serde_json::Value::Bool(true) {
        bail!("analytic and oracle results differ by more than the tolerance");
    }
    Ok(())
}

fn report(reports: &[CriterionReport], out: &Path) -> Result<()> {
    for r in reports {
        println!("{}", r.line());
        for n in &r.notes {
            println!("  note: {n}");
        }
    }
    std::fs::create_dir_all(out)?;
    let path = out.join("report.json");
    std::fs::write(&path, serde_json::to_string_pretty(reports)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    let failed: Vec<u8> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    if !failed.is_empty() {
        bail!("criteria {failed:?} failed; see {}", path.display());
    }
    Ok(())
}

fn suite_criteria(name: &str) -> Result<Vec<u8>> {
    Ok(match name {
        "default" => vec![1, 2, 6],
        "css" => vec![1],
        "gss" => vec![2],
        "fidelity" => vec![6],
        other => bail!("unknown suite `{other}`; choose default, css, gss or fidelity"),
    })
}

fn run_figures(tags: &[String], all: bool, list: bool, out: &Path) -> Result<()> {
    if list {
        figures::TAGS.iter().for_each(|t| println!("{t}"));
        return Ok(());
    }
    let chosen: Vec<String> = if all {
        figures::TAGS.iter().map(|t| t.to_string()).collect()
    } else if tags.is_empty() {
        bail!("name at least one figure tag, or pass --all or --list");
    } else {
        tags.to_vec()
    };
    for tag in &chosen {
        let start = Instant::now();
        let data = figures::render(tag)?;
        let manifest = output::write_output(
            &output::figure_dir(out, tag),
            &format!("figure {tag}"),
            &data,
        )
        .with_context(|| format!("figure {tag}"))?;
        for f in &manifest.files {
            println!(
                "{tag}: {} rows, sha256 {} ({:.2} s)",
                f.rows,
                f.sha256,
                start.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Css(a) => run_family(&a, Family::Css, "css"),
        Command::Gss(a) => run_family(&a, Family::Gss, "gss"),
        Command::Fidelity(a) => run_family(&a, Family::Fidelity, "fidelity"),
        Command::OracleCompare {
            suite: Some(name),
            run,
        } => {
            let ids = suite_criteria(&name)?;
            let opts = SuiteOptions {
                seed: run.seed.unwrap_or(SuiteOptions::default().seed),
                ..SuiteOptions::default()
            };
            let reports: Vec<CriterionReport> = ids
                .iter()
                .map(|&id| suite::run_criterion(id, &opts))
                .collect();
            report(
                &reports,
                &run.out.unwrap_or_else(|| PathBuf::from("decay-oracle")),
            )
        }
        Command::OracleCompare { suite: None, run } => {
            run_family(&run, Family::OracleCompare, "oracle-compare")
        }
        Command::Figure {
            tags,
            all,
            list,
            out,
        } => run_figures(&tags, all, list, &out),
        Command::Validate {
            criteria,
            seed,
            out,
        } => {
            let ids = if criteria.is_empty() {
                (1..=9).collect()
            } else {
                criteria
            };
            if let Some(bad) = ids.iter().find(|&&id| !(1..=9).contains(&id)) {
                bail!("criterion {bad} does not exist; criteria are numbered 1 to 9");
            }
            let opts = SuiteOptions {
                seed,
                figure_root: out.join("figures"),
            };
            let reports: Vec<CriterionReport> = ids
                .iter()
                .map(|&id| suite::run_criterion(id, &opts))
                .collect();
            report(&reports, &out)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
