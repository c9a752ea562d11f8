//! Argument parsing, config merging and dispatch.
//!
//! Every subcommand resolves its inputs into a [`Job`] (flags over config
//! over defaults, with every invalid field reported together) and then calls
//! exactly one library routine.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kasym_core::converge::{SweepGrid, Variant};
use kasym_core::kernel::{discrepancy_report, standard_grid, tkn_eval, FormMode, TknForm};
use kasym_core::pairing::{lemma1_dft_check, rough_expansion, sharp_expansion, Profile1d};
use kasym_core::quad::{pairing_exact, Extent, PrescriptionMode, QuadratureSpec};
use kasym_core::testfn::TestFunction;
use kasym_core::wavesolve::{solve_theorem2, RightHandSide, SymbolFactorization};

use crate::config::{
    load_config, FactorizationParams, FactorizationSpec, ProfileSpec, RunConfig, SubcommandName, TestFunctionSpec,
};
use crate::error::{CliError, CliResult, FieldError};
use crate::registry::factorization;
use crate::report::{
    destination, write_report, ExpansionReport, Format, Lemma1Report, PairReport, Report, SolveReport, TknReport,
    TknRow,
};
use crate::sweep::run_sweep;

/// Overrides the default output directory (standard output when unset).
pub const OUTPUT_DIR_ENV: &str = "KASYM_OUTPUT_DIR";

pub const DEFAULT_FUNCTION: &str = "xi1-gaussian";
pub const DEFAULT_A: f64 = 10.0;
pub const DEFAULT_NMAX: u32 = 3;
pub const DEFAULT_LEMMA1_GRID: usize = 4096;
pub const DEFAULT_LEMMA1_HALFWIDTH: f64 = 20.0;

#[derive(Debug, Parser)]
#[command(name = "kasym", version, about = "Asymptotics of the conical kernel distribution")]
pub struct Cli {
    /// Report file; defaults to $KASYM_OUTPUT_DIR/<subcommand>.<format>, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration; flags take precedence over its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed forms of the truncated kernel moments T_{k,N}(xi1).
    Tkn(TknArgs),
    /// Exact pairing of the kernel with a test function.
    Pair(PairArgs),
    /// Asymptotic expansion of the pairing.
    Expand(ExpandArgs),
    /// Expansion error against the exact pairing over a grid of cone parameters.
    Sweep(SweepArgs),
    /// Axis-moment check through the discrete Fourier transform.
    Lemma1(Lemma1Args),
    /// Printed against derived kernel forms, with a quadrature oracle.
    Discrepancy(DiscrepancyArgs),
    /// Solution of the model equation from a wave factorization.
    Solve(SolveArgs),
}

#[derive(Debug, Args, Default)]
pub struct TknArgs {
    #[arg(long)]
    pub k: Option<u32>,
    /// Truncation; `inf` for the whole line.
    #[arg(long = "N", allow_negative_numbers = true)]
    pub n_cut: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi1: Option<f64>,
    /// paper_literal, derived or both.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct PairArgs {
    /// Preset name or inline JSON description.
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// pv, plus_i0, minus_i0 or paper.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct ExpandArgs {
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    /// rough or sharp.
    #[arg(long)]
    pub variant: Option<String>,
    /// Coefficient forms of the sharp expansion: paper_literal or derived.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long = "a-list", value_delimiter = ',', allow_negative_numbers = true)]
    pub a_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
}

#[derive(Debug, Args, Default)]
pub struct Lemma1Args {
    #[arg(long)]
    pub k: Option<usize>,
    /// gaussian, shifted-gaussian, or inline JSON {center, scale, poly}.
    #[arg(long)]
    pub fn1d: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub halfwidth: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct DiscrepancyArgs {
    #[arg(long)]
    pub nmax: Option<u32>,
    /// CSV of `N,xi1` rows.
    #[arg(long = "grid-file")]
    pub grid_file: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SolveArgs {
    /// Registered factorization name.
    #[arg(long)]
    pub fact: Option<String>,
    /// Right-hand side as a test-function preset or inline JSON.
    #[arg(long)]
    pub rhs: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    /// CSV of `xi1,xi2` rows.
    #[arg(long = "points-file")]
    pub points_file: Option<PathBuf>,
}

/// Fully validated inputs of one subcommand.
#[derive(Debug, Clone)]
pub enum Job {
    Tkn {
        k: u32,
        n_cut: Extent,
        xi1: f64,
        modes: Vec<FormMode>,
    },
    Pair {
        f: TestFunction,
        a: f64,
        mode: PrescriptionMode,
    },
    Expand {
        f: TestFunction,
        a: f64,
        order: usize,
        variant: Variant,
        mode: FormMode,
    },
    Sweep {
        f: TestFunction,
        grid: SweepGrid,
    },
    Lemma1 {
        k: usize,
        profile: Profile1d,
        grid: usize,
        halfwidth: f64,
    },
    Discrepancy {
        nmax: u32,
        grid: Vec<(f64, f64)>,
    },
    Solve {
        name: String,
        fact: SymbolFactorization,
        rhs: TestFunction,
        order: usize,
        points: Vec<(f64, f64)>,
        mode: FormMode,
        s: f64,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Tkn { .. } => "tkn",
            Job::Pair { .. } => "pair",
            Job::Expand { .. } => "expand",
            Job::Sweep { .. } => "sweep",
            Job::Lemma1 { .. } => "lemma1",
            Job::Discrepancy { .. } => "discrepancy",
            Job::Solve { .. } => "solve",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub job: Job,
    pub spec: QuadratureSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Accumulates field errors so that all of them are reported at once.
#[derive(Default)]
struct Problems(Vec<FieldError>);

impl Problems {
    fn push(&mut self, field: &str, reason: impl Into<String>) {
        self.0.push(FieldError::new(field, reason));
    }

    fn take<T>(&mut self, r: Result<T, FieldError>) -> Option<T> {
        r.map_err(|e| self.0.push(e)).ok()
    }

    fn require<T>(&mut self, field: &str, v: Option<T>) -> Option<T> {
        if v.is_none() {
            self.push(field, "is required");
        }
        v
    }

    fn positive(&mut self, field: &str, v: f64) -> Option<f64> {
        if v.is_finite() && v > 0.0 {
            Some(v)
        } else {
            self.push(field, "must be finite and positive");
            None
        }
    }

    fn finish(self) -> CliResult<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(self.0))
        }
    }
}

/// Inline JSON when the text starts with `{`, else a preset name.
fn function_spec(text: String) -> Result<TestFunctionSpec, FieldError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| FieldError::new("fn", e.to_string()))
    } else {
        Ok(TestFunctionSpec::Preset(text))
    }
}

fn profile_spec(text: String) -> Result<ProfileSpec, FieldError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| FieldError::new("fn1d", e.to_string()))
    } else {
        Ok(ProfileSpec::Preset(text))
    }
}

fn prescription(field: &str, name: &str) -> Result<PrescriptionMode, FieldError> {
    PrescriptionMode::from_name(name)
        .ok_or_else(|| FieldError::new(field, format!("unknown mode {name:?}; expected pv, plus_i0, minus_i0 or paper")))
}

fn form_mode(field: &str, name: &str) -> Result<FormMode, FieldError> {
    FormMode::from_name(name)
        .ok_or_else(|| FieldError::new(field, format!("unknown mode {name:?}; expected paper_literal or derived")))
}

fn variant(name: &str) -> Result<Variant, FieldError> {
    Variant::from_name(name)
        .ok_or_else(|| FieldError::new("variant", format!("unknown variant {name:?}; expected rough or sharp")))
}

/// Builds the test function from `flag`, else the config's `test_function`,
/// else the default preset.
fn test_function(p: &mut Problems, flag: Option<String>, cfg: &RunConfig) -> Option<TestFunction> {
    let spec = match flag {
        Some(text) => p.take(function_spec(text))?,
        None => cfg
            .test_function
            .clone()
            .unwrap_or_else(|| TestFunctionSpec::Preset(DEFAULT_FUNCTION.into())),
    };
    p.take(spec.build("fn"))
}

/// Reads two-column numeric CSV; a first line that does not parse is taken
/// as a header.
pub fn read_pairs(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let parse_error = |message: String, line: Option<u64>| CliError::Parse {
            path: path.to_path_buf(),
            message,
            line: line.map(|l| l as usize),
            column: None,
        };
        let record = record.map_err(|e| parse_error(e.to_string(), e.position().map(|p| p.line())))?;
        let line = record.position().map(|p| p.line());
        if record.len() != 2 {
            return Err(parse_error(format!("expected 2 columns, found {}", record.len()), line));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push((x, y)),
            _ if i == 0 => {}
            _ => return Err(parse_error(format!("non-numeric row {:?}", record.iter().collect::<Vec<_>>()), line)),
        }
    }
    Ok(out)
}

/// Merges flags over the config (if any) and validates everything.
pub fn plan(cli: Cli) -> CliResult<Plan> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let mut p = Problems::default();

    let spec = cfg.quadrature.clone().unwrap_or_default();
    for e in spec.validation_errors() {
        p.push("quadrature", e.to_string());
    }

    let command = match cli.command {
        Some(c) => Some(c),
        None => cfg.subcommand.map(|name| match name {
            SubcommandName::Tkn => Command::Tkn(TknArgs::default()),
            SubcommandName::Pair => Command::Pair(PairArgs::default()),
            SubcommandName::Expand => Command::Expand(ExpandArgs::default()),
            SubcommandName::Sweep => Command::Sweep(SweepArgs::default()),
            SubcommandName::Lemma1 => Command::Lemma1(Lemma1Args::default()),
            SubcommandName::Discrepancy => Command::Discrepancy(DiscrepancyArgs::default()),
            SubcommandName::Solve => Command::Solve(SolveArgs::default()),
        }),
    };
    let Some(command) = command else {
        return Err(CliError::Usage(
            "no subcommand given on the command line or in the config".into(),
        ));
    };

    let job = match command {
        Command::Tkn(args) => tkn_job(&mut p, args, &cfg),
        Command::Pair(args) => pair_job(&mut p, args, &cfg),
        Command::Expand(args) => expand_job(&mut p, args, &cfg),
        Command::Sweep(args) => sweep_job(&mut p, args, &cfg),
        Command::Lemma1(args) => lemma1_job(&mut p, args, &cfg),
        Command::Discrepancy(args) => discrepancy_job(&mut p, args, &cfg)?,
        Command::Solve(args) => solve_job(&mut p, args, &cfg)?,
    };
    p.finish()?;
    Ok(Plan {
        job: job.expect("no problems implies a job"),
        spec,
        format: cli.format.or(cfg.format).unwrap_or_default(),
        out: cli.out.or(cfg.out),
    })
}

fn tkn_job(p: &mut Problems, args: TknArgs, cfg: &RunConfig) -> Option<Job> {
    let k = p.require("k", args.k.or(cfg.k));
    let n_cut = p.require("N", args.n_cut.or(cfg.n_cut)).and_then(|n| {
        if n == f64::INFINITY {
            Some(Extent::Infinite)
        } else {
            p.positive("N", n).map(Extent::Finite)
        }
    });
    let xi1 = p.require("xi1", args.xi1.or(cfg.xi1));
    if xi1.is_some_and(|x| !x.is_finite()) {
        p.push("xi1", "must be finite");
    }
    let modes = match args.mode.or(cfg.mode.clone()).as_deref() {
        None | Some("both") => Some(FormMode::ALL.to_vec()),
        Some(name) => p.take(form_mode("mode", name)).map(|m| vec![m]),
    };
    Some(Job::Tkn {
        k: k?,
        n_cut: n_cut?,
        xi1: xi1?,
        modes: modes?,
    })
}

fn pair_job(p: &mut Problems, args: PairArgs, cfg: &RunConfig) -> Option<Job> {
    let f = test_function(p, args.function, cfg);
    let a = p.positive("a", args.a.or(cfg.a).unwrap_or(DEFAULT_A));
    let mode = p.take(prescription("mode", args.mode.or(cfg.mode.clone()).as_deref().unwrap_or("paper")));
    Some(Job::Pair {
        f: f?,
        a: a?,
        mode: mode?,
    })
}

fn expand_job(p: &mut Problems, args: ExpandArgs, cfg: &RunConfig) -> Option<Job> {
    let f = test_function(p, args.function, cfg);
    let a = p.positive("a", args.a.or(cfg.a).unwrap_or(DEFAULT_A));
    let order = args.order.or(cfg.order).unwrap_or(0);
    let variant = match args.variant {
        Some(name) => p.take(variant(&name)),
        None => Some(cfg.variant.unwrap_or_default()),
    };
    let mode = match args.mode.or(cfg.mode.clone()) {
        Some(name) => p.take(form_mode("mode", &name)),
        None => Some(cfg.coeff_mode.unwrap_or(FormMode::Derived)),
    };
    Some(Job::Expand {
        f: f?,
        a: a?,
        order,
        variant: variant?,
        mode: mode?,
    })
}

fn sweep_job(p: &mut Problems, args: SweepArgs, cfg: &RunConfig) -> Option<Job> {
    let f = test_function(p, args.function, cfg);
    let defaults = SweepGrid::default();
    let a_values = args.a_list.or(cfg.a_values.clone()).unwrap_or(defaults.a_values);
    if a_values.is_empty() || a_values.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        p.push("a-list", "must be a nonempty list of positive numbers");
    }
    let orders = args.orders.or(cfg.orders.clone()).unwrap_or(defaults.orders);
    if orders.is_empty() {
        p.push("orders", "must be nonempty");
    }
    let modes = match args.modes {
        Some(names) => names
            .iter()
            .map(|n| p.take(prescription("modes", n)))
            .collect::<Option<Vec<_>>>(),
        None => Some(cfg.modes.clone().unwrap_or(defaults.modes)),
    };
    if modes.as_ref().is_some_and(|m| m.is_empty()) {
        p.push("modes", "must be nonempty");
    }
    Some(Job::Sweep {
        f: f?,
        grid: SweepGrid {
            a_values,
            orders,
            modes: modes?,
            variant: cfg.variant.unwrap_or(defaults.variant),
            coeff_mode: cfg.coeff_mode.unwrap_or(defaults.coeff_mode),
        },
    })
}

fn lemma1_job(p: &mut Problems, args: Lemma1Args, cfg: &RunConfig) -> Option<Job> {
    let k = p.require("k", args.k.or(cfg.k.map(|k| k as usize)));
    let profile = match args.fn1d {
        Some(text) => p.take(profile_spec(text)),
        None => Some(cfg.fn1d.clone().unwrap_or_else(|| ProfileSpec::Preset("gaussian".into()))),
    }
    .and_then(|s| p.take(s.build("fn1d")));
    let grid = args.grid.or(cfg.grid).unwrap_or(DEFAULT_LEMMA1_GRID);
    let halfwidth = p.positive("halfwidth", args.halfwidth.or(cfg.halfwidth).unwrap_or(DEFAULT_LEMMA1_HALFWIDTH));
    Some(Job::Lemma1 {
        k: k?,
        profile: profile?,
        grid,
        halfwidth: halfwidth?,
    })
}

fn discrepancy_job(p: &mut Problems, args: DiscrepancyArgs, cfg: &RunConfig) -> CliResult<Option<Job>> {
    let nmax = args.nmax.or(cfg.nmax).unwrap_or(DEFAULT_NMAX);
    if nmax == 0 {
        p.push("nmax", "must be positive");
    }
    let grid = match args.grid_file.or(cfg.grid_file.clone()) {
        Some(path) => read_pairs(&path)?,
        None => standard_grid(),
    };
    if grid.is_empty() {
        p.push("grid-file", "contains no rows");
    }
    Ok(Some(Job::Discrepancy { nmax, grid }))
}

fn solve_job(p: &mut Problems, args: SolveArgs, cfg: &RunConfig) -> CliResult<Option<Job>> {
    let a = p.positive("a", cfg.a.unwrap_or(DEFAULT_A));
    let params = match args.fact {
        Some(name) => FactorizationParams {
            name,
            plus: None,
            minus: None,
        },
        None => cfg
            .fact
            .clone()
            .unwrap_or_else(|| FactorizationSpec::Name("identity".into()))
            .params(),
    };
    let name = params.name.clone();
    let fact = a.and_then(|a| p.take(factorization(&params, a, "fact")));
    let rhs = match args.rhs {
        Some(text) => p.take(function_spec(text).map_err(|e| FieldError::new("rhs", e.reason))),
        None => Some(
            cfg.rhs
                .clone()
                .unwrap_or_else(|| TestFunctionSpec::Preset(DEFAULT_FUNCTION.into())),
        ),
    }
    .and_then(|s| p.take(s.build("rhs")));
    let order = args.order.or(cfg.order).unwrap_or(0);
    let mode = match &cfg.mode {
        Some(name) => p.take(form_mode("mode", name)),
        None => Some(cfg.coeff_mode.unwrap_or(FormMode::Derived)),
    };
    let points = match args.points_file.or(cfg.points_file.clone()) {
        Some(path) => read_pairs(&path)?,
        None => vec![(0.0, 0.0)],
    };
    if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        p.push("points-file", "points must be finite");
    }
    let s = cfg.s.unwrap_or(0.0);
    Ok((|| {
        Some(Job::Solve {
            name,
            fact: fact?,
            rhs: rhs?,
            order,
            points,
            mode: mode?,
            s,
        })
    })())
}

/// Runs the job and renders its report.
pub fn execute(job: &Job, spec: &QuadratureSpec, format: Format) -> CliResult<String> {
    Ok(match job {
        Job::Tkn { k, n_cut, xi1, modes } => {
            let rows = modes
                .iter()
                .map(|&mode| {
                    let value = tkn_eval(&TknForm::new(*k, *n_cut, mode), *xi1)?;
                    Ok(TknRow {
                        k: *k,
                        n_cut: match n_cut {
                            Extent::Finite(n) => *n,
                            Extent::Infinite => f64::INFINITY,
                        },
                        xi1: *xi1,
                        mode,
                        value,
                    })
                })
                .collect::<kasym_core::Result<Vec<_>>>()?;
            TknReport { rows }.render(format)
        }
        Job::Pair { f, a, mode } => {
            let r = pairing_exact(f, *a, *mode, spec)?;
            PairReport {
                a: *a,
                mode: *mode,
                value: r.value,
                error_estimate: r.error,
                cutoff: r.cutoff,
            }
            .render(format)
        }
        Job::Expand {
            f,
            a,
            order,
            variant,
            mode,
        } => {
            let result = match variant {
                Variant::Sharp => sharp_expansion(f, *a, *order, *mode, spec)?,
                Variant::Rough => rough_expansion(f, *a, *order, spec)?,
            };
            ExpansionReport {
                a: *a,
                order: *order,
                variant: *variant,
                mode: (*variant == Variant::Sharp).then_some(*mode),
                result,
            }
            .render(format)
        }
        Job::Sweep { f, grid } => run_sweep(f, grid, spec)?.render(format),
        Job::Lemma1 {
            k,
            profile,
            grid,
            halfwidth,
        } => Lemma1Report {
            k: *k,
            grid: *grid,
            halfwidth: *halfwidth,
            check: lemma1_dft_check(*k, profile, *grid, *halfwidth)?,
        }
        .render(format),
        Job::Discrepancy { nmax, grid } => discrepancy_report(*nmax, grid, spec)?.render(format),
        Job::Solve {
            name,
            fact,
            rhs,
            order,
            points,
            mode,
            s,
        } => SolveReport {
            factorization: name.clone(),
            a: fact.cone.a,
            order: *order,
            mode: *mode,
            points: solve_theorem2(fact, &RightHandSide::new(rhs.clone()), *order, points, *mode, *s, spec)?,
        }
        .render(format),
    })
}

/// Parses, runs and writes one report. `output_dir` is the value of
/// [`OUTPUT_DIR_ENV`], if set.
pub fn run(cli: Cli, output_dir: Option<&Path>) -> CliResult<()> {
    let plan = plan(cli)?;
    let text = execute(&plan.job, &plan.spec, plan.format)?;
    let path = destination(plan.out.as_deref(), output_dir, plan.job.name(), plan.format);
    write_report(&text, path.as_deref())
}
