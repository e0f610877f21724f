//! The `ptolemy` command-line driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ptolemy_core::cohomology::{build_complex, parse_cocycles};
use ptolemy_core::pipeline::{
    run_to, select_classes, setup_class, ObstructionSelection, PipelineConfig, RunReport, Stage,
};
use ptolemy_core::poly::TermOrder;
use ptolemy_core::reduction::{alpha_star, cokernel, kernel_basis};
use ptolemy_core::{fixtures, parse_triangulation, Error, Triangulation};

pub const ENV_FIXTURES: &str = "PTOLEMY_FIXTURES";

#[derive(Parser, Debug)]
#[command(name = "ptolemy", version, about = "Ptolemy varieties, natural cocycles and trace fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a triangulation and print combinatorial diagnostics.
    Validate { input: String },
    /// Generate the Ptolemy ideal of each selected obstruction class.
    Variety { input: String },
    /// Torus-action reduction: α*, its cokernel, basic generators, reduced ideal.
    Reduce { input: String },
    /// Solve the reduced ideals.
    Solve { input: String },
    /// Solve and reconstruct representations.
    Rep { input: String },
    /// Solve, reconstruct and compare Ptolemy and trace fields.
    Tracefield { input: String },
    /// The whole pipeline.
    All { input: String },
    /// List bundled fixtures.
    Fixtures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Lex,
    Grevlex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Options {
    #[arg(long, global = true, default_value_t = 2)]
    pub n: u32,
    /// `all`, a class index, or a file of `cocycle` blocks.
    #[arg(long, global = true, default_value = "all")]
    pub obstruction: String,
    #[arg(long, global = true, value_enum, default_value_t = Order::Grevlex)]
    pub order: Order,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 60)]
    pub precision: u32,
    #[arg(long = "max-vars", global = true, default_value_t = ptolemy_core::solver::DEFAULT_MAX_VARS)]
    pub max_vars: usize,
    /// Longest generator product sampled for traces.
    #[arg(long = "length-cap", global = true, default_value_t = 2)]
    pub length_cap: usize,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock timings (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

/// Rendered output and exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct CliError {
    pub stage: String,
    pub message: String,
    pub code: u8,
}

impl CliError {
    fn core(stage: &str, e: &Error) -> Self {
        CliError { stage: stage.into(), message: e.to_string(), code: if e.is_budget() { 2 } else { 1 } }
    }

    fn input(msg: String) -> Self {
        CliError { stage: "input".into(), message: msg, code: 1 }
    }
}

/// Reads a triangulation from a path, the fixture directory named by
/// `PTOLEMY_FIXTURES`, or the bundled fixtures, in that order.
pub fn load_input(input: &str) -> Result<Triangulation, CliError> {
    let text = if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| CliError::input(format!("{input}: {e}")))?
    } else if let Some(dir) = std::env::var_os(ENV_FIXTURES) {
        let dir = PathBuf::from(dir);
        let path = [dir.join(input), dir.join(format!("{input}.tri"))]
            .into_iter()
            .find(|p| p.is_file())
            .ok_or_else(|| CliError::input(format!("no fixture {input} in {}", dir.display())))?;
        std::fs::read_to_string(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
    } else {
        fixtures::text(input)
            .ok_or_else(|| CliError::input(format!("{input}: no such file or bundled fixture")))?
            .to_string()
    };
    parse_triangulation(&text).map_err(|e| CliError::core("validate", &e))
}

pub fn config(tri: &Triangulation, opts: &Options) -> Result<PipelineConfig, CliError> {
    let obstruction = match opts.obstruction.as_str() {
        "all" => ObstructionSelection::All,
        s if s.parse::<usize>().is_ok() => ObstructionSelection::Index(s.parse().expect("checked")),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("--obstruction {path}: {e}")))?;
            ObstructionSelection::Cocycles(parse_cocycles(tri, &text).map_err(|e| CliError::core("obstruction", &e))?)
        }
    };
    let cfg = PipelineConfig {
        n: opts.n,
        obstruction,
        order: match opts.order {
            Order::Lex => TermOrder::Lex,
            Order::Grevlex => TermOrder::Grevlex,
        },
        precision_digits: opts.precision,
        max_vars: opts.max_vars,
        length_cap: opts.length_cap,
        timings: opts.timings,
        ..PipelineConfig::default()
    };
    cfg.validate().map_err(|e| CliError::core("config", &e))?;
    Ok(cfg)
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn validate(input: &str) -> Output {
    let tri = match load_input(input) {
        Ok(t) => t,
        Err(e) => {
            return Output {
                text: render(&json!({ "valid": false, "stage": e.stage, "error": e.message })),
                code: e.code,
            }
        }
    };
    let counts = tri.euler_counts();
    let h2 = build_complex(&tri).h2_dimension();
    let report = json!({
        "valid": true,
        "name": tri.name(),
        "tetrahedra": tri.num_tetrahedra(),
        "cusps": tri.cusp_classes().len(),
        "edge_classes": counts.e,
        "face_classes": counts.f,
        "euler": { "v": counts.v, "e": counts.e, "f": counts.f, "s": counts.s, "chi": counts.chi() },
        "cusp_link_euler": tri.cusp_link_euler(),
        "oriented": tri.is_oriented(),
        "orientable": tri.tet_orientations().is_some(),
        "ordered": tri.is_ordered(),
        "h2_dimension": h2,
        "sign_tables": tri.sign_tables().keys().collect::<Vec<_>>(),
        "cocycle_blocks": tri.cocycles().len(),
    });
    Output { text: render(&report), code: 0 }
}

fn variety(tri: &Triangulation, cfg: &PipelineConfig, format: Format) -> Result<Output, CliError> {
    let mut classes = Vec::new();
    let mut text = String::new();
    for (index, sigma) in select_classes(tri, cfg).map_err(|e| CliError::core("variety", &e))? {
        let ideal = ptolemy_core::variety::generate_ptolemy_relations(tri, cfg.n, &sigma)
            .map_err(|e| CliError::core("variety", &e))?
            .with_order(cfg.order);
        text.push_str(&format!("# obstruction class {index}\n{}", ideal.to_text()));
        classes.push(json!({ "index": index, "relations": ideal.num_relations, "ideal": ideal.to_json() }));
    }
    Ok(match format {
        Format::Json => Output { text: render(&json!({ "name": tri.name(), "n": cfg.n, "classes": classes })), code: 0 },
        Format::Text => Output { text, code: 0 },
    })
}

fn reduce(tri: &Triangulation, cfg: &PipelineConfig, format: Format) -> Result<Output, CliError> {
    let err = |e: Error| CliError::core("reduce", &e);
    let alpha = alpha_star(tri, cfg.n);
    let coker = cokernel(&alpha).map_err(err)?;
    let kernel: Vec<String> = kernel_basis(&alpha).iter().map(|w| w.display(&alpha.names)).collect();
    let matrix: Vec<Vec<String>> =
        (0..alpha.matrix.rows()).map(|i| alpha.matrix.row(i).iter().map(|x| x.to_string()).collect()).collect();
    let mut classes = Vec::new();
    let mut text = format!(
        "alpha* ({} x {}), cokernel Z/{}\ninvariant monomials: {}\n",
        alpha.matrix.rows(),
        alpha.matrix.cols(),
        coker.order,
        kernel.join(", ")
    );
    for (index, sigma) in select_classes(tri, cfg).map_err(err)? {
        let setup = setup_class(tri, cfg.n, index, &sigma, cfg.order).map_err(err)?;
        text.push_str(&format!(
            "# obstruction class {index}: basic {} (det {})\n{}",
            setup.basic.names.join(", "),
            setup.basic.determinant,
            setup.reduced.to_text()
        ));
        classes.push(json!({
            "index": index,
            "basic": setup.basic,
            "reduced": setup.reduced.to_json(),
        }));
    }
    let report = json!({
        "name": tri.name(),
        "n": cfg.n,
        "alpha_star": { "columns": alpha.names, "matrix": matrix },
        "cokernel": coker,
        "invariant_monomials": kernel,
        "classes": classes,
    });
    Ok(match format {
        Format::Json => Output { text: render(&report), code: 0 },
        Format::Text => Output { text, code: 0 },
    })
}

fn staged(tri: &Triangulation, cfg: &PipelineConfig, stage: Stage, format: Format) -> Result<Output, CliError> {
    let name = match stage {
        Stage::Reduce => "reduce",
        Stage::Solve => "solve",
        Stage::Representation => "rep",
        Stage::TraceField => "tracefield",
    };
    let report: RunReport = run_to(tri, cfg, stage).map_err(|e| CliError::core(name, &e))?;
    let code = if report.has_budget_error() { 2 } else { 0 };
    let text = match format {
        Format::Json => render(&report),
        Format::Text => report.to_text(),
    };
    Ok(Output { text, code })
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let opts = &cli.opts;
    let input = match &cli.command {
        Command::Validate { input } => return Ok(validate(input)),
        Command::Fixtures => {
            let names: Vec<&str> = fixtures::ALL.iter().map(|(n, _)| *n).collect();
            return Ok(Output { text: names.join("\n") + "\n", code: 0 });
        }
        Command::Variety { input }
        | Command::Reduce { input }
        | Command::Solve { input }
        | Command::Rep { input }
        | Command::Tracefield { input }
        | Command::All { input } => input,
    };
    let tri = load_input(input)?;
    let cfg = config(&tri, opts)?;
    match &cli.command {
        Command::Variety { .. } => variety(&tri, &cfg, opts.format),
        Command::Reduce { .. } => reduce(&tri, &cfg, opts.format),
        Command::Solve { .. } => staged(&tri, &cfg, Stage::Solve, opts.format),
        Command::Rep { .. } => staged(&tri, &cfg, Stage::Representation, opts.format),
        Command::Tracefield { .. } | Command::All { .. } => staged(&tri, &cfg, Stage::TraceField, opts.format),
        Command::Validate { .. } | Command::Fixtures => unreachable!("handled above"),
    }
}

/// Writes to `--out` atomically, or to stdout.
pub fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.opts.out {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
        }
    }
}
