//! Command-line front end: generate certified sectorial matrices, evaluate
//! functions/means/entropies on matrix files, and run or fuzz the theorem
//! registry with margin reports.
//!
//! Exit codes: 0 = all checks passed, 1 = a violation was found,
//! 2 = usage/parse error, 3 = numerical kernel failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::matfunc::{apply_fn, apply_fn_contour, FunctionSpec};
use crate::means::{
    arith_t, dual_mean, geom_t, harm_t, logmean_op, mean_sigma, LogmeanConvention, MeanResult,
    MeanRoute,
};
use crate::sector::{random_sector, SectorMatrix};
use crate::verify::{fuzz, run_check, sharpness, CheckParams, TheoremId, ALL_THEOREMS, CSV_HEADER};

/// Sector angles above this are excluded for conditioning reasons.
const ALPHA_CAP: f64 = 1.45;

const DEFAULT_ALPHA_GRID: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_6,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_3,
];
const DEFAULT_N_RANGE: [usize; 5] = [2, 3, 4, 5, 6];

#[derive(Parser)]
#[command(
    name = "accretive",
    version,
    about = "Functional calculus and inequality verification for accretive (sectorial) matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random sectorial matrix with a certified angle sidecar
    Gen {
        #[arg(long)]
        n: usize,
        /// sector half-angle in radians, in [0, 1.45]
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// fraction of the angle budget actually used, in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        fill: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// output path for the matrix JSON; the angle sidecar lands next to it
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate `fn`, `mean` or `entropy` expressions on matrix JSON files
    Eval {
        /// one of: fn, mean, entropy
        kind: String,
        /// e.g. "power:0.5", "geom:0.5", "sigma:harm:0.3", "tsallis:0.5",
        /// "relent", "diff:affine:0.3,power:0.3"
        spec: String,
        /// one input file for `fn`, two for `mean`/`entropy`
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// quadrature nodes for contour/logmean evaluation
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        /// use the literal integral convention for the weighted log mean
        #[arg(long)]
        logmean_literal: bool,
    },
    /// Run a single theorem check and report its margins
    Check {
        /// theorem id, e.g. LH-ORDER
        id: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// function spec override, e.g. "power:0.5"
        #[arg(long = "fn")]
        fn_spec: Option<String>,
        #[arg(long)]
        fill: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fuzz one theorem (or ALL) across dimensions and angles
    Fuzz {
        /// theorem id or ALL
        id: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// dimensions to cycle through, e.g. --n 2,3,4 (default 2..6)
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// angle grid in radians (default 0, pi/6, pi/4, pi/3)
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long = "fn")]
        fn_spec: Option<String>,
        #[arg(long)]
        fill: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Measure the empirical tightness of a theorem's constant
    Sharpness {
        id: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long = "fn")]
        fn_spec: Option<String>,
        #[arg(long)]
        fill: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(violations) => {
            if violations == 0 {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParam(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::NonSquare { .. }
        | Error::DimMismatch { .. }
        | Error::NonFinite => 2,
        _ => 3,
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=ALPHA_CAP).contains(&alpha) {
        return Err(Error::InvalidParam(format!(
            "alpha must lie in [0, {ALPHA_CAP}] radians, got {alpha}"
        )));
    }
    Ok(())
}

fn check_unit_params(params: &CheckParams) -> Result<()> {
    for (name, v) in [("t", params.t), ("r", params.r), ("lambda", params.lambda)] {
        if let Some(x) = v {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidParam(format!(
                    "{name} must lie in [0, 1], got {x}"
                )));
            }
        }
    }
    if let Some(f) = params.fill {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "fill must lie in (0, 1], got {f}"
            )));
        }
    }
    Ok(())
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("sidecar.json")
}

fn execute(cmd: Command) -> Result<usize> {
    match cmd {
        Command::Gen {
            n,
            alpha,
            fill,
            seed,
            out,
        } => {
            check_alpha(alpha)?;
            if n == 0 {
                return Err(Error::InvalidParam("n must be positive".into()));
            }
            if !(fill > 0.0 && fill <= 1.0) {
                return Err(Error::InvalidParam(format!(
                    "fill must lie in (0, 1], got {fill}"
                )));
            }
            let a = random_sector(n, alpha, fill, seed);
            std::fs::write(&out, a.base().to_json())?;
            let sidecar = json!({
                "angle": a.angle(),
                "re_min": a.re_min(),
                "n": n,
                "alpha": alpha,
                "fill": fill,
                "seed": seed,
            });
            std::fs::write(sidecar_path(&out), serde_json::to_string(&sidecar)?)?;
            Ok(0)
        }

        Command::Eval {
            kind,
            spec,
            inputs,
            out,
            nodes,
            logmean_literal,
        } => {
            let result = eval_command(&kind, &spec, &inputs, nodes, logmean_literal)?;
            write_or_print(&out, &result)?;
            Ok(0)
        }

        Command::Check {
            id,
            n,
            alpha,
            seed,
            t,
            r,
            lambda,
            fn_spec,
            fill,
            out,
            format,
        } => {
            check_alpha(alpha)?;
            let id: TheoremId = id.parse()?;
            let params = CheckParams {
                t,
                r,
                lambda,
                fn_spec,
                fill,
                ..Default::default()
            };
            check_unit_params(&params)?;
            let rep = run_check(id, n, alpha, &params, seed)?;
            let content = match format {
                Format::Json => format!("{}\n", rep.to_json_line()),
                Format::Csv => format!(
                    "{}\n{},{},{},1,{},{},{},{}\n",
                    CSV_HEADER,
                    rep.theorem,
                    rep.n,
                    rep.alpha,
                    rep.min_margin(),
                    usize::from(!rep.pass),
                    rep.ratio.map_or(String::new(), |x| x.to_string()),
                    rep.seed
                ),
            };
            write_or_print(&out, &content)?;
            Ok(usize::from(!rep.pass))
        }

        Command::Fuzz {
            id,
            trials,
            n,
            alpha,
            seed,
            jobs,
            t,
            r,
            lambda,
            fn_spec,
            fill,
            out,
            format,
        } => {
            if trials == 0 {
                return Err(Error::InvalidParam("trials must be >= 1".into()));
            }
            let ids: Vec<TheoremId> = if id.eq_ignore_ascii_case("ALL") {
                ALL_THEOREMS.to_vec()
            } else {
                vec![id.parse()?]
            };
            let n_range = n.unwrap_or_else(|| DEFAULT_N_RANGE.to_vec());
            if n_range.is_empty() || n_range.contains(&0) {
                return Err(Error::InvalidParam("dimensions must be positive".into()));
            }
            let alpha_grid = alpha.unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_vec());
            for &a in &alpha_grid {
                check_alpha(a)?;
            }
            let params = CheckParams {
                t,
                r,
                lambda,
                fn_spec,
                fill,
                ..Default::default()
            };
            check_unit_params(&params)?;
            let res = with_pool(jobs, || {
                fuzz(&ids, trials, &n_range, &alpha_grid, &params, seed)
            })?;
            let content = match format {
                Format::Json => res.to_jsonl(),
                Format::Csv => res.to_csv(),
            };
            write_or_print(&out, &content)?;
            if out.is_some() {
                for cell in &res.cells {
                    eprintln!(
                        "{} alpha={:.4}: trials={} violations={} min_margin={:.3e}",
                        cell.theorem, cell.alpha, cell.trials, cell.violations, cell.min_margin
                    );
                }
            }
            Ok(res.violations())
        }

        Command::Sharpness {
            id,
            trials,
            n,
            alpha,
            seed,
            jobs,
            t,
            r,
            lambda,
            fn_spec,
            fill,
            out,
            format,
        } => {
            check_alpha(alpha)?;
            if trials == 0 {
                return Err(Error::InvalidParam("trials must be >= 1".into()));
            }
            let id: TheoremId = id.parse()?;
            let params = CheckParams {
                t,
                r,
                lambda,
                fn_spec,
                fill,
                ..Default::default()
            };
            check_unit_params(&params)?;
            let rec = with_pool(jobs, || sharpness(id, trials, n, alpha, &params, seed))?;
            let content = match format {
                Format::Json => format!("{}\n", serde_json::to_string(&rec)?),
                Format::Csv => format!("{}\n{}\n", CSV_HEADER, rec.to_csv_row()),
            };
            write_or_print(&out, &content)?;
            Ok(rec.violations)
        }
    }
}

fn with_pool<T>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    match jobs {
        Some(j) if j >= 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
            pool.install(f)
        }
        Some(_) => Err(Error::InvalidParam("jobs must be >= 1".into())),
        None => f(),
    }
}

fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    CMatrix::from_json(&text)
}

fn read_sector(path: &Path) -> Result<SectorMatrix> {
    SectorMatrix::certify(read_matrix(path)?)
}

fn route_name(route: MeanRoute) -> &'static str {
    match route {
        MeanRoute::Diagonalization => "diagonalization",
        MeanRoute::Contour => "contour",
    }
}

fn result_json(value: &CMatrix, route: &str, residual: f64) -> Result<String> {
    let mut v: serde_json::Value = serde_json::from_str(&value.to_json())?;
    v["route"] = json!(route);
    v["residual"] = json!(residual);
    Ok(format!("{v}\n"))
}

fn eval_command(
    kind: &str,
    spec: &str,
    inputs: &[PathBuf],
    nodes: usize,
    logmean_literal: bool,
) -> Result<String> {
    let expect_inputs = |k: usize| -> Result<()> {
        if inputs.len() != k {
            return Err(Error::InvalidParam(format!(
                "eval {kind} needs exactly {k} input file(s), got {}",
                inputs.len()
            )));
        }
        Ok(())
    };

    match kind {
        "fn" => {
            expect_inputs(1)?;
            let a = read_sector(&inputs[0])?;
            let f = FunctionSpec::parse(spec)?;
            match apply_fn(&f, a.base()) {
                Ok(v) => result_json(&v, "diagonalization", 0.0),
                Err(Error::DefectiveMatrix { .. }) => {
                    let v = apply_fn_contour(&f, a.base(), nodes)?;
                    result_json(&v, "contour", crate::matcore::tol::CONTOUR_TOL)
                }
                Err(e) => Err(e),
            }
        }
        "mean" => {
            expect_inputs(2)?;
            let a = read_sector(&inputs[0])?;
            let b = read_sector(&inputs[1])?;
            let m = eval_mean(spec, &a, &b, nodes, logmean_literal)?;
            result_json(&m.value, route_name(m.route), m.residual)
        }
        "entropy" => {
            expect_inputs(2)?;
            let a = read_sector(&inputs[0])?;
            let b = read_sector(&inputs[1])?;
            let (value, route, residual) = eval_entropy(spec, &a, &b)?;
            result_json(&value, route, residual)
        }
        _ => Err(Error::InvalidParam(format!(
            "unknown eval kind '{kind}' (expected fn, mean or entropy)"
        ))),
    }
}

fn parse_weight(spec: &str, head: &str) -> Result<f64> {
    spec.strip_prefix(head)
        .and_then(|rest| rest.strip_prefix(':'))
        .and_then(|p| p.parse::<f64>().ok())
        .ok_or_else(|| Error::InvalidParam(format!("'{spec}' needs the form {head}:<weight>")))
}

fn eval_mean(
    spec: &str,
    a: &SectorMatrix,
    b: &SectorMatrix,
    nodes: usize,
    logmean_literal: bool,
) -> Result<MeanResult> {
    if let Some(rest) = spec.strip_prefix("sigma:") {
        return mean_sigma(&FunctionSpec::parse(rest)?, a, b);
    }
    if let Some(rest) = spec.strip_prefix("dual:") {
        return dual_mean(&FunctionSpec::parse(rest)?, a, b);
    }
    if spec.starts_with("arith") {
        return arith_t(a, b, parse_weight(spec, "arith")?);
    }
    if spec.starts_with("harm") {
        return harm_t(a, b, parse_weight(spec, "harm")?);
    }
    if spec.starts_with("geom") {
        return geom_t(a, b, parse_weight(spec, "geom")?);
    }
    if spec.starts_with("logmean") {
        let convention = if logmean_literal {
            LogmeanConvention::Literal
        } else {
            LogmeanConvention::Representing
        };
        return logmean_op(
            a,
            b,
            parse_weight(spec, "logmean")?,
            nodes.min(512),
            convention,
        );
    }
    Err(Error::InvalidParam(format!(
        "unknown mean '{spec}' (expected arith:t, harm:t, geom:t, logmean:t, sigma:<fn>, dual:<fn>)"
    )))
}

fn eval_entropy(
    spec: &str,
    a: &SectorMatrix,
    b: &SectorMatrix,
) -> Result<(CMatrix, &'static str, f64)> {
    if spec.starts_with("tsallis") {
        let t = parse_weight(spec, "tsallis")?;
        return Ok((crate::entropy::tsallis(a, b, t)?, "diagonalization", 0.0));
    }
    if spec == "relent" || spec == "rel" {
        return Ok((crate::entropy::rel_entropy(a, b)?, "diagonalization", 0.0));
    }
    if let Some(rest) = spec.strip_prefix("diff:") {
        let (fs, gs) = rest
            .split_once(',')
            .ok_or_else(|| Error::InvalidParam("diff needs the form diff:<fn>,<fn>".into()))?;
        let d = crate::entropy::perspective_diff(
            &FunctionSpec::parse(fs)?,
            &FunctionSpec::parse(gs)?,
            a,
            b,
        )?;
        return Ok((d.value, "diagonalization", 0.0));
    }
    Err(Error::InvalidParam(format!(
        "unknown entropy '{spec}' (expected tsallis:t, relent, diff:<fn>,<fn>)"
    )))
}
