//! Command-line front-end. The binary is a thin wrapper around [`run`], which
//! takes its arguments and output streams explicitly so it can be driven from
//! tests.

mod render;

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::beta::{beta_density, BetaParams};
use crate::data::{
    aggregate, build_design, ingest_csv, read_column, AggregatedData, DesignInfo, DesignSpec,
};
use crate::distribution::{self, UnifedParams};
use crate::error::{Error, Result};
use crate::glm::{fit, goodness_of_fit, FitResult, GoodnessOfFit, LinkFunction};
use crate::numerics::kappa_prime_inverse;

pub use render::{format_deviance, render_gof, render_summary, significance_stars};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "unifed",
    version,
    about = "Unifed distribution and GLM toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a unifed GLM and print an R-style summary.
    Fit(FitArgs),
    /// Aggregate observations into classes sharing a covariate tuple.
    Aggregate(AggregateArgs),
    /// Tabulate unifed and beta densities on a grid.
    Pdf(PdfArgs),
    /// Evaluate the unifed distribution function.
    Cdf(CdfArgs),
    /// Evaluate the unifed quantile function.
    Quantile(QuantileArgs),
    /// Draw a seeded sample.
    Sample(SampleArgs),
    /// Chi-square goodness-of-fit test on the residual deviance.
    Gof(GofArgs),
    /// Maximum likelihood estimate of theta from a one-column CSV.
    Mle(MleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV; stdin when absent or `-`.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub response: String,
    #[arg(long)]
    pub weight: Option<String>,
    /// Comma-separated categorical covariates.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    /// Reference level override, `covariate=level`; repeatable.
    #[arg(long = "reference", value_parser = parse_key_value)]
    pub references: Vec<(String, String)>,
}

impl DataArgs {
    fn spec(&self) -> DesignSpec {
        let mut spec = DesignSpec::new(&self.response).covariates(self.covariates.iter().cloned());
        spec.weight = self.weight.clone();
        for (k, v) in &self.references {
            spec = spec.reference(k, v);
        }
        spec
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "canonical", value_parser = parse_link)]
    pub link: LinkFunction,
    /// Fit on the raw rows instead of aggregated classes.
    #[arg(long)]
    pub no_aggregate: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Decimals for estimates and standard errors in the text summary.
    #[arg(long, default_value_t = 4)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PdfArgs {
    /// Unifed canonical parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Unifed means, converted to canonical parameters.
    #[arg(long, value_delimiter = ',')]
    pub mean: Vec<f64>,
    /// Inverse dispersion n (dispersion 1/n) for the unifed columns.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Beta densities as `mu:phi`.
    #[arg(long = "beta", value_delimiter = ',', value_parser = parse_pair)]
    pub beta: Vec<(f64, f64)>,
    /// Beta densities as `alpha:beta`.
    #[arg(long = "beta-shapes", value_delimiter = ',', value_parser = parse_pair)]
    pub beta_shapes: Vec<(f64, f64)>,
    /// Grid spacing; points are the interior multiples of the step.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mean")]
    pub theta: Option<f64>,
    #[arg(long)]
    pub mean: Option<f64>,
}

impl ParamArgs {
    fn theta(&self) -> Result<f64> {
        match (self.theta, self.mean) {
            (Some(t), _) => Ok(t),
            (None, Some(mu)) => kappa_prime_inverse(mu),
            (None, None) => Ok(0.0),
        }
    }
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    /// JSON report written by `fit --format json`.
    #[arg(long, conflicts_with_all = ["input", "response"])]
    pub from_fit: Option<PathBuf>,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    #[arg(long, default_value = "canonical", value_parser = parse_link)]
    pub link: LinkFunction,
    #[arg(long)]
    pub no_aggregate: bool,
    /// Minimum class weight below which the chi-square reference is flagged
    /// as unreliable.
    #[arg(long, default_value_t = 30.0)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct MleArgs {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Column to read; the first column when absent.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

fn parse_link(s: &str) -> std::result::Result<LinkFunction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_key_value(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected covariate=level, got `{s}`"))
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

/// Everything `fit --format json` writes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub aggregated: bool,
    pub n_rows: usize,
    pub design: DesignInfo,
    pub fit: FitResult,
    pub goodness_of_fit: GoodnessOfFit,
}

/// Parses `args` (including the program name) and runs one command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence(_)
        | Error::SingularDesign { .. }
        | Error::BoundaryFit
        | Error::Capacity { .. } => EXIT_NUMERIC,
        _ => EXIT_DATA,
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Fit(a) => cmd_fit(&a, stdout, stderr),
        Command::Aggregate(a) => cmd_aggregate(&a, stdout, stderr),
        Command::Pdf(a) => cmd_pdf(&a, stdout),
        Command::Cdf(a) => cmd_cdf(&a, stdout),
        Command::Quantile(a) => cmd_quantile(&a, stdout),
        Command::Sample(a) => cmd_sample(&a, stdout),
        Command::Gof(a) => cmd_gof(&a, stdout),
        Command::Mle(a) => cmd_mle(&a, stdout),
    }
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn Read>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(File::open(p)?)),
        _ => Ok(Box::new(io::stdin())),
    }
}

/// Writes `content` to `path` (only once it is complete) or to stdout.
fn emit(path: &Option<PathBuf>, content: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, content)?,
        _ => stdout.write_all(content)?,
    }
    Ok(())
}

fn fit_report(data: &DataArgs, link: LinkFunction, no_aggregate: bool) -> Result<FitReport> {
    let spec = data.spec();
    let dataset = ingest_csv(open_input(&data.input)?, &spec)?;
    let classes = if no_aggregate {
        AggregatedData::from_rows(&dataset)?
    } else {
        aggregate(&dataset)?
    };
    let (design, resp, info) = build_design(&classes, &spec)?;
    let fit = fit(&design, &resp, link)?;
    let gof = goodness_of_fit(&fit)?;
    Ok(FitReport {
        aggregated: !no_aggregate,
        n_rows: dataset.len(),
        design: info,
        fit,
        goodness_of_fit: gof,
    })
}

pub fn cmd_fit(a: &FitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let report = fit_report(&a.data, a.link, a.no_aggregate)?;
    for w in report.design.warnings() {
        writeln!(stderr, "warning: {w}")?;
    }
    let body = match a.format {
        OutputFormat::Text => render_summary(&report.fit, a.precision).into_bytes(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => coefficients_csv(&report.fit)?,
    };
    if !report.fit.converged {
        writeln!(
            stderr,
            "error: IWLS did not converge after {} iterations; partial result follows",
            report.fit.iterations
        )?;
        stderr.write_all(&body)?;
        return Ok(EXIT_NUMERIC);
    }
    emit(&a.output, &body, stdout)?;
    Ok(EXIT_OK)
}

fn coefficients_csv(fit: &FitResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["term", "estimate", "std_error", "z_value", "p_value"])?;
    for j in 0..fit.coefficients.len() {
        w.write_record([
            fit.coefficient_names[j].clone(),
            fit.coefficients[j].to_string(),
            fit.standard_errors[j].to_string(),
            fit.z_values[j].to_string(),
            fit.p_values[j].to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn cmd_aggregate(
    a: &AggregateArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let spec = a.data.spec();
    let dataset = ingest_csv(open_input(&a.data.input)?, &spec)?;
    let agg = aggregate(&dataset)?;
    let mut buf = Vec::new();
    agg.write_csv(&mut buf)?;
    emit(&a.output, &buf, stdout)?;
    let (min_w, min_class) = agg.min_weight().expect("aggregate output is nonempty");
    writeln!(
        stderr,
        "{} rows -> {} classes; min class weight {} ({}); max class weight {}",
        dataset.len(),
        agg.len(),
        min_w,
        crate::data::describe_class(&agg.covariate_names, &min_class.levels),
        agg.max_weight().unwrap_or(min_w),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_pdf(a: &PdfArgs, stdout: &mut dyn Write) -> Result<i32> {
    if !(a.step > 0.0 && a.step < 0.5) {
        return Err(Error::domain(format!(
            "grid step must be in (0, 0.5), got {}",
            a.step
        )));
    }
    let k = (1.0 / a.step).round() as i64;
    if a.n == 0 {
        return Err(Error::domain("inverse dispersion n must be at least 1"));
    }

    type Column = (String, Box<dyn Fn(i64) -> Result<f64>>);
    let mut columns: Vec<Column> = Vec::new();
    let mut unifed_column = |label: String, theta: f64| -> Result<()> {
        let params = UnifedParams::new(theta, a.n)?;
        let f: Box<dyn Fn(i64) -> Result<f64>> = if params.n() == 1 {
            Box::new(move |i| distribution::density(i as f64 / k as f64, theta))
        } else {
            Box::new(move |i| {
                let x = BigRational::new(BigInt::from(i), BigInt::from(k));
                distribution::density_general(&x, &params)
            })
        };
        columns.push((label, f));
        Ok(())
    };
    for &t in &a.theta {
        unifed_column(format!("theta={t}"), t)?;
    }
    for &mu in &a.mean {
        unifed_column(format!("mu={mu}"), kappa_prime_inverse(mu)?)?;
    }
    for &(mu, phi) in &a.beta {
        let p = BetaParams::new(mu, phi)?;
        columns.push((
            format!("beta(mu={mu},phi={phi})"),
            Box::new(move |i| Ok(beta_density(i as f64 / k as f64, &p))),
        ));
    }
    for &(alpha, beta) in &a.beta_shapes {
        let p = BetaParams::from_shapes(alpha, beta)?;
        columns.push((
            format!("beta(alpha={alpha},beta={beta})"),
            Box::new(move |i| Ok(beta_density(i as f64 / k as f64, &p))),
        ));
    }
    if columns.is_empty() {
        return Err(Error::domain(
            "no densities requested; pass --theta, --mean, --beta or --beta-shapes",
        ));
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["x".to_string()];
    header.extend(columns.iter().map(|(l, _)| l.clone()));
    w.write_record(&header)?;
    for i in 1..k {
        let mut rec = vec![(i as f64 / k as f64).to_string()];
        for (_, f) in &columns {
            rec.push(f(i)?.to_string());
        }
        w.write_record(&rec)?;
    }
    let buf = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    emit(&a.output, &buf, stdout)?;
    Ok(EXIT_OK)
}

fn two_column_csv(
    header: [&str; 2],
    rows: impl IntoIterator<Item = (f64, f64)>,
) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for (a, b) in rows {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn cmd_cdf(a: &CdfArgs, stdout: &mut dyn Write) -> Result<i32> {
    let theta = a.params.theta()?;
    let rows =
        a.x.iter()
            .map(|&x| Ok((x, distribution::cdf(x, theta)?)))
            .collect::<Result<Vec<_>>>()?;
    stdout.write_all(&two_column_csv(["x", "cdf"], rows)?)?;
    Ok(EXIT_OK)
}

pub fn cmd_quantile(a: &QuantileArgs, stdout: &mut dyn Write) -> Result<i32> {
    let theta = a.params.theta()?;
    let rows =
        a.p.iter()
            .map(|&p| Ok((p, distribution::quantile(p, theta)?)))
            .collect::<Result<Vec<_>>>()?;
    stdout.write_all(&two_column_csv(["p", "quantile"], rows)?)?;
    Ok(EXIT_OK)
}

pub fn cmd_sample(a: &SampleArgs, stdout: &mut dyn Write) -> Result<i32> {
    let theta = a.params.theta()?;
    let draws = distribution::sample(a.count, theta, a.seed)?;
    let mut out = String::from("x\n");
    for x in draws {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    emit(&a.output, out.as_bytes(), stdout)?;
    Ok(EXIT_OK)
}

pub fn cmd_gof(a: &GofArgs, stdout: &mut dyn Write) -> Result<i32> {
    let gof = match &a.from_fit {
        Some(path) => {
            let report: FitReport = serde_json::from_reader(File::open(path)?)?;
            goodness_of_fit(&report.fit)?
        }
        None => {
            let response = a.response.clone().ok_or_else(|| {
                Error::domain("gof needs --from-fit or --response with the data flags")
            })?;
            let data = DataArgs {
                input: a.input.clone(),
                response,
                weight: a.weight.clone(),
                covariates: a.covariates.clone(),
                references: Vec::new(),
            };
            fit_report(&data, a.link, a.no_aggregate)?.goodness_of_fit
        }
    };
    match a.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                gof: GoodnessOfFit,
                threshold: f64,
                reliable: bool,
            }
            let out = Out {
                gof,
                threshold: a.threshold,
                reliable: gof.is_reliable(a.threshold),
            };
            writeln!(stdout, "{}", serde_json::to_string_pretty(&out)?)?;
        }
        OutputFormat::Csv => {
            writeln!(stdout, "statistic,df,p_value,min_weight,reliable")?;
            writeln!(
                stdout,
                "{},{},{},{},{}",
                gof.statistic,
                gof.df,
                gof.p_value,
                gof.min_weight,
                gof.is_reliable(a.threshold)
            )?;
        }
        OutputFormat::Text => stdout.write_all(render_gof(&gof, a.threshold).as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_mle(a: &MleArgs, stdout: &mut dyn Write) -> Result<i32> {
    let xs = read_column(open_input(&a.input)?, a.column.as_deref())?;
    let theta = distribution::mle_theta(&xs)?;
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    match a.format {
        OutputFormat::Text => writeln!(
            stdout,
            "theta_hat = {theta}\nx_bar = {mean}\nn = {}",
            xs.len()
        )?,
        OutputFormat::Csv => writeln!(stdout, "theta_hat,x_bar,n\n{theta},{mean},{}", xs.len())?,
        OutputFormat::Json => writeln!(
            stdout,
            "{}",
            serde_json::json!({ "theta_hat": theta, "x_bar": mean, "n": xs.len() })
        )?,
    }
    Ok(EXIT_OK)
}
