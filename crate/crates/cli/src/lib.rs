//! Command-line front end for `regdom`.
//!
//! Every command returns an [`Output`] instead of printing, so the binary
//! and the tests share one code path.

pub mod demo;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use regdom::dominance::is_region_dominant;
use regdom::fractional::{
    block_reduce, corollary_cor_check, high_gamma_check, is_frac_stable, perturbed_family_check,
    stability_angle, block_sector_check, FractionalSystem,
};
use regdom::linalg::to_rows;
use regdom::second_order::{
    companion, form2_parabola_analysis, pencil_spectrum, perturb, relative_d_stability_check,
    relative_d_stability_sample, rh_analysis_with_tol, sample_perturbed, sufficient_d_stability,
    t2_shifted_stable, triangular_shifted_stable, triangular_spectrum, PerturbationForm,
    SecondOrderSystem, COMMUTE_TOL,
};
use regdom::spectra::{
    d_stability_sample_with, diagonal_stability_certificate, eigenvalues, eigenvalues_csv,
    is_region_stable, region_report, ScalingClass, ScalingTag,
};
use regdom::{ComplexPoint, Region};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<regdom::Error> for CliError {
    fn from(e: regdom::Error) -> Self {
        match e {
            regdom::Error::NoConvergence => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "regdom", version, about = "Eigenvalue clustering in LMI regions via diagonal dominance")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Omit the timestamp so that output is byte-identical across runs.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    All,
    Unit,
    Geq1,
}

impl From<ClassArg> for ScalingTag {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::All => ScalingTag::AllPositiveD,
            ClassArg::Unit => ScalingTag::UnitIntervalD,
            ClassArg::Geq1 => ScalingTag::GeqOneD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Full,
    Form1,
    Form2,
}

impl From<FormArg> for PerturbationForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Full => PerturbationForm::Full,
            FormArg::Form1 => PerturbationForm::FormI,
            FormArg::Form2 => PerturbationForm::FormII,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Spectrum,
    Triangular,
    Rh,
    T2,
    Sufficient,
    Relative,
    Form2,
    Perturb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FracCheck {
    Stability,
    Reduce,
    Sector,
    Corollary,
    Family,
    HighGamma,
}

#[derive(Debug, clap::Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sampling (default: REGDOM_THREADS or all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonal dominance of a matrix with respect to a region.
    Dominance {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        region: String,
    },
    /// Spectrum of a matrix, optionally against a region.
    Spectrum {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "half-plane:alpha=0")]
        region: String,
        /// Also search for a diagonal stability certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Region characteristics: real interval, x_max, recession cone.
    Region {
        #[arg(long)]
        region: String,
    },
    /// Second-order system x'' = A x' + B x.
    SecondOrder {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Spectrum)]
        method: Method,
        /// Shift: spectra are tested against Re z < alpha.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        /// Minimal decay rate for the relative and Form II checks.
        #[arg(long)]
        decay: Option<f64>,
        /// Relative commutation tolerance for the Routh-Hurwitz path.
        #[arg(long, default_value_t = COMMUTE_TOL)]
        comm_tol: f64,
        /// Diagonal of D as a comma-separated list (perturb method).
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = FormArg::Full)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Fractional-order system d^g x = A x.
    Fractional {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = FracCheck::Stability)]
        check: FracCheck,
        /// Sector angle for the sector and corollary checks (default g pi / 2).
        #[arg(long)]
        theta: Option<f64>,
        /// Diagonal of D_hat as a comma-separated list (family check).
        #[arg(long, value_delimiter = ',')]
        d_hat: Option<Vec<f64>>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Random search for D in a scaling class with sigma(DA) outside a region.
    Sample {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        region: String,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Feedback-design demo: closed-loop poles on 3x^2 - y^2 = 1.
    Demo {
        #[arg(long, default_value_t = 1.0)]
        omega_n: f64,
        /// Directory for poles.csv and boundary.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = -0.6, allow_hyphen_values = true)]
        x_max: f64,
    },
}

/// Report wrapper written for every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub report: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
}

struct Rendered {
    json: String,
    text: String,
    csv: Option<String>,
}

fn render<T: Serialize>(cli: &Cli, command: &str, report: &T, text: String, csv: Option<String>) -> CliResult<Rendered> {
    let timestamp = (!cli.deterministic).then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let env = Envelope {
        command: command.to_string(),
        timestamp,
        report,
    };
    let json = serde_json::to_string_pretty(&env).map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok(Rendered { json, text, csv })
}

fn parse_region(s: &str) -> CliResult<Region> {
    s.parse::<Region>().map_err(|e| CliError::Input(format!("region {s:?}: {e}")))
}

fn class_of(c: ClassArg) -> ScalingClass {
    ScalingClass::new(c.into())
}

#[derive(Serialize)]
struct SpectrumOut {
    region: Region,
    spectrum: regdom::spectra::SpectrumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<regdom::spectra::CertOutcome>,
}

#[derive(Serialize)]
struct PencilOut {
    alpha: f64,
    roots: Vec<ComplexPoint>,
    max_residual: f64,
    stable: bool,
    spectrum: regdom::spectra::SpectrumReport,
}

#[derive(Serialize)]
struct RhOut {
    stable: bool,
    #[serde(flatten)]
    rh: regdom::second_order::RhReport,
}

#[derive(Serialize)]
struct RelativeOut {
    decay: f64,
    check: regdom::report::CheckReport,
    sampling: regdom::spectra::SamplingVerdict,
}

#[derive(Serialize)]
struct PerturbOut {
    form: PerturbationForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbed: Option<SecondOrderSystem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<regdom::spectra::SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<regdom::spectra::SamplingVerdict>,
}

#[derive(Serialize)]
struct ReduceOut {
    reduction: regdom::fractional::BlockReduction,
    pencil_roots: Vec<ComplexPoint>,
    eigenvalues: Vec<ComplexPoint>,
    max_root_distance: f64,
}

fn points(v: &[regdom::Complex64]) -> Vec<ComplexPoint> {
    v.iter().copied().map(ComplexPoint::from).collect()
}

fn verdict_text<T: std::fmt::Debug>(label: &str, v: T) -> String {
    format!("{label}: {}\n", format!("{v:?}").to_lowercase())
}

fn execute(cli: &Cli) -> CliResult<Rendered> {
    match &cli.command {
        Command::Dominance { matrix, region } => {
            let a = io::read_matrix(matrix)?;
            let region = parse_region(region)?;
            let r = is_region_dominant(&a, &region)?;
            let text = format!("{}: {:?} (min margin {})\n", r.region, r.verdict, r.min_margin());
            render(cli, "dominance", &r, text, None)
        }
        Command::Spectrum { matrix, region, certificate } => {
            let a = io::read_matrix(matrix)?;
            let region = parse_region(region)?;
            let spectrum = is_region_stable(&a, &region)?;
            let certificate = if *certificate { Some(diagonal_stability_certificate(&a)?) } else { None };
            let text = verdict_text(&format!("spectrum in {region}"), spectrum.verdict);
            let csv = Some(spectrum.to_csv());
            render(cli, "spectrum", &SpectrumOut { region, spectrum, certificate }, text, csv)
        }
        Command::Region { region } => {
            let region = parse_region(region)?;
            let t = region.traits()?;
            let text = format!(
                "{region}: real interval ({}, {}), x_max {}, recession {:?}\n",
                t.alpha_r, t.beta_r, t.x_max, t.recession
            );
            render(cli, "region", &t, text, None)
        }
        Command::SecondOrder { a, b, method, alpha, decay, comm_tol, d, form, class, sampling } => {
            let sys = SecondOrderSystem::new(io::read_matrix(a)?, io::read_matrix(b)?)?;
            second_order(cli, &sys, *method, *alpha, *decay, *comm_tol, d.as_deref(), *form, *class, sampling)
        }
        Command::Fractional { matrix, gamma, check, theta, d_hat, sampling } => {
            let fsys = FractionalSystem::new(io::read_matrix(matrix)?, *gamma)?;
            fractional(cli, &fsys, *check, *theta, d_hat.as_deref(), sampling)
        }
        Command::Sample { matrix, region, class, sampling } => {
            let a = io::read_matrix(matrix)?;
            let region = parse_region(region)?;
            let v = d_stability_sample_with(&a, &region, class_of(*class), sampling.trials, sampling.seed, sampling.threads)?;
            let text = format!("{}\n", v.summary());
            render(cli, "sample", &v, text, None)
        }
        Command::Demo { omega_n, out_dir, x_min, x_max } => {
            let r = demo::feedback_demo(*omega_n)?;
            let boundary = demo::boundary_csv(*x_min, *x_max)?;
            if let Some(dir) = out_dir {
                io::write_file(&dir.join("poles.csv"), &r.poles_csv())?;
                io::write_file(&dir.join("boundary.csv"), &boundary)?;
            }
            let text = format!(
                "{} gain points, max |3x^2 - y^2 - 1| = {:e}, all in closure of {}: {}, flagged: {}\n",
                r.points.len(),
                r.max_locus_residual,
                r.region,
                r.all_in_closure,
                r.points.iter().filter(|p| !p.in_parameter_set).count()
            );
            let csv = Some(r.poles_csv());
            render(cli, "demo", &r, text, csv)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn second_order(
    cli: &Cli,
    sys: &SecondOrderSystem,
    method: Method,
    alpha: f64,
    decay: Option<f64>,
    comm_tol: f64,
    d: Option<&[f64]>,
    form: FormArg,
    class: ClassArg,
    sampling: &SamplingArgs,
) -> CliResult<Rendered> {
    let half = Region::half_plane(alpha)?;
    let need_decay = || decay.ok_or_else(|| CliError::Input("--decay is required for this method".into()));
    match method {
        Method::Spectrum => {
            let p = pencil_spectrum(sys)?;
            let spectrum = region_report(&p.roots(), &half);
            let out = PencilOut {
                alpha,
                stable: spectrum.is_stable(),
                roots: p.roots.clone(),
                max_residual: p.max_residual,
                spectrum,
            };
            let text = verdict_text(&format!("companion spectrum in Re z < {alpha}"), out.spectrum.verdict);
            let csv = Some(eigenvalues_csv(p.roots()));
            render(cli, "second-order", &out, text, csv)
        }
        Method::Triangular => {
            let roots = triangular_spectrum(sys)?;
            let stable = triangular_shifted_stable(sys, alpha)?;
            let out = PencilOut {
                alpha,
                stable,
                roots: points(&roots),
                max_residual: 0.0,
                spectrum: region_report(&roots, &half),
            };
            let text = format!("triangular pair, Re z < {alpha}: {}\n", if stable { "stable" } else { "unstable" });
            render(cli, "second-order", &out, text, Some(eigenvalues_csv(roots)))
        }
        Method::Rh => {
            let rh = rh_analysis_with_tol(sys, alpha, comm_tol)?;
            let stable = rh.verdict == regdom::report::Verdict::Pass;
            let text = format!("Routh-Hurwitz, Re z < {alpha}: {}\n", if stable { "stable" } else { "unstable" });
            render(cli, "second-order", &RhOut { stable, rh }, text, None)
        }
        Method::T2 => {
            let r = t2_shifted_stable(sys, alpha)?;
            let text = verdict_text("shifted stability", r.verdict);
            render(cli, "second-order", &r, text, None)
        }
        Method::Sufficient => {
            let r = sufficient_d_stability(sys)?;
            let text = verdict_text("sufficient D-stability", r.check.verdict);
            render(cli, "second-order", &r, text, None)
        }
        Method::Relative => {
            let decay = need_decay()?;
            let check = relative_d_stability_check(sys, decay)?;
            let sampling = relative_d_stability_sample(sys, decay, sampling.trials, sampling.seed, sampling.threads)?;
            let text = verdict_text("relative D-stability", check.verdict);
            render(cli, "second-order", &RelativeOut { decay, check, sampling }, text, None)
        }
        Method::Form2 => {
            let r = form2_parabola_analysis(sys, decay, sampling.trials, sampling.seed, sampling.threads)?;
            let text = format!(
                "Form II: stability {:?}, dominance {:?}\n",
                r.stability.verdict, r.dominance.verdict
            )
            .to_lowercase();
            render(cli, "second-order", &r, text, None)
        }
        Method::Perturb => {
            let form: PerturbationForm = form.into();
            let out = match d {
                Some(d) => {
                    let p = perturb(sys, d, form)?;
                    let spectrum = region_report(&eigenvalues(&companion(&p))?, &half);
                    PerturbOut {
                        form,
                        d: Some(d.to_vec()),
                        perturbed: Some(p),
                        spectrum: Some(spectrum),
                        sampling: None,
                    }
                }
                None => PerturbOut {
                    form,
                    d: None,
                    perturbed: None,
                    spectrum: None,
                    sampling: Some(sample_perturbed(
                        sys,
                        form,
                        class_of(class),
                        &half,
                        sampling.trials,
                        sampling.seed,
                        sampling.threads,
                    )?),
                },
            };
            let text = match (&out.spectrum, &out.sampling) {
                (Some(s), _) => verdict_text("perturbed spectrum", s.verdict),
                (_, Some(v)) => format!("{}\n", v.summary()),
                _ => String::new(),
            };
            render(cli, "second-order", &out, text, None)
        }
    }
}

fn fractional(
    cli: &Cli,
    fsys: &FractionalSystem,
    check: FracCheck,
    theta: Option<f64>,
    d_hat: Option<&[f64]>,
    sampling: &SamplingArgs,
) -> CliResult<Rendered> {
    let theta = theta.unwrap_or_else(|| stability_angle(fsys.gamma));
    match check {
        FracCheck::Stability => {
            let r = is_frac_stable(fsys)?;
            let text = verdict_text(&format!("order {} sector test", fsys.gamma), r.spectrum.verdict);
            let csv = Some(r.spectrum.to_csv());
            render(cli, "fractional", &r, text, csv)
        }
        FracCheck::Reduce => {
            let reduction = block_reduce(&fsys.a)?;
            let roots = reduction.pencil_roots()?;
            let ev = eigenvalues(&fsys.a)?;
            let out = ReduceOut {
                max_root_distance: regdom::linalg::multiset_distance(&roots, &ev),
                pencil_roots: points(&roots),
                eigenvalues: points(&ev),
                reduction,
            };
            let text = format!(
                "A_hat = {:?}\nB_hat = {:?}\nroot distance {:e}\n",
                to_rows(&out.reduction.a_hat),
                to_rows(&out.reduction.b_hat),
                out.max_root_distance
            );
            render(cli, "fractional", &out, text, None)
        }
        FracCheck::Sector => {
            let r = block_sector_check(&fsys.a, theta)?;
            let text = verdict_text("sector check", r.check.verdict);
            render(cli, "fractional", &r, text, None)
        }
        FracCheck::Corollary => {
            let r = corollary_cor_check(&fsys.a, theta)?;
            let text = verdict_text("corollary check", r.check.verdict);
            render(cli, "fractional", &r, text, None)
        }
        FracCheck::Family => {
            let r = perturbed_family_check(&fsys.a, fsys.gamma, d_hat, sampling.trials, sampling.seed, sampling.threads)?;
            let text = format!("{}{}\n", verdict_text("family check", r.sector.check.verdict), r.sampling.summary());
            render(cli, "fractional", &r, text, None)
        }
        FracCheck::HighGamma => {
            let r = high_gamma_check(fsys, sampling.trials, sampling.seed, sampling.threads)?;
            let text = format!("{}{}\n", verdict_text("high-order check", r.check.verdict), r.sampling.summary());
            render(cli, "fractional", &r, text, None)
        }
    }
}

/// Runs one parsed command. Errors become an exit code and a message.
pub fn run(cli: &Cli) -> Output {
    match execute(cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => r.json + "\n",
                Format::Text => r.text,
                Format::Csv => r.csv.unwrap_or_else(|| r.json + "\n"),
            };
            Output { code: EXIT_OK, stdout }
        }
        Err(e) => Output {
            code: e.exit_code(),
            stdout: format!("error: {e}\n"),
        },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Output {
            code: if e.use_stderr() { EXIT_INPUT } else { EXIT_OK },
            stdout: e.to_string(),
        },
    }
}
