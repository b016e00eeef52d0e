use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logbloch::report::{emit_divergence, ReportFormat};
use logbloch::series_io::{read_series, to_text, write_series};
use logbloch::{emit_report, run_divergence_demo, run_verify, Error, Result, VerifyConfig};
use logbloch_core::{
    build_vn, cesaro, frame_norm_b1, frame_norm_bloch, frame_norm_loglog, k_alpha, libera_coeff,
    little_bloch_profile, pairing, s_alpha, BumpFunction, CoefficientSeries, Frame, LogLogMode,
    MembershipVerdict, Quadrature, WeightSpec,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "logbloch", version, about = "Norms, operators and verification suites for logarithmic Bloch-type spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the frame polynomial V_n as a series file.
    Frame {
        #[arg(long)]
        n: usize,
        /// `default` or `mollifier:<sharpness>`.
        #[arg(long, default_value = "default")]
        omega: String,
        /// Output file (stdout when omitted; `.json` selects JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a norm of a series as JSON.
    Norm(NormArgs),
    /// Apply an operator or evaluate the pairing.
    Op(OpArgs),
    /// Print a coefficient criterion against its direct norm, or a block profile.
    Criteria {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_enum)]
        which: Criterion,
    },
    /// Run every suite and the divergence demo; exit status 0 iff all pass.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Libera values at 0 and frame norms of f_r for r = 1 - 2^-m.
    DemoDivergence {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20")]
        m: Vec<u32>,
        #[arg(long, default_value_t = 4.0)]
        band: f64,
        #[arg(long, default_value_t = 2.0)]
        min_growth: f64,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Bloch,
    Bloch1,
    Hardy,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedWeight {
    Loglog,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    space: Space,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "weight")]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    weight: Option<NamedWeight>,
    /// Exponent for `hardy` (`inf` allowed).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
}

#[derive(Args)]
struct OpArgs {
    #[arg(long, value_enum, required_unless_present = "pair", requires_all = ["input", "out"])]
    apply: Option<Operator>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["F", "G"], conflicts_with_all = ["apply", "input", "out"])]
    pair: Option<Vec<PathBuf>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Cesaro,
    Libera,
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    S,
    K,
    FrameB1,
    FrameBloch,
    Profile,
    Loglog,
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn weight_of(alpha: Option<f64>, weight: Option<NamedWeight>) -> Result<WeightSpec> {
    match (alpha, weight) {
        (Some(a), None) => Ok(WeightSpec::LogAlpha(a)),
        (None, Some(NamedWeight::Loglog)) => Ok(WeightSpec::LogLog),
        _ => Err(Error::Config(String::from("give exactly one of --alpha or --weight"))),
    }
}

fn norm(args: &NormArgs) -> Result<()> {
    let f = read_series(&args.input)?;
    let quad = Quadrature::default();
    let result = match args.space {
        Space::Hardy => quad.hardy_norm(&f, args.p)?,
        Space::Bloch => quad.bloch_norm(&f, &weight_of(args.alpha, args.weight)?)?,
        Space::Bloch1 => quad.bloch1_log_norm(&f, &weight_of(args.alpha, args.weight)?)?,
    };
    print_json(&result)
}

fn op(args: &OpArgs) -> Result<()> {
    if let Some(files) = &args.pair {
        let f = read_series(&files[0])?;
        let g = read_series(&files[1])?;
        let v = pairing(&f, &g);
        return print_json(&json!({"re": v.value.re, "im": v.value.im, "terms": v.terms}));
    }
    let (Some(op), Some(input), Some(out)) = (args.apply, &args.input, &args.out) else {
        return Err(Error::Config(String::from("--apply needs --in and --out")));
    };
    let f = read_series(input)?;
    let image = match op {
        Operator::Cesaro => cesaro(&f),
        Operator::Libera => libera_coeff(&f),
    };
    write_series(out, &image)
}

fn criteria(input: &Path, alpha: f64, which: Criterion) -> Result<()> {
    let f = read_series(input)?;
    let quad = Quadrature::default();
    let frame = Frame::covering(f.degree(), BumpFunction::default());
    let area = |g: &CoefficientSeries, w: WeightSpec| quad.bloch1_log_norm(g, &w).map(|n| n.value);
    let verdict = match which {
        Criterion::Profile => {
            let prof = little_bloch_profile(&quad, &f, alpha, &frame)?;
            return print_json(&json!({"alpha": alpha, "profile": prof}));
        }
        Criterion::S => {
            let a: Vec<f64> = f.coeffs().iter().map(|c| c.re).collect();
            if f.coeffs().iter().any(|c| c.im != 0.0) {
                return Err(Error::Config(String::from("S_alpha needs real coefficients")));
            }
            let s = s_alpha(&a, alpha)?;
            let note = scope_note(s.in_scope, "alpha >= -1");
            MembershipVerdict::new(format!("B1_log_alpha({alpha})"), area(&f, WeightSpec::LogAlpha(alpha))?, s.value, note)?
        }
        Criterion::K => {
            let k = k_alpha(&f, alpha)?;
            let note = scope_note(k.in_scope, "alpha > -1");
            let lg = libera_coeff(&f);
            MembershipVerdict::new(format!("L(B1_log_alpha({alpha}))"), area(&lg, WeightSpec::LogAlpha(alpha))?, k.value, note)?
        }
        Criterion::FrameB1 => MembershipVerdict::new(
            format!("B1_log_alpha({alpha})"),
            area(&f, WeightSpec::LogAlpha(alpha))?,
            frame_norm_b1(&quad, &f, alpha, &frame)?,
            "frame sum",
        )?,
        Criterion::FrameBloch => MembershipVerdict::new(
            format!("B_log_alpha({alpha})"),
            quad.bloch_log_norm(&f, alpha)?.value,
            frame_norm_bloch(&quad, &f, alpha, &frame)?,
            "frame sup",
        )?,
        Criterion::Loglog => MembershipVerdict::new(
            "B1_loglog",
            area(&f, WeightSpec::LogLog)?,
            frame_norm_loglog(&quad, &f, LogLogMode::B1, &frame)?,
            "frame sum with log(n+2); alpha ignored",
        )?,
    };
    print_json(&verdict)
}

fn scope_note(in_scope: bool, scope: &str) -> String {
    if in_scope {
        String::from("in scope")
    } else {
        format!("outside the characterised range {scope}")
    }
}

fn verify(config: Option<&Path>, out: &Path, format: ReportFormat) -> Result<bool> {
    let cfg = match config {
        Some(p) => VerifyConfig::load(p)?,
        None => VerifyConfig::default(),
    };
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let outcome = run_verify(&cfg)?;
    let ext = format.extension();
    emit_report(&outcome.reports, format, &out.join(format!("reports.{ext}")))?;
    emit_divergence(&outcome.divergence, format, &out.join(format!("divergence.{ext}")))?;
    let failures = outcome.failures();
    eprintln!(
        "{} reports, {} failing; divergence demo {}",
        outcome.reports.len(),
        outcome.reports.iter().filter(|r| !r.pass).count(),
        if outcome.divergence.pass { "passes" } else { "fails" }
    );
    for f in &failures {
        eprintln!("FAIL {f}");
    }
    Ok(outcome.all_pass())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Frame { n, omega, out } => {
            let bump = BumpFunction::from_spec(&omega)?;
            let v = build_vn(n, &bump).to_series();
            match out {
                Some(path) => write_series(&path, &v)?,
                None => print!("{}", to_text(&v)),
            }
        }
        Command::Norm(args) => norm(&args)?,
        Command::Op(args) => op(&args)?,
        Command::Criteria { input, alpha, which } => criteria(&input, alpha, which)?,
        Command::Verify { config, out, format } => return verify(config.as_deref(), &out, format),
        Command::DemoDivergence {
            alpha,
            eps,
            m,
            band,
            min_growth,
            out,
            format,
        } => {
            let quad = Quadrature::new(VerifyConfig::default().quadrature_config());
            let report = run_divergence_demo(&quad, alpha, eps, &m, band, min_growth)?;
            print_json(&logbloch::report::rounded_divergence(&report))?;
            if let Some(path) = out {
                emit_divergence(&report, format, &path)?;
            }
            return Ok(report.pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
