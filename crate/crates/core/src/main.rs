use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use merostar::classes::{
    classify_me, coeff_sufficient_me, me_functional, mf_margin, starlike_margin, ClassSpec, Family,
    MembershipVerdict, Status,
};
use merostar::extremal::Extremal;
use merostar::harness::{run_suite, Suite, SuiteParams};
use merostar::series::{DiscGrid, LaurentFunction, DEFAULT_ANGULAR_SAMPLES};
use merostar::tme::{check_tme_exact, decompose, refute_on_real_axis, TmeFunction};
use merostar::Error;

#[derive(Parser)]
#[command(name = "merostar", version)]
#[command(about = "Membership checks and verification suites for meromorphic function classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a series file against a class
    Check(CheckArgs),
    /// Print a named extremal or witness function as a series file
    Extremal(ExtremalArgs),
    /// Run a verification suite and write its JSON report
    Suite(SuiteArgs),
    /// Convex weights over the extreme points of the negative-coefficient class
    Decompose(DecomposeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Me,
    Mf,
    Starlike,
    Tme,
}

impl From<ClassArg> for Family {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Me => Family::Me,
            ClassArg::Mf => Family::Mf,
            ClassArg::Starlike => Family::Starlike,
            ClassArg::Tme => Family::Tme,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Outermost sampling radius (default schedule ends at 0.9999)
    #[arg(long)]
    grid_rmax: Option<f64>,
    /// Angles per radius
    #[arg(long, default_value_t = DEFAULT_ANGULAR_SAMPLES)]
    grid_theta: usize,
}

impl GridArgs {
    fn build(&self) -> merostar::Result<DiscGrid> {
        match self.grid_rmax {
            Some(r) => DiscGrid::with_rmax(r, self.grid_theta),
            None => DiscGrid::new(DiscGrid::default().radii().to_vec(), self.grid_theta),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    series: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    /// Write per-point margins as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremalArgs {
    /// One of thm21, thm23, rem1, expz, onemz2
    #[arg(long, required_unless_present = "list")]
    name: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// List the available names
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    name: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one CSV row per check
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    alpha: f64,
}

fn write_file(path: &Path, text: &str) -> merostar::Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

fn margin_csv(f: &LaurentFunction, spec: ClassSpec, grid: &DiscGrid) -> String {
    let mut out = String::from("r,theta,re,im,margin\n");
    for z in grid.points() {
        let m = match spec.family {
            Family::Me | Family::Tme => Some(me_functional(f, spec.alpha, z)),
            Family::Mf => mf_margin(f, spec.alpha, z),
            Family::Starlike => starlike_margin(f, spec.alpha, z),
        };
        let m = m.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", z.norm(), z.arg(), z.re, z.im, m);
    }
    out
}

fn run_check(args: &CheckArgs) -> merostar::Result<bool> {
    let family = Family::from(args.class);
    let spec = ClassSpec::new(family, args.alpha)?;
    let grid = args.grid.build()?;
    let (f, out) = match family {
        Family::Tme => {
            let t = TmeFunction::load(&args.series)?;
            let exact = check_tme_exact(&t, args.alpha)?;
            let f = t.to_laurent();
            let sampled = merostar::classes::check_me(&f, args.alpha, &grid)?;
            let mut out = json!({
                "class": family,
                "alpha": args.alpha,
                "member": exact.holds,
                "coefficient_margin": exact.margin,
                "sampled": sampled.to_json(),
            });
            if !exact.holds {
                out["real_axis"] = refute_on_real_axis(&t, args.alpha)?.to_json();
            }
            print_json(&out);
            (f, exact.holds)
        }
        _ => {
            let f = LaurentFunction::load(&args.series)?;
            let verdict: MembershipVerdict = match family {
                Family::Me => classify_me(&f, args.alpha, &grid)?,
                _ => merostar::classes::check_class(&f, spec, &grid)?,
            };
            let mut out = json!({
                "class": family,
                "alpha": args.alpha,
                "verdict": verdict.to_json(),
            });
            if family == Family::Me {
                let c = coeff_sufficient_me(&f, args.alpha)?;
                out["coefficient_test"] = json!({ "holds": c.holds, "margin": c.margin });
            }
            print_json(&out);
            let ok = verdict.status != Status::NonMember;
            (f, ok)
        }
    };
    if let Some(path) = &args.csv {
        write_file(path, &margin_csv(&f, spec, &grid))?;
    }
    Ok(out)
}

fn run_extremal(args: &ExtremalArgs) -> merostar::Result<()> {
    if args.list {
        for e in Extremal::ALL {
            println!("{:8} {}", e.name(), e.describe());
        }
        return Ok(());
    }
    let name: Extremal = args.name.as_deref().unwrap_or_default().parse()?;
    let f = name.build(args.alpha, args.n, args.degree)?;
    match &args.out {
        Some(path) => f.save(path),
        None => {
            print_json(&f.to_json());
            Ok(())
        }
    }
}

fn run_suite_cmd(args: &SuiteArgs) -> merostar::Result<bool> {
    let suite: Suite = args.name.parse()?;
    let params = SuiteParams {
        alpha: args.alpha,
        n: args.n,
        delta: args.delta,
        eps: args.eps,
        count: args.count,
        seed: args.seed,
        grid: args.grid.build()?,
    };
    let report = run_suite(suite, &params)?;
    match &args.out {
        Some(path) => report.save(path)?,
        None => print!("{}", report.to_json_string()),
    }
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    eprintln!(
        "{}: {} checks, {} failed, {} indeterminate, {} ms",
        report.suite,
        report.checks.len(),
        report.count(merostar::harness::CheckStatus::Fail),
        report.count(merostar::harness::CheckStatus::Indeterminate),
        report.runtime_ms
    );
    Ok(report.passed())
}

fn run_decompose(args: &DecomposeArgs) -> merostar::Result<()> {
    let t = TmeFunction::load(&args.series)?;
    let weights = decompose(&t, args.alpha)?;
    print_json(&json!({ "alpha": args.alpha, "weights": weights }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => run_check(a),
        Command::Extremal(a) => run_extremal(a).map(|_| true),
        Command::Suite(a) => run_suite_cmd(a),
        Command::Decompose(a) => run_decompose(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
