use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twophase_core::benchmark::{run, BenchmarkConfig, RunStatus};
use twophase_core::verify;

#[derive(Parser)]
#[command(name = "twophase", about = "Two-phase LDG/PLIC-VoF flow solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rising-bubble benchmark described by a `key = value` config file.
    Run(RunArgs),
    /// Run the property checks: adjointness, Poisson convergence, static droplet.
    Verify,
    /// Print the version.
    Version,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long, value_parser = ["1", "2"])]
    case: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    degree: Option<usize>,
}

fn load(args: &RunArgs) -> twophase_core::Result<BenchmarkConfig> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| twophase_core::Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = BenchmarkConfig::parse(&text)?;
    let overrides = [
        ("nx", args.nx.map(|v| v.to_string())),
        ("ny", args.ny.map(|v| v.to_string())),
        ("tend", args.tend.map(|v| v.to_string())),
        ("case", args.case.clone()),
        ("outdir", args.out.as_ref().map(|p| p.display().to_string())),
        ("degree", args.degree.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_command(args: &RunArgs) -> ExitCode {
    let cfg = match load(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(RunStatus::ConfigError.code() as u8);
        }
    };
    let outcome = run(&cfg);
    if let Some(last) = outcome.rows.last() {
        println!(
            "steps {}  t {:.6}  y_c {:.6}  rise velocity {:.6}  circularity {:.6}  mass drift {:.3e}",
            outcome.steps, last.t, last.y_c, last.rise_velocity, last.circularity, last.mass_drift
        );
    }
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.status.code() as u8)
}

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn verify_command() -> ExitCode {
    let mut all = true;
    let mut step = |r: twophase_core::Result<bool>, name: &str| match r {
        Ok(ok) => all &= ok,
        Err(e) => {
            all = false;
            println!("FAIL {name}: {e}");
        }
    };
    step(
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..=2 {
                for (nx, ny) in [(4, 4), (7, 5)] {
                    worst = worst.max(verify::adjointness_defect(nx, ny, k)?);
                }
            }
            Ok(report("adjointness", worst <= 1e-12, format!("max relative defect {worst:.2e} (limit 1e-12)")))
        })(),
        "adjointness",
    );
    step(
        (|| {
            let mut ok = true;
            for k in [1, 2] {
                let e = verify::poisson_errors(k, &[8, 16, 32, 64])?;
                let orders = verify::observed_orders(&e);
                let last = *orders.last().unwrap();
                ok &= report(
                    &format!("poisson k={k}"),
                    last >= k as f64 + 0.7,
                    format!("orders {orders:.2?}, last {last:.2} (limit {:.1})", k as f64 + 0.7),
                );
            }
            Ok(ok)
        })(),
        "poisson",
    );
    step(
        (|| {
            let d = verify::static_droplet(40, 80, 50)?;
            let rel = (d.pressure_jump - d.expected_jump).abs() / d.expected_jump;
            let a = report("droplet pressure jump", rel <= 0.1, format!("{:.3} vs {:.3} ({:.1}%)", d.pressure_jump, d.expected_jump, 100.0 * rel));
            let b = report(
                "droplet spurious velocity",
                d.max_cell_velocity <= 0.01,
                format!("cell-mean max {:.3e}, pointwise max {:.3e} (limit 1e-2)", d.max_cell_velocity, d.max_point_velocity),
            );
            Ok(a && b)
        })(),
        "static droplet",
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(&args),
        Command::Verify => verify_command(),
        Command::Version => {
            println!("twophase {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}
