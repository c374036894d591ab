use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use telecloning::analysis::{man, ScenarioConfig};
use telecloning::figures::{figure_data, FigureId};
use telecloning::protocol::run_schedule;
use telecloning::report::OutputTable;
use telecloning::scenario::load_scenario;
use telecloning::states::DisentangleParams;
use telecloning::tables::{table_data, TableId};
use telecloning::tolerances;

#[derive(Parser)]
#[command(name = "telecloning", version, about = "Sequential telecloning with unsharp Bell measurements")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// MAN range tables with reference values and differences
    Tables {
        #[arg(long, value_parser = parse_table)]
        which: TableId,
    },
    /// Write sampled figure data as CSV
    Fig {
        #[arg(long, value_parser = parse_figure)]
        id: FigureId,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximal attempting number and the minimal λ schedule
    Man {
        #[arg(long)]
        receivers: usize,
        #[arg(long = "f-min")]
        f_min: f64,
        #[arg(long = "eta-p")]
        eta_p: Option<f64>,
        /// Applied to every receiver
        #[arg(long = "eta-c")]
        eta_c: Option<f64>,
    },
    /// Run a JSON scenario through the density-matrix simulator
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Exit 1 if any simulated fidelity departs from its closed form
        #[arg(long)]
        verify: bool,
    },
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse().map_err(|e: telecloning::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: telecloning::Error| e.to_string())
}

enum Outcome {
    Ok,
    VerifyFailed,
}

fn print(table: &OutputTable) {
    print!("{}", table.to_annotated_csv());
}

fn verify_tolerance() -> anyhow::Result<f64> {
    match std::env::var(tolerances::VERIFY_ENV) {
        Ok(v) => {
            let tol: f64 =
                v.trim().parse().with_context(|| format!("{} = {v:?} is not a number", tolerances::VERIFY_ENV))?;
            anyhow::ensure!(tol.is_finite() && tol >= 0.0, "{} must be a non-negative number", tolerances::VERIFY_ENV);
            Ok(tol)
        }
        Err(_) => Ok(tolerances::VERIFY),
    }
}

fn run(cmd: Cmd) -> anyhow::Result<Outcome> {
    match cmd {
        Cmd::Tables { which } => print(&table_data(which)?),
        Cmd::Fig { id, grid, out } => {
            let table = figure_data(id, grid)?;
            std::fs::write(&out, table.to_csv()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("wrote {} rows to {}", table.rows().len(), out.display());
        }
        Cmd::Man { receivers, f_min, eta_p, eta_c } => {
            let etas = DisentangleParams::new(eta_p.unwrap_or(1.0), 1.0, vec![eta_c.unwrap_or(1.0); receivers])?;
            let result = man(&ScenarioConfig { etas, f_min })?;
            let mut t = OutputTable::new(["round", "lambda_min"]).with_provenance(format!(
                "man --receivers {receivers} --f-min {f_min}{}{}",
                eta_p.map(|e| format!(" --eta-p {e}")).unwrap_or_default(),
                eta_c.map(|e| format!(" --eta-c {e}")).unwrap_or_default(),
            ));
            for (i, l) in result.lambda_schedule.iter().enumerate() {
                t.push_row(vec![(i + 1).into(), (*l).into()])?;
            }
            let t =
                t.with_provenance(format!("MAN = {}", result.man)).with_provenance(match result.first_invalid_lambda {
                    Some(l) => {
                        format!("round {} would need lambda = {}", result.man + 1, telecloning::report::format_real(l))
                    }
                    None => "search capped before lambda exceeded 1".to_owned(),
                });
            print(&t);
        }
        Cmd::Simulate { config, verify } => {
            let tol = verify_tolerance()?;
            let scenario = load_scenario(&config)?;
            let reports = run_schedule(&scenario.params, &scenario.schedule)?;
            let mut t =
                OutputTable::new(["round", "receiver", "lambda", "f_sim", "f_closed", "abs_diff"]).with_provenance(
                    format!("simulate --config {}{}", config.display(), if verify { " --verify" } else { "" }),
                );
            let mut failed = 0;
            for r in &reports {
                if r.abs_diff.is_some_and(|d| d > tol) {
                    failed += 1;
                }
                t.push_row(vec![
                    r.round.into(),
                    r.receiver.as_str().into(),
                    r.lambda.into(),
                    r.f_sim.into(),
                    r.f_closed.into(),
                    r.abs_diff.into(),
                ])?;
            }
            print(&t);
            if verify && failed > 0 {
                eprintln!("verification failed: {failed} row(s) differ from the closed form by more than {tol:e}");
                return Ok(Outcome::VerifyFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
