use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kflip::koszul::{build_koszul, grid, listed_table_tally, verify_solution_tables};
use kflip::presentation::{
    assemble_verified_presentation, cross_check, exit_code, serialize_presentation,
    serialize_report, Format,
};
use kflip::repring::{build_case, CaseParams};
use kflip::Error;

#[derive(Parser)]
#[command(
    name = "kflip",
    version,
    about = "Complex K-ring of flip Stiefel manifolds FV_{m,2s}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the ring presentation of one case
    Present {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        s: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check for one case; exit 1 on a gating failure
    Verify {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        s: i64,
        /// Also run the Clifford geometry and the Laurent-character oracle
        #[arg(long)]
        deep: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Verify every valid case with 5 ≤ m ≤ m-max and even s ≤ s-max
    Grid {
        #[arg(long)]
        m_max: i64,
        #[arg(long)]
        s_max: i64,
    },
    /// Check the solution tables row by row (m odd, s ≡ 0 mod 4)
    Tables {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        s: i64,
    },
}

fn case(m: i64, s: i64) -> Result<CaseParams, ExitCode> {
    build_case(m, s).map_err(|e| {
        eprintln!("kflip: {e}");
        ExitCode::from(2)
    })
}

fn fail(e: Error) -> ExitCode {
    eprintln!("kflip: {e}");
    ExitCode::from(1)
}

fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Present { m, s, format, out } => {
            let p = case(m, s)?;
            let text = serialize_presentation(&assemble_verified_presentation(&p), format.into())
                .map_err(fail)?;
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    eprintln!("kflip: {}: {e}", path.display());
                    ExitCode::from(1)
                })?,
                None => emit(&text),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { m, s, deep, format } => {
            let p = case(m, s)?;
            let report = cross_check(&p, deep);
            emit(&serialize_report(&report, format.into()).map_err(fail)?);
            Ok(ExitCode::from(exit_code(&report) as u8))
        }
        Command::Grid { m_max, s_max } => {
            let cases = grid(m_max, s_max);
            let mut worst = 0;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>4} {:>4} {:>9} {:>6} {:>7} {:>8}  status",
                "m", "s", "case", "alpha", "checks", "failed"
            );
            for p in &cases {
                let r = cross_check(p, false);
                let failed: Vec<_> = r
                    .records
                    .iter()
                    .filter(|c| c.gating && c.status == kflip::presentation::Status::Fail)
                    .collect();
                let code = exit_code(&r);
                worst = worst.max(code);
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>9} {:>6} {:>7} {:>8}  {}",
                    p.m,
                    p.s,
                    p.case.to_string(),
                    p.alpha,
                    r.records.len(),
                    failed.len(),
                    if code == 0 {
                        "ok".to_string()
                    } else {
                        failed
                            .iter()
                            .map(|c| c.name.as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    }
                );
            }
            let _ = writeln!(out, "{} cases", cases.len());
            emit(&out);
            Ok(ExitCode::from(worst as u8))
        }
        Command::Tables { m, s } => {
            let p = case(m, s)?;
            let kd = build_koszul(&p).map_err(fail)?;
            let rows = verify_solution_tables(&kd).map_err(|e| {
                eprintln!("kflip: {e}");
                ExitCode::from(2)
            })?;
            let mut out = String::new();
            for r in &rows {
                let tuple = match r.tuple_consistent {
                    Some(true) => "tuple ok",
                    Some(false) => "tuple MISMATCH",
                    None => "",
                };
                let _ = writeln!(out, "{:<6} {:?}  {}  {}", r.id, r.status, r.detail, tuple);
            }
            let (pass, inst) = listed_table_tally(&rows);
            let _ = writeln!(out, "listed rows in Ker(d1): {pass}/{inst}");
            emit(&out);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli).unwrap_or_else(|code| code)
}
