use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vbh::cohomolab::{atlas, omega_lambda_window, vbh_guaranteed_zero, BidegreeWindow, Space};
use vbh_cli::runner::{bracket, eval_expr};
use vbh_cli::{run_scenario, RunOptions, Scenario, DEFAULT_UDEG};

#[derive(Parser)]
#[command(
    name = "vbh",
    version,
    about = "Exact bihamiltonian computations on super jet spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and report per-task results.
    Verify {
        scenario: PathBuf,
        /// u-degree bound for probes that do not set one.
        #[arg(long, default_value_t = DEFAULT_UDEG)]
        udeg_bound: u32,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print the task inventory without running anything.
        #[arg(long)]
        list: bool,
    },
    /// Parse and evaluate expressions.
    Expr {
        #[command(subcommand)]
        cmd: ExprCmd,
    },
    /// Count monomials of a space by bidegree.
    Atlas {
        space: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        p_max: usize,
        #[arg(long, default_value_t = 6)]
        d_max: usize,
    },
    /// Print the index set, or classify one bidegree.
    Window {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "d")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        d: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ExprCmd {
    /// Print the canonical form of an expression.
    Eval {
        text: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Schouten bracket of two functionals.
    Bracket {
        a: String,
        b: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn verify(path: PathBuf, udeg_bound: u32, json: Option<PathBuf>, list: bool) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return usage(format!("{}: {e}", path.display())),
    };
    let sc = match Scenario::from_json(&text) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    if list {
        println!(
            "scenario {} (n = {}, {} tasks)",
            sc.name,
            sc.structure.n,
            sc.tasks.len()
        );
        for t in &sc.tasks {
            println!("  {} [{}] group {}", t.name, t.kind.label(), t.group);
        }
        return ExitCode::SUCCESS;
    }
    if let Err(e) = sc.validate() {
        return usage(format!("validation: {e}"));
    }
    let report = run_scenario(&sc, &RunOptions { udeg_bound });
    println!("{report}");
    if let Some(out) = json {
        if let Err(e) = std::fs::write(&out, report.to_json() + "\n") {
            return usage(format!("{}: {e}", out.display()));
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Verify {
            scenario,
            udeg_bound,
            json,
            list,
        } => verify(scenario, udeg_bound, json, list),
        Cmd::Expr {
            cmd: ExprCmd::Eval { text, n },
        } => match eval_expr(&text, n) {
            Ok((kind, canon)) => {
                println!("{kind}: {canon}");
                ExitCode::SUCCESS
            }
            Err(e) => usage(e),
        },
        Cmd::Expr {
            cmd: ExprCmd::Bracket { a, b, n },
        } => match bracket(&a, &b, n) {
            Ok(x) => {
                println!("{x}");
                ExitCode::SUCCESS
            }
            Err(e) => usage(e),
        },
        Cmd::Atlas {
            space,
            n,
            p_max,
            d_max,
        } => {
            let r = space
                .parse::<Space>()
                .and_then(|sp| atlas(sp, n, p_max, d_max));
            match r {
                Ok(a) => {
                    println!("{} n={n} p<={p_max} d<={d_max}", a.space);
                    for ((p, d), k) in &a.counts {
                        println!("({p},{d}) {k}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }
        Cmd::Window { n, p, d } => {
            if n == 0 {
                return usage("n must be positive");
            }
            match (p, d) {
                (Some(p), Some(d)) => {
                    println!(
                        "({p},{d}) guaranteed_zero={} omega_lambda={}",
                        vbh_guaranteed_zero(n, p, d),
                        omega_lambda_window(n, p, d)
                    );
                }
                _ => {
                    let w = BidegreeWindow::new(n);
                    let pts: Vec<String> = w
                        .index_set()
                        .iter()
                        .map(|(p, d)| format!("({p},{d})"))
                        .collect();
                    println!("index set n={n}: {}", pts.join(" "));
                }
            }
            ExitCode::SUCCESS
        }
    }
}
