mod args;
mod commands;
mod manifest;

use clap::error::ErrorKind;
use clap::Parser;
use qzrp::Budget;

use args::Cli;
use commands::{Ctx, Failure};
use manifest::RunManifest;

const EXIT_FAIL: i32 = 1;
const EXIT_BUDGET: i32 = 2;
const EXIT_USAGE: i32 = 3;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(run(argv));
}

fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            let mut m = RunManifest::new(argv, Budget::from_env().limit);
            m.outcome = manifest::Outcome { status: "usage", exit_code: EXIT_USAGE, summary: e.kind().to_string() };
            eprintln!("manifest: {}", serde_json::to_string(&m).expect("serializable"));
            return EXIT_USAGE;
        }
    };
    if let Some(j) = cli.common.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("invalid --jobs {j}");
            return EXIT_USAGE;
        }
    }
    let budget = Budget::new(cli.common.budget.unwrap_or(Budget::DEFAULT_LIMIT));
    let mut ctx = Ctx { out: cli.common.out.clone(), budget, manifest: RunManifest::new(argv, budget.limit) };
    let (status, code, summary) = match commands::dispatch(&cli.command, &mut ctx) {
        Ok(s) => ("pass", 0, s),
        Err(Failure::Assertion(s)) => ("fail", EXIT_FAIL, s),
        Err(Failure::Lib(e @ qzrp::Error::Budget { .. })) => ("budget", EXIT_BUDGET, e.to_string()),
        Err(Failure::Lib(e @ qzrp::Error::Contract(_))) => ("usage", EXIT_USAGE, e.to_string()),
        Err(Failure::Lib(e)) => ("error", EXIT_FAIL, e.to_string()),
        Err(Failure::Usage(s)) => ("usage", EXIT_USAGE, s),
        Err(Failure::Io(e)) => ("error", EXIT_FAIL, format!("i/o error: {e}")),
    };
    eprintln!("{status}: {summary}");
    ctx.manifest.outcome = manifest::Outcome { status, exit_code: code, summary };
    match &ctx.out {
        Some(dir) => {
            let text = serde_json::to_string_pretty(&ctx.manifest).expect("serializable") + "\n";
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join("manifest.json"), text)) {
                eprintln!("could not write manifest: {e}");
                return EXIT_FAIL;
            }
        }
        None => eprintln!("manifest: {}", serde_json::to_string(&ctx.manifest).expect("serializable")),
    }
    code
}
