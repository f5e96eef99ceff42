mod args;
mod commands;
mod config;
mod error;
mod output;
mod verify;

use clap::Parser;

use args::{Cli, Command};
use config::{Defaults, Settings};
use error::{CliError, Result};

fn defaults(command: &Command) -> Defaults {
    let base = Defaults::default();
    match command {
        Command::Bare(_) => Defaults {
            nu: vec![0.1, 0.2, 0.5],
            ..base
        },
        Command::Method1Postselect(_) | Command::Method1Optimize(_) | Command::Wigner(_) => Defaults {
            db: vec![5.0],
            delta: if matches!(command, Command::Method1Postselect(_)) {
                base.delta.clone()
            } else {
                vec![0.1]
            },
            ..base
        },
        Command::Verify(_) => Defaults {
            db: vec![1.0, 5.0, 10.0],
            ..base
        },
        Command::Method1(_) | Command::Method2(_) => base,
    }
}

fn run(cli: Cli) -> Result<()> {
    let defaults = defaults(&cli.command);
    let (common, scan, tolerance) = match &cli.command {
        Command::Bare(c)
        | Command::Method1(c)
        | Command::Method1Postselect(c)
        | Command::Method2(c)
        | Command::Wigner(c) => (c, None, None),
        Command::Method1Optimize(o) => (&o.common, o.scan.as_deref(), None),
        Command::Verify(v) => (&v.common, None, v.tolerance),
    };
    let mut settings = Settings::resolve(common, defaults, scan, tolerance)?;
    if let Some(jobs) = settings.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    }
    let paths = match &cli.command {
        Command::Bare(_) => commands::bare(&settings)?,
        Command::Method1(_) => commands::method1(&settings)?,
        Command::Method1Postselect(_) => {
            // coherent sweep plus the single-photon input
            settings.params.fock_sweep = vec![1.0];
            commands::method1_postselect(&settings)?
        }
        Command::Method1Optimize(_) => commands::method1_optimize(&settings)?,
        Command::Method2(_) => commands::method2(&settings)?,
        Command::Wigner(_) => commands::wigner_panels(&settings)?,
        Command::Verify(v) => {
            let (report, path) = verify::run(&settings, v.grid_refine)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.pass {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
                return Err(CliError::Verification(format!(
                    "{} (report in {})",
                    failed.join(", "),
                    path.display()
                )));
            }
            vec![path]
        }
    };
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("cvpoly: {e}");
        std::process::exit(e.exit_code());
    }
}
