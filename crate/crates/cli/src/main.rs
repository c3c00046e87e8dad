use std::process::ExitCode;

use clap::Parser;
use leibniz_super_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LEIBNIZ_SUPER_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = report.render(cli.global.json);
            if !out.ends_with('\n') {
                out.push('\n');
            }
            match &cli.global.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{out}"),
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
