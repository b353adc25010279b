use campus_core::scenario::DEFAULT_SCENARIO_TOML;
use campussim::commands::{self, default_parallelism, CliError, GenerateArgs, RunArgs};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "campussim", version, about = "Campus infection simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an ensemble for a scenario or a set of presets.
    Run(RunArgs),
    /// Serve scenarios and results over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "CAMPUSSIM_DATA_DIR", default_value = "campussim-data")]
        data_dir: PathBuf,
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Write a synthetic enrollment file.
    GenerateCampus(GenerateArgs),
    /// List policy presets.
    Presets,
    /// Print the default scenario file.
    DefaultConfig,
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match commands::run(&args) {
            Ok(table) => {
                print!("{}", table.to_table());
                if !args.quiet {
                    eprintln!("results written to {}", args.out.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::GenerateCampus(args) => match commands::generate_campus(&args) {
            Ok(summary) => {
                eprintln!("{summary}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Presets => {
            print!("{}", commands::presets_table(84));
            ExitCode::SUCCESS
        }
        Command::DefaultConfig => {
            print!("{DEFAULT_SCENARIO_TOML}");
            ExitCode::SUCCESS
        }
        Command::Serve { port, data_dir, parallel } => {
            let parallel = parallel.unwrap_or_else(default_parallelism);
            if let Err(e) = std::fs::create_dir_all(&data_dir) {
                return fail(CliError::Io(format!("{}: {e}", data_dir.display())));
            }
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => return fail(CliError::Io(e.to_string())),
            };
            match runtime.block_on(serve(port, data_dir, parallel)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(CliError::Io(e.to_string())),
            }
        }
    }
}

async fn serve(port: u16, data_dir: PathBuf, parallel: usize) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("serving on http://{} with data in {}", listener.local_addr()?, data_dir.display());
    axum::serve(listener, campussim::service::app(data_dir, parallel))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
