// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::Complex;
use optomech::scenario::{
    self, Objective, RawConfig, ScenarioConfig, ScenarioError, DEFAULT_Q_MAX,
};
use optomech::SystemSpec;

#[derive(Parser)]
#[command(name = "optomech", version = optomech::VERSION, about = "Two-cavity optomechanical interface scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate a figure data set or run a custom sweep.
    Run {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `section.key=value`, repeatable; wins over the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Best detuning on the grid δ = 2G√q for a bath occupation.
    Optimize {
        #[arg(long = "n-th")]
        n_th: f64,
        #[arg(long = "n-m", default_value_t = 20.0)]
        n_m: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long = "q-max", default_value_t = DEFAULT_Q_MAX)]
        q_max: u64,
        /// Cavity damping κ1 = κ2.
        #[arg(long, default_value_t = 0.025)]
        kappa: f64,
        #[arg(long = "gamma-m", default_value_t = 5e-4)]
        gamma_m: f64,
        /// Maximize the propagated fidelity instead of the closed form.
        #[arg(long)]
        exact: bool,
    },
}

fn run(command: Command) -> Result<String, ScenarioError> {
    match command {
        Command::Run {
            scenario,
            config,
            out,
            set,
        } => {
            let mut raw = match &config {
                Some(path) => RawConfig::from_file(path)?,
                None => RawConfig::default(),
            };
            for s in &set {
                raw.set(s)?;
            }
            let mut cfg = ScenarioConfig::resolve(&raw, scenario.as_deref())?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let bundle = scenario::run(&cfg)?;
            let mut msg = String::new();
            for w in &bundle.manifest.warnings {
                eprintln!("warning: {w}");
            }
            for p in &bundle.written {
                msg.push_str(&format!("wrote {}\n", p.display()));
            }
            Ok(msg)
        }
        Command::Optimize {
            n_th,
            n_m,
            alpha,
            q_max,
            kappa,
            gamma_m,
            exact,
        } => {
            let field = |name: &str, v: f64| {
                if v.is_finite() && v >= 0.0 {
                    Ok(())
                } else {
                    Err(ScenarioError::InvalidConfig {
                        field: name.into(),
                        message: format!("{v} must be finite and >= 0"),
                    })
                }
            };
            field("--n-th", n_th)?;
            field("--n-m", n_m)?;
            field("--kappa", kappa)?;
            field("--gamma-m", gamma_m)?;
            let spec = SystemSpec::default()
                .with_cavity_damping(kappa, kappa)
                .with_mechanical_damping(gamma_m);
            let objective = if exact {
                Objective::Exact
            } else {
                Objective::ClosedForm
            };
            let best = scenario::optimize_detuning_by(
                &spec,
                n_th,
                Complex::new(alpha, 0.0),
                n_m,
                q_max,
                objective,
            )?;
            Ok(serde_json::to_string_pretty(&best).expect("serializable") + "\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(msg) => {
            print!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
