//! `aap`: run the analysis-to-design gate from the command line.

mod error;
mod interactive;
mod render;

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aap_core::catalog::Catalog;
use aap_core::{
    decide, sweep, EngineConfig, IndexParams, IndexSnapshot, InstrumentBundle, PriMode,
    Recommendation,
};
use aap_store::{
    export_report, is_valid_project_id, load_project, save_project, IterationInput, ProjectConfig,
    ProjectRecord, Timestamp,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{exit, CliError};

#[derive(Parser)]
#[command(
    name = "aap",
    version,
    about = "Decide whether an analysis team is ready to move into design"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Human,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Literal,
    Pragmatic,
}

impl From<Mode> for PriMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Literal => PriMode::Literal,
            Mode::Pragmatic => PriMode::Pragmatic,
        }
    }
}

#[derive(Args)]
struct ProjectArg {
    /// Project document path, or a project id inside $AAP_STORE_DIR.
    #[arg(long, short = 'p')]
    project: String,
}

#[derive(Args)]
struct OutputArg {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Create a new project document.
    Init {
        #[command(flatten)]
        project: ProjectArg,
        #[arg(long)]
        name: String,
        /// Project id; generated when omitted.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Pragmatic)]
        mode: Mode,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long, default_value_t = 2.0)]
        core_weight: f64,
        #[arg(long, default_value_t = 1.0)]
        supporting_weight: f64,
        /// Share of PI taken from the peer-rating balance.
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = 3)]
        paralysis_window: usize,
        #[arg(long, default_value_t = 0.05)]
        stagnation_delta: f64,
    },
    /// Record a new iteration from instruments or index values.
    Assess {
        #[command(flatten)]
        project: ProjectArg,
        /// Instrument bundle file, or a file holding {"snapshot": {...}}.
        #[arg(
            long,
            conflicts_with = "interactive",
            required_unless_present = "interactive"
        )]
        from: Option<PathBuf>,
        /// Prompt for every instrument question on the terminal.
        #[arg(long)]
        interactive: bool,
        /// Directory overriding the default question catalogues.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Run the gate on the latest iteration of a project, or on a snapshot file.
    Decide {
        #[arg(
            long,
            short = 'p',
            required_unless_present = "snapshot",
            conflicts_with = "snapshot"
        )]
        project: Option<String>,
        /// File holding an index snapshot.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Override the project's PRI mode for this decision.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Exit 0 only when the gate is open, 1 otherwise.
        #[arg(long)]
        gate: bool,
        #[command(flatten)]
        output: OutputArg,
    },
    /// List the iterations of a project.
    History {
        #[command(flatten)]
        project: ProjectArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Decide on the latest snapshot with some indices replaced.
    Whatif {
        #[command(flatten)]
        project: ProjectArg,
        /// INDEX=VALUE, repeatable; F=unmeasured is accepted.
        #[arg(long = "set", value_name = "INDEX=VALUE", required = true)]
        sets: Vec<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Evaluate the gate over every point of a grid.
    Sweep {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.25,0.45,0.5,0.55,0.75,1"
        )]
        grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Pragmatic)]
        mode: Mode,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Write a Markdown report of the whole history.
    Report {
        #[command(flatten)]
        project: ProjectArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = aap_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, env = "AAP_STORE_DIR", default_value = "aap-store")]
        store: PathBuf,
        /// Built dashboard bundle to serve at /.
        #[arg(long, env = "AAP_DASHBOARD_DIR")]
        dashboard: Option<PathBuf>,
    },
}

/// Structured form of a single decision.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecisionDocument {
    snapshot: IndexSnapshot,
    recommendation: Recommendation,
}

fn resolve_project(value: &str) -> PathBuf {
    let path = PathBuf::from(value);
    if path.exists() || !is_valid_project_id(value) {
        return path;
    }
    match std::env::var_os(aap_service::STORE_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(format!("{value}.json")),
        None => path,
    }
}

fn load(project: &str) -> Result<(PathBuf, ProjectRecord), CliError> {
    let path = resolve_project(project);
    if !path.exists() {
        return Err(CliError::io(
            format!("project {}", path.display()),
            std::io::Error::from(std::io::ErrorKind::NotFound),
        ));
    }
    let record = load_project(&path)?;
    Ok((path, record))
}

fn print(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("writing output", e))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn engine_config(record: &ProjectRecord, mode: Option<Mode>) -> EngineConfig {
    let mut config = record.config.engine();
    if let Some(mode) = mode {
        config.pri_mode = mode.into();
    }
    config
}

fn latest_snapshot(record: &ProjectRecord) -> Result<IndexSnapshot, CliError> {
    record.latest().map(|it| it.snapshot).ok_or_else(|| {
        CliError::Usage(format!(
            "project `{}` has no iterations yet; run `aap assess` first",
            record.project.id
        ))
    })
}

fn read_assessment(path: &Path) -> Result<IterationInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let is_snapshot = value
        .as_object()
        .is_some_and(|o| o.len() == 1 && o.contains_key("snapshot"));
    let parsed = if is_snapshot {
        serde_json::from_value::<IndexSnapshot>(value["snapshot"].clone())
            .map(IterationInput::Snapshot)
    } else {
        serde_json::from_value::<InstrumentBundle>(value).map(IterationInput::Instruments)
    };
    parsed.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_snapshot_file(path: &Path) -> Result<IndexSnapshot, CliError> {
    match read_assessment(path) {
        Ok(IterationInput::Snapshot(s)) => Ok(s),
        Ok(IterationInput::Instruments(_)) => Err(CliError::Usage(format!(
            "{}: expected {{\"snapshot\": {{...}}}}",
            path.display()
        ))),
        Err(e) => Err(e),
    }
}

fn parse_set(spec: &str) -> Result<(String, Option<f64>), CliError> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects INDEX=VALUE, got `{spec}`")))?;
    let value = value.trim();
    if value.eq_ignore_ascii_case(aap_core::snapshot::UNMEASURED) {
        return Ok((name.trim().to_string(), None));
    }
    let v = value
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("--set {name}: `{value}` is not a number")))?;
    Ok((name.trim().to_string(), Some(v)))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Init {
            project,
            name,
            id,
            mode,
            threshold,
            core_weight,
            supporting_weight,
            lambda,
            paralysis_window,
            stagnation_delta,
        } => {
            let path = resolve_project(&project.project);
            if path.exists() {
                return Err(CliError::Usage(format!(
                    "{} already exists",
                    path.display()
                )));
            }
            let config = ProjectConfig::from_parts(
                EngineConfig {
                    threshold,
                    pri_mode: mode.into(),
                    paralysis_window,
                    stagnation_delta,
                    ..EngineConfig::default()
                },
                IndexParams {
                    core_weight,
                    supporting_weight,
                    lambda,
                },
            );
            config.validate().map_err(CliError::from)?;
            let id = id.unwrap_or_else(|| {
                path.file_stem()
                    .and_then(|s| s.to_str())
                    .filter(|s| is_valid_project_id(s))
                    .map_or_else(|| "project".to_string(), str::to_string)
            });
            let record = ProjectRecord::with_id(id, name, config, Timestamp::now())?;
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
            }
            save_project(&record, &path)?;
            print(&format!(
                "Created project `{}` at {}\n",
                record.project.id,
                path.display()
            ))?;
        }
        Command::Assess {
            project,
            from,
            interactive,
            catalog,
            output,
        } => {
            let (path, mut record) = load(&project.project)?;
            let input = if interactive {
                let catalog = match catalog {
                    Some(dir) => Catalog::load_dir(&dir)
                        .map_err(|e| CliError::io(format!("catalogue {}", dir.display()), e))?,
                    None => Catalog::default(),
                };
                let stdin = std::io::stdin();
                let bundle =
                    interactive::Prompter::new(stdin.lock(), std::io::stderr()).bundle(&catalog)?;
                IterationInput::Instruments(bundle)
            } else {
                read_assessment(
                    from.as_deref()
                        .expect("clap enforces --from or --interactive"),
                )?
            };
            if let IterationInput::Instruments(bundle) = &input {
                let (_, warnings) = aap_core::compute_snapshot(bundle, &record.config.params())?;
                for w in warnings {
                    eprintln!("warning: {w:?}");
                }
            }
            let revision = record.revision;
            let iteration = record
                .append_iteration(revision, input, Timestamp::now())?
                .clone();
            save_project(&record, &path)?;
            match output.format {
                Format::Structured => print(&json(&iteration))?,
                Format::Human => {
                    print(&format!("Recorded iteration {}\n\n", iteration.seq))?;
                    print(&render::decision(
                        &iteration.snapshot,
                        &iteration.recommendation,
                        &record.config.engine(),
                    ))?;
                }
            }
        }
        Command::Decide {
            project,
            snapshot,
            mode,
            gate,
            output,
        } => {
            let (snap, config) = match (project, snapshot) {
                (Some(project), _) => {
                    let (_, record) = load(&project)?;
                    (latest_snapshot(&record)?, engine_config(&record, mode))
                }
                (None, Some(file)) => {
                    let mut config = EngineConfig::default();
                    if let Some(mode) = mode {
                        config.pri_mode = mode.into();
                    }
                    (read_snapshot_file(&file)?, config)
                }
                (None, None) => unreachable!("clap requires --project or --snapshot"),
            };
            let rec = decide(&snap, &config)?;
            match output.format {
                Format::Structured => print(&json(&DecisionDocument {
                    snapshot: snap,
                    recommendation: rec.clone(),
                }))?,
                Format::Human => print(&render::decision(&snap, &rec, &config))?,
            }
            if gate && !rec.outcome.is_gate_open() {
                return Ok(ExitCode::from(exit::GATE_CLOSED));
            }
        }
        Command::History { project, output } => {
            let (_, record) = load(&project.project)?;
            let paralysis = record.paralysis();
            match output.format {
                Format::Structured => print(&json(&record.iterations))?,
                Format::Human => print(&render::history(&record.iterations, &paralysis))?,
            }
        }
        Command::Whatif {
            project,
            sets,
            mode,
            output,
        } => {
            let (_, record) = load(&project.project)?;
            let base = latest_snapshot(&record)?;
            let config = engine_config(&record, mode);
            let overrides = sets
                .iter()
                .map(|s| parse_set(s))
                .collect::<Result<Vec<_>, _>>()?;
            let merged = aap_core::whatif::apply_overrides(
                &base,
                overrides.iter().map(|(n, v)| (n.as_str(), *v)),
            )?;
            let rec = decide(&merged, &config)?;
            match output.format {
                Format::Structured => print(&json(&DecisionDocument {
                    snapshot: merged,
                    recommendation: rec,
                }))?,
                Format::Human => print(&render::decision(&merged, &rec, &config))?,
            }
        }
        Command::Sweep { grid, mode, output } => {
            let config = EngineConfig {
                pri_mode: mode.into(),
                ..EngineConfig::default()
            };
            let report = sweep(&grid, &config)?;
            match output.format {
                Format::Structured => print(&json(&report))?,
                Format::Human => print(&render::sweep(&report))?,
            }
        }
        Command::Report { project, out } => {
            let (_, record) = load(&project.project)?;
            let text = export_report(&record)?;
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?,
                None => print(&text)?,
            }
        }
        Command::Serve {
            port,
            host,
            store,
            dashboard,
        } => {
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| CliError::io("starting runtime", e))?;
            let options = aap_service::ServeOptions {
                addr: SocketAddr::new(host, port),
                store_dir: store,
                dashboard,
            };
            runtime
                .block_on(aap_service::serve(options))
                .map_err(|e| CliError::io("serving", e))?;
        }
    }
    Ok(ExitCode::from(exit::GATE_OPEN))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("aap: {e}");
            e.exit_code()
        }
    }
}
