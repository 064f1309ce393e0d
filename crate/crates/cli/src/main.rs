use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use fmol_cli::exit;
use fmol_cli::render::{render_file, Overrides};
use fmol_cli::session::{Host, HostConfig};
use fmol_core::score::parse;
use fmol_core::{catalog, Patch};
use tokio::net::TcpListener;

#[derive(Parser)]
#[command(name = "fmol", version, about = "Six-track generator/processor synthesizer")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render a scorefile to a 16-bit stereo WAV file.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Override the score's sample rate.
        #[arg(long)]
        sr: Option<u32>,
        /// Override the score's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Host a live session over WebSocket at /session.
    Serve {
        #[arg(long, default_value_t = 7400)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Start from this scorefile's patch, sample rate and seed.
        #[arg(long)]
        patch: Option<PathBuf>,
        /// Also stream the master bus to stdout as raw s16le stereo.
        #[arg(long)]
        audio_out: bool,
    },
    /// List every unit in the catalog.
    Catalog {
        /// Print JSON instead of a table.
        #[arg(long)]
        structured: bool,
    },
    /// Run the piece database over HTTP.
    Collab {
        #[arg(long, default_value_t = 7401)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        #[arg(long, default_value = "pieces")]
        data: PathBuf,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let code = match Cli::parse().command {
        Cmd::Render { input, output, sr, seed } => {
            match render_file(&input, &output, &Overrides { sample_rate: sr, seed }) {
                Ok(report) => {
                    println!(
                        "{}: {:.3} s at {} Hz, peak {:.2} dBFS",
                        output.display(),
                        report.duration_secs(),
                        report.sample_rate,
                        report.peak_dbfs()
                    );
                    exit::OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Cmd::Catalog { structured } => {
            if structured {
                println!("{}", fmol_cli::catalog_cmd::catalog_json());
            } else {
                print!("{}", fmol_cli::catalog_cmd::catalog_table());
            }
            exit::OK
        }
        Cmd::Serve {
            port,
            host,
            patch,
            audio_out,
        } => serve(SocketAddr::new(host, port), patch, audio_out),
        Cmd::Collab { port, host, data } => collab(SocketAddr::new(host, port), data),
    };
    ExitCode::from(code)
}

fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("building the async runtime")
}

async fn bind(addr: SocketAddr) -> Result<TcpListener, u8> {
    TcpListener::bind(addr).await.map_err(|e| {
        eprintln!("error: cannot listen on {addr}: {e}");
        if e.kind() == std::io::ErrorKind::AddrInUse {
            exit::PORT_BUSY
        } else {
            exit::IO
        }
    })
}

fn host_config(patch: Option<PathBuf>, audio_out: bool) -> Result<HostConfig, u8> {
    let Some(path) = patch else {
        return Ok(HostConfig {
            patch: Patch::default_patch(catalog()),
            sample_rate: 44100,
            seed: 0,
            audio_out,
        });
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        exit::IO
    })?;
    let score = parse(&text, catalog()).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        exit::PARSE
    })?;
    Ok(HostConfig {
        patch: score.patch,
        sample_rate: score.sample_rate,
        seed: score.seed,
        audio_out,
    })
}

fn serve(addr: SocketAddr, patch: Option<PathBuf>, audio_out: bool) -> u8 {
    let config = match host_config(patch, audio_out) {
        Ok(c) => c,
        Err(code) => return code,
    };
    runtime().block_on(async move {
        let listener = match bind(addr).await {
            Ok(l) => l,
            Err(code) => return code,
        };
        let host = match Host::start(config) {
            Ok(h) => h,
            Err(e) => {
                eprintln!("error: {e}");
                return exit::PARSE;
            }
        };
        let local = listener.local_addr().map(|a| a.to_string()).unwrap_or_default();
        eprintln!("session listening on ws://{local}/session");
        let result = tokio::select! {
            r = fmol_cli::session::serve(listener, host.handle()) => r,
            _ = tokio::signal::ctrl_c() => Ok(()),
        };
        match result {
            Ok(()) => exit::OK,
            Err(e) => {
                eprintln!("error: {e}");
                exit::IO
            }
        }
    })
}

fn collab(addr: SocketAddr, data: PathBuf) -> u8 {
    let store = match fmol_collab::Store::open(&data) {
        Ok(s) => Arc::new(s),
        Err(e) => {
            eprintln!("error: cannot open store at {}: {e}", data.display());
            return exit::IO;
        }
    };
    runtime().block_on(async move {
        let listener = match bind(addr).await {
            Ok(l) => l,
            Err(code) => return code,
        };
        let local = listener.local_addr().map(|a| a.to_string()).unwrap_or_default();
        eprintln!("collab listening on http://{local} ({} pieces)", store.len());
        let result = tokio::select! {
            r = fmol_collab::serve(listener, store) => r,
            _ = tokio::signal::ctrl_c() => Ok(()),
        };
        match result {
            Ok(()) => exit::OK,
            Err(e) => {
                eprintln!("error: {e}");
                exit::IO
            }
        }
    })
}
