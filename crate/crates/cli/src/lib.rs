//! Argument parsing, dispatch and rendering for the `iwagraph` binary.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use iwagraph_core::constructor::Construction;
use iwagraph_core::fixtures::{figure, figure_name, FIGURES};
use iwagraph_core::graph_json::{load_voltage_graph, save_voltage_graph, GraphDoc};
use iwagraph_core::laplacian::z_alpha_ramified;
use iwagraph_core::phi::{phi_forward, phi_inverse, sample_lambda_distribution};
use iwagraph_core::treecount::verify;
use iwagraph_core::{
    construct_ramified, construct_unramified, construct_with_mu_l, derived_graph, predicted_invariants, Error,
    GroupRingElement, IntPolynomial, PredictOptions, Variable,
};

pub mod render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "iwagraph", version, about = "Z_p-towers of graphs with prescribed Iwasawa invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a voltage graph with the requested invariants.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long, default_value_t = 0)]
        mu: u64,
        /// Two vertices, one totally ramified (even λ).
        #[arg(long)]
        ramified: bool,
        /// Prescribe μ_l, as `l=e`; repeatable.
        #[arg(long = "mu-l", value_parser = parse_mu_l_target)]
        mu_l: Vec<(u64, u64)>,
        /// Try both signs and keep the graph with fewer loops.
        #[arg(long)]
        minimize: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Predicted λ, μ (and μ_l) from the group-ring Laplacian.
    Invariants {
        file: PathBuf,
        #[arg(long = "mu-l")]
        mu_l: Vec<u64>,
    },
    /// Count spanning trees level by level and compare with the prediction.
    Verify {
        file: PathBuf,
        #[arg(long)]
        levels: u32,
        #[arg(long)]
        json: bool,
        /// Omit the κ column.
        #[arg(long)]
        short: bool,
    },
    /// Write the level-N derived graph.
    Derive {
        file: PathBuf,
        #[arg(long)]
        level: u32,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Apply Φ to a group-ring element, or invert it on a polynomial in S.
    Phi {
        #[command(subcommand)]
        direction: PhiDirection,
    },
    /// Monte Carlo distribution of λ_S(Φ(h)) for random h.
    Sample {
        #[arg(long)]
        p: u64,
        #[arg(long = "lambda-prime-max")]
        lambda_prime_max: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        precision: u32,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
    },
    /// Write the reference graphs fig2.json .. fig10.json into a directory.
    Fixtures {
        #[arg(short = 'o', long = "out-dir")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PhiDirection {
    /// EXPR is a group-ring element of augmentation zero, e.g. `2 - 1*g^1 - 1*g^-1`.
    Forward {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// EXPR is a polynomial in S without constant term, e.g. `S^2`.
    Inverse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

fn parse_mu_l_target(s: &str) -> Result<(u64, u64), String> {
    let (l, e) = s.split_once('=').ok_or_else(|| format!("expected l=e, got {s:?}"))?;
    let l = l.trim().parse().map_err(|_| format!("bad prime in {s:?}"))?;
    let e = e.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
    Ok((l, e))
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Schema(_)
            | Error::Io(_)
            | Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::InvalidTarget(_)
            | Error::NotAugmentationZero => EXIT_USAGE,
            Error::CertificationFailed(_) => EXIT_FAIL,
            _ => EXIT_COMPUTE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if iwagraph_core::arith::is_prime(p) {
        Ok(())
    } else {
        Err(Failure::usage(format!("--p {p} is not prime")))
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Construct { p, lambda, mu, ramified, mu_l, minimize, output } => {
            check_prime(p)?;
            let targets: BTreeMap<u64, u64> = mu_l.into_iter().collect();
            if ramified && !targets.is_empty() {
                return Err(Failure::usage("--mu-l is only supported for unramified constructions"));
            }
            let built = if ramified {
                construct_ramified(p, lambda, mu)
            } else if !targets.is_empty() {
                construct_with_mu_l(p, lambda, mu, &targets)
            } else {
                construct_unramified(p, lambda, mu, minimize)
            };
            let c = match built {
                Ok(c) => c,
                Err(Error::CertificationFailed(msg)) => {
                    writeln!(out, "certification: FAIL ({msg})")?;
                    return Ok(EXIT_FAIL);
                }
                Err(e) => return Err(e.into()),
            };
            save_voltage_graph(&c.graph, &output)?;
            write_construction(out, &c, &output)?;
            Ok(EXIT_OK)
        }
        Command::Invariants { file, mu_l } => {
            let vg = load_voltage_graph(&file)?;
            let opts = PredictOptions { mu_l_primes: mu_l, ..Default::default() };
            let inv = predicted_invariants(&vg, &opts)?;
            let z = z_alpha_ramified(&vg)?;
            writeln!(out, "λ = {}", inv.lambda)?;
            writeln!(out, "μ = {}", inv.mu)?;
            for (l, m) in &inv.mu_l {
                writeln!(out, "μ_{l} = {m}")?;
            }
            let label = if vg.is_unramified() { "Z" } else { "Z_I" };
            writeln!(out, "{label} = {z}")?;
            Ok(EXIT_OK)
        }
        Command::Verify { file, levels, json, short } => {
            let vg = load_voltage_graph(&file)?;
            if levels < 3 {
                return Err(Failure::usage("--levels must be at least 3 (four rows are needed to fit)"));
            }
            let report = verify(&vg, levels)?;
            if json {
                writeln!(out, "{}", render::verify_json(&report))?;
            } else {
                out.write_all(render::verify_table(&report, short).as_bytes())?;
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Derive { file, level, output } => {
            let vg = load_voltage_graph(&file)?;
            let d = derived_graph(&vg, level)?;
            std::fs::write(&output, GraphDoc::from_derived_graph(&d, vg.p()).render())
                .map_err(|e| Failure::usage(format!("{}: {e}", output.display())))?;
            writeln!(
                out,
                "level {level}: {} vertices, {} edges -> {}",
                d.graph.vertex_count(),
                d.graph.edge_count(),
                output.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Phi { direction } => {
            match direction {
                PhiDirection::Forward { expr } => {
                    let h: GroupRingElement = expr.parse()?;
                    writeln!(out, "{}", phi_forward(&h)?)?;
                }
                PhiDirection::Inverse { expr } => {
                    let g = IntPolynomial::parse(&expr, Variable::S)?;
                    writeln!(out, "{}", phi_inverse(&g)?)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Sample { p, lambda_prime_max, trials, degree, precision, seed } => {
            check_prime(p)?;
            let s = sample_lambda_distribution(p, lambda_prime_max, trials, degree, precision, seed)?;
            out.write_all(render::sample_table(&s).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Fixtures { out_dir } => {
            std::fs::create_dir_all(&out_dir)?;
            for n in FIGURES {
                let path = fixture_path(&out_dir, n);
                save_voltage_graph(&figure(n)?, &path)?;
                writeln!(out, "{}", path.display())?;
            }
            Ok(EXIT_OK)
        }
    }
}

pub fn fixture_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("{}.json", figure_name(n)))
}

fn write_construction(out: &mut dyn Write, c: &Construction, path: &Path) -> std::io::Result<()> {
    writeln!(out, "wrote {}", path.display())?;
    let loops: Vec<String> = c.graph.voltages()[..c.graph.voltages().len() - c.connecting_edges as usize]
        .iter()
        .map(ToString::to_string)
        .collect();
    writeln!(out, "loop voltages: {{{}}}", loops.join(", "))?;
    if c.connecting_edges > 0 || c.graph.graph().vertex_count() > 1 {
        writeln!(out, "connecting edges: {}", c.connecting_edges)?;
    }
    writeln!(out, "sign: {}", if c.sign > 0 { "+" } else { "-" })?;
    if c.repaired {
        writeln!(out, "condition (c) repaired")?;
    }
    write!(out, "predicted λ={} μ={}", c.predicted.lambda, c.predicted.mu)?;
    for (l, m) in &c.predicted.mu_l {
        write!(out, " μ_{l}={m}")?;
    }
    writeln!(out)?;
    if let Some((factors, rest)) = &c.content_factors {
        let mut parts: Vec<String> = factors.iter().map(|(q, e)| format!("{q}^{e}")).collect();
        if *rest != num_bigint::BigUint::from(1u32) {
            parts.push(format!("({rest})"));
        }
        let text = if parts.is_empty() { "1".to_string() } else { parts.join(" * ") };
        writeln!(out, "content of Z: {text}")?;
    }
    writeln!(out, "certification: PASS")
}

/// Build the rayon pool, honoring `IWAGRAPH_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("IWAGRAPH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_l_targets_parse() {
        assert_eq!(parse_mu_l_target("2=1"), Ok((2, 1)));
        assert_eq!(parse_mu_l_target(" 5 = 3 "), Ok((5, 3)));
        assert!(parse_mu_l_target("5").is_err());
        assert!(parse_mu_l_target("x=1").is_err());
        assert!(parse_mu_l_target("5=-1").is_err());
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::Schema("x".into())).code, EXIT_USAGE);
        assert_eq!(Failure::from(Error::DisconnectedTower { level: 2 }).code, EXIT_COMPUTE);
        assert_eq!(Failure::from(Error::SingularLaplacian).code, EXIT_COMPUTE);
        assert_eq!(Failure::from(Error::RepairFailed("x".into())).code, EXIT_COMPUTE);
        assert_eq!(Failure::from(Error::CertificationFailed("x".into())).code, EXIT_FAIL);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
