//! `ainf`: batch front end for building and checking U_h(A_inf) modules.
//!
//! Exit codes: 0 when everything checked passes, 1 when a check fails,
//! 2 on usage errors or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ainf_core::action::export::{export_matrix, export_matrix_numeric, parse_gen};
use ainf_core::action::{series_partial, Engine, GenSymbol, Orientation, SeriesStatus};
use ainf_core::identities::campaign::default_sizes;
use ainf_core::identities::{default_plan, mutation_plan, run_campaign, IdentityId, Mutation, PlanItem};
use ainf_core::patterns::io::{parse_pattern, write_basis};
use ainf_core::patterns::{enumerate_basis, CPattern, Signature};
use ainf_core::verify::{default_numeric_samples, parse_samples, run_suites, CheckConfig, Mode, Suite};

#[derive(Parser, Debug)]
#[command(name = "ainf", version, about = "Highest-weight modules of U_h(A_inf) in the C-pattern basis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the pattern basis of V_N.
    Basis {
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one generator (e3, f-1, h0, c) to a pattern.
    Act {
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        gen: String,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        flip_orientation: bool,
    },
    /// Export the sparse matrix of a generator on V_N.
    Matrix {
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        gen: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Evaluation point for numeric mode (first entry is used).
        #[arg(long)]
        v_samples: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites (all, or a comma-separated list).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Check one signature instead of the default battery.
        #[arg(long)]
        signature: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        v_samples: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the reversed e/f orientation on the lowest rows (negative control).
        #[arg(long)]
        flip_orientation: bool,
        /// Record wall-clock times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Check the q-number identity corpus at random admissible points.
    Identities {
        /// Identity to check (repeatable); default is the full plan.
        #[arg(long)]
        identity: Vec<String>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Corrupt the checked identities: `SITE:DELTA` shifts one bracket, `rhs` adds 1.
        #[arg(long)]
        mutate: Option<String>,
        /// Also run the mutation controls.
        #[arg(long)]
        controls: bool,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial sums of the diagonal series sum_i h_i on a pattern.
    Series {
        #[arg(long)]
        signature: PathBuf,
        /// Pattern file; the highest-weight vector by default.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        terms: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_signature(path: &Path) -> Result<Signature> {
    Signature::from_json(&read(path)?).with_context(|| format!("parsing signature {}", path.display()))
}

fn label(path: &Path) -> String {
    path.file_name().map_or_else(|| "sig".into(), |s| s.to_string_lossy().into_owned())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn orientation(flip: bool) -> Orientation {
    if flip {
        Orientation::FLIPPED
    } else {
        Orientation::RESOLVED
    }
}

fn cmd_basis(signature: &Path, depth: usize, out: Option<&Path>) -> Result<bool> {
    let sig = load_signature(signature)?;
    let basis = enumerate_basis(&sig, depth);
    emit(out, &write_basis(&basis, depth, &label(signature)))?;
    Ok(true)
}

fn cmd_act(signature: &Path, gen: &str, pattern: &Path, flip: bool) -> Result<bool> {
    let sig = load_signature(signature)?;
    let (p, _) = parse_pattern(&read(pattern)?, &sig).context("parsing pattern")?;
    let violations = p.validate(&sig);
    if !violations.is_empty() {
        bail!("invalid pattern: {violations:?}");
    }
    let eng = Engine::with_orientation(sig, orientation(flip));
    let gen = parse_gen(gen)?;
    let image = match gen {
        GenSymbol::E(k) => eng.apply_e(k, &p)?,
        GenSymbol::F(k) => eng.apply_f(k, &p)?,
        GenSymbol::H(k) => {
            println!("({}) * {p}", eng.apply_h(k, &p));
            return Ok(true);
        }
        GenSymbol::C => {
            println!("({}) * {p}", eng.apply_c(&p));
            return Ok(true);
        }
        other => bail!("unsupported generator {other}"),
    };
    if image.is_empty() {
        eprintln!("zero vector");
    }
    for (t, c) in image.terms() {
        println!("{} * {t}", c.to_radical());
    }
    Ok(true)
}

fn cmd_matrix(
    signature: &Path,
    gen: &str,
    depth: usize,
    mode: ModeArg,
    v_samples: Option<&str>,
    out: Option<&Path>,
) -> Result<bool> {
    let eng = Engine::new(load_signature(signature)?);
    let gen = parse_gen(gen)?;
    let m = match mode {
        ModeArg::Exact => export_matrix(&eng, &gen, depth)?,
        ModeArg::Numeric => {
            let samples = match v_samples {
                Some(s) => parse_samples(s).map_err(anyhow::Error::msg)?,
                None => default_numeric_samples(),
            };
            export_matrix_numeric(&eng, &gen, depth, samples[0])?
        }
    };
    emit(out, &m.to_text())?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    signature: Option<&Path>,
    depth: usize,
    window: i64,
    mode: ModeArg,
    v_samples: Option<&str>,
    tolerance: f64,
    seed: u64,
    trials: usize,
    out: Option<&Path>,
    flip: bool,
    timings: bool,
) -> Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        suite
            .split(',')
            .map(|s| Suite::parse(s.trim()).ok_or_else(|| anyhow::anyhow!("unknown suite {s:?}")))
            .collect::<Result<_>>()?
    };
    if !(tolerance > 0.0) {
        bail!("tolerance must be positive");
    }
    let mut cfg = match signature {
        Some(p) => CheckConfig::single(&label(p), load_signature(p)?),
        None => CheckConfig::default(),
    };
    cfg.depth = depth;
    cfg.window = window;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.timings = timings;
    cfg.mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Numeric => Mode::Numeric {
            samples: match v_samples {
                Some(s) => parse_samples(s).map_err(anyhow::Error::msg)?,
                None => default_numeric_samples(),
            },
            tolerance,
        },
    };
    let report = run_suites(&cfg, &suites, orientation(flip));
    eprint!("{}", report.to_text());
    emit(out, &(report.to_json() + "\n"))?;
    Ok(report.passed())
}

fn parse_mutation(s: &str) -> Result<Mutation> {
    if s == "rhs" {
        return Ok(Mutation::RhsPlusOne);
    }
    let (site, delta) = s.split_once(':').context("mutation must be SITE:DELTA or rhs")?;
    Ok(Mutation::Bracket {
        site: site.parse().context("bad mutation site")?,
        delta: delta.parse().context("bad mutation shift")?,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_identities(
    identity: &[String],
    size: Option<usize>,
    trials: Option<usize>,
    seed: u64,
    mutate: Option<&str>,
    controls: bool,
    timings: bool,
    out: Option<&Path>,
) -> Result<bool> {
    if trials == Some(0) {
        bail!("trials must be at least 1");
    }
    let mut plan: Vec<PlanItem> = if identity.is_empty() {
        default_plan()
    } else {
        let mut plan = Vec::new();
        for name in identity {
            let id: IdentityId = name.parse()?;
            let sizes = size.map_or_else(|| default_sizes(id), |s| vec![s]);
            for s in sizes {
                plan.push(PlanItem::new(id, s, 100));
            }
        }
        plan
    };
    for item in plan.iter_mut() {
        if let Some(t) = trials {
            item.trials = t;
        }
        if let Some(m) = mutate {
            *item = item.clone().corrupted(parse_mutation(m)?);
        }
    }
    if controls {
        plan.extend(mutation_plan());
    }
    let report = run_campaign(&plan, seed, timings);
    eprint!("{}", report.to_text());
    emit(out, &(report.to_json() + "\n"))?;
    Ok(report.passed())
}

fn cmd_series(signature: &Path, pattern: Option<&Path>, terms: u32, out: Option<&Path>) -> Result<bool> {
    let sig = load_signature(signature)?;
    let p = match pattern {
        Some(path) => parse_pattern(&read(path)?, &sig).context("parsing pattern")?.0,
        None => CPattern::highest_weight(&sig),
    };
    let probe = series_partial(&sig, &p, terms);
    let mut text = format!("series sig={} T={terms}\n", sig.digest());
    for (t, s) in probe.partial.iter().enumerate() {
        text.push_str(&format!("{t} {s}\n"));
    }
    let last = probe.partial.last().expect("T >= 0 gives one partial sum");
    text.push_str(&match probe.status {
        SeriesStatus::Stabilized => format!("stabilized {last} from t={}\n", probe.tail_start),
        SeriesStatus::Divergent => format!("divergent increment {}\n", probe.tail_increment),
        SeriesStatus::Undetermined => format!("undetermined before t={}\n", probe.tail_start),
    });
    emit(out, &text)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Basis { signature, depth, out } => cmd_basis(&signature, depth, out.as_deref()),
        Cmd::Act {
            signature,
            gen,
            pattern,
            flip_orientation,
        } => cmd_act(&signature, &gen, &pattern, flip_orientation),
        Cmd::Matrix {
            signature,
            gen,
            depth,
            mode,
            v_samples,
            out,
        } => cmd_matrix(&signature, &gen, depth, mode, v_samples.as_deref(), out.as_deref()),
        Cmd::Verify {
            suite,
            signature,
            depth,
            window,
            mode,
            v_samples,
            tolerance,
            seed,
            trials,
            out,
            flip_orientation,
            timings,
        } => cmd_verify(
            &suite,
            signature.as_deref(),
            depth,
            window,
            mode,
            v_samples.as_deref(),
            tolerance,
            seed,
            trials,
            out.as_deref(),
            flip_orientation,
            timings,
        ),
        Cmd::Identities {
            identity,
            size,
            trials,
            seed,
            mutate,
            controls,
            timings,
            out,
        } => cmd_identities(&identity, size, trials, seed, mutate.as_deref(), controls, timings, out.as_deref()),
        Cmd::Series {
            signature,
            pattern,
            terms,
            out,
        } => cmd_series(&signature, pattern.as_deref(), terms, out.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
