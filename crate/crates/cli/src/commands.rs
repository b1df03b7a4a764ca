use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use frlp_core::dyadic::{haar_function, DyadicTree};
use frlp_core::frft::ensure_sampling;
use frlp_core::io::{read_signal, write_signal, Format};
use frlp_core::limits::{classify_regime, Descriptors, Regime, RegimeConfig};
use frlp_core::lp::{
    besov_norm, build_bank, decompose, decomposition_report, lipschitz_norm, sobolev_norm, triebel_norm, Profile, Variant,
};
use frlp_core::oscillation::{
    bmo_alpha_norm, bmo_corpus, hardy_square_quasinorm, synthesize_atom, validate_atom, Cube, CubeFamily,
};
use frlp_core::potentials::pullback_norm;
use frlp_core::signals::gaussian;
use frlp_core::{chirp_mul, frft, make_grid, validate_sampling, Complex, Direction, FracParam, Grid64, Signal64};

use crate::config::Config;
use crate::error::{CliError, CliResult, EXIT_CHECK_FAILED, EXIT_OK};
use crate::registry::{registry, run_suite};
use crate::{Cli, Command};

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

pub fn dispatch(cli: &Cli) -> CliResult<i32> {
    let cfg = cli.common.resolve()?;
    match &cli.command {
        Command::Frft { input, out } => cmd_frft(&cfg, input, out),
        Command::Decompose { input, out, jmin, jmax, variant } => {
            cmd_decompose(&cfg, input, out, jmin.unwrap_or(cfg.j_min), jmax.unwrap_or(cfg.j_max), variant)
        }
        Command::Norms { input, space, s, p, q, r, gamma, classical } => {
            let args = NormArgs { s: *s, p: *p, q: *q, r: *r, gamma: *gamma, classical: *classical };
            cmd_norms(&cfg, input, space, &args)
        }
        Command::Check { filter, out, timings, list, tighten } => {
            cmd_check(&cfg, filter.as_deref(), out.as_deref(), timings.as_deref(), *list, *tighten)
        }
        Command::Gen { kind, out, width, level, offset, side, p, q, count } => {
            let args = GenArgs { width: *width, level: *level, offset: *offset, side: *side, p: *p, q: *q, count: *count };
            cmd_gen(&cfg, kind, out, &args)
        }
        Command::Descriptors { alphas } => cmd_descriptors(&cfg, alphas),
    }
}

/// `.csv` and `.bin` extensions win; otherwise the configured format, with
/// `json` falling back to CSV for signal files.
pub fn signal_format(path: &Path, cfg: &Config) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("bin") => Format::Binary,
        _ if cfg.format == "bin" => Format::Binary,
        _ => Format::Csv,
    }
}

fn extension(cfg: &Config) -> &'static str {
    if cfg.format == "bin" {
        "bin"
    } else {
        "csv"
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> CliResult<Signal64> {
    read_signal(path).map_err(|e| match e {
        frlp_core::FrlpError::Io(m) | frlp_core::FrlpError::Format(m) => io_err(path, m),
        other => other.into(),
    })
}

fn save(f: &Signal64, path: &Path, cfg: &Config) -> CliResult<()> {
    write_signal(f, path, signal_format(path, cfg)).map_err(|e| io_err(path, e))
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn grid_of(cfg: &Config) -> CliResult<Grid64> {
    Ok(make_grid(cfg.dim, cfg.extent, cfg.samples)?)
}

fn regime_config(cfg: &Config) -> CliResult<RegimeConfig> {
    Ok(RegimeConfig::new(cfg.delta1, cfg.delta2, cfg.s_min)?)
}

#[derive(Debug, Serialize)]
struct DescriptorBlock {
    alpha: f64,
    s: f64,
    kappa: f64,
    deviation: f64,
    regime: Regime,
    chirp_frequency: f64,
    nyquist: f64,
    sampling_ok: bool,
}

fn descriptor_block(grid: &Grid64, p: &FracParam<f64>, rc: &RegimeConfig) -> DescriptorBlock {
    let d = Descriptors::of(p);
    let r = validate_sampling(grid, p);
    DescriptorBlock {
        alpha: d.alpha,
        s: d.s,
        kappa: d.kappa,
        deviation: d.deviation,
        regime: classify_regime(p, rc),
        chirp_frequency: r.chirp_frequency,
        nyquist: r.nyquist,
        sampling_ok: r.ok,
    }
}

fn print_block(b: &DescriptorBlock, cfg: &Config) {
    if cfg.format == "json" {
        say!("{}", serde_json::to_string(b).expect("block serializes"));
    } else {
        say!("alpha     {}", b.alpha);
        say!("s         {}", b.s);
        say!("kappa     {}", b.kappa);
        say!("D         {}", b.deviation);
        say!("regime    {}", serde_json::to_value(b.regime).expect("regime serializes").as_str().unwrap_or("?"));
        say!(
            "sampling  {} (chirp frequency {} vs 0.9 x Nyquist {})",
            if b.sampling_ok { "ok" } else { "ALIASED" },
            b.chirp_frequency,
            0.9 * b.nyquist
        );
    }
}

fn cmd_frft(cfg: &Config, input: &Path, out: &Path) -> CliResult<i32> {
    let f = load(input)?;
    let p = FracParam::new(cfg.alpha)?;
    print_block(&descriptor_block(f.grid(), &p, &regime_config(cfg)?), cfg);
    ensure_sampling(f.grid(), &p)?;
    let spec = frft(&f, &p)?;
    save(&spec.as_signal()?, out, cfg)?;
    Ok(EXIT_OK)
}

fn cmd_decompose(cfg: &Config, input: &Path, out: &Path, jmin: i32, jmax: i32, variant: &str) -> CliResult<i32> {
    let variant = match variant {
        "inhomogeneous" => Variant::Inhomogeneous,
        "homogeneous" => Variant::Homogeneous,
        v => return Err(CliError::Usage(format!("unknown variant '{v}' (inhomogeneous or homogeneous)"))),
    };
    let f = load(input)?;
    let p = FracParam::new(cfg.alpha)?;
    let bank = build_bank(f.grid(), jmin, jmax, Profile::Partition)?;
    ensure_sampling(f.grid(), &p)?;
    let dec = decompose(&f, &bank, Some(&p), variant)?;
    create_dir(out)?;
    let ext = extension(cfg);
    if let Some(low) = &dec.low {
        save(low, &out.join(format!("low.{ext}")), cfg)?;
    }
    for (j, b) in &dec.blocks {
        save(b, &out.join(format!("block_{j}.{ext}")), cfg)?;
    }
    let report = decomposition_report(&dec, 2.0);
    let ledger = json!({
        "input": input.display().to_string(),
        "j_min": jmin,
        "j_max": jmax,
        "variant": variant,
        "report": report,
    });
    let path = out.join("ledger.json");
    fs::write(&path, serde_json::to_string_pretty(&ledger).expect("ledger serializes")).map_err(|e| io_err(&path, e))?;
    say!("{} blocks, residual {:e}", dec.blocks.len(), report.residual.unwrap_or(f64::NAN));
    Ok(EXIT_OK)
}

pub struct NormArgs {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub gamma: f64,
    pub classical: bool,
}

fn cmd_norms(cfg: &Config, input: &Path, space: &str, a: &NormArgs) -> CliResult<i32> {
    const SPACES: [&str; 7] = ["besov", "triebel", "sobolev", "lipschitz", "bmo", "hardy", "pullback"];
    if !SPACES.contains(&space) {
        return Err(CliError::Usage(format!("unknown space '{space}' (one of {})", SPACES.join(", "))));
    }
    let f = load(input)?;
    let param = FracParam::new(cfg.alpha)?;
    let frac = (!a.classical).then_some(&param);
    let text = match space {
        "besov" | "triebel" | "sobolev" | "lipschitz" => {
            let bank = build_bank(f.grid(), cfg.j_min, cfg.j_max, Profile::Partition)?;
            let rep = match space {
                "besov" => besov_norm(&f, &bank, a.s, a.p, a.q, frac)?,
                "triebel" => triebel_norm(&f, &bank, a.s, a.p, a.q, frac)?,
                "sobolev" => sobolev_norm(&f, &bank, a.s, a.p, frac)?,
                _ => lipschitz_norm(&f, &bank, a.gamma, Variant::Inhomogeneous, frac)?,
            };
            rep.to_json()
        }
        "bmo" => {
            let cubes = CubeFamily::dyadic(f.grid(), 4)?;
            let v = bmo_alpha_norm(&f, &cubes, frac, a.r)?;
            json!({"kind": "bmo", "r": a.r, "alpha": frac.map(|p| p.alpha()), "value": v}).to_string()
        }
        "hardy" => {
            let bank = build_bank(f.grid(), cfg.j_min, cfg.j_max, Profile::Partition)?;
            let v = hardy_square_quasinorm(&f, &bank, frac, a.p)?;
            json!({"kind": "hardy", "p": a.p, "alpha": frac.map(|p| p.alpha()), "value": v}).to_string()
        }
        _ => serde_json::to_string(&pullback_norm(&f, a.p, &param)?).expect("norm serializes"),
    };
    say!("{text}");
    Ok(EXIT_OK)
}

fn cmd_check(cfg: &Config, filter: Option<&str>, out: Option<&Path>, timings: Option<&Path>, list: bool, tighten: f64) -> CliResult<i32> {
    if !(tighten.is_finite() && tighten > 0.0) {
        return Err(CliError::Usage(format!("--tighten must be positive, got {tighten}")));
    }
    if list {
        for e in registry() {
            say!("{:<42} {:<9} {}", e.id, format!("{:?}", e.severity).to_lowercase(), e.anchor);
        }
        return Ok(EXIT_OK);
    }
    let echo = serde_json::to_value(cfg).expect("config serializes");
    let (report, times) = run_suite(filter, cfg.seed, cfg.strict, tighten, echo);
    if report.entries.is_empty() {
        return Err(CliError::Usage(format!("no entry matches '{}'", filter.unwrap_or("*"))));
    }
    let text = report.to_json();
    match out {
        Some(path) => fs::write(path, &text).map_err(|e| io_err(path, e))?,
        None => say!("{text}"),
    }
    if let Some(path) = timings {
        fs::write(path, serde_json::to_string_pretty(&times).expect("timings serialize")).map_err(|e| io_err(path, e))?;
    }
    for (e, t) in report.entries.iter().zip(&times) {
        let mark = match (e.pass, e.gated) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        let err = e.max_err.map_or("-".to_string(), |v| format!("{v:.3e}"));
        eprintln!("{mark} {:<42} {:>10} {:>7.2}s", e.id, err, t.seconds);
    }
    let s = &report.summary;
    eprintln!("{} entries, {} passed, {} failed ({} gated)", s.total, s.passed, s.failed, s.gated_failed);
    Ok(if s.gated_failed > 0 { EXIT_CHECK_FAILED } else { EXIT_OK })
}

pub struct GenArgs {
    pub width: f64,
    pub level: u32,
    pub offset: usize,
    pub side: usize,
    pub p: f64,
    pub q: f64,
    pub count: usize,
}

fn bump(g: &Grid64, width: f64) -> Signal64 {
    Signal64::from_fn(*g, |x| {
        let r2 = (x[0] * x[0] + x[1] * x[1]) / (width * width);
        Complex::new(if r2 < 1.0 { (1.0 - 1.0 / (1.0 - r2)).exp() } else { 0.0 }, 0.0)
    })
}

fn cmd_gen(cfg: &Config, kind: &str, out: &Path, a: &GenArgs) -> CliResult<i32> {
    const KINDS: [&str; 6] = ["gaussian", "chirp", "bump", "haar-atom", "bmo-corpus", "frft-atom"];
    if !KINDS.contains(&kind) {
        return Err(CliError::Usage(format!("unknown kind '{kind}' (one of {})", KINDS.join(", "))));
    }
    let g = grid_of(cfg)?;
    let p = FracParam::new(cfg.alpha)?;
    let signal = match kind {
        "gaussian" => gaussian(&g, [0.0, 0.0], a.width, Complex::new(1.0, 0.0)),
        "chirp" => chirp_mul(&Signal64::from_fn(g, |_| Complex::new(1.0, 0.0)), &p, Direction::Inverse),
        "bump" => bump(&g, a.width),
        "haar-atom" => haar_function(&DyadicTree::full(&g)?, a.level, a.offset, Some(&p))?,
        "bmo-corpus" => {
            create_dir(out)?;
            let ext = extension(cfg);
            let corpus = bmo_corpus(&g, a.count, Some(&p), cfg.seed);
            for (i, b) in corpus.iter().enumerate() {
                save(b, &out.join(format!("corpus_{i:03}.{ext}")), cfg)?;
            }
            say!("{} signals in {}", corpus.len(), out.display());
            return Ok(EXIT_OK);
        }
        _ => {
            let cube = Cube { offset: [a.offset, 0], side: a.side };
            let atom = synthesize_atom(&g, &cube, a.p, a.q, Some(&p), cfg.seed)?;
            let rep = validate_atom(&atom, &cube, a.p, a.q, Some(&p))?;
            say!("{}", serde_json::to_string(&rep).expect("report serializes"));
            save(&atom, out, cfg)?;
            if !rep.pass {
                return Err(CliError::CheckFailed("synthesized atom failed validation".into()));
            }
            return Ok(EXIT_OK);
        }
    };
    save(&signal, out, cfg)?;
    Ok(EXIT_OK)
}

fn cmd_descriptors(cfg: &Config, alphas: &[f64]) -> CliResult<i32> {
    let alphas: Vec<f64> = if alphas.is_empty() {
        vec![std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_3, 0.05]
    } else {
        alphas.to_vec()
    };
    let g = grid_of(cfg)?;
    let rc = regime_config(cfg)?;
    let mut rows = Vec::new();
    for a in alphas {
        match FracParam::new(a) {
            Ok(p) => rows.push(serde_json::to_value(descriptor_block(&g, &p, &rc)).expect("block serializes")),
            Err(e) => rows.push(json!({"alpha": a, "error": e.to_string()})),
        }
    }
    if cfg.format == "json" {
        say!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    } else {
        say!("alpha,s,kappa,D,regime,sampling_ok");
        for r in &rows {
            if let Some(err) = r.get("error") {
                say!("{},,,,singular,", r["alpha"]);
                eprintln!("frlp: {}", err.as_str().unwrap_or(""));
            } else {
                say!(
                    "{},{},{},{},{},{}",
                    r["alpha"], r["s"], r["kappa"], r["deviation"], r["regime"].as_str().unwrap_or(""), r["sampling_ok"]
                );
            }
        }
    }
    Ok(EXIT_OK)
}
