//! Command dispatch for the `subshift` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::auxiliary::{auxiliary_matrix, build_auxiliary};
use crate::classify::{classify, find_seed_pair, PointSeed};
use crate::error::{Error, Result};
use crate::input::{parse_input, InputSpec};
use crate::measures::{
    cylinder_measure, empirical_frequency, measure_type, uniformity_check, MeasureDescriptor, DEFAULT_BUDGET,
};
use crate::report;
use crate::spectral::{block_eigenvalues, limit_data_with, pf_vectors_with, SpectralProfile};
use crate::structure::{component_chain, incidence_matrix, sub_substitution, ComponentChain};
use crate::words::{count_occurrences, Substitution, Word};

#[derive(Debug, Parser)]
#[command(name = "subshift", version, about = "Analyze substitutions of some primitive components")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: chain, matrix, spectra, classification and measure types.
    Analyze { file: PathBuf },
    /// L_m of every level.
    Language {
        file: PathBuf,
        #[arg(short = 'm')]
        m: usize,
    },
    /// Incidence matrix, or the auxiliary matrix for window m.
    Matrix {
        file: PathBuf,
        #[arg(short = 'm')]
        m: Option<usize>,
    },
    /// Block eigenvalues; with -m also eigenvectors and limit data.
    Spectral {
        file: PathBuf,
        #[arg(short = 'm')]
        m: Option<usize>,
    },
    Classify { file: PathBuf },
    /// Cylinder value of WORD at level I.
    Measure {
        file: PathBuf,
        #[arg(short = 'i')]
        level: usize,
        #[arg(short = 'v')]
        word: String,
    },
    /// Empirical frequency of WORD along a streamed prefix of length LEN.
    Simulate {
        file: PathBuf,
        #[arg(short = 'i')]
        level: usize,
        #[arg(short = 'v')]
        word: String,
        #[arg(short = 'L')]
        len: usize,
        /// Return-time window count for the uniformity check.
        #[arg(long)]
        windows: Option<usize>,
        /// Window offsets, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        offsets: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Invariant suite on this input.
    Check { file: PathBuf },
}

struct Loaded {
    spec: InputSpec,
    chain: ComponentChain,
    spectral: SpectralProfile,
}

impl Loaded {
    fn sigma(&self) -> &Substitution {
        &self.spec.substitution
    }
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, message: format!("cannot read {}: {e}", path.display()) })?;
    load_text(&text)
}

fn load_text(text: &str) -> Result<Loaded> {
    let spec = parse_input(text)?;
    let chain = component_chain(&spec.substitution)?;
    let spectral = block_eigenvalues(&spec.substitution, &chain);
    Ok(Loaded { spec, chain, spectral })
}

fn word(l: &Loaded, s: &str) -> Result<Word> {
    Word::parse(s, l.sigma().alphabet())
}

fn measures(l: &Loaded) -> Result<Vec<MeasureDescriptor>> {
    (1..=l.chain.n()).map(|i| measure_type(l.sigma(), &l.chain, &l.spectral, i)).collect()
}

fn letter_cylinders(l: &Loaded, d: &MeasureDescriptor) -> Result<Vec<Value>> {
    if d.kind.is_counting() {
        return Ok(Vec::new());
    }
    l.chain
        .level_set(d.level)
        .iter()
        .map(|&c| {
            let v = Word(vec![c]);
            cylinder_measure(l.sigma(), &l.chain, &l.spectral, d.level, &v).map(|c| report::cylinder(&c, d.anchor, d.level))
        })
        .collect()
}

fn base(l: &Loaded) -> Value {
    let mut v = json!({
        "alphabet": report::alphabet(l.sigma()),
        "substitution": report::substitution(l.sigma()),
        "chain": report::chain(&l.chain),
    });
    if let Some(ok) = l.spec.hints_consistent(&l.chain) {
        v["level_hints"] = json!(if ok { "consistent" } else { "ignored" });
    }
    v
}

fn analyze(l: &Loaded) -> Result<Value> {
    let mut v = base(l);
    v["matrix"] = report::matrix(&incidence_matrix(l.sigma()).entries);
    v["spectral"] = report::spectral(&l.spectral);
    v["classification"] = report::classification(&classify(l.sigma(), &l.chain, &l.spectral)?);
    let ms = measures(l)?;
    let mut out = Vec::new();
    for d in &ms {
        let mut e = report::measure_descriptor(d);
        e["cylinders"] = json!(letter_cylinders(l, d)?);
        out.push(e);
    }
    v["measures"] = json!(out);
    Ok(v)
}

/// The `analyze` report for a substitution given as file text.
pub fn analyze_text(text: &str) -> Result<Value> {
    analyze(&load_text(text)?)
}

pub fn execute(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Analyze { file } => analyze(&load(file)?),
        Command::Language { file, m } => {
            let l = load(file)?;
            let mut v = base(&l);
            let mut levels = Vec::new();
            for i in 1..=l.chain.n() {
                let si = sub_substitution(l.sigma(), &l.chain, i)?.substitution;
                let ws: Vec<String> = si.language_sorted(*m)?.iter().map(|w| w.to_string()).collect();
                levels.push(json!({"level": i, "words": ws}));
            }
            v["m"] = json!(m);
            v["language"] = json!(l.sigma().language_sorted(*m)?.iter().map(|w| w.to_string()).collect::<Vec<_>>());
            v["levels"] = json!(levels);
            Ok(v)
        }
        Command::Matrix { file, m } => {
            let l = load(file)?;
            let mut v = base(&l);
            match m {
                None => v["matrix"] = report::matrix(&incidence_matrix(l.sigma()).entries),
                Some(m) => {
                    let aux = build_auxiliary(l.sigma(), &l.chain, *m)?;
                    let mat = auxiliary_matrix(&aux);
                    v["matrix"] = report::matrix(&mat);
                    v["auxiliary"] = report::auxiliary(&aux, &mat);
                }
            }
            Ok(v)
        }
        Command::Spectral { file, m } => {
            let l = load(file)?;
            let mut v = base(&l);
            v["spectral"] = report::spectral(&l.spectral);
            if let Some(m) = m {
                v["spectral"]["vectors"] = match pf_vectors_with(l.sigma(), &l.chain, &l.spectral, *m) {
                    Ok(e) => report::eigen_pair(&e),
                    Err(e) => report::error(&e),
                };
                let mut limits = Vec::new();
                for i in 1..=l.chain.n() {
                    if l.spectral.cmp_one(i) == std::cmp::Ordering::Greater {
                        limits.push(report::limit(&limit_data_with(l.sigma(), &l.chain, &l.spectral, *m, i)?));
                    }
                }
                v["spectral"]["limits"] = json!(limits);
            }
            Ok(v)
        }
        Command::Classify { file } => {
            let l = load(file)?;
            let mut v = base(&l);
            v["classification"] = report::classification(&classify(l.sigma(), &l.chain, &l.spectral)?);
            Ok(v)
        }
        Command::Measure { file, level, word: w } => {
            let l = load(file)?;
            let v = word(&l, w)?;
            let d = measure_type(l.sigma(), &l.chain, &l.spectral, *level)?;
            let c = cylinder_measure(l.sigma(), &l.chain, &l.spectral, *level, &v)?;
            let mut out = report::cylinder(&c, d.anchor, *level);
            out["type"] = json!(d.kind.tag());
            if c.exact.is_none() && !c.infinite {
                let t = &l.spectral.theta(*level);
                out["theta"] = json!({"float": t.float, "char_poly": report::spectral(&l.spectral)["levels"][*level - 1]["char_poly"].clone()});
            }
            Ok(out)
        }
        Command::Simulate { file, level, word: w, len, windows, offsets, budget } => {
            let l = load(file)?;
            let v = word(&l, w)?;
            let e = empirical_frequency(l.sigma(), &l.chain, &l.spectral, *level, &v, *len, *budget)?;
            let mut out = report::empirical(&e);
            out["level"] = json!(level);
            out["word"] = json!(w);
            if let Ok(c) = cylinder_measure(l.sigma(), &l.chain, &l.spectral, *level, &v) {
                out["exact"] = report::cylinder(&c, e.anchor, *level)["value"].clone();
            }
            if let Some(n) = windows {
                let u = uniformity_check(l.sigma(), &l.chain, &l.spectral, *level, &v, *n, offsets, *budget)?;
                out["uniformity"] = report::uniformity(&u);
            }
            Ok(out)
        }
        Command::Check { file } => {
            let l = load(file)?;
            let checks = run_checks(&l)?;
            let pass = checks.iter().all(|c| c.1);
            Ok(json!({
                "checks": checks.iter().map(|(n, p, d)| json!({"name": n, "pass": p, "detail": d})).collect::<Vec<_>>(),
                "pass": pass,
            }))
        }
    }
}

type Check = (&'static str, bool, String);

fn run_checks(l: &Loaded) -> Result<Vec<Check>> {
    let sigma = l.sigma();
    let chain = &l.chain;
    let sp = &l.spectral;
    let mut out: Vec<Check> = Vec::new();

    let mut bad = Vec::new();
    for i in 2..=chain.n() {
        let p = find_seed_pair(sigma, chain, i)?;
        if !p.verify(sigma) {
            bad.push(i);
        }
    }
    out.push(("seed_pairs_expand", bad.is_empty(), format!("failing levels {bad:?}")));

    let inc = incidence_matrix(sigma).entries;
    let mut ok = true;
    let mut pow = inc.clone();
    for k in 1..=4 {
        if sigma.length_table(k)[k].iter().any(|&x| x > 1 << 20) {
            break;
        }
        for (ai, &a) in sigma.alphabet().letters().iter().enumerate() {
            let img = sigma.apply(&Word(vec![a]), k)?;
            for (bi, &b) in sigma.alphabet().letters().iter().enumerate() {
                ok &= count_occurrences(&Word(vec![b]), &img)? as i64 == pow.get(ai, bi);
            }
        }
        match pow.checked_mul(&inc) {
            Some(p) => pow = p,
            None => break,
        }
    }
    out.push(("incidence_powers_count_letters", ok, String::new()));

    let l3 = sigma.language(3)?;
    let l2 = sigma.language(2)?;
    let closed = l3.iter().all(|w| l2.contains(&w.factor(0, 2)) && l2.contains(&w.factor(1, 2)));
    out.push(("language_factor_closed", closed, String::new()));

    let aux = build_auxiliary(sigma, chain, 1)?;
    out.push(("auxiliary_window_one_is_incidence", auxiliary_matrix(&aux) == inc, String::new()));

    let ms: Vec<MeasureDescriptor> = (1..=chain.n()).map(|i| measure_type(sigma, chain, sp, i)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for d in ms.iter().filter(|d| !d.kind.is_counting()) {
        let si = sub_substitution(sigma, chain, d.level)?.substitution;
        for m in 1..=2 {
            let val = |w: &Word| cylinder_measure(sigma, chain, sp, d.level, w).map(|c| c.approx);
            let mut total = 0.0;
            for w in si.language(m)? {
                let f = val(&w)?;
                total += f;
                if f.is_infinite() {
                    continue;
                }
                let mut right = 0.0;
                let mut left = 0.0;
                for &c in si.alphabet().letters() {
                    let r = w.concat(&Word(vec![c]));
                    if si.contains_word(&r) {
                        right += val(&r)?;
                    }
                    let lw = Word(vec![c]).concat(&w);
                    if si.contains_word(&lw) {
                        left += val(&lw)?;
                    }
                }
                worst = worst.max((right - f).abs()).max((left - f).abs());
            }
            if d.kind == crate::measures::MeasureKind::FiniteErgodic {
                worst = worst.max((total - 1.0).abs());
            }
        }
    }
    out.push(("cylinder_consistency", worst <= 1e-9, format!("max deviation {worst:e}")));

    let d = classify(sigma, chain, sp)?;
    let finite: usize = ms.iter().map(MeasureDescriptor::finite_count).sum();
    out.push((
        "verdict_matches_finite_measures",
        d.census.verdict.uniquely_ergodic == (finite == 1),
        format!("{finite} finite measure classes"),
    ));
    out.push((
        "minimal_set_count",
        (1..=2).contains(&d.census.minimal_sets.len()),
        format!("{}", d.census.minimal_sets.len()),
    ));

    let mut ok = true;
    for lv in &d.levels {
        for s in &lv.seeds {
            if let PointSeed::BilateralLimit { left, right, q, form, .. } = s {
                let si = sub_substitution(sigma, chain, lv.level)?.substitution;
                let ends = |c: char| si.apply(&Word(vec![c]), *q).map(|w| w.last() == Some(c));
                let starts = |c: char| si.apply(&Word(vec![c]), *q).map(|w| w.first() == Some(c));
                match form {
                    crate::classify::LimitForm::Central => ok &= ends(*left)? && starts(*right)?,
                    crate::classify::LimitForm::LeftFixedPower => ok &= starts(*right)?,
                    crate::classify::LimitForm::RightFixedPower => ok &= ends(*left)?,
                }
            }
        }
    }
    out.push(("bilateral_seed_letters_fixed", ok, String::new()));
    Ok(out)
}

/// Runs the CLI and returns the process exit code.
fn emit_json(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn run(cli: Cli) -> i32 {
    match execute(&cli.command) {
        Ok(v) => {
            emit_json(&v);
            if matches!(cli.command, Command::Check { .. }) && v["pass"] == json!(false) {
                1
            } else {
                crate::error::exit::OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            emit_json(&report::error(&e));
            e.exit_code()
        }
    }
}
