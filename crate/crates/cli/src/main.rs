//! `kpf` — decide k-power-freeness of uniform morphisms and poke at the
//! machinery behind the decision (powers, test sets, covers, reductions).
//!
//! Exit codes: 0 = success / positive answer, 1 = negative answer (a power,
//! a counterexample, or a sweep disagreement was found), 2 = usage or input
//! error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kpf_core::{
    agreement_sweep, brute_force_search, decide, decompose, find_direct_covers, in_v, reduce_fully,
    test_set, Alphabet, DecideMode, Decomposition, Morphism, PowerWitness, SweepFamily,
    TestSetSpec, Word,
};

#[derive(Parser)]
#[command(name = "kpf", version, about = "k-power-freeness of uniform morphisms")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Suppress normal output; the exit code carries the answer.
    /// (--json output is still printed.)
    #[arg(long, global = true)]
    quiet: bool,

    /// Multi-character symbol mode: words and alphabets on the command line
    /// are whitespace-separated tokens, and text morphism files use
    /// token-based images.
    #[arg(long, global = true)]
    tokens: bool,

    /// Worker threads for `sweep` (1 = sequential, 0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a uniform morphism maps every k-power-free word to a
    /// k-power-free image.
    Decide {
        /// Power exponent (>= 2).
        #[arg(short, long)]
        k: usize,
        /// Which finite test to run.
        #[arg(long, value_enum, default_value_t = ModeArg::Testset)]
        mode: ModeArg,
        /// Morphism file: `.json`, or rule lines `letter -> image`.
        morphism: PathBuf,
    },

    /// Scan a word for its first k-power — or the image of a word when a
    /// morphism is given.
    Check {
        #[arg(short, long)]
        k: usize,
        /// Word to scan; omit to read words from standard input, one per line.
        #[arg(long)]
        word: Option<String>,
        /// Print the scanned image before the result.
        #[arg(long)]
        show_image: bool,
        /// Optional morphism file; if present, f(word) is scanned instead of
        /// the word itself.
        morphism: Option<PathBuf>,
    },

    /// Stream the finite test set for an alphabet, one word per line.
    Testset {
        /// Power exponent (>= 3; use `check`/`decide --mode classic` for k = 2).
        #[arg(short, long)]
        k: usize,
        /// Alphabet symbols, e.g. `ab` (tokens with --tokens).
        alphabet: String,
        /// Print only the cardinality per length.
        #[arg(long)]
        count: bool,
    },

    /// List every direct cover of a k-power in f(word), with its
    /// decomposition along letter-image boundaries.
    Decompose {
        #[arg(short, long)]
        k: usize,
        morphism: PathBuf,
        word: String,
    },

    /// Reduce the first covered k-power in f(word) until a test-set word
    /// remains, printing the whole trace.
    Reduce {
        #[arg(short, long)]
        k: usize,
        morphism: PathBuf,
        word: String,
    },

    /// Brute-force scan: check the image of every k-power-free word up to a
    /// length bound. Works for non-uniform morphisms too.
    Oracle {
        #[arg(short, long)]
        k: usize,
        /// Longest preimage to scan.
        #[arg(long)]
        max_len: usize,
        morphism: PathBuf,
    },

    /// Cross-check the finite test against the brute force over a whole
    /// family of uniform morphisms.
    Sweep {
        #[arg(short, long)]
        k: usize,
        /// Domain alphabet symbols.
        #[arg(long)]
        domain: String,
        /// Image alphabet symbols (defaults to the domain).
        #[arg(long)]
        image: Option<String>,
        /// Image length of every rule.
        #[arg(long)]
        uniform_len: usize,
        /// Enumerate the whole family instead of sampling.
        #[arg(long, conflicts_with_all = ["samples", "seed"])]
        exhaustive: bool,
        /// Number of seeded random morphisms to draw.
        #[arg(long)]
        samples: Option<u64>,
        /// Base seed; sample i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Testset,
    Corollary,
    Classic,
}

impl From<ModeArg> for DecideMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Testset => DecideMode::TestSet,
            ModeArg::Corollary => DecideMode::Corollary,
            ModeArg::Classic => DecideMode::ClassicK2,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    word: String,
    root: String,
    exponent: usize,
    start: usize,
}

#[derive(Serialize, Deserialize)]
struct VerdictDoc {
    k_power_free: bool,
    witness: Option<WitnessDoc>,
    words_checked: u64,
    mode: String,
}

#[derive(Serialize)]
struct CheckDoc {
    word: String,
    image: Option<String>,
    k_power_free: bool,
    witness: Option<PowerDoc>,
}

#[derive(Serialize, Deserialize)]
struct PowerDoc {
    root: String,
    exponent: usize,
    start: usize,
}

impl PowerDoc {
    fn from_witness(p: &PowerWitness) -> Self {
        PowerDoc {
            root: p.root.to_string(),
            exponent: p.exponent,
            start: p.start,
        }
    }
}

fn main() -> ExitCode {
    // `testset` streams; dying silently on a closed pipe (`kpf testset … |
    // head`) is the correct Unix behavior, not a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Decide { k, mode, morphism } => cmd_decide(&cli, *k, *mode, morphism),
        Command::Check {
            k,
            word,
            show_image,
            morphism,
        } => cmd_check(&cli, *k, word.as_deref(), *show_image, morphism.as_deref()),
        Command::Testset { k, alphabet, count } => cmd_testset(&cli, *k, alphabet, *count),
        Command::Decompose { k, morphism, word } => cmd_decompose(&cli, *k, morphism, word),
        Command::Reduce { k, morphism, word } => cmd_reduce(&cli, *k, morphism, word),
        Command::Oracle {
            k,
            max_len,
            morphism,
        } => cmd_oracle(&cli, *k, *max_len, morphism),
        Command::Sweep {
            k,
            domain,
            image,
            uniform_len,
            exhaustive,
            samples,
            seed,
        } => cmd_sweep(
            &cli,
            *k,
            domain,
            image.as_deref(),
            *uniform_len,
            *exhaustive,
            *samples,
            *seed,
        ),
    }
}

fn load_morphism(path: &Path, tokens: bool) -> Result<Morphism> {
    let src =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        Morphism::parse_json(&src)
    } else if tokens {
        Morphism::parse_text_tokens(&src)
    } else {
        Morphism::parse_text(&src)
    };
    parsed.with_context(|| format!("{}", path.display()))
}

fn parse_word(alphabet: &Alphabet, s: &str, tokens: bool) -> Result<Word> {
    let word = if tokens {
        alphabet.word_from_tokens(s)
    } else {
        alphabet.word_from_str(s)
    };
    word.with_context(|| format!("word {s:?}"))
}

/// Alphabet for a bare word scan: its distinct symbols, first appearance
/// first.
fn inferred_alphabet(s: &str, tokens: bool) -> Result<Alphabet> {
    let mut symbols: Vec<String> = Vec::new();
    if tokens {
        for token in s.split_whitespace() {
            if !symbols.iter().any(|t| t == token) {
                symbols.push(token.to_string());
            }
        }
    } else {
        for ch in s.chars() {
            if !symbols.iter().any(|t| t.chars().eq([ch])) {
                symbols.push(ch.to_string());
            }
        }
    }
    Alphabet::new(symbols).with_context(|| format!("word {s:?}"))
}

fn require_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        bail!("k must be at least {min} (got {k})");
    }
    Ok(())
}

fn emit(cli: &Cli, text: impl FnOnce() -> String) {
    if !cli.json && !cli.quiet {
        println!("{}", text());
    }
}

fn cmd_decide(cli: &Cli, k: usize, mode: ModeArg, path: &Path) -> Result<u8> {
    require_k(k, 2)?;
    let f = load_morphism(path, cli.tokens)?;
    let verdict = decide(&f, k, mode.into())?;
    let doc = VerdictDoc {
        k_power_free: verdict.k_power_free,
        witness: verdict.witness.as_ref().map(|w| WitnessDoc {
            word: w.word.to_string(),
            root: w.image_power.root.to_string(),
            exponent: w.image_power.exponent,
            start: w.image_power.start,
        }),
        words_checked: verdict.words_checked,
        mode: verdict.mode.as_str().to_string(),
    };
    if cli.json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        emit(cli, || match &doc.witness {
            None => format!(
                "{k}-power-free: yes ({} words checked, {} mode)",
                doc.words_checked, doc.mode
            ),
            Some(w) => format!(
                "{k}-power-free: NO\nwitness: f({}) contains ({})^{} at position {}\n\
                 words checked: {}",
                w.word, w.root, w.exponent, w.start, doc.words_checked
            ),
        });
    }
    Ok(if verdict.k_power_free { 0 } else { 1 })
}

fn scan_one(
    cli: &Cli,
    k: usize,
    f: Option<&Morphism>,
    raw: &str,
    show_image: bool,
) -> Result<bool> {
    let (word, scanned, image_text) = match f {
        Some(f) => {
            let word = parse_word(f.domain(), raw, cli.tokens)?;
            let image = f.apply(&word)?;
            let text = image.to_string();
            (word, image, Some(text))
        }
        None => {
            let alphabet = inferred_alphabet(raw, cli.tokens)?;
            let word = parse_word(&alphabet, raw, cli.tokens)?;
            (word.clone(), word, None)
        }
    };
    let witness = scanned.find_k_power(k);
    let doc = CheckDoc {
        word: word.to_string(),
        image: image_text.clone(),
        k_power_free: witness.is_none(),
        witness: witness.as_ref().map(PowerDoc::from_witness),
    };
    if cli.json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        emit(cli, || {
            let mut out = String::new();
            if show_image {
                if let Some(image) = &image_text {
                    let _ = writeln!(out, "image: {image}");
                }
            }
            let subject = if f.is_some() {
                format!("f({})", doc.word)
            } else {
                doc.word.clone()
            };
            match &doc.witness {
                None => {
                    let _ = write!(out, "{subject}: {k}-power-free");
                }
                Some(w) => {
                    let _ = write!(
                        out,
                        "{subject}: contains ({})^{} at position {}",
                        w.root, w.exponent, w.start
                    );
                }
            }
            out
        });
    }
    Ok(witness.is_some())
}

fn cmd_check(
    cli: &Cli,
    k: usize,
    word: Option<&str>,
    show_image: bool,
    morphism: Option<&Path>,
) -> Result<u8> {
    require_k(k, 2)?;
    let f = morphism.map(|p| load_morphism(p, cli.tokens)).transpose()?;
    let mut found = false;
    match word {
        Some(raw) => found = scan_one(cli, k, f.as_ref(), raw, show_image)?,
        None => {
            for line in std::io::stdin().lock().lines() {
                let line = line.context("reading standard input")?;
                let raw = line.trim();
                if raw.is_empty() {
                    continue;
                }
                found |= scan_one(cli, k, f.as_ref(), raw, show_image)?;
            }
        }
    }
    Ok(if found { 1 } else { 0 })
}

fn cmd_testset(cli: &Cli, k: usize, alphabet: &str, count: bool) -> Result<u8> {
    require_k(k, 3)?;
    let alphabet = if cli.tokens {
        Alphabet::new(alphabet.split_whitespace().map(str::to_string))?
    } else {
        Alphabet::from_chars(alphabet)?
    };
    let spec = TestSetSpec::new(alphabet.clone(), k);
    if count {
        let mut per_length: BTreeMap<usize, u64> = BTreeMap::new();
        let mut total = 0u64;
        for w in test_set(&alphabet, k) {
            *per_length.entry(w.len()).or_insert(0) += 1;
            total += 1;
        }
        if cli.json {
            #[derive(Serialize)]
            struct CountDoc {
                max_length: usize,
                per_length: BTreeMap<usize, u64>,
                total: u64,
            }
            let doc = CountDoc {
                max_length: spec.max_length,
                per_length,
                total,
            };
            println!("{}", serde_json::to_string(&doc)?);
        } else {
            emit(cli, || {
                let mut out = String::new();
                for (len, n) in &per_length {
                    let _ = writeln!(out, "length {len:>3}: {n}");
                }
                let _ = write!(out, "total: {total} (bound {})", spec.max_length);
                out
            });
        }
    } else {
        for w in test_set(&alphabet, k) {
            if cli.json {
                println!("{}", serde_json::to_string(&w.to_string())?);
            } else if !cli.quiet {
                println!("{w}");
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct DecompositionDoc {
    prefix: String,
    root: String,
    suffix: String,
    letters: Vec<String>,
    blocks: Vec<String>,
    p: Vec<String>,
    s: Vec<String>,
    synchronized: bool,
}

impl DecompositionDoc {
    fn new(f: &Morphism, prefix: &Word, suffix: &Word, d: &Decomposition) -> Self {
        DecompositionDoc {
            prefix: prefix.to_string(),
            root: d.root.to_string(),
            suffix: suffix.to_string(),
            letters: d
                .letters
                .iter()
                .map(|&a| f.domain().symbol(a).to_string())
                .collect(),
            blocks: d.blocks.iter().map(Word::to_string).collect(),
            p: d.p.iter().map(Word::to_string).collect(),
            s: d.s.iter().map(Word::to_string).collect(),
            synchronized: d.is_synchronized(),
        }
    }
}

fn or_epsilon(s: &str) -> &str {
    if s.is_empty() {
        "\u{3b5}"
    } else {
        s
    }
}

/// Four aligned columns: separator letter, block, p, s.
fn decomposition_table(doc: &DecompositionDoc) -> String {
    let k = doc.blocks.len();
    let mut rows: Vec<[String; 5]> = Vec::new();
    rows.push([
        "i".into(),
        "a_i".into(),
        "w_i".into(),
        "p_i".into(),
        "s_i".into(),
    ]);
    for i in 0..=k {
        rows.push([
            i.to_string(),
            doc.letters[i].clone(),
            if i == 0 {
                String::new()
            } else {
                or_epsilon(&doc.blocks[i - 1]).to_string()
            },
            or_epsilon(&doc.p[i]).to_string(),
            or_epsilon(&doc.s[i]).to_string(),
        ]);
    }
    let width = |col: usize| rows.iter().map(|r| r[col].chars().count()).max().unwrap();
    let widths: Vec<usize> = (0..5).map(width).collect();
    let mut out = String::new();
    for row in &rows {
        let _ = write!(out, " ");
        for (col, cell) in row.iter().enumerate() {
            let pad = widths[col] - cell.chars().count();
            let _ = write!(out, " {cell}{}", " ".repeat(pad));
        }
        out.truncate(out.trim_end().len());
        let _ = writeln!(out);
    }
    out
}

fn cmd_decompose(cli: &Cli, k: usize, path: &Path, word: &str) -> Result<u8> {
    require_k(k, 2)?;
    let f = load_morphism(path, cli.tokens)?;
    let w = parse_word(f.domain(), word, cli.tokens)?;
    let covers = find_direct_covers(&f, &w, k)?;
    let mut docs = Vec::new();
    for cover in &covers {
        let d = decompose(&f, cover)?;
        docs.push(DecompositionDoc::new(&f, &cover.prefix, &cover.suffix, &d));
    }
    if cli.json {
        println!("{}", serde_json::to_string(&docs)?);
    } else if docs.is_empty() {
        emit(cli, || format!("f({w}) directly covers no {k}-power"));
    } else {
        emit(cli, || {
            let mut out = String::new();
            for (n, doc) in docs.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "cover {}: f({w}) = {} ({})^{k} {}",
                    n + 1,
                    or_epsilon(&doc.prefix),
                    doc.root,
                    or_epsilon(&doc.suffix),
                );
                let _ = write!(out, "{}", decomposition_table(doc));
                let _ = writeln!(
                    out,
                    "  synchronized: {}",
                    if doc.synchronized { "yes" } else { "no" }
                );
            }
            out.truncate(out.trim_end().len());
            out
        });
    }
    Ok(0)
}

fn cmd_reduce(cli: &Cli, k: usize, path: &Path, word: &str) -> Result<u8> {
    require_k(k, 2)?;
    let f = load_morphism(path, cli.tokens)?;
    let w = parse_word(f.domain(), word, cli.tokens)?;
    let covers = find_direct_covers(&f, &w, k)?;
    let Some(cover) = covers.first() else {
        emit(cli, || {
            format!("f({w}) directly covers no {k}-power; nothing to reduce")
        });
        if cli.json {
            println!("null");
        }
        return Ok(0);
    };
    let trace = reduce_fully(&f, cover)?;

    #[derive(Serialize)]
    struct StepDoc {
        block: usize,
        letter: String,
        extended: bool,
        dropped: String,
        anchor: usize,
        word: String,
        root: String,
    }
    #[derive(Serialize)]
    struct TraceDoc {
        word: String,
        root: String,
        steps: Vec<StepDoc>,
        terminal_word: String,
        terminal_root: String,
        terminal_in_v: bool,
    }
    let doc = TraceDoc {
        word: trace.initial.word.to_string(),
        root: trace.initial.root.to_string(),
        steps: trace
            .steps
            .iter()
            .map(|step| StepDoc {
                block: step.candidate.block,
                letter: f.domain().symbol(step.candidate.letter).to_string(),
                extended: step.candidate.extended,
                dropped: step.candidate.y.to_string(),
                anchor: step.candidate.anchor,
                word: step.after.word.to_string(),
                root: step.after.root.to_string(),
            })
            .collect(),
        terminal_word: trace.terminal.word.to_string(),
        terminal_root: trace.terminal.root.to_string(),
        terminal_in_v: in_v(&trace.terminal.word, k),
    };
    if cli.json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        emit(cli, || {
            let mut out = String::new();
            let _ = writeln!(out, "start: word {} root {}", doc.word, doc.root);
            for (n, step) in doc.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "step {}: drop {} (letter {} in block {}{}) -> word {} root {}",
                    n + 1,
                    step.dropped,
                    step.letter,
                    step.block,
                    if step.extended { ", extended" } else { "" },
                    step.word,
                    step.root,
                );
            }
            let _ = write!(
                out,
                "terminal: word {} root {} ({})",
                doc.terminal_word,
                doc.terminal_root,
                if doc.terminal_in_v {
                    "in V"
                } else {
                    "not in V"
                }
            );
            out
        });
    }
    Ok(0)
}

fn cmd_oracle(cli: &Cli, k: usize, max_len: usize, path: &Path) -> Result<u8> {
    require_k(k, 2)?;
    let f = load_morphism(path, cli.tokens)?;
    let report = brute_force_search(&f, k, max_len);

    #[derive(Serialize)]
    struct OracleDoc {
        counterexample: Option<WitnessDoc>,
        words_scanned: u64,
        max_len: usize,
    }
    let doc = OracleDoc {
        counterexample: report.counterexample.as_ref().map(|w| WitnessDoc {
            word: w.word.to_string(),
            root: w.image_power.root.to_string(),
            exponent: w.image_power.exponent,
            start: w.image_power.start,
        }),
        words_scanned: report.words_scanned,
        max_len: report.max_len,
    };
    if cli.json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        emit(cli, || match &doc.counterexample {
            None => format!(
                "no counterexample up to length {max_len} ({} words scanned)",
                doc.words_scanned
            ),
            Some(w) => format!(
                "counterexample: f({}) contains ({})^{} at position {} \
                 ({} words scanned)",
                w.word, w.root, w.exponent, w.start, doc.words_scanned
            ),
        });
    }
    Ok(if report.counterexample.is_some() {
        1
    } else {
        0
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    cli: &Cli,
    k: usize,
    domain: &str,
    image: Option<&str>,
    uniform_len: usize,
    exhaustive: bool,
    samples: Option<u64>,
    seed: u64,
) -> Result<u8> {
    require_k(k, 2)?;
    let parse_alphabet = |s: &str| -> Result<Alphabet> {
        if cli.tokens {
            Ok(Alphabet::new(s.split_whitespace().map(str::to_string))?)
        } else {
            Ok(Alphabet::from_chars(s)?)
        }
    };
    let domain = parse_alphabet(domain)?;
    let image = match image {
        Some(s) => parse_alphabet(s)?,
        None => domain.clone(),
    };
    let family = if exhaustive {
        SweepFamily::Exhaustive {
            domain,
            image,
            uniform_len,
        }
    } else {
        let Some(samples) = samples else {
            bail!("choose --exhaustive or --samples <n>");
        };
        SweepFamily::Sampled {
            domain,
            image,
            uniform_len,
            samples,
            seed,
        }
    };
    let report = agreement_sweep(&family, k, cli.threads)?;

    #[derive(Serialize)]
    struct DisagreementDoc {
        index: u64,
        morphism: String,
        decide_free: bool,
        brute_free: bool,
    }
    #[derive(Serialize)]
    struct SweepDoc {
        checked: u64,
        free_count: u64,
        disagreements: Vec<DisagreementDoc>,
    }
    let doc = SweepDoc {
        checked: report.checked,
        free_count: report.free_count,
        disagreements: report
            .disagreements
            .iter()
            .map(|d| DisagreementDoc {
                index: d.index,
                morphism: d.morphism.to_text(),
                decide_free: d.decide_free,
                brute_free: d.brute_free,
            })
            .collect(),
    };
    if cli.json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        emit(cli, || {
            let mut out = format!(
                "checked {} morphisms: {} {k}-power-free, {} disagreements",
                doc.checked,
                doc.free_count,
                doc.disagreements.len()
            );
            for d in &doc.disagreements {
                let _ = write!(
                    out,
                    "\nDISAGREEMENT at sample {} (decide: {}, brute force: {}):\n{}",
                    d.index, d.decide_free, d.brute_free, d.morphism
                );
            }
            out
        });
    }
    Ok(if report.disagreements.is_empty() {
        0
    } else {
        1
    })
}
