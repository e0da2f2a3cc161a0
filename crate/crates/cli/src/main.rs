use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use slowsync::bounds::lower_bounds;
use slowsync::extension::verify_no_critical_extension;
use slowsync::families::{catalog, cerny, quadratic_family, verify_catalog, FamilyVariant};
use slowsync::search::{enumerate, write_witnesses, SearchConfig, TransformationSpace};
use slowsync::{extension_bound, shortest_sync, Dfa, Error};

#[derive(Parser)]
#[command(
    name = "slowsync",
    version,
    about = "Slowly synchronizing automata toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest reset word of a DFA given in the text format ("-" for stdin).
    Analyze {
        path: PathBuf,
        /// Print the number of shortest reset words and their end states.
        #[arg(long)]
        count_words: bool,
        /// Print the lexicographically least shortest reset word.
        #[arg(long)]
        witness: bool,
        /// Print the staged bound on the reset length of any extension.
        #[arg(long)]
        bound: bool,
    },
    /// Count basic DFAs with long reset words, up to isomorphism (CSV).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min_sync: Option<usize>,
        #[arg(long)]
        max_sync: Option<usize>,
        #[arg(long)]
        max_alphabet: Option<usize>,
        /// Write every recorded DFA into this directory.
        #[arg(long)]
        witnesses: Option<PathBuf>,
        /// Resume from and periodically save to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Count labelled DFAs instead of isomorphism classes.
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Emit a member of a parametric family in the text format.
    Family {
        #[arg(long, value_enum)]
        name: FamilyName,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "A")]
        variant: FamilyVariant,
    },
    /// List the named critical DFAs, or print one of them.
    Catalog {
        /// Check every entry and print a pass/fail table.
        #[arg(long)]
        verify: bool,
        /// Print this entry in the text format.
        #[arg(long)]
        name: Option<String>,
    },
    /// Check all one-symbol extensions of C_n.
    CnExt {
        #[arg(long)]
        n: usize,
        /// Also build and check the explicit shorter word for every symbol.
        #[arg(long)]
        constructive: bool,
    },
    /// Lower bounds on the longest reset word for n states and k symbols.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u64,
    },
    /// Canonical representative of a DFA's isomorphism class.
    Canon { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Cerny,
    #[value(alias = "thm3")]
    Quadratic,
}

fn read_dfa(path: &Path) -> Result<Dfa, Error> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    Dfa::parse(&text, false)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(path: &Path, count_words: bool, witness: bool, bound: bool) -> Result<ExitCode, Error> {
    let dfa = read_dfa(path)?;
    let result = shortest_sync(&dfa);
    let mut out = String::new();
    out.push_str(&format!("n {}\nk {}\n", dfa.n(), dfa.alphabet_size()));
    out.push_str(&format!("basic {}\n", yes_no(dfa.is_basic())));
    out.push_str(&format!("synchronizing {}\n", yes_no(result.is_some())));
    if let Some(r) = &result {
        out.push_str(&format!("length {}\n", r.length));
        if witness {
            out.push_str(&format!("witness {}\n", r.witness));
        }
        if count_words {
            out.push_str(&format!("count {}\n", r.count));
            out.push_str(&format!("sync-states {}\n", r.sync_states));
        }
    }
    if bound {
        let b = extension_bound(&dfa);
        out.push_str(&format!("bound {}\n", b.total));
        out.push_str(&format!("bound-m {}\n", b.m));
        for (k, mk, lk) in &b.per_size {
            out.push_str(&format!("bound-stage {k} {mk} {lk}\n"));
        }
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(if result.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn run_enumerate(
    n: usize,
    min_sync: Option<usize>,
    max_sync: Option<usize>,
    max_alphabet: Option<usize>,
    witnesses: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
    threads: usize,
    no_symmetry: bool,
) -> Result<ExitCode, Error> {
    let mut config = SearchConfig::new(n);
    if let Some(s) = min_sync {
        config.s_min = s;
    }
    config.s_max = max_sync;
    if let Some(k) = max_alphabet {
        config.max_alphabet = k;
    }
    config.symmetry = !no_symmetry;
    config.witness_capture = witnesses.is_some();
    config.checkpoint_path = checkpoint;
    let s_min = config.s_min;
    let top = config.s_max.unwrap_or((n - 1) * (n - 1));
    let outcome = enumerate(config, threads)?;
    if let Some(dir) = witnesses {
        write_witnesses(&TransformationSpace::new(n)?, &outcome.witnesses, &dir)?;
    }
    let s = &outcome.stats;
    eprintln!(
        "visited {} recorded {} discarded-fast {} discarded-bound {}",
        s.visited, s.recorded, s.discarded_fast, s.discarded_bound
    );
    if outcome.table.above_cap > 0 {
        eprintln!("above max-sync: {}", outcome.table.above_cap);
    }
    io::stdout().write_all(outcome.table.to_csv(s_min, top.max(s_min)).as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn family(name: FamilyName, n: usize, variant: FamilyVariant) -> Result<ExitCode, Error> {
    let dfa = match name {
        FamilyName::Cerny => cerny(n)?,
        FamilyName::Quadratic => quadratic_family(n, variant)?,
    };
    io::stdout().write_all(dfa.to_text().as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run_catalog(verify: bool, name: Option<String>) -> Result<ExitCode, Error> {
    let mut out = String::new();
    if verify {
        let mut failed = false;
        out.push_str("entry,result\n");
        for (name, result) in verify_catalog() {
            match result {
                Ok(()) => out.push_str(&format!("{name},pass\n")),
                Err(e) => {
                    failed = true;
                    out.push_str(&format!("{name},fail: {e}\n"));
                }
            }
        }
        io::stdout().write_all(out.as_bytes())?;
        return Ok(if failed {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        });
    }
    if let Some(name) = name {
        let entry = catalog()
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(&name))
            .ok_or_else(|| Error::InvalidInput(format!("no catalog entry {name}")))?;
        out.push_str(&format!(
            "# {} length {} words {}\n",
            entry.name, entry.expected_length, entry.words
        ));
        out.push_str(&entry.dfa.to_text());
    } else {
        out.push_str("name,n,k,length,count,minimal,maximal\n");
        for e in catalog() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.name,
                e.dfa.n(),
                e.dfa.alphabet_size(),
                e.expected_length,
                e.expected_count,
                e.minimal,
                e.maximal
            ));
        }
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cn_ext(n: usize, constructive: bool) -> Result<ExitCode, Error> {
    let report = verify_no_critical_extension(n, constructive)?;
    let mut out = String::new();
    out.push_str(&format!("# n {}\n", report.n));
    out.push_str(&format!("# total_maps {}\n", report.total_maps));
    out.push_str(&format!("# trivial_skipped {}\n", report.trivial_skipped));
    out.push_str(&format!("# all_below {}\n", report.all_below));
    out.push_str(&format!("# max_length_found {}\n", report.max_length_found));
    out.push_str(&format!("# residual {}\n", report.residual));
    if constructive {
        out.push_str(&format!("# plan_failures {}\n", report.plan_failures.len()));
    }
    for c in &report.counterexamples {
        out.push_str(&format!("# counterexample {c:?}\n"));
    }
    for (c, why) in &report.plan_failures {
        out.push_str(&format!("# plan_failure {c:?} {why}\n"));
    }
    out.push_str(&report.to_csv());
    io::stdout().write_all(out.as_bytes())?;
    let ok = report.plan_failures.is_empty() && (n < 5 || report.all_below);
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn bounds(n: usize, k: u64) -> Result<ExitCode, Error> {
    let report = lower_bounds(n, k)?;
    let mut out = format!("n {n}\nk {k}\n");
    for line in &report.lines {
        out.push_str(&format!("bound {} ({})\n", line.value, line.source));
    }
    match report.best() {
        Some(b) => out.push_str(&format!("max {b}\n")),
        None => out.push_str("max none\n"),
    }
    if let Some(exact) = report.known {
        out.push_str(&format!("note: exact value from enumeration is {exact}\n"));
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn canon(path: &Path) -> Result<ExitCode, Error> {
    let dfa = read_dfa(path)?;
    io::stdout().write_all(dfa.canonical_form().to_text().as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            path,
            count_words,
            witness,
            bound,
        } => analyze(&path, count_words, witness, bound),
        Command::Enumerate {
            n,
            min_sync,
            max_sync,
            max_alphabet,
            witnesses,
            checkpoint,
            threads,
            no_symmetry,
        } => run_enumerate(
            n,
            min_sync,
            max_sync,
            max_alphabet,
            witnesses,
            checkpoint,
            threads,
            no_symmetry,
        ),
        Command::Family { name, n, variant } => family(name, n, variant),
        Command::Catalog { verify, name } => run_catalog(verify, name),
        Command::CnExt { n, constructive } => cn_ext(n, constructive),
        Command::Bounds { n, k } => bounds(n, k),
        Command::Canon { path } => canon(&path),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
