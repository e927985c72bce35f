//! The `printsynth` command: interactive and scripted synthesis sessions,
//! test-set dumps, benchmark rows and the HTTP service.

pub mod dialog;

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;
use printsynth::adt::{
    binary_source, desugar_primitives, domain_of, gen_lower_bound_domain, html_source, parse_adt, AdtError, Domain,
};
use printsynth::synthesis::{
    emit_code, interactive_learn, EmitOptions, InferenceConfig, SynthesisError, TransducerOracle,
};
use printsynth::testset::{tree_test_set, TestSetError};
use printsynth::OneSts;
use printsynth_service::{Session, SessionConfig, SessionError, SessionStore};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}: not a JSON object of strings: {source}")]
    Answers { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Adt(#[from] AdtError),
    #[error(transparent)]
    TestSet(#[from] TestSetError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("no scripted answer for {0}")]
    MissingAnswer(String),
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Failed(String),
    #[error("unknown benchmark family {0:?}; expected lower-bound, binary or html")]
    UnknownFamily(String),
    #[error("benchmark size {0:?} is not a positive number")]
    BadSize(String),
    #[error("input ended before the session finished")]
    InputEnded,
    #[error("an input file is required")]
    NoInput,
}

#[derive(Debug, Parser)]
#[command(name = "printsynth", version, about = "Learn a recursive printer for an algebraic data type by answering questions")]
pub struct Cli {
    /// ADT declaration file.
    pub input: Option<PathBuf>,
    /// Largest number of candidates offered as a numbered list.
    #[arg(long, default_value_t = 9, value_name = "N")]
    pub suggestions: usize,
    /// JSON object mapping tree text to output; answers questions without a terminal.
    #[arg(long, value_name = "FILE")]
    pub answers: Option<PathBuf>,
    /// Write the emitted printer here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Serve the session API on this port.
    #[arg(long, value_name = "PORT", conflicts_with_all = ["input", "answers", "bench", "dump_testset"])]
    pub serve: Option<u16>,
    /// Run a built-in benchmark: lower-bound N, binary or html (N unused).
    #[arg(long, num_args = 2, value_names = ["FAMILY", "N"], conflicts_with = "input")]
    pub bench: Option<Vec<String>>,
    /// Print the tree test set, one tree per line, then its size.
    #[arg(long)]
    pub dump_testset: bool,
    /// Leave out running times so output is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

/// How a successful run ended.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A printer was produced.
    Emitted,
    /// The run finished without producing a printer (test-set dumps).
    Finished,
}

pub fn run(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<Outcome, CliError> {
    if let Some(port) = cli.serve {
        serve(port, out)?;
        return Ok(Outcome::Finished);
    }
    if cli.dump_testset {
        let domain = match &cli.bench {
            Some(args) => bench_family(args)?.domain,
            None => load_domain(cli.input.as_deref().ok_or(CliError::NoInput)?)?,
        };
        dump_testset(&domain, out)?;
        return Ok(Outcome::Finished);
    }
    if let Some(args) = &cli.bench {
        bench(cli, &bench_family(args)?, out)?;
        return Ok(Outcome::Emitted);
    }
    let path = cli.input.as_deref().ok_or(CliError::NoInput)?;
    let source = read(path)?;
    let start = Instant::now();
    let mut session = Session::create(
        source,
        SessionConfig {
            max_suggestions: cli.suggestions,
        },
    );
    match &cli.answers {
        Some(p) => {
            let answers: HashMap<String, String> =
                serde_json::from_str(&read(p)?).map_err(|source| CliError::Answers { path: p.clone(), source })?;
            dialog::scripted(&mut session, &answers, out)?;
        }
        None => dialog::interactive(&mut session, input, out)?,
    }
    let code = session.code()?;
    let s = session.stats();
    writeln!(
        out,
        "test set: {}, inferred: {}, asked: {} (plain {}, hint {}, suggestions {}), rejected: {}",
        s.testset_size, s.inferred, s.asked, s.asked_plain, s.asked_hint, s.asked_suggestions, s.rejected
    )?;
    if !cli.no_timing {
        writeln!(out, "time: {:.3}s", start.elapsed().as_secs_f64())?;
    }
    emit(cli, code, out)?;
    Ok(Outcome::Emitted)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn load_domain(path: &Path) -> Result<Domain, CliError> {
    Ok(domain_of(&desugar_primitives(&parse_adt(&read(path)?)?))?)
}

fn emit(cli: &Cli, code: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => {
            fs::write(p, code).map_err(|source| CliError::File { path: p.clone(), source })?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => write!(out, "\n{code}")?,
    }
    Ok(())
}

pub fn dump_testset(domain: &Domain, out: &mut dyn Write) -> Result<(), CliError> {
    let trees = tree_test_set(domain)?;
    for t in &trees {
        writeln!(out, "{}", t.display(domain.alphabet()))?;
    }
    writeln!(out, "size: {}", trees.len())?;
    Ok(())
}

/// A benchmark domain with the printer that answers its questions.
pub struct Benchmark {
    pub label: String,
    pub domain: Domain,
    /// Declaration used to emit the learned printer.
    pub source: String,
    pub printer: OneSts,
}

/// Case classes with the constructor names of the lower-bound family.
fn lower_bound_source(n: usize) -> String {
    let mut src = String::from("abstract class TA\nabstract class TB\nabstract class TF\n");
    for j in 1..=n {
        src.push_str(&format!("case class A{j}(t: TB) extends TA\n"));
        src.push_str(&format!("case class B{j}(t: TF) extends TB\n"));
        src.push_str(&format!("case class F{j}() extends TF\n"));
    }
    src
}

pub fn bench_family(args: &[String]) -> Result<Benchmark, CliError> {
    let [family, n] = args else {
        unreachable!("clap passes exactly two values")
    };
    let n: usize = match n.parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::BadSize(n.clone())),
    };
    let builtin = |src: &str| -> Result<Domain, CliError> { Ok(domain_of(&desugar_primitives(&parse_adt(src)?))?) };
    let (label, domain, source, rows): (String, Domain, String, Vec<(&str, Vec<String>)>) = match family.as_str() {
        "lower-bound" => (format!("lower-bound {n}"), gen_lower_bound_domain(n), lower_bound_source(n), Vec::new()),
        "binary" => (
            "binary".into(),
            builtin(binary_source())?,
            binary_source().to_string(),
            vec![
                ("Empty", vec!["".into()]),
                ("Zero", vec!["".into(), "0".into()]),
                ("One", vec!["".into(), "1".into()]),
            ],
        ),
        "html" => (
            "html".into(),
            builtin(html_source())?,
            html_source().to_string(),
            vec![
                ("node", vec!["<.".into(), "".into(), "".into()]),
                ("div", vec!["div".into()]),
                ("pre", vec!["pre".into()]),
                ("span", vec!["span".into()]),
                ("cons", vec!["(".into(), ")".into(), "".into()]),
                ("nil", vec!["".into()]),
            ],
        ),
        other => return Err(CliError::UnknownFamily(other.to_string())),
    };
    let a = domain.alphabet_arc();
    let printer = if rows.is_empty() {
        // every constant distinct, so no output is a coincidence
        let table = a
            .iter()
            .map(|(_, s)| (0..=s.arity).map(|i| format!("<{}.{i}>", s.name)).collect())
            .collect();
        OneSts::new(Arc::clone(&a), table)
    } else {
        OneSts::from_rows(Arc::clone(&a), rows.iter().map(|(f, r)| (*f, r.iter().map(String::as_str).collect())))
    }
    .map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(Benchmark {
        label,
        domain,
        source,
        printer,
    })
}

/// Learns the benchmark printer from a scripted oracle and prints the
/// counts of the session.
pub fn bench(cli: &Cli, b: &Benchmark, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let config = InferenceConfig {
        max_suggestions: cli.suggestions,
        check_invariants: false,
    };
    let learned = interactive_learn(&b.domain, &mut TransducerOracle(b.printer.clone()), config)?;
    if learned.sts != b.printer {
        return Err(CliError::Failed("the learned printer differs from the reference".into()));
    }
    let s = learned.stats;
    writeln!(out, "family: {}", b.label)?;
    writeln!(out, "test set: {}", s.testset_size)?;
    writeln!(out, "inferred: {}", s.inferred)?;
    writeln!(
        out,
        "asked: {} (plain {}, hint {}, suggestions {})",
        s.asked(),
        s.asked_plain,
        s.asked_hint,
        s.asked_suggestions
    )?;
    if !cli.no_timing {
        writeln!(out, "time: {:.3}s", start.elapsed().as_secs_f64())?;
    }
    if let Some(p) = &cli.out {
        let code = emit_code(&learned.sts, &parse_adt(&b.source)?, &learned.asked, EmitOptions::default());
        fs::write(p, code).map_err(|source| CliError::File { path: p.clone(), source })?;
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(())
}

fn serve(port: u16, out: &mut dyn Write) -> Result<(), CliError> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    writeln!(out, "listening on http://{addr}")?;
    out.flush()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(printsynth_service::api::serve(Arc::new(SessionStore::in_memory()), addr))?;
    Ok(())
}
