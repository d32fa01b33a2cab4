//! The `codepir` command line: in-process demo, database files, a loopback
//! server and client, attacks on recorded transcripts, and a communication
//! benchmark.

pub mod args;
pub mod net;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::sync::Arc;
use std::time::{Duration, Instant};

use codepir::attacks::{
    amg_lattice_attack, rank_drop_attack, unit_vector_attack, AttackError, AttackReport, QueryMatrix, Strategy,
};
use codepir::framework::{
    comm_cost, extract, gen_query, gen_reply, Database, FrameworkError, RetrievalScheme, Setup,
};
use codepir::schemes::{SchemeError, SchemeId, SchemeParams};
use codepir::wire::{self, Message, Transcript, WireError};
use codepir::{seeded_rng, Element, RingCtx};
use thiserror::Error;

pub use args::Cli;
use args::{AttackArgs, BenchArgs, Command, DemoArgs, FetchArgs, MkdbArgs, ServeArgs, SetupName, StrategyName};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("server error: {0}")]
    Remote(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Runs a parsed command. `Ok(false)` means the command ran but did not
/// achieve its goal (wrong file retrieved, no attack guess).
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Demo(a) => demo(a, out),
        Command::Mkdb(a) => mkdb(a, out),
        Command::Serve(a) => serve(a, out),
        Command::Fetch(a) => fetch(a, out),
        Command::Attack(a) => attack(a, out),
        Command::Bench(a) => bench(a, out),
    }
}

fn index(b: u64, n: usize) -> Result<usize, CliError> {
    usize::try_from(b)
        .ok()
        .filter(|&b| (1..=n).contains(&b))
        .ok_or_else(|| CliError::Usage(format!("--b must lie in 1..={n}, got {b}")))
}

pub fn describe(params: &SchemeParams) -> String {
    match params {
        SchemeParams::Basic(p) => format!("basic (q={}, n={}, k={})", p.q, p.n, p.k),
        SchemeParams::Hhwz(p) => format!("hhwz (q={}, m={}, s={}, n={}, k={})", p.q, p.m, p.s, p.n, p.k),
        SchemeParams::Amg(p) => format!(
            "amg (N={}, n={}, k={}, l={}, t={}, p={})",
            p.files,
            p.n,
            p.k,
            p.file_bits(),
            p.t(),
            p.prime()
        ),
        SchemeParams::Rlwe(p) => {
            format!("rlwe (deg={}, q={}, t={}, sigma={}, N={})", p.deg, p.q, p.t, p.sigma, p.files)
        }
    }
}

pub fn show(e: &Element) -> String {
    match e.residues() {
        [x] => x.to_string(),
        r => format!("{r:?}"),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn demo(a: DemoArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let n = a.scheme.num_files();
    let params = a.scheme.params()?;
    let b = index(a.b, n)?;
    let scheme = params.build()?;
    let mut rng = seeded_rng(a.seed);
    let db = Database::random(&scheme, n, &mut rng)?;

    let t0 = Instant::now();
    let (query, secret) = gen_query(&scheme, n, b, &mut rng)?;
    let t1 = Instant::now();
    let reply = gen_reply(&query, db.files())?;
    let t2 = Instant::now();
    let file = extract(&scheme, &secret, &reply)?;
    let t3 = Instant::now();

    let query_bytes = wire::encode_message(&Message::Query { params: params.clone(), query: query.clone() }).len();
    let reply_bytes = wire::encode_message(&Message::Reply { params: params.clone(), reply }).len();
    let overhead = wire::message_overhead(&params);
    if let Some(path) = &a.transcript {
        fs::write(path, wire::encode_transcript(&Transcript { params: params.clone(), query }))?;
    }
    let expected = db.get(b).expect("index checked");
    let ok = file == *expected;
    writeln!(out, "scheme     {}", describe(&params))?;
    writeln!(out, "files      {n}")?;
    writeln!(out, "index      {b}")?;
    writeln!(out, "retrieved  {}", show(&file))?;
    writeln!(out, "expected   {}", show(expected))?;
    writeln!(out, "uplink     {} B ({} B header)", query_bytes, overhead)?;
    writeln!(out, "downlink   {} B ({} B header)", reply_bytes, overhead)?;
    writeln!(
        out,
        "time       query {:.3} ms, reply {:.3} ms, extract {:.3} ms",
        ms(t1 - t0),
        ms(t2 - t1),
        ms(t3 - t2)
    )?;
    writeln!(out, "result     {}", if ok { "ok" } else { "MISMATCH" })?;
    Ok(ok)
}

fn random_files(params: &SchemeParams, n: usize, seed: u64) -> Result<Vec<Element>, CliError> {
    let scheme = params.build()?;
    let mut rng = seeded_rng(seed);
    Ok(Database::random(&scheme, n, &mut rng)?.files().to_vec())
}

fn mkdb(a: MkdbArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let n = a.scheme.num_files();
    let params = a.scheme.params()?;
    let files = random_files(&params, n, a.seed)?;
    fs::write(&a.out, wire::encode_db(params.id(), &files))?;
    writeln!(out, "wrote {n} files for {} to {}", describe(&params), a.out.display())?;
    Ok(true)
}

/// Reads a database file and validates it against the scheme flags.
pub fn load_db(path: &std::path::Path, params: &SchemeParams) -> Result<Vec<Element>, CliError> {
    let db = wire::decode_db(&fs::read(path)?)?;
    if db.scheme != params.id() {
        return Err(CliError::Usage(format!("database holds {} files, flags select {}", db.scheme, params.id())));
    }
    Ok(db.files)
}

fn serve(a: ServeArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let params = a.scheme.params()?;
    let files = load_db(&a.db, &params)?;
    let n = files.len();
    let state = Arc::new(net::ServerState::new(params.clone(), files)?);
    let (listener, local) = net::bind(&a.addr)?;
    writeln!(out, "serving {n} files for {} on {local}", describe(&params))?;
    out.flush()?;
    net::serve(listener, state, a.parallel, a.requests, |e| eprintln!("connection failed: {e}"))?;
    Ok(true)
}

fn fetch(a: FetchArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let n = a.scheme.num_files();
    let params = a.scheme.params()?;
    let b = index(a.b, n)?;
    let scheme = params.build()?;
    let mut rng = seeded_rng(a.seed);
    let (query, secret) = gen_query(&scheme, n, b, &mut rng)?;
    if let Some(path) = &a.transcript {
        fs::write(path, wire::encode_transcript(&Transcript { params: params.clone(), query: query.clone() }))?;
    }
    let reply = net::request(a.addr.as_str(), &params, query)?;
    let file = extract(&scheme, &secret, &reply)?;
    if let Some(path) = &a.out {
        let bytes: Vec<u8> = file.residues().iter().flat_map(|r| r.to_le_bytes()).collect();
        fs::write(path, bytes)?;
    }
    writeln!(out, "file {b}: {}", show(&file))?;
    Ok(true)
}

fn attack(a: AttackArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let t = wire::decode_transcript(&fs::read(&a.transcript)?)?;
    let mut matrix = QueryMatrix::from_query(&t.query)?;
    let mut notes = Vec::new();
    if t.params.id() == SchemeId::Rlwe && a.strategy != StrategyName::Lattice {
        matrix = matrix.coefficient_view()?;
        notes.push("rlwe transcript: attacking the coefficient matrix, no gap expected".to_string());
    }
    let report = match a.strategy {
        StrategyName::Unitvec => unit_vector_attack(&matrix)?,
        StrategyName::Rank => rank_drop_attack(&matrix)?,
        StrategyName::Lattice => {
            let marker = match (&t.params, a.t) {
                (_, Some(t)) => t,
                (SchemeParams::Amg(p), None) => p.t(),
                _ => return Err(CliError::Usage("--t is required for non-amg transcripts".into())),
            };
            amg_lattice_attack(&matrix, marker, a.block)?
        }
    };
    writeln!(out, "transcript {} with {} rows", describe(&t.params), matrix.len())?;
    out.write_all(format_report(&report).as_bytes())?;
    for note in notes {
        writeln!(out, "note: {note}")?;
    }
    Ok(report.guess.is_some())
}

/// Renders a report as a table followed by notes and the verdict.
pub fn format_report(r: &AttackReport) -> String {
    let mut s = String::new();
    let label = match r.strategy {
        Strategy::UnitVector => "in span",
        Strategy::RankDrop => "rank",
        Strategy::Lattice => "cvp residual",
    };
    if !r.block_stats.is_empty() {
        let _ = writeln!(s, "{:>6}  {:>14}", "block", "shortest norm");
        for (i, v) in r.block_stats.iter().enumerate() {
            let _ = writeln!(s, "{:>6}  {:>14.3}", i + 1, v);
        }
    }
    let _ = writeln!(s, "{:>6}  {:>14}", "index", label);
    for (i, v) in r.stats.iter().enumerate() {
        let cell = match r.strategy {
            _ if v.is_nan() => "-".to_string(),
            Strategy::UnitVector => (if *v > 0.0 { "yes" } else { "no" }).to_string(),
            Strategy::RankDrop => format!("{v:.0}"),
            Strategy::Lattice => format!("{v:.3}"),
        };
        let _ = writeln!(s, "{:>6}  {:>14}", i + 1, cell);
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    if r.degraded {
        let _ = writeln!(s, "note: degraded confidence");
    }
    let _ = writeln!(s, "elapsed: {:.3} ms", ms(r.elapsed));
    match r.guess {
        Some(g) => {
            let _ = writeln!(s, "guess: {g}");
        }
        None => {
            let _ = writeln!(s, "guess: none (candidates {:?})", r.candidates);
        }
    }
    s
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub uplink_payload: u64,
    pub downlink_payload: u64,
    pub header: u64,
    pub server: Duration,
}

pub fn bench_rows(a: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let setup = match a.setup {
        SetupName::Flat => Setup::Flat,
        SetupName::Matrix => Setup::MatrixSqrt,
        SetupName::Iter => Setup::Iterative(a.chunks),
    };
    let mut rows = Vec::new();
    for &n in &a.sizes {
        let (query_rows, replies) = match setup {
            Setup::Flat => (n, 1),
            Setup::MatrixSqrt => (n.isqrt(), n.isqrt()),
            Setup::Iterative(l) => (n / l.max(1), l),
        };
        let params = a.scheme.params_for(query_rows.max(1))?;
        let cost = comm_cost(&params, n, setup)?;
        let scheme = params.build()?;
        let mut rng = seeded_rng(a.seed);
        let (query, _) = gen_query(&scheme, query_rows, 1, &mut rng)?;
        let layers: Vec<Vec<Element>> = (0..replies)
            .map(|_| (0..query_rows).map(|_| scheme.sample_file(&mut rng)).collect())
            .collect();
        let start = Instant::now();
        for layer in &layers {
            gen_reply(&query, layer)?;
        }
        rows.push(BenchRow {
            n,
            uplink_payload: cost.uplink_payload,
            downlink_payload: cost.downlink_payload,
            header: cost.uplink_header,
            server: start.elapsed(),
        });
    }
    Ok(rows)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let rows = bench_rows(&a)?;
    let params = a.scheme.params_for(1).or_else(|_| a.scheme.params())?;
    writeln!(out, "scheme {}, setup {:?}, element {} B", describe(&params), a.setup, wire::vector_bytes(&params))?;
    writeln!(out, "{:>8} {:>12} {:>12} {:>12} {:>10} {:>12}", "N", "uplink", "downlink", "total", "header", "server ms")?;
    for r in rows {
        writeln!(
            out,
            "{:>8} {:>12} {:>12} {:>12} {:>10} {:>12.3}",
            r.n,
            r.uplink_payload,
            r.downlink_payload,
            r.uplink_payload + r.downlink_payload,
            r.header,
            ms(r.server)
        )?;
    }
    Ok(true)
}

/// Context of a scheme's queries, for callers that only hold flags.
pub fn ctx_of(params: &SchemeParams) -> Result<RingCtx, CliError> {
    Ok(params.build()?.ctx().clone())
}
