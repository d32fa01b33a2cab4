use std::net::TcpListener;
use std::path::Path;
use std::process::Command as Process;
use std::sync::Arc;
use std::thread;

use clap::Parser;
use codepir::framework::{gen_query, Database, RetrievalScheme};
use codepir::schemes::{SchemeId, SchemeParams};
use codepir::seeded_rng;
use codepir::wire::{self, Message, MessageKind};
use codepir_cli::args::{BenchArgs, SchemeArgs, SchemeName, SetupName};
use codepir_cli::net::{self, ServerState};
use codepir_cli::{bench_rows, run, Cli, CliError};
use tempfile::tempdir;

fn cli(args: &[&str]) -> (Result<bool, CliError>, String) {
    let parsed = Cli::try_parse_from(std::iter::once("codepir").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let r = run(parsed, &mut out);
    (r, String::from_utf8(out).unwrap())
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_codepir")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_basic_example_exits_zero() {
    let out = binary(&["demo", "--scheme", "basic", "--q", "13", "--n", "10", "--k", "5", "--N", "50", "--b", "7", "--seed", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result     ok"));
}

#[test]
fn demo_rlwe_example_exits_zero() {
    let out = binary(&[
        "demo", "--scheme", "rlwe", "--sigma", "2", "--t", "4", "--rq", "12289", "--deg", "64", "--N", "16", "--b", "3",
        "--seed", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn demo_every_scheme_in_process() {
    for s in ["basic", "hhwz", "amg", "rlwe"] {
        let (r, text) = cli(&["demo", "--scheme", s, "--b", "2", "--seed", "9"]);
        assert!(r.unwrap(), "{s}: {text}");
    }
}

#[test]
fn index_zero_is_a_usage_error() {
    let out = binary(&["demo", "--b", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(Cli::try_parse_from(["codepir", "demo", "--b", "0"]).is_err());
}

#[test]
fn index_past_the_end_is_rejected() {
    let (r, _) = cli(&["demo", "--b", "51"]);
    assert!(matches!(r, Err(CliError::Usage(_))));
}

#[test]
fn parameter_gate_failure_names_the_inequality() {
    let out = binary(&["demo", "--scheme", "rlwe", "--sigma", "8", "--N", "64", "--b", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("is not below q/2"), "{err}");
}

#[test]
fn transcripts_are_deterministic() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.tr");
    let b = dir.path().join("b.tr");
    for s in ["basic", "hhwz", "amg", "rlwe"] {
        cli(&["demo", "--scheme", s, "--b", "3", "--seed", "4", "--transcript", path(&a)]).0.unwrap();
        cli(&["demo", "--scheme", s, "--b", "3", "--seed", "4", "--transcript", path(&b)]).0.unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{s}");
    }
}

fn spawn_server(params: SchemeParams, files: Vec<codepir::Element>, requests: usize) -> (String, thread::JoinHandle<()>) {
    let state = Arc::new(ServerState::new(params, files).unwrap());
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    let handle = thread::spawn(move || {
        net::serve(listener, state, false, Some(requests), |e| panic!("{e}")).unwrap();
    });
    (addr, handle)
}

#[test]
fn loopback_fetch_through_the_cli() {
    let dir = tempdir().unwrap();
    let db = dir.path().join("db.bin");
    let out = dir.path().join("file.bin");
    cli(&["mkdb", "--seed", "3", "--out", path(&db)]).0.unwrap();
    let params = SchemeParams::default_for(SchemeId::Basic);
    let files = codepir_cli::load_db(&db, &params).unwrap();
    let (addr, server) = spawn_server(params, files.clone(), 1);
    let (r, text) = cli(&["fetch", "--addr", &addr, "--b", "11", "--seed", "8", "--out", path(&out)]);
    assert!(r.unwrap());
    server.join().unwrap();
    assert!(text.contains(&format!("file 11: {}", files[10].value())));
    assert_eq!(std::fs::read(&out).unwrap(), files[10].value().to_le_bytes());
}

#[test]
fn serve_binary_answers_fetch() {
    let dir = tempdir().unwrap();
    let db = dir.path().join("db.bin");
    cli(&["mkdb", "--scheme", "hhwz", "--seed", "3", "--out", path(&db)]).0.unwrap();
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let addr = format!("127.0.0.1:{port}");
    let mut server = Process::new(env!("CARGO_BIN_EXE_codepir"))
        .args(["serve", "--scheme", "hhwz", "--db", path(&db), "--addr", &addr, "--requests", "1"])
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let mut fetched = None;
    for _ in 0..100 {
        let out = binary(&["fetch", "--scheme", "hhwz", "--addr", &addr, "--b", "5", "--seed", "1"]);
        if out.status.success() {
            fetched = Some(String::from_utf8(out.stdout).unwrap());
            break;
        }
        thread::sleep(std::time::Duration::from_millis(50));
    }
    assert!(server.wait().unwrap().success());
    let params = SchemeParams::default_for(SchemeId::Hhwz);
    let files = codepir_cli::load_db(&db, &params).unwrap();
    let expected = codepir_cli::show(&files[4]);
    assert_eq!(fetched.unwrap().trim(), format!("file 5: {expected}"));
}

#[test]
fn size_mismatch_gets_an_error_frame() {
    let params = SchemeParams::default_for(SchemeId::Basic);
    let scheme = params.build().unwrap();
    let mut rng = seeded_rng(1);
    let db = Database::random(&scheme, 50, &mut rng).unwrap();
    let (addr, server) = spawn_server(params.clone(), db.files().to_vec(), 1);

    let (query, _) = gen_query(&scheme, 40, 3, &mut rng).unwrap();
    let mut stream = std::net::TcpStream::connect(&addr).unwrap();
    std::io::Write::write_all(&mut stream, &wire::encode_message(&Message::Query { params, query })).unwrap();
    let frame = wire::read_frame(&mut stream).unwrap();
    server.join().unwrap();
    assert_eq!(frame.kind, MessageKind::Error);
    assert_eq!(wire::encode_frame(&frame)[5], 0x03);
}

#[test]
fn wrong_scheme_is_refused() {
    let params = SchemeParams::default_for(SchemeId::Basic);
    let scheme = params.build().unwrap();
    let mut rng = seeded_rng(1);
    let db = Database::random(&scheme, 50, &mut rng).unwrap();
    let state = ServerState::new(params, db.files().to_vec()).unwrap();
    let other = SchemeParams::default_for(SchemeId::Hhwz);
    let (query, _) = gen_query(&other.build().unwrap(), 50, 1, &mut rng).unwrap();
    assert!(matches!(state.respond(Message::Query { params: other, query }), Message::Error { .. }));
}

#[test]
fn distinct_seeds_give_distinct_queries() {
    let dir = tempdir().unwrap();
    let mut seen = Vec::new();
    for seed in 0..10 {
        let p = dir.path().join(format!("{seed}.tr"));
        cli(&["demo", "--b", "7", "--seed", &seed.to_string(), "--transcript", path(&p)]).0.unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert!(!seen.contains(&bytes));
        seen.push(bytes);
    }
}

fn transcript(dir: &Path, scheme: &str, b: &str, seed: &str) -> String {
    let p = dir.join(format!("{scheme}-{seed}.tr"));
    cli(&["demo", "--scheme", scheme, "--b", b, "--seed", seed, "--transcript", path(&p)]).0.unwrap();
    path(&p).to_string()
}

#[test]
fn unitvec_attack_on_basic_transcript() {
    let dir = tempdir().unwrap();
    let tr = transcript(dir.path(), "basic", "17", "2");
    let (r, text) = cli(&["attack", "--transcript", &tr, "--strategy", "unitvec"]);
    assert!(r.unwrap());
    assert!(text.trim_end().ends_with("guess: 17"), "{text}");
}

#[test]
fn rank_attack_on_hhwz_transcript() {
    let dir = tempdir().unwrap();
    let tr = transcript(dir.path(), "hhwz", "5", "1");
    let (r, text) = cli(&["attack", "--transcript", &tr, "--strategy", "rank"]);
    assert!(r.unwrap(), "{text}");
    let row = |i: usize| text.lines().find(|l| l.split_whitespace().next() == Some(&i.to_string())).unwrap().to_string();
    assert!(row(5).trim_end().ends_with(" 22"), "{text}");
    assert_eq!((1..=30).filter(|&i| row(i).trim_end().ends_with(" 22")).count(), 1);
    assert!(text.contains("guess: 5"));
}

#[test]
fn lattice_attack_on_amg_transcript() {
    let dir = tempdir().unwrap();
    let tr = transcript(dir.path(), "amg", "6", "3");
    let (r, text) = cli(&["attack", "--transcript", &tr, "--strategy", "lattice", "--block", "4"]);
    assert!(r.unwrap(), "{text}");
    assert!(text.contains("shortest norm") && text.contains("cvp residual"));
    assert!(text.trim_end().ends_with("guess: 6"), "{text}");
}

#[test]
fn rank_attack_on_rlwe_is_flagged() {
    let dir = tempdir().unwrap();
    let tr = transcript(dir.path(), "rlwe", "3", "1");
    let (r, text) = cli(&["attack", "--transcript", &tr, "--strategy", "rank"]);
    assert!(!r.unwrap());
    assert!(text.contains("no gap expected"));
}

#[test]
fn lattice_on_basic_needs_t() {
    let dir = tempdir().unwrap();
    let tr = transcript(dir.path(), "basic", "3", "1");
    let (r, _) = cli(&["attack", "--transcript", &tr, "--strategy", "lattice"]);
    assert!(matches!(r, Err(CliError::Usage(_))));
}

fn bench(setup: SetupName, sizes: Vec<usize>) -> Vec<codepir_cli::BenchRow> {
    let args = BenchArgs {
        scheme: SchemeArgs {
            scheme: SchemeName::Basic,
            q: None,
            n: None,
            k: None,
            m: None,
            s: None,
            t: None,
            rq: None,
            deg: None,
            sigma: None,
            files: None,
        },
        setup,
        chunks: 4,
        sizes,
        seed: 0,
    };
    bench_rows(&args).unwrap()
}

#[test]
fn bench_matrix_beats_flat_at_sixteen() {
    let flat = &bench(SetupName::Flat, vec![16])[0];
    let matrix = &bench(SetupName::Matrix, vec![16])[0];
    assert!(matrix.uplink_payload + matrix.downlink_payload < flat.uplink_payload + flat.downlink_payload);
    assert_eq!(matrix.uplink_payload + matrix.downlink_payload, 2 * 4 * 80);
}

#[test]
fn bench_single_file_setups_agree() {
    let flat = &bench(SetupName::Flat, vec![1])[0];
    let matrix = &bench(SetupName::Matrix, vec![1])[0];
    assert_eq!((flat.uplink_payload, flat.downlink_payload), (matrix.uplink_payload, matrix.downlink_payload));
}

#[test]
fn bench_iterative_trades_uplink_for_downlink() {
    for (flat, iter) in bench(SetupName::Flat, vec![16, 64, 256]).iter().zip(bench(SetupName::Iter, vec![16, 64, 256])) {
        assert_eq!(flat.uplink_payload, 4 * iter.uplink_payload);
        assert_eq!(4 * flat.downlink_payload, iter.downlink_payload);
    }
}

#[test]
fn bench_rejects_non_square_matrix() {
    let (r, _) = cli(&["bench", "--setup", "matrix", "--Ns", "15"]);
    assert!(r.is_err());
}

#[test]
fn bench_prints_a_row_per_size() {
    let (r, text) = cli(&["bench", "--scheme", "amg", "--setup", "iter", "--Ns", "16,32"]);
    assert!(r.unwrap());
    assert_eq!(text.lines().count(), 4, "{text}");
}

#[test]
fn scheme_flags_reach_the_parameters() {
    let (r, text) = cli(&["demo", "--scheme", "basic", "--q", "31", "--n", "8", "--k", "3", "--N", "20", "--b", "4"]);
    assert!(r.unwrap());
    assert!(text.contains("q=31, n=8, k=3"));
    let params = SchemeParams::default_for(SchemeId::Amg);
    assert_eq!(params.build().unwrap().max_files(), Some(8));
}
