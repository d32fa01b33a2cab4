//! Browser bindings: one in-page PIR round, the HHWZ per-row rank profile,
//! and communication cost curves.

use codepir::attacks::{rank_drop_attack, QueryMatrix};
use codepir::framework::{comm_cost, extract, gen_query, gen_reply, Database, Setup};
use codepir::schemes::{SchemeId, SchemeParams};
use codepir::seeded_rng;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn scheme_id(name: &str) -> Result<SchemeId, JsError> {
    name.parse().map_err(err)
}

/// Runs one query/reply/extract round on a random database and describes it.
#[wasm_bindgen]
pub fn run_round(scheme: &str, b: usize, seed: u64) -> Result<String, JsError> {
    let id = scheme_id(scheme)?;
    let params = SchemeParams::default_for(id);
    let s = params.build().map_err(err)?;
    let n = SchemeParams::default_files(id);
    let mut rng = seeded_rng(seed);
    let db = Database::random(&s, n, &mut rng).map_err(err)?;
    let (query, secret) = gen_query(&s, n, b, &mut rng).map_err(err)?;
    let reply = gen_reply(&query, db.files()).map_err(err)?;
    let file = extract(&s, &secret, &reply).map_err(err)?;
    let expected = db.get(b).ok_or_else(|| JsError::new("index out of range"))?;
    Ok(format!(
        "{id}: {n} files, query of {} rows\nretrieved {:?}\nexpected  {:?}\n{}",
        query.rows.len(),
        file.residues(),
        expected.residues(),
        if &file == expected { "match" } else { "MISMATCH" }
    ))
}

/// Base-field rank of the HHWZ query matrix with each row deleted in turn.
#[wasm_bindgen]
pub fn hhwz_rank_profile(b: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    let s = SchemeParams::default_for(SchemeId::Hhwz).build().map_err(err)?;
    let n = SchemeParams::default_files(SchemeId::Hhwz);
    let mut rng = seeded_rng(seed);
    let (query, _) = gen_query(&s, n, b, &mut rng).map_err(err)?;
    let report = rank_drop_attack(&QueryMatrix::from_query(&query).map_err(err)?).map_err(err)?;
    Ok(report.stats)
}

/// Total payload bytes (uplink + downlink) for each database size;
/// `setup` is `flat`, `matrix` or `iter`. Sizes a setup cannot handle give
/// `NaN`.
#[wasm_bindgen]
pub fn comm_curve(scheme: &str, setup: &str, chunks: usize, sizes: Vec<u32>) -> Result<Vec<f64>, JsError> {
    let params = SchemeParams::default_for(scheme_id(scheme)?);
    let setup = match setup {
        "flat" => Setup::Flat,
        "matrix" => Setup::MatrixSqrt,
        "iter" => Setup::Iterative(chunks),
        other => return Err(JsError::new(&format!("unknown setup {other}"))),
    };
    Ok(sizes
        .iter()
        .map(|&n| comm_cost(&params, n as usize, setup).map_or(f64::NAN, |c| c.total_payload() as f64))
        .collect())
}
