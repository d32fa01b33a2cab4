//! The generic retrieval engine: query generation, the server's linear reply
//! and the user's extraction, parameterized by a [`RetrievalScheme`].
//!
//! A scheme supplies a retrieval function `f` with three sets: files live in
//! `X`, errors of non-desired rows are drawn from `Y ⊆ ker f`, and the error
//! of the desired row from `Z` with `f(Z)` made of units. Every query row is a
//! codeword of a secret code plus such an error; the reply `Σ m_i q_i` is
//! decoded by the user to `Σ m_i e_i`, and `f` of the marked coordinate is
//! `m_b · f(e_b[v])`.
//!
//! Two hiding modes exist. In [`HidingMode::SystematicErrors`] the errors are
//! zero on an information set of a random linear code, so the user strips the
//! codeword part by erasure decoding. In [`HidingMode::ExplicitCoefficients`]
//! each row carries its coefficient `a_i` next to `a_i·s + e_i`.

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, RingCtx};
use crate::codes::{CodeError, ConstacyclicCode, LinearCode};
use crate::schemes::{SchemeId, SchemeParams};
use crate::wire;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("file index {b} out of range 1..={n}")]
    IndexOutOfRange { b: usize, n: usize },
    #[error("database must hold at least one file")]
    EmptyDatabase,
    #[error("database of {n} files exceeds the scheme limit of {max}")]
    TooManyFiles { n: usize, max: usize },
    #[error("query has {query} rows but the database holds {db} files")]
    SizeMismatch { query: usize, db: usize },
    #[error("file {0} is outside the scheme's file set")]
    NotAFile(usize),
    #[error("reply does not match the query shape")]
    ReplyShape,
    #[error("reply extraction failed: the reply is inconsistent with the query")]
    RecoveryFailed,
    #[error("marker image f(z) is not a unit")]
    MarkerNotUnit,
    #[error("database shape {rows}x{cols} does not hold {n} files")]
    BadShape { rows: usize, cols: usize, n: usize },
    #[error("database has no matrix shape")]
    NoShape,
    #[error("files are split into unequal numbers of chunks")]
    RaggedChunks,
    #[error("{0} is not a perfect square")]
    NotSquare(usize),
    #[error("{n} elements cannot be split into files of {chunks} chunks")]
    NotDivisible { n: usize, chunks: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HidingMode {
    SystematicErrors,
    ExplicitCoefficients,
}

/// Distribution of error coordinates in `I^C` other than the marked one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffTargetNoise {
    Uniform,
    Zero,
}

/// How file digits map onto one element of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileLayout {
    pub digits: usize,
    pub bits_per_digit: u32,
}

/// A retrieval function together with its samplers for `X`, `Y` and `Z`.
pub trait RetrievalScheme {
    fn id(&self) -> SchemeId;
    fn ctx(&self) -> &RingCtx;
    fn hiding_mode(&self) -> HidingMode;
    /// Length and dimension of the secret linear code (systematic mode only).
    fn code_shape(&self) -> (usize, usize);
    /// The retrieval function `f`.
    fn retrieve(&self, x: &Element) -> Element;
    /// Draws from `Y`.
    fn sample_kernel(&self, rng: &mut dyn RngCore) -> Element;
    /// Draws from `Z`.
    fn sample_marker(&self, rng: &mut dyn RngCore) -> Element;
    /// Uniform draw from `X`.
    fn sample_file(&self, rng: &mut dyn RngCore) -> Element;
    fn is_file(&self, x: &Element) -> bool;
    /// Computes `m` from `m·f(z)` given `f(z)`.
    fn recover(&self, value: &Element, marker_image: &Element) -> Result<Element, FrameworkError>;
    /// Largest database for which `Y`-combinations with `X` scalars stay in `ker f`.
    fn max_files(&self) -> Option<usize>;

    fn off_target_noise(&self) -> OffTargetNoise {
        OffTargetNoise::Uniform
    }

    fn file_layout(&self) -> FileLayout;

    fn file_from_digits(&self, digits: &[u64]) -> Element;

    fn file_digits(&self, file: &Element) -> Vec<u64>;

    /// Scheme-specific sanity check of the decoded marked value against the
    /// recovered file; evaluated in debug builds only.
    fn audit_extraction(&self, _decoded: &Element, _file: &Element) -> bool {
        true
    }

    /// Ring elements per query row.
    fn row_len(&self) -> usize {
        match self.hiding_mode() {
            HidingMode::SystematicErrors => self.code_shape().0,
            HidingMode::ExplicitCoefficients => 2,
        }
    }
}

/// The `N` query rows sent to the server.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub scheme: SchemeId,
    pub ctx: RingCtx,
    pub rows: Vec<Vec<Element>>,
}

/// `Σ m_i q_i`, one element per query row position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub vector: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretKey {
    Systematic { code: LinearCode, v: usize },
    Explicit { code: ConstacyclicCode },
}

/// Everything the user keeps to undo the masking; never sent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientSecret {
    /// Desired index, 1-based.
    pub b: usize,
    pub key: SecretKey,
    /// `f(e_b[v])`.
    pub marker_image: Element,
}

/// The error vectors drawn during query generation, for white-box tests.
/// Systematic mode stores each full `e_i`; explicit mode stores `[e_i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTrace {
    pub errors: Vec<Vec<Element>>,
}

/// `N` files from `X`, optionally laid out as an `rows × cols` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database {
    files: Vec<Element>,
    shape: Option<(usize, usize)>,
}

impl Database {
    pub fn new<S: RetrievalScheme + ?Sized>(scheme: &S, files: Vec<Element>) -> Result<Self, FrameworkError> {
        if files.is_empty() {
            return Err(FrameworkError::EmptyDatabase);
        }
        if let Some(i) = files.iter().position(|f| !scheme.is_file(f)) {
            return Err(FrameworkError::NotAFile(i + 1));
        }
        Ok(Database { files, shape: None })
    }

    pub fn random<S: RetrievalScheme + ?Sized, R: RngCore>(scheme: &S, n: usize, rng: &mut R) -> Result<Self, FrameworkError> {
        Database::new(scheme, (0..n).map(|_| scheme.sample_file(rng)).collect())
    }

    pub fn with_shape(mut self, rows: usize, cols: usize) -> Result<Self, FrameworkError> {
        if rows * cols != self.files.len() {
            return Err(FrameworkError::BadShape { rows, cols, n: self.files.len() });
        }
        self.shape = Some((rows, cols));
        Ok(self)
    }

    pub fn files(&self) -> &[Element] {
        &self.files
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    /// File `b`, 1-based.
    pub fn get(&self, b: usize) -> Option<&Element> {
        b.checked_sub(1).and_then(|i| self.files.get(i))
    }
}

pub fn gen_query<S: RetrievalScheme + ?Sized, R: RngCore>(
    scheme: &S,
    num_files: usize,
    b: usize,
    rng: &mut R,
) -> Result<(Query, ClientSecret), FrameworkError> {
    let (query, secret, _) = gen_query_traced(scheme, num_files, b, rng)?;
    Ok((query, secret))
}

/// [`gen_query`] that also returns the sampled error vectors.
pub fn gen_query_traced<S: RetrievalScheme + ?Sized, R: RngCore>(
    scheme: &S,
    num_files: usize,
    b: usize,
    rng: &mut R,
) -> Result<(Query, ClientSecret, QueryTrace), FrameworkError> {
    if num_files == 0 {
        return Err(FrameworkError::EmptyDatabase);
    }
    if let Some(max) = scheme.max_files() {
        if num_files > max {
            return Err(FrameworkError::TooManyFiles { n: num_files, max });
        }
    }
    if b == 0 || b > num_files {
        return Err(FrameworkError::IndexOutOfRange { b, n: num_files });
    }
    let ctx = scheme.ctx().clone();
    let mut rows = Vec::with_capacity(num_files);
    let mut errors = Vec::with_capacity(num_files);
    let (key, marker) = match scheme.hiding_mode() {
        HidingMode::SystematicErrors => {
            let (n, k) = scheme.code_shape();
            let code = LinearCode::sample(&ctx, n, k, rng)?;
            let complement = code.complement();
            let v = complement[rng.random_range(0..complement.len())];
            let mut marker = ctx.zero();
            for i in 1..=num_files {
                let a: Vec<Element> = (0..k).map(|_| ctx.random(rng)).collect();
                let c = code.encode(&a)?;
                let mut e = vec![ctx.zero(); n];
                for &j in &complement {
                    e[j] = if j == v {
                        if i == b {
                            marker = scheme.sample_marker(rng);
                            marker.clone()
                        } else {
                            scheme.sample_kernel(rng)
                        }
                    } else {
                        match scheme.off_target_noise() {
                            OffTargetNoise::Uniform => ctx.random(rng),
                            OffTargetNoise::Zero => ctx.zero(),
                        }
                    };
                }
                rows.push(c.iter().zip(&e).map(|(x, y)| ctx.add(x, y)).collect());
                errors.push(e);
            }
            (SecretKey::Systematic { code, v }, marker)
        }
        HidingMode::ExplicitCoefficients => {
            let code = ConstacyclicCode::sample(&ctx, rng)?;
            let mut marker = ctx.zero();
            for i in 1..=num_files {
                let a = ctx.random(rng);
                let e = if i == b {
                    marker = scheme.sample_marker(rng);
                    marker.clone()
                } else {
                    scheme.sample_kernel(rng)
                };
                let masked = ctx.add(&code.encode(&a), &e);
                rows.push(vec![a, masked]);
                errors.push(vec![e]);
            }
            (SecretKey::Explicit { code }, marker)
        }
    };
    let marker_image = scheme.retrieve(&marker);
    if ctx.invert(&marker_image).is_err() {
        return Err(FrameworkError::MarkerNotUnit);
    }
    let query = Query { scheme: scheme.id(), ctx, rows };
    Ok((query, ClientSecret { b, key, marker_image }, QueryTrace { errors }))
}

/// The server's only computation: `Σ m_i q_i`, componentwise.
pub fn gen_reply(query: &Query, db: &[Element]) -> Result<Reply, FrameworkError> {
    if query.rows.len() != db.len() {
        return Err(FrameworkError::SizeMismatch { query: query.rows.len(), db: db.len() });
    }
    let ctx = &query.ctx;
    let width = query.rows.first().map_or(0, Vec::len);
    if query.rows.iter().any(|r| r.len() != width) {
        return Err(FrameworkError::ReplyShape);
    }
    if let Some(i) = db.iter().position(|m| !ctx.contains(m)) {
        return Err(FrameworkError::NotAFile(i + 1));
    }
    let mut acc = vec![ctx.zero(); width];
    for (m, row) in db.iter().zip(&query.rows) {
        if ctx.is_zero(m) {
            continue;
        }
        for (a, q) in acc.iter_mut().zip(row) {
            *a = ctx.add(a, &ctx.mul(m, q));
        }
    }
    Ok(Reply { vector: acc })
}

/// Recovers `m_b` from an honest reply.
pub fn extract<S: RetrievalScheme + ?Sized>(
    scheme: &S,
    secret: &ClientSecret,
    reply: &Reply,
) -> Result<Element, FrameworkError> {
    let decoded = match &secret.key {
        SecretKey::Systematic { code, v } => {
            if reply.vector.len() != code.length() {
                return Err(FrameworkError::ReplyShape);
            }
            code.erase_decode(&reply.vector)?.swap_remove(*v)
        }
        SecretKey::Explicit { code } => match reply.vector.as_slice() {
            [r1, r2] => code.decode(r1, r2),
            _ => return Err(FrameworkError::ReplyShape),
        },
    };
    let file = scheme.recover(&scheme.retrieve(&decoded), &secret.marker_image)?;
    debug_assert!(scheme.audit_extraction(&decoded, &file));
    if !scheme.is_file(&file) {
        return Err(FrameworkError::RecoveryFailed);
    }
    Ok(file)
}

/// Query, replies and retrieved files of a multi-reply round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTranscript {
    pub query: Query,
    pub replies: Vec<Reply>,
    pub files: Vec<Element>,
}

/// Matrix layout: one query of `cols` rows aimed at `target_col`, one reply
/// per database row, extraction from the reply of `target_row` (both 1-based).
pub fn matrix_round<S: RetrievalScheme + ?Sized, R: RngCore>(
    scheme: &S,
    db: &Database,
    target_row: usize,
    target_col: usize,
    rng: &mut R,
) -> Result<RoundTranscript, FrameworkError> {
    let (rows, cols) = db.shape().ok_or(FrameworkError::NoShape)?;
    if target_row == 0 || target_row > rows {
        return Err(FrameworkError::IndexOutOfRange { b: target_row, n: rows });
    }
    let (query, secret) = gen_query(scheme, cols, target_col, rng)?;
    let replies = db
        .files()
        .chunks(cols)
        .map(|row| gen_reply(&query, row))
        .collect::<Result<Vec<_>, _>>()?;
    let file = extract(scheme, &secret, &replies[target_row - 1])?;
    Ok(RoundTranscript { query, replies, files: vec![file] })
}

/// Iterative replies: every file is `L` chunks; one query serves all `L`
/// chunk layers and the user reassembles the chunks of file `b`.
pub fn iterative_round<S: RetrievalScheme + ?Sized, R: RngCore>(
    scheme: &S,
    chunked: &[Vec<Element>],
    b: usize,
    rng: &mut R,
) -> Result<RoundTranscript, FrameworkError> {
    let layers = chunked.first().map_or(0, Vec::len);
    if chunked.is_empty() {
        return Err(FrameworkError::EmptyDatabase);
    }
    if layers == 0 || chunked.iter().any(|f| f.len() != layers) {
        return Err(FrameworkError::RaggedChunks);
    }
    for (i, file) in chunked.iter().enumerate() {
        if !file.iter().all(|c| scheme.is_file(c)) {
            return Err(FrameworkError::NotAFile(i + 1));
        }
    }
    let (query, secret) = gen_query(scheme, chunked.len(), b, rng)?;
    let mut replies = Vec::with_capacity(layers);
    let mut files = Vec::with_capacity(layers);
    for layer in 0..layers {
        let column: Vec<Element> = chunked.iter().map(|f| f[layer].clone()).collect();
        let reply = gen_reply(&query, &column)?;
        files.push(extract(scheme, &secret, &reply)?);
        replies.push(reply);
    }
    Ok(RoundTranscript { query, replies, files })
}

/// Splits bytes into `X` elements, least significant bits first. The last
/// element is zero-padded.
pub fn lift_bytes<S: RetrievalScheme + ?Sized>(scheme: &S, bytes: &[u8]) -> Vec<Element> {
    let FileLayout { digits, bits_per_digit } = scheme.file_layout();
    let total_bits = bytes.len() * 8;
    let per_element = digits * bits_per_digit as usize;
    let bit = |i: usize| -> u64 {
        if i < total_bits {
            ((bytes[i / 8] >> (i % 8)) & 1) as u64
        } else {
            0
        }
    };
    (0..total_bits.div_ceil(per_element))
        .map(|e| {
            let ds: Vec<u64> = (0..digits)
                .map(|d| {
                    let start = e * per_element + d * bits_per_digit as usize;
                    (0..bits_per_digit as usize).fold(0, |acc, j| acc | (bit(start + j) << j))
                })
                .collect();
            scheme.file_from_digits(&ds)
        })
        .collect()
}

/// Inverse of [`lift_bytes`], truncated to `byte_len` bytes.
pub fn lower_bytes<S: RetrievalScheme + ?Sized>(scheme: &S, elements: &[Element], byte_len: usize) -> Vec<u8> {
    let FileLayout { bits_per_digit, .. } = scheme.file_layout();
    let mut out = vec![0u8; byte_len];
    let mut pos = 0usize;
    for e in elements {
        for d in scheme.file_digits(e) {
            for j in 0..bits_per_digit as usize {
                if pos < byte_len * 8 && (d >> j) & 1 == 1 {
                    out[pos / 8] |= 1 << (pos % 8);
                }
                pos += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setup {
    Flat,
    MatrixSqrt,
    Iterative(usize),
}

/// Byte counts of one round. Payload counts only encoded query/reply
/// vectors; header counts framing, parameter blocks and row counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommCost {
    pub uplink_payload: u64,
    pub downlink_payload: u64,
    pub uplink_header: u64,
    pub downlink_header: u64,
    /// Encoded size of one query or reply vector.
    pub element_bytes: u64,
}

impl CommCost {
    pub fn uplink(&self) -> u64 {
        self.uplink_payload + self.uplink_header
    }

    pub fn downlink(&self) -> u64 {
        self.downlink_payload + self.downlink_header
    }

    pub fn total_payload(&self) -> u64 {
        self.uplink_payload + self.downlink_payload
    }
}

/// Communication for a database of `n` elements of `X`. `Iterative(L)`
/// groups them into `n / L` files of `L` chunks.
pub fn comm_cost(params: &SchemeParams, n: usize, setup: Setup) -> Result<CommCost, FrameworkError> {
    let (up_rows, down_rows) = match setup {
        Setup::Flat => (n, 1),
        Setup::MatrixSqrt => {
            let side = n.isqrt();
            if side * side != n {
                return Err(FrameworkError::NotSquare(n));
            }
            (side, side)
        }
        Setup::Iterative(chunks) => {
            if chunks == 0 || !n.is_multiple_of(chunks) {
                return Err(FrameworkError::NotDivisible { n, chunks });
            }
            (n / chunks, chunks)
        }
    };
    let element_bytes = wire::vector_bytes(params) as u64;
    let header = wire::message_overhead(params) as u64;
    Ok(CommCost {
        uplink_payload: up_rows as u64 * element_bytes,
        downlink_payload: down_rows as u64 * element_bytes,
        uplink_header: header,
        downlink_header: header,
        element_bytes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{BasicParams, SchemeInstance};
    use crate::seeded_rng;

    fn basic() -> SchemeInstance {
        SchemeParams::Basic(BasicParams { q: 13, n: 4, k: 2 }).build().unwrap()
    }

    #[test]
    fn single_file_round_trip() {
        let s = basic();
        let mut rng = seeded_rng(1);
        for m in 0..13 {
            let (q, secret) = gen_query(&s, 1, 1, &mut rng).unwrap();
            assert_eq!(q.rows.len(), 1);
            let reply = gen_reply(&q, &[Element::scalar(m)]).unwrap();
            assert_eq!(extract(&s, &secret, &reply).unwrap(), Element::scalar(m));
        }
    }

    #[test]
    fn index_bounds() {
        let s = basic();
        let mut rng = seeded_rng(1);
        assert_eq!(
            gen_query(&s, 5, 0, &mut rng).unwrap_err(),
            FrameworkError::IndexOutOfRange { b: 0, n: 5 }
        );
        assert_eq!(
            gen_query(&s, 5, 6, &mut rng).unwrap_err(),
            FrameworkError::IndexOutOfRange { b: 6, n: 5 }
        );
        assert_eq!(gen_query(&s, 0, 1, &mut rng).unwrap_err(), FrameworkError::EmptyDatabase);
    }

    #[test]
    fn trace_marks_only_the_desired_row() {
        let s = SchemeParams::Basic(BasicParams { q: 13, n: 4, k: 2 }).build().unwrap();
        let mut rng = seeded_rng(10);
        let (_, secret, trace) = gen_query_traced(&s, 10, 4, &mut rng).unwrap();
        let SecretKey::Systematic { code, v } = &secret.key else { panic!("systematic") };
        assert!(!code.info_set().contains(v));
        for (i, e) in trace.errors.iter().enumerate() {
            if i + 1 == 4 {
                assert_ne!(e[*v].value(), 0);
            } else {
                assert_eq!(e[*v].value(), 0);
            }
            assert!(code.info_set().iter().all(|&j| e[j].value() == 0));
        }
    }

    #[test]
    fn reply_is_linear() {
        let s = basic();
        let mut rng = seeded_rng(2);
        let (q, _) = gen_query(&s, 6, 2, &mut rng).unwrap();
        let zeros = vec![Element::scalar(0); 6];
        assert!(gen_reply(&q, &zeros).unwrap().vector.iter().all(|e| e.value() == 0));
        let mut unit = zeros.clone();
        unit[3] = Element::scalar(1);
        assert_eq!(gen_reply(&q, &unit).unwrap().vector, q.rows[3]);
        let db1: Vec<Element> = (0..6).map(|_| s.sample_file(&mut rng)).collect();
        let db2: Vec<Element> = (0..6).map(|_| s.sample_file(&mut rng)).collect();
        let sum: Vec<Element> = db1.iter().zip(&db2).map(|(a, b)| q.ctx.add(a, b)).collect();
        let r1 = gen_reply(&q, &db1).unwrap().vector;
        let r2 = gen_reply(&q, &db2).unwrap().vector;
        let rs: Vec<Element> = r1.iter().zip(&r2).map(|(a, b)| q.ctx.add(a, b)).collect();
        assert_eq!(gen_reply(&q, &sum).unwrap().vector, rs);
        assert_eq!(
            gen_reply(&q, &db1[..5]).unwrap_err(),
            FrameworkError::SizeMismatch { query: 6, db: 5 }
        );
    }

    #[test]
    fn tampering_off_the_extraction_path_is_harmless() {
        let s = basic();
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let db = Database::random(&s, 8, &mut rng).unwrap();
            let (q, secret) = gen_query(&s, 8, 5, &mut rng).unwrap();
            let mut reply = gen_reply(&q, db.files()).unwrap();
            let SecretKey::Systematic { code, v } = &secret.key else { panic!("systematic") };
            let j = code.complement().into_iter().find(|j| j != v).unwrap();
            reply.vector[j] = q.ctx.add(&reply.vector[j], &Element::scalar(1));
            assert_eq!(&extract(&s, &secret, &reply).unwrap(), db.get(5).unwrap());
            assert!(code.info_set().iter().all(|&i| code.erase_decode(&reply.vector).unwrap()[i].value() == 0));
        }
    }

    #[test]
    fn zero_file_extracts_zero() {
        let s = basic();
        let mut rng = seeded_rng(4);
        let (q, secret) = gen_query(&s, 3, 2, &mut rng).unwrap();
        let db = vec![Element::scalar(7), Element::scalar(0), Element::scalar(9)];
        let reply = gen_reply(&q, &db).unwrap();
        assert_eq!(extract(&s, &secret, &reply).unwrap(), Element::scalar(0));
    }

    #[test]
    fn matrix_round_degenerate_shapes() {
        let s = basic();
        let mut rng = seeded_rng(5);
        let db = Database::random(&s, 6, &mut rng).unwrap();
        let flat = db.clone().with_shape(1, 6).unwrap();
        for col in 1..=6 {
            let t = matrix_round(&s, &flat, 1, col, &mut rng).unwrap();
            assert_eq!(t.replies.len(), 1);
            assert_eq!(&t.files[0], db.get(col).unwrap());
        }
        let tall = db.clone().with_shape(6, 1).unwrap();
        for row in 1..=6 {
            let t = matrix_round(&s, &tall, row, 1, &mut rng).unwrap();
            assert_eq!(t.query.rows.len(), 1);
            assert_eq!(t.replies.len(), 6);
            assert_eq!(&t.files[0], db.get(row).unwrap());
        }
        assert!(matches!(db.clone().with_shape(4, 2), Err(FrameworkError::BadShape { .. })));
        assert_eq!(matrix_round(&s, &db, 1, 1, &mut rng).unwrap_err(), FrameworkError::NoShape);
    }

    #[test]
    fn iterative_round_validates_chunks() {
        let s = basic();
        let mut rng = seeded_rng(6);
        let files: Vec<Vec<Element>> = (0..4).map(|_| (0..3).map(|_| s.sample_file(&mut rng)).collect()).collect();
        let t = iterative_round(&s, &files, 2, &mut rng).unwrap();
        assert_eq!(t.files, files[1]);
        let mut ragged = files.clone();
        ragged[0].pop();
        assert_eq!(iterative_round(&s, &ragged, 1, &mut rng).unwrap_err(), FrameworkError::RaggedChunks);
        let mut outside = files.clone();
        outside[2][1] = Element::scalar(99);
        assert_eq!(iterative_round(&s, &outside, 1, &mut rng).unwrap_err(), FrameworkError::NotAFile(3));
    }

    #[test]
    fn database_rejects_elements_outside_x() {
        let s = basic();
        assert_eq!(
            Database::new(&s, vec![Element::scalar(1), Element::scalar(13)]).unwrap_err(),
            FrameworkError::NotAFile(2)
        );
        assert_eq!(Database::new(&s, vec![]).unwrap_err(), FrameworkError::EmptyDatabase);
    }

    #[test]
    fn byte_lifting_round_trips() {
        let s = basic();
        let bytes = b"private information retrieval".to_vec();
        let elems = lift_bytes(&s, &bytes);
        // q = 13 stores 3 bits per element.
        assert_eq!(elems.len(), (bytes.len() * 8).div_ceil(3));
        assert!(elems.iter().all(|e| s.is_file(e)));
        assert_eq!(lower_bytes(&s, &elems, bytes.len()), bytes);
    }

    #[test]
    fn cost_examples() {
        let p = SchemeParams::Basic(BasicParams { q: 13, n: 8, k: 4 });
        // 8 residues of 8 bytes: 64 bytes per vector.
        let flat = comm_cost(&p, 16, Setup::Flat).unwrap();
        assert_eq!((flat.element_bytes, flat.uplink_payload, flat.downlink_payload), (64, 1024, 64));
        let sq = comm_cost(&p, 16, Setup::MatrixSqrt).unwrap();
        assert_eq!((sq.uplink_payload, sq.downlink_payload), (256, 256));
        assert_eq!(sq.total_payload(), 2 * 4 * 64);
        let one = comm_cost(&p, 1, Setup::Flat).unwrap();
        assert_eq!(one.uplink_payload, one.downlink_payload);
        assert_eq!(comm_cost(&p, 15, Setup::MatrixSqrt).unwrap_err(), FrameworkError::NotSquare(15));
        assert!(sq.total_payload() < flat.total_payload());
    }
}
