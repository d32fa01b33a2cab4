//! Bit-exact encodings: framed protocol messages, query transcripts and
//! database files.
//!
//! Frame: `"CPIR" | version | kind | scheme | body_len (u64 LE) | body`.
//! Query and reply bodies are `params | count (u64 LE) | vectors`, where the
//! parameter block is the scheme's `u64` words and each vector holds
//! [`SchemeParams::row_len`] ring elements of [`SchemeParams::element_width`]
//! residues, every residue as 8 little-endian bytes. Error bodies are UTF-8.
//!
//! Transcript: `"CPTR" | version | scheme | params | N (u64 LE) | N rows`.
//! Database: `"CPDB" | version | scheme | N (u64 LE) | N elements`.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::algebra::{Element, RingCtx};
use crate::framework::{Query, Reply, RetrievalScheme};
use crate::schemes::{SchemeError, SchemeId, SchemeParams};

pub const MAGIC: [u8; 4] = *b"CPIR";
pub const TRANSCRIPT_MAGIC: [u8; 4] = *b"CPTR";
pub const DB_MAGIC: [u8; 4] = *b"CPDB";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 15;
/// Frames announcing a larger body are refused before allocation.
pub const MAX_BODY: u64 = 1 << 30;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    BadVersion(u8),
    #[error("unknown message kind {0:#04x}")]
    UnknownKind(u8),
    #[error("unknown scheme id {0:#04x}")]
    UnknownScheme(u8),
    #[error("input truncated")]
    Truncated,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("body of {0} bytes exceeds the frame limit")]
    TooLarge(u64),
    #[error("residue {value} is not below modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },
    #[error("reply must carry exactly one vector, got {0}")]
    ReplyCount(u64),
    #[error("error body is not UTF-8")]
    BadText,
    #[error("query rows do not match the scheme shape")]
    Shape,
    #[error("database file size does not divide into {0} elements")]
    DbLayout(u64),
    #[error(transparent)]
    Params(#[from] SchemeError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    Query,
    Reply,
    Error,
}

impl MessageKind {
    pub fn byte(self) -> u8 {
        match self {
            MessageKind::Query => 0x01,
            MessageKind::Reply => 0x02,
            MessageKind::Error => 0x03,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(MessageKind::Query),
            0x02 => Some(MessageKind::Reply),
            0x03 => Some(MessageKind::Error),
            _ => None,
        }
    }
}

/// A frame with its body still undecoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub kind: MessageKind,
    pub scheme: SchemeId,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    Query { params: SchemeParams, query: Query },
    Reply { params: SchemeParams, reply: Reply },
    Error { scheme: SchemeId, text: String },
}

impl Message {
    pub fn kind(&self) -> MessageKind {
        match self {
            Message::Query { .. } => MessageKind::Query,
            Message::Reply { .. } => MessageKind::Reply,
            Message::Error { .. } => MessageKind::Error,
        }
    }

    pub fn scheme(&self) -> SchemeId {
        match self {
            Message::Query { params, .. } | Message::Reply { params, .. } => params.id(),
            Message::Error { scheme, .. } => *scheme,
        }
    }
}

/// Encoded size of one query row or reply vector.
pub fn vector_bytes(params: &SchemeParams) -> usize {
    params.row_len() * params.element_width() * 8
}

/// Bytes of a query or reply message outside its vectors: frame header,
/// parameter block and row count.
pub fn message_overhead(params: &SchemeParams) -> usize {
    HEADER_LEN + 8 * params.to_words().len() + 8
}

pub fn encode_frame(frame: &Frame) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + frame.body.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(frame.kind.byte());
    out.push(frame.scheme.byte());
    out.extend_from_slice(&(frame.body.len() as u64).to_le_bytes());
    out.extend_from_slice(&frame.body);
    out
}

/// Parses a 15-byte header into kind, scheme and body length.
fn parse_header(h: &[u8; HEADER_LEN]) -> Result<(MessageKind, SchemeId, u64), WireError> {
    let magic: [u8; 4] = h[..4].try_into().expect("slice of four");
    if magic != MAGIC {
        return Err(WireError::BadMagic(magic));
    }
    if h[4] != VERSION {
        return Err(WireError::BadVersion(h[4]));
    }
    let kind = MessageKind::from_byte(h[5]).ok_or(WireError::UnknownKind(h[5]))?;
    let scheme = SchemeId::from_byte(h[6]).ok_or(WireError::UnknownScheme(h[6]))?;
    let len = u64::from_le_bytes(h[7..15].try_into().expect("slice of eight"));
    Ok((kind, scheme, len))
}

pub fn decode_frame(bytes: &[u8]) -> Result<Frame, WireError> {
    let header: &[u8; HEADER_LEN] = bytes
        .get(..HEADER_LEN)
        .ok_or(WireError::Truncated)?
        .try_into()
        .expect("slice of fifteen");
    let (kind, scheme, len) = parse_header(header)?;
    let rest = &bytes[HEADER_LEN..];
    let len = usize::try_from(len).map_err(|_| WireError::Truncated)?;
    if rest.len() < len {
        return Err(WireError::Truncated);
    }
    if rest.len() > len {
        return Err(WireError::TrailingBytes(rest.len() - len));
    }
    Ok(Frame { kind, scheme, body: rest.to_vec() })
}

pub fn read_frame<R: Read>(reader: &mut R) -> Result<Frame, WireError> {
    let mut header = [0u8; HEADER_LEN];
    read_exact(reader, &mut header)?;
    let (kind, scheme, len) = parse_header(&header)?;
    if len > MAX_BODY {
        return Err(WireError::TooLarge(len));
    }
    let mut body = vec![0u8; len as usize];
    read_exact(reader, &mut body)?;
    Ok(Frame { kind, scheme, body })
}

fn read_exact<R: Read>(reader: &mut R, buf: &mut [u8]) -> Result<(), WireError> {
    reader.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => WireError::Truncated,
        _ => WireError::Io(e),
    })
}

pub fn write_frame<W: Write>(writer: &mut W, frame: &Frame) -> Result<(), WireError> {
    writer.write_all(&encode_frame(frame))?;
    writer.flush()?;
    Ok(())
}

pub fn encode_message(msg: &Message) -> Vec<u8> {
    encode_frame(&message_frame(msg))
}

pub fn decode_message(bytes: &[u8]) -> Result<Message, WireError> {
    frame_message(decode_frame(bytes)?)
}

pub fn message_frame(msg: &Message) -> Frame {
    let body = match msg {
        Message::Query { params, query } => {
            let mut w = Writer::default();
            w.words(&params.to_words());
            w.rows(&query.rows);
            w.0
        }
        Message::Reply { params, reply } => {
            let mut w = Writer::default();
            w.words(&params.to_words());
            w.rows(std::slice::from_ref(&reply.vector));
            w.0
        }
        Message::Error { text, .. } => text.as_bytes().to_vec(),
    };
    Frame { kind: msg.kind(), scheme: msg.scheme(), body }
}

pub fn frame_message(frame: Frame) -> Result<Message, WireError> {
    let scheme = frame.scheme;
    if frame.kind == MessageKind::Error {
        let text = String::from_utf8(frame.body).map_err(|_| WireError::BadText)?;
        return Ok(Message::Error { scheme, text });
    }
    let mut r = Reader::new(&frame.body);
    let (params, ctx) = r.params(scheme)?;
    let rows = r.rows(&params, &ctx)?;
    r.finish()?;
    Ok(match frame.kind {
        MessageKind::Query => Message::Query { query: Query { scheme, ctx, rows }, params },
        MessageKind::Reply => {
            if rows.len() != 1 {
                return Err(WireError::ReplyCount(rows.len() as u64));
            }
            let vector = rows.into_iter().next().expect("one row");
            Message::Reply { params, reply: Reply { vector } }
        }
        MessageKind::Error => unreachable!("handled above"),
    })
}

/// A recorded query: enough to rebuild the attacker's view bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub params: SchemeParams,
    pub query: Query,
}

pub fn encode_transcript(t: &Transcript) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(&TRANSCRIPT_MAGIC);
    w.0.push(VERSION);
    w.0.push(t.params.id().byte());
    w.words(&t.params.to_words());
    w.rows(&t.query.rows);
    w.0
}

pub fn decode_transcript(bytes: &[u8]) -> Result<Transcript, WireError> {
    let mut r = Reader::new(bytes);
    let scheme = r.preamble(TRANSCRIPT_MAGIC)?;
    let (params, ctx) = r.params(scheme)?;
    let rows = r.rows(&params, &ctx)?;
    r.finish()?;
    Ok(Transcript { query: Query { scheme, ctx, rows }, params })
}

/// Database file contents before validation against a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbFile {
    pub scheme: SchemeId,
    pub files: Vec<Element>,
}

pub fn encode_db(scheme: SchemeId, files: &[Element]) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(&DB_MAGIC);
    w.0.push(VERSION);
    w.0.push(scheme.byte());
    w.word(files.len() as u64);
    for f in files {
        w.words(f.residues());
    }
    w.0
}

/// Decodes a database file; the element width is whatever divides the
/// remaining bytes evenly among the `N` elements.
pub fn decode_db(bytes: &[u8]) -> Result<DbFile, WireError> {
    let mut r = Reader::new(bytes);
    let scheme = r.preamble(DB_MAGIC)?;
    let n = r.word()?;
    let rest = r.remaining() as u64;
    if n == 0 || !rest.is_multiple_of(8 * n) || rest == 0 {
        return Err(WireError::DbLayout(n));
    }
    let width = (rest / (8 * n)) as usize;
    let files = (0..n)
        .map(|_| (0..width).map(|_| r.word()).collect::<Result<Vec<_>, _>>().map(Element::from_residues))
        .collect::<Result<Vec<_>, _>>()?;
    r.finish()?;
    Ok(DbFile { scheme, files })
}

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn word(&mut self, w: u64) {
        self.0.extend_from_slice(&w.to_le_bytes());
    }

    fn words(&mut self, ws: &[u64]) {
        ws.iter().for_each(|&w| self.word(w));
    }

    fn rows(&mut self, rows: &[Vec<Element>]) {
        self.word(rows.len() as u64);
        for e in rows.iter().flatten() {
            self.words(e.residues());
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.remaining() < n {
            return Err(WireError::Truncated);
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn word(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("slice of eight")))
    }

    fn preamble(&mut self, magic: [u8; 4]) -> Result<SchemeId, WireError> {
        let m: [u8; 4] = self.take(4)?.try_into().expect("slice of four");
        if m != magic {
            return Err(WireError::BadMagic(m));
        }
        let v = self.take(1)?[0];
        if v != VERSION {
            return Err(WireError::BadVersion(v));
        }
        let s = self.take(1)?[0];
        SchemeId::from_byte(s).ok_or(WireError::UnknownScheme(s))
    }

    fn params(&mut self, scheme: SchemeId) -> Result<(SchemeParams, RingCtx), WireError> {
        let mut words = Vec::new();
        loop {
            let need = SchemeParams::word_count(scheme, &words);
            match need {
                Some(n) if words.len() >= n => break,
                _ if words.len() >= 16 => return Err(SchemeError::BadParams.into()),
                _ => words.push(self.word()?),
            }
        }
        let params = SchemeParams::from_words(scheme, &words)?;
        let ctx = params.build()?.ctx().clone();
        Ok((params, ctx))
    }

    fn rows(&mut self, params: &SchemeParams, ctx: &RingCtx) -> Result<Vec<Vec<Element>>, WireError> {
        let count = self.word()?;
        let row_len = params.row_len();
        let width = ctx.width();
        let row_bytes = (row_len as u64).saturating_mul(width as u64).saturating_mul(8);
        if count.saturating_mul(row_bytes) > self.remaining() as u64 {
            return Err(WireError::Truncated);
        }
        let modulus = ctx.residue_modulus();
        (0..count)
            .map(|_| {
                (0..row_len)
                    .map(|_| {
                        let r = (0..width)
                            .map(|_| {
                                let value = self.word()?;
                                if value >= modulus {
                                    return Err(WireError::ResidueOutOfRange { value, modulus });
                                }
                                Ok(value)
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Element::from_residues(r))
                    })
                    .collect()
            })
            .collect()
    }

    fn finish(&self) -> Result<(), WireError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(WireError::TrailingBytes(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{gen_query, gen_reply, Database};
    use crate::seeded_rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn sample_message(id: SchemeId, seed: u64) -> Message {
        let mut rng = seeded_rng(seed);
        let params = SchemeParams::default_for(id);
        let s = params.build().unwrap();
        let n = rng.random_range(1..=SchemeParams::default_files(id).min(8));
        let (query, _) = gen_query(&s, n, rng.random_range(1..=n), &mut rng).unwrap();
        match rng.random_range(0..3) {
            0 => Message::Query { params, query },
            1 => {
                let db = Database::random(&s, n, &mut rng).unwrap();
                let reply = gen_reply(&query, db.files()).unwrap();
                Message::Reply { params, reply }
            }
            _ => Message::Error { scheme: id, text: format!("error {seed}") },
        }
    }

    #[test]
    fn empty_error_frame_is_fifteen_bytes() {
        let msg = Message::Error { scheme: SchemeId::Basic, text: String::new() };
        let bytes = encode_message(&msg);
        assert_eq!(bytes.len(), 15);
        assert_eq!(&bytes[..7], b"CPIR\x01\x03\x01");
        assert_eq!(decode_message(&bytes).unwrap(), msg);
    }

    #[test]
    fn basic_query_round_trip() {
        let mut rng = seeded_rng(1);
        let params = SchemeParams::default_for(SchemeId::Basic);
        let s = params.build().unwrap();
        let (query, _) = gen_query(&s, 50, 7, &mut rng).unwrap();
        let msg = Message::Query { params: params.clone(), query };
        let bytes = encode_message(&msg);
        assert_eq!(bytes.len(), message_overhead(&params) + 50 * vector_bytes(&params));
        assert_eq!(decode_message(&bytes).unwrap(), msg);
        assert_eq!(encode_message(&decode_message(&bytes).unwrap()), bytes);
    }

    #[test]
    fn frame_errors() {
        let msg = sample_message(SchemeId::Basic, 3);
        let mut bytes = encode_message(&msg);
        let mut bad = bytes.clone();
        bad[..4].copy_from_slice(b"XPIR");
        assert!(matches!(decode_message(&bad), Err(WireError::BadMagic(m)) if &m == b"XPIR"));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(decode_message(&bad), Err(WireError::BadVersion(2))));
        let mut bad = bytes.clone();
        bad[5] = 9;
        assert!(matches!(decode_message(&bad), Err(WireError::UnknownKind(9))));
        let mut bad = bytes.clone();
        bad[6] = 0;
        assert!(matches!(decode_message(&bad), Err(WireError::UnknownScheme(0))));
        assert!(matches!(decode_message(&bytes[..bytes.len() - 1]), Err(WireError::Truncated)));
        assert!(matches!(decode_message(&bytes[..10]), Err(WireError::Truncated)));
        bytes.push(0);
        assert!(matches!(decode_message(&bytes), Err(WireError::TrailingBytes(1))));
    }

    #[test]
    fn out_of_range_residue_rejected() {
        let params = SchemeParams::default_for(SchemeId::Basic);
        let query = Query {
            scheme: SchemeId::Basic,
            ctx: RingCtx::prime_field(13).unwrap(),
            rows: vec![vec![Element::scalar(0); 10]],
        };
        let mut bytes = encode_message(&Message::Query { params, query });
        let last = bytes.len() - 8;
        bytes[last] = 13;
        assert!(matches!(
            decode_message(&bytes),
            Err(WireError::ResidueOutOfRange { value: 13, modulus: 13 })
        ));
    }

    #[test]
    fn fuzzed_messages_round_trip() {
        for seed in 0..1000 {
            let id = SchemeId::ALL[(seed % 4) as usize];
            let msg = sample_message(id, seed);
            let bytes = encode_message(&msg);
            let back = decode_message(&bytes).unwrap();
            assert_eq!(back, msg);
            assert_eq!(encode_message(&back), bytes);
        }
    }

    #[test]
    fn transcript_round_trip_and_determinism() {
        for id in SchemeId::ALL {
            let make = || {
                let mut rng = seeded_rng(11);
                let params = SchemeParams::default_for(id);
                let s = params.build().unwrap();
                let n = SchemeParams::default_files(id);
                let (query, _) = gen_query(&s, n, 2, &mut rng).unwrap();
                encode_transcript(&Transcript { params, query })
            };
            let bytes = make();
            assert_eq!(bytes, make());
            let t = decode_transcript(&bytes).unwrap();
            assert_eq!(encode_transcript(&t), bytes);
        }
    }

    #[test]
    fn db_round_trip() {
        let files: Vec<Element> = (0..5).map(|i| Element::from_residues(vec![i, 1, 0, 1])).collect();
        let bytes = encode_db(SchemeId::Hhwz, &files);
        assert_eq!(bytes.len(), 14 + 5 * 4 * 8);
        assert_eq!(decode_db(&bytes).unwrap(), DbFile { scheme: SchemeId::Hhwz, files });
        assert!(matches!(decode_db(&bytes[..bytes.len() - 3]), Err(WireError::DbLayout(5))));
    }

    proptest! {
        #[test]
        fn decoding_garbage_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let _ = decode_message(&bytes);
            let _ = decode_transcript(&bytes);
            let _ = decode_db(&bytes);
        }

        #[test]
        fn decoding_mutated_frames_never_panics(seed in 0u64..50, pos in 0usize..400, byte in any::<u8>()) {
            let mut bytes = encode_message(&sample_message(SchemeId::ALL[(seed % 4) as usize], seed));
            let i = pos % bytes.len();
            bytes[i] = byte;
            let _ = decode_message(&bytes);
        }
    }
}
