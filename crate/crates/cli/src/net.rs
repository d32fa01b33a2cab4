//! Loopback transport: one framed request and one framed response per TCP
//! connection.

use std::io::{self, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::Arc;
use std::thread;

use codepir::framework::{gen_reply, Database, Query, Reply, RetrievalScheme};
use codepir::schemes::{SchemeInstance, SchemeParams};
use codepir::wire::{self, Message};

use crate::CliError;

/// What the server holds: the database and the scheme it was validated
/// against. There is no place for anything the client keeps secret.
#[derive(Debug)]
pub struct ServerState {
    pub params: SchemeParams,
    pub scheme: SchemeInstance,
    pub db: Database,
}

impl ServerState {
    pub fn new(params: SchemeParams, files: Vec<codepir::Element>) -> Result<Self, CliError> {
        let scheme = params.build()?;
        let db = Database::new(&scheme, files)?;
        Ok(ServerState { params, scheme, db })
    }

    /// Answers one decoded message.
    pub fn respond(&self, msg: Message) -> Message {
        let scheme = self.scheme.id();
        let error = |text: String| Message::Error { scheme, text };
        match msg {
            Message::Query { query, .. } => {
                if query.scheme != scheme || query.ctx != *self.scheme.ctx() {
                    return error(format!("server holds a {scheme} database over {:?}", self.scheme.ctx()));
                }
                match gen_reply(&query, self.db.files()) {
                    Ok(reply) => Message::Reply { params: self.params.clone(), reply },
                    Err(e) => error(e.to_string()),
                }
            }
            other => error(format!("expected a query, got {:?}", other.kind())),
        }
    }

    fn handle(&self, mut stream: TcpStream) -> Result<(), CliError> {
        let response = match wire::read_frame(&mut stream).and_then(wire::frame_message) {
            Ok(msg) => self.respond(msg),
            Err(e) => Message::Error { scheme: self.scheme.id(), text: e.to_string() },
        };
        stream.write_all(&wire::encode_message(&response))?;
        stream.flush()?;
        Ok(())
    }
}

/// Accepts connections until `limit` have been served (forever if `None`).
/// Per-connection failures are reported through `on_error` and do not stop
/// the server.
pub fn serve(
    listener: TcpListener,
    state: Arc<ServerState>,
    parallel: bool,
    limit: Option<usize>,
    on_error: impl Fn(CliError) + Send + Sync + 'static,
) -> Result<(), CliError> {
    let on_error = Arc::new(on_error);
    let mut workers = Vec::new();
    for (served, stream) in listener.incoming().enumerate() {
        let stream = stream?;
        if parallel {
            let (state, on_error) = (Arc::clone(&state), Arc::clone(&on_error));
            workers.push(thread::spawn(move || {
                if let Err(e) = state.handle(stream) {
                    on_error(e);
                }
            }));
        } else if let Err(e) = state.handle(stream) {
            on_error(e);
        }
        if limit.is_some_and(|l| served + 1 >= l) {
            break;
        }
    }
    for w in workers {
        w.join().map_err(|_| io::Error::other("worker panicked"))?;
    }
    Ok(())
}

/// Sends `query` and waits for the server's reply.
pub fn request<A: ToSocketAddrs>(addr: A, params: &SchemeParams, query: Query) -> Result<Reply, CliError> {
    let mut stream = TcpStream::connect(addr)?;
    let msg = Message::Query { params: params.clone(), query };
    stream.write_all(&wire::encode_message(&msg))?;
    stream.flush()?;
    match wire::frame_message(wire::read_frame(&mut stream)?)? {
        Message::Reply { reply, .. } => Ok(reply),
        Message::Error { text, .. } => Err(CliError::Remote(text)),
        Message::Query { .. } => Err(CliError::Remote("server answered with a query".into())),
    }
}

/// Binds a listener, resolving `addr` first.
pub fn bind(addr: &str) -> Result<(TcpListener, SocketAddr), CliError> {
    let listener = TcpListener::bind(addr)?;
    let local = listener.local_addr()?;
    Ok((listener, local))
}
