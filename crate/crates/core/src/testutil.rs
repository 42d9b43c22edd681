//! A single-request HTTP server for transport tests.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread::JoinHandle;

pub struct OneShotServer {
    addr: std::net::SocketAddr,
    handle: Option<JoinHandle<Vec<String>>>,
}

impl OneShotServer {
    pub fn reply(status: u16, body: &str) -> Self {
        Self::replies(vec![(status, body.to_owned())])
    }

    /// Answers one request per entry, in order, then stops.
    pub fn replies(replies: Vec<(u16, String)>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        let addr = listener.local_addr().expect("bound address");
        let handle = std::thread::spawn(move || {
            let mut seen = Vec::new();
            for (status, body) in replies {
                let (mut stream, _) = listener.accept().expect("accept");
                let mut reader = BufReader::new(stream.try_clone().expect("clone stream"));
                let mut head = String::new();
                let mut length = 0usize;
                loop {
                    let mut line = String::new();
                    if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        length = v.trim().parse().unwrap_or(0);
                    }
                    head.push_str(&line);
                }
                let mut payload = vec![0; length];
                reader.read_exact(&mut payload).expect("request body");
                seen.push(format!("{head}\r\n{}", String::from_utf8_lossy(&payload)));
                let response = format!(
                    "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                    body.len()
                );
                stream.write_all(response.as_bytes()).expect("write response");
            }
            seen
        });
        Self {
            addr,
            handle: Some(handle),
        }
    }

    pub fn url(&self, path: &str) -> String {
        format!("http://{}{path}", self.addr)
    }

    /// The first request received; waits for all replies to be served.
    pub fn request(self) -> String {
        self.requests().into_iter().next().unwrap_or_default()
    }

    pub fn requests(mut self) -> Vec<String> {
        self.handle.take().expect("joined once").join().expect("server thread")
    }
}
