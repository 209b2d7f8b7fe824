//! Wire-level tests for the parse client against a minimal in-process HTTP
//! server that speaks just enough of the protocol.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::time::Duration;

use depex_core::error::Error;
use depex_core::parser_client::{ParseRequest, ParserClient};

const GOLDEN: &str = include_str!("fixtures/corenlp_cat.json");

/// Serve `responses` one connection at a time, sending each request's
/// first line back through the channel.
fn one_shot_server(
    responses: Vec<(u16, String)>,
) -> (String, mpsc::Receiver<String>, std::thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
    let endpoint = format!("http://{}", listener.local_addr().unwrap());
    let (tx, rx) = mpsc::channel();
    let handle = std::thread::spawn(move || {
        for (status, body) in responses {
            let (mut stream, _) = listener.accept().expect("accept");
            stream
                .set_read_timeout(Some(Duration::from_secs(5)))
                .unwrap();
            let mut buf = Vec::new();
            let mut chunk = [0u8; 4096];
            let (mut header_end, mut content_length) = (None, 0usize);
            loop {
                let n = stream.read(&mut chunk).expect("read");
                if n == 0 {
                    break;
                }
                buf.extend_from_slice(&chunk[..n]);
                if header_end.is_none() {
                    if let Some(pos) = buf.windows(4).position(|w| w == b"\r\n\r\n") {
                        header_end = Some(pos + 4);
                        let head = String::from_utf8_lossy(&buf[..pos]);
                        for line in head.lines() {
                            if let Some(value) = line
                                .to_ascii_lowercase()
                                .strip_prefix("content-length:")
                                .map(str::trim)
                                .and_then(|v| v.parse().ok())
                            {
                                content_length = value;
                            }
                        }
                    }
                }
                if let Some(end) = header_end {
                    if buf.len() >= end + content_length {
                        break;
                    }
                }
            }
            let first_line = String::from_utf8_lossy(&buf)
                .lines()
                .next()
                .unwrap_or_default()
                .to_string();
            tx.send(first_line).ok();
            let reason = if status == 200 { "OK" } else { "Error" };
            let response = format!(
                "HTTP/1.1 {status} {reason}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
            stream.write_all(response.as_bytes()).expect("write");
        }
    });
    (endpoint, rx, handle)
}

#[test]
fn live_request_maps_and_caches_the_response() {
    let (endpoint, requests, server) = one_shot_server(vec![(200, GOLDEN.to_string())]);
    let cache = tempfile::tempdir().unwrap();
    let client = ParserClient::new().with_cache_dir(cache.path());
    let mut request = ParseRequest::new("The cat chased the dog .", &endpoint);
    request.timeout = Duration::from_secs(5);

    let response = client.parse_remote(&request).unwrap();
    assert_eq!(response.sentences.len(), 1);
    assert_eq!(response.sentences[0].tokens.len(), 6);
    assert_eq!(response.sentences[0].tokens[1].form, "cat");

    // The request line carries the urlencoded properties object.
    let first_line = requests.recv_timeout(Duration::from_secs(5)).unwrap();
    assert!(first_line.starts_with("POST /?properties="), "{first_line}");
    assert!(first_line.contains("annotators"), "{first_line}");
    assert!(first_line.contains("outputFormat"), "{first_line}");

    // The raw response landed in the cache under the content-hash key.
    let key = ParserClient::cache_key(&request.text, &request.annotators);
    let cached = std::fs::read_to_string(cache.path().join(format!("{key}.json"))).unwrap();
    assert_eq!(cached, GOLDEN);

    // A second call replays from cache; the server accepts no further
    // connections once its response list is exhausted.
    server.join().unwrap();
    let replay = client.parse_remote(&request).unwrap();
    assert_eq!(replay, response);
}

#[test]
fn non_2xx_status_is_a_server_error() {
    let (endpoint, _requests, server) =
        one_shot_server(vec![(500, "{\"err\": true}".to_string())]);
    let client = ParserClient::new();
    let mut request = ParseRequest::new("Some text.", &endpoint);
    request.timeout = Duration::from_secs(5);
    match client.parse_remote(&request) {
        Err(Error::Server(status)) => assert_eq!(status, 500),
        other => panic!("unexpected result {other:?}"),
    }
    server.join().unwrap();
}

#[test]
fn malformed_payload_is_a_protocol_error() {
    let (endpoint, _requests, server) =
        one_shot_server(vec![(200, "{\"notSentences\": []}".to_string())]);
    let client = ParserClient::new();
    let mut request = ParseRequest::new("Some text.", &endpoint);
    request.timeout = Duration::from_secs(5);
    match client.parse_remote(&request) {
        Err(Error::Protocol(key)) => assert_eq!(key, "sentences"),
        other => panic!("unexpected result {other:?}"),
    }
    server.join().unwrap();
}
