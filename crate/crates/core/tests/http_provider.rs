use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use fontsense_core::augment::{HttpProvider, TranslationProvider};

struct Captured {
    head: String,
    body: serde_json::Value,
}

/// Serves one canned response per entry in `replies`, in order, and
/// reports each request it saw.
fn serve(replies: Vec<(u16, String)>) -> (String, mpsc::Receiver<Captured>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/translate", listener.local_addr().unwrap());
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for (status, body) in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut head = String::new();
            let mut len = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                head.push_str(&line);
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            tx.send(Captured {
                head,
                body: serde_json::from_slice(&buf).unwrap_or(serde_json::Value::Null),
            })
            .unwrap();
            let mut stream = stream;
            write!(
                stream,
                "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
    });
    (url, rx)
}

fn provider(url: &str, key: Option<&str>) -> HttpProvider {
    HttpProvider::new(url, key.map(String::from), Duration::from_secs(5)).with_backoff(Duration::from_millis(1))
}

#[test]
fn sends_documented_request_and_parses_reply() {
    let (url, rx) = serve(vec![(200, r#"{"translatedText": "Hallo Welt"}"#.into())]);
    let out = provider(&url, Some("k3y"))
        .translate("hello world", "en", "de")
        .unwrap();
    assert_eq!(out, "Hallo Welt");
    let req = rx.recv().unwrap();
    assert!(req.head.starts_with("POST /translate"));
    assert!(req.head.to_ascii_lowercase().contains("authorization: bearer k3y"));
    assert_eq!(
        req.body,
        serde_json::json!({"q": "hello world", "source": "en", "target": "de", "format": "text", "api_key": "k3y"})
    );
}

#[test]
fn omits_key_when_unset() {
    let (url, rx) = serve(vec![(200, r#"{"translatedText": "x"}"#.into())]);
    provider(&url, None).translate("y", "de", "en").unwrap();
    let req = rx.recv().unwrap();
    assert!(req.body.get("api_key").is_none());
    assert!(!req.head.to_ascii_lowercase().contains("authorization"));
}

#[test]
fn retries_transient_failures() {
    let (url, rx) = serve(vec![
        (503, "{}".into()),
        (500, "{}".into()),
        (200, r#"{"translatedText": "ok"}"#.into()),
    ]);
    assert_eq!(provider(&url, None).translate("a", "en", "fr").unwrap(), "ok");
    assert_eq!(rx.iter().take(3).count(), 3);
}

#[test]
fn gives_up_after_two_retries() {
    let (url, rx) = serve(vec![
        (503, "{}".into()),
        (503, "{}".into()),
        (200, r#"{"bogus": 1}"#.into()),
    ]);
    let err = provider(&url, None).translate("a", "en", "fr").unwrap_err();
    assert!(err.to_string().contains("http"), "{err}");
    assert_eq!(rx.iter().take(3).count(), 3);
}
