use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use wpltilt::api::router;
use wpltilt::session::Store;

struct Client {
    store: Arc<Store>,
}

impl Client {
    fn new() -> Self {
        Client { store: Arc::new(Store::new(None)) }
    }

    async fn call(&self, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
        let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
        let req = match body {
            Some(b) => req.body(Body::from(b.to_string())).unwrap(),
            None => req.body(Body::empty()).unwrap(),
        };
        let resp = router(self.store.clone()).oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        (status, bytes)
    }

    async fn json(&self, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let (s, b) = self.call(method, uri, body).await;
        (s, serde_json::from_slice(&b).unwrap())
    }

    async fn create(&self, weights: &[i64]) -> String {
        let (s, v) = self.json("POST", "/sessions", Some(json!({ "descriptor": { "weights": weights } }))).await;
        assert_eq!(s, StatusCode::CREATED, "{v}");
        v["id"].as_str().unwrap().to_string()
    }
}

#[tokio::test]
async fn create_and_read_state() {
    let c = Client::new();
    let id = c.create(&[2, 3, 7]).await;
    let (s, v) = c.json("GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["type"], "(2,3,7)");
    assert_eq!(v["summands"].as_array().unwrap().len(), 11);
    assert_eq!(v["history"], json!([]));
    let first = &v["summands"][0];
    assert_eq!((first["label"].clone(), first["deg"].clone(), first["rk"].clone()), (json!(1), json!("0"), json!("1")));
    assert_eq!(first["polarity"], "source");
    assert_eq!(v["summands"][10]["polarity"], "sink");
    assert!(v["quiver"]["arrows"].as_array().unwrap().iter().all(|e| e["count"].is_string()));
}

#[tokio::test]
async fn bare_descriptor_is_accepted() {
    let c = Client::new();
    let (s, v) = c.json("POST", "/sessions", Some(json!({ "weights": [2, 2, 2, 3], "lambdas": ["1", "2"] }))).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(v["state"]["type"], "(2,2,2,3)");
}

#[tokio::test]
async fn sink_reflection_on_five_points() {
    let c = Client::new();
    let id = c.create(&[2, 2, 2, 2, 2]).await;
    let (s, v) = c.json("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "vertex": 7 }))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["step"]["polarity"], "sink");
    assert_eq!(v["step"]["new"]["deg"], "3");
    assert_eq!(v["step"]["new"]["rk"], "4");
    let seventh = v["state"]["summands"].as_array().unwrap().iter().find(|x| x["label"] == 7).unwrap();
    assert_eq!(seventh["fraction"], "3/4");
    assert_eq!(seventh["slope"], "3/4");
    let (_, checks) = c.json("GET", &format!("/sessions/{id}/checks"), None).await;
    assert_eq!(checks["central_simples"], "0");
    assert_eq!(checks["canonical"], false);
}

#[tokio::test]
async fn reflect_then_undo_is_byte_identical() {
    let c = Client::new();
    let id = c.create(&[2, 3, 5]).await;
    let (_, before) = c.call("GET", &format!("/sessions/{id}"), None).await;
    for v in [9, 1] {
        let (s, _) = c.call("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "vertex": v }))).await;
        assert_eq!(s, StatusCode::OK);
    }
    let (_, mid) = c.json("GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(mid["history"], json!([9, 1]));
    for expected in [1, 9] {
        let (s, v) = c.json("POST", &format!("/sessions/{id}/undo"), None).await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(v["undone"], expected);
    }
    let (_, after) = c.call("GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(before, after);
    let (_, v) = c.json("POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(v["undone"], Value::Null);
}

#[tokio::test]
async fn fresh_session_checks_report_canonical() {
    let c = Client::new();
    let id = c.create(&[2, 3, 7]).await;
    let (s, v) = c.json("GET", &format!("/sessions/{id}/checks"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["canonical"], true);
    assert_eq!(v["homogeneous"], true);
    assert_eq!(v["identities_hold"], true);
    assert_eq!(v["width"], "42");
    assert_eq!(v["central_simples"], "9");
}

#[tokio::test]
async fn error_statuses() {
    let c = Client::new();
    let (s, v) = c.json("GET", "/sessions/s404", None).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::NOT_FOUND, Some("unknown-session")));
    let id = c.create(&[2, 3]).await;
    let (s, v) = c.json("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "vertex": 99 }))).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::CONFLICT, Some("invalid-vertex")));
    let (s, _) = c.json("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "label": 1 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = c.json("POST", "/sessions", Some(json!({ "descriptor": { "weights": [1] } }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = c.json("POST", "/sessions/s404/undo", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn state_is_a_function_of_the_history() {
    let a = Client::new();
    let b = Client::new();
    let ia = a.create(&[3, 3, 3]).await;
    let ib = b.create(&[3, 3, 3]).await;
    assert_eq!(ia, ib);
    for v in [8, 1, 8, 3] {
        let (s, _) = a.call("POST", &format!("/sessions/{ia}/reflect"), Some(json!({ "vertex": v }))).await;
        assert_eq!(s, StatusCode::OK);
    }
    a.call("POST", &format!("/sessions/{ia}/undo"), None).await;
    for v in [8, 1, 8] {
        b.call("POST", &format!("/sessions/{ib}/reflect"), Some(json!({ "vertex": v }))).await;
    }
    let (_, sa) = a.call("GET", &format!("/sessions/{ia}"), None).await;
    let (_, sb) = b.call("GET", &format!("/sessions/{ib}"), None).await;
    assert_eq!(sa, sb);
}

#[tokio::test]
async fn snapshot_round_trip() {
    let path = std::env::temp_dir().join(format!("wpltilt-snapshot-{}.json", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let c = Client { store: Arc::new(Store::load(path.clone()).unwrap()) };
    let id = c.create(&[2, 2, 2, 2, 2]).await;
    c.call("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "vertex": 7 }))).await;
    let (_, before) = c.call("GET", &format!("/sessions/{id}"), None).await;
    let restored = Client { store: Arc::new(Store::load(path.clone()).unwrap()) };
    let (s, after) = restored.call("GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(before, after);
    let next = restored.create(&[2, 3]).await;
    assert_ne!(next, id);
    std::fs::remove_file(&path).unwrap();
}

#[tokio::test]
async fn reference_sessions_retilt_when_leaving_the_window() {
    let c = Client::new();
    let body = json!({ "descriptor": { "weights": [2, 3] }, "reference": { "arm": [0, 0], "c": 0 } });
    let (s, v) = c.json("POST", "/sessions", Some(body)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    let id = v["id"].as_str().unwrap();
    let (s, v) = c.json("POST", &format!("/sessions/{id}/reflect"), Some(json!({ "vertex": 5 }))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["step"]["retilts"], "1");
    assert_eq!(v["state"]["reference"], json!({ "arm": [0, 0], "c": -1 }));
    assert_eq!((v["step"]["new"]["deg"].clone(), v["step"]["new"]["rk"].clone()), (json!("1"), json!("1")));
}
