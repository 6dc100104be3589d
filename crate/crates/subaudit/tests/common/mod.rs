#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use subaudit::cli::fixture;
use subaudit::store::AuditStore;
use subaudit::{compute, RunConfig};

pub const MATCH: u64 = fixture::MATCH_ID;

pub fn store() -> Arc<AuditStore> {
    static STORE: OnceLock<Arc<AuditStore>> = OnceLock::new();
    STORE
        .get_or_init(|| Arc::new(AuditStore::new(compute(&fixture::dataset(), &RunConfig::default()).unwrap())))
        .clone()
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: axum::http::HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

pub async fn send(app: axum::Router, req: Request<Body>) -> Reply {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, body }
}

pub fn get(uri: &str) -> Request<Body> {
    Request::get(uri).header("origin", "http://localhost:5173").body(Body::empty()).unwrap()
}

pub fn post_json(uri: &str, body: impl Into<String>) -> Request<Body> {
    Request::post(uri)
        .header("content-type", "application/json")
        .header("origin", "http://localhost:5173")
        .body(Body::from(body.into()))
        .unwrap()
}

/// Validator for one definition of the committed schema.
pub fn validator(def: &str) -> jsonschema::Validator {
    static SCHEMA: OnceLock<Value> = OnceLock::new();
    let schema = SCHEMA.get_or_init(|| {
        let text = include_str!("../../schemas/api.schema.json");
        serde_json::from_str(text).unwrap()
    });
    let mut root = schema.clone();
    assert!(root["$defs"].get(def).is_some(), "no definition {def}");
    root["$ref"] = Value::String(format!("#/$defs/{def}"));
    jsonschema::validator_for(&root).unwrap()
}

pub fn assert_valid(def: &str, v: &Value) {
    let val = validator(def);
    let errors: Vec<String> = val.iter_errors(v).take(5).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{def}: {errors:?}");
}
