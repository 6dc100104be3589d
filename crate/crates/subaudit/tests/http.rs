mod common;

use axum::http::{HeaderValue, StatusCode};
use serde_json::{json, Value};

use common::*;
use subaudit::api::router;
use subaudit::core::priority::PriorityResult;

fn app() -> axum::Router {
    router(store(), None)
}

#[tokio::test]
async fn health_and_match_list() {
    let r = send(app(), get("/health")).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({"status": "ok"}));
    assert_valid("Health", &r.json());

    let r = send(app(), get("/matches")).await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_valid("MatchList", &v);
    assert_eq!(v[0]["match_id"], MATCH);
    assert_eq!(v[0]["substitutions"], 4);
    assert_eq!(v[0]["critical_threshold"], 90.0);
    assert_eq!(v[0]["slices"].as_array().unwrap().len(), 18);
}

#[tokio::test]
async fn timeline_is_ranked_per_slice() {
    let r = send(app(), get(&format!("/matches/{MATCH}/timeline"))).await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_valid("Timeline", &v);
    for s in v["slices"].as_array().unwrap() {
        let entries = s["entries"].as_array().unwrap();
        assert!(!entries.is_empty());
        for (i, pair) in entries.windows(2).enumerate() {
            assert_eq!(pair[0]["rank"], i + 1);
            assert!(pair[0]["p_final"].as_f64() >= pair[1]["p_final"].as_f64());
        }
        for e in entries {
            let critical = e["p_final"].as_f64().unwrap() > 90.0;
            assert_eq!(e["critical"], critical);
        }
    }
}

#[tokio::test]
async fn player_view_carries_traces_and_latency() {
    let r = send(app(), get(&format!("/matches/{MATCH}/players/110"))).await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_valid("PlayerView", &v);
    assert_eq!(v["position"], "Forward");
    assert_eq!(v["latency"]["substitution_minute"], 58);
    assert!(v["post_entry"].is_null());
    let results = v["results"].as_array().unwrap();
    // on the pitch until 58', so slices 5..=60
    assert_eq!(results.len(), 12);
    assert!(results.iter().all(|r| r["trace"]["rules"].as_array().unwrap().len() == 18));

    let sub = send(app(), get(&format!("/matches/{MATCH}/players/112"))).await.json();
    assert_eq!(sub["post_entry"]["entry_minute"], 58);
}

#[tokio::test]
async fn whatif_without_overrides_reproduces_stored_result() {
    let stored = store();
    let m = stored.get(subaudit::core::events::MatchId(MATCH)).unwrap();
    for slice in [5u32, 35, 60, 90] {
        for want in &m.audit.slices.iter().find(|s| s.slice == slice).unwrap().results {
            let body = json!({"slice": slice, "player": want.player_id.0, "overrides": {}}).to_string();
            let r = send(app(), post_json(&format!("/matches/{MATCH}/whatif"), body)).await;
            assert_eq!(r.status, StatusCode::OK);
            assert_valid("PriorityResult", &r.json());
            let got: PriorityResult = serde_json::from_slice(&r.body).unwrap();
            assert_eq!(&got, want);
        }
    }
}

#[tokio::test]
async fn whatif_override_moves_priority() {
    let uri = format!("/matches/{MATCH}/whatif");
    let base: Value = send(app(), post_json(&uri, json!({"slice": 30, "player": 111}).to_string())).await.json();
    let low: Value =
        send(app(), post_json(&uri, json!({"slice": 30, "player": 111, "overrides": {"p_cum": 0.05}}).to_string()))
            .await
            .json();
    assert!(low["baseline"].as_f64().unwrap() > base["baseline"].as_f64().unwrap());
    assert_eq!(low["overridden"], json!(["p_cum"]));
    assert_eq!(low["inputs"]["p_cum"], 0.05);
}

#[tokio::test]
async fn whatif_errors() {
    let uri = format!("/matches/{MATCH}/whatif");
    let r = send(app(), post_json(&uri, json!({"slice": 30, "player": 111, "overrides": {"p_cum": 1.2}}).to_string()))
        .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_valid("Error", &r.json());
    assert_eq!(r.json()["field"], "p_cum");

    let r =
        send(app(), post_json(&uri, json!({"slice": 30, "player": 111, "overrides": {"shoe_size": 9}}).to_string()))
            .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);

    let r = send(app(), post_json(&uri, "{not json")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_valid("Error", &r.json());
    let r = send(app(), post_json(&uri, json!({"player": 111}).to_string())).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);

    let r = send(app(), post_json(&uri, json!({"slice": 30, "player": 101}).to_string())).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(r.json()["field"], "player");

    for (body, uri) in [
        (json!({"slice": 95, "player": 111}), uri.clone()),
        (json!({"slice": 65, "player": 110}), uri.clone()),
        (json!({"slice": 30, "player": 111}), "/matches/1/whatif".to_string()),
    ] {
        let r = send(app(), post_json(&uri, body.to_string())).await;
        assert_eq!(r.status, StatusCode::NOT_FOUND, "{body}");
        assert_valid("Error", &r.json());
    }
}

#[tokio::test]
async fn unknown_ids_are_404() {
    for uri in
        ["/matches/1/timeline", "/matches/abc/timeline", "/matches/2057978/players/999", "/matches/2057978/players/x"]
    {
        let r = send(app(), get(uri)).await;
        assert_eq!(r.status, StatusCode::NOT_FOUND, "{uri}");
        assert_valid("Error", &r.json());
    }
    assert_eq!(send(app(), get("/nope")).await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn rules_listing() {
    let v = send(app(), get("/rules")).await.json();
    assert_valid("RuleList", &v);
    let rules = v.as_array().unwrap();
    assert_eq!(rules.len(), 18);
    assert!(
        rules
            .iter()
            .all(|r| r["text"].as_str().unwrap().starts_with(&format!("RULE {}: IF ", r["id"].as_str().unwrap()))),
        "{rules:?}"
    );
}

#[tokio::test]
async fn reads_are_unchanged_by_whatif() {
    let paths = [format!("/matches/{MATCH}/timeline"), format!("/matches/{MATCH}/players/111"), "/matches".to_string()];
    let mut before = Vec::new();
    for p in &paths {
        before.push(send(app(), get(p)).await.body);
    }
    let body = json!({"slice": 30, "player": 111, "overrides": {"p_cum": 0.0, "card_y": 1}}).to_string();
    assert_eq!(send(app(), post_json(&format!("/matches/{MATCH}/whatif"), body)).await.status, StatusCode::OK);
    for (p, b) in paths.iter().zip(before) {
        assert_eq!(send(app(), get(p)).await.body, b, "{p}");
    }
}

#[tokio::test]
async fn cors_any_origin_by_default() {
    let r = send(app(), get("/health")).await;
    assert_eq!(r.headers["access-control-allow-origin"], "*");

    let pre = axum::http::Request::options(format!("/matches/{MATCH}/whatif"))
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .header("access-control-request-headers", "content-type")
        .body(axum::body::Body::empty())
        .unwrap();
    let r = send(app(), pre).await;
    assert!(r.status.is_success());
    let methods = r.headers["access-control-allow-methods"].to_str().unwrap();
    assert!(methods.contains("POST") && methods.contains("GET"));
    assert!(r.headers["access-control-allow-headers"].to_str().unwrap().contains("content-type"));
}

#[tokio::test]
async fn cors_restricted_origin() {
    let app = router(store(), Some(HeaderValue::from_static("http://dash.example")));
    let ok = axum::http::Request::get("/health")
        .header("origin", "http://dash.example")
        .body(axum::body::Body::empty())
        .unwrap();
    let r = send(app.clone(), ok).await;
    assert_eq!(r.headers["access-control-allow-origin"], "http://dash.example");
    // other origins see the fixed allowed origin, which browsers reject
    let r = send(app, get("/health")).await;
    assert_eq!(r.headers["access-control-allow-origin"], "http://dash.example");
}

#[test]
fn json_floats_round_trip() {
    let stored = store();
    let m = stored.get(subaudit::core::events::MatchId(MATCH)).unwrap();
    let text = serde_json::to_string(&m.audit).unwrap();
    let back: subaudit::core::priority::MatchAudit = serde_json::from_str(&text).unwrap();
    for (a, b) in m.audit.results().zip(back.results()) {
        for (x, y) in [(a.p_cum, b.p_cum), (a.baseline, b.baseline), (a.modifier, b.modifier), (a.p_final, b.p_final)] {
            assert!((x - y).abs() <= 1e-9);
        }
    }
    assert_eq!(back, m.audit);
}

#[test]
fn golden_audit_matches_schema() {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/golden/audit_2057978.json")).unwrap();
    assert_valid("MatchAudit", &serde_json::from_str(&text).unwrap());
}

#[test]
fn schema_rejects_bad_documents() {
    let v = validator("PriorityResult");
    let stored = store();
    let m = stored.get(subaudit::core::events::MatchId(MATCH)).unwrap();
    let mut doc = serde_json::to_value(m.audit.results().next().unwrap()).unwrap();
    assert!(v.is_valid(&doc));
    doc["p_final"] = json!(101.0);
    assert!(!v.is_valid(&doc));
    doc["p_final"] = json!(50.0);
    doc.as_object_mut().unwrap().remove("trace");
    assert!(!v.is_valid(&doc));
}
