//! HTTP endpoint semantics, first against the router in-process, then
//! against a real spawned server.

use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use tower::util::ServiceExt;

use rendermatch_cli::{build_router, AppState, Engine, EngineConfig};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn demo_config() -> EngineConfig {
    EngineConfig {
        ontology_path: fixture("render_farm.rfo"),
        registry_path: Some(fixture("services.profiles")),
        rho: 0.5,
        threshold: 0.5,
    }
}

fn ready_state() -> AppState {
    AppState::ready(Engine::load(&demo_config()).unwrap())
}

async fn body_json(response: axum::response::Response) -> serde_json::Value {
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap()
}

async fn body_text(response: axum::response::Response) -> String {
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[tokio::test]
async fn data_endpoints_answer_503_until_the_engine_loads() {
    let state = AppState::empty();

    let response = build_router(state.clone())
        .oneshot(Request::get("/healthz").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    assert_eq!(body_json(response).await["ready"], false);

    for request in [
        Request::get("/services").body(Body::empty()).unwrap(),
        Request::post("/search").body(Body::from("query q\nend\n")).unwrap(),
        Request::get("/sim?x=a&y=b").body(Body::empty()).unwrap(),
    ] {
        let response = build_router(state.clone()).oneshot(request).await.unwrap();
        assert_eq!(response.status(), StatusCode::SERVICE_UNAVAILABLE);
    }

    state.install(Engine::load(&demo_config()).unwrap()).await;
    let response = build_router(state.clone())
        .oneshot(Request::get("/healthz").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(body_json(response).await["ready"], true);
    let response = build_router(state)
        .oneshot(Request::get("/services").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
}

#[tokio::test]
async fn sim_endpoint_scores_and_rejects_terms() {
    let state = ready_state();

    let response = build_router(state.clone())
        .oneshot(Request::get("/sim?x=3dsmax&y=pencil2d").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    let report = body_json(response).await;
    assert_eq!(report["kind"], "concept_sim");
    assert_eq!(report["value"], 0.5);

    let response = build_router(state.clone())
        .oneshot(Request::get("/sim?x=maya@7&y=maya@12").body(Body::empty()).unwrap())
        .await
        .unwrap();
    let report = body_json(response).await;
    assert_eq!(report["kind"], "equivalent_sim");
    assert!((report["value"].as_f64().unwrap() - 0.832768).abs() < 1e-9);

    let response = build_router(state)
        .oneshot(Request::get("/sim?x=maya&y=unobtainium").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::NOT_FOUND);
    assert!(body_json(response).await["error"]
        .as_str()
        .unwrap()
        .contains("unobtainium"));
}

#[tokio::test]
async fn services_endpoint_creates_updates_and_rejects() {
    let config = EngineConfig {
        registry_path: None,
        ..demo_config()
    };
    let state = AppState::ready(Engine::load(&config).unwrap());

    let doc = "service fresh\nattr os concept linux\nend\n";
    let response = build_router(state.clone())
        .oneshot(Request::post("/services").body(Body::from(doc)).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::CREATED);
    let body = body_json(response).await;
    assert_eq!(body["registered"][0]["service_id"], "fresh");
    assert_eq!(body["registered"][0]["created"], true);

    let response = build_router(state.clone())
        .oneshot(Request::post("/services").body(Body::from(doc)).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    let body = body_json(response).await;
    assert_eq!(body["registered"][0]["created"], false);

    let listing = build_router(state.clone())
        .oneshot(Request::get("/services").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert!(body_text(listing).await.contains("service fresh"));

    let bad = "service broken\nattr os concept amiga\nend\n";
    let response = build_router(state)
        .oneshot(Request::post("/services").body(Body::from(bad)).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::BAD_REQUEST);
    let error = body_json(response).await["error"].as_str().unwrap().to_string();
    assert!(error.contains("line 2") && error.contains("amiga"), "{error}");
}

#[tokio::test]
async fn search_endpoint_ranks_with_k_and_strict() {
    let state = ready_state();
    let query = std::fs::read_to_string(fixture("studio.query")).unwrap();

    let response = build_router(state.clone())
        .oneshot(Request::post("/search").body(Body::from(query.clone())).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    let results = body_json(response).await;
    let rows = results.as_array().unwrap().clone();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["service_id"], "apex_render");
    assert_eq!(rows[0]["rank"], 1);

    let response = build_router(state.clone())
        .oneshot(Request::post("/search?k=2").body(Body::from(query.clone())).unwrap())
        .await
        .unwrap();
    assert_eq!(body_json(response).await.as_array().unwrap().len(), 2);

    let response = build_router(state.clone())
        .oneshot(Request::post("/search?strict=true").body(Body::from(query)).unwrap())
        .await
        .unwrap();
    let ids: Vec<String> = body_json(response)
        .await
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["service_id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["apex_render", "borealis", "cirrus"]);

    let response = build_router(state)
        .oneshot(Request::post("/search").body(Body::from("query q\nend\n")).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_routes_are_404() {
    let response = build_router(ready_state())
        .oneshot(Request::get("/nope").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::NOT_FOUND);
}

/// Full process check: spawn `serve`, wait for readiness, drive it over a
/// real socket.
#[test]
fn spawned_server_serves_the_same_world() {
    use std::io::BufRead;
    use std::process::{Command, Stdio};

    let mut child = Command::new(env!("CARGO_BIN_EXE_rendermatch"))
        .arg("--ontology")
        .arg(fixture("render_farm.rfo"))
        .arg("--registry")
        .arg(fixture("services.profiles"))
        .args(["serve", "--addr", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();

    let mut first_line = String::new();
    std::io::BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut first_line)
        .unwrap();
    let base = first_line.trim().strip_prefix("listening on ").unwrap().to_string();

    let result = std::panic::catch_unwind(|| {
        let client = reqwest::blocking::Client::new();
        let deadline = std::time::Instant::now() + std::time::Duration::from_secs(10);
        loop {
            let ready = client
                .get(format!("{base}/healthz"))
                .send()
                .ok()
                .and_then(|r| r.json::<serde_json::Value>().ok())
                .is_some_and(|v| v["ready"] == true);
            if ready {
                break;
            }
            assert!(std::time::Instant::now() < deadline, "server never became ready");
            std::thread::sleep(std::time::Duration::from_millis(50));
        }

        let query = std::fs::read_to_string(fixture("studio.query")).unwrap();
        let over_http: serde_json::Value = client
            .post(format!("{base}/search"))
            .body(query.clone())
            .send()
            .unwrap()
            .json()
            .unwrap();

        let engine = Engine::load(&demo_config()).unwrap();
        let direct = engine.rank_text(&query, None, false, &[], &[]).unwrap();
        let direct_json = serde_json::to_value(&direct).unwrap();
        assert_eq!(over_http, direct_json);

        let sim: serde_json::Value = client
            .get(format!("{base}/sim?x=C4D&y=blender"))
            .send()
            .unwrap()
            .json()
            .unwrap();
        assert_eq!(sim["kind"], "concept_sim");
        assert_eq!(sim["value"], 0.75);
    });

    let _ = child.kill();
    let _ = child.wait();
    if let Err(panic) = result {
        std::panic::resume_unwind(panic);
    }
}
