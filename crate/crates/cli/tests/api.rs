use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::time::Duration;

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};
use ship_cli::server::serve;
use ship_cli::{router, Session};
use ship_core::fixtures::{line3, random_tree, star, t4, Shape};
use ship_core::metrics::fit_dc;
use ship_core::Exec;
use tower::ServiceExt;

fn t4_app() -> Router {
    router(Arc::new(Session::new(t4(), None).unwrap()))
}

async fn raw(app: &Router, uri: &str) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(Request::get(uri).body(Body::empty()).unwrap()).await.unwrap();
    let status = resp.status();
    assert_eq!(resp.headers()["content-type"], "application/json");
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

async fn get(app: &Router, uri: &str) -> Value {
    let (status, body) = raw(app, uri).await;
    assert_eq!(status, StatusCode::OK, "{uri}: {}", String::from_utf8_lossy(&body));
    serde_json::from_slice(&body).unwrap()
}

async fn error(app: &Router, uri: &str, want: StatusCode) -> Value {
    let (status, body) = raw(app, uri).await;
    assert_eq!(status, want, "{uri}: {}", String::from_utf8_lossy(&body));
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert!(v["error"].is_string() && v["detail"].is_string(), "{v}");
    v
}

#[tokio::test]
async fn curve_on_t4() {
    let app = t4_app();
    let v = get(&app, "/curve?objective=z&z=1").await;
    assert_eq!(v["schema"], "ship-curve/1");
    assert_eq!(v["losses"], json!([12.0, 5.0, 2.0, 0.0]));
    assert_eq!(get(&app, "/curve?objective=center").await["losses"], json!([5.0, 3.0, 2.0, 0.0]));
    assert_eq!(get(&app, "/curve?z=2").await["objective"], "z=2");
}

#[tokio::test]
async fn partitions_on_t4() {
    let app = t4_app();
    let one = get(&app, "/partition?method=k&k=1&objective=z&z=2").await;
    assert_eq!(one["schema"], "ship-partition/1");
    assert_eq!(one["labels"], json!([0, 0, 0, 0]));
    let two = get(&app, "/partition?method=k&k=2&objective=median").await;
    assert_eq!(two["labels"], json!([0, 0, 1, 1]));
    assert_eq!(two["clusters"][1]["center"], 2);

    let eps = get(&app, "/partition?method=threshold&eps=4").await;
    assert_eq!(eps["objective"], "center");
    assert_eq!(eps["labels"], json!([0, 0, 1, 1]));
    let noise = get(&app, "/partition?method=threshold&eps=0").await;
    assert_eq!(noise["labels"], json!([null, null, null, null]));
    assert_eq!(noise["noise"], 4);

    let stable = get(&app, "/partition?method=stability&min_cluster_size=2").await;
    assert_eq!(stable["labels"], json!([0, 0, 1, 1]));

    let elbow = get(&app, "/partition?method=elbow").await;
    assert_eq!(elbow["chosen_k"], 2);
    let moe = get(&app, "/partition?method=moe&zmax=3").await;
    assert_eq!(moe["elbows"].as_array().unwrap().len(), 3);
    assert_eq!(moe["k"], moe["chosen_k"]);
}

#[tokio::test]
async fn elbows_on_t4() {
    let app = t4_app();
    let v = get(&app, "/elbows?zmax=5").await;
    assert_eq!(v["schema"], "ship-elbows/1");
    let elbows = v["elbows"].as_array().unwrap();
    assert_eq!(elbows.len(), 5);
    let mut ks: Vec<u64> = elbows.iter().map(|e| e["k"].as_u64().unwrap()).collect();
    ks.sort_unstable();
    assert_eq!(v["median_k"], ks[2]);
    assert_eq!(get(&app, "/elbows").await, v);
}

#[tokio::test]
async fn meta_tree_and_hierarchy() {
    let app = t4_app();
    let meta = get(&app, "/meta").await;
    assert_eq!(meta["schema"], "ship-meta/1");
    assert_eq!(meta["n_points"], 4);
    assert_eq!(meta["has_points"], false);
    let tree = get(&app, "/tree").await;
    assert_eq!(tree["schema"], "ship-tree/1");
    assert_eq!(tree["n_points"], 4);
    let h = get(&app, "/hierarchy?objective=center").await;
    assert_eq!(h["schema"], "ship-hier/1");
    assert_eq!(h["objective"], "center");
    let parsed: ship_core::io::HierarchyFile = serde_json::from_value(h).unwrap();
    assert_eq!(parsed.into_hierarchy().unwrap().curve().losses(), &[5.0, 3.0, 2.0, 0.0]);
    error(&app, "/points", StatusCode::NOT_FOUND).await;
}

#[tokio::test]
async fn points_when_loaded() {
    let points = line3();
    let tree = fit_dc(&points, 1, Exec::Sequential).unwrap().tree;
    let app = router(Arc::new(Session::new(tree, Some(points)).unwrap()));
    let v = get(&app, "/points").await;
    assert_eq!(v["schema"], "ship-points/1");
    assert_eq!(v["points"], json!([[0.0], [1.0], [10.0]]));
    assert_eq!(get(&app, "/meta").await["dim"], 1);
}

#[tokio::test]
async fn bad_requests() {
    let app = t4_app();
    let bad = StatusCode::BAD_REQUEST;
    error(&app, "/partition", bad).await;
    error(&app, "/partition?method=k", bad).await;
    error(&app, "/partition?method=k&k=two", bad).await;
    error(&app, "/partition?method=dbscan", bad).await;
    error(&app, "/partition?method=threshold&eps=-1", bad).await;
    error(&app, "/partition?method=k&k=2&kk=3", bad).await;
    error(&app, "/curve?objective=z", bad).await;
    error(&app, "/curve?objective=z&z=9", bad).await;
    error(&app, "/curve?objective=center&z=1", bad).await;
    error(&app, "/elbows?zmax=0", bad).await;
    error(&app, "/elbows?zmax=9", bad).await;
    error(&app, "/meta?x=1", bad).await;
    let v = error(&app, "/partition?method=k&k=5", StatusCode::UNPROCESSABLE_ENTITY).await;
    assert!(v["detail"].as_str().unwrap().contains("out of range"));
    error(&app, "/nowhere", StatusCode::NOT_FOUND).await;
}

#[tokio::test]
async fn elbow_needs_three_points() {
    let tree = star(2, 1.0);
    let app = router(Arc::new(Session::new(tree, None).unwrap()));
    error(&app, "/elbows", StatusCode::UNPROCESSABLE_ENTITY).await;
    error(&app, "/partition?method=elbow", StatusCode::UNPROCESSABLE_ENTITY).await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn responses_are_byte_identical_under_concurrency() {
    let tree = random_tree(&mut StdRng::seed_from_u64(5), 300, Shape::Relaxed);
    let app = router(Arc::new(Session::new(tree, None).unwrap()));
    let uris = [
        "/curve?objective=means",
        "/hierarchy?objective=z&z=3",
        "/partition?method=moe",
        "/partition?method=stability&min_cluster_size=5",
        "/elbows?zmax=5",
    ];
    let mut handles = Vec::new();
    for _ in 0..8 {
        for uri in uris {
            let app = app.clone();
            handles.push(tokio::spawn(async move { (uri, raw(&app, uri).await) }));
        }
    }
    let mut first: std::collections::HashMap<&str, Vec<u8>> = Default::default();
    for h in handles {
        let (uri, (status, body)) = h.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        let seen = first.entry(uri).or_insert_with(|| body.clone());
        assert_eq!(*seen, body, "{uri}");
    }
}

#[tokio::test]
async fn serve_reports_busy_port() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = taken.local_addr().unwrap();
    let session = Arc::new(Session::new(t4(), None).unwrap());
    assert!(serve(session, addr).await.is_err());
}

#[test]
fn live_service_answers_http() {
    let addr = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap();
    let session = Arc::new(Session::new(t4(), None).unwrap());
    std::thread::spawn(move || {
        tokio::runtime::Runtime::new().unwrap().block_on(serve(session, addr)).unwrap();
    });
    let mut response = String::new();
    for _ in 0..100 {
        if let Ok(mut s) = TcpStream::connect(addr) {
            s.set_read_timeout(Some(Duration::from_secs(10))).unwrap();
            write!(s, "GET /curve?objective=z&z=1 HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
            s.read_to_string(&mut response).unwrap();
            break;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    let body = response.split("\r\n\r\n").nth(1).unwrap();
    let v: Value = serde_json::from_str(body).unwrap();
    assert_eq!(v["losses"], json!([12.0, 5.0, 2.0, 0.0]));
}
