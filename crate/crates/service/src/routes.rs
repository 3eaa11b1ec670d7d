use std::collections::HashMap;

use axum::body::{to_bytes, Body, Bytes};
use axum::extract::{Path, Query, Request, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use polycut_core::combinatorics::{hanoi, knight_tour, queens, queens_domination};
use polycut_core::presets::{preset, PRESET_NAMES};
use polycut_core::probability::{birthday, birthday_threshold, BirthdayFormula, Strategy};
use polycut_core::{Cell, CutModel, CutSegment, Polyomino};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::session::{DissectionSession, MontySession, StrategyStats};
use crate::{now_millis, AppState};

const MAX_BODY: usize = 1 << 20;

pub fn router(state: AppState) -> Router {
    let compute = Router::new()
        .route("/api/birthday", get(birthday_endpoint))
        .route("/api/hanoi", get(hanoi_endpoint))
        .route("/api/queens", get(queens_endpoint))
        .route("/api/knight", get(knight_endpoint))
        .route("/api/domination", get(domination_endpoint))
        .route("/api/catalog", get(catalog))
        .layer(middleware::map_response(cacheable));
    Router::new()
        .route("/api/dissection", post(create_dissection))
        .route("/api/dissection/{id}", get(get_dissection))
        .route("/api/dissection/{id}/cut", post(post_cut))
        .route("/api/dissection/{id}/hint", get(get_hint))
        .route("/api/monty", post(create_monty))
        .route("/api/monty/stats", get(monty_stats))
        .route("/api/monty/{id}", get(get_monty))
        .route("/api/monty/{id}/pick", post(monty_pick))
        .route("/api/monty/{id}/decide", post(monty_decide))
        .merge(compute)
        .layer(middleware::from_fn_with_state(state.clone(), idempotency))
        .with_state(state)
}

async fn cacheable(mut response: Response) -> Response {
    if response.status().is_success() {
        response.headers_mut().insert(header::CACHE_CONTROL, HeaderValue::from_static("public, max-age=3600"));
    }
    response
}

/// Replays the recorded response for a repeated `Idempotency-Key` instead of running the
/// request again. Reusing a key for a different request is rejected.
async fn idempotency(State(state): State<AppState>, req: Request, next: Next) -> Response {
    let key = req
        .headers()
        .get("idempotency-key")
        .and_then(|v| v.to_str().ok())
        .map(str::to_owned);
    let Some(key) = key.filter(|_| req.method() == Method::POST) else {
        return next.run(req).await;
    };
    let (parts, body) = req.into_parts();
    let Ok(bytes) = to_bytes(body, MAX_BODY).await else {
        return ApiError::bad_request("request body too large").into_response();
    };
    let fingerprint = format!("{} {}\n{}", parts.method, parts.uri.path(), String::from_utf8_lossy(&bytes));
    let slot = state.store().idempotency_slot(&key);
    let mut recorded = slot.lock().await;
    if let Some(cached) = recorded.as_ref() {
        if cached.fingerprint != fingerprint {
            return ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "idempotency_key_reused",
                "this Idempotency-Key was already used for a different request",
            )
            .into_response();
        }
        let status = StatusCode::from_u16(cached.status).unwrap_or(StatusCode::OK);
        let mut response = (status, cached.body.clone()).into_response();
        let headers = response.headers_mut();
        headers.insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
        headers.insert("idempotent-replayed", HeaderValue::from_static("true"));
        return response;
    }
    let response = next.run(Request::from_parts(parts, Body::from(bytes))).await;
    let (parts, body) = response.into_parts();
    let bytes = to_bytes(body, usize::MAX).await.unwrap_or_default();
    if !parts.status.is_server_error() {
        *recorded = Some(crate::store::CachedResponse {
            fingerprint,
            status: parts.status.as_u16(),
            body: String::from_utf8_lossy(&bytes).into_owned(),
        });
    }
    Response::from_parts(parts, Body::from(bytes))
}

fn parse_body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

#[derive(Deserialize)]
struct CreateDissection {
    shape: Option<String>,
    cells: Option<Vec<Cell>>,
    ascii: Option<String>,
    model: Option<String>,
}

fn shape_from(body: &CreateDissection) -> Result<Polyomino, ApiError> {
    match (&body.shape, &body.cells, &body.ascii) {
        (Some(name), None, None) => {
            preset(name).ok_or_else(|| ApiError::bad_request(format!("unknown preset shape {name:?}")))
        }
        (None, Some(cells), None) => Ok(Polyomino::from_cells(cells.iter().copied())?),
        (None, None, Some(ascii)) => Ok(Polyomino::parse_ascii(ascii)?),
        _ => Err(ApiError::bad_request("give exactly one of \"shape\", \"cells\" or \"ascii\"")),
    }
}

async fn create_dissection(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let body: CreateDissection = parse_body(&body)?;
    let model = match &body.model {
        Some(m) => m.parse::<CutModel>().map_err(ApiError::bad_request)?,
        None => CutModel::SingleSplit,
    };
    let shape = shape_from(&body)?;
    let solver = &state.inner().solver;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = DissectionSession::new(id, shape, model, solver, now_millis())?;
    let view = session.view(solver)?;
    state.store().insert_dissection(session);
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_dissection(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store().dissection(&id).ok_or_else(|| ApiError::not_found("dissection", &id))?;
    let view = session.lock().view(&state.inner().solver)?;
    Ok(Json(view).into_response())
}

async fn post_cut(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let session = state.store().dissection(&id).ok_or_else(|| ApiError::not_found("dissection", &id))?;
    let cut: CutSegment = parse_body(&body)?;
    let mut session = session.lock();
    session.apply(&cut)?;
    Ok(Json(session.view(&state.inner().solver)?).into_response())
}

async fn get_hint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store().dissection(&id).ok_or_else(|| ApiError::not_found("dissection", &id))?;
    let hint = state.inner().solver.hint(&session.lock().state)?;
    Ok(Json(json!({ "id": id, "hint": hint })).into_response())
}

#[derive(Deserialize, Default)]
struct CreateMonty {
    seed: Option<u64>,
}

async fn create_monty(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let body: CreateMonty = if body.iter().all(u8::is_ascii_whitespace) { CreateMonty::default() } else { parse_body(&body)? };
    let seed = body.seed.unwrap_or_else(|| state.next_game_seed());
    let session = MontySession::new(uuid::Uuid::new_v4().simple().to_string(), seed, now_millis());
    let view = session.view();
    state.store().insert_monty(session);
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_monty(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store().monty(&id).ok_or_else(|| ApiError::not_found("monty", &id))?;
    let view = session.lock().view();
    Ok(Json(view).into_response())
}

#[derive(Deserialize)]
struct Pick {
    door: u8,
}

async fn monty_pick(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let session = state.store().monty(&id).ok_or_else(|| ApiError::not_found("monty", &id))?;
    let pick: Pick = parse_body(&body)?;
    let mut session = session.lock();
    session.pick(pick.door)?;
    Ok(Json(session.view()).into_response())
}

#[derive(Deserialize)]
struct Decide {
    strategy: String,
}

async fn monty_decide(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let session = state.store().monty(&id).ok_or_else(|| ApiError::not_found("monty", &id))?;
    let decide: Decide = parse_body(&body)?;
    let strategy: Strategy = decide.strategy.parse().map_err(ApiError::bad_request)?;
    let mut session = session.lock();
    session.decide(strategy)?;
    Ok(Json(session.view()).into_response())
}

async fn monty_stats(State(state): State<AppState>) -> Json<Value> {
    let sessions = state.store().monty_sessions();
    Json(json!({
        "SWITCH": StrategyStats::tally(Strategy::Switch, sessions.iter().cloned()),
        "STAY": StrategyStats::tally(Strategy::Stay, sessions.into_iter()),
    }))
}

type Params = Query<HashMap<String, String>>;

fn param<T: std::str::FromStr>(params: &HashMap<String, String>, name: &str) -> Result<Option<T>, ApiError> {
    params
        .get(name)
        .map(|raw| raw.trim().parse().map_err(|_| ApiError::bad_request(format!("cannot parse {name}={raw:?}"))))
        .transpose()
}

fn required<T: std::str::FromStr>(params: &HashMap<String, String>, name: &str) -> Result<T, ApiError> {
    param(params, name)?.ok_or_else(|| ApiError::bad_request(format!("missing query parameter {name}")))
}

async fn birthday_endpoint(Query(params): Params) -> Result<Json<Value>, ApiError> {
    let formula: Option<BirthdayFormula> = match params.get("formula") {
        Some(f) => Some(f.parse().map_err(ApiError::bad_request)?),
        None => None,
    };
    if let Some(target) = param::<f64>(&params, "target")? {
        let formula = formula.unwrap_or(BirthdayFormula::Exact);
        let n = birthday_threshold(target, formula)?;
        return Ok(Json(json!({ "target": target, "formula": formula, "threshold": n })));
    }
    let n: u32 = required(&params, "n")?;
    Ok(Json(match formula {
        Some(f) => json!({ "n": n, "formula": f, "probability": birthday(n, f)? }),
        None => json!({
            "n": n,
            "exact": birthday(n, BirthdayFormula::Exact)?,
            "approx": birthday(n, BirthdayFormula::Approx)?,
        }),
    }))
}

async fn hanoi_endpoint(State(state): State<AppState>, Query(params): Params) -> Result<Json<Value>, ApiError> {
    let n: u32 = required(&params, "n")?;
    let solution = hanoi(n, &state.inner().lab_caps)?;
    let moves: Vec<String> = solution.moves.iter().map(ToString::to_string).collect();
    Ok(Json(json!({ "n": n, "count": solution.count, "moves": moves })))
}

async fn queens_endpoint(State(state): State<AppState>, Query(params): Params) -> Result<Json<Value>, ApiError> {
    let n: u32 = required(&params, "n")?;
    let result = queens(n, &state.inner().lab_caps)?;
    let solutions: Vec<&Vec<(u32, u32)>> = result.solutions.iter().map(|s| &s.squares).collect();
    Ok(Json(json!({ "n": n, "count": result.count, "solutions": solutions })))
}

fn parse_start(raw: Option<&String>) -> Result<(i64, i64), ApiError> {
    let Some(raw) = raw else { return Ok((0, 0)) };
    let bad = || ApiError::bad_request(format!("start must look like \"row,col\", got {raw:?}"));
    let (r, c) = raw.split_once(',').ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

async fn knight_endpoint(State(state): State<AppState>, Query(params): Params) -> Result<Json<Value>, ApiError> {
    let rows: u32 = required(&params, "rows")?;
    let cols: u32 = required(&params, "cols")?;
    let start = parse_start(params.get("start"))?;
    let closed = param::<bool>(&params, "closed")?.unwrap_or(false);
    let tour = knight_tour(rows, cols, start, closed, &state.inner().lab_caps)?;
    Ok(Json(json!({
        "rows": rows,
        "cols": cols,
        "start": [start.0, start.1],
        "closed": closed,
        "found": tour.is_some(),
        "path": tour.map(|t| t.path),
    })))
}

async fn domination_endpoint(State(state): State<AppState>, Query(params): Params) -> Result<Json<Value>, ApiError> {
    let n: u32 = required(&params, "n")?;
    let d = queens_domination(n, &state.inner().lab_caps)?;
    Ok(Json(json!({ "n": n, "k": d.k, "placement": d.placement.squares })))
}

async fn catalog(State(state): State<AppState>) -> Json<Value> {
    let solver = &state.inner().solver;
    let entries: Vec<Value> = PRESET_NAMES
        .iter()
        .map(|&name| {
            let p = preset(name).expect("preset names resolve");
            let optimal: HashMap<String, Option<u32>> = CutModel::ALL
                .iter()
                .map(|&m| (m.to_string(), solver.min_cuts(&p, m).ok().map(|r| r.count)))
                .collect();
            json!({
                "name": name,
                "n": p.len(),
                "cells": p.cells(),
                "ascii": p.to_ascii(),
                "optimal": optimal,
            })
        })
        .collect();
    Json(Value::Array(entries))
}
