//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use polycut_core::combinatorics::{
    covers_board, hanoi, hanoi_move_count, knight_tour, magic_squares, queens, queens_attack, queens_domination,
    validate_hanoi, validate_tour, BoardPlacement, HanoiMove, LabCaps,
};
use polycut_core::presets::preset;
use polycut_core::probability::{
    birthday_approx, birthday_exact, birthday_simulate_sharded, birthday_threshold, monty_exact,
    monty_simulate_sharded, monty_tree, BirthdayFormula, RationalProbability, Strategy, TrialConfig,
};
use polycut_core::{
    enumerate_fixed, greedy_dissect, CutModel, DissectionError, DissectionState, Polyomino, SearchCaps, Solver,
};
use polycut_service::{router, AppState, Config, SessionStore};
use serde_json::{json, Value};
use tower::ServiceExt;

type Outcome = Result<String, String>;

struct Suite {
    failures: usize,
    total: usize,
}

impl Suite {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        self.total += 1;
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                self.failures += 1;
                println!("FAIL  {name}: {why} [{secs:.2}s]");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:.1}s, limit {}s", start.elapsed().as_secs_f64(), limit.as_secs()))
}

fn shapes_up_to(n_max: usize) -> Vec<Polyomino> {
    (1..=n_max).flat_map(|n| enumerate_fixed(n, n_max).expect("within cap")).collect()
}

/// Replays `cuts` from the whole shape and requires every piece to end as a unit square.
fn replay(p: &Polyomino, model: CutModel, cuts: &[polycut_core::CutSegment]) -> Result<(), String> {
    let mut state = DissectionState::new(p.clone(), model);
    for cut in cuts {
        state = state.apply_cut(cut).map_err(|e| format!("{}: {e}", p.shape_key()))?;
    }
    ensure(state.is_finished(), || format!("{}: replay leaves pieces larger than one cell", p.shape_key()))
}

fn single_split_is_n_minus_1() -> Outcome {
    let start = Instant::now();
    let solver = Solver::new(SearchCaps::default());
    let shapes = shapes_up_to(6);
    for p in &shapes {
        let r = solver.min_cuts(p, CutModel::SingleSplit).map_err(|e| e.to_string())?;
        ensure(r.count as usize == p.len() - 1, || format!("{} has min {} != {}", p.shape_key(), r.count, p.len() - 1))?;
        replay(p, CutModel::SingleSplit, &r.witness)?;
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{} fixed shapes with n <= 6, witnesses replay", shapes.len()))
}

fn greedy_is_n_minus_1() -> Outcome {
    let start = Instant::now();
    let shapes = shapes_up_to(8);
    for p in &shapes {
        let cuts = greedy_dissect(p);
        ensure(cuts.len() == p.len() - 1, || format!("{} greedy used {}", p.shape_key(), cuts.len()))?;
        replay(p, CutModel::SingleSplit, &cuts)?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{} fixed shapes with n <= 8 dissected with n-1 legal cuts", shapes.len()))
}

fn worked_examples() -> Outcome {
    let solver = Solver::new(SearchCaps { per_piece: 10, global: 6 });
    let min = |p: &Polyomino| solver.min_cuts(p, CutModel::SingleSplit).map(|r| r.count).map_err(|e| e.to_string());
    ensure(min(&preset("monomino").unwrap())? == 0, || "monomino".into())?;
    ensure(min(&preset("domino").unwrap())? == 1, || "domino".into())?;
    ensure(min(&preset("l-tromino").unwrap())? == 2, || "L-tromino".into())?;
    for n in 1..=10u32 {
        let row = Polyomino::rectangle(n, 1).unwrap();
        ensure(min(&row)? == n - 1, || format!("1x{n} strip"))?;
    }
    Ok("monomino 0, domino 1, L-tromino 2, 1xN strips N-1 for N <= 10".into())
}

fn alternative_models() -> Outcome {
    let solver = Solver::new(SearchCaps::default());
    let u = preset("u-pentomino").unwrap();
    let r = solver.min_cuts(&u, CutModel::FullLine).map_err(|e| e.to_string())?;
    ensure(r.count == 3, || format!("U-pentomino FULL_LINE min {}", r.count))?;
    replay(&u, CutModel::FullLine, &r.witness)?;
    let sq = preset("square-tetromino").unwrap();
    let r = solver.min_cuts(&sq, CutModel::GlobalLine).map_err(|e| e.to_string())?;
    ensure(r.count == 2, || format!("2x2 GLOBAL_LINE min {}", r.count))?;
    replay(&sq, CutModel::GlobalLine, &r.witness)?;
    for model in CutModel::ALL {
        for p in shapes_up_to(5) {
            let r = solver.min_cuts(&p, model).map_err(|e| e.to_string())?;
            replay(&p, model, &r.witness)?;
            let mut state = DissectionState::new(p.clone(), model);
            for (i, cut) in r.witness.iter().enumerate() {
                let h = solver.hint(&state).map_err(|e| e.to_string())?;
                ensure(h as usize == r.witness.len() - i, || format!("{} hint {h} at step {i}", p.shape_key()))?;
                state = state.apply_cut(cut).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok("U-pentomino FULL_LINE 3, 2x2 GLOBAL_LINE 2, witnesses and hints consistent for n <= 5".into())
}

fn survey_flags() -> Outcome {
    let solver = Solver::new(SearchCaps::default());
    let mut detail = Vec::new();
    for model in CutModel::ALL {
        let report = solver.survey(5, model, 2).map_err(|e| e.to_string())?;
        ensure(report.rows.len() == 1 + 2 + 6 + 19 + 63, || format!("{model}: {} rows", report.rows.len()))?;
        let flagged: BTreeSet<&str> = report.flagged().map(|r| r.shape_key.as_str()).collect();
        let expected: BTreeSet<&str> =
            report.rows.iter().filter(|r| r.min_cuts as usize != r.n - 1).map(|r| r.shape_key.as_str()).collect();
        ensure(flagged == expected, || format!("{model}: flagged set mismatch"))?;
        match model {
            CutModel::SingleSplit => ensure(flagged.is_empty(), || "SINGLE_SPLIT flagged shapes".into())?,
            CutModel::FullLine => ensure(flagged.contains("#.#/###"), || "U-pentomino not flagged".into())?,
            CutModel::GlobalLine => ensure(flagged.contains("##/##"), || "2x2 not flagged".into())?,
        }
        detail.push(format!("{model} {}", flagged.len()));
    }
    Ok(format!("flagged for n <= 5: {}", detail.join(", ")))
}

fn caps_reject_large_input() -> Outcome {
    let solver = Solver::new(SearchCaps::default());
    match solver.min_cuts(&Polyomino::rectangle(3, 3).unwrap(), CutModel::SingleSplit) {
        Err(DissectionError::CapExceeded { .. }) => Ok("9-cell shape refused above the 8-cell cap".into()),
        other => Err(format!("expected CapExceeded, got {other:?}")),
    }
}

fn monty_exact_values() -> Outcome {
    ensure(monty_exact(Strategy::Switch) == RationalProbability::new(2, 3).unwrap(), || "switch".into())?;
    ensure(monty_exact(Strategy::Stay) == RationalProbability::new(1, 3).unwrap(), || "stay".into())?;
    let mut leaves: Vec<String> = monty_tree().leaves.iter().map(|l| l.probability.to_string()).collect();
    leaves.sort();
    ensure(leaves == ["1/3", "1/3", "1/6", "1/6"], || format!("leaves {leaves:?}"))?;
    Ok("SWITCH 2/3, STAY 1/3, leaves 1/6 1/6 1/3 1/3".into())
}

fn monty_simulation() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in [1, 2, 3, 1234567] {
        let cfg = TrialConfig::new(100_000, seed).unwrap();
        for s in [Strategy::Switch, Strategy::Stay] {
            let err = (monty_simulate_sharded(s, cfg, 8) - monty_exact(s).to_f64()).abs();
            ensure(err < 0.01, || format!("seed {seed} {s}: error {err}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("100000 trials x 4 seeds, max |error| {worst:.4} < 0.01"))
}

fn birthday_values() -> Outcome {
    let exact = birthday_exact(23).map_err(|e| e.to_string())?;
    let approx = birthday_approx(23).map_err(|e| e.to_string())?;
    ensure((exact - 0.507297).abs() < 1e-6, || format!("exact(23) = {exact}"))?;
    ensure((approx - 0.500477).abs() < 1e-6, || format!("approx(23) = {approx}"))?;
    for f in [BirthdayFormula::Exact, BirthdayFormula::Approx] {
        let t = birthday_threshold(0.5, f).map_err(|e| e.to_string())?;
        ensure(t == 23, || format!("{f:?} threshold {t}"))?;
    }
    let mut prev = 0.0;
    for n in 1..=366 {
        let p = birthday_exact(n).map_err(|e| e.to_string())?;
        ensure(p >= prev && p <= 1.0, || format!("exact not monotone at {n}"))?;
        prev = p;
    }
    let cfg = TrialConfig::new(100_000, 99).unwrap();
    let sim = birthday_simulate_sharded(23, cfg, 8).map_err(|e| e.to_string())?;
    ensure((sim - exact).abs() < 0.01, || format!("simulated {sim}"))?;
    Ok(format!("exact(23) {exact:.6}, approx(23) {approx:.6}, threshold 23, simulated {sim:.4}"))
}

fn hanoi_valid() -> Outcome {
    let caps = LabCaps::default();
    for n in 1..=12 {
        let s = hanoi(n, &caps).map_err(|e| e.to_string())?;
        ensure(s.count == hanoi_move_count(n) && s.moves.len() as u64 == s.count, || format!("n={n} length"))?;
        validate_hanoi(n, &s.moves).map_err(|e| format!("n={n}: {e}"))?;
        if n >= 2 {
            let mut bad = s.moves.clone();
            bad.swap(0, 1);
            ensure(validate_hanoi(n, &bad).is_err(), || format!("n={n}: swapped moves accepted"))?;
            let mut bad = s.moves.clone();
            bad.pop();
            ensure(validate_hanoi(n, &bad).is_err(), || format!("n={n}: truncated list accepted"))?;
            let mut bad = s.moves.clone();
            bad[0] = HanoiMove { from: bad[0].to, to: bad[0].from };
            ensure(validate_hanoi(n, &bad).is_err(), || format!("n={n}: reversed move accepted"))?;
        }
    }
    Ok("n <= 12 replay legally in 2^n-1 moves, corrupted lists rejected".into())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn queens_by_permutation(n: usize) -> BTreeSet<Vec<(u32, u32)>> {
    permutations(n)
        .into_iter()
        .map(|perm| perm.iter().enumerate().map(|(r, &c)| (r as u32, c as u32)).collect::<Vec<_>>())
        .filter(|sq| (0..sq.len()).all(|i| (i + 1..sq.len()).all(|j| !queens_attack(sq[i], sq[j]))))
        .collect()
}

fn queens_counts() -> Outcome {
    let caps = LabCaps::default();
    for n in 1..=6 {
        let fast: BTreeSet<Vec<(u32, u32)>> =
            queens(n, &caps).map_err(|e| e.to_string())?.solutions.into_iter().map(|s| s.squares).collect();
        ensure(fast == queens_by_permutation(n as usize), || format!("n={n} differs from brute force"))?;
    }
    let start = Instant::now();
    let fast = queens(8, &caps).map_err(|e| e.to_string())?;
    let brute = queens_by_permutation(8);
    within(Duration::from_secs(10), start)?;
    ensure(fast.count == 92 && brute.len() == 92, || format!("n=8: {} vs {}", fast.count, brute.len()))?;
    let fast: BTreeSet<Vec<(u32, u32)>> = fast.solutions.into_iter().map(|s| s.squares).collect();
    ensure(fast == brute, || "n=8 solution sets differ".into())?;
    Ok("n <= 6 match brute force, n = 8 gives 92 by backtracking and permutation scan".into())
}

fn knight_tours() -> Outcome {
    let caps = LabCaps::default();
    let mut found = 0;
    for rows in 1..=6u32 {
        for cols in 1..=6u32 {
            for r in 0..rows as i64 {
                for c in 0..cols as i64 {
                    let tour = knight_tour(rows, cols, (r, c), false, &caps).map_err(|e| e.to_string())?;
                    if let Some(t) = &tour {
                        validate_tour(t, false).map_err(|e| format!("{rows}x{cols} from {r},{c}: {e}"))?;
                        found += 1;
                    }
                    let exists = tour.is_some();
                    if rows == 5 && cols == 5 && (r + c) % 2 == 1 {
                        ensure(!exists, || format!("5x5 tour from odd square {r},{c}"))?;
                    }
                    if rows == 6 && cols == 6 || (rows, cols) == (4, 4) || (rows, cols) == (3, 3) {
                        ensure(exists == (rows == 6), || format!("{rows}x{cols} from {r},{c}: exists={exists}"))?;
                    }
                }
            }
        }
    }
    ensure(knight_tour(5, 5, (0, 0), false, &caps).map_err(|e| e.to_string())?.is_some(), || "5x5 corner".into())?;
    let closed = knight_tour(6, 6, (0, 0), true, &caps).map_err(|e| e.to_string())?.ok_or("no closed 6x6 tour")?;
    validate_tour(&closed, true)?;
    Ok(format!("{found} tours on boards up to 6x6 validated, closed 6x6 tour validated"))
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, n: usize, k: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if chosen.len() == k {
            return f(chosen);
        }
        for i in start..n {
            chosen.push(i);
            if go(i + 1, n, k, chosen, f) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::new(), f)
}

fn domination_numbers() -> Outcome {
    let caps = LabCaps::default();
    let known = [1, 1, 1, 2, 3, 3, 4, 5];
    let start = Instant::now();
    for n in 1..=8u32 {
        let d = queens_domination(n, &caps).map_err(|e| e.to_string())?;
        ensure(d.k == known[n as usize - 1], || format!("n={n}: k={}", d.k))?;
        ensure(covers_board(&d.placement) && d.placement.squares.len() == d.k as usize, || format!("n={n}: bad placement"))?;
        if n == 6 {
            within(Duration::from_secs(10), start)?;
        }
        // No placement with one queen fewer covers the board.
        let cells = (n * n) as usize;
        let smaller = combinations(cells, d.k as usize - 1, &mut |idx| {
            let squares = idx.iter().map(|&i| (i as u32 / n, i as u32 % n)).collect();
            BoardPlacement::new(n, squares).map(|p| covers_board(&p)).unwrap_or(false)
        });
        ensure(!smaller || d.k == 1, || format!("n={n}: {} queens also suffice", d.k - 1))?;
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!("gamma = {known:?} for n = 1..8, placements cover, one fewer never does"))
}

fn magic_order_three() -> Outcome {
    let squares: BTreeSet<Vec<Vec<u32>>> = magic_squares(3).map_err(|e| e.to_string())?.into_iter().map(|s| s.grid).collect();
    let brute: BTreeSet<Vec<Vec<u32>>> = permutations(9)
        .into_iter()
        .map(|p| p.chunks(3).map(|r| r.iter().map(|&v| v as u32 + 1).collect()).collect::<Vec<Vec<u32>>>())
        .filter(|g| {
            let lines = (0..3)
                .map(|i| g[i].iter().sum::<u32>())
                .chain((0..3).map(|j| (0..3).map(|i| g[i][j]).sum()))
                .chain([(0..3).map(|i| g[i][i]).sum(), (0..3).map(|i| g[i][2 - i]).sum()]);
            lines.into_iter().all(|s: u32| s == 15)
        })
        .collect();
    ensure(squares == brute && squares.len() == 8, || format!("{} vs {}", squares.len(), brute.len()))?;
    Ok("8 squares, equal to the filter over all 9! fillings".into())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>, key: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    if let Some(k) = key {
        req = req.header("idempotency-key", k);
    }
    let body = body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty);
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn service_session() -> Outcome {
    let state = AppState::new(&Config::default(), SessionStore::new());
    let app = router(state.clone());
    let (status, view) = call(&app, "POST", "/api/dissection", Some(json!({"shape": "l-tromino"})), None).await;
    ensure(status == StatusCode::CREATED, || format!("create: {status}"))?;
    let id = view["id"].as_str().unwrap_or_default().to_owned();
    let mut hints = vec![view["hint"].clone()];
    let mut view = view;
    for step in 0..2 {
        let cut = view["legal_cuts"][0].clone();
        let key = format!("cut-{step}");
        let uri = format!("/api/dissection/{id}/cut");
        let (status, next) = call(&app, "POST", &uri, Some(cut.clone()), Some(&key)).await;
        ensure(status == StatusCode::OK, || format!("cut {step}: {status}"))?;
        let (_, retried) = call(&app, "POST", &uri, Some(cut), Some(&key)).await;
        ensure(retried == next, || "idempotent retry differed".into())?;
        hints.push(next["hint"].clone());
        view = next;
        if step == 0 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let path = dir.path().join("snap.json");
            state.store().save_snapshot(&path).map_err(|e| e.to_string())?;
            let restored = router(AppState::new(&Config::default(), SessionStore::load_snapshot(&path).map_err(|e| e.to_string())?));
            let (_, again) = call(&restored, "GET", &format!("/api/dissection/{id}"), None, None).await;
            ensure(again == view, || "restored session differs".into())?;
        }
    }
    ensure(hints == [json!(2), json!(1), json!(0)], || format!("hints {hints:?}"))?;
    ensure(view["finished"] == true && view["cut_count"] == 2, || "not finished after 2 cuts".into())?;
    Ok("L-tromino finished in 2 cuts, hints 2 -> 1 -> 0, retries not reapplied, snapshot restores".into())
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0, total: 0 };
    suite.check("single-split minimum is n-1 for every shape with n <= 6", single_split_is_n_minus_1);
    suite.check("greedy dissection uses n-1 cuts for n <= 8", greedy_is_n_minus_1);
    suite.check("worked examples", worked_examples);
    suite.check("full-line and global-line minima", alternative_models);
    suite.check("survey flags exactly the shapes below n-1", survey_flags);
    suite.check("search caps refuse oversized input", caps_reject_large_input);
    suite.check("Monty Hall exact probabilities", monty_exact_values);
    suite.check("Monty Hall simulation within 0.01", monty_simulation);
    suite.check("birthday exact, approximation and threshold", birthday_values);
    suite.check("Tower of Hanoi move lists", hanoi_valid);
    suite.check("n-queens solutions", queens_counts);
    suite.check("knight's tours", knight_tours);
    suite.check("queen domination numbers", domination_numbers);
    suite.check("3x3 magic squares", magic_order_three);
    let runtime = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    suite.check("service dissection session", || runtime.block_on(service_session()));
    println!("{}/{} criteria passed", suite.total - suite.failures, suite.total);
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
