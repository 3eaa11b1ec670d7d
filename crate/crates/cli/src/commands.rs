use std::fmt::Write as _;
use std::path::Path;

use polycut_core::combinatorics::{hanoi, knight_tour, magic_squares, queens, queens_domination, LabCaps};
use polycut_core::presets::preset_or_parse;
use polycut_core::probability::{
    birthday, birthday_curve, birthday_simulate_sharded, birthday_threshold, monty_exact, monty_simulate_sharded,
    monty_tree, BirthdayFormula, Strategy, TrialConfig,
};
use polycut_core::{greedy_dissect, CutSegment, Polyomino, SearchCaps, Solver};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{
    BirthdayArgs, CliError, Command, DissectCommand, Format, KnightArgs, MagicArgs, MontyCommand, MontySimArgs,
    ServeArgs, ShapeArgs, SizeArgs, SurveyArgs,
};

/// Simulations always split into this many shards so results do not depend on `--jobs`.
const SHARDS: u64 = 64;

pub fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Dissect(DissectCommand::Min(a)) => dissect_min(&a),
        Command::Dissect(DissectCommand::Greedy(a)) => dissect_greedy(&a),
        Command::Dissect(DissectCommand::Survey(a)) | Command::Survey(a) => survey(&a),
        Command::Monty(MontyCommand::Exact { format }) => monty_exact_cmd(format),
        Command::Monty(MontyCommand::Simulate(a)) => monty_simulate_cmd(&a),
        Command::Birthday(a) => birthday_cmd(&a),
        Command::Hanoi(a) => hanoi_cmd(&a),
        Command::Queens(a) => queens_cmd(&a),
        Command::Knight(a) => knight_cmd(&a),
        Command::Domination(a) => domination_cmd(&a),
        Command::Magic(a) => magic_cmd(&a),
        Command::Serve(a) => serve(&a),
    }
}

fn set_jobs(jobs: usize) -> Result<(), CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    // Only the first call configures the pool; later calls are harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    Ok(())
}

fn to_json(command: &str, payload: impl Serialize) -> Result<String, CliError> {
    let mut value = serde_json::to_value(payload)?;
    if let Value::Object(map) = &mut value {
        map.insert("command".into(), Value::String(command.into()));
    }
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn no_csv(command: &str) -> CliError {
    CliError::Usage(format!("{command} has no CSV output; use --format text or json"))
}

/// Resolves `--shape`: a preset name, a file, or inline ASCII with `/` separating rows.
fn load_shape(arg: &str) -> Result<Polyomino, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    } else if arg.contains('/') && !arg.trim_start().starts_with('{') {
        arg.replace('/', "\n")
    } else {
        arg.to_owned()
    };
    Ok(preset_or_parse(&text)?)
}

fn write_cuts(out: &mut String, cuts: &[CutSegment]) {
    for (i, cut) in cuts.iter().enumerate() {
        let _ = writeln!(out, "  {}. {cut}", i + 1);
    }
}

fn dissect_min(a: &ShapeArgs) -> Result<String, CliError> {
    let shape = load_shape(&a.shape)?;
    let result = Solver::new(SearchCaps::default()).min_cuts(&shape, a.model)?;
    match a.format {
        Format::Json => to_json(
            "dissect-min",
            json!({
                "shape": shape.shape_key(),
                "n": shape.len(),
                "model": a.model,
                "min_cuts": result.count,
                "witness": result.witness,
            }),
        ),
        Format::Csv => Err(no_csv("dissect min")),
        Format::Text => {
            let mut out = format!("shape={} n={} model={}\nmin_cuts={}\n", shape.shape_key(), shape.len(), a.model, result.count);
            if !result.witness.is_empty() {
                out.push_str("witness:\n");
                write_cuts(&mut out, &result.witness);
            }
            Ok(out)
        }
    }
}

fn dissect_greedy(a: &ShapeArgs) -> Result<String, CliError> {
    let shape = load_shape(&a.shape)?;
    let cuts = greedy_dissect(&shape);
    match a.format {
        Format::Json => to_json(
            "dissect-greedy",
            json!({ "shape": shape.shape_key(), "n": shape.len(), "cuts": cuts.len(), "sequence": cuts }),
        ),
        Format::Csv => Err(no_csv("dissect greedy")),
        Format::Text => {
            let mut out = format!("shape={} n={}\ngreedy_cuts={}\n", shape.shape_key(), shape.len(), cuts.len());
            write_cuts(&mut out, &cuts);
            Ok(out)
        }
    }
}

fn survey(a: &SurveyArgs) -> Result<String, CliError> {
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let report = Solver::new(SearchCaps::default()).survey(a.nmax, a.model, a.jobs)?;
    match a.format {
        Format::Json => to_json("survey", &report),
        Format::Csv => Ok(report.to_csv()),
        Format::Text => {
            let mut out = format!("model={}\n", report.model);
            for t in &report.totals {
                let _ = writeln!(
                    out,
                    "n={} shapes={} matching={} flagged={} with_holes={}",
                    t.n, t.shapes, t.matching, t.flagged, t.with_holes
                );
            }
            let flagged: Vec<_> = report.flagged().collect();
            if !flagged.is_empty() {
                let _ = writeln!(out, "flagged (min_cuts != n-1): {}", flagged.len());
                for r in flagged {
                    let _ = writeln!(out, "  n={} {} min_cuts={}", r.n, r.shape_key, r.min_cuts);
                }
            }
            Ok(out)
        }
    }
}

fn monty_exact_cmd(format: Format) -> Result<String, CliError> {
    let switch = monty_exact(Strategy::Switch);
    let stay = monty_exact(Strategy::Stay);
    let tree = monty_tree();
    match format {
        Format::Json => to_json("monty-exact", json!({ "SWITCH": switch, "STAY": stay, "tree": tree.leaves })),
        Format::Csv => Err(no_csv("monty exact")),
        Format::Text => {
            let mut out = format!("SWITCH {switch} ({:.6})\nSTAY {stay} ({:.6})\n", switch.to_f64(), stay.to_f64());
            out.push_str("contestant picks door 1:\n");
            for leaf in &tree.leaves {
                let _ = writeln!(
                    out,
                    "  car={} host opens={} p={} stay={:?} switch={:?}",
                    leaf.car_door, leaf.opened_door, leaf.probability, leaf.if_stay, leaf.if_switch
                );
            }
            Ok(out)
        }
    }
}

fn monty_simulate_cmd(a: &MontySimArgs) -> Result<String, CliError> {
    set_jobs(a.jobs)?;
    let cfg = TrialConfig::new(a.trials, a.seed)?;
    let strategies = match a.strategy {
        Some(s) => vec![s],
        None => vec![Strategy::Switch, Strategy::Stay],
    };
    let rows: Vec<Value> = strategies
        .iter()
        .map(|&s| {
            json!({
                "strategy": s,
                "win_rate": monty_simulate_sharded(s, cfg, SHARDS),
                "exact": monty_exact(s),
            })
        })
        .collect();
    match a.format {
        Format::Json => to_json("monty-simulate", json!({ "trials": a.trials, "seed": a.seed, "results": rows })),
        Format::Csv => {
            let mut out = String::from("strategy,trials,seed,win_rate,exact\n");
            for (s, r) in strategies.iter().zip(&rows) {
                let _ = writeln!(out, "{s},{},{},{},{}", a.trials, a.seed, r["win_rate"], monty_exact(*s));
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for (s, r) in strategies.iter().zip(&rows) {
                let _ = writeln!(
                    out,
                    "{s} trials={} seed={} win_rate={:.6} exact={}",
                    a.trials,
                    a.seed,
                    r["win_rate"].as_f64().unwrap_or(f64::NAN),
                    monty_exact(*s)
                );
            }
            Ok(out)
        }
    }
}

fn birthday_cmd(a: &BirthdayArgs) -> Result<String, CliError> {
    set_jobs(a.jobs)?;
    let trials = a.trials.map(|t| TrialConfig::new(t, a.seed)).transpose()?;
    if let Some(target) = a.target {
        let formulas = match a.formula {
            Some(f) => vec![f],
            None => vec![BirthdayFormula::Exact, BirthdayFormula::Approx],
        };
        let rows: Vec<(BirthdayFormula, u32)> =
            formulas.into_iter().map(|f| Ok((f, birthday_threshold(target, f)?))).collect::<Result<_, CliError>>()?;
        return match a.format {
            Format::Json => {
                let map: serde_json::Map<String, Value> =
                    rows.iter().map(|(f, n)| (formula_name(*f).to_owned(), json!(n))).collect();
                to_json("birthday-threshold", json!({ "target": target, "threshold": map }))
            }
            Format::Csv => {
                let mut out = String::from("formula,target,threshold\n");
                for (f, n) in rows {
                    let _ = writeln!(out, "{},{target},{n}", formula_name(f));
                }
                Ok(out)
            }
            Format::Text => Ok(rows.iter().map(|(f, n)| format!("{} threshold={n} target={target}\n", formula_name(*f))).collect()),
        };
    }
    if let Some(n) = a.n {
        let simulated = trials.map(|cfg| birthday_simulate_sharded(n, cfg, SHARDS)).transpose()?;
        let point = match a.formula {
            Some(f) => json!({ "n": n, formula_name(f): birthday(n, f)?, "simulated": simulated }),
            None => json!({
                "n": n,
                "exact": birthday(n, BirthdayFormula::Exact)?,
                "approx": birthday(n, BirthdayFormula::Approx)?,
                "simulated": simulated,
            }),
        };
        return match a.format {
            Format::Json => to_json("birthday", json!({ "points": [point] })),
            Format::Csv => Ok(curve_csv(&[point])),
            Format::Text => {
                let mut out = format!("n={n}");
                for key in ["exact", "approx", "simulated"] {
                    if let Some(v) = point.get(key).and_then(Value::as_f64) {
                        let _ = write!(out, " {key}={v:.6}");
                    }
                }
                Ok(out + "\n")
            }
        };
    }
    let Some(n_max) = a.nmax else {
        return Err(CliError::Usage("birthday needs one of --n, --nmax or --target".into()));
    };
    let curve = birthday_curve(n_max, trials)?;
    let points: Vec<Value> = curve.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
    match a.format {
        Format::Json => to_json("birthday", json!({ "points": points })),
        Format::Csv => Ok(curve_csv(&points)),
        Format::Text => {
            let mut out = String::new();
            for p in &curve {
                let _ = write!(out, "n={} exact={:.6} approx={:.6}", p.n, p.exact, p.approx);
                if let Some(s) = p.simulated {
                    let _ = write!(out, " simulated={s:.6}");
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn formula_name(f: BirthdayFormula) -> &'static str {
    match f {
        BirthdayFormula::Exact => "exact",
        BirthdayFormula::Approx => "approx",
    }
}

fn curve_csv(points: &[Value]) -> String {
    let mut out = String::from("n,exact,approx,simulated\n");
    let cell = |v: &Value| v.as_f64().map(|x| x.to_string()).unwrap_or_default();
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p["n"], cell(&p["exact"]), cell(&p["approx"]), cell(&p["simulated"]));
    }
    out
}

fn hanoi_cmd(a: &SizeArgs) -> Result<String, CliError> {
    let solution = hanoi(a.n, &LabCaps::default())?;
    let moves: Vec<String> = solution.moves.iter().map(ToString::to_string).collect();
    match a.format {
        Format::Json => to_json("hanoi", json!({ "n": a.n, "count": solution.count, "moves": moves })),
        Format::Csv => {
            let mut out = String::from("step,from,to\n");
            for (i, m) in solution.moves.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", i + 1, m.from, m.to);
            }
            Ok(out)
        }
        Format::Text => Ok(moves.iter().map(|m| format!("{m}\n")).collect()),
    }
}

fn queens_cmd(a: &SizeArgs) -> Result<String, CliError> {
    set_jobs(a.jobs)?;
    let result = queens(a.n, &LabCaps::default())?;
    let solutions: Vec<&Vec<(u32, u32)>> = result.solutions.iter().map(|s| &s.squares).collect();
    match a.format {
        Format::Json => to_json("queens", json!({ "n": a.n, "count": result.count, "solutions": solutions })),
        Format::Csv => Err(no_csv("queens")),
        Format::Text => {
            let mut out = format!("count={}\n", result.count);
            for s in solutions {
                out.push_str(&serde_json::to_string(s)?);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn knight_cmd(a: &KnightArgs) -> Result<String, CliError> {
    let tour = knight_tour(a.rows, a.cols, a.start, a.closed, &LabCaps::default())?;
    match a.format {
        Format::Json => to_json(
            "knight",
            json!({
                "rows": a.rows,
                "cols": a.cols,
                "start": [a.start.0, a.start.1],
                "closed": a.closed,
                "found": tour.is_some(),
                "path": tour.as_ref().map(|t| &t.path),
            }),
        ),
        Format::Csv => Err(no_csv("knight")),
        Format::Text => {
            let Some(tour) = tour else {
                return Ok(format!("no {} tour on {}x{} from {},{}\n", kind(a.closed), a.rows, a.cols, a.start.0, a.start.1));
            };
            let mut grid = vec![vec![0usize; a.cols as usize]; a.rows as usize];
            for (step, &(r, c)) in tour.path.iter().enumerate() {
                grid[r as usize][c as usize] = step + 1;
            }
            let width = tour.path.len().to_string().len();
            let mut out = format!("{} tour on {}x{}\n", kind(a.closed), a.rows, a.cols);
            for row in grid {
                let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn kind(closed: bool) -> &'static str {
    if closed {
        "closed"
    } else {
        "open"
    }
}

fn domination_cmd(a: &SizeArgs) -> Result<String, CliError> {
    let d = queens_domination(a.n, &LabCaps::default())?;
    match a.format {
        Format::Json => to_json("domination", json!({ "n": a.n, "k": d.k, "placement": d.placement.squares })),
        Format::Csv => Err(no_csv("domination")),
        Format::Text => {
            let mut out = format!("k={}\n{}\n", d.k, serde_json::to_string(&d.placement.squares)?);
            for r in 0..a.n {
                let row: String =
                    (0..a.n).map(|c| if d.placement.squares.contains(&(r, c)) { 'Q' } else { '.' }).collect();
                out.push_str(&row);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn magic_cmd(a: &MagicArgs) -> Result<String, CliError> {
    let squares = magic_squares(a.order)?;
    let grids: Vec<&Vec<Vec<u32>>> = squares.iter().map(|s| &s.grid).collect();
    match a.format {
        Format::Json => to_json("magic", json!({ "order": a.order, "count": squares.len(), "squares": grids })),
        Format::Csv => Err(no_csv("magic")),
        Format::Text => {
            let mut out = format!("count={}\n", squares.len());
            for g in grids {
                out.push_str(&serde_json::to_string(g)?);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn serve(a: &ServeArgs) -> Result<String, CliError> {
    let mut config = polycut_service::Config::from_env().map_err(CliError::Usage)?;
    config.port = a.port;
    config.snapshot_path = a.snapshot.clone();
    config.seed = a.seed;
    tracing_subscriber::fmt().with_env_filter(
        tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
    ).init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(polycut_service::serve(config))?;
    Ok(String::new())
}
