//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p aap-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use aap_core::contribution::least_squares_objective;
use aap_core::*;
use aap_service::{router, AppState};
use aap_store::{load_project, ProjectStore};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {elapsed:?}, limit {limit:?}"),
    )
}

fn snap(pi: f64, u: f64, f: Option<f64>, pri: f64, iu: f64, gq: f64) -> IndexSnapshot {
    IndexSnapshot {
        pi,
        u,
        f,
        pri,
        iu,
        gq,
    }
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn fmt_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Fixture {
    name: &'static str,
    snapshot: IndexSnapshot,
    mode: PriMode,
    step: Step,
    outcome: Outcome,
    advisories: &'static [Advisory],
}

fn rule_fixtures() -> Vec<Fixture> {
    use Advisory::*;
    use Outcome::*;
    let p = PriMode::Pragmatic;
    vec![
        Fixture {
            name: "irrelevant data",
            snapshot: snap(0.8, 0.3, Some(0.8), 0.9, 0.8, 0.8),
            mode: p,
            step: Step::S3a,
            outcome: RestartAnalysis,
            advisories: &[],
        },
        Fixture {
            name: "future unknown",
            snapshot: snap(0.3, 0.8, None, 0.9, 0.8, 0.8),
            mode: p,
            step: Step::S3b,
            outcome: CheckFutureUsefulness,
            advisories: &[],
        },
        Fixture {
            name: "weak team, good data",
            snapshot: snap(0.3, 0.8, Some(0.8), 0.9, 0.8, 0.8),
            mode: p,
            step: Step::S3c,
            outcome: ReadyForDesign,
            advisories: &[ReworkTeam],
        },
        Fixture {
            name: "strong team, good data",
            snapshot: snap(0.8, 0.8, Some(0.8), 0.9, 0.8, 0.8),
            mode: p,
            step: Step::S3d,
            outcome: ReadyForDesign,
            advisories: &[],
        },
        Fixture {
            name: "processes not understood",
            snapshot: snap(0.8, 0.8, Some(0.8), 0.3, 0.8, 0.8),
            mode: p,
            step: Step::S5,
            outcome: RestartAnalysis,
            advisories: &[],
        },
        Fixture {
            name: "literal short of unity",
            snapshot: snap(0.8, 0.8, Some(0.8), 0.9, 0.8, 0.8),
            mode: PriMode::Literal,
            step: Step::S6,
            outcome: ContinueProcessAnalysis,
            advisories: &[],
        },
        Fixture {
            name: "literal at unity",
            snapshot: snap(0.8, 0.8, Some(0.8), 1.0, 0.8, 0.8),
            mode: PriMode::Literal,
            step: Step::S7,
            outcome: ReadyForDesign,
            advisories: &[],
        },
        Fixture {
            name: "weak team and interface",
            snapshot: snap(0.3, 0.8, Some(0.8), 0.9, 0.3, 0.9),
            mode: p,
            step: Step::S8,
            outcome: InvolveMorePeople,
            advisories: &[ReworkTeam],
        },
        Fixture {
            name: "geography and weak team",
            snapshot: snap(0.3, 0.8, Some(0.8), 0.9, 0.8, 0.3),
            mode: p,
            step: Step::S9,
            outcome: FindAlternatives,
            advisories: &[ReworkTeam],
        },
        Fixture {
            name: "ready",
            snapshot: snap(0.8, 0.8, Some(0.8), 0.9, 0.8, 0.8),
            mode: p,
            step: Step::S10,
            outcome: ReadyForDesign,
            advisories: &[],
        },
    ]
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let fixtures = rule_fixtures();
    let mut passed = 0;
    for fx in &fixtures {
        let config = EngineConfig {
            pri_mode: fx.mode,
            ..EngineConfig::default()
        };
        let rec = decide(&fx.snapshot, &config).map_err(fmt_err)?;
        let visited = rec
            .trace
            .iter()
            .any(|e| e.step == fx.step && matches!(e.verdict, Verdict::Passed | Verdict::Fired));
        let advisories: Vec<Advisory> = rec.advisories.iter().copied().collect();
        ensure(
            visited && rec.outcome == fx.outcome && advisories == fx.advisories,
            format!(
                "{}: got {:?} at {} with {:?}",
                fx.name,
                rec.outcome,
                rec.fired_step.id(),
                advisories
            ),
        )?;
        passed += 1;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "{passed}/{} steps in {:?}",
        fixtures.len(),
        start.elapsed()
    ))
}

const GRID: [f64; 7] = [0.0, 0.25, 0.45, 0.5, 0.55, 0.75, 1.0];

fn criterion_2() -> Check {
    let start = Instant::now();
    let config = EngineConfig::default();
    let first = sweep(&GRID, &config).map_err(fmt_err)?;
    let second = sweep(&GRID, &config).map_err(fmt_err)?;
    let expected = 7u64.pow(6) + 7u64.pow(5);
    let counted: u64 = first.outcomes.values().sum();
    ensure(first.total, "totality flag is false")?;
    ensure(
        first.points == expected && counted == expected,
        format!("{} points, {counted} counted", first.points),
    )?;
    ensure(first == second, "two runs differ")?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{expected} points, one outcome each, two identical runs in {:?}",
        start.elapsed()
    ))
}

fn criterion_3() -> Check {
    let half = IndexSnapshot::uniform(0.5);
    for config in [EngineConfig::default(), EngineConfig::literal()] {
        let rec = decide(&half, &config).map_err(fmt_err)?;
        ensure(
            !rec.outcome.is_gate_open(),
            format!("all-0.5 opened the gate in {:?}", config.pri_mode),
        )?;
        for name in IndexName::ALL {
            let raised = half.with(name, Some(0.500001));
            let rec = decide(&raised, &config).map_err(fmt_err)?;
            ensure(
                !rec.outcome.is_gate_open(),
                format!(
                    "{} raised opened the gate in {:?}",
                    name.as_str(),
                    config.pri_mode
                ),
            )?;
        }
    }
    Ok("all-0.5 and 6 single raises block in both modes".into())
}

fn criterion_4() -> Check {
    let s = snap(0.8, 0.8, Some(0.8), 0.8, 0.8, 0.8);
    let pragmatic = decide(&s, &EngineConfig::default()).map_err(fmt_err)?;
    let literal = decide(&s, &EngineConfig::literal()).map_err(fmt_err)?;
    ensure(
        pragmatic.outcome == Outcome::ReadyForDesign,
        format!("pragmatic gave {:?}", pragmatic.outcome),
    )?;
    ensure(
        literal.outcome == Outcome::ContinueProcessAnalysis,
        format!("literal gave {:?}", literal.outcome),
    )?;
    Ok("2/2".into())
}

/// Exhaustive search over every support set of the simplex. On a fixed
/// support the constrained optimum is found from the stationarity
/// conditions written over the raw ratings; infeasible supports are dropped.
fn lsq_oracle(ratings: &[Vec<f64>]) -> f64 {
    let m = ratings.len() as f64;
    let n = ratings[0].len();
    let sums: Vec<f64> = (0..n).map(|j| ratings.iter().map(|r| r[j]).sum()).collect();
    let raw = |c: &[f64]| -> f64 {
        ratings
            .iter()
            .flat_map(|row| row.iter().zip(c).map(|(r, cj)| (r - cj).powi(2)))
            .sum()
    };
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let k = support.len() as f64;
        let shift = (m - support.iter().map(|&j| sums[j]).sum::<f64>()) / (m * k);
        let mut c = vec![0.0; n];
        let mut feasible = true;
        for &j in &support {
            c[j] = sums[j] / m + shift;
            feasible &= c[j] >= -1e-15;
        }
        if feasible {
            best = best.min(raw(&c));
        }
    }
    best
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut passed = 0;
    for case in 0..100 {
        let m = rng.random_range(1..=6);
        let n = rng.random_range(2..=6);
        let ratings: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
            .collect();
        let matrix = PeerRatingMatrix::from_rows(ratings.clone());
        let c = estimate_contributions(&matrix).map_err(fmt_err)?;
        let sum: f64 = c.iter().sum();
        let ours = least_squares_objective(&matrix, &c);
        let oracle = lsq_oracle(&ratings);
        ensure(
            (sum - 1.0).abs() <= 1e-9 && ours <= oracle + 1e-6 && c.iter().all(|&x| x >= 0.0),
            format!("case {case}: objective {ours} vs oracle {oracle}, sum {sum}"),
        )?;
        passed += 1;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{passed}/100 in {:?}", start.elapsed()))
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

/// Returns (before, after) for one index after raising one input.
fn perturb(rng: &mut ChaCha8Rng, which: usize) -> Result<(f64, f64, bool), String> {
    let bump = |rng: &mut ChaCha8Rng, x: f64| x + (1.0 - x) * unit(rng);
    let e = fmt_err;
    Ok(match which {
        0 => {
            let n = rng.random_range(1..=8);
            let mut q = PiQuestionnaire::uniform((0..n).map(|i| (format!("q{i}"), unit(rng))));
            q.weights = (0..n).map(|_| 0.1 + unit(rng)).collect();
            let peer = PeerRatingMatrix::from_rows(
                (0..3)
                    .map(|_| (0..3).map(|_| unit(rng)).collect())
                    .collect(),
            );
            let lambda = unit(rng);
            let before = compute_pi(&q, Some(&peer), lambda).map_err(e)?;
            let i = rng.random_range(0..n);
            q.answers[i].score = bump(rng, q.answers[i].score);
            (
                before,
                compute_pi(&q, Some(&peer), lambda).map_err(e)?,
                true,
            )
        }
        1 | 2 => {
            let n = rng.random_range(1..=6);
            let tags = [
                &[DataTag::Immediate][..],
                &[DataTag::Future],
                &[DataTag::Immediate, DataTag::Future],
            ];
            let mut inv = DataInventory {
                items: (0..n)
                    .map(|i| {
                        DataItem::new(format!("d{i}"), tags[rng.random_range(0..3)], unit(rng))
                    })
                    .collect(),
            };
            let pick =
                |d: &aap_core::indices::DataIndices| if which == 1 { Some(d.u) } else { d.f };
            let before = pick(&compute_data_indices(&inv).map_err(e)?);
            let i = rng.random_range(0..n);
            inv.items[i].usefulness = bump(rng, inv.items[i].usefulness);
            let after = pick(&compute_data_indices(&inv).map_err(e)?);
            match (before, after) {
                (Some(b), Some(a)) => (b, a, true),
                (None, None) => (0.0, 0.0, true),
                _ => return Err("F measurement changed under a usefulness bump".into()),
            }
        }
        3 => {
            let n = rng.random_range(1..=6);
            let mut inv = ProcessInventory {
                processes: (0..n)
                    .map(|i| {
                        let kind = if rng.random::<bool>() {
                            ProcessKind::Core
                        } else {
                            ProcessKind::Supporting
                        };
                        ProcessEntry::new(format!("p{i}"), kind, unit(rng))
                    })
                    .collect(),
            };
            let before = compute_pri(&inv, 2.0, 1.0).map_err(e)?;
            let i = rng.random_range(0..n);
            inv.processes[i].understanding = bump(rng, inv.processes[i].understanding);
            (before, compute_pri(&inv, 2.0, 1.0).map_err(e)?, true)
        }
        4 => {
            let mut c = IuChecklist::new([unit(rng), unit(rng), unit(rng), unit(rng)]);
            let before = compute_iu(&c).map_err(e)?;
            let i = rng.random_range(0..IU_QUESTIONS);
            c.answers[i] = bump(rng, c.answers[i]);
            (before, compute_iu(&c).map_err(e)?, true)
        }
        _ => {
            let n = rng.random_range(1..=6);
            let mut g = GqFactorList {
                factors: (0..n)
                    .map(|i| GqFactor::new(format!("g{i}"), unit(rng)))
                    .collect(),
            };
            let before = compute_gq(&g).map_err(e)?;
            let i = rng.random_range(0..n);
            g.factors[i].severity = bump(rng, g.factors[i].severity);
            (before, compute_gq(&g).map_err(e)?, false)
        }
    })
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let names = ["PI", "U", "F", "PRI", "IU", "GQ"];
    let mut passed = 0;
    for case in 0..1000 {
        let which = case % 6;
        let (before, after, rising) = perturb(&mut rng, which)?;
        let ok = if rising {
            after >= before
        } else {
            after <= before
        };
        ensure(
            ok,
            format!("case {case} ({}): {before} -> {after}", names[which]),
        )?;
        passed += 1;
    }
    Ok(format!("{passed}/1000"))
}

fn history(
    snapshots: &[IndexSnapshot],
    config: &EngineConfig,
) -> Result<Vec<(IndexSnapshot, Recommendation)>, String> {
    snapshots
        .iter()
        .map(|s| decide(s, config).map(|r| (*s, r)).map_err(fmt_err))
        .collect()
}

fn criterion_7() -> Check {
    let literal = EngineConfig::literal();
    let high = history(&[IndexSnapshot::uniform(0.9); 3], &literal)?;
    let r = detect_paralysis(&high, &literal);
    ensure(
        r.triggered && r.kind == ParalysisKind::ThresholdChasing,
        format!("high-index: {r:?}"),
    )?;

    let config = EngineConfig::default();
    let low = history(
        &[
            snap(0.3, 0.3, Some(0.31), 0.3, 0.3, 0.3),
            snap(0.31, 0.29, Some(0.3), 0.3, 0.31, 0.3),
            snap(0.3, 0.3, Some(0.31), 0.29, 0.3, 0.31),
        ],
        &config,
    )?;
    ensure(
        low.iter()
            .all(|(_, r)| r.outcome == Outcome::RestartAnalysis),
        "low fixture not restarting",
    )?;
    let r = detect_paralysis(&low, &config);
    ensure(
        r.triggered && r.kind == ParalysisKind::Stagnation,
        format!("stagnant: {r:?}"),
    )?;

    let r = detect_paralysis(&high[..1], &literal);
    ensure(!r.triggered, format!("single iteration: {r:?}"))?;
    Ok("3/3".into())
}

fn criterion_8() -> Check {
    let record = load_project(&samples().join("projects/tnhp.json")).map_err(fmt_err)?;
    ensure(!record.iterations.is_empty(), "sample has no iterations")?;
    let config = record.config.engine();
    let params = record.config.params();
    for it in &record.iterations {
        let bundle = it
            .instruments
            .as_ref()
            .ok_or(format!("iteration {} has no instruments", it.seq))?;
        let (fresh, _) = compute_snapshot(bundle, &params).map_err(fmt_err)?;
        for name in IndexName::ALL {
            let ok = match (fresh.get(name), it.snapshot.get(name)) {
                (Some(a), Some(b)) => (a - b).abs() <= 1e-9,
                (None, None) => true,
                _ => false,
            };
            ensure(
                ok,
                format!("iteration {} {} differs", it.seq, name.as_str()),
            )?;
        }
        let rec = decide(&fresh, &config).map_err(fmt_err)?;
        ensure(
            rec.outcome == it.recommendation.outcome
                && rec.fired_step == it.recommendation.fired_step
                && rec.advisories == it.recommendation.advisories,
            format!("iteration {} decision differs", it.seq),
        )?;
    }
    Ok(format!("{} iterations reproduced", record.iterations.len()))
}

fn criterion_9() -> Check {
    let run = |project: &str, extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_aap"))
            .args(["decide", "-p"])
            .arg(samples().join(project))
            .args(extra)
            .env_remove("AAP_STORE_DIR")
            .output()
            .map_err(fmt_err)
    };
    let open = run("projects/step10.json", &["--gate"])?;
    ensure(
        open.status.code() == Some(0),
        format!("step-10 exit {:?}", open.status.code()),
    )?;
    let closed = run("projects/all-half.json", &["--gate"])?;
    ensure(
        closed.status.code() == Some(1),
        format!("all-0.5 exit {:?}", closed.status.code()),
    )?;

    let out = run("projects/step10.json", &["--format", "structured"])?;
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(fmt_err)?;
    let s: IndexSnapshot = serde_json::from_value(doc["snapshot"].clone()).map_err(fmt_err)?;
    let r: Recommendation =
        serde_json::from_value(doc["recommendation"].clone()).map_err(fmt_err)?;
    let back = json!({"snapshot": s, "recommendation": r});
    ensure(back == doc, "structured output does not round-trip")?;
    Ok("exit 0 / exit 1, structured output round-trips".into())
}

async fn call(app: &axum::Router, method: Method, uri: &str, body: Value) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .expect("request");
    let res = app.clone().oneshot(req).await.expect("infallible");
    let status = res.status();
    (
        status,
        res.into_body()
            .collect()
            .await
            .expect("body")
            .to_bytes()
            .to_vec(),
    )
}

fn store_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.flatten()
                .map(|e| (e.path(), std::fs::read(e.path()).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

async fn criterion_10_async() -> Check {
    let dir = tempfile::tempdir().map_err(fmt_err)?;
    let store = ProjectStore::open(dir.path()).map_err(fmt_err)?;
    let app = router(AppState::new(store), None);

    let body =
        json!({"snapshot": {"pi": 0.8, "u": 0.3, "f": 0.8, "pri": 0.9, "iu": 0.8, "gq": 0.8}});
    let (status, first) = call(&app, Method::POST, "/api/v1/decide", body.clone()).await;
    ensure(
        status == StatusCode::OK,
        format!("decide returned {status}"),
    )?;
    for _ in 0..20 {
        let (_, again) = call(&app, Method::POST, "/api/v1/decide", body.clone()).await;
        ensure(
            again == first,
            "decide response changed between identical requests",
        )?;
    }

    let (status, _) = call(
        &app,
        Method::POST,
        "/api/v1/projects",
        json!({"name": "Contract", "id": "contract"}),
    )
    .await;
    ensure(status.is_success(), format!("create returned {status}"))?;
    let append = json!({"revision": 0, "snapshot": body["snapshot"]});
    let (status, _) = call(
        &app,
        Method::POST,
        "/api/v1/projects/contract/iterations",
        append.clone(),
    )
    .await;
    ensure(
        status.is_success(),
        format!("first append returned {status}"),
    )?;
    let (status, _) = call(
        &app,
        Method::POST,
        "/api/v1/projects/contract/iterations",
        append,
    )
    .await;
    ensure(
        status == StatusCode::CONFLICT,
        format!("stale append returned {status}"),
    )?;

    let before = store_bytes(dir.path());
    let whatif = json!({"snapshot": body["snapshot"], "overrides": {"U": 0.9}});
    let (status, bytes) = call(&app, Method::POST, "/api/v1/whatif", whatif).await;
    ensure(
        status == StatusCode::OK,
        format!("whatif returned {status}"),
    )?;
    let res: Value = serde_json::from_slice(&bytes).map_err(fmt_err)?;
    ensure(
        res["outcome"] == "ReadyForDesign",
        "whatif did not flip the 3a state",
    )?;
    ensure(
        store_bytes(dir.path()) == before,
        "whatif changed the store",
    )?;
    Ok("20 identical responses, stale append 409, whatif wrote nothing".into())
}

fn criterion_10() -> Check {
    tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(fmt_err)?
        .block_on(criterion_10_async())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rule-table conformance", criterion_1),
        ("totality and determinism sweep", criterion_2),
        ("boundary strictness", criterion_3),
        ("mode contrast", criterion_4),
        ("least-squares oracle equivalence", criterion_5),
        ("index monotonicity", criterion_6),
        ("paralysis detection", criterion_7),
        ("persistence recompute", criterion_8),
        ("CLI gate", criterion_9),
        ("service contract", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
