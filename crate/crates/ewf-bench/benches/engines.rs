//! Benchmarks for the prediction engines, the feasibility solver and the
//! plan frontend.

use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ewf_core::checkers::{joint_exists, order_census};
use ewf_core::montecarlo::{sample, TrialEngine, TrialPlan};
use ewf_core::pilotwave::{pm_correlators, pm_joint};
use ewf_core::quantum::{ghz_correlator, quantum_correlator_set};
use ewf_core::{collapse, Angle, Settings};
use ewf_cli::plan::parse_plan;

fn tsirelson() -> Settings {
    Settings::new(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap()
}

fn generic() -> Settings {
    Settings::new(0.31, 1.17, 2.71, 0.53).unwrap()
}

fn engines(c: &mut Criterion) {
    c.bench_function("pm_joint", |b| {
        let s = generic();
        b.iter(|| pm_joint(black_box(&s)).unwrap())
    });
    c.bench_function("pm_correlators", |b| {
        let s = generic();
        b.iter(|| pm_correlators(black_box(&s)).unwrap())
    });
    c.bench_function("collapse_chain_joint", |b| {
        let s = generic();
        b.iter(|| collapse::collapse_chain_joint(black_box(&s)).unwrap())
    });
    c.bench_function("ghz_correlator", |b| {
        let t = Angle::new(PI / 5.0).unwrap();
        b.iter(|| ghz_correlator(black_box(t), t, t))
    });
}

fn checkers(c: &mut Criterion) {
    c.bench_function("joint_exists_feasible", |b| {
        let set = pm_correlators(&tsirelson()).unwrap().chain;
        b.iter(|| joint_exists(black_box(&set), true).unwrap())
    });
    c.bench_function("joint_exists_infeasible", |b| {
        let set = quantum_correlator_set(&tsirelson()).unwrap();
        b.iter(|| joint_exists(black_box(&set), true).unwrap())
    });
    c.bench_function("order_census", |b| b.iter(order_census));
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo");
    group.sample_size(10);
    group.bench_function("pilotwave_100k_trials", |b| {
        let plan = TrialPlan {
            engine: TrialEngine::PilotWavePm,
            settings: Some(tsirelson()),
            trials: 100_000,
            seed: 7,
        };
        b.iter(|| sample(black_box(&plan)).unwrap())
    });
    group.finish();
}

fn frontend(c: &mut Criterion) {
    let text = std::fs::read_to_string(
        std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../plans/pm_pilotwave.ewf"),
    )
    .expect("reference plan");
    c.bench_function("parse_plan_pm", |b| {
        b.iter(|| parse_plan(black_box(&text)).unwrap())
    });
}

criterion_group!(benches, engines, checkers, sampling, frontend);
criterion_main!(benches);
