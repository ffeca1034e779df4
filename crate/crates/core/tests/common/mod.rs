//! Randomized suites shared by the property tests and the acceptance run.
//!
//! Each suite draws its cases from a fixed-seed proptest runner, so a run
//! is reproducible, and reports the first counterexample on failure.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rydberg_vqd::gates::{ccz_arp_matrix, cz_arp_matrix, cz_lp_matrix, rx_matrix, ry_matrix};
use rydberg_vqd::linalg::{c64, diagonal, CMatrix};
use rydberg_vqd::noise::{amplitude_damping, idle_channel, DeviceParams};
use rydberg_vqd::runner::{execute_config, Benchmark, RunConfig, RunOutput};
use rydberg_vqd::state::{DensityMatrix, PureState};
use rydberg_vqd::transpile::haar_unitary;

pub const CASES: u32 = 1000;

/// A random pure state on `n` qubits as a density matrix.
pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let u = haar_unitary(1 << n, rng);
    let mut psi = PureState::zero(n).unwrap();
    let targets: Vec<usize> = (0..n).collect();
    psi.apply_unitary(&u, &targets).unwrap();
    DensityMatrix::from_pure(&psi)
}

/// A random contraction `U diag(s) V` with singular values in [0, 1].
pub fn random_contraction(k: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let d = 1 << k;
    let s: Vec<_> = (0..d).map(|_| c64(rng.random_range(0.0..=1.0), 0.0)).collect();
    haar_unitary(d, rng) * diagonal(&s) * haar_unitary(d, rng)
}

pub fn distinct_targets(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    rand::seq::index::sample(rng, n, k).into_vec()
}

pub enum Step {
    Operator(CMatrix, Vec<usize>),
    Channel(Vec<CMatrix>, Vec<usize>),
}

/// A random step drawn from the native operators, generic contractions and
/// the idle-noise channels.
pub fn random_step(n: usize, rng: &mut ChaCha8Rng) -> Step {
    let params = DeviceParams::default();
    match rng.random_range(0..7) {
        0 => Step::Operator(rx_matrix(rng.random_range(-6.3..6.3)), distinct_targets(n, 1, rng)),
        1 => Step::Operator(ry_matrix(rng.random_range(-6.3..6.3)), distinct_targets(n, 1, rng)),
        2 if n >= 2 => {
            let m = if rng.random_bool(0.5) { cz_arp_matrix() } else { cz_lp_matrix() };
            Step::Operator(m, distinct_targets(n, 2, rng))
        }
        3 if n >= 3 => Step::Operator(ccz_arp_matrix(), distinct_targets(n, 3, rng)),
        4 => {
            let k = rng.random_range(1..=n.min(2));
            Step::Operator(random_contraction(k, rng), distinct_targets(n, k, rng))
        }
        5 => {
            let t = rng.random_range(0.0..3.0);
            Step::Channel(idle_channel(t, &params).unwrap(), distinct_targets(n, 1, rng))
        }
        _ => {
            let t = rng.random_range(0.0..10.0);
            Step::Channel(amplitude_damping(t, 4.0).unwrap().to_vec(), distinct_targets(n, 1, rng))
        }
    }
}

pub fn apply(rho: &mut DensityMatrix, step: &Step) {
    match step {
        Step::Operator(m, t) => rho.apply_operator(m, t).unwrap(),
        Step::Channel(k, t) => rho.apply_channel(k, t).unwrap(),
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(result: Result<(), TestError<T>>) -> Result<(), String> {
    result.map_err(|e| e.to_string())
}

/// The trace never increases along random operator and channel sequences.
pub fn trace_monotonicity(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(any::<u64>(), 1usize..=4, 1usize..=12), |(seed, n, len)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rho = random_state(n, &mut rng);
        let mut previous = rho.trace();
        for _ in 0..len {
            apply(&mut rho, &random_step(n, &mut rng));
            let t = rho.trace();
            prop_assert!(t <= previous + 1e-12, "trace rose from {} to {}", previous, t);
            prop_assert!(t >= -1e-12);
            previous = t;
        }
        Ok(())
    }))
}

/// States stay Hermitian with eigenvalues above `-1e-10` after every step.
pub fn hermitian_positive(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(any::<u64>(), 1usize..=4, 1usize..=12), |(seed, n, len)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rho = random_state(n, &mut rng);
        for _ in 0..len {
            apply(&mut rho, &random_step(n, &mut rng));
            prop_assert!(rho.hermiticity_error() < 1e-12);
            prop_assert!(rho.min_eigenvalue() > -1e-10, "eigenvalue {}", rho.min_eigenvalue());
        }
        Ok(())
    }))
}

/// `idle(ta + tb) = idle(tb) . idle(ta)` on random single-qubit states and
/// physical parameter sets.
pub fn idle_semigroup(cases: u32) -> Result<(), String> {
    let strategy = (any::<u64>(), 0.01f64..10.0, 0.05f64..=2.0, 0.0f64..5.0, 0.0f64..5.0);
    report(runner(cases).run(&strategy, |(seed, t1, ratio, ta, tb)| {
        let params = DeviceParams { t1, t2: ratio * t1, ..DeviceParams::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = random_state(1, &mut rng);
        let mut split = start.clone();
        split.apply_channel(&idle_channel(ta, &params).unwrap(), &[0]).unwrap();
        split.apply_channel(&idle_channel(tb, &params).unwrap(), &[0]).unwrap();
        let mut joint = start;
        joint.apply_channel(&idle_channel(ta + tb, &params).unwrap(), &[0]).unwrap();
        let diff = split
            .as_slice()
            .iter()
            .zip(joint.as_slice())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(diff < 1e-10, "difference {}", diff);
        Ok(())
    }))
}

/// Runs `cfg` inside a dedicated pool of `workers` threads.
pub fn run_with_workers(cfg: &RunConfig, workers: usize) -> RunOutput {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .unwrap()
        .install(|| execute_config(cfg))
        .unwrap()
}

/// Small runs of every benchmark give identical output on one worker and on
/// several.
pub fn worker_determinism(cases: u32) -> Result<(), String> {
    let strategy = (any::<u64>(), 0usize..3, 1usize..=3, 2usize..=4);
    report(runner(cases).run(&strategy, |(seed, which, size, workers)| {
        let benchmark = [Benchmark::Qv, Benchmark::Bv, Benchmark::Grover][which];
        let mut cfg = RunConfig::new(benchmark);
        cfg.master_seed = Some(seed);
        cfg.n_circuits = 3;
        cfg.depth_range = [2, size.max(2)];
        cfg.qubit_counts = vec![size, size + 1];
        cfg.targets = vec![(seed % 64) as usize];
        cfg.iteration_range = [1, 1];
        let serial = run_with_workers(&cfg, 1);
        let parallel = run_with_workers(&cfg, workers);
        prop_assert_eq!(&serial, &parallel);
        for r in &serial.records {
            prop_assert!((0.0..=1.0).contains(&r.raw) && r.corrected <= 1.0 + 1e-12);
            prop_assert!(r.corrected >= r.raw);
        }
        Ok(())
    }))
}
