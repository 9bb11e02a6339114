mod common;

use common::*;
use loewner::harness::{
    demo_paper, generate, run_suite, trial_rng, DemoCase, GeneratorKind, GeneratorSpec, SELFTEST_BROKEN,
};
use loewner::linalg::{operator_norm, ComplexMatrix, Interval};
use rand::Rng;

const SAMPLES: u64 = 1000;

fn sample(kind: GeneratorKind, dim: usize, seed: u64) -> loewner::harness::Generated {
    generate(&GeneratorSpec { kind, dim, seed }).unwrap()
}

fn isometry_defect(m: &ComplexMatrix) -> f64 {
    (m.adjoint() * m - ComplexMatrix::identity(m.cols())).max_abs()
}

#[test]
fn matrix_generators_meet_their_contracts() {
    let unit = Interval::open(0.0, 1.0);
    for seed in 0..SAMPLES {
        let n = 2 + (seed % 3) as usize;
        let g = sample(GeneratorKind::Ginibre, n, seed).matrix().unwrap();
        assert_eq!(g.shape(), (n, n));
        assert!(g.is_finite());

        let w = sample(GeneratorKind::PsdWishart, n, seed).matrix().unwrap();
        assert!(w.hermitian_defect() < 1e-12);
        assert!(min_eig(&w) > -1e-12);

        let h = sample(GeneratorKind::HermitianInInterval(unit), n, seed).matrix().unwrap();
        assert!(h.hermitian_defect() < 1e-12);
        assert!(min_eig(&h) > -1e-12 && max_eig(&h) < 1.0 + 1e-12, "seed {seed}");

        let c = sample(GeneratorKind::Contraction, n, seed).matrix().unwrap();
        assert!(operator_norm(&c).unwrap() <= 1.0 + 1e-12);

        let u = sample(GeneratorKind::Unitary, n, seed).matrix().unwrap();
        assert!(isometry_defect(&u) < 1e-12);
        assert!(isometry_defect(&u.adjoint()) < 1e-12);

        let k = 1 + (seed as usize % n);
        let v = sample(GeneratorKind::IsometryColumns(k), n, seed).matrix().unwrap();
        assert_eq!(v.shape(), (n, k));
        assert!(isometry_defect(&v) < 1e-12);
    }
}

#[test]
fn interval_generator_at_dimension_four() {
    for seed in 0..SAMPLES {
        let h = sample(GeneratorKind::HermitianInInterval(Interval::open(0.0, 1.0)), 4, seed)
            .matrix()
            .unwrap();
        assert!(min_eig(&h) > -1e-12 && max_eig(&h) < 1.0 + 1e-12, "seed {seed}");
    }
}

#[test]
fn block_generators_meet_their_contracts() {
    for seed in 0..SAMPLES {
        let n = 2 + (seed % 3) as usize;
        let b = sample(GeneratorKind::PsdBlock, n, seed).block().unwrap();
        assert_eq!(b.part_dim(), n);
        assert!(b.is_psd(&tol()).unwrap().holds);

        let w = sample(GeneratorKind::PsdWeakBlock, n, seed).block().unwrap();
        assert!(w.is_psd(&tol()).unwrap().holds);
        assert!(w.top_right().hermitian_defect() < 1e-9);
        assert!(w.top_right().max_abs_diff(w.bottom_left()) < 1e-12);
    }
}

#[test]
fn generators_are_deterministic_in_the_spec() {
    for kind in [GeneratorKind::Ginibre, GeneratorKind::Unitary, GeneratorKind::PsdWishart] {
        let a = sample(kind, 3, 9).matrix().unwrap();
        let b = sample(kind, 3, 9).matrix().unwrap();
        let c = sample(kind, 3, 10).matrix().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
    assert!(generate(&GeneratorSpec { kind: GeneratorKind::Ginibre, dim: 0, seed: 0 }).is_err());
    let bad = GeneratorKind::IsometryColumns(5);
    assert!(generate(&GeneratorSpec { kind: bad, dim: 3, seed: 0 }).is_err());
}

#[test]
fn trial_streams_are_independent_of_each_other() {
    let draw = |suite: &str, t: u64| -> f64 { trial_rng(1, suite, t).random() };
    assert_eq!(draw("cdj", 3), draw("cdj", 3));
    assert_ne!(draw("cdj", 3), draw("cdj", 4));
    assert_ne!(draw("cdj", 3), draw("eq-3-1", 3));
    assert_ne!(trial_rng(1, "cdj", 0).random::<u64>(), trial_rng(2, "cdj", 0).random::<u64>());
}

#[test]
fn reports_carry_their_inputs_and_are_reproducible() {
    let dims = [2, 3];
    let a = run_suite("cdj", 5, 7, &dims, &tol()).unwrap();
    let b = run_suite("cdj", 5, 7, &dims, &tol()).unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
    assert_eq!(a.suite_id, "cdj");
    assert_eq!(a.master_seed, 5);
    assert_eq!(a.trials, 7);
    assert_eq!(a.dims, dims.to_vec());
    assert_eq!(a.checks_run, 14);
    assert!(a.passed());
    assert!(a.min_margin.unwrap() >= -1e-8);

    let broken = run_suite(SELFTEST_BROKEN, 5, 4, &dims, &tol()).unwrap();
    assert!(!broken.passed());
    assert_eq!(broken.failures.len(), 8);
    for f in &broken.failures {
        assert_eq!(f.suite_id, SELFTEST_BROKEN);
        assert!(f.margin.unwrap() < 0.0);
        assert!(!f.instance_digest.is_empty());
    }
    let mut indices: Vec<u64> = broken.failures.iter().map(|f| f.trial_index).collect();
    indices.dedup();
    assert_eq!(indices.len(), 8);

    let json = serde_json::to_value(&a).unwrap();
    for key in ["suite_id", "master_seed", "trials", "dims", "failures", "min_margin", "tolerance", "checks_run", "wall_time"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn invalid_runs_are_refused() {
    assert!(run_suite("no-such-suite", 0, 1, &[2], &tol()).is_err());
    assert!(run_suite("cdj", 0, 1, &[0], &tol()).is_err());
}

#[test]
fn every_demo_case_produces_a_witness() {
    for case in DemoCase::ALL {
        let r = demo_paper(case, 1.0).unwrap();
        assert!(r.input_psd, "{case}");
        assert!(!r.image_psd, "{case}");
        assert!(r.image_min_eig < 0.0);
        assert!(r.is_witness());
    }
}
