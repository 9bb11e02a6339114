//! The suite runner: seeded instances for every inequality identifier,
//! checked one trial at a time and aggregated into a [`SuiteReport`].

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::generate::{
    gaussian_vector, ginibre, ginibre_operator, hermitian, hermitian_in_interval, isometry_columns,
    psd_wishart, unit_vector, unitary,
};
use super::rng::{trial_rng, TrialRng};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_cdj, check_cor_2_3, check_cor_2_4, check_cor_2_5, check_cor_3_3, check_eq_3_1,
    check_hua_classical, check_jensen_subunital, check_mean_subpreservation, check_schwarz_block,
    check_thm_2_1, check_thm_3_1_rescaled, check_thm_3_2, Cor25Variant, HuaInstance, InequalityId,
    Thm21Variant,
};
use crate::linalg::{
    c64, hermitian_eig, operator_norm, ComplexMatrix, HermitianView, Interval, Tolerances,
};
use crate::maps::{FunctionDescriptor, FunctionKind, MapDescriptor};
use crate::means::MeanKind;
use crate::outcome::CheckOutcome;

/// Suite identifier that runs every inequality.
pub const ALL_SUITES: &str = "all";

/// Test-only suite whose check reports a violated inequality on every trial.
pub const SELFTEST_BROKEN: &str = "selftest-broken";

pub const DEFAULT_DIMS: [usize; 4] = [2, 3, 4, 6];
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub suite_id: String,
    pub trial_index: u64,
    pub dim: usize,
    pub instance_digest: String,
    /// Relative margin, absent when the check refused the instance.
    pub margin: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_id: String,
    pub master_seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub failures: Vec<Failure>,
    /// Smallest relative margin margin / max(1, scale) over all completed
    /// checks; absent when nothing ran.
    pub min_margin: Option<f64>,
    pub tolerance: f64,
    pub checks_run: usize,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON with `wall_time` zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        r.wall_time = 0.0;
        for s in &mut r.suites {
            *s = s.without_timing();
        }
        r
    }
}

fn merge_min(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Runs `trials` trials per dimension of the named suite, or of every suite
/// for `"all"`. Trial t at the k-th dimension uses the stream
/// (master_seed, suite_id, k·trials + t).
pub fn run_suite(
    suite_id: &str,
    master_seed: u64,
    trials: usize,
    dims: &[usize],
    tol: &Tolerances,
) -> Result<SuiteReport> {
    tol.validate()?;
    if let Some(&d) = dims.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidArgument(format!("dimension {d} must be at least 1")));
    }
    let start = Instant::now();
    if suite_id == ALL_SUITES {
        let mut report = SuiteReport {
            suite_id: suite_id.to_string(),
            master_seed,
            trials,
            dims: dims.to_vec(),
            failures: Vec::new(),
            min_margin: None,
            tolerance: tol.margin,
            checks_run: 0,
            wall_time: 0.0,
            suites: Vec::new(),
        };
        for id in InequalityId::ALL {
            let sub = run_single(id.as_str(), master_seed, trials, dims, tol)?;
            report.failures.extend(sub.failures.iter().cloned());
            report.min_margin = merge_min(report.min_margin, sub.min_margin);
            report.checks_run += sub.checks_run;
            report.suites.push(sub);
        }
        report.wall_time = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    run_single(suite_id, master_seed, trials, dims, tol)
}

fn run_single(
    suite_id: &str,
    master_seed: u64,
    trials: usize,
    dims: &[usize],
    tol: &Tolerances,
) -> Result<SuiteReport> {
    let check: Check = if suite_id == SELFTEST_BROKEN {
        broken_check
    } else {
        instance_check(suite_id.parse()?)
    };
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut min_margin: Option<f64> = None;
    let mut checks_run = 0;
    for (k, &dim) in dims.iter().enumerate() {
        for t in 0..trials {
            let index = (k * trials + t) as u64;
            let mut rng = trial_rng(master_seed, suite_id, index);
            checks_run += 1;
            match check(&mut rng, dim, index, tol) {
                Ok(o) => {
                    let rel = o.relative_margin();
                    min_margin = merge_min(min_margin, Some(rel));
                    if !o.holds {
                        failures.push(Failure {
                            suite_id: suite_id.to_string(),
                            trial_index: index,
                            dim,
                            instance_digest: o.instance_digest,
                            margin: Some(rel),
                            error: None,
                        });
                    }
                }
                Err(e) => failures.push(Failure {
                    suite_id: suite_id.to_string(),
                    trial_index: index,
                    dim,
                    instance_digest: String::new(),
                    margin: None,
                    error: Some(e.to_string()),
                }),
            }
        }
    }
    Ok(SuiteReport {
        suite_id: suite_id.to_string(),
        master_seed,
        trials,
        dims: dims.to_vec(),
        failures,
        min_margin,
        tolerance: tol.margin,
        checks_run,
        wall_time: start.elapsed().as_secs_f64(),
        suites: Vec::new(),
    })
}

/// The Hua check with its margin negated and shifted below zero, so every
/// trial fails.
fn broken_check(rng: &mut TrialRng, dim: usize, _: u64, tol: &Tolerances) -> Result<CheckOutcome> {
    let inst = hua_instance(rng, dim)?;
    let mut o = check_hua_classical(&inst, tol)?;
    o.inequality_id = SELFTEST_BROKEN.to_string();
    o.margin = -o.margin - 1.0;
    o.holds = false;
    o.equality = false;
    Ok(o)
}

type Check = fn(&mut TrialRng, usize, u64, &Tolerances) -> Result<CheckOutcome>;

fn instance_check(id: InequalityId) -> Check {
    match id {
        InequalityId::SchwarzBlock => |rng, n, _, tol| {
            let (a, x, y) = triple(rng, n);
            check_schwarz_block(&a, &x, &y, tol)
        },
        InequalityId::Thm21I => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::WeakTwo, tol)?;
            let (a, x, y) = triple(rng, n);
            check_thm_2_1(Thm21Variant::I, &map, &a, &x, &y, tol)
        },
        InequalityId::Thm21Ii => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::TwoPositive, tol)?;
            let (a, x, y) = triple(rng, n);
            check_thm_2_1(Thm21Variant::Ii, &map, &a, &x, &y, tol)
        },
        InequalityId::Rmk22 => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::WeakTwo, tol)?;
            let a = hermitian(rng, n);
            let x = ginibre_operator(rng, n);
            check_thm_2_1(Thm21Variant::Remark, &map, &a, &x, &x, tol)
        },
        InequalityId::Cor23 => |rng, n, _, tol| {
            let a = ginibre_operator(rng, n);
            let x = gaussian_vector(rng, n);
            let y = gaussian_vector(rng, n);
            check_cor_2_3(&a, &x, &y, tol)
        },
        InequalityId::Cor24 => |rng, n, _, tol| {
            let (a, x, y) = triple(rng, n);
            check_cor_2_4(&a, &x, &y, tol)
        },
        InequalityId::Cor25I => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::WeakTwo, tol)?;
            check_cor_2_5(Cor25Variant::I, &map, &ginibre_operator(rng, n), tol)
        },
        InequalityId::Cor25Ii => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::TwoPositive, tol)?;
            check_cor_2_5(Cor25Variant::Ii, &map, &ginibre_operator(rng, n), tol)
        },
        InequalityId::MeanSubGeo => |rng, n, t, tol| {
            let map = random_map(rng, n, Pool::WeakTwo, tol)?;
            let (a, b) = psd_pair(rng, n, t);
            check_mean_subpreservation(MeanKind::Geometric, &map, &a, &b, tol)
        },
        InequalityId::MeanSubHar => |rng, n, t, tol| {
            let map = random_map(rng, n, Pool::LinearWeakTwo, tol)?;
            let (a, b) = psd_pair(rng, n, t);
            check_mean_subpreservation(MeanKind::Harmonic, &map, &a, &b, tol)
        },
        InequalityId::HuaClassical => |rng, n, _, tol| check_hua_classical(&hua_instance(rng, n)?, tol),
        InequalityId::Eq31 => |rng, n, _, tol| {
            let state = random_map(rng, n, Pool::State, tol)?;
            let a = super::generate::contraction(rng, n);
            let b = super::generate::contraction(rng, n);
            check_eq_3_1(&state, &a, &b, tol)
        },
        InequalityId::Thm31 => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::TwoPositive, tol)?;
            let (a, x, y) = triple(rng, n);
            check_thm_3_1_rescaled(&map, &a, &x, &y, tol)
        },
        InequalityId::Eq33 => |rng, n, _, tol| {
            let f = random_function(rng);
            let count = rng.random_range(1..=3);
            let mut pairs = Vec::with_capacity(count);
            let mut xs = Vec::with_capacity(count);
            for i in 0..count {
                // the first Xᵢ is square, which keeps S invertible
                let k = if i == 0 { n } else { rng.random_range(1..=n) };
                let a = hermitian_in_interval(rng, k, &sample_interval(&f))?;
                pairs.push(HermitianView::symmetrize(&a)?);
                xs.push(ginibre(rng, k, n));
            }
            let xs = normalize_frame(&xs)?;
            let pairs: Vec<_> = pairs.into_iter().zip(xs).collect();
            check_jensen_subunital(&f, &pairs, tol)
        },
        InequalityId::Cdj => |rng, n, _, tol| {
            let map = random_map(rng, n, Pool::Unital, tol)?;
            let f = random_function(rng);
            let a = hermitian_in_interval(rng, n, &sample_interval(&f))?;
            check_cdj(&map, &f, &HermitianView::symmetrize(&a)?, tol)
        },
        InequalityId::Thm32 => |rng, n, _, tol| {
            let blocks = random_partition(rng, n);
            let pinching = MapDescriptor::pinching(n, blocks.clone())?;
            let f = random_function(rng);
            let b = if f.kind == FunctionKind::Square {
                hermitian_in_interval(rng, n, &Interval::open(-1.0, 1.0))?
            } else {
                hermitian_in_interval(rng, n, &Interval::open(0.05, 0.95))?
            };
            let c = block_diagonal_invertible(rng, n, &blocks);
            check_thm_3_2(&pinching, &f, &HermitianView::symmetrize(&b)?, &c, tol)
        },
        InequalityId::Cor33 => |rng, n, _, tol| {
            let state = random_map(rng, n, Pool::State, tol)?;
            let f = random_function(rng);
            let gamma = log_uniform(rng, 0.1, 10.0);
            let j = if f.kind == FunctionKind::Square {
                Interval::open(-2.0, 2.0)
            } else {
                Interval::open(0.0, 0.95 * gamma.min(1.0))
            };
            let b = hermitian_in_interval(rng, n, &j)?;
            check_cor_3_3(&state, &f, &HermitianView::symmetrize(&b)?, gamma, tol)
        },
    }
}

fn triple(rng: &mut TrialRng, n: usize) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let a = ginibre_operator(rng, n);
    let x = ginibre_operator(rng, n);
    let y = ginibre_operator(rng, n);
    (a, x, y)
}

fn log_uniform(rng: &mut TrialRng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

/// δ, α log-uniform in [0.1, 10]; every fourth draw sits near the equality
/// case xᵢ = δ/(n+α).
fn hua_instance(rng: &mut TrialRng, n: usize) -> Result<HuaInstance> {
    let delta = log_uniform(rng, 0.1, 10.0);
    let alpha = log_uniform(rng, 0.1, 10.0);
    let centre = delta / (n as f64 + alpha);
    let near = rng.random_range(0..4) == 0;
    let spread = if near { 1e-3 * centre } else { delta };
    let xs = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            if near {
                centre + spread * z
            } else {
                spread * z
            }
        })
        .collect();
    HuaInstance::new(delta, alpha, xs)
}

/// Two unit-norm PSD matrices; on every fourth trial both are rank deficient.
fn psd_pair(rng: &mut TrialRng, n: usize, trial: u64) -> (ComplexMatrix, ComplexMatrix) {
    if trial % 4 == 3 && n > 1 {
        (low_rank_psd(rng, n), low_rank_psd(rng, n))
    } else {
        (psd_wishart(rng, n), psd_wishart(rng, n))
    }
}

fn low_rank_psd(rng: &mut TrialRng, n: usize) -> ComplexMatrix {
    let k = rng.random_range(1..n);
    let g = ginibre(rng, n, k);
    let w = (&g * g.adjoint()).hermitian_part();
    let norm = operator_norm(&w).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    w.scale(1.0 / norm)
}

fn random_function(rng: &mut TrialRng) -> FunctionDescriptor {
    let k = FunctionKind::ALL[rng.random_range(0..FunctionKind::ALL.len())];
    FunctionDescriptor::new(k)
}

/// Bounded interval inside the domain of `f` to draw spectra from.
fn sample_interval(f: &FunctionDescriptor) -> Interval {
    match f.kind {
        FunctionKind::Square => Interval::open(-2.0, 2.0),
        FunctionKind::NegSqrt => Interval::open(0.0, 2.0),
        _ => Interval::open(0.05, 2.0),
    }
}

/// Rescales X₁, …, X_m by S^{-1/2}, S = Σ Xᵢ*Xᵢ, so that Σ Xᵢ*Xᵢ = I. A
/// second pass removes the rounding left by an ill-conditioned S.
fn normalize_frame(xs: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    normalize_frame_once(&normalize_frame_once(xs)?)
}

fn normalize_frame_once(xs: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let m = xs[0].cols();
    let mut s = ComplexMatrix::zeros(m, m);
    for x in xs {
        s = s + x.adjoint() * x;
    }
    let e = hermitian_eig(&HermitianView::symmetrize(&s)?)?;
    if e.min() <= 1e-10 * e.max() {
        return Err(Error::InvalidArgument("frame operator is singular".into()));
    }
    let inv_root = e.reassemble(&e.values.iter().map(|l| 1.0 / l.sqrt()).collect::<Vec<_>>());
    Ok(xs.iter().map(|x| x * &inv_root).collect())
}

/// Random partition of {0, …, n−1} into nonempty blocks.
fn random_partition(rng: &mut TrialRng, n: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = vec![vec![idx[0]]];
    for &i in &idx[1..] {
        if rng.random::<bool>() {
            blocks.push(vec![i]);
        } else {
            blocks.last_mut().expect("nonempty").push(i);
        }
    }
    blocks
}

/// Block-diagonal C for the partition, each block U diag(s) W with
/// singular values s uniform in [0.5, 2].
fn block_diagonal_invertible(rng: &mut TrialRng, n: usize, blocks: &[Vec<usize>]) -> ComplexMatrix {
    let mut c = ComplexMatrix::zeros(n, n);
    for b in blocks {
        let k = b.len();
        let u = unitary(rng, k);
        let w = unitary(rng, k);
        let s: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..=2.0)).collect();
        let blk = u * ComplexMatrix::from_diagonal(&s) * w;
        for (i, &r) in b.iter().enumerate() {
            for (j, &col) in b.iter().enumerate() {
                c.set(r, col, blk.get(i, j));
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pool {
    /// Weakly 2-positive maps, including the nonlinear det-shift.
    WeakTwo,
    /// Linear weakly 2-positive maps.
    LinearWeakTwo,
    /// 2-positive *-maps.
    TwoPositive,
    /// Unital positive linear maps.
    Unital,
    /// States.
    State,
}

fn random_map(rng: &mut TrialRng, n: usize, pool: Pool, tol: &Tolerances) -> Result<MapDescriptor> {
    const WEAK: &[&str] = &["transpose", "det_shift", "pinching", "compression", "vector_state", "normalized_trace", "kraus"];
    const LINEAR_WEAK: &[&str] = &["transpose", "pinching", "compression", "vector_state", "normalized_trace", "kraus"];
    const TWO: &[&str] = &["pinching", "compression", "vector_state", "normalized_trace", "kraus"];
    const UNITAL: &[&str] = &["pinching", "compression", "vector_state", "normalized_trace", "unital_kraus"];
    const STATE: &[&str] = &["vector_state", "normalized_trace"];
    let names = match pool {
        Pool::WeakTwo => WEAK,
        Pool::LinearWeakTwo => LINEAR_WEAK,
        Pool::TwoPositive => TWO,
        Pool::Unital => UNITAL,
        Pool::State => STATE,
    };
    match names[rng.random_range(0..names.len())] {
        "transpose" => MapDescriptor::transpose(n),
        "det_shift" => MapDescriptor::det_shift(n, rng.random_range(0.0..=2.0)),
        "pinching" => MapDescriptor::pinching(n, random_partition(rng, n)),
        "compression" => {
            let k = rng.random_range(1..=n);
            MapDescriptor::compression(isometry_columns(rng, n, k)?, tol)
        }
        "vector_state" => MapDescriptor::vector_state(unit_vector(rng, n), tol),
        "normalized_trace" => MapDescriptor::normalized_trace(n),
        "kraus" => {
            let m = rng.random_range(1..=3);
            MapDescriptor::kraus((0..m).map(|_| ginibre_operator(rng, n)).collect())
        }
        _ => {
            let m = rng.random_range(1..=3);
            let weights: Vec<f64> = (0..m).map(|_| 0.1 + rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            let ops = weights
                .iter()
                .map(|w| unitary(rng, n).scale_complex(c64((w / total).sqrt(), 0.0)))
                .collect();
            MapDescriptor::kraus(ops)
        }
    }
}
