//! Batch verification suites. Each suite draws its samples from
//! per-sample substreams so the result is independent of execution
//! order, and runs data-parallel by default.

use serde::{Deserialize, Serialize};

use crate::constants::{CROSS_SIGN, DEFAULT_SEED, SYMMETRY_TOL, TRIPLE_SIGN};
use crate::exactpoly::{
    certify_equal, f_poly, verify_explicit_products, verify_penultimate, Certificate, IntPoly5,
};
use crate::hypersurface::{coords_of, k_matrix};
use crate::mat3::{random_sl3, Mat3};
use crate::par::{map_indexed, Exec};
use crate::rng::SeedStream;
use crate::skewmap::{cross, to_skew, to_vec, triple, SkewVec};
use crate::words::{ch_aba, ch_aba_alt, ch_cube, ch_square, closed_form_table, word_trace};

const SUITE_CAYLEY_HAMILTON: u64 = 1;
const SUITE_SKEW_LEMMAS: u64 = 2;
const SUITE_CLOSED_FORMS: u64 = 3;
const SUITE_K_EQUALS_F: u64 = 4;

fn sample_label(suite: u64, i: usize) -> u64 {
    (suite << 32) | (i as u64)
}

/// Outcome of one batch suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub failures: usize,
    pub passed: bool,
}

impl SuiteReport {
    fn from_residuals(suite: &str, residuals: Vec<f64>, tol: f64) -> Self {
        let samples = residuals.len();
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        // NaN residuals count as failures.
        let failures = residuals.iter().filter(|&&r| r > tol || r.is_nan()).count();
        SuiteReport {
            suite: suite.to_string(),
            samples,
            max_residual,
            tol,
            failures,
            passed: failures == 0,
        }
    }
}

/// Matrix power identities: the degree-reduction formulas for a^2, a^3
/// and the two expansions of aba, on random unimodular matrices.
pub fn suite_cayley_hamilton(seed: u64, samples: usize, exec: Exec) -> SuiteReport {
    let root = SeedStream::new(seed);
    let residuals = map_indexed(exec, samples, |i| {
        let mut stream = root.substream(sample_label(SUITE_CAYLEY_HAMILTON, i));
        let a = random_sl3(&mut stream);
        let b = random_sl3(&mut stream);
        let scale = |m: &Mat3| m.norm().max(1.0);
        let r1 = (a * a - ch_square(&a).unwrap()).norm() / scale(&(a * a));
        let r2 = (a * a * a - ch_cube(&a).unwrap()).norm() / scale(&(a * a * a));
        let aba = a * b * a;
        let r3 = (aba - ch_aba(&a, &b).unwrap()).norm() / scale(&aba);
        let r4 = (aba - ch_aba_alt(&a, &b).unwrap()).norm() / scale(&aba);
        r1.max(r2).max(r3).max(r4)
    });
    SuiteReport::from_residuals("cayley_hamilton", residuals, 1e-10)
}

/// Skew-vector identities: commutator-to-cross-product and
/// triple-trace-to-determinant, on random skew triples.
pub fn suite_skew_lemmas(seed: u64, samples: usize, exec: Exec) -> SuiteReport {
    let root = SeedStream::new(seed);
    let residuals = map_indexed(exec, samples, |i| {
        let mut stream = root.substream(sample_label(SUITE_SKEW_LEMMAS, i));
        let draw = |s: &mut SeedStream| SkewVec([s.cgaussian(), s.cgaussian(), s.cgaussian()]);
        let (xv, yv, zv) = (draw(&mut stream), draw(&mut stream), draw(&mut stream));
        let (x, y, z) = (to_skew(&xv), to_skew(&yv), to_skew(&zv));

        let comm = x * y - y * x;
        let comm_vec = to_vec(&comm).unwrap();
        let expected = cross(&xv, &yv);
        let r1: f64 = (0..3)
            .map(|k| (comm_vec.0[k] - expected.0[k] * CROSS_SIGN).norm())
            .fold(0.0, f64::max);

        let tr = (x * y * z).trace();
        let det = triple(&xv, &yv, &zv) * TRIPLE_SIGN;
        let r2 = (tr - det).norm() / (1.0 + det.norm());
        r1.max(r2)
    });
    SuiteReport::from_residuals("skew_lemmas", residuals, 1e-10)
}

/// The eight closed-form word traces against direct word evaluation on
/// random symmetric-slice pairs (b = a^T).
pub fn suite_closed_forms(seed: u64, samples: usize, exec: Exec) -> SuiteReport {
    let root = SeedStream::new(seed);
    let table = closed_form_table();
    let residuals = map_indexed(exec, samples, |i| {
        let mut stream = root.substream(sample_label(SUITE_CLOSED_FORMS, i));
        let a = random_sl3(&mut stream);
        let b = a.transpose();
        debug_assert!((a - b.transpose()).norm() <= SYMMETRY_TOL);
        let coords = coords_of(&a, &b).unwrap();
        let vals = coords.as_array();
        let scale = coords.degree_weighted_scale();
        table
            .iter()
            .map(|cf| {
                let direct = word_trace(&cf.word, &a, &b).unwrap();
                let formula = cf.formula.eval(&vals);
                (direct - formula).norm() / scale
            })
            .fold(0.0, f64::max)
    });
    SuiteReport::from_residuals("closed_forms", residuals, 1e-9)
}

/// The central identity: the pencil trace invariant equals the
/// hypersurface polynomial at the pair's coordinates.
pub fn suite_k_equals_f(seed: u64, samples: usize, exec: Exec) -> SuiteReport {
    suite_k_equals_f_with(seed, samples, exec, f_poly())
}

/// Same comparison against an arbitrary polynomial; with anything other
/// than the true hypersurface polynomial the suite must fail. Used as a
/// mutation control.
pub fn suite_k_equals_f_with(
    seed: u64,
    samples: usize,
    exec: Exec,
    poly: &IntPoly5,
) -> SuiteReport {
    let root = SeedStream::new(seed);
    let residuals = map_indexed(exec, samples, |i| {
        let mut stream = root.substream(sample_label(SUITE_K_EQUALS_F, i));
        let a = random_sl3(&mut stream);
        let b = a.transpose();
        let coords = coords_of(&a, &b).unwrap();
        let k = k_matrix(&a, &b).unwrap();
        let f = poly.eval(&coords.as_array());
        (k - f).norm() / (1.0 + k.norm())
    });
    SuiteReport::from_residuals("k_equals_f", residuals, 1e-8)
}

/// The exact integer-polynomial certificates: both derivation stages
/// expand to the hypersurface polynomial, and the polynomial is
/// antisymmetric under the bar swap.
pub fn certificates() -> Vec<Certificate> {
    let f = f_poly();
    let antisym = certify_equal("f_bar_swap_antisymmetry", &f.bar_swap(), &-f.clone());
    vec![verify_penultimate(), verify_explicit_products(), antisym]
}

/// Run every suite with shared defaults. Suite list order is stable.
pub fn run_all(seed: u64, samples: usize, exec: Exec) -> Vec<SuiteReport> {
    let mut out = vec![
        suite_cayley_hamilton(seed, samples, exec),
        suite_skew_lemmas(seed, samples, exec),
        suite_closed_forms(seed, samples, exec),
        suite_k_equals_f(seed, samples, exec),
    ];
    for cert in certificates() {
        out.push(SuiteReport {
            suite: format!("certificate:{}", cert.name),
            samples: 1,
            max_residual: if cert.equal { 0.0 } else { f64::INFINITY },
            tol: 0.0,
            failures: usize::from(!cert.equal),
            passed: cert.equal,
        });
    }
    out
}

/// Default sample count for the batch suites.
pub const DEFAULT_SAMPLES: usize = 200;

/// Convenience entry point with library defaults.
pub fn run_default() -> Vec<SuiteReport> {
    run_all(DEFAULT_SEED, DEFAULT_SAMPLES, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{penultimate_expansion, IntPoly5};

    #[test]
    fn all_suites_pass_at_defaults() {
        for report in run_all(DEFAULT_SEED, 100, Exec::default()) {
            assert!(report.passed, "{} failed: {report:?}", report.suite);
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let par = run_all(7, 50, Exec::Parallel);
        let ser = run_all(7, 50, Exec::Serial);
        assert_eq!(par.len(), ser.len());
        for (p, s) in par.iter().zip(&ser) {
            assert_eq!(p.suite, s.suite);
            assert_eq!(p.max_residual.to_bits(), s.max_residual.to_bits());
            assert_eq!(p.failures, s.failures);
        }
    }

    #[test]
    fn seed_changes_residuals() {
        let a = suite_k_equals_f(1, 50, Exec::Serial);
        let b = suite_k_equals_f(2, 50, Exec::Serial);
        assert_ne!(a.max_residual.to_bits(), b.max_residual.to_bits());
        assert!(a.passed && b.passed);
    }

    #[test]
    fn mutation_control_fails() {
        // Perturb one coefficient of the hypersurface polynomial; the
        // trace comparison must detect it on every sample.
        let poly = f_poly() + &IntPoly5::monomial([0, 0, 1, 0, 0], 1);
        let report = suite_k_equals_f_with(DEFAULT_SEED, 50, Exec::Serial, &poly);
        assert!(!report.passed);
        assert_eq!(report.failures, 50);
    }

    #[test]
    fn certificate_mutation_control() {
        let good = certify_equal("pen", &penultimate_expansion(), f_poly());
        assert!(good.equal);
        let bad_rhs = f_poly() + &IntPoly5::constant(1);
        let bad = certify_equal("pen_bad", &penultimate_expansion(), &bad_rhs);
        assert!(!bad.equal);
        assert_eq!(bad.diff.len(), 1);
    }

    #[test]
    fn suite_report_counts_failures() {
        let report = SuiteReport::from_residuals("toy", vec![0.0, 1e-3, f64::NAN], 1e-6);
        assert_eq!(report.failures, 2);
        assert!(!report.passed);
    }
}
