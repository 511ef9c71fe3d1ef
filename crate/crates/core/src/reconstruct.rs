//! Constructive pipeline: recover a matrix a with prescribed trace
//! coordinates by damped Gauss-Newton, solve the skew pencil for the
//! nullspace coefficients, assemble the symmetric pair (y, z), validate
//! every assumption, and enumerate the six lifts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{DET_GUARD_TOL, EIGEN_TOL, RANK_TOL, RELATION_TOL, SYMMETRY_TOL};
use crate::cubic::cbrt_principal;
use crate::error::{Error, Result};
use crate::hypersurface::{coords_of, pencil_matrices, ExtendedCoords, TraceCoords};
use crate::mat3::{cplx, eigen, is_ordinary, rank_rows, Cplx, Mat3};
use crate::rng::SeedStream;
use crate::skewmap::{colinearity_det, normalize_kernel};
use crate::words::{eval_word, Word};

/// Unit-normalized kernel coefficients of the pencil equation.
#[derive(Clone, Copy, Debug)]
pub struct NullspaceCoeffs {
    pub lambda: Cplx,
    pub mu: Cplx,
    pub nu: Cplx,
}

/// An assembled representation with its verification residuals.
#[derive(Clone, Copy, Debug)]
pub struct Representation {
    pub y: Mat3,
    pub z: Mat3,
    pub relation_residual: f64,
    pub y_symmetry_residual: f64,
    pub z_symmetry_residual: f64,
    pub det_y_error: f64,
    pub det_z_error: f64,
}

/// The assumption flags of the construction; all true on success.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolveFlags {
    pub on_hypersurface: bool,
    pub ordinary_commutator: bool,
    pub rank2_pencil: bool,
    pub dety_nonzero: bool,
    pub irreducible: bool,
    pub coords_separated: bool,
    /// With y, z symmetric, the transpose pass of the irreducibility
    /// check is redundant and skipped.
    pub symmetric_shortcut: bool,
}

/// Full output of a successful point solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub target: TraceCoords,
    pub a: Mat3,
    pub flags: SolveFlags,
    pub coeffs: NullspaceCoeffs,
    pub representation: Representation,
    pub extended: ExtendedCoords,
    pub pencil_residual: f64,
    pub iterations: usize,
    pub restarts_used: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOpts {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolveOpts {
    fn default() -> Self {
        SolveOpts {
            restarts: 20,
            max_iter: 200,
            tol: 1e-10,
        }
    }
}

// -------------------------------------------------------------------
// Gauss-Newton / Levenberg-Marquardt over the 18 real entry parameters.

fn params_to_mat(x: &[f64; 18]) -> Mat3 {
    let mut m = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let k = 3 * i + j;
            m.0[i][j] = cplx(x[k], x[9 + k]);
        }
    }
    m
}

#[cfg(test)]
fn mat_to_params(m: &Mat3) -> [f64; 18] {
    let mut x = [0.0; 18];
    for i in 0..3 {
        for j in 0..3 {
            let k = 3 * i + j;
            x[k] = m.0[i][j].re;
            x[9 + k] = m.0[i][j].im;
        }
    }
    x
}

/// The six complex residuals of the trace-prescription system, flattened
/// to 12 reals: tr(a)-t, tr(adj a)-tbar, tr(a a^T)-s,
/// tr(adj(a) adj(a)^T)-sbar, tr(adj(a) a^T)-r, det(a)-1.
pub fn trace_residual(x: &[f64; 18], target: &TraceCoords) -> [f64; 12] {
    let a = params_to_mat(x);
    let b = a.transpose();
    let a_inv = a.adjugate();
    let b_inv = b.adjugate();
    let c = [
        a.trace() - target.t,
        a_inv.trace() - target.tbar,
        (a * b).trace() - target.s,
        (a_inv * b_inv).trace() - target.sbar,
        (a_inv * b).trace() - target.r,
        a.det() - cplx(1.0, 0.0),
    ];
    let mut out = [0.0; 12];
    for (i, z) in c.iter().enumerate() {
        out[2 * i] = z.re;
        out[2 * i + 1] = z.im;
    }
    out
}

fn residual_norm(r: &[f64; 12]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Central finite-difference Jacobian of the trace residual.
pub fn fd_jacobian(x: &[f64; 18], target: &TraceCoords, step: f64) -> [[f64; 18]; 12] {
    let mut jac = [[0.0; 18]; 12];
    for col in 0..18 {
        let mut xp = *x;
        let mut xm = *x;
        xp[col] += step;
        xm[col] -= step;
        let rp = trace_residual(&xp, target);
        let rm = trace_residual(&xm, target);
        for row in 0..12 {
            jac[row][col] = (rp[row] - rm[row]) / (2.0 * step);
        }
    }
    jac
}

/// Solve the n x n real system by Gaussian elimination with partial
/// pivoting. Returns None when the pivot collapses.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pivot_mag < 1e-300 {
            return None;
        }
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        for i in (k + 1)..n {
            let factor = a[i][k] / a[k][k];
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= factor * a[k][j];
            }
            b[i] -= factor * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc -= a[k][j] * x[j];
        }
        x[k] = acc / a[k][k];
    }
    Some(x)
}

const FD_STEP: f64 = 1e-7;

fn lm_minimize(
    start: [f64; 18],
    target: &TraceCoords,
    max_iter: usize,
    tol: f64,
) -> ([f64; 18], f64, usize) {
    let mut x = start;
    let mut r = trace_residual(&x, target);
    let mut cost = residual_norm(&r);
    let mut damping = 1e-3;
    let mut iters = 0;
    for _ in 0..max_iter {
        iters += 1;
        if cost <= tol {
            break;
        }
        let jac = fd_jacobian(&x, target, FD_STEP);
        // Normal equations: (J^T J + damping I) delta = -J^T r
        let mut jtj = vec![vec![0.0; 18]; 18];
        let mut jtr = vec![0.0; 18];
        for i in 0..18 {
            for j in 0..18 {
                let mut acc = 0.0;
                for k in 0..12 {
                    acc += jac[k][i] * jac[k][j];
                }
                jtj[i][j] = acc;
            }
            let mut acc = 0.0;
            for k in 0..12 {
                acc += jac[k][i] * r[k];
            }
            jtr[i] = -acc;
        }
        let mut accepted = false;
        for _ in 0..25 {
            let mut lhs = jtj.clone();
            for (i, row) in lhs.iter_mut().enumerate().take(18) {
                row[i] += damping;
            }
            if let Some(delta) = solve_linear(lhs, jtr.clone()) {
                let mut xt = x;
                for i in 0..18 {
                    xt[i] += delta[i];
                }
                let rt = trace_residual(&xt, target);
                let new_cost = residual_norm(&rt);
                if new_cost < cost {
                    x = xt;
                    r = rt;
                    cost = new_cost;
                    damping = (damping / 10.0).max(1e-15);
                    accepted = true;
                    break;
                }
            }
            damping *= 10.0;
            if damping > 1e14 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    (x, cost, iters)
}

/// Recover a matrix a with the five prescribed trace coordinates (and
/// det = 1), with b = a^T implicit. Random Gaussian restarts; each
/// restart draws from the supplied stream.
pub fn recover_a(
    target: &TraceCoords,
    stream: &mut SeedStream,
    opts: &SolveOpts,
) -> Result<(Mat3, usize, usize)> {
    let mut best = f64::INFINITY;
    let mut total_iters = 0;
    for restart in 0..opts.restarts.max(1) {
        let mut start = [0.0; 18];
        for v in start.iter_mut() {
            *v = stream.gaussian();
        }
        let (x, cost, iters) = lm_minimize(start, target, opts.max_iter, opts.tol);
        total_iters += iters;
        if cost <= opts.tol {
            return Ok((params_to_mat(&x), total_iters, restart + 1));
        }
        best = best.min(cost);
    }
    Err(Error::Convergence {
        best_residual: best,
        restarts: opts.restarts,
    })
}

// -------------------------------------------------------------------
// Assembly and validation.

fn det_guard(m: &Mat3) -> Result<()> {
    let deviation = (m.det() - cplx(1.0, 0.0)).norm();
    if deviation > DET_GUARD_TOL {
        return Err(Error::DetGuard { deviation });
    }
    Ok(())
}

/// Relative residual of the defining relation
/// y z y z^-2 y z = z y z^-2 y z y.
pub fn check_relation(y: &Mat3, z: &Mat3) -> Result<f64> {
    det_guard(y)?;
    det_guard(z)?;
    let lhs_word = Word::new(&[1, 2, 1, -2, -2, 1, 2]).expect("in-alphabet");
    let rhs_word = Word::new(&[2, 1, -2, -2, 1, 2, 1]).expect("in-alphabet");
    let lhs = eval_word(&lhs_word, y, z)?;
    let rhs = eval_word(&rhs_word, y, z)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}

/// Common-eigenvector test: the pair is irreducible iff for no eigenvalue
/// pair (lambda, mu) the stacked system [y - lambda e; z - mu e] drops
/// rank, and likewise for the transposed pair. Symmetric inputs skip the
/// transpose pass.
pub fn is_irreducible(y: &Mat3, z: &Mat3, tol: f64) -> bool {
    let symmetric = y.is_symmetric(SYMMETRY_TOL) && z.is_symmetric(SYMMETRY_TOL);
    let shares = |p: &Mat3, q: &Mat3| -> bool {
        let ey = eigen(p, EIGEN_TOL);
        let ez = eigen(q, EIGEN_TOL);
        for cy in &ey.clusters {
            for cz in &ez.clusters {
                let sy = *p - Mat3::identity().scale(cy.value);
                let sz = *q - Mat3::identity().scale(cz.value);
                let mut rows: Vec<Vec<Cplx>> = Vec::with_capacity(6);
                for i in 0..3 {
                    rows.push(sy.0[i].to_vec());
                }
                for i in 0..3 {
                    rows.push(sz.0[i].to_vec());
                }
                if rank_rows(rows, tol) < 3 {
                    return true;
                }
            }
        }
        false
    };
    if shares(y, z) {
        return false;
    }
    if !symmetric && shares(&y.transpose(), &z.transpose()) {
        return false;
    }
    true
}

/// Run the assembly pipeline on a concrete a (with b = a^T): commutator
/// ordinariness, pencil kernel, y and z, relation, irreducibility.
pub fn pipeline_from_a(a: &Mat3) -> Result<SolveReport> {
    let b = a.transpose();
    det_guard(a)?;
    let target = coords_of(a, &b)?;
    let on_hypersurface = target.on_hypersurface(1e-8);

    // c = [a, b^-1] = a b^-1 a^-1 b
    let c = eval_word(&Word::new(&[1, -2, -1, 2]).expect("in-alphabet"), a, &b)?;
    if !is_ordinary(&c, EIGEN_TOL) {
        return Err(Error::NonOrdinaryCommutator);
    }

    let [m1, m2, m3] = pencil_matrices(a, &b)?;
    let col = colinearity_det(&m1, &m2, &m3, RANK_TOL)?;
    if col.rank == 3 {
        return Err(Error::NoKernel { rank: 3 });
    }
    let nv = normalize_kernel(col.nullvec.expect("rank-2 pencil has a kernel"));
    let coeffs = NullspaceCoeffs {
        lambda: nv[0],
        mu: nv[1],
        nu: nv[2],
    };
    let pencil_residual = {
        let combo = m1.scale(coeffs.lambda) + m2.scale(coeffs.mu) + m3.scale(coeffs.nu);
        let scale = m1.norm().max(m2.norm()).max(m3.norm()).max(1e-300);
        combo.norm() / scale
    };

    let c_inv = c.adjugate();
    let y0 = c.scale(coeffs.lambda) + Mat3::identity().scale(coeffs.mu) + c_inv.scale(coeffs.nu);
    let dy = y0.det();
    if dy.norm() < 1e-8 {
        return Err(Error::SingularY { det_mag: dy.norm() });
    }
    let y = y0.scale(cbrt_principal(dy).inv());
    let z = y * *a;

    let relation_residual = check_relation(&y, &z)?;
    if relation_residual > RELATION_TOL {
        return Err(Error::RelationResidual {
            residual: relation_residual,
            tol: RELATION_TOL,
        });
    }

    let extended = ExtendedCoords::of(a, &b)?;
    let gap = (extended.t1212bar - extended.t2121bar).norm();
    if gap <= 1e-8 {
        return Err(Error::CoordinateCollision { gap });
    }

    let irreducible = is_irreducible(&y, &z, RANK_TOL);
    if !irreducible {
        return Err(Error::Reducible);
    }

    let symmetric_shortcut =
        y.is_symmetric(SYMMETRY_TOL) && z.is_symmetric(SYMMETRY_TOL);
    let rep = Representation {
        y,
        z,
        relation_residual,
        y_symmetry_residual: (y - y.transpose()).norm() / y.norm().max(1.0),
        z_symmetry_residual: (z - z.transpose()).norm() / z.norm().max(1.0),
        det_y_error: (y.det() - cplx(1.0, 0.0)).norm(),
        det_z_error: (z.det() - cplx(1.0, 0.0)).norm(),
    };

    Ok(SolveReport {
        target,
        a: *a,
        flags: SolveFlags {
            on_hypersurface,
            ordinary_commutator: true,
            rank2_pencil: true,
            dety_nonzero: true,
            irreducible: true,
            coords_separated: true,
            symmetric_shortcut,
        },
        coeffs,
        representation: rep,
        extended,
        pencil_residual,
        iterations: 0,
        restarts_used: 0,
    })
}

/// End-to-end point solve: recover a from the target coordinates, then
/// run the assembly pipeline. Off-hypersurface targets converge in the
/// trace system but fail downstream with `NoKernel`.
pub fn solve_point(
    target: &TraceCoords,
    stream: &mut SeedStream,
    opts: &SolveOpts,
) -> Result<SolveReport> {
    let (a, iterations, restarts_used) = recover_a(target, stream, opts)?;
    let mut report = pipeline_from_a(&a)?;
    report.target = *target;
    report.iterations = iterations;
    report.restarts_used = restarts_used;
    Ok(report)
}

// -------------------------------------------------------------------
// Lift enumeration.

/// One of the six lifts over a hypersurface point.
#[derive(Clone, Debug)]
pub struct Lift {
    pub representation: Representation,
    pub trace_y: Cplx,
    pub coords: TraceCoords,
}

/// One cube-root-of-unity scaling class of three lifts, tagged by its
/// distinguishing commutator word traces.
#[derive(Clone, Debug)]
pub struct LiftClass {
    pub lifts: Vec<Lift>,
    pub t1212bar: Cplx,
    pub t2121bar: Cplx,
}

/// The six representations over one hypersurface point: two classes
/// (from a and from a^T) times three unit scalings.
#[derive(Clone, Debug)]
pub struct LiftSet {
    pub classes: [LiftClass; 2],
}

impl LiftSet {
    pub fn all_lifts(&self) -> impl Iterator<Item = &Lift> {
        self.classes.iter().flat_map(|c| c.lifts.iter())
    }
}

fn scaled_lift(rep: &Representation, k: u32) -> Result<Lift> {
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0).powu(k);
    let y = rep.y.scale(omega);
    let z = rep.z.scale(omega);
    let relation_residual = check_relation(&y, &z)?;
    // a = y^-1 z is unchanged by the common scaling.
    let a = y.adjugate() * z;
    let coords = coords_of(&a, &a.transpose())?;
    Ok(Lift {
        representation: Representation {
            y,
            z,
            relation_residual,
            y_symmetry_residual: (y - y.transpose()).norm() / y.norm().max(1.0),
            z_symmetry_residual: (z - z.transpose()).norm() / z.norm().max(1.0),
            det_y_error: (y.det() - cplx(1.0, 0.0)).norm(),
            det_z_error: (z.det() - cplx(1.0, 0.0)).norm(),
        },
        trace_y: y.trace(),
        coords,
    })
}

fn class_from_report(report: &SolveReport) -> Result<LiftClass> {
    let mut lifts = Vec::with_capacity(3);
    for k in 0..3 {
        lifts.push(scaled_lift(&report.representation, k)?);
    }
    Ok(LiftClass {
        lifts,
        t1212bar: report.extended.t1212bar,
        t2121bar: report.extended.t2121bar,
    })
}

/// Enumerate the Z/6Z lift set over the report's point: the three unit
/// scalings of (y, z), and the same for the swapped class built from
/// a' = a^T. Requires the coordinate-separation flag.
pub fn enumerate_lifts(report: &SolveReport) -> Result<LiftSet> {
    if !report.flags.coords_separated {
        return Err(Error::CoordinateCollision {
            gap: (report.extended.t1212bar - report.extended.t2121bar).norm(),
        });
    }
    let class_a = class_from_report(report)?;
    let swapped = pipeline_from_a(&report.a.transpose())?;
    let class_b = class_from_report(&swapped)?;
    Ok(LiftSet {
        classes: [class_a, class_b],
    })
}
