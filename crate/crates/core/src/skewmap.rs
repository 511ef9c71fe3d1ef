//! The identification of skew-symmetric 3x3 matrices with C^3
//! (u -> (u12, u13, u23)), the cross-product and triple-product lemmas,
//! and the colinearity determinant behind the nullspace step.
//!
//! With this component ordering the commutator identity holds up to one
//! global sign, pinned as [`crate::constants::CROSS_SIGN`]; all downstream
//! uses (dependence, vanishing) are sign-insensitive.

use crate::constants::SKEW_TOL;
use crate::error::{Error, Result};
use crate::mat3::{cplx, rank_cols, Cplx, Mat3};

/// A skew-symmetric matrix encoded by its strictly upper entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewVec(pub [Cplx; 3]);

/// Extract (u12, u13, u23); fails unless u is skew-symmetric within
/// the relative tolerance.
pub fn to_vec(u: &Mat3) -> Result<SkewVec> {
    let scale = u.norm();
    let residual = (*u + u.transpose()).norm();
    if residual > SKEW_TOL * scale.max(1e-300) && scale > 0.0 {
        return Err(Error::NotSkew {
            residual: residual / scale,
        });
    }
    Ok(SkewVec([u.0[0][1], u.0[0][2], u.0[1][2]]))
}

/// Inverse of [`to_vec`]: rebuild the skew matrix.
pub fn to_skew(v: &SkewVec) -> Mat3 {
    let [p, q, w] = v.0;
    let mut m = Mat3::zero();
    m.0[0][1] = p;
    m.0[1][0] = -p;
    m.0[0][2] = q;
    m.0[2][0] = -q;
    m.0[1][2] = w;
    m.0[2][1] = -w;
    m
}

/// Standard cross product of the encoded 3-vectors.
pub fn cross(x: &SkewVec, y: &SkewVec) -> SkewVec {
    let a = x.0;
    let b = y.0;
    SkewVec([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Determinant of the 3x3 matrix with columns x, y, z.
pub fn triple(x: &SkewVec, y: &SkewVec, z: &SkewVec) -> Cplx {
    let m = Mat3([
        [x.0[0], y.0[0], z.0[0]],
        [x.0[1], y.0[1], z.0[1]],
        [x.0[2], y.0[2], z.0[2]],
    ]);
    m.det()
}

/// Result of the colinearity test on three skew matrices.
#[derive(Clone, Debug)]
pub struct Colinearity {
    /// det of the column matrix of the three encoded vectors.
    pub value: Cplx,
    pub rank: usize,
    /// Kernel coefficients, present exactly when rank = 2; unit norm with
    /// the first significant component made real positive.
    pub nullvec: Option<[Cplx; 3]>,
}

/// Colinearity determinant of three skew matrices plus, in the rank-2
/// case, the kernel direction of [m1^vee m2^vee m3^vee].
pub fn colinearity_det(m1: &Mat3, m2: &Mat3, m3: &Mat3, tol: f64) -> Result<Colinearity> {
    assert!(tol > 0.0);
    let v1 = to_vec(m1)?;
    let v2 = to_vec(m2)?;
    let v3 = to_vec(m3)?;
    let value = triple(&v1, &v2, &v3);
    let rank = rank_cols(&[v1.0, v2.0, v3.0], tol);
    if rank <= 1 {
        return Err(Error::DegeneratePencil { rank });
    }
    let nullvec = if rank == 2 {
        Some(kernel_direction(&v1, &v2, &v3))
    } else {
        None
    };
    Ok(Colinearity {
        value,
        rank,
        nullvec,
    })
}

/// Kernel vector of the rank-2 matrix N = [v1 v2 v3] (columns) by the
/// closed cross-product formula: the kernel is orthogonal to every row of
/// N, so it is the cross product of the two most independent rows.
fn kernel_direction(v1: &SkewVec, v2: &SkewVec, v3: &SkewVec) -> [Cplx; 3] {
    let rows = [
        SkewVec([v1.0[0], v2.0[0], v3.0[0]]),
        SkewVec([v1.0[1], v2.0[1], v3.0[1]]),
        SkewVec([v1.0[2], v2.0[2], v3.0[2]]),
    ];
    let mut best = [Cplx::default(); 3];
    let mut best_norm = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c = cross(&rows[i], &rows[j]).0;
            let n: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > best_norm {
                best_norm = n;
                best = c;
            }
        }
    }
    normalize_kernel(best)
}

/// Unit-normalize, then rotate the phase so the first component with
/// magnitude above 1e-3 of the max is real positive.
pub fn normalize_kernel(mut v: [Cplx; 3]) -> [Cplx; 3] {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    let max_mag = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = v
        .iter()
        .find(|z| z.norm() > 1e-3 * max_mag)
        .copied()
        .unwrap_or(cplx(1.0, 0.0));
    let phase = lead / lead.norm();
    for z in v.iter_mut() {
        *z /= phase;
    }
    v
}
