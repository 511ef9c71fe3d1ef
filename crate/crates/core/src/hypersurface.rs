//! Trace coordinates of a pair (a, b), the matrix-level colinearity
//! quantity K, the defining polynomial F of the hypersurface in C^5, and
//! a cubic sampler of hypersurface points.

use serde::{Deserialize, Serialize};

use crate::constants::{DET_GUARD_TOL, SYMMETRY_TOL};
use crate::cubic::solve_cubic;
use crate::error::{Error, Result};
use crate::exactpoly::f_poly;
use crate::mat3::{cplx, Cplx, Mat3};
use crate::words::{eval_word, word_trace, Word};

/// The five trace coordinates (t, tbar, s, sbar, r): t = tr(a) = tr(b),
/// tbar = tr(a^-1) = tr(b^-1), s = tr(ab), sbar = tr(a^-1 b^-1),
/// r = tr(a^-1 b) = tr(a b^-1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCoords {
    pub t: Cplx,
    pub tbar: Cplx,
    pub s: Cplx,
    pub sbar: Cplx,
    pub r: Cplx,
}

impl TraceCoords {
    pub fn new(t: Cplx, tbar: Cplx, s: Cplx, sbar: Cplx, r: Cplx) -> Self {
        TraceCoords { t, tbar, s, sbar, r }
    }

    pub fn all(v: f64) -> Self {
        let z = cplx(v, 0.0);
        TraceCoords::new(z, z, z, z, z)
    }

    /// (t, tbar, s, sbar, r) in the exactpoly variable order.
    pub fn as_array(&self) -> [Cplx; 5] {
        [self.t, self.tbar, self.s, self.sbar, self.r]
    }

    pub fn from_array(v: [Cplx; 5]) -> Self {
        TraceCoords::new(v[0], v[1], v[2], v[3], v[4])
    }

    /// Degree-weighted residual predicate: |F| small relative to the
    /// coordinate magnitudes.
    pub fn on_hypersurface(&self, tol: f64) -> bool {
        f_eval(self).norm() <= tol * (1.0 + self.degree_weighted_scale())
    }

    /// max over coordinates of |c|^4 plus 1, a crude bound for the size
    /// of individual F terms.
    pub fn degree_weighted_scale(&self) -> f64 {
        self.as_array()
            .iter()
            .map(|z| z.norm().powi(4))
            .fold(1.0, f64::max)
    }

    pub fn max_distance(&self, other: &TraceCoords) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// JSON wire form: every coordinate as [re, im].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceCoordsWire {
    pub t: [f64; 2],
    pub tbar: [f64; 2],
    pub s: [f64; 2],
    pub sbar: [f64; 2],
    pub r: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
}

impl From<&TraceCoords> for TraceCoordsWire {
    fn from(c: &TraceCoords) -> Self {
        let w = |z: Cplx| [z.re, z.im];
        TraceCoordsWire {
            t: w(c.t),
            tbar: w(c.tbar),
            s: w(c.s),
            sbar: w(c.sbar),
            r: w(c.r),
            residual: None,
        }
    }
}

impl From<&TraceCoordsWire> for TraceCoords {
    fn from(w: &TraceCoordsWire) -> Self {
        let z = |v: [f64; 2]| cplx(v[0], v[1]);
        TraceCoords::new(z(w.t), z(w.tbar), z(w.s), z(w.sbar), z(w.r))
    }
}

/// The base coordinates plus the two commutator word traces that
/// distinguish the two lift classes.
#[derive(Clone, Copy, Debug)]
pub struct ExtendedCoords {
    pub base: TraceCoords,
    /// tr(a b a^-1 b^-1)
    pub t1212bar: Cplx,
    /// tr(b a b^-1 a^-1)
    pub t2121bar: Cplx,
}

impl ExtendedCoords {
    pub fn of(a: &Mat3, b: &Mat3) -> Result<Self> {
        let base = coords_of(a, b)?;
        let w1 = Word::new(&[1, 2, -1, -2]).expect("in-alphabet");
        let w2 = Word::new(&[2, 1, -2, -1]).expect("in-alphabet");
        Ok(ExtendedCoords {
            base,
            t1212bar: word_trace(&w1, a, b)?,
            t2121bar: word_trace(&w2, a, b)?,
        })
    }

    pub fn separated(&self, tol: f64) -> bool {
        (self.t1212bar - self.t2121bar).norm() > tol
    }
}

/// A point produced by the sampler, with its recorded residual |F|.
#[derive(Clone, Copy, Debug)]
pub struct HypersurfacePoint {
    pub coords: TraceCoords,
    pub residual: f64,
}

fn det_guard(m: &Mat3) -> Result<()> {
    let deviation = (m.det() - cplx(1.0, 0.0)).norm();
    if deviation > DET_GUARD_TOL {
        return Err(Error::DetGuard { deviation });
    }
    Ok(())
}

/// The five traces of the pair (a, b). Defined for any unimodular pair;
/// on the symmetric slice (b = a^T) the defining symmetries
/// tr(a) = tr(b) and tr(a^-1 b) = tr(a b^-1) hold automatically.
pub fn coords_of(a: &Mat3, b: &Mat3) -> Result<TraceCoords> {
    det_guard(a)?;
    det_guard(b)?;
    let a_inv = a.adjugate();
    let b_inv = b.adjugate();
    Ok(TraceCoords::new(
        a.trace(),
        a_inv.trace(),
        (*a * *b).trace(),
        (a_inv * b_inv).trace(),
        (a_inv * *b).trace(),
    ))
}

/// Residual of the symmetric-slice defining symmetries; ~0 when b = a^T.
pub fn symmetry_residual(a: &Mat3, b: &Mat3) -> f64 {
    (*b - a.transpose()).norm() / a.norm().max(1.0)
}

/// The three skew matrices of the nullspace equation:
/// M1 = a b^-1 a^-1 b a - b a b^-1 a^-1 b, M2 = a - b,
/// M3 = b^-1 a b - a b a^-1.
pub fn pencil_matrices(a: &Mat3, b: &Mat3) -> Result<[Mat3; 3]> {
    let w = |toks: &[i8]| Word::new(toks).expect("in-alphabet");
    let m1 = eval_word(&w(&[1, -2, -1, 2, 1]), a, b)? - eval_word(&w(&[2, 1, -2, -1, 2]), a, b)?;
    let m2 = *a - *b;
    let m3 = eval_word(&w(&[-2, 1, 2]), a, b)? - eval_word(&w(&[1, 2, -1]), a, b)?;
    // Self-check: these are skew exactly when b = a^T; a failure means
    // the caller violated the symmetric-slice precondition. The words are
    // degree five, so a matrix of norm below roundoff at that scale is
    // treated as zero rather than tested for skewness.
    let floor = 1e-9 * a.norm().max(b.norm()).max(1.0).powi(5);
    for m in [&m1, &m2, &m3] {
        let residual = (*m + m.transpose()).norm() / m.norm().max(floor);
        if residual > 1e-7 {
            return Err(Error::NotSkew { residual });
        }
    }
    Ok([m1, m2, m3])
}

/// The colinearity trace tr(M1 M2 M3). On the symmetric slice this equals
/// F at the trace coordinates of (a, b) exactly.
pub fn k_matrix(a: &Mat3, b: &Mat3) -> Result<Cplx> {
    let [m1, m2, m3] = pencil_matrices(a, b)?;
    Ok((m1 * m2 * m3).trace())
}

/// Exact polynomial evaluation of F, shared with the symbolic path.
pub fn f_eval(c: &TraceCoords) -> Cplx {
    f_poly().eval(&c.as_array())
}

/// Which of the two cubic coordinates is left free when sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeVar {
    S,
    Sbar,
}

impl FreeVar {
    fn index(self) -> usize {
        match self {
            FreeVar::S => 2,
            FreeVar::Sbar => 3,
        }
    }
}

/// Roots of F in the free coordinate with the other four fixed at the
/// template's values (the template's own free entry is ignored). F is
/// monic (up to sign) of degree 3 in either s or sbar, so there are
/// always three roots with multiplicity.
pub fn sample(template: &TraceCoords, free: FreeVar) -> Vec<HypersurfacePoint> {
    let idx = free.index();
    let vals = template.as_array();
    let coeffs = f_poly().coefficients_in(idx, &vals);
    debug_assert_eq!(coeffs.len(), 4);
    // solve_cubic expects descending powers.
    let cubic = [coeffs[3], coeffs[2], coeffs[1], coeffs[0]];
    solve_cubic(cubic)
        .into_iter()
        .map(|root| {
            // Newton polish directly on F in the free variable.
            let mut z = root;
            for _ in 0..3 {
                let f = ((cubic[0] * z + cubic[1]) * z + cubic[2]) * z + cubic[3];
                let df = (3.0 * cubic[0] * z + 2.0 * cubic[1]) * z + cubic[2];
                if df.norm() < 1e-14 {
                    break;
                }
                z -= f / df;
            }
            let mut arr = vals;
            arr[idx] = z;
            let coords = TraceCoords::from_array(arr);
            HypersurfacePoint {
                coords,
                residual: f_eval(&coords).norm(),
            }
        })
        .collect()
}

/// The sampler root closest to the template's current value of the free
/// coordinate: the natural projection of nearby coordinates onto F = 0.
pub fn nearest_root(template: &TraceCoords, free: FreeVar) -> HypersurfacePoint {
    let current = template.as_array()[free.index()];
    sample(template, free)
        .into_iter()
        .min_by(|p, q| {
            let dp = (p.coords.as_array()[free.index()] - current).norm();
            let dq = (q.coords.as_array()[free.index()] - current).norm();
            dp.total_cmp(&dq)
        })
        .expect("cubic always has three roots")
}

/// Verify that when b is (approximately) a^T, k_matrix and coords feed the
/// same hypersurface test.
pub fn is_symmetric_pair(a: &Mat3, b: &Mat3) -> bool {
    symmetry_residual(a, b) <= SYMMETRY_TOL
}
