//! Versioned JSON wire forms for the solve and lift outputs.
//!
//! Complex scalars encode as [re, im]; a matrix as three rows of three
//! such pairs. Every top-level payload carries `"schema"`.

use serde::{Deserialize, Serialize};

use crate::hypersurface::{TraceCoords, TraceCoordsWire};
use crate::mat3::{cplx, Mat3};
use crate::reconstruct::{Lift, LiftClass, LiftSet, Representation, SolveReport};

pub const SCHEMA: &str = "whitehead-sl3/v1";

pub type MatWire = [[[f64; 2]; 3]; 3];

pub fn mat_to_wire(m: &Mat3) -> MatWire {
    let mut out = [[[0.0; 2]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = [m.0[i][j].re, m.0[i][j].im];
        }
    }
    out
}

pub fn mat_from_wire(w: &MatWire) -> Mat3 {
    let mut m = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = cplx(w[i][j][0], w[i][j][1]);
        }
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationWire {
    pub y: MatWire,
    pub z: MatWire,
    pub relation_residual: f64,
    pub y_symmetry_residual: f64,
    pub z_symmetry_residual: f64,
    pub det_y_error: f64,
    pub det_z_error: f64,
}

impl From<&Representation> for RepresentationWire {
    fn from(r: &Representation) -> Self {
        RepresentationWire {
            y: mat_to_wire(&r.y),
            z: mat_to_wire(&r.z),
            relation_residual: r.relation_residual,
            y_symmetry_residual: r.y_symmetry_residual,
            z_symmetry_residual: r.z_symmetry_residual,
            det_y_error: r.det_y_error,
            det_z_error: r.det_z_error,
        }
    }
}

impl RepresentationWire {
    pub fn matrices(&self) -> (Mat3, Mat3) {
        (mat_from_wire(&self.y), mat_from_wire(&self.z))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReportWire {
    pub schema: String,
    pub target: TraceCoordsWire,
    pub a: MatWire,
    pub flags: crate::reconstruct::SolveFlags,
    pub coeffs: [[f64; 2]; 3],
    pub representation: RepresentationWire,
    pub t1212bar: [f64; 2],
    pub t2121bar: [f64; 2],
    pub pencil_residual: f64,
    pub iterations: usize,
    pub restarts_used: usize,
}

impl From<&SolveReport> for SolveReportWire {
    fn from(r: &SolveReport) -> Self {
        let w = |z: num_complex::Complex64| [z.re, z.im];
        SolveReportWire {
            schema: SCHEMA.to_string(),
            target: TraceCoordsWire::from(&r.target),
            a: mat_to_wire(&r.a),
            flags: r.flags,
            coeffs: [w(r.coeffs.lambda), w(r.coeffs.mu), w(r.coeffs.nu)],
            representation: RepresentationWire::from(&r.representation),
            t1212bar: w(r.extended.t1212bar),
            t2121bar: w(r.extended.t2121bar),
            pencil_residual: r.pencil_residual,
            iterations: r.iterations,
            restarts_used: r.restarts_used,
        }
    }
}

impl SolveReportWire {
    pub fn target_coords(&self) -> TraceCoords {
        TraceCoords::from(&self.target)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftWire {
    pub representation: RepresentationWire,
    pub trace_y: [f64; 2],
    pub coords: TraceCoordsWire,
}

impl From<&Lift> for LiftWire {
    fn from(l: &Lift) -> Self {
        LiftWire {
            representation: RepresentationWire::from(&l.representation),
            trace_y: [l.trace_y.re, l.trace_y.im],
            coords: TraceCoordsWire::from(&l.coords),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftClassWire {
    pub lifts: Vec<LiftWire>,
    pub t1212bar: [f64; 2],
    pub t2121bar: [f64; 2],
}

impl From<&LiftClass> for LiftClassWire {
    fn from(c: &LiftClass) -> Self {
        LiftClassWire {
            lifts: c.lifts.iter().map(LiftWire::from).collect(),
            t1212bar: [c.t1212bar.re, c.t1212bar.im],
            t2121bar: [c.t2121bar.re, c.t2121bar.im],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftSetWire {
    pub schema: String,
    pub classes: Vec<LiftClassWire>,
}

impl From<&LiftSet> for LiftSetWire {
    fn from(s: &LiftSet) -> Self {
        LiftSetWire {
            schema: SCHEMA.to_string(),
            classes: s.classes.iter().map(LiftClassWire::from).collect(),
        }
    }
}
