//! Cardano's formula over the complex numbers for degree-3 polynomials,
//! with a depressed-cubic transform and Newton polish.

use num_complex::Complex64;

/// Principal complex cube root: argument in (-pi/3, pi/3].
pub fn cbrt_principal(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let (radius, theta) = z.to_polar();
    Complex64::from_polar(radius.cbrt(), theta / 3.0)
}

/// The three roots (with multiplicity) of
/// `c[0] z^3 + c[1] z^2 + c[2] z + c[3]`, `c[0] != 0`.
///
/// Cardano on the depressed cubic, then two Newton steps per root on the
/// original polynomial.
pub fn solve_cubic(c: [Complex64; 4]) -> [Complex64; 3] {
    assert!(c[0].norm() > 0.0, "leading coefficient must be nonzero");
    let p2 = c[1] / c[0];
    let p1 = c[2] / c[0];
    let p0 = c[3] / c[0];

    // z = w - p2/3 depresses to w^3 + p w + q.
    let shift = p2 / 3.0;
    let p = p1 - p2 * p2 / 3.0;
    let q = p0 - p1 * p2 / 3.0 + 2.0 * p2 * p2 * p2 / 27.0;

    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = [Complex64::default(); 3];

    let scale = p.norm().max(q.norm());
    if scale < 1e-300 {
        // Triple root at the shift point.
        roots = [-shift; 3];
    } else {
        let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
        let sq = disc.sqrt();
        // Pick the branch that avoids cancellation in -q/2 +- sq.
        let t0 = -q / 2.0 + sq;
        let t1 = -q / 2.0 - sq;
        let t = if t0.norm() >= t1.norm() { t0 } else { t1 };
        let u = cbrt_principal(t);
        let v = if u.norm() > 0.0 {
            -p / (3.0 * u)
        } else {
            Complex64::default()
        };
        for (k, root) in roots.iter_mut().enumerate() {
            let wk = omega.powu(k as u32);
            *root = wk * u + wk.conj() * v - shift;
        }
    }

    for root in roots.iter_mut() {
        for _ in 0..2 {
            *root = newton_step(c, *root);
        }
    }
    roots
}

fn newton_step(c: [Complex64; 4], z: Complex64) -> Complex64 {
    let f = ((c[0] * z + c[1]) * z + c[2]) * z + c[3];
    let df = (3.0 * c[0] * z + 2.0 * c[1]) * z + c[2];
    if df.norm() < 1e-14 * (1.0 + f.norm()) {
        return z;
    }
    z - f / df
}
