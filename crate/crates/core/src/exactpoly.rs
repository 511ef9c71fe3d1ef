//! Exact integer-coefficient polynomials in the five commuting trace
//! coordinates (t, tbar, s, sbar, r), plus the symbolic certificates for
//! the substitution-and-expansion steps behind the hypersurface
//! polynomial F.
//!
//! Coefficients live in checked signed 64-bit arithmetic; the degrees in
//! play are at most 6 and the coefficients tiny, so an overflow means a
//! bug and aborts with a diagnostic rather than wrapping.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::mat3::Cplx;

pub const VAR_NAMES: [&str; 5] = ["t", "tbar", "s", "sbar", "r"];

/// Sparse exact polynomial: exponent 5-tuple -> nonzero i64 coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly5 {
    terms: BTreeMap<[u8; 5], i64>,
}

impl IntPoly5 {
    pub fn zero() -> Self {
        IntPoly5::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly5::zero();
        p.insert([0; 5], c);
        p
    }

    /// The variable with index `i` in (t, tbar, s, sbar, r) order.
    pub fn var(i: usize) -> Self {
        assert!(i < 5);
        let mut exp = [0u8; 5];
        exp[i] = 1;
        IntPoly5::monomial(exp, 1)
    }

    pub fn monomial(exp: [u8; 5], coef: i64) -> Self {
        let mut p = IntPoly5::zero();
        p.insert(exp, coef);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, exp: [u8; 5], coef: i64) {
        if coef == 0 {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                *c = c
                    .checked_add(coef)
                    .expect("IntPoly5 coefficient overflow in add");
                if *c == 0 {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, coef);
            }
        }
    }

    pub fn scalar_mul(&self, k: i64) -> Self {
        let mut out = IntPoly5::zero();
        for (&exp, &c) in &self.terms {
            out.insert(
                exp,
                c.checked_mul(k).expect("IntPoly5 coefficient overflow in scalar_mul"),
            );
        }
        out
    }

    /// Substitute the five complex values; nested (Horner-style in the
    /// precomputed power tables) evaluation.
    pub fn eval(&self, vals: &[Cplx; 5]) -> Cplx {
        let max_deg: [u8; 5] = {
            let mut m = [0u8; 5];
            for exp in self.terms.keys() {
                for i in 0..5 {
                    m[i] = m[i].max(exp[i]);
                }
            }
            m
        };
        let mut powers: [Vec<Cplx>; 5] = Default::default();
        for i in 0..5 {
            let mut table = vec![Cplx::new(1.0, 0.0)];
            for k in 1..=max_deg[i] as usize {
                let next = table[k - 1] * vals[i];
                table.push(next);
            }
            powers[i] = table;
        }
        let mut acc = Cplx::default();
        for (exp, &c) in &self.terms {
            let mut term = Cplx::new(c as f64, 0.0);
            for i in 0..5 {
                term *= powers[i][exp[i] as usize];
            }
            acc += term;
        }
        acc
    }

    /// Swap t<->tbar and s<->sbar.
    pub fn bar_swap(&self) -> Self {
        let mut out = IntPoly5::zero();
        for (&exp, &c) in &self.terms {
            out.insert([exp[1], exp[0], exp[3], exp[2], exp[4]], c);
        }
        out
    }

    /// Terms in graded-lexicographic order (display canonicalization).
    pub fn sorted_terms(&self) -> Vec<([u8; 5], i64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&e, &c)| (e, c)).collect();
        v.sort_by_key(|(e, _)| {
            let deg: u16 = e.iter().map(|&x| x as u16).sum();
            (std::cmp::Reverse(deg), std::cmp::Reverse(*e))
        });
        v
    }

    /// Partial evaluation: fix all variables except `free`, returning the
    /// dense coefficients of the remaining univariate polynomial
    /// (index = power of the free variable).
    pub fn coefficients_in(&self, free: usize, vals: &[Cplx; 5]) -> Vec<Cplx> {
        assert!(free < 5);
        let max_deg = self
            .terms
            .keys()
            .map(|e| e[free] as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Cplx::default(); max_deg + 1];
        for (exp, &c) in &self.terms {
            let mut term = Cplx::new(c as f64, 0.0);
            for i in 0..5 {
                if i != free {
                    term *= vals[i].powu(exp[i] as u32);
                }
            }
            coeffs[exp[free] as usize] += term;
        }
        coeffs
    }
}

impl std::ops::Add for &IntPoly5 {
    type Output = IntPoly5;
    fn add(self, rhs: &IntPoly5) -> IntPoly5 {
        let mut out = self.clone();
        for (&exp, &c) in &rhs.terms {
            out.insert(exp, c);
        }
        out
    }
}

impl std::ops::Sub for &IntPoly5 {
    type Output = IntPoly5;
    fn sub(self, rhs: &IntPoly5) -> IntPoly5 {
        let mut out = self.clone();
        for (&exp, &c) in &rhs.terms {
            out.insert(exp, c.checked_neg().expect("IntPoly5 overflow in sub"));
        }
        out
    }
}

impl std::ops::Mul for &IntPoly5 {
    type Output = IntPoly5;
    fn mul(self, rhs: &IntPoly5) -> IntPoly5 {
        let mut out = IntPoly5::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let mut exp = [0u8; 5];
                for i in 0..5 {
                    exp[i] = ea[i]
                        .checked_add(eb[i])
                        .expect("IntPoly5 exponent overflow in mul");
                }
                out.insert(exp, ca.checked_mul(cb).expect("IntPoly5 coefficient overflow in mul"));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for IntPoly5 {
            type Output = IntPoly5;
            fn $method(self, rhs: IntPoly5) -> IntPoly5 {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&IntPoly5> for IntPoly5 {
            type Output = IntPoly5;
            fn $method(self, rhs: &IntPoly5) -> IntPoly5 {
                (&self).$method(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl std::ops::Neg for IntPoly5 {
    type Output = IntPoly5;
    fn neg(self) -> IntPoly5 {
        self.scalar_mul(-1)
    }
}

impl fmt::Display for IntPoly5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exp, coef)) in self.sorted_terms().into_iter().enumerate() {
            let mag = coef.unsigned_abs();
            if i == 0 {
                if coef < 0 {
                    write!(f, "-")?;
                }
            } else if coef < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = exp.iter().all(|&e| e == 0);
            if mag != 1 || is_const {
                write!(f, "{mag}")?;
            }
            let mut first_var = true;
            for (v, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var || mag != 1 {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "{}", VAR_NAMES[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// One monomial of a certificate, JSON-facing.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermWire {
    pub exp: [u8; 5],
    pub coef: i64,
}

/// Machine-readable outcome of a symbolic equality check. `diff` lists
/// the monomials of lhs - rhs when the two sides disagree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub lhs_terms: Vec<TermWire>,
    pub rhs_terms: Vec<TermWire>,
    pub equal: bool,
    pub diff: Vec<TermWire>,
}

fn wire_terms(p: &IntPoly5) -> Vec<TermWire> {
    p.sorted_terms()
        .into_iter()
        .map(|(exp, coef)| TermWire { exp, coef })
        .collect()
}

/// Compare two expansions exactly and package the result.
pub fn certify_equal(name: &str, lhs: &IntPoly5, rhs: &IntPoly5) -> Certificate {
    let diff = lhs - rhs;
    Certificate {
        name: name.to_string(),
        lhs_terms: wire_terms(lhs),
        rhs_terms: wire_terms(rhs),
        equal: diff.is_zero(),
        diff: wire_terms(&diff),
    }
}

// ---------------------------------------------------------------------
// The closed-form trace polynomials and the hypersurface polynomial F,
// stored once and shared with the numeric path.

fn t() -> IntPoly5 {
    IntPoly5::var(0)
}
fn tb() -> IntPoly5 {
    IntPoly5::var(1)
}
fn s() -> IntPoly5 {
    IntPoly5::var(2)
}
fn sb() -> IntPoly5 {
    IntPoly5::var(3)
}
fn r() -> IntPoly5 {
    IntPoly5::var(4)
}
fn int(c: i64) -> IntPoly5 {
    IntPoly5::constant(c)
}

/// tr(b^3) = t^3 - 3 t tbar + 3
pub fn cf_b_cubed() -> IntPoly5 {
    t() * t() * t() - int(3) * t() * tb() + int(3)
}

/// tr(b^-3) = tbar^3 - 3 t tbar + 3
pub fn cf_binv_cubed() -> IntPoly5 {
    tb() * tb() * tb() - int(3) * t() * tb() + int(3)
}

/// tr(a^2 b) = t s - t tbar + r
pub fn cf_aab() -> IntPoly5 {
    t() * s() - t() * tb() + r()
}

/// tr(a^-2 b^-1) = tbar sbar - t tbar + r
pub fn cf_ainv2_binv() -> IntPoly5 {
    tb() * sb() - t() * tb() + r()
}

/// tr(a^-1 b^2) = t r - tbar^2 + sbar
pub fn cf_ainv_bb() -> IntPoly5 {
    t() * r() - tb() * tb() + sb()
}

/// tr(a b^-2) = tbar r - t^2 + s
pub fn cf_a_binv2() -> IntPoly5 {
    tb() * r() - t() * t() + s()
}

/// tr(a b a b^-1) = t sbar + (s + tbar) r + tbar (1 - t tbar)
pub fn cf_abab_inv() -> IntPoly5 {
    t() * sb() + (s() + tb()) * r() + tb() * (int(1) - t() * tb())
}

/// tr(a^-1 b^-1 a^-1 b) = tbar s + (t + sbar) r + t (1 - t tbar)
pub fn cf_ainvbinvainv_b() -> IntPoly5 {
    tb() * s() + (t() + sb()) * r() + t() * (int(1) - t() * tb())
}

/// The defining polynomial F of the hypersurface in C^5.
pub static F_POLY: Lazy<IntPoly5> = Lazy::new(|| {
    s() * s() * s() - sb() * sb() * sb()
        + (r() * tb() - int(2) * t() * t()) * s() * s()
        - (r() * t() - int(2) * tb() * tb()) * sb() * sb()
        + (t().pow4() + t() * t() * tb() + r() * r() * t()
            - r() * (t() * t() * tb() + int(3) * t()))
            * s()
        - (tb().pow4() + tb() * tb() * t() + r() * r() * tb()
            - r() * (tb() * tb() * t() + int(3) * tb()))
            * sb()
        + (t() * t() * t() - tb() * tb() * tb()) * (r() + int(1) - t() * tb())
});

impl IntPoly5 {
    fn pow4(&self) -> IntPoly5 {
        let sq = self * self;
        &sq * &sq
    }
}

pub fn f_poly() -> &'static IntPoly5 {
    &F_POLY
}

/// The collected expression one step before F: the eight closed forms
/// substituted symbolically into the trace expansion of K.
pub fn penultimate_expansion() -> IntPoly5 {
    let a = cf_a_binv2();
    let b = cf_ainv_bb();
    let c = cf_abab_inv();
    let d = cf_ainvbinvainv_b();
    let e = cf_aab();
    let g = cf_ainv2_binv();

    (r() * (t() - tb() * tb()) + tb() * a.clone()) * c
        + (r() * (t() * t() - tb()) - t() * b.clone()) * d
        + (r() * (t() * tb() - int(1)) - t() * a.clone()) * e
        + (r() * (int(1) - t() * tb()) + tb() * b.clone()) * g
        + (s() * s() - sb()) * a
        + (s() - sb() * sb()) * b
        + r() * tb() * (int(2) * sb() - s() * s())
        + r() * t() * (sb() * sb() - int(2) * s())
        + t() * t() * t()
        - tb() * tb() * tb()
}

/// The fully substituted explicit-products display, expanded exactly.
pub fn explicit_products_expansion() -> IntPoly5 {
    (r() * t() - t() * t() * tb() + tb() * s())
        * (t() * sb() + (s() + tb()) * r() + tb() * (int(1) - t() * tb()))
        + (t() * tb() * tb() - r() * tb() - t() * sb())
            * (tb() * s() + (t() + sb()) * r() + t() * (int(1) - t() * tb()))
        + (t() * t() * t() - r() - t() * s()) * (t() * s() - t() * tb() + r())
        + (r() + tb() * sb() - tb() * tb() * tb()) * (tb() * sb() - t() * tb() + r())
        + (s() * s() - sb()) * (tb() * r() - t() * t() + s())
        + (s() - sb() * sb()) * (t() * r() - tb() * tb() + sb())
        + r() * tb() * (int(2) * sb() - s() * s())
        + r() * t() * (sb() * sb() - int(2) * s())
        + t() * t() * t()
        - tb() * tb() * tb()
}

/// Certify that substituting the eight closed forms into the collected
/// trace expression reproduces F exactly. A mismatch is release-blocking.
pub fn verify_penultimate() -> Certificate {
    certify_equal("penultimate-vs-F", &penultimate_expansion(), f_poly())
}

/// Certify the paper-level explicit-products display against F.
pub fn verify_explicit_products() -> Certificate {
    certify_equal(
        "explicit-products-vs-F",
        &explicit_products_expansion(),
        f_poly(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::cplx;
    use proptest::prelude::*;

    #[test]
    fn basic_ring_ops() {
        let s2 = s() * s();
        assert_eq!(s2, IntPoly5::monomial([0, 0, 2, 0, 0], 1));
        let f = f_poly().clone();
        assert!((f.clone() - f).is_zero());
    }

    /// Independent expansion oracle: multiply by distributing one term of
    /// the left factor at a time through repeated shifted additions.
    fn mul_oracle(a: &IntPoly5, b: &IntPoly5) -> IntPoly5 {
        let mut acc = IntPoly5::zero();
        for (ea, ca) in a.sorted_terms() {
            for (eb, cb) in b.sorted_terms() {
                let mut exp = [0u8; 5];
                for i in 0..5 {
                    exp[i] = ea[i] + eb[i];
                }
                acc = acc + IntPoly5::monomial(exp, ca * cb);
            }
        }
        acc
    }

    #[test]
    fn product_matches_convolution_oracle() {
        let lhs = cf_aab();
        let rhs = {
            // tbar*sbar - t*tbar + r, with s -> sbar swap to vary terms
            tb() * sb() - t() * tb() + r()
        };
        assert_eq!(&lhs * &rhs, mul_oracle(&lhs, &rhs));
    }

    #[test]
    fn certificates_pass() {
        let c1 = verify_penultimate();
        assert!(c1.equal, "diff: {:?}", c1.diff);
        assert!(c1.diff.is_empty());
        let c2 = verify_explicit_products();
        assert!(c2.equal, "diff: {:?}", c2.diff);
        // Transitivity: both canonical expansions are identical term maps.
        assert_eq!(penultimate_expansion(), explicit_products_expansion());
    }

    #[test]
    fn mutation_control_breaks_certificate() {
        // Perturb one closed-form coefficient by +1.
        let bad_a = cf_a_binv2() + IntPoly5::constant(1);
        let b = cf_ainv_bb();
        let mutated = (r() * (t() - tb() * tb()) + tb() * bad_a.clone()) * cf_abab_inv()
            + (r() * (t() * t() - tb()) - t() * b.clone()) * cf_ainvbinvainv_b()
            + (r() * (t() * tb() - int(1)) - t() * bad_a.clone()) * cf_aab()
            + (r() * (int(1) - t() * tb()) + tb() * b.clone()) * cf_ainv2_binv()
            + (s() * s() - sb()) * bad_a
            + (s() - sb() * sb()) * b
            + r() * tb() * (int(2) * sb() - s() * s())
            + r() * t() * (sb() * sb() - int(2) * s())
            + t() * t() * t()
            - tb() * tb() * tb();
        let cert = certify_equal("mutated", &mutated, f_poly());
        assert!(!cert.equal);
        assert!(!cert.diff.is_empty());
    }

    #[test]
    fn dropping_final_summand_localizes_mismatch() {
        let tail = (t() * t() * t() - tb() * tb() * tb()) * (r() + int(1) - t() * tb());
        let truncated = f_poly() - &tail;
        let cert = certify_equal("truncated", &truncated, f_poly());
        assert!(!cert.equal);
        // The mismatch is exactly the dropped summand.
        let diff_poly = truncated - f_poly().clone();
        assert_eq!(diff_poly, -tail);
    }

    #[test]
    fn antisymmetry_of_f_is_exact() {
        assert_eq!(f_poly().bar_swap(), -f_poly().clone());
    }

    #[test]
    fn numeric_symbolic_coherence() {
        // Evaluating the exact polys at random complex points agrees with
        // a direct floating Horner evaluation.
        let mut stream = crate::rng::SeedStream::new(101);
        let polys = [
            f_poly().clone(),
            penultimate_expansion(),
            cf_abab_inv(),
            cf_b_cubed(),
        ];
        for _ in 0..100 {
            let vals = [
                stream.cgaussian(),
                stream.cgaussian(),
                stream.cgaussian(),
                stream.cgaussian(),
                stream.cgaussian(),
            ];
            for p in &polys {
                let direct: Cplx = p
                    .sorted_terms()
                    .iter()
                    .map(|(exp, c)| {
                        let mut term = cplx(*c as f64, 0.0);
                        for i in 0..5 {
                            for _ in 0..exp[i] {
                                term *= vals[i];
                            }
                        }
                        term
                    })
                    .sum();
                let fast = p.eval(&vals);
                assert!(
                    (direct - fast).norm() <= 1e-12 * (1.0 + direct.norm()),
                    "poly {p} at {vals:?}"
                );
            }
        }
    }

    #[test]
    fn certificate_json_schema() {
        let cert = verify_penultimate();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["equal"], serde_json::json!(true));
        assert!(json["lhs_terms"].as_array().unwrap().len() > 5);
        assert!(json["lhs_terms"][0]["exp"].as_array().unwrap().len() == 5);
    }

    fn small_poly() -> impl Strategy<Value = IntPoly5> {
        proptest::collection::vec(
            (
                proptest::array::uniform5(0u8..3),
                -4i64..5,
            ),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = IntPoly5::zero();
            for (exp, c) in terms {
                p = p + IntPoly5::monomial(exp, c);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            // associativity and distributivity, exact
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
