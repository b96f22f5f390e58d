//! Integral binary quadratic forms `a·x² + h·xy + b·y²`.
//!
//! Besides evaluation and the unimodular action, this module carries two
//! isomorphism oracles that are independent of the topograph walk: Gauss
//! reduction for definite forms and a bounded search for explicit witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::FormError;

/// The form `a·x² + h·xy + b·y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuadraticForm {
    pub a: BigInt,
    pub h: BigInt,
    pub b: BigInt,
}

impl BinaryQuadraticForm {
    pub fn new(a: impl Into<BigInt>, h: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            h: h.into(),
            b: b.into(),
        }
    }

    /// Rebuilds the form from its values on the superbase `(1,0), (0,1), (-1,-1)`.
    pub fn from_triple(t: &VertexTriple) -> Self {
        Self {
            a: t.qa.clone(),
            h: &t.qc - &t.qa - &t.qb,
            b: t.qb.clone(),
        }
    }

    /// Values on the marked superbase: `(F(1,0), F(0,1), F(1,1))`.
    pub fn triple(&self) -> VertexTriple {
        VertexTriple {
            qa: self.a.clone(),
            qb: self.b.clone(),
            qc: &self.a + &self.h + &self.b,
        }
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.h * x * y + &self.b * y * y
    }

    pub fn evaluate_i64(&self, x: i64, y: i64) -> BigInt {
        self.evaluate(&BigInt::from(x), &BigInt::from(y))
    }

    pub fn discriminant(&self) -> BigInt {
        &self.h * &self.h - BigInt::from(4) * &self.a * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.h.is_zero() && self.b.is_zero()
    }

    /// Returns `G` with `G(v) = F(P·v)` for every integer vector `v`.
    pub fn act(&self, p: &UnimodularMatrix) -> BinaryQuadraticForm {
        let [[p11, p12], [p21, p22]] = &p.entries;
        let two = BigInt::from(2);
        let a = self.evaluate(p11, p21);
        let b = self.evaluate(p12, p22);
        let h = &two * &self.a * p11 * p12
            + &self.h * (p11 * p22 + p12 * p21)
            + &two * &self.b * p21 * p22;
        BinaryQuadraticForm { a, h, b }
    }

    pub fn negated(&self) -> BinaryQuadraticForm {
        BinaryQuadraticForm {
            a: -&self.a,
            h: -&self.h,
            b: -&self.b,
        }
    }

    /// Same form with the cross term negated; realised by `(x, y) -> (x, -y)`.
    pub fn mirrored(&self) -> BinaryQuadraticForm {
        BinaryQuadraticForm {
            a: self.a.clone(),
            h: -&self.h,
            b: self.b.clone(),
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> BinaryQuadraticForm {
        BinaryQuadraticForm {
            a: &self.a * factor,
            h: &self.h * factor,
            b: &self.b * factor,
        }
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.h, self.b)
    }
}

/// Values of a form on a superbase `(v1, v2, -v1-v2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexTriple {
    pub qa: BigInt,
    pub qb: BigInt,
    pub qc: BigInt,
}

impl VertexTriple {
    pub fn new(qa: impl Into<BigInt>, qb: impl Into<BigInt>, qc: impl Into<BigInt>) -> Self {
        Self {
            qa: qa.into(),
            qb: qb.into(),
            qc: qc.into(),
        }
    }

    pub fn values(&self) -> [BigInt; 3] {
        [self.qa.clone(), self.qb.clone(), self.qc.clone()]
    }

    pub fn sorted(&self) -> [BigInt; 3] {
        let mut v = self.values();
        v.sort();
        v
    }
}

/// The fourth value around an edge: the regions `qa`, `qb` share the edge,
/// `c_opposite` sits across one end and the result across the other end.
pub fn neighbor_value(qa: &BigInt, qb: &BigInt, c_opposite: &BigInt) -> BigInt {
    BigInt::from(2) * (qa + qb) - c_opposite
}

/// A 2×2 integer matrix of determinant ±1, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    entries: [[BigInt; 2]; 2],
}

impl UnimodularMatrix {
    pub fn new(
        p11: impl Into<BigInt>,
        p12: impl Into<BigInt>,
        p21: impl Into<BigInt>,
        p22: impl Into<BigInt>,
    ) -> Result<Self, FormError> {
        let entries = [[p11.into(), p12.into()], [p21.into(), p22.into()]];
        let det = &entries[0][0] * &entries[1][1] - &entries[0][1] * &entries[1][0];
        if det.abs() != BigInt::one() {
            return Err(FormError::NonUnimodular { det });
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1).expect("identity is unimodular")
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.entries
    }

    pub fn determinant(&self) -> BigInt {
        let [[p11, p12], [p21, p22]] = &self.entries;
        p11 * p22 - p12 * p21
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &UnimodularMatrix) -> UnimodularMatrix {
        let l = &self.entries;
        let r = &rhs.entries;
        let cell = |i: usize, j: usize| &l[i][0] * &r[0][j] + &l[i][1] * &r[1][j];
        UnimodularMatrix {
            entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        let det = self.determinant();
        let [[p11, p12], [p21, p22]] = &self.entries;
        // det is ±1, so dividing is multiplying by det
        UnimodularMatrix {
            entries: [[p22 * &det, -p12 * &det], [-p21 * &det, p11 * &det]],
        }
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[p11, p12], [p21, p22]] = &self.entries;
        write!(f, "[[{p11},{p12}],[{p21},{p22}]]")
    }
}

/// Gauss reduction of a definite form.
///
/// Positive definite input reduces to the unique `(a, h, b)` with
/// `|h| <= a <= b` and `h >= 0` whenever `|h| = a` or `a = b`. Negative
/// definite input is negated, reduced and negated back. Only proper
/// equivalence is respected; see [`gauss_class_key`] for the GL₂(ℤ) class.
pub fn gauss_reduce_definite(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm, FormError> {
    let disc = f.discriminant();
    if !disc.is_negative() {
        return Err(FormError::NotDefinite { discriminant: disc });
    }
    if f.a.is_negative() {
        return Ok(reduce_positive(f.negated()).negated());
    }
    Ok(reduce_positive(f.clone()))
}

fn reduce_positive(mut f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    let two = BigInt::from(2);
    loop {
        // normalize: -a < h <= a, via x -> x + m·y
        let two_a = &two * &f.a;
        if f.h > f.a || -&f.h >= f.a {
            let shift = (&f.a - &f.h).div_floor(&two_a);
            let new_h = &f.h + &two_a * &shift;
            let new_b = &f.a * &shift * &shift + &f.h * &shift + &f.b;
            f.h = new_h;
            f.b = new_b;
        }
        if f.a > f.b {
            // (x, y) -> (-y, x)
            std::mem::swap(&mut f.a, &mut f.b);
            f.h = -f.h;
            continue;
        }
        if f.a == f.b && f.h.is_negative() {
            f.h = -f.h;
        }
        return f;
    }
}

/// Key for the GL₂(ℤ) class of a definite form.
///
/// Improper equivalence is folded in by reducing both `F` and its
/// cross-term mirror and keeping the smaller result.
pub fn gauss_class_key(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm, FormError> {
    let direct = gauss_reduce_definite(f)?;
    let mirror = gauss_reduce_definite(&f.mirrored())?;
    Ok(direct.min(mirror))
}

/// Searches unimodular `P` with entries in `[-bound, bound]` and
/// `f0.act(P) == f1`. `None` does not certify non-isomorphism.
pub fn bounded_isomorphism_search(
    f0: &BinaryQuadraticForm,
    f1: &BinaryQuadraticForm,
    bound: u32,
) -> Option<UnimodularMatrix> {
    let bound = i64::from(bound);
    if f0.discriminant() != f1.discriminant() {
        return None;
    }
    let range = || (-bound..=bound).flat_map(move |x| (-bound..=bound).map(move |y| (x, y)));
    let first_columns: Vec<(i64, i64)> = range()
        .filter(|&(x, y)| f0.evaluate_i64(x, y) == f1.a)
        .collect();
    let second_columns: Vec<(i64, i64)> = range()
        .filter(|&(x, y)| f0.evaluate_i64(x, y) == f1.b)
        .collect();
    for &(p11, p21) in &first_columns {
        for &(p12, p22) in &second_columns {
            if (p11 * p22 - p12 * p21).abs() != 1 {
                continue;
            }
            let p = UnimodularMatrix::new(p11, p12, p21, p22).expect("determinant checked");
            if f0.act(&p) == *f1 {
                return Some(p);
            }
        }
    }
    None
}

/// Counts `(x, y)` with `|x|, |y| <= coord_bound` and `F(x, y) = target`.
pub fn representation_census(f: &BinaryQuadraticForm, target: &BigInt, coord_bound: u32) -> u64 {
    let bound = i64::from(coord_bound);
    let mut count = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if f.evaluate_i64(x, y) == *target {
                count += 1;
            }
        }
    }
    count
}
