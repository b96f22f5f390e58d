//! Seifert matrices and symmetrized Seifert forms of the surface pairs
//! indexed by `(p, q, k, n)`, the numeric non-isotopy criteria built on
//! them, and the two affine symmetries `tau`, `rho` of the `(k, n)` plane.
//!
//! Forms are kept as half-forms `(pq, h, b)`: the symmetrized form is twice
//! this, and doubling does not change isomorphism questions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::SeifertError;
use crate::forms::BinaryQuadraticForm;
use crate::topograph::{invariant, TopographInvariant};

/// Exact rational number used for every bound that involves a division.
pub type ExactRational = BigRational;

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactRational {
    BigRational::new(n.into(), d.into())
}

/// Positive `(p, q)` plus whether a mirror was needed to get there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPair {
    pub p: BigInt,
    pub q: BigInt,
    pub mirrored: bool,
}

/// Makes `p, q` positive. Flipping the sign of exactly one of them is a
/// mirror image, which negates the forms.
pub fn normalize_params(p: &BigInt, q: &BigInt) -> Result<NormalizedPair, SeifertError> {
    if p.is_zero() || q.is_zero() {
        return Err(SeifertError::ZeroParameter);
    }
    if !p.gcd(q).is_one() {
        return Err(SeifertError::NotCoprime {
            p: p.clone(),
            q: q.clone(),
        });
    }
    Ok(NormalizedPair {
        p: p.abs(),
        q: q.abs(),
        mirrored: p.is_negative() != q.is_negative(),
    })
}

/// The `(r, s)` with `ps - qr = 1` and `1 <= s < q` (`s = 0` when `q = 1`).
pub fn compute_rs(p: &BigInt, q: &BigInt) -> Result<(BigInt, BigInt), SeifertError> {
    if !p.is_positive() || !q.is_positive() {
        return Err(SeifertError::ZeroParameter);
    }
    let ext = p.extended_gcd(q);
    if !ext.gcd.is_one() {
        return Err(SeifertError::NotCoprime {
            p: p.clone(),
            q: q.clone(),
        });
    }
    let s = ext.x.mod_floor(q);
    let r = (p * &s - 1) / q;
    Ok((r, s))
}

/// Parameters of one surface pair, in the positive frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertParams {
    pub p: BigInt,
    pub q: BigInt,
    pub k: BigInt,
    pub n: BigInt,
    pub r: BigInt,
    pub s: BigInt,
    /// The requested surface is the mirror of the one described by
    /// `(p, q, k, n)`; its forms are the negatives of these.
    pub mirrored: bool,
}

impl SeifertParams {
    /// Accepts any nonzero coprime `p, q`. A mirror input `(p, -q, k, -n)` is
    /// stored as `(p, q, k, n)` with `mirrored` set.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        k: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self, SeifertError> {
        let norm = normalize_params(&p.into(), &q.into())?;
        let n = n.into();
        let (r, s) = compute_rs(&norm.p, &norm.q)?;
        Ok(Self {
            n: if norm.mirrored { -n } else { n },
            p: norm.p,
            q: norm.q,
            k: k.into(),
            r,
            s,
            mirrored: norm.mirrored,
        })
    }

    /// Same `(p, q, r, s)` frame with different `(k, n)`.
    pub fn with_kn(&self, k: BigInt, n: BigInt) -> Self {
        Self {
            k,
            n,
            ..self.clone()
        }
    }

    pub fn kn(&self) -> (BigInt, BigInt) {
        (self.k.clone(), self.n.clone())
    }

    /// `2kp ≡ 1 (mod q)`: the congruence lines where the forms always agree.
    pub fn on_congruence_line(&self) -> bool {
        (BigInt::from(2) * &self.k * &self.p - BigInt::from(1))
            .mod_floor(&self.q)
            .is_zero()
    }
}

pub type Matrix2 = [[BigInt; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrixPair {
    pub v0: Matrix2,
    pub v1: Matrix2,
}

pub fn seifert_matrices(params: &SeifertParams) -> SeifertMatrixPair {
    let SeifertParams {
        p, q, k, n, r, s, ..
    } = params;
    let pq = p * q;
    let kp = k * p;
    let v1 = [[pq.clone(), -&kp], [BigInt::one() - &kp, n.clone()]];
    let v0 = [
        [pq, q * r - &kp],
        [p * s - &kp, r * s - BigInt::from(2) * k * r + n],
    ];
    SeifertMatrixPair { v0, v1 }
}

/// Half of the quadratic form of `V + Vᵀ`.
pub fn symmetrized_half_form(v: &Matrix2) -> BinaryQuadraticForm {
    BinaryQuadraticForm {
        a: v[0][0].clone(),
        h: &v[0][1] + &v[1][0],
        b: v[1][1].clone(),
    }
}

/// `(Q0, Q1)` as half-forms, negated for mirrored parameters.
pub fn seifert_forms(params: &SeifertParams) -> (BinaryQuadraticForm, BinaryQuadraticForm) {
    let SeifertParams {
        p, q, k, n, r, s, ..
    } = params;
    let two = BigInt::from(2);
    let q0 = BinaryQuadraticForm {
        a: p * q,
        h: p * s + q * r - &two * k * p,
        b: r * s - &two * k * r + n,
    };
    let q1 = BinaryQuadraticForm {
        a: p * q,
        h: BigInt::one() - &two * k * p,
        b: n.clone(),
    };
    if params.mirrored {
        (q0.negated(), q1.negated())
    } else {
        (q0, q1)
    }
}

/// Invariants of `Q0`, `Q1` and `-Q1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    pub q0: TopographInvariant,
    pub q1: TopographInvariant,
    pub neg_q1: TopographInvariant,
}

pub fn form_invariants(params: &SeifertParams) -> Result<FormInvariants, SeifertError> {
    let (q0, q1) = seifert_forms(params);
    Ok(FormInvariants {
        q0: invariant(&q0)?,
        q1: invariant(&q1)?,
        neg_q1: invariant(&q1.negated())?,
    })
}

impl FormInvariants {
    pub fn distinguishable(&self) -> bool {
        self.q0 != self.q1
    }

    pub fn oriented_pair_distinct(&self) -> bool {
        self.q0 != self.q1 && self.q0 != self.neg_q1
    }
}

/// `Q0` and `Q1` are not isomorphic over ℤ.
pub fn distinguishable(params: &SeifertParams) -> Result<bool, SeifertError> {
    let (q0, q1) = seifert_forms(params);
    Ok(invariant(&q0)? != invariant(&q1)?)
}

/// `Q0` is isomorphic to neither `Q1` nor `-Q1`.
pub fn oriented_pair_distinct(params: &SeifertParams) -> Result<bool, SeifertError> {
    Ok(form_invariants(params)?.oriented_pair_distinct())
}

/// `n - k(pk - 1)/q`, the signed height above the parabola; kept by `tau` and `rho`.
pub fn parabola_offset(params: &SeifertParams) -> ExactRational {
    let SeifertParams { p, q, k, n, .. } = params;
    ExactRational::from_integer(n.clone()) - ratio(k * (p * k - 1), q.clone())
}

/// Lower bound on `n` above which the main non-isotopy theorem applies.
pub fn main_bound_threshold(params: &SeifertParams) -> ExactRational {
    let SeifertParams { p, q, k, .. } = params;
    let pq = p * q;
    ratio(k * (p * k - 1), q.clone()) + ratio(pq.clone(), 12) - ratio(1, 6)
        + ratio(1, BigInt::from(2) * pq)
}

/// `2kp ≢ 1 (mod q)` and `n` at or above [`main_bound_threshold`]; needs `p, q > 1`.
pub fn thm_main_bound(params: &SeifertParams) -> bool {
    let one = BigInt::one();
    if params.p <= one || params.q <= one || params.on_congruence_line() {
        return false;
    }
    ExactRational::from_integer(params.n.clone()) >= main_bound_threshold(params)
}

/// `q·n = k(pk - 1)`: the Alexander polynomial is trivial.
pub fn parabola_alexander_trivial(params: &SeifertParams) -> bool {
    let SeifertParams { p, q, k, n, .. } = params;
    q * n == k * (p * k - 1)
}

/// `C = p(nq - k(pk - 1))`, with `Δ(t) = C·t² + (1 - 2C)·t + C`.
pub fn alexander_coefficient(params: &SeifertParams) -> BigInt {
    let SeifertParams { p, q, k, n, .. } = params;
    p * (n * q - k * (p * k - 1))
}

/// Coefficients `[c0, c1, c2]` of `det(t·V - Vᵀ)`.
pub fn alexander_polynomial(v: &Matrix2) -> [BigInt; 3] {
    let [[a, b], [c, d]] = v;
    let det = a * d - b * c;
    let middle = b * b + c * c - BigInt::from(2) * a * d;
    [det.clone(), middle, det]
}

/// The `w` with `0 <= w <= u/2` and `w ≡ ±v (mod u)`.
pub fn bracket_reduce(v: &BigInt, u: &BigInt) -> BigInt {
    let w = v.mod_floor(u);
    let other = u - &w;
    w.min(other)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaBounds {
    /// `(u/2 - 1)² / 3`
    pub t0: ExactRational,
    /// Sharper bound: max over `c >= 2` of `([v0]² - [c·v1]²) / (c² - 1)`.
    pub t1: ExactRational,
}

/// Bounds on `t` beyond which `(ux + v0·y)² + ty²` and `(ux + v1·y)² + ty²`
/// are not isomorphic. The inputs are swapped if needed so that
/// `[v0]_u < [v1]_u`.
pub fn lemma_bounds(u: &BigInt, v0: &BigInt, v1: &BigInt) -> Result<LemmaBounds, SeifertError> {
    if !u.is_positive() || u.is_odd() {
        return Err(SeifertError::InvalidModulus(u.clone()));
    }
    let (mut w0, mut w1) = (bracket_reduce(v0, u), bracket_reduce(v1, u));
    if w0 == w1 {
        return Err(SeifertError::CongruentInputs { u: u.clone() });
    }
    if w0 > w1 {
        std::mem::swap(&mut w0, &mut w1);
    }
    let half = u / 2;
    let t0 = ratio((&half - 1) * (&half - 1), 3);
    // [c·v1]_u has period dividing u in c, while c² - 1 grows; c = u gives a
    // nonnegative term, so the maximum is attained in 2..=u+1.
    let upper = u + 1;
    let mut c = BigInt::from(2);
    let mut t1: Option<ExactRational> = None;
    while c <= upper {
        let cw = bracket_reduce(&(&c * &w1), u);
        let term = ratio(&w0 * &w0 - &cw * &cw, &c * &c - 1);
        if t1.as_ref().is_none_or(|best| term > *best) {
            t1 = Some(term);
        }
        c += 1;
    }
    Ok(LemmaBounds {
        t0,
        t1: t1.expect("u >= 2 gives at least one c"),
    })
}

/// `(u, v0, v1, t)` with `2pq·Q_i(x, y) = (ux + v_i·y)² + t·y²` for the
/// doubled forms.
pub fn lemma_parameters(params: &SeifertParams) -> (BigInt, BigInt, BigInt, BigInt) {
    let SeifertParams { p, q, k, n, r, .. } = params;
    let two = BigInt::from(2);
    let pq = p * q;
    let v1 = BigInt::one() - &two * k * p;
    let v0 = &v1 + &two * q * r;
    let t = BigInt::from(4) * &pq * n - &v1 * &v1;
    (&two * pq, v0, v1, t)
}

/// Threshold on `|k|` for `n = 0`:
/// `max((q(1 + p²) + 1) / 2p, (q² + 2) / 2p)`.
pub fn n0_threshold(p: &BigInt, q: &BigInt) -> ExactRational {
    let two_p = BigInt::from(2) * p;
    let first = ratio(q * (BigInt::one() + p * p) + 1, two_p.clone());
    let second = ratio(q * q + 2, two_p);
    first.max(second)
}

/// `n = 0`, `|k|` above [`n0_threshold`] and off the congruence lines.
pub fn thm_n0_applies(params: &SeifertParams) -> bool {
    let one = BigInt::one();
    params.p > one
        && params.q > one
        && params.n.is_zero()
        && !params.on_congruence_line()
        && ExactRational::from_integer(params.k.abs()) > n0_threshold(&params.p, &params.q)
}

/// `(k, n) -> (k + q, n + 2kp + pq - 1)`
pub fn tau(params: &SeifertParams) -> SeifertParams {
    let SeifertParams { p, q, k, n, .. } = params;
    let k2 = k + q;
    let n2 = n + BigInt::from(2) * k * p + p * q - 1;
    params.with_kn(k2, n2)
}

/// Inverse of [`tau`].
pub fn tau_inverse(params: &SeifertParams) -> SeifertParams {
    let SeifertParams { p, q, k, n, .. } = params;
    let k2 = k - q;
    let n2 = n - BigInt::from(2) * &k2 * p - p * q + 1;
    params.with_kn(k2, n2)
}

/// `(k, n) -> (s - k, n - 2kr + rs)`; an involution that swaps `Q0` and `Q1`.
pub fn rho(params: &SeifertParams) -> SeifertParams {
    let SeifertParams { k, n, r, s, .. } = params;
    let k2 = s - k;
    let n2 = n - BigInt::from(2) * k * r + r * s;
    params.with_kn(k2, n2)
}

/// Canonical label of a `⟨tau, rho⟩`-orbit in the `(k, n)` plane: the sorted
/// pair of `(m, offset + m(pm - 1)/q)` for `m = k mod q` and `m = (s - k) mod q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey(pub [(BigInt, ExactRational); 2]);

pub fn orbit_key(params: &SeifertParams) -> OrbitKey {
    let SeifertParams { p, q, k, s, .. } = params;
    let offset = parabola_offset(params);
    let anchor = |m: BigInt| {
        let lift = ratio(&m * (p * &m - 1), q.clone());
        (m, &offset + lift)
    };
    let mut pair = [anchor(k.mod_floor(q)), anchor((s - k).mod_floor(q))];
    pair.sort();
    OrbitKey(pair)
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(m0, o0), (m1, o1)] = &self.0;
        write!(f, "{m0}:{o0}|{m1}:{o1}")
    }
}

impl FromStr for OrbitKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entry = |t: &str| -> Result<(BigInt, ExactRational), String> {
            let (m, o) = t
                .split_once(':')
                .ok_or_else(|| format!("bad key entry {t:?}"))?;
            let m = m.parse::<BigInt>().map_err(|e| e.to_string())?;
            let o = o.parse::<ExactRational>().map_err(|e| e.to_string())?;
            Ok((m, o))
        };
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| format!("bad orbit key {s:?}"))?;
        let mut pair = [entry(a)?, entry(b)?];
        pair.sort();
        Ok(OrbitKey(pair))
    }
}
