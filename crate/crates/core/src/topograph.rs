//! Complete GL₂(ℤ) invariant of integral binary quadratic forms.
//!
//! The walk starts at the vertex of the marked superbase and classifies the
//! form by where it ends up: a well (definite forms), a periodic river
//! (indefinite, no zero values), a single lake (semi-definite), two adjacent
//! lakes (a weir) or two lakes joined by a finite river (a lake pair).
//!
//! Every payload is canonical, so two forms are isomorphic over ℤ exactly
//! when their invariants compare equal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::TopographError;
use crate::forms::{BinaryQuadraticForm, VertexTriple};

pub const DEFAULT_RIVER_CAP: usize = 1_000_000;

/// Limits applied while walking a topograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopographConfig {
    /// Maximum number of river steps before giving up.
    pub river_cap: usize,
}

impl Default for TopographConfig {
    fn default() -> Self {
        Self {
            river_cap: DEFAULT_RIVER_CAP,
        }
    }
}

/// Coarse shape of a topograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopographKind {
    Well,
    River,
    Lake,
    Weir,
    LakePair,
    Zero,
}

impl TopographKind {
    pub const ALL: [TopographKind; 6] = [
        TopographKind::Well,
        TopographKind::River,
        TopographKind::Lake,
        TopographKind::Weir,
        TopographKind::LakePair,
        TopographKind::Zero,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TopographKind::Well => "WELL",
            TopographKind::River => "RIVER",
            TopographKind::Lake => "LAKE",
            TopographKind::Weir => "WEIR",
            TopographKind::LakePair => "LAKEPAIR",
            TopographKind::Zero => "ZERO",
        }
    }

    /// True for the kinds whose form takes the value 0 on a nonzero vector.
    pub fn represents_zero(self) -> bool {
        matches!(
            self,
            TopographKind::Lake
                | TopographKind::Weir
                | TopographKind::LakePair
                | TopographKind::Zero
        )
    }
}

impl fmt::Display for TopographKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TopographKind {
    type Err = TopographError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TopographKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| TopographError::Parse(s.to_string()))
    }
}

/// The canonical invariant. Equality of invariants is isomorphism of forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopographInvariant {
    /// Ascending values around the well vertex, all of one sign.
    Well([BigInt; 3]),
    /// Lexicographically least ascending vertex triple along one river period.
    River([BigInt; 3]),
    /// Common value of every region adjacent to the single lake.
    Lake(BigInt),
    /// Positive value of the regions flanking two adjacent lakes.
    Weir(BigInt),
    /// For each lake, the adjacent pair `(u, v)` with `u < 0 < v` where the
    /// river leaves it; pairs sorted.
    LakePair([[BigInt; 2]; 2]),
    Zero,
}

impl TopographInvariant {
    pub fn kind(&self) -> TopographKind {
        match self {
            TopographInvariant::Well(_) => TopographKind::Well,
            TopographInvariant::River(_) => TopographKind::River,
            TopographInvariant::Lake(_) => TopographKind::Lake,
            TopographInvariant::Weir(_) => TopographKind::Weir,
            TopographInvariant::LakePair(_) => TopographKind::LakePair,
            TopographInvariant::Zero => TopographKind::Zero,
        }
    }

    /// Invariant of the negated form. A river is walked again from its
    /// canonical vertex, since the least triple of `-F` sits elsewhere.
    pub fn negated(&self) -> TopographInvariant {
        let neg3 = |t: &[BigInt; 3]| {
            let mut n = [-&t[0], -&t[1], -&t[2]];
            n.sort();
            n
        };
        match self {
            TopographInvariant::Well(t) => TopographInvariant::Well(neg3(t)),
            TopographInvariant::River([x, y, z]) => {
                let vertex = VertexTriple::new(-x, -y, -z);
                match trace_river(&vertex, &TopographConfig::default()) {
                    Ok(RiverOutcome::Periodic { canonical, .. }) => {
                        TopographInvariant::River(canonical)
                    }
                    other => panic!("negating {self}: expected a periodic river, got {other:?}"),
                }
            }
            TopographInvariant::Lake(v) => TopographInvariant::Lake(-v),
            TopographInvariant::Weir(v) => TopographInvariant::Weir(v.clone()),
            TopographInvariant::LakePair([p, q]) => {
                let mut pairs = [[-&p[1], -&p[0]], [-&q[1], -&q[0]]];
                pairs.sort();
                TopographInvariant::LakePair(pairs)
            }
            TopographInvariant::Zero => TopographInvariant::Zero,
        }
    }
}

impl fmt::Display for TopographInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopographInvariant::Well([x, y, z]) => write!(f, "WELL[{x},{y},{z}]"),
            TopographInvariant::River([x, y, z]) => write!(f, "RIVER[{x},{y},{z}]"),
            TopographInvariant::Lake(v) => write!(f, "LAKE[{v}]"),
            TopographInvariant::Weir(v) => write!(f, "WEIR[{v}]"),
            TopographInvariant::LakePair([[a, b], [c, d]]) => {
                write!(f, "LAKEPAIR[[{a},{b}],[{c},{d}]]")
            }
            TopographInvariant::Zero => f.write_str("ZERO"),
        }
    }
}

impl FromStr for TopographInvariant {
    type Err = TopographError;

    /// Parses the `Display` form. `LAKE[0]` is accepted as the zero form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TopographError::Parse(s.to_string());
        let s = s.trim();
        if s == "ZERO" {
            return Ok(TopographInvariant::Zero);
        }
        let open = s.find('[').ok_or_else(err)?;
        let (tag, body) = s.split_at(open);
        let numbers: Vec<BigInt> = body
            .split(['[', ']', ','])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        let three = |n: &[BigInt]| -> Result<[BigInt; 3], TopographError> {
            match n {
                [x, y, z] => Ok([x.clone(), y.clone(), z.clone()]),
                _ => Err(err()),
            }
        };
        match tag {
            "WELL" => Ok(TopographInvariant::Well(three(&numbers)?)),
            "RIVER" => Ok(TopographInvariant::River(three(&numbers)?)),
            "LAKE" => match numbers.as_slice() {
                [v] if v.is_zero() => Ok(TopographInvariant::Zero),
                [v] => Ok(TopographInvariant::Lake(v.clone())),
                _ => Err(err()),
            },
            "WEIR" => match numbers.as_slice() {
                [v] => Ok(TopographInvariant::Weir(v.clone())),
                _ => Err(err()),
            },
            "LAKEPAIR" => match numbers.as_slice() {
                [a, b, c, d] => Ok(TopographInvariant::LakePair([
                    [a.clone(), b.clone()],
                    [c.clone(), d.clone()],
                ])),
                _ => Err(err()),
            },
            _ => Err(err()),
        }
    }
}

/// Result of descending from an all-positive vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descent {
    /// Ascending triple at a well vertex, `m3 <= m1 + m2`.
    Well([BigInt; 3]),
    /// A value `<= 0` appeared; the vertex that contains it.
    Crossed([BigInt; 3]),
}

/// Walks downhill from a vertex with three positive values.
///
/// Each step replaces the largest value `m3 > m1 + m2` by `2(m1 + m2) - m3`.
/// For a definite form this always ends in [`Descent::Well`].
pub fn descend(t: &VertexTriple) -> Result<Descent, TopographError> {
    let mut v = t.sorted();
    if !v.iter().all(Signed::is_positive) {
        return Err(TopographError::NotAllPositive(t.values()));
    }
    loop {
        let sum = &v[0] + &v[1];
        if v[2] <= sum {
            return Ok(Descent::Well(v));
        }
        let next = BigInt::from(2) * sum - &v[2];
        if !next.is_positive() {
            return Ok(Descent::Crossed([v[0].clone(), v[1].clone(), next]));
        }
        v[2] = next;
        v.sort();
    }
}

/// Position along a river: the regions on either bank at the current vertex,
/// plus the newest region. The frontier lies on one of the two banks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RiverState {
    pub positive: BigInt,
    pub negative: BigInt,
    pub frontier: BigInt,
    pub step: usize,
}

impl RiverState {
    fn same_position(&self, other: &RiverState) -> bool {
        self.frontier == other.frontier
            && self.positive == other.positive
            && self.negative == other.negative
    }

    /// The three regions around the current vertex, ascending.
    pub fn vertex(&self) -> [BigInt; 3] {
        let mut v = [
            self.positive.clone(),
            self.negative.clone(),
            self.frontier.clone(),
        ];
        v.sort();
        v
    }

    /// Crosses the river edge that separates the frontier from the opposite bank.
    pub fn advance(&mut self) {
        let two = BigInt::from(2);
        if self.frontier.is_positive() {
            let next = &two * (&self.negative + &self.frontier) - &self.positive;
            self.positive = std::mem::replace(&mut self.frontier, next);
        } else {
            let next = &two * (&self.positive + &self.frontier) - &self.negative;
            self.negative = std::mem::replace(&mut self.frontier, next);
        }
        self.step += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RiverOutcome {
    /// The river closed up; `canonical` is the least ascending vertex triple
    /// over one period of `period` steps.
    Periodic {
        canonical: [BigInt; 3],
        period: usize,
    },
    /// A zero value was reached after `steps` steps; `vertex` holds it.
    ReachesLake { vertex: [BigInt; 3], steps: usize },
}

/// Follows the river through the vertex `t`.
pub fn trace_river(
    t: &VertexTriple,
    config: &TopographConfig,
) -> Result<RiverOutcome, TopographError> {
    let [min, mid, max] = t.sorted();
    if min.is_zero() || mid.is_zero() || max.is_zero() {
        return Ok(RiverOutcome::ReachesLake {
            vertex: [min, mid, max],
            steps: 0,
        });
    }
    if !(min.is_negative() && max.is_positive()) {
        return Err(TopographError::NotARiver);
    }
    walk_river(
        RiverState {
            positive: max,
            negative: min,
            frontier: mid,
            step: 0,
        },
        config,
    )
}

/// Each state is a vertex of the river plus a direction of travel, so the walk
/// on a periodic river comes back to its starting state after one period.
fn walk_river(
    mut state: RiverState,
    config: &TopographConfig,
) -> Result<RiverOutcome, TopographError> {
    let start = state.clone();
    let first_step = state.step;
    let mut canonical: Option<[BigInt; 3]> = None;
    loop {
        if state.frontier.is_zero() {
            return Ok(RiverOutcome::ReachesLake {
                vertex: state.vertex(),
                steps: state.step,
            });
        }
        if state.step > first_step && state.same_position(&start) {
            return Ok(RiverOutcome::Periodic {
                canonical: canonical.expect("a period has at least one vertex"),
                period: state.step - first_step,
            });
        }
        if state.step - first_step >= config.river_cap {
            return Err(TopographError::PeriodCapExceeded {
                cap: config.river_cap,
            });
        }
        let vertex = state.vertex();
        if canonical.as_ref().is_none_or(|best| vertex < *best) {
            canonical = Some(vertex);
        }
        state.advance();
    }
}

/// Canonical pair flanking a lake whose adjacent values include `a` and `b`.
///
/// The adjacent values form an arithmetic progression with step `|b - a|`;
/// the result is the consecutive pair `(a', b')` with `a' <= 0 < b'`.
/// `a' == 0` means a second lake sits next to the first (a weir).
pub fn reduce_lake_adjacent(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt), TopographError> {
    if a == b {
        return Err(TopographError::EqualValues(a.clone()));
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let step = hi - lo;
    let residue = lo.mod_floor(&step);
    let low = if residue.is_zero() {
        residue
    } else {
        residue - &step
    };
    let high = &low + &step;
    Ok((low, high))
}

/// The complete invariant with default limits.
pub fn invariant(f: &BinaryQuadraticForm) -> Result<TopographInvariant, TopographError> {
    invariant_with(f, &TopographConfig::default())
}

pub fn invariant_with(
    f: &BinaryQuadraticForm,
    config: &TopographConfig,
) -> Result<TopographInvariant, TopographError> {
    if f.is_zero() {
        return Ok(TopographInvariant::Zero);
    }
    let start = f.triple();
    let sorted = start.sorted();
    let vertex = if sorted[0].is_positive() {
        match descend(&start)? {
            Descent::Well(w) => return Ok(TopographInvariant::Well(w)),
            Descent::Crossed(v) => v,
        }
    } else if sorted[2].is_negative() {
        let flipped = VertexTriple::new(-&start.qa, -&start.qb, -&start.qc);
        match descend(&flipped)? {
            Descent::Well(w) => {
                let mut w = [-&w[0], -&w[1], -&w[2]];
                w.sort();
                return Ok(TopographInvariant::Well(w));
            }
            Descent::Crossed([x, y, z]) => [-x, -y, -z],
        }
    } else {
        sorted
    };

    let lake_vertex = if vertex.iter().any(Zero::is_zero) {
        vertex
    } else {
        let [x, y, z] = vertex;
        match trace_river(&VertexTriple::new(x, y, z), config)? {
            RiverOutcome::Periodic { canonical, .. } => {
                return Ok(TopographInvariant::River(canonical))
            }
            RiverOutcome::ReachesLake { vertex, .. } => vertex,
        }
    };
    lake_invariant(lake_vertex, config)
}

/// Finishes the classification from a vertex that touches a lake.
fn lake_invariant(
    vertex: [BigInt; 3],
    config: &TopographConfig,
) -> Result<TopographInvariant, TopographError> {
    let mut by_abs = vertex.to_vec();
    by_abs.sort_by_key(|v| v.abs());
    let (x, y) = (&by_abs[1], &by_abs[2]);
    if x == y {
        return Ok(TopographInvariant::Lake(x.clone()));
    }
    let (low, high) = reduce_lake_adjacent(x, y)?;
    if low.is_zero() {
        return Ok(TopographInvariant::Weir(high));
    }
    let start = RiverState {
        frontier: BigInt::from(2) * (&low + &high),
        positive: high.clone(),
        negative: low.clone(),
        step: 0,
    };
    let far = match walk_river(start, config)? {
        RiverOutcome::ReachesLake { vertex, .. } => vertex,
        // a river leaving a lake always ends in another lake
        RiverOutcome::Periodic { .. } => return Err(TopographError::NotARiver),
    };
    let mut far_pair: Vec<BigInt> = far.into_iter().filter(|v| !v.is_zero()).collect();
    far_pair.sort();
    let mut pairs = [[low, high], [far_pair[0].clone(), far_pair[1].clone()]];
    pairs.sort();
    Ok(TopographInvariant::LakePair(pairs))
}

/// Shape predicted from the discriminant and leading coefficient alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictedType {
    PositiveWell,
    NegativeWell,
    Zero,
    Lake,
    River,
    WeirOrLakePair,
}

impl PredictedType {
    pub fn admits(self, inv: &TopographInvariant) -> bool {
        match (self, inv) {
            (PredictedType::PositiveWell, TopographInvariant::Well(t)) => t[0].is_positive(),
            (PredictedType::NegativeWell, TopographInvariant::Well(t)) => t[2].is_negative(),
            (PredictedType::Zero, TopographInvariant::Zero) => true,
            (PredictedType::Lake, TopographInvariant::Lake(_)) => true,
            (PredictedType::River, TopographInvariant::River(_)) => true,
            (
                PredictedType::WeirOrLakePair,
                TopographInvariant::Weir(_) | TopographInvariant::LakePair(_),
            ) => true,
            _ => false,
        }
    }
}

pub fn classify_by_discriminant(f: &BinaryQuadraticForm) -> PredictedType {
    if f.is_zero() {
        return PredictedType::Zero;
    }
    let d = f.discriminant();
    if d.is_negative() {
        if f.a.is_positive() {
            PredictedType::PositiveWell
        } else {
            PredictedType::NegativeWell
        }
    } else if d.is_zero() {
        PredictedType::Lake
    } else if is_square(&d) {
        PredictedType::WeirOrLakePair
    } else {
        PredictedType::River
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let root = n.sqrt();
    &root * &root == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, h: i64, b: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, h, b)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn b3(x: i64, y: i64, z: i64) -> [BigInt; 3] {
        [big(x), big(y), big(z)]
    }

    fn inv(a: i64, h: i64, b: i64) -> TopographInvariant {
        invariant(&form(a, h, b)).unwrap()
    }

    #[test]
    fn descend_examples() {
        assert_eq!(
            descend(&VertexTriple::new(2, 3, 6)).unwrap(),
            Descent::Well(b3(2, 3, 4))
        );
        assert_eq!(
            descend(&VertexTriple::new(1, 1, 1)).unwrap(),
            Descent::Well(b3(1, 1, 1))
        );
        assert_eq!(
            descend(&VertexTriple::new(2, 3, 5)).unwrap(),
            Descent::Well(b3(2, 3, 5))
        );
        assert!(matches!(
            descend(&VertexTriple::new(2, 0, 5)),
            Err(TopographError::NotAllPositive(_))
        ));
    }

    #[test]
    fn descend_crosses_for_indefinite() {
        // x² - 2y² at (1,1),(1,0),(2,1): values -1 ... start from positive triple
        let f = form(1, 4, 1); // D = 12
        let out = descend(&f.triple()).unwrap();
        assert!(matches!(out, Descent::Crossed(_)));
    }

    #[test]
    fn reduce_lake_examples() {
        assert_eq!(
            reduce_lake_adjacent(&big(6), &big(17)).unwrap(),
            (big(-5), big(6))
        );
        assert_eq!(
            reduce_lake_adjacent(&big(0), &big(9)).unwrap(),
            (big(0), big(9))
        );
        assert_eq!(
            reduce_lake_adjacent(&big(-3), &big(4)).unwrap(),
            (big(-3), big(4))
        );
        assert_eq!(
            reduce_lake_adjacent(&big(-9), &big(0)).unwrap(),
            (big(0), big(9))
        );
        assert!(matches!(
            reduce_lake_adjacent(&big(4), &big(4)),
            Err(TopographError::EqualValues(_))
        ));
    }

    #[test]
    fn river_of_x2_minus_7y2() {
        let out = trace_river(&VertexTriple::new(1, -7, -6), &TopographConfig::default()).unwrap();
        match out {
            RiverOutcome::Periodic { canonical, period } => {
                assert_eq!(canonical, b3(-7, -6, 1));
                assert!(period > 0);
            }
            other => panic!("expected a periodic river, got {other:?}"),
        }
    }

    #[test]
    fn river_into_lake() {
        let cfg = TopographConfig::default();
        let out = trace_river(&VertexTriple::new(-5, 6, 2), &cfg).unwrap();
        assert!(matches!(out, RiverOutcome::ReachesLake { .. }));
        let out = trace_river(&form(1, 0, -1).triple(), &cfg).unwrap();
        assert_eq!(
            out,
            RiverOutcome::ReachesLake {
                vertex: b3(-1, 0, 1),
                steps: 0
            }
        );
        assert_eq!(
            trace_river(&VertexTriple::new(1, 2, 3), &cfg),
            Err(TopographError::NotARiver)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = TopographConfig { river_cap: 1 };
        assert_eq!(
            invariant_with(&form(1, 0, -7), &cfg),
            Err(TopographError::PeriodCapExceeded { cap: 1 })
        );
    }

    #[test]
    fn reference_forms() {
        assert_eq!(inv(2, 1, 3), TopographInvariant::Well(b3(2, 3, 4)));
        assert_eq!(inv(2, 0, 3), TopographInvariant::Well(b3(2, 3, 5)));
        assert_eq!(inv(1, 0, -7), TopographInvariant::River(b3(-7, -6, 1)));
        assert_eq!(inv(5, 0, 0), TopographInvariant::Lake(big(5)));
        assert_eq!(inv(0, 0, -5), TopographInvariant::Lake(big(-5)));
        assert_eq!(inv(0, 7, 0), TopographInvariant::Weir(big(7)));
        assert_eq!(inv(0, -7, 0), TopographInvariant::Weir(big(7)));
        assert_eq!(
            inv(6, 11, 0),
            TopographInvariant::LakePair([[big(-9), big(2)], [big(-5), big(6)]])
        );
        assert_eq!(inv(0, 0, 0), TopographInvariant::Zero);
    }

    #[test]
    fn negative_definite_well() {
        assert_eq!(inv(-2, -1, -3), TopographInvariant::Well(b3(-4, -3, -2)));
        assert_eq!(inv(-2, -1, -3), inv(2, 1, 3).negated());
    }

    #[test]
    fn display_and_parse() {
        let cases = [
            (inv(2, 1, 3), "WELL[2,3,4]"),
            (inv(1, 0, -7), "RIVER[-7,-6,1]"),
            (inv(5, 0, 0), "LAKE[5]"),
            (inv(0, 7, 0), "WEIR[7]"),
            (inv(6, 11, 0), "LAKEPAIR[[-9,2],[-5,6]]"),
            (TopographInvariant::Zero, "ZERO"),
        ];
        for (value, text) in cases {
            assert_eq!(value.to_string(), text);
            assert_eq!(text.parse::<TopographInvariant>().unwrap(), value);
        }
        assert_eq!(
            "LAKE[0]".parse::<TopographInvariant>().unwrap(),
            TopographInvariant::Zero
        );
        assert!("WELL[1,2]".parse::<TopographInvariant>().is_err());
        assert!("POND[1]".parse::<TopographInvariant>().is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_by_discriminant(&form(1, 0, -7)),
            PredictedType::River
        );
        assert_eq!(
            classify_by_discriminant(&form(6, 11, 0)),
            PredictedType::WeirOrLakePair
        );
        assert_eq!(
            classify_by_discriminant(&form(2, 0, 3)),
            PredictedType::PositiveWell
        );
        assert_eq!(
            classify_by_discriminant(&form(-2, 0, -3)),
            PredictedType::NegativeWell
        );
        assert_eq!(
            classify_by_discriminant(&form(1, 2, 1)),
            PredictedType::Lake
        );
        assert_eq!(
            classify_by_discriminant(&form(0, 0, 0)),
            PredictedType::Zero
        );
    }

    #[test]
    fn kind_tags_round_trip() {
        for kind in TopographKind::ALL {
            assert_eq!(kind.tag().parse::<TopographKind>().unwrap(), kind);
        }
    }
}
