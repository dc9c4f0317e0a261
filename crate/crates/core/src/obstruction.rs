//! Line bundles on the singular locus `S = P¹/(0 ~ 1 ~ ∞)` and the valuation
//! bookkeeping of one-parameter degenerations.
//!
//! A bundle of fixed degree on `S` is determined by the three gluing scalars
//! over `0, 1, ∞`, up to a common factor, giving a point `(a : b : c)` of a
//! projective plane. Frames for the tautological bundle `O(-1)` are fixed at
//! `w0 = (1, 0)`, `w1 = (1, 1)`, `w∞ = (0, 1)`. The bundles that become trivial
//! after twisting by one point form the conic [`QuadricZ`] through the three
//! coordinate points.
//!
//! An arc records the z-orders of the three coordinates along a family; its
//! normalized form `w = v - min(v)` gives the limit point and the orders of
//! contact with the coordinate triangle `T` and with `Z`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("homogeneous coordinates are all zero")]
    ZeroPoint,
    #[error("quadric coefficients are all zero")]
    ZeroQuadric,
    #[error("boundary: no interior solution at a coordinate point")]
    Boundary,
    #[error("no degeneration: case 0 leaves the construct well defined")]
    NoDegeneration,
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("arc is contained in Z to the computed order")]
    ContainedInZ,
    #[error("series for coordinate {0} has a zero leading coefficient")]
    ZeroLeading(usize),
    #[error("inputs must be positive")]
    NonPositive,
}

/// A point `(a : b : c)` of the compactified moduli plane.
#[derive(Debug, Clone, Serialize)]
pub struct ModuliPoint<S> {
    coords: [S; 3],
}

impl<S: Scalar> ModuliPoint<S> {
    pub fn new(a: S, b: S, c: S) -> Result<Self, ObstructionError> {
        if a.is_negligible() && b.is_negligible() && c.is_negligible() {
            return Err(ObstructionError::ZeroPoint);
        }
        Ok(ModuliPoint { coords: [a, b, c] })
    }

    pub fn coords(&self) -> &[S; 3] {
        &self.coords
    }

    pub fn is_coordinate_point(&self) -> bool {
        self.coords.iter().filter(|c| c.is_negligible()).count() == 2
    }

    /// Equality up to a common nonzero scale.
    pub fn same_point(&self, other: &Self) -> bool {
        let (p, q) = (&self.coords, &other.coords);
        (0..3).all(|i| {
            let j = (i + 1) % 3;
            (p[i].clone() * q[j].clone() - p[j].clone() * q[i].clone()).is_negligible()
        })
    }
}

impl<S: Scalar> PartialEq for ModuliPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_point(other)
    }
}

impl<S: Scalar> fmt::Display for ModuliPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "({a} : {b} : {c})")
    }
}

/// The image of `O(-x)`: `(x - 1 : x : x(1 - x))`.
pub fn tautological_image<S: Scalar>(x: S) -> Result<ModuliPoint<S>, ObstructionError> {
    let one = S::one();
    ModuliPoint::new(x.clone() - one.clone(), x.clone(), x.clone() * (one - x))
}

/// The conic `λ·ab + μ·bc + ν·ca`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadricZ<S> {
    pub lambda: S,
    pub mu: S,
    pub nu: S,
}

impl<S: Scalar> QuadricZ<S> {
    pub fn new(lambda: S, mu: S, nu: S) -> Result<Self, ObstructionError> {
        if lambda.is_negligible() && mu.is_negligible() && nu.is_negligible() {
            return Err(ObstructionError::ZeroQuadric);
        }
        Ok(QuadricZ { lambda, mu, nu })
    }

    /// The unique conic of this shape through `points`, if they determine one.
    pub fn fit_through(points: &[ModuliPoint<S>]) -> Option<Self> {
        let rows = points
            .iter()
            .map(|p| {
                let [a, b, c] = p.coords.clone();
                vec![a.clone() * b.clone(), b * c.clone(), c * a]
            })
            .collect();
        let m = crate::matrix::Matrix::from_rows(rows).ok()?;
        let mut kernel = m.null_space();
        if kernel.len() != 1 {
            return None;
        }
        let v = kernel.pop()?;
        let [l, mu, nu]: [S; 3] = v.try_into().ok()?;
        QuadricZ::new(l, mu, nu).ok()
    }

    pub fn evaluate(&self, p: &ModuliPoint<S>) -> S {
        let [a, b, c] = p.coords.clone();
        self.lambda.clone() * a.clone() * b.clone() + self.mu.clone() * b * c.clone() + self.nu.clone() * c * a
    }

    /// Coefficients agree up to a nonzero scale.
    pub fn same_conic(&self, other: &Self) -> bool {
        let p = ModuliPoint { coords: [self.lambda.clone(), self.mu.clone(), self.nu.clone()] };
        let q = ModuliPoint { coords: [other.lambda.clone(), other.mu.clone(), other.nu.clone()] };
        p.same_point(&q)
    }
}

impl<S: Scalar> fmt::Display for QuadricZ<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·ab + ({})·bc + ({})·ca", self.lambda, self.mu, self.nu)
    }
}

/// The quadric of trivializable bundles in the fixed frames: `ab + bc - ca`.
pub fn z_quadric<S: Scalar>() -> QuadricZ<S> {
    QuadricZ { lambda: S::one(), mu: S::one(), nu: -S::one() }
}

pub fn z_contains<S: Scalar>(z: &QuadricZ<S>, p: &ModuliPoint<S>) -> bool {
    z.evaluate(p).is_negligible()
}

/// The point `x` with `p` the image of `O(-x)`. Interior points of `Z` always
/// give a finite `x` outside `{0, 1}`; points off `Z` give `None`.
pub fn trivializing_point<S: Scalar>(z: &QuadricZ<S>, p: &ModuliPoint<S>) -> Result<Option<S>, ObstructionError> {
    if p.is_coordinate_point() {
        return Err(ObstructionError::Boundary);
    }
    let [a, _, c] = &p.coords;
    if !z_contains(z, p) || a.is_negligible() {
        return Ok(None);
    }
    let x = -(c.clone() / a.clone());
    Ok(tautological_image(x.clone()).ok().filter(|q| q.same_point(p)).map(|_| x))
}

/// Order in `z` of the trivialization at a triple point produced by a bubble
/// of self-intersection `q_self`; the other trivializations stay of order 0.
pub fn bubble_order(q_self: i64) -> i64 {
    q_self + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseId {
    /// Tangency away from the chosen points.
    Case0,
    /// First cubic splits into a line and a conic; `p2, p3` on one part.
    Case1_1,
    /// As 1.1 with `p1, p3` on one part.
    Case1_2,
    /// First cubic acquires a cusp.
    Case2,
    /// A node of one cubic lands on the other away from point 3.
    Case3_0,
    /// As 3.0 with `p1` tending to `p3`.
    Case3_1,
    /// As 3.0 with `p2` tending to `p3`.
    Case3_2,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::Case0,
        CaseId::Case1_1,
        CaseId::Case1_2,
        CaseId::Case2,
        CaseId::Case3_0,
        CaseId::Case3_1,
        CaseId::Case3_2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Case0 => "0",
            CaseId::Case1_1 => "1.1",
            CaseId::Case1_2 => "1.2",
            CaseId::Case2 => "2",
            CaseId::Case3_0 => "3.0",
            CaseId::Case3_1 => "3.1",
            CaseId::Case3_2 => "3.2",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = ObstructionError;

    /// Accepts the line/conic aliases `1.1L`, `1.1Q`, `1.2L`, `1.2Q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let base = s.strip_suffix(['L', 'Q']).filter(|b| b.starts_with("1.")).unwrap_or(s);
        CaseId::ALL.into_iter().find(|c| c.as_str() == base).ok_or_else(|| ObstructionError::UnknownCase(s.into()))
    }
}

/// A marked point of the first (`P`) or second (`Q`) cubic, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mark {
    P(usize),
    Q(usize),
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::P(i) => write!(f, "p{i}"),
            Mark::Q(i) => write!(f, "q{i}"),
        }
    }
}

/// Each trivialization value is a product of two fractions `γ(m) / ds(n)`,
/// one per branch through the gluing pair. The denominator mark is the other
/// mark on the sheet of the numerator mark: sheets are `{p1, p2}`, `{q1, q2}`
/// and `{p3, q3}`, and the gluing pairs are `p1~q2`, `p2~q3`, `p3~q1`.
pub const PAIRING: [[(Mark, Mark); 2]; 3] = [
    [(Mark::P(1), Mark::P(2)), (Mark::Q(2), Mark::Q(1))],
    [(Mark::P(2), Mark::P(1)), (Mark::Q(3), Mark::P(3))],
    [(Mark::P(3), Mark::Q(3)), (Mark::Q(1), Mark::Q(2))],
];

/// z-orders of the regularized conormal forms and of the arc-length norms
/// at the three marks of each cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorTable {
    pub gamma_p: [i64; 3],
    pub ds_p: [i64; 3],
    pub gamma_q: [i64; 3],
    pub ds_q: [i64; 3],
}

impl FactorTable {
    fn gamma(&self, m: Mark) -> i64 {
        match m {
            Mark::P(i) => self.gamma_p[i - 1],
            Mark::Q(i) => self.gamma_q[i - 1],
        }
    }

    fn ds(&self, m: Mark) -> i64 {
        match m {
            Mark::P(i) => self.ds_p[i - 1],
            Mark::Q(i) => self.ds_q[i - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationCase {
    pub id: CaseId,
    /// Absent for case 0.
    pub factors: Option<FactorTable>,
    pub pairing: [[(Mark, Mark); 2]; 3],
    /// The orders of the three trivialization values as tabulated.
    pub arc: Option<[i64; 3]>,
}

pub fn degeneration_case(id: CaseId) -> DegenerationCase {
    let table = |gamma_p, ds_p, gamma_q, ds_q| Some(FactorTable { gamma_p, ds_p, gamma_q, ds_q });
    let z = [0; 3];
    // the split-off component of square -2 carries one mark alone; the bubble
    // order sits there and ds vanishes simply
    let bubble = bubble_order(-2);
    let (factors, arc) = match id {
        CaseId::Case0 => (None, None),
        CaseId::Case1_1 => (table([bubble, 0, 0], [-bubble, 0, 0], z, z), Some([-1, -1, 0])),
        CaseId::Case1_2 => (table([0, bubble, 0], [0, -bubble, 0], z, z), Some([-1, -1, 0])),
        CaseId::Case2 => (table([2, 2, -2], [-1, -1, 1], z, z), Some([3, 2, -2])),
        CaseId::Case3_0 => (table([-1, -1, 0], z, z, z), Some([-1, -1, 0])),
        CaseId::Case3_1 => (table([0, -2, 0], [-1, 1, -1], [0, 0, -1], z), Some([-1, -1, 0])),
        CaseId::Case3_2 => (table([-2, 0, 0], [1, -1, -1], [0, 0, -1], z), Some([-1, -1, 0])),
    };
    DegenerationCase { id, factors, pairing: PAIRING, arc }
}

pub fn degeneration_cases() -> Vec<DegenerationCase> {
    CaseId::ALL.into_iter().map(degeneration_case).collect()
}

/// Sums `γ(m) - ds(n)` over the two fractions of each trivialization value.
pub fn compose_valuation(case: &DegenerationCase) -> Result<ZOrderArc<Rational>, ObstructionError> {
    let f = case.factors.as_ref().ok_or(ObstructionError::NoDegeneration)?;
    let v = case.pairing.map(|fractions| fractions.iter().map(|&(m, n)| f.gamma(m) - f.ds(n)).sum());
    Ok(ZOrderArc::generic(v))
}

/// The tabulated arc of a case.
pub fn case_valuations(id: CaseId) -> Result<ZOrderArc<Rational>, ObstructionError> {
    degeneration_case(id).arc.map(ZOrderArc::generic).ok_or(ObstructionError::NoDegeneration)
}

/// Leading z-orders of `(a, b, c)` along a family, optionally with their
/// coefficient series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZOrderArc<S> {
    pub orders: [i64; 3],
    /// `series[i][k]` is the coefficient of `z^(orders[i] + k)`.
    pub series: Option<[Vec<S>; 3]>,
}

impl<S: Scalar> ZOrderArc<S> {
    /// Leading coefficients symbolic and nonzero.
    pub fn generic(orders: [i64; 3]) -> Self {
        ZOrderArc { orders, series: None }
    }

    pub fn with_leading(orders: [i64; 3], leading: [S; 3]) -> Result<Self, ObstructionError> {
        Self::with_series(orders, leading.map(|c| vec![c]))
    }

    pub fn with_series(orders: [i64; 3], series: [Vec<S>; 3]) -> Result<Self, ObstructionError> {
        for (i, s) in series.iter().enumerate() {
            if s.first().is_none_or(|c| c.is_negligible()) {
                return Err(ObstructionError::ZeroLeading(i));
            }
        }
        Ok(ZOrderArc { orders, series: Some(series) })
    }

    pub fn normalized(&self) -> [i64; 3] {
        let m = *self.orders.iter().min().expect("three entries");
        self.orders.map(|v| v - m)
    }

    /// Adds `k` to every order; the projective arc is unchanged.
    pub fn shifted(&self, k: i64) -> Self {
        ZOrderArc { orders: self.orders.map(|v| v + k), series: self.series.clone() }
    }
}

impl<S> fmt::Display for ZOrderArc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.orders;
        write!(f, "({a},{b},{c})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StratumKind {
    Interior,
    /// On the line where coordinate `vanishing` is zero, away from its ends.
    CoordinateLine {
        vanishing: usize,
    },
    CoordinatePoint {
        index: usize,
    },
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["a", "b", "c"];
        match self {
            StratumKind::Interior => f.write_str("interior"),
            StratumKind::CoordinateLine { vanishing } => {
                write!(f, "coordinate line {} = 0, not a coordinate point", NAMES[*vanishing])
            }
            StratumKind::CoordinatePoint { .. } => f.write_str("coordinate point"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitStratum {
    /// 1 where the normalized order vanishes, else 0.
    pub limit: [i64; 3],
    pub kind: StratumKind,
}

impl LimitStratum {
    pub fn limit_string(&self) -> String {
        let [a, b, c] = self.limit;
        format!("({a}:{b}:{c})")
    }
}

pub fn limit_stratum<S: Scalar>(arc: &ZOrderArc<S>) -> LimitStratum {
    let w = arc.normalized();
    let limit = w.map(|x| (x == 0) as i64);
    let zeros: Vec<usize> = (0..3).filter(|&i| w[i] == 0).collect();
    let kind = match zeros.len() {
        3 => StratumKind::Interior,
        2 => StratumKind::CoordinateLine { vanishing: (0..3).find(|i| !zeros.contains(i)).expect("one positive") },
        _ => StratumKind::CoordinatePoint { index: zeros[0] },
    };
    LimitStratum { limit, kind }
}

/// Order of contact with the coordinate triangle.
pub fn t_order<S: Scalar>(arc: &ZOrderArc<S>) -> u64 {
    arc.normalized().iter().map(|&w| w as u64).sum()
}

/// Order of contact with `Z`. Generic arcs take the least pairwise sum of
/// normalized orders among the monomials present in `Z`; arcs with series are
/// expanded exactly, truncated at `2·max|v| + 4` terms past the leading order.
pub fn z_order<S: Scalar>(arc: &ZOrderArc<S>, z: &QuadricZ<S>) -> Result<u64, ObstructionError> {
    let w = arc.normalized();
    let terms = [(0, 1, &z.lambda), (1, 2, &z.mu), (2, 0, &z.nu)];
    let Some(series) = &arc.series else {
        return terms
            .iter()
            .filter(|(_, _, k)| !k.is_negligible())
            .map(|&(i, j, _)| (w[i] + w[j]) as u64)
            .min()
            .ok_or(ObstructionError::ContainedInZ);
    };
    let depth = 2 * arc.orders.iter().map(|v| v.unsigned_abs()).max().expect("three entries") as usize + 4;
    let base = terms.iter().map(|&(i, j, _)| w[i] + w[j]).min().expect("three terms");
    let mut total = vec![S::zero(); depth + 1];
    for &(i, j, k) in &terms {
        let offset = (w[i] + w[j] - base) as usize;
        for (p, x) in series[i].iter().enumerate() {
            for (q, y) in series[j].iter().enumerate() {
                let e = offset + p + q;
                if e <= depth {
                    total[e] = total[e].clone() + k.clone() * x.clone() * y.clone();
                }
            }
        }
    }
    total
        .iter()
        .position(|c| !c.is_negligible())
        .map(|e| (base as usize + e) as u64)
        .ok_or(ObstructionError::ContainedInZ)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BezoutVerdict {
    pub contradiction: bool,
    /// `t_per_cusp / z_per_cusp · z_total_per_deg`, per degree of the curve.
    #[serde(serialize_with = "display")]
    pub forced: Rational,
    pub t_total_per_deg: i64,
    pub trace: String,
}

fn display<T: fmt::Display, Ser: serde::Serializer>(v: &T, s: Ser) -> Result<Ser::Ok, Ser::Error> {
    s.collect_str(v)
}

impl BezoutVerdict {
    /// The inequality in terms of the degree of the curve.
    pub fn symbolic(&self) -> String {
        if self.contradiction {
            format!("{}·deg(C) > {}·deg(C): contradiction", self.forced, self.t_total_per_deg)
        } else {
            format!("{}·deg(C) ≤ {}·deg(C): no contradiction", self.forced, self.t_total_per_deg)
        }
    }
}

/// If every intersection with `Z` happened at cusps, each cusp would force
/// `t/z` intersections with `T` per intersection with `Z`; compare the total
/// with what `T` allows.
pub fn bezout_argument(
    z_per_cusp: i64,
    t_per_cusp: i64,
    z_total_per_deg: i64,
    t_total_per_deg: i64,
) -> Result<BezoutVerdict, ObstructionError> {
    if [z_per_cusp, t_per_cusp, z_total_per_deg, t_total_per_deg].iter().any(|&x| x <= 0) {
        return Err(ObstructionError::NonPositive);
    }
    let int = |x: i64| Rational::from_integer(x.into());
    let forced = int(t_per_cusp) / int(z_per_cusp) * int(z_total_per_deg);
    let contradiction = forced > int(t_total_per_deg);
    let rel = if contradiction { ">" } else { "≤" };
    let trace = format!("{t_per_cusp}/{z_per_cusp}·{z_total_per_deg} = {forced} {rel} {t_total_per_deg}");
    Ok(BezoutVerdict { contradiction, forced, t_total_per_deg, trace })
}
