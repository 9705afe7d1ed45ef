//! The compactified coordinate torus of extended edge lengths.
//!
//! An extended length `x ∈ [0, ∞]`, with `0` and `∞` identified, is stored as
//! the circle parameter `t = x / (x + 1) ∈ [0, 1)`; the identified point is
//! `t = 0`. A point of the compactified cone over a base graph carries one
//! such coordinate per base edge. Its zero coordinates name the contracted
//! edge set, which places the point in exactly one stratum.
//!
//! All predicates are exact over rationals. The product metric is the
//! maximum of the per-coordinate circle distances
//! `2π · min(|s - t|, 1 - |s - t|)`; distances are reported both as the exact
//! rational `min(..)` term ("gap") and as radians.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::contraction::{contract, Contraction};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, WeightedGraph};
use crate::iso::{canonical_form, edge_isomorphisms};

/// An edge length in `[0, ∞]` as written by users.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(BigRational),
    Infinite,
}

impl FromStr for Length {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadLength(s.to_string());
        if matches!(s, "inf" | "Inf" | "infinity" | "∞") {
            return Ok(Length::Infinite);
        }
        let x = if let Some((int, frac)) = s.split_once('.') {
            if int.is_empty() && frac.is_empty() {
                return Err(bad());
            }
            let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
            if !all_digits(int) || !all_digits(frac) {
                return Err(bad());
            }
            let digits = format!("{int}{frac}");
            let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
            let denom = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(numer, denom)
        } else {
            if s.starts_with('+') || s.is_empty() {
                return Err(bad());
            }
            BigRational::from_str(s).map_err(|_| bad())?
        };
        if x.is_negative() {
            return Err(bad());
        }
        Ok(Length::Finite(x))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(x) => write!(f, "{x}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// A point of the circle `[0, ∞]/(0 ~ ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint {
    t: BigRational,
}

impl CirclePoint {
    /// The identified point `0 ≡ ∞`.
    pub fn zero() -> Self {
        CirclePoint { t: BigRational::zero() }
    }

    pub fn from_t(t: BigRational) -> Result<Self> {
        if t.is_negative() || t >= BigRational::one() {
            return Err(Error::BadLength(format!("t = {t}")));
        }
        Ok(CirclePoint { t })
    }

    pub fn from_length(x: &Length) -> Self {
        match x {
            Length::Infinite => CirclePoint::zero(),
            Length::Finite(x) => CirclePoint {
                t: x / (x + BigRational::one()),
            },
        }
    }

    /// Shorthand for a finite integer length.
    pub fn from_integer(x: u64) -> Self {
        Self::from_length(&Length::Finite(BigRational::from_integer(x.into())))
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero()
    }

    /// `x = t / (1 - t)`; zero at the identified point.
    pub fn length(&self) -> BigRational {
        &self.t / (BigRational::one() - &self.t)
    }

    /// Angle `2π t` of the image on the unit circle.
    pub fn angle(&self) -> f64 {
        TAU * to_f64(&self.t)
    }

    /// `min(|s - t|, 1 - |s - t|)`, the circle distance divided by `2π`.
    pub fn gap(&self, other: &CirclePoint) -> BigRational {
        let d = (&self.t - &other.t).abs();
        let wrap = BigRational::one() - &d;
        d.min(wrap)
    }

    pub fn distance(&self, other: &CirclePoint) -> f64 {
        TAU * to_f64(&self.gap(other))
    }
}

pub fn circle_dist(a: &CirclePoint, b: &CirclePoint) -> f64 {
    a.distance(b)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Floating-point counterparts, for inputs that are not exact.
pub mod float {
    use std::f64::consts::TAU;

    /// Circle parameter of a length; `∞` and `0` both map to `0`.
    pub fn t_of_length(x: f64) -> f64 {
        if x.is_infinite() || x == 0.0 {
            0.0
        } else {
            x / (x + 1.0)
        }
    }

    pub fn circle_dist(s: f64, t: f64) -> f64 {
        let d = (s - t).abs();
        TAU * d.min(1.0 - d)
    }

    pub fn length_dist(x: f64, y: f64) -> f64 {
        circle_dist(t_of_length(x), t_of_length(y))
    }

    /// Max-metric distance between two coordinate vectors of `t` values.
    pub fn product_dist(p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .map(|(&s, &t)| circle_dist(s, t))
            .fold(0.0, f64::max)
    }
}

/// A distance as its exact gap; the metric value is `2π · gap`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Distance {
    pub gap: BigRational,
}

impl Distance {
    pub fn radians(&self) -> f64 {
        TAU * to_f64(&self.gap)
    }

    pub fn is_zero(&self) -> bool {
        self.gap.is_zero()
    }
}

/// Which space a point lives in. In the closed cone lengths range over
/// `[0, ∞)` and `0` is not identified with `∞`; only the stratum of such a
/// point is meaningful.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConeMode {
    #[default]
    Compactified,
    Closed,
}

/// One circle coordinate per edge of a fixed base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPoint {
    base: Arc<WeightedGraph>,
    coords: Vec<CirclePoint>,
    mode: ConeMode,
}

impl ExtendedPoint {
    /// `coords[i]` belongs to base edge `i`.
    pub fn new(base: Arc<WeightedGraph>, coords: Vec<CirclePoint>, mode: ConeMode) -> Result<Self> {
        if coords.len() != base.num_edges() {
            return Err(Error::Integrity(format!(
                "{} coordinates for {} edges",
                coords.len(),
                base.num_edges()
            )));
        }
        Ok(ExtendedPoint { base, coords, mode })
    }

    /// Builds a point from lengths keyed by edge identifier.
    pub fn from_lengths(
        base: Arc<WeightedGraph>,
        lengths: &BTreeMap<String, Length>,
        mode: ConeMode,
    ) -> Result<Self> {
        for id in lengths.keys() {
            if base.edge_index(id).is_err() {
                return Err(Error::StrayCoordinate(id.clone()));
            }
        }
        let coords = base
            .edges()
            .iter()
            .map(|e| {
                let x = lengths
                    .get(&e.id)
                    .ok_or_else(|| Error::MissingCoordinate(e.id.clone()))?;
                if mode == ConeMode::Closed && *x == Length::Infinite {
                    return Err(Error::InfiniteInClosedCone);
                }
                Ok(CirclePoint::from_length(x))
            })
            .collect::<Result<_>>()?;
        Self::new(base, coords, mode)
    }

    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<WeightedGraph> {
        &self.base
    }

    pub fn coords(&self) -> &[CirclePoint] {
        &self.coords
    }

    pub fn mode(&self) -> ConeMode {
        self.mode
    }

    /// Lengths keyed by edge identifier; the identified point reads `0`.
    pub fn lengths(&self) -> BTreeMap<String, Length> {
        self.base
            .edges()
            .iter()
            .zip(&self.coords)
            .map(|(e, c)| (e.id.clone(), Length::Finite(c.length())))
            .collect()
    }

    fn same_base(&self, other: &ExtendedPoint) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(Error::MismatchedBase)
        }
    }

    fn require_compactified(&self) -> Result<()> {
        match self.mode {
            ConeMode::Compactified => Ok(()),
            ConeMode::Closed => Err(Error::ClosedCone),
        }
    }
}

/// Max over edges of the circle distances.
pub fn product_dist(p: &ExtendedPoint, q: &ExtendedPoint) -> Result<Distance> {
    p.same_base(q)?;
    p.require_compactified()?;
    q.require_compactified()?;
    Ok(Distance {
        gap: max_gap(&p.coords, &q.coords),
    })
}

fn max_gap(p: &[CirclePoint], q: &[CirclePoint]) -> BigRational {
    p.iter()
        .zip(q)
        .map(|(a, b)| a.gap(b))
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// The stratum containing a point, with the lengths of the surviving edges.
#[derive(Clone, Debug)]
pub struct PointStratum {
    pub q: EdgeSet,
    pub contraction: Contraction,
    /// Strictly positive lengths, indexed by edge of the contracted graph.
    pub lengths: Vec<BigRational>,
}

impl PointStratum {
    pub fn graph(&self) -> &WeightedGraph {
        &self.contraction.result
    }
}

pub fn stratum_of(p: &ExtendedPoint) -> Result<PointStratum> {
    let q = EdgeSet::from_indices(p.coords.iter().enumerate().filter(|(_, c)| c.is_zero()).map(|(i, _)| i));
    let contraction = contract(&p.base, q)?;
    let mut lengths = vec![BigRational::zero(); contraction.result.num_edges()];
    for (i, c) in p.coords.iter().enumerate() {
        if let Some(j) = contraction.edge_map[i] {
            lengths[j] = c.length();
        }
    }
    if lengths.iter().any(|x| !x.is_positive()) {
        return Err(Error::Integrity("surviving edge with non-positive length".into()));
    }
    Ok(PointStratum {
        q,
        contraction,
        lengths,
    })
}

/// All points of the same base identified with `p`: points whose weighted
/// metric graphs are isomorphic to that of `p` by a leaf- and
/// length-preserving isomorphism. Sorted by coordinates; always contains `p`.
pub fn fiber(p: &ExtendedPoint) -> Result<Vec<ExtendedPoint>> {
    p.require_compactified()?;
    let here = stratum_of(p)?;
    let source = here.graph();
    let key = canonical_form(source)?;
    let base = &p.base;
    let mut found: BTreeSet<Vec<CirclePoint>> = BTreeSet::new();
    for q2 in EdgeSet::subsets_of_size(base.num_edges(), here.q.len()) {
        let there = contract(base, q2)?;
        if there.result.num_vertices() != source.num_vertices() || canonical_form(&there.result)? != key {
            continue;
        }
        let mut base_edge_of = vec![0; there.result.num_edges()];
        for (i, image) in there.edge_map.iter().enumerate() {
            if let Some(j) = image {
                base_edge_of[*j] = i;
            }
        }
        for f in edge_isomorphisms(source, &there.result)? {
            let mut coords = vec![CirclePoint::zero(); base.num_edges()];
            for (i, image) in here.contraction.edge_map.iter().enumerate() {
                if let Some(j) = image {
                    coords[base_edge_of[f[*j]]] = p.coords[i].clone();
                }
            }
            found.insert(coords);
        }
    }
    if !found.contains(&p.coords) {
        return Err(Error::Integrity("fiber does not contain its own point".into()));
    }
    found
        .into_iter()
        .map(|coords| ExtendedPoint::new(Arc::clone(base), coords, ConeMode::Compactified))
        .collect()
}

/// Minimum product distance between the fibers of `p` and `q`; zero exactly
/// when the two points define the same class in the quotient.
pub fn separation(p: &ExtendedPoint, q: &ExtendedPoint) -> Result<Distance> {
    p.same_base(q)?;
    let (fp, fq) = (fiber(p)?, fiber(q)?);
    let mut best: Option<BigRational> = None;
    for u in &fp {
        for v in &fq {
            let gap = max_gap(&u.coords, &v.coords);
            if best.as_ref().is_none_or(|b| gap < *b) {
                let zero = gap.is_zero();
                best = Some(gap);
                if zero {
                    return Ok(Distance { gap: best.unwrap() });
                }
            }
        }
    }
    Ok(Distance {
        gap: best.unwrap_or_else(BigRational::zero),
    })
}
