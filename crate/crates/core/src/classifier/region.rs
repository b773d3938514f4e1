//! Closed-form subsets of the complex plane built from vertical strips
//! (generator side) or rotation-invariant disks and annuli (operator side).
//!
//! Every shape is an interval in one real coordinate: `Re λ` for strips and
//! lines, `|λ|` for disks, annuli and circles. Normalization, membership and
//! inclusion are all computed on those intervals.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::number::Num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Certified,
    BoundaryUnresolved,
    #[serde(rename = "unknown_question2")]
    UnknownOpenAnnulus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `Re λ <= b`.
    HalfPlaneLeft { b: f64 },
    /// `a <= Re λ <= b`.
    VStrip { a: f64, b: f64 },
    /// `Re λ = c`.
    VLine { c: f64 },
    /// `a < Re λ < b`; `a` may be `-∞`.
    OpenVStripInterior { a: f64, b: f64 },
    /// `|λ| <= r`.
    Disk { r: f64 },
    /// `r1 <= |λ| <= r2`.
    ClosedAnnulus { r1: f64, r2: f64 },
    /// `r1 < |λ| < r2`.
    OpenAnnulusInterior { r1: f64, r2: f64 },
    /// `|λ| = r`.
    Circle { r: f64 },
    Empty,
}

/// Which real coordinate a shape constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    RealPart,
    Modulus,
}

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            lo_closed: false,
            hi,
            hi_closed: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        if self.lo.is_nan() || self.hi.is_nan() {
            return true;
        }
        match self.lo.partial_cmp(&self.hi) {
            Some(Ordering::Less) => self.hi == f64::NEG_INFINITY,
            Some(Ordering::Equal) => {
                !(self.lo_closed && self.hi_closed) || !self.lo.is_finite()
            }
            _ => true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = x > self.lo || (x == self.lo && self.lo_closed && x.is_finite());
        let below = x < self.hi || (x == self.hi && self.hi_closed && x.is_finite());
        above && below && !self.is_empty()
    }

    fn lo_within(&self, outer: &Interval) -> bool {
        outer.lo < self.lo
            || (outer.lo == self.lo
                && (outer.lo_closed || !self.lo_closed || outer.lo == f64::NEG_INFINITY))
    }

    fn hi_within(&self, outer: &Interval) -> bool {
        self.hi < outer.hi
            || (self.hi == outer.hi
                && (outer.hi_closed || !self.hi_closed || outer.hi == f64::INFINITY))
    }

    pub fn is_subset_of(&self, outer: &Interval) -> bool {
        self.is_empty() || (!outer.is_empty() && self.lo_within(outer) && self.hi_within(outer))
    }

    /// Whether `self ∪ next` is an interval, assuming `self.lo <= next.lo`.
    fn connects(&self, next: &Interval) -> bool {
        next.lo < self.hi || (next.lo == self.hi && (self.hi_closed || next.lo_closed))
    }

    fn hull(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo) {
            Some(Ordering::Less) => (self.lo, self.lo_closed),
            Some(Ordering::Greater) => (other.lo, other.lo_closed),
            _ => (self.lo, self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Greater) => (self.hi, self.hi_closed),
            Some(Ordering::Less) => (other.hi, other.hi_closed),
            _ => (self.hi, self.hi_closed || other.hi_closed),
        };
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    fn sort_key(&self, other: &Interval) -> Ordering {
        self.lo
            .total_cmp(&other.lo)
            .then(other.lo_closed.cmp(&self.lo_closed))
            .then(self.hi.total_cmp(&other.hi))
            .then(self.hi_closed.cmp(&other.hi_closed))
    }
}

/// Disjoint maximal intervals covering the union of `parts`.
pub fn interval_union(parts: &[Interval]) -> Vec<Interval> {
    let mut v: Vec<Interval> = parts.iter().copied().filter(|i| !i.is_empty()).collect();
    v.sort_by(|a, b| a.sort_key(b));
    let mut out: Vec<Interval> = Vec::new();
    for i in v {
        match out.last_mut() {
            Some(last) if last.connects(&i) => *last = last.hull(&i),
            _ => out.push(i),
        }
    }
    out
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::HalfPlaneLeft { .. } => "half_plane_left",
            Shape::VStrip { .. } => "vstrip",
            Shape::VLine { .. } => "vline",
            Shape::OpenVStripInterior { .. } => "open_vstrip_interior",
            Shape::Disk { .. } => "disk",
            Shape::ClosedAnnulus { .. } => "closed_annulus",
            Shape::OpenAnnulusInterior { .. } => "open_annulus_interior",
            Shape::Circle { .. } => "circle",
            Shape::Empty => "empty",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Shape::HalfPlaneLeft { b } => vec![b],
            Shape::VStrip { a, b } | Shape::OpenVStripInterior { a, b } => vec![a, b],
            Shape::VLine { c } => vec![c],
            Shape::Disk { r } | Shape::Circle { r } => vec![r],
            Shape::ClosedAnnulus { r1, r2 } | Shape::OpenAnnulusInterior { r1, r2 } => {
                vec![r1, r2]
            }
            Shape::Empty => vec![],
        }
    }

    pub fn from_parts(kind: &str, p: &[f64]) -> Option<Shape> {
        let shape = match (kind, p) {
            ("half_plane_left", [b]) => Shape::HalfPlaneLeft { b: *b },
            ("vstrip", [a, b]) => Shape::VStrip { a: *a, b: *b },
            ("vline", [c]) => Shape::VLine { c: *c },
            ("open_vstrip_interior", [a, b]) => Shape::OpenVStripInterior { a: *a, b: *b },
            ("disk", [r]) => Shape::Disk { r: *r },
            ("closed_annulus", [r1, r2]) => Shape::ClosedAnnulus { r1: *r1, r2: *r2 },
            ("open_annulus_interior", [r1, r2]) => Shape::OpenAnnulusInterior { r1: *r1, r2: *r2 },
            ("circle", [r]) => Shape::Circle { r: *r },
            ("empty", []) => Shape::Empty,
            _ => return None,
        };
        Some(shape)
    }

    /// Axis and interval of the shape; `None` for the empty shape.
    pub fn interval(&self) -> Option<(Axis, Interval)> {
        use Axis::*;
        let ninf = f64::NEG_INFINITY;
        let (axis, iv) = match *self {
            Shape::HalfPlaneLeft { b } => (RealPart, Interval::closed(ninf, b)),
            Shape::VStrip { a, b } => (RealPart, Interval::closed(a, b)),
            Shape::VLine { c } => (RealPart, Interval::closed(c, c)),
            Shape::OpenVStripInterior { a, b } => (RealPart, Interval::open(a, b)),
            // a radius of zero describes the single point 0, which is dropped
            Shape::Disk { r } if r > 0.0 => (Modulus, Interval::closed(0.0, r)),
            Shape::ClosedAnnulus { r1, r2 } if r2 > 0.0 => {
                (Modulus, Interval::closed(r1.max(0.0), r2))
            }
            Shape::OpenAnnulusInterior { r1, r2 } => (Modulus, Interval::open(r1.max(0.0), r2)),
            Shape::Circle { r } if r > 0.0 => (Modulus, Interval::closed(r, r)),
            _ => return None,
        };
        (!iv.is_empty()).then_some((axis, iv))
    }

    /// Canonical shape for a nonempty interval produced by [`Shape::interval`] or merging.
    fn from_interval(axis: Axis, iv: Interval) -> Option<Shape> {
        let Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        } = iv;
        let shape = match axis {
            Axis::RealPart if lo == f64::NEG_INFINITY => {
                if hi_closed {
                    Shape::HalfPlaneLeft { b: hi }
                } else {
                    Shape::OpenVStripInterior { a: lo, b: hi }
                }
            }
            Axis::RealPart => match (lo_closed, hi_closed) {
                (true, true) if lo == hi => Shape::VLine { c: lo },
                (true, true) => Shape::VStrip { a: lo, b: hi },
                (false, false) => Shape::OpenVStripInterior { a: lo, b: hi },
                _ => return None,
            },
            Axis::Modulus => match (lo_closed, hi_closed) {
                (true, true) if lo == 0.0 => Shape::Disk { r: hi },
                (true, true) if lo == hi => Shape::Circle { r: lo },
                (true, true) => Shape::ClosedAnnulus { r1: lo, r2: hi },
                (false, false) => Shape::OpenAnnulusInterior { r1: lo, r2: hi },
                _ => return None,
            },
        };
        Some(shape)
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        match self.interval() {
            None => false,
            Some((Axis::RealPart, iv)) => iv.contains(lambda.re),
            Some((Axis::Modulus, iv)) => iv.contains(lambda.norm()),
        }
    }

    /// Shifts a real-part shape by `c`; modulus shapes are returned unchanged.
    pub fn translate(&self, c: f64) -> Shape {
        match *self {
            Shape::HalfPlaneLeft { b } => Shape::HalfPlaneLeft { b: b + c },
            Shape::VStrip { a, b } => Shape::VStrip { a: a + c, b: b + c },
            Shape::VLine { c: x } => Shape::VLine { c: x + c },
            Shape::OpenVStripInterior { a, b } => Shape::OpenVStripInterior { a: a + c, b: b + c },
            other => other,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|x| Num::new(*x).to_string()).collect();
        write!(f, "{}({})", self.kind(), params.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub shape: Shape,
    pub certainty: Certainty,
}

impl Component {
    pub fn new(shape: Shape, certainty: Certainty) -> Self {
        Component { shape, certainty }
    }

    pub fn certified(shape: Shape) -> Self {
        Component::new(shape, Certainty::Certified)
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    kind: String,
    params: Vec<Num>,
    certainty: Certainty,
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComponentJson {
            kind: self.shape.kind().to_string(),
            params: self.shape.params().into_iter().map(Num::new).collect(),
            certainty: self.certainty,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ComponentJson::deserialize(d)?;
        let params: Vec<f64> = j.params.iter().map(|n| n.get()).collect();
        let shape = Shape::from_parts(&j.kind, &params)
            .ok_or_else(|| serde::de::Error::custom(format!("bad shape `{}`", j.kind)))?;
        Ok(Component::new(shape, j.certainty))
    }
}

/// A finite union of shapes, each tagged with how firmly it is known.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralRegion {
    components: Vec<Component>,
}

impl SpectralRegion {
    pub fn empty() -> Self {
        SpectralRegion::default()
    }

    /// Builds a normalized region.
    pub fn new(components: Vec<Component>) -> Self {
        SpectralRegion { components }.normalized()
    }

    /// Region exactly as given, without normalization.
    pub fn raw(components: Vec<Component>) -> Self {
        SpectralRegion { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.shape.interval().is_none())
    }

    /// Drops empty pieces, merges touching closed (or overlapping open)
    /// pieces of equal certainty, absorbs redundant pieces and sorts.
    pub fn normalized(&self) -> Self {
        let mut items: Vec<(Axis, Interval, Certainty)> = self
            .components
            .iter()
            .filter_map(|c| c.shape.interval().map(|(a, i)| (a, i, c.certainty)))
            .collect();

        loop {
            let mut changed = false;
            'outer: for i in 0..items.len() {
                for j in 0..items.len() {
                    if i == j || items[i].0 != items[j].0 {
                        continue;
                    }
                    let (_, a, ca) = items[i];
                    let (_, b, cb) = items[j];
                    // absorb a into b
                    if a.is_subset_of(&b) && (ca == cb || cb == Certainty::Certified) {
                        items.remove(i);
                        changed = true;
                        break 'outer;
                    }
                    if ca != cb || i > j {
                        continue;
                    }
                    let both_closed = a.lo_closed && a.hi_closed && b.lo_closed && b.hi_closed;
                    let both_open = !a.lo_closed && !a.hi_closed && !b.lo_closed && !b.hi_closed;
                    let (first, second) = if a.sort_key(&b) != Ordering::Greater {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let merge = (both_closed && first.connects(&second))
                        || (both_open && second.lo < first.hi);
                    if merge {
                        items[i].1 = first.hull(&second);
                        items.remove(j);
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        items.sort_by(|x, y| {
            x.0.cmp(&y.0)
                .then(x.1.sort_key(&y.1))
                .then(x.2.cmp(&y.2))
        });
        let components = items
            .into_iter()
            .filter_map(|(axis, iv, c)| Shape::from_interval(axis, iv).map(|s| Component::new(s, c)))
            .collect();
        SpectralRegion { components }
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        self.components.iter().any(|c| c.shape.contains(lambda))
    }

    /// Strongest certainty among the components containing `lambda`.
    pub fn certainty_at(&self, lambda: Complex64) -> Option<Certainty> {
        self.components
            .iter()
            .filter(|c| c.shape.contains(lambda))
            .map(|c| c.certainty)
            .min()
    }

    /// Components with the given certainty, as a region.
    pub fn with_certainty(&self, certainty: Certainty) -> SpectralRegion {
        SpectralRegion::new(
            self.components
                .iter()
                .filter(|c| c.certainty == certainty)
                .copied()
                .collect(),
        )
    }

    pub fn translate(&self, c: f64) -> SpectralRegion {
        SpectralRegion::new(
            self.components
                .iter()
                .map(|k| Component::new(k.shape.translate(c), k.certainty))
                .collect(),
        )
    }

    /// Intervals of this region on `axis`.
    pub fn intervals(&self, axis: Axis) -> Vec<Interval> {
        self.components
            .iter()
            .filter_map(|c| c.shape.interval())
            .filter(|(a, _)| *a == axis)
            .map(|(_, i)| i)
            .collect()
    }

    /// Exact set inclusion, ignoring certainty labels.
    pub fn is_subset_of(&self, other: &SpectralRegion) -> bool {
        [Axis::RealPart, Axis::Modulus].iter().all(|&axis| {
            let cover = interval_union(&other.intervals(axis));
            self.intervals(axis)
                .iter()
                .all(|i| cover.iter().any(|c| i.is_subset_of(c)))
        })
    }

    /// Modulus intervals of `{e^{tλ} : λ ∈ self}` for a real-part region and `t > 0`.
    pub fn exp_image(&self, t: f64) -> Vec<Interval> {
        self.intervals(Axis::RealPart)
            .into_iter()
            .map(|i| Interval {
                lo: (t * i.lo).exp(),
                lo_closed: i.lo_closed && i.lo.is_finite(),
                hi: (t * i.hi).exp(),
                hi_closed: i.hi_closed,
            })
            .collect()
    }
}

impl fmt::Display for SpectralRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match c.certainty {
                Certainty::Certified => c.shape.to_string(),
                other => format!("{}[{other:?}]", c.shape),
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}
