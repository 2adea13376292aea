//! Rational filters in partial-fraction form
//!
//! ```text
//! r(z) = gamma + sum_j w_j / (z_j - z)
//! ```
//!
//! approximating the indicator function of `[-1, 1]`. Three families are
//! provided: the Gauss and trapezoid quadrature rules applied to the
//! Cauchy integral over an ellipse, and the Zolotarev minimax filter.
//!
//! Poles are stored in conjugate pairs ordered by ascending argument in
//! `(0, pi)`: `[z_1, conj(z_1), z_2, conj(z_2), ...]`. Weights follow the
//! same layout and the conjugate entries are exact conjugates, so every
//! evaluation on the real axis is real up to summation rounding.

mod contour;
mod gauss_legendre;
mod zolotarev;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub use contour::{build_gauss_filter, build_trapezoid_filter, trapezoid_closed_form};
pub use gauss_legendre::gauss_legendre_nodes;
pub use zolotarev::build_zolotarev_filter;

/// Evaluation points closer than this to a pole are rejected.
pub const POLE_PROXIMITY: f64 = 1e-14;

/// Filter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Gauss,
    Trapezoid,
    Zolotarev,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::Gauss => "gauss",
            FilterKind::Trapezoid => "trapezoid",
            FilterKind::Zolotarev => "zolotarev",
        })
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" => Ok(FilterKind::Gauss),
            "trapezoid" | "trap" => Ok(FilterKind::Trapezoid),
            "zolotarev" | "zolo" => Ok(FilterKind::Zolotarev),
            other => Err(Error::InvalidSpec(format!("unknown filter kind '{other}'"))),
        }
    }
}

/// Shape parameter: the ellipse parameter `S` for Gauss/trapezoid, the
/// Zolotarev range `R`, or the unit-circle limit `S = inf`.
///
/// Serialized as a JSON number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Finite(f64),
    Infinite,
}

impl Shape {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Shape::Infinite)
    }

    /// The numeric value, `f64::INFINITY` for the limit.
    pub fn value(&self) -> f64 {
        match *self {
            Shape::Finite(v) => v,
            Shape::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Finite(v) => write!(f, "{v}"),
            Shape::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf") {
            return Ok(Shape::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("cannot parse shape '{s}'")))?;
        if v.is_infinite() && v > 0.0 {
            Ok(Shape::Infinite)
        } else {
            Ok(Shape::Finite(v))
        }
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shape::Finite(v) => serializer.serialize_f64(*v),
            Shape::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(Shape::Finite(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Family, half-degree and shape of a filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub m: usize,
    pub shape: Shape,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, m: usize, shape: Shape) -> Result<Self> {
        let spec = Self { kind, m, shape };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidSpec(
                "half-degree m must be at least 1".into(),
            ));
        }
        match (self.kind, self.shape) {
            (FilterKind::Gauss | FilterKind::Trapezoid, Shape::Infinite) => Ok(()),
            (FilterKind::Gauss | FilterKind::Trapezoid, Shape::Finite(s)) => {
                if s > 1.0 && s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "ellipse parameter S must exceed 1, got {s}"
                    )))
                }
            }
            (FilterKind::Zolotarev, Shape::Finite(r)) => {
                if r > 1.0 && r.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "Zolotarev range R must exceed 1, got {r}"
                    )))
                }
            }
            (FilterKind::Zolotarev, Shape::Infinite) => Err(Error::InvalidSpec(
                "Zolotarev range R must be finite".into(),
            )),
        }
    }

    /// Construct the filter described by this spec.
    pub fn build(&self) -> Result<RationalFilter> {
        self.validate()?;
        match self.kind {
            FilterKind::Gauss => build_gauss_filter(self.m, self.shape),
            FilterKind::Trapezoid => build_trapezoid_filter(self.m, self.shape),
            FilterKind::Zolotarev => build_zolotarev_filter(self.m, self.shape.value()),
        }
    }
}

/// A rational filter `r(z) = constant + sum_j w_j / (z_j - z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFilter {
    spec: FilterSpec,
    poles: Vec<Complex64>,
    weights: Vec<Complex64>,
    constant: Complex64,
    conjugate_pairs_reducible: bool,
}

impl RationalFilter {
    /// Assemble a filter from upper-half-plane poles and weights. The
    /// conjugate partners are generated here; input order is replaced by
    /// ascending argument.
    pub(crate) fn from_upper_half(
        spec: FilterSpec,
        mut upper: Vec<(Complex64, Complex64)>,
        constant: f64,
    ) -> Self {
        upper.sort_by(|a, b| a.0.arg().total_cmp(&b.0.arg()));
        let mut poles = Vec::with_capacity(2 * upper.len());
        let mut weights = Vec::with_capacity(2 * upper.len());
        for (z, w) in upper {
            poles.push(z);
            poles.push(z.conj());
            weights.push(w);
            weights.push(w.conj());
        }
        Self {
            spec,
            poles,
            weights,
            constant: Complex64::new(constant, 0.0),
            conjugate_pairs_reducible: true,
        }
    }

    /// Build from explicit data, e.g. a deserialized file.
    pub fn from_parts(
        spec: FilterSpec,
        poles: Vec<Complex64>,
        weights: Vec<Complex64>,
        constant: Complex64,
    ) -> Result<Self> {
        spec.validate()?;
        if poles.len() != weights.len() {
            return Err(Error::InvalidSpec(format!(
                "{} poles but {} weights",
                poles.len(),
                weights.len()
            )));
        }
        if poles.is_empty() {
            return Err(Error::InvalidSpec("filter has no poles".into()));
        }
        if poles
            .iter()
            .chain(&weights)
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
            || !(constant.re.is_finite() && constant.im.is_finite())
        {
            return Err(Error::InvalidSpec(
                "non-finite pole, weight or constant".into(),
            ));
        }
        if let Some(z) = poles.iter().find(|z| z.im == 0.0) {
            return Err(Error::InvalidSpec(format!("real pole {z}")));
        }
        let reducible = poles.len() % 2 == 0
            && constant.im == 0.0
            && poles
                .chunks(2)
                .zip(weights.chunks(2))
                .all(|(p, w)| p[0].im > 0.0 && p[1] == p[0].conj() && w[1] == w[0].conj());
        Ok(Self {
            spec,
            poles,
            weights,
            constant,
            conjugate_pairs_reducible: reducible,
        })
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Value at infinity.
    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    /// True when poles and weights come in exact conjugate pairs stored as
    /// `[z, conj(z)]`, so a real-symmetric solver may process only the
    /// upper-half-plane poles.
    pub fn conjugate_pairs_reducible(&self) -> bool {
        self.conjugate_pairs_reducible
    }

    /// `r(z)`, summed in storage order.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.constant;
        for (&p, &w) in self.poles.iter().zip(&self.weights) {
            let d = p - z;
            let dist = d.norm();
            if dist <= POLE_PROXIMITY {
                return Err(Error::PoleProximity {
                    z,
                    pole: p,
                    distance: dist,
                });
            }
            acc += w / d;
        }
        Ok(acc)
    }

    /// `r(x)` for real `x`. Conjugate pairs are combined as
    /// `2 Re(w / (z - x))`, which is exact in the imaginary part.
    pub fn eval_real(&self, x: f64) -> f64 {
        if self.conjugate_pairs_reducible {
            let mut acc = self.constant.re;
            for (p, w) in self.poles.chunks(2).zip(self.weights.chunks(2)) {
                acc += 2.0 * (w[0] / (p[0] - x)).re;
            }
            acc
        } else {
            let z = Complex64::new(x, 0.0);
            let mut acc = self.constant;
            for (&p, &w) in self.poles.iter().zip(&self.weights) {
                acc += w / (p - z);
            }
            acc.re
        }
    }

    /// `r(1/u)` for real `u`, written as `constant + sum w u / (u z - 1)` so
    /// that `u = 0` gives the value at infinity without special casing.
    pub fn eval_at_inverse(&self, u: f64) -> f64 {
        if self.conjugate_pairs_reducible {
            let mut acc = self.constant.re;
            for (p, w) in self.poles.chunks(2).zip(self.weights.chunks(2)) {
                acc += 2.0 * (w[0] * u / (p[0] * u - 1.0)).re;
            }
            acc
        } else {
            let mut acc = self.constant;
            for (&p, &w) in self.poles.iter().zip(&self.weights) {
                acc += w * u / (p * u - 1.0);
            }
            acc.re
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&FilterFile::from(self))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FilterFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn write_json(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        crate::json::write_file(path, &FilterFile::from(self))
    }

    pub fn read_json(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk layout of a filter.
#[derive(Debug, Serialize, Deserialize)]
struct FilterFile {
    kind: FilterKind,
    m: usize,
    shape: Shape,
    poles: Vec<[f64; 2]>,
    weights: Vec<[f64; 2]>,
    constant: [f64; 2],
}

impl From<&RationalFilter> for FilterFile {
    fn from(f: &RationalFilter) -> Self {
        let pair = |z: &Complex64| [z.re, z.im];
        Self {
            kind: f.spec.kind,
            m: f.spec.m,
            shape: f.spec.shape,
            poles: f.poles.iter().map(pair).collect(),
            weights: f.weights.iter().map(pair).collect(),
            constant: pair(&f.constant),
        }
    }
}

impl TryFrom<FilterFile> for RationalFilter {
    type Error = Error;

    fn try_from(f: FilterFile) -> Result<Self> {
        let spec = FilterSpec::new(f.kind, f.m, f.shape)?;
        let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        RationalFilter::from_parts(
            spec,
            f.poles.into_iter().map(c).collect(),
            f.weights.into_iter().map(c).collect(),
            c(f.constant),
        )
    }
}
