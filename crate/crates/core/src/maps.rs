//! Map families, orbits, singular values, and tract geometry.
//!
//! Two one-parameter families ship: the exponential maps `E_c(z) = e^z + c`
//! (one asymptotic value, no critical points) and the quadratic maps
//! `Q_c(z) = z² + c` (one critical value) used as the polynomial oracle.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Real part beyond which `e^z` overflows a double; evaluation switches to
/// the escape sentinel instead of producing NaNs.
pub const EXP_OVERFLOW_RE: f64 = 700.0;

/// Squared modulus beyond which `z²` is treated as escaped for quadratics.
pub const QUAD_OVERFLOW_NORM_SQR: f64 = 1e300;

/// Default orbit escape radii per family.
pub const EXP_ESCAPE_RADIUS: f64 = 1e10;
pub const QUAD_ESCAPE_RADIUS: f64 = 1e5;

/// Sentinel marking an orbit that left the range of double arithmetic.
pub fn escape_sentinel() -> Complex64 {
    Complex64::new(f64::INFINITY, 0.0)
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Exponential,
    Quadratic,
}

/// A concrete map: family plus complex parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MapSpec {
    pub family: Family,
    pub c: Complex64,
}

impl MapSpec {
    pub fn exponential(c: Complex64) -> Self {
        Self {
            family: Family::Exponential,
            c,
        }
    }

    pub fn quadratic(c: Complex64) -> Self {
        Self {
            family: Family::Quadratic,
            c,
        }
    }

    /// One application of the map. Overflow is reported via the escape
    /// sentinel, never as NaN.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if !is_finite(z) {
            return escape_sentinel();
        }
        match self.family {
            Family::Exponential => {
                if z.re > EXP_OVERFLOW_RE {
                    escape_sentinel()
                } else {
                    z.exp() + self.c
                }
            }
            Family::Quadratic => {
                if z.norm_sqr() > QUAD_OVERFLOW_NORM_SQR {
                    escape_sentinel()
                } else {
                    z * z + self.c
                }
            }
        }
    }

    /// Derivative `f'(z)`.
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        if !is_finite(z) {
            return escape_sentinel();
        }
        match self.family {
            Family::Exponential => {
                if z.re > EXP_OVERFLOW_RE {
                    escape_sentinel()
                } else {
                    z.exp()
                }
            }
            Family::Quadratic => 2.0 * z,
        }
    }

    /// `f^n(z)` together with the chain-rule derivative of the n-th iterate.
    pub fn iterate_with_deriv(&self, z: Complex64, n: u32) -> (Complex64, Complex64) {
        let mut w = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            d *= self.deriv(w);
            w = self.eval(w);
            if !is_finite(w) {
                return (escape_sentinel(), escape_sentinel());
            }
        }
        (w, d)
    }

    pub fn iterate(&self, z: Complex64, n: u32) -> Complex64 {
        let mut w = z;
        for _ in 0..n {
            w = self.eval(w);
            if !is_finite(w) {
                return escape_sentinel();
            }
        }
        w
    }

    /// Forward orbit `z0, f(z0), …`, truncated at the first point whose
    /// modulus exceeds `escape_radius` (flagged) or after `n` steps.
    pub fn orbit(&self, z0: Complex64, n: usize, escape_radius: f64) -> OrbitRecord {
        let mut points = vec![z0];
        if !is_finite(z0) || z0.norm() > escape_radius {
            return OrbitRecord {
                points,
                escaped_at: Some(0),
            };
        }
        for k in 1..=n {
            let z = self.eval(points[k - 1]);
            points.push(z);
            if !is_finite(z) || z.norm() > escape_radius {
                return OrbitRecord {
                    points,
                    escaped_at: Some(k),
                };
            }
        }
        OrbitRecord {
            points,
            escaped_at: None,
        }
    }

    /// The singular values of the family: `{c}` for both, tagged asymptotic
    /// (exponential) or critical (quadratic).
    pub fn singular_values(&self) -> Vec<SingularValue> {
        let kind = match self.family {
            Family::Exponential => SingularKind::Asymptotic,
            Family::Quadratic => SingularKind::Critical,
        };
        vec![SingularValue {
            value: self.c,
            kind,
        }]
    }

    pub fn default_escape_radius(&self) -> f64 {
        match self.family {
            Family::Exponential => EXP_ESCAPE_RADIUS,
            Family::Quadratic => QUAD_ESCAPE_RADIUS,
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.family {
            Family::Exponential => "exp",
            Family::Quadratic => "quad",
        };
        write!(f, "{tag}:{},{}", self.c.re, self.c.im)
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::MapParse(s.to_string());
        let (tag, rest) = s.split_once(':').ok_or_else(err)?;
        let family = match tag.trim() {
            "exp" => Family::Exponential,
            "quad" => Family::Quadratic,
            _ => return Err(err()),
        };
        let (re, im) = rest.split_once(',').ok_or_else(err)?;
        let re: f64 = re.trim().parse().map_err(|_| err())?;
        let im: f64 = im.trim().parse().map_err(|_| err())?;
        if !re.is_finite() || !im.is_finite() {
            return Err(err());
        }
        Ok(Self {
            family,
            c: Complex64::new(re, im),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    Asymptotic,
    Critical,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingularValue {
    pub value: Complex64,
    pub kind: SingularKind,
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub points: Vec<Complex64>,
    /// Index of the first point beyond the escape radius, if any.
    pub escaped_at: Option<usize>,
}

/// Axis-aligned rectangle in the plane, used for periodic-point search boxes
/// and render viewports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("box must be finite".into()));
        }
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::InvalidArgument(format!(
                "empty box {x0},{y0},{x1},{y1}"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Bounding box of this rectangle and a point, padded by `pad`.
    pub fn expanded_to(&self, z: Complex64, pad: f64) -> Rect {
        Rect {
            x0: self.x0.min(z.re - pad),
            y0: self.y0.min(z.im - pad),
            x1: self.x1.max(z.re + pad),
            y1: self.y1.max(z.im + pad),
        }
    }

    /// Centers of an `n × n` grid of cells covering the rectangle.
    pub fn grid_centers(&self, n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let x = self.x0 + (i as f64 + 0.5) / n as f64 * self.width();
                let y = self.y0 + (j as f64 + 0.5) / n as f64 * self.height();
                out.push(Complex64::new(x, y));
            }
        }
        out
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.y0, self.x1, self.y1)
    }
}

impl FromStr for Rect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "cannot parse box {s:?}: expected x0,y0,x1,y1"
            )));
        }
        let mut vals = [0.0; 4];
        for (v, p) in vals.iter_mut().zip(&parts) {
            *v = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse box {s:?}")))?;
        }
        Rect::new(vals[0], vals[1], vals[2], vals[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum TractKind {
    /// Exponential model: the tract is a right half-plane.
    HalfPlane,
    /// Quadratic oracle: the escape region outside a disk plays the role of
    /// the tract, so its complement is always bounded.
    DiskComplement,
}

/// Geometry of the tract and fundamental domains.
///
/// For the exponential map with singular disk `D = {|w − c| ≤ d_radius}`,
/// the tract is the half-plane `Re z > ln d_radius` and the fundamental
/// domains are its horizontal substrips of height 2π, indexed so that strip
/// 0 contains the real direction (relative to the cut height `Im c`).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TractGeometry {
    /// Escape radius used to size the singular disk.
    pub r: f64,
    /// Radius of the disk around the singular values.
    pub d_radius: f64,
    /// Exponential only: the tract is `{ Re z > tract_re }`.
    pub tract_re: f64,
    /// Height of the horizontal cut delta (exponential only).
    pub delta_im: f64,
    kind: TractKind,
}

impl TractGeometry {
    pub fn exponential(m: &MapSpec, r: f64) -> Result<Self> {
        if m.family != Family::Exponential {
            return Err(Error::UnsupportedFamily(
                "half-plane tract geometry requires the exponential family",
            ));
        }
        if r <= 0.0 {
            return Err(Error::InvalidArgument("tract radius must be positive".into()));
        }
        let d_radius = r + m.c.norm();
        Ok(Self {
            r,
            d_radius,
            tract_re: d_radius.ln(),
            delta_im: m.c.im,
            kind: TractKind::HalfPlane,
        })
    }

    pub fn quadratic(m: &MapSpec) -> Result<Self> {
        if m.family != Family::Quadratic {
            return Err(Error::UnsupportedFamily(
                "disk-complement tract geometry requires the quadratic family",
            ));
        }
        // any orbit leaving |z| > max(2, |c|) + 1 escapes
        let radius = m.c.norm().max(2.0) + 1.0;
        Ok(Self {
            r: radius,
            d_radius: radius,
            tract_re: f64::INFINITY,
            delta_im: 0.0,
            kind: TractKind::DiskComplement,
        })
    }

    /// Default geometry for a map: escape radius 10 for the exponential
    /// half-plane, the escape-commitment disk for quadratics.
    pub fn for_map(m: &MapSpec) -> Self {
        match m.family {
            Family::Exponential => Self::exponential(m, 10.0).expect("exponential geometry"),
            Family::Quadratic => Self::quadratic(m).expect("quadratic geometry"),
        }
    }

    pub fn in_tract(&self, z: Complex64) -> bool {
        match self.kind {
            TractKind::HalfPlane => z.re > self.tract_re,
            TractKind::DiskComplement => z.norm() > self.r,
        }
    }

    pub fn outside_tract(&self, z: Complex64) -> bool {
        !self.in_tract(z)
    }

    /// Fundamental-domain index of a tract point: strip
    /// `n = ⌊(Im z − Im c + π) / 2π⌋`, or `None` outside the tract.
    /// Only meaningful for the exponential geometry.
    pub fn strip_index(&self, z: Complex64) -> Option<i32> {
        if self.kind != TractKind::HalfPlane || !self.in_tract(z) {
            return None;
        }
        let n = ((z.im - self.delta_im + std::f64::consts::PI)
            / std::f64::consts::TAU)
            .floor();
        Some(n as i32)
    }
}

/// Strip index of `z` in the tract of the exponential map, `None` outside.
pub fn fundamental_domain_index(m: &MapSpec, z: Complex64, g: &TractGeometry) -> Result<Option<i32>> {
    if m.family != Family::Exponential {
        return Err(Error::UnsupportedFamily(
            "fundamental domains are indexed for the exponential family; the quadratic \
             oracle has no tracts",
        ));
    }
    Ok(g.strip_index(z))
}
