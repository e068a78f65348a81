//! Compact structure groups used as the codomain of connections.
//!
//! Three backends are provided: the cyclic groups `Z_N` (finite, so every
//! integral over them is an exact finite sum), the circle `U(1)` and
//! `SU(2)`. The two Lie groups are sampled from their normalized Haar
//! measure; `SU(2)` elements are stored as unit quaternions `(w, x, y, z)`
//! standing for the matrix `w·1 + i(x σ_x + y σ_y + z σ_z)`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Below this value of `|sin θ|` the SU(2) character is evaluated through
/// the Chebyshev recurrence instead of the sine ratio.
const SIN_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(u32),
    U1,
    Su2,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "Z_{n}"),
            GroupKind::U1 => f.write_str("U(1)"),
            GroupKind::Su2 => f.write_str("SU(2)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    tolerance: f64,
}

impl GroupDescriptor {
    pub fn cyclic(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("Z_N needs N >= 2, got {n}")));
        }
        Ok(Self { kind: GroupKind::Cyclic(n), tolerance: DEFAULT_TOLERANCE })
    }

    pub fn u1() -> Self {
        Self { kind: GroupKind::U1, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn su2() -> Self {
        Self { kind: GroupKind::Su2, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidGroup(format!("tolerance must be positive, got {tolerance}")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Number of elements, `None` for the Lie groups.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            GroupKind::Cyclic(n) => Some(u64::from(n)),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            GroupKind::Cyclic(n) => GroupElement::Cyclic { modulus: n, residue: 0 },
            GroupKind::U1 => GroupElement::U1 { angle: 0.0 },
            GroupKind::Su2 => GroupElement::Su2(Quaternion::IDENTITY),
        }
    }

    pub fn residue(&self, residue: u32) -> Result<GroupElement> {
        match self.kind {
            GroupKind::Cyclic(n) if residue < n => {
                Ok(GroupElement::Cyclic { modulus: n, residue })
            }
            GroupKind::Cyclic(n) => Err(Error::InvalidGroup(format!(
                "residue {residue} out of range for Z_{n}"
            ))),
            other => Err(Error::KindMismatch(other.to_string(), "Z_N".into())),
        }
    }

    pub fn angle(&self, angle: f64) -> Result<GroupElement> {
        match self.kind {
            GroupKind::U1 if angle.is_finite() => Ok(GroupElement::u1(angle)),
            GroupKind::U1 => Err(Error::InvalidGroup(format!("angle {angle} is not finite"))),
            other => Err(Error::KindMismatch(other.to_string(), "U(1)".into())),
        }
    }

    /// Builds an SU(2) element; the quaternion must have unit norm within
    /// the descriptor tolerance and is renormalized exactly.
    pub fn quaternion(&self, w: f64, x: f64, y: f64, z: f64) -> Result<GroupElement> {
        if self.kind != GroupKind::Su2 {
            return Err(Error::KindMismatch(self.kind.to_string(), "SU(2)".into()));
        }
        let q = Quaternion { w, x, y, z };
        let norm2 = q.norm_squared();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > self.tolerance {
            return Err(Error::InvalidGroup(format!(
                "quaternion ({w}, {x}, {y}, {z}) has squared norm {norm2}"
            )));
        }
        Ok(GroupElement::Su2(q.normalized()))
    }

    /// All elements of a finite group in ascending residue order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        match self.kind {
            GroupKind::Cyclic(n) => Ok((0..n)
                .map(|residue| GroupElement::Cyclic { modulus: n, residue })
                .collect()),
            other => Err(Error::NotFinite(other.to_string())),
        }
    }

    /// Draws one element from the normalized Haar measure.
    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            GroupKind::Cyclic(n) => {
                GroupElement::Cyclic { modulus: n, residue: rng.random_range(0..n) }
            }
            GroupKind::U1 => GroupElement::u1(rng.random::<f64>() * TAU),
            GroupKind::Su2 => loop {
                // Rotation invariance of the 4d Gaussian makes the normalized
                // draw uniform on S^3, i.e. Haar on SU(2).
                let q = Quaternion {
                    w: rng.sample(StandardNormal),
                    x: rng.sample(StandardNormal),
                    y: rng.sample(StandardNormal),
                    z: rng.sample(StandardNormal),
                };
                if q.norm_squared() > 1e-24 {
                    break GroupElement::Su2(q.normalized());
                }
            },
        }
    }

    pub fn check_label(&self, label: CharLabel) -> Result<()> {
        match self.kind {
            GroupKind::Su2 if label.0 < 0 => Err(Error::InvalidLabel {
                group: self.kind.to_string(),
                label: format!("2j = {}", label.0),
            }),
            _ => Ok(()),
        }
    }

    /// Irreducible character `χ_label(g)`.
    pub fn character(&self, label: CharLabel, g: &GroupElement) -> Result<Complex64> {
        self.check_label(label)?;
        self.check_element(g)?;
        Ok(match *g {
            GroupElement::Cyclic { modulus, residue } => {
                let k = label.0.rem_euclid(i64::from(modulus));
                let phase = (k * i64::from(residue)) % i64::from(modulus);
                Complex64::from_polar(1.0, TAU * phase as f64 / f64::from(modulus))
            }
            GroupElement::U1 { angle } => Complex64::from_polar(1.0, label.0 as f64 * angle),
            GroupElement::Su2(q) => Complex64::new(su2_character(label.0 as u32, q.w), 0.0),
        })
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.kind() == self.kind {
            Ok(())
        } else {
            Err(Error::KindMismatch(self.kind.to_string(), g.kind().to_string()))
        }
    }

    pub fn approx_eq(&self, a: &GroupElement, b: &GroupElement) -> bool {
        a.approx_eq(b, self.tolerance)
    }
}

/// Character label: the integer charge `k` for `Z_N` and `U(1)`, twice the
/// spin (`2j`) for `SU(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CharLabel(pub i64);

impl CharLabel {
    pub const TRIVIAL: CharLabel = CharLabel(0);

    pub fn spin(j: f64) -> Option<CharLabel> {
        let two_j = 2.0 * j;
        (two_j >= 0.0 && two_j.fract() == 0.0 && two_j < 1e9).then_some(CharLabel(two_j as i64))
    }

    pub fn is_trivial(&self, kind: GroupKind) -> bool {
        match kind {
            GroupKind::Cyclic(n) => self.0.rem_euclid(i64::from(n)) == 0,
            _ => self.0 == 0,
        }
    }
}

/// `χ_j(θ) = sin((2j+1)θ)/sin θ` with `cos θ = Re tr(g)/2 = w`.
fn su2_character(two_j: u32, w: f64) -> f64 {
    let cos_theta = w.clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let sin_theta = theta.sin();
    if sin_theta.abs() < SIN_CUTOFF {
        chebyshev_u(two_j, cos_theta)
    } else {
        ((f64::from(two_j) + 1.0) * theta).sin() / sin_theta
    }
}

/// Chebyshev polynomial of the second kind, `U_n(x)`; `χ_j = U_{2j}(cos θ)`.
pub(crate) fn chebyshev_u(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn norm_squared(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    fn normalized(&self) -> Quaternion {
        let n = self.norm_squared().sqrt();
        Quaternion { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    /// Product matching the matrix product of `w + i v·σ` representatives.
    fn mul(&self, o: &Quaternion) -> Quaternion {
        let (a, b) = (self, o);
        Quaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
            y: a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
            z: a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x),
        }
    }

    fn conj(&self) -> Quaternion {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        let Quaternion { w, x, y, z } = *self;
        [
            [Complex64::new(w, z), Complex64::new(y, x)],
            [Complex64::new(-y, x), Complex64::new(w, -z)],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    Cyclic { modulus: u32, residue: u32 },
    U1 { angle: f64 },
    Su2(Quaternion),
}

impl GroupElement {
    fn u1(angle: f64) -> GroupElement {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        GroupElement::U1 { angle: a }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::Cyclic { modulus, .. } => GroupKind::Cyclic(*modulus),
            GroupElement::U1 { .. } => GroupKind::U1,
            GroupElement::Su2(_) => GroupKind::Su2,
        }
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (
                GroupElement::Cyclic { modulus: n, residue: a },
                GroupElement::Cyclic { modulus: m, residue: b },
            ) if n == m => Ok(GroupElement::Cyclic {
                modulus: *n,
                residue: ((u64::from(*a) + u64::from(*b)) % u64::from(*n)) as u32,
            }),
            (GroupElement::U1 { angle: a }, GroupElement::U1 { angle: b }) => {
                Ok(GroupElement::u1(a + b))
            }
            (GroupElement::Su2(a), GroupElement::Su2(b)) => Ok(GroupElement::Su2(a.mul(b))),
            _ => Err(Error::KindMismatch(self.kind().to_string(), other.kind().to_string())),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match *self {
            GroupElement::Cyclic { modulus, residue } => GroupElement::Cyclic {
                modulus,
                residue: (modulus - residue) % modulus,
            },
            GroupElement::U1 { angle } => GroupElement::u1(-angle),
            GroupElement::Su2(q) => GroupElement::Su2(q.conj()),
        }
    }

    /// `self` for `+1`, `self⁻¹` for `-1`.
    pub fn signed(&self, sign: crate::groupoid::Sign) -> GroupElement {
        match sign {
            crate::groupoid::Sign::Plus => *self,
            crate::groupoid::Sign::Minus => self.inverse(),
        }
    }

    pub fn approx_eq(&self, other: &GroupElement, tolerance: f64) -> bool {
        match (self, other) {
            (
                GroupElement::Cyclic { modulus: n, residue: a },
                GroupElement::Cyclic { modulus: m, residue: b },
            ) => n == m && a == b,
            (GroupElement::U1 { angle: a }, GroupElement::U1 { angle: b }) => {
                let d = (a - b).rem_euclid(TAU);
                d.min(TAU - d) <= tolerance
            }
            (GroupElement::Su2(a), GroupElement::Su2(b)) => {
                (a.w - b.w).abs() <= tolerance
                    && (a.x - b.x).abs() <= tolerance
                    && (a.y - b.y).abs() <= tolerance
                    && (a.z - b.z).abs() <= tolerance
            }
            _ => false,
        }
    }

    /// Dimension of the fundamental representation.
    pub fn fundamental_dim(&self) -> usize {
        match self {
            GroupElement::Su2(_) => 2,
            _ => 1,
        }
    }

    /// Entry of the fundamental representation matrix.
    pub fn fundamental_entry(&self, row: usize, col: usize) -> Option<Complex64> {
        match *self {
            GroupElement::Cyclic { modulus, residue } if row == 0 && col == 0 => {
                Some(Complex64::from_polar(1.0, TAU * f64::from(residue) / f64::from(modulus)))
            }
            GroupElement::U1 { angle } if row == 0 && col == 0 => {
                Some(Complex64::from_polar(1.0, angle))
            }
            GroupElement::Su2(q) if row < 2 && col < 2 => Some(q.to_matrix()[row][col]),
            _ => None,
        }
    }

    /// Class angle `θ ∈ [0, π]` for SU(2), angle for U(1).
    pub fn class_angle(&self) -> f64 {
        match *self {
            GroupElement::Cyclic { modulus, residue } => {
                TAU * f64::from(residue) / f64::from(modulus)
            }
            GroupElement::U1 { angle } => angle,
            GroupElement::Su2(q) => q.w.clamp(-1.0, 1.0).acos(),
        }
    }

    /// Residue of a cyclic element.
    pub(crate) fn residue_index(&self) -> Option<u32> {
        match *self {
            GroupElement::Cyclic { residue, .. } => Some(residue),
            _ => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Cyclic { residue, .. } => write!(f, "{residue}"),
            GroupElement::U1 { angle } => write!(f, "e^(i{angle})"),
            GroupElement::Su2(q) => write!(f, "({}, {}, {}, {})", q.w, q.x, q.y, q.z),
        }
    }
}

/// SU(2) element `exp(i θ n·σ)` with unit axis `n`; class angle `θ`.
pub fn su2_from_axis_angle(axis: [f64; 3], theta: f64) -> GroupElement {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let s = theta.sin() / n;
    GroupElement::Su2(Quaternion {
        w: theta.cos(),
        x: axis[0] * s,
        y: axis[1] * s,
        z: axis[2] * s,
    })
}
