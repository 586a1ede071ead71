//! Exact rational scalars, 3-vectors and signed coordinate axes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar used for every coordinate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: fall back to a rough quotient.
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn q_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{0}`")]
pub struct ScalarParseError(pub String);

/// Parses integers, decimals (`-1.25`), fractions (`3/2`) and scientific
/// notation (`1.5e-3`) into an exact rational.
pub fn parse_q(text: &str) -> Result<Q, ScalarParseError> {
    let err = || ScalarParseError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(numer);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Float-mode parse: read as `f64`, then keep the exact binary value.
pub fn parse_q_float(text: &str) -> Result<Q, ScalarParseError> {
    let err = || ScalarParseError(text.to_string());
    let s = text.trim();
    let value: f64 = if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| err())?;
        let d: f64 = d.trim().parse().map_err(|_| err())?;
        n / d
    } else {
        s.parse().map_err(|_| err())?
    };
    Q::from_float(value).ok_or_else(err)
}

pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Exact 3-vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3(pub [Q; 3]);

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_q(&self.0[0]), format_q(&self.0[1]), format_q(&self.0[2]))
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Vec3 {
    pub fn new(x: Q, y: Q, z: Q) -> Self {
        Vec3([x, y, z])
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3([q(x), q(y), q(z)])
    }

    pub fn zero() -> Self {
        Vec3([Q::zero(), Q::zero(), Q::zero()])
    }

    pub fn x(&self) -> &Q {
        &self.0[0]
    }
    pub fn y(&self) -> &Q {
        &self.0[1]
    }
    pub fn z(&self) -> &Q {
        &self.0[2]
    }

    pub fn dot(&self, o: &Vec3) -> Q {
        &self.0[0] * &o.0[0] + &self.0[1] * &o.0[1] + &self.0[2] * &o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Vec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm2(&self) -> Q {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Vec3 {
        Vec3([&self.0[0] * s, &self.0[1] * s, &self.0[2] * s])
    }

    /// Number of nonzero components.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [q_to_f64(&self.0[0]), q_to_f64(&self.0[1]), q_to_f64(&self.0[2])]
    }

    pub fn parallel(&self, o: &Vec3) -> bool {
        self.cross(o).is_zero()
    }

    /// Component-wise minimum.
    pub fn min_corner(&self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| std::cmp::min(&self.0[i], &o.0[i]).clone()))
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(std::array::from_fn(|i| -&self.0[i]))
    }
}

/// Exact 3x3 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3(pub [Vec3; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Mat3([Vec3::from_ints(1, 0, 0), Vec3::from_ints(0, 1, 0), Vec3::from_ints(0, 0, 1)])
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        Vec3([self.0[0].dot(v), self.0[1].dot(v), self.0[2].dot(v)])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3(std::array::from_fn(|i| Vec3(std::array::from_fn(|j| self.0[j].0[i].clone()))))
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let t = o.transpose();
        Mat3(std::array::from_fn(|i| Vec3(std::array::from_fn(|j| self.0[i].dot(&t.0[j])))))
    }

    pub fn det(&self) -> Q {
        self.0[0].dot(&self.0[1].cross(&self.0[2]))
    }

    /// Rotation from a non-zero integer quaternion `(w, x, y, z)`; the result is
    /// exactly orthogonal with rational entries.
    pub fn from_quaternion(w: i64, x: i64, y: i64, z: i64) -> Mat3 {
        let (w, x, y, z) = (q(w), q(x), q(y), q(z));
        let n = &w * &w + &x * &x + &y * &y + &z * &z;
        assert!(!n.is_zero(), "zero quaternion");
        let two = q(2);
        let e = |v: Q| v / &n;
        Mat3([
            Vec3([
                e(&w * &w + &x * &x - &y * &y - &z * &z),
                e(&two * (&x * &y - &w * &z)),
                e(&two * (&x * &z + &w * &y)),
            ]),
            Vec3([
                e(&two * (&x * &y + &w * &z)),
                e(&w * &w - &x * &x + &y * &y - &z * &z),
                e(&two * (&y * &z - &w * &x)),
            ]),
            Vec3([
                e(&two * (&x * &z - &w * &y)),
                e(&two * (&y * &z + &w * &x)),
                e(&w * &w - &x * &x - &y * &y + &z * &z),
            ]),
        ])
    }

    pub fn is_rotation(&self) -> bool {
        self.mul(&self.transpose()) == Mat3::identity() && self.det() == Q::one()
    }
}

/// Signed coordinate axis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl Axis {
    /// Fixed candidate order used wherever axes are enumerated.
    pub const ALL: [Axis; 6] = [Axis::PosX, Axis::NegX, Axis::PosY, Axis::NegY, Axis::PosZ, Axis::NegZ];

    pub fn index(self) -> usize {
        match self {
            Axis::PosX | Axis::NegX => 0,
            Axis::PosY | Axis::NegY => 1,
            Axis::PosZ | Axis::NegZ => 2,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Axis::PosX | Axis::PosY | Axis::PosZ => 1,
            _ => -1,
        }
    }

    pub fn from_parts(index: usize, positive: bool) -> Axis {
        match (index, positive) {
            (0, true) => Axis::PosX,
            (0, false) => Axis::NegX,
            (1, true) => Axis::PosY,
            (1, false) => Axis::NegY,
            (2, true) => Axis::PosZ,
            (2, false) => Axis::NegZ,
            _ => panic!("axis index out of range"),
        }
    }

    pub fn perpendicular(self, o: Axis) -> bool {
        self.index() != o.index()
    }

    /// Cross product of two perpendicular axes.
    pub fn cross(self, o: Axis) -> Option<Axis> {
        if !self.perpendicular(o) {
            return None;
        }
        let (i, j) = (self.index(), o.index());
        let k = 3 - i - j;
        let cyclic = (i + 1) % 3 == j;
        let positive = (self.sign() * o.sign() > 0) == cyclic;
        Some(Axis::from_parts(k, positive))
    }

    pub fn to_vec(self) -> Vec3 {
        let mut v = Vec3::zero();
        v.0[self.index()] = q(self.sign());
        v
    }

    /// The axis a vector points along, if it has exactly one nonzero component.
    pub fn of_vec(v: &Vec3) -> Option<Axis> {
        if v.support() != 1 {
            return None;
        }
        let i = v.0.iter().position(|c| !c.is_zero())?;
        Some(Axis::from_parts(i, v.0[i].is_positive()))
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::PosX => "+X",
            Axis::NegX => "-X",
            Axis::PosY => "+Y",
            Axis::NegY => "-Y",
            Axis::PosZ => "+Z",
            Axis::NegZ => "-Z",
        }
    }

    pub fn scaled(self, len: &Q) -> Vec3 {
        self.to_vec().scale(len)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Neg for Axis {
    type Output = Axis;
    fn neg(self) -> Axis {
        Axis::from_parts(self.index(), self.sign() < 0)
    }
}

impl Mul<Axis> for i64 {
    type Output = Axis;
    fn mul(self, a: Axis) -> Axis {
        if self < 0 {
            -a
        } else {
            a
        }
    }
}

/// The 24 orientation-preserving signed permutation matrices.
pub fn axis_rotations() -> Vec<Mat3> {
    let mut out = Vec::with_capacity(24);
    for &a in &Axis::ALL {
        for &b in &Axis::ALL {
            if let Some(c) = a.cross(b) {
                out.push(Mat3([a.to_vec(), b.to_vec(), c.to_vec()]));
            }
        }
    }
    out
}
