// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic in real quadratic fields `Q(√d)`.
//!
//! Every coordinate of a surface lives in one field `Q(√d)` with `d`
//! square-free (`d = 0` means plain rationals). Comparisons are decided
//! exactly: the sign of `a + b√d` is computed from `a²` versus `d·b²`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseExactError;

pub type Rational = Ratio<i128>;

/// An element `a + b√d` of a real quadratic field.
///
/// Values with `b = 0` are field-agnostic and combine with any `d`.
#[derive(Clone, Debug)]
pub struct ExactCoord {
    a: Rational,
    b: Rational,
    d: u32,
}

pub fn is_square_free(d: u32) -> bool {
    if d <= 1 {
        return d == 0 || d == 1;
    }
    let mut p = 2u32;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = *q.numer();
    let m = *q.denom();
    let rn = n.sqrt();
    let rm = m.sqrt();
    (rn * rn == n && rm * rm == m).then(|| Rational::new(rn, rm))
}

impl ExactCoord {
    pub fn new(a: Rational, b: Rational, d: u32) -> Self {
        if b.is_zero() || d == 0 {
            assert!(b.is_zero() || d != 0, "irrational part requires d > 0");
            return ExactCoord {
                a,
                b: Rational::zero(),
                d: 0,
            };
        }
        assert!(d > 1 && is_square_free(d), "d = {d} must be square-free");
        ExactCoord { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        ExactCoord::new(a, Rational::zero(), 0)
    }

    pub fn int(n: i64) -> Self {
        ExactCoord::rational(Rational::from_integer(n as i128))
    }

    pub fn frac(n: i64, m: i64) -> Self {
        ExactCoord::rational(Rational::new(n as i128, m as i128))
    }

    /// `p/q + (r/s)·√d`.
    pub fn quad(p: i64, q: i64, r: i64, s: i64, d: u32) -> Self {
        ExactCoord::new(
            Rational::new(p as i128, q as i128),
            Rational::new(r as i128, s as i128),
            d,
        )
    }

    pub fn zero() -> Self {
        ExactCoord::int(0)
    }

    pub fn one() -> Self {
        ExactCoord::int(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// The discriminant carried by this value, `0` when it is rational.
    pub fn discriminant(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn join(&self, other: &Self) -> u32 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d, e) => {
                assert_eq!(d, e, "mixing Q(√{d}) and Q(√{e})");
                d
            }
        }
    }

    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let lhs = self.a * self.a;
        let rhs = self.b * self.b * Rational::from_integer(self.d as i128);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b√d`.
    pub fn conjugate(&self) -> Self {
        ExactCoord::new(self.a, -self.b, self.d)
    }

    /// Field norm `a² - d·b²`.
    pub fn norm(&self) -> Rational {
        self.a * self.a - self.b * self.b * Rational::from_integer(self.d as i128)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        let n = self.norm();
        let c = self.conjugate();
        ExactCoord::new(c.a / n, c.b / n, c.d)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// The square root inside the same field, when one exists.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(ExactCoord::zero());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(ExactCoord::rational(r));
            }
            // sqrt(a) = y√d requires a = d·y²; this only happens when the surface
            // field is known, which a purely rational value does not carry.
            return None;
        }
        // (x + y√d)² = x² + d y² + 2xy√d
        let d = Rational::from_integer(self.d as i128);
        let disc = self.a * self.a - d * self.b * self.b;
        let root = rational_sqrt(&disc)?;
        let two = Rational::from_integer(2);
        for x2 in [(self.a + root) / two, (self.a - root) / two] {
            if x2.is_positive() {
                if let Some(x) = rational_sqrt(&x2) {
                    let y = self.b / (two * x);
                    let cand = ExactCoord::new(x, y, self.d);
                    if cand.signum() > 0 && &(&cand * &cand) == self {
                        return Some(cand);
                    }
                    let cand = -cand;
                    if cand.signum() > 0 && &(&cand * &cand) == self {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

fn sign_of(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for ExactCoord {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for ExactCoord {}

impl std::hash::Hash for ExactCoord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for ExactCoord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactCoord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactCoord> for ExactCoord {
            type Output = ExactCoord;
            fn $m(self, rhs: ExactCoord) -> ExactCoord {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactCoord> for ExactCoord {
            type Output = ExactCoord;
            fn $m(self, rhs: &'a ExactCoord) -> ExactCoord {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactCoord> for &'a ExactCoord {
            type Output = ExactCoord;
            fn $m(self, rhs: ExactCoord) -> ExactCoord {
                self.$m(&rhs)
            }
        }
    };
}

impl<'a, 'b> Add<&'b ExactCoord> for &'a ExactCoord {
    type Output = ExactCoord;
    fn add(self, rhs: &'b ExactCoord) -> ExactCoord {
        let d = self.join(rhs);
        ExactCoord::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl<'a, 'b> Sub<&'b ExactCoord> for &'a ExactCoord {
    type Output = ExactCoord;
    fn sub(self, rhs: &'b ExactCoord) -> ExactCoord {
        let d = self.join(rhs);
        ExactCoord::new(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl<'a, 'b> Mul<&'b ExactCoord> for &'a ExactCoord {
    type Output = ExactCoord;
    fn mul(self, rhs: &'b ExactCoord) -> ExactCoord {
        let d = self.join(rhs);
        let dq = Rational::from_integer(d as i128);
        ExactCoord::new(
            self.a * rhs.a + dq * self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
            d,
        )
    }
}

impl<'a, 'b> Div<&'b ExactCoord> for &'a ExactCoord {
    type Output = ExactCoord;
    fn div(self, rhs: &'b ExactCoord) -> ExactCoord {
        self * &rhs.recip()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &ExactCoord {
    type Output = ExactCoord;
    fn neg(self) -> ExactCoord {
        ExactCoord::new(-self.a, -self.b, self.d)
    }
}

impl Neg for ExactCoord {
    type Output = ExactCoord;
    fn neg(self) -> ExactCoord {
        -&self
    }
}

impl From<i64> for ExactCoord {
    fn from(n: i64) -> Self {
        ExactCoord::int(n)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form: `a`, `a/b`, `a+c/e√d`, `-c/e√d`, …
///
/// The rational part is omitted when it is zero and the irrational part is
/// present; the irrational coefficient is always written, even when it is 1.
impl fmt::Display for ExactCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let irr = format!("{}√{}", fmt_rational(&self.b.abs()), self.d);
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{irr}")
            } else {
                write!(f, "{irr}")
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{irr}", fmt_rational(&self.a))
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, ParseExactError> {
    let bad = || ParseExactError(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, m)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let m: i128 = m.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, m))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a coefficient in front of `√`: empty, `+` and `-` mean ±1.
fn parse_coefficient(s: &str) -> Result<Rational, ParseExactError> {
    let t = s.trim();
    match t {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        _ => {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, t.strip_prefix('+').unwrap_or(t)),
            };
            let q = parse_rational(body)?;
            Ok(if sign < 0 { -q } else { q })
        }
    }
}

impl FromStr for ExactCoord {
    type Err = ParseExactError;

    /// Accepts `a/b + c/e√d` with optional spaces, either part optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseExactError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let Some(root_at) = compact.find('√') else {
            return Ok(ExactCoord::rational(parse_rational(&compact)?));
        };
        let d: u32 = compact[root_at + '√'.len_utf8()..]
            .parse()
            .map_err(|_| bad())?;
        if d < 2 || !is_square_free(d) {
            return Err(bad());
        }
        let head = &compact[..root_at];
        // split the head at the last sign that is not leading
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (rat, coef) = match split {
            Some(i) => (parse_rational(&head[..i])?, parse_coefficient(&head[i..])?),
            None => (Rational::zero(), parse_coefficient(head)?),
        };
        Ok(ExactCoord::new(rat, coef, d))
    }
}

/// Sign-exact 2-vector over `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: ExactCoord,
    pub y: ExactCoord,
}

impl Vec2 {
    pub fn new(x: ExactCoord, y: ExactCoord) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2::new(ExactCoord::int(x), ExactCoord::int(y))
    }

    pub fn zero() -> Self {
        Vec2::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, o: &Vec2) -> ExactCoord {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> ExactCoord {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm_sq(&self) -> ExactCoord {
        self.dot(self)
    }

    pub fn scale(&self, k: &ExactCoord) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Half-plane index used for angular sorting: 0 for `arg ∈ [0, π)`, 1 otherwise.
    pub fn half(&self) -> u8 {
        let sy = self.y.signum();
        if sy > 0 || (sy == 0 && self.x.signum() > 0) {
            0
        } else {
            1
        }
    }

    /// Compares `arg(self)` with `arg(other)` in `[0, 2π)`; parallel vectors
    /// pointing the same way compare equal regardless of length.
    pub fn cmp_arg(&self, other: &Vec2) -> Ordering {
        self.half()
            .cmp(&other.half())
            .then_with(|| 0.cmp(&self.cross(other).signum()))
    }

    /// Same direction (positive multiples of each other).
    pub fn same_direction(&self, other: &Vec2) -> bool {
        self.cross(other).is_zero() && self.dot(other).signum() > 0
    }
}

impl<'a, 'b> Add<&'b Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, o: &'b Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a, 'b> Sub<&'b Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, o: &'b Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        &self + &o
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        &self - &o
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        -&self
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}
