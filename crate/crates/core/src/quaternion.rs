//! Hamilton quaternions, the amplitude type of the simulator.
//!
//! Ring operations only require [`num_traits::Num`], so the same type runs
//! over `f64`, `f32`, integers and rationals. Anything involving a square
//! root (norms, approximate comparison) requires [`Real`].
//!
//! Multiplication follows the cycle `i -> j -> k -> i`: a product taken along
//! the cycle gives the third unit (`ij = k`, `jk = i`, `ki = j`), taken
//! against it gives the negated third unit (`ji = -k`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> Quaternion<T> {
    #[inline]
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    /// Components as `[w, x, y, z]`.
    #[inline]
    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array([w, x, y, z]: [T; 4]) -> Self {
        Self { w, x, y, z }
    }
}

impl<T: Num + Copy> Quaternion<T> {
    #[inline]
    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    #[inline]
    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    #[inline]
    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Scalar (real) part.
    #[inline]
    pub fn re(self) -> T {
        self.w
    }

    /// Vector (pure imaginary) part, `x i + y j + z k`.
    #[inline]
    pub fn im(self) -> Self {
        Self::new(T::zero(), self.x, self.y, self.z)
    }

    /// `(re(q), im(q))`; the two always sum back to `q`.
    #[inline]
    pub fn parts(self) -> (T, Self) {
        (self.re(), self.im())
    }

    /// `w² + x² + y² + z²`, which equals `q q*`.
    #[inline]
    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Multiplies every component by a real scalar.
    #[inline]
    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn is_pure(self) -> bool {
        self.w.is_zero()
    }
}

impl<T: Num + Neg<Output = T> + Copy> Quaternion<T> {
    /// Quaternionic conjugate `w - x i - y j - z k`.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// The eight unit elements `±1, ±i, ±j, ±k` of the quaternion group.
    pub fn unit_group() -> [Self; 8] {
        let basis = [Self::one(), Self::i(), Self::j(), Self::k()];
        [
            basis[0], -basis[0], basis[1], -basis[1], basis[2], -basis[2], basis[3], -basis[3],
        ]
    }
}

impl<T: Real> Quaternion<T> {
    /// Euclidean norm `sqrt(q q*)`.
    #[inline]
    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse `q* / |q|²`, or `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            None
        } else {
            Some(self.conj().scale(n.recip()))
        }
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Self) -> T {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    /// Component-wise equality within `tol`.
    #[inline]
    pub fn approx_eq(self, other: Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// True when the j and k components are below `tol`, i.e. the value lies
    /// in the complex subalgebra spanned by `1` and `i`.
    #[inline]
    pub fn is_complex(self, tol: T) -> bool {
        self.y.abs() < tol && self.z.abs() < tol
    }

    /// True when the i, j and k components are below `tol`.
    #[inline]
    pub fn is_real(self, tol: T) -> bool {
        self.x.abs() < tol && self.y.abs() < tol && self.z.abs() < tol
    }
}

impl<T: Num + Copy> Zero for Quaternion<T> {
    #[inline]
    fn zero() -> Self {
        Self::real(T::zero())
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl<T: Num + Copy> One for Quaternion<T> {
    #[inline]
    fn one() -> Self {
        Self::real(T::one())
    }
}

impl<T: Num + Copy> Add for Quaternion<T> {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl<T: Num + Copy> Sub for Quaternion<T> {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

/// Hamilton product. Not commutative.
impl<T: Num + Copy> Mul for Quaternion<T> {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl<T: Num + Neg<Output = T> + Copy> Neg for Quaternion<T> {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Num + Copy> AddAssign for Quaternion<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Num + Copy> SubAssign for Quaternion<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Num + Copy> MulAssign for Quaternion<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Num + Copy> From<T> for Quaternion<T> {
    #[inline]
    fn from(w: T) -> Self {
        Self::real(w)
    }
}

/// Renders as `w+xi+yj+zk`, folding negative components into the sign,
/// e.g. `0.5-1i+0j+2k`. A precision given to the formatter applies to every
/// component.
impl<T> fmt::Display for Quaternion<T>
where
    T: fmt::Display + Num + PartialOrd + Neg<Output = T> + Copy,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_num = |f: &mut fmt::Formatter<'_>, v: T| match f.precision() {
            Some(p) => write!(f, "{:.*}", p, v),
            None => write!(f, "{}", v),
        };
        // -0.0 renders as "-0"; normalise it away
        let clean = |v: T| if v.is_zero() { T::zero() } else { v };

        write_num(f, clean(self.w))?;
        for (v, unit) in [(self.x, 'i'), (self.y, 'j'), (self.z, 'k')] {
            let v = clean(v);
            if v < T::zero() {
                f.write_str("-")?;
                write_num(f, -v)?;
            } else {
                f.write_str("+")?;
                write_num(f, v)?;
            }
            write!(f, "{unit}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid quaternion literal {input:?}: {reason}")]
pub struct ParseQuaternionError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses sums of signed terms such as `1+i+j+k`, `-k`, `0.5-2.5j`,
/// `3+2i` or the full rendered form `1+0i-1j+0k`. Repeated units add up.
impl<T> FromStr for Quaternion<T>
where
    T: FromStr + Num + Neg<Output = T> + Copy,
{
    type Err = ParseQuaternionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseQuaternionError {
            input: s.to_owned(),
            reason,
        };
        let compact: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }

        let mut acc = Self::zero();
        let mut pos = 0;
        while pos < compact.len() {
            let mut negative = false;
            match compact[pos] {
                '+' => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if pos != 0 => return Err(err("terms must be separated by + or -")),
                _ => {}
            }

            let start = pos;
            while pos < compact.len() {
                let c = compact[pos];
                let exponent_sign =
                    (c == '+' || c == '-') && pos > start && matches!(compact[pos - 1], 'e' | 'E');
                if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exponent_sign {
                    pos += 1;
                } else {
                    break;
                }
            }
            let number: String = compact[start..pos].iter().collect();

            let unit = match compact.get(pos) {
                Some('i') => Some(Self::i()),
                Some('j') => Some(Self::j()),
                Some('k') => Some(Self::k()),
                _ => None,
            };
            if unit.is_some() {
                pos += 1;
            }

            let coeff = if number.is_empty() {
                if unit.is_none() {
                    return Err(err("expected a number or unit"));
                }
                T::one()
            } else {
                number.parse::<T>().map_err(|_| err("malformed number"))?
            };
            let coeff = if negative { -coeff } else { coeff };
            acc += match unit {
                Some(u) => Self::new(u.w * coeff, u.x * coeff, u.y * coeff, u.z * coeff),
                None => Self::real(coeff),
            };
        }
        Ok(acc)
    }
}
