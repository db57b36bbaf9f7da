//! Exact arithmetic in the Eisenstein integers `Z[ω]`, `ω = -1/2 + i·√3/2`.
//!
//! Values are stored in the basis `{1, ω}`; `ω²` reduces to `-1 - ω`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("Eisenstein integer overflow in {op}")]
pub struct Overflow {
    pub op: &'static str,
}

/// The value `one + omega·ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInt {
    pub one: i64,
    pub omega: i64,
}

impl EisensteinInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const OMEGA: Self = Self::new(0, 1);
    pub const OMEGA_SQ: Self = Self::new(-1, -1);

    pub const fn new(one: i64, omega: i64) -> Self {
        Self { one, omega }
    }

    pub const fn from_int(v: i64) -> Self {
        Self::new(v, 0)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, Overflow> {
        let err = Overflow { op: "add" };
        Ok(Self::new(
            self.one.checked_add(rhs.one).ok_or(err)?,
            self.omega.checked_add(rhs.omega).ok_or(err)?,
        ))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, Overflow> {
        let err = Overflow { op: "sub" };
        Ok(Self::new(
            self.one.checked_sub(rhs.one).ok_or(err)?,
            self.omega.checked_sub(rhs.omega).ok_or(err)?,
        ))
    }

    /// `(a + bω)(c + dω) = (ac - bd) + (ad + bc - bd)ω`.
    pub fn checked_mul(self, rhs: Self) -> Result<Self, Overflow> {
        let err = Overflow { op: "mul" };
        let (a, b, c, d) = (self.one, self.omega, rhs.one, rhs.omega);
        let ac = a.checked_mul(c).ok_or(err)?;
        let bd = b.checked_mul(d).ok_or(err)?;
        let ad = a.checked_mul(d).ok_or(err)?;
        let bc = b.checked_mul(c).ok_or(err)?;
        Ok(Self::new(
            ac.checked_sub(bd).ok_or(err)?,
            ad.checked_add(bc)
                .and_then(|s| s.checked_sub(bd))
                .ok_or(err)?,
        ))
    }

    pub fn checked_scale(self, k: i64) -> Result<Self, Overflow> {
        let err = Overflow { op: "scale" };
        Ok(Self::new(
            self.one.checked_mul(k).ok_or(err)?,
            self.omega.checked_mul(k).ok_or(err)?,
        ))
    }

    /// Complex conjugate: `a + bω ↦ a + bω² = (a - b) - bω`.
    pub fn checked_conj(self) -> Result<Self, Overflow> {
        let err = Overflow { op: "conj" };
        Ok(Self::new(
            self.one.checked_sub(self.omega).ok_or(err)?,
            self.omega.checked_neg().ok_or(err)?,
        ))
    }

    pub fn conj(self) -> Self {
        self.checked_conj().expect("Eisenstein integer overflow in conj")
    }

    /// `|x|² = a² - ab + b²`.
    pub fn norm(self) -> Result<i64, Overflow> {
        let err = Overflow { op: "norm" };
        let (a, b) = (self.one, self.omega);
        a.checked_mul(a)
            .and_then(|aa| aa.checked_sub(a.checked_mul(b)?))
            .and_then(|s| s.checked_add(b.checked_mul(b)?))
            .ok_or(err)
    }

    pub fn is_zero(self) -> bool {
        self.one == 0 && self.omega == 0
    }

    /// The value as a rational integer, if it has no `ω` component.
    pub fn as_int(self) -> Option<i64> {
        (self.omega == 0).then_some(self.one)
    }

    /// Builds `a·1 + b·ω + c·ω²`.
    pub fn from_root_counts(a: i64, b: i64, c: i64) -> Result<Self, Overflow> {
        let err = Overflow { op: "from_root_counts" };
        Ok(Self::new(
            a.checked_sub(c).ok_or(err)?,
            b.checked_sub(c).ok_or(err)?,
        ))
    }

    pub fn to_complex(self) -> (f64, f64) {
        let (a, b) = (self.one as f64, self.omega as f64);
        (a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

/// True iff `a·1 + b·ω + c·ω² = 0`, which holds exactly when `a = b = c`.
pub fn real_combination_is_zero(a: i64, b: i64, c: i64) -> bool {
    EisensteinInt::from_root_counts(a, b, c).is_ok_and(EisensteinInt::is_zero)
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("Eisenstein integer overflow in add")
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("Eisenstein integer overflow in sub")
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("Eisenstein integer overflow in mul")
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::ZERO - self
    }
}

impl From<i64> for EisensteinInt {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.one, self.omega) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

/// A cube root of unity `ω^t`, `t ∈ {0, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CubeRoot(u8);

impl CubeRoot {
    pub const ONE: Self = Self(0);
    pub const OMEGA: Self = Self(1);
    pub const OMEGA_SQ: Self = Self(2);
    pub const ALL: [Self; 3] = [Self::ONE, Self::OMEGA, Self::OMEGA_SQ];

    /// `ω^t` for any integer exponent.
    pub fn pow(t: i64) -> Self {
        Self(t.rem_euclid(3) as u8)
    }

    pub const fn from_exponent(t: u8) -> Self {
        Self(t % 3)
    }

    pub const fn exponent(self) -> u8 {
        self.0
    }

    pub const fn conj(self) -> Self {
        Self((3 - self.0) % 3)
    }

    pub fn to_eisenstein(self) -> EisensteinInt {
        match self.0 {
            0 => EisensteinInt::ONE,
            1 => EisensteinInt::OMEGA,
            _ => EisensteinInt::OMEGA_SQ,
        }
    }

    pub fn to_complex(self) -> (f64, f64) {
        self.to_eisenstein().to_complex()
    }

    /// The `.crsm` token: `1`, `w` or `W`.
    pub const fn token(self) -> char {
        match self.0 {
            0 => '1',
            1 => 'w',
            _ => 'W',
        }
    }
}

impl Mul for CubeRoot {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self((self.0 + rhs.0) % 3)
    }
}

impl fmt::Display for CubeRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "ω",
            _ => "ω²",
        })
    }
}
