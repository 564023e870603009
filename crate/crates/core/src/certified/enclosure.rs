use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::CompleteRound;
use rug::{Float, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Significant decimal digits used when an enclosure is written out.
pub const DECIMAL_DIGITS: usize = 25;

/// A closed interval `[lo, hi]` with finite binary endpoints that is
/// guaranteed to contain the exact real it stands for.
///
/// Every operation rounds the lower endpoint toward `-inf` and the upper
/// endpoint toward `+inf`, at the larger of the operand precisions.
#[derive(Clone, PartialEq)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(
                "enclosure endpoints must be finite".into(),
            ));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "empty enclosure [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub(crate) fn from_parts(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure [{lo}, {hi}]");
        Self { lo, hi }
    }

    /// Degenerate enclosure holding exactly `x`.
    pub fn point(x: Float) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        let lo = Float::with_val_round(bits, n, Round::Down).0;
        let hi = Float::with_val_round(bits, n, Round::Up).0;
        Self { lo, hi }
    }

    pub fn from_u64(n: u64, bits: u32) -> Self {
        let lo = Float::with_val_round(bits, n, Round::Down).0;
        let hi = Float::with_val_round(bits, n, Round::Up).0;
        Self { lo, hi }
    }

    /// Exact for every finite double as long as `bits >= 53`.
    pub fn from_f64(x: f64, bits: u32) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("{x} is not finite")));
        }
        let lo = Float::with_val_round(bits, x, Round::Down).0;
        let hi = Float::with_val_round(bits, x, Round::Up).0;
        Ok(Self { lo, hi })
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let lo = Float::with_val_round(bits, q, Round::Down).0;
        let hi = Float::with_val_round(bits, q, Round::Up).0;
        Self { lo, hi }
    }

    pub fn from_ratio(num: i64, den: u64, bits: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::IndeterminateDivision);
        }
        Ok(Self::from_rational(&Rational::from((num, den)), bits))
    }

    /// Parses a decimal literal (e.g. `"2.3"`, `"1e-6"`) without going
    /// through a double: the endpoints are the two `bits`-bit neighbours of
    /// the exact decimal value (equal when it is representable).
    pub fn from_decimal(s: &str, bits: u32) -> Result<Self> {
        let parse = || {
            Float::parse(s.trim())
                .map_err(|e| Error::InvalidArgument(format!("cannot parse {s:?} as a real: {e}")))
        };
        let lo = Float::with_val_round(bits, parse()?, Round::Down).0;
        let hi = Float::with_val_round(bits, parse()?, Round::Up).0;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{s:?} is not a finite real"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn pi(bits: u32) -> Self {
        let lo = Float::with_val_round(bits, Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(bits, Constant::Pi, Round::Up).0;
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    /// Lower endpoint rounded down to a double.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    /// Upper endpoint rounded up to a double.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        let m = Float::with_val(self.prec() + 1, &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `other` lies inside `self`.
    pub fn encloses(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi >= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        Self::from_parts(lo.clone(), hi.clone())
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        (lo <= hi).then(|| Self::from_parts(lo.clone(), hi.clone()))
    }

    /// Re-rounds both endpoints outward to `bits`.
    pub fn with_prec(&self, bits: u32) -> Enclosure {
        let lo = Float::with_val_round(bits, &self.lo, Round::Down).0;
        let hi = Float::with_val_round(bits, &self.hi, Round::Up).0;
        Self { lo, hi }
    }

    pub fn lower_point(&self) -> Enclosure {
        Self::point(self.lo.clone())
    }

    pub fn upper_point(&self) -> Enclosure {
        Self::point(self.hi.clone())
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_sign_positive() && !self.lo.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn recip(&self) -> Result<Enclosure> {
        Enclosure::from_int(1, self.prec()).div(self)
    }

    pub fn div(&self, rhs: &Enclosure) -> Result<Enclosure> {
        if rhs.contains_zero() {
            return Err(Error::IndeterminateDivision);
        }
        let prec = self.prec().max(rhs.prec());
        Ok(corners(prec, self, rhs, |a, b, p, rnd| {
            Float::with_val_round(p, a / b, rnd).0
        }))
    }

    pub fn div_u64(&self, n: u64) -> Result<Enclosure> {
        self.div(&Enclosure::from_u64(n, self.prec()))
    }

    pub fn mul_u64(&self, n: u64) -> Enclosure {
        self * &Enclosure::from_u64(n, self.prec())
    }

    pub fn square(&self) -> Enclosure {
        let prec = self.prec();
        if self.lo >= 0 {
            Self::from_parts(
                Float::with_val_round(prec, self.lo.square_ref(), Round::Down).0,
                Float::with_val_round(prec, self.hi.square_ref(), Round::Up).0,
            )
        } else if self.hi <= 0 {
            Self::from_parts(
                Float::with_val_round(prec, self.hi.square_ref(), Round::Down).0,
                Float::with_val_round(prec, self.lo.square_ref(), Round::Up).0,
            )
        } else {
            let m = if self.lo.clone().abs() >= self.hi {
                &self.lo
            } else {
                &self.hi
            };
            Self::from_parts(
                Float::new(prec),
                Float::with_val_round(prec, m.square_ref(), Round::Up).0,
            )
        }
    }

    /// `n`-th power by repeated squaring (`n >= 0`).
    pub fn powu(&self, mut n: u32) -> Enclosure {
        let mut base = self.clone();
        let mut acc = Enclosure::from_int(1, self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn exp(&self) -> Enclosure {
        let prec = self.prec();
        Self::from_parts(
            Float::with_val_round(prec, self.lo.exp_ref(), Round::Down).0,
            Float::with_val_round(prec, self.hi.exp_ref(), Round::Up).0,
        )
    }

    pub fn ln(&self) -> Result<Enclosure> {
        if !self.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "logarithm of a non-positive enclosure [{}, {}]",
                self.lo, self.hi
            )));
        }
        let prec = self.prec();
        Ok(Self::from_parts(
            Float::with_val_round(prec, self.lo.ln_ref(), Round::Down).0,
            Float::with_val_round(prec, self.hi.ln_ref(), Round::Up).0,
        ))
    }

    /// `self ^ exponent` as `exp(exponent * ln self)`.
    pub fn pow(&self, exponent: &Enclosure) -> Result<Enclosure> {
        if !self.is_positive() {
            return Err(Error::InvalidArgument(
                "power of a non-positive base".into(),
            ));
        }
        Ok((&self.ln()? * exponent).exp())
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi >= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        Self::from_parts(lo.clone(), hi.clone())
    }

    pub fn min(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        Self::from_parts(lo.clone(), hi.clone())
    }

    /// Widens by `[-r, r]` for a non-negative radius `r`.
    pub fn inflate(&self, radius: &Float) -> Enclosure {
        let prec = self.prec();
        Self::from_parts(
            Float::with_val_round(prec, &self.lo - radius, Round::Down).0,
            Float::with_val_round(prec, &self.hi + radius, Round::Up).0,
        )
    }

    pub fn lo_decimal(&self) -> String {
        format_decimal(&self.lo, Round::Down)
    }

    pub fn hi_decimal(&self) -> String {
        format_decimal(&self.hi, Round::Up)
    }
}

fn format_decimal(x: &Float, round: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(DECIMAL_DIGITS), round)
}

/// Evaluates `op` on the four endpoint pairs and keeps the outward extremes.
fn corners(
    prec: u32,
    a: &Enclosure,
    b: &Enclosure,
    op: impl Fn(&Float, &Float, u32, Round) -> Float,
) -> Enclosure {
    let pairs = [
        (&a.lo, &b.lo),
        (&a.lo, &b.hi),
        (&a.hi, &b.lo),
        (&a.hi, &b.hi),
    ];
    let lo = pairs
        .iter()
        .map(|(x, y)| op(x, y, prec, Round::Down))
        .min_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .expect("four corners");
    let hi = pairs
        .iter()
        .map(|(x, y)| op(x, y, prec, Round::Up))
        .max_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .expect("four corners");
    Enclosure::from_parts(lo, hi)
}

impl Add for &Enclosure {
    type Output = Enclosure;

    fn add(self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec().max(rhs.prec());
        Enclosure::from_parts(
            (&self.lo + &rhs.lo).complete_round(prec, Round::Down).0,
            (&self.hi + &rhs.hi).complete_round(prec, Round::Up).0,
        )
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;

    fn sub(self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec().max(rhs.prec());
        Enclosure::from_parts(
            (&self.lo - &rhs.hi).complete_round(prec, Round::Down).0,
            (&self.hi - &rhs.lo).complete_round(prec, Round::Up).0,
        )
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;

    fn mul(self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec().max(rhs.prec());
        if self.lo >= 0 && rhs.lo >= 0 {
            return Enclosure::from_parts(
                (&self.lo * &rhs.lo).complete_round(prec, Round::Down).0,
                (&self.hi * &rhs.hi).complete_round(prec, Round::Up).0,
            );
        }
        corners(prec, self, rhs, |a, b, p, rnd| {
            Float::with_val_round(p, a * b, rnd).0
        })
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;

    fn neg(self) -> Enclosure {
        Enclosure::from_parts(-self.hi.clone(), -self.lo.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: &Enclosure) -> Enclosure {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(), self.hi_decimal())
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(), self.hi_decimal())
    }
}

#[derive(Serialize, Deserialize)]
struct EnclosureRepr {
    lo: String,
    hi: String,
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EnclosureRepr {
            lo: self.lo_decimal(),
            hi: self.hi_decimal(),
        }
        .serialize(serializer)
    }
}

/// Reading back rounds each decimal outward at 128 bits, so a
/// serialize/deserialize cycle can only widen.
impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = EnclosureRepr::deserialize(deserializer)?;
        let lo = Enclosure::from_decimal(&repr.lo, 128).map_err(D::Error::custom)?;
        let hi = Enclosure::from_decimal(&repr.hi, 128).map_err(D::Error::custom)?;
        Enclosure::new(lo.lo, hi.hi).map_err(D::Error::custom)
    }
}
