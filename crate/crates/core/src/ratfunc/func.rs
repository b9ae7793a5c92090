use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Properness class of a rational function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Properness {
    StrictlyProper,
    ProperNotStrict,
    Improper,
}

/// Exact rational function `num(z) / den(z)` in canonical form: the
/// numerator and denominator are coprime and the denominator is monic, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::constant(BigRational::from_integer(c.into()))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c / z^power`, the shape used for sampled network entries.
    pub fn over_z_power(c: BigRational, power: usize) -> Self {
        RatFunc::canonical(Poly::constant(c), Poly::monomial(BigRational::one(), power))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `deg num - deg den`, or `None` for zero (degree minus infinity).
    pub fn relative_degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// The zero function counts as strictly proper.
    pub fn properness(&self) -> Properness {
        match self.relative_degree() {
            None => Properness::StrictlyProper,
            Some(d) if d < 0 => Properness::StrictlyProper,
            Some(0) => Properness::ProperNotStrict,
            Some(_) => Properness::Improper,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.properness() != Properness::Improper
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.properness() == Properness::StrictlyProper
    }

    /// `lim_{z -> inf}`, defined for proper functions only.
    pub fn limit_at_infinity(&self) -> Option<BigRational> {
        match self.properness() {
            Properness::StrictlyProper => Some(BigRational::zero()),
            Properness::ProperNotStrict => Some(self.num.leading().unwrap() / self.den.leading().unwrap()),
            Properness::Improper => None,
        }
    }

    /// Value at `at`, or `None` at a pole.
    pub fn eval(&self, at: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] to get an error instead.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// JSON form: `{"num": ["1", "-3/2"], "den": ["0", "1"]}`, ascending
/// coefficients as exact rational strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RatFuncRepr {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

pub(crate) fn coeffs_to_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

pub(crate) fn poly_from_strings(cs: &[String]) -> Result<Poly> {
    cs.iter()
        .map(|c| {
            BigRational::from_str(c.trim())
                .map_err(|_| Error::Input(format!("bad rational coefficient {c:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Poly::from_coeffs)
}

impl RatFuncRepr {
    pub fn from_func(f: &RatFunc) -> Self {
        RatFuncRepr {
            num: coeffs_to_strings(&f.num),
            den: coeffs_to_strings(&f.den),
        }
    }

    pub fn into_func(self) -> Result<RatFunc> {
        RatFunc::new(poly_from_strings(&self.num)?, poly_from_strings(&self.den)?)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr::from_func(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RatFuncRepr::deserialize(d)?
            .into_func()
            .map_err(serde::de::Error::custom)
    }
}
