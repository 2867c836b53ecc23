use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. Always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The scalar fields used throughout the crate: the rationals and the Gaussian
/// rationals. Conjugation is the identity on the rationals.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Eq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Send
    + Sync
    + 'static
{
    fn conj(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    /// Lexicographic total order used only for canonical sorting.
    fn sort_key(&self) -> (Rational, Rational);
}

impl Field for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn sort_key(&self) -> (Rational, Rational) {
        (self.clone(), Rational::zero())
    }
}

/// An element `re + i·im` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl From<Rational> for GaussRational {
    fn from(r: Rational) -> Self {
        GaussRational::real(r)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", format_rational(&self.im));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}i",
            format_rational(&self.re),
            sign,
            format_rational(&self.im.abs())
        )
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Add<&'a GaussRational> for GaussRational {
    type Output = GaussRational;
    fn add(self, o: &'a GaussRational) -> GaussRational {
        GaussRational {
            re: self.re + &o.re,
            im: self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a GaussRational> for GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &'a GaussRational) -> GaussRational {
        GaussRational {
            re: self.re - &o.re,
            im: self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a GaussRational> for GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &'a GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(self.re * &o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a GaussRational> for GaussRational {
    type Output = GaussRational;
    fn div(self, o: &'a GaussRational) -> GaussRational {
        assert!(!o.is_zero(), "division by zero in ℚ(i)");
        if o.im.is_zero() {
            return GaussRational {
                re: self.re / &o.re,
                im: self.im / &o.re,
            };
        }
        let d = o.norm_sqr();
        GaussRational {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $m(self, o: GaussRational) -> GaussRational {
                $tr::$m(self, &o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Field for GaussRational {
    fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn from_rational(r: Rational) -> Self {
        GaussRational::real(r)
    }

    fn sort_key(&self) -> (Rational, Rational) {
        (self.re.clone(), self.im.clone())
    }
}

/// Shorthand for `a + b i` with integer parts.
pub fn gauss(re: i64, im: i64) -> GaussRational {
    GaussRational::new(rat(re), rat(im))
}
