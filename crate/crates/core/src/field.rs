//! Coefficient fields.
//!
//! Everything downstream is written against [`Field`], which only asks for exact
//! field operations and an exact zero test. Two instances ship with the crate:
//! the rationals (real invariant forms) and the Gaussian rationals `ℚ(i)`
//! (complexified forms). [`ComplexField`] adds the imaginary unit and
//! conjugation needed by the bigraded machinery.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field. No tolerances anywhere: `is_zero` is a structural test.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: BigRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// A field with an imaginary unit and an involutive conjugation automorphism.
pub trait ComplexField: Field {
    fn i() -> Self;
    fn conj(&self) -> Self;
    fn re(&self) -> BigRational;
    fn im(&self) -> BigRational;

    /// `i^k` for any integer `k`.
    fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }
}

impl Field for BigRational {
    fn from_rational(r: BigRational) -> Self {
        r
    }
}

impl Field for Complex<BigRational> {
    fn from_rational(r: BigRational) -> Self {
        Complex::new(r, BigRational::zero())
    }
}

impl ComplexField for Complex<BigRational> {
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> BigRational {
        self.re.clone()
    }

    fn im(&self) -> BigRational {
        self.im.clone()
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian rational as `a`, `b*i`, `a+b*i` or `a-b*i`.
pub fn fmt_gaussian<F: ComplexField>(z: &F) -> String {
    let (re, im) = (z.re(), z.im());
    if im.is_zero() {
        return fmt_rational(&re);
    }
    let imag = if im.abs().is_one() {
        "i".to_string()
    } else {
        format!("{}*i", fmt_rational(&im.abs()))
    };
    match (re.is_zero(), im.is_negative()) {
        (true, false) => imag,
        (true, true) => format!("-{imag}"),
        (false, false) => format!("{}+{imag}", fmt_rational(&re)),
        (false, true) => format!("{}-{imag}", fmt_rational(&re)),
    }
}

/// Display adaptor for any scalar used in reports.
pub trait ScalarDisplay {
    fn display(&self) -> String;
}

impl ScalarDisplay for BigRational {
    fn display(&self) -> String {
        fmt_rational(self)
    }
}

impl ScalarDisplay for Complex<BigRational> {
    fn display(&self) -> String {
        fmt_gaussian(self)
    }
}

/// Wrapper implementing `Display` through [`ScalarDisplay`].
pub struct Shown<'a, T: ScalarDisplay>(pub &'a T);

impl<T: ScalarDisplay> Display for Shown<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.display())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;
    use proptest::prelude::*;

    fn gaussian() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9)
            .prop_map(|(a, b, c, d)| Complex::new(rat(a, b), rat(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms_hold_exactly(a in gaussian(), b in gaussian(), c in gaussian()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.inv(), Scalar::one());
            }
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism(a in gaussian(), b in gaussian()) {
            prop_assert_eq!(ComplexField::conj(&ComplexField::conj(&a)), a.clone());
            prop_assert_eq!(
                ComplexField::conj(&(a.clone() * b.clone())),
                ComplexField::conj(&a) * ComplexField::conj(&b)
            );
        }
    }

    #[test]
    fn i_powers_cycle() {
        assert_eq!(Scalar::i_pow(2), -Scalar::one());
        assert_eq!(Scalar::i_pow(-1), -Scalar::i());
        assert_eq!(Scalar::i_pow(5), Scalar::i());
    }

    #[test]
    fn gaussian_formatting() {
        assert_eq!(fmt_gaussian(&Complex::new(rat(1, 2), rat(-3, 1))), "1/2-3*i");
        assert_eq!(fmt_gaussian(&Complex::new(rat(0, 1), rat(1, 1))), "i");
        assert_eq!(fmt_gaussian(&Complex::new(rat(-2, 1), rat(0, 1))), "-2");
    }
}
