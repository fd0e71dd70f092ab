//! Complex numbers at a fixed binary precision, backed by MPFR.
//!
//! Every elementary operation is computed with MPFR's correctly rounded real
//! primitives; a complex product or quotient therefore carries a relative error
//! of at most a few units in the last place, comfortably inside `2^(-P+4)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

pub fn to_rug_int(x: &BigInt) -> Integer {
    Integer::from_str_radix(&x.to_str_radix(16), 16).expect("valid hex")
}

pub fn to_rug_rat(x: &BigRational) -> Rational {
    Rational::from((to_rug_int(x.numer()), to_rug_int(x.denom())))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl BigComplex {
    pub fn zero(prec: u32) -> BigComplex {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> BigComplex {
        BigComplex::from_f64(prec, 1.0, 0.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_floats(re: Float, im: Float) -> BigComplex {
        BigComplex { re, im }
    }

    pub fn from_real(re: Float) -> BigComplex {
        let prec = re.prec();
        BigComplex {
            re,
            im: Float::new(prec),
        }
    }

    pub fn from_rational(prec: u32, re: &BigRational, im: &BigRational) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, to_rug_rat(re)),
            im: Float::with_val(prec, to_rug_rat(im)),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    /// `exp(2*pi*i*t)` for a real `t`.
    pub fn e(t: &Float) -> BigComplex {
        let prec = t.prec();
        let arg = Float::with_val(prec, t * pi(prec)) * 2u32;
        let (s, c) = arg.sin_cos(Float::new(prec));
        BigComplex { re: c, im: s }
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        BigComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }

    pub fn scale(&self, k: &Float) -> BigComplex {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn div(&self, o: &BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        self.mul(&o.conj()).scale(&Float::with_val(self.prec(), 1 / n))
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.clone().hypot(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.clone().atan2(&self.re))
    }

    pub fn exp(&self) -> BigComplex {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex {
            re: Float::with_val(p, &m * &c),
            im: m * s,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> BigComplex {
        BigComplex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    pub fn pow_u(&self, mut e: u64) -> BigComplex {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2 |z|`, or `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.abs().log2().to_f64()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal strings with enough digits for the precision.
    pub fn to_decimal(&self) -> (String, String) {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        (
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits)),
        )
    }
}

/// `2^e` as a float.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 2u32).pow(e)
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal();
        write!(f, "{re} + {im}i")
    }
}
