//! Serializable shapes shared by the library reports and the command line.

use num_rational::BigRational;
use serde::Serialize;

use crate::bigcomplex::BigComplex;

/// A complex number as fixed decimal strings plus its error bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JsonComplex {
    pub re: String,
    pub im: String,
    pub prec_bits: u32,
    pub err_bound_log2: i32,
}

impl JsonComplex {
    pub fn new(z: &BigComplex, err_bound_log2: i32) -> JsonComplex {
        let p = z.prec();
        // digits for the certified part only, so equal runs print equal strings
        let certified = (-err_bound_log2).clamp(8, p as i32) as u32;
        let digits = ((certified as f64) * std::f64::consts::LOG10_2).ceil() as usize + 2;
        JsonComplex {
            re: z.re.to_string_radix(10, Some(digits)),
            im: z.im.to_string_radix(10, Some(digits)),
            prec_bits: p,
            err_bound_log2,
        }
    }

    pub fn from_f64(re: f64, im: f64, err_bound_log2: i32) -> JsonComplex {
        JsonComplex {
            re: format!("{re:e}"),
            im: format!("{im:e}"),
            prec_bits: 53,
            err_bound_log2,
        }
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom() == &1.into() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
