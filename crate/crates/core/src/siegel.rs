//! Siegel functions and Siegel-Ramachandra invariants.
//!
//! `g_f(C) = g_{(r1/N, r2/N)}(w1/w2)^(12N)` is evaluated in log space: the
//! logarithm of the Siegel product is summed term by term, multiplied by `12N`
//! and exponentiated once. Branches of the individual logarithms only move the
//! result by multiples of `2*pi*i*12N`, which the final exponential ignores.
//! Shifting `r` by an integer vector multiplies `g_r` by a root of unity of
//! order dividing `2N`, so `r` may be reduced into `[0,1)^2` first.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rug::Float;

use crate::abgroup::Elem;
use crate::bigcomplex::{pi, to_rug_int, to_rug_rat, BigComplex};
use crate::error::{Error, Result};
use crate::qfield::{Ideal, QuadField, QuadInt};
use crate::rayclass::RayClassGroup;

/// `B2(x) = x^2 - x + 1/6`.
pub fn bernoulli2(x: &BigRational) -> BigRational {
    x * x - x + BigRational::new(BigInt::one(), BigInt::from(6))
}

/// Number of product terms needed for a truncation error below `2^-(bits+14)`.
fn n_max(r1: f64, im_tau: f64, bits: u32) -> u64 {
    let need = (bits as f64 + 16.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * im_tau);
    (need + r1.abs() + 1.0).ceil().max(1.0) as u64
}

/// A logarithm of `g_r(tau)` whose real part is `log|g_r(tau)|`.
///
/// With `x_n` the omitted product arguments, `|x_n| <= |q|^(n-|r1|)`, and the
/// truncation point makes the first omitted `|x_n|` at most `2^-(bits+16)`, so the
/// geometric tail of `sum |log(1 - x_n)| <= 2 sum |x_n|` is below
/// `2^-(bits+14) / (1 - |q|)`. Working precision `wprec` then only has to cover
/// the rounding of about `3 n_max` logarithms.
pub fn log_siegel(r1: &BigRational, r2: &BigRational, tau: &BigComplex, bits: u32, wprec: u32) -> Result<BigComplex> {
    if r1.is_integer() && r2.is_integer() {
        return Err(Error::InvalidArgument("(r1, r2) must not be integral".into()));
    }
    if tau.im <= 0 {
        return Err(Error::InvalidArgument("tau must lie in the upper half plane".into()));
    }
    let p = wprec;
    let tau = tau.with_prec(p);
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let i_two_pi = BigComplex::from_floats(Float::new(p), two_pi.clone());
    let r1f = Float::with_val(p, to_rug_rat(r1));
    let r2f = Float::with_val(p, to_rug_rat(r2));
    let one = BigComplex::one(p);
    // log(-1) = i*pi
    let mut acc = BigComplex::from_floats(Float::new(p), pi(p));
    // q^(B2(r1)/2)
    let b2 = Float::with_val(p, to_rug_rat(&bernoulli2(r1))) / 2u32;
    acc = acc.add(&i_two_pi.mul(&tau).scale(&b2));
    // e^(pi i r2 (r1 - 1))
    let ph = Float::with_val(p, &r2f * Float::with_val(p, &r1f - 1u32)) * pi(p);
    acc = acc.add(&BigComplex::from_floats(Float::new(p), ph));
    // u = q^r1 e(r2), v = q^-r1 e(-r2)
    let lu = i_two_pi.mul(&tau.scale(&r1f).add(&BigComplex::from_real(r2f.clone())));
    let u = lu.exp();
    let v = lu.neg().exp();
    acc = acc.add(&one.sub(&u).ln());
    let q = i_two_pi.mul(&tau).exp();
    let nm = n_max(r1.to_f64().unwrap_or(0.0), tau.im.to_f64(), bits);
    let mut qn = q.clone();
    for _ in 1..=nm {
        acc = acc.add(&one.sub(&qn.mul(&u)).ln());
        acc = acc.add(&one.sub(&qn.mul(&v)).ln());
        qn = qn.mul(&q);
    }
    Ok(acc)
}

/// `g_r(tau)` with relative error at most `2^(-P+8)`.
pub fn siegel_g(r1: &BigRational, r2: &BigRational, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    Ok(log_siegel(r1, r2, tau, prec, prec + 32)?.exp().with_prec(prec))
}

/// The data that pins down one Siegel-Ramachandra invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpec {
    pub field: QuadField,
    pub modulus: Ideal,
    /// Representative `c` of the class, so the lattice is `f c^-1`.
    pub rep: Ideal,
    /// `w1 = omega1 / den`, `w2 = omega2 / den`.
    pub omega1: QuadInt,
    pub omega2: QuadInt,
    pub den: BigInt,
    pub n: BigInt,
    pub r1: BigInt,
    pub r2: BigInt,
}

impl InvariantSpec {
    /// Uses the smallest-norm representative and the reduced basis.
    pub fn new(rcg: &RayClassGroup, class: &[u64]) -> Result<InvariantSpec> {
        InvariantSpec::from_rep(rcg.field(), rcg.modulus(), rcg.representative(class))
    }

    pub fn from_rep(field: &QuadField, modulus: &Ideal, rep: &Ideal) -> Result<InvariantSpec> {
        let lat = modulus.mul(&rep.conj())?;
        let [a, b] = lat.basis();
        let (u, v) = field.reduce_basis(&a, &b);
        InvariantSpec::with_basis(field, modulus, rep, &v, &u)
    }

    /// `omega1, omega2` must be a basis of `f * conj(c)` (then divided by `N(c)`).
    pub fn with_basis(
        field: &QuadField,
        modulus: &Ideal,
        rep: &Ideal,
        omega1: &QuadInt,
        omega2: &QuadInt,
    ) -> Result<InvariantSpec> {
        if modulus.is_unit() {
            return Err(Error::UnitModulus);
        }
        if !rep.coprime(modulus)? {
            return Err(Error::NotCoprime(rep.to_string(), modulus.to_string()));
        }
        let lat = modulus.mul(&rep.conj())?;
        let from = Ideal::from_generators(field, &[omega1.clone(), omega2.clone()])?;
        let det = &omega1.a * &omega2.b - &omega2.a * &omega1.b;
        if from != lat || det.abs() != lat.norm() {
            return Err(Error::InvalidArgument("not a basis of f * conj(c)".into()));
        }
        let (mut o1, o2) = (omega1.clone(), omega2.clone());
        if QuadField::orientation(&o1, &o2).is_negative() {
            o1 = o1.neg();
        }
        let den = rep.norm();
        let n = modulus.smallest_positive_integer().clone();
        // n * den = r1 * o1 + r2 * o2
        let det = &o1.a * &o2.b - &o2.a * &o1.b;
        let rhs = &n * &den;
        let (r1, rem1) = (&rhs * &o2.b).div_rem(&det);
        let (r2, rem2) = (-(&rhs * &o1.b)).div_rem(&det);
        if !rem1.is_zero() || !rem2.is_zero() {
            return Err(Error::Consistency("N is not in the lattice".into()));
        }
        if r1.is_multiple_of(&n) && r2.is_multiple_of(&n) {
            return Err(Error::Consistency("(r1/N, r2/N) is integral".into()));
        }
        Ok(InvariantSpec {
            field: field.clone(),
            modulus: modulus.clone(),
            rep: rep.clone(),
            omega1: o1,
            omega2: o2,
            den,
            n,
            r1,
            r2,
        })
    }

    /// `tau = w1/w2` as `(x + y*w)/z` with the exact integers `(x, y, z)`.
    pub fn tau_exact(&self) -> (BigInt, BigInt, BigInt) {
        let f = &self.field;
        let x = f.mul(&self.omega1, &f.conj(&self.omega2));
        (x.a, x.b, f.norm(&self.omega2))
    }

    pub fn tau(&self, prec: u32) -> BigComplex {
        let (x, y, z) = self.tau_exact();
        let d = self.field.disc();
        let re = BigRational::new(BigInt::from(2) * &x + &y * BigInt::from(d), BigInt::from(2) * &z);
        let sq = Float::with_val(prec, -d).sqrt();
        let im = Float::with_val(prec, to_rug_int(&y)) * sq / Float::with_val(prec, to_rug_int(&z)) / 2u32;
        BigComplex::from_floats(Float::with_val(prec, to_rug_rat(&re)), im)
    }

    /// `(r1/N, r2/N)` reduced into `[0,1)^2`.
    pub fn r_reduced(&self) -> (BigRational, BigRational) {
        let n = &self.n;
        (
            BigRational::new(self.r1.mod_floor(n), n.clone()),
            BigRational::new(self.r2.mod_floor(n), n.clone()),
        )
    }

    pub fn exponent(&self) -> BigInt {
        BigInt::from(12) * &self.n
    }

    pub fn evaluate(&self, prec: u32) -> Result<InvariantValue> {
        let e = self.exponent();
        let ebits = e.bits() as u32;
        let wprec = prec + 32 + ebits;
        let (r1, r2) = self.r_reduced();
        let lg = log_siegel(&r1, &r2, &self.tau(wprec), prec + ebits, wprec)?;
        let log = lg.scale(&Float::with_val(wprec, to_rug_int(&e)));
        Ok(InvariantValue { log, prec })
    }
}

/// `g_f(C)` stored through a logarithm computed at working precision.
/// The logarithm is accurate to `2^-(P+12)` in absolute terms.
#[derive(Clone, Debug)]
pub struct InvariantValue {
    pub log: BigComplex,
    pub prec: u32,
}

impl InvariantValue {
    pub fn err_log2(&self) -> i32 {
        -(self.prec as i32) - 12
    }

    pub fn log_abs(&self) -> Float {
        self.log.re.clone()
    }

    pub fn value(&self) -> BigComplex {
        self.log.exp()
    }

    /// `g_f(C)^k` via the logarithm.
    pub fn pow(&self, k: &BigInt) -> BigComplex {
        self.log.scale(&Float::with_val(self.log.prec(), to_rug_int(k))).exp()
    }
}

type CacheKey = (Ideal, Elem, u32);

/// Build-once cache of invariants keyed by `(f, C, P)`.
#[derive(Default)]
pub struct InvariantTable {
    cache: RwLock<HashMap<CacheKey, Arc<InvariantValue>>>,
}

impl InvariantTable {
    pub fn global() -> &'static InvariantTable {
        static TABLE: OnceLock<InvariantTable> = OnceLock::new();
        TABLE.get_or_init(InvariantTable::default)
    }

    pub fn get(&self, rcg: &RayClassGroup, class: &[u64], prec: u32) -> Result<Arc<InvariantValue>> {
        let key = (rcg.modulus().clone(), class.to_vec(), prec);
        if let Some(v) = self.cache.read().expect("poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(InvariantSpec::new(rcg, class)?.evaluate(prec)?);
        let mut w = self.cache.write().expect("poisoned");
        Ok(w.entry(key).or_insert(v).clone())
    }

    /// One value per class, indexed like the group elements.
    pub fn all(&self, rcg: &RayClassGroup, prec: u32) -> Result<Vec<Arc<InvariantValue>>> {
        let elems: Vec<Elem> = rcg.group().elements().collect();
        elems.par_iter().map(|c| self.get(rcg, c, prec)).collect()
    }
}

/// `g_f(C)` through the global cache.
pub fn invariant(rcg: &RayClassGroup, class: &[u64], prec: u32) -> Result<Arc<InvariantValue>> {
    InvariantTable::global().get(rcg, class, prec)
}

/// Coefficients (constant term first) of `prod (x - z_i)`.
pub fn poly_from_roots(roots: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let mut c = vec![BigComplex::one(prec)];
    for z in roots {
        let mut next = vec![BigComplex::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(z));
        }
        c = next;
    }
    c
}

/// Nearest point of `Z + Z*w` and the distance to it.
pub fn round_to_ok(field: &QuadField, z: &BigComplex) -> (QuadInt, Float) {
    let p = z.prec();
    let d = field.disc();
    let half_sq = Float::with_val(p, Float::with_val(p, -d).sqrt() / 2u32);
    let b = Float::with_val(p, &z.im / &half_sq).round();
    let re = Float::with_val(p, &z.re - Float::with_val(p, &b * d) / 2u32);
    let a = re.round();
    let ai = a.to_integer().expect("finite");
    let bi = b.to_integer().expect("finite");
    let x = QuadInt::new(
        ai.to_string().parse::<BigInt>().unwrap(),
        bi.to_string().parse::<BigInt>().unwrap(),
    );
    let bd = rug::Integer::from(&bi * d);
    let back = BigComplex::from_floats(
        Float::with_val(p, &ai) + Float::with_val(p, &bd) / 2u32,
        Float::with_val(p, &b * &half_sq),
    );
    (x, z.sub(&back).abs())
}
