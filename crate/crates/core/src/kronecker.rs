//! Stickelberger elements, Gauss sums and the second Kronecker limit formula.
//!
//! Conventions: `chi(C)` is evaluated on the SNF coordinates of `C`;
//! `sqrt(-d)` is the positive real root; the invariant basis is oriented with
//! `w1/w2` in the upper half plane.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rug::Float;
use serde::Serialize;

use crate::bigcomplex::{pi, to_rug_rat, BigComplex};
use crate::chars::{conductor, primitive_character, Character, Conductor, Frac};
use crate::error::{Error, Result};
use crate::qfield::{primes_above, Ideal, QuadField, QuadInt};
use crate::rayclass::{omega_of, ModulusTower, RayClassGroup};
use crate::siegel::InvariantTable;

/// `chi(x)` as a complex number.
pub fn char_value(chi: &Character, x: &[u64], prec: u32) -> BigComplex {
    frac_to_complex(&chi.value(x), prec)
}

pub fn frac_to_complex(v: &Frac, prec: u32) -> BigComplex {
    let t = Float::with_val(prec, v.num()) / Float::with_val(prec, v.den());
    BigComplex::e(&t)
}

/// `S_f(chi) = sum_C chi(C) log|g_f(C)|`, accurate to `|Cl(f)| 2^-(P+12)`.
pub fn stickelberger(rcg: &RayClassGroup, chi: &Character, prec: u32) -> Result<BigComplex> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let vals = InvariantTable::global().all(rcg, prec)?;
    let w = prec + 32;
    let mut acc = BigComplex::zero(w);
    for (x, v) in rcg.group().elements().zip(vals) {
        let lg = Float::with_val(w, v.log_abs());
        acc = acc.add(&char_value(chi, &x, w).scale(&lg));
    }
    Ok(acc)
}

/// `gamma = num/den` with `gamma * d_K * f_chi` integral and prime to `f_chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    pub num: QuadInt,
    pub den: BigInt,
    /// `gamma * d_K * f_chi`.
    pub ideal: Ideal,
}

pub fn validate_gamma(field: &QuadField, f_chi: &Ideal, num: &QuadInt, den: &BigInt) -> Result<Gamma> {
    if num.is_zero() || !den.is_positive() {
        return Err(Error::InvalidGamma("gamma must be nonzero with positive denominator".into()));
    }
    let m = Ideal::different(field).mul(f_chi)?;
    let prod = Ideal::principal(field, num)?.mul(&m)?;
    let ideal = prod.div_integer(den).ok_or_else(|| {
        Error::InvalidGamma(format!("gamma*d_K*f_chi is not integral for gamma = ({num})/{den}"))
    })?;
    if !ideal.coprime(f_chi)? {
        return Err(Error::InvalidGamma(format!(
            "gamma*d_K*f_chi = {ideal} is not prime to {f_chi}"
        )));
    }
    Ok(Gamma {
        num: num.clone(),
        den: den.clone(),
        ideal,
    })
}

/// Valid `gamma` in `(d_K f_chi)^-1`, by ascending norm of `gamma d_K f_chi`,
/// one per unit orbit.
pub fn find_gammas(field: &QuadField, f_chi: &Ideal, count: usize) -> Result<Vec<Gamma>> {
    if f_chi.is_unit() {
        return Err(Error::UnitModulus);
    }
    let m = Ideal::different(field).mul(f_chi)?;
    // (d f)^-1 = conj(M)/N(M)
    let lat = m.conj();
    let den = m.norm();
    let [a, b] = lat.basis();
    let (u, v) = field.reduce_basis(&a, &b);
    let mut out: Vec<Gamma> = Vec::new();
    let mut radius = 2i64;
    while out.len() < count {
        let mut cands: Vec<(BigInt, QuadInt)> = Vec::new();
        for i in -radius..=radius {
            for j in -radius..=radius {
                let y = u.scale(&BigInt::from(i)).add(&v.scale(&BigInt::from(j)));
                if !y.is_zero() {
                    cands.push((field.norm(&y), y));
                }
            }
        }
        cands.sort();
        out.clear();
        for (_, y) in cands {
            let y = field.canonical_associate(&y);
            if out.iter().any(|g| g.num == y) {
                continue;
            }
            if let Ok(g) = validate_gamma(field, f_chi, &y, &den) {
                out.push(g);
                if out.len() == count {
                    break;
                }
            }
        }
        radius *= 2;
        if radius > 1 << 12 {
            return Err(Error::CapExceeded {
                what: "gamma scan radius",
                cap: 1 << 12,
            });
        }
    }
    Ok(out)
}

pub fn find_gamma(field: &QuadField, f_chi: &Ideal) -> Result<Gamma> {
    Ok(find_gammas(field, f_chi, 1)?.remove(0))
}

/// `T_gamma(conj chi0) = sum_{x in (O/f_chi)^x} conj chi0([x]) e(Tr(gamma x))`.
pub fn gauss_sum(level: &RayClassGroup, chi0: &Character, gamma: &Gamma, prec: u32) -> Result<BigComplex> {
    let field = level.field();
    validate_gamma(field, level.modulus(), &gamma.num, &gamma.den)?;
    let ring = level.ring();
    let mut acc = BigComplex::zero(prec);
    for x in ring.units() {
        let cls = level.class_of_residue(x);
        let tr = field.trace(&field.mul(&gamma.num, &ring.lift(x)));
        let phase = BigRational::new(tr, gamma.den.clone());
        let phase = Frac::new(
            phase.numer().mod_floor(phase.denom()).to_i64().expect("desk scale"),
            phase.denom().to_u64().expect("desk scale"),
        );
        acc = acc.add(&frac_to_complex(&chi0.value(&cls).neg().add(&phase), prec));
    }
    Ok(acc)
}

/// Everything the limit formula needs for one character of `Cl(f)`.
pub struct LimitFormulaContext<'a> {
    pub tower: &'a ModulusTower,
    pub chi: Character,
    pub conductor: Conductor<'a>,
    pub chi0: Character,
    pub gamma: Gamma,
    /// Smallest positive integers in `f` and `f_chi`.
    pub n_f: BigInt,
    pub n_fchi: BigInt,
    pub omega_f: usize,
    pub omega_fchi: usize,
    /// `chi0([gamma d_K f_chi])`.
    pub chi0_gamma: Frac,
    /// `(p, conj chi0([p]))` for `p | f`, `p` not dividing `f_chi`.
    pub euler: Vec<(Ideal, Frac)>,
}

impl<'a> LimitFormulaContext<'a> {
    pub fn new(tower: &'a ModulusTower, chi: &Character, gamma: Option<Gamma>) -> Result<Self> {
        if chi.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
        let top = tower.top();
        let field = top.field();
        let cond = conductor(tower, chi)?;
        if cond.modulus.is_unit() {
            return Err(Error::InvalidArgument("the conductor must not be O_K".into()));
        }
        let level = &cond.level.group;
        let chi0 = primitive_character(cond.level, chi)?;
        let gamma = match gamma {
            Some(g) => validate_gamma(field, &cond.modulus, &g.num, &g.den)?,
            None => find_gamma(field, &cond.modulus)?,
        };
        let chi0_gamma = chi0.value(&level.class_of_ideal(&gamma.ideal)?);
        let mut euler = Vec::new();
        for (p, _) in top.factorization() {
            if !p.divides(&cond.modulus)? {
                euler.push((p.clone(), chi0.value(&level.class_of_ideal(p)?).neg()));
            }
        }
        Ok(LimitFormulaContext {
            tower,
            chi: chi.clone(),
            n_f: top.modulus().smallest_positive_integer().clone(),
            n_fchi: cond.modulus.smallest_positive_integer().clone(),
            omega_f: omega_of(field, top.modulus()),
            omega_fchi: omega_of(field, &cond.modulus),
            conductor: cond,
            chi0,
            gamma,
            chi0_gamma,
            euler,
        })
    }

    pub fn level_group(&self) -> &RayClassGroup {
        &self.conductor.level.group
    }

    /// Exact test for a vanishing Euler factor.
    pub fn degenerate(&self) -> bool {
        self.euler.iter().any(|(_, v)| v.is_zero())
    }

    pub fn euler_factor(&self, prec: u32) -> BigComplex {
        let one = BigComplex::one(prec);
        self.euler
            .iter()
            .fold(one.clone(), |acc, (_, v)| acc.mul(&one.sub(&frac_to_complex(v, prec))))
    }

    /// `N(f) omega(f) / (N(f_chi) omega(f_chi))`.
    pub fn level_ratio(&self) -> BigRational {
        BigRational::new(
            &self.n_f * BigInt::from(self.omega_f),
            &self.n_fchi * BigInt::from(self.omega_fchi),
        )
    }

    /// `-2 pi chi0([gamma d f_chi]) / (6 N(f_chi) omega(f_chi) T sqrt(-d))`.
    pub fn constant(&self, gauss: &BigComplex, prec: u32) -> BigComplex {
        let d = self.tower.top().field().disc();
        let denom = Float::with_val(prec, -d).sqrt()
            * Float::with_val(prec, to_rug_rat(&BigRational::from(
                BigInt::from(6) * &self.n_fchi * BigInt::from(self.omega_fchi),
            )));
        let num = frac_to_complex(&self.chi0_gamma, prec).scale(&Float::with_val(prec, pi(prec) * -2i32));
        num.div(&gauss.scale(&denom))
    }
}

/// Both sides of the limit formula at one level.
#[derive(Clone, Debug)]
pub struct KroneckerRhs {
    pub gauss: BigComplex,
    pub s_f: BigComplex,
    /// `constant * S_f(conj chi)`, the literal right-hand side.
    pub literal: BigComplex,
    pub euler: BigComplex,
    pub degenerate: bool,
    /// `literal / euler`, withheld when degenerate.
    pub predicted: Option<BigComplex>,
    /// `literal / euler` after rescaling by `N(f_chi) omega(f_chi) / (N(f) omega(f))`.
    pub predicted_normalized: Option<BigComplex>,
    pub level_ratio: BigRational,
    pub err_log2: i32,
}

pub fn kronecker_rhs(ctx: &LimitFormulaContext, prec: u32) -> Result<KroneckerRhs> {
    let w = prec + 32;
    let gauss = gauss_sum(ctx.level_group(), &ctx.chi0, &ctx.gamma, w)?;
    if gauss.abs() < crate::bigcomplex::pow2(w, -(prec as i32) / 2) {
        return Err(Error::Consistency("Gauss sum vanishes".into()));
    }
    let top = ctx.tower.top();
    let s_f = stickelberger(top, &ctx.chi.conj(), prec)?;
    let literal = ctx.constant(&gauss, w).mul(&s_f);
    let euler = ctx.euler_factor(w);
    let degenerate = ctx.degenerate();
    let ratio = ctx.level_ratio();
    let inv_ratio = Float::with_val(w, to_rug_rat(&(BigRational::one() / &ratio)));
    let (predicted, predicted_normalized) = if degenerate {
        (None, None)
    } else {
        let p = literal.div(&euler);
        let q = p.scale(&inv_ratio);
        (Some(p), Some(q))
    };
    let err_log2 = -(prec as i32) + 12 + (top.order() as f64).log2().ceil() as i32;
    Ok(KroneckerRhs {
        gauss,
        s_f,
        literal,
        euler,
        degenerate,
        predicted,
        predicted_normalized,
        level_ratio: ratio,
        err_log2,
    })
}

/// `S_f(conj chi)` against `euler * S_{f_chi}(conj chi0)`.
#[derive(Clone, Debug)]
pub struct LevelLowering {
    pub s_f: BigComplex,
    pub s_fchi: BigComplex,
    pub euler: BigComplex,
    pub level_ratio: BigRational,
    /// `euler * S_{f_chi}`.
    pub rhs: BigComplex,
    /// `level_ratio * euler * S_{f_chi}`.
    pub rhs_normalized: BigComplex,
    /// `log2 |lhs - rhs| / max(|lhs|, 1)`, against the unscaled and the rescaled right side.
    pub rel_err_log2: f64,
    pub rel_err_normalized_log2: f64,
    pub degenerate: bool,
}

pub fn level_lowering(tower: &ModulusTower, chi: &Character, prec: u32) -> Result<LevelLowering> {
    let ctx = LimitFormulaContext::new(tower, chi, None)?;
    let w = prec + 32;
    let s_f = stickelberger(tower.top(), &chi.conj(), prec)?;
    let s_fchi = stickelberger(ctx.level_group(), &ctx.chi0.conj(), prec)?;
    let euler = ctx.euler_factor(w);
    let rhs = euler.mul(&s_fchi);
    let ratio = ctx.level_ratio();
    let rhs_normalized = rhs.scale(&Float::with_val(w, to_rug_rat(&ratio)));
    // absolute below unit size, so a vanishing Euler factor compares 0 with 0
    let scale = s_f.log2_abs().max(0.0);
    let rel = |x: &BigComplex| -> f64 {
        let num = s_f.sub(x);
        if num.is_zero() {
            return -(w as f64);
        }
        num.log2_abs() - scale
    };
    Ok(LevelLowering {
        rel_err_log2: rel(&rhs),
        rel_err_normalized_log2: rel(&rhs_normalized),
        degenerate: ctx.degenerate(),
        s_f,
        s_fchi,
        euler,
        level_ratio: ratio,
        rhs,
        rhs_normalized,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Smoothing {
    /// Plain partial sum up to the bound.
    None,
    /// Mean of the partial sums at the ends of blocks of length `sqrt(B)`.
    Cesaro,
}

#[derive(Clone, Debug, Serialize)]
pub struct LPartial {
    pub value: Complex64,
    /// `|C_J - C_{J-1}|` for the last two smoothed blocks.
    pub err_estimate: f64,
    pub bound: u64,
    pub terms: u64,
}

/// `L_f(1, chi)` from ideals of norm at most `bound` prime to `f`.
pub fn l_partial_sum(rcg: &RayClassGroup, chi: &Character, bound: u64, smoothing: Smoothing) -> Result<LPartial> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    if !(4..=50_000_000).contains(&bound) {
        return Err(Error::OutOfRange(format!("norm bound {bound}")));
    }
    let field = rcg.field();
    let b = bound as usize;
    let val = |p: &Ideal| -> Result<Option<Complex64>> {
        if !p.coprime(rcg.modulus())? {
            return Ok(None);
        }
        let v = chi.value(&rcg.class_of_ideal(p)?);
        Ok(Some(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * v.to_f64())))
    };
    // a(m) = sum over ideals of norm m, multiplicative in m
    let mut spf = vec![0u32; b + 1];
    for i in 2..=b {
        if spf[i] == 0 {
            let mut j = i;
            while j <= b {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    // local factors a(p^k)
    let mut local: std::collections::HashMap<u64, Vec<Complex64>> = std::collections::HashMap::new();
    for p in 2..=bound {
        if spf[p as usize] as u64 != p {
            continue;
        }
        let mut kmax = 0;
        let mut pk = 1u64;
        while pk * p <= bound {
            pk *= p;
            kmax += 1;
        }
        let primes = primes_above(field, p)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs = vec![zero; kmax + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        match primes.len() {
            2 => {
                let x = val(&primes[0])?.unwrap_or(zero);
                let y = val(&primes[1])?.unwrap_or(zero);
                for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
                    *c = (0..=k).map(|i| x.powu(i as u32) * y.powu((k - i) as u32)).sum();
                }
            }
            _ => {
                let x = val(&primes[0])?.unwrap_or(zero);
                let inert = primes[0].norm() != BigInt::from(p);
                for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
                    *c = if inert {
                        if k % 2 == 0 { x.powu((k / 2) as u32) } else { zero }
                    } else {
                        x.powu(k as u32)
                    };
                }
            }
        }
        local.insert(p, coeffs);
    }
    let mut a = vec![Complex64::new(0.0, 0.0); b + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for m in 2..=b {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        a[m] = a[rest] * local[&(p as u64)][k];
    }
    let block = (bound as f64).sqrt().floor() as usize;
    let mut s = Complex64::new(0.0, 0.0);
    let mut block_ends: Vec<Complex64> = Vec::new();
    let mut terms = 0u64;
    for (m, am) in a.iter().enumerate().skip(1) {
        if am.norm_sqr() > 0.0 {
            terms += 1;
        }
        s += am / m as f64;
        if m % block == 0 {
            block_ends.push(s);
        }
    }
    let (value, err) = match smoothing {
        Smoothing::None => {
            let n = block_ends.len();
            (s, (block_ends[n - 1] - block_ends[n - 2]).norm())
        }
        Smoothing::Cesaro => {
            let n = block_ends.len();
            let total: Complex64 = block_ends.iter().sum();
            let last = total / n as f64;
            let prev = (total - block_ends[n - 1]) / (n - 1) as f64;
            (last, (last - prev).norm())
        }
    };
    Ok(LPartial {
        value,
        err_estimate: err,
        bound,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(d: i64, m: &str) -> ModulusTower {
        let f = QuadField::new(d).unwrap();
        let top = RayClassGroup::new(&f, &Ideal::parse(&f, m).unwrap()).unwrap();
        ModulusTower::new(top).unwrap()
    }

    #[test]
    fn gamma_for_sqrt_minus_11() {
        let f = QuadField::new(-11).unwrap();
        let g = find_gamma(&f, &Ideal::different(&f)).unwrap();
        assert_eq!(g.num, QuadInt::new(11, 0));
        assert_eq!(g.den, BigInt::from(121));
        assert!(g.ideal.is_unit());
        assert!(matches!(
            validate_gamma(&f, &Ideal::different(&f), &QuadInt::new(1, 0), &BigInt::from(121)),
            Err(Error::InvalidGamma(_))
        ));
    }

    #[test]
    fn gauss_sum_norms() {
        let t = tower(-11, "[11,0,1]");
        let g = t.top().group().clone();
        for chi in Character::all(&g).filter(|c| !c.is_trivial()) {
            let ctx = LimitFormulaContext::new(&t, &chi, None).unwrap();
            let tg = gauss_sum(ctx.level_group(), &ctx.chi0, &ctx.gamma, 128).unwrap();
            assert!((tg.norm_sqr().to_f64() - 11.0).abs() < 1e-20);
        }
    }

    #[test]
    fn trivial_rejected() {
        let t = tower(-11, "[11,0,1]");
        let triv = Character::trivial(t.top().group());
        assert_eq!(stickelberger(t.top(), &triv, 64).unwrap_err(), Error::TrivialCharacter);
    }

    #[test]
    fn stickelberger_conjugation() {
        let t = tower(-11, "[11,0,1]");
        let chi = Character::new(t.top().group(), vec![2]).unwrap();
        let a = stickelberger(t.top(), &chi, 128).unwrap();
        let b = stickelberger(t.top(), &chi.conj(), 128).unwrap();
        assert!(a.conj().sub(&b).abs() < crate::bigcomplex::pow2(160, -120));
        assert!(a.abs() > 1.0);
    }
}
