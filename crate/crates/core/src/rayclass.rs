//! Ray class groups `Cl(f)` with an explicit discrete logarithm.
//!
//! A ray class is keyed by `(k, beta)` where `k` is the ideal class of `a`,
//! `(beta) = a * b_k` for a fixed auxiliary ideal `b_k` in the inverse class, and
//! `beta` is taken modulo `f` up to roots of unity. The keys are then fed to
//! [`decompose`] to obtain SNF coordinates.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::abgroup::{decompose, Decomposition, Elem, FinAbGroup, GroupHom, Subgroup};
use crate::abgroup::DEFAULT_CLOSURE_CAP;
use crate::clgroup::ClassGroup;
use crate::error::{Error, Result};
use crate::qfield::{factor_ideal, ideals_of_norm, principal_generator, Ideal, QuadField, QuadInt};

/// A residue `m + n*w` with `0 <= m < a` and `0 <= n < c` for the modulus `[a, b, c]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Residue {
    pub m: i64,
    pub n: i64,
}

#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: Ideal,
    a: i64,
    b: i64,
    c: i64,
    d: i128,
    d2: i128,
    primes: Vec<(Ideal, u32)>,
    roots: Vec<Residue>,
}

impl ResidueRing {
    pub fn new(field: &QuadField, modulus: &Ideal) -> Result<ResidueRing> {
        let (a, b, c) = modulus.hnf();
        let too_big = || Error::OutOfRange(format!("modulus {modulus} is too large"));
        let a = a.to_i64().filter(|&v| v <= 1_000_000_000).ok_or_else(too_big)?;
        let b = b.to_i64().ok_or_else(too_big)?;
        let c = c.to_i64().ok_or_else(too_big)?;
        let primes = factor_ideal(field, modulus)?;
        let mut ring = ResidueRing {
            modulus: modulus.clone(),
            a,
            b,
            c,
            d: field.disc() as i128,
            d2: field.norm_omega().to_i128().expect("desk-scale discriminant"),
            primes,
            roots: Vec::new(),
        };
        ring.roots = field
            .roots_of_unity()
            .iter()
            .map(|z| ring.reduce_quad(z))
            .collect();
        Ok(ring)
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn factorization(&self) -> &[(Ideal, u32)] {
        &self.primes
    }

    pub fn size(&self) -> u64 {
        (self.a * self.c) as u64
    }

    pub fn reduce(&self, x0: i128, x1: i128) -> Residue {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let k = x1.div_euclid(c);
        let n = x1 - k * c;
        let m = (x0 - k * b).rem_euclid(a);
        Residue {
            m: m as i64,
            n: n as i64,
        }
    }

    pub fn reduce_quad(&self, x: &QuadInt) -> Residue {
        let c = BigInt::from(self.c);
        let k = x.b.div_floor(&c);
        let n = &x.b - &k * &c;
        let m = (&x.a - &k * BigInt::from(self.b)).mod_floor(&BigInt::from(self.a));
        Residue {
            m: m.to_i64().unwrap(),
            n: n.to_i64().unwrap(),
        }
    }

    pub fn lift(&self, r: Residue) -> QuadInt {
        QuadInt::new(r.m, r.n)
    }

    pub fn one(&self) -> Residue {
        self.reduce(1, 0)
    }

    pub fn mul(&self, x: Residue, y: Residue) -> Residue {
        let (xm, xn, ym, yn) = (x.m as i128, x.n as i128, y.m as i128, y.n as i128);
        let nn = xn * yn;
        self.reduce(xm * ym - nn * self.d2, xm * yn + xn * ym + nn * self.d)
    }

    pub fn add(&self, x: Residue, y: Residue) -> Residue {
        self.reduce(x.m as i128 + y.m as i128, x.n as i128 + y.n as i128)
    }

    pub fn sub(&self, x: Residue, y: Residue) -> Residue {
        self.reduce(x.m as i128 - y.m as i128, x.n as i128 - y.n as i128)
    }

    pub fn pow(&self, x: Residue, mut e: u64) -> Residue {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x` is a unit iff it lies in no prime dividing the modulus.
    pub fn is_unit(&self, x: Residue) -> bool {
        let q = self.lift(x);
        self.primes.iter().all(|(p, _)| !p.contains(&q))
    }

    pub fn residues(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.c).flat_map(move |n| (0..self.a).map(move |m| Residue { m, n }))
    }

    pub fn units(&self) -> Vec<Residue> {
        self.residues().filter(|&r| self.is_unit(r)).collect()
    }

    /// Euler phi of the modulus from its factorization.
    pub fn phi(&self) -> u64 {
        self.primes
            .iter()
            .map(|(p, e)| {
                let q = p.norm().to_u64().unwrap();
                q.pow(e - 1) * (q - 1)
            })
            .product()
    }

    /// Roots of unity reduced modulo the modulus, in field order.
    pub fn roots(&self) -> &[Residue] {
        &self.roots
    }

    /// Number of roots of unity congruent to 1.
    pub fn omega(&self) -> usize {
        let one = self.one();
        self.roots.iter().filter(|&&z| z == one).count()
    }

    /// Smallest residue in the orbit of `x` under roots of unity.
    pub fn orbit_min(&self, x: Residue) -> Residue {
        self.roots
            .iter()
            .map(|&z| self.mul(z, x))
            .min()
            .expect("at least two roots of unity")
    }
}

/// `omega(f)`: roots of unity `z` with `z - 1` in `f`.
pub fn omega_of(field: &QuadField, f: &Ideal) -> usize {
    field
        .roots_of_unity()
        .iter()
        .filter(|z| f.contains(&z.sub(&QuadInt::one())))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RayKey {
    pub class: usize,
    pub residue: Residue,
}

#[derive(Clone, Debug)]
pub struct RayClassGroup {
    field: QuadField,
    cg: Arc<ClassGroup>,
    ring: ResidueRing,
    aux: Vec<Ideal>,
    dec: Decomposition<RayKey>,
    reps: HashMap<RayKey, Ideal>,
    gen_ideals: Vec<Ideal>,
}

impl RayClassGroup {
    pub fn new(field: &QuadField, modulus: &Ideal) -> Result<RayClassGroup> {
        RayClassGroup::with_cap(field, modulus, DEFAULT_CLOSURE_CAP)
    }

    pub fn with_cap(field: &QuadField, modulus: &Ideal, cap: usize) -> Result<RayClassGroup> {
        if modulus.is_unit() {
            return Err(Error::UnitModulus);
        }
        let cg = Arc::new(ClassGroup::new(field)?);
        RayClassGroup::build(field, cg, modulus, cap)
    }

    /// Also accepts the unit modulus, where `Cl(O_K)` is the class group.
    pub(crate) fn build(
        field: &QuadField,
        cg: Arc<ClassGroup>,
        modulus: &Ideal,
        cap: usize,
    ) -> Result<RayClassGroup> {
        if modulus.disc() != field.disc() {
            return Err(Error::MixedField(modulus.disc(), field.disc()));
        }
        let ring = ResidueRing::new(field, modulus)?;
        let h = cg.class_number() as u64;
        let expected = h * ring.phi() * ring.omega() as u64 / field.w() as u64;
        if h * ring.phi() > cap as u64 {
            return Err(Error::CapExceeded {
                what: "h_K * phi(f)",
                cap: cap as u64,
            });
        }
        let inv_reps = cg.representatives_coprime_to(modulus)?;
        let aux: Vec<Ideal> = (0..cg.class_number())
            .map(|k| inv_reps[cg.inverse(k)].clone())
            .collect();
        let mut rcg = RayClassGroup {
            field: field.clone(),
            cg,
            ring,
            aux,
            dec: decompose(&[], RayKey::placeholder(), |a, _| *a, 1)?,
            reps: HashMap::new(),
            gen_ideals: Vec::new(),
        };
        // smallest-norm representatives, scanning norms upward
        let mut order: Vec<RayKey> = Vec::new();
        let mut n = 1u64;
        while (rcg.reps.len() as u64) < expected {
            for i in ideals_of_norm(field, n)? {
                if !i.coprime(modulus)? {
                    continue;
                }
                let key = rcg.key_of(&i)?;
                if let std::collections::hash_map::Entry::Vacant(e) = rcg.reps.entry(key) {
                    e.insert(i);
                    order.push(key);
                }
            }
            n += 1;
            if n > (cap as u64).saturating_mul(100).saturating_add(1000) {
                return Err(Error::Consistency(format!(
                    "found {} of {expected} ray classes",
                    rcg.reps.len()
                )));
            }
        }
        if rcg.reps.len() as u64 != expected {
            return Err(Error::Consistency(format!(
                "found {} ray classes, order formula gives {expected}",
                rcg.reps.len()
            )));
        }
        // greedy generators in representative order
        let ident = rcg.identity_key();
        let mut span: HashSet<RayKey> = HashSet::from([ident]);
        let mut members = vec![ident];
        let mut gens = Vec::new();
        for key in &order {
            if span.len() as u64 == expected {
                break;
            }
            if span.contains(key) {
                continue;
            }
            gens.push(*key);
            let base = members.clone();
            let mut pw = *key;
            while !span.contains(&pw) {
                for b in &base {
                    let y = rcg.mul_keys(b, &pw);
                    if span.insert(y) {
                        members.push(y);
                    }
                }
                pw = rcg.mul_keys(&pw, key);
            }
        }
        let dec = decompose(&gens, ident, |x, y| rcg.mul_keys(x, y), cap)?;
        if dec.group.order() != expected {
            return Err(Error::Consistency("ray class order mismatch".into()));
        }
        rcg.gen_ideals = gens.iter().map(|k| rcg.reps[k].clone()).collect();
        rcg.dec = dec;
        Ok(rcg)
    }

    fn identity_key(&self) -> RayKey {
        RayKey {
            class: 0,
            residue: self.ring.orbit_min(self.ring.one()),
        }
    }

    fn key_of(&self, i: &Ideal) -> Result<RayKey> {
        let k = self.cg.class_index(i);
        let prod = i.mul(&self.aux[k])?;
        let beta = principal_generator(&self.field, &prod)
            .ok_or_else(|| Error::Consistency(format!("{prod} should be principal")))?;
        Ok(RayKey {
            class: k,
            residue: self.ring.orbit_min(self.ring.reduce_quad(&beta)),
        })
    }

    fn mul_keys(&self, x: &RayKey, y: &RayKey) -> RayKey {
        if x.class == 0 && y.class == 0 {
            return RayKey {
                class: 0,
                residue: self.ring.orbit_min(self.ring.mul(x.residue, y.residue)),
            };
        }
        let p = self.reps[x].mul(&self.reps[y]).expect("same field");
        self.key_of(&p).expect("representatives are coprime")
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.cg
    }

    pub(crate) fn class_group_arc(&self) -> Arc<ClassGroup> {
        self.cg.clone()
    }

    pub fn modulus(&self) -> &Ideal {
        self.ring.modulus()
    }

    pub fn factorization(&self) -> &[(Ideal, u32)] {
        self.ring.factorization()
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.dec.group
    }

    pub fn order(&self) -> u64 {
        self.dec.group.order()
    }

    /// Auxiliary ideals `b_k` (class `k` maps to an ideal of the inverse class).
    pub fn aux_ideals(&self) -> &[Ideal] {
        &self.aux
    }

    /// Ideals used as generators before SNF.
    pub fn generator_ideals(&self) -> &[Ideal] {
        &self.gen_ideals
    }

    pub fn class_of_ideal(&self, i: &Ideal) -> Result<Elem> {
        if !i.coprime(self.modulus())? {
            return Err(Error::NotCoprime(i.to_string(), self.modulus().to_string()));
        }
        let key = self.key_of(i)?;
        self.dec
            .coords(&key)
            .ok_or_else(|| Error::Consistency(format!("unknown ray class key for {i}")))
    }

    /// Class of the principal ideal `(x)`.
    pub fn class_of_element(&self, x: &QuadInt) -> Result<Elem> {
        let r = self.ring.reduce_quad(x);
        if x.is_zero() || !self.ring.is_unit(r) {
            return Err(Error::NotCoprime(x.to_string(), self.modulus().to_string()));
        }
        Ok(self.class_of_residue(r))
    }

    /// Image of a unit residue under `(O/f)^x -> Cl(f)`.
    pub fn class_of_residue(&self, r: Residue) -> Elem {
        let key = RayKey {
            class: 0,
            residue: self.ring.orbit_min(r),
        };
        self.dec.coords(&key).expect("unit residue")
    }

    /// The residue `alpha` with `C = [(alpha)]` for `C` in the principal subgroup.
    pub fn residue_of_principal(&self, x: &[u64]) -> Option<Residue> {
        let key = self.dec.element(x);
        (key.class == 0).then_some(key.residue)
    }

    /// Ideal class of a ray class.
    pub fn ideal_class(&self, x: &[u64]) -> usize {
        self.dec.element(x).class
    }

    /// The smallest-norm integral ideal in the class.
    pub fn representative(&self, x: &[u64]) -> &Ideal {
        &self.reps[self.dec.element(x)]
    }

    /// `Cl(K_f / H_K)`: classes of principal ideals.
    pub fn principal_subgroup(&self) -> Result<Subgroup> {
        let g = self.group();
        let elems: Vec<Elem> = g.elements().filter(|x| self.ideal_class(x) == 0).collect();
        Subgroup::from_elements(g, &elems)
    }
}

impl RayKey {
    fn placeholder() -> RayKey {
        RayKey {
            class: 0,
            residue: Residue { m: 0, n: 0 },
        }
    }
}

/// The natural surjection `Cl(f) -> Cl(f')` for `f' | f`.
pub fn level_map(src: &RayClassGroup, dst: &RayClassGroup) -> Result<GroupHom> {
    if !dst.modulus().divides(src.modulus())? {
        return Err(Error::NotDivisor(
            dst.modulus().to_string(),
            src.modulus().to_string(),
        ));
    }
    let g = src.group();
    let images = (0..g.rank())
        .map(|i| dst.class_of_ideal(src.representative(&g.unit(i))))
        .collect::<Result<Vec<_>>>()?;
    GroupHom::new(g.clone(), dst.group().clone(), images)
}

/// One divisor `f' = prod p^{e'}` of the top modulus.
#[derive(Clone, Debug)]
pub struct Level {
    pub exps: Vec<u32>,
    pub modulus: Ideal,
    pub group: RayClassGroup,
    pub map: GroupHom,
    pub kernel: Subgroup,
}

/// All levels `Cl(f')` for `f' | f` with the maps from `Cl(f)`.
#[derive(Clone, Debug)]
pub struct ModulusTower {
    top: RayClassGroup,
    levels: Vec<Level>,
}

impl ModulusTower {
    pub fn new(top: RayClassGroup) -> Result<ModulusTower> {
        let fac = top.factorization().to_vec();
        let mut exps_list: Vec<Vec<u32>> = vec![vec![]];
        for (_, e) in &fac {
            exps_list = exps_list
                .into_iter()
                .flat_map(|v| {
                    (0..=*e).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        let cg = top.class_group_arc();
        let mut levels = Vec::with_capacity(exps_list.len());
        for exps in exps_list {
            let mut m = Ideal::unit(top.field());
            for ((p, _), &k) in fac.iter().zip(&exps) {
                m = m.mul(&p.pow(k))?;
            }
            let group = if &m == top.modulus() {
                top.clone()
            } else {
                RayClassGroup::build(top.field(), cg.clone(), &m, usize::MAX)?
            };
            let map = level_map(&top, &group)?;
            let kernel = map.kernel()?;
            levels.push(Level {
                exps,
                modulus: m,
                group,
                map,
                kernel,
            });
        }
        Ok(ModulusTower { top, levels })
    }

    pub fn top(&self) -> &RayClassGroup {
        &self.top
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, exps: &[u32]) -> Option<&Level> {
        self.levels.iter().find(|l| l.exps == exps)
    }

    pub fn level_of(&self, m: &Ideal) -> Option<&Level> {
        self.levels.iter().find(|l| &l.modulus == m)
    }
}

/// `G_p = (O/p^e)^x / mu_K`.
#[derive(Clone, Debug)]
pub struct UnitQuotient {
    prime: Ideal,
    exp: u32,
    ring: ResidueRing,
    dec: Decomposition<Residue>,
}

impl UnitQuotient {
    pub fn new(field: &QuadField, prime: &Ideal, exp: u32) -> Result<UnitQuotient> {
        if exp == 0 {
            return Err(Error::InvalidArgument("exponent must be at least 1".into()));
        }
        let modulus = prime.pow(exp);
        let ring = ResidueRing::new(field, &modulus)?;
        if ring.factorization().len() != 1 || ring.factorization()[0].0 != *prime {
            return Err(Error::InvalidArgument(format!("{prime} is not a prime ideal")));
        }
        let units = ring.units();
        let mut span: HashSet<Residue> = HashSet::from([ring.orbit_min(ring.one())]);
        let mut members: Vec<Residue> = span.iter().copied().collect();
        let mut gens = Vec::new();
        for &u in &units {
            let u = ring.orbit_min(u);
            if span.contains(&u) {
                continue;
            }
            gens.push(u);
            let base = members.clone();
            let mut pw = u;
            while !span.contains(&pw) {
                for &b in &base {
                    let y = ring.orbit_min(ring.mul(b, pw));
                    if span.insert(y) {
                        members.push(y);
                    }
                }
                pw = ring.orbit_min(ring.mul(pw, u));
            }
        }
        let one = ring.orbit_min(ring.one());
        let dec = decompose(
            &gens,
            one,
            |x, y| ring.orbit_min(ring.mul(*x, *y)),
            DEFAULT_CLOSURE_CAP.max(units.len()),
        )?;
        let expected = ring.phi() * ring.omega() as u64 / field.w() as u64;
        if dec.group.order() != expected {
            return Err(Error::Consistency(format!(
                "|G_p| = {} but phi*omega/w = {expected}",
                dec.group.order()
            )));
        }
        Ok(UnitQuotient {
            prime: prime.clone(),
            exp,
            ring,
            dec,
        })
    }

    pub fn prime(&self) -> &Ideal {
        &self.prime
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.dec.group
    }

    pub fn order(&self) -> u64 {
        self.dec.group.order()
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    /// Class of a unit `x mod p^e`.
    pub fn class_of(&self, x: &QuadInt) -> Result<Elem> {
        let r = self.ring.reduce_quad(x);
        if !self.ring.is_unit(r) {
            return Err(Error::NotCoprime(x.to_string(), self.prime.to_string()));
        }
        Ok(self.dec.coords(&self.ring.orbit_min(r)).expect("unit"))
    }
}

/// `phi_p: Cl(K_f/H_K) -> G_p`, `[(alpha)] -> [alpha mod p^e]`, as a map on
/// the elements of the principal subgroup.
pub fn phi_p(rcg: &RayClassGroup, gp: &UnitQuotient, x: &[u64]) -> Result<Elem> {
    let r = rcg
        .residue_of_principal(x)
        .ok_or_else(|| Error::InvalidArgument("class is not principal".into()))?;
    gp.class_of(&rcg.ring().lift(r))
}

/// Sanity check of the trivial modulus: `Cl(O_K)` has order `h_K`.
#[cfg(test)]
pub(crate) fn class_group_as_ray(field: &QuadField) -> Result<RayClassGroup> {
    let cg = Arc::new(ClassGroup::new(field)?);
    RayClassGroup::build(field, cg, &Ideal::unit(field), DEFAULT_CLOSURE_CAP)
}

/// Brute-force count of `Cl(f)` restricted to principal ideals: residues modulo roots of unity.
pub fn principal_part_bruteforce(field: &QuadField, f: &Ideal) -> Result<u64> {
    let ring = ResidueRing::new(field, f)?;
    let orbits: HashSet<Residue> = ring.units().into_iter().map(|u| ring.orbit_min(u)).collect();
    Ok(orbits.len() as u64)
}

#[allow(dead_code)]
fn assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<RayClassGroup>();
    is::<ModulusTower>();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_modulus_is_class_group() {
        let f = QuadField::new(-23).unwrap();
        assert_eq!(class_group_as_ray(&f).unwrap().order(), 3);
    }

    fn k11() -> QuadField {
        QuadField::new(-11).unwrap()
    }

    #[test]
    fn orders_for_minus_11() {
        let f = k11();
        let r = RayClassGroup::new(&f, &Ideal::rational(&f, 22).unwrap()).unwrap();
        assert_eq!(r.order(), 165);
        assert_eq!(r.group().invariants(), &[165]);
        let r = RayClassGroup::new(&f, &Ideal::different(&f)).unwrap();
        assert_eq!(r.order(), 5);
        let r = RayClassGroup::new(&f, &Ideal::rational(&f, 2).unwrap()).unwrap();
        assert_eq!(r.order(), 3);
        let r = RayClassGroup::new(&f, &Ideal::rational(&f, 11).unwrap()).unwrap();
        assert_eq!(r.order(), 55);
        assert_eq!(
            RayClassGroup::new(&f, &Ideal::unit(&f)).unwrap_err(),
            Error::UnitModulus
        );
    }

    #[test]
    fn unit_modulus_is_class_group() {
        let f = QuadField::new(-23).unwrap();
        assert_eq!(class_group_as_ray(&f).unwrap().order(), 3);
    }

    #[test]
    fn nontrivial_class_number() {
        let f = QuadField::new(-15).unwrap();
        let m = Ideal::rational(&f, 3).unwrap();
        let r = RayClassGroup::new(&f, &m).unwrap();
        let ring = ResidueRing::new(&f, &m).unwrap();
        assert_eq!(r.order(), 2 * ring.phi() * ring.omega() as u64 / 2);
        let h0 = r.principal_subgroup().unwrap();
        assert_eq!(h0.order(), principal_part_bruteforce(&f, &m).unwrap());
    }

    #[test]
    fn residue_ring_counts() {
        let f = k11();
        let m = Ideal::rational(&f, 22).unwrap();
        let ring = ResidueRing::new(&f, &m).unwrap();
        assert_eq!(ring.size(), 484);
        assert_eq!(ring.units().len() as u64, ring.phi());
        assert_eq!(ring.phi(), 3 * 110);
        assert_eq!(ring.omega(), 1);
        assert_eq!(omega_of(&f, &Ideal::rational(&f, 2).unwrap()), 2);
    }

    #[test]
    fn level_maps() {
        let f = k11();
        let top = RayClassGroup::new(&f, &Ideal::rational(&f, 22).unwrap()).unwrap();
        let two = RayClassGroup::new(&f, &Ideal::rational(&f, 2).unwrap()).unwrap();
        let eleven = RayClassGroup::new(&f, &Ideal::rational(&f, 11).unwrap()).unwrap();
        assert_eq!(level_map(&top, &two).unwrap().kernel().unwrap().order(), 55);
        assert_eq!(level_map(&top, &eleven).unwrap().kernel().unwrap().order(), 3);
        let id = level_map(&top, &top).unwrap();
        for x in top.group().elements() {
            assert_eq!(id.apply(&x), x);
        }
        assert!(level_map(&two, &top).is_err());
    }

    #[test]
    fn unit_quotients() {
        let f = k11();
        let p1 = Ideal::rational(&f, 2).unwrap();
        let p2 = Ideal::different(&f);
        assert_eq!(UnitQuotient::new(&f, &p1, 1).unwrap().order(), 3);
        assert_eq!(UnitQuotient::new(&f, &p2, 2).unwrap().order(), 55);
        let f3 = QuadField::new(-3).unwrap();
        let p7 = &crate::qfield::primes_above(&f3, 7).unwrap()[0];
        assert_eq!(UnitQuotient::new(&f3, p7, 1).unwrap().order(), 1);
    }

    #[test]
    fn tower_levels() {
        let f = k11();
        let top = RayClassGroup::new(&f, &Ideal::rational(&f, 22).unwrap()).unwrap();
        let tower = ModulusTower::new(top).unwrap();
        assert_eq!(tower.levels().len(), 6);
        let unit = tower.level(&[0, 0]).unwrap();
        assert_eq!(unit.group.order(), 1);
        assert_eq!(unit.kernel.order(), 165);
        assert_eq!(tower.level(&[0, 1]).unwrap().group.order(), 5);
    }
}
