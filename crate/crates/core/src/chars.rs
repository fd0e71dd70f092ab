//! Characters of finite abelian groups with exact values.
//!
//! A value `exp(2*pi*i*q)` is stored as the rational `q` modulo 1 ([`Frac`]), so
//! products of values become sums and every identity is checked exactly.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::abgroup::{Elem, FinAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::qfield::Ideal;
use crate::rayclass::{phi_p, Level, ModulusTower, UnitQuotient};

/// A rational number modulo 1, always reduced with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    num: u64,
    den: u64,
}

impl Frac {
    pub fn new(num: i64, den: u64) -> Frac {
        assert!(den > 0, "zero denominator");
        let n = num.rem_euclid(den as i64) as u64;
        let g = n.gcd(&den);
        Frac {
            num: n / g,
            den: den / g,
        }
    }

    pub fn zero() -> Frac {
        Frac { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, o: &Frac) -> Frac {
        let den = self.den.lcm(&o.den);
        let n = (self.num as u128 * (den / self.den) as u128 + o.num as u128 * (den / o.den) as u128)
            % den as u128;
        Frac::new(n as i64, den)
    }

    pub fn neg(&self) -> Frac {
        Frac::new(-(self.num as i64), self.den)
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul_int(&self, k: i64) -> Frac {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Frac::new(n as i64, self.den)
    }

    /// All `q` with `n*q = self`, ascending.
    pub fn roots(&self, n: u64) -> Vec<Frac> {
        (0..n)
            .map(|j| Frac::new((self.num + j * self.den) as i64, self.den * n))
            .collect()
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A character `x -> sum t_i x_i / d_i` of an SNF group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    group: FinAbGroup,
    exps: Vec<u64>,
}

impl Character {
    pub fn new(group: &FinAbGroup, exps: Vec<u64>) -> Result<Character> {
        if exps.len() != group.rank() {
            return Err(Error::InvalidArgument("exponent vector has wrong length".into()));
        }
        let exps = exps
            .iter()
            .zip(group.invariants())
            .map(|(t, d)| t % d)
            .collect();
        Ok(Character {
            group: group.clone(),
            exps,
        })
    }

    pub fn trivial(group: &FinAbGroup) -> Character {
        Character {
            group: group.clone(),
            exps: vec![0; group.rank()],
        }
    }

    /// The character with the given values on the SNF unit vectors.
    pub fn from_unit_values(group: &FinAbGroup, vals: &[Frac]) -> Result<Character> {
        let mut exps = Vec::with_capacity(vals.len());
        for (v, &d) in vals.iter().zip(group.invariants()) {
            if d % v.den() != 0 {
                return Err(Error::InvalidArgument(format!(
                    "value {v} is not a {d}-th root of unity"
                )));
            }
            exps.push(v.num() * (d / v.den()));
        }
        Character::new(group, exps)
    }

    /// Characters indexed like group elements (the dual is identified with `G`).
    pub fn all(group: &FinAbGroup) -> impl Iterator<Item = Character> + '_ {
        group.elements().map(move |e| Character {
            group: group.clone(),
            exps: e,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn value(&self, x: &[u64]) -> Frac {
        let e = self.group.exponent();
        let mut acc: u128 = 0;
        for ((t, v), d) in self.exps.iter().zip(x).zip(self.group.invariants()) {
            acc += (*t as u128 * *v as u128 % *d as u128) * (e / d) as u128;
        }
        Frac::new((acc % e as u128) as i64, e)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&t| t == 0)
    }

    pub fn is_trivial_on(&self, s: &Subgroup) -> bool {
        s.gens().iter().all(|g| self.value(g).is_zero())
    }

    pub fn mul(&self, o: &Character) -> Character {
        Character {
            group: self.group.clone(),
            exps: self.group.add(&self.exps, &o.exps),
        }
    }

    pub fn conj(&self) -> Character {
        Character {
            group: self.group.clone(),
            exps: self.group.neg(&self.exps),
        }
    }

    pub fn order(&self) -> u64 {
        self.group.order_of(&self.exps)
    }

    pub fn restrict(&self, s: &Subgroup) -> SubgroupCharacter {
        let values = s
            .elements()
            .map(|x| (s.parent().index_of(&x), self.value(&x)))
            .collect();
        SubgroupCharacter {
            sub: s.clone(),
            values,
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|t| t.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A character of a subgroup, stored as a value table.
#[derive(Clone, Debug)]
pub struct SubgroupCharacter {
    sub: Subgroup,
    values: HashMap<u64, Frac>,
}

impl SubgroupCharacter {
    pub fn trivial(sub: &Subgroup) -> SubgroupCharacter {
        SubgroupCharacter {
            sub: sub.clone(),
            values: sub.fingerprint().iter().map(|&i| (i, Frac::zero())).collect(),
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn value(&self, x: &[u64]) -> Option<Frac> {
        self.values.get(&self.sub.parent().index_of(x)).copied()
    }

    /// Converts to a character of the parent once the subgroup is everything.
    pub fn to_character(&self) -> Result<Character> {
        let g = self.sub.parent();
        if self.sub.order() != g.order() {
            return Err(Error::InvalidArgument("character is not defined on the whole group".into()));
        }
        let vals: Vec<Frac> = (0..g.rank()).map(|i| self.values[&g.index_of(&g.unit(i))]).collect();
        Character::from_unit_values(g, &vals)
    }
}

/// Order of the coset `g + H` in `G/H`.
pub fn coset_order(h: &Subgroup, g: &[u64]) -> u64 {
    let p = h.parent();
    let mut x = g.to_vec();
    let mut n = 1;
    while !h.contains(&x) {
        x = p.add(&x, g);
        n += 1;
    }
    n
}

/// Extends `chi` from `H` to `<H, g>` with `psi(g) = root`, where `n*root` must
/// equal `chi(n*g)` for the order `n` of `g` modulo `H`.
pub fn extend_character(chi: &SubgroupCharacter, g: &[u64], root: Frac) -> Result<SubgroupCharacter> {
    let h = &chi.sub;
    let p = h.parent();
    if h.contains(g) {
        return Err(Error::InvalidArgument("g already lies in H".into()));
    }
    let n = coset_order(h, g);
    let target = chi.value(&p.scale(g, n as i64)).expect("n*g lies in H");
    if root.mul_int(n as i64) != target {
        return Err(Error::BadRoot(format!("n = {n}, r = {root}, chi(g^n) = {target}")));
    }
    let mut gens = h.gens().to_vec();
    gens.push(g.to_vec());
    let sub = Subgroup::generated(p, &gens)?;
    let mut values = HashMap::with_capacity(sub.order() as usize);
    let mut kg = p.identity();
    let mut kr = Frac::zero();
    for _ in 0..n {
        for x in h.elements() {
            let y = p.add(&x, &kg);
            values.insert(p.index_of(&y), chi.values[&p.index_of(&x)].add(&kr));
        }
        kg = p.add(&kg, g);
        kr = kr.add(&root);
    }
    Ok(SubgroupCharacter { sub, values })
}

/// Extends along the SNF unit vectors, always taking the first root.
pub fn extend_to_group(chi: &SubgroupCharacter) -> Result<Character> {
    let g = chi.sub.parent().clone();
    let mut cur = chi.clone();
    for i in 0..g.rank() {
        let e = g.unit(i);
        if cur.sub.contains(&e) {
            continue;
        }
        let n = coset_order(&cur.sub, &e);
        let target = cur.value(&g.scale(&e, n as i64)).unwrap();
        cur = extend_character(&cur, &e, target.roots(n)[0])?;
    }
    cur.to_character()
}

/// The conductor of a character of the top level of a tower.
#[derive(Clone, Debug)]
pub struct Conductor<'a> {
    pub modulus: Ideal,
    pub exps: Vec<u32>,
    pub level: &'a Level,
}

/// `f_chi`: the smallest `f' | f` such that `chi` kills `ker(Cl(f) -> Cl(f'))`.
pub fn conductor<'a>(tower: &'a ModulusTower, chi: &Character) -> Result<Conductor<'a>> {
    let ok: Vec<&Level> = tower
        .levels()
        .iter()
        .filter(|l| chi.is_trivial_on(&l.kernel))
        .collect();
    let best = ok
        .iter()
        .min_by(|a, b| (a.modulus.norm(), &a.modulus).cmp(&(b.modulus.norm(), &b.modulus)))
        .ok_or_else(|| Error::Consistency("character does not factor through its own level".into()))?;
    for l in &ok {
        if !best.modulus.divides(&l.modulus)? {
            return Err(Error::Consistency(format!(
                "levels {} and {} are incomparable for the conductor",
                best.modulus, l.modulus
            )));
        }
    }
    Ok(Conductor {
        modulus: best.modulus.clone(),
        exps: best.exps.clone(),
        level: best,
    })
}

/// `p | f_chi` for the prime with index `i` in the factorization.
pub fn conductor_divisible_by(tower: &ModulusTower, chi: &Character, i: usize) -> bool {
    let mut exps: Vec<u32> = tower.top().factorization().iter().map(|(_, e)| *e).collect();
    exps[i] = 0;
    let l = tower.level(&exps).expect("every divisor is a level");
    !chi.is_trivial_on(&l.kernel)
}

/// The character `chi0` of `Cl(f')` with `chi0 o level_map = chi`.
pub fn primitive_character(level: &Level, chi: &Character) -> Result<Character> {
    if !chi.is_trivial_on(&level.kernel) {
        return Err(Error::InvalidArgument("character does not factor through this level".into()));
    }
    let dst = level.map.dst();
    let mut vals: Vec<Option<Frac>> = vec![None; dst.rank()];
    let units: Vec<Elem> = (0..dst.rank()).map(|i| dst.unit(i)).collect();
    let mut left = dst.rank();
    for x in level.map.src().elements() {
        if left == 0 {
            break;
        }
        let y = level.map.apply(&x);
        if let Some(i) = units.iter().position(|u| *u == y) {
            if vals[i].is_none() {
                vals[i] = Some(chi.value(&x));
                left -= 1;
            }
        }
    }
    let vals: Vec<Frac> = vals.into_iter().map(|v| v.expect("level map is onto")).collect();
    Character::from_unit_values(dst, &vals)
}

/// Which branch of the construction handled a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTaken {
    AlreadyDivides,
    NotGenerated,
    Generated,
}

#[derive(Clone, Debug)]
pub struct AdmissibleCharacter {
    pub chi: Character,
    pub cases: Vec<(Ideal, CaseTaken)>,
}

/// Starting point: trivial on `S_L`, first nonzero root along `D`.
fn initial_character(s_l: &Subgroup, d: &[u64]) -> Result<Character> {
    let triv = SubgroupCharacter::trivial(s_l);
    let n = coset_order(s_l, d);
    let chi = extend_character(&triv, d, Frac::new(1, n))?;
    extend_to_group(&chi)
}

/// A character trivial on `S_L`, nontrivial on `D`, whose conductor is divisible
/// by every prime in `required` (given as indices into the modulus factorization).
pub fn find_admissible_character(
    tower: &ModulusTower,
    s_l: &Subgroup,
    d: &[u64],
    required: &[usize],
) -> Result<AdmissibleCharacter> {
    let rcg = tower.top();
    let g = rcg.group();
    if s_l.parent() != g {
        return Err(Error::InvalidArgument("S_L is not a subgroup of Cl(f)".into()));
    }
    if s_l.contains(d) {
        return Err(Error::InvalidArgument("D lies in Cl(K_f/L)".into()));
    }
    let fac = rcg.factorization().to_vec();
    let h0 = rcg.principal_subgroup()?;
    let h0_sl = h0.join(s_l)?;
    let h0_cap_sl = h0.intersect(s_l)?;
    let mut chi = initial_character(s_l, d)?;
    let mut cases = Vec::new();
    for &i in required {
        let (p, e) = &fac[i];
        if conductor_divisible_by(tower, &chi, i) {
            cases.push((p.clone(), CaseTaken::AlreadyDivides));
            continue;
        }
        let gp = UnitQuotient::new(rcg.field(), p, *e)?;
        let gpg = gp.group();
        // m*D = h + s with h in H0, s in S_L
        let m = coset_order(&h0_sl, d);
        let md = g.scale(d, m as i64);
        let h = s_l
            .elements()
            .map(|s| g.sub(&md, &s))
            .find(|x| h0.contains(x))
            .expect("m*D lies in H0 + S_L");
        let beta = phi_p(rcg, &gp, &h)?;
        let img_gens = h0_cap_sl
            .gens()
            .iter()
            .map(|x| phi_p(rcg, &gp, x))
            .collect::<Result<Vec<_>>>()?;
        let img = Subgroup::generated(gpg, &img_gens)?;
        let mut with_beta = img_gens.clone();
        with_beta.push(beta.clone());
        let span = Subgroup::generated(gpg, &with_beta)?;
        let case = if span.order() != gpg.order() {
            CaseTaken::NotGenerated
        } else {
            CaseTaken::Generated
        };
        let forbidden = chi.value(&md).neg();
        let psi = Character::all(gpg)
            .filter(|c| !c.is_trivial() && c.is_trivial_on(&img))
            .find(|c| {
                let v = c.value(&beta);
                match case {
                    CaseTaken::NotGenerated => v.is_zero(),
                    _ => !v.is_zero() && v != forbidden,
                }
            })
            .ok_or_else(|| Error::NoCharacter(p.to_string()))?;
        // psi o phi_p on H0, 0 on S_L, then along D and the rest with first roots
        let mut values = HashMap::new();
        for x in h0.elements() {
            values.insert(g.index_of(&x), psi.value(&phi_p(rcg, &gp, &x)?));
        }
        let on_h0 = SubgroupCharacter { sub: h0.clone(), values };
        let mut on_join = on_h0;
        for s in s_l.gens() {
            if on_join.sub.contains(s) {
                continue;
            }
            let n = coset_order(&on_join.sub, s);
            let target = on_join.value(&g.scale(s, n as i64)).unwrap();
            let zero = target.roots(n).into_iter().find(|r| r.is_zero());
            let zero = zero.ok_or_else(|| {
                Error::Consistency("psi is not trivial on H0 and S_L together".into())
            })?;
            on_join = extend_character(&on_join, s, zero)?;
        }
        let psi_p = if on_join.sub.contains(d) {
            extend_to_group(&on_join)?
        } else {
            let n = coset_order(&on_join.sub, d);
            let target = on_join.value(&g.scale(d, n as i64)).unwrap();
            let roots = target.roots(n);
            let chi_d = chi.value(d).neg();
            let r = match case {
                CaseTaken::NotGenerated => roots.into_iter().find(|r| r.is_zero()),
                _ => roots.into_iter().find(|r| *r != chi_d),
            }
            .ok_or_else(|| Error::NoCharacter(p.to_string()))?;
            extend_to_group(&extend_character(&on_join, d, r)?)?
        };
        chi = chi.mul(&psi_p);
        cases.push((p.clone(), case));
    }
    if !chi.is_trivial_on(s_l) || chi.value(d).is_zero() {
        return Err(Error::Consistency("constructed character lost a property".into()));
    }
    for &i in required {
        if !conductor_divisible_by(tower, &chi, i) {
            return Err(Error::NoCharacter(fac[i].0.to_string()));
        }
    }
    Ok(AdmissibleCharacter { chi, cases })
}

/// All characters with the three properties, by enumeration.
pub fn admissible_characters_bruteforce(
    tower: &ModulusTower,
    s_l: &Subgroup,
    d: &[u64],
    required: &[usize],
) -> Vec<Character> {
    let g = tower.top().group();
    Character::all(g)
        .filter(|c| c.is_trivial_on(s_l) && !c.value(d).is_zero())
        .filter(|c| required.iter().all(|&i| conductor_divisible_by(tower, c, i)))
        .collect()
}

/// `(|G1|, |G2|)` for `S_L <= S_L'` and a set of prime indices `h`.
pub fn count_g1_g2(
    tower: &ModulusTower,
    s_l: &Subgroup,
    s_l2: &Subgroup,
    h: &[usize],
) -> Result<(u64, u64)> {
    if !s_l.is_subgroup_of(s_l2) {
        return Err(Error::NotSubgroup("S_L is not contained in S_L'".into()));
    }
    let g = tower.top().group();
    let mut g1 = 0u64;
    let mut g2 = 0u64;
    for c in Character::all(g).filter(|c| c.is_trivial_on(s_l)) {
        if !c.is_trivial_on(s_l2) {
            g1 += 1;
        }
        if !c.is_trivial() && h.iter().any(|&i| !conductor_divisible_by(tower, &c, i)) {
            g2 += 1;
        }
    }
    let l = g.order() / s_l.order();
    let l2 = g.order() / s_l2.order();
    if g1 != l - l2 {
        return Err(Error::Consistency(format!("|G1| = {g1} but [L:K] - [L':K] = {}", l - l2)));
    }
    Ok((g1, g2))
}
