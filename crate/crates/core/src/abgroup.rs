//! Finite abelian groups in Smith normal form.
//!
//! Elements are coordinate vectors reduced modulo the invariants `d_1 | ... | d_k`.
//! At desk scale every subgroup carries its full element set.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_LATTICE_CAP: u64 = 10_000;
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;
const MAX_ENUMERATED_ORDER: u64 = 50_000_000;

pub type Elem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    invariants: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(invariants: Vec<u64>) -> Result<FinAbGroup> {
        for (i, &d) in invariants.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidGroup(format!("invariant {d} < 2")));
            }
            if i > 0 && d % invariants[i - 1] != 0 {
                return Err(Error::InvalidGroup(format!(
                    "{} does not divide {d}",
                    invariants[i - 1]
                )));
            }
        }
        Ok(FinAbGroup { invariants })
    }

    pub fn trivial() -> FinAbGroup {
        FinAbGroup { invariants: vec![] }
    }

    /// The SNF of `Z/n_1 x ... x Z/n_r` for arbitrary `n_i >= 1`.
    pub fn from_orders(orders: &[u64]) -> FinAbGroup {
        let gens: Vec<Elem> = (0..orders.len())
            .map(|i| {
                let mut v = vec![0; orders.len()];
                v[i] = 1;
                v
            })
            .collect();
        let add = |x: &Elem, y: &Elem| -> Elem {
            x.iter()
                .zip(y)
                .zip(orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect()
        };
        decompose(&gens, vec![0; orders.len()], add, usize::MAX)
            .expect("no cap")
            .group
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn unit(&self, i: usize) -> Elem {
        let mut v = self.identity();
        v[i] = 1;
        v
    }

    pub fn is_identity(&self, x: &[u64]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.invariants)
            .map(|((a, b), d)| (a + b) % d)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.invariants)
            .map(|(a, d)| (d - a) % d)
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &[u64], k: i64) -> Elem {
        x.iter()
            .zip(&self.invariants)
            .map(|(&a, &d)| {
                let m = (k.rem_euclid(d as i64)) as u128;
                ((a as u128 * m) % d as u128) as u64
            })
            .collect()
    }

    pub fn reduce(&self, v: &[i64]) -> Elem {
        v.iter()
            .zip(&self.invariants)
            .map(|(&a, &d)| a.rem_euclid(d as i64) as u64)
            .collect()
    }

    pub fn order_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariants)
            .fold(1, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// Mixed-radix index; lexicographic order on coordinates.
    pub fn index_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariants)
            .fold(0, |acc, (&a, &d)| acc * d + a)
    }

    pub fn element_at(&self, mut i: u64) -> Elem {
        let mut v = vec![0; self.rank()];
        for k in (0..self.rank()).rev() {
            let d = self.invariants[k];
            v[k] = i % d;
            i /= d;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.order() > MAX_ENUMERATED_ORDER {
            return Err(Error::CapExceeded {
                what: "group order for enumeration",
                cap: MAX_ENUMERATED_ORDER,
            });
        }
        Ok(())
    }

    /// All subgroups, sorted by order then element fingerprint.
    pub fn subgroup_lattice(&self, cap: u64) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::CapExceeded {
                what: "group order for subgroup lattice",
                cap,
            });
        }
        let mut cyclic: Vec<Subgroup> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for g in self.elements() {
            let s = Subgroup::generated(self, std::slice::from_ref(&g))?;
            if seen.insert(s.members.clone()) {
                cyclic.push(s);
            }
        }
        let mut all: Vec<Subgroup> = vec![Subgroup::trivial(self)];
        let mut fps: HashSet<Vec<u64>> = HashSet::new();
        fps.insert(all[0].members.clone());
        let mut frontier = 0;
        while frontier < all.len() {
            let s = all[frontier].clone();
            frontier += 1;
            for c in &cyclic {
                if c.is_subgroup_of(&s) {
                    continue;
                }
                let j = s.join(c)?;
                if fps.insert(j.members.clone()) {
                    all.push(j);
                }
            }
        }
        all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(all)
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FinAbGroup,
    gens: Vec<Elem>,
    members: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        self.parent == o.parent && self.members == o.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn generated(parent: &FinAbGroup, gens: &[Elem]) -> Result<Subgroup> {
        parent.check_enumerable()?;
        let mut mark = vec![false; parent.order() as usize];
        let mut members = vec![0u64];
        mark[0] = true;
        for g in gens {
            let g = parent.reduce(&g.iter().map(|&v| v as i64).collect::<Vec<_>>());
            if mark[parent.index_of(&g) as usize] {
                continue;
            }
            let base: Vec<Elem> = members.iter().map(|&i| parent.element_at(i)).collect();
            let mut mult = g.clone();
            while !parent.is_identity(&mult) {
                for b in &base {
                    let idx = parent.index_of(&parent.add(b, &mult)) as usize;
                    if !mark[idx] {
                        mark[idx] = true;
                        members.push(idx as u64);
                    }
                }
                mult = parent.add(&mult, &g);
            }
        }
        members.sort_unstable();
        Ok(Subgroup {
            parent: parent.clone(),
            gens: gens.to_vec(),
            members,
        })
    }

    pub fn trivial(parent: &FinAbGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            gens: vec![],
            members: vec![0],
        }
    }

    pub fn full(parent: &FinAbGroup) -> Result<Subgroup> {
        let gens: Vec<Elem> = (0..parent.rank()).map(|i| parent.unit(i)).collect();
        Subgroup::generated(parent, &gens)
    }

    /// Subgroup from an explicit element list, which must be closed.
    pub fn from_elements(parent: &FinAbGroup, elems: &[Elem]) -> Result<Subgroup> {
        let s = Subgroup::generated(parent, elems)?;
        if s.order() as usize != elems.iter().map(|e| parent.index_of(e)).collect::<HashSet<_>>().len()
        {
            return Err(Error::NotSubgroup("element list is not closed".into()));
        }
        Ok(s)
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    /// Sorted mixed-radix indices of the members.
    pub fn fingerprint(&self) -> &[u64] {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter().map(|&i| self.parent.element_at(i))
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.members.binary_search(&self.parent.index_of(x)).is_ok()
    }

    pub fn is_subgroup_of(&self, o: &Subgroup) -> bool {
        self.parent == o.parent && self.members.iter().all(|m| o.members.binary_search(m).is_ok())
    }

    fn same_parent(&self, o: &Subgroup) -> Result<()> {
        if self.parent != o.parent {
            return Err(Error::InvalidGroup("subgroups of different groups".into()));
        }
        Ok(())
    }

    pub fn join(&self, o: &Subgroup) -> Result<Subgroup> {
        self.same_parent(o)?;
        let mut gens = self.gens.clone();
        gens.extend(o.gens.iter().cloned());
        Subgroup::generated(&self.parent, &gens)
    }

    pub fn intersect(&self, o: &Subgroup) -> Result<Subgroup> {
        self.same_parent(o)?;
        let members: Vec<u64> = self
            .members
            .iter()
            .filter(|m| o.members.binary_search(m).is_ok())
            .copied()
            .collect();
        let gens = members.iter().map(|&i| self.parent.element_at(i)).collect();
        let mut s = Subgroup {
            parent: self.parent.clone(),
            gens,
            members,
        };
        s.gens = s.small_generators();
        Ok(s)
    }

    /// `[o : self]`, requiring `self <= o`.
    pub fn index_in(&self, o: &Subgroup) -> Result<u64> {
        self.same_parent(o)?;
        if !self.is_subgroup_of(o) {
            return Err(Error::NotSubgroup(format!(
                "order {} subgroup is not contained in order {} subgroup",
                self.order(),
                o.order()
            )));
        }
        Ok(o.order() / self.order())
    }

    /// A greedy generating set: repeatedly add the first element not yet covered.
    pub fn small_generators(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut cur = Subgroup::trivial(&self.parent);
        for x in self.elements() {
            if cur.order() == self.order() {
                break;
            }
            if !cur.contains(&x) {
                gens.push(x);
                cur = Subgroup::generated(&self.parent, &gens).expect("enumerable");
            }
        }
        gens
    }

    /// Lexicographically minimal representative of `x + self`.
    pub fn coset_rep(&self, x: &[u64]) -> Elem {
        let p = &self.parent;
        self.members
            .iter()
            .map(|&m| p.index_of(&p.add(x, &p.element_at(m))))
            .min()
            .map(|i| p.element_at(i))
            .expect("subgroup is nonempty")
    }

    /// Lexicographically minimal coset representatives, sorted.
    pub fn coset_reps(&self) -> Vec<Elem> {
        let p = &self.parent;
        let mut seen = vec![false; p.order() as usize];
        let mut reps = Vec::new();
        for i in 0..p.order() {
            if seen[i as usize] {
                continue;
            }
            let x = p.element_at(i);
            reps.push(x.clone());
            for &m in &self.members {
                seen[p.index_of(&p.add(&x, &p.element_at(m))) as usize] = true;
            }
        }
        reps
    }

    /// `G / self` in SNF together with the projection.
    pub fn quotient(&self) -> Result<(FinAbGroup, GroupHom)> {
        let p = &self.parent;
        let gens: Vec<Elem> = (0..p.rank()).map(|i| self.coset_rep(&p.unit(i))).collect();
        let dec = decompose(
            &gens,
            p.identity(),
            |x, y| self.coset_rep(&p.add(x, y)),
            usize::MAX,
        )?;
        let q = dec.group.clone();
        let images = dec.gen_coords.clone();
        Ok((q.clone(), GroupHom::new(p.clone(), q, images)?))
    }
}

/// A homomorphism between SNF groups given by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    src: FinAbGroup,
    dst: FinAbGroup,
    images: Vec<Elem>,
}

impl GroupHom {
    pub fn new(src: FinAbGroup, dst: FinAbGroup, images: Vec<Elem>) -> Result<GroupHom> {
        if images.len() != src.rank() {
            return Err(Error::InvalidGroup("wrong number of images".into()));
        }
        for (i, img) in images.iter().enumerate() {
            if img.len() != dst.rank() {
                return Err(Error::InvalidGroup("image has wrong length".into()));
            }
            let t = dst.scale(img, src.invariants[i] as i64);
            if !dst.is_identity(&t) {
                return Err(Error::InvalidGroup(format!("image {i} has incompatible order")));
            }
        }
        Ok(GroupHom { src, dst, images })
    }

    pub fn src(&self) -> &FinAbGroup {
        &self.src
    }

    pub fn dst(&self) -> &FinAbGroup {
        &self.dst
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        let mut acc = self.dst.identity();
        for (k, img) in x.iter().zip(&self.images) {
            if *k != 0 {
                acc = self.dst.add(&acc, &self.dst.scale(img, *k as i64));
            }
        }
        acc
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        self.src.check_enumerable()?;
        let elems: Vec<Elem> = self
            .src
            .elements()
            .filter(|x| self.dst.is_identity(&self.apply(x)))
            .collect();
        let mut s = Subgroup::generated(&self.src, &[])?;
        s.members = elems.iter().map(|e| self.src.index_of(e)).collect();
        s.members.sort_unstable();
        s.gens = s.small_generators();
        Ok(s)
    }

    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        let gens: Vec<Elem> = s.gens().iter().map(|g| self.apply(g)).collect();
        Subgroup::generated(&self.dst, &gens)
    }

    pub fn image(&self) -> Result<Subgroup> {
        Subgroup::generated(&self.dst, &self.images)
    }

    pub fn compose(&self, then: &GroupHom) -> Result<GroupHom> {
        if self.dst != then.src {
            return Err(Error::InvalidGroup("composition of incompatible maps".into()));
        }
        let images = self.images.iter().map(|x| then.apply(x)).collect();
        GroupHom::new(self.src.clone(), then.dst.clone(), images)
    }
}

/// The result of [`decompose`]: an SNF group and tables for both directions.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub group: FinAbGroup,
    /// `elements[i]` is the black-box element with mixed-radix index `i`.
    pub elements: Vec<T>,
    index: HashMap<T, u64>,
    /// SNF coordinates of the input generators.
    pub gen_coords: Vec<Elem>,
}

impl<T: Clone + Eq + Hash> Decomposition<T> {
    pub fn coords(&self, x: &T) -> Option<Elem> {
        self.index.get(x).map(|&i| self.group.element_at(i))
    }

    pub fn element(&self, x: &[u64]) -> &T {
        &self.elements[self.group.index_of(x) as usize]
    }
}

/// Insert `v` into an upper-triangular full-rank row basis `h` (diagonal > 0),
/// reducing modulo `det` which the lattice contains.
fn hnf_insert(h: &mut [Vec<BigInt>], mut v: Vec<BigInt>, det: &BigInt) {
    let k = h.len();
    for x in v.iter_mut() {
        *x = x.mod_floor(det);
    }
    for i in 0..k {
        if v[i].is_zero() {
            continue;
        }
        let e = h[i][i].extended_gcd(&v[i]);
        let g = e.gcd.abs();
        let (s, t) = if e.gcd.is_negative() { (-e.x, -e.y) } else { (e.x, e.y) };
        let hi = (&h[i][i] / &g).clone();
        let vi = (&v[i] / &g).clone();
        let mut new_row = vec![BigInt::zero(); k];
        let mut rest = vec![BigInt::zero(); k];
        for j in 0..k {
            new_row[j] = (&s * &h[i][j] + &t * &v[j]).mod_floor(det);
            rest[j] = (&hi * &v[j] - &vi * &h[i][j]).mod_floor(det);
        }
        if new_row[i].is_zero() {
            new_row[i] = det.clone();
        }
        h[i] = new_row;
        v = rest;
    }
}

/// Smith normal form `U*m*V = D` of a square nonsingular matrix; returns `(diag, V)`.
fn smith(mut m: Vec<Vec<BigInt>>) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let k = m.len();
    let mut v: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for t in 0..k {
        loop {
            // pivot: smallest nonzero entry in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..k {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in (t + 1)..k {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for j in t..k {
                        let sub = &q * &m[t][j];
                        m[i][j] -= sub;
                    }
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..k {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..k {
                        let sub = &q * &m[i][t];
                        m[i][j] -= sub;
                    }
                    for row in v.iter_mut() {
                        let sub = &q * &row[t];
                        row[j] -= sub;
                    }
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition
            let mut bad = None;
            'outer: for i in (t + 1)..k {
                for j in (t + 1)..k {
                    if !m[i][j].is_multiple_of(&m[t][t]) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in t..k {
                        let add = m[i][j].clone();
                        m[t][j] += add;
                    }
                }
                None => break,
            }
        }
    }
    let diag = (0..k).map(|i| m[i][i].abs()).collect();
    (diag, v)
}

/// Turns the closure of black-box generators into an SNF group.
///
/// `mul` must be an associative, commutative law with `identity` as neutral
/// element, and equality on `T` must be canonical.
pub fn decompose<T, F>(gens: &[T], identity: T, mul: F, cap: usize) -> Result<Decomposition<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let k = gens.len();
    let cap_err = || Error::CapExceeded {
        what: "closure size",
        cap: cap as u64,
    };
    // generator orders give a full-rank starting lattice
    let mut orders = Vec::with_capacity(k);
    for g in gens {
        let mut x = g.clone();
        let mut n = 1usize;
        while x != identity {
            x = mul(&x, g);
            n += 1;
            if n > cap {
                return Err(cap_err());
            }
        }
        orders.push(n);
    }
    let mut words: HashMap<T, Vec<i64>> = HashMap::new();
    let mut order_found = vec![identity.clone()];
    words.insert(identity.clone(), vec![0; k]);
    let mut queue = VecDeque::from([identity.clone()]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let wx = words[&x].clone();
        for (j, g) in gens.iter().enumerate() {
            let y = mul(&x, g);
            let mut wy = wx.clone();
            wy[j] += 1;
            match words.get(&y) {
                Some(w) => {
                    let rel: Vec<i64> = wy.iter().zip(w).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&r| r != 0) {
                        relations.push(rel);
                    }
                }
                None => {
                    if words.len() >= cap {
                        return Err(cap_err());
                    }
                    words.insert(y.clone(), wy);
                    order_found.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    let n = words.len();
    let mut h: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::from(orders[i]) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let target = BigInt::from(n);
    let det_of = |h: &[Vec<BigInt>]| -> BigInt { (0..k).map(|i| h[i][i].clone()).product() };
    let mut det = det_of(&h);
    for rel in &relations {
        if det == target {
            break;
        }
        hnf_insert(&mut h, rel.iter().map(|&r| BigInt::from(r)).collect(), &det);
        det = det_of(&h);
    }
    if det != target {
        return Err(Error::Consistency(format!(
            "relation lattice has index {det}, closure has {n} elements"
        )));
    }
    let (diag, v) = smith(h);
    let keep: Vec<usize> = (0..k).filter(|&i| !diag[i].is_one()).collect();
    let invariants: Vec<u64> = keep.iter().map(|&i| diag[i].to_u64().expect("fits")).collect();
    let group = FinAbGroup::new(invariants)?;
    let to_coords = |w: &[i64]| -> Elem {
        keep.iter()
            .zip(group.invariants())
            .map(|(&i, &d)| {
                let s: BigInt = (0..k).map(|r| BigInt::from(w[r]) * &v[r][i]).sum();
                s.mod_floor(&BigInt::from(d)).to_u64().unwrap()
            })
            .collect()
    };
    let mut elements: Vec<Option<T>> = vec![None; n];
    let mut index = HashMap::with_capacity(n);
    for x in order_found {
        let c = to_coords(&words[&x]);
        let i = group.index_of(&c);
        if elements[i as usize].is_some() {
            return Err(Error::Consistency("coordinate map is not injective".into()));
        }
        elements[i as usize] = Some(x.clone());
        index.insert(x, i);
    }
    let gen_coords = (0..k)
        .map(|j| {
            let mut w = vec![0; k];
            w[j] = 1;
            to_coords(&w)
        })
        .collect();
    Ok(Decomposition {
        group,
        elements: elements.into_iter().map(|e| e.expect("bijective")).collect(),
        index,
        gen_coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u64) -> FinAbGroup {
        FinAbGroup::new(vec![n]).unwrap()
    }

    #[test]
    fn decompose_cyclic_165() {
        let dec = decompose(&[1u64], 0u64, |a, b| (a + b) % 165, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(dec.group.invariants(), &[165]);
        let dec = decompose(&[7u64], 0u64, |a, b| (a + b) % 165, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(dec.group.invariants(), &[165]);
    }

    #[test]
    fn decompose_trivial_and_product() {
        let dec = decompose::<u64, _>(&[], 0, |a, b| a + b, 10).unwrap();
        assert_eq!(dec.group.order(), 1);
        let add = |x: &(u64, u64), y: &(u64, u64)| ((x.0 + y.0) % 2, (x.1 + y.1) % 4);
        let dec = decompose(&[(1, 0), (0, 1)], (0, 0), add, 100).unwrap();
        assert_eq!(dec.group.invariants(), &[2, 4]);
        let dec = decompose(&[(1, 1), (1, 0), (0, 2)], (0, 0), add, 100).unwrap();
        assert_eq!(dec.group.invariants(), &[2, 4]);
        assert_eq!(FinAbGroup::from_orders(&[6, 4]).invariants(), &[2, 12]);
    }

    #[test]
    fn decompose_cap() {
        let r = decompose(&[1u64], 0u64, |a, b| (a + b) % 1000, 100);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(cyc(5).subgroup_lattice(DEFAULT_LATTICE_CAP).unwrap().len(), 2);
        assert_eq!(cyc(165).subgroup_lattice(DEFAULT_LATTICE_CAP).unwrap().len(), 8);
        let v4 = FinAbGroup::new(vec![2, 2]).unwrap();
        assert_eq!(v4.subgroup_lattice(DEFAULT_LATTICE_CAP).unwrap().len(), 5);
        let big = FinAbGroup::new(vec![20_000]).unwrap();
        assert!(big.subgroup_lattice(DEFAULT_LATTICE_CAP).is_err());
    }

    #[test]
    fn lattice_ops() {
        let g = cyc(165);
        let c33 = Subgroup::generated(&g, &[vec![5]]).unwrap();
        let c55 = Subgroup::generated(&g, &[vec![3]]).unwrap();
        assert_eq!(c33.order(), 33);
        assert_eq!(c55.order(), 55);
        let i = c33.intersect(&c55).unwrap();
        assert_eq!(i.order(), 11);
        assert_eq!(c33.join(&c55).unwrap().order(), 165);
        assert_eq!(c33.intersect(&c33).unwrap(), c33);
        assert_eq!(i.index_in(&c55).unwrap(), 5);
        assert!(c33.index_in(&c55).is_err());
        let v4 = FinAbGroup::new(vec![2, 2]).unwrap();
        let a = Subgroup::generated(&v4, &[vec![1, 0]]).unwrap();
        let b = Subgroup::generated(&v4, &[vec![0, 1]]).unwrap();
        assert_eq!(a.join(&b).unwrap().order(), 4);
    }

    #[test]
    fn quotient_and_kernel() {
        let g = FinAbGroup::new(vec![2, 12]).unwrap();
        let s = Subgroup::generated(&g, &[vec![1, 6]]).unwrap();
        let (q, pi) = s.quotient().unwrap();
        assert_eq!(q.order(), 12);
        assert_eq!(pi.kernel().unwrap(), s);
        assert_eq!(pi.image().unwrap().order(), q.order());
    }
}
