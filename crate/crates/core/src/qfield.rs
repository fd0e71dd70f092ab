//! Exact arithmetic in an imaginary quadratic field `K = Q(sqrt(d))`.
//!
//! Integers are written `a + b*w` with `w = (d + sqrt(d))/2`, a root of
//! `x^2 - d*x + (d^2 - d)/4`. The same formula is used for both residue classes
//! of `d` mod 4, so Hermite normal forms are comparable everywhere in the crate.
//!
//! Ideals are stored as `a*Z + (b + c*w)*Z` with `c | a`, `c | b`, `0 <= b < a`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Desk-scale cap on norms that get factored by trial division.
pub const MAX_FACTOR_NORM: u64 = 1_000_000_000;

/// An element `a + b*w` of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        QuadInt::new(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
        }
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            a: &self.a * k,
            b: &self.b * k,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

/// An imaginary quadratic field given by its fundamental discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    disc: i64,
    d: BigInt,
    d2: BigInt,
    roots: Vec<QuadInt>,
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

impl QuadField {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_fundamental(disc) {
            return Err(Error::NotFundamental(disc));
        }
        let d = BigInt::from(disc);
        let d2 = (&d * &d - &d) / 4;
        let mut field = QuadField {
            disc,
            d,
            d2,
            roots: Vec::new(),
        };
        let mut roots = Vec::new();
        let span = disc.abs() + 3;
        for b in -1i64..=1 {
            for a in -span..=span {
                if b == 0 && a.abs() != 1 {
                    continue;
                }
                let x = QuadInt::new(a, b);
                if field.norm(&x).is_one() {
                    roots.push(x);
                }
            }
        }
        roots.sort();
        field.roots = roots;
        Ok(field)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Number of roots of unity `w_K`.
    pub fn w(&self) -> usize {
        self.roots.len()
    }

    pub fn roots_of_unity(&self) -> &[QuadInt] {
        &self.roots
    }

    /// `(d^2 - d)/4`, the norm of `w`.
    pub fn norm_omega(&self) -> &BigInt {
        &self.d2
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        // w^2 = d*w - d2
        let be = &x.b * &y.b;
        QuadInt {
            a: &x.a * &y.a - &be * &self.d2,
            b: &x.a * &y.b + &x.b * &y.a + &be * &self.d,
        }
    }

    pub fn norm(&self, x: &QuadInt) -> BigInt {
        &x.a * &x.a + &self.d * &x.a * &x.b + &self.d2 * &x.b * &x.b
    }

    pub fn trace(&self, x: &QuadInt) -> BigInt {
        BigInt::from(2) * &x.a + &self.d * &x.b
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        QuadInt {
            a: &x.a + &self.d * &x.b,
            b: -&x.b,
        }
    }

    pub fn pow(&self, x: &QuadInt, mut e: u32) -> QuadInt {
        let mut base = x.clone();
        let mut acc = QuadInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `sqrt(d) = 2w - d`.
    pub fn sqrt_disc(&self) -> QuadInt {
        QuadInt {
            a: -&self.d,
            b: BigInt::from(2),
        }
    }

    /// `Tr(x * conj(y))`, the bilinear form attached to the norm (`B(x, x) = 2 N(x)`).
    pub fn bilinear(&self, x: &QuadInt, y: &QuadInt) -> BigInt {
        self.trace(&self.mul(x, &self.conj(y)))
    }

    /// Sign of `Im(x / y)`: `x.b*y.a - x.a*y.b` times the positive `Im(w)`.
    pub fn orientation(x: &QuadInt, y: &QuadInt) -> BigInt {
        &x.b * &y.a - &x.a * &y.b
    }

    /// Lagrange-Gauss reduction of a rank-2 sublattice with respect to the norm form.
    /// On return `N(u) <= N(v)` and `|B(u, v)| <= N(u)`.
    pub fn reduce_basis(&self, u: &QuadInt, v: &QuadInt) -> (QuadInt, QuadInt) {
        let (mut u, mut v) = (u.clone(), v.clone());
        loop {
            if self.norm(&u) > self.norm(&v) {
                std::mem::swap(&mut u, &mut v);
            }
            let nu2 = BigInt::from(2) * self.norm(&u);
            let m = round_div(&self.bilinear(&u, &v), &nu2);
            if m.is_zero() {
                return (u, v);
            }
            v = v.sub(&u.scale(&m));
        }
    }

    /// Canonical unit multiple: among `u*x` with `a > 0` (or `a = 0`, `b > 0`),
    /// the lexicographically smallest `(a, b)`.
    pub fn canonical_associate(&self, x: &QuadInt) -> QuadInt {
        self.roots
            .iter()
            .map(|u| self.mul(u, x))
            .filter(|y| y.a.is_positive() || (y.a.is_zero() && y.b.is_positive()))
            .min()
            .unwrap_or_else(|| x.clone())
    }
}

/// Nearest-integer quotient `round(a / b)` for `b > 0`, ties rounded up.
pub fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (BigInt::from(2) * a + b).div_floor(&(BigInt::from(2) * b))
}

/// An integral ideal `a*Z + (b + c*w)*Z` in canonical Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    disc: i64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// HNF of the Z-span of vectors `(x, y)` = `x + y*w`. `None` if the span is not of rank 2.
fn hnf_lattice(vs: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut a = BigInt::zero();
    for (x, y) in vs {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        pivot = Some(match pivot.take() {
            None => (x.clone(), y.clone()),
            Some((px, py)) => {
                let e = py.extended_gcd(y);
                let (g, s, t) = if e.gcd.is_negative() {
                    (-e.gcd, -e.x, -e.y)
                } else {
                    (e.gcd, e.x, e.y)
                };
                let zx = (y / &g) * &px - (&py / &g) * x;
                a = a.gcd(&zx);
                (&s * &px + &t * x, g)
            }
        });
    }
    let (px, py) = pivot?;
    if a.is_zero() {
        return None;
    }
    let (px, c) = if py.is_negative() { (-px, -py) } else { (px, py) };
    let a = a.abs();
    let b = px.mod_floor(&a);
    Some((a, b, c))
}

impl Ideal {
    fn d_and_d2(&self) -> (BigInt, BigInt) {
        let d = BigInt::from(self.disc);
        let d2 = (&d * &d - &d) / 4;
        (d, d2)
    }

    fn check_same(&self, o: &Ideal) -> Result<()> {
        if self.disc != o.disc {
            return Err(Error::MixedField(self.disc, o.disc));
        }
        Ok(())
    }

    fn from_zspan(disc: i64, vs: &[(BigInt, BigInt)]) -> Result<Ideal> {
        let (a, b, c) = hnf_lattice(vs).ok_or(Error::ZeroIdeal)?;
        Ok(Ideal { disc, a, b, c })
    }

    /// The ideal generated over `O_K` by the given elements.
    pub fn from_generators(field: &QuadField, gens: &[QuadInt]) -> Result<Ideal> {
        let w = QuadInt::new(0, 1);
        let mut vs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            vs.push((g.a.clone(), g.b.clone()));
            let gw = field.mul(g, &w);
            vs.push((gw.a, gw.b));
        }
        Ideal::from_zspan(field.disc, &vs)
    }

    pub fn principal(field: &QuadField, x: &QuadInt) -> Result<Ideal> {
        Ideal::from_generators(field, std::slice::from_ref(x))
    }

    pub fn rational(field: &QuadField, n: impl Into<BigInt>) -> Result<Ideal> {
        let n: BigInt = n.into();
        Ideal::principal(field, &QuadInt::new(n, 0))
    }

    pub fn unit(field: &QuadField) -> Ideal {
        Ideal {
            disc: field.disc,
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// Validates a user-supplied HNF triple.
    pub fn from_hnf(field: &QuadField, a: BigInt, b: BigInt, c: BigInt) -> Result<Ideal> {
        let shown = format!("[{a},{b},{c}]");
        if !a.is_positive() || !c.is_positive() || b.is_negative() || b >= a {
            return Err(Error::InvalidHnf(shown));
        }
        let cand = Ideal::from_generators(
            field,
            &[QuadInt::new(a.clone(), 0), QuadInt::new(b.clone(), c.clone())],
        )?;
        if cand.a != a || cand.b != b || cand.c != c {
            return Err(Error::InvalidHnf(format!(
                "{shown} is not closed under multiplication by w"
            )));
        }
        Ok(cand)
    }

    /// The different `(sqrt(d))`.
    pub fn different(field: &QuadField) -> Ideal {
        Ideal::principal(field, &field.sqrt_disc()).expect("sqrt(d) is nonzero")
    }

    /// Parses `[a,b,c]` or a rational integer `n` (meaning `n*O_K`).
    pub fn parse(field: &QuadField, s: &str) -> Result<Ideal> {
        let t = s.trim();
        let offset = s.len() - s.trim_start().len();
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or(Error::Parse {
                pos: offset + t.len(),
                msg: "missing closing ']'".into(),
            })?;
            let mut vals = Vec::new();
            let mut pos = offset + 1;
            for part in inner.split(',') {
                let v: BigInt = part.trim().parse().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("expected an integer, found '{}'", part.trim()),
                })?;
                vals.push(v);
                pos += part.len() + 1;
            }
            if vals.len() != 3 {
                return Err(Error::Parse {
                    pos: offset,
                    msg: format!("expected 3 entries [a,b,c], found {}", vals.len()),
                });
            }
            let c = vals.pop().unwrap();
            let b = vals.pop().unwrap();
            let a = vals.pop().unwrap();
            Ideal::from_hnf(field, a, b, c)
        } else {
            let n: BigInt = t.parse().map_err(|_| Error::Parse {
                pos: offset,
                msg: format!("expected an integer or [a,b,c], found '{t}'"),
            })?;
            if n.is_zero() {
                return Err(Error::ZeroIdeal);
            }
            Ideal::rational(field, n)
        }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    /// Z-basis `[a, b + c*w]`.
    pub fn basis(&self) -> [QuadInt; 2] {
        [
            QuadInt::new(self.a.clone(), 0),
            QuadInt::new(self.b.clone(), self.c.clone()),
        ]
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    /// Generator of `I ∩ Z`.
    pub fn smallest_positive_integer(&self) -> &BigInt {
        &self.a
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one()
    }

    pub fn contains(&self, x: &QuadInt) -> bool {
        if !x.b.is_multiple_of(&self.c) {
            return false;
        }
        let k = &x.b / &self.c;
        (&x.a - &k * &self.b).is_multiple_of(&self.a)
    }

    /// `self ⊇ other`, i.e. `self | other`.
    pub fn divides(&self, other: &Ideal) -> Result<bool> {
        self.check_same(other)?;
        Ok(other.basis().iter().all(|x| self.contains(x)))
    }

    pub fn mul(&self, o: &Ideal) -> Result<Ideal> {
        self.check_same(o)?;
        let (d, d2) = self.d_and_d2();
        let mut vs = Vec::with_capacity(4);
        for x in self.basis().iter() {
            for y in o.basis().iter() {
                let be = &x.b * &y.b;
                vs.push((
                    &x.a * &y.a - &be * &d2,
                    &x.a * &y.b + &x.b * &y.a + &be * &d,
                ));
            }
        }
        Ideal::from_zspan(self.disc, &vs)
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal {
            disc: self.disc,
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        };
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// `I + J`, the gcd of two ideals.
    pub fn add(&self, o: &Ideal) -> Result<Ideal> {
        self.check_same(o)?;
        let vs: Vec<_> = self
            .basis()
            .into_iter()
            .chain(o.basis())
            .map(|x| (x.a, x.b))
            .collect();
        Ideal::from_zspan(self.disc, &vs)
    }

    pub fn coprime(&self, o: &Ideal) -> Result<bool> {
        Ok(self.add(o)?.is_unit())
    }

    pub fn conj(&self) -> Ideal {
        let d = BigInt::from(self.disc);
        let vs = [
            (self.a.clone(), BigInt::zero()),
            (&self.b + &self.c * &d, -&self.c),
        ];
        Ideal::from_zspan(self.disc, &vs).expect("conjugate of a nonzero ideal")
    }

    /// Largest rational integer `n` with `I ⊆ n*O_K`.
    pub fn content(&self) -> &BigInt {
        &self.c
    }

    /// `I / n` when `n` divides the content.
    pub fn div_integer(&self, n: &BigInt) -> Option<Ideal> {
        if n.is_positive() && self.c.is_multiple_of(n) {
            Some(Ideal {
                disc: self.disc,
                a: &self.a / n,
                b: &self.b / n,
                c: &self.c / n,
            })
        } else {
            None
        }
    }

    /// `I * P^{-1}` if the prime `P` divides `I`.
    pub fn div_prime(&self, p: &Ideal) -> Result<Option<Ideal>> {
        if !p.divides(self)? {
            return Ok(None);
        }
        let n = p.norm();
        let rat = p.smallest_positive_integer().clone();
        if n == &rat * &rat {
            // inert: P = (p)
            return Ok(self.div_integer(&rat));
        }
        Ok(self.mul(&p.conj())?.div_integer(&rat))
    }

    pub fn inverse(&self) -> FracIdeal {
        FracIdeal::new(self.conj(), self.norm())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// A fractional ideal `num / den` with `den` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    pub num: Ideal,
    pub den: BigInt,
}

impl FracIdeal {
    pub fn new(num: Ideal, den: BigInt) -> FracIdeal {
        let g = num.content().gcd(&den);
        let num = num.div_integer(&g).expect("g divides the content");
        FracIdeal { num, den: den / g }
    }

    pub fn mul_ideal(&self, i: &Ideal) -> Result<FracIdeal> {
        Ok(FracIdeal::new(self.num.mul(i)?, self.den.clone()))
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Trial-division factorization, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Square root of `n` modulo an odd prime `p` (Tonelli-Shanks); `n` must be a residue.
fn sqrt_mod(n: u64, p: u64) -> u64 {
    let n = n % p;
    if n == 0 {
        return 0;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    r
}

/// The Kronecker symbol `(d/p)`: `-1` inert, `0` ramified, `+1` split.
pub fn kronecker_symbol(d: i64, p: u64) -> Result<i32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if powmod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Prime ideals above the rational prime `p`, sorted by HNF `b`-entry.
pub fn primes_above(field: &QuadField, p: u64) -> Result<Vec<Ideal>> {
    let k = kronecker_symbol(field.disc, p)?;
    let pb = BigInt::from(p);
    if k == -1 {
        return Ok(vec![Ideal {
            disc: field.disc,
            a: pb.clone(),
            b: BigInt::zero(),
            c: pb,
        }]);
    }
    // roots of x^2 - d x + d2 mod p
    let roots: Vec<u64> = if p == 2 {
        let d = field.disc.rem_euclid(2) as u64;
        let d2 = field.d2.mod_floor(&BigInt::from(2)).to_u64().unwrap();
        (0..2u64).filter(|&r| (r * r + 2 * 2 - d * r + d2).is_multiple_of(2)).collect()
    } else {
        let dm = field.disc.rem_euclid(p as i64) as u64;
        let s = sqrt_mod(dm, p);
        let inv2 = p.div_ceil(2);
        let mut v = vec![mulmod((dm + s) % p, inv2, p), mulmod((dm + p - s) % p, inv2, p)];
        v.sort();
        v.dedup();
        v
    };
    let mut out: Vec<Ideal> = roots
        .into_iter()
        .map(|r| Ideal {
            disc: field.disc,
            a: pb.clone(),
            b: (BigInt::from(p) - BigInt::from(r)).mod_floor(&pb),
            c: BigInt::one(),
        })
        .collect();
    out.sort_by(|x, y| x.b.cmp(&y.b));
    debug_assert_eq!(out.len(), if k == 0 { 1 } else { 2 });
    Ok(out)
}

fn norm_u64(i: &Ideal) -> Result<u64> {
    i.norm()
        .to_u64()
        .filter(|&n| n <= MAX_FACTOR_NORM)
        .ok_or_else(|| Error::OutOfRange(format!("norm of {i} exceeds {MAX_FACTOR_NORM}")))
}

/// `v_P(I)` by repeated exact division.
pub fn valuation(i: &Ideal, p: &Ideal) -> Result<u32> {
    let mut cur = i.clone();
    let mut e = 0;
    while let Some(next) = cur.div_prime(p)? {
        cur = next;
        e += 1;
    }
    Ok(e)
}

/// Prime factorization ordered by `(p, b)`.
pub fn factor_ideal(field: &QuadField, i: &Ideal) -> Result<Vec<(Ideal, u32)>> {
    if i.disc != field.disc {
        return Err(Error::MixedField(i.disc, field.disc));
    }
    let n = norm_u64(i)?;
    let mut out = Vec::new();
    let mut rest = i.clone();
    for (p, _) in factor_u64(n) {
        for prime in primes_above(field, p)? {
            let mut e = 0;
            while let Some(next) = rest.div_prime(&prime)? {
                rest = next;
                e += 1;
            }
            if e > 0 {
                out.push((prime, e));
            }
        }
    }
    if !rest.is_unit() {
        return Err(Error::Consistency(format!("factorization of {i} left {rest}")));
    }
    Ok(out)
}

/// A generator of `I` if it is principal. Every element of `I` has norm at least
/// `N(I)`, with equality exactly for generators, so the shortest vector of the
/// reduced basis decides.
pub fn principal_generator(field: &QuadField, i: &Ideal) -> Option<QuadInt> {
    let [u, v] = i.basis();
    let (u, _) = field.reduce_basis(&u, &v);
    if field.norm(&u) == i.norm() {
        Some(field.canonical_associate(&u))
    } else {
        None
    }
}

/// All integral ideals of norm exactly `n`, sorted by HNF.
pub fn ideals_of_norm(field: &QuadField, n: u64) -> Result<Vec<Ideal>> {
    let mut acc = vec![Ideal::unit(field)];
    for (p, k) in factor_u64(n) {
        let primes = primes_above(field, p)?;
        let local: Vec<Ideal> = match primes.len() {
            2 => (0..=k)
                .map(|i| primes[0].pow(i).mul(&primes[1].pow(k - i)))
                .collect::<Result<_>>()?,
            _ if primes[0].norm() == BigInt::from(p) => vec![primes[0].pow(k)],
            _ if k % 2 == 0 => vec![primes[0].pow(k / 2)],
            _ => return Ok(Vec::new()),
        };
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for x in &acc {
            for y in &local {
                next.push(x.mul(y)?);
            }
        }
        acc = next;
    }
    acc.sort();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k11() -> QuadField {
        QuadField::new(-11).unwrap()
    }

    #[test]
    fn discriminants() {
        assert!(QuadField::new(-11).is_ok());
        assert!(QuadField::new(-4).is_ok());
        assert!(QuadField::new(-8).is_ok());
        assert_eq!(QuadField::new(-12), Err(Error::NotFundamental(-12)));
        assert_eq!(QuadField::new(-1), Err(Error::NotFundamental(-1)));
        assert_eq!(QuadField::new(5), Err(Error::NotFundamental(5)));
        assert_eq!(QuadField::new(-3).unwrap().w(), 6);
        assert_eq!(QuadField::new(-4).unwrap().w(), 4);
        assert_eq!(QuadField::new(-15).unwrap().w(), 2);
        for d in [-3, -4, -7, -8, -11] {
            let f = QuadField::new(d).unwrap();
            for u in f.roots_of_unity() {
                assert!(f.norm(u).is_one());
            }
        }
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker_symbol(-11, 2).unwrap(), -1);
        assert_eq!(kronecker_symbol(-11, 11).unwrap(), 0);
        assert_eq!(kronecker_symbol(-11, 5).unwrap(), 1);
        assert_eq!(kronecker_symbol(-7, 2).unwrap(), 1);
        assert_eq!(kronecker_symbol(-4, 2).unwrap(), 0);
        assert_eq!(kronecker_symbol(-11, 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn factor_22() {
        let f = k11();
        let i = Ideal::rational(&f, 22).unwrap();
        let fac = factor_ideal(&f, &i).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0, Ideal::rational(&f, 2).unwrap());
        assert_eq!(fac[0].1, 1);
        assert_eq!(fac[1].0, Ideal::principal(&f, &f.sqrt_disc()).unwrap());
        assert_eq!(fac[1].1, 2);
        assert!(factor_ideal(&f, &Ideal::unit(&f)).unwrap().is_empty());
    }

    #[test]
    fn factor_5_splits() {
        let f = k11();
        let fac = factor_ideal(&f, &Ideal::rational(&f, 5).unwrap()).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(p, e)| *e == 1 && p.norm() == BigInt::from(5)));
        assert_eq!(fac[0].0.conj(), fac[1].0);
    }

    #[test]
    fn ideal_basics() {
        let f = k11();
        let s = Ideal::different(&f);
        assert_eq!(s.to_string(), "[11,0,1]");
        assert_eq!(s.smallest_positive_integer(), &BigInt::from(11));
        assert_eq!(s.norm(), BigInt::from(11));
        let two = Ideal::rational(&f, 2).unwrap();
        assert!(two.coprime(&s).unwrap());
        let other = Ideal::different(&QuadField::new(-7).unwrap());
        assert_eq!(two.mul(&other), Err(Error::MixedField(-11, -7)));
    }

    #[test]
    fn principal_generators() {
        let f = k11();
        let g = principal_generator(&f, &Ideal::rational(&f, 22).unwrap()).unwrap();
        assert_eq!(g, QuadInt::new(22, 0));
        let g = principal_generator(&f, &Ideal::different(&f)).unwrap();
        assert_eq!(g, QuadInt::new(11, 2));
        let f15 = QuadField::new(-15).unwrap();
        let p2 = &primes_above(&f15, 2).unwrap()[0];
        assert_eq!(principal_generator(&f15, p2), None);
    }

    #[test]
    fn parse_formats() {
        let f = k11();
        assert_eq!(Ideal::parse(&f, "[11,0,1]").unwrap(), Ideal::different(&f));
        assert_eq!(Ideal::parse(&f, " 22 ").unwrap(), Ideal::rational(&f, 22).unwrap());
        assert!(matches!(Ideal::parse(&f, "[11,x,1]"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(Ideal::parse(&f, "[11,3,1]"), Err(Error::InvalidHnf(_))));
        assert_eq!(Ideal::parse(&f, "0"), Err(Error::ZeroIdeal));
    }

    #[test]
    fn inverse_is_fractional() {
        let f = k11();
        let i = Ideal::rational(&f, 6).unwrap();
        let inv = i.inverse();
        assert_eq!(inv.den, BigInt::from(6));
        assert!(inv.mul_ideal(&i).unwrap().is_integral());
    }

    #[test]
    fn ideals_by_norm() {
        let f = k11();
        // 3 and 5 split, 11 ramifies, 2 is inert
        assert_eq!(ideals_of_norm(&f, 15).unwrap().len(), 4);
        assert_eq!(ideals_of_norm(&f, 2).unwrap().len(), 0);
        assert_eq!(ideals_of_norm(&f, 4).unwrap().len(), 1);
        assert_eq!(ideals_of_norm(&f, 121).unwrap().len(), 1);
        for i in ideals_of_norm(&f, 45).unwrap() {
            assert_eq!(i.norm(), BigInt::from(45));
        }
    }
}
