//! The class group of `K` through reduced binary quadratic forms.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{ideals_of_norm, Ideal, QuadField};

pub const MAX_CLASS_DISC: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Reduces a positive definite form with arbitrary-size coefficients.
pub fn reduce_form(a: &BigInt, b: &BigInt, c: &BigInt) -> QForm {
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    let d = &b * &b - BigInt::from(4) * &a * &c;
    loop {
        // translate b into (-a, a]
        let two_a = BigInt::from(2) * &a;
        let mut nb = b.mod_floor(&two_a);
        if nb > a {
            nb -= &two_a;
        }
        if nb != b {
            b = nb;
            c = (&b * &b - &d) / (BigInt::from(4) * &a);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    if b.is_negative() && a == c {
        b = -b;
    }
    QForm {
        a: a.to_i64().expect("reduced coefficient fits"),
        b: b.to_i64().expect("reduced coefficient fits"),
        c: c.to_i64().expect("reduced coefficient fits"),
    }
}

/// The reduced form attached to the ideal, via its primitive part.
pub fn form_of_ideal(field: &QuadField, i: &Ideal) -> QForm {
    let (a, b, c) = i.hnf();
    let a1 = a / c;
    let b1 = b / c;
    let d = BigInt::from(field.disc());
    let bb = BigInt::from(2) * &b1 + &d;
    // N(b1 + w) / a1
    let n = &b1 * &b1 + &d * &b1 + field.norm_omega();
    let cc = n / &a1;
    reduce_form(&a1, &bb, &cc)
}

/// The primitive ideal `[A, (B - d)/2 mod A, 1]` of a form.
pub fn ideal_of_form(field: &QuadField, f: &QForm) -> Ideal {
    let a = BigInt::from(f.a);
    let b = BigInt::from((f.b - field.disc()) / 2).mod_floor(&a);
    Ideal::from_hnf(field, a, b, BigInt::from(1)).expect("form ideal is an ideal")
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: QuadField,
    forms: Vec<QForm>,
    lookup: HashMap<QForm, usize>,
}

impl ClassGroup {
    pub fn new(field: &QuadField) -> Result<ClassGroup> {
        let d = field.disc();
        if d.abs() > MAX_CLASS_DISC {
            return Err(Error::OutOfRange(format!("|d| = {} > {MAX_CLASS_DISC}", d.abs())));
        }
        let mut forms = Vec::new();
        let mut a = 1i64;
        while 3 * a * a <= -d {
            for b in (-a + 1)..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = QForm { a, b, c: num / (4 * a) };
                if f.is_reduced() {
                    forms.push(f);
                }
            }
            a += 1;
        }
        forms.sort_by_key(|f| (f.a, f.b.abs(), f.b < 0));
        let lookup = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        Ok(ClassGroup {
            field: field.clone(),
            forms,
            lookup,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QForm] {
        &self.forms
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn class_index(&self, i: &Ideal) -> usize {
        let f = form_of_ideal(&self.field, i);
        self.lookup[&f]
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        let x = ideal_of_form(&self.field, &self.forms[i]);
        let y = ideal_of_form(&self.field, &self.forms[j]);
        self.class_index(&x.mul(&y).expect("same field"))
    }

    pub fn inverse(&self, i: usize) -> usize {
        let f = self.forms[i];
        let inv = reduce_form(&BigInt::from(f.a), &BigInt::from(-f.b), &BigInt::from(f.c));
        self.lookup[&inv]
    }

    pub fn composition_table(&self) -> Vec<Vec<usize>> {
        let h = self.class_number();
        (0..h)
            .map(|i| (0..h).map(|j| self.compose(i, j)).collect())
            .collect()
    }

    /// For every class, the smallest-norm integral ideal in it coprime to `m`
    /// (ties broken by HNF order).
    pub fn representatives_coprime_to(&self, m: &Ideal) -> Result<Vec<Ideal>> {
        let h = self.class_number();
        let mut reps: Vec<Option<Ideal>> = vec![None; h];
        let mut found = 0;
        let mut n = 1u64;
        while found < h {
            for i in ideals_of_norm(&self.field, n)? {
                if !i.coprime(m)? {
                    continue;
                }
                let k = self.class_index(&i);
                if reps[k].is_none() {
                    reps[k] = Some(i);
                    found += 1;
                }
            }
            n += 1;
        }
        Ok(reps.into_iter().map(|r| r.expect("all classes found")).collect())
    }
}

/// Exact count of reduced forms, independent of the table above.
pub fn class_number_bruteforce(d: i64) -> usize {
    let mut h = 0;
    let bound = (-d) as f64;
    for a in 1..=((bound / 3.0).sqrt() as i64 + 1) {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QForm { a, b, c };
            if !f.is_reduced() || f.disc() != d {
                continue;
            }
            if a.gcd(&b.abs()).gcd(&c) == 1 {
                h += 1;
            }
        }
    }
    h
}
