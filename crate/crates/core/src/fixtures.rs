//! Reference data: the classification of primes with `|G_p| <= 2` and the worked
//! examples over `Q(sqrt -11)`.

use serde::Serialize;

use crate::abgroup::Subgroup;
use crate::conjecture::{hypothesis, reduce_modulus, Reduction, SubfieldSpec};
use crate::error::Result;
use crate::qfield::{factor_ideal, is_fundamental, primes_above, Ideal, QuadField};
use crate::rayclass::{ModulusTower, RayClassGroup, UnitQuotient};

/// Largest exponent `e` with `|G_p| <= 2` for `p` over the rational prime `q`,
/// according to the classification; `None` if no exponent qualifies.
pub fn listed_max_exponent(field: &QuadField, q: u64, p: &Ideal) -> Option<u32> {
    let inert = p.norm() != q.into();
    match field.disc() {
        -4 => match q {
            2 => Some(4),
            3 | 5 => Some(1),
            _ => None,
        },
        -3 => match q {
            2 | 3 => Some(2),
            7 | 13 => Some(1),
            _ => None,
        },
        _ if inert => None,
        _ => match q {
            2 => Some(3),
            3 | 5 => Some(1),
            _ => None,
        },
    }
}

pub fn listed(field: &QuadField, q: u64, p: &Ideal, e: u32) -> bool {
    listed_max_exponent(field, q, p).is_some_and(|m| e >= 1 && e <= m)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanCase {
    pub disc: i64,
    pub rational_prime: u64,
    pub prime: String,
    pub exponent: u32,
    pub norm: u64,
    pub gp_order: u64,
    pub listed: bool,
}

/// `|G_p|` for every `p^e` with `N(p^e) <= max_norm` over every imaginary
/// quadratic field with `|d| <= max_abs_disc`.
pub fn gp_scan(max_abs_disc: i64, max_norm: u64) -> Result<Vec<ScanCase>> {
    let mut out = Vec::new();
    for d in (-max_abs_disc..=-3).rev() {
        if !is_fundamental(d) {
            continue;
        }
        let field = QuadField::new(d)?;
        for q in 2..=max_norm {
            if !crate::qfield::is_prime(q) {
                continue;
            }
            for p in primes_above(&field, q)? {
                let np: u64 = p.norm().try_into().expect("small");
                let mut e = 1;
                let mut norm = np;
                while norm <= max_norm {
                    let gp = UnitQuotient::new(&field, &p, e)?;
                    out.push(ScanCase {
                        disc: d,
                        rational_prime: q,
                        prime: p.to_string(),
                        exponent: e,
                        norm,
                        gp_order: gp.order(),
                        listed: listed(&field, q, &p, e),
                    });
                    e += 1;
                    norm *= np;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRow {
    /// `[K_f : L]`.
    pub index: u64,
    pub h_raw: usize,
    pub h_reduced: usize,
    pub reduced_modulus: String,
    pub proper: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusSummary {
    pub modulus: String,
    pub factorization: Vec<(String, u32)>,
    pub is_prime_ideal: bool,
    pub ray_class_order: u64,
    pub gp_orders: Vec<u64>,
    pub subgroups: Vec<SubgroupRow>,
}

pub fn summarize(field: &QuadField, modulus: &Ideal) -> Result<ModulusSummary> {
    let tower = ModulusTower::new(RayClassGroup::new(field, modulus)?)?;
    let fac = factor_ideal(field, modulus)?;
    let top = tower.top();
    let mut gp_orders = Vec::new();
    for (p, e) in &fac {
        gp_orders.push(UnitQuotient::new(field, p, *e)?.order());
    }
    let mut subgroups = Vec::new();
    for s in top.group().subgroup_lattice(crate::abgroup::DEFAULT_LATTICE_CAP)? {
        subgroups.push(row(&tower, &s)?);
    }
    subgroups.sort_by_key(|r| r.index);
    Ok(ModulusSummary {
        modulus: modulus.to_string(),
        is_prime_ideal: fac.len() == 1 && fac[0].1 == 1,
        factorization: fac.iter().map(|(p, e)| (p.to_string(), *e)).collect(),
        ray_class_order: top.order(),
        gp_orders,
        subgroups,
    })
}

fn row(tower: &ModulusTower, s: &Subgroup) -> Result<SubgroupRow> {
    let spec = SubfieldSpec::new(tower, s.clone())?;
    let raw = hypothesis(&spec)?;
    let (h_reduced, reduced_modulus) = match reduce_modulus(tower, s, &tower.top().group().identity())? {
        Reduction::Unit { .. } => (0, Ideal::unit(tower.top().field()).to_string()),
        Reduction::Proper { tower: t, s_l, .. } => {
            let h = hypothesis(&SubfieldSpec::new(&t, s_l)?)?;
            (h.h.len(), t.top().modulus().to_string())
        }
    };
    Ok(SubgroupRow {
        index: s.order(),
        h_raw: raw.h.len(),
        h_reduced,
        reduced_modulus,
        proper: spec.degree() > 1,
    })
}

/// Reference values for `f = 22` over `Q(sqrt -11)`.
pub const EXAMPLE_22_GP: [u64; 2] = [3, 55];
pub const EXAMPLE_22_DEGREE: u64 = 165;
/// The reference list of `[K_f : L]`; `2` does not divide 165 and `165` itself
/// is missing.
pub const EXAMPLE_22_REFERENCE_INDICES: [u64; 8] = [1, 2, 3, 5, 11, 15, 33, 55];

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub disc: i64,
    pub five: ModulusSummary,
    pub five_discrepancy: Option<String>,
    pub twenty_two: ModulusSummary,
    pub reference_indices: Vec<u64>,
    pub index_discrepancy: Option<String>,
    pub gp_match: bool,
    pub degree_match: bool,
    pub max_h_proper: usize,
}

pub fn example_sqrt_minus_11() -> Result<ExampleReport> {
    let field = QuadField::new(-11)?;
    let five = summarize(&field, &Ideal::rational(&field, 5)?)?;
    let five_discrepancy = (!five.is_prime_ideal).then(|| {
        format!(
            "5 splits in Q(sqrt -11): 5O_K = {} is not a prime ideal",
            five.factorization.iter().map(|(p, _)| p.as_str()).collect::<Vec<_>>().join(" * ")
        )
    });
    let tt = summarize(&field, &Ideal::rational(&field, 22)?)?;
    let computed: Vec<u64> = tt.subgroups.iter().map(|r| r.index).collect();
    let index_discrepancy = (computed != EXAMPLE_22_REFERENCE_INDICES).then(|| {
        format!("reference [K_f:L] list {:?}, computed {:?}", EXAMPLE_22_REFERENCE_INDICES, computed)
    });
    Ok(ExampleReport {
        disc: -11,
        gp_match: tt.gp_orders == EXAMPLE_22_GP,
        degree_match: tt.ray_class_order == EXAMPLE_22_DEGREE,
        max_h_proper: tt.subgroups.iter().filter(|r| r.proper).map(|r| r.h_raw).max().unwrap_or(0),
        five,
        five_discrepancy,
        twenty_two: tt,
        reference_indices: EXAMPLE_22_REFERENCE_INDICES.to_vec(),
        index_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_rows() {
        let f = QuadField::new(-4).unwrap();
        let p = &primes_above(&f, 2).unwrap()[0];
        assert!(listed(&f, 2, p, 4));
        assert!(!listed(&f, 2, p, 5));
        let f = QuadField::new(-7).unwrap();
        let p = &primes_above(&f, 3).unwrap()[0];
        assert!(!listed(&f, 3, p, 1));
    }

    #[test]
    fn example_numbers() {
        let r = example_sqrt_minus_11().unwrap();
        assert!(r.gp_match && r.degree_match);
        assert!(r.five_discrepancy.is_some());
        assert!(r.index_discrepancy.is_some());
        assert_eq!(r.twenty_two.subgroups.len(), 8);
        assert!(r.max_h_proper <= 1);
    }
}
