//! Generation of subfields of a ray class field by norms of Siegel-Ramachandra
//! invariants: hypothesis checks and numerical verification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::abgroup::{Elem, Subgroup, DEFAULT_LATTICE_CAP};
use crate::bigcomplex::{pi, BigComplex};
use crate::error::{Error, Result};
use crate::qfield::{factor_u64, Ideal};
use crate::rayclass::{Level, ModulusTower, RayClassGroup, UnitQuotient};
use crate::report::{rational_string, JsonComplex};
use crate::siegel::{poly_from_roots, round_to_ok, InvariantTable};

/// A subfield `K <= L <= K_f`, given by `S_L = Cl(K_f/L)`.
pub struct SubfieldSpec<'a> {
    tower: &'a ModulusTower,
    s_l: Subgroup,
    hk: Subgroup,
}

impl<'a> SubfieldSpec<'a> {
    pub fn new(tower: &'a ModulusTower, s_l: Subgroup) -> Result<SubfieldSpec<'a>> {
        if s_l.parent() != tower.top().group() {
            return Err(Error::NotSubgroup("S_L is not a subgroup of Cl(f)".into()));
        }
        let unit_exps = vec![0; tower.top().factorization().len()];
        let hk = tower.level(&unit_exps).expect("unit level").kernel.clone();
        Ok(SubfieldSpec { tower, s_l, hk })
    }

    pub fn tower(&self) -> &'a ModulusTower {
        self.tower
    }

    pub fn rcg(&self) -> &'a RayClassGroup {
        self.tower.top()
    }

    pub fn s_l(&self) -> &Subgroup {
        &self.s_l
    }

    /// `[L:K]`.
    pub fn degree(&self) -> u64 {
        self.rcg().order() / self.s_l.order()
    }

    /// `Cl(K_f/H_K)`.
    pub fn hk(&self) -> &Subgroup {
        &self.hk
    }

    /// `[K_f : L H_K] = |S_L ∩ Cl(K_f/H_K)|`.
    pub fn lhk_index(&self) -> Result<u64> {
        Ok(self.s_l.intersect(&self.hk)?.order())
    }

    pub fn in_hilbert_class_field(&self) -> bool {
        self.hk.is_subgroup_of(&self.s_l)
    }

    /// The level `f p_i^-e_i`.
    pub fn lowered(&self, i: usize) -> &'a Level {
        let mut exps: Vec<u32> = self.rcg().factorization().iter().map(|(_, e)| *e).collect();
        exps[i] = 0;
        self.tower.level(&exps).expect("every divisor level is built")
    }

    /// `L ⊂ K_{f p_i^-e_i}`.
    pub fn in_lowered(&self, i: usize) -> bool {
        self.lowered(i).kernel.is_subgroup_of(&self.s_l)
    }

    /// `[L : L ∩ K_{f p_i^-e_i}]`.
    pub fn local_degree(&self, i: usize) -> Result<u64> {
        Ok(self.s_l.join(&self.lowered(i).kernel)?.order() / self.s_l.order())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeHypothesis {
    pub prime: String,
    pub exponent: u32,
    pub gp_order: u64,
    /// A rational prime with `ord_nu |G_p| > ord_nu [K_f : L H_K] + i_p`.
    pub nu: Option<u64>,
    pub i_p: u32,
    pub in_h: bool,
    /// `L ⊂ K_{f p^-e}`: the modulus should be reduced.
    pub reduce: bool,
    /// `[L : L ∩ K_{f p^-e}]`.
    pub local_degree: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub degree: u64,
    pub lhk_index: u64,
    pub in_hilbert_class_field: bool,
    pub primes: Vec<PrimeHypothesis>,
    pub h: Vec<String>,
    pub assumption_sum: String,
    pub assumption_holds: bool,
    /// Every hypothesis of the generation theorem holds.
    pub satisfied: bool,
    pub advisories: Vec<String>,
}

fn ord(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut n = n;
    while n.is_multiple_of(p) && n > 0 {
        n /= p;
        k += 1;
    }
    k
}

/// The search for `nu` at one prime.
pub fn nu_search(gp_order: u64, lhk_index: u64) -> Option<(u64, u32)> {
    factor_u64(gp_order).into_iter().find_map(|(nu, e)| {
        let i_p = u32::from(nu == 2);
        (e > ord(lhk_index, nu) + i_p).then_some((nu, i_p))
    })
}

pub fn prime_hypotheses(spec: &SubfieldSpec) -> Result<Vec<PrimeHypothesis>> {
    let field = spec.rcg().field();
    let lhk = spec.lhk_index()?;
    let mut out = Vec::new();
    for (i, (p, e)) in spec.rcg().factorization().iter().enumerate() {
        let gp = UnitQuotient::new(field, p, *e)?;
        let found = nu_search(gp.order(), lhk);
        out.push(PrimeHypothesis {
            prime: p.to_string(),
            exponent: *e,
            gp_order: gp.order(),
            nu: found.map(|x| x.0),
            i_p: found.map_or(0, |x| x.1),
            in_h: found.is_none(),
            reduce: spec.in_lowered(i),
            local_degree: spec.local_degree(i)?,
        });
    }
    Ok(out)
}

/// Indices (into the factorization of `f`) of the primes in `h_{L,f}`.
pub fn h_set(spec: &SubfieldSpec) -> Result<Vec<usize>> {
    Ok(prime_hypotheses(spec)?
        .iter()
        .enumerate()
        .filter(|(_, h)| h.in_h)
        .map(|(i, _)| i)
        .collect())
}

/// `sum_{p in h} 1/[L : L ∩ K_{f p^-e}]` and whether it is at most `1/2`.
pub fn assumption_check(spec: &SubfieldSpec) -> Result<(BigRational, bool)> {
    let mut sum = BigRational::zero();
    for i in h_set(spec)? {
        sum += BigRational::new(BigInt::one(), BigInt::from(spec.local_degree(i)?));
    }
    let holds = sum <= BigRational::new(1.into(), 2.into());
    Ok((sum, holds))
}

pub fn hypothesis(spec: &SubfieldSpec) -> Result<Hypothesis> {
    let primes = prime_hypotheses(spec)?;
    let (sum, holds) = assumption_check(spec)?;
    let in_hk = spec.in_hilbert_class_field();
    let mut advisories = Vec::new();
    if in_hk {
        advisories.push("L is contained in the Hilbert class field".to_string());
    }
    for p in primes.iter().filter(|p| p.reduce) {
        advisories.push(format!("L lies in the ray class field of f/{}^{}: reduce the modulus", p.prime, p.exponent));
    }
    Ok(Hypothesis {
        degree: spec.degree(),
        lhk_index: spec.lhk_index()?,
        in_hilbert_class_field: in_hk,
        h: primes.iter().filter(|p| p.in_h).map(|p| p.prime.clone()).collect(),
        satisfied: !in_hk && holds && primes.iter().all(|p| !p.reduce),
        primes,
        assumption_sum: rational_string(&sum),
        assumption_holds: holds,
        advisories,
    })
}

/// Result of pushing `(f, S_L, C)` down while `L ⊂ K_{f p^-e}`.
pub enum Reduction {
    /// The modulus reached `O_K`, so `L ⊂ H_K`.
    Unit { log: Vec<String> },
    Proper {
        tower: ModulusTower,
        s_l: Subgroup,
        class: Elem,
        log: Vec<String>,
    },
}

pub fn reduce_modulus(tower: &ModulusTower, s_l: &Subgroup, class: &[u64]) -> Result<Reduction> {
    let mut log = Vec::new();
    let mut cur: Option<(ModulusTower, Subgroup, Elem)> = None;
    loop {
        let (t, s, c) = match &cur {
            Some((t, s, c)) => (t, s.clone(), c.clone()),
            None => (tower, s_l.clone(), class.to_vec()),
        };
        let spec = SubfieldSpec::new(t, s.clone())?;
        let Some(i) = (0..t.top().factorization().len()).find(|&i| spec.in_lowered(i)) else {
            return Ok(match cur {
                Some((tower, s_l, class)) => Reduction::Proper { tower, s_l, class, log },
                None => Reduction::Proper {
                    tower: ModulusTower::new(tower.top().clone())?,
                    s_l: s_l.clone(),
                    class: class.to_vec(),
                    log,
                },
            });
        };
        let level = spec.lowered(i);
        let (p, e) = &t.top().factorization()[i];
        log.push(format!("replacing {} by {} (removing {p}^{e})", t.top().modulus(), level.modulus));
        if level.modulus.is_unit() {
            return Ok(Reduction::Unit { log });
        }
        let s2 = level.map.image_of(&s)?;
        let c2 = level.map.apply(&c);
        let t2 = ModulusTower::new(level.group.clone())?;
        cur = Some((t2, s2, c2));
    }
}

/// `N_{K_f/L}(g_f(C)^n)` through its logarithm.
#[derive(Clone, Debug)]
pub struct NormValue {
    pub log: BigComplex,
    pub value: BigComplex,
    /// Absolute bound on the error of `log`.
    pub err_log2: i32,
}

fn norm_err_log2(s_order: u64, n: i64, prec: u32) -> i32 {
    ((s_order as f64) * (n.unsigned_abs() as f64)).log2().ceil() as i32 - prec as i32 + 12
}

fn norm_log(rcg: &RayClassGroup, s_l: &Subgroup, class: &[u64], n: i64, vals: &[std::sync::Arc<crate::siegel::InvariantValue>]) -> BigComplex {
    let g = rcg.group();
    let w = vals[0].log.prec();
    let mut acc = BigComplex::zero(w);
    for e in s_l.elements() {
        let idx = g.index_of(&g.add(class, &e)) as usize;
        acc = acc.add(&vals[idx].log);
    }
    acc.scale(&Float::with_val(w, n))
}

pub fn norm_to_l(spec: &SubfieldSpec, class: &[u64], n: i64, prec: u32) -> Result<NormValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be nonzero".into()));
    }
    let rcg = spec.rcg();
    let vals = InvariantTable::global().all(rcg, prec)?;
    let log = norm_log(rcg, spec.s_l(), class, n, &vals);
    Ok(NormValue {
        value: log.exp(),
        log,
        err_log2: norm_err_log2(spec.s_l().order(), n, prec),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyReport {
    /// `O_K` roundings, constant term first.
    pub coefficients: Vec<String>,
    pub max_residual_log2: f64,
    /// Error bound on the unrounded coefficients.
    pub err_bound_log2: f64,
    pub rounded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub n: i64,
    pub class: Vec<u64>,
    pub mode: &'static str,
    pub norm_value: JsonComplex,
    pub conjugates: Vec<JsonComplex>,
    pub distinct: usize,
    pub expected: u64,
    /// Smallest log-space distance between distinct conjugates.
    pub min_separation_log2: Option<f64>,
    /// Largest log-space distance inside a merged cluster.
    pub max_merged_log2: Option<f64>,
    pub err_bound_log2: i32,
    pub tolerance_log2: i32,
    pub verdict: Verdict,
    pub suggested_prec: Option<u32>,
    pub polynomial: Option<PolyReport>,
    pub note: Option<String>,
}

/// `log2` of the distance between two logarithms of nonzero numbers, modulo `2*pi*i`.
fn log_distance_log2(a: &BigComplex, b: &BigComplex) -> f64 {
    let d = a.sub(b);
    let p = d.prec();
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let k = Float::with_val(p, &d.im / &two_pi).round();
    let im = Float::with_val(p, &d.im - Float::with_val(p, &k * &two_pi));
    let z = BigComplex::from_floats(d.re, im);
    z.log2_abs()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Conjugates of `N_{K_f/L}(g_f(C)^n)` over `K`, their distinctness, and their
/// minimal polynomial.
pub fn verify_generation(spec: &SubfieldSpec, class: &[u64], n: i64, prec: u32, unconditional: bool) -> Result<Verification> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be nonzero".into()));
    }
    let rcg = spec.rcg();
    let g = rcg.group();
    let class = g.reduce(&class.iter().map(|&x| x as i64).collect::<Vec<_>>());
    let vals = InvariantTable::global().all(rcg, prec)?;
    let reps = spec.s_l().coset_reps();
    let logs: Vec<BigComplex> = reps
        .par_iter()
        .map(|e1| norm_log(rcg, spec.s_l(), &g.add(&class, e1), n, &vals))
        .collect();
    let err = norm_err_log2(spec.s_l().order(), n, prec);
    let tol = err + 2;
    let m = logs.len();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut dist = vec![vec![f64::NEG_INFINITY; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = log_distance_log2(&logs[i], &logs[j]);
            dist[i][j] = d;
            if d <= tol as f64 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let roots: Vec<usize> = (0..m).map(|i| find(&mut parent, i)).collect();
    let mut distinct_roots = roots.clone();
    distinct_roots.sort_unstable();
    distinct_roots.dedup();
    let (mut min_sep, mut max_merged): (Option<f64>, Option<f64>) = (None, None);
    for i in 0..m {
        for j in i + 1..m {
            let d = dist[i][j];
            if roots[i] == roots[j] {
                max_merged = Some(max_merged.map_or(d, |x: f64| x.max(d)));
            } else {
                min_sep = Some(min_sep.map_or(d, |x: f64| x.min(d)));
            }
        }
    }
    let expected = spec.degree();
    let distinct = distinct_roots.len();
    let (verdict, suggested, note) = if distinct as u64 == expected && min_sep.is_none_or(|s| s > (err + 1) as f64) {
        let note = (expected == 1).then(|| "L = K".to_string());
        (Verdict::Pass, None, note)
    } else if max_merged.is_some_and(|x| x < (err - 10) as f64) && min_sep.is_none_or(|s| s > (err + 10) as f64) {
        (Verdict::Fail, None, Some(format!("conjecture violated at precision {prec}")))
    } else {
        (Verdict::Inconclusive, Some(prec * 2), Some("separation below tolerance".to_string()))
    };
    let values: Vec<BigComplex> = logs.iter().map(|l| l.exp()).collect();
    let polynomial = Some(polynomial_report(rcg, &values, err));
    Ok(Verification {
        n,
        class: class.clone(),
        mode: if unconditional { "unconditional test of the conjecture" } else { "theorem" },
        norm_value: JsonComplex::new(&values[0], err),
        conjugates: values.iter().map(|v| JsonComplex::new(v, err)).collect(),
        distinct,
        expected,
        min_separation_log2: min_sep,
        max_merged_log2: max_merged,
        err_bound_log2: err,
        tolerance_log2: tol,
        verdict,
        suggested_prec: suggested,
        polynomial,
        note,
    })
}

/// Rounds `prod (x - v)` to `O_K[x]`. Each value carries relative error
/// `2^err` from the logarithm, so coefficient `k` is off by at most
/// `(1 + 2^err)^deg - 1` times the same coefficient built from `|v|`.
pub fn polynomial_report(rcg: &RayClassGroup, values: &[BigComplex], err_log2: i32) -> PolyReport {
    let field = rcg.field();
    let prec = values.iter().map(|v| v.prec()).max().unwrap_or(64);
    let coeffs = poly_from_roots(values, prec);
    let abs_roots: Vec<BigComplex> = values.iter().map(|v| BigComplex::from_real(v.abs()).neg()).collect();
    let majorant = poly_from_roots(&abs_roots, prec);
    let deg = values.len() as f64;
    let rel = (deg * 2f64.powi(err_log2 + 1)).log2();
    let mut max_res = f64::NEG_INFINITY;
    let mut max_bound = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for (c, mj) in coeffs.iter().zip(&majorant) {
        let (x, dist) = round_to_ok(field, c);
        let r = if dist.is_zero() { -(prec as f64) } else { dist.log2().to_f64() };
        max_res = max_res.max(r);
        max_bound = max_bound.max(mj.log2_abs() + rel);
        out.push(x.to_string());
    }
    PolyReport {
        coefficients: out,
        max_residual_log2: max_res,
        err_bound_log2: max_bound,
        rounded: max_res < -16.0 && max_bound < -16.0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubfieldReport {
    pub subgroup_gens: Vec<Vec<u64>>,
    pub subgroup_order: u64,
    pub degree: u64,
    pub hypothesis_raw: Hypothesis,
    pub reduction_log: Vec<String>,
    pub modulus: String,
    pub hypothesis: Option<Hypothesis>,
    pub verification: Option<Verification>,
    pub skipped: Option<String>,
}

/// Hypotheses, reduction and verification for one subfield.
pub fn check_subfield(tower: &ModulusTower, s_l: &Subgroup, class: &[u64], n: i64, prec: u32) -> Result<SubfieldReport> {
    let spec = SubfieldSpec::new(tower, s_l.clone())?;
    let raw = hypothesis(&spec)?;
    let mut rep = SubfieldReport {
        subgroup_gens: s_l.small_generators(),
        subgroup_order: s_l.order(),
        degree: spec.degree(),
        hypothesis_raw: raw,
        reduction_log: Vec::new(),
        modulus: tower.top().modulus().to_string(),
        hypothesis: None,
        verification: None,
        skipped: None,
    };
    match reduce_modulus(tower, s_l, class)? {
        Reduction::Unit { log } => {
            rep.reduction_log = log;
            rep.modulus = Ideal::unit(tower.top().field()).to_string();
            if spec.degree() == 1 {
                let v = verify_generation(&spec, class, n, prec, false)?;
                rep.verification = Some(v);
            } else {
                // L ⊂ H_K: examine the unreduced modulus unconditionally
                let v = verify_generation(&spec, class, n, prec, true)?;
                rep.verification = Some(v);
                rep.skipped = Some("L lies in the Hilbert class field".into());
            }
        }
        Reduction::Proper { tower: t2, s_l: s2, class: c2, log } => {
            rep.reduction_log = log;
            rep.modulus = t2.top().modulus().to_string();
            let spec2 = SubfieldSpec::new(&t2, s2)?;
            let h = hypothesis(&spec2)?;
            let v = verify_generation(&spec2, &c2, n, prec, !h.satisfied)?;
            rep.hypothesis = Some(h);
            rep.verification = Some(v);
        }
    }
    Ok(rep)
}

/// `check_subfield` over the whole subgroup lattice.
pub fn sweep(tower: &ModulusTower, class: &[u64], n: i64, prec: u32) -> Result<Vec<SubfieldReport>> {
    sweep_with_cap(tower, class, n, prec, DEFAULT_LATTICE_CAP)
}

pub fn sweep_with_cap(tower: &ModulusTower, class: &[u64], n: i64, prec: u32, cap: u64) -> Result<Vec<SubfieldReport>> {
    let subs = tower.top().group().subgroup_lattice(cap)?;
    subs.iter().map(|s| check_subfield(tower, s, class, n, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QuadField;

    fn tower(d: i64, m: &str) -> ModulusTower {
        let f = QuadField::new(d).unwrap();
        let top = RayClassGroup::new(&f, &Ideal::parse(&f, m).unwrap()).unwrap();
        ModulusTower::new(top).unwrap()
    }

    #[test]
    fn nu_search_rules() {
        assert_eq!(nu_search(3, 1), Some((3, 0)));
        assert_eq!(nu_search(2, 1), None);
        assert_eq!(nu_search(4, 1), Some((2, 1)));
        assert_eq!(nu_search(1, 1), None);
        assert_eq!(nu_search(55, 5), Some((11, 0)));
    }

    #[test]
    fn ray_class_field_of_22() {
        let t = tower(-11, "22");
        let spec = SubfieldSpec::new(&t, Subgroup::trivial(t.top().group())).unwrap();
        let h = hypothesis(&spec).unwrap();
        assert_eq!(h.degree, 165);
        assert_eq!(h.primes.iter().map(|p| p.gp_order).collect::<Vec<_>>(), vec![3, 55]);
        assert!(h.h.is_empty());
        assert!(h.satisfied);
    }

    #[test]
    fn zero_exponent_rejected() {
        let t = tower(-11, "[11,0,1]");
        let spec = SubfieldSpec::new(&t, Subgroup::trivial(t.top().group())).unwrap();
        assert!(norm_to_l(&spec, &[0], 0, 64).is_err());
    }
}
