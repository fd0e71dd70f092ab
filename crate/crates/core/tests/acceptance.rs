//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rcf_core::abgroup::{FinAbGroup, Subgroup, DEFAULT_LATTICE_CAP};
use rcf_core::bigcomplex::{pow2, BigComplex};
use rcf_core::chars::{
    admissible_characters_bruteforce, coset_order, count_g1_g2, extend_character, find_admissible_character,
    Character,
};
use rcf_core::conjecture::{h_set, hypothesis, reduce_modulus, verify_generation, Reduction, SubfieldSpec, Verdict};
use rcf_core::fixtures::{example_sqrt_minus_11, gp_scan};
use rcf_core::kronecker::{find_gammas, kronecker_rhs, l_partial_sum, level_lowering, LimitFormulaContext, Smoothing};
use rcf_core::qfield::{ideals_of_norm, Ideal, QuadField};
use rcf_core::rayclass::{ModulusTower, RayClassGroup};
use rcf_core::siegel::{round_to_ok, siegel_g};
use rug::Float;

struct Outcome {
    pass: bool,
    detail: String,
}

fn tower(d: i64, m: &str) -> ModulusTower {
    let f = QuadField::new(d).unwrap();
    ModulusTower::new(RayClassGroup::new(&f, &Ideal::parse(&f, m).unwrap()).unwrap()).unwrap()
}

fn nontrivial(t: &ModulusTower) -> Vec<Character> {
    Character::all(t.top().group()).filter(|c| !c.is_trivial()).collect()
}

fn within(t: Duration, limit: u64) -> bool {
    t.as_secs() < limit
}

fn c1() -> Outcome {
    let start = Instant::now();
    let r = example_sqrt_minus_11().unwrap();
    let tt = &r.twenty_two;
    let structure = tt.gp_orders == [3, 55] && tt.ray_class_order == 165;
    let eight = tt.subgroups.len() == 8;
    // L = K is outside the example; its reduced modulus is O_K
    let proper_ok = tt.subgroups.iter().filter(|s| s.proper).all(|s| s.h_raw <= 1);
    let all_reduced_ok = tt.subgroups.iter().all(|s| s.h_reduced <= 1);
    let raw: Vec<(u64, usize)> = tt.subgroups.iter().map(|s| (s.index, s.h_raw)).collect();
    let red: Vec<usize> = tt.subgroups.iter().map(|s| s.h_reduced).collect();
    let t = start.elapsed();
    Outcome {
        pass: structure && eight && proper_ok && all_reduced_ok && within(t, 10),
        detail: format!(
            "|G_p| = {:?}, |Cl(f)| = {}, ([K_f:L], |h| raw) = {raw:?}, |h| after modulus reduction = {red:?}, {:.2}s",
            tt.gp_orders,
            tt.ray_class_order,
            t.as_secs_f64()
        ),
    }
}

fn c2() -> Outcome {
    let start = Instant::now();
    let cases = gp_scan(40, 200).unwrap();
    let listed = cases.iter().filter(|c| c.listed).count();
    let bad_listed: Vec<_> = cases.iter().filter(|c| c.listed && c.gp_order > 2).collect();
    let unlisted: Vec<_> = cases.iter().filter(|c| !c.listed && c.gp_order <= 2).collect();
    let t = start.elapsed();
    Outcome {
        pass: bad_listed.is_empty() && unlisted.is_empty() && listed > 0 && within(t, 30),
        detail: format!(
            "{} prime powers scanned, {listed} listed, {} listed with |G_p| > 2, {} unlisted with |G_p| <= 2, {:.2}s",
            cases.len(),
            bad_listed.len(),
            unlisted.len(),
            t.as_secs_f64()
        ),
    }
}

fn c3_moduli() -> Vec<ModulusTower> {
    let mut out = Vec::new();
    for d in [-11, -7] {
        let f = QuadField::new(d).unwrap();
        for n in 2..=30 {
            for m in ideals_of_norm(&f, n).unwrap() {
                let t = ModulusTower::new(RayClassGroup::new(&f, &m).unwrap()).unwrap();
                if t.top().order() > 1 {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn c3() -> (Outcome, Outcome) {
    let start = Instant::now();
    let towers = c3_moduli();
    let (mut total, mut literal_ok, mut norm_ok, mut explained) = (0, 0, 0, 0);
    let mut worst_norm = f64::NEG_INFINITY;
    for t in &towers {
        for chi in nontrivial(t) {
            let ll = level_lowering(t, &chi, 192).unwrap();
            total += 1;
            if ll.rel_err_log2 < -100.0 {
                literal_ok += 1;
            } else if ll.level_ratio != BigRational::one() && !ll.degenerate {
                explained += 1;
            }
            worst_norm = worst_norm.max(ll.rel_err_normalized_log2);
            if ll.rel_err_normalized_log2 < -100.0 {
                norm_ok += 1;
            }
        }
    }
    let t = start.elapsed();
    let lit = Outcome {
        pass: literal_ok == total && within(t, 300),
        detail: format!(
            "{literal_ok}/{total} characters over {} moduli satisfy S_f = Euler * S_(f_chi); {explained} of the others are off by exactly N(f)w(f)/(N(f_chi)w(f_chi)) != 1",
            towers.len()
        ),
    };
    let norm = Outcome {
        pass: norm_ok == total && within(t, 300),
        detail: format!(
            "{norm_ok}/{total} characters satisfy S_f = N(f)w(f)/(N(f_chi)w(f_chi)) * Euler * S_(f_chi), worst log2 rel err {worst_norm:.1}, {:.1}s",
            t.as_secs_f64()
        ),
    };
    (lit, norm)
}

fn c4() -> Outcome {
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    'outer: for (d, m) in [(-11, "22"), (-7, "[14,0,2]"), (-4, "15")] {
        let t = tower(d, m);
        for chi in nontrivial(&t) {
            let ctx = LimitFormulaContext::new(&t, &chi, None).unwrap();
            if ctx.degenerate() {
                continue;
            }
            let gs = find_gammas(t.top().field(), &ctx.conductor.modulus, 6).unwrap();
            let lvl = ctx.level_group();
            let c0 = lvl.class_of_ideal(&gs[0].ideal).unwrap();
            // prefer a second gamma whose ideal lies in another ray class
            let other = gs[1..]
                .iter()
                .find(|g| lvl.class_of_ideal(&g.ideal).unwrap() != c0)
                .unwrap_or(&gs[1])
                .clone();
            let a = kronecker_rhs(&ctx, 192).unwrap().predicted.unwrap();
            let ctx2 = LimitFormulaContext::new(&t, &chi, Some(other)).unwrap();
            let b = kronecker_rhs(&ctx2, 192).unwrap().predicted.unwrap();
            worst = worst.max(a.sub(&b).log2_abs() - a.log2_abs());
            checked += 1;
            if checked == 10 {
                break 'outer;
            }
        }
    }
    Outcome {
        pass: checked == 10 && worst < -100.0,
        detail: format!("{checked} characters, worst log2 relative difference {worst:.1}"),
    }
}

fn c5() -> Outcome {
    let start = Instant::now();
    let t = tower(-11, "[11,0,1]");
    let chi = Character::new(t.top().group(), vec![1]).unwrap();
    let ctx = LimitFormulaContext::new(&t, &chi, None).unwrap();
    let pred = kronecker_rhs(&ctx, 128).unwrap().predicted.unwrap().to_f64();
    let l = l_partial_sum(t.top(), &chi, 1_000_000, Smoothing::Cesaro).unwrap();
    let (dr, di) = (pred.0 - l.value.re, pred.1 - l.value.im);
    let rel = (dr * dr + di * di).sqrt() / (pred.0 * pred.0 + pred.1 * pred.1).sqrt();
    let t = start.elapsed();
    Outcome {
        pass: chi.order() == 5 && rel < 1e-2 && within(t, 120),
        detail: format!(
            "predicted {:.8}{:+.8}i, smoothed sum {:.8}{:+.8}i, relative gap {rel:.2e}, estimate {:.1e}, {:.1}s",
            pred.0,
            pred.1,
            l.value.re,
            l.value.im,
            l.err_estimate,
            t.as_secs_f64()
        ),
    }
}

fn full_norm_is_unit(d: i64, m: &str) -> (bool, String) {
    let t = tower(d, m);
    let g = t.top().group().clone();
    let spec = SubfieldSpec::new(&t, Subgroup::full(&g).unwrap()).unwrap();
    let v = rcf_core::conjecture::norm_to_l(&spec, &g.identity(), 1, 256).unwrap();
    let (x, dist) = round_to_ok(t.top().field(), &v.value);
    let n = t.top().field().norm(&x);
    (dist < 1e-30 && (n == BigInt::one()), format!("{x} (norm {n})"))
}

fn c6() -> Outcome {
    let t = tower(-11, "[11,0,1]");
    let spec = SubfieldSpec::new(&t, Subgroup::trivial(t.top().group())).unwrap();
    let v = verify_generation(&spec, &[0], 1, 256, false).unwrap();
    let p = v.polynomial.unwrap();
    let (u7, s7) = full_norm_is_unit(-7, "2");
    let (u4, s4) = full_norm_is_unit(-11, "4");
    Outcome {
        pass: p.rounded && p.max_residual_log2 < -16.0 && u7,
        detail: format!(
            "f = (sqrt -11): residual 2^{:.0}, bound 2^{:.0}; d=-7, f=(2): full norm {s7}; d=-11, f=(4): full norm {s4}{}",
            p.max_residual_log2,
            p.err_bound_log2,
            if u4 { "" } else { " (not a unit: (4) is a prime power)" }
        ),
    }
}

fn c7() -> Outcome {
    let start = Instant::now();
    let (mut pass, mut other, mut considered) = (0, 0, 0);
    for m in ["[11,0,1]", "22"] {
        let t = tower(-11, m);
        for n in [1, 2, -1] {
            for r in rcf_core::conjecture::sweep(&t, &[0], n, 256).unwrap() {
                let v = r.verification.unwrap();
                let satisfied = r.hypothesis.as_ref().is_some_and(|h| h.satisfied) || r.degree == 1;
                if satisfied {
                    considered += 1;
                }
                match v.verdict {
                    Verdict::Pass if satisfied => {
                        let margin_ok = v.min_separation_log2.is_none_or(|s| s > (v.err_bound_log2 + 1) as f64);
                        if margin_ok && v.distinct as u64 == v.expected {
                            pass += 1;
                        }
                    }
                    Verdict::Pass => {}
                    _ => other += 1,
                }
            }
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: pass == considered && other == 0 && considered > 0 && within(t, 600),
        detail: format!("{pass}/{considered} PASS, {other} FAIL or INCONCLUSIVE, {:.1}s", t.as_secs_f64()),
    }
}

fn groups_up_to(max: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: Vec<u64>, prod: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut k = if prefix.is_empty() { 2 } else { last };
        while prod * k <= max {
            if k % last == 0 {
                let mut p = prefix.clone();
                p.push(k);
                rec(p, prod * k, max, out);
            }
            k += if prefix.is_empty() { 1 } else { last };
        }
    }
    let mut out = Vec::new();
    rec(Vec::new(), 1, max, &mut out);
    out.retain(|v| !v.is_empty());
    out
}

fn extension_counts() -> (bool, String) {
    let (mut cases, mut sampled) = (0u64, 0u64);
    for inv in groups_up_to(200) {
        let g = FinAbGroup::new(inv.clone()).unwrap();
        let subs = match g.subgroup_lattice(DEFAULT_LATTICE_CAP) {
            Ok(s) if s.len() <= 400 => s,
            _ => {
                sampled += 1;
                let elems: Vec<_> = g.elements().step_by(7).take(40).collect();
                elems.iter().map(|x| Subgroup::generated(&g, std::slice::from_ref(x)).unwrap()).collect()
            }
        };
        let chars: Vec<Character> = Character::all(&g).step_by((g.order() as usize / 3).max(1)).take(3).collect();
        for h in &subs {
            let index = g.order() / h.order();
            for chi in &chars {
                let on_h = chi.restrict(h);
                let count = Character::all(&g)
                    .filter(|psi| h.gens().iter().all(|x| psi.value(x) == chi.value(x)))
                    .count() as u64;
                if count != index {
                    return (false, format!("G = {inv:?}, |H| = {}: {count} extensions, index {index}", h.order()));
                }
                // one step of the construction accepts exactly the n-th roots
                if let Some(x) = g.elements().find(|x| !h.contains(x)) {
                    let n = coset_order(h, &x);
                    let target = chi.value(&g.scale(&x, n as i64));
                    let ok = target.roots(n).into_iter().all(|r| extend_character(&on_h, &x, r).is_ok());
                    if !ok {
                        return (false, format!("a valid root was rejected in G = {inv:?}"));
                    }
                }
                cases += 1;
            }
        }
    }
    (true, format!("{cases} (G, H, chi) cases, {sampled} large lattices sampled"))
}

fn admissible_matches() -> (bool, String) {
    let (mut cases, mut lemma_cases, mut outside) = (0, 0, 0);
    for (d, m) in [(-11, "22"), (-4, "15"), (-3, "14"), (-23, "6"), (-7, "12"), (-20, "6"), (-11, "[11,0,1]")] {
        let t = tower(d, m);
        if t.top().order() > 2000 {
            continue;
        }
        let g = t.top().group().clone();
        let all: Vec<usize> = (0..t.top().factorization().len()).collect();
        for s in g.subgroup_lattice(DEFAULT_LATTICE_CAP).unwrap().into_iter().take(16) {
            let spec = SubfieldSpec::new(&t, s.clone()).unwrap();
            let h = h_set(&spec).unwrap();
            let good: Vec<usize> = all.iter().copied().filter(|i| !h.contains(i)).collect();
            for dcls in s.coset_reps().into_iter().filter(|x| !s.contains(x)).take(4) {
                for required in [good.clone(), all.clone()] {
                    let brute = admissible_characters_bruteforce(&t, &s, &dcls, &required);
                    let found = find_admissible_character(&t, &s, &dcls, &required);
                    cases += 1;
                    match found {
                        Ok(a) => {
                            if !brute.contains(&a.chi) {
                                return (false, format!("d={d} f={m}: constructed character not admissible"));
                            }
                        }
                        Err(_) if required == good => {
                            return (false, format!("d={d} f={m}: construction failed although the hypotheses hold"));
                        }
                        Err(_) => {
                            if !brute.is_empty() {
                                outside += 1;
                            }
                        }
                    }
                    if required == good {
                        lemma_cases += 1;
                        if brute.is_empty() {
                            return (false, format!("d={d} f={m}: no admissible character although the hypotheses hold"));
                        }
                    }
                }
            }
        }
    }
    (
        true,
        format!("{cases} cases ({lemma_cases} under the hypotheses), {outside} outside the hypotheses where only brute force finds one"),
    )
}

fn g1_g2() -> (bool, String) {
    let mut cases = 0;
    for m in ["[11,0,1]", "22"] {
        let t = tower(-11, m);
        let g = t.top().group().clone();
        for s in g.subgroup_lattice(1000).unwrap() {
            let Reduction::Proper { tower: t2, s_l, .. } = reduce_modulus(&t, &s, &g.identity()).unwrap() else {
                continue;
            };
            let spec = SubfieldSpec::new(&t2, s_l.clone()).unwrap();
            let hyp = hypothesis(&spec).unwrap();
            if !hyp.satisfied || spec.degree() == 1 {
                continue;
            }
            let h = h_set(&spec).unwrap();
            for s2 in t2.top().group().subgroup_lattice(1000).unwrap() {
                if !s_l.is_subgroup_of(&s2) || s2 == s_l {
                    continue;
                }
                let (g1, g2) = count_g1_g2(&t2, &s_l, &s2, &h).unwrap();
                cases += 1;
                if g1 <= g2 {
                    return (false, format!("|G1| = {g1} <= |G2| = {g2} at {}", t2.top().modulus()));
                }
            }
        }
    }
    (cases > 0, format!("{cases} (L, L') pairs"))
}

fn doubling() -> (bool, String) {
    let mut runner = TestRunner::deterministic();
    let strat = (1i64..60, 0i64..60, 0i64..60, -500i64..500, 600i64..3000);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let (n, a, b, x, y) = strat.new_tree(&mut runner).unwrap().current();
        let n = n + 1;
        let (a, b) = if a % n == 0 && b % n == 0 { (a + 1, b) } else { (a, b) };
        let r1 = BigRational::new(a.into(), n.into());
        let r2 = BigRational::new(b.into(), n.into());
        let tau = BigComplex::from_floats(Float::with_val(512, x) / 1000u32, Float::with_val(512, y) / 1000u32);
        let lo = siegel_g(&r1, &r2, &tau, 128).unwrap();
        let hi = siegel_g(&r1, &r2, &tau, 256).unwrap();
        let rel = hi.sub(&lo.with_prec(256)).log2_abs() - lo.log2_abs();
        worst = worst.max(rel);
        if lo.sub(&hi.with_prec(128)).abs() > lo.abs() * pow2(128, -120) {
            return (false, format!("r = ({a}/{n}, {b}/{n}), tau = {x}/1000 + {y}/1000 i: log2 rel {rel:.1}"));
        }
    }
    (true, format!("100 inputs, worst log2 relative gap {worst:.1}"))
}

fn c8() -> Outcome {
    let start = Instant::now();
    let parts = [
        ("extensions", extension_counts()),
        ("admissible", admissible_matches()),
        ("G1 > G2", g1_g2()),
        ("doubling", doubling()),
    ];
    let pass = parts.iter().all(|(_, (ok, _))| *ok);
    let detail = parts
        .iter()
        .map(|(name, (ok, d))| format!("{name}: {} ({d})", if *ok { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome {
        pass,
        detail: format!("{detail}; {:.1}s", start.elapsed().as_secs_f64()),
    }
}

fn main() {
    let mut lines: Vec<(&str, Outcome)> = Vec::new();
    lines.push(("1", c1()));
    lines.push(("2", c2()));
    let (lit, norm) = c3();
    lines.push(("3", lit));
    lines.push(("3 (normalized)", norm));
    lines.push(("4", c4()));
    lines.push(("5", c5()));
    lines.push(("6", c6()));
    lines.push(("7", c7()));
    lines.push(("8", c8()));
    let mut failed = 0;
    for (name, o) in &lines {
        println!("criterion {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
