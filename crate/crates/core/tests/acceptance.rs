//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use polyboole::algebra::{Monomial, Ring, SparsePoly, VarId};
use polyboole::encode::{
    full_reduce, quadratize, theta, BitClass, BooleanSystem, ChainKind, LiftMode, ReduceOptions, Registry, Repr,
    VarTable,
};
use polyboole::optimize::{build_base, qfp_opt};
use polyboole::problems::{
    hnf, linear_system, lswn_system, ntru_attack_system, ntru_keygen, planted_lswn, pswn_build, random_full_rank,
    random_sis_matrix, sis_build, smallest_solution_build, solve_feasibility, svp_build,
    svp_coeff_bound, Feasibility, LatticeInstance, NtruParams,
};
use polyboole::solver::{opb_string, solve, BackendConfig, SolveOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("theta encoding exactness", 1, theta_exactness),
        ("worked quadratization example", 1, worked_example),
        ("size formulas", 5, size_formulas),
        ("pipeline equals brute-force variety", 60, pipeline_oracle),
        ("optimizer matches brute force", 60, optimizer_optimality),
        ("noisy systems", 30, pswn),
        ("short solutions", 30, sis_minsol),
        ("HNF and SVP", 60, hnf_svp),
        ("NTRU witness", 60, ntru_witness),
        ("determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        let r = match r {
            Ok(d) if t > Duration::from_secs(*limit) => Err(format!("{d}; took {:.2}s, limit {limit}s", t.as_secs_f64())),
            other => other,
        };
        match r {
            Ok(d) => println!("[PASS] {:>2} {name} ({:.2}s): {d}", i + 1, t.as_secs_f64()),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({:.2}s): {d}", i + 1, t.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ilog2_plus_one(b: u64) -> usize {
    let mut k = 0;
    while (1u64 << (k + 1)) <= b {
        k += 1;
    }
    k + 1
}

fn theta_exactness() -> Outcome {
    let mut injective = vec![];
    for b in 1u64..=64 {
        let mut reg = Registry::new();
        let e = theta(&BigInt::from(b), &mut reg, BitClass::Aux, 0, "t");
        let k = e.weights.len();
        ensure!(k == ilog2_plus_one(b), "b={b}: {k} bits");
        ensure!(reg.len() == k, "b={b}: registry has {} bits", reg.len());
        let mut image = BTreeMap::<BigInt, usize>::new();
        for mask in 0u32..1 << k {
            let bits: Vec<u8> = (0..k).map(|i| (mask >> i & 1) as u8).collect();
            *image.entry(e.value(&bits).unwrap()).or_default() += 1;
        }
        let want: BTreeSet<BigInt> = (0..=b).map(BigInt::from).collect();
        ensure!(image.keys().cloned().collect::<BTreeSet<_>>() == want, "b={b}: image differs");
        let inj = image.values().all(|&c| c == 1);
        ensure!(inj == (b + 1).is_power_of_two(), "b={b}: injective={inj}");
        if inj {
            injective.push(b);
        }
    }
    Ok(format!("b = 1..64 exact, injective for {injective:?}"))
}

fn worked_example() -> Outcome {
    let zz = Ring::Integers;
    let m = |p: &[(VarId, u32)]| Monomial::from_pairs(p.iter().copied());
    let f = SparsePoly::from_int_terms(
        &zz,
        [(m(&[(0, 3), (1, 5)]), big(1)), (m(&[(0, 7), (1, 5)]), big(2)), (Monomial::one(), big(3))],
    );
    let mut vars = VarTable::from_names(&["x1".to_string(), "x2".to_string()]).unwrap();
    let q = quadratize(std::slice::from_ref(&f), &mut vars);
    ensure!(q.squaring.len() == 4, "{} squaring equations", q.squaring.len());
    ensure!(q.products.len() == 5, "{} product equations", q.products.len());
    let def = |v: VarId| q.new_vars.iter().find(|c| c.id == v).map(|c| c.definition.clone());
    // Q1: u_{i1} = x_i², u_{i2} = u_{i1}²
    let mut sq_defs = BTreeSet::new();
    for e in &q.squaring {
        let lin: Vec<_> = e.int_terms().filter(|(mo, _)| mo.degree() == 1).collect();
        let quad: Vec<_> = e.int_terms().filter(|(mo, _)| mo.degree() == 2).collect();
        ensure!(e.num_terms() == 2 && lin.len() == 1 && quad.len() == 1, "bad squaring equation");
        let lhs = lin[0].0.pairs()[0].0;
        let &[(base, 2)] = quad[0].0.pairs() else { return Err("squaring rhs is not a square".into()) };
        ensure!(*lin[0].1 == big(1) && *quad[0].1 == big(-1), "bad squaring coefficients");
        let base_def = def(base).unwrap_or_else(|| Monomial::var(base));
        ensure!(def(lhs) == Some(base_def.pow(2)), "squaring definition mismatch");
        sq_defs.insert(def(lhs).unwrap());
    }
    let want_sq: BTreeSet<Monomial> =
        [m(&[(0, 2)]), m(&[(0, 4)]), m(&[(1, 2)]), m(&[(1, 4)])].into_iter().collect();
    ensure!(sq_defs == want_sq, "squaring chain defines {sq_defs:?}");
    // Q2: v = a·b with def(v) = def(a)·def(b)
    for e in &q.products {
        let lin: Vec<_> = e.int_terms().filter(|(mo, _)| mo.degree() == 1).collect();
        let quad: Vec<_> = e.int_terms().filter(|(mo, _)| mo.degree() == 2).collect();
        ensure!(e.num_terms() == 2 && lin.len() == 1 && quad.len() == 1, "bad product equation");
        let lhs = lin[0].0.pairs()[0].0;
        let mut rhs = Monomial::one();
        for v in quad[0].0.vars() {
            rhs = rhs.mul(&def(v).unwrap_or_else(|| Monomial::var(v)).pow(quad[0].0.degree_in(v)));
        }
        ensure!(def(lhs) == Some(rhs), "product definition mismatch");
        ensure!(
            matches!(q.new_vars.iter().find(|c| c.id == lhs).unwrap().kind, ChainKind::Product),
            "product variable has the wrong kind"
        );
    }
    // f̂ = v₂u₂₂ + 2v₅u₂₂ + 3
    let [hat] = &q.rewritten[..] else { return Err("one rewritten polynomial expected".into()) };
    ensure!(hat.num_terms() == 3 && hat.total_degree() == 2, "f̂ has the wrong shape");
    ensure!(hat.constant_term().as_int() == Some(&big(3)), "constant term");
    let u22 = q.new_vars.iter().find(|c| c.definition == m(&[(1, 4)])).unwrap().id;
    let mut seen = BTreeMap::new();
    for (mo, c) in hat.int_terms().filter(|(mo, _)| !mo.is_one()) {
        ensure!(mo.degree_in(u22) == 1, "term without u22");
        let other = mo.vars().find(|&v| v != u22).unwrap();
        seen.insert(c.to_i64().unwrap(), def(other).unwrap());
    }
    let want: BTreeMap<i64, Monomial> = [(1, m(&[(0, 3), (1, 1)])), (2, m(&[(0, 7), (1, 1)]))].into_iter().collect();
    ensure!(seen == want, "f̂ uses {seen:?}");
    Ok("Q1 has 4 equations, Q2 has 5, f̂ = v₂u₂₂ + 2v₅u₂₂ + 3".into())
}

/// M recomputed from a lifted equation f − k·(θ_M(U) + m_lo).
fn lift_bound(sys: &BooleanSystem, rec_eq: usize, counter: VarId, k: &BigInt, m_lo: &BigInt, mode: LiftMode) -> BigInt {
    let ubits: BTreeSet<VarId> = sys
        .registry
        .iter()
        .filter(|b| b.class == BitClass::UBit && b.origin.map(|o| o.0) == Some(counter))
        .map(|b| b.id)
        .collect();
    let eq = &sys.equations[rec_eq];
    let mut terms: Vec<(bool, BigInt)> = eq
        .int_terms()
        .filter(|(mo, _)| !mo.vars().any(|v| ubits.contains(&v)))
        .map(|(mo, c)| (mo.is_one(), c.clone()))
        .collect();
    match terms.iter_mut().find(|t| t.0) {
        Some(t) => t.1 += k * m_lo,
        None => terms.push((true, k * m_lo)),
    }
    terms.retain(|t| !t.1.is_zero());
    let negative = terms.iter().any(|t| t.1.is_negative());
    if negative || mode == LiftMode::SignedRange {
        let lo: BigInt = terms.iter().filter(|t| t.0 || t.1.is_negative()).map(|t| t.1.clone()).sum();
        let hi: BigInt = terms.iter().filter(|t| t.0 || t.1.is_positive()).map(|t| t.1.clone()).sum();
        let lo_q = -num_integer::Integer::div_floor(&-lo, k);
        let hi_q = num_integer::Integer::div_floor(&hi, k);
        return if hi_q < lo_q { BigInt::zero() } else { hi_q - lo_q };
    }
    match mode {
        LiftMode::TermCount => BigInt::from(terms.len()),
        _ => num_integer::Integer::div_floor(&terms.iter().map(|t| t.1.clone()).sum::<BigInt>(), k),
    }
}

fn size_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total_v = 0;
    let mut total_u = 0;
    for case in 0..100 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let n = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=3);
        let sys = random_system_mod(&mut rng, p, n, r, 8, 4);
        let tf: usize = sys.polys.iter().map(|f| f.num_terms()).sum();
        ensure!(tf <= 12, "T_F = {tf}");
        let mut vars = VarTable::from_names(&sys.vars).unwrap();
        let q = quadratize(&sys.polys, &mut vars);
        let nv = q.new_vars.len();
        let tq: usize = q.system().iter().map(|f| f.num_terms()).sum();
        ensure!(tq == tf + 2 * nv, "case {case}: T_Q = {tq}, T_F = {tf}, #V = {nv}");
        ensure!(q.system().len() == r + nv, "case {case}: #Q = {}, r = {r}, #V = {nv}", q.system().len());
        ensure!(q.system().iter().all(|f| f.total_degree() <= 2), "case {case}: degree above 2");
        total_v += nv;
        let modes = [LiftMode::TermCount, LiftMode::CoeffSum, LiftMode::SignedRange];
        let mode = modes[case % 3];
        let repr = if p > 2 && case % 2 == 0 { Repr::Centered } else { Repr::Standard };
        let b = full_reduce(&sys, ReduceOptions { lift_mode: mode, repr }).unwrap();
        let mut want = 0;
        for rec in &b.lifts {
            // centered coordinates are signed, so their lifts use interval bounds
            let eff = if repr == Repr::Centered { LiftMode::SignedRange } else { mode };
            let m = lift_bound(&b, rec.equation, rec.counter, &rec.modulus, &rec.m_lo, eff);
            ensure!(
                m == rec.bound,
                "case {case}: recomputed M = {m}, recorded {} for {} ({:?})",
                rec.bound,
                b.equations[rec.equation].display_with(&|v| b.var_name(v).to_string()),
                mode
            );
            let bits = if m.is_zero() { 0 } else { ilog2_plus_one(m.to_u64().unwrap()) };
            let have = b.registry.iter().filter(|x| x.class == BitClass::UBit && x.origin.map(|o| o.0) == Some(rec.counter)).count();
            ensure!(have == bits, "case {case}: counter with M = {m} has {have} bits");
            want += bits;
        }
        let got = b.registry.count(BitClass::UBit);
        ensure!(got == want, "case {case}: #U_bit = {got}, Σ = {want}");
        total_u += got;
    }
    Ok(format!("100 systems, {total_v} chain variables, {total_u} counter bits"))
}

fn pipeline_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = BackendConfig::backtracking();
    let mut roots_seen = 0;
    let mut pins = 0;
    for case in 0..200 {
        let p = [2u64, 3, 5, 7][case % 4];
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=2);
        let sys = random_system_mod(&mut rng, p, n, r, 4, 3);
        let b = full_reduce(&sys, ReduceOptions::default()).unwrap();
        let roots: BTreeSet<Vec<u64>> = roots_mod(&sys, p).into_iter().collect();
        for x in points(p, n) {
            let vals: BTreeMap<VarId, BigInt> = x.iter().enumerate().map(|(i, &v)| (i as VarId, BigInt::from(v))).collect();
            if roots.contains(&x) {
                let w = b.complete_witness(&vals).map_err(|e| format!("case {case}: root {x:?}: {e}"))?;
                ensure!(b.equations.iter().all(|e| eval_bits(e, &w).is_zero()), "case {case}: witness of {x:?} fails");
                let d = b.decode(&w).unwrap().decoded;
                ensure!(d == vals, "case {case}: witness decodes to {d:?}");
                roots_seen += 1;
            } else {
                let pinned_sys = pinned(&b, &vals.into_iter().collect::<Vec<_>>());
                let out = solve(&pinned_sys, &cfg).unwrap();
                ensure!(out == SolveOutcome::Unsat, "case {case}: non-root {x:?} gave {out:?}");
                pins += 1;
            }
        }
        // one unconstrained solve must land on a root when there is one
        match solve(&b, &cfg).unwrap() {
            SolveOutcome::Sat(z) => {
                let d = b.decode(&z).unwrap().decoded;
                let x: Vec<u64> = (0..n as VarId).map(|v| d[&v].to_u64().unwrap()).collect();
                ensure!(roots.contains(&x), "case {case}: solver returned non-root {x:?}");
            }
            SolveOutcome::Unsat => ensure!(roots.is_empty(), "case {case}: Unsat with roots"),
            SolveOutcome::Unknown(w) => return Err(format!("case {case}: unknown {w}")),
        }
    }
    let fields: [(u64, Vec<u64>); 3] = [(2, vec![1, 1, 1]), (2, vec![1, 1, 0, 1]), (3, vec![1, 0, 1])];
    for case in 0..50 {
        let (p, phi) = &fields[case % 3];
        let ring = Ring::ext(*p, phi.clone()).unwrap();
        let gf = Gf::new(*p, phi);
        let n = rng.gen_range(1..=2);
        let r = rng.gen_range(1..=2);
        let sys = random_system_ext(&mut rng, &ring, &gf, n, r, 3, 3);
        let b = full_reduce(&sys, ReduceOptions::default()).unwrap();
        let layout = b.ext.clone().unwrap();
        let roots: BTreeSet<Vec<usize>> = gf.roots(&sys).into_iter().collect();
        for x in points(gf.q as u64, n) {
            let x: Vec<usize> = x.into_iter().map(|v| v as usize).collect();
            let mut vals = BTreeMap::new();
            for (i, &xi) in x.iter().enumerate() {
                for (c, v) in layout.components[i].iter().zip(gf.coords(xi)) {
                    vals.insert(*c, BigInt::from(v));
                }
            }
            if roots.contains(&x) {
                let w = b.complete_witness(&vals).map_err(|e| format!("ext case {case}: root {x:?}: {e}"))?;
                ensure!(b.equations.iter().all(|e| eval_bits(e, &w).is_zero()), "ext case {case}: witness fails");
                roots_seen += 1;
            } else {
                let out = solve(&pinned(&b, &vals.into_iter().collect::<Vec<_>>()), &cfg).unwrap();
                ensure!(out == SolveOutcome::Unsat, "ext case {case}: non-root {x:?} gave {out:?}");
                pins += 1;
            }
        }
    }
    Ok(format!("250 systems, {roots_seen} roots witnessed, {pins} non-roots refuted"))
}

fn optimizer_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = BackendConfig::backtracking();
    let (mut done, mut infeasible, mut iters) = (0, 0, 0);
    let mut widest = 0;
    while done < 100 {
        let prob = random_problem(&mut rng);
        let nb = build_base(&prob).unwrap().system.num_vars();
        if nb > 14 {
            continue;
        }
        widest = widest.max(nb);
        let want = brute_opt(&prob);
        let r = qfp_opt(&prob, &cfg).unwrap();
        let got = r.value().map(|v| v.to_i64().unwrap());
        ensure!(got == want, "problem {done}: got {got:?}, brute force {want:?}\n{}", prob.to_json_string());
        let bound = log43_bound(&prob.u);
        ensure!(r.iterations() <= bound, "problem {done}: {} iterations, bound {bound}", r.iterations());
        if let Some(vals) = r.values() {
            let pt: Vec<i64> = (0..prob.num_vars() as VarId).map(|v| vals[&v].to_i64().unwrap()).collect();
            let (ok, o) = judge(&prob, &pt);
            ensure!(ok && Some(o) == want, "problem {done}: returned point is not optimal");
        } else {
            infeasible += 1;
        }
        iters += r.iterations();
        done += 1;
    }
    Ok(format!("100 problems (≤ {widest} bits), {infeasible} infeasible, {iters} iterations in total"))
}

fn pswn() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = BackendConfig::backtracking();
    // e^{p-1} is 0 at 0 and 1 elsewhere
    for p in [2u64, 3, 5] {
        for e in 0..p {
            let v = eval_mod(&SparsePoly::from_int_terms(&Ring::modk(p).unwrap(), [(Monomial::from_pairs([(0, p as u32 - 1)]), big(1))]), &[e], p);
            ensure!(v == u64::from(e != 0), "e^(p-1) at e={e}, p={p} is {v}");
        }
    }
    let mut hist = BTreeMap::new();
    for case in 0..50 {
        let p = [2u64, 3, 5][case % 3];
        let r = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=3);
        let errors = rng.gen_range(0..=r.min(2));
        let (a, b, _) = planted_lswn(&mut rng, p, r, n, errors);
        let sys = lswn_system(&a, &b, &BigInt::from(p)).unwrap();
        let want = points(p, n)
            .into_iter()
            .map(|x| {
                a.iter()
                    .zip(&b)
                    .filter(|(row, bi)| {
                        let s: BigInt = row.iter().zip(&x).map(|(c, v)| c * v).sum::<BigInt>() - *bi;
                        !num_integer::Integer::mod_floor(&s, &BigInt::from(p)).is_zero()
                    })
                    .count()
            })
            .min()
            .unwrap();
        ensure!(want <= errors, "case {case}: planted {errors} errors but oracle finds {want}");
        let prob = pswn_build(&sys).unwrap();
        let res = qfp_opt(&prob, &cfg).unwrap();
        let got = res.value().ok_or(format!("case {case}: no optimum"))?.to_usize().unwrap();
        ensure!(got == want, "case {case}: min weight {got}, oracle {want}");
        let named = res.named();
        let x: Vec<u64> = (1..=n).map(|j| named[&format!("x{j}")].to_u64().unwrap()).collect();
        let bad = sys.polys.iter().filter(|f| eval_mod(f, &x, p) != 0).count();
        ensure!(bad == got, "case {case}: decoded point violates {bad}");
        for j in 1..=r {
            let e = named[&format!("e{j}")].to_u64().unwrap();
            let h = named[&format!("H{j}")].to_u64().unwrap();
            ensure!(h == u64::from(e != 0), "case {case}: H{j}={h} with e{j}={e}");
        }
        *hist.entry(got).or_insert(0) += 1;
    }
    Ok(format!("50 instances, weight histogram {hist:?}"))
}

fn sis_minsol() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = BackendConfig::backtracking();
    let mut trivial = 0;
    for case in 0..50 {
        let p = [3u64, 5][case % 2];
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=(n - 1).max(1));
        let a = random_sis_matrix(&mut rng, r, n, p);
        let h = (p as i64 - 1) / 2;
        let kernel_ok = |x: &[i64]| {
            a.iter().all(|row| {
                let s: BigInt = row.iter().zip(x).map(|(c, &v)| c * v).sum();
                num_integer::Integer::mod_floor(&s, &BigInt::from(p)).is_zero()
            })
        };
        let want = int_box(-h, h, n)
            .into_iter()
            .filter(|x| x.iter().any(|&v| v != 0) && kernel_ok(x))
            .map(|x| x.iter().map(|v| v * v).sum::<i64>())
            .min();
        let sys = linear_system(&a, &BigInt::from(p), n).unwrap();
        let res = qfp_opt(&smallest_solution_build(&sys).unwrap(), &cfg).unwrap();
        let got = res.value().map(|v| v.to_i64().unwrap() + 1);
        ensure!(got == want, "case {case}: min norm² {got:?}, box minimum {want:?}");
        let Some(w) = want else {
            trivial += 1;
            continue;
        };
        let named = res.named();
        let x: Vec<i64> = (1..=n).map(|j| named[&format!("x{j}")].to_i64().unwrap()).collect();
        ensure!(kernel_ok(&x) && x.iter().map(|v| v * v).sum::<i64>() == w, "case {case}: decoded {x:?}");
        // the feasibility form agrees at the optimum and just below it
        match solve_feasibility(&sis_build(&sys, &big(w)).unwrap(), &cfg).unwrap() {
            Feasibility::Sat { values, .. } => {
                let x: Vec<i64> = (1..=n).map(|j| values[&format!("x{j}")].to_i64().unwrap()).collect();
                let nn: i64 = x.iter().map(|v| v * v).sum();
                ensure!(kernel_ok(&x) && (1..=w).contains(&nn), "case {case}: SIS decoded {x:?}");
            }
            other => return Err(format!("case {case}: SIS at the optimum gave {other:?}")),
        }
        if w > 1 {
            let out = solve_feasibility(&sis_build(&sys, &big(w - 1)).unwrap(), &cfg).unwrap();
            ensure!(out == Feasibility::Unsat, "case {case}: SIS below the optimum gave {out:?}");
        }
    }
    Ok(format!("50 instances, {trivial} with only the zero solution"))
}

fn hnf_svp() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..200 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=5);
        let b = random_full_rank(&mut rng, m, n, 5);
        let r = hnf(&b).map_err(|e| format!("matrix {case}: {e}"))?;
        ensure!(mat_mul(&b, &r.e) == r.h, "matrix {case}: B·E ≠ H");
        let d = det(&r.e);
        ensure!(d.abs().is_one(), "matrix {case}: det E = {d}");
        let hb = b.iter().flatten().map(|x| x.abs()).max().unwrap();
        let mut s = 0u64;
        while s * s < n as u64 {
            s += 1;
        }
        let bound = (BigInt::from(s) * hb).pow(n as u32);
        let hh = r.h.iter().flatten().map(|x| x.abs()).max().unwrap();
        ensure!(hh <= bound, "matrix {case}: ‖H‖∞ = {hh} > {bound}");
        ensure!(r.is_normal(), "matrix {case}: not in normal form");
        // pivots strictly increase, entries below each pivot vanish, the
        // rest of a pivot row is reduced modulo the pivot
        for j in 0..n {
            let pr = r.pivots[j];
            let piv = &r.h[pr][j];
            ensure!(piv.is_positive(), "matrix {case}: pivot not positive");
            ensure!((pr + 1..m).all(|i| r.h[i][j].is_zero()), "matrix {case}: column {j} not staircase");
            ensure!(j == 0 || r.pivots[j - 1] < pr, "matrix {case}: pivots out of order");
            ensure!(
                (j + 1..n).all(|k| !r.h[pr][k].is_negative() && &r.h[pr][k] < piv),
                "matrix {case}: row {pr} not reduced"
            );
        }
    }
    ensure!(svp_coeff_bound(&[vec![big(1)]]) == big(4), "b_B(1,1,1) = {}", svp_coeff_bound(&[vec![big(1)]]));
    let cfg = BackendConfig::backtracking();
    let mut lattices = 0;
    for case in 0..12 {
        let (m, n) = [(2, 2), (3, 2), (3, 3)][case % 3];
        let c = [1i64, 2, 3][case % 3];
        let b = random_full_rank(&mut rng, m, n, 2);
        let want = int_box(-c, c, n)
            .into_iter()
            .map(|a| norm_sq(&combine(&b, &a)))
            .filter(|v| !v.is_zero())
            .min()
            .unwrap();
        let inst = LatticeInstance::new(b.clone(), None, Some(big(c))).unwrap();
        let res = qfp_opt(&svp_build(&inst).unwrap(), &cfg).unwrap();
        let got = res.value().ok_or(format!("lattice {case}: no optimum"))? + 1;
        ensure!(got == want, "lattice {case}: SVP {got}, enumeration {want}");
        lattices += 1;
    }
    Ok(format!("200 HNFs, {lattices} SVP instances, b_B(1,1,1) = 4"))
}

fn ntru_fixture(i: usize) -> (NtruParams, u64) {
    let shapes = [(5, 16, 2, 1), (5, 32, 2, 2), (7, 16, 2, 2), (7, 32, 3, 2), (11, 16, 3, 3), (11, 32, 4, 3)];
    let (n, q, df, dg) = shapes[i % shapes.len()];
    (NtruParams::new(n, 3, q, df, dg).unwrap(), 100 + i as u64)
}

fn ntru_witness() -> Outcome {
    let mut solved = 0;
    let mut open = 0;
    for i in 0..10 {
        let (prm, seed) = ntru_fixture(i);
        let key = ntru_keygen(&prm, &mut ChaCha8Rng::seed_from_u64(seed), 1000).map_err(|e| format!("fixture {i}: {e}"))?;
        let q = prm.q as i64;
        let h: Vec<i64> = key.h.coeffs.iter().map(|&c| c as i64).collect();
        let hf = cyclic_mul(&h, &key.f);
        ensure!(
            hf.iter().zip(&key.g).all(|(a, g)| (a - g).rem_euclid(q) == 0),
            "fixture {i}: h∗f ≢ g mod q"
        );
        let prm = prm.with_h(key.h.clone()).unwrap();
        let atk = ntru_attack_system(&prm).unwrap();
        let w = atk.witness(&key).map_err(|e| format!("fixture {i}: {e}"))?;
        ensure!(atk.system.equations.iter().all(|e| eval_bits(e, &w).is_zero()), "fixture {i}: witness fails");
        ensure!(atk.decode_key(&w).unwrap() == (key.f.clone(), key.g.clone()), "fixture {i}: decode mismatch");
        let opb = parse_opb(&opb_string(&atk.system));
        ensure!(opb.declared_vars == atk.system.num_vars(), "fixture {i}: OPB header");
        ensure!(opb.constraints.len() == opb.declared_constraints, "fixture {i}: OPB constraint count");
        ensure!(opb.holds(&w), "fixture {i}: witness fails the OPB export");
        let limit = if prm.n == 5 { 20.0 } else { 1.5 };
        let cfg = BackendConfig { time_limit: Some(Duration::from_secs_f64(limit)), ..BackendConfig::backtracking() };
        match solve(&atk.system, &cfg).unwrap() {
            SolveOutcome::Sat(z) => {
                let (f, _) = atk.decode_key(&z).unwrap();
                let g: Vec<i64> = cyclic_mul(&h, &f).into_iter().map(|x| centered(x, q)).collect();
                let ones = g.iter().filter(|&&x| x == 1).count();
                let minus = g.iter().filter(|&&x| x == -1).count();
                ensure!(
                    g.iter().all(|x| x.abs() <= 1) && ones == prm.dg && minus == prm.dg,
                    "fixture {i}: recovered f gives h∗f = {g:?}"
                );
                solved += 1;
            }
            SolveOutcome::Unsat => return Err(format!("fixture {i}: Unsat despite a witness")),
            SolveOutcome::Unknown(_) => {
                ensure!(prm.n > 5, "fixture {i}: N = 5 was not solved within {limit}s");
                open += 1;
            }
        }
    }
    Ok(format!("10 fixtures witnessed, {solved} solved by search, {open} left to the time limit"))
}

fn artifacts(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let sys_path = dir.join("sys.json");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sys = random_system_mod(&mut rng, 5, 2, 2, 3, 3);
    std::fs::write(&sys_path, sys.to_string_pretty()).unwrap();
    let run = |args: &[&str]| -> Vec<u8> {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut argv = vec!["polyboole"];
        argv.extend_from_slice(args);
        let code = polyboole::cli::run_with(argv, &mut o, &mut e);
        assert!(code != 2, "{args:?}: {}", String::from_utf8_lossy(&e));
        o
    };
    let s = sys_path.to_str().unwrap();
    out.push(("reduce.json".into(), run(&["reduce", s])));
    out.push(("reduce.opb".into(), run(&["reduce", s, "--emit", "opb"])));
    out.push(("solve".into(), run(&["solve", s])));
    let key = run(&["ntru", "gen", "--n", "7", "--q", "32", "--df", "2", "--dg", "2", "--seed", "77"]);
    let key_path = dir.join("key.json");
    std::fs::write(&key_path, &key).unwrap();
    out.push(("ntru.json".into(), key));
    out.push(("ntru.opb".into(), run(&["ntru", "attack", key_path.to_str().unwrap(), "--emit", "opb"])));
    let trace = dir.join("trace.jsonl");
    let lat = dir.join("lat.json");
    std::fs::write(&lat, r#"{"basis": [[2, 1], [0, 3]], "coeff_bound": 2}"#).unwrap();
    out.push(("svp".into(), run(&["svp", lat.to_str().unwrap(), "--json", "--trace", trace.to_str().unwrap()])));
    out.push(("svp.trace".into(), std::fs::read(&trace).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let b = random_full_rank(&mut rng, 3, 3, 4);
    out.push(("hnf".into(), format!("{:?}", hnf(&b).unwrap()).into_bytes()));
    out.push(("sis".into(), sis_build(&linear_system(&random_sis_matrix(&mut rng, 2, 3, 5), &big(5), 3).unwrap(), &big(2)).unwrap().to_json_string().into_bytes()));
    out
}

fn determinism() -> Outcome {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let a = artifacts(d1.path());
    let b = artifacts(d2.path());
    let mut bytes = 0;
    for ((n1, x), (_, y)) in a.iter().zip(&b) {
        ensure!(!x.is_empty(), "{n1}: empty artifact");
        ensure!(x == y, "{n1}: differs between runs");
        bytes += x.len();
    }
    Ok(format!("{} artifacts, {bytes} bytes, identical across runs", a.len()))
}
