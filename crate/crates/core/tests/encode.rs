mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use polyboole::algebra::{Monomial, Ring, SparsePoly, VarId};
use polyboole::encode::{
    encode_inequalities, full_reduce, quadratize, theta_centered, BitClass, BooleanSystem, LiftMode, ReduceOptions,
    Registry, Repr, VarBound, VarTable,
};
use polyboole::solver::{solve, BackendConfig, SolveOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn multilinear(sys: &BooleanSystem) -> bool {
    sys.equations.iter().all(|e| e.int_terms().all(|(m, _)| m.pairs().iter().all(|&(_, k)| k == 1)))
}

/// Value of a chain variable given the input point, by its definition.
fn chain_value(def: &Monomial, x: &[u64], p: u64) -> u64 {
    def.pairs().iter().fold(1, |acc, &(v, e)| (0..e).fold(acc, |a, _| a * x[v as usize] % p))
}

#[test]
fn quadratization_preserves_the_variety() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut full_checks = 0;
    for case in 0..120 {
        let p = [2u64, 3, 5, 7][case % 4];
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=2);
        let sys = random_system_mod(&mut rng, p, n, r, 8, 3);
        let mut vars = VarTable::from_names(&sys.vars).unwrap();
        let q = quadratize(&sys.polys, &mut vars);
        let qs = q.system();
        assert!(qs.iter().all(|f| f.total_degree() <= 2));
        let total = vars.len();
        let roots: BTreeSet<Vec<u64>> = roots_mod(&sys, p).into_iter().collect();
        if (p as f64).powi(total as i32) <= 60_000.0 {
            // project the whole variety of Q(F)
            let proj: BTreeSet<Vec<u64>> = points(p, total)
                .into_iter()
                .filter(|z| qs.iter().all(|f| eval_mod(f, z, p) == 0))
                .map(|z| z[..n].to_vec())
                .collect();
            assert_eq!(proj, roots, "case {case}");
            full_checks += 1;
        } else {
            // the chain equations force every new variable, so each x has
            // exactly one candidate lift
            for x in points(p, n) {
                let mut z = x.clone();
                z.resize(total, 0);
                for c in &q.new_vars {
                    z[c.id as usize] = chain_value(&c.definition, &x, p);
                }
                let ok = qs.iter().all(|f| eval_mod(f, &z, p) == 0);
                assert_eq!(ok, roots.contains(&x), "case {case} at {x:?}");
            }
        }
    }
    assert!(full_checks > 20);
}

#[test]
fn pipeline_over_larger_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = BackendConfig::backtracking();
    for case in 0..12 {
        let (ring, gf, n) = match case % 3 {
            0 => (Ring::ext(2, vec![1, 1, 0, 0, 1]).unwrap(), Gf::new(2, &[1, 1, 0, 0, 1]), 1 + case % 2),
            1 => (Ring::modk(11).unwrap(), Gf::new(11, &[0, 1]), 2),
            _ => (Ring::modk(13).unwrap(), Gf::new(13, &[0, 1]), 2),
        };
        let sys = match &ring {
            Ring::ModK(_) => random_system_mod(&mut rng, gf.p, n, 2, 3, 3),
            _ => random_system_ext(&mut rng, &ring, &gf, n, 2, 3, 3),
        };
        for mode in [LiftMode::CoeffSum, LiftMode::TermCount] {
            let b = full_reduce(&sys, ReduceOptions { lift_mode: mode, repr: Repr::Standard }).unwrap();
            assert!(multilinear(&b));
            let roots: BTreeSet<Vec<usize>> = gf.roots(&sys).into_iter().collect();
            for x in points(gf.q as u64, n) {
                let x: Vec<usize> = x.into_iter().map(|v| v as usize).collect();
                let mut vals = BTreeMap::new();
                for (i, &xi) in x.iter().enumerate() {
                    match &b.ext {
                        Some(l) => {
                            for (c, v) in l.components[i].iter().zip(gf.coords(xi)) {
                                vals.insert(*c, BigInt::from(v));
                            }
                        }
                        None => {
                            vals.insert(i as VarId, BigInt::from(xi));
                        }
                    }
                }
                if roots.contains(&x) {
                    let w = b.complete_witness(&vals).unwrap();
                    assert!(b.equations.iter().all(|e| eval_bits(e, &w).is_zero()));
                } else {
                    let out = solve(&pinned(&b, &vals.into_iter().collect::<Vec<_>>()), &cfg).unwrap();
                    assert_eq!(out, SolveOutcome::Unsat, "case {case} {x:?}");
                }
            }
        }
    }
}

#[test]
fn centered_pipeline_decodes_centered_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    for _ in 0..20 {
        let p = [3u64, 5][rng.gen_range(0..2)];
        let sys = random_system_mod(&mut rng, p, 2, 1, 2, 3);
        let b = full_reduce(&sys, ReduceOptions { lift_mode: LiftMode::CoeffSum, repr: Repr::Centered }).unwrap();
        assert!(multilinear(&b));
        if b.num_vars() > 18 {
            continue;
        }
        let h = (p as i64 - 1) / 2;
        let decoded: BTreeSet<Vec<i64>> = all_solutions(&b)
            .iter()
            .map(|a| b.decode(a).unwrap().decoded.values().map(|v| v.to_i64().unwrap()).collect())
            .collect();
        let want: BTreeSet<Vec<i64>> = roots_mod(&sys, p)
            .into_iter()
            .map(|x| x.into_iter().map(|v| centered(v as i64, p as i64)).collect())
            .collect();
        assert_eq!(decoded, want);
        assert!(decoded.iter().flatten().all(|v| v.abs() <= h));
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} systems small enough");
}

#[test]
fn inequalities_cut_exactly_the_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let zz = Ring::Integers;
    let mut checked = 0;
    for case in 0..30 {
        let bounds: Vec<i64> = (0..2).map(|_| rng.gen_range(1..=3)).collect();
        let c0 = big(rng.gen_range(0..=2));
        let mut terms: Vec<(Monomial, BigInt)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let a = rng.gen_range(0..2) as VarId;
                let b = rng.gen_range(0..2) as VarId;
                let m = if rng.gen_bool(0.4) { Monomial::product([a, b]) } else { Monomial::var(a) };
                (m, big(rng.gen_range(-2..=3)))
            })
            .collect();
        terms.push((Monomial::one(), c0));
        let g = SparsePoly::from_int_terms(&zz, terms);
        if g.is_constant() {
            continue;
        }
        let b = rng.gen_range(1..=4);
        let vb: BTreeMap<VarId, VarBound> =
            g.vars().into_iter().map(|v| (v, VarBound::Upper(big(bounds[v as usize])))).collect();
        let names = vec!["a".to_string(), "b".to_string()];
        let sys = match encode_inequalities(&[(g.clone(), big(b))], &names, &vb) {
            Ok(s) => s,
            Err(e) => panic!("case {case}: {e}"),
        };
        assert!(multilinear(&sys));
        if sys.num_vars() > 18 {
            continue;
        }
        let used: Vec<VarId> = vb.keys().copied().collect();
        let decoded: BTreeSet<Vec<i64>> = all_solutions(&sys)
            .iter()
            .map(|a| {
                let d = sys.decode(a).unwrap().decoded;
                used.iter().map(|v| d[v].to_i64().unwrap()).collect()
            })
            .collect();
        let want: BTreeSet<Vec<i64>> = points(4, used.len())
            .into_iter()
            .map(|x| x.into_iter().map(|v| v as i64).collect::<Vec<i64>>())
            .filter(|x| x.iter().zip(&used).all(|(v, u)| *v <= bounds[*u as usize]))
            .filter(|x| {
                let val = g.eval_int(|v| big(x[used.iter().position(|u| *u == v).unwrap()]));
                val >= BigInt::zero() && val <= big(b)
            })
            .collect();
        assert_eq!(decoded, want, "case {case}");
        checked += 1;
    }
    assert!(checked >= 15, "only {checked} instances checked");
}

#[test]
fn theta_examples() {
    let mut reg = Registry::new();
    let e = theta_centered(&big(2), &big(1), &mut reg, BitClass::XBit, 0, "x");
    assert_eq!(e.value(&[0, 0]).unwrap(), big(-1));
    assert_eq!(e.value(&[1, 0]).unwrap(), big(0));
    let mut reg = Registry::new();
    let six = theta_centered(&big(6), &big(0), &mut reg, BitClass::Aux, 0, "t");
    assert_eq!(six.value(&[1, 1, 0]).unwrap(), big(3));
    assert_eq!(six.value(&[0, 0, 1]).unwrap(), big(3));
}

#[test]
fn boolean_system_json_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for p in [2u64, 3, 5] {
        let sys = random_system_mod(&mut rng, p, 2, 2, 4, 3);
        let b = full_reduce(&sys, ReduceOptions::default()).unwrap();
        let text = b.to_json_string();
        let back = BooleanSystem::parse(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(back.equations, b.equations);
    }
    let gf9 = Ring::ext(3, vec![1, 0, 1]).unwrap();
    let sys = random_system_ext(&mut rng, &gf9, &Gf::new(3, &[1, 0, 1]), 2, 1, 3, 3);
    let b = full_reduce(&sys, ReduceOptions::default()).unwrap();
    assert_eq!(BooleanSystem::parse(&b.to_json_string()).unwrap().to_json_string(), b.to_json_string());
}

#[test]
fn every_output_is_multilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..40 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let sys = random_system_mod(&mut rng, p, 3, 2, 6, 4);
        for repr in [Repr::Standard, Repr::Centered] {
            if repr == Repr::Centered && p == 2 {
                assert!(full_reduce(&sys, ReduceOptions { repr, ..Default::default() }).is_err());
                continue;
            }
            let b = full_reduce(&sys, ReduceOptions { repr, ..Default::default() }).unwrap();
            assert!(multilinear(&b));
            assert_eq!(b.equations.len(), b.provenance.len());
        }
    }
}
