#![allow(dead_code)]

use cofun_core::exact::{Int, IntMatrix, RingSpec};
use cofun_core::fpmod::{hom_module, FpModule, FpMorphism};
use cofun_testkit::{cyclic_profile, FiniteQuotient, Gen};
use num_traits::ToPrimitive;
use proptest::prelude::*;

pub fn ring(n: u64) -> RingSpec {
    if n == 0 {
        RingSpec::Integers
    } else {
        RingSpec::modulo(n).unwrap()
    }
}

pub fn modulus(r: &RingSpec) -> u64 {
    r.modulus().map(|n| n.to_u64().unwrap()).unwrap_or(0)
}

pub fn raw(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn module(r: &RingSpec, gens: usize, rows: &[Vec<i64>]) -> FpModule {
    FpModule::new(r, gens, IntMatrix::from_i64(r, gens, rows).unwrap()).unwrap()
}

pub fn finite(m: &FpModule) -> FiniteQuotient {
    FiniteQuotient::new(modulus(m.ring()), m.gens(), &raw(m.relations()))
}

/// `|M[k]|` for `k = 1..=n`, read off the library's decomposition.
pub fn profile(m: &FpModule) -> Vec<usize> {
    let d = m.decompose();
    let factors: Vec<u64> = d.invariant_factors.iter().map(|x| x.to_u64().unwrap()).collect();
    cyclic_profile(modulus(m.ring()), d.rank, &factors)
}

/// `(n, gens, relation rows)` over `Z/n` with `n ≤ max_n`, `gens ≤ max_gens`.
pub fn finite_module(max_n: u64, max_gens: usize) -> impl Strategy<Value = (u64, usize, Vec<Vec<i64>>)> {
    (2..=max_n, 1..=max_gens, 0..=2usize).prop_flat_map(|(n, g, r)| {
        let row = prop::collection::vec(0..n as i64, g);
        (Just(n), Just(g), prop::collection::vec(row, r))
    })
}

/// `(gens, relation rows)` over `Z`.
pub fn integer_module(max_gens: usize, max_rels: usize, bound: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_gens, 0..=max_rels).prop_flat_map(move |(g, r)| {
        let row = prop::collection::vec(-bound..=bound, g);
        (Just(g), prop::collection::vec(row, r))
    })
}

/// Over `Z/n` picks from the exhaustive list; this keeps inputs independent of the library.
pub fn random_finite_morphism(gen: &mut Gen, m: &FpModule, t: &FpModule) -> FpMorphism {
    let all = cofun_testkit::homs(&finite(m), &finite(t));
    let phi = gen.pick(&all);
    let rows: Vec<Vec<i64>> = phi.iter().map(|y| y.iter().map(|&x| x as i64).collect()).collect();
    let mat = if rows.is_empty() {
        IntMatrix::zeros(m.ring(), 0, t.gens())
    } else {
        IntMatrix::from_i64(m.ring(), t.gens(), &rows).unwrap()
    };
    FpMorphism::new(m, t, mat).unwrap()
}

/// A random combination of the generators of `Hom(M, N)`.
pub fn random_morphism(gen: &mut Gen, m: &FpModule, t: &FpModule) -> FpMorphism {
    let hom = hom_module(m, t).unwrap();
    let coords: Vec<Int> = (0..hom.module.gens()).map(|_| Int::from(gen.int(-3, 3))).collect();
    hom.decode(&coords)
}

/// Modules used as the corpus for the randomized functor and predicate tests.
pub fn random_module(gen: &mut Gen, r: &RingSpec, max_gens: usize, bound: i64) -> FpModule {
    let g = 1 + gen.below(max_gens);
    let rels = gen.below(g + 1);
    let rows = gen.sparse_matrix(rels, g, bound, 0.5);
    if rows.is_empty() {
        FpModule::free(r, g)
    } else {
        module(r, g, &rows)
    }
}

/// Z and a few cyclic probes, with the exhaustive oracle available when the ring is finite.
pub fn probes(r: &RingSpec) -> Vec<FpModule> {
    let mut out = vec![FpModule::free(r, 1)];
    match r.modulus() {
        None => {
            for d in [2, 3, 4, 6] {
                out.push(FpModule::cyclic(r, d));
            }
        }
        Some(n) => {
            let n = n.to_i64().unwrap();
            for d in 2..n {
                if n % d == 0 {
                    out.push(FpModule::cyclic(r, d));
                }
            }
        }
    }
    out
}
