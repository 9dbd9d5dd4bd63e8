//! Acceptance run: one PASS/FAIL line per criterion, exit status nonzero on any failure.
//!
//! Every threshold below is pinned here; seeds are fixed so reruns are exact.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cofun_core::exact::{smith_normal_form, Int, IntMatrix, RingSpec};
use cofun_core::fpmod::{hom_module, is_projective, tensor_module, FpModule, FpMorphism};
use cofun_core::functor::{
    hom_functor, nat_cokernel, nat_kernel, nat_to_tensor, qc, qc_map, scheme, scheme_map, tensor_to_nat,
    CoherentFunctor, NatTransformation, ProbeFamily,
};
use cofun_core::mllab::{
    chain_scheme_detection, finite_free_summands, is_trace_module, kaplansky_filtration, locally_projective_verdict,
    strict_ml_verdict, telescope_split, ttt_cokernel_check, Decomposed, Telescope, Truth, Witness,
};
use cofun_testkit::{
    cyclic_profile, hom_profile, homs, invariant_factors, morphism_profiles, tensor_profile, FiniteQuotient, Gen,
};
use num_traits::{Signed, ToPrimitive, Zero};

const SNF_CASES: usize = 500;
const SNF_MAX_DIM: usize = 6;
const SNF_ENTRY_BOUND: i64 = 50;
const SNF_TIME_LIMIT: Duration = Duration::from_secs(5);

const ORACLE_CASES: usize = 200;
const ORACLE_MAX_N: u64 = 6;
const ORACLE_MAX_GENS: usize = 2;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(30);

const ROUND_TRIP_CASES: usize = 100;
const REFLEXIVE_CASES: usize = 50;
const ABELIAN_CASES: usize = 100;

const CLUSTER_CASES: usize = 100;
const CLUSTER_MAX_RANK: usize = 3;
const CLUSTER_MAX_FACTOR: i64 = 12;
const CLUSTER_TIME_LIMIT: Duration = Duration::from_secs(60);

const TELESCOPE_CASES: usize = 50;
const TELESCOPE_MAX_BOUND: usize = 8;
const KAPLANSKY_CASES: usize = 20;
const KAPLANSKY_MAX_BLOCKS: usize = 4;
const DETERMINISM_MIN_FIXTURES: usize = 10;
const GALLERY: [&str; 3] = ["trace_failure.cofun", "rational_telescope.cofun", "purity_failure.cofun"];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn ring(n: u64) -> RingSpec {
    if n == 0 {
        RingSpec::Integers
    } else {
        RingSpec::modulo(n).unwrap()
    }
}

fn modulus(r: &RingSpec) -> u64 {
    r.modulus().map(|n| n.to_u64().unwrap()).unwrap_or(0)
}

fn raw(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

fn module(r: &RingSpec, gens: usize, rows: &[Vec<i64>]) -> FpModule {
    if rows.is_empty() {
        FpModule::free(r, gens)
    } else {
        FpModule::new(r, gens, IntMatrix::from_i64(r, gens, rows).unwrap()).unwrap()
    }
}

fn mat(r: &RingSpec, cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
    if rows.is_empty() {
        IntMatrix::zeros(r, 0, cols)
    } else {
        IntMatrix::from_i64(r, cols, rows).unwrap()
    }
}

fn finite(m: &FpModule) -> FiniteQuotient {
    FiniteQuotient::new(modulus(m.ring()), m.gens(), &raw(m.relations()))
}

fn profile(m: &FpModule) -> Vec<usize> {
    let d = m.decompose();
    let factors: Vec<u64> = d.invariant_factors.iter().map(|x| x.to_u64().unwrap()).collect();
    cyclic_profile(modulus(m.ring()), d.rank, &factors)
}

fn random_module(gen: &mut Gen, r: &RingSpec, max_gens: usize, bound: i64) -> FpModule {
    let g = 1 + gen.below(max_gens);
    let rels = gen.below(g + 1);
    module(r, g, &gen.sparse_matrix(rels, g, bound, 0.5))
}

fn random_morphism(gen: &mut Gen, m: &FpModule, t: &FpModule) -> FpMorphism {
    let hom = hom_module(m, t).unwrap();
    let coords: Vec<Int> = (0..hom.module.gens()).map(|_| Int::from(gen.int(-3, 3))).collect();
    hom.decode(&coords)
}

fn probes(r: &RingSpec) -> Vec<FpModule> {
    let mut out = vec![FpModule::free(r, 1)];
    match modulus(r) {
        0 => out.extend([2, 3, 4, 6].map(|d| FpModule::cyclic(r, d))),
        n => out.extend((2..n).filter(|d| n % d == 0).map(|d| FpModule::cyclic(r, d as i64))),
    }
    out
}

fn smith_suite() -> Outcome {
    let z = RingSpec::Integers;
    let mut gen = Gen::new(0x5eed_0001);
    let inputs: Vec<(usize, Vec<Vec<i64>>)> = (0..SNF_CASES)
        .map(|_| {
            let (r, c) = (1 + gen.below(SNF_MAX_DIM), 1 + gen.below(SNF_MAX_DIM));
            (c, gen.matrix(r, c, SNF_ENTRY_BOUND))
        })
        .collect();
    let start = Instant::now();
    let mut bad = 0;
    let mut diagonals = Vec::with_capacity(SNF_CASES);
    for (cols, rows) in &inputs {
        let a = IntMatrix::from_i64(&z, *cols, rows).unwrap();
        let s = smith_normal_form(&a);
        let ok = s.u.mul(&a).unwrap().mul(&s.v).unwrap() == s.d
            && s.u.determinant().unwrap().abs() == Int::from(1)
            && s.v.determinant().unwrap().abs() == Int::from(1)
            && (0..s.d.rows()).all(|i| (0..s.d.cols()).all(|j| i == j || s.d.get(i, j).is_zero()))
            && s.diagonal().windows(2).all(|w| z.divides(&w[0], &w[1]));
        bad += usize::from(!ok);
        diagonals.push(s.diagonal());
    }
    let elapsed = start.elapsed();
    // orthogonal check outside the timed region: determinantal divisors
    let mismatches = inputs
        .iter()
        .zip(&diagonals)
        .filter(|((cols, rows), diag)| {
            let got: Vec<i128> = diag.iter().filter(|d| !d.is_zero()).map(|d| d.abs().to_i128().unwrap()).collect();
            got != invariant_factors(rows, *cols)
        })
        .count();
    outcome(
        bad == 0 && mismatches == 0 && elapsed < SNF_TIME_LIMIT,
        format!(
            "{SNF_CASES} matrices (dims <= {SNF_MAX_DIM}, |a| <= {SNF_ENTRY_BOUND}): {bad} identity failures, {mismatches} minors mismatches, {:.2?} (limit {SNF_TIME_LIMIT:?})",
            elapsed
        ),
    )
}

fn oracle_suite() -> Outcome {
    let mut gen = Gen::new(0x5eed_0002);
    let start = Instant::now();
    let mut failures = Vec::new();
    for case in 0..ORACLE_CASES {
        let n = 2 + gen.below(ORACLE_MAX_N as usize - 1) as u64;
        let r = ring(n);
        let pick = |gen: &mut Gen| {
            let g = 1 + gen.below(ORACLE_MAX_GENS);
            let rels = gen.below(3);
            module(
                &r,
                g,
                &gen.matrix(rels, g, n as i64 - 1)
                    .iter()
                    .map(|row| row.iter().map(|x| x.rem_euclid(n as i64)).collect())
                    .collect::<Vec<_>>(),
            )
        };
        let m = pick(&mut gen);
        let t = pick(&mut gen);
        let (fm, ft) = (finite(&m), finite(&t));
        let all = homs(&fm, &ft);
        let phi = gen.pick(&all).clone();
        let rows: Vec<Vec<i64>> = phi.iter().map(|y| y.iter().map(|&x| x as i64).collect()).collect();
        let f = FpMorphism::new(&m, &t, mat(&r, t.gens(), &rows)).unwrap();
        let o = morphism_profiles(&fm, &ft, &rows);
        let checks = [
            ("hom", profile(&hom_module(&m, &t).unwrap().module) == hom_profile(&fm, &ft)),
            ("tensor", profile(&tensor_module(&m, &t).unwrap()) == tensor_profile(&fm, &ft)),
            ("kernel", profile(&f.kernel().0) == o.kernel),
            ("image", profile(&f.image().module) == o.image),
            ("cokernel", profile(&f.cokernel().0) == o.cokernel),
        ];
        failures.extend(checks.iter().filter(|c| !c.1).map(|c| format!("#{case} {}", c.0)));
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < ORACLE_TIME_LIMIT,
        format!(
            "{ORACLE_CASES} instances over Z/n (n <= {ORACLE_MAX_N}, g <= {ORACLE_MAX_GENS}), 5 constructions each: {} disagreements {:?}, {:.2?} (limit {ORACLE_TIME_LIMIT:?})",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            elapsed
        ),
    )
}

fn round_trip_suite() -> Outcome {
    let mut gen = Gen::new(0x5eed_0003);
    let (mut bad, mut torsion) = (0, 0);
    for _ in 0..ROUND_TRIP_CASES {
        let r = ring(*gen.pick(&[0, 0, 4, 6]));
        let m = random_module(&mut gen, &r, 2, 4);
        let m2 = random_module(&mut gen, &r, 2, 4);
        torsion +=
            usize::from(!m.decompose().invariant_factors.is_empty() || !m2.decompose().invariant_factors.is_empty());
        let tensor = tensor_module(&m, &m2).unwrap();
        let t: Vec<Int> = (0..tensor.gens()).map(|_| Int::from(gen.int(-3, 3))).collect();
        let forward = tensor.elements_equal(&nat_to_tensor(&tensor_to_nat(&m, &m2, &t).unwrap()).unwrap(), &t);
        let hom = hom_functor(&scheme(&m), &qc(&m2)).unwrap();
        let coords: Vec<Int> = (0..hom.module.gens()).map(|_| Int::from(gen.int(-3, 3))).collect();
        let eta = hom.decode(&coords).unwrap();
        let back = tensor_to_nat(&m, &m2, &nat_to_tensor(&eta).unwrap()).unwrap().equals(&eta).unwrap();
        bad += usize::from(!(forward && back && hom.module.is_isomorphic(&tensor)));
    }
    outcome(
        bad == 0 && torsion > 0,
        format!("{ROUND_TRIP_CASES} triples ({torsion} with torsion): {bad} failures, exact equality"),
    )
}

fn reflexive_suite() -> Outcome {
    let mut gen = Gen::new(0x5eed_0004);
    let (mut bad, mut evaluations) = (0, 0);
    for _ in 0..REFLEXIVE_CASES {
        let r = ring(*gen.pick(&[0, 0, 4, 6, 2, 3]));
        let m = random_module(&mut gen, &r, 3, 5);
        let dd = qc(&m).dual_presentation().unwrap().dual_presentation().unwrap();
        for s in probes(&r) {
            evaluations += 1;
            bad += usize::from(!dd.evaluate(&s).unwrap().value.is_isomorphic(&tensor_module(&m, &s).unwrap()));
        }
    }
    outcome(bad == 0, format!("{REFLEXIVE_CASES} modules, {evaluations} probe evaluations: {bad} mismatches"))
}

fn random_functor(gen: &mut Gen, r: &RingSpec) -> CoherentFunctor {
    let a = random_module(gen, r, 2, 4);
    match gen.below(3) {
        0 => qc(&a),
        1 => scheme(&a),
        _ => {
            let b = random_module(gen, r, 2, 4);
            CoherentFunctor::new(random_morphism(gen, &a, &b))
        }
    }
}

fn random_nat(gen: &mut Gen, r: &RingSpec) -> NatTransformation {
    match gen.below(3) {
        0 => {
            let (a, b) = (random_module(gen, r, 2, 4), random_module(gen, r, 2, 4));
            qc_map(&random_morphism(gen, &a, &b)).unwrap()
        }
        1 => {
            let (a, b) = (random_module(gen, r, 2, 4), random_module(gen, r, 2, 4));
            scheme_map(&random_morphism(gen, &a, &b)).unwrap()
        }
        _ => {
            let f = random_functor(gen, r);
            let g = random_functor(gen, r);
            let hom = hom_functor(&f, &g).unwrap();
            let coords: Vec<Int> = (0..hom.module.gens()).map(|_| Int::from(gen.int(-2, 2))).collect();
            hom.decode(&coords).unwrap()
        }
    }
}

fn abelian_suite() -> Outcome {
    let mut gen = Gen::new(0x5eed_0005);
    let (mut bad, mut evaluations) = (0, 0);
    for _ in 0..ABELIAN_CASES {
        let r = ring(*gen.pick(&[0, 0, 4, 6, 2, 3]));
        let eta = random_nat(&mut gen, &r);
        let k = nat_kernel(&eta).unwrap();
        let c = nat_cokernel(&eta).unwrap();
        for s in probes(&r) {
            evaluations += 1;
            let comp = eta.component(&s).unwrap();
            let ok = k.functor.evaluate(&s).unwrap().value.is_isomorphic(&comp.kernel().0)
                && c.functor.evaluate(&s).unwrap().value.is_isomorphic(&comp.cokernel().0);
            bad += usize::from(!ok);
        }
    }
    outcome(bad == 0, format!("{ABELIAN_CASES} transformations, {evaluations} probe evaluations: {bad} mismatches"))
}

fn cluster_suite() -> Outcome {
    let z = RingSpec::Integers;
    let mut gen = Gen::new(0x5eed_0006);
    let corpus: Vec<FpModule> = (0..CLUSTER_CASES)
        .map(|i| {
            let rank = i % (CLUSTER_MAX_RANK + 1);
            let len = gen.below(3);
            let chain = gen.divisor_chain(len, CLUSTER_MAX_FACTOR);
            let (g, rows) = gen.disguised_presentation(rank, &chain);
            if g == 0 {
                FpModule::zero(&z)
            } else {
                module(&z, g, &rows)
            }
        })
        .collect();
    let start = Instant::now();
    let (mut disagreements, mut unreplayed, mut falses) = (0, 0, 0);
    for m in &corpus {
        let free = invariant_factors(&raw(m.relations()), m.gens()).iter().all(|&d| d == 1);
        let verdicts = [
            is_trace_module(m).unwrap(),
            ttt_cokernel_check(m).unwrap(),
            strict_ml_verdict(m).unwrap(),
            locally_projective_verdict(m).unwrap(),
            finite_free_summands(m).unwrap().verdict,
        ];
        disagreements += usize::from(is_projective(m).unwrap() != free);
        for v in &verdicts {
            disagreements += usize::from(v.holds() != free);
            if v.truth == Truth::False {
                falses += 1;
                unreplayed += usize::from(!v.replay().unwrap_or(false));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagreements == 0 && unreplayed == 0 && falses > 0 && elapsed < CLUSTER_TIME_LIMIT,
        format!(
            "{CLUSTER_CASES} Z-modules (rank 0..={CLUSTER_MAX_RANK}, factors <= {CLUSTER_MAX_FACTOR}), 5 predicates: {disagreements} disagreements with the minors oracle, {falses} false verdicts of which {unreplayed} fail replay, {:.2?} (limit {CLUSTER_TIME_LIMIT:?})",
            elapsed
        ),
    )
}

fn telescope_suite() -> Outcome {
    let mut gen = Gen::new(0x5eed_0007);
    let mut bad = 0;
    for _ in 0..TELESCOPE_CASES {
        let r = ring(*gen.pick(&[0, 0, 0, 6, 4]));
        let bound = 1 + gen.below(TELESCOPE_MAX_BOUND);
        let first = random_module(&mut gen, &r, 2, 4);
        let mut stage = first.clone();
        let mut maps = Vec::new();
        for _ in 0..bound {
            let next = random_module(&mut gen, &r, 2, 4);
            maps.push(random_morphism(&mut gen, &stage, &next));
            stage = next;
        }
        let t = Telescope::new(first, maps).unwrap();
        let s = telescope_split(&t, bound).unwrap();
        let exact = s.f.then(&s.r).unwrap().equals(&FpMorphism::identity(&s.sum));
        bad += usize::from(!(exact && s.checks.all()));
    }

    let z = RingSpec::Integers;
    let family = ProbeFamily::new((2..=5).map(|p| FpModule::cyclic(&z, p)).collect(), vec![], vec![]).unwrap();
    let q = Telescope::scalars(&z, |i| Int::from(i as i64 + 2));
    let qd = chain_scheme_detection(&q, &family, 4).unwrap().verdict;
    let q_ok =
        qd.truth == Truth::False && matches!(qd.witness, Witness::ChainKernel { .. }) && qd.replay().unwrap_or(false);
    let c = Telescope::constant(&FpModule::free(&z, 2));
    let c_ok =
        (0..=TELESCOPE_MAX_BOUND).all(|k| chain_scheme_detection(&c, &family, k).unwrap().verdict.truth == Truth::True);
    outcome(
        bad == 0 && q_ok && c_ok,
        format!(
            "{TELESCOPE_CASES} chains at K <= {TELESCOPE_MAX_BOUND}: {bad} without r.f = id; rational model fails with probe witness: {q_ok}; constant free telescope passes: {c_ok}"
        ),
    )
}

fn kaplansky_suite() -> Outcome {
    let z = RingSpec::Integers;
    let mut gen = Gen::new(0x5eed_0008);
    let (mut bad, mut rejected, mut sizes) = (0, 0, Vec::new());
    for _ in 0..KAPLANSKY_CASES {
        let free = 1 + gen.below(3);
        let torsion = gen.below(KAPLANSKY_MAX_BLOCKS + 1 - free);
        let width = free + torsion;
        let mut blocks: Vec<FpModule> = (0..free).map(|_| FpModule::free(&z, 1)).collect();
        blocks.extend((0..torsion).map(|_| FpModule::cyclic(&z, *gen.pick(&[2, 3, 4]))));
        let p = gen.unimodular(free, 4);
        let split = gen.below(free + 1);
        let pad = |row: &[i64]| [row.to_vec(), vec![0; torsion]].concat();
        let unit = |i: usize| (0..width).map(|j| i64::from(j == free + i)).collect::<Vec<_>>();
        let mut mg: Vec<Vec<i64>> = p[..split].iter().map(|r| pad(r)).collect();
        let mut m2g: Vec<Vec<i64>> = p[split..].iter().map(|r| pad(r)).collect();
        for i in 0..torsion {
            if gen.chance(0.5) {
                mg.push(unit(i))
            } else {
                m2g.push(unit(i))
            }
        }
        match Decomposed::from_generators(blocks, &mat(&z, width, &mg), &mat(&z, width, &m2g)) {
            Ok(d) => {
                let f = kaplansky_filtration(&d).unwrap();
                bad += usize::from(!f.replay().map(|c| c.all()).unwrap_or(false));
                sizes.push(width);
            }
            Err(_) => rejected += 1,
        }
    }
    outcome(
        bad == 0 && rejected == 0 && sizes.len() >= KAPLANSKY_CASES,
        format!(
            "{} decompositions with |I| <= {KAPLANSKY_MAX_BLOCKS} (largest {}): {bad} filtrations fail conditions (1)-(4), {rejected} rejected",
            sizes.len(),
            sizes.iter().max().unwrap_or(&0)
        ),
    )
}

fn determinism_suite() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut fixtures: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    fixtures.sort();
    let names: Vec<String> = fixtures.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    let gallery = GALLERY.iter().all(|g| names.iter().any(|n| n == g));
    let out = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let mut failed_runs = 0;
    for (path, name) in fixtures.iter().zip(&names) {
        let mut reports = Vec::new();
        // one sequential run and two parallel ones
        for (i, threads) in ["1", "4", "0"].iter().enumerate() {
            let json = out.path().join(format!("{name}.{i}.json"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_cofun"));
            cmd.arg("check").arg(path).arg("--json").arg(&json);
            if *threads != "0" {
                cmd.env("RAYON_NUM_THREADS", threads);
            }
            let status = cmd.output().unwrap().status;
            failed_runs += usize::from(!status.success());
            reports.push(std::fs::read(&json).unwrap_or_default());
        }
        if reports.windows(2).any(|w| w[0] != w[1] || w[0].is_empty()) {
            differing.push(name.clone());
        }
    }
    outcome(
        fixtures.len() >= DETERMINISM_MIN_FIXTURES && gallery && differing.is_empty() && failed_runs == 0,
        format!(
            "{} fixtures x 3 runs (gallery present: {gallery}): {} differ {:?}, {failed_runs} nonzero exits",
            fixtures.len(),
            differing.len(),
            differing
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Smith normal form suite", smith_suite),
        ("brute-force oracle equivalence over Z/n", oracle_suite),
        ("tensor/transformation round trip", round_trip_suite),
        ("reflexivity of qc(M)", reflexive_suite),
        ("pointwise kernels and cokernels", abelian_suite),
        ("equivalence cluster over Z", cluster_suite),
        ("telescope splitting and chain detection", telescope_suite),
        ("finite Kaplansky filtrations", kaplansky_suite),
        ("CLI determinism", determinism_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.passed);
        println!("{} [{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
