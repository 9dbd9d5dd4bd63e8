//! Trace modules, the TTT cokernel criterion and the strict Mittag-Leffler comparison.

use num_traits::Zero;

use super::verdict::{
    ideal_inclusion, solve_multiple, Comparison, TraceCertificate, Truth, TttCertificate, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::exact::{extended_gcd, Int, IntMatrix, RingSpec};
use crate::fpmod::{
    dual_module, hom_module, is_projective, submodule, tensor_module, tensor_morphism, Decomposition, FpModule,
    FpMorphism,
};
use crate::functor::{qc_map, tensor_to_nat, ProbeFamily};

/// Generators, canonical generators pulled back, and pairwise sums of generators.
pub fn element_sample(m: &FpModule) -> Vec<Vec<Int>> {
    let ring = m.ring();
    let g = m.gens();
    let mut out: Vec<Vec<Int>> = Vec::new();
    let mut push = |v: Vec<Int>| {
        let v: Vec<Int> = v.into_iter().map(|c| ring.reduce(c)).collect();
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for i in 0..g {
        push(m.generator(i).coords);
    }
    let (_, _, from) = m.canonical();
    for k in 0..from.rows() {
        push(from.row(k).to_vec());
    }
    for i in 0..g {
        for j in i + 1..g {
            let mut v = m.generator(i).coords;
            v[j] += 1;
            push(v);
        }
    }
    out
}

/// `(a, c)` with `a = Σ c_k v_k` generating the ideal `(v_1, …, v_n)`.
fn bezout(ring: &RingSpec, values: &[Int]) -> (Int, Vec<Int>) {
    let mut g = Int::zero();
    let mut coeffs: Vec<Int> = Vec::with_capacity(values.len());
    for v in values {
        let (h, s, t) = extended_gcd(&g, v);
        for c in coeffs.iter_mut() {
            *c = ring.reduce(&*c * &s);
        }
        coeffs.push(ring.reduce(t));
        g = h;
    }
    (ring.reduce(g), coeffs)
}

/// `m ∈ M*(m) · M` for every sampled element, cross-checked against projectivity.
pub fn is_trace_module(m: &FpModule) -> Result<Verdict> {
    let ring = m.ring();
    let dual = dual_module(m)?;
    let functionals: Vec<Vec<Int>> = dual.generators().iter().map(|w| w.matrix().column(0)).collect();
    let sample = element_sample(m);
    let mut certificates = Vec::with_capacity(sample.len());
    let mut failure = None;
    for e in &sample {
        let values: Vec<Int> = functionals.iter().map(|w| super::verdict::dot(ring, e, w)).collect();
        let (scalar, coeffs) = bezout(ring, &values);
        let mut functional = vec![Int::zero(); m.gens()];
        for (w, c) in functionals.iter().zip(&coeffs) {
            for (acc, x) in functional.iter_mut().zip(w) {
                *acc = ring.add(acc, &ring.mul(c, x));
            }
        }
        match solve_multiple(m, &scalar, e) {
            Some((x, y)) => certificates.push(TraceCertificate { element: e.clone(), functional, scalar, x, y }),
            None => {
                failure = Some((e.clone(), ring.ideal_generator(&scalar)));
                break;
            }
        }
    }
    let oracle = is_projective(m)?;
    let (truth, witness) = match failure {
        None => (Truth::True, Witness::TraceCertificates { module: m.clone(), certificates }),
        Some((element, trace_generator)) => {
            (Truth::False, Witness::TraceFailure { module: m.clone(), element, trace_generator })
        }
    };
    if (truth == Truth::True) != oracle {
        return Err(Error::Inconsistent(format!("trace test says {truth}, projectivity says {oracle}")));
    }
    Ok(Verdict {
        predicate: "trace",
        truth,
        witness,
        sample: sample.len(),
        probes: 0,
        bound: None,
        oracle_agrees: Some(true),
    })
}

/// For each sampled `m`: the image of `m̃_R` is the trace ideal `I`, and `m̃`
/// factors through `qc(I)` exactly when `m ⊗ 1` lifts to `M ⊗ I`.
pub fn ttt_cokernel_check(m: &FpModule) -> Result<Verdict> {
    let ring = m.ring();
    let r = FpModule::free(ring, 1);
    let probes = ProbeFamily::for_modules(ring, &[m]);
    let sample = element_sample(m);
    let mut certificates = Vec::with_capacity(sample.len());
    let mut failure = None;
    for e in &sample {
        let eta = tensor_to_nat(m, &r, e)?;
        let at_r = eta.component(&r)?;
        let d = (0..at_r.source().gens())
            .flat_map(|k| at_r.matrix().row(k).to_vec())
            .fold(Int::zero(), |acc, v| ring.ideal_sum(&acc, &v));
        let (incl, ideal) = ideal_inclusion(m, &d);
        let (_, _, map) = tensor_morphism(&FpMorphism::identity(m), &incl)?;
        match map.lift(e) {
            Some(lifted) => {
                let factor = tensor_to_nat(m, &ideal, &lifted)?;
                let composite = factor.then(&qc_map(&incl)?)?;
                for s in &probes.modules {
                    if !composite.component(s)?.equals(&eta.component(s)?) {
                        return Err(Error::Inconsistent("factorization differs from m̃ on a probe".into()));
                    }
                }
                certificates.push(TttCertificate { element: e.clone(), ideal_generator: d, lifted });
            }
            None => {
                failure = Some((e.clone(), d));
                break;
            }
        }
    }
    let (truth, witness) = match failure {
        None => (Truth::True, Witness::TttCertificates { module: m.clone(), certificates }),
        Some((element, ideal_generator)) => {
            (Truth::False, Witness::TttFailure { module: m.clone(), element, ideal_generator })
        }
    };
    let trace = is_trace_module(m)?;
    if trace.truth != truth {
        return Err(Error::Inconsistent("cokernel criterion disagrees with the trace test".into()));
    }
    Ok(Verdict {
        predicate: "ttt",
        truth,
        witness,
        sample: sample.len(),
        probes: probes.modules.len(),
        bound: None,
        oracle_agrees: Some(true),
    })
}

/// Images `M'_i = Im[M* -> M_i*]` for the prefix submodules `M_i = ⟨m_1, …, m_i⟩`.
pub fn dual_image_stages(m: &FpModule) -> Result<Vec<Decomposition>> {
    let ring = m.ring();
    let dual = dual_module(m)?;
    let mut stages = Vec::with_capacity(m.gens());
    for i in 1..=m.gens() {
        let rows: Vec<usize> = (0..i).collect();
        let sub = submodule(m, &IntMatrix::identity(ring, m.gens()).select_rows(&rows));
        let dual_i = dual_module(&sub.module)?;
        let restrict = dual.induced_map(&dual_i, |w| sub.inclusion.then(w))?;
        stages.push(restrict.image().module.decompose());
    }
    Ok(stages)
}

/// `N ⊗ M -> Hom(M*, N)`, `n ⊗ m ↦ (w ↦ w(m) n)`.
pub fn strict_ml_comparison(m: &FpModule, n: &FpModule) -> Result<FpMorphism> {
    let ring = m.ring();
    let dual = dual_module(m)?;
    let functionals = dual.generators();
    let t = tensor_module(m, n)?;
    let h = hom_module(&dual.module, n)?;
    let mut rows = Vec::with_capacity(t.gens());
    for i in 0..m.gens() {
        for j in 0..n.gens() {
            let images: Vec<Vec<Int>> = functionals
                .iter()
                .map(|w| {
                    let c = w.matrix().get(i, 0).clone();
                    let mut v = vec![Int::zero(); n.gens()];
                    v[j] = c;
                    v
                })
                .collect();
            let phi = FpMorphism::new(&dual.module, n, IntMatrix::from_rows(ring, n.gens(), images)?)?;
            rows.push(h.encode(&phi)?);
        }
    }
    FpMorphism::new(&t, &h.module, IntMatrix::from_rows(ring, h.module.gens(), rows)?)
}

/// `M` is strict Mittag-Leffler when `N ⊗ M -> colim Hom(M'_i, N)` is an
/// isomorphism; for finitely generated `M` the colimit is `Hom(M*, N)`.
pub fn strict_ml_verdict(m: &FpModule) -> Result<Verdict> {
    let probes = ProbeFamily::for_modules(m.ring(), &[m]);
    strict_ml_verdict_on(m, &probes)
}

pub fn strict_ml_verdict_on(m: &FpModule, probes: &ProbeFamily) -> Result<Verdict> {
    let mut comparisons = Vec::with_capacity(probes.modules.len());
    let mut iso = true;
    for s in &probes.modules {
        let map = strict_ml_comparison(m, s)?;
        let inverse = map.inverse().filter(|_| map.is_surjective());
        if inverse.is_none() {
            iso = false;
            comparisons = vec![Comparison { probe: s.clone(), map, inverse }];
            break;
        }
        comparisons.push(Comparison { probe: s.clone(), map, inverse });
    }
    let truth = if iso { Truth::True } else { Truth::False };
    let trace = is_trace_module(m)?;
    if trace.truth != truth {
        return Err(Error::Inconsistent("strict Mittag-Leffler comparison disagrees with the trace test".into()));
    }
    Ok(Verdict {
        predicate: "strict_ml",
        truth,
        witness: Witness::StrictMl { module: m.clone(), comparisons },
        sample: m.gens(),
        probes: probes.modules.len(),
        bound: None,
        oracle_agrees: Some(true),
    })
}
