//! Local projectivity, locally split retractions and free summands.

use super::trace::is_trace_module;
use super::verdict::{Truth, Verdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, RingSpec};
use crate::fpmod::{dual_module, free_cover, hom_module, purity, FpModule, FpMorphism};

/// Some `s: M -> P` with `π ∘ s ∘ f = f`, by a linear solve in `Hom(M, P)`.
pub fn find_section(pi: &FpMorphism, f: &FpMorphism) -> Result<Option<FpMorphism>> {
    let m = pi.target();
    if !f.target().same_presentation(m) {
        return Err(Error::ShapeMismatch("f must map into the target of π".into()));
    }
    let hom_mp = hom_module(m, pi.source())?;
    let hom_fm = hom_module(f.source(), m)?;
    let op = hom_mp.induced_map(&hom_fm, |s| f.then(s)?.then(pi))?;
    let goal = hom_fm.encode(f)?;
    Ok(op.lift(&goal).map(|c| hom_mp.decode(&c)))
}

/// The factorization `f = π ∘ s ∘ f` for one pair, or the pair as a witness that none exists.
pub fn locally_projective_factorization(pi: &FpMorphism, f: &FpMorphism) -> Result<Verdict> {
    if !pi.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let (truth, witness) = match find_section(pi, f)? {
        Some(s) => (Truth::True, Witness::Section { pi: pi.clone(), f: f.clone(), s }),
        None => (Truth::False, Witness::NoSection { pi: pi.clone(), f: f.clone() }),
    };
    Ok(Verdict {
        predicate: "locally_projective_pair",
        truth,
        witness,
        sample: 1,
        probes: 0,
        bound: None,
        oracle_agrees: None,
    })
}

/// Deterministic `(π, f)` pairs: free covers onto `M` (original and canonical
/// generators) against the free cover and each single generator.
pub fn factorization_pairs(m: &FpModule) -> Vec<(FpMorphism, FpMorphism)> {
    let ring = m.ring();
    let cover = free_cover(m);
    let (_, _, from) = m.canonical();
    let canon_free = FpModule::free(ring, from.rows());
    let canon_cover = FpMorphism::new(&canon_free, m, from).expect("canonical generators lie in M");
    let mut fs = vec![cover.clone(), canon_cover.clone()];
    let r = FpModule::free(ring, 1);
    for i in 0..m.gens() {
        let g = FpMorphism::new(&r, m, IntMatrix::row_vector(ring, m.generator(i).coords)).expect("generator");
        fs.push(g);
    }
    let mut out = Vec::new();
    for pi in [&cover, &canon_cover] {
        for f in &fs {
            out.push((pi.clone(), f.clone()));
        }
    }
    out
}

/// Local projectivity over the sampled pairs, cross-checked against the trace test.
pub fn locally_projective_verdict(m: &FpModule) -> Result<Verdict> {
    let pairs = factorization_pairs(m);
    let mut sections = Vec::new();
    for (pi, f) in &pairs {
        let v = locally_projective_factorization(pi, f)?;
        if v.truth != Truth::True {
            let trace = is_trace_module(m)?;
            if trace.holds() {
                return Err(Error::Inconsistent("trace module without a local section".into()));
            }
            return Ok(Verdict {
                predicate: "locally_projective",
                sample: pairs.len(),
                oracle_agrees: Some(true),
                ..v
            });
        }
        sections.push(v);
    }
    let trace = is_trace_module(m)?;
    if !trace.holds() {
        return Err(Error::Inconsistent("local sections found for a non-trace module".into()));
    }
    let witness = sections.pop().map(|v| v.witness).unwrap_or(Witness::None);
    Ok(Verdict {
        predicate: "locally_projective",
        truth: Truth::True,
        witness,
        sample: pairs.len(),
        probes: 0,
        bound: None,
        oracle_agrees: Some(true),
    })
}

/// `r: M -> N` fixing the rows of `generators` (elements of `N`), for a pure
/// inclusion `i: N -> M` into a trace module.
pub fn locally_split_retraction(i: &FpMorphism, generators: &IntMatrix) -> Result<Verdict> {
    let n = i.source();
    let m = i.target();
    if generators.cols() != n.gens() {
        return Err(Error::DimensionMismatch("generators must be elements of N".into()));
    }
    let p = purity(i)?;
    if !p.pure {
        let (probe, element) = p.obstruction.expect("impure inclusions carry an obstruction");
        return Ok(Verdict {
            predicate: "locally_split",
            truth: Truth::False,
            witness: Witness::NotPure { inclusion: i.clone(), probe, element },
            sample: generators.rows(),
            probes: p.test_modules.len(),
            bound: None,
            oracle_agrees: None,
        });
    }
    let trace = is_trace_module(m)?;
    if !trace.holds() {
        return Ok(Verdict {
            predicate: "locally_split",
            truth: Truth::False,
            sample: generators.rows(),
            witness: Witness::Nested(Box::new(trace)),
            probes: 0,
            bound: None,
            oracle_agrees: None,
        });
    }

    let ring = m.ring();
    let k = generators.rows();
    let images = generators.mul(i.matrix())?;
    let hom = hom_module(m, n)?;
    let power = n.power(k);
    let mut rows = Vec::with_capacity(hom.module.gens());
    for r in hom.generators() {
        let mut row = Vec::with_capacity(power.module.gens());
        for j in 0..k {
            row.extend(r.apply(images.row(j)));
        }
        rows.push(row);
    }
    let eval = FpMorphism::new(&hom.module, &power.module, IntMatrix::from_rows(ring, power.module.gens(), rows)?)?;
    let goal: Vec<Int> = generators.entries().to_vec();
    let c = eval
        .lift(&goal)
        .ok_or_else(|| Error::Inconsistent("pure inclusion into a trace module without a local retraction".into()))?;
    let r = hom.decode(&c);
    Ok(Verdict {
        predicate: "locally_split",
        truth: Truth::True,
        witness: Witness::Retraction { inclusion: i.clone(), generators: generators.clone(), r },
        sample: k,
        probes: p.test_modules.len(),
        bound: None,
        oracle_agrees: None,
    })
}

/// `M -> R^k`, `m ↦ (φ_1(m), …, φ_k(m))` for generators `φ_i` of `M*`; injective
/// exactly when `M` embeds in a finite free module.
pub fn free_embedding(m: &FpModule) -> Result<Verdict> {
    let ring = m.ring();
    let dual = dual_module(m)?;
    let k = dual.module.gens();
    let cols: Vec<IntMatrix> = dual.generators().iter().map(|phi| phi.matrix().clone()).collect();
    let mut matrix = IntMatrix::zeros(ring, m.gens(), 0);
    for c in &cols {
        matrix = matrix.hstack(c)?;
    }
    let map = FpMorphism::new(m, &FpModule::free(ring, k), matrix)?;
    let (kernel, inclusion) = map.kernel();
    let nonzero = (0..kernel.gens()).find(|&i| !kernel.is_zero_element(&kernel.generator(i).coords));
    let (truth, witness) = match nonzero {
        None => (Truth::True, Witness::Monomorphism { map }),
        Some(i) => {
            let element = inclusion.apply(&kernel.generator(i).coords);
            (Truth::False, Witness::Kernel { map, element })
        }
    };
    Ok(Verdict { predicate: "free_embedding", truth, witness, sample: k, probes: 0, bound: None, oracle_agrees: None })
}

/// Free split submodules `⟨e_1, …, e_k⟩` of `M` from its canonical free basis,
/// and whether their union generates `M`.
#[derive(Clone, Debug)]
pub struct FreeSummands {
    pub summands: Vec<(FpMorphism, FpMorphism)>,
    pub verdict: Verdict,
}

pub fn finite_free_summands(m: &FpModule) -> Result<FreeSummands> {
    let ring = m.ring();
    if *ring != RingSpec::Integers {
        return Err(Error::Unsupported("free summand enumeration is implemented over Z".into()));
    }
    let d = m.decompose();
    let (_, to, from) = m.canonical();
    let t = d.invariant_factors.len();
    let mut summands = Vec::with_capacity(d.rank + 1);
    for k in 0..=d.rank {
        let idx: Vec<usize> = (t..t + k).collect();
        let l = FpModule::free(ring, k);
        let incl = FpMorphism::new(&l, m, from.select_rows(&idx))?;
        let retr = FpMorphism::new(m, &l, to.select_columns(&idx))?;
        summands.push((incl, retr));
    }
    let (union, _) = summands.last().cloned().expect("k = 0 is always present");
    let missed = (0..m.gens()).find(|&g| union.lift(&m.generator(g).coords).is_none());
    let (truth, witness) = match missed {
        None => (Truth::True, Witness::FreeSummands { module: m.clone(), summands: summands.clone() }),
        Some(generator) => (Truth::False, Witness::MissedGenerator { union, generator }),
    };
    let verdict = Verdict {
        predicate: "free_summands",
        truth,
        witness,
        sample: summands.len(),
        probes: 0,
        bound: None,
        oracle_agrees: None,
    };
    Ok(FreeSummands { summands, verdict })
}
