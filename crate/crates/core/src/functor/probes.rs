//! Finite probe families and probe-relative exactness checks.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::coherent::{scheme, CoherentFunctor};
use super::nat::NatTransformation;
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, RingSpec};
use crate::fpmod::{is_exact_at, FpModule, FpMorphism};

/// A verified short exact sequence `0 -> A -i-> B -p-> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub i: FpMorphism,
    pub p: FpMorphism,
}

impl ShortExact {
    pub fn new(i: FpMorphism, p: FpMorphism) -> Result<Self> {
        if !i.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !p.is_surjective() {
            return Err(Error::NotExact("last map is not surjective".into()));
        }
        if !is_exact_at(&i, &p) {
            return Err(Error::NotExact("not exact in the middle".into()));
        }
        Ok(ShortExact { i, p })
    }

    /// `0 -> A -> A ⊕ C -> C -> 0`.
    pub fn split(a: &FpModule, c: &FpModule) -> Self {
        let ring = a.ring();
        let sum = FpModule::direct_sum(ring, &[a.clone(), c.clone()]);
        let i = FpMorphism::new(a, &sum.module, sum.injection_matrix(0)).expect("injection");
        let p = FpMorphism::new(&sum.module, c, sum.projection_matrix(1)).expect("projection");
        ShortExact { i, p }
    }
}

/// Finite stand-in for "every module": verdicts computed against it are
/// relative to these modules and sequences only.
#[derive(Clone, Debug)]
pub struct ProbeFamily {
    pub modules: Vec<FpModule>,
    pub sequences: Vec<ShortExact>,
    pub morphisms: Vec<FpMorphism>,
}

/// Largest invariant factor admitted into default probe families.
pub const DEFAULT_FACTOR_LIMIT: u32 = 12;

impl ProbeFamily {
    pub fn new(modules: Vec<FpModule>, sequences: Vec<ShortExact>, morphisms: Vec<FpMorphism>) -> Result<Self> {
        let checked = sequences.into_iter().map(|s| ShortExact::new(s.i, s.p)).collect::<Result<Vec<_>>>()?;
        Ok(ProbeFamily { modules, sequences: checked, morphisms })
    }

    /// `R`, `R/(d)` for every listed `d ≤ 12`, and `R ⊕ R/(p)` for the smallest such `d`
    /// (or the smallest prime available); sequences `0 -> R/(ann d) -d-> R -> R/(d) -> 0`
    /// and split sequences.
    pub fn standard(ring: &RingSpec, factors: &[Int]) -> Self {
        let limit = Int::from(DEFAULT_FACTOR_LIMIT);
        let mut ds: Vec<Int> = factors
            .iter()
            .map(|d| ring.ideal_generator(d))
            .filter(|d| !d.is_zero() && !ring.is_unit(d) && d <= &limit)
            .collect();
        ds.sort();
        ds.dedup();
        if ds.is_empty() {
            // Over a field there is no proper nonzero ideal to probe with.
            if let Some(p) = smallest_prime(ring).filter(|p| !ring.ideal_generator(p).is_zero()) {
                ds.push(p);
            }
        }

        let r = FpModule::free(ring, 1);
        let mut modules = vec![r.clone()];
        let mut sequences = Vec::new();
        let mut morphisms = Vec::new();
        for d in &ds {
            let c = FpModule::cyclic(ring, d.clone());
            let a = FpModule::cyclic(ring, ring.annihilator(d));
            let i =
                FpMorphism::new(&a, &r, IntMatrix::row_vector(ring, vec![d.clone()])).expect("d kills the annihilator");
            let p = FpMorphism::new(&r, &c, IntMatrix::identity(ring, 1)).expect("reduction");
            morphisms.push(p.clone());
            morphisms.push(FpMorphism::scalar(&r, d));
            sequences.push(ShortExact { i, p });
            sequences.push(ShortExact::split(&r, &c));
            modules.push(c);
        }
        let mixed = match ds.first() {
            Some(p) => FpModule::direct_sum(ring, &[r.clone(), FpModule::cyclic(ring, p.clone())]).module,
            None => FpModule::free(ring, 2),
        };
        modules.push(mixed);
        ProbeFamily::new(modules, sequences, morphisms).expect("standard sequences are exact")
    }

    /// Standard probes built from the invariant factors of the given modules.
    pub fn for_modules(ring: &RingSpec, modules: &[&FpModule]) -> Self {
        let factors: Vec<Int> = modules.iter().flat_map(|m| m.decompose().invariant_factors).collect();
        ProbeFamily::standard(ring, &factors)
    }

    pub fn for_functor(f: &CoherentFunctor) -> Self {
        ProbeFamily::for_modules(f.ring(), &[f.w(), f.v()])
    }

    /// Adds a module (and its split sequence with `R`) unless it is already a probe.
    pub fn with_module(mut self, m: FpModule) -> Self {
        if self.modules.iter().any(|p| p.same_presentation(&m)) {
            return self;
        }
        let r = FpModule::free(m.ring(), 1);
        self.sequences.push(ShortExact::split(&r, &m));
        self.modules.push(m);
        self
    }
}

fn smallest_prime(ring: &RingSpec) -> Option<Int> {
    match ring.modulus() {
        None => Some(Int::from(2)),
        Some(n) => {
            let mut p = Int::from(2);
            while &p * &p <= *n {
                if n.is_multiple_of(&p) {
                    return Some(p);
                }
                p += Int::one();
            }
            if n > &Int::one() {
                Some(n.clone())
            } else {
                None
            }
        }
    }
}

/// Exactness of `F` on one probe sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceExactness {
    pub index: usize,
    pub injective: bool,
    pub middle_exact: bool,
    pub surjective: bool,
}

/// Probe-relative exactness verdicts.
#[derive(Clone, Debug)]
pub struct ExactnessProfile {
    pub left_exact: bool,
    pub right_exact: bool,
    pub sequences: Vec<SequenceExactness>,
}

pub fn exactness_profile(f: &CoherentFunctor, probes: &ProbeFamily) -> Result<ExactnessProfile> {
    let mut sequences = Vec::with_capacity(probes.sequences.len());
    for (index, s) in probes.sequences.iter().enumerate() {
        let a = f.evaluate(s.i.source())?;
        let b = f.evaluate(s.i.target())?;
        let c = f.evaluate(s.p.target())?;
        let fi = a.map_to(&b, &s.i)?;
        let fp = b.map_to(&c, &s.p)?;
        sequences.push(SequenceExactness {
            index,
            injective: fi.is_injective(),
            middle_exact: is_exact_at(&fi, &fp),
            surjective: fp.is_surjective(),
        });
    }
    let left_exact = sequences.iter().all(|s| s.injective && s.middle_exact);
    let right_exact = sequences.iter().all(|s| s.middle_exact && s.surjective);
    Ok(ExactnessProfile { left_exact, right_exact, sequences })
}

/// `F -> scheme(F*(R))`, where `F*(R) = ker d`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub dual_at_ring: FpModule,
    pub functor: CoherentFunctor,
    pub canonical: NatTransformation,
}

pub fn sch_envelope(f: &CoherentFunctor) -> Result<Envelope> {
    let (k, incl) = f.presentation().kernel();
    let functor = scheme(&k);
    let v = FpMorphism::zero(functor.v(), f.v());
    let canonical = NatTransformation::new(f, &functor, incl, v)?;
    Ok(Envelope { dual_at_ring: k, functor, canonical })
}

/// A probe on which `F -> F_sch` fails to be injective.
#[derive(Clone, Debug)]
pub struct SmlWitness {
    pub probe_index: usize,
    pub probe: FpModule,
    /// Nonzero element of `F(S)` killed by the canonical map.
    pub element: Vec<Int>,
    /// A morphism `W -> S` representing it.
    pub representative: FpMorphism,
}

#[derive(Clone, Debug)]
pub struct SmlCheck {
    pub holds: bool,
    pub witness: Option<SmlWitness>,
}

pub fn sml_probe_check(f: &CoherentFunctor, probes: &ProbeFamily) -> Result<SmlCheck> {
    let env = sch_envelope(f)?;
    for (probe_index, s) in probes.modules.iter().enumerate() {
        let a = f.evaluate(s)?;
        let b = env.functor.evaluate(s)?;
        let c = env.canonical.component_between(&a, &b)?;
        let (k, incl) = c.kernel();
        if let Some(j) = (0..k.gens()).find(|&j| !a.value.is_zero_element(incl.matrix().row(j))) {
            let element = incl.matrix().row(j).to_vec();
            let representative = a.representative(&element);
            return Ok(SmlCheck {
                holds: false,
                witness: Some(SmlWitness { probe_index, probe: s.clone(), element, representative }),
            });
        }
    }
    Ok(SmlCheck { holds: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::super::coherent::qc;
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn standard_family_shapes() {
        let z = RingSpec::Integers;
        let p = ProbeFamily::standard(&z, &ints(&[2, 4, 30]));
        assert_eq!(p.modules.len(), 4);
        assert_eq!(p.sequences.len(), 4);
        let r6 = RingSpec::modulo(6).unwrap();
        let p = ProbeFamily::standard(&r6, &[]);
        assert_eq!(p.modules[1].decompose().invariant_factors, ints(&[2]));
        assert!(ProbeFamily::new(vec![], p.sequences.clone(), vec![]).is_ok());
    }

    #[test]
    fn bad_sequence_rejected() {
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        let i = FpMorphism::scalar(&r, &Int::from(2));
        let p = FpMorphism::new(&r, &FpModule::cyclic(&z, 4), IntMatrix::identity(&z, 1)).unwrap();
        assert!(matches!(ShortExact::new(i, p), Err(Error::NotExact(_))));
    }

    #[test]
    fn exactness_examples() {
        let z = RingSpec::Integers;
        let probes = ProbeFamily::standard(&z, &ints(&[2]));
        let e = exactness_profile(&scheme(&FpModule::cyclic(&z, 2)), &probes).unwrap();
        assert!(e.left_exact);
        let e = exactness_profile(&qc(&FpModule::cyclic(&z, 2)), &probes).unwrap();
        assert!(!e.left_exact);
        assert!(e.right_exact);
        let e = exactness_profile(&qc(&FpModule::free(&z, 1)), &probes).unwrap();
        assert!(e.left_exact && e.right_exact);
    }

    #[test]
    fn envelope_examples() {
        let z = RingSpec::Integers;
        let n = FpModule::from_decomposition(&z, 1, &ints(&[3]));
        let env = sch_envelope(&scheme(&n)).unwrap();
        assert!(env.dual_at_ring.is_isomorphic(&n));
        let probes = ProbeFamily::for_modules(&z, &[&n]);
        for s in &probes.modules {
            assert!(env.canonical.component(s).unwrap().is_isomorphism());
        }

        let env = sch_envelope(&qc(&FpModule::cyclic(&z, 2))).unwrap();
        assert!(env.dual_at_ring.is_zero_module());

        let free = FpModule::free(&z, 2);
        let env = sch_envelope(&qc(&free)).unwrap();
        assert_eq!(env.dual_at_ring.decompose().rank, 2);
        for s in &ProbeFamily::standard(&z, &ints(&[2, 3])).modules {
            assert!(env.canonical.component(s).unwrap().is_isomorphism());
        }
    }

    #[test]
    fn sml_examples() {
        let z = RingSpec::Integers;
        let c2 = FpModule::cyclic(&z, 2);
        let probes = ProbeFamily::standard(&z, &ints(&[2]));
        assert!(sml_probe_check(&scheme(&c2), &probes).unwrap().holds);
        assert!(sml_probe_check(&qc(&FpModule::free(&z, 1)), &probes).unwrap().holds);
        let check = sml_probe_check(&qc(&c2), &probes).unwrap();
        assert!(!check.holds);
        assert!(check.witness.is_some());
        let only = ProbeFamily::new(vec![c2.clone()], vec![], vec![]).unwrap();
        let w = sml_probe_check(&qc(&c2), &only).unwrap().witness.unwrap();
        let at = qc(&c2).evaluate(&c2).unwrap();
        assert!(!at.value.is_zero_element(&w.element));
    }
}
