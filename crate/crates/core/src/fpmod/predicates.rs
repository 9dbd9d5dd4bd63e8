//! Splitting, purity, projectivity and trace ideals of elements.

use num_traits::Zero;

use super::hom::{dual_module, hom_module, tensor_morphism};
use super::module::{FpModule, ModuleElement};
use super::morphism::FpMorphism;
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, RingSpec};

/// A retraction `r` of `i` (so `r ∘ i = id`), when one exists.
pub fn split_retraction(i: &FpMorphism) -> Result<Option<FpMorphism>> {
    let a = i.source();
    let b = i.target();
    let hom_ba = hom_module(b, a)?;
    let hom_aa = hom_module(a, a)?;
    let pre = hom_ba.induced_map(&hom_aa, |psi| i.then(psi))?;
    let id = hom_aa.encode(&FpMorphism::identity(a))?;
    Ok(pre.lift(&id).map(|c| hom_ba.decode(&c)))
}

/// A section `s` of `p` (so `p ∘ s = id`), when one exists.
pub fn split_section(p: &FpMorphism) -> Result<Option<FpMorphism>> {
    let b = p.source();
    let c = p.target();
    let hom_cb = hom_module(c, b)?;
    let hom_cc = hom_module(c, c)?;
    let post = hom_cb.induced_map(&hom_cc, |s| s.then(p))?;
    let id = hom_cc.encode(&FpMorphism::identity(c))?;
    Ok(post.lift(&id).map(|x| hom_cb.decode(&x)))
}

/// Outcome of the purity test for an injective morphism.
#[derive(Clone, Debug)]
pub struct Purity {
    pub pure: bool,
    /// Present exactly when the inclusion splits.
    pub retraction: Option<FpMorphism>,
    /// A test module `S` and a nonzero element of `ker(S ⊗ i)`.
    pub obstruction: Option<(FpModule, Vec<Int>)>,
    pub test_modules: Vec<FpModule>,
}

/// Test modules for purity: `R` and `R/(d)` for every invariant factor of the
/// source, the target and the cokernel.
pub fn purity_test_modules(i: &FpMorphism) -> Vec<FpModule> {
    let ring = i.source().ring();
    let mut ds: Vec<Int> = Vec::new();
    let coker = i.cokernel().0;
    for m in [i.source(), i.target(), &coker] {
        for d in m.decompose().invariant_factors {
            if !ds.contains(&d) {
                ds.push(d);
            }
        }
    }
    ds.sort();
    let mut out = vec![FpModule::free(ring, 1)];
    out.extend(ds.into_iter().map(|d| FpModule::cyclic(ring, d)));
    out
}

/// Purity of an injective `i`, decided by tensoring with the test modules and
/// cross-checked against the existence of a retraction.
pub fn purity(i: &FpMorphism) -> Result<Purity> {
    if !i.is_injective() {
        return Err(Error::NotInjective);
    }
    let tests = purity_test_modules(i);
    let mut obstruction = None;
    for s in &tests {
        let (_, _, si) = tensor_morphism(&FpMorphism::identity(s), i)?;
        let (k, incl) = si.kernel();
        if !k.is_zero_module() {
            let g = (0..k.gens())
                .map(|j| incl.matrix().row(j).to_vec())
                .find(|v| !si.source().is_zero_element(v))
                .expect("nonzero kernel has a nonzero generator image");
            obstruction = Some((s.clone(), g));
            break;
        }
    }
    let retraction = split_retraction(i)?;
    let pure = obstruction.is_none();
    if pure != retraction.is_some() {
        return Err(Error::Inconsistent(format!(
            "tensor test says pure={pure} but retraction exists={}",
            retraction.is_some()
        )));
    }
    Ok(Purity { pure, retraction, obstruction, test_modules: tests })
}

pub fn is_pure_submodule(i: &FpMorphism) -> Result<bool> {
    purity(i).map(|p| p.pure)
}

/// The free cover `R^g -> M` sending basis vectors to generators.
pub fn free_cover(m: &FpModule) -> FpMorphism {
    let f = FpModule::free(m.ring(), m.gens());
    FpMorphism::new(&f, m, IntMatrix::identity(m.ring(), m.gens())).expect("generators are images")
}

/// Section of the free cover, witnessing `M` as a direct summand of `R^g`.
pub fn projective_section(m: &FpModule) -> Result<Option<FpMorphism>> {
    split_section(&free_cover(m))
}

/// Over `Z`: free. Over `Z/n`: a direct summand of a free module.
pub fn is_projective(m: &FpModule) -> Result<bool> {
    match m.ring() {
        RingSpec::Integers => Ok(m.decompose().invariant_factors.is_empty()),
        RingSpec::IntegersMod(_) => Ok(projective_section(m)?.is_some()),
    }
}

/// Ideal `M*(m) = {w(m) : w ∈ M*}` with the functionals generating it.
#[derive(Clone, Debug)]
pub struct TraceIdeal {
    pub generator: Int,
    /// Generators of `M*` as `g × 1` matrices.
    pub functionals: Vec<FpMorphism>,
    /// `values[k] = functionals[k](m)`.
    pub values: Vec<Int>,
}

pub fn trace_ideal(m: &ModuleElement) -> Result<TraceIdeal> {
    let ring = m.module.ring();
    let dual = dual_module(&m.module)?;
    let functionals = dual.generators();
    let values: Vec<Int> = functionals.iter().map(|w| w.apply(&m.coords)[0].clone()).collect();
    let generator = values.iter().fold(Int::zero(), |acc, v| ring.ideal_sum(&acc, v));
    Ok(TraceIdeal { generator, functionals, values })
}

/// Canonical generator of `M*(m)`.
pub fn element_trace_ideal(m: &ModuleElement) -> Result<Int> {
    trace_ideal(m).map(|t| t.generator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn mat(r: &RingSpec, cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(r, cols, rows).unwrap()
    }

    #[test]
    fn retraction_examples() {
        let z = RingSpec::Integers;
        let z1 = FpModule::free(&z, 1);
        let z2 = FpModule::free(&z, 2);
        let i = FpMorphism::new(&z1, &z2, mat(&z, 2, &[vec![1, 0]])).unwrap();
        let r = split_retraction(&i).unwrap().unwrap();
        assert!(i.then(&r).unwrap().equals(&FpMorphism::identity(&z1)));

        let two = FpMorphism::scalar(&z1, &Int::from(2));
        assert!(split_retraction(&two).unwrap().is_none());

        let c2 = FpModule::cyclic(&z, 2);
        let c4 = FpModule::cyclic(&z, 4);
        let j = FpMorphism::new(&c2, &c4, mat(&z, 1, &[vec![2]])).unwrap();
        assert!(split_retraction(&j).unwrap().is_none());
    }

    #[test]
    fn purity_examples() {
        let z = RingSpec::Integers;
        let z1 = FpModule::free(&z, 1);
        let two = FpMorphism::scalar(&z1, &Int::from(2));
        let p = purity(&two).unwrap();
        assert!(!p.pure);
        let (s, _) = p.obstruction.unwrap();
        assert_eq!(s.decompose().invariant_factors, ints(&[2]));

        let m = FpModule::from_decomposition(&z, 1, &ints(&[2]));
        // torsion generator comes first in canonical presentations
        let i = FpMorphism::new(&z1, &m, mat(&z, 2, &[vec![0, 1]])).unwrap();
        assert!(is_pure_submodule(&i).unwrap());

        let c2 = FpModule::cyclic(&z, 2);
        let c4 = FpModule::cyclic(&z, 4);
        let j = FpMorphism::new(&c2, &c4, mat(&z, 1, &[vec![2]])).unwrap();
        assert!(!is_pure_submodule(&j).unwrap());

        let zero = FpMorphism::zero(&z1, &z1);
        assert_eq!(is_pure_submodule(&zero).unwrap_err(), Error::NotInjective);
    }

    #[test]
    fn projectivity_examples() {
        let z = RingSpec::Integers;
        assert!(is_projective(&FpModule::free(&z, 3)).unwrap());
        assert!(!is_projective(&FpModule::from_decomposition(&z, 1, &ints(&[2]))).unwrap());
        let r6 = RingSpec::modulo(6).unwrap();
        assert!(is_projective(&FpModule::cyclic(&r6, 2)).unwrap());
        let r4 = RingSpec::modulo(4).unwrap();
        assert!(!is_projective(&FpModule::cyclic(&r4, 2)).unwrap());
    }

    #[test]
    fn trace_ideal_examples() {
        let z = RingSpec::Integers;
        let z1 = FpModule::free(&z, 1);
        assert_eq!(element_trace_ideal(&z1.element(ints(&[3])).unwrap()).unwrap(), Int::from(3));
        let m = FpModule::from_decomposition(&z, 1, &ints(&[2]));
        // the torsion generator
        assert_eq!(element_trace_ideal(&m.element(ints(&[1, 0])).unwrap()).unwrap(), Int::from(0));
        let z2 = FpModule::free(&z, 2);
        assert_eq!(element_trace_ideal(&z2.element(ints(&[2, 4])).unwrap()).unwrap(), Int::from(2));
    }
}
