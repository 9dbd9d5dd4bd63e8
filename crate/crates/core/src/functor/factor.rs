//! Tensors as transformations `scheme(M) -> qc(M')` and the factorization lemmas.

use super::coherent::{qc, scheme, CoherentFunctor, Origin};
use super::nat::{qc_map, scheme_map, yoneda_with, NatTransformation};
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};
use crate::fpmod::{submodule, FpModule, FpMorphism};

/// The transformation `w ↦ Σ w(m_i) ⊗ m'_j` attached to `t = Σ t_ij m_i ⊗ m'_j`,
/// with `t` in the coordinates of [`tensor_module`]`(M, M')`.
pub fn tensor_to_nat(m: &FpModule, m2: &FpModule, t: &[Int]) -> Result<NatTransformation> {
    let g = m.gens();
    let g2 = m2.gens();
    if t.len() != g * g2 {
        return Err(Error::DimensionMismatch(format!("tensor of length {} for {g} x {g2} generators", t.len())));
    }
    let ring = m.ring();
    let mut u = IntMatrix::zeros(ring, g2, g);
    for i in 0..g {
        for j in 0..g2 {
            u.set(j, i, t[i * g2 + j].clone());
        }
    }
    let src = scheme(m);
    let tgt = qc(m2);
    let u = FpMorphism::new(tgt.w(), m, u)?;
    let v = FpMorphism::zero(tgt.v(), src.v());
    NatTransformation::new(&src, &tgt, u, v)
}

fn scheme_qc_pair(eta: &NatTransformation) -> Result<(FpModule, FpModule)> {
    match (eta.source().origin(), eta.target().origin()) {
        (Origin::Scheme(m), Origin::QuasiCoherent(m2)) => Ok((m.clone(), m2.clone())),
        _ => Err(Error::ShapeMismatch("expected a transformation scheme(M) -> qc(M')".into())),
    }
}

/// Inverse of [`tensor_to_nat`]: the image of `id_M` under `η_M`.
pub fn nat_to_tensor(eta: &NatTransformation) -> Result<Vec<Int>> {
    let (m, m2) = scheme_qc_pair(eta)?;
    let g = m.gens();
    let g2 = m2.gens();
    let u = eta.u().matrix();
    let mut t = Vec::with_capacity(g * g2);
    for i in 0..g {
        for j in 0..g2 {
            t.push(u.get(j, i).clone());
        }
    }
    Ok(t)
}

/// `η = qc(inclusion) ∘ factor` with `M''` generated by the `m'_i` of `t = Σ m_i ⊗ m'_i`.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    pub submodule: FpModule,
    pub inclusion: FpMorphism,
    /// `scheme(M) -> qc(M'')`
    pub factor: NatTransformation,
}

pub fn fg_image_factorization(eta: &NatTransformation) -> Result<ImageFactorization> {
    let (m, m2) = scheme_qc_pair(eta)?;
    let t = nat_to_tensor(eta)?;
    let ring = m.ring();
    let gens = IntMatrix::new(ring, m.gens(), m2.gens(), t)?;
    let sub = submodule(&m2, &gens);
    let t2 = sub.from_generators.entries().to_vec();
    let factor = tensor_to_nat(&m, &sub.module, &t2)?;
    let composite = factor.then(&qc_map(&sub.inclusion)?)?;
    if !composite.equals(eta)? {
        return Err(Error::Inconsistent("image factorization does not recompose".into()));
    }
    Ok(ImageFactorization { submodule: sub.module, inclusion: sub.inclusion, factor })
}

/// `f = factor ∘ scheme(ι)` with `ι: N' = ker(m) -> N`.
#[derive(Clone, Debug)]
pub struct KernelFactorization {
    pub kernel: FpModule,
    pub inclusion: FpMorphism,
    /// `scheme(N) -> scheme(N')`, restriction along the inclusion
    pub restriction: NatTransformation,
    /// `scheme(N') -> F`
    pub factor: NatTransformation,
    /// `F(ι)` is injective, so the factor is unique.
    pub unique: bool,
}

pub fn kernel_factorization(f: &NatTransformation, m: &FpMorphism) -> Result<KernelFactorization> {
    let n = match f.source().origin() {
        Origin::Scheme(n) => n.clone(),
        _ => return Err(Error::ShapeMismatch("expected a transformation out of scheme(N)".into())),
    };
    if !m.source().same_presentation(&n) {
        return Err(Error::ShapeMismatch("m must be defined on N".into()));
    }
    let target: &CoherentFunctor = f.target();
    let at_n = target.evaluate(&n)?;
    let at_s = target.evaluate(m.target())?;
    let x = at_n.class_of(f.u())?;
    let fm = at_n.map_to(&at_s, m)?;
    if !at_s.value.is_zero_element(&fm.apply(&x)) {
        return Err(Error::Precondition("f_S(m) is not zero".into()));
    }

    let (kernel, inclusion) = m.kernel();
    let at_k = target.evaluate(&kernel)?;
    let fi = at_k.map_to(&at_n, &inclusion)?;
    let y =
        fi.lift(&x).ok_or_else(|| Error::NotLeftExact("the Yoneda element does not come from the kernel".into()))?;
    let factor = yoneda_with(&at_k, target, &y)?;
    let restriction = scheme_map(&inclusion)?;
    if !restriction.then(&factor)?.equals(f)? {
        return Err(Error::Inconsistent("kernel factorization does not recompose".into()));
    }
    Ok(KernelFactorization { kernel, inclusion, restriction, factor, unique: fi.is_injective() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RingSpec;
    use crate::fpmod::tensor_module;
    use crate::functor::yoneda;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn tensor_nat_examples() {
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        assert!(tensor_to_nat(&r, &r, &ints(&[0])).unwrap().is_zero().unwrap());

        let id = tensor_to_nat(&r, &r, &ints(&[1])).unwrap();
        let c = id.component(&FpModule::cyclic(&z, 5)).unwrap();
        assert!(c.is_isomorphism());

        let c2 = FpModule::cyclic(&z, 2);
        let c4 = FpModule::cyclic(&z, 4);
        let eta = tensor_to_nat(&c2, &c4, &ints(&[2])).unwrap();
        // 1 ⊗ 2 = 0 in Z/2 ⊗ Z/4
        assert!(eta.component(&c2).unwrap().is_zero());
        assert!(eta.is_zero().unwrap());
        let back = nat_to_tensor(&eta).unwrap();
        assert!(tensor_module(&c2, &c4).unwrap().is_zero_element(&back));
    }

    #[test]
    fn round_trip_on_mixed_module() {
        let z = RingSpec::Integers;
        let m = FpModule::from_decomposition(&z, 1, &ints(&[2]));
        let m2 = FpModule::from_decomposition(&z, 1, &ints(&[6]));
        let t = ints(&[1, 3, 5, 2]);
        let eta = tensor_to_nat(&m, &m2, &t).unwrap();
        let back = nat_to_tensor(&eta).unwrap();
        assert!(tensor_module(&m, &m2).unwrap().elements_equal(&t, &back));
        assert!(tensor_to_nat(&m, &m2, &back).unwrap().equals(&eta).unwrap());
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        let eta = NatTransformation::identity(&qc(&r));
        assert!(matches!(nat_to_tensor(&eta), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn image_factorization_examples() {
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        let m2 = FpModule::free(&z, 2);
        let zero = tensor_to_nat(&r, &m2, &ints(&[0, 0])).unwrap();
        assert!(fg_image_factorization(&zero).unwrap().submodule.is_zero_module());

        let eta = tensor_to_nat(&r, &m2, &ints(&[2, 4])).unwrap();
        let fac = fg_image_factorization(&eta).unwrap();
        assert_eq!(fac.submodule.decompose().rank, 1);
        assert!(fac.inclusion.is_injective());

        let r6 = RingSpec::modulo(6).unwrap();
        let a = FpModule::cyclic(&r6, 3);
        let b = FpModule::free(&r6, 2);
        let eta = tensor_to_nat(&a, &b, &ints(&[2, 4])).unwrap();
        let fac = fg_image_factorization(&eta).unwrap();
        assert_eq!(fac.submodule.decompose().invariant_factors, ints(&[3]));
    }

    #[test]
    fn kernel_factorization_examples() {
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        let c2 = FpModule::cyclic(&z, 2);
        let reduction = FpMorphism::new(&r, &c2, IntMatrix::from_i64(&z, 1, &[vec![1]]).unwrap()).unwrap();

        // f = restriction along doubling kills the reduction map
        let f = scheme_map(&FpMorphism::scalar(&r, &Int::from(2))).unwrap();
        let k = kernel_factorization(&f, &reduction).unwrap();
        assert_eq!(k.kernel.decompose().rank, 1);
        assert!(k.unique);
        let at = k.restriction.source().evaluate(&c2).unwrap();
        let x = at.class_of(&reduction).unwrap();
        let c = k.restriction.component(&c2).unwrap();
        assert!(c.target().is_zero_element(&c.apply(&x)));
        assert!(k.inclusion.then(&reduction).unwrap().is_zero());

        let zero = FpMorphism::zero(&r, &c2);
        let k = kernel_factorization(&f, &zero).unwrap();
        assert!(k.inclusion.is_isomorphism());

        let id = NatTransformation::identity(&scheme(&r));
        assert!(matches!(kernel_factorization(&id, &reduction), Err(Error::Precondition(_))));
    }

    #[test]
    fn kernel_factorization_detects_non_left_exact() {
        // F = qc(Z/2): doubling Z -> Z is injective but F(doubling) = 0
        let z = RingSpec::Integers;
        let r = FpModule::free(&z, 1);
        let c2 = FpModule::cyclic(&z, 2);
        let f = yoneda(&r, &qc(&c2), &ints(&[1])).unwrap();
        let two = FpMorphism::scalar(&r, &Int::from(2));
        assert!(matches!(kernel_factorization(&f, &two), Err(Error::NotLeftExact(_))));
    }
}
