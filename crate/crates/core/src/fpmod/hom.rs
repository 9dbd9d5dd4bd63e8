//! `Hom`, tensor products and duals of finitely presented modules.

use super::module::FpModule;
use super::morphism::FpMorphism;
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};

/// `Hom_R(M, N)` as a finitely presented module with a decoder to actual morphisms.
///
/// Internally the morphisms are computed between the canonical presentations
/// `Mc`, `Nc` as `ker[Nc^{gens Mc} -> Nc^{rels Mc}]`.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: FpModule,
    pub target: FpModule,
    pub module: FpModule,
    src_to: IntMatrix,
    src_from: IntMatrix,
    tgt_to: IntMatrix,
    tgt_from: IntMatrix,
    src_canon_gens: usize,
    tgt_canon_gens: usize,
    /// `module -> Nc^{gens Mc}`
    inclusion: FpMorphism,
}

pub fn hom_module(m: &FpModule, n: &FpModule) -> Result<HomModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().name(), n.ring().name()));
    }
    let ring = m.ring();
    let (mc, src_to, src_from) = m.canonical();
    let (nc, tgt_to, tgt_from) = n.canonical();
    let km = mc.gens();
    let kn = nc.gens();
    let p = nc.power(km);
    let q = nc.power(mc.relations().rows());
    let map = mc.relations().transpose().kron(&IntMatrix::identity(ring, kn))?;
    let f = FpMorphism::new(&p.module, &q.module, map)?;
    let (h, inclusion) = f.kernel();
    Ok(HomModule {
        source: m.clone(),
        target: n.clone(),
        module: h,
        src_to,
        src_from,
        tgt_to,
        tgt_from,
        src_canon_gens: km,
        tgt_canon_gens: kn,
        inclusion,
    })
}

/// `Hom_R(M, R)`.
pub fn dual_module(m: &FpModule) -> Result<HomModule> {
    hom_module(m, &FpModule::free(m.ring(), 1))
}

impl HomModule {
    /// Morphism represented by coordinates in [`HomModule::module`].
    pub fn decode(&self, h: &[Int]) -> FpMorphism {
        let flat = self.inclusion.apply(h);
        let ring = self.module.ring();
        let phi_c =
            IntMatrix::new(ring, self.src_canon_gens, self.tgt_canon_gens, flat).expect("flattened canonical morphism");
        let phi = self.src_to.mul(&phi_c).and_then(|x| x.mul(&self.tgt_from)).expect("shapes agree");
        FpMorphism::new(&self.source, &self.target, phi).expect("decoded morphisms are well defined")
    }

    pub fn generator(&self, k: usize) -> FpMorphism {
        self.decode(self.module.generator(k).coords.as_slice())
    }

    pub fn generators(&self) -> Vec<FpMorphism> {
        (0..self.module.gens()).map(|k| self.generator(k)).collect()
    }

    /// Coordinates of `f` in [`HomModule::module`].
    pub fn encode(&self, f: &FpMorphism) -> Result<Vec<Int>> {
        if !f.source().same_presentation(&self.source) || !f.target().same_presentation(&self.target) {
            return Err(Error::ShapeMismatch("morphism does not belong to this Hom module".into()));
        }
        let phi_c = self.src_from.mul(f.matrix())?.mul(&self.tgt_to)?;
        let flat = phi_c.entries().to_vec();
        self.inclusion.lift(&flat).ok_or_else(|| Error::Inconsistent("morphism not in the computed Hom module".into()))
    }

    /// Linear map `self -> other` induced by a transformation of morphisms
    /// (pre- or post-composition), computed on generators.
    pub fn induced_map(&self, other: &HomModule, op: impl Fn(&FpMorphism) -> Result<FpMorphism>) -> Result<FpMorphism> {
        let ring = self.module.ring();
        let mut rows = Vec::with_capacity(self.module.gens());
        for k in 0..self.module.gens() {
            let image = op(&self.generator(k))?;
            rows.push(other.encode(&image)?);
        }
        let m = IntMatrix::from_rows(ring, other.module.gens(), rows)?;
        FpMorphism::new(&self.module, &other.module, m)
    }
}

/// `M ⊗ N` on generators `(i, j) ↦ i * gens(N) + j`, relations
/// `(relations_M ⊗ id)` stacked on `(id ⊗ relations_N)`.
pub fn tensor_module(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().name(), n.ring().name()));
    }
    let ring = m.ring();
    let top = m.relations().kron(&IntMatrix::identity(ring, n.gens()))?;
    let bottom = IntMatrix::identity(ring, m.gens()).kron(n.relations())?;
    FpModule::new(ring, m.gens() * n.gens(), top.vstack(&bottom)?)
}

/// `f ⊗ g : M ⊗ N -> M' ⊗ N'` between the presentations of [`tensor_module`].
pub fn tensor_morphism(f: &FpMorphism, g: &FpMorphism) -> Result<(FpModule, FpModule, FpMorphism)> {
    let s = tensor_module(f.source(), g.source())?;
    let t = tensor_module(f.target(), g.target())?;
    let m = f.matrix().kron(g.matrix())?;
    let h = FpMorphism::new(&s, &t, m)?;
    Ok((s, t, h))
}

/// Coordinates of `x ⊗ y` in [`tensor_module`].
pub fn pure_tensor(x: &[Int], y: &[Int]) -> Vec<Int> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a * b);
        }
    }
    out
}
