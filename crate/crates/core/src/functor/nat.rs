use std::fmt;

use super::coherent::{qc, scheme, CoherentFunctor, Evaluation};
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};
use crate::fpmod::{quotient, FpModule, FpMorphism};

/// A natural transformation `F -> G`, stored as the square
/// `u: W_G -> W_F`, `v: V_G -> V_F` with `d_F ∘ u = v ∘ d_G`.
///
/// The component at `S` sends the class of `φ: W_F -> S` to the class of `φ ∘ u`.
#[derive(Clone)]
pub struct NatTransformation {
    source: CoherentFunctor,
    target: CoherentFunctor,
    u: FpMorphism,
    v: FpMorphism,
}

impl NatTransformation {
    pub fn new(source: &CoherentFunctor, target: &CoherentFunctor, u: FpMorphism, v: FpMorphism) -> Result<Self> {
        let shapes = u.source().same_presentation(target.w())
            && u.target().same_presentation(source.w())
            && v.source().same_presentation(target.v())
            && v.target().same_presentation(source.v());
        if !shapes {
            return Err(Error::ShapeMismatch("square does not connect the two presentations".into()));
        }
        let left = u.then(source.presentation())?;
        let right = target.presentation().then(&v)?;
        if !left.equals(&right) {
            return Err(Error::NonCommutingSquare);
        }
        Ok(NatTransformation { source: source.clone(), target: target.clone(), u, v })
    }

    pub fn source(&self) -> &CoherentFunctor {
        &self.source
    }

    pub fn target(&self) -> &CoherentFunctor {
        &self.target
    }

    pub fn u(&self) -> &FpMorphism {
        &self.u
    }

    pub fn v(&self) -> &FpMorphism {
        &self.v
    }

    pub fn identity(f: &CoherentFunctor) -> Self {
        NatTransformation {
            source: f.clone(),
            target: f.clone(),
            u: FpMorphism::identity(f.w()),
            v: FpMorphism::identity(f.v()),
        }
    }

    pub fn zero(source: &CoherentFunctor, target: &CoherentFunctor) -> Self {
        NatTransformation {
            source: source.clone(),
            target: target.clone(),
            u: FpMorphism::zero(target.w(), source.w()),
            v: FpMorphism::zero(target.v(), source.v()),
        }
    }

    /// Component `F(S) -> G(S)` between precomputed evaluations at the same `S`.
    pub fn component_between(&self, at_source: &Evaluation, at_target: &Evaluation) -> Result<FpMorphism> {
        let ring = at_source.value.ring();
        let mut rows = Vec::with_capacity(at_source.value.gens());
        for c in 0..at_source.value.gens() {
            let phi = at_source.representative(at_source.value.generator(c).coords.as_slice());
            rows.push(at_target.class_of(&self.u.then(&phi)?)?);
        }
        let m = IntMatrix::from_rows(ring, at_target.value.gens(), rows)?;
        FpMorphism::new(&at_source.value, &at_target.value, m)
    }

    /// Component `η_S: F(S) -> G(S)`.
    pub fn component(&self, s: &FpModule) -> Result<FpMorphism> {
        let a = self.source.evaluate(s)?;
        let b = self.target.evaluate(s)?;
        self.component_between(&a, &b)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &NatTransformation) -> Result<NatTransformation> {
        if !same_functor(&self.target, &next.source) {
            return Err(Error::ShapeMismatch("composition of non-composable transformations".into()));
        }
        Ok(NatTransformation {
            source: self.source.clone(),
            target: next.target.clone(),
            u: next.u.then(&self.u)?,
            v: next.v.then(&self.v)?,
        })
    }

    fn check_parallel(&self, other: &NatTransformation) -> Result<()> {
        if same_functor(&self.source, &other.source) && same_functor(&self.target, &other.target) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch("transformations are not parallel".into()))
        }
    }

    pub fn add(&self, other: &NatTransformation) -> Result<NatTransformation> {
        self.check_parallel(other)?;
        Ok(NatTransformation {
            source: self.source.clone(),
            target: self.target.clone(),
            u: self.u.add(&other.u)?,
            v: self.v.add(&other.v)?,
        })
    }

    pub fn sub(&self, other: &NatTransformation) -> Result<NatTransformation> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NatTransformation {
        NatTransformation { source: self.source.clone(), target: self.target.clone(), u: self.u.neg(), v: self.v.neg() }
    }

    /// Zero as a transformation: `u` factors through `d_G`.
    pub fn is_zero(&self) -> Result<bool> {
        let e = self.target.evaluate(self.source.w())?;
        e.is_zero_class(&self.u)
    }

    /// Equality of transformations (not of the chosen squares).
    pub fn equals(&self, other: &NatTransformation) -> Result<bool> {
        self.sub(other)?.is_zero()
    }
}

impl fmt::Debug for NatTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nat[{:?} => {:?}; u = {}]", self.source, self.target, self.u.matrix())
    }
}

fn same_functor(a: &CoherentFunctor, b: &CoherentFunctor) -> bool {
    let (da, db) = (a.presentation(), b.presentation());
    da.source().same_presentation(db.source())
        && da.target().same_presentation(db.target())
        && da.matrix() == db.matrix()
}

/// `qc(f): qc(M) -> qc(M')`.
pub fn qc_map(f: &FpMorphism) -> Result<NatTransformation> {
    let src = qc(f.source());
    let tgt = qc(f.target());
    let u = FpMorphism::new(tgt.w(), src.w(), f.matrix().transpose())?;
    let v = FpMorphism::new(tgt.v(), src.v(), f.certificate().transpose())?;
    NatTransformation::new(&src, &tgt, u, v)
}

/// `scheme(f): scheme(N') -> scheme(N)` for `f: N -> N'`, precomposition with `f`.
pub fn scheme_map(f: &FpMorphism) -> Result<NatTransformation> {
    let src = scheme(f.target());
    let tgt = scheme(f.source());
    let v = FpMorphism::zero(tgt.v(), src.v());
    NatTransformation::new(&src, &tgt, f.clone(), v)
}

/// The transformation `scheme(N) -> F` corresponding to `x ∈ F(N)`.
pub fn yoneda(n: &FpModule, f: &CoherentFunctor, x: &[Int]) -> Result<NatTransformation> {
    let e = f.evaluate(n)?;
    yoneda_with(&e, f, x)
}

pub(crate) fn yoneda_with(e: &Evaluation, f: &CoherentFunctor, x: &[Int]) -> Result<NatTransformation> {
    let src = scheme(&e.probe);
    let u = e.representative(x);
    let v = FpMorphism::zero(f.v(), src.v());
    NatTransformation::new(&src, f, u, v)
}

/// `Hom(F, G) = ker[G(W_F) -> G(V_F)]` with decoding to transformations.
#[derive(Clone, Debug)]
pub struct NatHom {
    pub source: CoherentFunctor,
    pub target: CoherentFunctor,
    pub module: FpModule,
    /// `module -> G(W_F)`
    pub inclusion: FpMorphism,
    at_w: Evaluation,
    at_v: Evaluation,
}

pub fn hom_functor(f: &CoherentFunctor, g: &CoherentFunctor) -> Result<NatHom> {
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch(f.ring().name(), g.ring().name()));
    }
    let at_w = g.evaluate(f.w())?;
    let at_v = g.evaluate(f.v())?;
    let gd = at_w.map_to(&at_v, f.presentation())?;
    let (module, inclusion) = gd.kernel();
    Ok(NatHom { source: f.clone(), target: g.clone(), module, inclusion, at_w, at_v })
}

impl NatHom {
    pub fn decode(&self, h: &[Int]) -> Result<NatTransformation> {
        let x = self.inclusion.apply(h);
        let u = self.at_w.representative(&x);
        let du = u.then(self.source.presentation())?;
        let v = self
            .at_v
            .precompose_preimage(&du)?
            .ok_or_else(|| Error::Inconsistent("kernel element of G(d_F) without a square".into()))?;
        NatTransformation::new(&self.source, &self.target, u, v)
    }

    pub fn generators(&self) -> Result<Vec<NatTransformation>> {
        (0..self.module.gens()).map(|k| self.decode(self.module.generator(k).coords.as_slice())).collect()
    }

    pub fn encode(&self, eta: &NatTransformation) -> Result<Vec<Int>> {
        let x = self.at_w.class_of(eta.u())?;
        self.inclusion.lift(&x).ok_or_else(|| Error::Inconsistent("transformation not in the computed Hom".into()))
    }
}

/// `ker η` with its inclusion into `F`.
#[derive(Clone, Debug)]
pub struct NatKernel {
    pub functor: CoherentFunctor,
    pub inclusion: NatTransformation,
}

/// `coker η` with its projection from `G`.
#[derive(Clone, Debug)]
pub struct NatCokernel {
    pub functor: CoherentFunctor,
    pub projection: NatTransformation,
}

/// `coker η`: presented by `(d_G, u): W_G -> V_G ⊕ W_F`.
pub fn nat_cokernel(eta: &NatTransformation) -> Result<NatCokernel> {
    let g = eta.target();
    let f = eta.source();
    let ring = g.ring();
    let sum = FpModule::direct_sum(ring, &[g.v().clone(), f.w().clone()]);
    let m = g.presentation().matrix().hstack(eta.u().matrix())?;
    let d = FpMorphism::new(g.w(), &sum.module, m)?;
    let functor = CoherentFunctor::new(d);
    let v = FpMorphism::new(&sum.module, g.v(), sum.projection_matrix(0))?;
    let projection = NatTransformation::new(g, &functor, FpMorphism::identity(g.w()), v)?;
    Ok(NatCokernel { functor, projection })
}

/// `ker η`, presented on `Q = coker[W_G -> W_F ⊕ V_G]`, `w ↦ (u w, -d_G w)`,
/// mapping to `V_F ⊕ coker(d_G)`.
pub fn nat_kernel(eta: &NatTransformation) -> Result<NatKernel> {
    let f = eta.source();
    let g = eta.target();
    let ring = f.ring();
    let pair = FpModule::direct_sum(ring, &[f.w().clone(), g.v().clone()]);
    let gens = eta.u().matrix().hstack(&g.presentation().matrix().neg())?;
    let q = quotient(&pair.module, &gens);

    let (c_g, p_g) = g.presentation().cokernel();
    let out = FpModule::direct_sum(ring, &[f.v().clone(), c_g.clone()]);
    let top = f.presentation().matrix().hstack(&IntMatrix::zeros(ring, f.w().gens(), c_g.gens()))?;
    let bottom = eta.v().matrix().hstack(p_g.matrix())?;
    let rho = FpMorphism::new(&pair.module, &out.module, top.vstack(&bottom)?)?;

    let d = FpMorphism::new(&q.module, &out.module, q.lifts.mul(rho.matrix())?)?;
    let functor = CoherentFunctor::new(d);
    let idx: Vec<usize> = (0..f.w().gens()).collect();
    let u = FpMorphism::new(f.w(), &q.module, q.projection.matrix().select_rows(&idx))?;
    let v = FpMorphism::new(f.v(), &out.module, out.injection_matrix(0))?;
    let inclusion = NatTransformation::new(&functor, f, u, v)?;
    Ok(NatKernel { functor, inclusion })
}
