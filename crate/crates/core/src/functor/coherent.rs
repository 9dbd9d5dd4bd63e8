use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, RingSpec};
use crate::fpmod::{hom_module, quotient, tensor_morphism, FpModule, FpMorphism, HomModule};

/// Where a presentation came from; only used to recognise duals.
#[derive(Clone, Debug)]
pub enum Origin {
    /// `qc(M)`: `S ↦ M ⊗ S`.
    QuasiCoherent(FpModule),
    /// `scheme(N)`: `S ↦ Hom(N, S)`.
    Scheme(FpModule),
    General,
}

/// The functor `F(S) = coker[Hom(V, S) -> Hom(W, S)]`, precomposition with `d: W -> V`.
#[derive(Clone)]
pub struct CoherentFunctor {
    d: FpMorphism,
    origin: Origin,
}

impl CoherentFunctor {
    pub fn new(d: FpMorphism) -> Self {
        CoherentFunctor { d, origin: Origin::General }
    }

    pub fn presentation(&self) -> &FpMorphism {
        &self.d
    }

    /// `W`, the source of the presentation morphism.
    pub fn w(&self) -> &FpModule {
        self.d.source()
    }

    /// `V`, the target of the presentation morphism.
    pub fn v(&self) -> &FpModule {
        self.d.target()
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn ring(&self) -> &RingSpec {
        self.d.source().ring()
    }

    pub fn is_scheme(&self) -> bool {
        matches!(self.origin, Origin::Scheme(_))
    }

    pub fn is_quasi_coherent(&self) -> bool {
        matches!(self.origin, Origin::QuasiCoherent(_))
    }

    /// `F(S)` with the data needed to move elements in and out of it.
    pub fn evaluate(&self, s: &FpModule) -> Result<Evaluation> {
        if s.ring() != self.ring() {
            return Err(Error::RingMismatch(self.ring().name(), s.ring().name()));
        }
        let hom_w = hom_module(self.w(), s)?;
        let hom_v = hom_module(self.v(), s)?;
        let precompose = hom_v.induced_map(&hom_w, |psi| self.d.then(psi))?;
        let q = quotient(&hom_w.module, precompose.matrix());
        Ok(Evaluation {
            probe: s.clone(),
            value: q.module,
            hom_w,
            hom_v,
            precompose,
            projection: q.projection,
            lifts: q.lifts,
        })
    }

    /// `F(f): F(S) -> F(S')`.
    pub fn evaluate_on(&self, f: &FpMorphism) -> Result<FpMorphism> {
        let a = self.evaluate(f.source())?;
        let b = self.evaluate(f.target())?;
        a.map_to(&b, f)
    }

    /// `F*(S) = Hom(F, qc(S)) = ker[W ⊗ S -> V ⊗ S]`.
    pub fn dual_evaluate(&self, s: &FpModule) -> Result<(FpModule, FpMorphism)> {
        let (_, _, ds) = tensor_morphism(&self.d, &FpMorphism::identity(s))?;
        Ok(ds.kernel())
    }

    /// Coherent presentation of the dual for quasi-coherent functors and module schemes.
    pub fn dual_presentation(&self) -> Option<CoherentFunctor> {
        match &self.origin {
            Origin::QuasiCoherent(m) => Some(scheme(m)),
            Origin::Scheme(n) => Some(qc(n)),
            Origin::General => None,
        }
    }
}

impl fmt::Debug for CoherentFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Origin::QuasiCoherent(m) => write!(f, "qc({})", m.decompose()),
            Origin::Scheme(n) => write!(f, "scheme({})", n.decompose()),
            Origin::General => write!(f, "coker[Hom(V,-) -> Hom(W,-)] with d = {:?}", self.d),
        }
    }
}

/// `qc(M)`: `W = R^gens`, `V = R^rels`, `d = relationsᵀ`.
pub fn qc(m: &FpModule) -> CoherentFunctor {
    let ring = m.ring();
    let w = FpModule::free(ring, m.gens());
    let v = FpModule::free(ring, m.relations().rows());
    let d = FpMorphism::new(&w, &v, m.relations().transpose()).expect("maps of free modules");
    CoherentFunctor { d, origin: Origin::QuasiCoherent(m.clone()) }
}

/// `scheme(N) = Hom(N, -)`: `W = N`, `V = 0`.
pub fn scheme(n: &FpModule) -> CoherentFunctor {
    let d = FpMorphism::zero(n, &FpModule::zero(n.ring()));
    CoherentFunctor { d, origin: Origin::Scheme(n.clone()) }
}

/// The value `F(S)` together with its presentation data.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub probe: FpModule,
    pub value: FpModule,
    /// `Hom(W, S)`
    pub hom_w: HomModule,
    /// `Hom(V, S)`
    pub hom_v: HomModule,
    /// `Hom(V, S) -> Hom(W, S)`, `ψ ↦ ψ ∘ d`
    pub precompose: FpMorphism,
    /// `Hom(W, S) -> F(S)`
    pub projection: FpMorphism,
    lifts: IntMatrix,
}

impl Evaluation {
    /// Coordinates in `F(S)` of the class of `phi: W -> S`.
    pub fn class_of(&self, phi: &FpMorphism) -> Result<Vec<Int>> {
        let h = self.hom_w.encode(phi)?;
        Ok(self.projection.apply(&h))
    }

    /// A morphism `W -> S` representing the element `x` of `F(S)`.
    pub fn representative(&self, x: &[Int]) -> FpMorphism {
        let h = self.lifts.apply_row(x);
        self.hom_w.decode(&h)
    }

    pub fn is_zero_class(&self, phi: &FpMorphism) -> Result<bool> {
        Ok(self.value.is_zero_element(&self.class_of(phi)?))
    }

    /// `F(f): F(S) -> F(S')` for `f: S -> S'`, where `other` evaluates the same functor at `S'`.
    pub fn map_to(&self, other: &Evaluation, f: &FpMorphism) -> Result<FpMorphism> {
        let ring = self.value.ring();
        let mut rows = Vec::with_capacity(self.value.gens());
        for c in 0..self.value.gens() {
            let phi = self.representative(self.value.generator(c).coords.as_slice());
            rows.push(other.class_of(&phi.then(f)?)?);
        }
        let m = IntMatrix::from_rows(ring, other.value.gens(), rows)?;
        FpMorphism::new(&self.value, &other.value, m)
    }

    /// Lift a `Hom(W, S)` element known to lie in the image of precomposition.
    pub(crate) fn precompose_preimage(&self, phi: &FpMorphism) -> Result<Option<FpMorphism>> {
        let h = self.hom_w.encode(phi)?;
        Ok(self.precompose.lift(&h).map(|c| self.hom_v.decode(&c)))
    }
}
