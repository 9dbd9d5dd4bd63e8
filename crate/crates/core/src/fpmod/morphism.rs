use std::fmt;
use std::sync::{Arc, OnceLock};

use super::module::FpModule;
use crate::error::{Error, Result};
use crate::exact::{kernel_basis, Int, IntMatrix, LeftSolver};

/// A module morphism given by the images of the source generators (one row per
/// generator), with a certificate `X` such that `relations_source · matrix = X · relations_target`.
#[derive(Clone)]
pub struct FpMorphism {
    source: FpModule,
    target: FpModule,
    matrix: IntMatrix,
    certificate: IntMatrix,
    lift: Arc<OnceLock<LeftSolver>>,
}

impl FpMorphism {
    pub fn new(source: &FpModule, target: &FpModule, matrix: IntMatrix) -> Result<Self> {
        if source.ring() != target.ring() || matrix.ring() != source.ring() {
            return Err(Error::RingMismatch(source.ring().name(), target.ring().name()));
        }
        if matrix.shape() != (source.gens(), target.gens()) {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.gens(),
                target.gens()
            )));
        }
        let images = source.relations().mul(&matrix)?;
        let mut cert = Vec::with_capacity(images.rows());
        for i in 0..images.rows() {
            match target.relation_coefficients(images.row(i)) {
                Some(c) => cert.push(c),
                None => return Err(Error::IllDefinedMorphism { row: i }),
            }
        }
        let certificate = IntMatrix::from_rows(source.ring(), target.relations().rows(), cert)?;
        Ok(Self::assemble(source, target, matrix, certificate))
    }

    /// Accept a morphism with a supplied certificate after checking it exactly.
    pub fn with_certificate(
        source: &FpModule,
        target: &FpModule,
        matrix: IntMatrix,
        certificate: IntMatrix,
    ) -> Result<Self> {
        let lhs = source.relations().mul(&matrix)?;
        let rhs = certificate.mul(target.relations())?;
        if lhs != rhs {
            let row = (0..lhs.rows()).find(|&i| lhs.row(i) != rhs.row(i)).unwrap_or(0);
            return Err(Error::IllDefinedMorphism { row });
        }
        Ok(Self::assemble(source, target, matrix, certificate))
    }

    fn assemble(source: &FpModule, target: &FpModule, matrix: IntMatrix, certificate: IntMatrix) -> Self {
        FpMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
            certificate,
            lift: Arc::new(OnceLock::new()),
        }
    }

    pub fn identity(m: &FpModule) -> Self {
        Self::new(m, m, IntMatrix::identity(m.ring(), m.gens())).expect("identity is well defined")
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        Self::new(source, target, IntMatrix::zeros(source.ring(), source.gens(), target.gens()))
            .expect("zero is well defined")
    }

    /// Multiplication by a scalar on `m`.
    pub fn scalar(m: &FpModule, c: &Int) -> Self {
        Self::new(m, m, IntMatrix::identity(m.ring(), m.gens()).scale(c)).expect("scalars are central")
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn certificate(&self) -> &IntMatrix {
        &self.certificate
    }

    /// Image of a source vector, as target coordinates.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.apply_row(x)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FpMorphism) -> Result<FpMorphism> {
        if !self.target.same_presentation(&next.source) {
            return Err(Error::ShapeMismatch("composition of non-composable morphisms".into()));
        }
        FpMorphism::new(&self.source, &next.target, self.matrix.mul(&next.matrix)?)
    }

    fn check_parallel(&self, other: &FpMorphism) -> Result<()> {
        if !self.source.same_presentation(&other.source) || !self.target.same_presentation(&other.target) {
            return Err(Error::ShapeMismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpMorphism) -> Result<FpMorphism> {
        self.check_parallel(other)?;
        FpMorphism::new(&self.source, &self.target, self.matrix.add(&other.matrix)?)
    }

    pub fn sub(&self, other: &FpMorphism) -> Result<FpMorphism> {
        self.check_parallel(other)?;
        FpMorphism::new(&self.source, &self.target, self.matrix.sub(&other.matrix)?)
    }

    pub fn neg(&self) -> FpMorphism {
        self.scale(&Int::from(-1))
    }

    pub fn scale(&self, c: &Int) -> FpMorphism {
        FpMorphism::new(&self.source, &self.target, self.matrix.scale(c)).expect("scalars are central")
    }

    /// Semantic equality: every generator image agrees modulo target relations.
    pub fn equals(&self, other: &FpMorphism) -> bool {
        self.check_parallel(other).is_ok()
            && (0..self.source.gens()).all(|i| self.target.elements_equal(self.matrix.row(i), other.matrix.row(i)))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.gens()).all(|i| self.target.is_zero_element(self.matrix.row(i)))
    }

    fn lift_solver(&self) -> &LeftSolver {
        self.lift.get_or_init(|| {
            let stacked = self.matrix.vstack(self.target.relations()).expect("same width");
            LeftSolver::new(&stacked)
        })
    }

    /// A source vector mapping to `y` modulo target relations.
    pub fn lift(&self, y: &[Int]) -> Option<Vec<Int>> {
        let x = self.lift_solver().solve(y)?;
        Some(x[..self.source.gens()].to_vec())
    }

    pub fn is_injective(&self) -> bool {
        let (k, _) = self.kernel();
        k.is_zero_module()
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.gens()).all(|j| self.lift(self.target.generator(j).coords.as_slice()).is_some())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Two-sided inverse when `self` is an isomorphism.
    pub fn inverse(&self) -> Option<FpMorphism> {
        if !self.is_injective() {
            return None;
        }
        let mut rows = Vec::with_capacity(self.target.gens());
        for j in 0..self.target.gens() {
            rows.push(self.lift(self.target.generator(j).coords.as_slice())?);
        }
        let m = IntMatrix::from_rows(self.source.ring(), self.source.gens(), rows).ok()?;
        FpMorphism::new(&self.target, &self.source, m).ok()
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FpModule, FpMorphism) {
        let stacked = self.matrix.vstack(self.target.relations()).expect("same width");
        let k = kernel_basis(&stacked);
        let idx: Vec<usize> = (0..self.source.gens()).collect();
        let gens = k.select_columns(&idx);
        let sub = submodule(&self.source, &gens);
        (sub.module, sub.inclusion)
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (FpModule, FpMorphism) {
        let q = quotient(&self.target, &self.matrix);
        (q.module, q.projection)
    }

    /// Image with the factorization `self = inclusion ∘ surjection`.
    pub fn image(&self) -> Image {
        let sub = submodule(&self.target, &self.matrix);
        let surjection = FpMorphism::new(&self.source, &sub.module, sub.from_generators.clone())
            .expect("source relations map into the image relations");
        Image { module: sub.module, surjection, inclusion: sub.inclusion }
    }
}

impl fmt::Debug for FpMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMorphism[{} -> {}; {}]", self.source.decompose(), self.target.decompose(), self.matrix)
    }
}

/// Mono-epi factorization of a morphism.
#[derive(Clone, Debug)]
pub struct Image {
    pub module: FpModule,
    pub surjection: FpMorphism,
    pub inclusion: FpMorphism,
}

/// Submodule generated by given elements, in canonical presentation.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: FpModule,
    pub inclusion: FpMorphism,
    /// Row `i` expresses the i-th given generator in the submodule's coordinates.
    pub from_generators: IntMatrix,
}

/// The submodule of `m` generated by the rows of `generators`.
pub fn submodule(m: &FpModule, generators: &IntMatrix) -> Submodule {
    let ring = m.ring();
    let n = generators.rows();
    let stacked = generators.vstack(m.relations()).expect("generators live in m");
    let k = kernel_basis(&stacked);
    let idx: Vec<usize> = (0..n).collect();
    let rel = k.select_columns(&idx);
    let raw = FpModule::new(ring, n, rel).expect("relation width is the generator count");
    let (canon, to, from) = raw.canonical();
    let incl = from.mul(generators).expect("shapes agree");
    let inclusion = FpMorphism::new(&canon, m, incl).expect("submodule inclusion is well defined");
    Submodule { module: canon, inclusion, from_generators: to }
}

/// Quotient of `m` by the submodule generated by the rows of `generators`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FpModule,
    pub projection: FpMorphism,
    /// Row `k` is an element of `m` mapping to the k-th generator of the quotient.
    pub lifts: IntMatrix,
}

pub fn quotient(m: &FpModule, generators: &IntMatrix) -> Quotient {
    let rel = m.relations().vstack(generators).expect("generators live in m");
    let raw = FpModule::new(m.ring(), m.gens(), rel).expect("same width");
    let (canon, to, from) = raw.canonical();
    let projection = FpMorphism::new(m, &canon, to).expect("projection is well defined");
    Quotient { module: canon, projection, lifts: from }
}

/// True when `f` and `g` compose to zero and `ker g ⊆ im f`.
pub fn is_exact_at(f: &FpMorphism, g: &FpMorphism) -> bool {
    let Ok(c) = f.then(g) else { return false };
    if !c.is_zero() {
        return false;
    }
    let (_, k) = g.kernel();
    (0..k.source().gens()).all(|i| f.lift(k.matrix().row(i)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RingSpec;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn ill_defined_matrix_rejected() {
        let z = RingSpec::Integers;
        let z2 = FpModule::cyclic(&z, 2);
        let zz = FpModule::free(&z, 1);
        let m = IntMatrix::from_i64(&z, 1, &[vec![1]]).unwrap();
        assert!(matches!(FpMorphism::new(&z2, &zz, m), Err(Error::IllDefinedMorphism { row: 0 })));
    }

    #[test]
    fn multiplication_by_two_on_z() {
        let z = RingSpec::Integers;
        let zz = FpModule::free(&z, 1);
        let f = FpMorphism::scalar(&zz, &Int::from(2));
        let (k, _) = f.kernel();
        assert!(k.is_zero_module());
        let (c, p) = f.cokernel();
        assert_eq!(c.decompose().invariant_factors, ints(&[2]));
        assert!(f.then(&p).unwrap().is_zero());
        let im = f.image();
        assert!(im.module.is_isomorphic(&zz));
        assert!(im.surjection.then(&im.inclusion).unwrap().equals(&f));
    }

    #[test]
    fn projection_z2_to_z() {
        let z = RingSpec::Integers;
        let z2 = FpModule::free(&z, 2);
        let z1 = FpModule::free(&z, 1);
        let p = FpMorphism::new(&z2, &z1, IntMatrix::from_i64(&z, 1, &[vec![1], vec![0]]).unwrap()).unwrap();
        let (k, i) = p.kernel();
        assert!(k.is_isomorphic(&z1));
        assert!(i.then(&p).unwrap().is_zero());
        assert!(p.cokernel().0.is_zero_module());
        assert!(p.is_surjective());
    }

    #[test]
    fn doubling_on_z_mod_4() {
        let r = RingSpec::modulo(4).unwrap();
        let m = FpModule::free(&r, 1);
        let f = FpMorphism::scalar(&m, &Int::from(2));
        let (k, _) = f.kernel();
        let (c, _) = f.cokernel();
        assert_eq!(k.decompose().invariant_factors, ints(&[2]));
        assert_eq!(c.decompose().invariant_factors, ints(&[2]));
    }

    #[test]
    fn exactness_of_standard_sequence() {
        let z = RingSpec::Integers;
        let zz = FpModule::free(&z, 1);
        let two = FpMorphism::scalar(&zz, &Int::from(2));
        let (_, p) = two.cokernel();
        assert!(is_exact_at(&two, &p));
        assert!(!is_exact_at(&FpMorphism::zero(&zz, &zz), &p));
    }
}
