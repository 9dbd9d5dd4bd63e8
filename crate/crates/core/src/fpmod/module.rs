use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, LeftSolver, RingSpec};

/// `M = R^gens / rowspace(relations)`, with its Smith data computed once.
#[derive(Clone)]
pub struct FpModule(Arc<Inner>);

struct Inner {
    ring: RingSpec,
    gens: usize,
    relations: IntMatrix,
    solver: LeftSolver,
    /// `diag[j]` is the j-th Smith entry (zero past the rank), one per generator.
    diag: Vec<Int>,
    /// Generator indices whose Smith entry is not a unit.
    kept: Vec<usize>,
}

/// `M ≅ R^rank ⊕ R/(d_1) ⊕ ... ⊕ R/(d_k)` with `d_1 | d_2 | ...` non-units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub rank: usize,
    pub invariant_factors: Vec<Int>,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "R".to_string() } else { format!("R^{}", self.rank) });
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("R/({d})")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl FpModule {
    pub fn new(ring: &RingSpec, gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != gens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} columns for {gens} generators",
                relations.cols()
            )));
        }
        if relations.ring() != ring {
            return Err(Error::RingMismatch(ring.name(), relations.ring().name()));
        }
        let solver = LeftSolver::new(&relations);
        let smith = solver.smith();
        let n = relations.rows().min(gens);
        let diag: Vec<Int> = (0..gens).map(|j| if j < n { smith.d.get(j, j).clone() } else { Int::zero() }).collect();
        let kept = (0..gens).filter(|&j| !ring.is_unit(&diag[j])).collect();
        Ok(FpModule(Arc::new(Inner { ring: ring.clone(), gens, relations, solver, diag, kept })))
    }

    /// Module whose generators are the columns of `relations`.
    pub fn from_relations(relations: IntMatrix) -> Self {
        let ring = relations.ring().clone();
        let gens = relations.cols();
        Self::new(&ring, gens, relations).expect("columns define the generators")
    }

    pub fn free(ring: &RingSpec, rank: usize) -> Self {
        Self::from_relations(IntMatrix::zeros(ring, 0, rank))
    }

    pub fn zero(ring: &RingSpec) -> Self {
        Self::free(ring, 0)
    }

    /// `R/(d)` on one generator.
    pub fn cyclic(ring: &RingSpec, d: impl Into<Int>) -> Self {
        Self::from_relations(IntMatrix::new(ring, 1, 1, vec![d.into()]).expect("1x1"))
    }

    /// `R^rank ⊕ R/(d_1) ⊕ ...` in canonical presentation (torsion generators first).
    pub fn from_decomposition(ring: &RingSpec, rank: usize, factors: &[Int]) -> Self {
        let t = factors.len();
        let mut rel = IntMatrix::zeros(ring, t, t + rank);
        for (i, d) in factors.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        Self::from_relations(rel)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.0.ring
    }

    pub fn gens(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn decompose(&self) -> Decomposition {
        let mut rank = 0;
        let mut invariant_factors = Vec::new();
        for &j in &self.0.kept {
            let d = &self.0.diag[j];
            if d.is_zero() {
                rank += 1;
            } else {
                invariant_factors.push(d.clone());
            }
        }
        Decomposition { rank, invariant_factors }
    }

    pub fn is_zero_module(&self) -> bool {
        self.0.kept.is_empty()
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ring() == other.ring() && self.decompose() == other.decompose()
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        let mut n = Int::one();
        for &j in &self.0.kept {
            n *= self.ring().quotient_order(&self.0.diag[j])?;
        }
        Some(n)
    }

    /// Number of canonical generators (`rank + number of invariant factors`).
    pub fn canonical_gens(&self) -> usize {
        self.0.kept.len()
    }

    /// Canonical coordinates of `x`: two vectors are the same element iff their
    /// normal forms agree.
    pub fn normal_form(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.gens(), "element has wrong length");
        let y = self.0.solver.smith().v.apply_row(x);
        let ring = self.ring();
        self.0
            .kept
            .iter()
            .map(|&j| {
                let d = &self.0.diag[j];
                let c = y[j].clone();
                if d.is_zero() {
                    c
                } else {
                    num_integer::Integer::mod_floor(&c, d)
                }
            })
            .map(|c| ring.reduce(c))
            .collect()
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        self.normal_form(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[Int], y: &[Int]) -> bool {
        let ring = self.ring();
        let diff: Vec<Int> = x.iter().zip(y).map(|(a, b)| ring.sub(a, b)).collect();
        self.is_zero_element(&diff)
    }

    /// Coefficients `c` with `x = c · relations`, if `x` is a relation.
    pub fn relation_coefficients(&self, x: &[Int]) -> Option<Vec<Int>> {
        self.0.solver.solve(x)
    }

    /// Canonical presentation `C`, maps `to: M -> C` (g × k) and `from: C -> M` (k × g).
    pub fn canonical(&self) -> (FpModule, IntMatrix, IntMatrix) {
        let d = self.decompose();
        let c = FpModule::from_decomposition(self.ring(), d.rank, &d.invariant_factors);
        let smith = self.0.solver.smith();
        let to = smith.v.select_columns(&self.0.kept);
        let from = smith.v_inv.select_rows(&self.0.kept);
        (c, to, from)
    }

    /// Element from coordinates.
    pub fn element(&self, coords: Vec<Int>) -> Result<ModuleElement> {
        if coords.len() != self.gens() {
            return Err(Error::DimensionMismatch(format!(
                "element with {} coordinates in a module with {} generators",
                coords.len(),
                self.gens()
            )));
        }
        let coords = coords.into_iter().map(|c| self.ring().reduce(c)).collect();
        Ok(ModuleElement { module: self.clone(), coords })
    }

    pub fn generator(&self, i: usize) -> ModuleElement {
        let mut c = vec![Int::zero(); self.gens()];
        c[i] = Int::one();
        ModuleElement { module: self.clone(), coords: c }
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement { module: self.clone(), coords: vec![Int::zero(); self.gens()] }
    }

    /// Same presentation (structural, not isomorphism).
    pub fn same_presentation(&self, other: &FpModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.gens() == other.gens() && self.relations() == other.relations())
    }

    /// Finite direct sum with its structure maps.
    pub fn direct_sum(ring: &RingSpec, parts: &[FpModule]) -> DirectSum {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|m| m.relations()).collect();
        let rel = IntMatrix::block_diagonal(ring, &blocks);
        let module = FpModule::from_relations(rel);
        let total = module.gens();
        let mut offsets = Vec::with_capacity(parts.len());
        let mut off = 0;
        for p in parts {
            offsets.push(off);
            off += p.gens();
        }
        DirectSum { module, parts: parts.to_vec(), offsets, total }
    }

    pub fn power(&self, k: usize) -> DirectSum {
        FpModule::direct_sum(self.ring(), &vec![self.clone(); k])
    }
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring() == other.ring() && self.same_presentation(other)
    }
}

impl Eq for FpModule {}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpModule[{}; {} gens; rel {}] ≅ {}", self.ring(), self.gens(), self.relations(), self.decompose())
    }
}

/// A finite direct sum `⊕ parts` presented block-diagonally.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FpModule,
    pub parts: Vec<FpModule>,
    offsets: Vec<usize>,
    total: usize,
}

impl DirectSum {
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Matrix of the i-th injection `parts[i] -> sum`.
    pub fn injection_matrix(&self, i: usize) -> IntMatrix {
        let ring = self.module.ring();
        let g = self.parts[i].gens();
        let mut m = IntMatrix::zeros(ring, g, self.total);
        for k in 0..g {
            m.set(k, self.offsets[i] + k, Int::one());
        }
        m
    }

    /// Matrix of the i-th projection `sum -> parts[i]`.
    pub fn projection_matrix(&self, i: usize) -> IntMatrix {
        self.injection_matrix(i).transpose()
    }

    /// Embed a vector of `parts[i]` into the sum.
    pub fn embed(&self, i: usize, x: &[Int]) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.total];
        v[self.offsets[i]..self.offsets[i] + x.len()].clone_from_slice(x);
        v
    }

    /// Component of `x` in `parts[i]`.
    pub fn component<'a>(&self, i: usize, x: &'a [Int]) -> &'a [Int] {
        &x[self.offsets[i]..self.offsets[i] + self.parts[i].gens()]
    }
}

/// An element of a finitely presented module, compared modulo relations.
#[derive(Clone, Debug)]
pub struct ModuleElement {
    pub module: FpModule,
    pub coords: Vec<Int>,
}

impl ModuleElement {
    pub fn is_zero(&self) -> bool {
        self.module.is_zero_element(&self.coords)
    }

    pub fn normal_form(&self) -> Vec<Int> {
        self.module.normal_form(&self.coords)
    }
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        self.module == other.module && self.module.elements_equal(&self.coords, &other.coords)
    }
}
