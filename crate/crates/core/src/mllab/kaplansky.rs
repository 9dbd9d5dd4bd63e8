//! Filtrations of `⊕ N_i = M ⊕ M'` by block subsets compatible with both summands.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, RingSpec};
use crate::fpmod::{submodule, DirectSum, FpModule, FpMorphism};

/// One summand of the decomposition, as an inclusion with its projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub inclusion: FpMorphism,
    pub projection: FpMorphism,
}

/// A verified decomposition `M ⊕ M' = ⊕_{i ∈ I} N_i`.
#[derive(Clone, Debug)]
pub struct Decomposed {
    pub blocks: Vec<FpModule>,
    pub sum: DirectSum,
    pub m: Summand,
    pub m2: Summand,
}

impl Decomposed {
    pub fn new(blocks: Vec<FpModule>, m: Summand, m2: Summand) -> Result<Self> {
        let ring = blocks.first().map(|b| b.ring().clone()).unwrap_or(RingSpec::Integers);
        let sum = FpModule::direct_sum(&ring, &blocks);
        let total = &sum.module;
        let ok_shapes = [&m, &m2].iter().all(|s| {
            s.inclusion.target().same_presentation(total)
                && s.projection.source().same_presentation(total)
                && s.projection.target().same_presentation(s.inclusion.source())
        });
        if !ok_shapes {
            return Err(Error::UnverifiedDecomposition("summand maps do not meet the block sum".into()));
        }
        let fail = |what: &str| Err(Error::UnverifiedDecomposition(what.into()));
        for s in [&m, &m2] {
            if !s.inclusion.then(&s.projection)?.equals(&FpMorphism::identity(s.inclusion.source())) {
                return fail("a projection is not a retraction of its inclusion");
            }
        }
        if !m.inclusion.then(&m2.projection)?.is_zero() || !m2.inclusion.then(&m.projection)?.is_zero() {
            return fail("the summands overlap");
        }
        let e = m.projection.then(&m.inclusion)?;
        let e2 = m2.projection.then(&m2.inclusion)?;
        if !e.add(&e2)?.equals(&FpMorphism::identity(total)) {
            return fail("the summands do not span the block sum");
        }
        Ok(Decomposed { blocks, sum, m, m2 })
    }

    /// Decomposition from generators of `M` and `M'` inside `⊕ N_i`.
    pub fn from_generators(blocks: Vec<FpModule>, m_gens: &IntMatrix, m2_gens: &IntMatrix) -> Result<Self> {
        let ring = blocks.first().map(|b| b.ring().clone()).unwrap_or(RingSpec::Integers);
        let sum = FpModule::direct_sum(&ring, &blocks);
        let a = submodule(&sum.module, m_gens);
        let b = submodule(&sum.module, m2_gens);
        let pair = FpModule::direct_sum(&ring, &[a.module.clone(), b.module.clone()]);
        let both = FpMorphism::new(&pair.module, &sum.module, a.inclusion.matrix().vstack(b.inclusion.matrix())?)?;
        let inv = match both.inverse() {
            Some(inv) if both.is_surjective() => inv,
            _ => {
                return Err(Error::UnverifiedDecomposition(format!(
                    "M + M' is not a direct sum equal to {}",
                    sum.module.decompose()
                )))
            }
        };
        let pa = inv.then(&FpMorphism::new(&pair.module, &a.module, pair.projection_matrix(0))?)?;
        let pb = inv.then(&FpMorphism::new(&pair.module, &b.module, pair.projection_matrix(1))?)?;
        Decomposed::new(
            blocks,
            Summand { inclusion: a.inclusion, projection: pa },
            Summand { inclusion: b.inclusion, projection: pb },
        )
    }

    fn block_generators(&self, i: usize) -> Vec<Vec<crate::exact::Int>> {
        (0..self.blocks[i].gens()).map(|g| self.sum.embed(i, &self.blocks[i].generator(g).coords)).collect()
    }

    /// Blocks on which `x ∈ ⊕ N_i` has a nonzero component.
    pub fn support(&self, x: &[crate::exact::Int]) -> BTreeSet<usize> {
        (0..self.blocks.len()).filter(|&i| !self.blocks[i].is_zero_element(self.sum.component(i, x))).collect()
    }

    fn parts(&self, x: &[crate::exact::Int]) -> (Vec<crate::exact::Int>, Vec<crate::exact::Int>) {
        let a = self.m.inclusion.apply(&self.m.projection.apply(x));
        let b = self.m2.inclusion.apply(&self.m2.projection.apply(x));
        (a, b)
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationStage {
    pub blocks: BTreeSet<usize>,
    pub added: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    pub data: Decomposed,
    pub stages: Vec<FiltrationStage>,
}

/// The four conditions, each replayed from the stage data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiltrationChecks {
    /// Stages increase from 0 to everything.
    pub exhaustive: bool,
    /// Each step adds finitely many (at least one) blocks.
    pub finite_steps: bool,
    /// Each stage is the sum of its blocks.
    pub block_sums: bool,
    /// Each stage splits as its part in `M` plus its part in `M'`.
    pub compatible: bool,
}

impl FiltrationChecks {
    pub fn all(&self) -> bool {
        self.exhaustive && self.finite_steps && self.block_sums && self.compatible
    }
}

/// Builds stages by closing the smallest missing block under both projections.
pub fn kaplansky_filtration(data: &Decomposed) -> Result<Filtration> {
    let n = data.blocks.len();
    let mut current: BTreeSet<usize> = BTreeSet::new();
    let mut stages = vec![FiltrationStage { blocks: BTreeSet::new(), added: BTreeSet::new() }];
    while current.len() < n {
        let start = (0..n).find(|i| !current.contains(i)).expect("a block is missing");
        let mut added: BTreeSet<usize> = BTreeSet::from([start]);
        let mut frontier = vec![start];
        while let Some(j) = frontier.pop() {
            for x in data.block_generators(j) {
                let (a, b) = data.parts(&x);
                for i in data.support(&a).into_iter().chain(data.support(&b)) {
                    if !current.contains(&i) && added.insert(i) {
                        frontier.push(i);
                    }
                }
            }
        }
        current.extend(added.iter().copied());
        stages.push(FiltrationStage { blocks: current.clone(), added });
    }
    let f = Filtration { data: data.clone(), stages };
    if !f.replay()?.all() {
        return Err(Error::Inconsistent("closure produced a filtration violating its conditions".into()));
    }
    Ok(f)
}

impl Filtration {
    pub fn replay(&self) -> Result<FiltrationChecks> {
        let data = &self.data;
        let n = data.blocks.len();
        let first_empty = self.stages.first().is_some_and(|s| s.blocks.is_empty());
        let last_full = self.stages.last().is_some_and(|s| s.blocks.len() == n);
        let increasing =
            self.stages.windows(2).all(|w| w[0].blocks.is_subset(&w[1].blocks) && w[0].blocks != w[1].blocks);
        let finite_steps = self.stages.windows(2).all(|w| {
            let diff: BTreeSet<usize> = w[1].blocks.difference(&w[0].blocks).copied().collect();
            !diff.is_empty() && diff == w[1].added
        });

        let ring = data.sum.module.ring().clone();
        let mut block_sums = true;
        let mut compatible = true;
        for s in &self.stages {
            let gens: Vec<_> = s.blocks.iter().flat_map(|&i| data.block_generators(i)).collect();
            let width = data.sum.module.gens();
            let gm = IntMatrix::from_rows(&ring, width, gens.clone())?;
            let sub = submodule(&data.sum.module, &gm);
            let parts: Vec<FpModule> = s.blocks.iter().map(|&i| data.blocks[i].clone()).collect();
            let direct = FpModule::direct_sum(&ring, &parts).module;
            block_sums &= sub.module.is_isomorphic(&direct);
            for x in &gens {
                let (a, b) = data.parts(x);
                let inside = data.support(&a).is_subset(&s.blocks) && data.support(&b).is_subset(&s.blocks);
                let sum: Vec<_> = a.iter().zip(&b).map(|(p, q)| ring.add(p, q)).collect();
                compatible &= inside && data.sum.module.elements_equal(&sum, x);
            }
        }
        Ok(FiltrationChecks {
            exhaustive: first_empty && last_full && increasing,
            finite_steps,
            block_sums,
            compatible,
        })
    }
}
