//! Countable chains `M_0 -> M_1 -> …` truncated at a stage bound.

use std::fmt;
use std::sync::Arc;

use super::verdict::{Truth, Verdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};
use crate::fpmod::{is_projective, tensor_morphism, FpModule, FpMorphism};
use crate::functor::{scheme_map, ProbeFamily};

/// Produces `f_i: M_i -> M_{i+1}` from `i` and `M_i`; must be deterministic.
pub type StageRule = Arc<dyn Fn(usize, &FpModule) -> Result<FpMorphism> + Send + Sync>;

/// Stage bound used when none is given.
pub const DEFAULT_BOUND: usize = 8;

#[derive(Clone)]
pub struct Telescope {
    stages: Vec<FpModule>,
    maps: Vec<FpMorphism>,
    rule: Option<StageRule>,
    /// Every map from this index on is an identity.
    identity_from: Option<usize>,
}

impl Telescope {
    /// A finite chain given by its maps; `stages` are read off the maps.
    pub fn new(first: FpModule, maps: Vec<FpMorphism>) -> Result<Self> {
        let mut stages = vec![first];
        for f in &maps {
            if !f.source().same_presentation(stages.last().expect("nonempty")) {
                return Err(Error::ShapeMismatch("telescope maps are not composable".into()));
            }
            stages.push(f.target().clone());
        }
        Ok(Telescope { stages, maps, rule: None, identity_from: None })
    }

    /// An infinite chain generated on demand.
    pub fn generated(first: FpModule, rule: StageRule) -> Self {
        Telescope { stages: vec![first], maps: Vec::new(), rule: Some(rule), identity_from: None }
    }

    /// `M -id-> M -id-> …`.
    pub fn constant(m: &FpModule) -> Self {
        Telescope::eventually_constant(m.clone(), Vec::new()).expect("no maps to compose")
    }

    /// The finite chain `maps` followed by identities forever.
    pub fn eventually_constant(first: FpModule, maps: Vec<FpMorphism>) -> Result<Self> {
        let mut t = Telescope::new(first, maps)?;
        t.identity_from = Some(t.maps.len());
        t.rule = Some(Arc::new(|_, m: &FpModule| Ok(FpMorphism::identity(m))));
        Ok(t)
    }

    /// Index after which every map is known to be an identity.
    pub fn identity_from(&self) -> Option<usize> {
        self.identity_from
    }

    /// `R -c_0-> R -c_1-> …` with `c_i = scalars(i)`.
    pub fn scalars(ring: &crate::exact::RingSpec, scalars: impl Fn(usize) -> Int + Send + Sync + 'static) -> Self {
        let r = FpModule::free(ring, 1);
        Telescope::generated(r, Arc::new(move |i, m: &FpModule| Ok(FpMorphism::scalar(m, &scalars(i)))))
    }

    pub fn is_infinite(&self) -> bool {
        self.rule.is_some()
    }

    /// Largest stage index available without a generation rule.
    pub fn known_stages(&self) -> usize {
        self.stages.len() - 1
    }

    /// Makes stages `0..=k` available; finite telescopes stop at their last stage.
    pub fn extend_to(&mut self, k: usize) -> Result<usize> {
        while self.stages.len() <= k {
            let Some(rule) = &self.rule else { break };
            let i = self.stages.len() - 1;
            let f = rule(i, &self.stages[i])?;
            if !f.source().same_presentation(&self.stages[i]) {
                return Err(Error::ShapeMismatch(format!("rule produced a map out of the wrong stage at {i}")));
            }
            self.stages.push(f.target().clone());
            self.maps.push(f);
        }
        Ok(self.known_stages().min(k))
    }

    pub fn stage(&self, i: usize) -> &FpModule {
        &self.stages[i]
    }

    pub fn map(&self, i: usize) -> &FpMorphism {
        &self.maps[i]
    }

    /// `M_i -> M_j` for `i ≤ j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<FpMorphism> {
        let mut f = FpMorphism::identity(&self.stages[i]);
        for k in i..j {
            f = f.then(&self.maps[k])?;
        }
        Ok(f)
    }

    /// A copy truncated at `k` (after generating up to `k`).
    pub fn truncated(&self, k: usize) -> Result<Telescope> {
        let mut t = self.clone();
        let k = t.extend_to(k)?;
        Telescope::new(t.stages[0].clone(), t.maps[..k].to_vec())
    }
}

impl fmt::Debug for Telescope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Telescope[{} known stages{}]",
            self.stages.len(),
            if self.rule.is_some() { ", generated" } else { "" }
        )
    }
}

/// `colim_{i ≤ K} (M_i ⊗ S)` with stabilization diagnostics.
#[derive(Clone, Debug)]
pub struct ColimitValue {
    pub bound: usize,
    /// Cokernel of `⊕_{i<K} M_i ⊗ S -> ⊕_{i≤K} M_i ⊗ S`, `x_i ↦ x_i - f_i(x_i)`.
    pub value: FpModule,
    /// `M_K ⊗ S -> value`, an isomorphism for a finite chain.
    pub top_to_value: FpMorphism,
    /// Image of `M_0 ⊗ S` in `M_K ⊗ S`.
    pub base_image: FpModule,
    /// `f_{K-1} ⊗ S` is an isomorphism.
    pub stabilized: bool,
    /// `M_0 ⊗ S` has isomorphic images at stages `K-1` and `K`.
    pub image_stabilized: bool,
}

pub fn telescope_colim_eval(t: &Telescope, s: &FpModule, bound: usize) -> Result<ColimitValue> {
    let mut t = t.clone();
    let k = t.extend_to(bound)?;
    let id_s = FpMorphism::identity(s);
    let mut parts = Vec::with_capacity(k + 1);
    let mut maps = Vec::with_capacity(k);
    for i in 0..=k {
        let (_, _, x) = tensor_morphism(&FpMorphism::identity(t.stage(i)), &id_s)?;
        parts.push(x.source().clone());
    }
    for i in 0..k {
        let (_, _, x) = tensor_morphism(t.map(i), &id_s)?;
        maps.push(x);
    }
    let ring = s.ring();
    let sum = FpModule::direct_sum(ring, &parts);
    let mut rows = Vec::new();
    for (i, fi) in maps.iter().enumerate() {
        for g in 0..parts[i].gens() {
            let e = parts[i].generator(g).coords;
            let mut row = sum.embed(i, &e);
            let image = sum.embed(i + 1, &fi.apply(&e));
            for (a, b) in row.iter_mut().zip(image) {
                *a = ring.sub(a, &b);
            }
            rows.push(row);
        }
    }
    let gens = IntMatrix::from_rows(ring, sum.module.gens(), rows)?;
    let q = crate::fpmod::quotient(&sum.module, &gens);
    let top = FpMorphism::new(&parts[k], &sum.module, sum.injection_matrix(k))?.then(&q.projection)?;

    let base = maps.iter().try_fold(FpMorphism::identity(&parts[0]), |acc, f| acc.then(f))?;
    let base_image = base.image().module;
    let (stabilized, image_stabilized) = if k == 0 {
        (true, true)
    } else {
        let last = &maps[k - 1];
        let below = maps[..k - 1].iter().try_fold(FpMorphism::identity(&parts[0]), |acc, f| acc.then(f))?;
        let img_below = below.image();
        let restricted = img_below.inclusion.then(last)?;
        (last.is_isomorphism(), restricted.is_injective())
    };
    Ok(ColimitValue { bound: k, value: q.module, top_to_value: top, base_image, stabilized, image_stabilized })
}

/// The truncated telescope isomorphisms on `D = ⊕_{i ≤ K} M_i`:
/// `f(n)_i = n_i - φ(n_{i-1})`, `r(n)_i = Σ_{j ≤ i} φ_{j→i}(n_j)`, together with
/// `g: D -> M_K` (last slot of `r`) and the last-slot section `σ`.
#[derive(Clone, Debug)]
pub struct TelescopeSplit {
    pub bound: usize,
    pub sum: FpModule,
    pub f: FpMorphism,
    pub r: FpMorphism,
    pub colimit_map: FpMorphism,
    pub section: FpMorphism,
    pub checks: SplitChecks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitChecks {
    pub r_after_f: bool,
    pub f_after_r: bool,
    pub section: bool,
    pub idempotent: bool,
}

impl SplitChecks {
    pub fn all(&self) -> bool {
        self.r_after_f && self.f_after_r && self.section && self.idempotent
    }
}

pub fn telescope_split(t: &Telescope, bound: usize) -> Result<TelescopeSplit> {
    let mut t = t.clone();
    let k = t.extend_to(bound)?;
    let ring = t.stage(0).ring().clone();
    let stages: Vec<FpModule> = (0..=k).map(|i| t.stage(i).clone()).collect();
    let sum = FpModule::direct_sum(&ring, &stages);
    let n = sum.module.gens();

    let mut f_rows = Vec::with_capacity(n);
    let mut r_rows = Vec::with_capacity(n);
    for (j, stage) in stages.iter().enumerate() {
        for g in 0..stage.gens() {
            let e = stage.generator(g).coords;
            let mut fr = sum.embed(j, &e);
            if j < k {
                let next = sum.embed(j + 1, &t.map(j).apply(&e));
                for (a, b) in fr.iter_mut().zip(next) {
                    *a = ring.sub(a, &b);
                }
            }
            f_rows.push(fr);
            let mut rr = vec![Int::from(0); n];
            for i in j..=k {
                let img = sum.embed(i, &t.composite(j, i)?.apply(&e));
                for (a, b) in rr.iter_mut().zip(img) {
                    *a = ring.add(a, &b);
                }
            }
            r_rows.push(rr);
        }
    }
    // rows are images of generators, so f acts as n ↦ (n_j - φ(n_{j-1}))_j
    let f = FpMorphism::new(&sum.module, &sum.module, IntMatrix::from_rows(&ring, n, f_rows)?)?;
    let r = FpMorphism::new(&sum.module, &sum.module, IntMatrix::from_rows(&ring, n, r_rows)?)?;
    let project_top = FpMorphism::new(&sum.module, &stages[k], sum.projection_matrix(k))?;
    let colimit_map = r.then(&project_top)?;
    let section = FpMorphism::new(&stages[k], &sum.module, sum.injection_matrix(k))?;

    let id = FpMorphism::identity(&sum.module);
    let e = colimit_map.then(&section)?;
    let checks = SplitChecks {
        r_after_f: f.then(&r)?.equals(&id),
        f_after_r: r.then(&f)?.equals(&id),
        section: section.then(&colimit_map)?.equals(&FpMorphism::identity(&stages[k])),
        idempotent: e.then(&e)?.equals(&e),
    };
    Ok(TelescopeSplit { bound: k, sum: sum.module, f, r, colimit_map, section, checks })
}

/// Per-probe stabilization of `Im[Hom(M_j, S) -> Hom(M_0, S)]`.
#[derive(Clone, Debug)]
pub struct ImageProfile {
    pub probe: FpModule,
    /// Size data of the images for `j = 0..=K` (decomposition strings).
    pub images: Vec<String>,
    pub stabilized: bool,
}

/// Chain-of-submodule-schemes test up to `bound`: every stage projective and
/// every transition injective after tensoring with each probe.
#[derive(Clone, Debug)]
pub struct ChainDetection {
    pub verdict: Verdict,
    pub image_profiles: Vec<ImageProfile>,
}

pub fn chain_scheme_detection(t: &Telescope, probes: &ProbeFamily, bound: usize) -> Result<ChainDetection> {
    let mut t = t.clone();
    let k = t.extend_to(bound)?;
    let mut image_profiles = Vec::with_capacity(probes.modules.len());
    for s in &probes.modules {
        image_profiles.push(image_profile(&t, s, k)?);
    }

    let verdict = |truth, witness| Verdict {
        predicate: "chain_scheme",
        truth,
        witness,
        sample: k,
        probes: probes.modules.len(),
        bound: Some(k),
        oracle_agrees: None,
    };
    for i in 0..=k {
        if !is_projective(t.stage(i))? {
            let w = Witness::StageNotProjective { stage: i, module: t.stage(i).clone() };
            return Ok(ChainDetection { verdict: verdict(Truth::False, w), image_profiles });
        }
    }
    let mut injective = Vec::new();
    for i in 0..k {
        for s in &probes.modules {
            let (_, _, map) = tensor_morphism(t.map(i), &FpMorphism::identity(s))?;
            let (ker, incl) = map.kernel();
            if let Some(j) = (0..ker.gens()).find(|&j| !map.source().is_zero_element(incl.matrix().row(j))) {
                let element = incl.matrix().row(j).to_vec();
                let w = Witness::ChainKernel { stage: i, probe: s.clone(), map, element };
                return Ok(ChainDetection { verdict: verdict(Truth::False, w), image_profiles });
            }
            injective.push(map);
        }
    }
    // Past an identity tail nothing new can happen, so the finite check is exact.
    let settled = match t.identity_from() {
        Some(s) => k >= s,
        None => !t.is_infinite(),
    };
    let truth = if settled { Truth::True } else { Truth::Undetermined { bound: k } };
    Ok(ChainDetection { verdict: verdict(truth, Witness::ChainInjective { maps: injective }), image_profiles })
}

fn image_profile(t: &Telescope, s: &FpModule, k: usize) -> Result<ImageProfile> {
    let target = scheme_map(&FpMorphism::identity(t.stage(0)))?;
    let at0 = target.source().evaluate(s)?;
    let mut images = Vec::with_capacity(k + 1);
    let mut last = None;
    let mut stabilized = false;
    for j in 0..=k {
        let restrict = scheme_map(&t.composite(0, j)?)?;
        let at_j = restrict.source().evaluate(s)?;
        let c = restrict.component_between(&at_j, &at0)?;
        let img = c.image().module.decompose();
        stabilized = last.as_ref() == Some(&img);
        images.push(img.to_string());
        last = Some(img);
    }
    Ok(ImageProfile { probe: s.clone(), images, stabilized: stabilized || k == 0 })
}
