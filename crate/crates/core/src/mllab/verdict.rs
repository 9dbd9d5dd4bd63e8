use std::fmt;

use num_traits::Zero;

use super::kaplansky::Filtration;
use crate::error::Result;
use crate::exact::{Int, IntMatrix, LeftSolver};
use crate::fpmod::{element_trace_ideal, is_projective, FpModule, FpMorphism};
use crate::functor::{qc_map, tensor_to_nat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    /// No counterexample up to the stage bound, which cannot settle the question.
    Undetermined {
        bound: usize,
    },
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truth::True => f.write_str("true"),
            Truth::False => f.write_str("false"),
            Truth::Undetermined { bound } => write!(f, "undetermined(K={bound})"),
        }
    }
}

/// A predicate outcome with the data needed to re-check it.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub predicate: &'static str,
    pub truth: Truth,
    pub witness: Witness,
    /// Elements, pairs or stages examined.
    pub sample: usize,
    /// Probe modules used; verdicts with probes are relative to them.
    pub probes: usize,
    pub bound: Option<usize>,
    /// Agreement with the independent decision procedure, when one applies.
    pub oracle_agrees: Option<bool>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.truth == Truth::True
    }

    /// Re-verify the witness from its own data.
    pub fn replay(&self) -> Result<bool> {
        self.witness.replay()
    }
}

/// `m - scalar * x = y · relations` with `scalar = functional(m)`.
#[derive(Clone, Debug)]
pub struct TraceCertificate {
    pub element: Vec<Int>,
    /// Values of a functional `M -> R` on the generators.
    pub functional: Vec<Int>,
    pub scalar: Int,
    pub x: Vec<Int>,
    pub y: Vec<Int>,
}

/// `m ⊗ 1` lifted to `lifted ∈ M ⊗ (d)`.
#[derive(Clone, Debug)]
pub struct TttCertificate {
    pub element: Vec<Int>,
    pub ideal_generator: Int,
    pub lifted: Vec<Int>,
}

/// Comparison `N ⊗ M -> Hom(M*, N)` at one probe, with its inverse when it is an isomorphism.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub probe: FpModule,
    pub map: FpMorphism,
    pub inverse: Option<FpMorphism>,
}

#[derive(Clone, Debug)]
pub enum Witness {
    None,
    TraceCertificates {
        module: FpModule,
        certificates: Vec<TraceCertificate>,
    },
    /// `element ∉ (trace_generator) · M`.
    TraceFailure {
        module: FpModule,
        element: Vec<Int>,
        trace_generator: Int,
    },
    TttCertificates {
        module: FpModule,
        certificates: Vec<TttCertificate>,
    },
    TttFailure {
        module: FpModule,
        element: Vec<Int>,
        ideal_generator: Int,
    },
    /// `π ∘ s ∘ f = f`.
    Section {
        pi: FpMorphism,
        f: FpMorphism,
        s: FpMorphism,
    },
    NoSection {
        pi: FpMorphism,
        f: FpMorphism,
    },
    /// `r ∘ i` fixes the rows of `generators`.
    Retraction {
        inclusion: FpMorphism,
        generators: IntMatrix,
        r: FpMorphism,
    },
    /// Obstruction to purity: a test module and a nonzero element of `ker(S ⊗ i)`.
    NotPure {
        inclusion: FpMorphism,
        probe: FpModule,
        element: Vec<Int>,
    },
    Nested(Box<Verdict>),
    /// Split inclusions of free modules with their retractions.
    FreeSummands {
        module: FpModule,
        summands: Vec<(FpMorphism, FpMorphism)>,
    },
    MissedGenerator {
        union: FpMorphism,
        generator: usize,
    },
    StrictMl {
        module: FpModule,
        comparisons: Vec<Comparison>,
    },
    /// Transition `stage` tensored with the probe kills `element`.
    ChainKernel {
        stage: usize,
        probe: FpModule,
        map: FpMorphism,
        element: Vec<Int>,
    },
    ChainInjective {
        maps: Vec<FpMorphism>,
    },
    StageNotProjective {
        stage: usize,
        module: FpModule,
    },
    Monomorphism {
        map: FpMorphism,
    },
    /// A nonzero element killed by `map`.
    Kernel {
        map: FpMorphism,
        element: Vec<Int>,
    },
    Filtration(Box<Filtration>),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::None => "none",
            Witness::TraceCertificates { .. } => "trace_certificates",
            Witness::TraceFailure { .. } => "trace_failure",
            Witness::TttCertificates { .. } => "ttt_certificates",
            Witness::TttFailure { .. } => "ttt_failure",
            Witness::Section { .. } => "section",
            Witness::NoSection { .. } => "no_section",
            Witness::Retraction { .. } => "retraction",
            Witness::NotPure { .. } => "not_pure",
            Witness::Nested(_) => "nested",
            Witness::FreeSummands { .. } => "free_summands",
            Witness::MissedGenerator { .. } => "missed_generator",
            Witness::StrictMl { .. } => "strict_ml",
            Witness::ChainKernel { .. } => "chain_kernel",
            Witness::ChainInjective { .. } => "chain_injective",
            Witness::StageNotProjective { .. } => "stage_not_projective",
            Witness::Monomorphism { .. } => "monomorphism",
            Witness::Kernel { .. } => "kernel",
            Witness::Filtration(_) => "filtration",
        }
    }

    pub fn replay(&self) -> Result<bool> {
        match self {
            Witness::None => Ok(true),
            Witness::TraceCertificates { module, certificates } => {
                Ok(certificates.iter().all(|c| replay_trace_certificate(module, c)))
            }
            Witness::TraceFailure { module, element, trace_generator } => {
                let d = element_trace_ideal(&module.element(element.clone())?)?;
                Ok(&d == trace_generator && !in_multiple(module, trace_generator, element))
            }
            Witness::TttCertificates { module, certificates } => {
                for c in certificates {
                    if !replay_ttt(module, c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Witness::TttFailure { module, element, ideal_generator } => {
                let (incl, _) = ideal_inclusion(module, ideal_generator);
                let (_, _, map) = crate::fpmod::tensor_morphism(&FpMorphism::identity(module), &incl)?;
                Ok(!module.is_zero_element(element) && map.lift(element).is_none())
            }
            Witness::Section { pi, f, s } => Ok(f.then(s)?.then(pi)?.equals(f)),
            Witness::NoSection { pi, f } => Ok(super::local::find_section(pi, f)?.is_none()),
            Witness::Retraction { inclusion, generators, r } => {
                let ri = inclusion.then(r)?;
                Ok((0..generators.rows()).all(|k| {
                    let n = generators.row(k);
                    inclusion.source().elements_equal(&ri.apply(n), n)
                }))
            }
            Witness::NotPure { inclusion, probe, element } => {
                let (_, _, si) = crate::fpmod::tensor_morphism(&FpMorphism::identity(probe), inclusion)?;
                Ok(!si.source().is_zero_element(element) && si.target().is_zero_element(&si.apply(element)))
            }
            Witness::Nested(v) => v.replay(),
            Witness::FreeSummands { summands, .. } => Ok(summands
                .iter()
                .all(|(i, r)| i.then(r).map(|c| c.equals(&FpMorphism::identity(i.source()))).unwrap_or(false))),
            Witness::MissedGenerator { union, generator } => {
                let g = union.target().generator(*generator);
                Ok(union.lift(&g.coords).is_none())
            }
            Witness::StrictMl { comparisons, .. } => Ok(comparisons.iter().all(|c| match &c.inverse {
                Some(inv) => {
                    c.map.then(inv).map(|x| x.equals(&FpMorphism::identity(c.map.source()))).unwrap_or(false)
                        && inv.then(&c.map).map(|x| x.equals(&FpMorphism::identity(c.map.target()))).unwrap_or(false)
                }
                None => !c.map.is_isomorphism(),
            })),
            Witness::ChainInjective { maps } => Ok(maps.iter().all(FpMorphism::is_injective)),
            Witness::StageNotProjective { module, .. } => Ok(!is_projective(module)?),
            Witness::Monomorphism { map } => Ok(map.is_injective()),
            Witness::ChainKernel { map, element, .. } | Witness::Kernel { map, element } => {
                Ok(!map.source().is_zero_element(element) && map.target().is_zero_element(&map.apply(element)))
            }
            Witness::Filtration(f) => Ok(f.replay()?.all()),
        }
    }
}

fn replay_trace_certificate(m: &FpModule, c: &TraceCertificate) -> bool {
    let ring = m.ring();
    let rel = m.relations();
    let functional_ok = (0..rel.rows()).all(|k| dot(ring, rel.row(k), &c.functional).is_zero());
    if !functional_ok || ring.reduce(dot(ring, &c.element, &c.functional)) != ring.reduce(c.scalar.clone()) {
        return false;
    }
    let lhs: Vec<Int> = c.element.iter().zip(&c.x).map(|(e, x)| ring.sub(e, &ring.mul(&c.scalar, x))).collect();
    let rhs = rel.apply_row(&c.y);
    lhs.iter().zip(&rhs).all(|(a, b)| ring.reduce(a - b).is_zero())
}

fn replay_ttt(m: &FpModule, c: &TttCertificate) -> Result<bool> {
    let (incl, ideal) = ideal_inclusion(m, &c.ideal_generator);
    let r = FpModule::free(m.ring(), 1);
    let factor = tensor_to_nat(m, &ideal, &c.lifted)?;
    let eta = tensor_to_nat(m, &r, &c.element)?;
    factor.then(&qc_map(&incl)?)?.equals(&eta)
}

pub(crate) fn dot(ring: &crate::exact::RingSpec, a: &[Int], b: &[Int]) -> Int {
    ring.reduce(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// The ideal `(d)` as a submodule of `R`, with its inclusion.
pub(crate) fn ideal_inclusion(m: &FpModule, d: &Int) -> (FpMorphism, FpModule) {
    let ring = m.ring();
    let r = FpModule::free(ring, 1);
    let sub = crate::fpmod::submodule(&r, &IntMatrix::row_vector(ring, vec![d.clone()]));
    (sub.inclusion, sub.module)
}

/// Solve `x · (d I) + y · relations = element`.
pub(crate) fn solve_multiple(m: &FpModule, d: &Int, element: &[Int]) -> Option<(Vec<Int>, Vec<Int>)> {
    let ring = m.ring();
    let g = m.gens();
    let stacked = IntMatrix::identity(ring, g).scale(d).vstack(m.relations()).expect("same width");
    let sol = LeftSolver::new(&stacked).solve(element)?;
    Some((sol[..g].to_vec(), sol[g..].to_vec()))
}

pub(crate) fn in_multiple(m: &FpModule, d: &Int, element: &[Int]) -> bool {
    solve_multiple(m, d, element).is_some()
}
