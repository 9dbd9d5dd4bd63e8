//! Runs the analyses of a manifest and assembles the report.

use cofun_core::error::Error;
use cofun_core::exact::{IntMatrix, RingSpec};
use cofun_core::fpmod::{dual_module, free_cover, projective_section, purity, split_retraction, FpModule, FpMorphism};
use cofun_core::functor::{qc, scheme, ProbeFamily};
use cofun_core::mllab::{
    chain_scheme_detection, finite_free_summands, free_embedding, is_trace_module, locally_projective_verdict,
    locally_split_retraction, strict_ml_verdict_on, telescope_colim_eval, telescope_split, ttt_cokernel_check,
    Telescope, Truth, Verdict, Witness, DEFAULT_BOUND,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::codec;
use crate::manifest::{
    Analysis, Entity, Manifest, TelescopeDecl, MODULE_PREDICATES, MORPHISM_PREDICATES, TELESCOPE_PREDICATES,
};
use crate::report::{Bounds, EvaluationEntry, Item, ReplayStatus, Report, Settings, VerdictEntry, SCHEMA_VERSION};

#[derive(Clone, Debug)]
pub struct Flags {
    pub bound: Option<usize>,
    pub replay: bool,
    /// Extra probe modules with the text they were given as.
    pub probe_extra: Vec<(String, FpModule)>,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { bound: None, replay: true, probe_extra: Vec::new() }
    }
}

struct Ctx<'a> {
    ring: &'a RingSpec,
    flags: &'a Flags,
    extra: Vec<FpModule>,
}

impl Ctx<'_> {
    fn probes(&self, base: ProbeFamily) -> ProbeFamily {
        self.extra.iter().fold(base, |p, m| p.with_module(m.clone()))
    }

    fn entry(&self, v: &Verdict) -> VerdictEntry {
        let witness = codec::witness(&v.witness);
        self.entry_raw(
            v.predicate,
            v.truth.to_string(),
            witness,
            Bounds { k: v.bound, probes: v.probes, sample: v.sample },
            v.oracle_agrees,
        )
    }

    fn entry_raw(
        &self,
        predicate: &str,
        value: String,
        witness: Value,
        bounds: Bounds,
        oracle_agrees: Option<bool>,
    ) -> VerdictEntry {
        let replay = match (self.flags.replay, witness.get("kind").and_then(Value::as_str)) {
            (_, Some("none")) | (_, None) => ReplayStatus::NotApplicable,
            (false, _) => ReplayStatus::Skipped,
            (true, _) => match codec::replay(self.ring, &witness) {
                Ok(true) => ReplayStatus::Ok,
                _ => ReplayStatus::Failed,
            },
        };
        VerdictEntry {
            predicate: predicate.to_string(),
            value,
            witness,
            bounds,
            oracle_agrees,
            replay,
            error: None,
            internal: false,
        }
    }

    fn error(&self, predicate: &str, e: &Error) -> VerdictEntry {
        VerdictEntry {
            predicate: predicate.to_string(),
            value: "error".into(),
            witness: json!({ "kind": "none" }),
            bounds: Bounds { k: None, probes: 0, sample: 0 },
            oracle_agrees: None,
            replay: ReplayStatus::NotApplicable,
            error: Some(e.to_string()),
            internal: matches!(e, Error::Inconsistent(_)),
        }
    }
}

fn bool_value(b: bool) -> String {
    if b { Truth::True } else { Truth::False }.to_string()
}

fn expand<'a>(a: &'a Analysis, all: &'a [&'a str]) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for p in &a.predicates {
        let ps: Vec<&str> = if p == "all" { all.to_vec() } else { vec![p.as_str()] };
        for q in ps {
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

fn structure_of(m: &FpModule) -> Value {
    let d = m.decompose();
    json!({ "rank": d.rank, "invariant_factors": d.invariant_factors.iter().map(codec::int).collect::<Vec<_>>() })
}

fn analyze_module(ctx: &Ctx, a: &Analysis, m: &FpModule) -> Item {
    let probes = ctx.probes(ProbeFamily::for_modules(ctx.ring, &[m]));
    let mut verdicts = Vec::new();
    let mut evaluations = Vec::new();
    let preds: Vec<&str> = expand(a, MODULE_PREDICATES)
        .into_iter()
        .filter(|p| !(*p == "free_summands" && !ctx.ring.is_integers() && a.predicates.iter().any(|q| q == "all")))
        .collect();
    for p in preds {
        let result = match p {
            "decompose" => continue,
            "trace" => is_trace_module(m).map(|v| ctx.entry(&v)),
            "ttt" => ttt_cokernel_check(m).map(|v| ctx.entry(&v)),
            "strict_ml" => strict_ml_verdict_on(m, &probes).map(|v| ctx.entry(&v)),
            "locally_projective" => locally_projective_verdict(m).map(|v| ctx.entry(&v)),
            "free_summands" => finite_free_summands(m).map(|f| ctx.entry(&f.verdict)),
            "free_embedding" => free_embedding(m).map(|v| ctx.entry(&v)),
            "projective" => projective_section(m).map(|s| {
                let pi = free_cover(m);
                let f = FpMorphism::identity(m);
                let (value, w) = match s {
                    Some(s) => (true, Witness::Section { pi, f, s }),
                    None => (false, Witness::NoSection { pi, f }),
                };
                ctx.entry_raw(
                    "projective",
                    bool_value(value),
                    codec::witness(&w),
                    Bounds { k: None, probes: 0, sample: 1 },
                    None,
                )
            }),
            "evaluate" => {
                match evaluate_module(m, &probes) {
                    Ok(mut e) => evaluations.append(&mut e),
                    Err(e) => verdicts.push(ctx.error("evaluate", &e)),
                }
                continue;
            }
            _ => unreachable!("validated by the parser"),
        };
        verdicts.push(result.unwrap_or_else(|e| ctx.error(p, &e)));
    }
    Item {
        name: a.name.clone(),
        kind: "module".into(),
        line: a.line,
        decomposition: m.decompose().to_string(),
        structure: structure_of(m),
        verdicts,
        evaluations,
    }
}

fn evaluate_module(m: &FpModule, probes: &ProbeFamily) -> cofun_core::Result<Vec<EvaluationEntry>> {
    let mut out = vec![EvaluationEntry {
        functor: "dual".into(),
        probe: None,
        value: dual_module(m)?.module.decompose().to_string(),
        details: None,
    }];
    for (label, f) in [("qc", qc(m)), ("scheme", scheme(m))] {
        for s in &probes.modules {
            out.push(EvaluationEntry {
                functor: label.into(),
                probe: Some(s.decompose().to_string()),
                value: f.evaluate(s)?.value.decompose().to_string(),
                details: None,
            });
        }
    }
    Ok(out)
}

fn analyze_morphism(ctx: &Ctx, a: &Analysis, f: &FpMorphism) -> Item {
    let mut verdicts = Vec::new();
    let mut evaluations = Vec::new();
    let n = f.source();
    let injective_pre = || -> cofun_core::Result<()> {
        if f.is_injective() {
            Ok(())
        } else {
            Err(Error::Precondition("the morphism is not injective".into()))
        }
    };
    let all_gens = IntMatrix::identity(ctx.ring, n.gens());
    for p in expand(a, MORPHISM_PREDICATES) {
        let result: cofun_core::Result<VerdictEntry> = match p {
            "kernel" | "cokernel" | "image" => {
                let module = match p {
                    "kernel" => f.kernel().0,
                    "cokernel" => f.cokernel().0,
                    _ => f.image().module,
                };
                evaluations.push(EvaluationEntry {
                    functor: p.into(),
                    probe: None,
                    value: module.decompose().to_string(),
                    details: Some(structure_of(&module)),
                });
                continue;
            }
            "injective" => {
                let (k, incl) = f.kernel();
                let nonzero = (0..k.gens()).map(|i| incl.apply(&k.generator(i).coords)).find(|x| !n.is_zero_element(x));
                let (value, w) = match nonzero {
                    None => (true, Witness::Monomorphism { map: f.clone() }),
                    Some(element) => (false, Witness::Kernel { map: f.clone(), element }),
                };
                Ok(ctx.entry_raw(
                    "injective",
                    bool_value(value),
                    codec::witness(&w),
                    Bounds { k: None, probes: 0, sample: 1 },
                    None,
                ))
            }
            "surjective" => (|| {
                let t = f.target();
                let lifts: Vec<_> = (0..t.gens()).map(|i| f.lift(&t.generator(i).coords)).collect();
                let witness = match lifts.iter().position(Option::is_none) {
                    Some(generator) => codec::witness(&Witness::MissedGenerator { union: f.clone(), generator }),
                    None => {
                        let rows: Vec<_> = lifts.into_iter().map(|l| l.expect("all lift")).collect();
                        let pre = IntMatrix::from_rows(ctx.ring, n.gens(), rows)?;
                        json!({ "kind": "surjection", "map": codec::morphism(f), "preimages": codec::matrix(&pre) })
                    }
                };
                let value = witness["kind"] == "surjection";
                Ok(ctx.entry_raw(
                    "surjective",
                    bool_value(value),
                    witness,
                    Bounds { k: None, probes: 0, sample: t.gens() },
                    None,
                ))
            })(),
            "pure" => injective_pre().and_then(|_| purity(f)).map(|pu| {
                let probes = pu.test_modules.len();
                let w = match (pu.retraction, pu.obstruction) {
                    (Some(r), _) => Witness::Retraction { inclusion: f.clone(), generators: all_gens.clone(), r },
                    (None, Some((probe, element))) => Witness::NotPure { inclusion: f.clone(), probe, element },
                    (None, None) => Witness::None,
                };
                ctx.entry_raw(
                    "pure",
                    bool_value(pu.pure),
                    codec::witness(&w),
                    Bounds { k: None, probes, sample: 1 },
                    None,
                )
            }),
            "split" => injective_pre().and_then(|_| split_retraction(f)).and_then(|r| {
                let w = match r {
                    Some(r) => Witness::Retraction { inclusion: f.clone(), generators: all_gens.clone(), r },
                    None => match purity(f)?.obstruction {
                        Some((probe, element)) => Witness::NotPure { inclusion: f.clone(), probe, element },
                        None => {
                            return Err(Error::Inconsistent("unsplit inclusion that passes the purity probes".into()))
                        }
                    },
                };
                let value = matches!(w, Witness::Retraction { .. });
                Ok(ctx.entry_raw(
                    "split",
                    bool_value(value),
                    codec::witness(&w),
                    Bounds { k: None, probes: 0, sample: 1 },
                    None,
                ))
            }),
            "locally_split" => {
                injective_pre().and_then(|_| locally_split_retraction(f, &all_gens)).map(|v| ctx.entry(&v))
            }
            _ => unreachable!("validated by the parser"),
        };
        verdicts.push(result.unwrap_or_else(|e| ctx.error(p, &e)));
    }
    Item {
        name: a.name.clone(),
        kind: "morphism".into(),
        line: a.line,
        decomposition: format!("{} -> {}", n.decompose(), f.target().decompose()),
        structure: json!({ "source": structure_of(n), "target": structure_of(f.target()) }),
        verdicts,
        evaluations,
    }
}

fn telescope_probes(ctx: &Ctx, t: &Telescope, k: usize) -> ProbeFamily {
    let mut mods: Vec<FpModule> = (0..=k).map(|i| t.stage(i).clone()).collect();
    mods.extend((0..k).map(|i| t.map(i).cokernel().0));
    let refs: Vec<&FpModule> = mods.iter().collect();
    ctx.probes(ProbeFamily::for_modules(ctx.ring, &refs))
}

fn analyze_telescope(ctx: &Ctx, a: &Analysis, decl: &TelescopeDecl) -> Item {
    let bound = a.bound.or(ctx.flags.bound).unwrap_or(DEFAULT_BOUND);
    let mut t = decl.telescope.clone();
    let mut verdicts = Vec::new();
    let mut evaluations = Vec::new();
    let k = match t.extend_to(bound) {
        Ok(k) => k,
        Err(e) => {
            verdicts.push(ctx.error("telescope", &e));
            0
        }
    };
    let probes = telescope_probes(ctx, &t, k);
    for p in expand(a, TELESCOPE_PREDICATES) {
        let result: cofun_core::Result<VerdictEntry> = match p {
            "colim" => {
                for s in &probes.modules {
                    match telescope_colim_eval(&t, s, bound) {
                        Ok(c) => evaluations.push(EvaluationEntry {
                            functor: format!("colim_K={}", c.bound),
                            probe: Some(s.decompose().to_string()),
                            value: c.value.decompose().to_string(),
                            details: Some(json!({
                                "base_image": c.base_image.decompose().to_string(),
                                "stabilized": c.stabilized,
                                "image_stabilized": c.image_stabilized,
                            })),
                        }),
                        Err(e) => verdicts.push(ctx.error("colim", &e)),
                    }
                }
                continue;
            }
            "split" => telescope_split(&t, bound).map(|s| {
                let mut w = json!({ "kind": "split_pair", "f": codec::morphism(&s.f), "r": codec::morphism(&s.r) });
                w["checks"] = json!({
                    "r_after_f": s.checks.r_after_f,
                    "f_after_r": s.checks.f_after_r,
                    "section": s.checks.section,
                    "idempotent": s.checks.idempotent,
                });
                ctx.entry_raw(
                    "telescope_split",
                    bool_value(s.checks.all()),
                    w,
                    Bounds { k: Some(s.bound), probes: 0, sample: s.bound + 1 },
                    None,
                )
            }),
            "chain_detection" => chain_scheme_detection(&t, &probes, bound).map(|c| {
                for ip in &c.image_profiles {
                    evaluations.push(EvaluationEntry {
                        functor: "restriction_images".into(),
                        probe: Some(ip.probe.decompose().to_string()),
                        value: ip.images.last().cloned().unwrap_or_default(),
                        details: Some(json!({ "images": ip.images, "stabilized": ip.stabilized })),
                    });
                }
                ctx.entry(&c.verdict)
            }),
            _ => unreachable!("validated by the parser"),
        };
        verdicts.push(result.unwrap_or_else(|e| ctx.error(p, &e)));
    }
    let stages: Vec<String> = (0..=k).map(|i| t.stage(i).decompose().to_string()).collect();
    Item {
        name: a.name.clone(),
        kind: "telescope".into(),
        line: a.line,
        decomposition: format!("({})", decl.description),
        structure: json!({ "infinite": t.is_infinite(), "stages": stages }),
        verdicts,
        evaluations,
    }
}

/// Analyses run in parallel; items keep manifest order.
pub fn run(manifest: &Manifest, flags: &Flags) -> Report {
    let mut extra: Vec<FpModule> = manifest.probes.iter().map(|(_, m)| m.clone()).collect();
    extra.extend(flags.probe_extra.iter().map(|(_, m)| m.clone()));
    let ctx = Ctx { ring: &manifest.ring, flags, extra };
    let items: Vec<Item> = manifest
        .analyses
        .par_iter()
        .map(|a| match manifest.entity(&a.name) {
            Some(Entity::Morphism(f)) => analyze_morphism(&ctx, a, f),
            Some(Entity::Telescope(t)) => analyze_telescope(&ctx, a, t),
            Some(Entity::Module(m)) => analyze_module(&ctx, a, m),
            None => analyze_module(&ctx, a, &FpModule::free(&manifest.ring, 1)),
        })
        .collect();
    Report {
        schema_version: SCHEMA_VERSION,
        ring: manifest.ring.name(),
        settings: Settings {
            bound: flags.bound.unwrap_or(DEFAULT_BOUND),
            replay: flags.replay,
            probe_extra: flags.probe_extra.iter().map(|(s, _)| s.clone()).collect(),
        },
        items,
    }
}
