//! JSON form of modules, morphisms and witnesses, and the way back.
//!
//! Morphisms carry their well-definedness certificate, so decoding checks an
//! identity instead of solving for one. Integers that fit in an `i64` are
//! numbers; larger ones are decimal strings.

use std::collections::BTreeSet;

use cofun_core::exact::{Int, IntMatrix, RingSpec};
use cofun_core::fpmod::{FpModule, FpMorphism};
use cofun_core::mllab::{
    Comparison, Decomposed, Filtration, FiltrationStage, Summand, TraceCertificate, Truth, TttCertificate, Verdict,
    Witness,
};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub type DecodeResult<T> = Result<T, String>;

pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn vector(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rows(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    json!({ "cols": m.cols(), "rows": rows(m) })
}

pub fn module(m: &FpModule) -> Value {
    json!({ "gens": m.gens(), "relations": rows(m.relations()) })
}

pub fn morphism(f: &FpMorphism) -> Value {
    json!({
        "source": module(f.source()),
        "target": module(f.target()),
        "matrix": rows(f.matrix()),
        "certificate": rows(f.certificate()),
    })
}

fn truth(t: &Truth) -> Value {
    Value::from(t.to_string())
}

pub fn verdict(v: &Verdict) -> Value {
    json!({
        "predicate": v.predicate,
        "value": truth(&v.truth),
        "witness": witness(&v.witness),
    })
}

pub fn witness(w: &Witness) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), Value::from(w.kind()));
    let mut put = |k: &str, v: Value| {
        o.insert(k.into(), v);
    };
    match w {
        Witness::None => {}
        Witness::TraceCertificates { module: m, certificates } => {
            put("module", module(m));
            put(
                "certificates",
                certificates
                    .iter()
                    .map(|c| {
                        json!({
                            "element": vector(&c.element),
                            "functional": vector(&c.functional),
                            "scalar": int(&c.scalar),
                            "x": vector(&c.x),
                            "y": vector(&c.y),
                        })
                    })
                    .collect(),
            );
        }
        Witness::TraceFailure { module: m, element, trace_generator } => {
            put("module", module(m));
            put("element", vector(element));
            put("trace_generator", int(trace_generator));
        }
        Witness::TttCertificates { module: m, certificates } => {
            put("module", module(m));
            put(
                "certificates",
                certificates
                    .iter()
                    .map(|c| {
                        json!({
                            "element": vector(&c.element),
                            "ideal_generator": int(&c.ideal_generator),
                            "lifted": vector(&c.lifted),
                        })
                    })
                    .collect(),
            );
        }
        Witness::TttFailure { module: m, element, ideal_generator } => {
            put("module", module(m));
            put("element", vector(element));
            put("ideal_generator", int(ideal_generator));
        }
        Witness::Section { pi, f, s } => {
            put("pi", morphism(pi));
            put("f", morphism(f));
            put("s", morphism(s));
        }
        Witness::NoSection { pi, f } => {
            put("pi", morphism(pi));
            put("f", morphism(f));
        }
        Witness::Retraction { inclusion, generators, r } => {
            put("inclusion", morphism(inclusion));
            put("generators", matrix(generators));
            put("r", morphism(r));
        }
        Witness::NotPure { inclusion, probe, element } => {
            put("inclusion", morphism(inclusion));
            put("probe", module(probe));
            put("element", vector(element));
        }
        Witness::Nested(v) => put("verdict", verdict(v)),
        Witness::FreeSummands { module: m, summands } => {
            put("module", module(m));
            put("summands", summands.iter().map(|(i, r)| json!([morphism(i), morphism(r)])).collect());
        }
        Witness::MissedGenerator { union, generator } => {
            put("union", morphism(union));
            put("generator", Value::from(*generator));
        }
        Witness::StrictMl { module: m, comparisons } => {
            put("module", module(m));
            put(
                "comparisons",
                comparisons
                    .iter()
                    .map(|c| {
                        json!({
                            "probe": module(&c.probe),
                            "map": morphism(&c.map),
                            "inverse": c.inverse.as_ref().map_or(Value::Null, morphism),
                        })
                    })
                    .collect(),
            );
        }
        Witness::ChainKernel { stage, probe, map, element } => {
            put("stage", Value::from(*stage));
            put("probe", module(probe));
            put("map", morphism(map));
            put("element", vector(element));
        }
        Witness::ChainInjective { maps } => put("maps", maps.iter().map(morphism).collect()),
        Witness::StageNotProjective { stage, module: m } => {
            put("stage", Value::from(*stage));
            put("module", module(m));
        }
        Witness::Monomorphism { map } => put("map", morphism(map)),
        Witness::Kernel { map, element } => {
            put("map", morphism(map));
            put("element", vector(element));
        }
        Witness::Filtration(f) => {
            let summand =
                |s: &Summand| json!({ "inclusion": morphism(&s.inclusion), "projection": morphism(&s.projection) });
            put("blocks", f.data.blocks.iter().map(module).collect());
            put("m", summand(&f.data.m));
            put("m2", summand(&f.data.m2));
            put(
                "stages",
                f.stages
                    .iter()
                    .map(|s| {
                        json!({
                            "blocks": s.blocks.iter().copied().collect::<Vec<_>>(),
                            "added": s.added.iter().copied().collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            );
        }
    }
    Value::Object(o)
}

/// Rebuilds objects from their JSON form over a fixed ring.
pub struct Decoder {
    pub ring: RingSpec,
}

fn field<'a>(v: &'a Value, key: &str) -> DecodeResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("missing field '{key}'"))
}

fn array<'a>(v: &'a Value, what: &str) -> DecodeResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| format!("{what} must be an array"))
}

fn index(v: &Value, what: &str) -> DecodeResult<usize> {
    v.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| format!("{what} must be a non-negative integer"))
}

const PREDICATES: &[&str] = &[
    "trace",
    "ttt",
    "strict_ml",
    "locally_projective",
    "locally_projective_pair",
    "locally_split",
    "free_summands",
    "free_embedding",
    "chain_scheme",
];

impl Decoder {
    pub fn int(&self, v: &Value) -> DecodeResult<Int> {
        match v {
            Value::Number(n) => n.as_i64().map(Int::from).ok_or_else(|| format!("non-integer number {n}")),
            Value::String(s) => s.parse::<Int>().map_err(|_| format!("bad integer '{s}'")),
            _ => Err("integer expected".into()),
        }
    }

    pub fn vector(&self, v: &Value) -> DecodeResult<Vec<Int>> {
        array(v, "vector")?.iter().map(|x| self.int(x)).collect()
    }

    fn rows(&self, v: &Value, cols: usize) -> DecodeResult<IntMatrix> {
        let rows: Vec<Vec<Int>> = array(v, "matrix")?.iter().map(|r| self.vector(r)).collect::<DecodeResult<_>>()?;
        IntMatrix::from_rows(&self.ring, cols, rows).map_err(|e| e.to_string())
    }

    pub fn matrix(&self, v: &Value) -> DecodeResult<IntMatrix> {
        self.rows(field(v, "rows")?, index(field(v, "cols")?, "cols")?)
    }

    pub fn module(&self, v: &Value) -> DecodeResult<FpModule> {
        let gens = index(field(v, "gens")?, "gens")?;
        let rel = self.rows(field(v, "relations")?, gens)?;
        FpModule::new(&self.ring, gens, rel).map_err(|e| e.to_string())
    }

    pub fn morphism(&self, v: &Value) -> DecodeResult<FpMorphism> {
        let source = self.module(field(v, "source")?)?;
        let target = self.module(field(v, "target")?)?;
        let m = self.rows(field(v, "matrix")?, target.gens())?;
        let cert = self.rows(field(v, "certificate")?, target.relations().rows())?;
        FpMorphism::with_certificate(&source, &target, m, cert).map_err(|e| e.to_string())
    }

    fn truth(&self, v: &Value) -> DecodeResult<Truth> {
        let s = v.as_str().ok_or("verdict value must be a string")?;
        match s {
            "true" => Ok(Truth::True),
            "false" => Ok(Truth::False),
            _ => s
                .strip_prefix("undetermined(K=")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(|bound| Truth::Undetermined { bound })
                .ok_or_else(|| format!("unknown verdict value '{s}'")),
        }
    }

    pub fn verdict(&self, v: &Value) -> DecodeResult<Verdict> {
        let name = field(v, "predicate")?.as_str().ok_or("predicate must be a string")?;
        let predicate = PREDICATES.iter().find(|p| **p == name).ok_or_else(|| format!("unknown predicate '{name}'"))?;
        Ok(Verdict {
            predicate,
            truth: self.truth(field(v, "value")?)?,
            witness: self.witness(field(v, "witness")?)?,
            sample: 0,
            probes: 0,
            bound: None,
            oracle_agrees: None,
        })
    }

    fn list<T>(&self, v: &Value, what: &str, f: impl Fn(&Value) -> DecodeResult<T>) -> DecodeResult<Vec<T>> {
        array(v, what)?.iter().map(f).collect()
    }

    pub fn witness(&self, v: &Value) -> DecodeResult<Witness> {
        let kind = field(v, "kind")?.as_str().ok_or("witness kind must be a string")?;
        let g = |k: &str| field(v, k);
        Ok(match kind {
            "none" => Witness::None,
            "trace_certificates" => Witness::TraceCertificates {
                module: self.module(g("module")?)?,
                certificates: self.list(g("certificates")?, "certificates", |c| {
                    Ok(TraceCertificate {
                        element: self.vector(field(c, "element")?)?,
                        functional: self.vector(field(c, "functional")?)?,
                        scalar: self.int(field(c, "scalar")?)?,
                        x: self.vector(field(c, "x")?)?,
                        y: self.vector(field(c, "y")?)?,
                    })
                })?,
            },
            "trace_failure" => Witness::TraceFailure {
                module: self.module(g("module")?)?,
                element: self.vector(g("element")?)?,
                trace_generator: self.int(g("trace_generator")?)?,
            },
            "ttt_certificates" => Witness::TttCertificates {
                module: self.module(g("module")?)?,
                certificates: self.list(g("certificates")?, "certificates", |c| {
                    Ok(TttCertificate {
                        element: self.vector(field(c, "element")?)?,
                        ideal_generator: self.int(field(c, "ideal_generator")?)?,
                        lifted: self.vector(field(c, "lifted")?)?,
                    })
                })?,
            },
            "ttt_failure" => Witness::TttFailure {
                module: self.module(g("module")?)?,
                element: self.vector(g("element")?)?,
                ideal_generator: self.int(g("ideal_generator")?)?,
            },
            "section" => Witness::Section {
                pi: self.morphism(g("pi")?)?,
                f: self.morphism(g("f")?)?,
                s: self.morphism(g("s")?)?,
            },
            "no_section" => Witness::NoSection { pi: self.morphism(g("pi")?)?, f: self.morphism(g("f")?)? },
            "retraction" => Witness::Retraction {
                inclusion: self.morphism(g("inclusion")?)?,
                generators: self.matrix(g("generators")?)?,
                r: self.morphism(g("r")?)?,
            },
            "not_pure" => Witness::NotPure {
                inclusion: self.morphism(g("inclusion")?)?,
                probe: self.module(g("probe")?)?,
                element: self.vector(g("element")?)?,
            },
            "nested" => Witness::Nested(Box::new(self.verdict(g("verdict")?)?)),
            "free_summands" => Witness::FreeSummands {
                module: self.module(g("module")?)?,
                summands: self.list(g("summands")?, "summands", |p| {
                    let pair = array(p, "summand")?;
                    if pair.len() != 2 {
                        return Err("summand must be an [inclusion, retraction] pair".into());
                    }
                    Ok((self.morphism(&pair[0])?, self.morphism(&pair[1])?))
                })?,
            },
            "missed_generator" => Witness::MissedGenerator {
                union: self.morphism(g("union")?)?,
                generator: index(g("generator")?, "generator")?,
            },
            "strict_ml" => Witness::StrictMl {
                module: self.module(g("module")?)?,
                comparisons: self.list(g("comparisons")?, "comparisons", |c| {
                    let inverse = match field(c, "inverse")? {
                        Value::Null => None,
                        i => Some(self.morphism(i)?),
                    };
                    Ok(Comparison {
                        probe: self.module(field(c, "probe")?)?,
                        map: self.morphism(field(c, "map")?)?,
                        inverse,
                    })
                })?,
            },
            "chain_kernel" => Witness::ChainKernel {
                stage: index(g("stage")?, "stage")?,
                probe: self.module(g("probe")?)?,
                map: self.morphism(g("map")?)?,
                element: self.vector(g("element")?)?,
            },
            "chain_injective" => Witness::ChainInjective { maps: self.list(g("maps")?, "maps", |m| self.morphism(m))? },
            "stage_not_projective" => {
                Witness::StageNotProjective { stage: index(g("stage")?, "stage")?, module: self.module(g("module")?)? }
            }
            "monomorphism" => Witness::Monomorphism { map: self.morphism(g("map")?)? },
            "kernel" => Witness::Kernel { map: self.morphism(g("map")?)?, element: self.vector(g("element")?)? },
            "filtration" => {
                let blocks = self.list(g("blocks")?, "blocks", |b| self.module(b))?;
                let summand = |s: &Value| -> DecodeResult<Summand> {
                    Ok(Summand {
                        inclusion: self.morphism(field(s, "inclusion")?)?,
                        projection: self.morphism(field(s, "projection")?)?,
                    })
                };
                let data = Decomposed::new(blocks, summand(g("m")?)?, summand(g("m2")?)?).map_err(|e| e.to_string())?;
                let set = |v: &Value| -> DecodeResult<BTreeSet<usize>> {
                    array(v, "block set")?.iter().map(|i| index(i, "block")).collect()
                };
                let stages = self.list(g("stages")?, "stages", |s| {
                    Ok(FiltrationStage { blocks: set(field(s, "blocks")?)?, added: set(field(s, "added")?)? })
                })?;
                Witness::Filtration(Box::new(Filtration { data, stages }))
            }
            other => return Err(format!("unknown witness kind '{other}'")),
        })
    }
}

/// Re-verify a serialized witness. Kinds local to the report format are checked here;
/// everything else goes through the decoded witness.
pub fn replay(ring: &RingSpec, w: &Value) -> DecodeResult<bool> {
    let d = Decoder { ring: ring.clone() };
    match field(w, "kind")?.as_str() {
        Some("split_pair") => {
            let f = d.morphism(field(w, "f")?)?;
            let r = d.morphism(field(w, "r")?)?;
            let id = FpMorphism::identity(f.source());
            let ok = f.then(&r).map(|c| c.equals(&id)).map_err(|e| e.to_string())?
                && r.then(&f).map(|c| c.equals(&FpMorphism::identity(f.target()))).map_err(|e| e.to_string())?;
            Ok(ok)
        }
        Some("surjection") => {
            let map = d.morphism(field(w, "map")?)?;
            let pre = d.matrix(field(w, "preimages")?)?;
            let target = map.target();
            Ok(pre.rows() == target.gens()
                && (0..target.gens())
                    .all(|i| target.elements_equal(&map.apply(pre.row(i)), &target.generator(i).coords)))
        }
        _ => d.witness(w)?.replay().map_err(|e| e.to_string()),
    }
}
