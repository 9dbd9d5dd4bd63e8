//! Line-oriented manifest format.
//!
//! ```text
//! ring Z/6
//! module M = rel [[2,0],[0,3]]
//! module F = free 2
//! morphism f: F -> M = [[1,0],[0,1]]
//! telescope Q = (Z; x2, x3, x4)
//! probe M
//! analyze M with trace, strict_ml
//! analyze Q with chain_detection K=4
//! ```
//!
//! `Z` and `R` name the free module of rank one. `...` at the end of a list of
//! scalar maps continues it as an arithmetic progression forever.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use cofun_core::exact::{Int, IntMatrix, RingSpec};
use cofun_core::fpmod::{FpModule, FpMorphism};
use cofun_core::mllab::Telescope;
use num_traits::{One, ToPrimitive, Zero};

pub const MAX_BOUND: usize = 64;

pub const MODULE_PREDICATES: &[&str] = &[
    "decompose",
    "trace",
    "ttt",
    "strict_ml",
    "projective",
    "locally_projective",
    "free_summands",
    "free_embedding",
    "evaluate",
];
pub const MORPHISM_PREDICATES: &[&str] =
    &["kernel", "cokernel", "image", "injective", "surjective", "pure", "split", "locally_split"];
pub const TELESCOPE_PREDICATES: &[&str] = &["colim", "split", "chain_detection"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct TelescopeDecl {
    pub telescope: Telescope,
    /// The declaration as written between the parentheses, normalized.
    pub description: String,
}

#[derive(Clone, Debug)]
pub enum Entity {
    Module(FpModule),
    Morphism(FpMorphism),
    Telescope(TelescopeDecl),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Module(_) => "module",
            Entity::Morphism(_) => "morphism",
            Entity::Telescope(_) => "telescope",
        }
    }

    fn predicates(&self) -> &'static [&'static str] {
        match self {
            Entity::Module(_) => MODULE_PREDICATES,
            Entity::Morphism(_) => MORPHISM_PREDICATES,
            Entity::Telescope(_) => TELESCOPE_PREDICATES,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub name: String,
    pub predicates: Vec<String>,
    pub bound: Option<usize>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub ring: RingSpec,
    pub entities: Vec<(String, Entity)>,
    pub probes: Vec<(String, FpModule)>,
    pub analyses: Vec<Analysis>,
}

impl Manifest {
    pub fn entity(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn module(&self, name: &str) -> Option<FpModule> {
        match self.entity(name) {
            Some(Entity::Module(m)) => Some(m.clone()),
            None if is_builtin(name) => Some(FpModule::free(&self.ring, 1)),
            _ => None,
        }
    }
}

fn is_builtin(name: &str) -> bool {
    name == "Z" || name == "R"
}

type PResult<T> = Result<T, Diagnostic>;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn error<T>(&self, column: usize, message: impl Into<String>) -> PResult<T> {
        Err(Diagnostic { line: self.line, column, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn describe_next(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of line".into(),
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.describe_next();
            self.error(self.col(), format!("expected '{c}', found {found}"))
        }
    }

    fn expect_str(&mut self, s: &str) -> PResult<()> {
        if self.eat_str(s) {
            Ok(())
        } else {
            let found = self.describe_next();
            self.error(self.col(), format!("expected '{s}', found {found}"))
        }
    }

    fn ident(&mut self) -> PResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let ok_start = self.chars.get(start).is_some_and(|c| c.is_alphabetic() || *c == '_');
        if !ok_start {
            let found = self.describe_next();
            return self.error(self.col(), format!("expected a name, found {found}"));
        }
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || "_'".contains(self.chars[self.pos]))
        {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn integer(&mut self) -> PResult<(Int, usize)> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            let found = self.describe_next();
            return self.error(start + 1, format!("expected an integer, found {found}"));
        }
        let text: String = self.chars[start..self.pos].iter().filter(|c| **c != '+').collect();
        let value = text.parse::<Int>().expect("validated digits");
        Ok((value, start + 1))
    }

    fn small(&mut self, what: &str, max: usize) -> PResult<usize> {
        let (v, col) = self.integer()?;
        match v.to_usize() {
            Some(n) if n <= max => Ok(n),
            _ => self.error(col, format!("{what} must be between 0 and {max}")),
        }
    }

    /// `[[a, b], [c, d]]`, or `[]` for no rows.
    fn matrix(&mut self) -> PResult<(Vec<Vec<Int>>, usize)> {
        self.skip_ws();
        let start = self.col();
        self.expect('[')?;
        let mut rows: Vec<Vec<Int>> = Vec::new();
        if self.eat(']') {
            return Ok((rows, start));
        }
        loop {
            let row_col = {
                self.skip_ws();
                self.col()
            };
            self.expect('[')?;
            let mut row = Vec::new();
            if self.peek() == Some(']') {
                return self.error(row_col, "empty matrix row");
            }
            loop {
                row.push(self.integer()?.0);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return self.error(
                        row_col,
                        format!(
                            "ragged matrix: row {} has {} entries, expected {}",
                            rows.len() + 1,
                            row.len(),
                            first.len()
                        ),
                    );
                }
            }
            rows.push(row);
            if self.eat(']') {
                break;
            }
            self.expect(',')?;
        }
        Ok((rows, start))
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(self.col(), format!("unexpected '{c}'")),
        }
    }
}

enum MapItem {
    Scalar(Int),
    Named(String, usize),
    Identity,
}

struct Parser {
    ring: Option<RingSpec>,
    ring_line: Option<usize>,
    entities: Vec<(String, Entity)>,
    defined: HashMap<String, usize>,
    probes: Vec<(Vec<(String, usize)>, usize)>,
    analyses: Vec<(Analysis, Vec<usize>, usize)>,
    errors: Vec<Diagnostic>,
}

impl Parser {
    fn ring(&self) -> RingSpec {
        self.ring.clone().unwrap_or(RingSpec::Integers)
    }

    fn module(&self, c: &Cursor, name: &str, col: usize) -> PResult<FpModule> {
        match self.defined.get(name).map(|&i| &self.entities[i].1) {
            Some(Entity::Module(m)) => Ok(m.clone()),
            Some(e) => c.error(col, format!("'{name}' is a {}, not a module", e.kind())),
            None if is_builtin(name) => Ok(FpModule::free(&self.ring(), 1)),
            None => c.error(col, format!("undefined module '{name}'")),
        }
    }

    fn define(&mut self, c: &Cursor, name: String, col: usize, e: Entity) -> PResult<()> {
        if is_builtin(&name) {
            return c.error(col, format!("'{name}' is reserved for the free module of rank one"));
        }
        if self.defined.contains_key(&name) {
            return c.error(col, format!("duplicate name '{name}'"));
        }
        self.defined.insert(name.clone(), self.entities.len());
        self.entities.push((name, e));
        Ok(())
    }

    fn statement(&mut self, c: &mut Cursor) -> PResult<()> {
        let (kw, col) = c.ident()?;
        match kw.as_str() {
            "ring" => self.ring_decl(c, col),
            "module" => self.module_decl(c),
            "morphism" => self.morphism_decl(c),
            "telescope" => self.telescope_decl(c),
            "probe" => self.probe_decl(c),
            "analyze" => self.analyze_decl(c),
            other => c.error(col, format!("unknown statement '{other}'")),
        }
    }

    fn ring_decl(&mut self, c: &mut Cursor, col: usize) -> PResult<()> {
        if let Some(l) = self.ring_line {
            return c.error(col, format!("ring already declared at line {l}"));
        }
        if !self.entities.is_empty() {
            return c.error(col, "ring must be declared before any module");
        }
        let (name, ncol) = c.ident()?;
        let ring = match name.as_str() {
            "Z" if c.eat('/') => {
                let (n, ncol) = c.integer()?;
                if n < Int::from(2) {
                    return c.error(ncol, "modulus must be at least 2");
                }
                RingSpec::modulo(n).expect("modulus at least 2")
            }
            "Z" => RingSpec::Integers,
            other => return c.error(ncol, format!("unknown ring '{other}' (expected Z or Z/<n>)")),
        };
        c.finish()?;
        self.ring = Some(ring);
        self.ring_line = Some(c.line);
        Ok(())
    }

    fn module_decl(&mut self, c: &mut Cursor) -> PResult<()> {
        let (name, col) = c.ident()?;
        c.expect('=')?;
        let (kind, kcol) = c.ident()?;
        let ring = self.ring();
        let module = match kind.as_str() {
            "free" => FpModule::free(&ring, c.small("rank", 1024)?),
            "rel" => {
                let (rows, mcol) = c.matrix()?;
                let Some(first) = rows.first() else {
                    return c.error(mcol, "relation matrix needs at least one row; use 'free <n>' for free modules");
                };
                let gens = first.len();
                let m = IntMatrix::from_rows(&ring, gens, rows).map_err(|e| Diagnostic {
                    line: c.line,
                    column: mcol,
                    message: e.to_string(),
                })?;
                FpModule::from_relations(m)
            }
            other => return c.error(kcol, format!("expected 'rel' or 'free', found '{other}'")),
        };
        c.finish()?;
        self.define(c, name, col, Entity::Module(module))
    }

    fn morphism_decl(&mut self, c: &mut Cursor) -> PResult<()> {
        let (name, col) = c.ident()?;
        c.expect(':')?;
        let (src, scol) = c.ident()?;
        c.expect_str("->")?;
        let (dst, dcol) = c.ident()?;
        c.expect('=')?;
        let (rows, mcol) = c.matrix()?;
        c.finish()?;
        let source = self.module(c, &src, scol)?;
        let target = self.module(c, &dst, dcol)?;
        if rows.len() != source.gens() || rows.iter().any(|r| r.len() != target.gens()) {
            let found = format!("{}x{}", rows.len(), rows.first().map_or(0, Vec::len));
            return c.error(
                mcol,
                format!(
                    "dimension mismatch: {src} -> {dst} needs a {}x{} matrix, found {found}",
                    source.gens(),
                    target.gens()
                ),
            );
        }
        let m = IntMatrix::from_rows(&self.ring(), target.gens(), rows).map_err(|e| Diagnostic {
            line: c.line,
            column: mcol,
            message: e.to_string(),
        })?;
        let map = FpMorphism::new(&source, &target, m).map_err(|e| Diagnostic {
            line: c.line,
            column: mcol,
            message: format!("not a morphism: {e}"),
        })?;
        self.define(c, name, col, Entity::Morphism(map))
    }

    fn telescope_decl(&mut self, c: &mut Cursor) -> PResult<()> {
        let (name, col) = c.ident()?;
        c.expect('=')?;
        c.expect('(')?;
        let (first_name, fcol) = c.ident()?;
        let first = self.module(c, &first_name, fcol)?;
        c.expect(';')?;
        let mut items = Vec::new();
        let mut forever = false;
        if !c.eat(')') {
            loop {
                if c.eat_str("...") {
                    forever = true;
                    c.expect(')')?;
                    break;
                }
                let (word, wcol) = c.ident()?;
                let item = if word == "id" {
                    MapItem::Identity
                } else if let Some(k) =
                    word.strip_prefix('x').filter(|k| !k.is_empty() && k.chars().all(|d| d.is_ascii_digit()))
                {
                    MapItem::Scalar(k.parse::<Int>().expect("digits"))
                } else {
                    MapItem::Named(word, wcol)
                };
                items.push(item);
                if c.eat(')') {
                    break;
                }
                c.expect(',')?;
            }
        }
        c.finish()?;

        let mut words = Vec::new();
        let telescope = if forever {
            let mut scalars = Vec::new();
            for it in &items {
                match it {
                    MapItem::Scalar(k) => scalars.push(k.clone()),
                    MapItem::Identity => scalars.push(Int::one()),
                    MapItem::Named(_, wcol) => return c.error(*wcol, "'...' continues scalar maps only"),
                }
            }
            if scalars.is_empty() {
                return c.error(col, "'...' needs at least one scalar map to continue");
            }
            let step = if scalars.len() >= 2 {
                &scalars[scalars.len() - 1] - &scalars[scalars.len() - 2]
            } else {
                Int::zero()
            };
            words.extend(scalars.iter().map(|k| format!("x{k}")));
            words.push("...".into());
            let rule_scalars = scalars.clone();
            if step.is_zero() && rule_scalars.last().is_some_and(|k| k.is_one()) {
                let mut maps = Vec::new();
                let mut stage = first.clone();
                for k in &rule_scalars {
                    let f = FpMorphism::scalar(&stage, k);
                    stage = f.target().clone();
                    maps.push(f);
                }
                Telescope::eventually_constant(first.clone(), maps).map_err(|e| Diagnostic {
                    line: c.line,
                    column: col,
                    message: e.to_string(),
                })?
            } else {
                Telescope::generated(
                    first.clone(),
                    Arc::new(move |i, m: &FpModule| {
                        let k = match rule_scalars.get(i) {
                            Some(k) => k.clone(),
                            None => {
                                rule_scalars.last().expect("nonempty") + &step * Int::from(i + 1 - rule_scalars.len())
                            }
                        };
                        Ok(FpMorphism::scalar(m, &k))
                    }),
                )
            }
        } else {
            let mut maps = Vec::new();
            let mut stage = first.clone();
            for it in items {
                let f = match it {
                    MapItem::Scalar(k) => {
                        words.push(format!("x{k}"));
                        FpMorphism::scalar(&stage, &k)
                    }
                    MapItem::Identity => {
                        words.push("id".into());
                        FpMorphism::identity(&stage)
                    }
                    MapItem::Named(n, wcol) => {
                        let f = match self.defined.get(&n).map(|&i| &self.entities[i].1) {
                            Some(Entity::Morphism(f)) => f.clone(),
                            Some(e) => return c.error(wcol, format!("'{n}' is a {}, not a morphism", e.kind())),
                            None => return c.error(wcol, format!("undefined morphism '{n}'")),
                        };
                        if !f.source().same_presentation(&stage) {
                            return c.error(wcol, format!("'{n}' does not start at the current stage"));
                        }
                        words.push(n);
                        f
                    }
                };
                stage = f.target().clone();
                maps.push(f);
            }
            Telescope::new(first.clone(), maps).map_err(|e| Diagnostic {
                line: c.line,
                column: col,
                message: e.to_string(),
            })?
        };
        let description = format!("{first_name}; {}", words.join(", "));
        self.define(c, name, col, Entity::Telescope(TelescopeDecl { telescope, description }))
    }

    fn probe_decl(&mut self, c: &mut Cursor) -> PResult<()> {
        let mut names = vec![c.ident()?];
        while c.peek().is_some() {
            c.eat(',');
            names.push(c.ident()?);
        }
        self.probes.push((names, c.line));
        Ok(())
    }

    fn analyze_decl(&mut self, c: &mut Cursor) -> PResult<()> {
        let line = c.line;
        let (name, col) = c.ident()?;
        let (with, wcol) = c.ident()?;
        if with != "with" {
            return c.error(wcol, format!("expected 'with', found '{with}'"));
        }
        let mut predicates = Vec::new();
        let mut columns = Vec::new();
        let mut bound = None;
        loop {
            let (p, pcol) = c.ident()?;
            if p == "K" && c.eat('=') {
                bound = Some(c.small("bound", MAX_BOUND)?);
                break;
            }
            predicates.push(p);
            columns.push(pcol);
            if !c.eat(',') {
                if c.peek().is_some() {
                    let (k, kcol) = c.ident()?;
                    if k != "K" {
                        return c.error(kcol, format!("expected ',' or 'K=<bound>', found '{k}'"));
                    }
                    c.expect('=')?;
                    bound = Some(c.small("bound", MAX_BOUND)?);
                }
                break;
            }
        }
        c.finish()?;
        self.analyses.push((Analysis { name, predicates, bound, line }, columns, col));
        Ok(())
    }

    fn resolve(&mut self) -> (Vec<(String, FpModule)>, Vec<Analysis>) {
        let mut probes = Vec::new();
        for (names, line) in std::mem::take(&mut self.probes) {
            let c = Cursor::new("", line);
            for (n, col) in names {
                match self.module(&c, &n, col) {
                    Ok(m) => probes.push((n, m)),
                    Err(d) => self.errors.push(d),
                }
            }
        }
        let mut analyses = Vec::new();
        for (a, columns, col) in std::mem::take(&mut self.analyses) {
            let entity = match self.defined.get(&a.name) {
                Some(&i) => self.entities[i].1.clone(),
                None if is_builtin(&a.name) => Entity::Module(FpModule::free(&self.ring(), 1)),
                None => {
                    self.errors.push(Diagnostic {
                        line: a.line,
                        column: col,
                        message: format!("undefined name '{}'", a.name),
                    });
                    continue;
                }
            };
            let allowed = entity.predicates();
            let mut ok = true;
            for (p, pcol) in a.predicates.iter().zip(&columns) {
                if p != "all" && !allowed.contains(&p.as_str()) {
                    ok = false;
                    self.errors.push(Diagnostic {
                        line: a.line,
                        column: *pcol,
                        message: format!(
                            "unknown predicate '{p}' for {} '{}' (expected one of: all, {})",
                            entity.kind(),
                            a.name,
                            allowed.join(", ")
                        ),
                    });
                }
            }
            if ok {
                analyses.push(a);
            }
        }
        (probes, analyses)
    }
}

/// Parse and validate a manifest. All diagnostics are collected; parsing resumes on the next line.
pub fn parse_manifest(text: &str) -> Result<Manifest, Vec<Diagnostic>> {
    let mut p = Parser {
        ring: None,
        ring_line: None,
        entities: Vec::new(),
        defined: HashMap::new(),
        probes: Vec::new(),
        analyses: Vec::new(),
        errors: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, i + 1);
        if let Err(d) = p.statement(&mut c) {
            p.errors.push(d);
        }
    }
    let (probes, analyses) = p.resolve();
    if !p.errors.is_empty() {
        p.errors.sort_by_key(|d| (d.line, d.column));
        return Err(p.errors);
    }
    Ok(Manifest { ring: p.ring(), entities: p.entities, probes, analyses })
}

/// A module written inline, as on the command line: a manifest name, `free <n>` or `rel [[..]]`.
pub fn parse_module_expr(manifest: &Manifest, text: &str) -> Result<FpModule, Diagnostic> {
    if let Some(m) = manifest.module(text.trim()) {
        return Ok(m);
    }
    let wrapped = format!("module __probe = {text}");
    let mut p = Parser {
        ring: Some(manifest.ring.clone()),
        ring_line: Some(0),
        entities: Vec::new(),
        defined: HashMap::new(),
        probes: Vec::new(),
        analyses: Vec::new(),
        errors: Vec::new(),
    };
    let mut c = Cursor::new(&wrapped, 1);
    p.statement(&mut c).map_err(|d| Diagnostic { column: d.column.saturating_sub(17).max(1), ..d })?;
    match p.entities.pop() {
        Some((_, Entity::Module(m))) => Ok(m),
        _ => unreachable!("module statements define a module"),
    }
}
