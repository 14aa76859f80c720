//! Concrete finite partial functions and the operations on them, plus
//! closure of a generating set into a finite algebra of operation tables.
//!
//! Conventions, fixed once here and relied on everywhere:
//!
//! * `f.restrict(g)` is `g` restricted to the domain of `f` (so `f∘g`);
//! * `f.minus(g)` is `f` off the domain of `g`;
//! * `f.override_with(g)` prefers `f` and falls back to `g`;
//! * `f.update(g)` rewrites `f` by `g` where `g` is defined, keeping the
//!   domain of `f`;
//! * composition is diagrammatic: `(f.compose(g))(p) = g(f(p))`.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::FinAlgebra;
use crate::syntax::{Signature, Sym};

/// A named finite carrier; points are indices. Two carriers are the same
/// set exactly when their point labels agree; the name is presentation only
/// and ignored by comparisons.
#[derive(Clone, Debug)]
pub struct FinSet {
    name: String,
    labels: Vec<String>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for FinSet {}

impl PartialOrd for FinSet {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FinSet {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.labels.cmp(&other.labels)
    }
}

impl core::hash::Hash for FinSet {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfunError {
    EmptyCarrier,
    DuplicateLabel(String),
    CarrierMismatch {
        expected: String,
        found: String,
    },
    NotEndo,
    PointOutOfRange(usize),
    /// Two graph pairs send the same source point to different targets.
    ConflictingPair(usize),
    SizeCap {
        cap: usize,
    },
    Parse(String),
}

impl fmt::Display for PfunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PfunError::EmptyCarrier => f.write_str("carrier must be non-empty"),
            PfunError::DuplicateLabel(l) => write!(f, "duplicate point label `{l}`"),
            PfunError::CarrierMismatch { expected, found } => {
                write!(
                    f,
                    "carrier mismatch: expected `{expected}`, found `{found}`"
                )
            }
            PfunError::NotEndo => f.write_str("operation needs source = target"),
            PfunError::PointOutOfRange(p) => write!(f, "point {p} out of range"),
            PfunError::ConflictingPair(p) => {
                write!(f, "point {p} is sent to two different targets")
            }
            PfunError::SizeCap { cap } => write!(f, "closure exceeded the {cap}-element cap"),
            PfunError::Parse(m) => write!(f, "{m}"),
        }
    }
}

impl FinSet {
    pub fn new(name: &str, labels: Vec<String>) -> Result<FinSet, PfunError> {
        if labels.is_empty() {
            return Err(PfunError::EmptyCarrier);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(PfunError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinSet {
            name: name.to_owned(),
            labels,
        })
    }

    /// A carrier `{prefix0, .., prefix(size-1)}`.
    pub fn indexed(name: &str, prefix: &str, size: usize) -> FinSet {
        FinSet::new(name, (0..size).map(|i| format!("{prefix}{i}")).collect())
            .expect("indexed labels are distinct")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A partial function between two finite carriers, stored as one optional
/// target point per source point. Single-valued by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PFun {
    source: FinSet,
    target: FinSet,
    graph: Vec<Option<usize>>,
}

fn mismatch(expected: &FinSet, found: &FinSet) -> PfunError {
    PfunError::CarrierMismatch {
        expected: format!("{}({})", expected.name(), expected.size()),
        found: format!("{}({})", found.name(), found.size()),
    }
}

impl PFun {
    pub fn empty(source: &FinSet, target: &FinSet) -> PFun {
        PFun {
            source: source.clone(),
            target: target.clone(),
            graph: alloc::vec![None; source.size()],
        }
    }

    /// The identity map on an endo carrier.
    pub fn identity(carrier: &FinSet) -> PFun {
        PFun {
            source: carrier.clone(),
            target: carrier.clone(),
            graph: (0..carrier.size()).map(Some).collect(),
        }
    }

    pub fn from_pairs(
        source: &FinSet,
        target: &FinSet,
        pairs: &[(usize, usize)],
    ) -> Result<PFun, PfunError> {
        let mut graph = alloc::vec![None; source.size()];
        for &(p, q) in pairs {
            if p >= source.size() {
                return Err(PfunError::PointOutOfRange(p));
            }
            if q >= target.size() {
                return Err(PfunError::PointOutOfRange(q));
            }
            if graph[p].is_some_and(|old| old != q) {
                return Err(PfunError::ConflictingPair(p));
            }
            graph[p] = Some(q);
        }
        Ok(PFun {
            source: source.clone(),
            target: target.clone(),
            graph,
        })
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn apply(&self, p: usize) -> Option<usize> {
        self.graph[p]
    }

    pub fn is_defined_at(&self, p: usize) -> bool {
        self.graph[p].is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.iter().all(Option::is_none)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.graph
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|_| p))
    }

    pub fn graph_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|v| (p, v)))
    }

    pub fn domain_size(&self) -> usize {
        self.graph.iter().filter(|q| q.is_some()).count()
    }

    /// True iff the graph of `self` is contained in the graph of `other`.
    pub fn subset_of(&self, other: &PFun) -> bool {
        self.graph_pairs().all(|(p, q)| other.apply(p) == Some(q))
    }

    fn check_same_carriers(&self, other: &PFun) -> Result<(), PfunError> {
        if self.source != other.source {
            return Err(mismatch(&self.source, &other.source));
        }
        if self.target != other.target {
            return Err(mismatch(&self.target, &other.target));
        }
        Ok(())
    }

    /// Domain restriction `self ∘ other`: `other` restricted to the domain
    /// of `self`.
    pub fn restrict(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| if f.is_some() { *g } else { None })
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// `self − other`: `self` restricted off the domain of `other`.
    pub fn minus(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| if g.is_none() { *f } else { None })
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Override `self ⊔ other`: `self` where defined, else `other`.
    pub fn override_with(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| f.or(*g))
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Update `self ⋄ other`: `other ⊔ self` restricted to the domain of
    /// `self` — rewrite by `other` where it is defined, keep the domain.
    pub fn update(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| if f.is_some() { g.or(*f) } else { None })
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Graph intersection `self ∩ other`.
    pub fn intersect(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| if f == g { *f } else { None })
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Graph difference `self \ other`.
    pub fn difference(&self, other: &PFun) -> Result<PFun, PfunError> {
        self.check_same_carriers(other)?;
        let graph = self
            .graph
            .iter()
            .zip(&other.graph)
            .map(|(f, g)| if f.is_some() && f != g { *f } else { None })
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Diagrammatic composition: `(self · other)(p) = other(self(p))`.
    pub fn compose(&self, other: &PFun) -> Result<PFun, PfunError> {
        if self.target != other.source {
            return Err(mismatch(&self.target, &other.source));
        }
        let graph = self
            .graph
            .iter()
            .map(|f| f.and_then(|q| other.graph[q]))
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: other.target.clone(),
            graph,
        })
    }

    /// `D(self)`: the identity restricted to the domain of `self`.
    pub fn domain_map(&self) -> Result<PFun, PfunError> {
        if self.source != self.target {
            return Err(PfunError::NotEndo);
        }
        let graph = self
            .graph
            .iter()
            .enumerate()
            .map(|(p, q)| q.map(|_| p))
            .collect();
        Ok(PFun {
            source: self.source.clone(),
            target: self.target.clone(),
            graph,
        })
    }

    /// Generalised comparison `(f,g)[h,k]`: pointwise `h` where `f` does not
    /// disagree with `g`, else `k`. `f` disagrees with `g` at `p` when
    /// `f(p)` is defined and `g(p)` is either undefined or different.
    pub fn comparison(f: &PFun, g: &PFun, h: &PFun, k: &PFun) -> Result<PFun, PfunError> {
        f.check_same_carriers(g)?;
        h.check_same_carriers(k)?;
        if f.source != h.source {
            return Err(mismatch(&f.source, &h.source));
        }
        let graph = (0..f.source.size())
            .map(|p| {
                let disagree = match f.graph[p] {
                    Some(v) => g.graph[p] != Some(v),
                    None => false,
                };
                if disagree {
                    k.graph[p]
                } else {
                    h.graph[p]
                }
            })
            .collect();
        Ok(PFun {
            source: h.source.clone(),
            target: h.target.clone(),
            graph,
        })
    }

    /// One line of the text format: `name: p1->q1, p2->q2, ...` with `-` for
    /// the empty graph.
    pub fn render_line(&self, name: &str) -> String {
        let mut s = format!("{name}:");
        if self.is_empty() {
            s.push_str(" -");
            return s;
        }
        let mut first = true;
        for (p, q) in self.graph_pairs() {
            s.push_str(if first { " " } else { ", " });
            first = false;
            s.push_str(&format!(
                "{}->{}",
                self.source.label(p),
                self.target.label(q)
            ));
        }
        s
    }
}

/// Applies the operation named by `sym` to concrete arguments.
pub fn apply_concrete(sym: Sym, args: &[&PFun]) -> Result<PFun, PfunError> {
    match sym {
        Sym::Cmp => args[0].compose(args[1]),
        Sym::Res => args[0].restrict(args[1]),
        Sym::Mns => args[0].minus(args[1]),
        Sym::Ovr => args[0].override_with(args[1]),
        Sym::Upd => args[0].update(args[1]),
        Sym::Cap => args[0].intersect(args[1]),
        Sym::Dif => args[0].difference(args[1]),
        Sym::Dom => args[0].domain_map(),
        Sym::K => PFun::comparison(args[0], args[1], args[2], args[3]),
        Sym::Zero => Ok(PFun::empty(args[0].source(), args[0].target())),
        Sym::One => {
            if args[0].source() != args[0].target() {
                return Err(PfunError::NotEndo);
            }
            Ok(PFun::identity(args[0].source()))
        }
    }
}

/// Result of closing a generating set: the operation tables plus the
/// dictionary from element index to concrete function.
#[derive(Clone, Debug)]
pub struct Closure {
    pub algebra: FinAlgebra,
    pub elements: Vec<PFun>,
}

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// Least superset of the generators closed under the signature, with the
/// operation tables. Numbering is deterministic: generators first in the
/// given order, then round by round in symbol order and argument order.
///
/// If `cmp`, `dom` or `one` is in the signature the carrier must be endo.
/// A distinguished zero (the empty function) and one (the identity) are
/// recorded on the result when those functions turn up as elements.
pub fn generate_subalgebra(
    generators: &[(String, PFun)],
    sig: &Signature,
    cap: usize,
) -> Result<Closure, PfunError> {
    let Some((_, first)) = generators.first() else {
        return Err(PfunError::EmptyCarrier);
    };
    for (_, g) in generators {
        first.check_same_carriers(g)?;
    }
    let needs_endo = sig.contains(Sym::Cmp) || sig.contains(Sym::Dom) || sig.contains(Sym::One);
    if needs_endo && first.source() != first.target() {
        return Err(PfunError::NotEndo);
    }

    let mut elements: Vec<PFun> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<PFun, usize> = BTreeMap::new();
    for (name, g) in generators {
        if !index.contains_key(g) {
            index.insert(g.clone(), elements.len());
            elements.push(g.clone());
            names.push(name.clone());
        }
    }

    loop {
        let known = elements.len();
        let mut discovered: Vec<PFun> = Vec::new();
        for sym in sig.iter() {
            let arity = sym.arity();
            let count = match arity {
                0 => 1,
                a => known.pow(a as u32),
            };
            for idx in 0..count {
                let mut rem = idx;
                let mut args: Vec<&PFun> = Vec::with_capacity(arity.max(1));
                let mut arg_idx = [0usize; 4];
                for k in (0..arity).rev() {
                    arg_idx[k] = rem % known;
                    rem /= known;
                }
                for k in 0..arity.max(1) {
                    args.push(&elements[arg_idx[k.min(arity.saturating_sub(1))]]);
                }
                // constants take a carrier cue from the first element
                let args_slice: Vec<&PFun> = if arity == 0 {
                    alloc::vec![&elements[0]]
                } else {
                    args
                };
                let v = apply_concrete(sym, &args_slice)?;
                if !index.contains_key(&v) && !discovered.contains(&v) {
                    discovered.push(v);
                }
            }
        }
        if discovered.is_empty() {
            break;
        }
        for v in discovered {
            if elements.len() >= cap {
                return Err(PfunError::SizeCap { cap });
            }
            let i = elements.len();
            index.insert(v.clone(), i);
            names.push(fresh_name(&names, i));
            elements.push(v);
        }
    }

    let n = elements.len();
    let mut tables: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
    for sym in sig.iter() {
        match sym.arity() {
            0 => {} // constants become distinguished elements below
            1 => {
                let mut t = Vec::with_capacity(n);
                for x in &elements {
                    t.push(index[&apply_concrete(sym, &[x])?]);
                }
                tables.insert(sym, t);
            }
            2 => {
                let mut t = Vec::with_capacity(n * n);
                for x in &elements {
                    for y in &elements {
                        t.push(index[&apply_concrete(sym, &[x, y])?]);
                    }
                }
                tables.insert(sym, t);
            }
            4 => {
                let mut t = Vec::with_capacity(n * n * n * n);
                for a in &elements {
                    for b in &elements {
                        for c in &elements {
                            for d in &elements {
                                t.push(index[&apply_concrete(sym, &[a, b, c, d])?]);
                            }
                        }
                    }
                }
                tables.insert(sym, t);
            }
            _ => unreachable!(),
        }
    }
    let zero = index
        .get(&PFun::empty(first.source(), first.target()))
        .copied();
    let one = if first.source() == first.target() {
        index.get(&PFun::identity(first.source())).copied()
    } else {
        None
    };
    let algebra =
        FinAlgebra::new(names, tables, zero, one).map_err(|e| PfunError::Parse(e.to_string()))?;
    Ok(Closure { algebra, elements })
}

fn fresh_name(names: &[String], i: usize) -> String {
    let mut name = format!("g{i}");
    while names.contains(&name) {
        name.push('\'');
    }
    name
}

/// Renders a family of named functions over a common carrier in the text
/// format: `source:`/`target:` headers, then one line per function.
pub fn render_pfun_file(source: &FinSet, target: &FinSet, funs: &[(String, PFun)]) -> String {
    let mut s = String::new();
    s.push_str("source:");
    for l in source.labels() {
        s.push(' ');
        s.push_str(l);
    }
    s.push_str("\ntarget:");
    for l in target.labels() {
        s.push(' ');
        s.push_str(l);
    }
    s.push('\n');
    for (name, f) in funs {
        s.push_str(&f.render_line(name));
        s.push('\n');
    }
    s
}

/// Parses the text format produced by [`render_pfun_file`].
/// A parsed function file: the two carriers and the named functions.
pub type PfunFile = (FinSet, FinSet, Vec<(String, PFun)>);

pub fn parse_pfun_file(text: &str) -> Result<PfunFile, PfunError> {
    let bad = |m: String| PfunError::Parse(m);
    let mut source: Option<FinSet> = None;
    let mut target: Option<FinSet> = None;
    let mut funs: Vec<(String, PFun)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("line {}: expected `name: ...`", lineno + 1)))?;
        let head = head.trim();
        let rest = rest.trim();
        if head == "source" || head == "target" {
            let labels: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            let set = FinSet::new(head, labels)?;
            if head == "source" {
                source = Some(set);
            } else {
                target = Some(set);
            }
            continue;
        }
        let src = source
            .as_ref()
            .ok_or_else(|| bad("missing `source:` header".to_owned()))?;
        let tgt = target
            .as_ref()
            .ok_or_else(|| bad("missing `target:` header".to_owned()))?;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        if rest != "-" {
            for pair in rest.split(',') {
                let (p, q) = pair
                    .trim()
                    .split_once("->")
                    .ok_or_else(|| bad(format!("line {}: expected `p->q`", lineno + 1)))?;
                let pi = src
                    .index_of(p.trim())
                    .ok_or_else(|| bad(format!("unknown source point `{}`", p.trim())))?;
                let qi = tgt
                    .index_of(q.trim())
                    .ok_or_else(|| bad(format!("unknown target point `{}`", q.trim())))?;
                pairs.push((pi, qi));
            }
        }
        funs.push((head.to_owned(), PFun::from_pairs(src, tgt, &pairs)?));
    }
    match (source, target) {
        (Some(s), Some(t)) => Ok((s, t, funs)),
        _ => Err(bad("missing carrier headers".to_owned())),
    }
}

/// Every partial function from `source` to `target`, in a fixed order
/// (graphs enumerated as base-(|target|+1) odometers). `P(2,2)` has 9
/// entries, `PT(3)` has 64.
pub fn all_pfuns(source: &FinSet, target: &FinSet) -> Vec<PFun> {
    let s = source.size();
    let t = target.size();
    let mut out = Vec::new();
    let mut digits = alloc::vec![0usize; s];
    loop {
        let graph: Vec<Option<usize>> = digits
            .iter()
            .map(|&d| if d == 0 { None } else { Some(d - 1) })
            .collect();
        out.push(PFun {
            source: source.clone(),
            target: target.clone(),
            graph,
        });
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] <= t {
                break;
            }
            digits[i] = 0;
        }
    }
}
