//! The bundled law sets and worked examples, each carrying its own evidence.
//!
//! Law sets load from data files and are gated against the concrete model of
//! partial functions before anything else may use them: a law that fails on
//! honest partial functions is quarantined together with the witness that
//! sank it. The catalog documents which laws are expected to be quarantined
//! (transcription defects in the source material, kept as printed rather
//! than silently repaired); loading fails loudly if the gate disagrees with
//! that documentation in either direction.
//!
//! Examples load from function data files; every expected fact (closure
//! sizes, congruences, quotient violations, printed-table differences) is
//! re-verified on load, and a mismatch is an internal contradiction, not a
//! report line.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::algebra::{
    generated_congruence, is_congruence, natural_meet_table, quotient, CongruencePartition,
    FinAlgebra,
};
use crate::pfun::{
    all_pfuns, apply_concrete, generate_subalgebra, parse_pfun_file, FinSet, PFun,
    DEFAULT_CLOSURE_CAP,
};
use crate::syntax::{
    compile_term, eval_compiled, parse_law_file, EvalError, Law, ParseError, Signature, Sym,
    TableSource, Violation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogError {
    UnknownName(String),
    Parse(ParseError),
    Eval(EvalError),
    /// A verified expectation failed on load; the catalog refuses to serve
    /// data it cannot vouch for.
    Contradiction(String),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::UnknownName(n) => write!(f, "unknown catalog name `{n}`"),
            CatalogError::Parse(e) => write!(f, "catalog data: {e}"),
            CatalogError::Eval(e) => write!(f, "{e}"),
            CatalogError::Contradiction(m) => write!(f, "internal contradiction: {m}"),
        }
    }
}

impl From<ParseError> for CatalogError {
    fn from(e: ParseError) -> Self {
        CatalogError::Parse(e)
    }
}

impl From<EvalError> for CatalogError {
    fn from(e: EvalError) -> Self {
        CatalogError::Eval(e)
    }
}

// ---------------------------------------------------------------------------
// Concrete universes and the soundness gate
// ---------------------------------------------------------------------------

/// Which set of partial functions a check ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// All partial functions between carriers of the given sizes.
    P(usize, usize),
    /// All partial endofunctions on a carrier of the given size.
    Pt(usize),
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::P(a, b) => write!(f, "P({a},{b})"),
            Universe::Pt(n) => write!(f, "PT({n})"),
        }
    }
}

impl Universe {
    pub fn parse(text: &str) -> Option<Universe> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("pt") {
            let n: usize = rest.parse().ok()?;
            return (n >= 1).then_some(Universe::Pt(n));
        }
        let (a, b) = t.split_once('x')?;
        let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
        (a >= 1 && b >= 1).then_some(Universe::P(a, b))
    }

    /// Number of functions in the universe.
    pub fn cardinality(&self) -> usize {
        let (s, t) = match self {
            Universe::P(a, b) => (*a, *b),
            Universe::Pt(n) => (*n, *n),
        };
        (t + 1).pow(s as u32)
    }

    pub fn is_endo(&self) -> bool {
        matches!(self, Universe::Pt(_))
    }

    /// Every function in the universe, with each operation tabulated once so
    /// that law checking is table lookup.
    pub fn build(&self) -> ConcreteUniverse {
        let (source, target) = match self {
            Universe::P(a, b) => (FinSet::indexed("X", "x", *a), FinSet::indexed("Y", "y", *b)),
            Universe::Pt(n) => {
                let x = FinSet::indexed("X", "x", *n);
                (x.clone(), x)
            }
        };
        let funs = all_pfuns(&source, &target);
        let index: BTreeMap<PFun, usize> = funs
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let endo = source == target;
        let n = funs.len();
        let mut tables: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
        for sym in [Sym::Res, Sym::Mns, Sym::Ovr, Sym::Upd, Sym::Cap, Sym::Dif] {
            let mut t = Vec::with_capacity(n * n);
            for f in &funs {
                for g in &funs {
                    t.push(index[&apply_concrete(sym, &[f, g]).expect("same carriers")]);
                }
            }
            tables.insert(sym, t);
        }
        if endo {
            let mut t = Vec::with_capacity(n * n);
            for f in &funs {
                for g in &funs {
                    t.push(index[&apply_concrete(Sym::Cmp, &[f, g]).expect("endo")]);
                }
            }
            tables.insert(Sym::Cmp, t);
            let mut d = Vec::with_capacity(n);
            for f in &funs {
                d.push(index[&f.domain_map().expect("endo")]);
            }
            tables.insert(Sym::Dom, d);
        }
        let zero = index[&PFun::empty(&source, &target)];
        let one = if endo {
            Some(index[&PFun::identity(&source)])
        } else {
            None
        };
        ConcreteUniverse {
            source,
            target,
            funs,
            index,
            tables,
            zero,
            one,
        }
    }
}

/// An interned universe of functions; evaluating a term against it applies
/// the real pointwise operations (tabulated up front), so it is independent
/// of any abstract algebra's tables.
pub struct ConcreteUniverse {
    pub source: FinSet,
    pub target: FinSet,
    pub funs: Vec<PFun>,
    index: BTreeMap<PFun, usize>,
    tables: BTreeMap<Sym, Vec<usize>>,
    zero: usize,
    one: Option<usize>,
}

impl ConcreteUniverse {
    pub fn len(&self) -> usize {
        self.funs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funs.is_empty()
    }

    pub fn describe_fun(&self, i: usize) -> String {
        let f = &self.funs[i];
        if f.is_empty() {
            return "{}".to_owned();
        }
        let mut s = String::from("{");
        for (k, (p, q)) in f.graph_pairs().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "{}->{}",
                self.source.label(p),
                self.target.label(q)
            ));
        }
        s.push('}');
        s
    }
}

impl TableSource for ConcreteUniverse {
    fn size(&self) -> usize {
        self.funs.len()
    }

    fn has_symbol(&self, sym: Sym) -> bool {
        match sym {
            Sym::K => true,
            Sym::Zero => true,
            Sym::One => self.one.is_some(),
            _ => self.tables.contains_key(&sym),
        }
    }

    fn cell(&self, sym: Sym, args: &[usize]) -> Result<Option<usize>, EvalError> {
        match sym {
            Sym::Zero => Ok(Some(self.zero)),
            Sym::One => self.one.map(Some).ok_or(EvalError::MissingConstant(sym)),
            Sym::K => {
                let v = PFun::comparison(
                    &self.funs[args[0]],
                    &self.funs[args[1]],
                    &self.funs[args[2]],
                    &self.funs[args[3]],
                )
                .expect("same carriers");
                Ok(Some(self.index[&v]))
            }
            _ => {
                let table = self.tables.get(&sym).ok_or(EvalError::MissingSymbol(sym))?;
                let mut idx = 0usize;
                for &a in args {
                    idx = idx * self.funs.len() + a;
                }
                Ok(Some(table[idx]))
            }
        }
    }
}

/// How a gate run ranges over assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// A concrete counterexample: functions rendered as graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteWitness {
    pub variables: Vec<String>,
    pub assignment: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for ConcreteWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.variables.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={}", self.assignment[i])?;
        }
        write!(f, ": lhs={} rhs={}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawStatus {
    Sound,
    Quarantined(ConcreteWitness),
}

impl LawStatus {
    pub fn is_sound(&self) -> bool {
        matches!(self, LawStatus::Sound)
    }
}

#[derive(Clone, Debug)]
pub struct GateOutcome {
    pub law: Law,
    pub status: LawStatus,
}

/// Checks each law over tuples of concrete partial functions: all of them
/// (exhaustive) or a seeded sample. The first failing assignment, in
/// enumeration order, becomes the witness.
pub fn soundness_gate(
    laws: &[Law],
    universe: &ConcreteUniverse,
    mode: GateMode,
) -> Result<Vec<GateOutcome>, CatalogError> {
    let mut out = Vec::with_capacity(laws.len());
    for law in laws {
        let status = match check_concrete(law, universe, mode)? {
            None => LawStatus::Sound,
            Some(w) => LawStatus::Quarantined(w),
        };
        out.push(GateOutcome {
            law: law.clone(),
            status,
        });
    }
    Ok(out)
}

fn check_concrete(
    law: &Law,
    universe: &ConcreteUniverse,
    mode: GateMode,
) -> Result<Option<ConcreteWitness>, CatalogError> {
    let vars = law.variables();
    let chyps: Vec<_> = law
        .hypotheses
        .iter()
        .map(|(l, r)| Ok((compile_term(l, &vars)?, compile_term(r, &vars)?)))
        .collect::<Result<_, EvalError>>()?;
    let concl = (
        compile_term(&law.conclusion.0, &vars)?,
        compile_term(&law.conclusion.1, &vars)?,
    );
    let n = universe.len();
    let check_one = |assignment: &[usize]| -> Result<Option<ConcreteWitness>, CatalogError> {
        for (l, r) in &chyps {
            let lv = eval_compiled(universe, l, assignment)?.expect("total");
            let rv = eval_compiled(universe, r, assignment)?.expect("total");
            if lv != rv {
                return Ok(None);
            }
        }
        let lv = eval_compiled(universe, &concl.0, assignment)?.expect("total");
        let rv = eval_compiled(universe, &concl.1, assignment)?.expect("total");
        if lv == rv {
            return Ok(None);
        }
        Ok(Some(ConcreteWitness {
            variables: vars.clone(),
            assignment: assignment
                .iter()
                .map(|&i| universe.describe_fun(i))
                .collect(),
            lhs: universe.describe_fun(lv),
            rhs: universe.describe_fun(rv),
        }))
    };
    match mode {
        GateMode::Exhaustive => {
            let mut assignment = alloc::vec![0usize; vars.len()];
            loop {
                if let Some(w) = check_one(&assignment)? {
                    return Ok(Some(w));
                }
                let mut i = assignment.len();
                loop {
                    if i == 0 {
                        return Ok(None);
                    }
                    i -= 1;
                    assignment[i] += 1;
                    if assignment[i] < n {
                        break;
                    }
                    assignment[i] = 0;
                }
                if vars.is_empty() {
                    return Ok(None);
                }
            }
        }
        GateMode::Sampled { count, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut assignment = alloc::vec![0usize; vars.len()];
            for _ in 0..count {
                for slot in assignment.iter_mut() {
                    *slot = (rng.next_u64() % n as u64) as usize;
                }
                if let Some(w) = check_one(&assignment)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------------------
// Law set entries
// ---------------------------------------------------------------------------

/// What role an entry plays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    /// An axiom system for a class of algebras.
    AxiomSet,
    /// Laws derived from an axiom system (sound consequences).
    DerivedLaws,
    /// Identities relating operations to one another; not an axiom system.
    IdentitySuite,
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryKind::AxiomSet => "axioms",
            EntryKind::DerivedLaws => "derived",
            EntryKind::IdentitySuite => "identities",
        })
    }
}

struct Row {
    name: &'static str,
    kind: EntryKind,
    sig: &'static [Sym],
    text: &'static str,
    provenance: &'static str,
    /// 1-based indices of laws documented as failing the gate.
    quarantined: &'static [usize],
}

use EntryKind::{AxiomSet, DerivedLaws, IdentitySuite};
use Sym::{Cap, Cmp, Dif, Dom, Mns, Ovr, Res, Upd, Zero, K};

static ROWS: &[Row] = &[
    Row {
        name: "rnb",
        kind: AxiomSet,
        sig: &[Res],
        text: include_str!("../data/laws/rnb.laws"),
        provenance: "defining laws of right normal bands",
        quarantined: &[],
    },
    Row {
        name: "onestack",
        kind: AxiomSet,
        sig: &[Cmp, Res],
        text: include_str!("../data/laws/onestack.laws"),
        provenance: "stacks: composition over a right normal band",
        quarantined: &[],
    },
    Row {
        name: "rnb-cap",
        kind: AxiomSet,
        sig: &[Res, Cap],
        text: include_str!("../data/laws/rnb-cap.laws"),
        provenance: "right normal bands with intersection",
        quarantined: &[],
    },
    Row {
        name: "onestack-cap",
        kind: AxiomSet,
        sig: &[Cmp, Res, Cap],
        text: include_str!("../data/laws/onestack-cap.laws"),
        provenance: "stacks with intersection",
        quarantined: &[],
    },
    Row {
        name: "minus",
        kind: AxiomSet,
        sig: &[Mns, Zero],
        text: include_str!("../data/laws/minus.laws"),
        provenance: "minus-algebras",
        quarantined: &[],
    },
    Row {
        name: "minus-semigroup",
        kind: AxiomSet,
        sig: &[Cmp, Mns, Zero],
        text: include_str!("../data/laws/minus-semigroup.laws"),
        provenance: "minus-semigroups",
        quarantined: &[],
    },
    Row {
        name: "minus-over",
        kind: AxiomSet,
        sig: &[Mns, Ovr, Zero],
        text: include_str!("../data/laws/minus-over.laws"),
        provenance: "minus-algebras with override",
        quarantined: &[],
    },
    Row {
        name: "minus-over-semigroup",
        kind: AxiomSet,
        sig: &[Cmp, Mns, Ovr, Zero],
        text: include_str!("../data/laws/minus-over-semigroup.laws"),
        provenance: "minus-semigroups with override",
        quarantined: &[],
    },
    Row {
        name: "minus-update",
        kind: AxiomSet,
        sig: &[Mns, Upd, Zero],
        text: include_str!("../data/laws/minus-update.laws"),
        provenance: "minus-algebras with update",
        quarantined: &[],
    },
    Row {
        name: "minus-update-semigroup",
        kind: AxiomSet,
        sig: &[Cmp, Mns, Upd, Zero],
        text: include_str!("../data/laws/minus-update-semigroup.laws"),
        provenance: "minus-semigroups with update",
        quarantined: &[],
    },
    Row {
        name: "rnb-cap-over",
        kind: AxiomSet,
        sig: &[Res, Cap, Ovr],
        text: include_str!("../data/laws/rnb-cap-over.laws"),
        provenance: "right normal bands with intersection and override",
        quarantined: &[],
    },
    Row {
        name: "onestack-cap-over",
        kind: AxiomSet,
        sig: &[Cmp, Res, Cap, Ovr],
        text: include_str!("../data/laws/onestack-cap-over.laws"),
        provenance: "stacks with intersection and override",
        quarantined: &[],
    },
    Row {
        name: "rnb-cap-upd",
        kind: AxiomSet,
        sig: &[Res, Cap, Upd],
        text: include_str!("../data/laws/rnb-cap-upd.laws"),
        provenance: "right normal bands with intersection and update",
        quarantined: &[],
    },
    Row {
        name: "onestack-cap-upd",
        kind: AxiomSet,
        sig: &[Cmp, Res, Cap, Upd],
        text: include_str!("../data/laws/onestack-cap-upd.laws"),
        provenance: "stacks with intersection and update",
        quarantined: &[],
    },
    Row {
        name: "rhsdsl",
        kind: AxiomSet,
        sig: &[Res, Ovr],
        text: include_str!("../data/laws/rhsdsl.laws"),
        provenance: "right-handed strongly distributive skew lattices",
        quarantined: &[],
    },
    Row {
        name: "nicemeet",
        kind: AxiomSet,
        sig: &[Res, Cap],
        text: include_str!("../data/laws/nicemeet.laws"),
        provenance: "intersection as the natural-order meet",
        quarantined: &[],
    },
    Row {
        name: "borlido",
        kind: AxiomSet,
        sig: &[Res, Dif],
        text: include_str!("../data/laws/borlido.laws"),
        provenance: "restriction/difference variety, as printed",
        quarantined: &[4],
    },
    Row {
        name: "minusintvar",
        kind: AxiomSet,
        sig: &[Cmp, Res, Dif],
        text: include_str!("../data/laws/minusintvar.laws"),
        provenance: "restriction/difference with composition, as printed",
        quarantined: &[4],
    },
    Row {
        name: "override-variety",
        kind: AxiomSet,
        sig: &[Mns, Ovr, Zero],
        text: include_str!("../data/laws/override-variety.laws"),
        provenance: "equational base for minus with override",
        quarantined: &[],
    },
    Row {
        name: "overplusminus",
        kind: AxiomSet,
        sig: &[Res, Ovr, Mns, Zero],
        text: include_str!("../data/laws/overplusminus.laws"),
        provenance: "skew lattices carrying a minus",
        quarantined: &[],
    },
    Row {
        name: "rh-sba",
        kind: AxiomSet,
        sig: &[Res, Ovr, Mns, Zero],
        text: include_str!("../data/laws/rh-sba.laws"),
        provenance: "right-handed skew Boolean algebras",
        quarantined: &[],
    },
    Row {
        name: "minusupvar-sound",
        kind: DerivedLaws,
        sig: &[Mns, Upd, Zero],
        text: include_str!("../data/laws/minusupvar-sound.laws"),
        provenance: "sound update/minus laws",
        quarantined: &[],
    },
    Row {
        name: "lrs",
        kind: AxiomSet,
        sig: &[Cmp, Dom],
        text: include_str!("../data/laws/lrs.laws"),
        provenance: "left restriction semigroups",
        quarantined: &[],
    },
    Row {
        name: "extralaws",
        kind: DerivedLaws,
        sig: &[Cmp, Dom],
        text: include_str!("../data/laws/extralaws.laws"),
        provenance: "consequences of the left restriction laws",
        quarantined: &[],
    },
    Row {
        name: "capslick",
        kind: AxiomSet,
        sig: &[Res, Cap],
        text: include_str!("../data/laws/capslick.laws"),
        provenance: "irredundant base for intersection bands",
        quarantined: &[],
    },
    Row {
        name: "slickminus",
        kind: AxiomSet,
        sig: &[Mns, Zero],
        text: include_str!("../data/laws/slickminus.laws"),
        provenance: "trimmed base for minus-algebras",
        quarantined: &[],
    },
    Row {
        name: "minusovertrick",
        kind: AxiomSet,
        sig: &[Mns, Ovr, Zero],
        text: include_str!("../data/laws/minusovertrick.laws"),
        provenance: "trimmed base for minus with override",
        quarantined: &[],
    },
    Row {
        name: "minusovertrick2",
        kind: AxiomSet,
        sig: &[Res, Ovr, Mns, Zero],
        text: include_str!("../data/laws/minusovertrick2.laws"),
        provenance: "irredundant base for minus with override",
        quarantined: &[],
    },
    Row {
        name: "slickskew",
        kind: AxiomSet,
        sig: &[Res, Ovr],
        text: include_str!("../data/laws/slickskew.laws"),
        provenance: "irredundant base for restriction with override",
        quarantined: &[],
    },
    Row {
        name: "rnb-cap-over-slick",
        kind: AxiomSet,
        sig: &[Res, Ovr, Cap],
        text: include_str!("../data/laws/rnb-cap-over-slick.laws"),
        provenance: "meet-style base for intersection and override",
        quarantined: &[],
    },
    Row {
        name: "bestoverint",
        kind: AxiomSet,
        sig: &[Res, Cap, Ovr],
        text: include_str!("../data/laws/bestoverint.laws"),
        provenance: "irredundant base for intersection and override",
        quarantined: &[],
    },
    Row {
        name: "over-upd-cap",
        kind: AxiomSet,
        sig: &[Ovr, Upd, Cap],
        text: include_str!("../data/laws/over-upd-cap.laws"),
        provenance: "override/update/intersection base",
        quarantined: &[],
    },
    Row {
        name: "cap-upd-irr",
        kind: AxiomSet,
        sig: &[Res, Cap, Upd],
        text: include_str!("../data/laws/cap-upd-irr.laws"),
        provenance: "irredundant base for intersection and update",
        quarantined: &[],
    },
    Row {
        name: "cmp-dom-cap",
        kind: AxiomSet,
        sig: &[Cmp, Dom, Cap],
        text: include_str!("../data/laws/cmp-dom-cap.laws"),
        provenance: "irredundant base for composition, domain, intersection",
        quarantined: &[],
    },
    Row {
        name: "cmp-dom-cap-over",
        kind: AxiomSet,
        sig: &[Cmp, Dom, Cap, Ovr],
        text: include_str!("../data/laws/cmp-dom-cap-over.laws"),
        provenance: "irredundant base adding override",
        quarantined: &[],
    },
    Row {
        name: "altqi",
        kind: DerivedLaws,
        sig: &[Mns, Zero],
        text: include_str!("../data/laws/altqi.laws"),
        provenance: "derived quasiequation of minus-algebras",
        quarantined: &[],
    },
    Row {
        name: "leftunionminus",
        kind: DerivedLaws,
        sig: &[Mns, Zero],
        text: include_str!("../data/laws/leftunionminus.laws"),
        provenance: "derived quasiequation, unstable under quotients",
        quarantined: &[],
    },
    Row {
        name: "left-distributivity",
        kind: DerivedLaws,
        sig: &[Res, Cap],
        text: include_str!("../data/laws/left-distributivity.laws"),
        provenance: "full left distributivity",
        quarantined: &[],
    },
    Row {
        name: "interdef-s1-bullets",
        kind: IdentitySuite,
        sig: &[Res, Mns, Ovr, Upd, Cap, Dif],
        text: include_str!("../data/laws/interdef-s1-bullets.laws"),
        provenance: "interdefinability identities, as printed",
        quarantined: &[4],
    },
    Row {
        name: "comparison-identities",
        kind: IdentitySuite,
        sig: &[K, Res, Mns, Ovr, Cap, Dif, Zero],
        text: include_str!("../data/laws/comparison-identities.laws"),
        provenance: "generalised comparison identities, as printed",
        quarantined: &[6],
    },
];

/// A loaded law set with its gate evidence.
#[derive(Clone, Debug)]
pub struct LawSetEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    pub signature: Signature,
    pub provenance: &'static str,
    pub laws: Vec<Law>,
    pub outcomes: Vec<GateOutcome>,
    pub home_universe: Universe,
}

impl LawSetEntry {
    pub fn is_sound(&self) -> bool {
        self.outcomes.iter().all(|o| o.status.is_sound())
    }

    pub fn sound_laws(&self) -> Vec<Law> {
        self.outcomes
            .iter()
            .filter(|o| o.status.is_sound())
            .map(|o| o.law.clone())
            .collect()
    }

    pub fn quarantined(&self) -> Vec<(&Law, &ConcreteWitness)> {
        self.outcomes
            .iter()
            .filter_map(|o| match &o.status {
                LawStatus::Sound => None,
                LawStatus::Quarantined(w) => Some((&o.law, w)),
            })
            .collect()
    }

    pub fn status_line(&self) -> String {
        let q = self.quarantined().len();
        if q == 0 {
            "sound".to_owned()
        } else {
            format!("quarantined:{q}")
        }
    }
}

/// All law set names, registry order.
pub fn lawset_names() -> Vec<&'static str> {
    ROWS.iter().map(|r| r.name).collect()
}

/// The home universe a signature is gated on: endofunctions when composition
/// or domain is involved, heterogeneous functions otherwise.
pub fn home_universe(sig: &Signature) -> Universe {
    if sig.contains(Sym::Cmp) || sig.contains(Sym::Dom) || sig.contains(Sym::One) {
        Universe::Pt(2)
    } else {
        Universe::P(2, 2)
    }
}

/// Loads a law set by name, gates it exhaustively on its home universe, and
/// checks the outcome against the documented quarantine list.
pub fn load_lawset(name: &str) -> Result<LawSetEntry, CatalogError> {
    let row = ROWS
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_owned()))?;
    let laws = parse_law_file(row.name, row.text)?;
    let signature = Signature::new(row.sig.iter().copied());
    let home = home_universe(&signature);
    let universe = home.build();
    let outcomes = soundness_gate(&laws, &universe, GateMode::Exhaustive)?;
    for (i, o) in outcomes.iter().enumerate() {
        let documented = row.quarantined.contains(&(i + 1));
        match (&o.status, documented) {
            (LawStatus::Sound, true) => {
                return Err(CatalogError::Contradiction(format!(
                    "{name}.{}: documented as quarantined but the gate passed it",
                    i + 1
                )))
            }
            (LawStatus::Quarantined(w), false) => {
                return Err(CatalogError::Contradiction(format!(
                    "{name}.{}: gate failure not documented ({w})",
                    i + 1
                )))
            }
            _ => {}
        }
    }
    Ok(LawSetEntry {
        name: row.name,
        kind: row.kind,
        signature,
        provenance: row.provenance,
        laws,
        outcomes,
        home_universe: home,
    })
}

/// The law texts documented as quarantined, deduplicated (the same misprint
/// can appear in more than one entry).
pub fn documented_quarantined_texts() -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for row in ROWS {
        let laws = parse_law_file(row.name, row.text).expect("bundled data parses");
        for &i in row.quarantined {
            let text = laws[i - 1].text();
            if !out.contains(&text) {
                out.push(text);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

/// A worked example: its concrete functions, the closed algebra they
/// generate, and every expected fact re-verified on load.
#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub functions: Vec<(String, PFun)>,
    pub closure_signature: Signature,
    pub algebra: FinAlgebra,
    pub elements: Vec<PFun>,
    pub theta: Option<CongruencePartition>,
    pub quotient: Option<FinAlgebra>,
    /// The first violation of the example's designated law, on the quotient
    /// (for the quasivariety examples) or on the algebra itself.
    pub violation: Option<(Law, Violation)>,
    /// Verified facts, one stable line each.
    pub facts: Vec<String>,
    /// Documented differences between recomputed values and printed claims.
    pub discrepancies: Vec<String>,
}

pub fn example_names() -> [&'static str; 3] {
    ["properqe", "droi", "updatecapqv"]
}

pub fn load_example(name: &str) -> Result<ExampleEntry, CatalogError> {
    match name {
        "properqe" => load_properqe(),
        "droi" => load_droi(),
        "updatecapqv" => load_updatecapqv(),
        _ => Err(CatalogError::UnknownName(name.to_owned())),
    }
}

fn contradiction(m: String) -> CatalogError {
    CatalogError::Contradiction(m)
}

fn expect_fact(cond: bool, facts: &mut Vec<String>, line: String) -> Result<(), CatalogError> {
    if !cond {
        return Err(contradiction(format!("expected fact failed: {line}")));
    }
    facts.push(line);
    Ok(())
}

fn check_entry_on(
    alg: &FinAlgebra,
    entry_name: &str,
    facts: &mut Vec<String>,
) -> Result<(), CatalogError> {
    let entry = load_lawset(entry_name)?;
    let report = crate::syntax::check_lawset(alg, &entry.sound_laws())?;
    if let Some((law, v)) = report.failures().next() {
        return Err(contradiction(format!(
            "{entry_name} law {} fails where it must hold: {}",
            law.name,
            v.describe(alg)
        )));
    }
    facts.push(format!("lawset {entry_name}: all sound laws hold"));
    Ok(())
}

fn load_properqe() -> Result<ExampleEntry, CatalogError> {
    let text = include_str!("../data/examples/properqe.pfun");
    let (_, _, functions) = parse_pfun_file(text).map_err(|e| contradiction(e.to_string()))?;
    let sig = Signature::new([Sym::Mns]);
    let closure = generate_subalgebra(&functions, &sig, DEFAULT_CLOSURE_CAP)
        .map_err(|e| contradiction(e.to_string()))?;
    let mut algebra = closure.algebra;
    let elements = closure.elements;
    let mut facts = Vec::new();
    expect_fact(
        algebra.size() == 7 && elements[6].is_empty(),
        &mut facts,
        "closure under mns has 7 elements: the six generators plus the empty function".to_owned(),
    )?;
    algebra
        .relabel(6, "0")
        .map_err(|e| contradiction(e.to_string()))?;

    check_entry_on(&algebra, "minus", &mut facts)?;
    check_entry_on(&algebra, "slickminus", &mut facts)?;
    check_entry_on(&algebra, "altqi", &mut facts)?;
    check_entry_on(&algebra, "leftunionminus", &mut facts)?;

    let e = algebra.index_of("e").unwrap();
    let f = algebra.index_of("f").unwrap();
    let theta =
        generated_congruence(&algebra, &[(e, f)]).map_err(|x| contradiction(x.to_string()))?;
    expect_fact(
        theta.nontrivial_blocks() == alloc::vec![alloc::vec![e, f]],
        &mut facts,
        "the congruence generated by (e,f) has {e,f} as its only nontrivial block".to_owned(),
    )?;
    expect_fact(
        is_congruence(&algebra, &theta).map_err(|x| contradiction(x.to_string()))?,
        &mut facts,
        "identifying e and f is a congruence of the minus table".to_owned(),
    )?;
    let quot = quotient(&algebra, &theta).map_err(|x| contradiction(x.to_string()))?;
    expect_fact(
        quot.size() == 6,
        &mut facts,
        "the quotient has 6 elements".to_owned(),
    )?;

    let law = load_lawset("leftunionminus")?.laws[0].clone();
    let outcome =
        crate::syntax::law_holds(&quot, &law).map_err(|x| contradiction(x.to_string()))?;
    let violation = match outcome {
        crate::syntax::LawOutcome::Violated(v) => v,
        crate::syntax::LawOutcome::Holds => {
            return Err(contradiction(
                "quotient satisfies the quasiequation it must violate".to_owned(),
            ))
        }
    };
    let labels: Vec<&str> = violation
        .assignment
        .iter()
        .map(|&i| quot.label(i))
        .collect();
    expect_fact(
        labels == ["a", "c", "a", "b"],
        &mut facts,
        format!(
            "the quotient violates the derived quasiequation first at (x,y,s,t)=({})",
            labels.join(",")
        ),
    )?;

    // printed claims that recomputation overturns, kept as documentation
    let a = algebra.index_of("a").unwrap();
    let b = algebra.index_of("b").unwrap();
    let d = algebra.index_of("d").unwrap();
    let mut discrepancies = Vec::new();
    if algebra.op2(Sym::Mns, a, d) != e {
        discrepancies.push(format!(
            "mns(a,d): recomputed {}, printed claim e",
            algebra.label(algebra.op2(Sym::Mns, a, d))
        ));
    }
    if algebra.op2(Sym::Mns, b, d) != f {
        discrepancies.push(format!(
            "mns(b,d): recomputed {}, printed claim f",
            algebra.label(algebra.op2(Sym::Mns, b, d))
        ));
    }
    // the printed witness (c,d,a,b) cannot violate the law anywhere: with
    // mns(c,d) = c the first hypothesis and the conclusion are the same pair
    let mns_cd = quot.label(quot.op2(
        Sym::Mns,
        quot.index_of("c").unwrap(),
        quot.index_of("d").unwrap(),
    ));
    if mns_cd == "c" {
        discrepancies.push(
            "printed witness (x,y,s,t)=(c,d,a,b) is vacuous: mns(c,d)=c makes the first \
             hypothesis equal the conclusion; the recomputed first violation is (a,c,a,b)"
                .to_owned(),
        );
    }
    if discrepancies.len() != 3 {
        return Err(contradiction(format!(
            "expected 3 documented discrepancies, found {}",
            discrepancies.len()
        )));
    }

    Ok(ExampleEntry {
        name: "properqe",
        functions,
        closure_signature: sig,
        algebra,
        elements,
        theta: Some(theta),
        quotient: Some(quot),
        violation: Some((law, violation)),
        facts,
        discrepancies,
    })
}

/// Printed operation tables for the update/intersection example, rows and
/// columns in carrier order 1,b,c,d,e,0. Three cells print `a` (an alias of
/// the full-domain element) where recomputation yields `1`.
const UCQ_PRINTED_RES: [[&str; 6]; 6] = [
    ["1", "b", "c", "d", "e", "0"],
    ["c", "b", "c", "b", "0", "0"],
    ["c", "b", "c", "b", "0", "0"],
    ["a", "b", "c", "d", "e", "0"],
    ["e", "0", "0", "e", "e", "0"],
    ["0", "0", "0", "0", "0", "0"],
];
const UCQ_PRINTED_UPD: [[&str; 6]; 6] = [
    ["1", "d", "1", "d", "1", "1"],
    ["c", "b", "c", "b", "b", "b"],
    ["c", "b", "c", "b", "c", "c"],
    ["a", "d", "a", "d", "d", "d"],
    ["e", "e", "e", "e", "e", "e"],
    ["0", "0", "0", "0", "0", "0"],
];
const UCQ_PRINTED_CAP: [[&str; 6]; 6] = [
    ["1", "0", "c", "e", "e", "0"],
    ["0", "b", "0", "b", "0", "0"],
    ["c", "0", "c", "0", "0", "0"],
    ["e", "b", "0", "d", "e", "0"],
    ["e", "0", "0", "e", "e", "0"],
    ["0", "0", "0", "0", "0", "0"],
];

fn load_updatecapqv() -> Result<ExampleEntry, CatalogError> {
    let text = include_str!("../data/examples/updatecapqv.pfun");
    let (_, _, functions) = parse_pfun_file(text).map_err(|e| contradiction(e.to_string()))?;
    let sig = Signature::new([Sym::Cmp, Sym::Res, Sym::Upd, Sym::Cap]);
    let closure = generate_subalgebra(&functions, &sig, DEFAULT_CLOSURE_CAP)
        .map_err(|e| contradiction(e.to_string()))?;
    let algebra = closure.algebra;
    let elements = closure.elements;
    let mut facts = Vec::new();
    expect_fact(
        algebra.size() == 6,
        &mut facts,
        "the six functions are closed under cmp, res, upd and cap".to_owned(),
    )?;
    let zero = algebra
        .zero()
        .ok_or_else(|| contradiction("no zero".into()))?;
    expect_fact(
        (0..6).all(|x| (0..6).all(|y| algebra.op2(Sym::Cmp, x, y) == zero)),
        &mut facts,
        "every composite is the empty function".to_owned(),
    )?;

    check_entry_on(&algebra, "rnb-cap-upd", &mut facts)?;
    check_entry_on(&algebra, "onestack-cap-upd", &mut facts)?;
    check_entry_on(&algebra, "cap-upd-irr", &mut facts)?;

    // recomputed tables against the printed ones, cell by cell
    let mut discrepancies = Vec::new();
    let printed = [
        (Sym::Res, &UCQ_PRINTED_RES),
        (Sym::Upd, &UCQ_PRINTED_UPD),
        (Sym::Cap, &UCQ_PRINTED_CAP),
    ];
    for (sym, grid) in printed {
        for (i, row) in grid.iter().enumerate() {
            for (j, &claim) in row.iter().enumerate() {
                let got = algebra.label(algebra.op2(sym, i, j));
                if got != claim {
                    discrepancies.push(format!(
                        "{sym}({},{}): recomputed {got}, printed {claim}",
                        algebra.label(i),
                        algebra.label(j)
                    ));
                }
            }
        }
    }
    let expected_diff = [
        "res(d,1): recomputed 1, printed a",
        "upd(d,1): recomputed 1, printed a",
        "upd(d,c): recomputed 1, printed a",
    ];
    if discrepancies != expected_diff {
        return Err(contradiction(format!(
            "printed-table diff is not the documented one: {discrepancies:?}"
        )));
    }
    facts.push(
        "printed tables differ from recomputation only in the three cells printing `a` for `1`"
            .to_owned(),
    );

    let e = algebra.index_of("e").unwrap();
    let theta =
        generated_congruence(&algebra, &[(e, zero)]).map_err(|x| contradiction(x.to_string()))?;
    expect_fact(
        theta.nontrivial_blocks() == alloc::vec![alloc::vec![e, zero]],
        &mut facts,
        "the congruence generated by (e,0) has {e,0} as its only nontrivial block".to_owned(),
    )?;
    expect_fact(
        is_congruence(&algebra, &theta).map_err(|x| contradiction(x.to_string()))?,
        &mut facts,
        "identifying e and 0 is a congruence for res, upd, cap and cmp".to_owned(),
    )?;
    let quot = quotient(&algebra, &theta).map_err(|x| contradiction(x.to_string()))?;

    // the update quasiequation (the only non-equational axiom) dies in the quotient
    let entry = load_lawset("rnb-cap-upd")?;
    let law = entry
        .laws
        .iter()
        .find(|l| !l.is_equation())
        .expect("the axiom set has one quasiequation")
        .clone();
    let outcome =
        crate::syntax::law_holds(&quot, &law).map_err(|x| contradiction(x.to_string()))?;
    let violation = match outcome {
        crate::syntax::LawOutcome::Violated(v) => v,
        crate::syntax::LawOutcome::Holds => {
            return Err(contradiction(
                "quotient satisfies the update quasiequation it must violate".to_owned(),
            ))
        }
    };
    let labels: Vec<&str> = violation
        .assignment
        .iter()
        .map(|&i| quot.label(i))
        .collect();
    expect_fact(
        labels == ["1", "b", "1", "c"],
        &mut facts,
        format!(
            "the quotient violates the update quasiequation first at (x,y,a,b)=({}), with the conclusion pair (1,c)",
            labels.join(",")
        ),
    )?;

    Ok(ExampleEntry {
        name: "updatecapqv",
        functions,
        closure_signature: sig,
        algebra,
        elements,
        theta: Some(theta),
        quotient: Some(quot),
        violation: Some((law, violation)),
        facts,
        discrepancies,
    })
}

fn load_droi() -> Result<ExampleEntry, CatalogError> {
    let text = include_str!("../data/examples/droi.pfun");
    let (_, _, functions) = parse_pfun_file(text).map_err(|e| contradiction(e.to_string()))?;
    let sig = Signature::new([Sym::Res, Sym::Ovr]);
    let closure = generate_subalgebra(&functions, &sig, DEFAULT_CLOSURE_CAP)
        .map_err(|e| contradiction(e.to_string()))?;
    let mut algebra = closure.algebra;
    let elements = closure.elements;
    let mut facts = Vec::new();
    expect_fact(
        algebra.size() == 5,
        &mut facts,
        "the five functions are closed under res and ovr".to_owned(),
    )?;

    check_entry_on(&algebra, "rhsdsl", &mut facts)?;
    check_entry_on(&algebra, "slickskew", &mut facts)?;

    // every pair has a natural-order meet; adjoin it as cap
    let meet = natural_meet_table(&algebra).map_err(|x| contradiction(x.to_string()))?;
    algebra
        .insert_table(Sym::Cap, meet)
        .map_err(|x| contradiction(x.to_string()))?;
    facts.push("every pair has a natural-order meet, adjoined as cap".to_owned());

    // ((x⊔y)∩y)⊔x = x⊔y fails: the meet here is not graph intersection
    let entry = load_lawset("rnb-cap-over")?;
    let law = entry
        .laws
        .iter()
        .find(|l| l.text() == "ovr(cap(ovr(s,t),t),s) = ovr(s,t)")
        .expect("the absorption-style axiom is in the set")
        .clone();
    let outcome =
        crate::syntax::law_holds(&algebra, &law).map_err(|x| contradiction(x.to_string()))?;
    let violation = match outcome {
        crate::syntax::LawOutcome::Violated(v) => v,
        crate::syntax::LawOutcome::Holds => {
            return Err(contradiction(
                "the adjoined meet satisfies the axiom it must violate".to_owned(),
            ))
        }
    };
    let labels: Vec<&str> = violation
        .assignment
        .iter()
        .map(|&i| algebra.label(i))
        .collect();
    expect_fact(
        labels == ["e", "i"],
        &mut facts,
        "ovr(cap(ovr(s,t),t),s) = ovr(s,t) fails first at (s,t)=(e,i)".to_owned(),
    )?;
    let e = algebra.index_of("e").unwrap();
    let i = algebra.index_of("i").unwrap();
    let one = algebra.index_of("1").unwrap();
    let ei = algebra.op2(Sym::Ovr, e, i);
    let lhs = algebra.op2(Sym::Ovr, algebra.op2(Sym::Cap, ei, i), e);
    expect_fact(
        ei == one && lhs == e,
        &mut facts,
        "ovr(e,i) = 1 while ovr(cap(ovr(e,i),i),e) = e".to_owned(),
    )?;

    Ok(ExampleEntry {
        name: "droi",
        functions,
        closure_signature: sig,
        algebra,
        elements,
        theta: None,
        quotient: None,
        violation: Some((law, violation)),
        facts,
        discrepancies: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_lawset_loads_with_the_documented_status() {
        for name in lawset_names() {
            let entry = load_lawset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!entry.laws.is_empty(), "{name} is empty");
        }
    }

    #[test]
    fn expected_law_counts() {
        for (name, count) in [
            ("rnb", 3),
            ("onestack", 6),
            ("rnb-cap", 8),
            ("onestack-cap", 12),
            ("minus", 11),
            ("minus-semigroup", 13),
            ("lrs", 5),
            ("capslick", 5),
            ("slickminus", 5),
            ("minusovertrick", 6),
            ("minusovertrick2", 5),
            ("slickskew", 6),
            ("bestoverint", 5),
            ("over-upd-cap", 7),
            ("cap-upd-irr", 7),
            ("cmp-dom-cap", 7),
            ("cmp-dom-cap-over", 8),
            ("interdef-s1-bullets", 10),
            ("comparison-identities", 7),
            ("minusupvar-sound", 7),
        ] {
            assert_eq!(load_lawset(name).unwrap().laws.len(), count, "{name}");
        }
    }

    #[test]
    fn exactly_two_lawset_misprints_and_one_identity_misprint() {
        let mut axiom_texts: Vec<String> = Vec::new();
        let mut identity_texts: Vec<String> = Vec::new();
        for name in lawset_names() {
            let entry = load_lawset(name).unwrap();
            for (law, _) in entry.quarantined() {
                let bucket = if entry.kind == EntryKind::IdentitySuite {
                    &mut identity_texts
                } else {
                    &mut axiom_texts
                };
                if !bucket.contains(&law.text()) {
                    bucket.push(law.text());
                }
            }
        }
        assert_eq!(axiom_texts.len(), 1, "{axiom_texts:?}");
        assert_eq!(identity_texts.len(), 2, "{identity_texts:?}");
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            load_lawset("no-such-set"),
            Err(CatalogError::UnknownName(_))
        ));
        assert!(matches!(
            load_example("no-such-example"),
            Err(CatalogError::UnknownName(_))
        ));
    }

    #[test]
    fn the_minus_example_loads_and_documents_its_discrepancies() {
        let ex = load_example("properqe").unwrap();
        assert_eq!(ex.algebra.size(), 7);
        assert_eq!(ex.discrepancies.len(), 3);
        let (_, v) = ex.violation.as_ref().unwrap();
        let q = ex.quotient.as_ref().unwrap();
        let labels: Vec<&str> = v.assignment.iter().map(|&i| q.label(i)).collect();
        assert_eq!(labels, ["a", "c", "a", "b"]);
    }

    #[test]
    fn the_update_example_loads_with_three_printed_cells_differing() {
        let ex = load_example("updatecapqv").unwrap();
        assert_eq!(ex.algebra.size(), 6);
        assert_eq!(ex.discrepancies.len(), 3);
        assert!(ex.discrepancies.iter().all(|d| d.contains("printed a")));
    }

    #[test]
    fn the_skew_example_loads_and_violates_the_intersection_axiom() {
        let ex = load_example("droi").unwrap();
        assert_eq!(ex.algebra.size(), 5);
        let (_, v) = ex.violation.as_ref().unwrap();
        let labels: Vec<&str> = v.assignment.iter().map(|&i| ex.algebra.label(i)).collect();
        assert_eq!(labels, ["e", "i"]);
    }

    #[test]
    fn example_algebras_match_their_golden_files() {
        for (name, golden) in [
            ("properqe", include_str!("../data/golden/properqe.alg")),
            ("droi", include_str!("../data/golden/droi.alg")),
            (
                "updatecapqv",
                include_str!("../data/golden/updatecapqv.alg"),
            ),
        ] {
            let ex = load_example(name).unwrap();
            assert_eq!(
                ex.algebra.render(),
                golden,
                "{name} drifted from its golden file"
            );
        }
    }

    #[test]
    fn universe_specs_parse_and_validate() {
        assert_eq!(Universe::parse("2x2"), Some(Universe::P(2, 2)));
        assert_eq!(Universe::parse(" pt3 "), Some(Universe::Pt(3)));
        assert_eq!(Universe::parse("pt0"), None);
        assert_eq!(Universe::parse("0x2"), None);
        assert_eq!(Universe::parse("2x"), None);
        assert_eq!(Universe::parse("banana"), None);
        assert_eq!(Universe::P(2, 2).cardinality(), 9);
        assert_eq!(Universe::Pt(3).cardinality(), 64);
    }

    #[test]
    fn sampled_gate_is_deterministic() {
        let entry_laws = parse_law_file("rnb", include_str!("../data/laws/rnb.laws")).unwrap();
        let u = Universe::Pt(2).build();
        let mode = GateMode::Sampled { count: 50, seed: 0 };
        let a = soundness_gate(&entry_laws, &u, mode).unwrap();
        let b = soundness_gate(&entry_laws, &u, mode).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.status, y.status);
        }
    }

    #[test]
    fn empty_lawset_is_vacuously_sound() {
        let u = Universe::P(2, 2).build();
        assert!(soundness_gate(&[], &u, GateMode::Exhaustive)
            .unwrap()
            .is_empty());
    }
}
