//! A deterministic backtracking model finder over operation tables: find a
//! model of a law set, find a counter-model to a designated law, certify
//! that an axiom is not redundant, and hunt for quotient-instability
//! witnesses.
//!
//! Tables are filled cell by cell in a fixed (symbol, row-major index)
//! order, trying values `0..n` in order; after every assignment each
//! equation is re-checked on all fully evaluable instances and a conflict
//! backtracks. Quasiequations and the negated law are only checked on
//! completed tables. The first model found is therefore the
//! lexicographically least one, and node counts are reproducible.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::algebra::{all_congruences, quotient, CongruencePartition, FinAlgebra};
use crate::syntax::{
    check_lawset, compile_term, eval_compiled, law_holds, CompiledTerm, EvalError, Law, LawOutcome,
    Signature, Sym, TableSource, Violation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    Eval(EvalError),
    BadInput(String),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Eval(e) => write!(f, "{e}"),
            SearchError::BadInput(m) => write!(f, "{m}"),
        }
    }
}

impl From<EvalError> for SearchError {
    fn from(e: EvalError) -> Self {
        SearchError::Eval(e)
    }
}

/// Orders in which cells are filled. `Reversed` exists so tests can confirm
/// that exhaustion does not depend on the order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CellOrder {
    #[default]
    Canonical,
    Reversed,
}

/// Knobs for one search. The cancel hook is polled periodically; a search
/// stopped by it reports `Aborted`, never a fake exhaustion.
#[derive(Default)]
pub struct SearchLimits<'a> {
    pub node_cap: Option<u64>,
    pub cancel: Option<&'a dyn Fn() -> bool>,
    /// Least-number isomorphism pruning; off by default so that found
    /// models match the naive enumeration order.
    pub least_number: bool,
    pub cell_order: CellOrder,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Value placements tried.
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// A model of all laws; if a negated law was given, `negated_witness`
    /// holds the assignment where it fails.
    Model {
        algebra: FinAlgebra,
        negated_witness: Option<Violation>,
    },
    /// The whole space at this size was covered without a model.
    Exhausted,
    /// Stopped early (timeout or node cap); not an exhaustion.
    Aborted,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub size: usize,
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn model(&self) -> Option<&FinAlgebra> {
        match &self.outcome {
            SearchOutcome::Model { algebra, .. } => Some(algebra),
            _ => None,
        }
    }
}

struct PartialTables {
    n: usize,
    tables: BTreeMap<Sym, Vec<Option<usize>>>,
}

impl TableSource for PartialTables {
    fn size(&self) -> usize {
        self.n
    }

    fn has_symbol(&self, sym: Sym) -> bool {
        self.tables.contains_key(&sym)
    }

    fn cell(&self, sym: Sym, args: &[usize]) -> Result<Option<usize>, EvalError> {
        let table = self.tables.get(&sym).ok_or(EvalError::MissingSymbol(sym))?;
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.n + a;
        }
        Ok(table[idx])
    }
}

struct CompiledLaw {
    hyps: Vec<(CompiledTerm, CompiledTerm)>,
    concl: (CompiledTerm, CompiledTerm),
    var_count: usize,
}

fn compile_law(law: &Law) -> Result<CompiledLaw, SearchError> {
    let vars = law.variables();
    let hyps = law
        .hypotheses
        .iter()
        .map(|(l, r)| Ok((compile_term(l, &vars)?, compile_term(r, &vars)?)))
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(CompiledLaw {
        hyps,
        concl: (
            compile_term(&law.conclusion.0, &vars)?,
            compile_term(&law.conclusion.1, &vars)?,
        ),
        var_count: vars.len(),
    })
}

/// Every equation instance that is fully evaluable must agree.
fn equations_consistent(
    tables: &PartialTables,
    equations: &[CompiledLaw],
) -> Result<bool, EvalError> {
    let n = tables.n;
    for eq in equations {
        let mut assignment = alloc::vec![0usize; eq.var_count];
        loop {
            if let (Some(l), Some(r)) = (
                eval_compiled(tables, &eq.concl.0, &assignment)?,
                eval_compiled(tables, &eq.concl.1, &assignment)?,
            ) {
                if l != r {
                    return Ok(false);
                }
            }
            if !bump(&mut assignment, n) {
                break;
            }
        }
    }
    Ok(true)
}

/// On completed tables: do all quasiequations hold, and (if given) does the
/// negated law fail somewhere? Returns the first witness of that failure.
fn complete_check(
    tables: &PartialTables,
    quasis: &[(usize, CompiledLaw)],
    negated: Option<(&Law, &CompiledLaw)>,
) -> Result<Option<Option<Violation>>, EvalError> {
    let n = tables.n;
    for (_, q) in quasis {
        let mut assignment = alloc::vec![0usize; q.var_count];
        loop {
            let mut hold = true;
            for (l, r) in &q.hyps {
                let lv = eval_compiled(tables, l, &assignment)?.expect("complete");
                let rv = eval_compiled(tables, r, &assignment)?.expect("complete");
                if lv != rv {
                    hold = false;
                    break;
                }
            }
            if hold {
                let lv = eval_compiled(tables, &q.concl.0, &assignment)?.expect("complete");
                let rv = eval_compiled(tables, &q.concl.1, &assignment)?.expect("complete");
                if lv != rv {
                    return Ok(None);
                }
            }
            if !bump(&mut assignment, n) {
                break;
            }
        }
    }
    match negated {
        None => Ok(Some(None)),
        Some((law, c)) => {
            let vars = law.variables();
            let mut assignment = alloc::vec![0usize; c.var_count];
            loop {
                let mut hold = true;
                for (l, r) in &c.hyps {
                    let lv = eval_compiled(tables, l, &assignment)?.expect("complete");
                    let rv = eval_compiled(tables, r, &assignment)?.expect("complete");
                    if lv != rv {
                        hold = false;
                        break;
                    }
                }
                if hold {
                    let lv = eval_compiled(tables, &c.concl.0, &assignment)?.expect("complete");
                    let rv = eval_compiled(tables, &c.concl.1, &assignment)?.expect("complete");
                    if lv != rv {
                        return Ok(Some(Some(Violation {
                            law: law.name.clone(),
                            variables: vars,
                            assignment,
                            lhs: lv,
                            rhs: rv,
                        })));
                    }
                }
                if !bump(&mut assignment, n) {
                    break;
                }
            }
            // the negated law holds everywhere: not a counter-model
            Ok(None)
        }
    }
}

fn bump(assignment: &mut [usize], n: usize) -> bool {
    let mut i = assignment.len();
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        assignment[i] += 1;
        if assignment[i] < n {
            return true;
        }
        assignment[i] = 0;
    }
}

fn table_len(arity: usize, n: usize) -> usize {
    let mut len = 1;
    for _ in 0..arity {
        len *= n;
    }
    len
}

struct Dfs<'a> {
    cells: Vec<(Sym, usize)>,
    tables: PartialTables,
    equations: Vec<CompiledLaw>,
    quasis: Vec<(usize, CompiledLaw)>,
    negated: Option<(&'a Law, CompiledLaw)>,
    limits: &'a SearchLimits<'a>,
    stats: SearchStats,
}

/// How a depth-first sweep ended: the subtree was fully covered, or a
/// limit fired (also used to unwind after the visitor breaks).
enum DfsEnd {
    Done,
    Aborted,
}

impl<'a> Dfs<'a> {
    fn to_algebra(&self) -> Result<FinAlgebra, SearchError> {
        let n = self.tables.n;
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mut tables = BTreeMap::new();
        let mut zero = None;
        let mut one = None;
        for (sym, t) in &self.tables.tables {
            let full: Vec<usize> = t.iter().map(|v| v.expect("complete")).collect();
            match sym {
                Sym::Zero => zero = Some(full[0]),
                Sym::One => one = Some(full[0]),
                _ => {
                    tables.insert(*sym, full);
                }
            }
        }
        FinAlgebra::new(labels, tables, zero, one).map_err(|e| SearchError::BadInput(e.to_string()))
    }
}

fn prepare<'a>(
    sig: &Signature,
    laws: &'a [Law],
    size: usize,
    negated: Option<&'a Law>,
    limits: &'a SearchLimits<'a>,
) -> Result<Dfs<'a>, SearchError> {
    if size == 0 {
        return Err(SearchError::BadInput("size must be at least 1".into()));
    }
    // every symbol used by the laws must be searched or derivable
    let searched: Signature = sig.clone();
    let mut all_laws: Vec<&Law> = laws.iter().collect();
    if let Some(l) = negated {
        all_laws.push(l);
    }
    for law in &all_laws {
        for sym in law.symbols() {
            let derivable = sym == Sym::Res
                && (searched.contains(Sym::Mns)
                    || (searched.contains(Sym::Dom) && searched.contains(Sym::Cmp)));
            if !searched.contains(sym) && !derivable {
                return Err(SearchError::BadInput(alloc::format!(
                    "law `{}` uses `{sym}` which is not in the search signature",
                    law.name
                )));
            }
        }
    }
    let mut tables = BTreeMap::new();
    let mut cells = Vec::new();
    for sym in sig.iter() {
        let len = table_len(sym.arity(), size);
        tables.insert(sym, alloc::vec![None; len]);
        for idx in 0..len {
            cells.push((sym, idx));
        }
    }
    if limits.cell_order == CellOrder::Reversed {
        cells.reverse();
    }
    let mut equations = Vec::new();
    let mut quasis = Vec::new();
    for (i, law) in laws.iter().enumerate() {
        let c = compile_law(law)?;
        if law.is_equation() {
            equations.push(c);
        } else {
            quasis.push((i, c));
        }
    }
    let negated_c = match negated {
        None => None,
        Some(l) => Some((l, compile_law(l)?)),
    };
    Ok(Dfs {
        cells,
        tables: PartialTables { n: size, tables },
        equations,
        quasis,
        negated: negated_c,
        limits,
        stats: SearchStats::default(),
    })
}

/// Searches for a model of `laws` of exactly `size` elements; if `negated`
/// is given, the model must additionally falsify it somewhere. Returns the
/// lexicographically least model, exhaustion, or an abort. Every returned
/// model is independently re-verified with [`check_lawset`] before being
/// handed back.
pub fn search_model(
    sig: &Signature,
    laws: &[Law],
    size: usize,
    negated: Option<&Law>,
    limits: &SearchLimits<'_>,
) -> Result<SearchResult, SearchError> {
    let mut found: Option<(FinAlgebra, Option<Violation>)> = None;
    let mut dfs = prepare(sig, laws, size, negated, limits)?;
    let mut visit = |alg: &FinAlgebra, w: Option<Violation>| {
        found = Some((alg.clone(), w));
        ControlFlow::Break(())
    };
    let end = run_with(&mut dfs, &mut visit)?;
    let stats = dfs.stats;
    if let Some((algebra, negated_witness)) = found {
        let report =
            check_lawset(&algebra, laws).map_err(|e| SearchError::BadInput(e.to_string()))?;
        if !report.all_hold() {
            return Err(SearchError::BadInput(
                "search returned a model that fails re-verification".into(),
            ));
        }
        if let Some(l) = negated {
            if law_holds(&algebra, l).map_err(|e| SearchError::BadInput(e.to_string()))?
                == LawOutcome::Holds
            {
                return Err(SearchError::BadInput(
                    "search returned a counter-model that satisfies the negated law".into(),
                ));
            }
        }
        return Ok(SearchResult {
            size,
            outcome: SearchOutcome::Model {
                algebra,
                negated_witness,
            },
            stats,
        });
    }
    Ok(SearchResult {
        size,
        outcome: match end {
            DfsEnd::Done => SearchOutcome::Exhausted,
            DfsEnd::Aborted => SearchOutcome::Aborted,
        },
        stats,
    })
}

fn run_with<G>(dfs: &mut Dfs<'_>, visit: &mut G) -> Result<DfsEnd, SearchError>
where
    G: FnMut(&FinAlgebra, Option<Violation>) -> ControlFlow<()>,
{
    run_dfs(dfs, 0, visit)
}

fn run_dfs<G>(dfs: &mut Dfs<'_>, depth: usize, visit: &mut G) -> Result<DfsEnd, SearchError>
where
    G: FnMut(&FinAlgebra, Option<Violation>) -> ControlFlow<()>,
{
    if depth == dfs.cells.len() {
        let negated = dfs.negated.as_ref().map(|(l, c)| (*l, c));
        if let Some(witness) = complete_check(&dfs.tables, &dfs.quasis, negated)? {
            let algebra = dfs.to_algebra()?;
            if let ControlFlow::Break(()) = visit(&algebra, witness) {
                return Ok(DfsEnd::Aborted);
            }
        }
        return Ok(DfsEnd::Done);
    }
    let (sym, idx) = dfs.cells[depth];
    let max_value = if dfs.limits.least_number {
        let used = dfs
            .tables
            .tables
            .values()
            .flatten()
            .filter_map(|v| *v)
            .max()
            .map_or(0, |m| m + 1);
        used.min(dfs.tables.n - 1)
    } else {
        dfs.tables.n - 1
    };
    for value in 0..=max_value {
        dfs.stats.nodes += 1;
        if let Some(cap) = dfs.limits.node_cap {
            if dfs.stats.nodes > cap {
                return Ok(DfsEnd::Aborted);
            }
        }
        if dfs.stats.nodes.is_multiple_of(1024) {
            if let Some(cancel) = dfs.limits.cancel {
                if cancel() {
                    return Ok(DfsEnd::Aborted);
                }
            }
        }
        dfs.tables.tables.get_mut(&sym).unwrap()[idx] = Some(value);
        if equations_consistent(&dfs.tables, &dfs.equations)? {
            match run_dfs(dfs, depth + 1, visit)? {
                DfsEnd::Aborted => {
                    dfs.tables.tables.get_mut(&sym).unwrap()[idx] = None;
                    return Ok(DfsEnd::Aborted);
                }
                DfsEnd::Done => {}
            }
        }
        dfs.tables.tables.get_mut(&sym).unwrap()[idx] = None;
    }
    Ok(DfsEnd::Done)
}

/// One irredundance certificate: a model of everything but the omitted law
/// that falsifies the omitted law, or a bounded failure to find one.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub omitted: Law,
    pub outcome: CertOutcome,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub enum CertOutcome {
    Model {
        algebra: FinAlgebra,
        witness: Violation,
        size: usize,
    },
    /// No counter-model up to the size bound. `aborted` records whether any
    /// size was cut short rather than exhausted.
    NoneUpToBound { max_size: usize, aborted: bool },
}

/// For each law in turn: search sizes `2..=max_size` for a model of the
/// remaining laws that falsifies the omitted one.
pub fn irredundance_certificates(
    sig: &Signature,
    laws: &[Law],
    max_size: usize,
    limits: &SearchLimits<'_>,
) -> Result<Vec<Certificate>, SearchError> {
    if laws.is_empty() {
        return Err(SearchError::BadInput("empty law set".into()));
    }
    let mut out = Vec::with_capacity(laws.len());
    for (i, omitted) in laws.iter().enumerate() {
        let rest: Vec<Law> = laws
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, l)| l.clone())
            .collect();
        let mut nodes = 0u64;
        let mut aborted = false;
        let mut cert: Option<CertOutcome> = None;
        for size in 2..=max_size {
            let result = search_model(sig, &rest, size, Some(omitted), limits)?;
            nodes += result.stats.nodes;
            match result.outcome {
                SearchOutcome::Model {
                    algebra,
                    negated_witness,
                } => {
                    cert = Some(CertOutcome::Model {
                        algebra,
                        witness: negated_witness.expect("negated search yields a witness"),
                        size,
                    });
                    break;
                }
                SearchOutcome::Aborted => aborted = true,
                SearchOutcome::Exhausted => {}
            }
        }
        out.push(Certificate {
            omitted: omitted.clone(),
            outcome: cert.unwrap_or(CertOutcome::NoneUpToBound { max_size, aborted }),
            nodes,
        });
    }
    Ok(out)
}

/// A quotient-instability witness: an algebra satisfying all the laws whose
/// quotient by some congruence falsifies the designated quasiequation.
#[derive(Clone, Debug)]
pub struct QuasiWitness {
    pub algebra: FinAlgebra,
    pub theta: CongruencePartition,
    pub quotient: FinAlgebra,
    pub violation: Violation,
}

/// Verifies a given (algebra, congruence) pair as a quotient-instability
/// witness for `law_q` against the equational part `laws_eq`.
pub fn verify_quasivariety_pair(
    alg: &FinAlgebra,
    theta: &CongruencePartition,
    laws_eq: &[Law],
    law_q: &Law,
) -> Result<QuasiWitness, SearchError> {
    let to_err = |m: String| SearchError::BadInput(m);
    let report = check_lawset(alg, laws_eq).map_err(|e| to_err(e.to_string()))?;
    if !report.all_hold() {
        return Err(to_err("algebra fails the equational part".into()));
    }
    match law_holds(alg, law_q).map_err(|e| to_err(e.to_string()))? {
        LawOutcome::Holds => {}
        LawOutcome::Violated(v) => {
            return Err(to_err(alloc::format!(
                "algebra itself falsifies the quasiequation at {}",
                v.describe(alg)
            )))
        }
    }
    let q = quotient(alg, theta).map_err(|e| to_err(e.to_string()))?;
    match law_holds(&q, law_q).map_err(|e| to_err(e.to_string()))? {
        LawOutcome::Violated(violation) => Ok(QuasiWitness {
            algebra: alg.clone(),
            theta: theta.clone(),
            quotient: q,
            violation,
        }),
        LawOutcome::Holds => Err(to_err(
            "quotient still satisfies the quasiequation; not a witness".into(),
        )),
    }
}

/// Searches sizes `2..=max_size` for a quotient-instability witness. A pure
/// equation can never have one (equations survive quotients), so the answer
/// for an equational `law_q` is immediately `None`.
pub fn quasivariety_witness(
    sig: &Signature,
    laws_eq: &[Law],
    law_q: &Law,
    max_size: usize,
    limits: &SearchLimits<'_>,
) -> Result<Option<QuasiWitness>, SearchError> {
    if law_q.is_equation() {
        return Ok(None);
    }
    let mut all = laws_eq.to_vec();
    all.push(law_q.clone());
    for size in 2..=max_size.min(8) {
        let mut witness: Option<QuasiWitness> = None;
        let mut dfs = prepare(sig, &all, size, None, limits)?;
        let mut visit = |alg: &FinAlgebra, _w: Option<Violation>| {
            let congruences = match all_congruences(alg) {
                Ok(c) => c,
                Err(_) => return ControlFlow::Continue(()),
            };
            for theta in congruences {
                if theta.is_identity() || theta.block_count() <= 1 {
                    continue;
                }
                if let Ok(q) = quotient(alg, &theta) {
                    if let Ok(LawOutcome::Violated(violation)) = law_holds(&q, law_q) {
                        witness = Some(QuasiWitness {
                            algebra: alg.clone(),
                            theta,
                            quotient: q,
                            violation,
                        });
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        };
        run_with(&mut dfs, &mut visit)?;
        if witness.is_some() {
            return Ok(witness);
        }
    }
    Ok(None)
}
