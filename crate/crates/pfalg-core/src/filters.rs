//! Filters of the domain-restriction reduct of a finite algebra, and what
//! they induce: principal filters, filter extension, separating filters,
//! maximal separating saturation, primeness predicates, and the merging
//! congruence each filter defines.
//!
//! Throughout, a filter is a non-empty subset closed under `∘` and upward
//! closed under the first projection quasiorder `≲`. In a finite band every
//! such set is a principal up-set, so enumeration works one generator at a
//! time. A filter containing the distinguished zero is the whole carrier and
//! can separate nothing, so enumeration skips those; the whole carrier is
//! still enumerated when no zero is distinguished.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{natural_le, proj_quasiorder, CongruencePartition, FinAlgebra};
use crate::syntax::{EvalError, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterError {
    Eval(EvalError),
    NotAFilter(String),
    /// The requested operation needs `a ≰ b`.
    NotApplicable {
        a: usize,
        b: usize,
    },
    ElementPresent(usize),
    /// A family that was required to be separating failed to separate the
    /// given pair. This would contradict a verified construction, so it is
    /// surfaced loudly rather than returned as data.
    NotSeparating {
        a: usize,
        b: usize,
    },
}

impl fmt::Display for FilterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterError::Eval(e) => write!(f, "{e}"),
            FilterError::NotAFilter(m) => write!(f, "not a filter: {m}"),
            FilterError::NotApplicable { a, b } => {
                write!(
                    f,
                    "separation is only defined when a is not below b (got a={a}, b={b})"
                )
            }
            FilterError::ElementPresent(a) => {
                write!(f, "element {a} is already in the filter")
            }
            FilterError::NotSeparating { a, b } => write!(
                f,
                "internal contradiction: family fails to separate ({a},{b})"
            ),
        }
    }
}

impl From<EvalError> for FilterError {
    fn from(e: EvalError) -> Self {
        FilterError::Eval(e)
    }
}

/// A filter, stored as its sorted member list. Operations take the host
/// algebra explicitly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Filter {
    members: Vec<usize>,
}

impl Filter {
    /// Validates the two filter conditions against `alg`.
    pub fn new(alg: &FinAlgebra, mut members: Vec<usize>) -> Result<Filter, FilterError> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(FilterError::NotAFilter("empty".into()));
        }
        if members.iter().any(|&x| x >= alg.size()) {
            return Err(FilterError::NotAFilter("member out of range".into()));
        }
        let filter = Filter { members };
        for &a in &filter.members {
            for &b in &filter.members {
                let ab = alg.res(a, b)?;
                if !filter.contains(ab) {
                    return Err(FilterError::NotAFilter(format!(
                        "not closed: res({},{}) = {} escapes",
                        alg.label(a),
                        alg.label(b),
                        alg.label(ab)
                    )));
                }
            }
            for b in 0..alg.size() {
                if proj_quasiorder(alg, a, b)? && !filter.contains(b) {
                    return Err(FilterError::NotAFilter(format!(
                        "not an up-set: {} below {} escapes",
                        alg.label(a),
                        alg.label(b)
                    )));
                }
            }
        }
        Ok(filter)
    }

    fn from_sorted(members: Vec<usize>) -> Filter {
        Filter { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// True iff the filter is the whole carrier.
    pub fn is_improper(&self, alg: &FinAlgebra) -> bool {
        self.members.len() == alg.size()
    }

    /// Sorted member labels, e.g. `{b,c,d}`.
    pub fn describe(&self, alg: &FinAlgebra) -> String {
        let mut names: Vec<&str> = self.members.iter().map(|&x| alg.label(x)).collect();
        names.sort_unstable();
        let mut s = String::from("{");
        for (i, n) in names.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(n);
        }
        s.push('}');
        s
    }
}

/// The principal filter `a↑ = { e | a ≲ e }`.
pub fn principal_filter(alg: &FinAlgebra, a: usize) -> Result<Filter, FilterError> {
    let mut members = Vec::new();
    for e in 0..alg.size() {
        if proj_quasiorder(alg, a, e)? {
            members.push(e);
        }
    }
    Ok(Filter::from_sorted(members))
}

/// Extends a filter by an outside element: `F_a = { b | f∘a ≲ b, f ∈ F }`.
/// Contains `a` and all of `F`.
pub fn extend_filter(alg: &FinAlgebra, filter: &Filter, a: usize) -> Result<Filter, FilterError> {
    if filter.contains(a) {
        return Err(FilterError::ElementPresent(a));
    }
    let mut members = Vec::new();
    'outer: for b in 0..alg.size() {
        for &f in filter.members() {
            let fa = alg.res(f, a)?;
            if proj_quasiorder(alg, fa, b)? {
                members.push(b);
                continue 'outer;
            }
        }
    }
    Ok(Filter::from_sorted(members))
}

/// Is `filter` `(a,b)`-separating: does it contain `a` while no member `e`
/// merges `a` and `b` in the sense `e∘a = e∘b`? Only defined when `a ≰ b`.
pub fn is_separating_for(
    alg: &FinAlgebra,
    filter: &Filter,
    a: usize,
    b: usize,
) -> Result<bool, FilterError> {
    if natural_le(alg, a, b)? {
        return Err(FilterError::NotApplicable { a, b });
    }
    if !filter.contains(a) {
        return Ok(false);
    }
    for &e in filter.members() {
        if alg.res(e, a)? == alg.res(e, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Grows `a↑` to a maximal `(a,b)`-separating filter: repeatedly extend by
/// the least-index element whose extension stays separating, until none
/// does. Deterministic; the result is maximal under inclusion because every
/// larger separating filter would have admitted such an extension.
pub fn maximal_separating_filter(
    alg: &FinAlgebra,
    a: usize,
    b: usize,
) -> Result<Filter, FilterError> {
    let mut filter = principal_filter(alg, a)?;
    debug_assert!(is_separating_for(alg, &filter, a, b)?);
    'grow: loop {
        for y in 0..alg.size() {
            if filter.contains(y) {
                continue;
            }
            let bigger = extend_filter(alg, &filter, y)?;
            if is_separating_for(alg, &bigger, a, b)? {
                filter = bigger;
                continue 'grow;
            }
        }
        return Ok(filter);
    }
}

/// Prime in the minus sense: `a ∈ F` implies `b ∈ F` or `a − b ∈ F`.
pub fn is_prime_minus(alg: &FinAlgebra, filter: &Filter) -> Result<bool, FilterError> {
    if alg.table(Sym::Mns).is_none() {
        return Err(EvalError::MissingSymbol(Sym::Mns).into());
    }
    for &a in filter.members() {
        for b in 0..alg.size() {
            if !filter.contains(b) && !filter.contains(alg.op2(Sym::Mns, a, b)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Prime in the override sense: `a ⊔ b ∈ F` implies `a ∈ F` or `b ∈ F`.
pub fn is_prime_override(alg: &FinAlgebra, filter: &Filter) -> Result<bool, FilterError> {
    if alg.table(Sym::Ovr).is_none() {
        return Err(EvalError::MissingSymbol(Sym::Ovr).into());
    }
    for a in 0..alg.size() {
        for b in 0..alg.size() {
            if filter.contains(alg.op2(Sym::Ovr, a, b))
                && !filter.contains(a)
                && !filter.contains(b)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Weakly prime: `a ∈ F` implies `b ∈ F` or `a ∩ (a ⋄ b) ∈ F`.
pub fn is_weakly_prime(alg: &FinAlgebra, filter: &Filter) -> Result<bool, FilterError> {
    if alg.table(Sym::Upd).is_none() || alg.table(Sym::Cap).is_none() {
        return Err(EvalError::MissingSymbol(Sym::Upd).into());
    }
    for &a in filter.members() {
        for b in 0..alg.size() {
            if filter.contains(b) {
                continue;
            }
            let witness = alg.op2(Sym::Cap, a, alg.op2(Sym::Upd, a, b));
            if !filter.contains(witness) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The congruence a filter induces, plus whether the filter was improper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsCongruence {
    pub partition: CongruencePartition,
    pub improper: bool,
}

/// `ε_F`: merge `a` and `b` whenever some `e ∈ F` has `e∘a = e∘b`. Both `F`
/// and its complement are unions of the resulting classes.
pub fn eps_congruence(alg: &FinAlgebra, filter: &Filter) -> Result<EpsCongruence, FilterError> {
    let n = alg.size();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        'pair: for b in (a + 1)..n {
            for &e in filter.members() {
                if alg.res(e, a)? == alg.res(e, b)? {
                    pairs.push((a, b));
                    continue 'pair;
                }
            }
        }
    }
    Ok(EpsCongruence {
        partition: CongruencePartition::from_pairs(n, &pairs),
        improper: filter.is_improper(alg),
    })
}

/// Which filters a family retains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    All,
    MaxSeparating,
    PrimeMinus,
    PrimeOverride,
    WeaklyPrime,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::All => "all",
            FamilyKind::MaxSeparating => "max-separating",
            FamilyKind::PrimeMinus => "prime-minus",
            FamilyKind::PrimeOverride => "prime-override",
            FamilyKind::WeaklyPrime => "weakly-prime",
        })
    }
}

/// A separating set of filters.
#[derive(Clone, Debug)]
pub struct FilterFamily {
    pub kind: FamilyKind,
    pub filters: Vec<Filter>,
}

/// Every filter of the algebra, one per `∼`-class generator, in least-
/// generator order; filters containing the distinguished zero are skipped
/// (such a filter is the whole carrier and separates nothing).
pub fn enumerate_filters(alg: &FinAlgebra) -> Result<Vec<Filter>, FilterError> {
    let mut out: Vec<Filter> = Vec::new();
    for a in 0..alg.size() {
        if alg.zero() == Some(a) {
            continue;
        }
        let f = principal_filter(alg, a)?;
        if let Some(z) = alg.zero() {
            if f.contains(z) {
                continue;
            }
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Checks that some member of `filters` is `(a,b)`-separating for every pair
/// with `a ≰ b`.
pub fn verify_separating(alg: &FinAlgebra, filters: &[Filter]) -> Result<(), FilterError> {
    for a in 0..alg.size() {
        'pair: for b in 0..alg.size() {
            if natural_le(alg, a, b)? {
                continue;
            }
            for f in filters {
                if is_separating_for(alg, f, a, b)? {
                    continue 'pair;
                }
            }
            return Err(FilterError::NotSeparating { a, b });
        }
    }
    Ok(())
}

/// Assembles the family of the given kind and verifies it separates. A
/// non-separating result is an internal contradiction (the constructions
/// guarantee separation on axiom-satisfying hosts) and errors out.
pub fn separating_family(alg: &FinAlgebra, kind: FamilyKind) -> Result<FilterFamily, FilterError> {
    let filters = match kind {
        FamilyKind::All => enumerate_filters(alg)?,
        FamilyKind::MaxSeparating => {
            let mut out: Vec<Filter> = Vec::new();
            for a in 0..alg.size() {
                for b in 0..alg.size() {
                    if a == b || natural_le(alg, a, b)? {
                        continue;
                    }
                    let f = maximal_separating_filter(alg, a, b)?;
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            out
        }
        FamilyKind::PrimeMinus => {
            let mut out = Vec::new();
            for f in enumerate_filters(alg)? {
                if is_prime_minus(alg, &f)? {
                    out.push(f);
                }
            }
            out
        }
        FamilyKind::PrimeOverride => {
            let mut out = Vec::new();
            for f in enumerate_filters(alg)? {
                if is_prime_override(alg, &f)? {
                    out.push(f);
                }
            }
            out
        }
        FamilyKind::WeaklyPrime => {
            let mut out = Vec::new();
            for f in enumerate_filters(alg)? {
                if is_weakly_prime(alg, &f)? {
                    out.push(f);
                }
            }
            out
        }
    };
    verify_separating(alg, &filters)?;
    Ok(FilterFamily { kind, filters })
}
