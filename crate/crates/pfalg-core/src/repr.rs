//! Building a concrete representation of an abstract algebra from a
//! separating set of filters, and verifying, symbol by symbol, that the
//! represented operations match the concrete ones.
//!
//! The base set has one patch per filter `F`: the merging-congruence classes
//! lying inside `F`, plus one extra point standing for a formal identity.
//! The image of an element `a` sends the class of `x` to the class of `x·a`
//! exactly when `x·a` lands in `F` (composition acts on the right), and
//! sends the identity point to the class of `a` when `a ∈ F`.
//!
//! When the signature carries a domain operation the identity point cannot
//! sit in a class of its own: an element `y ∈ F` with `dom(e) = e∘y` for
//! some `e ∈ F` acts as the identity on that patch and must share the
//! identity's class, otherwise images of `dom(a)` would fail to be
//! restrictions of the identity map.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{lift_to_stack, AlgebraError, FinAlgebra, LiftCase};
use crate::catalog::{load_lawset, CatalogError};
use crate::filters::{separating_family, FamilyKind, Filter, FilterError, FilterFamily};
use crate::pfun::{FinSet, PFun, PfunError};
use crate::syntax::{check_lawset, EvalError, Signature, Sym, Violation};

/// Largest filter family a build will accept.
pub const MAX_FAMILY_FILTERS: usize = 64;

#[derive(Clone, Debug)]
pub enum ReprError {
    /// No representation route exists for this signature.
    UnsupportedSignature(Signature),
    /// The algebra fails an axiom of the route; the refusal carries the
    /// first violation.
    AxiomsFail {
        lawset: String,
        violation: Violation,
    },
    /// A construction step contradicted a verified guarantee.
    Contradiction(String),
    FamilyTooLarge(usize),
    Filter(FilterError),
    Algebra(AlgebraError),
    Catalog(CatalogError),
    Eval(EvalError),
    Pfun(PfunError),
}

impl fmt::Display for ReprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReprError::UnsupportedSignature(s) => {
                write!(f, "no representation route for signature {s}")
            }
            ReprError::AxiomsFail { lawset, violation } => {
                write!(f, "algebra fails `{lawset}` law {}", violation.law)
            }
            ReprError::Contradiction(m) => write!(f, "internal contradiction: {m}"),
            ReprError::FamilyTooLarge(n) => {
                write!(
                    f,
                    "family of {n} filters exceeds the {MAX_FAMILY_FILTERS} cap"
                )
            }
            ReprError::Filter(e) => write!(f, "{e}"),
            ReprError::Algebra(e) => write!(f, "{e}"),
            ReprError::Catalog(e) => write!(f, "{e}"),
            ReprError::Eval(e) => write!(f, "{e}"),
            ReprError::Pfun(e) => write!(f, "{e}"),
        }
    }
}

impl From<FilterError> for ReprError {
    fn from(e: FilterError) -> Self {
        ReprError::Filter(e)
    }
}
impl From<AlgebraError> for ReprError {
    fn from(e: AlgebraError) -> Self {
        ReprError::Algebra(e)
    }
}
impl From<CatalogError> for ReprError {
    fn from(e: CatalogError) -> Self {
        ReprError::Catalog(e)
    }
}
impl From<EvalError> for ReprError {
    fn from(e: EvalError) -> Self {
        ReprError::Eval(e)
    }
}
impl From<PfunError> for ReprError {
    fn from(e: PfunError) -> Self {
        ReprError::Pfun(e)
    }
}

/// The axiom entries and filter family kind serving a signature, or `None`
/// when the toolkit has no route (signatures with difference or comparison,
/// override or update without both minus and intersection, and the
/// override-with-restriction-only case are not representable here).
pub fn route_for(sig: &Signature) -> Option<(Vec<&'static str>, FamilyKind)> {
    let has = |s| sig.contains(s);
    if has(Sym::Dif) || has(Sym::K) || has(Sym::Zero) || has(Sym::One) {
        return None;
    }
    if has(Sym::Ovr) && has(Sym::Upd) {
        return None;
    }
    if has(Sym::Dom) && !has(Sym::Cmp) {
        return None;
    }
    if !has(Sym::Res) && !has(Sym::Mns) && !has(Sym::Dom) {
        return None;
    }
    let cmp = has(Sym::Cmp);
    let cap = has(Sym::Cap);
    let mut entries: Vec<&'static str> = Vec::new();
    if has(Sym::Dom) {
        entries.push("lrs");
    }
    let kind;
    if has(Sym::Mns) {
        kind = FamilyKind::PrimeMinus;
        let with_cmp = cmp || has(Sym::Dom);
        entries.push(match (has(Sym::Ovr), has(Sym::Upd), with_cmp) {
            (false, false, false) => "minus",
            (false, false, true) => "minus-semigroup",
            (true, false, false) => "minus-over",
            (true, false, true) => "minus-over-semigroup",
            (false, true, false) => "minus-update",
            (false, true, true) => "minus-update-semigroup",
            (true, true, _) => unreachable!("rejected above"),
        });
        if cap {
            entries.push(if with_cmp { "onestack-cap" } else { "rnb-cap" });
        }
    } else if has(Sym::Ovr) {
        if !cap {
            return None;
        }
        kind = FamilyKind::PrimeOverride;
        entries.push(if cmp || has(Sym::Dom) {
            "onestack-cap-over"
        } else {
            "rnb-cap-over"
        });
    } else if has(Sym::Upd) {
        if !cap {
            return None;
        }
        kind = FamilyKind::WeaklyPrime;
        entries.push(if cmp || has(Sym::Dom) {
            "onestack-cap-upd"
        } else {
            "rnb-cap-upd"
        });
    } else {
        kind = FamilyKind::All;
        entries.push(match (cmp || has(Sym::Dom), cap) {
            (false, false) => "rnb",
            (false, true) => "rnb-cap",
            (true, false) => "onestack",
            (true, true) => "onestack-cap",
        });
    }
    Some((entries, kind))
}

/// A composition-ready host plus the separating family chosen for it.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub algebra: FinAlgebra,
    pub family: FilterFamily,
    pub original_signature: Signature,
}

/// Checks the route's axioms on the algebra (refusing with the first
/// violation), lifts composition-free input to a stack, and assembles the
/// separating family matching the signature.
pub fn choose_family(alg: &FinAlgebra, sig: &Signature) -> Result<Prepared, ReprError> {
    for sym in sig.iter() {
        if !alg.signature().contains(sym) {
            return Err(ReprError::Eval(EvalError::MissingSymbol(sym)));
        }
    }
    let (entries, kind) =
        route_for(sig).ok_or_else(|| ReprError::UnsupportedSignature(sig.clone()))?;

    // keep only the requested tables so the route is checked on the reduct
    let mut reduct = alg.clone();
    for sym in alg.signature().iter() {
        if !sig.contains(sym) {
            reduct.remove_table(sym);
        }
    }

    // minus signatures carry their zero as mns(x,x); locate and mark it
    if sig.contains(Sym::Mns) {
        let z = reduct.op2(Sym::Mns, 0, 0);
        if (0..reduct.size()).any(|x| reduct.op2(Sym::Mns, x, x) != z) {
            return Err(ReprError::Contradiction(
                "mns(x,x) is not constant; the algebra has no zero".to_string(),
            ));
        }
        match reduct.zero() {
            None => reduct.set_zero(Some(z)),
            Some(w) if w != z => {
                return Err(ReprError::Contradiction(format!(
                    "marked zero `{}` differs from mns(x,x) = `{}`",
                    reduct.label(w),
                    reduct.label(z)
                )))
            }
            _ => {}
        }
    }

    for entry_name in entries {
        let entry = load_lawset(entry_name)?;
        let report = check_lawset(&reduct, &entry.sound_laws())?;
        let failure = report
            .failures()
            .next()
            .map(|(law, v)| (law.name.clone(), v.clone()));
        if let Some((lawset, violation)) = failure {
            return Err(ReprError::AxiomsFail { lawset, violation });
        }
    }

    let mut host = if reduct.signature().contains(Sym::Cmp) {
        reduct
    } else {
        let case = LiftCase::for_signature(&reduct.signature())
            .ok_or_else(|| ReprError::UnsupportedSignature(sig.clone()))?;
        lift_to_stack(&reduct, case)?
    };
    // materialise restriction so filters and verification see it directly
    if !host.signature().contains(Sym::Res) {
        let n = host.size();
        let mut res = alloc::vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                res[x * n + y] = host.res(x, y)?;
            }
        }
        host.insert_table(Sym::Res, res)?;
    }

    let family = separating_family(&host, kind)?;
    if family.filters.len() > MAX_FAMILY_FILTERS {
        return Err(ReprError::FamilyTooLarge(family.filters.len()));
    }
    Ok(Prepared {
        algebra: host,
        family,
        original_signature: sig.clone(),
    })
}

/// One point of the base set: a filter patch index plus a class id within
/// that patch (`class == 0` is the identity point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub filter: usize,
    pub class: usize,
}

/// The finished representation: a base set partitioned into filter patches
/// and one concrete partial function per algebra element.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: FinAlgebra,
    pub family: FilterFamily,
    pub base: FinSet,
    pub points: Vec<BasePoint>,
    /// Per filter: class member lists; class 0 is the identity class and
    /// lists the elements merged with the formal identity (often none).
    pub classes: Vec<Vec<Vec<usize>>>,
    pub images: Vec<PFun>,
}

/// One filter patch, mid-construction.
struct Patch {
    /// classes[0] is the identity class (members merged with the identity);
    /// the rest are the merging-congruence classes inside the filter.
    classes: Vec<Vec<usize>>,
    /// element -> local class index, for members of the filter
    class_of: Vec<Option<usize>>,
}

fn build_patch(alg: &FinAlgebra, filter: &Filter) -> Result<Patch, ReprError> {
    let eps = crate::filters::eps_congruence(alg, filter)?;
    let n = alg.size();
    let mut class_of: Vec<Option<usize>> = alloc::vec![None; n];
    // the filter must be a union of classes
    for block in eps.partition.blocks() {
        let inside = block.iter().filter(|&&x| filter.contains(x)).count();
        if inside != 0 && inside != block.len() {
            return Err(ReprError::Contradiction(format!(
                "filter {} is not a union of merging classes",
                filter.describe(alg)
            )));
        }
    }
    // elements acting as the identity on the patch join the identity class
    let has_dom = alg.signature().contains(Sym::Dom);
    let mut merged: Vec<usize> = Vec::new();
    if has_dom {
        for &y in filter.members() {
            'e: for &e in filter.members() {
                if alg.op1(Sym::Dom, e) == alg.res(e, y)? {
                    merged.push(y);
                    break 'e;
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = alloc::vec![merged.clone()];
    for &x in &merged {
        class_of[x] = Some(0);
    }
    for block in eps.partition.blocks() {
        if !filter.contains(block[0]) {
            continue;
        }
        // a class is either wholly merged with the identity or not at all
        let merged_count = block.iter().filter(|&&x| class_of[x] == Some(0)).count();
        if merged_count > 0 {
            if merged_count != block.len() {
                return Err(ReprError::Contradiction(
                    "identity merging split a congruence class".to_string(),
                ));
            }
            continue;
        }
        let id = classes.len();
        for &x in &block {
            class_of[x] = Some(id);
        }
        classes.push(block);
    }
    Ok(Patch { classes, class_of })
}

fn class_label(alg: &FinAlgebra, members: &[usize]) -> String {
    let mut names: Vec<&str> = members.iter().map(|&x| alg.label(x)).collect();
    names.sort_unstable();
    names.concat()
}

/// Builds the representation over a separating family. Fails with an
/// internal contradiction (carrying a witness) if an image would be
/// ill-defined; on axiom-satisfying hosts that cannot happen.
pub fn build_representation(
    alg: &FinAlgebra,
    family: &FilterFamily,
) -> Result<Representation, ReprError> {
    if !alg.signature().contains(Sym::Cmp) {
        return Err(ReprError::Eval(EvalError::MissingSymbol(Sym::Cmp)));
    }
    if family.filters.len() > MAX_FAMILY_FILTERS {
        return Err(ReprError::FamilyTooLarge(family.filters.len()));
    }
    let n = alg.size();
    let mut patches: Vec<Patch> = Vec::with_capacity(family.filters.len());
    let mut labels: Vec<String> = Vec::new();
    let mut points: Vec<BasePoint> = Vec::new();
    for (fi, filter) in family.filters.iter().enumerate() {
        let patch = build_patch(alg, filter)?;
        for (ci, members) in patch.classes.iter().enumerate() {
            labels.push(format!("F{fi}:[{}]", class_label(alg, members)));
            points.push(BasePoint {
                filter: fi,
                class: ci,
            });
        }
        patches.push(patch);
    }
    if labels.is_empty() {
        // no proper filters (one-element algebra): a single inert point so
        // that images are functions over a non-empty carrier
        labels.push("F-:[]".to_string());
        points.push(BasePoint {
            filter: 0,
            class: 0,
        });
        patches.push(Patch {
            classes: alloc::vec![Vec::new()],
            class_of: alloc::vec![None; n],
        });
    }
    let base = FinSet::new("base", labels).map_err(ReprError::Pfun)?;

    // global point index per (filter, local class)
    let mut point_index: Vec<Vec<usize>> = Vec::with_capacity(patches.len());
    let mut next = 0usize;
    for patch in &patches {
        let ids: Vec<usize> = (0..patch.classes.len()).map(|c| next + c).collect();
        next += patch.classes.len();
        point_index.push(ids);
    }

    let mut images: Vec<PFun> = Vec::with_capacity(n);
    for a in 0..n {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (fi, filter) in family.filters.iter().enumerate() {
            let patch = &patches[fi];
            for (ci, members) in patch.classes.iter().enumerate() {
                let mut expected: Option<Option<usize>> = None;
                let value_of = |x: usize| -> Result<Option<usize>, ReprError> {
                    let xa = alg.op2(Sym::Cmp, x, a);
                    if !filter.contains(xa) {
                        return Ok(None);
                    }
                    let c = patch.class_of[xa].ok_or_else(|| {
                        ReprError::Contradiction(format!(
                            "product {} escapes its filter's classes",
                            alg.label(xa)
                        ))
                    })?;
                    Ok(Some(point_index[fi][c]))
                };
                if ci == 0 {
                    // the formal identity sends this point to the class of a
                    let v = if filter.contains(a) {
                        let c = patch.class_of[a].ok_or_else(|| {
                            ReprError::Contradiction("member without a class".to_string())
                        })?;
                        Some(point_index[fi][c])
                    } else {
                        None
                    };
                    expected = Some(v);
                }
                for &x in members {
                    let v = value_of(x)?;
                    match &expected {
                        None => expected = Some(v),
                        Some(w) if *w != v => {
                            return Err(ReprError::Contradiction(format!(
                                "image of `{}` is ill-defined on {}: members of class {} disagree",
                                alg.label(a),
                                filter.describe(alg),
                                class_label(alg, members),
                            )))
                        }
                        _ => {}
                    }
                }
                if let Some(Some(target)) = expected {
                    pairs.push((point_index[fi][ci], target));
                }
            }
        }
        images.push(PFun::from_pairs(&base, &base, &pairs)?);
    }

    Ok(Representation {
        algebra: alg.clone(),
        family: family.clone(),
        base,
        points,
        classes: patches.into_iter().map(|p| p.classes).collect(),
        images,
    })
}

/// One mismatch found while verifying a symbol.
#[derive(Clone, Debug)]
pub struct SymbolFailure {
    pub args: Vec<usize>,
    pub expected: String,
    pub got: String,
}

/// The full verification report: injectivity, zero mapping, and one line
/// per signature symbol.
#[derive(Clone, Debug)]
pub struct RepReport {
    /// `Some((a,b))` = two elements share an image.
    pub injectivity_failure: Option<(usize, usize)>,
    /// `None` when the algebra has no distinguished zero.
    pub zero_to_empty: Option<bool>,
    pub symbols: Vec<(Sym, Option<SymbolFailure>)>,
}

impl RepReport {
    pub fn all_pass(&self) -> bool {
        self.injectivity_failure.is_none()
            && self.zero_to_empty != Some(false)
            && self.symbols.iter().all(|(_, f)| f.is_none())
    }
}

fn apply_concrete_sym(sym: Sym, args: &[&PFun]) -> Result<PFun, PfunError> {
    crate::pfun::apply_concrete(sym, args)
}

fn describe_graph(f: &PFun) -> String {
    let mut s = String::from("{");
    for (k, (p, q)) in f.graph_pairs().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&format!("{}->{}", f.source().label(p), f.target().label(q)));
    }
    s.push('}');
    s
}

/// Checks that the element map is injective, the zero (if any) maps to the
/// empty function, and every signature symbol is respected: applying the
/// table then mapping equals mapping then applying the concrete operation,
/// graph for graph.
pub fn verify_representation(rep: &Representation) -> Result<RepReport, ReprError> {
    let alg = &rep.algebra;
    let n = alg.size();
    let mut injectivity_failure = None;
    'outer: for a in 0..n {
        for b in (a + 1)..n {
            if rep.images[a] == rep.images[b] {
                injectivity_failure = Some((a, b));
                break 'outer;
            }
        }
    }
    let zero_to_empty = alg.zero().map(|z| rep.images[z].is_empty());
    let mut symbols = Vec::new();
    for sym in alg.signature().iter() {
        let mut failure: Option<SymbolFailure> = None;
        match sym.arity() {
            1 => {
                'un: for x in 0..n {
                    let mapped = &rep.images[alg.op1(sym, x)];
                    let direct = apply_concrete_sym(sym, &[&rep.images[x]])?;
                    if *mapped != direct {
                        failure = Some(SymbolFailure {
                            args: alloc::vec![x],
                            expected: describe_graph(mapped),
                            got: describe_graph(&direct),
                        });
                        break 'un;
                    }
                }
            }
            2 => {
                'bin: for x in 0..n {
                    for y in 0..n {
                        let mapped = &rep.images[alg.op2(sym, x, y)];
                        let direct = apply_concrete_sym(sym, &[&rep.images[x], &rep.images[y]])?;
                        if *mapped != direct {
                            failure = Some(SymbolFailure {
                                args: alloc::vec![x, y],
                                expected: describe_graph(mapped),
                                got: describe_graph(&direct),
                            });
                            break 'bin;
                        }
                    }
                }
            }
            _ => {
                return Err(ReprError::Contradiction(format!(
                    "unexpected symbol `{sym}` in a represented signature"
                )))
            }
        }
        symbols.push((sym, failure));
    }
    Ok(RepReport {
        injectivity_failure,
        zero_to_empty,
        symbols,
    })
}

/// The whole route: check axioms, lift, choose the family, build, verify.
pub fn represent(
    alg: &FinAlgebra,
    sig: &Signature,
) -> Result<(Prepared, Representation, RepReport), ReprError> {
    let prepared = choose_family(alg, sig)?;
    let rep = build_representation(&prepared.algebra, &prepared.family)?;
    let report = verify_representation(&rep)?;
    Ok((prepared, rep, report))
}

/// Renders the representation: a manifest of filters and base classes, then
/// the images in the function file format. Deterministic, byte for byte.
pub fn render_representation(rep: &Representation) -> String {
    let alg = &rep.algebra;
    let mut s = String::from("representation\n");
    s.push_str(&format!("family: {}\n", rep.family.kind));
    for (fi, filter) in rep.family.filters.iter().enumerate() {
        s.push_str(&format!("filter {fi}: {}\n", filter.describe(alg)));
    }
    for (fi, classes) in rep.classes.iter().enumerate() {
        s.push_str(&format!("patch {fi}:"));
        for members in classes {
            s.push_str(&format!(" [{}]", class_label(alg, members)));
        }
        s.push('\n');
    }
    let funs: Vec<(String, PFun)> = (0..alg.size())
        .map(|a| (alg.label(a).to_string(), rep.images[a].clone()))
        .collect();
    s.push_str(&crate::pfun::render_pfun_file(&rep.base, &rep.base, &funs));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::natural_le;
    use crate::catalog::load_example;
    use crate::pfun::{generate_subalgebra, DEFAULT_CLOSURE_CAP};
    use alloc::vec;

    #[test]
    fn routes_match_the_supported_rows() {
        let ok = |syms: &[Sym], kind: FamilyKind| {
            let (_, k) = route_for(&Signature::new(syms.iter().copied())).expect("supported");
            assert_eq!(k, kind);
        };
        ok(&[Sym::Res], FamilyKind::All);
        ok(&[Sym::Cmp, Sym::Res], FamilyKind::All);
        ok(&[Sym::Cmp, Sym::Res, Sym::Cap], FamilyKind::All);
        ok(&[Sym::Mns], FamilyKind::PrimeMinus);
        ok(&[Sym::Cmp, Sym::Mns, Sym::Cap], FamilyKind::PrimeMinus);
        ok(&[Sym::Mns, Sym::Ovr], FamilyKind::PrimeMinus);
        ok(&[Sym::Mns, Sym::Upd], FamilyKind::PrimeMinus);
        ok(&[Sym::Res, Sym::Cap, Sym::Ovr], FamilyKind::PrimeOverride);
        ok(&[Sym::Res, Sym::Cap, Sym::Upd], FamilyKind::WeaklyPrime);
        ok(&[Sym::Cmp, Sym::Dom], FamilyKind::All);
        ok(&[Sym::Cmp, Sym::Dom, Sym::Mns], FamilyKind::PrimeMinus);
        assert!(route_for(&Signature::new([Sym::Res, Sym::Ovr])).is_none());
        assert!(route_for(&Signature::new([Sym::Res, Sym::Upd])).is_none());
        assert!(route_for(&Signature::new([Sym::Res, Sym::Dif])).is_none());
        assert!(route_for(&Signature::new([Sym::Ovr, Sym::Upd, Sym::Cap])).is_none());
    }

    #[test]
    fn the_minus_example_is_faithfully_represented() {
        let ex = load_example("properqe").unwrap();
        let sig = Signature::new([Sym::Mns]);
        let (prepared, _rep, report) = represent(&ex.algebra, &sig).unwrap();
        assert_eq!(prepared.family.kind, FamilyKind::PrimeMinus);
        // the lift reuses the existing zero: no new element
        assert_eq!(prepared.algebra.size(), 7);
        assert!(report.all_pass(), "{report:?}");
        let checked: Vec<Sym> = report.symbols.iter().map(|(s, _)| *s).collect();
        assert_eq!(checked, vec![Sym::Cmp, Sym::Res, Sym::Mns]);
        assert_eq!(report.zero_to_empty, Some(true));
    }

    #[test]
    fn the_update_example_is_faithfully_represented() {
        let ex = load_example("updatecapqv").unwrap();
        // restriction/intersection/update reduct, then lift
        let sig = Signature::new([Sym::Res, Sym::Cap, Sym::Upd]);
        let (prepared, rep, report) = represent(&ex.algebra, &sig).unwrap();
        assert_eq!(prepared.family.kind, FamilyKind::WeaklyPrime);
        assert_eq!(prepared.algebra.size(), 7, "a fresh zero is adjoined");
        assert!(report.all_pass(), "{report:?}");
        // non-membership: s not below t keeps the images incomparable
        let host = &prepared.algebra;
        for s in 0..host.size() {
            for t in 0..host.size() {
                if s != t && !natural_le(host, s, t).unwrap() {
                    assert!(
                        !rep.images[s].subset_of(&rep.images[t]),
                        "image of {} within image of {}",
                        host.label(s),
                        host.label(t)
                    );
                }
            }
        }
    }

    #[test]
    fn the_skew_example_is_refused_upstream() {
        let ex = load_example("droi").unwrap();
        let sig = Signature::new([Sym::Res, Sym::Cap, Sym::Ovr]);
        match represent(&ex.algebra, &sig) {
            Err(ReprError::AxiomsFail { .. }) => {}
            other => panic!("expected an axioms refusal, got {other:?}"),
        }
    }

    #[test]
    fn a_one_element_stack_maps_its_zero_to_the_empty_function() {
        let alg = FinAlgebra::new(
            vec!["0".to_string()],
            alloc::collections::BTreeMap::from([
                (Sym::Res, vec![0usize]),
                (Sym::Cmp, vec![0usize]),
            ]),
            Some(0),
            None,
        )
        .unwrap();
        let family = separating_family(&alg, FamilyKind::All).unwrap();
        assert!(family.filters.is_empty(), "no proper filters to pick");
        let rep = build_representation(&alg, &family).unwrap();
        assert!(rep.images[0].is_empty());
        let report = verify_representation(&rep).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.zero_to_empty, Some(true));
    }

    #[test]
    fn an_unmarked_one_element_band_still_represents_injectively() {
        let alg = FinAlgebra::new(
            vec!["0".to_string()],
            alloc::collections::BTreeMap::from([(Sym::Res, vec![0usize])]),
            None,
            None,
        )
        .unwrap();
        let sig = Signature::new([Sym::Res]);
        let (_, _, report) = represent(&alg, &sig).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn derived_stacks_of_domain_closures_represent_domain() {
        // closure of a non-idempotent map under composition and domain
        let x = FinSet::indexed("X", "p", 2);
        let i = PFun::from_pairs(&x, &x, &[(0, 1), (1, 0)]).unwrap();
        let gens = vec![("i".to_string(), i)];
        let sig = Signature::new([Sym::Cmp, Sym::Dom]);
        let c = generate_subalgebra(&gens, &sig, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.algebra.size(), 2);
        let (_, rep, report) = represent(&c.algebra, &sig).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(rep.images.iter().all(|f| !f.is_empty()));
    }

    #[test]
    fn representation_render_is_stable() {
        let ex = load_example("properqe").unwrap();
        let sig = Signature::new([Sym::Mns]);
        let (_, rep, _) = represent(&ex.algebra, &sig).unwrap();
        let a = render_representation(&rep);
        let b = render_representation(&rep);
        assert_eq!(a, b);
        assert!(a.starts_with("representation\nfamily: prime-minus\n"));
    }
}
