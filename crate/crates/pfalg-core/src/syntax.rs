//! Terms, equations and quasiequations over the fixed operation vocabulary,
//! plus the exhaustive law checker used everywhere else in the crate.
//!
//! The vocabulary is closed: `cmp`/2 (composition), `res`/2 (domain
//! restriction), `mns`/2 (minus), `ovr`/2 (override), `upd`/2 (update),
//! `cap`/2 (intersection), `dif`/2 (difference), `dom`/1 (domain), `K`/4
//! (generalised comparison) and the constants `zero` and `one`. Variables
//! match `[a-z][a-z0-9]*` and are universally quantified.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::FinAlgebra;

/// One symbol of the fixed vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Cmp,
    Res,
    Mns,
    Ovr,
    Upd,
    Cap,
    Dif,
    Dom,
    K,
    Zero,
    One,
}

impl Sym {
    /// Every symbol, in canonical order.
    pub const ALL: [Sym; 11] = [
        Sym::Cmp,
        Sym::Res,
        Sym::Mns,
        Sym::Ovr,
        Sym::Upd,
        Sym::Cap,
        Sym::Dif,
        Sym::Dom,
        Sym::K,
        Sym::Zero,
        Sym::One,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sym::Cmp => "cmp",
            Sym::Res => "res",
            Sym::Mns => "mns",
            Sym::Ovr => "ovr",
            Sym::Upd => "upd",
            Sym::Cap => "cap",
            Sym::Dif => "dif",
            Sym::Dom => "dom",
            Sym::K => "K",
            Sym::Zero => "zero",
            Sym::One => "one",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Sym::Dom => 1,
            Sym::K => 4,
            Sym::Zero | Sym::One => 0,
            _ => 2,
        }
    }

    pub fn from_name(name: &str) -> Option<Sym> {
        Sym::ALL.iter().copied().find(|s| s.name() == name)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of the vocabulary, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    syms: BTreeSet<Sym>,
}

impl Signature {
    pub fn new<I: IntoIterator<Item = Sym>>(syms: I) -> Signature {
        Signature {
            syms: syms.into_iter().collect(),
        }
    }

    /// Parses a comma-separated list of symbol names, e.g. `"cmp,res,cap"`.
    pub fn from_names(text: &str) -> Result<Signature, String> {
        let mut syms = BTreeSet::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match Sym::from_name(part) {
                Some(s) => {
                    syms.insert(s);
                }
                None => return Err(format!("unknown symbol `{part}`")),
            }
        }
        if syms.is_empty() {
            return Err("empty signature".to_owned());
        }
        Ok(Signature { syms })
    }

    pub fn contains(&self, sym: Sym) -> bool {
        self.syms.contains(&sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = Sym> + '_ {
        self.syms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn with(&self, sym: Sym) -> Signature {
        let mut syms = self.syms.clone();
        syms.insert(sym);
        Signature { syms }
    }

    pub fn without(&self, sym: Sym) -> Signature {
        let mut syms = self.syms.clone();
        syms.remove(&sym);
        Signature { syms }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(s.name())?;
        }
        Ok(())
    }
}

impl FromIterator<Sym> for Signature {
    fn from_iter<I: IntoIterator<Item = Sym>>(iter: I) -> Signature {
        Signature::new(iter)
    }
}

/// A term: a variable or a symbol applied to the right number of sub-terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn app(sym: Sym, args: Vec<Term>) -> Term {
        debug_assert_eq!(sym.arity(), args.len());
        Term::App(sym, args)
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|w| w == v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    fn collect_syms(&self, out: &mut BTreeSet<Sym>) {
        if let Term::App(s, args) = self {
            out.insert(*s);
            for a in args {
                a.collect_syms(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(s, args) if args.is_empty() => f.write_str(s.name()),
            Term::App(s, args) => {
                write!(f, "{}(", s.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An equation or Horn quasiequation. Empty hypotheses mean a plain equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    pub name: String,
    pub hypotheses: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl Law {
    pub fn equation(name: &str, lhs: Term, rhs: Term) -> Law {
        Law {
            name: name.to_owned(),
            hypotheses: Vec::new(),
            conclusion: (lhs, rhs),
        }
    }

    pub fn is_equation(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Variables in order of first appearance (hypotheses first, then the
    /// conclusion). This order fixes how assignments are enumerated, and so
    /// which violation is reported first.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        for (l, r) in &self.hypotheses {
            l.collect_vars(&mut vars);
            r.collect_vars(&mut vars);
        }
        self.conclusion.0.collect_vars(&mut vars);
        self.conclusion.1.collect_vars(&mut vars);
        vars
    }

    /// Symbols mentioned anywhere in the law.
    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for (l, r) in &self.hypotheses {
            l.collect_syms(&mut out);
            r.collect_syms(&mut out);
        }
        self.conclusion.0.collect_syms(&mut out);
        self.conclusion.1.collect_syms(&mut out);
        out
    }

    /// Renders the law in the grammar accepted by [`parse_law`]; the result
    /// round-trips.
    pub fn text(&self) -> String {
        let mut s = String::new();
        for (i, (l, r)) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                s.push_str(" & ");
            }
            s.push_str(&format!("{l} = {r}"));
        }
        if !self.hypotheses.is_empty() {
            s.push_str(" => ");
        }
        s.push_str(&format!("{} = {}", self.conclusion.0, self.conclusion.1));
        s
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// A syntax error, with 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Amp,
    Implies,
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Lexer<'a> {
        Lexer {
            text,
            pos: 0,
            line,
            col: 1,
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message,
        }
    }

    fn bump(&mut self, n: usize) {
        self.pos += n;
        self.col += n;
    }

    fn next_tok(&mut self) -> Result<(Tok, usize), ParseError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] == b' ' || bytes[self.pos] == b'\t') {
            self.bump(1);
        }
        let start_col = self.col;
        if self.pos >= bytes.len() {
            return Ok((Tok::End, start_col));
        }
        let c = bytes[self.pos];
        let tok = match c {
            b'(' => {
                self.bump(1);
                Tok::LParen
            }
            b')' => {
                self.bump(1);
                Tok::RParen
            }
            b',' => {
                self.bump(1);
                Tok::Comma
            }
            b'&' => {
                self.bump(1);
                Tok::Amp
            }
            b'=' => {
                if self.pos + 1 < bytes.len() && bytes[self.pos + 1] == b'>' {
                    self.bump(2);
                    Tok::Implies
                } else {
                    self.bump(1);
                    Tok::Eq
                }
            }
            b'K' => {
                self.bump(1);
                Tok::Ident("K".to_owned())
            }
            b'a'..=b'z' => {
                let mut end = self.pos + 1;
                while end < bytes.len()
                    && (bytes[end].is_ascii_lowercase() || bytes[end].is_ascii_digit())
                {
                    end += 1;
                }
                let ident = self.text[self.pos..end].to_owned();
                self.bump(end - self.pos);
                Tok::Ident(ident)
            }
            _ => {
                return Err(self.error(format!(
                    "unexpected character `{}`",
                    self.text[self.pos..].chars().next().unwrap()
                )))
            }
        };
        Ok((tok, start_col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, line: usize) -> Result<Parser<'a>, ParseError> {
        let mut lexer = Lexer::new(text, line);
        let (tok, tok_col) = lexer.next_tok()?;
        Ok(Parser {
            lexer,
            tok,
            tok_col,
        })
    }

    fn error_at(&self, message: String) -> ParseError {
        ParseError {
            line: self.lexer.line,
            col: self.tok_col,
            message,
        }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, col) = self.lexer.next_tok()?;
        self.tok = tok;
        self.tok_col = col;
        Ok(())
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == want {
            self.advance()
        } else {
            Err(self.error_at(format!("expected {what}")))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let ident = match &self.tok {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.error_at("expected a term".to_owned())),
        };
        self.advance()?;
        if self.tok == Tok::LParen {
            let sym = Sym::from_name(&ident)
                .ok_or_else(|| self.error_at(format!("unknown symbol `{ident}`")))?;
            self.advance()?;
            let mut args = Vec::new();
            loop {
                args.push(self.term()?);
                match self.tok {
                    Tok::Comma => self.advance()?,
                    Tok::RParen => {
                        self.advance()?;
                        break;
                    }
                    _ => return Err(self.error_at("expected `,` or `)`".to_owned())),
                }
            }
            if args.len() != sym.arity() {
                return Err(self.error_at(format!(
                    "`{ident}` takes {} argument(s), got {}",
                    sym.arity(),
                    args.len()
                )));
            }
            Ok(Term::App(sym, args))
        } else {
            match Sym::from_name(&ident) {
                Some(sym) if sym.arity() == 0 => Ok(Term::App(sym, Vec::new())),
                Some(_) => Err(self.error_at(format!(
                    "`{ident}` is an operation symbol and needs arguments"
                ))),
                None => Ok(Term::Var(ident)),
            }
        }
    }

    fn equation(&mut self) -> Result<(Term, Term), ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.term()?;
        Ok((lhs, rhs))
    }

    fn law(&mut self, name: &str) -> Result<Law, ParseError> {
        let mut eqs = alloc::vec![self.equation()?];
        loop {
            match self.tok {
                Tok::Amp => {
                    self.advance()?;
                    eqs.push(self.equation()?);
                }
                Tok::Implies => {
                    self.advance()?;
                    let concl = self.equation()?;
                    if self.tok != Tok::End {
                        return Err(self.error_at("trailing input after law".to_owned()));
                    }
                    return Ok(Law {
                        name: name.to_owned(),
                        hypotheses: eqs,
                        conclusion: concl,
                    });
                }
                Tok::End => break,
                _ => return Err(self.error_at("expected `&`, `=>` or end of law".to_owned())),
            }
        }
        if eqs.len() > 1 {
            return Err(self.error_at("hypotheses without `=>` conclusion".to_owned()));
        }
        let concl = eqs.pop().unwrap();
        Ok(Law {
            name: name.to_owned(),
            hypotheses: Vec::new(),
            conclusion: concl,
        })
    }
}

/// Parses one law. The grammar is
/// `law := [eq ("&" eq)* "=>"] eq`, `eq := term "=" term`,
/// `term := var | sym "(" term ("," term)* ")" | "zero" | "one"`.
pub fn parse_law(name: &str, text: &str) -> Result<Law, ParseError> {
    parse_law_at(name, text, 1)
}

fn parse_law_at(name: &str, text: &str, line: usize) -> Result<Law, ParseError> {
    let mut p = Parser::new(text, line)?;
    p.law(name)
}

/// Parses a law file: UTF-8 text, one law per line, `#` starts a comment.
/// Laws are named `<stem>.1`, `<stem>.2`, ... in file order.
pub fn parse_law_file(stem: &str, text: &str) -> Result<Vec<Law>, ParseError> {
    let mut laws = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let name = format!("{stem}.{}", laws.len() + 1);
        laws.push(parse_law_at(&name, line, i + 1)?);
    }
    Ok(laws)
}

/// Why a term could not be evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    UnassignedVariable(String),
    MissingSymbol(Sym),
    /// `zero`/`one` used but the algebra has no such distinguished element.
    MissingConstant(Sym),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnassignedVariable(v) => write!(f, "variable `{v}` is not assigned"),
            EvalError::MissingSymbol(s) => {
                write!(f, "no table for symbol `{s}` and no derived form applies")
            }
            EvalError::MissingConstant(s) => {
                write!(f, "`{s}` is not distinguished in this algebra")
            }
        }
    }
}

/// Something terms can be evaluated against: a total algebra, or the partial
/// tables of a running model search.
pub trait TableSource {
    fn size(&self) -> usize;
    fn has_symbol(&self, sym: Sym) -> bool;
    /// `Ok(None)` means the cell is not yet assigned (partial tables only).
    fn cell(&self, sym: Sym, args: &[usize]) -> Result<Option<usize>, EvalError>;
}

/// A term compiled against a fixed variable list, for cheap re-evaluation.
#[derive(Clone, Debug)]
pub enum CompiledTerm {
    Var(usize),
    App(Sym, Vec<CompiledTerm>),
}

pub fn compile_term(term: &Term, vars: &[String]) -> Result<CompiledTerm, EvalError> {
    match term {
        Term::Var(v) => vars
            .iter()
            .position(|w| w == v)
            .map(CompiledTerm::Var)
            .ok_or_else(|| EvalError::UnassignedVariable(v.clone())),
        Term::App(s, args) => {
            let cargs = args
                .iter()
                .map(|a| compile_term(a, vars))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CompiledTerm::App(*s, cargs))
        }
    }
}

/// Evaluates a compiled term. `res` is derived when absent: from minus as
/// `res(x,y) = mns(y,mns(y,x))`, or from domain as `res(x,y) = cmp(dom(x),y)`.
/// No other symbol is ever derived implicitly.
pub fn eval_compiled<S: TableSource + ?Sized>(
    src: &S,
    term: &CompiledTerm,
    assignment: &[usize],
) -> Result<Option<usize>, EvalError> {
    match term {
        CompiledTerm::Var(i) => Ok(Some(assignment[*i])),
        CompiledTerm::App(sym, args) => {
            let mut vals = [0usize; 4];
            for (i, a) in args.iter().enumerate() {
                match eval_compiled(src, a, assignment)? {
                    Some(v) => vals[i] = v,
                    None => return Ok(None),
                }
            }
            apply_sym(src, *sym, &vals[..args.len()])
        }
    }
}

/// Applies one symbol to already-evaluated arguments, deriving `res` if
/// needed (see [`eval_compiled`]).
pub fn apply_sym<S: TableSource + ?Sized>(
    src: &S,
    sym: Sym,
    vals: &[usize],
) -> Result<Option<usize>, EvalError> {
    if src.has_symbol(sym) {
        return src.cell(sym, vals);
    }
    if sym == Sym::Res {
        if src.has_symbol(Sym::Mns) {
            // res(x,y) = mns(y, mns(y,x))
            let inner = match src.cell(Sym::Mns, &[vals[1], vals[0]])? {
                Some(v) => v,
                None => return Ok(None),
            };
            return src.cell(Sym::Mns, &[vals[1], inner]);
        }
        if src.has_symbol(Sym::Dom) && src.has_symbol(Sym::Cmp) {
            // res(x,y) = cmp(dom(x), y)
            let d = match src.cell(Sym::Dom, &[vals[0]])? {
                Some(v) => v,
                None => return Ok(None),
            };
            return src.cell(Sym::Cmp, &[d, vals[1]]);
        }
    }
    Err(EvalError::MissingSymbol(sym))
}

/// Evaluates a term under a variable assignment given by name.
pub fn eval_term(
    alg: &FinAlgebra,
    term: &Term,
    assignment: &[(String, usize)],
) -> Result<usize, EvalError> {
    let vars: Vec<String> = assignment.iter().map(|(v, _)| v.clone()).collect();
    let vals: Vec<usize> = assignment.iter().map(|(_, x)| *x).collect();
    let ct = compile_term(term, &vars)?;
    Ok(eval_compiled(alg, &ct, &vals)?.expect("total algebra"))
}

/// A counterexample to a law: an assignment under which every hypothesis
/// holds but the two sides of the conclusion evaluate to different elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub variables: Vec<String>,
    pub assignment: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

impl Violation {
    /// Renders the witness with element labels from `alg`.
    pub fn describe(&self, alg: &FinAlgebra) -> String {
        let mut s = String::new();
        for (i, v) in self.variables.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&format!("{v}={}", alg.label(self.assignment[i])));
        }
        s.push_str(&format!(
            ": lhs={} rhs={}",
            alg.label(self.lhs),
            alg.label(self.rhs)
        ));
        s
    }
}

/// The verdict of [`law_holds`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawOutcome {
    Holds,
    Violated(Violation),
}

impl LawOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LawOutcome::Holds)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            LawOutcome::Holds => None,
            LawOutcome::Violated(v) => Some(v),
        }
    }
}

/// Checks a law over every assignment of elements to its variables, in
/// lexicographic order by element index (variables in order of first
/// appearance). Returns the first violation, if any.
pub fn law_holds(alg: &FinAlgebra, law: &Law) -> Result<LawOutcome, EvalError> {
    let vars = law.variables();
    let chyps: Vec<(CompiledTerm, CompiledTerm)> = law
        .hypotheses
        .iter()
        .map(|(l, r)| Ok((compile_term(l, &vars)?, compile_term(r, &vars)?)))
        .collect::<Result<_, EvalError>>()?;
    let concl = (
        compile_term(&law.conclusion.0, &vars)?,
        compile_term(&law.conclusion.1, &vars)?,
    );
    let n = alg.size();
    let mut assignment = alloc::vec![0usize; vars.len()];
    loop {
        let mut hyps_hold = true;
        for (l, r) in &chyps {
            let lv = eval_compiled(alg, l, &assignment)?.expect("total");
            let rv = eval_compiled(alg, r, &assignment)?.expect("total");
            if lv != rv {
                hyps_hold = false;
                break;
            }
        }
        if hyps_hold {
            let lv = eval_compiled(alg, &concl.0, &assignment)?.expect("total");
            let rv = eval_compiled(alg, &concl.1, &assignment)?.expect("total");
            if lv != rv {
                return Ok(LawOutcome::Violated(Violation {
                    law: law.name.clone(),
                    variables: vars,
                    assignment,
                    lhs: lv,
                    rhs: rv,
                }));
            }
        }
        // odometer over n^v, last variable fastest
        let mut i = assignment.len();
        loop {
            if i == 0 {
                return Ok(LawOutcome::Holds);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < n {
                break;
            }
            assignment[i] = 0;
        }
        if vars.is_empty() {
            return Ok(LawOutcome::Holds);
        }
    }
}

/// Per-law results of checking a whole list.
#[derive(Clone, Debug)]
pub struct LawsetReport {
    pub results: Vec<(Law, LawOutcome)>,
}

impl LawsetReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|(_, o)| o.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Law, &Violation)> {
        self.results
            .iter()
            .filter_map(|(l, o)| o.violation().map(|v| (l, v)))
    }
}

/// Applies [`law_holds`] to each law in turn.
pub fn check_lawset(alg: &FinAlgebra, laws: &[Law]) -> Result<LawsetReport, EvalError> {
    let mut results = Vec::with_capacity(laws.len());
    for law in laws {
        results.push((law.clone(), law_holds(alg, law)?));
    }
    Ok(LawsetReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parses_the_right_normal_band_law() {
        let law = parse_law("rnb", "res(res(x,y),z) = res(res(y,x),z)").unwrap();
        assert!(law.is_equation());
        assert_eq!(law.variables(), vec!["x", "y", "z"]);
        let lhs = Term::app(
            Sym::Res,
            vec![
                Term::app(Sym::Res, vec![Term::var("x"), Term::var("y")]),
                Term::var("z"),
            ],
        );
        assert_eq!(law.conclusion.0, lhs);
    }

    #[test]
    fn parses_the_minus_quasiequation() {
        let law = parse_law("q", "mns(s,x)=mns(t,x) & res(x,s)=res(x,t) => s=t").unwrap();
        assert_eq!(law.hypotheses.len(), 2);
        assert_eq!(law.variables(), vec!["s", "x", "t"]);
        assert_eq!(law.conclusion, (Term::var("s"), Term::var("t")));
    }

    #[test]
    fn round_trips_through_text() {
        for text in [
            "res(x,y) = z",
            "mns(s,x) = mns(t,x) & res(x,s) = res(x,t) => s = t",
            "K(f,g,h,k) = ovr(res(cap(f,g),h),k)",
            "mns(x,x) = zero",
            "cmp(one,x) = x",
        ] {
            let law = parse_law("t", text).unwrap();
            let reparsed = parse_law("t", &law.text()).unwrap();
            assert_eq!(law, reparsed, "{text}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_law("t", "res(x) = x").is_err(), "arity");
        assert!(parse_law("t", "foo(x,y) = x").is_err(), "unknown symbol");
        assert!(parse_law("t", "res = x").is_err(), "bare symbol");
        assert!(parse_law("t", "x = ").is_err(), "truncated");
        assert!(parse_law("t", "x = y & y = z").is_err(), "no conclusion");
        let err = parse_law("t", "res(x,Y) = x").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 0);
    }

    #[test]
    fn eval_term_resolves_assignments_by_name() {
        let ex = crate::catalog::load_example("updatecapqv").unwrap();
        let term = parse_law("t", "res(p,q) = p").unwrap().conclusion.0;
        let env = vec![
            ("p".to_string(), ex.algebra.index_of("b").unwrap()),
            ("q".to_string(), ex.algebra.index_of("1").unwrap()),
        ];
        let v = eval_term(&ex.algebra, &term, &env).unwrap();
        assert_eq!(ex.algebra.label(v), "c");
        let bare = Term::var("q");
        assert_eq!(eval_term(&ex.algebra, &bare, &env).unwrap(), env[1].1);
        let unassigned = Term::var("r");
        assert!(matches!(
            eval_term(&ex.algebra, &unassigned, &env),
            Err(EvalError::UnassignedVariable(_))
        ));
    }

    #[test]
    fn reflexive_equations_hold_and_empty_lists_are_empty() {
        let ex = crate::catalog::load_example("droi").unwrap();
        let refl = parse_law("refl", "x = x").unwrap();
        assert!(law_holds(&ex.algebra, &refl).unwrap().holds());
        let report = check_lawset(&ex.algebra, &[]).unwrap();
        assert!(report.results.is_empty());
        assert!(report.all_hold());
    }

    #[test]
    fn law_file_skips_comments_and_numbers_laws() {
        let text = "# a comment\nres(x,x) = x\n\nmns(x,x) = zero # trailing\n";
        let laws = parse_law_file("s", text).unwrap();
        assert_eq!(laws.len(), 2);
        assert_eq!(laws[0].name, "s.1");
        assert_eq!(laws[1].name, "s.2");
    }
}
