//! Finite algebras given by total operation tables, with the derived orders,
//! congruences, quotients, embedding checks and the zero-adjoining lifts that
//! turn composition-free algebras into stacks.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{self, EvalError, Signature, Sym, TableSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    Malformed(String),
    NotACongruence,
    SignatureMismatch,
    Eval(EvalError),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::Malformed(m) => write!(f, "malformed algebra: {m}"),
            AlgebraError::NotACongruence => f.write_str("partition is not a congruence"),
            AlgebraError::SignatureMismatch => f.write_str("signatures differ"),
            AlgebraError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl From<EvalError> for AlgebraError {
    fn from(e: EvalError) -> Self {
        AlgebraError::Eval(e)
    }
}

/// A finite algebra over carrier `{0, .., n-1}`: one total table per symbol,
/// presentation labels, and optional distinguished zero/one elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinAlgebra {
    labels: Vec<String>,
    tables: BTreeMap<Sym, Vec<usize>>,
    zero: Option<usize>,
    one: Option<usize>,
}

fn table_len(arity: usize, n: usize) -> usize {
    let mut len = 1usize;
    for _ in 0..arity {
        len *= n;
    }
    len
}

impl FinAlgebra {
    pub fn new(
        labels: Vec<String>,
        tables: BTreeMap<Sym, Vec<usize>>,
        zero: Option<usize>,
        one: Option<usize>,
    ) -> Result<FinAlgebra, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::Malformed("empty carrier".to_owned()));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(AlgebraError::Malformed("duplicate labels".to_owned()));
        }
        for (sym, table) in &tables {
            if matches!(sym, Sym::Zero | Sym::One) {
                return Err(AlgebraError::Malformed(format!(
                    "`{sym}` is distinguished by index, not by table"
                )));
            }
            let want = table_len(sym.arity(), n);
            if table.len() != want {
                return Err(AlgebraError::Malformed(format!(
                    "table for `{sym}` has {} entries, expected {want}",
                    table.len()
                )));
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::Malformed(format!(
                    "table for `{sym}` contains out-of-range value {bad}"
                )));
            }
        }
        for idx in [zero, one].into_iter().flatten() {
            if idx >= n {
                return Err(AlgebraError::Malformed(format!(
                    "distinguished element {idx} out of range"
                )));
            }
        }
        Ok(FinAlgebra {
            labels,
            tables,
            zero,
            one,
        })
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

    pub fn relabel(&mut self, i: usize, label: &str) -> Result<(), AlgebraError> {
        if self
            .labels
            .iter()
            .enumerate()
            .any(|(j, l)| j != i && l == label)
        {
            return Err(AlgebraError::Malformed(format!(
                "duplicate label `{label}`"
            )));
        }
        self.labels[i] = label.to_owned();
        Ok(())
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn one(&self) -> Option<usize> {
        self.one
    }

    pub fn set_zero(&mut self, idx: Option<usize>) {
        self.zero = idx;
    }

    /// Symbols with a table (zero/one are tracked separately).
    pub fn signature(&self) -> Signature {
        self.tables.keys().copied().collect()
    }

    pub fn table(&self, sym: Sym) -> Option<&[usize]> {
        self.tables.get(&sym).map(|t| t.as_slice())
    }

    pub fn insert_table(&mut self, sym: Sym, table: Vec<usize>) -> Result<(), AlgebraError> {
        let want = table_len(sym.arity(), self.size());
        if table.len() != want || table.iter().any(|&v| v >= self.size()) {
            return Err(AlgebraError::Malformed(format!("bad table for `{sym}`")));
        }
        self.tables.insert(sym, table);
        Ok(())
    }

    pub fn remove_table(&mut self, sym: Sym) {
        self.tables.remove(&sym);
    }

    pub fn op1(&self, sym: Sym, x: usize) -> usize {
        self.tables[&sym][x]
    }

    pub fn op2(&self, sym: Sym, x: usize, y: usize) -> usize {
        self.tables[&sym][x * self.size() + y]
    }

    /// Applies a symbol, deriving `res` from minus or domain when the table
    /// is absent (the only derived forms; see [`syntax::apply_sym`]).
    pub fn apply(&self, sym: Sym, args: &[usize]) -> Result<usize, EvalError> {
        Ok(syntax::apply_sym(self, sym, args)?.expect("total algebra"))
    }

    /// Domain restriction `x∘y`, via the table or a derived form.
    pub fn res(&self, x: usize, y: usize) -> Result<usize, EvalError> {
        self.apply(Sym::Res, &[x, y])
    }

    /// Checks the distinguished zero really is absorbing for `∘`.
    pub fn check_zero_absorbs(&self) -> Result<(), AlgebraError> {
        if let Some(z) = self.zero {
            for x in 0..self.size() {
                if self.res(x, z)? != z || self.res(z, x)? != z {
                    return Err(AlgebraError::Malformed(format!(
                        "distinguished zero `{}` is not absorbing for res",
                        self.label(z)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Renders the algebra file format (parsed back by [`FinAlgebra::parse`]).
    pub fn render(&self) -> String {
        let n = self.size();
        let mut s = format!("size {n}\n");
        s.push_str("labels:");
        for l in &self.labels {
            s.push(' ');
            s.push_str(l);
        }
        s.push('\n');
        if let Some(z) = self.zero {
            s.push_str(&format!("zero: {z}\n"));
        }
        if let Some(o) = self.one {
            s.push_str(&format!("one: {o}\n"));
        }
        for (sym, table) in &self.tables {
            s.push_str(&format!("table {sym}:\n"));
            let cols = if sym.arity() == 0 { 1 } else { n };
            for row in table.chunks(cols) {
                let mut first = true;
                for v in row {
                    if !first {
                        s.push(' ');
                    }
                    first = false;
                    s.push_str(&v.to_string());
                }
                s.push('\n');
            }
        }
        s
    }

    /// Parses the algebra file format: a `size n` header, optional
    /// `labels:`/`zero:`/`one:` lines, then `table <sym>:` blocks of rows.
    pub fn parse(text: &str) -> Result<FinAlgebra, AlgebraError> {
        let bad = |m: &str| AlgebraError::Malformed(m.to_owned());
        let mut lines = text
            .lines()
            .map(|l| match l.find('#') {
                Some(p) => &l[..p],
                None => l,
            })
            .filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| bad("empty input"))?;
        let n: usize = first
            .trim()
            .strip_prefix("size")
            .ok_or_else(|| bad("expected `size n` header"))?
            .trim()
            .parse()
            .map_err(|_| bad("bad size"))?;
        let mut labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let mut zero = None;
        let mut one = None;
        let mut tables: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
        let mut current: Option<(Sym, Vec<usize>)> = None;
        for line in lines {
            let t = line.trim();
            let header = t.ends_with(':') || t.contains(": ");
            if let Some(rest) = t.strip_prefix("labels:") {
                labels = rest.split_whitespace().map(str::to_owned).collect();
                if labels.len() != n {
                    return Err(bad("label count differs from size"));
                }
                continue;
            }
            if let Some(rest) = t.strip_prefix("zero:") {
                zero = Some(rest.trim().parse().map_err(|_| bad("bad zero index"))?);
                continue;
            }
            if let Some(rest) = t.strip_prefix("one:") {
                one = Some(rest.trim().parse().map_err(|_| bad("bad one index"))?);
                continue;
            }
            if let Some(rest) = t.strip_prefix("table ") {
                if let Some((sym, table)) = current.take() {
                    tables.insert(sym, table);
                }
                let name = rest.trim_end_matches(':').trim();
                let sym =
                    Sym::from_name(name).ok_or_else(|| bad(&format!("unknown symbol `{name}`")))?;
                current = Some((sym, Vec::new()));
                continue;
            }
            if header {
                return Err(bad(&format!("unrecognised header `{t}`")));
            }
            let row: Result<Vec<usize>, _> = t.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|_| bad("bad table entry"))?;
            match &mut current {
                Some((_, table)) => table.extend(row),
                None => return Err(bad("table rows before any `table` header")),
            }
        }
        if let Some((sym, table)) = current.take() {
            tables.insert(sym, table);
        }
        FinAlgebra::new(labels, tables, zero, one)
    }
}

impl TableSource for FinAlgebra {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn has_symbol(&self, sym: Sym) -> bool {
        match sym {
            Sym::Zero => self.zero.is_some(),
            Sym::One => self.one.is_some(),
            _ => self.tables.contains_key(&sym),
        }
    }

    fn cell(&self, sym: Sym, args: &[usize]) -> Result<Option<usize>, EvalError> {
        match sym {
            Sym::Zero => return self.zero.map(Some).ok_or(EvalError::MissingConstant(sym)),
            Sym::One => return self.one.map(Some).ok_or(EvalError::MissingConstant(sym)),
            _ => {}
        }
        let table = self.tables.get(&sym).ok_or(EvalError::MissingSymbol(sym))?;
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size() + a;
        }
        Ok(Some(table[idx]))
    }
}

/// Natural order: `a ≤ b` iff `a = a∘b`.
pub fn natural_le(alg: &FinAlgebra, a: usize, b: usize) -> Result<bool, EvalError> {
    Ok(alg.res(a, b)? == a)
}

/// First projection quasiorder: `a ≲ b` iff `b∘a = a`.
pub fn proj_quasiorder(alg: &FinAlgebra, a: usize, b: usize) -> Result<bool, EvalError> {
    Ok(alg.res(b, a)? == a)
}

/// The meet table of the natural order, if every pair has a greatest lower
/// bound. This is how intersection is adjoined to an algebra that has meets
/// but no `cap` table.
pub fn natural_meet_table(alg: &FinAlgebra) -> Result<Vec<usize>, AlgebraError> {
    let n = alg.size();
    let mut le = alloc::vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            le[a * n + b] = natural_le(alg, a, b)?;
        }
    }
    let mut table = alloc::vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let lowers: Vec<usize> = (0..n).filter(|&c| le[c * n + a] && le[c * n + b]).collect();
            let mut best: Option<usize> = None;
            for &c in &lowers {
                if lowers.iter().all(|&d| le[d * n + c]) {
                    best = Some(c);
                    break;
                }
            }
            match best {
                Some(c) => table[a * n + b] = c,
                None => {
                    return Err(AlgebraError::Malformed(format!(
                        "`{}` and `{}` have no meet under the natural order",
                        alg.label(a),
                        alg.label(b)
                    )))
                }
            }
        }
    }
    Ok(table)
}

/// A partition of the carrier into blocks, in canonical form: blocks are
/// numbered by their least element, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePartition {
    block_of: Vec<usize>,
}

impl CongruencePartition {
    pub fn identity(n: usize) -> CongruencePartition {
        CongruencePartition {
            block_of: (0..n).collect(),
        }
    }

    /// Builds a partition from a block index per element, renumbering blocks
    /// canonically. Errors if the indexing is not surjective onto its blocks.
    pub fn from_block_indices(block_of: &[usize]) -> Result<CongruencePartition, AlgebraError> {
        if block_of.is_empty() {
            return Err(AlgebraError::Malformed("empty partition".to_owned()));
        }
        let mut canon: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(block_of.len());
        for &b in block_of {
            let next = canon.len();
            out.push(*canon.entry(b).or_insert(next));
        }
        Ok(CongruencePartition { block_of: out })
    }

    /// Builds the partition generated by a set of element pairs (union-find,
    /// then canonical renumbering).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> CongruencePartition {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        CongruencePartition::from_block_indices(&roots).expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = alloc::vec![Vec::new(); self.block_count()];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.block_of.iter().enumerate().all(|(i, &b)| i == b)
    }

    /// Blocks with more than one element.
    pub fn nontrivial_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks().into_iter().filter(|b| b.len() > 1).collect()
    }

    pub fn describe(&self, alg: &FinAlgebra) -> String {
        let mut s = String::new();
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push('{');
            for (j, &x) in block.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(alg.label(x));
            }
            s.push('}');
        }
        s
    }
}

/// True iff every table maps related argument tuples to related results.
pub fn is_congruence(alg: &FinAlgebra, part: &CongruencePartition) -> Result<bool, AlgebraError> {
    if part.len() != alg.size() {
        return Err(AlgebraError::Malformed(
            "partition size differs from carrier".to_owned(),
        ));
    }
    Ok(induced_tables(alg, part).is_some())
}

fn induced_tables(
    alg: &FinAlgebra,
    part: &CongruencePartition,
) -> Option<BTreeMap<Sym, Vec<usize>>> {
    let n = alg.size();
    let m = part.block_count();
    let mut out = BTreeMap::new();
    for sym in alg.signature().iter() {
        match sym.arity() {
            1 => {
                let mut table = alloc::vec![usize::MAX; m];
                for x in 0..n {
                    let b = part.block_of(x);
                    let v = part.block_of(alg.op1(sym, x));
                    if table[b] == usize::MAX {
                        table[b] = v;
                    } else if table[b] != v {
                        return None;
                    }
                }
                out.insert(sym, table);
            }
            2 => {
                let mut table = alloc::vec![usize::MAX; m * m];
                for x in 0..n {
                    for y in 0..n {
                        let b = part.block_of(x) * m + part.block_of(y);
                        let v = part.block_of(alg.op2(sym, x, y));
                        if table[b] == usize::MAX {
                            table[b] = v;
                        } else if table[b] != v {
                            return None;
                        }
                    }
                }
                out.insert(sym, table);
            }
            4 => {
                let mut table = alloc::vec![usize::MAX; m * m * m * m];
                let raw = alg.table(sym).unwrap();
                for (idx, &v) in raw.iter().enumerate() {
                    let (a, rest) = (idx / (n * n * n), idx % (n * n * n));
                    let (b, rest) = (rest / (n * n), rest % (n * n));
                    let (c, d) = (rest / n, rest % n);
                    let bi = ((part.block_of(a) * m + part.block_of(b)) * m + part.block_of(c)) * m
                        + part.block_of(d);
                    let bv = part.block_of(v);
                    if table[bi] == usize::MAX {
                        table[bi] = bv;
                    } else if table[bi] != bv {
                        return None;
                    }
                }
                out.insert(sym, table);
            }
            _ => unreachable!("no 0-ary tables"),
        }
    }
    Some(out)
}

/// The quotient algebra by a congruence. Block labels are the sorted
/// concatenation of member labels (disambiguated if that ever collides).
pub fn quotient(alg: &FinAlgebra, part: &CongruencePartition) -> Result<FinAlgebra, AlgebraError> {
    if part.len() != alg.size() {
        return Err(AlgebraError::Malformed(
            "partition size differs from carrier".to_owned(),
        ));
    }
    let tables = induced_tables(alg, part).ok_or(AlgebraError::NotACongruence)?;
    let mut labels: Vec<String> = part
        .blocks()
        .iter()
        .map(|block| {
            let mut names: Vec<&str> = block.iter().map(|&x| alg.label(x)).collect();
            names.sort_unstable();
            names.concat()
        })
        .collect();
    for i in 0..labels.len() {
        if labels[..i].contains(&labels[i]) {
            labels[i] = format!("{}#{i}", labels[i]);
        }
    }
    FinAlgebra::new(
        labels,
        tables,
        alg.zero().map(|z| part.block_of(z)),
        alg.one().map(|o| part.block_of(o)),
    )
}

/// Least congruence containing the given pairs, by closure iteration.
pub fn generated_congruence(
    alg: &FinAlgebra,
    pairs: &[(usize, usize)],
) -> Result<CongruencePartition, AlgebraError> {
    let n = alg.size();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(AlgebraError::Malformed("pair out of range".to_owned()));
        }
    }
    let mut part = CongruencePartition::from_pairs(n, pairs);
    loop {
        let mut new_pairs: Vec<(usize, usize)> = Vec::new();
        for sym in alg.signature().iter() {
            match sym.arity() {
                1 => {
                    for x in 0..n {
                        for y in (x + 1)..n {
                            if part.same_block(x, y) {
                                let (vx, vy) = (alg.op1(sym, x), alg.op1(sym, y));
                                if !part.same_block(vx, vy) {
                                    new_pairs.push((vx, vy));
                                }
                            }
                        }
                    }
                }
                2 => {
                    for x in 0..n {
                        for y in (x + 1)..n {
                            if !part.same_block(x, y) {
                                continue;
                            }
                            for c in 0..n {
                                let (l1, l2) = (alg.op2(sym, x, c), alg.op2(sym, y, c));
                                if !part.same_block(l1, l2) {
                                    new_pairs.push((l1, l2));
                                }
                                let (r1, r2) = (alg.op2(sym, c, x), alg.op2(sym, c, y));
                                if !part.same_block(r1, r2) {
                                    new_pairs.push((r1, r2));
                                }
                            }
                        }
                    }
                }
                4 => {
                    // one position at a time, the other three fixed
                    for x in 0..n {
                        for y in (x + 1)..n {
                            if !part.same_block(x, y) {
                                continue;
                            }
                            for pos in 0..4 {
                                let mut args = [0usize; 4];
                                let mut idx = [0usize; 3];
                                loop {
                                    let mut k = 0;
                                    for (p, slot) in args.iter_mut().enumerate() {
                                        if p == pos {
                                            continue;
                                        }
                                        *slot = idx[k];
                                        k += 1;
                                    }
                                    args[pos] = x;
                                    let v1 = cell4(alg, sym, &args);
                                    args[pos] = y;
                                    let v2 = cell4(alg, sym, &args);
                                    if !part.same_block(v1, v2) {
                                        new_pairs.push((v1, v2));
                                    }
                                    let mut j = 3;
                                    loop {
                                        if j == 0 {
                                            break;
                                        }
                                        j -= 1;
                                        idx[j] += 1;
                                        if idx[j] < n {
                                            break;
                                        }
                                        idx[j] = 0;
                                    }
                                    if idx == [0, 0, 0] {
                                        break;
                                    }
                                }
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        if new_pairs.is_empty() {
            return Ok(part);
        }
        let mut all: Vec<(usize, usize)> = new_pairs;
        for x in 0..n {
            for y in (x + 1)..n {
                if part.same_block(x, y) {
                    all.push((x, y));
                }
            }
        }
        part = CongruencePartition::from_pairs(n, &all);
    }
}

fn cell4(alg: &FinAlgebra, sym: Sym, args: &[usize; 4]) -> usize {
    let n = alg.size();
    let idx = ((args[0] * n + args[1]) * n + args[2]) * n + args[3];
    alg.table(sym).unwrap()[idx]
}

/// Enumerates every congruence of a small algebra (carrier at most 8): the
/// joins of pair-generated congruences, plus the identity.
pub fn all_congruences(alg: &FinAlgebra) -> Result<Vec<CongruencePartition>, AlgebraError> {
    let n = alg.size();
    if n > 8 {
        return Err(AlgebraError::Malformed(
            "congruence enumeration is capped at 8 elements".to_owned(),
        ));
    }
    let mut found: Vec<CongruencePartition> = alloc::vec![CongruencePartition::identity(n)];
    let mut frontier: Vec<CongruencePartition> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let c = generated_congruence(alg, &[(a, b)])?;
            if !found.contains(&c) {
                found.push(c.clone());
                frontier.push(c);
            }
        }
    }
    while let Some(c) = frontier.pop() {
        for d in found.clone() {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for x in 0..n {
                for y in (x + 1)..n {
                    if c.same_block(x, y) || d.same_block(x, y) {
                        pairs.push((x, y));
                    }
                }
            }
            let join = generated_congruence(alg, &pairs)?;
            if !found.contains(&join) {
                found.push(join.clone());
                frontier.push(join);
            }
        }
    }
    found.sort_by_key(|c| (c.block_count(), c.block_of.clone()));
    Ok(found)
}

/// True iff `map` is an injective, operation-preserving map from `src` into
/// `dst` (signatures must agree on the symbols of `src`).
pub fn is_embedding(
    map: &[usize],
    src: &FinAlgebra,
    dst: &FinAlgebra,
) -> Result<bool, AlgebraError> {
    if map.len() != src.size() {
        return Err(AlgebraError::Malformed("map has wrong length".to_owned()));
    }
    if map.iter().any(|&v| v >= dst.size()) {
        return Err(AlgebraError::Malformed("map out of range".to_owned()));
    }
    for sym in src.signature().iter() {
        if !dst.signature().contains(sym) {
            return Err(AlgebraError::SignatureMismatch);
        }
    }
    let mut seen = alloc::vec![false; dst.size()];
    for &v in map {
        if seen[v] {
            return Ok(false);
        }
        seen[v] = true;
    }
    let n = src.size();
    for sym in src.signature().iter() {
        match sym.arity() {
            1 => {
                for x in 0..n {
                    if map[src.op1(sym, x)] != dst.op1(sym, map[x]) {
                        return Ok(false);
                    }
                }
            }
            2 => {
                for x in 0..n {
                    for y in 0..n {
                        if map[src.op2(sym, x, y)] != dst.op2(sym, map[x], map[y]) {
                            return Ok(false);
                        }
                    }
                }
            }
            4 => {
                for idx in 0..table_len(4, n) {
                    let (a, rest) = (idx / (n * n * n), idx % (n * n * n));
                    let (b, rest) = (rest / (n * n), rest % (n * n));
                    let (c, d) = (rest / n, rest % n);
                    let v = src.table(sym).unwrap()[idx];
                    if map[v] != cell4(dst, sym, &[map[a], map[b], map[c], map[d]]) {
                        return Ok(false);
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(true)
}

/// Which composition-free axiom family an algebra is being lifted from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftCase {
    Rnb,
    RnbCap,
    Minus,
    MinusOver,
    MinusUpdate,
    RnbCapOver,
    RnbCapUpd,
}

impl LiftCase {
    /// Picks the case matching a composition-free signature, if any.
    pub fn for_signature(sig: &Signature) -> Option<LiftCase> {
        let has = |s| sig.contains(s);
        if has(Sym::Cmp) || has(Sym::Dom) || has(Sym::Dif) || has(Sym::K) {
            return None;
        }
        match (has(Sym::Mns), has(Sym::Ovr), has(Sym::Upd), has(Sym::Cap)) {
            (true, false, false, _) => Some(LiftCase::Minus),
            (true, true, false, _) => Some(LiftCase::MinusOver),
            (true, false, true, _) => Some(LiftCase::MinusUpdate),
            (false, false, false, false) => Some(LiftCase::Rnb),
            (false, false, false, true) => Some(LiftCase::RnbCap),
            (false, true, false, true) => Some(LiftCase::RnbCapOver),
            (false, false, true, true) => Some(LiftCase::RnbCapUpd),
            _ => None,
        }
    }

    fn is_minus(self) -> bool {
        matches!(
            self,
            LiftCase::Minus | LiftCase::MinusOver | LiftCase::MinusUpdate
        )
    }
}

/// Makes a composition-free algebra into a stack: all products are zero.
///
/// For minus signatures the zero `x - x` already exists and no element is
/// added; otherwise a fresh zero is adjoined and the existing operations are
/// extended by `s∘0 = 0∘s = 0`, `s∩0 = 0∩s = 0`, `s⊔0 = 0⊔s = s`, `s⋄0 = s`,
/// `0⋄s = 0`. A `res` table is materialised if the signature lacks one, and
/// `cmp` (identically zero) is added.
pub fn lift_to_stack(alg: &FinAlgebra, case: LiftCase) -> Result<FinAlgebra, AlgebraError> {
    let sig = alg.signature();
    if sig.contains(Sym::Cmp) {
        return Err(AlgebraError::Malformed(
            "algebra already has composition".to_owned(),
        ));
    }
    let expected = LiftCase::for_signature(&sig);
    if expected != Some(case) {
        return Err(AlgebraError::Malformed(format!(
            "signature {sig} does not match the requested lift case"
        )));
    }
    let n = alg.size();
    if case.is_minus() {
        // locate the existing zero via x - x
        let z = alg.op2(Sym::Mns, 0, 0);
        for x in 0..n {
            if alg.op2(Sym::Mns, x, x) != z {
                return Err(AlgebraError::Malformed(
                    "mns(x,x) is not constant; no zero to reuse".to_owned(),
                ));
            }
        }
        let mut out = alg.clone();
        out.set_zero(Some(z));
        // materialise res from minus, then every product is zero
        let mut res = alloc::vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                res[x * n + y] = alg.res(x, y)?;
            }
        }
        out.insert_table(Sym::Res, res)?;
        out.insert_table(Sym::Cmp, alloc::vec![z; n * n])?;
        out.check_zero_absorbs()?;
        return Ok(out);
    }

    let m = n + 1;
    let z = n;
    let mut zero_label = "0".to_owned();
    while alg.labels().contains(&zero_label) {
        zero_label.push('\'');
    }
    let mut labels = alg.labels().to_vec();
    labels.push(zero_label);
    let mut tables: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
    for sym in sig.iter() {
        let mut table = alloc::vec![z; m * m];
        for x in 0..n {
            for y in 0..n {
                table[x * m + y] = alg.op2(sym, x, y);
            }
        }
        match sym {
            Sym::Res | Sym::Cap => {} // s op 0 = 0 op s = 0 already
            Sym::Ovr => {
                for s in 0..m {
                    table[s * m + z] = s; // s ⊔ 0 = s
                    table[z * m + s] = s; // 0 ⊔ s = s
                }
                table[z * m + z] = z;
            }
            Sym::Upd => {
                for s in 0..m {
                    table[s * m + z] = s; // s ⋄ 0 = s
                    table[z * m + s] = z; // 0 ⋄ s = 0
                }
                table[z * m + z] = z;
            }
            _ => unreachable!("checked by LiftCase::for_signature"),
        }
        tables.insert(sym, table);
    }
    if !sig.contains(Sym::Res) {
        return Err(AlgebraError::Malformed(
            "non-minus lift needs a res table".to_owned(),
        ));
    }
    tables.insert(Sym::Cmp, alloc::vec![z; m * m]);
    let out = FinAlgebra::new(labels, tables, Some(z), alg.one())?;
    out.check_zero_absorbs()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn right_zero_band(n: usize) -> FinAlgebra {
        // x ∘ y = y
        let mut res = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                res[x * n + y] = y;
            }
        }
        let labels = (0..n).map(|i| format!("a{i}")).collect();
        FinAlgebra::new(labels, BTreeMap::from([(Sym::Res, res)]), None, None).unwrap()
    }

    #[test]
    fn orders_on_a_right_zero_band() {
        let alg = right_zero_band(3);
        // a ≤ b iff a = a∘b = b, so ≤ is trivial; ≲ is total
        assert!(natural_le(&alg, 0, 0).unwrap());
        assert!(!natural_le(&alg, 0, 1).unwrap());
        assert!(proj_quasiorder(&alg, 0, 1).unwrap());
        assert!(proj_quasiorder(&alg, 1, 0).unwrap());
    }

    #[test]
    fn identity_partition_is_a_congruence_and_quotient_is_isomorphic() {
        let alg = right_zero_band(3);
        let id = CongruencePartition::identity(3);
        assert!(is_congruence(&alg, &id).unwrap());
        let q = quotient(&alg, &id).unwrap();
        assert_eq!(q.size(), 3);
        assert_eq!(q.table(Sym::Res), alg.table(Sym::Res));
    }

    #[test]
    fn generated_congruence_on_empty_pairs_is_identity() {
        let alg = right_zero_band(4);
        let c = generated_congruence(&alg, &[]).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn quotient_of_right_zero_band_merges_blocks() {
        let alg = right_zero_band(3);
        let c = generated_congruence(&alg, &[(0, 1)]).unwrap();
        assert_eq!(c.block_count(), 2);
        let q = quotient(&alg, &c).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.label(0), "a0a1");
    }

    #[test]
    fn embedding_checks_injectivity_and_preservation() {
        let small = right_zero_band(2);
        let big = right_zero_band(3);
        assert!(is_embedding(&[0, 1], &small, &big).unwrap());
        assert!(is_embedding(&[2, 0], &small, &big).unwrap());
        assert!(!is_embedding(&[1, 1], &small, &big).unwrap());
    }

    #[test]
    fn lift_adjoins_an_absorbing_zero() {
        let alg = right_zero_band(2);
        let lifted = lift_to_stack(&alg, LiftCase::Rnb).unwrap();
        assert_eq!(lifted.size(), 3);
        assert_eq!(lifted.zero(), Some(2));
        assert_eq!(lifted.label(2), "0");
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(lifted.op2(Sym::Cmp, x, y), 2);
            }
        }
        // original band is the subalgebra on {0,1}
        assert_eq!(lifted.op2(Sym::Res, 0, 1), 1);
    }

    #[test]
    fn algebra_text_round_trips() {
        let alg = right_zero_band(3);
        let text = alg.render();
        let back = FinAlgebra::parse(&text).unwrap();
        assert_eq!(alg, back);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn rejects_out_of_range_tables() {
        let res = vec![0usize, 3, 0, 0];
        let r = FinAlgebra::new(
            vec!["a".into(), "b".into()],
            BTreeMap::from([(Sym::Res, res)]),
            None,
            None,
        );
        assert!(r.is_err());
    }
}
