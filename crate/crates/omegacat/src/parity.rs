//! Parity complexes, their cells, and the free ω-categories they generate.
//!
//! Sets of elements are bitsets over element ids. Composition follows the
//! convention `cell_compose(a, b, n) = a ∘_n b`: `b` comes first and
//! `t_n(b) = s_n(a)` is required.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::simplex_ops::{ez_factorize, SimplicialOperator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error("invalid parity complex: {0}")]
    Invalid(String),
    #[error("element {0} is not relevant: its atom is not a cell")]
    NotRelevant(usize),
    #[error("cells are not composable along dimension {0}")]
    NotComposable(usize),
    #[error("cell closure exceeded the budget of {0} cells")]
    BudgetExceeded(usize),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type ElemSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityComplex {
    dims: Vec<usize>,
    minus: Vec<Vec<usize>>,
    plus: Vec<Vec<usize>>,
    labels: Vec<String>,
    /// `upto[n]` holds the elements of dimension at most `n`.
    upto: Vec<ElemSet>,
}

impl ParityComplex {
    pub fn new(dims: Vec<usize>, minus: Vec<Vec<usize>>, plus: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, ParityError> {
        let n = dims.len();
        if minus.len() != n || plus.len() != n || labels.len() != n {
            return Err(ParityError::Invalid("face and label lists must cover every element".into()));
        }
        for x in 0..n {
            let (mn, pl) = (&minus[x], &plus[x]);
            if dims[x] == 0 {
                if !mn.is_empty() || !pl.is_empty() {
                    return Err(ParityError::Invalid(format!("0-element {} has faces", labels[x])));
                }
                continue;
            }
            if mn.is_empty() || pl.is_empty() {
                return Err(ParityError::Invalid(format!("element {} needs both face sets", labels[x])));
            }
            for &f in mn.iter().chain(pl) {
                if f >= n || dims[f] + 1 != dims[x] {
                    return Err(ParityError::Invalid(format!("element {} has a face of the wrong dimension", labels[x])));
                }
            }
            if mn.iter().any(|f| pl.contains(f)) {
                return Err(ParityError::Invalid(format!("face sets of {} intersect", labels[x])));
            }
        }
        let top = dims.iter().copied().max().unwrap_or(0);
        let upto = (0..=top)
            .map(|d| {
                let mut s = FixedBitSet::with_capacity(n);
                for x in (0..n).filter(|&x| dims[x] <= d) {
                    s.insert(x);
                }
                s
            })
            .collect();
        let sort = |v: Vec<Vec<usize>>| {
            v.into_iter()
                .map(|mut f| {
                    f.sort_unstable();
                    f.dedup();
                    f
                })
                .collect()
        };
        Ok(ParityComplex { dims, minus: sort(minus), plus: sort(plus), labels, upto })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn minus(&self, x: usize) -> &[usize] {
        &self.minus[x]
    }

    pub fn plus(&self, x: usize) -> &[usize] {
        &self.plus[x]
    }

    pub fn faces(&self, x: usize, positive: bool) -> &[usize] {
        if positive {
            &self.plus[x]
        } else {
            &self.minus[x]
        }
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&x| self.dims[x] == d)
    }

    pub fn empty_set(&self) -> ElemSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn set_of(&self, xs: &[usize]) -> ElemSet {
        let mut s = self.empty_set();
        for &x in xs {
            s.insert(x);
        }
        s
    }

    pub fn set_by_labels(&self, labels: &[&str]) -> Option<ElemSet> {
        let ids: Option<Vec<usize>> = labels.iter().map(|l| self.find(l)).collect();
        ids.map(|ids| self.set_of(&ids))
    }

    /// `S⁻` or `S⁺`.
    pub fn face_set(&self, s: &ElemSet, positive: bool) -> ElemSet {
        let mut out = self.empty_set();
        for x in s.ones() {
            for &f in self.faces(x, positive) {
                out.insert(f);
            }
        }
        out
    }

    /// `S^∓ = S⁻ ∖ S⁺`.
    pub fn minus_only(&self, s: &ElemSet) -> ElemSet {
        let mut out = self.face_set(s, false);
        out.difference_with(&self.face_set(s, true));
        out
    }

    /// `S^± = S⁺ ∖ S⁻`.
    pub fn plus_only(&self, s: &ElemSet) -> ElemSet {
        let mut out = self.face_set(s, true);
        out.difference_with(&self.face_set(s, false));
        out
    }

    /// `(S^∓, S^±)`.
    pub fn s_minus_plus(&self, s: &ElemSet) -> (ElemSet, ElemSet) {
        (self.minus_only(s), self.plus_only(s))
    }

    /// Elements reachable from `x` by repeatedly taking faces, `x` included.
    pub fn generated_by(&self, x: usize) -> ElemSet {
        let mut out = self.set_of(&[x]);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &f in self.minus[y].iter().chain(&self.plus[y]) {
                if !out.contains(f) {
                    out.insert(f);
                    stack.push(f);
                }
            }
        }
        out
    }

    /// Elements of `s` of dimension at most `n`; empty for `n < 0`.
    pub fn sup(&self, s: &ElemSet, n: i64) -> ElemSet {
        if n < 0 || self.is_empty() {
            return self.empty_set();
        }
        let n = (n as usize).min(self.upto.len() - 1);
        let mut out = s.clone();
        out.intersect_with(&self.upto[n]);
        out
    }

    /// Elements of `s` of dimension exactly `n`.
    pub fn layer(&self, s: &ElemSet, n: usize) -> ElemSet {
        let mut out = self.empty_set();
        for x in s.ones().filter(|&x| self.dims[x] == n) {
            out.insert(x);
        }
        out
    }

    /// `s` with its `n`-dimensional elements removed.
    pub fn without_layer(&self, s: &ElemSet, n: usize) -> ElemSet {
        let mut out = s.clone();
        out.difference_with(&self.layer(s, n));
        out
    }

    pub fn perpendicular(&self, s: &ElemSet, t: &ElemSet) -> bool {
        self.face_set(s, true).is_disjoint(&self.face_set(t, true)) && self.face_set(s, false).is_disjoint(&self.face_set(t, false))
    }

    fn elements_perpendicular(&self, x: usize, y: usize) -> bool {
        let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|f| !b.contains(f));
        disjoint(&self.plus[x], &self.plus[y]) && disjoint(&self.minus[x], &self.minus[y])
    }

    /// At most one 0-dimensional element and distinct elements pairwise perpendicular.
    pub fn well_formed(&self, s: &ElemSet) -> bool {
        let elems: Vec<usize> = s.ones().collect();
        if elems.iter().filter(|&&x| self.dims[x] == 0).count() > 1 {
            return false;
        }
        elems.iter().enumerate().all(|(i, &x)| elems[i + 1..].iter().all(|&y| self.elements_perpendicular(x, y)))
    }

    /// Whether `s` moves `m` to `p`.
    pub fn moves(&self, s: &ElemSet, m: &ElemSet, p: &ElemSet) -> bool {
        let sm = self.face_set(s, false);
        let sp = self.face_set(s, true);
        let mut forward = m.clone();
        forward.union_with(&sp);
        forward.difference_with(&sm);
        let mut backward = p.clone();
        backward.union_with(&sm);
        backward.difference_with(&sp);
        forward == *p && backward == *m
    }

    pub fn format_set(&self, s: &ElemSet) -> String {
        let names: Vec<&str> = s.ones().map(|x| self.labels[x].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A parity complex with thin elements, all of positive dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedParity {
    pub base: ParityComplex,
    pub thin: ElemSet,
}

impl StratifiedParity {
    pub fn new(base: ParityComplex, thin: ElemSet) -> Result<Self, ParityError> {
        if let Some(x) = thin.ones().find(|&x| x >= base.len() || base.dim(x) == 0) {
            return Err(ParityError::Invalid(format!("thin element {x} must exist and have positive dimension")));
        }
        let mut thin = thin;
        thin.grow(base.len());
        Ok(StratifiedParity { base, thin })
    }

    pub fn minimal(base: ParityComplex) -> Self {
        let thin = base.empty_set();
        StratifiedParity { base, thin }
    }

    /// Thin everything above dimension `n`.
    pub fn th(&self, n: usize) -> Self {
        let mut thin = self.thin.clone();
        for x in (0..self.base.len()).filter(|&x| self.base.dim(x) > n) {
            thin.insert(x);
        }
        StratifiedParity { base: self.base.clone(), thin }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub axiom1: Vec<usize>,
    pub axiom2: Vec<usize>,
    pub axiom3a: Vec<(usize, usize)>,
    pub axiom3b: Vec<(usize, usize, usize)>,
    /// Pairs `x ≠ y` related both ways by the face order.
    pub face_order_cycles: Vec<(usize, usize)>,
    pub irrelevant: Vec<usize>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axiom1.is_empty()
            && self.axiom2.is_empty()
            && self.axiom3a.is_empty()
            && self.axiom3b.is_empty()
            && self.face_order_cycles.is_empty()
            && self.irrelevant.is_empty()
    }
}

/// Reflexive-transitive closure of a relation given by successor lists.
fn closure(n: usize, succ: &[Vec<usize>]) -> Vec<FixedBitSet> {
    (0..n)
        .map(|x| {
            let mut seen = FixedBitSet::with_capacity(n);
            let mut stack = vec![x];
            seen.insert(x);
            while let Some(y) = stack.pop() {
                for &z in &succ[y] {
                    if !seen.contains(z) {
                        seen.insert(z);
                        stack.push(z);
                    }
                }
            }
            seen
        })
        .collect()
}

pub fn verify_axioms(c: &ParityComplex) -> AxiomReport {
    let n = c.len();
    let mut report = AxiomReport::default();
    for x in 0..n {
        let sx = c.set_of(&[x]);
        let xm = c.face_set(&sx, false);
        let xp = c.face_set(&sx, true);
        let mut lhs = c.face_set(&xm, false);
        lhs.union_with(&c.face_set(&xp, true));
        let mut rhs = c.face_set(&xp, false);
        rhs.union_with(&c.face_set(&xm, true));
        if lhs != rhs {
            report.axiom1.push(x);
        }
        if !c.well_formed(&xm) || !c.well_formed(&xp) {
            report.axiom2.push(x);
        }
    }
    // x < y when x⁺ ∩ y⁻ is non-empty
    let mut less: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if c.plus[x].iter().any(|f| c.minus[y].contains(f)) {
                less[x].push(y);
            }
        }
    }
    let tri = closure(n, &less);
    for x in 0..n {
        for y in (x + 1)..n {
            if tri[x].contains(y) && tri[y].contains(x) {
                report.axiom3a.push((x, y));
            }
        }
    }
    for z in 0..n {
        for &x in &c.minus[z] {
            for &y in &c.plus[z] {
                if tri[x].contains(y) || tri[y].contains(x) {
                    report.axiom3b.push((x, y, z));
                }
            }
        }
    }
    // x ≺ y when x ∈ y⁻ or y ∈ x⁺
    let mut prec: Vec<Vec<usize>> = vec![Vec::new(); n];
    for y in 0..n {
        for &x in &c.minus[y] {
            prec[x].push(y);
        }
    }
    for x in 0..n {
        for &y in &c.plus[x] {
            prec[x].push(y);
        }
    }
    let filled = closure(n, &prec);
    for x in 0..n {
        for y in (x + 1)..n {
            if filled[x].contains(y) && filled[y].contains(x) {
                report.face_order_cycles.push((x, y));
            }
        }
    }
    report.irrelevant = (0..n).filter(|&x| !is_cell(c, &atom_unchecked(c, x))).collect();
    report
}

/// A pair `⟨M;P⟩` of element sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub m: ElemSet,
    pub p: ElemSet,
}

impl Cell {
    pub fn new(m: ElemSet, p: ElemSet) -> Self {
        Cell { m, p }
    }

    /// The largest dimension of an element of `M ∪ P`.
    pub fn dim(&self, c: &ParityComplex) -> Option<usize> {
        self.m.ones().chain(self.p.ones()).map(|x| c.dim(x)).max()
    }

    pub fn format(&self, c: &ParityComplex) -> String {
        format!("<{};{}>", c.format_set(&self.m), c.format_set(&self.p))
    }
}

pub(crate) fn atom_unchecked(c: &ParityComplex, x: usize) -> Cell {
    let mut mu = c.set_of(&[x]);
    let mut pi = mu.clone();
    let mut mu_layer = mu.clone();
    let mut pi_layer = pi.clone();
    for _ in 0..c.dim(x) {
        mu_layer = c.minus_only(&mu_layer);
        pi_layer = c.plus_only(&pi_layer);
        mu.union_with(&mu_layer);
        pi.union_with(&pi_layer);
    }
    Cell { m: mu, p: pi }
}

/// The atom `⟨μ(x);π(x)⟩`.
pub fn atom(c: &ParityComplex, x: usize) -> Result<Cell, ParityError> {
    let a = atom_unchecked(c, x);
    if is_cell(c, &a) {
        Ok(a)
    } else {
        Err(ParityError::NotRelevant(x))
    }
}

/// Cell of the free ω-category: both sets non-empty, well formed, and moving `M` to `P`.
pub fn is_cell(c: &ParityComplex, cell: &Cell) -> bool {
    let (m, p) = (&cell.m, &cell.p);
    !m.is_clear() && !p.is_clear() && c.well_formed(m) && c.well_formed(p) && c.moves(m, m, p) && c.moves(p, m, p)
}

/// The same test through the inductive characterisation by sources, targets and top layers.
pub fn is_cell_inductive(c: &ParityComplex, cell: &Cell) -> bool {
    let top_m = cell.m.ones().map(|x| c.dim(x)).max();
    let top_p = cell.p.ones().map(|x| c.dim(x)).max();
    let (Some(n), Some(np)) = (top_m, top_p) else {
        return false;
    };
    if n != np {
        return false;
    }
    let mn = c.layer(&cell.m, n);
    if mn != c.layer(&cell.p, n) {
        return false;
    }
    if n == 0 {
        return mn.count_ones(..) == 1 && cell.m == cell.p;
    }
    let s = cell_source(c, cell, n - 1);
    let t = cell_target(c, cell, n - 1);
    is_cell_inductive(c, &s)
        && is_cell_inductive(c, &t)
        && c.well_formed(&mn)
        && c.moves(&mn, &c.layer(&cell.m, n - 1), &c.layer(&cell.p, n - 1))
}

/// `s_n⟨M;P⟩ = ⟨Sup_n M; M_n ∪ Sup_{n−1} P⟩`.
pub fn cell_source(c: &ParityComplex, cell: &Cell, n: usize) -> Cell {
    let m = c.sup(&cell.m, n as i64);
    let mut p = c.layer(&cell.m, n);
    p.union_with(&c.sup(&cell.p, n as i64 - 1));
    Cell { m, p }
}

/// `t_n⟨M;P⟩ = ⟨Sup_{n−1} M ∪ P_n; Sup_n P⟩`.
pub fn cell_target(c: &ParityComplex, cell: &Cell, n: usize) -> Cell {
    let mut m = c.sup(&cell.m, n as i64 - 1);
    m.union_with(&c.layer(&cell.p, n));
    let p = c.sup(&cell.p, n as i64);
    Cell { m, p }
}

/// `a ∘_n b`, defined when `t_n(b) = s_n(a)`.
pub fn cell_compose(c: &ParityComplex, a: &Cell, b: &Cell, n: usize) -> Result<Cell, ParityError> {
    if cell_target(c, b, n) != cell_source(c, a, n) {
        return Err(ParityError::NotComposable(n));
    }
    Ok(compose_unchecked(c, a, b, n))
}

fn compose_unchecked(c: &ParityComplex, a: &Cell, b: &Cell, n: usize) -> Cell {
    let mut m = b.m.clone();
    m.union_with(&c.without_layer(&a.m, n));
    let mut p = c.without_layer(&b.p, n);
    p.union_with(&a.p);
    Cell { m, p }
}

/// How a table cell was first obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    Atom(usize),
    /// `later ∘_n earlier`.
    Compose { n: usize, later: usize, earlier: usize },
}

/// A recorded composite `later ∘_n earlier = result`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Composition {
    pub n: usize,
    pub later: usize,
    pub earlier: usize,
    pub result: usize,
}

/// The cells of the free ω-category on a parity complex, closed under sources, targets and composites.
#[derive(Debug, Clone)]
pub struct CellTable {
    pub complex: ParityComplex,
    pub cells: Vec<Cell>,
    pub dims: Vec<usize>,
    pub witnesses: Vec<Witness>,
    /// `sources[c][n]` for `n < dims[c]`.
    pub sources: Vec<Vec<usize>>,
    pub targets: Vec<Vec<usize>>,
    /// Every non-trivial composable pair in the table.
    pub compositions: Vec<Composition>,
    /// Cell id of the atom of each element.
    pub atoms: Vec<usize>,
    index: HashMap<Cell, usize>,
}

pub const DEFAULT_BUDGET: usize = 1_000_000;

pub fn enumerate_cells(c: &ParityComplex, budget: usize) -> Result<CellTable, ParityError> {
    let report = verify_axioms(c);
    if !report.passed() {
        if let Some(&x) = report.irrelevant.first() {
            return Err(ParityError::NotRelevant(x));
        }
        return Err(ParityError::Invalid("parity axioms fail".into()));
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by_key(|&x| (c.dim(x), x));
    let mut cells: Vec<Cell> = Vec::new();
    let mut dims = Vec::new();
    let mut witnesses = Vec::new();
    let mut index: HashMap<Cell, usize> = HashMap::new();
    let mut atoms = vec![0; c.len()];
    for &x in &order {
        let a = atom_unchecked(c, x);
        let id = *index.entry(a.clone()).or_insert_with(|| {
            cells.push(a.clone());
            dims.push(c.dim(x));
            witnesses.push(Witness::Atom(x));
            cells.len() - 1
        });
        atoms[x] = id;
    }
    let mut by_source: HashMap<(usize, Cell), Vec<usize>> = HashMap::new();
    let mut by_target: HashMap<(usize, Cell), Vec<usize>> = HashMap::new();
    let mut compositions = Vec::new();
    let mut next = 0;
    while next < cells.len() {
        let id = next;
        next += 1;
        let cell = cells[id].clone();
        for n in 0..dims[id] {
            let s = cell_source(c, &cell, n);
            let t = cell_target(c, &cell, n);
            by_source.entry((n, s.clone())).or_default().push(id);
            by_target.entry((n, t.clone())).or_default().push(id);
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            if let Some(later) = by_source.get(&(n, t)) {
                pairs.extend(later.iter().map(|&a| (a, id)));
            }
            if let Some(earlier) = by_target.get(&(n, s)) {
                pairs.extend(earlier.iter().filter(|&&b| b != id).map(|&b| (id, b)));
            }
            for (a, b) in pairs {
                if n >= dims[a] || n >= dims[b] {
                    continue;
                }
                let composite = compose_unchecked(c, &cells[a], &cells[b], n);
                let result = match index.get(&composite) {
                    Some(&r) => r,
                    None => {
                        if cells.len() >= budget {
                            return Err(ParityError::BudgetExceeded(budget));
                        }
                        let d = composite.dim(c).expect("composites are non-empty");
                        cells.push(composite.clone());
                        dims.push(d);
                        witnesses.push(Witness::Compose { n, later: a, earlier: b });
                        index.insert(composite, cells.len() - 1);
                        cells.len() - 1
                    }
                };
                compositions.push(Composition { n, later: a, earlier: b, result });
            }
        }
    }
    let lookup = |cell: Cell| {
        index.get(&cell).copied().ok_or_else(|| ParityError::Invalid(format!("table not closed at {}", cell.format(c))))
    };
    let mut sources = Vec::with_capacity(cells.len());
    let mut targets = Vec::with_capacity(cells.len());
    for (id, cell) in cells.iter().enumerate() {
        sources.push((0..dims[id]).map(|n| lookup(cell_source(c, cell, n))).collect::<Result<Vec<_>, _>>()?);
        targets.push((0..dims[id]).map(|n| lookup(cell_target(c, cell, n))).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(CellTable { complex: c.clone(), cells, dims, witnesses, sources, targets, compositions, atoms, index })
}

impl CellTable {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn id_of(&self, cell: &Cell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn source(&self, id: usize, n: usize) -> usize {
        self.sources[id].get(n).copied().unwrap_or(id)
    }

    pub fn target(&self, id: usize, n: usize) -> usize {
        self.targets[id].get(n).copied().unwrap_or(id)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let top = self.dims.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &d in &self.dims {
            out[d] += 1;
        }
        out
    }

    /// Re-evaluates the witness tree of `id` by the composition formula.
    pub fn evaluate_witness(&self, id: usize) -> Cell {
        match self.witnesses[id] {
            Witness::Atom(x) => atom_unchecked(&self.complex, x),
            Witness::Compose { n, later, earlier } => {
                compose_unchecked(&self.complex, &self.evaluate_witness(later), &self.evaluate_witness(earlier), n)
            }
        }
    }

    /// Non-trivial `n`-cells, i.e. cells of dimension exactly `n`.
    pub fn cells_of_dim(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dims[i] == n).collect()
    }
}

/// Classes of a congruence on a cell table; `class_of[c]` is the least member of the class of `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub class_of: Vec<usize>,
}

impl Quotient {
    pub fn discrete(n: usize) -> Self {
        Quotient { class_of: (0..n).collect() }
    }

    pub fn classes(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = self.class_of.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    pub fn class_count(&self) -> usize {
        self.classes().len()
    }
}

/// Every composable pair in the table, trivial composites with identities included.
pub(crate) fn all_compositions(table: &CellTable) -> Vec<Composition> {
    let top = table.dims.iter().copied().max().unwrap_or(0);
    let mut out = table.compositions.clone();
    for b in 0..table.len() {
        for n in 0..=top {
            out.push(Composition { n, later: table.target(b, n), earlier: b, result: b });
            out.push(Composition { n, later: b, earlier: table.source(b, n), result: b });
        }
    }
    out
}

/// The congruence making every thin element's atom an identity on its source.
pub fn collapse(c: &StratifiedParity, table: &CellTable) -> Quotient {
    let n = table.len();
    let top = table.dims.iter().copied().max().unwrap_or(0);
    let mut uf = UnionFind::<usize>::new(n);
    for x in c.thin.ones() {
        let a = table.atoms[x];
        uf.union(a, table.source(a, table.dims[a] - 1));
    }
    let comps = all_compositions(table);
    loop {
        let mut changed = false;
        for id in 0..n {
            let root = uf.find(id);
            if root == id {
                continue;
            }
            for k in 0..top {
                changed |= uf.union(table.source(id, k), table.source(root, k));
                changed |= uf.union(table.target(id, k), table.target(root, k));
            }
        }
        let mut groups: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for comp in &comps {
            let key = (comp.n, uf.find(comp.later), uf.find(comp.earlier));
            match groups.get(&key) {
                Some(&r) => changed |= uf.union(r, comp.result),
                None => {
                    groups.insert(key, comp.result);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut least: HashMap<usize, usize> = HashMap::new();
    for id in 0..n {
        least.entry(uf.find(id)).or_insert(id);
    }
    Quotient { class_of: (0..n).map(|id| least[&uf.find(id)]).collect() }
}

/// A graded-set morphism sending each element to a set of same-dimensional target elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityMorphism {
    pub images: Vec<Vec<usize>>,
}

impl ParityMorphism {
    pub fn identity(c: &ParityComplex) -> Self {
        ParityMorphism { images: (0..c.len()).map(|x| vec![x]).collect() }
    }

    pub fn image_set(&self, target: &ParityComplex, s: &ElemSet) -> ElemSet {
        let mut out = target.empty_set();
        for x in s.ones() {
            for &y in &self.images[x] {
                out.insert(y);
            }
        }
        out
    }

    /// `g ∘ f`.
    pub fn then(&self, g: &ParityMorphism) -> ParityMorphism {
        ParityMorphism {
            images: self
                .images
                .iter()
                .map(|ys| {
                    let mut out: Vec<usize> = ys.iter().flat_map(|&y| g.images[y].iter().copied()).collect();
                    out.sort_unstable();
                    out.dedup();
                    out
                })
                .collect(),
        }
    }
}

/// Singletons on vertices, and each image well formed and moving the image of `x⁻` to that of `x⁺`.
pub fn verify_morphism(f: &ParityMorphism, source: &ParityComplex, target: &ParityComplex) -> Result<(), ParityError> {
    if f.images.len() != source.len() {
        return Err(ParityError::InvalidMorphism("one image per source element required".into()));
    }
    for x in 0..source.len() {
        let img = &f.images[x];
        if img.iter().any(|&y| y >= target.len() || target.dim(y) != source.dim(x)) {
            return Err(ParityError::InvalidMorphism(format!("image of {} changes dimension", source.label(x))));
        }
        if source.dim(x) == 0 {
            if img.len() != 1 {
                return Err(ParityError::InvalidMorphism(format!("vertex {} must map to one vertex", source.label(x))));
            }
            continue;
        }
        let fx = target.set_of(img);
        let fm = f.image_set(target, &source.set_of(source.minus(x)));
        let fp = f.image_set(target, &source.set_of(source.plus(x)));
        if !target.well_formed(&fx) || !target.moves(&fx, &fm, &fp) {
            return Err(ParityError::InvalidMorphism(format!("image of {} does not move its faces", source.label(x))));
        }
    }
    Ok(())
}

/// Thin elements map to sets of thin elements.
pub fn preserves_thinness(f: &ParityMorphism, source: &StratifiedParity, target: &StratifiedParity) -> bool {
    source.thin.ones().all(|x| f.images[x].iter().all(|&y| target.thin.contains(y)))
}

/// `⟨f(M); f(P)⟩`.
pub fn apply_morphism(f: &ParityMorphism, target: &ParityComplex, cell: &Cell) -> Cell {
    Cell { m: f.image_set(target, &cell.m), p: f.image_set(target, &cell.p) }
}

fn vertex_label(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(if vs.iter().any(|&v| v > 9) { "." } else { "" })
}

/// `Δ̃[n]` with the vertex list of each element.
#[derive(Debug, Clone)]
pub struct SimplexParity {
    pub complex: ParityComplex,
    pub vertices: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
}

impl SimplexParity {
    pub fn id_of(&self, vs: &[usize]) -> Option<usize> {
        self.index.get(vs).copied()
    }

    pub fn top(&self) -> usize {
        self.complex.len() - 1
    }

    pub fn top_dim(&self) -> usize {
        self.complex.dim(self.top())
    }
}

pub fn simplex_parity(n: usize) -> SimplexParity {
    let mut vertices: Vec<Vec<usize>> = (1u64..(1 << (n + 1)))
        .map(|m| (0..=n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    vertices.sort_by(|a: &Vec<usize>, b: &Vec<usize>| (a.len(), a).cmp(&(b.len(), b)));
    let index: HashMap<Vec<usize>, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for vs in &vertices {
        let (mut mn, mut pl) = (Vec::new(), Vec::new());
        if vs.len() > 1 {
            for i in 0..vs.len() {
                let mut f = vs.clone();
                f.remove(i);
                if i % 2 == 1 { mn.push(index[&f]) } else { pl.push(index[&f]) }
            }
        }
        minus.push(mn);
        plus.push(pl);
    }
    let dims = vertices.iter().map(|v| v.len() - 1).collect();
    let labels = vertices.iter().map(|v| vertex_label(v)).collect();
    let complex = ParityComplex::new(dims, minus, plus, labels).expect("simplex parity complexes are valid");
    SimplexParity { complex, vertices, index }
}

/// `Δ̃[n]_t`: the top element is thin.
pub fn simplex_parity_thin(n: usize) -> StratifiedParity {
    let sp = simplex_parity(n);
    let mut thin = sp.complex.empty_set();
    if n > 0 {
        thin.insert(sp.top());
    }
    StratifiedParity { base: sp.complex, thin }
}

/// `Δ̃(α)`: each face maps to the face on its image vertices, or to nothing if the dimension drops.
pub fn operator_morphism(alpha: &SimplicialOperator, source: &SimplexParity, target: &SimplexParity) -> ParityMorphism {
    let images = source
        .vertices
        .iter()
        .map(|vs| {
            let mut img: Vec<usize> = vs.iter().map(|&v| alpha.apply(v)).collect();
            img.dedup();
            if img.len() == vs.len() {
                vec![target.index[&img]]
            } else {
                Vec::new()
            }
        })
        .collect();
    ParityMorphism { images }
}

/// A product of parity complexes with the pair behind each element.
#[derive(Debug, Clone)]
pub struct ParityProduct {
    pub complex: ParityComplex,
    pub pairs: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
}

impl ParityProduct {
    pub fn id_of(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }
}

/// `C × D` with `⟨x;y⟩^ε = x^ε×{y} ∪ {x}×y^{ε(p)}`, the parity flipping when `p = dim x` is odd.
pub fn product(c: &ParityComplex, d: &ParityComplex) -> ParityProduct {
    let mut pairs: Vec<(usize, usize)> = (0..c.len()).flat_map(|x| (0..d.len()).map(move |y| (x, y))).collect();
    pairs.sort_by_key(|&(x, y)| (c.dim(x) + d.dim(y), x, y));
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let faces = |x: usize, y: usize, positive: bool| {
        let flip = c.dim(x) % 2 == 1;
        let mut out: Vec<usize> = c.faces(x, positive).iter().map(|&fx| index[&(fx, y)]).collect();
        out.extend(d.faces(y, positive != flip).iter().map(|&fy| index[&(x, fy)]));
        out
    };
    let minus = pairs.iter().map(|&(x, y)| faces(x, y, false)).collect();
    let plus = pairs.iter().map(|&(x, y)| faces(x, y, true)).collect();
    let dims = pairs.iter().map(|&(x, y)| c.dim(x) + d.dim(y)).collect();
    let labels = pairs.iter().map(|&(x, y)| format!("<{};{}>", c.label(x), d.label(y))).collect();
    let complex = ParityComplex::new(dims, minus, plus, labels).expect("products of valid complexes are valid");
    ParityProduct { complex, pairs, index }
}

/// Thin where either coordinate is thin.
pub fn product_thin(c: &StratifiedParity, d: &StratifiedParity, prod: &ParityProduct) -> StratifiedParity {
    let mut thin = prod.complex.empty_set();
    for (i, &(x, y)) in prod.pairs.iter().enumerate() {
        if c.thin.contains(x) || d.thin.contains(y) {
            thin.insert(i);
        }
    }
    StratifiedParity { base: prod.complex.clone(), thin }
}

/// `f × g`.
pub fn morphism_product(f: &ParityMorphism, g: &ParityMorphism, source: &ParityProduct, target: &ParityProduct) -> ParityMorphism {
    let images = source
        .pairs
        .iter()
        .map(|&(x, y)| {
            let mut out: Vec<usize> =
                f.images[x].iter().flat_map(|&a| g.images[y].iter().map(move |&b| target.index[&(a, b)])).collect();
            out.sort_unstable();
            out
        })
        .collect();
    ParityMorphism { images }
}

/// `Σ_n C`: points `0..=n` joined by `n` suspended copies of `C`.
#[derive(Debug, Clone)]
pub struct Suspension {
    pub complex: ParityComplex,
    pub n: usize,
    /// `points[i]` is the id of the 0-element `i`.
    pub points: Vec<usize>,
    /// Element id of `⟨x;i⟩`, for `1 ≤ i ≤ n`.
    pub index: HashMap<(usize, usize), usize>,
}

pub fn suspension(n: usize, c: &ParityComplex) -> Suspension {
    let mut pairs: Vec<(usize, usize)> = (0..c.len()).flat_map(|x| (1..=n).map(move |i| (x, i))).collect();
    pairs.sort_by_key(|&(x, i)| (c.dim(x), x, i));
    let points: Vec<usize> = (0..=n).collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, n + 1 + k)).collect();
    let mut dims = vec![0; n + 1];
    let mut minus = vec![Vec::new(); n + 1];
    let mut plus = vec![Vec::new(); n + 1];
    let mut labels: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    for &(x, i) in &pairs {
        dims.push(c.dim(x) + 1);
        if c.dim(x) == 0 {
            minus.push(vec![i - 1]);
            plus.push(vec![i]);
        } else {
            minus.push(c.minus(x).iter().map(|&f| index[&(f, i)]).collect());
            plus.push(c.plus(x).iter().map(|&f| index[&(f, i)]).collect());
        }
        labels.push(format!("<{};{}>", c.label(x), i));
    }
    let complex = ParityComplex::new(dims, minus, plus, labels).expect("suspensions of valid complexes are valid");
    Suspension { complex, n, points, index }
}

/// Thin where the suspended element is thin.
pub fn suspension_thin(c: &StratifiedParity, s: &Suspension) -> StratifiedParity {
    let mut thin = s.complex.empty_set();
    for (&(x, _), &id) in &s.index {
        if c.thin.contains(x) {
            thin.insert(id);
        }
    }
    StratifiedParity { base: s.complex.clone(), thin }
}

/// `Σ_α C`: `i ↦ α(i)` and `⟨x;i⟩ ↦ {x}×(α(i−1), α(i)]`.
pub fn suspension_operator(alpha: &SimplicialOperator, source: &Suspension, target: &Suspension) -> ParityMorphism {
    let mut images = vec![Vec::new(); source.complex.len()];
    for i in 0..=source.n {
        images[source.points[i]] = vec![target.points[alpha.apply(i)]];
    }
    for (&(x, i), &id) in &source.index {
        images[id] = ((alpha.apply(i - 1) + 1)..=alpha.apply(i)).map(|j| target.index[&(x, j)]).collect();
    }
    ParityMorphism { images }
}

/// `Σ_n f`: `i ↦ i` and `⟨x;i⟩ ↦ f(x)×{i}`.
pub fn suspension_morphism(f: &ParityMorphism, source: &Suspension, target: &Suspension) -> ParityMorphism {
    let mut images = vec![Vec::new(); source.complex.len()];
    for i in 0..=source.n {
        images[source.points[i]] = vec![target.points[i]];
    }
    for (&(x, i), &id) in &source.index {
        let mut out: Vec<usize> = f.images[x].iter().map(|&y| target.index[&(y, i)]).collect();
        out.sort_unstable();
        images[id] = out;
    }
    ParityMorphism { images }
}

/// `diag(v0…vr) = {⟨v0…vs; vs…vr⟩ | 0 ≤ s ≤ r}` into `Δ̃[n] × Δ̃[n]`.
pub fn diag(sp: &SimplexParity, prod: &ParityProduct) -> ParityMorphism {
    let images = sp
        .vertices
        .iter()
        .map(|vs| {
            let mut out: Vec<usize> = (0..vs.len()).map(|s| prod.index[&(sp.index[&vs[..=s]], sp.index[&vs[s..]])]).collect();
            out.sort_unstable();
            out
        })
        .collect();
    ParityMorphism { images }
}

/// `k^{C,m} : C × Δ̃[m] → Σ_m C`.
pub fn k_morphism(c: &ParityComplex, sp: &SimplexParity, prod: &ParityProduct, susp: &Suspension) -> ParityMorphism {
    let images = prod
        .pairs
        .iter()
        .map(|&(x, y)| {
            let w = &sp.vertices[y];
            match w.len() {
                1 if c.dim(x) == 0 => vec![susp.points[w[0]]],
                2 => ((w[0] + 1)..=w[1]).map(|i| susp.index[&(x, i)]).collect(),
                _ => Vec::new(),
            }
        })
        .collect();
    ParityMorphism { images }
}

/// The vertex list of a face operator's image, used to relate simplices and elements.
pub fn operator_vertices(alpha: &SimplicialOperator) -> Vec<usize> {
    let (f, _) = ez_factorize(alpha);
    f.values().to_vec()
}

pub fn write_pcx(c: &StratifiedParity) -> String {
    let mut out = String::from("pcx 1\n");
    for x in 0..c.base.len() {
        let _ = writeln!(out, "elem {x} dim={} thin={}", c.base.dim(x), u8::from(c.thin.contains(x)));
    }
    for x in (0..c.base.len()).filter(|&x| c.base.dim(x) > 0) {
        for (name, faces) in [("minus", c.base.minus(x)), ("plus", c.base.plus(x))] {
            let _ = write!(out, "{name} {x} :");
            for f in faces {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_pcx(text: &str) -> Result<StratifiedParity, ParityError> {
    let err = |line: usize, msg: &str| ParityError::Parse { line, msg: msg.to_string() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "pcx 1")) => {}
        Some((ln, _)) => return Err(err(ln, "expected header `pcx 1`")),
        None => return Err(err(1, "empty input")),
    }
    let mut elems: Vec<Option<(usize, bool)>> = Vec::new();
    let mut minus: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut plus: HashMap<usize, Vec<usize>> = HashMap::new();
    for (ln, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            Some(&"elem") => {
                if words.len() != 4 {
                    return Err(err(ln, "expected `elem <id> dim=<d> thin=<0|1>`"));
                }
                let id: usize = words[1].parse().map_err(|_| err(ln, "bad element id"))?;
                let dim: usize = words[2].strip_prefix("dim=").and_then(|d| d.parse().ok()).ok_or_else(|| err(ln, "bad dim"))?;
                let thin = match words[3] {
                    "thin=0" => false,
                    "thin=1" => true,
                    _ => return Err(err(ln, "bad thin flag")),
                };
                if elems.len() <= id {
                    elems.resize(id + 1, None);
                }
                if elems[id].replace((dim, thin)).is_some() {
                    return Err(err(ln, "duplicate element id"));
                }
            }
            Some(&kind @ ("minus" | "plus")) => {
                if words.len() < 3 || words[2] != ":" {
                    return Err(err(ln, "expected `<minus|plus> <id> : <ids>`"));
                }
                let id: usize = words[1].parse().map_err(|_| err(ln, "bad element id"))?;
                let faces = words[3..].iter().map(|w| w.parse().map_err(|_| err(ln, "bad face id"))).collect::<Result<Vec<usize>, _>>()?;
                let map = if kind == "minus" { &mut minus } else { &mut plus };
                if map.insert(id, faces).is_some() {
                    return Err(err(ln, "duplicate face record"));
                }
            }
            _ => return Err(err(ln, "unknown record")),
        }
    }
    let mut dims = Vec::new();
    let mut thin_ids = Vec::new();
    for (id, e) in elems.iter().enumerate() {
        let (d, t) = e.ok_or_else(|| err(0, &format!("element ids are not dense: {id} missing")))?;
        dims.push(d);
        if t {
            thin_ids.push(id);
        }
    }
    let n = dims.len();
    let minus_v = (0..n).map(|x| minus.remove(&x).unwrap_or_default()).collect();
    let plus_v = (0..n).map(|x| plus.remove(&x).unwrap_or_default()).collect();
    if let Some(&x) = minus.keys().chain(plus.keys()).next() {
        return Err(err(0, &format!("faces given for undeclared element {x}")));
    }
    let labels = (0..n).map(|x| x.to_string()).collect();
    let base = ParityComplex::new(dims, minus_v, plus_v, labels)?;
    let thin = base.set_of(&thin_ids);
    StratifiedParity::new(base, thin)
}
