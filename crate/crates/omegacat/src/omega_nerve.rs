//! Finite ω-categories, ω-functors out of free ω-categories, nerves, and the
//! comparison between cylinders of Gray tensors and elements of parity products.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::gray_tensor::{cylinder_partition, tensor};
use crate::parity::{
    all_compositions, apply_morphism, atom, diag, enumerate_cells, morphism_product, operator_morphism, product,
    product_thin, simplex_parity, CellTable, ParityError, Quotient, SimplexParity, StratifiedParity, Witness,
};
use crate::simplex_ops::SimplicialOperator;
use crate::stratified::{from_model, standard_with_masks, Labelled, SimplicialModel, Standard, StratError, StratifiedComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("ω-category law violated: {0}")]
    LawViolation(String),
    #[error("search exceeded the budget of {0}")]
    BudgetExceeded(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Parity(#[from] ParityError),
    #[error(transparent)]
    Strat(#[from] StratError),
}

/// A finite one-sorted ω-category given by its operation tables.
#[derive(Debug, Clone)]
pub struct FiniteOmegaCat {
    dims: Vec<usize>,
    sources: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
    /// `(n, later, earlier) ↦ later ∘_n earlier` for non-trivial composites.
    table: HashMap<(usize, usize, usize), usize>,
    labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LawReport {
    pub violations: Vec<String>,
    pub checked: usize,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.violations.len() < 20 {
            self.violations.push(msg);
        }
    }
}

impl FiniteOmegaCat {
    /// Builds and validates. `sources[c][n]` and `targets[c][n]` are given for `n < dims[c]`.
    pub fn new(
        dims: Vec<usize>,
        sources: Vec<Vec<usize>>,
        targets: Vec<Vec<usize>>,
        composites: Vec<(usize, usize, usize, usize)>,
        labels: Vec<String>,
    ) -> Result<Self, OmegaError> {
        let n = dims.len();
        if sources.len() != n || targets.len() != n || labels.len() != n {
            return Err(OmegaError::LawViolation("tables must cover every cell".into()));
        }
        for c in 0..n {
            if sources[c].len() != dims[c] || targets[c].len() != dims[c] {
                return Err(OmegaError::LawViolation(format!("cell {c} needs a source and target below its dimension")));
            }
            if sources[c].iter().chain(&targets[c]).any(|&x| x >= n) {
                return Err(OmegaError::LawViolation(format!("cell {c} has a boundary out of range")));
            }
        }
        let mut cat = FiniteOmegaCat { dims, sources, targets, table: HashMap::new(), labels };
        for (k, a, b, r) in composites {
            if a >= n || b >= n || r >= n {
                return Err(OmegaError::LawViolation("composite out of range".into()));
            }
            if k >= cat.dims[a] || k >= cat.dims[b] {
                if cat.compose(k, a, b) != Some(r) {
                    return Err(OmegaError::LawViolation(format!("identity composite {a} ∘_{k} {b} ≠ {r}")));
                }
                continue;
            }
            if let Some(&old) = cat.table.get(&(k, a, b)) {
                if old != r {
                    return Err(OmegaError::LawViolation(format!("composite {a} ∘_{k} {b} is not well defined")));
                }
            }
            cat.table.insert((k, a, b), r);
        }
        let report = cat.validate();
        match report.violations.first() {
            Some(v) => Err(OmegaError::LawViolation(v.clone())),
            None => Ok(cat),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn source(&self, c: usize, n: usize) -> usize {
        self.sources[c].get(n).copied().unwrap_or(c)
    }

    pub fn target(&self, c: usize, n: usize) -> usize {
        self.targets[c].get(n).copied().unwrap_or(c)
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.dims[c] == d).collect()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_dim() + 1];
        for &d in &self.dims {
            out[d] += 1;
        }
        out
    }

    /// Whether every cell is fixed by `s_n`.
    pub fn is_n_category(&self, n: usize) -> bool {
        (0..self.len()).all(|c| self.source(c, n) == c)
    }

    /// `a ∘_n b`, defined when `t_n(b) = s_n(a)`.
    pub fn compose(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        if self.target(b, n) != self.source(a, n) {
            return None;
        }
        if self.dims[b] <= n {
            return Some(a);
        }
        if self.dims[a] <= n {
            return Some(b);
        }
        self.table.get(&(n, a, b)).copied()
    }

    /// Exhaustive check of globularity, identities, boundaries of composites,
    /// totality, associativity and interchange.
    pub fn validate(&self) -> LawReport {
        let mut rep = LawReport::default();
        let cells = 0..self.len();
        let top = self.max_dim() + 1;
        for c in cells.clone() {
            for n in 0..self.dims[c] {
                for b in [self.source(c, n), self.target(c, n)] {
                    rep.checked += 1;
                    if self.dims[b] > n || b == c {
                        rep.fail(format!("boundary {b} of cell {c} at {n} has the wrong dimension"));
                    }
                }
            }
            for m in 0..=top {
                for n in 0..=top {
                    let k = m.min(n);
                    let (sm_sn, tm_sn, sm_tn, tm_tn) = (
                        self.source(self.source(c, n), m),
                        self.target(self.source(c, n), m),
                        self.source(self.target(c, n), m),
                        self.target(self.target(c, n), m),
                    );
                    let expect = if m < n {
                        (self.source(c, k), self.target(c, k), self.source(c, k), self.target(c, k))
                    } else {
                        (self.source(c, n), self.source(c, n), self.target(c, n), self.target(c, n))
                    };
                    rep.checked += 1;
                    if (sm_sn, tm_sn, sm_tn, tm_tn) != expect {
                        rep.fail(format!("globularity fails for cell {c} at ({m}, {n})"));
                    }
                }
                rep.checked += 1;
                if self.compose(m, c, self.source(c, m)) != Some(c) || self.compose(m, self.target(c, m), c) != Some(c) {
                    rep.fail(format!("identity law fails for cell {c} at {m}"));
                }
            }
        }
        for (&(n, a, b), &r) in &self.table {
            rep.checked += 1;
            if self.target(b, n) != self.source(a, n) {
                rep.fail(format!("composite {a} ∘_{n} {b} of non-composable cells"));
                continue;
            }
            if self.dims[r] != self.dims[a].max(self.dims[b]) {
                rep.fail(format!("composite {a} ∘_{n} {b} has the wrong dimension"));
            }
            if self.source(r, n) != self.source(b, n) || self.target(r, n) != self.target(a, n) {
                rep.fail(format!("composite {a} ∘_{n} {b} has the wrong {n}-boundary"));
            }
            for m in 0..top {
                let ok = if m < n {
                    self.source(r, m) == self.source(a, m) && self.target(r, m) == self.target(a, m)
                } else if m > n {
                    self.compose(n, self.source(a, m), self.source(b, m)) == Some(self.source(r, m))
                        && self.compose(n, self.target(a, m), self.target(b, m)) == Some(self.target(r, m))
                } else {
                    true
                };
                if !ok {
                    rep.fail(format!("composite {a} ∘_{n} {b} has the wrong {m}-boundary"));
                }
            }
        }
        for n in 0..top {
            let mut by_target: HashMap<usize, Vec<usize>> = HashMap::new();
            for c in cells.clone() {
                by_target.entry(self.target(c, n)).or_default().push(c);
            }
            let mut pairs = Vec::new();
            for a in cells.clone() {
                for &b in by_target.get(&self.source(a, n)).into_iter().flatten() {
                    rep.checked += 1;
                    match self.compose(n, a, b) {
                        Some(r) => pairs.push((a, b, r)),
                        None => rep.fail(format!("composable pair {a} ∘_{n} {b} has no composite")),
                    }
                }
            }
            for &(a, b, ab) in &pairs {
                for &c in by_target.get(&self.source(b, n)).into_iter().flatten() {
                    rep.checked += 1;
                    let lhs = self.compose(n, ab, c);
                    let rhs = self.compose(n, b, c).and_then(|bc| self.compose(n, a, bc));
                    if lhs.is_none() || lhs != rhs {
                        rep.fail(format!("associativity fails for ({a}, {b}, {c}) at {n}"));
                    }
                }
            }
            for m in 0..n {
                for &(a, b, ab) in &pairs {
                    for &(c, d, cd) in &pairs {
                        if self.target(cd, m) != self.source(ab, m) {
                            continue;
                        }
                        rep.checked += 1;
                        let lhs = self.compose(m, ab, cd);
                        let rhs = match (self.compose(m, a, c), self.compose(m, b, d)) {
                            (Some(ac), Some(bd)) => self.compose(n, ac, bd),
                            _ => None,
                        };
                        if lhs.is_none() || lhs != rhs {
                            rep.fail(format!("interchange fails for ({a}, {b}, {c}, {d}) at ({m}, {n})"));
                        }
                    }
                }
            }
        }
        rep
    }

    /// The ω-category presented by a cell table, optionally divided by a congruence.
    pub fn from_cell_table(table: &CellTable, quotient: Option<&Quotient>) -> Result<Self, OmegaError> {
        let q = quotient.cloned().unwrap_or_else(|| Quotient::discrete(table.len()));
        if q.class_of.len() != table.len() {
            return Err(OmegaError::LawViolation("quotient does not match the table".into()));
        }
        let reps = q.classes();
        let new_id: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cls = |c: usize| new_id[&q.class_of[c]];
        let top = table.dims.iter().copied().max().unwrap_or(0);
        for c in 0..table.len() {
            let r = q.class_of[c];
            for n in 0..=top {
                if cls(table.source(c, n)) != cls(table.source(r, n)) || cls(table.target(c, n)) != cls(table.target(r, n)) {
                    return Err(OmegaError::LawViolation(format!("boundaries of cell {c} disagree with its class at {n}")));
                }
            }
        }
        let mut dims = Vec::with_capacity(reps.len());
        let mut sources = Vec::with_capacity(reps.len());
        let mut targets = Vec::with_capacity(reps.len());
        for &r in &reps {
            let d = (0..=table.dims[r]).find(|&n| cls(table.source(r, n)) == cls(r)).unwrap_or(table.dims[r]);
            dims.push(d);
            sources.push((0..d).map(|n| cls(table.source(r, n))).collect());
            targets.push((0..d).map(|n| cls(table.target(r, n))).collect());
        }
        let composites =
            all_compositions(table).into_iter().map(|c| (c.n, cls(c.later), cls(c.earlier), cls(c.result))).collect();
        let labels = reps.iter().map(|&r| table.cells[r].format(&table.complex)).collect();
        FiniteOmegaCat::new(dims, sources, targets, composites, labels)
    }

    /// The `n`-superstructure: cells of dimension at most `n`.
    pub fn sup(&self, n: usize) -> Result<Self, OmegaError> {
        let keep: Vec<usize> = (0..self.len()).filter(|&c| self.dims[c] <= n).collect();
        let new_id: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let map = |v: &[usize]| v.iter().map(|c| new_id[c]).collect::<Vec<_>>();
        let composites = self
            .table
            .iter()
            .filter(|(_, r)| new_id.contains_key(r))
            .map(|(&(k, a, b), r)| (k, new_id[&a], new_id[&b], new_id[r]))
            .collect();
        FiniteOmegaCat::new(
            keep.iter().map(|&c| self.dims[c]).collect(),
            keep.iter().map(|&c| map(&self.sources[c])).collect(),
            keep.iter().map(|&c| map(&self.targets[c])).collect(),
            composites,
            keep.iter().map(|&c| self.labels[c].clone()).collect(),
        )
    }
}

/// The free ω-category on `Δ̃[n]` together with its cell table.
#[derive(Debug, Clone)]
pub struct Oriental {
    pub simplex: SimplexParity,
    pub table: CellTable,
}

pub fn oriental(n: usize, budget: usize) -> Result<Oriental, OmegaError> {
    let simplex = simplex_parity(n);
    let table = enumerate_cells(&simplex.complex, budget)?;
    Ok(Oriental { simplex, table })
}

/// `O(Δ̃[1])`.
pub fn walking_arrow() -> FiniteOmegaCat {
    let o = oriental(1, 16).expect("the 1-oriental is small");
    FiniteOmegaCat::from_cell_table(&o.table, None).expect("free ω-categories are valid")
}

/// An ω-functor out of a tabulated free ω-category, given by the image of every table cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaFunctor {
    pub images: Vec<usize>,
}

impl OmegaFunctor {
    pub fn atom_images(&self, source: &CellTable) -> Vec<usize> {
        source.atoms.iter().map(|&a| self.images[a]).collect()
    }
}

/// Extends an assignment on atoms along the witness trees.
pub fn evaluate_functor(source: &CellTable, target: &FiniteOmegaCat, atom_images: &[usize]) -> Option<Vec<usize>> {
    let mut images = Vec::with_capacity(source.len());
    for w in &source.witnesses {
        let img = match *w {
            Witness::Atom(x) => atom_images[x],
            Witness::Compose { n, later, earlier } => target.compose(n, images[later], images[earlier])?,
        };
        images.push(img);
    }
    Some(images)
}

/// Exhaustive homomorphism check over the whole source table.
pub fn certify_functor(source: &CellTable, target: &FiniteOmegaCat, images: &[usize]) -> bool {
    let top = source.dims.iter().copied().max().unwrap_or(0);
    (0..source.len()).all(|c| {
        target.dim(images[c]) <= source.dims[c]
            && (0..=top).all(|n| {
                images[source.source(c, n)] == target.source(images[c], n)
                    && images[source.target(c, n)] == target.target(images[c], n)
            })
    }) && source
        .compositions
        .iter()
        .all(|comp| target.compose(comp.n, images[comp.later], images[comp.earlier]) == Some(images[comp.result]))
}

/// All ω-functors from the tabulated free ω-category to `target` sending each
/// element listed in `thin` to a cell of lower dimension.
pub fn enumerate_functors(
    source: &CellTable,
    target: &FiniteOmegaCat,
    thin: &[usize],
    budget: usize,
) -> Result<Vec<OmegaFunctor>, OmegaError> {
    let complex = &source.complex;
    let top = source.dims.iter().copied().max().unwrap_or(0);
    let mut search = FunctorSearch {
        source,
        target,
        thin: thin.iter().copied().collect(),
        atoms_by_dim: (0..=top).map(|d| complex.elements_of_dim(d).collect()).collect(),
        images: vec![None; source.len()],
        found: Vec::new(),
        visited: 0,
        budget,
    };
    if !source.is_empty() {
        search.level(0)?;
    }
    let mut found = search.found;
    found.sort_by_key(|f| f.atom_images(source));
    Ok(found)
}

struct FunctorSearch<'a> {
    source: &'a CellTable,
    target: &'a FiniteOmegaCat,
    thin: HashSet<usize>,
    atoms_by_dim: Vec<Vec<usize>>,
    images: Vec<Option<usize>>,
    found: Vec<OmegaFunctor>,
    visited: usize,
    budget: usize,
}

impl FunctorSearch<'_> {
    fn level(&mut self, d: usize) -> Result<(), OmegaError> {
        if d == self.atoms_by_dim.len() {
            let images: Vec<usize> = self.images.iter().map(|i| i.expect("every cell evaluated")).collect();
            if certify_functor(self.source, self.target, &images) {
                self.found.push(OmegaFunctor { images });
            }
            return Ok(());
        }
        let atoms = self.atoms_by_dim[d].clone();
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(atoms.len());
        for &x in &atoms {
            let cell = self.source.atoms[x];
            let bound = if self.thin.contains(&x) { d.saturating_sub(1) } else { d };
            let boundary = (d > 0).then(|| {
                (
                    self.images[self.source.source(cell, d - 1)].expect("lower cells evaluated"),
                    self.images[self.source.target(cell, d - 1)].expect("lower cells evaluated"),
                )
            });
            let cands: Vec<usize> = (0..self.target.len())
                .filter(|&c| self.target.dim(c) <= bound)
                .filter(|&c| boundary.map_or(true, |(s, t)| self.target.source(c, d - 1) == s && self.target.target(c, d - 1) == t))
                .collect();
            if cands.is_empty() {
                return Ok(());
            }
            choices.push(cands);
        }
        let layer: Vec<usize> = (0..self.source.len()).filter(|&c| self.source.dims[c] == d).collect();
        let mut pick = vec![0; atoms.len()];
        loop {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(OmegaError::BudgetExceeded(self.budget));
            }
            for (i, &x) in atoms.iter().enumerate() {
                self.images[self.source.atoms[x]] = Some(choices[i][pick[i]]);
            }
            let mut ok = true;
            for &c in &layer {
                if let Witness::Compose { n, later, earlier } = self.source.witnesses[c] {
                    let (a, b) = (self.images[later].expect("ordered"), self.images[earlier].expect("ordered"));
                    match self.target.compose(n, a, b) {
                        Some(r) => self.images[c] = Some(r),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                self.level(d + 1)?;
            }
            for &c in &layer {
                self.images[c] = None;
            }
            // odometer over the candidate lists
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return Ok(());
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

/// Functors out of the `n`-oriental, or out of its collapse when `thin_top` holds.
pub fn enumerate_simplex_functors(
    o: &Oriental,
    target: &FiniteOmegaCat,
    thin_top: bool,
    budget: usize,
) -> Result<Vec<OmegaFunctor>, OmegaError> {
    let thin: Vec<usize> = if thin_top && o.simplex.top() > 0 { vec![o.simplex.top()] } else { Vec::new() };
    enumerate_functors(&o.table, target, &thin, budget)
}

/// An `n`-simplex of the nerve: the images of the atoms of `Δ̃[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NerveSimplex {
    pub dim: usize,
    pub atoms: Vec<usize>,
}

pub const DEFAULT_FUNCTOR_BUDGET: usize = 10_000_000;

struct NerveModel<'a> {
    cat: &'a FiniteOmegaCat,
    orientals: Vec<Oriental>,
    functors: Vec<Vec<NerveSimplex>>,
    /// `faces[k][i][v]`: table-`k` cell that atom `v` of `Δ̃[k−1]` reaches under `δ_i`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[k][i][v]`: table-`k` cell that atom `v` of `Δ̃[k+1]` reaches under `σ_i`.
    degens: Vec<Vec<Vec<usize>>>,
}

fn reindex_table(alpha: &SimplicialOperator, source: &SimplexParity, o: &Oriental) -> Vec<usize> {
    let f = operator_morphism(alpha, source, &o.simplex);
    (0..source.complex.len())
        .map(|v| {
            let cell = apply_morphism(&f, &o.simplex.complex, &crate::parity::atom_unchecked(&source.complex, v));
            o.table.id_of(&cell).expect("orientals are closed under operator images")
        })
        .collect()
}

impl<'a> NerveModel<'a> {
    fn new(cat: &'a FiniteOmegaCat, d: usize, budget: usize) -> Result<Self, OmegaError> {
        let orientals = (0..=d).map(|k| oriental(k, budget)).collect::<Result<Vec<_>, _>>()?;
        let functors = orientals
            .iter()
            .map(|o| {
                enumerate_simplex_functors(o, cat, false, budget).map(|fs| {
                    fs.iter().map(|f| NerveSimplex { dim: o.simplex.top_dim(), atoms: f.atom_images(&o.table) }).collect()
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut faces = vec![Vec::new()];
        let mut degens = Vec::new();
        for (k, o) in orientals.iter().enumerate() {
            if k > 0 {
                let below = &orientals[k - 1].simplex;
                faces.push(
                    (0..=k)
                        .map(|i| {
                            let vals = (0..k).map(|v| if v < i { v } else { v + 1 }).collect();
                            reindex_table(&SimplicialOperator::new(k as i32, vals).expect("face"), below, o)
                        })
                        .collect(),
                );
            }
            let above = simplex_parity(k + 1);
            degens.push(
                (0..=k)
                    .map(|i| {
                        let vals = (0..=k + 1).map(|v| if v <= i { v } else { v - 1 }).collect();
                        reindex_table(&SimplicialOperator::new(k as i32, vals).expect("degeneracy"), &above, o)
                    })
                    .collect(),
            );
        }
        Ok(NerveModel { cat, orientals, functors, faces, degens })
    }

    fn full(&self, s: &NerveSimplex) -> Vec<usize> {
        evaluate_functor(&self.orientals[s.dim].table, self.cat, &s.atoms).expect("nerve simplices are functors")
    }
}

impl SimplicialModel for NerveModel<'_> {
    type Simplex = NerveSimplex;

    fn candidates(&self, d: usize) -> Vec<NerveSimplex> {
        self.functors[d].clone()
    }

    fn face(&self, s: &NerveSimplex, i: usize) -> NerveSimplex {
        let full = self.full(s);
        NerveSimplex { dim: s.dim - 1, atoms: self.faces[s.dim][i].iter().map(|&c| full[c]).collect() }
    }

    fn degeneracy(&self, s: &NerveSimplex, i: usize) -> NerveSimplex {
        let full = self.full(s);
        NerveSimplex { dim: s.dim + 1, atoms: self.degens[s.dim][i].iter().map(|&c| full[c]).collect() }
    }

    fn is_thin(&self, s: &NerveSimplex) -> bool {
        s.dim > 0 && self.cat.dim(*s.atoms.last().expect("non-empty")) < s.dim
    }
}

/// The nerve of `cat` truncated at dimension `d`; a simplex is thin when its top atom drops dimension.
pub fn nerve(cat: &FiniteOmegaCat, d: usize, budget: usize) -> Result<Labelled<NerveSimplex>, OmegaError> {
    let model = NerveModel::new(cat, d, budget)?;
    Ok(from_model(&model, d)?)
}

/// Per-dimension comparison of cylinders with product elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeRow {
    pub r: usize,
    pub cylinders: usize,
    pub elements: usize,
    pub bijective: bool,
    pub atoms_agree: bool,
    pub relevant: bool,
}

impl BridgeRow {
    pub fn passed(&self) -> bool {
        self.bijective && self.atoms_agree && self.relevant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinnessCheck {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeReport {
    pub rows: Vec<BridgeRow>,
    pub thinness: ThinnessCheck,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(BridgeRow::passed) && self.thinness.mismatches.is_empty()
    }
}

/// A full simplex `Δ[n]` with thinness, and the matching stratified parity complex.
struct SimplexSide {
    complex: StratifiedComplex,
    parity: SimplexParity,
    thin: StratifiedParity,
}

fn simplex_side(kind: Standard) -> Result<SimplexSide, OmegaError> {
    let n = match kind {
        Standard::Delta(n) | Standard::DeltaT(n) => n,
        other => return Err(OmegaError::Unsupported(format!("{other:?} is not a full simplex"))),
    };
    let (complex, masks) = standard_with_masks(kind)?;
    let parity = simplex_parity(n);
    let mut thin = parity.complex.empty_set();
    for id in complex.thin_ids() {
        let vs: Vec<usize> = (0..=n).filter(|i| masks[id] & (1 << i) != 0).collect();
        thin.insert(parity.index[&vs]);
    }
    let thin = StratifiedParity::new(parity.complex.clone(), thin)?;
    Ok(SimplexSide { complex, parity, thin })
}

fn distinct(vs: Vec<usize>) -> Vec<usize> {
    let mut vs = vs;
    vs.dedup();
    vs
}

/// Compares non-degenerate cylinders of `N ⊗ M` with elements of `Ñ × M̃`, for `N`, `M` full simplices.
pub fn bridge_check(kx: Standard, ky: Standard) -> Result<BridgeReport, OmegaError> {
    let (sx, sy) = (simplex_side(kx)?, simplex_side(ky)?);
    let built = tensor(&sx.complex, &sy.complex);
    let prod = product(&sx.parity.complex, &sy.parity.complex);
    let prod_thin = product_thin(&sx.thin, &sy.thin, &prod);
    let (n, m) = (sx.parity.top_dim(), sy.parity.top_dim());
    let mut rows = Vec::new();
    let mut thinness = ThinnessCheck { checked: 0, mismatches: Vec::new() };
    for r in 0..=n + m {
        let sr = simplex_parity(r);
        let pr = product(&sr.complex, &sr.complex);
        let dg = diag(&sr, &pr);
        let top_atom = atom(&sr.complex, sr.top())?;
        let mut seen = HashSet::new();
        let (mut cylinders, mut bijective, mut atoms_agree, mut relevant) = (0, true, true, true);
        for &id in built.complex.ids_of_dim(r) {
            let (x, y) = &built.labels[id];
            let Some(p) = cylinder_partition(x, y) else { continue };
            cylinders += 1;
            let (vx, vy) = (sx.complex.vertex_list(x), sy.complex.vertex_list(y));
            let (v, w) = (distinct(vx.clone()), distinct(vy.clone()));
            if v.len() != p + 1 || w.len() != r - p + 1 {
                bijective = false;
                continue;
            }
            let elem = prod.index[&(sx.parity.index[&v], sy.parity.index[&w])];
            bijective &= seen.insert(elem);
            let Ok(expected) = atom(&prod.complex, elem) else {
                relevant = false;
                continue;
            };
            let alpha = SimplicialOperator::new(n as i32, vx).expect("vertex lists are monotone");
            let beta = SimplicialOperator::new(m as i32, vy).expect("vertex lists are monotone");
            let fa = operator_morphism(&alpha, &sr, &sx.parity);
            let fb = operator_morphism(&beta, &sr, &sy.parity);
            let composite = dg.then(&morphism_product(&fa, &fb, &pr, &prod));
            atoms_agree &= apply_morphism(&composite, &prod.complex, &top_atom) == expected;
            if r > 0 {
                thinness.checked += 1;
                let lhs = built.complex.is_thin(&crate::stratified::NormalSimplex::nondegenerate(id, r));
                let rhs = prod_thin.thin.contains(elem);
                if lhs != rhs {
                    thinness.mismatches.push(format!("{} thin={lhs} vs {} thin={rhs}", id, prod.complex.label(elem)));
                }
            }
        }
        let elements = prod.complex.elements_of_dim(r).count();
        bijective &= seen.len() == elements && cylinders == elements;
        rows.push(BridgeRow { r, cylinders, elements, bijective, atoms_agree, relevant });
    }
    Ok(BridgeReport { rows, thinness })
}

/// The bridge check for `Δ[n] ⊗ Δ[m]` with minimal thinness.
pub fn tensor_bridge_check(n: usize, m: usize) -> BridgeReport {
    bridge_check(Standard::Delta(n), Standard::Delta(m)).expect("full simplices are supported")
}
