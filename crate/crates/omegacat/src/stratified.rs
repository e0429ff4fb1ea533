//! Finite stratified simplicial sets presented by their non-degenerate simplices.
//!
//! Every simplex is addressed in Eilenberg-Zilber normal form as a
//! [`NormalSimplex`]: a non-degenerate base acted on by a degeneracy operator.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::simplex_ops::{
    comp, degeneracy_operators, delta, dual as op_dual, ez_factorize, ordinal_sum, sigma,
    SimplicialOperator,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratError {
    #[error("operator with codomain [{op_cod}] cannot act on a {dim}-simplex")]
    ActionMismatch { op_cod: i32, dim: usize },
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("parameters out of range: {0}")]
    RangeError(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A simplex `base·degen` with `base` non-degenerate and `degen` a degeneracy operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalSimplex {
    pub base: usize,
    pub degen: SimplicialOperator,
}

impl NormalSimplex {
    pub fn nondegenerate(base: usize, dim: usize) -> Self {
        NormalSimplex { base, degen: SimplicialOperator::identity(dim as i32) }
    }

    pub fn dim(&self) -> usize {
        self.degen.dom() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degen.is_identity()
    }

    pub fn degenerate_at(&self, k: usize) -> bool {
        self.degen.degenerate_at(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexData {
    pub dim: usize,
    pub thin: bool,
    /// `faces[i] = x·δ_i` in normal form; empty for vertices.
    pub faces: Vec<NormalSimplex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedComplex {
    dim_bound: usize,
    simplices: Vec<SimplexData>,
    /// Per simplex, its face along each injective operator keyed by image bitmask.
    face_table: Vec<Vec<NormalSimplex>>,
    by_dim: Vec<Vec<usize>>,
}

impl StratifiedComplex {
    pub fn new(dim_bound: usize, simplices: Vec<SimplexData>) -> Result<Self, StratError> {
        let count = simplices.len();
        let mut by_dim = vec![Vec::new(); dim_bound + 1];
        for (id, s) in simplices.iter().enumerate() {
            if s.dim > dim_bound {
                return Err(StratError::Invalid(format!("simplex {id} has dim {} above bound {dim_bound}", s.dim)));
            }
            if s.dim == 0 {
                if s.thin {
                    return Err(StratError::Invalid(format!("vertex {id} is thin")));
                }
                if !s.faces.is_empty() {
                    return Err(StratError::Invalid(format!("vertex {id} has faces")));
                }
            } else if s.faces.len() != s.dim + 1 {
                return Err(StratError::Invalid(format!("simplex {id} needs {} faces", s.dim + 1)));
            }
            for (i, f) in s.faces.iter().enumerate() {
                if f.base >= count {
                    return Err(StratError::Invalid(format!("face {i} of {id} names unknown simplex {}", f.base)));
                }
                let base_dim = simplices[f.base].dim as i32;
                if f.dim() + 1 != s.dim || f.degen.cod() != base_dim || !f.degen.is_degeneracy() {
                    return Err(StratError::Invalid(format!("face {i} of {id} is not a normal {}-simplex", s.dim - 1)));
                }
            }
            by_dim[s.dim].push(id);
        }
        let mut complex = StratifiedComplex { dim_bound, simplices, face_table: vec![Vec::new(); count], by_dim };
        complex.build_face_tables()?;
        Ok(complex)
    }

    fn build_face_tables(&mut self) -> Result<(), StratError> {
        for d in 0..=self.dim_bound {
            for idx in 0..self.by_dim[d].len() {
                let id = self.by_dim[d][idx];
                let full = (1usize << (d + 1)) - 1;
                let placeholder = NormalSimplex::nondegenerate(id, d);
                let mut table = vec![placeholder.clone(); full + 1];
                for mask in (1..full).rev() {
                    let mut found: Option<NormalSimplex> = None;
                    for i in (0..=d).filter(|i| mask & (1 << i) == 0) {
                        // face along mask = (x·δ_i)·f' where f' has the image of mask in [d-1]
                        let low = mask & ((1 << i) - 1);
                        let high = (mask >> (i + 1)) << i;
                        let sub = image_operator(low | high, d - 1);
                        let val = self.act_unchecked(&self.simplices[id].faces[i], &sub);
                        match &found {
                            None => found = Some(val),
                            Some(prev) if *prev != val => {
                                return Err(StratError::Invalid(format!(
                                    "simplicial identities fail on simplex {id} for face mask {mask:b}"
                                )))
                            }
                            _ => {}
                        }
                    }
                    table[mask] = found.expect("proper masks omit some vertex");
                }
                self.face_table[id] = table;
            }
        }
        Ok(())
    }

    pub(crate) fn act_unchecked(&self, s: &NormalSimplex, alpha: &SimplicialOperator) -> NormalSimplex {
        let composite = comp(&s.degen, alpha);
        let (f, d) = ez_factorize(&composite);
        let hit = &self.face_table[s.base][f.image_mask() as usize];
        NormalSimplex { base: hit.base, degen: comp(&hit.degen, &d) }
    }

    pub fn empty() -> Self {
        StratifiedComplex { dim_bound: 0, simplices: Vec::new(), face_table: Vec::new(), by_dim: vec![Vec::new()] }
    }

    pub fn dim_bound(&self) -> usize {
        self.dim_bound
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &SimplexData {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[SimplexData] {
        &self.simplices
    }

    /// Non-degenerate simplices of dimension `d`.
    pub fn ids_of_dim(&self, d: usize) -> &[usize] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertices(&self) -> &[usize] {
        self.ids_of_dim(0)
    }

    pub fn nondegenerate(&self, id: usize) -> NormalSimplex {
        NormalSimplex::nondegenerate(id, self.simplices[id].dim)
    }

    pub fn is_thin(&self, s: &NormalSimplex) -> bool {
        s.is_degenerate() || self.simplices[s.base].thin
    }

    pub fn thin_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.simplices[i].thin).collect()
    }

    /// `s·α`, in normal form.
    pub fn act(&self, s: &NormalSimplex, alpha: &SimplicialOperator) -> Result<NormalSimplex, StratError> {
        if alpha.cod() != s.dim() as i32 || alpha.dom() < 0 {
            return Err(StratError::ActionMismatch { op_cod: alpha.cod(), dim: s.dim() });
        }
        Ok(self.act_unchecked(s, alpha))
    }

    pub fn face(&self, s: &NormalSimplex, i: usize) -> NormalSimplex {
        self.act_unchecked(s, &delta(s.dim(), i))
    }

    pub fn degeneracy(&self, s: &NormalSimplex, i: usize) -> NormalSimplex {
        self.act_unchecked(s, &sigma(s.dim(), i))
    }

    /// The face of the non-degenerate simplex `id` spanned by the vertex bitmask `mask`.
    pub fn face_by_mask(&self, id: usize, mask: usize) -> &NormalSimplex {
        &self.face_table[id][mask]
    }

    /// Every simplex of dimension `d`, degenerate ones included.
    pub fn all_simplices(&self, d: usize) -> Vec<NormalSimplex> {
        let mut out = Vec::new();
        for e in 0..=d.min(self.dim_bound) {
            let degens = degeneracy_operators(d as i32, e as i32);
            for &b in self.ids_of_dim(e) {
                for g in &degens {
                    out.push(NormalSimplex { base: b, degen: g.clone() });
                }
            }
        }
        out
    }

    /// Ids of the vertices of a simplex, in order.
    pub fn vertex_list(&self, s: &NormalSimplex) -> Vec<usize> {
        (0..=s.dim())
            .map(|i| {
                let v = SimplicialOperator::new(s.dim() as i32, vec![i]).expect("vertex in range");
                self.act_unchecked(s, &v).base
            })
            .collect()
    }

    /// Copy with the thin flags replaced.
    pub fn with_thin(&self, thin: &[bool]) -> Result<Self, StratError> {
        if thin.len() != self.len() {
            return Err(StratError::Invalid("thin flag count mismatch".into()));
        }
        let mut out = self.clone();
        for (id, &t) in thin.iter().enumerate() {
            if t && out.simplices[id].dim == 0 {
                return Err(StratError::Invalid(format!("vertex {id} is thin")));
            }
            out.simplices[id].thin = t;
        }
        Ok(out)
    }

    /// Sub-complex on `keep`, which must be closed under faces. Returns the old-to-new id map.
    pub fn restrict(&self, keep: &[bool]) -> Result<(Self, Vec<Option<usize>>), StratError> {
        let mut remap = vec![None; self.len()];
        let mut next = 0;
        for id in 0..self.len() {
            if keep[id] {
                remap[id] = Some(next);
                next += 1;
            }
        }
        let mut simplices = Vec::with_capacity(next);
        for id in (0..self.len()).filter(|&i| keep[i]) {
            let s = &self.simplices[id];
            let faces = s
                .faces
                .iter()
                .map(|f| {
                    remap[f.base]
                        .map(|b| NormalSimplex { base: b, degen: f.degen.clone() })
                        .ok_or_else(|| StratError::Invalid(format!("restriction drops face {} of {id}", f.base)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            simplices.push(SimplexData { dim: s.dim, thin: s.thin, faces });
        }
        Ok((StratifiedComplex::new(self.dim_bound, simplices)?, remap))
    }

    /// Re-runs the simplicial identity audit on a complex.
    pub fn audit(&self) -> Result<(), StratError> {
        StratifiedComplex::new(self.dim_bound, self.simplices.clone()).map(|_| ())
    }
}

/// The face operator `[k] -> [d]` with the given image bitmask.
pub(crate) fn image_operator(mask: usize, d: usize) -> SimplicialOperator {
    let values: Vec<usize> = (0..=d).filter(|i| mask & (1 << i) != 0).collect();
    SimplicialOperator::new(d as i32, values).expect("increasing values")
}

/// A simplicial set given by functions on its simplices, used to build complexes.
pub trait SimplicialModel {
    type Simplex: Clone + Eq + Hash + Ord;
    /// A superset of the non-degenerate simplices of dimension `d`.
    fn candidates(&self, d: usize) -> Vec<Self::Simplex>;
    fn face(&self, s: &Self::Simplex, i: usize) -> Self::Simplex;
    /// `s·σ_i`.
    fn degeneracy(&self, s: &Self::Simplex, i: usize) -> Self::Simplex;
    fn is_thin(&self, s: &Self::Simplex) -> bool;
}

/// A complex together with the model simplices behind its ids.
#[derive(Debug, Clone)]
pub struct Labelled<S: Clone + Eq + Hash> {
    pub complex: StratifiedComplex,
    pub labels: Vec<S>,
    pub index: HashMap<S, usize>,
}

impl<S: Clone + Eq + Hash> Labelled<S> {
    pub fn id_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }
}

fn model_is_degenerate_at<M: SimplicialModel>(model: &M, s: &M::Simplex, i: usize) -> bool {
    model.degeneracy(&model.face(s, i), i) == *s
}

fn model_normal_form<M: SimplicialModel>(
    model: &M,
    index: &HashMap<M::Simplex, usize>,
    s: &M::Simplex,
    dim: usize,
) -> Result<NormalSimplex, StratError> {
    for i in 0..dim {
        if model_is_degenerate_at(model, s, i) {
            let inner = model_normal_form(model, index, &model.face(s, i), dim - 1)?;
            return Ok(NormalSimplex { base: inner.base, degen: comp(&inner.degen, &sigma(dim - 1, i)) });
        }
    }
    index
        .get(s)
        .map(|&b| NormalSimplex::nondegenerate(b, dim))
        .ok_or_else(|| StratError::Invalid(format!("non-degenerate {dim}-simplex outside the enumerated range")))
}

/// Builds the complex of non-degenerate simplices of `model` up to `dim_bound`.
pub fn from_model<M: SimplicialModel>(model: &M, dim_bound: usize) -> Result<Labelled<M::Simplex>, StratError> {
    let mut labels: Vec<M::Simplex> = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=dim_bound {
        let mut nd: Vec<M::Simplex> =
            model.candidates(d).into_iter().filter(|s| (0..d).all(|i| !model_is_degenerate_at(model, s, i))).collect();
        nd.sort();
        nd.dedup();
        dims.extend(std::iter::repeat(d).take(nd.len()));
        labels.extend(nd);
    }
    let index: HashMap<M::Simplex, usize> = labels.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut simplices = Vec::with_capacity(labels.len());
    for (s, &d) in labels.iter().zip(&dims) {
        let faces = if d == 0 {
            Vec::new()
        } else {
            (0..=d).map(|i| model_normal_form(model, &index, &model.face(s, i), d - 1)).collect::<Result<_, _>>()?
        };
        simplices.push(SimplexData { dim: d, thin: d > 0 && model.is_thin(s), faces });
    }
    let complex = StratifiedComplex::new(dim_bound, simplices)?;
    Ok(Labelled { complex, labels, index })
}

/// Normal form of an arbitrary model simplex against a built complex.
pub fn normal_form_in<M: SimplicialModel>(
    model: &M,
    built: &Labelled<M::Simplex>,
    s: &M::Simplex,
    dim: usize,
) -> Result<NormalSimplex, StratError> {
    model_normal_form(model, &built.index, s, dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Standard {
    Delta(usize),
    DeltaT(usize),
    Boundary(usize),
    Horn(usize, usize),
    Adm(usize, usize),
    AdmHorn(usize, usize),
    AdmPrime(usize, usize),
    AdmDprime(usize, usize),
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// The complex of the given subsets of `[n]`, with simplices ordered by (dim, vertex list).
pub fn from_subsets(n: usize, include: impl Fn(u64) -> bool, thin: impl Fn(u64) -> bool) -> Result<(StratifiedComplex, Vec<u64>), StratError> {
    let mut masks: Vec<u64> = (1..(1u64 << (n + 1))).filter(|&m| include(m)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), mask_vertices(m)));
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut simplices = Vec::with_capacity(masks.len());
    for &m in &masks {
        let verts = mask_vertices(m);
        let d = verts.len() - 1;
        let faces = if d == 0 {
            Vec::new()
        } else {
            verts
                .iter()
                .map(|&v| {
                    index
                        .get(&(m & !(1 << v)))
                        .map(|&b| NormalSimplex::nondegenerate(b, d - 1))
                        .ok_or_else(|| StratError::Invalid("subset family not closed under faces".into()))
                })
                .collect::<Result<_, _>>()?
        };
        simplices.push(SimplexData { dim: d, thin: d > 0 && thin(m), faces });
    }
    Ok((StratifiedComplex::new(n, simplices)?, masks))
}

fn divided(m: u64, k: usize) -> bool {
    let need = 0b111u64 << (k - 1);
    m & need == need
}

pub fn standard(kind: Standard) -> Result<StratifiedComplex, StratError> {
    standard_with_masks(kind).map(|(c, _)| c)
}

/// A standard object with the vertex bitmask of each of its simplices.
pub fn standard_with_masks(kind: Standard) -> Result<(StratifiedComplex, Vec<u64>), StratError> {
    let admissible = |n: usize, k: usize| {
        if n < 2 || k < 1 || k >= n {
            Err(StratError::RangeError(format!("admissible objects need n >= 2 and 1 <= k < n, got n={n} k={k}")))
        } else {
            Ok(())
        }
    };
    match kind {
        Standard::Delta(n) => from_subsets(n, |_| true, |_| false),
        Standard::DeltaT(n) => {
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, |_| true, move |m| m == top)
        }
        Standard::Boundary(n) => {
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, move |m| m != top, |_| false)
        }
        Standard::Horn(n, k) => {
            if n < 1 || k > n {
                return Err(StratError::RangeError(format!("horn needs n >= 1 and k <= n, got n={n} k={k}")));
            }
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, move |m| m != top && m != top & !(1 << k), |_| false)
        }
        Standard::Adm(n, k) => {
            admissible(n, k)?;
            from_subsets(n, |_| true, move |m| divided(m, k))
        }
        Standard::AdmHorn(n, k) => {
            admissible(n, k)?;
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, move |m| m != top && m != top & !(1 << k), move |m| divided(m, k))
        }
        Standard::AdmPrime(n, k) => {
            admissible(n, k)?;
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, |_| true, move |m| {
                divided(m, k) || m == top & !(1 << (k - 1)) || m == top & !(1 << (k + 1))
            })
        }
        Standard::AdmDprime(n, k) => {
            admissible(n, k)?;
            let top = (1u64 << (n + 1)) - 1;
            from_subsets(n, |_| true, move |m| {
                divided(m, k)
                    || m == top & !(1 << (k - 1))
                    || m == top & !(1 << (k + 1))
                    || m == top & !(1 << k)
            })
        }
    }
}

/// The dual complex, acting by `x * α = x·α°`.
pub fn dual(x: &StratifiedComplex) -> StratifiedComplex {
    let simplices = x
        .simplices
        .iter()
        .map(|s| SimplexData {
            dim: s.dim,
            thin: s.thin,
            faces: (0..s.faces.len())
                .map(|i| {
                    let f = &s.faces[s.dim - i];
                    NormalSimplex { base: f.base, degen: op_dual(&f.degen) }
                })
                .collect(),
        })
        .collect();
    StratifiedComplex::new(x.dim_bound, simplices).expect("duals of valid complexes are valid")
}

/// Thin everything above dimension `n`.
pub fn th(x: &StratifiedComplex, n: usize) -> StratifiedComplex {
    let thin: Vec<bool> = x.simplices.iter().map(|s| s.thin || s.dim > n).collect();
    x.with_thin(&thin).expect("only positive dimensions are thinned")
}

/// The simplices all of whose faces above dimension `n` are thin.
pub fn sup(x: &StratifiedComplex, n: usize) -> StratifiedComplex {
    let keep: Vec<bool> = (0..x.len())
        .map(|id| {
            let d = x.simplices[id].dim;
            (1..(1usize << (d + 1))).all(|mask| {
                let f = x.face_by_mask(id, mask);
                f.dim() <= n || x.is_thin(f)
            })
        })
        .collect();
    x.restrict(&keep).expect("superstructures are closed under faces").0
}

/// Connected components as the minimal vertex id of each component, plus the component of each vertex.
pub fn components(x: &StratifiedComplex) -> (Vec<usize>, HashMap<usize, usize>) {
    let mut uf = UnionFind::<usize>::new(x.len());
    for &e in x.ids_of_dim(1) {
        let f = &x.simplices[e].faces;
        uf.union(f[0].base, f[1].base);
    }
    let mut rep_min: HashMap<usize, usize> = HashMap::new();
    for &v in x.vertices() {
        let root = uf.find(v);
        let entry = rep_min.entry(root).or_insert(v);
        *entry = (*entry).min(v);
    }
    let of_vertex: HashMap<usize, usize> = x.vertices().iter().map(|&v| (v, rep_min[&uf.find(v)])).collect();
    let mut reps: Vec<usize> = rep_min.into_values().collect();
    reps.sort_unstable();
    (reps, of_vertex)
}

pub fn pi0(x: &StratifiedComplex) -> Vec<usize> {
    components(x).0
}

/// A simplicial map given on non-degenerate simplices.
#[derive(Debug, Clone)]
pub struct StratifiedMap<'a> {
    pub source: &'a StratifiedComplex,
    pub target: &'a StratifiedComplex,
    pub images: Vec<NormalSimplex>,
}

impl<'a> StratifiedMap<'a> {
    pub fn new(source: &'a StratifiedComplex, target: &'a StratifiedComplex, images: Vec<NormalSimplex>) -> Result<Self, StratError> {
        if images.len() != source.len() {
            return Err(StratError::InvalidMap("one image per source simplex required".into()));
        }
        let map = StratifiedMap { source, target, images };
        for id in 0..source.len() {
            let s = &source.simplices[id];
            let img = &map.images[id];
            if img.base >= target.len() || img.degen.cod() != target.simplices[img.base].dim as i32 || !img.degen.is_degeneracy() {
                return Err(StratError::InvalidMap(format!("image of {id} is not a normal simplex")));
            }
            if img.dim() != s.dim {
                return Err(StratError::InvalidMap(format!("image of {id} has the wrong dimension")));
            }
            for (i, f) in s.faces.iter().enumerate() {
                if map.apply(f) != target.face(img, i) {
                    return Err(StratError::InvalidMap(format!("face {i} of {id} does not commute")));
                }
            }
            if s.thin && !target.is_thin(img) {
                return Err(StratError::InvalidMap(format!("thin simplex {id} maps to a non-thin simplex")));
            }
        }
        Ok(map)
    }

    pub fn identity(x: &'a StratifiedComplex) -> Self {
        StratifiedMap { source: x, target: x, images: (0..x.len()).map(|i| x.nondegenerate(i)).collect() }
    }

    pub fn apply(&self, s: &NormalSimplex) -> NormalSimplex {
        self.target.act_unchecked(&self.images[s.base], &s.degen)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapClass {
    /// Reflects thin simplices.
    pub regular: bool,
    /// Surjective on simplices.
    pub entire: bool,
    /// Injective on simplices.
    pub inclusion: bool,
}

impl MapClass {
    pub fn is_iso(&self) -> bool {
        self.regular && self.entire && self.inclusion
    }
}

pub fn classify_map(f: &StratifiedMap<'_>) -> MapClass {
    let regular = (0..f.source.len()).all(|id| f.source.simplices[id].thin || !f.target.is_thin(&f.images[id]));
    let mut hit = vec![false; f.target.len()];
    let mut inclusion = true;
    for img in &f.images {
        if img.is_degenerate() || hit[img.base] {
            inclusion = false;
        } else {
            hit[img.base] = true;
        }
    }
    MapClass { regular, entire: hit.iter().all(|&h| h), inclusion }
}

/// The map between two complexes whose simplices are determined by their vertex lists,
/// sending each simplex to the one with the same vertex ids.
pub fn map_by_vertices<'a>(
    source: &'a StratifiedComplex,
    target: &'a StratifiedComplex,
    vertex_map: &[usize],
) -> Result<StratifiedMap<'a>, StratError> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for id in 0..target.len() {
        index.insert(target.vertex_list(&target.nondegenerate(id)), id);
    }
    let images = (0..source.len())
        .map(|id| {
            let verts: Vec<usize> = source.vertex_list(&source.nondegenerate(id)).iter().map(|&v| vertex_map[v]).collect();
            let mut distinct = verts.clone();
            distinct.dedup();
            let base = *index
                .get(&distinct)
                .ok_or_else(|| StratError::InvalidMap(format!("no target simplex on vertices {distinct:?}")))?;
            let mut degen = Vec::with_capacity(verts.len());
            let mut rank = 0;
            for (i, v) in verts.iter().enumerate() {
                if i > 0 && verts[i - 1] != *v {
                    rank += 1;
                }
                degen.push(rank);
            }
            Ok(NormalSimplex {
                base,
                degen: SimplicialOperator::new(distinct.len() as i32 - 1, degen).expect("monotone ranks"),
            })
        })
        .collect::<Result<Vec<_>, StratError>>()?;
    StratifiedMap::new(source, target, images)
}

fn fingerprint(x: &StratifiedComplex, rounds: usize) -> Vec<u64> {
    let hash = |v: &dyn Fn(&mut DefaultHasher)| {
        let mut h = DefaultHasher::new();
        v(&mut h);
        h.finish()
    };
    let mut cofaces: Vec<Vec<(usize, usize)>> = vec![Vec::new(); x.len()];
    for (id, s) in x.simplices.iter().enumerate() {
        for (i, f) in s.faces.iter().enumerate() {
            cofaces[f.base].push((i, id));
        }
    }
    let mut sig: Vec<u64> = x
        .simplices
        .iter()
        .map(|s| {
            hash(&|h| {
                (s.dim, s.thin).hash(h);
                for f in &s.faces {
                    f.degen.hash(h);
                }
            })
        })
        .collect();
    for _ in 0..rounds {
        sig = (0..x.len())
            .map(|id| {
                let mut down: Vec<(usize, u64)> = x.simplices[id].faces.iter().enumerate().map(|(i, f)| (i, sig[f.base])).collect();
                down.sort_unstable();
                let mut up: Vec<(usize, u64)> = cofaces[id].iter().map(|&(i, c)| (i, sig[c])).collect();
                up.sort_unstable();
                hash(&|h| {
                    sig[id].hash(h);
                    down.hash(h);
                    up.hash(h);
                })
            })
            .collect();
    }
    sig
}

/// A dimension-, face- and thinness-preserving bijection of non-degenerate simplices, if any.
pub fn find_isomorphism(x: &StratifiedComplex, y: &StratifiedComplex) -> Option<Vec<usize>> {
    if x.len() != y.len() {
        return None;
    }
    let sx = fingerprint(x, 3);
    let sy = fingerprint(y, 3);
    let mut cx = sx.clone();
    let mut cy = sy.clone();
    cx.sort_unstable();
    cy.sort_unstable();
    if cx != cy {
        return None;
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(x.simplices[i].dim), i));
    let mut mapping: Vec<Option<usize>> = vec![None; x.len()];
    let mut used = vec![false; y.len()];

    fn assign(
        x: &StratifiedComplex,
        y: &StratifiedComplex,
        a: usize,
        b: usize,
        sx: &[u64],
        sy: &[u64],
        mapping: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        trail: &mut Vec<usize>,
    ) -> bool {
        match mapping[a] {
            Some(existing) => return existing == b,
            None => {
                if used[b] || sx[a] != sy[b] {
                    return false;
                }
            }
        }
        mapping[a] = Some(b);
        used[b] = true;
        trail.push(a);
        let fa = &x.simplices[a].faces;
        let fb = &y.simplices[b].faces;
        for (p, q) in fa.iter().zip(fb) {
            if p.degen != q.degen || !assign(x, y, p.base, q.base, sx, sy, mapping, used, trail) {
                return false;
            }
        }
        true
    }

    fn search(
        x: &StratifiedComplex,
        y: &StratifiedComplex,
        order: &[usize],
        pos: usize,
        sx: &[u64],
        sy: &[u64],
        mapping: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&a) = order[pos..].iter().find(|&&a| mapping[a].is_none()) else {
            return true;
        };
        for b in 0..y.len() {
            if used[b] || sy[b] != sx[a] {
                continue;
            }
            let mut trail = Vec::new();
            let ok = assign(x, y, a, b, sx, sy, mapping, used, &mut trail);
            if ok && search(x, y, order, pos, sx, sy, mapping, used) {
                return true;
            }
            for t in trail {
                used[mapping[t].unwrap()] = false;
                mapping[t] = None;
            }
        }
        false
    }

    if search(x, y, &order, 0, &sx, &sy, &mut mapping, &mut used) {
        Some(mapping.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

pub fn is_isomorphic(x: &StratifiedComplex, y: &StratifiedComplex) -> bool {
    find_isomorphism(x, y).is_some()
}

/// The categorical product, labelled by pairs of normal simplices.
pub type ProductComplex = Labelled<(NormalSimplex, NormalSimplex)>;

struct ProductModel<'a> {
    x: &'a StratifiedComplex,
    y: &'a StratifiedComplex,
}

impl SimplicialModel for ProductModel<'_> {
    type Simplex = (NormalSimplex, NormalSimplex);

    fn candidates(&self, d: usize) -> Vec<Self::Simplex> {
        let xs = self.x.all_simplices(d);
        let ys = self.y.all_simplices(d);
        let mut out = Vec::new();
        for a in &xs {
            for b in &ys {
                if (0..d).all(|k| !(a.degenerate_at(k) && b.degenerate_at(k))) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    fn face(&self, s: &Self::Simplex, i: usize) -> Self::Simplex {
        (self.x.face(&s.0, i), self.y.face(&s.1, i))
    }

    fn degeneracy(&self, s: &Self::Simplex, i: usize) -> Self::Simplex {
        (self.x.degeneracy(&s.0, i), self.y.degeneracy(&s.1, i))
    }

    fn is_thin(&self, s: &Self::Simplex) -> bool {
        self.x.is_thin(&s.0) && self.y.is_thin(&s.1)
    }
}

/// `X × Y`, thin where both coordinates are thin.
pub fn product(x: &StratifiedComplex, y: &StratifiedComplex) -> ProductComplex {
    let bound = if x.is_empty() || y.is_empty() { 0 } else { x.dim_bound + y.dim_bound };
    from_model(&ProductModel { x, y }, bound).expect("products of valid complexes are valid")
}

impl ProductComplex {
    /// The normal form of the pair `⟨a;b⟩` of equal-dimensional simplices.
    pub fn pair(&self, a: &NormalSimplex, b: &NormalSimplex) -> Option<NormalSimplex> {
        let r = a.dim();
        let collapse: Vec<usize> = (0..r).filter(|&k| a.degenerate_at(k) && b.degenerate_at(k)).collect();
        let mut rho = Vec::with_capacity(r + 1);
        let mut section = Vec::new();
        let mut level = 0;
        for i in 0..=r {
            if i > 0 && !collapse.contains(&(i - 1)) {
                level += 1;
            }
            if rho.last() != Some(&level) || i == 0 {
                section.push(i);
            }
            rho.push(level);
        }
        let top = level as i32;
        let sec = SimplicialOperator::new(r as i32, section).ok()?;
        let rho = SimplicialOperator::new(top, rho).ok()?;
        let key = (act_any(a, &sec), act_any(b, &sec));
        let base = self.id_of(&key)?;
        Some(NormalSimplex { base, degen: rho })
    }
}

fn act_any(s: &NormalSimplex, f: &SimplicialOperator) -> NormalSimplex {
    // sections of degeneracies only delete repeated vertices, so the base is unchanged
    let composite = comp(&s.degen, f);
    NormalSimplex { base: s.base, degen: composite }
}

/// `Dec(X)` with the `X`-simplex behind each of its simplices.
#[derive(Debug, Clone)]
pub struct Decalage {
    pub complex: StratifiedComplex,
    /// `labels[id]` is the `(dim+1)`-simplex of `X` underlying `id`.
    pub labels: Vec<NormalSimplex>,
}

struct DecModel<'a> {
    x: &'a StratifiedComplex,
}

impl SimplicialModel for DecModel<'_> {
    type Simplex = NormalSimplex;

    fn candidates(&self, d: usize) -> Vec<NormalSimplex> {
        self.x.all_simplices(d + 1).into_iter().filter(|s| (1..=d).all(|k| !s.degenerate_at(k))).collect()
    }

    fn face(&self, s: &NormalSimplex, i: usize) -> NormalSimplex {
        self.x.face(s, i + 1)
    }

    fn degeneracy(&self, s: &NormalSimplex, i: usize) -> NormalSimplex {
        self.x.degeneracy(s, i + 1)
    }

    fn is_thin(&self, _: &NormalSimplex) -> bool {
        false
    }
}

/// `Dec(X)_n = X_{n+1}` with the extra vertex at the bottom; minimally stratified.
pub fn decalage(x: &StratifiedComplex) -> Decalage {
    let built = from_model(&DecModel { x }, x.dim_bound).expect("decalage of a valid complex is valid");
    Decalage { complex: built.complex, labels: built.labels }
}

impl Decalage {
    /// The `X`-simplex underlying an arbitrary simplex of `Dec(X)`.
    pub fn underlying(&self, x: &StratifiedComplex, s: &NormalSimplex) -> NormalSimplex {
        let shifted = ordinal_sum(&s.degen, &SimplicialOperator::identity(0));
        x.act_unchecked(&self.labels[s.base], &shifted)
    }
}

/// The counit `Dec(X) -> X`, deleting the extra bottom vertex.
pub fn dec_counit<'a>(dec: &'a Decalage, x: &'a StratifiedComplex) -> StratifiedMap<'a> {
    let images = dec.labels.iter().map(|z| x.face(z, 0)).collect();
    StratifiedMap::new(&dec.complex, x, images).expect("the counit is simplicial")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecReconstruction {
    pub n: usize,
    pub components: usize,
    pub simplices: usize,
    pub well_defined: bool,
    pub bijective: bool,
}

impl DecReconstruction {
    pub fn passed(&self) -> bool {
        self.well_defined && self.bijective
    }
}

/// Compares `π0(Dec^{n+1} X)` with `X_n` through the top face map.
pub fn dec_reconstruction(x: &StratifiedComplex, n: usize) -> DecReconstruction {
    let mut current = x.clone();
    let mut lift: Vec<NormalSimplex> = (0..x.len()).map(|i| x.nondegenerate(i)).collect();
    for k in 0..=n {
        let dec = decalage(&current);
        // an operator on Dec^k X acts on X on the upper block, the k extra vertices sit below
        let lower = SimplicialOperator::identity(k as i32 - 1);
        lift = dec.labels.iter().map(|z| x.act_unchecked(&lift[z.base], &ordinal_sum(&z.degen, &lower))).collect();
        current = dec.complex;
    }
    let (_, of_vertex) = components(&current);
    let mut class_image: HashMap<usize, NormalSimplex> = HashMap::new();
    let mut well_defined = true;
    for &v in current.vertices() {
        let top = x.face(&lift[v], n + 1);
        match class_image.get(&of_vertex[&v]) {
            Some(prev) if *prev != top => well_defined = false,
            Some(_) => {}
            None => {
                class_image.insert(of_vertex[&v], top);
            }
        }
    }
    let targets = x.all_simplices(n);
    let mut images: Vec<&NormalSimplex> = class_image.values().collect();
    images.sort();
    images.dedup();
    let bijective = well_defined && images.len() == class_image.len() && images.len() == targets.len();
    DecReconstruction { n, components: class_image.len(), simplices: targets.len(), well_defined, bijective }
}

/// Serialises a complex in SPC text form.
pub fn write_spc(x: &StratifiedComplex) -> String {
    let mut out = format!("spc 1 dim={}\n", x.dim_bound);
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&i| (x.simplices[i].dim, i));
    for &id in &order {
        let s = &x.simplices[id];
        let _ = writeln!(out, "simplex {id} dim={} thin={}", s.dim, u8::from(s.thin));
    }
    for id in 0..x.len() {
        for (i, f) in x.simplices[id].faces.iter().enumerate() {
            let _ = write!(out, "face {id} {i} = {}", f.base);
            if f.is_degenerate() {
                out.push_str(" deg:");
                for v in f.degen.values() {
                    let _ = write!(out, " {v}");
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Parses SPC text; ids must be dense `0..N`.
pub fn parse_spc(text: &str) -> Result<StratifiedComplex, StratError> {
    let err = |line: usize, msg: &str| StratError::Parse { line, msg: msg.to_string() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let dim_bound: usize = header
        .strip_prefix("spc 1 dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| err(ln, "expected header `spc 1 dim=<d>`"))?;
    let mut decl: Vec<Option<(usize, bool)>> = Vec::new();
    let mut faces: HashMap<(usize, usize), (usize, Option<Vec<usize>>, usize)> = HashMap::new();
    for (ln, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            Some(&"simplex") => {
                if words.len() != 4 {
                    return Err(err(ln, "expected `simplex <id> dim=<d> thin=<0|1>`"));
                }
                let id: usize = words[1].parse().map_err(|_| err(ln, "bad simplex id"))?;
                let dim: usize = words[2].strip_prefix("dim=").and_then(|d| d.parse().ok()).ok_or_else(|| err(ln, "bad dim"))?;
                let thin = match words[3] {
                    "thin=0" => false,
                    "thin=1" => true,
                    _ => return Err(err(ln, "bad thin flag")),
                };
                if decl.len() <= id {
                    decl.resize(id + 1, None);
                }
                if decl[id].is_some() {
                    return Err(err(ln, "duplicate simplex id"));
                }
                decl[id] = Some((dim, thin));
            }
            Some(&"face") => {
                if words.len() < 5 || words[3] != "=" {
                    return Err(err(ln, "expected `face <id> <i> = <id'> [deg: ...]`"));
                }
                let id: usize = words[1].parse().map_err(|_| err(ln, "bad simplex id"))?;
                let i: usize = words[2].parse().map_err(|_| err(ln, "bad face index"))?;
                let target: usize = words[4].parse().map_err(|_| err(ln, "bad face target"))?;
                let degen = match words.get(5) {
                    None => None,
                    Some(&"deg:") => Some(
                        words[6..].iter().map(|w| w.parse().map_err(|_| err(ln, "bad degeneracy value"))).collect::<Result<Vec<usize>, _>>()?,
                    ),
                    Some(_) => return Err(err(ln, "expected `deg:`")),
                };
                if faces.insert((id, i), (target, degen, ln)).is_some() {
                    return Err(err(ln, "duplicate face"));
                }
            }
            _ => return Err(err(ln, "unknown record")),
        }
    }
    let mut simplices = Vec::with_capacity(decl.len());
    for (id, d) in decl.iter().enumerate() {
        let (dim, thin) = d.ok_or_else(|| err(0, &format!("simplex ids are not dense: {id} missing")))?;
        simplices.push(SimplexData { dim, thin, faces: Vec::new() });
    }
    let mut entries: Vec<_> = faces.into_iter().collect();
    entries.sort_by_key(|(_, (_, _, ln))| *ln);
    for ((id, i), (target, degen, ln)) in entries {
        if id >= simplices.len() || target >= simplices.len() {
            return Err(err(ln, "face refers to an undeclared simplex"));
        }
        let dim = simplices[id].dim;
        if dim == 0 || i > dim {
            return Err(err(ln, "face index out of range"));
        }
        let tdim = simplices[target].dim as i32;
        let op = match degen {
            None => SimplicialOperator::identity(tdim),
            Some(v) => SimplicialOperator::new(tdim, v).map_err(|e| err(ln, &e.to_string()))?,
        };
        if op.dom() as usize + 1 != dim {
            return Err(err(ln, "face has the wrong dimension"));
        }
        let faces = &mut simplices[id].faces;
        if faces.len() <= i {
            faces.resize(i + 1, NormalSimplex::nondegenerate(usize::MAX, 0));
        }
        faces[i] = NormalSimplex { base: target, degen: op };
    }
    for (id, s) in simplices.iter().enumerate() {
        if s.dim > 0 && (s.faces.len() != s.dim + 1 || s.faces.iter().any(|f| f.base == usize::MAX)) {
            return Err(err(0, &format!("simplex {id} is missing faces")));
        }
    }
    StratifiedComplex::new(dim_bound, simplices)
}
