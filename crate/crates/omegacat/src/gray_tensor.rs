//! Lax Gray tensor and pre-tensor of stratified complexes, and thinness-extension witness chains.

use std::collections::HashMap;

use thiserror::Error;

use crate::complicial::admissible_under;
use crate::simplex_ops::{partition_ops, sigma};
use crate::stratified::{
    product, standard, th, NormalSimplex, ProductComplex, Standard, StratifiedComplex, StratifiedMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("simplices of dimension {x} and {y} do not form a pair")]
    DimensionMismatch { x: usize, y: usize },
    #[error("partition {p}+{q} does not match dimension {r}")]
    BadPartition { p: usize, q: usize, r: usize },
    #[error("complexes do not share an underlying simplicial set")]
    DifferentUnderlying,
    #[error("thin simplex {0} of the source is not thin in the target")]
    NotAnExtension(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorSimplexClass {
    Degenerate,
    Mediator(usize),
    CrushedCylinder(usize, usize),
    Cylinder(usize, usize),
    Other,
}

fn check_pair(x: &NormalSimplex, y: &NormalSimplex) -> Result<usize, TensorError> {
    if x.dim() != y.dim() {
        return Err(TensorError::DimensionMismatch { x: x.dim(), y: y.dim() });
    }
    Ok(x.dim())
}

fn cleaves_at(cx: &StratifiedComplex, cy: &StratifiedComplex, x: &NormalSimplex, y: &NormalSimplex, p: usize) -> bool {
    let ops = partition_ops(p, x.dim() - p);
    cx.is_thin(&cx.act_unchecked(x, &ops.inj1)) || cy.is_thin(&cy.act_unchecked(y, &ops.inj2))
}

/// Whether the partition `p+q` cleaves `⟨x;y⟩`.
pub fn cleaves(
    cx: &StratifiedComplex,
    cy: &StratifiedComplex,
    x: &NormalSimplex,
    y: &NormalSimplex,
    p: usize,
    q: usize,
) -> Result<bool, TensorError> {
    let r = check_pair(x, y)?;
    if p + q != r {
        return Err(TensorError::BadPartition { p, q, r });
    }
    Ok(cleaves_at(cx, cy, x, y, p))
}

fn tensor_thin(cx: &StratifiedComplex, cy: &StratifiedComplex, x: &NormalSimplex, y: &NormalSimplex) -> bool {
    (0..=x.dim()).all(|p| cleaves_at(cx, cy, x, y, p))
}

fn is_mediator(x: &NormalSimplex, y: &NormalSimplex, k: usize) -> bool {
    x.degenerate_at(k - 1) && y.degenerate_at(k)
}

fn is_cylinder(x: &NormalSimplex, y: &NormalSimplex, p: usize) -> bool {
    let r = x.dim();
    (p..r).all(|i| x.degenerate_at(i)) && (0..p).all(|i| y.degenerate_at(i))
}

/// Mediator, cylinder or crushed cylinder, with the smallest witness.
pub fn classify(cx: &StratifiedComplex, cy: &StratifiedComplex, x: &NormalSimplex, y: &NormalSimplex) -> Result<TensorSimplexClass, TensorError> {
    let r = check_pair(x, y)?;
    if r == 0 {
        return Ok(TensorSimplexClass::Other);
    }
    if (0..r).any(|k| x.degenerate_at(k) && y.degenerate_at(k)) {
        return Ok(TensorSimplexClass::Degenerate);
    }
    if let Some(k) = (1..r).find(|&k| is_mediator(x, y, k)) {
        return Ok(TensorSimplexClass::Mediator(k));
    }
    let cylinders: Vec<usize> = (0..=r).filter(|&p| is_cylinder(x, y, p)).collect();
    if let Some(&p) = cylinders.iter().find(|&&p| cleaves_at(cx, cy, x, y, p)) {
        return Ok(TensorSimplexClass::CrushedCylinder(p, r - p));
    }
    Ok(match cylinders.first() {
        Some(&p) => TensorSimplexClass::Cylinder(p, r - p),
        None => TensorSimplexClass::Other,
    })
}

/// Whether `⟨x;y⟩` lies on some cylinder with vertex `p` on the boundary, 0-simplices included.
pub fn cylinder_partition(x: &NormalSimplex, y: &NormalSimplex) -> Option<usize> {
    (0..=x.dim()).find(|&p| is_cylinder(x, y, p))
}

fn rethin(mut built: ProductComplex, thin: impl Fn(&NormalSimplex, &NormalSimplex) -> bool) -> ProductComplex {
    let flags: Vec<bool> = built.labels.iter().map(|(x, y)| x.dim() > 0 && thin(x, y)).collect();
    built.complex = built.complex.with_thin(&flags).expect("vertices stay non-thin");
    built
}

/// `X ⊗ Y`: a simplex is thin when every partition cleaves it.
pub fn tensor(cx: &StratifiedComplex, cy: &StratifiedComplex) -> ProductComplex {
    rethin(product(cx, cy), |x, y| tensor_thin(cx, cy, x, y))
}

fn pretensor_thin(cx: &StratifiedComplex, cy: &StratifiedComplex, x: &NormalSimplex, y: &NormalSimplex) -> bool {
    matches!(
        classify(cx, cy, x, y),
        Ok(TensorSimplexClass::Degenerate | TensorSimplexClass::Mediator(_) | TensorSimplexClass::CrushedCylinder(..))
    )
}

/// `X ⍁ Y`: thin simplices are the mediators and crushed cylinders.
pub fn pretensor(cx: &StratifiedComplex, cy: &StratifiedComplex) -> ProductComplex {
    rethin(product(cx, cy), |x, y| pretensor_thin(cx, cy, x, y))
}

/// `f × g` on products built from the given complexes.
pub fn product_map<'a>(
    f: &StratifiedMap<'_>,
    g: &StratifiedMap<'_>,
    source: &'a ProductComplex,
    target: &'a ProductComplex,
) -> Result<StratifiedMap<'a>, crate::stratified::StratError> {
    let images = source
        .labels
        .iter()
        .map(|(x, y)| {
            target
                .pair(&f.apply(x), &g.apply(y))
                .ok_or_else(|| crate::stratified::StratError::InvalidMap("pair outside the target product".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    StratifiedMap::new(&source.complex, &target.complex, images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub dim: usize,
    pub thin: usize,
    pub non_thin: usize,
    pub mediator: usize,
    pub crushed_cylinder: usize,
}

/// Per-dimension counts for `Δ[n] ⊗ Δ[m]` or `Δ[n] ⍁ Δ[m]`.
pub fn tensor_table(n: usize, m: usize, pre: bool) -> Vec<TableRow> {
    let dn = standard(Standard::Delta(n)).expect("valid");
    let dm = standard(Standard::Delta(m)).expect("valid");
    let built = if pre { pretensor(&dn, &dm) } else { tensor(&dn, &dm) };
    (0..=built.complex.dim_bound())
        .map(|d| {
            let mut row = TableRow { dim: d, thin: 0, non_thin: 0, mediator: 0, crushed_cylinder: 0 };
            for &id in built.complex.ids_of_dim(d) {
                if built.complex.simplex(id).thin {
                    row.thin += 1;
                } else {
                    row.non_thin += 1;
                }
                let (x, y) = &built.labels[id];
                match classify(&dn, &dm, x, y).expect("pairs share a dimension") {
                    TensorSimplexClass::Mediator(_) => row.mediator += 1,
                    TensorSimplexClass::CrushedCylinder(..) => row.crushed_cylinder += 1,
                    _ => {}
                }
            }
            row
        })
        .collect()
}

/// One thinning step: `simplex` becomes thin as face `k` of `witness`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub simplex: usize,
    pub witness: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainOutcome {
    Success(Vec<ChainStep>),
    /// No witness was found for `remaining`; this does not refute the extension.
    Undecided { found: Vec<ChainStep>, remaining: Vec<usize> },
}

impl ChainOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, ChainOutcome::Success(_))
    }
}

fn same_underlying(x: &StratifiedComplex, y: &StratifiedComplex) -> bool {
    x.len() == y.len()
        && x.dim_bound() == y.dim_bound()
        && x.simplices().iter().zip(y.simplices()).all(|(a, b)| a.dim == b.dim && a.faces == b.faces)
}

fn witness_ok(cx: &StratifiedComplex, thin: &[bool], w: usize, k: usize) -> bool {
    let top = cx.nondegenerate(w);
    let side = |i: usize| {
        let f = cx.face(&top, i);
        f.is_degenerate() || thin[f.base]
    };
    side(k - 1) && side(k + 1) && admissible_under(cx, thin, w, k)
}

/// Searches for a chain of witnessed thinnings from `x` to `y`, trying simplices in `priority` order.
pub fn witness_chain_with_priority<K: Ord>(
    x: &StratifiedComplex,
    y: &StratifiedComplex,
    priority: impl Fn(usize) -> K,
) -> Result<ChainOutcome, TensorError> {
    if !same_underlying(x, y) {
        return Err(TensorError::DifferentUnderlying);
    }
    if let Some(bad) = (0..x.len()).find(|&i| x.simplex(i).thin && !y.simplex(i).thin) {
        return Err(TensorError::NotAnExtension(bad));
    }
    let mut cofaces: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for w in 0..y.len() {
        let top = y.nondegenerate(w);
        for k in 1..top.dim() {
            let f = y.face(&top, k);
            if !f.is_degenerate() && y.simplex(w).thin {
                cofaces.entry(f.base).or_default().push((w, k));
            }
        }
    }
    let mut thin: Vec<bool> = (0..x.len()).map(|i| x.simplex(i).thin).collect();
    let mut remaining: Vec<usize> = (0..y.len()).filter(|&i| y.simplex(i).thin && !thin[i]).collect();
    remaining.sort_by_key(|&i| (priority(i), i));
    let mut found = Vec::new();
    loop {
        let mut progress = false;
        let mut still = Vec::new();
        for &s in &remaining {
            let hit = cofaces.get(&s).and_then(|cs| cs.iter().find(|&&(w, k)| thin[w] && witness_ok(y, &thin, w, k)));
            match hit {
                Some(&(w, k)) => {
                    thin[s] = true;
                    found.push(ChainStep { simplex: s, witness: w, k });
                    progress = true;
                }
                None => still.push(s),
            }
        }
        remaining = still;
        if remaining.is_empty() {
            return Ok(ChainOutcome::Success(found));
        }
        if !progress {
            return Ok(ChainOutcome::Undecided { found, remaining });
        }
    }
}

/// Searches for a chain of witnessed thinnings from `x` to `y`.
pub fn t_extension_witness_chain(x: &StratifiedComplex, y: &StratifiedComplex) -> Result<ChainOutcome, TensorError> {
    witness_chain_with_priority(x, y, |i| (x.simplex(i).dim, i))
}

/// The potential `Φ⟨x;y⟩ = Σ x(i) + (M − y(i))` on vertex ids, `M` the largest vertex of `Y`.
pub fn potential(cx: &StratifiedComplex, cy: &StratifiedComplex, x: &NormalSimplex, y: &NormalSimplex) -> usize {
    let top = cy.vertices().iter().copied().max().unwrap_or(0);
    cx.vertex_list(x).iter().sum::<usize>() + cy.vertex_list(y).iter().map(|v| top - v).sum::<usize>()
}

/// Chain from `X ⍁ Y` to `X ⊗ Y` using mediator witnesses only, taking simplices in increasing potential.
pub fn pretensor_chain(cx: &StratifiedComplex, cy: &StratifiedComplex) -> (ProductComplex, ProductComplex, ChainOutcome) {
    let pre = pretensor(cx, cy);
    let full = tensor(cx, cy);
    let mut thin: Vec<bool> = (0..pre.complex.len()).map(|i| pre.complex.simplex(i).thin).collect();
    let mut remaining: Vec<usize> = (0..full.complex.len()).filter(|&i| full.complex.simplex(i).thin && !thin[i]).collect();
    remaining.sort_by_key(|&i| {
        let (x, y) = &pre.labels[i];
        (potential(cx, cy, x, y), i)
    });
    let mut found = Vec::new();
    let mut stuck = Vec::new();
    for s in remaining {
        let (x, y) = &pre.labels[s];
        let step = mediator_witnesses(cx, cy, x, y).into_iter().find_map(|(k, wx, wy)| {
            let w = full.pair(&wx, &wy)?;
            (!w.is_degenerate() && thin[w.base] && witness_ok(&full.complex, &thin, w.base, k))
                .then_some(ChainStep { simplex: s, witness: w.base, k })
        });
        match step {
            Some(step) => {
                thin[s] = true;
                found.push(step);
            }
            None => stuck.push(s),
        }
    }
    let outcome = if stuck.is_empty() { ChainOutcome::Success(found) } else { ChainOutcome::Undecided { found, remaining: stuck } };
    (pre, full, outcome)
}

/// The witnesses `⟨x·σ_{k−1}; y·σ_k⟩` over every `k` at which both coordinates strictly increase.
pub fn mediator_witnesses(
    cx: &StratifiedComplex,
    cy: &StratifiedComplex,
    x: &NormalSimplex,
    y: &NormalSimplex,
) -> Vec<(usize, NormalSimplex, NormalSimplex)> {
    let r = x.dim();
    let xv = cx.vertex_list(x);
    let yv = cy.vertex_list(y);
    (1..=r)
        .filter(|&k| xv[k - 1] < xv[k] && yv[k - 1] < yv[k])
        .map(|k| (k, cx.act_unchecked(x, &sigma(r, k - 1)), cy.act_unchecked(y, &sigma(r, k))))
        .collect()
}

/// Replays a chain independently of the search.
pub fn verify_chain(x: &StratifiedComplex, y: &StratifiedComplex, chain: &[ChainStep]) -> bool {
    if !same_underlying(x, y) {
        return false;
    }
    let mut thin: Vec<bool> = (0..x.len()).map(|i| x.simplex(i).thin).collect();
    for step in chain {
        let top = y.nondegenerate(step.witness);
        let d = top.dim();
        if step.k == 0 || step.k >= d || !thin[step.witness] {
            return false;
        }
        let face = y.face(&top, step.k);
        if face.is_degenerate() || face.base != step.simplex || !witness_ok(y, &thin, step.witness, step.k) {
            return false;
        }
        thin[step.simplex] = true;
    }
    (0..y.len()).all(|i| thin[i] == y.simplex(i).thin)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThLawsReport {
    pub lower: bool,
    pub upper: bool,
    pub lower_equal: bool,
    pub upper_equal: bool,
}

impl ThLawsReport {
    pub fn passed(&self) -> bool {
        self.lower && self.upper
    }
}

fn thin_subset(a: &StratifiedComplex, b: &StratifiedComplex) -> (bool, bool) {
    let sub = (0..a.len()).all(|i| !a.simplex(i).thin || b.simplex(i).thin);
    let eq = (0..a.len()).all(|i| a.simplex(i).thin == b.simplex(i).thin);
    (sub, eq)
}

/// Checks `Th_{n+m}(X⊗Y) ⊆ Th_n X ⊗ Th_m Y ⊆ Th_{min(n,m)}(X⊗Y)` on thin sets.
pub fn th_tensor_laws_check(cx: &StratifiedComplex, cy: &StratifiedComplex, n: usize, m: usize) -> ThLawsReport {
    let base = tensor(cx, cy);
    let low = th(&base.complex, n + m);
    let mid = tensor(&th(cx, n), &th(cy, m));
    let high = th(&base.complex, n.min(m));
    let (lower, lower_equal) = thin_subset(&low, &mid.complex);
    let (upper, upper_equal) = thin_subset(&mid.complex, &high);
    ThLawsReport { lower, upper, lower_equal, upper_equal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratified::{dual, find_isomorphism, is_isomorphic, map_by_vertices, classify_map, Standard::*};
    use crate::simplex_ops::SimplicialOperator;

    fn delta(n: usize) -> StratifiedComplex {
        standard(Delta(n)).unwrap()
    }

    /// `x·α` for `x` the top simplex of `Δ[n]`, `α` given by values.
    fn simplex_of(cx: &StratifiedComplex, values: &[usize]) -> NormalSimplex {
        let top = cx.nondegenerate(cx.len() - 1);
        cx.act(&top, &SimplicialOperator::new(top.dim() as i32, values.to_vec()).unwrap()).unwrap()
    }

    fn degenerate_criterion(x: &NormalSimplex, y: &NormalSimplex) -> bool {
        let r = x.dim();
        (0..r).any(|u| x.degenerate_at(u) && (u..r).any(|v| y.degenerate_at(v)))
    }

    #[test]
    fn cleaving_examples() {
        let d1 = delta(1);
        let x = simplex_of(&d1, &[0, 1, 1]);
        let y = simplex_of(&d1, &[0, 0, 1]);
        assert!(!cleaves(&d1, &d1, &x, &y, 1, 1).unwrap());
        assert!(cleaves(&d1, &d1, &x, &y, 1, 0).is_err());
        let xd = simplex_of(&d1, &[0, 0, 1]);
        let yd = simplex_of(&d1, &[0, 0, 1]);
        for p in 0..=2 {
            assert!(cleaves(&d1, &d1, &xd, &yd, p, 2 - p).unwrap());
        }
        let dt = standard(DeltaT(1)).unwrap();
        let xt = simplex_of(&dt, &[0, 1]);
        let yv = simplex_of(&d1, &[0, 1]);
        assert!(cleaves(&dt, &d1, &xt, &yv, 1, 0).unwrap());
        assert!(!cleaves(&d1, &d1, &yv, &yv, 1, 0).unwrap());
    }

    #[test]
    fn tensor_thinness_matches_degeneracy_criterion() {
        for n in 0..=5 {
            for m in 0..=5 - n {
                let (dn, dm) = (delta(n), delta(m));
                let t = tensor(&dn, &dm);
                for (id, (x, y)) in t.labels.iter().enumerate() {
                    let expect = x.dim() > 0 && degenerate_criterion(x, y);
                    assert_eq!(t.complex.simplex(id).thin, expect, "n={n} m={m} {x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let d2 = delta(2);
        let d1 = delta(1);
        let x = simplex_of(&d1, &[0, 0, 1]);
        let y = simplex_of(&d1, &[0, 1, 1]);
        assert_eq!(classify(&d1, &d1, &x, &y).unwrap(), TensorSimplexClass::Mediator(1));
        let v = simplex_of(&d1, &[0]);
        assert_eq!(classify(&d1, &d1, &v, &v).unwrap(), TensorSimplexClass::Other);
        // a cylinder over the face δ^2_k, crushed iff that face is thin
        for (cx, crushed) in [(d2.clone(), false), (standard(Adm(2, 1)).unwrap(), true)] {
            let x = simplex_of(&cx, &[0, 2, 2]);
            let y = simplex_of(&d1, &[0, 0, 1]);
            assert_eq!(classify(&cx, &d1, &x, &y).unwrap(), TensorSimplexClass::Cylinder(1, 1));
            let top = simplex_of(&cx, &[0, 1, 2, 2]);
            let yy = simplex_of(&d1, &[0, 0, 0, 1]);
            let c = classify(&cx, &d1, &top, &yy).unwrap();
            if crushed {
                assert_eq!(c, TensorSimplexClass::CrushedCylinder(2, 1));
            } else {
                assert_eq!(c, TensorSimplexClass::Cylinder(2, 1));
            }
        }
    }

    fn thin_difference(n: usize, m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let (dn, dm) = (delta(n), delta(m));
        let pre = pretensor(&dn, &dm);
        let full = tensor(&dn, &dm);
        assert!((0..pre.complex.len()).all(|i| !pre.complex.simplex(i).thin || full.complex.simplex(i).thin));
        (0..pre.complex.len())
            .filter(|&i| pre.complex.simplex(i).thin != full.complex.simplex(i).thin)
            .map(|i| (dn.vertex_list(&pre.labels[i].0), dm.vertex_list(&pre.labels[i].1)))
            .collect()
    }

    #[test]
    fn pretensor_versus_tensor_thin_sets() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)] {
            assert!(thin_difference(n, m).is_empty(), "n={n} m={m}");
        }
        assert_eq!(thin_difference(2, 2), vec![(vec![0, 0, 1, 2], vec![0, 1, 2, 2])]);
    }

    #[test]
    fn mediators_are_thin_and_admissible() {
        for n in 0..=4 {
            for m in 0..=4 - n {
                let (dn, dm) = (delta(n), delta(m));
                let pre = pretensor(&dn, &dm);
                let full = tensor(&dn, &dm);
                let pre_thin: Vec<bool> = (0..pre.complex.len()).map(|i| pre.complex.simplex(i).thin).collect();
                for (id, (x, y)) in pre.labels.iter().enumerate() {
                    match classify(&dn, &dm, x, y).unwrap() {
                        TensorSimplexClass::Mediator(k) => {
                            assert!(full.complex.simplex(id).thin);
                            assert!(admissible_under(&pre.complex, &pre_thin, id, k));
                            let top = full.complex.nondegenerate(id);
                            if full.complex.is_thin(&full.complex.face(&top, k)) {
                                assert!(full.complex.is_thin(&full.complex.face(&top, k - 1)));
                                assert!(full.complex.is_thin(&full.complex.face(&top, k + 1)));
                            }
                        }
                        TensorSimplexClass::CrushedCylinder(..) => assert!(full.complex.simplex(id).thin),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn monoidal_laws() {
        let d0 = delta(0);
        for kind in [Delta(2), Adm(3, 1), AdmPrime(3, 2), DeltaT(2)] {
            let x = standard(kind).unwrap();
            assert!(is_isomorphic(&tensor(&x, &d0).complex, &x));
            assert!(is_isomorphic(&tensor(&d0, &x).complex, &x));
            assert!(is_isomorphic(&pretensor(&d0, &x).complex, &x));
        }
        let pairs = [(Delta(1), Delta(2)), (DeltaT(1), Delta(1)), (Adm(2, 1), DeltaT(1))];
        for (a, b) in pairs {
            let (x, y) = (standard(a).unwrap(), standard(b).unwrap());
            let lhs = dual(&tensor(&x, &y).complex);
            let rhs = tensor(&dual(&y), &dual(&x)).complex;
            assert!(find_isomorphism(&lhs, &rhs).is_some());
            let lhs = dual(&pretensor(&x, &y).complex);
            let rhs = pretensor(&dual(&y), &dual(&x)).complex;
            assert!(find_isomorphism(&lhs, &rhs).is_some());
        }
    }

    #[test]
    fn tensor_is_associative_on_small_simplices() {
        for (a, b, c) in [(1, 1, 1), (1, 1, 0), (2, 1, 1), (1, 2, 1), (1, 1, 2)] {
            let (x, y, z) = (delta(a), delta(b), delta(c));
            let left = tensor(&tensor(&x, &y).complex, &z).complex;
            let right = tensor(&x, &tensor(&y, &z).complex).complex;
            assert!(is_isomorphic(&left, &right), "{a} {b} {c}");
        }
    }

    #[test]
    fn regular_maps_tensor_to_regular_maps() {
        let h = standard(AdmHorn(3, 1)).unwrap();
        let a = standard(Adm(3, 1)).unwrap();
        let f = map_by_vertices(&h, &a, &[0, 1, 2, 3]).unwrap();
        let d1 = delta(1);
        let g = StratifiedMap::identity(&d1);
        let src = tensor(&h, &d1);
        let tgt = tensor(&a, &d1);
        let fg = product_map(&f, &g, &src, &tgt).unwrap();
        assert!(classify_map(&fg).regular);
    }

    #[test]
    fn chain_examples() {
        let d2 = delta(2);
        assert_eq!(t_extension_witness_chain(&d2, &d2).unwrap(), ChainOutcome::Success(vec![]));
        for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let p = standard(AdmPrime(n, k)).unwrap();
            let q = standard(AdmDprime(n, k)).unwrap();
            let out = t_extension_witness_chain(&p, &q).unwrap();
            let ChainOutcome::Success(chain) = out else { panic!("undecided") };
            assert_eq!(chain.len(), 1);
            assert_eq!(chain[0].witness, p.len() - 1);
            assert_eq!(chain[0].k, k);
            assert!(verify_chain(&p, &q, &chain));
        }
        assert!(t_extension_witness_chain(&standard(DeltaT(1)).unwrap(), &delta(1)).is_err());
    }

    #[test]
    fn pretensor_is_dense_in_tensor() {
        for n in 0..=5 {
            for m in 0..=5 - n {
                let (dn, dm) = (delta(n), delta(m));
                let (pre, full, out) = pretensor_chain(&dn, &dm);
                let ChainOutcome::Success(chain) = out else { panic!("undecided at n={n} m={m}") };
                assert!(verify_chain(&pre.complex, &full.complex, &chain));
                for step in &chain {
                    let (x, y) = &pre.labels[step.simplex];
                    let (a, b) = &pre.labels[step.witness];
                    assert!(matches!(classify(&dn, &dm, a, b).unwrap(), TensorSimplexClass::Mediator(_)));
                    let k = step.k;
                    let phi = potential(&dn, &dm, x, y);
                    for face in [k - 1, k + 1] {
                        let (fa, fb) = (dn.face(a, face), dm.face(b, face));
                        assert!(potential(&dn, &dm, &fa, &fb) < phi);
                    }
                }
            }
        }
    }

    #[test]
    fn th_laws() {
        let d0 = delta(0);
        assert!(th_tensor_laws_check(&d0, &d0, 0, 0).lower_equal);
        let d1 = delta(1);
        let r = th_tensor_laws_check(&d1, &d1, 1, 1);
        assert!(r.passed());
        let r = th_tensor_laws_check(&d1, &d1, 0, 0);
        assert!(r.passed() && r.lower_equal);
        for (n, m) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            let x = standard(Adm(3, 1)).unwrap();
            let y = delta(2);
            assert!(th_tensor_laws_check(&x, &y, n, m).passed());
        }
    }

    #[test]
    fn table_counts() {
        let rows = tensor_table(1, 1, false);
        assert_eq!(rows[2].thin + rows[2].non_thin, 2);
        let pre = tensor_table(1, 1, true);
        assert_eq!(pre[2].thin, 1);
        assert_eq!(pre[2].mediator, 1);
    }
}
