//! Pre-compliciality, the pre-complicial reflector, admissible horns and their fillers.

use std::collections::HashMap;

use thiserror::Error;

use crate::stratified::{image_operator, NormalSimplex, StratifiedComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplicialError {
    #[error("need n >= 2 and 1 <= k <= n-1, got n={n} k={k}")]
    Range { n: usize, k: usize },
    #[error("horn does not fit the complex: {0}")]
    BadHorn(String),
}

fn check_range(n: usize, k: usize) -> Result<(), ComplicialError> {
    if n < 2 || k < 1 || k >= n {
        return Err(ComplicialError::Range { n, k });
    }
    Ok(())
}

fn k_divided(k: usize) -> usize {
    0b111 << (k - 1)
}

/// Whether every face of `s` whose image contains `must` is thin, under the flags `thin`.
fn faces_thin_containing(x: &StratifiedComplex, thin: &[bool], s: &NormalSimplex, must: usize) -> bool {
    let d = s.dim();
    (1..(1usize << (d + 1))).filter(|m| m & must == must).all(|mask| {
        let f = if s.is_degenerate() {
            x.act_unchecked(s, &image_operator(mask, d))
        } else {
            x.face_by_mask(s.base, mask).clone()
        };
        f.is_degenerate() || thin[f.base]
    })
}

/// `k`-admissibility of the non-degenerate simplex `w` under the flags `thin`.
pub(crate) fn admissible_under(x: &StratifiedComplex, thin: &[bool], w: usize, k: usize) -> bool {
    faces_thin_containing(x, thin, &x.nondegenerate(w), k_divided(k))
}

fn thin_flags(x: &StratifiedComplex) -> Vec<bool> {
    (0..x.len()).map(|i| x.simplex(i).thin).collect()
}

/// Whether every `k`-divided face of `s` is thin.
pub fn is_k_admissible(x: &StratifiedComplex, s: &NormalSimplex, k: usize) -> Result<bool, ComplicialError> {
    check_range(s.dim(), k)?;
    Ok(faces_thin_containing(x, &thin_flags(x), s, k_divided(k)))
}

/// Admissible simplices whose outer faces are thin but whose middle face is not, as `(simplex, k)`.
pub fn precomplicial_violations(x: &StratifiedComplex) -> Vec<(usize, usize)> {
    let thin = thin_flags(x);
    let mut out = Vec::new();
    for w in 0..x.len() {
        let top = x.nondegenerate(w);
        let n = top.dim();
        for k in 1..n.max(1) {
            if !admissible_under(x, &thin, w, k) {
                continue;
            }
            let side = |i| x.is_thin(&x.face(&top, i));
            if side(k - 1) && side(k + 1) && !x.is_thin(&x.face(&top, k)) {
                out.push((w, k));
            }
        }
    }
    out
}

pub fn is_precomplicial(x: &StratifiedComplex) -> bool {
    precomplicial_violations(x).is_empty()
}

/// The least pre-complicial stratification containing that of `x`.
pub fn lp_reflect(x: &StratifiedComplex) -> StratifiedComplex {
    let mut thin = thin_flags(x);
    loop {
        let mut changed = false;
        for w in 0..x.len() {
            let top = x.nondegenerate(w);
            for k in 1..top.dim().max(1) {
                let face = x.face(&top, k);
                if face.is_degenerate() || thin[face.base] {
                    continue;
                }
                let side = |i: usize| {
                    let f = x.face(&top, i);
                    f.is_degenerate() || thin[f.base]
                };
                if side(k - 1) && side(k + 1) && admissible_under(x, &thin, w, k) {
                    thin[face.base] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return x.with_thin(&thin).expect("only faces of positive dimension are thinned");
        }
    }
}

/// A `k`-horn of dimension `n−1`: faces indexed by `i ≠ k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornInstance {
    pub n: usize,
    pub k: usize,
    pub faces: Vec<Option<NormalSimplex>>,
}

/// All admissible `k`-horns of dimension `n−1`, in lexicographic order of their faces.
pub fn admissible_horns(x: &StratifiedComplex, n: usize, k: usize) -> Result<Vec<HornInstance>, ComplicialError> {
    check_range(n, k)?;
    let thin = thin_flags(x);
    let cands = x.all_simplices(n - 1);
    let cand_faces: Vec<Vec<NormalSimplex>> =
        cands.iter().map(|c| (0..n).map(|j| x.face(c, j)).collect()).collect();
    let admissible = |c: &NormalSimplex, kk: usize| faces_thin_containing(x, &thin, c, k_divided(kk));
    let allowed: Vec<Vec<usize>> = (0..=n)
        .map(|i| {
            (0..cands.len())
                .filter(|&c| {
                    if i + 1 < k {
                        admissible(&cands[c], k - 1)
                    } else if i > k + 1 {
                        admissible(&cands[c], k)
                    } else {
                        true
                    }
                })
                .collect()
        })
        .collect();
    let slots: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(slots.len());
    let mut out = Vec::new();

    fn extend(
        slots: &[usize],
        allowed: &[Vec<usize>],
        cand_faces: &[Vec<NormalSimplex>],
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == slots.len() {
            emit(chosen);
            return;
        }
        let i = slots[chosen.len()];
        for &c in &allowed[i] {
            let fits = slots.iter().zip(chosen.iter()).all(|(&j, &cj)| cand_faces[c][j] == cand_faces[cj][i - 1]);
            if fits {
                chosen.push(c);
                extend(slots, allowed, cand_faces, chosen, emit);
                chosen.pop();
            }
        }
    }

    extend(&slots, &allowed, &cand_faces, &mut chosen, &mut |pick| {
        let mut faces = vec![None; n + 1];
        for (&i, &c) in slots.iter().zip(pick) {
            faces[i] = Some(cands[c].clone());
        }
        out.push(HornInstance { n, k, faces });
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Fillers {
    pub all: Vec<NormalSimplex>,
    pub thin: Vec<NormalSimplex>,
    pub admissible: Vec<NormalSimplex>,
}

fn classify_fillers(x: &StratifiedComplex, thin: &[bool], k: usize, all: Vec<NormalSimplex>) -> Fillers {
    let thin_list = all.iter().filter(|f| x.is_thin(f)).cloned().collect();
    let admissible = all.iter().filter(|f| faces_thin_containing(x, thin, f, k_divided(k))).cloned().collect();
    Fillers { all, thin: thin_list, admissible }
}

/// The `n`-simplices agreeing with the horn away from face `k`.
pub fn fillers(x: &StratifiedComplex, h: &HornInstance) -> Result<Fillers, ComplicialError> {
    check_range(h.n, h.k)?;
    if h.faces.len() != h.n + 1 || h.faces.iter().enumerate().any(|(i, f)| (i == h.k) != f.is_none()) {
        return Err(ComplicialError::BadHorn("face list does not match (n, k)".into()));
    }
    let all: Vec<NormalSimplex> = x
        .all_simplices(h.n)
        .into_iter()
        .filter(|s| (0..=h.n).filter(|&i| i != h.k).all(|i| Some(x.face(s, i)) == h.faces[i]))
        .collect();
    Ok(classify_fillers(x, &thin_flags(x), h.k, all))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplicialReport {
    /// Horns are checked in dimensions `2..=bound`.
    pub bound: usize,
    pub precomplicial_violations: Vec<(usize, usize)>,
    pub horns_checked: usize,
    /// Horns whose fillers would lie above the bound.
    pub horns_skipped: usize,
    /// Horns without exactly one thin filler, with the count found.
    pub thin_filler_failures: Vec<(HornInstance, usize)>,
    /// Horns without exactly one admissible filler, with the count found.
    pub admissible_filler_failures: Vec<(HornInstance, usize)>,
    pub nondegenerate_thin_edges: Vec<usize>,
}

impl ComplicialReport {
    pub fn is_complicial(&self) -> bool {
        self.precomplicial_violations.is_empty() && self.thin_filler_failures.is_empty() && self.nondegenerate_thin_edges.is_empty()
    }

    /// Whether the unique-thin-filler and unique-admissible-filler readings agree on every horn.
    pub fn readings_agree(&self) -> bool {
        let a: Vec<&HornInstance> = self.thin_filler_failures.iter().map(|(h, _)| h).collect();
        let b: Vec<&HornInstance> = self.admissible_filler_failures.iter().map(|(h, _)| h).collect();
        a == b
    }
}

/// Checks compliciality with horns of dimension up to `bound` (default: the complex's bound).
pub fn complicial_report(x: &StratifiedComplex, bound: Option<usize>) -> ComplicialReport {
    let bound = bound.unwrap_or(x.dim_bound()).min(x.dim_bound());
    let thin = thin_flags(x);
    let mut report = ComplicialReport {
        bound,
        precomplicial_violations: precomplicial_violations(x),
        horns_checked: 0,
        horns_skipped: 0,
        thin_filler_failures: Vec::new(),
        admissible_filler_failures: Vec::new(),
        nondegenerate_thin_edges: x.ids_of_dim(1).iter().copied().filter(|&e| thin[e]).collect(),
    };
    for n in 2..=bound + 1 {
        let simplices = x.all_simplices(n);
        for k in 1..n {
            let horns = admissible_horns(x, n, k).expect("range checked");
            if n > bound {
                report.horns_skipped += horns.len();
                continue;
            }
            let mut by_horn: HashMap<Vec<NormalSimplex>, Vec<NormalSimplex>> = HashMap::new();
            for s in &simplices {
                let key = (0..=n).filter(|&i| i != k).map(|i| x.face(s, i)).collect();
                by_horn.entry(key).or_default().push(s.clone());
            }
            for h in horns {
                report.horns_checked += 1;
                let key: Vec<NormalSimplex> = h.faces.iter().flatten().cloned().collect();
                let all = by_horn.get(&key).cloned().unwrap_or_default();
                let f = classify_fillers(x, &thin, k, all);
                if f.thin.len() != 1 {
                    report.thin_filler_failures.push((h.clone(), f.thin.len()));
                }
                if f.admissible.len() != 1 {
                    report.admissible_filler_failures.push((h, f.admissible.len()));
                }
            }
        }
    }
    report
}

pub fn is_complicial(x: &StratifiedComplex) -> bool {
    complicial_report(x, None).is_complicial()
}

/// Simplices pre-degenerate at `k` but not degenerate there, up to the dimension bound.
pub fn well_tempered_violations(x: &StratifiedComplex) -> Vec<(NormalSimplex, usize)> {
    let thin = thin_flags(x);
    let mut out = Vec::new();
    for d in 1..=x.dim_bound() {
        for s in x.all_simplices(d) {
            for k in 0..d {
                if !s.degenerate_at(k) && faces_thin_containing(x, &thin, &s, 0b11 << k) {
                    out.push((s.clone(), k));
                }
            }
        }
    }
    out
}

pub fn is_well_tempered(x: &StratifiedComplex) -> bool {
    well_tempered_violations(x).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray_tensor::{tensor, pretensor};
    use crate::stratified::{dual, standard, standard_with_masks, th, Standard::*};

    fn top(x: &StratifiedComplex) -> NormalSimplex {
        x.nondegenerate(x.len() - 1)
    }

    #[test]
    fn admissibility_examples() {
        for (n, k) in [(2, 1), (3, 1), (4, 2), (4, 3)] {
            let (a, masks) = standard_with_masks(Adm(n, k)).unwrap();
            assert!(is_k_admissible(&a, &top(&a), k).unwrap());
            for id in 0..a.len() {
                let divided = masks[id] & k_divided(k) as u64 == k_divided(k) as u64;
                assert_eq!(a.simplex(id).thin, divided);
            }
        }
        let d3 = standard(Delta(3)).unwrap();
        assert!(!is_k_admissible(&d3, &top(&d3), 1).unwrap());
        let d2 = standard(Delta(2)).unwrap();
        for k in 1..3 {
            let deg = d2.degeneracy(&top(&d2), k);
            assert!(is_k_admissible(&d2, &deg, k).unwrap());
        }
        assert!(is_k_admissible(&d3, &top(&d3), 3).is_err());
    }

    #[test]
    fn precomplicial_examples() {
        for n in 0..=4 {
            assert!(is_precomplicial(&standard(Delta(n)).unwrap()));
        }
        assert!(is_precomplicial(&StratifiedComplex::empty()));
        for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let p = standard(AdmPrime(n, k)).unwrap();
            let v = precomplicial_violations(&p);
            assert_eq!(v, vec![(p.len() - 1, k)]);
            assert_eq!(lp_reflect(&p), standard(AdmDprime(n, k)).unwrap());
        }
    }

    fn fixtures() -> Vec<StratifiedComplex> {
        let mut out = Vec::new();
        for n in 0..=4 {
            out.push(standard(Delta(n)).unwrap());
            out.push(standard(DeltaT(n)).unwrap());
            if n >= 1 {
                out.push(standard(Boundary(n)).unwrap());
                for k in 0..=n {
                    out.push(standard(Horn(n, k)).unwrap());
                }
            }
            for k in 1..n.max(1) {
                for kind in [Adm(n, k), AdmHorn(n, k), AdmPrime(n, k), AdmDprime(n, k)] {
                    out.push(standard(kind).unwrap());
                }
            }
        }
        let d1 = standard(Delta(1)).unwrap();
        let d2 = standard(Delta(2)).unwrap();
        out.push(pretensor(&d1, &d2).complex);
        out.push(tensor(&d2, &d1).complex);
        out.push(th(&pretensor(&d2, &d1).complex, 2));
        out
    }

    #[test]
    fn reflector_laws() {
        let fixtures = fixtures();
        assert!(fixtures.len() >= 20);
        for x in &fixtures {
            let r = lp_reflect(x);
            assert!(is_precomplicial(&r));
            assert_eq!(lp_reflect(&r), r);
            assert!((0..x.len()).all(|i| !x.simplex(i).thin || r.simplex(i).thin));
        }
    }

    #[test]
    fn horn_examples() {
        for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let a = standard(Adm(n, k)).unwrap();
            let horns = admissible_horns(&a, n, k).unwrap();
            let standard_horn: Vec<Option<NormalSimplex>> =
                (0..=n).map(|i| (i != k).then(|| a.face(&top(&a), i))).collect();
            let h = horns.iter().find(|h| h.faces == standard_horn).expect("standard horn is admissible");
            let f = fillers(&a, h).unwrap();
            assert_eq!(f.admissible, vec![top(&a)]);
        }
        let d2 = standard(Delta(2)).unwrap();
        let h = HornInstance { n: 2, k: 1, faces: vec![Some(d2.face(&top(&d2), 0)), None, Some(d2.face(&top(&d2), 2))] };
        let f = fillers(&d2, &h).unwrap();
        assert_eq!(f.all, vec![top(&d2)]);
        assert!(f.thin.is_empty());
    }

    #[test]
    fn horn_faces_are_compatible() {
        let x = standard(Adm(3, 2)).unwrap();
        for k in 1..3 {
            for h in admissible_horns(&x, 3, k).unwrap() {
                for i in 0..=3 {
                    for j in 0..i {
                        if let (Some(xi), Some(xj)) = (&h.faces[i], &h.faces[j]) {
                            assert_eq!(x.face(xi, j), x.face(xj, i - 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn complicial_examples() {
        let dt = standard(DeltaT(1)).unwrap();
        let r = complicial_report(&dt, None);
        assert!(!r.is_complicial());
        assert_eq!(r.nondegenerate_thin_edges, vec![2]);
        let (points, _) = crate::stratified::from_subsets(2, |m| m.count_ones() == 1, |_| false).unwrap();
        assert!(is_complicial(&points));
        for kind in [Delta(2), Adm(3, 1)] {
            let x = standard(kind).unwrap();
            assert_eq!(is_complicial(&x), is_complicial(&dual(&x)));
        }
    }

    #[test]
    fn well_tempered_examples() {
        for n in 0..=3 {
            assert!(is_well_tempered(&standard(Delta(n)).unwrap()));
        }
        let v = well_tempered_violations(&standard(DeltaT(1)).unwrap());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].1, 0);
    }
}
