use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use omegacat::complicial::{complicial_report, is_precomplicial, is_well_tempered, lp_reflect};
use omegacat::gray_tensor::{
    classify, potential, pretensor, pretensor_chain, tensor, verify_chain, ChainOutcome, TensorSimplexClass,
};
use omegacat::omega_nerve::{bridge_check, nerve, oriental, walking_arrow, FiniteOmegaCat, DEFAULT_FUNCTOR_BUDGET};
use omegacat::parity::{
    collapse, enumerate_cells, is_cell, product, simplex_parity, simplex_parity_thin, suspension, verify_axioms, Cell,
    ParityComplex, DEFAULT_BUDGET,
};
use omegacat::simplex_ops::{
    compose, degeneracy_operators, enumerate_shuffles, ez_factorize, face_operators, is_face_of_shuffle,
    max_operator_of_simplex, monotone_maps, shuffle_of_operator, simplicial_identities_check, SimplicialOperator,
};
use omegacat::stratified::{dec_reconstruction, dual, find_isomorphism, is_isomorphic, standard, Standard, StratifiedComplex};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn delta(n: usize) -> StratifiedComplex {
    standard(Standard::Delta(n)).expect("standard simplex")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn simplicial_identities() -> Outcome {
    let report = simplicial_identities_check(6);
    ensure(report.passed(), || format!("{} identity violations", report.violations.len()))?;
    ensure(report.checked >= 200, || format!("only {} instances", report.checked))?;
    let mut operators = 0;
    for m in 0..=6i32 {
        for n in 0..=6i32 {
            let mut count: HashMap<SimplicialOperator, usize> = HashMap::new();
            for k in 0..=m.min(n) {
                for f in face_operators(k, n) {
                    for d in degeneracy_operators(m, k) {
                        *count.entry(compose(&f, &d).expect("composable")).or_default() += 1;
                    }
                }
            }
            for alpha in monotone_maps(m, n) {
                operators += 1;
                ensure(count.get(&alpha) == Some(&1), || format!("{alpha} has {:?} factorizations", count.get(&alpha)))?;
                let (f, d) = ez_factorize(&alpha);
                ensure(f.is_face() && d.is_degeneracy() && compose(&f, &d).ok() == Some(alpha.clone()), || {
                    format!("ez_factorize({alpha}) is not a face after a degeneracy")
                })?;
            }
        }
    }
    Ok(format!("{} identity instances, {operators} operators factor uniquely", report.checked))
}

fn shuffle_calculus() -> Outcome {
    let mut total = 0;
    for n in 0..=8 {
        for m in 0..=8 - n {
            let shuffles = enumerate_shuffles(n, m);
            ensure(shuffles.len() == binomial(n + m, n), || format!("|shuffles({n},{m})| = {}", shuffles.len()))?;
            for s in &shuffles {
                ensure(s.is_valid() && shuffle_of_operator(&s.gamma()) == *s, || format!("round trip fails at ({n},{m})"))?;
            }
            for gamma in monotone_maps(n as i32 - 1, m as i32) {
                ensure(shuffle_of_operator(&gamma).gamma() == gamma, || format!("γ round trip fails for {gamma}"))?;
            }
            total += shuffles.len();
        }
    }
    let mut faces_checked = 0;
    for n in 0..=5usize {
        for m in 0..=5 - n {
            let shuffles = enumerate_shuffles(n, m);
            for r in 0..=n + m {
                for alpha in monotone_maps(r as i32, n as i32) {
                    for beta in monotone_maps(r as i32, m as i32) {
                        let injective = (1..=r).all(|i| (alpha.apply(i), beta.apply(i)) != (alpha.apply(i - 1), beta.apply(i - 1)));
                        if !injective {
                            continue;
                        }
                        let mut maximal: Option<SimplicialOperator> = None;
                        for s in &shuffles {
                            let direct = face_operators(r as i32, (n + m) as i32)
                                .iter()
                                .any(|f| compose(&s.alpha, f).ok() == Some(alpha.clone()) && compose(&s.beta, f).ok() == Some(beta.clone()));
                            let gamma = s.gamma();
                            faces_checked += 1;
                            ensure(direct == is_face_of_shuffle(&alpha, &beta, &gamma), || {
                                format!("face test disagrees for ⟨{alpha};{beta}⟩ in shuffle {gamma}")
                            })?;
                            if direct && maximal.as_ref().map_or(true, |g| g.pointwise_le(&gamma)) {
                                maximal = Some(gamma);
                            }
                        }
                        ensure(maximal == Some(max_operator_of_simplex(&alpha, &beta)), || {
                            format!("largest shuffle of ⟨{alpha};{beta}⟩ is wrong")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("{total} shuffles, {faces_checked} face tests"))
}

fn tensor_thinness() -> Outcome {
    let mut checked = 0;
    for n in 0..=5 {
        for m in 0..=5 - n {
            let (dn, dm) = (delta(n), delta(m));
            let built = tensor(&dn, &dm);
            for (id, (x, y)) in built.labels.iter().enumerate() {
                let r = x.dim();
                let criterion = r > 0 && (0..r).any(|u| x.degenerate_at(u) && (u..r).any(|v| y.degenerate_at(v)));
                let thin = built.complex.simplex(id).thin;
                checked += 1;
                ensure(thin == criterion, || format!("Δ[{n}]⊗Δ[{m}] simplex {id}: cleaving {thin}, criterion {criterion}"))?;
                let class = classify(&dn, &dm, x, y).map_err(|e| e.to_string())?;
                if matches!(class, TensorSimplexClass::Mediator(_) | TensorSimplexClass::CrushedCylinder(..)) {
                    ensure(thin, || format!("{class:?} simplex {id} of Δ[{n}]⊗Δ[{m}] is not thin"))?;
                }
            }
        }
    }
    let d0 = delta(0);
    for n in 0..=4 {
        for kind in [Standard::Delta(n), Standard::DeltaT(n)] {
            let x = standard(kind).map_err(|e| e.to_string())?;
            ensure(is_isomorphic(&tensor(&d0, &x).complex, &x) && is_isomorphic(&tensor(&x, &d0).complex, &x), || {
                format!("unit law fails for {kind:?}")
            })?;
        }
    }
    for (a, b, c) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)] {
        let (x, y, z) = (delta(a), delta(b), delta(c));
        let left = tensor(&tensor(&x, &y).complex, &z).complex;
        let right = tensor(&x, &tensor(&y, &z).complex).complex;
        ensure(is_isomorphic(&left, &right), || format!("associativity fails for ({a},{b},{c})"))?;
    }
    for n in 1..=3 {
        for m in 1..=4 - n {
            for (kx, ky) in [(Standard::Delta(n), Standard::Delta(m)), (Standard::DeltaT(n), Standard::Delta(m))] {
                let (x, y) = (standard(kx).map_err(|e| e.to_string())?, standard(ky).map_err(|e| e.to_string())?);
                let lhs = dual(&tensor(&x, &y).complex);
                let rhs = tensor(&dual(&y), &dual(&x)).complex;
                ensure(find_isomorphism(&lhs, &rhs).is_some(), || format!("dual symmetry fails for {kx:?}, {ky:?}"))?;
            }
        }
    }
    Ok(format!("{checked} tensor simplices agree; unit, associativity and duality isomorphisms found"))
}

fn pretensor_extension() -> Outcome {
    let mut steps = 0;
    for n in 0..=5 {
        for m in 0..=5 - n {
            let (dn, dm) = (delta(n), delta(m));
            let (pre, full, outcome) = pretensor_chain(&dn, &dm);
            let chain = match outcome {
                ChainOutcome::Success(chain) => chain,
                ChainOutcome::Undecided { remaining, .. } => {
                    return Err(format!("Δ[{n}]⍁Δ[{m}]: {} simplices without witness", remaining.len()))
                }
            };
            ensure(verify_chain(&pre.complex, &full.complex, &chain), || format!("chain replay fails at ({n},{m})"))?;
            for step in &chain {
                let (x, y) = &pre.labels[step.simplex];
                let (a, b) = &pre.labels[step.witness];
                let class = classify(&dn, &dm, a, b).map_err(|e| e.to_string())?;
                ensure(matches!(class, TensorSimplexClass::Mediator(_)), || format!("witness {} is {class:?}", step.witness))?;
                let phi = potential(&dn, &dm, x, y);
                for face in [step.k - 1, step.k + 1] {
                    let (fa, fb) = (dn.face(a, face), dm.face(b, face));
                    ensure(potential(&dn, &dm, &fa, &fb) < phi, || format!("potential does not drop at ({n},{m})"))?;
                }
                steps += 1;
            }
            let reflected = lp_reflect(&pre.complex);
            ensure((0..full.complex.len()).all(|i| !full.complex.simplex(i).thin || reflected.simplex(i).thin), || {
                format!("reflection of Δ[{n}]⍁Δ[{m}] misses tensor-thin simplices")
            })?;
        }
    }
    Ok(format!("{steps} mediator witness steps"))
}

fn reflector_fixtures() -> Vec<(String, StratifiedComplex)> {
    use Standard::*;
    let mut kinds = Vec::new();
    for n in 0..=4 {
        kinds.push(Delta(n));
        kinds.push(DeltaT(n));
        if n >= 1 {
            kinds.push(Boundary(n));
            kinds.extend((0..=n).map(|k| Horn(n, k)));
        }
        for k in 1..n.max(1) {
            kinds.extend([Adm(n, k), AdmHorn(n, k), AdmPrime(n, k), AdmDprime(n, k)]);
        }
    }
    let mut out: Vec<(String, StratifiedComplex)> =
        kinds.into_iter().map(|k| (format!("{k:?}"), standard(k).expect("standard object"))).collect();
    let (d1, d2) = (delta(1), delta(2));
    out.push(("Δ[1]⍁Δ[2]".into(), pretensor(&d1, &d2).complex));
    out.push(("Δ[2]⍁Δ[1]".into(), pretensor(&d2, &d1).complex));
    out.push(("Δ[1]⊗Δ[1]".into(), tensor(&d1, &d1).complex));
    out
}

fn reflector_laws() -> Outcome {
    let fixtures = reflector_fixtures();
    ensure(fixtures.len() >= 20, || format!("only {} fixtures", fixtures.len()))?;
    for (name, x) in &fixtures {
        let r = lp_reflect(x);
        ensure(is_precomplicial(&r), || format!("{name}: reflection is not pre-complicial"))?;
        ensure(lp_reflect(&r) == r, || format!("{name}: reflection is not idempotent"))?;
        ensure((0..x.len()).all(|i| !x.simplex(i).thin || r.simplex(i).thin), || format!("{name}: not inflationary"))?;
    }
    let mut pairs = 0;
    for n in 2..=4 {
        for k in 1..n {
            let p = standard(Standard::AdmPrime(n, k)).map_err(|e| e.to_string())?;
            let d = standard(Standard::AdmDprime(n, k)).map_err(|e| e.to_string())?;
            ensure(lp_reflect(&p) == d, || format!("reflection of the primed admissible simplex ({n},{k})"))?;
            pairs += 1;
        }
    }
    Ok(format!("{} fixtures, {pairs} admissible pairs", fixtures.len()))
}

fn parity_axioms() -> Outcome {
    let mut complexes: Vec<(String, ParityComplex)> = Vec::new();
    for n in 0..=5 {
        complexes.push((format!("Δ̃[{n}]"), simplex_parity(n).complex));
    }
    for n in 0..=4 {
        for m in 0..=4 - n {
            complexes.push((format!("Δ̃[{n}]×Δ̃[{m}]"), product(&simplex_parity(n).complex, &simplex_parity(m).complex).complex));
        }
    }
    for k in 0..=3 {
        for n in 0..=2 {
            complexes.push((format!("Σ_{k}Δ̃[{n}]"), suspension(k, &simplex_parity(n).complex).complex));
        }
    }
    for (name, c) in &complexes {
        let report = verify_axioms(c);
        ensure(report.passed(), || format!("{name}: {report:?}"))?;
    }
    Ok(format!("{} complexes pass", complexes.len()))
}

/// Every cell of `Δ̃[n]` by brute force: `P` is forced by `M`, so scan all `M`.
fn cell_count_oracle(c: &ParityComplex) -> usize {
    let n = c.len();
    (1u64..(1 << n))
        .filter(|&mask| {
            let ids: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let m = c.set_of(&ids);
            let mut p = m.clone();
            p.union_with(&c.face_set(&m, true));
            p.difference_with(&c.face_set(&m, false));
            is_cell(c, &Cell::new(m, p))
        })
        .count()
}

fn free_omega_laws() -> Outcome {
    let mut fixtures: Vec<(String, ParityComplex)> = (0..=3).map(|n| (format!("Δ̃[{n}]"), simplex_parity(n).complex)).collect();
    for (n, m) in [(1, 1), (2, 1)] {
        fixtures.push((format!("Δ̃[{n}]×Δ̃[{m}]"), product(&simplex_parity(n).complex, &simplex_parity(m).complex).complex));
    }
    let mut summary = Vec::new();
    for (name, c) in &fixtures {
        let table = enumerate_cells(c, DEFAULT_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        let cat = FiniteOmegaCat::from_cell_table(&table, None).map_err(|e| format!("{name}: {e}"))?;
        ensure((0..table.len()).all(|i| table.evaluate_witness(i) == table.cells[i]), || format!("{name}: witness mismatch"))?;
        let top = c.max_dim();
        ensure(table.cells_of_dim(top).len() == 1, || format!("{name}: {} top cells", table.cells_of_dim(top).len()))?;
        summary.push(format!("{name}:{}", cat.len()));
    }
    let d3 = simplex_parity(3).complex;
    let table = enumerate_cells(&d3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let oracle = cell_count_oracle(&d3);
    ensure(table.len() == oracle && table.len() == 24, || format!("O(Δ̃[3]) has {} cells, oracle {oracle}", table.len()))?;
    ensure(table.count_by_dim() == vec![4, 11, 8, 1], || format!("O(Δ̃[3]) by dimension {:?}", table.count_by_dim()))?;
    Ok(summary.join(" "))
}

fn collapse_criterion() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=3 {
        let o = oriental(n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let q = collapse(&simplex_parity_thin(n), &o.table);
        let cat = FiniteOmegaCat::from_cell_table(&o.table, Some(&q)).map_err(|e| format!("n={n}: {e}"))?;
        ensure(cat.is_n_category(n - 1), || format!("collapse of Δ̃[{n}]_t is not an {}-category", n - 1))?;
        counts.push(format!("n={n}:{}", cat.len()));
    }
    Ok(counts.join(" "))
}

fn nerve_compliciality() -> Outcome {
    let o2 = oriental(2, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let q = collapse(&simplex_parity_thin(2), &o2.table);
    let cats = [
        ("walking arrow", walking_arrow()),
        ("O(Δ̃[2])", FiniteOmegaCat::from_cell_table(&o2.table, None).map_err(|e| e.to_string())?),
        ("collapsed O(Δ̃[2]_t)", FiniteOmegaCat::from_cell_table(&o2.table, Some(&q)).map_err(|e| e.to_string())?),
    ];
    let mut summary = Vec::new();
    for (name, cat) in &cats {
        let x = nerve(cat, 3, DEFAULT_FUNCTOR_BUDGET).map_err(|e| format!("{name}: {e}"))?.complex;
        ensure(is_precomplicial(&x), || format!("{name}: nerve not pre-complicial"))?;
        let report = complicial_report(&x, None);
        ensure(report.thin_filler_failures.is_empty(), || format!("{name}: {} horns without a unique thin filler", report.thin_filler_failures.len()))?;
        ensure(report.admissible_filler_failures.is_empty(), || format!("{name}: thin fillers not admissible"))?;
        ensure(report.nondegenerate_thin_edges.is_empty(), || format!("{name}: thin 1-simplices are not degenerate"))?;
        ensure(is_well_tempered(&x), || format!("{name}: nerve not well tempered"))?;
        summary.push(format!("{name}: {} simplices, {} horns", x.len(), report.horns_checked));
    }
    Ok(summary.join("; "))
}

fn bridge_criterion() -> Outcome {
    let mut cases = 0;
    for n in 0..=3 {
        for m in 0..=3 - n {
            let r = bridge_check(Standard::Delta(n), Standard::Delta(m)).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("bridge ({n},{m}) fails: {r:?}"))?;
            cases += 1;
        }
    }
    for (kx, ky) in [(Standard::DeltaT(1), Standard::Delta(1)), (Standard::Delta(2), Standard::DeltaT(1))] {
        let r = bridge_check(kx, ky).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.thinness.checked > 0, || format!("thinness correspondence fails for {kx:?}, {ky:?}: {r:?}"))?;
        cases += 1;
    }
    Ok(format!("{cases} cases"))
}

fn decalage_criterion() -> Outcome {
    let d1 = delta(1);
    for (name, x) in [("Δ[2]", delta(2)), ("Δ[1]⊗Δ[1]", tensor(&d1, &d1).complex)] {
        for n in 0..=2 {
            let rec = dec_reconstruction(&x, n);
            ensure(rec.passed(), || format!("{name}, n={n}: {rec:?}"))?;
        }
    }
    Ok("both fixtures reconstruct for n ≤ 2".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("simplicial identities and unique factorization", simplicial_identities),
        ("shuffle calculus", shuffle_calculus),
        ("tensor thinness", tensor_thinness),
        ("pre-tensor t-extension", pretensor_extension),
        ("reflector laws", reflector_laws),
        ("parity axioms", parity_axioms),
        ("free ω-category laws", free_omega_laws),
        ("collapse", collapse_criterion),
        ("nerve compliciality", nerve_compliciality),
        ("bridge", bridge_criterion),
        ("decalage reconstruction", decalage_criterion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
