use proptest::prelude::*;

use omegacat::complicial::{is_precomplicial, lp_reflect};
use omegacat::parity::{
    cell_compose, cell_source, cell_target, enumerate_cells, is_cell, is_cell_inductive, simplex_parity, Cell, DEFAULT_BUDGET,
};
use omegacat::simplex_ops::{compose, dual, ez_factorize, SimplicialOperator};
use omegacat::stratified::{parse_spc, standard, write_spc, Standard};

fn operator() -> impl Strategy<Value = SimplicialOperator> {
    (0usize..=6, 0usize..=6).prop_flat_map(|(dom, cod)| {
        proptest::collection::vec(0..=cod, dom + 1).prop_map(move |mut v| {
            v.sort_unstable();
            SimplicialOperator::new(cod as i32, v).expect("sorted values in range")
        })
    })
}

proptest! {
    #[test]
    fn factorization_recomposes(alpha in operator()) {
        let (f, d) = ez_factorize(&alpha);
        prop_assert!(f.is_face());
        prop_assert!(d.is_degeneracy());
        prop_assert_eq!(compose(&f, &d).unwrap(), alpha);
    }

    #[test]
    fn duality_is_an_involution(alpha in operator()) {
        prop_assert_eq!(dual(&dual(&alpha)), alpha);
    }

    #[test]
    fn cell_characterisations_agree(m in 0u32..(1 << 15), p in 0u32..(1 << 15)) {
        let c = simplex_parity(3).complex;
        let pick = |mask: u32| c.set_of(&(0..15).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>());
        let cell = Cell::new(pick(m), pick(p));
        prop_assert_eq!(is_cell(&c, &cell), is_cell_inductive(&c, &cell));
    }

    #[test]
    fn composites_stay_in_the_table(a in 0usize..24, b in 0usize..24, n in 0usize..3) {
        let c = simplex_parity(3).complex;
        let table = enumerate_cells(&c, DEFAULT_BUDGET).unwrap();
        let (x, y) = (&table.cells[a], &table.cells[b]);
        if let Ok(z) = cell_compose(&c, x, y, n) {
            prop_assert!(is_cell(&c, &z));
            prop_assert!(table.id_of(&z).is_some());
            prop_assert_eq!(cell_source(&c, &z, n), cell_source(&c, y, n));
            prop_assert_eq!(cell_target(&c, &z, n), cell_target(&c, x, n));
        }
    }

    #[test]
    fn reflection_of_random_stratifications(flags in proptest::collection::vec(any::<bool>(), 15)) {
        let d3 = standard(Standard::Delta(3)).unwrap();
        let thin: Vec<bool> = (0..d3.len()).map(|i| d3.simplex(i).dim > 0 && flags[i]).collect();
        let x = d3.with_thin(&thin).unwrap();
        let r = lp_reflect(&x);
        prop_assert!(is_precomplicial(&r));
        prop_assert_eq!(lp_reflect(&r), r.clone());
        prop_assert!((0..x.len()).all(|i| !x.simplex(i).thin || r.simplex(i).thin));
        prop_assert_eq!(parse_spc(&write_spc(&r)).unwrap(), r);
    }
}
