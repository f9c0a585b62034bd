use octic::combinatorics::census::{census, derive, euler_characteristic};
use octic::combinatorics::{canonical_form, symmetry_group};
use octic::corpus;
use octic::enumerate::{closure, ClosureOutcome, EnumState};
use octic::Perm;
use proptest::prelude::*;

fn any_perm() -> impl Strategy<Value = Perm> {
    (0..40320usize).prop_map(|i| Perm::all()[i])
}

fn any_entry() -> impl Strategy<Value = usize> {
    0..corpus::canonical_tables().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_preserves_invariants(i in any_entry(), p in any_perm()) {
        let table = corpus::canonical_tables()[i].1;
        let moved = table.relabel(&p);
        prop_assert_eq!(canonical_form(&moved).minimal, table);
        let a = census(&table, &derive(&table)).unwrap();
        let b = census(&moved, &derive(&moved)).unwrap();
        prop_assert_eq!(euler_characteristic(&a), euler_characteristic(&b));
        prop_assert_eq!((a.p40, a.p41, a.p50, a.p51, a.p52, a.l3), (b.p40, b.p41, b.p50, b.p51, b.p52, b.l3));
    }

    #[test]
    fn symmetry_order_is_conjugation_invariant(i in any_entry(), p in any_perm()) {
        let table = corpus::canonical_tables()[i].1;
        let g = symmetry_group(&table);
        let h = symmetry_group(&table.relabel(&p));
        prop_assert_eq!(g.order, h.order);
        prop_assert_eq!(g.name, h.name);
    }

    #[test]
    fn closure_commutes_with_relabeling(quads in prop::collection::vec(0..70usize, 1..5), p in any_perm()) {
        let masks = octic::combinatorics::subsets::quads();
        let mut s: EnumState = "T:{} Q:{} P:{}".parse().unwrap();
        for q in quads {
            s.quads.insert(masks.masks[q]);
        }
        let keys = |o: ClosureOutcome| match o {
            ClosureOutcome::Closed(v) => {
                let mut k: Vec<_> = v.iter().map(|b| b.canonical().0).collect();
                k.sort();
                Some(k)
            }
            ClosureOutcome::Contradiction(_) => None,
        };
        prop_assert_eq!(keys(closure(&s)), keys(closure(&s.relabel(&p))));
    }
}

#[test]
fn corpus_tables_are_distinct_classes() {
    let tables = corpus::canonical_tables();
    for (i, (a, ta)) in tables.iter().enumerate() {
        for (b, tb) in &tables[i + 1..] {
            assert_ne!(ta, tb, "Arr {a} and Arr {b} share a class");
        }
    }
}
