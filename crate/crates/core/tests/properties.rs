use std::collections::BTreeSet;

use oncross::classify::{classify, theta_cardinality};
use oncross::iso::oracle_semigroup_iso;
use oncross::lsection::{enumerate_respectful, MarkedTree};
use oncross::phi::{phi_semigroup, reconstruct_tree, theta_set};
use oncross::tree::enumerate_decreasing;
use oncross::{BinaryTree, ConvexPartition, Limits, OrderedTree, Transformation};
use proptest::prelude::*;

fn order_preserving(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(1..=n as u8, n).prop_map(|mut v| {
        v.sort_unstable();
        Transformation::new(v).unwrap()
    })
}

fn sized_triple(max: usize) -> impl Strategy<Value = (Transformation, Transformation, Transformation)> {
    (1..=max).prop_flat_map(|n| (order_preserving(n), order_preserving(n), order_preserving(n)))
}

fn any_map(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(1..=n as u8, n).prop_map(|v| Transformation::new(v).unwrap())
}

fn decreasing_tree(max: usize) -> impl Strategy<Value = OrderedTree> {
    (1..=max).prop_flat_map(|n| prop::sample::select(enumerate_decreasing(n, &Limits::default()).unwrap()))
}

fn search_tree(max: usize) -> impl Strategy<Value = OrderedTree> {
    (1..=max).prop_flat_map(|n| prop::sample::select(OrderedTree::all(n, &Limits::default()).unwrap()))
}

fn shape(max: usize) -> impl Strategy<Value = BinaryTree> {
    (0..=max).prop_flat_map(|n| prop::sample::select(BinaryTree::all_shapes(n)))
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in (1..=9usize).prop_flat_map(|n| (any_map(n), any_map(n), any_map(n)))) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_applies_left_first((a, b) in (1..=9usize).prop_flat_map(|n| (any_map(n), any_map(n)))) {
        let ab = a.compose(&b).unwrap();
        for x in 1..=a.n() as u8 {
            prop_assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
    }

    #[test]
    fn order_preserving_maps_are_closed((a, b, _) in sized_triple(10)) {
        prop_assert!(a.is_order_preserving());
        prop_assert!(a.compose(&b).unwrap().is_order_preserving());
    }

    #[test]
    fn dual_reverses_products((a, b, _) in sized_triple(6)) {
        let ab = a.compose(&b).unwrap().higgins_dual().unwrap();
        let ba = b.higgins_dual().unwrap().compose(&a.higgins_dual().unwrap()).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn dual_is_order_preserving((a, _, _) in sized_triple(8)) {
        let d = a.higgins_dual().unwrap();
        prop_assert_eq!(d.n(), a.n() + 1);
        prop_assert!(d.is_order_preserving());
    }

    #[test]
    fn kernel_and_values_rebuild_the_map((a, _, _) in sized_triple(10)) {
        let k = a.kernel().unwrap();
        let values: Vec<u8> = k.right_ends().iter().map(|&e| a.apply(e)).collect();
        prop_assert_eq!(Transformation::from_blocks(&k, &values).unwrap(), a.clone());
        prop_assert_eq!(k.block_count(), a.rank());
    }

    #[test]
    fn transformation_json_round_trip(a in (1..=12usize).prop_flat_map(any_map)) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Transformation>(&text).unwrap(), a);
    }

    #[test]
    fn partition_text_round_trip((n, mask) in (1..=12usize).prop_flat_map(|n| (Just(n), 0u64..1 << (n - 1)))) {
        let k = ConvexPartition::from_cut_mask(n, mask);
        prop_assert_eq!(k.cut_mask(), mask);
        let text: String = k
            .blocks()
            .map(|b| b.map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|");
        prop_assert_eq!(ConvexPartition::parse(&text).unwrap(), k);
    }

    #[test]
    fn subordination_is_reflexive_and_transitive(a in shape(6), b in shape(6), c in shape(6)) {
        prop_assert!(a.subordinates(&a));
        if a.subordinates(&b) && b.subordinates(&c) {
            prop_assert!(a.subordinates(&c));
        }
        if a.subordinates(&b) && b.subordinates(&a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn decreasing_trees_are_closed_under_mirror(t in search_tree(7)) {
        prop_assert_eq!(t.is_decreasing(), t.mirror().is_decreasing());
        prop_assert_eq!(t.mirror().mirror(), t);
    }

    #[test]
    fn tree_json_and_levels_round_trip(t in search_tree(9)) {
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(&serde_json::from_str::<OrderedTree>(&text).unwrap(), &t);
        prop_assert_eq!(&OrderedTree::from_levels(&t.levels()[1..]).unwrap(), &t);
        prop_assert_eq!(&t.diagram().to_tree().unwrap(), &t);
    }

    #[test]
    fn phi_structure(t in decreasing_tree(7)) {
        let n = t.n();
        let phi = phi_semigroup(&t).unwrap();
        prop_assert_eq!(phi.len(), 1usize << (n - 1));
        let kernels: BTreeSet<u64> = phi.iter().map(|a| a.kernel().unwrap().cut_mask()).collect();
        prop_assert_eq!(kernels.len(), phi.len());
        for a in phi.iter() {
            prop_assert!(a.is_order_preserving());
            let image = a.image_mask();
            for v in a.image() {
                prop_assert_eq!(t.omega_mask(v) & !image, 0, "ω({}) not inside im {}", v, a);
            }
        }
        let fixed = phi.to_cross_section().fixed_points();
        prop_assert!(fixed.contains(&t.root()));
        prop_assert!(fixed.len() == 1 || fixed == BTreeSet::from([1, n as u8]), "{:?}", fixed);
    }

    #[test]
    fn phi_is_closed(t in decreasing_tree(6)) {
        let phi = phi_semigroup(&t).unwrap();
        let s = phi.to_cross_section();
        for a in phi.iter() {
            for b in phi.iter() {
                prop_assert!(s.contains(&a.compose(b).unwrap()));
            }
        }
    }

    #[test]
    fn tree_is_recovered_from_phi(t in decreasing_tree(7)) {
        let s = phi_semigroup(&t).unwrap().to_cross_section();
        prop_assert_eq!(reconstruct_tree(&s).unwrap(), t);
    }

    #[test]
    fn theta_law(t in decreasing_tree(7)) {
        let phi = phi_semigroup(&t).unwrap();
        for x in t.skeleton() {
            let set = theta_set(&phi, x);
            set.check(&t).unwrap();
            prop_assert_eq!(theta_cardinality(&t, x).unwrap(), set.len() as u64);
        }
    }

    #[test]
    fn classification_is_symmetric((a, b) in (1..=6usize).prop_flat_map(|n| {
        let all = enumerate_decreasing(n, &Limits::default()).unwrap();
        (prop::sample::select(all.clone()), prop::sample::select(all))
    })) {
        prop_assert_eq!(classify(&a, &b).unwrap().isomorphic, classify(&b, &a).unwrap().isomorphic);
    }

    #[test]
    fn faithful_marking_is_forced(g in (1..=7usize).prop_flat_map(|n| prop::sample::select(BinaryTree::all_full(n)))) {
        let m = MarkedTree::natural(&g).unwrap();
        // a vertex's interval is exactly the in-order positions of its leaves
        let inorder = g.inorder();
        let leaf_rank: Vec<Option<u8>> = {
            let mut r = vec![None; g.len()];
            let mut k = 0;
            for &v in &inorder {
                if g.is_leaf(v) {
                    k += 1;
                    r[v] = Some(k);
                }
            }
            r
        };
        let below = |mut w: usize, v: usize| loop {
            if w == v {
                break true;
            }
            match g.parent(w) {
                Some(p) => w = p,
                None => break false,
            }
        };
        for v in 0..g.len() {
            let want: Vec<u8> = inorder.iter().filter(|&&w| below(w, v)).filter_map(|&w| leaf_rank[w]).collect();
            prop_assert_eq!(m.interval(v), &want[..]);
        }
    }
}

#[test]
fn respectful_trees_have_lawful_l_sections() {
    let limits = Limits::default();
    for n in 1..=6 {
        for g in enumerate_respectful(n, &limits).unwrap() {
            let l = MarkedTree::natural(&g).unwrap().l_cross_section().unwrap();
            assert_eq!(l.len(), (1 << n) - 1);
        }
    }
}

#[test]
fn classification_agrees_with_search_at_six() {
    let limits = Limits::default();
    let trees = enumerate_decreasing(6, &limits).unwrap();
    let sections: Vec<_> = trees
        .iter()
        .map(|t| phi_semigroup(t).unwrap().to_cross_section())
        .collect();
    for (i, a) in trees.iter().enumerate() {
        for (j, b) in trees.iter().enumerate().skip(i) {
            let found = oracle_semigroup_iso(&sections[i], &sections[j], &limits)
                .unwrap()
                .is_some();
            assert_eq!(classify(a, b).unwrap().isomorphic, found, "{a:?} vs {b:?}");
        }
    }
}
