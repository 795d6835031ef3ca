//! Randomized invariants. Graphs are drawn by applying random operation
//! sequences to the seeds, so every sample lies in the generated family.

use std::collections::BTreeSet;

use proptest::prelude::*;

use stratifold::canonical::{
    center, decode, eccentricity, encode, symmetry_classes, CanonicalString,
};
use stratifold::generator::{apply_o1, apply_o1star, apply_o2, inverse_witness, InverseWitness};
use stratifold::graph::{
    b111, b12, census, is_isomorphic_bruteforce, relabel, validate, Color, TrivalentGraph, VertexId,
};

#[derive(Debug, Clone, Copy)]
enum Step {
    Two(usize),
    One(usize),
}

fn apply_steps(mut g: TrivalentGraph, steps: &[Step]) -> TrivalentGraph {
    for &step in steps {
        let whites = g.white_vertices();
        g = match step {
            Step::Two(i) => apply_o2(&g, whites[i % whites.len()]).unwrap(),
            Step::One(i) => apply_o1(&g, whites[i % whites.len()]).unwrap(),
        };
    }
    g
}

fn arb_step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0usize..64).prop_map(Step::Two),
        (0usize..64).prop_map(Step::One),
    ]
}

fn arb_piece(max_steps: usize) -> impl Strategy<Value = TrivalentGraph> {
    (
        any::<bool>(),
        proptest::collection::vec(arb_step(), 0..=max_steps),
    )
        .prop_map(|(tall, steps)| {
            let seed = if tall { b12() } else { b111() };
            apply_steps(seed, &steps)
        })
}

fn arb_graph() -> impl Strategy<Value = TrivalentGraph> {
    prop_oneof![
        3 => arb_piece(4),
        1 => (arb_piece(2), arb_piece(2), 0usize..64, 0usize..64).prop_map(
            |(g1, g2, i, j)| {
                let w1 = g1.white_vertices();
                let w2 = g2.white_vertices();
                apply_o1star(&g1, w1[i % w1.len()], &g2, w2[j % w2.len()]).unwrap()
            }
        ),
    ]
}

fn with_permutation(
    graphs: impl Strategy<Value = TrivalentGraph>,
) -> impl Strategy<Value = (TrivalentGraph, Vec<VertexId>)> {
    graphs.prop_flat_map(|g| {
        let ids: Vec<VertexId> = g.vertices().collect();
        (Just(g), Just(ids).prop_shuffle())
    })
}

fn o2_strings(g: &TrivalentGraph, points: &[VertexId]) -> BTreeSet<String> {
    points
        .iter()
        .map(|&w| encode(&apply_o2(g, w).unwrap()).as_str().to_owned())
        .collect()
}

fn o1_strings(g: &TrivalentGraph, points: &[VertexId]) -> BTreeSet<String> {
    points
        .iter()
        .map(|&w| encode(&apply_o1(g, w).unwrap()).as_str().to_owned())
        .collect()
}

proptest! {
    #[test]
    fn generated_graphs_validate(g in arb_graph()) {
        prop_assert!(validate(&g).is_empty());
    }

    #[test]
    fn encoding_is_label_invariant((g, perm) in with_permutation(arb_graph())) {
        let relabeled = relabel(&g, &perm).unwrap();
        prop_assert_eq!(encode(&g), encode(&relabeled));
    }

    #[test]
    fn decoding_inverts_encoding(g in arb_graph()) {
        let canon = encode(&g);
        let rebuilt = decode(&canon).unwrap();
        prop_assert!(validate(&rebuilt).is_empty());
        prop_assert_eq!(encode(&rebuilt), canon);
    }

    #[test]
    fn encoded_strings_parse_and_size_correctly(g in arb_graph()) {
        let canon = encode(&g);
        let reparsed = CanonicalString::parse(canon.as_str()).unwrap();
        prop_assert_eq!(&reparsed, &canon);
        prop_assert_eq!(canon.vertex_count(), g.vertex_count());
    }

    #[test]
    fn white_vertices_have_even_eccentricity(g in arb_graph()) {
        for v in g.vertices() {
            let ecc = eccentricity(&g, v).unwrap();
            prop_assert_eq!(g.color(v) == Color::White, ecc.is_multiple_of(2));
        }
    }

    #[test]
    fn center_is_the_unique_eccentricity_minimum(g in arb_graph()) {
        let eccs: Vec<usize> = g
            .vertices()
            .map(|v| eccentricity(&g, v).unwrap())
            .collect();
        let min = *eccs.iter().min().unwrap();
        let argmins: Vec<usize> = (0..eccs.len()).filter(|&i| eccs[i] == min).collect();
        prop_assert_eq!(argmins.len(), 1);
        prop_assert_eq!(center(&g).index(), argmins[0]);
    }

    #[test]
    fn symmetric_whites_yield_the_same_graph(g in arb_graph()) {
        let classes = symmetry_classes(&g);
        for class in classes.classes() {
            let first = encode(&apply_o2(&g, class[0]).unwrap());
            for &w in &class[1..] {
                prop_assert_eq!(&encode(&apply_o2(&g, w).unwrap()), &first);
            }
        }
    }

    #[test]
    fn class_representatives_lose_no_attachment_results(g in arb_graph()) {
        let whites = g.white_vertices();
        let reps = symmetry_classes(&g).representatives();
        prop_assert_eq!(o2_strings(&g, &whites), o2_strings(&g, &reps));
        prop_assert_eq!(o1_strings(&g, &whites), o1_strings(&g, &reps));
    }

    #[test]
    fn operations_add_the_promised_whites(
        g in arb_graph(),
        h in arb_piece(2),
        i in 0usize..64,
        j in 0usize..64,
    ) {
        let gw = g.white_vertices();
        let hw = h.white_vertices();
        let a = gw[i % gw.len()];
        let b = hw[j % hw.len()];
        let base = census(&g).white;
        prop_assert_eq!(census(&apply_o2(&g, a).unwrap()).white, base + 1);
        prop_assert_eq!(census(&apply_o1(&g, a).unwrap()).white, base + 2);
        prop_assert_eq!(
            census(&apply_o1star(&g, a, &h, b).unwrap()).white,
            base + census(&h).white + 1
        );
    }

    #[test]
    fn witnesses_rebuild_their_graph(g in arb_graph()) {
        prop_assume!(census(&g).white >= 4);
        let witness = inverse_witness(&g).unwrap();
        match &witness {
            InverseWitness::O2 { precursor, .. } | InverseWitness::O1 { precursor, .. } => {
                prop_assert!(validate(precursor).is_empty());
            }
            InverseWitness::O1Star { left, right, .. } => {
                prop_assert!(validate(left).is_empty());
                prop_assert!(validate(right).is_empty());
            }
        }
        prop_assert_eq!(encode(&witness.reapply()), encode(&g));
    }

    #[test]
    fn oracle_accepts_relabelings((g, perm) in with_permutation(arb_piece(2))) {
        let relabeled = relabel(&g, &perm).unwrap();
        prop_assert!(is_isomorphic_bruteforce(&g, &relabeled).unwrap());
    }
}
