//! Cross-validation of the face enumeration against the brute-force
//! equality-pattern oracle, plus structural face-complex checks.

use bicomb_core::gallery;
use bicomb_core::oracle;
use bicomb_core::tight_span::{
    enumerate_faces, face_dim_by_linear_algebra, is_extremal, kuratowski_embed, tight_span_dim,
    DEFAULT_FACE_CAP,
};
use bicomb_core::Rat;
use std::collections::BTreeSet;

#[test]
fn face_lattice_matches_oracle_on_seeded_spaces() {
    for seed in 0..12u64 {
        let n = 2 + (seed as usize % 4); // sizes 2..=5
        let space = gallery::random_metric(n, seed);
        let complex = enumerate_faces(&space, DEFAULT_FACE_CAP).unwrap();
        let ours: BTreeSet<(Vec<(usize, usize)>, usize)> = complex
            .faces
            .iter()
            .map(|f| (f.graph.edges().collect(), f.rank))
            .collect();
        let oracle: BTreeSet<(Vec<(usize, usize)>, usize)> =
            oracle::faces_by_equality_patterns(&space)
                .into_iter()
                .map(|(graph, dim)| (graph.edges().collect(), dim))
                .collect();
        assert_eq!(ours, oracle, "seed {seed}");
        assert!(complex.dim <= n / 2);
        assert_eq!(complex.dim, oracle::tight_span_dim_by_patterns(&space));
    }
}

#[test]
fn representatives_are_extremal_and_satisfy_the_norm_identity() {
    for seed in 20..26u64 {
        let space = gallery::random_metric(5, seed);
        let complex = enumerate_faces(&space, DEFAULT_FACE_CAP).unwrap();
        for face in &complex.faces {
            assert!(is_extremal(&face.representative, &space));
            assert_eq!(face.rank, face_dim_by_linear_algebra::<Rat>(&face.graph));
            // || f - d_x ||_inf = f(x) pins membership in the span.
            for x in 0..space.n_points() {
                let dx = kuratowski_embed(&space, x);
                assert_eq!(
                    face.representative.sup_distance(&dx),
                    *face.representative.get(x)
                );
            }
        }
    }
}

#[test]
fn subface_relation_is_reverse_inclusion() {
    let space = gallery::random_metric(4, 3);
    let complex = enumerate_faces(&space, DEFAULT_FACE_CAP).unwrap();
    for a in &complex.faces {
        for b in &complex.faces {
            let vertex_subset = a
                .vertex_indices
                .iter()
                .all(|i| b.vertex_indices.contains(i));
            if b.graph.is_subgraph_of(&a.graph) {
                // P(A') is a face of P(A): its corners are corners of P(A).
                assert!(vertex_subset);
                assert!(a.rank <= b.rank);
            }
        }
    }
}

#[test]
fn polygon_dims_are_monotone() {
    let mut last = 0;
    for n in 1..=3 {
        let dim = tight_span_dim(&gallery::ngon(2 * n).unwrap(), DEFAULT_FACE_CAP).unwrap();
        assert_eq!(dim, n);
        assert!(dim >= last);
        last = dim;
    }
}

#[test]
fn five_point_spaces_cap_at_dimension_two() {
    for seed in 100..140u64 {
        let space = gallery::random_metric(5, seed);
        assert!(tight_span_dim(&space, DEFAULT_FACE_CAP).unwrap() <= 2);
    }
}
