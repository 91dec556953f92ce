use num_bigint::BigInt;
use parking_algebra::error::Limits;
use parking_algebra::exact::determinant;
use parking_algebra::graph::{enumerate_spanning_trees, enumerate_subforests, Digraph};
use parking_algebra::parking::*;
use proptest::prelude::*;

fn lim() -> Limits {
    Limits::default()
}

fn digraph() -> impl Strategy<Value = Digraph> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(0u32..=3, n + 1), n + 1)
            .prop_map(|rows| Digraph::new(rows).unwrap())
    })
}

fn degree_function(max_n: usize, max_value: u32) -> impl Strategy<Value = DegreeFunction> {
    proptest::collection::vec(1u32..=max_value, 1..=max_n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        DegreeFunction::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn parking_count_is_tree_count(g in digraph()) {
        let parking = enumerate_g_parking(&g, &lim()).unwrap();
        let det = determinant(&g.truncated_laplacian()).unwrap();
        prop_assert_eq!(BigInt::from(parking.len()), det);
        let wide = Limits { max_edges: 64, ..lim() };
        prop_assert_eq!(enumerate_spanning_trees(&g, &wide).unwrap().len(), parking.len());
        for w in parking.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn rho_series_matches_product_formula(rho in degree_function(4, 6)) {
        let direct = weight_series(&enumerate_rho_parking(&rho, &lim()).unwrap());
        prop_assert_eq!(direct, rho_hilbert_product(&rho, &lim()).unwrap());
    }

    #[test]
    fn alternating_sum_counts_descent_patterns(rho in degree_function(5, 5)) {
        let series = weight_series(&enumerate_rho_parking(&rho, &lim()).unwrap());
        let excess: i64 = rho.values().iter().map(|&v| i64::from(v)).sum::<i64>() - rho.n() as i64;
        let sign = if excess % 2 == 0 { 1 } else { -1 };
        let expected = series.eval_i64(-1) * sign;
        prop_assert_eq!(expected, BigInt::from(descent_pattern_count(&rho, &lim()).unwrap()));
        if rho.values().last().unwrap() % 2 == 0 {
            prop_assert_eq!(descent_pattern_count(&rho, &lim()).unwrap(), 0);
        }
    }
}

#[test]
fn complete_graph_parking_is_classical() {
    for n in 1..=4usize {
        let g = enumerate_g_parking(&Digraph::complete(n), &lim()).unwrap();
        let box_side = n as u32;
        let mut classical = Vec::new();
        let mut b = vec![0u32; n];
        'outer: loop {
            let mut c = b.clone();
            c.sort_unstable();
            if c.iter().enumerate().all(|(i, &v)| (v as usize) < i + 1) {
                classical.push(b.clone());
            }
            for k in (0..n).rev() {
                b[k] += 1;
                if b[k] < box_side {
                    continue 'outer;
                }
                b[k] = 0;
            }
            break;
        }
        assert_eq!(g, classical);
        assert_eq!(g.len(), (n + 1).pow(n as u32 - 1));
    }
}

#[test]
fn kl_counts() {
    for n in 1..=4usize {
        for k in 1..=3u32 {
            for l in 1..=3u32 {
                let count = enumerate_kl_parking(n, k, l, &lim()).unwrap().len() as u64;
                let expected = u64::from(l) * u64::from(l + k * n as u32).pow(n as u32 - 1);
                assert_eq!(count, expected, "n={n} k={k} l={l}");
            }
        }
    }
}

#[test]
fn zigzag_numbers() {
    // Alternating permutations: 1, 1, 2, 5, 16, 61.
    for (n, e) in [(1usize, 1u64), (2, 1), (3, 2), (4, 5), (5, 16), (6, 61)] {
        let rho = DegreeFunction::new((1..=n as u32).rev().collect()).unwrap();
        assert_eq!(descent_pattern_count(&rho, &lim()).unwrap(), e, "n={n}");
    }
}

#[test]
fn almost_parking_counts_forests() {
    for (n, forests) in [(1usize, 2usize), (2, 7), (3, 38), (4, 291)] {
        let almost = enumerate_almost_parking(n, &lim()).unwrap();
        assert_eq!(almost.len(), forests);
        let el = Digraph::complete(n).edge_list().unwrap();
        assert_eq!(enumerate_subforests(&el, &lim()).unwrap().len(), forests);
        let classical = enumerate_g_parking(&Digraph::complete(n), &lim()).unwrap();
        assert!(classical.iter().all(|b| almost.binary_search(b).is_ok()));
    }
}

#[test]
fn isolated_vertex_has_no_parking() {
    let g = Digraph::from_edges(2, &[(0, 1)]).unwrap();
    assert!(enumerate_g_parking(&g, &lim()).unwrap().is_empty());
    assert!(enumerate_rho_parking(&DegreeFunction::new(vec![2, 0]).unwrap(), &lim()).unwrap().is_empty());
}
