//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use parking_algebra::deformation::*;
use parking_algebra::error::Limits;
use parking_algebra::exact::{determinant, factorial, stirling2};
use parking_algebra::graph::{activity_distribution, enumerate_spanning_trees, enumerate_subforests, Digraph};
use parking_algebra::ideal::*;
use parking_algebra::io::named_family;
use parking_algebra::monomial::Monomial;
use parking_algebra::parking::*;
use parking_algebra::resolution::*;
use parking_algebra::sandpile::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lim() -> Limits {
    Limits::default()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn random_digraph(rng: &mut ChaCha8Rng, n: usize, max_entry: u32) -> Digraph {
    let adj = (0..=n).map(|i| (0..=n).map(|j| if i == j { 0 } else { rng.gen_range(0..=max_entry) }).collect()).collect();
    Digraph::new(adj).expect("valid adjacency")
}

fn random_undirected(rng: &mut ChaCha8Rng, n: usize, max_mult: u32) -> Digraph {
    let mut adj = vec![vec![0u32; n + 1]; n + 1];
    for i in 0..=n {
        for j in i + 1..=n {
            let m = rng.gen_range(0..=max_mult);
            adj[i][j] = m;
            adj[j][i] = m;
        }
    }
    Digraph::new(adj).expect("valid adjacency")
}

fn c1_example_graph() -> Outcome {
    let g = Digraph::example();
    ensure!(g.spanning_tree_count() == BigInt::from(8), "tree count {}", g.spanning_tree_count());
    ensure!(enumerate_spanning_trees(&g, &lim()).map_err(err)?.len() == 8, "enumerated trees differ");
    let mut parking = enumerate_g_parking(&g, &lim()).map_err(err)?;
    let mut listed: Vec<Vec<u32>> = [
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [2, 0, 0],
        [1, 1, 0],
        [0, 1, 1],
        [0, 0, 2],
    ]
    .iter()
    .map(|b| b.to_vec())
    .collect();
    parking.sort();
    listed.sort();
    ensure!(parking == listed, "parking functions {parking:?}");
    let f = graph_family(&g, &lim()).map_err(err)?;
    let report = verify_span(&f, &power_generators(&g, &lim()).map_err(err)?, None, &lim()).map_err(err)?;
    ensure!(report.hilb_a == [1, 3, 4] && report.hilb_b == [1, 3, 4], "Hilbert series {report:?}");
    Ok(())
}

fn c2_classical() -> Outcome {
    for (n, count) in [(2usize, 3u64), (3, 16), (4, 125)] {
        let g = Digraph::complete(n);
        let parking = enumerate_g_parking(&g, &lim()).map_err(err)?.len() as u64;
        ensure!(parking == count, "n={n}: {parking} parking functions");
        ensure!(parking == (n as u64 + 1).pow(n as u32 - 1), "n={n}: not (n+1)^(n-1)");
        let gens: Vec<HomogeneousPolynomial> =
            power_generators(&g, &lim()).map_err(err)?.into_iter().map(|(_, p)| p).collect();
        let f = graph_family(&g, &lim()).map_err(err)?;
        let cap = socle_bound(&f).expect("singletons present") as usize + 1;
        let dims = quotient_graded_dims(n, &gens, cap, &lim()).map_err(err)?;
        ensure!(dims.total() == count, "n={n}: dim B = {}", dims.total());
    }
    Ok(())
}

fn c3_kl() -> Outcome {
    for (n, k, l) in [(2usize, 1u32, 2u32), (2, 2, 1), (3, 1, 2)] {
        let count = enumerate_kl_parking(n, k, l, &lim()).map_err(err)?.len() as u64;
        let formula = u64::from(l) * u64::from(l + k * n as u32).pow(n as u32 - 1);
        ensure!(count == formula, "({n},{k},{l}): {count} vs {formula}");
        let det = determinant(&Digraph::complete_kl(n, k, l).truncated_laplacian()).map_err(err)?;
        ensure!(det == BigInt::from(count), "({n},{k},{l}): det L = {det}");
    }
    Ok(())
}

fn c4_resolutions() -> Outcome {
    for (name, display) in [
        ("res1", "0 → S(-6)^6 → S(-5)^12 → S(-3)^4 ⊕ S(-4)^3 → S"),
        ("res2", "0 → S(-5)^4 → S(-4)^9 → S(-2)^2 ⊕ S(-3)^4 → S"),
        ("res3", "0 → S(-4) ⊕ S(-5) → S(-3)^2 ⊕ S(-4) → S"),
    ] {
        let f = named_family(name).map_err(err)?;
        let r = order_complex_resolution(&f.to_poset(), &lim()).map_err(err)?;
        let shown = r.resolution.to_string();
        ensure!(shown == display, "{name}: {shown}");
    }
    for n in 1..=5usize {
        let f = graph_family(&Digraph::complete(n), &lim()).map_err(err)?;
        let total = betti_numbers(&f, &lim()).map_err(err)?.resolution.total_betti();
        for k in 1..=n {
            let expect = factorial(k as u32) * stirling2(n as u32 + 1, k as u32 + 1);
            ensure!(BigInt::from(total[k]) == expect, "n={n}: β_{k} = {} vs {expect}", total[k]);
        }
    }
    Ok(())
}

fn c5_scarf() -> Outcome {
    let res3 = named_family("res3").map_err(err)?;
    let complex = scarf_complex(&res3.monomials(), &lim()).map_err(err)?;
    ensure!(!complex.is_connected(), "res3 Scarf complex is connected");
    let k4 = named_family("res1").map_err(err)?;
    ensure!(compare_order_scarf(&k4.to_poset(), &lim()).map_err(err)?, "K4 complexes differ");
    ensure!(!compare_order_scarf(&res3.to_poset(), &lim()).map_err(err)?, "res3 complexes agree");
    let res4 = named_family("res4").map_err(err)?;
    ensure!(!compare_order_scarf(&res4.to_poset(), &lim()).map_err(err)?, "res4 complexes agree");
    ensure!(!order_complex_resolution(&res4.to_poset(), &lim()).map_err(err)?.minimal, "res4 order complex minimal");
    Ok(())
}

fn c6_rho_table() -> Outcome {
    for (values, dim) in [
        (vec![4, 2, 1], 25u64),
        (vec![8, 5, 1], 142),
        (vec![6, 4, 3], 153),
        (vec![8, 5, 3], 306),
        (vec![6, 4, 3, 2], 632),
    ] {
        let rho = DegreeFunction::new(values.clone()).map_err(err)?;
        let f = rho_family(&rho, &lim()).map_err(err)?;
        let d = dimension_chain_formula(&f, &lim()).map_err(err)?;
        ensure!(d == BigInt::from(dim), "{values:?}: dim {d}");
        let parking = enumerate_rho_parking(&rho, &lim()).map_err(err)?.len() as u64;
        ensure!(parking == dim, "{values:?}: {parking} ρ-parking functions");
    }
    for values in [vec![4, 2, 1], vec![6, 4, 3]] {
        let probe = compare_rho(&DegreeFunction::new(values.clone()).map_err(err)?, &lim()).map_err(err)?;
        ensure!(probe.report.equal, "{values:?}: {:?}", probe.report);
    }
    let probe = compare_rho(&DegreeFunction::new(vec![9, 6, 3, 1]).map_err(err)?, &lim()).map_err(err)?;
    ensure!(!probe.report.equal, "(9,6,3,1) unexpectedly equal");
    ensure!(probe.report.termwise_ge, "(9,6,3,1) not termwise A ≥ B");
    Ok(())
}

fn c7_square_free() -> Outcome {
    let g = Digraph::example();
    let el = g.edge_list().map_err(err)?;
    let cg = cg_graded_dims(&el, &lim()).map_err(err)?;
    ensure!(cg.dims == [1, 3, 4], "C_G dims {:?}", cg.dims);
    let act = activity_distribution(&el, &lim()).map_err(err)?;
    for (k, &d) in cg.dims.iter().enumerate() {
        let a = act.get(&(el.len() - el.n() - k)).copied().unwrap_or(0);
        ensure!(a == d, "degree {k}: activity count {a} vs {d}");
    }
    let gens: Vec<HomogeneousPolynomial> =
        power_generators(&g, &lim()).map_err(err)?.into_iter().map(|(_, p)| p).collect();
    let b = quotient_graded_dims(3, &gens, 3, &lim()).map_err(err)?;
    ensure!(b.dims == [1, 3, 4, 0], "B_G dims {:?}", b.dims);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 10 {
        let n = rng.gen_range(1..=3);
        let g = random_undirected(&mut rng, n, 2);
        let edges: Vec<(usize, usize)> =
            (0..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).filter(|&(u, v)| g.a(u, v) > 0).collect();
        if edges.is_empty() {
            continue;
        }
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        let total = |h: &Digraph| -> Result<u64, String> {
            Ok(cg_graded_dims(&h.edge_list().map_err(err)?, &lim()).map_err(err)?.total())
        };
        let whole = total(&g)?;
        let split = total(&g.delete_edge(u, v).map_err(err)?)? + total(&g.contract_edge(u, v).map_err(err)?)?;
        ensure!(whole == split, "edge {u}-{v} of {:?}: {whole} vs {split}", g.adjacency());
        tested += 1;
    }
    Ok(())
}

fn c8_forests() -> Outcome {
    for (n, total) in [(2usize, 7u64), (3, 38)] {
        let el = Digraph::complete(n).edge_list().map_err(err)?;
        let report = forest_check(&el, &lim()).map_err(err)?;
        let quotient: u64 = report.hilb_b.iter().sum();
        let forests = enumerate_subforests(&el, &lim()).map_err(err)?.len() as u64;
        let almost = enumerate_almost_parking(n, &lim()).map_err(err)?.len() as u64;
        ensure!(quotient == total && forests == total && almost == total, "K{}: {quotient}/{forests}/{almost}", n + 1);
        ensure!(report.equal, "K{}: graded counts differ {report:?}", n + 1);
    }
    Ok(())
}

fn c9_sandpile() -> Outcome {
    for (g, det) in [(Digraph::example(), 8usize), (Digraph::complete(3), 16)] {
        let report = parking_bijection_check(&g, &lim()).map_err(err)?;
        ensure!(report.recurrent == det, "|R| = {}", report.recurrent);
        ensure!(report.determinant == det.to_string(), "det Δ = {}", report.determinant);
        ensure!(report.matches, "duals differ from parking functions");
    }
    let d = TopplingMatrix::from_digraph(&Digraph::example()).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let u: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=10)).collect();
        let reference = stabilize(&d, &u).map_err(err)?;
        for _ in 0..5 {
            ensure!(stabilize_random_order(&d, &u, &mut rng).map_err(err)? == reference, "order dependence at {u:?}");
        }
        let s = reference.0;
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let ij = avalanche(&d, &avalanche(&d, &s, j).map_err(err)?, i).map_err(err)?;
        let ji = avalanche(&d, &avalanche(&d, &s, i).map_err(err)?, j).map_err(err)?;
        ensure!(ij == ji, "A_{i} A_{j} ≠ A_{j} A_{i} at {s:?}");
    }
    let skew = validate_toppling(vec![vec![3, -2], vec![0, 1]]).map_err(err)?;
    ensure!(!skew.column_sums_nonnegative, "example has nonnegative column sums");
    let rec = recurrent_class(&skew, &lim()).map_err(err)?;
    ensure!(rec.iter().all(|u| is_allowed(&skew, u)), "recurrent but not allowed");
    ensure!(BigInt::from(rec.len()) == determinant(&skew.to_matrix()).map_err(err)?, "|R| ≠ det");
    Ok(())
}

fn c10_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let g = random_digraph(&mut rng, n, 2);
        let parking = enumerate_g_parking(&g, &lim()).map_err(err)?.len();
        let det = determinant(&g.truncated_laplacian()).map_err(err)?;
        ensure!(BigInt::from(parking) == det, "{:?}: {parking} vs det {det}", g.adjacency());
    }

    let mut families = 0;
    while families < 30 {
        let f = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=3);
            let g = random_digraph(&mut rng, n, 2);
            let f = graph_family(&g, &lim()).map_err(err)?;
            if !f.has_all_singletons() || f.monomials().iter().any(Monomial::is_one) {
                continue;
            }
            f
        } else {
            let n = rng.gen_range(1..=3);
            let mut v: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            rho_family(&DegreeFunction::new(v).map_err(err)?, &lim()).map_err(err)?
        };
        let gens = random_deformation(&f, rng.gen(), &lim()).map_err(err)?;
        let report = verify_span(&f, &gens, None, &lim()).map_err(err)?;
        ensure!(report.termwise_ge, "A < B somewhere: {report:?}");
        families += 1;
    }

    for name in ["example-graph", "res1", "res2", "res3", "res4"] {
        let f = named_family(name).map_err(err)?;
        let poset = f.to_poset();
        let top = f.monomials().iter().map(Monomial::degree).max().unwrap_or(0) as u32;
        for _ in 0..50 {
            let m = Monomial::new((0..f.n()).map(|_| rng.gen_range(0..=top)).collect());
            let ranks = subcomplex_homology(&poset, &m, &lim()).map_err(err)?;
            let empty = !f.monomials().iter().any(|g| g.divides(&m));
            let acyclic = if empty { ranks == [1] } else { ranks.iter().all(|&r| r == 0) };
            ensure!(acyclic, "{name}: Δ≤{m} has homology {ranks:?}");
        }
    }

    let q_minus_one = |rho: &DegreeFunction| -> Result<(BigInt, u64), String> {
        let series = weight_series(&enumerate_rho_parking(rho, &lim()).map_err(err)?);
        let excess: i64 = rho.values().iter().map(|&v| i64::from(v)).sum::<i64>() - rho.n() as i64;
        let sign = if excess % 2 == 0 { 1 } else { -1 };
        Ok((series.eval_i64(-1) * sign, descent_pattern_count(rho, &lim()).map_err(err)?))
    };
    let mut rhos: Vec<DegreeFunction> = Vec::new();
    for _ in 0..10 {
        let n = rng.gen_range(1..=5);
        let mut v: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        rhos.push(DegreeFunction::new(v).map_err(err)?);
    }
    rhos.push(DegreeFunction::new(vec![5, 4, 2]).map_err(err)?);
    for rho in &rhos {
        let (value, count) = q_minus_one(rho)?;
        ensure!(value == BigInt::from(count), "{:?}: Hilb(-1) {value} vs {count}", rho.values());
        if rho.values().last().is_some_and(|v| v % 2 == 0) {
            ensure!(count == 0, "{:?}: ρ_n even but {count} permutations", rho.values());
        }
    }
    for (n, zigzag) in [(1u32, 1u64), (2, 1), (3, 2), (4, 5), (5, 16)] {
        let rho = DegreeFunction::new((1..=n).rev().collect()).map_err(err)?;
        let (value, count) = q_minus_one(&rho)?;
        ensure!(count == zigzag && value == BigInt::from(zigzag), "(n,…,1) n={n}: {value}, {count}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 example graph", c1_example_graph, Duration::from_secs(1)),
        ("2 classical parking", c2_classical, Duration::from_secs(30)),
        ("3 (k,l) parking", c3_kl, Duration::from_secs(10)),
        ("4 resolutions", c4_resolutions, Duration::from_secs(5)),
        ("5 Scarf complexes", c5_scarf, Duration::from_secs(5)),
        ("6 ρ table", c6_rho_table, Duration::from_secs(300)),
        ("7 square-free algebra", c7_square_free, Duration::from_secs(30)),
        ("8 forests", c8_forests, Duration::from_secs(30)),
        ("9 sandpiles", c9_sandpile, Duration::from_secs(30)),
        ("10 property suites", c10_properties, Duration::from_secs(180)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > budget {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
