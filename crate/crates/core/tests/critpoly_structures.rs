use critgraph::iso::{connected_simple_graphs, is_isomorphic};
use critgraph::json::parse_graph;
use critgraph::poly::{bipartite_k2q_det, complete_graph_det, extend_pendant_form, laplacian_line, raw_linear_in_t};
use critgraph::structures::*;
use critgraph::{evaluate, linear_in_t, matrix_at, DiagonalAssignment, ExactMatrix, Family, LinearForm, Multigraph};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn fam(s: &str) -> Multigraph {
    parse_graph(s).unwrap()
}

fn da(v: &[u64]) -> DiagonalAssignment {
    DiagonalAssignment::from_u64(v).unwrap()
}

fn ev(g: &Multigraph, v: &[u64]) -> BigInt {
    evaluate(g, &da(v)).unwrap()
}

fn lf(a: i64, c: i64) -> LinearForm {
    LinearForm::new(b(a), b(c)).unwrap()
}

#[test]
fn matrices_match_displayed_forms() {
    let m = matrix_at(&fam("A2"), &da(&[5, 7])).unwrap();
    assert_eq!(m, ExactMatrix::from_i64_rows(&[vec![5, -1], vec![-1, 7]]).unwrap());
    let m = matrix_at(&fam("banana(2)"), &da(&[5, 7])).unwrap();
    assert_eq!(m, ExactMatrix::from_i64_rows(&[vec![5, -2], vec![-2, 7]]).unwrap());
    for (e1, e2, e3) in [(1, 1, 1), (2, 1, 1), (2, 3, 1), (1, 2, 3)] {
        let g = fam(&format!("C3({e1},{e2},{e3})"));
        for (x, y, z) in [(2i64, 2, 2), (3, 5, 7), (4, 9, 2)] {
            let want = x * y * z - e1 * e1 * x - e2 * e2 * y - e3 * e3 * z - 2 * e1 * e2 * e3;
            assert_eq!(ev(&g, &[x as u64, y as u64, z as u64]), b(want));
        }
    }
    assert!(matrix_at(&fam("A3"), &da(&[2, 2])).is_err());
}

#[test]
fn evaluate_examples() {
    assert_eq!(ev(&fam("C3"), &[2, 2, 2]), b(0));
    assert_eq!(ev(&fam("A3(2,1)"), &[3, 2, 2]), b(1));
    // The diamond with hub first, then the path; the two degree-3 vertices are the hub and the path centre.
    let cone = fam("cone(A3)");
    assert_eq!(ev(&cone, &[2, 2, 3, 5]), b(1));
    let diamond = Multigraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
    assert!(is_isomorphic(&cone, &diamond));
}

#[test]
fn linear_forms() {
    for n in 2..10 {
        let g = fam(&format!("A{n}"));
        let rest = DiagonalAssignment::constant(n - 1, 2).unwrap();
        assert_eq!(linear_in_t(&g, 0, &rest).unwrap(), lf(n as i64, n as i64 - 1));
    }
    for n in 3..10 {
        let g = fam(&format!("C{n}+"));
        let rest = DiagonalAssignment::constant(n, 2).unwrap();
        // t sits on the cycle vertex next to the one carrying the tail.
        assert_eq!(linear_in_t(&g, 0, &rest).unwrap(), lf(n as i64 + 1, 3 * n as i64 + 2));
        assert!(g.adjacent(0, 1) && g.valency(1) == 3);
    }
    for n in 4..10 {
        let g = fam(&format!("D{n}"));
        let mut rest = vec![2u64; n - 1];
        rest[n - 2] = 3;
        assert_eq!(linear_in_t(&g, 0, &da(&rest)).unwrap(), lf(n as i64 + 3, n as i64 + 2));
        assert_eq!(g.valency(0), 1);
        assert_eq!(g.valency(n - 1), 1);
    }
    // alpha = det of the A_2 block at (1,1) is 0.
    let k3 = fam("K3");
    assert!(linear_in_t(&k3, 0, &da(&[1, 1])).is_err());
    assert_eq!(raw_linear_in_t(&k3, 0, &da(&[1, 1])).unwrap(), (b(0), b(4)));
}

#[test]
fn laplacian_lines() {
    let c3 = fam("C3");
    for i in 0..3 {
        assert_eq!(laplacian_line(&c3, i).unwrap(), lf(3, 6));
    }
    for s in ["A5", "D6", "E7", "S6"] {
        let g = fam(s);
        for i in 0..g.order() {
            assert_eq!(laplacian_line(&g, i).unwrap(), lf(1, g.degree(i) as i64));
        }
    }
    for n in 3..10 {
        let g = fam(&format!("C{n}"));
        let mut rest = vec![2u64; n - 1];
        rest[n - 2] = 3;
        let want = lf(2 * n as i64 - 1, 3 * n as i64 - 2);
        assert_eq!(linear_in_t(&g, 0, &da(&rest)).unwrap(), want);
        assert!(want.is_coprime());
    }
    assert!(laplacian_line(&Multigraph::empty(2).unwrap(), 0).is_err());
}

#[test]
fn closed_forms_examples() {
    assert_eq!(complete_graph_det(&da(&[2, 2, 2])), b(0));
    assert_eq!(complete_graph_det(&da(&[2, 2, 2, 2])), b(-27));
    for (x, y) in [(2u64, 3u64), (5, 7)] {
        assert_eq!(complete_graph_det(&da(&[x, y])), b((x * y) as i64 - 1));
    }
    for (t, x, y) in [(2i64, 3i64, 4u64), (5, 7, 2)] {
        assert_eq!(bipartite_k2q_det(&b(t), &b(x), &da(&[y])), b(t * x * y as i64 - t - x));
    }
    assert_eq!(bipartite_k2q_det(&b(2), &b(2), &da(&[2, 2])), b(0));
    // y = (2,3,5): the form in t is (x*30 - 31)t - 31x; any x coprime to 31 gives gcd 1.
    for x in [2i64, 3, 4, 5, 30, 32] {
        let at = |t: i64| bipartite_k2q_det(&b(t), &b(x), &da(&[2, 3, 5]));
        let beta = -at(0);
        let alpha = at(1) + &beta;
        assert_eq!(alpha, b(30 * x - 31));
        assert!(alpha.gcd(&beta).is_one(), "x = {x}");
    }
}

#[test]
fn pendant_extension() {
    let (f, g) = extend_pendant_form(&b(1), &b(1), &lf(1, 0)).unwrap();
    assert_eq!(f, lf(1, 1));
    assert!(g.is_one());
    for n in 2..9i64 {
        let (f, _) = extend_pendant_form(&b(1), &b(1), &lf(n, n - 1)).unwrap();
        assert_eq!(f, lf(n, 2 * n - 1));
        // A_n with t at an end, then a new vertex with diagonal 1 hanging off that end.
        let h = fam(&format!("A{n}")).attach_pendant(0, 1).unwrap();
        let mut point = vec![0u64; n as usize + 1];
        point[n as usize] = 1;
        for t in [2u64, 3, 11] {
            point[0] = t;
            for p in point.iter_mut().take(n as usize).skip(1) {
                *p = 2;
            }
            assert_eq!(ev(&h, &point), f.at(&BigInt::from(t)));
        }
    }
    for (q, e, a, c) in [(5i64, 2i64, 3i64, 1i64), (7, 3, 4, 5), (11, 1, 6, 7)] {
        let (f, g) = extend_pendant_form(&b(q), &b(e), &lf(a, c)).unwrap();
        assert_eq!(f, lf(q * a, q * c + e * e * a));
        assert!(g.is_one());
    }
}

#[test]
fn closed_forms_match_determinant() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let x: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=20)).collect();
        assert_eq!(complete_graph_det(&da(&x)), ev(&Family::K(n).build().unwrap(), &x));
    }
    for _ in 0..1000 {
        let q = rng.gen_range(1..=6);
        let t = rng.gen_range(1..=30u64);
        let x = rng.gen_range(1..=30u64);
        let y: Vec<u64> = (0..q).map(|_| rng.gen_range(1..=30)).collect();
        let mut point = vec![t, x];
        point.extend(&y);
        assert_eq!(
            bipartite_k2q_det(&b(t as i64), &b(x as i64), &da(&y)),
            ev(&Family::Kpq(2, q).build().unwrap(), &point)
        );
    }
}

fn graph_and_point() -> impl Strategy<Value = (Multigraph, Vec<u64>)> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (prop::collection::vec(0u32..=2, pairs), prop::collection::vec(1u64..=9, n)).prop_map(move |(m, d)| {
            let mut g = Multigraph::empty(n).unwrap();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if m[k] > 0 {
                        g.add_edges(i, j, m[k]).unwrap();
                    }
                    k += 1;
                }
            }
            (g, d)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn evaluate_is_relabel_invariant((g, d) in graph_and_point(), seed in any::<u64>()) {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.permuted(&perm).unwrap();
        // permuted: new vertex i is old vertex perm[i].
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(h.multiplicity(i, j), g.multiplicity(perm[i], perm[j]));
            }
        }
        let pd: Vec<u64> = perm.iter().map(|&p| d[p]).collect();
        prop_assert_eq!(ev(&g, &d), ev(&h, &pd));
    }

    #[test]
    fn linear_in_t_agrees_with_evaluate((g, d) in graph_and_point(), v in 0usize..6) {
        let n = g.order();
        let v = v % n;
        let rest: Vec<u64> = (0..n).filter(|&i| i != v).map(|i| d[i]).collect();
        let (alpha, beta) = raw_linear_in_t(&g, v, &da(&rest)).unwrap();
        for t in [0u64, 1, 2, 17] {
            let mut p = rest.clone();
            p.insert(v, t);
            let m = matrix_at(&g, &DiagonalAssignment::new(p.iter().map(|&x| BigInt::from(x)).collect()).unwrap_or_else(|_| da(&[1])));
            let direct = match m {
                Ok(m) => m.determinant(),
                // t = 0 is not a valid diagonal entry; compare through the raw matrix instead.
                Err(_) => {
                    let mut m = matrix_at(&g, &DiagonalAssignment::constant(n, 1).unwrap()).unwrap();
                    for (i, &x) in p.iter().enumerate() {
                        m.set(i, i, BigInt::from(x));
                    }
                    m.determinant()
                }
            };
            prop_assert_eq!(direct, &alpha * BigInt::from(t) - &beta);
        }
    }

    #[test]
    fn monotone_on_pd_points((g, d) in graph_and_point(), k in 0usize..6) {
        let m = matrix_at(&g, &da(&d)).unwrap();
        if m.is_positive_definite().unwrap() {
            let mut e = d.clone();
            let k = k % d.len();
            e[k] += 1;
            prop_assert!(ev(&g, &e) > m.determinant());
        }
    }
}

#[test]
fn verify_examples() {
    for s in ["A4", "C5", "K4", "W5", "K(2,3)", "banana(3)"] {
        let st = laplacian_structure(&fam(s)).unwrap();
        assert_eq!(st.phi_order(), fam(s).spanning_tree_count().unwrap());
    }
    let d5 = fam("~D5");
    let st = structure_at(&d5, &DiagonalAssignment::constant(6, 2).unwrap()).unwrap();
    assert_eq!(st.phi_order(), b(4));
    assert!(st.is_cyclic());
    let c4 = c4_plus_structure().unwrap();
    assert_eq!(c4.phi_order(), b(1));
    assert_eq!(c4.diag.values().iter().filter(|x| **x == b(3)).count(), 1);
    let g = fam("C4");
    assert!(verify_structure(&g, &da(&[2, 2, 2, 2]), &[b(1), b(1), b(1), b(2)]).is_err());
    assert!(verify_structure(&g, &da(&[2, 2, 2, 2]), &[b(2), b(2), b(2), b(2)]).is_err());
    assert!(verify_structure(&g, &da(&[2, 2, 2, 2]), &[b(-1), b(-1), b(-1), b(-1)]).is_err());
}

#[test]
fn laplacian_groups() {
    for n in 3..9 {
        let st = laplacian_structure(&fam(&format!("C{n}"))).unwrap();
        assert!(st.is_cyclic());
        assert_eq!(st.phi_order(), b(n));
    }
    for s in ["A6", "D5", "E8", "S7"] {
        assert!(laplacian_structure(&fam(s)).unwrap().phi.is_trivial());
    }
    for n in 4..7 {
        assert!(!laplacian_structure(&fam(&format!("W{n}"))).unwrap().is_cyclic(), "W{n}");
    }
    assert!(laplacian_structure(&Multigraph::empty(2).unwrap()).is_err());
}

#[test]
fn enumeration_examples() {
    for n in 4..8 {
        let e = enumerate_structures(&fam(&format!("~D{n}")), 2, 6).unwrap();
        assert_eq!(e.structures.len(), 1);
        assert!(e.structures[0].diag.values().iter().all(|x| *x == b(2)));
        assert!(e.complete_within_box);
    }
    let e = enumerate_structures(&fam("C6+"), 2, 6).unwrap();
    let c6 = c6_plus_structure().unwrap();
    assert_eq!(c6.phi_order(), b(3));
    assert!(e.structures.iter().any(|s| s.diag == c6.diag && s.r == c6.r));
    for n in 1..7 {
        assert!(enumerate_structures(&fam(&format!("A{n}")), 2, 8).unwrap().structures.is_empty());
    }
}

#[test]
fn enumeration_matches_unpruned_scan() {
    for n in 2..=5 {
        for g in connected_simple_graphs(n) {
            let bound = if n == 5 { 5 } else { 6 };
            let fast: Vec<_> = enumerate_structures(&g, 1, bound).unwrap().structures.into_iter().map(|s| s.diag).collect();
            let slow: Vec<_> = enumerate_structures_unpruned(&g, 1, bound).unwrap().into_iter().map(|s| s.diag).collect();
            assert_eq!(fast, slow);
        }
    }
    for s in ["banana(2)", "banana(3)", "A3(2,1)", "C3(2,1,1)"] {
        let g = fam(s);
        let fast: Vec<_> = enumerate_structures(&g, 1, 6).unwrap().structures.into_iter().map(|s| s.diag).collect();
        let slow: Vec<_> = enumerate_structures_unpruned(&g, 1, 6).unwrap().into_iter().map(|s| s.diag).collect();
        assert_eq!(fast, slow, "{s}");
    }
}

#[test]
fn even_wheels() {
    let w6 = wheel_structure_even(3).unwrap();
    assert_eq!(w6.diag.values()[0], b(28));
    assert_eq!(w6.phi_order(), b(17));
    let w4 = wheel_structure_even(2).unwrap();
    assert_eq!(w4.diag.values()[0], b(10));
    assert_eq!(w4.r, [1, 3, 2, 2, 3].map(b).to_vec());
    assert_eq!(w4.phi_order(), b(11));
    assert!(w4.matrix().mul_vec(&w4.r).iter().all(|x| x.is_zero()));
    let w10 = wheel_structure_even(5).unwrap();
    assert_eq!(w10.phi_order(), b(29));
    assert!(b(29).gcd(&b(19)).is_one());
    for k in 2..=10usize {
        let s = wheel_structure_even(k).unwrap();
        assert_eq!(wheel_even_minor(&s, k), BigInt::from(4 * k - 1));
        // Deleting the hub leaves C_{2k} at (2,...,2,3,3,2,...,2).
        let rim = s.matrix().principal_minor(&[0]).determinant();
        let mut d = vec![2u64; 2 * k];
        d[k - 1] = 3;
        d[k] = 3;
        assert_eq!(rim, ev(&fam(&format!("C{}", 2 * k)), &d));
    }
}

#[test]
fn odd_wheels() {
    let w5 = wheel_structure_odd(2).unwrap();
    assert_eq!(w5.diag.values()[0], b(15));
    assert!(w5.diag.values().contains(&b(7)));
    assert_eq!(w5.phi_order(), b(25));
    assert_eq!(wheel_structure_odd(3).unwrap().phi_order(), b(49));
    for k in 2..=8 {
        assert!(!wheel_structure_odd(k).unwrap().is_cyclic());
    }
}

#[test]
fn tadpoles() {
    let s0 = tadpole_structure(0).unwrap();
    assert_eq!(s0.graph.order(), 8);
    assert_eq!(s0.phi_order(), b(5));
    let s2 = tadpole_structure(2).unwrap();
    assert_eq!(s2.phi_order(), b(9));
    assert!(s2.is_cyclic());
    assert!(b(9).gcd(&b(106)).is_one());
    let s1 = tadpole_structure(1).unwrap();
    assert_eq!(tadpole_minors(&s1).0, b(112));
}

#[test]
fn extended_dynkin_enlargements() {
    let g1 = g1_structure().unwrap();
    assert_eq!(g1.graph.order(), 9);
    assert!(g1.diag.values()[2] == b(3) && g1.matrix().determinant().is_zero());
    let unit = g1_unit_diagonal();
    assert!(unit.contains(&15));
    let m = matrix_at(&g1.graph, &da(&unit)).unwrap();
    assert_eq!(m.determinant(), b(1));
    assert!(m.is_positive_definite().unwrap());
    let g2 = g2_structure().unwrap();
    assert_eq!(g2.graph.order(), 8);
    assert!(g2.matrix().determinant().is_zero());
    let d4 = fam("~D4");
    let s = semidefinite_from_extended_dynkin(&d4, 0, Enlargement::LeafExtension).unwrap();
    assert!(is_isomorphic(&s.graph, &fam("S5+")));
    let g3 = g3_structure().unwrap();
    assert_eq!(g3.graph.order(), 7);
    // Hub of ~E6 has R entry 3.
    let e6 = fam("~E6");
    let hub = (0..7).find(|&i| e6.valency(i) == 3).unwrap();
    assert!(semidefinite_from_extended_dynkin(&e6, hub, Enlargement::TwoLeaves).is_err());
}

#[test]
fn multiples() {
    for n in 3..8 {
        let st = laplacian_structure(&fam(&format!("C{n}"))).unwrap();
        for ell in 1..5u64 {
            let (_, v) = multiples_family(&st, 0, ell).unwrap();
            assert_eq!(v, BigInt::from(ell * n));
        }
    }
    let e6 = fam("~E6");
    let st = structure_at(&e6, &DiagonalAssignment::constant(7, 2).unwrap()).unwrap();
    assert_eq!(st.phi_order(), b(3));
    let hub = (0..7).find(|&i| e6.valency(i) == 3).unwrap();
    assert_eq!(multiples_family(&st, hub, 1).unwrap().1, b(27));
    let leaf = (0..7).find(|&i| e6.valency(i) == 1).unwrap();
    assert_eq!(multiples_family(&st, leaf, 2).unwrap().1, b(6));
    let e8 = fam("~E8");
    let st = structure_at(&e8, &DiagonalAssignment::constant(9, 2).unwrap()).unwrap();
    assert!(st.phi.is_trivial());
    let one = (0..9).find(|&i| st.r[i].is_one()).unwrap();
    assert_eq!(multiples_family(&st, one, 1).unwrap().1, b(1));
}

#[test]
fn produced_structures_verify() {
    let mut all = vec![c4_plus_structure().unwrap(), c6_plus_structure().unwrap(), g1_structure().unwrap(), g2_structure().unwrap(), g3_structure().unwrap()];
    all.extend((2..6).map(|k| wheel_structure_even(k).unwrap()));
    all.extend((2..6).map(|k| wheel_structure_odd(k).unwrap()));
    all.extend((0..6).map(|k| tadpole_structure(k).unwrap()));
    for s in all {
        let again = verify_structure(&s.graph, &s.diag, &s.r).unwrap();
        assert_eq!(again.phi, s.phi);
        assert!(s.matrix().is_psd_rank_nminus1(false).unwrap());
        let order = s.phi_order();
        let rr = ExactMatrix::from_fn(s.graph.order(), |i, j| &order * &s.r[i] * &s.r[j]);
        assert_eq!(s.matrix().adjugate(), rr);
    }
}
