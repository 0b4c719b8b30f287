//! Acceptance criteria 1 to 15, each reported as one PASS/FAIL line.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use critgraph::classify::{types_decompose, types_oracle, TypesResult};
use critgraph::constructive::{egyptian_search, kn_witness_from_solution, parse_solution, trivial_group_structure};
use critgraph::density::{density_certificate, progressions_from_certificate, union_density, ProgressionUnion};
use critgraph::iso::connected_simple_graphs;
use critgraph::json::parse_graph;
use critgraph::poly::{bipartite_k2q_det, complete_graph_det};
use critgraph::repro::{run_sieve_target, sieve_targets};
use critgraph::sieve::floor_value;
use critgraph::structures::{tadpole_minors, tadpole_structure, wheel_even_minor, wheel_structure_even, wheel_structure_odd};
use critgraph::{evaluate, matrix_at, sieve, verify_structure, DiagonalAssignment, Family, Multigraph, SieveMode};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn fam(s: &str) -> Multigraph {
    parse_graph(s).unwrap()
}

fn b(x: u64) -> BigInt {
    BigInt::from(x)
}

fn da(v: &[u64]) -> DiagonalAssignment {
    DiagonalAssignment::from_u64(v).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn dynkin_floors() -> Outcome {
    let mut rows = Vec::new();
    for n in 2..=10 {
        rows.push((Family::A(n), n as u64 + 1));
    }
    for n in 4..=10 {
        rows.push((Family::D(n), 4));
    }
    rows.extend([(Family::E(6), 3), (Family::E(7), 2), (Family::E(8), 1)]);
    for (f, want) in &rows {
        let g = f.build().unwrap();
        let got = evaluate(&g, &DiagonalAssignment::constant(g.order(), 2).unwrap()).unwrap();
        ensure(got == b(*want), || format!("{f}: {got} != {want}"))?;
        ensure(floor_value(&g, 2).unwrap() == Some(b(*want)), || format!("{f}: floor_value"))?;
    }
    Ok(format!("{} graphs", rows.len()))
}

fn a2_law() -> Outcome {
    let r = sieve(&fam("A2"), SieveMode::Any, 2, 200, 202).unwrap();
    let want: Vec<u64> = std::iter::once(0).chain((2..=201).filter(|&p| is_prime(p)).map(|p| p - 1)).collect();
    ensure(r.complement == want, || format!("complement {:?}", r.complement))?;
    Ok(format!("{} excluded values", want.len()))
}

fn a3_table() -> Outcome {
    let r = sieve(&fam("A3"), SieveMode::Any, 2, 520, 524).unwrap();
    ensure(r.complete, || "search not complete".into())?;
    let want = vec![0, 1, 2, 3, 5, 6, 9, 11, 14, 15, 35, 105, 510];
    ensure(r.complement == want, || format!("complement {:?}", r.complement))?;
    Ok("13 values".into())
}

fn tadpole_tables() -> Outcome {
    let lists: [(usize, &[u64]); 6] =
        [(2, &[0]), (3, &[0, 2, 14, 20, 26, 38, 44, 68, 254]), (4, &[2, 3, 7, 10, 19, 39, 79, 154]), (5, &[0, 2, 8, 12, 18]), (6, &[]), (7, &[6, 66, 94])];
    for (n, list) in lists {
        let id = format!("tadpole-{n}");
        let t = sieve_targets().into_iter().find(|t| t.id == id).unwrap();
        ensure(t.max_value == 300, || format!("{id}: N = {}", t.max_value))?;
        let (outcome, rep) = run_sieve_target(&t, None, None).unwrap();
        let extra: Vec<u64> = rep.complement.iter().copied().filter(|v| !list.contains(v)).collect();
        ensure(extra.is_empty(), || format!("{id}: {extra:?} not in the list"))?;
        for &v in list {
            ensure(rep.contains(v) || rep.complement.contains(&v), || format!("{id}: {v} unaccounted"))?;
        }
        ensure(outcome.pass, || format!("{id}: reproduction failed"))?;
        if n == 6 {
            ensure(rep.complement.is_empty(), || format!("tadpole-6 complement {:?}", rep.complement))?;
        }
    }
    Ok("n = 2..7".into())
}

fn tadpole_unit_value() -> Outcome {
    for n in 3..=12 {
        let mut d = vec![2u64; n + 1];
        d[0] = 3;
        let v = evaluate(&Family::CPlus(n).build().unwrap(), &da(&d)).unwrap();
        ensure(v.is_one(), || format!("C{n}+: {v}"))?;
    }
    Ok("n = 3..12".into())
}

fn even_wheels() -> Outcome {
    for k in 2..=10usize {
        let s = wheel_structure_even(k).map_err(|e| format!("k = {k}: {e}"))?;
        let again = verify_structure(&s.graph, &s.diag, &s.r).map_err(|e| e.to_string())?;
        ensure(again.phi_order() == b(6 * k as u64 - 1) && again.is_cyclic(), || format!("k = {k}: {:?}", again.phi.nontrivial()))?;
        ensure(wheel_even_minor(&s, k) == b(4 * k as u64 - 1), || format!("k = {k}: minor"))?;
    }
    Ok("k = 2..10".into())
}

fn odd_wheels() -> Outcome {
    for k in 2..=8u64 {
        let s = wheel_structure_odd(k as usize).map_err(|e| format!("k = {k}: {e}"))?;
        let again = verify_structure(&s.graph, &s.diag, &s.r).map_err(|e| e.to_string())?;
        ensure(again.phi_order() == b((2 * k + 1) * (2 * k + 1)) && !again.is_cyclic(), || format!("k = {k}: {:?}", again.phi.nontrivial()))?;
    }
    Ok("k = 2..8".into())
}

fn tadpole_structures() -> Outcome {
    for k in 0..=10u64 {
        let s = tadpole_structure(k as usize).map_err(|e| format!("k = {k}: {e}"))?;
        let again = verify_structure(&s.graph, &s.diag, &s.r).map_err(|e| e.to_string())?;
        ensure(again.phi_order() == b(2 * k + 5) && again.is_cyclic(), || format!("k = {k}: group"))?;
        let (m1, m2) = tadpole_minors(&s);
        ensure(m1 == b(16 * (2 * k + 5)) && m2 == b(2 * (12 * k + 29)), || format!("k = {k}: minors {m1}, {m2}"))?;
    }
    Ok("k = 0..10".into())
}

fn trivial_structures() -> Outcome {
    // A single vertex carries no structure: M r = 0 forces its diagonal entry to be 0.
    ensure(trivial_group_structure(&fam("A1")).is_err(), || "A1 accepted".into())?;
    let mut count = 0;
    for n in 2..=6 {
        for g in connected_simple_graphs(n) {
            let s = trivial_group_structure(&g).map_err(|e| format!("{:?}: {e}", g.edges()))?;
            let again = verify_structure(&g, &s.diag, &s.r).map_err(|e| format!("{:?}: {e}", g.edges()))?;
            ensure(again.phi.is_trivial(), || format!("{:?}: group {:?}", g.edges(), again.phi.nontrivial()))?;
            count += 1;
        }
    }
    ensure(count == 1 + 2 + 6 + 21 + 112, || format!("{count} graphs"))?;
    Ok(format!("{count} graphs"))
}

fn types_dichotomy() -> Outcome {
    let mut count = 0;
    for n in 1..=7 {
        for g in connected_simple_graphs(n) {
            let (named, seed) = types_oracle(&g);
            ensure(named != seed, || format!("{:?}: oracle dichotomy", g.edges()))?;
            let t = types_decompose(&g).map_err(|e| e.to_string())?;
            ensure(matches!(t, TypesResult::HasSeed { .. }) == seed, || format!("{:?}: {t:?}", g.edges()))?;
            if let TypesResult::HasSeed { family, map } = &t {
                let (h, _) = g.induced_subgraph(map).map_err(|e| e.to_string())?;
                ensure(critgraph::iso::is_isomorphic(&h, &family.build().unwrap()), || format!("{:?}: seed map", g.edges()))?;
            }
            count += 1;
        }
    }
    ensure(count == 1 + 1 + 2 + 6 + 21 + 112 + 853, || format!("{count} graphs"))?;
    Ok(format!("{count} graphs"))
}

fn egyptian_solution_file() -> PathBuf {
    std::env::var_os("CRITGRAPH_EGYPTIAN13").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/egyptian13.txt"))
}

fn egyptian_kn() -> Outcome {
    for n in 2..=5 {
        ensure(egyptian_search(n, 3).is_none(), || format!("n = {n}: unexpected solution"))?;
    }
    let path = egyptian_solution_file();
    let text = std::fs::read_to_string(&path).map_err(|_| format!("searches n = 2..5 empty; no 13-term solution supplied at {}", path.display()))?;
    let y = parse_solution(&text).map_err(|e| e.to_string())?;
    ensure(y.len() == 13, || format!("supplied solution has {} terms", y.len()))?;
    let w = kn_witness_from_solution(&y).map_err(|e| e.to_string())?;
    let m = matrix_at(&w.graph, &w.diag).unwrap();
    ensure(m.determinant().is_one() && m.is_positive_definite().unwrap(), || "K13 witness".into())?;
    Ok("searches n = 2..5 empty; K13 witness verified".into())
}

fn closed_forms() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=9);
        let x: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=40)).collect();
        let generic = matrix_at(&Family::K(n).build().unwrap(), &da(&x)).unwrap().determinant();
        ensure(complete_graph_det(&da(&x)) == generic, || format!("K{n} at {x:?}"))?;
    }
    for _ in 0..1000 {
        let q = rng.gen_range(1..=7);
        let t = rng.gen_range(1..=40u64);
        let x = rng.gen_range(1..=40u64);
        let y: Vec<u64> = (0..q).map(|_| rng.gen_range(1..=40)).collect();
        let mut point = vec![t, x];
        point.extend(&y);
        let generic = matrix_at(&Family::Kpq(2, q).build().unwrap(), &da(&point)).unwrap().determinant();
        ensure(bipartite_k2q_det(&b(t), &b(x), &da(&y)) == generic, || format!("K(2,{q}) at {point:?}"))?;
    }
    Ok("2000 random points".into())
}

fn banana_non_cyclic() -> Outcome {
    let g = fam("banana(2)");
    let mut reps = 0;
    for m in 2..=8u32 {
        let value = 2 * ((1u64 << m) - 2);
        let target = value + 4;
        for x in 2..=target / 2 {
            if !target.is_multiple_of(x) {
                continue;
            }
            let y = target / x;
            let mat = matrix_at(&g, &da(&[x, y])).unwrap();
            ensure(mat.determinant() == b(value), || format!("({x},{y})"))?;
            ensure(!mat.smith_normal_form().is_cyclic(), || format!("m = {m}: ({x},{y}) is cyclic"))?;
            reps += 1;
        }
    }
    Ok(format!("{reps} representations"))
}

/// All values of det over PD points of [2, hi]^n with det <= max, by direct leading-minor tests.
fn full_box_pd_values(g: &Multigraph, max: u64, hi: u64) -> std::collections::BTreeSet<u64> {
    let n = g.order();
    let mut out = std::collections::BTreeSet::new();
    let mut x = vec![2u64; n];
    loop {
        let m = matrix_at(g, &da(&x)).unwrap();
        if (1..=n).all(|k| m.leading(k).determinant() > BigInt::from(0)) {
            let d = m.determinant();
            if d <= b(max) {
                out.insert(d.to_u64().unwrap());
            }
        }
        if !critgraph::search::odometer(&mut x, 2, hi) {
            return out;
        }
    }
}

fn pd_completeness() -> Outcome {
    for s in ["A3", "D4"] {
        let g = fam(s);
        // A PD point with det <= 40 has every coordinate below 42 here, so [2, 44] holds all of them.
        let want = full_box_pd_values(&g, 40, 44);
        let r = sieve(&g, SieveMode::Pd, 2, 40, 44).unwrap();
        let got: std::collections::BTreeSet<u64> = r.hits.keys().copied().collect();
        ensure(got == want, || format!("{s}: pruned {got:?} vs full {want:?}"))?;
        let wide = sieve(&g, SieveMode::Pd, 2, 40, 400).unwrap();
        ensure(wide.hits.keys().copied().collect::<std::collections::BTreeSet<_>>() == want, || format!("{s}: box 400 differs"))?;
    }
    Ok("A3, D4".into())
}

fn density() -> Outcome {
    let mut fixtures = Vec::new();
    let mut u = ProgressionUnion::new();
    u.push(3, &[0]).unwrap();
    u.push(5, &[2]).unwrap();
    fixtures.push(u);
    let mut u = ProgressionUnion::new();
    u.push(7, &[1, 2]).unwrap();
    u.push(11, &[3]).unwrap();
    u.push(13, &[0, 5, 7]).unwrap();
    fixtures.push(u);
    let cert = density_certificate(&fam("A4")).unwrap().ok_or("no certificate for A4")?;
    fixtures.push(progressions_from_certificate(&cert, 6).unwrap().0);
    let n = 100_000u64;
    for u in &fixtures {
        let exact = union_density(u).unwrap().to_f64().unwrap();
        let product = 1.0 - u.parts().iter().map(|(a, r)| 1.0 - r.len() as f64 / *a as f64).product::<f64>();
        ensure((exact - product).abs() < 1e-12, || format!("{exact} vs product {product}"))?;
        let hits = (0..=n).filter(|x| u.parts().iter().any(|(a, r)| r.contains(&(x % a)))).count();
        let counted = hits as f64 / (n + 1) as f64;
        ensure((exact - counted).abs() <= 1e-3, || format!("{exact} vs counted {counted}"))?;
    }
    let families = [
        "A7", "D7", "E6", "E7", "E8", "~D7", "~E6", "~E7", "~E8", "S7", "S7+", "C7", "C7+", "cone(A3)", "K6", "K6+", "K(2,5)", "K(3,5)", "W6", "W7",
    ];
    for s in families {
        let c = density_certificate(&fam(s)).map_err(|e| e.to_string())?.ok_or_else(|| format!("{s}: no certificate"))?;
        c.validate().map_err(|e| format!("{s}: {e}"))?;
    }
    Ok(format!("3 fixtures, {} families", families.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 15] = [
        (1, "Dynkin floors", dynkin_floors, Duration::from_secs(1)),
        (2, "A2 law", a2_law, Duration::from_secs(1)),
        (3, "A3 table", a3_table, Duration::from_secs(60)),
        (4, "tadpole tables", tadpole_tables, Duration::from_secs(300)),
        (5, "C_n^+ unit value", tadpole_unit_value, Duration::from_secs(1)),
        (6, "even wheels", even_wheels, Duration::from_secs(5)),
        (7, "odd wheels", odd_wheels, Duration::from_secs(5)),
        (8, "tadpole structures", tadpole_structures, Duration::from_secs(5)),
        (9, "trivial-group structures", trivial_structures, Duration::from_secs(600)),
        (10, "types dichotomy", types_dichotomy, Duration::from_secs(900)),
        (11, "Egyptian / K_n", egyptian_kn, Duration::from_secs(300)),
        (12, "closed forms", closed_forms, Duration::from_secs(10)),
        (13, "banana non-cyclicity", banana_non_cyclic, Duration::from_secs(1)),
        (14, "PD sieve completeness", pd_completeness, Duration::from_secs(60)),
        (15, "density", density, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match &outcome {
            Ok(msg) if took <= budget => println!("criterion {id}: PASS  {name} ({msg}; {took:.2?})"),
            Ok(msg) => {
                println!("criterion {id}: FAIL  {name} ({msg}; {took:.2?} over {budget:?})");
                failed.push(id);
            }
            Err(msg) => {
                println!("criterion {id}: FAIL  {name} ({msg})");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
