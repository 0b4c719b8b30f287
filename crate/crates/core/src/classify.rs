//! Family recognition, the all-2 test, and the tree / cycle / complete / bipartite / seed dichotomy.

use serde_json::{json, Value};

use crate::constructive::{unit_witness, UnitWitness};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::Multigraph;
use crate::iso::{find_induced, is_isomorphic};
use crate::poly::{matrix_at, DiagonalAssignment};

/// Primary family name and every other family the graph also belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Recognition {
    pub primary: Option<Family>,
    pub aliases: Vec<Family>,
}

fn base_candidates(n: usize) -> Vec<Family> {
    let mut c = vec![Family::A(n), Family::D(n), Family::E(n)];
    if n >= 1 {
        c.push(Family::ExtD(n - 1));
        c.push(Family::ExtE(n - 1));
    }
    c.push(Family::C(n));
    if n >= 1 {
        c.push(Family::CPlus(n - 1));
    }
    c.push(Family::K(n));
    if n >= 1 {
        c.push(Family::KPlus(n - 1));
    }
    for p in 1..=n / 2 {
        c.push(Family::Kpq(p, n - p));
    }
    c.push(Family::S(n));
    if n >= 1 {
        c.push(Family::SPlus(n - 1));
        c.push(Family::W(n - 1));
    }
    c.retain(|f| f.validate().is_ok() && f.order() == n);
    c
}

/// Candidate families on `n` vertices, in precedence order.
fn candidates(n: usize) -> Vec<Family> {
    let mut c = base_candidates(n);
    if n >= 2 {
        c.extend(base_candidates(n - 1).into_iter().map(|f| Family::Cone(Box::new(f))));
    }
    c
}

fn weighted_shape(g: &Multigraph) -> Option<Family> {
    let n = g.order();
    if n == 2 {
        return Some(Family::Banana(g.multiplicity(0, 1))).filter(|f| f.validate().is_ok());
    }
    if n == 3 && (0..3).all(|i| g.valency(i) == 2) {
        return Some(Family::WeightedTriangle([g.multiplicity(1, 2), g.multiplicity(0, 2), g.multiplicity(0, 1)]));
    }
    // Path shape: read multiplicities from an end, taking the lexicographically larger reading.
    if g.edges().len() + 1 != n || (0..n).any(|i| g.valency(i) > 2) {
        return None;
    }
    let ends: Vec<usize> = (0..n).filter(|&i| g.valency(i) == 1).collect();
    let read = |start: usize| {
        let mut es = Vec::new();
        let (mut prev, mut cur) = (usize::MAX, start);
        while let Some(next) = g.neighbors(cur).find(|&x| x != prev) {
            es.push(g.multiplicity(cur, next));
            prev = cur;
            cur = next;
        }
        es
    };
    let (a, b) = (read(ends[0]), read(ends[1]));
    Some(Family::WeightedPath(a.max(b)))
}

pub fn recognize_family(g: &Multigraph) -> Recognition {
    let mut found: Vec<Family> = Vec::new();
    if g.is_connected() {
        if g.is_simple() {
            for f in candidates(g.order()) {
                if let Ok(h) = f.build() {
                    if is_isomorphic(g, &h) {
                        found.push(f);
                    }
                }
            }
        } else if let Some(f) = weighted_shape(g) {
            if f.build().map(|h| is_isomorphic(g, &h)).unwrap_or(false) {
                found.push(f);
            }
        }
    }
    let mut it = found.into_iter();
    Recognition { primary: it.next(), aliases: it.collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynkinNumeric {
    PdAt2,
    Psd0At2,
    Neither,
}

impl DynkinNumeric {
    pub fn as_str(&self) -> &'static str {
        match self {
            DynkinNumeric::PdAt2 => "PD-at-2",
            DynkinNumeric::Psd0At2 => "PSD0-at-2",
            DynkinNumeric::Neither => "neither",
        }
    }
}

/// Classifies M_G(2,...,2) as positive definite, singular positive semidefinite, or neither.
pub fn dynkin_numeric_check(g: &Multigraph) -> Result<DynkinNumeric> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = matrix_at(g, &DiagonalAssignment::constant(g.order(), 2)?)?;
    Ok(if m.is_positive_definite()? {
        DynkinNumeric::PdAt2
    } else if m.is_psd_rank_nminus1(true)? {
        DynkinNumeric::Psd0At2
    } else {
        DynkinNumeric::Neither
    })
}

/// Induced copy of a family member, as `map[pattern vertex] = g vertex`.
pub fn find_induced_family(g: &Multigraph, pattern: &Family) -> Result<Option<Vec<usize>>> {
    Ok(find_induced(g, &pattern.build()?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypesResult {
    Tree,
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// An induced C_m^+ (m >= 3) or C(A_3), with `map[pattern vertex] = g vertex`.
    HasSeed { family: Family, map: Vec<usize> },
}

impl TypesResult {
    pub fn to_json(&self) -> Value {
        match self {
            TypesResult::Tree => json!({"type": "tree"}),
            TypesResult::Cycle(n) => json!({"type": "cycle", "n": n}),
            TypesResult::Complete(n) => json!({"type": "complete", "n": n}),
            TypesResult::CompleteBipartite(p, q) => json!({"type": "complete-bipartite", "p": p, "q": q}),
            TypesResult::HasSeed { family, map } => json!({"type": "has-seed", "seed": family.to_string(), "map": map}),
        }
    }
}

fn complete_bipartite_sides(g: &Multigraph) -> Option<(usize, usize)> {
    let n = g.order();
    let mut side = vec![usize::MAX; n];
    side[0] = 0;
    for &v in &g.component_of(0) {
        for u in g.neighbors(v) {
            if side[u] == usize::MAX {
                side[u] = 1 - side[v];
            } else if side[u] == side[v] {
                return None;
            }
        }
    }
    let p = side.iter().filter(|&&s| s == 0).count();
    let q = n - p;
    for i in 0..n {
        for j in i + 1..n {
            if (side[i] != side[j]) != g.adjacent(i, j) {
                return None;
            }
        }
    }
    Some((p.min(q), p.max(q)))
}

/// Tree, cycle, complete or complete bipartite; otherwise an induced C_m^+ or C(A_3).
pub fn types_decompose(g: &Multigraph) -> Result<TypesResult> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    if g.is_tree() {
        return Ok(TypesResult::Tree);
    }
    if (0..n).all(|i| g.valency(i) == 2) {
        return Ok(TypesResult::Cycle(n));
    }
    if g.edge_count() as usize == n * (n - 1) / 2 {
        return Ok(TypesResult::Complete(n));
    }
    if let Some((p, q)) = complete_bipartite_sides(g) {
        return Ok(TypesResult::CompleteBipartite(p, q));
    }
    let mut patterns = vec![Family::CPlus(3), Family::Cone(Box::new(Family::A(3)))];
    patterns.extend((4..n).map(Family::CPlus));
    for f in patterns {
        if let Some(map) = find_induced_family(g, &f)? {
            return Ok(TypesResult::HasSeed { family: f, map });
        }
    }
    Err(Error::Contract("no seed found in a graph outside the four named families".into()))
}

#[derive(Debug, Clone)]
pub enum PositivityVerdict {
    /// V_G(2) contains every positive integer: a unit witness on G \ v.
    ContainsAllPositives { vertex: usize, witness: Box<UnitWitness> },
    /// C_n^+: 1 is taken at (3,2,...,2) on the whole graph.
    Tadpole(usize),
    /// K_n with n >= 14, via a supplied 13-term Egyptian solution.
    CompleteFromEgyptian(usize),
    Exceptional(String),
}

impl PositivityVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            PositivityVerdict::ContainsAllPositives { vertex, witness } => json!({
                "verdict": "contains-all-positives",
                "vertex": vertex,
                "witness": witness.to_json(),
            }),
            PositivityVerdict::Tadpole(n) => json!({"verdict": "contains-all-positives", "via": format!("C{n}+ at (3,2,...,2)")}),
            PositivityVerdict::CompleteFromEgyptian(n) => json!({"verdict": "contains-all-positives", "via": format!("K13 witness, K{n} as iterated cone")}),
            PositivityVerdict::Exceptional(f) => json!({"verdict": "exceptional", "family": f}),
        }
    }
}

/// `k13_known`: whether a verified 13-term solution is available.
pub fn positivity_verdict(g: &Multigraph, k13_known: bool) -> Result<PositivityVerdict> {
    let kind = types_decompose(g)?;
    let n = g.order();
    match kind {
        TypesResult::Tree => return Ok(PositivityVerdict::Exceptional("tree".into())),
        TypesResult::Cycle(_) => return Ok(PositivityVerdict::Exceptional("cycle".into())),
        TypesResult::CompleteBipartite(_, _) => return Ok(PositivityVerdict::Exceptional("complete-bipartite".into())),
        TypesResult::Complete(_) => {
            return Ok(if n >= 14 && k13_known {
                PositivityVerdict::CompleteFromEgyptian(n)
            } else {
                PositivityVerdict::Exceptional("complete".into())
            })
        }
        TypesResult::HasSeed { .. } => {}
    }
    for v in 0..n {
        let (gv, _) = g.remove_vertex(v)?;
        if !gv.is_connected() {
            continue;
        }
        if let Some(w) = unit_witness(&gv, 2)? {
            return Ok(PositivityVerdict::ContainsAllPositives { vertex: v, witness: Box::new(w) });
        }
    }
    if let Some(Family::CPlus(m)) = recognize_family(g).primary {
        return Ok(PositivityVerdict::Tadpole(m));
    }
    Ok(PositivityVerdict::Exceptional(recognize_family(g).primary.map(|f| f.to_string()).unwrap_or_else(|| "other".into())))
}

/// Independent check used in tests: tree, cycle, complete, complete bipartite by definition, or an
/// induced copy of C_m^+ / C(A_3) found by scanning every vertex subset.
pub fn types_oracle(g: &Multigraph) -> (bool, bool) {
    let n = g.order();
    let e = g.edge_count() as usize;
    let named = e + 1 == n
        || (0..n).all(|i| g.valency(i) == 2)
        || e == n * (n - 1) / 2
        || complete_bipartite_sides(g).is_some();
    let mut seed = false;
    for mask in 1u32..(1 << n) {
        let keep: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let k = keep.len();
        if k < 4 {
            continue;
        }
        let (h, _) = g.induced_subgraph(&keep).unwrap();
        if !h.is_connected() {
            continue;
        }
        let edges = h.edge_count() as usize;
        let deg: Vec<usize> = (0..k).map(|i| h.valency(i)).collect();
        let ones = deg.iter().filter(|&&d| d == 1).count();
        let threes = deg.iter().filter(|&&d| d == 3).count();
        let twos = deg.iter().filter(|&&d| d == 2).count();
        // Tadpole: k edges on k vertices, one leaf hanging off the only vertex of valency 3, the rest valency 2.
        let leaf_on_hub = (0..k).any(|i| deg[i] == 1 && h.neighbors(i).all(|j| deg[j] == 3));
        let tadpole = edges == k && ones == 1 && threes == 1 && twos == k - 2 && leaf_on_hub;
        // Diamond: four vertices, five edges.
        let diamond = k == 4 && edges == 5;
        if tadpole || diamond {
            seed = true;
            break;
        }
    }
    (named, seed)
}

pub fn verdict_json(g: &Multigraph) -> Result<Value> {
    let rec = recognize_family(g);
    let mut v = json!({
        "family": rec.primary.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "other".into()),
        "aliases": rec.aliases.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    });
    if g.is_connected() {
        v["dynkin_numeric"] = json!(dynkin_numeric_check(g)?.as_str());
    }
    if g.is_simple() && g.is_connected() {
        v["types"] = types_decompose(g)?.to_json();
        v["positivity"] = positivity_verdict(g, false)?.to_json();
    }
    Ok(v)
}
