//! Unit witnesses built by growing a seed one vertex at a time, trivial-group structures,
//! and the Egyptian-fraction route to complete graphs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{contract, Error, Result};
use crate::family::Family;
use crate::graph::Multigraph;
use crate::iso::find_induced;
use crate::json::int_array;
use crate::linalg::ExactMatrix;
use crate::poly::{evaluate, linear_in_t, matrix_at, DiagonalAssignment};
use crate::structures::{verify_structure, ArithmeticalStructure};

/// Where a witness started.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub name: String,
    /// Vertices of the host graph, in the seed's own order.
    pub vertices: Vec<usize>,
    pub diag: Vec<BigInt>,
}

/// A positive definite diagonal with determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitWitness {
    pub graph: Multigraph,
    pub diag: DiagonalAssignment,
    pub seed: Seed,
    /// Vertices added after the seed, in order.
    pub chain: Vec<usize>,
}

impl UnitWitness {
    /// Re-checks det = 1, positive definiteness and the lower bound r.
    pub fn check(&self, r: u64) -> Result<()> {
        let m = matrix_at(&self.graph, &self.diag)?;
        if !m.determinant().is_one() {
            return Err(contract("witness determinant is not 1"));
        }
        if !m.is_positive_definite()? {
            return Err(contract("witness is not positive definite"));
        }
        if self.diag.values().iter().any(|x| *x < BigInt::from(r)) {
            return Err(contract("witness entry below r"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": crate::json::graph_to_json(&self.graph),
            "diag": int_array(self.diag.values()),
            "det": 1,
            "pd": true,
            "seed": {"name": self.seed.name, "vertices": self.seed.vertices, "diag": int_array(&self.seed.diag)},
            "chain": self.chain,
        })
    }
}

/// One entry of the r = 2 seed catalogue.
pub struct CatalogueEntry {
    pub family: Family,
    pub diag: Vec<u64>,
    pub source: &'static str,
}

/// r = 2 seeds for graphs with at most `max_order` vertices, smallest first, ties in catalogue order.
pub fn seed_catalogue(max_order: usize) -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    for m in 3..max_order {
        let mut diag = vec![2; m + 1];
        diag[0] = 3;
        out.push((0, CatalogueEntry { family: Family::CPlus(m), diag, source: "tadpole C_m^+ at (3,2,...,2)" }));
    }
    out.push((1, CatalogueEntry { family: Family::Cone(Box::new(Family::A(3))), diag: vec![2, 2, 3, 5], source: "cone C(A_3), hub 2" }));
    out.push((2, CatalogueEntry { family: Family::E(8), diag: vec![2; 8], source: "E_8 at (2,...,2)" }));
    out.push((3, CatalogueEntry { family: Family::WeightedPath(vec![2, 1]), diag: vec![3, 2, 2], source: "A_3(2,1) at (3,2,2)" }));
    out.retain(|(_, e)| e.family.order() <= max_order);
    out.sort_by_key(|(k, e)| (e.family.order(), *k));
    out.into_iter().map(|(_, e)| e).collect()
}

/// An induced subgraph carrying a unit witness: the edge (a^2 + 1, 1) for r = 1,
/// the first catalogue member found for r = 2.
pub fn find_seed(g: &Multigraph, r: u64) -> Result<Option<Seed>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    match r {
        1 => {
            if g.order() == 1 {
                return Ok(Some(Seed { name: "A1".into(), vertices: vec![0], diag: vec![BigInt::one()] }));
            }
            let (i, j, a) = g.edges()[0];
            let a = BigInt::from(a);
            Ok(Some(Seed { name: "edge".into(), vertices: vec![i, j], diag: vec![&a * &a + 1u32, BigInt::one()] }))
        }
        2 => {
            for entry in seed_catalogue(g.order()) {
                let pattern = entry.family.build()?;
                if let Some(map) = find_induced(g, &pattern) {
                    return Ok(Some(Seed {
                        name: entry.family.to_string(),
                        vertices: map,
                        diag: entry.diag.iter().map(|&x| BigInt::from(x)).collect(),
                    }));
                }
            }
            Ok(None)
        }
        _ => Err(contract("seeds exist only for r = 1 and r = 2")),
    }
}

/// Vertices outside `h` in an order keeping every prefix union connected; lowest index first.
pub fn connected_extension_chain(g: &Multigraph, h: &[usize]) -> Result<Vec<usize>> {
    if h.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if !g.is_connected_on(h) {
        return Err(Error::Disconnected);
    }
    let mut inside = vec![false; g.order()];
    for &v in h {
        inside[v] = true;
    }
    let mut chain = Vec::new();
    loop {
        let next = (0..g.order()).find(|&w| !inside[w] && (0..g.order()).any(|u| inside[u] && g.adjacent(u, w)));
        match next {
            Some(w) => {
                inside[w] = true;
                chain.push(w);
            }
            None => break,
        }
    }
    if inside.iter().any(|&b| !b) {
        return Err(Error::Disconnected);
    }
    Ok(chain)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Value(BigInt),
    Zero,
}

/// `rest` is a unit witness on G \ v (in `remove_vertex` order). Puts t = a + m at v, where
/// det = t - a, giving determinant m; `Target::Zero` puts t = a.
pub fn induction_step(g: &Multigraph, v: usize, rest: &DiagonalAssignment, target: &Target) -> Result<DiagonalAssignment> {
    let (gv, _) = g.remove_vertex(v)?;
    if !gv.is_connected() {
        return Err(contract("G \\ v must be connected"));
    }
    let n = matrix_at(&gv, rest)?;
    if !n.determinant().is_one() || !n.is_positive_definite()? {
        return Err(contract("the witness on G \\ v must be positive definite with determinant 1"));
    }
    let form = linear_in_t(g, v, rest)?;
    let a = form.beta.clone();
    if !a.is_positive() {
        return Err(contract("v has no neighbour"));
    }
    let t = match target {
        Target::Value(m) if m.is_positive() => &a + m,
        Target::Value(_) => return Err(contract("target must be positive")),
        Target::Zero => a,
    };
    let out = rest.with_inserted(v, t)?;
    let expect = match target {
        Target::Value(m) => m.clone(),
        Target::Zero => BigInt::zero(),
    };
    if evaluate(g, &out)? != expect {
        return Err(contract("induction step missed its target"));
    }
    Ok(out)
}

/// The structure (M, R) with R = (1, N* S) at the zero point of an induction step.
pub fn zero_structure(g: &Multigraph, v: usize, rest: &DiagonalAssignment) -> Result<ArithmeticalStructure> {
    let diag = induction_step(g, v, rest, &Target::Zero)?;
    let (gv, map) = g.remove_vertex(v)?;
    let n = matrix_at(&gv, rest)?;
    let s: Vec<BigInt> = map.iter().map(|&u| BigInt::from(g.multiplicity(v, u))).collect();
    let ns = n.adjugate().mul_vec(&s);
    let mut r = vec![BigInt::zero(); g.order()];
    r[v] = BigInt::one();
    for (k, &u) in map.iter().enumerate() {
        r[u] = ns[k].clone();
    }
    verify_structure(g, &diag, &r)
}

/// Seed, then one induction step per chain vertex, each targeting determinant 1.
pub fn unit_witness(g: &Multigraph, r: u64) -> Result<Option<UnitWitness>> {
    let Some(seed) = find_seed(g, r)? else {
        return Ok(None);
    };
    let chain = connected_extension_chain(g, &seed.vertices)?;
    let mut order = seed.vertices.clone();
    let mut diag = DiagonalAssignment::new(seed.diag.clone())?;
    for &w in &chain {
        order.push(w);
        let (sub, _) = g.induced_subgraph(&order)?;
        diag = induction_step(&sub, order.len() - 1, &diag, &Target::Value(BigInt::one()))?;
    }
    let mut values = vec![BigInt::zero(); g.order()];
    for (k, &u) in order.iter().enumerate() {
        values[u] = diag.values()[k].clone();
    }
    let w = UnitWitness { graph: g.clone(), diag: DiagonalAssignment::new(values)?, seed, chain };
    w.check(r)?;
    Ok(Some(w))
}

/// Diagonal with determinant `m`, positive definite with cyclic group, from a unit witness on G \ v.
pub fn value_witness(g: &Multigraph, m: &BigInt, r: u64) -> Result<Option<DiagonalAssignment>> {
    if g.order() == 1 {
        return (*m >= BigInt::from(r)).then(|| DiagonalAssignment::new(vec![m.clone()])).transpose();
    }
    let Some(v) = removable_vertex(g) else {
        return Ok(None);
    };
    let (gv, _) = g.remove_vertex(v)?;
    let Some(w) = unit_witness(&gv, r)? else {
        return Ok(None);
    };
    if m.is_zero() {
        let s = zero_structure(g, v, &w.diag)?;
        return Ok((s.diag.values()[v] >= BigInt::from(r)).then_some(s.diag));
    }
    induction_step(g, v, &w.diag, &Target::Value(m.clone())).map(Some)
}

/// The highest-index vertex whose removal keeps the graph connected.
pub fn removable_vertex(g: &Multigraph) -> Option<usize> {
    if g.order() < 2 {
        return None;
    }
    (0..g.order()).rev().find(|&v| g.remove_vertex(v).map(|(h, _)| h.is_connected()).unwrap_or(false))
}

/// An arithmetical structure with trivial group: an r = 1 unit witness on G \ v, then the zero step.
pub fn trivial_group_structure(g: &Multigraph) -> Result<ArithmeticalStructure> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let v = removable_vertex(g).ok_or_else(|| contract("a structure needs at least two vertices"))?;
    let (gv, _) = g.remove_vertex(v)?;
    let w = unit_witness(&gv, 1)?.ok_or_else(|| contract("no r = 1 seed"))?;
    let s = zero_structure(g, v, &w.diag)?;
    if !s.phi.is_trivial() {
        return Err(contract("group of the constructed structure is not trivial"));
    }
    Ok(s)
}

/// sum 1/y_i + 1/prod y_i == 1, exactly.
pub fn egyptian_check(y: &[BigInt]) -> bool {
    if y.is_empty() || y.iter().any(|v| !v.is_positive()) {
        return false;
    }
    let prod: BigInt = y.iter().product();
    let sum: BigRational = y.iter().map(|v| BigRational::new(BigInt::one(), v.clone())).sum();
    sum + BigRational::new(BigInt::one(), prod) == BigRational::one()
}

fn coprime_to_all(x: &BigInt, ys: &[BigInt]) -> bool {
    use num_integer::Integer;
    ys.iter().all(|y| x.gcd(y).is_one())
}

fn search_from(n: usize, ys: &mut Vec<BigInt>, sum: &BigRational, prod: &BigInt, lo: &BigInt, out: &mut Vec<Vec<BigInt>>, first_only: bool) {
    if first_only && !out.is_empty() {
        return;
    }
    let deficit = BigRational::one() - sum;
    if !deficit.is_positive() {
        return;
    }
    let k = n - ys.len();
    if k == 1 {
        // 1/y + 1/(P y) = deficit gives y = (P + 1) / (P * deficit).
        let y = BigRational::from_integer(prod + 1u32) / (BigRational::from_integer(prod.clone()) * &deficit);
        if y.is_integer() {
            let y = y.to_integer();
            if y >= *lo && coprime_to_all(&y, ys) {
                ys.push(y);
                out.push(ys.clone());
                ys.pop();
            }
        }
        return;
    }
    // Terms are increasing, so deficit = sum of k terms + 1/(P * rest) < (k + 1)/y; and 1/y < deficit.
    let inv = BigRational::one() / &deficit;
    let start = lo.clone().max(inv.floor().to_integer() + 1u32);
    let end = (BigRational::from_integer(BigInt::from(k + 1)) * &inv).floor().to_integer();
    let mut y = start;
    while y <= end {
        if coprime_to_all(&y, ys) {
            let s = sum + BigRational::new(BigInt::one(), y.clone());
            let p = prod * &y;
            ys.push(y.clone());
            search_from(n, ys, &s, &p, &(&y + 1u32), out, first_only);
            ys.pop();
            if first_only && !out.is_empty() {
                return;
            }
        }
        y += 1u32;
    }
}

fn egyptian_run(n: usize, min_y: u64, first_only: bool) -> Vec<Vec<BigInt>> {
    if n == 0 {
        return Vec::new();
    }
    let lo = BigInt::from(min_y.max(2));
    if n == 1 {
        let mut out = Vec::new();
        search_from(1, &mut Vec::new(), &BigRational::zero(), &BigInt::one(), &lo, &mut out, first_only);
        return out;
    }
    // First level: 1 < y_1 * deficit, y_1 <= n + 1.
    let firsts: Vec<u64> = (min_y.max(2)..=(n as u64 + 1)).collect();
    let parts = crate::search::map_tops(firsts, |y1| {
        let y1 = BigInt::from(y1);
        let mut out = Vec::new();
        let mut ys = vec![y1.clone()];
        search_from(n, &mut ys, &BigRational::new(BigInt::one(), y1.clone()), &y1, &(&y1 + 1u32), &mut out, first_only);
        out
    });
    let all: Vec<Vec<BigInt>> = parts.into_iter().flatten().collect();
    if first_only {
        all.into_iter().take(1).collect()
    } else {
        all
    }
}

/// Exhaustive ordered search y_1 < ... < y_n, y_1 >= min_y, pairwise coprime.
pub fn egyptian_search(n: usize, min_y: u64) -> Option<Vec<BigInt>> {
    egyptian_run(n, min_y, true).into_iter().next()
}

/// Every solution with y_1 >= min_y, in lexicographic order.
pub fn egyptian_solutions(n: usize, min_y: u64) -> Vec<Vec<BigInt>> {
    egyptian_run(n, min_y, false)
}

/// (y_1, ..., y_n, y_1...y_n + 1).
pub fn extend_solution(y: &[BigInt]) -> Vec<BigInt> {
    let p: BigInt = y.iter().product();
    let mut out = y.to_vec();
    out.push(p + 1u32);
    out
}

/// x_i = y_i - 1 on K_n.
pub fn kn_witness_from_solution(y: &[BigInt]) -> Result<UnitWitness> {
    if y.iter().any(|v| *v < BigInt::from(3)) {
        return Err(contract("every y_i must be at least 3"));
    }
    if !egyptian_check(y) {
        return Err(contract("not a solution of sum 1/y_i + 1/prod y_i = 1"));
    }
    let n = y.len();
    let g = Family::K(n).build()?;
    let diag = DiagonalAssignment::new(y.iter().map(|v| v - 1u32).collect())?;
    let w = UnitWitness {
        graph: g,
        diag: diag.clone(),
        seed: Seed { name: format!("K{n}"), vertices: (0..n).collect(), diag: diag.into_inner() },
        chain: Vec::new(),
    };
    w.check(2)?;
    Ok(w)
}

/// Parses whitespace- or comma-separated integers.
pub fn parse_solution(text: &str) -> Result<Vec<BigInt>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::Parse { pos: 0, msg: format!("bad integer {s}") }))
        .collect()
}

/// M restricted to the vertices of the witness's seed.
pub fn seed_matrix(w: &UnitWitness) -> Result<ExactMatrix> {
    let (h, _) = w.graph.induced_subgraph(&w.seed.vertices)?;
    matrix_at(&h, &DiagonalAssignment::new(w.seed.diag.clone())?)
}
