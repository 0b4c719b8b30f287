//! Unions of arithmetic progressions and coprime linear forms that make V_{d_G}(2) dense.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::classify::recognize_family;
use crate::error::{contract, Error, Result};
use crate::family::Family;
use crate::graph::Multigraph;
use crate::iso::find_isomorphism;
use crate::json::{int_array, int_value};
use crate::poly::{evaluate, raw_linear_in_t, DiagonalAssignment, LinearForm};

/// Union over i of the progressions a_i t + b_ij, t >= 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProgressionUnion {
    parts: Vec<(u64, Vec<u64>)>,
}

impl ProgressionUnion {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds modulus `a` with the given residues (reduced mod a, duplicates dropped).
    pub fn push(&mut self, a: u64, residues: &[u64]) -> Result<()> {
        if a == 0 {
            return Err(contract("modulus must be positive"));
        }
        let mut r: Vec<u64> = residues.iter().map(|b| b % a).collect();
        r.sort_unstable();
        r.dedup();
        self.parts.push((a, r));
        Ok(())
    }

    pub fn parts(&self) -> &[(u64, Vec<u64>)] {
        &self.parts
    }

    pub fn pairwise_coprime(&self) -> bool {
        let a: Vec<u64> = self.parts.iter().map(|p| p.0).collect();
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i].gcd(&a[j]) == 1))
    }

    /// Whether `x` lies in some progression (ignoring the t >= 0 start, i.e. as residue classes).
    pub fn covers(&self, x: u64) -> bool {
        self.parts.iter().any(|(a, rs)| rs.binary_search(&(x % a)).is_ok())
    }

    pub fn to_json(&self) -> Value {
        json!(self.parts.iter().map(|(a, r)| json!({"modulus": a, "residues": r})).collect::<Vec<_>>())
    }
}

/// 1 - prod (1 - r_i/a_i); refused unless the moduli are pairwise coprime.
pub fn union_density(u: &ProgressionUnion) -> Result<BigRational> {
    if !u.pairwise_coprime() {
        return Err(contract("moduli are not pairwise coprime; use the empirical density instead"));
    }
    let miss = u.parts.iter().fold(BigRational::one(), |acc, (a, r)| {
        acc * (BigRational::one() - BigRational::new(BigInt::from(r.len()), BigInt::from(*a)))
    });
    Ok(BigRational::one() - miss)
}

/// Fraction of [0, n] covered by the residue classes.
pub fn counted_density(u: &ProgressionUnion, n: u64) -> f64 {
    let hits = (0..=n).filter(|&x| u.covers(x)).count();
    hits as f64 / (n + 1) as f64
}

/// |S cap [0, n]| / n from a membership bitmap, capped at 1.
pub fn empirical_density(s: &[bool], n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(contract("n must be positive"));
    }
    let count = s.iter().take(n as usize + 1).filter(|&&b| b).count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(n)).min(BigRational::one()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateForm {
    /// d_{G_v} with t at `t_vertex` (an index of G_v) and `rest` elsewhere, in `remove_vertex` order.
    pub form: LinearForm,
    pub rest: DiagonalAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityCertificate {
    pub graph: Multigraph,
    /// Removed vertex of the graph.
    pub vertex: usize,
    /// Vertex of G_v carrying t.
    pub t_vertex: usize,
    pub recipe: String,
    pub forms: Vec<CertificateForm>,
}

impl DensityCertificate {
    pub fn subgraph(&self) -> Multigraph {
        self.graph.remove_vertex(self.vertex).expect("vertex in range").0
    }

    /// Recomputes each form at t in {2, 3, 101} and checks gcd(alpha, beta) = 1.
    pub fn validate(&self) -> Result<()> {
        let h = self.subgraph();
        for f in &self.forms {
            if !f.form.alpha.is_positive() || !f.form.is_coprime() {
                return Err(contract("certificate form must have alpha > 0 and gcd(alpha, beta) = 1"));
            }
            for t in [2u32, 3, 101] {
                let t = BigInt::from(t);
                let d = evaluate(&h, &f.rest.with_inserted(self.t_vertex, t.clone())?)?;
                if d != f.form.at(&t) {
                    return Err(contract("certificate form disagrees with the determinant"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertex": self.vertex,
            "t_vertex": self.t_vertex,
            "recipe": self.recipe,
            "forms": self.forms.iter().map(|f| json!({
                "alpha": int_value(&f.form.alpha),
                "beta": int_value(&f.form.beta),
                "rest": int_array(f.rest.values()),
            })).collect::<Vec<_>>(),
        })
    }
}

fn primes(count: usize, from: u64) -> Vec<u64> {
    (from..).filter(|&p| is_prime(p)).take(count).collect()
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Recipe diagonals in the family's canonical order, t at canonical vertex 0.
fn recipe(f: &Family) -> Option<(String, Vec<Vec<u64>>)> {
    let n = f.order();
    let rest: Vec<Vec<u64>> = match f {
        Family::A(_) => vec![vec![2; n - 1]],
        Family::C(m) if *m >= 3 => {
            let mut d = vec![2; n - 1];
            d[n - 2] = 3;
            vec![d]
        }
        Family::D(_) => {
            let mut d = vec![2; n - 1];
            d[n - 2] = 3;
            vec![d]
        }
        Family::S(_) => vec![primes(n - 1, 2)],
        Family::K(_) if n >= 2 => vec![primes(n - 1, 3).into_iter().map(|b| b - 1).collect()],
        Family::Kpq(2, q) => {
            let y = primes(*q, 2);
            (2..200).map(|x| std::iter::once(x).chain(y.iter().copied()).collect()).collect()
        }
        _ => return None,
    };
    let name = match f {
        Family::A(_) => "path, end vertex",
        Family::C(_) => "cycle, (t,2,...,2,3)",
        Family::D(_) => "D_n, long arm end, last leaf 3",
        Family::S(_) => "star, hub, prime leaves",
        Family::K(_) => "complete, b_i prime",
        _ => "K(2,q), prime y_i",
    };
    Some((name.to_string(), rest))
}

fn family_recipes(h: &Multigraph) -> Vec<Family> {
    let n = h.order();
    let mut out = vec![Family::A(n), Family::C(n), Family::D(n), Family::S(n), Family::K(n)];
    if n >= 3 {
        out.push(Family::Kpq(2, n - 2));
    }
    out.retain(|f| f.validate().is_ok());
    out
}

/// Tries the named recipes over all removable vertices, in recipe order (paths first), then a scan of [2,7]^{n-2}.
pub fn density_certificate(g: &Multigraph) -> Result<Option<DensityCertificate>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    if n < 2 {
        return Ok(None);
    }
    let removable: Vec<usize> = (0..n).filter(|&v| g.remove_vertex(v).map(|(h, _)| h.is_connected()).unwrap_or(false)).collect();
    let mut named = Vec::new();
    for &v in &removable {
        let (h, _) = g.remove_vertex(v)?;
        for (rank, f) in family_recipes(&h).into_iter().enumerate() {
            if let Some(map) = find_isomorphism(&h, &f.build()?) {
                named.push((rank, v, h.clone(), f, map));
            }
        }
    }
    named.sort_by_key(|e| (e.0, e.1));
    for (_, v, h, f, map) in named {
        let Some((name, rests)) = recipe(&f) else { continue };
        for canon in rests {
            // canonical vertex i of the family is vertex map[i] of G_v.
            let mut full = vec![BigInt::zero(); h.order()];
            for (i, &x) in canon.iter().enumerate() {
                full[map[i + 1]] = BigInt::from(x);
            }
            let t_vertex = map[0];
            full.remove(t_vertex);
            if let Some(c) = try_form(g, v, t_vertex, full, &name)? {
                return Ok(Some(c));
            }
        }
    }
    for &v in &removable {
        let (h, _) = g.remove_vertex(v)?;
        let m = h.order();
        for t_vertex in 0..m {
            let mut point = vec![2u64; m - 1];
            let mut budget = 50_000;
            loop {
                let rest = point.iter().map(|&x| BigInt::from(x)).collect();
                if let Some(c) = try_form(g, v, t_vertex, rest, "scan over [2,7]")? {
                    return Ok(Some(c));
                }
                budget -= 1;
                if budget == 0 || !crate::search::odometer(&mut point, 2, 7) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

fn try_form(g: &Multigraph, v: usize, t_vertex: usize, rest: Vec<BigInt>, name: &str) -> Result<Option<DensityCertificate>> {
    let (h, _) = g.remove_vertex(v)?;
    let rest = DiagonalAssignment::new(rest)?;
    let (alpha, beta) = if h.order() == 1 { (BigInt::one(), BigInt::zero()) } else { raw_linear_in_t(&h, t_vertex, &rest)? };
    if !alpha.is_positive() || !alpha.gcd(&beta).is_one() {
        return Ok(None);
    }
    let cert = DensityCertificate {
        graph: g.clone(),
        vertex: v,
        t_vertex,
        recipe: name.to_string(),
        forms: vec![CertificateForm { form: LinearForm::new(alpha, beta)?, rest }],
    };
    cert.validate()?;
    Ok(Some(cert))
}

/// One progression u s - w (s >= 2) of values of d_G, from a prime u = d_{G_v}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionWitness {
    pub u: u64,
    pub w: BigInt,
    /// Diagonal of G_v in `remove_vertex` order.
    pub diag: DiagonalAssignment,
}

/// Primes u_1 < u_2 < ... of the form alpha t - beta (t >= 2), each giving the progression of
/// values u_i s - w_i of d_G with s at the removed vertex.
pub fn progressions_from_certificate(c: &DensityCertificate, prime_budget: usize) -> Result<(ProgressionUnion, Vec<ProgressionWitness>)> {
    c.validate()?;
    let f = c.forms.first().ok_or_else(|| contract("empty certificate"))?;
    let mut union = ProgressionUnion::new();
    let mut wits: Vec<ProgressionWitness> = Vec::new();
    let mut t = BigInt::from(2);
    for _ in 0..1_000_000 {
        if wits.len() == prime_budget {
            break;
        }
        let u = f.form.at(&t);
        if let Some(u64v) = u.to_u64().filter(|&x| is_prime(x)) {
            if wits.iter().all(|p| p.u != u64v) {
                let diag = f.rest.with_inserted(c.t_vertex, t.clone())?;
                let (alpha, w) = raw_linear_in_t(&c.graph, c.vertex, &diag)?;
                if alpha != u {
                    return Err(contract("progression slope differs from the subgraph determinant"));
                }
                for s in [2u32, 3] {
                    let s = BigInt::from(s);
                    let full = diag.with_inserted(c.vertex, s.clone())?;
                    if evaluate(&c.graph, &full)? != &u * &s - &w {
                        return Err(contract("progression value does not re-evaluate"));
                    }
                }
                let residue = (-&w).mod_floor(&u).to_u64().expect("residue below u");
                union.push(u64v, &[residue])?;
                wits.push(ProgressionWitness { u: u64v, w, diag });
            }
        }
        t += 1u32;
    }
    if wits.len() < prime_budget {
        return Err(Error::NotFound(format!("only {} primes found for budget {prime_budget}", wits.len())));
    }
    Ok((union, wits))
}

/// Name of G_v's family when a named recipe applied.
pub fn certificate_family(c: &DensityCertificate) -> Option<Family> {
    recognize_family(&c.subgraph()).primary
}
