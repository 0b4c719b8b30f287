//! Value sets V_{d_G}(r) and V_G(r) up to a bound, with witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{contract, Error, Result};
use crate::graph::Multigraph;
use crate::poly::{evaluate, matrix_at, DiagonalAssignment};
use crate::search::{self, Ctx, Leaf};
use crate::structures::point_is_cyclic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SieveMode {
    /// Every diagonal point: V_{d_G}(r).
    Any,
    /// Positive definite points only.
    Pd,
    /// Positive definite points with cyclic group, plus structures with cyclic group for 0: V_G(r).
    PdCyclic,
    /// Only the value 0, realised by a structure with cyclic group.
    StructureZero,
}

impl fmt::Display for SieveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SieveMode::Any => "any",
            SieveMode::Pd => "pd",
            SieveMode::PdCyclic => "pd-cyclic",
            SieveMode::StructureZero => "structure-zero",
        })
    }
}

impl FromStr for SieveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(SieveMode::Any),
            "pd" => Ok(SieveMode::Pd),
            "pd-cyclic" => Ok(SieveMode::PdCyclic),
            "structure-zero" => Ok(SieveMode::StructureZero),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown sieve mode {s}") }),
        }
    }
}

/// A reason why searching the box is enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProvenBound {
    /// M_G(r,...,r) is positive definite, so every loop ends once the determinant exceeds the bound.
    PositiveDefiniteAtR,
    /// Every point with value at most N has all coordinates at most `bound`.
    Explicit { bound: u64, reason: &'static str },
}

#[derive(Debug, Clone)]
pub struct SieveReport {
    pub mode: SieveMode,
    pub r: u64,
    pub max_value: u64,
    pub bx: u64,
    /// value -> lexicographically smallest witness diagonal found.
    pub hits: BTreeMap<u64, Vec<u64>>,
    pub complement: Vec<u64>,
    /// Whether the box may have cut off points with values in range.
    pub truncated: bool,
    pub proven_bound: Option<ProvenBound>,
    pub complete: bool,
}

impl SieveReport {
    pub fn contains(&self, v: u64) -> bool {
        self.hits.contains_key(&v)
    }

    pub fn bitmap(&self) -> Vec<bool> {
        let mut b = vec![false; self.max_value as usize + 1];
        for &v in self.hits.keys() {
            b[v as usize] = true;
        }
        b
    }

    pub fn to_json(&self) -> Value {
        let bound = match &self.proven_bound {
            None => Value::Null,
            Some(ProvenBound::PositiveDefiniteAtR) => json!({"kind": "positive-definite-at-r"}),
            Some(ProvenBound::Explicit { bound, reason }) => json!({"kind": "explicit", "bound": bound, "reason": reason}),
        };
        json!({
            "mode": self.mode.to_string(),
            "r": self.r,
            "max": self.max_value,
            "box": self.bx,
            "complete": self.complete,
            "truncated": self.truncated,
            "proven_bound": bound,
            "complement": self.complement,
            "hits": self.hits.iter().map(|(v, w)| json!({"value": v, "witness": w})).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,witness\n");
        for (v, w) in &self.hits {
            let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{v},{}\n", w.join(";")));
        }
        s
    }
}

fn is_unit_path3(g: &Multigraph) -> bool {
    g.order() == 3 && g.is_simple() && g.edge_count() == 2 && g.is_connected()
}

/// Box bounds shipped with proofs.
pub fn proven_bound(g: &Multigraph, r: u64, max_value: u64) -> Option<ProvenBound> {
    let n = g.order();
    if n == 1 {
        return Some(ProvenBound::Explicit { bound: max_value.max(r), reason: "d = x" });
    }
    if n == 2 {
        let e = g.multiplicity(0, 1) as u64;
        return Some(ProvenBound::Explicit {
            bound: ((max_value + e * e) / r).max(r),
            reason: "xy - e^2 = w with y >= r gives x <= (w + e^2)/r",
        });
    }
    if is_unit_path3(g) && r >= 2 {
        return Some(ProvenBound::Explicit {
            bound: max_value.div_ceil(3).max((max_value + 4) / 4).max(r),
            reason: "xyz - x - z = w with x,y,z >= 2 gives x,z <= (w+2)/3 and y <= (w+4)/4",
        });
    }
    let diag = DiagonalAssignment::constant(n, r).ok()?;
    if matrix_at(g, &diag).ok()?.is_positive_definite().ok()? {
        return Some(ProvenBound::PositiveDefiniteAtR);
    }
    None
}

/// Least value of d_G on [r, oo)^n when M_G(r,...,r) is positive definite or singular positive semidefinite.
pub fn floor_value(g: &Multigraph, r: u64) -> Result<Option<BigInt>> {
    let m = matrix_at(g, &DiagonalAssignment::constant(g.order(), r)?)?;
    if m.is_positive_definite()? || (g.is_connected() && m.is_psd_rank_nminus1(true)?) {
        Ok(Some(m.determinant()))
    } else {
        Ok(None)
    }
}

type Hits = BTreeMap<u64, Vec<u64>>;

pub fn sieve(g: &Multigraph, mode: SieveMode, r: u64, max_value: u64, bx: u64) -> Result<SieveReport> {
    if r == 0 {
        return Err(contract("r >= 1"));
    }
    let n = g.order();
    let max_value = if mode == SieveMode::StructureZero { 0 } else { max_value };
    let mut hits: Hits = BTreeMap::new();
    let mut truncated = false;
    if n == 1 {
        if mode != SieveMode::StructureZero {
            for v in r..=max_value.min(bx) {
                hits.insert(v, vec![v]);
            }
            truncated = bx < max_value;
        }
    } else {
        let cap = if mode == SieveMode::StructureZero { 0 } else { max_value };
        let pd_prune = mode != SieveMode::Any;
        let ctx = Ctx { g, r, bx, cap, pd_prune };
        let (tops, top_trunc) = ctx.top_range();
        truncated |= top_trunc;
        let parts = search::map_tops(tops, |a0| {
            let mut local: Hits = BTreeMap::new();
            let mut trunc = false;
            trunc |= ctx.visit_top(a0, &mut |leaf| trunc_leaf(g, mode, max_value, leaf, &mut local, &mut trunc));
            (local, trunc)
        });
        for (local, trunc) in parts {
            truncated |= trunc;
            for (v, w) in local {
                hits.entry(v).or_insert(w);
            }
        }
    }
    Ok(finish(g, mode, r, max_value, bx, hits, truncated))
}

fn trunc_leaf(g: &Multigraph, mode: SieveMode, max_value: u64, leaf: &Leaf, local: &mut Hits, trunc: &mut bool) {
    let record = |local: &mut Hits, t: u64, v: u64| {
        local.entry(v).or_insert_with(|| {
            let mut w = leaf.prefix.to_vec();
            w.push(t);
            w
        });
    };
    match mode {
        SieveMode::Any => {
            *trunc |= leaf.fill(0, max_value, &mut |t, v| record(local, t, v));
        }
        SieveMode::Pd => {
            if leaf.leading_positive() {
                *trunc |= leaf.fill(1, max_value, &mut |t, v| record(local, t, v));
            }
        }
        SieveMode::PdCyclic | SieveMode::StructureZero => {
            if !leaf.leading_positive() {
                return;
            }
            let alpha = leaf.form().0.big();
            if mode == SieveMode::PdCyclic {
                *trunc |= leaf.fill(1, max_value, &mut |t, v| {
                    if local.contains_key(&v) {
                        return;
                    }
                    let mut w = leaf.prefix.to_vec();
                    w.push(t);
                    if alpha.gcd(&BigInt::from(v)).is_one() || point_is_cyclic(g, &w) {
                        local.insert(v, w);
                    }
                });
            }
            if let std::collections::btree_map::Entry::Vacant(e) = local.entry(0) {
                if let Some(t) = leaf.zero_point() {
                    if t >= leaf.r && t <= leaf.bx {
                        let mut w = leaf.prefix.to_vec();
                        w.push(t);
                        if point_is_cyclic(g, &w) {
                            e.insert(w);
                        }
                    } else if t > leaf.bx {
                        *trunc = true;
                    }
                }
            }
        }
    }
}

fn finish(g: &Multigraph, mode: SieveMode, r: u64, max_value: u64, bx: u64, hits: Hits, truncated: bool) -> SieveReport {
    let complement: Vec<u64> = (0..=max_value).filter(|v| !hits.contains_key(v)).collect();
    let proven = if mode == SieveMode::Any || mode == SieveMode::StructureZero { proven_bound(g, r, max_value) } else { None };
    let explicit_ok = matches!(proven, Some(ProvenBound::Explicit { bound, .. }) if bound <= bx);
    let complete = match mode {
        SieveMode::Any => !truncated || explicit_ok,
        SieveMode::Pd | SieveMode::PdCyclic => !truncated,
        SieveMode::StructureZero => hits.contains_key(&0) || !truncated,
    };
    SieveReport { mode, r, max_value, bx, hits, complement, truncated, proven_bound: proven, complete }
}

/// Unpruned scan of every point of [r, bx]^n, for cross-checks.
pub fn sieve_oracle(g: &Multigraph, mode: SieveMode, r: u64, max_value: u64, bx: u64) -> Result<SieveReport> {
    let n = g.order();
    let max_value = if mode == SieveMode::StructureZero { 0 } else { max_value };
    let mut hits: Hits = BTreeMap::new();
    let mut point = vec![r; n];
    loop {
        let diag = DiagonalAssignment::from_u64(&point)?;
        let m = matrix_at(g, &diag)?;
        let d = m.determinant();
        if d >= BigInt::zero() && d <= BigInt::from(max_value) {
            let v: u64 = d.clone().try_into().unwrap();
            let ok = match mode {
                SieveMode::Any => true,
                SieveMode::Pd => m.is_positive_definite()?,
                SieveMode::PdCyclic | SieveMode::StructureZero => {
                    let shape = if d.is_zero() {
                        n >= 2 && m.is_psd_rank_nminus1(false)? && m.positive_kernel_vector().is_some()
                    } else {
                        mode == SieveMode::PdCyclic && m.is_positive_definite()?
                    };
                    shape && m.smith_normal_form().is_cyclic()
                }
            };
            if ok {
                hits.entry(v).or_insert_with(|| point.clone());
            }
        }
        if !search::odometer(&mut point, r, bx) {
            break;
        }
    }
    let mut rep = finish(g, mode, r, max_value, bx, hits, true);
    rep.complete = false;
    Ok(rep)
}

/// Witness (x, y, z), all at least 2, with xyz - x - z = w, from the constructive cases for A_3.
pub fn a3_certificate(w: u64) -> Option<(u64, u64, u64)> {
    let found = (|| {
        // z = 2: x(2y - 1) = w + 2.
        let m = w + 2;
        if let Some(d) = divisors(m).into_iter().find(|&d| d >= 3 && d % 2 == 1 && m / d >= 2) {
            return Some((m / d, d.div_ceil(2), 2));
        }
        // z = 4: x(4y - 1) = w + 4.
        let m = w + 4;
        if let Some(d) = divisors(m).into_iter().find(|&d| d >= 7 && d % 4 == 3 && m / d >= 2) {
            return Some((m / d, (d + 1) / 4, 4));
        }
        // w = 2^m - 2 with m > 4 even: x = 4, z = 6.
        if (w + 2).is_power_of_two() {
            let m = (w + 2).trailing_zeros() as u64;
            if m > 4 && m.is_multiple_of(2) {
                return Some((4, ((1u64 << (m - 3)) + 1) / 3, 6));
            }
        }
        match w {
            30 => Some((3, 4, 3)),
            126 => Some((12, 2, 6)),
            _ => None,
        }
    })();
    found.filter(|&(x, y, z)| x >= 2 && y >= 2 && z >= 2 && (x * y * z) as i128 - x as i128 - z as i128 == w as i128)
}

/// Witness (x, y, z), all at least 2, with xyz - ax - bz = w, from the constructive cases for a >= b >= 1.
pub fn generalized_path_witness(a: u64, b: u64, w: u64) -> Option<(u64, u64, u64)> {
    if b == 0 || a < b {
        return None;
    }
    let f = |x: u64, y: u64, z: u64| x as i128 * y as i128 * z as i128 - (a * x) as i128 - (b * z) as i128;
    let ok = |p: (u64, u64, u64)| p.0 >= 2 && p.1 >= 2 && p.2 >= 2 && f(p.0, p.1, p.2) == w as i128;
    let factor = |m: u64| divisors(m).into_iter().find(|&d| d >= 2 && m / d >= 2).map(|d| (d, m / d));
    let candidates = || -> Vec<(u64, u64, u64)> {
        let mut c = Vec::new();
        if w == 0 {
            if b > 1 {
                c.push((b, 2, a));
            } else {
                // (xy - 1) c = a with z = c x: a divisor c of a with 1 + a/c = xy composite.
                for cdiv in divisors(a) {
                    if let Some((x, y)) = factor(1 + a / cdiv) {
                        c.push((x, y, cdiv * x));
                        break;
                    }
                }
            }
            return c;
        }
        // xy - b = 1, z = w + ax.
        if let Some((x, y)) = factor(b + 1) {
            c.push((x, y, w + a * x));
        }
        // yz - a = 1, x = w + bz.
        if let Some((z, y)) = factor(a + 1) {
            c.push((w + b * z, y, z));
        }
        // p | a and p | w: z = p, y = a/p + 1, x = w/p + b.
        for p in divisors(a) {
            if p >= 2 && w.is_multiple_of(p) {
                c.push((w / p + b, a / p + 1, p));
            }
        }
        // p | b and p | w: x = p, y = b/p + 1, z = w/p + a.
        for p in divisors(b) {
            if p >= 2 && w.is_multiple_of(p) {
                c.push((p, b / p + 1, w / p + a));
            }
        }
        if b == 1 && a.is_multiple_of(4) && w % 2 == 1 {
            let z = a / 2 + 1;
            c.push(((w + z) / 2, 2, z));
        }
        c
    };
    candidates().into_iter().find(|&p| ok(p))
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Evaluates a witness from a sieve report.
pub fn witness_value(g: &Multigraph, w: &[u64]) -> Result<BigInt> {
    evaluate(g, &DiagonalAssignment::from_u64(w)?)
}
