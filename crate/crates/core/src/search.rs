//! Pruned depth-first search over diagonal points in a box.
//!
//! Coordinates 0..n-2 are looped; the last coordinate is handled in closed form, since the
//! determinant is linear in it. A loop over coordinate k stops as soon as the point
//! (prefix, t, r, ..., r) is positive definite with determinant above the cap: every point
//! further along is positive definite with a larger determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::graph::Multigraph;
use crate::linalg::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Val {
    S(i128),
    B(BigInt),
}

impl Val {
    fn from_big(b: BigInt) -> Val {
        match b.to_i128() {
            Some(x) => Val::S(x),
            None => Val::B(b),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Val::S(x) => *x > 0,
            Val::B(b) => b.is_positive(),
        }
    }

    pub fn exceeds(&self, cap: u64) -> bool {
        match self {
            Val::S(x) => *x > cap as i128,
            Val::B(b) => *b > BigInt::from(cap),
        }
    }

    pub fn big(&self) -> BigInt {
        match self {
            Val::S(x) => BigInt::from(*x),
            Val::B(b) => b.clone(),
        }
    }
}

/// Leading principal minors D_1..D_n of M_G(point).
pub fn minors(g: &Multigraph, point: &[u64]) -> Vec<Val> {
    let n = point.len();
    let mut a = vec![0i128; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = if i == j { point[i] as i128 } else { -(g.multiplicity(i, j) as i128) };
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut prev: i128 = 1;
    for k in 0..n {
        let p = a[k * n + k];
        out.push(Val::S(p));
        if k + 1 == n {
            break;
        }
        if p == 0 {
            return slow_minors(g, point);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j].checked_mul(p).and_then(|x| a[i * n + k].checked_mul(a[k * n + j]).and_then(|y| x.checked_sub(y)));
                match v {
                    Some(v) => a[i * n + j] = v / prev,
                    None => return slow_minors(g, point),
                }
            }
        }
        prev = p;
    }
    out
}

fn slow_minors(g: &Multigraph, point: &[u64]) -> Vec<Val> {
    let n = point.len();
    let m = ExactMatrix::from_fn(n, |i, j| if i == j { BigInt::from(point[i]) } else { -BigInt::from(g.multiplicity(i, j)) });
    m.leading_minors().into_iter().map(Val::from_big).collect()
}

/// Parameters shared by one search.
pub struct Ctx<'a> {
    pub g: &'a Multigraph,
    pub r: u64,
    pub bx: u64,
    /// Loops stop once the point is positive definite with determinant above this.
    pub cap: u64,
    /// Skip points whose leading minors (up to the looped coordinate) are not all positive.
    pub pd_prune: bool,
}

/// A point (prefix, r) with the last coordinate free.
pub struct Leaf<'a> {
    pub prefix: &'a [u64],
    pub minors: &'a [Val],
    pub r: u64,
    pub bx: u64,
}

impl Leaf<'_> {
    /// D_1..D_{n-1} all positive, i.e. the leading block is positive definite.
    pub fn leading_positive(&self) -> bool {
        let n = self.minors.len();
        self.minors[..n - 1].iter().all(Val::is_positive)
    }

    /// (alpha, beta) with det = alpha*t - beta in the last coordinate t.
    pub fn form(&self) -> (Val, Val) {
        let n = self.minors.len();
        let alpha = &self.minors[n - 2];
        let fr = &self.minors[n - 1];
        if let (Val::S(a), Val::S(f)) = (alpha, fr) {
            if let Some(b) = a.checked_mul(self.r as i128).and_then(|x| x.checked_sub(*f)) {
                return (Val::S(*a), Val::S(b));
            }
        }
        let (a, f) = (alpha.big(), fr.big());
        let b = &a * BigInt::from(self.r) - f;
        (Val::from_big(a), Val::from_big(b))
    }

    /// The last coordinate giving determinant 0 when the leading block is positive definite.
    pub fn zero_point(&self) -> Option<u64> {
        if !self.leading_positive() {
            return None;
        }
        let (a, b) = self.form();
        let (a, b) = (a.big(), b.big());
        let (q, rem) = b.div_rem(&a);
        if rem.is_zero() && q.is_positive() {
            q.to_u64()
        } else {
            None
        }
    }

    /// Calls `each(t, value)` for every t in [r, bx] with lo <= alpha*t - beta <= hi, t increasing.
    /// Returns whether values in range may exist for t > bx.
    pub fn fill(&self, lo: u64, hi: u64, each: &mut dyn FnMut(u64, u64)) -> bool {
        let (a, b) = self.form();
        if let (Val::S(a), Val::S(b)) = (&a, &b) {
            if let Some(tr) = fill_small(*a, *b, lo, hi, self.r, self.bx, each) {
                return tr;
            }
        }
        fill_big(&a.big(), &b.big(), lo, hi, self.r, self.bx, each)
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
    a.div_euclid(b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

fn fill_small(a: i128, b: i128, lo: u64, hi: u64, r: u64, bx: u64, each: &mut dyn FnMut(u64, u64)) -> Option<bool> {
    let (lo, hi) = (lo as i128, hi as i128);
    if a == 0 {
        let v = -b;
        if v >= lo && v <= hi {
            each(r, v as u64);
        }
        return Some(false);
    }
    let (tlo, thi) = if a > 0 {
        (ceil_div(b.checked_add(lo)?, a), floor_div(b.checked_add(hi)?, a))
    } else {
        (ceil_div(b.checked_add(hi)?, a), floor_div(b.checked_add(lo)?, a))
    };
    let truncated = thi > bx as i128;
    let start = tlo.max(r as i128);
    let end = thi.min(bx as i128);
    let mut t = start;
    while t <= end {
        let v = a.checked_mul(t)?.checked_sub(b)?;
        each(t as u64, v as u64);
        t += 1;
    }
    Some(truncated)
}

fn fill_big(a: &BigInt, b: &BigInt, lo: u64, hi: u64, r: u64, bx: u64, each: &mut dyn FnMut(u64, u64)) -> bool {
    let (lo, hi) = (BigInt::from(lo), BigInt::from(hi));
    if a.is_zero() {
        let v = -b;
        if v >= lo && v <= hi {
            each(r, v.to_u64().unwrap());
        }
        return false;
    }
    let fl = |x: BigInt| -> BigInt { x.div_floor(a) };
    let ce = |x: BigInt| -> BigInt { -((-x).div_floor(a)) };
    let (tlo, thi) = if a.is_positive() { (ce(b + &lo), fl(b + &hi)) } else { (ce(b + &hi), fl(b + &lo)) };
    let truncated = thi > BigInt::from(bx);
    let mut t = tlo.max(BigInt::from(r));
    let end = thi.min(BigInt::from(bx));
    while t <= end {
        let v = a * &t - b;
        each(t.to_u64().unwrap(), v.to_u64().unwrap());
        t += 1;
    }
    truncated
}

impl Ctx<'_> {
    fn point(&self, prefix: &[u64]) -> Vec<u64> {
        let mut p = prefix.to_vec();
        p.resize(self.g.order(), self.r);
        p
    }

    fn stops(&self, m: &[Val]) -> bool {
        m.iter().all(Val::is_positive) && m[m.len() - 1].exceeds(self.cap)
    }

    /// Values of coordinate 0 worth visiting, and whether the box cut the range short.
    pub fn top_range(&self) -> (Vec<u64>, bool) {
        let mut out = Vec::new();
        for t in self.r..=self.bx {
            let m = minors(self.g, &self.point(&[t]));
            if self.stops(&m) {
                return (out, false);
            }
            out.push(t);
        }
        (out, true)
    }

    /// Searches every point with first coordinate `a0`; returns whether the box truncated the search.
    pub fn visit_top(&self, a0: u64, leaf: &mut dyn FnMut(&Leaf)) -> bool {
        let mut prefix = vec![a0];
        if self.g.order() == 2 {
            let m = minors(self.g, &self.point(&prefix));
            let l = Leaf { prefix: &prefix, minors: &m, r: self.r, bx: self.bx };
            leaf(&l);
            return false;
        }
        self.walk(1, &mut prefix, leaf)
    }

    fn walk(&self, depth: usize, prefix: &mut Vec<u64>, leaf: &mut dyn FnMut(&Leaf)) -> bool {
        let n = self.g.order();
        let mut truncated = true;
        let mut deeper = false;
        for t in self.r..=self.bx {
            prefix.push(t);
            let m = minors(self.g, &self.point(prefix));
            if self.stops(&m) {
                prefix.pop();
                truncated = false;
                break;
            }
            let skip = self.pd_prune && !m[..=depth].iter().all(Val::is_positive);
            if !skip {
                if depth == n - 2 {
                    let l = Leaf { prefix, minors: &m, r: self.r, bx: self.bx };
                    leaf(&l);
                } else {
                    deeper |= self.walk(depth + 1, prefix, leaf);
                }
            }
            prefix.pop();
        }
        truncated || deeper
    }
}

/// Runs `f` over the first-coordinate values, in parallel when enabled; output keeps input order.
pub fn map_tops<T: Send>(tops: Vec<u64>, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        tops.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        tops.into_iter().map(f).collect()
    }
}

/// Advances `point` to the next box point in lexicographic order; false after the last one.
pub fn odometer(point: &mut [u64], lo: u64, hi: u64) -> bool {
    for i in (0..point.len()).rev() {
        if point[i] < hi {
            point[i] += 1;
            for x in point[i + 1..].iter_mut() {
                *x = lo;
            }
            return true;
        }
    }
    false
}
