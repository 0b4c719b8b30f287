//! Exact dense integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

/// Invariant factors f_1 | f_2 | ... | f_rho of a Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantFactors {
    pub rank: usize,
    pub factors: Vec<BigInt>,
}

impl InvariantFactors {
    /// Order of the torsion group, the product of all factors.
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        let k = self.factors.len();
        k <= 1 || self.factors[k - 2].is_one()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|f| f.is_one())
    }

    /// Factors greater than one: the group is the product of Z/f for these.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        ExactMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare);
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { dim, entries })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { BigInt::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        let n = self.dim;
        ExactMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn scaled(&self, c: &BigInt) -> ExactMatrix {
        ExactMatrix { dim: self.dim, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    /// Matrix with the listed rows and columns deleted (a principal submatrix).
    pub fn principal_minor(&self, remove: &[usize]) -> ExactMatrix {
        let keep: Vec<usize> = (0..self.dim).filter(|i| !remove.contains(i)).collect();
        self.submatrix(&keep, &keep)
    }

    /// Leading k-by-k block.
    pub fn leading(&self, k: usize) -> ExactMatrix {
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        ExactMatrix::from_fn(k, |a, b| self.get(rows[a], cols[b]).clone())
    }

    /// The matrix M_{ij}: row i and column j deleted.
    pub fn minor(&self, i: usize, j: usize) -> ExactMatrix {
        let rows: Vec<usize> = (0..self.dim).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.dim).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    /// Fraction-free elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = !sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    /// All leading principal minors D_1, ..., D_n.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut prev = BigInt::one();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let p = a[k * n + k].clone();
            out.push(p.clone());
            if p.is_zero() {
                // Elimination without pivoting stalls; finish the tail directly.
                out.extend((k + 2..=n).map(|m| self.leading(m).determinant()));
                return out;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &p - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = p;
        }
        out
    }

    /// Sylvester's criterion.
    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = a[k * n + k].clone();
            if !p.is_positive() {
                return Ok(false);
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &p - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = p;
        }
        Ok(true)
    }

    /// (M*)_{ij} = (-1)^{i+j} det M_{ji}.
    pub fn adjugate(&self) -> ExactMatrix {
        let n = self.dim;
        if n == 1 {
            return ExactMatrix::identity(1);
        }
        let adj = ExactMatrix::from_fn(n, |i, j| {
            let d = self.minor(j, i).determinant();
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        });
        debug_assert_eq!(
            self.mul(&adj),
            ExactMatrix::identity(n).scaled(&self.determinant()),
            "adjugate identity"
        );
        adj
    }

    pub fn rank(&self) -> usize {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(r) = (rank..n).find(|&r| !a[r * n + c].is_zero()) else {
                continue;
            };
            for k in 0..n {
                a.swap(rank * n + k, r * n + k);
            }
            let p = a[rank * n + c].clone();
            for i in rank + 1..n {
                for j in c + 1..n {
                    let v = &a[i * n + j] * &p - &a[i * n + c] * &a[rank * n + j];
                    a[i * n + j] = v / &prev;
                }
                a[i * n + c] = BigInt::zero();
            }
            prev = p;
            rank += 1;
        }
        rank
    }

    /// Smith normal form with smallest-absolute-value pivoting.
    pub fn smith_normal_form(&self) -> InvariantFactors {
        let n = self.dim;
        let mut a = self.entries.clone();
        let at = |i: usize, j: usize| i * n + j;
        let mut diag = Vec::new();
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        let v = &a[at(i, j)];
                        if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[at(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    break;
                };
                for k in 0..n {
                    a.swap(at(t, k), at(pi, k));
                }
                for k in 0..n {
                    a.swap(at(k, t), at(k, pj));
                }
                let p = a[at(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..n {
                    let q = a[at(i, t)].div_floor(&p);
                    if !q.is_zero() {
                        for k in t..n {
                            let v = &a[at(t, k)] * &q;
                            a[at(i, k)] -= v;
                        }
                    }
                    dirty |= !a[at(i, t)].is_zero();
                }
                for j in t + 1..n {
                    let q = a[at(t, j)].div_floor(&p);
                    if !q.is_zero() {
                        for k in t..n {
                            let v = &a[at(k, t)] * &q;
                            a[at(k, j)] -= v;
                        }
                    }
                    dirty |= !a[at(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[at(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        for k in t..n {
                            let v = a[at(i, k)].clone();
                            a[at(t, k)] += v;
                        }
                    }
                    None => break,
                }
            }
            let p = a[at(t, t)].abs();
            if p.is_zero() {
                break;
            }
            diag.push(p);
        }
        InvariantFactors { rank: diag.len(), factors: diag }
    }

    /// Basis of the rational kernel, each vector scaled to coprime integers.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim;
        let mut a: Vec<Vec<BigRational>> =
            (0..n).map(|i| self.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for k in c..n {
                a[r][k] = &a[r][k] * &inv;
            }
            for i in 0..n {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in c..n {
                        let v = &a[r][k] * &f;
                        a[i][k] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); n];
                v[f] = BigRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[row][f].clone();
                }
                primitive(&v)
            })
            .collect()
    }

    /// The primitive strictly positive kernel vector, when the kernel is a line containing one.
    pub fn positive_kernel_vector(&self) -> Option<Vec<BigInt>> {
        let basis = self.kernel_basis();
        if basis.len() != 1 {
            return None;
        }
        let v = &basis[0];
        if v.iter().all(|x| x.is_positive()) {
            Some(v.clone())
        } else if v.iter().all(|x| x.is_negative()) {
            Some(v.iter().map(|x| -x).collect())
        } else {
            None
        }
    }

    /// PSD of rank n-1. With `connected_mg_form` the caller guarantees M = M_G(a) for a connected G.
    pub fn is_psd_rank_nminus1(&self, connected_mg_form: bool) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if connected_mg_form {
            return Ok(self.determinant().is_zero() && self.positive_kernel_vector().is_some());
        }
        if self.dim == 0 || self.rank() + 1 != self.dim {
            return Ok(false);
        }
        Ok(self.all_principal_minors_nonnegative())
    }

    /// Exponential check over every principal submatrix.
    pub fn all_principal_minors_nonnegative(&self) -> bool {
        let n = self.dim;
        (1u64..(1 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            !self.submatrix(&idx, &idx).determinant().is_negative()
        })
    }
}

fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| if g.is_zero() { x } else { x / &g }).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -x.clone();
        }
    }
    out
}

/// gcd of all entries (0 for the zero vector).
pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}
