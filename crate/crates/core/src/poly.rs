//! Evaluation of the critical polynomial d_G = det(Diag(x) - A_G) and its linear specialisations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::linalg::ExactMatrix;

/// Evaluation point (a_1, ..., a_n), all entries positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalAssignment(Vec<BigInt>);

impl DiagonalAssignment {
    pub fn new(values: Vec<BigInt>) -> Result<Self> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::NonPositiveDiagonal);
        }
        Ok(DiagonalAssignment(values))
    }

    pub fn from_u64(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn constant(n: usize, r: u64) -> Result<Self> {
        Self::from_u64(&vec![r; n])
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<BigInt> {
        self.0
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.0.iter().min()
    }

    /// Inserts `t` at position `v`.
    pub fn with_inserted(&self, v: usize, t: BigInt) -> Result<Self> {
        let mut vals = self.0.clone();
        vals.insert(v, t);
        Self::new(vals)
    }
}

/// The form alpha*t - beta.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(with = "crate::json::bigint")]
    pub alpha: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub beta: BigInt,
}

impl LinearForm {
    pub fn new(alpha: BigInt, beta: BigInt) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::NonPositiveAlpha { alpha: alpha.to_string(), beta: beta.to_string() });
        }
        Ok(LinearForm { alpha, beta })
    }

    pub fn at(&self, t: &BigInt) -> BigInt {
        &self.alpha * t - &self.beta
    }

    pub fn gcd(&self) -> BigInt {
        self.alpha.gcd(&self.beta)
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd().is_one()
    }
}

pub fn matrix_at(g: &Multigraph, a: &DiagonalAssignment) -> Result<ExactMatrix> {
    let n = g.order();
    if a.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: a.len() });
    }
    Ok(ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            a.values()[i].clone()
        } else {
            -BigInt::from(g.multiplicity(i, j))
        }
    }))
}

pub fn evaluate(g: &Multigraph, a: &DiagonalAssignment) -> Result<BigInt> {
    Ok(matrix_at(g, a)?.determinant())
}

/// d_G with `t` at vertex `v` and `rest` elsewhere, as alpha*t - beta.
///
/// Computed as det(N)*t - S^T N* S where N = M_{G_v}(rest) and S holds the multiplicities at v,
/// then checked against direct evaluation at two values of t.
pub fn linear_in_t(g: &Multigraph, v: usize, rest: &DiagonalAssignment) -> Result<LinearForm> {
    let (alpha, beta) = raw_linear_in_t(g, v, rest)?;
    LinearForm::new(alpha, beta)
}

/// As [`linear_in_t`] without the sign requirement on alpha.
pub fn raw_linear_in_t(g: &Multigraph, v: usize, rest: &DiagonalAssignment) -> Result<(BigInt, BigInt)> {
    let n = g.order();
    if v >= n {
        return Err(Error::VertexOutOfRange(v));
    }
    if rest.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, got: rest.len() });
    }
    let (gv, map) = g.remove_vertex(v)?;
    let nmat = matrix_at(&gv, rest)?;
    let s: Vec<BigInt> = map.iter().map(|&u| BigInt::from(g.multiplicity(v, u))).collect();
    let alpha = nmat.determinant();
    let beta = if n == 1 { BigInt::zero() } else { quadratic_adjugate(&nmat, &s) };
    for t in [BigInt::from(1), BigInt::from(2)] {
        let full = rest.with_inserted(v, t.clone())?;
        let direct = evaluate(g, &full)?;
        if direct != &alpha * &t - &beta {
            return Err(Error::Contract("linear form disagrees with direct evaluation".into()));
        }
    }
    Ok((alpha, beta))
}

/// S^T N* S.
pub fn quadratic_adjugate(n: &ExactMatrix, s: &[BigInt]) -> BigInt {
    let adj = n.adjugate();
    let ns = adj.mul_vec(s);
    s.iter().zip(&ns).map(|(a, b)| a * b).sum()
}

/// kappa*(t - d_i): vertex i carries t, every other vertex its degree.
pub fn laplacian_line(g: &Multigraph, i: usize) -> Result<LinearForm> {
    let kappa = g.spanning_tree_count()?;
    if i >= g.order() {
        return Err(Error::VertexOutOfRange(i));
    }
    let d = BigInt::from(g.degree(i));
    LinearForm::new(kappa.clone(), kappa * d)
}

/// prod (x_j + 1) - sum_i prod_{j != i} (x_j + 1), the determinant on K_n.
pub fn complete_graph_det(x: &DiagonalAssignment) -> BigInt {
    let b: Vec<BigInt> = x.values().iter().map(|v| v + 1).collect();
    let prod: BigInt = b.iter().product();
    let sum: BigInt = (0..b.len()).map(|i| b.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<BigInt>()).sum();
    prod - sum
}

/// d_{K(2,q)} at (t, x, y_1, ..., y_q):
/// (x*P - P*sigma) t - x*P*sigma, where P = prod y_i and P*sigma = sum_i prod_{j != i} y_j.
pub fn bipartite_k2q_det(t: &BigInt, x: &BigInt, y: &DiagonalAssignment) -> BigInt {
    let ys = y.values();
    let p: BigInt = ys.iter().product();
    let ps: BigInt = (0..ys.len()).map(|i| ys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<BigInt>()).sum();
    (x * &p - &ps) * t - x * &ps
}

/// Form obtained after attaching a pendant vertex with diagonal q to the t-vertex by e edges:
/// q(alpha t - beta) - e^2 alpha = q alpha t - (q beta + e^2 alpha). Returns the form and its gcd.
pub fn extend_pendant_form(q: &BigInt, e: &BigInt, f: &LinearForm) -> Result<(LinearForm, BigInt)> {
    if !q.is_positive() || !e.is_positive() {
        return Err(Error::Contract("q and e must be positive".into()));
    }
    let out = LinearForm::new(q * &f.alpha, q * &f.beta + e * e * &f.alpha)?;
    let g = out.gcd();
    Ok((out, g))
}
