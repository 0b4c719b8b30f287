//! Undirected multigraphs without self-loops.

use std::collections::VecDeque;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    mult: Vec<u32>,
}

impl Multigraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        Ok(Multigraph { n, mult: vec![0; n * n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j, m) in edges {
            g.add_edges(i, j, m)?;
        }
        Ok(g)
    }

    pub fn from_matrix(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare);
            }
            for (j, &m) in row.iter().enumerate() {
                if rows[j][i] != m {
                    return Err(Error::NotSymmetric);
                }
                if i == j && m != 0 {
                    return Err(Error::SelfLoop(i));
                }
                g.mult[i * n + j] = m;
            }
        }
        Ok(g)
    }

    /// Adds `m` parallel edges between `i` and `j`.
    pub fn add_edges(&mut self, i: usize, j: usize, m: u32) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        self.mult[i * self.n + j] += m;
        self.mult[j * self.n + i] += m;
        Ok(())
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.mult[i * self.n + j]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.multiplicity(i, j) > 0
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.row(i).iter().map(|&m| m as u64).sum()
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// Number of distinct neighbours, ignoring multiplicity.
    pub fn valency(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&m| m > 0).count()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.mult[i * self.n..(i + 1) * self.n]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().filter(|(_, &m)| m > 0).map(|(j, _)| j)
    }

    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    /// Edge count with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum::<u64>() / 2
    }

    /// Edges `(i, j, mult)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let m = self.multiplicity(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.n
    }

    /// Vertices reachable from `start`, in BFS order.
    pub fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Whether the subgraph induced on `keep` is connected.
    pub fn is_connected_on(&self, keep: &[usize]) -> bool {
        if keep.is_empty() {
            return false;
        }
        let mut inside = vec![false; self.n];
        for &v in keep {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![keep[0]];
        seen[keep[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == keep.len()
    }

    /// Subgraph induced on `keep`, with `map[new] = old`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(Multigraph, Vec<usize>)> {
        if keep.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut seen = vec![false; self.n];
        for &v in keep {
            self.check(v)?;
            if seen[v] {
                return Err(Error::Contract(format!("vertex {v} listed twice")));
            }
            seen[v] = true;
        }
        let k = keep.len();
        let mut mult = vec![0; k * k];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                mult[a * k + b] = self.multiplicity(i, j);
            }
        }
        Ok((Multigraph { n: k, mult }, keep.to_vec()))
    }

    /// The graph G_v: remove `v`, keep the remaining vertices in order.
    pub fn remove_vertex(&self, v: usize) -> Result<(Multigraph, Vec<usize>)> {
        self.check(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    /// New vertex 0 joined by single edges to every old vertex (old vertex i becomes i+1).
    pub fn cone(&self) -> Multigraph {
        let n = self.n + 1;
        let mut g = Multigraph { n, mult: vec![0; n * n] };
        for i in 0..self.n {
            for j in 0..self.n {
                g.mult[(i + 1) * n + j + 1] = self.multiplicity(i, j);
            }
            g.mult[i + 1] = 1;
            g.mult[(i + 1) * n] = 1;
        }
        g
    }

    /// Appends a new last vertex joined to `v` by `e` edges.
    pub fn attach_pendant(&self, v: usize, e: u32) -> Result<Multigraph> {
        self.check(v)?;
        if e == 0 {
            return Err(Error::Contract("pendant multiplicity must be at least 1".into()));
        }
        let n = self.n + 1;
        let mut g = Multigraph { n, mult: vec![0; n * n] };
        for i in 0..self.n {
            for j in 0..self.n {
                g.mult[i * n + j] = self.multiplicity(i, j);
            }
        }
        g.mult[v * n + self.n] = e;
        g.mult[self.n * n + v] = e;
        Ok(g)
    }

    /// Relabels so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Multigraph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        Ok(self.induced_subgraph(perm)?.0)
    }

    pub fn adjacency(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, |i, j| BigInt::from(self.multiplicity(i, j)))
    }

    pub fn laplacian(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, |i, j| {
            if i == j {
                BigInt::from(self.degree(i))
            } else {
                -BigInt::from(self.multiplicity(i, j))
            }
        })
    }

    /// Number of spanning trees, via a first minor of the Laplacian.
    pub fn spanning_tree_count(&self) -> Result<BigInt> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.n == 1 {
            return Ok(BigInt::from(1));
        }
        Ok(self.laplacian().principal_minor(&[0]).determinant())
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.n as u64
    }
}
