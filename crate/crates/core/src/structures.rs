//! Arithmetical structures (M, R): M = M_G(a), R > 0 primitive, MR = 0.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{contract, Error, Result};
use crate::family::Family;
use crate::graph::Multigraph;
use crate::json::{graph_to_json, int_array};
use crate::linalg::{gcd_all, ExactMatrix, InvariantFactors};
use crate::poly::{matrix_at, DiagonalAssignment};
use crate::search::{self, Ctx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticalStructure {
    pub graph: Multigraph,
    pub diag: DiagonalAssignment,
    pub r: Vec<BigInt>,
    pub phi: InvariantFactors,
}

impl ArithmeticalStructure {
    pub fn matrix(&self) -> ExactMatrix {
        matrix_at(&self.graph, &self.diag).expect("lengths checked at construction")
    }

    /// |Phi_M|.
    pub fn phi_order(&self) -> BigInt {
        self.phi.order()
    }

    pub fn is_cyclic(&self) -> bool {
        self.phi.is_cyclic()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": graph_to_json(&self.graph),
            "diag": int_array(self.diag.values()),
            "r": int_array(&self.r),
            "phi": int_array(&self.phi.nontrivial()),
        })
    }
}

pub fn verify_structure(g: &Multigraph, diag: &DiagonalAssignment, r: &[BigInt]) -> Result<ArithmeticalStructure> {
    let n = g.order();
    if r.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: r.len() });
    }
    let m = matrix_at(g, diag)?;
    if r.iter().any(|x| !x.is_positive()) {
        return Err(contract("R must be strictly positive"));
    }
    if !gcd_all(r).is_one() {
        return Err(contract("entries of R must be coprime"));
    }
    if m.mul_vec(r).iter().any(|x| !x.is_zero()) {
        return Err(contract("MR != 0"));
    }
    if g.is_connected() {
        if !m.is_psd_rank_nminus1(true)? {
            return Err(contract("M is not positive semidefinite of rank n-1"));
        }
    } else if !m.is_psd_rank_nminus1(false)? {
        return Err(contract("M is not positive semidefinite of rank n-1"));
    }
    let phi = m.smith_normal_form();
    let order = phi.order();
    let adj = m.adjugate();
    let expected = ExactMatrix::from_fn(n, |i, j| &order * &r[i] * &r[j]);
    if adj != expected {
        return Err(contract("adjugate differs from |Phi| R R^T"));
    }
    Ok(ArithmeticalStructure { graph: g.clone(), diag: diag.clone(), r: r.to_vec(), phi })
}

/// The structure on `g` at `diag` with R read off the kernel.
pub fn structure_at(g: &Multigraph, diag: &DiagonalAssignment) -> Result<ArithmeticalStructure> {
    let m = matrix_at(g, diag)?;
    let r = m.positive_kernel_vector().ok_or_else(|| contract("no positive kernel vector"))?;
    verify_structure(g, diag, &r)
}

/// Diagonal = degrees, R = all ones; |Phi| is the number of spanning trees.
pub fn laplacian_structure(g: &Multigraph) -> Result<ArithmeticalStructure> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let diag = DiagonalAssignment::from_u64(&g.degrees())?;
    verify_structure(g, &diag, &vec![BigInt::one(); g.order()])
}

#[derive(Debug, Clone)]
pub struct StructureEnumeration {
    pub structures: Vec<ArithmeticalStructure>,
    /// Every structure with all diagonal entries in [r, bound] is listed; nothing is claimed outside the box.
    pub complete_within_box: bool,
    pub r: u64,
    pub bound: u64,
}

/// All structures with r <= a_i <= bound, in lexicographic order of the diagonal.
pub fn enumerate_structures(g: &Multigraph, r: u64, bound: u64) -> Result<StructureEnumeration> {
    if r == 0 || bound < r {
        return Err(contract("need 1 <= r <= bound"));
    }
    let n = g.order();
    let mut points: Vec<Vec<u64>> = Vec::new();
    if n >= 2 {
        let ctx = Ctx { g, r, bx: bound, cap: 0, pd_prune: true };
        let (tops, _) = ctx.top_range();
        let per_top = |a0: u64| -> Vec<Vec<u64>> {
            let mut found = Vec::new();
            ctx.visit_top(a0, &mut |leaf| {
                if let Some(t) = leaf.zero_point() {
                    if t >= r && t <= bound {
                        let mut d = leaf.prefix.to_vec();
                        d.push(t);
                        found.push(d);
                    }
                }
            });
            found
        };
        points = search::map_tops(tops, per_top).into_iter().flatten().collect();
    }
    let mut structures = Vec::with_capacity(points.len());
    for p in points {
        let diag = DiagonalAssignment::from_u64(&p)?;
        structures.push(structure_at(g, &diag)?);
    }
    Ok(StructureEnumeration { structures, complete_within_box: true, r, bound })
}

/// Same search without pruning: every point of the box is tested.
pub fn enumerate_structures_unpruned(g: &Multigraph, r: u64, bound: u64) -> Result<Vec<ArithmeticalStructure>> {
    let n = g.order();
    let mut out = Vec::new();
    let mut point = vec![r; n];
    loop {
        let diag = DiagonalAssignment::from_u64(&point)?;
        let m = matrix_at(g, &diag)?;
        if m.determinant().is_zero() {
            if let Some(rv) = m.positive_kernel_vector() {
                out.push(verify_structure(g, &diag, &rv)?);
            }
        }
        if !search::odometer(&mut point, r, bound) {
            return Ok(out);
        }
    }
}

fn wheel_check(s: &ArithmeticalStructure, order: &BigInt, cyclic: bool) -> Result<()> {
    if &s.phi_order() != order || s.is_cyclic() != cyclic {
        return Err(contract(format!("unexpected group: {:?}", s.phi.nontrivial())));
    }
    Ok(())
}

/// Structure on W_{2k}: hub u, then rim v_1..v_k, w_k..w_1.
pub fn wheel_structure_even(k: usize) -> Result<ArithmeticalStructure> {
    if k < 2 {
        return Err(contract("k >= 2"));
    }
    let g = Family::W(2 * k).build()?;
    let kk = k as u64;
    // s_i = i + (i+1) + ... + k
    let s: Vec<u64> = (1..=kk).map(|i| (i..=kk).sum()).collect();
    let a = kk * (kk + 1) * (2 * kk + 1) / 3;
    let mut diag = vec![a];
    let mut r = vec![1u64];
    for i in 0..k {
        diag.push(if i + 1 == k { 3 } else { 2 });
        r.push(s[i]);
    }
    for i in (0..k).rev() {
        diag.push(if i + 1 == k { 3 } else { 2 });
        r.push(s[i]);
    }
    let st = verify_structure(&g, &DiagonalAssignment::from_u64(&diag)?, &to_big(&r))?;
    wheel_check(&st, &BigInt::from(6 * kk - 1), true)?;
    // Hub and the rim vertex v_k removed: a path with one diagonal entry 3.
    let m2 = st.matrix().principal_minor(&[0, k]).determinant();
    if m2 != BigInt::from(4 * kk - 1) {
        return Err(contract(format!("minor {m2} != 4k-1")));
    }
    Ok(st)
}

/// Determinant of M with hub and the rim vertex v_k deleted, for the even wheel structure.
pub fn wheel_even_minor(s: &ArithmeticalStructure, k: usize) -> BigInt {
    s.matrix().principal_minor(&[0, k]).determinant()
}

/// Structure on W_{2k+1}: hub u, then rim v_1..v_k, u', w_k..w_1.
pub fn wheel_structure_odd(k: usize) -> Result<ArithmeticalStructure> {
    if k < 2 {
        return Err(contract("k >= 2"));
    }
    let g = Family::W(2 * k + 1).build()?;
    let kk = k as u64;
    let s: Vec<u64> = (1..=kk).map(|i| 1 + (i..=kk).sum::<u64>()).collect();
    let a = 1 + 2 * kk + kk * (kk + 1) * (2 * kk + 1) / 3;
    let mut diag = vec![a];
    let mut r = vec![1u64];
    for &si in &s {
        diag.push(2);
        r.push(si);
    }
    diag.push(2 * kk + 3);
    r.push(1);
    for &si in s.iter().rev() {
        diag.push(2);
        r.push(si);
    }
    let st = verify_structure(&g, &DiagonalAssignment::from_u64(&diag)?, &to_big(&r))?;
    wheel_check(&st, &BigInt::from((2 * kk + 1) * (2 * kk + 1)), false)?;
    Ok(st)
}

/// Structure on C_{k+7}^+ with |Phi| = 2k+5, in the canonical C_n^+ order
/// (cycle c_0..c_{n-1}, tail hanging off c_1).
pub fn tadpole_structure(k: usize) -> Result<ArithmeticalStructure> {
    let n = k + 7;
    let g = Family::CPlus(n).build()?;
    let mut diag = vec![2u64, 2, 2, 2, 3];
    let mut r = vec![3u64, 4, 3, 2, 1];
    diag.extend(std::iter::repeat_n(2, k));
    r.extend(std::iter::repeat_n(1, k));
    diag.extend([3, 2, 2]);
    r.extend([1, 2, 2]);
    let st = verify_structure(&g, &DiagonalAssignment::from_u64(&diag)?, &to_big(&r))?;
    let kk = k as u64;
    let order = BigInt::from(2 * kk + 5);
    if st.phi_order() != order || !st.is_cyclic() {
        return Err(contract("tadpole group is not cyclic of order 2k+5"));
    }
    let (m1, m2) = tadpole_minors(&st);
    if m1 != BigInt::from(16 * (2 * kk + 5)) || m2 != BigInt::from(2 * (12 * kk + 29)) {
        return Err(contract(format!("tadpole minors {m1}, {m2}")));
    }
    Ok(st)
}

/// Minors used for the tadpole group: delete the degree-3 vertex c_1; then also its cycle neighbour c_0.
pub fn tadpole_minors(s: &ArithmeticalStructure) -> (BigInt, BigInt) {
    let m = s.matrix();
    (m.principal_minor(&[1]).determinant(), m.principal_minor(&[0, 1]).determinant())
}

/// Structure on C_4^+ with one diagonal entry 3 and |Phi| = 1.
pub fn c4_plus_structure() -> Result<ArithmeticalStructure> {
    let g = Family::CPlus(4).build()?;
    structure_at(&g, &DiagonalAssignment::from_u64(&[2, 2, 2, 3, 2])?)
}

/// Structure on C_6^+ with one diagonal entry 4 and |Phi| = 3.
pub fn c6_plus_structure() -> Result<ArithmeticalStructure> {
    let g = Family::CPlus(6).build()?;
    structure_at(&g, &DiagonalAssignment::from_u64(&[2, 2, 2, 2, 4, 2, 2])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enlargement {
    /// Two new leaves at v; v gets diagonal 3.
    TwoLeaves,
    /// On ~D_n: a new vertex on the leaf v, the other leaf at the same branch vertex gets diagonal 3.
    LeafExtension,
}

/// Enlarges `h` (carrying its all-2 structure) to a graph with a semidefinite point (2,2,3,2,...,2).
///
/// Two leaves: the new order is (w, w', v, other vertices of h in order); R = (1,1,R_H) or (1,1,2R_H).
/// Leaf extension (h = ~D_n in canonical order, v one of the leaves 0 or 1):
/// the order is (w, v, the other leaf, chain, last two leaves) and R = (2,4,2,6,...,6,3,3).
pub fn semidefinite_from_extended_dynkin(h: &Multigraph, v: usize, variant: Enlargement) -> Result<ArithmeticalStructure> {
    let nh = h.order();
    if v >= nh {
        return Err(Error::VertexOutOfRange(v));
    }
    let base = structure_at(h, &DiagonalAssignment::constant(nh, 2)?)?;
    match variant {
        Enlargement::TwoLeaves => {
            let rv = base.r[v].to_u64().unwrap_or(0);
            let scale = match rv {
                2 => 1u64,
                1 => 2,
                _ => return Err(contract(format!("R_H entry at v is {rv}, not 1 or 2"))),
            };
            let order: Vec<usize> = std::iter::once(v).chain((0..nh).filter(|&u| u != v)).collect();
            let hp = h.permuted(&order)?;
            let mut g = Multigraph::empty(nh + 2)?;
            for (i, j, m) in hp.edges() {
                g.add_edges(i + 2, j + 2, m)?;
            }
            g.add_edges(0, 2, 1)?;
            g.add_edges(1, 2, 1)?;
            let mut diag = vec![2u64; nh + 2];
            diag[2] = 3;
            let mut r = vec![BigInt::one(), BigInt::one()];
            r.extend(order.iter().map(|&u| &base.r[u] * scale));
            verify_structure(&g, &DiagonalAssignment::from_u64(&diag)?, &r)
        }
        Enlargement::LeafExtension => {
            let fam = crate::classify::recognize_family(h).primary;
            let Some(Family::ExtD(n)) = fam else {
                return Err(contract("leaf extension needs ~D_n"));
            };
            if *h != Family::ExtD(n).build()? || v > 1 {
                return Err(contract("leaf extension expects canonical ~D_n and v in {0, 1}"));
            }
            let other = 1 - v;
            let order: Vec<usize> = [v, other].into_iter().chain(2..=n).collect();
            let hp = h.permuted(&order)?;
            let g = {
                let mut g = Multigraph::empty(n + 2)?;
                for (i, j, m) in hp.edges() {
                    g.add_edges(i + 1, j + 1, m)?;
                }
                g.add_edges(0, 1, 1)?;
                g
            };
            let mut diag = vec![2u64; n + 2];
            diag[2] = 3;
            let mut r = vec![2u64, 4, 2];
            r.extend(std::iter::repeat_n(6, n - 3));
            r.extend([3, 3]);
            verify_structure(&g, &DiagonalAssignment::from_u64(&diag)?, &to_big(&r))
        }
    }
}

/// The 9-vertex graph obtained from ~D_6 by two leaves at the middle chain vertex.
pub fn g1_structure() -> Result<ArithmeticalStructure> {
    semidefinite_from_extended_dynkin(&Family::ExtD(6).build()?, 3, Enlargement::TwoLeaves)
}

/// Diagonal of the G_1 graph (order of [`g1_structure`]) with determinant 1.
pub fn g1_unit_diagonal() -> Vec<u64> {
    // w, w', v, then ~D_6 vertices 0,1,2,4,5,6.
    vec![5, 2, 2, 4, 15, 2, 2, 4, 3]
}

/// The 8-vertex graph obtained from ~D_5 by two leaves at a leaf.
pub fn g2_structure() -> Result<ArithmeticalStructure> {
    semidefinite_from_extended_dynkin(&Family::ExtD(5).build()?, 0, Enlargement::TwoLeaves)
}

/// The 7-vertex graph obtained from ~D_5 by extending a leaf.
pub fn g3_structure() -> Result<ArithmeticalStructure> {
    semidefinite_from_extended_dynkin(&Family::ExtD(5).build()?, 0, Enlargement::LeafExtension)
}

/// Diagonal with a_i replaced by a_i + ell, and the value ell |Phi| r_i^2 it takes.
pub fn multiples_family(s: &ArithmeticalStructure, i: usize, ell: u64) -> Result<(DiagonalAssignment, BigInt)> {
    if i >= s.graph.order() {
        return Err(Error::VertexOutOfRange(i));
    }
    if ell == 0 {
        return Err(contract("ell >= 1"));
    }
    let mut vals = s.diag.values().to_vec();
    vals[i] += ell;
    let diag = DiagonalAssignment::new(vals)?;
    let value = BigInt::from(ell) * s.phi_order() * &s.r[i] * &s.r[i];
    let direct = crate::poly::evaluate(&s.graph, &diag)?;
    if direct != value {
        return Err(contract("multiples family value mismatch"));
    }
    Ok((diag, value))
}

pub(crate) fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Whether the discriminant group of M_G(point) is cyclic, for a point with det != 0 or a structure.
pub fn point_is_cyclic(g: &Multigraph, point: &[u64]) -> bool {
    let m = matrix_at(g, &DiagonalAssignment::from_u64(point).expect("positive")).expect("length");
    m.smith_normal_form().is_cyclic()
}
