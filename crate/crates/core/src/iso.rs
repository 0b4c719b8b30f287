//! Backtracking isomorphism and induced-subgraph search for small multigraphs.

use std::collections::{BTreeMap, HashSet};

use crate::graph::Multigraph;

/// Colour refinement; colours are canonical (independent of the labelling).
pub fn refined_colors(g: &Multigraph) -> Vec<usize> {
    let n = g.order();
    let mut colors: Vec<usize> = vec![0; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<(u32, usize)>)> = (0..n)
            .map(|i| {
                let mut nb: Vec<(u32, usize)> = g.neighbors(i).map(|j| (g.multiplicity(i, j), colors[j])).collect();
                nb.sort_unstable();
                (colors[i], nb)
            })
            .collect();
        let ids: BTreeMap<&(usize, Vec<(u32, usize)>), usize> =
            sigs.iter().collect::<std::collections::BTreeSet<_>>().into_iter().enumerate().map(|(k, s)| (s, k)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// Embedding of `pattern` as an induced subgraph of `g`: `map[p] = g-vertex`.
/// Multiplicities must agree exactly on every pair of mapped vertices.
pub fn find_induced(g: &Multigraph, pattern: &Multigraph) -> Option<Vec<usize>> {
    let mut all = None;
    search_induced(g, pattern, None, &mut |m| {
        all = Some(m.to_vec());
        true
    });
    all
}

/// Every induced embedding of `pattern` (as vertex maps, including automorphic copies).
pub fn all_induced(g: &Multigraph, pattern: &Multigraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search_induced(g, pattern, None, &mut |m| {
        out.push(m.to_vec());
        false
    });
    out
}

pub fn find_isomorphism(g: &Multigraph, h: &Multigraph) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return None;
    }
    let (cg, ch) = (refined_colors(g), refined_colors(h));
    let mut sg = cg.clone();
    let mut sh = ch.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }
    let mut found = None;
    // h plays the pattern; colours must match.
    search_induced(g, h, Some((&ch, &cg)), &mut |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

pub fn is_isomorphic(g: &Multigraph, h: &Multigraph) -> bool {
    find_isomorphism(g, h).is_some()
}

fn search_induced(
    g: &Multigraph,
    pattern: &Multigraph,
    colors: Option<(&[usize], &[usize])>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let k = pattern.order();
    if k > g.order() {
        return;
    }
    let order = search_order(pattern);
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; g.order()];
    let ctx = Ctx { g, p: pattern, order: &order, colors };
    ctx.extend(0, &mut map, &mut used, visit);
}

struct Ctx<'a> {
    g: &'a Multigraph,
    p: &'a Multigraph,
    order: &'a [usize],
    colors: Option<(&'a [usize], &'a [usize])>,
}

impl Ctx<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(map);
        }
        let pv = self.order[depth];
        let anchor = self.order[..depth].iter().copied().find(|&q| self.p.adjacent(pv, q));
        let candidates: Vec<usize> = match anchor {
            Some(q) => self.g.neighbors(map[q]).collect(),
            None => (0..self.g.order()).collect(),
        };
        for c in candidates {
            if used[c] || self.g.valency(c) < self.p.valency(pv) {
                continue;
            }
            if let Some((pc, gc)) = self.colors {
                if pc[pv] != gc[c] {
                    continue;
                }
            }
            let consistent = self.order[..depth].iter().all(|&q| self.p.multiplicity(pv, q) == self.g.multiplicity(c, map[q]));
            if !consistent {
                continue;
            }
            map[pv] = c;
            used[c] = true;
            let stop = self.extend(depth + 1, map, used, visit);
            used[c] = false;
            map[pv] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Pattern vertices in BFS order from a vertex of maximal valency, component by component.
fn search_order(p: &Multigraph) -> Vec<usize> {
    let n = p.order();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n).filter(|&v| !seen[v]).max_by_key(|&v| (p.valency(v), std::cmp::Reverse(v))).unwrap();
        for v in p.component_of(start) {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    order
}

/// Canonical code: the upper triangle of the multiplicity matrix, read column by column,
/// minimised over labellings that respect refined colours. Prefixed by the vertex count.
pub fn canonical_form(g: &Multigraph) -> Vec<u32> {
    let n = g.order();
    let colors = refined_colors(g);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colors[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut best: Option<Vec<u32>> = None;
    let mut perm = Vec::with_capacity(n);
    canon_rec(g, &cells, 0, &mut vec![false; n], &mut perm, &mut best);
    let mut out = vec![n as u32];
    out.extend(best.unwrap());
    out
}

fn canon_rec(g: &Multigraph, cells: &[Vec<usize>], ci: usize, used: &mut [bool], perm: &mut Vec<usize>, best: &mut Option<Vec<u32>>) {
    let n = g.order();
    let k = perm.len();
    // Upper triangle read column by column: the first k(k-1)/2 entries depend only on perm[..k].
    if let Some(b) = best.as_ref() {
        let mut idx = 0;
        let mut cmp = std::cmp::Ordering::Equal;
        'outer: for j in 0..k {
            for i in 0..j {
                let x = g.multiplicity(perm[i], perm[j]);
                if x != b[idx] {
                    cmp = x.cmp(&b[idx]);
                    break 'outer;
                }
                idx += 1;
            }
        }
        if cmp == std::cmp::Ordering::Greater {
            return;
        }
    }
    if k == n {
        let m: Vec<u32> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| g.multiplicity(perm[i], perm[j])).collect();
        if best.as_ref().is_none_or(|b| m < *b) {
            *best = Some(m);
        }
        return;
    }
    let cell = &cells[ci];
    let placed_in_cell = cell.iter().filter(|&&v| used[v]).count();
    for &v in cell {
        if used[v] {
            continue;
        }
        used[v] = true;
        perm.push(v);
        let next = if placed_in_cell + 1 == cell.len() { ci + 1 } else { ci };
        canon_rec(g, cells, next, used, perm, best);
        perm.pop();
        used[v] = false;
    }
}

/// All pairwise non-isomorphic multigraphs on `n` vertices with multiplicities at most `max_mult`.
pub fn all_graphs(n: usize, max_mult: u32) -> Vec<Multigraph> {
    let mut layer = vec![Multigraph::empty(1).unwrap()];
    for k in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            let combos = (max_mult as u64 + 1).pow(k as u32 - 1);
            for code in 0..combos {
                let mut h = grow(g);
                let mut c = code;
                for v in 0..k - 1 {
                    let m = (c % (max_mult as u64 + 1)) as u32;
                    c /= max_mult as u64 + 1;
                    if m > 0 {
                        h.add_edges(v, k - 1, m).unwrap();
                    }
                }
                if seen.insert(canonical_form(&h)) {
                    next.push(h);
                }
            }
        }
        layer = next;
    }
    layer
}

/// All connected simple graphs on `n` vertices, up to isomorphism.
pub fn connected_simple_graphs(n: usize) -> Vec<Multigraph> {
    all_graphs(n, 1).into_iter().filter(|g| g.is_connected()).collect()
}

fn grow(g: &Multigraph) -> Multigraph {
    let n = g.order();
    let mut h = Multigraph::empty(n + 1).unwrap();
    for (i, j, m) in g.edges() {
        h.add_edges(i, j, m).unwrap();
    }
    h
}
