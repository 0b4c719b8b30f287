//! Named graph families, their canonical vertex orderings, and the graph DSL.
//!
//! Orderings:
//! - `A_n`: path order.
//! - `D_n`: the long arm from its free end to the branch vertex, then the two short leaves.
//! - `E_n`: the arm of length n-4 from its free end, the branch vertex, the arm of length 2, the single leaf.
//! - `~D_n`: two leaves, the chain of n-3 vertices, two leaves; leaf 0 hangs off chain vertex 2.
//!   Removing vertex 0 gives `D_n` in its canonical order.
//! - `~E_n`: star-shaped trees with arms (2,2,2), (3,3,1), (5,2,1), first arm listed from its free end,
//!   so vertex 0 is the vertex whose removal leaves `E_n`.
//! - `C_n`: cycle order. `C_n^+`: cycle order, then the tail, which hangs off vertex 1.
//! - `K(p,q)`: the p side first. `S_n`, `W_n`, cones: hub first. `S_n^+`: the extra vertex hangs off vertex 1.
//! - `K_n^+`: the pendant hangs off vertex 0.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Multigraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    A(usize),
    D(usize),
    E(usize),
    ExtD(usize),
    ExtE(usize),
    C(usize),
    CPlus(usize),
    K(usize),
    KPlus(usize),
    Kpq(usize, usize),
    S(usize),
    SPlus(usize),
    W(usize),
    Cone(Box<Family>),
    Banana(u32),
    /// Path with the given edge multiplicities, e.g. `A3(2,1)`.
    WeightedPath(Vec<u32>),
    /// Triangle with multiplicities (e1, e2, e3): e1 joins vertices 1,2; e2 joins 0,2; e3 joins 0,1.
    WeightedTriangle([u32; 3]),
}

fn invalid(f: &Family, reason: &str) -> Error {
    Error::InvalidFamily { family: f.to_string(), reason: reason.into() }
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Family::A(n) => *n >= 1,
            Family::D(n) => *n >= 4,
            Family::E(n) => (6..=8).contains(n),
            Family::ExtD(n) => *n >= 4,
            Family::ExtE(n) => (6..=8).contains(n),
            Family::C(n) => *n >= 2,
            Family::CPlus(n) => *n >= 2,
            Family::K(n) => *n >= 1,
            Family::KPlus(n) => *n >= 1,
            Family::Kpq(p, q) => *p >= 1 && *q >= 1,
            Family::S(n) | Family::SPlus(n) => *n >= 4,
            Family::W(n) => *n >= 3,
            Family::Cone(inner) => return inner.validate(),
            Family::Banana(e) => *e >= 1,
            Family::WeightedPath(es) => !es.is_empty() && es.iter().all(|&e| e >= 1),
            Family::WeightedTriangle(es) => es.iter().all(|&e| e >= 1),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(self, "parameter out of range"))
        }
    }

    /// Vertex count of the built graph.
    pub fn order(&self) -> usize {
        match self {
            Family::A(n) | Family::D(n) | Family::E(n) | Family::C(n) | Family::K(n) | Family::S(n) => *n,
            Family::ExtD(n) | Family::ExtE(n) | Family::CPlus(n) | Family::KPlus(n) => n + 1,
            Family::SPlus(n) | Family::W(n) => n + 1,
            Family::Kpq(p, q) => p + q,
            Family::Cone(inner) => inner.order() + 1,
            Family::Banana(_) => 2,
            Family::WeightedPath(es) => es.len() + 1,
            Family::WeightedTriangle(_) => 3,
        }
    }

    pub fn build(&self) -> Result<Multigraph> {
        self.validate()?;
        match self {
            Family::A(n) => path(*n),
            Family::D(n) => spider(n - 3, 1, 1),
            Family::E(n) => spider(n - 4, 2, 1),
            Family::ExtD(n) => {
                let n = *n;
                let chain = n - 3;
                let mut g = Multigraph::empty(n + 1)?;
                g.add_edges(0, 2, 1)?;
                g.add_edges(1, 2, 1)?;
                for c in 2..chain + 1 {
                    g.add_edges(c, c + 1, 1)?;
                }
                g.add_edges(chain + 1, n - 1, 1)?;
                g.add_edges(chain + 1, n, 1)?;
                Ok(g)
            }
            Family::ExtE(6) => spider(2, 2, 2),
            Family::ExtE(7) => spider(3, 3, 1),
            Family::ExtE(_) => spider(5, 2, 1),
            Family::C(n) => {
                let n = *n;
                let mut g = Multigraph::empty(n)?;
                for i in 0..n {
                    g.add_edges(i, (i + 1) % n, 1)?;
                }
                Ok(g)
            }
            Family::CPlus(n) => Family::C(*n).build()?.attach_pendant(1, 1),
            Family::K(n) => complete(*n),
            Family::KPlus(n) => complete(*n)?.attach_pendant(0, 1),
            Family::Kpq(p, q) => {
                let mut g = Multigraph::empty(p + q)?;
                for i in 0..*p {
                    for j in *p..p + q {
                        g.add_edges(i, j, 1)?;
                    }
                }
                Ok(g)
            }
            Family::S(n) => {
                let mut g = Multigraph::empty(*n)?;
                for j in 1..*n {
                    g.add_edges(0, j, 1)?;
                }
                Ok(g)
            }
            Family::SPlus(n) => Family::S(*n).build()?.attach_pendant(1, 1),
            Family::W(n) => Ok(Family::C(*n).build()?.cone()),
            Family::Cone(inner) => Ok(inner.build()?.cone()),
            Family::Banana(e) => Multigraph::from_edges(2, &[(0, 1, *e)]),
            Family::WeightedPath(es) => {
                let mut g = Multigraph::empty(es.len() + 1)?;
                for (i, &e) in es.iter().enumerate() {
                    g.add_edges(i, i + 1, e)?;
                }
                Ok(g)
            }
            Family::WeightedTriangle([e1, e2, e3]) => Multigraph::from_edges(3, &[(1, 2, *e1), (0, 2, *e2), (0, 1, *e3)]),
        }
    }

    /// Whether M_G(2,...,2) is positive definite for this family.
    pub fn is_dynkin(&self) -> bool {
        matches!(self, Family::A(_) | Family::D(_) | Family::E(_))
    }

    /// Whether M_G(2,...,2) is singular positive semidefinite for this family.
    pub fn is_extended_dynkin(&self) -> bool {
        matches!(self, Family::ExtD(_) | Family::ExtE(_) | Family::C(_))
    }

    pub fn parse(s: &str) -> Result<Family> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        p.skip_ws();
        let f = p.family()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        f.validate()?;
        Ok(f)
    }
}

fn path(n: usize) -> Result<Multigraph> {
    let mut g = Multigraph::empty(n)?;
    for i in 0..n.saturating_sub(1) {
        g.add_edges(i, i + 1, 1)?;
    }
    Ok(g)
}

fn complete(n: usize) -> Result<Multigraph> {
    let mut g = Multigraph::empty(n)?;
    for i in 0..n {
        for j in i + 1..n {
            g.add_edges(i, j, 1)?;
        }
    }
    Ok(g)
}

/// Star-shaped tree with three arms of lengths p, q, r: arm p from its free end, the centre, arm q, arm r.
fn spider(p: usize, q: usize, r: usize) -> Result<Multigraph> {
    let mut g = Multigraph::empty(p + q + r + 1)?;
    for i in 0..p {
        g.add_edges(i, i + 1, 1)?;
    }
    let centre = p;
    let mut prev = centre;
    for i in centre + 1..centre + 1 + q {
        g.add_edges(prev, i, 1)?;
        prev = i;
    }
    prev = centre;
    for i in centre + 1 + q..centre + 1 + q + r {
        g.add_edges(prev, i, 1)?;
        prev = i;
    }
    Ok(g)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |es: &[u32]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Family::A(n) => write!(f, "A{n}"),
            Family::D(n) => write!(f, "D{n}"),
            Family::E(n) => write!(f, "E{n}"),
            Family::ExtD(n) => write!(f, "~D{n}"),
            Family::ExtE(n) => write!(f, "~E{n}"),
            Family::C(n) => write!(f, "C{n}"),
            Family::CPlus(n) => write!(f, "C{n}+"),
            Family::K(n) => write!(f, "K{n}"),
            Family::KPlus(n) => write!(f, "K{n}+"),
            Family::Kpq(p, q) => write!(f, "K({p},{q})"),
            Family::S(n) => write!(f, "S{n}"),
            Family::SPlus(n) => write!(f, "S{n}+"),
            Family::W(n) => write!(f, "W{n}"),
            Family::Cone(inner) => write!(f, "cone({inner})"),
            Family::Banana(e) => write!(f, "banana({e})"),
            Family::WeightedPath(es) => write!(f, "A{}({})", es.len() + 1, list(es)),
            Family::WeightedTriangle(es) => write!(f, "C3({})", list(es)),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn number_list(&mut self) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut out = vec![self.number()?];
        while self.eat(b',') {
            out.push(self.number()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn family(&mut self) -> Result<Family> {
        self.skip_ws();
        let start = self.pos;
        let tilde = self.eat(b'~');
        self.skip_ws();
        let word_start = self.pos;
        let word = self.word();
        let fam = match (tilde, word.as_str()) {
            (false, "cone") => {
                self.expect(b'(')?;
                let inner = self.family()?;
                self.expect(b')')?;
                return Ok(Family::Cone(Box::new(inner)));
            }
            (false, "banana") => {
                let ps = self.number_list()?;
                if ps.len() != 1 {
                    return Err(self.err("banana takes one parameter"));
                }
                Family::Banana(to_u32(ps[0], self)?)
            }
            (false, "K") if self.peek() == Some(b'(') => {
                let ps = self.number_list()?;
                if ps.len() != 2 {
                    return Err(self.err("K(p,q) takes two parameters"));
                }
                Family::Kpq(ps[0], ps[1])
            }
            (true, "D") => Family::ExtD(self.number()?),
            (true, "E") => Family::ExtE(self.number()?),
            (false, "A" | "D" | "E" | "C" | "K" | "S" | "W") => {
                let n = self.number()?;
                let plus = self.peek() == Some(b'+');
                if plus {
                    self.pos += 1;
                }
                let weighted = !plus && self.peek() == Some(b'(');
                match (word.as_str(), plus, weighted) {
                    ("A", false, true) => {
                        let ps = self.number_list()?;
                        if ps.len() + 1 != n {
                            return Err(self.err(&format!("A{n}(...) takes {} multiplicities", n.saturating_sub(1))));
                        }
                        Family::WeightedPath(ps.into_iter().map(|e| to_u32(e, self)).collect::<Result<_>>()?)
                    }
                    ("C", false, true) => {
                        let ps = self.number_list()?;
                        if n != 3 || ps.len() != 3 {
                            return Err(self.err("only C3(e1,e2,e3) takes multiplicities"));
                        }
                        Family::WeightedTriangle([to_u32(ps[0], self)?, to_u32(ps[1], self)?, to_u32(ps[2], self)?])
                    }
                    ("A", false, false) => Family::A(n),
                    ("D", false, false) => Family::D(n),
                    ("E", false, false) => Family::E(n),
                    ("C", false, false) => Family::C(n),
                    ("K", false, false) => Family::K(n),
                    ("S", false, false) => Family::S(n),
                    ("W", false, false) => Family::W(n),
                    ("C", true, _) => Family::CPlus(n),
                    ("K", true, _) => Family::KPlus(n),
                    ("S", true, _) => Family::SPlus(n),
                    _ => return Err(Error::Parse { pos: start, msg: format!("unknown family {word}") }),
                }
            }
            _ => {
                return Err(Error::Parse { pos: word_start, msg: format!("unknown family '{}{}'", if tilde { "~" } else { "" }, word) })
            }
        };
        Ok(fam)
    }
}

fn to_u32(x: usize, p: &Parser) -> Result<u32> {
    u32::try_from(x).map_err(|_| p.err("multiplicity too large"))
}
