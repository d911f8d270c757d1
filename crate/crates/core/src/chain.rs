//! Finitely supported chains on vertices, oriented edges and oriented
//! triangles.
//!
//! Simplices are stored with sorted vertices; a coefficient given on a
//! permuted tuple is stored with the sign of the permutation. Degenerate
//! tuples (a repeated vertex) carry no coefficient.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::scalar::{Coefficient, Z2};

/// Sorted vertex tuple of a simplex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Canonical form of `verts` and the orientation sign, or `None` for a
    /// degenerate tuple.
    pub fn canonical(verts: &[usize]) -> Option<(Simplex, bool)> {
        let mut v = verts.to_vec();
        let mut odd = false;
        // insertion sort keeps track of the permutation parity
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if v.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        Some((Simplex(v), odd))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<R> {
    degree: usize,
    terms: BTreeMap<Simplex, R>,
}

impl<R: Coefficient> Chain<R> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn vertex(v: usize) -> Self {
        let mut c = Self::zero(0);
        c.add_term(&[v], R::one());
        c
    }

    /// Unit chain on the edge oriented `u -> v`.
    pub fn edge(u: usize, v: usize) -> Self {
        let mut c = Self::zero(1);
        c.add_term(&[u, v], R::one());
        c
    }

    pub fn triangle(a: usize, b: usize, c: usize) -> Self {
        let mut out = Self::zero(2);
        out.add_term(&[a, b, c], R::one());
        out
    }

    /// Unit flow along a walk `path[0] -> path[1] -> ...`.
    pub fn path(path: &[usize]) -> Self {
        let mut c = Self::zero(1);
        for p in path.windows(2) {
            c.add_term(p, R::one());
        }
        c
    }

    /// Unit flow around a closed walk (the last vertex connects to the first).
    pub fn closed_walk(walk: &[usize]) -> Self {
        let mut c = Self::path(walk);
        if let (Some(&first), Some(&last)) = (walk.first(), walk.last()) {
            c.add_term(&[last, first], R::one());
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Add `coeff` times the oriented simplex `verts`.
    pub fn add_term(&mut self, verts: &[usize], coeff: R) {
        assert_eq!(verts.len(), self.degree + 1, "simplex has the wrong degree");
        let Some((s, odd)) = Simplex::canonical(verts) else {
            return;
        };
        let c = if odd { -coeff } else { coeff };
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_checked(c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of the oriented simplex `verts`.
    pub fn coeff(&self, verts: &[usize]) -> R {
        match Simplex::canonical(verts) {
            None => R::zero(),
            Some((s, odd)) => {
                let c = self.terms.get(&s).copied().unwrap_or_else(R::zero);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &R)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn sup_norm(&self) -> u64 {
        self.terms.values().map(Coefficient::magnitude).max().unwrap_or(0)
    }

    pub fn scale(&self, a: R) -> Self {
        let mut out = Self::zero(self.degree);
        if a.is_zero() {
            return out;
        }
        for (s, &c) in &self.terms {
            out.add_term(s.vertices(), c.mul_checked(a));
        }
        out
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, other: &Self, a: R) {
        assert_eq!(self.degree, other.degree, "chain degree mismatch");
        for (s, &c) in &other.terms {
            self.add_term(s.vertices(), c.mul_checked(a));
        }
    }

    /// Simplicial boundary.
    pub fn boundary(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeZeroBoundary);
        }
        let mut out = Self::zero(self.degree - 1);
        let mut face = Vec::with_capacity(self.degree);
        for (s, &c) in &self.terms {
            let v = s.vertices();
            for i in 0..v.len() {
                face.clear();
                face.extend(v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
                let sign = if i % 2 == 0 { c } else { -c };
                out.add_term(&face, sign);
            }
        }
        Ok(out)
    }

    /// Restrict to simplices whose vertices all satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, &c) in &self.terms {
            if s.vertices().iter().all(|&v| keep(v)) {
                out.add_term(s.vertices(), c);
            }
        }
        out
    }

    /// Boundary of a 1-chain restricted to the non-boundary vertices.
    pub fn inner_defect(&self, w: &GraphWindow) -> Result<Self> {
        self.expect_degree(1)?;
        Ok(self.boundary()?.restrict(|v| !w.is_boundary(v)))
    }

    /// Boundary of a 1-chain on the boundary vertices only; truncation of
    /// an infinite cycle leaks here.
    pub fn rim_defect(&self, w: &GraphWindow) -> Result<Self> {
        self.expect_degree(1)?;
        Ok(self.boundary()?.restrict(|v| w.is_boundary(v)))
    }

    /// Closed at every inner vertex of the window.
    pub fn is_cycle(&self, w: &GraphWindow) -> bool {
        self.degree == 1 && self.inner_defect(w).is_ok_and(|d| d.is_zero())
    }

    /// Edges of a 1-chain as `((u, v), coeff)` with `u < v`.
    pub fn edge_terms(&self) -> impl Iterator<Item = ((usize, usize), R)> + '_ {
        self.terms.iter().map(|(s, &c)| {
            let v = s.vertices();
            ((v[0], v[1]), c)
        })
    }

    pub fn expect_degree(&self, expected: usize) -> Result<()> {
        if self.degree == expected {
            Ok(())
        } else {
            Err(Error::DegreeMismatch { expected, found: self.degree })
        }
    }

    /// Image under reduction modulo two.
    pub fn to_z2(&self) -> Chain<Z2> {
        let mut out = Chain::zero(self.degree);
        for (s, &c) in &self.terms {
            out.add_term(s.vertices(), Z2::from_i64((c.magnitude() % 2) as i64));
        }
        out
    }

    /// Sorted `(simplex, coefficient)` pairs.
    pub fn to_pairs(&self) -> Vec<(Vec<usize>, i64)> {
        self.terms.iter().map(|(s, c)| (s.vertices().to_vec(), c.to_i64())).collect()
    }
}

impl<R: Coefficient> Add for &Chain<R> {
    type Output = Chain<R>;
    fn add(self, rhs: &Chain<R>) -> Chain<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, R::one());
        out
    }
}

impl<R: Coefficient> Sub for &Chain<R> {
    type Output = Chain<R>;
    fn sub(self, rhs: &Chain<R>) -> Chain<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, -R::one());
        out
    }
}

impl<R: Coefficient> Neg for &Chain<R> {
    type Output = Chain<R>;
    fn neg(self) -> Chain<R> {
        self.scale(-R::one())
    }
}

impl<R: Coefficient> Serialize for Chain<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for pair in self.to_pairs() {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}

impl Chain<Z2> {
    /// Edge indices of the support of a GF(2) 1-chain.
    pub fn support_edges(&self, w: &GraphWindow) -> Vec<usize> {
        self.edge_terms().filter_map(|((u, v), _)| w.edge_id(u, v)).collect()
    }
}
