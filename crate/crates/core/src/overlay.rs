//! 2-factors: overlays of two perfect matchings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::algebra::Monomial;
use crate::diagrams::{all_matchings, box_count};
use crate::error::{Error, Result};
use crate::mesh::{HexMesh, Matching};

/// A spanning subgraph in which every vertex has degree two, counting
/// doubled edges twice.
///
/// Loops are stored as edge cycles traversed counterclockwise, each rotated
/// to start at its smallest edge index; the loop list is sorted. Two
/// overlays giving the same subgraph are therefore equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoFactor {
    doubled: Vec<usize>,
    loops: Vec<Vec<usize>>,
}

impl TwoFactor {
    /// Build from doubled edges and loop edge sets, checking degrees.
    pub fn new(mesh: &HexMesh, mut doubled: Vec<usize>, loop_edges: &[usize]) -> Result<TwoFactor> {
        doubled.sort_unstable();
        doubled.dedup();
        let mut deg = vec![0u8; mesh.vertex_count()];
        for &e in doubled.iter().chain(loop_edges) {
            if e >= mesh.edge_count() {
                return Err(Error::MeshMismatch);
            }
            let (u, d) = mesh.ends(e);
            let w = if doubled.binary_search(&e).is_ok() { 2 } else { 1 };
            deg[u] += w;
            deg[d] += w;
        }
        if let Some(v) = deg.iter().position(|&d| d != 2) {
            return Err(Error::NotAMatching(format!("vertex {v} has degree {} in the 2-factor", deg[v])));
        }
        let loops = trace_loops(mesh, loop_edges);
        Ok(TwoFactor { doubled, loops })
    }

    pub fn doubled(&self) -> &[usize] {
        &self.doubled
    }

    pub fn loops(&self) -> &[Vec<usize>] {
        &self.loops
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    /// Every edge index with its multiplicity (1 or 2).
    pub fn edges_with_multiplicity(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.doubled
            .iter()
            .map(|&e| (e, 2))
            .chain(self.loops.iter().flatten().map(|&e| (e, 1)))
    }

    /// The underlying edge set.
    pub fn support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.doubled.iter().chain(self.loops.iter().flatten()).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn to_json(&self, mesh: &HexMesh) -> Value {
        let face = |e: &usize| mesh.face(*e).to_string();
        json!({
            "dims": mesh.dims().as_array(),
            "doubled": self.doubled.iter().map(face).collect::<Vec<_>>(),
            "loops": self.loops.iter().map(|l| l.iter().map(face).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Vertex sequence of a loop: vertex `n` joins edge `n-1` to edge `n`.
pub fn loop_vertices(mesh: &HexMesh, lp: &[usize]) -> Vec<usize> {
    let n = lp.len();
    (0..n)
        .map(|i| {
            let (a, b) = mesh.ends(lp[(i + n - 1) % n]);
            let (c, d) = mesh.ends(lp[i]);
            if a == c || a == d {
                a
            } else {
                debug_assert!(b == c || b == d);
                b
            }
        })
        .collect()
}

/// Twice the signed area enclosed by a closed vertex walk, in lattice units.
fn signed_area(mesh: &HexMesh, verts: &[usize]) -> i64 {
    let pts: Vec<(i64, i64)> = verts.iter().map(|&v| mesh.vertices()[v].centroid3()).collect();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum()
}

/// Split a set of edges forming disjoint cycles into canonical loops.
fn trace_loops(mesh: &HexMesh, edges: &[usize]) -> Vec<Vec<usize>> {
    let on: BTreeSet<usize> = edges.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut loops = Vec::new();
    for &start in &on {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let (first, mut at) = mesh.ends(start);
        let mut prev = start;
        while at != first {
            let next = *mesh
                .incident(at)
                .iter()
                .find(|&&e| e != prev && on.contains(&e))
                .expect("loop edges form cycles");
            cycle.push(next);
            seen.insert(next);
            at = mesh.other_end(next, at);
            prev = next;
        }
        loops.push(orient(mesh, cycle));
    }
    loops.sort();
    loops
}

/// Orient a cycle counterclockwise and rotate it to its smallest edge.
fn orient(mesh: &HexMesh, mut cycle: Vec<usize>) -> Vec<usize> {
    if signed_area(mesh, &loop_vertices(mesh, &cycle)) < 0 {
        cycle.reverse();
    }
    let k = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(k);
    cycle
}

fn check_matching(mesh: &HexMesh, m: &Matching) -> Result<()> {
    if m.len() * 2 != mesh.vertex_count() || m.edges().iter().any(|&e| e >= mesh.edge_count()) {
        return Err(Error::MeshMismatch);
    }
    Ok(())
}

/// Superimpose two perfect matchings.
pub fn overlay(mesh: &HexMesh, m1: &Matching, m2: &Matching) -> Result<TwoFactor> {
    check_matching(mesh, m1)?;
    check_matching(mesh, m2)?;
    let mut doubled = Vec::new();
    let mut single = Vec::new();
    let (a, b) = (m1.edges(), m2.edges());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                doubled.push(*x);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                single.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                single.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                single.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    TwoFactor::new(mesh, doubled, &single)
}

/// All ordered pairs of matchings whose overlay is `lambda`: doubled edges go
/// to both sides and each loop is split into its two alternating halves.
pub fn split(lambda: &TwoFactor) -> Vec<(Matching, Matching)> {
    let k = lambda.loops.len();
    (0u64..1 << k)
        .map(|mask| {
            let mut m1 = lambda.doubled.clone();
            let mut m2 = lambda.doubled.clone();
            for (n, lp) in lambda.loops.iter().enumerate() {
                let flip = (mask >> n) & 1 == 1;
                for (pos, &e) in lp.iter().enumerate() {
                    if (pos % 2 == 0) != flip {
                        m1.push(e);
                    } else {
                        m2.push(e);
                    }
                }
            }
            m1.sort_unstable();
            m2.sort_unstable();
            (Matching::from_sorted_unchecked(m1), Matching::from_sorted_unchecked(m2))
        })
        .collect()
}

/// Connected components: doubled edges plus loops.
pub fn component_count(lambda: &TwoFactor) -> usize {
    lambda.doubled.len() + lambda.loops.len()
}

/// Default bound on the number of diagrams for exhaustive pair sweeps.
pub const DEFAULT_DIAGRAM_LIMIT: u128 = 10_000;

fn check_limit(mesh: &HexMesh, limit: u128) -> Result<()> {
    let count = box_count(mesh.dims());
    if count > BigInt::from(limit) {
        return Err(Error::TooLarge {
            what: format!("diagrams in box {}", mesh.dims()),
            count: u128::try_from(count).unwrap_or(u128::MAX),
            limit,
        });
    }
    Ok(())
}

/// Distinct 2-factors, as the deduplicated overlays of all ordered pairs of
/// matchings.
pub fn enumerate_two_factors(mesh: &HexMesh, limit: u128) -> Result<Vec<TwoFactor>> {
    check_limit(mesh, limit)?;
    let ms = all_matchings(mesh);
    let mut out = BTreeSet::new();
    for m1 in &ms {
        for m2 in &ms {
            out.insert(overlay(mesh, m1, m2)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// A monomial weight (with leading variable `t`) on every edge of a mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWeighting {
    weights: Vec<Option<Monomial>>,
}

impl EdgeWeighting {
    pub fn new(weights: Vec<Option<Monomial>>) -> EdgeWeighting {
        EdgeWeighting { weights }
    }

    pub fn total(weights: Vec<Monomial>) -> EdgeWeighting {
        EdgeWeighting { weights: weights.into_iter().map(Some).collect() }
    }

    pub fn constant(mesh: &HexMesh, m: Monomial) -> EdgeWeighting {
        EdgeWeighting::total(vec![m; mesh.edge_count()])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, e: usize) -> Option<&Monomial> {
        self.weights.get(e).and_then(Option::as_ref)
    }

    pub fn weight(&self, mesh: &HexMesh, e: usize) -> Result<&Monomial> {
        self.get(e).ok_or_else(|| Error::MissingEdgeWeight(mesh.face(e).to_string()))
    }

    pub fn set(&mut self, e: usize, m: Monomial) {
        if self.weights.len() <= e {
            self.weights.resize(e + 1, None);
        }
        self.weights[e] = Some(m);
    }

    /// Product of the weights of a set of edges.
    pub fn product(&self, mesh: &HexMesh, edges: &[usize]) -> Result<Monomial> {
        let mut acc = Monomial::one();
        for &e in edges {
            acc = &acc * self.weight(mesh, e)?;
        }
        Ok(acc)
    }

    pub fn matching_weight(&self, mesh: &HexMesh, m: &Matching) -> Result<Monomial> {
        self.product(mesh, m.edges())
    }

    pub fn to_json(&self, mesh: &HexMesh) -> Value {
        Value::Array(
            self.weights
                .iter()
                .enumerate()
                .map(|(e, w)| {
                    let w = w.as_ref().map(|m| {
                        json!({ "coeff": crate::algebra::bigint_to_json(&m.coeff), "exp": m.exp })
                    });
                    json!({ "face": mesh.face(e).to_string(), "weight": w })
                })
                .collect(),
        )
    }
}

/// Product of edge weights with multiplicity; doubled edges count twice.
pub fn two_factor_weight(mesh: &HexMesh, lambda: &TwoFactor, w: &EdgeWeighting) -> Result<Monomial> {
    let mut acc = Monomial::one();
    for (e, mult) in lambda.edges_with_multiplicity() {
        acc = &acc * &w.weight(mesh, e)?.pow(mult);
    }
    Ok(acc)
}
