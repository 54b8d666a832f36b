//! The hexagonal mesh `H(a,b,c)` and its squishing structure.
//!
//! Vertices are unit triangles of the triangular lattice, written in planar
//! coordinates `(u, v)` where the box point `(x, y, z)` projects to
//! `(x - z, y - z)`. Lattice edges run in the directions `(1,0)`, `(0,1)`
//! and `(1,1)`; the basis vectors are 120 degrees apart, so these planar
//! coordinates preserve orientation.
//!
//! An edge of the mesh is a rhombus, the union of an up and a down triangle
//! sharing a lattice edge (the rhombus' short diagonal). A rhombus is named by
//! a [`FaceId`]: the orientation class together with the box coordinates of
//! its lowest corner. Faces that differ by a multiple of `(1,1,1)` project to
//! the same rhombus, so `FaceId`s are kept canonical (`min(i,j,k) = 0`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxDims {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl BoxDims {
    pub fn new(a: u32, b: u32, c: u32) -> Result<BoxDims> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvalidDims(format!("{a},{b},{c}: sides must be positive")));
        }
        Ok(BoxDims { a, b, c })
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_even(&self) -> bool {
        self.a.is_multiple_of(2) && self.b.is_multiple_of(2) && self.c.is_multiple_of(2)
    }

    pub fn doubled(&self) -> BoxDims {
        BoxDims { a: 2 * self.a, b: 2 * self.b, c: 2 * self.c }
    }

    pub fn halved(&self) -> Result<BoxDims> {
        if !self.is_even() {
            return Err(Error::OddDims(self.to_string()));
        }
        Ok(BoxDims { a: self.a / 2, b: self.b / 2, c: self.c / 2 })
    }

    /// `ab + bc + ca`.
    pub fn pair_sum(&self) -> u64 {
        let (a, b, c) = (self.a as u64, self.b as u64, self.c as u64);
        a * b + b * c + c * a
    }

    pub fn min_side(&self) -> u32 {
        self.a.min(self.b).min(self.c)
    }

    pub fn expected_vertex_count(&self) -> usize {
        2 * self.pair_sum() as usize
    }

    pub fn expected_edge_count(&self) -> usize {
        3 * self.pair_sum() as usize - (self.a + self.b + self.c) as usize
    }

    /// All dims with every side in `1..=max` for the respective side.
    pub fn all_up_to(max: BoxDims) -> Vec<BoxDims> {
        let mut out = Vec::new();
        for a in 1..=max.a {
            for b in 1..=max.b {
                for c in 1..=max.c {
                    out.push(BoxDims { a, b, c });
                }
            }
        }
        out
    }
}

impl fmt::Display for BoxDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for BoxDims {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoxDims> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidDims(format!("{s:?}: {e}")))?;
        match parts.as_slice() {
            [a, b, c] => BoxDims::new(*a, *b, *c),
            _ => Err(Error::InvalidDims(format!("{s:?}: expected a,b,c"))),
        }
    }
}

/// Rhombus orientation. `A` faces are horizontal (normal to the z axis),
/// `B` faces are normal to y, `C` faces normal to x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceClass {
    A,
    B,
    C,
}

impl FaceClass {
    pub const ALL: [FaceClass; 3] = [FaceClass::A, FaceClass::B, FaceClass::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn next(self) -> FaceClass {
        FaceClass::ALL[(self.index() + 1) % 3]
    }

    pub fn prev(self) -> FaceClass {
        FaceClass::ALL[(self.index() + 2) % 3]
    }
}

/// One unit triangle, i.e. one vertex of the mesh.
///
/// `up` triangles are `{(u,v), (u+1,v), (u+1,v+1)}`, down triangles are
/// `{(u,v), (u,v+1), (u+1,v+1)}`. Up and down are the two colour classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleId {
    pub u: i32,
    pub v: i32,
    pub up: bool,
}

impl TriangleId {
    pub fn corners(&self) -> [Point; 3] {
        let (u, v) = (self.u, self.v);
        if self.up {
            [(u, v), (u + 1, v), (u + 1, v + 1)]
        } else {
            [(u, v), (u, v + 1), (u + 1, v + 1)]
        }
    }

    /// Three times the centroid, in lattice coordinates.
    pub fn centroid3(&self) -> (i64, i64) {
        let (u, v) = (self.u as i64, self.v as i64);
        if self.up {
            (3 * u + 2, 3 * v + 1)
        } else {
            (3 * u + 1, 3 * v + 2)
        }
    }

    /// Inverse of [`centroid3`](Self::centroid3).
    pub fn from_centroid3(x: i64, y: i64) -> Option<TriangleId> {
        if (x - 2).rem_euclid(3) == 0 && (y - 1).rem_euclid(3) == 0 {
            Some(TriangleId { u: ((x - 2) / 3) as i32, v: ((y - 1) / 3) as i32, up: true })
        } else if (x - 1).rem_euclid(3) == 0 && (y - 2).rem_euclid(3) == 0 {
            Some(TriangleId { u: ((x - 1) / 3) as i32, v: ((y - 2) / 3) as i32, up: false })
        } else {
            None
        }
    }
}

/// One rhombus (one mesh edge), in canonical form `min(i,j,k) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId {
    pub class: FaceClass,
    pub pos: [i32; 3],
}

impl FaceId {
    pub fn new(class: FaceClass, i: i32, j: i32, k: i32) -> FaceId {
        let m = i.min(j).min(k);
        FaceId { class, pos: [i - m, j - m, k - m] }
    }

    /// The face whose lowest corner projects to planar `(u, v)`.
    pub fn from_planar(class: FaceClass, u: i32, v: i32) -> FaceId {
        FaceId::new(class, u, v, 0)
    }

    /// Planar position of the lowest corner, `(i - k, j - k)`.
    pub fn planar(&self) -> Point {
        (self.pos[0] - self.pos[2], self.pos[1] - self.pos[2])
    }

    /// `(up, down)` triangles of the rhombus.
    pub fn triangles(&self) -> (TriangleId, TriangleId) {
        let (u, v) = self.planar();
        match self.class {
            FaceClass::A => (TriangleId { u, v, up: true }, TriangleId { u, v, up: false }),
            FaceClass::B => (
                TriangleId { u: u - 1, v: v - 1, up: true },
                TriangleId { u, v: v - 1, up: false },
            ),
            FaceClass::C => (
                TriangleId { u: u - 1, v, up: true },
                TriangleId { u: u - 1, v: v - 1, up: false },
            ),
        }
    }

    /// The four corners in cyclic order.
    pub fn corners(&self) -> [Point; 4] {
        let (u, v) = self.planar();
        match self.class {
            FaceClass::A => [(u, v), (u + 1, v), (u + 1, v + 1), (u, v + 1)],
            FaceClass::B => [(u, v), (u + 1, v), (u, v - 1), (u - 1, v - 1)],
            FaceClass::C => [(u, v), (u, v + 1), (u - 1, v), (u - 1, v - 1)],
        }
    }

    /// Sides as `(from, to, dz)`: walking `from -> to` on the surface changes
    /// the box z coordinate by `dz`.
    pub fn sides(&self) -> [(Point, Point, i32); 4] {
        let [c0, c1, c2, c3] = self.corners();
        match self.class {
            FaceClass::A => [(c0, c1, 0), (c1, c2, 0), (c3, c2, 0), (c0, c3, 0)],
            FaceClass::B => [(c0, c1, 0), (c3, c2, 0), (c0, c3, 1), (c1, c2, 1)],
            FaceClass::C => [(c0, c1, 0), (c3, c2, 0), (c0, c3, 1), (c1, c2, 1)],
        }
    }

    /// Whether the (canonical) face lies inside the `a x b x c` box.
    pub fn in_box(&self, dims: BoxDims) -> bool {
        let [i, j, k] = self.pos;
        let (a, b, c) = (dims.a as i32, dims.b as i32, dims.c as i32);
        match self.class {
            FaceClass::A => i < a && j < b && k <= c,
            FaceClass::B => i < a && j <= b && k < c,
            FaceClass::C => i <= a && j < b && k < c,
        }
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({},{},{})", self.class, self.pos[0], self.pos[1], self.pos[2])
    }
}

/// Planar lattice directions around a point, counterclockwise.
/// Lattice point in planar coordinates `(u, v)`.
pub type Point = (i32, i32);

pub const HEX_DIRECTIONS: [Point; 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];

/// The rhombus whose short diagonal runs from `p` in direction `d`.
pub fn face_on_diagonal(p: Point, d: Point) -> FaceId {
    let (u, v) = p;
    match d {
        (1, 1) => FaceId::from_planar(FaceClass::A, u, v),
        (-1, -1) => FaceId::from_planar(FaceClass::A, u - 1, v - 1),
        (0, 1) => FaceId::from_planar(FaceClass::B, u, v + 1),
        (0, -1) => FaceId::from_planar(FaceClass::B, u, v),
        (1, 0) => FaceId::from_planar(FaceClass::C, u + 1, v),
        (-1, 0) => FaceId::from_planar(FaceClass::C, u, v),
        _ => panic!("not a lattice direction: {d:?}"),
    }
}

/// A hexagonal face of the mesh: an interior lattice point together with the
/// six rhombi around it, in counterclockwise order starting at direction
/// `(1,0)`. Positions 1, 3, 5 are the rhombi of the cube corner before a box
/// is added at this point; positions 0, 2, 4 after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexFace {
    pub center: Point,
    pub edges: [usize; 6],
}

#[derive(Clone, Debug)]
pub struct HexMesh {
    dims: BoxDims,
    vertices: Vec<TriangleId>,
    vertex_index: HashMap<TriangleId, usize>,
    edges: Vec<FaceId>,
    edge_index: HashMap<FaceId, usize>,
    /// `(up, down)` endpoints per edge.
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    hexfaces: Vec<HexFace>,
}

impl HexMesh {
    pub fn new(dims: BoxDims) -> HexMesh {
        let (a, b, c) = (dims.a as i32, dims.b as i32, dims.c as i32);
        let mut faces = BTreeSet::new();
        for i in 0..=a {
            for j in 0..=b {
                for k in 0..=c {
                    for class in FaceClass::ALL {
                        let f = FaceId::new(class, i, j, k);
                        if f.in_box(dims) {
                            faces.insert(f);
                        }
                    }
                }
            }
        }
        let edges: Vec<FaceId> = faces.into_iter().collect();
        let vertices: Vec<TriangleId> = edges
            .iter()
            .flat_map(|f| {
                let (up, down) = f.triangles();
                [up, down]
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let vertex_index: HashMap<TriangleId, usize> =
            vertices.iter().enumerate().map(|(n, t)| (*t, n)).collect();
        let edge_index: HashMap<FaceId, usize> = edges.iter().enumerate().map(|(n, f)| (*f, n)).collect();
        let mut incident = vec![Vec::new(); vertices.len()];
        let ends: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let (up, down) = f.triangles();
                let (x, y) = (vertex_index[&up], vertex_index[&down]);
                incident[x].push(n);
                incident[y].push(n);
                (x, y)
            })
            .collect();

        let points: BTreeSet<Point> = vertices.iter().flat_map(|t| t.corners()).collect();
        let mut hexfaces = Vec::new();
        for p in points {
            let ring: Option<Vec<usize>> = HEX_DIRECTIONS
                .iter()
                .map(|&d| edge_index.get(&face_on_diagonal(p, d)).copied())
                .collect();
            if let Some(ring) = ring {
                hexfaces.push(HexFace { center: p, edges: ring.try_into().unwrap() });
            }
        }

        HexMesh { dims, vertices, vertex_index, edges, edge_index, ends, incident, hexfaces }
    }

    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    pub fn vertices(&self) -> &[TriangleId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[FaceId] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn hexfaces(&self) -> &[HexFace] {
        &self.hexfaces
    }

    pub fn vertex_of(&self, t: &TriangleId) -> Option<usize> {
        self.vertex_index.get(t).copied()
    }

    pub fn edge_of(&self, f: &FaceId) -> Option<usize> {
        self.edge_index.get(f).copied()
    }

    pub fn require_edge(&self, f: &FaceId) -> Result<usize> {
        self.edge_of(f).ok_or_else(|| Error::UnknownFace(f.to_string()))
    }

    pub fn face(&self, e: usize) -> FaceId {
        self.edges[e]
    }

    /// `(up, down)` vertex indices of edge `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (x, y) = self.ends[e];
        if x == v {
            y
        } else {
            x
        }
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Endpoint triangles of a face.
    pub fn face_triangles(&self, f: &FaceId) -> Result<(TriangleId, TriangleId)> {
        self.require_edge(f)?;
        Ok(f.triangles())
    }

    /// Edge joining two vertices, if any.
    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        self.incident[x].iter().copied().find(|&e| self.other_end(e, x) == y)
    }

    pub fn to_json(&self, propellers: Option<&PropellerMap>) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|t| json!({ "u": t.u, "v": t.v, "up": t.up }))
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .zip(&self.ends)
            .map(|(f, (x, y))| json!({ "face": f.to_string(), "class": f.class, "pos": f.pos, "ends": [x, y] }))
            .collect();
        let hexfaces: Vec<Value> =
            self.hexfaces.iter().map(|h| json!({ "center": [h.center.0, h.center.1], "edges": h.edges })).collect();
        let mut out = json!({
            "dims": self.dims.as_array(),
            "vertices": vertices,
            "edges": edges,
            "hexfaces": hexfaces,
        });
        if let Some(pm) = propellers {
            out["propellers"] = pm
                .propellers()
                .iter()
                .map(|p| json!({ "base_vertex": p.base_vertex, "center": p.center, "outer": p.outer, "short": p.short }))
                .collect();
        }
        out
    }
}

/// A perfect matching, stored as sorted edge indices of its mesh.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    edges: Vec<usize>,
}

impl Matching {
    /// Validate that `edges` is a perfect matching of `mesh`.
    pub fn new(mesh: &HexMesh, mut edges: Vec<usize>) -> Result<Matching> {
        edges.sort_unstable();
        edges.dedup();
        let mut seen = vec![0u8; mesh.vertex_count()];
        for &e in &edges {
            if e >= mesh.edge_count() {
                return Err(Error::NotAMatching(format!("edge index {e} out of range")));
            }
            let (x, y) = mesh.ends(e);
            seen[x] += 1;
            seen[y] += 1;
        }
        if let Some(v) = seen.iter().position(|&d| d != 1) {
            return Err(Error::NotAMatching(format!(
                "vertex {:?} has degree {}",
                mesh.vertices()[v],
                seen[v]
            )));
        }
        Ok(Matching { edges })
    }

    pub fn from_faces(mesh: &HexMesh, faces: &[FaceId]) -> Result<Matching> {
        let edges = faces.iter().map(|f| mesh.require_edge(f)).collect::<Result<Vec<_>>>()?;
        Matching::new(mesh, edges)
    }

    /// Caller guarantees that `edges` is a perfect matching.
    pub(crate) fn from_sorted_unchecked(edges: Vec<usize>) -> Matching {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Matching { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn faces(&self, mesh: &HexMesh) -> Vec<FaceId> {
        self.edges.iter().map(|&e| mesh.face(e)).collect()
    }

    /// Matched edge at each vertex.
    pub fn edge_at(&self, mesh: &HexMesh) -> Vec<usize> {
        let mut at = vec![usize::MAX; mesh.vertex_count()];
        for &e in &self.edges {
            let (x, y) = mesh.ends(e);
            at[x] = e;
            at[y] = e;
        }
        at
    }

    pub fn class_counts(&self, mesh: &HexMesh) -> [usize; 3] {
        let mut out = [0; 3];
        for &e in &self.edges {
            out[mesh.face(e).class.index()] += 1;
        }
        out
    }
}

/// All perfect matchings of the subgraph formed by `allowed` edges on the
/// vertices they touch, by backtracking. Independent of the plane-partition
/// bijection; used as a counting oracle.
pub fn perfect_matchings(mesh: &HexMesh, allowed: &[usize]) -> Vec<Vec<usize>> {
    let mut ok = vec![false; mesh.edge_count()];
    let mut active = vec![false; mesh.vertex_count()];
    for &e in allowed {
        ok[e] = true;
        let (x, y) = mesh.ends(e);
        active[x] = true;
        active[y] = true;
    }
    let order: Vec<usize> = (0..mesh.vertex_count()).filter(|&v| active[v]).collect();
    let mut used = vec![false; mesh.vertex_count()];
    let mut chosen = Vec::new();
    let mut out = Vec::new();

    fn go(
        mesh: &HexMesh,
        ok: &[bool],
        order: &[usize],
        pos: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(k) = (pos..order.len()).find(|&k| !used[order[k]]) else {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        let v = order[k];
        for &e in mesh.incident(v) {
            let w = mesh.other_end(e, v);
            if !ok[e] || used[w] {
                continue;
            }
            used[v] = true;
            used[w] = true;
            chosen.push(e);
            go(mesh, ok, order, k + 1, used, chosen, out);
            chosen.pop();
            used[v] = false;
            used[w] = false;
        }
    }

    go(mesh, &ok, &order, 0, &mut used, &mut chosen, &mut out);
    out
}

/// A claw of three short edges around a center vertex of an even mesh,
/// contracting to the base vertex `base_vertex`. `outer` and `short` are
/// indexed by the orientation class of the short edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propeller {
    pub base_vertex: usize,
    pub center: usize,
    pub outer: [usize; 3],
    pub short: [usize; 3],
}

impl Propeller {
    pub fn class_of_outer(&self, v: usize) -> Option<FaceClass> {
        self.outer.iter().position(|&o| o == v).map(|k| FaceClass::ALL[k])
    }
}

/// What squishing does to an edge of the even mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    Short { propeller: usize, class: FaceClass },
    /// A long edge; `lift` distinguishes the two preimages of `base_edge`.
    Long { base_edge: usize, lift: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Squished {
    Base(FaceId),
    InPropeller,
}

/// The propeller decomposition of `H(2a,2b,2c)` together with the squish map
/// onto `H(a,b,c)`.
#[derive(Clone, Debug)]
pub struct PropellerMap {
    even: HexMesh,
    base: HexMesh,
    /// Indexed by base vertex.
    propellers: Vec<Propeller>,
    vertex_propeller: Vec<usize>,
    roles: Vec<EdgeRole>,
    /// Both lifts of each base edge; index 0 has its up endpoint on the outer
    /// vertex of class `class.next()` where `class` is the base edge's class.
    lifts: Vec<[usize; 2]>,
}

impl PropellerMap {
    /// Decompose an even mesh into propellers.
    ///
    /// Claw partitions are found by exact-cover search (every vertex is a
    /// center or adjacent to exactly one center). The first partition whose
    /// contraction is the base mesh with every edge doubled is kept; each
    /// claw is matched to the base vertex at half its center's position.
    pub fn new(even: HexMesh) -> Result<PropellerMap> {
        let base = HexMesh::new(even.dims().halved()?);
        let mut found = None;
        let mut last_err = String::from("no claw partition exists");
        claw_partitions(&even, &mut |centers| match Self::assemble(&even, &base, centers) {
            Ok(parts) => {
                found = Some(parts);
                true
            }
            Err(e) => {
                last_err = e;
                false
            }
        });
        let (propellers, vertex_propeller, roles, lifts) = found.ok_or(Error::NoPropellers(last_err))?;
        Ok(PropellerMap { even, base, propellers, vertex_propeller, roles, lifts })
    }

    pub fn for_base(base: BoxDims) -> Result<PropellerMap> {
        PropellerMap::new(HexMesh::new(base.doubled()))
    }

    #[allow(clippy::type_complexity)]
    fn assemble(
        even: &HexMesh,
        base: &HexMesh,
        centers: &[usize],
    ) -> std::result::Result<(Vec<Propeller>, Vec<usize>, Vec<EdgeRole>, Vec<[usize; 2]>), String> {
        if centers.len() != base.vertex_count() {
            return Err(format!("{} claws for {} base vertices", centers.len(), base.vertex_count()));
        }
        let mut slots: Vec<Option<Propeller>> = vec![None; base.vertex_count()];
        let mut vertex_propeller = vec![usize::MAX; even.vertex_count()];
        let mut roles: Vec<Option<EdgeRole>> = vec![None; even.edge_count()];
        for &center in centers {
            let (x, y) = even.vertices()[center].centroid3();
            if x % 2 != 0 || y % 2 != 0 {
                return Err("claw center is not at a doubled lattice position".into());
            }
            let tri = TriangleId::from_centroid3(x / 2, y / 2).ok_or("claw center does not halve to a triangle")?;
            let bv = base.vertex_of(&tri).ok_or("claw center halves outside the base mesh")?;
            if slots[bv].is_some() {
                return Err("two claws contract to the same base vertex".into());
            }
            let mut outer = [usize::MAX; 3];
            let mut short = [usize::MAX; 3];
            for &e in even.incident(center) {
                let k = even.face(e).class.index();
                if short[k] != usize::MAX {
                    return Err("claw has two short edges of one class".into());
                }
                short[k] = e;
                outer[k] = even.other_end(e, center);
                roles[e] = Some(EdgeRole::Short { propeller: bv, class: FaceClass::ALL[k] });
            }
            if short.contains(&usize::MAX) {
                return Err("claw center does not have degree 3".into());
            }
            vertex_propeller[center] = bv;
            for o in outer {
                vertex_propeller[o] = bv;
            }
            slots[bv] = Some(Propeller { base_vertex: bv, center, outer, short });
        }
        let propellers: Vec<Propeller> = slots.into_iter().map(|p| p.expect("all base vertices covered")).collect();

        let mut lifts = vec![[usize::MAX; 2]; base.edge_count()];
        let unassigned: Vec<usize> = (0..even.edge_count()).filter(|&e| roles[e].is_none()).collect();
        for e in unassigned {
            let (x, y) = even.ends(e);
            let (px, py) = (vertex_propeller[x], vertex_propeller[y]);
            if px == py {
                return Err("long edge inside a claw".into());
            }
            let be = base.edge_between(px, py).ok_or("long edge joins non-adjacent claws")?;
            let (bup, _) = base.ends(be);
            let (up_end, up_prop) = if px == bup { (x, px) } else { (y, py) };
            let class = base.face(be).class;
            let outer_class = propellers[up_prop].class_of_outer(up_end).ok_or("long edge ends at a claw center")?;
            let lift = if outer_class == class.next() {
                0
            } else if outer_class == class.prev() {
                1
            } else {
                return Err("long edge leaves through the outer vertex of its own class".into());
            };
            if lifts[be][lift] != usize::MAX {
                return Err("base edge has two lifts of the same kind".into());
            }
            lifts[be][lift] = e;
            roles[e] = Some(EdgeRole::Long { base_edge: be, lift });
        }
        if lifts.iter().any(|l| l.contains(&usize::MAX)) {
            return Err("some base edge is not doubled".into());
        }
        Ok((propellers, vertex_propeller, roles.into_iter().map(Option::unwrap).collect(), lifts))
    }

    pub fn even(&self) -> &HexMesh {
        &self.even
    }

    pub fn base(&self) -> &HexMesh {
        &self.base
    }

    pub fn propellers(&self) -> &[Propeller] {
        &self.propellers
    }

    pub fn propeller(&self, base_vertex: usize) -> &Propeller {
        &self.propellers[base_vertex]
    }

    /// Base vertex that an even-mesh vertex contracts to.
    pub fn propeller_of(&self, v: usize) -> usize {
        self.vertex_propeller[v]
    }

    pub fn role(&self, e: usize) -> EdgeRole {
        self.roles[e]
    }

    pub fn lifts(&self, base_edge: usize) -> [usize; 2] {
        self.lifts[base_edge]
    }

    pub fn short_edge_count(&self) -> usize {
        self.roles.iter().filter(|r| matches!(r, EdgeRole::Short { .. })).count()
    }

    /// `psi` on one edge of the even mesh.
    pub fn squish_edge(&self, f: &FaceId) -> Result<Squished> {
        let e = self.even.require_edge(f)?;
        Ok(match self.roles[e] {
            EdgeRole::Short { .. } => Squished::InPropeller,
            EdgeRole::Long { base_edge, .. } => Squished::Base(self.base.face(base_edge)),
        })
    }

    /// `phi`: all lifts of the given base edges plus every short edge of the
    /// propellers they touch. Returned as sorted even-mesh edge indices.
    pub fn unsquish(&self, base_edges: &[usize]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &be in base_edges {
            out.extend(self.lifts[be]);
            let (x, y) = self.base.ends(be);
            out.extend(self.propellers[x].short);
            out.extend(self.propellers[y].short);
        }
        out.into_iter().collect()
    }

    /// `unsquish` on face ids.
    pub fn unsquish_faces(&self, base: &[FaceId]) -> Result<Vec<FaceId>> {
        let idx: Vec<usize> = base.iter().map(|f| self.base.require_edge(f)).collect::<Result<_>>()?;
        Ok(self.unsquish(&idx).into_iter().map(|e| self.even.face(e)).collect())
    }
}

/// Enumerate partitions of the vertex set into closed neighbourhoods of
/// degree-3 centers. `visit` receives the centers and returns `true` to stop.
fn claw_partitions(mesh: &HexMesh, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn claw(mesh: &HexMesh, c: usize) -> [usize; 4] {
        let n = mesh.incident(c);
        [c, mesh.other_end(n[0], c), mesh.other_end(n[1], c), mesh.other_end(n[2], c)]
    }

    fn go(
        mesh: &HexMesh,
        covered: &mut Vec<bool>,
        centers: &mut Vec<usize>,
        from: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some(v) = (from..covered.len()).find(|&v| !covered[v]) else {
            return visit(centers);
        };
        let mut options: Vec<usize> = vec![v];
        options.extend(mesh.incident(v).iter().map(|&e| mesh.other_end(e, v)));
        for c in options {
            if mesh.degree(c) != 3 {
                continue;
            }
            let members = claw(mesh, c);
            if members.iter().any(|&m| covered[m]) {
                continue;
            }
            for &m in &members {
                covered[m] = true;
            }
            centers.push(c);
            if go(mesh, covered, centers, v + 1, visit) {
                return true;
            }
            centers.pop();
            for &m in &members {
                covered[m] = false;
            }
        }
        false
    }

    let mut covered = vec![false; mesh.vertex_count()];
    let mut centers = Vec::new();
    go(mesh, &mut covered, &mut centers, 0, visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(a: u32, b: u32, c: u32) -> BoxDims {
        BoxDims::new(a, b, c).unwrap()
    }

    #[test]
    fn small_mesh_counts() {
        let m = HexMesh::new(dims(1, 1, 1));
        assert_eq!((m.vertex_count(), m.edge_count(), m.hexfaces().len()), (6, 6, 1));
        let m = HexMesh::new(dims(2, 2, 2));
        assert_eq!((m.vertex_count(), m.edge_count()), (24, 30));
        let m = HexMesh::new(dims(2, 1, 1));
        assert_eq!((m.vertex_count(), m.edge_count(), m.hexfaces().len()), (10, 11, 2));
    }

    #[test]
    fn count_formulas_up_to_four() {
        for d in BoxDims::all_up_to(dims(4, 4, 4)) {
            let m = HexMesh::new(d);
            assert_eq!(m.vertex_count(), d.expected_vertex_count(), "{d}");
            assert_eq!(m.edge_count(), d.expected_edge_count(), "{d}");
            for v in 0..m.vertex_count() {
                assert!((2..=3).contains(&m.degree(v)), "{d}: degree {}", m.degree(v));
            }
            for e in 0..m.edge_count() {
                let (x, y) = m.ends(e);
                assert!(m.vertices()[x].up && !m.vertices()[y].up);
            }
        }
    }

    #[test]
    fn single_hexagon_is_a_six_cycle() {
        let m = HexMesh::new(dims(1, 1, 1));
        let hex = &m.hexfaces()[0];
        for k in 0..6 {
            let (e, f) = (hex.edges[k], hex.edges[(k + 1) % 6]);
            let (a, b) = m.ends(e);
            let (c, d) = m.ends(f);
            let shared = [a, b].iter().filter(|x| **x == c || **x == d).count();
            assert_eq!(shared, 1, "consecutive ring edges share exactly one vertex");
        }
        for v in 0..6 {
            assert_eq!(m.degree(v), 2);
        }
    }

    #[test]
    fn face_triangles_and_unknown_face() {
        let m = HexMesh::new(dims(2, 2, 2));
        let mut degree = vec![0; m.vertex_count()];
        for f in m.edges() {
            let (up, down) = m.face_triangles(f).unwrap();
            assert!(up.up && !down.up);
            degree[m.vertex_of(&up).unwrap()] += 1;
            degree[m.vertex_of(&down).unwrap()] += 1;
        }
        for (v, d) in degree.iter().enumerate() {
            assert_eq!(*d, m.degree(v));
        }
        let bogus = FaceId::new(FaceClass::A, 7, 0, 0);
        assert!(matches!(m.face_triangles(&bogus), Err(Error::UnknownFace(_))));
    }

    #[test]
    fn matching_validation() {
        let m = HexMesh::new(dims(1, 1, 1));
        let hex = &m.hexfaces()[0];
        let ok = Matching::new(&m, vec![hex.edges[1], hex.edges[3], hex.edges[5]]).unwrap();
        assert_eq!(ok.len(), 3);
        assert!(matches!(
            Matching::new(&m, vec![hex.edges[0], hex.edges[1]]),
            Err(Error::NotAMatching(_))
        ));
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(perfect_matchings(&m, &all).len(), 2);
    }

    #[test]
    fn faces_are_canonical() {
        assert_eq!(FaceId::new(FaceClass::A, 1, 1, 1), FaceId::new(FaceClass::A, 0, 0, 0));
        assert_eq!(FaceId::new(FaceClass::B, 3, 2, 5).pos, [1, 0, 3]);
    }

    #[test]
    fn propellers_of_h222() {
        let pm = PropellerMap::for_base(dims(1, 1, 1)).unwrap();
        assert_eq!(pm.propellers().len(), 6);
        assert_eq!(pm.short_edge_count(), 18);
        assert_eq!(pm.even().edge_count() - pm.short_edge_count(), 12);
        let pm = PropellerMap::for_base(dims(2, 2, 2)).unwrap();
        assert_eq!(pm.propellers().len(), 24);
    }

    #[test]
    fn odd_mesh_has_no_propellers() {
        assert!(matches!(PropellerMap::new(HexMesh::new(dims(2, 1, 2))), Err(Error::OddDims(_))));
    }

    #[test]
    fn unsquish_examples() {
        let pm = PropellerMap::for_base(dims(1, 1, 1)).unwrap();
        assert!(pm.unsquish(&[]).is_empty());
        assert_eq!(pm.unsquish(&[0]).len(), 8);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(pm.unsquish(&all).len(), 30);
    }
}
