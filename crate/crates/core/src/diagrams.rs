//! Plane partitions in a box, their weights, and the matching bijection.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{LeadVar, Monomial, Poly};
use crate::error::{Error, Result};
use crate::mesh::{BoxDims, FaceClass, FaceId, HexMesh, Matching, Point};

/// A 3D Young diagram inside an `a x b x c` box, as the `a x b` matrix of
/// column heights. Heights are weakly decreasing along rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePartition {
    pub dims: BoxDims,
    pub heights: Vec<Vec<u32>>,
}

impl PlanePartition {
    pub fn empty(dims: BoxDims) -> PlanePartition {
        PlanePartition { dims, heights: vec![vec![0; dims.b as usize]; dims.a as usize] }
    }

    pub fn full(dims: BoxDims) -> PlanePartition {
        PlanePartition { dims, heights: vec![vec![dims.c; dims.b as usize]; dims.a as usize] }
    }

    pub fn new(dims: BoxDims, heights: Vec<Vec<u32>>) -> Result<PlanePartition> {
        let pp = PlanePartition { dims, heights };
        pp.validate()?;
        Ok(pp)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.dims.a as usize, self.dims.b as usize);
        if self.heights.len() != a || self.heights.iter().any(|r| r.len() != b) {
            return Err(Error::Parse(format!("heights must be a {a}x{b} matrix")));
        }
        for i in 0..a {
            for j in 0..b {
                let h = self.heights[i][j];
                if h > self.dims.c {
                    return Err(Error::Parse(format!("height {h} at ({i},{j}) exceeds {}", self.dims.c)));
                }
                if (i + 1 < a && self.heights[i + 1][j] > h) || (j + 1 < b && self.heights[i][j + 1] > h) {
                    return Err(Error::Parse(format!("heights increase after ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn height(&self, i: usize, j: usize) -> u32 {
        self.heights[i][j]
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.heights.iter().flatten().sum()
    }

    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.heights.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(j, &h)| (0..h).map(move |k| (i as u32, j as u32, k)))
        })
    }

    pub fn contains(&self, i: u32, j: u32, k: u32) -> bool {
        (i as usize) < self.heights.len()
            && (j as usize) < self.heights[0].len()
            && k < self.heights[i as usize][j as usize]
    }

    /// Boxes that can be added keeping the diagram valid and inside the box.
    pub fn addable(&self) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for (i, row) in self.heights.iter().enumerate() {
            for (j, &h) in row.iter().enumerate() {
                let ok_row = i == 0 || self.heights[i - 1][j] > h;
                let ok_col = j == 0 || self.heights[i][j - 1] > h;
                if h < self.dims.c && ok_row && ok_col {
                    out.push((i as u32, j as u32, h));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "dims": self.dims.as_array(), "heights": self.heights })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PlanePartition> {
        #[derive(Deserialize)]
        struct Raw {
            dims: [u32; 3],
            heights: Vec<Vec<u32>>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        let dims = BoxDims::new(raw.dims[0], raw.dims[1], raw.dims[2])?;
        PlanePartition::new(dims, raw.heights)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoxColor {
    P,
    Q,
    R,
    S,
}

impl BoxColor {
    /// Exponent slot of the colour's variable.
    pub fn slot(self) -> usize {
        self as usize
    }
}

/// Colour of box `(i,j,k)` from `(i - k, j - k) mod 2`.
pub fn box_color(i: u32, j: u32, k: u32) -> BoxColor {
    let x = (i as i64 - k as i64).rem_euclid(2);
    let y = (j as i64 - k as i64).rem_euclid(2);
    match (x, y) {
        (0, 0) => BoxColor::P,
        (1, 0) => BoxColor::Q,
        (0, 1) => BoxColor::R,
        _ => BoxColor::S,
    }
}

/// Box weights. Weights are monomials in `p, q, r, s`; further
/// specializations are applied to the resulting polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Every box has weight `p`.
    Monochromatic,
    /// Box weight `p, q, r` or `s` according to [`box_color`].
    Z2Z2,
}

impl WeightScheme {
    pub fn box_weight(self, i: u32, j: u32, k: u32) -> Monomial {
        match self {
            WeightScheme::Monochromatic => Monomial::var(0),
            WeightScheme::Z2Z2 => Monomial::var(box_color(i, j, k).slot()),
        }
    }
}

/// Product of the box weights; the empty diagram has weight 1.
pub fn diagram_weight(pp: &PlanePartition, scheme: WeightScheme) -> Monomial {
    let mut exp = [0i32; 4];
    for (i, j, k) in pp.boxes() {
        let w = scheme.box_weight(i, j, k);
        for (e, x) in exp.iter_mut().zip(w.exp) {
            *e += x;
        }
    }
    Monomial::new(1, exp)
}

/// All diagrams in the box, in lexicographic order of the row-major heights.
pub fn enumerate_diagrams(dims: BoxDims) -> DiagramIter {
    DiagramIter { current: Some(PlanePartition::empty(dims)) }
}

pub struct DiagramIter {
    current: Option<PlanePartition>,
}

impl Iterator for DiagramIter {
    type Item = PlanePartition;

    fn next(&mut self) -> Option<PlanePartition> {
        let out = self.current.take()?;
        let (a, b, c) = (out.dims.a as usize, out.dims.b as usize, out.dims.c);
        let mut h = out.heights.clone();
        for pos in (0..a * b).rev() {
            let (i, j) = (pos / b, pos % b);
            let mut bound = c;
            if i > 0 {
                bound = bound.min(h[i - 1][j]);
            }
            if j > 0 {
                bound = bound.min(h[i][j - 1]);
            }
            if h[i][j] < bound {
                h[i][j] += 1;
                for later in pos + 1..a * b {
                    h[later / b][later % b] = 0;
                }
                self.current = Some(PlanePartition { dims: out.dims, heights: h });
                break;
            }
        }
        Some(out)
    }
}

/// Number of diagrams in the box, from the product
/// `prod (i+j+k-1)/(i+j+k-2)` over `1 <= i,j,k <= a,b,c`.
pub fn box_count(dims: BoxDims) -> BigInt {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 1..=dims.a {
        for j in 1..=dims.b {
            for k in 1..=dims.c {
                num *= i + j + k - 1;
                den *= i + j + k - 2;
            }
        }
    }
    num / den
}

/// The visible faces of the diagram, as a perfect matching of `H(a,b,c)`.
pub fn matching_of(mesh: &HexMesh, pp: &PlanePartition) -> Result<Matching> {
    if mesh.dims() != pp.dims {
        return Err(Error::MeshMismatch);
    }
    let (a, b, c) = (pp.dims.a as usize, pp.dims.b as usize, pp.dims.c);
    let mut faces = Vec::with_capacity(mesh.vertex_count() / 2);
    for i in 0..a {
        for j in 0..b {
            faces.push(FaceId::new(FaceClass::A, i as i32, j as i32, pp.heights[i][j] as i32));
        }
    }
    for i in 0..a {
        for k in 0..c {
            let depth = (0..b).filter(|&j| pp.heights[i][j] > k).count();
            faces.push(FaceId::new(FaceClass::B, i as i32, depth as i32, k as i32));
        }
    }
    for j in 0..b {
        for k in 0..c {
            let depth = (0..a).filter(|&i| pp.heights[i][j] > k).count();
            faces.push(FaceId::new(FaceClass::C, depth as i32, j as i32, k as i32));
        }
    }
    let mut edges: Vec<usize> = faces.iter().map(|f| mesh.require_edge(f)).collect::<Result<_>>()?;
    edges.sort_unstable();
    Ok(Matching::from_sorted_unchecked(edges))
}

/// Inverse of [`matching_of`].
///
/// The rhombi of a perfect matching tile the hexagon; walking along rhombus
/// sides recovers the z coordinate of every lattice point on the stepped
/// surface, and each horizontal rhombus then gives one column height.
pub fn diagram_of(mesh: &HexMesh, m: &Matching) -> Result<PlanePartition> {
    let m = Matching::new(mesh, m.edges().to_vec())?;
    let dims = mesh.dims();
    let mut nbrs: HashMap<Point, Vec<(Point, i32)>> = HashMap::new();
    for f in m.faces(mesh) {
        for (from, to, dz) in f.sides() {
            nbrs.entry(from).or_default().push((to, dz));
            nbrs.entry(to).or_default().push((from, -dz));
        }
    }
    let anchor = (dims.a as i32, 0);
    let mut z: HashMap<Point, i32> = HashMap::new();
    z.insert(anchor, 0);
    let mut queue = VecDeque::from([anchor]);
    while let Some(p) = queue.pop_front() {
        let zp = z[&p];
        for &(q, dz) in nbrs.get(&p).map(Vec::as_slice).unwrap_or(&[]) {
            match z.get(&q) {
                Some(&zq) if zq != zp + dz => {
                    return Err(Error::NotAMatching("inconsistent surface heights".into()));
                }
                Some(_) => {}
                None => {
                    z.insert(q, zp + dz);
                    queue.push_back(q);
                }
            }
        }
    }
    let (a, b) = (dims.a as usize, dims.b as usize);
    let mut heights = vec![vec![u32::MAX; b]; a];
    for f in m.faces(mesh) {
        if f.class != FaceClass::A {
            continue;
        }
        let (u, v) = f.planar();
        let zf = *z.get(&(u, v)).ok_or_else(|| Error::NotAMatching("disconnected tiling".into()))?;
        let (i, j) = (u + zf, v + zf);
        if i < 0 || j < 0 || i as usize >= a || j as usize >= b || zf < 0 {
            return Err(Error::NotAMatching(format!("top face {f} lands outside the box")));
        }
        heights[i as usize][j as usize] = zf as u32;
    }
    let pp = PlanePartition { dims, heights };
    pp.validate().map_err(|e| Error::NotAMatching(e.to_string()))?;
    if matching_of(mesh, &pp)? != m {
        return Err(Error::NotAMatching("matching is not the surface of a diagram".into()));
    }
    Ok(pp)
}

/// Exchange the three matched edges of hexagonal face `hex` for the other
/// three. Adds or removes one box.
pub fn tau_move(mesh: &HexMesh, m: &Matching, hex: usize) -> Result<Matching> {
    let ring = mesh.hexfaces().get(hex).ok_or(Error::FaceNotFlippable(hex))?.edges;
    let evens = [ring[0], ring[2], ring[4]];
    let odds = [ring[1], ring[3], ring[5]];
    let (remove, add) = if evens.iter().all(|&e| m.contains(e)) {
        (evens, odds)
    } else if odds.iter().all(|&e| m.contains(e)) {
        (odds, evens)
    } else {
        return Err(Error::FaceNotFlippable(hex));
    };
    let mut edges: Vec<usize> = m.edges().iter().copied().filter(|e| !remove.contains(e)).collect();
    edges.extend(add);
    edges.sort_unstable();
    Ok(Matching::from_sorted_unchecked(edges))
}

/// Hex faces at which `m` can be flipped.
pub fn flippable_faces(mesh: &HexMesh, m: &Matching) -> Vec<usize> {
    (0..mesh.hexfaces().len())
        .filter(|&h| {
            let r = mesh.hexfaces()[h].edges;
            [r[0], r[2], r[4]].iter().all(|&e| m.contains(e)) || [r[1], r[3], r[5]].iter().all(|&e| m.contains(e))
        })
        .collect()
}

/// All perfect matchings of `H(a,b,c)` via the diagram bijection.
pub fn all_matchings(mesh: &HexMesh) -> Vec<Matching> {
    enumerate_diagrams(mesh.dims())
        .map(|pp| matching_of(mesh, &pp).expect("diagram fits its own mesh"))
        .collect()
}

/// Weakly decreasing column profiles of length `a` with entries in `0..=c`,
/// in lexicographic order.
fn profiles(a: usize, c: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a);
    fn go(a: usize, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for h in 0..=bound {
            cur.push(h);
            go(a, h, cur, out);
            cur.pop();
        }
    }
    go(a, c, &mut cur, &mut out);
    out
}

/// Boxed partition function `sum_pi weight(pi)`, optionally truncated at total
/// degree `cap`, by a transfer over column profiles.
///
/// Columns `j = b-1, ..., 0` are processed in turn. A column profile `s`
/// can precede `s'` (the column to its right) iff `s >= s'` entrywise, so
/// each step is a sum over the down-set of `s`, computed with in-place
/// prefix sums along each coordinate.
pub fn z_poly(dims: BoxDims, scheme: WeightScheme, cap: Option<u32>) -> Poly {
    let (a, b) = (dims.a as usize, dims.b as usize);
    let states = profiles(a, dims.c);
    let index: HashMap<&[u32], usize> = states.iter().enumerate().map(|(n, s)| (s.as_slice(), n)).collect();
    // predecessor along each coordinate, when it is still a profile
    let down: Vec<Vec<Option<usize>>> = states
        .iter()
        .map(|s| {
            (0..a)
                .map(|i| {
                    if s[i] == 0 {
                        return None;
                    }
                    let mut t = s.clone();
                    t[i] -= 1;
                    index.get(t.as_slice()).copied()
                })
                .collect()
        })
        .collect();

    let column_weight = |s: &[u32], j: usize| -> Monomial {
        let mut exp = [0i32; 4];
        for (i, &h) in s.iter().enumerate() {
            for k in 0..h {
                let w = scheme.box_weight(i as u32, j as u32, k);
                for (e, x) in exp.iter_mut().zip(w.exp) {
                    *e += x;
                }
            }
        }
        Monomial::new(1, exp)
    };

    let zero = Poly::zero(LeadVar::P).with_cap(cap);
    let mut f: Vec<Poly> = states
        .iter()
        .map(|s| Poly::from_monomial(LeadVar::P, &column_weight(s, b - 1)).with_cap(cap))
        .collect();
    for j in (0..b - 1).rev() {
        for i in 0..a {
            for (n, d) in down.iter().enumerate() {
                if let Some(m) = d[i] {
                    let prev = f[m].clone();
                    f[n].add_assign_ref(&prev);
                }
            }
        }
        f = states
            .iter()
            .enumerate()
            .map(|(n, s)| if f[n].is_zero() { zero.clone() } else { f[n].mul_monomial(&column_weight(s, j)) })
            .collect();
    }
    let mut total = zero;
    for p in &f {
        total.add_assign_ref(p);
    }
    total
}

/// Same polynomial as [`z_poly`], by summing over every diagram.
pub fn z_poly_enumerate(dims: BoxDims, scheme: WeightScheme, cap: Option<u32>) -> Poly {
    let mut total = Poly::zero(LeadVar::P).with_cap(cap);
    for pp in enumerate_diagrams(dims) {
        total.add_monomial(&diagram_weight(&pp, scheme));
    }
    total
}
