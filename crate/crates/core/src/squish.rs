//! The squish map on matchings, its preimages, and the two edge weightings
//! used to compare the even mesh with its base.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{mat_word, LeadVar, Monomial, Poly, Turn};
use crate::diagrams::PlanePartition;
use crate::error::{Error, Result};
use crate::mesh::{perfect_matchings, EdgeRole, FaceClass, HexMesh, Matching, PropellerMap};
use crate::overlay::{loop_vertices, EdgeWeighting, TwoFactor};

fn t_pow(e: i32) -> Monomial {
    Monomial::new(1, [e, 0, 0, 0])
}

/// Edge weighting under which every matching of `H(a,b,c)` weighs `t^(3|pi|)`
/// for its diagram `pi`.
///
/// `A(i,j,k) -> t^(k-i)`, `B(i,j,k) -> t^(j-k)`, `C(i,j,k) -> t^(i-j)`. These
/// exponents do not change under the diagonal shift, so they are functions of
/// the rhombus, and adding a box multiplies the matching weight by `t^3`. The
/// empty matching's weight is then divided out on the edges at vertex 0.
pub fn wp_edge_weighting(mesh: &HexMesh) -> EdgeWeighting {
    let exps: Vec<i32> = mesh
        .edges()
        .iter()
        .map(|f| {
            let [i, j, k] = f.pos;
            match f.class {
                FaceClass::A => k - i,
                FaceClass::B => j - k,
                FaceClass::C => i - j,
            }
        })
        .collect();
    let (a, b, c) = (mesh.dims().a as i32, mesh.dims().b as i32, mesh.dims().c as i32);
    // exponent sum over the empty matching
    let empty = -(b * a * (a - 1) + a * c * (c - 1) + c * b * (b - 1)) / 2;
    let mut w: Vec<Monomial> = exps.into_iter().map(t_pow).collect();
    if mesh.vertex_count() > 0 {
        for &e in mesh.incident(0) {
            w[e] = &w[e] * &t_pow(-empty);
        }
    }
    EdgeWeighting::total(w)
}

/// `U`: short edges weigh 1, each long edge carries the base weight of its
/// image under the squish map.
pub fn pullback_weighting(pm: &PropellerMap) -> EdgeWeighting {
    let base = wp_edge_weighting(pm.base());
    EdgeWeighting::total(
        (0..pm.even().edge_count())
            .map(|e| match pm.role(e) {
                EdgeRole::Short { .. } => Monomial::one(),
                EdgeRole::Long { base_edge, .. } => base.get(base_edge).expect("total weighting").clone(),
            })
            .collect(),
    )
}

/// Which of the two lifts of a base edge carries `-1`, per orientation class
/// of the base edge. Lift indices are those of [`PropellerMap::lifts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignRule {
    ByClass([u8; 3]),
    /// `ByClass` with the choice additionally flipped when the base edge's
    /// planar position has odd `u + v`.
    ByClassAndParity([u8; 3]),
}

impl SignRule {
    /// The rule selected by [`calibrate_sign_rule`].
    pub const CALIBRATED: SignRule = SignRule::ByClass([0, 0, 0]);

    /// Candidates in the order calibration tries them.
    pub fn candidates() -> Vec<SignRule> {
        let by_class: Vec<[u8; 3]> =
            (0u8..8).map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1]).collect();
        by_class
            .iter()
            .map(|&c| SignRule::ByClass(c))
            .chain(by_class.iter().map(|&c| SignRule::ByClassAndParity(c)))
            .collect()
    }

    /// Index of the negative lift of `base_edge`.
    pub fn negative_lift(&self, base: &HexMesh, base_edge: usize) -> usize {
        let f = base.face(base_edge);
        match *self {
            SignRule::ByClass(c) => c[f.class.index()] as usize,
            SignRule::ByClassAndParity(c) => {
                let (u, v) = f.planar();
                (c[f.class.index()] as usize) ^ ((u + v).rem_euclid(2) as usize)
            }
        }
    }
}

/// `S`: short edges `+1`; within each lift pair one edge `+1` and one `-1`.
pub fn sign_weighting(pm: &PropellerMap, rule: SignRule) -> EdgeWeighting {
    EdgeWeighting::total(
        (0..pm.even().edge_count())
            .map(|e| match pm.role(e) {
                EdgeRole::Short { .. } => Monomial::one(),
                EdgeRole::Long { base_edge, lift } => {
                    let sign = if lift == rule.negative_lift(pm.base(), base_edge) { -1 } else { 1 };
                    Monomial::new(sign, [0; 4])
                }
            })
            .collect(),
    )
}

/// `Psi`: contract every propeller. Long edges of the matching map onto base
/// edges; an edge hit twice becomes a doubled edge.
pub fn project(pm: &PropellerMap, mu: &Matching) -> Result<TwoFactor> {
    let mut hits = vec![0u8; pm.base().edge_count()];
    for &e in mu.edges() {
        if let EdgeRole::Long { base_edge, .. } = pm.role(e) {
            hits[base_edge] += 1;
        }
    }
    let doubled = (0..hits.len()).filter(|&b| hits[b] == 2).collect();
    let single: Vec<usize> = (0..hits.len()).filter(|&b| hits[b] == 1).collect();
    TwoFactor::new(pm.base(), doubled, &single)
}

/// Local configuration of a matching at one propeller, relative to the class
/// of its matched short edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropellerCase {
    /// Both long edges parallel to the matched short edge: a doubled edge.
    Parallel,
    /// One of the two long edges is parallel to the short edge.
    OneTurn,
    /// Neither long edge is parallel to the short edge.
    TwoTurn,
}

pub fn classify_propeller(pm: &PropellerMap, mu: &Matching, base_vertex: usize) -> Result<PropellerCase> {
    let even = pm.even();
    let p = pm.propeller(base_vertex);
    let matched: Vec<usize> = (0..3).filter(|&k| mu.contains(p.short[k])).collect();
    let [k] = matched[..] else {
        return Err(Error::NotAMatching(format!("propeller {base_vertex} has {} matched short edges", matched.len())));
    };
    let mut parallel = 0;
    for (n, &o) in p.outer.iter().enumerate() {
        if n == k {
            continue;
        }
        let long = even
            .incident(o)
            .iter()
            .copied()
            .find(|&e| mu.contains(e))
            .ok_or_else(|| Error::NotAMatching(format!("outer vertex {o} is unmatched")))?;
        if matches!(pm.role(long), EdgeRole::Short { .. }) {
            return Err(Error::NotAMatching(format!("outer vertex {o} is matched twice")));
        }
        if even.face(long).class.index() == k {
            parallel += 1;
        }
    }
    Ok(match parallel {
        2 => PropellerCase::Parallel,
        1 => PropellerCase::OneTurn,
        _ => PropellerCase::TwoTurn,
    })
}

/// Matchings of the unsquished edge set of one component projecting onto it.
fn component_preimages(pm: &PropellerMap, component: &[usize], doubled: bool) -> Vec<Vec<usize>> {
    let allowed = pm.unsquish(component);
    perfect_matchings(pm.even(), &allowed)
        .into_iter()
        .filter(|m| {
            let mut hits = vec![0u8; component.len()];
            for &e in m {
                if let EdgeRole::Long { base_edge, .. } = pm.role(e) {
                    match component.iter().position(|&b| b == base_edge) {
                        Some(i) => hits[i] += 1,
                        None => return false,
                    }
                }
            }
            hits.iter().all(|&h| h == if doubled { 2 } else { 1 })
        })
        .collect()
}

/// Components of a 2-factor as `(edges, is_doubled)`.
fn components(lambda: &TwoFactor) -> Vec<(Vec<usize>, bool)> {
    lambda
        .doubled()
        .iter()
        .map(|&e| (vec![e], true))
        .chain(lambda.loops().iter().map(|l| (l.clone(), false)))
        .collect()
}

/// `Psi^-1(lambda)`: the product over components of the matchings of each
/// unsquished component that project onto it.
pub fn lift_preimages(pm: &PropellerMap, lambda: &TwoFactor) -> Vec<Matching> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for (comp, doubled) in components(lambda) {
        let options = component_preimages(pm, &comp, doubled);
        acc = acc
            .iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut m = prefix.clone();
                    m.extend(o);
                    m
                })
            })
            .collect();
    }
    acc.into_iter()
        .map(|mut m| {
            m.sort_unstable();
            Matching::from_sorted_unchecked(m)
        })
        .collect()
}

/// Turns taken at each vertex of a counterclockwise loop; entry `n` is the
/// turn at the vertex between edges `n-1` and `n`.
pub fn turn_word(mesh: &HexMesh, lp: &[usize]) -> Vec<Turn> {
    let verts = loop_vertices(mesh, lp);
    let pts: Vec<(i64, i64)> = verts.iter().map(|&v| mesh.vertices()[v].centroid3()).collect();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (p0, p1, p2) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let cross = (p1.0 - p0.0) * (p2.1 - p1.1) - (p1.1 - p0.1) * (p2.0 - p1.0);
            if cross > 0 {
                Turn::L
            } else {
                Turn::R
            }
        })
        .collect()
}

pub fn word_string(word: &[Turn]) -> String {
    word.iter().map(|t| if *t == Turn::L { 'L' } else { 'R' }).collect()
}

/// Sum over the preimages of one loop of their weights.
pub fn loop_lift_sum(pm: &PropellerMap, lp: &[usize], w: &EdgeWeighting) -> Result<Poly> {
    let mut total = Poly::zero(LeadVar::T);
    for m in component_preimages(pm, lp, false) {
        total.add_monomial(&w.product(pm.even(), &m)?);
    }
    Ok(total)
}

/// Transfer-matrix value of a loop: entries (3,3) + (4,4) of the word product.
pub fn transfer_value(mesh: &HexMesh, lp: &[usize]) -> i64 {
    mat_word(&turn_word(mesh, lp)).loop_trace()
}

/// Sum of the sign weighting over `Psi^-1(lambda)`.
pub fn lemma2_sum(pm: &PropellerMap, lambda: &TwoFactor, rule: SignRule) -> Result<BigInt> {
    let s = sign_weighting(pm, rule);
    let mut total = BigInt::zero();
    for m in lift_preimages(pm, lambda) {
        total += s.matching_weight(pm.even(), &m)?.coeff;
    }
    Ok(total)
}

/// `(-1)^(ab+bc+ca) * 2^loops`.
pub fn lemma2_expected(pm: &PropellerMap, lambda: &TwoFactor) -> BigInt {
    let sign = if pm.base().dims().pair_sum().is_multiple_of(2) { 1 } else { -1 };
    BigInt::from(sign) << lambda.loop_count()
}

/// Try each candidate rule on every loop of the base meshes `(1,1,1)` and
/// `(2,1,1)` and return the first for which every loop's lift sum is `-2`.
pub fn calibrate_sign_rule() -> Result<SignRule> {
    use crate::mesh::BoxDims;
    use crate::overlay::{enumerate_two_factors, DEFAULT_DIAGRAM_LIMIT};
    let mut cases = Vec::new();
    for base in [BoxDims::new(1, 1, 1)?, BoxDims::new(2, 1, 1)?] {
        let pm = PropellerMap::for_base(base)?;
        let mut loops: Vec<Vec<usize>> = enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT)?
            .iter()
            .flat_map(|l| l.loops().to_vec())
            .collect();
        loops.sort();
        loops.dedup();
        cases.push((pm, loops));
    }
    let minus_two = Poly::constant(LeadVar::T, -2);
    for rule in SignRule::candidates() {
        let mut ok = true;
        'cases: for (pm, loops) in &cases {
            let s = sign_weighting(pm, rule);
            for lp in loops {
                if loop_lift_sum(pm, lp, &s)? != minus_two {
                    ok = false;
                    break 'cases;
                }
            }
        }
        if ok {
            return Ok(rule);
        }
    }
    Err(Error::NoValidRule)
}

/// `W(mu) = U(mu)|_{t -> -t} * S(mu)`, as a monomial in `t`.
pub fn combined_weight(pm: &PropellerMap, rule: SignRule, mu: &Matching) -> Result<Monomial> {
    let u = pullback_weighting(pm).matching_weight(pm.even(), mu)?;
    let s = sign_weighting(pm, rule).matching_weight(pm.even(), mu)?;
    let sign = if u.exp[0].rem_euclid(2) == 1 { -1 } else { 1 };
    Ok(Monomial::new(u.coeff * s.coeff * sign, u.exp))
}

/// Box weight of a diagram under the coloured weighting at `q = r = s = -1`,
/// written in `t` with `p = t^3`.
pub fn specialized_diagram_weight(pp: &PlanePartition) -> Monomial {
    use crate::diagrams::{diagram_weight, WeightScheme};
    let w = diagram_weight(pp, WeightScheme::Z2Z2);
    let sign = if (w.exp[1] + w.exp[2] + w.exp[3]) % 2 == 0 { 1 } else { -1 };
    Monomial::new(sign, [3 * w.exp[0], 0, 0, 0])
}

/// Product of the six edge weights around every hexagonal face.
pub fn hexface_products(mesh: &HexMesh, w: &EdgeWeighting) -> Result<Vec<Monomial>> {
    mesh.hexfaces().iter().map(|h| w.product(mesh, &h.edges)).collect()
}

pub fn is_unit(m: &Monomial) -> bool {
    m.exp == [0; 4] && (m.coeff.is_one() || (-&m.coeff).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{all_matchings, enumerate_diagrams, matching_of};
    use crate::mesh::BoxDims;
    use crate::overlay::{enumerate_two_factors, DEFAULT_DIAGRAM_LIMIT};

    fn pm(a: u32, b: u32, c: u32) -> PropellerMap {
        PropellerMap::for_base(BoxDims::new(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn wp_contract() {
        for d in BoxDims::all_up_to(BoxDims::new(3, 3, 2).unwrap()) {
            let mesh = HexMesh::new(d);
            let w = wp_edge_weighting(&mesh);
            for pp in enumerate_diagrams(d) {
                let m = matching_of(&mesh, &pp).unwrap();
                assert_eq!(w.matching_weight(&mesh, &m).unwrap(), t_pow(3 * pp.size() as i32), "{d}");
            }
        }
    }

    #[test]
    fn calibration_is_stable() {
        assert_eq!(calibrate_sign_rule().unwrap(), SignRule::CALIBRATED);
    }

    #[test]
    fn negating_a_lift_pair_flips_loop_sums() {
        let pm = pm(1, 1, 1);
        let lambda = enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT)
            .unwrap()
            .into_iter()
            .find(|l| l.loop_count() == 1)
            .unwrap();
        let lp = &lambda.loops()[0];
        let mut s = sign_weighting(&pm, SignRule::CALIBRATED);
        assert_eq!(loop_lift_sum(&pm, lp, &s).unwrap(), Poly::constant(LeadVar::T, -2));
        for e in pm.lifts(lp[0]) {
            let neg = Monomial::new(-s.get(e).unwrap().coeff.clone(), [0; 4]);
            s.set(e, neg);
        }
        assert_eq!(loop_lift_sum(&pm, lp, &s).unwrap(), Poly::constant(LeadVar::T, 2));
    }

    #[test]
    fn fibers_of_h222() {
        let pm = pm(1, 1, 1);
        let mut sizes: Vec<usize> = enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT)
            .unwrap()
            .iter()
            .map(|l| lift_preimages(&pm, l).len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 18]);
    }

    #[test]
    fn lemma2_on_hexagon() {
        let pm = pm(1, 1, 1);
        let mut sums: Vec<BigInt> = enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT)
            .unwrap()
            .iter()
            .map(|l| lemma2_sum(&pm, l, SignRule::CALIBRATED).unwrap())
            .collect();
        sums.sort();
        assert_eq!(sums, vec![BigInt::from(-2), BigInt::from(-1), BigInt::from(-1)]);
    }

    #[test]
    fn hexagon_word() {
        let pm = pm(1, 1, 1);
        let loops: Vec<Vec<usize>> = enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT)
            .unwrap()
            .iter()
            .flat_map(|l| l.loops().to_vec())
            .collect();
        assert_eq!(loops.len(), 1);
        assert_eq!(word_string(&turn_word(pm.base(), &loops[0])), "LLLLLL");
        assert_eq!(transfer_value(pm.base(), &loops[0]), -2);
        let ones = EdgeWeighting::constant(pm.even(), Monomial::one());
        assert_eq!(loop_lift_sum(&pm, &loops[0], &ones).unwrap(), Poly::constant(LeadVar::T, 18));
    }

    #[test]
    fn empty_matching_projects_to_all_doubled() {
        let pm = pm(1, 1, 1);
        let empty = matching_of(pm.even(), &PlanePartition::empty(pm.even().dims())).unwrap();
        let l = project(&pm, &empty).unwrap();
        let base_empty = matching_of(pm.base(), &PlanePartition::empty(pm.base().dims())).unwrap();
        assert_eq!(l.doubled(), base_empty.edges());
        for bv in 0..pm.base().vertex_count() {
            assert_eq!(classify_propeller(&pm, &empty, bv).unwrap(), PropellerCase::Parallel);
        }
    }

    #[test]
    fn sign_sum_over_h222() {
        let pm = pm(1, 1, 1);
        let s = sign_weighting(&pm, SignRule::CALIBRATED);
        let total: BigInt = all_matchings(pm.even())
            .iter()
            .map(|m| s.matching_weight(pm.even(), m).unwrap().coeff)
            .sum();
        assert_eq!(total, BigInt::from(-4));
    }
}
