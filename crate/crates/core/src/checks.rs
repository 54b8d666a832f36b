//! Named exhaustive checks with pass/fail reports.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{mat_word, Assignment, LeadVar, Mat4, Monomial, Poly, Turn};
use crate::diagrams::{
    all_matchings, box_count, diagram_of, enumerate_diagrams, matching_of, z_poly, z_poly_enumerate, PlanePartition,
    WeightScheme,
};
use crate::error::{Error, Result};
use crate::mesh::{perfect_matchings, BoxDims, HexMesh, Matching, PropellerMap};
use crate::overlay::{component_count, enumerate_two_factors, overlay, split, two_factor_weight, TwoFactor};
use crate::series::{compare_box_vs_series, eq3_check, SeriesComparison};
use crate::squish::{
    calibrate_sign_rule, combined_weight, hexface_products, lemma2_expected, lemma2_sum, lift_preimages,
    loop_lift_sum, project, pullback_weighting, sign_weighting, specialized_diagram_weight, transfer_value,
    turn_word, word_string, wp_edge_weighting, SignRule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckName {
    Counting,
    Split,
    Parity,
    MinusOne,
    Pullback,
    Consistency,
    Theorem,
    Matrices,
    Eq1,
    Eq2,
    Eq3,
    Fibers,
    Cross,
}

impl CheckName {
    pub const ALL: [CheckName; 13] = [
        CheckName::Counting,
        CheckName::Split,
        CheckName::Parity,
        CheckName::MinusOne,
        CheckName::Pullback,
        CheckName::Consistency,
        CheckName::Theorem,
        CheckName::Matrices,
        CheckName::Eq1,
        CheckName::Eq2,
        CheckName::Eq3,
        CheckName::Fibers,
        CheckName::Cross,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Counting => "counting",
            CheckName::Split => "split",
            CheckName::Parity => "parity",
            CheckName::MinusOne => "minus-one",
            CheckName::Pullback => "pullback",
            CheckName::Consistency => "consistency",
            CheckName::Theorem => "theorem",
            CheckName::Matrices => "matrices",
            CheckName::Eq1 => "eq1",
            CheckName::Eq2 => "eq2",
            CheckName::Eq3 => "eq3",
            CheckName::Fibers => "fibers",
            CheckName::Cross => "cross",
        }
    }

    /// Whether the check reads its size from the dims argument; the others
    /// use the order (or nothing).
    pub fn uses_dims(self) -> bool {
        !matches!(self, CheckName::Matrices | CheckName::Eq3)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckName> {
        CheckName::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Dims or order the check ran at.
    pub size: String,
    pub pass: bool,
    /// First counterexample; present iff the check failed.
    pub witness: Option<String>,
    pub details: Value,
    pub elapsed_ms: u128,
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {} [{}] ({} ms)", self.name, self.size, self.elapsed_ms);
        if let Some(w) = &self.witness {
            s.push_str(&format!("\n  witness: {w}"));
        }
        s
    }
}

/// Inputs for a check. Checks on even meshes read `dims` as the base box.
#[derive(Clone, Copy, Debug)]
pub struct CheckParams {
    pub dims: BoxDims,
    pub order: usize,
    /// Largest diagram count for which all ordered pairs are swept.
    pub pair_limit: u128,
}

impl CheckParams {
    pub fn new(dims: BoxDims, order: usize) -> CheckParams {
        CheckParams { dims, order, pair_limit: 10_000 }
    }
}

/// Witness (if failed) plus details.
type Outcome = (Option<String>, Value);

pub fn run_check(name: CheckName, params: &CheckParams) -> Result<CheckReport> {
    let start = Instant::now();
    let d = params.dims;
    let (size, (witness, details)) = match name {
        CheckName::Counting => (d.to_string(), check_counting(d)?),
        CheckName::Split => (d.to_string(), check_split(d, params.pair_limit)?),
        CheckName::Parity => (format!("<= {d}"), check_parity(d, params.pair_limit)?),
        CheckName::MinusOne => (d.to_string(), check_minus_one(d, params.pair_limit)?),
        CheckName::Pullback => (d.to_string(), check_pullback(d)?),
        CheckName::Consistency => (d.to_string(), check_consistency(d)?),
        CheckName::Theorem => (d.to_string(), check_theorem(d)?),
        CheckName::Matrices => ("words <= 14".to_string(), check_matrices()),
        CheckName::Eq1 => (format!("{d}, degree {}", params.order), check_series(d, params.order, WeightScheme::Monochromatic)?),
        CheckName::Eq2 => (format!("{d}, degree {}", params.order), check_series(d, params.order, WeightScheme::Z2Z2)?),
        CheckName::Eq3 => (format!("order {}", params.order), check_eq3(params.order)?),
        CheckName::Fibers => (d.to_string(), check_fibers(d, params.pair_limit)?),
        CheckName::Cross => (format!("<= {d}"), check_cross(d)?),
    };
    Ok(CheckReport {
        name: name.to_string(),
        size,
        pass: witness.is_none(),
        witness,
        details,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn first<T>(slot: &mut Option<T>, value: impl FnOnce() -> T) {
    if slot.is_none() {
        *slot = Some(value());
    }
}

fn pair_sum_sign(d: BoxDims) -> i64 {
    if d.pair_sum().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Matching count by backtracking on the mesh versus the diagram count and
/// the box product formula.
pub fn check_counting(d: BoxDims) -> Result<Outcome> {
    let mesh = HexMesh::new(d);
    let all: Vec<usize> = (0..mesh.edge_count()).collect();
    let backtracked = perfect_matchings(&mesh, &all).len();
    let diagrams = enumerate_diagrams(d).count();
    let formula = box_count(d);
    let mut witness = None;
    if BigInt::from(backtracked) != formula || BigInt::from(diagrams) != formula {
        witness = Some(format!("backtracking {backtracked}, diagrams {diagrams}, formula {formula}"));
    }
    Ok((witness, json!({ "matchings": backtracked, "diagrams": diagrams, "formula": formula.to_string() })))
}

/// Every ordered pair is recovered by splitting its overlay, and each
/// 2-factor arises from exactly `2^loops` pairs.
pub fn check_split(d: BoxDims, limit: u128) -> Result<Outcome> {
    let mesh = HexMesh::new(d);
    guard(d, limit)?;
    let ms = all_matchings(&mesh);
    let mut witness = None;
    let mut seen: BTreeMap<TwoFactor, u64> = BTreeMap::new();
    for m1 in &ms {
        for m2 in &ms {
            let l = overlay(&mesh, m1, m2)?;
            let pairs = split(&l);
            if !pairs.iter().any(|(a, b)| a == m1 && b == m2) {
                first(&mut witness, || format!("pair not recovered from {}", l.to_json(&mesh)));
            }
            *seen.entry(l).or_default() += 1;
        }
    }
    let mut reconstructed: u64 = 0;
    for (l, count) in &seen {
        let pairs = split(l);
        reconstructed += pairs.len() as u64;
        if pairs.len() as u64 != *count {
            first(&mut witness, || format!("{} pairs overlay to {}, split gives {}", count, l.to_json(&mesh), pairs.len()));
        }
        for (a, b) in &pairs {
            if Matching::new(&mesh, a.edges().to_vec()).is_err() || overlay(&mesh, a, b)? != *l {
                first(&mut witness, || format!("split of {} does not overlay back", l.to_json(&mesh)));
            }
        }
    }
    let n = ms.len() as u64;
    if reconstructed != n * n {
        first(&mut witness, || format!("sum of 2^loops is {reconstructed}, expected {}", n * n));
    }
    Ok((witness, json!({ "matchings": n, "two_factors": seen.len(), "sum_two_pow_loops": reconstructed })))
}

fn guard(d: BoxDims, limit: u128) -> Result<()> {
    let count = box_count(d);
    if count > BigInt::from(limit) {
        return Err(Error::TooLarge {
            what: format!("diagrams in box {d}"),
            count: u128::try_from(count).unwrap_or(u128::MAX),
            limit,
        });
    }
    Ok(())
}

/// Component parity of every overlay, and its invariance under each
/// tau-move of the first matching, for every box up to `max`.
pub fn check_parity(max: BoxDims, limit: u128) -> Result<Outcome> {
    let mut witness = None;
    let mut per_dims = Vec::new();
    for d in BoxDims::all_up_to(max) {
        guard(d, limit)?;
        let mesh = HexMesh::new(d);
        let ms = all_matchings(&mesh);
        let index: HashMap<&[usize], usize> = ms.iter().enumerate().map(|(i, m)| (m.edges(), i)).collect();
        let want = (d.pair_sum() % 2) as usize;
        let n = ms.len();
        let mut parity = vec![0u8; n * n];
        for (i, m1) in ms.iter().enumerate() {
            for (j, m2) in ms.iter().enumerate() {
                let c = component_count(&overlay(&mesh, m1, m2)?);
                parity[i * n + j] = (c % 2) as u8;
                if c % 2 != want {
                    first(&mut witness, || format!("{d}: overlay of matchings {i},{j} has {c} components"));
                }
            }
        }
        let mut moves = 0u64;
        for (i, m) in ms.iter().enumerate() {
            for h in crate::diagrams::flippable_faces(&mesh, m) {
                let flipped = crate::diagrams::tau_move(&mesh, m, h)?;
                let k = index[flipped.edges()];
                moves += 1;
                for j in 0..n {
                    if parity[i * n + j] != parity[k * n + j] {
                        first(&mut witness, || format!("{d}: tau at hex {h} changes parity of pair ({i},{j})"));
                    }
                }
            }
        }
        per_dims.push(json!({ "dims": d.to_string(), "pairs": n * n, "tau_moves": moves }));
    }
    Ok((witness, Value::Array(per_dims)))
}

fn loops_of(two_factors: &[TwoFactor]) -> Vec<Vec<usize>> {
    let mut loops: Vec<Vec<usize>> = two_factors.iter().flat_map(|l| l.loops().to_vec()).collect();
    loops.sort();
    loops.dedup();
    loops
}

/// Sign-weighting lemma on every 2-factor of the base box, the aggregate sum
/// over all matchings of the even mesh, and transfer versus brute force on
/// every loop.
pub fn check_minus_one(base: BoxDims, limit: u128) -> Result<Outcome> {
    let rule = calibrate_sign_rule()?;
    let pm = PropellerMap::for_base(base)?;
    let mut witness = None;
    if rule != SignRule::CALIBRATED {
        witness = Some(format!("calibration picked {rule:?}, expected {:?}", SignRule::CALIBRATED));
    }
    let tfs = enumerate_two_factors(pm.base(), limit)?;
    let mut values = Vec::new();
    for l in &tfs {
        let got = lemma2_sum(&pm, l, rule)?;
        let want = lemma2_expected(&pm, l);
        if got != want {
            first(&mut witness, || format!("2-factor {} sums to {got}, expected {want}", l.to_json(pm.base())));
        }
        values.push(got.to_string());
    }
    let s = sign_weighting(&pm, rule);
    let mut loop_values = Vec::new();
    for lp in loops_of(&tfs) {
        let brute = loop_lift_sum(&pm, &lp, &s)?;
        let transfer = transfer_value(pm.base(), &lp);
        let word = turn_word(pm.base(), &lp);
        let net = word.iter().map(|t| if *t == Turn::L { 1 } else { -1 }).sum::<i64>();
        if brute != Poly::constant(LeadVar::T, transfer) || transfer != -2 || net != 6 {
            first(&mut witness, || format!("loop {} ({}): brute {brute}, transfer {transfer}", word_string(&word), net));
        }
        loop_values.push(json!({ "word": word_string(&word), "brute": brute.to_string(), "transfer": transfer }));
    }
    let n_base = BigInt::from(all_matchings(pm.base()).len());
    let mut aggregate = BigInt::from(0);
    for m in all_matchings(pm.even()) {
        aggregate += s.matching_weight(pm.even(), &m)?.coeff;
    }
    let want = BigInt::from(pair_sum_sign(base)) * &n_base * &n_base;
    if aggregate != want {
        first(&mut witness, || format!("sum of S over all matchings is {aggregate}, expected {want}"));
    }
    let hex_bad = hexface_products(pm.even(), &s)?.iter().filter(|m| m.coeff != BigInt::from(-1)).count();
    if hex_bad > 0 {
        first(&mut witness, || format!("{hex_bad} hexagonal faces without sign product -1"));
    }
    if let Some(w) = check_matrices().0 {
        first(&mut witness, || w);
    }
    Ok((
        witness,
        json!({
            "rule": format!("{rule:?}"),
            "lemma_values": values,
            "loops": loop_values,
            "aggregate": aggregate.to_string(),
        }),
    ))
}

/// `U(mu) = w_p(Psi(mu))` for every matching of the even mesh.
pub fn check_pullback(base: BoxDims) -> Result<Outcome> {
    let pm = PropellerMap::for_base(base)?;
    let u = pullback_weighting(&pm);
    let wp = wp_edge_weighting(pm.base());
    let mut witness = None;
    let ms = all_matchings(pm.even());
    for m in &ms {
        let lhs = u.matching_weight(pm.even(), m)?;
        let rhs = two_factor_weight(pm.base(), &project(&pm, m)?, &wp)?;
        if lhs != rhs {
            first(&mut witness, || format!("matching {:?}: U = t^{}, w_p(Psi) = t^{}", m.edges(), lhs.exp[0], rhs.exp[0]));
        }
    }
    Ok((witness, json!({ "matchings": ms.len() })))
}

/// `W(mu) / W(empty)` equals the coloured diagram weight at `q = r = s = -1`,
/// and `W(empty) = (-1)^(ab+bc+ca)`.
pub fn check_consistency(base: BoxDims) -> Result<Outcome> {
    let pm = PropellerMap::for_base(base)?;
    let rule = SignRule::CALIBRATED;
    let mut witness = None;
    let empty = matching_of(pm.even(), &PlanePartition::empty(pm.even().dims()))?;
    let w0 = combined_weight(&pm, rule, &empty)?;
    if w0 != Monomial::new(pair_sum_sign(base), [0; 4]) {
        witness = Some(format!("W(empty) = {:?}", w0));
    }
    let w0_inv = w0.inv()?;
    let mut count = 0;
    for pp in enumerate_diagrams(pm.even().dims()) {
        let m = matching_of(pm.even(), &pp)?;
        let ratio = &combined_weight(&pm, rule, &m)? * &w0_inv;
        let target = specialized_diagram_weight(&pp);
        if ratio != target || diagram_of(pm.even(), &m)? != pp {
            first(&mut witness, || format!("diagram {:?}: ratio {:?}, expected {:?}", pp.heights, ratio, target));
        }
        count += 1;
    }
    Ok((witness, json!({ "matchings": count, "w_empty": w0.coeff.to_string() })))
}

/// `Z^(2a,2b,2c)(p,-1,-1,-1) = Z^(a,b,c)(-p)^2` by the profile DP.
pub fn check_theorem(base: BoxDims) -> Result<Outcome> {
    let (lhs, rhs) = theorem_sides(base);
    let witness = (lhs != rhs).then(|| format!("lhs {lhs} != rhs {rhs}"));
    Ok((witness, json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() })))
}

/// Both sides of the main identity.
pub fn theorem_sides(base: BoxDims) -> (Poly, Poly) {
    let lhs = z_poly(base.doubled(), WeightScheme::Z2Z2, None).specialize(&Assignment::qrs_minus_one());
    let small = z_poly(base, WeightScheme::Monochromatic, None).specialize(&Assignment::negate_lead());
    let rhs = &small * &small;
    (lhs, rhs)
}

/// `LR = RL = I`, `L^6 = -I`, the sample walk, and every word of length at
/// most 14 with six more `L`s than `R`s.
pub fn check_matrices() -> Outcome {
    let mut witness = None;
    let minus_i = Mat4::identity().neg();
    if Mat4::left() * Mat4::right() != Mat4::identity() || Mat4::right() * Mat4::left() != Mat4::identity() {
        witness = Some("L R is not the identity".to_string());
    }
    if Mat4::left().pow(6) != minus_i {
        first(&mut witness, || "L^6 is not -I".to_string());
    }
    let sample = Turn::parse_word("LRRLLLLRLLRLLL").expect("valid word");
    if mat_word(&sample) != minus_i {
        first(&mut witness, || "sample walk does not evaluate to -I".to_string());
    }
    let mut words = 0u64;
    for len in (6..=14).step_by(2) {
        let rs = (len - 6) / 2;
        for mask in 0u32..(1 << len) {
            if mask.count_ones() as usize != rs {
                continue;
            }
            let word: Vec<Turn> = (0..len).map(|i| if mask >> i & 1 == 1 { Turn::R } else { Turn::L }).collect();
            words += 1;
            if mat_word(&word) != minus_i {
                first(&mut witness, || format!("{} does not evaluate to -I", word_string(&word)));
            }
        }
    }
    (witness, json!({ "words": words }))
}

fn comparison_outcome(c: SeriesComparison) -> Outcome {
    let witness = c.first_mismatch.as_ref().map(|(n, e, l, r)| {
        format!("coefficient of Q^{n} q^{} r^{} s^{}: boxed {l}, series {r}", e[1], e[2], e[3])
    });
    (witness, json!({ "degree": c.degree, "terms_compared": c.terms_compared }))
}

pub fn check_series(d: BoxDims, degree: usize, scheme: WeightScheme) -> Result<Outcome> {
    Ok(comparison_outcome(compare_box_vs_series(d, degree as u32, scheme)?))
}

pub fn check_eq3(order: usize) -> Result<Outcome> {
    let ok = eq3_check(order)?;
    Ok(((!ok).then(|| format!("series differ through Q^{order}")), json!({ "order": order })))
}

/// Preimage sizes partition the matchings of the even mesh, and every
/// matching lies in the preimage of its own projection.
pub fn check_fibers(base: BoxDims, limit: u128) -> Result<Outcome> {
    let pm = PropellerMap::for_base(base)?;
    let mut witness = None;
    let tfs = enumerate_two_factors(pm.base(), limit)?;
    let mut sizes = Vec::new();
    let mut fibers: HashMap<&TwoFactor, HashSet<Matching>> = HashMap::new();
    for l in &tfs {
        let pre = lift_preimages(&pm, l);
        sizes.push(pre.len());
        fibers.insert(l, pre.into_iter().collect());
    }
    let ms = all_matchings(pm.even());
    let total: usize = sizes.iter().sum();
    if total != ms.len() {
        witness = Some(format!("fibers cover {total} matchings of {}", ms.len()));
    }
    for m in &ms {
        let l = project(&pm, m)?;
        if !fibers.get(&l).is_some_and(|f| f.contains(m)) {
            first(&mut witness, || format!("matching {:?} missing from the fiber of its projection", m.edges()));
        }
    }
    sizes.sort_unstable();
    Ok((witness, json!({ "two_factors": tfs.len(), "matchings": ms.len(), "fiber_sizes": sizes })))
}

/// DP equals enumeration, and the coloured polynomial at `q = r = s = p`
/// equals the monochromatic one, for every box up to `max`.
pub fn check_cross(max: BoxDims) -> Result<Outcome> {
    let mut witness = None;
    let mut checked = Vec::new();
    for d in BoxDims::all_up_to(max) {
        for scheme in [WeightScheme::Monochromatic, WeightScheme::Z2Z2] {
            if z_poly(d, scheme, None) != z_poly_enumerate(d, scheme, None) {
                first(&mut witness, || format!("{d} {scheme:?}: dp and enumeration differ"));
            }
        }
        let coloured = z_poly(d, WeightScheme::Z2Z2, None).specialize(&Assignment::diagonal());
        if coloured != z_poly(d, WeightScheme::Monochromatic, None) {
            first(&mut witness, || format!("{d}: p=q=r=s specialization differs from monochromatic"));
        }
        checked.push(d.to_string());
    }
    Ok((witness, json!({ "dims": checked })))
}
