//! Exact arithmetic used throughout the crate.
//!
//! * [`Monomial`] / [`Poly`]: signed Laurent monomials and sparse polynomials
//!   in four variables. Slot 0 is the "lead" variable, either `t` or `p`
//!   (with `p = t^3`); slots 1..3 are `q`, `r`, `s`.
//! * [`Series`]: truncated power series in a grading variable whose
//!   coefficients are Laurent polynomials in `q, r, s`.
//! * [`Mat4`]: 4x4 integer matrices and the transfer matrices `L`, `R`.
//!
//! All coefficients are arbitrary precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exponent vector over `(lead, q, r, s)`.
pub type Exp = [i32; 4];

pub const ZERO_EXP: Exp = [0; 4];

/// Which variable occupies exponent slot 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeadVar {
    T,
    P,
}

impl LeadVar {
    pub fn names(self) -> [&'static str; 4] {
        match self {
            LeadVar::T => ["t", "q", "r", "s"],
            LeadVar::P => ["p", "q", "r", "s"],
        }
    }

    /// Index of a variable name under this lead, if any.
    pub fn index_of(self, name: &str) -> Option<usize> {
        self.names().iter().position(|n| *n == name)
    }
}

/// `coeff * lead^e0 * q^e1 * r^e2 * s^e3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exp: Exp,
}

impl Monomial {
    pub fn new(coeff: impl Into<BigInt>, exp: Exp) -> Self {
        let coeff = coeff.into();
        if coeff.is_zero() {
            Self::zero()
        } else {
            Monomial { coeff, exp }
        }
    }

    pub fn zero() -> Self {
        Monomial { coeff: BigInt::zero(), exp: ZERO_EXP }
    }

    pub fn one() -> Self {
        Monomial { coeff: BigInt::one(), exp: ZERO_EXP }
    }

    pub fn var(index: usize) -> Self {
        let mut exp = ZERO_EXP;
        exp[index] = 1;
        Monomial { coeff: BigInt::one(), exp }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exp == ZERO_EXP
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut exp = self.exp;
        for e in exp.iter_mut() {
            *e *= n as i32;
        }
        Monomial::new(num_traits::pow(self.coeff.clone(), n as usize), exp)
    }

    /// Inverse, defined when the coefficient is a unit.
    pub fn inv(&self) -> Result<Self> {
        if !(self.coeff.is_one() || (-&self.coeff).is_one()) {
            return Err(Error::NotInvertible(format!("{:?}", self)));
        }
        Ok(Monomial { coeff: self.coeff.clone(), exp: self.exp.map(|e| -e) })
    }

    pub fn specialize(&self, asg: &Assignment) -> Monomial {
        if self.is_zero() {
            return Monomial::zero();
        }
        let mut exp = ZERO_EXP;
        let mut negative = false;
        for (slot, &e) in self.exp.iter().enumerate() {
            match asg.0[slot] {
                Subst::Keep => exp[slot] += e,
                Subst::Const(c) => negative ^= c < 0 && e.rem_euclid(2) == 1,
                Subst::Var { index, negate } => {
                    exp[index] += e;
                    negative ^= negate && e.rem_euclid(2) == 1;
                }
            }
        }
        let coeff = if negative { -&self.coeff } else { self.coeff.clone() };
        Monomial { coeff, exp }
    }

    pub fn has_nonnegative_exponents(&self) -> bool {
        self.exp.iter().all(|&e| e >= 0)
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut exp = self.exp;
        for (e, r) in exp.iter_mut().zip(rhs.exp) {
            *e += r;
        }
        Monomial::new(&self.coeff * &rhs.coeff, exp)
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        &self * &rhs
    }
}

/// Substitution for one variable slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subst {
    Keep,
    /// Replace by the constant +1 or -1.
    Const(i8),
    /// Replace by `±(variable in slot index)`.
    Var { index: usize, negate: bool },
}

/// A substitution for all four slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment(pub [Subst; 4]);

impl Default for Assignment {
    fn default() -> Self {
        Assignment([Subst::Keep; 4])
    }
}

impl Assignment {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn with(mut self, slot: usize, subst: Subst) -> Self {
        self.0[slot] = subst;
        self
    }

    /// `q, r, s -> -1`, lead kept.
    pub fn qrs_minus_one() -> Self {
        Self::identity()
            .with(1, Subst::Const(-1))
            .with(2, Subst::Const(-1))
            .with(3, Subst::Const(-1))
    }

    /// Every variable to `+1` (pure counting).
    pub fn all_ones() -> Self {
        Assignment([Subst::Const(1); 4])
    }

    /// Every variable to `-1`.
    pub fn all_minus_one() -> Self {
        Assignment([Subst::Const(-1); 4])
    }

    /// Lead variable negated, everything else kept.
    pub fn negate_lead() -> Self {
        Self::identity().with(0, Subst::Var { index: 0, negate: true })
    }

    /// `q, r, s -> lead` (the diagonal specialization `p = q = r = s`).
    pub fn diagonal() -> Self {
        let to_lead = Subst::Var { index: 0, negate: false };
        Self::identity().with(1, to_lead).with(2, to_lead).with(3, to_lead)
    }

    /// Parse `q=-1,r=-1,s=-1,p=-p`. Values are `±1` or `±name`.
    pub fn parse(spec: &str, lead: LeadVar) -> Result<Self> {
        let mut asg = Self::identity();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value in {part:?}")))?;
            let slot = lead
                .index_of(lhs.trim())
                .ok_or_else(|| Error::Parse(format!("unknown variable {lhs:?}")))?;
            let rhs = rhs.trim();
            let (negate, body) = match rhs.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, rhs.strip_prefix('+').unwrap_or(rhs)),
            };
            let subst = if body == "1" {
                Subst::Const(if negate { -1 } else { 1 })
            } else if let Some(index) = lead.index_of(body) {
                if index == slot && !negate {
                    Subst::Keep
                } else {
                    Subst::Var { index, negate }
                }
            } else {
                return Err(Error::Parse(format!("value {rhs:?} must be ±1 or ±variable")));
            };
            asg.0[slot] = subst;
        }
        Ok(asg)
    }
}

/// Sparse Laurent polynomial with integer coefficients.
///
/// Terms with a zero coefficient are never stored. If a degree cap is set,
/// terms of total degree (in `p, q, r, s`, counting `t` as one third) above
/// the cap are discarded as they are produced.
#[derive(Clone, Debug)]
pub struct Poly {
    lead: LeadVar,
    terms: BTreeMap<Exp, BigInt>,
    cap: Option<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.lead == other.lead && self.terms == other.terms
    }
}

impl Eq for Poly {}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Poly {
    pub fn zero(lead: LeadVar) -> Self {
        Poly { lead, terms: BTreeMap::new(), cap: None }
    }

    pub fn one(lead: LeadVar) -> Self {
        Self::from_monomial(lead, &Monomial::one())
    }

    pub fn constant(lead: LeadVar, c: impl Into<BigInt>) -> Self {
        Self::from_monomial(lead, &Monomial::new(c, ZERO_EXP))
    }

    pub fn var(lead: LeadVar, index: usize) -> Self {
        Self::from_monomial(lead, &Monomial::var(index))
    }

    pub fn from_monomial(lead: LeadVar, m: &Monomial) -> Self {
        let mut p = Self::zero(lead);
        p.add_term(m.exp, m.coeff.clone());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Exp)>>(lead: LeadVar, terms: I) -> Self {
        let mut p = Self::zero(lead);
        for (c, e) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn with_cap(mut self, cap: Option<u32>) -> Self {
        self.cap = min_cap(self.cap, cap);
        if let Some(d) = self.cap {
            let lead = self.lead;
            self.terms.retain(|e, _| degree3(lead, e) <= 3 * d as i64);
        }
        self
    }

    pub fn lead(&self) -> LeadVar {
        self.lead
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial { coeff: c.clone(), exp: *e })
    }

    pub fn coeff(&self, exp: &Exp) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    fn within_cap(&self, exp: &Exp) -> bool {
        match self.cap {
            Some(d) => degree3(self.lead, exp) <= 3 * d as i64,
            None => true,
        }
    }

    pub fn add_term(&mut self, exp: Exp, coeff: BigInt) {
        if coeff.is_zero() || !self.within_cap(&exp) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_monomial(&mut self, m: &Monomial) {
        self.add_term(m.exp, m.coeff.clone());
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        debug_assert_eq!(self.lead, other.lead);
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly { lead: self.lead, terms: BTreeMap::new(), cap: self.cap };
        for (e, c) in &self.terms {
            let mut exp = *e;
            for (x, y) in exp.iter_mut().zip(m.exp) {
                *x += y;
            }
            out.add_term(exp, c * &m.coeff);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        self.mul_monomial(&Monomial::new(k.clone(), ZERO_EXP))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.lead).with_cap(self.cap);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute per `asg`. Multiplicative and additive.
    pub fn specialize(&self, asg: &Assignment) -> Poly {
        let mut out = Poly { lead: self.lead, terms: BTreeMap::new(), cap: self.cap };
        for m in self.monomials() {
            out.add_monomial(&m.specialize(asg));
        }
        out
    }

    /// Rewrite a `t`-polynomial as a `p`-polynomial using `p = t^3`.
    pub fn collapse_t(&self) -> Result<Poly> {
        if self.lead == LeadVar::P {
            return Ok(self.clone());
        }
        let mut out = Poly { lead: LeadVar::P, terms: BTreeMap::new(), cap: self.cap };
        for (e, c) in &self.terms {
            if e[0].rem_euclid(3) != 0 {
                return Err(Error::NonDivisibleExponent(e[0]));
            }
            out.add_term([e[0] / 3, e[1], e[2], e[3]], c.clone());
        }
        Ok(out)
    }

    /// Sum of all coefficients (every variable set to 1).
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(&ZERO_EXP)
    }

    /// Coefficients of a univariate polynomial in the lead variable,
    /// indexed by exponent. Returns `None` if any `q, r, s` exponent is
    /// nonzero or any lead exponent is negative.
    pub fn univariate_coeffs(&self) -> Option<Vec<BigInt>> {
        let mut out: Vec<BigInt> = Vec::new();
        for (e, c) in &self.terms {
            if e[1..].iter().any(|&x| x != 0) || e[0] < 0 {
                return None;
            }
            let k = e[0] as usize;
            if out.len() <= k {
                out.resize(k + 1, BigInt::zero());
            }
            out[k] = c.clone();
        }
        Some(out)
    }

    pub fn all_exponents_nonnegative(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({ "coeff": bigint_to_json(c), "exp": e }))
            .collect();
        json!({ "vars": self.lead.names(), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Poly> {
        let vars = v
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("poly json: missing vars".into()))?;
        let lead = match vars.first().and_then(Value::as_str) {
            Some("t") => LeadVar::T,
            Some("p") => LeadVar::P,
            other => return Err(Error::Parse(format!("poly json: bad lead var {other:?}"))),
        };
        let mut p = Poly::zero(lead);
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("poly json: missing terms".into()))?;
        for t in terms {
            let coeff = bigint_from_json(
                t.get("coeff").ok_or_else(|| Error::Parse("poly json: missing coeff".into()))?,
            )?;
            let exp: Exp = serde_json::from_value(
                t.get("exp").cloned().ok_or_else(|| Error::Parse("poly json: missing exp".into()))?,
            )?;
            p.add_term(exp, coeff);
        }
        Ok(p)
    }
}

/// Three times the total degree, so that `t` counts as `1/3`.
fn degree3(lead: LeadVar, e: &Exp) -> i64 {
    let rest = (e[1] + e[2] + e[3]) as i64;
    match lead {
        LeadVar::T => e[0] as i64 + 3 * rest,
        LeadVar::P => 3 * (e[0] as i64 + rest),
    }
}

pub(crate) fn bigint_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(x) => json!(x),
        None => json!(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &Value) -> Result<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(BigInt::from(x));
    }
    v.as_str()
        .and_then(|s| BigInt::from_str(s).ok())
        .ok_or_else(|| Error::Parse(format!("bad integer {v}")))
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone().with_cap(rhs.cap);
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            lead: self.lead,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            cap: self.cap,
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.lead, rhs.lead);
        let mut out = Poly::zero(self.lead).with_cap(min_cap(self.cap, rhs.cap));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.lead.names();
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (slot, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[slot].to_string()),
                    _ => factors.push(format!("{}^{}", names[slot], k)),
                }
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            match (n, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Truncated power series `sum_{n<=order} c_n z^n` with Laurent-polynomial
/// coefficients in `q, r, s` (slot 0 of every coefficient is unused).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    var: String,
    coeffs: Vec<Poly>,
}

impl Series {
    pub fn one(var: &str, order: usize) -> Series {
        let mut coeffs = vec![Poly::zero(LeadVar::P); order + 1];
        coeffs[0] = Poly::one(LeadVar::P);
        Series { var: var.to_string(), coeffs }
    }

    pub fn from_coeffs(var: &str, coeffs: Vec<Poly>) -> Series {
        assert!(!coeffs.is_empty(), "series needs at least the constant coefficient");
        Series { var: var.to_string(), coeffs }
    }

    /// `1 / (1 - a z^step)` to the given order.
    pub fn geometric(var: &str, a: &Monomial, step: usize, order: usize) -> Series {
        assert!(step >= 1);
        let mut s = Series::one(var, order);
        let mut power = Monomial::one();
        for n in (step..=order).step_by(step) {
            power = &power * a;
            s.coeffs[n] = Poly::from_monomial(LeadVar::P, &power);
        }
        s
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Poly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series { var: self.var.clone(), coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn mul(&self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![Poly::zero(LeadVar::P); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &rhs.coeffs[j];
                coeffs[i + j].add_assign_ref(&prod);
            }
        }
        Series { var: self.var.clone(), coeffs }
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut acc = Series::one(&self.var, self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires constant coefficient exactly 1.
    pub fn inv(&self) -> Result<Series> {
        if self.coeffs[0] != Poly::one(LeadVar::P) {
            return Err(Error::NonUnitConstantTerm);
        }
        let order = self.order();
        let mut out: Vec<Poly> = Vec::with_capacity(order + 1);
        out.push(Poly::one(LeadVar::P));
        for n in 1..=order {
            let mut acc = Poly::zero(LeadVar::P);
            for k in 1..=n {
                if self.coeffs[k].is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc.add_assign_ref(&(&self.coeffs[k] * &out[n - k]));
            }
            out.push(-&acc);
        }
        Ok(Series { var: self.var.clone(), coeffs: out })
    }

    pub fn specialize(&self, asg: &Assignment) -> Series {
        Series {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|c| c.specialize(asg)).collect(),
        }
    }

    /// Integer coefficients, if every coefficient is a constant.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.terms.keys().all(|e| *e == ZERO_EXP) {
                    Some(c.constant_term())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            for (e, k) in c.terms() {
                terms.push(json!({ "power": n, "coeff": bigint_to_json(k), "exp": e }));
            }
        }
        json!({
            "grading": self.var,
            "order": self.order(),
            "vars": LeadVar::P.names(),
            "terms": terms,
        })
    }
}

/// A single step of a loop walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn parse_word(word: &str) -> Result<Vec<Turn>> {
        word.chars()
            .map(|ch| match ch {
                'L' => Ok(Turn::L),
                'R' => Ok(Turn::R),
                _ => Err(Error::Parse(format!("turn word contains {ch:?}"))),
            })
            .collect()
    }
}

/// 4x4 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat4(pub [[i64; 4]; 4]);

impl Mat4 {
    pub fn identity() -> Mat4 {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Mat4(m)
    }

    /// Left-turn transfer matrix.
    pub fn left() -> Mat4 {
        Mat4([[0, 0, 1, 1], [0, 0, 0, -1], [1, 0, 0, 0], [-1, -1, 0, 0]])
    }

    /// Right-turn transfer matrix.
    pub fn right() -> Mat4 {
        Mat4([[0, 0, 1, 0], [0, 0, -1, -1], [1, 1, 0, 0], [0, -1, 0, 0]])
    }

    pub fn of(turn: Turn) -> Mat4 {
        match turn {
            Turn::L => Mat4::left(),
            Turn::R => Mat4::right(),
        }
    }

    pub fn neg(&self) -> Mat4 {
        Mat4(self.0.map(|row| row.map(|x| -x)))
    }

    pub fn pow(&self, n: u32) -> Mat4 {
        (0..n).fold(Mat4::identity(), |acc, _| acc * *self)
    }

    /// Entry with 1-based indices, as the states are numbered 1..4.
    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.0[row - 1][col - 1]
    }

    /// Closed-walk lift sum: entries (3,3) + (4,4).
    pub fn loop_trace(&self) -> i64 {
        self.entry(3, 3) + self.entry(4, 4)
    }
}

impl Mul for Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[0i64; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat4(out)
    }
}

/// Product of the transfer matrices of `word`, written in the same order
/// as the word (the walk is read right to left).
pub fn mat_word(word: &[Turn]) -> Mat4 {
    word.iter().fold(Mat4::identity(), |acc, &t| acc * Mat4::of(t))
}

/// `L^k` for any integer `k`, using `L^-1 = R`.
pub fn left_power(k: i64) -> Mat4 {
    let base = if k >= 0 { Mat4::left() } else { Mat4::right() };
    base.pow(k.unsigned_abs() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, Exp)]) -> Poly {
        Poly::from_terms(LeadVar::P, terms.iter().copied())
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(1, [0; 4]), (1, [1, 0, 0, 0])]);
        let b = p(&[(1, [0; 4]), (-1, [1, 0, 0, 0])]);
        assert_eq!(&a * &b, p(&[(1, [0; 4]), (-1, [2, 0, 0, 0])]));
        assert_eq!((&a * &b).to_string(), "1 - p^2");
    }

    #[test]
    fn multiplicative_identity_and_expansion() {
        let x = p(&[(3, [1, 2, 0, 0]), (-2, [0, 0, 1, 1])]);
        assert_eq!(&x * &Poly::one(LeadVar::P), x);
        let a = p(&[(1, [0; 4]), (1, [0, 1, 0, 0])]);
        let b = p(&[(1, [0; 4]), (1, [0, 0, 1, 0])]);
        assert_eq!(
            &a * &b,
            p(&[(1, [0; 4]), (1, [0, 1, 0, 0]), (1, [0, 0, 1, 0]), (1, [0, 1, 1, 0])])
        );
    }

    #[test]
    fn cap_discards_high_degree_terms() {
        let a = p(&[(1, [0; 4]), (1, [1, 0, 0, 0])]).with_cap(Some(2));
        let cube = a.pow(3);
        assert_eq!(cube, p(&[(1, [0; 4]), (3, [1, 0, 0, 0]), (3, [2, 0, 0, 0])]));
        let t = Poly::from_terms(LeadVar::T, [(1, [3, 0, 0, 0]), (1, [7, 0, 0, 0])]).with_cap(Some(2));
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn specialize_examples() {
        let m = Monomial::new(1, [0, 2, 1, 1]);
        assert_eq!(m.specialize(&Assignment::qrs_minus_one()), Monomial::one());
        let t3 = Monomial::new(1, [3, 0, 0, 0]);
        assert_eq!(t3.specialize(&Assignment::negate_lead()), Monomial::new(-1, [3, 0, 0, 0]));
    }

    #[test]
    fn collapse_t() {
        let t3 = Poly::from_terms(LeadVar::T, [(1, [3, 0, 0, 0])]);
        assert_eq!(t3.collapse_t().unwrap(), p(&[(1, [1, 0, 0, 0])]));
        assert_eq!(Poly::one(LeadVar::T).collapse_t().unwrap(), Poly::one(LeadVar::P));
        let t6q = Poly::from_terms(LeadVar::T, [(1, [6, 1, 0, 0])]);
        assert_eq!(t6q.collapse_t().unwrap(), p(&[(1, [2, 1, 0, 0])]));
        let bad = Poly::from_terms(LeadVar::T, [(1, [4, 0, 0, 0])]);
        assert!(matches!(bad.collapse_t(), Err(Error::NonDivisibleExponent(4))));
    }

    #[test]
    fn parse_assignment() {
        let a = Assignment::parse("q=-1,r=-1,s=-1,p=-p", LeadVar::P).unwrap();
        assert_eq!(a.0[0], Subst::Var { index: 0, negate: true });
        assert_eq!(a.0[1], Subst::Const(-1));
        assert!(Assignment::parse("x=1", LeadVar::P).is_err());
        assert!(Assignment::parse("q=2", LeadVar::P).is_err());
        assert_eq!(Assignment::parse("q=p", LeadVar::P).unwrap().0[1], Subst::Var { index: 0, negate: false });
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_z = Series::from_coeffs(
            "z",
            vec![Poly::one(LeadVar::P), Poly::constant(LeadVar::P, -1), Poly::zero(LeadVar::P), Poly::zero(LeadVar::P)],
        );
        let inv = one_minus_z.inv().unwrap();
        assert_eq!(inv.integer_coeffs().unwrap(), vec![BigInt::from(1); 4]);
        assert_eq!(Series::one("z", 4).inv().unwrap(), Series::one("z", 4));
        let bad = Series::from_coeffs("z", vec![Poly::constant(LeadVar::P, 2)]);
        assert!(matches!(bad.inv(), Err(Error::NonUnitConstantTerm)));
    }

    #[test]
    fn transfer_matrices() {
        assert_eq!(mat_word(&Turn::parse_word("LR").unwrap()), Mat4::identity());
        assert_eq!(mat_word(&Turn::parse_word("LLLLLL").unwrap()), Mat4::identity().neg());
        assert_eq!(mat_word(&Turn::parse_word("LRRLLLLRLLRLLL").unwrap()), Mat4::identity().neg());
        assert_eq!(Mat4::left() * Mat4::left().pow(0), Mat4::left());
        assert_eq!(left_power(-2), Mat4::right() * Mat4::right());
        assert_eq!(Mat4::left().pow(6).loop_trace(), -2);
    }

    #[test]
    fn json_roundtrip_and_order() {
        let x = p(&[(5, [1, 0, 0, 0]), (1, [0; 4]), (-3, [0, 1, -1, 0])]);
        let v = x.to_json();
        let exps: Vec<Exp> = v["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| serde_json::from_value(t["exp"].clone()).unwrap())
            .collect();
        let mut sorted = exps.clone();
        sorted.sort();
        assert_eq!(exps, sorted);
        assert_eq!(Poly::from_json(&v).unwrap(), x);
    }
}
