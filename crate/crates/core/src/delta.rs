//! Semi-δ-ring arithmetic on height profiles.
//!
//! An element of `R_1` (integer combinations of `|BG|`) is tracked through
//! its images in `Z_p` at heights `n = 1, 2, ...` together with its rational
//! value at height 0. On `Z_p` the p-derivation is `δ(a) = (a - a^p) / p`.
//! A layer is *divisible* by an element whose image there is a p-adic unit
//! and *complete* when the image has positive valuation.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{binom_ext_i64, vp, ExactRational, Prime, Valuation};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::space::{AbelianGroup, HeightStrategy, SpaceExpr};

/// Decimal digits a δ-iterate may reach before evaluation is abandoned.
pub const DEFAULT_DIGIT_BUDGET: u64 = 100_000;

/// Largest `k` for which splitting elements are built by default.
pub const DEFAULT_BETA_MAX_K: u32 = 4;

/// `(a - a^p) / p` without an integrality check.
fn frobenius_defect(a: &ExactRational, p: Prime) -> ExactRational {
    let pp = ExactRational::from(p.get());
    (a - a.pow(p.get() as i64).expect("positive exponent"))
        .checked_div(&pp)
        .expect("p is nonzero")
}

/// The p-derivation `δ(a) = (a - a^p) / p` on p-integral rationals.
pub fn delta(a: &ExactRational, p: Prime) -> Result<ExactRational> {
    if vp(a, p) < 0 {
        return Err(Error::invalid(format!("δ needs a p-integral argument, {a} has negative {p}-adic valuation")));
    }
    Ok(frobenius_defect(a, p))
}

/// `δ^k(a)` with the default digit budget.
pub fn delta_iter(a: &ExactRational, p: Prime, k: u32) -> Result<ExactRational> {
    delta_iter_with_budget(a, p, k, DEFAULT_DIGIT_BUDGET)
}

pub fn delta_iter_with_budget(a: &ExactRational, p: Prime, k: u32, max_digits: u64) -> Result<ExactRational> {
    let mut x = a.clone();
    for _ in 0..k {
        // the next iterate has about p times as many digits
        if x.digit_estimate().saturating_mul(p.get()) > max_digits {
            return Err(Error::BudgetExceeded(format!("δ-iterate would exceed {max_digits} digits")));
        }
        x = delta(&x, p)?;
    }
    Ok(x)
}

/// δ at a given layer: the literal formula on the rational layer 0, the
/// p-integral derivation at positive heights.
fn delta_at_layer(a: &ExactRational, p: Prime, n: u32, max_digits: u64) -> Result<ExactRational> {
    if a.digit_estimate().saturating_mul(p.get()) > max_digits {
        return Err(Error::BudgetExceeded(format!("δ-iterate would exceed {max_digits} digits")));
    }
    if n == 0 {
        Ok(frobenius_defect(a, p))
    } else {
        delta(a, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerClass {
    /// The image is invertible: the layer is divisible by the element.
    Divisible,
    /// The image has positive valuation: the layer is complete.
    Complete,
    /// The image is exactly zero.
    Zero,
}

impl LayerClass {
    pub fn is_complete_or_zero(self) -> bool {
        matches!(self, LayerClass::Complete | LayerClass::Zero)
    }
}

impl fmt::Display for LayerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerClass::Divisible => "divisible",
            LayerClass::Complete => "complete",
            LayerClass::Zero => "zero",
        })
    }
}

/// Values `a_0, ..., a_N` of one element at heights `0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    prime: Prime,
    values: Vec<ExactRational>,
}

impl HeightProfile {
    pub fn new(prime: Prime, values: Vec<ExactRational>) -> Self {
        HeightProfile { prime, values }
    }

    pub fn constant(prime: Prime, value: ExactRational, max_height: u32) -> Self {
        HeightProfile { prime, values: vec![value; max_height as usize + 1] }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn max_height(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn value(&self, n: u32) -> Result<&ExactRational> {
        self.values
            .get(n as usize)
            .ok_or_else(|| Error::invalid(format!("height {n} is outside the profile 0..={}", self.max_height())))
    }

    pub fn valuation(&self, n: u32) -> Result<Valuation> {
        Ok(vp(self.value(n)?, self.prime))
    }

    pub fn classify_layer(&self, n: u32) -> Result<LayerClass> {
        let a = self.value(n)?;
        if a.is_zero() {
            return Ok(LayerClass::Zero);
        }
        if n == 0 {
            return Ok(LayerClass::Divisible);
        }
        Ok(if vp(a, self.prime) == 0 { LayerClass::Divisible } else { LayerClass::Complete })
    }

    pub fn classes(&self) -> Vec<LayerClass> {
        (0..=self.max_height()).map(|n| self.classify_layer(n).expect("in range")).collect()
    }

    fn zip_with(&self, other: &HeightProfile, f: impl Fn(&ExactRational, &ExactRational) -> ExactRational) -> Result<HeightProfile> {
        if self.prime != other.prime || self.values.len() != other.values.len() {
            return Err(Error::invalid("profiles differ in prime or length"));
        }
        Ok(HeightProfile {
            prime: self.prime,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn pointwise_add(&self, other: &HeightProfile) -> Result<HeightProfile> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn pointwise_mul(&self, other: &HeightProfile) -> Result<HeightProfile> {
        self.zip_with(other, |a, b| a * b)
    }
}

/// `|X|_n` for `n = 0..=max_height`.
pub fn height_profile(x: &SpaceExpr, p: Prime, max_height: u32) -> HeightProfile {
    HeightProfile {
        prime: p,
        values: (0..=max_height).map(|n| x.height_cardinality(p, n)).collect(),
    }
}

/// An element of `R_1` as a semi-δ-ring expression over group symbols `[BG]`.
#[derive(Debug, Clone)]
pub enum R1Element {
    Constant(BigInt),
    Classifying(Arc<FiniteGroup>),
    Sum(Vec<R1Element>),
    Scaled(BigInt, Box<R1Element>),
    Product(Vec<R1Element>),
    Delta(Box<R1Element>),
}

impl R1Element {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        R1Element::Constant(c.into())
    }

    pub fn classifying(g: FiniteGroup) -> Self {
        R1Element::Classifying(Arc::new(g))
    }

    pub fn scaled(self, c: impl Into<BigInt>) -> Self {
        R1Element::Scaled(c.into(), Box::new(self))
    }

    pub fn delta(self) -> Self {
        R1Element::Delta(Box::new(self))
    }

    /// Image at height `n`.
    pub fn evaluate(&self, p: Prime, n: u32) -> Result<ExactRational> {
        self.evaluate_with_budget(p, n, DEFAULT_DIGIT_BUDGET)
    }

    pub fn evaluate_with_budget(&self, p: Prime, n: u32, max_digits: u64) -> Result<ExactRational> {
        Ok(match self {
            R1Element::Constant(c) => ExactRational::from(c.clone()),
            R1Element::Classifying(g) => SpaceExpr::Classifying(g.clone()).height_cardinality(p, n),
            R1Element::Sum(parts) => parts
                .iter()
                .map(|x| x.evaluate_with_budget(p, n, max_digits))
                .sum::<Result<ExactRational>>()?,
            R1Element::Scaled(c, x) => ExactRational::from(c.clone()) * x.evaluate_with_budget(p, n, max_digits)?,
            R1Element::Product(parts) => parts
                .iter()
                .map(|x| x.evaluate_with_budget(p, n, max_digits))
                .product::<Result<ExactRational>>()?,
            R1Element::Delta(x) => delta_at_layer(&x.evaluate_with_budget(p, n, max_digits)?, p, n, max_digits)?,
        })
    }

    pub fn profile(&self, p: Prime, max_height: u32) -> Result<HeightProfile> {
        let values = (0..=max_height).map(|n| self.evaluate(p, n)).collect::<Result<_>>()?;
        Ok(HeightProfile { prime: p, values })
    }
}

impl Add for R1Element {
    type Output = R1Element;
    fn add(self, rhs: R1Element) -> R1Element {
        R1Element::Sum(vec![self, rhs])
    }
}

impl Sub for R1Element {
    type Output = R1Element;
    fn sub(self, rhs: R1Element) -> R1Element {
        R1Element::Sum(vec![self, rhs.scaled(-1)])
    }
}

impl Mul for R1Element {
    type Output = R1Element;
    fn mul(self, rhs: R1Element) -> R1Element {
        R1Element::Product(vec![self, rhs])
    }
}

/// The splitting element `β_(k)`: complete at height `k`, divisible above.
#[derive(Debug, Clone)]
pub struct Beta {
    pub prime: Prime,
    pub k: u32,
    /// The unit `b` subtracted from `γ = δ^(k-1)|BC_p|`; absent for `k = 0`.
    pub offset: Option<u64>,
    pub element: R1Element,
}

impl Beta {
    pub fn profile(&self, max_height: u32) -> Result<HeightProfile> {
        self.element.profile(self.prime, max_height)
    }
}

pub fn beta_element(p: Prime, k: u32) -> Result<Beta> {
    beta_element_with_limit(p, k, DEFAULT_BETA_MAX_K)
}

/// `β_(0) = p|BC_p| - 1`; for `k >= 1`, `β_(k) = δ^(k-1)|BC_p| - b` with
/// `b` in `1..p` congruent to the height-k image of `δ^(k-1)|BC_p|`.
pub fn beta_element_with_limit(p: Prime, k: u32, max_k: u32) -> Result<Beta> {
    if k > max_k {
        return Err(Error::BudgetExceeded(format!("β_({k}) is beyond the iterate limit {max_k}")));
    }
    let bcp = R1Element::classifying(FiniteGroup::cyclic(p.get() as usize));
    if k == 0 {
        let element = bcp.scaled(p.get()) - R1Element::constant(1);
        return Ok(Beta { prime: p, k, offset: None, element });
    }
    let gamma = (1..k).fold(bcp, |x, _| x.delta());
    let at_k = gamma.evaluate(p, k)?;
    let b = at_k
        .residue_mod(p)
        .filter(|&r| r != 0)
        .ok_or_else(|| Error::invalid(format!("γ_{k} = {at_k} is not a {p}-adic unit")))?;
    let element = gamma - R1Element::constant(b);
    Ok(Beta { prime: p, k, offset: Some(b), element })
}

/// `α = β_(0) ⋯ β_(k)` evaluated on heights `0..=max_height`.
pub fn alpha_splitter(p: Prime, k: u32, max_height: u32) -> Result<HeightProfile> {
    if k > max_height {
        return Err(Error::invalid(format!("k = {k} exceeds the profile length {max_height}")));
    }
    let mut acc = HeightProfile::constant(p, ExactRational::one(), max_height);
    for j in 0..=k {
        acc = acc.pointwise_mul(&beta_element(p, j)?.profile(max_height)?)?;
    }
    Ok(acc)
}

/// How the two sides of the wreath identity relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WreathSign {
    /// `lhs = rhs ≠ 0`
    Plus,
    /// `lhs = -rhs ≠ 0`
    Minus,
    /// both sides vanish
    Either,
    /// `|lhs| ≠ |rhs|`
    Neither,
}

impl WreathSign {
    /// Whether a collection of signs is consistent with one global sign.
    pub fn uniform(signs: impl IntoIterator<Item = WreathSign>) -> Option<WreathSign> {
        let mut seen = WreathSign::Either;
        for s in signs {
            match (seen, s) {
                (_, WreathSign::Neither) => return None,
                (_, WreathSign::Either) => {}
                (WreathSign::Either, s) => seen = s,
                (a, b) if a == b => {}
                _ => return None,
            }
        }
        Some(seen)
    }
}

impl fmt::Display for WreathSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WreathSign::Plus => "+1",
            WreathSign::Minus => "-1",
            WreathSign::Either => "either",
            WreathSign::Neither => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathReport {
    pub height: u32,
    /// `δ(|BG|_n)` by the Frobenius-defect formula.
    pub lhs: ExactRational,
    /// `|B(G wr C_p)|_n - |B(C_p x G)|_n`.
    pub rhs: ExactRational,
    pub sign: WreathSign,
}

/// Evaluate both sides of `δ|BG| = ±(|B(G wr C_p)| - |B(C_p x G)|)` at height `n`.
pub fn verify_wreath_identity(g: &FiniteGroup, p: Prime, n: u32) -> Result<WreathReport> {
    verify_wreath_identity_with_cap(g, p, n, DEFAULT_ORDER_CAP)
}

pub fn verify_wreath_identity_with_cap(g: &FiniteGroup, p: Prime, n: u32, cap: usize) -> Result<WreathReport> {
    let wreath = g.wreath_cyclic(p.get() as usize, cap)?;
    let product = FiniteGroup::cyclic(p.get() as usize).direct_product(g, cap)?;
    let card = |h: FiniteGroup| SpaceExpr::classifying(h).height_cardinality(p, n);
    let lhs = delta_at_layer(&card(g.clone()), p, n, DEFAULT_DIGIT_BUDGET)?;
    let rhs = card(wreath) - card(product);
    let sign = if lhs.is_zero() && rhs.is_zero() {
        WreathSign::Either
    } else if lhs == rhs {
        WreathSign::Plus
    } else if lhs == -&rhs {
        WreathSign::Minus
    } else {
        WreathSign::Neither
    };
    Ok(WreathReport { height: n, lhs, rhs, sign })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkRelationReport {
    pub prime: u64,
    pub height: u32,
    /// `(k, |B^k C_p|_n)` for `k = n..=kmax`.
    pub values: Vec<(u32, ExactRational)>,
    pub holds: bool,
}

/// Check `p_(k) = p_(n)^((-1)^(k-n))` at height `n` for `n <= k <= kmax`,
/// where `p_(k) = |B^k C_p|_n` is evaluated by loop recursion.
pub fn pk_relation_check(p: Prime, n: u32, kmax: u32) -> Result<PkRelationReport> {
    let pk = |k: u32| -> Result<ExactRational> {
        let x = SpaceExpr::eilenberg_maclane(AbelianGroup::cyclic(p.get()), k)?;
        Ok(x.height_cardinality_with(p, n, HeightStrategy::LoopRecursion))
    };
    let base = pk(n)?;
    let mut values = Vec::new();
    let mut holds = true;
    for k in n..=kmax {
        let v = pk(k)?;
        let sign = if (k - n) % 2 == 0 { 1 } else { -1 };
        let expected = base.pow(sign).ok_or_else(|| Error::invalid("p_(n) vanished"))?;
        // independent closed form p^C(n-1,k)
        let closed = ExactRational::int_pow(p.get(), binom_ext_i64(n as i64 - 1, k as i64)?).expect("p != 0");
        holds &= v == expected && v == closed;
        values.push((k, v));
    }
    Ok(PkRelationReport { prime: p.get(), height: n, values, holds })
}
