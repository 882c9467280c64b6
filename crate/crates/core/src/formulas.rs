//! Exact evaluation of the path and cycle counting formulas.
//!
//! Everything is integer arithmetic over a [`Count`] scalar. Values that do
//! not fit the digit budget are kept in factored form only; recursions whose
//! intermediate values are needed in full fail with
//! [`FormulaError::OverBudget`] instead.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ClassGroup, ClassObject};
use crate::enumerate::{enumerate, EnumError, EnumOptions};
use crate::graph::{build_inscribed, build_overall, BuildOptions, GraphError};
use crate::lattice::triangular;
use crate::paths::PathFamily;
use crate::scalar::{checked_pow, lift, Count};

pub const DEFAULT_DIGIT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{quantity}({n},{k}): {numerator} is not divisible by {divisor}; the v-shape model is inconsistent here")]
    Divisibility { quantity: &'static str, n: u64, k: u32, numerator: String, divisor: String },
    #[error("{quantity}({n},{k}) does not fit the chosen integer type")]
    Overflow { quantity: &'static str, n: u64, k: u32 },
    #[error("{quantity}({n},{k}) needs about {digits} decimal digits, over the budget of {budget}")]
    OverBudget { quantity: &'static str, n: u64, k: u32, digits: u64, budget: u64 },
    #[error("classification groups do not fit order {n}: {reason}")]
    InvalidGroups { n: u64, reason: String },
    #[error("{quantity} is undefined for n={n}, k={k}")]
    Degenerate { quantity: &'static str, n: u64, k: u32 },
    #[error("base counts for n={n} are inconsistent: {reason}")]
    InvalidBase { n: u64, reason: String },
}

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "enumerated")]
    Enumerated,
    #[serde(rename = "paper-table")]
    PublishedTable,
    #[serde(rename = "cache")]
    Cache,
    #[serde(rename = "formula")]
    Formula,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Enumerated => "enumerated",
            Provenance::PublishedTable => "paper-table",
            Provenance::Cache => "cache",
            Provenance::Formula => "formula",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counts on the base grids of order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCounts {
    pub n: u64,
    pub h: u64,
    pub w: u64,
    pub s: u64,
    pub z: u64,
    pub c: u64,
    pub d: u64,
    pub provenance: Provenance,
}

impl BaseCounts {
    /// Coverings of one small grid that may lose a corner: `H_n + Z_n`.
    pub fn y(&self) -> u64 {
        self.h + self.z
    }

    pub fn validate(&self) -> Result<(), FormulaError> {
        if self.w != self.s {
            return Err(FormulaError::InvalidBase {
                n: self.n,
                reason: format!("W_n = {} but S_n = {}", self.w, self.s),
            });
        }
        if self.h == 0 {
            return Err(FormulaError::InvalidBase { n: self.n, reason: "H_n = 0".into() });
        }
        Ok(())
    }

    /// Enumerates all six families on the order-`n` base grids.
    pub fn enumerate(n: u64, opts: &EnumOptions) -> Result<Self, BaseCountError> {
        let inscribed = build_inscribed(n, 1, &BuildOptions::default())?;
        let overall = build_overall(n, 1, &BuildOptions::default())?;
        let mut out = [0u64; 6];
        for (slot, family) in out.iter_mut().zip(PathFamily::ALL) {
            let g = if family.graph_family() == crate::graph::Family::Inscribed { &inscribed } else { &overall };
            let r = enumerate(family, g, opts)?;
            if !r.complete {
                return Err(BaseCountError::Incomplete(family));
            }
            *slot = r.count;
        }
        let [h, w, z, c, s, d] = out;
        Ok(BaseCounts { n, h, w, s, z, c, d, provenance: Provenance::Enumerated })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseCountError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error("{0} enumeration ran out of budget")]
    Incomplete(PathFamily),
}

/// `scalar * prod(base^exp)`. Exponents are arbitrary precision so towers
/// such as `S_n^{(T_n+1)^{k-1}}` stay representable when the value is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factored {
    pub scalar: BigUint,
    pub terms: Vec<(BigUint, BigUint)>,
}

impl Factored {
    pub fn scalar(v: impl Into<BigUint>) -> Self {
        Factored { scalar: v.into(), terms: Vec::new() }
    }

    pub fn power(base: impl Into<BigUint>, exp: impl Into<BigUint>) -> Self {
        Factored { scalar: BigUint::one(), terms: vec![(base.into(), exp.into())] }.tidy()
    }

    pub fn times(mut self, other: Factored) -> Self {
        self.scalar *= other.scalar;
        self.terms.extend(other.terms);
        self.tidy()
    }

    /// Drops unit terms and zero exponents; merges equal bases.
    fn tidy(self) -> Self {
        let mut merged: Vec<(BigUint, BigUint)> = Vec::new();
        for (b, e) in self.terms {
            if b.is_one() || e.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(mb, _)| *mb == b) {
                Some((_, me)) => *me += e,
                None => merged.push((b, e)),
            }
        }
        Factored { scalar: self.scalar, terms: merged }
    }

    /// Approximate number of decimal digits of the value.
    pub fn digits_estimate(&self) -> f64 {
        let log = |v: &BigUint| big_log10(v);
        log(&self.scalar)
            + self.terms.iter().map(|(b, e)| e.to_f64().unwrap_or(f64::INFINITY) * log(b)).sum::<f64>()
            + 1.0
    }

    /// Multiplies out, subject to a digit budget and the range of `C`.
    pub fn expand<C: Count>(&self, digit_budget: u64) -> Option<C> {
        if self.scalar.is_zero() {
            return Some(C::zero());
        }
        if self.digits_estimate() > digit_budget as f64 + 1.0 {
            return None;
        }
        let mut acc = C::from_biguint(&self.scalar)?;
        for (b, e) in &self.terms {
            acc = acc.checked_mul(&checked_pow(&C::from_biguint(b)?, e)?)?;
        }
        Some(acc)
    }

    /// The same number over prime bases, e.g. `8·16^3600` as `2^14403`.
    pub fn normalized(&self) -> Option<Factored> {
        let terms: Vec<_> = self.prime_exponents()?.into_iter().rev().map(|(p, e)| (BigUint::from(p), e)).collect();
        Some(Factored { scalar: BigUint::one(), terms }.tidy())
    }

    /// Prime factorisation as `prime -> exponent`, `None` if some base is too
    /// large for trial division.
    pub fn prime_exponents(&self) -> Option<BTreeMap<u64, BigUint>> {
        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
        let mut add = |v: &BigUint, times: &BigUint| -> Option<()> {
            for (p, e) in factor_u64(v.to_u64()?) {
                *out.entry(p).or_default() += times * BigUint::from(e);
            }
            Some(())
        };
        add(&self.scalar, &BigUint::one())?;
        for (b, e) in &self.terms {
            add(b, e)?;
        }
        Some(out)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.scalar.is_one() || self.terms.is_empty() {
            parts.push(self.scalar.to_string());
        }
        for (b, e) in &self.terms {
            if e.is_one() {
                parts.push(b.to_string());
            } else {
                parts.push(format!("{b}^{e}"));
            }
        }
        f.write_str(&parts.join("·"))
    }
}

fn big_log10(v: &BigUint) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(f64::log10).unwrap_or(0.0);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(1.0);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

fn factor_u64(mut v: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        let mut e = 0;
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

/// A formula output: the value when it fits the digit budget, and a
/// factored form when the formula has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountValue<C> {
    pub value: Option<C>,
    pub factored: Option<Factored>,
}

impl<C: Count> CountValue<C> {
    fn exact(value: C) -> Self {
        CountValue { value: Some(value), factored: None }
    }

    /// The value, or the error that explains why it is absent.
    fn require(&self, quantity: &'static str, n: u64, k: u32, budget: u64) -> Result<&C, FormulaError> {
        self.value.as_ref().ok_or_else(|| FormulaError::OverBudget {
            quantity,
            n,
            k,
            digits: self.factored.as_ref().map(|f| f.digits_estimate() as u64).unwrap_or(u64::MAX),
            budget,
        })
    }

    /// Human form: factored when present, else decimal.
    pub fn display(&self) -> String {
        match (&self.factored, &self.value) {
            (Some(f), _) => f.to_string(),
            (None, Some(v)) => v.to_string(),
            (None, None) => "?".into(),
        }
    }

    /// `{ "quantity", "n", "k", "factored", "scalar", "decimal", "provenance" }`.
    pub fn to_json(&self, quantity: &str, n: u64, k: u32, provenance: serde_json::Value) -> serde_json::Value {
        let (factored, scalar) = match &self.factored {
            Some(f) => (
                f.terms.iter().map(|(b, e)| serde_json::json!([b.to_string(), e.to_string()])).collect::<Vec<_>>(),
                serde_json::Value::String(f.scalar.to_string()),
            ),
            None => (Vec::new(), serde_json::Value::Null),
        };
        serde_json::json!({
            "quantity": quantity,
            "n": n,
            "k": k,
            "factored": factored,
            "scalar": scalar,
            "decimal": self.value.as_ref().map(|v| v.to_string()),
            "provenance": provenance,
        })
    }
}

impl CountValue<BigUint> {
    /// True when both forms (where present) denote the same number.
    pub fn same_number(&self, other: &CountValue<BigUint>) -> bool {
        match (&self.value, &other.value) {
            (Some(a), Some(b)) => a == b,
            _ => match (&self.factored, &other.factored) {
                (Some(a), Some(b)) => a.prime_exponents().is_some() && a.prime_exponents() == b.prime_exponents(),
                _ => false,
            },
        }
    }
}

fn from_factored<C: Count>(
    f: Factored,
    budget: u64,
    quantity: &'static str,
    n: u64,
    k: u32,
) -> Result<CountValue<C>, FormulaError> {
    let value = f.expand::<C>(budget);
    if value.is_none() && f.digits_estimate() <= budget as f64 + 1.0 {
        return Err(FormulaError::Overflow { quantity, n, k });
    }
    Ok(CountValue { value, factored: Some(f) })
}

fn check_nk(quantity: &'static str, n: u64, k: u32) -> Result<(), FormulaError> {
    if n < 2 || k < 1 {
        return Err(FormulaError::Degenerate { quantity, n, k });
    }
    Ok(())
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Tiling paths on `O_n(k)`: `S_{n,k} = S_n^{(T_n+1)^{k-1}}`.
pub fn spaths_count<C: Count>(n: u64, k: u32, base: &BaseCounts, budget: u64) -> Result<CountValue<C>, FormulaError> {
    check_nk("spaths", n, k)?;
    let exp = num_traits::pow(big(triangular(n) + 1), (k - 1) as usize);
    from_factored(Factored::power(base.s, exp), budget, "spaths", n, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Recursive,
    Explicit,
}

/// Tiling cycles on `O_n(k)`.
///
/// Recursive: `D_{n,k} = D_n S_{n,k-1}^{T_n^{k-1}}`, raising the value of
/// `S_{n,k-1}`. Explicit: `D_n (S_n^{(T_n+1)^{k-2}})^{T_n^{k-1}}` as a
/// single power of `S_n`.
pub fn dcycles_count<C: Count>(
    n: u64,
    k: u32,
    base: &BaseCounts,
    budget: u64,
    variant: Variant,
) -> Result<CountValue<C>, FormulaError> {
    check_nk("dcycles", n, k)?;
    if k == 1 {
        return from_factored(Factored::scalar(base.d), budget, "dcycles", n, k);
    }
    let copies = num_traits::pow(big(triangular(n)), (k - 1) as usize);
    match variant {
        Variant::Explicit => {
            let exp = num_traits::pow(big(triangular(n) + 1), (k - 2) as usize) * &copies;
            from_factored(Factored::scalar(base.d).times(Factored::power(base.s, exp)), budget, "dcycles", n, k)
        }
        Variant::Recursive => {
            let prev: CountValue<C> = spaths_count(n, k - 1, base, budget)?;
            let prev_f = prev.factored.clone().expect("spaths are factored");
            let factored = Factored::scalar(base.d).times(Factored {
                scalar: BigUint::one(),
                terms: prev_f.terms.iter().map(|(b, e)| (b.clone(), e * &copies)).collect(),
            });
            if factored.digits_estimate() > budget as f64 + 1.0 {
                return Ok(CountValue { value: None, factored: Some(factored) });
            }
            let prev_v = prev.require("spaths", n, k - 1, budget)?;
            let value = checked_pow(prev_v, &copies)
                .and_then(|p| p.checked_mul(&lift::<C>(base.d)))
                .ok_or(FormulaError::Overflow { quantity: "dcycles", n, k })?;
            Ok(CountValue { value: Some(value), factored: Some(factored) })
        }
    }
}

/// Checks classification groups against the base counts.
fn check_groups(n: u64, groups: &[ClassGroup], object: ClassObject, total: u64) -> Result<(), FormulaError> {
    let bad = |reason: String| Err(FormulaError::InvalidGroups { n, reason });
    if groups.is_empty() {
        return bad("no groups".into());
    }
    for g in groups {
        if g.n != n || g.object != object {
            return bad(format!("group for {} n={} mixed in", g.object, g.n));
        }
        if g.v_count + g.pure_count != triangular(n) {
            return bad(format!("{} + {} != T_n", g.pure_count, g.v_count));
        }
    }
    let sum: u64 = groups.iter().map(|g| g.multiplicity).sum();
    if sum != total {
        return bad(format!("multiplicities sum to {sum}, expected {total}"));
    }
    Ok(())
}

fn digits_of<C: Count>(v: &C) -> f64 {
    big_log10(&v.to_biguint())
}

/// `sum_m mult_m * prev^{pure_m} * (prev * Y_n / H_n)^{v_m}`.
fn grouped_sum<C: Count>(
    quantity: &'static str,
    n: u64,
    k: u32,
    base: &BaseCounts,
    groups: &[ClassGroup],
    prev: &C,
    budget: u64,
) -> Result<C, FormulaError> {
    let h = lift::<C>(base.h);
    let numerator = prev.checked_mul(&lift::<C>(base.y())).ok_or(FormulaError::Overflow { quantity, n, k })?;
    let (ratio, rem) = numerator.div_rem(&h);
    if !rem.is_zero() {
        return Err(FormulaError::Divisibility {
            quantity,
            n,
            k,
            numerator: numerator.to_string(),
            divisor: h.to_string(),
        });
    }
    let (dp, dr) = (digits_of(prev), digits_of(&ratio));
    let mut acc = C::zero();
    for g in groups {
        let digits = (g.multiplicity as f64).log10() + g.pure_count as f64 * dp + g.v_count as f64 * dr;
        if digits > budget as f64 {
            return Err(FormulaError::OverBudget { quantity, n, k, digits: digits as u64, budget });
        }
        let term = checked_pow(prev, &big(g.pure_count))
            .and_then(|a| checked_pow(&ratio, &big(g.v_count)).and_then(|b| a.checked_mul(&b)))
            .and_then(|p| p.checked_mul(&lift::<C>(g.multiplicity)))
            .and_then(|t| acc.checked_add(&t))
            .ok_or(FormulaError::Overflow { quantity, n, k })?;
        acc = term;
    }
    Ok(acc)
}

/// Hamiltonian paths on `I_n^k` from the W-path classification of order `n`.
pub fn hpaths_count<C: Count>(
    n: u64,
    k: u32,
    base: &BaseCounts,
    groups: &[ClassGroup],
    budget: u64,
) -> Result<CountValue<C>, FormulaError> {
    check_nk("hpaths", n, k)?;
    if n == 2 {
        return Ok(CountValue::exact(C::one()));
    }
    base.validate()?;
    if k == 1 {
        return Ok(CountValue::exact(lift(base.h)));
    }
    check_groups(n, groups, ClassObject::Wpath, base.w)?;
    let mut prev: C = lift(base.h);
    for level in 2..=k {
        prev = grouped_sum("hpaths", n, level, base, groups, &prev, budget)?;
    }
    Ok(CountValue::exact(prev))
}

/// `H_{3,k} = 10^a 2^{6^{k-1} - a}` with `a = sum_{i=0}^{k-2} 6^i`.
pub fn hpaths_closed_n3<C: Count>(k: u32, budget: u64) -> Result<CountValue<C>, FormulaError> {
    if k < 2 {
        return Err(FormulaError::Degenerate { quantity: "hpaths_closed_n3", n: 3, k });
    }
    let six = big(6);
    let a: BigUint = (0..=(k - 2) as usize).map(|i| num_traits::pow(six.clone(), i)).sum();
    let twos = num_traits::pow(six, (k - 1) as usize) - &a;
    let f = Factored { scalar: BigUint::one(), terms: vec![(big(10), a), (big(2), twos)] };
    from_factored(f, budget, "hpaths", 3, k)
}

/// Hamiltonian cycles on `I_n^k` from the well-formed cycle classification
/// of order `n` (and the W-path classification for `H_{n,k-1}`).
pub fn ccycles_count<C: Count>(
    n: u64,
    k: u32,
    base: &BaseCounts,
    cycle_groups: &[ClassGroup],
    path_groups: &[ClassGroup],
    budget: u64,
) -> Result<CountValue<C>, FormulaError> {
    check_nk("ccycles", n, k)?;
    if n == 2 {
        return Ok(CountValue::exact(C::one()));
    }
    base.validate()?;
    if k == 1 {
        return Ok(CountValue::exact(lift(base.c)));
    }
    check_groups(n, cycle_groups, ClassObject::Dcycle, base.d)?;
    let prev = hpaths_count::<C>(n, k - 1, base, path_groups, budget)?;
    let prev = prev.require("hpaths", n, k - 1, budget)?;
    Ok(CountValue::exact(grouped_sum("ccycles", n, k, base, cycle_groups, prev, budget)?))
}

/// Well-formed Hamiltonian paths and cycles on `I_n^k`, which number the
/// same as tiling paths and cycles on `O_n(k)`.
pub fn wellformed_counts<C: Count>(
    n: u64,
    k: u32,
    base: &BaseCounts,
    budget: u64,
) -> Result<(CountValue<C>, CountValue<C>), FormulaError> {
    Ok((spaths_count(n, k, base, budget)?, dcycles_count(n, k, base, budget, Variant::Explicit)?))
}
