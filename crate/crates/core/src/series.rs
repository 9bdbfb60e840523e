//! Exact truncated power series and the catalog of counting functions.
//!
//! Everything here is exact: coefficients are `BigRational`, or Laurent
//! polynomials over `BigRational` for the bivariate entries. Bivariate
//! functions are series in the size variable whose coefficients are Laurent
//! polynomials in the statistic variable; negative powers are allowed in
//! intermediate results and must cancel before a table is produced.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_ORDER: usize = 12;
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("denominator has no invertible constant term")]
    ZeroConstantTerm,
    #[error("coefficient {requested} requested from a series truncated at order {order}")]
    OrderExceeded { requested: usize, order: usize },
    #[error("coefficient {index} is {value}, not a nonnegative integer")]
    NonIntegerCount { index: usize, value: String },
    #[error("negative power t^{power} survives at size {size}")]
    NegativeDegreeResidue { size: usize, power: i64 },
    #[error("statistic degree {power} exceeds size {size}")]
    DegreeExceedsSize { size: usize, power: i64 },
    #[error("series is not divisible by x^{0}")]
    NotDivisible(usize),
    #[error("order {requested} exceeds the configured cap {cap}")]
    OrderCap { requested: usize, cap: usize },
    #[error("{family} is defined only for n >= {min}, got {n}")]
    OutOfDomain { family: ClosedForm, n: usize, min: usize },
}

/// Coefficient ring for [`Series`].
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Laurent polynomial `Σ c_k t^k` with finitely many nonzero terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn monomial(coeff: BigRational, power: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&coeff) {
            terms.insert(power, coeff);
        }
        Self { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// From `(power, integer coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::default(), |acc, &(p, c)| acc.add(&Self::monomial(rat(c), p)))
    }

    pub fn coefficient(&self, power: i64) -> BigRational {
        self.terms.get(&power).cloned().unwrap_or_else(<BigRational as Zero>::zero)
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&p, c)| (p, c))
    }

    pub fn shift(&self, by: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&p, c)| (p + by, c.clone())).collect() }
    }

    /// Value at `t = 1`.
    pub fn at_one(&self) -> BigRational {
        self.terms.values().fold(<BigRational as Zero>::zero(), |acc, c| acc + c)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*t^{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            let e = terms.entry(*p).or_insert_with(<BigRational as Zero>::zero);
            *e += c;
            if Zero::is_zero(e) {
                terms.remove(p);
            }
        }
        Self { terms }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out = out.add(&Self::monomial(a * b, p + q));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&p, c)| (p, -c)).collect() }
    }
    fn try_inverse(&self) -> Option<Self> {
        // only monomials are units
        match self.terms.len() {
            1 => {
                let (&p, c) = self.terms.iter().next().unwrap();
                Some(Self::monomial(c.recip(), -p))
            }
            _ => None,
        }
    }
}

/// Power series truncated at `order` (inclusive), `coeffs.len() == order + 1`.
#[derive(Clone, PartialEq)]
pub struct Series<C: Ring> {
    coeffs: Vec<C>,
}

pub type RationalSeries = Series<BigRational>;
/// Series in the size variable over Laurent polynomials in the statistic variable.
pub type LaurentSeries = Series<LaurentPoly>;

impl<C: Ring> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<C: Ring> Series<C> {
    /// Polynomial truncated or zero-padded to `order`.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(vec![], order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_coeffs(vec![C::one()], order)
    }

    /// `c · x^k`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&C, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::OrderExceeded { requested: n, order: self.order() })
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = self.order().min(other.order());
        Self { coeffs: (0..=order).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, C::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, C::sub)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Self { coeffs }
    }

    /// `self / other` by power-series long division.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let order = self.order().min(other.order());
        let lead_inv = other.coeffs[0].try_inverse().ok_or(SeriesError::ZeroConstantTerm)?;
        let mut q: Vec<C> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if !other.coeffs[k].is_zero() {
                    acc = acc.sub(&other.coeffs[k].mul(&q[n - k]));
                }
            }
            q.push(acc.mul(&lead_inv));
        }
        Ok(Self { coeffs: q })
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        Self::one(self.order()).div(self)
    }

    /// Multiply by `x^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![C::zero(); k.min(order + 1)];
        coeffs.extend(self.coeffs.iter().take(order + 1 - coeffs.len()).cloned());
        Self { coeffs }
    }

    /// Divide by `x^k`; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::NotDivisible(k));
        }
        Ok(Self { coeffs: self.coeffs[k..].to_vec() })
    }
}

impl RationalSeries {
    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect(), order)
    }

    /// Coefficient as a count: must be a nonnegative integer.
    pub fn count_coefficient(&self, n: usize) -> Result<BigUint, SeriesError> {
        rational_to_count(n, self.coefficient(n)?)
    }

    pub fn counts(&self) -> Result<Vec<BigUint>, SeriesError> {
        (0..=self.order()).map(|n| self.count_coefficient(n)).collect()
    }

    pub fn lift(&self) -> LaurentSeries {
        Series { coeffs: self.coeffs.iter().cloned().map(LaurentPoly::constant).collect() }
    }
}

impl LaurentSeries {
    /// Multiply every coefficient by `t^k` (k may be negative).
    pub fn shift_statistic(&self, k: i64) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.shift(k)).collect() }
    }

    /// Specialize the statistic variable to 1.
    pub fn at_statistic_one(&self) -> RationalSeries {
        Series { coeffs: self.coeffs.iter().map(LaurentPoly::at_one).collect() }
    }
}

fn rational_to_count(index: usize, value: &BigRational) -> Result<BigUint, SeriesError> {
    let bad = || SeriesError::NonIntegerCount { index, value: value.to_string() };
    if !value.is_integer() || value.is_negative() {
        return Err(bad());
    }
    value.to_integer().to_biguint().ok_or_else(bad)
}

/// Expansion of `numerator / denominator` up to `order`.
pub fn expand_rational(
    numerator: &[BigRational],
    denominator: &[BigRational],
    order: usize,
) -> Result<RationalSeries, SeriesError> {
    if denominator.first().is_none_or(Zero::is_zero) {
        return Err(SeriesError::ZeroConstantTerm);
    }
    let num = Series::from_coeffs(numerator.to_vec(), order);
    let den = Series::from_coeffs(denominator.to_vec(), order);
    num.div(&den)
}

/// Product of integer polynomials given lowest degree first.
pub fn poly_product(factors: &[&[i64]]) -> Vec<BigRational> {
    factors.iter().fold(vec![rat(1)], |acc, f| {
        let mut out = vec![rat(0); acc.len() + f.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, &b) in f.iter().enumerate() {
                out[i + j] += a * rat(b);
            }
        }
        out
    })
}

/// `F_m` with `F_1 = F_2 = 1` (and `F_0 = 0`).
pub fn fibonacci(m: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..m {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Which formal variable marks which quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableRoles {
    pub size_variable: String,
    pub statistic_variable: Option<String>,
    pub statistic: Option<String>,
}

impl VariableRoles {
    fn univariate() -> Self {
        Self { size_variable: "x".into(), statistic_variable: None, statistic: None }
    }

    fn bivariate(size: &str, stat: &str) -> Self {
        Self { size_variable: size.into(), statistic_variable: Some(stat.into()), statistic: Some("descents".into()) }
    }
}

/// Table `c[n][k]` of a bivariate counting function, `k` the statistic degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateSeries {
    pub roles: VariableRoles,
    /// `rows[n][k]`; each row has length `n + 1` (length 1 for `n = 0`).
    pub rows: Vec<Vec<BigRational>>,
}

impl BivariateSeries {
    /// Checks that only powers `0..=n` of the statistic survive at size `n`.
    pub fn from_laurent(series: &LaurentSeries, roles: VariableRoles) -> Result<Self, SeriesError> {
        let mut rows = Vec::with_capacity(series.order() + 1);
        for (n, poly) in series.coeffs().iter().enumerate() {
            if let Some(p) = poly.min_power().filter(|&p| p < 0) {
                return Err(SeriesError::NegativeDegreeResidue { size: n, power: p });
            }
            if let Some(p) = poly.max_power().filter(|&p| p > n as i64) {
                return Err(SeriesError::DegreeExceedsSize { size: n, power: p });
            }
            rows.push((0..=n as i64).map(|k| poly.coefficient(k)).collect());
        }
        Ok(Self { roles, rows })
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<BigRational, SeriesError> {
        let row = self.rows.get(n).ok_or(SeriesError::OrderExceeded { requested: n, order: self.order() })?;
        Ok(row.get(k).cloned().unwrap_or_else(<BigRational as Zero>::zero))
    }

    pub fn count(&self, n: usize, k: usize) -> Result<BigUint, SeriesError> {
        rational_to_count(n, &self.get(n, k)?)
    }

    pub fn row_sums(&self) -> RationalSeries {
        Series::from_coeffs(
            self.rows.iter().map(|r| r.iter().fold(<BigRational as Zero>::zero(), |a, c| a + c)).collect(),
            self.order(),
        )
    }
}

/// Named entries of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GfName {
    /// Shallow 231-avoiders (equivalently 312).
    T231,
    /// Shallow 123-avoiders.
    T123,
    /// Persymmetric shallow 132-avoiders.
    P132,
    P231,
    P123,
    /// Shallow 321-avoiders; `z` marks size and `x` descents.
    A321xz,
    /// Shallow 231-avoiders starting `n (n-1)`, by descents.
    C231xt,
    /// Shallow 231-avoiders starting with `n`, by descents.
    B231xt,
    /// Shallow 231-avoiders by descents.
    T231xt,
    /// `F_{2n-1}` for `n >= 1` with constant term 1.
    FibOdd,
    /// `C(2n-2-k, k)` table of shallow 132-avoiders by descents.
    DescBinom132,
    /// Shallow permutations with at most one descent.
    Grassmannian,
}

impl GfName {
    pub const ALL: [GfName; 12] = [
        Self::T231,
        Self::T123,
        Self::P132,
        Self::P231,
        Self::P123,
        Self::A321xz,
        Self::C231xt,
        Self::B231xt,
        Self::T231xt,
        Self::FibOdd,
        Self::DescBinom132,
        Self::Grassmannian,
    ];

    pub fn is_bivariate(self) -> bool {
        matches!(self, Self::A321xz | Self::C231xt | Self::B231xt | Self::T231xt | Self::DescBinom132)
    }
}

impl fmt::Display for GfName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for GfName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|n| n.to_string().eq_ignore_ascii_case(s)).ok_or_else(|| {
            let names: Vec<String> = Self::ALL.iter().map(|n| n.to_string()).collect();
            format!("unknown generating function {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// A catalog entry with the relation `expansion · denominator = numerator`
/// it was derived from, when it has one.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Univariate {
        name: GfName,
        roles: VariableRoles,
        series: RationalSeries,
        relation: Option<(RationalSeries, RationalSeries)>,
    },
    Bivariate {
        name: GfName,
        table: BivariateSeries,
        laurent: LaurentSeries,
        relation: Option<(LaurentSeries, LaurentSeries)>,
    },
}

impl CatalogEntry {
    pub fn name(&self) -> GfName {
        match self {
            Self::Univariate { name, .. } | Self::Bivariate { name, .. } => *name,
        }
    }

    pub fn roles(&self) -> &VariableRoles {
        match self {
            Self::Univariate { roles, .. } => roles,
            Self::Bivariate { table, .. } => &table.roles,
        }
    }

    pub fn univariate(&self) -> Option<&RationalSeries> {
        match self {
            Self::Univariate { series, .. } => Some(series),
            _ => None,
        }
    }

    pub fn bivariate(&self) -> Option<&BivariateSeries> {
        match self {
            Self::Bivariate { table, .. } => Some(table),
            _ => None,
        }
    }

    /// Whether `expansion · denominator` reproduces `numerator` up to the order.
    /// Entries without a defining relation pass vacuously.
    pub fn relation_holds(&self) -> bool {
        match self {
            Self::Univariate { series, relation: Some((num, den)), .. } => {
                series.mul(den) == num.truncate(series.order())
            }
            Self::Bivariate { laurent, relation: Some((num, den)), .. } => {
                laurent.mul(den) == num.truncate(laurent.order())
            }
            _ => true,
        }
    }

    pub fn has_relation(&self) -> bool {
        matches!(self, Self::Univariate { relation: Some(_), .. } | Self::Bivariate { relation: Some(_), .. })
    }

    /// Every coefficient (every table cell for bivariate entries) is a nonnegative integer.
    pub fn check_counts(&self) -> Result<(), SeriesError> {
        match self {
            Self::Univariate { series, .. } => series.counts().map(drop),
            Self::Bivariate { table, .. } => {
                for n in 0..=table.order() {
                    for k in 0..=n {
                        table.count(n, k)?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn rational_entry(
    name: GfName,
    num: Vec<BigRational>,
    den: Vec<BigRational>,
    order: usize,
) -> Result<CatalogEntry, SeriesError> {
    let series = expand_rational(&num, &den, order)?;
    Ok(CatalogEntry::Univariate {
        name,
        roles: VariableRoles::univariate(),
        series,
        relation: Some((Series::from_coeffs(num, order), Series::from_coeffs(den, order))),
    })
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| rat(c)).collect()
}

/// `t^2 x^4 + t x^2 / (1 - x t) + 3 t^3 x^5 / (1 - x t)^2`, with the
/// relation `C · (1 - xt)^2 = numerator`.
fn c231(order: usize) -> Result<(LaurentSeries, LaurentSeries, LaurentSeries), SeriesError> {
    let t = |p: i64, c: i64| LaurentPoly::monomial(rat(c), p);
    let one_minus_xt = Series::from_coeffs(vec![t(0, 1), t(1, -1)], order);
    let den = one_minus_xt.mul(&one_minus_xt);
    let c = Series::monomial(t(2, 1), 4, order)
        .add(&Series::monomial(t(1, 1), 2, order).div(&one_minus_xt)?)
        .add(&Series::monomial(t(3, 3), 5, order).div(&den)?);
    let num = Series::monomial(t(2, 1), 4, order)
        .mul(&den)
        .add(&Series::monomial(t(1, 1), 2, order).mul(&one_minus_xt))
        .add(&Series::monomial(t(3, 3), 5, order));
    Ok((c, num, den))
}

/// `B = (x + C - C/t) / (1 - C/(x t))`.
fn b231(order: usize) -> Result<(LaurentSeries, LaurentSeries, LaurentSeries), SeriesError> {
    // C/x loses one order, so build C one step further
    let (c, _, _) = c231(order + 1)?;
    let c_over_xt = c.shift_down(1)?.shift_statistic(-1);
    let c = c.truncate(order);
    let x = Series::monomial(LaurentPoly::one(), 1, order);
    let num = x.add(&c).sub(&c.shift_statistic(-1));
    let den = Series::one(order).sub(&c_over_xt);
    Ok((num.div(&den)?, num, den))
}

fn bivariate_entry(
    name: GfName,
    laurent: LaurentSeries,
    relation: Option<(LaurentSeries, LaurentSeries)>,
    roles: VariableRoles,
) -> Result<CatalogEntry, SeriesError> {
    let table = BivariateSeries::from_laurent(&laurent, roles)?;
    Ok(CatalogEntry::Bivariate { name, table, laurent, relation })
}

pub fn catalog(name: GfName, order: usize) -> Result<CatalogEntry, SeriesError> {
    catalog_capped(name, order, MAX_ORDER)
}

pub fn catalog_capped(name: GfName, order: usize, cap: usize) -> Result<CatalogEntry, SeriesError> {
    if order > cap {
        return Err(SeriesError::OrderCap { requested: order, cap });
    }
    let xt = || VariableRoles::bivariate("x", "t");
    match name {
        GfName::T231 => rational_entry(name, ints(&[1, -3, 2, -1, -1, -1]), ints(&[1, -4, 4, -2, -1, -1]), order),
        GfName::T123 => rational_entry(
            name,
            ints(&[1, -3, 0, 11, -13, 7, 6, 3]),
            poly_product(&[&[1, -1], &[1, -1], &[1, -1], &[1, -1], &[1, 0, -4, 0, 1]]),
            order,
        ),
        GfName::P132 => {
            rational_entry(name, ints(&[1, 0, -1, 2]), poly_product(&[&[1, -1], &[1, 0, -2, 0, -1]]), order)
        }
        GfName::P231 => rational_entry(
            name,
            ints(&[-1, -1, 2, 1, -2, -1, 1, 1, 2, 0, 1]),
            ints(&[-1, 0, 4, 0, -4, 0, 2, 0, 1, 0, 1]),
            order,
        ),
        GfName::P123 => rational_entry(
            name,
            ints(&[1, 0, -2, 1, 0, 1, 1]),
            poly_product(&[&[-1, 1], &[-1, 1], &[1, 1], &[1, 0, -2, 0, -1]]),
            order,
        ),
        GfName::FibOdd => rational_entry(name, ints(&[1, -2]), ints(&[1, -3, 1]), order),
        GfName::Grassmannian => {
            rational_entry(name, ints(&[1, -3, 4, -1]), poly_product(&[&[1, -1], &[1, -1], &[1, -1], &[1, -1]]), order)
        }
        GfName::A321xz => {
            let p = LaurentPoly::from_terms;
            let num =
                Series::from_coeffs(vec![p(&[]), p(&[(0, 1)]), p(&[(0, -2), (1, 1)]), p(&[(0, 1), (1, -1)])], order);
            let den = Series::from_coeffs(
                vec![p(&[(0, 1)]), p(&[(0, -3)]), p(&[(0, 3), (1, -2)]), p(&[(0, -1), (1, 1)])],
                order,
            );
            let a = num.div(&den)?;
            bivariate_entry(name, a, Some((num, den)), VariableRoles::bivariate("z", "x"))
        }
        GfName::C231xt => {
            let (c, num, den) = c231(order)?;
            bivariate_entry(name, c, Some((num, den)), xt())
        }
        GfName::B231xt => {
            let (b, num, den) = b231(order)?;
            bivariate_entry(name, b, Some((num, den)), xt())
        }
        GfName::T231xt => {
            let (b, _, _) = b231(order)?;
            let den = Series::one(order).sub(&b);
            let t = den.inverse()?;
            bivariate_entry(name, t, Some((Series::one(order), den)), xt())
        }
        GfName::DescBinom132 => {
            let coeffs = (0..=order as i64)
                .map(|n| {
                    (0..=n).fold(LaurentPoly::default(), |acc, k| {
                        let c = BigInt::from_biguint(Sign::Plus, binomial(2 * n - 2 - k, k));
                        acc.add(&LaurentPoly::monomial(BigRational::from_integer(c), k))
                    })
                })
                .collect();
            // n = 0 carries the empty permutation
            let mut laurent = Series::from_coeffs(coeffs, order);
            laurent.coeffs[0] = LaurentPoly::one();
            bivariate_entry(name, laurent, None, xt())
        }
    }
}

/// Closed-form counts, each valid from its stated minimum size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `F_{2n-1}`: shallow avoiders of 132, 213 or 321.
    FibOddTotal,
    /// `F_{n+1}`.
    Involutions132,
    /// `ceil((n+1)/2)`.
    Centrosymmetric132,
    /// `2^{n-1}`.
    Involutions231,
    /// `2^{floor(n/2)}`.
    Centrosymmetric231,
    /// `floor(n^2/4) + 1`.
    Involutions123,
    /// `n^2/4 + 1` for even `n`, 1 for odd `n`.
    Centrosymmetric123,
    /// `F_{n+1}`.
    Involutions321,
    /// `F_{n+1}` for even `n`, `F_{n-2}` for odd `n`.
    Centrosymmetric321,
    /// `F_{n+1}`.
    Persymmetric321,
    /// `3n - 11` shallow 231-avoiders starting `n (n-1)`, `n >= 5`.
    StartsWithTopTwo231,
    /// `2 C(n-1, 3) + (n - 1)` shallow 123-avoiders with `π_1 != n` and `π_n != 1`, `n >= 3`.
    Interior123,
    /// `C(n+1, 3) + 1` shallow Grassmannian permutations, `n >= 2`.
    Grassmannian,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 13] = [
        Self::FibOddTotal,
        Self::Involutions132,
        Self::Centrosymmetric132,
        Self::Involutions231,
        Self::Centrosymmetric231,
        Self::Involutions123,
        Self::Centrosymmetric123,
        Self::Involutions321,
        Self::Centrosymmetric321,
        Self::Persymmetric321,
        Self::StartsWithTopTwo231,
        Self::Interior123,
        Self::Grassmannian,
    ];

    pub fn min_n(self) -> usize {
        match self {
            Self::StartsWithTopTwo231 => 5,
            Self::Interior123 => 3,
            Self::Grassmannian => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ClosedForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown closed form {s:?}"))
    }
}

pub fn closed_form(family: ClosedForm, n: usize) -> Result<BigUint, SeriesError> {
    if n < family.min_n() {
        return Err(SeriesError::OutOfDomain { family, n, min: family.min_n() });
    }
    let m = n as u64;
    let big = |v: u64| BigUint::from(v);
    Ok(match family {
        ClosedForm::FibOddTotal => fibonacci(2 * m - 1),
        ClosedForm::Involutions132 | ClosedForm::Involutions321 | ClosedForm::Persymmetric321 => fibonacci(m + 1),
        ClosedForm::Centrosymmetric132 => big((m + 2) / 2),
        ClosedForm::Involutions231 => BigUint::one() << (m - 1),
        ClosedForm::Centrosymmetric231 => BigUint::one() << (m / 2),
        ClosedForm::Involutions123 => big(m * m / 4 + 1),
        ClosedForm::Centrosymmetric123 => {
            if m.is_even() {
                big(m * m / 4 + 1)
            } else {
                BigUint::one()
            }
        }
        ClosedForm::Centrosymmetric321 => {
            if m.is_even() {
                fibonacci(m + 1)
            } else if m >= 3 {
                fibonacci(m - 2)
            } else {
                // F_{-1} = 1 continues the recurrence backwards
                BigUint::one()
            }
        }
        ClosedForm::StartsWithTopTwo231 => big(3 * m - 11),
        ClosedForm::Interior123 => binomial(n as i64 - 1, 3) * 2u32 + (m - 1),
        ClosedForm::Grassmannian => binomial(n as i64 + 1, 3) + 1u32,
    })
}

/// Serde helper: any `Display + FromStr` value as a JSON string.
pub mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(name: GfName, order: usize) -> Vec<u64> {
        catalog(name, order)
            .unwrap()
            .univariate()
            .unwrap()
            .counts()
            .unwrap()
            .iter()
            .map(|c| u64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn geometric_series() {
        let s = expand_rational(&ints(&[1]), &ints(&[1, -1]), 4).unwrap();
        assert_eq!(s, RationalSeries::from_integers(&[1, 1, 1, 1, 1], 4));
        assert_eq!(expand_rational(&ints(&[1]), &ints(&[0, 1]), 4), Err(SeriesError::ZeroConstantTerm));
        assert_eq!(expand_rational(&ints(&[1]), &[], 4), Err(SeriesError::ZeroConstantTerm));
    }

    // Brute-force counts of shallow 231- and 123-avoiders for n <= 5.
    #[test]
    fn avoider_count_prefixes() {
        assert_eq!(counts(GfName::T231, 5), [1, 1, 2, 5, 14, 41]);
        assert_eq!(counts(GfName::T123, 4), [1, 1, 2, 5, 13]);
        assert_eq!(counts(GfName::FibOdd, 5), [1, 1, 2, 5, 13, 34]);
    }

    #[test]
    fn coefficient_access() {
        let s = catalog(GfName::T231, 6).unwrap();
        let s = s.univariate().unwrap();
        assert_eq!(s.count_coefficient(4).unwrap(), BigUint::from(14u32));
        assert_eq!(*s.coefficient(0).unwrap(), rat(1));
        assert_eq!(s.coefficient(7), Err(SeriesError::OrderExceeded { requested: 7, order: 6 }));
        let half = RationalSeries::from_coeffs(vec![BigRational::new(1.into(), 2.into())], 0);
        assert!(matches!(half.count_coefficient(0), Err(SeriesError::NonIntegerCount { .. })));
        let neg = RationalSeries::from_integers(&[-1], 0);
        assert!(matches!(neg.count_coefficient(0), Err(SeriesError::NonIntegerCount { .. })));
    }

    #[test]
    fn fibonacci_and_binomial() {
        assert_eq!(fibonacci(7), BigUint::from(13u32));
        assert_eq!(fibonacci(9), BigUint::from(34u32));
        assert_eq!(fibonacci(1), BigUint::one());
        assert_eq!(fibonacci(2), BigUint::one());
        assert_eq!(fibonacci(100).to_string(), "354224848179261915075");
        assert_eq!(binomial(5, 1), BigUint::from(5u32));
        assert_eq!(binomial(2 * 4 - 2 - 1, 1), BigUint::from(5u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(3, -1), BigUint::zero());
        assert_eq!(binomial(-2, 0), BigUint::zero());
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
    }

    #[test]
    fn fib_odd_matches_fibonacci_and_recurrence() {
        let s = counts(GfName::FibOdd, 20);
        for n in 1..=20u64 {
            assert_eq!(BigUint::from(s[n as usize]), fibonacci(2 * n - 1));
        }
        for n in 4..=20 {
            assert_eq!(s[n] as i64, 2 * s[n - 1] as i64 + 2 * s[n - 2] as i64 - s[n - 3] as i64);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form(ClosedForm::Involutions231, 5).unwrap(), BigUint::from(16u32));
        assert_eq!(closed_form(ClosedForm::StartsWithTopTwo231, 5).unwrap(), BigUint::from(4u32));
        assert_eq!(closed_form(ClosedForm::Involutions123, 4).unwrap(), BigUint::from(5u32));
        assert_eq!(closed_form(ClosedForm::Grassmannian, 4).unwrap(), BigUint::from(11u32));
        assert_eq!(closed_form(ClosedForm::Centrosymmetric321, 1).unwrap(), BigUint::one());
        assert_eq!(closed_form(ClosedForm::Centrosymmetric321, 7).unwrap(), BigUint::from(5u32));
        assert!(matches!(closed_form(ClosedForm::StartsWithTopTwo231, 4), Err(SeriesError::OutOfDomain { .. })));
        assert!(matches!(closed_form(ClosedForm::Involutions132, 0), Err(SeriesError::OutOfDomain { .. })));
    }

    #[test]
    fn grassmannian_series_matches_closed_form() {
        let s = counts(GfName::Grassmannian, 12);
        for (n, &c) in s.iter().enumerate().skip(2) {
            assert_eq!(BigUint::from(c), closed_form(ClosedForm::Grassmannian, n).unwrap());
        }
        assert_eq!(&s[..5], [1, 1, 2, 5, 11]);
    }

    #[test]
    fn a321_row_sums_and_one_descent_column() {
        let entry = catalog(GfName::A321xz, 10).unwrap();
        let table = entry.bivariate().unwrap();
        assert_eq!(table.roles.size_variable, "z");
        assert_eq!(table.roles.statistic_variable.as_deref(), Some("x"));
        let sums = table.row_sums().counts().unwrap();
        for n in 1..=10u64 {
            assert_eq!(sums[n as usize], fibonacci(2 * n - 1));
        }
        for n in 2..=10 {
            assert_eq!(table.count(n, 1).unwrap(), binomial(n as i64 + 1, 3));
        }
        assert_eq!(table.count(4, 2).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn t231_by_descents_specializes_to_t231() {
        let entry = catalog(GfName::T231xt, 10).unwrap();
        let table = entry.bivariate().unwrap();
        let plain = catalog(GfName::T231, 10).unwrap();
        assert_eq!(&table.row_sums(), plain.univariate().unwrap());
        // n = 7 row from brute-force enumeration of shallow 231-avoiders
        let row: Vec<u64> = (0..7).map(|k| u64::try_from(table.count(7, k).unwrap()).unwrap()).collect();
        assert_eq!(row, [1, 21, 90, 137, 85, 20, 1]);
        if let CatalogEntry::Bivariate { laurent, .. } = &entry {
            assert_eq!(&laurent.at_statistic_one(), plain.univariate().unwrap());
        }
    }

    #[test]
    fn c231_matches_its_coefficient_formula() {
        let entry = catalog(GfName::C231xt, 10).unwrap();
        let table = entry.bivariate().unwrap();
        for n in 5..=10usize {
            assert_eq!(table.get(n, n - 2).unwrap(), rat(3 * n as i64 - 12));
            assert_eq!(table.get(n, n - 1).unwrap(), rat(1));
            assert_eq!(
                table.row_sums().count_coefficient(n).unwrap(),
                closed_form(ClosedForm::StartsWithTopTwo231, n).unwrap()
            );
        }
    }

    #[test]
    fn every_entry_is_consistent() {
        for name in GfName::ALL {
            let entry = catalog(name, DEFAULT_ORDER).unwrap();
            assert!(entry.relation_holds(), "{name}");
            entry.check_counts().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(entry.name(), name);
            assert_eq!(name.is_bivariate(), entry.bivariate().is_some());
            assert_eq!(name.to_string().parse::<GfName>().unwrap(), name);
        }
        assert!(catalog(GfName::T231, MAX_ORDER + 1).is_err());
    }

    #[test]
    fn negative_residue_is_reported() {
        let s = LaurentSeries::from_coeffs(vec![LaurentPoly::one(), LaurentPoly::from_terms(&[(-1, 1)])], 1);
        assert_eq!(
            BivariateSeries::from_laurent(&s, VariableRoles::bivariate("x", "t")),
            Err(SeriesError::NegativeDegreeResidue { size: 1, power: -1 })
        );
    }

    #[test]
    fn laurent_units() {
        let m = LaurentPoly::from_terms(&[(3, 2)]);
        assert_eq!(m.mul(&m.try_inverse().unwrap()), LaurentPoly::one());
        assert!(LaurentPoly::from_terms(&[(0, 1), (1, 1)]).try_inverse().is_none());
        assert!(LaurentPoly::zero().try_inverse().is_none());
    }

    #[test]
    fn shifting() {
        let s = RationalSeries::from_integers(&[0, 0, 1, 2], 3);
        assert_eq!(s.shift_down(2).unwrap(), RationalSeries::from_integers(&[1, 2], 1));
        assert_eq!(s.shift_down(3), Err(SeriesError::NotDivisible(3)));
        assert_eq!(s.shift_up(1), RationalSeries::from_integers(&[0, 0, 0, 1], 3));
    }
}
