//! Counting shallow permutations by brute force over `S_n` and by walking
//! the generation tree, with statistic and symmetry refinements, oracle
//! verification and two exploratory searches.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{avoids, PatternSpec};
use crate::perm::{next_lex_slice, Permutation, SymmetryClass};
use crate::series::{as_string, catalog, closed_form, ClosedForm, GfName, SeriesError};
use crate::shallow::{is_shallow, shallow_roots, visit_shallow, visit_shallow_from};

pub const BRUTE_FORCE_CAP: usize = 10;
pub const CONSTRUCTIVE_CAP: usize = 12;
/// Hard ceiling for any configured cap; partial counts are kept in `u64`.
pub const HARD_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("size {requested} exceeds the {method} cap of {cap}")]
    SizeCapExceeded { requested: usize, cap: usize, method: Method },
    #[error("empty size range {min}..{max}")]
    EmptyRange { min: usize, max: usize },
    #[error("brute force found {brute_force} but the generator found {constructive} at n = {n}, k = {k:?}")]
    MethodDisagreement { n: usize, k: Option<usize>, brute_force: BigUint, constructive: BigUint },
    #[error("oracle {oracle} does not cover {reason}")]
    OracleDomainError { oracle: String, reason: String },
    #[error("witness {0} failed its self-check")]
    WitnessCheckFailed(Permutation),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Descents,
    Cycles,
    LrMaxima,
}

impl Statistic {
    pub fn evaluate(self, p: &Permutation) -> usize {
        match self {
            Self::Descents => p.descents(),
            Self::Cycles => p.cycles(),
            Self::LrMaxima => p.lr_maxima(),
        }
    }

    /// Values the statistic can take on `S_n`.
    pub fn range(self, n: usize) -> RangeInclusive<usize> {
        match (self, n) {
            (_, 0) => 0..=0,
            (Self::Descents, _) => 0..=n - 1,
            _ => 1..=n,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Descents => "descents",
            Self::Cycles => "cycles",
            Self::LrMaxima => "lrmax",
        })
    }
}

impl FromStr for Statistic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "descents" | "des" => Ok(Self::Descents),
            "cycles" | "cyc" => Ok(Self::Cycles),
            "lrmax" | "lr_maxima" => Ok(Self::LrMaxima),
            other => Err(format!("unknown statistic {other:?} (expected descents|cycles|lrmax)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BruteForce,
    Constructive,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BruteForce => "brute",
            Self::Constructive => "constructive",
            Self::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" | "brute_force" => Ok(Self::BruteForce),
            "constructive" => Ok(Self::Constructive),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown method {other:?} (expected brute|constructive|both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub brute_force: usize,
    pub constructive: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { brute_force: BRUTE_FORCE_CAP, constructive: CONSTRUCTIVE_CAP }
    }
}

impl Caps {
    fn check(&self, n: usize, method: Method) -> Result<(), EnumerationError> {
        let cap = match method {
            Method::Constructive => self.constructive,
            Method::BruteForce | Method::Both => self.brute_force,
        }
        .min(HARD_CAP);
        if n > cap {
            return Err(EnumerationError::SizeCapExceeded { requested: n, cap, method });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountQuery {
    pub n_min: usize,
    pub n_max: usize,
    pub avoid: Vec<PatternSpec>,
    pub symmetry: Option<SymmetryClass>,
    pub refine_by: Option<Statistic>,
    pub method: Method,
    pub caps: Caps,
}

impl CountQuery {
    /// Constructive count of all shallow permutations with sizes in `sizes`.
    pub fn new(sizes: RangeInclusive<usize>) -> Self {
        Self {
            n_min: *sizes.start(),
            n_max: *sizes.end(),
            avoid: Vec::new(),
            symmetry: None,
            refine_by: None,
            method: Method::Constructive,
            caps: Caps::default(),
        }
    }

    pub fn avoiding(mut self, spec: PatternSpec) -> Self {
        self.avoid.push(spec);
        self
    }

    pub fn with_symmetry(mut self, class: SymmetryClass) -> Self {
        self.symmetry = Some(class);
        self
    }

    pub fn refined_by(mut self, stat: Statistic) -> Self {
        self.refine_by = Some(stat);
        self
    }

    pub fn using(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn sizes(&self) -> RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    fn accepts(&self, p: &Permutation) -> bool {
        self.symmetry.is_none_or(|c| p.is_in_class(c)) && avoids(p, &self.avoid)
    }

    fn bin(&self, p: &Permutation) -> usize {
        self.refine_by.map_or(0, |s| s.evaluate(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub k: Option<usize>,
    #[serde(with = "as_string")]
    pub count: BigUint,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub query: CountQuery,
    pub rows: Vec<CountRow>,
    pub provenance: Method,
}

impl CountTable {
    /// Count for `(n, k)`; `k = None` sums over the refinement.
    pub fn get(&self, n: usize, k: Option<usize>) -> Option<BigUint> {
        let mut rows = self.rows.iter().filter(|r| r.n == n).peekable();
        rows.peek()?;
        match k {
            None => Some(rows.map(|r| &r.count).sum()),
            Some(k) => Some(rows.find(|r| r.k == Some(k)).map_or_else(BigUint::zero, |r| r.count.clone())),
        }
    }

    /// `(n, total)` for each size, summing refined rows.
    pub fn totals(&self) -> Vec<(usize, BigUint)> {
        let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.n).or_default() += &r.count;
        }
        out.into_iter().collect()
    }
}

/// Wall-clock timing; reads as zero where no clock is available.
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_ms(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_millis() as u64
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }
}

type Histogram = Vec<u64>;

fn merge(mut a: Histogram, b: Histogram) -> Histogram {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn par_fold<T, F>(items: Vec<T>, f: F) -> Histogram
where
    T: Send,
    F: Fn(T) -> Histogram + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).reduce(Vec::new, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).fold(Vec::new(), merge)
    }
}

/// Histogram of `bin` over every `p ∈ S_n`, lexicographic within each
/// first-entry partition. `bin` returns `None` to skip.
pub(crate) fn histogram_all<F>(n: usize, bins: usize, bin: F) -> Histogram
where
    F: Fn(&Permutation) -> Option<usize> + Sync + Send,
{
    if n == 0 {
        let mut h = vec![0; bins];
        if let Some(k) = bin(&Permutation::empty()) {
            h[k] += 1;
        }
        return h;
    }
    par_fold((1..=n as u32).collect(), |first| {
        let mut h = vec![0; bins];
        let mut word: Vec<u32> = std::iter::once(first).chain((1..=n as u32).filter(|&v| v != first)).collect();
        let mut p = Permutation::from_vec_unchecked(std::mem::take(&mut word));
        loop {
            if let Some(k) = bin(&p) {
                h[k] += 1;
            }
            if !next_lex_slice(&mut p.word_mut()[1..]) {
                break;
            }
        }
        h
    })
}

/// Histogram of `bin` over the shallow permutations of size `n`.
pub(crate) fn histogram_shallow<F>(n: usize, bins: usize, bin: F) -> Histogram
where
    F: Fn(&Permutation) -> Option<usize> + Sync + Send,
{
    let depth = n.min(5);
    if depth <= 1 {
        let mut h = vec![0; bins];
        visit_shallow(n, |p| {
            if let Some(k) = bin(p) {
                h[k] += 1;
            }
        });
        return h;
    }
    par_fold(shallow_roots(depth), |root| {
        let mut h = vec![0; bins];
        visit_shallow_from(&root, n, |p| {
            if let Some(k) = bin(p) {
                h[k] += 1;
            }
        });
        h
    })
}

/// Number of shallow permutations of size `n` satisfying `pred`.
pub fn count_shallow_where<F>(n: usize, pred: F) -> BigUint
where
    F: Fn(&Permutation) -> bool + Sync + Send,
{
    BigUint::from(histogram_shallow(n, 1, |p| pred(p).then_some(0))[0])
}

/// Number of permutations in `S_n` satisfying `pred`, shallow or not.
pub fn count_all_where<F>(n: usize, pred: F) -> BigUint
where
    F: Fn(&Permutation) -> bool + Sync + Send,
{
    BigUint::from(histogram_all(n, 1, |p| pred(p).then_some(0))[0])
}

fn histogram_for(q: &CountQuery, n: usize, method: Method) -> Histogram {
    let bins = n + 1;
    match method {
        Method::Constructive => histogram_shallow(n, bins, |p| q.accepts(p).then(|| q.bin(p))),
        _ => histogram_all(n, bins, |p| (is_shallow(p) && q.accepts(p)).then(|| q.bin(p))),
    }
}

pub fn count(q: &CountQuery) -> Result<CountTable, EnumerationError> {
    if q.n_min > q.n_max {
        return Err(EnumerationError::EmptyRange { min: q.n_min, max: q.n_max });
    }
    q.caps.check(q.n_max, q.method)?;
    let mut rows = Vec::new();
    for n in q.sizes() {
        let clock = Stopwatch::start();
        let hist = match q.method {
            Method::Both => {
                let brute = histogram_for(q, n, Method::BruteForce);
                let built = histogram_for(q, n, Method::Constructive);
                if let Some(k) = (0..=n).find(|&k| brute[k] != built[k]) {
                    let (b, c) = if q.refine_by.is_some() {
                        (BigUint::from(brute[k]), BigUint::from(built[k]))
                    } else {
                        (BigUint::from(brute[0]), BigUint::from(built[0]))
                    };
                    return Err(EnumerationError::MethodDisagreement {
                        n,
                        k: q.refine_by.map(|_| k),
                        brute_force: b,
                        constructive: c,
                    });
                }
                built
            }
            m => histogram_for(q, n, m),
        };
        let elapsed_ms = clock.elapsed_ms();
        match q.refine_by {
            None => rows.push(CountRow { n, k: None, count: BigUint::from(hist[0]), elapsed_ms }),
            Some(stat) => {
                for k in stat.range(n) {
                    rows.push(CountRow { n, k: Some(k), count: BigUint::from(hist[k]), elapsed_ms });
                }
            }
        }
    }
    Ok(CountTable { query: q.clone(), rows, provenance: q.method })
}

/// Shallow `avoid`-avoiders by descents, rows `0 <= k < n <= n_max`.
pub fn descent_table(n_max: usize, avoid: PatternSpec) -> Result<CountTable, EnumerationError> {
    count(&CountQuery::new(1..=n_max).avoiding(avoid).refined_by(Statistic::Descents))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "snake_case")]
pub enum Oracle {
    Gf(GfName),
    ClosedForm(ClosedForm),
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gf(g) => write!(f, "gf:{g}"),
            Self::ClosedForm(c) => write!(f, "closed:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedRow {
    pub n: usize,
    pub k: Option<usize>,
    #[serde(with = "as_string")]
    pub observed: BigUint,
    #[serde(with = "as_string")]
    pub expected: BigUint,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub oracle: String,
    pub pairs: Vec<VerifiedRow>,
    pub overall: bool,
    pub first_mismatch: Option<VerifiedRow>,
}

impl VerificationReport {
    pub fn from_pairs(oracle: impl Into<String>, pairs: Vec<VerifiedRow>) -> Self {
        let first_mismatch = pairs.iter().find(|r| !r.matched).cloned();
        Self { oracle: oracle.into(), overall: first_mismatch.is_none(), pairs, first_mismatch }
    }
}

fn pair(n: usize, k: Option<usize>, observed: BigUint, expected: BigUint) -> VerifiedRow {
    VerifiedRow { n, k, matched: observed == expected, observed, expected }
}

/// Compares every row of `table` against `oracle`. Univariate oracles are
/// compared with size totals; bivariate oracles need a descent refinement.
pub fn verify(table: &CountTable, oracle: Oracle) -> Result<VerificationReport, EnumerationError> {
    let domain = |reason: String| EnumerationError::OracleDomainError { oracle: oracle.to_string(), reason };
    let n_max = table.rows.iter().map(|r| r.n).max().unwrap_or(0);
    let pairs = match oracle {
        Oracle::ClosedForm(family) => table
            .totals()
            .into_iter()
            .map(|(n, observed)| {
                let expected = closed_form(family, n).map_err(|e| domain(e.to_string()))?;
                Ok(pair(n, None, observed, expected))
            })
            .collect::<Result<Vec<_>, EnumerationError>>()?,
        Oracle::Gf(name) => {
            let entry = catalog(name, n_max).map_err(|e| domain(e.to_string()))?;
            if let Some(series) = entry.univariate() {
                table
                    .totals()
                    .into_iter()
                    .map(|(n, observed)| Ok(pair(n, None, observed, series.count_coefficient(n)?)))
                    .collect::<Result<Vec<_>, EnumerationError>>()?
            } else {
                let grid = entry.bivariate().expect("catalog entries are uni- or bivariate");
                if table.query.refine_by != Some(Statistic::Descents) {
                    return Err(domain("tables without a descent refinement".into()));
                }
                table
                    .rows
                    .iter()
                    .map(|r| {
                        let k = r.k.expect("refined rows carry k");
                        Ok(pair(r.n, Some(k), r.count.clone(), grid.count(r.n, k)?))
                    })
                    .collect::<Result<Vec<_>, EnumerationError>>()?
            }
        }
    };
    Ok(VerificationReport::from_pairs(oracle.to_string(), pairs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub first: usize,
    pub second: usize,
    #[serde(with = "as_string")]
    pub multiplicity: BigUint,
}

/// Multiset of statistic pairs over one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatProfile {
    pub n: usize,
    pub class_descriptor: String,
    pub entries: Vec<ProfileEntry>,
}

impl StatProfile {
    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|e| &e.multiplicity).sum()
    }

    fn same_multiset(&self, other: &Self) -> bool {
        let key = |p: &Self| -> Vec<(usize, usize, BigUint)> {
            p.entries.iter().map(|e| (e.first, e.second, e.multiplicity.clone())).collect()
        };
        key(self) == key(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePair {
    pub n: usize,
    pub left: StatProfile,
    pub right: StatProfile,
    pub equal: bool,
    /// `consistent at n` or `inconsistent at n`.
    pub verdict: String,
}

fn stat_profile(
    n: usize,
    avoid: &str,
    descriptor: &str,
    f: impl Fn(&Permutation) -> (usize, usize) + Sync + Send,
) -> StatProfile {
    let spec: PatternSpec = avoid.parse().expect("built-in pattern");
    let width = n + 2;
    let hist = histogram_shallow(n, width * width, |p| {
        avoids(p, std::slice::from_ref(&spec)).then(|| {
            let (a, b) = f(p);
            a * width + b
        })
    });
    let entries = hist
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| ProfileEntry { first: i / width, second: i % width, multiplicity: BigUint::from(m) })
        .collect();
    StatProfile { n, class_descriptor: descriptor.into(), entries }
}

/// Joint distribution of `(cyc, des + 1)` on shallow 132-avoiders against
/// `(cyc, lrmax)` on shallow 321-avoiders.
pub fn profile(n: usize) -> Result<ProfilePair, EnumerationError> {
    Caps::default().check(n, Method::Constructive)?;
    let left = stat_profile(n, "132", "132-avoiding: (cyc, des+1)", |p| (p.cycles(), p.descents() + 1));
    let right = stat_profile(n, "321", "321-avoiding: (cyc, lrmax)", |p| (p.cycles(), p.lr_maxima()));
    let equal = left.same_multiset(&right);
    let verdict = format!("{} at n = {n}", if equal { "consistent" } else { "inconsistent" });
    Ok(ProfilePair { n, left, right, equal, verdict })
}

/// Lexicographically first (by size, then word) non-shallow permutation
/// avoiding both anchored 3412 patterns, up to size `n_max`.
pub fn search_mesh_counterexample(n_max: usize) -> Result<Option<Permutation>, EnumerationError> {
    Caps::default().check(n_max, Method::BruteForce)?;
    let specs = [PatternSpec::value_anchored_3412(), PatternSpec::position_anchored_3412()];
    let hit = |p: &Permutation| !is_shallow(p) && avoids(p, &specs);
    for n in 1..=n_max {
        #[cfg(feature = "parallel")]
        let found = {
            use rayon::prelude::*;
            (1..=n as u32)
                .into_par_iter()
                .map(|first| first_in_partition(n, first, &hit))
                .find_first(Option::is_some)
                .flatten()
        };
        #[cfg(not(feature = "parallel"))]
        let found = (1..=n as u32).find_map(|first| first_in_partition(n, first, &hit));
        if let Some(w) = found {
            if !hit(&w) {
                return Err(EnumerationError::WitnessCheckFailed(w));
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn first_in_partition(n: usize, first: u32, hit: &impl Fn(&Permutation) -> bool) -> Option<Permutation> {
    let word: Vec<u32> = std::iter::once(first).chain((1..=n as u32).filter(|&v| v != first)).collect();
    let mut p = Permutation::from_vec_unchecked(word);
    loop {
        if hit(&p) {
            return Some(p);
        }
        if !next_lex_slice(&mut p.word_mut()[1..]) {
            return None;
        }
    }
}

/// Counts as `BigUint` for a univariate catalog entry, `1..=n_max`.
pub fn catalog_counts(name: GfName, n_max: usize) -> Result<Vec<BigUint>, EnumerationError> {
    let entry = catalog(name, n_max)?;
    let s = entry.univariate().ok_or_else(|| EnumerationError::OracleDomainError {
        oracle: name.to_string(),
        reason: "univariate counts (entry is bivariate)".into(),
    })?;
    Ok((1..=n_max).map(|n| s.count_coefficient(n)).collect::<Result<_, _>>()?)
}
