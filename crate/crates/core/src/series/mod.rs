//! Truncated graded power series with exact rational coefficients.
//!
//! A series lives in a [`SeriesRing`]: a variable kind (all `x_n`, or odd
//! `x_n` only), an ordered list of weight-1 formal parameters and a
//! truncation weight `N`. The weight of `x_n` and `y_n` is `n`; every stored
//! monomial has weight at most `N`. Because truncation is a ring
//! homomorphism, any division-free computation performed here is exact
//! modulo weight `N`.

mod laurent;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::rational::Rational;

pub use laurent::LaurentSeries;
pub use monomial::{Monomial, MAX_PARAMS, MAX_VAR, MAX_WEIGHT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series live in different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("exp requires a zero constant term")]
    ExpConstantTerm,
    #[error("inverse requires constant term 1")]
    InvConstantTerm,
    #[error("variable index {0} is outside 1..={max}", max = MAX_VAR)]
    VarIndex(usize),
    #[error("odd-variable series cannot contain x{0}")]
    EvenVariable(usize),
    #[error("at most {max} formal parameters are supported", max = MAX_PARAMS)]
    TooManyParams,
    #[error("unknown or duplicate parameter `{0}`")]
    Param(String),
    #[error("truncation weight {0} exceeds the supported maximum {max}", max = MAX_WEIGHT)]
    Truncation(u32),
    #[error("differential operator must not contain parameters or y variables")]
    OperatorHasParams,
    #[error("operator weight {op} exceeds the truncation weight {trunc}")]
    OperatorTooHeavy { op: u32, trunc: u32 },
    #[error("series carries parameters where none are allowed")]
    UnexpectedParams,
}

/// Which `x` variables a series may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// `x_1, x_2, x_3, ...`
    All,
    /// `x_1, x_3, x_5, ...`
    Odd,
}

impl VarKind {
    pub fn admits(self, n: usize) -> bool {
        match self {
            VarKind::All => true,
            VarKind::Odd => n % 2 == 1,
        }
    }

    /// Variable indices of this kind up to `max`.
    pub fn indices(self, max: usize) -> impl Iterator<Item = usize> {
        (1..=max.min(MAX_VAR)).filter(move |&n| self.admits(n))
    }
}

/// Kind, parameter names and truncation weight shared by compatible series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    kind: VarKind,
    params: Arc<[String]>,
    truncation: u32,
}

impl SeriesRing {
    pub fn new(kind: VarKind, truncation: u32) -> Result<Self, SeriesError> {
        Self::with_params(kind, &[] as &[&str], truncation)
    }

    pub fn with_params<S: AsRef<str>>(
        kind: VarKind,
        params: &[S],
        truncation: u32,
    ) -> Result<Self, SeriesError> {
        if truncation > MAX_WEIGHT {
            return Err(SeriesError::Truncation(truncation));
        }
        if params.len() > MAX_PARAMS {
            return Err(SeriesError::TooManyParams);
        }
        let names: Vec<String> = params.iter().map(|p| p.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(SeriesError::Param(n.clone()));
            }
        }
        Ok(SeriesRing {
            kind,
            params: names.into(),
            truncation,
        })
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    pub fn with_truncation(&self, truncation: u32) -> Result<Self, SeriesError> {
        if truncation > MAX_WEIGHT {
            return Err(SeriesError::Truncation(truncation));
        }
        Ok(SeriesRing {
            truncation,
            ..self.clone()
        })
    }

    /// Same ring with `names` appended to the parameter list.
    pub fn extend_params<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, SeriesError> {
        let mut all: Vec<String> = self.params.to_vec();
        all.extend(names.iter().map(|n| n.as_ref().to_string()));
        Self::with_params(self.kind, &all, self.truncation)
    }

    fn describe(&self) -> String {
        format!(
            "{:?}, params [{}], N={}",
            self.kind,
            self.params.join(","),
            self.truncation
        )
    }

    fn check_same(&self, other: &SeriesRing) -> Result<(), SeriesError> {
        if self == other {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch(self.describe(), other.describe()))
        }
    }

    fn check_compatible(&self, other: &SeriesRing) -> Result<(), SeriesError> {
        if self.kind == other.kind && self.params == other.params {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch(self.describe(), other.describe()))
        }
    }
}

/// A truncated power series: sorted terms, no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedSeries {
    ring: SeriesRing,
    terms: Vec<(Monomial, Rational)>,
}

type TermMap = FxHashMap<Monomial, Rational>;

fn accumulate(map: &mut TermMap, m: Monomial, c: Rational) {
    use std::collections::hash_map::Entry;
    match map.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn finish(map: TermMap) -> Vec<(Monomial, Rational)> {
    let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_unstable_by_key(|a| a.0);
    terms
}

fn binomial_u64(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

impl GradedSeries {
    pub fn zero(ring: &SeriesRing) -> Self {
        GradedSeries {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &SeriesRing) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &SeriesRing, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        GradedSeries {
            ring: ring.clone(),
            terms,
        }
    }

    /// The variable `x_n` (zero if its weight exceeds the truncation).
    pub fn x(ring: &SeriesRing, n: usize) -> Result<Self, SeriesError> {
        check_var(ring.kind, n)?;
        Ok(Self::monomial(ring, Monomial::x(n), Rational::one()))
    }

    pub fn y(ring: &SeriesRing, n: usize) -> Result<Self, SeriesError> {
        check_var(ring.kind, n)?;
        Ok(Self::monomial(ring, Monomial::y(n), Rational::one()))
    }

    /// The formal parameter with index `i` in the ring's parameter list.
    pub fn param(ring: &SeriesRing, i: usize) -> Self {
        assert!(i < ring.params.len(), "parameter index {i} out of range");
        Self::monomial(ring, Monomial::param(i), Rational::one())
    }

    pub fn param_named(ring: &SeriesRing, name: &str) -> Result<Self, SeriesError> {
        let i = ring
            .param_index(name)
            .ok_or_else(|| SeriesError::Param(name.to_string()))?;
        Ok(Self::param(ring, i))
    }

    /// `c · m`, dropped if `m` is too heavy.
    pub fn monomial(ring: &SeriesRing, m: Monomial, c: Rational) -> Self {
        let terms = if c.is_zero() || m.weight() > ring.truncation {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        GradedSeries {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a series from arbitrary terms, merging repeats, dropping zeros
    /// and anything above the truncation weight.
    pub fn from_terms<I>(ring: &SeriesRing, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map = TermMap::default();
        for (m, c) in terms {
            for (n, _) in m.x_exps().chain(m.y_exps()) {
                check_var(ring.kind, n)?;
            }
            if let Some((i, _)) = m.param_exps().find(|(i, _)| *i >= ring.params.len()) {
                return Err(SeriesError::Param(format!("#{i}")));
            }
            if m.weight() <= ring.truncation {
                accumulate(&mut map, m, c);
            }
        }
        Ok(Self::from_map(ring, map))
    }

    fn from_map(ring: &SeriesRing, map: TermMap) -> Self {
        GradedSeries {
            ring: ring.clone(),
            terms: finish(map),
        }
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn kind(&self) -> VarKind {
        self.ring.kind
    }

    pub fn params(&self) -> &[String] {
        &self.ring.params
    }

    pub fn truncation(&self) -> u32 {
        self.ring.truncation
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Largest weight carried by a term (0 for the zero series).
    pub fn max_weight(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.weight())
    }

    pub fn min_weight(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.weight())
    }

    pub fn has_params(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_params())
    }

    pub fn has_y(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_y())
    }

    /// Human-readable form of a monomial in this ring.
    pub fn render_monomial(&self, m: &Monomial) -> String {
        m.render(&self.ring.params)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_unchecked(other, &Rational::one()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_unchecked(other, &-Rational::one()))
    }

    /// `self + s·other` by merging the sorted term lists.
    fn add_unchecked(&self, other: &Self, s: &Rational) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, &b[j].1 * s));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1 * s;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GradedSeries {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.mul_into(other, self.ring.clone()))
    }

    /// Product truncated at `target`, for factors whose truncations differ
    /// (as in Laurent coefficient arithmetic). The caller is responsible for
    /// `target` not exceeding the precision the factors actually carry.
    pub fn mul_to(&self, other: &Self, target: u32) -> Result<Self, SeriesError> {
        self.ring.check_compatible(&other.ring)?;
        Ok(self.mul_into(other, self.ring.with_truncation(target)?))
    }

    fn mul_into(&self, other: &Self, ring: SeriesRing) -> Self {
        let n = ring.truncation;
        if self.terms.is_empty() || other.terms.is_empty() {
            return GradedSeries::zero(&ring);
        }
        let (a, b) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let mut map = TermMap::default();
        map.reserve(a.len().max(b.len()));
        for (ma, ca) in a.iter() {
            let wa = ma.weight();
            if wa > n {
                break;
            }
            let budget = n - wa;
            for (mb, cb) in b.iter() {
                if mb.weight() > budget {
                    break;
                }
                accumulate(&mut map, ma.mul(mb), ca * cb);
            }
        }
        Self::from_map(&ring, map)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedSeries::zero(&self.ring);
        }
        GradedSeries {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = GradedSeries::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Homogeneous components indexed by weight `0..=N`.
    fn components(&self) -> Vec<Vec<(Monomial, Rational)>> {
        let mut comps = vec![Vec::new(); self.ring.truncation as usize + 1];
        for (m, c) in &self.terms {
            comps[m.weight() as usize].push((*m, c.clone()));
        }
        comps
    }

    fn from_components(ring: &SeriesRing, comps: Vec<Vec<(Monomial, Rational)>>) -> Self {
        let mut terms: Vec<_> = comps.into_iter().flatten().collect();
        terms.sort_unstable_by_key(|a| a.0);
        GradedSeries {
            ring: ring.clone(),
            terms,
        }
    }

    /// `exp(self)`; the constant term must vanish.
    ///
    /// Uses the Euler-operator recurrence `w·f_w = Σ_j j·a_j·f_{w-j}` on
    /// homogeneous components.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let a = self.components();
        let n = self.ring.truncation as usize;
        let mut f: Vec<Vec<(Monomial, Rational)>> = Vec::with_capacity(n + 1);
        f.push(vec![(Monomial::one(), Rational::one())]);
        for w in 1..=n {
            let mut map = TermMap::default();
            for j in 1..=w {
                let jr = Rational::from_integer(j as i64);
                for (ma, ca) in &a[j] {
                    let cj = ca * &jr;
                    for (mf, cf) in &f[w - j] {
                        accumulate(&mut map, ma.mul(mf), &cj * cf);
                    }
                }
            }
            let inv_w = Rational::new(1, w as i64);
            f.push(
                finish(map)
                    .into_iter()
                    .map(|(m, c)| (m, c * &inv_w))
                    .collect(),
            );
        }
        Ok(Self::from_components(&self.ring, f))
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::InvConstantTerm);
        }
        let a = self.components();
        let n = self.ring.truncation as usize;
        let mut f: Vec<Vec<(Monomial, Rational)>> = Vec::with_capacity(n + 1);
        f.push(vec![(Monomial::one(), Rational::one())]);
        for w in 1..=n {
            let mut map = TermMap::default();
            for j in 1..=w {
                for (ma, ca) in &a[j] {
                    for (mf, cf) in &f[w - j] {
                        accumulate(&mut map, ma.mul(mf), -(ca * cf));
                    }
                }
            }
            f.push(finish(map));
        }
        Ok(Self::from_components(&self.ring, f))
    }

    /// Lowers the truncation weight to `w`, dropping heavier terms.
    pub fn truncated(&self, w: u32) -> Self {
        let w = w.min(self.ring.truncation);
        let ring = SeriesRing {
            truncation: w,
            ..self.ring.clone()
        };
        GradedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= w)
                .cloned()
                .collect(),
            ring,
        }
    }

    /// Raises the truncation weight. Only meaningful when `self` is known to
    /// be a genuine polynomial rather than a truncation; the caller asserts
    /// this.
    pub fn widen_truncation(&self, w: u32) -> Result<Self, SeriesError> {
        if w < self.ring.truncation {
            return Ok(self.truncated(w));
        }
        Ok(GradedSeries {
            ring: self.ring.with_truncation(w)?,
            terms: self.terms.clone(),
        })
    }

    /// Re-embeds into `ring`, which must have the same kind and contain every
    /// parameter of `self` by name. Truncation becomes that of `ring`
    /// (lowered freely, raised only under the polynomial assumption of
    /// [`widen_truncation`](Self::widen_truncation)).
    pub fn embed(&self, ring: &SeriesRing) -> Result<Self, SeriesError> {
        if ring.kind != self.ring.kind {
            return Err(SeriesError::RingMismatch(
                self.ring.describe(),
                ring.describe(),
            ));
        }
        // Parameters that no term uses need not exist in the target ring.
        let mut used = vec![false; self.ring.params.len()];
        for (m, _) in &self.terms {
            for (i, _) in m.param_exps() {
                used[i] = true;
            }
        }
        let mut index = Vec::with_capacity(self.ring.params.len());
        for (i, p) in self.ring.params.iter().enumerate() {
            match ring.param_index(p) {
                Some(j) => index.push(j),
                None if !used[i] => index.push(usize::MAX),
                None => return Err(SeriesError::Param(p.clone())),
            }
        }
        let identity = index.iter().enumerate().all(|(i, &j)| i == j);
        let mut map = TermMap::default();
        for (m, c) in &self.terms {
            if m.weight() > ring.truncation {
                continue;
            }
            let mut out = *m;
            if !identity {
                for (i, _) in m.param_exps() {
                    out.set_param_exp(i, 0);
                }
                for (i, e) in m.param_exps() {
                    out.set_param_exp(index[i], e);
                }
            }
            accumulate(&mut map, out, c.clone());
        }
        Ok(Self::from_map(ring, map))
    }

    /// Linear substitution `x_n -> x_n + c_n·m_n` for every `x_n` present,
    /// where `shift(n)` supplies `(c_n, m_n)`. Terms whose weight ends up
    /// above the truncation are dropped.
    fn substitute_x<F>(&self, shift: F) -> Self
    where
        F: Fn(usize) -> Option<(Rational, Monomial)>,
    {
        let n_max = (self.ring.truncation as usize).min(MAX_VAR);
        let table: Vec<Option<(Vec<Rational>, Monomial)>> = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    return None;
                }
                shift(n).map(|(c, m)| {
                    let max_e = self.ring.truncation as usize / n;
                    let mut pows = Vec::with_capacity(max_e + 1);
                    pows.push(Rational::one());
                    for j in 1..=max_e {
                        let next = &pows[j - 1] * &c;
                        pows.push(next);
                    }
                    (pows, m)
                })
            })
            .collect();
        let trunc = self.ring.truncation;
        let mut map = TermMap::default();
        let mut work: Vec<(Monomial, Rational)> = Vec::new();
        let mut next: Vec<(Monomial, Rational)> = Vec::new();
        for (m, c) in &self.terms {
            work.clear();
            work.push((*m, c.clone()));
            for (n, e) in m.x_exps() {
                let Some((pows, sm)) = table.get(n).and_then(|t| t.as_ref()) else {
                    continue;
                };
                next.clear();
                for (wm, wc) in work.iter() {
                    for j in 0..=e {
                        let mut out = *wm;
                        out.set_x_exp(n, e - j);
                        let out = out.mul_pow(sm, j);
                        let coeff = if j == 0 {
                            wc.clone()
                        } else {
                            wc * &pows[j as usize]
                                * Rational::from_integer(binomial_u64(e, j) as i64)
                        };
                        if !coeff.is_zero() {
                            next.push((out, coeff));
                        }
                    }
                }
                std::mem::swap(&mut work, &mut next);
            }
            for (wm, wc) in work.drain(..) {
                if wm.weight() <= trunc {
                    accumulate(&mut map, wm, wc);
                }
            }
        }
        Self::from_map(&self.ring, map)
    }

    /// Miwa shift by a formal parameter: `x_n -> x_n + sign·c·p^n/n` for
    /// every index `n` of the series' kind. Weight-preserving.
    pub fn miwa_shift(&self, p: usize, c: &Rational, sign: i32) -> Self {
        assert!(
            p < self.ring.params.len(),
            "parameter index {p} out of range"
        );
        let kind = self.ring.kind;
        let s = if sign < 0 { -c } else { c.clone() };
        self.substitute_x(|n| {
            kind.admits(n).then(|| {
                (
                    &s * Rational::new(1, n as i64),
                    Monomial::param_pow(p, n as u32),
                )
            })
        })
    }

    /// Miwa shift by a numeric value: `x_n -> x_n + sign·c·v^n/n`.
    pub fn miwa_shift_value(&self, v: &Rational, c: &Rational, sign: i32) -> Self {
        let kind = self.ring.kind;
        let s = if sign < 0 { -c } else { c.clone() };
        self.substitute_x(|n| {
            kind.admits(n).then(|| {
                (
                    &s * v.pow(n as i32) * Rational::new(1, n as i64),
                    Monomial::one(),
                )
            })
        })
    }

    /// `x_n -> x_n + sign·y_n`.
    pub fn shift_by_y(&self, sign: i32) -> Self {
        let kind = self.ring.kind;
        let s = Rational::from_integer(if sign < 0 { -1 } else { 1 });
        self.substitute_x(|n| kind.admits(n).then(|| (s.clone(), Monomial::y(n))))
    }

    /// `x_n -> factor·x_n` for every `n` (e.g. `factor = 1/2` gives `f(x/2)`).
    pub fn scale_x(&self, factor: &Rational) -> Self {
        let mut map = TermMap::default();
        for (m, c) in &self.terms {
            accumulate(&mut map, *m, c * factor.pow(m.x_degree() as i32));
        }
        Self::from_map(&self.ring, map)
    }

    /// Exchanges the `x` and `y` variables.
    pub fn swap_xy(&self) -> Self {
        let mut map = TermMap::default();
        for (m, c) in &self.terms {
            accumulate(&mut map, m.swap_xy(), c.clone());
        }
        Self::from_map(&self.ring, map)
    }

    /// Value at `x = y = 0`: only the terms free of variables survive.
    pub fn at_origin(&self) -> Self {
        GradedSeries {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.has_x() && !m.has_y())
                .cloned()
                .collect(),
        }
    }

    /// Splits by powers of parameter `p`: the coefficient of `p^j` (with `p`
    /// removed) is returned with truncation `N - j`.
    pub fn split_by_param(&self, p: usize) -> BTreeMap<u32, GradedSeries> {
        let mut maps: BTreeMap<u32, TermMap> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.param_exp(p);
            let mut out = *m;
            out.set_param_exp(p, 0);
            accumulate(maps.entry(e).or_default(), out, c.clone());
        }
        maps.into_iter()
            .map(|(e, map)| {
                let ring = SeriesRing {
                    truncation: self.ring.truncation - e,
                    ..self.ring.clone()
                };
                (e, Self::from_map(&ring, map))
            })
            .collect()
    }

    /// `P(∂̃)f` with `∂̃_n = (1/n)∂/∂x_n`. The result is valid up to
    /// `N - (max weight of P)`, which becomes its truncation.
    pub fn apply_diff_operator(p: &Self, f: &Self) -> Result<Self, SeriesError> {
        if p.has_params() || p.has_y() {
            return Err(SeriesError::OperatorHasParams);
        }
        let op = p.max_weight();
        let trunc = f.truncation();
        if op > trunc {
            return Err(SeriesError::OperatorTooHeavy { op, trunc });
        }
        let ring = f.ring.with_truncation(trunc - op)?;
        let mut map = TermMap::default();
        for (pm, pc) in &p.terms {
            'terms: for (fm, fc) in &f.terms {
                let mut out = *fm;
                let mut c = pc * fc;
                for (n, e) in pm.x_exps() {
                    let have = fm.x_exp(n);
                    if have < e {
                        continue 'terms;
                    }
                    out.set_x_exp(n, have - e);
                    let mut falling = 1i64;
                    for k in 0..e {
                        falling *= (have - k) as i64;
                    }
                    c = c * Rational::new(falling, (n as i64).pow(e));
                }
                if out.weight() <= ring.truncation {
                    accumulate(&mut map, out, c);
                }
            }
        }
        Ok(Self::from_map(&ring, map))
    }

    /// `P(∂̃)f |_{x=0}` for parameter-free `f`: the Fock pairing
    /// `Σ_m P_m f_m ∏ e_n!/n^{e_n}`.
    pub fn pair_at_zero(p: &Self, f: &Self) -> Result<Rational, SeriesError> {
        if p.has_params() || p.has_y() {
            return Err(SeriesError::OperatorHasParams);
        }
        if f.has_params() || f.has_y() {
            return Err(SeriesError::UnexpectedParams);
        }
        let op = p.max_weight();
        if op > f.truncation() {
            return Err(SeriesError::OperatorTooHeavy {
                op,
                trunc: f.truncation(),
            });
        }
        let mut acc = Rational::zero();
        for (pm, pc) in &p.terms {
            let fc = f.coeff(pm);
            if fc.is_zero() {
                continue;
            }
            let mut norm = Rational::one();
            for (n, e) in pm.x_exps() {
                norm = norm * Rational::factorial(e) * Rational::new(1, n as i64).pow(e as i32);
            }
            acc += pc * &fc * norm;
        }
        Ok(acc)
    }
}

fn check_var(kind: VarKind, n: usize) -> Result<(), SeriesError> {
    if !(1..=MAX_VAR).contains(&n) {
        return Err(SeriesError::VarIndex(n));
    }
    if !kind.admits(n) {
        return Err(SeriesError::EvenVariable(n));
    }
    Ok(())
}

/// Coefficients `c_0..=c_max` of `exp(Σ_m t_m k^m)`, where `ts[m-1] = t_m`
/// (missing entries are zero). Uses `a·c_a = Σ_m m·t_m·c_{a-m}`.
pub fn exp_generating_coeffs(
    ring: &SeriesRing,
    ts: &[GradedSeries],
    max: usize,
) -> Vec<GradedSeries> {
    let mut c = vec![GradedSeries::one(ring)];
    for a in 1..=max {
        let mut acc = GradedSeries::zero(ring);
        for m in 1..=a.min(ts.len()) {
            if ts[m - 1].is_zero() {
                continue;
            }
            let term = &ts[m - 1] * &c[a - m];
            acc = &acc + &term.scale(&Rational::from_integer(m as i64));
        }
        c.push(acc.scale(&Rational::new(1, a as i64)));
    }
    c
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = self.render_monomial(m);
            match (m.is_one(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[N={}] {}", self.ring.truncation, self)
    }
}

// Operator forms panic on ring mismatch; use the `checked_*` methods where
// inputs are not already known to share a ring.
impl Add for &GradedSeries {
    type Output = GradedSeries;
    fn add(self, rhs: &GradedSeries) -> GradedSeries {
        self.checked_add(rhs).expect("series ring mismatch")
    }
}

impl Sub for &GradedSeries {
    type Output = GradedSeries;
    fn sub(self, rhs: &GradedSeries) -> GradedSeries {
        self.checked_sub(rhs).expect("series ring mismatch")
    }
}

impl Mul for &GradedSeries {
    type Output = GradedSeries;
    fn mul(self, rhs: &GradedSeries) -> GradedSeries {
        self.checked_mul(rhs).expect("series ring mismatch")
    }
}

impl Neg for &GradedSeries {
    type Output = GradedSeries;
    fn neg(self) -> GradedSeries {
        self.scale(&-Rational::one())
    }
}

impl Add for GradedSeries {
    type Output = GradedSeries;
    fn add(self, rhs: GradedSeries) -> GradedSeries {
        &self + &rhs
    }
}

impl Sub for GradedSeries {
    type Output = GradedSeries;
    fn sub(self, rhs: GradedSeries) -> GradedSeries {
        &self - &rhs
    }
}

impl Mul for GradedSeries {
    type Output = GradedSeries;
    fn mul(self, rhs: GradedSeries) -> GradedSeries {
        &self * &rhs
    }
}

impl Neg for GradedSeries {
    type Output = GradedSeries;
    fn neg(self) -> GradedSeries {
        -&self
    }
}

#[cfg(test)]
mod tests;
