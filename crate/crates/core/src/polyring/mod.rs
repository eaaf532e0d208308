//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`MultiPoly`] lives in a fixed [`VarSet`]; its terms are keyed by
//! exponent vectors aligned with the variable order. The same order defines
//! the graded-lexicographic term ordering used for printing and for the
//! leading-term division in [`MultiPoly::divide_exact`].

mod laurent;
mod parse;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use laurent::LaurentPoly;
pub use parse::{parse, parse_rational, parse_with, ParseError};
pub use univariate::{rational_roots, RootExtraction};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Integer constant as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a reduced [`Rational`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("divisor must be a nonconstant polynomial in `{0}` alone")]
    BadUnivariateDivisor(String),
}

/// Ordered list of distinct variable names.
///
/// Cloning is cheap; two sets are equal when they list the same names in the
/// same order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarSet(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Same names without `name`.
    pub fn without(&self, name: &str) -> Result<Self, PolyError> {
        self.require(name)?;
        VarSet::new(self.0.iter().filter(|n| *n != name).cloned())
    }

    /// Same names followed by `name`.
    pub fn extended(&self, name: &str) -> Result<Self, PolyError> {
        VarSet::new(self.0.iter().cloned().chain(std::iter::once(name.to_string())))
    }

    fn ptr_or_value_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet[{}]", self.0.join(","))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(","))
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically in variable order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn degree_in(&self, idx: &[usize]) -> u32 {
        idx.iter().map(|&i| self.0[i]).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial with rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn int(vars: &VarSet, n: i64) -> Self {
        Self::constant(vars, int(n))
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self, PolyError> {
        let i = vars.require(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e.into(), Rational::one()))
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value if the polynomial is constant (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Names of variables that occur with positive exponent.
    pub fn variables_used(&self) -> Vec<&str> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .map(|i| self.vars.0[i].as_str())
            .collect()
    }

    /// True if every occurring variable is in `subset`.
    pub fn uses_only(&self, subset: &[&str]) -> bool {
        self.variables_used().iter().all(|v| subset.contains(v))
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars.ptr_or_value_eq(&other.vars) {
            Ok(())
        } else {
            Err(PolyError::VarMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the ring homomorphism sending each variable of `self` to
    /// the corresponding entry of `images`; all images must share `target`.
    pub fn substitute_all(&self, images: &[MultiPoly], target: &VarSet) -> Result<Self, PolyError> {
        if images.len() != self.vars.len() {
            return Err(PolyError::VarMismatch {
                left: self.vars.to_string(),
                right: format!("{} images", images.len()),
            });
        }
        for img in images {
            if !img.vars.ptr_or_value_eq(target) {
                return Err(PolyError::VarMismatch {
                    left: target.to_string(),
                    right: img.vars.to_string(),
                });
            }
        }
        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|_| vec![MultiPoly::one(target)])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Substitutes the given variables (by name) with polynomials in the same
    /// ring; unbound variables are left alone.
    pub fn substitute(&self, bindings: &[(&str, MultiPoly)]) -> Result<Self, PolyError> {
        let mut images: Vec<MultiPoly> = (0..self.vars.len())
            .map(|i| MultiPoly::var(&self.vars, &self.vars.0[i]).unwrap())
            .collect();
        for (name, img) in bindings {
            let i = self.vars.require(name)?;
            self.check_same(img)?;
            images[i] = img.clone();
        }
        self.substitute_all(&images, &self.vars)
    }

    /// Substitutes rational values for the given variables.
    pub fn substitute_values(&self, values: &[(&str, Rational)]) -> Result<Self, PolyError> {
        let bindings: Vec<(&str, MultiPoly)> = values
            .iter()
            .map(|(n, v)| (*n, MultiPoly::constant(&self.vars, v.clone())))
            .collect();
        self.substitute(&bindings)
    }

    /// Value at a point given in variable order.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-expresses `self` in a ring whose variables include all of ours.
    pub fn embed(&self, target: &VarSet) -> Result<Self, PolyError> {
        let map: Vec<usize> = self
            .vars
            .0
            .iter()
            .map(|n| target.require(n))
            .collect::<Result<_, _>>()?;
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] = k;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Re-expresses `self` in a ring with fewer variables; every variable
    /// actually used must be present in `target`.
    pub fn restrict(&self, target: &VarSet) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self.vars.0.iter().map(|n| target.index_of(n)).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                match (map[i], k) {
                    (_, 0) => {}
                    (Some(j), _) => e[j] = k,
                    (None, _) => return Err(PolyError::UnknownVariable(self.vars.0[i].clone())),
                }
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn partial(&self, var: &str) -> Result<Self, PolyError> {
        let i = self.vars.require(var)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.0.clone();
            dm[i] -= 1;
            out.add_term(Monomial(dm), c * int(e as i64));
        }
        Ok(out)
    }

    fn indices(&self, subset: &[&str]) -> Result<Vec<usize>, PolyError> {
        subset.iter().map(|v| self.vars.require(v)).collect()
    }

    /// Sum of the terms whose total degree in `subset` equals `degree`.
    pub fn homogeneous_component(&self, subset: &[&str], degree: i64) -> Result<Self, PolyError> {
        let idx = self.indices(subset)?;
        let mut out = MultiPoly::zero(&self.vars);
        if degree < 0 {
            return Ok(out);
        }
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| i64::from(m.degree_in(&idx)) == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(out)
    }

    /// Largest total degree in `subset` over all terms; `None` stands for the
    /// degree of the zero polynomial.
    pub fn degree_in(&self, subset: &[&str]) -> Result<Option<u32>, PolyError> {
        let idx = self.indices(subset)?;
        Ok(self.terms.keys().map(|m| m.degree_in(&idx)).max())
    }

    /// Exact quotient `q` with `self = divisor * q`.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_same(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lm).ok_or(PolyError::NotDivisible)?;
            let qc = c / lc;
            let step = MultiPoly::monomial(&self.vars, qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Ok(quot)
    }

    /// Remainder of `self` modulo a polynomial `divisor` in the single
    /// variable `var`, treating every other variable as a coefficient.
    pub fn rem_univariate(&self, var: &str, divisor: &Self) -> Result<Self, PolyError> {
        self.check_same(divisor)?;
        let i = self.vars.require(var)?;
        let bad = || PolyError::BadUnivariateDivisor(var.to_string());
        if !divisor.uses_only(&[var]) {
            return Err(bad());
        }
        let n = divisor.degree_in(&[var])?.ok_or_else(bad)?;
        if n == 0 {
            return Err(bad());
        }
        let lead = divisor
            .terms
            .iter()
            .find(|(m, _)| m.0[i] == n)
            .map(|(_, c)| c.clone())
            .unwrap();
        let mut rem = self.clone();
        loop {
            let k = match rem.degree_in(&[var])? {
                Some(k) if k >= n => k,
                _ => return Ok(rem),
            };
            // coefficient of var^k, shifted down to var^(k-n)
            let mut step = MultiPoly::zero(&self.vars);
            for (m, c) in rem.terms.iter().filter(|(m, _)| m.0[i] == k) {
                let mut e = m.0.clone();
                e[i] = k - n;
                step.terms.insert(Monomial(e), c / &lead);
            }
            rem = &rem - &(&step * divisor);
        }
    }
}

impl<'a> Add for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched variable sets; use [`MultiPoly::checked_add`]
    /// when that can happen.
    fn add(self, rhs: Self) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: Self) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: Self) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: Self) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: Self) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: Self) -> MultiPoly {
        &self * &rhs
    }
}

impl<'a> Neg for &'a MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical form: terms by descending graded-lex order, `*` between
    /// factors, `^` for powers, rational coefficients as `a/b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.0.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars, self)
    }
}
