use std::fmt;

use num_traits::Zero;

use super::{Monomial, MultiPoly, PolyError, Rational};

/// `body / var^shift` with `var` a distinguished variable of `body`'s ring.
///
/// Normalized: either `shift == 0` or `var` does not divide `body`. The zero
/// value always has `shift == 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    var: usize,
    shift: u32,
    body: MultiPoly,
}

impl LaurentPoly {
    /// `p * var^(-k)`, normalized.
    pub fn scale(p: &MultiPoly, var: &str, k: u32) -> Result<Self, PolyError> {
        let var = p.vars().require(var)?;
        let mut l = LaurentPoly {
            var,
            shift: k,
            body: p.clone(),
        };
        l.normalize();
        Ok(l)
    }

    pub fn from_poly(p: &MultiPoly, var: &str) -> Result<Self, PolyError> {
        Self::scale(p, var, 0)
    }

    fn normalize(&mut self) {
        if self.body.is_zero() {
            self.shift = 0;
            return;
        }
        let v = self.var;
        let common = self
            .body
            .terms()
            .map(|(m, _)| m.exponents()[v])
            .min()
            .unwrap_or(0)
            .min(self.shift);
        if common > 0 {
            self.body = lower(&self.body, v, common);
            self.shift -= common;
        }
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn body(&self) -> &MultiPoly {
        &self.body
    }

    pub fn var_name(&self) -> &str {
        &self.body.vars().names()[self.var]
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// True when the value has no negative powers of the distinguished
    /// variable.
    pub fn is_polynomial(&self) -> bool {
        self.shift == 0
    }

    pub fn to_poly(&self) -> Option<MultiPoly> {
        self.is_polynomial().then(|| self.body.clone())
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.var != other.var || self.body.vars() != other.body.vars() {
            return Err(PolyError::VarMismatch {
                left: format!("{}:{}", self.body.vars(), self.var_name()),
                right: format!("{}:{}", other.body.vars(), other.var_name()),
            });
        }
        Ok(())
    }

    fn lifted(&self, shift: u32) -> MultiPoly {
        raise(&self.body, self.var, shift - self.shift)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let k = self.shift.max(other.shift);
        let mut l = LaurentPoly {
            var: self.var,
            shift: k,
            body: &self.lifted(k) + &other.lifted(k),
        };
        l.normalize();
        Ok(l)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            var: self.var,
            shift: self.shift,
            body: -&self.body,
        }
    }

    /// Multiplies by `var^n`.
    pub fn mul_var_power(&self, n: u32) -> Self {
        let mut l = if n >= self.shift {
            LaurentPoly {
                var: self.var,
                shift: 0,
                body: raise(&self.body, self.var, n - self.shift),
            }
        } else {
            LaurentPoly {
                var: self.var,
                shift: self.shift - n,
                body: self.body.clone(),
            }
        };
        l.normalize();
        l
    }

    /// Value at `var = 0` when the value is a polynomial.
    pub fn constant_at_zero(&self) -> Option<MultiPoly> {
        let name = self.var_name().to_string();
        self.to_poly()
            .map(|p| p.substitute_values(&[(&name, Rational::zero())]).unwrap())
    }
}

fn raise(p: &MultiPoly, v: usize, by: u32) -> MultiPoly {
    if by == 0 {
        return p.clone();
    }
    MultiPoly::from_terms(
        p.vars(),
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e[v] += by;
            (e, c.clone())
        }),
    )
}

fn lower(p: &MultiPoly, v: usize, by: u32) -> MultiPoly {
    MultiPoly::from_terms(
        p.vars(),
        p.terms().map(|(m, c): (&Monomial, &Rational)| {
            let mut e = m.exponents().to_vec();
            e[v] -= by;
            (e, c.clone())
        }),
    )
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.body)
        } else {
            write!(f, "({})*{}^-{}", self.body, self.var_name(), self.shift)
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
