//! Rational-root extraction for polynomials in one variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, PolyError, Rational};

/// Result of peeling rational roots off a univariate polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootExtraction {
    /// Distinct rational roots in increasing order with their multiplicities.
    pub roots: Vec<(Rational, u32)>,
    /// What remains after dividing out every `(var - root)^mult`. Has no
    /// rational roots; constant when the polynomial split completely.
    pub remainder: MultiPoly,
}

fn coefficients(p: &MultiPoly, var: usize) -> Vec<Rational> {
    let deg = p.terms().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0) as usize;
    let mut cs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        cs[m.exponents()[var] as usize] = c.clone();
    }
    cs
}

fn from_coefficients(template: &MultiPoly, var: usize, cs: &[Rational]) -> MultiPoly {
    let n = template.vars().len();
    MultiPoly::from_terms(
        template.vars(),
        cs.iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; n];
            e[var] = k as u32;
            (e, c.clone())
        }),
    )
}

fn eval(cs: &[Rational], x: &Rational) -> Rational {
    cs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by `(t - r)`; assumes `r` is a root.
fn deflate(cs: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = cs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &cs[k] + carry * r;
        out[k - 1] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Finds every rational root of `p`, which must involve no variable other
/// than `var`.
pub fn rational_roots(p: &MultiPoly, var: &str) -> Result<RootExtraction, PolyError> {
    let v = p.vars().require(var)?;
    if !p.uses_only(&[var]) || p.is_zero() {
        return Err(PolyError::BadUnivariateDivisor(var.to_string()));
    }
    let mut cs = coefficients(p, v);
    let mut roots: Vec<(Rational, u32)> = Vec::new();

    // zero roots first
    let mut zero_mult = 0;
    while cs.len() > 1 && cs[0].is_zero() {
        cs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }

    if cs.len() > 1 {
        // integer coefficients with the same roots
        let lcm = cs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = cs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let nums = divisors(&ints[0]);
        let dens = divisors(ints.last().unwrap());
        let mut candidates: Vec<Rational> = Vec::new();
        for a in &nums {
            for b in &dens {
                for s in [a.clone(), -a.clone()] {
                    let r = Rational::new(s, b.clone());
                    if !candidates.contains(&r) {
                        candidates.push(r);
                    }
                }
            }
        }
        candidates.sort();
        for r in candidates {
            let mut mult = 0;
            while cs.len() > 1 && eval(&cs, &r).is_zero() {
                cs = deflate(&cs, &r);
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(RootExtraction {
        roots,
        remainder: from_coefficients(p, v, &cs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, parse, rat, VarSet};

    fn yv() -> VarSet {
        VarSet::new(["x", "y"]).unwrap()
    }

    #[test]
    fn quartic_splits() {
        let p = parse("-y^4 + 5*y^2 - 4", &yv()).unwrap();
        let r = rational_roots(&p, "y").unwrap();
        let got: Vec<_> = r.roots.iter().map(|(a, m)| (a.clone(), *m)).collect();
        assert_eq!(got, vec![(int(-2), 1), (int(-1), 1), (int(1), 1), (int(2), 1)]);
        assert_eq!(r.remainder.constant_value(), Some(int(-1)));
    }

    #[test]
    fn multiplicities_and_fractions() {
        let p = parse("-y^2", &yv()).unwrap();
        let r = rational_roots(&p, "y").unwrap();
        assert_eq!(r.roots, vec![(int(0), 2)]);
        let q = parse("(3*y - 2)^3*(y + 1/2)", &yv()).unwrap();
        let r = rational_roots(&q, "y").unwrap();
        assert_eq!(r.roots, vec![(rat(-1, 2), 1), (rat(2, 3), 3)]);
    }

    #[test]
    fn irrational_part_is_left_over() {
        let p = parse("(2*y^2 - 5)*(y - 3)", &yv()).unwrap();
        let r = rational_roots(&p, "y").unwrap();
        assert_eq!(r.roots, vec![(int(3), 1)]);
        assert_eq!(r.remainder, parse("2*y^2 - 5", &yv()).unwrap());
        assert!(rational_roots(&parse("x*y", &yv()).unwrap(), "y").is_err());
    }
}
