//! Derivations of a polynomial ring, given by their values on the
//! generators, and the exponential automorphisms of locally nilpotent ones.

use std::fmt;

use num_traits::One;

use crate::automorphisms::{comorphism_product_specialized, compose, specialize, MapError, PolyAuto, PolyMap};
use crate::polyring::{int, MultiPoly, PolyError, Rational, VarSet};
use crate::textfmt::{parse_script, ScriptError};

/// Iteration cap used when the caller has no better bound.
pub const DEFAULT_NILPOTENCY_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DerivationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("nilpotency bound must be at least 1")]
    ZeroBound,
    #[error("`{generator}` is not killed within {bound} iterations; last iterate {last}")]
    NotNilpotentWithinBound {
        generator: String,
        bound: usize,
        last: MultiPoly,
    },
    #[error("multiplier not annihilated by the derivation: image is {image}")]
    MultiplierNotInKernel { image: MultiPoly },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("exp(t·d) and exp(−t·d) do not compose to the identity: {0}")]
    NotInverse(PolyMap),
    #[error("line {line}: `{lhs}` is not of the form d<variable>")]
    BadGenerator { line: usize, lhs: String },
    #[error("line {line}: image of `{name}` given twice")]
    DuplicateGenerator { line: usize, name: String },
}

/// A derivation, stored as the image of each generator. The value on an
/// arbitrary polynomial follows from the Leibniz rule.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    vars: VarSet,
    images: Vec<MultiPoly>,
}

/// Iterates of one generator until they vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorChain {
    pub generator: String,
    /// `d(g), d²(g), …`, ending with the first zero.
    pub chain: Vec<MultiPoly>,
}

impl GeneratorChain {
    /// Smallest `n ≥ 1` with `dⁿ(g) = 0`.
    pub fn index(&self) -> usize {
        self.chain.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotencyCertificate {
    pub generators: Vec<GeneratorChain>,
}

impl NilpotencyCertificate {
    pub fn index_of(&self, generator: &str) -> Option<usize> {
        self.generators
            .iter()
            .find(|g| g.generator == generator)
            .map(GeneratorChain::index)
    }

    /// `(generator, index)` pairs in variable order.
    pub fn indices(&self) -> Vec<(&str, usize)> {
        self.generators
            .iter()
            .map(|g| (g.generator.as_str(), g.index()))
            .collect()
    }
}

impl Derivation {
    /// Derivation with the listed generator images; unlisted generators map
    /// to zero.
    pub fn new(vars: &VarSet, images: &[(&str, MultiPoly)]) -> Result<Self, PolyError> {
        let mut out = Self::zero(vars);
        for (name, img) in images {
            let i = vars.require(name)?;
            if img.vars() != vars {
                return Err(PolyError::VarMismatch {
                    left: vars.to_string(),
                    right: img.vars().to_string(),
                });
            }
            out.images[i] = img.clone();
        }
        Ok(out)
    }

    pub fn zero(vars: &VarSet) -> Self {
        Derivation {
            vars: vars.clone(),
            images: vec![MultiPoly::zero(vars); vars.len()],
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn image(&self, generator: &str) -> Result<&MultiPoly, PolyError> {
        Ok(&self.images[self.vars.require(generator)?])
    }

    /// `p ↦ Σ_v ∂p/∂v · d(v)`.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if p.vars() != &self.vars {
            return Err(PolyError::VarMismatch {
                left: self.vars.to_string(),
                right: p.vars().to_string(),
            });
        }
        let mut acc = MultiPoly::zero(&self.vars);
        for (name, img) in self.vars.names().iter().zip(&self.images) {
            if img.is_zero() {
                continue;
            }
            let dp = p.partial(name)?;
            if !dp.is_zero() {
                acc = &acc + &(&dp * img);
            }
        }
        Ok(acc)
    }

    pub fn in_kernel(&self, p: &MultiPoly) -> Result<bool, PolyError> {
        Ok(self.apply(p)?.is_zero())
    }

    /// `m · d`.
    pub fn scaled(&self, m: &MultiPoly) -> Result<Self, PolyError> {
        let images = self
            .images
            .iter()
            .map(|i| m.checked_mul(i))
            .collect::<Result<_, _>>()?;
        Ok(Derivation {
            vars: self.vars.clone(),
            images,
        })
    }

    /// Same derivation on a ring with one more generator, which it kills.
    pub fn extend_variable(&self, newvar: &str) -> Result<Self, PolyError> {
        let big = self.vars.extended(newvar)?;
        let mut images = self
            .images
            .iter()
            .map(|i| i.embed(&big))
            .collect::<Result<Vec<_>, _>>()?;
        images.push(MultiPoly::zero(&big));
        Ok(Derivation { vars: big, images })
    }

    fn chain(&self, generator: usize, bound: usize) -> Result<GeneratorChain, DerivationError> {
        let name = &self.vars.names()[generator];
        let mut chain = Vec::new();
        let mut cur = MultiPoly::var(&self.vars, name)?;
        for _ in 0..bound {
            cur = self.apply(&cur)?;
            let done = cur.is_zero();
            chain.push(cur.clone());
            if done {
                return Ok(GeneratorChain {
                    generator: name.clone(),
                    chain,
                });
            }
        }
        Err(DerivationError::NotNilpotentWithinBound {
            generator: name.clone(),
            bound,
            last: cur,
        })
    }

    /// Iterates the derivation on every generator until it vanishes, failing
    /// if some generator survives `bound` applications.
    pub fn nilpotency_certificate(&self, bound: usize) -> Result<NilpotencyCertificate, DerivationError> {
        if bound == 0 {
            return Err(DerivationError::ZeroBound);
        }
        let generators = (0..self.vars.len())
            .map(|i| self.chain(i, bound))
            .collect::<Result<_, _>>()?;
        Ok(NilpotencyCertificate { generators })
    }

    /// `exp(m·d)` as a map on coordinates: `g ↦ Σ_k mᵏ dᵏ(g) / k!`.
    ///
    /// Requires `d(m) = 0`, so that `(m·d)ᵏ = mᵏ dᵏ` and the sum is finite
    /// once `d` is nilpotent on every generator.
    pub fn exponential(&self, multiplier: &MultiPoly, bound: usize) -> Result<PolyMap, DerivationError> {
        if bound == 0 {
            return Err(DerivationError::ZeroBound);
        }
        let dm = self.apply(multiplier)?;
        if !dm.is_zero() {
            return Err(DerivationError::MultiplierNotInKernel { image: dm });
        }
        if multiplier.is_zero() {
            return Ok(PolyMap::identity(&self.vars));
        }
        let mut components = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let chain = self.chain(i, bound)?;
            let mut acc = MultiPoly::var(&self.vars, name)?;
            let mut mk = MultiPoly::one(&self.vars);
            let mut fact = Rational::one();
            for (k, dk) in chain.chain.iter().enumerate() {
                if dk.is_zero() {
                    break;
                }
                mk = &mk * multiplier;
                fact *= int(k as i64 + 1);
                acc = &acc + &(&mk * dk).scale(&fact.recip());
            }
            components.push(acc);
        }
        Ok(PolyMap::new(&self.vars, components).expect("components share the ring"))
    }

    /// `exp(t·d)` on `R[t]` for a generator `t` not in the ring, which `d`
    /// kills. Returns the name chosen for `t` and the map.
    pub fn parametric_exponential(&self, bound: usize) -> Result<(String, PolyMap), DerivationError> {
        let mut t = "t".to_string();
        while self.vars.contains(&t) {
            t.push('_');
        }
        let lifted = self.extend_variable(&t)?;
        let tv = MultiPoly::var(&lifted.vars, &t)?;
        Ok((t, lifted.exponential(&tv, bound)?))
    }

    /// `exp(m·d)` with its inverse `exp(−m·d)`, both compositions checked
    /// to be the identity.
    ///
    /// The check composes `exp(±t·d)` over `R[t]` and sets `t = m`
    /// afterwards: the specialization is a ring map, so the identity over
    /// `R[t]` gives the identity over `R`, without ever expanding
    /// polynomials of degree `deg(m)²`.
    pub fn exponential_automorphism(&self, multiplier: &MultiPoly, bound: usize) -> Result<PolyAuto, DerivationError> {
        let forward = self.exponential(multiplier, bound)?;
        let inverse = self.exponential(&-multiplier, bound)?;
        let (t, lifted) = self.parametric_exponential(bound)?;
        let tv = MultiPoly::var(lifted.vars(), &t)?;
        let lifted_inv = self.extend_variable(&t)?.exponential(&-&tv, bound)?;
        for comp in [compose(&lifted, &lifted_inv)?, compose(&lifted_inv, &lifted)?] {
            if !comp.is_identity() {
                return Err(DerivationError::NotInverse(comp));
            }
        }
        debug_assert_eq!(specialize(&lifted, &t, multiplier).ok().as_ref(), Some(&forward));
        Ok(PolyAuto::from_verified(forward, inverse))
    }

    /// Both sides of the stable-tameness identity
    /// `exp(m·d) = τ⁻¹ ∘ exp(−u·d) ∘ τ ∘ exp(u·d)` on `R[u]`, with
    /// `τ: u ↦ u + m` and the product taken in ring order.
    ///
    /// Every factor is the value at `t = m` of a map on `R[u, t]` fixing
    /// `t` (`τ` becomes `u ↦ u + t`), so the product is formed there and
    /// specialized at the end.
    pub fn stable_tameness(&self, multiplier: &MultiPoly, u: &str, bound: usize) -> Result<StableTameness, DerivationError> {
        let extended = self.exponential(multiplier, bound)?.extend_variable(u)?;
        let du = self.extend_variable(u)?;
        let mut t = "t".to_string();
        while du.vars.contains(&t) {
            t.push('_');
        }
        let dut = du.extend_variable(&t)?;
        let big = dut.vars.clone();
        let uv = MultiPoly::var(&big, u)?;
        let tv = MultiPoly::var(&big, &t)?;
        let e_plus = dut.exponential(&uv, bound)?;
        let e_minus = dut.exponential(&-&uv, bound)?;
        let tau = PolyMap::from_named(&big, &[(u, &uv + &tv)])?;
        let tau_inv = PolyMap::from_named(&big, &[(u, &uv - &tv)])?;
        let m = multiplier.embed(&du.vars)?;
        let product = comorphism_product_specialized(&[&tau_inv, &e_minus, &tau, &e_plus], &t, &m)?;
        Ok(StableTameness {
            extended,
            product,
            tau: specialize(&tau, &t, &m)?,
        })
    }

    /// Nonzero values `m·d(g)` on the generators. Their common zero set is
    /// the fixed locus of `exp(m·d)`.
    pub fn fixed_ideal_generators(&self, multiplier: &MultiPoly) -> Result<Vec<MultiPoly>, PolyError> {
        self.images
            .iter()
            .filter(|i| !i.is_zero())
            .map(|i| multiplier.checked_mul(i))
            .filter(|r| !matches!(r, Ok(p) if p.is_zero()))
            .collect()
    }

    /// Parses the derivation file format: optional `vars`/`let` lines, then
    /// `dy = expr` per generator. Missing generators map to zero.
    pub fn parse(text: &str, default_vars: &VarSet) -> Result<Self, DerivationError> {
        Ok(Self::parse_with_bindings(text, default_vars)?.0)
    }

    /// Like [`Derivation::parse`], also returning the `let` bindings so that
    /// callers can parse further expressions in the same environment.
    pub fn parse_with_bindings(
        text: &str,
        default_vars: &VarSet,
    ) -> Result<(Self, std::collections::BTreeMap<String, MultiPoly>), DerivationError> {
        let script = parse_script(text, default_vars)?;
        let mut out = Self::zero(&script.vars);
        let mut seen = Vec::new();
        for (line, lhs, value) in script.assignments {
            let idx = lhs
                .strip_prefix('d')
                .and_then(|n| script.vars.index_of(n.trim()))
                .ok_or_else(|| DerivationError::BadGenerator {
                    line,
                    lhs: lhs.clone(),
                })?;
            if seen.contains(&idx) {
                return Err(DerivationError::DuplicateGenerator {
                    line,
                    name: script.vars.names()[idx].clone(),
                });
            }
            seen.push(idx);
            out.images[idx] = value;
        }
        Ok((out, script.lets))
    }
}

/// Output of [`Derivation::stable_tameness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableTameness {
    /// `exp(m·d)` extended by the identity on `u`.
    pub extended: PolyMap,
    /// `τ⁻¹ ∘ exp(−u·d) ∘ τ ∘ exp(u·d)`.
    pub product: PolyMap,
    /// `u ↦ u + m`.
    pub tau: PolyMap,
}

impl StableTameness {
    pub fn holds(&self) -> bool {
        self.extended == self.product
    }
}

impl fmt::Display for Derivation {
    /// The file format, one `dv = image` line per nonzero image.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.vars.names().join(", "))?;
        for (n, img) in self.vars.names().iter().zip(&self.images) {
            if !img.is_zero() {
                writeln!(f, "d{n} = {img}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[{}](", self.vars)?;
        for (k, (n, img)) in self.vars.names().iter().zip(&self.images).enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "d{n} = {img}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::nagata;
    use crate::danielewski::{canonical_surface, surface_derivation};
    use crate::polyring::parse;

    fn xyz() -> VarSet {
        VarSet::new(["x", "y", "z"]).unwrap()
    }

    fn p(s: &str) -> MultiPoly {
        parse(s, &xyz()).unwrap()
    }

    #[test]
    fn surface_derivation_values() {
        let s = canonical_surface();
        let d = surface_derivation();
        assert_eq!(d.apply(&s.f).unwrap(), p("x^2"));
        assert!(d.apply(&s.p).unwrap().is_zero());
        assert!(d.apply(&p("x")).unwrap().is_zero());
    }

    #[test]
    fn nilpotency_indices() {
        let d = surface_derivation();
        let cert = d.nilpotency_certificate(10).unwrap();
        assert_eq!(cert.indices(), vec![("x", 1), ("y", 3), ("z", 5)]);
        let ychain = &cert.generators[1].chain;
        assert_eq!(ychain[1], p("2*x^3"));
        assert_eq!(cert.generators[2].chain[3], p("24*x^5"));

        let n = nagata::derivation();
        let cert = n.nilpotency_certificate(10).unwrap();
        assert_eq!(cert.indices(), vec![("x", 1), ("y", 2), ("z", 3)]);

        let euler = Derivation::new(&xyz(), &[("x", p("x"))]).unwrap();
        match euler.nilpotency_certificate(5) {
            Err(DerivationError::NotNilpotentWithinBound { generator, last, .. }) => {
                assert_eq!(generator, "x");
                assert_eq!(last, p("x"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(d.nilpotency_certificate(0), Err(DerivationError::ZeroBound));
        assert!(d.nilpotency_certificate(4).is_err());
        assert!(d.nilpotency_certificate(5).is_ok());
    }

    #[test]
    fn kernel_membership() {
        let s = canonical_surface();
        let d = surface_derivation();
        assert!(d.in_kernel(&s.p).unwrap());
        let x = p("x");
        let combo = &(&x.pow(3) * &s.p.pow(2)) + &x.scale(&int(7));
        assert!(d.in_kernel(&combo).unwrap());
        assert!(!d.in_kernel(&p("y")).unwrap());
    }

    #[test]
    fn exponential_examples() {
        let n = nagata::derivation();
        let sigma = n.exponential(&MultiPoly::one(&xyz()), 10).unwrap();
        assert_eq!(sigma, nagata::displayed_sigma());

        let s = canonical_surface();
        let d = surface_derivation();
        let e = d.exponential(&s.p, 10).unwrap();
        let f2 = &s.f.scale(&int(2)) + &p("5");
        let x = p("x");
        let expected_y = &(&p("y") + &(&(&x * &f2) * &s.p)) + &(&x.pow(3) * &s.p.pow(2));
        assert_eq!(e.component("y").unwrap(), &expected_y);

        assert!(d.exponential(&MultiPoly::zero(&xyz()), 1).unwrap().is_identity());
        assert!(matches!(
            d.exponential(&p("y"), 10),
            Err(DerivationError::MultiplierNotInKernel { .. })
        ));
    }

    #[test]
    fn exponential_inverse() {
        let s = canonical_surface();
        let d = surface_derivation();
        let (t, lifted) = d.parametric_exponential(10).unwrap();
        let e = d.exponential(&s.p, 10).unwrap();
        assert_eq!(specialize(&lifted, &t, &s.p).unwrap(), e);
        let a = d.exponential_automorphism(&s.p, 10).unwrap();
        assert_eq!(a.forward(), &e);
        assert_eq!(a.inverse(), &d.exponential(&-&s.p, 10).unwrap());
        // the surface is invariant
        assert_eq!(e.pull_back(&s.p).unwrap(), s.p);
    }

    #[test]
    fn stable_tameness_identities() {
        let s = canonical_surface();
        let st = surface_derivation().stable_tameness(&s.p, "u", 64).unwrap();
        assert!(st.holds());
        assert_eq!(st.tau.component("u").unwrap(), &(&MultiPoly::var(st.tau.vars(), "u").unwrap() + &s.p.embed(st.tau.vars()).unwrap()));

        let v = xyz();
        let n = nagata::triangular_part(&v)
            .stable_tameness(&nagata::delta(&v), "u", 64)
            .unwrap();
        assert!(n.holds());
        assert_eq!(&n.tau, nagata::tau().forward());
        assert_eq!(n.extended, nagata::displayed_sigma().extend_variable("u").unwrap());
        // read in point order, the same word is the inverse
        let d1 = nagata::partial_one();
        let one = MultiPoly::one(d1.vars());
        let e_plus = d1.exponential(&one, 64).unwrap();
        let e_minus = d1.exponential(&-&one, 64).unwrap();
        let tau = nagata::tau();
        let word = compose(
            tau.inverse(),
            &compose(&e_minus, &compose(tau.forward(), &e_plus).unwrap()).unwrap(),
        )
        .unwrap();
        let inv = nagata::derivation()
            .exponential(&MultiPoly::int(&v, -1), 64)
            .unwrap()
            .extend_variable("u")
            .unwrap();
        assert_eq!(word, inv);
    }

    #[test]
    fn fixed_ideal() {
        let s = canonical_surface();
        let d = surface_derivation();
        let gens = d.fixed_ideal_generators(&MultiPoly::one(&xyz())).unwrap();
        let f2 = &s.f.scale(&int(2)) + &p("5");
        assert_eq!(gens, vec![&p("x") * &f2, &p("x") + &(&p("2*y") * &f2)]);
        let gp = d.fixed_ideal_generators(&s.p).unwrap();
        assert_eq!(gp[0], &s.p * &gens[0]);
        assert!(d.fixed_ideal_generators(&MultiPoly::zero(&xyz())).unwrap().is_empty());
    }

    #[test]
    fn file_format() {
        let text = "let f = x*z - y^2\ndy = x*(2*f + 5)\ndz = x + 2*y*(2*f + 5)\n";
        let d = Derivation::parse(text, &xyz()).unwrap();
        assert_eq!(d, surface_derivation());
        assert_eq!(Derivation::parse(&d.to_string(), &xyz()).unwrap(), d);
        assert!(matches!(
            Derivation::parse("dw = x", &xyz()),
            Err(DerivationError::BadGenerator { line: 1, .. })
        ));
        assert!(matches!(
            Derivation::parse("dy = x\ndy = 1", &xyz()),
            Err(DerivationError::DuplicateGenerator { line: 2, .. })
        ));
        assert!(Derivation::parse("y = x", &xyz()).is_err());
    }

    #[test]
    fn extension_kills_new_variable() {
        let d = surface_derivation().extend_variable("u").unwrap();
        assert_eq!(d.vars().names(), ["x", "y", "z", "u"]);
        assert!(d.image("u").unwrap().is_zero());
    }
}
