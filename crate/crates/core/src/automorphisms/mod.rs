//! Polynomial endomorphisms and certified automorphisms of affine space.
//!
//! A [`PolyMap`] stores the image of each coordinate, i.e. the point map
//! `p ↦ (F_1(p), …, F_n(p))`. Its co-morphism pulls a polynomial `q` back to
//! `q(F_1, …, F_n)`, see [`PolyMap::pull_back`].
//!
//! Composition follows point-action order: `compose(g, h)` applies `h`
//! first, then `g`, so its components are `g_i(h_1, …, h_n)`. Identities
//! written as products of ring automorphisms (co-morphisms), such as
//! `τ⁻¹ ∘ exp(−u∂) ∘ τ ∘ exp(u∂)`, read right to left in ring order; use
//! [`comorphism_product`] for those.

pub mod nagata;
mod obstruction;

use std::collections::BTreeMap;
use std::fmt;

use crate::polyring::{MultiPoly, PolyError, VarSet};
use crate::textfmt::{parse_script, ScriptError};

pub use obstruction::{tame_obstruction, ObstructionClass, TameObstructionReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("shift for `{var}` uses `{uses}`, which is not an earlier variable")]
    NotTriangular { var: String, uses: String },
    #[error("variable `{0}` already present")]
    NameCollision(String),
    #[error("map does not fix `{0}`")]
    BaseNotFixed(String),
    #[error("line {line}: unknown component `{name}`")]
    UnknownComponent { line: usize, name: String },
    #[error("line {line}: component `{name}` assigned twice")]
    DuplicateComponent { line: usize, name: String },
    #[error(transparent)]
    NotInverse(#[from] NotInverse),
}

/// Polynomial endomorphism of affine n-space, stored by coordinate images.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    vars: VarSet,
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(vars: &VarSet, components: Vec<MultiPoly>) -> Result<Self, MapError> {
        if components.len() != vars.len() {
            return Err(MapError::Arity {
                expected: vars.len(),
                got: components.len(),
            });
        }
        for c in &components {
            if c.vars() != vars {
                return Err(PolyError::VarMismatch {
                    left: vars.to_string(),
                    right: c.vars().to_string(),
                }
                .into());
            }
        }
        Ok(PolyMap {
            vars: vars.clone(),
            components,
        })
    }

    /// Map given by the listed components; every other coordinate is fixed.
    pub fn from_named(vars: &VarSet, named: &[(&str, MultiPoly)]) -> Result<Self, MapError> {
        let mut m = Self::identity(vars);
        for (name, img) in named {
            let i = vars.require(name)?;
            m.components[i] = img.clone();
        }
        Self::new(vars, m.components)
    }

    pub fn identity(vars: &VarSet) -> Self {
        PolyMap {
            vars: vars.clone(),
            components: vars
                .names()
                .iter()
                .map(|n| MultiPoly::var(vars, n).unwrap())
                .collect(),
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, name: &str) -> Result<&MultiPoly, PolyError> {
        Ok(&self.components[self.vars.require(name)?])
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.vars)
    }

    /// `q ↦ q(F_1, …, F_n)`.
    pub fn pull_back(&self, q: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if q.vars() != &self.vars {
            return Err(PolyError::VarMismatch {
                left: self.vars.to_string(),
                right: q.vars().to_string(),
            });
        }
        q.substitute_all(&self.components, &self.vars)
    }

    /// Adds `newvar` as a last coordinate mapped to itself.
    pub fn extend_variable(&self, newvar: &str) -> Result<Self, MapError> {
        if self.vars.contains(newvar) {
            return Err(MapError::NameCollision(newvar.to_string()));
        }
        let big = self.vars.extended(newvar)?;
        let mut comps = self
            .components
            .iter()
            .map(|c| c.embed(&big))
            .collect::<Result<Vec<_>, _>>()?;
        comps.push(MultiPoly::var(&big, newvar)?);
        Self::new(&big, comps)
    }

    /// Parses the map file format: `vars` and `let` lines followed by
    /// assignments `y' = expr`. Coordinates without an assignment are fixed.
    pub fn parse(text: &str, default_vars: &VarSet) -> Result<Self, MapError> {
        let script = parse_script(text, default_vars)?;
        let mut m = Self::identity(&script.vars);
        let mut seen = Vec::new();
        for (line, lhs, value) in script.assignments {
            let name = lhs.strip_suffix('\'').unwrap_or(&lhs).trim().to_string();
            let i = script
                .vars
                .index_of(&name)
                .ok_or_else(|| MapError::UnknownComponent {
                    line,
                    name: name.clone(),
                })?;
            if seen.contains(&i) {
                return Err(MapError::DuplicateComponent { line, name });
            }
            seen.push(i);
            m.components[i] = value;
        }
        Ok(m)
    }
}

impl fmt::Display for PolyMap {
    /// One `v' = component` line per coordinate.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.vars.names().iter().zip(&self.components) {
            writeln!(f, "{n}' = {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap[{}](", self.vars)?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Point-order composition: apply `h`, then `g`.
pub fn compose(g: &PolyMap, h: &PolyMap) -> Result<PolyMap, MapError> {
    if g.vars != h.vars {
        return Err(PolyError::VarMismatch {
            left: g.vars.to_string(),
            right: h.vars.to_string(),
        }
        .into());
    }
    let comps = g
        .components
        .iter()
        .map(|c| c.substitute_all(&h.components, &h.vars))
        .collect::<Result<Vec<_>, _>>()?;
    PolyMap::new(&g.vars, comps)
}

/// Ring-order product `φ_1 ∘ φ_2 ∘ … ∘ φ_k` of the co-morphisms of `maps`:
/// the result sends each coordinate `v` to `φ_1(φ_2(…φ_k(v)))`. Equivalent
/// to composing the point maps in the opposite order.
pub fn comorphism_product(maps: &[&PolyMap]) -> Result<PolyMap, MapError> {
    let (first, rest) = maps.split_first().ok_or(MapError::Arity { expected: 1, got: 0 })?;
    let mut acc = (*first).clone();
    for m in rest {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

/// Sets the parameter `param` of a map on `R[param]` that fixes it to
/// `value ∈ R`, giving a map on `R`.
pub fn specialize(map: &PolyMap, param: &str, value: &MultiPoly) -> Result<PolyMap, MapError> {
    let lifted = map.vars();
    if map.component(param)? != &MultiPoly::var(lifted, param)? {
        return Err(MapError::BaseNotFixed(param.to_string()));
    }
    let base = lifted.without(param)?;
    let v = value.embed(lifted)?;
    let comps = base
        .names()
        .iter()
        .map(|n| {
            map.component(n)?
                .substitute(&[(param, v.clone())])?
                .restrict(&base)
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    PolyMap::new(&base, comps)
}

/// `g ∘ h` (point order) for `g = G|_{t=value}` and `h = H|_{t=value}`,
/// where `G` and `H` act on `R[t]` fixing `t`. The composition happens
/// over `R[t]` and the parameter is set afterwards, which keeps degrees
/// low when `value` has high degree.
pub fn compose_specialized(g: &PolyMap, h: &PolyMap, param: &str, value: &MultiPoly) -> Result<PolyMap, MapError> {
    comorphism_product_specialized(&[h, g], param, value)
}

/// [`comorphism_product`] of maps on `R[t]` that all fix `t`, followed by
/// setting `t = value`. Equals the product of the specialized maps.
pub fn comorphism_product_specialized(
    maps: &[&PolyMap],
    param: &str,
    value: &MultiPoly,
) -> Result<PolyMap, MapError> {
    for m in maps {
        if m.component(param)? != &MultiPoly::var(m.vars(), param)? {
            return Err(MapError::BaseNotFixed(param.to_string()));
        }
    }
    specialize(&comorphism_product(maps)?, param, value)
}

/// Which composition failed in [`verify_inverse_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseSide {
    /// `g ∘ h`
    ForwardAfterInverse,
    /// `h ∘ g`
    InverseAfterForward,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not inverse: component `{component}` of {side:?} is {got}")]
pub struct NotInverse {
    pub side: InverseSide,
    pub component: String,
    pub got: MultiPoly,
}

/// Automorphism together with an inverse that has been checked exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyAuto {
    forward: PolyMap,
    inverse: PolyMap,
}

impl PolyAuto {
    pub fn identity(vars: &VarSet) -> Self {
        PolyAuto {
            forward: PolyMap::identity(vars),
            inverse: PolyMap::identity(vars),
        }
    }

    pub fn forward(&self) -> &PolyMap {
        &self.forward
    }

    pub fn inverse(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn inverted(&self) -> PolyAuto {
        PolyAuto {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// Point-order composition `self ∘ then_first`.
    pub fn compose(&self, then_first: &PolyAuto) -> Result<PolyAuto, MapError> {
        Ok(PolyAuto {
            forward: compose(&self.forward, &then_first.forward)?,
            inverse: compose(&then_first.inverse, &self.inverse)?,
        })
    }

    /// Pairs maps whose inverse property the caller has already established.
    pub(crate) fn from_verified(forward: PolyMap, inverse: PolyMap) -> Self {
        PolyAuto { forward, inverse }
    }

    pub fn extend_variable(&self, newvar: &str) -> Result<PolyAuto, MapError> {
        Ok(PolyAuto {
            forward: self.forward.extend_variable(newvar)?,
            inverse: self.inverse.extend_variable(newvar)?,
        })
    }
}

/// Certifies `h` as the two-sided inverse of `g`.
pub fn verify_inverse_pair(g: &PolyMap, h: &PolyMap) -> Result<PolyAuto, NotInverse> {
    for (side, a, b) in [
        (InverseSide::ForwardAfterInverse, g, h),
        (InverseSide::InverseAfterForward, h, g),
    ] {
        let comp = compose(a, b).map_err(|_| NotInverse {
            side,
            component: String::new(),
            got: MultiPoly::zero(g.vars()),
        })?;
        let id = PolyMap::identity(g.vars());
        if let Some(k) = (0..id.components.len()).find(|&k| comp.components[k] != id.components[k]) {
            return Err(NotInverse {
                side,
                component: g.vars().names()[k].clone(),
                got: comp.components[k].clone(),
            });
        }
    }
    Ok(PolyAuto {
        forward: g.clone(),
        inverse: h.clone(),
    })
}

/// Triangular automorphism `v_i ↦ v_i + s_i(v_1, …, v_{i-1})`.
///
/// Each shift may only involve variables strictly earlier in `vars`. The
/// inverse is built by back-substitution and then verified.
pub fn make_triangular(vars: &VarSet, shifts: &[(&str, MultiPoly)]) -> Result<PolyAuto, MapError> {
    let mut by_index: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    for (name, s) in shifts {
        let i = vars.require(name)?;
        if s.vars() != vars {
            return Err(PolyError::VarMismatch {
                left: vars.to_string(),
                right: s.vars().to_string(),
            }
            .into());
        }
        let earlier: Vec<&str> = vars.names()[..i].iter().map(String::as_str).collect();
        if let Some(bad) = s.variables_used().into_iter().find(|u| !earlier.contains(u)) {
            return Err(MapError::NotTriangular {
                var: name.to_string(),
                uses: bad.to_string(),
            });
        }
        by_index.insert(i, s.clone());
    }
    let ident = PolyMap::identity(vars);
    let mut fwd = ident.components.clone();
    let mut inv = ident.components.clone();
    for i in 0..vars.len() {
        if let Some(s) = by_index.get(&i) {
            fwd[i] = &fwd[i] + s;
            // inverse_i = v_i - s_i(inverse_1, …, inverse_{i-1}); later
            // entries of `inv` are still coordinates and do not occur in s_i
            let back = s.substitute_all(&inv, vars)?;
            inv[i] = &inv[i] - &back;
        }
    }
    Ok(verify_inverse_pair(
        &PolyMap::new(vars, fwd)?,
        &PolyMap::new(vars, inv)?,
    )?)
}

/// `by⁻¹ ∘ a ∘ by` in point order.
pub fn conjugate(a: &PolyAuto, by: &PolyAuto) -> Result<PolyAuto, MapError> {
    by.inverted().compose(&a.compose(by)?)
}
