//! Leading-component test for automorphisms of `R[y, z]` over `R = C[x]`.
//!
//! If a `C[x]`-automorphism `(x, φ₂, φ₃)` is tame and its fiber degrees
//! satisfy `d₂ ≤ d₃`, then `d₂ | d₃` and the top homogeneous parts obey
//! `F₃ = c·F₂^(d₃/d₂)` for some `c ∈ C[x]`. A failure of that relation is a
//! certificate of wildness; success proves nothing.

use super::{MapError, PolyAuto};
use crate::polyring::{MultiPoly, PolyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionClass {
    /// Both fiber components have degree at most one.
    Degenerate,
    /// The leading components are compatible with tameness.
    NoObstruction,
    /// The leading components rule out a tame decomposition.
    WildnessCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameObstructionReport {
    pub base_var: String,
    pub fiber_vars: [String; 2],
    /// Degrees in the fiber variables of the two non-trivial components.
    pub d2: u32,
    pub d3: u32,
    /// Homogeneous parts of degree `d2` and `d3`.
    pub f2: MultiPoly,
    pub f3: MultiPoly,
    /// Exponent `k` in the tested relation `F_high = c·F_low^k`.
    pub power: u32,
    pub divisible: bool,
    /// The quotient `c` when `divisible` and the report is not degenerate.
    pub witness: Option<MultiPoly>,
    pub class: ObstructionClass,
}

pub fn tame_obstruction(
    a: &PolyAuto,
    base_var: &str,
    fiber_vars: [&str; 2],
) -> Result<TameObstructionReport, MapError> {
    let m = a.forward();
    let vars = m.vars();
    if vars.len() != 3 {
        return Err(MapError::Arity {
            expected: 3,
            got: vars.len(),
        });
    }
    for v in fiber_vars.iter().chain([&base_var]) {
        vars.require(v)?;
    }
    if fiber_vars[0] == fiber_vars[1] || fiber_vars.contains(&base_var) {
        return Err(PolyError::DuplicateVariable(base_var.to_string()).into());
    }
    if m.component(base_var)? != &MultiPoly::var(vars, base_var)? {
        return Err(MapError::BaseNotFixed(base_var.to_string()));
    }

    let phi2 = m.component(fiber_vars[0])?;
    let phi3 = m.component(fiber_vars[1])?;
    let d2 = phi2.degree_in(&fiber_vars)?.unwrap_or(0);
    let d3 = phi3.degree_in(&fiber_vars)?.unwrap_or(0);
    let f2 = phi2.homogeneous_component(&fiber_vars, d2.into())?;
    let f3 = phi3.homogeneous_component(&fiber_vars, d3.into())?;

    let mut report = TameObstructionReport {
        base_var: base_var.to_string(),
        fiber_vars: fiber_vars.map(str::to_string),
        d2,
        d3,
        f2: f2.clone(),
        f3: f3.clone(),
        power: 1,
        divisible: true,
        witness: None,
        class: ObstructionClass::Degenerate,
    };
    if d2.max(d3) <= 1 {
        return Ok(report);
    }

    let (lo_deg, hi_deg, lo, hi) = if d2 <= d3 {
        (d2, d3, &f2, &f3)
    } else {
        (d3, d2, &f3, &f2)
    };
    let witness = if lo_deg == 0 || hi_deg % lo_deg != 0 {
        None
    } else {
        report.power = hi_deg / lo_deg;
        match hi.divide_exact(&lo.pow(report.power)) {
            Ok(q) if q.uses_only(&[base_var]) => Some(q),
            Ok(_) | Err(PolyError::NotDivisible) => None,
            Err(e) => return Err(e.into()),
        }
    };
    report.divisible = witness.is_some();
    report.witness = witness;
    report.class = if report.divisible {
        ObstructionClass::NoObstruction
    } else {
        ObstructionClass::WildnessCertificate
    };
    Ok(report)
}
