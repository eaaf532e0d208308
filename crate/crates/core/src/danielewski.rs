//! The surface `S = {xy − (f+1)(f+4) = 0}`, `f = xz − y²`, in C³: its
//! polynomials, the fibers of `pr_x`, the fixed locus of the ambient
//! additive-group action, and the transition cocycle of `S` as a principal
//! bundle over the affine line with four origins.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::derivations::Derivation;
use crate::polyring::{
    int, parse, rat, rational_roots, LaurentPoly, MultiPoly, PolyError, Rational, VarSet,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] crate::polyring::ParseError),
    #[error("base value must be nonzero")]
    ZeroBase,
    #[error("pole at label {0}")]
    Pole(i32),
}

pub fn xyz() -> VarSet {
    VarSet::new(["x", "y", "z"]).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    /// `xz − y²`
    pub f: MultiPoly,
    /// `xy − (f+1)(f+4)`, the equation every proof works with.
    pub p: MultiPoly,
    /// `x(xz² − 2y²z + 5z) + y⁴ − 5y² + 4`, the quartic as it is usually
    /// displayed. Equals `(f+1)(f+4) = xy − P`, not a multiple of `P`.
    pub displayed: MultiPoly,
}

/// Builds the surface polynomials and checks the identities tying them
/// together (panics if the arithmetic ever disagrees).
pub fn canonical_surface() -> SurfaceData {
    let v = xyz();
    let f = parse("x*z - y^2", &v).unwrap();
    let one = MultiPoly::int(&v, 1);
    let four = MultiPoly::int(&v, 4);
    let prod = &(&f + &one) * &(&f + &four);
    let xy = parse("x*y", &v).unwrap();
    let p = &xy - &prod;
    let displayed = parse("x*(x*z^2 - 2*y^2*z + 5*z) + y^4 - 5*y^2 + 4", &v).unwrap();
    assert_eq!(displayed, prod, "displayed quartic is (f+1)(f+4)");
    assert_eq!(&displayed + &p, xy);
    assert!(surface_derivation().in_kernel(&p).unwrap());
    SurfaceData { f, p, displayed }
}

/// `x(2f+5)∂/∂y + (x + 2y(2f+5))∂/∂z`.
pub fn surface_derivation() -> Derivation {
    let v = xyz();
    let mut lets = BTreeMap::new();
    lets.insert("f".to_string(), parse("x*z - y^2", &v).unwrap());
    let dy = crate::polyring::parse_with("x*(2*f + 5)", &v, &lets).unwrap();
    let dz = crate::polyring::parse_with("x + 2*y*(2*f + 5)", &v, &lets).unwrap();
    Derivation::new(&v, &[("y", dy), ("z", dz)]).unwrap()
}

/// Components of a fiber of `pr_x`.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberDecomposition {
    /// Lines `{x = a, line_var = root}` (the other coordinate free), with
    /// multiplicities, and whatever did not split over Q.
    Lines {
        base_value: Rational,
        line_var: String,
        components: Vec<(Rational, u32)>,
        unfactored: MultiPoly,
    },
    /// A fiber over a nonzero point, parametrized by `f`; records whether
    /// the parametrization was checked on sample points.
    GenericLine {
        base_value: Rational,
        parametrization_verified: bool,
    },
}

impl FiberDecomposition {
    pub fn is_reduced(&self) -> bool {
        match self {
            FiberDecomposition::Lines { components, .. } => components.iter().all(|(_, m)| *m == 1),
            FiberDecomposition::GenericLine { .. } => true,
        }
    }
}

/// Splits `{equation = 0, base_var = value}` into lines `line_var = r`.
/// The restricted equation has to involve `line_var` only.
pub fn special_fiber(
    equation: &MultiPoly,
    base_var: &str,
    value: &Rational,
    line_var: &str,
) -> Result<FiberDecomposition, SurfaceError> {
    let restricted = equation.substitute_values(&[(base_var, value.clone())])?;
    let split = rational_roots(&restricted, line_var)?;
    Ok(FiberDecomposition::Lines {
        base_value: value.clone(),
        line_var: line_var.to_string(),
        components: split.roots,
        unfactored: split.remainder,
    })
}

/// Sample values of `f` used for the generic-fiber check in [`fiber_over`].
pub fn default_fiber_samples() -> Vec<Rational> {
    [-4, -1, 0, 1, 3].into_iter().map(int).collect()
}

pub fn fiber_over(s: &SurfaceData, a: &Rational) -> Result<FiberDecomposition, SurfaceError> {
    if a.is_zero() {
        special_fiber(&s.p, "x", a, "y")
    } else {
        Ok(FiberDecomposition::GenericLine {
            base_value: a.clone(),
            parametrization_verified: generic_fiber_check(s, a, &default_fiber_samples())?,
        })
    }
}

/// Over `x = a ≠ 0`, the point with `f = f₀` is
/// `y = (f₀+1)(f₀+4)/a`, `z = (f₀ + y²)/a`; checks it lies on `S` for each
/// sample `f₀`.
pub fn generic_fiber_check(s: &SurfaceData, a: &Rational, samples: &[Rational]) -> Result<bool, SurfaceError> {
    if a.is_zero() {
        return Err(SurfaceError::ZeroBase);
    }
    for f0 in samples {
        let y = (f0 + int(1)) * (f0 + int(4)) / a;
        let z = (f0 + &y * &y) / a;
        let point = [a.clone(), y, z];
        if !s.p.evaluate(&point).is_zero() || s.f.evaluate(&point) != *f0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusEntry {
    pub generator: String,
    pub image: MultiPoly,
    /// Image with `x = 0`.
    pub mod_x: MultiPoly,
    /// Remainder of `mod_x` by `2y² − 5` in `y`.
    pub remainder: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusReport {
    pub entries: Vec<FixedLocusEntry>,
}

impl FixedLocusReport {
    /// Whether every image lies in `(x, 2y² − 5)`.
    pub fn contained(&self) -> bool {
        self.entries.iter().all(|e| e.remainder.is_zero())
    }
}

/// Reduces each nonzero generator image first modulo `x`, then modulo
/// `2y² − 5` as a polynomial in `y`.
pub fn fixed_locus_report(d: &Derivation) -> Result<FixedLocusReport, SurfaceError> {
    let v = d.vars();
    let modulus = parse("2*y^2 - 5", v)?;
    let mut entries = Vec::new();
    for name in v.names() {
        let image = d.image(name)?.clone();
        if image.is_zero() {
            continue;
        }
        let mod_x = image.substitute_values(&[("x", Rational::zero())])?;
        let remainder = mod_x.rem_univariate("y", &modulus)?;
        entries.push(FixedLocusEntry {
            generator: name.clone(),
            image,
            mod_x,
            remainder,
        });
    }
    Ok(FixedLocusReport { entries })
}

/// Labels of the four components `C_α` of the special fiber.
pub const LABELS: [i32; 4] = [1, -1, 2, -2];

fn sign_of_abs(alpha: i32) -> Rational {
    if alpha.abs() % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Transition functions `g_{αα'} = x^(-shift)·(σ_{α'} − σ_α)` between the
/// trivializing charts.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleData {
    pub labels: Vec<i32>,
    pub sigma: BTreeMap<i32, MultiPoly>,
    pub shift: u32,
    pub g: BTreeMap<(i32, i32), LaurentPoly>,
}

impl CocycleData {
    /// Builds all `g_{αα'}` from the branch polynomials `σ_α` (polynomials
    /// in the single variable `x`). Labels keep the given order.
    pub fn from_sigmas(branches: Vec<(i32, MultiPoly)>, shift: u32) -> Result<Self, PolyError> {
        let labels: Vec<i32> = branches.iter().map(|(a, _)| *a).collect();
        let sigma: BTreeMap<i32, MultiPoly> = branches.into_iter().collect();
        let mut g = BTreeMap::new();
        for &a in &labels {
            for &b in &labels {
                let diff = sigma[&b].checked_sub(&sigma[&a])?;
                g.insert((a, b), LaurentPoly::scale(&diff, "x", shift)?);
            }
        }
        Ok(CocycleData {
            labels,
            sigma,
            shift,
            g,
        })
    }

    pub fn g(&self, a: i32, b: i32) -> &LaurentPoly {
        &self.g[&(a, b)]
    }

    /// `g_{αα'} = −g_{α'α}` for every pair.
    pub fn antisymmetric(&self) -> bool {
        self.labels.iter().all(|&a| {
            self.labels
                .iter()
                .all(|&b| self.g(a, b) == &self.g(b, a).neg())
        })
    }

    /// `g_{αα'} + g_{α'α''} = g_{αα''}` for every ordered triple.
    pub fn cocycle_identity(&self) -> bool {
        self.labels.iter().all(|&a| {
            self.labels.iter().all(|&b| {
                self.labels.iter().all(|&c| {
                    self.g(a, b).add(self.g(b, c)).ok().as_ref() == Some(self.g(a, c))
                })
            })
        })
    }
}

/// `σ_α = α² + (−1)^|α|·(α/3)·x`.
pub fn chart_sigma(alpha: i32) -> MultiPoly {
    let v = VarSet::new(["x"]).unwrap();
    let a = int(alpha.into());
    let lin = sign_of_abs(alpha) * &a * rat(1, 3);
    &MultiPoly::constant(&v, &a * &a) + &MultiPoly::var(&v, "x").unwrap().scale(&lin)
}

/// The cocycle of `S` over the line with four origins, checked for
/// antisymmetry and the cocycle identity.
pub fn build_cocycle() -> CocycleData {
    let sigma = LABELS.iter().map(|&a| (a, chart_sigma(a))).collect();
    let c = CocycleData::from_sigmas(sigma, 2).unwrap();
    assert!(c.antisymmetric() && c.cocycle_identity());
    c
}

/// Value on `C_α` of the chart function `g_α = y/(f+4)` (`|α| = 1`) or
/// `y/(f+1)` (`|α| = 2`).
pub fn component_values(s: &SurfaceData) -> Result<BTreeMap<i32, Rational>, SurfaceError> {
    let v = s.f.vars().clone();
    // both expressions for g_α agree on S because x·y − (f+1)(f+4) = P
    let xy = parse("x*y", &v)?;
    let prod = &(&s.f + &MultiPoly::int(&v, 1)) * &(&s.f + &MultiPoly::int(&v, 4));
    assert_eq!(&xy - &prod, s.p);

    let y = MultiPoly::var(&v, "y")?;
    let mut out = BTreeMap::new();
    for alpha in LABELS {
        let shift = if alpha.abs() == 1 { 4 } else { 1 };
        let denom_poly = &s.f + &MultiPoly::int(&v, shift);
        let point = [Rational::zero(), int(alpha.into()), Rational::zero()];
        let den = denom_poly.evaluate(&point);
        if den.is_zero() {
            return Err(SurfaceError::Pole(alpha));
        }
        out.insert(alpha, y.evaluate(&point) / den);
    }
    Ok(out)
}

/// Why a given exponent `n` admits no fiber-distinguishing function.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `xⁿ·g_{αα'}` keeps a negative power of `x`.
    NotPolynomial { pair: (i32, i32), product: LaurentPoly },
    /// The constants `P_α(0)` are forced to coincide on these pairs; each
    /// entry records the forced offset `P_{α'}(0) − P_α(0)`, which is zero.
    ConstantsCoincide {
        offsets: Vec<((i32, i32), Rational)>,
        coinciding: Vec<(i32, i32)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// Per exponent `n = 1..=max_n`, the constraint that fails.
    NoSolution(Vec<(u32, Violation)>),
    /// Exponent and chart polynomials `P_α` of a valid function
    /// `xⁿu_α + P_α(x)`.
    Solution { n: u32, chart_polys: BTreeMap<i32, MultiPoly> },
}

/// Looks for a function on the glued surface which reads `xⁿu_α + P_α(x)`
/// in every chart, with the `P_α(0)` pairwise distinct. Gluing forces
/// `P_{α'} − P_α = xⁿ·g_{αα'}`, so for each `n` this needs every
/// `xⁿ·g_{αα'}` to be a polynomial and the induced offsets between the
/// constants to be nonzero.
pub fn distinguishing_function_search(c: &CocycleData, max_n: u32) -> SearchOutcome {
    let mut failures = Vec::new();
    let pairs: Vec<(i32, i32)> = c
        .labels
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| c.labels[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    for n in 1..=max_n {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| !c.g(a, b).mul_var_power(n).is_polynomial()) {
            failures.push((
                n,
                Violation::NotPolynomial {
                    pair: (a, b),
                    product: c.g(a, b).mul_var_power(n),
                },
            ));
            continue;
        }
        let offsets: Vec<((i32, i32), Rational)> = pairs
            .iter()
            .map(|&(a, b)| {
                let k = c.g(a, b).mul_var_power(n).constant_at_zero().unwrap();
                ((a, b), k.constant_value().expect("polynomial in x alone"))
            })
            .collect();
        let coinciding: Vec<(i32, i32)> = offsets
            .iter()
            .filter(|(_, k)| k.is_zero())
            .map(|(p, _)| *p)
            .collect();
        if coinciding.is_empty() {
            let base = c.labels[0];
            let chart_polys = c
                .labels
                .iter()
                .map(|&a| (a, c.g(base, a).mul_var_power(n).to_poly().unwrap()))
                .collect();
            return SearchOutcome::Solution { n, chart_polys };
        }
        failures.push((n, Violation::ConstantsCoincide { offsets, coinciding }));
    }
    SearchOutcome::NoSolution(failures)
}
