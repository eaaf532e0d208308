//! Built-in verification cases.

use std::collections::BTreeMap;

use lndkit::automorphisms::{compose_specialized, nagata, tame_obstruction, ObstructionClass};
use lndkit::danielewski::{
    build_cocycle, canonical_surface, component_values, default_fiber_samples, distinguishing_function_search,
    fiber_over, fixed_locus_report, generic_fiber_check, surface_derivation, FiberDecomposition, SearchOutcome,
    Violation,
};
use lndkit::dualgraph::{build_paper_compactification, boundary_graph, transversal_case_graphs, WeightedCurveGraph};
use lndkit::polyring::{int, parse_with, rat};
use lndkit::{MultiPoly, VarSet};
use serde::Serialize;

const BOUND: usize = lndkit::derivations::DEFAULT_NILPOTENCY_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Derivation,
    Automorphism,
    Surface,
    Cocycle,
    Graph,
}

/// What a case found when its computation went through.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass(String),
    /// The computation succeeded and contradicts a displayed formula.
    Discrepancy {
        summary: String,
        computed: MultiPoly,
        displayed: MultiPoly,
    },
}

pub type CaseResult = Result<Verdict, String>;

pub struct VerificationCase {
    pub id: &'static str,
    pub category: Category,
    pub description: &'static str,
    pub run: fn() -> CaseResult,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn xyz() -> VarSet {
    VarSet::new(["x", "y", "z"]).unwrap()
}

fn surf(expr: &str) -> MultiPoly {
    let s = canonical_surface();
    let lets = BTreeMap::from([("f".to_string(), s.f), ("P".to_string(), s.p)]);
    parse_with(expr, &xyz(), &lets).expect("built-in expression")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn surface_invariance() -> CaseResult {
    let s = canonical_surface();
    let dp = surface_derivation().apply(&s.p).map_err(err)?;
    ensure(dp.is_zero(), format!("d(P) = {dp}"))?;
    Ok(Verdict::Pass("d(P) = 0".into()))
}

fn displayed_quartic() -> CaseResult {
    let s = canonical_surface();
    let dq = surface_derivation().apply(&s.displayed).map_err(err)?;
    ensure(dq == surf("x^2*(2*f + 5)"), format!("d(displayed) = {dq}"))?;
    Ok(Verdict::Discrepancy {
        summary: "the displayed quartic equals (f+1)(f+4) = xy - P and is not invariant".into(),
        computed: dq,
        displayed: MultiPoly::zero(&xyz()),
    })
}

fn surface_nilpotency() -> CaseResult {
    let c = surface_derivation().nilpotency_certificate(BOUND).map_err(err)?;
    let idx: Vec<usize> = c.indices().iter().map(|(_, k)| *k).collect();
    ensure(idx == [1, 3, 5], format!("indices {idx:?}"))?;
    Ok(Verdict::Pass("indices x:1 y:3 z:5".into()))
}

fn nagata_nilpotency() -> CaseResult {
    let c = nagata::derivation().nilpotency_certificate(BOUND).map_err(err)?;
    let idx: Vec<usize> = c.indices().iter().map(|(_, k)| *k).collect();
    ensure(idx == [1, 2, 3], format!("indices {idx:?}"))?;
    Ok(Verdict::Pass("indices x:1 y:2 z:3".into()))
}

fn exp_round_trip() -> CaseResult {
    let s = canonical_surface();
    let d = surface_derivation();
    let (t, fwd) = d.parametric_exponential(BOUND).map_err(err)?;
    let tv = MultiPoly::var(fwd.vars(), &t).map_err(err)?;
    let inv = d.extend_variable(&t).map_err(err)?.exponential(&-&tv, BOUND).map_err(err)?;
    for (a, b) in [(&fwd, &inv), (&inv, &fwd)] {
        let c = compose_specialized(a, b, &t, &s.p).map_err(err)?;
        ensure(c.is_identity(), format!("composite {c}"))?;
    }
    Ok(Verdict::Pass("exp(P d) and exp(-P d) are mutually inverse".into()))
}

fn exp_y_component() -> CaseResult {
    let s = canonical_surface();
    let e = surface_derivation().exponential(&s.p, BOUND).map_err(err)?;
    let y = e.component("y").map_err(err)?;
    ensure(*y == surf("y + x*(2*f + 5)*P + x^3*P^2"), format!("y-component {y}"))?;
    Ok(Verdict::Pass("y + x(2f+5)P + x^3 P^2".into()))
}

fn exp_z_component() -> CaseResult {
    let s = canonical_surface();
    let e = surface_derivation().exponential(&s.p, BOUND).map_err(err)?;
    let z = e.component("z").map_err(err)?.clone();
    let exact = surf("z + P*(x + 2*y*(2*f + 5)) + P^2*(x*(2*f + 5)^2 + 2*x^2*y) + 2*x^3*P^3*(2*f + 5) + x^5*P^4");
    ensure(z == exact, "z-component differs from the expansion by powers of P")?;
    let displayed = surf("z + 2*P*(2*f + 5)*y + x*P^2*(2*x*y + 2*f + 5)^2 + 2*x^3*P^3*(2*f + 5) + x^5*P^4");
    if z == displayed {
        return Ok(Verdict::Pass("z-component matches the display".into()));
    }
    Ok(Verdict::Discrepancy {
        summary: "P and P^2 terms differ from the display; P^3 and P^4 terms agree".into(),
        computed: z,
        displayed,
    })
}

fn leading_components() -> CaseResult {
    let s = canonical_surface();
    let e = surface_derivation().exponential(&s.p, BOUND).map_err(err)?;
    let yz = ["y", "z"];
    let (y, z) = (e.component("y").map_err(err)?, e.component("z").map_err(err)?);
    ensure(y.degree_in(&yz).map_err(err)? == Some(8), "d2 != 8")?;
    ensure(z.degree_in(&yz).map_err(err)? == Some(16), "d3 != 16")?;
    ensure(y.homogeneous_component(&yz, 8).map_err(err)? == surf("x^3*y^8"), "F2")?;
    ensure(z.homogeneous_component(&yz, 16).map_err(err)? == surf("x^5*y^16"), "F3")?;
    Ok(Verdict::Pass("d2 = 8, d3 = 16, F2 = x^3*y^8, F3 = x^5*y^16".into()))
}

fn wildness_obstruction() -> CaseResult {
    let s = canonical_surface();
    let a = surface_derivation().exponential_automorphism(&s.p, BOUND).map_err(err)?;
    let r = tame_obstruction(&a, "x", ["y", "z"]).map_err(err)?;
    ensure(!r.divisible, "F3 is a multiple of F2^2")?;
    ensure(r.class == ObstructionClass::WildnessCertificate, format!("{:?}", r.class))?;
    Ok(Verdict::Pass("F3 is not c(x) F2^2".into()))
}

fn surface_stable_tame() -> CaseResult {
    let s = canonical_surface();
    let st = surface_derivation().stable_tameness(&s.p, "u", BOUND).map_err(err)?;
    ensure(st.holds(), "extended exp(P d) differs from the product")?;
    Ok(Verdict::Pass("exp(P d) x id = tau^-1 exp(-u d) tau exp(u d)".into()))
}

fn nagata_stable_tame() -> CaseResult {
    let v = xyz();
    let st = nagata::triangular_part(&v)
        .stable_tameness(&nagata::delta(&v), "u", BOUND)
        .map_err(err)?;
    ensure(st.holds(), "Nagata identity fails")?;
    ensure(&st.tau == nagata::tau().forward(), "unexpected tau")?;
    Ok(Verdict::Pass("exp(d) = tau^-1 exp(-d1) tau exp(d1)".into()))
}

fn nagata_exponential() -> CaseResult {
    let e = nagata::derivation()
        .exponential(&MultiPoly::one(&xyz()), BOUND)
        .map_err(err)?;
    ensure(e == nagata::displayed_sigma(), format!("exp = {e}"))?;
    Ok(Verdict::Pass("exp of Nagata's derivation is sigma".into()))
}

fn special_fiber() -> CaseResult {
    let s = canonical_surface();
    match fiber_over(&s, &int(0)).map_err(err)? {
        FiberDecomposition::Lines { components, .. } => {
            let want: Vec<_> = [-2, -1, 1, 2].into_iter().map(|r| (int(r), 1)).collect();
            ensure(components == want, format!("{components:?}"))?;
            Ok(Verdict::Pass("four reduced lines y = -2, -1, 1, 2".into()))
        }
        other => Err(format!("{other:?}")),
    }
}

fn generic_fibers() -> CaseResult {
    let s = canonical_surface();
    for a in [int(1), int(2), int(-1), rat(1, 2)] {
        ensure(
            generic_fiber_check(&s, &a, &default_fiber_samples()).map_err(err)?,
            format!("parametrization fails over {a}"),
        )?;
    }
    Ok(Verdict::Pass("fibers over 1, 2, -1, 1/2 parametrized by f".into()))
}

fn fixed_locus() -> CaseResult {
    let r = fixed_locus_report(&surface_derivation()).map_err(err)?;
    ensure(r.contained(), format!("{r:?}"))?;
    Ok(Verdict::Pass("images of d lie in (x, 2y^2 - 5)".into()))
}

fn cocycle_identities() -> CaseResult {
    let c = build_cocycle();
    ensure(c.antisymmetric() && c.cocycle_identity(), "cocycle identities fail")?;
    Ok(Verdict::Pass("antisymmetry and cocycle identity for all labels".into()))
}

fn chart_values() -> CaseResult {
    let vals = component_values(&canonical_surface()).map_err(err)?;
    let want: BTreeMap<i32, _> = [(1, rat(1, 3)), (-1, rat(-1, 3)), (2, rat(-2, 3)), (-2, rat(2, 3))].into();
    ensure(vals == want, format!("{vals:?}"))?;
    Ok(Verdict::Pass("1:1/3 -1:-1/3 2:-2/3 -2:2/3".into()))
}

fn distinguishing_function() -> CaseResult {
    match distinguishing_function_search(&build_cocycle(), 5) {
        SearchOutcome::NoSolution(fails) => match &fails.get(1) {
            Some((2, Violation::ConstantsCoincide { coinciding, .. })) if *coinciding == [(1, -1), (2, -2)] => {
                Ok(Verdict::Pass("no solution for n <= 5; at n = 2 P_-a(0) = P_a(0)".into()))
            }
            other => Err(format!("unexpected n = 2 outcome {other:?}")),
        },
        SearchOutcome::Solution { n, .. } => Err(format!("found a solution at n = {n}")),
    }
}

fn compactification_weights() -> CaseResult {
    for n in 0..=3u32 {
        let g = build_paper_compactification(n);
        let weights: Vec<i64> = ["Finf", "D", "F0", "E-1", "E-4", "C1", "C-1", "C2", "C-2"]
            .iter()
            .map(|v| g.weight(v).unwrap_or(i64::MIN))
            .collect();
        ensure(
            weights == [0, -i64::from(n), -2, -3, -3, -1, -1, -1, -1],
            format!("n = {n}: {weights:?}"),
        )?;
    }
    Ok(Verdict::Pass("weights Finf 0, D -n, F0 -2, E -3, C -1".into()))
}

fn boundary_not_chain() -> CaseResult {
    ensure(!boundary_graph(0).is_chain(), "boundary is a chain")?;
    Ok(Verdict::Pass("boundary branches at F0".into()))
}

fn fiber_case_graphs() -> CaseResult {
    for (label, g) in transversal_case_graphs() {
        ensure(!g.can_contract_to_fiber().contractible, format!("{label} contracts to a fiber"))?;
    }
    let point = WeightedCurveGraph::from_parts(&[("F", 0)], &[]).map_err(err)?;
    ensure(point.can_contract_to_fiber().contractible, "single 0-curve rejected")?;
    Ok(Verdict::Pass("none of the three case graphs contracts to a fiber".into()))
}

/// All built-in cases, sorted by id.
pub fn registry() -> Vec<VerificationCase> {
    use Category::*;
    let mut cases = vec![
        VerificationCase { id: "surface-invariance", category: Derivation, description: "the surface equation is killed by d", run: surface_invariance },
        VerificationCase { id: "displayed-quartic", category: Derivation, description: "d applied to the quartic as displayed", run: displayed_quartic },
        VerificationCase { id: "surface-nilpotency", category: Derivation, description: "nilpotency indices of d", run: surface_nilpotency },
        VerificationCase { id: "nagata-nilpotency", category: Derivation, description: "nilpotency indices of Nagata's derivation", run: nagata_nilpotency },
        VerificationCase { id: "exp-round-trip", category: Automorphism, description: "exp(P d) o exp(-P d) = id", run: exp_round_trip },
        VerificationCase { id: "exp-y-component", category: Automorphism, description: "y-component of exp(P d)", run: exp_y_component },
        VerificationCase { id: "exp-z-component", category: Automorphism, description: "z-component of exp(P d)", run: exp_z_component },
        VerificationCase { id: "leading-components", category: Automorphism, description: "fiber degrees and top components", run: leading_components },
        VerificationCase { id: "wildness-obstruction", category: Automorphism, description: "leading-component obstruction to tameness", run: wildness_obstruction },
        VerificationCase { id: "surface-stable-tame", category: Automorphism, description: "exp(P d) is stably tame", run: surface_stable_tame },
        VerificationCase { id: "nagata-stable-tame", category: Automorphism, description: "Nagata's automorphism is stably tame", run: nagata_stable_tame },
        VerificationCase { id: "nagata-exponential", category: Automorphism, description: "exp of Nagata's derivation", run: nagata_exponential },
        VerificationCase { id: "special-fiber", category: Surface, description: "fiber of pr_x over 0", run: special_fiber },
        VerificationCase { id: "generic-fibers", category: Surface, description: "fibers of pr_x away from 0", run: generic_fibers },
        VerificationCase { id: "fixed-locus", category: Surface, description: "fixed points lie on x = 2y^2 - 5 = 0", run: fixed_locus },
        VerificationCase { id: "cocycle-identities", category: Cocycle, description: "transition functions form a cocycle", run: cocycle_identities },
        VerificationCase { id: "chart-values", category: Cocycle, description: "chart functions on the four lines", run: chart_values },
        VerificationCase { id: "distinguishing-function", category: Cocycle, description: "no function separates the four lines", run: distinguishing_function },
        VerificationCase { id: "compactification-weights", category: Graph, description: "dual graph of the compactification", run: compactification_weights },
        VerificationCase { id: "boundary-not-chain", category: Graph, description: "the boundary is not a chain", run: boundary_not_chain },
        VerificationCase { id: "fiber-case-graphs", category: Graph, description: "candidate fibers do not contract", run: fiber_case_graphs },
    ];
    cases.sort_by_key(|c| c.id);
    cases
}
