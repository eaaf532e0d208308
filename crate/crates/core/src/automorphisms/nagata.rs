//! Nagata's automorphism of C³ and the data showing it is stably tame.

use super::{make_triangular, PolyAuto, PolyMap};
use crate::derivations::Derivation;
use crate::polyring::{parse, MultiPoly, VarSet};

fn xyz() -> VarSet {
    VarSet::new(["x", "y", "z"]).unwrap()
}

fn xyzu() -> VarSet {
    VarSet::new(["x", "y", "z", "u"]).unwrap()
}

/// `xz + y²`, killed by `x∂/∂y − 2y∂/∂z`.
pub fn delta(vars: &VarSet) -> MultiPoly {
    parse("x*z + y^2", vars).expect("x, y, z present")
}

/// `x∂/∂y − 2y∂/∂z` on the given ring (which must contain x, y, z).
pub fn triangular_part(vars: &VarSet) -> Derivation {
    Derivation::new(
        vars,
        &[
            ("y", parse("x", vars).unwrap()),
            ("z", parse("-2*y", vars).unwrap()),
        ],
    )
    .expect("x, y, z present")
}

/// `(xz + y²)(x∂/∂y − 2y∂/∂z)` on C[x, y, z].
pub fn derivation() -> Derivation {
    let v = xyz();
    triangular_part(&v).scaled(&delta(&v)).unwrap()
}

/// `u(x∂/∂y − 2y∂/∂z)` on C[x, y, z, u].
pub fn partial_one() -> Derivation {
    let v = xyzu();
    triangular_part(&v)
        .scaled(&MultiPoly::var(&v, "u").unwrap())
        .unwrap()
}

/// `u ↦ u + (xz + y²)` on C[x, y, z, u].
pub fn tau() -> PolyAuto {
    let v = xyzu();
    make_triangular(&v, &[("u", delta(&v))]).expect("triangular")
}

/// The automorphism written out in closed form:
/// `(x, y + xΔ, z − 2yΔ − xΔ²)` with `Δ = xz + y²`.
pub fn displayed_sigma() -> PolyMap {
    let v = xyz();
    let d = "(x*z + y^2)";
    PolyMap::from_named(
        &v,
        &[
            ("y", parse(&format!("y + x*{d}"), &v).unwrap()),
            ("z", parse(&format!("z - 2*y*{d} - x*{d}^2"), &v).unwrap()),
        ],
    )
    .unwrap()
}
