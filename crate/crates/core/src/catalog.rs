//! Example specs shipped in `catalog/`, plus a few derived variants.

use crate::cli::spec::parse_spec;
use crate::exprs::{parse_scalar, Chart};
use crate::fields::{invert_two_form, KForm};
use crate::twistcheck::{Background, ManifoldSpec};

pub const SU2_JSON: &str = include_str!("../../../catalog/su2.json");
pub const R3_NONEXAMPLE_JSON: &str = include_str!("../../../catalog/r3-nonexample.json");
pub const TWISTED_R4_JSON: &str = include_str!("../../../catalog/twisted-r4.json");
pub const CONSTANT_CANONICAL_JSON: &str = include_str!("../../../catalog/constant-canonical.json");

/// `(file stem, contents)` for every shipped spec.
pub const ENTRIES: [(&str, &str); 4] = [
    ("su2", SU2_JSON),
    ("r3-nonexample", R3_NONEXAMPLE_JSON),
    ("twisted-r4", TWISTED_R4_JSON),
    ("constant-canonical", CONSTANT_CANONICAL_JSON),
];

fn load(text: &str) -> ManifoldSpec {
    parse_spec(text).expect("catalog specs are valid")
}

/// Lie-Poisson structure of su(2) on R^3.
pub fn su2() -> ManifoldSpec {
    load(SU2_JSON)
}

/// `Pi^{12} = 1, Pi^{23} = x2` on R^3: violates the Jacobi identity.
pub fn r3_nonexample() -> ManifoldSpec {
    load(R3_NONEXAMPLE_JSON)
}

/// `Pi = omega^{-1}` with `Omega = -omega + d(x2 x3 dx4)`.
pub fn twisted_r4() -> ManifoldSpec {
    load(TWISTED_R4_JSON)
}

/// Canonical constant bivector on R^2 with no background.
pub fn constant_canonical() -> ManifoldSpec {
    load(CONSTANT_CANONICAL_JSON)
}

/// `omega = dx1^dx2 + (1 + x1) dx3^dx4` on R^4.
pub fn twisted_symplectic_form() -> KForm {
    let chart = Chart::standard(4);
    let e = |s: &str| parse_scalar(s, &chart).expect("literal");
    KForm::from_one_based(2, 4, [(vec![1, 2], e("1")), (vec![3, 4], e("1 + x1"))]).expect("literal")
}

/// Same bivector as [`twisted_r4`] but with `Omega = +omega`, the sign that
/// does not close.
pub fn twisted_r4_wrong_sign() -> ManifoldSpec {
    let w = twisted_symplectic_form();
    let pi = invert_two_form(&w).expect("omega is nondegenerate");
    ManifoldSpec::new(Chart::standard(4), pi, Background::TwoForm(w)).expect("consistent")
}
