//! Exact verdicts for a bivector `Pi` and a closed 3-form `H`.
//!
//! The condition checked is
//!
//! ```text
//! J^{ijk} = <H, Pi (x) Pi (x) Pi>^{ijk} = Pi^{li} Pi^{mj} Pi^{nk} H_{lmn}
//! ```
//!
//! where `J` is [`schouten_half`] and `H` is contracted into the first index
//! of each factor. In terms of [`triple_contraction`]
//! (`C^{ijk} = Pi^{il} Pi^{jm} Pi^{kn} H_{lmn}`) the right-hand side is `-C`,
//! so the residual is `J + C`. This is the sign under which the lattice
//! constraints in [`crate::loopspace`] close.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::exprs::{Chart, ScalarExpr};
use crate::fields::{
    exterior_derivative, schouten_half, triple_contraction, FieldError, KForm, KVector,
};

/// Sign `s` for which `Pi = omega^{-1}` and `H = s * d(omega)` is twisted Poisson.
pub const CALIBRATED_SIGN: i32 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("three-form is not closed: dH has nonzero component(s)")]
    NotClosed,
    #[error("inconsistent manifold data: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Background {
    TwoForm(KForm),
    ThreeForm(KForm),
}

/// Chart, bivector, and either a 2-form potential or a 3-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    chart: Chart,
    pi: KVector,
    background: Background,
}

impl ManifoldSpec {
    pub fn new(chart: Chart, pi: KVector, background: Background) -> Result<Self, CheckError> {
        let n = chart.dim();
        if pi.degree() != 2 || pi.dim() != n {
            return Err(CheckError::InvalidSpec(format!(
                "bivector must have degree 2 and dimension {n}"
            )));
        }
        let (form, deg) = match &background {
            Background::TwoForm(w) => (w, 2),
            Background::ThreeForm(h) => (h, 3),
        };
        if form.degree() != deg || form.dim() != n {
            return Err(CheckError::InvalidSpec(format!(
                "background form must have degree {deg} and dimension {n}"
            )));
        }
        let too_wide = pi
            .components()
            .map(|(_, v)| v)
            .chain(form.components().map(|(_, v)| v))
            .any(|v| v.num_vars() > n);
        if too_wide {
            return Err(CheckError::InvalidSpec(
                "component uses a coordinate outside the chart".into(),
            ));
        }
        Ok(ManifoldSpec {
            chart,
            pi,
            background,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn pi(&self) -> &KVector {
        &self.pi
    }

    pub fn background(&self) -> &Background {
        &self.background
    }
}

pub fn is_closed(h: &KForm) -> bool {
    exterior_derivative(h).is_zero()
}

/// `H` itself, or `d(Omega)` for a 2-form background.
pub fn effective_h(spec: &ManifoldSpec) -> Result<KForm, CheckError> {
    match &spec.background {
        Background::TwoForm(w) => Ok(exterior_derivative(w)),
        Background::ThreeForm(h) if is_closed(h) => Ok(h.clone()),
        Background::ThreeForm(_) => Err(CheckError::NotClosed),
    }
}

/// Right-hand side of the twisted condition, `Pi^{li} Pi^{mj} Pi^{nk} H_{lmn}`.
pub fn wzw_pairing(h: &KForm, pi: &KVector) -> Result<KVector, CheckError> {
    Ok(triple_contraction(h, pi)?.neg())
}

/// `R = J - <H, Pi^3>`; vanishes iff `(Pi, H)` is twisted Poisson.
pub fn twist_residual(pi: &KVector, h: &KForm) -> Result<KVector, CheckError> {
    let j = schouten_half(pi)?;
    Ok(j.sub(&wzw_pairing(h, pi)?)?)
}

/// `c^{ij}_k = -(d_k Pi^{ij} + Pi^{il} Pi^{jm} H_{klm})` for every `i < j` and
/// every `k` (0-based keys), zero entries included.
pub fn structure_functions(
    pi: &KVector,
    h: &KForm,
) -> Result<BTreeMap<(usize, usize, usize), ScalarExpr>, CheckError> {
    if pi.degree() != 2 || h.degree() != 3 {
        return Err(CheckError::Field(FieldError::DegreeMismatch {
            expected: if pi.degree() != 2 { 2 } else { 3 },
            got: if pi.degree() != 2 {
                pi.degree()
            } else {
                h.degree()
            },
        }));
    }
    if pi.dim() != h.dim() {
        return Err(FieldError::DimensionMismatch(pi.dim(), h.dim()).into());
    }
    let n = pi.dim();
    let m = pi.matrix()?;
    let mut out = BTreeMap::new();
    for pair in (0..n).combinations(2) {
        let (i, j) = (pair[0], pair[1]);
        for k in 0..n {
            let mut acc = m[i][j].differentiate(k);
            for l in 0..n {
                if m[i][l].is_zero() {
                    continue;
                }
                for mm in 0..n {
                    if m[j][mm].is_zero() {
                        continue;
                    }
                    let hv = h.get(&[k, l, mm]);
                    if !hv.is_zero() {
                        acc = &acc + &(&(&m[i][l] * &m[j][mm]) * &hv);
                    }
                }
            }
            out.insert((i, j, k), -acc);
        }
    }
    Ok(out)
}

/// `{f, g} = Pi^{ij} d_i f d_j g`.
pub fn induced_bracket(f: &ScalarExpr, g: &ScalarExpr, pi: &KVector) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for (t, p) in pi.components() {
        let (i, j) = (t[0], t[1]);
        let term = &(&f.differentiate(i) * &g.differentiate(j))
            - &(&f.differentiate(j) * &g.differentiate(i));
        if !term.is_zero() {
            acc = &acc + &(p * &term);
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub h_closed: bool,
    pub effective_h: KForm,
    pub jacobiator: KVector,
    /// The pairing `<H, Pi^3>` on the right-hand side of the condition.
    pub contraction: KVector,
    pub residual: KVector,
    pub is_poisson: bool,
    pub is_twisted_poisson: bool,
    pub structure_functions: BTreeMap<(usize, usize, usize), ScalarExpr>,
}

pub fn check(spec: &ManifoldSpec) -> Result<Report, CheckError> {
    let h = effective_h(spec)?;
    let jacobiator = schouten_half(&spec.pi)?;
    let contraction = wzw_pairing(&h, &spec.pi)?;
    let residual = jacobiator.sub(&contraction)?;
    let structure_functions = structure_functions(&spec.pi, &h)?;
    Ok(Report {
        h_closed: is_closed(&h),
        is_poisson: jacobiator.is_zero(),
        is_twisted_poisson: residual.is_zero(),
        effective_h: h,
        jacobiator,
        contraction,
        residual,
        structure_functions,
    })
}
