//! Periodic lattice discretization of the loop-space constraints
//!
//! ```text
//! phi^i = d_s X^i + Pi^{ij} p_j + Pi^{ij} Omega_{jk} d_s X^k
//! ```
//!
//! with `N` sites on the circle, spacing `2 pi / N`, and canonical bracket
//! `{X^i_a, p_{j,b}} = delta^i_j delta_{ab} / spacing`. Everything here is
//! `f64`; exact arithmetic is only used to differentiate the components once
//! when the system is built.

mod array;
mod bracket;
mod flow;
mod sample;
mod study;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::exprs::{CompiledExpr, ExprError};
use crate::fields::{exterior_derivative, KForm};
use crate::twistcheck::{Background, ManifoldSpec};

pub use array::LoopArray;
pub use bracket::Gradient;
pub use flow::drift;
pub use sample::{
    random_loop, random_test_functions, TrigField, TrigSeries, LOOP_AMPLITUDE, MAX_HARMONIC,
};
pub use study::{
    closure_study, flow_envelope, flow_study, ClosureRow, ClosureTable, FlowReport,
    FLOW_ENVELOPE_COEFF, RESIDUAL_FLOOR,
};

/// Largest `max |phi|` accepted as on the constraint surface.
pub const ON_SHELL_TOL: f64 = 1e-9;
/// Singular values of `Pi(X_a)` below this are treated as zero.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("need at least 4 lattice sites, got {0}")]
    BadSiteCount(usize),
    #[error("spec has a three-form background and no two-form potential")]
    NoPotential,
    #[error("supplied potential does not satisfy dOmega = H")]
    PotentialMismatch,
    #[error("component pole at site {site}")]
    Pole { site: usize },
    #[error("component pole at site {site} during step {step}")]
    FlowPole { site: usize, step: usize },
    #[error("Pi is singular at site {site}: momenta cannot solve the constraints there")]
    SingularPi { site: usize },
    #[error("state is off shell: max |phi| = {0:e}")]
    OffShell(f64),
    #[error("array shape {got:?} does not match lattice shape {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("non-finite entry at component {comp}, site {site}")]
    NonFinite { comp: usize, site: usize },
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferenceScheme {
    /// `(f_{a+1} - f_a) / spacing`
    Forward,
    /// `(f_{a+1} - f_{a-1}) / (2 spacing)`
    #[default]
    Central,
}

impl fmt::Display for DifferenceScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DifferenceScheme::Forward => "forward",
            DifferenceScheme::Central => "central",
        })
    }
}

/// Sparse list of compiled matrix entries `(row, col, expr)` with `row < col`.
type Entries = Vec<(usize, usize, CompiledExpr)>;

fn compile_entries<V>(t: &crate::fields::Alternating<V>) -> Entries {
    t.components()
        .map(|(k, v)| (k[0], k[1], v.compile()))
        .collect()
}

fn compile_derivatives<V>(t: &crate::fields::Alternating<V>, n: usize) -> Vec<Entries> {
    (0..n)
        .map(|l| {
            t.components()
                .map(|(k, v)| (k[0], k[1], v.differentiate(l)))
                .filter(|(_, _, d)| !d.is_zero())
                .map(|(i, j, d)| (i, j, d.compile()))
                .collect()
        })
        .collect()
}

fn fill(entries: &Entries, n: usize, x: &[f64]) -> Result<DMatrix<f64>, ExprError> {
    let mut m = DMatrix::zeros(n, n);
    for (i, j, e) in entries {
        let v = e.eval(x)?;
        m[(*i, *j)] = v;
        m[(*j, *i)] = -v;
    }
    Ok(m)
}

/// Numeric data of the spec at one point.
pub(crate) struct Geometry {
    pub pi: DMatrix<f64>,
    /// `I + Pi Omega`
    pub m: DMatrix<f64>,
    pub dpi: Vec<DMatrix<f64>>,
    pub dm: Vec<DMatrix<f64>>,
}

/// A spec discretized on `N` sites.
#[derive(Debug, Clone)]
pub struct LatticeSystem {
    spec: ManifoldSpec,
    omega: KForm,
    sites: usize,
    spacing: f64,
    scheme: DifferenceScheme,
    pi: Entries,
    dpi: Vec<Entries>,
    om: Entries,
    dom: Vec<Entries>,
}

/// Discretizes a spec with a two-form background using the default scheme.
pub fn discretize(spec: &ManifoldSpec, sites: usize) -> Result<LatticeSystem, LatticeError> {
    discretize_with(spec, sites, DifferenceScheme::default())
}

pub fn discretize_with(
    spec: &ManifoldSpec,
    sites: usize,
    scheme: DifferenceScheme,
) -> Result<LatticeSystem, LatticeError> {
    match spec.background() {
        Background::TwoForm(w) => LatticeSystem::build(spec, w.clone(), sites, scheme),
        Background::ThreeForm(_) => Err(LatticeError::NoPotential),
    }
}

/// Discretizes a spec using an explicit potential `omega`. For a three-form
/// background `d omega` must equal `H`; for a two-form background `omega`
/// replaces it outright.
pub fn discretize_with_potential(
    spec: &ManifoldSpec,
    omega: &KForm,
    sites: usize,
    scheme: DifferenceScheme,
) -> Result<LatticeSystem, LatticeError> {
    if omega.degree() != 2 || omega.dim() != spec.dim() {
        return Err(LatticeError::PotentialMismatch);
    }
    if let Background::ThreeForm(h) = spec.background() {
        if exterior_derivative(omega) != *h {
            return Err(LatticeError::PotentialMismatch);
        }
    }
    LatticeSystem::build(spec, omega.clone(), sites, scheme)
}

impl LatticeSystem {
    fn build(
        spec: &ManifoldSpec,
        omega: KForm,
        sites: usize,
        scheme: DifferenceScheme,
    ) -> Result<Self, LatticeError> {
        if sites < 4 {
            return Err(LatticeError::BadSiteCount(sites));
        }
        let n = spec.dim();
        Ok(LatticeSystem {
            pi: compile_entries(spec.pi()),
            dpi: compile_derivatives(spec.pi(), n),
            om: compile_entries(&omega),
            dom: compile_derivatives(&omega, n),
            spec: spec.clone(),
            omega,
            sites,
            spacing: 2.0 * std::f64::consts::PI / sites as f64,
            scheme,
        })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn scheme(&self) -> DifferenceScheme {
        self.scheme
    }

    /// Site positions `sigma_a = a * spacing`.
    pub fn sigma(&self) -> Vec<f64> {
        (0..self.sites).map(|a| a as f64 * self.spacing).collect()
    }

    pub fn zeros(&self) -> LoopArray {
        LoopArray::zeros(self.dim(), self.sites)
    }

    /// `(D f)_a` for each component.
    pub fn diff(&self, f: &LoopArray) -> LoopArray {
        let n = self.sites;
        let h = self.spacing;
        LoopArray::from_fn(f.comps(), n, |i, a| match self.scheme {
            DifferenceScheme::Forward => (f.get(i, (a + 1) % n) - f.get(i, a)) / h,
            DifferenceScheme::Central => {
                (f.get(i, (a + 1) % n) - f.get(i, (a + n - 1) % n)) / (2.0 * h)
            }
        })
    }

    /// `(D^T g)_a` for each component.
    pub fn diff_transpose(&self, g: &LoopArray) -> LoopArray {
        let n = self.sites;
        let h = self.spacing;
        LoopArray::from_fn(g.comps(), n, |i, a| match self.scheme {
            DifferenceScheme::Forward => (g.get(i, (a + n - 1) % n) - g.get(i, a)) / h,
            DifferenceScheme::Central => {
                (g.get(i, (a + n - 1) % n) - g.get(i, (a + 1) % n)) / (2.0 * h)
            }
        })
    }

    fn check_shape(&self, f: &LoopArray) -> Result<(), LatticeError> {
        let expected = (self.dim(), self.sites);
        let got = (f.comps(), f.sites());
        if expected != got {
            return Err(LatticeError::Shape { expected, got });
        }
        Ok(())
    }

    pub(crate) fn geometry(&self, x: &[f64]) -> Result<Geometry, ExprError> {
        let n = self.dim();
        let pi = fill(&self.pi, n, x)?;
        let om = fill(&self.om, n, x)?;
        let m = DMatrix::identity(n, n) + &pi * &om;
        let mut dpi = Vec::with_capacity(n);
        let mut dm = Vec::with_capacity(n);
        for l in 0..n {
            let dp = fill(&self.dpi[l], n, x)?;
            let dw = fill(&self.dom[l], n, x)?;
            dm.push(&dp * &om + &pi * &dw);
            dpi.push(dp);
        }
        Ok(Geometry { pi, m, dpi, dm })
    }

    pub(crate) fn geometries(&self, x: &LoopArray) -> Result<Vec<Geometry>, LatticeError> {
        (0..self.sites)
            .map(|a| {
                self.geometry(&x.column(a))
                    .map_err(|_| LatticeError::Pole { site: a })
            })
            .collect()
    }

    /// Checks shape, finiteness and that no site sits on a pole.
    pub fn validate(&self, s: &LatticeState) -> Result<(), LatticeError> {
        self.check_shape(&s.x)?;
        self.check_shape(&s.p)?;
        self.geometries(&s.x).map(|_| ())
    }

    /// `phi^i_a` at every site.
    pub fn constraints(&self, s: &LatticeState) -> Result<LoopArray, LatticeError> {
        self.validate(s)?;
        let geo = self.geometries(&s.x)?;
        let dx = self.diff(&s.x);
        let mut out = self.zeros();
        for (a, g) in geo.iter().enumerate() {
            let phi =
                &g.m * DVector::from_vec(dx.column(a)) + &g.pi * DVector::from_vec(s.p.column(a));
            for i in 0..self.dim() {
                out.set(i, a, phi[i]);
            }
        }
        Ok(out)
    }

    pub fn max_constraint(&self, s: &LatticeState) -> Result<f64, LatticeError> {
        Ok(self.constraints(s)?.max_abs())
    }

    /// Momenta putting the loop `x` on the constraint surface. Each site is
    /// solved in the least-squares sense through the SVD of `Pi(X_a)`; a site
    /// whose system has no exact solution is reported as singular.
    pub fn solve_momenta(&self, x: &LoopArray) -> Result<LoopArray, LatticeError> {
        self.check_shape(x)?;
        let n = self.dim();
        let dx = self.diff(x);
        let mut p = self.zeros();
        for a in 0..self.sites {
            let pt = x.column(a);
            let g = self
                .geometry(&pt)
                .map_err(|_| LatticeError::Pole { site: a })?;
            let rhs = -(&g.m * DVector::from_vec(dx.column(a)));
            let svd = g.pi.clone().svd(true, true);
            let sol = svd
                .solve(&rhs, SINGULAR_TOL)
                .expect("u and v were computed");
            let miss = (&g.pi * &sol - &rhs).amax();
            if miss.is_nan() || miss > SINGULAR_TOL * rhs.amax().max(1.0) {
                return Err(LatticeError::SingularPi { site: a });
            }
            for i in 0..n {
                p.set(i, a, sol[i]);
            }
        }
        Ok(p)
    }

    /// On-shell state over the loop `x`.
    pub fn on_shell(&self, x: LoopArray) -> Result<LatticeState, LatticeError> {
        let p = self.solve_momenta(&x)?;
        LatticeState::new(x, p)
    }
}

/// Positions and momenta on the lattice, each of shape `[n][N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub x: LoopArray,
    pub p: LoopArray,
}

impl LatticeState {
    pub fn new(x: LoopArray, p: LoopArray) -> Result<Self, LatticeError> {
        if (x.comps(), x.sites()) != (p.comps(), p.sites()) {
            return Err(LatticeError::Shape {
                expected: (x.comps(), x.sites()),
                got: (p.comps(), p.sites()),
            });
        }
        for f in [&x, &p] {
            if let Some((comp, site)) = f.first_non_finite() {
                return Err(LatticeError::NonFinite { comp, site });
            }
        }
        Ok(LatticeState { x, p })
    }
}
