use super::{LatticeError, LatticeState, LatticeSystem, LoopArray, ON_SHELL_TOL};

/// Partial derivatives of a smeared constraint with respect to every `X^l_a`
/// and `p_{l,a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub x: LoopArray,
    pub p: LoopArray,
}

impl LatticeSystem {
    /// `phi[lambda] = spacing * sum_a lambda_{i,a} phi^i_a`
    pub fn smeared_constraint(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
    ) -> Result<f64, LatticeError> {
        self.check_shape(lambda)?;
        Ok(self.constraints(s)?.dot(lambda) * self.spacing)
    }

    pub fn smeared_gradient(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
    ) -> Result<Gradient, LatticeError> {
        self.validate(s)?;
        self.check_shape(lambda)?;
        let n = self.dim();
        let h = self.spacing;
        let geo = self.geometries(&s.x)?;
        let dx = self.diff(&s.x);
        let mut gp = self.zeros();
        let mut local = self.zeros();
        // v_{l,a} = lambda_{i,a} M^i_l(X_a), fed through D^T below
        let mut v = self.zeros();
        for (a, g) in geo.iter().enumerate() {
            let lam = lambda.column(a);
            let dxa = dx.column(a);
            let pa = s.p.column(a);
            for j in 0..n {
                let mut acc_p = 0.0;
                let mut acc_v = 0.0;
                for (i, li) in lam.iter().enumerate() {
                    acc_p += li * g.pi[(i, j)];
                    acc_v += li * g.m[(i, j)];
                }
                gp.set(j, a, h * acc_p);
                v.set(j, a, acc_v);
            }
            for l in 0..n {
                let mut acc = 0.0;
                for (i, li) in lam.iter().enumerate() {
                    if *li == 0.0 {
                        continue;
                    }
                    let mut t = 0.0;
                    for k in 0..n {
                        t += g.dm[l][(i, k)] * dxa[k] + g.dpi[l][(i, k)] * pa[k];
                    }
                    acc += li * t;
                }
                local.set(l, a, acc);
            }
        }
        let gx = local.add_scaled(1.0, &self.diff_transpose(&v)).scaled(h);
        Ok(Gradient { x: gx, p: gp })
    }

    /// Signed `{phi[lambda], phi[mu]}` under the lattice canonical bracket.
    pub fn closure_bracket(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
        mu: &LoopArray,
    ) -> Result<f64, LatticeError> {
        let f = self.smeared_gradient(s, lambda)?;
        let g = self.smeared_gradient(s, mu)?;
        Ok((f.x.dot(&g.p) - g.x.dot(&f.p)) / self.spacing)
    }

    /// `|{phi[lambda], phi[mu]}|` on an on-shell state.
    pub fn closure_residual(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
        mu: &LoopArray,
    ) -> Result<f64, LatticeError> {
        let off = self.max_constraint(s)?;
        if off.is_nan() || off > ON_SHELL_TOL {
            return Err(LatticeError::OffShell(off));
        }
        Ok(self.closure_bracket(s, lambda, mu)?.abs())
    }
}
