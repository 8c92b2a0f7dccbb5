use super::{LatticeError, LatticeState, LatticeSystem, LoopArray};

impl LatticeSystem {
    /// Hamilton's equations for the generator `phi[lambda]`.
    fn velocity(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
    ) -> Result<(LoopArray, LoopArray), LatticeError> {
        let g = self.smeared_gradient(s, lambda)?;
        let k = 1.0 / self.spacing;
        Ok((g.p.scaled(k), g.x.scaled(-k)))
    }

    fn rk4_step(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
        dt: f64,
    ) -> Result<LatticeState, LatticeError> {
        let shift = |k: &(LoopArray, LoopArray), c: f64| LatticeState {
            x: s.x.add_scaled(c, &k.0),
            p: s.p.add_scaled(c, &k.1),
        };
        let k1 = self.velocity(s, lambda)?;
        let k2 = self.velocity(&shift(&k1, dt / 2.0), lambda)?;
        let k3 = self.velocity(&shift(&k2, dt / 2.0), lambda)?;
        let k4 = self.velocity(&shift(&k3, dt), lambda)?;
        let combine = |a: &LoopArray, k: [&LoopArray; 4]| {
            a.add_scaled(dt / 6.0, k[0])
                .add_scaled(dt / 3.0, k[1])
                .add_scaled(dt / 3.0, k[2])
                .add_scaled(dt / 6.0, k[3])
        };
        LatticeState::new(
            combine(&s.x, [&k1.0, &k2.0, &k3.0, &k4.0]),
            combine(&s.p, [&k1.1, &k2.1, &k3.1, &k4.1]),
        )
    }

    /// Every state of a classic RK4 integration, the initial one included.
    pub fn gauge_trajectory(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
        dt: f64,
        steps: usize,
    ) -> Result<Vec<LatticeState>, LatticeError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(LatticeError::BadTimeStep(dt));
        }
        self.validate(s)?;
        self.check_shape(lambda)?;
        let mut out = Vec::with_capacity(steps + 1);
        out.push(s.clone());
        if lambda.max_abs() == 0.0 {
            out.resize(steps + 1, s.clone());
            return Ok(out);
        }
        for step in 0..steps {
            let next = self
                .rk4_step(out.last().expect("nonempty"), lambda, dt)
                .map_err(|e| match e {
                    LatticeError::Pole { site } => LatticeError::FlowPole { site, step },
                    other => other,
                })?;
            out.push(next);
        }
        Ok(out)
    }

    /// Final state of [`LatticeSystem::gauge_trajectory`].
    pub fn gauge_flow(
        &self,
        s: &LatticeState,
        lambda: &LoopArray,
        dt: f64,
        steps: usize,
    ) -> Result<LatticeState, LatticeError> {
        Ok(self
            .gauge_trajectory(s, lambda, dt, steps)?
            .pop()
            .expect("nonempty"))
    }
}

/// `max |phi^i_a|` over a trajectory.
pub fn drift(sys: &LatticeSystem, trajectory: &[LatticeState]) -> Result<f64, LatticeError> {
    trajectory
        .iter()
        .try_fold(0.0f64, |m, s| Ok(m.max(sys.max_constraint(s)?)))
}
