//! Seeded trigonometric loops and test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LoopArray;

pub const MAX_HARMONIC: usize = 3;
/// Bound on `sum |coefficients|` of each loop component, so `|X^i| <= 0.45`.
pub const LOOP_AMPLITUDE: f64 = 0.45;

/// `c + sum_k (a_k cos(k s) + b_k sin(k s))` for `k = 1..`
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigSeries {
    pub fn zero() -> Self {
        TrigSeries {
            constant: 0.0,
            cos: vec![],
            sin: vec![],
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        let mut v = self.constant;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let ks = (k + 1) as f64 * s;
            v += a * ks.cos() + b * ks.sin();
        }
        v
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let mut v = 0.0;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kf = (k + 1) as f64;
            v += kf * (b * (kf * s).cos() - a * (kf * s).sin());
        }
        v
    }

    fn abs_sum(&self) -> f64 {
        self.constant.abs()
            + self
                .cos
                .iter()
                .chain(&self.sin)
                .map(|c| c.abs())
                .sum::<f64>()
    }

    fn scale(&mut self, k: f64) {
        self.constant *= k;
        self.cos
            .iter_mut()
            .chain(self.sin.iter_mut())
            .for_each(|c| *c *= k);
    }
}

/// One [`TrigSeries`] per component.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigField {
    pub comps: Vec<TrigSeries>,
}

impl TrigField {
    /// Values at `sigma_a = 2 pi a / sites`.
    pub fn sample(&self, sites: usize) -> LoopArray {
        let h = 2.0 * std::f64::consts::PI / sites as f64;
        LoopArray::from_fn(self.comps.len(), sites, |i, a| {
            self.comps[i].value(a as f64 * h)
        })
    }

    pub fn sample_derivative(&self, sites: usize) -> LoopArray {
        let h = 2.0 * std::f64::consts::PI / sites as f64;
        LoopArray::from_fn(self.comps.len(), sites, |i, a| {
            self.comps[i].derivative(a as f64 * h)
        })
    }

    pub fn scaled(&self, k: f64) -> TrigField {
        let mut out = self.clone();
        out.comps.iter_mut().for_each(|c| c.scale(k));
        out
    }
}

fn draw_series(rng: &mut ChaCha8Rng, with_constant: bool) -> TrigSeries {
    let constant = if with_constant {
        rng.gen_range(-1.0..1.0)
    } else {
        0.0
    };
    let mut cos = Vec::with_capacity(MAX_HARMONIC);
    let mut sin = Vec::with_capacity(MAX_HARMONIC);
    for k in 1..=MAX_HARMONIC {
        let w = 1.0 / k as f64;
        cos.push(w * rng.gen_range(-1.0..1.0));
        sin.push(w * rng.gen_range(-1.0..1.0));
    }
    TrigSeries { constant, cos, sin }
}

/// Loop through a neighbourhood of the origin moving only in the `active`
/// coordinates. Coefficients are drawn for every coordinate regardless of
/// `active`, so the same seed gives the same active components.
pub fn random_loop(dim: usize, active: &[usize], seed: u64) -> TrigField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps = (0..dim)
        .map(|i| {
            let mut s = draw_series(&mut rng, false);
            let target = LOOP_AMPLITUDE * rng.gen_range(0.5..1.0);
            let sum = s.abs_sum();
            if active.contains(&i) && sum > 0.0 {
                s.scale(target / sum);
                s
            } else {
                TrigSeries::zero()
            }
        })
        .collect();
    TrigField { comps }
}

/// Smooth periodic test functions `(lambda, mu)`, independent of the loop
/// drawn from the same seed.
pub fn random_test_functions(dim: usize, seed: u64) -> (TrigField, TrigField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_7e57_f00d_0001);
    let mut field = || TrigField {
        comps: (0..dim).map(|_| draw_series(&mut rng, true)).collect(),
    };
    let lambda = field();
    let mu = field();
    (lambda, mu)
}
