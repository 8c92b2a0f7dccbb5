use num_traits::ToPrimitive;

use super::poly::Poly;
use super::{ExprError, ScalarExpr};

#[derive(Debug, Clone)]
struct FloatTerm {
    coeff: f64,
    powers: Vec<(usize, i32)>,
}

#[derive(Debug, Clone, Default)]
struct FloatPoly {
    terms: Vec<FloatTerm>,
}

impl FloatPoly {
    fn new(p: &Poly) -> Self {
        FloatPoly {
            terms: p
                .terms()
                .map(|(m, c)| FloatTerm {
                    coeff: c.to_f64().unwrap_or(f64::NAN),
                    powers: m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect(),
                })
                .collect(),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .fold(t.coeff, |acc, &(i, e)| acc * x[i].powi(e))
            })
            .sum()
    }
}

/// Floating-point evaluator for a [`ScalarExpr`].
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    num: FloatPoly,
    den: Option<FloatPoly>,
    vars: usize,
}

impl CompiledExpr {
    pub(super) fn new(e: &ScalarExpr) -> Self {
        CompiledExpr {
            num: FloatPoly::new(e.numerator()),
            den: (!e.is_polynomial()).then(|| FloatPoly::new(e.denominator())),
            vars: e.num_vars(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.terms.is_empty()
    }

    /// Value at `x`; fails when the denominator evaluates to exactly zero or
    /// the quotient is not finite.
    pub fn eval(&self, x: &[f64]) -> Result<f64, ExprError> {
        if x.len() < self.vars {
            return Err(ExprError::PointDimension {
                expected: self.vars,
                got: x.len(),
            });
        }
        let n = self.num.eval(x);
        match &self.den {
            None => Ok(n),
            Some(d) => {
                let d = d.eval(x);
                let v = n / d;
                if d == 0.0 || !v.is_finite() {
                    Err(ExprError::PoleError)
                } else {
                    Ok(v)
                }
            }
        }
    }
}
