//! Exact scalar engine: rational functions of chart coordinates.

mod compiled;
mod parse;
pub mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use compiled::CompiledExpr;
pub use parse::parse_scalar;
use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("syntax error at offset {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("division by an expression that is identically zero")]
    ZeroDenominator,
    #[error("pole: denominator vanishes at the evaluation point")]
    PoleError,
    #[error("evaluation point has {got} coordinates, chart has {expected}")]
    PointDimension { expected: usize, got: usize },
}

/// A named chart coordinate; `index` is 1-based as in the spec files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub name: String,
    pub index: usize,
}

/// Ordered, duplicate-free coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, String> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(format!("`{n}` is not a valid coordinate name"));
            }
            if names[..i].contains(n) {
                return Err(format!("coordinate `{n}` declared twice"));
            }
        }
        Ok(Chart { names })
    }

    /// `x1, ..., xn`.
    pub fn standard(dim: usize) -> Self {
        Chart {
            names: (1..=dim).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coordinate(&self, position: usize) -> Coordinate {
        Coordinate {
            name: self.names[position].clone(),
            index: position + 1,
        }
    }

    pub fn coordinates(&self) -> impl Iterator<Item = Coordinate> + '_ {
        (0..self.dim()).map(|i| self.coordinate(i))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Rational function in canonical form: `gcd(num, den) = 1`, `den` monic under
/// graded-lex order, zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.display_with(&Chart::standard(self.num_vars()))
        )
    }
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ScalarExpr {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_int(k: i64) -> Self {
        ScalarExpr::from_poly(Poly::from_int(k))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ScalarExpr::from_poly(Poly::constant(q))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ScalarExpr::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The coordinate at 0-based `position`.
    pub fn var(position: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(position))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` and normalizes it.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return ScalarExpr::zero();
        }
        if let Some(k) = den.as_constant() {
            return ScalarExpr {
                num: num.scale(&k.recip()),
                den: Poly::one(),
            };
        }
        let g = poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            ScalarExpr { num, den }
        } else {
            let k = lc.recip();
            ScalarExpr {
                num: num.scale(&k),
                den: den.scale(&k),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// One past the highest coordinate position occurring in the expression.
    pub fn num_vars(&self) -> usize {
        self.num.num_vars().max(self.den.num_vars())
    }

    pub fn recip(&self) -> Result<Self, ExprError> {
        ScalarExpr::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &ScalarExpr) -> Result<Self, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(Self::normalized(
            self.num.mul(&rhs.den),
            self.den.mul(&rhs.num),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        // canonical form is preserved under powers
        ScalarExpr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Exact partial derivative with respect to the coordinate at 0-based `position`.
    pub fn differentiate(&self, position: usize) -> Self {
        let dn = self.num.derivative(position);
        if self.den.is_one() {
            return ScalarExpr::from_poly(dn);
        }
        let dd = self.den.derivative(position);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    /// Exact value at `point` (one rational per chart coordinate).
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, ExprError> {
        let need = self.num_vars();
        if point.len() < need {
            return Err(ExprError::PointDimension {
                expected: need,
                got: point.len(),
            });
        }
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ExprError::PoleError);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr::new(self)
    }

    pub fn display_with<'a>(&'a self, chart: &'a Chart) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, chart }
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return ScalarExpr::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        ScalarExpr::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarExpr::from_poly(self.num.mul(&rhs.num));
        }
        ScalarExpr::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

/// Panics on division by the zero expression; use [`ScalarExpr::checked_div`] otherwise.
impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr { (&self).$m(&rhs) }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: &ScalarExpr) -> ScalarExpr { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl std::iter::Sum for ScalarExpr {
    fn sum<I: Iterator<Item = ScalarExpr>>(iter: I) -> Self {
        iter.fold(ScalarExpr::zero(), |a, b| &a + &b)
    }
}

/// Prints an expression in the input grammar, so output re-parses to the same value.
pub struct ExprDisplay<'a> {
    expr: &'a ScalarExpr,
    chart: &'a Chart,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ScalarExpr { num, den } = self.expr;
        if den.is_one() {
            return write_poly(f, num, self.chart);
        }
        if num.num_terms() > 1 {
            f.write_str("(")?;
            write_poly(f, num, self.chart)?;
            f.write_str(")")?;
        } else {
            write_poly(f, num, self.chart)?;
        }
        f.write_str("/")?;
        let bare = den.num_terms() == 1
            && den.leading().is_some_and(|(m, c)| {
                c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
            });
        if bare {
            write_poly(f, den, self.chart)
        } else {
            f.write_str("(")?;
            write_poly(f, den, self.chart)?;
            f.write_str(")")
        }
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, chart: &Chart) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = poly::is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        match (k, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            let name = chart
                .names()
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("x{}", i + 1));
            match e {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        f.write_str(&factors.join("*"))?;
    }
    Ok(())
}
