//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are addressed by position (0-based, in chart declaration order).
//! Exponent vectors are stored with trailing zeros trimmed, so a polynomial
//! does not need to know how many variables its chart has.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize, power: u32) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = power;
        Monomial::new(e)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial::new(e)
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() && other.0[self.0.len()..].iter().any(|&e| e > 0) {
            return None;
        }
        let mut e = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let b = other.exponent(i);
            if b > self.0[i] {
                return None;
            }
            e.push(self.0[i] - b);
        }
        Some(Monomial::new(e))
    }

    fn with_exponent(&self, var: usize, power: u32) -> Monomial {
        let mut e = self.0.clone();
        if e.len() <= var {
            e.resize(var + 1, 0);
        }
        e[var] = power;
        Monomial::new(e)
    }

    /// Highest variable index with a nonzero exponent.
    fn top_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    match self.exponent(i).cmp(&other.exponent(i)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with exact rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.terms
                    .iter()
                    .rev()
                    .map(|(m, c)| (m.exponents(), c.to_string())),
            )
            .finish()
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(index: usize) -> Self {
        Poly::term(BigRational::one(), Monomial::var(index, 1))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// One past the highest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.exponents().len())
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c * k))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                let k = BigRational::from_integer(BigInt::from(e));
                out.add_term(m.with_exponent(var, e - 1), c * k);
            }
        }
        out
    }

    /// Exact evaluation; missing point coordinates are treated as errors by the caller.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(k) = divisor.as_constant() {
            return Some(self.scale(&k.recip()));
        }
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.checked_div(lm)?;
            let k = rc / lc;
            rem = rem.sub(&divisor.mul_term(&m, &k));
            quo.add_term(m, k);
        }
        Some(quo)
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `var^power`, as a polynomial free of `var`.
    fn coeff_in(&self, var: usize, power: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == power)
                .map(|(m, c)| (m.with_exponent(var, 0), c.clone()))
                .collect(),
        }
    }

    fn top_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::top_var).max()
    }

    /// Monic gcd of the coefficients of `self` viewed as a polynomial in `var`.
    fn content_in(&self, var: usize) -> Poly {
        let d = self.degree_in(var);
        let mut g = Poly::zero();
        for k in (0..=d).rev() {
            let c = self.coeff_in(var, k);
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    fn primitive_part(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        self.div_exact(&c)
            .expect("content divides its polynomial")
            .monic()
    }

    /// Pseudo-remainder of `self` by `divisor`, both viewed in `var`.
    fn pseudo_rem(&self, divisor: &Poly, var: usize) -> Poly {
        let dd = divisor.degree_in(var);
        let lcd = divisor.coeff_in(var, dd);
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(var);
            if dr < dd {
                return r;
            }
            let lcr = r.coeff_in(var, dr);
            let shift = Poly::term(BigRational::one(), Monomial::var(var, dr - dd));
            r = lcd.mul(&r).sub(&lcr.mul(&shift).mul(divisor));
        }
    }
}

/// Monic greatest common divisor over Q (recursive primitive remainder sequence).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.num_terms() == 1 && b.num_terms() == 1 {
        let (ma, _) = a.leading().unwrap();
        let (mb, _) = b.leading().unwrap();
        let n = ma.exponents().len().min(mb.exponents().len());
        let e = (0..n).map(|i| ma.exponent(i).min(mb.exponent(i))).collect();
        return Poly::term(BigRational::one(), Monomial::new(e));
    }
    let var = a
        .top_var()
        .max(b.top_var())
        .expect("non-constant polynomials");
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 {
        return gcd(a, &b.content_in(var));
    }
    if db == 0 {
        return gcd(&a.content_in(var), b);
    }
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides").monic();
    let mut q = b.div_exact(&cb).expect("content divides").monic();
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == 0 {
            q = Poly::one();
            break;
        }
        p = q;
        q = r.primitive_part(var);
    }
    c.mul(&q.primitive_part(var)).monic()
}

/// Sign-aware helper used by the printer.
pub(crate) fn is_negative(c: &BigRational) -> bool {
    c.is_negative()
}
