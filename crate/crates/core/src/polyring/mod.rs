//! Sparse multivariate polynomials over a [`Field`] with graded pieces.
//!
//! Terms are kept in graded-lex order with `x1 > x2 > ... > xn`: higher
//! total degree first, ties broken by the larger exponent of the earliest
//! variable. Every matrix built on top of this module indexes degree-`d`
//! monomials in that order.

mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalars::{Field, Scalar};

pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("coordinate vector has length {got}, expected {expected}")]
    CoordinateLength { expected: usize, got: usize },
}

/// `K[x1, ..., xn]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    pub nvars: usize,
    pub field: Field,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| self.var_name(i)).collect();
        write!(f, "{}[{}]", self.field, vars.join(","))
    }
}

impl Ring {
    pub fn new(nvars: usize, field: Field) -> Ring {
        Ring { nvars, field }
    }

    /// `x, y, z` when `n <= 3`, otherwise `x1..xn`.
    pub fn var_name(&self, i: usize) -> String {
        if self.nvars <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: *self, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        self.term(Monomial::one(self.nvars), c)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "variable index out of range");
        self.term(Monomial::var(self.nvars, i), self.field.one())
    }

    pub fn term(&self, m: Monomial, c: Scalar) -> Polynomial {
        assert_eq!(m.nvars(), self.nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: *self, terms }
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial, ParseError> {
        parse::parse(*self, s)
    }

    /// Number of monomials of degree `d`: `C(n + d - 1, d)`.
    pub fn graded_dim(&self, d: u32) -> usize {
        if self.nvars == 0 {
            return usize::from(d == 0);
        }
        binomial(self.nvars as u64 + d as u64 - 1, d as u64) as usize
    }

    /// All monomials of total degree `d`, in canonical order.
    pub fn monomial_basis(&self, d: u32) -> Vec<Monomial> {
        let n = self.nvars;
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        let mut exps = vec![0u32; n];
        fn rec(pos: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = exps.len();
            if pos == n - 1 {
                exps[pos] = remaining;
                out.push(Monomial::new(exps.clone()));
                return;
            }
            for e in (0..=remaining).rev() {
                exps[pos] = e;
                rec(pos + 1, remaining - e, exps, out);
            }
        }
        rec(0, d, &mut exps, &mut out);
        out
    }

    pub fn graded_piece(&self, d: u32) -> GradedPiece {
        GradedPiece::new(self, d)
    }

    pub fn from_coords(&self, d: u32, coords: &[Scalar]) -> Result<Polynomial, PolyError> {
        self.graded_piece(d).polynomial(coords)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree
            .cmp(&self.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The degree-`d` piece of a ring: its monomial basis with an index lookup.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    ring: Ring,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    pub fn new(ring: &Ring, degree: u32) -> GradedPiece {
        let monomials = ring.monomial_basis(degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        GradedPiece { ring: *ring, degree, monomials, index }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `f` against the monomial basis.
    pub fn coords(&self, f: &Polynomial) -> Result<Vec<Scalar>, PolyError> {
        if f.ring != self.ring {
            return Err(PolyError::RingMismatch(f.ring, self.ring));
        }
        let mut v = vec![self.ring.field.zero(); self.dim()];
        for (m, c) in &f.terms {
            let i = self.index_of(m).ok_or(PolyError::NotHomogeneous(self.degree))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn polynomial(&self, coords: &[Scalar]) -> Result<Polynomial, PolyError> {
        if coords.len() != self.dim() {
            return Err(PolyError::CoordinateLength { expected: self.dim(), got: coords.len() });
        }
        let terms = self
            .monomials
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Polynomial { ring: self.ring, terms })
    }
}

/// A polynomial with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// The common degree of all terms, if there is one. The zero polynomial
    /// has no definite degree and returns `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree == d).then_some(d)
    }

    /// True if every term has degree `d` (vacuously for zero).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree == d)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch(self.ring, other.ring))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { ring: self.ring, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect();
        Polynomial { ring: self.ring, terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.exponents[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * &self.ring.field.from_i64(e as i64));
        }
        out
    }

    /// Coordinates against `monomial_basis(d)`.
    pub fn coords(&self, d: u32) -> Result<Vec<Scalar>, PolyError> {
        if !self.is_homogeneous_of(d) {
            return Err(PolyError::NotHomogeneous(d));
        }
        self.ring.graded_piece(d).coords(self)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    /// Panics on ring mismatch; see [`Polynomial::checked_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs).unwrap();
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ring: self.ring, terms }
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    /// Panics on ring mismatch; see [`Polynomial::checked_mul`].
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs).unwrap();
        let mut out = self.ring.zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = self.ring.var_name(i);
                    if e == 1 { v } else { format!("{v}^{e}") }
                })
                .collect();
            let coeff = abs.to_string();
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r2() -> Ring {
        Ring::new(2, Field::Rationals)
    }

    #[test]
    fn arithmetic_examples() {
        let r = r2();
        let (x, y) = (r.var(0), r.var(1));
        assert_eq!(&(&x + &y) * &(&x - &y), r.parse("x^2 - y^2").unwrap());
        let f = r.parse("3*x*y + 1/2").unwrap();
        assert_eq!(&f * &r.one(), f);
        let p = &x.pow(2) * &y.pow(3);
        assert_eq!(p.homogeneous_degree(), Some(5));
        assert_eq!(p.to_string(), "x^2*y^3");
        assert_eq!((&x + &r.one()).homogeneous_degree(), None);
    }

    #[test]
    fn ring_mismatch() {
        let a = r2().var(0);
        let b = Ring::new(3, Field::Rationals).var(0);
        assert!(matches!(a.checked_add(&b), Err(PolyError::RingMismatch(..))));
        let c = Ring::new(2, Field::Prime(5)).var(0);
        assert!(matches!(a.checked_mul(&c), Err(PolyError::RingMismatch(..))));
    }

    #[test]
    fn monomial_basis_order() {
        let r = r2();
        let names: Vec<String> = r
            .monomial_basis(2)
            .into_iter()
            .map(|m| r.term(m, r.field.one()).to_string())
            .collect();
        assert_eq!(names, ["x^2", "x*y", "y^2"]);
        let r3 = Ring::new(3, Field::Rationals);
        assert_eq!(r3.monomial_basis(0), vec![Monomial::one(3)]);
        assert_eq!(r3.monomial_basis(4).len(), 15);
    }

    #[test]
    fn basis_matches_brute_force() {
        // Enumerate all exponent vectors in a box and filter by degree.
        for n in 1..=4usize {
            let r = Ring::new(n, Field::Rationals);
            for d in 0..=12u32 {
                let mut count = 0usize;
                let total = (d as usize + 1).pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut s = 0;
                    for _ in 0..n {
                        s += c % (d as usize + 1);
                        c /= d as usize + 1;
                    }
                    if s == d as usize {
                        count += 1;
                    }
                }
                let basis = r.monomial_basis(d);
                assert_eq!(basis.len(), count);
                assert_eq!(r.graded_dim(d), count);
                assert!(basis.windows(2).all(|w| w[0] < w[1]));
                assert!(basis.iter().all(|m| m.degree() == d));
            }
        }
    }

    #[test]
    fn coords_examples() {
        let r = r2();
        let f = r.parse("x^2 + 2*x*y").unwrap();
        let q = Field::Rationals;
        assert_eq!(f.coords(2).unwrap(), vec![q.one(), q.from_i64(2), q.zero()]);
        assert_eq!(r.zero().coords(3).unwrap(), vec![q.zero(); 4]);
        assert_eq!(r.parse("x + 1").unwrap().coords(1), Err(PolyError::NotHomogeneous(1)));
    }

    #[test]
    fn partial_derivatives() {
        let r = r2();
        let f = r.parse("x^3*y + 5*y^2").unwrap();
        assert_eq!(f.partial(0), r.parse("3*x^2*y").unwrap());
        assert_eq!(f.partial(1), r.parse("x^3 + 10*y").unwrap());
    }

    #[test]
    fn multiplication_is_injective_on_pieces() {
        let r = Ring::new(3, Field::Rationals);
        let f = r.parse("x^2 - y*z + 3*z^2").unwrap();
        for d in [0u32, 2, 4] {
            let src = r.graded_piece(d);
            let tgt = r.graded_piece(d + 2);
            let cols: Vec<Vec<Scalar>> = src
                .monomials()
                .iter()
                .map(|m| tgt.coords(&f.mul_monomial(m)).unwrap())
                .collect();
            let m = crate::linalg::Matrix::from_columns(r.field, tgt.dim(), &cols);
            assert_eq!(m.rank(), src.dim());
        }
    }

    pub(crate) fn arb_homogeneous(n: usize, max_deg: u32) -> impl Strategy<Value = (u32, Vec<i64>)> {
        (0..=max_deg).prop_flat_map(move |d| {
            let dim = Ring::new(n, Field::Rationals).graded_dim(d);
            (Just(d), proptest::collection::vec(-4i64..5, dim))
        })
    }

    proptest! {
        #[test]
        fn coords_round_trip((d, c) in arb_homogeneous(3, 6)) {
            let r = Ring::new(3, Field::Rationals);
            let coords: Vec<Scalar> = c.iter().map(|&v| r.field.from_i64(v)).collect();
            let f = r.from_coords(d, &coords).unwrap();
            prop_assert_eq!(f.coords(d).unwrap(), coords);
            prop_assert_eq!(r.from_coords(d, &f.coords(d).unwrap()).unwrap(), f);
        }

        #[test]
        fn display_parse_round_trip((d, c) in arb_homogeneous(2, 5), p in prop_oneof![Just(0u64), Just(7)]) {
            let field = if p == 0 { Field::Rationals } else { Field::Prime(p) };
            let r = Ring::new(2, field);
            let coords: Vec<Scalar> = c.iter().map(|&v| field.from_i64(v)).collect();
            let f = r.from_coords(d, &coords).unwrap();
            prop_assert_eq!(r.parse(&f.to_string()).unwrap(), f);
        }
    }
}
