use crate::group::{act, GroupError, SquareMatrix};
use crate::polyring::{PolyError, Polynomial};
use crate::scalars::Scalar;

use super::slice::TermLayout;
use super::IdealSpec;

/// `numerator / denominator` in a localization of `R`. Two fractions are the
/// same class when `a d' = a' d` (R is a domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl Fraction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Fraction, PolyError> {
        if numerator.ring() != denominator.ring() {
            return Err(PolyError::RingMismatch(numerator.ring(), denominator.ring()));
        }
        assert!(!denominator.is_zero(), "zero denominator");
        Ok(Fraction { numerator, denominator })
    }

    /// `m / f^t`.
    pub fn power_denominator(m: Polynomial, f: &Polynomial, t: u32) -> Result<Fraction, PolyError> {
        Fraction::new(m, f.pow(t))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn same_class(&self, other: &Fraction) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    /// `σ(a) / σ(b)`.
    pub fn act(&self, sigma: &SquareMatrix) -> Result<Fraction, GroupError> {
        Ok(Fraction { numerator: act(sigma, &self.numerator)?, denominator: act(sigma, &self.denominator)? })
    }

    /// Rewrites to denominator `f^{t + extra}` by multiplying through.
    pub fn raise(&self, f: &Polynomial, extra: u32) -> Fraction {
        let q = f.pow(extra);
        Fraction { numerator: &self.numerator * &q, denominator: &self.denominator * &q }
    }
}

/// `Σ m_S / f_S^t` for a coordinate vector of a Čech term.
pub(crate) fn render_cocycle(ideal: &IdealSpec, layout: &TermLayout, column: &[Scalar]) -> String {
    let parts: Vec<String> = layout
        .numerators(column)
        .into_iter()
        .map(|(subset, m)| {
            let num = if m.num_terms() > 1 { format!("({m})") } else { m.to_string() };
            if subset.is_empty() {
                return num;
            }
            let f = ideal.subset_product(&subset);
            let base = if f.num_terms() > 1 || subset.len() > 1 || layout.level > 1 {
                format!("({f})")
            } else {
                f.to_string()
            };
            if layout.level > 1 {
                format!("{num}/{base}^{}", layout.level)
            } else {
                format!("{num}/{base}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteMatrixGroup;
    use crate::polyring::Ring;
    use crate::scalars::Field;

    const Q: Field = Field::Rationals;

    #[test]
    fn class_equality() {
        let r = Ring::new(2, Q);
        let f = r.parse("x*y").unwrap();
        let a = Fraction::power_denominator(r.parse("x").unwrap(), &f, 2).unwrap();
        let b = Fraction::new(r.one(), r.parse("x*y^2").unwrap()).unwrap();
        assert!(a.same_class(&b));
        assert!(a.same_class(&a.raise(&f, 3)));
        assert!(!a.same_class(&Fraction::new(r.one(), f).unwrap()));
    }

    #[test]
    fn acting_on_invariant_denominators() {
        let r = Ring::new(2, Q);
        let g = FiniteMatrixGroup::close(&[SquareMatrix::from_i64(Q, &[&[0, -1], &[1, 0]]).unwrap()], 10).unwrap();
        let f = r.parse("x^2 + y^2").unwrap();
        let m = r.parse("x^3 - 2*x*y^2 + y").unwrap();
        for sigma in g.elements() {
            let moved = Fraction::power_denominator(m.clone(), &f, 3).unwrap().act(sigma).unwrap();
            let direct = Fraction::power_denominator(act(sigma, &m).unwrap(), &f, 3).unwrap();
            assert!(moved.same_class(&direct));
            assert_eq!(moved.denominator(), direct.denominator());
        }
    }

    #[test]
    fn rendering() {
        let r = Ring::new(2, Q);
        let ideal = IdealSpec::parse(r, "x, y", None).unwrap();
        let layout = TermLayout::new(&ideal, 2, -2, 1);
        assert_eq!(render_cocycle(&ideal, &layout, &[Q.one()]), "1/(x*y)");
        let layout = TermLayout::new(&ideal, 2, -2, 2);
        assert_eq!(render_cocycle(&ideal, &layout, &[Q.zero(), Q.one(), Q.zero()]), "x*y/(x*y)^2");
    }
}
