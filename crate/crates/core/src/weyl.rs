//! First-order differential operators `p_0 + Σ p_i ∂_i` on `K[x1..xn]` and
//! the conjugation action `(σθ)(r) = σ(θ(σ^{-1} r))`.

use crate::group::{act, GroupError, SquareMatrix, Substitution};
use crate::polyring::{PolyError, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderOperator {
    constant: Polynomial,
    derivations: Vec<Polynomial>,
}

impl FirstOrderOperator {
    pub fn new(constant: Polynomial, derivations: Vec<Polynomial>) -> Result<Self, PolyError> {
        let ring = constant.ring();
        if let Some(bad) = derivations.iter().find(|p| p.ring() != ring) {
            return Err(PolyError::RingMismatch(ring, bad.ring()));
        }
        assert_eq!(derivations.len(), ring.nvars, "one coefficient per variable");
        Ok(FirstOrderOperator { constant, derivations })
    }

    /// The bare partial derivative `∂_i`.
    pub fn partial(ring: Ring, i: usize) -> Self {
        let derivations = (0..ring.nvars)
            .map(|k| if k == i { ring.one() } else { ring.zero() })
            .collect();
        FirstOrderOperator { constant: ring.zero(), derivations }
    }

    pub fn ring(&self) -> Ring {
        self.constant.ring()
    }

    pub fn constant(&self) -> &Polynomial {
        &self.constant
    }

    pub fn derivations(&self) -> &[Polynomial] {
        &self.derivations
    }

    /// The operator with the multiplication part dropped.
    pub fn derivation_part(&self) -> Self {
        FirstOrderOperator { constant: self.ring().zero(), derivations: self.derivations.clone() }
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut out = self.constant.checked_mul(f)?;
        for (i, p) in self.derivations.iter().enumerate() {
            if !p.is_zero() {
                out = &out + &(p * &f.partial(i));
            }
        }
        Ok(out)
    }
}

/// `σθ`. Since `σ ∂_i σ^{-1}` sends `x_k` to `(T_σ^{-1})[i][k]`, the
/// coefficient of `∂_k` in `σθ` is `Σ_i σ(p_i) (T_σ^{-1})[i][k]`. Under the
/// row convention `x ↦ T x` this is the familiar `(T^{-1})^t`.
pub fn act_on_operator(sigma: &SquareMatrix, theta: &FirstOrderOperator) -> Result<FirstOrderOperator, GroupError> {
    let ring = theta.ring();
    let mut sub = Substitution::new(ring, sigma)?;
    let inv = sigma.inverse();
    let moved: Vec<Polynomial> = theta.derivations.iter().map(|p| sub.apply(p)).collect();
    let derivations = (0..ring.nvars)
        .map(|k| {
            moved
                .iter()
                .enumerate()
                .fold(ring.zero(), |acc, (i, p)| &acc + &p.scale(inv.entry(i, k)))
        })
        .collect();
    Ok(FirstOrderOperator { constant: act(sigma, &theta.constant)?, derivations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    const Q: Field = Field::Rationals;

    #[test]
    fn diagonal_scales_partials_inversely() {
        let r = Ring::new(2, Q);
        let d = SquareMatrix::from_i64(Q, &[&[3, 0], &[0, 5]]).unwrap();
        let moved = act_on_operator(&d, &FirstOrderOperator::partial(r, 0)).unwrap();
        let third = Q.from_i64(3).inv().unwrap();
        assert_eq!(moved.derivations()[0], r.constant(third));
        assert!(moved.derivations()[1].is_zero());
    }

    #[test]
    fn identity_and_swap() {
        let r = Ring::new(2, Q);
        let theta = FirstOrderOperator::new(r.parse("x*y").unwrap(), vec![r.parse("x^2").unwrap(), r.parse("1 - y").unwrap()]).unwrap();
        assert_eq!(act_on_operator(&SquareMatrix::identity(Q, 2), &theta).unwrap(), theta);
        let swap = SquareMatrix::from_i64(Q, &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(
            act_on_operator(&swap, &FirstOrderOperator::partial(r, 0)).unwrap(),
            FirstOrderOperator::partial(r, 1)
        );
    }

    #[test]
    fn equivariance_on_a_non_normal_matrix() {
        let r = Ring::new(2, Q);
        let sigma = SquareMatrix::from_i64(Q, &[&[1, 2], &[0, 1]]).unwrap();
        let theta = FirstOrderOperator::new(r.parse("y").unwrap(), vec![r.parse("x*y").unwrap(), r.parse("3").unwrap()]).unwrap();
        let f = r.parse("x^3 + x*y^2 - 4*y").unwrap();
        let lhs = act_on_operator(&sigma, &theta).unwrap().apply(&act(&sigma, &f).unwrap()).unwrap();
        let rhs = act(&sigma, &theta.apply(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule() {
        let r = Ring::new(3, Q);
        let theta = FirstOrderOperator::new(r.zero(), vec![r.parse("z").unwrap(), r.parse("x^2").unwrap(), r.one()]).unwrap();
        let (f, g) = (r.parse("x*y + z^2").unwrap(), r.parse("y^3 - x").unwrap());
        let lhs = theta.apply(&(&f * &g)).unwrap();
        let rhs = &(&f * &theta.apply(&g).unwrap()) + &(&g * &theta.apply(&f).unwrap());
        assert_eq!(lhs, rhs);
    }
}
