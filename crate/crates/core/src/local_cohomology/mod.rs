//! Graded pieces of local cohomology `H^i_I(R)` through the level-truncated
//! Čech complex, the induced `G`-action, and socles.
//!
//! Stage `t` of the Čech colimit in internal degree `d` has, in position
//! `k`, one block per `k`-subset `S` of the generators: the fractions
//! `m / f_S^t` with `deg m = d + t·deg f_S`. The transition to stage `t + 1`
//! is `m / f_S^t ↦ m f_S / f_S^{t+1}`. A graded piece is reported once the
//! images of consecutive stages agree across a full window, and
//! `NotStabilized` otherwise.

mod fraction;
mod piece;
mod slice;
mod socle;

use thiserror::Error;

use crate::group::{FiniteMatrixGroup, GroupError};
use crate::polyring::{ParseError, Polynomial, Ring};

pub use fraction::Fraction;
pub use piece::{
    invariant_dim_via_fixed_complex, lc_piece, level_tower, multiplication_map, CohomologyPiece, LevelParams,
    LevelRecord, LevelTower,
};
pub use slice::{cech_slice, Block, CechLevelSlice, TermLayout};
pub use socle::{default_socle_window, socle_dims, SocleRequest, SocleRow, SocleTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcError {
    #[error("the ideal has no generators")]
    EmptyIdeal,
    #[error("ideal generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("ideal generator {0} is not homogeneous")]
    NotHomogeneousIdeal(usize),
    #[error("ideal generator {index} ({generator}) is not invariant under the group")]
    NotInvariantIdeal { index: usize, generator: String },
    #[error("{what} {poly} is not an invariant")]
    NotInvariant { what: &'static str, poly: String },
    #[error("cohomological index {i} is outside 0..={s}")]
    IndexOutOfRange { i: usize, s: usize },
    #[error("invalid level parameters: {0}")]
    InvalidParams(String),
    #[error("H^{i} in degree {d} did not stabilize by level {t_max} (dims per level: {dims:?})")]
    NotStabilized { i: usize, d: i64, t_max: u32, dims: Vec<usize> },
    #[error("multiplication by {0} leaves the stable piece; raise t_max or the window")]
    MultiplicationOutsidePiece(String),
    #[error("degree range truncates the module at degree {0}")]
    RangeTruncatesModule(i64),
    #[error("socle of the invariant part requires a group")]
    MissingGroup,
    #[error("ring mismatch: ideal in {ideal}, other data in {other}")]
    RingMismatch { ideal: Ring, other: Ring },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `I = (f_1, ..., f_s)` with homogeneous nonzero generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    ring: Ring,
    generators: Vec<Polynomial>,
    degrees: Vec<u32>,
    invariant_flag: bool,
}

impl IdealSpec {
    /// When `group` is given every generator must be invariant, and the
    /// ideal is flagged as an ideal of `R^G`.
    pub fn new(generators: Vec<Polynomial>, group: Option<&FiniteMatrixGroup>) -> Result<IdealSpec, LcError> {
        let ring = generators.first().ok_or(LcError::EmptyIdeal)?.ring();
        let mut degrees = Vec::with_capacity(generators.len());
        for (j, f) in generators.iter().enumerate() {
            if f.ring() != ring {
                return Err(LcError::RingMismatch { ideal: ring, other: f.ring() });
            }
            if f.is_zero() {
                return Err(LcError::ZeroGenerator(j));
            }
            degrees.push(f.homogeneous_degree().ok_or(LcError::NotHomogeneousIdeal(j))?);
        }
        let mut ideal = IdealSpec { ring, generators, degrees, invariant_flag: false };
        if let Some(g) = group {
            ideal.require_invariant(g)?;
            ideal.invariant_flag = true;
        }
        Ok(ideal)
    }

    /// Comma-separated generator list, e.g. `"x^2, y^2"`.
    pub fn parse(ring: Ring, s: &str, group: Option<&FiniteMatrixGroup>) -> Result<IdealSpec, LcError> {
        let gens = s
            .split(',')
            .map(|part| ring.parse(part))
            .collect::<Result<Vec<_>, _>>()?;
        IdealSpec::new(gens, group)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn invariant_flag(&self) -> bool {
        self.invariant_flag
    }

    pub fn require_invariant(&self, group: &FiniteMatrixGroup) -> Result<(), LcError> {
        if group.ring() != self.ring {
            return Err(LcError::RingMismatch { ideal: self.ring, other: group.ring() });
        }
        match self.generators.iter().position(|f| !group.is_invariant(f)) {
            Some(index) => Err(LcError::NotInvariantIdeal { index, generator: self.generators[index].to_string() }),
            None => Ok(()),
        }
    }

    /// `f_S = Π_{j ∈ S} f_j`.
    pub fn subset_product(&self, subset: &[usize]) -> Polynomial {
        subset.iter().fold(self.ring.one(), |acc, &j| &acc * &self.generators[j])
    }

    pub fn subset_degree(&self, subset: &[usize]) -> u32 {
        subset.iter().map(|&j| self.degrees[j]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SquareMatrix;
    use crate::scalars::Field;

    #[test]
    fn ideal_validation() {
        let r = Ring::new(2, Field::Rationals);
        assert!(IdealSpec::parse(r, "x^2, x*y, y^2", None).is_ok());
        assert_eq!(IdealSpec::parse(r, "x + 1", None), Err(LcError::NotHomogeneousIdeal(0)));
        assert_eq!(IdealSpec::parse(r, "x, 0", None), Err(LcError::ZeroGenerator(1)));
        let g = FiniteMatrixGroup::close(
            &[SquareMatrix::from_i64(Field::Rationals, &[&[-1, 0], &[0, -1]]).unwrap()],
            10,
        )
        .unwrap();
        assert!(IdealSpec::parse(r, "x^2, y^2", Some(&g)).unwrap().invariant_flag());
        assert!(matches!(
            IdealSpec::parse(r, "x, y", Some(&g)),
            Err(LcError::NotInvariantIdeal { index: 0, .. })
        ));
        assert!(matches!(IdealSpec::parse(r, "x^^2", None), Err(LcError::Parse(_))));
    }
}
