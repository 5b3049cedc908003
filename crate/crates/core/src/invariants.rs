//! Graded pieces and generators of the invariant ring `R^G`.
//!
//! Everything stays inside `R`: `(R^G)_d` is the column space of the
//! averaging projector on `R_d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::FiniteMatrixGroup;
use crate::linalg::Matrix;
use crate::polyring::Polynomial;
use crate::scalars::Scalar;

/// A basis of `(R^G)_d` in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPiece {
    pub degree: u32,
    pub basis: Vec<Polynomial>,
}

impl InvariantPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis coordinates as columns.
    pub fn coordinate_matrix(&self, group: &FiniteMatrixGroup) -> Matrix {
        let ring = group.ring();
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.coords(self.degree).expect("homogeneous")).collect();
        Matrix::from_columns(ring.field, ring.graded_dim(self.degree), &cols)
    }
}

/// Row-reduces the averaged monomials of degree `d`.
pub fn invariant_basis(group: &FiniteMatrixGroup, d: u32) -> InvariantPiece {
    let ring = group.ring();
    let images = group.reynolds_matrix(d).transpose();
    let echelon = images.rref();
    let basis = (0..echelon.pivots.len())
        .map(|r| ring.from_coords(d, echelon.reduced.row(r)).expect("row length"))
        .collect();
    InvariantPiece { degree: d, basis }
}

/// `(dim (R^G)_d)` for `d = 0..=max_deg`.
pub fn hilbert_series(group: &FiniteMatrixGroup, max_deg: u32) -> Vec<u64> {
    (0..=max_deg)
        .into_par_iter()
        .map(|d| group.reynolds_matrix(d).rank() as u64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub degree: u32,
    pub polynomial: String,
}

/// Minimal homogeneous generators of `R^G` up to a degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPresentation {
    pub generators: Vec<(u32, Polynomial)>,
    pub degree_bound: u32,
    pub hilbert_series: Vec<u64>,
    /// `H(t) · Π_g (1 - t^{deg g})` truncated at `degree_bound`.
    pub hilbert_numerator: Vec<i64>,
}

impl InvariantPresentation {
    pub fn generator_strings(&self) -> Vec<Generator> {
        self.generators
            .iter()
            .map(|(d, p)| Generator { degree: *d, polynomial: p.to_string() })
            .collect()
    }
}

/// Degree by degree, new generators in degree `d` are echelon basis vectors
/// of `(R^G)_d` that are not in the span of products of earlier generators.
pub fn minimal_generators(group: &FiniteMatrixGroup, max_deg: u32) -> InvariantPresentation {
    let pieces: Vec<InvariantPiece> = (0..=max_deg).into_par_iter().map(|d| invariant_basis(group, d)).collect();
    minimal_generators_from_pieces(group, &pieces)
}

/// As [`minimal_generators`], from precomputed pieces of degrees `0..=D`.
pub fn minimal_generators_from_pieces(group: &FiniteMatrixGroup, pieces: &[InvariantPiece]) -> InvariantPresentation {
    let ring = group.ring();
    assert!(!pieces.is_empty() && pieces.iter().enumerate().all(|(d, p)| p.degree as usize == d));
    let max_deg = pieces.len() as u32 - 1;
    let mut generators: Vec<(u32, Polynomial)> = Vec::new();
    for d in 1..=max_deg {
        let dim = ring.graded_dim(d);
        // By induction (R^G)_e for e < d is spanned by products of the
        // generators found so far, so g * (R^G)_{d - deg g} spans the
        // decomposable part of degree d.
        let mut span: Vec<Vec<Scalar>> = Vec::new();
        for (e, g) in &generators {
            if *e > d {
                continue;
            }
            for b in &pieces[(d - e) as usize].basis {
                span.push((g * b).coords(d).expect("product degree"));
            }
        }
        let mut current = Matrix::from_columns(ring.field, dim, &span);
        let mut rank = current.rank();
        for b in &pieces[d as usize].basis {
            let col = Matrix::from_columns(ring.field, dim, &[b.coords(d).expect("homogeneous")]);
            let extended = current.hstack(&col);
            let r = extended.rank();
            if r > rank {
                generators.push((d, b.clone()));
                current = extended;
                rank = r;
            }
        }
    }
    let hilbert_series: Vec<u64> = pieces.iter().map(|p| p.dim() as u64).collect();
    let hilbert_numerator = truncated_numerator(&hilbert_series, generators.iter().map(|(d, _)| *d));
    InvariantPresentation { generators, degree_bound: max_deg, hilbert_series, hilbert_numerator }
}

fn truncated_numerator(series: &[u64], degrees: impl Iterator<Item = u32>) -> Vec<i64> {
    let mut num: Vec<i64> = series.iter().map(|&v| v as i64).collect();
    for e in degrees {
        let e = e as usize;
        for k in (e..num.len()).rev() {
            num[k] -= num[k - e];
        }
    }
    num
}
