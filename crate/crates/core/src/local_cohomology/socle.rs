use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::FiniteMatrixGroup;
use crate::linalg::Matrix;
use crate::polyring::Polynomial;

use super::piece::{lc_piece, multiplication_map, CohomologyPiece, LevelParams};
use super::{IdealSpec, LcError};

#[derive(Debug, Clone)]
pub struct SocleRequest {
    pub i: usize,
    pub deg_from: i64,
    pub deg_to: i64,
    /// Homogeneous generators of the maximal ideal acting on the module.
    pub m_generators: Vec<Polynomial>,
    /// Work in the invariant part, with invariant `m_generators`.
    pub invariant_part: bool,
    pub params: LevelParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleRow {
    pub degree: i64,
    pub piece_dim: usize,
    /// Dimension of the module in this degree (the invariant part if requested).
    pub module_dim: usize,
    pub socle_dim: usize,
    pub level_reached: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleTable {
    pub rows: Vec<SocleRow>,
    pub total: usize,
}

/// `[-(n · max deg f_j + 4), 0]`.
pub fn default_socle_window(ideal: &IdealSpec) -> (i64, i64) {
    let n = ideal.ring().nvars as i64;
    let maxdeg = i64::from(ideal.degrees().iter().copied().max().unwrap_or(1));
    (-(n * maxdeg + 4), 0)
}

/// Socle dimension per degree: vectors of the (invariant) piece killed by
/// every generator of `m`.
pub fn socle_dims(
    ideal: &IdealSpec,
    group: Option<&FiniteMatrixGroup>,
    req: &SocleRequest,
) -> Result<SocleTable, LcError> {
    if req.deg_from > req.deg_to {
        return Err(LcError::InvalidParams(format!("empty degree range {}..{}", req.deg_from, req.deg_to)));
    }
    let group = match (req.invariant_part, group) {
        (true, None) => return Err(LcError::MissingGroup),
        (true, Some(g)) => Some(g),
        (false, _) => None,
    };
    let mut shifts = Vec::with_capacity(req.m_generators.len());
    for g in &req.m_generators {
        if g.ring() != ideal.ring() {
            return Err(LcError::RingMismatch { ideal: ideal.ring(), other: g.ring() });
        }
        match g.homogeneous_degree() {
            Some(e) if e > 0 && !g.is_zero() => shifts.push(i64::from(e)),
            _ => {
                return Err(LcError::InvalidParams(format!(
                    "maximal ideal generator {g} must be homogeneous of positive degree"
                )))
            }
        }
        if let Some(grp) = group {
            if !grp.is_invariant(g) {
                return Err(LcError::NotInvariant { what: "maximal ideal generator", poly: g.to_string() });
            }
        }
    }
    let mut degrees: Vec<i64> = (req.deg_from..=req.deg_to)
        .flat_map(|d| std::iter::once(d).chain(shifts.iter().map(move |e| d + e)))
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let pieces: BTreeMap<i64, CohomologyPiece> = degrees
        .par_iter()
        .map(|&d| lc_piece(ideal, group, req.i, d, req.params).map(|p| (d, p)))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for d in req.deg_from..=req.deg_to {
        let piece = &pieces[&d];
        let module = match &piece.g_action {
            Some(_) => piece.invariant_basis().expect("group action present"),
            None => Matrix::identity(ideal.ring().field, piece.stable_dim),
        };
        let socle_dim = if module.cols() == 0 {
            0
        } else {
            let mut stacked: Option<Matrix> = None;
            for (g, e) in req.m_generators.iter().zip(&shifts) {
                let m = multiplication_map(ideal, piece, &pieces[&(d + e)], g)?.mul(&module);
                stacked = Some(match stacked {
                    Some(s) => s.vstack(&m),
                    None => m,
                });
            }
            stacked.map_or(module.cols(), |s| s.kernel().cols())
        };
        rows.push(SocleRow {
            degree: d,
            piece_dim: piece.stable_dim,
            module_dim: module.cols(),
            socle_dim,
            level_reached: piece.level_reached,
        });
    }
    let (first, last) = (&rows[0], rows.last().expect("nonempty range"));
    if last.module_dim != 0 {
        return Err(LcError::RangeTruncatesModule(last.degree));
    }
    if first.socle_dim != 0 {
        return Err(LcError::RangeTruncatesModule(first.degree));
    }
    let total = rows.iter().map(|r| r.socle_dim).sum();
    Ok(SocleTable { rows, total })
}
