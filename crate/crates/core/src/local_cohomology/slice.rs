use std::collections::HashMap;

use crate::group::FiniteMatrixGroup;
use crate::linalg::Matrix;
use crate::polyring::{GradedPiece, Polynomial};
use crate::scalars::{Field, Scalar};

use super::{IdealSpec, LcError};

/// One summand `R_{d + t·deg f_S} · f_S^{-t}` of a Čech term.
#[derive(Debug, Clone)]
pub struct Block {
    pub subset: Vec<usize>,
    /// Polynomial degree of the numerators, `None` when negative.
    pub numerator_degree: Option<u32>,
    pub offset: usize,
    piece: Option<GradedPiece>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.piece.as_ref().map_or(0, GradedPiece::dim)
    }

    pub fn piece(&self) -> Option<&GradedPiece> {
        self.piece.as_ref()
    }
}

/// Basis of Čech position `k` at level `t` in internal degree `d`: blocks
/// in lexicographic subset order, monomials in the ring's basis order.
#[derive(Debug, Clone)]
pub struct TermLayout {
    pub field: Field,
    pub position: i64,
    pub level: u32,
    pub degree: i64,
    pub blocks: Vec<Block>,
    pub dim: usize,
}

impl TermLayout {
    /// Positions outside `0..=s` give the zero module.
    pub fn new(ideal: &IdealSpec, position: i64, degree: i64, level: u32) -> TermLayout {
        let s = ideal.num_generators() as i64;
        let mut blocks = Vec::new();
        let mut offset = 0;
        if (0..=s).contains(&position) {
            for subset in subsets(s as usize, position as usize) {
                let numerator = degree + i64::from(level) * i64::from(ideal.subset_degree(&subset));
                let numerator_degree = u32::try_from(numerator).ok();
                let piece = numerator_degree.map(|e| ideal.ring().graded_piece(e));
                let block = Block { subset, numerator_degree, offset, piece };
                offset += block.dim();
                blocks.push(block);
            }
        }
        TermLayout { field: ideal.ring().field, position, level, degree, blocks, dim: offset }
    }

    fn block_index(&self, subset: &[usize]) -> usize {
        self.blocks
            .binary_search_by(|b| b.subset.as_slice().cmp(subset))
            .expect("subset present in layout")
    }

    /// Matrix of the map sending `m / f_S^t` to `Σ (m·q) / f_T^{t'}` over
    /// every `(T, q)` returned by `images(S)`.
    fn block_map<F>(&self, target: &TermLayout, mut images: F) -> Matrix
    where
        F: FnMut(&[usize]) -> Vec<(Vec<usize>, Polynomial)>,
    {
        let mut out = Matrix::zeros(self.field, target.dim, self.dim);
        for block in &self.blocks {
            let Some(src) = &block.piece else { continue };
            for (subset, q) in images(&block.subset) {
                let tb = &target.blocks[target.block_index(&subset)];
                let Some(tgt) = &tb.piece else { continue };
                for (col, m) in src.monomials().iter().enumerate() {
                    for (mono, c) in q.mul_monomial(m).terms() {
                        let row = tgt.index_of(mono).expect("product lands in target degree");
                        let cell = &mut out[(tb.offset + row, block.offset + col)];
                        *cell = &*cell + c;
                    }
                }
            }
        }
        out
    }

    /// Splits a coordinate vector into its nonzero numerators per subset.
    pub fn numerators(&self, column: &[Scalar]) -> Vec<(Vec<usize>, Polynomial)> {
        self.blocks
            .iter()
            .filter_map(|b| {
                let piece = b.piece.as_ref()?;
                let p = piece.polynomial(&column[b.offset..b.offset + piece.dim()]).expect("block length");
                (!p.is_zero()).then(|| (b.subset.clone(), p))
            })
            .collect()
    }

    /// Block-diagonal action of every group element; generators of the
    /// ideal must be invariant for this to commute with the differentials.
    pub fn action(&self, group: &FiniteMatrixGroup, cache: &mut ActionCache) -> Vec<Matrix> {
        let mut out = vec![Matrix::zeros(self.field, self.dim, self.dim); group.order()];
        for block in &self.blocks {
            let Some(deg) = block.numerator_degree else { continue };
            if block.dim() == 0 {
                continue;
            }
            let mats = cache.degree(group, deg);
            for (m, a) in out.iter_mut().zip(mats) {
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m[(block.offset + r, block.offset + c)] = a[(r, c)].clone();
                    }
                }
            }
        }
        out
    }
}

/// Degree-wise action matrices, computed once per degree.
#[derive(Debug, Default)]
pub struct ActionCache {
    by_degree: HashMap<u32, Vec<Matrix>>,
}

impl ActionCache {
    fn degree(&mut self, group: &FiniteMatrixGroup, d: u32) -> &[Matrix] {
        self.by_degree.entry(d).or_insert_with(|| group.degree_action(d))
    }
}

/// The Čech differential from position `k` to `k + 1` at a common level:
/// `m / f_S^t ↦ Σ_{j ∉ S} (-1)^{#{l ∈ S : l < j}} (m f_j^t) / f_{S ∪ j}^t`.
pub fn differential(ideal: &IdealSpec, source: &TermLayout, target: &TermLayout) -> Matrix {
    debug_assert_eq!(source.level, target.level);
    let powers: Vec<Polynomial> = ideal.generators().iter().map(|f| f.pow(source.level)).collect();
    source.block_map(target, |subset| {
        (0..ideal.num_generators())
            .filter(|j| !subset.contains(j))
            .map(|j| {
                let before = subset.iter().filter(|&&l| l < j).count();
                let mut union = subset.to_vec();
                union.push(j);
                union.sort_unstable();
                let q = if before % 2 == 0 { powers[j].clone() } else { -&powers[j] };
                (union, q)
            })
            .collect()
    })
}

/// Level embedding `m / f_S^t ↦ (m f_S) / f_S^{t+1}`.
pub fn transition(ideal: &IdealSpec, source: &TermLayout, target: &TermLayout) -> Matrix {
    debug_assert_eq!(source.level + 1, target.level);
    source.block_map(target, |subset| vec![(subset.to_vec(), ideal.subset_product(subset))])
}

/// Multiplication by a homogeneous `g`, keeping the level.
pub fn multiplication(source: &TermLayout, target: &TermLayout, g: &Polynomial) -> Matrix {
    source.block_map(target, |subset| vec![(subset.to_vec(), g.clone())])
}

/// Positions `i - 1`, `i`, `i + 1` of the level-`t` Čech complex in degree `d`.
#[derive(Debug, Clone)]
pub struct CechLevelSlice {
    pub i: usize,
    pub d: i64,
    pub t: u32,
    pub before: TermLayout,
    pub middle: TermLayout,
    pub after: TermLayout,
    /// `C^{i-1} → C^i`.
    pub d_in: Matrix,
    /// `C^i → C^{i+1}`.
    pub d_out: Matrix,
}

pub fn cech_slice(ideal: &IdealSpec, i: usize, d: i64, t: u32) -> Result<CechLevelSlice, LcError> {
    let s = ideal.num_generators();
    if i > s {
        return Err(LcError::IndexOutOfRange { i, s });
    }
    if t == 0 {
        return Err(LcError::InvalidParams("level must be at least 1".into()));
    }
    let k = i as i64;
    let before = TermLayout::new(ideal, k - 1, d, t);
    let middle = TermLayout::new(ideal, k, d, t);
    let after = TermLayout::new(ideal, k + 1, d, t);
    let d_in = differential(ideal, &before, &middle);
    let d_out = differential(ideal, &middle, &after);
    Ok(CechLevelSlice { i, d, t, before, middle, after, d_in, d_out })
}

/// All `k`-subsets of `0..s` in lexicographic order.
pub(crate) fn subsets(s: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..s {
            if s - j < k - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, s, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= s {
        rec(0, s, k, &mut Vec::new(), &mut out);
    }
    out
}
