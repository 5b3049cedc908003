//! Finite-dimensional chain complexes with a compatible `G`-action, their
//! fixed subcomplexes and homology.
//!
//! Chain convention: `differentials[k]` is `d_{k+1}: term_{k+1} → term_k`.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::FiniteMatrixGroup;
use crate::linalg::{CoordinateMap, Matrix, Subquotient};
use crate::scalars::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("representation has {got} matrices, group has order {order}")]
    WrongOrder { order: usize, got: usize },
    #[error("representation matrix {0} has the wrong shape")]
    Shape(usize),
    #[error("rho is not a homomorphism at elements ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("rho(identity) is not the identity")]
    IdentityNotFixed,
    #[error("d_{0} has the wrong shape")]
    DifferentialShape(usize),
    #[error("d_{0} ∘ d_{} is nonzero", .0 + 1)]
    NotAComplex(usize),
    #[error("d_{position} does not commute with the action of element {element}")]
    NotEquivariant { position: usize, element: usize },
}

/// A linear `G`-action: `rho[k]` is the matrix of group element `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GRepresentation {
    dim: usize,
    rho: Vec<Matrix>,
}

/// Homomorphism checks are exhaustive up to this order.
const EXHAUSTIVE_CHECK_ORDER: usize = 24;

impl GRepresentation {
    pub fn new(group: &FiniteMatrixGroup, dim: usize, rho: Vec<Matrix>) -> Result<Self, HomologyError> {
        if rho.len() != group.order() {
            return Err(HomologyError::WrongOrder { order: group.order(), got: rho.len() });
        }
        if let Some(k) = rho.iter().position(|m| m.rows() != dim || m.cols() != dim) {
            return Err(HomologyError::Shape(k));
        }
        let field = group.field();
        if rho[0] != Matrix::identity(field, dim) {
            return Err(HomologyError::IdentityNotFixed);
        }
        let lefts: Vec<usize> = if group.order() <= EXHAUSTIVE_CHECK_ORDER {
            (0..group.order()).collect()
        } else {
            group.generator_indices().to_vec()
        };
        for &a in &lefts {
            for b in 0..group.order() {
                if rho[a].mul(&rho[b]) != rho[group.product_index(a, b)] {
                    return Err(HomologyError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GRepresentation { dim, rho })
    }

    /// Trusted constructor for matrices already known to form a representation.
    pub(crate) fn from_parts(dim: usize, rho: Vec<Matrix>) -> Self {
        GRepresentation { dim, rho }
    }

    pub fn trivial(group: &FiniteMatrixGroup, dim: usize) -> Self {
        let id = Matrix::identity(group.field(), dim);
        GRepresentation { dim, rho: vec![id; group.order()] }
    }

    /// The defining representation `σ ↦ T_σ`.
    pub fn natural(group: &FiniteMatrixGroup) -> Self {
        let rho = group.elements().iter().map(|e| e.matrix().clone()).collect();
        GRepresentation { dim: group.n(), rho }
    }

    /// `σ ↦ det T_σ`.
    pub fn determinant(group: &FiniteMatrixGroup) -> Self {
        let rho = group
            .elements()
            .iter()
            .map(|e| Matrix::from_rows(group.field(), vec![vec![e.det().clone()]], 1))
            .collect();
        GRepresentation { dim: 1, rho }
    }

    /// Left multiplication on the basis `{e_τ}`.
    pub fn regular(group: &FiniteMatrixGroup) -> Self {
        let n = group.order();
        let field = group.field();
        let rho = (0..n)
            .map(|s| {
                let mut m = Matrix::zeros(field, n, n);
                for t in 0..n {
                    m[(group.product_index(s, t), t)] = field.one();
                }
                m
            })
            .collect();
        GRepresentation { dim: n, rho }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &[Matrix] {
        &self.rho
    }

    pub fn field(&self) -> Field {
        self.rho[0].field()
    }

    pub fn direct_sum(&self, other: &GRepresentation) -> GRepresentation {
        let field = self.field();
        let dim = self.dim + other.dim;
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(field, dim, dim);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m[(r, c)] = a[(r, c)].clone();
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m[(self.dim + r, self.dim + c)] = b[(r, c)].clone();
                    }
                }
                m
            })
            .collect();
        GRepresentation { dim, rho }
    }

    /// `P ρ P^{-1}` for an invertible change of basis `P`.
    pub fn conjugate(&self, p: &Matrix) -> GRepresentation {
        let inv = p.inverse().expect("change of basis must be invertible");
        let rho = self.rho.iter().map(|m| p.mul(m).mul(&inv)).collect();
        GRepresentation { dim: self.dim, rho }
    }

    /// The action restricted to an invariant subspace with basis columns `basis`.
    pub fn restrict(&self, basis: &Matrix) -> GRepresentation {
        let coords = CoordinateMap::new(basis);
        let rho = self
            .rho
            .iter()
            .map(|m| coords.coordinates(&m.mul(basis)).expect("subspace is not invariant"))
            .collect();
        GRepresentation { dim: basis.cols(), rho }
    }

    /// `P = (1/|G|) Σ ρ(σ)`.
    pub fn reynolds_projector(&self) -> Matrix {
        let field = self.field();
        let sum = self.rho.iter().fold(Matrix::zeros(field, self.dim, self.dim), |acc, m| acc.add(m));
        let inv = field.from_i64(self.rho.len() as i64).inv().expect("|G| invertible");
        sum.scale(&inv)
    }

    /// Basis (columns) of the fixed subspace `V^G`.
    pub fn fixed_basis(&self) -> Matrix {
        self.reynolds_projector().column_basis()
    }

    pub fn fixed_dim(&self) -> usize {
        self.reynolds_projector().rank()
    }
}

/// `(1/|G|) Σ ρ_W(σ) A ρ_V(σ)^{-1}`: an equivariant map `V → W`.
pub fn average_map(group: &FiniteMatrixGroup, source: &GRepresentation, target: &GRepresentation, a: &Matrix) -> Matrix {
    let field = group.field();
    let mut sum = Matrix::zeros(field, target.dim, source.dim);
    for s in 0..group.order() {
        let inv = group.inverse_index(s);
        sum = sum.add(&target.rho[s].mul(a).mul(&source.rho[inv]));
    }
    sum.scale(&group.inverse_order())
}

pub fn is_equivariant(source: &GRepresentation, target: &GRepresentation, map: &Matrix) -> Option<usize> {
    (0..source.rho.len()).find(|&s| target.rho[s].mul(map) != map.mul(&source.rho[s]))
}

/// A complex of finite-dimensional vector spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl ChainComplex {
    /// Shapes are checked here; `d² = 0` is checked when homology is taken.
    pub fn new(dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self, HomologyError> {
        assert!(!dims.is_empty(), "complex needs at least one term");
        if differentials.len() + 1 != dims.len() {
            return Err(HomologyError::DifferentialShape(differentials.len()));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(HomologyError::DifferentialShape(k + 1));
            }
        }
        Ok(ChainComplex { dims, differentials })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn check_complex(&self) -> Result<(), HomologyError> {
        for k in 1..self.differentials.len() {
            if !self.differentials[k - 1].mul(&self.differentials[k]).is_zero() {
                return Err(HomologyError::NotAComplex(k));
            }
        }
        Ok(())
    }

    /// Outgoing differential `d_n: C_n → C_{n-1}` (zero map for `n = 0`).
    fn outgoing(&self, field: Field, n: usize) -> Matrix {
        if n == 0 {
            Matrix::zeros(field, 0, self.dims[0])
        } else {
            self.differentials[n - 1].clone()
        }
    }

    /// Incoming differential `d_{n+1}: C_{n+1} → C_n` (zero map at the top).
    fn incoming(&self, field: Field, n: usize) -> Matrix {
        self.differentials
            .get(n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(field, self.dims[n], 0))
    }

    /// `H_n = ker d_n / im d_{n+1}` with chosen representatives.
    pub fn homology(&self, field: Field, n: usize) -> Subquotient {
        Subquotient::new(&self.outgoing(field, n).kernel(), &self.incoming(field, n))
    }
}

/// `dim H_n = dim ker d_n - rank d_{n+1}` for every `n`.
pub fn homology_dims(c: &ChainComplex) -> Result<Vec<usize>, HomologyError> {
    c.check_complex()?;
    let rank = |k: usize| c.differentials.get(k).map_or(0, Matrix::rank);
    Ok((0..c.dims.len())
        .map(|n| {
            let out_rank = if n == 0 { 0 } else { rank(n - 1) };
            c.dims[n] - out_rank - rank(n)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantComplex {
    terms: Vec<GRepresentation>,
    complex: ChainComplex,
}

impl EquivariantComplex {
    pub fn new(terms: Vec<GRepresentation>, differentials: Vec<Matrix>) -> Result<Self, HomologyError> {
        let dims = terms.iter().map(GRepresentation::dim).collect();
        let complex = ChainComplex::new(dims, differentials)?;
        complex.check_complex()?;
        Ok(EquivariantComplex { terms, complex })
    }

    pub fn terms(&self) -> &[GRepresentation] {
        &self.terms
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.terms[0].field()
    }

    pub fn check_equivariant(&self) -> Result<(), HomologyError> {
        for (k, d) in self.complex.differentials.iter().enumerate() {
            if let Some(element) = is_equivariant(&self.terms[k + 1], &self.terms[k], d) {
                return Err(HomologyError::NotEquivariant { position: k + 1, element });
            }
        }
        Ok(())
    }

    /// Matrices of the induced action on `H_n`, in the representative basis.
    pub fn homology_action(&self, n: usize) -> (Subquotient, Vec<Matrix>) {
        let h = self.complex.homology(self.field(), n);
        let action = self.terms[n]
            .rho
            .iter()
            .map(|m| h.reduce(&m.mul(h.representatives())).expect("action preserves cycles"))
            .collect();
        (h, action)
    }
}

/// `C^G` with the inclusion of each fixed term into the original term.
#[derive(Debug, Clone)]
pub struct FixedComplex {
    pub complex: ChainComplex,
    pub inclusions: Vec<Matrix>,
}

/// Terms are the images of the Reynolds projectors; differentials are the
/// restrictions, written in those bases.
pub fn fixed_subcomplex(c: &EquivariantComplex) -> Result<FixedComplex, HomologyError> {
    c.check_equivariant()?;
    let inclusions: Vec<Matrix> = c.terms.iter().map(GRepresentation::fixed_basis).collect();
    let differentials = c
        .complex
        .differentials
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let image = d.mul(&inclusions[k + 1]);
            CoordinateMap::new(&inclusions[k])
                .coordinates(&image)
                .expect("equivariant maps preserve fixed vectors")
        })
        .collect();
    let dims = inclusions.iter().map(Matrix::cols).collect();
    Ok(FixedComplex { complex: ChainComplex::new(dims, differentials)?, inclusions })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedHomologyRow {
    pub n: usize,
    /// `dim H_n(C^G)`.
    pub homology_of_fixed: usize,
    /// `dim H_n(C)^G`, from the induced action on homology.
    pub fixed_of_homology: usize,
    /// Rank of `H_n(C^G) → H_n(C)`.
    pub comparison_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedHomologyReport {
    pub rows: Vec<FixedHomologyRow>,
    pub holds: bool,
}

/// Computes `dim H_n(C^G)` and `dim H_n(C)^G` by independent routes and
/// compares them; also records the rank of the comparison map, which is
/// injective when the two agree.
pub fn check_fixed_commutes_with_homology(c: &EquivariantComplex) -> Result<FixedHomologyReport, HomologyError> {
    let field = c.field();
    let fixed = fixed_subcomplex(c)?;
    let fixed_dims = homology_dims(&fixed.complex)?;
    let mut rows = Vec::new();
    for (n, &homology_of_fixed) in fixed_dims.iter().enumerate().take(c.terms.len()) {
        let (h, action) = c.homology_action(n);
        let fixed_of_homology = GRepresentation::from_parts(h.dim(), action).fixed_dim();
        let hf = fixed.complex.homology(field, n);
        let lifted = fixed.inclusions[n].mul(hf.representatives());
        let comparison_rank = h.reduce(&lifted).expect("fixed cycles are cycles").rank();
        rows.push(FixedHomologyRow { n, homology_of_fixed, fixed_of_homology, comparison_rank });
    }
    let holds = rows
        .iter()
        .all(|r| r.homology_of_fixed == r.fixed_of_homology && r.comparison_rank == r.homology_of_fixed);
    Ok(FixedHomologyReport { rows, holds })
}

/// `0 → M1 → M2 → M3 → 0` with `u1` the inclusion of `ker u2` and `u2`
/// onto its image.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub m1: GRepresentation,
    pub m2: GRepresentation,
    pub m3: GRepresentation,
    pub u1: Matrix,
    pub u2: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub fixed_dims: [usize; 3],
    pub rank_u1: usize,
    pub rank_u2: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

/// Checks that `0 → M1^G → M2^G → M3^G → 0` is exact.
pub fn check_fixed_exactness(ses: &ShortExactSequence) -> ExactnessReport {
    let (b1, b2, b3) = (ses.m1.fixed_basis(), ses.m2.fixed_basis(), ses.m3.fixed_basis());
    let fixed_u1 = CoordinateMap::new(&b2).coordinates(&ses.u1.mul(&b1)).expect("u1 equivariant");
    let fixed_u2 = CoordinateMap::new(&b3).coordinates(&ses.u2.mul(&b2)).expect("u2 equivariant");
    let (rank_u1, rank_u2) = (fixed_u1.rank(), fixed_u2.rank());
    let composite_zero = fixed_u2.mul(&fixed_u1).is_zero();
    let fixed_dims = [b1.cols(), b2.cols(), b3.cols()];
    let exact = composite_zero
        && rank_u1 == fixed_dims[0]
        && rank_u2 == fixed_dims[2]
        && fixed_dims[1] - rank_u2 == rank_u1
        && fixed_dims[1] == fixed_dims[0] + fixed_dims[2];
    ExactnessReport { fixed_dims, rank_u1, rank_u2, composite_zero, exact }
}

/// Random test instances. Representations are sums of trivial, determinant,
/// natural and regular blocks, conjugated by a random unimodular matrix.
pub mod random {
    use super::*;

    fn small(field: Field, rng: &mut impl Rng) -> Scalar {
        field.from_i64(rng.gen_range(-2..=2))
    }

    pub fn matrix(field: Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = small(field, rng);
            }
        }
        m
    }

    /// Product of a few elementary matrices; determinant 1.
    pub fn unimodular(field: Field, n: usize, rng: &mut impl Rng) -> Matrix {
        let mut m = Matrix::identity(field, n);
        if n < 2 {
            return m;
        }
        for _ in 0..n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let mut e = Matrix::identity(field, n);
            e[(i, j)] = small(field, rng);
            m = e.mul(&m);
        }
        m
    }

    pub fn representation(group: &FiniteMatrixGroup, max_dim: usize, rng: &mut impl Rng) -> GRepresentation {
        let target = rng.gen_range(1..=max_dim);
        let mut rep: Option<GRepresentation> = None;
        while rep.as_ref().map_or(0, GRepresentation::dim) < target {
            let room = target - rep.as_ref().map_or(0, GRepresentation::dim);
            let block = match rng.gen_range(0..4) {
                0 if group.order() <= room => GRepresentation::regular(group),
                1 if group.n() <= room => GRepresentation::natural(group),
                2 => GRepresentation::determinant(group),
                _ => GRepresentation::trivial(group, 1),
            };
            rep = Some(match rep {
                None => block,
                Some(r) => r.direct_sum(&block),
            });
        }
        let rep = rep.expect("non-empty");
        let p = unimodular(group.field(), rep.dim(), rng);
        rep.conjugate(&p)
    }

    pub fn equivariant_map(
        group: &FiniteMatrixGroup,
        source: &GRepresentation,
        target: &GRepresentation,
        rng: &mut impl Rng,
    ) -> Matrix {
        let a = matrix(group.field(), target.dim(), source.dim(), rng);
        average_map(group, source, target, &a)
    }

    /// Equivariant projection onto an invariant subspace with basis `basis`.
    pub fn equivariant_projection(group: &FiniteMatrixGroup, rep: &GRepresentation, basis: &Matrix) -> Matrix {
        let field = group.field();
        if basis.cols() == 0 {
            return Matrix::zeros(field, rep.dim(), rep.dim());
        }
        // Any projection K L with L K = I, then averaged.
        let p0 = basis.mul(&CoordinateMap::new(basis).left_inverse());
        average_map(group, rep, rep, &p0)
    }

    /// A complex `V_L → ... → V_0` built from random equivariant maps, each
    /// composed with an equivariant projection onto the kernel of the next.
    pub fn equivariant_complex(
        group: &FiniteMatrixGroup,
        length: usize,
        max_dim: usize,
        rng: &mut impl Rng,
    ) -> EquivariantComplex {
        let terms: Vec<GRepresentation> = (0..=length).map(|_| representation(group, max_dim, rng)).collect();
        let mut differentials: Vec<Matrix> = Vec::new();
        for k in 1..=length {
            let raw = equivariant_map(group, &terms[k], &terms[k - 1], rng);
            let d = match differentials.last() {
                None => raw,
                Some(prev) => equivariant_projection(group, &terms[k - 1], &prev.kernel()).mul(&raw),
            };
            differentials.push(d);
        }
        EquivariantComplex::new(terms, differentials).expect("d² = 0 by construction")
    }

    pub fn short_exact_sequence(group: &FiniteMatrixGroup, max_dim: usize, rng: &mut impl Rng) -> ShortExactSequence {
        let m2 = representation(group, max_dim, rng);
        let n = representation(group, max_dim, rng);
        let u = equivariant_map(group, &m2, &n, rng);
        let kernel = u.kernel();
        let image = u.column_basis();
        let m1 = m2.restrict(&kernel);
        let m3 = n.restrict(&image);
        let u2 = CoordinateMap::new(&image).coordinates(&u).expect("image basis spans");
        ShortExactSequence { m1, m2, m3, u1: kernel, u2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{SquareMatrix, DEFAULT_MAX_ORDER};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rationals;

    fn c2() -> FiniteMatrixGroup {
        FiniteMatrixGroup::close(&[SquareMatrix::from_i64(Q, &[&[0, 1], &[1, 0]]).unwrap()], DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn projector_examples() {
        let g = c2();
        let triv = GRepresentation::trivial(&g, 2);
        assert_eq!(triv.reynolds_projector(), Matrix::identity(Q, 2));
        let sign = GRepresentation::determinant(&g);
        assert!(sign.reynolds_projector().is_zero());
        let reg = GRepresentation::regular(&g);
        let p = reg.reynolds_projector();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.mul(&p), p);
        let fixed = reg.fixed_basis();
        assert_eq!(fixed.column(0)[0], fixed.column(0)[1]);
    }

    #[test]
    fn representation_validation() {
        let g = c2();
        let bad = vec![Matrix::identity(Q, 1), Matrix::from_i64(Q, &[&[2]])];
        assert!(matches!(GRepresentation::new(&g, 1, bad), Err(HomologyError::NotHomomorphism(..))));
        let good = vec![Matrix::identity(Q, 1), Matrix::from_i64(Q, &[&[-1]])];
        assert!(GRepresentation::new(&g, 1, good).is_ok());
        assert!(matches!(
            GRepresentation::new(&g, 1, vec![Matrix::identity(Q, 1)]),
            Err(HomologyError::WrongOrder { .. })
        ));
    }

    #[test]
    fn homology_examples() {
        let single = ChainComplex::new(vec![3], vec![]).unwrap();
        assert_eq!(homology_dims(&single).unwrap(), vec![3]);
        let iso = ChainComplex::new(vec![2, 2], vec![Matrix::identity(Q, 2)]).unwrap();
        assert_eq!(homology_dims(&iso).unwrap(), vec![0, 0]);
        let bad = ChainComplex::new(vec![1, 1, 1], vec![Matrix::identity(Q, 1), Matrix::identity(Q, 1)]).unwrap();
        assert_eq!(homology_dims(&bad), Err(HomologyError::NotAComplex(1)));
    }

    #[test]
    fn koszul_degree_zero_slice() {
        // Koszul complex of (x, y) on K[x,y] in internal degree 2:
        // R_0 → R_1^2 → R_2, with homology concentrated at the right end.
        let r = crate::polyring::Ring::new(2, Q);
        let (p1, p2) = (r.graded_piece(1), r.graded_piece(2));
        let (x, y) = (r.var(0), r.var(1));
        // d_2: R_0 → R_1 ⊕ R_1, 1 ↦ (-y, x)
        let mut d2 = Matrix::zeros(Q, 4, 1);
        let neg_y = p1.coords(&(-&y)).unwrap();
        let xc = p1.coords(&x).unwrap();
        for k in 0..2 {
            d2[(k, 0)] = neg_y[k].clone();
            d2[(2 + k, 0)] = xc[k].clone();
        }
        // d_1: R_1 ⊕ R_1 → R_2, (a, b) ↦ a x + b y
        let mut d1 = Matrix::zeros(Q, 3, 4);
        for (k, m) in p1.monomials().iter().enumerate() {
            let a = p2.coords(&x.mul_monomial(m)).unwrap();
            let b = p2.coords(&y.mul_monomial(m)).unwrap();
            for row in 0..3 {
                d1[(row, k)] = a[row].clone();
                d1[(row, 2 + k)] = b[row].clone();
            }
        }
        let c = ChainComplex::new(vec![3, 4, 1], vec![d1, d2]).unwrap();
        // Hand count: rank d_1 = 3, rank d_2 = 1, so H = (0, 0, 0).
        assert_eq!(homology_dims(&c).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn fixed_subcomplex_examples() {
        let g = c2();
        let reg = GRepresentation::regular(&g);
        // d = [[1,1],[1,1]] commutes with the swap and has rank 1.
        let d = Matrix::from_i64(Q, &[&[1, 1], &[1, 1]]);
        let c = EquivariantComplex::new(vec![reg.clone(), reg.clone()], vec![d]).unwrap();
        let fixed = fixed_subcomplex(&c).unwrap();
        assert_eq!(fixed.complex.dims(), &[1, 1]);
        let report = check_fixed_commutes_with_homology(&c).unwrap();
        assert!(report.holds);
        let bad = Matrix::from_i64(Q, &[&[1, 0], &[0, 0]]);
        let c = EquivariantComplex::new(vec![reg.clone(), reg], vec![bad]).unwrap();
        assert!(matches!(fixed_subcomplex(&c), Err(HomologyError::NotEquivariant { .. })));
    }

    #[test]
    fn zero_differentials_give_fixed_terms() {
        let g = c2();
        let reg = GRepresentation::regular(&g);
        let nat = GRepresentation::natural(&g);
        let c = EquivariantComplex::new(vec![reg.clone(), nat], vec![Matrix::zeros(Q, 2, 2)]).unwrap();
        let report = check_fixed_commutes_with_homology(&c).unwrap();
        assert!(report.holds);
        assert_eq!(report.rows[0].homology_of_fixed, reg.fixed_dim());
    }

    #[test]
    fn random_complexes_commute_with_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = FiniteMatrixGroup::close(&[SquareMatrix::from_i64(Q, &[&[0, -1], &[1, 0]]).unwrap()], 100).unwrap();
        for _ in 0..10 {
            let c = random::equivariant_complex(&g, 3, 6, &mut rng);
            assert!(check_fixed_commutes_with_homology(&c).unwrap().holds);
            let ses = random::short_exact_sequence(&g, 6, &mut rng);
            let rep = check_fixed_exactness(&ses);
            assert!(rep.exact, "{rep:?}");
            assert!(ses.m2.fixed_dim() <= ses.m2.dim());
        }
    }
}
