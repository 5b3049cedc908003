//! Finite matrix groups `G ⊆ GL_n(K)` and their linear action on
//! `K[x1..xn]`.
//!
//! Convention: `σ` acts by the ring automorphism `x_j ↦ Σ_i T_σ[i][j] x_i`,
//! so column `j` of `T_σ` is the image of `x_j`. With this choice
//! `act(στ) = act(σ) ∘ act(τ)` for the ordinary matrix product.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyring::{Polynomial, Ring};
use crate::scalars::{Field, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("expected a {expected}x{expected} matrix over {field}")]
    Shape { expected: usize, field: Field },
    #[error("group closure exceeds {0} elements; the group is infinite or the bound is too small")]
    NotFiniteWithinBound(usize),
    #[error("no generators given")]
    NoGenerators,
    #[error("element list is not a group closure")]
    NotClosed,
    #[error("field mismatch: group over {group}, polynomial over {other}")]
    FieldMismatch { group: Field, other: Field },
    #[error("Molien series is only available over Q, not {0}")]
    UnsupportedField(Field),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// An invertible `n x n` matrix with cached determinant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    matrix: Matrix,
    det: Scalar,
}

impl SquareMatrix {
    pub fn new(matrix: Matrix) -> Result<SquareMatrix, GroupError> {
        if !matrix.is_square() {
            return Err(GroupError::Shape { expected: matrix.rows(), field: matrix.field() });
        }
        let det = matrix.determinant();
        if det.is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(SquareMatrix { matrix, det })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Result<SquareMatrix, GroupError> {
        SquareMatrix::new(Matrix::from_i64(field, rows))
    }

    pub fn identity(field: Field, n: usize) -> SquareMatrix {
        SquareMatrix { matrix: Matrix::identity(field, n), det: field.one() }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det(&self) -> &Scalar {
        &self.det
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        SquareMatrix { matrix: self.matrix.mul(&other.matrix), det: &self.det * &other.det }
    }

    pub fn inverse(&self) -> SquareMatrix {
        let matrix = self.matrix.inverse().expect("invertible by construction");
        SquareMatrix { matrix, det: self.det.inv().expect("nonzero determinant") }
    }

    fn key(&self) -> &[Scalar] {
        self.matrix.entries()
    }
}

/// Images of the variables under `σ`, with a cache of their powers.
pub struct Substitution {
    ring: Ring,
    images: Vec<Polynomial>,
    powers: HashMap<(usize, u32), Polynomial>,
}

impl Substitution {
    pub fn new(ring: Ring, sigma: &SquareMatrix) -> Result<Substitution, GroupError> {
        if sigma.field() != ring.field {
            return Err(GroupError::FieldMismatch { group: sigma.field(), other: ring.field });
        }
        if sigma.n() != ring.nvars {
            return Err(GroupError::Shape { expected: ring.nvars, field: ring.field });
        }
        let images = (0..ring.nvars)
            .map(|j| {
                (0..ring.nvars).fold(ring.zero(), |acc, i| &acc + &ring.var(i).scale(sigma.entry(i, j)))
            })
            .collect();
        Ok(Substitution { ring, images, powers: HashMap::new() })
    }

    fn power(&mut self, j: usize, e: u32) -> Polynomial {
        if e == 0 {
            return self.ring.one();
        }
        if let Some(p) = self.powers.get(&(j, e)) {
            return p.clone();
        }
        let p = &self.power(j, e - 1) * &self.images[j];
        self.powers.insert((j, e), p.clone());
        p
    }

    pub fn apply(&mut self, f: &Polynomial) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in f.terms() {
            let mut t = self.ring.constant(c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &self.power(j, e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Matrix of the action on the degree-`d` piece, in monomial-basis
    /// coordinates (columns are images of basis monomials).
    pub fn degree_matrix(&mut self, d: u32) -> Matrix {
        let piece = self.ring.graded_piece(d);
        let cols: Vec<Vec<Scalar>> = piece
            .monomials()
            .iter()
            .map(|m| {
                let img = self.apply(&self.ring.term(m.clone(), self.ring.field.one()));
                piece.coords(&img).expect("linear action preserves degree")
            })
            .collect();
        Matrix::from_columns(self.ring.field, piece.dim(), &cols)
    }
}

/// `σ · f` under the column convention.
pub fn act(sigma: &SquareMatrix, f: &Polynomial) -> Result<Polynomial, GroupError> {
    Ok(Substitution::new(f.ring(), sigma)?.apply(f))
}

/// A finite subgroup of `GL_n(K)`, listed with the identity first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    field: Field,
    n: usize,
    elements: Vec<SquareMatrix>,
    generator_indices: Vec<usize>,
    index: HashMap<Vec<Scalar>, usize>,
}

pub const DEFAULT_MAX_ORDER: usize = 10_000;

impl FiniteMatrixGroup {
    /// Closure of `generators` under multiplication, breadth first from the
    /// identity; each new layer is sorted by entry list before it is appended.
    pub fn close(generators: &[SquareMatrix], max_order: usize) -> Result<FiniteMatrixGroup, GroupError> {
        let first = generators.first().ok_or(GroupError::NoGenerators)?;
        let (field, n) = (first.field(), first.n());
        if generators.iter().any(|g| g.field() != field || g.n() != n) {
            return Err(GroupError::Shape { expected: n, field });
        }
        let identity = SquareMatrix::identity(field, n);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
        index.insert(identity.key().to_vec(), 0);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut fresh: BTreeSet<Vec<Scalar>> = BTreeSet::new();
            let mut found: HashMap<Vec<Scalar>, SquareMatrix> = HashMap::new();
            for &h in &layer {
                for g in generators {
                    let p = g.mul(&elements[h]);
                    if !index.contains_key(p.key()) && fresh.insert(p.key().to_vec()) {
                        found.insert(p.key().to_vec(), p);
                    }
                }
            }
            if elements.len() + fresh.len() > max_order.max(1) {
                return Err(GroupError::NotFiniteWithinBound(max_order));
            }
            layer.clear();
            for key in fresh {
                let e = found.remove(&key).expect("recorded");
                index.insert(key, elements.len());
                layer.push(elements.len());
                elements.push(e);
            }
        }
        field.check_group_order_invertible(elements.len() as u64)?;
        let generator_indices = generators.iter().map(|g| index[g.key()]).collect();
        Ok(FiniteMatrixGroup { field, n, elements, generator_indices, index })
    }

    /// Rebuilds a group from a stored element list (identity first). The list
    /// must be closed under left multiplication by the generators.
    pub fn from_elements(elements: Vec<SquareMatrix>, generator_indices: Vec<usize>) -> Result<FiniteMatrixGroup, GroupError> {
        let first = elements.first().ok_or(GroupError::NoGenerators)?;
        let (field, n) = (first.field(), first.n());
        if elements.iter().any(|g| g.field() != field || g.n() != n) {
            return Err(GroupError::Shape { expected: n, field });
        }
        if *first != SquareMatrix::identity(field, n) || generator_indices.iter().any(|&g| g >= elements.len()) {
            return Err(GroupError::NotClosed);
        }
        let index: HashMap<Vec<Scalar>, usize> =
            elements.iter().enumerate().map(|(k, e)| (e.key().to_vec(), k)).collect();
        if index.len() != elements.len() {
            return Err(GroupError::NotClosed);
        }
        for &g in &generator_indices {
            if elements.iter().any(|e| !index.contains_key(elements[g].mul(e).key())) {
                return Err(GroupError::NotClosed);
            }
        }
        field.check_group_order_invertible(elements.len() as u64)?;
        Ok(FiniteMatrixGroup { field, n, elements, generator_indices, index })
    }

    /// `{I}` in dimension `n`.
    pub fn trivial(field: Field, n: usize) -> FiniteMatrixGroup {
        FiniteMatrixGroup::close(&[SquareMatrix::identity(field, n)], 1).expect("trivial group")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.n, self.field)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SquareMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &SquareMatrix {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn index_of(&self, m: &SquareMatrix) -> Option<usize> {
        self.index.get(m.key()).copied()
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn product_index(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].mul(&self.elements[b])).expect("closed under products")
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        self.index_of(&self.elements[a].inverse()).expect("closed under inverses")
    }

    /// `1 / |G|` in the base field.
    pub fn inverse_order(&self) -> Scalar {
        self.field.from_i64(self.order() as i64).inv().expect("|G| invertible by construction")
    }

    /// True iff every element has determinant 1 (Watanabe's sufficient
    /// condition for `R^G` to be Gorenstein).
    pub fn is_in_sl(&self) -> bool {
        self.elements.iter().all(|e| e.det().is_one())
    }

    pub fn substitutions(&self) -> Vec<Substitution> {
        self.elements
            .iter()
            .map(|e| Substitution::new(self.ring(), e).expect("group ring"))
            .collect()
    }

    /// Matrices of every element acting on the degree-`d` piece.
    pub fn degree_action(&self, d: u32) -> Vec<Matrix> {
        self.substitutions().iter_mut().map(|s| s.degree_matrix(d)).collect()
    }

    /// Averaging projector on the degree-`d` piece.
    pub fn reynolds_matrix(&self, d: u32) -> Matrix {
        let dim = self.ring().graded_dim(d);
        let sum = self
            .degree_action(d)
            .iter()
            .fold(Matrix::zeros(self.field, dim, dim), |acc, m| acc.add(m));
        sum.scale(&self.inverse_order())
    }

    /// `(1/|G|) Σ_σ σ·f`.
    pub fn reynolds(&self, f: &Polynomial) -> Result<Polynomial, GroupError> {
        if f.field() != self.field || f.ring().nvars != self.n {
            return Err(GroupError::FieldMismatch { group: self.field, other: f.field() });
        }
        let sum = self
            .substitutions()
            .iter_mut()
            .fold(f.ring().zero(), |acc, s| &acc + &s.apply(f));
        Ok(sum.scale(&self.inverse_order()))
    }

    pub fn is_invariant(&self, f: &Polynomial) -> bool {
        self.substitutions().iter_mut().all(|s| s.apply(f) == *f)
    }

    /// Coefficients `a_0..a_D` of `(1/|G|) Σ_σ 1/det(I - tσ)`.
    pub fn molien_coefficients(&self, max_deg: u32) -> Result<Vec<u64>, GroupError> {
        if self.field != Field::Rationals {
            return Err(GroupError::UnsupportedField(self.field));
        }
        let len = max_deg as usize + 1;
        let mut total = vec![BigRational::zero(); len];
        for e in &self.elements {
            let denom = det_one_minus_t(e.matrix());
            for (acc, c) in total.iter_mut().zip(invert_series(&denom, len)) {
                *acc += c;
            }
        }
        let order = BigRational::from_integer(self.order().into());
        total
            .into_iter()
            .map(|c| {
                let v = c / &order;
                assert!(v.is_integer(), "Molien coefficient {v} is not integral");
                Ok(u64::try_from(v.to_integer()).expect("non-negative coefficient"))
            })
            .collect()
    }
}

fn rational(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        Scalar::Residue { .. } => unreachable!("rational-only helper"),
    }
}

/// Coefficients of `det(I - tA)` in increasing powers of `t`, via
/// Faddeev-LeVerrier: `det(tI - A) = Σ c_k t^k` reversed.
fn det_one_minus_t(a: &Matrix) -> Vec<BigRational> {
    let n = a.rows();
    let q = Field::Rationals;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = Matrix::zeros(q, n, n);
    for k in 1..=n {
        let am = a.mul(&m);
        m = am.add(&Matrix::identity(q, n).scale(&Scalar::Rational(coeffs[n - k + 1].clone())));
        let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + rational(&a.mul(&m)[(i, i)]));
        coeffs[n - k] = -trace / BigRational::from_integer((k as i64).into());
    }
    // det(I - tA) = t^n det(t^{-1} I - A): reverse the characteristic polynomial.
    coeffs.reverse();
    coeffs
}

/// Power series `1/p(t)` to `len` terms; `p(0)` must be 1.
fn invert_series(p: &[BigRational], len: usize) -> Vec<BigRational> {
    debug_assert!(p[0].is_one());
    let mut out = vec![BigRational::zero(); len];
    for k in 0..len {
        let mut v = if k == 0 { BigRational::one() } else { BigRational::zero() };
        for j in 1..p.len().min(k + 1) {
            v -= &p[j] * &out[k - j];
        }
        out[k] = v;
    }
    out
}
