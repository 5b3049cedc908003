use serde::{Deserialize, Serialize};

use crate::equivariant::{fixed_subcomplex, EquivariantComplex, GRepresentation};
use crate::group::FiniteMatrixGroup;
use crate::linalg::{CoordinateMap, Matrix, Subquotient};
use crate::polyring::Polynomial;

use super::slice::{self, cech_slice, ActionCache, TermLayout};
use super::{IdealSpec, LcError};

/// Largest level accepted; larger values only make matrices huge.
const MAX_LEVEL: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    pub t_max: u32,
    pub window: u32,
}

impl Default for LevelParams {
    fn default() -> Self {
        LevelParams { t_max: 12, window: 3 }
    }
}

impl LevelParams {
    pub fn validate(&self) -> Result<(), LcError> {
        if self.window < 2 {
            return Err(LcError::InvalidParams(format!("window {} is below 2", self.window)));
        }
        if self.t_max < self.window {
            return Err(LcError::InvalidParams(format!("t_max {} is below window {}", self.t_max, self.window)));
        }
        if self.t_max > MAX_LEVEL {
            return Err(LcError::InvalidParams(format!("t_max {} exceeds {MAX_LEVEL}", self.t_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub dim: usize,
    /// Rank of `H(t) → H(t+1)`, absent at the last computed level.
    pub rank_to_next: Option<usize>,
}

/// Cohomology at levels `1..=top` with the maps between consecutive levels.
#[derive(Debug, Clone)]
pub struct LevelTower {
    levels: Vec<Subquotient>,
    maps: Vec<Matrix>,
}

/// What a level source hands the tower: `H(t)` and the ambient map from
/// level `t - 1` (absent at `t = 1`).
struct LevelData {
    cohomology: Subquotient,
    from_previous: Option<Matrix>,
}

impl LevelTower {
    fn new() -> LevelTower {
        LevelTower { levels: Vec::new(), maps: Vec::new() }
    }

    fn push(&mut self, data: LevelData) {
        if let (Some(prev), Some(map)) = (self.levels.last(), data.from_previous) {
            let phi = data
                .cohomology
                .reduce(&map.mul(prev.representatives()))
                .expect("level maps send cocycles to cocycles");
            self.maps.push(phi);
        }
        self.levels.push(data.cohomology);
    }

    pub fn top_level(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subquotient::dim).collect()
    }

    fn field(&self) -> crate::scalars::Field {
        self.levels[0].representatives().field()
    }

    /// `H(from) → H(to)`, for `1 ≤ from ≤ to ≤ top`.
    fn composite(&self, from: u32, to: u32) -> Matrix {
        let mut m = Matrix::identity(self.field(), self.levels[from as usize - 1].dim());
        for t in from..to {
            m = self.maps[t as usize - 1].mul(&m);
        }
        m
    }

    pub fn image_rank(&self, from: u32, to: u32) -> usize {
        self.composite(from, to).rank()
    }

    pub fn records(&self) -> Vec<LevelRecord> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, h)| LevelRecord { level: k as u32 + 1, dim: h.dim(), rank_to_next: self.maps.get(k).map(Matrix::rank) }
            )
            .collect()
    }

    /// With `L = top - window + 1`: every map `H(t) → H(t+1)` for
    /// `L ≤ t < top` and the composite `H(L) → H(top)` share one rank `k`.
    /// Returns a basis of the image of the composite in `H(top)`.
    /// Windows starting below `start` are not considered.
    fn stable_image(&self, window: u32, start: u32) -> Option<Matrix> {
        let top = self.top_level();
        if top < window || top - window + 1 < start {
            return None;
        }
        let low = top - window + 1;
        let composite = self.composite(low, top);
        let k = composite.rank();
        (low..top)
            .all(|t| self.maps[t as usize - 1].rank() == k)
            .then(|| composite.column_basis())
    }
}

/// Runs levels `1, 2, ...` until the window rule holds, or through `t_max`
/// when `stop_early` is false.
fn run_tower<F>(params: LevelParams, start: u32, stop_early: bool, mut level: F) -> Result<(LevelTower, Option<Matrix>), LcError>
where
    F: FnMut(u32) -> Result<LevelData, LcError>,
{
    params.validate()?;
    let mut tower = LevelTower::new();
    let mut stable = None;
    for t in 1..=params.t_max {
        tower.push(level(t)?);
        stable = tower.stable_image(params.window, start);
        if stable.is_some() && stop_early {
            break;
        }
    }
    Ok((tower, stable))
}

/// First level at which every block of positions `i - 1`, `i`, `i + 1`
/// with a nonempty subset has a nonnegative numerator degree. Earlier levels
/// vanish for degree reasons alone and must not count towards a window.
fn first_full_level(ideal: &IdealSpec, i: usize, d: i64) -> u32 {
    if d >= 0 {
        return 1;
    }
    let s = ideal.num_generators();
    let lo = i.saturating_sub(1).max(1);
    let hi = (i + 1).min(s);
    let mut start = 1;
    for k in lo..=hi {
        for subset in slice::subsets(s, k) {
            let e = i64::from(ideal.subset_degree(&subset));
            start = start.max(((-d + e - 1) / e) as u32);
        }
    }
    start
}

fn check_index(ideal: &IdealSpec, i: usize) -> Result<(), LcError> {
    let s = ideal.num_generators();
    if i > s {
        return Err(LcError::IndexOutOfRange { i, s });
    }
    Ok(())
}

/// Level source for the plain Čech complex.
fn cech_levels(ideal: &IdealSpec, i: usize, d: i64) -> impl FnMut(u32) -> Result<LevelData, LcError> + '_ {
    let mut previous: Option<TermLayout> = None;
    move |t| {
        let s = cech_slice(ideal, i, d, t)?;
        let cohomology = Subquotient::new(&s.d_out.kernel(), &s.d_in);
        let from_previous = previous.as_ref().map(|p| slice::transition(ideal, p, &s.middle));
        previous = Some(s.middle);
        Ok(LevelData { cohomology, from_previous })
    }
}

/// The whole tower through `t_max` without stopping, for inspecting how
/// images of earlier levels evolve.
pub fn level_tower(ideal: &IdealSpec, i: usize, d: i64, t_max: u32) -> Result<LevelTower, LcError> {
    check_index(ideal, i)?;
    let params = LevelParams { t_max, window: 2 };
    Ok(run_tower(params, 1, false, cech_levels(ideal, i, d))?.0)
}

/// A stabilized graded piece `H^i_I(R)_d`.
#[derive(Debug, Clone)]
pub struct CohomologyPiece {
    pub i: usize,
    pub d: i64,
    pub stable_dim: usize,
    pub level_reached: u32,
    pub params: LevelParams,
    pub trace: Vec<LevelRecord>,
    /// Cocycles in `C^i` at `level_reached`, one column per basis vector.
    pub representatives: Matrix,
    /// Matrices of every group element on the stable piece.
    pub g_action: Option<Vec<Matrix>>,
    pub invariant_dim: Option<usize>,
    layout: TermLayout,
}

impl CohomologyPiece {
    /// Basis of the fixed subspace, in stable coordinates.
    pub fn invariant_basis(&self) -> Option<Matrix> {
        let action = self.g_action.as_ref()?;
        Some(average(action).column_basis())
    }

    /// Representatives written as sums of fractions, e.g. `1/(x*y)`.
    pub fn render_representatives(&self, ideal: &IdealSpec) -> Vec<String> {
        (0..self.representatives.cols())
            .map(|c| super::fraction::render_cocycle(ideal, &self.layout, &self.representatives.column(c)))
            .collect()
    }

    pub fn layout(&self) -> &TermLayout {
        &self.layout
    }
}

fn average(action: &[Matrix]) -> Matrix {
    let field = action[0].field();
    let n = action[0].rows();
    let sum = action.iter().fold(Matrix::zeros(field, n, n), |acc, m| acc.add(m));
    let order = field.from_i64(action.len() as i64);
    sum.scale(&order.inv().expect("group order invertible"))
}

/// `H^i_I(R)_d` by the window rule; with a group, also the induced action
/// and the dimension of the invariant part.
pub fn lc_piece(
    ideal: &IdealSpec,
    group: Option<&FiniteMatrixGroup>,
    i: usize,
    d: i64,
    params: LevelParams,
) -> Result<CohomologyPiece, LcError> {
    check_index(ideal, i)?;
    if let Some(g) = group {
        ideal.require_invariant(g)?;
    }
    let (tower, stable) = run_tower(params, first_full_level(ideal, i, d), true, cech_levels(ideal, i, d))?;
    let Some(basis) = stable else {
        return Err(LcError::NotStabilized { i, d, t_max: params.t_max, dims: tower.dims() });
    };
    let level = tower.top_level();
    let h = tower.levels.last().expect("at least one level");
    let layout = TermLayout::new(ideal, i as i64, d, level);
    let representatives = h.representatives().mul(&basis);
    let (g_action, invariant_dim) = match group {
        Some(g) => {
            let coords = CoordinateMap::new(&basis);
            let mut cache = ActionCache::default();
            let action: Vec<Matrix> = layout
                .action(g, &mut cache)
                .iter()
                .map(|a| {
                    let image = h.reduce(&a.mul(&representatives)).expect("action preserves cocycles");
                    coords.coordinates(&image).expect("stable piece is G-stable")
                })
                .collect();
            let inv = average(&action).rank();
            (Some(action), Some(inv))
        }
        None => (None, None),
    };
    Ok(CohomologyPiece {
        i,
        d,
        stable_dim: basis.cols(),
        level_reached: level,
        params,
        trace: tower.records(),
        representatives,
        g_action,
        invariant_dim,
        layout,
    })
}

/// Second route to `dim H^i_I(R)^G_d`: the window rule applied to the
/// cohomology of the fixed subcomplex of each level.
pub fn invariant_dim_via_fixed_complex(
    ideal: &IdealSpec,
    group: &FiniteMatrixGroup,
    i: usize,
    d: i64,
    params: LevelParams,
) -> Result<usize, LcError> {
    check_index(ideal, i)?;
    ideal.require_invariant(group)?;
    let mut cache = ActionCache::default();
    let mut previous: Option<(TermLayout, Matrix)> = None;
    let levels = |t: u32| -> Result<LevelData, LcError> {
        let s = cech_slice(ideal, i, d, t)?;
        // Chain indexing: C^{i+1}, C^i, C^{i-1}.
        let terms = [&s.after, &s.middle, &s.before]
            .iter()
            .map(|l| GRepresentation::from_parts(l.dim, l.action(group, &mut cache)))
            .collect();
        let complex = EquivariantComplex::new(terms, vec![s.d_out.clone(), s.d_in.clone()])
            .expect("Čech slice is a complex");
        let fixed = fixed_subcomplex(&complex).expect("Čech differentials are equivariant");
        let cohomology = fixed.complex.homology(ideal.ring().field, 1);
        let inclusion = fixed.inclusions[1].clone();
        let from_previous = previous.as_ref().map(|(layout, incl)| {
            let image = slice::transition(ideal, layout, &s.middle).mul(incl);
            CoordinateMap::new(&inclusion)
                .coordinates(&image)
                .expect("transition preserves invariants")
        });
        previous = Some((s.middle, inclusion));
        Ok(LevelData { cohomology, from_previous })
    };
    let (tower, stable) = run_tower(params, first_full_level(ideal, i, d), true, levels)?;
    match stable {
        Some(b) => Ok(b.cols()),
        None => Err(LcError::NotStabilized { i, d, t_max: params.t_max, dims: tower.dims() }),
    }
}

/// Multiplication by a homogeneous `g` from the piece `src` (degree `d`)
/// to the piece `tgt` (degree `d + deg g`), in stable coordinates.
pub fn multiplication_map(
    ideal: &IdealSpec,
    src: &CohomologyPiece,
    tgt: &CohomologyPiece,
    g: &Polynomial,
) -> Result<Matrix, LcError> {
    if g.ring() != ideal.ring() {
        return Err(LcError::RingMismatch { ideal: ideal.ring(), other: g.ring() });
    }
    let shift = if g.is_zero() {
        tgt.d - src.d
    } else {
        i64::from(
            g.homogeneous_degree()
                .ok_or_else(|| LcError::InvalidParams(format!("multiplier {g} is not homogeneous")))?,
        )
    };
    if src.i != tgt.i || tgt.d - src.d != shift {
        return Err(LcError::InvalidParams(format!(
            "multiplication by {g} does not map H^{} degree {} to H^{} degree {}",
            src.i, src.d, tgt.i, tgt.d
        )));
    }
    let i = src.i;
    let top = src.level_reached.max(tgt.level_reached);
    let lifted_src = lift(ideal, i, src.d, src.level_reached, top, &src.representatives);
    let lifted_tgt = lift(ideal, i, tgt.d, tgt.level_reached, top, &tgt.representatives);
    let s = cech_slice(ideal, i, tgt.d, top)?;
    let h = Subquotient::new(&s.d_out.kernel(), &s.d_in);
    let from = TermLayout::new(ideal, i as i64, src.d, top);
    let product = slice::multiplication(&from, &s.middle, g).mul(&lifted_src);
    let image = h.reduce(&product).expect("multiplication preserves cocycles");
    let target = h.reduce(&lifted_tgt).expect("lifted cocycles");
    if target.rank() != tgt.stable_dim {
        return Err(LcError::MultiplicationOutsidePiece(g.to_string()));
    }
    target.solve(&image).ok_or_else(|| LcError::MultiplicationOutsidePiece(g.to_string()))
}

fn lift(ideal: &IdealSpec, i: usize, d: i64, from: u32, to: u32, vectors: &Matrix) -> Matrix {
    let mut v = vectors.clone();
    let mut layout = TermLayout::new(ideal, i as i64, d, from);
    for t in from..to {
        let next = TermLayout::new(ideal, i as i64, d, t + 1);
        v = slice::transition(ideal, &layout, &next).mul(&v);
        layout = next;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SquareMatrix;
    use crate::polyring::Ring;
    use crate::scalars::Field;

    const Q: Field = Field::Rationals;

    fn plane() -> (Ring, IdealSpec) {
        let r = Ring::new(2, Q);
        (r, IdealSpec::parse(r, "x, y", None).unwrap())
    }

    fn minus_identity() -> FiniteMatrixGroup {
        FiniteMatrixGroup::close(&[SquareMatrix::from_i64(Q, &[&[-1, 0], &[0, -1]]).unwrap()], 10).unwrap()
    }

    #[test]
    fn punctured_plane_degree_minus_two() {
        let (_, ideal) = plane();
        let p = lc_piece(&ideal, None, 2, -2, LevelParams::default()).unwrap();
        assert_eq!(p.stable_dim, 1);
        assert_eq!(p.render_representatives(&ideal).len(), 1);
        for i in 0..=1 {
            for d in -6..=2 {
                assert_eq!(lc_piece(&ideal, None, i, d, LevelParams::default()).unwrap().stable_dim, 0);
            }
        }
    }

    #[test]
    fn top_piece_level_and_dim() {
        let (_, ideal) = plane();
        let p = lc_piece(&ideal, None, 2, -8, LevelParams::default()).unwrap();
        assert_eq!((p.stable_dim, p.level_reached), (7, 10));
        assert_eq!(p.trace.len(), 10);
    }

    #[test]
    fn sign_action_on_inverse_monomial() {
        let (r, _) = plane();
        let g = minus_identity();
        let ideal = IdealSpec::parse(r, "x^2, y^2", Some(&g)).unwrap();
        let p = lc_piece(&ideal, Some(&g), 2, -2, LevelParams::default()).unwrap();
        assert_eq!((p.stable_dim, p.invariant_dim), (1, Some(1)));
        let odd = lc_piece(&ideal, Some(&g), 2, -3, LevelParams::default()).unwrap();
        assert_eq!((odd.stable_dim, odd.invariant_dim), (2, Some(0)));
        for d in [-2, -3, -4, -6] {
            assert_eq!(
                invariant_dim_via_fixed_complex(&ideal, &g, 2, d, LevelParams::default()).unwrap(),
                lc_piece(&ideal, Some(&g), 2, d, LevelParams::default()).unwrap().invariant_dim.unwrap()
            );
        }
    }

    #[test]
    fn group_needs_invariant_generators() {
        let (_, ideal) = plane();
        assert!(matches!(
            lc_piece(&ideal, Some(&minus_identity()), 2, -2, LevelParams::default()),
            Err(LcError::NotInvariantIdeal { .. })
        ));
    }

    #[test]
    fn principal_ideal_never_stabilizes() {
        let r = Ring::new(2, Q);
        let ideal = IdealSpec::parse(r, "x", None).unwrap();
        match lc_piece(&ideal, None, 1, 0, LevelParams { t_max: 8, window: 3 }) {
            Err(LcError::NotStabilized { dims, .. }) => assert_eq!(dims, (1..=8).collect::<Vec<_>>()),
            other => panic!("expected NotStabilized, got {other:?}"),
        }
    }

    #[test]
    fn parameter_validation() {
        let (_, ideal) = plane();
        for (t_max, window) in [(12, 1), (2, 3), (100, 3)] {
            assert!(matches!(
                lc_piece(&ideal, None, 2, -2, LevelParams { t_max, window }),
                Err(LcError::InvalidParams(_))
            ));
        }
    }

    #[test]
    fn multiplication_by_xy() {
        let (r, ideal) = plane();
        let params = LevelParams::default();
        let p4 = lc_piece(&ideal, None, 2, -4, params).unwrap();
        let p2 = lc_piece(&ideal, None, 2, -2, params).unwrap();
        let m = multiplication_map(&ideal, &p4, &p2, &r.parse("x*y").unwrap()).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.cols() - m.rank(), p4.stable_dim - 1);
        let id = multiplication_map(&ideal, &p4, &p4, &r.one()).unwrap();
        assert_eq!(id, Matrix::identity(Q, p4.stable_dim));
    }

    #[test]
    fn multiplication_commutes_with_rotation() {
        let r = Ring::new(2, Q);
        let c4 = FiniteMatrixGroup::close(&[SquareMatrix::from_i64(Q, &[&[0, -1], &[1, 0]]).unwrap()], 10).unwrap();
        let ideal = IdealSpec::parse(r, "x^2 + y^2, x^2*y^2", Some(&c4)).unwrap();
        let params = LevelParams::default();
        let g = r.parse("x^2 + y^2").unwrap();
        let a = lc_piece(&ideal, Some(&c4), 2, -8, params).unwrap();
        let b = lc_piece(&ideal, Some(&c4), 2, -6, params).unwrap();
        let m = multiplication_map(&ideal, &a, &b, &g).unwrap();
        let (ga, gb) = (a.g_action.as_ref().unwrap(), b.g_action.as_ref().unwrap());
        for k in 0..c4.order() {
            assert_eq!(m.mul(&ga[k]), gb[k].mul(&m));
        }
    }

    #[test]
    fn images_shrink_with_distance() {
        let r = Ring::new(2, Q);
        let ideal = IdealSpec::parse(r, "x^2, x*y", None).unwrap();
        let tower = level_tower(&ideal, 1, -1, 6).unwrap();
        for from in 1..=6 {
            let ranks: Vec<usize> = (from..=6).map(|to| tower.image_rank(from, to)).collect();
            assert!(ranks.windows(2).all(|w| w[0] >= w[1]), "{ranks:?}");
        }
    }
}
