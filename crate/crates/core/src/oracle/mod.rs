//! Independent cross-checks. The oracles themselves only use the scalar and
//! polynomial layers; `run_oracle_suite` pits them against the engine.

mod hypersurface;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::group::{FiniteMatrixGroup, SquareMatrix, DEFAULT_MAX_ORDER};
use crate::invariants::hilbert_series;
use crate::local_cohomology::{
    default_socle_window, invariant_dim_via_fixed_complex, lc_piece, socle_dims, IdealSpec, LevelParams,
    SocleRequest,
};
use crate::polyring::Ring;
use crate::scalars::Field;

pub use hypersurface::hypersurface_a1_oracle;

/// `dim H^n_m(K[x_1..x_n])_d`: exponent vectors `a_i ≥ 1` with `Σ a_i = -d`.
pub fn top_lc_polynomial_oracle(n: usize, d: i64) -> u64 {
    fn count(parts: usize, total: i64) -> u64 {
        match parts {
            0 => u64::from(total == 0),
            _ => (1..=total).map(|a| count(parts - 1, total - a)).sum(),
        }
    }
    if n == 0 {
        return 0;
    }
    count(n, -d)
}

/// Socle of the `r`-th Veronese part of `H^2_m(K[x,y])` in degree `d`: the
/// classes `x^{-a} y^{-b}` (`a, b ≥ 1`, `a + b = -d ≡ 0 mod r`) sent to zero by
/// every `x^p y^q` with `p + q = r`, i.e. those with `p ≥ a` or `q ≥ b` for all
/// such `(p, q)`. Multiplication moves distinct monomials to distinct
/// monomials, so the socle is spanned by such classes.
pub fn veronese_socle_oracle(r: u32, d: i64) -> u64 {
    let total = -d;
    if r == 0 || total < 2 || total % i64::from(r) != 0 {
        return 0;
    }
    let r = i64::from(r);
    (1..total)
        .filter(|&a| {
            let b = total - a;
            (0..=r).all(|p| p >= a || r - p >= b)
        })
        .count() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub inputs: serde_json::Value,
    /// `None` when the engine returned an error (see `notes`).
    pub engine_value: Option<i64>,
    pub oracle_value: i64,
    pub verdict: Verdict,
    pub notes: String,
}

impl OracleReport {
    fn new<E: std::fmt::Display>(
        name: &str,
        inputs: serde_json::Value,
        engine: Result<i64, E>,
        oracle_value: i64,
    ) -> OracleReport {
        let (engine_value, notes) = match engine {
            Ok(v) => (Some(v), String::new()),
            Err(e) => (None, e.to_string()),
        };
        let verdict = if engine_value == Some(oracle_value) { Verdict::Match } else { Verdict::Mismatch };
        OracleReport { name: name.to_string(), inputs, engine_value, oracle_value, verdict, notes }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub params: LevelParams,
    /// Degrees checked for `H^2_{(x,y)}(K[x,y])`.
    pub top_lc_degrees: (i64, i64),
    /// Degrees checked for `H^3_{(x,y,z)}(K[x,y,z])`.
    pub top_lc_three_degrees: (i64, i64),
    pub a1_degrees: (i64, i64),
    pub molien_max_deg: u32,
    pub socles: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            params: LevelParams { t_max: 10, window: 3 },
            top_lc_degrees: (-8, -2),
            top_lc_three_degrees: (-5, -3),
            a1_degrees: (-10, 0),
            molien_max_deg: 10,
            socles: true,
        }
    }
}

pub fn all_match(reports: &[OracleReport]) -> bool {
    reports.iter().all(|r| r.verdict == Verdict::Match)
}

fn rational_group(gens: &[&[&[i64]]]) -> FiniteMatrixGroup {
    let g: Vec<SquareMatrix> =
        gens.iter().map(|m| SquareMatrix::from_i64(Field::Rationals, m).expect("invertible")).collect();
    FiniteMatrixGroup::close(&g, DEFAULT_MAX_ORDER).expect("finite group")
}

fn sign_group() -> FiniteMatrixGroup {
    rational_group(&[&[&[-1, 0], &[0, -1]]])
}

fn cubic_roots_group() -> FiniteMatrixGroup {
    let f7 = Field::prime(7).expect("prime");
    let g = SquareMatrix::from_i64(f7, &[&[2, 0], &[0, 2]]).expect("invertible");
    FiniteMatrixGroup::close(&[g], DEFAULT_MAX_ORDER).expect("finite group")
}

#[derive(Debug, Clone)]
enum Check {
    TopLc { n: usize, i: usize, d: i64 },
    A1 { d: i64 },
    FixedRoute { d: i64 },
    Molien { name: &'static str, d: u32 },
    Socle { r: u32 },
}

fn run_check(check: &Check, config: &OracleConfig) -> OracleReport {
    let params = config.params;
    match *check {
        Check::TopLc { n, i, d } => {
            let ring = Ring::new(n, Field::Rationals);
            let gens: Vec<_> = (0..n).map(|k| ring.var(k)).collect();
            let ideal = IdealSpec::new(gens, None).expect("variables");
            let engine = lc_piece(&ideal, None, i, d, params).map(|p| p.stable_dim as i64);
            let oracle = if i == n { top_lc_polynomial_oracle(n, d) as i64 } else { 0 };
            let name = if i == n { "top_lc_polynomial" } else { "depth_vanishing" };
            let mut report = OracleReport::new(name, json!({ "n": n, "i": i, "d": d }), engine, oracle);
            if i < n && report.notes.is_empty() {
                report.notes = "below the depth of the maximal ideal".into();
            }
            report
        }
        Check::A1 { d } => {
            let g = sign_group();
            let ideal = IdealSpec::parse(g.ring(), "x^2, y^2", Some(&g)).expect("invariant ideal");
            let engine = lc_piece(&ideal, Some(&g), 2, d, params).map(|p| p.invariant_dim.unwrap_or(0) as i64);
            OracleReport::new(
                "hypersurface_a1",
                json!({ "group": "±I2", "ideal": "x^2, y^2", "i": 2, "d": d }),
                engine,
                hypersurface_a1_oracle(d) as i64,
            )
        }
        Check::FixedRoute { d } => {
            let g = sign_group();
            let ideal = IdealSpec::parse(g.ring(), "x^2, y^2", Some(&g)).expect("invariant ideal");
            let engine = invariant_dim_via_fixed_complex(&ideal, &g, 2, d, params).map(|v| v as i64);
            OracleReport::new(
                "fixed_subcomplex_vs_a1",
                json!({ "group": "±I2", "ideal": "x^2, y^2", "i": 2, "d": d }),
                engine,
                hypersurface_a1_oracle(d) as i64,
            )
        }
        Check::Molien { name, d } => {
            let g = match name {
                "minus_identity" => sign_group(),
                "rotation_c4" => rational_group(&[&[&[0, -1], &[1, 0]]]),
                _ => rational_group(&[&[&[0, 1], &[1, 0]]]),
            };
            let engine = Ok::<i64, String>(hilbert_series(&g, d)[d as usize] as i64);
            let oracle = g.molien_coefficients(d).expect("rational group")[d as usize] as i64;
            OracleReport::new("molien_vs_invariant_basis", json!({ "group": name, "d": d }), engine, oracle)
        }
        Check::Socle { r } => {
            let (g, ideal_str, m_gens, field) = match r {
                1 => (None, "x, y", "x, y", Field::Rationals),
                2 => (Some(sign_group()), "x^2, y^2", "x^2, x*y, y^2", Field::Rationals),
                _ => (
                    Some(cubic_roots_group()),
                    "x^3, y^3",
                    "x^3, x^2*y, x*y^2, y^3",
                    Field::prime(7).expect("prime"),
                ),
            };
            let ring = Ring::new(2, field);
            let engine = (|| {
                let ideal = IdealSpec::parse(ring, ideal_str, g.as_ref())?;
                let m_generators = m_gens.split(',').map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>()?;
                let (deg_from, deg_to) = default_socle_window(&ideal);
                let req = SocleRequest { i: 2, deg_from, deg_to, m_generators, invariant_part: g.is_some(), params };
                let table = socle_dims(&ideal, g.as_ref(), &req)?;
                Ok::<i64, crate::local_cohomology::LcError>(table.total as i64)
            })();
            let (deg_from, deg_to) = (-(2 * i64::from(r) + 4), 0);
            let oracle: u64 = (deg_from..=deg_to).map(|d| veronese_socle_oracle(r, d)).sum();
            OracleReport::new(
                "veronese_socle",
                json!({ "r": r, "field": field, "ideal": ideal_str, "m_generators": m_gens }),
                engine,
                oracle as i64,
            )
        }
    }
}

/// Every registered comparison, in a fixed order.
pub fn run_oracle_suite(config: &OracleConfig) -> Vec<OracleReport> {
    let mut checks = Vec::new();
    for d in config.top_lc_degrees.0..=config.top_lc_degrees.1 {
        for i in 0..=2 {
            checks.push(Check::TopLc { n: 2, i, d });
        }
    }
    for d in config.top_lc_three_degrees.0..=config.top_lc_three_degrees.1 {
        checks.push(Check::TopLc { n: 3, i: 3, d });
    }
    for d in config.a1_degrees.0..=config.a1_degrees.1 {
        checks.push(Check::A1 { d });
        checks.push(Check::FixedRoute { d });
    }
    for name in ["minus_identity", "rotation_c4", "swap_c2"] {
        for d in 0..=config.molien_max_deg {
            checks.push(Check::Molien { name, d });
        }
    }
    if config.socles {
        for r in 1..=3 {
            checks.push(Check::Socle { r });
        }
    }
    checks.par_iter().map(|c| run_check(c, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: i64, k: i64) -> u64 {
        (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
    }

    #[test]
    fn top_lc_enumeration() {
        assert_eq!(top_lc_polynomial_oracle(2, -2), 1);
        assert_eq!(top_lc_polynomial_oracle(2, -5), 4);
        assert_eq!(top_lc_polynomial_oracle(3, -2), 0);
        assert_eq!(top_lc_polynomial_oracle(2, 3), 0);
        for n in 1..=4usize {
            for d in -9i64..=-(n as i64) {
                assert_eq!(top_lc_polynomial_oracle(n, d), binomial(-d - 1, n as i64 - 1));
            }
        }
    }

    #[test]
    fn veronese_socles() {
        let total = |r: u32| -> u64 { (-20..=0).map(|d| veronese_socle_oracle(r, d)).sum() };
        assert_eq!(total(1), 1);
        assert_eq!(total(2), 1);
        assert_eq!(total(3), 2);
        assert_eq!(veronese_socle_oracle(3, -3), 2);
    }

    #[test]
    fn reduced_suite_matches() {
        let config = OracleConfig {
            top_lc_degrees: (-4, -2),
            top_lc_three_degrees: (-3, -3),
            a1_degrees: (-4, 0),
            molien_max_deg: 4,
            ..OracleConfig::default()
        };
        let reports = run_oracle_suite(&config);
        assert!(all_match(&reports), "{reports:#?}");
        assert_eq!(reports.len(), 9 + 1 + 10 + 15 + 3);
    }
}
