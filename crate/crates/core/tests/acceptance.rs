//! Acceptance suite: eleven criteria, each with its own time limit. Prints
//! one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invlc::cli::{self, Cache, Command, JobSpec};
use invlc::equivariant::{check_fixed_commutes_with_homology, check_fixed_exactness, random};
use invlc::group::{act, FiniteMatrixGroup, SquareMatrix, DEFAULT_MAX_ORDER};
use invlc::invariants::hilbert_series;
use invlc::local_cohomology::{
    default_socle_window, invariant_dim_via_fixed_complex, lc_piece, socle_dims, IdealSpec, LcError, LevelParams,
    SocleRequest,
};
use invlc::oracle::{hypersurface_a1_oracle, top_lc_polynomial_oracle, veronese_socle_oracle};
use invlc::polyring::{Polynomial, Ring};
use invlc::scalars::Field;
use invlc::weyl::{act_on_operator, FirstOrderOperator};

const Q: Field = Field::Rationals;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(field: Field, gens: &[&[&[i64]]]) -> FiniteMatrixGroup {
    let g: Vec<SquareMatrix> = gens.iter().map(|m| SquareMatrix::from_i64(field, m).unwrap()).collect();
    FiniteMatrixGroup::close(&g, DEFAULT_MAX_ORDER).unwrap()
}

fn sign_group() -> FiniteMatrixGroup {
    group(Q, &[&[&[-1, 0], &[0, -1]]])
}

fn cubic_roots_gf7() -> FiniteMatrixGroup {
    group(Field::prime(7).unwrap(), &[&[&[2, 0], &[0, 2]]])
}

/// Groups of orders 2, 3, 4 and 8 over Q.
fn small_groups() -> Vec<FiniteMatrixGroup> {
    vec![
        sign_group(),
        group(Q, &[&[&[0, -1], &[1, -1]]]),
        group(Q, &[&[&[0, -1], &[1, 0]]]),
        group(Q, &[&[&[0, -1], &[1, 0]], &[&[0, 1], &[1, 0]]]),
    ]
}

fn random_poly(ring: Ring, max_deg: u32, rng: &mut impl Rng) -> Polynomial {
    let mut f = ring.zero();
    for d in 0..=max_deg {
        for m in ring.monomial_basis(d) {
            if rng.gen_bool(0.5) {
                f = &f + &ring.term(m, ring.field.from_i64(rng.gen_range(-4..=4)));
            }
        }
    }
    f
}

fn reynolds_laws() -> Outcome {
    let groups = small_groups();
    let orders: Vec<usize> = groups.iter().map(FiniteMatrixGroup::order).collect();
    check(orders == [2, 3, 4, 8], || format!("group orders {orders:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let g = &groups[case % groups.len()];
        let ring = g.ring();
        let f = random_poly(ring, 4, &mut rng);
        let h = g.reynolds(&random_poly(ring, 3, &mut rng)).unwrap();
        let rf = g.reynolds(&f).unwrap();
        check(g.reynolds(&rf).unwrap() == rf, || format!("case {case}: not idempotent on {f}"))?;
        check(g.reynolds(&h).unwrap() == h, || format!("case {case}: moves invariant {h}"))?;
        check(g.is_invariant(&rf), || format!("case {case}: image of {f} not invariant"))?;
        let lhs = g.reynolds(&(&h * &f)).unwrap();
        check(lhs == &h * &rf, || format!("case {case}: not R^G-linear for h = {h}, f = {f}"))?;
    }
    Ok("500 cases over orders 2, 3, 4, 8".into())
}

fn fixed_points_commute() -> Outcome {
    let groups = &small_groups()[..3];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..100 {
        let g = &groups[case % groups.len()];
        let length = rng.gen_range(1..=4);
        let c = random::equivariant_complex(g, length, 6, &mut rng);
        check(c.complex().dims().iter().all(|&d| d <= 6), || format!("case {case}: term too large"))?;
        let report = check_fixed_commutes_with_homology(&c).map_err(|e| format!("case {case}: {e}"))?;
        check(report.holds, || format!("case {case}: {:?}", report.rows))?;
    }
    Ok("100 complexes, |G| <= 4, dims <= 6, length <= 4".into())
}

fn fixed_points_exact() -> Outcome {
    let groups = small_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..100 {
        let g = &groups[case % groups.len()];
        let r = check_fixed_exactness(&random::short_exact_sequence(g, 6, &mut rng));
        check(r.exact, || format!("case {case}: {r:?}"))?;
        check(r.fixed_dims[1] == r.fixed_dims[0] + r.fixed_dims[2], || format!("case {case}: {r:?}"))?;
    }
    Ok("100 short exact sequences".into())
}

fn molien_vs_direct() -> Outcome {
    let groups = [
        ("±I2", sign_group()),
        ("C4", group(Q, &[&[&[0, -1], &[1, 0]]])),
        ("swap", group(Q, &[&[&[0, 1], &[1, 0]]])),
    ];
    for (name, g) in &groups {
        let molien = g.molien_coefficients(10).map_err(|e| e.to_string())?;
        let direct = hilbert_series(g, 10);
        check(molien == direct, || format!("{name}: Molien {molien:?} vs direct {direct:?}"))?;
    }
    Ok("three groups, d <= 10".into())
}

fn top_local_cohomology() -> Outcome {
    let ring = Ring::new(2, Q);
    let ideal = IdealSpec::parse(ring, "x, y", None).map_err(|e| e.to_string())?;
    let params = LevelParams { t_max: 10, window: 3 };
    let mut max_level = 0;
    for d in -8..=-2 {
        let p = lc_piece(&ideal, None, 2, d, params).map_err(|e| format!("d = {d}: {e}"))?;
        let expected = (-d - 1) as usize;
        check(p.stable_dim == expected, || format!("d = {d}: dim {} expected {expected}", p.stable_dim))?;
        check(top_lc_polynomial_oracle(2, d) as usize == expected, || format!("enumeration disagrees at {d}"))?;
        max_level = max_level.max(p.level_reached);
        for i in 0..=1 {
            let low = lc_piece(&ideal, None, i, d, params).map_err(|e| format!("i = {i}, d = {d}: {e}"))?;
            check(low.stable_dim == 0, || format!("i = {i}, d = {d}: dim {}", low.stable_dim))?;
        }
    }
    check(max_level <= 10, || format!("level {max_level} beyond 10"))?;
    Ok(format!("d in [-8, -2], highest level {max_level}"))
}

fn a1_end_to_end() -> Outcome {
    let g = sign_group();
    let ideal = IdealSpec::parse(g.ring(), "x^2, y^2", Some(&g)).map_err(|e| e.to_string())?;
    let params = LevelParams::default();
    let mut values = Vec::new();
    for d in -10..=0 {
        let p = lc_piece(&ideal, Some(&g), 2, d, params).map_err(|e| format!("d = {d}: {e}"))?;
        let engine = p.invariant_dim.unwrap_or(usize::MAX);
        let oracle = hypersurface_a1_oracle(d) as usize;
        check(engine == oracle, || format!("d = {d}: engine {engine}, oracle {oracle}"))?;
        let fixed = invariant_dim_via_fixed_complex(&ideal, &g, 2, d, params).map_err(|e| format!("d = {d}: {e}"))?;
        check(fixed == oracle, || format!("d = {d}: fixed-subcomplex route {fixed}, oracle {oracle}"))?;
        values.push(oracle);
    }
    Ok(format!("d in [-10, 0]: {values:?}"))
}

fn socle_total(ideal: &str, m_gens: &str, g: Option<&FiniteMatrixGroup>, ring: Ring) -> Result<usize, String> {
    let ideal = IdealSpec::parse(ring, ideal, g).map_err(|e| e.to_string())?;
    let m_generators = m_gens.split(',').map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let (deg_from, deg_to) = default_socle_window(&ideal);
    let req = SocleRequest { i: 2, deg_from, deg_to, m_generators, invariant_part: g.is_some(), params: LevelParams::default() };
    socle_dims(&ideal, g, &req).map(|t| t.total).map_err(|e| e.to_string())
}

fn gorenstein_socle() -> Outcome {
    let g = sign_group();
    check(g.is_in_sl(), || "±I2 not in SL".into())?;
    let invariant = socle_total("x^2, y^2", "x^2, x*y, y^2", Some(&g), g.ring())?;
    let full = socle_total("x, y", "x, y", None, g.ring())?;
    check(invariant == 1 && full == 1, || format!("socle totals: invariant {invariant}, over R {full}"))?;
    Ok("invariant part 1, over R 1".into())
}

fn veronese_socle() -> Outcome {
    let g = cubic_roots_gf7();
    check(g.order() == 3, || format!("order {}", g.order()))?;
    check(!g.is_in_sl(), || "diag(2, 2) reported in SL".into())?;
    let total = socle_total("x^3, y^3", "x^3, x^2*y, x*y^2, y^3", Some(&g), g.ring())?;
    let oracle: u64 = (-10..=0).map(|d| veronese_socle_oracle(3, d)).sum();
    check(total as u64 == oracle && oracle == 2, || format!("engine {total}, oracle {oracle}"))?;
    Ok("is_in_SL false, socle total 2".into())
}

fn random_invertible(n: usize, rng: &mut impl Rng) -> SquareMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        if let Ok(m) = SquareMatrix::from_i64(Q, &refs) {
            return m;
        }
    }
}

fn weyl_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let n = 2 + case % 2;
        let ring = Ring::new(n, Q);
        let sigma = random_invertible(n, &mut rng);
        let theta = FirstOrderOperator::new(
            random_poly(ring, 2, &mut rng),
            (0..n).map(|_| random_poly(ring, 2, &mut rng)).collect(),
        )
        .unwrap();
        let (f, h) = (random_poly(ring, 3, &mut rng), random_poly(ring, 2, &mut rng));
        let moved = act_on_operator(&sigma, &theta).map_err(|e| e.to_string())?;
        let lhs = moved.apply(&act(&sigma, &f).unwrap()).unwrap();
        let rhs = act(&sigma, &theta.apply(&f).unwrap()).unwrap();
        check(lhs == rhs, || format!("case {case}: (σθ)(σf) != σ(θf)"))?;
        let i = case % n;
        let d = act_on_operator(&sigma, &FirstOrderOperator::partial(ring, i)).map_err(|e| e.to_string())?;
        check(d.constant().is_zero(), || format!("case {case}: σ∂_{i} has a multiplication part"))?;
        let leibniz = &(&f * &d.apply(&h).unwrap()) + &(&h * &d.apply(&f).unwrap());
        check(d.apply(&(&f * &h)).unwrap() == leibniz, || format!("case {case}: σ∂_{i} not a derivation"))?;
    }
    Ok("200 cases".into())
}

fn honest_non_stabilization() -> Outcome {
    let ideal = IdealSpec::parse(Ring::new(2, Q), "x", None).map_err(|e| e.to_string())?;
    match lc_piece(&ideal, None, 1, 0, LevelParams { t_max: 12, window: 3 }) {
        Err(LcError::NotStabilized { t_max, dims, .. }) => {
            check(t_max == 12, || format!("t_max {t_max}"))?;
            Ok(format!("NotStabilized, dims per level {dims:?}"))
        }
        Ok(p) => Err(format!("reported a number: {}", p.stable_dim)),
        Err(e) => Err(format!("unexpected error {e}")),
    }
}

fn acceptance_jobs() -> Vec<(Command, &'static str)> {
    vec![
        (Command::GroupInfo, r#"{"group_generators": [[[-1, 0], [0, -1]]]}"#),
        (Command::Molien, r#"{"group_generators": [[[0, -1], [1, 0]]], "max_deg": 10}"#),
        (Command::Invariants, r#"{"group_generators": [[[0, -1], [1, 0]], [[0, 1], [1, 0]]], "max_deg": 10}"#),
        (Command::Lc, r#"{"n": 2, "ideal": ["x", "y"], "i": 2, "deg_from": -8, "deg_to": -2, "t_max": 10}"#),
        (
            Command::Lc,
            r#"{"group_generators": [[[-1, 0], [0, -1]]], "ideal": ["x^2", "y^2"], "i": 2, "deg_from": -6, "deg_to": 0, "invariant_part": true}"#,
        ),
        (
            Command::Socle,
            r#"{"field": {"kind": "GFp", "p": 7}, "group_generators": [[[2, 0], [0, 2]]], "ideal": ["x^3", "y^3"], "invariant_part": true}"#,
        ),
        (Command::VerifyFixedCommute, r#"{"group_generators": [[[0, -1], [1, 0]]], "seed": 11, "cases": 25}"#),
    ]
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let jobs = acceptance_jobs();
    for (command, text) in &jobs {
        let mut job = JobSpec::from_json(text).map_err(|e| e.to_string())?;
        job.command = Some(*command);
        let runs: Vec<_> = [Cache::disabled(), Cache::at(dir.path()), Cache::at(dir.path())]
            .iter()
            .map(|c| cli::run(&job, c).map_err(|e| format!("{command}: {e}")))
            .collect::<Result<_, _>>()?;
        let first = runs[0].payload_json();
        for r in &runs[1..] {
            check(r.payload_json() == first, || format!("{command}: payloads differ between runs"))?;
            check(r.payload_sha256 == runs[0].payload_sha256, || format!("{command}: hashes differ"))?;
        }
        check(runs[0].exit_code == 0, || format!("{command}: exit code {}", runs[0].exit_code))?;
    }
    Ok(format!("{} jobs, cold, cached and uncached runs identical", jobs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Reynolds projector laws", 5, reynolds_laws),
        ("fixed points commute with homology", 30, fixed_points_commute),
        ("fixed points are exact", 10, fixed_points_exact),
        ("Molien series vs direct dimensions", 10, molien_vs_direct),
        ("top local cohomology of K[x,y]", 60, top_local_cohomology),
        ("A1 invariant local cohomology vs hypersurface", 120, a1_end_to_end),
        ("Gorenstein socle", 60, gorenstein_socle),
        ("third Veronese socle over GF(7)", 120, veronese_socle),
        ("Weyl operator equivariance", 5, weyl_equivariance),
        ("honest non-stabilization", 10, honest_non_stabilization),
        ("deterministic payloads", 120, determinism),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => Err(format!("{detail}; over the {limit} s limit")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {:>2}. {name} ({:.2} s, limit {limit} s): {detail}", k + 1, elapsed.as_secs_f64());
        failures += usize::from(outcome.is_err());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
