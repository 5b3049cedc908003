use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::equivariant::{check_fixed_commutes_with_homology, check_fixed_exactness, random, FixedHomologyRow};
use crate::group::{FiniteMatrixGroup, SquareMatrix};
use crate::invariants::{invariant_basis, minimal_generators, minimal_generators_from_pieces, Generator, InvariantPiece};
use crate::linalg::Matrix;
use crate::local_cohomology::{
    default_socle_window, lc_piece, socle_dims, IdealSpec, LcError, LevelParams, SocleRequest, SocleRow,
};
use crate::oracle::{all_match, run_oracle_suite, OracleConfig, OracleReport, Verdict};
use crate::polyring::{Polynomial, Ring};
use crate::scalars::Field;

use super::cache::Cache;
use super::job::{Command, JobSpec};
use super::CliError;

pub(crate) struct CommandOutput {
    pub payload: Value,
    pub provenance: Value,
    pub markdown: String,
    pub exit_code: i32,
}

const DEFAULT_MAX_DEG: u32 = 10;
const DEFAULT_CASES: usize = 100;

pub(crate) fn execute(command: Command, job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    match command {
        Command::GroupInfo => group_info(job, cache),
        Command::Molien => molien(job, cache),
        Command::Invariants => invariants(job, cache),
        Command::Lc => lc(job, cache),
        Command::Socle => socle(job, cache),
        Command::VerifyFixedCommute => verify_fixed_commute(job, cache),
        Command::Verify => verify(job),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("| {} |\n|{}|\n", headers.join(" | "), headers.iter().map(|_| "---").collect::<Vec<_>>().join("|"));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out
}

fn matrix_strings(g: &SquareMatrix) -> Vec<Vec<String>> {
    (0..g.n()).map(|r| (0..g.n()).map(|c| g.entry(r, c).to_string()).collect()).collect()
}

#[derive(Serialize, Deserialize)]
struct StoredGroup {
    elements: Vec<Vec<Vec<String>>>,
    generator_indices: Vec<usize>,
}

fn group_key(field: Field, generators: &[SquareMatrix], max_order: usize) -> Value {
    let gens: Vec<_> = generators.iter().map(matrix_strings).collect();
    json!({ "field": field, "generators": gens, "max_order": max_order })
}

/// The group of the job, or `None` without generators; closures are cached.
fn job_group(job: &JobSpec, cache: &Cache) -> Result<Option<FiniteMatrixGroup>, CliError> {
    if job.group_generators.is_empty() {
        return Ok(None);
    }
    let gens = job.generator_matrices()?;
    let field = job.field();
    let key = group_key(field, &gens, job.max_order());
    let rebuild = |s: StoredGroup| -> Option<FiniteMatrixGroup> {
        let elements = s
            .elements
            .iter()
            .map(|rows| {
                let n = rows.len();
                let mut m = Matrix::zeros(field, n, n);
                for (r, row) in rows.iter().enumerate() {
                    if row.len() != n {
                        return None;
                    }
                    for (c, e) in row.iter().enumerate() {
                        m[(r, c)] = field.parse_scalar(e).ok()?;
                    }
                }
                SquareMatrix::new(m).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        let g = FiniteMatrixGroup::from_elements(elements, s.generator_indices).ok()?;
        let same_gens = g.generator_indices().len() == gens.len()
            && g.generator_indices().iter().zip(&gens).all(|(&k, m)| g.element(k) == m);
        same_gens.then_some(g)
    };
    cache
        .try_get_or_compute("group", &key, rebuild, || {
            let g = FiniteMatrixGroup::close(&gens, job.max_order())
                .map_err(|e| CliError::Validation(format!("group generators: {e}")))?;
            let stored = StoredGroup {
                elements: g.elements().iter().map(matrix_strings).collect(),
                generator_indices: g.generator_indices().to_vec(),
            };
            Ok((g, stored))
        })
        .map(Some)
}

fn group_or_trivial(job: &JobSpec, cache: &Cache) -> Result<FiniteMatrixGroup, CliError> {
    match job_group(job, cache)? {
        Some(g) => Ok(g),
        None => Ok(FiniteMatrixGroup::trivial(job.field(), job.nvars()?)),
    }
}

fn require_group(job: &JobSpec, cache: &Cache, command: &str) -> Result<FiniteMatrixGroup, CliError> {
    job_group(job, cache)?.ok_or_else(|| CliError::Validation(format!("{command} requires group_generators")))
}

fn cached_invariant_basis(group: &FiniteMatrixGroup, d: u32, cache: &Cache) -> InvariantPiece {
    let gens: Vec<SquareMatrix> = group.generator_indices().iter().map(|&k| group.element(k).clone()).collect();
    let key = json!({ "group": group_key(group.field(), &gens, group.order()), "order": group.order(), "degree": d });
    let ring = group.ring();
    let rebuild = |s: Vec<String>| -> Option<InvariantPiece> {
        let basis = s.iter().map(|p| ring.parse(p).ok()).collect::<Option<Vec<_>>>()?;
        basis
            .iter()
            .all(|b| !b.is_zero() && b.is_homogeneous_of(d))
            .then_some(InvariantPiece { degree: d, basis })
    };
    cache.get_or_compute("invariant-basis", &key, rebuild, || {
        let piece = invariant_basis(group, d);
        let stored = piece.basis.iter().map(Polynomial::to_string).collect();
        (piece, stored)
    })
}

#[derive(Serialize)]
struct GroupInfoPayload {
    field: Field,
    n: usize,
    order: usize,
    generators: Vec<Vec<Vec<String>>>,
    determinants: Vec<String>,
    in_sl: bool,
    gorenstein_by_watanabe: bool,
}

fn group_info(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let g = group_or_trivial(job, cache)?;
    let mut dets: Vec<_> = g.elements().iter().map(|e| e.det().clone()).collect();
    dets.sort();
    dets.dedup();
    let in_sl = g.is_in_sl();
    let payload = GroupInfoPayload {
        field: g.field(),
        n: g.n(),
        order: g.order(),
        generators: g.generator_indices().iter().map(|&k| matrix_strings(g.element(k))).collect(),
        determinants: dets.iter().map(ToString::to_string).collect(),
        in_sl,
        gorenstein_by_watanabe: in_sl,
    };
    let markdown = table(
        &["property", "value"],
        &[
            vec!["field".into(), g.field().to_string()],
            vec!["n".into(), g.n().to_string()],
            vec!["order".into(), g.order().to_string()],
            vec!["determinants".into(), payload.determinants.join(", ")],
            vec!["in SL".into(), in_sl.to_string()],
            vec!["Gorenstein by Watanabe".into(), in_sl.to_string()],
        ],
    );
    Ok(CommandOutput { payload: to_value(&payload), provenance: json!({}), markdown, exit_code: 0 })
}

#[derive(Serialize)]
struct MolienPayload {
    max_deg: u32,
    molien: Vec<u64>,
    direct: Vec<u64>,
    agree: bool,
}

fn molien(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let g = group_or_trivial(job, cache)?;
    let max_deg = job.max_deg.unwrap_or(DEFAULT_MAX_DEG);
    let molien = g.molien_coefficients(max_deg).map_err(|e| CliError::Validation(format!("molien: {e}")))?;
    let direct: Vec<u64> = (0..=max_deg).map(|d| cached_invariant_basis(&g, d, cache).dim() as u64).collect();
    let agree = molien == direct;
    let rows: Vec<Vec<String>> = (0..=max_deg as usize)
        .map(|d| vec![d.to_string(), molien[d].to_string(), direct[d].to_string()])
        .collect();
    let markdown = table(&["degree", "Molien", "direct"], &rows);
    let payload = MolienPayload { max_deg, molien, direct, agree };
    Ok(CommandOutput {
        payload: to_value(&payload),
        provenance: json!({ "order": g.order() }),
        markdown,
        exit_code: if agree { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct PieceRow {
    degree: u32,
    dim: usize,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct InvariantsPayload {
    max_deg: u32,
    hilbert_series: Vec<u64>,
    hilbert_numerator: Vec<i64>,
    generators: Vec<Generator>,
    pieces: Vec<PieceRow>,
}

fn invariants(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let g = group_or_trivial(job, cache)?;
    let max_deg = job.max_deg.unwrap_or(DEFAULT_MAX_DEG);
    let pieces: Vec<InvariantPiece> = (0..=max_deg).map(|d| cached_invariant_basis(&g, d, cache)).collect();
    let pres = minimal_generators_from_pieces(&g, &pieces);
    let payload = InvariantsPayload {
        max_deg,
        hilbert_series: pres.hilbert_series.clone(),
        hilbert_numerator: pres.hilbert_numerator.clone(),
        generators: pres.generator_strings(),
        pieces: pieces
            .iter()
            .map(|p| PieceRow { degree: p.degree, dim: p.dim(), basis: p.basis.iter().map(ToString::to_string).collect() })
            .collect(),
    };
    let mut markdown = table(
        &["degree", "generator"],
        &payload.generators.iter().map(|g| vec![g.degree.to_string(), format!("`{}`", g.polynomial)]).collect::<Vec<_>>(),
    );
    markdown.push('\n');
    markdown.push_str(&table(
        &["degree", "dim (R^G)_d"],
        &payload.hilbert_series.iter().enumerate().map(|(d, v)| vec![d.to_string(), v.to_string()]).collect::<Vec<_>>(),
    ));
    Ok(CommandOutput {
        payload: to_value(&payload),
        provenance: json!({ "order": g.order(), "degree_bound": max_deg }),
        markdown,
        exit_code: 0,
    })
}

fn level_params(job: &JobSpec) -> Result<LevelParams, CliError> {
    let d = LevelParams::default();
    let p = LevelParams { t_max: job.t_max.unwrap_or(d.t_max), window: job.window.unwrap_or(d.window) };
    p.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(p)
}

fn engine_error(context: &str, e: LcError) -> CliError {
    match e {
        LcError::NotStabilized { .. } => CliError::NotStabilized(format!("{context}: {e}")),
        LcError::Parse(source) => CliError::Parse { context: context.to_string(), source },
        LcError::RangeTruncatesModule(_) | LcError::MultiplicationOutsidePiece(_) => {
            CliError::Engine { context: context.to_string(), message: e.to_string() }
        }
        other => CliError::Validation(format!("{context}: {other}")),
    }
}

/// The ideal of the job, checked against the group when `invariant_part` is set.
fn job_ideal(job: &JobSpec, ring: Ring, group: Option<&FiniteMatrixGroup>) -> Result<IdealSpec, CliError> {
    if job.ideal.is_empty() {
        return Err(CliError::Validation("an ideal is required".into()));
    }
    let gens = job.parse_polys(ring, "ideal generator", &job.ideal)?;
    let checked = if job.invariant_part { group } else { None };
    if job.invariant_part && group.is_none() {
        return Err(CliError::Validation("invariant_part requires group_generators".into()));
    }
    IdealSpec::new(gens, checked).map_err(|e| engine_error("ideal", e))
}

#[derive(Serialize)]
struct LcRow {
    degree: i64,
    status: &'static str,
    dim: Option<usize>,
    invariant_dim: Option<usize>,
    level_reached: Option<u32>,
    dims_per_level: Vec<usize>,
    representatives: Vec<String>,
}

#[derive(Serialize)]
struct LcPayload {
    ideal: Vec<String>,
    i: usize,
    deg_from: i64,
    deg_to: i64,
    invariant_part: bool,
    pieces: Vec<LcRow>,
}

fn lc(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let ring = job.ring()?;
    let group = job_group(job, cache)?;
    let ideal = job_ideal(job, ring, group.as_ref())?;
    // Without invariant_part the action is still reported when it exists.
    let acting = group.as_ref().filter(|g| ideal.require_invariant(g).is_ok());
    let i = job.i.ok_or_else(|| CliError::Validation("lc requires i".into()))?;
    let params = level_params(job)?;
    let (dflt_from, dflt_to) = default_socle_window(&ideal);
    let (deg_from, deg_to) = (job.deg_from.unwrap_or(dflt_from), job.deg_to.unwrap_or(dflt_to));
    if deg_from > deg_to {
        return Err(CliError::Validation(format!("empty degree range {deg_from}..{deg_to}")));
    }
    let results: Vec<_> =
        (deg_from..=deg_to).into_par_iter().map(|d| (d, lc_piece(&ideal, acting, i, d, params))).collect();
    let mut rows = Vec::new();
    let mut unstable = 0;
    for (d, r) in results {
        rows.push(match r {
            Ok(p) => LcRow {
                degree: d,
                status: "Stabilized",
                dim: Some(p.stable_dim),
                invariant_dim: p.invariant_dim,
                level_reached: Some(p.level_reached),
                dims_per_level: p.trace.iter().map(|t| t.dim).collect(),
                representatives: p.render_representatives(&ideal),
            },
            Err(LcError::NotStabilized { dims, .. }) => {
                unstable += 1;
                LcRow {
                    degree: d,
                    status: "NotStabilized",
                    dim: None,
                    invariant_dim: None,
                    level_reached: None,
                    dims_per_level: dims,
                    representatives: Vec::new(),
                }
            }
            Err(e) => return Err(engine_error(&format!("degree {d}"), e)),
        });
    }
    let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let markdown = table(
        &["degree", "status", "dim", "invariant dim", "level"],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.degree.to_string(),
                    r.status.to_string(),
                    show(r.dim),
                    show(r.invariant_dim),
                    r.level_reached.map_or("-".into(), |l| l.to_string()),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let provenance = json!({
        "t_max": params.t_max,
        "window": params.window,
        "levels_reached": rows.iter().map(|r| json!([r.degree, r.level_reached])).collect::<Vec<_>>(),
        "group_order": acting.map(FiniteMatrixGroup::order),
    });
    let payload = LcPayload {
        ideal: ideal.generators().iter().map(ToString::to_string).collect(),
        i,
        deg_from,
        deg_to,
        invariant_part: job.invariant_part,
        pieces: rows,
    };
    let exit_code = if job.require_stable && unstable > 0 { 3 } else { 0 };
    Ok(CommandOutput { payload: to_value(&payload), provenance, markdown, exit_code })
}

#[derive(Serialize)]
struct SoclePayload {
    ideal: Vec<String>,
    i: usize,
    m_generators: Vec<String>,
    invariant_part: bool,
    deg_from: i64,
    deg_to: i64,
    rows: Vec<SocleRow>,
    total: usize,
}

fn socle(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let ring = job.ring()?;
    let group = job_group(job, cache)?;
    let ideal = job_ideal(job, ring, group.as_ref())?;
    let i = job.i.unwrap_or(ring.nvars);
    let params = level_params(job)?;
    let m_generators = if !job.m_gens.is_empty() {
        job.parse_polys(ring, "m generator", &job.m_gens)?
    } else if job.invariant_part {
        // Noether's bound: R^G is generated in degrees up to |G|.
        let g = group.as_ref().expect("checked by job_ideal");
        minimal_generators(g, g.order() as u32).generators.into_iter().map(|(_, p)| p).collect()
    } else {
        (0..ring.nvars).map(|k| ring.var(k)).collect()
    };
    let (dflt_from, dflt_to) = default_socle_window(&ideal);
    let req = SocleRequest {
        i,
        deg_from: job.deg_from.unwrap_or(dflt_from),
        deg_to: job.deg_to.unwrap_or(dflt_to),
        m_generators,
        invariant_part: job.invariant_part,
        params,
    };
    let table_result = socle_dims(&ideal, group.as_ref().filter(|_| job.invariant_part), &req)
        .map_err(|e| engine_error("socle", e))?;
    let markdown = format!(
        "{}\nTotal socle dimension: {}\n",
        table(
            &["degree", "piece dim", "module dim", "socle dim"],
            &table_result
                .rows
                .iter()
                .map(|r| vec![r.degree.to_string(), r.piece_dim.to_string(), r.module_dim.to_string(), r.socle_dim.to_string()])
                .collect::<Vec<_>>(),
        ),
        table_result.total
    );
    let provenance = json!({
        "t_max": params.t_max,
        "window": params.window,
        "levels_reached": table_result.rows.iter().map(|r| json!([r.degree, r.level_reached])).collect::<Vec<_>>(),
    });
    let payload = SoclePayload {
        ideal: ideal.generators().iter().map(ToString::to_string).collect(),
        i,
        m_generators: req.m_generators.iter().map(ToString::to_string).collect(),
        invariant_part: job.invariant_part,
        deg_from: req.deg_from,
        deg_to: req.deg_to,
        total: table_result.total,
        rows: table_result.rows,
    };
    Ok(CommandOutput { payload: to_value(&payload), provenance, markdown, exit_code: 0 })
}

#[derive(Serialize)]
struct ComplexCase {
    case: usize,
    dims: Vec<usize>,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<FixedHomologyRow>>,
}

#[derive(Serialize)]
struct SequenceCase {
    case: usize,
    fixed_dims: [usize; 3],
    exact: bool,
}

#[derive(Serialize)]
struct FixedCommutePayload {
    seed: u64,
    cases: usize,
    max_dim: usize,
    max_length: usize,
    complexes_hold: bool,
    sequences_exact: bool,
    complexes: Vec<ComplexCase>,
    sequences: Vec<SequenceCase>,
}

pub const RANDOM_MAX_DIM: usize = 6;
pub const RANDOM_MAX_LENGTH: usize = 4;

fn verify_fixed_commute(job: &JobSpec, cache: &Cache) -> Result<CommandOutput, CliError> {
    let g = require_group(job, cache, "verify-fixed-commute")?;
    let seed = job.seed.unwrap_or(0);
    let cases = job.cases.unwrap_or(DEFAULT_CASES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut complexes = Vec::with_capacity(cases);
    for case in 0..cases {
        let length = rng.gen_range(1..=RANDOM_MAX_LENGTH);
        let c = random::equivariant_complex(&g, length, RANDOM_MAX_DIM, &mut rng);
        let report = check_fixed_commutes_with_homology(&c).map_err(|e| CliError::Validation(e.to_string()))?;
        complexes.push(ComplexCase {
            case,
            dims: c.complex().dims().to_vec(),
            holds: report.holds,
            rows: (!report.holds).then_some(report.rows),
        });
    }
    let sequences: Vec<SequenceCase> = (0..cases)
        .map(|case| {
            let ses = random::short_exact_sequence(&g, RANDOM_MAX_DIM, &mut rng);
            let r = check_fixed_exactness(&ses);
            SequenceCase { case, fixed_dims: r.fixed_dims, exact: r.exact }
        })
        .collect();
    let complexes_hold = complexes.iter().all(|c| c.holds);
    let sequences_exact = sequences.iter().all(|s| s.exact);
    let markdown = table(
        &["check", "cases", "passed"],
        &[
            vec![
                "dim H_n(C^G) = dim H_n(C)^G".into(),
                cases.to_string(),
                complexes.iter().filter(|c| c.holds).count().to_string(),
            ],
            vec![
                "fixed points of short exact sequences are exact".into(),
                cases.to_string(),
                sequences.iter().filter(|s| s.exact).count().to_string(),
            ],
        ],
    );
    let ok = complexes_hold && sequences_exact;
    let payload = FixedCommutePayload {
        seed,
        cases,
        max_dim: RANDOM_MAX_DIM,
        max_length: RANDOM_MAX_LENGTH,
        complexes_hold,
        sequences_exact,
        complexes,
        sequences,
    };
    Ok(CommandOutput {
        payload: to_value(&payload),
        provenance: json!({ "group_order": g.order(), "rng": "ChaCha8" }),
        markdown,
        exit_code: if ok { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct VerifyPayload {
    suite: String,
    all_match: bool,
    reports: Vec<OracleReport>,
}

fn verify(job: &JobSpec) -> Result<CommandOutput, CliError> {
    let suite = job.suite.clone().unwrap_or_else(|| "all".into());
    if suite != "all" {
        return Err(CliError::Validation(format!("unknown suite {suite:?} (available: all)")));
    }
    let mut config = OracleConfig::default();
    if job.t_max.is_some() || job.window.is_some() {
        config.params = LevelParams {
            t_max: job.t_max.unwrap_or(config.params.t_max),
            window: job.window.unwrap_or(config.params.window),
        };
        config.params.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    }
    if let Some(d) = job.max_deg {
        config.molien_max_deg = d;
    }
    let reports = run_oracle_suite(&config);
    let ok = all_match(&reports);
    let markdown = table(
        &["oracle", "inputs", "engine", "oracle value", "verdict"],
        &reports
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    format!("`{}`", r.inputs),
                    r.engine_value.map_or("error".into(), |v| v.to_string()),
                    r.oracle_value.to_string(),
                    match r.verdict {
                        Verdict::Match => "Match".into(),
                        Verdict::Mismatch => "**Mismatch**".into(),
                    },
                ]
            })
            .collect::<Vec<_>>(),
    );
    let payload = VerifyPayload { suite, all_match: ok, reports };
    Ok(CommandOutput {
        payload: to_value(&payload),
        provenance: json!({ "t_max": config.params.t_max, "window": config.params.window }),
        markdown,
        exit_code: if ok { 0 } else { 1 },
    })
}
