use std::fmt;

use clap::ValueEnum;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::group::{FiniteMatrixGroup, SquareMatrix, DEFAULT_MAX_ORDER};
use crate::linalg::Matrix;
use crate::polyring::{Polynomial, Ring};
use crate::scalars::Field;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GroupInfo,
    Molien,
    Invariants,
    Lc,
    Socle,
    VerifyFixedCommute,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GroupInfo => "group-info",
            Command::Molien => "molien",
            Command::Invariants => "invariants",
            Command::Lc => "lc",
            Command::Socle => "socle",
            Command::VerifyFixedCommute => "verify-fixed-commute",
            Command::Verify => "verify",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Command, CliError> {
        Command::value_variants()
            .iter()
            .find(|c| c.name() == s.trim())
            .copied()
            .ok_or_else(|| CliError::Validation(format!("unknown command {s:?}")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A matrix entry written either as a JSON number or a string like `"1/2"`;
/// always emitted as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry(pub String);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Entry, D::Error> {
        struct EntryVisitor;
        impl Visitor<'_> for EntryVisitor {
            type Value = Entry;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string such as \"-1/2\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(v.to_string()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                Ok(Entry(v.to_string()))
            }
        }
        d.deserialize_any(EntryVisitor)
    }
}

/// A job file. Every field is optional; command-line flags override them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Generator matrices, row by row.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub group_generators: Vec<Vec<Vec<Entry>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ideal: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_from: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_to: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deg: Option<u32>,
    #[serde(skip_serializing_if = "is_false")]
    pub invariant_part: bool,
    #[serde(skip_serializing_if = "is_false")]
    pub require_stable: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m_gens: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// `Q`, `QQ`, `GF(p)`, `GFp`, or a bare prime `p`.
pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("qq") {
        return Ok(Field::Rationals);
    }
    let digits = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("GF"))
        .unwrap_or(t);
    let p: u64 = digits
        .parse()
        .map_err(|_| CliError::Validation(format!("field {s:?}: expected Q, GF(p) or a prime")))?;
    Field::prime(p).map_err(|e| CliError::Validation(format!("field {s:?}: {e}")))
}

/// `"0,-1;1,0"`: rows separated by `;`, entries by `,`.
pub fn parse_matrix_flag(s: &str) -> Vec<Vec<Entry>> {
    s.split(';')
        .map(|row| row.split(',').map(|e| Entry(e.trim().to_string())).collect())
        .collect()
}

/// Comma-separated polynomial list.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::JobFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }

    pub fn field(&self) -> Field {
        self.field.unwrap_or(Field::Rationals)
    }

    /// Number of variables: explicit, or the size of the generators.
    pub fn nvars(&self) -> Result<usize, CliError> {
        match (self.n, self.group_generators.first()) {
            (Some(n), Some(g)) if g.len() != n => Err(CliError::Validation(format!(
                "n = {n} but the first group generator is {}x{}",
                g.len(),
                g.first().map_or(0, Vec::len)
            ))),
            (Some(n), _) => Ok(n),
            (None, Some(g)) => Ok(g.len()),
            (None, None) => Err(CliError::Validation("the number of variables n is required".into())),
        }
    }

    pub fn ring(&self) -> Result<Ring, CliError> {
        Ok(Ring::new(self.nvars()?, self.field()))
    }

    pub fn generator_matrices(&self) -> Result<Vec<SquareMatrix>, CliError> {
        let field = self.field();
        let n = self.nvars()?;
        self.group_generators
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let context = format!("group generator {}", k + 1);
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Validation(format!("{context} is not {n}x{n}")));
                }
                let mut m = Matrix::zeros(field, n, n);
                for (r, row) in rows.iter().enumerate() {
                    for (c, e) in row.iter().enumerate() {
                        m[(r, c)] = field.parse_scalar(&e.0).map_err(|err| {
                            CliError::Validation(format!("{context}, entry ({}, {}) {:?}: {err}", r + 1, c + 1, e.0))
                        })?;
                    }
                }
                SquareMatrix::new(m).map_err(|err| CliError::Validation(format!("{context}: {err}")))
            })
            .collect()
    }

    pub fn max_order(&self) -> usize {
        self.max_order.unwrap_or(DEFAULT_MAX_ORDER)
    }

    pub fn parse_polys(&self, ring: Ring, what: &str, list: &[String]) -> Result<Vec<Polynomial>, CliError> {
        list.iter()
            .enumerate()
            .map(|(k, s)| {
                ring.parse(s).map_err(|source| CliError::Parse { context: format!("{what} {} {s:?}", k + 1), source })
            })
            .collect()
    }

    /// Parses every field and re-emits it in canonical form.
    pub fn canonical(&self) -> Result<JobSpec, CliError> {
        let mut out = self.clone();
        if self.n.is_some() || !self.group_generators.is_empty() || !self.ideal.is_empty() || !self.m_gens.is_empty() {
            let ring = self.ring()?;
            out.n = Some(ring.nvars);
            out.group_generators = self
                .generator_matrices()?
                .iter()
                .map(|g| {
                    (0..g.n())
                        .map(|r| (0..g.n()).map(|c| Entry(g.entry(r, c).to_string())).collect())
                        .collect()
                })
                .collect();
            out.ideal = self.parse_polys(ring, "ideal generator", &self.ideal)?.iter().map(|p| p.to_string()).collect();
            out.m_gens = self.parse_polys(ring, "m generator", &self.m_gens)?.iter().map(|p| p.to_string()).collect();
        }
        out.field = Some(self.field());
        Ok(out)
    }

    pub fn group(&self) -> Result<Option<FiniteMatrixGroup>, CliError> {
        if self.group_generators.is_empty() {
            return Ok(None);
        }
        let gens = self.generator_matrices()?;
        FiniteMatrixGroup::close(&gens, self.max_order())
            .map(Some)
            .map_err(|e| CliError::Validation(format!("group generators: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::value_variants() {
            assert_eq!(c.name().parse::<Command>().unwrap(), *c);
        }
        assert!("lcc".parse::<Command>().is_err());
    }

    #[test]
    fn field_flags() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rationals);
        assert_eq!(parse_field("GF(7)").unwrap(), Field::Prime(7));
        assert_eq!(parse_field("GF7").unwrap(), Field::Prime(7));
        assert_eq!(parse_field("11").unwrap(), Field::Prime(11));
        assert!(parse_field("GF(8)").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{
            "command": "lc",
            "field": {"kind": "GFp", "p": 7},
            "group_generators": [[[2, "0"], [0, 9]]],
            "ideal": ["x^3", " y * y^2 "],
            "i": 2
        }"#;
        let job = JobSpec::from_json(text).unwrap();
        let canon = job.canonical().unwrap();
        assert_eq!(canon.ideal, vec!["x^3".to_string(), "y^3".to_string()]);
        assert_eq!(canon.group_generators[0][1][1], Entry("2".into()));
        assert_eq!(canon.n, Some(2));
        let again = JobSpec::from_json(&canon.to_json()).unwrap().canonical().unwrap();
        assert_eq!(again, canon);
        assert_eq!(again.to_json(), canon.to_json());
    }

    #[test]
    fn unknown_fields_and_bad_entries() {
        assert!(matches!(JobSpec::from_json(r#"{"idea": []}"#), Err(CliError::JobFile(_))));
        let job = JobSpec { n: Some(2), group_generators: vec![parse_matrix_flag("1,x;0,1")], ..JobSpec::default() };
        let err = job.group().unwrap_err().to_string();
        assert!(err.contains("entry (1, 2)") && err.contains("\"x\""), "{err}");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let job = JobSpec { n: Some(2), ideal: vec!["x^^2".into()], ..JobSpec::default() };
        match job.canonical().unwrap_err() {
            CliError::Parse { context, source } => {
                assert_eq!(source.column, 3);
                assert!(context.contains("x^^2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
