//! Instance descriptions and matrix payloads.

use serde::{Deserialize, Serialize};

use crate::enumerate::EnumConfig;
use crate::error::{Error, Result};
use crate::localfield::{parse_element, FieldTag, Matrix, SUPPORTED_PRIMES};
use crate::orbital::Lambda;

/// Which group the instance lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Linear,
    Quaternion,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Suite {
    Fl,
    Reduction,
    FuncEq,
    Vanish,
    Factor,
    Edge,
    Par,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Fl,
        Suite::Reduction,
        Suite::FuncEq,
        Suite::Vanish,
        Suite::Factor,
        Suite::Edge,
        Suite::Par,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fl => "FL",
            Suite::Reduction => "REDUCTION",
            Suite::FuncEq => "FUNC_EQ",
            Suite::Vanish => "VANISH",
            Suite::Factor => "FACTOR",
            Suite::Edge => "EDGE",
            Suite::Par => "PAR",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Rows of entries in the element grammar.
pub type MatrixPayload = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInstance {
    pub q: u32,
    pub n: usize,
    pub lambda: Lambda,
    pub side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_linear: Option<MatrixPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_quaternion: Option<MatrixPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl OrbitInstance {
    pub fn linear(q: u32, lambda: Lambda, x: &Matrix) -> Self {
        OrbitInstance {
            q,
            n: x.rows(),
            lambda,
            side: Side::Linear,
            x_linear: Some(to_payload(x)),
            x_quaternion: None,
            precision: None,
            window: None,
            suites: Vec::new(),
            seed: None,
        }
    }

    pub fn quaternion(q: u32, lambda: Lambda, x: &Matrix) -> Self {
        OrbitInstance {
            side: Side::Quaternion,
            x_linear: None,
            x_quaternion: Some(to_payload(x)),
            ..Self::linear(q, lambda, x)
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !SUPPORTED_PRIMES.contains(&self.q) {
            return Err(Error::UnsupportedField { p: self.q, k: 1 });
        }
        if self.n == 0 {
            return Err(Error::DimensionMismatch("n must be positive".into()));
        }
        if self.x_linear.is_none() && self.x_quaternion.is_none() {
            return Err(Error::Parse("instance carries no matrix".into()));
        }
        self.linear_matrix()?;
        self.quaternion_matrix()?;
        Ok(())
    }

    pub fn linear_matrix(&self) -> Result<Option<Matrix>> {
        self.x_linear
            .as_ref()
            .map(|m| parse_matrix(m, self.q, FieldTag::Base, self.n))
            .transpose()
    }

    pub fn quaternion_matrix(&self) -> Result<Option<Matrix>> {
        self.x_quaternion
            .as_ref()
            .map(|m| parse_matrix(m, self.q, FieldTag::Quadratic, self.n))
            .transpose()
    }

    pub fn config(&self) -> EnumConfig {
        let mut cfg = EnumConfig::default();
        if let Some(p) = self.precision {
            cfg.precision = p;
        }
        cfg.window = self.window;
        cfg
    }
}

pub fn parse_matrix(rows: &MatrixPayload, p: u32, tag: FieldTag, n: usize) -> Result<Matrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {n}×{n} matrix"
        )));
    }
    let entries = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_element(s, p, tag))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let gf = entries[0][0].field();
    Matrix::from_rows(gf, entries)
}

/// Parses `"a, b; c, d"` into rows.
pub fn parse_matrix_text(src: &str) -> MatrixPayload {
    src.split(';')
        .map(|r| r.split(',').map(|e| e.trim().to_string()).collect())
        .collect()
}

pub fn to_payload(m: &Matrix) -> MatrixPayload {
    m.to_strings()
}
