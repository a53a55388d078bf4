//! Finite signatures `{M}` with base `mu` and module parameters `xi0`, `xi1`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::weight::WeightValue;
use super::PatternError;

/// A rational value or a formal symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Value(BigRational),
    Symbol,
}

/// `xi0`/`xi1`: `auto` follows the boundary signature value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum XiParam {
    Auto,
    Value(BigRational),
    Symbol,
}

fn parse_rational(s: &str) -> Result<BigRational, PatternError> {
    let s = s.trim();
    BigRational::from_str(s).map_err(|_| PatternError::BadSignature(format!("invalid rational {s:?}")))
}

impl Param {
    fn parse(s: &str) -> Result<Self, PatternError> {
        match s.trim() {
            "sym" => Ok(Param::Symbol),
            other => Ok(Param::Value(parse_rational(other)?)),
        }
    }

    fn render(&self) -> String {
        match self {
            Param::Value(r) => r.to_string(),
            Param::Symbol => "sym".into(),
        }
    }
}

impl XiParam {
    fn parse(s: &str) -> Result<Self, PatternError> {
        match s.trim() {
            "auto" => Ok(XiParam::Auto),
            "sym" => Ok(XiParam::Symbol),
            other => Ok(XiParam::Value(parse_rational(other)?)),
        }
    }

    fn render(&self) -> String {
        match self {
            XiParam::Auto => "auto".into(),
            XiParam::Value(r) => r.to_string(),
            XiParam::Symbol => "sym".into(),
        }
    }
}

/// On-disk form.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct SignatureFile {
    m: i64,
    n: i64,
    offsets: Vec<i64>,
    #[serde(default = "zero_str")]
    mu: String,
    #[serde(default = "auto_str")]
    xi0: String,
    #[serde(default = "auto_str")]
    xi1: String,
}

fn zero_str() -> String {
    "0".into()
}

fn auto_str() -> String {
    "auto".into()
}

/// Non-increasing offsets `c_m >= ... >= c_n`, so that `M_i = mu + c_{clamp(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    m: i64,
    n: i64,
    offsets: Vec<i64>,
    mu: Param,
    xi0: XiParam,
    xi1: XiParam,
}

impl Signature {
    pub fn new(
        m: i64,
        n: i64,
        offsets: Vec<i64>,
        mu: Param,
        xi0: XiParam,
        xi1: XiParam,
    ) -> Result<Self, PatternError> {
        if m > n {
            return Err(PatternError::BadSignature(format!("m = {m} exceeds n = {n}")));
        }
        if offsets.len() as i64 != n - m + 1 {
            return Err(PatternError::BadSignature(format!(
                "expected {} offsets, got {}",
                n - m + 1,
                offsets.len()
            )));
        }
        if let Some(w) = offsets.windows(2).position(|w| w[0] < w[1]) {
            return Err(PatternError::BadSignature(format!(
                "offsets increase at position {w}: {} < {}",
                offsets[w],
                offsets[w + 1]
            )));
        }
        Ok(Signature {
            m,
            n,
            offsets,
            mu,
            xi0,
            xi1,
        })
    }

    /// Signature with `mu = 0` and automatic `xi`.
    pub fn simple(m: i64, n: i64, offsets: Vec<i64>) -> Result<Self, PatternError> {
        Self::new(
            m,
            n,
            offsets,
            Param::Value(BigRational::from_integer(0.into())),
            XiParam::Auto,
            XiParam::Auto,
        )
    }

    pub fn trivial() -> Self {
        Self::simple(0, 0, vec![0]).unwrap()
    }

    /// The signature `M_i = 1` for `i < s`, `0` otherwise.
    pub fn levendorskii_soibelman(s: i64) -> Self {
        Self::simple(s - 1, s, vec![1, 0]).unwrap()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn mu(&self) -> &Param {
        &self.mu
    }

    pub fn xi0_param(&self) -> &XiParam {
        &self.xi0
    }

    pub fn xi1_param(&self) -> &XiParam {
        &self.xi1
    }

    pub fn with_xi(&self, xi0: XiParam, xi1: XiParam) -> Self {
        Signature {
            xi0,
            xi1,
            ..self.clone()
        }
    }

    /// True when both `xi` follow the boundary values.
    pub fn auto_xi(&self) -> bool {
        self.xi0 == XiParam::Auto && self.xi1 == XiParam::Auto
    }

    /// Integer offset `c_i = M_i - mu`.
    pub fn value(&self, i: i64) -> i64 {
        self.offsets[(i.clamp(self.m, self.n) - self.m) as usize]
    }

    /// Row `r` of the highest weight pattern (indices `-floor(r/2) ..= floor((r-1)/2)`).
    pub fn row(&self, r: usize) -> Vec<i64> {
        row_indices(r).map(|i| self.value(i)).collect()
    }

    pub fn mu_weight(&self) -> WeightValue {
        match &self.mu {
            Param::Value(r) => WeightValue::rational(r.clone()),
            Param::Symbol => WeightValue::mu_symbol(),
        }
    }

    /// `M_i` as a weight value.
    pub fn m_weight(&self, i: i64) -> WeightValue {
        &self.mu_weight() + &WeightValue::int(self.value(i))
    }

    pub fn xi0(&self) -> WeightValue {
        match &self.xi0 {
            XiParam::Auto => self.m_weight(self.m),
            XiParam::Value(r) => WeightValue::rational(r.clone()),
            XiParam::Symbol => WeightValue::xi0_symbol(),
        }
    }

    pub fn xi1(&self) -> WeightValue {
        match &self.xi1 {
            XiParam::Auto => self.m_weight(self.n),
            XiParam::Value(r) => WeightValue::rational(r.clone()),
            XiParam::Symbol => WeightValue::xi1_symbol(),
        }
    }

    /// Eigenvalue of the central element, `xi0 - xi1`.
    pub fn central_charge(&self) -> WeightValue {
        &self.xi0() - &self.xi1()
    }

    pub fn from_json(s: &str) -> Result<Self, PatternError> {
        let f: SignatureFile =
            serde_json::from_str(s).map_err(|e| PatternError::BadSignature(e.to_string()))?;
        Self::new(
            f.m,
            f.n,
            f.offsets,
            Param::parse(&f.mu)?,
            XiParam::parse(&f.xi0)?,
            XiParam::parse(&f.xi1)?,
        )
    }

    pub fn to_json(&self) -> String {
        let f = SignatureFile {
            m: self.m,
            n: self.n,
            offsets: self.offsets.clone(),
            mu: self.mu.render(),
            xi0: self.xi0.render(),
            xi1: self.xi1.render(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    /// Short content hash used to label exports.
    pub fn digest(&self) -> String {
        let h = Sha256::digest(self.to_json().as_bytes());
        h.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let offs: Vec<String> = self.offsets.iter().map(|o| o.to_string()).collect();
        write!(
            f,
            "(m,n)=({},{}) offsets=({}) mu={} xi0={} xi1={}",
            self.m,
            self.n,
            offs.join(","),
            self.mu.render(),
            self.xi0.render(),
            self.xi1.render()
        )
    }
}

/// Index range of row `r`.
pub fn row_indices(r: usize) -> std::ops::RangeInclusive<i64> {
    let r = r as i64;
    -(r / 2)..=(r - 1) / 2
}

/// Position of index `i` within row `r`, if present.
pub fn row_position(i: i64, r: usize) -> Option<usize> {
    let range = row_indices(r);
    if range.contains(&i) {
        Some((i - range.start()) as usize)
    } else {
        None
    }
}
