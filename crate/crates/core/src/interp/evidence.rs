use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm {
    pub c: Rational,
    pub t: Rational,
}

/// Nonnegative weights on moment vectors reproducing the divided differences.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConeCertificate {
    pub terms: Vec<CertTerm>,
}

/// Separating functional: `sum a_i v_i = -1` with `sum a_i M_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub a: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationReport {
    pub rounds: usize,
    pub cuts: usize,
    pub radius: Rational,
    pub margin: Option<Rational>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Interpolable(ConeCertificate),
    NonInterpolable(Witness),
    Undecided(IterationReport),
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Interpolable(_) => "interpolable",
            Verdict::NonInterpolable(_) => "noninterpolable",
            Verdict::Undecided(_) => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertTermJson {
    pub c: String,
    pub t: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub terms: Vec<CertTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub a: Vec<String>,
}

/// Status plus whichever evidence applies.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictJson {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<CertTermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

impl ConeCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            terms: self
                .terms
                .iter()
                .map(|t| CertTermJson { c: format_rational(&t.c), t: format_rational(&t.t) })
                .collect(),
        }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok(CertTerm { c: parse_rational(&t.c)?, t: parse_rational(&t.t)? }))
            .collect::<Result<_>>()?;
        Ok(ConeCertificate { terms })
    }
}

impl Witness {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson { a: self.a.iter().map(format_rational).collect() }
    }

    pub fn from_json(j: &WitnessJson) -> Result<Self> {
        Ok(Witness { a: parse_all(&j.a)? })
    }

    /// `max |a_i|`.
    pub fn sup_norm(&self) -> Rational {
        self.a.iter().map(num_traits::Signed::abs).max().unwrap_or_default()
    }
}

impl Verdict {
    pub fn to_json(&self) -> VerdictJson {
        let mut j = VerdictJson {
            status: self.status().to_string(),
            terms: None,
            a: None,
            rounds: None,
            cuts: None,
            radius: None,
            reason: None,
        };
        match self {
            Verdict::Interpolable(c) => j.terms = Some(c.to_json().terms),
            Verdict::NonInterpolable(w) => j.a = Some(w.to_json().a),
            Verdict::Undecided(r) => {
                j.rounds = Some(r.rounds);
                j.cuts = Some(r.cuts);
                j.radius = Some(format_rational(&r.radius));
                j.reason = Some(r.reason.clone());
            }
        }
        j
    }

    pub fn from_json(j: &VerdictJson) -> Result<Self> {
        match j.status.as_str() {
            "interpolable" => Ok(Verdict::Interpolable(ConeCertificate::from_json(&CertificateJson {
                terms: j.terms.clone().unwrap_or_default(),
            })?)),
            "noninterpolable" => {
                let a = j.a.as_ref().ok_or_else(|| Error::Parse("noninterpolable verdict without `a`".into()))?;
                Ok(Verdict::NonInterpolable(Witness { a: parse_all(a)? }))
            }
            "undecided" => Ok(Verdict::Undecided(IterationReport {
                rounds: j.rounds.unwrap_or(0),
                cuts: j.cuts.unwrap_or(0),
                radius: j.radius.as_deref().map(parse_rational).transpose()?.unwrap_or_default(),
                margin: None,
                reason: j.reason.clone().unwrap_or_default(),
            })),
            other => Err(Error::Parse(format!("unknown status `{other}`"))),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("verdict serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: VerdictJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

/// Reads a verdict, a bare certificate, or a bare witness.
pub fn parse_evidence(s: &str) -> Result<Verdict> {
    let value: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("status").is_some() {
        return Verdict::from_json_str(s);
    }
    if value.get("terms").is_some() {
        let j: CertificateJson = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(Verdict::Interpolable(ConeCertificate::from_json(&j)?));
    }
    if value.get("a").is_some() {
        let j: WitnessJson = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(Verdict::NonInterpolable(Witness::from_json(&j)?));
    }
    Err(Error::Parse("expected a verdict, certificate or witness".into()))
}
