//! JSON documents: series, coefficient tables, Giambelli seeds and reports.
//!
//! Every document is written through `serde_json::Value`, whose maps keep
//! keys sorted, so output is canonical.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use taufn::giambelli::{BkpPairSeed, GiambelliError, KpHookSeed};
use taufn::partitions::{Partition, PartitionError, StrictPartition};
use taufn::rational::ParseRationalError;
use taufn::report::Parameters;
use taufn::series::MAX_VAR;
use taufn::table::{QTable, SchurTable};
use taufn::{
    CheckMode, CheckReport, GradedSeries, Monomial, Rational, SeriesError, SeriesRing, VarKind,
    Witness,
};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational `{0}`: {1}")]
    Rational(String, ParseRationalError),
    #[error("bad variable index `{0}`; expected 1..={max}", max = MAX_VAR)]
    VarIndex(String),
    #[error("bkp series may only use odd variables, found x{0}")]
    EvenVariable(usize),
    #[error("zero exponent on x{0}")]
    ZeroExponent(usize),
    #[error("term of weight {0} exceeds truncation_weight {1}")]
    AboveTruncation(u64, u32),
    #[error("{0} table entry has weight {1} above max_weight {2}")]
    TableWeight(&'static str, u32, u32),
    #[error("duplicate entry for {0}")]
    Duplicate(String),
    #[error("only series in x variables can be written")]
    NotPlain,
    #[error("table basis `{0}` does not match the requested hierarchy")]
    Basis(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Giambelli(#[from] GiambelliError),
}

/// Which hierarchy a document or command refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Hierarchy {
    Kp,
    Bkp,
}

impl Hierarchy {
    pub fn var_kind(self) -> VarKind {
        match self {
            Hierarchy::Kp => VarKind::All,
            Hierarchy::Bkp => VarKind::Odd,
        }
    }

    pub fn of(kind: VarKind) -> Self {
        match kind {
            VarKind::All => Hierarchy::Kp,
            VarKind::Odd => Hierarchy::Bkp,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hierarchy::Kp => "kp",
            Hierarchy::Bkp => "bkp",
        }
    }
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_canonical<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, DocError> {
    Ok(serde_json::from_str(text)?)
}

fn parse_rational(s: &str) -> Result<Rational, DocError> {
    s.parse().map_err(|e| DocError::Rational(s.to_string(), e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exps: BTreeMap<String, u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub kind: Hierarchy,
    pub truncation_weight: u32,
    pub terms: Vec<TermDoc>,
}

impl SeriesDoc {
    pub fn from_series(s: &GradedSeries) -> Result<Self, DocError> {
        if s.has_params() || s.has_y() {
            return Err(DocError::NotPlain);
        }
        let terms = s
            .terms()
            .iter()
            .map(|(m, c)| TermDoc {
                exps: m.x_exps().map(|(n, e)| (n.to_string(), e)).collect(),
                coeff: c.to_string(),
            })
            .collect();
        Ok(SeriesDoc {
            kind: Hierarchy::of(s.kind()),
            truncation_weight: s.truncation(),
            terms,
        })
    }

    pub fn to_series(&self) -> Result<GradedSeries, DocError> {
        let ring = SeriesRing::new(self.kind.var_kind(), self.truncation_weight)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut weight = 0u64;
            let mut vars = Vec::new();
            for (k, &e) in &t.exps {
                let n: usize = k
                    .parse()
                    .ok()
                    .filter(|n| (1..=MAX_VAR).contains(n) && !k.starts_with(['+', '0']))
                    .ok_or_else(|| DocError::VarIndex(k.clone()))?;
                if self.kind == Hierarchy::Bkp && n.is_multiple_of(2) {
                    return Err(DocError::EvenVariable(n));
                }
                if e == 0 {
                    return Err(DocError::ZeroExponent(n));
                }
                weight += n as u64 * e as u64;
                vars.push((n, e));
            }
            if weight > self.truncation_weight as u64 {
                return Err(DocError::AboveTruncation(weight, self.truncation_weight));
            }
            let m = vars
                .into_iter()
                .fold(Monomial::one(), |m, (n, e)| m.mul(&Monomial::x_pow(n, e)));
            terms.push((m, parse_rational(&t.coeff)?));
        }
        Ok(GradedSeries::from_terms(&ring, terms)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "schur")]
    Schur,
    #[serde(rename = "schur-q")]
    SchurQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub partition: Vec<u32>,
    pub value: String,
}

/// Coefficient table; only non-zero entries are written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub basis: Basis,
    pub max_weight: u32,
    pub entries: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Table {
    Schur(SchurTable),
    Q(QTable),
}

impl Table {
    pub fn hierarchy(&self) -> Hierarchy {
        match self {
            Table::Schur(_) => Hierarchy::Kp,
            Table::Q(_) => Hierarchy::Bkp,
        }
    }
}

impl TableDoc {
    pub fn from_schur(t: &SchurTable) -> Self {
        TableDoc {
            basis: Basis::Schur,
            max_weight: t.max_weight(),
            entries: t
                .nonzero()
                .map(|(k, v)| EntryDoc {
                    partition: k.parts().to_vec(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_q(t: &QTable) -> Self {
        TableDoc {
            basis: Basis::SchurQ,
            max_weight: t.max_weight(),
            entries: t
                .nonzero()
                .map(|(k, v)| EntryDoc {
                    partition: k.parts().to_vec(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_table(t: &Table) -> Self {
        match t {
            Table::Schur(t) => Self::from_schur(t),
            Table::Q(t) => Self::from_q(t),
        }
    }

    pub fn to_table(&self) -> Result<Table, DocError> {
        match self.basis {
            Basis::Schur => {
                let mut t = SchurTable::new(self.max_weight);
                let mut seen = std::collections::BTreeSet::new();
                for e in &self.entries {
                    let lam = Partition::new(e.partition.clone())?;
                    self.admit("schur", lam.weight(), &lam.to_string(), &mut seen)?;
                    t.set(lam, parse_rational(&e.value)?);
                }
                Ok(Table::Schur(t))
            }
            Basis::SchurQ => {
                let mut t = QTable::new(self.max_weight);
                let mut seen = std::collections::BTreeSet::new();
                for e in &self.entries {
                    let lam = StrictPartition::new(e.partition.clone())?;
                    self.admit("schur-q", lam.weight(), &lam.to_string(), &mut seen)?;
                    t.set(lam, parse_rational(&e.value)?);
                }
                Ok(Table::Q(t))
            }
        }
    }

    fn admit(
        &self,
        basis: &'static str,
        weight: u32,
        key: &str,
        seen: &mut std::collections::BTreeSet<String>,
    ) -> Result<(), DocError> {
        if weight > self.max_weight {
            return Err(DocError::TableWeight(basis, weight, self.max_weight));
        }
        if !seen.insert(key.to_string()) {
            return Err(DocError::Duplicate(key.to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HookDoc {
    pub arm: u32,
    pub leg: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KpSeedDoc {
    pub hooks: Vec<HookDoc>,
}

impl KpSeedDoc {
    pub fn from_seed(seed: &KpHookSeed) -> Self {
        KpSeedDoc {
            hooks: seed
                .iter()
                .map(|(&(arm, leg), v)| HookDoc {
                    arm,
                    leg,
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_seed(&self) -> Result<KpHookSeed, DocError> {
        let mut seed = KpHookSeed::new();
        let mut seen = std::collections::BTreeSet::new();
        for h in &self.hooks {
            if !seen.insert((h.arm, h.leg)) {
                return Err(DocError::Duplicate(format!("({}|{})", h.arm, h.leg)));
            }
            seed.insert(h.arm, h.leg, parse_rational(&h.value)?);
        }
        Ok(seed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleDoc {
    pub row: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub rows: [u32; 2],
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BkpSeedDoc {
    pub singles: Vec<SingleDoc>,
    pub pairs: Vec<PairDoc>,
}

impl BkpSeedDoc {
    pub fn from_seed(seed: &BkpPairSeed) -> Self {
        BkpSeedDoc {
            singles: seed
                .singles()
                .map(|(&row, v)| SingleDoc {
                    row,
                    value: v.to_string(),
                })
                .collect(),
            pairs: seed
                .pairs()
                .map(|(&(a, b), v)| PairDoc {
                    rows: [a, b],
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_seed(&self) -> Result<BkpPairSeed, DocError> {
        let mut seed = BkpPairSeed::new();
        let mut rows = std::collections::BTreeSet::new();
        let mut pairs = std::collections::BTreeSet::new();
        for s in &self.singles {
            if !rows.insert(s.row) {
                return Err(DocError::Duplicate(format!("({})", s.row)));
            }
            seed.insert_single(s.row, parse_rational(&s.value)?)?;
        }
        for p in &self.pairs {
            if !pairs.insert(p.rows) {
                return Err(DocError::Duplicate(format!(
                    "({},{})",
                    p.rows[0], p.rows[1]
                )));
            }
            seed.insert_pair(p.rows[0], p.rows[1], parse_rational(&p.value)?)?;
        }
        Ok(seed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Graded,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => CheckMode::Exact,
            Mode::Graded => CheckMode::Graded,
        }
    }
}

impl From<CheckMode> for Mode {
    fn from(m: CheckMode) -> Self {
        match m {
            CheckMode::Exact => Mode::Exact,
            CheckMode::Graded => Mode::Graded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub monomial: String,
    pub residual: String,
    pub weight: Option<u32>,
    pub sample: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleValueDoc {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ParametersDoc {
    Formal(Vec<String>),
    Samples(Vec<Vec<SampleValueDoc>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub identity: String,
    pub mode: Mode,
    pub guaranteed_weight: Option<u32>,
    pub pass: bool,
    pub failures: Vec<WitnessDoc>,
    pub parameters: Option<ParametersDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ReportDoc {
    /// `timing` controls whether the (non-reproducible) elapsed time is kept.
    pub fn from_report(r: &CheckReport, timing: bool) -> Self {
        let parameters = match &r.parameters {
            Parameters::None => None,
            Parameters::Formal(names) => Some(ParametersDoc::Formal(names.clone())),
            Parameters::Samples(samples) => Some(ParametersDoc::Samples(
                samples
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|(name, v)| SampleValueDoc {
                                name: name.clone(),
                                value: v.to_string(),
                            })
                            .collect()
                    })
                    .collect(),
            )),
        };
        ReportDoc {
            identity: r.identity.clone(),
            mode: r.mode.into(),
            guaranteed_weight: r.guaranteed_weight,
            pass: r.pass,
            failures: r
                .failures
                .iter()
                .map(|w| WitnessDoc {
                    monomial: w.monomial.clone(),
                    residual: w.residual.to_string(),
                    weight: w.weight,
                    sample: w.sample,
                })
                .collect(),
            parameters,
            convention: r.convention.clone(),
            elapsed_ms: timing.then_some(r.elapsed.as_millis() as u64),
        }
    }

    pub fn to_report(&self) -> Result<CheckReport, DocError> {
        let parameters = match &self.parameters {
            None => Parameters::None,
            Some(ParametersDoc::Formal(names)) => Parameters::Formal(names.clone()),
            Some(ParametersDoc::Samples(samples)) => Parameters::Samples(
                samples
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|v| Ok((v.name.clone(), parse_rational(&v.value)?)))
                            .collect::<Result<Vec<_>, DocError>>()
                    })
                    .collect::<Result<_, _>>()?,
            ),
        };
        let failures = self
            .failures
            .iter()
            .map(|w| {
                Ok(Witness {
                    monomial: w.monomial.clone(),
                    weight: w.weight,
                    residual: parse_rational(&w.residual)?,
                    sample: w.sample,
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        let mut r = CheckReport::new(
            self.identity.clone(),
            self.mode.into(),
            self.guaranteed_weight,
        )
        .with_parameters(parameters);
        r.pass = self.pass;
        r.failures = failures;
        r.convention = self.convention.clone();
        r.elapsed = Duration::from_millis(self.elapsed_ms.unwrap_or(0));
        Ok(r)
    }
}
