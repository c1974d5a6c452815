//! Structured verdicts of identity checks.

use std::fmt;
use std::time::{Duration, Instant};

use crate::rational::Rational;
use crate::series::GradedSeries;

/// Witnesses kept per report; the verdict itself does not depend on the cap.
pub const MAX_WITNESSES: usize = 8;

/// How parameters enter an identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckMode {
    /// Random rational parameter values; exact for polynomial `τ`.
    Exact,
    /// Formal weight-1 parameters; exact modulo the guaranteed weight.
    Graded,
}

impl CheckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Exact => "exact",
            CheckMode::Graded => "graded",
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A non-vanishing residual coefficient, or a violated table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Rendered monomial (or index, for coefficient-table checks).
    pub monomial: String,
    pub weight: Option<u32>,
    pub residual: Rational,
    /// Index into the parameter samples, in exact mode.
    pub sample: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Parameters {
    #[default]
    None,
    Formal(Vec<String>),
    Samples(Vec<Vec<(String, Rational)>>),
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub identity: String,
    pub mode: CheckMode,
    /// Weight through which the verdict is exact; `None` in exact mode.
    pub guaranteed_weight: Option<u32>,
    pub pass: bool,
    pub failures: Vec<Witness>,
    pub parameters: Parameters,
    pub convention: Option<String>,
    pub elapsed: Duration,
}

impl PartialEq for CheckReport {
    // Timing is not part of the verdict.
    fn eq(&self, other: &Self) -> bool {
        self.identity == other.identity
            && self.mode == other.mode
            && self.guaranteed_weight == other.guaranteed_weight
            && self.pass == other.pass
            && self.failures == other.failures
            && self.parameters == other.parameters
            && self.convention == other.convention
    }
}

impl CheckReport {
    pub fn new(
        identity: impl Into<String>,
        mode: CheckMode,
        guaranteed_weight: Option<u32>,
    ) -> Self {
        CheckReport {
            identity: identity.into(),
            mode,
            guaranteed_weight,
            pass: true,
            failures: Vec::new(),
            parameters: Parameters::None,
            convention: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_parameters(mut self, parameters: Parameters) -> Self {
        self.parameters = parameters;
        self
    }

    pub fn with_convention(mut self, convention: &str) -> Self {
        self.convention = Some(convention.to_string());
        self
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.elapsed = started.elapsed();
        self
    }

    pub fn add_failure(&mut self, w: Witness) {
        self.pass = false;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(w);
        }
    }

    /// Records every term of `residual` up to `max_weight` as a failure.
    /// Terms come out in graded order, so the first witness is of lowest
    /// weight.
    pub fn absorb_residual(
        &mut self,
        residual: &GradedSeries,
        max_weight: Option<u32>,
        sample: Option<usize>,
    ) {
        for (m, c) in residual.terms() {
            if max_weight.is_some_and(|w| m.weight() > w) {
                break;
            }
            self.add_failure(Witness {
                monomial: residual.render_monomial(m),
                weight: Some(m.weight()),
                residual: c.clone(),
                sample,
            });
            if self.failures.len() >= MAX_WITNESSES {
                return;
            }
        }
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.failures.first()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}",
            self.identity,
            self.mode,
            if self.pass { "pass" } else { "FAIL" }
        )?;
        if let Some(w) = self.guaranteed_weight {
            write!(f, " (through weight {w})")?;
        }
        if let Some(w) = self.first_failure() {
            write!(f, ": {} -> {}", w.monomial, w.residual)?;
        }
        Ok(())
    }
}
