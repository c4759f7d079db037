//! Named verification suites producing one row per check.

mod algebra;
mod dg;
mod lifts;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A measured fact that is reported but not required.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub weight: Option<usize>,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Words,
    Lie,
    Signs,
    Colie,
    Models,
    Bar,
    Lifts,
    Edqx,
    Basis,
    Audit,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::Words,
        Suite::Lie,
        Suite::Signs,
        Suite::Colie,
        Suite::Models,
        Suite::Bar,
        Suite::Lifts,
        Suite::Edqx,
        Suite::Basis,
        Suite::Audit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Words => "words",
            Suite::Lie => "lie",
            Suite::Signs => "signs",
            Suite::Colie => "colie",
            Suite::Models => "models",
            Suite::Bar => "bar",
            Suite::Lifts => "lifts",
            Suite::Edqx => "edqx",
            Suite::Basis => "basis",
            Suite::Audit => "audit",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub max_weight: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_weight: 5, seed: 42, samples: 50 }
    }
}

/// Rows collected while a suite runs.
#[derive(Default)]
pub(crate) struct Rows(Vec<CheckRow>);

impl Rows {
    pub(crate) fn check(&mut self, check: impl Into<String>, weight: Option<usize>, ok: bool, witness: impl FnOnce() -> Value) {
        let (status, witness) = if ok { (Status::Pass, Value::Null) } else { (Status::Fail, witness()) };
        self.0.push(CheckRow { check: check.into(), weight, status, witness });
    }

    /// A check whose witness is kept even when it passes.
    pub(crate) fn check_with(&mut self, check: impl Into<String>, weight: Option<usize>, ok: bool, witness: Value) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(CheckRow { check: check.into(), weight, status, witness });
    }

    pub(crate) fn info(&mut self, check: impl Into<String>, weight: Option<usize>, witness: Value) {
        self.0.push(CheckRow { check: check.into(), weight, status: Status::Info, witness });
    }

    /// Records an error from a computation that should have succeeded.
    pub(crate) fn error(&mut self, check: impl Into<String>, weight: Option<usize>, e: &Error) {
        self.0.push(CheckRow { check: check.into(), weight, status: Status::Fail, witness: Value::String(e.to_string()) });
    }
}

/// Runs one suite (or every suite, in order).
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    if cfg.max_weight < 2 {
        return Err(Error::InvalidInput("suites need max_weight >= 2".into()));
    }
    let mut rows = Rows::default();
    let selected: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    for s in selected {
        match s {
            Suite::Words => algebra::words(cfg, &mut rows),
            Suite::Lie => algebra::lie(cfg, &mut rows),
            Suite::Colie => algebra::colie(cfg, &mut rows)?,
            Suite::Signs => dg::signs(cfg, &mut rows),
            Suite::Models => dg::models(cfg, &mut rows)?,
            Suite::Bar => dg::bar(cfg, &mut rows)?,
            Suite::Lifts => lifts::lifts(cfg, &mut rows)?,
            Suite::Edqx => lifts::edqx(cfg, &mut rows)?,
            Suite::Basis => lifts::basis(cfg, &mut rows)?,
            Suite::Audit => lifts::audit(cfg, &mut rows)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(rows.0)
}

/// True when no row failed.
pub fn all_passed(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_weight_three() {
        let cfg = SuiteConfig { max_weight: 3, samples: 10, ..SuiteConfig::default() };
        let rows = run_suite(Suite::All, &cfg).unwrap();
        let failed: Vec<_> = rows.iter().filter(|r| r.status == Status::Fail).map(|r| &r.check).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
