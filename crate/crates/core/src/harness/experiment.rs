//! Threshold choices and the description of one mining run.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::feasibility::Predicate;
use crate::model::{Domain, SupportThreshold};
use crate::reductions::ReductionSpec;

use super::format::{Components, Format};

/// How a run picks its support threshold(s).
#[derive(Clone, PartialEq, Debug)]
pub enum Taus {
    Fixed(usize),
    /// A fraction of the database size, rounded up.
    Fraction(f64),
    /// Every threshold in an inclusive range.
    Range(RangeInclusive<usize>),
}

impl Taus {
    /// Parses `a..b` (inclusive).
    pub fn parse_range(s: &str) -> Result<Taus> {
        let bad = || Error::Usage(format!("threshold range `{s}` is not of the form a..b"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(Error::Usage(format!(
                "threshold range `{s}` is empty or starts at 0"
            )));
        }
        Ok(Taus::Range(a..=b))
    }

    /// The thresholds for a database of `n` transactions.
    pub fn resolve(&self, n: usize) -> Result<Vec<SupportThreshold>> {
        match self {
            Taus::Fixed(t) => Ok(vec![SupportThreshold::new(*t)?]),
            Taus::Fraction(f) => Ok(vec![SupportThreshold::from_fraction(*f, n)?]),
            Taus::Range(r) => r.clone().map(SupportThreshold::new).collect(),
        }
    }
}

impl FromStr for Taus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Taus> {
        if s.contains("..") {
            return Taus::parse_range(s);
        }
        if let Ok(t) = s.parse::<usize>() {
            return Ok(Taus::Fixed(t));
        }
        s.parse::<f64>()
            .map(Taus::Fraction)
            .map_err(|_| Error::Usage(format!("`{s}` is not a threshold")))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub inputs: Vec<PathBuf>,
    pub format: Option<Format>,
    pub domain: Domain,
    pub components: Components,
    pub reduction: Option<ReductionSpec>,
    pub taus: Taus,
    pub phi: Predicate,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(inputs: Vec<PathBuf>, domain: Domain, taus: Taus) -> Self {
        ExperimentSpec {
            inputs,
            format: None,
            domain,
            components: Components::Keep,
            reduction: None,
            taus,
            phi: Predicate::Always,
            output: None,
        }
    }

    pub fn format(&self) -> Format {
        self.format
            .unwrap_or_else(|| Format::default_for(self.domain))
    }

    /// Rejects combinations that cannot run, before any input is read.
    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Usage("no input given".into()));
        }
        let graph = matches!(self.domain, Domain::Graph(_));
        match self.format() {
            Format::Gspan | Format::EdgeList if !graph => {
                return Err(Error::Usage(format!(
                    "format {:?} needs a graph domain",
                    self.format()
                )))
            }
            Format::Lines if graph => {
                return Err(Error::Usage("graphs are read as gspan or edgelist".into()))
            }
            _ => {}
        }
        if self.format() != Format::EdgeList && self.inputs.len() > 1 {
            return Err(Error::Usage("only edge lists accept several inputs".into()));
        }
        self.taus.resolve(1).map(drop)
    }
}
