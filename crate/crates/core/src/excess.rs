//! All four excess values of an instance, with their minimisers.

use std::fmt;

use crate::cut::{self, CutBound, CutCertificate, Scan, SeparatedDemandTable};
use crate::dual::{DistanceTable, DualGraph};
use crate::ext::Ext;
use crate::instance::Instance;
use crate::metric::{self, MetricBound, MetricCertificate, MetricError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Cut terms only; the metric value is reported as `+inf`.
    pub skip_metric: bool,
    pub max_quad: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Cut(CutCertificate),
    Metric(MetricCertificate),
}

impl Certificate {
    pub fn value(&self) -> i64 {
        match self {
            Certificate::Cut(c) => c.value(),
            Certificate::Metric(m) => m.value(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Cut(c) => c.fmt(f),
            Certificate::Metric(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcessReport {
    pub mu1: CutBound,
    pub nu2: CutBound,
    pub nu3: CutBound,
    pub mu_hat: MetricBound,
    pub metric_skipped: bool,
}

impl ExcessReport {
    pub fn values(&self) -> [Ext; 4] {
        [self.mu1.value, self.nu2.value, self.nu3.value, self.mu_hat.value]
    }

    pub fn cut_min(&self) -> Ext {
        self.mu1.value.min(self.nu2.value).min(self.nu3.value)
    }

    pub fn min(&self) -> Ext {
        self.cut_min().min(self.mu_hat.value)
    }

    pub fn is_violated(&self) -> bool {
        self.min().is_negative()
    }

    /// The cut condition is checked first: a violated cut is reported even
    /// when some metric is violated by more. Otherwise the minimiser of
    /// `min()`, cuts winning ties.
    pub fn certificate(&self) -> Option<Certificate> {
        let cm = self.cut_min();
        let m = if cm.is_negative() { cm } else { self.min() };
        if !m.is_finite() {
            return None;
        }
        [&self.mu1, &self.nu2, &self.nu3]
            .into_iter()
            .find(|b| b.value == m)
            .and_then(|b| b.certificate.clone().map(Certificate::Cut))
            .or_else(|| self.mu_hat.certificate.clone().map(Certificate::Metric))
    }
}

impl fmt::Display for ExcessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mu1 {}", self.mu1.value)?;
        writeln!(f, "nu2 {}", self.nu2.value)?;
        writeln!(f, "nu3 {}", self.nu3.value)?;
        if self.metric_skipped {
            writeln!(f, "mu_hat skipped")?;
        } else {
            writeln!(f, "mu_hat {}", self.mu_hat.value)?;
        }
        writeln!(f, "min {}", self.min())?;
        if let Some(c) = self.certificate() {
            writeln!(f, "certificate {c}")?;
        }
        let verdict = if self.is_violated() { "INFEASIBLE" } else { "OK" };
        write!(f, "verdict {verdict}")
    }
}

/// Dual, distances and demand tables of one instance state.
pub struct Checker {
    pub dual: DualGraph,
    pub dist: DistanceTable,
    pub demand: SeparatedDemandTable,
}

impl Checker {
    /// The instance must have isthmus-free hole boundaries.
    pub fn new(inst: &Instance) -> Self {
        let dual = DualGraph::build(inst);
        let dist = dual.terminal_distances();
        let demand = SeparatedDemandTable::new(inst, &dual.boundaries);
        Checker { dual, dist, demand }
    }

    pub fn scan(&self) -> Scan<'_> {
        Scan {
            dual: &self.dual,
            dist: &self.dist,
            demand: &self.demand,
        }
    }

    pub fn report(&self, opts: CheckOptions) -> Result<ExcessReport, MetricError> {
        let scan = self.scan();
        let mu_hat = if opts.skip_metric {
            MetricBound {
                value: Ext::Infinite,
                certificate: None,
            }
        } else {
            metric::mu_hat(&scan, opts.max_quad)?
        };
        Ok(ExcessReport {
            mu1: cut::mu1(&scan),
            nu2: cut::nu2(&scan),
            nu3: cut::nu3(&scan),
            mu_hat,
            metric_skipped: opts.skip_metric,
        })
    }

    /// Cut terms relevant to at most two holes: `mu1`, plus `nu2` for two.
    pub fn cut_min_base(&self) -> (Ext, Option<CutCertificate>) {
        let scan = self.scan();
        let mut best = cut::mu1(&scan);
        let n2 = cut::nu2(&scan);
        if n2.value < best.value {
            best = n2;
        }
        (best.value, best.certificate)
    }
}

/// Full report of an isthmus-free instance. Finite values of an Eulerian
/// instance are even.
pub fn check(inst: &Instance, opts: CheckOptions) -> Result<ExcessReport, MetricError> {
    let report = Checker::new(inst).report(opts)?;
    if inst.is_eulerian() {
        for v in report.values() {
            if let Ext::Finite(x) = v {
                debug_assert!(x % 2 == 0, "odd excess {x} on an Eulerian instance");
            }
        }
    }
    Ok(report)
}
