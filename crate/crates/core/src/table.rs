//! The fusion table: lower bounds from the group side, upper bounds from
//! the Zhu bimodule, verdicts per triple, and the symmetry checks.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::config::{parse_scalar, ConfigError, GroupConfig, Registry};
use crate::modes::ModuleParams;
use crate::zhu::fusion_upper_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Lower and upper bounds agree.
    Determined,
    /// Lower bound strictly below the upper bound.
    Gap,
    /// Lower bound above the upper bound: the inputs are inconsistent.
    Violated,
}

impl Verdict {
    fn of(lower: usize, upper: usize) -> Self {
        match lower.cmp(&upper) {
            std::cmp::Ordering::Equal => Verdict::Determined,
            std::cmp::Ordering::Less => Verdict::Gap,
            std::cmp::Ordering::Greater => Verdict::Violated,
        }
    }
}

/// Bounds on `N(l3; l1, l2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionBoundReport {
    pub l1: String,
    pub l2: String,
    pub l3: String,
    pub lower: usize,
    pub upper: usize,
    pub verdict: Verdict,
    /// `l3` is a configured twisted-sector candidate.
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleError {
    pub l1: String,
    pub l2: String,
    pub l3: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistedStatus {
    NotChecked,
    Checked { candidates: usize, excluded: usize, total: usize },
}

#[derive(Clone, Debug)]
pub struct FusionTable {
    pub modules: Vec<String>,
    pub reports: Vec<FusionBoundReport>,
    pub errors: Vec<TripleError>,
    pub twisted: TwistedStatus,
}

impl FusionTable {
    pub fn get(&self, l1: &str, l2: &str, l3: &str) -> Option<&FusionBoundReport> {
        self.reports.iter().find(|r| r.l1 == l1 && r.l2 == l2 && r.l3 == l3)
    }

    /// The fusion rule if it is determined.
    pub fn multiplicity(&self, l1: &str, l2: &str, l3: &str) -> Option<usize> {
        self.get(l1, l2, l3).filter(|r| r.verdict == Verdict::Determined).map(|r| r.lower)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn has_violation(&self) -> bool {
        self.count(Verdict::Violated) > 0
    }
}

/// A twisted-sector module used only as a candidate `L³`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedModule {
    pub name: String,
    pub params: ModuleParams,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedFile {
    #[serde(default, rename = "module")]
    modules: Vec<TwistedEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedEntry {
    name: String,
    h: String,
    k: String,
}

pub fn load_twisted(path: &Path) -> Result<Vec<TwistedModule>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    let file: TwistedFile = toml::from_str(&text).map_err(|source| ConfigError::Toml { path: path.into(), source })?;
    file.modules
        .into_iter()
        .map(|e| {
            let ctx = format!("twisted module {}", e.name);
            Ok(TwistedModule { params: ModuleParams::new(parse_scalar(&ctx, &e.h)?, parse_scalar(&ctx, &e.k)?), name: e.name })
        })
        .collect()
}

/// Bounds for every ordered pair `(L¹, L²)` of registry modules and every
/// candidate `L³` among the registry modules and the twisted candidates.
pub fn build_table(registry: &Registry, group: &GroupConfig, twisted: &[TwistedModule]) -> FusionTable {
    let names = registry.names();
    let mut jobs = Vec::new();
    for &a in &names {
        for &b in &names {
            for &c in &names {
                jobs.push((a, b, c, None));
            }
            for t in twisted {
                jobs.push((a, b, t.name.as_str(), Some(&t.params)));
            }
        }
    }
    let results: Vec<Result<FusionBoundReport, TripleError>> = jobs
        .par_iter()
        .map(|&(l1, l2, l3, tw)| {
            let fail = |message: String| TripleError { l1: l1.into(), l2: l2.into(), l3: l3.into(), message };
            let m1 = registry.get(l1).map_err(|e| fail(e.to_string()))?;
            let m2 = registry.get(l2).map_err(|e| fail(e.to_string()))?;
            let left = match tw {
                Some(p) => p.clone(),
                None => registry.get(l3).map_err(|e| fail(e.to_string()))?.params.clone(),
            };
            let upper = fusion_upper_bound(&m1.zhu, &left, &m2.params).map_err(|e| fail(e.to_string()))?.bound;
            let lower = match tw {
                Some(_) => 0,
                None => group.lower_bound(l1, l2, l3).map_err(|e| fail(e.to_string()))?,
            };
            Ok(FusionBoundReport {
                l1: l1.into(),
                l2: l2.into(),
                l3: l3.into(),
                lower,
                upper,
                verdict: Verdict::of(lower, upper),
                twisted: tw.is_some(),
            })
        })
        .collect();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(e),
        }
    }
    let twisted_status = if twisted.is_empty() {
        TwistedStatus::NotChecked
    } else {
        let tw: Vec<&FusionBoundReport> = reports.iter().filter(|r| r.twisted).collect();
        TwistedStatus::Checked {
            candidates: twisted.len(),
            excluded: tw.iter().filter(|r| r.upper == 0).count(),
            total: tw.len(),
        }
    };
    FusionTable { modules: names.iter().map(|s| s.to_string()).collect(), reports, errors, twisted: twisted_status }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetryReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

/// `N(L³; L¹, L²) = N(L³; L², L¹) = N((L²)′; L¹, (L³)′)` on determined entries.
pub fn check_symmetries(table: &FusionTable, registry: &Registry) -> Result<SymmetryReport, ConfigError> {
    let mut report = SymmetryReport::default();
    for r in table.reports.iter().filter(|r| !r.twisted && r.verdict == Verdict::Determined) {
        let n = r.lower;
        let swap = table.multiplicity(&r.l2, &r.l1, &r.l3);
        let d2 = registry.dual(&r.l2)?;
        let d3 = registry.dual(&r.l3)?;
        let flip = table.multiplicity(&r.l1, d3, d2);
        for (what, other) in [
            (format!("N({}; {}, {})", r.l3, r.l2, r.l1), swap),
            (format!("N({}; {}, {})", d2, r.l1, d3), flip),
        ] {
            if let Some(m) = other {
                report.checked += 1;
                if m != n {
                    report.violations.push(format!("N({}; {}, {}) = {n} but {what} = {m}", r.l3, r.l1, r.l2));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

/// Text: one `L¹ x L² = …` line per unordered pair in registry order.
/// Records: `l1,l2,l3,multiplicity` for every entry with nonzero upper bound,
/// with `lower..upper` as the multiplicity of undetermined entries.
pub fn emit(table: &FusionTable, format: Format) -> String {
    let mut out = String::new();
    let value = |r: &FusionBoundReport| match r.verdict {
        Verdict::Determined => r.lower.to_string(),
        Verdict::Gap => format!("{}..{}", r.lower, r.upper),
        Verdict::Violated => format!("violated({}>{})", r.lower, r.upper),
    };
    match format {
        Format::Records => {
            out.push_str("l1,l2,l3,multiplicity\n");
            for r in &table.reports {
                if r.upper > 0 || r.verdict != Verdict::Determined {
                    let _ = writeln!(out, "{},{},{},{}", r.l1, r.l2, r.l3, value(r));
                }
            }
        }
        Format::Text => {
            for (i, a) in table.modules.iter().enumerate() {
                for b in &table.modules[i..] {
                    let mut terms = Vec::new();
                    for r in table.reports.iter().filter(|r| &r.l1 == a && &r.l2 == b) {
                        let term = match (r.verdict, r.lower) {
                            (Verdict::Determined, 0) => continue,
                            (Verdict::Determined, 1) => r.l3.clone(),
                            _ => format!("{} {}", value(r), r.l3),
                        };
                        terms.push(term);
                    }
                    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    let _ = writeln!(out, "{a} x {b} = {rhs}");
                }
            }
            match &table.twisted {
                TwistedStatus::NotChecked => out.push_str("twisted-sector candidates: not checked\n"),
                TwistedStatus::Checked { candidates, excluded, total } => {
                    let _ = writeln!(
                        out,
                        "twisted-sector candidates: {candidates} modules, {excluded} of {total} triples excluded"
                    );
                }
            }
        }
    }
    for e in &table.errors {
        let _ = writeln!(out, "error at N({}; {}, {}): {}", e.l3, e.l1, e.l2, e.message);
    }
    out
}
