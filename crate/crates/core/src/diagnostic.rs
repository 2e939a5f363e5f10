//! Findings produced by the quality rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::metamodel::ElementPath;

/// Quality levels of the semiotic model-quality framework; every rule belongs
/// to exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QualityLevel {
    Physical,
    Empirical,
    Syntactic,
    Semantic,
    Pragmatic,
    Social,
    Deontic,
}

impl QualityLevel {
    pub const ALL: [QualityLevel; 7] = [
        QualityLevel::Physical,
        QualityLevel::Empirical,
        QualityLevel::Syntactic,
        QualityLevel::Semantic,
        QualityLevel::Pragmatic,
        QualityLevel::Social,
        QualityLevel::Deontic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QualityLevel::Physical => "physical",
            QualityLevel::Empirical => "empirical",
            QualityLevel::Syntactic => "syntactic",
            QualityLevel::Semantic => "semantic",
            QualityLevel::Pragmatic => "pragmatic",
            QualityLevel::Social => "social",
            QualityLevel::Deontic => "deontic",
        }
    }
}

impl fmt::Display for QualityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub const ALL: [Severity; 3] = [Severity::Error, Severity::Warning, Severity::Info];

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }

    pub fn parse(s: &str) -> Option<Severity> {
        match s {
            "error" => Some(Severity::Error),
            "warning" => Some(Severity::Warning),
            "info" => Some(Severity::Info),
            _ => None,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One rule finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule_id: String,
    pub quality_level: QualityLevel,
    pub severity: Severity,
    pub path: ElementPath,
    /// 1-based line and column in the analyzed document, when known.
    pub location: Option<(u32, u32)>,
    pub message: String,
    pub related_paths: Vec<ElementPath>,
}

impl Diagnostic {
    pub fn new(
        rule_id: &str,
        quality_level: QualityLevel,
        severity: Severity,
        path: ElementPath,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            rule_id: rule_id.to_string(),
            quality_level,
            severity,
            path,
            location: None,
            message: message.into(),
            related_paths: Vec::new(),
        }
    }

    pub fn with_related(mut self, related: impl IntoIterator<Item = ElementPath>) -> Self {
        self.related_paths.extend(related);
        self
    }

    pub fn at(mut self, location: Option<(u32, u32)>) -> Self {
        self.location = location;
        self
    }
}

/// Counts of findings per quality level and per severity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub total: usize,
    pub by_level: BTreeMap<String, usize>,
    pub by_severity: BTreeMap<String, usize>,
}

/// Ordered findings plus their tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagnosticReport {
    pub diagnostics: Vec<Diagnostic>,
    pub summary: ReportSummary,
}

impl DiagnosticReport {
    /// Builds a report; the caller is responsible for ordering.
    pub fn from_diagnostics(diagnostics: Vec<Diagnostic>) -> Self {
        let mut summary = ReportSummary {
            total: diagnostics.len(),
            ..ReportSummary::default()
        };
        for level in QualityLevel::ALL {
            summary.by_level.insert(level.as_str().to_string(), 0);
        }
        for sev in Severity::ALL {
            summary.by_severity.insert(sev.as_str().to_string(), 0);
        }
        for d in &diagnostics {
            *summary
                .by_level
                .get_mut(d.quality_level.as_str())
                .expect("all levels seeded") += 1;
            *summary
                .by_severity
                .get_mut(d.severity.as_str())
                .expect("all severities seeded") += 1;
        }
        DiagnosticReport {
            diagnostics,
            summary,
        }
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.summary.by_severity[severity.as_str()]
    }

    pub fn has_errors(&self) -> bool {
        self.count(Severity::Error) > 0
    }

    pub fn is_empty(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn rule_ids(&self) -> Vec<&str> {
        self.diagnostics.iter().map(|d| d.rule_id.as_str()).collect()
    }

    /// `{"diagnostics":[{"rule","level","severity","path","line","col","message","related"}],"summary":{..}}`
    /// with `line` and `col` null when unknown.
    pub fn to_json(&self) -> String {
        let diagnostics: Vec<DiagnosticJson<'_>> = self
            .diagnostics
            .iter()
            .map(|d| DiagnosticJson {
                rule: &d.rule_id,
                level: d.quality_level,
                severity: d.severity,
                path: d.path.to_string(),
                line: d.location.map(|l| l.0),
                col: d.location.map(|l| l.1),
                message: &d.message,
                related: d.related_paths.iter().map(|p| p.to_string()).collect(),
            })
            .collect();
        let doc = ReportJson {
            diagnostics,
            summary: &self.summary,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct DiagnosticJson<'a> {
    rule: &'a str,
    level: QualityLevel,
    severity: Severity,
    path: String,
    line: Option<u32>,
    col: Option<u32>,
    message: &'a str,
    related: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    diagnostics: Vec<DiagnosticJson<'a>>,
    summary: &'a ReportSummary,
}
