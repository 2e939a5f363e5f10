//! The published rule table.

use serde::Serialize;

use crate::diagnostic::{Diagnostic, QualityLevel, Severity};
use crate::metamodel::ElementPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuleInfo {
    pub id: &'static str,
    pub level: QualityLevel,
    pub severity: Severity,
    /// Rules off unless enabled in the configuration.
    #[serde(skip)]
    pub default_enabled: bool,
    pub description: &'static str,
}

const fn rule(
    id: &'static str,
    level: QualityLevel,
    severity: Severity,
    description: &'static str,
) -> RuleInfo {
    RuleInfo {
        id,
        level,
        severity,
        default_enabled: true,
        description,
    }
}

const fn off(info: RuleInfo) -> RuleInfo {
    RuleInfo {
        default_enabled: false,
        ..info
    }
}

use QualityLevel::*;
use Severity::*;

pub static RULES: &[RuleInfo] = &[
    rule("SYN-001", Syntactic, Error, "Name is empty, contains characters outside [A-Za-z0-9_$] or starts with a digit"),
    rule("SYN-002", Syntactic, Error, "Multiplicity bounds are invalid (lower < 0 or upper below max(1, lower))"),
    rule("SYN-003", Syntactic, Error, "Classifier name is not unique within its package"),
    rule("SYN-004", Syntactic, Error, "Structural feature name is not unique among own and inherited features"),
    rule("SYN-005", Syntactic, Error, "Type, supertype or opposite reference cannot be resolved"),
    rule("SYN-006", Syntactic, Warning, "EDataType instance type name is missing or unknown"),
    rule("SYN-007", Syntactic, Error, "Structural feature has no eType"),
    rule("SEM-001", Semantic, Warning, "Abstract class is never inherited"),
    rule("SEM-002", Semantic, Error, "Feature is unchangeable, required and has no default value"),
    rule("SEM-003", Semantic, Warning, "Concrete class has no features and no operations"),
    rule("SEM-004", Semantic, Error, "Circular inheritance"),
    rule("EMP-001", Empirical, Warning, "Name does not follow the naming convention (PascalCase classifiers, camelCase members)"),
    rule("EMP-002", Empirical, Info, "Name contains words not found in the dictionary"),
    rule("EMP-101", Empirical, Warning, "Angle between edges meeting at a point is below the threshold"),
    rule("EMP-102", Empirical, Warning, "Label overlaps another label or an edge"),
    off(rule("EMP-103", Empirical, Info, "Layout metrics summary (crossings, bends, area) for trend tracking")),
    rule("EMP-104", Empirical, Warning, "Layout refers to an element that is not in the model"),
    off(rule("PRA-001", Pragmatic, Info, "Annotation carries OCL constraints that are not evaluated")),
    rule("INS-001", Semantic, Error, "Instance object is typed by an abstract class or interface"),
    rule("INS-002", Semantic, Error, "Number of values violates the feature multiplicity"),
    rule("INS-003", Semantic, Error, "Value does not parse as the attribute data type or does not conform to the reference type"),
    rule("INS-004", Semantic, Error, "Enumeration value is not a literal of the enum"),
    rule("INS-005", Semantic, Error, "Value supplied for a feature the class does not have"),
];

pub fn lookup(id: &str) -> Option<&'static RuleInfo> {
    RULES.iter().find(|r| r.id == id)
}

/// A diagnostic for a catalog rule with its default level and severity.
///
/// Panics on ids outside the catalog; rule code only passes literals.
pub fn diagnostic(id: &str, path: ElementPath, message: impl Into<String>) -> Diagnostic {
    let info = lookup(id).unwrap_or_else(|| panic!("rule {id} is not in the catalog"));
    Diagnostic::new(info.id, info.level, info.severity, path, message)
}

/// The catalog as JSON, one object per rule.
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(RULES).expect("catalog serializes")
}
