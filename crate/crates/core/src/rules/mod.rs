//! The rule engine.
//!
//! [`run_rules`] resolves a private copy of the model, runs every enabled
//! check and returns the findings ordered by the document position of the
//! element, then rule id, then message.

pub mod catalog;
mod naming;
mod structure;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::diagnostic::{Diagnostic, DiagnosticReport, Severity};
use crate::layout::{layout_report, LayoutModel, LayoutThresholds};
use crate::metamodel::{resolve_types, BuiltinRegistry, EcoreModel, ElementRef};
use crate::serialization::SourceMap;

pub use catalog::{catalog_json, lookup, RuleInfo, RULES};
pub use naming::{
    check_identifier, is_camel_case, is_pascal_case, is_upper_snake, is_valid_identifier,
    parse_dictionary, spellcheck_model, split_identifier, Conventions,
};
pub use structure::{
    bounds_valid, check_all_bounds, check_circular_inheritance, check_multiplicity_bounds,
    check_name_uniqueness, check_ocl_annotations, check_references, check_satisfiability,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown rule id `{0}`")]
    UnknownRule(String),
    #[error("invalid setting `{value}` for rule {rule}: expected off, on, error, warning or info")]
    BadSetting { rule: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

/// Per-rule override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSetting {
    Off,
    On,
    /// Enabled with a different severity.
    Severity(Severity),
}

impl std::str::FromStr for RuleSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(RuleSetting::Off),
            "on" => Ok(RuleSetting::On),
            other => Severity::parse(other)
                .map(RuleSetting::Severity)
                .ok_or_else(|| other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuleConfig {
    overrides: BTreeMap<String, RuleSetting>,
    pub conventions: Conventions,
    pub layout: LayoutThresholds,
}

impl RuleConfig {
    pub fn set(&mut self, rule: &str, setting: RuleSetting) -> Result<(), ConfigError> {
        let info = lookup(rule).ok_or_else(|| ConfigError::UnknownRule(rule.to_string()))?;
        self.overrides.insert(info.id.to_string(), setting);
        Ok(())
    }

    /// Parses `setting` first; see [`RuleSetting`].
    pub fn set_str(&mut self, rule: &str, setting: &str) -> Result<(), ConfigError> {
        let parsed = setting.parse().map_err(|value| ConfigError::BadSetting {
            rule: rule.to_string(),
            value,
        })?;
        self.set(rule, parsed)
    }

    pub fn with(mut self, rule: &str, setting: RuleSetting) -> Result<Self, ConfigError> {
        self.set(rule, setting)?;
        Ok(self)
    }

    pub fn is_enabled(&self, rule: &str) -> bool {
        match self.overrides.get(rule) {
            Some(RuleSetting::Off) => false,
            Some(_) => true,
            None => lookup(rule).is_some_and(|r| r.default_enabled),
        }
    }

    pub fn severity(&self, rule: &str) -> Option<Severity> {
        match self.overrides.get(rule) {
            Some(RuleSetting::Severity(s)) => Some(*s),
            _ => lookup(rule).map(|r| r.severity),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(id) = self.overrides.keys().find(|id| lookup(id).is_none()) {
            return Err(ConfigError::UnknownRule(id.clone()));
        }
        let a = self.layout.min_angle_deg;
        if !(0.0..=90.0).contains(&a) {
            return Err(ConfigError::Invalid(format!(
                "min_angle_deg must be within [0, 90], got {a}"
            )));
        }
        Ok(())
    }
}

/// Optional inputs beyond the model itself.
#[derive(Debug, Clone, Copy)]
pub struct RuleInputs<'a> {
    pub builtins: &'a BuiltinRegistry,
    pub source_map: Option<&'a SourceMap>,
    pub layout: Option<&'a LayoutModel>,
    pub dictionary: Option<&'a HashSet<String>>,
}

impl<'a> RuleInputs<'a> {
    pub fn new(builtins: &'a BuiltinRegistry) -> Self {
        RuleInputs {
            builtins,
            source_map: None,
            layout: None,
            dictionary: None,
        }
    }

    pub fn with_source_map(mut self, map: &'a SourceMap) -> Self {
        self.source_map = Some(map);
        self
    }

    pub fn with_layout(mut self, layout: &'a LayoutModel) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn with_dictionary(mut self, dictionary: &'a HashSet<String>) -> Self {
        self.dictionary = Some(dictionary);
        self
    }
}

/// Runs all enabled rules. Never panics on a model produced by the parser.
pub fn run_rules(
    model: &EcoreModel,
    inputs: &RuleInputs<'_>,
    config: &RuleConfig,
) -> Result<DiagnosticReport, ConfigError> {
    config.validate()?;
    let mut resolved = model.clone();
    let mut found = resolve_types(&mut resolved, inputs.builtins);
    let model = &resolved;

    for (path, element) in model.elements() {
        found.extend(check_identifier(
            element.name(),
            path.kind(),
            path,
            &config.conventions,
        ));
        // a package needs a valid name only
        if let ElementRef::Package(_) = element {
            found.retain(|d| !(d.rule_id == "EMP-001" && &d.path == path));
        }
    }
    found.extend(check_all_bounds(model));
    found.extend(check_name_uniqueness(model));
    found.extend(check_references(model, inputs.builtins));
    found.extend(check_circular_inheritance(model));
    found.extend(check_satisfiability(model));
    if config.is_enabled("PRA-001") {
        found.extend(check_ocl_annotations(model));
    }
    if let Some(dictionary) = inputs.dictionary {
        found.extend(spellcheck_model(model, dictionary));
    }
    if let Some(layout) = inputs.layout {
        found.extend(layout_report(model, layout, &config.layout));
    }

    let mut kept: Vec<Diagnostic> = found
        .into_iter()
        .filter(|d| config.is_enabled(&d.rule_id))
        .map(|mut d| {
            if let Some(s) = config.severity(&d.rule_id) {
                d.severity = s;
            }
            let loc = inputs.source_map.and_then(|m| m.line_col(&d.path));
            d.at(loc)
        })
        .collect();
    kept.sort_by(|a, b| {
        let pa = model.position(&a.path).unwrap_or(usize::MAX);
        let pb = model.position(&b.path).unwrap_or(usize::MAX);
        (pa, &a.rule_id, &a.message).cmp(&(pb, &b.rule_id, &b.message))
    });
    kept.dedup();
    Ok(DiagnosticReport::from_diagnostics(kept))
}
