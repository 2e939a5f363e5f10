//! Identifier validity, naming conventions and spell checking.

use std::collections::HashSet;

use crate::diagnostic::Diagnostic;
use crate::metamodel::{ElementKind, ElementPath, EcoreModel};

use super::catalog;

/// Which naming conventions EMP-001 enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Conventions {
    /// PascalCase for classes, data types and enums.
    pub classifiers: bool,
    /// camelCase for attributes and references.
    pub features: bool,
    /// camelCase for operations and parameters.
    pub operations: bool,
    /// camelCase or UPPER_SNAKE for enum literals.
    pub literals: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            classifiers: true,
            features: true,
            operations: true,
            literals: true,
        }
    }
}

pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        None => false,
        Some(c) if c.is_ascii_digit() => false,
        Some(c) => std::iter::once(c)
            .chain(chars)
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$'),
    }
}

pub fn is_pascal_case(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) && !name.contains('_')
}

pub fn is_camel_case(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) && !name.contains('_')
}

pub fn is_upper_snake(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
        && name
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// SYN-001 and EMP-001 findings for one name. An invalid name gets no
/// convention warning.
pub fn check_identifier(
    name: &str,
    kind: ElementKind,
    path: &ElementPath,
    conventions: &Conventions,
) -> Vec<Diagnostic> {
    if !is_valid_identifier(name) {
        let why = if name.is_empty() {
            "is empty".to_string()
        } else if name.starts_with(|c: char| c.is_ascii_digit()) {
            "starts with a digit".to_string()
        } else {
            let bad: String = name
                .chars()
                .filter(|c| !(c.is_ascii_alphanumeric() || *c == '_' || *c == '$'))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .map(|c| format!("{c:?}"))
                .collect::<Vec<_>>()
                .join(", ");
            format!("contains invalid characters {bad}")
        };
        return vec![catalog::diagnostic(
            "SYN-001",
            path.clone(),
            format!("{} name `{name}` {why}", kind.metaclass()),
        )];
    }
    use ElementKind::*;
    let expected = match kind {
        Class | DataType | Enum if conventions.classifiers && !is_pascal_case(name) => {
            Some("PascalCase")
        }
        Attribute | Reference if conventions.features && !is_camel_case(name) => {
            Some("camelCase")
        }
        Operation | Parameter if conventions.operations && !is_camel_case(name) => {
            Some("camelCase")
        }
        Literal if conventions.literals && !is_camel_case(name) && !is_upper_snake(name) => {
            Some("camelCase or UPPER_SNAKE")
        }
        _ => None,
    };
    expected
        .map(|style| {
            catalog::diagnostic(
                "EMP-001",
                path.clone(),
                format!("{} name `{name}` should be {style}", kind.metaclass()),
            )
        })
        .into_iter()
        .collect()
}

/// Splits an identifier into lowercase words at case changes, letter/digit
/// boundaries and separators. A run of capitals stays one word up to the
/// capital that starts a lowercase word: `URLParser2` gives `url`, `parser`,
/// `2`.
pub fn split_identifier(name: &str) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut words = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).map(|j| &chars[j]) {
            let next = chars.get(i + 1).copied();
            let boundary = prev.is_alphanumeric()
                && ((prev.is_lowercase() && c.is_uppercase())
                    || (prev.is_numeric() != c.is_numeric())
                    || (prev.is_uppercase()
                        && c.is_uppercase()
                        && next.is_some_and(|n| n.is_lowercase())));
            if boundary && !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Reads a dictionary with one word per line; blank lines and `#` comments
/// are ignored, words are lowercased.
pub fn parse_dictionary(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// EMP-002 for every named element with words missing from `dictionary`.
pub fn spellcheck_model(model: &EcoreModel, dictionary: &HashSet<String>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (path, element) in model.elements() {
        let mut unknown: Vec<String> = Vec::new();
        for w in split_identifier(element.name()) {
            let numeric = w.chars().all(|c| c.is_numeric());
            if !numeric && !dictionary.contains(&w) && !unknown.contains(&w) {
                unknown.push(w);
            }
        }
        if !unknown.is_empty() {
            let list = unknown
                .iter()
                .map(|w| format!("\"{w}\""))
                .collect::<Vec<_>>()
                .join(", ");
            out.push(catalog::diagnostic(
                "EMP-002",
                path.clone(),
                format!("`{}` contains unknown words: {list}", element.name()),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(name: &str, kind: ElementKind) -> Vec<String> {
        check_identifier(name, kind, &ElementPath::root("p"), &Conventions::default())
            .into_iter()
            .map(|d| d.rule_id)
            .collect()
    }

    #[test]
    fn identifier_rules() {
        assert_eq!(ids("my class", ElementKind::Class), ["SYN-001"]);
        assert_eq!(ids("", ElementKind::Attribute), ["SYN-001"]);
        assert_eq!(ids("1st", ElementKind::Attribute), ["SYN-001"]);
        assert_eq!(ids("person", ElementKind::Class), ["EMP-001"]);
        assert!(ids("orderLine", ElementKind::Reference).is_empty());
        assert!(ids("URLParser", ElementKind::Class).is_empty());
        assert_eq!(ids("Order_Line", ElementKind::Class), ["EMP-001"]);
        assert!(ids("DARK_RED", ElementKind::Literal).is_empty());
        assert!(ids("darkRed", ElementKind::Literal).is_empty());
        assert_eq!(ids("DarkRed", ElementKind::Literal), ["EMP-001"]);
        assert!(ids("anything_goes", ElementKind::Package).is_empty());
    }

    #[test]
    fn splitting() {
        assert_eq!(split_identifier("myBadSpelling"), ["my", "bad", "spelling"]);
        assert_eq!(split_identifier("URLParser2"), ["url", "parser", "2"]);
        assert_eq!(split_identifier("x"), ["x"]);
        assert_eq!(split_identifier("order_line_ID"), ["order", "line", "id"]);
        assert_eq!(split_identifier("v2beta"), ["v", "2", "beta"]);
        assert!(split_identifier("__").is_empty());
    }

    #[test]
    fn dictionary_lines() {
        let d = parse_dictionary("Order\n# comment\n\n line \n");
        assert_eq!(d, HashSet::from(["order".to_string(), "line".to_string()]));
    }
}
