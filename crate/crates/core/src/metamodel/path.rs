use std::fmt;

use serde::{Serialize, Serializer};

/// The kind of a model element addressable by an [`ElementPath`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Package,
    Class,
    DataType,
    Enum,
    Attribute,
    Reference,
    Operation,
    Parameter,
    Literal,
}

impl ElementKind {
    pub fn is_classifier(self) -> bool {
        matches!(self, ElementKind::Class | ElementKind::DataType | ElementKind::Enum)
    }

    pub fn is_feature(self) -> bool {
        matches!(self, ElementKind::Attribute | ElementKind::Reference)
    }

    /// The Ecore metaclass name, e.g. `EClass`.
    pub fn metaclass(self) -> &'static str {
        match self {
            ElementKind::Package => "EPackage",
            ElementKind::Class => "EClass",
            ElementKind::DataType => "EDataType",
            ElementKind::Enum => "EEnum",
            ElementKind::Attribute => "EAttribute",
            ElementKind::Reference => "EReference",
            ElementKind::Operation => "EOperation",
            ElementKind::Parameter => "EParameter",
            ElementKind::Literal => "EEnumLiteral",
        }
    }

    pub fn from_metaclass(name: &str) -> Option<ElementKind> {
        Some(match name {
            "EPackage" => ElementKind::Package,
            "EClass" => ElementKind::Class,
            "EDataType" => ElementKind::DataType,
            "EEnum" => ElementKind::Enum,
            "EAttribute" => ElementKind::Attribute,
            "EReference" => ElementKind::Reference,
            "EOperation" => ElementKind::Operation,
            "EParameter" => ElementKind::Parameter,
            "EEnumLiteral" => ElementKind::Literal,
            _ => return None,
        })
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.metaclass())
    }
}

/// One step of an [`ElementPath`].
///
/// `ordinal` distinguishes siblings that would otherwise render identically
/// (duplicate names are legal input and must stay addressable).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub kind: ElementKind,
    pub name: String,
    pub ordinal: usize,
}

impl Segment {
    /// The segment text without the ordinal suffix.
    pub fn base_text(&self) -> String {
        if self.kind == ElementKind::Operation {
            format!("{}()", self.name)
        } else {
            self.name.clone()
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base_text())?;
        if self.ordinal > 0 {
            write!(f, "[{}]", self.ordinal)?;
        }
        Ok(())
    }
}

/// Location of an element from the root package down, rendered `/pkg/Class/feature`.
///
/// Operations render with a `()` suffix and the n-th duplicate sibling with an
/// `[n]` suffix. Ecore has no stable identifiers, so this path doubles as the
/// element identity for matching and reporting. Parsing a rendered path back
/// needs the model to recover kinds; see [`crate::EcoreModel::path_from_str`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementPath {
    segments: Vec<Segment>,
}

impl ElementPath {
    pub fn root(package_name: &str) -> Self {
        ElementPath {
            segments: vec![Segment {
                kind: ElementKind::Package,
                name: package_name.to_string(),
                ordinal: 0,
            }],
        }
    }

    pub fn from_segments(segments: Vec<Segment>) -> Self {
        ElementPath { segments }
    }

    pub fn child(&self, kind: ElementKind, name: &str, ordinal: usize) -> Self {
        let mut segments = self.segments.clone();
        segments.push(Segment {
            kind,
            name: name.to_string(),
            ordinal,
        });
        ElementPath { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn depth(&self) -> usize {
        self.segments.len()
    }

    pub fn kind(&self) -> ElementKind {
        self.last().kind
    }

    pub fn name(&self) -> &str {
        &self.last().name
    }

    fn last(&self) -> &Segment {
        self.segments.last().expect("paths are never empty")
    }

    pub fn parent(&self) -> Option<ElementPath> {
        if self.segments.len() <= 1 {
            return None;
        }
        Some(ElementPath {
            segments: self.segments[..self.segments.len() - 1].to_vec(),
        })
    }

    pub fn starts_with(&self, prefix: &ElementPath) -> bool {
        self.segments.starts_with(&prefix.segments)
    }

    /// Replaces the leading `prefix` with `replacement`, if it is a prefix.
    pub fn rebase(&self, prefix: &ElementPath, replacement: &ElementPath) -> Option<ElementPath> {
        if !self.starts_with(prefix) {
            return None;
        }
        let mut segments = replacement.segments.clone();
        segments.extend_from_slice(&self.segments[prefix.segments.len()..]);
        Some(ElementPath { segments })
    }

    /// The EMF fragment (`//Sub/Class/feature`) addressing this element
    /// relative to the root package.
    pub fn fragment(&self) -> String {
        let mut out = String::from("/");
        for seg in &self.segments[1..] {
            out.push('/');
            out.push_str(&seg.name);
        }
        out
    }
}

impl fmt::Display for ElementPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.segments {
            write!(f, "/{seg}")?;
        }
        Ok(())
    }
}

impl Serialize for ElementPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
