//! Minimal XML tree with byte spans, built on `quick-xml` events.
//!
//! Spans let the readers copy unrecognized content verbatim.

use std::ops::Range;

use quick_xml::events::Event;
use quick_xml::{Reader, XmlVersion};

#[derive(Debug, Clone)]
pub(crate) struct XmlAttr {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone)]
pub(crate) struct XmlElement {
    pub name: String,
    pub attrs: Vec<XmlAttr>,
    pub children: Vec<XmlNode>,
    pub span: Range<usize>,
}

impl XmlElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.value.as_str())
    }

    pub fn local_name(&self) -> &str {
        self.name.rsplit(':').next().unwrap_or(&self.name)
    }

    pub fn prefix(&self) -> Option<&str> {
        self.name.split_once(':').map(|(p, _)| p)
    }

    pub fn elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            _ => None,
        })
    }

    /// Concatenated character data of direct text children.
    pub fn text(&self) -> String {
        self.children
            .iter()
            .filter_map(|c| match c {
                XmlNode::Text { text, .. } => Some(text.as_str()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub(crate) enum XmlNode {
    Element(XmlElement),
    /// Character data with references resolved.
    Text { text: String, span: Range<usize> },
    /// Comments, CDATA sections and processing instructions.
    Other { span: Range<usize> },
}

#[derive(Debug, Clone)]
pub(crate) struct XmlDocument {
    /// Comments and processing instructions before the root (not the XML declaration).
    pub prolog: Vec<Range<usize>>,
    pub root: XmlElement,
}

#[derive(Debug, Clone)]
pub(crate) struct XmlSyntaxError {
    pub message: String,
    pub offset: usize,
}

fn err(message: impl Into<String>, offset: usize) -> XmlSyntaxError {
    XmlSyntaxError {
        message: message.into(),
        offset,
    }
}

fn predefined_entity(name: &str) -> Option<char> {
    Some(match name {
        "lt" => '<',
        "gt" => '>',
        "amp" => '&',
        "apos" => '\'',
        "quot" => '"',
        _ => return None,
    })
}

fn start_element(
    e: &quick_xml::events::BytesStart<'_>,
    start: usize,
) -> Result<XmlElement, XmlSyntaxError> {
    let name = e.name().into_inner().to_string();
    let mut attrs = Vec::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|e| err(format!("bad attribute: {e}"), start))?;
        let key = attr.key.into_inner().to_string();
        let value = attr
            .normalized_value(XmlVersion::Implicit1_0)
            .map_err(|e| err(format!("bad value for attribute `{key}`: {e}"), start))?
            .into_owned();
        attrs.push(XmlAttr { name: key, value });
    }
    Ok(XmlElement {
        name,
        attrs,
        children: Vec::new(),
        span: start..start,
    })
}

fn push_text(children: &mut Vec<XmlNode>, text: &str, span: Range<usize>) {
    if let Some(XmlNode::Text { text: prev, span: prev_span }) = children.last_mut() {
        if prev_span.end == span.start {
            prev.push_str(text);
            prev_span.end = span.end;
            return;
        }
    }
    children.push(XmlNode::Text {
        text: text.to_string(),
        span,
    });
}

/// Parses a complete document with a single root element.
pub(crate) fn parse_document(input: &str) -> Result<XmlDocument, XmlSyntaxError> {
    let mut reader = Reader::from_str(input);
    reader.config_mut().check_end_names = true;
    let mut stack: Vec<XmlElement> = Vec::new();
    let mut prolog = Vec::new();
    let mut root: Option<XmlElement> = None;

    loop {
        let before = reader.buffer_position() as usize;
        let event = reader
            .read_event()
            .map_err(|e| err(e.to_string(), reader.error_position() as usize))?;
        let after = reader.buffer_position() as usize;
        match event {
            Event::Start(e) => {
                if root.is_some() && stack.is_empty() {
                    return Err(err("content after the root element", before));
                }
                stack.push(start_element(&e, before)?);
            }
            Event::Empty(e) => {
                let mut el = start_element(&e, before)?;
                el.span = before..after;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(XmlNode::Element(el)),
                    None if root.is_none() => root = Some(el),
                    None => return Err(err("content after the root element", before)),
                }
            }
            Event::End(_) => {
                let mut el = stack
                    .pop()
                    .ok_or_else(|| err("unexpected closing tag", before))?;
                el.span = el.span.start..after;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(XmlNode::Element(el)),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let content = t.xml10_content();
                match stack.last_mut() {
                    Some(parent) => push_text(&mut parent.children, &content, before..after),
                    None if content.trim().is_empty() => {}
                    None => return Err(err("text outside the root element", before)),
                }
            }
            Event::GeneralRef(r) => {
                let ch = match r.resolve_char_ref() {
                    Ok(Some(c)) => c,
                    Ok(None) => predefined_entity(&r)
                        .ok_or_else(|| err(format!("unknown entity `&{};`", &*r), before))?,
                    Err(e) => return Err(err(e.to_string(), before)),
                };
                match stack.last_mut() {
                    Some(parent) => {
                        push_text(&mut parent.children, ch.encode_utf8(&mut [0; 4]), before..after)
                    }
                    None => return Err(err("text outside the root element", before)),
                }
            }
            Event::CData(_) => match stack.last_mut() {
                Some(parent) => parent.children.push(XmlNode::Other {
                    span: before..after,
                }),
                None => return Err(err("CDATA outside the root element", before)),
            },
            Event::Comment(_) | Event::PI(_) | Event::DocType(_) => match stack.last_mut() {
                Some(parent) => parent.children.push(XmlNode::Other {
                    span: before..after,
                }),
                None if root.is_none() => prolog.push(before..after),
                // trailing comments after the root are dropped
                None => {}
            },
            Event::Decl(_) => {
                if before != 0 {
                    return Err(err("XML declaration must start the document", before));
                }
            }
            Event::Eof => {
                if let Some(open) = stack.last() {
                    return Err(err(format!("unclosed element `{}`", open.name), input.len()));
                }
                break;
            }
        }
    }
    let root = root.ok_or_else(|| err("document has no root element", 0))?;
    Ok(XmlDocument { prolog, root })
}

/// 1-based line and column of a byte offset.
#[derive(Debug, Clone)]
pub(crate) struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    pub fn position(&self, text: &str, offset: usize) -> (u32, u32) {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.starts[line];
        let offset = offset.min(text.len());
        let col = text
            .get(start..offset)
            .map(|s| s.chars().count())
            .unwrap_or(offset - start);
        (line as u32 + 1, col as u32 + 1)
    }
}

/// Escapes an attribute value for double-quoted output.
pub(crate) fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for ch in value.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#xA;"),
            '\r' => out.push_str("&#xD;"),
            '\t' => out.push_str("&#x9;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_text(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for ch in value.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_cover_elements() {
        let src = "<?xml version=\"1.0\"?>\n<a x=\"1\">\n  <b/>\n  <c>t&amp;u</c>\n</a>\n";
        let doc = parse_document(src).unwrap();
        assert_eq!(doc.root.name, "a");
        assert_eq!(&src[doc.root.span.clone()], "<a x=\"1\">\n  <b/>\n  <c>t&amp;u</c>\n</a>");
        let kids: Vec<_> = doc.root.elements().collect();
        assert_eq!(&src[kids[0].span.clone()], "<b/>");
        assert_eq!(kids[1].text(), "t&u");
    }

    #[test]
    fn malformed_inputs_fail_with_offsets() {
        for bad in ["<a>", "<a></b>", "<a/><b/>", "", "text", "<a x=\"1\" x=\"2\"/>", "<a>&bogus;</a>"] {
            assert!(parse_document(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn line_columns() {
        let text = "ab\ncd\n";
        let idx = LineIndex::new(text);
        assert_eq!(idx.position(text, 0), (1, 1));
        assert_eq!(idx.position(text, 4), (2, 2));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape_attr("a\"b&c\nd"), "a&quot;b&amp;c&#xA;d");
        assert_eq!(escape_text("<x>"), "&lt;x&gt;");
    }
}
