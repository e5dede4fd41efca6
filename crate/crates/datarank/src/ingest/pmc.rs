//! Text extraction from PMC-style JATS articles.
//!
//! The PMID comes from the first `<article-id pub-id-type="pmid">`. Body text
//! is taken from the first `<body>` using a tag allowlist: block elements
//! are separated by whitespace, inline formatting is joined without any,
//! and elements outside both lists (formulas, graphics, ...) are dropped
//! with their content. Whitespace runs collapse to one space.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::IngestError;

const BLOCK: &[&[u8]] = &[
    b"body",
    b"sec",
    b"p",
    b"title",
    b"label",
    b"caption",
    b"list",
    b"list-item",
    b"def-list",
    b"def-item",
    b"term",
    b"def",
    b"fig",
    b"fig-group",
    b"table-wrap",
    b"table-wrap-foot",
    b"table",
    b"thead",
    b"tbody",
    b"tfoot",
    b"tr",
    b"td",
    b"th",
    b"disp-quote",
    b"boxed-text",
    b"statement",
    b"supplementary-material",
    b"fn",
    b"fn-group",
    b"glossary",
    b"notes",
    b"ack",
    b"app",
    b"app-group",
    b"preformat",
    b"verse-group",
    b"verse-line",
    b"attrib",
    b"break",
];

const INLINE: &[&[u8]] = &[
    b"italic",
    b"bold",
    b"sup",
    b"sub",
    b"sc",
    b"underline",
    b"overline",
    b"monospace",
    b"roman",
    b"sans-serif",
    b"strike",
    b"xref",
    b"ext-link",
    b"uri",
    b"email",
    b"named-content",
    b"styled-content",
    b"abbrev",
    b"span",
    b"related-object",
    b"inline-supplementary-material",
    b"chem-struct",
    b"target",
];

fn malformed(e: impl std::fmt::Display) -> IngestError {
    IngestError::MalformedDocument(e.to_string())
}

fn is_pmid_id(e: &BytesStart) -> Result<bool, IngestError> {
    if e.name().as_ref() != b"article-id" {
        return Ok(false);
    }
    let attr = e.try_get_attribute("pub-id-type").map_err(malformed)?;
    Ok(attr.is_some_and(|a| a.value.as_ref() == b"pmid"))
}

enum Mode {
    Outside,
    /// Inside the body; the value is the open-element depth at entry.
    Body(usize),
    /// Inside a dropped element within the body.
    Skip {
        body: usize,
        until: usize,
    },
    Done,
}

pub fn extract_pmc_fulltext(document: &str) -> Result<(String, String), IngestError> {
    let mut reader = Reader::from_str(document);
    let mut depth = 0usize;
    let mut saw_root = false;
    let mut pmid: Option<String> = None;
    let mut pmid_depth: Option<usize> = None;
    let mut raw = String::new();
    let mut mode = Mode::Outside;

    loop {
        let event = reader.read_event().map_err(malformed)?;
        match event {
            Event::Start(e) => {
                depth += 1;
                saw_root = true;
                if pmid.is_none() && pmid_depth.is_none() && is_pmid_id(&e)? {
                    pmid_depth = Some(depth);
                    pmid = Some(String::new());
                }
                let name = e.name();
                let name = name.as_ref();
                mode = match mode {
                    Mode::Outside if name == b"body" => Mode::Body(depth),
                    Mode::Body(b) if BLOCK.contains(&name) => {
                        raw.push(' ');
                        Mode::Body(b)
                    }
                    Mode::Body(b) if INLINE.contains(&name) => Mode::Body(b),
                    Mode::Body(b) => Mode::Skip { body: b, until: depth },
                    other => other,
                };
            }
            Event::End(e) => {
                if pmid_depth == Some(depth) {
                    pmid_depth = None;
                }
                mode = match mode {
                    Mode::Body(b) if b == depth => Mode::Done,
                    Mode::Skip { body, until } if until == depth => Mode::Body(body),
                    Mode::Body(b) => {
                        if BLOCK.contains(&e.name().as_ref()) {
                            raw.push(' ');
                        }
                        Mode::Body(b)
                    }
                    other => other,
                };
                depth -= 1;
            }
            Event::Empty(e) => {
                saw_root = true;
                if matches!(mode, Mode::Body(_)) && BLOCK.contains(&e.name().as_ref()) {
                    raw.push(' ');
                }
            }
            Event::Text(t) => {
                let in_pmid = pmid_depth.is_some();
                let in_body = matches!(mode, Mode::Body(_));
                if in_pmid || in_body {
                    let text = t.unescape().map_err(malformed)?;
                    if in_pmid {
                        pmid.as_mut().unwrap().push_str(&text);
                    }
                    if in_body {
                        raw.push_str(&text);
                    }
                }
            }
            Event::CData(c) => {
                if matches!(mode, Mode::Body(_)) {
                    raw.push_str(std::str::from_utf8(&c).map_err(malformed)?);
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if depth != 0 {
        return Err(malformed("unexpected end of document"));
    }
    if !saw_root {
        return Err(malformed("no root element"));
    }
    let pmid = pmid
        .map(|p| p.trim().to_owned())
        .filter(|p| !p.is_empty())
        .ok_or(IngestError::MissingPmid)?;
    let body = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    Ok((pmid, body))
}
