use ego_tree::NodeRef;
use scraper::{Html, Node};

use super::{normalize_whitespace, Provision};
use crate::error::{Error, Result};

const BLOCKS: [&str; 2] = ["p", "div"];
const DROPPED: [&str; 6] = ["script", "style", "head", "noscript", "template", "title"];

/// Splits a contract into one provision per `<p>`/`<div>` element.
///
/// A block's text is everything beneath it except nested blocks, which
/// become provisions of their own with `depth`/`parent_index` pointing at
/// the nearest enclosing emitted block. Blocks without text are skipped and
/// their children attach to the next emitted ancestor.
pub fn extract_provisions(contract_id: &str, html_document: &[u8]) -> Result<Vec<Provision>> {
    if html_document.contains(&0) {
        return Err(Error::Ingest {
            document: contract_id.to_string(),
            reason: "binary content (NUL bytes) is not an HTML document".into(),
        });
    }
    let source = String::from_utf8_lossy(html_document);
    if source.trim().is_empty() {
        return Ok(Vec::new());
    }
    let doc = Html::parse_document(&source);
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    walk(doc.tree.root(), contract_id, &mut stack, &mut out);
    Ok(out)
}

fn element_name<'a>(node: &NodeRef<'a, Node>) -> Option<&'a str> {
    match node.value() {
        Node::Element(e) => Some(e.name()),
        _ => None,
    }
}

fn walk(node: NodeRef<'_, Node>, contract_id: &str, stack: &mut Vec<usize>, out: &mut Vec<Provision>) {
    for child in node.children() {
        match element_name(&child) {
            Some(name) if DROPPED.contains(&name) => {}
            Some(name) if BLOCKS.contains(&name) => {
                let mut raw = String::new();
                own_text(child, &mut raw);
                let text = normalize_whitespace(&raw);
                if text.is_empty() {
                    walk(child, contract_id, stack, out);
                } else {
                    let index = out.len();
                    out.push(Provision {
                        contract_id: contract_id.to_string(),
                        index,
                        text,
                        depth: stack.len(),
                        parent_index: stack.last().copied(),
                    });
                    stack.push(index);
                    walk(child, contract_id, stack, out);
                    stack.pop();
                }
            }
            _ => walk(child, contract_id, stack, out),
        }
    }
}

/// Text under `node`, stopping at nested blocks.
fn own_text(node: NodeRef<'_, Node>, buf: &mut String) {
    for child in node.children() {
        match child.value() {
            Node::Text(t) => buf.push_str(t),
            Node::Element(e) => {
                let name = e.name();
                if BLOCKS.contains(&name) || DROPPED.contains(&name) || name == "br" {
                    buf.push(' ');
                } else {
                    own_text(child, buf);
                    if matches!(name, "td" | "th" | "li" | "tr") {
                        buf.push(' ');
                    }
                }
            }
            _ => {}
        }
    }
}
