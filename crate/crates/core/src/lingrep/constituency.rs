use crate::error::{Error, Result};

/// Completeness evidence for one provision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness<'a> {
    /// Penn-style bracketed constituency tree.
    Tree(&'a str),
    Flag(bool),
}

/// True when the constituency root is `S`, or when a dummy root (`ROOT`,
/// `TOP` or an unlabeled bracket) has an `S` child at the top level.
pub fn is_complete_sentence(input: Completeness<'_>) -> Result<bool> {
    match input {
        Completeness::Flag(f) => Ok(f),
        Completeness::Tree(tree) => {
            let root = parse_tree(tree)?;
            if is_s(&root.label) {
                return Ok(true);
            }
            let dummy = root.label.is_empty() || matches!(root.label.as_str(), "ROOT" | "TOP");
            Ok(dummy && root.children.iter().any(|c| is_s(&c.label)))
        }
    }
}

fn is_s(label: &str) -> bool {
    label == "S" || label.starts_with("S-") || label.starts_with("S=")
}

#[derive(Debug)]
struct Node {
    label: String,
    children: Vec<Node>,
}

fn parse_tree(input: &str) -> Result<Node> {
    let tokens = lex(input);
    let mut pos = 0;
    let node = parse_node(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse {
            line: 1,
            reason: "unbalanced brackets: trailing input after the root".into(),
        });
    }
    Ok(node)
}

fn lex(input: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_node(tokens: &[String], pos: &mut usize) -> Result<Node> {
    let unbalanced = || Error::Parse {
        line: 1,
        reason: "unbalanced brackets".into(),
    };
    if tokens.get(*pos).map(String::as_str) != Some("(") {
        return Err(unbalanced());
    }
    *pos += 1;
    let label = match tokens.get(*pos) {
        Some(t) if t != "(" && t != ")" => {
            *pos += 1;
            t.clone()
        }
        Some(_) => String::new(),
        None => return Err(unbalanced()),
    };
    let mut children = Vec::new();
    loop {
        match tokens.get(*pos).map(String::as_str) {
            Some(")") => {
                *pos += 1;
                return Ok(Node { label, children });
            }
            Some("(") => children.push(parse_node(tokens, pos)?),
            Some(_) => *pos += 1,
            None => return Err(unbalanced()),
        }
    }
}
