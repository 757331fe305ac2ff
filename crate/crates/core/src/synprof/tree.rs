//! Bracketed (Penn-Treebank-style) constituency trees: parsing, rendering,
//! and the per-document tree file format.
//!
//! Input text like `(ROOT (S (NP (DT The) (NN dog)) (VP (VBD barked)) (. .)))`
//! parses into a [`ParseTree`]. Every parsed tree is normalised to carry a
//! single `ROOT` wrapper node so that "top level" is well defined for
//! pattern matching: an unlabeled outer bracket `((S …))` is unwrapped, an
//! existing `ROOT` or `TOP` wrapper is kept (renamed to `ROOT`), and any
//! other tree is wrapped. Terminals are preserved verbatim.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// One node of a constituency tree.
///
/// Exactly one of the following holds for a valid node:
/// * it is *internal*: `children` is non-empty and `terminal` is `None`;
/// * it is a *preterminal*: `children` is empty and `terminal` holds the
///   surface word whose part-of-speech tag is this node's `label`.
///
/// Labels are never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub children: Vec<ParseTree>,
    pub terminal: Option<String>,
}

impl ParseTree {
    /// Builds an internal node.
    pub fn internal(label: impl Into<String>, children: Vec<ParseTree>) -> ParseTree {
        ParseTree {
            label: label.into(),
            children,
            terminal: None,
        }
    }

    /// Builds a preterminal (tag + word) node.
    pub fn preterminal(label: impl Into<String>, word: impl Into<String>) -> ParseTree {
        ParseTree {
            label: label.into(),
            children: Vec::new(),
            terminal: Some(word.into()),
        }
    }

    /// The surface words of the tree, left to right.
    pub fn terminals(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_terminals(&mut out);
        out
    }

    fn collect_terminals<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Some(word) = &self.terminal {
            out.push(word.as_str());
        }
        for child in &self.children {
            child.collect_terminals(out);
        }
    }

    /// `(tag, word)` pairs for every preterminal, left to right.
    pub fn tagged_terminals(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_tagged(&mut out);
        out
    }

    fn collect_tagged<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        if let Some(word) = &self.terminal {
            out.push((self.label.as_str(), word.as_str()));
        }
        for child in &self.children {
            child.collect_tagged(out);
        }
    }

    /// Total number of nodes (internal + preterminal).
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    /// Renders the tree back to single-line bracketed form. Parsing the
    /// rendered text yields an identical tree.
    pub fn to_bracketed(&self) -> String {
        let mut out = String::new();
        self.render(&mut out);
        out
    }

    fn render(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.label);
        if let Some(word) = &self.terminal {
            out.push(' ');
            out.push_str(word);
        } else {
            for child in &self.children {
                out.push(' ');
                child.render(out);
            }
        }
        out.push(')');
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracketed())
    }
}

/// Scanner token: brackets and atoms, each tagged with its 0-based
/// character offset in the input (offsets count Unicode scalars, matching
/// how the errors report positions).
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn scan(text: &str) -> Vec<Tok<'_>> {
    let mut tokens = Vec::new();
    let mut atom_start: Option<(usize, usize)> = None; // (char offset, byte offset)
    let mut char_offset = 0usize;
    for (byte_offset, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some((at, start)) = atom_start.take() {
                tokens.push(Tok::Atom(at, &text[start..byte_offset]));
            }
            if c == '(' {
                tokens.push(Tok::Open(char_offset));
            } else if c == ')' {
                tokens.push(Tok::Close(char_offset));
            }
        } else if atom_start.is_none() {
            atom_start = Some((char_offset, byte_offset));
        }
        char_offset += 1;
    }
    if let Some((at, start)) = atom_start {
        tokens.push(Tok::Atom(at, &text[start..]));
    }
    tokens
}

/// Node under construction while brackets are still open.
struct Frame {
    open_offset: usize,
    label: Option<String>,
    children: Vec<ParseTree>,
    words: Vec<String>,
}

impl Frame {
    /// Converts a closed frame into a tree. `depth` is the nesting depth of
    /// the frame itself (0 = outermost bracket).
    fn finish(self, depth: usize) -> Result<ParseTree> {
        let syntax = |message: &str| Error::TreeSyntax {
            message: message.to_string(),
            offset: self.open_offset,
        };
        match self.label {
            None => {
                // An unlabeled bracket is only meaningful as the
                // conventional outer wrapper around a single tree.
                if depth == 0 && self.words.is_empty() && self.children.len() == 1 {
                    Ok(self.children.into_iter().next().unwrap())
                } else if self.children.is_empty() && self.words.is_empty() {
                    Err(syntax("empty node"))
                } else {
                    Err(syntax("node is missing a label"))
                }
            }
            Some(label) => {
                match (self.children.is_empty(), self.words.len()) {
                    (true, 0) => Err(syntax("empty node")),
                    (true, 1) => Ok(ParseTree::preterminal(label, self.words.into_iter().next().unwrap())),
                    (true, _) => Err(syntax("node holds more than one bare token")),
                    (false, 0) => Ok(ParseTree::internal(label, self.children)),
                    (false, _) => Err(syntax("node mixes bare tokens and subtrees")),
                }
            }
        }
    }
}

/// Ensures a parsed top-level tree carries a `ROOT` wrapper (see module docs).
fn normalize_root(tree: ParseTree) -> ParseTree {
    if tree.terminal.is_none() && (tree.label == "ROOT" || tree.label == "TOP") {
        ParseTree {
            label: "ROOT".to_string(),
            children: tree.children,
            terminal: None,
        }
    } else {
        ParseTree::internal("ROOT", vec![tree])
    }
}

/// Parses bracketed text into one [`ParseTree`] per top-level bracket.
///
/// Whitespace between tokens is insignificant. Errors (unbalanced brackets,
/// empty or malformed nodes) report the character offset at which the
/// problem was detected; an input that ends with brackets still open reports
/// the offset just past the end.
pub fn parse_bracketed(text: &str) -> Result<Vec<ParseTree>> {
    let tokens = scan(text);
    let mut trees = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    for token in tokens {
        match token {
            Tok::Open(offset) => stack.push(Frame {
                open_offset: offset,
                label: None,
                children: Vec::new(),
                words: Vec::new(),
            }),
            Tok::Atom(offset, atom) => match stack.last_mut() {
                None => {
                    return Err(Error::TreeSyntax {
                        message: format!("expected '(' but found {atom:?}"),
                        offset,
                    })
                }
                Some(frame) => {
                    if frame.label.is_none() && frame.children.is_empty() && frame.words.is_empty() {
                        frame.label = Some(atom.to_string());
                    } else {
                        frame.words.push(atom.to_string());
                    }
                }
            },
            Tok::Close(offset) => {
                let frame = stack.pop().ok_or(Error::TreeSyntax {
                    message: "unbalanced bracket".to_string(),
                    offset,
                })?;
                let node = frame.finish(stack.len())?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => trees.push(normalize_root(node)),
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(Error::TreeSyntax {
            message: "unbalanced bracket".to_string(),
            offset: text.chars().count(),
        });
    }
    Ok(trees)
}

/// Parse trees for a set of documents, keyed by document id, in file order.
#[derive(Debug, Clone, Default)]
pub struct TreeBank {
    docs: Vec<(String, Vec<ParseTree>)>,
    index: HashMap<String, usize>,
}

impl TreeBank {
    pub fn new() -> TreeBank {
        TreeBank::default()
    }

    /// Adds a document's trees; duplicate ids are an error.
    pub fn insert(&mut self, id: impl Into<String>, trees: Vec<ParseTree>) -> Result<()> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(Error::invalid(format!("duplicate tree document id {id:?}")));
        }
        self.index.insert(id.clone(), self.docs.len());
        self.docs.push((id, trees));
        Ok(())
    }

    /// Trees for a document id, if present.
    pub fn get(&self, id: &str) -> Option<&[ParseTree]> {
        self.index.get(id).map(|&i| self.docs[i].1.as_slice())
    }

    /// `(id, trees)` pairs in file order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[ParseTree])> {
        self.docs.iter().map(|(id, trees)| (id.as_str(), trees.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Reads a tree file: `#doc <id>` header lines group the bracketed
/// sentences (one per line) that follow under that id. Blank lines are
/// skipped; parse errors carry the file path and line number.
pub fn read_tree_file(path: &Path) -> Result<TreeBank> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut bank = TreeBank::new();
    let mut current: Option<(String, Vec<ParseTree>)> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#doc") {
            let id = rest.trim();
            if id.is_empty() {
                return Err(Error::record(path, line_no, "#doc header is missing an id"));
            }
            if let Some((done_id, trees)) = current.take() {
                bank.insert(done_id, trees)
                    .map_err(|e| Error::record(path, line_no, e.to_string()))?;
            }
            if bank.get(id).is_some() {
                return Err(Error::record(
                    path,
                    line_no,
                    format!("duplicate tree document id {id:?}"),
                ));
            }
            current = Some((id.to_string(), Vec::new()));
            continue;
        }
        match current.as_mut() {
            None => {
                return Err(Error::record(
                    path,
                    line_no,
                    "found a tree before any #doc header",
                ))
            }
            Some((_, trees)) => {
                let parsed = parse_bracketed(trimmed)
                    .map_err(|e| Error::record(path, line_no, e.to_string()))?;
                trees.extend(parsed);
            }
        }
    }
    if let Some((id, trees)) = current {
        bank.insert(id, trees)?;
    }
    Ok(bank)
}
