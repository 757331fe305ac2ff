//! A small relational query language over constituency trees.
//!
//! A pattern names a head node and constrains its neighbourhood:
//!
//! ```text
//! S|SINV|SQ [< MD|VBD|VBP|VBZ | < (VP <+(VP) MD|VBD|VBP|VBZ)]
//! ```
//!
//! reads "a node labeled S, SINV, or SQ that either has a finite-verb child
//! or has a VP child whose VP chain contains a finite verb".
//!
//! Syntax:
//! * `A|B|C` — label alternation (exact, case-sensitive); `__` matches any
//!   label.
//! * Relations between a head and a target: `<` (target is a child),
//!   `>` (target is the parent), `<<` (target is a descendant), `>>`
//!   (target is an ancestor), `<,` (target is the first child),
//!   `<+(L)` (target is reachable downward through intermediate nodes all
//!   labeled `L`), `$` (target is a sister), `$+` / `$-` (target is the
//!   immediately following / preceding sister), `$++` / `$--` (target is
//!   some following / preceding sister).
//! * `!` before a relation negates it.
//! * Several constraints in sequence are all required; `&` may be written
//!   between them for readability.
//! * `[c | c | …]` groups alternative constraint sequences (any may hold).
//! * A target is a bare label set, or a parenthesized subpattern with its
//!   own constraints.
//!
//! Surface words participate as pseudo-leaves: `IN < that|That` matches an
//! `IN` preterminal whose word is literally `that` or `That`. Heads — the
//! nodes a pattern counts — are always real tree nodes, never words.

use std::fmt;

use crate::error::{Error, Result};
use crate::synprof::tree::ParseTree;

/// Which labels a node may carry.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LabelSet {
    Any,
    OneOf(Vec<String>),
}

impl LabelSet {
    fn matches(&self, label: &str) -> bool {
        match self {
            LabelSet::Any => true,
            LabelSet::OneOf(labels) => labels.iter().any(|l| l == label),
        }
    }
}

/// How a target node relates to the head node.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Relation {
    Child,
    Parent,
    Descendant,
    Ancestor,
    FirstChild,
    Chain(LabelSet),
    Sister,
    SisterAfter,
    SisterBefore,
    NextSister,
    PreviousSister,
}

impl Relation {
    fn symbol(&self) -> &'static str {
        match self {
            Relation::Child => "<",
            Relation::Parent => ">",
            Relation::Descendant => "<<",
            Relation::Ancestor => ">>",
            Relation::FirstChild => "<,",
            Relation::Chain(_) => "<+(…)",
            Relation::Sister => "$",
            Relation::SisterAfter => "$++",
            Relation::SisterBefore => "$--",
            Relation::NextSister => "$+",
            Relation::PreviousSister => "$-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Constraint {
    Rel {
        negated: bool,
        relation: Relation,
        target: Box<NodePattern>,
    },
    /// Alternative constraint sequences; the node must satisfy at least one.
    Group(Vec<Vec<Constraint>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NodePattern {
    labels: LabelSet,
    constraints: Vec<Constraint>,
}

/// A compiled tree query. See the module docs for the language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePattern {
    root: NodePattern,
    source: String,
}

impl TreePattern {
    /// Compiles a pattern, rejecting unknown operators and malformed syntax.
    pub fn parse(source: &str) -> Result<TreePattern> {
        let tokens = lex(source)?;
        let mut parser = Parser {
            source,
            tokens,
            pos: 0,
        };
        let root = parser.node_pattern()?;
        if let Some(tok) = parser.peek() {
            return Err(parser.error(format!("unexpected {} after pattern", tok.describe())));
        }
        if root.constraints.is_empty() && root.labels == LabelSet::Any {
            // `__` alone matches every node; almost certainly a mistake.
            return Err(parser.error("pattern matches every node unconditionally"));
        }
        Ok(TreePattern {
            root,
            source: source.to_string(),
        })
    }

    /// The original pattern text.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of nodes in `tree` that match as heads.
    pub fn match_count(&self, tree: &ParseTree) -> usize {
        self.count_in_index(&TreeIndex::build(tree))
    }

    /// True if any node of `tree` matches.
    pub fn matches(&self, tree: &ParseTree) -> bool {
        let index = TreeIndex::build(tree);
        (0..index.len()).any(|i| !index.is_word[i] && matches_at(&index, i, &self.root))
    }

    pub(crate) fn count_in_index(&self, index: &TreeIndex<'_>) -> usize {
        (0..index.len())
            .filter(|&i| !index.is_word[i] && matches_at(index, i, &self.root))
            .count()
    }
}

impl fmt::Display for TreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Counts the nodes of `tree` matching `pattern`.
pub fn match_pattern(tree: &ParseTree, pattern: &TreePattern) -> usize {
    pattern.match_count(tree)
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Wildcard,
    Pipe,
    Amp,
    Bang,
    OpenParen,
    CloseParen,
    OpenBracket,
    CloseBracket,
    Rel(Relation),
    /// `<+(` — the chain labels and their closing `)` follow as tokens.
    ChainOpen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("label {s:?}"),
            Tok::Wildcard => "wildcard '__'".to_string(),
            Tok::Pipe => "'|'".to_string(),
            Tok::Amp => "'&'".to_string(),
            Tok::Bang => "'!'".to_string(),
            Tok::OpenParen => "'('".to_string(),
            Tok::CloseParen => "')'".to_string(),
            Tok::OpenBracket => "'['".to_string(),
            Tok::CloseBracket => "']'".to_string(),
            Tok::Rel(rel) => format!("relation '{}'", rel.symbol()),
            Tok::ChainOpen => "relation '<+('".to_string(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'' | '`' | '.' | ',' | ':')
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || matches!(c, '$' | '#')
}

fn lex(source: &str) -> Result<Vec<Tok>> {
    let err = |message: String| Error::PatternSyntax {
        pattern: source.to_string(),
        message,
    };
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '(' => {
                tokens.push(Tok::OpenParen);
                i += 1;
            }
            ')' => {
                tokens.push(Tok::CloseParen);
                i += 1;
            }
            '[' => {
                tokens.push(Tok::OpenBracket);
                i += 1;
            }
            ']' => {
                tokens.push(Tok::CloseBracket);
                i += 1;
            }
            '|' => {
                tokens.push(Tok::Pipe);
                i += 1;
            }
            '&' => {
                tokens.push(Tok::Amp);
                i += 1;
            }
            '!' => {
                tokens.push(Tok::Bang);
                i += 1;
            }
            '<' => match chars.get(i + 1) {
                Some('<') => {
                    tokens.push(Tok::Rel(Relation::Descendant));
                    i += 2;
                }
                Some(',') => {
                    tokens.push(Tok::Rel(Relation::FirstChild));
                    i += 2;
                }
                Some('+') => {
                    if chars.get(i + 2) != Some(&'(') {
                        return Err(err("'<+' must be followed by '(' and chain labels".to_string()));
                    }
                    tokens.push(Tok::ChainOpen);
                    i += 3;
                }
                _ => {
                    tokens.push(Tok::Rel(Relation::Child));
                    i += 1;
                }
            },
            '>' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push(Tok::Rel(Relation::Ancestor));
                    i += 2;
                } else {
                    tokens.push(Tok::Rel(Relation::Parent));
                    i += 1;
                }
            }
            '$' => match (chars.get(i + 1), chars.get(i + 2)) {
                (Some('+'), Some('+')) => {
                    tokens.push(Tok::Rel(Relation::SisterAfter));
                    i += 3;
                }
                (Some('-'), Some('-')) => {
                    tokens.push(Tok::Rel(Relation::SisterBefore));
                    i += 3;
                }
                (Some('+'), _) => {
                    tokens.push(Tok::Rel(Relation::NextSister));
                    i += 2;
                }
                (Some('-'), _) => {
                    tokens.push(Tok::Rel(Relation::PreviousSister));
                    i += 2;
                }
                _ => {
                    tokens.push(Tok::Rel(Relation::Sister));
                    i += 1;
                }
            },
            c if is_ident_start(c) => {
                let mut ident = String::new();
                while i < chars.len() && is_ident_continue(chars[i]) {
                    ident.push(chars[i]);
                    i += 1;
                }
                if ident == "__" {
                    tokens.push(Tok::Wildcard);
                } else {
                    tokens.push(Tok::Ident(ident));
                }
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::PatternSyntax {
            pattern: self.source.to_string(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    /// `labels constraint*`
    fn node_pattern(&mut self) -> Result<NodePattern> {
        let labels = self.labels()?;
        let constraints = self.constraint_seq()?;
        Ok(NodePattern { labels, constraints })
    }

    /// `IDENT ('|' IDENT)*` or `__`. The alternation is consumed greedily:
    /// a `|` is part of the label set only when another label follows it,
    /// so `[> ROOT | $-- S]` keeps its `|` for the group.
    fn labels(&mut self) -> Result<LabelSet> {
        match self.next() {
            Some(Tok::Wildcard) => Ok(LabelSet::Any),
            Some(Tok::Ident(first)) => {
                let mut labels = vec![first];
                while self.peek() == Some(&Tok::Pipe) {
                    match self.tokens.get(self.pos + 1) {
                        Some(Tok::Ident(next)) => {
                            labels.push(next.clone());
                            self.pos += 2;
                        }
                        _ => break,
                    }
                }
                Ok(LabelSet::OneOf(labels))
            }
            Some(other) => Err(self.error(format!("expected a node label, found {}", other.describe()))),
            None => Err(self.error("expected a node label, found end of pattern")),
        }
    }

    /// Consumes constraints while the next token can start one; `&`
    /// separators between constraints are skipped. Stops (without
    /// consuming) at anything else.
    fn constraint_seq(&mut self) -> Result<Vec<Constraint>> {
        let mut constraints = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Amp) => {
                    if constraints.is_empty() {
                        return Err(self.error("'&' must follow a constraint"));
                    }
                    self.pos += 1;
                    // an `&` must be followed by another constraint
                    match self.peek() {
                        Some(Tok::Rel(_)) | Some(Tok::ChainOpen) | Some(Tok::Bang) | Some(Tok::OpenBracket) => {}
                        Some(other) => {
                            return Err(self.error(format!("expected a constraint after '&', found {}", other.describe())))
                        }
                        None => return Err(self.error("expected a constraint after '&', found end of pattern")),
                    }
                }
                Some(Tok::Rel(_)) | Some(Tok::ChainOpen) | Some(Tok::Bang) | Some(Tok::OpenBracket) => {
                    let constraint = self.constraint()?;
                    constraints.push(constraint);
                }
                _ => return Ok(constraints),
            }
        }
    }

    fn constraint(&mut self) -> Result<Constraint> {
        match self.next() {
            Some(Tok::Bang) => match self.peek() {
                Some(Tok::Rel(_)) | Some(Tok::ChainOpen) => {
                    let inner = self.constraint()?;
                    match inner {
                        Constraint::Rel {
                            relation, target, ..
                        } => Ok(Constraint::Rel {
                            negated: true,
                            relation,
                            target,
                        }),
                        Constraint::Group(_) => unreachable!("peek admitted only relations"),
                    }
                }
                Some(other) => Err(self.error(format!("'!' must precede a relation, found {}", other.describe()))),
                None => Err(self.error("'!' must precede a relation, found end of pattern")),
            },
            Some(Tok::Rel(relation)) => {
                let target = self.target(&relation)?;
                Ok(Constraint::Rel {
                    negated: false,
                    relation,
                    target: Box::new(target),
                })
            }
            Some(Tok::ChainOpen) => {
                let chain_labels = self.labels()?;
                match self.next() {
                    Some(Tok::CloseParen) => {}
                    Some(other) => {
                        return Err(self.error(format!("expected ')' to close '<+(', found {}", other.describe())))
                    }
                    None => return Err(self.error("expected ')' to close '<+(', found end of pattern")),
                }
                let relation = Relation::Chain(chain_labels);
                let target = self.target(&relation)?;
                Ok(Constraint::Rel {
                    negated: false,
                    relation,
                    target: Box::new(target),
                })
            }
            Some(Tok::OpenBracket) => {
                let mut alternatives = Vec::new();
                loop {
                    let conj = self.constraint_seq()?;
                    if conj.is_empty() {
                        return Err(self.error("empty alternative in '[…]' group"));
                    }
                    alternatives.push(conj);
                    match self.next() {
                        Some(Tok::Pipe) => continue,
                        Some(Tok::CloseBracket) => break,
                        Some(other) => {
                            return Err(self.error(format!("expected '|' or ']' in group, found {}", other.describe())))
                        }
                        None => return Err(self.error("unclosed '[…]' group")),
                    }
                }
                Ok(Constraint::Group(alternatives))
            }
            Some(other) => Err(self.error(format!("expected a relation, found {}", other.describe()))),
            None => Err(self.error("expected a relation, found end of pattern")),
        }
    }

    /// A relation's target: a bare label set or `( subpattern )`.
    fn target(&mut self, relation: &Relation) -> Result<NodePattern> {
        match self.peek() {
            Some(Tok::OpenParen) => {
                self.pos += 1;
                let node = self.node_pattern()?;
                match self.next() {
                    Some(Tok::CloseParen) => Ok(node),
                    Some(other) => Err(self.error(format!("expected ')', found {}", other.describe()))),
                    None => Err(self.error("unclosed '(' in pattern")),
                }
            }
            Some(Tok::Ident(_)) | Some(Tok::Wildcard) => Ok(NodePattern {
                labels: self.labels()?,
                constraints: Vec::new(),
            }),
            Some(other) => Err(self.error(format!(
                "expected a target node after '{}', found {}",
                relation.symbol(),
                other.describe()
            ))),
            None => Err(self.error(format!(
                "expected a target node after '{}', found end of pattern",
                relation.symbol()
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

/// Flat, parent-linked view of a tree. Surface words appear as pseudo-leaf
/// nodes (the single child of their preterminal) so relations can target
/// them; `is_word` marks them.
pub(crate) struct TreeIndex<'t> {
    labels: Vec<&'t str>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    is_word: Vec<bool>,
}

impl<'t> TreeIndex<'t> {
    pub(crate) fn build(tree: &'t ParseTree) -> TreeIndex<'t> {
        let mut index = TreeIndex {
            labels: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            is_word: Vec::new(),
        };
        index.add(tree, None);
        index
    }

    fn add(&mut self, node: &'t ParseTree, parent: Option<usize>) -> usize {
        let id = self.labels.len();
        self.labels.push(node.label.as_str());
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.is_word.push(false);
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        if let Some(word) = &node.terminal {
            let word_id = self.labels.len();
            self.labels.push(word.as_str());
            self.parent.push(Some(id));
            self.children.push(Vec::new());
            self.is_word.push(true);
            self.children[id].push(word_id);
        }
        for child in &node.children {
            self.add(child, Some(id));
        }
        id
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

fn matches_at(index: &TreeIndex<'_>, node: usize, pattern: &NodePattern) -> bool {
    pattern.labels.matches(index.labels[node])
        && pattern.constraints.iter().all(|c| constraint_holds(index, node, c))
}

fn constraint_holds(index: &TreeIndex<'_>, node: usize, constraint: &Constraint) -> bool {
    match constraint {
        Constraint::Rel {
            negated,
            relation,
            target,
        } => {
            let found = relation_holds(index, node, relation, target);
            found != *negated
        }
        Constraint::Group(alternatives) => alternatives
            .iter()
            .any(|conj| conj.iter().all(|c| constraint_holds(index, node, c))),
    }
}

fn relation_holds(index: &TreeIndex<'_>, node: usize, relation: &Relation, target: &NodePattern) -> bool {
    match relation {
        Relation::Child => index.children[node].iter().any(|&c| matches_at(index, c, target)),
        Relation::FirstChild => index.children[node]
            .first()
            .is_some_and(|&c| matches_at(index, c, target)),
        Relation::Parent => index.parent[node].is_some_and(|p| matches_at(index, p, target)),
        Relation::Descendant => {
            let mut stack: Vec<usize> = index.children[node].clone();
            while let Some(d) = stack.pop() {
                if matches_at(index, d, target) {
                    return true;
                }
                stack.extend(index.children[d].iter().copied());
            }
            false
        }
        Relation::Ancestor => {
            let mut up = index.parent[node];
            while let Some(a) = up {
                if matches_at(index, a, target) {
                    return true;
                }
                up = index.parent[a];
            }
            false
        }
        Relation::Chain(chain_labels) => chain_reaches(index, node, chain_labels, target),
        Relation::Sister
        | Relation::SisterAfter
        | Relation::SisterBefore
        | Relation::NextSister
        | Relation::PreviousSister => {
            let Some(parent) = index.parent[node] else {
                return false;
            };
            let siblings = &index.children[parent];
            let pos = siblings
                .iter()
                .position(|&s| s == node)
                .expect("node is among its parent's children");
            match relation {
                Relation::Sister => siblings
                    .iter()
                    .enumerate()
                    .any(|(i, &s)| i != pos && matches_at(index, s, target)),
                Relation::SisterAfter => siblings[pos + 1..].iter().any(|&s| matches_at(index, s, target)),
                Relation::SisterBefore => siblings[..pos].iter().any(|&s| matches_at(index, s, target)),
                Relation::NextSister => siblings
                    .get(pos + 1)
                    .is_some_and(|&s| matches_at(index, s, target)),
                Relation::PreviousSister => {
                    pos > 0 && matches_at(index, siblings[pos - 1], target)
                }
                _ => unreachable!(),
            }
        }
    }
}

/// True if some node matching `target` is reachable from `node` by going
/// down one or more steps where every *intermediate* node's label is in
/// `chain_labels` (a direct child needs no intermediates).
fn chain_reaches(index: &TreeIndex<'_>, node: usize, chain_labels: &LabelSet, target: &NodePattern) -> bool {
    for &child in &index.children[node] {
        if matches_at(index, child, target) {
            return true;
        }
        if !index.is_word[child]
            && chain_labels.matches(index.labels[child])
            && chain_reaches(index, child, chain_labels, target)
        {
            return true;
        }
    }
    false
}
