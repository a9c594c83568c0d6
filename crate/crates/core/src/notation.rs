//! Bracket notation for trees and point configurations.
//!
//! Trees: `[w0[w1,w2[...],★m]]`. Bare integers are leaves, `★m` (or `*m`) is a
//! marked weight, `·` is ignored, and `0̄`, `0~` or `Kbar` stands for the root
//! weight left over once the bubbles are counted.
//!
//! Configurations: `[x1[y1[z1,z2],y2]]`, each item an optionally negated label
//! with optional coordinates `p=(a,b,c,d)` and an optional sub-bracket (the
//! screen at that point). A bare sub-bracket is an anonymous group.

use std::fmt;

use crate::algebra::{format_rational, parse_rational, Rational};
use crate::tree::{BubbleTree, TreeError, TreeNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NotationError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] TreeError),
}

/// A weight as written: a number or the bar token.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightToken {
    Value(u64),
    Bar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeExpr {
    pub weight: WeightToken,
    pub marks: Vec<u64>,
    pub children: Vec<TreeExpr>,
}

impl TreeExpr {
    fn charge_below(&self) -> u64 {
        self.marks.iter().sum::<u64>()
            + self
                .children
                .iter()
                .map(|c| c.node_weight() + c.charge_below())
                .sum::<u64>()
    }

    fn node_weight(&self) -> u64 {
        match self.weight {
            WeightToken::Value(w) => w,
            WeightToken::Bar => 0,
        }
    }

    /// Resolves a bar root against the total charge `k` (or to 0 without one).
    pub fn to_node(&self, k: Option<u64>) -> Result<TreeNode, NotationError> {
        let weight = match (self.weight, k) {
            (WeightToken::Value(w), _) => w,
            (WeightToken::Bar, None) => 0,
            (WeightToken::Bar, Some(k)) => {
                let below = self.charge_below();
                k.checked_sub(below).ok_or(NotationError::Syntax {
                    pos: 0,
                    msg: format!("bubble charge {below} exceeds K = {k}"),
                })?
            }
        };
        Ok(TreeNode {
            weight,
            marks: self.marks.clone(),
            children: self
                .children
                .iter()
                .map(|c| c.to_node(None))
                .collect::<Result<_, _>>()?,
        })
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace() && *c != '·')
            .collect();
        Self { chars, i: 0, src }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map(|c| c.0).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|c| c.1)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).map(|c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.i += 1;
        c
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NotationError> {
        Err(NotationError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), NotationError> {
        match self.peek() {
            Some(c) if c == want => {
                self.i += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn number(&mut self) -> Result<u64, NotationError> {
        let start = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            if !s.is_empty() && !self.contiguous() {
                break;
            }
            s.push(c);
            self.i += 1;
        }
        if s.is_empty() {
            return Err(NotationError::Syntax {
                pos: start,
                msg: "expected a number".into(),
            });
        }
        s.parse().map_err(|_| NotationError::Syntax {
            pos: start,
            msg: "number out of range".into(),
        })
    }

    fn at_end(&self) -> bool {
        self.i >= self.chars.len()
    }

    /// True when the next character directly follows the previous one in the
    /// source, so whitespace still separates tokens.
    fn contiguous(&self) -> bool {
        match (self.i.checked_sub(1).and_then(|j| self.chars.get(j)), self.chars.get(self.i)) {
            (Some(&(a, ca)), Some(&(b, _))) => a + ca.len_utf8() == b,
            _ => true,
        }
    }
}

/// Parses the bracket form into an expression without validating.
pub fn parse_tree_expr(s: &str) -> Result<TreeExpr, NotationError> {
    let mut c = Cursor::new(s);
    c.expect('[')?;
    let e = tree_node(&mut c, true)?;
    c.expect(']')?;
    if !c.at_end() {
        return c.err("trailing input");
    }
    Ok(e)
}

fn weight_token(c: &mut Cursor, root: bool) -> Result<WeightToken, NotationError> {
    let pos = c.pos();
    let tok = match c.peek() {
        Some('0') if c.peek_at(1) == Some('\u{0304}') || c.peek_at(1) == Some('~') => {
            c.i += 2;
            WeightToken::Bar
        }
        Some('K') => {
            for want in ['K', 'b', 'a', 'r'] {
                if c.bump() != Some(want) {
                    return Err(NotationError::Syntax {
                        pos,
                        msg: "expected 'Kbar'".into(),
                    });
                }
            }
            WeightToken::Bar
        }
        _ => WeightToken::Value(c.number()?),
    };
    if tok == WeightToken::Bar && !root {
        return Err(NotationError::Syntax {
            pos,
            msg: "the bar weight is only allowed at the root".into(),
        });
    }
    Ok(tok)
}

fn mark(c: &mut Cursor) -> Result<u64, NotationError> {
    c.bump();
    let pos = c.pos();
    let m = c.number()?;
    if m == 0 {
        return Err(NotationError::Syntax {
            pos,
            msg: "marked weights must be positive".into(),
        });
    }
    Ok(m)
}

fn is_mark(ch: Option<char>) -> bool {
    matches!(ch, Some('★') | Some('*'))
}

fn tree_node(c: &mut Cursor, root: bool) -> Result<TreeExpr, NotationError> {
    let weight = weight_token(c, root)?;
    let mut e = TreeExpr {
        weight,
        marks: Vec::new(),
        children: Vec::new(),
    };
    // `1 ★2` is accepted as shorthand for `1[★2]`
    while is_mark(c.peek()) {
        e.marks.push(mark(c)?);
    }
    if c.peek() == Some('[') {
        c.bump();
        loop {
            match c.peek() {
                p if is_mark(p) => e.marks.push(mark(c)?),
                Some('[') => {
                    c.bump();
                    e.children.push(tree_node(c, false)?);
                    c.expect(']')?;
                }
                _ => e.children.push(tree_node(c, false)?),
            }
            match c.peek() {
                Some(',') => {
                    c.bump();
                }
                Some(']') => {
                    c.bump();
                    break;
                }
                Some(ch) => return c.err(format!("expected ',' or ']', found '{ch}'")),
                None => return c.err("unclosed '['"),
            }
        }
    }
    Ok(e)
}

/// Parses and validates; a bar root resolves to weight 0.
pub fn parse_tree(s: &str) -> Result<BubbleTree, NotationError> {
    parse_tree_with_charge(s, None)
}

/// Parses and validates, resolving a bar root to `K` minus the bubble charge.
pub fn parse_tree_with_charge(s: &str, k: Option<u64>) -> Result<BubbleTree, NotationError> {
    let e = parse_tree_expr(s)?;
    Ok(BubbleTree::new(e.to_node(k)?)?)
}

pub fn print_tree(t: &BubbleTree) -> String {
    t.canonical_form().to_string()
}

/// Prints with the root weight replaced by `0~`.
pub fn print_tree_bar(t: &BubbleTree) -> String {
    let s = t.canonical_form();
    let digits = s[1..].chars().take_while(char::is_ascii_digit).count();
    format!("[0~{}", &s[1 + digits..])
}

/// A labelled point: `-x=(1,0,0,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLabel {
    pub label: String,
    pub negated: bool,
    pub coords: Option<[Rational; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigItem {
    pub point: Option<PointLabel>,
    pub screen: Option<ConfigExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConfigExpr {
    pub items: Vec<ConfigItem>,
}

impl ConfigExpr {
    /// Nesting tree: root weight 0, each item with a screen a ghost, each
    /// plain point a leaf of weight `leaf_weight(label)`.
    pub fn to_tree(&self, leaf_weight: &dyn Fn(&str) -> u64) -> BubbleTree {
        BubbleTree::from_node(self.node(leaf_weight))
    }

    fn node(&self, leaf_weight: &dyn Fn(&str) -> u64) -> TreeNode {
        TreeNode::with_children(
            0,
            self.items
                .iter()
                .map(|it| match (&it.screen, &it.point) {
                    (Some(s), _) => s.node(leaf_weight),
                    (None, Some(p)) => TreeNode::leaf(leaf_weight(&p.label)),
                    (None, None) => TreeNode::leaf(0),
                })
                .collect(),
        )
    }

    /// Labels of plain points (leaves), in reading order.
    pub fn leaf_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for it in &self.items {
            match (&it.screen, &it.point) {
                (Some(s), _) => out.extend(s.leaf_labels()),
                (None, Some(p)) => out.push(p.label.clone()),
                (None, None) => {}
            }
        }
        out
    }
}

impl fmt::Display for ConfigExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if let Some(p) = &it.point {
                if p.negated {
                    f.write_str("-")?;
                }
                f.write_str(&p.label)?;
                if let Some(cs) = &p.coords {
                    let parts: Vec<String> = cs.iter().map(format_rational).collect();
                    write!(f, "=({})", parts.join(","))?;
                }
            }
            if let Some(s) = &it.screen {
                write!(f, "{s}")?;
            }
        }
        f.write_str("]")
    }
}

pub fn parse_config(s: &str) -> Result<ConfigExpr, NotationError> {
    let mut c = Cursor::new(s);
    let e = config_bracket(&mut c)?;
    if !c.at_end() {
        return c.err("trailing input");
    }
    Ok(e)
}

pub fn print_config(c: &ConfigExpr) -> String {
    c.to_string()
}

fn config_bracket(c: &mut Cursor) -> Result<ConfigExpr, NotationError> {
    c.expect('[')?;
    let mut items = Vec::new();
    if c.peek() == Some(']') {
        return c.err("empty configuration");
    }
    loop {
        items.push(config_item(c)?);
        match c.peek() {
            Some(',') => {
                c.bump();
            }
            Some(']') => {
                c.bump();
                break;
            }
            // adjacency without a comma, as in `x[y,-y] z`
            Some(ch) if ch.is_alphabetic() || ch == '-' || ch == '−' || ch == '[' => {}
            Some(ch) => return c.err(format!("expected ',' or ']', found '{ch}'")),
            None => return c.err("unclosed '['"),
        }
    }
    Ok(ConfigExpr { items })
}

fn config_item(c: &mut Cursor) -> Result<ConfigItem, NotationError> {
    if c.peek() == Some('[') {
        return Ok(ConfigItem {
            point: None,
            screen: Some(config_bracket(c)?),
        });
    }
    let negated = matches!(c.peek(), Some('-') | Some('−'));
    if negated {
        c.bump();
    }
    let mut label = String::new();
    match c.peek() {
        Some(ch) if ch.is_alphabetic() => {}
        Some(ch) => return c.err(format!("expected a point label, found '{ch}'")),
        None => return c.err("expected a point label"),
    }
    while let Some(ch) = c.peek().filter(|ch| ch.is_alphanumeric() || *ch == '_') {
        if !label.is_empty() && !c.contiguous() {
            break;
        }
        label.push(ch);
        c.bump();
    }
    let coords = if c.peek() == Some('=') {
        c.bump();
        c.expect('(')?;
        let mut v = Vec::new();
        loop {
            let pos = c.pos();
            let mut s = String::new();
            while let Some(ch) = c.peek().filter(|ch| !matches!(ch, ',' | ')')) {
                s.push(if ch == '−' { '-' } else { ch });
                c.bump();
            }
            v.push(parse_rational(&s).map_err(|_| NotationError::Syntax {
                pos,
                msg: format!("bad rational '{s}'"),
            })?);
            match c.bump() {
                Some(',') => {}
                Some(')') => break,
                _ => return c.err("unclosed coordinate list"),
            }
        }
        let arr: [Rational; 4] = v.try_into().map_err(|v: Vec<Rational>| NotationError::Syntax {
            pos: c.pos(),
            msg: format!("expected 4 coordinates, found {}", v.len()),
        })?;
        Some(arr)
    } else {
        None
    };
    let screen = if c.peek() == Some('[') {
        Some(config_bracket(c)?)
    } else {
        None
    };
    Ok(ConfigItem {
        point: Some(PointLabel {
            label,
            negated,
            coords,
        }),
        screen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::tree::enumerate_trees;

    #[test]
    fn whitespace_separates_tokens() {
        let c = parse_config("[x1 x2 [y1, y2]]").unwrap();
        assert_eq!(print_config(&c), "[x1,x2[y1,y2]]");
        assert_eq!(print_config(&parse_config("[x1 x2]").unwrap()), "[x1,x2]");
        assert!(parse_tree("[1 1]").is_err());
        assert_eq!(print_tree(&parse_tree("[ 1 [ 12 ] ]").unwrap()), "[1[12]]");
    }

    #[test]
    fn parse_examples() {
        let t = parse_tree("[0[1,1]]").unwrap();
        assert_eq!(t.vertices()[0].weight, 0);
        assert_eq!(t.vertices()[0].children.len(), 2);
        let t = parse_tree("[3]").unwrap();
        assert_eq!(t.len(), 1);
        let t = parse_tree("[1[1[1]]]").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.depth(2), 2);
    }

    #[test]
    fn accepts_variants() {
        let a = parse_tree("[0̄ · [0 [1, 1]]]").unwrap();
        assert_eq!(a, parse_tree("[0[0[1,1]]]").unwrap());
        let b = parse_tree_with_charge("[Kbar[0[1,1]]]", Some(5)).unwrap();
        assert_eq!(b.canonical_form(), "[3[0[1,1]]]");
        assert_eq!(parse_tree("[1 ★2]").unwrap().canonical_form(), "[1[★2]]");
        assert_eq!(parse_tree("[1[*2]]").unwrap().canonical_form(), "[1[★2]]");
        assert_eq!(parse_tree("[1[[1]]]").unwrap().canonical_form(), "[1[1]]");
    }

    #[test]
    fn errors_report_position() {
        match parse_tree("[1[1,,1]]") {
            Err(NotationError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_tree("[0[0[2]]]"), Err(NotationError::Invalid(_))));
        assert!(parse_tree("[1[0~]]").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_tree(&parse_tree("[0[0[1,1]]]").unwrap()), "[0[0[1,1]]]");
        assert_eq!(print_tree(&BubbleTree::top(5)), "[5]");
        assert_eq!(print_tree_bar(&parse_tree("[0[0[1,1]]]").unwrap()), "[0~[0[1,1]]]");
    }

    #[test]
    fn round_trip_small_k() {
        for k in 1..=6 {
            for t in enumerate_trees(k) {
                let s = print_tree(&t);
                assert_eq!(parse_tree(&s).unwrap(), t);
                assert_eq!(s.matches('[').count(), s.matches(']').count());
                assert!(!s.contains(",]") && !s.contains("[,") && !s.contains(",,"));
            }
        }
    }

    #[test]
    fn config_examples() {
        let c = parse_config("[x1[x2,x3[x4,x5]]]").unwrap();
        assert_eq!(c.items.len(), 1);
        assert_eq!(c.leaf_labels(), vec!["x2", "x4", "x5"]);
        let flat = parse_config("[x,y,z]").unwrap();
        assert_eq!(flat.items.len(), 3);
        let p = parse_config("[p=(0,0,0,0)]").unwrap();
        assert_eq!(p.items[0].point.as_ref().unwrap().coords, Some([int(0), int(0), int(0), int(0)]));
        for s in ["[x1[x2,x3[x4,x5]]]", "[x,y,z]", "[p=(1/2,0,-3,0)]", "[x,[y[z,-z],w]]"] {
            let c = parse_config(s).unwrap();
            assert_eq!(print_config(&c), s);
            assert_eq!(parse_config(&print_config(&c)).unwrap(), c);
        }
    }

    #[test]
    fn config_normalizes_missing_commas() {
        let c = parse_config("[x1 [y, −y] w]").unwrap();
        assert_eq!(print_config(&c), "[x1[y,-y],w]");
    }
}
