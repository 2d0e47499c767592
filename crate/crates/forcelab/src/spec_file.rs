//! Line-oriented spec files packaging a forcing notion, P-names, and named
//! HF sets.
//!
//! ```text
//! # comments run to end of line
//! poset {
//!   elements: e a b
//!   order: a<e b<e
//! }
//! name zero { }
//! name s0 { zero @ a }
//! name t { zero @ e; s0 @ e }
//! set two = {{},{{}}}
//! ```
//!
//! Name bodies may reference only previously defined names, which keeps
//! definitions well-founded; `order:` pairs are generators, closed under
//! reflexivity and transitivity at build time.

use std::collections::HashMap;

use thiserror::Error;

use crate::hf::HfSet;
use crate::names::PName;
use crate::order::{OrderError, Quasiorder};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{msg} at line {line}, column {col}")]
pub struct SpecError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A parsed and validated spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingSpec {
    pub poset: Quasiorder,
    pub names: Vec<(String, PName)>,
    pub sets: Vec<(String, HfSet)>,
}

impl ForcingSpec {
    pub fn name(&self, id: &str) -> Option<&PName> {
        self.names.iter().find(|(n, _)| n == id).map(|(_, t)| t)
    }

    pub fn set(&self, id: &str) -> Option<&HfSet> {
        self.sets.iter().find(|(n, _)| n == id).map(|(_, s)| s)
    }

    /// The designated name: `t` if defined, otherwise the last definition.
    pub fn default_name(&self) -> Option<(&str, &PName)> {
        self.names
            .iter()
            .find(|(n, _)| n == "t")
            .or_else(|| self.names.last())
            .map(|(n, t)| (n.as_str(), t))
    }

    /// Looks up the spec id of a name, if it was defined in this file.
    pub fn id_of_name(&self, t: &PName) -> Option<&str> {
        self.names
            .iter()
            .find(|(_, n)| n == t)
            .map(|(id, _)| id.as_str())
    }

    /// Regenerates spec text; reparsing yields an identical spec.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("poset {\n  elements:");
        for id in self.poset.ids() {
            out.push(' ');
            out.push_str(id);
        }
        out.push_str("\n  order:");
        for p in 0..self.poset.len() {
            for q in 0..self.poset.len() {
                if p != q && self.poset.leq(p, q) {
                    out.push_str(&format!(" {}<{}", self.poset.id(p), self.poset.id(q)));
                }
            }
        }
        out.push_str("\n}\n");
        for (id, t) in &self.names {
            let body: Vec<String> = t
                .entries()
                .iter()
                .map(|(child, cond)| {
                    let child_id = self
                        .id_of_name(child)
                        .expect("spec names reference defined sub-names");
                    format!("{child_id} @ {}", self.poset.id(*cond))
                })
                .collect();
            if body.is_empty() {
                out.push_str(&format!("name {id} {{ }}\n"));
            } else {
                out.push_str(&format!("name {id} {{ {} }}\n", body.join("; ")));
            }
        }
        for (id, s) in &self.sets {
            out.push_str(&format!("set {id} = {s}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Colon,
    Semi,
    At,
    Lt,
    Eq,
    Comma,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> SpecError {
    SpecError { line, col, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, SpecError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let mut chars = line.char_indices().peekable();
        while let Some(&(ci, c)) = chars.peek() {
            let col = ci + 1;
            match c {
                '#' => break,
                c if c.is_whitespace() => {
                    chars.next();
                }
                '{' => {
                    out.push(Spanned { tok: Tok::LBrace, line: line_no, col });
                    chars.next();
                }
                '}' => {
                    out.push(Spanned { tok: Tok::RBrace, line: line_no, col });
                    chars.next();
                }
                ':' => {
                    out.push(Spanned { tok: Tok::Colon, line: line_no, col });
                    chars.next();
                }
                ';' => {
                    out.push(Spanned { tok: Tok::Semi, line: line_no, col });
                    chars.next();
                }
                '@' => {
                    out.push(Spanned { tok: Tok::At, line: line_no, col });
                    chars.next();
                }
                '<' => {
                    out.push(Spanned { tok: Tok::Lt, line: line_no, col });
                    chars.next();
                }
                '=' => {
                    out.push(Spanned { tok: Tok::Eq, line: line_no, col });
                    chars.next();
                }
                ',' => {
                    out.push(Spanned { tok: Tok::Comma, line: line_no, col });
                    chars.next();
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            ident.push(c);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Spanned { tok: Tok::Ident(ident), line: line_no, col });
                }
                c => return Err(err(line_no, col, format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_pos(&self) -> (usize, usize) {
        self.toks
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, SpecError> {
        match self.next() {
            Some(t) if t.tok == tok => Ok(t),
            Some(t) => Err(err(t.line, t.col, format!("expected {what}"))),
            None => {
                let (l, c) = self.eof_pos();
                Err(err(l, c, format!("expected {what}, found end of input")))
            }
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, usize, usize), SpecError> {
        match self.next() {
            Some(Spanned { tok: Tok::Ident(s), line, col }) => Ok((s, line, col)),
            Some(t) => Err(err(t.line, t.col, format!("expected {what}"))),
            None => {
                let (l, c) = self.eof_pos();
                Err(err(l, c, format!("expected {what}, found end of input")))
            }
        }
    }

    fn parse_hf_literal(&mut self) -> Result<HfSet, SpecError> {
        let open = self.expect(Tok::LBrace, "`{` opening a set literal")?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::RBrace)) {
            self.next();
            return Ok(HfSet::empty());
        }
        let mut children = Vec::new();
        loop {
            children.push(self.parse_hf_literal()?);
            match self.next() {
                Some(Spanned { tok: Tok::Comma, .. }) => continue,
                Some(Spanned { tok: Tok::RBrace, .. }) => {
                    return Ok(HfSet::from_children(children))
                }
                Some(t) => {
                    return Err(err(t.line, t.col, "expected `,` or `}` in set literal"))
                }
                None => return Err(err(open.line, open.col, "unbalanced set literal")),
            }
        }
    }
}

pub fn parse_spec(text: &str) -> Result<ForcingSpec, SpecError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut poset: Option<Quasiorder> = None;
    let mut names: Vec<(String, PName)> = Vec::new();
    let mut name_index: HashMap<String, usize> = HashMap::new();
    let mut sets: Vec<(String, HfSet)> = Vec::new();

    while let Some(head) = p.next() {
        let (kw, kw_line, kw_col) = match head.tok {
            Tok::Ident(s) => (s, head.line, head.col),
            _ => return Err(err(head.line, head.col, "expected `poset`, `name` or `set`")),
        };
        match kw.as_str() {
            "poset" => {
                if poset.is_some() {
                    return Err(err(kw_line, kw_col, "duplicate poset block"));
                }
                p.expect(Tok::LBrace, "`{` after `poset`")?;
                let (elems_kw, l, c) = p.expect_ident("`elements`")?;
                if elems_kw != "elements" {
                    return Err(err(l, c, "expected `elements`"));
                }
                p.expect(Tok::Colon, "`:` after `elements`")?;
                let mut elements: Vec<String> = Vec::new();
                loop {
                    match p.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Ident(id)) if id == "order" => break,
                        Some(Tok::Ident(id)) => {
                            p.next();
                            elements.push(id);
                        }
                        Some(Tok::RBrace) => break,
                        _ => {
                            let (l, c) = p.eof_pos();
                            return Err(err(l, c, "expected element id, `order:` or `}`"));
                        }
                    }
                }
                let mut generators: Vec<(String, String)> = Vec::new();
                if matches!(p.peek().map(|t| &t.tok), Some(Tok::Ident(id)) if id == "order")
                {
                    p.next();
                    p.expect(Tok::Colon, "`:` after `order`")?;
                    while let Some(Tok::Ident(_)) = p.peek().map(|t| t.tok.clone()).as_ref()
                    {
                        let (lhs, _, _) = p.expect_ident("element id")?;
                        p.expect(Tok::Lt, "`<` in order pair")?;
                        let (rhs, _, _) = p.expect_ident("element id")?;
                        generators.push((lhs, rhs));
                    }
                }
                p.expect(Tok::RBrace, "`}` closing the poset block")?;
                let built = Quasiorder::build(&elements, &generators).map_err(|e| {
                    let msg = match &e {
                        OrderError::DuplicateElement(id) => {
                            format!("duplicate element id `{id}`")
                        }
                        OrderError::UnknownElement(id) => {
                            format!("unknown element id `{id}` in order pair")
                        }
                        other => other.to_string(),
                    };
                    err(kw_line, kw_col, msg)
                })?;
                poset = Some(built);
            }
            "name" => {
                let order = poset.as_ref().ok_or_else(|| {
                    err(kw_line, kw_col, "name defined before the poset block")
                })?;
                let (id, l, c) = p.expect_ident("name id")?;
                if name_index.contains_key(&id) {
                    return Err(err(l, c, format!("duplicate name id `{id}`")));
                }
                p.expect(Tok::LBrace, "`{` after name id")?;
                let mut entries: Vec<(PName, usize)> = Vec::new();
                if !matches!(p.peek().map(|t| &t.tok), Some(Tok::RBrace)) {
                    loop {
                        let (child_id, l, c) = p.expect_ident("child name id")?;
                        let child = name_index
                            .get(&child_id)
                            .map(|&i| names[i].1.clone())
                            .ok_or_else(|| {
                                err(
                                    l,
                                    c,
                                    format!(
                                        "unknown name `{child_id}` (names may only \
                                         reference earlier definitions)"
                                    ),
                                )
                            })?;
                        p.expect(Tok::At, "`@` in name entry")?;
                        let (cond_id, l, c) = p.expect_ident("condition id")?;
                        let cond = order.index_of(&cond_id).ok_or_else(|| {
                            err(l, c, format!("unknown element id `{cond_id}`"))
                        })?;
                        entries.push((child, cond));
                        match p.next() {
                            Some(Spanned { tok: Tok::Semi, .. }) => continue,
                            Some(Spanned { tok: Tok::RBrace, .. }) => break,
                            Some(t) => {
                                return Err(err(t.line, t.col, "expected `;` or `}`"))
                            }
                            None => {
                                let (l, c) = p.eof_pos();
                                return Err(err(l, c, "unterminated name body"));
                            }
                        }
                    }
                } else {
                    p.next();
                }
                name_index.insert(id.clone(), names.len());
                names.push((id, PName::new(entries)));
            }
            "set" => {
                let (id, l, c) = p.expect_ident("set id")?;
                if sets.iter().any(|(n, _)| n == &id) {
                    return Err(err(l, c, format!("duplicate set id `{id}`")));
                }
                p.expect(Tok::Eq, "`=` after set id")?;
                let value = p.parse_hf_literal()?;
                sets.push((id, value));
            }
            other => {
                return Err(err(
                    kw_line,
                    kw_col,
                    format!("expected `poset`, `name` or `set`, found `{other}`"),
                ))
            }
        }
    }

    let poset = poset.ok_or_else(|| err(1, 1, "spec has no poset block"))?;
    for (id, t) in &names {
        t.validate(&poset)
            .map_err(|e| err(1, 1, format!("name `{id}`: {e}")))?;
    }
    Ok(ForcingSpec { poset, names, sets })
}
