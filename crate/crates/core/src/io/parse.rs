use std::collections::HashSet;

use super::{ActRow, Character, EdgeDecl, GraphDocument, ParseError, QueryBlock, SetDecl, SquareDecl};
use crate::perdual::Angle;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

const PUNCT: &[char] = &['{', '}', ',', '=', '@', '(', ')'];

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let col = |byte: usize| line[..byte].chars().count() + 1;
    for &(i, c) in &chars {
        if c.is_whitespace() || PUNCT.contains(&c) {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: col(s) });
            }
            if PUNCT.contains(&c) {
                out.push(Token { text: &line[i..i + c.len_utf8()], column: col(i) });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: col(s) });
    }
    out
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.number, column, message: message.into() }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.end_column, |t| t.column)
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self.peek().cloned().ok_or_else(|| self.error(self.end_column, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn ident(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(what)?;
        if PUNCT.iter().any(|p| t.text.starts_with(*p)) {
            return Err(self.error(t.column, format!("expected {what}, found {:?}", t.text)));
        }
        Ok(t)
    }

    fn expect(&mut self, punct: &str) -> Result<(), ParseError> {
        let col = self.column();
        let t = self.next(&format!("{punct:?}"))?;
        if t.text != punct {
            return Err(self.error(col, format!("expected {punct:?}, found {:?}", t.text)));
        }
        Ok(())
    }

    fn eat(&mut self, punct: &str) -> bool {
        if self.peek().is_some_and(|t| t.text == punct) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.tokens.len()
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(t.column, format!("unexpected {:?}", t.text))),
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.ident(what)?;
        t.text.parse().map_err(|_| self.error(t.column, format!("expected {what}, found {:?}", t.text)))
    }

    fn angle(&mut self) -> Result<Angle, ParseError> {
        let t = self.ident("a rational angle")?;
        t.text.parse().map_err(|_| self.error(t.column, format!("{:?} is not a rational angle", t.text)))
    }

    /// `p/q`, `(p/q, ...)` or `()`.
    fn character(&mut self) -> Result<Character, ParseError> {
        if self.eat("(") {
            let mut angles = Vec::new();
            if self.eat(")") {
                return Ok(angles);
            }
            loop {
                angles.push(self.angle()?);
                if self.eat(")") {
                    return Ok(angles);
                }
                self.expect(",")?;
            }
        }
        Ok(vec![self.angle()?])
    }

    fn set(&mut self) -> Result<Vec<(String, usize)>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        if self.eat("}") {
            return Ok(out);
        }
        loop {
            let t = self.ident("a vertex")?;
            out.push((t.text.to_string(), t.column));
            if self.eat("}") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}

#[derive(Default)]
struct Names {
    vertices: HashSet<String>,
    edges: HashSet<String>,
    group: HashSet<String>,
}

pub(super) fn parse(text: &str) -> Result<GraphDocument, ParseError> {
    let mut k: Option<usize> = None;
    let mut doc = GraphDocument::default();
    let mut names = Names::default();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        if tokens.is_empty() {
            continue;
        }
        let mut line = Line { number: i + 1, tokens, pos: 0, end_column: content.chars().count() + 1 };
        let key = line.ident("a keyword")?;
        if k.is_none() && key.text != "k" {
            return Err(line.error(key.column, "missing k"));
        }
        match key.text {
            "k" => {
                if k.is_some() {
                    return Err(line.error(key.column, "k given twice"));
                }
                let col = line.column();
                let n = line.number("k")?;
                if n == 0 {
                    return Err(line.error(col, "k must be positive"));
                }
                k = Some(n);
                doc.k = n;
            }
            "vertices" => {
                if line.at_end() {
                    return Err(line.error(line.end_column, "expected a vertex"));
                }
                while !line.at_end() {
                    let t = line.ident("a vertex")?;
                    if !names.vertices.insert(t.text.to_string()) {
                        return Err(ParseError::DuplicateId { line: line.number, column: t.column, id: t.text.into() });
                    }
                    doc.vertices.push(t.text.to_string());
                }
            }
            "edge" => {
                let name = line.ident("an edge name")?;
                let col = line.column();
                let color = line.number("a colour")?;
                if color == 0 || color > doc.k {
                    return Err(line.error(col, format!("colour must be in 1..={}", doc.k)));
                }
                let range = line.ident("a range vertex")?;
                let source = line.ident("a source vertex")?;
                line.finish()?;
                for t in [&range, &source] {
                    if !names.vertices.contains(t.text) {
                        return Err(dangling(&line, t));
                    }
                }
                if !names.edges.insert(name.text.to_string()) {
                    return Err(ParseError::DuplicateId { line: line.number, column: name.column, id: name.text.into() });
                }
                doc.edges.push(EdgeDecl {
                    name: name.text.into(),
                    color,
                    range: range.text.into(),
                    source: source.text.into(),
                });
            }
            "square" => {
                let a = line.ident("an edge")?;
                let b = line.ident("an edge")?;
                line.expect("=")?;
                let c = line.ident("an edge")?;
                let d = line.ident("an edge")?;
                line.finish()?;
                for t in [&a, &b, &c, &d] {
                    if !names.edges.contains(t.text) {
                        return Err(dangling(&line, t));
                    }
                }
                doc.squares.push(SquareDecl {
                    first: a.text.into(),
                    second: b.text.into(),
                    first_out: c.text.into(),
                    second_out: d.text.into(),
                });
            }
            "group" => {
                if doc.group.is_some() {
                    return Err(line.error(key.column, "group given twice"));
                }
                let mut elems = Vec::new();
                if line.at_end() {
                    return Err(line.error(line.end_column, "expected a group element"));
                }
                while !line.at_end() {
                    let t = line.ident("a group element")?;
                    if !names.group.insert(t.text.to_string()) {
                        return Err(ParseError::DuplicateId { line: line.number, column: t.column, id: t.text.into() });
                    }
                    elems.push(t.text.to_string());
                }
                doc.group = Some(elems);
            }
            "mul" => {
                let g = line.ident("a group element")?;
                let h = line.ident("a group element")?;
                line.expect("=")?;
                let gh = line.ident("a group element")?;
                line.finish()?;
                for t in [&g, &h, &gh] {
                    if !names.group.contains(t.text) {
                        return Err(dangling(&line, t));
                    }
                }
                doc.mul.push([g.text.into(), h.text.into(), gh.text.into()]);
            }
            "act" => {
                let g = line.ident("a group element")?;
                let e = line.ident("an edge")?;
                line.expect("=")?;
                let e2 = line.ident("an edge")?;
                let g2 = line.ident("a group element")?;
                line.finish()?;
                for t in [&g, &g2] {
                    if !names.group.contains(t.text) {
                        return Err(dangling(&line, t));
                    }
                }
                for t in [&e, &e2] {
                    if !names.edges.contains(t.text) {
                        return Err(dangling(&line, t));
                    }
                }
                doc.act.push(ActRow {
                    element: g.text.into(),
                    edge: e.text.into(),
                    edge_out: e2.text.into(),
                    element_out: g2.text.into(),
                });
            }
            "query" => {
                let kind = line.ident("point, gamma or tau")?;
                let set = line.set()?;
                for (v, col) in &set {
                    if !names.vertices.contains(v) {
                        return Err(ParseError::DanglingReference { line: line.number, column: *col, id: v.clone() });
                    }
                }
                let set: Vec<String> = set.into_iter().map(|(v, _)| v).collect();
                match kind.text {
                    "point" => {
                        let character = if line.eat("@") { Some(line.character()?) } else { None };
                        line.finish()?;
                        doc.queries.push(QueryBlock { tail: set, character, gamma: vec![], tau: vec![] });
                    }
                    "gamma" | "tau" => {
                        let Some(block) = doc.queries.last_mut() else {
                            return Err(line.error(kind.column, "query set line before any query point"));
                        };
                        if kind.text == "gamma" {
                            line.finish()?;
                            block.gamma.push(set);
                        } else {
                            line.expect("@")?;
                            let d = line.ident("full, finite or subgroup")?;
                            let mut chars = Vec::new();
                            while !line.at_end() {
                                chars.push(line.character()?);
                            }
                            let decl = match d.text {
                                "full" if chars.is_empty() => SetDecl::Full,
                                "full" => return Err(line.error(d.column, "full takes no characters")),
                                "finite" => SetDecl::Finite(chars),
                                "subgroup" => SetDecl::Subgroup(chars),
                                other => {
                                    return Err(line.error(d.column, format!("unknown character set {other:?}")))
                                }
                            };
                            block.tau.push((set, decl));
                        }
                    }
                    other => return Err(line.error(kind.column, format!("unknown query kind {other:?}"))),
                }
            }
            other => return Err(line.error(key.column, format!("unknown keyword {other:?}"))),
        }
    }
    if k.is_none() {
        return Err(ParseError::Syntax { line: 1, column: 1, message: "missing k".into() });
    }
    Ok(doc)
}

fn dangling(line: &Line<'_>, t: &Token<'_>) -> ParseError {
    ParseError::DanglingReference { line: line.number, column: t.column, id: t.text.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let t = tokenize("query point {u, w} @ (1/3,0)");
        let texts: Vec<&str> = t.iter().map(|t| t.text).collect();
        assert_eq!(texts, ["query", "point", "{", "u", ",", "w", "}", "@", "(", "1/3", ",", "0", ")"]);
        assert_eq!(t[3].column, 14);
    }
}
