//! Text form of a rule base.
//!
//! ```text
//! # comment
//! RULE R02a: IF (P_cum IS Low OR P_cum IS VeryLow) AND Min_played IS High THEN Modifier IS LP
//! RULE R99: IF Goals IS Many THEN Modifier IS LN WEIGHT 0.5
//! ```
//!
//! `AND` binds tighter than `OR`. Keywords are case-insensitive; variable and
//! term names are not. A rule may span several lines.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::membership::LinguisticVariable;
use super::rules::{Atom, Expr, Rule, RuleBase};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    UnknownTerm { variable: String, term: String },
    DuplicateRule(String),
    Weight(f64),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::UnknownTerm { variable, term } => {
                write!(f, "unknown term `{term}` for variable `{variable}`")
            }
            ParseErrorKind::DuplicateRule(id) => write!(f, "duplicate rule id `{id}`"),
            ParseErrorKind::Weight(w) => write!(f, "rule weight {w} outside (0, 1]"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Colon,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            let column = i + 1;
            let at = |tok| Token { tok, line: lineno + 1, column };
            if c.is_whitespace() {
                i += 1;
            } else if c == ':' {
                out.push(at(Tok::Colon));
                i += 1;
            } else if c == '(' {
                out.push(at(Tok::LParen));
                i += 1;
            } else if c == ')' {
                out.push(at(Tok::RParen));
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push(at(Tok::Ident(text)));
            } else if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' {
                let start = i;
                i += 1;
                while i < chars.len() {
                    let d = chars[i].1;
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1].1, 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                let v = text.parse::<f64>().map_err(|_| ParseError {
                    line: lineno + 1,
                    column,
                    kind: ParseErrorKind::Syntax(alloc::format!("bad number `{text}`")),
                })?;
                out.push(at(Tok::Number(v)));
            } else {
                return Err(ParseError {
                    line: lineno + 1,
                    column,
                    kind: ParseErrorKind::Syntax(alloc::format!("unexpected character `{c}`")),
                });
            }
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["RULE", "IF", "THEN", "IS", "AND", "OR", "WEIGHT"];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s))
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [LinguisticVariable],
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError { line, column, kind })
    }

    fn syntax<T>(&self, expected: &str) -> Result<T, ParseError> {
        let found = match self.peek().map(|t| &t.tok) {
            None => "end of input".to_string(),
            Some(Tok::Ident(s)) => alloc::format!("`{s}`"),
            Some(Tok::Number(n)) => alloc::format!("`{n}`"),
            Some(Tok::Colon) => "`:`".into(),
            Some(Tok::LParen) => "`(`".into(),
            Some(Tok::RParen) => "`)`".into(),
        };
        self.err(ParseErrorKind::Syntax(alloc::format!("expected {expected}, found {found}")))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s.eq_ignore_ascii_case(kw))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.at_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(kw)
        }
    }

    fn punct(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().map(|t| &t.tok) == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(what)
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, (usize, usize)), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), line, column }) if !is_keyword(s) => {
                let out = (s.clone(), (*line, *column));
                self.pos += 1;
                Ok(out)
            }
            _ => self.syntax(what),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (variable, vpos) = self.name("variable name")?;
        self.keyword("IS")?;
        let (term, tpos) = self.name("term name")?;
        let Some(var) = self.vars.iter().find(|v| v.name == variable) else {
            return Err(ParseError { line: vpos.0, column: vpos.1, kind: ParseErrorKind::UnknownVariable(variable) });
        };
        if var.find_term(&term).is_none() {
            return Err(ParseError {
                line: tpos.0,
                column: tpos.1,
                kind: ParseErrorKind::UnknownTerm { variable, term },
            });
        }
        Ok(Atom { variable, term })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().map(|t| &t.tok) == Some(&Tok::LParen) {
            self.pos += 1;
            let e = self.disjunction()?;
            self.punct(Tok::RParen, "`)`")?;
            Ok(e)
        } else {
            Ok(Expr::Is(self.atom()?))
        }
    }

    fn conjunction(&mut self) -> Result<Expr, ParseError> {
        let mut parts = alloc::vec![self.primary()?];
        while self.at_keyword("AND") {
            self.pos += 1;
            parts.push(self.primary()?);
        }
        Ok(Expr::and(parts))
    }

    fn disjunction(&mut self) -> Result<Expr, ParseError> {
        let mut parts = alloc::vec![self.conjunction()?];
        while self.at_keyword("OR") {
            self.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(Expr::or(parts))
    }

    fn rule(&mut self) -> Result<(Rule, (usize, usize)), ParseError> {
        self.keyword("RULE")?;
        let (id, idpos) = self.name("rule id")?;
        self.punct(Tok::Colon, "`:`")?;
        self.keyword("IF")?;
        let antecedent = self.disjunction()?;
        self.keyword("THEN")?;
        let consequent = self.atom()?;
        let mut weight = 1.0;
        if self.at_keyword("WEIGHT") {
            self.pos += 1;
            match self.peek() {
                Some(Token { tok: Tok::Number(w), .. }) => {
                    weight = *w;
                    if !(weight > 0.0 && weight <= 1.0) {
                        return self.err(ParseErrorKind::Weight(weight));
                    }
                    self.pos += 1;
                }
                _ => return self.syntax("weight"),
            }
        }
        Ok((Rule { id, antecedent, consequent, weight }, idpos))
    }
}

/// Parses rule text, resolving every name against `variables`.
pub fn parse_rules(src: &str, variables: &[LinguisticVariable]) -> Result<RuleBase, ParseError> {
    let toks = lex(src)?;
    let end = toks.last().map(|t| (t.line, t.column + 1)).unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, vars: variables, end };
    let mut seen = BTreeSet::new();
    let mut rules = Vec::new();
    while p.peek().is_some() {
        let (rule, (line, column)) = p.rule()?;
        if !seen.insert(rule.id.clone()) {
            return Err(ParseError { line, column, kind: ParseErrorKind::DuplicateRule(rule.id) });
        }
        rules.push(rule);
    }
    Ok(RuleBase { rules })
}
