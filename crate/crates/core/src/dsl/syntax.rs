//! Text form of programs, built from the `Map`/`Else`/`IfThen` constructors.
//!
//! ```text
//! program     := "input_tokens" | Map(disjunction, program)
//! disjunction := Else() | Else(rule, disjunction) | rule
//! rule        := IfThen(predicate, rule) | transformation
//! ```
//!
//! A multi-pass program nests its passes, so the last pass is the outermost
//! `Map`. Whitespace between tokens is insignificant.

use std::fmt::Write as _;

use crate::dsl::ast::{Predicate, Program, Rule, RuleList, Transformation};
use crate::error::SyntaxError;
use crate::token::TransformationTag;

const LINE_WIDTH: usize = 80;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn predicate_text(p: &Predicate) -> String {
    match p {
        Predicate::IsToken { symbol, offset } => format!("IsToken(w, {}, {offset})", quote(symbol)),
        Predicate::Is { feature, offset } => format!("Is(w, {}, {offset})", quote(feature)),
        Predicate::TransformationApplied { tag, offset } => {
            format!("TransformationApplied(w, {}, {offset})", quote(&tag.to_string()))
        }
        Predicate::Not(inner) => format!("Not({})", predicate_text(inner)),
    }
}

pub fn transformation_text(t: &Transformation) -> String {
    match t {
        Transformation::ReplaceBy { from, to } => format!("ReplaceBy(x, {}, {})", quote(from), quote(to)),
        Transformation::ReplaceAnyBy { to } => format!("ReplaceAnyBy(x, {})", quote(to)),
        Transformation::Insert(seq) => format!("Insert(x, {})", quote(&seq.join(" "))),
        Transformation::Delete => "Delete(x)".to_string(),
        Transformation::CopyReplace(off) => format!("CopyReplace(x, w, {off})"),
        Transformation::CopyInsert(off) => format!("CopyInsert(x, w, {off})"),
        Transformation::Identity => "Identity(x)".to_string(),
    }
}

pub fn rule_text(r: &Rule) -> String {
    let mut out = String::new();
    for g in &r.guards {
        let _ = write!(out, "IfThen({}, ", predicate_text(g));
    }
    out.push_str(&transformation_text(&r.action));
    out.push_str(&")".repeat(r.guards.len()));
    out
}

fn disjunction_compact(list: &RuleList) -> String {
    match list.rules.as_slice() {
        [] => "Else()".to_string(),
        [only] => rule_text(only),
        rules => {
            let mut out = String::new();
            for r in &rules[..rules.len() - 1] {
                let _ = write!(out, "Else({}, ", rule_text(r));
            }
            out.push_str(&rule_text(&rules[rules.len() - 1]));
            out.push_str(&")".repeat(rules.len() - 1));
            out
        }
    }
}

fn program_compact(passes: &[RuleList]) -> String {
    match passes.split_last() {
        None => "input_tokens".to_string(),
        Some((last, rest)) => format!("Map({}, {})", disjunction_compact(last), program_compact(rest)),
    }
}

fn disjunction_lines(list: &RuleList, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    match list.rules.as_slice() {
        [] => out.push(format!("{pad}Else()")),
        [only] => out.push(format!("{pad}{}", rule_text(only))),
        rules => {
            for r in &rules[..rules.len() - 1] {
                out.push(format!("{pad}Else({},", rule_text(r)));
            }
            out.push(format!("{pad}{}{}", rule_text(&rules[rules.len() - 1]), ")".repeat(rules.len() - 1)));
        }
    }
}

fn program_lines(passes: &[RuleList], indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    match passes.split_last() {
        None => out.push(format!("{pad}input_tokens")),
        Some((last, rest)) => {
            out.push(format!("{pad}Map("));
            disjunction_lines(last, indent + 2, out);
            if let Some(l) = out.last_mut() {
                l.push(',');
            }
            program_lines(rest, indent + 2, out);
            if let Some(l) = out.last_mut() {
                l.push(')');
            }
        }
    }
}

/// Deterministic text rendering. Short programs stay on one line; longer
/// ones put each rule on its own line.
pub fn pretty_print(p: &Program) -> String {
    let compact = program_compact(&p.passes);
    if compact.len() <= LINE_WIDTH {
        return compact;
    }
    let mut lines = Vec::new();
    program_lines(&p.passes, 0, &mut lines);
    lines.join("\n")
}

#[derive(Debug, Clone, PartialEq)]
enum Lexeme {
    Ident(String),
    Str(String),
    Int(i32),
    Open,
    Close,
    Comma,
}

struct Parser {
    lexemes: Vec<(usize, Lexeme)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<(usize, Lexeme)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' => {
                chars.next();
                out.push((
                    at,
                    match c {
                        '(' => Lexeme::Open,
                        ')' => Lexeme::Close,
                        _ => Lexeme::Comma,
                    },
                ));
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e)) => s.push(e),
                            None => return Err(SyntaxError { offset: at, message: "unterminated string".into() }),
                        },
                        Some((_, '"')) => break,
                        Some((_, ch)) => s.push(ch),
                        None => return Err(SyntaxError { offset: at, message: "unterminated string".into() }),
                    }
                }
                out.push((at, Lexeme::Str(s)));
            }
            '-' | '+' | '0'..='9' => {
                let mut s = String::new();
                s.push(c);
                chars.next();
                while let Some(&(_, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                let v =
                    s.parse::<i32>().map_err(|_| SyntaxError { offset: at, message: format!("bad integer `{s}`") })?;
                out.push((at, Lexeme::Int(v)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                out.push((at, Lexeme::Ident(s)));
            }
            other => return Err(SyntaxError { offset: at, message: format!("unexpected character `{other}`") }),
        }
    }
    Ok(out)
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        let offset = self.lexemes.get(self.pos).map_or(self.end, |(o, _)| *o);
        Err(SyntaxError { offset, message: message.into() })
    }

    fn peek(&self) -> Option<&Lexeme> {
        self.lexemes.get(self.pos).map(|(_, l)| l)
    }

    fn next(&mut self) -> Option<Lexeme> {
        let l = self.lexemes.get(self.pos).map(|(_, l)| l.clone());
        self.pos += 1;
        l
    }

    fn expect(&mut self, want: Lexeme) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(l) if *l == want => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected {want:?}")),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Lexeme::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Lexeme::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn string(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Lexeme::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a string literal"),
        }
    }

    fn symbol(&mut self) -> Result<String, SyntaxError> {
        let s = self.string()?;
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            self.pos -= 1;
            return self.err("symbols must be non-empty and contain no whitespace");
        }
        Ok(s)
    }

    fn int(&mut self) -> Result<i32, SyntaxError> {
        match self.next() {
            Some(Lexeme::Int(v)) => Ok(v),
            _ => {
                self.pos -= 1;
                self.err("expected an integer offset")
            }
        }
    }

    fn comma(&mut self) -> Result<(), SyntaxError> {
        self.expect(Lexeme::Comma)
    }

    fn program(&mut self) -> Result<Vec<RuleList>, SyntaxError> {
        match self.ident()?.as_str() {
            "input_tokens" => Ok(Vec::new()),
            "Map" => {
                self.expect(Lexeme::Open)?;
                let list = self.disjunction()?;
                self.comma()?;
                let mut passes = self.program()?;
                self.expect(Lexeme::Close)?;
                passes.push(list);
                Ok(passes)
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected `Map` or `input_tokens`, found `{other}`"))
            }
        }
    }

    fn disjunction(&mut self) -> Result<RuleList, SyntaxError> {
        if let Some(Lexeme::Ident(s)) = self.peek() {
            if s == "Else" {
                self.pos += 1;
                self.expect(Lexeme::Open)?;
                if self.peek() == Some(&Lexeme::Close) {
                    self.pos += 1;
                    return Ok(RuleList::default());
                }
                let first = self.rule()?;
                self.comma()?;
                let rest = self.disjunction()?;
                self.expect(Lexeme::Close)?;
                if rest.is_empty() {
                    return self.err("`Else` must end in a rule");
                }
                let mut rules = vec![first];
                rules.extend(rest.rules);
                return Ok(RuleList::new(rules));
            }
        }
        Ok(RuleList::new(vec![self.rule()?]))
    }

    fn rule(&mut self) -> Result<Rule, SyntaxError> {
        let mut guards = Vec::new();
        let mut depth = 0;
        loop {
            match self.peek() {
                Some(Lexeme::Ident(s)) if s == "IfThen" => {
                    self.pos += 1;
                    self.expect(Lexeme::Open)?;
                    guards.push(self.predicate()?);
                    self.comma()?;
                    depth += 1;
                }
                _ => break,
            }
        }
        let action = self.transformation()?;
        for _ in 0..depth {
            self.expect(Lexeme::Close)?;
        }
        Ok(Rule::new(guards, action))
    }

    fn predicate(&mut self) -> Result<Predicate, SyntaxError> {
        let name = self.ident()?;
        self.expect(Lexeme::Open)?;
        let p = match name.as_str() {
            "Not" => {
                let inner = self.predicate()?;
                if matches!(inner, Predicate::Not(_)) {
                    return self.err("`Not` cannot be nested");
                }
                Predicate::Not(Box::new(inner))
            }
            "IsToken" | "Is" | "TransformationApplied" => {
                self.keyword("w")?;
                self.comma()?;
                let arg = self.string()?;
                self.comma()?;
                let offset = self.int()?;
                match name.as_str() {
                    "IsToken" => Predicate::IsToken { symbol: arg, offset },
                    "Is" => Predicate::Is { feature: arg, offset },
                    _ => match TransformationTag::parse(&arg) {
                        Some(tag) => Predicate::TransformationApplied { tag, offset },
                        None => return self.err(format!("malformed tag `{arg}`")),
                    },
                }
            }
            other => return self.err(format!("unknown predicate `{other}`")),
        };
        self.expect(Lexeme::Close)?;
        Ok(p)
    }

    fn transformation(&mut self) -> Result<Transformation, SyntaxError> {
        let name = self.ident()?;
        self.expect(Lexeme::Open)?;
        self.keyword("x")?;
        let t = match name.as_str() {
            "ReplaceBy" => {
                self.comma()?;
                let from = self.symbol()?;
                self.comma()?;
                let to = self.symbol()?;
                Transformation::ReplaceBy { from, to }
            }
            "ReplaceAnyBy" => {
                self.comma()?;
                Transformation::ReplaceAnyBy { to: self.symbol()? }
            }
            "Insert" => {
                self.comma()?;
                let seq = self.string()?;
                let syms: Vec<String> = seq.split_whitespace().map(str::to_string).collect();
                if syms.is_empty() {
                    return self.err("`Insert` needs at least one symbol");
                }
                Transformation::Insert(syms)
            }
            "Delete" => Transformation::Delete,
            "Identity" => Transformation::Identity,
            "CopyReplace" | "CopyInsert" => {
                self.comma()?;
                self.keyword("w")?;
                self.comma()?;
                let off = self.int()?;
                if name == "CopyReplace" {
                    Transformation::CopyReplace(off)
                } else {
                    Transformation::CopyInsert(off)
                }
            }
            other => return self.err(format!("unknown transformation `{other}`")),
        };
        self.expect(Lexeme::Close)?;
        Ok(t)
    }
}

/// Parses the output of [`pretty_print`].
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser { lexemes: lex(text)?, pos: 0, end: text.len() };
    let passes = p.program()?;
    if p.pos != p.lexemes.len() {
        return p.err("trailing input");
    }
    Ok(Program::new(passes))
}

/// Parses a single rule, e.g. `IfThen(Is(w, "long", 0), ReplaceAnyBy(x, "1"))`.
pub fn parse_rule(text: &str) -> Result<Rule, SyntaxError> {
    let mut p = Parser { lexemes: lex(text)?, pos: 0, end: text.len() };
    let r = p.rule()?;
    if p.pos != p.lexemes.len() {
        return p.err("trailing input");
    }
    Ok(r)
}
