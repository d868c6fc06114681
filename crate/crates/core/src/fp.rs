//! Finitely presented groups with identical (universally quantified)
//! variables, and the line-oriented text format they are read from.
//!
//! ```text
//! group L                      # optional
//! generators a, b, c, x
//! identical x
//! relators [a; x, x, x], [b; x, x, x]
//! ```
//!
//! A relator is either a plain word (`a*b*a^-1*b^-1`) or the bracket form
//! `[w1; w2, ..., wk]`, the left-normed commutator of the listed words.
//! Comments run from `#` to end of line. Integers are unrestricted.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::int::Int;
use crate::word::{left_normed_comm_word, GeneratorSymbol, Word};

/// A relator word; the bracket structure is kept when the relator was given
/// as a left-normed commutator, so evaluators can use the cheaper nested
/// commutator route instead of the expanded free word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relator {
    pub word: Word,
    pub comm: Option<Vec<Word>>,
}

impl Relator {
    pub fn plain(word: Word) -> Relator {
        Relator { word, comm: None }
    }

    pub fn left_normed(args: Vec<Word>) -> Relator {
        let word = left_normed_comm_word(&args);
        Relator {
            word,
            comm: Some(args),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpPresentation {
    pub name: Option<String>,
    pub generators: Vec<GeneratorSymbol>,
    /// Flag per generator; identical variables live in the same namespace as
    /// ordinary generators.
    pub identical: Vec<bool>,
    pub relators: Vec<Relator>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: undeclared generator `{name}`")]
    Undeclared { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: duplicate generator `{name}`")]
    Duplicate { line: usize, col: usize, name: String },
    #[error("presentation must declare at least one non-identical generator")]
    AllIdentical,
}

impl FpPresentation {
    pub fn parse(text: &str) -> Result<FpPresentation, ParseError> {
        Parser::new(text).parse()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn identical_vars(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| self.identical[i])
            .collect()
    }

    pub fn non_identical_vars(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| !self.identical[i])
            .collect()
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".into();
        }
        let mut out = String::new();
        for (i, (g, e)) in w.syllables().iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            out.push_str(&self.generators[*g].name);
            if !e.is_one() {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }

    fn format_relator(&self, r: &Relator) -> String {
        match &r.comm {
            Some(args) => {
                let mut out = String::from("[");
                for (i, w) in args.iter().enumerate() {
                    if i == 1 {
                        out.push_str("; ");
                    } else if i > 1 {
                        out.push_str(", ");
                    }
                    out.push_str(&self.format_word(w));
                }
                out.push(']');
                out
            }
            None => self.format_word(&r.word),
        }
    }

    /// Parses an expression over a fixed name set, using the relator grammar.
    /// Used by `eval` on the epimorphism generators of a computed quotient.
    pub fn parse_expression(names: &[String], text: &str) -> Result<Relator, ParseError> {
        let mut table = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            table.insert(n.clone(), i);
        }
        let mut p = Parser::new(text);
        p.names = table;
        p.parse_single_expression()
    }
}

impl fmt::Display for FpPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "group {name}")?;
        }
        writeln!(
            f,
            "generators {}",
            self.generators
                .iter()
                .map(|g| g.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        let ident: Vec<&str> = self
            .generators
            .iter()
            .zip(&self.identical)
            .filter(|(_, &id)| id)
            .map(|(g, _)| g.name.as_str())
            .collect();
        if !ident.is_empty() {
            writeln!(f, "identical {}", ident.join(", "))?;
        }
        write!(
            f,
            "relators {}",
            self.relators
                .iter()
                .map(|r| self.format_relator(r))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(Int),
    Star,
    Caret,
    Comma,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Parser {
    /// Tokens per logical line.
    lines: Vec<Vec<Spanned>>,
    names: BTreeMap<String, usize>,
}

impl Parser {
    fn new(text: &str) -> Parser {
        let mut lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks = tokenize_line(line, lineno + 1);
            if !toks.is_empty() {
                lines.push(toks);
            }
        }
        Parser {
            lines,
            names: BTreeMap::new(),
        }
    }

    fn parse(mut self) -> Result<FpPresentation, ParseError> {
        let mut name = None;
        let mut generators: Vec<GeneratorSymbol> = Vec::new();
        let mut identical: Vec<bool> = Vec::new();
        let mut relator_lines: Vec<Vec<Spanned>> = Vec::new();
        let mut identical_names: Vec<Spanned> = Vec::new();

        let lines = std::mem::take(&mut self.lines);
        for line in lines {
            let head = &line[0];
            let keyword = match &head.tok {
                Tok::Name(n) => n.clone(),
                _ => {
                    return Err(syntax(head, "expected a keyword at start of line"));
                }
            };
            let rest = &line[1..];
            match keyword.as_str() {
                "group" => {
                    name = Some(expect_single_name(rest, head)?);
                }
                "generators" => {
                    for sp in name_list(rest, head)? {
                        let n = name_of(&sp)?;
                        if self.names.contains_key(&n) {
                            return Err(ParseError::Duplicate {
                                line: sp.line,
                                col: sp.col,
                                name: n,
                            });
                        }
                        let index = generators.len();
                        self.names.insert(n.clone(), index);
                        generators.push(GeneratorSymbol { name: n, index });
                        identical.push(false);
                    }
                }
                "identical" => {
                    identical_names.extend(name_list(rest, head)?);
                }
                "relators" => {
                    if !rest.is_empty() {
                        relator_lines.push(rest.to_vec());
                    }
                }
                other => {
                    return Err(syntax(head, &format!("unknown keyword `{other}`")));
                }
            }
        }

        for sp in identical_names {
            let n = name_of(&sp)?;
            match self.names.get(&n) {
                Some(&i) => identical[i] = true,
                None => {
                    return Err(ParseError::Undeclared {
                        line: sp.line,
                        col: sp.col,
                        name: n,
                    });
                }
            }
        }
        if !identical.iter().any(|id| !id) || generators.is_empty() {
            return Err(ParseError::AllIdentical);
        }

        let mut relators = Vec::new();
        for line in relator_lines {
            let mut cur = Cursor::new(&line);
            loop {
                relators.push(self.parse_relator(&mut cur)?);
                match cur.peek() {
                    Some(sp) if sp.tok == Tok::Comma => {
                        cur.advance();
                    }
                    Some(sp) => return Err(syntax(sp, "expected `,` between relators")),
                    None => break,
                }
            }
        }

        Ok(FpPresentation {
            name,
            generators,
            identical,
            relators,
        })
    }

    fn parse_single_expression(&mut self) -> Result<Relator, ParseError> {
        let lines = std::mem::take(&mut self.lines);
        let toks: Vec<Spanned> = lines.into_iter().flatten().collect();
        if toks.is_empty() {
            return Ok(Relator::plain(Word::identity()));
        }
        let mut cur = Cursor::new(&toks);
        let r = self.parse_relator(&mut cur)?;
        if let Some(sp) = cur.peek() {
            return Err(syntax(sp, "unexpected trailing input"));
        }
        Ok(r)
    }

    fn parse_relator(&self, cur: &mut Cursor) -> Result<Relator, ParseError> {
        match cur.peek() {
            Some(sp) if sp.tok == Tok::LBracket => {
                cur.advance();
                let mut args = vec![self.parse_word(cur)?];
                cur.expect(Tok::Semi, "expected `;` after first commutator argument")?;
                args.push(self.parse_word(cur)?);
                loop {
                    match cur.peek() {
                        Some(sp) if sp.tok == Tok::Comma || sp.tok == Tok::Semi => {
                            cur.advance();
                            args.push(self.parse_word(cur)?);
                        }
                        Some(sp) if sp.tok == Tok::RBracket => {
                            cur.advance();
                            break;
                        }
                        Some(sp) => return Err(syntax(sp, "expected `,` or `]`")),
                        None => {
                            return Err(cur.eof_error("unterminated `[`"));
                        }
                    }
                }
                Ok(Relator::left_normed(args))
            }
            Some(_) => Ok(Relator::plain(self.parse_word(cur)?)),
            None => Err(cur.eof_error("expected a relator")),
        }
    }

    fn parse_word(&self, cur: &mut Cursor) -> Result<Word, ParseError> {
        let mut w = self.parse_term(cur)?;
        while let Some(sp) = cur.peek() {
            if sp.tok != Tok::Star {
                break;
            }
            cur.advance();
            w = w.concat(&self.parse_term(cur)?);
        }
        Ok(w)
    }

    fn parse_term(&self, cur: &mut Cursor) -> Result<Word, ParseError> {
        let sp = cur
            .peek()
            .cloned()
            .ok_or_else(|| cur.eof_error("expected a term"))?;
        let base = match &sp.tok {
            Tok::Name(n) => {
                cur.advance();
                let idx = self.names.get(n).copied().ok_or(ParseError::Undeclared {
                    line: sp.line,
                    col: sp.col,
                    name: n.clone(),
                })?;
                Word::generator(idx)
            }
            Tok::LParen => {
                cur.advance();
                let inner = self.parse_word(cur)?;
                cur.expect(Tok::RParen, "expected `)`")?;
                inner
            }
            _ => return Err(syntax(&sp, "expected a generator or `(`")),
        };
        if let Some(next) = cur.peek() {
            if next.tok == Tok::Caret {
                cur.advance();
                let exp_sp = cur
                    .peek()
                    .cloned()
                    .ok_or_else(|| cur.eof_error("expected an exponent"))?;
                if let Tok::Int(e) = &exp_sp.tok {
                    cur.advance();
                    return Ok(crate::word::word_power(&base, e));
                }
                return Err(syntax(&exp_sp, "expected an integer exponent"));
            }
        }
        Ok(base)
    }
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Spanned]) -> Cursor<'a> {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    fn expect(&mut self, tok: Tok, msg: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(sp) if sp.tok == tok => {
                self.advance();
                Ok(())
            }
            Some(sp) => Err(syntax(sp, msg)),
            None => Err(self.eof_error(msg)),
        }
    }

    fn eof_error(&self, msg: &str) -> ParseError {
        let (line, col) = self
            .toks
            .last()
            .map(|sp| (sp.line, sp.col + 1))
            .unwrap_or((1, 1));
        ParseError::Syntax {
            line,
            col,
            msg: format!("{msg} (end of input)"),
        }
    }
}

fn syntax(sp: &Spanned, msg: &str) -> ParseError {
    ParseError::Syntax {
        line: sp.line,
        col: sp.col,
        msg: msg.to_string(),
    }
}

fn name_of(sp: &Spanned) -> Result<String, ParseError> {
    match &sp.tok {
        Tok::Name(n) => Ok(n.clone()),
        _ => Err(syntax(sp, "expected a name")),
    }
}

fn expect_single_name(rest: &[Spanned], head: &Spanned) -> Result<String, ParseError> {
    match rest {
        [sp] => name_of(sp),
        _ => Err(syntax(head, "expected exactly one name")),
    }
}

fn name_list(rest: &[Spanned], head: &Spanned) -> Result<Vec<Spanned>, ParseError> {
    if rest.is_empty() {
        return Err(syntax(head, "expected a name list"));
    }
    let mut out = Vec::new();
    let mut want_name = true;
    for sp in rest {
        if want_name {
            name_of(sp)?;
            out.push(sp.clone());
        } else if sp.tok != Tok::Comma {
            return Err(syntax(sp, "expected `,`"));
        }
        want_name = !want_name;
    }
    if want_name {
        return Err(syntax(rest.last().unwrap(), "trailing `,`"));
    }
    Ok(out)
}

fn tokenize_line(line: &str, lineno: usize) -> Vec<Spanned> {
    let mut toks = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(tok) = tok {
            toks.push(Spanned {
                tok,
                line: lineno,
                col,
            });
            i += 1;
            continue;
        }
        if c == '-' || c.is_ascii_digit() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<Int>() {
                Ok(v) => toks.push(Spanned {
                    tok: Tok::Int(v),
                    line: lineno,
                    col,
                }),
                Err(_) => toks.push(Spanned {
                    // a bare `-`; let the parser report it in context
                    tok: Tok::Name(text),
                    line: lineno,
                    col,
                }),
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push(Spanned {
                tok: Tok::Name(chars[start..i].iter().collect()),
                line: lineno,
                col,
            });
            continue;
        }
        // Unknown character: surface as a name so the parser errors with
        // position information.
        toks.push(Spanned {
            tok: Tok::Name(c.to_string()),
            line: lineno,
            col,
        });
        i += 1;
    }
    toks
}
