use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::term::{occurs_unguarded, Kind, Label, Name, SessionType, Var};

/// 1-based line and column of a character in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { message: String, pos: Position },
    #[error("{pos}: duplicate label `{label}`")]
    DuplicateLabel { label: Label, pos: Position },
    #[error("{pos}: unbound variable `{name}`")]
    UnboundVariable { name: Name, pos: Position },
    #[error("{pos}: recursion `rec {name}` is not contractive")]
    NonContractive { name: Name, pos: Position },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::DuplicateLabel { pos, .. }
            | ParseError::UnboundVariable { pos, .. }
            | ParseError::NonContractive { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    Plus,
    Amp,
    At,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Number(n) => write!(f, "`{}`", n),
            Tok::Plus => f.write_str("`+`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::At => f.write_str("`@`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '&' => Tok::Amp,
            '@' => Tok::At,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                let n = s
                    .parse()
                    .map_err(|_| ParseError::Syntax { message: format!("number `{}` out of range", s), pos })?;
                out.push((Tok::Number(n), pos));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' || c == '$' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || matches!(d, '_' | '\'' | '$')) {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                out.push((Tok::Ident(s), pos));
                continue;
            }
            other => {
                return Err(ParseError::Syntax { message: format!("unexpected character `{}`", other), pos });
            }
        };
        bump(&mut chars);
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    scope: Vec<Name>,
}

impl Parser {
    fn peek(&self) -> &(Tok, Position) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Position, ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            Err(ParseError::Syntax { message: format!("expected {}, found {}", want, tok), pos })
        }
    }

    fn ty(&mut self) -> Result<SessionType, ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Ident(s) if s == "end" => Ok(SessionType::end()),
            Tok::Ident(s) if s == "rec" => {
                let (tok, npos) = self.next();
                let name = match tok {
                    Tok::Ident(n) if n != "end" && n != "rec" => Name::new(n),
                    other => {
                        return Err(ParseError::Syntax {
                            message: format!("expected a recursion variable, found {}", other),
                            pos: npos,
                        })
                    }
                };
                self.expect(Tok::Dot)?;
                self.scope.push(name.clone());
                let body = self.ty();
                self.scope.pop();
                let body = body?;
                if occurs_unguarded(&body, 0) {
                    return Err(ParseError::NonContractive { name, pos });
                }
                Ok(SessionType::from_kind_unchecked(Kind::Rec(name, body)))
            }
            Tok::Ident(s) => {
                let name = Name::new(&s);
                match self.scope.iter().rev().position(|n| *n == name) {
                    Some(index) => {
                        Ok(SessionType::from_kind_unchecked(Kind::Var(Var::Bound { index: index as u32, name })))
                    }
                    None => Err(ParseError::UnboundVariable { name, pos }),
                }
            }
            Tok::Plus => {
                let choices = self.choices()?;
                Ok(SessionType::from_kind_unchecked(Kind::Select(choices)))
            }
            Tok::Amp => {
                // annotations are accepted and dropped
                if self.peek().0 == Tok::At {
                    self.next();
                    let (tok, npos) = self.next();
                    if !matches!(tok, Tok::Number(_)) {
                        return Err(ParseError::Syntax {
                            message: format!("expected an annotation number, found {}", tok),
                            pos: npos,
                        });
                    }
                }
                let choices = self.choices()?;
                Ok(SessionType::from_kind_unchecked(Kind::Branch(choices, None)))
            }
            other => Err(ParseError::Syntax { message: format!("expected a session type, found {}", other), pos }),
        }
    }

    fn choices(&mut self) -> Result<Vec<(Label, SessionType)>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let (tok, pos) = self.next();
            let label = match tok {
                Tok::Ident(l) => Label::new(l),
                other => return Err(ParseError::Syntax { message: format!("expected a label, found {}", other), pos }),
            };
            if !seen.insert(label.clone()) {
                return Err(ParseError::DuplicateLabel { label, pos });
            }
            self.expect(Tok::Colon)?;
            let t = self.ty()?;
            out.push((label, t));
            let (tok, pos) = self.next();
            match tok {
                Tok::Comma => continue,
                Tok::RBrace => return Ok(out),
                other => {
                    return Err(ParseError::Syntax { message: format!("expected `,` or `}}`, found {}", other), pos })
                }
            }
        }
    }
}

/// Parses a closed, contractive session type. `#` starts a line comment.
pub fn parse(text: &str) -> Result<SessionType, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, scope: Vec::new() };
    let t = p.ty()?;
    let (tok, pos) = p.next();
    if tok != Tok::Eof {
        return Err(ParseError::Syntax { message: format!("unexpected trailing {}", tok), pos });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_end() {
        assert!(parse("end").unwrap().identical(&SessionType::end()));
    }

    #[test]
    fn parse_recursive_example() {
        let t = parse("rec t. &{l: +{l: t}}").unwrap();
        let expected =
            SessionType::rec("t", SessionType::branch([("l", SessionType::select([("l", SessionType::var("t"))]))]));
        assert!(t.identical(&expected));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse("rec t.&{l:+{l:t}}").unwrap();
        let b = parse("  rec  t .\n & { l : + { l : t } }  ").unwrap();
        assert!(a.identical(&b));
    }

    #[test]
    fn rejects_non_contractive() {
        let err = parse("rec t. t").unwrap_err();
        assert!(matches!(err, ParseError::NonContractive { ref name, .. } if name.as_str() == "t"));
        assert_eq!(err.position(), Position { line: 1, column: 1 });
        assert!(matches!(parse("rec t. rec u. t"), Err(ParseError::NonContractive { .. })));
        assert!(parse("rec t. rec u. +{l: t}").is_ok());
    }

    #[test]
    fn rejects_unbound_variable() {
        let err = parse("&{l: x}").unwrap_err();
        assert_eq!(err, ParseError::UnboundVariable { name: Name::new("x"), pos: Position { line: 1, column: 6 } });
    }

    #[test]
    fn rejects_duplicate_label() {
        let err = parse("+{a: end, a: end}").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateLabel { .. }));
        assert_eq!(err.position().column, 11);
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "+{}", "&{l end}", "rec . end", "end end", "+{l: end", "rec end. end", "%"] {
            assert!(matches!(parse(bad), Err(ParseError::Syntax { .. })), "{bad:?}");
        }
    }

    #[test]
    fn annotations_are_dropped() {
        let t = parse("&@4{l: end}").unwrap();
        assert!(t.identical(&parse("&{l: end}").unwrap()));
    }

    #[test]
    fn comments() {
        let t = parse("# a comment\n+{l: end} # trailing").unwrap();
        assert!(t.identical(&parse("+{l: end}").unwrap()));
    }

    #[test]
    fn queue_symbol_labels() {
        let t = parse("rec t. +{a: &{a: t}, $: &{$: t}}").unwrap();
        assert_eq!(t.to_string(), "rec t. +{a: &{a: t}, $: &{$: t}}");
    }
}
