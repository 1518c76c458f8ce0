use std::fmt;

use super::{is_identifier, IType, Term, VarName};

/// Parse failure with the byte offset of the offending token and the set of
/// tokens that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl SyntaxError {
    pub(crate) fn new(offset: usize, expected: Vec<&'static str>, found: impl Into<String>) -> Self {
        SyntaxError {
            offset,
            expected,
            found: found.into(),
        }
    }

    pub(crate) fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Arrow,
    And,
    TopGlyph,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::And => "`/\\`".into(),
            Tok::TopGlyph => "`⊤`".into(),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '\\' | 'λ' => {
                chars.next();
                out.push((pos, Tok::Lambda));
            }
            '.' => {
                chars.next();
                out.push((pos, Tok::Dot));
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::RParen));
            }
            '→' => {
                chars.next();
                out.push((pos, Tok::Arrow));
            }
            '∧' => {
                chars.next();
                out.push((pos, Tok::And));
            }
            '⊤' => {
                chars.next();
                out.push((pos, Tok::TopGlyph));
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => out.push((pos, Tok::Arrow)),
                    _ => return Err(SyntaxError::new(pos, vec!["`->`"], "`-`")),
                }
            }
            '/' => {
                chars.next();
                match chars.next() {
                    Some((_, '\\')) => out.push((pos, Tok::And)),
                    _ => return Err(SyntaxError::new(pos, vec!["`/\\`"], "`/`")),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(text[pos..end].to_string())));
            }
            other => {
                return Err(SyntaxError::new(
                    pos,
                    vec!["identifier", "`\\`", "`(`"],
                    format!("`{other}`"),
                ))
            }
        }
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: Vec<&'static str>) -> SyntaxError {
        SyntaxError::new(self.offset(), expected, self.peek().describe())
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["end of input"]))
        }
    }

    fn var(&mut self) -> Result<VarName, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) if is_identifier(&name) => {
                self.bump();
                Ok(VarName(name))
            }
            _ => Err(self.error(vec!["variable"])),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if *self.peek() == Tok::Lambda {
            self.bump();
            let binder = self.var()?;
            self.expect(Tok::Dot, "`.`")?;
            let body = self.term()?;
            return Ok(Term::Abs(binder, Box::new(body)));
        }
        let mut acc = match self.term_atom()? {
            Some(atom) => atom,
            None => return Err(self.error(vec!["variable", "`\\`", "`(`"])),
        };
        while let Some(arg) = self.term_atom()? {
            acc = Term::App(Box::new(acc), Box::new(arg));
        }
        Ok(acc)
    }

    fn term_atom(&mut self) -> Result<Option<Term>, SyntaxError> {
        match self.peek() {
            Tok::Ident(_) => Ok(Some(Term::Var(self.var()?))),
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Some(inner))
            }
            _ => Ok(None),
        }
    }

    fn ty(&mut self) -> Result<IType, SyntaxError> {
        let left = self.conj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.ty()?;
            return Ok(IType::arrow(left, right));
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<IType, SyntaxError> {
        let mut acc = self.type_atom()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.type_atom()?;
            acc = IType::and(acc, right);
        }
        Ok(acc)
    }

    fn type_atom(&mut self) -> Result<IType, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(if name == "top" {
                    IType::Top
                } else {
                    IType::TVar(name)
                })
            }
            Tok::TopGlyph => {
                self.bump();
                Ok(IType::Top)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(vec!["type variable", "`top`", "`(`"])),
        }
    }
}

/// Parses `term ::= lam | app`, `lam ::= ('\' | 'λ') var '.' term`,
/// `app ::= atom+`, `atom ::= var | '(' term ')'`.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a type: `->` is right-associative, `/\` binds tighter and is
/// left-associative, `top` is ⊤.
pub fn parse_type(text: &str) -> Result<IType, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}
