//! S-expression format for derivations:
//!
//! ```text
//! (var x A)  (top t)  (absI x A D)  (appE D D)  (andI D D)  (andE1 D)  (andE2 D)
//! ```
//!
//! Terms and types are written in the ordinary concrete syntax, either as a
//! bare identifier or as one parenthesized group, e.g. `(var f (a -> b))` or
//! `(top ((\x. x x) (\x. x x)))`. Inside a term position, groups headed by
//! `lam` or `app` are read as S-expression terms: `(lam x (app x x))`.

use super::{Derivation, Side};
use crate::syntax::{parse_term, parse_type, pretty_term, pretty_type, IType, SyntaxError, Term, VarName};

#[derive(Debug)]
enum Sexp<'a> {
    Atom { text: &'a str, at: usize },
    List { items: Vec<Sexp<'a>>, start: usize, end: usize },
}

impl<'a> Sexp<'a> {
    fn start(&self) -> usize {
        match self {
            Sexp::Atom { at, .. } => *at,
            Sexp::List { start, .. } => *start,
        }
    }
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp<'a>, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.text[self.pos..].chars().next() {
            None => Err(SyntaxError::new(start, vec!["`(`", "atom"], "end of input")),
            Some(')') => Err(SyntaxError::new(start, vec!["`(`", "atom"], "`)`")),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.text[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List {
                                items,
                                start,
                                end: self.pos,
                            });
                        }
                        None => return Err(SyntaxError::new(self.pos, vec!["`)`"], "end of input")),
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                while let Some(c) = self.text[self.pos..].chars().next() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                Ok(Sexp::Atom {
                    text: &self.text[start..self.pos],
                    at: start,
                })
            }
        }
    }
}

struct Decoder<'a> {
    text: &'a str,
}

impl<'a> Decoder<'a> {
    fn raw(&self, s: &Sexp<'a>) -> &'a str {
        match s {
            Sexp::Atom { text, .. } => text,
            Sexp::List { start, end, .. } => &self.text[*start..*end],
        }
    }

    fn var(&self, s: &Sexp<'a>) -> Result<VarName, SyntaxError> {
        match s {
            Sexp::Atom { text, at } => {
                VarName::new(*text).map_err(|_| SyntaxError::new(*at, vec!["variable"], format!("`{text}`")))
            }
            Sexp::List { start, .. } => Err(SyntaxError::new(*start, vec!["variable"], "`(`")),
        }
    }

    fn ty(&self, s: &Sexp<'a>) -> Result<IType, SyntaxError> {
        parse_type(self.raw(s)).map_err(|e| e.shifted(s.start()))
    }

    fn term(&self, s: &Sexp<'a>) -> Result<Term, SyntaxError> {
        if let Sexp::List { items, start, .. } = s {
            if let Some(Sexp::Atom { text, .. }) = items.first() {
                match (*text, items.len()) {
                    ("lam", 3) => return Ok(Term::Abs(self.var(&items[1])?, Box::new(self.term(&items[2])?))),
                    ("app", 3) => return Ok(Term::app(self.term(&items[1])?, self.term(&items[2])?)),
                    ("lam" | "app", _) => {
                        return Err(SyntaxError::new(*start, vec!["(lam x T)", "(app T T)"], "wrong arity"))
                    }
                    _ => {}
                }
            }
        }
        parse_term(self.raw(s)).map_err(|e| e.shifted(s.start()))
    }

    fn derivation(&self, s: &Sexp<'a>) -> Result<Derivation, SyntaxError> {
        const FORMS: [&str; 7] = ["var", "top", "absI", "appE", "andI", "andE1", "andE2"];
        let (items, start) = match s {
            Sexp::List { items, start, .. } => (items, *start),
            Sexp::Atom { text, at } => {
                return Err(SyntaxError::new(*at, vec!["`(`"], format!("`{text}`")));
            }
        };
        let head = match items.first() {
            Some(Sexp::Atom { text, .. }) => *text,
            Some(other) => return Err(SyntaxError::new(other.start(), FORMS.to_vec(), "`(`")),
            None => return Err(SyntaxError::new(start + 1, FORMS.to_vec(), "`)`")),
        };
        let arity = match head {
            "absI" => 4,
            "var" | "appE" | "andI" => 3,
            "top" | "andE1" | "andE2" => 2,
            other => return Err(SyntaxError::new(start + 1, FORMS.to_vec(), format!("`{other}`"))),
        };
        if items.len() != arity {
            let at = items.get(arity).map(Sexp::start).unwrap_or(start);
            return Err(SyntaxError::new(
                at,
                vec![match arity {
                    2 => "one argument",
                    3 => "two arguments",
                    _ => "three arguments",
                }],
                format!("{} arguments to `{head}`", items.len() - 1),
            ));
        }
        Ok(match head {
            "var" => Derivation::VarAxiom(self.var(&items[1])?, self.ty(&items[2])?),
            "top" => Derivation::TopAxiom(self.term(&items[1])?),
            "absI" => {
                let x = self.var(&items[1])?;
                let ty = self.ty(&items[2])?;
                Derivation::ArrowIntro(x, ty, Box::new(self.derivation(&items[3])?))
            }
            "appE" => Derivation::arrow_elim(self.derivation(&items[1])?, self.derivation(&items[2])?),
            "andI" => Derivation::and_intro(self.derivation(&items[1])?, self.derivation(&items[2])?),
            "andE1" => Derivation::and_elim(Side::First, self.derivation(&items[1])?),
            _ => Derivation::and_elim(Side::Second, self.derivation(&items[1])?),
        })
    }
}

pub fn parse_derivation(text: &str) -> Result<Derivation, SyntaxError> {
    let mut reader = Reader { text, pos: 0 };
    let sexp = reader.read()?;
    reader.skip_ws();
    if reader.pos != text.len() {
        return Err(SyntaxError::new(reader.pos, vec!["end of input"], "trailing input"));
    }
    Decoder { text }.derivation(&sexp)
}

/// Canonical one-line form.
pub fn serialize_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write(d, &mut out);
    out
}

fn write_type(ty: &IType, out: &mut String) {
    match ty {
        IType::TVar(_) | IType::Top => out.push_str(&pretty_type(ty)),
        _ => {
            out.push('(');
            out.push_str(&pretty_type(ty));
            out.push(')');
        }
    }
}

fn write(d: &Derivation, out: &mut String) {
    out.push('(');
    out.push_str(d.rule_name());
    match d {
        Derivation::VarAxiom(x, ty) => {
            out.push(' ');
            out.push_str(x.as_str());
            out.push(' ');
            write_type(ty, out);
        }
        Derivation::TopAxiom(t) => {
            out.push(' ');
            match t {
                Term::Var(x) => out.push_str(x.as_str()),
                _ => {
                    out.push('(');
                    out.push_str(&pretty_term(t));
                    out.push(')');
                }
            }
        }
        Derivation::ArrowIntro(x, ty, body) => {
            out.push(' ');
            out.push_str(x.as_str());
            out.push(' ');
            write_type(ty, out);
            out.push(' ');
            write(body, out);
        }
        _ => {
            for child in d.children() {
                out.push(' ');
                write(child, out);
            }
        }
    }
    out.push(')');
}
