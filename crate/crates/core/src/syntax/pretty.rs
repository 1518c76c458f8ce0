use super::{IType, Term};

struct TermStyle {
    lambda: &'static str,
    dot: &'static str,
}

const ASCII: TermStyle = TermStyle {
    lambda: "\\",
    dot: ". ",
};

const UNICODE: TermStyle = TermStyle {
    lambda: "λ",
    dot: ".",
};

/// ASCII rendering with minimal parentheses: `\x. x (y z)`.
pub fn pretty_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &ASCII, &mut out);
    out
}

/// Compact rendering with `λ`: `λx.x (y z)`.
pub fn pretty_term_unicode(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &UNICODE, &mut out);
    out
}

fn write_term(t: &Term, style: &TermStyle, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Abs(x, body) => {
            out.push_str(style.lambda);
            out.push_str(x.as_str());
            out.push_str(style.dot);
            write_term(body, style, out);
        }
        Term::App(fun, arg) => {
            if fun.is_abs() {
                parenthesized(fun, style, out);
            } else {
                write_term(fun, style, out);
            }
            out.push(' ');
            if matches!(**arg, Term::Var(_)) {
                write_term(arg, style, out);
            } else {
                parenthesized(arg, style, out);
            }
        }
    }
}

fn parenthesized(t: &Term, style: &TermStyle, out: &mut String) {
    out.push('(');
    write_term(t, style, out);
    out.push(')');
}

struct TypeStyle {
    arrow: &'static str,
    and: &'static str,
    top: &'static str,
}

/// ASCII rendering: `a /\ b -> c`.
pub fn pretty_type(t: &IType) -> String {
    let mut out = String::new();
    write_type(
        t,
        &TypeStyle {
            arrow: " -> ",
            and: " /\\ ",
            top: "top",
        },
        &mut out,
    );
    out
}

/// `a ∧ b → c`.
pub fn pretty_type_unicode(t: &IType) -> String {
    let mut out = String::new();
    write_type(
        t,
        &TypeStyle {
            arrow: " → ",
            and: " ∧ ",
            top: "⊤",
        },
        &mut out,
    );
    out
}

fn write_type(t: &IType, style: &TypeStyle, out: &mut String) {
    match t {
        IType::TVar(name) => out.push_str(name),
        IType::Top => out.push_str(style.top),
        IType::Arrow(l, r) => {
            write_type_wrapped(l, matches!(**l, IType::Arrow(..)), style, out);
            out.push_str(style.arrow);
            write_type(r, style, out);
        }
        IType::And(l, r) => {
            write_type_wrapped(l, matches!(**l, IType::Arrow(..)), style, out);
            out.push_str(style.and);
            write_type_wrapped(r, matches!(**r, IType::Arrow(..) | IType::And(..)), style, out);
        }
    }
}

fn write_type_wrapped(t: &IType, wrap: bool, style: &TypeStyle, out: &mut String) {
    if wrap {
        out.push('(');
        write_type(t, style, out);
        out.push(')');
    } else {
        write_type(t, style, out);
    }
}
