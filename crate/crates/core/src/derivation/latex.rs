//! bussproofs rendering. Each node contributes exactly one `\AxiomC`,
//! `\UnaryInfC` or `\BinaryInfC` line.

use super::{Derivation, Side};
use crate::syntax::{IType, Term};

/// A `prooftree` environment, to be pasted into a document that loads
/// `bussproofs`.
pub fn render_latex_fragment(d: &Derivation) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    write_node(d, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

/// A complete document that compiles on its own.
pub fn render_latex(d: &Derivation) -> String {
    format!(
        "\\documentclass{{article}}\n\\usepackage{{amsmath,amssymb}}\n\\usepackage{{bussproofs}}\n\\begin{{document}}\n{}\\end{{document}}\n",
        render_latex_fragment(d)
    )
}

fn write_node(d: &Derivation, out: &mut String) {
    for child in d.children() {
        write_node(child, out);
    }
    let judgement = format!("${} : {}$", latex_term(&d.subject()), latex_type(&d.conclusion_type_or_top()));
    let (label, command) = match d {
        Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => (None, "AxiomC"),
        Derivation::ArrowIntro(x, ..) => (Some(format!("$({{\\to}}\\mathrm{{I}}_{{{}}})$", ident(x.as_str()))), "UnaryInfC"),
        Derivation::ArrowElim(..) => (Some("$({\\to}\\mathrm{E})$".to_string()), "BinaryInfC"),
        Derivation::AndIntro(..) => (Some("$({\\wedge}\\mathrm{I})$".to_string()), "BinaryInfC"),
        Derivation::AndElim(side, _) => {
            let i = match side {
                Side::First => 1,
                Side::Second => 2,
            };
            (Some(format!("$({{\\wedge}}\\mathrm{{E}}_{i})$")), "UnaryInfC")
        }
    };
    if let Some(label) = label {
        out.push_str(&format!("\\RightLabel{{{label}}} "));
    }
    out.push_str(&format!("\\{command}{{{judgement}}}\n"));
}

impl Derivation {
    fn conclusion_type_or_top(&self) -> IType {
        self.conclusion_type().unwrap_or(IType::Top)
    }
}

fn ident(name: &str) -> String {
    name.replace('_', "\\_")
}

fn latex_term(t: &Term) -> String {
    match t {
        Term::Var(x) => ident(x.as_str()),
        Term::Abs(x, body) => format!("\\lambda {}.\\,{}", ident(x.as_str()), latex_term(body)),
        Term::App(fun, arg) => {
            let f = if fun.is_abs() {
                format!("({})", latex_term(fun))
            } else {
                latex_term(fun)
            };
            let a = match **arg {
                Term::Var(_) => latex_term(arg),
                _ => format!("({})", latex_term(arg)),
            };
            format!("{f}\\;{a}")
        }
    }
}

fn latex_type(ty: &IType) -> String {
    match ty {
        IType::TVar(a) => ident(a),
        IType::Top => "\\top".to_string(),
        IType::Arrow(a, b) => {
            let left = match **a {
                IType::Arrow(..) => format!("({})", latex_type(a)),
                _ => latex_type(a),
            };
            format!("{left} \\to {}", latex_type(b))
        }
        IType::And(a, b) => {
            let left = match **a {
                IType::Arrow(..) => format!("({})", latex_type(a)),
                _ => latex_type(a),
            };
            let right = match **b {
                IType::Arrow(..) | IType::And(..) => format!("({})", latex_type(b)),
                _ => latex_type(b),
            };
            format!("{left} \\wedge {right}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::parse_derivation;

    fn inference_lines(s: &str) -> usize {
        s.lines()
            .filter(|l| l.contains("\\AxiomC") || l.contains("\\UnaryInfC") || l.contains("\\BinaryInfC"))
            .count()
    }

    #[test]
    fn identity_is_two_lines() {
        let d = parse_derivation("(absI x a (var x a))").unwrap();
        let out = render_latex_fragment(&d);
        assert_eq!(inference_lines(&out), 2);
        assert!(out.contains("\\UnaryInfC{$\\lambda x.\\,x : a \\to a$}"));
        assert!(out.contains("\\AxiomC{$x : a$}"));
    }

    #[test]
    fn axiom_is_one_line() {
        let d = parse_derivation("(var x a)").unwrap();
        assert_eq!(inference_lines(&render_latex(&d)), 1);
    }

    #[test]
    fn one_line_per_node() {
        let d = parse_derivation(
            "(appE (absI w top (var y (a -> b) /\\ c)) (top ((\\x. x x) (\\x. x x))))",
        );
        // the type group above is malformed on purpose: a group must be one argument
        assert!(d.is_err());
        let d = parse_derivation(
            "(andE1 (appE (absI w top (var y ((a -> b) /\\ c))) (top ((\\x. x x) (\\x. x x)))))",
        )
        .unwrap();
        let out = render_latex(&d);
        assert_eq!(inference_lines(&out), d.size());
        assert!(out.contains("(\\lambda x.\\,x\\;x)\\;(\\lambda x.\\,x\\;x) : \\top"));
        assert!(out.contains("(a \\to b) \\wedge c"));
        assert!(out.starts_with("\\documentclass{article}"));
        assert!(out.contains("\\usepackage{bussproofs}"));
    }

    #[test]
    fn underscores_are_escaped() {
        let d = parse_derivation("(var x_1 a_b)").unwrap();
        assert!(render_latex_fragment(&d).contains("x\\_1 : a\\_b"));
    }
}
