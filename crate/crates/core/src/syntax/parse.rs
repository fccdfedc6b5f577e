//! S-expression reader for formulas and the signature file format.

use super::{is_identifier, Formula, QSentence, QuantifierKind, Signature, Term};
use crate::rat::{fmt_rational, in_unit_interval, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { line, col, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Formula(Formula),
    QSentence(QSentence),
}

impl Parsed {
    pub fn into_formula(self) -> Option<Formula> {
        match self {
            Parsed::Formula(f) => Some(f),
            Parsed::QSentence(_) => None,
        }
    }

    /// Pure first-order input is read as a q-sentence with classical kinds
    /// when it is prenex.
    pub fn into_qsentence(self) -> Option<QSentence> {
        match self {
            Parsed::QSentence(q) => Some(q),
            Parsed::Formula(f) => {
                let (prefix, body) = f.split_prefix();
                let prefix = prefix
                    .into_iter()
                    .map(|(all, x)| {
                        let k = if all { QuantifierKind::Forall } else { QuantifierKind::Exists };
                        (k, x.to_string())
                    })
                    .collect();
                QSentence::new(prefix, body.clone()).ok()
            }
        }
    }
}

#[derive(Debug)]
enum Sx {
    Atom(String, usize, usize),
    List(Vec<Sx>, usize, usize),
}

impl Sx {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sx::Atom(_, l, c) | Sx::List(_, l, c) => (*l, *c),
        }
    }
}

fn read_all(text: &str) -> Result<Vec<Sx>, SyntaxError> {
    let mut stack: Vec<(Vec<Sx>, usize, usize)> = vec![(Vec::new(), 1, 1)];
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            '(' => {
                stack.push((Vec::new(), line, col));
                chars.next();
                col += 1;
            }
            ')' => {
                if stack.len() == 1 {
                    return err(line, col, "unbalanced `)`");
                }
                let (items, l, c) = stack.pop().unwrap();
                stack.last_mut().unwrap().0.push(Sx::List(items, l, c));
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            _ => {
                let (l, c) = (line, col);
                let mut tok = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2 == '(' || c2 == ')' || c2 == ';' || c2.is_whitespace() {
                        break;
                    }
                    tok.push(c2);
                    chars.next();
                    col += 1;
                }
                stack.last_mut().unwrap().0.push(Sx::Atom(tok, l, c));
            }
        }
    }
    if stack.len() > 1 {
        let (_, l, c) = stack.pop().unwrap();
        return err(l, c, "unclosed `(`");
    }
    Ok(stack.pop().unwrap().0)
}

/// Parses one formula. Forms using `qgeq`/`qgt` produce a q-sentence.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Parsed, SyntaxError> {
    let mut items = read_all(text)?;
    if items.len() != 1 {
        let (l, c) = items.get(1).map(|s| s.pos()).unwrap_or((1, 1));
        return err(l, c, format!("expected exactly one formula, found {}", items.len()));
    }
    let sx = items.pop().unwrap();
    let p = Reader { sig };
    if has_q(&sx) {
        p.qsentence(&sx).map(Parsed::QSentence)
    } else {
        p.formula(&sx).map(Parsed::Formula)
    }
}

fn head(sx: &Sx) -> Option<&str> {
    match sx {
        Sx::List(items, ..) => match items.first() {
            Some(Sx::Atom(h, ..)) => Some(h.as_str()),
            _ => None,
        },
        _ => None,
    }
}

fn has_q(sx: &Sx) -> bool {
    match sx {
        Sx::Atom(..) => false,
        Sx::List(items, ..) => {
            matches!(head(sx), Some("qgeq" | "qgt")) || items.iter().any(has_q)
        }
    }
}

struct Reader<'a> {
    sig: &'a Signature,
}

impl Reader<'_> {
    fn qsentence(&self, sx: &Sx) -> Result<QSentence, SyntaxError> {
        let mut prefix = Vec::new();
        let mut cur = sx;
        loop {
            let (items, l, c) = match cur {
                Sx::List(items, l, c) => (items, *l, *c),
                Sx::Atom(_, l, c) => return err(*l, *c, "expected a formula"),
            };
            let kind = match head(cur) {
                Some("forall") => Some((QuantifierKind::Forall, 1)),
                Some("exists") => Some((QuantifierKind::Exists, 1)),
                Some(h @ ("qgeq" | "qgt")) => {
                    if items.len() != 4 {
                        return err(l, c, format!("`{h}` takes a rational, a variable and a formula"));
                    }
                    let r = match &items[1] {
                        Sx::Atom(t, tl, tc) => match parse_rational(t) {
                            Ok(r) if in_unit_interval(&r) => r,
                            Ok(r) => {
                                return err(*tl, *tc, format!("threshold {} outside [0,1]", fmt_rational(&r)))
                            }
                            Err(e) => return err(*tl, *tc, e.to_string()),
                        },
                        other => {
                            let (tl, tc) = other.pos();
                            return err(tl, tc, "expected a rational threshold");
                        }
                    };
                    if h == "qgeq" {
                        Some((QuantifierKind::WeakAtLeast(r), 2))
                    } else {
                        Some((QuantifierKind::StrongGreater(r), 2))
                    }
                }
                _ => None,
            };
            match kind {
                Some((k, vpos)) => {
                    if items.len() != vpos + 2 {
                        return err(l, c, "quantifier takes a variable and a formula");
                    }
                    let x = self.binder(&items[vpos])?;
                    if prefix.iter().any(|(_, y): &(QuantifierKind, String)| *y == x) {
                        let (vl, vc) = items[vpos].pos();
                        return err(vl, vc, format!("prefix binds `{x}` twice"));
                    }
                    prefix.push((k, x));
                    cur = &items[vpos + 1];
                }
                None => break,
            }
        }
        if has_q(cur) {
            let (l, c) = cur.pos();
            return err(l, c, "threshold quantifier nested under a connective (q-sentences must be prenex)");
        }
        let matrix = self.formula(cur)?;
        if !matrix.is_quantifier_free() {
            let (l, c) = cur.pos();
            return err(l, c, "q-sentence matrix must be quantifier-free");
        }
        let (l, c) = sx.pos();
        QSentence::new(prefix, matrix).map_err(|e| SyntaxError { line: l, col: c, msg: e.to_string() })
    }

    fn binder(&self, sx: &Sx) -> Result<String, SyntaxError> {
        match sx {
            Sx::Atom(x, l, c) => {
                if !is_identifier(x) {
                    return err(*l, *c, format!("`{x}` is not an identifier"));
                }
                if self.sig.is_constant(x) {
                    return err(*l, *c, format!("cannot bind constant `{x}`"));
                }
                Ok(x.clone())
            }
            Sx::List(_, l, c) => err(*l, *c, "expected a variable"),
        }
    }

    fn term(&self, sx: &Sx) -> Result<Term, SyntaxError> {
        match sx {
            Sx::Atom(x, l, c) => {
                if !is_identifier(x) {
                    return err(*l, *c, format!("`{x}` is not an identifier"));
                }
                if self.sig.is_constant(x) {
                    Ok(Term::Const(x.clone()))
                } else {
                    Ok(Term::Var(x.clone()))
                }
            }
            Sx::List(_, l, c) => err(*l, *c, "expected a term"),
        }
    }

    fn formula(&self, sx: &Sx) -> Result<Formula, SyntaxError> {
        let (items, l, c) = match sx {
            Sx::List(items, l, c) => (items, *l, *c),
            Sx::Atom(a, l, c) => return err(*l, *c, format!("expected a formula, found `{a}`")),
        };
        let h = match head(sx) {
            Some(h) => h,
            None => return err(l, c, "expected an operator or predicate name"),
        };
        let args = &items[1..];
        let arity = |n: usize| -> Result<(), SyntaxError> {
            if args.len() == n {
                Ok(())
            } else {
                err(l, c, format!("`{h}` takes {n} argument(s), found {}", args.len()))
            }
        };
        let sub = |i: usize| self.formula(&args[i]).map(Box::new);
        Ok(match h {
            "not" => {
                arity(1)?;
                Formula::Not(sub(0)?)
            }
            "and" | "or" => {
                let gs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                if h == "and" {
                    Formula::And(gs)
                } else {
                    Formula::Or(gs)
                }
            }
            "implies" => {
                arity(2)?;
                Formula::Implies(sub(0)?, sub(1)?)
            }
            "iff" => {
                arity(2)?;
                Formula::Iff(sub(0)?, sub(1)?)
            }
            "forall" | "exists" => {
                arity(2)?;
                let x = self.binder(&args[0])?;
                if h == "forall" {
                    Formula::Forall(x, sub(1)?)
                } else {
                    Formula::Exists(x, sub(1)?)
                }
            }
            "qgeq" | "qgt" => {
                return err(l, c, "threshold quantifier nested under a connective (q-sentences must be prenex)")
            }
            "=" => {
                arity(2)?;
                if !self.sig.has_equality() {
                    return err(l, c, "equality is not declared in the signature");
                }
                Formula::Equal(self.term(&args[0])?, self.term(&args[1])?)
            }
            p => {
                let a = match self.sig.arity(p) {
                    Some(a) => a,
                    None => return err(l, c, format!("undeclared predicate `{p}`")),
                };
                if args.len() != a {
                    return err(l, c, format!("`{p}` has arity {a} but is applied to {} terms", args.len()));
                }
                let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Formula::Atom(p.to_string(), ts)
            }
        })
    }
}

/// Reads `pred <name> <arity>`, `const <name>` and `equality` lines.
pub fn parse_signature(text: &str) -> Result<Signature, SyntaxError> {
    let mut preds = Vec::new();
    let mut consts = Vec::new();
    let mut equality = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["pred", name, arity] => match arity.parse::<usize>() {
                Ok(a) => preds.push((name.to_string(), a)),
                Err(_) => return err(i + 1, 1, format!("bad arity `{arity}`")),
            },
            ["const", name] => consts.push(name.to_string()),
            ["equality"] => equality = true,
            _ => return err(i + 1, 1, format!("unrecognized signature line `{line}`")),
        }
    }
    Signature::new(preds, consts, equality).map_err(|e| SyntaxError { line: 0, col: 0, msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::syntax::build::*;

    fn sig() -> Signature {
        Signature::new(
            vec![("P".into(), 1), ("Q".into(), 1), ("S".into(), 3), ("R".into(), 2)],
            vec!["a".into()],
            true,
        )
        .unwrap()
    }

    #[test]
    fn forall_single_node() {
        let p = parse_formula("(forall x (P x))", &sig()).unwrap();
        assert_eq!(p, Parsed::Formula(forall("x", app("P", &["x"]))));
    }

    #[test]
    fn qgeq_gives_qsentence() {
        let p = parse_formula("(qgeq 1/2 x (not (P x)))", &sig()).unwrap();
        let q = QSentence::new(
            vec![(QuantifierKind::WeakAtLeast(rat(1, 2)), "x".into())],
            not(app("P", &["x"])),
        )
        .unwrap();
        assert_eq!(p, Parsed::QSentence(q));
    }

    #[test]
    fn nested_quantifiers() {
        let p = parse_formula("(exists x (forall y (S x y y)))", &sig()).unwrap();
        assert_eq!(p, Parsed::Formula(exists("x", forall("y", app("S", &["x", "y", "y"])))));
    }

    #[test]
    fn constants_resolve() {
        let p = parse_formula("(P a)", &sig()).unwrap();
        assert_eq!(p, Parsed::Formula(atom("P", &[Term::cst("a")])));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_formula("(and (P x)\n  (Z x))", &sig()).unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(e.msg.contains("undeclared"));
        let e = parse_formula("(P x y)", &sig()).unwrap_err();
        assert!(e.msg.contains("arity"));
        let e = parse_formula("(and (qgeq 1/2 x (P x)) (P a))", &sig()).unwrap_err();
        assert!(e.msg.contains("prenex"));
        let e = parse_formula("(qgeq 1/2 x (forall y (and (P x) (exists z (P z)))))", &sig()).unwrap_err();
        assert!(e.msg.contains("quantifier-free"));
        assert!(parse_formula("(P x", &sig()).is_err());
        assert!(parse_formula("(qgt 3/2 x (P x))", &sig()).is_err());
        assert!(parse_formula("(= x y)", &Signature::monadic(&["P"])).is_err());
    }

    #[test]
    fn mixed_prefix() {
        let p = parse_formula("(forall x (qgt 1/3 y (R x y)))", &sig()).unwrap();
        match p {
            Parsed::QSentence(q) => {
                assert_eq!(q.kinds(), vec![QuantifierKind::Forall, QuantifierKind::StrongGreater(rat(1, 3))]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn signature_file() {
        let s = parse_signature("# demo\npred P 1\npred R 2\nconst c\nequality\n").unwrap();
        assert_eq!(s.arity("R"), Some(2));
        assert!(s.is_constant("c") && s.has_equality());
        assert_eq!(parse_signature(&s.to_text()).unwrap(), s);
        assert!(parse_signature("pred P 0").is_err());
        assert!(parse_signature("pred P 1\nconst P").is_err());
    }
}
