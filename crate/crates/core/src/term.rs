use std::fmt;

use crate::algebra::{FinAlgebra, Signature};
use crate::error::{Error, Result};

/// A term over a signature, with named variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Self {
        Term::App(op.into(), Vec::new())
    }

    /// Parses prefix syntax such as `mul(x0,inv(x1))`. A bare identifier
    /// is the nullary operation of that name if the signature has one, and
    /// a variable otherwise.
    pub fn parse(src: &str, sig: &Signature) -> Result<Term> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            sig,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }

    /// Distinct variables in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Replaces variables for which `f` returns a term.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    /// Innermost rewriting to a fixpoint with oriented rules `lhs -> rhs`.
    /// Variables in a rule's left side are pattern variables; a repeated
    /// pattern variable must match equal subterms.
    pub fn rewrite(&self, rules: &[(Term, Term)]) -> Term {
        let t = match self {
            Term::Var(_) => self.clone(),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.rewrite(rules)).collect()),
        };
        for (lhs, rhs) in rules {
            let mut binding = Vec::new();
            if lhs.matches(&t, &mut binding) {
                let out = rhs.substitute(&|v: &str| {
                    binding.iter().find(|(n, _)| n == v).map(|(_, t)| (*t).clone())
                });
                return out.rewrite(rules);
            }
        }
        t
    }

    fn matches<'t>(&self, t: &'t Term, binding: &mut Vec<(String, &'t Term)>) -> bool {
        match (self, t) {
            (Term::Var(v), _) => match binding.iter().find(|(n, _)| n == v) {
                Some((_, bound)) => *bound == t,
                None => {
                    binding.push((v.clone(), t));
                    true
                }
            },
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.matches(y, binding))
            }
            _ => false,
        }
    }

    /// Compiles to a postfix program; `vars` fixes the environment slots.
    pub fn compile(&self, sig: &Signature, vars: &[String]) -> Result<Program> {
        let mut code = Vec::new();
        self.emit(sig, vars, &mut code)?;
        Ok(Program { code })
    }

    fn emit(&self, sig: &Signature, vars: &[String], code: &mut Vec<Instr>) -> Result<()> {
        match self {
            Term::Var(v) => {
                let slot = vars
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                code.push(Instr::Var(slot));
            }
            Term::App(op, args) => {
                let idx = sig.op_index(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
                if sig.arity(idx) != args.len() {
                    return Err(Error::ArityMismatch {
                        op: op.clone(),
                        expected: sig.arity(idx),
                        got: args.len(),
                    });
                }
                for a in args {
                    a.emit(sig, vars, code)?;
                }
                code.push(Instr::Op(idx, args.len()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

/// A term compiled against a signature and a fixed variable order.
#[derive(Debug, Clone)]
pub struct Program {
    code: Vec<Instr>,
}

impl Program {
    /// Evaluates with `env[i]` bound to the i-th variable. `stack` is scratch
    /// space reused across calls.
    pub fn eval_with(&self, a: &FinAlgebra, env: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for &ins in &self.code {
            match ins {
                Instr::Var(slot) => stack.push(env[slot]),
                Instr::Op(op, k) => {
                    let base = stack.len() - k;
                    let v = a.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }

    pub fn eval(&self, a: &FinAlgebra, env: &[usize]) -> usize {
        self.eval_with(a, env, &mut Vec::new())
    }
}

/// Value of `term` in `a` under `env`.
pub fn eval_term(a: &FinAlgebra, term: &Term, env: &[(&str, usize)]) -> Result<usize> {
    let names: Vec<String> = env.iter().map(|(n, _)| n.to_string()).collect();
    let values: Vec<usize> = env.iter().map(|&(_, v)| v).collect();
    for &v in &values {
        a.check_index(v)?;
    }
    Ok(term.compile(a.signature(), &names)?.eval(a, &values))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::TermParse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if self.peek() != Some(b'(') {
            return Ok(match self.sig.op_index(&name) {
                Some(op) if self.sig.arity(op) == 0 => Term::App(name, Vec::new()),
                Some(op) => {
                    return Err(Error::ArityMismatch {
                        op: name,
                        expected: self.sig.arity(op),
                        got: 0,
                    })
                }
                None => Term::Var(name),
            });
        }
        let op = self.sig.op_index(&name).ok_or_else(|| Error::UnknownOp(name.clone()))?;
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        if args.len() != self.sig.arity(op) {
            return Err(Error::ArityMismatch {
                op: name,
                expected: self.sig.arity(op),
                got: args.len(),
            });
        }
        Ok(Term::App(name, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn spec_examples() {
        let z4 = library::algebra("Z4").unwrap();
        let t = Term::parse("mul(x,x)", z4.signature()).unwrap();
        assert_eq!(eval_term(&z4, &t, &[("x", 1)]).unwrap(), 2);
        let e = Term::parse("e", z4.signature()).unwrap();
        assert_eq!(eval_term(&z4, &e, &[]).unwrap(), z4.basepoint());

        let ch = library::algebra("hslat/chain3").unwrap();
        let t = Term::parse("imp(x, y)", ch.signature()).unwrap();
        let one = ch.element("1").unwrap();
        let half = ch.element("1/2").unwrap();
        assert_eq!(eval_term(&ch, &t, &[("x", one), ("y", half)]).unwrap(), half);
    }

    #[test]
    fn errors() {
        let sig = Signature::group();
        assert!(matches!(Term::parse("add(x,y)", &sig), Err(Error::UnknownOp(_))));
        assert!(matches!(Term::parse("mul(x)", &sig), Err(Error::ArityMismatch { .. })));
        assert!(matches!(Term::parse("mul(x,y", &sig), Err(Error::TermParse { .. })));
        assert!(matches!(Term::parse("mul(x,y) z", &sig), Err(Error::TermParse { .. })));
        let z4 = library::algebra("Z4").unwrap();
        let t = Term::parse("mul(x,y)", &sig).unwrap();
        assert!(matches!(eval_term(&z4, &t, &[("x", 1)]), Err(Error::UnboundVariable(v)) if v == "y"));
        let bogus = Term::app("add", vec![]);
        assert!(matches!(eval_term(&z4, &bogus, &[]), Err(Error::UnknownOp(_))));
    }

    #[test]
    fn rewriting() {
        let sig = Signature::group();
        let p = |s: &str| Term::parse(s, &sig).unwrap();
        let rules = vec![
            (p("mul(e,x)"), p("x")),
            (p("mul(x,e)"), p("x")),
            (p("mul(x,inv(x))"), p("e")),
            (p("inv(e)"), p("e")),
        ];
        assert_eq!(p("mul(mul(y,inv(y)),mul(e,inv(e)))").rewrite(&rules), p("e"));
        assert_eq!(p("mul(y,inv(z))").rewrite(&rules), p("mul(y,inv(z))"));
    }

    #[test]
    fn display_roundtrip() {
        let sig = Signature::heyting_semilattice();
        let src = "meet(imp(imp(x0,x1),x2),imp(imp(x2,x1),x0))";
        let t = Term::parse(src, &sig).unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(t.vars(), vec!["x0", "x1", "x2"]);
        assert_eq!(t.depth(), 3);
        assert_eq!(Term::parse("top()", &sig).unwrap(), Term::constant("top"));
    }
}
