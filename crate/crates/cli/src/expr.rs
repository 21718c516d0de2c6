//! Expression grammar shared by the computing subcommands.
//!
//! Atoms: integers, `u`, `y<n>`, `zeta(<a>,<b>)`, `[n]`. Operators `+ - * ^`
//! and the circle operator `o`, with precedence `^ > * > o > + -`.
//! Whitespace-insensitive. Each subcommand evaluates in its own context
//! (the K-homology ring or the Hopf ring), rejecting out-of-context symbols
//! with a position-tagged error.

use std::fmt;

use kucomm_core::exact::Int;
use kucomm_core::hopf::{circ, circ_outside_stable_range, star, HopfElem};
use kucomm_core::ku::{ku_mul, KuElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Bracket(i64),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '[' => {
                let start = i;
                i += 1;
                let mut j = i;
                if j < bytes.len() && bytes[j] as char == '-' {
                    j += 1;
                }
                while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    j += 1;
                }
                if j == i || j >= bytes.len() || bytes[j] as char != ']' {
                    return err(start, "expected an integer component like [2] or [-1]");
                }
                let n: i64 = src[i..j]
                    .parse()
                    .map_err(|_| ExprError {
                        position: start,
                        message: String::from("component out of range"),
                    })?;
                out.push((start, Tok::Bracket(n)));
                i = j + 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = src[start..i].parse().map_err(|_| ExprError {
                    position: start,
                    message: String::from("integer literal out of range"),
                })?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Int(i64),
    /// `u`, `x`, or `y<n>` (the index carried separately)
    Sym { pos: usize, name: String },
    /// `zeta(a,b)` or `z(a,b)`
    Gen { pos: usize, name: String, a: u32, b: u32 },
    Bracket(i64),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Circ(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<usize, ExprError> {
        match self.next() {
            Some((p, t)) if t == tok => Ok(p),
            Some((p, _)) => err(p, format!("expected {what}")),
            None => err(self.len, format!("expected {what}, found end of input")),
        }
    }

    // expr := circterm (('+'|'-') circterm)*
    fn expr(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.circterm()?;
        loop {
            match self.peek() {
                Some((_, Tok::Plus)) => {
                    self.next();
                    let rhs = self.circterm()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some((_, Tok::Minus)) => {
                    self.next();
                    let rhs = self.circterm()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // circterm := multerm ('o' multerm)*
    fn circterm(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.multerm()?;
        while let Some((_, Tok::Ident(id))) = self.peek() {
            if id != "o" {
                break;
            }
            self.next();
            let rhs = self.multerm()?;
            lhs = Ast::Circ(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // multerm := unary ('*' unary)*
    fn multerm(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.unary()?;
        while let Some((_, Tok::Star)) = self.peek() {
            self.next();
            let rhs = self.unary()?;
            lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, ExprError> {
        if let Some((_, Tok::Minus)) = self.peek() {
            self.next();
            let inner = self.unary()?;
            return Ok(Ast::Neg(Box::new(inner)));
        }
        self.power()
    }

    // power := atom ('^' NAT)*
    fn power(&mut self) -> Result<Ast, ExprError> {
        let mut base = self.atom()?;
        while let Some((_, Tok::Caret)) = self.peek() {
            self.next();
            match self.next() {
                Some((_, Tok::Int(n))) if n >= 0 => {
                    base = Ast::Pow(Box::new(base), n as u32);
                }
                Some((p, _)) => return err(p, "expected a nonnegative exponent"),
                None => return err(self.len, "expected an exponent, found end of input"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ExprError> {
        match self.next() {
            Some((_, Tok::Int(n))) => Ok(Ast::Int(n)),
            Some((_, Tok::Bracket(n))) => Ok(Ast::Bracket(n)),
            Some((p, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    _ => err(p, "unclosed parenthesis"),
                }
            }
            Some((p, Tok::Ident(id))) => self.ident_atom(p, id),
            Some((p, _)) => err(p, "expected a value"),
            None => err(self.len, "expected a value, found end of input"),
        }
    }

    fn ident_atom(&mut self, p: usize, id: String) -> Result<Ast, ExprError> {
        if id == "z" || id == "zeta" {
            self.expect(Tok::LParen, "'(' after generator name")?;
            let a = self.nat()?;
            self.expect(Tok::Comma, "',' between indices")?;
            let b = self.nat()?;
            self.expect(Tok::RParen, "')' closing generator indices")?;
            if a == 0 && b == 0 {
                return err(p, "generator index (0,0) does not exist");
            }
            return Ok(Ast::Gen { pos: p, name: id, a, b });
        }
        if id == "o" {
            return err(p, "the circle operator needs a left operand");
        }
        Ok(Ast::Sym { pos: p, name: id })
    }

    fn nat(&mut self) -> Result<u32, ExprError> {
        match self.next() {
            Some((p, Tok::Int(n))) => {
                if n < 0 {
                    err(p, "index must be nonnegative")
                } else {
                    Ok(n as u32)
                }
            }
            Some((p, _)) => err(p, "expected an index"),
            None => err(self.len, "expected an index, found end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast, ExprError> {
    let toks = tokenize(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let ast = parser.expr()?;
    if let Some((p, _)) = parser.peek() {
        return err(*p, "trailing input after expression");
    }
    Ok(ast)
}

/// Evaluate in the K-homology ring: symbols `u` and `y<n>`, star-free.
pub fn eval_ku(ast: &Ast) -> Result<KuElem, ExprError> {
    match ast {
        Ast::Int(n) => Ok(KuElem::one().scale(&Int::from(*n))),
        Ast::Sym { pos, name } => {
            if name == "u" {
                return Ok(KuElem::u_pow(1));
            }
            if let Some(rest) = name.strip_prefix('y') {
                if let Ok(n) = rest.parse::<u32>() {
                    if n >= 1 {
                        return Ok(KuElem::y(n));
                    }
                }
                if rest.is_empty() {
                    return err(*pos, "write y1, y2, ... with an explicit index");
                }
            }
            err(*pos, format!("unknown symbol '{name}' in this ring (use u, y1, y2, ...)"))
        }
        Ast::Gen { pos, name, .. } => err(
            *pos,
            format!("'{name}(a,b)' is a Hopf ring generator; this command works in the K-homology ring"),
        ),
        Ast::Bracket(_) => Err(ExprError {
            position: 0,
            message: String::from("components [n] belong to the Hopf ring; this command works in the K-homology ring"),
        }),
        Ast::Neg(x) => Ok(eval_ku(x)?.scale(&Int::from(-1))),
        Ast::Add(a, b) => Ok(eval_ku(a)?.add(&eval_ku(b)?)),
        Ast::Sub(a, b) => Ok(eval_ku(a)?.sub(&eval_ku(b)?)),
        Ast::Mul(a, b) => Ok(ku_mul(&eval_ku(a)?, &eval_ku(b)?)),
        Ast::Circ(..) => Err(ExprError {
            position: 0,
            message: String::from("the circle operator belongs to the Hopf ring"),
        }),
        Ast::Pow(base, n) => {
            let b = eval_ku(base)?;
            let mut acc = KuElem::one();
            for _ in 0..*n {
                acc = ku_mul(&acc, &b);
            }
            Ok(acc)
        }
    }
}

/// Evaluate in the Hopf ring: `zeta(a,b)`, components `[n]`, `*` is the
/// star product and `o` the circle product.
pub fn eval_hopf(ast: &Ast) -> Result<HopfElem, ExprError> {
    eval_hopf_flagged(ast).map(|(e, _)| e)
}

/// Like [`eval_hopf`], additionally reporting whether any circle product
/// combined terms on nonzero components below the stable range, where the
/// mixed component rule is an extrapolation of its stated hypothesis.
pub fn eval_hopf_flagged(ast: &Ast) -> Result<(HopfElem, bool), ExprError> {
    match ast {
        Ast::Int(n) => Ok((HopfElem::one().scale(&kucomm_core::exact::rat(*n)), false)),
        Ast::Sym { pos, name } => err(
            *pos,
            format!("unknown symbol '{name}' in the Hopf ring (use zeta(a,b) and [n])"),
        ),
        Ast::Gen { pos, name, a, b } => {
            if name == "z" {
                return err(*pos, "z(a,b) is output notation; the Hopf ring generator is zeta(a,b)");
            }
            Ok((HopfElem::zeta(*a, *b), false))
        }
        Ast::Bracket(n) => Ok((HopfElem::grouplike(*n), false)),
        Ast::Neg(x) => {
            let (v, f) = eval_hopf_flagged(x)?;
            Ok((v.scale(&kucomm_core::exact::rat(-1)), f))
        }
        Ast::Add(a, b) => {
            let (va, fa) = eval_hopf_flagged(a)?;
            let (vb, fb) = eval_hopf_flagged(b)?;
            Ok((va.add(&vb), fa || fb))
        }
        Ast::Sub(a, b) => {
            let (va, fa) = eval_hopf_flagged(a)?;
            let (vb, fb) = eval_hopf_flagged(b)?;
            Ok((va.sub(&vb), fa || fb))
        }
        Ast::Mul(a, b) => {
            let (va, fa) = eval_hopf_flagged(a)?;
            let (vb, fb) = eval_hopf_flagged(b)?;
            Ok((star(&va, &vb), fa || fb))
        }
        Ast::Circ(a, b) => {
            let (va, fa) = eval_hopf_flagged(a)?;
            let (vb, fb) = eval_hopf_flagged(b)?;
            let flag = fa || fb || circ_outside_stable_range(&va, &vb);
            Ok((circ(&va, &vb), flag))
        }
        Ast::Pow(base, n) => {
            let (b, f) = eval_hopf_flagged(base)?;
            let mut acc = HopfElem::one();
            for _ in 0..*n {
                acc = star(&acc, &b);
            }
            Ok((acc, f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    
    #[test]
    fn parses_and_evaluates_ku_products() {
        let ast = parse("y1*y1").unwrap();
        let v = eval_ku(&ast).unwrap();
        assert_eq!(format!("{v}"), "2*y2 + u*y1");

        let ast = parse("u * u").unwrap();
        assert_eq!(format!("{}", eval_ku(&ast).unwrap()), "u^2");

        let ast = parse("y2^2 - 6*y4").unwrap();
        assert_eq!(format!("{}", eval_ku(&ast).unwrap()), "6*u*y3 + u^2*y2");
    }

    #[test]
    fn parses_hopf_circ() {
        let ast = parse("zeta(1,0) o zeta(0,1)").unwrap();
        assert_eq!(format!("{}", eval_hopf(&ast).unwrap()), "zeta(1,1)");

        let ast = parse("([2]*zeta(1,0)) o ([3]*zeta(0,1))").unwrap();
        let v = eval_hopf(&ast).unwrap();
        assert_eq!(format!("{v}"), "6*[6]*zeta(0,1)*zeta(1,0) + [6]*zeta(1,1)");
    }

    #[test]
    fn precedence_star_binds_tighter_than_circ() {
        let a = parse("zeta(1,0) * zeta(0,1) o zeta(0,1)").unwrap();
        let b = parse("(zeta(1,0) * zeta(0,1)) o zeta(0,1)").unwrap();
        assert_eq!(eval_hopf(&a).unwrap(), eval_hopf(&b).unwrap());
    }

    #[test]
    fn error_positions() {
        let e = parse("y1 + $").unwrap_err();
        assert_eq!(e.position, 5);

        let e = parse("zeta(0,0)").unwrap_err();
        assert_eq!(e.position, 0);

        let ast = parse("x*y1").unwrap();
        let e = eval_ku(&ast).unwrap_err();
        assert!(e.message.contains("unknown symbol 'x'"));
    }

    #[test]
    fn unary_minus_and_powers() {
        let ast = parse("-y1^2").unwrap();
        let v = eval_ku(&ast).unwrap();
        assert_eq!(format!("{v}"), "-2*y2 - u*y1");
        // integer scalars act through the unit
        let ast = parse("3*zeta(0,1) - zeta(0,1)").unwrap();
        let v = eval_hopf(&ast).unwrap();
        assert_eq!(v, HopfElem::zeta(0, 1).scale(&kucomm_core::exact::rat(2)));
    }

    #[test]
    fn stability_flag_on_low_components() {
        let stable = parse("([4]*zeta(1,0)) o ([4]*zeta(0,1))").unwrap();
        assert!(!eval_hopf_flagged(&stable).unwrap().1);
        let low = parse("([1]*zeta(1,0)) o ([1]*zeta(0,1))").unwrap();
        assert!(eval_hopf_flagged(&low).unwrap().1);
        let zero_component = parse("zeta(1,0) o zeta(0,1)").unwrap();
        assert!(!eval_hopf_flagged(&zero_component).unwrap().1);
    }

    #[test]
    fn bracket_components() {
        let ast = parse("[2] * [3]").unwrap();
        assert_eq!(eval_hopf(&ast).unwrap(), HopfElem::grouplike(5));
        let ast = parse("[2] o [-3]").unwrap();
        assert_eq!(eval_hopf(&ast).unwrap(), HopfElem::grouplike(-6));
    }
}
