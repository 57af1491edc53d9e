//! Text syntax for differential polynomials, 1-forms and their integrals.
//!
//! The printers elsewhere in the crate emit exactly this syntax, so
//! `parse(x.to_string())` recovers `x`.
//!
//! ```
//! use vbh::syntax::{parse_expr, Expr};
//! let e = parse_expr("int(1/2 * th[1,0]*th[1,1])", Some(1)).unwrap();
//! assert!(matches!(e, Expr::Functional(_)));
//! assert!(parse_expr("th[1,0]*th[1,0]", None).unwrap().is_zero());
//! ```

use std::fmt;

use num_bigint::BigInt;

use crate::coeffs::mpoly::{MAX_U, MAX_VARS, PARAM_BASE};
use crate::coeffs::{LamPoly, RatFunc, Rational, Scalar};
use crate::error::{Error, Result};
use crate::forms::{OneForm, ReducedOneForm};
use crate::functionals::LocalFunctional;
use crate::jetring::JetPoly;

/// A parsed object over the coefficient ring `C`.
#[derive(Clone, PartialEq, Debug)]
pub enum Expr<C: Scalar = RatFunc> {
    Poly(JetPoly<C>),
    Form(OneForm<C>),
    Functional(LocalFunctional<C>),
    Reduced(ReducedOneForm<C>),
}

impl<C: Scalar> Expr<C> {
    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Poly(p) => p.is_zero(),
            Expr::Form(w) => w.is_zero(),
            Expr::Functional(f) => f.is_zero(),
            Expr::Reduced(w) => w.is_zero(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Expr::Poly(_) => "polynomial",
            Expr::Form(_) => "one-form",
            Expr::Functional(_) => "functional",
            Expr::Reduced(_) => "reduced one-form",
        }
    }
}

impl<C: Scalar> fmt::Display for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Poly(p) => write!(f, "{p}"),
            Expr::Form(w) => write!(f, "{w}"),
            Expr::Functional(x) => write!(f, "{x}"),
            Expr::Reduced(w) => write!(f, "{w}"),
        }
    }
}

/// Parses `text` with base coefficients; `lam` must cancel out.
/// With `n` given, component indices above `n` are rejected.
pub fn parse_expr(text: &str, n: Option<usize>) -> Result<Expr> {
    let e = parse_lam_expr(text, n)?;
    drop_lambda(&e).ok_or_else(|| Error::Syntax {
        pos: 0,
        msg: "expression depends on lam".into(),
    })
}

/// Parses `text` over polynomials in `lam`.
pub fn parse_lam_expr(text: &str, n: Option<usize>) -> Result<Expr<LamPoly>> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        n,
        len: text.len(),
    };
    let v = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error("unexpected input after expression"));
    }
    Ok(v)
}

pub fn parse_poly(text: &str, n: Option<usize>) -> Result<JetPoly<RatFunc>> {
    match parse_expr(text, n)? {
        Expr::Poly(p) => Ok(p),
        e => Err(Error::Syntax {
            pos: 0,
            msg: format!("expected a polynomial, found a {}", e.kind()),
        }),
    }
}

/// A function of the base coordinates (and parameters) only.
pub fn parse_scalar(text: &str, n: Option<usize>) -> Result<RatFunc> {
    let p = parse_poly(text, n)?;
    let mut it = p.terms();
    match (it.next(), it.next()) {
        (None, _) => Ok(RatFunc::zero()),
        (Some((m, c)), None) if m.is_one() => Ok(c.clone()),
        _ => Err(Error::Syntax {
            pos: 0,
            msg: format!("{text:?} involves jet variables"),
        }),
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_scalar(text, Some(0))?
        .constant_value()
        .ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: format!("{text:?} is not a rational constant"),
        })
}

pub fn parse_functional(text: &str, n: Option<usize>) -> Result<LocalFunctional> {
    match parse_expr(text, n)? {
        Expr::Functional(f) => Ok(f),
        Expr::Poly(p) if p.is_zero() => Ok(LocalFunctional::zero()),
        e => Err(Error::Syntax {
            pos: 0,
            msg: format!("expected int(...) of a polynomial, found a {}", e.kind()),
        }),
    }
}

pub fn parse_form(text: &str, n: Option<usize>) -> Result<OneForm> {
    match parse_expr(text, n)? {
        Expr::Form(w) => Ok(w),
        Expr::Poly(p) if p.is_zero() => Ok(OneForm::zero()),
        e => Err(Error::Syntax {
            pos: 0,
            msg: format!("expected a one-form, found a {}", e.kind()),
        }),
    }
}

pub fn parse_reduced(text: &str, n: Option<usize>) -> Result<ReducedOneForm> {
    match parse_expr(text, n)? {
        Expr::Reduced(w) => Ok(w),
        Expr::Form(w) => Ok(w.reduce()),
        Expr::Poly(p) if p.is_zero() => Ok(ReducedOneForm::zero()),
        Expr::Functional(f) if f.is_zero() => Ok(ReducedOneForm::zero()),
        e => Err(Error::Syntax {
            pos: 0,
            msg: format!("expected a one-form, found a {}", e.kind()),
        }),
    }
}

fn base_coeff(c: &LamPoly) -> Option<RatFunc> {
    (c.degree() == 0).then(|| c.coeff(0))
}

fn drop_poly(p: &JetPoly<LamPoly>) -> Option<JetPoly<RatFunc>> {
    if p.terms().any(|(_, c)| c.degree() > 0) {
        return None;
    }
    Some(p.map_coeffs(|c| base_coeff(c).unwrap_or_else(RatFunc::zero)))
}

fn drop_form(w: &OneForm<LamPoly>) -> Option<OneForm<RatFunc>> {
    if w.parts().any(|(_, a)| drop_poly(a).is_none()) {
        return None;
    }
    Some(w.map_coeffs(|a| drop_poly(a).unwrap_or_default()))
}

fn drop_lambda(e: &Expr<LamPoly>) -> Option<Expr> {
    Some(match e {
        Expr::Poly(p) => Expr::Poly(drop_poly(p)?),
        Expr::Form(w) => Expr::Form(drop_form(w)?),
        Expr::Functional(f) => Expr::Functional(LocalFunctional::new(drop_poly(f.density())?)),
        Expr::Reduced(w) => Expr::Reduced(drop_form(w.form())?.reduce()),
    })
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(BigInt),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Prime,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let t = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'\'' => Tok::Prime,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {ch:?}"),
                });
            }
        };
        i += 1;
        out.push((start, t));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

type V = Expr<LamPoly>;

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: Option<usize>,
    len: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |t| t.0)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<V> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let r = self.term()?;
                    acc = add(acc, r, false).map_err(|m| Error::Syntax { pos, msg: m })?;
                }
                Tok::Minus => {
                    self.bump();
                    let r = self.term()?;
                    acc = add(acc, r, true).map_err(|m| Error::Syntax { pos, msg: m })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<V> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let r = self.unary()?;
                    acc = mul(acc, r).map_err(|m| Error::Syntax { pos, msg: m })?;
                }
                Tok::Slash => {
                    self.bump();
                    let r = self.unary()?;
                    let inv = match scalar_of(&r) {
                        Some(c) if c.is_zero() => return Err(Error::DivisionByZero),
                        Some(c) => c.inv()?,
                        None => {
                            return Err(Error::Syntax {
                                pos,
                                msg: "can only divide by a function of u".into(),
                            })
                        }
                    };
                    acc = mul(acc, V::Poly(JetPoly::scalar(LamPoly::from_base(inv))))
                        .map_err(|m| Error::Syntax { pos, msg: m })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<V> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(negate(self.unary()?))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<V> {
        let base = self.postfix()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let k = self.exponent()?;
        let err = |m: &str| Error::Syntax { pos, msg: m.into() };
        match base {
            V::Poly(p) if k >= 0 => Ok(V::Poly(p.pow(k as u32))),
            V::Poly(p) => {
                let c = scalar_of(&V::Poly(p))
                    .ok_or_else(|| err("negative powers only apply to functions of u"))?;
                Ok(V::Poly(JetPoly::scalar(LamPoly::from_base(
                    c.pow(k as i32)?,
                ))))
            }
            _ => Err(err("powers only apply to polynomials")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let k = self.small_int("integer exponent")? as i64;
        if paren {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(if neg { -k } else { k })
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num(v) => {
                let k = u32::try_from(&v).map_err(|_| self.error(format!("{what} too large")))?;
                self.bump();
                Ok(k)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn postfix(&mut self) -> Result<V> {
        let mut v = self.atom()?;
        while *self.peek() == Tok::Prime {
            let pos = self.pos();
            self.bump();
            v = match v {
                V::Poly(p) => V::Poly(p.dx()),
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "' applies to polynomials only".into(),
                    })
                }
            };
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<V> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(V::Poly(JetPoly::rational(Rational::from_big(
                v,
                BigInt::from(1),
            )))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Tok::Ident(name) => self.named(&name, pos),
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
        }
    }

    fn named(&mut self, name: &str, pos: usize) -> Result<V> {
        if name == "lam" {
            return Ok(V::Poly(JetPoly::scalar(LamPoly::lam())));
        }
        if name == "int" {
            self.expect(Tok::LParen, "'(' after int")?;
            let inner = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            return match inner {
                V::Poly(p) => Ok(V::Functional(LocalFunctional::new(p))),
                V::Form(w) => Ok(V::Reduced(w.reduce())),
                _ => Err(Error::Syntax {
                    pos,
                    msg: "int(...) cannot be nested".into(),
                }),
            };
        }
        // `u1`, `th2` and friends carry the component index in the name.
        let split = name
            .find(|c: char| c.is_ascii_digit())
            .unwrap_or(name.len());
        let (head, digits) = name.split_at(split);
        if !matches!(head, "u" | "th" | "du" | "dth" | "C" | "L" | "s") {
            return Err(Error::Syntax {
                pos,
                msg: format!("unknown name {name:?}"),
            });
        }
        if matches!(head, "L" | "s") {
            return Err(Error::Syntax {
                pos,
                msg: format!("{head}[i] appears in outputs only"),
            });
        }
        let (i, s) = if digits.is_empty() {
            self.expect(Tok::LBracket, "'['")?;
            let i = self.small_int("index")? as usize;
            let s = if *self.peek() == Tok::Comma {
                self.bump();
                self.small_int("jet order")? as usize
            } else {
                0
            };
            self.expect(Tok::RBracket, "']'")?;
            (i, s)
        } else {
            let i = digits.parse().map_err(|_| Error::Syntax {
                pos,
                msg: format!("bad index in {name:?}"),
            })?;
            (i, 0)
        };
        if head == "C" {
            if i == 0 || PARAM_BASE + i > MAX_VARS || s != 0 {
                return Err(Error::IndexOutOfRange {
                    what: "parameter",
                    value: i as i64,
                });
            }
            return Ok(V::Poly(JetPoly::scalar(LamPoly::from_base(
                RatFunc::param(i),
            ))));
        }
        let limit = self.n.unwrap_or(MAX_U).min(MAX_U);
        if i == 0 || i > limit {
            return Err(Error::IndexOutOfRange {
                what: "component",
                value: i as i64,
            });
        }
        if s > u16::MAX as usize {
            return Err(Error::IndexOutOfRange {
                what: "jet order",
                value: s as i64,
            });
        }
        Ok(match head {
            "u" => V::Poly(JetPoly::u(i, s)),
            "th" => V::Poly(JetPoly::th(i, s)),
            "du" => V::Form(OneForm::du(i, s)),
            _ => V::Form(OneForm::dth(i, s)),
        })
    }
}

/// The value as a function of `u` alone, if it is one.
fn scalar_of(v: &V) -> Option<RatFunc> {
    let V::Poly(p) = v else { return None };
    let mut it = p.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(RatFunc::zero()),
        (Some((m, c)), None) if m.is_one() => base_coeff(c),
        _ => None,
    }
}

fn rational_of(v: &V) -> Option<Rational> {
    scalar_of(v).and_then(|c| c.constant_value())
}

fn negate(v: V) -> V {
    let m = Rational::from_int(-1);
    match v {
        V::Poly(p) => V::Poly(p.scale(&m)),
        V::Form(w) => V::Form(w.neg()),
        V::Functional(f) => V::Functional(f.scale(&m)),
        V::Reduced(w) => V::Reduced(w.scale(&m)),
    }
}

fn add(a: V, b: V, minus: bool) -> std::result::Result<V, String> {
    let b = if minus { negate(b) } else { b };
    Ok(match (a, b) {
        (V::Poly(x), V::Poly(y)) => V::Poly(x + y),
        (V::Form(x), V::Form(y)) => V::Form(x.add(&y)),
        (V::Functional(x), V::Functional(y)) => V::Functional(x.add(&y)),
        (V::Reduced(x), V::Reduced(y)) => V::Reduced(x.add(&y)),
        // a literal zero is neutral for every kind
        (x, y) if y.is_zero() && matches!(y, V::Poly(_)) => x,
        (x, y) if x.is_zero() && matches!(x, V::Poly(_)) => y,
        (x, y) => return Err(format!("cannot add a {} and a {}", x.kind(), y.kind())),
    })
}

fn mul(a: V, b: V) -> std::result::Result<V, String> {
    if let Some(r) = rational_of(&b) {
        if !matches!(a, V::Poly(_)) {
            return Ok(scale(a, &r));
        }
    }
    if let Some(r) = rational_of(&a) {
        if !matches!(b, V::Poly(_)) {
            return Ok(scale(b, &r));
        }
    }
    Ok(match (a, b) {
        (V::Poly(x), V::Poly(y)) => V::Poly(x * y),
        (V::Poly(x), V::Form(w)) => V::Form(w.mul_left(&x)),
        (V::Form(w), y @ V::Poly(_)) if scalar_of(&y).is_some() => {
            let V::Poly(y) = y else { unreachable!() };
            V::Form(w.mul_left(&y))
        }
        (V::Form(_), V::Poly(_)) => return Err("write coefficients to the left of du/dth".into()),
        (x, y) => return Err(format!("cannot multiply a {} by a {}", x.kind(), y.kind())),
    })
}

fn scale(v: V, r: &Rational) -> V {
    match v {
        V::Poly(p) => V::Poly(p.scale(r)),
        V::Form(w) => V::Form(w.scale(r)),
        V::Functional(f) => V::Functional(f.scale(r)),
        V::Reduced(w) => V::Reduced(w.scale(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::DiffPoly;

    fn poly(s: &str) -> DiffPoly {
        parse_poly(s, None).unwrap()
    }

    #[test]
    fn generators_and_shorthand() {
        assert_eq!(poly("u[1]"), DiffPoly::u(1, 0));
        assert_eq!(poly("u1''"), DiffPoly::u(1, 2));
        assert_eq!(poly("u[2,3]'"), DiffPoly::u(2, 4));
        assert_eq!(
            poly("(u1*u1)'"),
            DiffPoly::u(1, 1)
                .mul_scalar(&RatFunc::u(1))
                .scale(&Rational::from_int(2))
        );
        assert_eq!(poly("th1*th[1,1] + th[1,1]*th1"), DiffPoly::zero());
        assert_eq!(
            poly("C[1]*u[1]^(-2)"),
            DiffPoly::scalar(RatFunc::param(1).mul(&RatFunc::u(1).pow(-2).unwrap()))
        );
    }

    #[test]
    fn forms() {
        let w = parse_expr("u[1,1]*du[1,0]", Some(1)).unwrap();
        assert_eq!(
            w,
            Expr::Form(OneForm::du(1, 0).mul_left(&DiffPoly::u(1, 1)))
        );
        let r = parse_reduced("int(th[1,0]*dth[1,1])", Some(1)).unwrap();
        assert_eq!(
            r,
            ReducedOneForm::from_gh(vec![], vec![-DiffPoly::th(1, 1)])
        );
    }

    #[test]
    fn lambda() {
        let e = parse_lam_expr("(lam - u[1])*th[1,1]", None).unwrap();
        assert_eq!(e.to_string(), "((-u[1]) + (1)*lam)*th[1,1]");
        assert!(parse_expr("lam*th[1,0]", None).is_err());
        assert!(parse_expr("(lam - lam)*th[1,0]", None).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let e = parse_expr("u[1,1] + * u[1]", None).unwrap_err();
        assert!(matches!(e, Error::Syntax { pos: 9, .. }), "{e:?}");
        assert_eq!(
            parse_expr("u[3]", Some(2)).unwrap_err(),
            Error::IndexOutOfRange {
                what: "component",
                value: 3
            }
        );
        assert!(matches!(
            parse_expr("u[1] + du[1,0]", None),
            Err(Error::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            parse_expr("1/th[1,0]", None),
            Err(Error::Syntax { .. })
        ));
        assert_eq!(
            parse_expr("1/(u[1]-u[1])", None).unwrap_err(),
            Error::DivisionByZero
        );
        assert!(matches!(
            parse_expr("int(int(u[1]))", None),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_expr("u[1", None), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_expr("L[1]", None),
            Err(Error::Syntax { .. })
        ));
    }
}
