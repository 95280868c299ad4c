use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::ident::Ident;
use crate::kernel::adm::{AdmDecl, AdmTerm, AdmValue, Binding, Param};
use crate::kernel::desugar::{apply_decls, par_decls};
use crate::kernel::lam::LamTerm;
use crate::kernel::pi::{InputGuard, PiProc};
use crate::types::{TypeExpr, Usage};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.col, msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Ident::parse(&s))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let dom = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let cod = self.ty()?;
            Ok(TypeExpr::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, ParseError> {
        match self.bump() {
            Tok::Unit => Ok(TypeExpr::Unit),
            Tok::Behavior => Ok(TypeExpr::Behavior),
            Tok::Result => Ok(TypeExpr::Result),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ch => {
                self.expect(Tok::LBrack)?;
                let mut items = vec![self.ty_atom()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    items.push(self.ty_atom()?);
                }
                let t = if *self.peek() == Tok::Arrow {
                    self.bump();
                    let cod = self.ty_atom()?;
                    TypeExpr::chan_fn(items, cod)
                } else if items == [TypeExpr::Unit] {
                    TypeExpr::chan_unit()
                } else {
                    TypeExpr::pi_chan(items)
                };
                self.expect(Tok::RBrack)?;
                Ok(t)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.unexpected("a type"))
            }
        }
    }

    // ---- λ ----

    fn lam(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.lam_app()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.lam_app()?;
            t = LamTerm::par(t, r);
        }
        Ok(t)
    }

    fn starts_lam_atom(&self) -> bool {
        matches!(self.peek(), Tok::Star | Tok::Ident(_) | Tok::LParen | Tok::Backslash)
    }

    fn lam_app(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.lam_atom()?;
        while self.starts_lam_atom() {
            let was_abs = *self.peek() == Tok::Backslash;
            let a = self.lam_atom()?;
            t = LamTerm::app(t, a);
            if was_abs {
                break;
            }
        }
        Ok(t)
    }

    fn lam_atom(&mut self) -> Result<LamTerm, ParseError> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(LamTerm::Star)
            }
            Tok::Ident(_) => Ok(LamTerm::Var(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let t = self.lam()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                if *self.peek() != Tok::Colon {
                    return Err(self.error(format!("binder `{x}` needs a type annotation")));
                }
                self.bump();
                let ty = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.lam()?;
                Ok(LamTerm::abs(x, ty, body))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    // ---- administrative form ----

    fn usage(&mut self) -> Result<Usage, ParseError> {
        if *self.peek() != Tok::LBrack {
            return Ok(Usage::Infinite);
        }
        self.bump();
        let u = match self.bump() {
            Tok::Ident(s) if s == "inf" => Usage::Infinite,
            Tok::Num(1) => Usage::One,
            Tok::Num(0) => Usage::Zero,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`inf`, `1` or `0`"));
            }
        };
        self.expect(Tok::RBrack)?;
        Ok(u)
    }

    fn decl(&mut self) -> Result<AdmDecl, ParseError> {
        if *self.peek() == Tok::Let {
            self.bump();
            let usage = self.usage()?;
            let name = self.ident()?;
            self.expect(Tok::Eq)?;
            let value = self.value()?;
            self.expect(Tok::In)?;
            let rest = self.decl()?;
            let mut bindings = vec![Binding { usage, name, value }];
            bindings.extend(rest.bindings);
            return Ok(AdmDecl { bindings, body: rest.body });
        }
        let mut d = self.adm_atom()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.adm_atom()?;
            d = par_decls(&d, &r);
        }
        Ok(d)
    }

    fn value(&mut self) -> Result<AdmValue, ParseError> {
        match self.peek() {
            Tok::Star => {
                self.bump();
                Ok(AdmValue::Star)
            }
            Tok::Backslash => {
                self.bump();
                let mut params = vec![self.param()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    params.push(self.param()?);
                }
                self.expect(Tok::Dot)?;
                let body = self.decl()?;
                Ok(AdmValue::abs(params, body))
            }
            _ => Err(self.unexpected("`*` or an abstraction")),
        }
    }

    fn param(&mut self) -> Result<Param, ParseError> {
        let name = self.ident()?;
        if *self.peek() != Tok::Colon {
            return Err(self.error(format!("parameter `{name}` needs a type annotation")));
        }
        self.bump();
        Ok(Param { name, ty: self.ty()? })
    }

    fn adm_atom(&mut self) -> Result<AdmDecl, ParseError> {
        match self.peek().clone() {
            Tok::Ident(_) => Ok(AdmDecl::term(AdmTerm::Var(self.ident()?))),
            Tok::At => {
                self.bump();
                self.expect(Tok::LParen)?;
                let head = self.decl()?;
                let mut args = Vec::new();
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.decl()?);
                }
                self.expect(Tok::RParen)?;
                if args.is_empty() {
                    return Err(self.error("an application needs at least one argument"));
                }
                Ok(apply_decls(&head, &args))
            }
            Tok::LParen => {
                self.bump();
                let d = self.decl()?;
                self.expect(Tok::RParen)?;
                Ok(d)
            }
            _ => Err(self.unexpected("a declaration")),
        }
    }

    // ---- π ----

    fn proc(&mut self) -> Result<PiProc, ParseError> {
        let mut p = self.proc_atom()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.proc_atom()?;
            p = PiProc::par(p, r);
        }
        Ok(p)
    }

    fn proc_atom(&mut self) -> Result<PiProc, ParseError> {
        match self.peek().clone() {
            Tok::New => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::LParen)?;
                let guard = self.guard(&x)?;
                let rest = if guard.is_some() {
                    self.expect(Tok::Pipe)?;
                    self.proc()?
                } else {
                    self.proc()?
                };
                self.expect(Tok::RParen)?;
                Ok(PiProc::Nu(x, guard, Box::new(rest)))
            }
            Tok::Ident(_) => {
                if *self.peek_at(1) == Tok::LParen {
                    return Err(self.error("an input must be placed directly under the restriction of its channel"));
                }
                let x = self.ident()?;
                self.expect(Tok::Bang)?;
                let args = self.ident_list()?;
                Ok(PiProc::Out(x, args))
            }
            Tok::Bang => Err(self.error("an input must be placed directly under the restriction of its channel")),
            Tok::LParen => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => Err(self.unexpected("a process")),
        }
    }

    fn guard(&mut self, x: &Ident) -> Result<Option<InputGuard>, ParseError> {
        let replicated = *self.peek() == Tok::Bang;
        let is_input = matches!(
            (self.peek(), self.peek_at(1), self.peek_at(2)),
            (Tok::Bang, Tok::Ident(_), Tok::LParen) | (Tok::Ident(_), Tok::LParen, _)
        );
        if !is_input {
            return Ok(None);
        }
        if replicated {
            self.bump();
        }
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        let chan = self.ident()?;
        if &chan != x {
            return Err(ParseError::new(line, col, format!("input on `{chan}` under the restriction of `{x}`")));
        }
        let params = self.ident_list()?;
        self.expect(Tok::Dot)?;
        let body = self.proc_atom()?;
        Ok(Some(InputGuard { replicated, params, body: Box::new(body) }))
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut xs = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            xs.push(self.ident()?);
        }
        self.expect(Tok::RParen)?;
        Ok(xs)
    }
}

pub fn parse_type(src: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_lam(src: &str) -> Result<LamTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.lam()?;
    p.finish()?;
    Ok(t)
}

/// Parses a declaration. Applications and parallel compositions may take
/// whole declarations as operands; their let-prefixes are lifted outward.
pub fn parse_adm(src: &str) -> Result<AdmDecl, ParseError> {
    let mut p = Parser::new(src)?;
    let d = p.decl()?;
    p.finish()?;
    Ok(d)
}

pub fn parse_pi(src: &str) -> Result<PiProc, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.proc()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types() {
        assert_eq!(parse_type("Unit -> Unit -> Unit").unwrap(), TypeExpr::arrow(TypeExpr::Unit, TypeExpr::arrow(TypeExpr::Unit, TypeExpr::Unit)));
        assert_eq!(parse_type("Ch[Unit]").unwrap(), TypeExpr::chan_unit());
        assert_eq!(
            parse_type("Ch[Ch[Unit], Ch[Unit] -> #b]").unwrap(),
            TypeExpr::chan_fn(vec![TypeExpr::chan_unit(), TypeExpr::chan_unit()], TypeExpr::Behavior)
        );
        assert_eq!(parse_type("Ch[Ch[Unit]]").unwrap(), TypeExpr::pi_chan(vec![TypeExpr::chan_unit()]));
    }

    #[test]
    fn lambda_precedence() {
        let t = parse_lam("(\\x:Unit. x) * | f a b").unwrap();
        let expected = LamTerm::par(
            LamTerm::app(LamTerm::abs("x", TypeExpr::Unit, LamTerm::var("x")), LamTerm::Star),
            LamTerm::app(LamTerm::app(LamTerm::var("f"), LamTerm::var("a")), LamTerm::var("b")),
        );
        assert_eq!(t, expected);
        // abstraction bodies extend as far as possible
        let t = parse_lam("\\x:Unit. x | x").unwrap();
        assert!(matches!(t, LamTerm::Abs(..)));
    }

    #[test]
    fn admin_declarations() {
        let d = parse_adm("let[1] x = \\y:Ch[Unit]. y in @(x, z)").unwrap();
        assert_eq!(d.bindings.len(), 1);
        assert_eq!(d.bindings[0].usage, Usage::One);
        assert_eq!(d.body, AdmTerm::call("x", ["z".into()]));
        let d = parse_adm("@(let x = * in x, let y = * in y)").unwrap();
        assert_eq!(d.bindings.len(), 2);
        assert_eq!(d.body, AdmTerm::call("x", ["y".into()]));
    }

    #[test]
    fn processes() {
        let p = parse_pi("new x (!x(y).x!(y) | x!(z))").unwrap();
        let expected = PiProc::nu_in("x", true, vec!["y".into()], PiProc::out("x", ["y".into()]), PiProc::out("x", ["z".into()]));
        assert_eq!(p, expected);
        let err = parse_pi("new x (w(y).w!(y) | x!(z))").unwrap_err();
        assert_eq!((err.line, err.col), (1, 8));
        assert!(parse_pi("new x (x!(z))").is_ok());
    }

    #[test]
    fn missing_annotation_is_an_error() {
        let err = parse_lam("\\x. x").unwrap_err();
        assert_eq!(err.line, 1);
    }
}
