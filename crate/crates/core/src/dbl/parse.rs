use super::syntax::{Prop, Sequent};
use super::DblError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Lit(String),
    Bot,
    Top,
    Not,
    And,
    Or,
    Bar2,
    Arrow,
    Iff,
    LParen,
    RParen,
    LBrack,
    RBrack,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, DblError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| DblError::Syntax { pos, msg: msg.to_string() };
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' if b.get(i + 1) == Some(&b'|') => {
                i += 2;
                Tok::Bar2
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'-' if b.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBrack
            }
            b']' => {
                i += 1;
                Tok::RBrack
            }
            b'{' => {
                let close = src[i..].find('}').ok_or_else(|| err(i, "unclosed '{'"))?;
                i += close + 1;
                if b.get(i) == Some(&b'@') {
                    i += 1;
                    let digits = b[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                    if digits == 0 {
                        return Err(err(i, "expected a stage number after '@'"));
                    }
                    i += digits;
                }
                Tok::Lit(src[start..i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                    i += 1;
                }
                match &src[start..i] {
                    "F" => Tok::Bot,
                    "T" => Tok::Top,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => return Err(err(i, &format!("unexpected character '{}'", src[i..].chars().next().unwrap()))),
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), DblError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(DblError::Syntax { pos: self.offset(), msg: format!("expected {}", what) })
        }
    }

    fn iff(&mut self) -> Result<Prop, DblError> {
        let l = self.imp()?;
        if self.eat(&Tok::Iff) {
            let r = self.iff()?;
            return Ok(Prop::iff(l, r));
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<Prop, DblError> {
        let l = self.or()?;
        if self.eat(&Tok::Arrow) {
            let r = self.imp()?;
            return Ok(Prop::implies(l, r));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Prop, DblError> {
        let mut l = self.and()?;
        while self.eat(&Tok::Or) {
            l = Prop::or(l, self.and()?);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Prop, DblError> {
        let mut l = self.unary()?;
        while self.eat(&Tok::And) {
            l = Prop::and(l, self.unary()?);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Prop, DblError> {
        if self.eat(&Tok::Not) {
            return Ok(Prop::neg(self.unary()?));
        }
        if self.eat(&Tok::LBrack) {
            let x = self.iff()?;
            self.expect(&Tok::RBrack, "']'")?;
            let y = self.unary()?;
            return Ok(Prop::cond(x, y));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Prop, DblError> {
        let at = self.offset();
        let Some(t) = self.peek().cloned() else {
            return Err(DblError::Syntax { pos: at, msg: "unexpected end of input".into() });
        };
        self.pos += 1;
        match t {
            Tok::Bot => Ok(Prop::Bot),
            Tok::Top => Ok(Prop::top()),
            Tok::Ident(n) => Ok(Prop::Atom(n)),
            Tok::Lit(s) => Ok(Prop::Lit(s)),
            Tok::LParen => {
                let p = self.iff()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(p)
            }
            _ => Err(DblError::Syntax { pos: at, msg: "expected a proposition".into() }),
        }
    }

    fn finish(&self) -> Result<(), DblError> {
        if self.pos < self.toks.len() {
            return Err(DblError::Syntax { pos: self.offset(), msg: "trailing input".into() });
        }
        Ok(())
    }
}

fn parser(src: &str) -> Result<Parser, DblError> {
    Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
}

/// Parses a single proposition.
///
/// Binding, loosest first: `<->`, `->` (both to the right), `|`, `&`, then
/// the prefix forms `~X` and `[X]Y`.
pub fn parse_prop(src: &str) -> Result<Prop, DblError> {
    let mut p = parser(src)?;
    let out = p.iff()?;
    p.finish()?;
    Ok(out)
}

/// Parses `X1 || X2 || …`.
pub fn parse_sequent(src: &str) -> Result<Sequent, DblError> {
    let mut p = parser(src)?;
    let mut out = vec![p.iff()?];
    while p.eat(&Tok::Bar2) {
        out.push(p.iff()?);
    }
    p.finish()?;
    Ok(Sequent(out))
}

impl std::str::FromStr for Prop {
    type Err = DblError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prop(s)
    }
}

impl std::str::FromStr for Sequent {
    type Err = DblError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}
