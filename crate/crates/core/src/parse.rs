//! Recursive-descent parser for the space expression language.
//!
//! ```text
//! expr    := term { "+" term }
//! term    := factor { "*" factor }
//! factor  := INT | "pt" | "B" "^" INT "(" abelian ")" | "B" "(" group ")" | "(" expr ")"
//! abelian := "C" INT { "x" "C" INT }
//! group   := atomgrp { "x" atomgrp }
//! atomgrp := ( "C" INT | "S" INT | "D" INT | "(" group ")" ) { "wr" "C" INT }
//! ```
//!
//! `+` is disjoint union, `*` is product and an integer factor is a finite
//! set (`0` is the empty space). `D n` is the dihedral group of order `n`.

use crate::error::{Error, Result};
use crate::group::{build_group_with_cap, GroupDescriptor, DEFAULT_ORDER_CAP};
use crate::space::{AbelianGroup, SpaceExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(u64),
    Pt,
    B,
    C,
    S,
    D,
    Times,
    Wr,
    Caret,
    LParen,
    RParen,
    Plus,
    Star,
    Word(String),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(n) => format!("integer {n}"),
            Token::Pt => "'pt'".into(),
            Token::B => "'B'".into(),
            Token::C => "'C'".into(),
            Token::S => "'S'".into(),
            Token::D => "'D'".into(),
            Token::Times => "'x'".into(),
            Token::Wr => "'wr'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Plus => "'+'".into(),
            Token::Star => "'*'".into(),
            Token::Word(w) => format!("{w:?}"),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse::<u64>().map_err(|_| Error::Syntax {
                    position: start,
                    message: format!("integer {} is too large", &text[start..i]),
                })?;
                out.push((Token::Int(n), start));
                continue;
            }
            b'+' => Token::Plus,
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            _ if text[i..].starts_with("pt") => {
                i += 2;
                out.push((Token::Pt, start));
                continue;
            }
            _ if text[i..].starts_with("wr") => {
                i += 2;
                out.push((Token::Wr, start));
                continue;
            }
            b'B' => Token::B,
            b'C' => Token::C,
            b'S' => Token::S,
            b'D' => Token::D,
            b'x' => Token::Times,
            _ if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((Token::Word(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { position: start, message: format!("unexpected character {ch:?}") });
            }
        };
        i += 1;
        out.push((token, start));
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

/// Parser state; also usable for the group and abelian sub-grammars.
pub struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    order_cap: usize,
}

impl Parser {
    pub fn new(text: &str, order_cap: usize) -> Result<Self> {
        Ok(Parser { tokens: tokenize(text)?, pos: 0, order_cap })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if t != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.position(), message: message.into() })
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", want.describe(), self.peek().describe()))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Token::Int(n) => {
                let n = *n;
                self.advance();
                Ok(n)
            }
            other => self.error(format!("expected an integer, found {}", other.describe())),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Token::End {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek().describe()))
        }
    }

    pub fn expr(&mut self) -> Result<SpaceExpr> {
        let mut parts = vec![self.term()?];
        while *self.peek() == Token::Plus {
            self.advance();
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { SpaceExpr::Disjoint(parts) })
    }

    fn term(&mut self) -> Result<SpaceExpr> {
        let mut parts = vec![self.factor()?];
        while *self.peek() == Token::Star {
            self.advance();
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { SpaceExpr::Product(parts) })
    }

    fn factor(&mut self) -> Result<SpaceExpr> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.advance();
                Ok(SpaceExpr::fin_set(n))
            }
            Token::Pt => {
                self.advance();
                Ok(SpaceExpr::point())
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::B => {
                self.advance();
                if *self.peek() == Token::Caret {
                    self.advance();
                    let k = self.int()?;
                    let k = u32::try_from(k).or_else(|_| self.error("degree too large"))?;
                    self.expect(Token::LParen)?;
                    let a = self.abelian()?;
                    self.expect(Token::RParen)?;
                    SpaceExpr::eilenberg_maclane(a, k)
                } else {
                    self.expect(Token::LParen)?;
                    let d = self.group()?;
                    self.expect(Token::RParen)?;
                    Ok(SpaceExpr::classifying(build_group_with_cap(&d, self.order_cap)?))
                }
            }
            other => self.error(format!("expected a space, found {}", other.describe())),
        }
    }

    pub fn abelian(&mut self) -> Result<AbelianGroup> {
        let mut factors = Vec::new();
        loop {
            self.expect(Token::C)?;
            let n = self.int()?;
            if n == 0 {
                return self.error("C0 is not a finite group");
            }
            factors.push(n);
            if *self.peek() != Token::Times {
                break;
            }
            self.advance();
        }
        AbelianGroup::new(factors)
    }

    pub fn group(&mut self) -> Result<GroupDescriptor> {
        let mut d = self.atom_group()?;
        while *self.peek() == Token::Times {
            self.advance();
            d = GroupDescriptor::direct_product(d, self.atom_group()?);
        }
        Ok(d)
    }

    fn atom_group(&mut self) -> Result<GroupDescriptor> {
        let mut d = match self.advance() {
            Token::C => GroupDescriptor::Cyclic(self.int()?),
            Token::S => GroupDescriptor::Symmetric(self.int()?),
            Token::D => GroupDescriptor::Dihedral(self.int()?),
            Token::LParen => {
                let inner = self.group()?;
                self.expect(Token::RParen)?;
                inner
            }
            other => {
                self.pos -= usize::from(other != Token::End);
                return self.error(format!("unknown group: expected C, S, D or '(', found {}", other.describe()));
            }
        };
        while *self.peek() == Token::Wr {
            self.advance();
            self.expect(Token::C)?;
            d = GroupDescriptor::wreath(d, self.int()?);
        }
        Ok(d)
    }
}

/// Parse a space expression with the default group-order cap.
pub fn parse_space(text: &str) -> Result<SpaceExpr> {
    parse_space_with_cap(text, DEFAULT_ORDER_CAP)
}

pub fn parse_space_with_cap(text: &str, order_cap: usize) -> Result<SpaceExpr> {
    let mut parser = Parser::new(text, order_cap)?;
    let x = parser.expr()?;
    parser.finish()?;
    Ok(x)
}

/// Parse a group descriptor such as `S3 x C2` or `C3 wr C3`.
pub fn parse_group(text: &str) -> Result<GroupDescriptor> {
    let mut parser = Parser::new(text, DEFAULT_ORDER_CAP)?;
    let d = parser.group()?;
    parser.finish()?;
    Ok(d)
}
