use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::lexer::{tokenize_line, Token, TokenKind};
use super::{DaeSystem, Equation};
use crate::poly::Polynomial;
use crate::rational;
use crate::symbol::{Symbol, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: undeclared symbol `{name}`")]
    UndeclaredSymbol { line: usize, col: usize, name: String },
    #[error("{line}:{col}: not a polynomial: {reason}")]
    NonPolynomial { line: usize, col: usize, reason: String },
    #[error("{line}:{col}: `{name}` cannot be differentiated as a symbol")]
    DerivativeOfParameter { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{name}` is already declared")]
    DuplicateSymbol { line: usize, col: usize, name: String },
    #[error("{line}: equation reduces to 0 = 0")]
    NonzeroEquationRequired { line: usize },
    #[error("missing `system <name>` header")]
    MissingHeader,
    #[error("system declares no equations")]
    NoEquations,
}

impl ParseError {
    fn syntax(tok: Option<&Token>, end: (usize, usize), message: impl Into<String>) -> Self {
        let (line, col) = tok.map_or(end, |t| (t.line, t.col));
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Parses a `.dae` source text.
///
/// Declarations are collected first, so an equation may mention a symbol
/// declared further down the file.
pub fn parse_system(text: &str) -> Result<DaeSystem, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let tokens = tokenize_line(raw, i + 1).map_err(|e| ParseError::Syntax {
            line: e.line,
            col: e.col,
            message: format!("unexpected character `{}`", e.found),
        })?;
        if !tokens.is_empty() {
            lines.push((i + 1, raw.chars().count() + 1, tokens));
        }
    }

    let mut name = None;
    let mut table = SymbolTable::new();
    let mut eq_lines = Vec::new();
    for (line, end, tokens) in &lines {
        let keyword = match &tokens[0].kind {
            TokenKind::Ident(k) => k.as_str(),
            _ => {
                return Err(ParseError::syntax(
                    tokens.first(),
                    (*line, *end),
                    "expected a statement keyword",
                ))
            }
        };
        match keyword {
            "system" => {
                if name.is_some() {
                    return Err(ParseError::syntax(
                        tokens.first(),
                        (*line, *end),
                        "duplicate `system` header",
                    ));
                }
                match tokens.get(1..) {
                    Some(
                        [Token {
                            kind: TokenKind::Ident(n),
                            ..
                        }],
                    ) => name = Some(n.clone()),
                    _ => {
                        return Err(ParseError::syntax(
                            tokens.get(1),
                            (*line, *end),
                            "expected `system <name>`",
                        ))
                    }
                }
            }
            "param" | "func" | "var" => {
                for tok in declaration_names(&tokens[1..], (*line, *end))? {
                    let TokenKind::Ident(n) = &tok.kind else { unreachable!() };
                    let added = match keyword {
                        "param" => table.add_parameter(n),
                        "func" => table.add_forcing(n),
                        _ => table.add_dependent(n),
                    };
                    if added.is_none() {
                        return Err(ParseError::DuplicateSymbol {
                            line: tok.line,
                            col: tok.col,
                            name: n.clone(),
                        });
                    }
                }
            }
            "eq" => eq_lines.push((*line, *end, &tokens[1..])),
            other => {
                return Err(ParseError::syntax(
                    tokens.first(),
                    (*line, *end),
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }
    let name = name.ok_or(ParseError::MissingHeader)?;

    let mut equations = Vec::new();
    for (line, end, tokens) in eq_lines {
        let mut parser = ExprParser {
            tokens,
            pos: 0,
            table: &table,
            end: (line, end),
        };
        let lhs = parser.expr()?;
        parser.expect(&TokenKind::Equals, "expected `=`")?;
        let rhs = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(ParseError::syntax(
                Some(tok),
                parser.end,
                format!("unexpected {}", tok.kind),
            ));
        }
        let poly = &lhs - &rhs;
        if poly.is_zero() {
            return Err(ParseError::NonzeroEquationRequired { line });
        }
        equations.push(Equation::original(equations.len(), poly));
    }
    if equations.is_empty() {
        return Err(ParseError::NoEquations);
    }
    Ok(DaeSystem { name, table, equations })
}

fn declaration_names(tokens: &[Token], end: (usize, usize)) -> Result<Vec<&Token>, ParseError> {
    let mut names = Vec::new();
    let mut expect_name = true;
    for tok in tokens {
        match (&tok.kind, expect_name) {
            (TokenKind::Ident(_), true) => names.push(tok),
            (TokenKind::Comma, false) => {}
            _ => {
                return Err(ParseError::syntax(
                    Some(tok),
                    end,
                    if expect_name { "expected a name" } else { "expected `,`" },
                ))
            }
        }
        expect_name = !expect_name;
    }
    if expect_name {
        return Err(ParseError::syntax(None, end, "expected a name"));
    }
    Ok(names)
}

struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    table: &'a SymbolTable,
    end: (usize, usize),
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_is(&self, kind: &TokenKind) -> bool {
        self.peek().is_some_and(|t| &t.kind == kind)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, kind: &TokenKind, message: &str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            other => Err(ParseError::syntax(other, self.end, message)),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_is(&TokenKind::Plus) {
                self.pos += 1;
                acc = &acc + &self.term()?;
            } else if self.peek_is(&TokenKind::Minus) {
                self.pos += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_is(&TokenKind::Star) {
                self.pos += 1;
                acc = &acc * &self.unary()?;
            } else if self.peek_is(&TokenKind::Slash) {
                let slash = self.next().expect("peeked");
                let divisor = self.unary()?;
                match divisor.constant_value() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => {
                        return Err(ParseError::NonPolynomial {
                            line: slash.line,
                            col: slash.col,
                            reason: "division by zero".into(),
                        })
                    }
                    None => {
                        return Err(ParseError::NonPolynomial {
                            line: slash.line,
                            col: slash.col,
                            reason: "division by a non-constant expression".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek_is(&TokenKind::Minus) {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek_is(&TokenKind::Plus) {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.primary()?;
        if !self.peek_is(&TokenKind::Caret) {
            return Ok(base);
        }
        let caret = self.next().expect("peeked");
        let exponent = self.power()?;
        let non_poly = |reason: &str| ParseError::NonPolynomial {
            line: caret.line,
            col: caret.col,
            reason: reason.into(),
        };
        let value = exponent
            .constant_value()
            .ok_or_else(|| non_poly("exponent must be a constant"))?;
        if !value.is_integer() {
            return Err(non_poly("exponent must be an integer"));
        }
        let exp = value
            .to_integer()
            .to_u32()
            .filter(|&e| e >= 1)
            .ok_or_else(|| non_poly("exponent must be a positive integer"))?;
        Ok(base.pow(exp))
    }

    fn primary(&mut self) -> Result<Polynomial, ParseError> {
        let Some(tok) = self.next() else {
            return Err(ParseError::syntax(None, self.end, "expected an expression"));
        };
        match &tok.kind {
            TokenKind::Number(text) => {
                let value = rational::parse_decimal(text).ok_or_else(|| ParseError::Syntax {
                    line: tok.line,
                    col: tok.col,
                    message: format!("malformed number `{text}`"),
                })?;
                Ok(Polynomial::constant(value))
            }
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen, "expected `)`")?;
                Ok(inner)
            }
            TokenKind::Ident(name) if name == "D" && self.peek_is(&TokenKind::LParen) => {
                self.pos += 1;
                let target = self.next();
                let Some(Token {
                    kind: TokenKind::Ident(inner),
                    ..
                }) = target
                else {
                    return Err(ParseError::syntax(target, self.end, "expected a symbol name"));
                };
                let order = if self.peek_is(&TokenKind::Comma) {
                    self.pos += 1;
                    let num = self.next();
                    match num {
                        Some(Token {
                            kind: TokenKind::Number(n),
                            ..
                        }) => n
                            .parse::<u32>()
                            .map_err(|_| ParseError::syntax(num, self.end, "expected a nonnegative integer order"))?,
                        _ => {
                            return Err(ParseError::syntax(
                                num,
                                self.end,
                                "expected a nonnegative integer order",
                            ))
                        }
                    }
                } else {
                    1
                };
                self.expect(&TokenKind::RParen, "expected `)`")?;
                let target = target.expect("checked above");
                self.symbol(inner, order, target)
            }
            TokenKind::Ident(name) => {
                let mut order = 0;
                while self.peek_is(&TokenKind::Apostrophe) {
                    self.pos += 1;
                    order += 1;
                }
                self.symbol(name, order, tok)
            }
            other => Err(ParseError::syntax(Some(tok), self.end, format!("unexpected {other}"))),
        }
    }

    fn symbol(&self, name: &str, order: u32, at: &Token) -> Result<Polynomial, ParseError> {
        let base = self.table.lookup(name).ok_or_else(|| ParseError::UndeclaredSymbol {
            line: at.line,
            col: at.col,
            name: name.to_string(),
        })?;
        let sym = match base {
            _ if order == 0 => base,
            Symbol::Forcing { index, .. } => Symbol::forcing(index, order),
            Symbol::Dependent { index, .. } => Symbol::dependent(index, order),
            Symbol::Time | Symbol::Parameter(_) => {
                return Err(ParseError::DerivativeOfParameter {
                    line: at.line,
                    col: at.col,
                    name: name.to_string(),
                })
            }
        };
        Ok(Polynomial::var(sym))
    }
}
