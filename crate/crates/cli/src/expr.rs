//! Real-valued expressions in `t` used by trajectory files: numbers, `t`,
//! ODE state variables, `+ - * / ^` and the atoms `sin`, `cos`, `exp`.

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Time,
    State(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a constant real exponent.
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {col}: {message}")]
    Syntax { col: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

impl Expr {
    pub fn eval(&self, t: f64, states: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Time => t,
            Expr::State(i) => states[*i],
            Expr::Neg(a) => -a.eval(t, states),
            Expr::Add(a, b) => a.eval(t, states) + b.eval(t, states),
            Expr::Sub(a, b) => a.eval(t, states) - b.eval(t, states),
            Expr::Mul(a, b) => a.eval(t, states) * b.eval(t, states),
            Expr::Div(a, b) => a.eval(t, states) / b.eval(t, states),
            Expr::Pow(a, e) => powf(a.eval(t, states), *e),
            Expr::Call(f, a) => {
                let x = a.eval(t, states);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                }
            }
        }
    }

    /// Value when the expression mentions neither `t` nor a state.
    pub fn constant(&self) -> Option<f64> {
        self.is_constant().then(|| self.eval(0.0, &[]))
    }

    fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Time | Expr::State(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Time derivative; `rates[i]` is the derivative of state `i`.
    pub fn derivative(&self, rates: &[Expr]) -> Expr {
        match self {
            Expr::Num(_) => num(0.0),
            Expr::Time => num(1.0),
            Expr::State(i) => rates[*i].clone(),
            Expr::Neg(a) => neg(a.derivative(rates)),
            Expr::Add(a, b) => add(a.derivative(rates), b.derivative(rates)),
            Expr::Sub(a, b) => sub(a.derivative(rates), b.derivative(rates)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(rates), (**b).clone()),
                mul((**a).clone(), b.derivative(rates)),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.derivative(rates), (**b).clone()),
                    mul((**a).clone(), b.derivative(rates)),
                ),
                pow((**b).clone(), 2.0),
            ),
            Expr::Pow(a, e) => mul(mul(num(*e), pow((**a).clone(), e - 1.0)), a.derivative(rates)),
            Expr::Call(f, a) => {
                let outer = match f {
                    Func::Sin => call(Func::Cos, (**a).clone()),
                    Func::Cos => neg(call(Func::Sin, (**a).clone())),
                    Func::Exp => self.clone(),
                };
                mul(outer, a.derivative(rates))
            }
        }
    }
}

fn powf(x: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x * y),
        (Some(0.0), _) | (_, Some(0.0)) => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x / y),
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, e: f64) -> Expr {
    match (as_num(&a), e) {
        (_, 0.0) => num(1.0),
        (_, 1.0) => a,
        (Some(x), e) => num(powf(x, e)),
        _ => Expr::Pow(Box::new(a), e),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Parses `text`. Identifiers other than `t` and the function names are
/// handed to `resolve`.
pub fn parse_expr<R: Fn(&str) -> Option<Expr>>(text: &str, resolve: R) -> Result<Expr, ExprError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        resolve: &resolve,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<Expr>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            col: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(acc, self.term()?);
            } else if self.eat('-') {
                acc = sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(acc, self.unary()?);
            } else if self.eat('/') {
                acc = div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            let at = self.pos;
            let exponent = self.unary()?;
            let Some(e) = exponent.constant() else {
                self.pos = at;
                return Err(self.error("exponent must be constant"));
            };
            return Ok(pow(base, e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let Some(&c) = self.chars.get(self.pos) else {
            return Err(self.error("unexpected end of expression"));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_alphabetic() || c == '_' {
            let start = self.pos;
            while self
                .chars
                .get(self.pos)
                .is_some_and(|c| c.is_alphanumeric() || *c == '_')
            {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            let func = match name.as_str() {
                "sin" => Some(Func::Sin),
                "cos" => Some(Func::Cos),
                "exp" => Some(Func::Exp),
                _ => None,
            };
            if let Some(f) = func {
                if !self.eat('(') {
                    return Err(self.error("expected `(` after function name"));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                return Ok(call(f, arg));
            }
            if name == "t" {
                return Ok(Expr::Time);
            }
            return (self.resolve)(&name).ok_or(ExprError::UnknownName(name));
        }
        Err(self.error(&format!("unexpected `{c}`")))
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == '.')
        {
            self.pos += 1;
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map(num).map_err(|_| ExprError::Syntax {
            col: start + 1,
            message: format!("invalid number `{text}`"),
        })
    }
}
