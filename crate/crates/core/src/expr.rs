//! Scalar expressions with exact-to-order jet evaluation.
//!
//! Expressions are parsed from text ("-2/cosh(x)^2", "-1.5*exp(-r2)") and
//! evaluated in truncated multivariate Taylor arithmetic, which yields all
//! partial derivatives of the expression at a point up to a requested order.

use crate::error::{Result, SsfError};
use crate::jet::{mi_total, multi_indices, MultiIndex};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Coordinate variable by axis (x, y, z).
    Var(usize),
    /// Squared radius |x|^2.
    R2,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sech,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "sech" => Func::Sech,
            _ => return None,
        })
    }
}

/// Dense truncated Taylor polynomial around a point, in up to three
/// variables; `coeff[kappa]` is the Taylor coefficient, so the partial
/// derivative is kappa! * coeff[kappa].
#[derive(Debug, Clone)]
pub struct TaylorPoly {
    dim: usize,
    order: u32,
    coeff: BTreeMap<MultiIndex, f64>,
}

impl TaylorPoly {
    fn zero(dim: usize, order: u32) -> Self {
        TaylorPoly {
            dim,
            order,
            coeff: BTreeMap::new(),
        }
    }

    fn constant(dim: usize, order: u32, v: f64) -> Self {
        let mut p = Self::zero(dim, order);
        if v != 0.0 {
            p.coeff.insert(vec![0; dim], v);
        }
        p
    }

    fn variable(dim: usize, order: u32, axis: usize, base: f64) -> Self {
        let mut p = Self::constant(dim, order, base);
        if order >= 1 {
            let mut k = vec![0u32; dim];
            k[axis] = 1;
            p.coeff.insert(k, 1.0);
        }
        p
    }

    fn value(&self) -> f64 {
        self.coeff
            .get(&vec![0u32; self.dim])
            .copied()
            .unwrap_or(0.0)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeff {
            *out.coeff.entry(k.clone()).or_insert(0.0) += v;
        }
        out.coeff.retain(|_, v| *v != 0.0);
        out
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeff.values_mut() {
            *v = -*v;
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        for (ka, va) in &self.coeff {
            let ta = mi_total(ka);
            for (kb, vb) in &other.coeff {
                if ta + mi_total(kb) > self.order {
                    continue;
                }
                let k: MultiIndex = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *out.coeff.entry(k).or_insert(0.0) += va * vb;
            }
        }
        out.coeff.retain(|_, v| *v != 0.0);
        out
    }

    /// f(self) given the derivatives of f at the constant part:
    /// sum_j derivs[j]/j! * w^j with w the nilpotent part.
    fn compose(&self, derivs: &[f64]) -> Self {
        let mut w = self.clone();
        w.coeff.remove(&vec![0u32; self.dim]);
        let mut out = Self::constant(self.dim, self.order, derivs[0]);
        let mut wpow = Self::constant(self.dim, self.order, 1.0);
        let mut fact = 1.0;
        for (j, &dj) in derivs.iter().enumerate().skip(1) {
            wpow = wpow.mul(&w);
            fact *= j as f64;
            if wpow.coeff.is_empty() {
                break;
            }
            let mut term = wpow.clone();
            for v in term.coeff.values_mut() {
                *v *= dj / fact;
            }
            out = out.add(&term);
        }
        out
    }

    /// Partial derivative values d^kappa at the expansion point.
    pub fn jets(&self) -> BTreeMap<MultiIndex, f64> {
        let mut out = BTreeMap::new();
        for kappa in multi_indices(self.dim, self.order) {
            let c = self.coeff.get(&kappa).copied().unwrap_or(0.0);
            let mut fact = 1.0;
            for &k in &kappa {
                for j in 2..=k as u64 {
                    fact *= j as f64;
                }
            }
            out.insert(kappa, c * fact);
        }
        out
    }
}

/// Derivatives f^{(0..=m)}(a) for the supported univariate functions.
fn univariate_derivs(f: Func, a: f64, m: u32) -> Result<Vec<f64>> {
    let m = m as usize;
    let mut d = vec![0.0; m + 1];
    match f {
        Func::Exp => {
            let e = a.exp();
            d.iter_mut().for_each(|x| *x = e);
        }
        Func::Ln => {
            if a <= 0.0 {
                return Err(SsfError::Domain(format!("ln of non-positive value {}", a)));
            }
            d[0] = a.ln();
            let mut c = 1.0;
            for (j, slot) in d.iter_mut().enumerate().skip(1) {
                // d^j ln = (-1)^{j-1} (j-1)! a^{-j}
                *slot = c * a.powi(-(j as i32));
                c *= -(j as f64);
            }
        }
        Func::Sqrt => {
            if a <= 0.0 {
                return Err(SsfError::Domain(format!(
                    "sqrt jets need a positive argument, got {}",
                    a
                )));
            }
            d[0] = a.sqrt();
            let mut c = 0.5;
            let mut p = 0.5;
            for slot in d.iter_mut().skip(1) {
                // successive derivatives of a^{1/2}
                *slot = c * a.powf(p - 1.0);
                p -= 1.0;
                c *= p;
            }
        }
        Func::Sin | Func::Cos => {
            let (s, c) = a.sin_cos();
            let cycle = if f == Func::Sin {
                [s, c, -s, -c]
            } else {
                [c, -s, -c, s]
            };
            for (j, slot) in d.iter_mut().enumerate() {
                *slot = cycle[j % 4];
            }
        }
        Func::Sinh | Func::Cosh => {
            let (sh, ch) = (a.sinh(), a.cosh());
            for (j, slot) in d.iter_mut().enumerate() {
                let even = j % 2 == 0;
                *slot = match (f, even) {
                    (Func::Sinh, true) | (Func::Cosh, false) => sh,
                    _ => ch,
                };
            }
        }
        Func::Tanh | Func::Sech => {
            // maintain polynomial in t = tanh(a): dt/da = 1 - t^2
            let t = a.tanh();
            // poly coefficients p[i] of t^i
            let mut poly: Vec<f64> = if f == Func::Tanh {
                vec![0.0, 1.0]
            } else {
                vec![1.0]
            };
            if f == Func::Tanh {
                for slot in d.iter_mut() {
                    *slot = eval_poly(&poly, t);
                    poly = tanh_conjugate_derivative(&poly);
                }
            } else {
                // sech^{(j)}(a) = sech(a) * q_j(tanh a), q_0 = 1,
                // q_{j+1} = q_j' (1 - t^2) - t q_j
                let s = 1.0 / a.cosh();
                for slot in d.iter_mut() {
                    *slot = s * eval_poly(&poly, t);
                    poly = sech_step(&poly);
                }
            }
        }
    }
    Ok(d)
}

fn eval_poly(p: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for &c in p.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// p(t) -> p'(t) (1 - t^2): one x-derivative of p(tanh x).
pub(crate) fn tanh_conjugate_derivative(p: &[f64]) -> Vec<f64> {
    let mut dp = vec![0.0; p.len().max(2) + 1];
    for (i, &c) in p.iter().enumerate().skip(1) {
        let d = c * i as f64;
        dp[i - 1] += d;
        if i + 1 < dp.len() {
            dp[i + 1] -= d;
        } else {
            dp.push(-d);
        }
    }
    trim(dp)
}

/// p(t) -> p'(t) (1 - t^2) - t p(t)
fn sech_step(p: &[f64]) -> Vec<f64> {
    let mut out = tanh_conjugate_derivative(p);
    if out.len() < p.len() + 1 {
        out.resize(p.len() + 1, 0.0);
    }
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] -= c;
    }
    trim(out)
}

fn trim(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && *v.last().unwrap() == 0.0 {
        v.pop();
    }
    v
}

impl Expr {
    /// Parse an expression over the coordinates of `dim` (x, and y, z when
    /// present) plus `r2` for |x|^2.
    pub fn parse(src: &str, dim: usize) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            dim,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(SsfError::Invalid(format!(
                "unexpected trailing input at byte {} of expression",
                p.pos
            )));
        }
        Ok(e)
    }

    /// Evaluate in Taylor arithmetic around `x`, to the given order.
    pub fn taylor(&self, x: &[f64], order: u32) -> Result<TaylorPoly> {
        let dim = x.len();
        Ok(match self {
            Expr::Num(v) => TaylorPoly::constant(dim, order, *v),
            Expr::Var(axis) => {
                if *axis >= dim {
                    return Err(SsfError::Invalid(format!(
                        "variable for axis {} in a {}-dimensional potential",
                        axis, dim
                    )));
                }
                TaylorPoly::variable(dim, order, *axis, x[*axis])
            }
            Expr::R2 => {
                let mut acc = TaylorPoly::constant(dim, order, 0.0);
                for i in 0..dim {
                    let xi = TaylorPoly::variable(dim, order, i, x[i]);
                    acc = acc.add(&xi.mul(&xi));
                }
                acc
            }
            Expr::Add(a, b) => a.taylor(x, order)?.add(&b.taylor(x, order)?),
            Expr::Sub(a, b) => a.taylor(x, order)?.add(&b.taylor(x, order)?.neg()),
            Expr::Mul(a, b) => a.taylor(x, order)?.mul(&b.taylor(x, order)?),
            Expr::Div(a, b) => {
                let bt = b.taylor(x, order)?;
                let b0 = bt.value();
                if b0 == 0.0 {
                    return Err(SsfError::Domain(
                        "division by an expression vanishing at the evaluation point".into(),
                    ));
                }
                // 1/u derivatives: (-1)^j j! b0^{-(j+1)}
                let mut d = vec![0.0; order as usize + 1];
                let mut c = 1.0;
                for (j, slot) in d.iter_mut().enumerate() {
                    *slot = c * b0.powi(-(j as i32 + 1));
                    c *= -((j + 1) as f64);
                }
                a.taylor(x, order)?.mul(&bt.compose(&d))
            }
            Expr::Neg(a) => a.taylor(x, order)?.neg(),
            Expr::Pow(a, e) => {
                let at = a.taylor(x, order)?;
                if *e >= 0 {
                    let mut out = TaylorPoly::constant(dim, order, 1.0);
                    for _ in 0..*e {
                        out = out.mul(&at);
                    }
                    out
                } else {
                    let a0 = at.value();
                    if a0 == 0.0 {
                        return Err(SsfError::Domain(
                            "negative power of an expression vanishing at the point".into(),
                        ));
                    }
                    let mut out = TaylorPoly::constant(dim, order, 1.0);
                    for _ in 0..(-e) {
                        out = out.mul(&at);
                    }
                    // invert via composition with 1/u
                    let u0 = out.value();
                    let mut d = vec![0.0; order as usize + 1];
                    let mut c = 1.0;
                    for (j, slot) in d.iter_mut().enumerate() {
                        *slot = c * u0.powi(-(j as i32 + 1));
                        c *= -((j + 1) as f64);
                    }
                    out.compose(&d)
                }
            }
            Expr::Call(f, a) => {
                let at = a.taylor(x, order)?;
                let d = univariate_derivs(*f, at.value(), order)?;
                at.compose(&d)
            }
        })
    }

    /// Plain value at a point.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        Ok(self.taylor(x, 0)?.value())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{}", v),
            Expr::Var(0) => write!(f, "x"),
            Expr::Var(1) => write!(f, "y"),
            Expr::Var(_) => write!(f, "z"),
            Expr::R2 => write!(f, "r2"),
            Expr::Add(a, b) => write!(f, "({} + {})", a, b),
            Expr::Sub(a, b) => write!(f, "({} - {})", a, b),
            Expr::Mul(a, b) => write!(f, "({} * {})", a, b),
            Expr::Div(a, b) => write!(f, "({} / {})", a, b),
            Expr::Neg(a) => write!(f, "(-{})", a),
            Expr::Pow(a, e) => write!(f, "{}^{}", a, e),
            Expr::Call(func, a) => write!(f, "{:?}({})", func, a),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(SsfError::Invalid(
                    "exponent must be an integer literal".into(),
                ));
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let mut e: i32 = digits
                .parse()
                .map_err(|_| SsfError::Invalid("exponent out of range".into()))?;
            if neg {
                e = -e;
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(SsfError::Invalid("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(SsfError::Invalid(format!(
                "unexpected input at byte {} of expression",
                self.pos
            ))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_digit() || c == b'.' {
                self.pos += 1;
            } else if (c == b'e' || c == b'E')
                && self.pos + 1 < self.src.len()
                && (self.src[self.pos + 1].is_ascii_digit()
                    || self.src[self.pos + 1] == b'-'
                    || self.src[self.pos + 1] == b'+')
            {
                self.pos += 2;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| SsfError::Invalid(format!("bad number literal '{}'", text)))
    }

    fn ident(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if let Some(f) = Func::from_name(name) {
            if self.peek() != Some(b'(') {
                return Err(SsfError::Invalid(format!(
                    "function '{}' must be followed by parentheses",
                    name
                )));
            }
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(SsfError::Invalid("missing closing parenthesis".into()));
            }
            self.pos += 1;
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        match name {
            "x" => Ok(Expr::Var(0)),
            "y" => Ok(Expr::Var(1)),
            "z" => Ok(Expr::Var(2)),
            "r2" => Ok(Expr::R2),
            "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            _ => Err(SsfError::Invalid(format!(
                "unknown identifier '{}' (dim = {})",
                name, self.dim
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jets_of(src: &str, x: &[f64], order: u32) -> BTreeMap<MultiIndex, f64> {
        Expr::parse(src, x.len())
            .unwrap()
            .taylor(x, order)
            .unwrap()
            .jets()
    }

    #[test]
    fn parse_and_eval() {
        let e = Expr::parse("-2/cosh(x)^2", 1).unwrap();
        let v = e.eval(&[0.0]).unwrap();
        assert!((v + 2.0).abs() < 1e-15);
        let v2 = e.eval(&[1.0]).unwrap();
        assert!((v2 + 2.0 / 1.0f64.cosh().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_derivatives() {
        // v = exp(-x^2): v' = -2x v, v'' = (4x^2 - 2) v
        let j = jets_of("exp(-x^2)", &[0.7], 2);
        let v = (-0.49_f64).exp();
        assert!((j[&vec![1]] + 2.0 * 0.7 * v).abs() < 1e-13);
        assert!((j[&vec![2]] - (4.0 * 0.49 - 2.0) * v).abs() < 1e-13);
    }

    #[test]
    fn sech_tanh_derivatives() {
        // d/dx tanh = sech^2; d/dx sech = -sech tanh
        let a = 0.3_f64;
        let j = jets_of("tanh(x)", &[a], 3);
        let sech2 = 1.0 / a.cosh().powi(2);
        assert!((j[&vec![1]] - sech2).abs() < 1e-13);
        // tanh'' = -2 sech^2 tanh
        assert!((j[&vec![2]] + 2.0 * sech2 * a.tanh()).abs() < 1e-12);
        let js = jets_of("sech(x)", &[a], 2);
        assert!((js[&vec![1]] + a.tanh() / a.cosh()).abs() < 1e-13);
    }

    #[test]
    fn multivariate_radial() {
        // v = exp(-r2) in 3 variables at (0.5, 0, 0)
        let j = jets_of("exp(-r2)", &[0.5, 0.0, 0.0], 2);
        let v = (-0.25_f64).exp();
        assert!((j[&vec![0, 0, 0]] - v).abs() < 1e-14);
        assert!((j[&vec![1, 0, 0]] + v).abs() < 1e-13); // -2x v = -v
        assert!((j[&vec![0, 1, 0]]).abs() < 1e-14);
        // d2/dy2 exp(-r2) = -2 exp(-r2) at y=0
        assert!((j[&vec![0, 2, 0]] + 2.0 * v).abs() < 1e-13);
    }

    #[test]
    fn division_and_negative_powers() {
        let j1 = jets_of("1/(1+x^2)", &[0.4], 3);
        let j2 = jets_of("(1+x^2)^-1", &[0.4], 3);
        for (k, v) in &j1 {
            assert!((v - j2[k]).abs() < 1e-12, "mismatch at {:?}", k);
        }
        // f = (1+x^2)^{-1}: f'(x) = -2x/(1+x^2)^2
        let x = 0.4_f64;
        let want = -2.0 * x / (1.0 + x * x).powi(2);
        assert!((j1[&vec![1]] - want).abs() < 1e-13);
    }

    #[test]
    fn sqrt_composition() {
        // |x| = sqrt(r2) smooth away from origin: d/dx sqrt(x^2) = sign(x)
        let j = jets_of("exp(-sqrt(r2))", &[2.0, 0.0, 0.0], 2);
        let v = (-2.0_f64).exp();
        assert!((j[&vec![0, 0, 0]] - v).abs() < 1e-14);
        assert!((j[&vec![1, 0, 0]] + v).abs() < 1e-12);
        // transverse second derivative: d2/dy2 exp(-r) = -v * (1/r) at y=0
        assert!((j[&vec![0, 2, 0]] + v / 2.0).abs() < 1e-12);
    }

    #[test]
    fn parse_errors() {
        assert!(Expr::parse("x +", 1).is_err());
        assert!(Expr::parse("foo(x)", 1).is_err());
        assert!(Expr::parse("x^y", 1).is_err());
        assert!(Expr::parse("(x", 1).is_err());
        // valid parse but invalid axis for the dimension
        let e = Expr::parse("y", 1).unwrap();
        assert!(e.taylor(&[0.0], 1).is_err());
    }

    #[test]
    fn high_order_jets_match_closed_form() {
        // v = exp(-x^2) has v^{(4)}(0) = 12
        let j = jets_of("exp(-x^2)", &[0.0], 6);
        assert!((j[&vec![4]] - 12.0).abs() < 1e-10);
        assert!((j[&vec![6]] + 120.0).abs() < 1e-9);
        assert!(j[&vec![3]].abs() < 1e-12);
    }
}
