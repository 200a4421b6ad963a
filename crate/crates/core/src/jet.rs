//! Polynomials in the jet variables u_kappa = (d^kappa v)(x) of a potential.
//!
//! A `JetPoly` is an exact polynomial with `Coefficient` scalars in the
//! symbols u_kappa, kappa a multi-index of length `dim`. All symbolic
//! invariants of the crate (heat coefficients, symbol polynomials, expansion
//! densities) live in this ring.

use crate::coeff::Coefficient;
use num::rational::BigRational;
use num::traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Multi-index with one entry per coordinate.
pub type MultiIndex = Vec<u32>;

pub fn mi_total(kappa: &[u32]) -> u32 {
    kappa.iter().sum()
}

pub fn mi_add(a: &[u32], b: &[u32]) -> MultiIndex {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// kappa + e_i
pub fn mi_bump(kappa: &[u32], i: usize) -> MultiIndex {
    let mut out = kappa.to_vec();
    out[i] += 1;
    out
}

pub fn mi_zero(dim: usize) -> MultiIndex {
    vec![0; dim]
}

/// All multi-indices of length `dim` with total order <= `max_total`,
/// in lexicographic order.
pub fn multi_indices(dim: usize, max_total: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    loop {
        if mi_total(&cur) <= max_total {
            out.push(cur.clone());
        }
        // lexicographic counter with per-position cap max_total
        let mut pos = dim;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            if cur[pos] < max_total {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Product of jet symbols, kept sorted by multi-index; exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JetMonomial(Vec<(MultiIndex, u32)>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    pub fn var(kappa: MultiIndex) -> Self {
        JetMonomial(vec![(kappa, 1)])
    }

    pub fn factors(&self) -> &[(MultiIndex, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(MultiIndex, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j >= other.0.len() {
                out.push(self.0[i].clone());
                i += 1;
            } else if i >= self.0.len() {
                out.push(other.0[j].clone());
                j += 1;
            } else {
                match self.0[i].0.cmp(&other.0[j].0) {
                    std::cmp::Ordering::Less => {
                        out.push(self.0[i].clone());
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        out.push(other.0[j].clone());
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        JetMonomial(out)
    }

    /// Total degree in the jet variables.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Largest |kappa| among the factors.
    pub fn max_jet_order(&self) -> u32 {
        self.0.iter().map(|(k, _)| mi_total(k)).max().unwrap_or(0)
    }

    /// Sum of e * |kappa| over the factors; the total number of derivatives.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(k, e)| e * mi_total(k)).sum()
    }
}

/// Exact polynomial in jet symbols. Terms are keyed by (monomial, sqrt-pi
/// exponent) so that mixed pi powers coexist; the map representation is
/// canonical (no zero coefficients) and equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoly {
    dim: usize,
    terms: BTreeMap<(JetMonomial, i32), BigRational>,
}

impl JetPoly {
    pub fn zero(dim: usize) -> Self {
        JetPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Coefficient::one())
    }

    pub fn constant(dim: usize, c: Coefficient) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(JetMonomial::one(), &c);
        p
    }

    /// The polynomial u_kappa.
    pub fn var(dim: usize, kappa: &[u32]) -> Self {
        assert_eq!(kappa.len(), dim, "multi-index length != dim");
        let mut p = Self::zero(dim);
        p.add_term(JetMonomial::var(kappa.to_vec()), &Coefficient::one());
        p
    }

    /// The potential itself, u_0.
    pub fn v(dim: usize) -> Self {
        Self::var(dim, &mi_zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: JetMonomial, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        let key = (m, c.pi_half());
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(BigRational::zero);
        *entry += c.rational();
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for ((m, p), q) in &other.terms {
            out.add_term(m.clone(), &Coefficient::new(q.clone(), *p));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((m, p), q) in &self.terms {
            out.terms.insert((m.clone(), *p), -q.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for ((m, p), q) in &self.terms {
            out.add_term(
                m.clone(),
                &Coefficient::new(q * c.rational(), p + c.pi_half()),
            );
        }
        out
    }

    pub fn scale_ratio(&self, r: &BigRational) -> Self {
        self.scale(&Coefficient::new(r.clone(), 0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for ((ma, pa), qa) in &self.terms {
            for ((mb, pb), qb) in &other.terms {
                out.add_term(ma.mul(mb), &Coefficient::new(qa * qb, pa + pb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to coordinate i: u_kappa -> u_{kappa+e_i}
    /// through the product rule.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.dim);
        let mut out = Self::zero(self.dim);
        for ((m, p), q) in &self.terms {
            for (j, (kappa, e)) in m.factors().iter().enumerate() {
                // differentiate the j-th factor
                let mut rest = JetMonomial::one();
                for (jj, f) in m.factors().iter().enumerate() {
                    if jj == j {
                        if *e > 1 {
                            rest = rest.mul(&JetMonomial(vec![(f.0.clone(), e - 1)]));
                        }
                    } else {
                        rest = rest.mul(&JetMonomial(vec![f.clone()]));
                    }
                }
                let bumped = rest.mul(&JetMonomial::var(mi_bump(kappa, i)));
                let coeff = Coefficient::new(
                    q * BigRational::from_integer((*e).into()),
                    *p,
                );
                out.add_term(bumped, &coeff);
            }
        }
        out
    }

    /// d^alpha applied componentwise.
    pub fn partial_multi(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.partial(i);
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            out = out.add(&self.partial(i).partial(i));
        }
        out
    }

    /// Lowest total degree in the jet variables among the terms
    /// (used for decay accounting); `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, _)| m.degree()).min()
    }

    /// Highest jet order |kappa| appearing anywhere.
    pub fn max_jet_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(m, _)| m.max_jet_order())
            .max()
            .unwrap_or(0)
    }

    /// Smallest value over monomials of sum_factors e*(|kappa| + base);
    /// with `base` the decay rate of v this bounds the decay of the whole
    /// polynomial under |d^kappa v| <= C (1+|x|)^{-base-|kappa|}.
    pub fn min_decay_weight(&self, base: f64) -> Option<f64> {
        self.terms
            .keys()
            .map(|(m, _)| {
                m.factors()
                    .iter()
                    .map(|(k, e)| *e as f64 * (base + mi_total(k) as f64))
                    .sum::<f64>()
            })
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    /// Apply a coordinate permutation to every multi-index.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut out = Self::zero(self.dim);
        for ((m, p), q) in &self.terms {
            let mut factors: Vec<(MultiIndex, u32)> = m
                .factors()
                .iter()
                .map(|(k, e)| {
                    let mut nk = vec![0u32; self.dim];
                    for (i, &pi) in perm.iter().enumerate() {
                        nk[pi] = k[i];
                    }
                    (nk, *e)
                })
                .collect();
            factors.sort();
            // merge equal indices
            let mut merged = JetMonomial::one();
            for (k, e) in factors {
                merged = merged.mul(&JetMonomial(vec![(k, e)]));
            }
            out.add_term(merged, &Coefficient::new(q.clone(), *p));
        }
        out
    }

    /// Evaluate numerically given jet values of the potential.
    pub fn eval(&self, jet: &dyn Fn(&[u32]) -> f64) -> f64 {
        let mut total = 0.0;
        for ((m, p), q) in &self.terms {
            let mut term = q.to_f64().unwrap_or(f64::NAN)
                * std::f64::consts::PI.powf(*p as f64 / 2.0);
            for (kappa, e) in m.factors() {
                term *= jet(kappa).powi(*e as i32);
            }
            total += term;
        }
        total
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, Coefficient)> {
        self.terms
            .iter()
            .map(|((m, p), q)| (m, Coefficient::new(q.clone(), *p)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Canonical text form: terms in map order, each
    /// `(q)*pi^p*u[k1,...,kd]^e*...`; the zero polynomial prints as `0`.
    pub fn emit(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for ((m, p), q) in &self.terms {
            let mut s = format!("({})", q);
            if p % 2 == 0 {
                s.push_str(&format!("*pi^{}", p / 2));
            } else {
                s.push_str(&format!("*pi^{}/2", p));
            }
            for (kappa, e) in m.factors() {
                let idx: Vec<String> = kappa.iter().map(|k| k.to_string()).collect();
                s.push_str(&format!("*u[{}]", idx.join(",")));
                if *e > 1 {
                    s.push_str(&format!("^{}", e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.emit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rational;

    #[test]
    fn multi_index_enumeration() {
        let all = multi_indices(2, 2);
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0]
            ]
        );
        assert_eq!(multi_indices(3, 3).len(), 20);
    }

    #[test]
    fn ring_basics() {
        let v = JetPoly::v(1);
        let v2 = v.mul(&v);
        assert_eq!(v2, v.pow(2));
        let s = v2.sub(&v2);
        assert!(s.is_zero());
        let w = v.add(&v);
        assert_eq!(w, v.scale(&Coefficient::from_int(2)));
    }

    #[test]
    fn derivative_product_rule() {
        // d/dx (u0^2) = 2 u0 u1
        let v = JetPoly::v(1);
        let got = v.pow(2).partial(0);
        let mut want = JetPoly::zero(1);
        want.add_term(
            JetMonomial::var(vec![0]).mul(&JetMonomial::var(vec![1])),
            &Coefficient::from_int(2),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn laplacian_matches_sum_of_second_partials() {
        let v = JetPoly::v(2);
        let got = v.laplacian();
        let want = JetPoly::var(2, &[2, 0]).add(&JetPoly::var(2, &[0, 2]));
        assert_eq!(got, want);
    }

    #[test]
    fn eval_numeric() {
        // p = u0^2 - u2/6 at jets u0 = 3, u2 = 12 -> 9 - 2 = 7
        let p = JetPoly::v(1)
            .pow(2)
            .add(&JetPoly::var(1, &[2]).scale(&Coefficient::from_ratio(-1, 6)));
        let val = p.eval(&|k: &[u32]| match k[0] {
            0 => 3.0,
            2 => 12.0,
            _ => 0.0,
        });
        assert!((val - 7.0).abs() < 1e-14);
    }

    #[test]
    fn emit_canonical() {
        let p = JetPoly::var(1, &[2]).scale(&Coefficient::from_ratio(-1, 6));
        assert_eq!(p.emit(), "(-1/6)*pi^0*u[2]");
        let q = JetPoly::v(3)
            .pow(2)
            .scale(&Coefficient::from_ratio(1, 2))
            .add(&JetPoly::var(3, &[2, 0, 0]).scale(&Coefficient::with_pi(1, 3, 1)));
        assert_eq!(
            q.emit(),
            "(1/2)*pi^0*u[0,0,0]^2 + (1/3)*pi^1/2*u[2,0,0]"
        );
        assert_eq!(JetPoly::zero(1).emit(), "0");
    }

    #[test]
    fn permutation_acts_on_indices() {
        let p = JetPoly::var(3, &[2, 1, 0]);
        let q = p.permute(&[2, 0, 1]); // coordinate 0 -> slot 2, 1 -> slot 0, 2 -> slot 1
        assert_eq!(q, JetPoly::var(3, &[1, 0, 2]));
    }

    #[test]
    fn scale_by_rational_zero_gives_zero() {
        let p = JetPoly::v(1).scale_ratio(&rational(0, 5));
        assert!(p.is_zero());
    }
}
