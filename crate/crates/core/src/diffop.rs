//! Linear differential operators with jet-polynomial coefficients:
//! sums p_alpha(u) d^alpha acting on functions of x.

use crate::coeff::{binomial, Coefficient};
use crate::jet::{mi_add, mi_total, JetPoly, MultiIndex};
use num::rational::BigRational;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    dim: usize,
    terms: BTreeMap<MultiIndex, JetPoly>,
}

impl DiffOp {
    pub fn zero(dim: usize) -> Self {
        DiffOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_term(vec![0; dim], JetPoly::one(dim))
    }

    pub fn from_term(alpha: MultiIndex, p: JetPoly) -> Self {
        let dim = alpha.len();
        assert_eq!(p.dim(), dim);
        let mut op = Self::zero(dim);
        op.add_term(alpha, p);
        op
    }

    /// Multiplication by a jet polynomial (order zero operator).
    pub fn mult(p: JetPoly) -> Self {
        let dim = p.dim();
        Self::from_term(vec![0; dim], p)
    }

    /// -Delta = -sum_i d_i^2, the free Schrodinger operator.
    pub fn minus_laplacian(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            let mut alpha = vec![0u32; dim];
            alpha[i] = 2;
            op.add_term(alpha, JetPoly::constant(dim, Coefficient::from_int(-1)));
        }
        op
    }

    /// -Delta + v.
    pub fn schrodinger(dim: usize) -> Self {
        Self::minus_laplacian(dim).add(&Self::mult(JetPoly::v(dim)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, alpha: MultiIndex, p: JetPoly) {
        assert_eq!(alpha.len(), self.dim);
        if p.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, p);
            }
            Some(old) => {
                let s = old.add(&p);
                if !s.is_zero() {
                    self.terms.insert(alpha, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.add_term(a.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, p) in &self.terms {
            out.terms.insert(a.clone(), p.neg());
        }
        out
    }

    /// Operator composition: `self` applied after `other`. Expanded with the
    /// Leibniz rule, so derivatives of `other`'s coefficients appear.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (alpha, p) in &self.terms {
            for (beta, q) in &other.terms {
                for gamma in sub_indices(alpha) {
                    let mut c = BigRational::from_integer(1.into());
                    for i in 0..self.dim {
                        c *= BigRational::from_integer(binomial(
                            alpha[i] as u64,
                            gamma[i] as u64,
                        ));
                    }
                    let dq = q.partial_multi(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let rem: MultiIndex = alpha
                        .iter()
                        .zip(&gamma)
                        .map(|(a, g)| a - g)
                        .collect();
                    let idx = mi_add(&rem, beta);
                    out.add_term(idx, p.mul(&dq).scale_ratio(&c));
                }
            }
        }
        out
    }

    pub fn coeff(&self, alpha: &[u32]) -> JetPoly {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| JetPoly::zero(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &JetPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest |alpha| present.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| mi_total(a)).max().unwrap_or(0)
    }

    /// Text form: one line per derivative slot, sorted by multi-index.
    pub fn emit(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::with_capacity(self.terms.len());
        for (alpha, p) in &self.terms {
            let idx: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
            lines.push(format!("D[{}]: {}", idx.join(","), p.emit()));
        }
        lines.join("\n")
    }
}

/// All gamma with gamma_i <= alpha_i, lexicographic.
fn sub_indices(alpha: &[u32]) -> Vec<MultiIndex> {
    let mut out: Vec<MultiIndex> = vec![Vec::new()];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut v = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetPoly;

    #[test]
    fn identity_composes_trivially() {
        let id = DiffOp::identity(2);
        let h = DiffOp::schrodinger(2);
        assert_eq!(id.compose(&h), h);
        assert_eq!(h.compose(&id), h);
    }

    #[test]
    fn derivative_past_multiplication() {
        // d/dx ( v f ) = v f' + v' f  => compose(d, v) = v d + v'
        let d = DiffOp::from_term(vec![1], JetPoly::one(1));
        let v = DiffOp::mult(JetPoly::v(1));
        let got = d.compose(&v);
        let mut want = DiffOp::from_term(vec![1], JetPoly::v(1));
        want.add_term(vec![0], JetPoly::var(1, &[1]));
        assert_eq!(got, want);
    }

    #[test]
    fn second_derivative_past_multiplication() {
        // d^2 (v f) = v f'' + 2 v' f' + v'' f
        let d2 = DiffOp::from_term(vec![2], JetPoly::one(1));
        let v = DiffOp::mult(JetPoly::v(1));
        let got = d2.compose(&v);
        let mut want = DiffOp::from_term(vec![2], JetPoly::v(1));
        want.add_term(
            vec![1],
            JetPoly::var(1, &[1]).scale(&Coefficient::from_int(2)),
        );
        want.add_term(vec![0], JetPoly::var(1, &[2]));
        assert_eq!(got, want);
    }

    #[test]
    fn composition_is_associative_on_sample() {
        let a = DiffOp::schrodinger(2);
        let b = DiffOp::from_term(vec![1, 0], JetPoly::v(2));
        let c = DiffOp::from_term(vec![0, 1], JetPoly::var(2, &[1, 1]));
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        assert_eq!(left, right);
    }

    #[test]
    fn order_reports_total_degree() {
        assert_eq!(DiffOp::schrodinger(3).order(), 2);
        assert_eq!(DiffOp::mult(JetPoly::v(1)).order(), 0);
    }
}
