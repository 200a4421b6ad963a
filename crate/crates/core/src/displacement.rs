//! Polynomials in the displacement y = x - x' whose coefficients are jets of
//! the potential at the base point x'. These carry the two-point recurrence
//! for the heat kernel coefficients: the Laplacian acts on y alone and the
//! potential enters through its truncated Taylor expansion around x'.

use crate::coeff::{factorial, Coefficient};
use crate::jet::{mi_total, multi_indices, JetMonomial, JetPoly, MultiIndex};
use num::rational::BigRational;
use num::traits::One;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementPoly {
    dim: usize,
    /// Upper bound on the y-degree retained in this polynomial. Degrees above
    /// the bound have been truncated away and are not tracked.
    y_bound: u32,
    terms: BTreeMap<MultiIndex, JetPoly>,
}

impl DisplacementPoly {
    pub fn zero(dim: usize, y_bound: u32) -> Self {
        DisplacementPoly {
            dim,
            y_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize, y_bound: u32) -> Self {
        let mut p = Self::zero(dim, y_bound);
        p.add_term(vec![0; dim], JetPoly::one(dim));
        p
    }

    /// |y|^(2k), exact while 2k <= y_bound.
    pub fn y_sq_power(dim: usize, k: u32, y_bound: u32) -> Self {
        assert!(2 * k <= y_bound, "requested power exceeds bound");
        let mut ysq = Self::zero(dim, y_bound);
        for i in 0..dim {
            let mut beta = vec![0u32; dim];
            beta[i] = 2;
            ysq.add_term(beta, JetPoly::one(dim));
        }
        let mut out = Self::one(dim, y_bound);
        for _ in 0..k {
            out = out.mul(&ysq, y_bound);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn y_bound(&self) -> u32 {
        self.y_bound
    }

    pub fn add_term(&mut self, beta: MultiIndex, p: JetPoly) {
        assert_eq!(beta.len(), self.dim);
        if p.is_zero() || mi_total(&beta) > self.y_bound {
            return;
        }
        match self.terms.remove(&beta) {
            None => {
                self.terms.insert(beta, p);
            }
            Some(old) => {
                let s = old.add(&p);
                if !s.is_zero() {
                    self.terms.insert(beta, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        out.y_bound = self.y_bound.min(other.y_bound);
        out.truncate(out.y_bound);
        for (b, p) in &other.terms {
            out.add_term(b.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim, self.y_bound);
        for (b, p) in &self.terms {
            out.terms.insert(b.clone(), p.neg());
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(self.dim, self.y_bound);
        for (b, p) in &self.terms {
            let sp = p.scale(c);
            if !sp.is_zero() {
                out.terms.insert(b.clone(), sp);
            }
        }
        out
    }

    /// Product with truncation of y-degrees above `out_bound`.
    pub fn mul(&self, other: &Self, out_bound: u32) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim, out_bound);
        for (ba, pa) in &self.terms {
            for (bb, pb) in &other.terms {
                if mi_total(ba) + mi_total(bb) > out_bound {
                    continue;
                }
                let beta: MultiIndex = ba.iter().zip(bb).map(|(x, y)| x + y).collect();
                out.add_term(beta, pa.mul(pb));
            }
        }
        out
    }

    /// Drop y-degrees above `bound`.
    pub fn truncate(&mut self, bound: u32) {
        self.y_bound = bound;
        self.terms.retain(|b, _| mi_total(b) <= bound);
    }

    /// Laplacian in the displacement variable only.
    pub fn y_laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim, self.y_bound);
        for (beta, p) in &self.terms {
            for i in 0..self.dim {
                let b = beta[i];
                if b >= 2 {
                    let mut nb = beta.clone();
                    nb[i] -= 2;
                    let c = Coefficient::from_int((b as i64) * (b as i64 - 1));
                    out.add_term(nb, p.scale(&c));
                }
            }
        }
        out
    }

    /// Truncated Taylor expansion of the potential around the base point:
    /// sum over |kappa| <= max_deg of u_kappa y^kappa / kappa!.
    pub fn taylor_potential(dim: usize, max_deg: u32) -> Self {
        let mut out = Self::zero(dim, max_deg);
        for kappa in multi_indices(dim, max_deg) {
            let mut kfact = BigRational::one();
            for &k in &kappa {
                kfact *= BigRational::from_integer(factorial(k));
            }
            let mut poly = JetPoly::zero(dim);
            poly.add_term(
                JetMonomial::var(kappa.clone()),
                &Coefficient::new(BigRational::one() / kfact, 0),
            );
            out.add_term(kappa, poly);
        }
        out
    }

    /// Apply -Delta_y + v(x), with v expanded in Taylor form around the base
    /// point; y-degrees above `out_bound` are dropped. Exactness of retained
    /// degrees only needs the Taylor expansion through `out_bound`.
    pub fn schrodinger_apply(&self, out_bound: u32) -> Self {
        let tv = Self::taylor_potential(self.dim, out_bound);
        let mut out = self.y_laplacian().neg();
        out.truncate(out_bound);
        let prod = tv.mul(self, out_bound);
        out.add(&prod)
    }

    /// Scale the y^beta slot by 1/(n + |beta| + 1); this is integration of
    /// sigma^(n + |beta|) over [0,1] after the dilation y -> sigma y.
    pub fn sigma_integrate(&self, n: u32) -> Self {
        let mut out = Self::zero(self.dim, self.y_bound);
        for (beta, p) in &self.terms {
            let denom = BigRational::from_integer((n + mi_total(beta) + 1).into());
            out.terms
                .insert(beta.clone(), p.scale_ratio(&(BigRational::one() / denom)));
        }
        out
    }

    /// Coefficient of y^0: the value on the diagonal x = x'.
    pub fn diagonal(&self) -> JetPoly {
        self.terms
            .get(&vec![0u32; self.dim])
            .cloned()
            .unwrap_or_else(|| JetPoly::zero(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &JetPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetPoly;

    #[test]
    fn apply_to_one_returns_taylor_of_potential() {
        let one = DisplacementPoly::one(1, 1);
        let got = one.schrodinger_apply(1);
        let mut want = DisplacementPoly::zero(1, 1);
        want.add_term(vec![0], JetPoly::v(1));
        want.add_term(vec![1], JetPoly::var(1, &[1]));
        assert_eq!(got, want);
    }

    #[test]
    fn laplacian_of_y_squared() {
        // Delta_y |y|^2 = 2 d
        for d in 1..=3usize {
            let ysq = DisplacementPoly::y_sq_power(d, 1, 2);
            let lap = ysq.y_laplacian();
            assert_eq!(
                lap.diagonal(),
                JetPoly::constant(d, Coefficient::from_int(2 * d as i64))
            );
        }
    }

    #[test]
    fn double_application_diagonal() {
        // (-Delta_y + v)^2 |y|^2 on the diagonal equals -4 d v
        for d in 1..=3usize {
            let ysq = DisplacementPoly::y_sq_power(d, 1, 4);
            let once = ysq.schrodinger_apply(2);
            let twice = once.schrodinger_apply(0);
            let want = JetPoly::v(d).scale(&Coefficient::from_int(-4 * d as i64));
            assert_eq!(twice.diagonal(), want);
        }
    }

    #[test]
    fn triple_application_diagonal() {
        // (-Delta_y + v)^3 |y|^2 on the diagonal: (6d + 8) Delta v - 6 d v^2
        for d in 1..=3usize {
            let ysq = DisplacementPoly::y_sq_power(d, 1, 4);
            let p3 = ysq
                .schrodinger_apply(4)
                .schrodinger_apply(2)
                .schrodinger_apply(0);
            let lap_v = JetPoly::v(d).laplacian();
            let want = lap_v
                .scale(&Coefficient::from_int(6 * d as i64 + 8))
                .add(&JetPoly::v(d).pow(2).scale(&Coefficient::from_int(-6 * d as i64)));
            assert_eq!(p3.diagonal(), want);
        }
    }

    #[test]
    fn sigma_weights() {
        let mut p = DisplacementPoly::zero(2, 2);
        p.add_term(vec![0, 0], JetPoly::one(2));
        p.add_term(vec![1, 1], JetPoly::v(2));
        let s = p.sigma_integrate(1);
        // |beta| = 0 -> 1/2, |beta| = 2 -> 1/4
        assert_eq!(
            s.diagonal(),
            JetPoly::one(2).scale(&Coefficient::from_ratio(1, 2))
        );
        let got = s
            .terms()
            .find(|(b, _)| **b == vec![1, 1])
            .map(|(_, p)| p.clone())
            .unwrap();
        assert_eq!(got, JetPoly::v(2).scale(&Coefficient::from_ratio(1, 4)));
    }

    #[test]
    fn taylor_expansion_coefficients() {
        let t = DisplacementPoly::taylor_potential(1, 3);
        let cubic = t
            .terms()
            .find(|(b, _)| **b == vec![3])
            .map(|(_, p)| p.clone())
            .unwrap();
        assert_eq!(
            cubic,
            JetPoly::var(1, &[3]).scale(&Coefficient::from_ratio(1, 6))
        );
    }
}
