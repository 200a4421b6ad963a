//! Potential models: named families with closed-form jets, plus arbitrary
//! expressions evaluated in Taylor arithmetic. Every potential knows its
//! decay class, discontinuity locations and an effective support radius, so
//! integrals of jet densities can be computed with certified tail bounds.

use crate::error::{Result, SsfError};
use crate::expr::Expr;
use crate::jet::{mi_total, multi_indices, JetPoly, MultiIndex};
use crate::quadrature;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialKind {
    /// v(x) = -n(n+1) sech^2(x) on the line; reflectionless for integer n.
    PoschlTeller { n: u32 },
    /// v(x) = -depth exp(-|x|^2 / width^2); repulsive bump when depth < 0.
    GaussianWell { depth: f64, width: f64 },
    /// v(x) = -depth inside |x| < radius, 0 outside.
    SquareWell { depth: f64, radius: f64 },
    /// v(x) = -depth exp(-rate |x|).
    ExponentialWell { depth: f64, rate: f64 },
    /// Arbitrary expression in x (and y, z, r2 as the dimension allows).
    Expression { formula: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PotentialSpec {
    pub dim: usize,
    #[serde(flatten)]
    pub kind: PotentialKind,
    /// Power-law decay rate; None means faster than any power.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Declared spherical symmetry (only consulted for expressions; the
    /// named families are symmetric by construction).
    #[serde(default)]
    pub radial: bool,
}

impl PotentialSpec {
    pub fn poschl_teller(n: u32) -> Self {
        PotentialSpec {
            dim: 1,
            kind: PotentialKind::PoschlTeller { n },
            rho: None,
            radial: true,
        }
    }

    pub fn gaussian_well(dim: usize, depth: f64, width: f64) -> Self {
        PotentialSpec {
            dim,
            kind: PotentialKind::GaussianWell { depth, width },
            rho: None,
            radial: true,
        }
    }

    pub fn square_well(dim: usize, depth: f64, radius: f64) -> Self {
        PotentialSpec {
            dim,
            kind: PotentialKind::SquareWell { depth, radius },
            rho: None,
            radial: true,
        }
    }

    pub fn exponential_well(dim: usize, depth: f64, rate: f64) -> Self {
        PotentialSpec {
            dim,
            kind: PotentialKind::ExponentialWell { depth, rate },
            rho: None,
            radial: true,
        }
    }

    pub fn expression(dim: usize, formula: &str) -> Self {
        PotentialSpec {
            dim,
            kind: PotentialKind::Expression {
                formula: formula.to_string(),
            },
            rho: None,
            radial: false,
        }
    }
}

/// Jet of a potential at a point: multi-index -> derivative value.
#[derive(Debug, Clone)]
pub struct Jet {
    vals: BTreeMap<MultiIndex, f64>,
}

impl Jet {
    pub fn get(&self, kappa: &[u32]) -> f64 {
        self.vals.get(kappa).copied().unwrap_or(0.0)
    }

    pub fn value(&self) -> f64 {
        self.vals
            .iter()
            .find(|(k, _)| mi_total(k) == 0)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }
}

/// A validated, evaluation-ready potential.
#[derive(Debug, Clone)]
pub struct Potential {
    spec: PotentialSpec,
    expr: Option<Expr>,
}

impl Potential {
    pub fn build(spec: PotentialSpec) -> Result<Potential> {
        if !(1..=3).contains(&spec.dim) {
            return Err(SsfError::Unsupported(format!(
                "dimension {} outside 1..=3",
                spec.dim
            )));
        }
        let expr = match &spec.kind {
            PotentialKind::PoschlTeller { n } => {
                if spec.dim != 1 {
                    return Err(SsfError::Unsupported(
                        "the sech^2 family is one-dimensional".into(),
                    ));
                }
                if *n == 0 || *n > 5 {
                    return Err(SsfError::Invalid("sech^2 family index n in 1..=5".into()));
                }
                None
            }
            PotentialKind::GaussianWell { width, .. } => {
                if *width <= 0.0 {
                    return Err(SsfError::Invalid("gaussian width must be positive".into()));
                }
                None
            }
            PotentialKind::SquareWell { radius, .. } => {
                if *radius <= 0.0 {
                    return Err(SsfError::Invalid("well radius must be positive".into()));
                }
                None
            }
            PotentialKind::ExponentialWell { rate, depth } => {
                if *rate <= 0.0 {
                    return Err(SsfError::Invalid("decay rate must be positive".into()));
                }
                if spec.dim == 1 {
                    None
                } else {
                    // multi-index jets come from Taylor arithmetic on
                    // -depth exp(-rate sqrt(r2)); smooth away from the origin
                    let formula = format!("-({}) * exp(-({}) * sqrt(r2))", depth, rate);
                    Some(Expr::parse(&formula, spec.dim)?)
                }
            }
            PotentialKind::Expression { formula } => Some(Expr::parse(formula, spec.dim)?),
        };
        Ok(Potential { spec, expr })
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Power-law decay rate; infinity when the decay beats every power.
    pub fn decay_rate(&self) -> f64 {
        match &self.spec.kind {
            PotentialKind::Expression { .. } => self.spec.rho.unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        }
    }

    pub fn is_radial(&self) -> bool {
        match &self.spec.kind {
            PotentialKind::Expression { .. } => self.spec.radial,
            _ => true,
        }
    }

    /// Radii (or |x| values) where the potential is discontinuous or kinked.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.spec.kind {
            PotentialKind::SquareWell { radius, .. } => vec![*radius],
            PotentialKind::ExponentialWell { .. } => vec![0.0],
            _ => Vec::new(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim());
        match &self.spec.kind {
            PotentialKind::PoschlTeller { n } => {
                let s = 1.0 / x[0].cosh();
                -((n * (n + 1)) as f64) * s * s
            }
            PotentialKind::GaussianWell { depth, width } => {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                -depth * (-r2 / (width * width)).exp()
            }
            PotentialKind::SquareWell { depth, radius } => {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                if r2 < radius * radius {
                    -depth
                } else {
                    0.0
                }
            }
            PotentialKind::ExponentialWell { depth, rate } => {
                let r: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                -depth * (-rate * r).exp()
            }
            PotentialKind::Expression { .. } => self
                .expr
                .as_ref()
                .expect("validated at build")
                .eval(x)
                .unwrap_or(f64::NAN),
        }
    }

    /// All partial derivatives up to |kappa| <= order at a point.
    pub fn jet(&self, x: &[f64], order: u32) -> Result<Jet> {
        assert_eq!(x.len(), self.dim());
        let dim = self.dim();
        match &self.spec.kind {
            PotentialKind::PoschlTeller { n } => {
                let scale = -((n * (n + 1)) as f64);
                let derivs = sech2_derivatives(x[0], order);
                let mut vals = BTreeMap::new();
                for k in 0..=order {
                    vals.insert(vec![k], scale * derivs[k as usize]);
                }
                Ok(Jet { vals })
            }
            PotentialKind::GaussianWell { depth, width } => {
                let a = 1.0 / (width * width);
                let per_axis: Vec<Vec<f64>> = x
                    .iter()
                    .map(|&s| gaussian_derivatives(s, a, order))
                    .collect();
                let mut vals = BTreeMap::new();
                for kappa in multi_indices(dim, order) {
                    let mut prod = -depth;
                    for (i, &k) in kappa.iter().enumerate() {
                        prod *= per_axis[i][k as usize];
                    }
                    vals.insert(kappa, prod);
                }
                Ok(Jet { vals })
            }
            PotentialKind::SquareWell { depth, radius } => {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                let inside = r2 < radius * radius;
                let mut vals = BTreeMap::new();
                for kappa in multi_indices(dim, order) {
                    let v = if mi_total(&kappa) == 0 && inside {
                        -depth
                    } else {
                        0.0
                    };
                    vals.insert(kappa, v);
                }
                Ok(Jet { vals })
            }
            PotentialKind::ExponentialWell { depth, rate } => {
                if dim == 1 {
                    let s = x[0];
                    if s == 0.0 && order >= 1 {
                        return Err(SsfError::Domain(
                            "exponential well jets are undefined at the kink x = 0".into(),
                        ));
                    }
                    let sign = if s >= 0.0 { -1.0 } else { 1.0 };
                    let e = -depth * (-rate * s.abs()).exp();
                    let mut vals = BTreeMap::new();
                    for k in 0..=order {
                        vals.insert(vec![k], e * (sign * rate).powi(k as i32));
                    }
                    Ok(Jet { vals })
                } else {
                    let t = self
                        .expr
                        .as_ref()
                        .expect("built for dim > 1")
                        .taylor(x, order)?;
                    Ok(Jet { vals: t.jets() })
                }
            }
            PotentialKind::Expression { .. } => {
                let t = self
                    .expr
                    .as_ref()
                    .expect("validated at build")
                    .taylor(x, order)?;
                Ok(Jet { vals: t.jets() })
            }
        }
    }

    /// Radius beyond which |v| stays below eps.
    pub fn support_radius(&self, eps: f64) -> f64 {
        let eps = eps.max(1e-300);
        match &self.spec.kind {
            PotentialKind::PoschlTeller { n } => {
                let c = 4.0 * (n * (n + 1)) as f64;
                (0.5 * (c / eps).ln()).max(1.0)
            }
            PotentialKind::GaussianWell { depth, width } => {
                let d = depth.abs().max(eps);
                (width * (d / eps).ln().max(1.0).sqrt()).max(1.0)
            }
            PotentialKind::SquareWell { radius, .. } => radius * 1.000001,
            PotentialKind::ExponentialWell { depth, rate } => {
                let d = depth.abs().max(eps);
                ((d / eps).ln() / rate).max(1.0)
            }
            PotentialKind::Expression { .. } => {
                let mut r = 1.0f64;
                while r < 120.0 {
                    let mut worst: f64 = 0.0;
                    for dir in directions(self.dim()) {
                        let x: Vec<f64> = dir.iter().map(|c| c * r).collect();
                        worst = worst.max(self.value(&x).abs());
                    }
                    if worst < eps {
                        return r;
                    }
                    r *= 1.3;
                }
                r
            }
        }
    }
}

fn directions(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.7071067811865476, 0.7071067811865476],
        ],
        _ => vec![
            vec![1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.5773502691896258, 0.5773502691896258, 0.5773502691896258],
        ],
    }
}

/// (d/dx)^k sech^2(x) for k = 0..=order via polynomials in tanh x.
fn sech2_derivatives(x: f64, order: u32) -> Vec<f64> {
    let t = x.tanh();
    let mut poly: Vec<f64> = vec![1.0, 0.0, -1.0]; // 1 - t^2
    let mut out = Vec::with_capacity(order as usize + 1);
    for _ in 0..=order {
        let mut acc = 0.0;
        for &c in poly.iter().rev() {
            acc = acc * t + c;
        }
        out.push(acc);
        poly = crate::expr::tanh_conjugate_derivative(&poly);
    }
    out
}

/// (d/ds)^k exp(-a s^2) = (-sqrt(a))^k H_k(sqrt(a) s) exp(-a s^2) with the
/// physicists' Hermite polynomials.
fn gaussian_derivatives(s: f64, a: f64, order: u32) -> Vec<f64> {
    let e = (-a * s * s).exp();
    let u = a.sqrt() * s;
    let n = order as usize;
    let mut h = vec![0.0; n + 1];
    h[0] = 1.0;
    if n >= 1 {
        h[1] = 2.0 * u;
    }
    for k in 1..n {
        h[k + 1] = 2.0 * u * h[k] - 2.0 * (k as f64) * h[k - 1];
    }
    let root_a = a.sqrt();
    (0..=n)
        .map(|k| (-root_a).powi(k as i32) * h[k] * e)
        .collect()
}

/// Result of integrating a jet density over R^d.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityIntegral {
    pub value: f64,
    pub abs_error: f64,
    pub tail_bound: f64,
    pub evaluations: usize,
}

/// Integrate a jet-polynomial density of the potential over R^d
/// (d = 1 or 3; dimension 2 is symbolic-only). The result carries the
/// quadrature error plus a certified bound for the neglected tail.
pub fn integrate_density(
    p: &Potential,
    density: &JetPoly,
    abs_tol: f64,
) -> Result<DensityIntegral> {
    let dim = p.dim();
    if density.dim() != dim {
        return Err(SsfError::Invalid(
            "density dimension does not match the potential".into(),
        ));
    }
    if density.is_zero() {
        return Ok(DensityIntegral {
            value: 0.0,
            abs_error: 0.0,
            tail_bound: 0.0,
            evaluations: 0,
        });
    }
    if dim == 2 {
        return Err(SsfError::Unsupported(
            "numeric density integration covers dimensions 1 and 3".into(),
        ));
    }
    if dim == 3 && !p.is_radial() {
        return Err(SsfError::Unsupported(
            "3-d density integration needs a radial potential".into(),
        ));
    }
    let rho = p.decay_rate();
    let order = density.max_jet_order();
    if rho.is_finite() {
        let s = density
            .min_decay_weight(rho)
            .expect("non-zero density has a decay weight");
        if s <= dim as f64 {
            return Err(SsfError::Domain(format!(
                "density decays like |x|^-{:.2}; integral over R^{} diverges",
                s, dim
            )));
        }
    }

    let eval_at = |r: f64, order: u32| -> Result<f64> {
        let x = match dim {
            1 => vec![r],
            _ => vec![r, 0.0, 0.0],
        };
        let jet = p.jet(&x, order)?;
        Ok(density.eval(&|k: &[u32]| jet.get(k)))
    };

    // choose the cutoff radius
    let mut radius = p.support_radius(1e-16).clamp(4.0, 80.0);
    let mag = |r: f64| -> f64 {
        let a = eval_at(r, order).map(f64::abs).unwrap_or(0.0);
        if dim == 1 {
            let b = eval_at(-r, order).map(f64::abs).unwrap_or(0.0);
            a.max(b)
        } else {
            a
        }
    };
    let mut guard = 0;
    while mag(radius) * radius.powi(dim as i32) > abs_tol * 1e-3 && guard < 40 {
        radius += 4.0;
        guard += 1;
    }

    // tail bound beyond the cutoff
    let m_r = mag(radius);
    let tail_bound = if m_r == 0.0 {
        0.0
    } else if rho.is_finite() {
        let s = density.min_decay_weight(rho).unwrap();
        match dim {
            1 => 2.0 * m_r * radius / (s - 1.0),
            _ => 4.0 * std::f64::consts::PI * m_r * radius.powi(3) / (s - 3.0),
        }
    } else {
        let m_far = mag(radius + 1.0);
        let beta = if m_far > 0.0 && m_far < m_r {
            (m_r / m_far).ln().max(0.3)
        } else {
            0.3
        };
        match dim {
            1 => 2.0 * m_r / beta,
            _ => {
                4.0 * std::f64::consts::PI
                    * m_r
                    * (radius * radius / beta + 2.0 * radius / (beta * beta)
                        + 2.0 / (beta * beta * beta))
            }
        }
    };

    let breaks = p.breakpoints();
    let (value, quad_err, evals) = if dim == 1 {
        let mut f = |x: f64| eval_at(x, order).unwrap_or(f64::NAN);
        let mut cuts: Vec<f64> = breaks.iter().flat_map(|&b| [b, -b]).collect();
        cuts.push(0.0);
        let r = quadrature::integrate_piecewise(
            &mut f,
            -radius,
            radius,
            &cuts,
            abs_tol * 0.5,
            1e-12,
            4000,
        );
        (r.value, r.abs_error, r.evaluations)
    } else {
        let mut f =
            |r: f64| 4.0 * std::f64::consts::PI * r * r * eval_at(r, order).unwrap_or(f64::NAN);
        let r = quadrature::integrate_piecewise(
            &mut f,
            0.0,
            radius,
            &breaks,
            abs_tol * 0.5,
            1e-12,
            4000,
        );
        (r.value, r.abs_error, r.evaluations)
    };
    if !value.is_finite() {
        return Err(SsfError::Domain(
            "density evaluation failed inside the integration window".into(),
        ));
    }
    Ok(DensityIntegral {
        value,
        abs_error: quad_err + tail_bound,
        tail_bound,
        evaluations: evals,
    })
}

/// Integral of the potential itself over R^d.
pub fn v_integral(p: &Potential) -> Result<DensityIntegral> {
    integrate_density(p, &JetPoly::v(p.dim()), 1e-11)
}

/// Spot-check the declared decay: samples |d^kappa v| against
/// C (1+|x|)^{-rho-|kappa|} on a geometric radius ladder and returns the
/// smallest constant C that works; errors if no reasonable constant does.
pub fn decay_spot_check(p: &Potential, order: u32) -> Result<f64> {
    let rho = p.decay_rate();
    let rho_eff = if rho.is_finite() { rho } else { 6.0 };
    let base = p.support_radius(1e-3).min(20.0);
    let mut c_max: f64 = 0.0;
    for step in 0..6 {
        let r = base * (1.0 + 0.5 * step as f64);
        for dir in directions(p.dim()) {
            let x: Vec<f64> = dir.iter().map(|c| c * r).collect();
            let jet = match p.jet(&x, order) {
                Ok(j) => j,
                Err(_) => continue,
            };
            for kappa in multi_indices(p.dim(), order) {
                let bound = (1.0 + r).powf(-(rho_eff + mi_total(&kappa) as f64));
                let c = jet.get(&kappa).abs() / bound;
                c_max = c_max.max(c);
            }
        }
    }
    if c_max.is_finite() {
        Ok(c_max)
    } else {
        Err(SsfError::Domain("decay check produced non-finite ratios".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants;

    fn pt1() -> Potential {
        Potential::build(PotentialSpec::poschl_teller(1)).unwrap()
    }

    #[test]
    fn sech2_jets_match_expression_engine() {
        let p = pt1();
        let q = Potential::build(PotentialSpec::expression(1, "-2/cosh(x)^2")).unwrap();
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            let jp = p.jet(&[x], 5).unwrap();
            let jq = q.jet(&[x], 5).unwrap();
            for k in 0..=5u32 {
                let a = jp.get(&[k]);
                let b = jq.get(&[k]);
                assert!(
                    (a - b).abs() < 1e-10 * (1.0 + a.abs()),
                    "k={} x={}: {} vs {}",
                    k,
                    x,
                    a,
                    b
                );
            }
        }
    }

    #[test]
    fn gaussian_jets_match_expression_engine() {
        let p = Potential::build(PotentialSpec::gaussian_well(3, 2.0, 1.0)).unwrap();
        let q = Potential::build(PotentialSpec::expression(3, "-2*exp(-r2)")).unwrap();
        let x = [0.6, -0.2, 0.1];
        let jp = p.jet(&x, 4).unwrap();
        let jq = q.jet(&x, 4).unwrap();
        for kappa in multi_indices(3, 4) {
            let a = jp.get(&kappa);
            let b = jq.get(&kappa);
            assert!(
                (a - b).abs() < 1e-9 * (1.0 + a.abs()),
                "{:?}: {} vs {}",
                kappa,
                a,
                b
            );
        }
    }

    #[test]
    fn gaussian_second_derivative_at_origin() {
        let p = Potential::build(PotentialSpec::gaussian_well(1, 1.0, 1.0)).unwrap();
        let j = p.jet(&[0.0], 2).unwrap();
        assert!((j.get(&[2]) - 2.0).abs() < 1e-13);
        assert!((j.get(&[0]) + 1.0).abs() < 1e-15);
        assert!(j.get(&[1]).abs() < 1e-15);
    }

    #[test]
    fn heat_densities_for_reflectionless_well() {
        // integral of -v: 4; of v^2/2 - v''/6: 8/3; of the next density: 16/15
        let p = pt1();
        let g1 = invariants::heat_invariant_closed(1, 1).unwrap();
        let g2 = invariants::heat_invariant_closed(2, 1).unwrap();
        let g3 = invariants::heat_invariant_closed(3, 1).unwrap();
        let i1 = integrate_density(&p, &g1, 1e-11).unwrap();
        let i2 = integrate_density(&p, &g2, 1e-11).unwrap();
        let i3 = integrate_density(&p, &g3, 1e-11).unwrap();
        assert!((i1.value - 4.0).abs() < 1e-9, "g1: {}", i1.value);
        assert!((i2.value - 8.0 / 3.0).abs() < 1e-9, "g2: {}", i2.value);
        assert!((i3.value - 16.0 / 15.0).abs() < 1e-9, "g3: {}", i3.value);
        assert!(i1.abs_error < 1e-7);
    }

    #[test]
    fn ssf_coefficient_values_for_reflectionless_well() {
        let p = pt1();
        let pi = std::f64::consts::PI;
        for (n, want) in [(0u32, -2.0 / pi), (1, 2.0 / (3.0 * pi)), (2, -2.0 / (5.0 * pi))] {
            let dens = invariants::ssf_coeff_density(n, 1).unwrap();
            let i = integrate_density(&p, &dens, 1e-11).unwrap();
            assert!(
                (i.value - want).abs() < 1e-8,
                "coefficient {}: {} vs {}",
                n,
                i.value,
                want
            );
        }
    }

    #[test]
    fn determinant_coefficient_values_for_reflectionless_well() {
        let p = pt1();
        for (n, want) in [(0u32, -2.0), (1, -2.0 / 3.0), (2, -2.0 / 5.0)] {
            let dens = invariants::pd_coeff_density(n, 1).unwrap();
            let i = integrate_density(&p, &dens, 1e-11).unwrap();
            assert!(
                (i.value - want).abs() < 1e-8,
                "coefficient {}: {} vs {}",
                n,
                i.value,
                want
            );
        }
    }

    #[test]
    fn square_well_volume_integral() {
        let p = Potential::build(PotentialSpec::square_well(3, 2.0, 1.5)).unwrap();
        let i = v_integral(&p).unwrap();
        let want = -2.0 * 4.0 / 3.0 * std::f64::consts::PI * 1.5f64.powi(3);
        assert!((i.value - want).abs() < 1e-8, "{} vs {}", i.value, want);
    }

    #[test]
    fn gaussian_volume_integrals() {
        let p1 = Potential::build(PotentialSpec::gaussian_well(1, 1.0, 1.0)).unwrap();
        let want1 = -std::f64::consts::PI.sqrt();
        assert!((v_integral(&p1).unwrap().value - want1).abs() < 1e-10);
        let p3 = Potential::build(PotentialSpec::gaussian_well(3, 1.0, 1.0)).unwrap();
        let want3 = -std::f64::consts::PI.powf(1.5);
        assert!((v_integral(&p3).unwrap().value - want3).abs() < 1e-9);
    }

    #[test]
    fn exponential_well_radial_jets() {
        let p = Potential::build(PotentialSpec::exponential_well(3, 1.0, 2.0)).unwrap();
        let j = p.jet(&[1.0, 0.0, 0.0], 2).unwrap();
        let v = -(-2.0_f64).exp();
        assert!((j.get(&[0, 0, 0]) - v).abs() < 1e-13);
        assert!((j.get(&[1, 0, 0]) - -2.0 * v).abs() < 1e-12);
        // kink at the origin
        assert!(p.jet(&[0.0, 0.0, 0.0], 1).is_err());
        let p1 = Potential::build(PotentialSpec::exponential_well(1, 1.0, 2.0)).unwrap();
        assert!(p1.jet(&[0.0], 1).is_err());
        assert!(p1.jet(&[0.0], 0).is_ok());
    }

    #[test]
    fn divergence_detected_for_slow_decay() {
        let mut spec = PotentialSpec::expression(1, "1/(1+x^2)");
        spec.rho = Some(2.0);
        let p = Potential::build(spec).unwrap();
        // v itself integrates fine (decay weight 2 > 1)...
        assert!(integrate_density(&p, &JetPoly::v(1), 1e-9).is_ok());
        // ...but a density that decays like v would with rho = 0.5 diverges
        let mut slow = PotentialSpec::expression(1, "1/(1+x^2)");
        slow.rho = Some(0.5);
        let ps = Potential::build(slow).unwrap();
        assert!(matches!(
            integrate_density(&ps, &JetPoly::v(1), 1e-9),
            Err(SsfError::Domain(_))
        ));
    }

    #[test]
    fn decay_certificate_for_families() {
        for spec in [
            PotentialSpec::poschl_teller(2),
            PotentialSpec::gaussian_well(1, 3.0, 0.8),
            PotentialSpec::gaussian_well(3, 1.0, 1.0),
        ] {
            let p = Potential::build(spec).unwrap();
            let c = decay_spot_check(&p, 3).unwrap();
            assert!(c.is_finite());
        }
    }

    #[test]
    fn build_rejects_bad_specs() {
        assert!(Potential::build(PotentialSpec {
            dim: 2,
            kind: PotentialKind::PoschlTeller { n: 1 },
            rho: None,
            radial: true,
        })
        .is_err());
        assert!(Potential::build(PotentialSpec::gaussian_well(1, 1.0, 0.0)).is_err());
        assert!(Potential::build(PotentialSpec::expression(1, "sech[x]")).is_err());
    }
}
