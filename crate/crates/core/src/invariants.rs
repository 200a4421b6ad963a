//! Exact spectral invariants of -Delta + v: symbol-recurrence operators,
//! heat-kernel diagonal coefficients (two independent routes), phase-space
//! constants, and the densities of the high-energy expansion coefficients
//! derived from them.

use crate::coeff::{beta_half, binomial, factorial, gamma_half, Coefficient};
use crate::diffop::DiffOp;
use crate::displacement::DisplacementPoly;
use crate::error::{Result, SsfError};
use crate::jet::{mi_total, multi_indices, JetPoly, MultiIndex};
use num::rational::BigRational;
use num::traits::One;

pub const MAX_XN: u32 = 6;
pub const MAX_HEAT: u32 = 5;
pub const MAX_RESOLVENT_N: u32 = 3;

/// An exact constant together with its floating-point value.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientValue {
    pub symbolic: Coefficient,
    pub value: f64,
}

impl CoefficientValue {
    fn new(symbolic: Coefficient) -> Self {
        let value = symbolic.to_f64();
        CoefficientValue { symbolic, value }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(SsfError::Unsupported(format!(
            "dimension {} outside 1..=3",
            dim
        )))
    }
}

/// Operators X_0..X_max from the commutator-style recurrence
/// X_{n+1} = X_n H_0 - H X_n with H_0 = -Delta, H = -Delta + v.
/// X_n has order n-1 for n >= 1; its coefficients are the symbol polynomials
/// used by the resolvent expansion.
fn xn_table_uncapped(max_n: u32, dim: usize) -> Vec<DiffOp> {
    let h0 = DiffOp::minus_laplacian(dim);
    let h = DiffOp::schrodinger(dim);
    let mut table = Vec::with_capacity(max_n as usize + 1);
    table.push(DiffOp::identity(dim));
    for n in 0..max_n {
        let xn = &table[n as usize];
        table.push(xn.compose(&h0).sub(&h.compose(xn)));
    }
    table
}

pub fn xn_table(max_n: u32, dim: usize) -> Result<Vec<DiffOp>> {
    check_dim(dim)?;
    if max_n > MAX_XN {
        return Err(SsfError::Unsupported(format!(
            "operator order {} exceeds cap {}",
            max_n, MAX_XN
        )));
    }
    Ok(xn_table_uncapped(max_n, dim))
}

pub fn xn(n: u32, dim: usize) -> Result<DiffOp> {
    Ok(xn_table(n, dim)?.pop().expect("non-empty table"))
}

/// Heat coefficient g_n via the closed one-formula route: an alternating sum
/// of diagonal values of Schrodinger powers applied to |y|^(2k).
pub fn heat_invariant_closed(n: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    if n == 0 || n > MAX_HEAT {
        return Err(SsfError::Unsupported(format!(
            "heat coefficient order {} outside 1..={}",
            n, MAX_HEAT
        )));
    }
    let d = dim as i64;
    let gamma_top = gamma_half(2 * n as i64 + d).expect("positive argument");
    let mut total = JetPoly::zero(dim);
    for k in 0..n {
        let m = k + n; // number of operator applications
        let mut p = DisplacementPoly::y_sq_power(dim, k, 2 * m);
        for i in 1..=m {
            p = p.schrodinger_apply(2 * (m - i));
        }
        let diag = p.diagonal();
        if diag.is_zero() {
            continue;
        }
        let gamma_bot = gamma_half(2 * k as i64 + d + 2).expect("positive argument");
        let mut denom = BigRational::one();
        denom *= BigRational::from_integer(num::BigInt::from(4).pow(k));
        denom *= BigRational::from_integer(factorial(k));
        denom *= BigRational::from_integer(factorial(k + n));
        denom *= BigRational::from_integer(factorial(n - 1 - k));
        let scale = gamma_top
            .div(&gamma_bot)
            .scale(&(BigRational::one() / denom));
        total = total.add(&diag.scale(&scale));
    }
    let sign = if n % 2 == 0 {
        Coefficient::one()
    } else {
        Coefficient::from_int(-1)
    };
    Ok(total.scale(&sign))
}

/// Two-point recurrence table g_0..g_max: g_{n+1} is the sigma-weighted
/// integral of (Delta_y - v) g_n along the ray to the base point. Each entry
/// keeps exactly the y-degrees needed so the final diagonal is exact.
pub fn heat_recurrence_table(max_n: u32, dim: usize) -> Result<Vec<DisplacementPoly>> {
    check_dim(dim)?;
    let mut table = Vec::with_capacity(max_n as usize + 1);
    table.push(DisplacementPoly::one(dim, 2 * max_n));
    for n in 0..max_n {
        let cur = &table[n as usize];
        let bound = 2 * (max_n - n - 1);
        let next = cur.schrodinger_apply(bound).neg().sigma_integrate(n);
        table.push(next);
    }
    Ok(table)
}

/// Heat coefficient g_n via the recurrence route (diagonal value).
pub fn heat_invariant_recurrence(n: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    if n == 0 || n > MAX_HEAT {
        return Err(SsfError::Unsupported(format!(
            "heat coefficient order {} outside 1..={}",
            n, MAX_HEAT
        )));
    }
    let table = heat_recurrence_table(n, dim)?;
    Ok(table[n as usize].diagonal())
}

/// Phase-space constant: the integral over R^d of xi^(2 alpha)
/// (|xi|^2 + 1)^(-k), expressed through Gamma factors. Requires
/// k > |alpha| + d/2 for convergence.
pub fn c_alpha(alpha: &[u32], k: u32) -> Result<CoefficientValue> {
    let dim = alpha.len();
    check_dim(dim)?;
    let total = mi_total(alpha) as i64;
    let d = dim as i64;
    if 2 * (k as i64) <= 2 * total + d {
        return Err(SsfError::Domain(format!(
            "phase-space integral diverges: k = {} <= |alpha| + d/2 = {}/2",
            k,
            2 * total + d
        )));
    }
    let mut c = Coefficient::one();
    for &a in alpha {
        c = c.mul(&gamma_half(2 * a as i64 + 1).expect("no pole"));
    }
    let num = gamma_half(2 * k as i64 - 2 * total - d).expect("positive by check");
    let den = gamma_half(2 * k as i64).expect("positive");
    Ok(CoefficientValue::new(c.mul(&num).div(&den)))
}

/// Density of the n-th coefficient in the large-|z| expansion of
/// Tr(R^m - R_0^m): a phase-space weighted combination of symbol-polynomial
/// coefficients. Integrating it over R^d gives the expansion coefficient.
pub fn resolvent_coeff_density(n: u32, m: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    if n > MAX_RESOLVENT_N {
        return Err(SsfError::Unsupported(format!(
            "resolvent coefficient order {} exceeds cap {}",
            n, MAX_RESOLVENT_N
        )));
    }
    if m == 0 {
        return Err(SsfError::Domain("resolvent power m must be >= 1".into()));
    }
    if 2 * (m as i64 + 1) <= dim as i64 {
        return Err(SsfError::Domain(format!(
            "trace of R^{} - R_0^{} is not defined in dimension {}",
            m, m, dim
        )));
    }
    let table = xn_table_uncapped(2 * n + 1, dim);
    let mut total = JetPoly::zero(dim);
    for alpha in multi_indices(dim, n) {
        let a = mi_total(&alpha) as u32;
        let op_index = (n + a + 1) as usize;
        let two_alpha: MultiIndex = alpha.iter().map(|x| 2 * x).collect();
        let p = table[op_index].coeff(&two_alpha);
        if p.is_zero() {
            continue;
        }
        let c = c_alpha(&alpha, a + n + m + 1)?;
        let bin = binomial((a + n + m) as u64, (m - 1) as u64);
        let mut scale = c.symbolic.scale(&BigRational::from_integer(bin));
        if a % 2 == 1 {
            scale = scale.neg();
        }
        total = total.add(&p.scale(&scale));
    }
    // (2 pi)^{-d}
    let front = Coefficient::new(
        BigRational::new(1.into(), num::BigInt::from(2).pow(dim as u32)),
        -2 * dim as i32,
    );
    Ok(total.scale(&front))
}

/// Same density derived from the heat route:
/// (4 pi)^{-d/2} Gamma(n + m + 1 - d/2) / (m-1)! times g_{n+1}.
/// Exact agreement with `resolvent_coeff_density` ties the two expansions
/// together.
pub fn resolvent_coeff_density_via_heat(n: u32, m: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    if m == 0 {
        return Err(SsfError::Domain("resolvent power m must be >= 1".into()));
    }
    let g = heat_invariant_closed(n + 1, dim)?;
    let d = dim as i64;
    let gamma = gamma_half(2 * (n + m + 1) as i64 - d).expect("positive argument");
    let front = Coefficient::new(
        BigRational::new(
            1.into(),
            num::BigInt::from(2).pow(dim as u32) * factorial(m - 1),
        ),
        -(dim as i32),
    );
    Ok(g.scale(&front.mul(&gamma)))
}

/// Density of the n-th high-energy coefficient of the spectral shift
/// function: -(4 pi)^{-d/2} / Gamma(d/2 - n) times g_{n+1}. At the Gamma
/// poles (even d, n >= d/2) the coefficient vanishes identically and the
/// zero polynomial is returned.
pub fn ssf_coeff_density(n: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    let g = heat_invariant_closed(n + 1, dim)?;
    let d = dim as i64;
    match gamma_half(d - 2 * n as i64) {
        None => Ok(JetPoly::zero(dim)),
        Some(gamma) => {
            let front = Coefficient::new(
                BigRational::new((-1).into(), num::BigInt::from(2).pow(dim as u32)),
                -(dim as i32),
            );
            Ok(g.scale(&front.div(&gamma)))
        }
    }
}

/// Alternate route to the same density through the resolvent coefficients:
/// xi_n = -r_n^{(m)} / (m B(d/2 - n, m + n + 1 - d/2)), any admissible m.
pub fn ssf_coeff_density_via_resolvent(n: u32, m: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    let r = resolvent_coeff_density(n, m, dim)?;
    let d = dim as i64;
    match beta_half(d - 2 * n as i64, 2 * (m + n + 1) as i64 - d) {
        // Gamma pole in the Beta factor: the coefficient vanishes.
        None => Ok(JetPoly::zero(dim)),
        Some(b) => {
            let denom = b.scale(&BigRational::from_integer(num::BigInt::from(m)));
            Ok(r.scale(&Coefficient::from_int(-1).div(&denom)))
        }
    }
}

/// Density of the n-th coefficient in the high-energy expansion of the
/// logarithm of the relative determinant: -(4 pi)^{-d/2}
/// Gamma(n + 1 - d/2) g_{n+1}. Defined for n >= 1 in general; the n = 0
/// entry exists only for d = 1 (where it equals v/2).
pub fn pd_coeff_density(n: u32, dim: usize) -> Result<JetPoly> {
    check_dim(dim)?;
    if n == 0 && dim != 1 {
        return Err(SsfError::Unsupported(
            "zeroth determinant coefficient only defined in dimension 1".into(),
        ));
    }
    let d = dim as i64;
    let gamma = gamma_half(2 * (n + 1) as i64 - d).ok_or_else(|| {
        SsfError::Domain(format!(
            "determinant coefficient undefined at Gamma pole (n = {}, d = {})",
            n, dim
        ))
    })?;
    let g = heat_invariant_closed(n + 1, dim)?;
    let front = Coefficient::new(
        BigRational::new((-1).into(), num::BigInt::from(2).pow(dim as u32)),
        -(dim as i32),
    );
    Ok(g.scale(&front.mul(&gamma)))
}
