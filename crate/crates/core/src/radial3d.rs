//! Partial-wave scattering for radial potentials in three dimensions: phase
//! shifts on the branch that vanishes at high momentum, Born values for the
//! deep angular-momentum tail, the shift function as a partial-wave sum, its
//! volume-term regularization, radial bound states with multiplicities, and
//! a threshold report.

use crate::error::{Result, SsfError};
use crate::invariants::ssf_coeff_density;
use crate::ode::OdeOptions;
use crate::oracle::GridOracle;
use crate::potential::{integrate_density, Potential};
use crate::quadrature::{integrate_piecewise, integrate_to_inf};
use crate::scattering1d::{nearest_index, solve_split};
use crate::special::{riccati_bessel, spherical_j};
use std::f64::consts::PI;

/// Accuracy target for a single phase shift.
const PHASE_TOL: f64 = 1e-9;
/// Inner edge of the radial solves; the regular solution starts here from
/// its power series, with the constant factor r_inner^l divided out so the
/// state stays of order one for large angular momenta.
const R_INNER: f64 = 1e-3;
/// Hard cap on the matching radius.
const R_CAP: f64 = 60.0;
/// Solver budget per partial wave during branch continuation.
const MAX_BRANCH_NODES: usize = 400;
/// Length of the Born tail sum before giving up on convergence.
const MAX_BORN_TERMS: u32 = 300;

fn check_radial(p: &Potential, min_decay: f64) -> Result<()> {
    if p.dim() != 3 || !p.is_radial() {
        return Err(SsfError::Invalid(
            "partial-wave analysis needs a radial three-dimensional potential".into(),
        ));
    }
    if p.decay_rate() <= min_decay {
        return Err(SsfError::Domain(format!(
            "declared decay rate {} too slow here (need > {min_decay})",
            p.decay_rate()
        )));
    }
    Ok(())
}

fn vr(p: &Potential, r: f64) -> f64 {
    p.value(&[r, 0.0, 0.0])
}

/// Radius beyond which the potential tail shifts every phase by less than
/// 0.1 * tol at momenta >= k_min. Returns (radius, tail bound).
fn match_radius(p: &Potential, k_min: f64, tol: f64) -> Result<(f64, f64)> {
    let mut r = p.support_radius(1e-8).max(4.0).min(R_CAP);
    loop {
        let tail = integrate_to_inf(&mut |s| vr(p, s).abs(), r, 1e-14, 1e-10, 200);
        let bound = (tail.value + tail.abs_error) / k_min;
        if bound <= 0.1 * tol {
            return Ok((r, bound));
        }
        if r >= R_CAP {
            if bound <= 1e-5 {
                return Ok((r, bound));
            }
            return Err(SsfError::Accuracy {
                what: "phase-shift truncation at the radius cap".into(),
                achieved: bound,
                requested: 0.1 * tol,
            });
        }
        r = (r * 1.3).min(R_CAP);
    }
}

/// State of the regular solution at R_INNER for energy e, scaled by the
/// constant R_INNER^(-l): u(r) = r^(l+1) (1 + a r^2 + ...) near zero.
fn regular_start(p: &Potential, ell: u32, e: f64) -> [f64; 2] {
    let a2 = (vr(p, 0.0) - e) / (4 * ell + 6) as f64;
    let r = R_INNER;
    [
        r * (1.0 + a2 * r * r),
        (ell + 1) as f64 + (ell + 3) as f64 * a2 * r * r,
    ]
}

/// Regular solution integrated out to r_to; the returned state is a common
/// (positive) multiple of (u, u') there.
fn regular_state(p: &Potential, ell: u32, e: f64, r_to: f64) -> Result<[f64; 2]> {
    let opts = OdeOptions {
        rtol: 1e-11,
        atol: 1e-14,
        rescale_linear: true,
        ..OdeOptions::default()
    };
    let cf = (ell * (ell + 1)) as f64;
    let mut rhs = |r: f64, y: &[f64; 2]| [y[1], (cf / (r * r) + vr(p, r) - e) * y[0]];
    let (y, _) = solve_split(p, &mut rhs, R_INNER, r_to, regular_start(p, ell, e), &opts)?;
    if !(y[0].is_finite() && y[1].is_finite()) {
        return Err(SsfError::Accuracy {
            what: format!("radial solve for l = {ell}"),
            achieved: f64::INFINITY,
            requested: PHASE_TOL,
        });
    }
    Ok(y)
}

fn fold_pi(x: f64) -> f64 {
    x - PI * (x / PI).round()
}

/// Phase shift folded into (-pi/2, pi/2], from matching the regular solution
/// to the free pair S_l, C_l at r_match.
fn principal_phase(p: &Potential, ell: u32, k: f64, r_match: f64) -> Result<f64> {
    let y = regular_state(p, ell, k * k, r_match)?;
    let l = ell as usize;
    let (s, sp, c, cp) = riccati_bessel(l, k * r_match);
    // tan(delta) = (u' S - k S' u) / (k C' u - u' C); no division so a node
    // of u at the matching radius is harmless
    let num = y[1] * s[l] - k * sp[l] * y[0];
    let den = k * cp[l] * y[0] - y[1] * c[l];
    Ok(fold_pi(num.atan2(den)))
}

/// Momentum above which the phase of every partial wave is well inside
/// (-pi/2, pi/2), so the principal value is the continued one.
fn anchor_momentum(p: &Potential, k_max: f64) -> f64 {
    let vol = integrate_to_inf(&mut |r| vr(p, r).abs(), 0.0, 1e-12, 1e-9, 200).value;
    let vmax = [0.0, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&r| vr(p, r).abs())
        .fold(0.0, f64::max);
    (4.0 * vol).max(2.0 * vmax.sqrt()).max(2.0 * k_max).max(10.0)
}

/// Phase shifts of one partial wave at the given momenta, on the branch
/// continued down from the high-momentum anchor where the phase vanishes.
pub fn phase_shifts_on_grid(p: &Potential, ell: u32, ks: &[f64]) -> Result<Vec<f64>> {
    check_radial(p, 2.0)?;
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    if ks.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
        return Err(SsfError::Domain("momenta must be positive".into()));
    }
    let mut targets = ks.to_vec();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    targets.dedup();
    let k_min = targets[0];
    let k_max = *targets.last().unwrap();
    let (r_match, _) = match_radius(p, k_min, PHASE_TOL)?;

    let mut k_top = anchor_momentum(p, k_max);
    let mut d_top = 0.0;
    let mut anchored = false;
    for _ in 0..4 {
        d_top = principal_phase(p, ell, k_top, r_match)?;
        if d_top.abs() < 0.45 * PI {
            anchored = true;
            break;
        }
        k_top *= 2.0;
    }
    if !anchored {
        return Err(SsfError::Accuracy {
            what: "high-momentum phase anchor".into(),
            achieved: d_top.abs(),
            requested: 0.45 * PI,
        });
    }

    // walk down from the anchor; geometric ladder plus the requested nodes,
    // bisecting in log k whenever the phase moves by close to half a turn
    let mut stack = targets.clone();
    let mut k = k_top * 0.75;
    while k > k_min {
        stack.push(k);
        k *= 0.75;
    }
    stack.sort_by(|a, b| a.partial_cmp(b).unwrap());
    stack.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + *b));

    let mut prev_k = k_top;
    let mut prev = d_top;
    let mut visited: Vec<(f64, f64)> = Vec::new();
    let mut spent = 0usize;
    while let Some(&next) = stack.last() {
        spent += 1;
        if spent > MAX_BRANCH_NODES {
            return Err(SsfError::Budget(format!(
                "phase continuation for l = {ell} exceeded {MAX_BRANCH_NODES} nodes"
            )));
        }
        let d0 = principal_phase(p, ell, next, r_match)?;
        let cand = d0 + PI * ((prev - d0) / PI).round();
        if (cand - prev).abs() >= 0.45 * PI && prev_k / next > 1.0 + 1e-9 {
            stack.push((prev_k * next).sqrt());
            continue;
        }
        stack.pop();
        prev_k = next;
        prev = cand;
        visited.push((next, cand));
    }

    visited.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let grid: Vec<f64> = visited.iter().map(|v| v.0).collect();
    let mut out = Vec::with_capacity(ks.len());
    for &want in ks {
        let j = nearest_index(&grid, want);
        debug_assert!((grid[j] - want).abs() <= 1e-11 * (1.0 + want));
        out.push(visited[j].1);
    }
    Ok(out)
}

/// Continued phase shift of one partial wave at one momentum.
pub fn phase_shift(p: &Potential, ell: u32, k: f64) -> Result<f64> {
    Ok(phase_shifts_on_grid(p, ell, &[k])?[0])
}

/// First-order (Born) phase shift, -k * integral of v(r) j_l(kr)^2 r^2.
pub fn born_phase(p: &Potential, ell: u32, k: f64) -> Result<f64> {
    check_radial(p, 2.0)?;
    if !(k > 0.0) {
        return Err(SsfError::Domain("momentum must be positive".into()));
    }
    let (r_max, _) = match_radius(p, k, PHASE_TOL)?;
    let l = ell as usize;
    let breaks = p.breakpoints();
    let mut f = |r: f64| {
        let j = spherical_j(l, k * r)[l];
        vr(p, r) * j * j * r * r
    };
    let q = integrate_piecewise(&mut f, 0.0, r_max, &breaks, 1e-13, 1e-10, 400);
    Ok(-k * q.value)
}

/// Born value of the partial-wave sum over l >= l_start, with its absolute
/// counterpart as an error gauge; terms die off fast once l exceeds k times
/// the potential radius.
pub(crate) fn born_tail(p: &Potential, k: f64, l_start: u32) -> Result<(f64, f64)> {
    let mut signed = 0.0;
    let mut total_abs = 0.0;
    let mut quiet = 0u32;
    for l in l_start.. {
        if l - l_start > MAX_BORN_TERMS {
            return Err(SsfError::Budget(
                "Born tail of the partial-wave sum did not converge".into(),
            ));
        }
        let term = (2 * l + 1) as f64 * born_phase(p, l, k)?;
        signed += term;
        total_abs += term.abs();
        if term.abs() < 1e-14 * (1.0 + signed.abs()) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok((signed, total_abs))
}

fn l_cap(p: &Potential, k: f64) -> u32 {
    let r_eff = p.support_radius(1e-8).max(1.0);
    (k * r_eff).ceil() as u32 + 8
}

/// Shift function at one energy with an explicit partial-wave cutoff;
/// returns (value, tail error). Raising the cutoff moves terms from the
/// Born tail into the exact sum, so the value changes by at most the tail
/// error.
pub fn xi_with_l_max(p: &Potential, lam: f64, l_max: u32) -> Result<(f64, f64)> {
    check_radial(p, 3.0)?;
    if !(lam > 0.0) {
        return Err(SsfError::Domain(
            "the partial-wave sum lives on the positive half-axis".into(),
        ));
    }
    let k = lam.sqrt();
    let mut sum = 0.0;
    for l in 0..=l_max {
        sum += (2 * l + 1) as f64 * phase_shift(p, l, k)?;
    }
    let (signed, abs) = born_tail(p, k, l_max + 1)?;
    let phase_noise = ((l_max + 1) as f64).powi(2) * PHASE_TOL;
    Ok((-(sum + signed) / PI, (abs + phase_noise) / PI))
}

/// Shift function on the positive half-axis as a partial-wave sum, together
/// with the negative spectrum (eigenvalues listed with multiplicity 2l+1).
#[derive(Debug, Clone)]
pub struct RadialShiftCurve {
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
    /// Partial-wave cutoff used at each node.
    pub l_max: Vec<u32>,
    /// Bound on what the Born tail and phase noise can hide at each node.
    pub tail_error: Vec<f64>,
    pub negative_part: Vec<f64>,
}

impl RadialShiftCurve {
    /// Value at an existing node (1e-9 relative match required).
    pub fn at(&self, lam: f64) -> Result<f64> {
        let j = nearest_index(&self.lambda, lam);
        if (self.lambda[j] - lam).abs() > 1e-9 * (1.0 + lam.abs()) {
            return Err(SsfError::Invalid(format!(
                "lambda = {lam} is not a node of the curve"
            )));
        }
        Ok(self.xi[j])
    }

    /// Step value on the negative half-axis: minus the number of
    /// eigenvalues (counted with multiplicity) at or below `lam`.
    pub fn step_value(&self, lam: f64) -> f64 {
        -(self.negative_part.partition_point(|&e| e <= lam) as f64)
    }
}

pub fn ssf_3d(p: &Potential, lambda_grid: &[f64]) -> Result<RadialShiftCurve> {
    check_radial(p, 3.0)?;
    if lambda_grid.is_empty() {
        return Err(SsfError::Invalid("empty energy grid".into()));
    }
    if lambda_grid.windows(2).any(|w| w[1] <= w[0]) || !(lambda_grid[0] > 0.0) {
        return Err(SsfError::Invalid(
            "energy grid must be positive and strictly increasing".into(),
        ));
    }
    let n = lambda_grid.len();
    let ks: Vec<f64> = lambda_grid.iter().map(|l| l.sqrt()).collect();
    let caps: Vec<u32> = ks.iter().map(|&k| l_cap(p, k)).collect();
    let l_top = *caps.iter().max().unwrap();

    let mut sums = vec![0.0; n];
    for l in 0..=l_top {
        let idx: Vec<usize> = (0..n).filter(|&i| caps[i] >= l).collect();
        let sub: Vec<f64> = idx.iter().map(|&i| ks[i]).collect();
        let phases = phase_shifts_on_grid(p, l, &sub)?;
        for (j, &i) in idx.iter().enumerate() {
            sums[i] += (2 * l + 1) as f64 * phases[j];
        }
    }

    let mut xi = Vec::with_capacity(n);
    let mut tails = Vec::with_capacity(n);
    for i in 0..n {
        let (signed, abs) = born_tail(p, ks[i], caps[i] + 1)?;
        xi.push(-(sums[i] + signed) / PI);
        let phase_noise = ((caps[i] + 1) as f64).powi(2) * PHASE_TOL;
        tails.push((abs + phase_noise) / PI);
    }

    Ok(RadialShiftCurve {
        lambda: lambda_grid.to_vec(),
        xi,
        l_max: caps,
        tail_error: tails,
        negative_part: bound_states_3d(p)?,
    })
}

/// Shift function with the volume (Weyl) term removed; what is left decays
/// at high energy, which makes the trace integrals converge.
pub fn regularized_ssf_3d(p: &Potential, lam: f64) -> Result<f64> {
    let k = lam.sqrt();
    let (xi, _) = xi_with_l_max(p, lam, l_cap(p, k))?;
    let c0 = integrate_density(p, &ssf_coeff_density(0, 3)?, 1e-11)?.value;
    Ok(xi - c0 * k)
}

/// Volume-term subtraction applied to a whole curve.
pub fn regularized_values(p: &Potential, curve: &RadialShiftCurve) -> Result<Vec<f64>> {
    check_radial(p, 3.0)?;
    let c0 = integrate_density(p, &ssf_coeff_density(0, 3)?, 1e-11)?.value;
    Ok(curve
        .lambda
        .iter()
        .zip(&curve.xi)
        .map(|(l, x)| x - c0 * l.sqrt())
        .collect())
}

/// Sign of the matching mismatch between the regular solution and the
/// decaying one at energy e < 0, normalized so it is continuous in e.
fn radial_wronskian(p: &Potential, ell: u32, e: f64) -> Result<f64> {
    let kappa = (-e).sqrt();
    let r_mid = (0.5 * p.support_radius(1e-4)).clamp(1.0, 8.0);
    let r_out = (p.support_radius(1e-12) + 8.0 / kappa.max(0.3)).clamp(15.0, 120.0);
    let yl = regular_state(p, ell, e, r_mid)?;
    let opts = OdeOptions {
        rtol: 1e-12,
        atol: 1e-14,
        rescale_linear: true,
        ..OdeOptions::default()
    };
    let cf = (ell * (ell + 1)) as f64;
    let mut rhs = |r: f64, y: &[f64; 2]| [y[1], (cf / (r * r) + vr(p, r) - e) * y[0]];
    let (yr, _) = solve_split(p, &mut rhs, r_out, r_mid, [1.0, -kappa], &opts)?;
    let nl = yl[0].hypot(yl[1]).max(f64::MIN_POSITIVE);
    let nr = yr[0].hypot(yr[1]).max(f64::MIN_POSITIVE);
    Ok((yl[0] * yr[1] - yl[1] * yr[0]) / (nl * nr))
}

/// Negative levels of one angular-momentum channel, refined by two-sided
/// shooting from grid-operator seeds.
pub fn radial_bound_states(p: &Potential, ell: u32) -> Result<Vec<f64>> {
    check_radial(p, 2.0)?;
    let oracle = GridOracle::build_radial(p, ell, 20.0, 0.01)?;
    let seeds = oracle.negative_eigenvalues();
    let mut out = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let mut width = 0.04 * (1.0 + seed.abs());
        let mut bracket = None;
        for _ in 0..4 {
            let lo = seed - width;
            let hi = (seed + width).min(-1e-9);
            let wlo = radial_wronskian(p, ell, lo)?;
            let whi = radial_wronskian(p, ell, hi)?;
            if wlo == 0.0 {
                bracket = Some((lo, lo));
                break;
            }
            if whi == 0.0 {
                bracket = Some((hi, hi));
                break;
            }
            if wlo.signum() != whi.signum() {
                bracket = Some((lo, hi));
                break;
            }
            width *= 3.0;
        }
        let Some((mut lo, mut hi)) = bracket else {
            if seed.abs() < 5e-3 {
                // a grid level this close to the edge of the continuum can
                // be a discretization artifact; the shooting test is the
                // arbiter
                continue;
            }
            return Err(SsfError::Budget(format!(
                "no shooting sign change near the grid level {seed:.6}"
            )));
        };
        if lo < hi {
            let mut wlo = radial_wronskian(p, ell, lo)?;
            while hi - lo > 1e-12 * (1.0 + lo.abs()) {
                let mid = 0.5 * (lo + hi);
                let wm = radial_wronskian(p, ell, mid)?;
                if wm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if wm.signum() == wlo.signum() {
                    lo = mid;
                    wlo = wm;
                } else {
                    hi = mid;
                }
            }
        }
        let e = 0.5 * (lo + hi);
        if e < -1e-9 {
            out.push(e);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in out.windows(2) {
        if pair[1] - pair[0] < 1e-8 {
            return Err(SsfError::Accuracy {
                what: "separation of refined radial levels".into(),
                achieved: pair[1] - pair[0],
                requested: 1e-8,
            });
        }
    }
    Ok(out)
}

/// Entire negative spectrum, each radial level repeated 2l+1 times. The
/// channel scan stops at the first empty one, since the effective potential
/// grows with l.
pub fn bound_states_3d(p: &Potential) -> Result<Vec<f64>> {
    check_radial(p, 2.0)?;
    let mut all = Vec::new();
    for ell in 0..=80u32 {
        let levels = radial_bound_states(p, ell)?;
        if levels.is_empty() {
            all.sort_by(|a: &f64, b| a.partial_cmp(b).unwrap());
            return Ok(all);
        }
        for e in levels {
            for _ in 0..(2 * ell + 1) {
                all.push(e);
            }
        }
    }
    Err(SsfError::Budget(
        "angular-momentum scan for bound states exceeded l = 80".into(),
    ))
}

/// Behaviour of the shift function at the bottom of the continuous
/// spectrum, with the level count it should match.
#[derive(Debug, Clone)]
pub struct RadialThresholdReport {
    /// Richardson value of xi at 0+ from three small energies.
    pub xi_zero_plus: f64,
    pub extrapolation_error: f64,
    /// Negative eigenvalues counted with multiplicity.
    pub bound_count: usize,
    /// Set when the s-wave scattering length is resolvably divergent; the
    /// integer step rule then does not apply.
    pub resonant: bool,
    /// |xi(0+) + N|
    pub integer_defect: f64,
    /// |xi(0+) + N + 1/2|
    pub half_defect: f64,
}

pub fn levinson_check_3d(p: &Potential) -> Result<RadialThresholdReport> {
    check_radial(p, 3.0)?;
    // the s-wave tangent over k settles to a constant (minus the scattering
    // length) at small k, unless a zero-energy resonance makes it blow up
    // like 1/k^2
    let (r_match, _) = match_radius(p, 0.02, PHASE_TOL)?;
    let t1 = principal_phase(p, 0, 0.02, r_match)?.tan() / 0.02;
    let t2 = principal_phase(p, 0, 0.04, r_match)?.tan() / 0.04;
    let resonant = t1.abs() > 1e-6 && t2.abs() > 1e-6 && (t1 / t2).abs() > 2.5;

    let lams = [0.0025, 0.01, 0.04];
    let curve = ssf_3d(p, &lams)?;
    // halving steps in momentum: eliminate the linear and quadratic parts
    let (v1, v2, v3) = (curve.xi[2], curve.xi[1], curve.xi[0]);
    let r12 = 2.0 * v2 - v1;
    let r23 = 2.0 * v3 - v2;
    let xi0 = (4.0 * r23 - r12) / 3.0;
    let n = curve.negative_part.len();
    Ok(RadialThresholdReport {
        xi_zero_plus: xi0,
        extrapolation_error: (xi0 - r23).abs().max(1e-12),
        bound_count: n,
        resonant,
        integer_defect: (xi0 + n as f64).abs(),
        half_defect: (xi0 + n as f64 + 0.5).abs(),
    })
}
