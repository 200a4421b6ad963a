//! Finite-difference grid oracle: an independent, brute-force route to
//! spectral quantities. H and H0 are discretized as Dirichlet tridiagonal
//! matrices on a box (d = 1) or a half-line per angular momentum (d = 3
//! radial); everything downstream (trace differences, counting functions,
//! determinant ratios) reduces to the two eigenvalue lists.

use crate::error::{Result, SsfError};
use crate::potential::Potential;
use num::complex::Complex64;

pub const MAX_GRID_DIM: usize = 4000;

#[derive(Debug, Clone)]
pub struct GridOracle {
    pub half_width: f64,
    pub mesh: f64,
    pub ell: Option<u32>,
    diag_pert: Vec<f64>,
    eig_pert: Vec<f64>,
    eig_free: Vec<f64>,
}

impl GridOracle {
    /// Dirichlet box [-L, L] for a one-dimensional potential.
    pub fn build_1d(p: &Potential, half_width: f64, mesh: f64) -> Result<GridOracle> {
        if p.dim() != 1 {
            return Err(SsfError::Invalid("1-d oracle needs a 1-d potential".into()));
        }
        check_grid(half_width, mesh)?;
        let n = (2.0 * half_width / mesh).round() as usize - 1;
        if n == 0 || n > MAX_GRID_DIM {
            return Err(SsfError::Budget(format!(
                "grid dimension {} outside 1..={}",
                n, MAX_GRID_DIM
            )));
        }
        let h2 = mesh * mesh;
        let mut diag_pert = Vec::with_capacity(n);
        for i in 1..=n {
            let x = -half_width + i as f64 * mesh;
            diag_pert.push(2.0 / h2 + p.value(&[x]));
        }
        // free Dirichlet eigenvalues are known in closed form
        let eig_free = (1..=n)
            .map(|j| (2.0 - 2.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos()) / h2)
            .collect();
        let mut eig_pert = tridiag_eigenvalues(&diag_pert, -1.0 / h2);
        eig_pert.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(GridOracle {
            half_width,
            mesh,
            ell: None,
            diag_pert,
            eig_pert,
            eig_free,
        })
    }

    /// Half-line (0, L] Dirichlet grid for angular momentum `ell` of a
    /// radial three-dimensional potential; the centrifugal term is part of
    /// both operators.
    pub fn build_radial(p: &Potential, ell: u32, length: f64, mesh: f64) -> Result<GridOracle> {
        if p.dim() != 3 || !p.is_radial() {
            return Err(SsfError::Invalid(
                "radial oracle needs a radial 3-d potential".into(),
            ));
        }
        check_grid(length, mesh)?;
        let n = (length / mesh).round() as usize - 1;
        if n == 0 || n > MAX_GRID_DIM {
            return Err(SsfError::Budget(format!(
                "grid dimension {} outside 1..={}",
                n, MAX_GRID_DIM
            )));
        }
        let h2 = mesh * mesh;
        let cf = (ell * (ell + 1)) as f64;
        let mut diag_pert = Vec::with_capacity(n);
        let mut diag_free = Vec::with_capacity(n);
        for i in 1..=n {
            let r = i as f64 * mesh;
            let base = 2.0 / h2 + cf / (r * r);
            diag_free.push(base);
            diag_pert.push(base + p.value(&[r, 0.0, 0.0]));
        }
        let mut eig_pert = tridiag_eigenvalues(&diag_pert, -1.0 / h2);
        eig_pert.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut eig_free = tridiag_eigenvalues(&diag_free, -1.0 / h2);
        eig_free.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(GridOracle {
            half_width: length,
            mesh,
            ell: Some(ell),
            diag_pert,
            eig_pert,
            eig_free,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag_pert.len()
    }

    pub fn eigenvalues_perturbed(&self) -> &[f64] {
        &self.eig_pert
    }

    pub fn eigenvalues_free(&self) -> &[f64] {
        &self.eig_free
    }

    /// Negative eigenvalues of the discretized perturbed operator.
    pub fn negative_eigenvalues(&self) -> Vec<f64> {
        self.eig_pert
            .iter()
            .copied()
            .take_while(|&e| e < 0.0)
            .collect()
    }

    /// (#free eigenvalues <= lam, #perturbed eigenvalues <= lam).
    pub fn count_below(&self, lam: f64) -> (usize, usize) {
        let free = self.eig_free.partition_point(|&e| e <= lam);
        let pert = self.eig_pert.partition_point(|&e| e <= lam);
        (free, pert)
    }

    /// Window-averaged counting estimate of the spectral shift at `lam`:
    /// the integer difference #{H0 <= mu} - #{H <= mu} averaged over
    /// mu in [lam - half_window, lam + half_window], which smears the
    /// box-quantization staircase.
    pub fn counting_estimate(&self, lam: f64, half_window: f64) -> f64 {
        let samples = 201;
        let mut acc = 0.0;
        for i in 0..samples {
            let mu = lam - half_window + 2.0 * half_window * i as f64 / (samples - 1) as f64;
            let (free, pert) = self.count_below(mu);
            acc += free as f64 - pert as f64;
        }
        acc / samples as f64
    }

    /// Sum over the discrete spectra of f(H) - f(H0).
    pub fn trace_diff(&self, f: &dyn Fn(f64) -> f64) -> f64 {
        // interleave the two sorted lists pairwise to keep cancellation mild
        let mut total = 0.0;
        for (ev, e0) in self.eig_pert.iter().zip(&self.eig_free) {
            total += f(*ev) - f(*e0);
        }
        total
    }

    pub fn heat_trace_diff(&self, t: f64) -> f64 {
        self.trace_diff(&|e| (-t * e).exp())
    }

    /// Tr((H - z)^{-m} - (H0 - z)^{-m}) on the grid.
    pub fn resolvent_trace_diff(&self, z: Complex64, m: u32) -> Result<Complex64> {
        let dist = self
            .eig_pert
            .iter()
            .chain(&self.eig_free)
            .map(|&e| (Complex64::new(e, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min);
        if dist < 1e-6 {
            return Err(SsfError::Domain(format!(
                "z = {} within 1e-6 of the grid spectrum",
                z
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (ev, e0) in self.eig_pert.iter().zip(&self.eig_free) {
            total += (Complex64::new(*ev, 0.0) - z).powi(-(m as i32))
                - (Complex64::new(*e0, 0.0) - z).powi(-(m as i32));
        }
        Ok(total)
    }

    /// log of det(H - z)/det(H0 - z) on the grid, summed pairwise so the
    /// branch is stable.
    pub fn log_det_ratio(&self, z: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (ev, e0) in self.eig_pert.iter().zip(&self.eig_free) {
            total += (Complex64::new(*ev, 0.0) - z).ln() - (Complex64::new(*e0, 0.0) - z).ln();
        }
        total
    }

    pub fn det_ratio(&self, z: Complex64) -> Complex64 {
        self.log_det_ratio(z).exp()
    }
}

fn check_grid(extent: f64, mesh: f64) -> Result<()> {
    if extent <= 0.0 || mesh <= 0.0 || mesh >= extent {
        return Err(SsfError::Invalid(format!(
            "bad grid geometry: extent {}, mesh {}",
            extent, mesh
        )));
    }
    Ok(())
}

/// All eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and constant off-diagonal, by the implicit QL method.
pub fn tridiag_eigenvalues(diag: &[f64], off: f64) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    if n <= 1 {
        return d;
    }
    let mut e = vec![off; n];
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        'ql: loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 100, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    continue 'ql;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{Potential, PotentialSpec};

    fn pt(n: u32) -> Potential {
        Potential::build(PotentialSpec::poschl_teller(n)).unwrap()
    }

    #[test]
    fn ql_small_matrix() {
        // [[2,-1],[-1,2]] has eigenvalues 1 and 3
        let mut e = tridiag_eigenvalues(&[2.0, 2.0], -1.0);
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        // Toeplitz closed form for n=5: 2 - 2 cos(k pi / 6)
        let mut e5 = tridiag_eigenvalues(&[2.0; 5], -1.0);
        e5.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (idx, ev) in e5.iter().enumerate() {
            let want = 2.0 - 2.0 * ((idx + 1) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((ev - want).abs() < 1e-12);
        }
    }

    #[test]
    fn free_box_levels() {
        let p = pt(1);
        let g = GridOracle::build_1d(&p, 10.0, 0.01).unwrap();
        // lowest free continuum level of the box: (pi / 20)^2, up to O(h^2)
        let want = (std::f64::consts::PI / 20.0).powi(2);
        assert!(
            (g.eigenvalues_free()[0] - want).abs() < 1e-4,
            "{} vs {}",
            g.eigenvalues_free()[0],
            want
        );
    }

    #[test]
    fn reflectionless_ground_state() {
        let p = pt(1);
        let g = GridOracle::build_1d(&p, 15.0, 0.01).unwrap();
        let neg = g.negative_eigenvalues();
        assert_eq!(neg.len(), 1);
        assert!((neg[0] + 1.0).abs() < 1e-3, "ground state {}", neg[0]);
        let g2 = GridOracle::build_1d(&pt(2), 15.0, 0.01).unwrap();
        let neg2 = g2.negative_eigenvalues();
        assert_eq!(neg2.len(), 2);
        assert!((neg2[0] + 4.0).abs() < 2e-3);
        assert!((neg2[1] + 1.0).abs() < 2e-3);
    }

    #[test]
    fn counting_estimate_tracks_ssf() {
        // xi(1) = -1/2 for the n=1 reflectionless well
        let p = pt(1);
        let g = GridOracle::build_1d(&p, 40.0, 0.02).unwrap();
        let est = g.counting_estimate(1.0, 0.5);
        assert!((est + 0.5).abs() < 0.1, "counting estimate {}", est);
    }

    #[test]
    fn determinant_ratio_matches_closed_form() {
        // D(z) = (sqrt(-z) - 1)/(sqrt(-z) + 1) for the n=1 well; z = -2
        let p = pt(1);
        let g = GridOracle::build_1d(&p, 20.0, 0.01).unwrap();
        let d = g.det_ratio(Complex64::new(-2.0, 0.0));
        let kappa = 2.0_f64.sqrt();
        let want = (kappa - 1.0) / (kappa + 1.0);
        assert!(
            (d.re - want).abs() < 2e-3 && d.im.abs() < 1e-10,
            "det ratio {} vs {}",
            d,
            want
        );
    }

    #[test]
    fn determinant_log_derivative_is_resolvent_trace() {
        // d/dz log det ratio = Tr(R0 - R) on the same grid
        let p = pt(1);
        let g = GridOracle::build_1d(&p, 12.0, 0.02).unwrap();
        let z = Complex64::new(1.0, 1.0);
        let h = Complex64::new(1e-4, 0.0);
        let dntl = (g.log_det_ratio(z + h) - g.log_det_ratio(z - h)) / (2.0 * h);
        let tr = g.resolvent_trace_diff(z, 1).unwrap();
        assert!((dntl + tr).norm() < 1e-6, "{} vs {}", dntl, -tr);
    }

    #[test]
    fn radial_grid_free_levels() {
        let p = Potential::build(PotentialSpec::gaussian_well(3, 4.0, 1.0)).unwrap();
        let g = GridOracle::build_radial(&p, 0, 20.0, 0.01).unwrap();
        // s-wave free half-line levels: (pi j / 20)^2
        let want = (std::f64::consts::PI / 20.0).powi(2);
        assert!((g.eigenvalues_free()[0] - want).abs() < 1e-4);
        // the well binds at least one s-state at this depth
        assert!(!g.negative_eigenvalues().is_empty());
    }

    #[test]
    fn grid_cap_enforced() {
        let p = pt(1);
        assert!(matches!(
            GridOracle::build_1d(&p, 50.0, 0.01),
            Err(SsfError::Budget(_))
        ));
        assert!(GridOracle::build_1d(&p, 10.0, -0.1).is_err());
    }
}
