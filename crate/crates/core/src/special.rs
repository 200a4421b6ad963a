//! Riccati-Bessel functions S_l(x) = x j_l(x) and C_l(x) = -x y_l(x) with
//! derivatives, stable for orders well above and below the turning point
//! (downward Miller recurrence for the regular family, upward for the
//! irregular one).

/// Values and derivatives of the Riccati-Bessel pair for l = 0..=l_max at
/// x > 0. Returns (s, s', c, c'); the Wronskian s c' - s' c is -1.
pub fn riccati_bessel(l_max: usize, x: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    assert!(x > 0.0, "riccati_bessel needs x > 0");
    let n = l_max + 1;
    let mut s = vec![0.0; n];
    let mut sp = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut cp = vec![0.0; n];

    // Irregular family: upward recurrence is stable.
    c[0] = x.cos();
    if n > 1 {
        c[1] = x.cos() / x + x.sin();
    }
    for l in 1..l_max {
        c[l + 1] = (2 * l + 1) as f64 / x * c[l] - c[l - 1];
    }
    cp[0] = -x.sin();
    for l in 1..n {
        cp[l] = c[l - 1] - (l as f64 / x) * c[l];
    }

    // Regular family: downward Miller recurrence from a padded start order,
    // normalized by S_0 = sin x (or S_1 when sin x is tiny).
    // the downward run must begin above the turning point l ~ x, deep
    // enough into the decaying zone to flush the irregular admixture
    let start = l_max.max(x.ceil() as usize) + 16 + (12.0 * x.cbrt()) as usize;
    let mut fp = 0.0_f64; // S_{l+1} (unnormalized)
    let mut fc = 1e-280_f64; // S_l
    let mut raw = vec![0.0; n];
    for l in (0..=start).rev() {
        let fm = (2 * l + 3) as f64 / x * fc - fp;
        fp = fc;
        fc = fm;
        if l < n {
            raw[l] = fc;
        }
        // keep magnitudes in range
        if fc.abs() > 1e250 {
            fp /= 1e250;
            fc /= 1e250;
            for r in raw.iter_mut() {
                *r /= 1e250;
            }
        }
    }
    let s0 = x.sin();
    let norm = if s0.abs() > 1e-3 {
        s0 / raw[0]
    } else {
        let s1 = x.sin() / x - x.cos();
        if n > 1 && raw[1].abs() > 0.0 {
            s1 / raw[1]
        } else {
            s0 / raw[0]
        }
    };
    for l in 0..n {
        s[l] = raw[l] * norm;
    }
    sp[0] = x.cos();
    for l in 1..n {
        sp[l] = s[l - 1] - (l as f64 / x) * s[l];
    }
    (s, sp, c, cp)
}

/// Spherical Bessel j_l(x) for l = 0..=l_max, x >= 0, including tiny x.
pub fn spherical_j(l_max: usize, x: f64) -> Vec<f64> {
    if x < 1e-6 {
        // series: j_l(x) ~ x^l / (2l+1)!! (1 - x^2/(2(2l+3)))
        let mut out = Vec::with_capacity(l_max + 1);
        let mut dfact = 1.0; // (2l+1)!!
        let mut xl = 1.0;
        for l in 0..=l_max {
            if l > 0 {
                dfact *= (2 * l + 1) as f64;
                xl *= x;
            }
            out.push(xl / dfact * (1.0 - x * x / (2.0 * (2 * l + 3) as f64)));
        }
        return out;
    }
    let (s, _, _, _) = riccati_bessel(l_max, x);
    s.iter().map(|v| v / x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        let x = 1.3_f64;
        let (s, sp, c, cp) = riccati_bessel(2, x);
        assert!((s[0] - x.sin()).abs() < 1e-14);
        assert!((sp[0] - x.cos()).abs() < 1e-14);
        assert!((c[0] - x.cos()).abs() < 1e-14);
        assert!((cp[0] + x.sin()).abs() < 1e-14);
        // S_1 = sin x / x - cos x
        assert!((s[1] - (x.sin() / x - x.cos())).abs() < 1e-13);
        // C_1 = cos x / x + sin x
        assert!((c[1] - (x.cos() / x + x.sin())).abs() < 1e-13);
    }

    #[test]
    fn wronskian_identity() {
        for &x in &[0.05_f64, 0.4, 2.0, 17.3, 80.0] {
            let lmax = 40;
            let (s, sp, c, cp) = riccati_bessel(lmax, x);
            for l in 0..=lmax {
                let w = s[l] * cp[l] - sp[l] * c[l];
                assert!(
                    (w + 1.0).abs() < 1e-9,
                    "wronskian {} at l = {}, x = {}",
                    w,
                    l,
                    x
                );
            }
        }
    }

    #[test]
    fn deep_sub_turning_point_values() {
        // j_8(0.4) ~ 2e-11; relative accuracy must hold this far below the
        // turning point.
        let j = spherical_j(8, 0.4);
        // reference from the series: j_l ~ x^l/(2l+1)!! (1 - x^2/(2(2l+3)) + x^4/(8(2l+3)(2l+5)))
        let x: f64 = 0.4;
        let dfact17 = 34459425.0; // 17!!
        let approx = x.powi(8) / dfact17
            * (1.0 - x * x / (2.0 * 19.0) + x.powi(4) / (8.0 * 19.0 * 21.0));
        assert!(
            (j[8] - approx).abs() < 1e-6 * approx.abs(),
            "j8 {} vs {}",
            j[8],
            approx
        );
    }

    #[test]
    fn tiny_argument_series() {
        let j = spherical_j(3, 1e-8);
        assert!((j[0] - 1.0).abs() < 1e-12);
        assert!((j[1] - 1e-8 / 3.0).abs() < 1e-20);
    }

    #[test]
    fn large_order_no_overflow() {
        let (s, _, c, _) = riccati_bessel(150, 30.0);
        assert!(s.iter().all(|v| v.is_finite()));
        assert!(c.iter().all(|v| v.is_finite()));
    }
}
