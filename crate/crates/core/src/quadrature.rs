//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-14, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Panel { a, b, value: kron * half, error: ((kron - gauss) * half).abs() })
}

/// `∫_a^b f`, refining the panel with the largest error estimate until the
/// total estimate meets `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Like [`integrate`] over `[breaks[0], breaks[last]]`, with mandatory panel
/// boundaries at every break point (kinks of the integrand).
pub fn integrate_with_breaks<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<f64> {
    let mut panels = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod(&mut f, w[0], w[1])?);
        }
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !(total.is_finite() && error.is_finite()) {
            return Err(Error::QuadratureFailure { estimate: error });
        }
        if error <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty when error is positive");
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if panels.len() >= opts.max_intervals || mid <= a || mid >= b {
            return Err(Error::QuadratureFailure { estimate: error });
        }
        panels[worst] = kronrod(&mut f, a, mid)?;
        panels.push(kronrod(&mut f, mid, b)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| Ok(x.powi(5) - 3.0 * x * x), 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_transcendental() {
        let v = integrate(|x| Ok(x.exp() * x.sin()), 0.0, 3.0, &QuadOptions::default()).unwrap();
        let exact = 0.5 * (3.0f64.exp() * (3.0f64.sin() - 3.0f64.cos()) + 1.0);
        assert!((v - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn kink_with_break_point() {
        let f = |x: f64| Ok((x - 0.3).abs());
        let v = integrate_with_breaks(f, &[0.0, 0.3, 1.0], &QuadOptions::default()).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-15);
        // without the break the adaptive loop still converges
        let v = integrate(f, 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((v - 0.29).abs() < 1e-9);
    }

    #[test]
    fn zero_integrand() {
        assert_eq!(integrate(|_| Ok(0.0), 0.0, 1.0, &QuadOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn singular_integrand_fails() {
        let opts = QuadOptions { max_intervals: 50, ..QuadOptions::default() };
        let r = integrate(|x: f64| Ok(1.0 / (x - 0.5).abs()), 0.0, 0.5, &opts);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })), "{r:?}");
    }
}
