//! Adaptive Gauss–Kronrod (7, 15) quadrature for vector-valued integrands.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the odd-indexed Kronrod abscissae (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-12, abs: 1e-14, max_subdivisions: 2000 }
    }
}

struct Piece<S, const N: usize> {
    a: f64,
    b: f64,
    val: [S; N],
    err: f64,
}

fn gk15<S: Scalar, const N: usize>(
    f: &impl Fn(f64) -> Result<[S; N]>,
    a: f64,
    b: f64,
) -> Result<Piece<S, N>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [S::zero(); N];
    let mut g = [S::zero(); N];
    let fc = f(c)?;
    for i in 0..N {
        k[i] = fc[i].scale(WGK[7]);
        g[i] = fc[i].scale(WG[3]);
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        for i in 0..N {
            let s = f1[i] + f2[i];
            k[i] = k[i] + s.scale(WGK[j]);
            if j % 2 == 1 {
                g[i] = g[i] + s.scale(WG[j / 2]);
            }
        }
    }
    let mut err = 0.0_f64;
    for i in 0..N {
        k[i] = k[i].scale(h);
        err = err.max((k[i] - g[i].scale(h)).norm());
    }
    Ok(Piece { a, b, val: k, err })
}

fn adaptive<S: Scalar, const N: usize>(
    f: &impl Fn(f64) -> Result<[S; N]>,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<[S; N]> {
    let mut pieces = vec![gk15(f, a, b)?];
    loop {
        let mut total = [S::zero(); N];
        let mut err = 0.0;
        for p in &pieces {
            for i in 0..N {
                total[i] = total[i] + p.val[i];
            }
            err += p.err;
        }
        let mag = total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if err <= tol.abs.max(tol.rel * mag) {
            return Ok(total);
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let worst = pieces.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = (worst.b - worst.a).abs() <= 4.0 * f64::EPSILON * mid.abs().max(1e-300);
        if pieces.len() + 2 > tol.max_subdivisions || too_narrow {
            return Err(Error::QuadratureNonConvergence { a, b, err });
        }
        pieces.push(gk15(f, worst.a, mid)?);
        pieces.push(gk15(f, mid, worst.b)?);
    }
}

/// `∫_a^b f(x) dx` component-wise. Either limit may be infinite; half-lines
/// are mapped onto `(0, 1]` by `x = b ∓ (1 − s)/s`.
pub fn integrate<S: Scalar, const N: usize>(
    f: impl Fn(f64) -> Result<[S; N]>,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<[S; N]> {
    if a == b {
        return Ok([S::zero(); N]);
    }
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("NaN integration limit".into()));
    }
    if a > b {
        let r = integrate(f, b, a, tol)?;
        return Ok(r.map(|v| -v));
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&f, a, b, tol),
        (false, true) => half_line(&f, b, -1.0, tol),
        (true, false) => half_line(&f, a, 1.0, tol),
        (false, false) => {
            let l = half_line(&f, 0.0, -1.0, tol)?;
            let r = half_line(&f, 0.0, 1.0, tol)?;
            Ok(std::array::from_fn(|i| l[i] + r[i]))
        }
    }
}

/// Beyond this distance an overflowing integrand is taken as a decayed tail.
pub const FAR_TAIL: f64 = 300.0;

/// Integral over the half-line from `anchor` towards `dir · ∞`, always
/// returned with positive orientation. Panels of doubling width are summed
/// until the integrand has decayed; a slowly decaying remainder past
/// [`FAR_TAIL`] is mapped onto `(0, 1]`.
fn half_line<S: Scalar, const N: usize>(
    f: &impl Fn(f64) -> Result<[S; N]>,
    anchor: f64,
    dir: f64,
    tol: Tolerance,
) -> Result<[S; N]> {
    let far = |x: f64| (x - anchor).abs() > FAR_TAIL;
    let safe = |x: f64| -> Result<[S; N]> {
        match f(x) {
            Ok(v) if v.iter().all(|c| c.is_finite()) => Ok(v),
            Ok(_) | Err(Error::Pole { .. } | Error::Domain(_)) if far(x) => Ok([S::zero(); N]),
            Ok(_) => Err(Error::Domain(format!("non-finite integrand at x={x}"))),
            Err(e) => Err(e),
        }
    };
    let mut total = [S::zero(); N];
    let (mut start, mut width) = (anchor, 2.0);
    loop {
        let end = start + dir * width;
        let (lo, hi) = if dir > 0.0 { (start, end) } else { (end, start) };
        let panel = adaptive(&safe, lo, hi, tol)?;
        for i in 0..N {
            total[i] = total[i] + panel[i];
        }
        let mag = total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let thr = tol.abs.max(tol.rel * mag);
        let small = |v: &[S; N]| v.iter().all(|c| c.norm() <= thr);
        let edge = safe(end)?;
        if small(&panel) && small(&edge) {
            return Ok(total);
        }
        if far(end) {
            let g = |s: f64| -> Result<[S; N]> {
                let x = end + dir * (1.0 - s) / s;
                Ok(safe(x)?.map(|c| c.scale(1.0 / (s * s))))
            };
            let rest = adaptive(&g, 0.0, 1.0, tol)?;
            return Ok(std::array::from_fn(|i| total[i] + rest[i]));
        }
        start = end;
        width = (2.0 * width).min(64.0);
    }
}

/// Scalar convenience wrapper.
pub fn integrate_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    Ok(integrate(|x| Ok([f(x)]), a, b, Tolerance::default())?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_scalar(|x| x.powi(10), -1.0, 2.0).unwrap();
        assert!((v - (2f64.powi(11) + 1.0) / 11.0).abs() < 1e-11);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_scalar(f64::exp, 0.0, 1.0).unwrap();
        let b = integrate_scalar(f64::exp, 1.0, 0.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn half_lines() {
        let v = integrate_scalar(|x| (-x * x).exp(), f64::NEG_INFINITY, 0.0).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
        let w = integrate_scalar(|x| (-x).exp(), 1.0, f64::INFINITY).unwrap();
        assert!((w - (-1.0f64).exp()).abs() < 1e-14);
        let z = integrate_scalar(|x| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((z - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn complex_vector_integrand() {
        let r = integrate(
            |x| Ok([Complex64::new(0.0, x).exp(), Complex64::new(x, 0.0)]),
            0.0,
            std::f64::consts::PI,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r[0] - Complex64::new(0.0, 2.0)).norm() < 1e-13);
        assert!((r[1].re - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn non_integrable_singularity_fails() {
        let r = integrate_scalar(|x| 1.0 / x.abs().max(1e-300), -1.0, 1.0);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
