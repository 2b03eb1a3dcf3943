//! Locating the zero set of a field's denominators.

use serde::Serialize;

use crate::error::Result;
use crate::field::ScalarField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularEvent {
    pub t: f64,
    pub x: f64,
    /// Position of the vanishing denominator in evaluation order.
    pub den_index: usize,
}

fn dens_at(u: &ScalarField, x: f64, t: f64) -> Vec<f64> {
    let mut d = Vec::new();
    let _ = u.eval_jet_recording::<f64>(x, t, &mut d);
    d.into_iter().map(|c| c.re).collect()
}

fn den_k(u: &ScalarField, k: usize, x: f64, t: f64) -> Option<f64> {
    dens_at(u, x, t).get(k).copied()
}

/// Real roots in `x` of denominator `k` on the slice `t`, bisected to 1e-10.
pub fn roots_in_x(u: &ScalarField, k: usize, t: f64, x_range: (f64, f64), samples: usize) -> Vec<f64> {
    let (a, b) = x_range;
    let n = samples.max(2);
    let xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let vals: Vec<Option<f64>> = xs.iter().map(|&x| den_k(u, k, x, t)).collect();
    let mut roots = Vec::new();
    for i in 0..n - 1 {
        let (Some(v0), Some(v1)) = (vals[i], vals[i + 1]) else { continue };
        if v0 == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if v0.signum() == v1.signum() {
            continue;
        }
        let (mut lo, mut hi) = (xs[i], xs[i + 1]);
        while hi - lo > 1e-10 {
            let m = 0.5 * (lo + hi);
            match den_k(u, k, m, t) {
                Some(v) if v.signum() == v0.signum() => lo = m,
                Some(_) => hi = m,
                None => break,
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// `min_x s0·den_k(x, t)` by dense sampling and golden-section refinement.
fn h_min(u: &ScalarField, k: usize, s0: f64, t: f64, xs: &[f64]) -> Option<(f64, f64)> {
    let vals: Vec<f64> = xs.iter().map(|&x| den_k(u, k, x, t).map(|v| s0 * v).unwrap_or(f64::INFINITY)).collect();
    let (i, &vmin) = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    let (mut lo, mut hi) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
    let g = |x: f64| den_k(u, k, x, t).map(|v| s0 * v).unwrap_or(f64::INFINITY);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..60 {
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + phi * (hi - lo);
            gd = g(d);
        }
    }
    let (xm, vm) = if gc < gd { (c, gc) } else { (d, gd) };
    Some(if vm < vmin { (xm, vm) } else { (xs[i], vmin) })
}

/// First time in `t_range` at which some denominator of `u` acquires a real
/// zero in `x_range`. Returns `None` if the denominators keep their sign.
pub fn first_singular_time(
    u: &ScalarField,
    x_range: (f64, f64),
    t_range: (f64, f64),
    x_samples: usize,
    t_samples: usize,
) -> Result<Option<SingularEvent>> {
    let (a, b) = x_range;
    let xs: Vec<f64> = (0..x_samples.max(2)).map(|i| a + (b - a) * i as f64 / (x_samples.max(2) - 1) as f64).collect();
    let t0 = t_range.0;
    let mid = dens_at(u, 0.5 * (a + b), t0);
    let mut best: Option<SingularEvent> = None;
    for (k, &d0) in mid.iter().enumerate() {
        let s0 = if d0 < 0.0 { -1.0 } else { 1.0 };
        let h = |t: f64| h_min(u, k, s0, t, &xs);
        if let Some((x, v)) = h(t0) {
            if v <= 0.0 {
                best = pick(best, SingularEvent { t: t0, x, den_index: k });
                continue;
            }
        }
        let nt = t_samples.max(2);
        let mut prev = t0;
        for j in 1..nt {
            let t = t0 + (t_range.1 - t0) * j as f64 / (nt - 1) as f64;
            if best.is_some_and(|e| e.t <= prev) {
                break;
            }
            match h(t) {
                Some((_, v)) if v <= 0.0 => {
                    let (mut lo, mut hi) = (prev, t);
                    while hi - lo > 1e-10 {
                        let m = 0.5 * (lo + hi);
                        match h(m) {
                            Some((_, v)) if v <= 0.0 => hi = m,
                            _ => lo = m,
                        }
                    }
                    let x = h(hi).map(|p| p.0).unwrap_or(f64::NAN);
                    best = pick(best, SingularEvent { t: hi, x, den_index: k });
                    break;
                }
                _ => prev = t,
            }
        }
    }
    Ok(best)
}

fn pick(a: Option<SingularEvent>, b: SingularEvent) -> Option<SingularEvent> {
    match a {
        Some(e) if e.t <= b.t => Some(e),
        _ => Some(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moving_pole_is_found() {
        // 1/(x^2 + 1 - t) vanishes first at t = 1, x = 0.
        let x = ScalarField::x();
        let t = ScalarField::t();
        let u = ScalarField::one() / (x.square() + 1.0 - t);
        let e = first_singular_time(&u, (-3.0, 3.0), (0.0, 2.0), 401, 201).unwrap().unwrap();
        assert!((e.t - 1.0).abs() < 1e-8, "{e:?}");
        assert!(e.x.abs() < 1e-3);
        let r = roots_in_x(&u, 0, 1.25, (-3.0, 3.0), 401);
        assert_eq!(r.len(), 2);
        assert!((r[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn smooth_field_has_no_event() {
        let u = ScalarField::one() / (1.0 + ScalarField::x().exp());
        assert!(first_singular_time(&u, (-5.0, 5.0), (0.0, 1.0), 101, 11).unwrap().is_none());
    }
}
