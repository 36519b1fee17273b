//! Bracketed scalar root finding and golden-section search.

/// Root of `f(x, d - x)` on `[0, d]`, where `f` takes both offsets so that
/// neither is formed by cancellation. `f0 = f(0, d)` and `fd = f(d, 0)` must
/// have opposite signs.
///
/// The half of `[0, d]` holding the root is found first, and the offset that
/// is small there is solved for on a log scale. This keeps full relative
/// accuracy when the root sits exponentially close to an end, as happens for
/// integrands with only a logarithmic blow-up. Returns `(x, d - x)`.
pub fn split_root(f: &mut dyn FnMut(f64, f64) -> f64, d: f64, f0: f64, fd: f64) -> (f64, f64) {
    debug_assert!(f0.signum() != fd.signum(), "root not bracketed");
    let half = 0.5 * d;
    let fm = f(half, d - half);
    if fm == 0.0 {
        return (half, d - half);
    }
    let near_start = fm.signum() == fd.signum();
    let mut g = |w: f64| {
        let v = w.exp();
        if near_start {
            f(v, d - v)
        } else {
            f(d - v, v)
        }
    };
    let w_hi = half.ln();
    let w_lo = w_hi - 690.0;
    let g_lo = g(w_lo);
    let v = if g_lo == 0.0 || g_lo.signum() != fm.signum() {
        let w = brent_root(&mut g, w_lo, w_hi, g_lo, fm, 1e-14);
        w.exp()
    } else {
        // closer to the end than e^-690 · d/2; indistinguishable from it
        0.0
    };
    if near_start {
        (v, d - v)
    } else {
        (d - v, v)
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// `fa` and `fb` are the (already evaluated) endpoint values; they may be
/// infinite, in which case steps fall back to bisection until both ends are
/// finite. Returns the point whose bracket width is below `xtol`.
pub fn brent_root(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, xtol: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa.signum() != fb.signum(), "root not bracketed");
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return b;
        }
        let interpolate = e.abs() >= tol && fa.abs() > fb.abs() && fa.is_finite() && fc.is_finite();
        if interpolate {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if p.is_finite() && q.is_finite() && 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    b
}

/// Maximizes a unimodal function on `[a, b]` by golden-section search.
/// Returns `(argmax, max)`.
pub fn golden_max(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > xtol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
