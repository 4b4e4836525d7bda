//! Bracketed scalar root finding: bisection down to a coarse width, then
//! Brent's method for the final digits.

#[derive(Debug, Clone, Copy)]
pub struct RootOutcome {
    pub root: f64,
    pub f_root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Width at which bisection hands over to Brent.
    pub switch_width: f64,
    /// Target bracket width.
    pub xtol: f64,
    /// Residual magnitude accepted as converged once the bracket is below `xtol`.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            switch_width: 1e-6,
            xtol: 1e-13,
            ftol: 0.0,
            max_iter: 500,
        }
    }
}

/// Find a root of `f` in `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
///
/// The returned bracket always satisfies `f(lo) · f(hi) ≤ 0`.
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64, opts: &RootOptions) -> RootOutcome
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(f_lo * f_hi <= 0.0);
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f_lo, f_hi);
    let mut iterations = 0;
    if fa == 0.0 {
        return RootOutcome { root: a, f_root: 0.0, lo: a, hi: a, iterations };
    }
    if fb == 0.0 {
        return RootOutcome { root: b, f_root: 0.0, lo: b, hi: b, iterations };
    }

    while (b - a).abs() > opts.switch_width && iterations < opts.max_iter {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            return RootOutcome { root: m, f_root: 0.0, lo: m, hi: m, iterations };
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Brent (Numerical Recipes zbrent layout): b is the best estimate, a the
    // previous one, c the contrapoint.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let mut best_lo = a.min(b);
    let mut best_hi = a.max(b);
    while iterations < opts.max_iter {
        if (fb > 0.0) == (fc > 0.0) {
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
        best_lo = b.min(c);
        best_hi = b.max(c);
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.xtol;
        let xm = 0.5 * (c - b);
        if fb == 0.0 || (xm.abs() <= tol1 && fb.abs() <= opts.ftol.max(0.0)) || xm.abs() <= f64::EPSILON * b.abs() {
            break;
        }
        if xm.abs() <= tol1 && opts.ftol <= 0.0 {
            break;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        iterations += 1;
    }
    RootOutcome {
        root: b,
        f_root: fb,
        lo: best_lo,
        hi: best_hi,
        iterations,
    }
}
