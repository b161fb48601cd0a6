//! Shared numerical primitives: Gauss-Legendre rules, adaptive Simpson,
//! Bessel function arrays and small fitting helpers.

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre polynomial. Accurate to machine precision for n up to several
/// thousand.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over `[a, b]` with a Gauss-Legendre rule of order `n`.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive Simpson quadrature with absolute tolerance.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fb, fm, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the roundoff floor keeps the halving tolerance from forcing full-depth
    // recursion once delta is dominated by cancellation noise
    let floor = 4.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= floor {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, fm, flm, left, tol * 0.5, depth - 1)
            + simpson_rec(f, m, b, fm, fb, frm, right, tol * 0.5, depth - 1)
    }
}

/// `J_0(x) ..= J_{n_max}(x)` by Miller's downward recurrence, normalized with
/// `J_0 + 2 sum J_{2k} = 1`. Good to near machine precision for `x` up to a
/// few thousand.
pub fn bessel_j_array(x: f64, n_max: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // start high enough that the growing solution has decayed out of the
    // minimal one: n + sqrt(40 n) extra orders (Numerical Recipes rule)
    let base = n_max.max(ax.ceil() as usize);
    let start = base + 20 + (40.0 * base as f64).sqrt().ceil() as usize;
    let mut j_hi = 0.0f64; // J_{k+1}
    let mut j_cur = 1e-300f64; // J_k, starting at k = start
    let mut out = vec![0.0; n_max + 1];
    let mut norm = 0.0f64; // accumulates J_0 + 2 sum_{k>0 even} J_k
    for k in (0..=start).rev() {
        // j_cur holds J_k here
        if k <= n_max {
            out[k] = j_cur;
        }
        if k == 0 {
            norm += j_cur;
        } else if k % 2 == 0 {
            norm += 2.0 * j_cur;
        }
        if k > 0 {
            let j_lo = (2.0 * k as f64 / ax) * j_cur - j_hi;
            j_hi = j_cur;
            j_cur = j_lo;
            if j_cur.abs() > 1e250 {
                j_hi /= 1e250;
                j_cur /= 1e250;
                norm /= 1e250;
                for v in out.iter_mut() {
                    *v /= 1e250;
                }
            }
        }
    }
    let inv = 1.0 / norm;
    for v in out.iter_mut() {
        *v *= inv;
    }
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Log-log slope fit, for power-law exponents.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    linear_fit(&lx, &ly).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // order n integrates degree 2n-1 exactly
        let val = integrate_gl(|x| x.powi(7) + 3.0 * x.powi(2), -1.0, 1.0, 4);
        assert!((val - 2.0).abs() < 1e-14);
        let val = integrate_gl(|x| x.sin(), 0.0, std::f64::consts::PI, 24);
        assert!((val - 2.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_handles_narrow_peak() {
        // Lorentzian of width 1e-3 integrates to ~pi/width around the peak
        let w = 1e-3;
        let f = |x: f64| w / (x * x + w * w);
        let v = adaptive_simpson(&f, -1.0, 1.0, 1e-12);
        let exact = 2.0 * (1.0 / w).atan();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn bessel_against_reference_values() {
        let j = bessel_j_array(2.0, 5);
        // reference values (Abramowitz & Stegun tables)
        assert!((j[0] - 0.2238907791412357).abs() < 1e-14);
        assert!((j[1] - 0.5767248077568734).abs() < 1e-14);
        assert!((j[2] - 0.3528340286156377).abs() < 1e-14);
        let j = bessel_j_array(100.0, 110);
        assert!((j[0] - 0.019985850304223122).abs() < 1e-13);
        assert!((j[100] - 0.09636667329586156).abs() < 1e-13);
        // sum rule J_0^2 + 2 sum J_k^2 = 1
        let j = bessel_j_array(37.3, 80);
        let s: f64 = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_slope() {
        let x: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let (s, b) = linear_fit(&x, &y);
        assert!((s - 2.5).abs() < 1e-12 && (b + 1.0).abs() < 1e-11);
    }
}
