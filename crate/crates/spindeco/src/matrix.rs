//! Dense complex matrix helpers over `faer`, plus the spin operator algebra.

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use crate::halfint::HalfInt;

pub type CMat = Mat<c64>;

pub fn cplx(z: Complex64) -> c64 {
    c64::new(z.re, z.im)
}

pub fn to_num(z: c64) -> Complex64 {
    Complex64::new(z.re, z.im)
}

pub fn zeros(n: usize) -> CMat {
    Mat::zeros(n, n)
}

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, k| {
        if i == k {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    })
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn trace(a: &CMat) -> Complex64 {
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows().min(a.ncols()) {
        t += to_num(a[(i, i)]);
    }
    t
}

pub fn frobenius_norm_sq(a: &CMat) -> f64 {
    let mut s = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let v = a[(i, k)];
            s += v.re * v.re + v.im * v.im;
        }
    }
    s
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let d = a[(i, k)] - b[(i, k)];
            m = m.max((d.re * d.re + d.im * d.im).sqrt());
        }
    }
    m
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, k| {
        a[(i / br, k / bc)] * b[(i % br, k % bc)]
    })
}

/// Commutator `[a, b]`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// corresponding unitary (columns are eigenvectors).
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let evd = a.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s();
    let n = a.nrows();
    let vals: Vec<f64> = (0..n).map(|i| s.column_vector()[i].re).collect();
    let u = evd.u().to_owned();
    // faer returns ascending order already; sort defensively
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| vals[i].partial_cmp(&vals[k]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let sorted_u = Mat::from_fn(n, n, |i, k| u[(i, order[k])]);
    (sorted_vals, sorted_u)
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    hermitian_eigen(a).0
}

/// Partial trace over the second (environment) factor of a matrix acting on
/// `C^{d_s} (x) C^{d_e}`, with the spin index major: row `r*d_e + alpha`.
pub fn partial_trace_env(a: &CMat, d_s: usize, d_e: usize) -> CMat {
    assert_eq!(a.nrows(), d_s * d_e);
    Mat::from_fn(d_s, d_s, |r, s| {
        let mut acc = c64::new(0.0, 0.0);
        for alpha in 0..d_e {
            acc += a[(r * d_e + alpha, s * d_e + alpha)];
        }
        acc
    })
}

/// The three spin generators `(S^1, S^2, S^3)` in the `|m>` basis
/// (row index `a` corresponds to `m = a - j`).
pub fn spin_operators(twice_j: i64) -> [CMat; 3] {
    let dim = (twice_j + 1) as usize;
    let j = twice_j as f64 / 2.0;
    let mut sp = zeros(dim); // S^+
    for a in 0..dim - 1 {
        let m = a as f64 - j;
        // <m+1| S^+ |m> = sqrt(j(j+1) - m(m+1))
        let v = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        sp[(a + 1, a)] = c64::new(v, 0.0);
    }
    let sm = adjoint(&sp);
    let sx = Mat::from_fn(dim, dim, |i, k| (sp[(i, k)] + sm[(i, k)]) * c64::new(0.5, 0.0));
    let sy = Mat::from_fn(dim, dim, |i, k| {
        (sp[(i, k)] - sm[(i, k)]) * c64::new(0.0, -0.5)
    });
    let sz = Mat::from_fn(dim, dim, |i, k| {
        if i == k {
            c64::new(i as f64 - j, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    [sx, sy, sz]
}

/// `sum_mu [S^mu, [S^mu, A]]`, the quadratic Casimir acting in the adjoint.
pub fn double_commutator(spin: &[CMat; 3], a: &CMat) -> CMat {
    let mut out = zeros(a.nrows());
    for s in spin {
        let c = commutator(s, a);
        let cc = commutator(s, &c);
        out += &cc;
    }
    out
}

/// Spin raising/lowering matrix element helper: expectation of the vector
/// spin operator in a pure state.
pub fn spin_expectation(amps: &[Complex64], twice_j: i64) -> [f64; 3] {
    let dim = (twice_j + 1) as usize;
    assert_eq!(amps.len(), dim);
    let ops = spin_operators(twice_j);
    let mut out = [0.0; 3];
    for (mu, op) in ops.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for k in 0..dim {
                acc += amps[i].conj() * to_num(op[(i, k)]) * amps[k];
            }
        }
        out[mu] = acc.re;
    }
    out
}

/// Index of the basis row for magnetic number `m` at spin `j`.
pub fn m_index(twice_j: i64, m: HalfInt) -> usize {
    ((m.twice() + twice_j) / 2) as usize
}
