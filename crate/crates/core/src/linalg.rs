// SPDX-License-Identifier: Apache-2.0

//! Small dense kernels: matrix exponential, continuous Lyapunov solver and
//! the symplectic form for interleaved quadratures.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Padé degrees and the 1-norm bounds below which each reaches unit
/// roundoff in double precision.
const PADE_THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Diagonal Padé coefficients `b_j` of degree `m`.
fn pade_coefficients(m: usize) -> Vec<f64> {
    match m {
        3 => vec![120.0, 60.0, 12.0, 1.0],
        5 => vec![30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => vec![
            17_297_280.0,
            8_648_640.0,
            1_995_840.0,
            277_200.0,
            25_200.0,
            1_512.0,
            56.0,
            1.0,
        ],
        9 => vec![
            17_643_225_600.0,
            8_821_612_800.0,
            2_075_673_600.0,
            302_702_400.0,
            30_270_240.0,
            2_162_160.0,
            110_880.0,
            3_960.0,
            90.0,
            1.0,
        ],
        13 => PADE_13.to_vec(),
        _ => unreachable!("unsupported Padé degree {m}"),
    }
}

pub fn norm1<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, s: f64) -> DMatrix<T> {
    a.map(|x| x * T::from_real(s))
}

/// Matrix exponential by scaling and squaring around a diagonal Padé
/// approximant (degree 3 to 13 picked from the 1-norm).
pub fn expm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> DMatrix<T> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = norm1(a);
    if !norm.is_finite() {
        return DMatrix::from_element(n, n, T::from_real(f64::NAN));
    }

    for &(m, theta) in &PADE_THETA[..4] {
        if norm <= theta {
            return pade_low(a, m);
        }
    }

    let theta13 = PADE_THETA[4].1;
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil() as i32
    } else {
        0
    };
    let a_s = scaled(a, 0.5f64.powi(squarings));
    let mut r = pade_13(&a_s);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn pade_low<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, m: usize) -> DMatrix<T> {
    let n = a.nrows();
    let b = pade_coefficients(m);
    let a2 = a * a;
    let mut powers = vec![DMatrix::<T>::identity(n, n), a2.clone()];
    while powers.len() <= m / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = DMatrix::<T>::zeros(n, n);
    let mut even = DMatrix::<T>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < m {
            odd += scaled(p, b[2 * k + 1]);
        }
        even += scaled(p, b[2 * k]);
    }
    let u = a * odd;
    solve_pade(even, u)
}

fn pade_13<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> DMatrix<T> {
    let n = a.nrows();
    let b = &PADE_13;
    let id = DMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u_tail = scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]) + scaled(&id, b[1]);
    let u = a * (&a6 * u_inner + u_tail);

    let v_inner = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v_tail = scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]) + scaled(&id, b[0]);
    let v = &a6 * v_inner + v_tail;

    solve_pade(v, u)
}

/// `(V - U)^{-1} (V + U)`.
fn solve_pade<T: ComplexField<RealField = f64>>(v: DMatrix<T>, u: DMatrix<T>) -> DMatrix<T> {
    let p = &v + &u;
    let q = v - u;
    let n = p.nrows();
    q.lu()
        .solve(&p)
        .unwrap_or_else(|| DMatrix::from_element(n, n, T::from_real(f64::NAN)))
}

/// Solves `A X + X Aᵀ + D = 0` through the vectorized Kronecker system.
/// Returns `None` when the operator is singular.
pub fn lyapunov(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    // column-major vec: vec(AX) = (I ⊗ A) vec X, vec(X Aᵀ) = (A ⊗ I) vec X
    let op = id.kronecker(a) + a.kronecker(&id);
    let rhs = DVector::from_iterator(n * n, d.iter().map(|x| -x));
    let sol = op.lu().solve(&rhs)?;
    let x = DMatrix::from_column_slice(n, n, sol.as_slice());
    Some(symmetrize(&x))
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Block-diagonal `[[0, 1], [-1, 0]]` for interleaved `(x, p)` ordering,
/// so that `[r_j, r_k] = i Ω_jk`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn max_real_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_abs_diff<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x.clone() - y.clone()).modulus())
        .fold(0.0, f64::max)
}
