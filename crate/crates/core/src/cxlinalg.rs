//! Small dense complex linear algebra.
//!
//! Provides the companion-matrix eigensolver used as an independent oracle
//! for critical points, numerical checks of the determinant identities the
//! outlier analysis rests on, and the reduced `s × s` determinant whose zeros
//! are the outlying critical points.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polyroots::{CriticalPoint, CriticalPointSet, RootedPolynomial, Solver};

/// Largest matrix accepted by [`eigenvalues`].
pub const MAX_EIGEN_DIM: usize = 512;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    /// Entries iid with independent standard-uniform real and imaginary parts in [-1, 1].
    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `u vᵀ` (plain transpose).
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value by power iteration on `AᴴA`, to 1e-6 relative.
    pub fn spectral_norm(&self) -> f64 {
        if self.data.iter().all(|a| *a == ZERO) {
            return 0.0;
        }
        let ah = self.conj_transpose();
        // deterministic start with no special alignment
        let mut x: Vec<Complex64> = (0..self.cols)
            .map(|j| Complex64::new(1.0 + 0.1 * j as f64, 0.3 - 0.07 * j as f64))
            .collect();
        let mut prev = 0.0;
        for it in 0..10_000 {
            let y = ah.matvec(&self.matvec(&x));
            let norm = y.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            x = y.into_iter().map(|a| a / norm).collect();
            // norm → σ_max² as x aligns with the top right-singular vector
            if it > 2 && (norm - prev).abs() <= 1e-13 * norm {
                break;
            }
            prev = norm;
        }
        let ax = self.matvec(&x);
        ax.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("LU needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
                .unwrap();
            if a[p * n + k] == ZERO {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        Ok(Lu {
            n,
            a,
            perm,
            sign,
            singular,
        })
    }

    pub fn det(&self) -> Result<Complex64> {
        Ok(self.lu()?.det())
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            let col = lu.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Copy of the block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

/// Packed LU factors of a square matrix (unit lower triangle implied).
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    a: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn det(&self) -> Complex64 {
        if self.singular {
            return ZERO;
        }
        let mut d = Complex64::new(self.sign, 0.0);
        for k in 0..self.n {
            d *= self.a[k * self.n + k];
        }
        d
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.singular {
            return Err(Error::Singular);
        }
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = x[k];
                x[i] -= self.a[i * n + k] * t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = x[k];
                x[i] -= self.a[i * n + k] * t;
            }
            x[i] /= self.a[i * n + i];
        }
        Ok(x)
    }

    /// Smallest pivot modulus relative to the largest; zero when singular.
    pub fn pivot_ratio(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let piv: Vec<f64> = (0..self.n).map(|k| self.a[k * self.n + k].norm()).collect();
        let max = piv.iter().copied().fold(0.0, f64::max);
        let min = piv.iter().copied().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    }
}

/// `D (I - J/n)` with `D = diag(roots)` and `J` the all-ones matrix: entry
/// `(i, j)` is `x_i (δ_ij - 1/n)`. Its characteristic polynomial is `z p'(z) / n`.
pub fn companion_matrix(roots: &[Complex64]) -> ComplexMatrix {
    let n = roots.len();
    let inv_n = 1.0 / n as f64;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        roots[i] * (delta - inv_n)
    })
}

/// Reduces a square matrix to upper Hessenberg form by Householder reflections.
pub fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows;
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        // v = x + phase·‖x‖·e1 avoids cancellation
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A ← (I - 2vvᴴ) A on rows k+1.., all columns from k
        for j in k..n {
            let dot: Complex64 = (0..v.len()).map(|t| v[t].conj() * a[(k + 1 + t, j)]).sum();
            for t in 0..v.len() {
                a[(k + 1 + t, j)] -= 2.0 * v[t] * dot;
            }
        }
        // A ← A (I - 2vvᴴ) on columns k+1.., all rows
        for i in 0..n {
            let dot: Complex64 = (0..v.len()).map(|t| a[(i, k + 1 + t)] * v[t]).sum();
            for t in 0..v.len() {
                a[(i, k + 1 + t)] -= 2.0 * dot * v[t].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
    a
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square matrix: Hessenberg reduction, then
/// single-shift QR with Wilkinson shifts and deflation on the active window.
/// A subdiagonal entry is negligible below `tol` times its diagonal
/// neighbours (never below machine precision).
pub fn eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("eigenvalues need a square matrix".into()));
    }
    let n = m.rows;
    if n > MAX_EIGEN_DIM {
        return Err(Error::InvalidArgument(format!("dimension {n} exceeds {MAX_EIGEN_DIM}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let tol = tol.max(f64::EPSILON);
    let mut h = hessenberg(m);
    let norm = h.frobenius().max(f64::MIN_POSITIVE);
    let mut eig = vec![ZERO; n];
    let budget = 100 * n;
    let mut sweeps = 0;
    let mut hi = n - 1;
    let mut iter_here = 0;
    loop {
        // find the start of the unreduced window ending at hi
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { norm } else { s };
            if h[(l, l - 1)].norm() <= tol * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter_here = 0;
            continue;
        }
        sweeps += 1;
        iter_here += 1;
        if sweeps > budget {
            return Err(Error::EigenConvergence(budget));
        }
        let mu = if iter_here % 10 == 0 {
            // exceptional shift breaks cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.4) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rot = Vec::with_capacity(hi - l);
        for k in l..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rot.push((c, s));
        }
        for (t, &(c, s)) in rot.iter().enumerate() {
            let k = l + t;
            for i in l..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

/// Critical points from the eigenvalues of [`companion_matrix`], with the
/// structural zero eigenvalue (the one of least modulus) removed.
pub fn oracle_critical_points(roots: &[Complex64], tol: f64) -> Result<CriticalPointSet> {
    if roots.is_empty() {
        return Err(Error::InvalidArgument("no roots".into()));
    }
    let mut eig = eigenvalues(&companion_matrix(roots), tol)?;
    let drop = (0..eig.len())
        .min_by(|&i, &j| eig[i].norm().total_cmp(&eig[j].norm()))
        .unwrap();
    eig.remove(drop);
    let poly = RootedPolynomial::from_roots(roots.to_vec())?;
    let points = eig
        .into_iter()
        .map(|w| {
            let min_dist = roots.iter().map(|x| (w - x).norm()).fold(f64::INFINITY, f64::min);
            let residual = poly.log_derivative(w).map(|l| l.norm() * min_dist).unwrap_or(0.0);
            CriticalPoint {
                location: w,
                multiplicity: 1,
                residual,
            }
        })
        .collect();
    Ok(CriticalPointSet {
        points,
        solver: Solver::CompanionOracle,
    })
}

/// `|det(zI - D(I - J/n)) - z p'(z)/n| / (1 + |z p'(z)/n|)`, the left side by
/// LU and `p'` by the product rule.
pub fn companion_identity_residual(roots: &[Complex64], z: Complex64) -> Result<f64> {
    let n = roots.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no roots".into()));
    }
    let m = companion_matrix(roots);
    let zi = ComplexMatrix::identity(n).scale(z);
    let lhs = zi.sub(&m).det()?;
    let poly = RootedPolynomial::from_roots(roots.to_vec())?;
    let rhs = z * poly.derivative(z) / n as f64;
    Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
}

/// Residual `‖(A + uvᵀ) X - I‖₂` where `X` is the Sherman–Morrison inverse
/// `A⁻¹ - A⁻¹u vᵀA⁻¹ / (1 + vᵀA⁻¹u)`.
pub fn sherman_morrison_check(a: &ComplexMatrix, u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    let n = a.rows;
    if !a.is_square() || u.len() != n || v.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let lu = a.lu()?;
    if lu.pivot_ratio() < 1e-14 {
        return Err(Error::Singular);
    }
    let ainv = a.inverse()?;
    let ainv_u = ainv.matvec(u);
    let vt_ainv: Vec<Complex64> = (0..n).map(|j| (0..n).map(|i| v[i] * ainv[(i, j)]).sum()).collect();
    let denom = ONE + v.iter().zip(&ainv_u).map(|(a, b)| a * b).sum::<Complex64>();
    if denom.norm() <= 1e-12 {
        return Err(Error::Singular);
    }
    let x = ainv.sub(&ComplexMatrix::outer(&ainv_u, &vt_ainv).scale(denom.inv()));
    let updated = a.add(&ComplexMatrix::outer(u, v));
    let r = (&updated * &x).sub(&ComplexMatrix::identity(n));
    Ok(r.spectral_norm())
}

/// Relative difference between `det [[A, B], [C, D]]` and
/// `det(A) det(D - C A⁻¹ B)`.
pub fn block_determinant_check(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<f64> {
    let (p, q) = (a.rows, d.rows);
    if !a.is_square() || !d.is_square() || b.rows != p || b.cols != q || c.rows != q || c.cols != p {
        return Err(Error::InvalidArgument("block dimensions do not fit".into()));
    }
    let lu = a.lu()?;
    if lu.pivot_ratio() < 1e-14 {
        return Err(Error::Singular);
    }
    let full = ComplexMatrix::from_fn(p + q, p + q, |i, j| match (i < p, j < p) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - p)],
        (false, true) => c[(i - p, j)],
        (false, false) => d[(i - p, j - p)],
    });
    let lhs = full.det()?;
    let schur = d.sub(&(&(c * &a.inverse()?) * b));
    let rhs = lu.det() * schur.det()?;
    let scale = lhs.norm().max(rhs.norm());
    Ok(if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale })
}

/// `(|det a - det b|, ‖a - b‖₂)`.
pub fn det_difference_bound_check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(f64, f64)> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(Error::InvalidArgument("need equal square matrices".into()));
    }
    Ok(((a.det()? - b.det()?).norm(), a.sub(b).spectral_norm()))
}

/// Constant `C_k = k R^{k-1}` with `|det A - det B| ≤ C_k ‖A - B‖₂` whenever
/// `‖A‖₂, ‖B‖₂ ≤ R`: replace one column at a time and bound each mixed
/// determinant by Hadamard's inequality.
pub fn det_difference_constant(k: usize, r: f64) -> f64 {
    k as f64 * r.powi(k as i32 - 1)
}

/// Largest ratio `|det A - det B| / ‖A - B‖₂` seen over `samples` random
/// pairs of `k × k` matrices scaled to spectral norm at most `r`.
pub fn calibrate_det_difference(k: usize, r: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a = ComplexMatrix::random(k, k, &mut rng);
        let a = a.scale(Complex64::new(r / a.spectral_norm().max(1e-300), 0.0));
        let e = ComplexMatrix::random(k, k, &mut rng).scale(Complex64::new(10f64.powf(-rng.gen::<f64>() * 6.0), 0.0));
        let b = a.add(&e);
        let nb = b.spectral_norm();
        let b = if nb > r { b.scale(Complex64::new(r / nb, 0.0)) } else { b };
        let (lhs, rhs) = det_difference_bound_check(&a, &b).expect("square");
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    worst
}

/// Data of the reduced `s × s` determinant whose zeros (away from the inlier
/// roots) are the critical points contributed by the outlier roots.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedOutlierFunction {
    inliers: Vec<Complex64>,
    outliers: Vec<Complex64>,
}

impl ReducedOutlierFunction {
    pub fn new(inliers: Vec<Complex64>, outliers: Vec<Complex64>) -> Result<Self> {
        if outliers.is_empty() {
            return Err(Error::InvalidArgument("need at least one outlier root".into()));
        }
        Ok(Self { inliers, outliers })
    }

    pub fn n(&self) -> usize {
        self.inliers.len() + self.outliers.len()
    }

    pub fn s(&self) -> usize {
        self.outliers.len()
    }

    pub fn inliers(&self) -> &[Complex64] {
        &self.inliers
    }

    pub fn outliers(&self) -> &[Complex64] {
        &self.outliers
    }

    /// `a(z) = (1/n) 1ᵀ (zI - D_in)⁻¹ D_in 1`; the rank-one update of
    /// `zI - D_in` is invertible iff `1 + a(z) ≠ 0`.
    fn a(&self, z: Complex64) -> Result<Complex64> {
        let mut sum = ZERO;
        for x in &self.inliers {
            let d = z - x;
            if d == ZERO {
                return Err(Error::Pole(z));
            }
            sum += x / d;
        }
        Ok(sum / self.n() as f64)
    }

    /// Coefficient `c(z)` in `det(zI - D_out + c D_out J_s)`. Sherman–Morrison
    /// gives `1ᵀ G D_in 1 = n a / (1 + a)`, so `c = 1/n - a/(n(1+a)) = 1/(n(1+a))`.
    fn coefficient(&self, z: Complex64) -> Result<Complex64> {
        let denom = ONE + self.a(z)?;
        if denom.norm() < 1e-12 {
            return Err(Error::NearSingular(denom.norm()));
        }
        Ok(ONE / (self.n() as f64 * denom))
    }

    /// The `s × s` determinant, assembled densely and factored by LU.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let c = self.coefficient(z)?;
        let s = self.s();
        let m = ComplexMatrix::from_fn(s, s, |i, j| {
            let diag = if i == j { z - self.outliers[i] } else { ZERO };
            diag + c * self.outliers[i]
        });
        m.det()
    }

    /// Same value by the matrix determinant lemma:
    /// `∏ (z - ξ) · (1 + c Σ ξ / (z - ξ))`.
    pub fn eval_closed_form(&self, z: Complex64) -> Result<Complex64> {
        let c = self.coefficient(z)?;
        let prod: Complex64 = self.outliers.iter().map(|xi| z - xi).product();
        let sum: Complex64 = self.outliers.iter().map(|xi| xi / (z - xi)).sum();
        Ok(prod * (ONE + c * sum))
    }

    /// Zeros near the outlier roots: Newton from each `ξ` with a central
    /// difference derivative, deflating zeros already found.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        let mut found: Vec<Complex64> = Vec::new();
        let scale = self
            .outliers
            .iter()
            .chain(&self.inliers)
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        for (l, &xi) in self.outliers.iter().enumerate() {
            let deflated = |z: Complex64| -> Result<Complex64> {
                let mut v = self.eval(z)?;
                for f in &found {
                    v /= z - f;
                }
                Ok(v)
            };
            // start just off ξ in a fixed direction per outlier
            let mut z = xi + Complex64::from_polar(1e-3 * scale, 0.7 + l as f64);
            let mut converged = false;
            for _ in 0..200 {
                let h = 1e-7 * (1.0 + z.norm());
                let f = deflated(z)?;
                let df = (deflated(z + h)? - deflated(z - h)?) / (2.0 * h);
                if df == ZERO || !f.re.is_finite() {
                    break;
                }
                let step = f / df;
                z -= step;
                if step.norm() <= 1e-14 * (1.0 + z.norm()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence {
                    sweeps: 200,
                    unconverged: vec![z],
                    residuals: vec![self.eval(z).map(|v| v.norm()).unwrap_or(f64::INFINITY)],
                });
            }
            found.push(z);
        }
        Ok(found)
    }
}

/// Evaluates `rf` at `z`.
pub fn reduced_outlier_function(rf: &ReducedOutlierFunction, z: Complex64) -> Result<Complex64> {
    rf.eval(z)
}
