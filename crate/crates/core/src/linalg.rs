//! Determinants over the Laurent ring `ℤ[x, y, y⁻¹]` and over `ℂ`, plus the
//! eigenvalue products for circulant and skew-circulant matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::{i_power, unit_root, Tolerance};

/// Square matrix of Laurent polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<LaurentPoly2>,
}

impl PolyMatrix {
    pub fn new(rows: Vec<Vec<LaurentPoly2>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(PolyMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly2) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly2 {
        &self.entries[i * self.n + j]
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly2) -> LaurentPoly2) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn rows(&self) -> Vec<Vec<LaurentPoly2>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first multiplied by the power of `y` that makes it an ordinary
/// polynomial, so every Bareiss division is an exact division of integer
/// polynomials; the accumulated `y` power is divided back out at the end.
pub fn det_exact(m: &PolyMatrix) -> LaurentPoly2 {
    let n = m.n;
    let mut a = m.rows();
    let mut y_shift = 0i64;
    for row in a.iter_mut() {
        let low = row.iter().filter_map(|p| p.min_y()).min().unwrap_or(0);
        if low != 0 {
            for p in row.iter_mut() {
                *p = p.shift_y(-low);
            }
            y_shift += low;
        }
    }

    let mut negate = false;
    let mut prev = LaurentPoly2::one();
    for k in 0..n.saturating_sub(1) {
        let Some(pivot) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return LaurentPoly2::zero();
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let cross = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = cross
                    .checked_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            a[i][k] = LaurentPoly2::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift_y(y_shift);
    if negate {
        -det
    } else {
        det
    }
}

/// Laplace expansion along the first row. Exponential in `n`; meant as an
/// independent check of [`det_exact`] on small matrices.
pub fn det_cofactor(m: &PolyMatrix) -> LaurentPoly2 {
    fn expand(rows: &[Vec<LaurentPoly2>], cols: &[usize]) -> LaurentPoly2 {
        if cols.len() == 1 {
            return rows[0][cols[0]].clone();
        }
        let mut total = LaurentPoly2::zero();
        for (pos, &c) in cols.iter().enumerate() {
            if rows[0][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &rows[0][c] * &expand(&rows[1..], &rest);
            if pos % 2 == 0 {
                total += &term;
            } else {
                total -= &term;
            }
        }
        total
    }
    let rows = m.rows();
    let cols: Vec<usize> = (0..m.n).collect();
    expand(&rows, &cols)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        ComplexMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Determinant by Gaussian elimination with partial pivoting. The relative
/// error grows like `n³·ε·κ`; singular matrices come out as (nearly) zero.
pub fn det_complex(m: &ComplexMatrix) -> Complex64 {
    let n = m.n;
    let mut a = m.entries.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        if a[pivot * n + k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        for i in k + 1..n {
            let factor = a[i * n + k] / piv;
            for j in k + 1..n {
                let t = a[k * n + j];
                a[i * n + j] -= factor * t;
            }
        }
    }
    det
}

/// Rows are successive right rotations of `a`: entry `(i, j)` is `a[(j - i) mod r]`.
pub fn circulant_matrix(a: &[Complex64]) -> ComplexMatrix {
    let r = a.len();
    ComplexMatrix::from_fn(r, |i, j| a[(j + r - i) % r])
}

/// Like [`circulant_matrix`], but entries that wrap around below the diagonal
/// change sign.
pub fn skew_circulant_matrix(a: &[Complex64]) -> ComplexMatrix {
    let r = a.len();
    ComplexMatrix::from_fn(r, |i, j| if j >= i { a[j - i] } else { -a[r + j - i] })
}

fn eigenvalues(a: &[Complex64], root_turns: impl Fn(usize) -> f64) -> Vec<Complex64> {
    (0..a.len())
        .map(|m| {
            let turns = root_turns(m);
            a.iter()
                .enumerate()
                .map(|(k, ak)| unit_root(turns * k as f64) * ak)
                .sum::<Complex64>()
        })
        .collect()
}

/// `Σ_k ω_m^k a_k` for `ω_m = e^{2πim/r}`, `m = 0..r`.
pub fn circulant_eigenvalues(a: &[Complex64]) -> Vec<Complex64> {
    let r = a.len();
    eigenvalues(a, |m| m as f64 / r as f64)
}

/// `Σ_k ω_m^k a_k` for `ω_m = e^{(2m+1)πi/r}`, the odd `2r`-th roots of unity.
pub fn skew_circulant_eigenvalues(a: &[Complex64]) -> Vec<Complex64> {
    let r = a.len();
    eigenvalues(a, |m| (2 * m + 1) as f64 / (2 * r) as f64)
}

/// `Π_m max(1, |λ_m|)`: the magnitude against which rounding in an eigenvalue
/// product is measured. Equals `|det|` when no eigenvalue is below one.
pub fn product_scale(eigenvalues: &[Complex64]) -> f64 {
    eigenvalues.iter().map(|l| l.norm().max(1.0)).product()
}

pub fn circulant_det(a: &[Complex64]) -> Complex64 {
    circulant_eigenvalues(a).into_iter().product()
}

pub fn skew_circulant_det(a: &[Complex64]) -> Complex64 {
    skew_circulant_eigenvalues(a).into_iter().product()
}

/// `[e^{-2πi(i + s)j/r}]` with `s = 1/2` when `shifted`, else `0`.
pub fn fourier_matrix(r: usize, shifted: bool) -> ComplexMatrix {
    let s = shifted as usize;
    ComplexMatrix::from_fn(r, |i, j| {
        let num = ((2 * i + s) * j) % (2 * r);
        unit_root(-(num as f64) / (2 * r) as f64)
    })
}

/// Closed form of `det fourier_matrix(r, shifted)`:
/// `r^{r/2}·i^{(r+2)(r-1)/2}` unshifted, `r^{r/2}·i^{r(r-1)/2}` shifted.
pub fn fourier_det_closed_form(r: usize, shifted: bool) -> Complex64 {
    let r_i = r as i64;
    let k = if shifted {
        r_i * (r_i - 1) / 2
    } else {
        (r_i + 2) * (r_i - 1) / 2
    };
    i_power(k) * (r as f64).powf(r as f64 / 2.0)
}

/// Numerical determinant of the (shifted) Fourier matrix, checked against its
/// closed form.
pub fn fourier_det(r: usize, shifted: bool, tol: Tolerance) -> Result<Complex64> {
    let det = det_complex(&fourier_matrix(r, shifted));
    let closed = fourier_det_closed_form(r, shifted);
    if !tol.approx_eq(det, closed) {
        return Err(Error::FormulaMismatch {
            what: format!("fourier determinant r={r} shifted={shifted}"),
            computed: det.to_string(),
            expected: closed.to_string(),
        });
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(u32, i64, i64)]) -> LaurentPoly2 {
        LaurentPoly2::from_terms(terms.iter().copied())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn identity(n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(n, |i, j| {
            if i == j {
                LaurentPoly2::one()
            } else {
                LaurentPoly2::zero()
            }
        })
        .unwrap()
    }

    #[test]
    fn exact_examples() {
        for n in 1..6 {
            assert_eq!(det_exact(&identity(n)), LaurentPoly2::one());
        }
        let m = PolyMatrix::new(vec![
            vec![p(&[(1, 0, 2)]), p(&[(0, 0, 1), (2, -1, 1)])],
            vec![p(&[(2, 0, 1), (0, 1, 1)]), p(&[(1, 0, 2)])],
        ])
        .unwrap();
        assert_eq!(det_exact(&m), p(&[(2, 0, 2), (0, 1, -1), (4, -1, -1)]));
        assert_eq!(det_cofactor(&m), det_exact(&m));
        let single = PolyMatrix::new(vec![vec![p(&[(3, -2, 7)])]]).unwrap();
        assert_eq!(det_exact(&single), p(&[(3, -2, 7)]));
    }

    #[test]
    fn zero_pivot_needs_a_row_swap() {
        let m = PolyMatrix::new(vec![
            vec![LaurentPoly2::zero(), LaurentPoly2::one()],
            vec![LaurentPoly2::one(), LaurentPoly2::zero()],
        ])
        .unwrap();
        assert_eq!(det_exact(&m), -LaurentPoly2::one());
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(PolyMatrix::new(vec![vec![LaurentPoly2::one()], vec![]]).is_err());
        assert!(PolyMatrix::new(vec![]).is_err());
    }

    #[test]
    fn complex_examples() {
        let id = ComplexMatrix::from_fn(5, |i, j| c((i == j) as u8 as f64));
        assert!((det_complex(&id) - c(1.0)).norm() < 1e-15);
        let m = ComplexMatrix::from_fn(2, |i, j| c(if i == 1 && j == 1 { -1.0 } else { 1.0 }));
        assert!((det_complex(&m) - c(-2.0)).norm() < 1e-15);
        let d = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(2.0),
            (1, 1) => Complex64::new(0.0, 3.0),
            _ => c(0.0),
        });
        assert!((det_complex(&d) - Complex64::new(0.0, 6.0)).norm() < 1e-15);
        let singular = ComplexMatrix::from_fn(3, |i, _| c(i as f64));
        assert!(det_complex(&singular).norm() < 1e-12);
    }

    #[test]
    fn circulant_examples() {
        assert!((circulant_det(&[c(3.0), c(1.0)]) - c(8.0)).norm() < 1e-12);
        assert!((circulant_det(&[Complex64::new(2.0, -1.0)]) - Complex64::new(2.0, -1.0)).norm() < 1e-12);
        let a = [c(1.0), c(2.0), c(3.0)];
        let direct = det_complex(&circulant_matrix(&a));
        assert!((direct - c(18.0)).norm() < 1e-12);
        assert!((circulant_det(&a) - c(18.0)).norm() < 1e-12);
        assert_eq!(circulant_matrix(&a).get(1, 0), c(3.0));
    }

    #[test]
    fn skew_circulant_examples() {
        assert!((skew_circulant_det(&[c(3.0), c(1.0)]) - c(10.0)).norm() < 1e-12);
        assert!((skew_circulant_det(&[c(-4.0)]) - c(-4.0)).norm() < 1e-12);
        let a = [c(1.0), c(0.0), c(2.0), c(0.0)];
        let direct = det_complex(&skew_circulant_matrix(&a));
        assert!((skew_circulant_det(&a) - direct).norm() < 1e-12 * direct.norm().max(1.0));
        let m = skew_circulant_matrix(&[c(1.0), c(2.0), c(3.0)]);
        assert_eq!(m.get(1, 0), c(-3.0));
        assert_eq!(m.get(2, 1), c(-3.0));
        assert_eq!(m.get(2, 0), c(-2.0));
    }

    #[test]
    fn fourier_examples() {
        let tol = Tolerance::default();
        assert!((fourier_det(1, false, tol).unwrap() - c(1.0)).norm() < 1e-12);
        assert!((fourier_det(2, false, tol).unwrap() - c(-2.0)).norm() < 1e-12);
        assert!((fourier_det(2, true, tol).unwrap() - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        for r in 1..=8 {
            fourier_det(r, false, tol).unwrap();
            fourier_det(r, true, tol).unwrap();
        }
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly2> {
        prop::collection::vec((0u32..3, -2i64..3, -5i64..6), 0..4).prop_map(|t| p(&t))
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(arb_poly(), n * n)
            .prop_map(move |v| PolyMatrix::new(v.chunks(n).map(|r| r.to_vec()).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_matches_cofactor(m in (1usize..5).prop_flat_map(arb_matrix)) {
            prop_assert_eq!(det_exact(&m), det_cofactor(&m));
        }

        #[test]
        fn repeated_row_gives_zero(m in (2usize..5).prop_flat_map(arb_matrix), i in 0usize..4, j in 0usize..4) {
            let n = m.dim();
            let (i, j) = (i % n, j % n);
            prop_assume!(i != j);
            let mut rows = m.rows();
            rows[j] = rows[i].clone();
            prop_assert!(det_exact(&PolyMatrix::new(rows).unwrap()).is_zero());
        }

        #[test]
        fn triangular_is_diagonal_product(m in (1usize..5).prop_flat_map(arb_matrix)) {
            let tri = PolyMatrix::from_fn(m.dim(), |i, j| if j >= i { m.get(i, j).clone() } else { LaurentPoly2::zero() }).unwrap();
            let diag = (0..m.dim()).fold(LaurentPoly2::one(), |acc, i| &acc * m.get(i, i));
            prop_assert_eq!(det_exact(&tri), diag);
        }

        #[test]
        fn eigen_products_match_direct(a in prop::collection::vec(-10i32..=10, 1..=8)) {
            let a: Vec<Complex64> = a.into_iter().map(|v| c(v as f64)).collect();
            let tol = Tolerance::default();
            let eig = circulant_eigenvalues(&a);
            prop_assert!(tol.approx_eq_scaled(circulant_det(&a), det_complex(&circulant_matrix(&a)), product_scale(&eig)));
            let eig = skew_circulant_eigenvalues(&a);
            prop_assert!(tol.approx_eq_scaled(skew_circulant_det(&a), det_complex(&skew_circulant_matrix(&a)), product_scale(&eig)));
        }
    }
}
