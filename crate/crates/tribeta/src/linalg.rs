//! Banded linear algebra shared by the eigensolver and the resolvent code.
//!
//! One partial-pivoting LU factorization of a general tridiagonal matrix,
//! generic over real and complex scalars, so shifted solves in inverse
//! iteration and resolvent column solves use the same kernel.

use num_complex::ComplexFloat;
use num_traits::{Float, Zero};

fn lift<T>(x: <T as ComplexFloat>::Real) -> T
where
    T: ComplexFloat + From<<T as ComplexFloat>::Real>,
{
    <T as From<<T as ComplexFloat>::Real>>::from(x)
}

/// LU factorization (row partial pivoting) of a tridiagonal matrix.
///
/// Follows the classic banded scheme: pivoting between adjacent rows only,
/// producing a second superdiagonal of fill-in. Pivots with magnitude below
/// an epsilon-scaled floor are nudged onto the floor so that solves against
/// a numerically singular shift stay finite; inverse iteration relies on it.
pub struct TridiagLu<T: ComplexFloat> {
    mult: Vec<T>,
    d: Vec<T>,
    du: Vec<T>,
    du2: Vec<T>,
    swapped: Vec<bool>,
}

impl<T> TridiagLu<T>
where
    T: ComplexFloat + From<<T as ComplexFloat>::Real>,
{
    /// Factor the matrix with subdiagonal `dl`, diagonal `d`, superdiagonal `du`.
    pub fn factor(mut dl: Vec<T>, mut d: Vec<T>, mut du: Vec<T>) -> Self {
        let n = d.len();
        assert!(n >= 1 && dl.len() + 1 == n && du.len() + 1 == n, "band lengths");
        let mut maxabs = T::Real::zero();
        for x in d.iter().chain(dl.iter()).chain(du.iter()) {
            maxabs = maxabs.max(x.abs());
        }
        let floor = if maxabs > T::Real::zero() {
            T::Real::epsilon() * maxabs
        } else {
            Float::sqrt(T::Real::min_positive_value())
        };

        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let piv = bump(d[i], floor);
                d[i] = piv;
                let fact = dl[i] / piv;
                dl[i] = fact;
                d[i + 1] = d[i + 1] - fact * du[i];
            } else {
                swapped[i] = true;
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let t = du[i];
                du[i] = d[i + 1];
                d[i + 1] = t - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
            }
        }
        d[n - 1] = bump(d[n - 1], floor);
        TridiagLu { mult: dl, d, du, du2, swapped }
    }

    /// Solve in place against one right-hand side.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.d.len();
        assert_eq!(b.len(), n, "rhs length");
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.mult[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.mult[i] * b[i];
            }
        }
        b[n - 1] = b[n - 1] / self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Push a pivot away from zero, keeping its phase.
fn bump<T>(x: T, floor: <T as ComplexFloat>::Real) -> T
where
    T: ComplexFloat + From<<T as ComplexFloat>::Real>,
{
    let a = x.abs();
    if a >= floor {
        x
    } else if a > T::Real::zero() {
        x * lift::<T>(floor / a)
    } else {
        lift::<T>(floor)
    }
}

/// Factor (M - shift I) for a symmetric tridiagonal M given by its bands.
pub fn shifted_factor<T>(
    diag: &[<T as ComplexFloat>::Real],
    offdiag: &[<T as ComplexFloat>::Real],
    shift: T,
) -> TridiagLu<T>
where
    T: ComplexFloat + From<<T as ComplexFloat>::Real>,
{
    let d = diag.iter().map(|&x| lift::<T>(x) - shift).collect();
    let band: Vec<T> = offdiag.iter().map(|&x| lift::<T>(x)).collect();
    TridiagLu::factor(band.clone(), d, band)
}

/// y = T x for the tridiagonal matrix with the given bands.
pub fn tridiag_apply<T: ComplexFloat>(dl: &[T], d: &[T], du: &[T], x: &[T], y: &mut [T]) {
    let n = d.len();
    for i in 0..n {
        let mut acc = d[i] * x[i];
        if i > 0 {
            acc = acc + dl[i - 1] * x[i - 1];
        }
        if i + 1 < n {
            acc = acc + du[i] * x[i + 1];
        }
        y[i] = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_traits::One;
    use rand::Rng;
    use rand::SeedableRng;

    fn residual_norm<T: ComplexFloat>(dl: &[T], d: &[T], du: &[T], x: &[T], b: &[T]) -> T::Real {
        let mut y = vec![T::zero(); d.len()];
        tridiag_apply(dl, d, du, x, &mut y);
        let mut r = T::Real::zero();
        let mut scale = T::Real::zero();
        for (yi, bi) in y.iter().zip(b) {
            r = r.max((*yi - *bi).abs());
            scale = scale.max(bi.abs());
        }
        r / scale.max(T::Real::one())
    }

    #[test]
    fn real_solve_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 80;
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let dl: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
        let du: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lu = TridiagLu::factor(dl.clone(), d.clone(), du.clone());
        let mut x = b.clone();
        lu.solve_in_place(&mut x);
        assert!(residual_norm(&dl, &d, &du, &x, &b) < 1e-12);
    }

    #[test]
    fn complex_shifted_solve() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let n = 60;
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.1..1.0)).collect();
        let z = Complex::new(0.3, 0.05);
        let lu = shifted_factor(&diag, &off, z);
        let mut x = vec![Complex::new(0.0, 0.0); n];
        x[7] = Complex::new(1.0, 0.0);
        let b = x.clone();
        lu.solve_in_place(&mut x);
        let dc: Vec<Complex<f64>> = diag.iter().map(|&v| Complex::new(v, 0.0) - z).collect();
        let oc: Vec<Complex<f64>> = off.iter().map(|&v| Complex::new(v, 0.0)).collect();
        assert!(residual_norm(&oc, &dc, &oc, &x, &b) < 1e-12);
    }

    #[test]
    fn zero_leading_pivot_needs_swap() {
        // [[0,1],[1,1]] x = [1,1] has the exact solution (0, 1)
        let lu = TridiagLu::factor(vec![1.0], vec![0.0, 1.0], vec![1.0]);
        let mut b = vec![1.0, 1.0];
        lu.solve_in_place(&mut b);
        assert_eq!(b, vec![0.0, 1.0]);
    }

    #[test]
    fn exact_eigenvalue_shift_stays_finite() {
        // shift 1 is an eigenvalue of [[0,1],[1,0]]; the floored pivot keeps
        // the solve finite and enormous, which is what inverse iteration wants
        let lu = shifted_factor(&[0.0, 0.0], &[1.0], 1.0f64);
        let mut b = vec![1.0, 0.0];
        lu.solve_in_place(&mut b);
        assert!(b.iter().all(|x| x.is_finite()));
        assert!(b[0].abs() > 1e10);
    }

    #[test]
    fn single_entry() {
        let lu = TridiagLu::factor(Vec::<f64>::new(), vec![4.0], Vec::new());
        let mut b = vec![2.0];
        lu.solve_in_place(&mut b);
        assert_eq!(b[0], 0.5);
    }
}
