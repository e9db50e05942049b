//! Symmetric tridiagonal eigensolver: Sturm counts, bisection eigenvalues,
//! inverse-iteration eigenvectors, and the scaled spectral measure.

use crate::error::{Error, Result};
use crate::float::Scalar;
use crate::linalg::{shifted_factor, tridiag_apply};
use crate::models::TridiagSym;
use num_complex::ComplexFloat;
use num_traits::Float;
use serde::Serialize;

/// Eigenvalues on the working scale (raw / sqrt(2n)) plus spectral weights:
/// the squared first components of the normalized eigenvectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum<S> {
    pub eigs_scaled: Vec<S>,
    pub weights: Vec<S>,
}

fn check_finite<S: Scalar>(m: &TridiagSym<S>) -> Result<()> {
    if m.diag.iter().chain(m.offdiag.iter()).all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

fn pivot_floor<S: Scalar>(m: &TridiagSym<S>) -> S {
    let b2 = m
        .offdiag
        .iter()
        .fold(S::one(), |acc, b| acc.max(*b * *b));
    S::min_positive_value() * b2
}

/// Number of eigenvalues below `x` (ties at machine precision may land on
/// either side). Entries must be finite.
pub fn sturm_count<S: Scalar>(m: &TridiagSym<S>, x: S) -> usize {
    let pivmin = pivot_floor(m);
    let mut count = 0usize;
    let mut q = m.diag[0] - x;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q <= S::zero() {
        count += 1;
    }
    for i in 1..m.n() {
        let b = m.offdiag[i - 1];
        q = m.diag[i] - x - b * b / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q <= S::zero() {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of the raw matrix, ascending, by Sturm bisection.
///
/// `tol` is relative: the bisection stops once brackets are narrower than
/// `tol` times the Gershgorin span. Exact zeros on the off-diagonal split the
/// matrix into independent blocks which are solved recursively.
pub fn eigenvalues<S: Scalar>(m: &TridiagSym<S>, tol: S) -> Result<Vec<S>> {
    check_finite(m)?;
    if !(tol > S::zero()) || !tol.is_finite() {
        return Err(Error::param("tol", format!("must be finite and > 0, got {tol}")));
    }
    if let Some(p) = m.offdiag.iter().position(|b| *b == S::zero()) {
        let left = TridiagSym::new(m.diag[..=p].to_vec(), m.offdiag[..p].to_vec())?;
        let right = TridiagSym::new(m.diag[p + 1..].to_vec(), m.offdiag[p + 1..].to_vec())?;
        let mut all = eigenvalues(&left, tol)?;
        all.extend(eigenvalues(&right, tol)?);
        all.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        return Ok(all);
    }
    let n = m.n();
    if n == 1 {
        return Ok(vec![m.diag[0]]);
    }
    let (glo, ghi) = m.gershgorin_bounds();
    let span = (ghi - glo).max(S::epsilon() * (S::one() + glo.abs().max(ghi.abs())));
    let abs_tol = tol * span;
    let pad = (abs_tol + S::epsilon() * span) * S::c(2.0);
    let lo0 = glo - pad;
    let hi0 = ghi + pad;

    let mut out = Vec::with_capacity(n);
    let mut lo_start = lo0;
    for j in 0..n {
        let mut lo = lo_start;
        let mut hi = hi0;
        while hi - lo > abs_tol {
            let mid = lo + (hi - lo) * S::c(0.5);
            if mid <= lo || mid >= hi {
                break; // interval hit float resolution
            }
            if sturm_count(m, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push((lo + hi) * S::c(0.5));
        // eigenvalues come out ascending, so later searches can skip below lo
        lo_start = lo;
    }
    Ok(out)
}

fn inverse_iterate<S>(m: &TridiagSym<S>, lambda: S, ortho: &[Vec<S>]) -> Result<Vec<S>>
where
    S: Scalar + ComplexFloat<Real = S>,
{
    let n = m.n();
    if n == 1 {
        return Ok(vec![S::one()]);
    }
    let lu = shifted_factor(&m.diag, &m.offdiag, lambda);
    let (glo, ghi) = m.gershgorin_bounds();
    let norm_bound = Float::abs(glo).max(Float::abs(ghi)).max(S::one());
    // slack above pure roundoff: the shift itself usually carries bisection
    // error ~1e-12 relative, which floors the attainable residual
    let thresh = (S::c(100.0) * S::epsilon() + S::c(1e-11)) * norm_bound;

    // deterministic start so spectra are reproducible bit for bit
    let mut seed = S::c(0.70710678118654752);
    let mut v: Vec<S> = (0..n)
        .map(|_| {
            seed = Float::fract(seed * S::c(997.0) + S::c(0.12345));
            seed - S::c(0.5)
        })
        .collect();

    let shifted_d: Vec<S> = m.diag.iter().map(|&x| x - lambda).collect();
    let mut res = S::infinity();
    for _ in 0..10 {
        lu.solve_in_place(&mut v);
        for q in ortho {
            let dot: S = v.iter().zip(q).map(|(&a, &b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * *qi;
            }
        }
        let sumsq: S = v.iter().map(|&x| x * x).sum();
        let nrm = Float::sqrt(sumsq);
        if !(nrm > S::zero()) || !Float::is_finite(nrm) {
            return Err(Error::NumericalFailure {
                message: "inverse iteration collapsed".into(),
                residual: f64::INFINITY,
            });
        }
        for x in v.iter_mut() {
            *x = *x / nrm;
        }
        let mut r = vec![S::zero(); n];
        tridiag_apply(&m.offdiag, &shifted_d, &m.offdiag, &v, &mut r);
        res = r.iter().fold(S::zero(), |a, x| a.max(Float::abs(*x)));
        if res < thresh {
            let flip = v
                .iter()
                .find(|x| Float::abs(**x) > S::c(10.0) * S::epsilon())
                .is_some_and(|x| *x < S::zero());
            if flip {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            return Ok(v);
        }
    }
    Err(Error::NumericalFailure {
        message: format!("inverse iteration did not converge at shift {lambda}"),
        residual: res.to_f64().unwrap_or(f64::NAN),
    })
}

/// Normalized eigenvector for an eigenvalue computed to full precision.
/// Sign convention: the first component of visible size is positive.
pub fn eigenvector<S>(m: &TridiagSym<S>, lambda: S) -> Result<Vec<S>>
where
    S: Scalar + ComplexFloat<Real = S>,
{
    check_finite(m)?;
    if !Float::is_finite(lambda) {
        return Err(Error::param("lambda", "must be finite"));
    }
    inverse_iterate(m, lambda, &[])
}

/// Full scaled spectral data: eigenvalues divided by sqrt(2n) and the squared
/// first eigenvector components. Near-degenerate eigenvalues are handled by
/// orthogonalizing within their cluster.
pub fn spectrum<S>(m: &TridiagSym<S>) -> Result<Spectrum<S>>
where
    S: Scalar + ComplexFloat<Real = S>,
{
    check_finite(m)?;
    let n = m.n();
    let tol = S::c(1e-12);
    let raw = eigenvalues(m, tol)?;
    let scale = Float::sqrt(S::c(2.0) * S::of(n));
    let (glo, ghi) = m.gershgorin_bounds();
    let span = (ghi - glo).max(S::one());
    let cluster_gap = span * tol * S::c(1e3);

    let mut weights = Vec::with_capacity(n);
    let mut cluster: Vec<Vec<S>> = Vec::new();
    for (j, &lam) in raw.iter().enumerate() {
        if j > 0 && lam - raw[j - 1] > cluster_gap {
            cluster.clear();
        }
        let v = inverse_iterate(m, lam, &cluster)?;
        weights.push(v[0] * v[0]);
        cluster.push(v);
    }
    Ok(Spectrum {
        eigs_scaled: raw.iter().map(|&x| x / scale).collect(),
        weights,
    })
}
