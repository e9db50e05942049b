//! The tridiagonal matrix models: the symmetric sample A, its asymmetric
//! similarity transform A-tilde, the zero-temperature limit, the conjugation
//! weights d_i, and the fluctuation matrix Delta.

use crate::error::{Error, Result};
use crate::float::Scalar;
use crate::rng::{sample_chi, sample_gaussian, RngStream};
use crate::scaled::ScaledReal;

/// Matrix dimension n and inverse temperature beta.
///
/// The model is defined for beta >= 1; smaller positive beta is accepted and
/// flagged as extrapolation via [`EnsembleParams::is_extrapolation`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleParams<S> {
    pub n: usize,
    pub beta: S,
}

impl<S: Scalar> EnsembleParams<S> {
    pub fn new(n: usize, beta: S) -> Result<Self> {
        if n < 1 {
            return Err(Error::param("n", "dimension must be >= 1"));
        }
        if !(beta > S::zero()) || !beta.is_finite() {
            return Err(Error::param("beta", format!("must be finite and > 0, got {beta}")));
        }
        Ok(EnsembleParams { n, beta })
    }

    /// True when beta is below the model's defining range beta >= 1.
    pub fn is_extrapolation(&self) -> bool {
        self.beta < S::one()
    }
}

/// Symmetric tridiagonal matrix: diagonal and positive off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagSym<S> {
    pub diag: Vec<S>,
    pub offdiag: Vec<S>,
}

impl<S: Scalar> TridiagSym<S> {
    pub fn new(diag: Vec<S>, offdiag: Vec<S>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "band lengths {} / {} do not form a tridiagonal matrix",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(TridiagSym { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Half-width of the Gershgorin interval containing the spectrum.
    pub fn gershgorin_radius(&self) -> S {
        let (lo, hi) = self.gershgorin_bounds();
        (hi - lo) * S::c(0.5)
    }

    pub fn gershgorin_bounds(&self) -> (S, S) {
        let n = self.n();
        let mut lo = S::infinity();
        let mut hi = S::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { S::zero() };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { S::zero() };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Bottom-right principal minor of dimension n-1.
    pub fn minor(&self) -> Result<TridiagSym<S>> {
        if self.n() < 2 {
            return Err(Error::InvalidInput("minor of a 1x1 matrix".into()));
        }
        TridiagSym::new(self.diag[1..].to_vec(), self.offdiag[1..].to_vec())
    }
}

/// Asymmetric similarity transform of the symmetric model: constant upper
/// band sqrt(beta n)/sqrt(2 beta), chi-squared lower band.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagAsym<S> {
    pub diag: Vec<S>,
    pub upper: Vec<S>,
    pub lower: Vec<S>,
}

impl<S: Scalar> TridiagAsym<S> {
    pub fn n(&self) -> usize {
        self.diag.len()
    }
}

/// Conjugation weights d_i = (beta n)^{(1-i)/2} prod_{j<i} chi_{(n-j) beta},
/// kept in log scale: the plain product overflows by n ~ a few hundred.
#[derive(Clone, Debug)]
pub struct ConjugationWeights<S> {
    pub d: Vec<ScaledReal<S>>,
}

impl<S: Scalar> ConjugationWeights<S> {
    /// Ratio d_k/d_l as a plain scalar (1-based indices).
    pub fn ratio(&self, k: usize, l: usize) -> S {
        self.d[k - 1].ratio_value(&self.d[l - 1])
    }
}

/// Bidiagonal fluctuation matrix Delta = (A-tilde_beta - A-tilde_inf)/sqrt(2n).
/// The upper band cancels exactly and is not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BidiagDelta<S> {
    pub diag: Vec<S>,
    pub sub: Vec<S>,
}

impl<S: Scalar> BidiagDelta<S> {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Largest entry magnitude over both bands.
    pub fn max_abs(&self) -> S {
        let d = self.diag.iter().fold(S::zero(), |a, x| a.max(x.abs()));
        self.sub.iter().fold(d, |a, x| a.max(x.abs()))
    }

    /// y = Delta x.
    pub fn apply<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + std::ops::Mul<S, Output = T> + std::ops::Add<Output = T>,
    {
        let n = self.n();
        y[0] = x[0] * self.diag[0];
        for i in 1..n {
            y[i] = x[i] * self.diag[i] + x[i - 1] * self.sub[i - 1];
        }
    }
}

/// Sample the symmetric model: diag N(0,2)/sqrt(2 beta), offdiag[k] a chi draw
/// with (n-1-k) beta degrees of freedom (0-based k) over sqrt(2 beta).
///
/// The raw chi draws are returned for reuse by [`build_asymmetric`] and
/// [`conjugation_weights`], which must see the same randomness.
pub fn build_symmetric<S: Scalar>(
    params: &EnsembleParams<S>,
    rng: &mut RngStream,
) -> Result<(TridiagSym<S>, Vec<S>)> {
    let n = params.n;
    let scale = (S::c(2.0) * params.beta).sqrt().recip();
    let mut diag = Vec::with_capacity(n);
    for _ in 0..n {
        diag.push(sample_gaussian(S::zero(), S::c(2.0), rng)? * scale);
    }
    let mut chi_draws = Vec::with_capacity(n.saturating_sub(1));
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let dof = S::of(n - k) * params.beta;
        let x = sample_chi(dof, rng)?;
        chi_draws.push(x);
        offdiag.push(x * scale);
    }
    Ok((TridiagSym { diag, offdiag }, chi_draws))
}

/// The zero-temperature matrix: zero diagonal, offdiag[k] = sqrt(n-1-k)/sqrt(2)
/// (0-based k). Its raw eigenvalues are exactly the zeros of the n-th
/// physicists' Hermite polynomial.
pub fn build_zero_temperature<S: Scalar>(n: usize) -> Result<TridiagSym<S>> {
    if n < 1 {
        return Err(Error::param("n", "dimension must be >= 1"));
    }
    let diag = vec![S::zero(); n];
    let offdiag = (1..n)
        .map(|k| (S::of(n - k) * S::c(0.5)).sqrt())
        .collect();
    Ok(TridiagSym { diag, offdiag })
}

/// Assemble the asymmetric model from the draws of a [`build_symmetric`] call:
/// same diagonal, constant upper band, chi-squared lower band.
pub fn build_asymmetric<S: Scalar>(
    params: &EnsembleParams<S>,
    chi_draws: &[S],
    sym_diag: &[S],
) -> Result<TridiagAsym<S>> {
    let n = params.n;
    if chi_draws.len() + 1 != n || sym_diag.len() != n {
        return Err(Error::InvalidInput(format!(
            "draw lengths {}/{} do not match n = {n}",
            chi_draws.len(),
            sym_diag.len()
        )));
    }
    let sqrt_bn = (params.beta * S::of(n)).sqrt();
    let scale = (S::c(2.0) * params.beta).sqrt();
    let upper = vec![sqrt_bn / scale; n - 1];
    let lower = chi_draws
        .iter()
        .map(|&x| x * x / (sqrt_bn * scale))
        .collect();
    Ok(TridiagAsym {
        diag: sym_diag.to_vec(),
        upper,
        lower,
    })
}

/// Asymmetric matrix at zero temperature: every chi-squared entry replaced by
/// its mean (n-k) beta, so it is the entrywise expectation of the random band.
pub fn asymmetric_zero_temperature<S: Scalar>(params: &EnsembleParams<S>) -> TridiagAsym<S> {
    let n = params.n;
    let sqrt_bn = (params.beta * S::of(n)).sqrt();
    let scale = (S::c(2.0) * params.beta).sqrt();
    let upper = vec![sqrt_bn / scale; n.saturating_sub(1)];
    let lower = (1..n)
        .map(|k| S::of(n - k) * params.beta / (sqrt_bn * scale))
        .collect();
    TridiagAsym {
        diag: vec![S::zero(); n],
        upper,
        lower,
    }
}

/// Conjugation weights built from the same chi draws as the symmetric sample.
pub fn conjugation_weights<S: Scalar>(
    params: &EnsembleParams<S>,
    chi_draws: &[S],
) -> Result<ConjugationWeights<S>> {
    let n = params.n;
    if chi_draws.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "need n-1 = {} chi draws, got {}",
            n - 1,
            chi_draws.len()
        )));
    }
    if chi_draws.iter().any(|x| !(*x > S::zero())) {
        return Err(Error::InvalidInput("nonpositive chi draw".into()));
    }
    let ln_bn = (params.beta * S::of(n)).ln();
    let mut d = Vec::with_capacity(n);
    let mut ln = S::zero();
    d.push(ScaledReal::one());
    for i in 2..=n {
        // d_i = (beta n)^{(1-i)/2} * prod_{j<i} chi_j
        ln += chi_draws[i - 2].ln();
        let exponent = S::c(0.5) * (S::one() - S::of(i));
        d.push(ScaledReal::from_sign_ln(1, ln + exponent * ln_bn));
    }
    Ok(ConjugationWeights { d })
}

/// Delta = (A-tilde_beta - A-tilde_inf)/sqrt(2n) from matched builds. The
/// constant upper bands cancel exactly, leaving a bidiagonal matrix.
pub fn fluctuation_delta<S: Scalar>(
    asym_beta: &TridiagAsym<S>,
    asym_inf: &TridiagAsym<S>,
) -> Result<BidiagDelta<S>> {
    let n = asym_beta.n();
    if asym_inf.n() != n {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch {n} vs {}",
            asym_inf.n()
        )));
    }
    let scale = (S::c(2.0) * S::of(n)).sqrt().recip();
    let diag = asym_beta
        .diag
        .iter()
        .zip(&asym_inf.diag)
        .map(|(&a, &b)| (a - b) * scale)
        .collect();
    let sub = asym_beta
        .lower
        .iter()
        .zip(&asym_inf.lower)
        .map(|(&a, &b)| (a - b) * scale)
        .collect();
    Ok(BidiagDelta { diag, sub })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn params(n: usize, beta: f64) -> EnsembleParams<f64> {
        EnsembleParams::new(n, beta).unwrap()
    }

    #[test]
    fn single_entry_variance() {
        // n=1: the matrix is the scalar N(0,2)/sqrt(2 beta), variance 1/beta
        let beta = 2.0;
        let p = params(1, beta);
        let mut rng = RngStream::new(5, 0);
        let trials = 100_000usize;
        let mut sumsq = 0.0;
        for _ in 0..trials {
            let (m, _) = build_symmetric(&p, &mut rng).unwrap();
            sumsq += m.diag[0] * m.diag[0];
        }
        let var = sumsq / trials as f64;
        assert!((var - 1.0 / beta).abs() < 0.02 / beta, "var {var}");
    }

    #[test]
    fn offdiag_second_moment() {
        // n=3, beta=2: dof pattern (4, 2); E[offdiag[0]^2] = 4/(2 beta) = 1
        let p = params(3, 2.0);
        let mut rng = RngStream::new(17, 0);
        let trials = 100_000usize;
        let (mut m0, mut m1) = (0.0, 0.0);
        for _ in 0..trials {
            let (m, _) = build_symmetric(&p, &mut rng).unwrap();
            m0 += m.offdiag[0] * m.offdiag[0];
            m1 += m.offdiag[1] * m.offdiag[1];
        }
        let t = trials as f64;
        assert!((m0 / t - 1.0).abs() < 0.02, "mean offdiag[0]^2 = {}", m0 / t);
        assert!((m1 / t - 0.5).abs() < 0.01, "mean offdiag[1]^2 = {}", m1 / t);
    }

    #[test]
    fn zero_temperature_bands() {
        let m = build_zero_temperature::<f64>(2).unwrap();
        assert_eq!(m.diag, vec![0.0, 0.0]);
        assert!((m.offdiag[0] - 0.5f64.sqrt()).abs() < 1e-15);

        let m5 = build_zero_temperature::<f64>(5).unwrap();
        let want = [2.0f64.sqrt(), 1.5f64.sqrt(), 1.0, 0.5f64.sqrt()];
        for (a, b) in m5.offdiag.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn asymmetric_upper_band_constant() {
        // n=8, beta=2: sqrt(beta n)/sqrt(2 beta) = sqrt(n/2) = 2
        let p = params(8, 2.0);
        let mut rng = RngStream::new(2, 0);
        let (m, chi) = build_symmetric(&p, &mut rng).unwrap();
        let a = build_asymmetric(&p, &chi, &m.diag).unwrap();
        for &u in &a.upper {
            assert!((u - 2.0).abs() < 1e-14);
        }
        assert_eq!(a.diag, m.diag);
    }

    #[test]
    fn conjugation_identity_entrywise() {
        // A-tilde = D A D^{-1}: upper_k = a_k * d_k/d_{k+1}, lower_k = a_k * d_{k+1}/d_k
        let p = params(20, 1.5);
        let mut rng = RngStream::new(9, 3);
        let (m, chi) = build_symmetric(&p, &mut rng).unwrap();
        let a = build_asymmetric(&p, &chi, &m.diag).unwrap();
        let w = conjugation_weights(&p, &chi).unwrap();
        for k in 1..p.n {
            let up = m.offdiag[k - 1] * w.ratio(k, k + 1);
            let lo = m.offdiag[k - 1] * w.ratio(k + 1, k);
            assert!(
                (up - a.upper[k - 1]).abs() <= 1e-12 * a.upper[k - 1].abs(),
                "upper {k}"
            );
            assert!(
                (lo - a.lower[k - 1]).abs() <= 1e-12 * a.lower[k - 1].abs(),
                "lower {k}"
            );
        }
    }

    #[test]
    fn weights_base_cases() {
        let p = params(2, 1.0);
        let chi = vec![1.37];
        let w = conjugation_weights(&p, &chi).unwrap();
        assert_eq!(w.d[0].value(), 1.0);
        // d_2 = chi/sqrt(beta n) = x/sqrt(2)
        assert!((w.d[1].value() - 1.37 / 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn weights_stay_finite_where_plain_product_overflows() {
        let p = params(1000, 1.0);
        let mut rng = RngStream::new(4, 0);
        let (_, chi) = build_symmetric(&p, &mut rng).unwrap();
        let naive = chi.iter().product::<f64>();
        assert!(!naive.is_finite(), "plain chi product should overflow");
        let w = conjugation_weights(&p, &chi).unwrap();
        let ln_dn = w.d[p.n - 1].ln_abs();
        assert!(ln_dn.is_finite() && ln_dn.abs() < 1e4, "log d_n = {ln_dn}");
    }

    #[test]
    fn delta_upper_band_cancels_and_mean_limit() {
        let p = params(50, 2.0);
        let mut rng = RngStream::new(21, 0);
        let (m, chi) = build_symmetric(&p, &mut rng).unwrap();
        let a = build_asymmetric(&p, &chi, &m.diag).unwrap();
        let a_inf = asymmetric_zero_temperature(&p);
        // the deterministic upper bands are identical, so Delta needs no upper band
        for (x, y) in a.upper.iter().zip(&a_inf.upper) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        // chi^2 draws replaced by their means reproduce a_inf exactly -> Delta = 0
        let surrogate_chi: Vec<f64> = (1..p.n).map(|k| ((p.n - k) as f64 * p.beta).sqrt()).collect();
        let a_mean = build_asymmetric(&p, &surrogate_chi, &vec![0.0; p.n]).unwrap();
        let d = fluctuation_delta(&a_mean, &a_inf).unwrap();
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn delta_subdiagonal_variance() {
        // Var(Delta_sub[0]) = (n-1)/(2 beta n^2)
        let n = 500;
        let beta = 2.0;
        let p = params(n, beta);
        let a_inf = asymmetric_zero_temperature(&p);
        let trials = 10_000usize;
        let mut rng = RngStream::new(31, 0);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..trials {
            let (m, chi) = build_symmetric(&p, &mut rng).unwrap();
            let a = build_asymmetric(&p, &chi, &m.diag).unwrap();
            let d = fluctuation_delta(&a, &a_inf).unwrap();
            sum += d.sub[0];
            sumsq += d.sub[0] * d.sub[0];
        }
        let t = trials as f64;
        let var = sumsq / t - (sum / t) * (sum / t);
        let want = (n as f64 - 1.0) / (2.0 * beta * (n * n) as f64);
        assert!(
            (var - want).abs() < 0.05 * want,
            "var {var} vs {want} (ratio {})",
            var / want
        );
    }

    #[test]
    fn delta_max_entry_scale() {
        // max |Delta| < n^{-0.3} in >= 99/100 samples at n=1000, beta=1
        let p = params(1000, 1.0);
        let a_inf = asymmetric_zero_temperature(&p);
        let bound = (p.n as f64).powf(-0.3);
        let mut ok = 0;
        for t in 0..100u64 {
            let mut rng = RngStream::new(77, t);
            let (m, chi) = build_symmetric(&p, &mut rng).unwrap();
            let a = build_asymmetric(&p, &chi, &m.diag).unwrap();
            let d = fluctuation_delta(&a, &a_inf).unwrap();
            if d.max_abs() < bound {
                ok += 1;
            }
        }
        assert!(ok >= 99, "only {ok}/100 under the bound");
    }

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::<f64>::new(0, 1.0).is_err());
        assert!(EnsembleParams::new(5, 0.0).is_err());
        assert!(EnsembleParams::new(5, -1.0).is_err());
        assert!(params(5, 0.5).is_extrapolation());
        assert!(!params(5, 1.0).is_extrapolation());
    }
}
