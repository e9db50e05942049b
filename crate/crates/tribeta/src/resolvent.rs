//! Resolvent-side machinery on the normalized scale: every function here
//! works with M = A / sqrt(2n), whose spectrum fills [-1, 1].
//!
//! Contents: spectral-domain grids with their admissibility rules, the
//! Stieltjes transform from spectral data and from the Hermite ratio, entries
//! and diagonals of the zero-temperature resolvent, stratified audits of the
//! entry bounds, the Neumann expansion of the resolvent trace around zero
//! temperature, and the Schur-complement consistency residual.

use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::float::Scalar;
use crate::linalg::{shifted_factor, TridiagLu};
use crate::models::{
    asymmetric_zero_temperature, build_asymmetric, build_symmetric, fluctuation_delta,
    EnsembleParams, TridiagSym,
};
use crate::rng::RngStream;
use crate::special::hermite_ratio_complex;
use crate::stats::median;
use crate::{Cplx, Real};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Lower edge rule for the admissible imaginary parts of a domain grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaFloor {
    /// eta >= n^(-1 + epsilon)
    InverseN,
    /// eta >= n^(-1/2 + epsilon)
    InverseSqrtN,
}

impl EtaFloor {
    pub fn value(self, n: usize, epsilon: f64) -> f64 {
        let nf = n as f64;
        match self {
            EtaFloor::InverseN => nf.powf(-1.0 + epsilon),
            EtaFloor::InverseSqrtN => nf.powf(-0.5 + epsilon),
        }
    }
}

/// Admissible set of spectral parameters: points E + i eta with
/// |E| <= 1 - delta, eta above the chosen floor, and |z| <= 10.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDomain {
    pub epsilon: f64,
    pub delta: f64,
    pub grid: Vec<Cplx>,
}

impl SpectralDomain {
    /// Rectangular default grid: `n_e` energies linear in [-1+delta, 1-delta]
    /// crossed with `n_eta` scales geometric from the floor up to 0.1.
    pub fn build(
        n: usize,
        epsilon: f64,
        delta: f64,
        n_e: usize,
        n_eta: usize,
        floor: EtaFloor,
    ) -> Result<Self> {
        check_eps_delta(epsilon, delta)?;
        if n_e < 1 || n_eta < 1 {
            return Err(Error::param("grid", "need at least one point per axis"));
        }
        let lo = floor.value(n, epsilon);
        let hi = 0.1f64;
        if lo >= hi {
            return Err(Error::param(
                "n",
                format!("eta floor {lo:.3e} is not below the 0.1 ceiling; n too small"),
            ));
        }
        let mut grid = Vec::with_capacity(n_e * n_eta);
        for i in 0..n_e {
            let frac = if n_e == 1 { 0.5 } else { i as f64 / (n_e - 1) as f64 };
            let e = (-1.0 + delta) + 2.0 * (1.0 - delta) * frac;
            for j in 0..n_eta {
                let frac_eta = if n_eta == 1 { 0.0 } else { j as f64 / (n_eta - 1) as f64 };
                let eta = lo * (hi / lo).powf(frac_eta);
                grid.push(Cplx::new(e, eta));
            }
        }
        let d = SpectralDomain { epsilon, delta, grid };
        d.validate(n, floor)?;
        Ok(d)
    }

    /// Check every grid point against the admissibility rules.
    pub fn validate(&self, n: usize, floor: EtaFloor) -> Result<()> {
        check_eps_delta(self.epsilon, self.delta)?;
        let lo = floor.value(n, self.epsilon);
        for z in &self.grid {
            if !(z.im >= lo * (1.0 - 1e-12)) {
                return Err(Error::param(
                    "grid",
                    format!("eta {} below the floor {lo:.3e}", z.im),
                ));
            }
            if z.re.abs() > 1.0 - self.delta + 1e-12 {
                return Err(Error::param("grid", format!("|E| too large at {z}")));
            }
            if z.norm() > 10.0 {
                return Err(Error::param("grid", format!("|z| > 10 at {z}")));
            }
        }
        Ok(())
    }
}

fn check_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param("epsilon", format!("need 0 < epsilon < 1/2, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("need 0 < delta < 1, got {delta}")));
    }
    Ok(())
}

/// Stieltjes transform of the weighted spectral measure:
/// sum of w_j / (lambda_j - z). This is the (1,1) resolvent entry of the
/// normalized matrix the spectrum came from.
pub fn stieltjes_from_spectrum<S: Scalar>(sp: &Spectrum<S>, z: Complex<S>) -> Complex<S> {
    let mut acc = Complex::new(S::zero(), S::zero());
    for (&lam, &w) in sp.eigs_scaled.iter().zip(&sp.weights) {
        acc = acc + Complex::new(w, S::zero()) / (Complex::new(lam, S::zero()) - z);
    }
    acc
}

/// Closed form of the zero-temperature Stieltjes transform through the
/// Hermite ratio: s(z) = -2^{3/2} sqrt(n) H_{n-1}(sqrt(2n) z) / H_n(sqrt(2n) z).
pub fn stieltjes_zero_temp_ratio(n: usize, z: Cplx) -> Result<Cplx> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be >= 1"));
    }
    if z.im == 0.0 {
        return Err(Error::param("z", "needs Im z != 0"));
    }
    let arg = z * (2.0 * n as f64).sqrt();
    let ratio = hermite_ratio_complex(n, arg);
    Ok(-ratio * 2.0f64.sqrt() * 2.0 * (n as f64).sqrt())
}

/// Normalized bands of the symmetric zero-temperature matrix.
fn zero_temp_bands(n: usize) -> (Vec<f64>, Vec<f64>) {
    let diag = vec![0.0; n];
    let off = (1..n)
        .map(|k| ((n - k) as f64).sqrt() / (2.0 * (n as f64).sqrt()))
        .collect();
    (diag, off)
}

fn check_upper_z(z: Cplx) -> Result<()> {
    if !(z.im > 0.0) || !z.is_finite() {
        return Err(Error::param("z", format!("needs Im z > 0, got {z}")));
    }
    Ok(())
}

/// One entry of the zero-temperature resolvent (M - z)^{-1} at matrix
/// coordinates k, l in 1..=n, via a banded column solve.
pub fn resolvent_entry_zero_temp(n: usize, k: usize, l: usize, z: Cplx) -> Result<Cplx> {
    if n == 0 || k == 0 || l == 0 || k > n || l > n {
        return Err(Error::param("k", format!("coordinates in 1..={n}, got ({k}, {l})")));
    }
    check_upper_z(z)?;
    let (diag, off) = zero_temp_bands(n);
    let lu = shifted_factor(&diag, &off, z);
    let mut col = vec![Cplx::new(0.0, 0.0); n];
    col[l - 1] = Cplx::new(1.0, 0.0);
    lu.solve_in_place(&mut col);
    Ok(col[k - 1])
}

/// Full diagonal of the zero-temperature resolvent in O(n) by the two-sided
/// continued-fraction recursion.
pub fn resolvent_diag_zero_temp(n: usize, z: Cplx) -> Result<Vec<Cplx>> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be >= 1"));
    }
    check_upper_z(z)?;
    let (diag, off) = zero_temp_bands(n);
    diag_of_resolvent(&diag, &off, z)
}

/// Diagonal of (T - z)^{-1} for a symmetric tridiagonal T given by bands.
fn diag_of_resolvent(diag: &[f64], off: &[f64], z: Cplx) -> Result<Vec<Cplx>> {
    let n = diag.len();
    let one = Cplx::new(1.0, 0.0);
    // left[k]: (k,k) entry of the inverse of the leading k+1 block
    let mut left = vec![Cplx::new(0.0, 0.0); n];
    left[0] = one / (diag[0] - z);
    for k in 1..n {
        let b = off[k - 1];
        left[k] = one / (diag[k] - z - b * b * left[k - 1]);
    }
    let mut right = vec![Cplx::new(0.0, 0.0); n];
    right[n - 1] = one / (diag[n - 1] - z);
    for k in (0..n - 1).rev() {
        let b = off[k];
        right[k] = one / (diag[k] - z - b * b * right[k + 1]);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lpart = if k > 0 {
            let b = off[k - 1];
            b * b * left[k - 1]
        } else {
            Cplx::new(0.0, 0.0)
        };
        let rpart = if k + 1 < n {
            let b = off[k];
            b * b * right[k + 1]
        } else {
            Cplx::new(0.0, 0.0)
        };
        let d = diag[k] - z - lpart - rpart;
        if d.norm() == 0.0 {
            return Err(Error::NumericalFailure {
                message: format!("resolvent diagonal pivot vanished at {k}"),
                residual: 0.0,
            });
        }
        out.push(one / d);
    }
    Ok(out)
}

/// Scaled power sums (1/n) sum_k |R_kk|^p for p = 1..=m of the
/// zero-temperature resolvent diagonal; requires eta at or above the
/// n^(-1/2 + epsilon) floor where the per-power growth stays bounded.
pub fn audit_diag_power_sums(n: usize, z: Cplx, m: usize, epsilon: f64) -> Result<Vec<f64>> {
    if m == 0 || m > 12 {
        return Err(Error::param("m", format!("power range 1..=12, got {m}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param("epsilon", "need 0 < epsilon < 1/2"));
    }
    let floor = EtaFloor::InverseSqrtN.value(n, epsilon);
    if !(z.im >= floor * (1.0 - 1e-12)) {
        return Err(Error::param(
            "z",
            format!("eta {} below the n^(-1/2+eps) floor {floor:.3e}", z.im),
        ));
    }
    let diag = resolvent_diag_zero_temp(n, z)?;
    let mut sums = vec![0.0f64; m];
    for r in &diag {
        let a = r.norm();
        let mut pw = 1.0;
        for s in sums.iter_mut() {
            pw *= a;
            *s += pw;
        }
    }
    Ok(sums.into_iter().map(|s| s / n as f64).collect())
}

/// Worst and typical value of one audited ratio family.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub max_ratio: f64,
    /// (k, l, z) achieving the max; k, l are band labels counted so that
    /// label n is the first matrix row.
    pub argmax: (usize, usize, Cplx),
    /// median ratio of the family, a scale for "the constant in the bound"
    pub fitted_constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropRAudit {
    pub diag: BoundReport,
    pub diag_resonant: BoundReport,
    pub offdiag: BoundReport,
}

struct FamilyAcc {
    ratios: Vec<f64>,
    max: f64,
    argmax: (usize, usize, Cplx),
}

impl FamilyAcc {
    fn new() -> Self {
        FamilyAcc { ratios: Vec::new(), max: 0.0, argmax: (0, 0, Cplx::new(0.0, 0.0)) }
    }
    fn push(&mut self, ratio: f64, k: usize, l: usize, z: Cplx) {
        if ratio > self.max {
            self.max = ratio;
            self.argmax = (k, l, z);
        }
        self.ratios.push(ratio);
    }
    fn report(self) -> BoundReport {
        let fitted = median(&self.ratios);
        BoundReport { max_ratio: self.max, argmax: self.argmax, fitted_constant: fitted }
    }
}

/// Stratified audit of the zero-temperature resolvent entry bounds.
///
/// Probes the diagonal on a label grid crossed with energies
/// {0, +-0.3, +-0.6} and scales {1.05, 2, 4} over the n^(-1/2+epsilon)
/// floor, splitting off the resonant window |sqrt(k) - sqrt(n)|E|| < n^{1/4}
/// where the entry is genuinely larger, and probes near-diagonal pairs at
/// five anchors. Ratios divide the observed |R| by its predicted envelope;
/// a bounded max/median spread over n is the health signal.
pub fn audit_prop_r_bounds(n: usize, epsilon: f64) -> Result<PropRAudit> {
    if n < 50 {
        return Err(Error::param("n", format!("audit needs n >= 50, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.49) {
        return Err(Error::param("epsilon", "need 0 < epsilon < 0.49"));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let floor = EtaFloor::InverseSqrtN.value(n, epsilon);
    let (diag_b, off_b) = zero_temp_bands(n);

    let energies = [0.0, 0.3, -0.3, 0.6, -0.6];
    let mut labels: Vec<usize> = (0..40)
        .map(|i| 1 + i * (n - 1) / 39)
        .collect();
    labels.dedup();

    let mut fam_diag = FamilyAcc::new();
    let mut fam_res = FamilyAcc::new();
    for &e in &energies {
        for mult in [1.05, 2.0, 4.0] {
            let eta = mult * floor;
            let z = Cplx::new(e, eta);
            let lu = shifted_factor(&diag_b, &off_b, z);
            let cap = 1.0 / eta;
            for &kp in &labels {
                let c0 = n - kp; // 0-based matrix coordinate of label kp
                let mut col = vec![Cplx::new(0.0, 0.0); n];
                col[c0] = Cplx::new(1.0, 0.0);
                lu.solve_in_place(&mut col);
                let rkk = col[c0].norm();
                if rkk > cap * (1.0 + 1e-9) {
                    return Err(Error::NumericalFailure {
                        message: format!("|R_kk| above 1/eta at label {kp}, z = {z}"),
                        residual: rkk,
                    });
                }
                let dist = ((kp as f64).sqrt() - nf.sqrt() * e.abs()).abs();
                if dist < nf.powf(0.25) {
                    let ratio = rkk / nf.powf(0.25 - epsilon / 8.0);
                    fam_res.push(ratio, kp, kp, z);
                } else {
                    let ratio = rkk * (1.0 + dist) / (nf.sqrt() * ln_n);
                    fam_diag.push(ratio, kp, kp, z);
                }
            }
        }
    }

    let anchors: Vec<usize> = [1.0, 0.9, 0.7, 0.4, 0.15]
        .iter()
        .map(|f| ((f * nf) as usize).clamp(14, n))
        .collect();
    let seps = [1usize, 2, 3, 5, 8, 12];
    let mut fam_off = FamilyAcc::new();
    for &e in &energies {
        for mult in [1.05, 1.5] {
            let eta = mult * floor;
            let z = Cplx::new(e, eta);
            let lu = shifted_factor(&diag_b, &off_b, z);
            for &lp in &anchors {
                let c0 = n - lp;
                let mut col = vec![Cplx::new(0.0, 0.0); n];
                col[c0] = Cplx::new(1.0, 0.0);
                lu.solve_in_place(&mut col);
                for &s in &seps {
                    if s >= lp {
                        continue;
                    }
                    let kp = lp - s;
                    let rkl = col[n - kp].norm();
                    let kf = kp as f64;
                    let lf = lp as f64;
                    let weight = kf.powf(0.25) * lf.powf(0.25) * (kf.sqrt() - lf.sqrt()).abs();
                    let ratio = rkl * weight / nf.powf(0.5 - epsilon / 8.0);
                    fam_off.push(ratio, kp, lp, z);
                }
            }
        }
    }

    Ok(PropRAudit {
        diag: fam_diag.report(),
        diag_resonant: fam_res.report(),
        offdiag: fam_off.report(),
    })
}

/// Per-order record of the Neumann expansion of the resolvent trace around
/// zero temperature.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    /// normalized trace of the sampled matrix's resolvent
    pub s_exact: Cplx,
    /// partial sum of the expansion through the requested order
    pub s_truncated: Cplx,
    /// term of each order 0..=m; order 0 is the zero-temperature trace
    pub per_order_terms: Vec<Cplx>,
    pub remainder: Cplx,
}

/// Expand the normalized resolvent trace of a fresh sample at inverse
/// temperature `beta` around the zero-temperature operator, through order
/// `m_order`, and compare with the exact trace of the same sample.
pub fn expansion_trace(
    n: usize,
    beta: f64,
    m_order: usize,
    z: Cplx,
    rng: &mut RngStream,
) -> Result<ExpansionReport> {
    if n < 2 {
        return Err(Error::param("n", "expansion needs n >= 2"));
    }
    if m_order > 40 {
        return Err(Error::param("m_order", "order capped at 40"));
    }
    check_upper_z(z)?;
    let params = EnsembleParams::new(n, beta)?;
    let (sym, chi) = build_symmetric(&params, rng)?;
    let asym = build_asymmetric(&params, &chi, &sym.diag)?;
    let asym_inf = asymmetric_zero_temperature(&params);
    let delta = fluctuation_delta(&asym, &asym_inf)?;

    let scale = 1.0 / (2.0 * n as f64).sqrt();
    let sym_diag: Vec<f64> = sym.diag.iter().map(|x| x * scale).collect();
    let sym_off: Vec<f64> = sym.offdiag.iter().map(|x| x * scale).collect();
    let lu_sym = shifted_factor(&sym_diag, &sym_off, z);

    // the sampled trace; the similarity transform preserves it, so the
    // symmetric bands are the stable route
    let zero = Cplx::new(0.0, 0.0);
    let one = Cplx::new(1.0, 0.0);
    let mut s_exact = zero;
    let mut col = vec![zero; n];
    for j in 0..n {
        col.fill(zero);
        col[j] = one;
        lu_sym.solve_in_place(&mut col);
        s_exact += col[j];
    }
    s_exact /= n as f64;

    // normalized asymmetric zero-temperature bands: upper 1/2, diagonal 0,
    // lower (n-k)/(2n)
    let dl: Vec<Cplx> = (1..n)
        .map(|k| Cplx::new((n - k) as f64 / (2.0 * n as f64), 0.0))
        .collect();
    let du = vec![Cplx::new(0.5, 0.0); n - 1];
    let d = vec![-z; n];
    let lu_inf = TridiagLu::factor(dl, d, du);

    let mut terms = vec![zero; m_order + 1];
    let mut w = vec![zero; n];
    let mut tmp = vec![zero; n];
    for j in 0..n {
        w.fill(zero);
        w[j] = one;
        lu_inf.solve_in_place(&mut w);
        terms[0] += w[j];
        let mut sign = -1.0;
        for term in terms.iter_mut().skip(1) {
            delta.apply(&w, &mut tmp);
            lu_inf.solve_in_place(&mut tmp);
            std::mem::swap(&mut w, &mut tmp);
            *term += w[j] * sign;
            sign = -sign;
        }
    }
    for t in terms.iter_mut() {
        *t /= n as f64;
    }
    let s_truncated = terms.iter().sum::<Cplx>();
    Ok(ExpansionReport {
        s_exact,
        s_truncated,
        per_order_terms: terms,
        remainder: s_exact - s_truncated,
    })
}

/// Residual of the Schur-complement identity for the (1,1) resolvent entry
/// of the normalized matrix M = A / sqrt(2n):
/// R_11 = 1 / (M_11 - z - M_12^2 * R^(1)_11), with R^(1) the resolvent of
/// the trailing minor on the same scale.
pub fn schur_residual(m: &TridiagSym<Real>, z: Cplx) -> Result<f64> {
    if m.n() < 2 {
        return Err(Error::param("m", "needs n >= 2"));
    }
    check_upper_z(z)?;
    let n = m.n();
    let scale = 1.0 / (2.0 * n as f64).sqrt();
    let diag: Vec<f64> = m.diag.iter().map(|x| x * scale).collect();
    let off: Vec<f64> = m.offdiag.iter().map(|x| x * scale).collect();

    let r11 = diag_of_resolvent(&diag, &off, z)?[0];
    let minor = diag_of_resolvent(&diag[1..], &off[1..], z)?[0];
    let b = Cplx::new(off[0], 0.0);
    let rhs = Cplx::new(1.0, 0.0) / (diag[0] - z - b * b * minor);
    Ok((r11 - rhs).norm())
}
