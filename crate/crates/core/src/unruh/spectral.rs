//! Stable transport of diagonal Rindler sector states.
//!
//! V maps |n,n⟩_B to the joint eigenvector of V a^{I†}a^I V⁻¹ with eigenvalue
//! n inside the diagonal subspace span{|k,k⟩}. That operator is tridiagonal
//! there, so the images can be obtained from a symmetric eigensolve instead
//! of by repeated raising, which loses all precision for n of a few dozen.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::params::{Normalization, Sector, TransportSettings};
use super::transport::bogoliubov_image;
use crate::error::{Error, Result};
use crate::operator::OperatorPolynomial;
use crate::state::FockState;

/// Cap large enough to hold V|n,n⟩_B for every n ≤ `n_max` to double precision.
pub fn spectral_working_cap(epsilon: f64, n_max: u32) -> u32 {
    let x = epsilon * epsilon;
    let spread = 2.5 * (f64::from(n_max) + 1.0) * (1.0 + x) / (1.0 - x);
    let decay = if epsilon > 0.0 {
        (1e-30f64).ln() / (2.0 * epsilon.ln())
    } else {
        0.0
    };
    (spread + decay).ceil() as u32 + 8
}

/// Restriction of `op` to span{|k,k⟩ : k ≤ cap}; `op` must preserve that span.
fn diagonal_block(sector: &Sector, op: &OperatorPolynomial, cap: u32) -> Result<DMatrix<f64>> {
    let modes = sector.minkowski_modes();
    let dim = cap as usize + 1;
    let mut mat = DMatrix::zeros(dim, dim);
    for k in 0..=cap {
        let col = FockState::basis(&modes, cap, &[k, k])?
            .with_prune_threshold(0.0)
            .apply_polynomial(op)?;
        for (occ, a) in col.amplitudes() {
            if occ[0] != occ[1] {
                return Err(Error::config("operator leaves the diagonal subspace"));
            }
            mat[(occ[0] as usize, k as usize)] = a.re;
        }
    }
    Ok(mat)
}

/// V Σ_n c_n |n,n⟩_B on (Ψ, Ψ′), computed at cap `work_cap`.
///
/// Eigenvectors are phased so that V|0,0⟩_B has a positive vacuum amplitude
/// and V a^{I†}a^{II†} V⁻¹ maps V|n−1,n−1⟩_B onto +n V|n,n⟩_B. Fails with a
/// precision error when the cap is too small for the largest n requested.
pub fn transport_diagonal_spectral(
    sector: &Sector,
    rindler_coeffs: &[f64],
    work_cap: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    sector
        .params
        .check_cap(settings.epsilon_max, settings.tolerance)?;
    let n_max = rindler_coeffs.len().saturating_sub(1) as u32;
    if work_cap < n_max {
        return Err(Error::Precision {
            message: "working cap below the largest transported occupation".into(),
            required_truncation: Some(spectral_working_cap(sector.epsilon(), n_max)),
        });
    }
    let [r1, r2] = sector.rindler_modes();
    let unitary = Normalization::Unitary;
    let number = bogoliubov_image(&OperatorPolynomial::number(r1), unitary)?;
    let raise = bogoliubov_image(
        &(OperatorPolynomial::create(r1) * OperatorPolynomial::create(r2)),
        unitary,
    )?;

    let h = diagonal_block(sector, &number, work_cap)?;
    let h = (&h + h.transpose()) * 0.5;
    let r = diagonal_block(sector, &raise, work_cap)?;
    let eig = SymmetricEigen::new(h);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let dim = work_cap as usize + 1;
    let mut psi = DVector::<f64>::zeros(dim);
    let mut prev: Option<DVector<f64>> = None;
    for (n, &c) in rindler_coeffs.iter().enumerate() {
        let idx = order[n];
        let lambda = eig.eigenvalues[idx];
        let mut v: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        if (lambda - n as f64).abs() > 1e-6 * (1.0 + n as f64) {
            return Err(Error::Precision {
                message: format!(
                    "eigenvalue {lambda} for n = {n} not resolved at working cap {work_cap}"
                ),
                required_truncation: Some(
                    spectral_working_cap(sector.epsilon(), n_max).max(work_cap * 2),
                ),
            });
        }
        let sign = match &prev {
            None => v[0],
            Some(p) => v.dot(&(&r * p)),
        };
        if sign < 0.0 {
            v = -v;
        }
        psi += &v * c;
        prev = Some(v);
    }

    let modes = sector.minkowski_modes();
    let prune = settings.prune_threshold;
    let amps = psi
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() > 0.0)
        .map(|(k, a)| (vec![k as u32, k as u32], Complex64::new(*a, 0.0)));
    Ok(FockState::from_amplitudes(&modes, work_cap, amps)?.with_prune_threshold(prune))
}

/// Transports the whole thermal sector √(1−ε²) Σ_{n≤N} ε^n |n,n⟩_B, i.e.
/// what the inertial observer sees of a frequency nobody measured. The
/// omitted series weight ε^{2(N+1)} is carried as truncation loss.
pub fn transport_thermal_sector(
    sector: &Sector,
    series_cutoff: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    let eps = sector.epsilon();
    let norm = (1.0 - eps * eps).sqrt();
    let coeffs: Vec<f64> = (0..=series_cutoff)
        .scan(norm, |v, _| {
            let out = *v;
            *v *= eps;
            Some(out)
        })
        .collect();
    let cap = spectral_working_cap(eps, series_cutoff);
    let tail = eps.powf(2.0 * (f64::from(series_cutoff) + 1.0));
    Ok(transport_diagonal_spectral(sector, &coeffs, cap, settings)?.with_truncation_loss(tail))
}
