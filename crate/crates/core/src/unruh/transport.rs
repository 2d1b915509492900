use num_complex::Complex64;

use super::coefficients::{analytic_required_truncation, coefficients_with_tail};
use super::params::{required_truncation, Normalization, Sector, TransportSettings};
use crate::error::{Error, Result};
use crate::mode::{Frame, ModeId};
use crate::operator::{Ladder, LadderOp, OperatorPolynomial};
use crate::state::FockState;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Weight bound ε^{2(N+1)}/(1−ε²) of the thermal series beyond N.
pub fn sector_tail_bound(epsilon: f64, n: u32) -> f64 {
    epsilon.powf(2.0 * (f64::from(n) + 1.0)) / (1.0 - epsilon * epsilon)
}

/// √(1−ε²) Σ_{n≤N} s^n |n,n⟩ on the given pair of modes; the weight of the
/// omitted tail, ε^{2(N+1)}, is recorded as truncation loss.
fn squeezed_series(modes: &[ModeId; 2], ratio: f64, n: u32, prune: f64) -> Result<FockState> {
    let eps = ratio.abs();
    let norm = (1.0 - eps * eps).sqrt();
    let mut amps = Vec::with_capacity(n as usize + 1);
    let mut v = norm;
    for k in 0..=n {
        if v.abs() < prune {
            break;
        }
        amps.push((vec![k, k], re(v)));
        v *= ratio;
    }
    let tail = eps.powf(2.0 * (f64::from(n) + 1.0));
    Ok(FockState::from_amplitudes(modes, n, amps)?
        .with_prune_threshold(prune)
        .with_truncation_loss(tail))
}

/// The inertial vacuum written in the accelerated frame, one sector:
/// √(1−ε²) Σ ε^n |n,n⟩ on (ψ^I, ψ^II).
pub fn unruh_sector_state(
    sector: &Sector,
    n: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    sector
        .params
        .check_cap(settings.epsilon_max, settings.tolerance)?;
    squeezed_series(
        &sector.rindler_modes(),
        sector.epsilon(),
        n,
        settings.prune_threshold,
    )
}

/// V|0⟩_B for one sector: √(1−ε²) Σ (−ε)^n |n,n⟩ on (Ψ, Ψ′).
pub fn inertial_image_of_rindler_vacuum(
    sector: &Sector,
    n: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    sector
        .params
        .check_cap(settings.epsilon_max, settings.tolerance)?;
    squeezed_series(
        &sector.minkowski_modes(),
        -sector.epsilon(),
        n,
        settings.prune_threshold,
    )
}

/// Image of one Rindler ladder operator under V a V⁻¹.
///
/// a^I → c(b + ε b′†), a^II → c(b′ + ε b†) and the adjoints, where c is the
/// prefactor of `normalization`.
pub fn ladder_image(op: &LadderOp, normalization: Normalization) -> Result<OperatorPolynomial> {
    if op.mode.frame != Frame::Rindler {
        return Err(Error::config(format!(
            "cannot transport {}: not a Rindler-frame mode",
            op.mode
        )));
    }
    let eps = super::params::epsilon_of(op.mode.omega_over_a())?;
    let c = normalization.prefactor(eps);
    let own = op.mode.in_frame(Frame::Minkowski);
    let partner = own.partner();
    let image = OperatorPolynomial::ladder(own, op.kind)
        + OperatorPolynomial::ladder(partner, op.kind.adjoint()).scale(re(eps));
    Ok(image.scale(re(c)))
}

/// Substitutes every Rindler ladder factor by its inertial image and
/// distributes, keeping factor order.
pub fn bogoliubov_image(
    op: &OperatorPolynomial,
    normalization: Normalization,
) -> Result<OperatorPolynomial> {
    let mut out = OperatorPolynomial::zero();
    for term in op.terms() {
        let mut acc = OperatorPolynomial::scalar(term.coeff);
        for f in &term.factors {
            acc = acc.product(&ladder_image(f, normalization)?);
        }
        out = out.sum(&acc);
    }
    Ok(out)
}

fn check_margin(sector: &Sector, m: u32, n: u32, settings: &TransportSettings) -> Result<()> {
    sector
        .params
        .check_cap(settings.epsilon_max, settings.tolerance)?;
    let required = required_truncation(sector.epsilon(), m, settings.tolerance);
    if n < required {
        return Err(Error::Precision {
            message: format!(
                "truncation N = {n} is too small for m = {m} at ε = {}",
                sector.epsilon()
            ),
            required_truncation: Some(required),
        });
    }
    Ok(())
}

fn check_loss(sector: &Sector, m: u32, loss: f64, settings: &TransportSettings) -> Result<()> {
    if loss > settings.loss_budget {
        let hint = analytic_required_truncation(m, sector.epsilon(), settings.loss_budget).ok();
        return Err(Error::Precision {
            message: format!(
                "sector loses {loss:e} of its weight to truncation (budget {})",
                settings.loss_budget
            ),
            required_truncation: hint,
        });
    }
    Ok(())
}

/// Levels beyond N over which the sector weight decays below double precision.
fn decay_margin(epsilon: f64) -> u32 {
    if epsilon <= 0.0 {
        return 1;
    }
    ((1e-32f64).ln() / (2.0 * epsilon.ln())).ceil().max(1.0) as u32
}

/// V|Φ⟩_B for one sector after Bob counted `m` photons, by operator algebra.
///
/// The collapsed sector (a^{I†})^m (a^{II†})^m |0⟩_B / m! is mapped by
/// substituting each creation operator with its inertial image and acting on
/// V|0⟩_B. Each image can pull amplitude down from one level above, so work
/// happens at cap W + 2m and only occupations ≤ W are kept as exact. W lies
/// far enough past N that the weight beyond it is negligible, which makes the
/// reported truncation loss exact as well.
pub fn transport_measured_sector(
    sector: &Sector,
    m: u32,
    n: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    check_margin(sector, m, n, settings)?;
    let exact_cap = n + decay_margin(sector.epsilon());
    let work_cap = exact_cap + 2 * m;
    let mut state =
        inertial_image_of_rindler_vacuum(sector, work_cap, settings)?.with_truncation_loss(0.0);
    let [r1, r2] = sector.rindler_modes();
    let raise_1 = ladder_image(
        &LadderOp {
            mode: r1,
            kind: Ladder::Create,
        },
        settings.normalization,
    )?;
    let raise_2 = ladder_image(
        &LadderOp {
            mode: r2,
            kind: Ladder::Create,
        },
        settings.normalization,
    )?;
    // rightmost factors act first
    for _ in 0..m {
        state = state.apply_polynomial(&raise_2)?;
    }
    for _ in 0..m {
        state = state.apply_polynomial(&raise_1)?;
    }
    let exact = state
        .with_truncation_loss(0.0)
        .restrict_truncation(exact_cap)?;
    finish_sector(sector, m, exact, n, settings)
}

fn finish_sector(
    sector: &Sector,
    m: u32,
    state: FockState,
    n: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    let total = state.norm_sqr();
    let kept = state.with_truncation_loss(0.0).restrict_truncation(n)?;
    let rel_loss = (total - kept.norm_sqr()).max(0.0) / total;
    check_loss(sector, m, rel_loss, settings)?;
    let out = kept.normalize()?;
    let out_loss = rel_loss / (1.0 - rel_loss);
    Ok(out.with_truncation_loss(out_loss))
}

/// The closed form Σ_l Σ_{q≤m} (−1)^l K^m_{ql} |q+l; q+l⟩ cut at q+l ≤ N
/// and normalized. Contributions with equal q+l are summed.
pub fn analytic_sector_state(
    sector: &Sector,
    m: u32,
    n: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    check_margin(sector, m, n, settings)?;
    let (coeffs, _) = coefficients_with_tail(m, sector.epsilon(), n)?;
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    let kept_w: f64 = coeffs[..=n as usize].iter().map(|c| c * c).sum();
    let rel_loss = (total - kept_w).max(0.0) / total;
    check_loss(sector, m, rel_loss, settings)?;
    let prune = settings.prune_threshold;
    let scale = kept_w.sqrt();
    let amps = coeffs[..=n as usize]
        .iter()
        .enumerate()
        .map(|(k, c)| (vec![k as u32, k as u32], re(c / scale)))
        .filter(|(_, a)| a.norm() >= prune && a.norm() > 0.0);
    Ok(
        FockState::from_amplitudes(&sector.minkowski_modes(), n, amps)?
            .with_prune_threshold(prune)
            .with_truncation_loss(rel_loss / (1.0 - rel_loss)),
    )
}

/// Transports Σ_n c_n |n,n⟩_B by expanding each |n,n⟩_B as
/// (a^{I†} a^{II†})^n / n! acting on the vacuum and substituting images.
///
/// This is the literal operator route. For large n it suffers from
/// cancellation between the alternating vacuum series and the raised
/// terms; see [`transport_diagonal_spectral`](super::transport_diagonal_spectral)
/// for a stable alternative.
pub fn transport_series_direct(
    sector: &Sector,
    rindler_coeffs: &[f64],
    work_cap: u32,
    settings: &TransportSettings,
) -> Result<FockState> {
    sector
        .params
        .check_cap(settings.epsilon_max, settings.tolerance)?;
    let [r1, r2] = sector.rindler_modes();
    let pair = OperatorPolynomial::create(r1) * OperatorPolynomial::create(r2);
    let raise = bogoliubov_image(&pair, settings.normalization)?;
    let mut term =
        inertial_image_of_rindler_vacuum(sector, work_cap, settings)?.with_truncation_loss(0.0);
    let mut acc = term.scale(re(0.0));
    for (k, &c) in rindler_coeffs.iter().enumerate() {
        if k > 0 {
            term = term.apply_polynomial(&raise)?.scale(re(1.0 / k as f64));
        }
        acc = acc.add(&term.scale(re(c)))?;
    }
    Ok(acc)
}
