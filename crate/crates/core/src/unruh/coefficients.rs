//! Closed-form expansion coefficients K^m_{ql}(ε) of a transported
//! m-photon sector in the inertial number basis.

use crate::error::{Error, Result};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "ε must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// ln K^m_{ql} for m ≥ 1; `None` marks an exact zero.
fn ln_k(m: u32, q: u32, l: u64, ln_eps: f64) -> f64 {
    let ln_binom: f64 = (1..=q)
        .map(|i| (f64::from(m - q + i) / f64::from(i)).ln())
        .sum();
    let ln_rising: f64 = (1..=u64::from(m)).map(|i| ((l + i) as f64).ln()).sum();
    ln_binom + ln_rising + (f64::from(m - q) + l as f64) * ln_eps
}

/// K^m_{ql}(ε).
///
/// For m = 0 this is δ_{q0} ε^l; otherwise
/// C(m, q) · Π_{i=1..m}(l+i) · ε^{m−q+l}. Always non-negative.
pub fn k_coefficient(m: u32, q: u32, l: u32, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if q > m {
        return Err(Error::domain(format!(
            "K^m_ql needs q <= m (q = {q}, m = {m})"
        )));
    }
    Ok(k_unchecked(m, q, u64::from(l), epsilon))
}

/// Like [`k_coefficient`] but q > m yields zero, the value the binomial
/// (or the Kronecker delta at m = 0) takes there.
pub fn k_coefficient_or_zero(m: u32, q: u32, l: u32, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if q > m {
        return Ok(0.0);
    }
    Ok(k_unchecked(m, q, u64::from(l), epsilon))
}

fn k_unchecked(m: u32, q: u32, l: u64, epsilon: f64) -> f64 {
    if m == 0 {
        return epsilon.powf(l as f64);
    }
    // direct products are exact enough while nothing can overflow
    let small = m <= 20 && l <= 1_000;
    if small {
        let mut binom = 1.0;
        for i in 1..=q {
            binom = binom * f64::from(m - q + i) / f64::from(i);
        }
        let rising: f64 = (1..=u64::from(m)).map(|i| (l + i) as f64).product();
        binom * rising * epsilon.powf(f64::from(m - q) + l as f64)
    } else {
        ln_k(m, q, l, epsilon.ln()).exp()
    }
}

/// Signed amplitudes c_k = Σ_{q+l=k} (−1)^l K^m_{ql}(ε) of |k;k⟩ for
/// k = 0..=k_max, up to one common positive factor.
///
/// Terms are evaluated in the log domain and shifted by the largest one, so
/// the result stays finite for large m.
pub fn sector_coefficients(m: u32, epsilon: f64, k_max: u32) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    if m == 0 {
        let mut out = Vec::with_capacity(k_max as usize + 1);
        let mut v = 1.0;
        for _ in 0..=k_max {
            out.push(v);
            v *= -epsilon;
        }
        return Ok(out);
    }
    let ln_eps = epsilon.ln();
    let mut logs: Vec<Vec<(f64, bool)>> = Vec::with_capacity(k_max as usize + 1);
    let mut shift = f64::NEG_INFINITY;
    for k in 0..=k_max {
        let mut row = Vec::new();
        for q in 0..=m.min(k) {
            let l = u64::from(k - q);
            let v = ln_k(m, q, l, ln_eps);
            shift = shift.max(v);
            row.push((v, l % 2 == 1));
        }
        logs.push(row);
    }
    Ok(logs
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(v, neg)| {
                    let t = (v - shift).exp();
                    if neg {
                        -t
                    } else {
                        t
                    }
                })
                .sum()
        })
        .collect())
}

/// Smallest N at which the analytic m-photon sector keeps all but
/// `budget` of its weight.
pub fn analytic_required_truncation(m: u32, epsilon: f64, budget: f64) -> Result<u32> {
    let (coeffs, _) = coefficients_with_tail(m, epsilon, m)?;
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    let mut acc = 0.0;
    for (k, c) in coeffs.iter().enumerate() {
        acc += c * c;
        if total - acc <= budget * total {
            return Ok((k as u32).max(m).max(1));
        }
    }
    Ok(coeffs.len() as u32)
}

/// Coefficients extended past `n` until the remaining tail is negligible.
/// Returns the coefficients and the index where the extension stopped.
pub(crate) fn coefficients_with_tail(m: u32, epsilon: f64, n: u32) -> Result<(Vec<f64>, u32)> {
    // the envelope k^m ε^k peaks near m / ln(1/ε) and decays geometrically after
    let peak = f64::from(m) / (-epsilon.ln());
    let decay = 80.0 / (-2.0 * epsilon.ln());
    let mut k_max = (n as f64).max(peak) + decay + 2.0 * f64::from(m).sqrt() * decay.sqrt();
    loop {
        let km = k_max.ceil().min(5_000_000.0) as u32;
        let c = sector_coefficients(m, epsilon, km)?;
        let total: f64 = c.iter().map(|x| x * x).sum();
        let last = c[c.len().saturating_sub(4)..]
            .iter()
            .map(|x| x * x)
            .sum::<f64>();
        if last <= 1e-32 * total || km >= 5_000_000 {
            return Ok((c, km));
        }
        k_max *= 1.5;
    }
}
