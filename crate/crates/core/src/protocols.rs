//! End-to-end scenario drivers: Bob measures photon numbers in the
//! accelerated frame, the collapsed sectors are carried to the inertial
//! frame, and the result is cross-checked and diagnosed.

use num_complex::Complex64;
use serde::Serialize;

use crate::entanglement::{
    concurrence_two_qubit, ppt_report_with_cap, EntanglementReport, Partition, DEFAULT_DENSE_CAP,
};
use crate::error::{Error, Result};
use crate::measurement::{
    project_number_with_floor, project_total_number_with_floor, sample_outcome,
    DEFAULT_PROBABILITY_FLOOR,
};
use crate::mode::{Branch, Frame, ModeId};
use crate::operator::OperatorPolynomial;
use crate::state::FockState;
use crate::unruh::{
    analytic_sector_state, bogoliubov_image, k_coefficient_or_zero, transport_measured_sector,
    unruh_sector_state, AccelerationParams, Sector, TransportSettings,
};

/// Oracle and closed form must agree at least this well.
pub const CROSS_CHECK_FIDELITY: f64 = 1.0 - 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolSettings {
    pub transport: TransportSettings,
    pub probability_floor: f64,
    pub dense_cap: usize,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        ProtocolSettings {
            transport: TransportSettings::default(),
            probability_floor: DEFAULT_PROBABILITY_FLOOR,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SingleFrequency,
    TwoFrequency,
    EprPostSelection,
    SignalTransmission,
}

/// Which frequency Bob counts first in the two-frequency scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementOrder {
    #[default]
    FirstFrequencyFirst,
    SecondFrequencyFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolInputs {
    pub omega_over_a: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub outcomes: Vec<u32>,
    pub truncation: u32,
    pub seed: Option<u64>,
    pub measurement_order: Option<MeasurementOrder>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelledReport {
    pub label: String,
    pub report: EntanglementReport,
}

/// Post-selected two-qubit state c1|1,0;1,0⟩ + c2|0,1;0,1⟩ on
/// (Ψ₁, Ψ₂, Ψ′₁, Ψ′₂).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitPayload {
    /// Normalized amplitudes from the transported state.
    pub c1: f64,
    pub c2: f64,
    /// Normalized amplitudes predicted from the K coefficients.
    pub predicted_c1: f64,
    pub predicted_c2: f64,
    pub concurrence: f64,
    /// Probability of two inertial photons given Bob's counts.
    pub conditional_probability: f64,
    /// Including the probability of Bob's counts.
    pub unconditional_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalPayload {
    /// Amplitude on b†|0⟩_A before normalization.
    pub raw_amplitude: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub scenario: Scenario,
    pub inputs: ProtocolInputs,
    pub outcome_probability: f64,
    pub state_oracle: FockState,
    pub state_analytic: FockState,
    pub fidelity_oracle_analytic: f64,
    pub entanglement: Vec<LabelledReport>,
    pub energy_proxy: f64,
    pub truncation_loss: f64,
    pub two_qubit: Option<TwoQubitPayload>,
    pub signal: Option<SignalPayload>,
}

impl ProtocolResult {
    /// The first entanglement report, which is the headline bipartition.
    pub fn primary_report(&self) -> Option<&EntanglementReport> {
        self.entanglement.first().map(|r| &r.report)
    }
}

/// E/a = Σ_modes (ω/a) ⟨n_mode⟩.
pub fn energy_proxy(state: &FockState) -> Result<f64> {
    state
        .modes()
        .iter()
        .map(|m| Ok(m.omega_over_a() * state.number_expectation(m)?))
        .sum()
}

fn cross_check(oracle: &FockState, analytic: &FockState) -> Result<f64> {
    let f = oracle.fidelity(analytic)?;
    if f.is_nan() || f < CROSS_CHECK_FIDELITY {
        return Err(Error::Precision {
            message: format!("operator transport and closed form disagree: fidelity {f}"),
            required_truncation: None,
        });
    }
    Ok(f)
}

fn check_truncation(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::config("truncation N must be at least 1"));
    }
    Ok(())
}

/// Bob counts `m` photons in ψ^I_ω; Alice's state is V|Φ⟩_B on (Ψ_ω, Ψ′_ω).
pub fn single_frequency(
    omega_over_a: f64,
    m: u32,
    n: u32,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    check_truncation(n)?;
    let sector = Sector::new(0, AccelerationParams::new(omega_over_a)?);
    let ts = &settings.transport;
    let rindler = unruh_sector_state(&sector, n.max(m), ts)?;
    let record = project_number_with_floor(
        &rindler,
        &sector.rindler_modes()[0],
        m,
        settings.probability_floor,
    )?;
    run_single(sector, m, n, record.probability, None, settings)
}

/// As [`single_frequency`] with Bob's count drawn from the Born rule.
pub fn single_frequency_sampled(
    omega_over_a: f64,
    seed: u64,
    n: u32,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    check_truncation(n)?;
    let sector = Sector::new(0, AccelerationParams::new(omega_over_a)?);
    let rindler = unruh_sector_state(&sector, n, &settings.transport)?;
    let (m, record) = sample_outcome(&rindler, &sector.rindler_modes()[0], seed)?;
    // the sampler renormalizes over the truncated series; report the exact weight
    let probability = record.probability * rindler.norm_sqr();
    run_single(sector, m, n, probability, Some(seed), settings)
}

fn run_single(
    sector: Sector,
    m: u32,
    n: u32,
    probability: f64,
    seed: Option<u64>,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let ts = &settings.transport;
    let oracle = transport_measured_sector(&sector, m, n, ts)?;
    let analytic = analytic_sector_state(&sector, m, n, ts)?;
    let fidelity = cross_check(&oracle, &analytic)?;
    let [a, b] = sector.minkowski_modes();
    let report = ppt_report_with_cap(
        &oracle,
        &Partition::split(oracle.modes(), &[a], &[b])?,
        settings.dense_cap,
    )?;
    Ok(ProtocolResult {
        scenario: Scenario::SingleFrequency,
        inputs: ProtocolInputs {
            omega_over_a: vec![sector.params.omega_over_a()],
            epsilon: vec![sector.epsilon()],
            outcomes: vec![m],
            truncation: n,
            seed,
            measurement_order: None,
        },
        outcome_probability: probability,
        energy_proxy: energy_proxy(&oracle)?,
        truncation_loss: oracle.truncation_loss(),
        fidelity_oracle_analytic: fidelity,
        entanglement: vec![LabelledReport {
            label: "Psi|Psi'".into(),
            report,
        }],
        state_oracle: oracle,
        state_analytic: analytic,
        two_qubit: None,
        signal: None,
    })
}

struct TwoSectors {
    sectors: [Sector; 2],
    outcomes: [u32; 2],
    probability: f64,
    oracle: FockState,
    analytic: FockState,
}

/// Inertial registry (Ψ₁, Ψ₂, Ψ′₁, Ψ′₂).
fn inertial_order(sectors: &[Sector; 2]) -> [ModeId; 4] {
    let [a1, b1] = sectors[0].minkowski_modes();
    let [a2, b2] = sectors[1].minkowski_modes();
    [a1, a2, b1, b2]
}

fn measure_two(
    omega1_over_a: f64,
    omega2_over_a: f64,
    m1: u32,
    m2: u32,
    n: u32,
    order: MeasurementOrder,
    settings: &ProtocolSettings,
) -> Result<TwoSectors> {
    check_truncation(n)?;
    let sectors = [
        Sector::new(0, AccelerationParams::new(omega1_over_a)?),
        Sector::new(1, AccelerationParams::new(omega2_over_a)?),
    ];
    let ts = &settings.transport;
    let cap = n.max(m1).max(m2);
    let rindler = unruh_sector_state(&sectors[0], cap, ts)?.tensor(&unruh_sector_state(
        &sectors[1],
        cap,
        ts,
    )?)?;
    let steps = match order {
        MeasurementOrder::FirstFrequencyFirst => [(0, m1), (1, m2)],
        MeasurementOrder::SecondFrequencyFirst => [(1, m2), (0, m1)],
    };
    let mut state = rindler;
    let mut probability = 1.0;
    for (i, m) in steps {
        let rec = project_number_with_floor(
            &state,
            &sectors[i].rindler_modes()[0],
            m,
            settings.probability_floor,
        )?;
        probability *= rec.probability;
        state = rec.collapsed;
    }
    let order_modes = inertial_order(&sectors);
    let oracle = transport_measured_sector(&sectors[0], m1, n, ts)?
        .tensor(&transport_measured_sector(&sectors[1], m2, n, ts)?)?
        .permute_modes(&order_modes)?;
    let analytic = analytic_sector_state(&sectors[0], m1, n, ts)?
        .tensor(&analytic_sector_state(&sectors[1], m2, n, ts)?)?
        .permute_modes(&order_modes)?;
    Ok(TwoSectors {
        sectors,
        outcomes: [m1, m2],
        probability,
        oracle,
        analytic,
    })
}

fn two_inputs(t: &TwoSectors, n: u32, order: MeasurementOrder) -> ProtocolInputs {
    ProtocolInputs {
        omega_over_a: t.sectors.iter().map(|s| s.params.omega_over_a()).collect(),
        epsilon: t.sectors.iter().map(|s| s.epsilon()).collect(),
        outcomes: t.outcomes.to_vec(),
        truncation: n,
        seed: None,
        measurement_order: Some(order),
    }
}

pub fn two_frequency(
    omega1_over_a: f64,
    omega2_over_a: f64,
    m1: u32,
    m2: u32,
    n: u32,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    two_frequency_ordered(
        omega1_over_a,
        omega2_over_a,
        m1,
        m2,
        n,
        MeasurementOrder::default(),
        settings,
    )
}

/// Bob counts `m1` photons in ψ^I_{ω1} and `m2` in ψ^I_{ω2}.
pub fn two_frequency_ordered(
    omega1_over_a: f64,
    omega2_over_a: f64,
    m1: u32,
    m2: u32,
    n: u32,
    order: MeasurementOrder,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let t = measure_two(omega1_over_a, omega2_over_a, m1, m2, n, order, settings)?;
    let fidelity = cross_check(&t.oracle, &t.analytic)?;
    let mut entanglement = Vec::with_capacity(2);
    for (i, s) in t.sectors.iter().enumerate() {
        let [a, b] = s.minkowski_modes();
        entanglement.push(LabelledReport {
            label: format!("Psi{0}|Psi'{0}", i + 1),
            report: ppt_report_with_cap(
                &t.oracle,
                &Partition::split(t.oracle.modes(), &[a], &[b])?,
                settings.dense_cap,
            )?,
        });
    }
    Ok(ProtocolResult {
        scenario: Scenario::TwoFrequency,
        inputs: two_inputs(&t, n, order),
        outcome_probability: t.probability,
        energy_proxy: energy_proxy(&t.oracle)?,
        truncation_loss: t.oracle.truncation_loss(),
        fidelity_oracle_analytic: fidelity,
        entanglement,
        state_oracle: t.oracle,
        state_analytic: t.analytic,
        two_qubit: None,
        signal: None,
    })
}

/// [K^m_{10} − K^m_{01}](ε₁) K^{m'}_{00}(ε₂): unnormalized amplitude of the
/// pair landing at the first frequency.
fn pair_amplitude(m_here: u32, eps_here: f64, m_there: u32, eps_there: f64) -> Result<f64> {
    let lift = k_coefficient_or_zero(m_here, 1, 0, eps_here)?
        - k_coefficient_or_zero(m_here, 0, 1, eps_here)?;
    Ok(lift * k_coefficient_or_zero(m_there, 0, 0, eps_there)?)
}

/// Two-frequency scenario followed by post-selection on exactly two inertial
/// photons, which leaves the pair either at ω₁ or at ω₂.
pub fn epr_postselect(
    omega1_over_a: f64,
    omega2_over_a: f64,
    m1: u32,
    m2: u32,
    n: u32,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let order = MeasurementOrder::default();
    let t = measure_two(omega1_over_a, omega2_over_a, m1, m2, n, order, settings)?;
    let modes = inertial_order(&t.sectors);
    let floor = settings.probability_floor;
    let post = project_total_number_with_floor(&t.oracle, &modes, 2, floor)?;
    let post_analytic = project_total_number_with_floor(&t.analytic, &modes, 2, floor)?;
    let fidelity = cross_check(&post.collapsed, &post_analytic.collapsed)?;

    let (e1, e2) = (t.sectors[0].epsilon(), t.sectors[1].epsilon());
    let p1 = pair_amplitude(m1, e1, m2, e2)?;
    let p2 = pair_amplitude(m2, e2, m1, e1)?;
    let pn = (p1 * p1 + p2 * p2).sqrt();
    let c1 = post.collapsed.amplitude(&[1, 0, 1, 0]);
    let c2 = post.collapsed.amplitude(&[0, 1, 0, 1]);
    let concurrence = concurrence_two_qubit(c1, c2)?;
    // the conditional probability is relative to the normalized collapsed state
    let conditional = post.probability / t.oracle.norm_sqr();

    let report = ppt_report_with_cap(
        &post.collapsed,
        &Partition::split(&modes, &modes[..2], &modes[2..])?,
        settings.dense_cap,
    )?;
    let payload = TwoQubitPayload {
        c1: c1.re,
        c2: c2.re,
        predicted_c1: if pn > 0.0 { p1 / pn } else { 0.0 },
        predicted_c2: if pn > 0.0 { p2 / pn } else { 0.0 },
        concurrence,
        conditional_probability: conditional,
        unconditional_probability: conditional * t.probability,
    };
    Ok(ProtocolResult {
        scenario: Scenario::EprPostSelection,
        inputs: two_inputs(&t, n, order),
        outcome_probability: t.probability,
        energy_proxy: energy_proxy(&post.collapsed)?,
        truncation_loss: t.oracle.truncation_loss(),
        fidelity_oracle_analytic: fidelity,
        entanglement: vec![LabelledReport {
            label: "Psi1 Psi2|Psi'1 Psi'2".into(),
            report: EntanglementReport {
                concurrence: Some(concurrence),
                ..report
            },
        }],
        state_oracle: post.collapsed,
        state_analytic: post_analytic.collapsed,
        two_qubit: Some(payload),
        signal: None,
    })
}

fn signal_sector(omega0_over_a: f64, slot: u16) -> Result<Sector> {
    Ok(Sector::new(slot, AccelerationParams::new(omega0_over_a)?))
}

/// Bob emits one photon in ψ^I_{ω0}; Alice receives V a^{I†} V⁻¹ |0⟩_A.
pub fn signal_transmission(
    omega0_over_a: f64,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let sector = signal_sector(omega0_over_a, 0)?;
    sector
        .params
        .check_cap(settings.transport.epsilon_max, settings.transport.tolerance)?;
    let [r1, _] = sector.rindler_modes();
    let [a, b] = sector.minkowski_modes();
    let image = bogoliubov_image(
        &OperatorPolynomial::create(r1),
        settings.transport.normalization,
    )?;
    let raw = FockState::vacuum(&[a, b], 1)?.apply_polynomial(&image)?;
    let raw_amplitude = raw.amplitude(&[1, 0]).re;
    let oracle = raw.normalize()?;
    let analytic = FockState::basis(&[a, b], 1, &[1, 0])?;
    let fidelity = oracle.fidelity(&analytic)?;
    signal_result(sector, oracle, analytic, fidelity, raw_amplitude, settings)
}

/// Dual-rail qubit α|1,0⟩ + β|0,1⟩ over two ψ^I modes at ω₀, sent through
/// the frame map. Returns the transported qubit and its fidelity with
/// α|1,0⟩ + β|0,1⟩ on the inertial rails.
pub fn signal_qubit(
    omega0_over_a: f64,
    alpha: Complex64,
    beta: Complex64,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let rails = [
        signal_sector(omega0_over_a, 0)?,
        signal_sector(omega0_over_a, 1)?,
    ];
    rails[0]
        .params
        .check_cap(settings.transport.epsilon_max, settings.transport.tolerance)?;
    let [r0, _] = rails[0].rindler_modes();
    let [r1, _] = rails[1].rindler_modes();
    let [a0, b0] = rails[0].minkowski_modes();
    let [a1, b1] = rails[1].minkowski_modes();
    let modes = [a0, a1, b0, b1];
    let qubit =
        OperatorPolynomial::create(r0).scale(alpha) + OperatorPolynomial::create(r1).scale(beta);
    let image = bogoliubov_image(&qubit, settings.transport.normalization)?;
    let raw = FockState::vacuum(&modes, 1)?.apply_polynomial(&image)?;
    let raw_amplitude = raw.norm() / (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let oracle = raw.normalize()?;
    let analytic = FockState::from_amplitudes(
        &modes,
        1,
        [(vec![1, 0, 0, 0], alpha), (vec![0, 1, 0, 0], beta)],
    )?
    .normalize()?;
    let fidelity = oracle.fidelity(&analytic)?;
    signal_result(
        rails[0],
        oracle,
        analytic,
        fidelity,
        raw_amplitude,
        settings,
    )
}

fn signal_result(
    sector: Sector,
    oracle: FockState,
    analytic: FockState,
    fidelity: f64,
    raw_amplitude: f64,
    settings: &ProtocolSettings,
) -> Result<ProtocolResult> {
    let cross = cross_check(&oracle, &analytic)?;
    let unprimed: Vec<ModeId> = oracle
        .modes()
        .iter()
        .filter(|m| m.branch == Branch::I)
        .copied()
        .collect();
    let primed: Vec<ModeId> = oracle
        .modes()
        .iter()
        .filter(|m| m.branch == Branch::II)
        .copied()
        .collect();
    debug_assert!(oracle.modes().iter().all(|m| m.frame == Frame::Minkowski));
    let report = ppt_report_with_cap(
        &oracle,
        &Partition::split(oracle.modes(), &unprimed, &primed)?,
        settings.dense_cap,
    )?;
    Ok(ProtocolResult {
        scenario: Scenario::SignalTransmission,
        inputs: ProtocolInputs {
            omega_over_a: vec![sector.params.omega_over_a()],
            epsilon: vec![sector.epsilon()],
            outcomes: vec![],
            truncation: oracle.truncation(),
            seed: None,
            measurement_order: None,
        },
        outcome_probability: 1.0,
        energy_proxy: energy_proxy(&oracle)?,
        truncation_loss: oracle.truncation_loss(),
        fidelity_oracle_analytic: cross,
        entanglement: vec![LabelledReport {
            label: "Psi|Psi'".into(),
            report,
        }],
        state_oracle: oracle,
        state_analytic: analytic,
        two_qubit: None,
        signal: Some(SignalPayload {
            raw_amplitude,
            fidelity,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::entropy_bits;
    use crate::unruh::omega_over_a_for_epsilon;
    use approx::assert_relative_eq;

    fn w(eps: f64) -> f64 {
        omega_over_a_for_epsilon(eps)
    }

    fn settings() -> ProtocolSettings {
        ProtocolSettings::default()
    }

    #[test]
    fn single_frequency_vacuum_outcome() {
        let eps: f64 = 0.5;
        let r = single_frequency(w(eps), 0, 30, &settings()).unwrap();
        assert!(r.fidelity_oracle_analytic >= CROSS_CHECK_FIDELITY);
        assert_relative_eq!(r.outcome_probability, 0.75, max_relative = 1e-14);
        let rep = r.primary_report().unwrap();
        assert!(rep.negativity > 0.0);
        let p: Vec<f64> = (0..=30).map(|n| 0.75 * eps.powi(2 * n)).collect();
        assert_relative_eq!(rep.entropy_bits.unwrap(), entropy_bits(&p), epsilon = 1e-9);
        let expected = 2.0 * w(eps) * eps * eps / (1.0 - eps * eps);
        assert_relative_eq!(r.energy_proxy, expected, max_relative = 1e-9);
    }

    #[test]
    fn single_frequency_diagonal_support() {
        for m in 0..=3 {
            let r = single_frequency(w(0.3), m, 20, &settings()).unwrap();
            assert!(r.state_oracle.amplitudes().all(|(k, _)| k[0] == k[1]));
            assert!(r.state_oracle.amplitude(&[0, 0]).norm_sqr() < 1.0);
        }
    }

    #[test]
    fn small_acceleration_limit() {
        let r = single_frequency(20.0, 0, 5, &settings()).unwrap();
        assert!(r.energy_proxy < 1e-20);
        assert_eq!(r.primary_report().unwrap().negativity, 0.0);
    }

    #[test]
    fn energy_grows_with_count() {
        let mut last = 0.0;
        for m in 0..=3 {
            let e = single_frequency(w(0.5), m, m + 30, &settings())
                .unwrap()
                .energy_proxy;
            assert!(e >= last);
            last = e;
        }
    }

    #[test]
    fn sampled_outcome_is_reproducible() {
        let a = single_frequency_sampled(w(0.5), 7, 30, &settings()).unwrap();
        let b = single_frequency_sampled(w(0.5), 7, 30, &settings()).unwrap();
        assert_eq!(a, b);
        let m = a.inputs.outcomes[0];
        assert_relative_eq!(
            a.outcome_probability,
            0.75 * 0.25f64.powi(m as i32),
            max_relative = 1e-12
        );
    }

    #[test]
    fn two_frequency_factorizes() {
        let s = settings();
        let r = two_frequency(w(0.5), w(0.3), 1, 2, 15, &s).unwrap();
        let ts = &s.transport;
        let s1 = Sector::new(0, AccelerationParams::new(w(0.5)).unwrap());
        let s2 = Sector::new(1, AccelerationParams::new(w(0.3)).unwrap());
        let product = analytic_sector_state(&s1, 1, 15, ts)
            .unwrap()
            .tensor(&analytic_sector_state(&s2, 2, 15, ts).unwrap())
            .unwrap()
            .permute_modes(&inertial_order(&[s1, s2]))
            .unwrap();
        assert!(r.state_oracle.fidelity(&product).unwrap() >= 1.0 - 1e-12);
        assert!(r
            .state_oracle
            .amplitudes()
            .all(|(k, _)| k[0] == k[2] && k[1] == k[3]));
        let expected = 0.75 * 0.25 * 0.91 * 0.09f64.powi(2);
        assert_relative_eq!(r.outcome_probability, expected, max_relative = 1e-12);
        assert_eq!(r.entanglement.len(), 2);
        assert!(r.entanglement.iter().all(|e| e.report.negativity > 0.0));
    }

    #[test]
    fn measurement_order_is_irrelevant() {
        let s = settings();
        let a = two_frequency_ordered(
            w(0.5),
            w(0.4),
            2,
            1,
            20,
            MeasurementOrder::FirstFrequencyFirst,
            &s,
        )
        .unwrap();
        let b = two_frequency_ordered(
            w(0.5),
            w(0.4),
            2,
            1,
            20,
            MeasurementOrder::SecondFrequencyFirst,
            &s,
        )
        .unwrap();
        assert_relative_eq!(
            a.outcome_probability,
            b.outcome_probability,
            max_relative = 1e-14
        );
        assert_eq!(a.state_oracle, b.state_oracle);
    }

    #[test]
    fn epr_equal_frequencies_is_maximal() {
        let r = epr_postselect(w(0.5), w(0.5), 0, 0, 15, &settings()).unwrap();
        let q = r.two_qubit.clone().unwrap();
        assert_relative_eq!(q.concurrence, 1.0, epsilon = 1e-10);
        assert_relative_eq!(q.c1, q.c2, epsilon = 1e-12);
        assert_relative_eq!(q.predicted_c1, q.c1, epsilon = 1e-12);
        assert_relative_eq!(
            r.primary_report().unwrap().entropy_bits.unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn epr_unequal_counts_matches_prediction() {
        let r = epr_postselect(w(0.5), w(0.6), 1, 1, 25, &settings()).unwrap();
        let q = r.two_qubit.clone().unwrap();
        let n = (0.30f64.powi(2) + 0.14f64.powi(2)).sqrt();
        assert_relative_eq!(q.predicted_c1.abs(), 0.30 / n, epsilon = 1e-12);
        assert_relative_eq!(q.c1, q.predicted_c1, epsilon = 1e-10);
        assert_relative_eq!(q.c2, q.predicted_c2, epsilon = 1e-10);
        assert_relative_eq!(q.concurrence, 0.084 / 0.1096, epsilon = 1e-10);
        // Schmidt entropy of the post-selected pair agrees with the concurrence
        let c = q.concurrence;
        let x = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
        assert_relative_eq!(
            r.primary_report().unwrap().entropy_bits.unwrap(),
            entropy_bits(&[x, 1.0 - x]),
            epsilon = 1e-9
        );
    }

    #[test]
    fn epr_degenerate_root() {
        let root = omega_over_a_for_epsilon(0.5f64.sqrt());
        let r = epr_postselect(root, w(0.6), 1, 1, 30, &settings()).unwrap();
        let q = r.two_qubit.clone().unwrap();
        assert!(q.c1.abs() < 1e-12);
        assert!(q.concurrence < 1e-12);
        let both = epr_postselect(root, root, 1, 1, 30, &settings());
        assert!(matches!(both, Err(Error::ZeroProbability { .. })));
    }

    #[test]
    fn signal_is_received() {
        let r = signal_transmission(w(0.5), &settings()).unwrap();
        let s = r.signal.unwrap();
        assert_relative_eq!(s.raw_amplitude, 0.75f64.sqrt(), epsilon = 1e-15);
        assert!((s.fidelity - 1.0).abs() <= 1e-12);
        assert_relative_eq!(r.energy_proxy, w(0.5), max_relative = 1e-14);
    }

    #[test]
    fn signal_qubit_keeps_amplitudes() {
        let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let r = signal_qubit(w(0.5), a, b, &settings()).unwrap();
        assert!((r.signal.unwrap().fidelity - 1.0).abs() <= 1e-12);
    }
}
