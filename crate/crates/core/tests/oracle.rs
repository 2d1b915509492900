//! Closed-form sector states against the operator-algebra transport, and the
//! transport against hand-derived and thermodynamic identities.

use approx::assert_relative_eq;
use unruh_core::unruh::{
    analytic_sector_state, omega_over_a_for_epsilon, sector_tail_bound, transport_measured_sector,
    transport_thermal_sector, AccelerationParams, Normalization, Sector, TransportSettings,
};
use unruh_core::FockState;

const GRID_M: [u32; 5] = [0, 1, 2, 3, 4];
const GRID_EPS: [f64; 4] = [0.1, 0.3, 0.5, 0.7];

fn sector(eps: f64) -> Sector {
    Sector::new(
        0,
        AccelerationParams::new(omega_over_a_for_epsilon(eps)).unwrap(),
    )
}

#[test]
fn closed_form_matches_operator_transport_on_grid() {
    let ts = TransportSettings::default();
    for m in GRID_M {
        for eps in GRID_EPS {
            let s = sector(eps);
            let n = m + 30;
            let oracle = transport_measured_sector(&s, m, n, &ts).unwrap();
            let analytic = analytic_sector_state(&s, m, n, &ts).unwrap();
            let f = oracle.fidelity(&analytic).unwrap();
            assert!(f >= 1.0 - 1e-10, "m={m} eps={eps}: fidelity {f}");
        }
    }
}

#[test]
fn m1_amplitudes_follow_hand_expansion() {
    // (a^{I†})(a^{II†}) on V|0⟩_B, expanded by hand:
    // c_k ∝ (−1)^k [k ε^{k−1} − (k+1) ε^{k+1}]
    let ts = TransportSettings::default();
    for eps in [0.2, 0.5, 0.65] {
        let s = sector(eps);
        let n = 40;
        let st = transport_measured_sector(&s, 1, n, &ts).unwrap();
        let law = |k: u32| {
            let k = f64::from(k);
            let lead = if k == 0.0 { 0.0 } else { k * eps.powf(k - 1.0) };
            (-1f64).powf(k) * (lead - (k + 1.0) * eps.powf(k + 1.0))
        };
        let scale = st.amplitude(&[1, 1]).re / law(1);
        for k in 0..=20 {
            assert_relative_eq!(
                st.amplitude(&[k, k]).re,
                scale * law(k),
                epsilon = 1e-13,
                max_relative = 1e-10
            );
        }
    }
}

#[test]
fn unmeasured_sector_returns_to_vacuum() {
    let ts = TransportSettings {
        normalization: Normalization::Unitary,
        ..TransportSettings::default()
    };
    for eps in GRID_EPS {
        let s = sector(eps);
        let n = 40;
        let st = transport_thermal_sector(&s, n, &ts).unwrap();
        let vac = FockState::vacuum(st.modes(), st.truncation()).unwrap();
        let f = st.fidelity(&vac).unwrap();
        let bound = 1.0 - 10.0 * sector_tail_bound(eps, n);
        assert!(f >= bound, "eps={eps}: fidelity {f} below {bound}");
    }
}

#[test]
fn truncation_converges_for_moderate_epsilon() {
    let ts = TransportSettings::default();
    for m in GRID_M {
        for eps in [0.1, 0.3, 0.5] {
            let s = sector(eps);
            let n = m + 30;
            let a = analytic_sector_state(&s, m, n, &ts).unwrap();
            let b = analytic_sector_state(&s, m, n + 10, &ts)
                .unwrap()
                .restrict_truncation(n)
                .unwrap();
            // compare on the common cap; the dropped weight lowers the fidelity
            let f = a.inner_product(&b).unwrap().norm_sqr()
                / (a.norm_sqr() * (b.norm_sqr() + b.truncation_loss()));
            assert!(f >= 1.0 - 1e-8, "m={m} eps={eps}: {f}");
        }
    }
}

#[test]
fn zero_count_still_excites_each_mode() {
    let ts = TransportSettings::default();
    for eps in [0.05, 0.3, 0.6] {
        let s = sector(eps);
        let st = transport_measured_sector(&s, 0, 60, &ts).unwrap();
        let expected = eps * eps / (1.0 - eps * eps);
        for mode in s.minkowski_modes() {
            assert_relative_eq!(
                st.number_expectation(&mode).unwrap(),
                expected,
                max_relative = 1e-10
            );
        }
    }
}

#[test]
fn reported_loss_agrees_between_routes() {
    let ts = TransportSettings::default();
    for m in GRID_M {
        for eps in [0.3, 0.5, 0.7] {
            let s = sector(eps);
            let n = m + 30;
            let oracle = transport_measured_sector(&s, m, n, &ts).unwrap();
            let analytic = analytic_sector_state(&s, m, n, &ts).unwrap();
            assert_relative_eq!(
                oracle.truncation_loss(),
                analytic.truncation_loss(),
                epsilon = 1e-14,
                max_relative = 1e-6
            );
        }
    }
}
