mod common;

use common::*;
use proptest::prelude::*;
use telecloning::analysis::{closed_fidelity, man, p_kernel, BoundaryFamily, ScenarioConfig};
use telecloning::linalg::{Complex64, ComplexMatrix, SubsystemLayout};
use telecloning::measurement::{kraus_set, AcceptanceMask};
use telecloning::protocol::{run_schedule, ChannelState, RoundSchedule};
use telecloning::states::{resource_layout, two_design_states, DisentangleParams, INPUT};

fn six_state_average(kraus: &[ComplexMatrix]) -> f64 {
    let design = two_design_states();
    let total: f64 = design
        .iter()
        .map(|q| {
            let rho = q.density();
            let mut out = ComplexMatrix::zeros(2, 2);
            for k in kraus {
                out = &out + &(&(k * &rho) * &k.dagger());
            }
            let ket = q.ket();
            ket.iter()
                .enumerate()
                .map(|(i, a)| ket.iter().enumerate().map(|(j, b)| a.conj() * out[(i, j)] * b).sum::<Complex64>())
                .sum::<Complex64>()
                .re
        })
        .sum();
    total / design.len() as f64
}

#[test]
fn design_average_equals_haar_average() {
    let mut r = rng(21);
    for _ in 0..20 {
        // Stinespring dilation with a four-dimensional environment
        let u = random_unitary(&mut r, 8);
        let kraus: Vec<ComplexMatrix> = (0..4)
            .map(|e| {
                let mut k = ComplexMatrix::zeros(2, 2);
                for a in 0..2 {
                    for b in 0..2 {
                        k[(a, b)] = u[(a * 4 + e, b * 4)];
                    }
                }
                k
            })
            .collect();
        let f_e: f64 = kraus.iter().map(|k| k.trace().norm_sqr()).sum::<f64>() / 4.0;
        assert_close(six_state_average(&kraus), (2.0 * f_e + 1.0) / 3.0, 1e-10, "average fidelity");
    }
}

#[test]
fn kraus_sets_are_complete() {
    for m in 1..=3 {
        let layout = SubsystemLayout::qubits([INPUT]).unwrap().concat(&resource_layout(m).unwrap()).unwrap();
        let masks = [AcceptanceMask::all_refuse(m), AcceptanceMask::all_accept(m), AcceptanceMask::only(m, m - 1)];
        for mask in &masks {
            for lambda in [0.1, 0.5, 1.0] {
                let ops = kraus_set(lambda, mask, &layout).unwrap().ops().unwrap();
                let mut sum = ComplexMatrix::zeros(layout.dim(), layout.dim());
                for k in &ops {
                    sum = &sum + &(&k.dagger() * k);
                }
                let err = sum.max_abs_diff(&ComplexMatrix::identity(layout.dim()));
                assert!(err < 1e-12, "M={m} {mask:?} λ={lambda}: {err}");
            }
        }
    }
}

#[test]
fn receivers_are_interchangeable() {
    let ch = ChannelState::fresh(3).unwrap();
    let refuse = AcceptanceMask::all_refuse(3);
    let ch = ch.recycle(0.4, &refuse).unwrap();
    let f: Vec<f64> = ["C1", "C2", "C3"].iter().map(|c| ch.avg_fidelity(0.7, c).unwrap()).collect();
    assert_close(f[0], f[1], 1e-12, "C1/C2");
    assert_close(f[0], f[2], 1e-12, "C1/C3");

    // swapping the η's swaps the receivers
    let a = DisentangleParams::new(1.0, 1.0, vec![0.3, 0.8]).unwrap();
    let b = DisentangleParams::new(1.0, 1.0, vec![0.8, 0.3]).unwrap();
    let (ca, cb) = (ChannelState::from_params(&a).unwrap(), ChannelState::from_params(&b).unwrap());
    assert_close(ca.avg_fidelity(0.9, "C1").unwrap(), cb.avg_fidelity(0.9, "C2").unwrap(), 1e-12, "swap");
    let swapped = a.resource_state().unwrap().swap_slots("C1", "C2").unwrap();
    let overlap = swapped.inner(&b.resource_state().unwrap()).unwrap();
    assert_close(overlap.norm(), 1.0, 1e-12, "swapped state");
}

#[test]
fn four_receivers_cannot_recycle() {
    for m in 4..=6 {
        let r = man(&ScenarioConfig::optimal(m, 2.0 / 3.0 + 1e-6)).unwrap();
        assert_eq!(r.man, 1, "M={m}");
        assert!(r.first_invalid_lambda.unwrap() > 1.0);
    }
    assert_eq!(man(&ScenarioConfig::optimal(3, 2.0 / 3.0 + 1e-6)).unwrap().man, 2);
    assert!(ChannelState::fresh(5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn simulation_matches_closed_form(
        m in 1usize..=3,
        lambdas in prop::collection::vec(0.05f64..=1.0, 1..=3),
    ) {
        let schedule = RoundSchedule::all_refuse(m, &lambdas).unwrap();
        for r in run_schedule(&DisentangleParams::optimal(m), &schedule).unwrap() {
            prop_assert!(r.abs_diff.unwrap() <= 1e-10, "{r:?}");
            prop_assert!((r.f_closed.unwrap() - closed_fidelity(m, &lambdas[..r.round]).unwrap()).abs() == 0.0);
        }
    }

    #[test]
    fn kernel_strictly_decreasing(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (p_lo, p_hi) = (p_kernel(lo).unwrap(), p_kernel(hi).unwrap());
        prop_assert!(p_lo > p_hi);
        prop_assert!((0.0..=1.0).contains(&p_lo) && (0.0..=1.0).contains(&p_hi));
    }

    #[test]
    fn man_monotone_in_floor(a in 0.667f64..=0.8333, b in 0.667f64..=0.8333) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f = |x| BoundaryFamily::FidelityFloor.man_at(x).unwrap();
        prop_assert!(f(lo) >= f(hi));
    }

    #[test]
    fn man_monotone_in_eta(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for family in [BoundaryFamily::PortEta, BoundaryFamily::ReceiverEta] {
            prop_assert!(family.man_at(lo).unwrap() <= family.man_at(hi).unwrap());
        }
    }

    #[test]
    fn recycled_states_stay_physical(l1 in 0.01f64..=1.0, l2 in 0.01f64..=1.0, accept in any::<bool>()) {
        let ch = ChannelState::fresh(2).unwrap();
        let first = ch.recycle(l1, &AcceptanceMask::new(vec![accept, false])).unwrap();
        let second = first.recycle(l2, &AcceptanceMask::all_refuse(first.receivers().len())).unwrap();
        second.rho().check_invariants().unwrap();
        prop_assert_eq!(second.round_index(), 2);
    }
}
