mod common;

use tcdyn_core::hilbert::StateVector;
use tcdyn_core::linalg::{expectation, Eigensystem};
use tcdyn_core::model::hamiltonian_matrix;
use tcdyn_core::propagator::{convergence_check, propagate};

#[test]
fn unitary_over_many_segments() {
    let p = common::device(2);
    let sched = p.schedule_for_ratio(20.0).unwrap();
    let t_final = 50.0;
    assert!(sched.segments(t_final).len() >= 10_000);
    let traj = propagate(&p, &sched, t_final, 0.5).unwrap();
    assert!(traj.max_norm_drift() <= 1e-9, "{:e}", traj.max_norm_drift());
}

#[test]
fn reversible() {
    let p = common::device(2);
    let sched = p.schedule_for_ratio(5.0).unwrap();
    let t_final = 3.0;
    let traj = propagate(&p, &sched, t_final, 0.1).unwrap();
    let on = Eigensystem::new(&hamiltonian_matrix(&p, sched.g0())).unwrap();
    let off = Eigensystem::new(&hamiltonian_matrix(&p, 0.0)).unwrap();
    let mut psi = traj.final_state().amplitudes().to_vec();
    for seg in sched.segments(t_final).iter().rev() {
        let eig = if seg.on { &on } else { &off };
        psi = eig.evolve(-seg.duration(), &psi);
    }
    let back = StateVector::new(p.space(), psi).unwrap();
    let ground = StateVector::ground(p.space());
    let err: f64 = back.amplitudes().iter().zip(ground.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn sampling_does_not_change_stepping() {
    let p = common::device(2);
    let sched = p.schedule_for_ratio(7.0).unwrap();
    let coarse = propagate(&p, &sched, 4.0, 0.02).unwrap();
    let fine = propagate(&p, &sched, 4.0, 0.01).unwrap();
    for (k, s) in coarse.samples.iter().enumerate() {
        let f = &fine.samples[2 * k];
        assert!((f.t - s.t).abs() < 1e-12);
        for (a, b) in s.state.amplitudes().iter().zip(f.state.amplitudes()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }
}

#[test]
fn energy_constant_within_segment() {
    let p = common::device(2);
    let sched = p.schedule_for_ratio(0.5).unwrap();
    let h_on = hamiltonian_matrix(&p, sched.g0());
    // first segment lasts T/2 ≈ 0.18 ns; sample inside it
    let traj = propagate(&p, &sched, 0.18, 0.01).unwrap();
    let e0 = expectation(&h_on, traj.samples[0].state.amplitudes());
    for s in &traj.samples {
        assert!((expectation(&h_on, s.state.amplitudes()) - e0).abs() <= 1e-10);
    }
}

#[test]
fn photon_cutoff_converges() {
    let p = common::device(2);
    let sched = p.schedule_for_ratio(20.0).unwrap();
    let r = convergence_check(&p, &sched, 10.0, 0.02, 2, 0).unwrap();
    assert!(r.sup_diff < 1e-3, "{r:?}");
    assert!(r.converged);
    let diffs: Vec<f64> = (1..=3).map(|n| convergence_check(&p, &sched, 10.0, 0.02, n, 0).unwrap().sup_diff).collect();
    assert!(diffs.windows(2).all(|w| w[1] <= w[0]), "{diffs:?}");
}
