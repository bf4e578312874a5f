//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{c, pair, pair_pb_closed, pair_wigner_closed, random_hermitian, random_state};
use nalgebra::DVector;
use phasekit::analysis::{covariance_defect, q_moment_mismatch_with, weak_equivalence_scan};
use phasekit::fock::{coherent_state, number_state, phase_conjugate, superpose, Matrix};
use phasekit::pegg_barnett::{pb_density, pb_limit_moment, phi_s_matrix, phi_s_moment};
use phasekit::phase_op::{rho_w_zero, trace_distribution, WignerPhaseOperator};
use phasekit::wigner::phase_distribution_radial;
use phasekit::{DensityMatrix, OperatorMatrix, PhaseDistribution, PhaseGrid, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Report {
    failed: usize,
}

impl Report {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn max_err(d: &PhaseDistribution, f: impl Fn(f64) -> f64) -> f64 {
    d.grid.samples().zip(&d.values).map(|(t, v)| (v - f(t)).abs()).fold(0.0, f64::max)
}

fn fig1a(report: &mut Report, n: usize) {
    let start = Instant::now();
    let cutoff = 20;
    let grid = PhaseGrid::new(-PI, 720).unwrap();
    let psi = pair(n, cutoff);
    let rho = DensityMatrix::from_pure(&psi);
    let radial = phase_distribution_radial(&rho, &grid).unwrap();
    let op = WignerPhaseOperator::new(cutoff).unwrap();
    let operator = trace_distribution(&rho, &grid, &op).unwrap();
    let pb = pb_density(&psi, &grid);
    let elapsed = start.elapsed();

    let e_rad = max_err(&radial, |t| pair_wigner_closed(n, t));
    let e_op = max_err(&operator, |t| pair_wigner_closed(n, t));
    let e_pb = max_err(&pb, |t| pair_pb_closed(n, t));
    let mut ok = e_rad <= 1e-6 && e_op <= 1e-6 && e_pb <= 1e-10 && elapsed <= Duration::from_secs(10);
    let mut detail = format!(
        "radial {e_rad:.1e}, operator {e_op:.1e} (tol 1e-6); PB {e_pb:.1e} (tol 1e-10); {:.2} s",
        elapsed.as_secs_f64()
    );
    if n == 2 {
        let expect = (1.0 - 8.0 / 24f64.sqrt()) / (2.0 * PI);
        let dev = (radial.min() - expect).abs().max((operator.min() - expect).abs());
        ok &= dev <= 1e-6;
        detail.push_str(&format!("; min P^W {:.7} vs {expect:.7}", radial.min()));
    }
    report.record(&format!("fig1a_n{n}"), ok, detail);
}

fn negativity_witness(report: &mut Report) {
    let grid = PhaseGrid::new(-PI, 720).unwrap();
    let psi = pair(1, 20);
    let w = phase_distribution_radial(&DensityMatrix::from_pure(&psi), &grid).unwrap();
    let pb = pb_density(&psi, &grid);
    let expect = (1.0 - 2f64.sqrt()) / (2.0 * PI);
    let dev = (w.min() - expect).abs();
    let ok = dev <= 1e-6 && pb.min().abs() <= 1e-10;
    report.record(
        "negativity_witness",
        ok,
        format!("min P^W {:.7} (expected {expect:.7}, dev {dev:.1e}); min P_PB {:.1e}", w.min(), pb.min()),
    );
}

fn fig1b(report: &mut Report) {
    let start = Instant::now();
    let cutoff = 160;
    let grid = PhaseGrid::new(-PI, 720).unwrap();
    let a = coherent_state(c(-2.0, 0.0), cutoff, 1e-10).unwrap();
    let b = coherent_state(c(8.0, 0.0), cutoff, 1e-10).unwrap();
    let cat = superpose(&[(c(1.0, 0.0), &a), (c(1.0, 0.0), &b)]).unwrap().state;
    let w = phase_distribution_radial(&DensityMatrix::from_pure(&cat), &grid).unwrap();
    let pb = pb_density(&cat, &grid);
    let elapsed = start.elapsed();

    let m = grid.count();
    let h = grid.spacing();
    let int_w: f64 = w.values.iter().sum::<f64>() * h;
    let int_pb: f64 = pb.values.iter().sum::<f64>() * h;
    let negative = w.values.iter().filter(|&&v| v < 0.0).count() as f64 / m as f64;
    let asym = (0..m).map(|i| (w.values[i] - w.values[(m - i) % m]).abs()).fold(0.0, f64::max);
    let ok = (int_w - 1.0).abs() <= 1e-5
        && (int_pb - 1.0).abs() <= 1e-5
        && negative > 0.0
        && asym <= 1e-6
        && elapsed <= Duration::from_secs(120);
    report.record(
        "fig1b_cat",
        ok,
        format!(
            "cutoff {cutoff}: ∫P^W − 1 = {:.1e}, ∫P_PB − 1 = {:.1e}, negative fraction {negative:.4}, θ→−θ asymmetry {asym:.1e}, min P^W {:.5}; {:.2} s",
            int_w - 1.0,
            int_pb - 1.0,
            w.min(),
            elapsed.as_secs_f64()
        ),
    );
}

fn oracle_states(cutoff: usize) -> Vec<(&'static str, StateVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    vec![
        ("|0>", number_state(0, cutoff).unwrap()),
        ("|3>", number_state(3, cutoff).unwrap()),
        ("pair n=1", pair(1, cutoff)),
        ("pair n=2", pair(2, cutoff)),
        ("|alpha=1>", coherent_state(c(1.0, 0.0), cutoff, 1e-10).unwrap()),
        ("random 5-photon", random_state(&mut rng, 5, cutoff)),
    ]
}

fn cross_path(report: &mut Report) {
    let grid = PhaseGrid::new(-PI, 720).unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for cutoff in [20, 40] {
        let op = WignerPhaseOperator::new(cutoff).unwrap();
        for (name, psi) in oracle_states(cutoff) {
            let rho = DensityMatrix::from_pure(&psi);
            let a = trace_distribution(&rho, &grid, &op).unwrap();
            let b = phase_distribution_radial(&rho, &grid).unwrap();
            let d = a.max_abs_diff(&b);
            if d >= worst {
                worst = d;
                worst_at = format!("{name} at cutoff {cutoff}");
            }
        }
    }
    report.record("cross_path", worst <= 1e-7, format!("max |P_op − P_radial| = {worst:.1e} ({worst_at}); tol 1e-7"));
}

fn covariance(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cutoff = 12;
    let op = WignerPhaseOperator::new(cutoff).unwrap();
    let grid = PhaseGrid::new(-PI, 90).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..5 {
        let psi = random_state(&mut rng, cutoff, cutoff);
        let phi = 0.3 + 1.1 * k as f64;
        worst = worst.max(covariance_defect(&DensityMatrix::from_pure(&psi), &op, phi, &grid).unwrap());
    }
    report.record("covariance", worst <= 1e-9, format!("max defect over 5 random states {worst:.1e}; tol 1e-9"));
}

fn weak_equivalence(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let cutoff = 8;
    let grid = PhaseGrid::new(-PI, 36).unwrap();
    let rw = WignerPhaseOperator::new(cutoff).unwrap();
    let s_rw = weak_equivalence_scan(|t| rw.at(t), cutoff, &grid).unwrap();
    let seeds: Vec<OperatorMatrix> = (0..3).map(|_| random_hermitian(&mut rng, cutoff)).collect();
    let s_conj: Vec<f64> = seeds
        .iter()
        .map(|a0| weak_equivalence_scan(|t| phase_conjugate(a0, t), cutoff, &grid).unwrap())
        .collect();
    // conjugating with the wrong sign breaks covariance
    let a0 = &seeds[0];
    let s_bad = weak_equivalence_scan(|t| phase_conjugate(a0, -t), cutoff, &grid).unwrap();
    let worst = s_conj.iter().copied().fold(s_rw, f64::max);
    report.record(
        "weak_equivalence",
        worst <= 1e-9 && s_bad > 1e-3,
        format!("rho_w {s_rw:.1e}, random families {:.1e}/{:.1e}/{:.1e} (tol 1e-9); non-covariant {s_bad:.3}", s_conj[0], s_conj[1], s_conj[2]),
    );
}

fn non_positivity(report: &mut Report) {
    let min = rho_w_zero(10).unwrap().min_eigenvalue();
    report.record("non_positivity", min < -1e-3, format!("min eigenvalue of rho_W(0) at cutoff 10 = {min:.6}"));
}

fn q_mismatch(report: &mut Report) {
    let mut worst_p1: f64 = 0.0;
    let op20 = WignerPhaseOperator::new(20).unwrap();
    for (_, psi) in oracle_states(20) {
        let m = q_moment_mismatch_with(&DensityMatrix::from_pure(&psi), &op20, -PI, 1).unwrap();
        worst_p1 = worst_p1.max(m.gap);
    }
    let gaps: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&cutoff| {
            let op = WignerPhaseOperator::new(cutoff).unwrap();
            q_moment_mismatch_with(&DensityMatrix::from_pure(&pair(1, cutoff)), &op, -PI, 2).unwrap().gap
        })
        .collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let spread = gaps.iter().map(|g| (g / mean - 1.0).abs()).fold(0.0, f64::max);
    let ok = worst_p1 <= 1e-9 && gaps.iter().all(|&g| g > 1e-3) && spread <= 0.10;
    report.record(
        "q_moment_mismatch",
        ok,
        format!(
            "p=1 max gap {worst_p1:.1e} (tol 1e-9); p=2 pair n=1 gaps at cutoffs 10/20/40 = {:.4}/{:.4}/{:.4} (> 1e-3), spread {:.0}% of mean (tol 10%)",
            gaps[0],
            gaps[1],
            gaps[2],
            100.0 * spread
        ),
    );
}

fn pb_moments(report: &mut Report) {
    let psi = pair(1, 2);
    let expect = PI * PI / 3.0 + 0.5;
    let limit = pb_limit_moment(-PI, &psi, 2);
    let at_1024 = phi_s_moment(1024, -PI, &psi, 2).unwrap().finite;
    let gap = (at_1024 - limit).abs();

    let mut worst_riemann: f64 = 0.0;
    for s in [2usize, 3, 5, 8, 13, 32, 100, 256, 1024] {
        let padded = psi.with_cutoff(s).unwrap();
        let v = DVector::from_column_slice(padded.amplitudes());
        let phi: Matrix = phi_s_matrix(s, -PI).pow(2).into_matrix();
        let by_matrix = (v.adjoint() * phi * &v)[(0, 0)].re;
        let h = 2.0 * PI / (s + 1) as f64;
        let rect: f64 = (0..=s)
            .map(|m| {
                let t = -PI + m as f64 * h;
                h * t * t * pair_pb_closed(1, t)
            })
            .sum();
        worst_riemann = worst_riemann.max((by_matrix - rect).abs());
    }
    let ok = (limit - expect).abs() <= 1e-6 && gap <= 1e-3 && worst_riemann <= 1e-12;
    report.record(
        "pb_moments",
        ok,
        format!(
            "limit <phi^2> {limit:.9} vs π²/3+1/2 {expect:.9}; gap at s=1024 {gap:.1e} (tol 1e-3); Riemann identity {worst_riemann:.1e} (tol 1e-12)"
        ),
    );
}

fn main() {
    let mut report = Report { failed: 0 };
    fig1a(&mut report, 1);
    fig1a(&mut report, 2);
    negativity_witness(&mut report);
    fig1b(&mut report);
    cross_path(&mut report);
    covariance(&mut report);
    weak_equivalence(&mut report);
    non_positivity(&mut report);
    q_mismatch(&mut report);
    pb_moments(&mut report);
    println!("{} criteria failed", report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
