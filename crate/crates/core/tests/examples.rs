mod fock_states {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fock_states.rs"));
}

#[test]
fn fock_states_runs() {
    fock_states::run_example().expect("fock_states example should run");
}

mod radial_distribution {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/radial_distribution.rs"));
}

#[test]
fn radial_distribution_runs() {
    radial_distribution::run_example().expect("radial_distribution example should run");
}

mod wigner_phase_operator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/wigner_phase_operator.rs"));
}

#[test]
fn wigner_phase_operator_runs() {
    wigner_phase_operator::run_example().expect("wigner_phase_operator example should run");
}

mod pegg_barnett {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pegg_barnett.rs"));
}

#[test]
fn pegg_barnett_runs() {
    pegg_barnett::run_example().expect("pegg_barnett example should run");
}

mod weak_equivalence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weak_equivalence.rs"));
}

#[test]
fn weak_equivalence_runs() {
    weak_equivalence::run_example().expect("weak_equivalence example should run");
}

mod angle_operator_moments {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/angle_operator_moments.rs"));
}

#[test]
fn angle_operator_moments_runs() {
    angle_operator_moments::run_example().expect("angle_operator_moments example should run");
}

mod figure1 {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/figure1.rs"));
}

#[test]
fn figure1_runs() {
    figure1::run_example().expect("figure1 example should run");
}
