#[path = "common/props.rs"]
mod props;

#[test]
fn series_ring_axioms() {
    props::series_ring_axioms().unwrap();
}

#[test]
fn cyclotomic_field_axioms() {
    props::cyclotomic_field_axioms().unwrap();
}

#[test]
fn chamber_perturbation_stability() {
    props::chamber_perturbation_stability().unwrap();
}

#[test]
fn cone_antisymmetry() {
    props::cone_antisymmetry().unwrap();
}
