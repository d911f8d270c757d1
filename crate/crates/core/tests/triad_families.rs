use ufh_core::expansion::SearchLimits;
use ufh_core::triad::{triad_report, TriadParams};
use ufh_core::FamilySpec;

fn params(window_radii: Vec<usize>, rips_radii: Vec<usize>, r_max: usize) -> TriadParams {
    TriadParams { window_radii, rips_radii, r_max, margin: 1, circuit_cap: 200_000, limits: SearchLimits::default() }
}

#[test]
fn growing_chain_shows_large_circuits() {
    let spec = FamilySpec::GrowingCircuitChain { lengths: (2..=10).map(|k| 2 * k).collect() };
    let r = triad_report(&spec, &params(vec![60, 70], vec![1, 2], 20)).unwrap();
    eprintln!("{:?}", r.profiles);
    assert_eq!(r.verdict, "large circuits");
}

#[test]
fn triangulated_grid_shows_nothing() {
    let spec = FamilySpec::Grid2d { triangulated: true };
    let r = triad_report(&spec, &params(vec![6, 8], vec![1, 3], 8)).unwrap();
    assert_eq!(r.verdict, "none");
}
