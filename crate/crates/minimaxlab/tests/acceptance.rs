//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! The checks live in `minimaxlab::replication` so the CLI `replicate`
//! subcommand runs exactly the same code.

use minimaxlab::replication;

fn report(criterion: &str, description: &str, result: replication::CaseResult) {
    match &result {
        Ok(()) => println!("{criterion}: PASS — {description}"),
        Err(msg) => println!("{criterion}: FAIL — {description}: {msg}"),
    }
    if let Err(msg) = result {
        panic!("{criterion} failed: {msg}");
    }
}

#[test]
fn acceptance_01_quadratic_classification() {
    report(
        "criterion 01",
        "quadratic classification regression and six-way saddle equivalence on 500 games",
        replication::quadratic_classification(42, 500),
    );
}

#[test]
fn acceptance_02_global_value_oracle() {
    report(
        "criterion 02",
        "grid oracle on x⁴/4 − x²/2 + xy at step 0.005",
        replication::nc_global_values(0.005),
    );
}

#[test]
fn acceptance_03_predicate_root_equivalence() {
    report(
        "criterion 03",
        "stability predicates equal characteristic-root tests on 10⁴ draws per family",
        replication::predicate_root_equivalence(42, 10_000),
    );
}

#[test]
fn acceptance_04_region_figures() {
    report(
        "criterion 04",
        "801×801 stability-region rasters: spot checks and nesting",
        replication::region_figures(42, 801, 2),
    );
}

#[test]
fn acceptance_05_two_timescale_grids() {
    report(
        "criterion 05",
        "hyper-parameter grids on q = −x²+xy (GDA/HB/NAG never stable; EG/OGD need two time scales; alternating variants; simulate confirmations)",
        replication::thm_all_reproduction(),
    );
}

#[test]
fn acceptance_06_failure_lrp() {
    report(
        "criterion 06",
        "robust point of the 2d split game defeats OGD for every hyper-parameter choice",
        replication::failure_lrp_reproduction(),
    );
}

#[test]
fn acceptance_07_bilinear_gda() {
    report(
        "criterion 07",
        "GDA never contracts on xy; EG(0.1, 0.1, 1) converges below 1e-6",
        replication::bilinear_gda(),
    );
}

#[test]
fn acceptance_08_envelope_danskin() {
    report(
        "criterion 08",
        "Danskin derivatives vs finite differences, second-order terms, critical directions",
        replication::envelope_danskin_suite(),
    );
}

#[test]
fn acceptance_09_verify_definitions() {
    report(
        "criterion 09",
        "direct numeric verification of local minimax and robust points on the example set",
        replication::verify_definition_suite(),
    );
}

#[test]
fn acceptance_10_lemma_constructors() {
    report(
        "criterion 10",
        "spectrum-targeting constructors hit 50 saddle and 50 minimax targets",
        replication::lemma_constructors(42, 50),
    );
}
