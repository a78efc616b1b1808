//! The acceptance gate: one test per verification criterion, each printing
//! a single pass/fail line.  Run with `cargo test --test acceptance` (add
//! `-- --nocapture` to see the lines for passing criteria too).

use umod_cli::verify::{criterion_names, run_criterion};

fn gate(id: u32) {
    let name = criterion_names()[(id - 1) as usize];
    let outcome = run_criterion(id, 0);
    println!("criterion {id} ({name}): {}", if outcome.pass { "PASS" } else { "FAIL" });
    if !outcome.pass {
        for detail in &outcome.details {
            println!("  {detail}");
        }
    }
    assert!(outcome.pass, "criterion {id} ({name}) failed");
}

#[test]
fn criterion_01_steenrod_kernel() {
    gate(1);
}

#[test]
fn criterion_02_cyclic_classes_rank1() {
    gate(2);
}

#[test]
fn criterion_03_cyclic_classes_rank2() {
    gate(3);
}

#[test]
fn criterion_04_two_generator_census() {
    gate(4);
}

#[test]
fn criterion_05_smith_reports() {
    gate(5);
}

#[test]
fn criterion_06_projective_plane() {
    gate(6);
}

#[test]
fn criterion_07_fixed_points() {
    gate(7);
}

#[test]
fn criterion_08_random_map_lemmas() {
    gate(8);
}

#[test]
fn criterion_09_predicate_counterexamples() {
    gate(9);
}

#[test]
fn criterion_10_resolution_and_pair() {
    gate(10);
}

#[test]
fn criterion_11_euler_models() {
    gate(11);
}
