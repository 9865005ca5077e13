//! Acceptance gate: nine end-to-end checks covering the whole engine, one
//! test per criterion.  Every tolerance and runtime budget is pinned here in
//! code; each test finishes by printing a single `[PASS]` line (visible with
//! `--nocapture`).  Oracle counts are re-derived in this file by direct
//! enumeration, independent of the library's closed forms.

use num_bigint::BigUint;
use so42::branching::{
    so32_parity_split, so4_to_so3, so4_to_so3_table, tower_so3_content, tower_so4_table, So4Label,
};
use so42::chart::{assign_elements, chart_rows, commuting_set_census, racah_count};
use so42::constraint::fiber_descent;
use so42::ks::check_suite;
use so42::so42::{casimirs, label_states, orbit_span, verify_commutators, GeneratorSet};
use so42::spectrum::{hydrogen_degeneracy, oscillator_degeneracy, oscillator_hydrogen_bridge};
use std::collections::BTreeSet;
use std::time::Instant;

/// Number of occupation vectors of `modes` nonnegative integers with the
/// given sum (brute Pascal recursion, no closed form).
fn count_occupations(modes: u32, total: i64) -> u64 {
    if total < 0 {
        return 0;
    }
    if modes == 0 {
        return u64::from(total == 0);
    }
    if modes == 1 {
        return 1;
    }
    (0..=total).map(|first| count_occupations(modes - 1, total - first)).sum()
}

/// Dimension of the degree-`l` harmonics in `vars` variables, counted as
/// monomials of degree `l` minus monomials of degree `l - 2`.
fn harmonic_count(vars: u32, l: u32) -> u64 {
    count_occupations(vars, i64::from(l)) - count_occupations(vars, i64::from(l) - 2)
}

/// Bound-level size in `dim` spatial dimensions by enumeration: angular
/// content `l = 0..n-1`, one harmonic block each.
fn hydrogen_oracle(dim: u32, n: u32) -> u64 {
    (0..n).map(|l| harmonic_count(dim, l)).sum()
}

#[test]
fn a1_commutation_table_closes_at_cutoff_ten() {
    let start = Instant::now();
    let gen = GeneratorSet::build(10).unwrap();
    assert_eq!(gen.basis().size(), 1001, "four modes, total occupation <= 10");
    let report = verify_commutators(&gen, false).unwrap();
    assert_eq!(report.checks.len(), 105, "all unordered generator pairs");
    let worst = report.max_residual();
    assert!(worst < 1e-10, "worst commutator residual {worst:.3e} must stay below 1e-10");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "single-threaded budget of 60 s, took {elapsed:?}");
    println!(
        "[PASS] 1: 105/105 commutators close on the safe window, max residual {worst:.3e}, {elapsed:.2?}"
    );
}

#[test]
fn a2_tower_states_share_the_three_invariant_eigenvalues() {
    let start = Instant::now();
    let gen = GeneratorSet::build(14).unwrap();
    let inv = casimirs(&gen, false).unwrap();
    assert!(inv.exact_level_window() >= 4);
    let states = label_states(&gen, 4, 1e-8).unwrap();
    assert_eq!(states.len(), 30, "1 + 4 + 9 + 16 labeled states");
    let evals = inv.evaluate_on(&states).unwrap();
    let mut worst = 0.0f64;
    for e in &evals {
        worst = worst
            .max((e.quadratic - 6.0).abs())
            .max(e.cubic.abs())
            .max((e.quartic + 12.0).abs())
            .max(e.residual);
    }
    assert!(worst < 1e-8, "worst invariant deviation {worst:.3e} must stay below 1e-8");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "budget of 5 min, took {elapsed:?}");
    println!(
        "[PASS] 2: 30/30 tower states carry invariants (6, 0, -12), worst deviation {worst:.3e}, {elapsed:.2?}"
    );
}

#[test]
fn a3_fiber_descent_reproduces_the_conformal_algebra() {
    let start = Instant::now();
    let descent = fiber_descent().unwrap();
    let report = descent.report();
    assert_eq!(report.parent_dim, 36);
    assert_eq!(report.centralizer_dim, 16);
    assert_eq!(report.quotient_dim, 15);
    assert_eq!(report.killing_signature, (8, 7, 0));
    assert_eq!(report.rank, 3);
    assert_eq!(descent.quotient_center_dim, 0, "the quotient is centerless");
    assert!(report.matches_reference, "invariants match the 6x6 defining representation");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "budget of 10 s, took {elapsed:?}");
    println!(
        "[PASS] 3: descent 36 -> 16 -> 15 with Killing (8,7,0), rank 3, centerless, defining-rep match, {elapsed:.2?}"
    );
}

#[test]
fn a4_degeneracy_formulas_match_enumeration() {
    let mut checked = 0u32;
    for dim in 2..=8u32 {
        for n in 1..=10u32 {
            let formula = hydrogen_degeneracy(dim, n).unwrap();
            assert_eq!(
                formula,
                BigUint::from(hydrogen_oracle(dim, n)),
                "bound-level size at dim {dim}, level {n}"
            );
            checked += 1;
        }
    }
    for dim in 1..=8u32 {
        for n in 0..=12u32 {
            let formula = oscillator_degeneracy(dim, n).unwrap();
            assert_eq!(
                formula,
                BigUint::from(count_occupations(dim, i64::from(n))),
                "oscillator level size at dim {dim}, level {n}"
            );
            checked += 1;
        }
    }
    for n in 1..=10u64 {
        assert_eq!(hydrogen_degeneracy(3, n as u32).unwrap(), BigUint::from(n * n));
    }
    println!("[PASS] 4: {checked} degeneracy values equal enumeration exactly; d_3(n) = n^2 through n = 10");
}

#[test]
fn a5_oscillator_level_counts_bridge_to_hydrogen() {
    for n in 1..=5u32 {
        let record = oscillator_hydrogen_bridge(n).unwrap();
        assert!(record.consistent);
        assert_eq!(record.constrained_count, u64::from(n) * u64::from(n));
        assert_eq!(
            record.unconstrained_count,
            count_occupations(4, 2 * (i64::from(n) - 1)),
            "full 4-mode count at oscillator level 2(n-1)"
        );
    }
    println!("[PASS] 5: constrained 4-mode counts equal n^2 and full counts equal the oscillator sizes, n = 1..5");
}

#[test]
fn a6_branching_tables_match_operator_labeling() {
    let gen = GeneratorSet::build(10).unwrap();

    // Combinatorial tables against operator-level labels through level 4.
    let states = label_states(&gen, 4, 1e-8).unwrap();
    for n in 1..=4u32 {
        let level: Vec<_> = states.iter().filter(|s| s.n == n).collect();
        assert_eq!(level.len(), (n * n) as usize, "level {n} size");
        let label = So4Label::balanced(n - 1);
        assert_eq!(so4_to_so3_table(label).unwrap().total_dimension(), u64::from(n) * u64::from(n));
        let mut ls: Vec<u32> =
            level.iter().filter(|s| s.m == 0).map(|s| s.l).collect();
        ls.sort_unstable();
        assert_eq!(ls, so4_to_so3(label).unwrap(), "angular content of level {n}");
    }
    for (l, mult) in tower_so3_content(4) {
        let seen = (1..=4u32)
            .filter(|&n| states.iter().any(|s| s.n == n && s.l == l && s.m == 0))
            .count() as u32;
        assert_eq!(seen, mult, "multiplicity of l = {l} across the tower");
    }
    assert_eq!(tower_so4_table(4).total_dimension(), 30, "dimension sum conserved");

    // Ten-generator closure and (n + l) parity preservation.
    let tall = label_states(&gen, 5, 1e-8).unwrap();
    let split = so32_parity_split(&gen, &tall, 1e-10).unwrap();
    assert!(split.closure_max_residual < 1e-10, "closure residual {:.3e}", split.closure_max_residual);
    assert!(split.parity_leak < 1e-10, "parity leak {:.3e}", split.parity_leak);
    assert!(split.control_leak > 0.99, "the excluded generator must flip parity");
    println!(
        "[PASS] 6: branching tables match operator labels through level 4; subalgebra closure {:.3e}, parity leak {:.3e}",
        split.closure_max_residual, split.parity_leak
    );
}

#[test]
fn a7_quadratic_map_satisfies_its_exact_identities() {
    let start = Instant::now();
    let checks = check_suite(1000, 2026, 1e-12);
    for c in &checks {
        assert!(c.pass, "property {} failed: max error {:.3e}", c.property, c.max_error);
    }
    for name in ["norm_square", "fiber_invariance", "constraint_along_fiber"] {
        let c = checks.iter().find(|c| c.property == name).unwrap();
        assert_eq!(c.samples, 1000);
        assert!(c.max_error < 1e-12, "{name} error {:.3e} must stay below 1e-12", c.max_error);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "budget of 1 s, took {elapsed:?}");
    println!("[PASS] 7: 1000-point map identities hold to 1e-12 relative, {elapsed:.2?}");
}

#[test]
fn a8_ladder_orbit_fills_the_tower() {
    let gen = GeneratorSet::build(10).unwrap();
    let span = orbit_span(&gen, 4, 1e-8).unwrap();
    assert_eq!(span.len(), 30, "vacuum orbit spans 1 + 4 + 9 + 16 states");
    println!("[PASS] 8: the vacuum orbit under the ladder and rotations spans all 30 tower states");
}

#[test]
fn a9_chart_rows_slots_and_census() {
    assert_eq!(chart_rows(4), vec![2, 8, 18, 32]);

    let entries = assign_elements(21);
    assert_eq!(
        (entries[0].n, entries[0].l, entries[0].m, entries[0].two_m_s),
        (1, 0, 0, -1),
        "Z = 1"
    );
    assert_eq!(
        (entries[1].n, entries[1].l, entries[1].m, entries[1].two_m_s),
        (1, 0, 0, 1),
        "Z = 2"
    );
    assert_eq!(
        (entries[20].n, entries[20].l, entries[20].m, entries[20].two_m_s),
        (3, 2, -2, -1),
        "Z = 21 opens the 3d subshell"
    );
    let slots: BTreeSet<_> = entries.iter().map(|e| (e.n, e.l, e.m, e.two_m_s)).collect();
    assert_eq!(slots.len(), entries.len());

    assert_eq!(racah_count(15, 3).unwrap(), 3);
    let census = commuting_set_census();
    assert_eq!(census.components[0].subtotal, 9);
    assert_eq!(census.components[1].subtotal, 2);
    assert_eq!(census.total, 11);
    println!("[PASS] 9: chart rows 2/8/18/32, slot pins for Z = 1, 2, 21, and an 11-operator census");
}
