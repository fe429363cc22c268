//! Acceptance battery.
//!
//! Each test drives one verification group at full scale and enforces
//! its runtime budget, printing one pass/fail line per criterion (run
//! with `--nocapture` to see the lines for passing tests; cargo's own
//! per-test output gives the same verdicts either way).

use deltaquot_cli::selftest::{run_all, run_group, GroupOutcome, Scale};

fn criterion(number: u32, group: &str, budget_ms: u128) -> GroupOutcome {
    let outcome = run_group(group, Scale::Full).expect("known group name");
    let verdict = if outcome.passed && outcome.millis < budget_ms {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "criterion {number}: {verdict} {} ({} ms, budget {} ms): {}",
        outcome.name, outcome.millis, budget_ms, outcome.detail
    );
    assert!(
        outcome.passed,
        "criterion {number} ({}) failed: {}",
        outcome.name, outcome.detail
    );
    assert!(
        outcome.millis < budget_ms,
        "criterion {number} ({}) took {} ms, budget {} ms",
        outcome.name,
        outcome.millis,
        budget_ms
    );
    outcome
}

/// Golden example 1 over all three field shapes: Λ, Λ⁻¹, and the three
/// standard bridge rays match the symbolic forms after substitution.
#[test]
fn criterion_1_golden_example_1() {
    criterion(1, "golden-example-1", 1_000);
}

/// Golden example 2 (q = 3, n = T(T+1)²): printed 6×6 data, bridge
/// image, unit-criterion sums, order 12, bound 192, and 12 | 192.
#[test]
fn criterion_2_golden_example_2() {
    criterion(2, "golden-example-2", 1_000);
}

/// Closed-form Υ(𝔭^r)⁻¹ equals fraction-free generic inversion for all
/// (q, deg 𝔭, r) ∈ {2,3,4} × {1,2,3} × {1,…,5}.
#[test]
fn criterion_3_closed_form_inverse() {
    criterion(3, "closed-form-inverse", 10_000);
}

/// ≥1000 random zero-sum exponent vectors (deg n ≤ 6, q ∈ {2,3,4}):
/// theorem verdict ≡ lemma verdict, and T1 ⟺ T2.
#[test]
fn criterion_4_criterion_equivalence() {
    criterion(4, "criterion-equivalence", 10_000);
}

/// ≥200 random degree-0 divisors (deg n ≤ 8): N·Λ⁻¹a is integral,
/// Λ·r = N·a, and the bridge is injective and linear on sampled pairs.
#[test]
fn criterion_5_bridge_soundness() {
    criterion(5, "bridge-soundness", 20_000);
}

/// Every factorization shape with deg n ≤ 8 over q ∈ {2,3,4,5}:
/// Σ_d Λ[d][a]·deg_P(d) is independent of the column a.
#[test]
fn criterion_6_degree_consistency() {
    criterion(6, "degree-consistency", 10_000);
}

/// All (n, m | n, d | n) with deg n ≤ 6: the piecewise ramification
/// formula equals the ratio of the two order formulas, and composed
/// one-prime degeneracy maps send height d to height gcd(d, m).
#[test]
fn criterion_7_ramification_coherence() {
    criterion(7, "ramification-coherence", 10_000);
}

/// The conjectural order divides the exponent bound on every divisor in
/// the criterion-5 corpus (same seed, same generator).  Its runtime is
/// budgeted jointly with criterion 5.
#[test]
fn criterion_8_order_divides_bound() {
    let bridge = run_group("bridge-soundness", Scale::Full).expect("known group name");
    assert!(
        bridge.passed,
        "criterion 8 prerequisite (bridge-soundness) failed: {}",
        bridge.detail
    );
    let bound = criterion(8, "exponent-bound", 20_000);
    assert!(
        bridge.millis + bound.millis < 20_000,
        "criteria 5+8 combined took {} ms, budget 20000 ms",
        bridge.millis + bound.millis
    );
}

/// Arithmetic substrate: factorization reconstruction, independent
/// irreducibility oracle, xgcd identity, norm multiplicativity — 500
/// random cases each.
#[test]
fn criterion_9_arithmetic_substrate() {
    criterion(9, "arithmetic-substrate", 5_000);
}

/// The complete full-scale battery finishes in under a minute.
#[test]
fn full_suite_under_60_seconds() {
    let start = std::time::Instant::now();
    let outcomes = run_all(Scale::Full);
    let total = start.elapsed().as_millis();
    for o in &outcomes {
        println!(
            "suite: {} {} ({} ms)",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.millis
        );
        assert!(o.passed, "group {} failed: {}", o.name, o.detail);
    }
    assert!(total < 60_000, "full suite took {total} ms, budget 60000 ms");
}
