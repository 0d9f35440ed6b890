//! Acceptance suite: the engine's exit criteria, one test per criterion,
//! each printing a pass/fail line. All equalities are exact.

use std::collections::BTreeMap;

use gfc::characteristic::factorize;
use gfc::complex::{build_slice, BuildOptions, Variant};
use gfc::genfun::{
    complex_euler_series, perchik_full_series, perchik_series, stabilization_report,
};
use gfc::invariants::{character_dim_oracle, invariant_dim, Profile};
use gfc::poisson::{commutator, enumerate_monomials, poisson_bracket, sl2_action};
use gfc::verify::{run_suite, suite_tables};

fn opts() -> BuildOptions {
    BuildOptions::default()
}

fn betti(variant: Variant, weight: i64) -> BTreeMap<usize, usize> {
    build_slice(variant, weight, &opts()).unwrap().cohomology_dims()
}

fn report(criterion: &str, pass: bool) {
    println!("[{}] {criterion}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}");
}

#[test]
fn criterion_1_table_reproduction() {
    let reports = suite_tables(&opts()).unwrap();
    assert!(reports.len() >= 20);
    let pass = reports.iter().all(|r| r.pass);
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("  table check {} expected {} computed {}", r.name, r.expected, r.computed);
    }
    report("criterion 1: table reproduction (dims, chi, generator multiplicities)", pass);
}

#[test]
fn criterion_2_gkf_theorem() {
    let mut pass = true;
    for (w, expected) in [
        (-2i64, BTreeMap::from([(2usize, 1usize)])),
        (0, BTreeMap::from([(0, 1), (4, 1)])),
        (2, BTreeMap::new()),
        (4, BTreeMap::new()),
        (6, BTreeMap::new()),
        (8, BTreeMap::from([(7, 1)])),
    ] {
        let computed = betti(Variant::Ham, w);
        if computed != expected {
            eprintln!("  weight {w}: expected {expected:?}, computed {computed:?}");
            pass = false;
        }
    }
    // odd weights vanish at chain level
    for w in [1i64, 3, 5, 7] {
        let slice = build_slice(Variant::Ham, w, &opts()).unwrap();
        pass &= (0..=slice.max_degree).all(|d| slice.dim(d) == 0);
    }
    report("criterion 2: full-variant cohomology for w in {-2,0,2,4,6,8}", pass);
}

#[test]
fn criterion_3_main_theorem() {
    let mut pass = true;
    for w in [0i64, 2, 4, 6, 8, 10] {
        let expected: BTreeMap<usize, usize> = match w {
            0 => BTreeMap::from([(0, 1)]),
            2 => BTreeMap::from([(2, 1)]),
            10 => BTreeMap::from([(5, 1)]),
            _ => BTreeMap::new(),
        };
        let computed = betti(Variant::Ham0, w);
        if computed != expected {
            eprintln!("  weight {w}: expected {expected:?}, computed {computed:?}");
            pass = false;
        }
    }
    report("criterion 3: restricted-variant cohomology for even w <= 10, w=8 acyclic", pass);
}

#[test]
fn criterion_4_rank_certificates() {
    let ham0_w10 = build_slice(Variant::Ham0, 10, &opts()).unwrap();
    let ham_w8 = build_slice(Variant::Ham, 8, &opts()).unwrap();
    let mut pass = ham0_w10.coboundaries[4].rank() == 7;
    pass &= ham0_w10.coboundaries[5].rank() == 4;
    pass &= ham_w8.coboundaries[6].rank() == 9;
    pass &= ham_w8.coboundaries[7].rank() == 4;
    for slice in [&ham0_w10, &ham_w8] {
        for d in 0..slice.max_degree.saturating_sub(1) {
            pass &= slice.coboundaries[d + 1]
                .mul(&slice.coboundaries[d])
                .unwrap()
                .is_zero();
        }
    }
    report("criterion 4: rank certificates and zero composites", pass);
}

#[test]
fn criterion_5_factorization() {
    let rep = factorize(&opts()).unwrap();
    let mut pass = rep.chain_map && rep.injective;
    pass &= rep.gamma1_maps_to_p1;
    pass &= rep.closed && rep.non_exact;
    pass &= rep.support_obstruction.is_none();
    let allowed = [
        Profile::new(vec![3, 3, 3, 4, 7]),
        Profile::new(vec![3, 3, 4, 4, 6]),
        Profile::new(vec![3, 3, 4, 5, 5]),
    ];
    pass &= !rep.eta_support.is_empty()
        && rep.eta_support.iter().all(|p| allowed.contains(p));
    pass &= rep.iso && rep.omega_line;
    report("criterion 5: factorization certificate (chain map, p1 line, eta support)", pass);
}

#[test]
fn criterion_6_generating_functions() {
    let s26 = perchik_series(1, 26).unwrap();
    let mut pass = s26.to_polynomial_string()
        == "1 + t^2 - t^10 + t^12 - t^14 - t^16 + t^18 - 3t^24 + 2t^26";
    let s32 = perchik_full_series(1, 32).unwrap();
    pass &= s32.to_polynomial_string() == "t^-2 + 2 - t^8 - t^14 - t^22 - t^28 + t^30 - t^32";
    let product = perchik_series(1, 10).unwrap();
    let complex = complex_euler_series(Variant::Ham0, 10, &opts()).unwrap();
    pass &= product.agrees_with(&complex);
    report("criterion 6: product-formula series and chain-level agreement to t^10", pass);
}

#[test]
fn criterion_7_property_suite() {
    // delta squared, two-elimination ranks, rank-nullity
    let mut pass = run_suite("properties", &opts()).unwrap().iter().all(|r| r.pass);

    // Jacobi identity, exhaustive to degree 6
    'outer: for k in 1..=6usize {
        for l in 1..=6usize {
            for m in 1..=6usize {
                for f in &enumerate_monomials(1, k) {
                    for g in &enumerate_monomials(1, l) {
                        for h in &enumerate_monomials(1, m) {
                            let mut total: BTreeMap<usize, i64> = BTreeMap::new();
                            for (a, b, c) in [(f, g, h), (g, h, f), (h, f, g)] {
                                for (idx, coeff) in poisson_bracket(a, b, 1).unwrap() {
                                    if a.degree() + b.degree() == 2 {
                                        continue;
                                    }
                                    let inner =
                                        &enumerate_monomials(1, a.degree() + b.degree() - 2)[idx];
                                    for (j, c2) in poisson_bracket(inner, c, 1).unwrap() {
                                        *total.entry(j).or_insert(0) += coeff * c2;
                                    }
                                }
                            }
                            total.retain(|_, v| *v != 0);
                            if !total.is_empty() {
                                pass = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }

    // sl2 relations exact for k <= 10
    for k in 0..=10 {
        let act = sl2_action(k);
        pass &= commutator(&act.e, &act.f) == act.h;
        let he = commutator(&act.h, &act.e);
        pass &= he
            .iter()
            .zip(&act.e)
            .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| *a == 2 * b));
        let hf = commutator(&act.h, &act.f);
        pass &= hf
            .iter()
            .zip(&act.f)
            .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| *a == -2 * b));
    }

    // invariant dimension equals the character oracle to degree 8 / weight 16
    // (also exercised inside the properties suite; spot-check a heavy profile)
    pass &= invariant_dim(&Profile::new(vec![3, 3, 5, 5, 6, 6]))
        == character_dim_oracle(&Profile::new(vec![3, 3, 5, 5, 6, 6]));

    // odd-weight complexes vanish
    for w in [1i64, 3, 5, 7, 9] {
        let slice = build_slice(Variant::Ham0, w, &opts()).unwrap();
        pass &= (0..=slice.max_degree).all(|d| slice.dim(d) == 0);
    }

    report("criterion 7: property suite (delta^2, Jacobi, sl2, oracle, odd weights)", pass);
}

#[test]
fn criterion_8_excluded_scope_replacements() {
    // the geometric non-triviality statements and the true stable limit are
    // out of reach; the replacement is the finite-rank stabilization report
    // juxtaposed with the trivalent-graph-algebra series
    let rep = stabilization_report(&[1, 2], 8).unwrap();
    let mut pass = rep.ranks == vec![1, 2];
    // every even exponent row carries one value per rank
    pass &= rep.rows.iter().all(|(_, values, _)| values.len() == 2);
    // the comparison series is present up to t^8
    pass &= rep.graph_algebra_series == vec![(0, 1), (2, 1), (4, 2), (6, 3), (8, 6)];
    // rank flags are reported, not asserted: the t^4 coefficient differs
    // between rank 1 (zero) and the graph-algebra target (two), and the
    // report must expose the per-rank values that show it
    let row4 = rep.rows.iter().find(|(e, _, _)| *e == 4).unwrap();
    pass &= !row4.1.is_empty();
    report("criterion 8: excluded-scope replacement (stabilization report)", pass);
}

#[test]
fn determinism_across_thread_counts() {
    // the canonical bases, matrices, and reports must not depend on worker
    // scheduling; run the same build on 1 and 4 rayon threads
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let slice = build_slice(Variant::Ham0, 10, &opts()).unwrap();
            (
                serde_json::to_string(&slice.to_json()).unwrap(),
                slice.cohomology_dims(),
            )
        })
    };
    let (json1, betti1) = run(1);
    let (json4, betti4) = run(4);
    report(
        "determinism: byte-identical slice dump across thread counts",
        json1 == json4 && betti1 == betti4,
    );
}
