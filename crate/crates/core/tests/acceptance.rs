//! End-to-end acceptance suite: eleven numbered checks covering the exact
//! combinatorics (face counts, manifold validation, Euler-characteristic
//! oracles, closed-form densities), the statistical reproductions (knot
//! census rates, unknot decay, percolation events), and the search pipeline
//! (link realization, annealing genus search with independent certificates).
//!
//! Each check prints one `criterion N: PASS/FAIL` line (visible with
//! `--nocapture`, or on failure); the single test fails at the end if any
//! check failed. The census and annealing checks are Monte-Carlo workloads
//! sized for roughly an hour on one core.

use std::cell::RefCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use voronoi_strata::coloring::{random_coloring, ColorSet, Coloring};
use voronoi_strata::diagram::{
    alexander_polynomial, determinant, project_to_diagram, reduce_diagram, LaurentPoly,
};
use voronoi_strata::ec::{
    dependency_relations, euler_characteristic_stream, expected_density, monte_carlo_density,
    stirling2, DensityQuery,
};
use voronoi_strata::genus::{
    anneal_chain, genus_upper_bound_certificate, AnnealConfig, SearchGeometry,
};
use voronoi_strata::homology::{
    image_contains_class, induced_map_rank, percolation_sweep, winding_image_rank,
    AmbientHomology,
};
use voronoi_strata::knots::{
    beach_ball_coloring, knot_census, wilson_interval, Census, KnotSampler,
};
use voronoi_strata::lattice::{Family, GridComplex};
use voronoi_strata::rng::derive_seed;
use voronoi_strata::stratum::{validate_manifold, StratumComplex};
use voronoi_strata::tiles::{
    check_tile_contracts, diagram_invariants, fixtures, realize_diagram, refine,
    verify_realization, Expectation,
};

// ---------------------------------------------------------------------------
// Shared state and small helpers
// ---------------------------------------------------------------------------

/// Census plan shared between the rate check (criterion 6) and the decay
/// trend (criterion 8): (cube size, trials). The large runs dominate the
/// suite's statistics budget, so they are computed once.
const CENSUS_PLAN: [(usize, u64); 3] = [(5, 10_000_000), (6, 1_000_000), (7, 100_000)];

#[derive(Default)]
struct Shared {
    censuses: RefCell<Option<Arc<Vec<Census>>>>,
}

impl Shared {
    fn censuses(&self) -> Arc<Vec<Census>> {
        if self.censuses.borrow().is_none() {
            let v: Vec<Census> = CENSUS_PLAN
                .iter()
                .map(|&(n, trials)| knot_census(n, trials, 2026 + n as u64).expect("census"))
                .collect();
            *self.censuses.borrow_mut() = Some(Arc::new(v));
        }
        self.censuses.borrow().as_ref().unwrap().clone()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

fn uniform_probs(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// 1. Enumerated face counts of the torus triangulation equal the closed
/// form n^d · S(d+1, r) · (r−1)! for every rank.
fn c01_face_counts(_: &Shared) -> String {
    let mut checked = 0usize;
    for d in 1..=4usize {
        for n in [2usize, 3] {
            let g = GridComplex::build(Family::Torus, d, n).expect("torus builds");
            for r in 1..=d + 1 {
                let mut count = 0u64;
                g.for_each_simplex(r, |_| count += 1);
                let expect =
                    (n as u64).pow(d as u32) * stirling2((d + 1) as u32, r as u32) * factorial(r - 1);
                assert_eq!(count, expect, "torus({d},{n}) rank-{r} face count");
                checked += 1;
            }
        }
    }
    format!("{checked} face counts exact")
}

/// 2. Every color class of 100 random colorings per setting (torus(3,4)
/// with 2 and 3 colors, ball(3,4) with the fixed boundary) passes the
/// link/degree/boundary manifold validation.
fn c02_manifold_fuzzer(_: &Shared) -> String {
    let mut checked = 0usize;
    let g = GridComplex::build(Family::Torus, 3, 4).unwrap();
    for k in [2usize, 3] {
        for t in 0..100u64 {
            let c = random_coloring(&g, &uniform_probs(k), derive_seed(200 + k as u64, t)).unwrap();
            for mask in 1u32..(1 << k) {
                let s = StratumComplex::build(&g, &c, ColorSet(mask)).unwrap();
                let rep = validate_manifold(&s);
                assert!(
                    rep.ok(),
                    "torus k={k} trial {t} mask {mask:#b}: {:?}",
                    rep.offenders.first()
                );
                checked += 1;
            }
        }
    }
    let b = GridComplex::build(Family::Ball, 3, 4).unwrap();
    for t in 0..100u64 {
        let c = beach_ball_coloring(&b, derive_seed(299, t)).unwrap();
        for mask in 1u32..8 {
            let s = StratumComplex::build(&b, &c, ColorSet(mask)).unwrap();
            let rep = validate_manifold(&s);
            assert!(
                rep.ok(),
                "ball trial {t} mask {mask:#b}: {:?}",
                rep.offenders.first()
            );
            checked += 1;
        }
    }
    format!("{checked} class validations, zero failures")
}

/// 3. The streaming Euler characteristic (inclusion–exclusion over implicit
/// faces) equals the explicit subcomplex f-vector χ on random colorings,
/// for every colorset.
fn c03_chi_oracle(_: &Shared) -> String {
    let g = GridComplex::build(Family::Torus, 3, 4).unwrap();
    let mut checked = 0usize;
    for t in 0..100u64 {
        let c = random_coloring(&g, &uniform_probs(3), derive_seed(300, t)).unwrap();
        for mask in 1u32..8 {
            let cs = ColorSet(mask);
            let streamed = euler_characteristic_stream(&g, &c, cs).unwrap();
            let explicit = StratumComplex::build(&g, &c, cs).unwrap().euler_characteristic();
            assert_eq!(streamed, explicit, "trial {t} mask {mask:#b}");
            checked += 1;
        }
    }
    format!("{checked} streamed-vs-explicit χ values equal")
}

/// 4. Exact expectation: enumerating all 16 two-colorings of torus(2,2)
/// gives mean χ per vertex exactly 0 (the d=2 closed form at p=½); a
/// 10⁴-trial Monte-Carlo run on torus(3,8) agrees with the d=3 value −1/8
/// within 3 standard errors.
fn c04_exact_expectation(_: &Shared) -> String {
    let g2 = GridComplex::build(Family::Torus, 2, 2).unwrap();
    let mut total = 0i64;
    let count = 1u32 << g2.vertex_count();
    for bits in 0..count {
        let colors: Vec<u8> = (0..g2.vertex_count()).map(|v| (bits >> v & 1) as u8).collect();
        let c = Coloring::new(&g2, 2, colors).unwrap();
        total += euler_characteristic_stream(&g2, &c, ColorSet(1)).unwrap();
    }
    assert_eq!(total, 0, "full enumeration: Σχ over all 16 colorings");

    let g3 = GridComplex::build(Family::Torus, 3, 8).unwrap();
    let (mean, se) = monte_carlo_density(&g3, &[0.5, 0.5], ColorSet(1), 10_000, 404).unwrap();
    let theory = -0.125;
    assert!(se > 0.0, "standard error must be positive");
    assert!(
        (mean - theory).abs() <= 3.0 * se,
        "MC mean {mean} vs {theory} exceeds 3σ ({se})"
    );
    format!("enumerated mean exactly 0; MC mean {mean:.5} vs −0.125 (se {se:.5})")
}

/// 5. The density engine reproduces the published closed-form polynomials at
/// 20 rational points each (exact rational equality), and the dependency
/// relations between class densities vanish identically.
fn c05_closed_forms(_: &Shared) -> String {
    let mut checked = 0usize;
    // Single-color class in dimensions 1–3: p−p², p−3p²+2p³, p−7p²+12p³−6p⁴.
    for i in 1..=20i64 {
        let p = rat(i, 21);
        let q = BigRational::one() - &p;
        let probs = vec![p.clone(), q.clone()];
        let base = DensityQuery { d: 1, k: 2, colorset: ColorSet(1), probs };
        let p2 = &p * &p;
        assert_eq!(expected_density(&base).unwrap().value, &p - &p2, "d=1 p={p}");
        let expect2 = &p - rat(3, 1) * &p2 + rat(2, 1) * &p2 * &p;
        assert_eq!(
            expected_density(&DensityQuery { d: 2, ..base.clone() }).unwrap().value,
            expect2,
            "d=2 p={p}"
        );
        let expect3 = &p - rat(7, 1) * &p2 + rat(12, 1) * &p2 * &p - rat(6, 1) * &p2 * &p2;
        assert_eq!(
            expected_density(&DensityQuery { d: 3, ..base.clone() }).unwrap().value,
            expect3,
            "d=3 p={p}"
        );
        // Two-color class in dimension 3:
        // 14pq − 36p²q − 36pq² + 24pq³ + 36p²q² + 24p³q.
        let pq = &p * &q;
        let expect23 = rat(14, 1) * &pq - rat(36, 1) * &p * &pq - rat(36, 1) * &q * &pq
            + rat(24, 1) * &q * &q * &pq
            + rat(36, 1) * &pq * &pq
            + rat(24, 1) * &p * &p * &pq;
        assert_eq!(
            expected_density(&DensityQuery { d: 3, colorset: ColorSet(0b11), ..base.clone() })
                .unwrap()
                .value,
            expect23,
            "d=3 two-color p={p}"
        );
        checked += 4;
    }
    // Three-color class in dimension 4: 60·rgb·(2r²+2g²+2b²−1).
    for i in 1..=20i64 {
        let r = rat(i, 21);
        let g = (BigRational::one() - &r) / rat(2, 1);
        let b = BigRational::one() - &r - &g;
        let query = DensityQuery {
            d: 4,
            k: 3,
            colorset: ColorSet(0b111),
            probs: vec![r.clone(), g.clone(), b.clone()],
        };
        let expect = rat(60, 1)
            * &r
            * &g
            * &b
            * (rat(2, 1) * &r * &r + rat(2, 1) * &g * &g + rat(2, 1) * &b * &b - BigRational::one());
        assert_eq!(expected_density(&query).unwrap().value, expect, "d=4 r={r}");
        checked += 1;
    }
    // Dependency relations between class densities vanish exactly.
    let points = [rat(1, 7), rat(2, 5), rat(1, 2), rat(9, 11)];
    for d in 1..=4usize {
        for p in &points {
            let q = BigRational::one() - p;
            let res = dependency_relations(d, 2, &[p.clone(), q]).unwrap();
            assert!(res.iter().all(|r| r.is_zero()), "d={d} k=2 p={p}");
            checked += 1;
        }
        for p in &points {
            for g in &points {
                let b = BigRational::one() - p - g;
                if b.is_negative() {
                    continue;
                }
                let res = dependency_relations(d, 3, &[p.clone(), g.clone(), b]).unwrap();
                assert!(res.iter().all(|r| r.is_zero()), "d={d} k=3 p={p} g={g}");
                checked += 1;
            }
        }
    }
    format!("{checked} exact identities")
}

/// 6. Census rates: the trefoil count at n=6 over 10⁶ trials falls in the
/// 5σ Poisson band around the published rate (52.28 expected), and the
/// nontrivial count at n=5 over 10⁷ trials falls within 5·√25 of 25.
fn c06_census_rates(shared: &Shared) -> String {
    let censuses = shared.censuses();
    let c6 = &censuses[1];
    assert_eq!((c6.n, c6.trials), (6, 1_000_000));
    let trefoils = c6.count_named("3_1") as f64;
    let expect6: f64 = 52.28;
    let band6 = 5.0 * expect6.sqrt();
    assert!(
        (trefoils - expect6).abs() <= band6,
        "n=6 trefoil count {trefoils} outside {expect6} ± {band6:.1}"
    );
    let c5 = &censuses[0];
    assert_eq!((c5.n, c5.trials), (5, 10_000_000));
    let nontrivial = c5.nontrivial() as f64;
    assert!(
        (nontrivial - 25.0).abs() <= 25.0,
        "n=5 nontrivial count {nontrivial} outside 25 ± 25"
    );
    format!(
        "n=6 trefoils {trefoils} (want {expect6}±{band6:.1}); n=5 nontrivial {nontrivial} (want 25±25)"
    )
}

/// 7. Invariant engine: determinant and Alexander polynomial are exact on
/// the fixture diagrams, and on 10³ sampled extracted curves the identity
/// |Δ(−1)| = det, palindromicity, and Δ(1) = ±1 all hold.
fn c07_invariant_oracle(_: &Shared) -> String {
    let cases: [(&str, _, u64, LaurentPoly); 3] = [
        ("unknot", fixtures::unknot(), 1, LaurentPoly::one()),
        (
            "trefoil",
            fixtures::trefoil(),
            3,
            LaurentPoly { coeffs: vec![1, -1, 1], min_exp: -1 },
        ),
        (
            "figure-eight",
            fixtures::figure_eight(),
            5,
            LaurentPoly { coeffs: vec![-1, 3, -1], min_exp: -1 },
        ),
    ];
    for (name, d, det, alex) in cases {
        let inv = diagram_invariants(&d).unwrap();
        assert_eq!(inv.det, Some(det), "{name} determinant");
        assert_eq!(inv.alexander, Some(alex), "{name} Alexander polynomial");
    }
    let mut sampler = KnotSampler::new(6).unwrap();
    let mut nontrivial = 0usize;
    for t in 0..1000u64 {
        let curve = sampler.extract_for_seed(derive_seed(700, t)).unwrap();
        let kd = project_to_diagram(&curve.closed).unwrap();
        let reduced = reduce_diagram(&kd);
        let det = determinant(&reduced).unwrap();
        let alex = alexander_polynomial(&reduced).unwrap();
        assert_eq!(
            alex.eval_at_minus_one().unsigned_abs(),
            det,
            "trial {t}: |Δ(−1)| vs determinant"
        );
        assert!(alex.is_palindromic(), "trial {t}: Δ not palindromic: {alex:?}");
        let at_one: i64 = alex.coeffs.iter().sum();
        assert_eq!(at_one.abs(), 1, "trial {t}: Δ(1) = {at_one}");
        if det != 1 {
            nontrivial += 1;
        }
    }
    format!("3 fixtures exact; 1000 curves consistent ({nontrivial} nontrivial)")
}

/// 8. Unknot decay: estimated nontriviality rates at n = 5, 6, 7 are
/// strictly increasing with non-overlapping 95% Wilson intervals.
fn c08_decay_trend(shared: &Shared) -> String {
    let censuses = shared.censuses();
    let mut rows = Vec::new();
    for c in censuses.iter() {
        let (lo, hi) = wilson_interval(c.nontrivial(), c.trials, 1.96);
        rows.push((c.n, c.nontrivial() as f64 / c.trials as f64, lo, hi));
    }
    for w in rows.windows(2) {
        let (n0, r0, _, hi0) = w[0];
        let (n1, r1, lo1, _) = w[1];
        assert!(r1 > r0, "rate at n={n1} ({r1:.2e}) not above n={n0} ({r0:.2e})");
        assert!(
            lo1 > hi0,
            "95% intervals overlap between n={n0} (hi {hi0:.2e}) and n={n1} (lo {lo1:.2e})"
        );
    }
    let detail: Vec<String> = rows.iter().map(|(n, r, _, _)| format!("n={n}: {r:.2e}")).collect();
    format!("rates strictly increasing, intervals disjoint ({})", detail.join(", "))
}

/// 9. Percolation: the fast winding-number rank equals the reference GF(2)
/// rank on 50 random instances; the one-dimensional events are essentially
/// impossible deep subcritically and essentially certain deep
/// supercritically; and in dimension 4 the degree-2 image never contains
/// two dual coordinate classes simultaneously.
fn c09_percolation(_: &Shared) -> String {
    // Fast path vs reference.
    let g = GridComplex::build(Family::Torus, 3, 4).unwrap();
    let amb = AmbientHomology::build(&g, 1).unwrap();
    for t in 0..50u64 {
        let c = random_coloring(&g, &uniform_probs(3), derive_seed(900, t)).unwrap();
        for mask in [0b011u32, 0b111] {
            let cs = ColorSet(mask);
            let rep = induced_map_rank(&g, &amb, &c, cs).unwrap();
            let s = StratumComplex::build_up_to(&g, &c, cs, 1).unwrap();
            let fast = winding_image_rank(&g, &s).unwrap();
            assert_eq!(fast, rep.rank_image, "trial {t} mask {mask:#b}");
        }
    }
    // Deep sub/supercritical events for the single-color class.
    let g10 = GridComplex::build(Family::Torus, 3, 10).unwrap();
    let sub = &percolation_sweep(&g10, 2, ColorSet(1), 1, &[vec![0.02, 0.98]], 100, 901).unwrap()[0];
    assert!(sub.p_a <= 0.05, "subcritical P(A₁) = {} > 0.05", sub.p_a);
    let sup = &percolation_sweep(&g10, 2, ColorSet(1), 1, &[vec![0.98, 0.02]], 100, 902).unwrap()[0];
    assert!(sup.p_e >= 0.95, "supercritical P(E₁) = {} < 0.95", sup.p_e);
    // Dual coordinate 2-classes never co-occur in the image for a 3-colored
    // 4-torus (their representatives intersect transversally in an odd
    // number of points, which a codimension-2 submanifold class cannot do).
    let g4 = GridComplex::build(Family::Torus, 4, 3).unwrap();
    let amb2 = AmbientHomology::build(&g4, 2).unwrap();
    let c12 = amb2.coordinate_class_cycle(&g4, &[0, 1]).unwrap();
    let c34 = amb2.coordinate_class_cycle(&g4, &[2, 3]).unwrap();
    for t in 0..50u64 {
        let c = random_coloring(&g4, &uniform_probs(3), derive_seed(903, t)).unwrap();
        let a = image_contains_class(&g4, &amb2, &c, ColorSet(0b111), &c12).unwrap();
        let b = image_contains_class(&g4, &amb2, &c, ColorSet(0b111), &c34).unwrap();
        assert!(!(a && b), "trial {t}: dual 2-classes co-occur in the image");
    }
    format!(
        "50 rank agreements; P(A₁)={:.2} sub, P(E₁)={:.2} sup; 50 co-occurrence checks",
        sub.p_a, sup.p_e
    )
}

/// 10. Link realization end-to-end: every tile variant passes its block
/// contract, and the four fixture links realize as single closed curves on
/// the boundary 3-sphere whose extracted invariants match the diagram-level
/// oracle, stably under 2- and 3-fold refinement.
fn c10_realization(_: &Shared) -> String {
    check_tile_contracts();
    let cases = [
        ("unknot", fixtures::unknot(), 1u64),
        ("trefoil", fixtures::trefoil(), 3),
        ("figure-eight", fixtures::figure_eight(), 5),
        ("six-one", fixtures::six_one(), 9),
    ];
    for (name, d, want_det) in cases {
        let inv = diagram_invariants(&d).unwrap();
        assert_eq!(inv.components, 1, "{name} component count");
        assert_eq!(inv.det, Some(want_det), "{name} diagram-level determinant");
        let expect = Expectation {
            components: 1,
            det: inv.det,
            alexander: inv.alexander.clone(),
        };
        let bc = realize_diagram(&d).unwrap();
        for m in 1..=3usize {
            let refined = refine(&bc, m).unwrap();
            let rep = verify_realization(&refined, &expect).unwrap();
            assert!(rep.matches, "{name} refinement m={m}: {:?}", rep.mismatches);
        }
    }
    format!("all tile contracts hold; 4 links × 3 refinements match the oracle")
}

/// 11. Genus search: with the default 10⁵-iteration budget, at least 19 of
/// 20 seeded chains find a genus-0 surface for the unknot and at least 16 of
/// 20 find genus ≤ 2 for the square knot, every success confirmed by an
/// independent certificate; every chain passes all its incremental-vs-full
/// checkpoints.
fn c11_genus_search(_: &Shared) -> String {
    let cfg = AnnealConfig { seed: 2026, ..AnnealConfig::default() };
    let per_chain_checkpoints = cfg.iterations / cfg.full_recompute_period;
    let cases = [
        ("unknot", fixtures::unknot(), 0i64, 19usize),
        ("square-knot", fixtures::square_knot(), 2, 16),
    ];
    let mut details = Vec::new();
    for (name, d, max_genus, need) in cases {
        let bc = realize_diagram(&d).unwrap();
        let geom = SearchGeometry::new(&bc).unwrap();
        let mut successes = 0usize;
        for i in 0..20u64 {
            // `anneal_chain` verifies incremental-vs-full equality at every
            // checkpoint internally and errors out on the first mismatch.
            let r = anneal_chain(Arc::clone(&geom), &cfg, derive_seed(cfg.seed, i)).unwrap();
            assert_eq!(r.checkpoints, per_chain_checkpoints, "{name} chain {i} checkpoints");
            if r.best_genus <= max_genus {
                let coloring = Coloring::new(&geom.complex, 3, r.best_colors.clone()).unwrap();
                let cert = genus_upper_bound_certificate(&geom.complex, &coloring).unwrap();
                assert_eq!(cert.genus, r.best_genus, "{name} chain {i} certificate genus");
                successes += 1;
            }
        }
        assert!(
            successes >= need,
            "{name}: only {successes}/20 chains reached genus ≤ {max_genus} (need {need})"
        );
        details.push(format!("{name} {successes}/20 at genus ≤ {max_genus}"));
    }
    format!("{}; all checkpoints equal", details.join("; "))
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

#[test]
fn acceptance_criteria() {
    type Check = fn(&Shared) -> String;
    let checks: [(&str, Check); 11] = [
        ("face-count exactness", c01_face_counts),
        ("manifold fuzzer", c02_manifold_fuzzer),
        ("χ oracle equivalence", c03_chi_oracle),
        ("exact expectation", c04_exact_expectation),
        ("closed-form identities", c05_closed_forms),
        ("census rates", c06_census_rates),
        ("invariant-engine oracle", c07_invariant_oracle),
        ("unknot-decay trend", c08_decay_trend),
        ("percolation correctness", c09_percolation),
        ("link realization end-to-end", c10_realization),
        ("genus search", c11_genus_search),
    ];
    let shared = Shared::default();
    let mut failures = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let num = i + 1;
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(|| check(&shared))) {
            Ok(detail) => {
                println!("criterion {num:2} ({name}): PASS — {detail} [{:.1?}]", start.elapsed());
            }
            Err(e) => {
                let msg = panic_message(e);
                println!("criterion {num:2} ({name}): FAIL — {msg} [{:.1?}]", start.elapsed());
                failures.push(num);
            }
        }
    }
    assert!(failures.is_empty(), "acceptance criteria failed: {failures:?}");
}
