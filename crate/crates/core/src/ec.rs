//! Expected Euler-characteristic densities of color classes, in closed form,
//! plus the Monte-Carlo harness and the linear dependency relations between
//! densities of different color sets.
//!
//! The density of the C-class for a d-dimensional ambient grid is
//!
//!   E_C(p) = Σ_{r=|C|}^{d+1} S(d+1,r)·(r−1)! · Σ_{X⊆C} (−1)^{|X|}·(−Σ_{i∈X} p_i)^r
//!
//! where S are Stirling numbers of the second kind. On the torus the identity
//! E[χ] = (vertex count)·E_C(p) holds exactly for every n.

use crate::coloring::{self, ColorSet};
use crate::error::{Error, Result};
use crate::lattice::GridComplex;
use crate::rng;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Stirling number of the second kind S(a, b): partitions of a items into b
/// nonempty unlabeled parts. Exact; a ≤ 12 keeps everything far from overflow.
pub fn stirling2(a: u32, b: u32) -> u64 {
    assert!(a <= 12, "stirling2 supports a <= 12");
    if b > a {
        return 0;
    }
    if a == 0 {
        return 1; // S(0,0) = 1
    }
    if b == 0 {
        return 0;
    }
    stirling2(a - 1, b - 1) + b as u64 * stirling2(a - 1, b)
}

/// A density query: ambient dimension, total colors, the class C, and the
/// color probabilities as exact rationals.
#[derive(Clone, Debug)]
pub struct DensityQuery {
    pub d: usize,
    pub k: usize,
    pub colorset: ColorSet,
    pub probs: Vec<BigRational>,
}

impl DensityQuery {
    pub fn from_f64(d: usize, k: usize, colorset: ColorSet, probs: &[f64]) -> Result<DensityQuery> {
        coloring::validate_probs(probs)?;
        let probs = probs
            .iter()
            .map(|&p| BigRational::from_float(p).unwrap_or_else(BigRational::zero))
            .collect();
        Ok(DensityQuery { d, k, colorset, probs })
    }

    fn validate(&self) -> Result<()> {
        if self.probs.len() != self.k {
            return Err(Error::InvalidProbabilities(format!(
                "{} probabilities for k={}",
                self.probs.len(),
                self.k
            )));
        }
        if self.probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidProbabilities("negative entry".into()));
        }
        let sum: BigRational = self.probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidProbabilities(format!("sum {sum} is not 1")));
        }
        if self.colorset.is_empty() || (self.colorset.0 >> self.k) != 0 {
            return Err(Error::InvalidInput("colorset must be a nonempty subset of 0..k".into()));
        }
        if self.colorset.len() > self.d + 1 {
            return Err(Error::InvalidInput("colorset larger than d+1".into()));
        }
        Ok(())
    }
}

/// Exact density with the per-r term breakdown.
#[derive(Clone, Debug)]
pub struct DensityResult {
    pub value: BigRational,
    /// (r, term) for r = |C| .. d+1.
    pub terms: Vec<(usize, BigRational)>,
}

impl DensityResult {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Evaluates the closed-form density exactly.
pub fn expected_density(query: &DensityQuery) -> Result<DensityResult> {
    query.validate()?;
    let m = query.colorset.len();
    let colors: Vec<u8> = query.colorset.iter().collect();
    let mut terms = Vec::new();
    let mut value = BigRational::zero();
    for r in m..=query.d + 1 {
        let mut inner = BigRational::zero();
        // All subsets X of C; the empty set contributes (−0)^r = 0 for r ≥ 1.
        for x in 1u32..(1 << m) {
            let mut s = BigRational::zero();
            for (i, &c) in colors.iter().enumerate() {
                if x >> i & 1 == 1 {
                    s += &query.probs[c as usize];
                }
            }
            let neg_pow = (-s).pow(r as i32);
            if x.count_ones() % 2 == 0 {
                inner += neg_pow;
            } else {
                inner -= neg_pow;
            }
        }
        let coeff = BigRational::from(
            BigInt::from(stirling2((query.d + 1) as u32, r as u32)) * factorial(r - 1),
        );
        let term = coeff * inner;
        value += &term;
        terms.push((r, term));
    }
    Ok(DensityResult { value, terms })
}

/// Alternating sum of simplices whose vertex color set is exactly `colorset`.
/// For a closed ambient this equals χ of the color class (the streaming
/// formula); for the ball it is the cell count of the class's natural CW
/// structure, which also telescopes to χ (used internally by the genus
/// search and cross-checked against the explicit complex in tests).
pub fn exact_class_alternating_sum(
    g: &GridComplex,
    coloring: &coloring::Coloring,
    colorset: ColorSet,
) -> i64 {
    let m = colorset.len();
    let mut chi = 0i64;
    for r in m.max(1)..=g.d + 1 {
        let sign = if (r - m) % 2 == 0 { 1i64 } else { -1i64 };
        let mut count = 0i64;
        g.for_each_simplex(r, |s| {
            if coloring.simplex_colors(g, s) == colorset {
                count += 1;
            }
        });
        chi += sign * count;
    }
    chi
}

/// χ of a color class of a *closed* grid manifold, streamed with no
/// subcomplex construction (single pass over the simplices).
pub fn euler_characteristic_stream(
    g: &GridComplex,
    coloring: &coloring::Coloring,
    colorset: ColorSet,
) -> Result<i64> {
    if !g.family.is_closed() {
        return Err(Error::RequiresClosedComplex);
    }
    Ok(exact_class_alternating_sum(g, coloring, colorset))
}

/// Monte-Carlo estimate of the density: mean and standard error of
/// χ(class)/|vertices| over independent colorings.
pub fn monte_carlo_density(
    g: &GridComplex,
    probs: &[f64],
    colorset: ColorSet,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if !g.family.is_closed() {
        return Err(Error::RequiresClosedComplex);
    }
    coloring::validate_probs(probs)?;
    use rayon::prelude::*;
    let values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let c = coloring::random_coloring(g, probs, rng::derive_seed(seed, t))
                .expect("validated probs");
            exact_class_alternating_sum(g, &c, colorset) as f64 / g.vertex_count() as f64
        })
        .collect();
    // Sequential reduction over the trial-indexed vector keeps the result
    // deterministic regardless of worker count.
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (trials.max(2) - 1) as f64;
    Ok((mean, (var / trials as f64).sqrt()))
}

/// Density of a single class, as a convenience for the relations below.
/// A class with more colors than d+1 is almost surely empty: density 0.
fn density_of(d: usize, k: usize, probs: &[BigRational], colorset: ColorSet) -> BigRational {
    if colorset.len() > d + 1 {
        return BigRational::zero();
    }
    let q = DensityQuery { d, k, colorset, probs: probs.to_vec() };
    expected_density(&q).expect("valid query").value
}

/// The linear relations between class densities stated for k ≤ 3:
///
/// k=2, d odd:  E_B = E_W = ½·E_BW
/// k=2, d even: E_BW = 0 and E_B + E_W − E_BW = 0
/// k=3, d odd:  E_RGB = 0 and each E_i = ½·(sum of E_{ij} over j ≠ i)
/// k=3, d even: E_RG = E_RB = E_GB = ½·E_RGB and the inclusion-exclusion
///              sum E_R+E_G+E_B−E_RG−E_RB−E_GB+E_RGB = 0
///
/// Returns the residuals, which must all be exactly zero.
pub fn dependency_relations(d: usize, k: usize, probs: &[BigRational]) -> Result<Vec<BigRational>> {
    let sum: BigRational = probs.iter().sum();
    if probs.len() != k || !sum.is_one() {
        return Err(Error::InvalidProbabilities("need k probabilities summing to 1".into()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let e = |cs: ColorSet| density_of(d, k, probs, cs);
    let out = match (k, d % 2) {
        (2, 1) => {
            let ebw = e(ColorSet(0b11));
            vec![
                e(ColorSet(0b01)) - half.clone() * &ebw,
                e(ColorSet(0b10)) - half * &ebw,
            ]
        }
        (2, 0) => {
            let ebw = e(ColorSet(0b11));
            vec![ebw.clone(), e(ColorSet(0b01)) + e(ColorSet(0b10)) - ebw]
        }
        (3, 1) => {
            let (erg, erb, egb) = (e(ColorSet(0b011)), e(ColorSet(0b101)), e(ColorSet(0b110)));
            vec![
                e(ColorSet(0b111)),
                e(ColorSet(0b001)) - half.clone() * (erg.clone() + erb.clone()),
                e(ColorSet(0b010)) - half.clone() * (erg.clone() + egb.clone()),
                e(ColorSet(0b100)) - half * (erb.clone() + egb.clone()),
            ]
        }
        (3, 0) => {
            let ergb = e(ColorSet(0b111));
            let (erg, erb, egb) = (e(ColorSet(0b011)), e(ColorSet(0b101)), e(ColorSet(0b110)));
            vec![
                erg.clone() - half.clone() * &ergb,
                erb.clone() - half.clone() * &ergb,
                egb.clone() - half * &ergb,
                e(ColorSet(0b001)) + e(ColorSet(0b010)) + e(ColorSet(0b100)) - erg - erb - egb
                    + ergb,
            ]
        }
        _ => return Err(Error::InvalidInput(format!("no relations implemented for d={d} k={k}"))),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Family;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn probs2(p: BigRational) -> Vec<BigRational> {
        let q = BigRational::one() - &p;
        vec![p, q]
    }

    /// Brute-force S(a,b) by enumerating set partitions (restricted growth
    /// strings), used as the oracle for small a.
    fn stirling_brute(a: u32, b: u32) -> u64 {
        fn rec(items: u32, groups: &mut Vec<u32>, b: u32, count: &mut u64) {
            if items == 0 {
                if groups.len() as u32 == b {
                    *count += 1;
                }
                return;
            }
            for gi in 0..groups.len() {
                groups[gi] += 1;
                rec(items - 1, groups, b, count);
                groups[gi] -= 1;
            }
            groups.push(1);
            rec(items - 1, groups, b, count);
            groups.pop();
        }
        let mut count = 0;
        if a == 0 {
            return (b == 0) as u64;
        }
        rec(a - 1, &mut vec![1], b, &mut count);
        count
    }

    #[test]
    fn stirling_matches_brute_force() {
        for a in 0..=6u32 {
            for b in 0..=a {
                assert_eq!(stirling2(a, b), stirling_brute(a, b), "S({a},{b})");
            }
        }
        assert_eq!(stirling2(3, 2), 3);
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(4, 4), 1);
        for a in 1..=10 {
            assert_eq!(stirling2(a, 1), 1);
            assert_eq!(stirling2(a, a), 1);
        }
    }

    #[test]
    fn stirling_matches_alternating_sum_formula() {
        // Σ_{s=1}^r (−1)^{r−s} s^d / ((s−1)!(r−s)!) = S(d+1, r)
        for d in 1..=8u32 {
            for r in 1..=d + 1 {
                let mut total = BigRational::zero();
                for s in 1..=r {
                    let term = BigRational::new(
                        BigInt::from(s as u64).pow(d),
                        factorial((s - 1) as usize) * factorial((r - s) as usize),
                    );
                    if (r - s) % 2 == 0 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
                let expect = BigInt::from(stirling2(d + 1, r));
                assert_eq!(total, BigRational::from(expect), "d={d} r={r}");
            }
        }
    }

    /// Reference polynomial evaluations of the published closed forms.
    #[test]
    fn single_color_polynomials() {
        for num in 0..=10i64 {
            let p = rat(num, 10);
            let q = DensityQuery {
                d: 1,
                k: 2,
                colorset: ColorSet(1),
                probs: probs2(p.clone()),
            };
            // d=1: p − p²
            assert_eq!(expected_density(&q).unwrap().value, &p - &p * &p);
            // d=2: p − 3p² + 2p³
            let q2 = DensityQuery { d: 2, ..q.clone() };
            let expect2 = &p - rat(3, 1) * &p * &p + rat(2, 1) * &p * &p * &p;
            assert_eq!(expected_density(&q2).unwrap().value, expect2);
            // d=3: p − 7p² + 12p³ − 6p⁴
            let q3 = DensityQuery { d: 3, ..q.clone() };
            let p2 = &p * &p;
            let expect3 = &p - rat(7, 1) * &p2 + rat(12, 1) * &p2 * &p - rat(6, 1) * &p2 * &p2;
            assert_eq!(expected_density(&q3).unwrap().value, expect3);
        }
    }

    #[test]
    fn two_color_class_in_dimension_three() {
        // d=3, C={0,1}: 14pq − 36p²q − 36pq² + 24pq³ + 36p²q² + 24p³q
        for num in 0..=10i64 {
            let p = rat(num, 10);
            let q = BigRational::one() - &p;
            let query = DensityQuery {
                d: 3,
                k: 2,
                colorset: ColorSet(0b11),
                probs: vec![p.clone(), q.clone()],
            };
            let pq = &p * &q;
            let expect = rat(14, 1) * &pq - rat(36, 1) * &p * &pq - rat(36, 1) * &q * &pq
                + rat(24, 1) * &q * &q * &pq
                + rat(36, 1) * &pq * &pq
                + rat(24, 1) * &p * &p * &pq;
            assert_eq!(expected_density(&query).unwrap().value, expect);
        }
    }

    #[test]
    fn three_color_full_class_in_dimension_four() {
        // d=4, C={r,g,b}: 60rgb(2r²+2g²+2b²−1)
        let grid = [rat(1, 5), rat(3, 10), rat(1, 2), rat(1, 10), rat(7, 10)];
        for r in &grid {
            for g in &grid {
                let b = BigRational::one() - r - g;
                if b.is_negative() {
                    continue;
                }
                let query = DensityQuery {
                    d: 4,
                    k: 3,
                    colorset: ColorSet(0b111),
                    probs: vec![r.clone(), g.clone(), b.clone()],
                };
                let expect = rat(60, 1)
                    * r
                    * g
                    * &b
                    * (rat(2, 1) * r * r + rat(2, 1) * g * g + rat(2, 1) * &b * &b
                        - BigRational::one());
                assert_eq!(expected_density(&query).unwrap().value, expect);
            }
        }
    }

    #[test]
    fn two_color_symmetry() {
        // E_C(p, 1−p) = (−1)^{d+1} E_C(1−p, p) for k=2 single-color classes.
        for d in 1..=4usize {
            for num in 0..=8i64 {
                let p = rat(num, 8);
                let e0 = density_of(d, 2, &probs2(p.clone()), ColorSet(0b01));
                let e1 = density_of(d, 2, &probs2(BigRational::one() - &p), ColorSet(0b10));
                // Swapping the roles of the colors relabels the class.
                assert_eq!(e0, e1);
                let sym = density_of(d, 2, &probs2(p.clone()), ColorSet(0b10));
                let flip = density_of(d, 2, &probs2(BigRational::one() - &p), ColorSet(0b01));
                assert_eq!(sym, flip);
                // And the stated sign symmetry between the two classes.
                let lhs = density_of(d, 2, &probs2(p.clone()), ColorSet(0b01));
                let rhs = density_of(d, 2, &probs2(p.clone()), ColorSet(0b10));
                if d % 2 == 1 {
                    assert_eq!(lhs, rhs, "d odd: classes symmetric");
                } else {
                    assert_eq!(lhs, -rhs, "d even: classes antisymmetric");
                }
            }
        }
    }

    #[test]
    fn vanishes_when_a_class_color_has_probability_zero() {
        let q = DensityQuery {
            d: 3,
            k: 3,
            colorset: ColorSet(0b011),
            probs: vec![rat(1, 2), rat(0, 1), rat(1, 2)],
        };
        assert!(expected_density(&q).unwrap().value.is_zero());
    }

    #[test]
    fn dependency_relations_vanish() {
        let points = [rat(1, 7), rat(2, 5), rat(1, 2), rat(9, 11)];
        for d in 1..=4usize {
            for p in &points {
                let res = dependency_relations(d, 2, &probs2(p.clone())).unwrap();
                assert!(res.iter().all(|r| r.is_zero()), "d={d} k=2 p={p}");
            }
            for p in &points {
                for g in &points {
                    let b = BigRational::one() - p - g;
                    if b.is_negative() {
                        continue;
                    }
                    let res =
                        dependency_relations(d, 3, &[p.clone(), g.clone(), b.clone()]).unwrap();
                    assert!(res.iter().all(|r| r.is_zero()), "d={d} k=3 p={p} g={g}");
                }
            }
        }
    }

    #[test]
    fn full_enumeration_expectation_matches_theory() {
        // All 16 colorings of torus(2,2) with k=2, p=½: the average streamed χ
        // per vertex equals the closed form at ½ (= 0) exactly.
        let g = GridComplex::build(Family::Torus, 2, 2).unwrap();
        let mut total = 0i64;
        let count = 1u32 << g.vertex_count();
        for bits in 0..count {
            let colors: Vec<u8> = (0..g.vertex_count()).map(|v| (bits >> v & 1) as u8).collect();
            let c = crate::coloring::Coloring::new(&g, 2, colors).unwrap();
            total += exact_class_alternating_sum(&g, &c, ColorSet(0b01));
        }
        let mean = BigRational::new(BigInt::from(total), BigInt::from(count as i64 * 4));
        let theory = density_of(2, 2, &probs2(rat(1, 2)), ColorSet(0b01));
        assert_eq!(mean, theory);
        assert!(theory.is_zero());
    }

    #[test]
    fn exact_expectation_at_asymmetric_probability() {
        // Same full enumeration, p = ¼: weight each coloring by its
        // probability and compare with the closed form, exactly.
        let g = GridComplex::build(Family::Torus, 2, 2).unwrap();
        let p = rat(1, 4);
        let q = BigRational::one() - &p;
        let mut total = BigRational::zero();
        for bits in 0..(1u32 << g.vertex_count()) {
            let colors: Vec<u8> = (0..g.vertex_count()).map(|v| (bits >> v & 1) as u8).collect();
            let zeros = colors.iter().filter(|&&c| c == 0).count();
            let c = crate::coloring::Coloring::new(&g, 2, colors).unwrap();
            let chi = exact_class_alternating_sum(&g, &c, ColorSet(0b01));
            let weight = p.pow(zeros as i32) * q.pow((g.vertex_count() - zeros) as i32);
            total += BigRational::from(BigInt::from(chi)) * weight;
        }
        let mean = total / BigRational::from(BigInt::from(g.vertex_count() as i64));
        let theory = density_of(2, 2, &probs2(p), ColorSet(0b01));
        assert_eq!(mean, theory);
    }

    #[test]
    fn monte_carlo_matches_theory_within_3_sigma() {
        let g = GridComplex::build(Family::Torus, 2, 4).unwrap();
        let theory = density_of(2, 2, &probs2(rat(1, 4)), ColorSet(0b01))
            .to_f64()
            .unwrap();
        let (mean, se) = monte_carlo_density(&g, &[0.25, 0.75], ColorSet(0b01), 4000, 5).unwrap();
        assert!((mean - theory).abs() < 3.0 * se, "mean={mean} theory={theory} se={se}");
    }

    #[test]
    fn degenerate_probability_gives_zero_every_trial() {
        let g = GridComplex::build(Family::Torus, 2, 3).unwrap();
        let (mean, se) = monte_carlo_density(&g, &[1.0, 0.0], ColorSet(0b01), 50, 1).unwrap();
        assert_eq!(mean, 0.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn stream_rejects_ball() {
        let g = GridComplex::build(Family::Ball, 2, 2).unwrap();
        let c = crate::coloring::random_coloring(&g, &[0.5, 0.5], 3).unwrap();
        assert!(euler_characteristic_stream(&g, &c, ColorSet(1)).is_err());
    }
}
