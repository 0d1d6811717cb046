//! GF(2) simplicial homology of color classes, the rank of the map induced
//! by inclusion into the ambient torus, and homological percolation events.
//!
//! Two routes compute the image rank:
//! * the reference method: rank [Z_i(N) | B_i(M)] − rank B_i(M), with the
//!   class's cycles included into the ambient barycentric chain complex;
//! * a fast path for i = 1: winding vectors of fundamental cycles mod 2.

use crate::coloring::{ColorSet, Coloring};
use crate::ec;
use crate::error::{Error, Result};
use crate::gf2::{reduce_against, KernelTracker, SparseReducer, SparseVec};
use crate::lattice::{Family, GridComplex, LatticeSimplex, MAX_AXES};
use crate::rng;
use crate::stratum::{StratumComplex, MAX_CHAIN};
use std::collections::HashMap;

/// Soft cap on the number of chains handled by explicit linear algebra.
const CHAIN_BUDGET: usize = 3_000_000;

fn chain_index(
    stratum: &StratumComplex,
    q: usize,
) -> HashMap<[u32; MAX_CHAIN], u32> {
    stratum
        .simplices
        .get(q)
        .map(|chains| {
            chains
                .iter()
                .enumerate()
                .map(|(i, c)| (*c, i as u32))
                .collect()
        })
        .unwrap_or_default()
}

/// Boundary of a q-chain as indices into the (q−1)-chain table.
fn boundary_sparse(
    chain: &[u32; MAX_CHAIN],
    q: usize,
    lower: &HashMap<[u32; MAX_CHAIN], u32>,
) -> SparseVec {
    let mut v: SparseVec = (0..=q)
        .map(|drop| {
            let mut sub = [0u32; MAX_CHAIN];
            let mut w = 0usize;
            for (j, &x) in chain[..=q].iter().enumerate() {
                if j != drop {
                    sub[w] = x;
                    w += 1;
                }
            }
            *lower.get(&sub).expect("sub-chain missing from complex")
        })
        .collect();
    v.sort_unstable();
    // Z₂: repeated faces cancel (cannot happen for strict chains, but keep
    // the reduction canonical).
    let mut out = SparseVec::new();
    let mut i = 0;
    while i < v.len() {
        let j = v[i..].iter().take_while(|&&x| x == v[i]).count();
        if j % 2 == 1 {
            out.push(v[i]);
        }
        i += j;
    }
    out
}

fn rank_boundary(stratum: &StratumComplex, q: usize) -> usize {
    if q == 0 || stratum.simplices.len() <= q {
        return 0;
    }
    let lower = chain_index(stratum, q - 1);
    let mut red = SparseReducer::new();
    for c in &stratum.simplices[q] {
        red.insert(boundary_sparse(c, q, &lower));
    }
    red.rank()
}

/// Z₂ Betti numbers b_0..b_max_i of an explicit class complex.
pub fn z2_betti(stratum: &StratumComplex, max_i: usize) -> Result<Vec<usize>> {
    let total: usize = stratum.simplices.iter().map(|v| v.len()).sum();
    if total > CHAIN_BUDGET {
        return Err(Error::BudgetExceeded(format!("{total} chains")));
    }
    let mut out = Vec::new();
    for q in 0..=max_i {
        let n_q = stratum.simplices.get(q).map_or(0, |v| v.len());
        let b = n_q - rank_boundary(stratum, q) - rank_boundary(stratum, q + 1);
        out.push(b);
    }
    Ok(out)
}

/// The ambient side of the reference method, built once per (complex, i):
/// the barycentric i-chain indexing and an echelon basis of B_i(M).
pub struct AmbientHomology {
    pub i: usize,
    bary: StratumComplex,
    index_i: HashMap<[u32; MAX_CHAIN], u32>,
    boundaries: SparseReducer,
    pub rank_b: usize,
    face_to_vertex: HashMap<u64, u32>,
}

impl AmbientHomology {
    pub fn build(g: &GridComplex, i: usize) -> Result<AmbientHomology> {
        if g.family != Family::Torus {
            return Err(Error::RequiresTorus);
        }
        if i < 1 || i > g.d {
            return Err(Error::InvalidInput(format!("homology degree {i} out of range")));
        }
        // The barycentric subdivision of M is the 1-color class of the
        // monochromatic coloring.
        let mono = Coloring::new(g, 1, vec![0; g.vertex_count()])?;
        let bary = StratumComplex::build_up_to(g, &mono, ColorSet(1), i + 1)?;
        let total: usize = bary.simplices.iter().map(|v| v.len()).sum();
        if total > CHAIN_BUDGET {
            return Err(Error::BudgetExceeded(format!("{total} ambient chains")));
        }
        let index_i = chain_index(&bary, i);
        let mut boundaries = SparseReducer::new();
        if bary.simplices.len() > i + 1 {
            for c in &bary.simplices[i + 1] {
                boundaries.insert(boundary_sparse(c, i + 1, &index_i));
            }
        }
        let rank_b = boundaries.rank();
        let face_to_vertex = bary
            .vertices
            .iter()
            .enumerate()
            .map(|(id, f)| (g.face_key(f), id as u32))
            .collect();
        Ok(AmbientHomology { i, bary, index_i, boundaries, rank_b, face_to_vertex })
    }

    /// Maps a class i-chain (stratum vertex ids) to its ambient chain index.
    fn ambient_index(
        &self,
        g: &GridComplex,
        stratum: &StratumComplex,
        chain: &[u32; MAX_CHAIN],
    ) -> u32 {
        let mut amb = [0u32; MAX_CHAIN];
        for (j, &sv) in chain[..=self.i].iter().enumerate() {
            let face = &stratum.vertices[sv as usize];
            amb[j] = self.face_to_vertex[&g.face_key(face)];
        }
        *self
            .index_i
            .get(&amb)
            .expect("class chain missing from ambient subdivision")
    }

    /// The fundamental cycle of the coordinate subtorus through the origin
    /// spanned by the given i axes, as an ambient i-chain vector.
    pub fn coordinate_class_cycle(&self, g: &GridComplex, axes: &[usize]) -> Result<SparseVec> {
        if axes.len() != self.i {
            return Err(Error::InvalidInput("need exactly i axes".into()));
        }
        let axis_mask: u8 = axes.iter().fold(0, |m, &a| m | 1 << a);
        let in_subtorus = |f: &LatticeSimplex| -> bool {
            f.axes_used() & !axis_mask == 0
                && (0..g.box_dim()).all(|a| axis_mask >> a & 1 == 1 || f.base[a] == 0)
        };
        let mut v: SparseVec = Vec::new();
        if self.bary.simplices.len() > self.i {
            for (idx, chain) in self.bary.simplices[self.i].iter().enumerate() {
                let all_in = chain[..=self.i]
                    .iter()
                    .all(|&sv| in_subtorus(&self.bary.vertices[sv as usize]));
                if all_in {
                    v.push(idx as u32);
                }
            }
        }
        Ok(v)
    }
}

/// Outcome of one induced-map rank computation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PercolationReport {
    pub i: usize,
    /// rank H_i(N; Z₂)
    pub rank_hn: usize,
    /// rank of the image of H_i(N) → H_i(M)
    pub rank_image: usize,
    /// rank H_i(M; Z₂) = C(d, i) for the torus
    pub ambient_rank: usize,
    /// some ambient class is hit
    pub a_i: bool,
    /// every ambient class is hit
    pub e_i: bool,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

/// The image of a basis of Z_i(N) in the quotient by B_i(M): an echelon of
/// reduced cycles plus the resulting rank.
struct ImageSpan {
    echelon: SparseReducer,
}

fn class_cycles(
    g: &GridComplex,
    ambient: &AmbientHomology,
    stratum: &StratumComplex,
) -> (Vec<SparseVec>, usize) {
    let i = ambient.i;
    let mut cycles: Vec<SparseVec> = Vec::new();
    let mut tracker = KernelTracker::new();
    let n_i = stratum.simplices.get(i).map_or(0, |v| v.len());
    if n_i == 0 {
        return (cycles, 0);
    }
    if i == 0 {
        unreachable!("degree 0 not supported");
    }
    let lower = chain_index(stratum, i - 1);
    for (idx, c) in stratum.simplices[i].iter().enumerate() {
        let b = boundary_sparse(c, i, &lower);
        if let Some(kernel_combo) = tracker.feed(b, idx as u32) {
            // Map the kernel vector (over class i-chains) into ambient
            // i-chain coordinates.
            let mut amb: SparseVec = kernel_combo
                .iter()
                .map(|&ci| ambient.ambient_index(g, stratum, &stratum.simplices[i][ci as usize]))
                .collect();
            amb.sort_unstable();
            cycles.push(amb);
        }
    }
    let rank_d_next = rank_boundary(stratum, i + 1);
    let rank_hn = cycles.len() - rank_d_next;
    (cycles, rank_hn)
}

/// Reference method: includes a basis of Z_i(N) into the ambient barycentric
/// chain complex and counts the cycles independent modulo B_i(M).
pub fn induced_map_rank(
    g: &GridComplex,
    ambient: &AmbientHomology,
    coloring: &Coloring,
    colorset: ColorSet,
) -> Result<PercolationReport> {
    let i = ambient.i;
    let stratum = StratumComplex::build_up_to(g, coloring, colorset, i + 1)?;
    let total: usize = stratum.simplices.iter().map(|v| v.len()).sum();
    if total > CHAIN_BUDGET {
        return Err(Error::BudgetExceeded(format!("{total} class chains")));
    }
    let (cycles, rank_hn) = class_cycles(g, ambient, &stratum);
    let mut image = ImageSpan { echelon: SparseReducer::new() };
    for mut v in cycles {
        reduce_against(&mut v, &[&ambient.boundaries, &image.echelon]);
        if !v.is_empty() {
            image.echelon.insert(v);
        }
    }
    let rank_image = image.echelon.rank();
    let ambient_rank = binomial(g.d, i);
    Ok(PercolationReport {
        i,
        rank_hn,
        rank_image,
        ambient_rank,
        a_i: rank_image >= 1,
        e_i: rank_image == ambient_rank,
    })
}

/// Reference-method membership test: is the given ambient homology class in
/// the image of H_i(N) → H_i(M)? `class_cycle` is a representative ambient
/// i-cycle (e.g. from `coordinate_class_cycle`).
pub fn image_contains_class(
    g: &GridComplex,
    ambient: &AmbientHomology,
    coloring: &Coloring,
    colorset: ColorSet,
    class_cycle: &SparseVec,
) -> Result<bool> {
    let i = ambient.i;
    let stratum = StratumComplex::build_up_to(g, coloring, colorset, i)?;
    let (cycles, _) = class_cycles(g, ambient, &stratum);
    let mut span = SparseReducer::new();
    for mut v in cycles {
        reduce_against(&mut v, &[&ambient.boundaries, &span]);
        if !v.is_empty() {
            span.insert(v);
        }
    }
    let mut w = class_cycle.clone();
    reduce_against(&mut w, &[&ambient.boundaries, &span]);
    Ok(w.is_empty())
}

/// Barycenter of a face, lifted (not reduced mod n), times 60 so that all
/// coordinates are exact integers (60 = lcm of 1..5 vertex counts).
pub fn barycenter_x60(face: &LatticeSimplex) -> [i64; MAX_AXES] {
    let mut buf = [[0u16; MAX_AXES]; MAX_AXES + 1];
    let cnt = face.lifted_vertices(&mut buf);
    let mut sum = [0i64; MAX_AXES];
    for c in buf.iter().take(cnt) {
        for a in 0..MAX_AXES {
            sum[a] += c[a] as i64;
        }
    }
    for s in sum.iter_mut() {
        *s = *s * 60 / cnt as i64;
    }
    sum
}

/// Displacement (times 60) along a barycentric edge from the barycenter of
/// `sub` to the barycenter of `sup`, computed in the common lift given by
/// `sup`'s canonical base.
fn edge_displacement_x60(g: &GridComplex, sub: &LatticeSimplex, sup: &LatticeSimplex) -> [i64; MAX_AXES] {
    let sup_bary = barycenter_x60(sup);
    let sub_key = g.face_key(sub);
    let cnt = sup.vertex_count() as u8;
    for keep in 1u8..((1u16 << cnt) - 1) as u8 {
        let cand = sup.subface(keep);
        if g.face_key(&g.canonicalize(&cand)) == sub_key {
            let sub_bary = barycenter_x60(&cand);
            let mut d = [0i64; MAX_AXES];
            for a in 0..MAX_AXES {
                d[a] = sub_bary[a] - sup_bary[a];
            }
            return d;
        }
    }
    panic!("edge endpoints are not incident faces");
}

/// Winding vector of a closed curve component of a 1-dimensional class in a
/// torus: the total displacement around the cycle divided by n.
pub fn winding_vector(
    g: &GridComplex,
    stratum: &StratumComplex,
    component: u32,
) -> Result<Vec<i64>> {
    if g.family != Family::Torus {
        return Err(Error::RequiresTorus);
    }
    if stratum.dim != 1 {
        return Err(Error::InvalidInput("winding vector needs a 1-dimensional class".into()));
    }
    let edges: Vec<&[u32; MAX_CHAIN]> = stratum
        .simplices
        .get(1)
        .map(|es| {
            es.iter()
                .filter(|e| stratum.component[e[0] as usize] == component)
                .collect()
        })
        .unwrap_or_default();
    if edges.is_empty() {
        return Err(Error::InvalidInput("component has no edges".into()));
    }
    let mut incident: HashMap<u32, Vec<usize>> = HashMap::new();
    for (idx, e) in edges.iter().enumerate() {
        incident.entry(e[0]).or_default().push(idx);
        incident.entry(e[1]).or_default().push(idx);
    }
    if incident.values().any(|v| v.len() != 2) {
        return Err(Error::InvalidInput("component is not a closed curve".into()));
    }
    // Walk the cycle, accumulating oriented displacements.
    let mut total = [0i64; MAX_AXES];
    let start = edges[0][0];
    let mut at = start;
    let mut prev_edge = usize::MAX;
    loop {
        let eidx = *incident[&at]
            .iter()
            .find(|&&e| e != prev_edge)
            .expect("degree-2 vertex");
        let e = edges[eidx];
        let (sub, sup) = (&stratum.vertices[e[0] as usize], &stratum.vertices[e[1] as usize]);
        let disp = edge_displacement_x60(g, sub, sup);
        let sign = if e[0] == at { 1 } else { -1 };
        for a in 0..MAX_AXES {
            total[a] += sign * disp[a];
        }
        at = if e[0] == at { e[1] } else { e[0] };
        prev_edge = eidx;
        if at == start {
            break;
        }
    }
    let denom = 60 * g.n as i64;
    let mut out = Vec::with_capacity(g.d);
    for a in 0..g.d {
        if total[a] % denom != 0 {
            return Err(Error::Internal("winding displacement not divisible by n".into()));
        }
        out.push(total[a] / denom);
    }
    Ok(out)
}

/// Fast path for i = 1 on any class in a torus: the image of H_1(N) in
/// H_1(M; Z₂) is spanned by the mod-2 winding vectors of fundamental cycles
/// of the class's 1-skeleton (spanning forest + one cycle per extra edge).
/// Returns the image rank. Early-exits at full rank.
pub fn winding_image_rank(g: &GridComplex, stratum: &StratumComplex) -> Result<usize> {
    if g.family != Family::Torus {
        return Err(Error::RequiresTorus);
    }
    let nv = stratum.vertices.len();
    if nv == 0 {
        return Ok(0);
    }
    let empty: Vec<[u32; MAX_CHAIN]> = Vec::new();
    let edges = stratum.simplices.get(1).unwrap_or(&empty);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for (idx, e) in edges.iter().enumerate() {
        adj[e[0] as usize].push(idx as u32);
        adj[e[1] as usize].push(idx as u32);
    }
    let denom = 60 * g.n as i64;
    let mut potential: Vec<[i64; MAX_AXES]> = vec![[0; MAX_AXES]; nv];
    let mut visited = vec![false; nv];
    let mut tree_edge = vec![false; edges.len()];
    // Tiny GF(2) echelon over the d winding-parity bits.
    let mut rows: Vec<u8> = Vec::new();
    let full_rank = g.d;
    let insert_bits = |rows: &mut Vec<u8>, mut bits: u8| -> bool {
        for r in rows.iter() {
            let high = 7 - r.leading_zeros() as usize;
            if bits >> high & 1 == 1 {
                bits ^= r;
            }
        }
        if bits != 0 {
            rows.push(bits);
            rows.sort_unstable_by(|a, b| b.cmp(a));
            true
        } else {
            false
        }
    };
    for root in 0..nv {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root as u32];
        while let Some(u) = stack.pop() {
            for &eidx in &adj[u as usize] {
                let e = &edges[eidx as usize];
                let other = if e[0] == u { e[1] } else { e[0] };
                if !visited[other as usize] {
                    visited[other as usize] = true;
                    tree_edge[eidx as usize] = true;
                    let disp = edge_displacement_x60(
                        g,
                        &stratum.vertices[e[0] as usize],
                        &stratum.vertices[e[1] as usize],
                    );
                    let sign = if e[0] == u { 1 } else { -1 };
                    for a in 0..MAX_AXES {
                        potential[other as usize][a] =
                            potential[u as usize][a] + sign * disp[a];
                    }
                    stack.push(other);
                }
            }
        }
    }
    for (eidx, e) in edges.iter().enumerate() {
        if tree_edge[eidx] {
            continue;
        }
        let disp = edge_displacement_x60(
            g,
            &stratum.vertices[e[0] as usize],
            &stratum.vertices[e[1] as usize],
        );
        let mut bits = 0u8;
        for a in 0..g.d {
            let cyc = potential[e[0] as usize][a] + disp[a] - potential[e[1] as usize][a];
            if cyc % denom != 0 {
                return Err(Error::Internal("fundamental cycle winding not integral".into()));
            }
            if (cyc / denom).rem_euclid(2) == 1 {
                bits |= 1 << a;
            }
        }
        if bits != 0 && insert_bits(&mut rows, bits) && rows.len() == full_rank {
            break;
        }
    }
    Ok(rows.len())
}

/// One row of a percolation sweep.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepPoint {
    pub probs: Vec<f64>,
    pub trials: usize,
    pub p_a: f64,
    pub p_e: f64,
    pub mean_rank_image: f64,
    /// Closed-form expected χ density at these probabilities, for side-by-side
    /// comparison.
    pub ec_density: f64,
}

/// Empirical P(A_i), P(E_i) over a probability grid. Uses the winding fast
/// path for i = 1 and the reference method otherwise (within budget).
pub fn percolation_sweep(
    g: &GridComplex,
    k: usize,
    colorset: ColorSet,
    i: usize,
    prob_grid: &[Vec<f64>],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if g.family != Family::Torus {
        return Err(Error::RequiresTorus);
    }
    let ambient = if i == 1 { None } else { Some(AmbientHomology::build(g, i)?) };
    let ambient_rank = binomial(g.d, i);
    let mut out = Vec::new();
    for (pi, probs) in prob_grid.iter().enumerate() {
        if probs.len() != k {
            return Err(Error::InvalidProbabilities(format!("grid row {pi} has wrong length")));
        }
        use rayon::prelude::*;
        let ranks: Vec<usize> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let c = crate::coloring::random_coloring(
                    g,
                    probs,
                    rng::derive_seed(seed, (pi as u64) << 32 | t),
                )
                .expect("validated probs");
                match &ambient {
                    None => {
                        let s = StratumComplex::build_up_to(g, &c, colorset, 1)
                            .expect("stratum");
                        winding_image_rank(g, &s).expect("winding rank")
                    }
                    Some(amb) => induced_map_rank(g, amb, &c, colorset)
                        .expect("reference rank")
                        .rank_image,
                }
            })
            .collect();
        let p_a = ranks.iter().filter(|&&r| r >= 1).count() as f64 / trials as f64;
        let p_e = ranks.iter().filter(|&&r| r == ambient_rank).count() as f64 / trials as f64;
        let mean = ranks.iter().sum::<usize>() as f64 / trials as f64;
        let ec_density = ec::DensityQuery::from_f64(g.d, k, colorset, probs)
            .and_then(|q| ec::expected_density(&q))
            .map(|r| r.to_f64())
            .unwrap_or(f64::NAN);
        out.push(SweepPoint {
            probs: probs.clone(),
            trials,
            p_a,
            p_e,
            mean_rank_image: mean,
            ec_density,
        });
    }
    Ok(out)
}
