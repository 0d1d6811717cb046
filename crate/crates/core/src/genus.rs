//! Simulated-annealing search for a low-genus surface spanning a link.
//!
//! The link is fixed as the 3-color class of a coloring of the boundary
//! 3-sphere of `[0,N]⁴` (see [`crate::tiles`]). Interior vertices of the
//! 4-box are recolored at random; the 3-color class of the resulting
//! coloring of the ball is a properly embedded surface whose boundary is the
//! link. Annealing biases the recoloring toward decreasing the genus of the
//! spanning component (and a penalty for closed components), yielding upper
//! bounds for the 4-ball genus.
//!
//! The objective is evaluated exactly and incrementally: the Euler
//! characteristic decomposes into per-simplex contributions looked up from
//! color-pattern tables, and connectivity is maintained as a component
//! labelling of the active (3-colored) 4-simplices, which are adjacent when
//! they share a 3-colored tetrahedron. Local recolorings are analysed with a
//! budgeted breadth-first search; anything inconclusive falls back to an
//! exact full recomputation, and a full rebuild is forced on every accepted
//! change that alters the component structure and at a fixed checkpoint
//! cadence, where incremental and recomputed state are compared exactly.

use crate::coloring::{ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::lattice::{Coord, Family, GridComplex, MAX_AXES};
use crate::rng::{derive_seed, SplitMix64};
use crate::stratum::{surface_summary, validate_manifold, ComponentSummary, StratumComplex};
use crate::tiles::BoundaryColoring;
use crate::unionfind::UnionFind;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

const NONE: u32 = u32::MAX;

/// Budget for the local connectivity search before falling back to an exact
/// global recomputation.
const BFS_BUDGET: usize = 4096;

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Compressed sparse incidence rows.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Csr {
    fn build(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> Csr {
        let mut offsets = vec![0u32; n + 1];
        for (v, _) in pairs.clone() {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut items = vec![0u32; offsets[n] as usize];
        let mut cursor = offsets.clone();
        for (v, x) in pairs {
            items[cursor[v as usize] as usize] = x;
            cursor[v as usize] += 1;
        }
        Csr { offsets, items }
    }

    fn row(&self, v: u32) -> &[u32] {
        &self.items[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// Number of distinct colors in a base-3 pattern of `len` digits.
fn distinct3(mut pat: usize, len: usize) -> usize {
    let mut seen = [false; 3];
    for _ in 0..len {
        seen[pat % 3] = true;
        pat /= 3;
    }
    seen.iter().filter(|&&s| s).count()
}

/// χ contribution tables indexed by the base-3 color pattern of a simplex's
/// vertices. A triangle/tetrahedron/4-simplex "qualifies" when its vertices
/// use all three colors; qualifying faces are the cells of the 3-color
/// class's barycentric realization, and
///
/// χ = Σ_tri [qual] + Σ_tet [qual]·(1 − #qual tris)
///     + Σ_top [qual]·(1 − #qual tets − #qual tris + #(qual tri ⊂ qual tet)).
fn chi_tables() -> ([i8; 27], [i8; 81], [i8; 243]) {
    let digits = |pat: usize, len: usize| -> Vec<u8> {
        let mut p = pat;
        (0..len)
            .map(|_| {
                let d = (p % 3) as u8;
                p /= 3;
                d
            })
            .collect()
    };
    let qual = |cols: &[u8]| {
        let mut seen = [false; 3];
        for &c in cols {
            seen[c as usize] = true;
        }
        seen.iter().all(|&s| s)
    };
    let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
            }
        }
        out
    };
    let mut t3 = [0i8; 27];
    for (pat, t) in t3.iter_mut().enumerate() {
        *t = (distinct3(pat, 3) == 3) as i8;
    }
    let mut t4 = [0i8; 81];
    for (pat, t) in t4.iter_mut().enumerate() {
        let c = digits(pat, 4);
        if qual(&c) {
            let tris = subsets(4, 3)
                .iter()
                .filter(|s| qual(&s.iter().map(|&i| c[i]).collect::<Vec<_>>()))
                .count();
            *t = 1 - tris as i8;
        }
    }
    let mut t5 = [0i8; 243];
    for (pat, t) in t5.iter_mut().enumerate() {
        let c = digits(pat, 5);
        if !qual(&c) {
            continue;
        }
        let pick = |s: &[usize]| s.iter().map(|&i| c[i]).collect::<Vec<_>>();
        let tets = subsets(5, 4);
        let tris = subsets(5, 3);
        let qtets = tets.iter().filter(|s| qual(&pick(s))).count();
        let qtris = tris.iter().filter(|s| qual(&pick(s))).count();
        let mut chains = 0usize;
        for tet in &tets {
            if !qual(&pick(tet)) {
                continue;
            }
            for tri in subsets(4, 3) {
                let sub: Vec<usize> = tri.iter().map(|&i| tet[i]).collect();
                if qual(&pick(&sub)) {
                    chains += 1;
                }
            }
        }
        *t = 1 - qtets as i8 - qtris as i8 + chains as i8;
    }
    (t3, t4, t5)
}

/// Immutable combinatorial data for genus search over `ball(4, n)` with a
/// frozen boundary coloring: the triangulation's triangles, tetrahedra, and
/// 4-simplices ("tops"), their incidences, and the χ tables.
pub struct SearchGeometry {
    pub complex: GridComplex,
    pub n: usize,
    /// Boundary color per complex vertex; `u8::MAX` for interior vertices.
    pub boundary_color: Vec<u8>,
    /// Interior (recolorable) vertex ids.
    pub interior: Vec<u32>,
    tops: Vec<[u32; 5]>,
    top_tets: Vec<[u32; 5]>,
    top_tris: Vec<[u32; 10]>,
    tets: Vec<[u32; 4]>,
    /// The one or two 4-simplices containing each tetrahedron.
    tet_tops: Vec<[u32; 2]>,
    tris: Vec<[u32; 3]>,
    /// One 4-simplex containing each triangle.
    tri_top: Vec<u32>,
    vert_tops: Csr,
    vert_tets: Csr,
    vert_tris: Csr,
    /// A 4-simplex containing a 3-colored boundary tetrahedron; it stays
    /// active under every interior recoloring and anchors the spanning
    /// component.
    anchor: u32,
    t3: [i8; 27],
    t4: [i8; 81],
    t5: [i8; 243],
}

impl SearchGeometry {
    pub fn new(boundary: &BoundaryColoring) -> Result<Arc<SearchGeometry>> {
        let n = boundary.n();
        let g = GridComplex::build(Family::Ball, 4, n)?;
        let nv = g.vertex_count();
        let mut boundary_color = vec![u8::MAX; nv];
        let mut interior = Vec::new();
        for v in 0..nv as u32 {
            let c = g.vertex_coord(v);
            let on_bd = (0..4).any(|a| c[a] == 0 || c[a] as usize == n);
            if on_bd {
                let sv = boundary
                    .complex
                    .vertex_index(&c)
                    .ok_or_else(|| Error::Internal("boundary vertex missing from sphere".into()))?;
                boundary_color[v as usize] = boundary.coloring.color(sv);
            } else {
                interior.push(v);
            }
        }
        if interior.is_empty() {
            return Err(Error::InvalidInput("box too small: no interior vertices".into()));
        }

        let simplex_ids = |s: &crate::lattice::LatticeSimplex| -> Vec<u32> {
            let mut lifted = [Coord::default(); MAX_AXES + 1];
            let cnt = s.lifted_vertices(&mut lifted);
            let mut ids: Vec<u32> = lifted[..cnt]
                .iter()
                .map(|c| g.vertex_index(c).expect("ball vertex"))
                .collect();
            ids.sort_unstable();
            ids
        };
        let mut tris: Vec<[u32; 3]> = Vec::new();
        let mut tri_id: HashMap<[u32; 3], u32> = HashMap::new();
        g.for_each_simplex(3, |s| {
            let v = simplex_ids(s);
            let key = [v[0], v[1], v[2]];
            tri_id.entry(key).or_insert_with(|| {
                tris.push(key);
                tris.len() as u32 - 1
            });
        });
        let mut tets: Vec<[u32; 4]> = Vec::new();
        let mut tet_id: HashMap<[u32; 4], u32> = HashMap::new();
        g.for_each_simplex(4, |s| {
            let v = simplex_ids(s);
            let key = [v[0], v[1], v[2], v[3]];
            tet_id.entry(key).or_insert_with(|| {
                tets.push(key);
                tets.len() as u32 - 1
            });
        });
        let mut tops: Vec<[u32; 5]> = Vec::new();
        g.for_each_simplex(5, |s| {
            let v = simplex_ids(s);
            tops.push([v[0], v[1], v[2], v[3], v[4]]);
        });

        let mut tet_tops = vec![[NONE; 2]; tets.len()];
        let mut tri_top = vec![NONE; tris.len()];
        let mut top_tets = vec![[NONE; 5]; tops.len()];
        let mut top_tris = vec![[NONE; 10]; tops.len()];
        for (pi, tv) in tops.iter().enumerate() {
            for (slot, omit) in (0..5).enumerate() {
                let mut key = [0u32; 4];
                let mut w = 0;
                for (i, &x) in tv.iter().enumerate() {
                    if i != omit {
                        key[w] = x;
                        w += 1;
                    }
                }
                let tid = tet_id[&key];
                top_tets[pi][slot] = tid;
                let slots = &mut tet_tops[tid as usize];
                if slots[0] == NONE {
                    slots[0] = pi as u32;
                } else if slots[1] == NONE {
                    slots[1] = pi as u32;
                } else {
                    unreachable!("tetrahedron in more than two 4-simplices");
                }
            }
            let mut w = 0;
            for a in 0..5 {
                for b in a + 1..5 {
                    for c in b + 1..5 {
                        let tid = tri_id[&[tv[a], tv[b], tv[c]]];
                        top_tris[pi][w] = tid;
                        tri_top[tid as usize] = pi as u32;
                        w += 1;
                    }
                }
            }
        }

        let vert_tops = Csr::build(
            nv,
            tops.iter()
                .enumerate()
                .flat_map(|(i, vs)| vs.iter().map(move |&v| (v, i as u32))),
        );
        let vert_tets = Csr::build(
            nv,
            tets.iter()
                .enumerate()
                .flat_map(|(i, vs)| vs.iter().map(move |&v| (v, i as u32))),
        );
        let vert_tris = Csr::build(
            nv,
            tris.iter()
                .enumerate()
                .flat_map(|(i, vs)| vs.iter().map(move |&v| (v, i as u32))),
        );

        // Anchor: a 4-simplex over a 3-colored boundary tetrahedron.
        let mut anchor = NONE;
        for (tid, tv) in tets.iter().enumerate() {
            let cols: Vec<u8> = tv.iter().map(|&v| boundary_color[v as usize]).collect();
            if cols.iter().any(|&c| c == u8::MAX) {
                continue;
            }
            let mut seen = [false; 3];
            for &c in &cols {
                seen[c as usize] = true;
            }
            if seen.iter().all(|&s| s) {
                anchor = tet_tops[tid][0];
                break;
            }
        }
        if anchor == NONE {
            return Err(Error::InvalidInput(
                "boundary 3-color class is empty; nothing to span".into(),
            ));
        }

        let (t3, t4, t5) = chi_tables();
        Ok(Arc::new(SearchGeometry {
            complex: g,
            n,
            boundary_color,
            interior,
            tops,
            top_tets,
            top_tris,
            tets,
            tet_tops,
            tris,
            tri_top,
            vert_tops,
            vert_tets,
            vert_tris,
            anchor,
            t3,
            t4,
            t5,
        }))
    }
}

// ---------------------------------------------------------------------------
// Search state
// ---------------------------------------------------------------------------

/// Mutable annealing state: the current coloring of the ball plus exact
/// cached summaries of its 3-color class (active 4-simplices, component
/// labels, per-component and total χ, component count, and the spanning
/// component's χ).
pub struct SearchState {
    geom: Arc<SearchGeometry>,
    pub colors: Vec<u8>,
    active: Vec<bool>,
    /// Component label per active top (an opaque representative id).
    comp_id: Vec<u32>,
    /// Cached χ-table values per simplex, kept in sync with `colors` (only
    /// the simplices around a recolored vertex change), so rebuilds skip
    /// recomputing color patterns.
    top_t: Vec<i8>,
    tet_t: Vec<i8>,
    tet_qual: Vec<bool>,
    /// t3 is 1 exactly when the triangle qualifies, so it doubles as the
    /// qualification flag.
    tri_t: Vec<i8>,
    chi: HashMap<u32, i64>,
    pub sum_chi: i64,
    pub components: usize,
    pub chi_spanning: i64,
    label_spanning: u32,
    pub w_genus: f64,
    pub w_closed: f64,
    /// Diagnostic counters: component-structure rebuilds and local-analysis
    /// budget fallbacks.
    pub rebuilds: usize,
    pub fallbacks: usize,
}

/// How an evaluated proposal is committed on acceptance.
enum Commit {
    /// Component memberships unchanged: apply per-label χ deltas.
    Local(Vec<(u32, i64)>),
    /// One-to-one component survival with top activations/deactivations.
    Bijective {
        act: Vec<(u32, u32)>,
        deact: Vec<u32>,
        dchi: Vec<(u32, i64)>,
    },
    /// Component structure changed (merge/split/birth/death) or analysis
    /// fell back: rebuild caches from scratch.
    Rebuild,
}

/// Exact evaluation of one proposed recoloring (nothing mutated yet).
pub struct Proposal {
    pub vertex: u32,
    pub color: u8,
    pub sum_chi: i64,
    pub components: usize,
    pub chi_spanning: i64,
    pub objective: f64,
    commit: Commit,
}

fn pat<const K: usize>(verts: &[u32; K], colors: &[u8]) -> usize {
    let mut p = 0usize;
    for &v in verts.iter().rev() {
        p = p * 3 + colors[v as usize] as usize;
    }
    p
}

fn pat_vc<const K: usize>(verts: &[u32; K], colors: &[u8], v: u32, c: u8) -> usize {
    let mut p = 0usize;
    for &u in verts.iter().rev() {
        let col = if u == v { c } else { colors[u as usize] };
        p = p * 3 + col as usize;
    }
    p
}

impl SearchState {
    /// Fresh state: boundary colors frozen, interior i.i.d. uniform.
    pub fn new(geom: Arc<SearchGeometry>, seed: u64, w_genus: f64, w_closed: f64) -> SearchState {
        let mut rng = SplitMix64::new(derive_seed(seed, 0x1317));
        let mut colors: Vec<u8> = geom.boundary_color.clone();
        for c in colors.iter_mut() {
            if *c == u8::MAX {
                *c = rng.next_below(3) as u8;
            }
        }
        let ntops = geom.tops.len();
        let (ntets, ntris) = (geom.tets.len(), geom.tris.len());
        let mut state = SearchState {
            geom,
            colors,
            active: vec![false; ntops],
            comp_id: vec![NONE; ntops],
            top_t: vec![0; ntops],
            tet_t: vec![0; ntets],
            tet_qual: vec![false; ntets],
            tri_t: vec![0; ntris],
            chi: HashMap::new(),
            sum_chi: 0,
            components: 0,
            chi_spanning: 0,
            label_spanning: NONE,
            w_genus,
            w_closed,
            rebuilds: 0,
            fallbacks: 0,
        };
        state.recompute_caches();
        state.full_rebuild();
        state
    }

    pub fn geometry(&self) -> &SearchGeometry {
        &self.geom
    }

    /// Spanning-surface genus from χ: the spanning component has exactly one
    /// boundary circle (the link curve), so genus = (1 − χ)/2.
    pub fn spanning_genus(&self) -> i64 {
        debug_assert!(self.chi_spanning % 2 != 0, "spanning χ must be odd");
        (1 - self.chi_spanning) / 2
    }

    /// Objective: w_genus·genus(F) + w_closed·(#closed + Σ genus(closed)).
    pub fn objective(&self) -> f64 {
        objective_from(
            self.w_genus,
            self.w_closed,
            self.components,
            self.sum_chi,
            self.chi_spanning,
        )
    }

    /// Recomputes every per-simplex cache entry from the colors.
    fn recompute_caches(&mut self) {
        let g = Arc::clone(&self.geom);
        for (p, tv) in g.tops.iter().enumerate() {
            let pat = pat(tv, &self.colors);
            self.top_t[p] = g.t5[pat];
            self.active[p] = distinct3(pat, 5) == 3;
        }
        for (tid, tv) in g.tets.iter().enumerate() {
            let pat = pat(tv, &self.colors);
            self.tet_t[tid] = g.t4[pat];
            self.tet_qual[tid] = distinct3(pat, 4) == 3;
        }
        for (tid, tv) in g.tris.iter().enumerate() {
            self.tri_t[tid] = g.t3[pat(tv, &self.colors)];
        }
    }

    /// Refreshes the cache entries of every simplex containing `v` (the only
    /// ones a recoloring of `v` can change).
    fn refresh_incident(&mut self, v: u32) {
        let g = Arc::clone(&self.geom);
        for &p in g.vert_tops.row(v) {
            let pat = pat(&g.tops[p as usize], &self.colors);
            self.top_t[p as usize] = g.t5[pat];
            self.active[p as usize] = distinct3(pat, 5) == 3;
        }
        for &tid in g.vert_tets.row(v) {
            let pat = pat(&g.tets[tid as usize], &self.colors);
            self.tet_t[tid as usize] = g.t4[pat];
            self.tet_qual[tid as usize] = distinct3(pat, 4) == 3;
        }
        for &tid in g.vert_tris.row(v) {
            self.tri_t[tid as usize] = g.t3[pat(&g.tris[tid as usize], &self.colors)];
        }
    }

    /// Rebuilds component labels, per-component χ, and the spanning summary
    /// from the (cached) per-simplex data.
    pub fn full_rebuild(&mut self) {
        let g = Arc::clone(&self.geom);
        let ntops = g.tops.len();
        let mut uf = UnionFind::new(ntops);
        for tid in 0..g.tets.len() {
            if self.tet_qual[tid] {
                let [a, b] = g.tet_tops[tid];
                if a != NONE && b != NONE {
                    uf.union(a, b);
                }
            }
        }
        self.chi.clear();
        for p in 0..ntops as u32 {
            if self.active[p as usize] {
                let root = uf.find(p);
                self.comp_id[p as usize] = root;
                *self.chi.entry(root).or_insert(0) += self.top_t[p as usize] as i64;
            } else {
                self.comp_id[p as usize] = NONE;
            }
        }
        for tid in 0..g.tets.len() {
            if self.tet_qual[tid] {
                let owner = self.comp_id[g.tet_tops[tid][0] as usize];
                *self.chi.entry(owner).or_insert(0) += self.tet_t[tid] as i64;
            }
        }
        for tid in 0..g.tris.len() {
            if self.tri_t[tid] != 0 {
                let owner = self.comp_id[g.tri_top[tid] as usize];
                *self.chi.entry(owner).or_insert(0) += 1;
            }
        }
        self.components = self.chi.len();
        self.sum_chi = self.chi.values().sum();
        debug_assert!(self.active[g.anchor as usize], "anchor must stay active");
        self.label_spanning = self.comp_id[g.anchor as usize];
        self.chi_spanning = self.chi[&self.label_spanning];
    }

    /// Verifies incremental caches against a genuinely from-scratch
    /// recomputation (caches included); exact equality is required.
    pub fn verify_checkpoint(&mut self) -> Result<()> {
        let before = (self.sum_chi, self.components, self.chi_spanning, self.objective());
        let cached = (
            self.active.clone(),
            self.top_t.clone(),
            self.tet_t.clone(),
            self.tet_qual.clone(),
            self.tri_t.clone(),
        );
        self.recompute_caches();
        if cached
            != (
                self.active.clone(),
                self.top_t.clone(),
                self.tet_t.clone(),
                self.tet_qual.clone(),
                self.tri_t.clone(),
            )
        {
            return Err(Error::Internal(
                "incremental simplex caches diverged from the coloring".into(),
            ));
        }
        self.full_rebuild();
        let after = (self.sum_chi, self.components, self.chi_spanning, self.objective());
        if before != after {
            return Err(Error::Internal(format!(
                "incremental state diverged from full recompute: {before:?} vs {after:?}"
            )));
        }
        Ok(())
    }

    /// Evaluates recoloring `vertex` to `color` without changing the state
    /// (only the diagnostic counters may move).
    pub fn evaluate(&mut self, vertex: u32, color: u8) -> Proposal {
        let g = Arc::clone(&self.geom);
        let colors = &self.colors;
        debug_assert!(g.boundary_color[vertex as usize] == u8::MAX, "boundary is frozen");
        debug_assert_ne!(colors[vertex as usize], color);

        // Per-simplex χ deltas, attributed to a containing top.
        let mut dchi_total = 0i64;
        let mut deltas: Vec<(u32, i64)> = Vec::new(); // (containing top, delta)
        let mut act: Vec<u32> = Vec::new();
        let mut deact: Vec<u32> = Vec::new();
        let mut structural = false;
        for &p in g.vert_tops.row(vertex) {
            let tv = &g.tops[p as usize];
            let pa = pat_vc(tv, colors, vertex, color);
            let qa = distinct3(pa, 5) == 3;
            if self.active[p as usize] != qa {
                structural = true;
                if qa {
                    act.push(p);
                } else {
                    deact.push(p);
                }
            }
            let d = (g.t5[pa] - self.top_t[p as usize]) as i64;
            if d != 0 {
                dchi_total += d;
                deltas.push((p, d));
            }
        }
        for &tid in g.vert_tets.row(vertex) {
            let tv = &g.tets[tid as usize];
            let pa = pat_vc(tv, colors, vertex, color);
            let qa = distinct3(pa, 4) == 3;
            if self.tet_qual[tid as usize] != qa && g.tet_tops[tid as usize][1] != NONE {
                structural = true; // an adjacency edge appears or disappears
            }
            let d = (g.t4[pa] - self.tet_t[tid as usize]) as i64;
            if d != 0 {
                dchi_total += d;
                deltas.push((g.tet_tops[tid as usize][0], d));
            }
        }
        for &tid in g.vert_tris.row(vertex) {
            let tv = &g.tris[tid as usize];
            let pa = pat_vc(tv, colors, vertex, color);
            let d = (g.t3[pa] - self.tri_t[tid as usize]) as i64;
            if d != 0 {
                dchi_total += d;
                deltas.push((g.tri_top[tid as usize], d));
            }
        }
        let sum_chi = self.sum_chi + dchi_total;

        if !structural {
            // Memberships unchanged; fold deltas into their components.
            let mut by_label: HashMap<u32, i64> = HashMap::new();
            for &(p, d) in &deltas {
                let label = self.comp_id[p as usize];
                debug_assert_ne!(label, NONE, "χ delta on an inactive region");
                *by_label.entry(label).or_insert(0) += d;
            }
            let chi_spanning = self.chi_spanning
                + by_label.get(&self.label_spanning).copied().unwrap_or(0);
            return Proposal {
                vertex,
                color,
                sum_chi,
                components: self.components,
                chi_spanning,
                objective: objective_from(
                    self.w_genus,
                    self.w_closed,
                    self.components,
                    sum_chi,
                    chi_spanning,
                ),
                commit: Commit::Local(by_label.into_iter().collect()),
            };
        }

        match self.local_analysis(vertex, color, &deltas, dchi_total, &act, &deact) {
            Some(p) => p,
            None => {
                self.fallbacks += 1;
                self.global_analysis(vertex, color, sum_chi, deltas)
            }
        }
    }

    /// Budgeted local connectivity analysis around the recolored vertex.
    /// Returns `None` when the budget is exhausted.
    #[allow(clippy::too_many_arguments)]
    fn local_analysis(
        &self,
        vertex: u32,
        color: u8,
        deltas: &[(u32, i64)],
        dchi_total: i64,
        act: &[u32],
        deact: &[u32],
    ) -> Option<Proposal> {
        let g = &self.geom;
        let qual_tet_after = |tid: u32| {
            let tv = &g.tets[tid as usize];
            if tv.contains(&vertex) {
                distinct3(pat_vc(tv, &self.colors, vertex, color), 4) == 3
            } else {
                self.tet_qual[tid as usize]
            }
        };
        let active_after = |p: u32| {
            let tv = &g.tops[p as usize];
            if tv.contains(&vertex) {
                distinct3(pat_vc(tv, &self.colors, vertex, color), 5) == 3
            } else {
                self.active[p as usize]
            }
        };

        // Touched before-components.
        let mut touched: HashSet<u32> = HashSet::new();
        for &p in g.vert_tops.row(vertex) {
            if self.active[p as usize] {
                touched.insert(self.comp_id[p as usize]);
            }
        }

        // Sources: incident after-active tops, plus the external neighbors
        // (through unchanged edges) of every incident top active before or
        // after. The former tracks components whose incident part vanishes;
        // the latter registers untouched components that a newly activated
        // top bridges into the zone.
        let mut sources: Vec<u32> = Vec::new();
        let mut seen_source: HashSet<u32> = HashSet::new();
        for &p in g.vert_tops.row(vertex) {
            if active_after(p) && seen_source.insert(p) {
                sources.push(p);
            }
            if self.active[p as usize] || active_after(p) {
                for &tid in &g.top_tets[p as usize] {
                    if g.tets[tid as usize].contains(&vertex) {
                        continue; // changed edges live between incident tops
                    }
                    if self.tet_qual[tid as usize] {
                        let [a, b] = g.tet_tops[tid as usize];
                        let other = if a == p { b } else { a };
                        if other != NONE && seen_source.insert(other) {
                            sources.push(other);
                        }
                    }
                }
            }
        }

        // Multi-source BFS on the post-recoloring adjacency graph. Groups of
        // sources merge only when their frontiers actually meet (a shared
        // before-component label is NOT sufficient: that component may be
        // splitting). Reaching a before-active top registers its component
        // as touched by that group.
        let mut parent: Vec<u32> = (0..sources.len() as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut queues: Vec<VecDeque<u32>> = Vec::with_capacity(sources.len());
        let mut nodes: Vec<Vec<u32>> = Vec::with_capacity(sources.len());
        let mut slot_roots: Vec<HashSet<u32>> = Vec::with_capacity(sources.len());
        let mut visited: HashMap<u32, u32> = HashMap::new();
        let mut budget = BFS_BUDGET;
        for (slot, &s) in sources.iter().enumerate() {
            visited.insert(s, slot as u32);
            queues.push(VecDeque::from([s]));
            nodes.push(vec![s]);
            let mut roots = HashSet::new();
            if self.active[s as usize] {
                let label = self.comp_id[s as usize];
                touched.insert(label);
                roots.insert(label);
            }
            slot_roots.push(roots);
            budget = budget.checked_sub(1)?;
        }

        loop {
            let mut progressed = false;
            let mut open_roots: HashSet<u32> = HashSet::new();
            for slot in 0..sources.len() as u32 {
                let r = find(&mut parent, slot);
                if !queues[slot as usize].is_empty() {
                    open_roots.insert(r);
                }
            }
            if open_roots.len() <= 1 {
                // At most one unresolved group: every other group is fully
                // enumerated, so the component structure is determined.
                break;
            }
            for slot in 0..sources.len() {
                let Some(p) = queues[slot].pop_front() else { continue };
                progressed = true;
                let gslot = find(&mut parent, slot as u32);
                for &tid in &g.top_tets[p as usize] {
                    if !qual_tet_after(tid) {
                        continue;
                    }
                    let [a, b] = g.tet_tops[tid as usize];
                    let q = if a == p { b } else { a };
                    if q == NONE {
                        continue;
                    }
                    match visited.get(&q) {
                        Some(&other) => {
                            let (ra, rb) = (find(&mut parent, other), find(&mut parent, gslot));
                            if ra != rb {
                                parent[rb as usize] = ra;
                            }
                        }
                        None => {
                            budget = budget.checked_sub(1)?;
                            visited.insert(q, gslot);
                            nodes[gslot as usize].push(q);
                            queues[gslot as usize].push_back(q);
                            if self.active[q as usize] {
                                let label = self.comp_id[q as usize];
                                touched.insert(label);
                                slot_roots[gslot as usize].insert(label);
                            }
                        }
                    }
                }
            }
            if !progressed {
                break;
            }
        }

        // Consolidate groups: each group is a distinct after-component
        // (complete when closed, partially explored when open).
        let mut group_of_slot: HashMap<u32, usize> = HashMap::new();
        let mut group_nodes: Vec<Vec<u32>> = Vec::new();
        let mut group_open: Vec<bool> = Vec::new();
        let mut group_roots: Vec<HashSet<u32>> = Vec::new();
        for slot in 0..sources.len() as u32 {
            let r = find(&mut parent, slot);
            let gi = *group_of_slot.entry(r).or_insert_with(|| {
                group_nodes.push(Vec::new());
                group_open.push(false);
                group_roots.push(HashSet::new());
                group_nodes.len() - 1
            });
            group_nodes[gi].append(&mut nodes[slot as usize]);
            group_open[gi] |= !queues[slot as usize].is_empty();
            group_roots[gi].extend(slot_roots[slot as usize].iter().copied());
        }
        if group_open.iter().filter(|&&o| o).count() > 1 {
            return None; // could not separate: fall back to global
        }

        // χ of every fully enumerated group, plus the remainder for the one
        // open group from the touched-χ balance.
        let touched_chi: i64 = touched.iter().map(|r| self.chi[r]).sum();
        let mut group_chi: Vec<i64> = vec![0; group_nodes.len()];
        let mut closed_sum = 0i64;
        for (gi, members) in group_nodes.iter().enumerate() {
            if group_open[gi] {
                continue;
            }
            group_chi[gi] = self.part_chi(members, vertex, color);
            closed_sum += group_chi[gi];
        }
        let open_idx = group_open.iter().position(|&o| o);
        if let Some(gi) = open_idx {
            group_chi[gi] = touched_chi + dchi_total - closed_sum;
        } else {
            debug_assert_eq!(closed_sum, touched_chi + dchi_total, "χ balance");
        }

        let components = self.components - touched.len() + group_nodes.len();
        let sum_chi = self.sum_chi + dchi_total;
        // The spanning component is wherever the anchor landed. If the
        // anchor's component was touched but the anchor itself was never
        // visited, its piece is the (unique) open group: closed groups are
        // complete, so they would contain it.
        let chi_spanning = if let Some(&slot) = visited.get(&g.anchor) {
            group_chi[group_of_slot[&find(&mut parent, slot)]]
        } else if touched.contains(&self.label_spanning) {
            group_chi[open_idx?]
        } else {
            self.chi_spanning
        };

        // Bijective survival: every touched component maps to exactly one
        // group and vice versa — memberships are preserved (no merge, split,
        // birth, or death), so the commit is local.
        let distinct_roots: HashSet<u32> =
            group_roots.iter().flat_map(|r| r.iter().copied()).collect();
        let bijective = group_nodes.len() == touched.len()
            && group_roots.iter().all(|r| r.len() == 1)
            && distinct_roots.len() == touched.len();
        let commit = if bijective {
            let mut act_labels = Vec::with_capacity(act.len());
            for &p in act {
                let slot = visited[&p];
                let gi = group_of_slot[&find(&mut parent, slot)];
                act_labels.push((p, *group_roots[gi].iter().next().unwrap()));
            }
            let dchi = group_roots
                .iter()
                .enumerate()
                .map(|(gi, roots)| {
                    let root = *roots.iter().next().unwrap();
                    (root, group_chi[gi] - self.chi[&root])
                })
                .collect();
            Commit::Bijective { act: act_labels, deact: deact.to_vec(), dchi }
        } else {
            Commit::Rebuild
        };
        let _ = deltas;
        Some(Proposal {
            vertex,
            color,
            sum_chi,
            components,
            chi_spanning,
            objective: objective_from(self.w_genus, self.w_closed, components, sum_chi, chi_spanning),
            commit,
        })
    }

    /// χ of a fully enumerated component part under the proposed recoloring.
    fn part_chi(&self, members: &[u32], vertex: u32, color: u8) -> i64 {
        let g = &self.geom;
        let mut chi = 0i64;
        let mut tet_seen: HashSet<u32> = HashSet::new();
        let mut tri_seen: HashSet<u32> = HashSet::new();
        for &p in members {
            let tv = &g.tops[p as usize];
            chi += if tv.contains(&vertex) {
                g.t5[pat_vc(tv, &self.colors, vertex, color)] as i64
            } else {
                self.top_t[p as usize] as i64
            };
            for &tid in &g.top_tets[p as usize] {
                if tet_seen.insert(tid) {
                    let tv = &g.tets[tid as usize];
                    chi += if tv.contains(&vertex) {
                        g.t4[pat_vc(tv, &self.colors, vertex, color)] as i64
                    } else {
                        self.tet_t[tid as usize] as i64
                    };
                }
            }
            for &tid in &g.top_tris[p as usize] {
                if tri_seen.insert(tid) {
                    let tv = &g.tris[tid as usize];
                    chi += if tv.contains(&vertex) {
                        g.t3[pat_vc(tv, &self.colors, vertex, color)] as i64
                    } else {
                        self.tri_t[tid as usize] as i64
                    };
                }
            }
        }
        chi
    }

    /// Exact global fallback: components and spanning χ recomputed from
    /// scratch under the proposed recoloring.
    fn global_analysis(
        &self,
        vertex: u32,
        color: u8,
        sum_chi: i64,
        _deltas: Vec<(u32, i64)>,
    ) -> Proposal {
        let g = Arc::clone(&self.geom);
        let ntops = g.tops.len();
        // Post-recoloring per-simplex data: cached values except around the
        // recolored vertex.
        let mut active = self.active.clone();
        let mut top_t = self.top_t.clone();
        let mut tet_t = self.tet_t.clone();
        let mut tet_qual = self.tet_qual.clone();
        let mut tri_t = self.tri_t.clone();
        for &p in g.vert_tops.row(vertex) {
            let pa = pat_vc(&g.tops[p as usize], &self.colors, vertex, color);
            active[p as usize] = distinct3(pa, 5) == 3;
            top_t[p as usize] = g.t5[pa];
        }
        for &tid in g.vert_tets.row(vertex) {
            let pa = pat_vc(&g.tets[tid as usize], &self.colors, vertex, color);
            tet_qual[tid as usize] = distinct3(pa, 4) == 3;
            tet_t[tid as usize] = g.t4[pa];
        }
        for &tid in g.vert_tris.row(vertex) {
            tri_t[tid as usize] = g.t3[pat_vc(&g.tris[tid as usize], &self.colors, vertex, color)];
        }
        let mut uf = UnionFind::new(ntops);
        for tid in 0..g.tets.len() {
            if tet_qual[tid] {
                let [a, b] = g.tet_tops[tid];
                if a != NONE && b != NONE {
                    uf.union(a, b);
                }
            }
        }
        let mut components = 0usize;
        for p in 0..ntops as u32 {
            if active[p as usize] && uf.find(p) == p {
                components += 1;
            }
        }
        let root_f = uf.find(g.anchor);
        let mut chi_spanning = 0i64;
        for p in 0..ntops as u32 {
            if active[p as usize] && uf.find(p) == root_f {
                chi_spanning += top_t[p as usize] as i64;
            }
        }
        for tid in 0..g.tets.len() {
            if tet_qual[tid] && uf.find(g.tet_tops[tid][0]) == root_f {
                chi_spanning += tet_t[tid] as i64;
            }
        }
        for tid in 0..g.tris.len() {
            if tri_t[tid] != 0 && uf.find(g.tri_top[tid]) == root_f {
                chi_spanning += 1;
            }
        }
        Proposal {
            vertex,
            color,
            sum_chi,
            components,
            chi_spanning,
            objective: objective_from(self.w_genus, self.w_closed, components, sum_chi, chi_spanning),
            commit: Commit::Rebuild,
        }
    }

    /// Applies an accepted proposal.
    pub fn apply(&mut self, proposal: Proposal) {
        self.colors[proposal.vertex as usize] = proposal.color;
        self.refresh_incident(proposal.vertex);
        match proposal.commit {
            Commit::Local(dchi) => {
                for (label, d) in dchi {
                    *self.chi.get_mut(&label).expect("live component") += d;
                }
            }
            Commit::Bijective { act, deact, dchi } => {
                for (p, label) in act {
                    self.comp_id[p as usize] = label;
                }
                for p in deact {
                    self.comp_id[p as usize] = NONE;
                }
                for (label, d) in dchi {
                    *self.chi.get_mut(&label).expect("live component") += d;
                }
            }
            Commit::Rebuild => {
                self.rebuilds += 1;
                self.full_rebuild();
                debug_assert_eq!(
                    (self.sum_chi, self.components, self.chi_spanning),
                    (proposal.sum_chi, proposal.components, proposal.chi_spanning),
                    "rebuild disagrees with evaluation"
                );
                return;
            }
        }
        self.sum_chi = proposal.sum_chi;
        self.components = proposal.components;
        self.chi_spanning = proposal.chi_spanning;
    }
}

fn objective_from(w_genus: f64, w_closed: f64, components: usize, sum_chi: i64, chi_f: i64) -> f64 {
    let genus_f = (1 - chi_f) as f64 / 2.0;
    let closed = (components - 1) as f64;
    let closed_genus = (2.0 * closed - (sum_chi - chi_f) as f64) / 2.0;
    w_genus * genus_f + w_closed * (closed + closed_genus)
}

// ---------------------------------------------------------------------------
// Annealing driver
// ---------------------------------------------------------------------------

/// Annealing schedule and budget.
#[derive(Clone, Debug)]
pub struct AnnealConfig {
    pub iterations: usize,
    pub t0: f64,
    /// Cooling factor per step; `None` derives γ so the final temperature is
    /// ≈ 10⁻³.
    pub gamma: Option<f64>,
    pub w_genus: f64,
    pub w_closed: f64,
    pub full_recompute_period: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            iterations: 100_000,
            t0: 1.0,
            gamma: None,
            w_genus: 1.0,
            w_closed: 0.25,
            full_recompute_period: 1000,
            seed: 1,
            restarts: 1,
        }
    }
}

impl AnnealConfig {
    pub fn cooling(&self) -> f64 {
        self.gamma
            .unwrap_or_else(|| (1e-3 / self.t0).powf(1.0 / self.iterations.max(1) as f64))
    }
}

/// One sampled point of the objective trace.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub temperature: f64,
    pub objective: f64,
    pub best_objective: f64,
}

/// Result of one annealing chain.
#[derive(Clone)]
pub struct ChainResult {
    pub seed: u64,
    pub best_genus: i64,
    pub best_objective: f64,
    pub best_iteration: usize,
    pub best_colors: Vec<u8>,
    pub trace: Vec<TracePoint>,
    pub checkpoints: usize,
}

/// Runs one annealing chain from a fresh random interior coloring.
pub fn anneal_chain(
    geom: Arc<SearchGeometry>,
    cfg: &AnnealConfig,
    seed: u64,
) -> Result<ChainResult> {
    let mut state = SearchState::new(Arc::clone(&geom), seed, cfg.w_genus, cfg.w_closed);
    let boundary_snapshot: Vec<u8> = geom
        .interior
        .iter()
        .fold(geom.boundary_color.clone(), |acc, _| acc);
    let mut rng = SplitMix64::new(derive_seed(seed, 0x90));
    let gamma = cfg.cooling();
    let mut t = cfg.t0;
    let mut obj = state.objective();
    let mut best = (state.spanning_genus(), obj);
    let mut best_iter = 0usize;
    let mut best_colors = state.colors.clone();
    let mut checkpoints = 0usize;
    let stride = (cfg.iterations / 512).max(1);
    let mut trace = vec![TracePoint {
        iteration: 0,
        temperature: t,
        objective: obj,
        best_objective: obj,
    }];

    for i in 1..=cfg.iterations {
        if cfg.full_recompute_period > 0 && i % cfg.full_recompute_period == 0 {
            state.verify_checkpoint()?;
            checkpoints += 1;
        }
        let v = geom.interior[rng.next_below(geom.interior.len() as u64) as usize];
        let c_old = state.colors[v as usize];
        let c_new = (c_old + 1 + rng.next_below(2) as u8) % 3;
        let proposal = state.evaluate(v, c_new);
        let delta = proposal.objective - obj;
        if delta <= 0.0 || rng.next_f64() < (-delta / t).exp() {
            obj = proposal.objective;
            state.apply(proposal);
            let key = (state.spanning_genus(), obj);
            if key < best {
                best = key;
                best_iter = i;
                best_colors = state.colors.clone();
            }
        }
        t *= gamma;
        if i % stride == 0 {
            trace.push(TracePoint {
                iteration: i,
                temperature: t,
                objective: obj,
                best_objective: best.1,
            });
        }
    }
    // The boundary must never have been touched.
    for (v, &c) in boundary_snapshot.iter().enumerate() {
        if c != u8::MAX && state.colors[v] != c {
            return Err(Error::Internal("boundary coloring changed during search".into()));
        }
    }
    Ok(ChainResult {
        seed,
        best_genus: best.0,
        best_objective: best.1,
        best_iteration: best_iter,
        best_colors,
        trace,
        checkpoints,
    })
}

/// Outcome of a multi-restart search: the lexicographically best
/// (genus, objective, seed) chain.
pub struct SearchOutcome {
    pub n: usize,
    pub best: ChainResult,
    pub all_genera: Vec<(u64, i64)>,
    pub checkpoints: usize,
}

/// Runs `restarts` independent chains (in parallel) with derived seeds and
/// merges by lexicographic (genus, objective, seed).
pub fn run_search(boundary: &BoundaryColoring, cfg: &AnnealConfig) -> Result<SearchOutcome> {
    let geom = SearchGeometry::new(boundary)?;
    let chains: Vec<ChainResult> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|i| anneal_chain(Arc::clone(&geom), cfg, derive_seed(cfg.seed, i as u64)))
        .collect::<Result<_>>()?;
    let all_genera: Vec<(u64, i64)> = chains.iter().map(|c| (c.seed, c.best_genus)).collect();
    let checkpoints = chains.iter().map(|c| c.checkpoints).sum();
    let best = chains
        .into_iter()
        .min_by(|a, b| {
            (a.best_genus, a.best_objective, a.seed)
                .partial_cmp(&(b.best_genus, b.best_objective, b.seed))
                .unwrap()
        })
        .expect("at least one chain");
    Ok(SearchOutcome { n: geom.n, best, all_genera, checkpoints })
}

// ---------------------------------------------------------------------------
// Certificate
// ---------------------------------------------------------------------------

/// Independent validation of a final coloring: re-extracts the 3-color class
/// from scratch, checks that it is a manifold, that its boundary equals the
/// boundary 3-color class and lies in one spanning component, that every
/// component is orientable, and reports the spanning genus.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GenusCertificate {
    pub coloring_hash: u64,
    pub genus: i64,
    pub chi: i64,
    pub boundary_circles: usize,
    pub components: Vec<ComponentSummary>,
}

/// FNV-1a over the color bytes (with n mixed in), for certificate identity.
pub fn coloring_hash(n: usize, colors: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ (n as u64);
    for &c in colors {
        h ^= c as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn genus_upper_bound_certificate(
    g: &GridComplex,
    coloring: &Coloring,
) -> Result<GenusCertificate> {
    let stratum = StratumComplex::build(g, coloring, ColorSet::full(3))?;
    if stratum.is_empty() {
        return Err(Error::InvalidInput("3-color class is empty".into()));
    }
    let report = validate_manifold(&stratum);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "certificate voided: class is not a manifold: {:?}",
            report.offenders.first()
        )));
    }
    let summary = surface_summary(&stratum)?;
    // Boundary cells (class ∩ ∂M) must be nonempty and lie in exactly one
    // component, whose boundary is a single circle for a knot.
    let mut spanning: Option<u32> = None;
    for (v, &on_bd) in stratum.vertex_on_boundary.iter().enumerate() {
        if !on_bd {
            continue;
        }
        let comp = stratum.component[v];
        match spanning {
            None => spanning = Some(comp),
            Some(c) if c != comp => {
                return Err(Error::Internal(
                    "certificate voided: boundary class spans multiple components".into(),
                ))
            }
            _ => {}
        }
    }
    let spanning =
        spanning.ok_or_else(|| Error::Internal("certificate voided: no boundary cells".into()))?;
    for (i, comp) in summary.components.iter().enumerate() {
        if !comp.orientable {
            return Err(Error::Internal(format!(
                "certificate voided: component {i} is non-orientable"
            )));
        }
        let expect_circles = if i as u32 == spanning { 1 } else { 0 };
        if comp.boundary_circles != expect_circles {
            return Err(Error::Internal(format!(
                "certificate voided: component {i} has {} boundary circles, expected {}",
                comp.boundary_circles, expect_circles
            )));
        }
    }
    let span = &summary.components[spanning as usize];
    Ok(GenusCertificate {
        coloring_hash: coloring_hash(g.n, &coloring.colors),
        genus: span.genus,
        chi: span.chi,
        boundary_circles: span.boundary_circles,
        components: summary.components.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::random_coloring;
    use crate::tiles::fixtures;
    use crate::tiles::realize_diagram;

    /// A small boundary coloring on sphere(3, n) from a seed, retried until
    /// the boundary 3-color class is nonempty.
    fn random_boundary(n: usize, seed: u64) -> BoundaryColoring {
        let sphere = GridComplex::build(Family::Sphere, 3, n).unwrap();
        for s in seed.. {
            let coloring = random_coloring(&sphere, &[1.0 / 3.0; 3], s).unwrap();
            let bc = BoundaryColoring { complex: sphere.clone(), coloring };
            if SearchGeometry::new(&bc).is_ok() {
                return bc;
            }
        }
        unreachable!()
    }

    fn ball_coloring(geom: &SearchGeometry, colors: &[u8]) -> Coloring {
        Coloring::new(&geom.complex, 3, colors.to_vec()).unwrap()
    }

    #[test]
    fn chi_tables_match_stratum_oracle() {
        let bc = random_boundary(2, 7);
        let geom = SearchGeometry::new(&bc).unwrap();
        for seed in 0..20 {
            let state = SearchState::new(Arc::clone(&geom), seed, 1.0, 0.25);
            let coloring = ball_coloring(&geom, &state.colors);
            let stratum =
                StratumComplex::build(&geom.complex, &coloring, ColorSet::full(3)).unwrap();
            assert_eq!(state.sum_chi, stratum.euler_characteristic(), "seed {seed}");
            assert_eq!(state.components, stratum.component_count, "seed {seed}");
            // Per-component χ as multisets.
            let mut ours: Vec<i64> = state.chi.values().copied().collect();
            let mut theirs: Vec<i64> = (0..stratum.component_count as u32)
                .map(|c| stratum.component_euler_characteristic(c))
                .collect();
            ours.sort_unstable();
            theirs.sort_unstable();
            assert_eq!(ours, theirs, "seed {seed}");
        }
    }

    #[test]
    fn incremental_walk_matches_full_recompute() {
        let bc = random_boundary(3, 3);
        let geom = SearchGeometry::new(&bc).unwrap();
        let mut state = SearchState::new(Arc::clone(&geom), 11, 1.0, 0.25);
        let mut rng = SplitMix64::new(99);
        for step in 0..400 {
            let v = geom.interior[rng.next_below(geom.interior.len() as u64) as usize];
            let c_old = state.colors[v as usize];
            let c_new = (c_old + 1 + rng.next_below(2) as u8) % 3;
            let proposal = state.evaluate(v, c_new);
            // Cross-check every evaluation against the exact global path.
            let oracle = state.global_analysis(v, c_new, proposal.sum_chi, Vec::new());
            assert_eq!(
                (proposal.components, proposal.chi_spanning),
                (oracle.components, oracle.chi_spanning),
                "step {step}: local analysis diverged"
            );
            if rng.next_f64() < 0.7 {
                state.apply(proposal);
            }
            if step % 25 == 0 {
                state.verify_checkpoint().unwrap();
            }
        }
        state.verify_checkpoint().unwrap();
    }

    #[test]
    fn objective_zero_for_disk_and_positive_in_soup() {
        let bc = realize_diagram(&fixtures::unknot()).unwrap();
        let geom = SearchGeometry::new(&bc).unwrap();
        // Random initial states essentially always carry spurious genus or
        // closed components.
        let state = SearchState::new(Arc::clone(&geom), 5, 1.0, 0.25);
        assert!(state.objective() > 0.0);
        assert!(state.spanning_genus() >= 0);
    }

    #[test]
    fn unknot_search_finds_a_disk() {
        let bc = realize_diagram(&fixtures::unknot()).unwrap();
        let cfg = AnnealConfig {
            iterations: 30_000,
            restarts: 2,
            seed: 42,
            ..AnnealConfig::default()
        };
        let out = run_search(&bc, &cfg).unwrap();
        assert!(out.checkpoints > 0);
        assert_eq!(out.best.best_genus, 0, "all genera: {:?}", out.all_genera);
        // Independent certificate on the winning coloring.
        let geom = SearchGeometry::new(&bc).unwrap();
        let coloring = ball_coloring(&geom, &out.best.best_colors);
        let cert = genus_upper_bound_certificate(&geom.complex, &coloring).unwrap();
        assert_eq!(cert.genus, 0);
        assert_eq!(cert.chi, 1);
        assert_eq!(cert.boundary_circles, 1);
        assert_eq!(cert.coloring_hash, coloring_hash(geom.n, &out.best.best_colors));
    }
}
