//! Explicit realization of a color class as a subcomplex of the barycentric
//! subdivision, plus manifold validation and surface summaries.
//!
//! A point belongs to the C-class when its Voronoi color set contains C. The
//! class is the subcomplex of the barycentric subdivision spanned by the
//! barycenters of faces whose vertex colors contain C; its simplices are
//! strict inclusion chains of such faces. A barycenter is a boundary vertex
//! of the class exactly when its face lies in the boundary of the ambient
//! manifold or carries strictly more colors than C.

use crate::coloring::{ColorSet, Coloring};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::lattice::{GridComplex, LatticeSimplex};
use crate::unionfind::UnionFind;
use std::collections::HashMap;

/// Maximum chain length: faces grow from |C| to d+1 vertices, d ≤ 4.
pub const MAX_CHAIN: usize = 5;

/// The C-class of a coloring as an explicit simplicial complex.
#[derive(Clone, Debug)]
pub struct StratumComplex {
    pub colorset: ColorSet,
    /// Dimension of the class as a manifold: d − |C| + 1.
    pub dim: usize,
    /// Barycentric vertices: ambient faces whose colors contain C.
    pub vertices: Vec<LatticeSimplex>,
    /// Per vertex: lies on the class boundary (face in ∂M, or extra colors).
    pub vertex_on_boundary: Vec<bool>,
    /// simplices[q] = q-dimensional chains (q+1 vertex ids, inclusion order).
    pub simplices: Vec<Vec<[u32; MAX_CHAIN]>>,
    /// Connected component label per vertex, and the component count.
    pub component: Vec<u32>,
    pub component_count: usize,
    key_to_vertex: HashMap<u64, u32>,
}

impl StratumComplex {
    /// Builds the C-class subcomplex with all chain dimensions.
    pub fn build(g: &GridComplex, coloring: &Coloring, colorset: ColorSet) -> Result<StratumComplex> {
        Self::build_up_to(g, coloring, colorset, usize::MAX)
    }

    /// Builds chains only up to `max_dim` (e.g. 1 for connectivity work).
    pub fn build_up_to(
        g: &GridComplex,
        coloring: &Coloring,
        colorset: ColorSet,
        max_dim: usize,
    ) -> Result<StratumComplex> {
        if colorset.is_empty() || colorset.len() > g.d + 1 {
            return Err(Error::InvalidInput(format!(
                "colorset {colorset:?} invalid for d={}",
                g.d
            )));
        }
        if !coloring.matches(g) {
            return Err(Error::InvalidInput("coloring does not match complex".into()));
        }
        let m = colorset.len();
        let dim = g.d + 1 - m;
        let max_dim = max_dim.min(dim);

        // Qualifying faces = barycentric vertices.
        let mut vertices: Vec<LatticeSimplex> = Vec::new();
        let mut vertex_on_boundary: Vec<bool> = Vec::new();
        let mut key_to_vertex: HashMap<u64, u32> = HashMap::new();
        for r in m..=g.d + 1 {
            g.for_each_simplex(r, |s| {
                let cs = coloring.simplex_colors(g, s);
                if colorset.is_subset_of(cs) {
                    let id = vertices.len() as u32;
                    key_to_vertex.insert(g.face_key(s), id);
                    vertices.push(*s);
                    vertex_on_boundary.push(cs != colorset || g.face_in_boundary(s));
                }
            });
        }

        // Inclusion edges: each qualifying face lists its qualifying proper
        // subfaces; comparability is transitive along consecutive links.
        let nv = vertices.len();
        let mut up: Vec<Vec<u32>> = vec![Vec::new(); nv];
        let mut uf = UnionFind::new(nv);
        let mut edges: Vec<[u32; MAX_CHAIN]> = Vec::new();
        for (j, face) in vertices.iter().enumerate() {
            let cnt = face.vertex_count() as u8;
            for keep in 1u8..((1u16 << cnt) - 1) as u8 {
                if keep.count_ones() < m as u32 {
                    continue;
                }
                let sub = g.canonicalize(&face.subface(keep));
                if let Some(&i) = key_to_vertex.get(&g.face_key(&sub)) {
                    up[i as usize].push(j as u32);
                    uf.union(i, j as u32);
                    if max_dim >= 1 {
                        let mut c = [0u32; MAX_CHAIN];
                        c[0] = i;
                        c[1] = j as u32;
                        edges.push(c);
                    }
                }
            }
        }
        for u in up.iter_mut() {
            u.sort_unstable();
            u.dedup();
        }
        edges.sort_unstable();
        edges.dedup();

        let mut simplices: Vec<Vec<[u32; MAX_CHAIN]>> = Vec::new();
        simplices.push(
            (0..nv as u32)
                .map(|i| {
                    let mut c = [0u32; MAX_CHAIN];
                    c[0] = i;
                    c
                })
                .collect(),
        );
        if max_dim >= 1 {
            simplices.push(edges);
        }
        for q in 2..=max_dim {
            let prev = &simplices[q - 1];
            let mut next: Vec<[u32; MAX_CHAIN]> = Vec::new();
            for chain in prev {
                let end = chain[q - 1];
                for &j in &up[end as usize] {
                    let mut c = *chain;
                    c[q] = j;
                    next.push(c);
                }
            }
            if next.is_empty() {
                break;
            }
            simplices.push(next);
        }

        let (component, component_count) = uf.labels();
        Ok(StratumComplex {
            colorset,
            dim,
            vertices,
            vertex_on_boundary,
            simplices,
            component,
            component_count,
            key_to_vertex,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_id(&self, g: &GridComplex, face: &LatticeSimplex) -> Option<u32> {
        self.key_to_vertex.get(&g.face_key(face)).copied()
    }

    /// f-vector over realized chain dimensions.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|v| v.len()).collect()
    }

    /// χ from the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(q, v)| if q % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }

    /// χ restricted to one component.
    pub fn component_euler_characteristic(&self, comp: u32) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(q, v)| {
                let cnt = v
                    .iter()
                    .filter(|c| self.component[c[0] as usize] == comp)
                    .count() as i64;
                if q % 2 == 0 {
                    cnt
                } else {
                    -cnt
                }
            })
            .sum()
    }

    /// The link of a stratum vertex within the stratum, as an explicit
    /// complex over stratum vertex ids.
    pub fn vertex_link(&self, v: u32) -> SimplicialComplex {
        let mut faces: Vec<Vec<u32>> = Vec::new();
        for (q, chains) in self.simplices.iter().enumerate().skip(1) {
            for c in chains {
                if c[..=q].contains(&v) {
                    faces.push(c[..=q].iter().copied().filter(|&x| x != v).collect());
                }
            }
        }
        SimplicialComplex::from_faces(faces)
    }
}

/// Outcome of the Lemma-style manifold validation.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checked_vertices: usize,
    /// (stratum vertex id, what went wrong)
    pub offenders: Vec<(u32, String)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Validates that the class is a proper combinatorial manifold of its
/// dimension: the link of every barycentric vertex is a combinatorial sphere
/// (interior vertices) or disk (vertices on ∂M or on the extra-color set X⁺).
/// For curves this is the degree-2 / degree-1 rule; an empty class is
/// vacuously valid.
pub fn validate_manifold(stratum: &StratumComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    if stratum.is_empty() {
        return report;
    }
    report.checked_vertices = stratum.vertices.len();
    if stratum.dim == 0 {
        // 0-manifold: vertices only, nothing to check beyond emptiness of
        // higher chains.
        if stratum.simplices.len() > 1 && !stratum.simplices[1].is_empty() {
            report.offenders.push((0, "0-dimensional class has edges".into()));
        }
        return report;
    }
    for v in 0..stratum.vertices.len() as u32 {
        let link = stratum.vertex_link(v);
        let want_dim = stratum.dim - 1;
        let good = if stratum.vertex_on_boundary[v as usize] {
            link.is_combinatorial_disk(want_dim)
        } else {
            link.is_combinatorial_sphere(want_dim)
        };
        if !good {
            let kind = if stratum.vertex_on_boundary[v as usize] { "disk" } else { "sphere" };
            report
                .offenders
                .push((v, format!("link is not a combinatorial {want_dim}-{kind}")));
        }
    }
    report
}

/// Classification data for one surface component.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ComponentSummary {
    pub vertices: usize,
    pub chi: i64,
    pub boundary_circles: usize,
    pub orientable: bool,
    pub genus: i64,
}

/// Classification of a 2-dimensional class, per component.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SurfaceSummary {
    pub components: Vec<ComponentSummary>,
}

impl SurfaceSummary {
    pub fn total_chi(&self) -> i64 {
        self.components.iter().map(|c| c.chi).sum()
    }
}

/// Computes per-component χ, boundary-circle count, orientability, and genus
/// of a 2-dimensional class. Fails on non-surface input.
pub fn surface_summary(stratum: &StratumComplex) -> Result<SurfaceSummary> {
    if stratum.is_empty() {
        return Ok(SurfaceSummary { components: Vec::new() });
    }
    if stratum.dim != 2 {
        return Err(Error::InvalidInput(format!(
            "surface summary requires a 2-dimensional class, got dim {}",
            stratum.dim
        )));
    }
    let nv = stratum.vertices.len();
    let empty: Vec<[u32; MAX_CHAIN]> = Vec::new();
    let edges = stratum.simplices.get(1).unwrap_or(&empty);
    let triangles = stratum.simplices.get(2).unwrap_or(&empty);

    // Edge id lookup and per-edge triangle counts.
    let mut edge_id: HashMap<(u32, u32), u32> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        edge_id.insert((e[0], e[1]), i as u32);
    }
    let ekey = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    // Chains are inclusion-ordered; the pair (min,max) of ids is NOT sorted
    // numerically in general, so normalize by the stored chain order instead:
    // each edge chain is (sub, super) and triangle sub-edges come from chain
    // positions, which we map through the chain entries directly.
    let mut tri_count = vec![0u32; edges.len()];
    let mut tri_edges: Vec<[u32; 3]> = Vec::with_capacity(triangles.len());
    for t in triangles {
        let pairs = [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])];
        let mut ids = [0u32; 3];
        for (j, &(a, b)) in pairs.iter().enumerate() {
            let id = *edge_id
                .get(&(a, b))
                .ok_or_else(|| Error::Internal("triangle edge missing from complex".into()))?;
            tri_count[id as usize] += 1;
            ids[j] = id;
        }
        tri_edges.push(ids);
    }
    let _ = ekey;
    if tri_count.iter().any(|&c| c > 2) {
        return Err(Error::InvalidInput("an edge lies in more than two triangles".into()));
    }

    // Boundary circles: union-find over boundary edges sharing a vertex.
    let mut boundary_edges: Vec<u32> = (0..edges.len() as u32)
        .filter(|&e| tri_count[e as usize] == 1)
        .collect();
    let mut buf = UnionFind::new(boundary_edges.len());
    {
        let mut at_vertex: HashMap<u32, u32> = HashMap::new();
        for (bi, &e) in boundary_edges.iter().enumerate() {
            for &v in &edges[e as usize][..2] {
                match at_vertex.entry(v) {
                    std::collections::hash_map::Entry::Occupied(o) => {
                        buf.union(*o.get(), bi as u32);
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(bi as u32);
                    }
                }
            }
        }
    }
    let (bd_labels, _) = buf.labels();
    // Map each boundary circle to its surface component and count per comp.
    let mut circles_per_comp: HashMap<u32, std::collections::HashSet<u32>> = HashMap::new();
    for (bi, &e) in boundary_edges.iter().enumerate() {
        let comp = stratum.component[edges[e as usize][0] as usize];
        circles_per_comp.entry(comp).or_default().insert(bd_labels[bi]);
    }
    boundary_edges.clear();

    // Orientability: propagate orientations across shared edges.
    let orientable_per_comp = orientability(nv, edges, triangles, &tri_edges, stratum)?;

    let mut components = Vec::new();
    for comp in 0..stratum.component_count as u32 {
        let vertices = stratum
            .component
            .iter()
            .filter(|&&c| c == comp)
            .count();
        let chi = stratum.component_euler_characteristic(comp);
        let boundary_circles = circles_per_comp.get(&comp).map_or(0, |s| s.len());
        let orientable = orientable_per_comp[comp as usize];
        let two_chi_b = 2 - chi - boundary_circles as i64;
        if orientable && (two_chi_b % 2 != 0 || two_chi_b < 0) {
            return Err(Error::Internal(format!(
                "component {comp}: inconsistent surface data chi={chi} b={boundary_circles}"
            )));
        }
        let genus = two_chi_b / 2;
        components.push(ComponentSummary { vertices, chi, boundary_circles, orientable, genus });
    }
    Ok(SurfaceSummary { components })
}

fn orientability(
    _nv: usize,
    _edges: &[[u32; MAX_CHAIN]],
    triangles: &[[u32; MAX_CHAIN]],
    tri_edges: &[[u32; 3]],
    stratum: &StratumComplex,
) -> Result<Vec<bool>> {
    // Triangles adjacent through each edge.
    let mut by_edge: HashMap<u32, Vec<u32>> = HashMap::new();
    for (t, ids) in tri_edges.iter().enumerate() {
        for &e in ids {
            by_edge.entry(e).or_default().push(t as u32);
        }
    }
    // Orientation flag per triangle: +1 means the chain order (v0,v1,v2) is
    // the positive cyclic order. Two triangles are consistent when they
    // traverse a shared edge in opposite directions.
    let mut orient: Vec<i8> = vec![0; triangles.len()];
    let mut result = vec![true; stratum.component_count];
    let directed = |t: usize, e_pos: usize| -> (u32, u32) {
        let tri = &triangles[t];
        // positive cyclic order v0 -> v1 -> v2 -> v0
        match e_pos {
            0 => (tri[0], tri[1]),
            1 => (tri[1], tri[2]),
            _ => (tri[2], tri[0]),
        }
    };
    for start in 0..triangles.len() {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut stack = vec![start as u32];
        while let Some(t) = stack.pop() {
            let t = t as usize;
            for (pos, &e) in tri_edges[t].iter().enumerate() {
                let (a, b) = directed(t, pos);
                for &u in &by_edge[&e] {
                    let u = u as usize;
                    if u == t {
                        continue;
                    }
                    // Find the shared edge's position in u and its direction.
                    let upos = tri_edges[u].iter().position(|&x| x == e).unwrap();
                    let (c, dvert) = directed(u, upos);
                    // Consistent when directions oppose (after applying the
                    // current orientation flags).
                    let same_direction = (a, b) == (c, dvert);
                    let want = if same_direction { -orient[t] } else { orient[t] };
                    if orient[u] == 0 {
                        orient[u] = want;
                        stack.push(u as u32);
                    } else if orient[u] != want {
                        let comp = stratum.component[triangles[u][0] as usize];
                        result[comp as usize] = false;
                    }
                }
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{random_coloring, Coloring};
    use crate::ec::exact_class_alternating_sum;
    use crate::lattice::Family;
    use crate::rng;

    fn mono(g: &GridComplex, k: usize) -> Coloring {
        Coloring::new(g, k, vec![0; g.vertex_count()]).unwrap()
    }

    #[test]
    fn monochromatic_class_is_whole_barycentric_subdivision() {
        let g = GridComplex::build(Family::Torus, 2, 3).unwrap();
        let c = mono(&g, 2);
        let s = StratumComplex::build(&g, &c, ColorSet(0b01)).unwrap();
        let total_faces: u64 = (1..=3).map(|r| g.face_count(r)).sum();
        assert_eq!(s.vertices.len() as u64, total_faces);
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.component_count, 1);
        // A colorset not present anywhere gives the empty class.
        let empty = StratumComplex::build(&g, &c, ColorSet(0b10)).unwrap();
        assert!(empty.is_empty());
        assert!(validate_manifold(&empty).ok());
    }

    #[test]
    fn two_color_class_of_a_square_is_an_arc() {
        // One square = 2 triangles; a 2-coloring puts the 2-color class
        // through each 2-colored triangle as an arc.
        let g = GridComplex::build(Family::Ball, 2, 1).unwrap();
        // row-major vertices: (0,0), (0,1), (1,0), (1,1)
        let c = Coloring::new(&g, 2, vec![0, 1, 1, 0]).unwrap();
        let s = StratumComplex::build(&g, &c, ColorSet(0b11)).unwrap();
        assert_eq!(s.dim, 1);
        assert!(!s.is_empty());
        assert!(validate_manifold(&s).ok());
        // Each component is an arc (χ = 1).
        for comp in 0..s.component_count as u32 {
            assert_eq!(s.component_euler_characteristic(comp), 1);
        }
    }

    #[test]
    fn stream_chi_matches_stratum_chi_on_random_torus() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        for seed in 0..20u64 {
            let c = random_coloring(&g, &[0.4, 0.3, 0.3], rng::derive_seed(7, seed)).unwrap();
            for mask in 1u32..8 {
                let cs = ColorSet(mask);
                let s = StratumComplex::build(&g, &c, cs).unwrap();
                let streamed = exact_class_alternating_sum(&g, &c, cs);
                assert_eq!(s.euler_characteristic(), streamed, "seed={seed} cs={cs:?}");
            }
        }
    }

    #[test]
    fn component_chis_sum_to_total() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        let c = random_coloring(&g, &[0.5, 0.5], 123).unwrap();
        let s = StratumComplex::build(&g, &c, ColorSet(0b01)).unwrap();
        let total: i64 = (0..s.component_count as u32)
            .map(|comp| s.component_euler_characteristic(comp))
            .sum();
        assert_eq!(total, s.euler_characteristic());
    }

    #[test]
    fn full_color_classes_validate_on_torus() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        for seed in 0..10u64 {
            for k in 2..=3usize {
                let probs = vec![1.0 / k as f64; k];
                let c = random_coloring(&g, &probs, rng::derive_seed(21, seed * 4 + k as u64))
                    .unwrap();
                for mask in 1u32..(1 << k) as u32 {
                    let s = StratumComplex::build(&g, &c, ColorSet(mask)).unwrap();
                    let rep = validate_manifold(&s);
                    assert!(rep.ok(), "seed={seed} k={k} mask={mask} offenders={:?}", rep.offenders);
                }
            }
        }
    }

    #[test]
    fn curve_endpoints_lie_on_higher_color_set() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        let c = random_coloring(&g, &[0.34, 0.33, 0.33], 5).unwrap();
        // Full 3-color class: a closed curve (torus has no boundary and no
        // higher color set), so every vertex has degree exactly 2.
        let full = StratumComplex::build(&g, &c, ColorSet(0b111)).unwrap();
        assert_eq!(full.dim, 1);
        assert!(validate_manifold(&full).ok());
        let edges = &full.simplices[1];
        for v in 0..full.vertices.len() as u32 {
            let deg = edges.iter().filter(|e| e[..2].contains(&v)).count();
            assert_eq!(deg, 2);
            assert!(!full.vertex_on_boundary[v as usize]);
        }
        // 2-color class: a surface whose boundary vertices are exactly the
        // barycenters carrying all three colors (the higher color set X⁺).
        let s = StratumComplex::build(&g, &c, ColorSet(0b011)).unwrap();
        assert_eq!(s.dim, 2);
        assert!(validate_manifold(&s).ok());
        for (v, face) in s.vertices.iter().enumerate() {
            let extra = c.simplex_colors(&g, face) != s.colorset;
            assert_eq!(s.vertex_on_boundary[v], extra);
        }
        // The boundary vertices are precisely the vertices of the full class.
        for (v, face) in s.vertices.iter().enumerate() {
            if s.vertex_on_boundary[v] {
                assert!(full.vertex_id(&g, face).is_some());
            }
        }
    }

    #[test]
    fn surface_summaries_of_known_spaces() {
        // Whole torus: one orientable component, χ=0, closed, genus 1.
        let g = GridComplex::build(Family::Torus, 2, 3).unwrap();
        let s = StratumComplex::build(&g, &mono(&g, 1), ColorSet(1)).unwrap();
        let sum = surface_summary(&s).unwrap();
        assert_eq!(sum.components.len(), 1);
        assert_eq!(
            sum.components[0],
            ComponentSummary {
                vertices: s.vertices.len(),
                chi: 0,
                boundary_circles: 0,
                orientable: true,
                genus: 1
            }
        );
        // Whole disk: χ=1, one boundary circle, genus 0.
        let g = GridComplex::build(Family::Ball, 2, 2).unwrap();
        let s = StratumComplex::build(&g, &mono(&g, 1), ColorSet(1)).unwrap();
        let sum = surface_summary(&s).unwrap();
        assert_eq!(sum.components.len(), 1);
        assert_eq!(sum.components[0].chi, 1);
        assert_eq!(sum.components[0].boundary_circles, 1);
        assert_eq!(sum.components[0].genus, 0);
        // Whole 2-sphere: χ=2, closed, genus 0.
        let g = GridComplex::build(Family::Sphere, 2, 2).unwrap();
        let s = StratumComplex::build(&g, &mono(&g, 1), ColorSet(1)).unwrap();
        let sum = surface_summary(&s).unwrap();
        assert_eq!(sum.components.len(), 1);
        assert_eq!(sum.components[0].chi, 2);
        assert_eq!(sum.components[0].boundary_circles, 0);
        assert_eq!(sum.components[0].genus, 0);
    }

    #[test]
    fn two_color_surfaces_in_three_torus_are_orientable() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        for seed in 0..10u64 {
            let c = random_coloring(&g, &[0.5, 0.5], rng::derive_seed(31, seed)).unwrap();
            let s = StratumComplex::build(&g, &c, ColorSet(0b11)).unwrap();
            let sum = surface_summary(&s).unwrap();
            assert!(sum.components.iter().all(|c| c.orientable), "seed={seed}");
            assert!(sum.components.iter().all(|c| c.boundary_circles == 0));
        }
    }

    #[test]
    fn determinism() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        let c = random_coloring(&g, &[0.5, 0.5], 77).unwrap();
        let a = StratumComplex::build(&g, &c, ColorSet(0b11)).unwrap();
        let b = StratumComplex::build(&g, &c, ColorSet(0b11)).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.simplices, b.simplices);
        assert_eq!(a.component, b.component);
    }
}
