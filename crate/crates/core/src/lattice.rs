//! Implicit grid triangulations: the d-torus, d-ball, and d-sphere families,
//! each unit cube subdivided into d! simplices (one per coordinate ordering).
//!
//! No simplex list is ever stored. A simplex is identified by its smallest
//! vertex (`base`) plus an ordered list of pairwise-disjoint nonempty axis
//! subsets (`increments`); vertex j+1 is vertex j plus the indicator vector of
//! increment j. Enumeration walks base vertices and a precomputed table of
//! increment tuples, so memory stays proportional to the vertex count.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Maximum number of lattice axes (d ≤ 4 for torus/ball, plus the internal
/// box dimension d+1 ≤ 5 for spheres).
pub const MAX_AXES: usize = 5;

/// Lattice coordinates; only the first `box_dim` entries are meaningful.
pub type Coord = [u16; MAX_AXES];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Torus,
    Ball,
    Sphere,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Torus => "torus",
            Family::Ball => "ball",
            Family::Sphere => "sphere",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "torus" => Ok(Family::Torus),
            "ball" => Ok(Family::Ball),
            "sphere" => Ok(Family::Sphere),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }

    /// Whether the family is a closed manifold (no boundary).
    pub fn is_closed(self) -> bool {
        !matches!(self, Family::Ball)
    }
}

/// One ordered tuple of pairwise-disjoint nonempty axis subsets, encoded as
/// bitmasks. A tuple with `len` masks describes simplices with `len + 1`
/// vertices.
#[derive(Clone, Copy, Debug)]
pub struct IncTuple {
    pub masks: [u8; MAX_AXES],
    pub len: u8,
    /// Union of all masks (the set of axes the simplex moves along).
    pub union: u8,
}

/// A simplex of the grid triangulation: base vertex plus increment masks.
///
/// Canonical form: `base` is the coordinate-wise smallest vertex (for the
/// torus, the representative from which all increments move forward), so the
/// pair (base, increments) is unique per geometric face for n ≥ 3. (On the
/// torus with n = 2 distinct faces may share a vertex *set*, but each face
/// still has exactly one encoding.)
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSimplex {
    pub base: Coord,
    incs: [u8; MAX_AXES],
    nverts: u8,
}

impl LatticeSimplex {
    pub fn new(base: Coord, incs: &[u8]) -> LatticeSimplex {
        debug_assert!(incs.len() < MAX_AXES + 1);
        let mut arr = [0u8; MAX_AXES];
        arr[..incs.len()].copy_from_slice(incs);
        LatticeSimplex { base, incs: arr, nverts: incs.len() as u8 + 1 }
    }

    pub fn vertex_count(&self) -> usize {
        self.nverts as usize
    }

    pub fn dim(&self) -> usize {
        self.nverts as usize - 1
    }

    pub fn increments(&self) -> &[u8] {
        &self.incs[..self.nverts as usize - 1]
    }

    /// Union of all increment masks.
    pub fn axes_used(&self) -> u8 {
        self.increments().iter().fold(0, |a, m| a | m)
    }

    /// Writes the simplex's vertex coordinates (lifted, i.e. *not* reduced mod
    /// n) into `out`; returns the vertex count.
    pub fn lifted_vertices(&self, out: &mut [Coord; MAX_AXES + 1]) -> usize {
        let mut cur = self.base;
        out[0] = cur;
        for (j, &m) in self.increments().iter().enumerate() {
            for a in 0..MAX_AXES {
                if m >> a & 1 == 1 {
                    cur[a] += 1;
                }
            }
            out[j + 1] = cur;
        }
        self.nverts as usize
    }

    /// The subface spanned by the vertex positions selected by `keep`
    /// (a bitmask over positions 0..vertex_count, at least one bit set).
    pub fn subface(&self, keep: u8) -> LatticeSimplex {
        debug_assert!(keep != 0 && (keep >> self.nverts) == 0);
        let first = keep.trailing_zeros() as usize;
        let mut base = self.base;
        let incs = self.increments();
        for &m in &incs[..first] {
            for a in 0..MAX_AXES {
                if m >> a & 1 == 1 {
                    base[a] += 1;
                }
            }
        }
        let mut out = [0u8; MAX_AXES];
        let mut len = 0usize;
        let mut acc = 0u8;
        for (j, &m) in incs.iter().enumerate().skip(first) {
            acc |= m;
            if keep >> (j + 1) & 1 == 1 {
                if acc != 0 {
                    out[len] = acc;
                    len += 1;
                    acc = 0;
                }
            }
        }
        let mut s = LatticeSimplex { base, incs: out, nverts: len as u8 + 1 };
        // Base coordinates may exceed the fundamental domain on the torus;
        // callers reduce via GridComplex::canonicalize when needed.
        s.incs[len..].iter_mut().for_each(|m| *m = 0);
        s
    }
}

/// Compact boundary-vertex indexing for the sphere family.
#[derive(Clone, Debug)]
struct SphereIndex {
    /// Full-box row-major index -> compact index (u32::MAX for interior).
    to_compact: Vec<u32>,
    /// Compact index -> coordinates, ordered by full-box row-major index.
    to_coord: Vec<Coord>,
}

/// An implicit grid triangulation.
#[derive(Clone, Debug)]
pub struct GridComplex {
    pub family: Family,
    /// Topological dimension of the manifold.
    pub d: usize,
    pub n: usize,
    /// Number of lattice axes: d for torus/ball, d+1 for sphere.
    box_dim: usize,
    /// Lattice points per axis: n for torus, n+1 for ball/sphere boxes.
    side: usize,
    strides: [usize; MAX_AXES],
    vertex_count: usize,
    sphere_index: Option<SphereIndex>,
    /// inc_tuples[r] = all increment tuples for simplices with r vertices,
    /// over the full axis set; per-base validity is checked at enumeration.
    inc_tuples: Vec<Vec<IncTuple>>,
}

fn gen_tuples(box_dim: usize) -> Vec<Vec<IncTuple>> {
    let full: u8 = ((1u16 << box_dim) - 1) as u8;
    let mut per_r: Vec<Vec<IncTuple>> = vec![Vec::new(); box_dim + 2];
    per_r[1].push(IncTuple { masks: [0; MAX_AXES], len: 0, union: 0 });
    // Depth-first over ordered disjoint nonempty subsets of the axes.
    fn rec(remaining: u8, prefix: &mut Vec<u8>, per_r: &mut [Vec<IncTuple>]) {
        // Enumerate nonempty submasks of `remaining`.
        let mut m = remaining;
        while m != 0 {
            prefix.push(m);
            let mut masks = [0u8; MAX_AXES];
            masks[..prefix.len()].copy_from_slice(prefix);
            let union = prefix.iter().fold(0u8, |a, &x| a | x);
            per_r[prefix.len() + 1].push(IncTuple { masks, len: prefix.len() as u8, union });
            rec(remaining & !m, prefix, per_r);
            prefix.pop();
            m = (m - 1) & remaining;
        }
    }
    rec(full, &mut Vec::new(), &mut per_r);
    for v in per_r.iter_mut() {
        v.sort_by_key(|t| t.masks);
    }
    per_r
}

impl GridComplex {
    pub fn build(family: Family, d: usize, n: usize) -> Result<GridComplex> {
        let err = |msg: String| Err(Error::UnsupportedComplex(msg));
        if d == 0 {
            return err("d must be at least 1".into());
        }
        let box_dim = match family {
            Family::Torus | Family::Ball => d,
            Family::Sphere => d + 1,
        };
        if box_dim > MAX_AXES - 1 && family == Family::Sphere {
            return err(format!("sphere box dimension {box_dim} exceeds 5"));
        }
        if box_dim > MAX_AXES {
            return err(format!("dimension {d} out of supported range"));
        }
        match family {
            Family::Torus => {
                if d > 4 {
                    return err(format!("torus dimension {d} out of range 1..4"));
                }
                // n = 1 would identify a simplex's vertices with each other.
                if n < 2 {
                    return err("torus requires n >= 2".into());
                }
            }
            Family::Ball => {
                if d > 4 {
                    return err(format!("ball dimension {d} out of range 1..4"));
                }
                if n < 1 {
                    return err("ball requires n >= 1".into());
                }
            }
            Family::Sphere => {
                if box_dim > 5 {
                    return err(format!("sphere boundary dimension {d} out of range"));
                }
                if n < 1 {
                    return err("sphere requires n >= 1".into());
                }
            }
        }
        let side = match family {
            Family::Torus => n,
            _ => n + 1,
        };
        if (side as u64).pow(box_dim as u32) > u32::MAX as u64 {
            return err("lattice too large for 32-bit vertex indexing".into());
        }
        let mut strides = [0usize; MAX_AXES];
        let mut s = 1usize;
        for a in (0..box_dim).rev() {
            strides[a] = s;
            s *= side;
        }
        let box_points = s;
        let (vertex_count, sphere_index) = match family {
            Family::Sphere => {
                let mut to_compact = vec![u32::MAX; box_points];
                let mut to_coord = Vec::new();
                let mut c: Coord = [0; MAX_AXES];
                for idx in 0..box_points {
                    let on_boundary = (0..box_dim).any(|a| c[a] == 0 || c[a] as usize == n);
                    if on_boundary {
                        to_compact[idx] = to_coord.len() as u32;
                        to_coord.push(c);
                    }
                    // Row-major odometer: last axis fastest.
                    for a in (0..box_dim).rev() {
                        if (c[a] as usize) < side - 1 {
                            c[a] += 1;
                            break;
                        }
                        c[a] = 0;
                    }
                }
                (to_coord.len(), Some(SphereIndex { to_compact, to_coord }))
            }
            _ => (box_points, None),
        };
        Ok(GridComplex {
            family,
            d,
            n,
            box_dim,
            side,
            strides,
            vertex_count,
            sphere_index,
            inc_tuples: gen_tuples(box_dim),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of lattice axes (d, or d+1 for the sphere's ambient box).
    pub fn box_dim(&self) -> usize {
        self.box_dim
    }

    /// Lattice points per axis (n for the torus, n+1 otherwise).
    pub fn side(&self) -> usize {
        self.side
    }

    /// Row-major index of a lattice point within the full box.
    fn box_index(&self, c: &Coord) -> usize {
        let mut idx = 0usize;
        for a in 0..self.box_dim {
            debug_assert!((c[a] as usize) < self.side);
            idx += c[a] as usize * self.strides[a];
        }
        idx
    }

    /// Vertex index of a lattice point, or None if the point is not a vertex
    /// (interior box points of the sphere family).
    pub fn vertex_index(&self, c: &Coord) -> Option<u32> {
        let idx = self.box_index(c);
        match &self.sphere_index {
            Some(si) => {
                let v = si.to_compact[idx];
                (v != u32::MAX).then_some(v)
            }
            None => Some(idx as u32),
        }
    }

    /// Vertex index of a *lifted* coordinate, reducing mod n on the torus.
    /// Returns None when the point leaves the lattice (ball) or misses the
    /// boundary (sphere).
    pub fn vertex_index_lifted(&self, c: &Coord) -> Option<u32> {
        let mut r = *c;
        match self.family {
            Family::Torus => {
                for a in 0..self.box_dim {
                    r[a] %= self.n as u16;
                }
            }
            _ => {
                for a in 0..self.box_dim {
                    if r[a] as usize > self.n {
                        return None;
                    }
                }
            }
        }
        self.vertex_index(&r)
    }

    pub fn vertex_coord(&self, v: u32) -> Coord {
        match &self.sphere_index {
            Some(si) => si.to_coord[v as usize],
            None => {
                let mut idx = v as usize;
                let mut c: Coord = [0; MAX_AXES];
                for a in 0..self.box_dim {
                    c[a] = (idx / self.strides[a]) as u16;
                    idx %= self.strides[a];
                }
                c
            }
        }
    }

    /// Whether a vertex lies on the topological boundary (ball family only;
    /// torus and sphere are closed).
    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        if self.family != Family::Ball {
            return false;
        }
        let c = self.vertex_coord(v);
        (0..self.box_dim).any(|a| c[a] == 0 || c[a] as usize == self.n)
    }

    /// Whether a face lies in the topological boundary of the manifold:
    /// for the ball, contained in a box facet; always false for torus/sphere.
    pub fn face_in_boundary(&self, s: &LatticeSimplex) -> bool {
        if self.family != Family::Ball {
            return false;
        }
        self.face_in_box_facet(s)
    }

    /// Whether a face of the *box* lies in some box facet {x_a = 0 or n}.
    fn face_in_box_facet(&self, s: &LatticeSimplex) -> bool {
        let used = s.axes_used();
        (0..self.box_dim).any(|a| {
            used >> a & 1 == 0 && (s.base[a] == 0 || s.base[a] as usize == self.n)
        })
    }

    /// Reduces a lifted simplex to its canonical encoding (torus: base mod n).
    pub fn canonicalize(&self, s: &LatticeSimplex) -> LatticeSimplex {
        let mut out = *s;
        if self.family == Family::Torus {
            for a in 0..self.box_dim {
                out.base[a] %= self.n as u16;
            }
        }
        out
    }

    /// Is this (base, increments) pair a simplex of the complex?
    pub fn contains_simplex(&self, s: &LatticeSimplex) -> bool {
        let used = s.axes_used();
        let distinct = {
            // increments pairwise disjoint and nonempty
            let mut seen = 0u8;
            let mut ok = true;
            for &m in s.increments() {
                if m == 0 || seen & m != 0 || m >> self.box_dim != 0 {
                    ok = false;
                    break;
                }
                seen |= m;
            }
            ok
        };
        if !distinct {
            return false;
        }
        match self.family {
            Family::Torus => (0..self.box_dim).all(|a| (s.base[a] as usize) < self.n),
            Family::Ball => (0..self.box_dim).all(|a| {
                let hi = s.base[a] as usize + (used >> a & 1) as usize;
                hi <= self.n
            }),
            Family::Sphere => {
                let in_box = (0..self.box_dim).all(|a| {
                    let hi = s.base[a] as usize + (used >> a & 1) as usize;
                    hi <= self.n
                });
                in_box && self.face_in_box_facet(s)
            }
        }
    }

    /// Calls `f` for every simplex with `r` vertices, each exactly once.
    pub fn for_each_simplex<F: FnMut(&LatticeSimplex)>(&self, r: usize, mut f: F) {
        assert!(r >= 1 && r <= self.d + 1, "r out of range");
        let tuples = &self.inc_tuples[r];
        let base_side = match self.family {
            Family::Torus => self.n,
            _ => self.n + 1,
        };
        let mut c: Coord = [0; MAX_AXES];
        loop {
            for t in tuples {
                if self.tuple_valid_at(&c, t) {
                    let s = LatticeSimplex { base: c, incs: t.masks, nverts: r as u8 };
                    f(&s);
                }
            }
            // odometer
            let mut a = self.box_dim;
            loop {
                if a == 0 {
                    return;
                }
                a -= 1;
                if (c[a] as usize) < base_side - 1 {
                    c[a] += 1;
                    break;
                }
                c[a] = 0;
            }
        }
    }

    #[inline]
    fn tuple_valid_at(&self, base: &Coord, t: &IncTuple) -> bool {
        match self.family {
            Family::Torus => true,
            Family::Ball => (0..self.box_dim)
                .all(|a| t.union >> a & 1 == 0 || (base[a] as usize) < self.n),
            Family::Sphere => {
                let in_box = (0..self.box_dim)
                    .all(|a| t.union >> a & 1 == 0 || (base[a] as usize) < self.n);
                in_box
                    && (0..self.box_dim).any(|a| {
                        t.union >> a & 1 == 0 && (base[a] == 0 || base[a] as usize == self.n)
                    })
            }
        }
    }

    /// Number of simplices with r vertices. Exact closed form for the torus;
    /// tuple-wise closed form for the ball; streamed count for the sphere.
    pub fn face_count(&self, r: usize) -> u64 {
        assert!(r >= 1 && r <= self.d + 1, "r out of range");
        match self.family {
            Family::Torus => {
                let s = crate::ec::stirling2((self.d + 1) as u32, r as u32);
                let fact: u64 = (1..r as u64).product();
                (self.n as u64).pow(self.d as u32) * s * fact
            }
            Family::Ball => {
                let mut total = 0u64;
                for t in &self.inc_tuples[r] {
                    let used = t.union.count_ones() as u32;
                    total += (self.n as u64).pow(used)
                        * (self.n as u64 + 1).pow(self.d as u32 - used);
                }
                total
            }
            Family::Sphere => {
                let mut c = 0u64;
                self.for_each_simplex(r, |_| c += 1);
                c
            }
        }
    }

    /// Calls `f` for every simplex with r vertices containing vertex v.
    pub fn for_each_simplex_containing<F: FnMut(&LatticeSimplex)>(
        &self,
        v: u32,
        r: usize,
        mut f: F,
    ) {
        assert!(r >= 1 && r <= self.d + 1);
        let vc = self.vertex_coord(v);
        let n = self.n as i32;
        for t in &self.inc_tuples[r] {
            // v may sit at any position 0..r along the tuple's vertex chain.
            let mut partial = [0i32; MAX_AXES];
            for pos in 0..r {
                if pos > 0 {
                    let m = t.masks[pos - 1];
                    for a in 0..self.box_dim {
                        partial[a] += (m >> a & 1) as i32;
                    }
                }
                let mut base: Coord = [0; MAX_AXES];
                let mut ok = true;
                for a in 0..self.box_dim {
                    let mut b = vc[a] as i32 - partial[a];
                    match self.family {
                        Family::Torus => b = b.rem_euclid(n),
                        _ => {
                            if b < 0 {
                                ok = false;
                                break;
                            }
                        }
                    }
                    base[a] = b as u16;
                }
                if !ok {
                    continue;
                }
                if self.tuple_valid_at(&base, t) {
                    let s = LatticeSimplex { base, incs: t.masks, nverts: r as u8 };
                    f(&s);
                }
            }
        }
    }

    /// Reconstructs the canonical (base, increments) encoding from a set of
    /// vertex indices. Unique for ball/sphere and for torus with n ≥ 3.
    pub fn simplex_from_vertex_set(&self, verts: &[u32]) -> Option<LatticeSimplex> {
        let r = verts.len();
        if r == 0 || r > self.box_dim + 1 {
            return None;
        }
        let coords: Vec<Coord> = verts.iter().map(|&v| self.vertex_coord(v)).collect();
        let n = self.n as i32;
        // Try each vertex as the base; order the rest by lifted L1 distance.
        'cand: for (bi, b) in coords.iter().enumerate() {
            let mut deltas: Vec<(i32, usize)> = Vec::with_capacity(r - 1);
            for (j, c) in coords.iter().enumerate() {
                if j == bi {
                    continue;
                }
                let mut total = 0i32;
                for a in 0..self.box_dim {
                    let mut d = c[a] as i32 - b[a] as i32;
                    if self.family == Family::Torus {
                        d = d.rem_euclid(n);
                    }
                    if !(0..=1).contains(&d) {
                        continue 'cand;
                    }
                    total += d;
                }
                deltas.push((total, j));
            }
            deltas.sort();
            // Successive differences must be indicator vectors of disjoint sets.
            let mut incs: Vec<u8> = Vec::with_capacity(r - 1);
            let mut prev_lift = [0i32; MAX_AXES];
            for a in 0..self.box_dim {
                prev_lift[a] = b[a] as i32;
            }
            let mut good = true;
            let mut seen = 0u8;
            for &(_, j) in &deltas {
                let c = coords[j];
                let mut m = 0u8;
                for a in 0..self.box_dim {
                    let mut d = c[a] as i32 - b[a] as i32;
                    if self.family == Family::Torus {
                        d = d.rem_euclid(n);
                    }
                    let step = d - (prev_lift[a] - b[a] as i32);
                    match step {
                        0 => {}
                        1 => m |= 1 << a,
                        _ => {
                            good = false;
                            break;
                        }
                    }
                }
                if !good || m == 0 || seen & m != 0 {
                    good = false;
                    break;
                }
                for a in 0..self.box_dim {
                    if m >> a & 1 == 1 {
                        prev_lift[a] += 1;
                    }
                }
                seen |= m;
                incs.push(m);
            }
            if good {
                let s = LatticeSimplex::new(*b, &incs);
                if self.contains_simplex(&s) {
                    // Confirm the vertex set matches.
                    let mut buf = [[0u16; MAX_AXES]; MAX_AXES + 1];
                    let cnt = s.lifted_vertices(&mut buf);
                    let mut set: BTreeSet<u32> = BTreeSet::new();
                    for c in buf.iter().take(cnt) {
                        match self.vertex_index_lifted(c) {
                            Some(v) => {
                                set.insert(v);
                            }
                            None => continue 'cand,
                        }
                    }
                    let input: BTreeSet<u32> = verts.iter().copied().collect();
                    if set == input {
                        return Some(s);
                    }
                }
            }
        }
        None
    }

    /// Writes the simplex's vertex indices into `out`; returns the count.
    #[inline]
    pub fn simplex_vertices(&self, s: &LatticeSimplex, out: &mut [u32; MAX_AXES + 1]) -> usize {
        let mut buf = [[0u16; MAX_AXES]; MAX_AXES + 1];
        let cnt = s.lifted_vertices(&mut buf);
        for (o, c) in out.iter_mut().zip(buf.iter().take(cnt)) {
            *o = self
                .vertex_index_lifted(c)
                .expect("simplex vertex outside complex");
        }
        cnt
    }

    /// Packs a canonical simplex into a stable 64-bit key.
    /// Layout: [base box index: 32][nverts: 4][increment masks: 5 x 5].
    pub fn face_key(&self, s: &LatticeSimplex) -> u64 {
        let s = self.canonicalize(s);
        let mut key = self.box_index(&s.base) as u64;
        key |= (s.nverts as u64) << 32;
        for (j, &m) in s.incs.iter().enumerate() {
            key |= (m as u64) << (36 + 5 * j);
        }
        key
    }

    /// Inverse of `face_key`.
    pub fn face_from_key(&self, key: u64) -> LatticeSimplex {
        let mut idx = (key & 0xFFFF_FFFF) as usize;
        let mut base: Coord = [0; MAX_AXES];
        for a in 0..self.box_dim {
            base[a] = (idx / self.strides[a]) as u16;
            idx %= self.strides[a];
        }
        let nverts = (key >> 32 & 0xF) as u8;
        let mut incs = [0u8; MAX_AXES];
        for (j, m) in incs.iter_mut().enumerate() {
            *m = (key >> (36 + 5 * j) & 0x1F) as u8;
        }
        LatticeSimplex { base, incs, nverts }
    }

    /// The link of a vertex, returned as an explicit small complex over the
    /// ambient vertex indices.
    pub fn vertex_link(&self, v: u32) -> Result<crate::complex::SimplicialComplex> {
        if (v as usize) >= self.vertex_count {
            return Err(Error::VertexNotFound(v));
        }
        let mut facets: Vec<Vec<u32>> = Vec::new();
        for r in 2..=self.d + 1 {
            self.for_each_simplex_containing(v, r, |s| {
                let mut out = [0u32; MAX_AXES + 1];
                let cnt = self.simplex_vertices(s, &mut out);
                let mut face: Vec<u32> = out[..cnt].iter().copied().filter(|&u| u != v).collect();
                debug_assert_eq!(face.len(), cnt - 1);
                face.sort_unstable();
                facets.push(face);
            });
        }
        Ok(crate::complex::SimplicialComplex::from_faces(facets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute-force simplex enumeration by flood over all (base, tuple) pairs,
    /// verifying uniqueness of encodings.
    fn enumerate_all(g: &GridComplex, r: usize) -> Vec<LatticeSimplex> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        g.for_each_simplex(r, |s| {
            assert!(seen.insert(g.face_key(s)), "duplicate simplex {s:?}");
            out.push(*s);
        });
        out
    }

    #[test]
    fn torus_1d_is_a_cycle() {
        let g = GridComplex::build(Family::Torus, 1, 3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(enumerate_all(&g, 1).len(), 3);
        assert_eq!(enumerate_all(&g, 2).len(), 3);
    }

    #[test]
    fn torus_2d_f_vector() {
        for n in 2..=4usize {
            let g = GridComplex::build(Family::Torus, 2, n).unwrap();
            let f: Vec<usize> = (1..=3).map(|r| enumerate_all(&g, r).len()).collect();
            assert_eq!(f, vec![n * n, 3 * n * n, 2 * n * n]);
            for r in 1..=3 {
                assert_eq!(g.face_count(r) as usize, f[r - 1]);
            }
        }
    }

    #[test]
    fn unit_cube_has_six_tetrahedra() {
        let g = GridComplex::build(Family::Ball, 3, 1).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(enumerate_all(&g, 4).len(), 6);
    }

    #[test]
    fn torus_counts_match_stirling_formula() {
        for d in 1..=4usize {
            for n in 2..=3usize {
                let g = GridComplex::build(Family::Torus, d, n).unwrap();
                for r in 1..=d + 1 {
                    let expected = (n as u64).pow(d as u32)
                        * crate::ec::stirling2((d + 1) as u32, r as u32)
                        * (1..r as u64).product::<u64>();
                    assert_eq!(enumerate_all(&g, r).len() as u64, expected, "d={d} n={n} r={r}");
                    assert_eq!(g.face_count(r), expected);
                }
            }
        }
    }

    #[test]
    fn alternating_sums_give_euler_characteristic() {
        for d in 1..=4usize {
            let g = GridComplex::build(Family::Torus, d, 3).unwrap();
            let chi: i64 = (1..=d + 1)
                .map(|r| if r % 2 == 1 { g.face_count(r) as i64 } else { -(g.face_count(r) as i64) })
                .sum();
            assert_eq!(chi, 0, "torus d={d}");
        }
        for d in 1..=4usize {
            let g = GridComplex::build(Family::Ball, d, 2).unwrap();
            let chi: i64 = (1..=d + 1)
                .map(|r| if r % 2 == 1 { g.face_count(r) as i64 } else { -(g.face_count(r) as i64) })
                .sum();
            assert_eq!(chi, 1, "ball d={d}");
        }
        for d in 1..=3usize {
            let g = GridComplex::build(Family::Sphere, d, 2).unwrap();
            let chi: i64 = (1..=d + 1)
                .map(|r| if r % 2 == 1 { g.face_count(r) as i64 } else { -(g.face_count(r) as i64) })
                .sum();
            let expected = 1 + if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(chi, expected, "sphere d={d}");
        }
    }

    #[test]
    fn sphere_vertex_count_formula() {
        for d in 1..=3usize {
            for n in 1..=3usize {
                let g = GridComplex::build(Family::Sphere, d, n).unwrap();
                let expected = ((n + 1) as u64).pow((d + 1) as u32)
                    - (n.saturating_sub(1) as u64).pow((d + 1) as u32);
                assert_eq!(g.vertex_count() as u64, expected);
            }
        }
    }

    #[test]
    fn ball_2d_counts_by_hand() {
        // [0,2]^2: 9 vertices, 4 squares each cut into 2 triangles.
        let g = GridComplex::build(Family::Ball, 2, 2).unwrap();
        assert_eq!(g.face_count(1), 9);
        // edges: 12 axis-parallel + 4 diagonals = 16
        assert_eq!(g.face_count(2), 16);
        assert_eq!(g.face_count(3), 8);
    }

    #[test]
    fn containment_enumeration_agrees_with_filter() {
        for (family, d, n) in [
            (Family::Torus, 2, 3),
            (Family::Torus, 3, 2),
            (Family::Ball, 3, 2),
            (Family::Sphere, 2, 2),
        ] {
            let g = GridComplex::build(family, d, n).unwrap();
            for r in 1..=d + 1 {
                let all = enumerate_all(&g, r);
                for v in 0..g.vertex_count() as u32 {
                    let expected: HashSet<u64> = all
                        .iter()
                        .filter(|s| {
                            let mut out = [0u32; MAX_AXES + 1];
                            let cnt = g.simplex_vertices(s, &mut out);
                            out[..cnt].contains(&v)
                        })
                        .map(|s| g.face_key(s))
                        .collect();
                    let mut got = HashSet::new();
                    g.for_each_simplex_containing(v, r, |s| {
                        assert!(got.insert(g.face_key(s)), "dup in containment enum");
                    });
                    assert_eq!(got, expected, "family={family:?} r={r} v={v}");
                }
            }
        }
    }

    #[test]
    fn canonical_encoding_round_trips() {
        for (family, d, n) in [
            (Family::Torus, 2, 3),
            (Family::Torus, 3, 3),
            (Family::Ball, 3, 2),
            (Family::Sphere, 2, 2),
        ] {
            let g = GridComplex::build(family, d, n).unwrap();
            for r in 1..=d + 1 {
                g.for_each_simplex(r, |s| {
                    // face_key round-trip
                    let back = g.face_from_key(g.face_key(s));
                    assert_eq!(&back, s);
                    // vertex-set round-trip (unique for n >= 3 or non-torus)
                    let mut out = [0u32; MAX_AXES + 1];
                    let cnt = g.simplex_vertices(s, &mut out);
                    if g.family != Family::Torus || g.n >= 3 {
                        let rec = g.simplex_from_vertex_set(&out[..cnt]).expect("round trip");
                        assert_eq!(&rec, s);
                    }
                });
            }
        }
    }

    #[test]
    fn vertex_sets_strictly_increase() {
        let g = GridComplex::build(Family::Ball, 3, 2).unwrap();
        g.for_each_simplex(4, |s| {
            let mut buf = [[0u16; MAX_AXES]; MAX_AXES + 1];
            let cnt = s.lifted_vertices(&mut buf);
            for w in buf[..cnt].windows(2) {
                let dominates = (0..g.box_dim()).all(|a| w[1][a] >= w[0][a]);
                let strict = (0..g.box_dim()).any(|a| w[1][a] > w[0][a]);
                assert!(dominates && strict);
            }
        });
    }

    #[test]
    fn subface_matches_vertex_subsets() {
        let g = GridComplex::build(Family::Torus, 3, 3).unwrap();
        g.for_each_simplex(4, |s| {
            let mut out = [0u32; MAX_AXES + 1];
            let cnt = g.simplex_vertices(s, &mut out);
            for keep in 1u8..(1 << cnt) {
                let sub = g.canonicalize(&s.subface(keep));
                assert!(g.contains_simplex(&sub), "subface not in complex");
                let mut sub_out = [0u32; MAX_AXES + 1];
                let sub_cnt = g.simplex_vertices(&sub, &mut sub_out);
                let expected: HashSet<u32> = (0..cnt)
                    .filter(|&p| keep >> p & 1 == 1)
                    .map(|p| out[p])
                    .collect();
                let got: HashSet<u32> = sub_out[..sub_cnt].iter().copied().collect();
                assert_eq!(got, expected);
            }
        });
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GridComplex::build(Family::Torus, 1, 1).is_err());
        assert!(GridComplex::build(Family::Torus, 5, 3).is_err());
        assert!(GridComplex::build(Family::Ball, 0, 3).is_err());
        assert!(GridComplex::build(Family::Sphere, 5, 2).is_err());
    }
}
