//! Small explicit simplicial complexes, used for vertex links and for
//! combinatorial sphere/disk validation of those links.

use std::collections::{HashMap, HashSet};

/// An explicit simplicial complex over arbitrary `u32` vertex labels.
/// Stores every face (closed downward), each as a sorted vertex list.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    faces: HashSet<Vec<u32>>,
    dim: Option<usize>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given faces.
    pub fn from_faces<I: IntoIterator<Item = Vec<u32>>>(faces: I) -> SimplicialComplex {
        let mut out = SimplicialComplex::default();
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            out.insert_with_closure(f);
        }
        out
    }

    fn insert_with_closure(&mut self, face: Vec<u32>) {
        if face.is_empty() || self.faces.contains(&face) {
            return;
        }
        self.dim = Some(self.dim.unwrap_or(0).max(face.len() - 1));
        for i in 0..face.len() {
            if face.len() > 1 {
                let mut sub = face.clone();
                sub.remove(i);
                self.insert_with_closure(sub);
            }
        }
        self.faces.insert(face);
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Highest face dimension, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn faces_of_dim(&self, q: usize) -> impl Iterator<Item = &Vec<u32>> {
        self.faces.iter().filter(move |f| f.len() == q + 1)
    }

    pub fn face_count(&self, q: usize) -> usize {
        self.faces_of_dim(q).count()
    }

    pub fn vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.faces_of_dim(0).map(|f| f[0]).collect();
        vs.sort_unstable();
        vs
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for f in &self.faces {
            chi += if f.len() % 2 == 1 { 1 } else { -1 };
        }
        chi
    }

    /// Connectivity of the 1-skeleton (and isolated vertices).
    pub fn is_connected(&self) -> bool {
        let verts = self.vertices();
        if verts.is_empty() {
            return false;
        }
        let index: HashMap<u32, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for e in self.faces_of_dim(1) {
            let (a, b) = (index[&e[0]], index[&e[1]]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; verts.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The link of a vertex within this complex.
    pub fn vertex_link(&self, v: u32) -> SimplicialComplex {
        let mut faces = Vec::new();
        for f in &self.faces {
            if let Ok(pos) = f.binary_search(&v) {
                if f.len() > 1 {
                    let mut g = f.clone();
                    g.remove(pos);
                    faces.push(g);
                }
            }
        }
        SimplicialComplex::from_faces(faces)
    }

    fn vertex_degree(&self, v: u32) -> usize {
        self.faces_of_dim(1).filter(|e| e.contains(&v)).count()
    }

    /// Combinatorial sphere test for dimensions 0..2:
    /// S⁰ = two points; S¹ = a single cycle; S² = closed connected surface
    /// with χ = 2 and all vertex links S¹.
    pub fn is_combinatorial_sphere(&self, dim: usize) -> bool {
        if self.is_empty() || self.dim() != Some(dim) {
            return false;
        }
        match dim {
            0 => self.face_count(0) == 2,
            1 => {
                self.is_connected()
                    && self.euler_characteristic() == 0
                    && self.vertices().iter().all(|&v| self.vertex_degree(v) == 2)
            }
            2 => {
                self.is_connected()
                    && self.euler_characteristic() == 2
                    && self
                        .faces_of_dim(1)
                        .all(|e| self.triangles_on_edge(e) == 2)
                    && self
                        .vertices()
                        .iter()
                        .all(|&v| self.vertex_link(v).is_combinatorial_sphere(1))
            }
            3 => {
                // Pseudo-check adequate for our grid links: χ(S³) = 0, all
                // vertex links combinatorial 2-spheres, connected.
                self.is_connected()
                    && self.euler_characteristic() == 0
                    && self
                        .vertices()
                        .iter()
                        .all(|&v| self.vertex_link(v).is_combinatorial_sphere(2))
            }
            _ => false,
        }
    }

    /// Combinatorial disk test for dimensions 0..2:
    /// D⁰ = one point; D¹ = a single path; D² = connected surface with χ = 1,
    /// every edge in ≤ 2 triangles, and every vertex link a path or cycle.
    pub fn is_combinatorial_disk(&self, dim: usize) -> bool {
        if self.is_empty() || self.dim() != Some(dim) {
            return false;
        }
        match dim {
            0 => self.face_count(0) == 1,
            1 => {
                let degs: Vec<usize> =
                    self.vertices().iter().map(|&v| self.vertex_degree(v)).collect();
                self.is_connected()
                    && self.euler_characteristic() == 1
                    && degs.iter().all(|&d| d == 1 || d == 2)
                    && degs.iter().filter(|&&d| d == 1).count() == 2
            }
            2 => {
                self.is_connected()
                    && self.euler_characteristic() == 1
                    && self
                        .faces_of_dim(1)
                        .all(|e| (1..=2).contains(&self.triangles_on_edge(e)))
                    && self.vertices().iter().all(|&v| {
                        let link = self.vertex_link(v);
                        link.is_combinatorial_sphere(1) || link.is_combinatorial_disk(1)
                    })
            }
            _ => false,
        }
    }

    fn triangles_on_edge(&self, e: &[u32]) -> usize {
        self.faces_of_dim(2)
            .filter(|t| e.iter().all(|v| t.contains(v)))
            .count()
    }
}
