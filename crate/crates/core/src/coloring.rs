//! Vertex colorings of grid complexes, color sets, the Voronoi color rule
//! at a point, and the text file format.

use crate::error::{Error, Result};
use crate::lattice::{Family, GridComplex, LatticeSimplex, MAX_AXES};
use crate::rng;
use std::io::{BufRead, Write};

/// A set of colors as a bitmask over {0..k-1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(pub u32);

impl ColorSet {
    pub fn from_colors(colors: &[u8]) -> ColorSet {
        ColorSet(colors.iter().fold(0u32, |m, &c| m | 1 << c))
    }

    pub fn singleton(c: u8) -> ColorSet {
        ColorSet(1 << c)
    }

    /// All colors 0..k.
    pub fn full(k: usize) -> ColorSet {
        ColorSet((1u32 << k) - 1)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, c: u8) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn is_subset_of(&self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..32u8).filter(|&c| self.contains(c))
    }
}

impl std::fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A k-coloring of the vertices of a grid complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    /// One color per vertex, indexed by the complex's vertex indexing.
    pub colors: Vec<u8>,
}

impl Coloring {
    pub fn new(g: &GridComplex, k: usize, colors: Vec<u8>) -> Result<Coloring> {
        if colors.len() != g.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "coloring has {} entries, complex has {} vertices",
                colors.len(),
                g.vertex_count()
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c as usize >= k) {
            return Err(Error::InvalidInput(format!("color {c} out of range 0..{k}")));
        }
        Ok(Coloring { family: g.family, d: g.d, n: g.n, k, colors })
    }

    #[inline]
    pub fn color(&self, v: u32) -> u8 {
        self.colors[v as usize]
    }

    /// Color set carried by a simplex's vertices.
    #[inline]
    pub fn simplex_colors(&self, g: &GridComplex, s: &LatticeSimplex) -> ColorSet {
        let mut out = [0u32; MAX_AXES + 1];
        let cnt = g.simplex_vertices(s, &mut out);
        let mut m = 0u32;
        for &v in &out[..cnt] {
            m |= 1 << self.colors[v as usize];
        }
        ColorSet(m)
    }

    pub fn matches(&self, g: &GridComplex) -> bool {
        self.family == g.family && self.d == g.d && self.n == g.n
    }
}

/// Validates a probability vector: nonnegative, sums to 1 within 1e-12.
pub fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidProbabilities("empty vector".into()));
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidProbabilities("entries must lie in [0,1]".into()));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilities(format!("sum {sum} is not 1")));
    }
    Ok(())
}

/// Converts probabilities into cumulative 64-bit thresholds, so a color draw
/// is a single word comparison per color.
pub fn prob_thresholds(probs: &[f64]) -> Vec<u64> {
    let mut acc = 0.0f64;
    let mut out = Vec::with_capacity(probs.len());
    for &p in probs {
        acc += p;
        let t = if acc >= 1.0 { u64::MAX } else { (acc * 2f64.powi(64)) as u64 };
        out.push(t);
    }
    *out.last_mut().unwrap() = u64::MAX;
    out
}

#[inline]
pub fn draw_color(thresholds: &[u64], word: u64) -> u8 {
    for (c, &t) in thresholds.iter().enumerate() {
        if word <= t {
            return c as u8;
        }
    }
    (thresholds.len() - 1) as u8
}

/// An i.i.d. random coloring. The color of vertex v is a pure function of
/// (seed, v), so the result is independent of fill order.
pub fn random_coloring(g: &GridComplex, probs: &[f64], seed: u64) -> Result<Coloring> {
    validate_probs(probs)?;
    let thresholds = prob_thresholds(probs);
    let colors: Vec<u8> = (0..g.vertex_count() as u64)
        .map(|v| draw_color(&thresholds, rng::hash2(seed, v)))
        .collect();
    Coloring::new(g, probs.len(), colors)
}

/// Colors of the vertices achieving the maximal barycentric coordinate of a
/// point in the closed simplex — the point's Voronoi color set.
pub fn point_colors(
    g: &GridComplex,
    coloring: &Coloring,
    simplex: &LatticeSimplex,
    barycentric: &[f64],
) -> Result<ColorSet> {
    let cnt = simplex.vertex_count();
    if barycentric.len() != cnt {
        return Err(Error::PointOutsideSimplex);
    }
    let sum: f64 = barycentric.iter().sum();
    if barycentric.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::PointOutsideSimplex);
    }
    let max = barycentric.iter().cloned().fold(f64::MIN, f64::max);
    let mut out = [0u32; MAX_AXES + 1];
    let got = g.simplex_vertices(simplex, &mut out);
    debug_assert_eq!(got, cnt);
    let mut mask = 0u32;
    for (i, &x) in barycentric.iter().enumerate() {
        if (max - x).abs() <= 1e-12 {
            mask |= 1 << coloring.color(out[i]);
        }
    }
    Ok(ColorSet(mask))
}

/// Writes the text format: header `family d n k`, then one color per vertex
/// line in row-major vertex order.
pub fn write_coloring<W: Write>(w: &mut W, coloring: &Coloring) -> Result<()> {
    writeln!(
        w,
        "{} {} {} {}",
        coloring.family.as_str(),
        coloring.d,
        coloring.n,
        coloring.k
    )?;
    for &c in &coloring.colors {
        writeln!(w, "{c}")?;
    }
    Ok(())
}

/// Reads the text format and checks it against a freshly built complex.
pub fn read_coloring<R: BufRead>(r: &mut R) -> Result<(GridComplex, Coloring)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("bad header {header:?}")));
    }
    let family = Family::parse(parts[0])?;
    let d: usize = parts[1].parse().map_err(|_| Error::Parse("bad d".into()))?;
    let n: usize = parts[2].parse().map_err(|_| Error::Parse("bad n".into()))?;
    let k: usize = parts[3].parse().map_err(|_| Error::Parse("bad k".into()))?;
    let g = GridComplex::build(family, d, n)?;
    let mut colors = Vec::with_capacity(g.vertex_count());
    for line in r.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let c: u8 = t.parse().map_err(|_| Error::Parse(format!("bad color {t:?}")))?;
        colors.push(c);
    }
    let coloring = Coloring::new(&g, k, colors)?;
    Ok((g, coloring))
}

pub fn save_coloring(path: &std::path::Path, coloring: &Coloring) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_coloring(&mut f, coloring)
}

pub fn load_coloring(path: &std::path::Path) -> Result<(GridComplex, Coloring)> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_coloring(&mut f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities_give_constant_coloring() {
        let g = GridComplex::build(Family::Torus, 2, 4).unwrap();
        let c = random_coloring(&g, &[1.0, 0.0, 0.0], 7).unwrap();
        assert!(c.colors.iter().all(|&x| x == 0));
    }

    #[test]
    fn fair_coin_fraction_is_sane() {
        // 10^4 trials of torus(3,8): empirical color-0 fraction within 3σ of ½.
        let g = GridComplex::build(Family::Torus, 3, 8).unwrap();
        let trials = 10_000usize;
        let mut zeros = 0u64;
        for t in 0..trials {
            let c = random_coloring(&g, &[0.5, 0.5], rng::derive_seed(11, t as u64)).unwrap();
            zeros += c.colors.iter().filter(|&&x| x == 0).count() as u64;
        }
        let total = (trials * g.vertex_count()) as f64;
        let frac = zeros as f64 / total;
        let sigma = 0.5 / total.sqrt();
        assert!((frac - 0.5).abs() < 3.0 * sigma, "frac={frac}");
    }

    #[test]
    fn identical_seed_is_byte_identical() {
        let g = GridComplex::build(Family::Torus, 3, 4).unwrap();
        let a = random_coloring(&g, &[0.3, 0.3, 0.4], 42).unwrap();
        let b = random_coloring(&g, &[0.3, 0.3, 0.4], 42).unwrap();
        assert_eq!(a, b);
        let c = random_coloring(&g, &[0.3, 0.3, 0.4], 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_probabilities_rejected() {
        let g = GridComplex::build(Family::Torus, 2, 3).unwrap();
        assert!(random_coloring(&g, &[0.5, 0.6], 1).is_err());
        assert!(random_coloring(&g, &[-0.1, 1.1], 1).is_err());
        assert!(random_coloring(&g, &[], 1).is_err());
    }

    #[test]
    fn point_color_rules() {
        let g = GridComplex::build(Family::Ball, 2, 1).unwrap();
        // Vertices of [0,1]^2: (0,0)=0, (0,1)=1, (1,0)=2, (1,1)=3 (row-major).
        let coloring = Coloring::new(&g, 3, vec![0, 1, 2, 1]).unwrap();
        let mut tri = None;
        g.for_each_simplex(3, |s| {
            if tri.is_none() {
                tri = Some(*s);
            }
        });
        let tri = tri.unwrap();
        // Barycenter carries all vertex colors.
        let bc = point_colors(&g, &coloring, &tri, &[1. / 3., 1. / 3., 1. / 3.]).unwrap();
        assert_eq!(bc, coloring.simplex_colors(&g, &tri));
        // A vertex carries its own color only.
        let vc = point_colors(&g, &coloring, &tri, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(vc.len(), 1);
        // Midpoint of an edge carries both endpoint colors.
        let mid = point_colors(&g, &coloring, &tri, &[0.5, 0.5, 0.0]).unwrap();
        assert_eq!(mid.len(), 2);
        // Outside the simplex: rejected.
        assert!(point_colors(&g, &coloring, &tri, &[0.9, 0.2, -0.1]).is_err());
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let g = GridComplex::build(Family::Sphere, 2, 2).unwrap();
        let c = random_coloring(&g, &[0.2, 0.5, 0.3], 99).unwrap();
        let mut buf = Vec::new();
        write_coloring(&mut buf, &c).unwrap();
        let (g2, c2) = read_coloring(&mut std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(g2.vertex_count(), g.vertex_count());
        assert_eq!(c, c2);
        let mut buf2 = Vec::new();
        write_coloring(&mut buf2, &c2).unwrap();
        assert_eq!(buf, buf2);
    }
}
