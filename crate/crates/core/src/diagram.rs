//! Knot diagrams from closed polygonal curves: exact integer projection,
//! Reidemeister I/II reduction, the Alexander polynomial via the Wirtinger
//! presentation, the knot determinant |Δ(−1)|, and a lookup table of prime
//! knots with up to 7 crossings.
//!
//! All geometry is exact: input polylines have integer coordinates, the
//! projection direction is an integer vector, and crossings are detected and
//! ordered with i128 orientation predicates and rational comparisons, so a
//! diagram is either produced exactly or the direction is rejected as
//! degenerate and retried.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A knot diagram recorded combinatorially: the cyclic sequence of crossing
/// passages along the curve (crossing id, passes over?) plus a sign per
/// crossing (+1 right-handed, −1 left-handed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotDiagram {
    /// Passages in curve order; each crossing id appears exactly twice,
    /// once over and once under.
    pub passages: Vec<(u32, bool)>,
    /// Crossing signs, indexed by crossing id.
    pub signs: Vec<i8>,
}

impl KnotDiagram {
    pub fn crossings(&self) -> usize {
        self.signs.len()
    }

    /// Structural sanity: every crossing appears exactly once over and once
    /// under.
    pub fn check(&self) -> Result<()> {
        let c = self.signs.len();
        if self.passages.len() != 2 * c {
            return Err(Error::InvalidInput("passage count must be twice the crossing count".into()));
        }
        let mut seen = vec![(false, false); c];
        for &(x, over) in &self.passages {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::InvalidInput("crossing id out of range".into()))?;
            let flag = if over { &mut slot.0 } else { &mut slot.1 };
            if *flag {
                return Err(Error::InvalidInput("crossing passage repeated".into()));
            }
            *flag = true;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Exact projection
// ---------------------------------------------------------------------------

/// How many perturbed directions to try before giving up.
const MAX_DIRECTIONS: usize = 64;

#[derive(Clone, Copy)]
struct Frame {
    /// Projection direction (kernel of the two plane forms).
    dir: [i64; 3],
    /// Plane coordinate forms; both vanish on `dir`.
    u: [i64; 3],
    v: [i64; 3],
}

fn dot(a: [i64; 3], p: [i32; 3]) -> i64 {
    a[0] * p[0] as i64 + a[1] * p[1] as i64 + a[2] * p[2] as i64
}

fn frame_for(dir: [i64; 3]) -> Option<Frame> {
    let [a, b, c] = dir;
    if a == 0 {
        return None;
    }
    // u = (b, −a, 0), v = (c, 0, −a): independent forms vanishing on dir.
    Some(Frame { dir, u: [b, -a, 0], v: [c, 0, -a] })
}

/// Deterministic direction sequence: small odd components from a fixed hash
/// stream, perturbed per retry index. Components stay below 128 so that the
/// nested i128 crossing predicates cannot overflow for input coordinates up
/// to ~10⁴ in magnitude.
fn direction(try_idx: usize) -> [i64; 3] {
    let h = |j: u64| (crate::rng::hash2(0x9e3d_1a2b, try_idx as u64 * 3 + j) % 64) as i64;
    [2 * h(0) + 1, 2 * h(1) + 1, 2 * h(2) + 1]
}

#[derive(Clone, Copy)]
struct Seg {
    p: [i64; 2],
    q: [i64; 2],
    /// Heights along the projection direction at both ends.
    hp: i64,
    hq: i64,
}

/// Orientation of the triangle (a, b, c) in the projection plane.
fn orient(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i128 {
    let abx = (b[0] - a[0]) as i128;
    let aby = (b[1] - a[1]) as i128;
    let acx = (c[0] - a[0]) as i128;
    let acy = (c[1] - a[1]) as i128;
    abx * acy - aby * acx
}

/// Exact rational a/b with b > 0. Representations are not reduced, so
/// equality must cross-multiply rather than compare fields.
#[derive(Clone, Copy)]
struct Frac {
    n: i128,
    d: i128,
}

impl PartialEq for Frac {
    fn eq(&self, other: &Frac) -> bool {
        self.n * other.d == other.n * self.d
    }
}
impl Eq for Frac {}

impl Frac {
    fn new(n: i128, d: i128) -> Frac {
        debug_assert!(d != 0);
        if d < 0 {
            Frac { n: -n, d: -d }
        } else {
            Frac { n, d }
        }
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> std::cmp::Ordering {
        (self.n * other.d).cmp(&(other.n * self.d))
    }
}
impl std::cmp::PartialEq<i128> for Frac {
    fn eq(&self, other: &i128) -> bool {
        self.n == other * self.d
    }
}

struct CrossingHit {
    seg_a: u32,
    seg_b: u32,
    /// Parameters of the intersection along each segment.
    ta: Frac,
    tb: Frac,
    /// True when segment a passes over segment b.
    a_over: bool,
    sign: i8,
}

enum Degenerate {
    Yes,
}

/// All proper crossings of the projected closed polyline, or a degeneracy.
fn find_crossings(points: &[[i32; 3]], fr: &Frame) -> std::result::Result<Vec<CrossingHit>, Degenerate> {
    let n = points.len();
    let segs: Vec<Seg> = (0..n)
        .map(|i| {
            let p3 = points[i];
            let q3 = points[(i + 1) % n];
            Seg {
                p: [dot(fr.u, p3), dot(fr.v, p3)],
                q: [dot(fr.u, q3), dot(fr.v, q3)],
                hp: dot(fr.dir, p3),
                hq: dot(fr.dir, q3),
            }
        })
        .collect();
    // A segment collapsing to a point in projection means it is parallel to
    // the direction: degenerate.
    if segs.iter().any(|s| s.p == s.q) {
        return Err(Degenerate::Yes);
    }
    let mut hits: Vec<CrossingHit> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // Adjacent segments share an endpoint; their crossing there is
            // not a double point. True overlaps are caught by the endpoint
            // orientation tests below.
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = (&segs[i], &segs[j]);
            // Bounding-box reject.
            if a.p[0].max(a.q[0]) < b.p[0].min(b.q[0])
                || b.p[0].max(b.q[0]) < a.p[0].min(a.q[0])
                || a.p[1].max(a.q[1]) < b.p[1].min(b.q[1])
                || b.p[1].max(b.q[1]) < a.p[1].min(a.q[1])
            {
                continue;
            }
            let o1 = orient(a.p, a.q, b.p);
            let o2 = orient(a.p, a.q, b.q);
            let o3 = orient(b.p, b.q, a.p);
            let o4 = orient(b.p, b.q, a.q);
            if adjacent {
                // Shared endpoint: require the other endpoints strictly off
                // the partner's line; otherwise the projection folds back.
                let shared_ok = if j == i + 1 {
                    o2 != 0 && o3 != 0
                } else {
                    o1 != 0 && o4 != 0
                };
                if !shared_ok {
                    return Err(Degenerate::Yes);
                }
                continue;
            }
            // Any endpoint exactly on the other segment's line within range
            // is a degenerate touch.
            let proper = o1 * o2 < 0 && o3 * o4 < 0;
            if !proper {
                let touch = (o1 == 0 && on_segment(a, b.p))
                    || (o2 == 0 && on_segment(a, b.q))
                    || (o3 == 0 && on_segment(b, a.p))
                    || (o4 == 0 && on_segment(b, a.q));
                if touch {
                    return Err(Degenerate::Yes);
                }
                continue;
            }
            // Proper crossing. Parameters: ta = o3 / (o3 − o4), tb = o1 / (o1 − o2).
            let ta = Frac::new(o3, o3 - o4);
            let tb = Frac::new(o1, o1 - o2);
            // Heights at the intersection, over the common denominator
            // ta.d * tb.d (both positive).
            let ha = (a.hp as i128) * (ta.d - ta.n) + (a.hq as i128) * ta.n; // × ta.d
            let hb = (b.hp as i128) * (tb.d - tb.n) + (b.hq as i128) * tb.n; // × tb.d
            let (lhs, rhs) = (ha * tb.d, hb * ta.d);
            if lhs == rhs {
                return Err(Degenerate::Yes);
            }
            let a_over = lhs > rhs;
            // Sign: orientation of (dir_a, dir_b) in the plane, flipped when
            // the over-strand is b. Global handedness of the frame flips all
            // signs together, i.e. mirrors the knot; the Alexander invariants
            // are mirror-stable so this is immaterial.
            let cross = orient([0, 0], [a.q[0] - a.p[0], a.q[1] - a.p[1]], [b.q[0] - b.p[0], b.q[1] - b.p[1]]);
            debug_assert!(cross != 0);
            let sign = if (cross > 0) == a_over { 1 } else { -1 };
            hits.push(CrossingHit { seg_a: i as u32, seg_b: j as u32, ta, tb, a_over, sign });
        }
    }
    // Triple points: two hits on the same segment with equal parameter.
    let mut per_seg: std::collections::HashMap<u32, Vec<Frac>> = std::collections::HashMap::new();
    for h in &hits {
        per_seg.entry(h.seg_a).or_default().push(h.ta);
        per_seg.entry(h.seg_b).or_default().push(h.tb);
    }
    for fracs in per_seg.values_mut() {
        fracs.sort();
        if fracs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Degenerate::Yes);
        }
    }
    Ok(hits)
}

fn on_segment(s: &Seg, p: [i64; 2]) -> bool {
    p[0] >= s.p[0].min(s.q[0])
        && p[0] <= s.p[0].max(s.q[0])
        && p[1] >= s.p[1].min(s.q[1])
        && p[1] <= s.p[1].max(s.q[1])
}

/// Removes exactly-collinear consecutive points (common in lattice curves)
/// and repeated points.
pub fn simplify_polyline(points: &[[i32; 3]]) -> Vec<[i32; 3]> {
    let n = points.len();
    let mut out: Vec<[i32; 3]> = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if out.is_empty() { points[(i + n - 1) % n] } else { *out.last().unwrap() };
        if points[i] == prev {
            continue;
        }
        out.push(points[i]);
    }
    // Drop collinear middles, including across the wrap.
    let collinear = |a: [i32; 3], b: [i32; 3], c: [i32; 3]| -> bool {
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - b[0], c[1] - b[1], c[2] - b[2]];
        let cx = u[1] as i64 * v[2] as i64 - u[2] as i64 * v[1] as i64;
        let cy = u[2] as i64 * v[0] as i64 - u[0] as i64 * v[2] as i64;
        let cz = u[0] as i64 * v[1] as i64 - u[1] as i64 * v[0] as i64;
        cx == 0 && cy == 0 && cz == 0 && (u[0] as i64 * v[0] as i64 + u[1] as i64 * v[1] as i64 + u[2] as i64 * v[2] as i64) > 0
    };
    let mut changed = true;
    while changed && out.len() > 3 {
        changed = false;
        let m = out.len();
        let mut keep: Vec<[i32; 3]> = Vec::with_capacity(m);
        for i in 0..m {
            let a = out[(i + m - 1) % m];
            let b = out[i];
            let c = out[(i + 1) % m];
            if collinear(a, b, c) {
                changed = true;
            } else {
                keep.push(b);
            }
        }
        out = keep;
    }
    out
}

/// Projects a closed integer polyline to a knot diagram along a generic
/// direction; retries perturbed directions on any degeneracy.
pub fn project_to_diagram(points: &[[i32; 3]]) -> Result<KnotDiagram> {
    project_with_offset(points, 0)
}

/// Like `project_to_diagram` but starting at a later entry of the direction
/// sequence, to re-project the same curve along an independent direction.
pub fn project_with_offset(points: &[[i32; 3]], direction_offset: usize) -> Result<KnotDiagram> {
    let pts = simplify_polyline(points);
    if pts.len() < 3 {
        // A bigon or less is an unknot with an empty diagram.
        return Ok(KnotDiagram { passages: Vec::new(), signs: Vec::new() });
    }
    for t in 0..MAX_DIRECTIONS {
        let Some(fr) = frame_for(direction(direction_offset + t)) else { continue };
        match find_crossings(&pts, &fr) {
            Err(Degenerate::Yes) => continue,
            Ok(hits) => return Ok(diagram_from_hits(pts.len(), &hits)),
        }
    }
    Err(Error::Internal("no generic projection direction found".into()))
}

fn diagram_from_hits(nsegs: usize, hits: &[CrossingHit]) -> KnotDiagram {
    // Order the 2·c passages along the curve: per segment, sort by parameter.
    let mut per_seg: Vec<Vec<(Frac, u32, bool)>> = vec![Vec::new(); nsegs];
    for (cid, h) in hits.iter().enumerate() {
        per_seg[h.seg_a as usize].push((h.ta, cid as u32, h.a_over));
        per_seg[h.seg_b as usize].push((h.tb, cid as u32, !h.a_over));
    }
    let mut passages: Vec<(u32, bool)> = Vec::with_capacity(2 * hits.len());
    for entries in per_seg.iter_mut() {
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        for &(_, cid, over) in entries.iter() {
            passages.push((cid, over));
        }
    }
    let signs = hits.iter().map(|h| h.sign).collect();
    KnotDiagram { passages, signs }
}

// ---------------------------------------------------------------------------
// Reidemeister I/II reduction
// ---------------------------------------------------------------------------

/// Applies Reidemeister I (kink) and II (poke) moves until none applies.
/// The knot type is unchanged; crossing count never increases.
pub fn reduce_diagram(d: &KnotDiagram) -> KnotDiagram {
    let mut passages = d.passages.clone();
    let mut alive: Vec<bool> = vec![true; d.signs.len()];
    loop {
        let m = passages.len();
        if m == 0 {
            break;
        }
        let mut removed = false;
        // R1: the two passages of one crossing are cyclically adjacent.
        for i in 0..m {
            let j = (i + 1) % m;
            if passages[i].0 == passages[j].0 {
                alive[passages[i].0 as usize] = false;
                let (lo, hi) = (i.min(j), i.max(j));
                passages.remove(hi);
                passages.remove(lo);
                removed = true;
                break;
            }
        }
        if removed {
            continue;
        }
        // R2: crossings x ≠ y adjacent with equal overness here, and their
        // partner passages also adjacent (necessarily with the opposite
        // overness).
        'r2: for i in 0..m {
            let inext = (i + 1) % m;
            let (x, ox) = passages[i];
            let (y, oy) = passages[inext];
            if x == y || ox != oy {
                continue;
            }
            for j in 0..m {
                let jnext = (j + 1) % m;
                if j == i || j == inext || jnext == i {
                    continue;
                }
                let (a, oa) = passages[j];
                let (b, ob) = passages[jnext];
                if oa == ox || ob == oy {
                    continue;
                }
                let matches = (a == x && b == y) || (a == y && b == x);
                if matches {
                    alive[x as usize] = false;
                    alive[y as usize] = false;
                    let mut idx = [i, inext, j, jnext];
                    idx.sort_unstable();
                    for &p in idx.iter().rev() {
                        passages.remove(p);
                    }
                    removed = true;
                    break 'r2;
                }
            }
        }
        if !removed {
            break;
        }
    }
    // Renumber surviving crossings compactly.
    let mut remap: Vec<u32> = vec![u32::MAX; d.signs.len()];
    let mut signs = Vec::new();
    for (old, &a) in alive.iter().enumerate() {
        if a {
            remap[old] = signs.len() as u32;
            signs.push(d.signs[old]);
        }
    }
    let passages = passages.into_iter().map(|(x, o)| (remap[x as usize], o)).collect();
    KnotDiagram { passages, signs }
}

// ---------------------------------------------------------------------------
// Laurent polynomials and the Alexander invariants
// ---------------------------------------------------------------------------

/// A normalized Alexander polynomial: integer coefficients for exponents
/// `min_exp ..= min_exp + coeffs.len() − 1`, symmetric (min_exp = −max_exp),
/// palindromic, and Δ(1) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct LaurentPoly {
    pub coeffs: Vec<i64>,
    pub min_exp: i64,
}

impl LaurentPoly {
    pub fn one() -> LaurentPoly {
        LaurentPoly { coeffs: vec![1], min_exp: 0 }
    }

    pub fn eval_at_minus_one(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let e = self.min_exp + i as i64;
                if e.rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let rev: Vec<i64> = self.coeffs.iter().rev().copied().collect();
        rev == self.coeffs
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let e = self.min_exp + i as i64;
            if !first && c > 0 {
                write!(f, "+")?;
            }
            first = false;
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (-1, 1) => write!(f, "-t")?,
                (c, 1) => write!(f, "{c}t")?,
                (1, e) => write!(f, "t^{e}")?,
                (-1, e) => write!(f, "-t^{e}")?,
                (c, e) => write!(f, "{c}t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Dense integer polynomial in t, index = exponent, no trailing zeros.
type Poly = Vec<BigInt>;

fn p_trim(p: &mut Poly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn p_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    p_trim(&mut out);
    out
}

fn p_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    p_trim(&mut out);
    out
}

fn p_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    p_trim(&mut out);
    out
}

/// Exact division, panicking if the division leaves a remainder (Bareiss
/// guarantees exactness).
fn p_div_exact(num: &Poly, den: &Poly) -> Poly {
    assert!(!den.is_empty(), "division by zero polynomial");
    if num.is_empty() {
        return Vec::new();
    }
    let mut rem = num.clone();
    let dl = den.len();
    let lead = den[dl - 1].clone();
    let mut quo = vec![BigInt::zero(); rem.len() - dl + 1];
    for k in (0..quo.len()).rev() {
        let top = rem[k + dl - 1].clone();
        if top.is_zero() {
            continue;
        }
        let (q, r) = (&top / &lead, &top % &lead);
        assert!(r.is_zero(), "inexact polynomial division");
        for (i, d) in den.iter().enumerate() {
            let delta = d * &q;
            rem[k + i] -= delta;
        }
        quo[k] = q;
    }
    p_trim(&mut rem);
    assert!(rem.is_empty(), "nonzero remainder in exact division");
    p_trim(&mut quo);
    quo
}

/// Fraction-free Bareiss determinant over ℤ[t].
fn bareiss_poly(mut m: Vec<Vec<Poly>>) -> Poly {
    let s = m.len();
    if s == 0 {
        return vec![BigInt::one()];
    }
    let mut sign = 1i32;
    let mut denom: Poly = vec![BigInt::one()];
    for k in 0..s - 1 {
        if m[k][k].is_empty() {
            let Some(r) = (k + 1..s).find(|&r| !m[r][k].is_empty()) else {
                return Vec::new();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..s {
            for j in k + 1..s {
                let num = p_sub(&p_mul(&m[k][k], &m[i][j]), &p_mul(&m[i][k], &m[k][j]));
                m[i][j] = p_div_exact(&num, &denom);
            }
            m[i][k] = Vec::new();
        }
        denom = m[k][k].clone();
    }
    let mut det = std::mem::take(&mut m[s - 1][s - 1]);
    if sign < 0 {
        det = p_sub(&Vec::new(), &det);
    }
    det
}

/// Fraction-free Bareiss determinant over ℤ.
fn bareiss_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let s = m.len();
    if s == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut denom = BigInt::one();
    for k in 0..s - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..s).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..s {
            for j in k + 1..s {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                let (q, r) = (&num / &denom, &num % &denom);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        denom = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[s - 1][s - 1]);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Arc label per passage position: arcs are the strands between consecutive
/// under-passages. Returns (arc per position, arc count = crossing count).
fn arc_labels(passages: &[(u32, bool)]) -> (Vec<u32>, usize) {
    let m = passages.len();
    let c = passages.iter().filter(|&&(_, over)| !over).count();
    let mut arc = vec![0u32; m];
    let mut a = 0u32;
    for (j, &(_, over)) in passages.iter().enumerate() {
        arc[j] = a;
        if !over {
            a += 1;
        }
    }
    // Wrap: positions after the last under-passage join arc 0.
    for x in arc.iter_mut() {
        if *x as usize == c {
            *x = 0;
        }
    }
    (arc, c)
}

/// Wirtinger rows of the Alexander matrix, one per crossing, over arcs.
/// Positive crossing: (1−t)·over + t·in − out; negative: (t−1)·over + in − t·out
/// (the Fox-derivative rows, the negative one cleared of t⁻¹).
fn wirtinger_rows(d: &KnotDiagram) -> Vec<Vec<Poly>> {
    let (arc, c) = arc_labels(&d.passages);
    let m = d.passages.len();
    let mut over_arc = vec![0u32; c];
    let mut in_arc = vec![0u32; c];
    let mut out_arc = vec![0u32; c];
    for (j, &(x, over)) in d.passages.iter().enumerate() {
        if over {
            over_arc[x as usize] = arc[j];
        } else {
            in_arc[x as usize] = arc[j];
            out_arc[x as usize] = arc[(j + 1) % m];
        }
    }
    let one: Poly = vec![BigInt::one()];
    let t: Poly = vec![BigInt::zero(), BigInt::one()];
    let one_minus_t = p_sub(&one, &t);
    let mut rows = Vec::with_capacity(c);
    for x in 0..c {
        let mut row: Vec<Poly> = vec![Vec::new(); c];
        let (o, i, u) = (over_arc[x] as usize, in_arc[x] as usize, out_arc[x] as usize);
        if d.signs[x] >= 0 {
            row[o] = p_add(&row[o], &one_minus_t);
            row[i] = p_add(&row[i], &t);
            row[u] = p_sub(&row[u], &one);
        } else {
            row[o] = p_sub(&row[o], &one_minus_t);
            row[i] = p_add(&row[i], &one);
            row[u] = p_sub(&row[u], &t);
        }
        rows.push(row);
    }
    rows
}

/// Normalizes a raw Alexander determinant (defined up to ±t^k) to the
/// symmetric palindromic representative with Δ(1) = 1.
fn normalize_alexander(raw: &Poly) -> Result<LaurentPoly> {
    if raw.is_empty() {
        return Err(Error::Internal("Alexander determinant vanished".into()));
    }
    let low = raw.iter().position(|c| !c.is_zero()).unwrap();
    let coeffs_big: Vec<&BigInt> = raw[low..].iter().collect();
    let span = coeffs_big.len() - 1;
    if span % 2 != 0 {
        return Err(Error::Internal("Alexander polynomial has odd exponent span".into()));
    }
    let at_one: BigInt = coeffs_big.iter().copied().sum();
    let flip = if at_one == BigInt::one() {
        false
    } else if at_one == -BigInt::one() {
        true
    } else {
        return Err(Error::Internal(format!("Alexander polynomial has Δ(1) = {at_one}")));
    };
    let mut coeffs = Vec::with_capacity(coeffs_big.len());
    for c in coeffs_big {
        let c = if flip { -c } else { c.clone() };
        let v: i64 = i64::try_from(&c)
            .map_err(|_| Error::Internal("Alexander coefficient exceeds i64".into()))?;
        coeffs.push(v);
    }
    let out = LaurentPoly { min_exp: -(span as i64) / 2, coeffs };
    if !out.is_palindromic() {
        return Err(Error::Internal(format!("Alexander polynomial not palindromic: {out}")));
    }
    Ok(out)
}

/// Alexander polynomial Δ(t) of a knot diagram: determinant of the Wirtinger
/// matrix with one row and one column deleted, normalized to Δ(t) = Δ(t⁻¹),
/// Δ(1) = 1.
pub fn alexander_polynomial(d: &KnotDiagram) -> Result<LaurentPoly> {
    d.check()?;
    let c = d.crossings();
    if c <= 1 {
        return Ok(LaurentPoly::one());
    }
    let rows = wirtinger_rows(d);
    let minor: Vec<Vec<Poly>> = rows[..c - 1]
        .iter()
        .map(|r| r[..c - 1].to_vec())
        .collect();
    let det = bareiss_poly(minor);
    normalize_alexander(&det)
}

/// Knot determinant |Δ(−1)|, computed by integer Bareiss elimination on the
/// Wirtinger minor at t = −1 — an independent route from the polynomial one.
pub fn determinant(d: &KnotDiagram) -> Result<u64> {
    d.check()?;
    let c = d.crossings();
    if c <= 1 {
        return Ok(1);
    }
    let rows = wirtinger_rows(d);
    let at = |p: &Poly| -> BigInt {
        p.iter()
            .enumerate()
            .map(|(e, co)| if e % 2 == 0 { co.clone() } else { -co })
            .sum()
    };
    let minor: Vec<Vec<BigInt>> = rows[..c - 1]
        .iter()
        .map(|r| r[..c - 1].iter().map(&at).collect())
        .collect();
    let det = bareiss_int(minor).abs();
    u64::try_from(&det).map_err(|_| Error::Internal("knot determinant exceeds u64".into()))
}

/// Fast screening determinant: Gaussian elimination modulo a 61-bit prime,
/// lifted to the symmetric range. Exact whenever the true determinant is
/// below p/2, which the Hadamard bound guarantees for ≤ 46 crossings; larger
/// diagrams must use `determinant`.
pub const DET_SCREEN_MAX_CROSSINGS: usize = 46;

pub fn determinant_screen(d: &KnotDiagram) -> Option<i64> {
    const P: u128 = (1u128 << 61) - 1;
    let c = d.crossings();
    if c <= 1 {
        return Some(1);
    }
    if c > DET_SCREEN_MAX_CROSSINGS {
        return None;
    }
    let rows = wirtinger_rows(d);
    let at = |p: &Poly| -> u128 {
        let mut v: i64 = 0;
        for (e, co) in p.iter().enumerate() {
            let x = i64::try_from(co).expect("small entry");
            v += if e % 2 == 0 { x } else { -x };
        }
        (v.rem_euclid(P as i64)) as u128
    };
    let s = c - 1;
    let mut m: Vec<Vec<u128>> = rows[..s].iter().map(|r| r[..s].iter().map(&at).collect()).collect();
    let mut det: u128 = 1;
    for k in 0..s {
        let Some(piv) = (k..s).find(|&r| m[r][k] != 0) else { return Some(0) };
        if piv != k {
            m.swap(k, piv);
            det = P - det;
        }
        let pk = m[k][k];
        det = det * pk % P;
        let inv = mod_inv(pk, P);
        for i in k + 1..s {
            let f = m[i][k] * inv % P;
            if f == 0 {
                continue;
            }
            for j in k..s {
                let sub = f * m[k][j] % P;
                m[i][j] = (m[i][j] + P - sub) % P;
            }
        }
    }
    // Symmetric lift.
    let lifted = if det > P / 2 { det as i128 - P as i128 } else { det as i128 };
    Some(lifted as i64)
}

fn mod_inv(a: u128, p: u128) -> u128 {
    // Fermat: p is prime.
    let mut result: u128 = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

// ---------------------------------------------------------------------------
// Knot table
// ---------------------------------------------------------------------------

/// (name, determinant, normalized Alexander coefficients, min exponent) for
/// the prime knots with up to 7 crossings.
pub fn knot_table() -> Vec<(&'static str, u64, LaurentPoly)> {
    let p = |min_exp: i64, coeffs: &[i64]| LaurentPoly { coeffs: coeffs.to_vec(), min_exp };
    vec![
        ("3_1", 3, p(-1, &[1, -1, 1])),
        ("4_1", 5, p(-1, &[-1, 3, -1])),
        ("5_1", 5, p(-2, &[1, -1, 1, -1, 1])),
        ("5_2", 7, p(-1, &[2, -3, 2])),
        ("6_1", 9, p(-1, &[-2, 5, -2])),
        ("6_2", 11, p(-2, &[-1, 3, -3, 3, -1])),
        ("6_3", 13, p(-2, &[1, -3, 5, -3, 1])),
        ("7_1", 7, p(-3, &[1, -1, 1, -1, 1, -1, 1])),
        ("7_2", 11, p(-1, &[3, -5, 3])),
        ("7_3", 13, p(-2, &[2, -3, 3, -3, 2])),
        ("7_4", 15, p(-1, &[4, -7, 4])),
        ("7_5", 17, p(-2, &[2, -4, 5, -4, 2])),
        ("7_6", 19, p(-2, &[-1, 5, -7, 5, -1])),
        ("7_7", 21, p(-2, &[1, -5, 9, -5, 1])),
    ]
}

/// Classification per the census methodology: determinant 3 counts as 3₁;
/// determinant 5 and above match by Alexander polynomial; anything else is
/// the residual bucket (None).
pub fn classify(det: u64, alex: &LaurentPoly) -> Option<&'static str> {
    if det == 1 {
        return Some("0_1");
    }
    if det == 3 {
        return Some("3_1");
    }
    knot_table()
        .into_iter()
        .find(|(_, d, poly)| *d == det && poly == alex)
        .map(|(name, _, _)| name)
}
