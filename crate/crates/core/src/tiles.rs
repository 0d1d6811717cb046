//! Tile-based realization of link diagrams on the boundary 3-sphere of a
//! 4-box.
//!
//! A link diagram is drawn with unit tiles (straight strands, quarter arcs,
//! crossings) on the six faces of an `nx × ny × nz` box. The complement faces
//! of the diagram are checkerboard-colored so that a designated "blue" class
//! avoids all odd-sided faces, and the remaining faces are red/green
//! 2-colored so that every crossing touches one red and one green face. Each
//! tile is then substituted by a 4×4×4 block of vertex colors (3 layers per
//! tile edge plus one layer in the fourth coordinate), producing a 3-coloring
//! of the boundary of `[0,N]⁴` (N = 3·max dimension) whose 3-color class is a
//! curve isotopic to the drawn link: the strand runs where blue, green, and
//! red meet, and crossings are resolved at distinct heights in the fourth
//! coordinate.

use crate::coloring::{ColorSet, Coloring};
use crate::diagram::{self, KnotDiagram, LaurentPoly};
use crate::error::{Error, Result};
use crate::knots::{BLUE, GREEN, RED};
use crate::lattice::{Coord, Family, GridComplex};
use crate::stratum::{validate_manifold, StratumComplex};
use crate::unionfind::UnionFind;
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Glyphs and diagrams
// ---------------------------------------------------------------------------

/// One tile of a rectilinear link diagram.
///
/// Arc naming: `a`/`b`/`c`/`d` are quarter arcs whose small complement corner
/// sits in the SW/SE/NE/NW quadrant of the tile; equivalently, `a` joins the
/// west and south edge midpoints, `b` south–east, `c` east–north, and `d`
/// north–west. `X+` is a crossing whose over-strand runs horizontally (along
/// the tile's u axis), `X-` one whose over-strand runs vertically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Glyph {
    Empty,
    /// Horizontal strand (west–east).
    H,
    /// Vertical strand (south–north).
    V,
    /// Quarter arc west–south.
    ArcSW,
    /// Quarter arc south–east.
    ArcSE,
    /// Quarter arc east–north.
    ArcNE,
    /// Quarter arc north–west.
    ArcNW,
    /// Crossing, over-strand horizontal.
    CrossOverU,
    /// Crossing, over-strand vertical.
    CrossOverV,
}

impl Glyph {
    pub fn parse(tok: &str) -> Result<Glyph> {
        Ok(match tok {
            "." => Glyph::Empty,
            "-" => Glyph::H,
            "|" => Glyph::V,
            "a" => Glyph::ArcSW,
            "b" => Glyph::ArcSE,
            "c" => Glyph::ArcNE,
            "d" => Glyph::ArcNW,
            "X+" => Glyph::CrossOverU,
            "X-" => Glyph::CrossOverV,
            other => return Err(Error::Parse(format!("unknown tile glyph {other:?}"))),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Glyph::Empty => ".",
            Glyph::H => "-",
            Glyph::V => "|",
            Glyph::ArcSW => "a",
            Glyph::ArcSE => "b",
            Glyph::ArcNE => "c",
            Glyph::ArcNW => "d",
            Glyph::CrossOverU => "X+",
            Glyph::CrossOverV => "X-",
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Glyph::CrossOverU | Glyph::CrossOverV)
    }

    /// Tile edges carrying a strand end: subset of [UMIN, UMAX, VMIN, VMAX].
    fn occupied_sides(self) -> &'static [Side] {
        use Side::*;
        match self {
            Glyph::Empty => &[],
            Glyph::H => &[UMin, UMax],
            Glyph::V => &[VMin, VMax],
            Glyph::ArcSW => &[UMin, VMin],
            Glyph::ArcSE => &[UMax, VMin],
            Glyph::ArcNE => &[UMax, VMax],
            Glyph::ArcNW => &[UMin, VMax],
            Glyph::CrossOverU | Glyph::CrossOverV => &[UMin, UMax, VMin, VMax],
        }
    }

    /// Strand pieces as (entry, exit) side pairs. Crossings have two pieces:
    /// piece 0 horizontal, piece 1 vertical.
    fn pieces(self) -> &'static [(Side, Side)] {
        use Side::*;
        match self {
            Glyph::Empty => &[],
            Glyph::H => &[(UMin, UMax)],
            Glyph::V => &[(VMin, VMax)],
            Glyph::ArcSW => &[(UMin, VMin)],
            Glyph::ArcSE => &[(UMax, VMin)],
            Glyph::ArcNE => &[(UMax, VMax)],
            Glyph::ArcNW => &[(UMin, VMax)],
            Glyph::CrossOverU | Glyph::CrossOverV => &[(UMin, UMax), (VMin, VMax)],
        }
    }
}

/// The six box faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Face {
    XNeg,
    XPos,
    YNeg,
    YPos,
    ZNeg,
    ZPos,
}

pub const FACES: [Face; 6] = [Face::XNeg, Face::XPos, Face::YNeg, Face::YPos, Face::ZNeg, Face::ZPos];

impl Face {
    pub fn index(self) -> usize {
        FACES.iter().position(|&f| f == self).unwrap()
    }

    /// (u axis, v axis, fixed axis) as indices into (x,y,z).
    fn axes(self) -> (usize, usize, usize) {
        match self {
            Face::XNeg | Face::XPos => (1, 2, 0),
            Face::YNeg | Face::YPos => (0, 2, 1),
            Face::ZNeg | Face::ZPos => (0, 1, 2),
        }
    }

    fn is_max(self) -> bool {
        matches!(self, Face::XPos | Face::YPos | Face::ZPos)
    }

    /// Outward unit normal.
    fn normal(self) -> [i64; 3] {
        match self {
            Face::XNeg => [-1, 0, 0],
            Face::XPos => [1, 0, 0],
            Face::YNeg => [0, -1, 0],
            Face::YPos => [0, 1, 0],
            Face::ZNeg => [0, 0, -1],
            Face::ZPos => [0, 0, 1],
        }
    }

    fn parse(s: &str) -> Result<Face> {
        Ok(match s {
            "-x" => Face::XNeg,
            "+x" => Face::XPos,
            "-y" => Face::YNeg,
            "+y" => Face::YPos,
            "-z" => Face::ZNeg,
            "+z" => Face::ZPos,
            other => return Err(Error::Parse(format!("unknown face {other:?}"))),
        })
    }
}

/// Tile edge, in face-local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    UMin,
    UMax,
    VMin,
    VMax,
}

const SIDES: [Side; 4] = [Side::UMin, Side::UMax, Side::VMin, Side::VMax];

/// Tile quadrants, in face-local coordinates.
const QSW: usize = 0;
const QSE: usize = 1;
const QNW: usize = 2;
const QNE: usize = 3;

/// A validated rectilinear link diagram on the surface of a box.
#[derive(Clone, Debug)]
pub struct TileDiagram {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Row-major glyph grids per face (index u + du·v), in FACES order.
    grids: [Vec<Glyph>; 6],
}

impl TileDiagram {
    /// Face grid dimensions (du, dv).
    pub fn dims(&self, f: Face) -> (usize, usize) {
        let (ua, va, _) = f.axes();
        let n = [self.nx, self.ny, self.nz];
        (n[ua], n[va])
    }

    pub fn glyph(&self, f: Face, u: usize, v: usize) -> Glyph {
        let (du, _) = self.dims(f);
        self.grids[f.index()][v * du + u]
    }

    /// Number of crossing tiles.
    pub fn crossings(&self) -> usize {
        self.grids.iter().flatten().filter(|g| g.is_crossing()).count()
    }

    /// Flat cell index over all six faces.
    fn cell_index(&self, f: Face, u: usize, v: usize) -> usize {
        let mut base = 0;
        for &g in &FACES {
            if g == f {
                let (du, _) = self.dims(f);
                return base + v * du + u;
            }
            let (du, dv) = self.dims(g);
            base += du * dv;
        }
        unreachable!()
    }

    fn cell_count(&self) -> usize {
        FACES.iter().map(|&f| { let (du, dv) = self.dims(f); du * dv }).sum()
    }

    fn cells(&self) -> Vec<(Face, usize, usize)> {
        let mut out = Vec::with_capacity(self.cell_count());
        for &f in &FACES {
            let (du, dv) = self.dims(f);
            for v in 0..dv {
                for u in 0..du {
                    out.push((f, u, v));
                }
            }
        }
        out
    }

    /// A 3D point of the face carrying local coordinates scaled by 4 per
    /// tile (integer positions for tile corners, edge midpoints, and edge
    /// quarter-points alike).
    fn face_point(&self, f: Face, u4: i64, v4: i64) -> [i64; 3] {
        let (ua, va, fa) = f.axes();
        let n = [self.nx as i64, self.ny as i64, self.nz as i64];
        let mut p = [0i64; 3];
        p[ua] = u4;
        p[va] = v4;
        p[fa] = if f.is_max() { 4 * n[fa] } else { 0 };
        p
    }

    /// Midpoint (×4) of a tile side.
    fn side_point(&self, f: Face, u: usize, v: usize, s: Side) -> [i64; 3] {
        let (cu, cv) = (4 * u as i64, 4 * v as i64);
        let (u4, v4) = match s {
            Side::UMin => (cu, cv + 2),
            Side::UMax => (cu + 4, cv + 2),
            Side::VMin => (cu + 2, cv),
            Side::VMax => (cu + 2, cv + 4),
        };
        self.face_point(f, u4, v4)
    }

    /// Midpoints (×4) of the two halves of a tile side, each tagged with the
    /// quadrant it bounds.
    fn half_side_points(&self, f: Face, u: usize, v: usize, s: Side) -> [([i64; 3], usize); 2] {
        let (cu, cv) = (4 * u as i64, 4 * v as i64);
        let mk = |u4, v4| self.face_point(f, u4, v4);
        match s {
            Side::UMin => [(mk(cu, cv + 1), QSW), (mk(cu, cv + 3), QNW)],
            Side::UMax => [(mk(cu + 4, cv + 1), QSE), (mk(cu + 4, cv + 3), QNE)],
            Side::VMin => [(mk(cu + 1, cv), QSW), (mk(cu + 3, cv), QSE)],
            Side::VMax => [(mk(cu + 1, cv + 4), QNW), (mk(cu + 3, cv + 4), QNE)],
        }
    }

    /// Map from geometric side midpoints to the (at most two) incident
    /// (cell, side) pairs; every side midpoint is shared by exactly two
    /// tiles, within a face or across a box edge.
    fn edge_map(&self) -> HashMap<[i64; 3], Vec<(Face, usize, usize, Side)>> {
        let mut m: HashMap<[i64; 3], Vec<(Face, usize, usize, Side)>> = HashMap::new();
        for (f, u, v) in self.cells() {
            for &s in &SIDES {
                m.entry(self.side_point(f, u, v, s)).or_default().push((f, u, v, s));
            }
        }
        m
    }
}

/// Parses the textual tile-diagram format:
///
/// ```text
/// box 2 2 1
/// [face:-z]
/// b a
/// c d
/// ```
///
/// The `box` line gives the tile dimensions; each `[face:±x|±y|±z]` section
/// lists its glyph rows from the top (highest v) down. Unlisted faces are
/// empty. `#` starts a comment line. Strand continuity across tile edges
/// (including box edges) is validated.
pub fn parse_tile_diagram(text: &str) -> Result<TileDiagram> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines.next().ok_or_else(|| Error::Parse("empty tile diagram".into()))?;
    let dims: Vec<usize> = head
        .strip_prefix("box")
        .ok_or_else(|| Error::Parse("tile diagram must start with a `box NX NY NZ` line".into()))?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad box dimension {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    let [nx, ny, nz] = dims[..] else {
        return Err(Error::Parse("`box` line needs exactly three dimensions".into()));
    };
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::Parse("box dimensions must be positive".into()));
    }
    let mut d = TileDiagram { nx, ny, nz, grids: Default::default() };
    for &f in &FACES {
        let (du, dv) = d.dims(f);
        d.grids[f.index()] = vec![Glyph::Empty; du * dv];
    }

    let mut current: Option<Face> = None;
    let mut rows: Vec<Vec<Glyph>> = Vec::new();
    let flush = |d: &mut TileDiagram, face: Option<Face>, rows: &mut Vec<Vec<Glyph>>| -> Result<()> {
        let Some(f) = face else {
            if rows.is_empty() {
                return Ok(());
            }
            return Err(Error::Parse("glyph rows before any [face:..] header".into()));
        };
        let (du, dv) = d.dims(f);
        if rows.len() != dv || rows.iter().any(|r| r.len() != du) {
            return Err(Error::Parse(format!(
                "face {f:?} expects {du}×{dv} glyphs, got rows {:?}",
                rows.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        let idx = f.index();
        for (i, row) in rows.iter().enumerate() {
            let v = dv - 1 - i; // rows listed top-first
            for (u, &g) in row.iter().enumerate() {
                d.grids[idx][v * du + u] = g;
            }
        }
        rows.clear();
        Ok(())
    };

    for line in lines {
        if let Some(rest) = line.strip_prefix("[face:") {
            flush(&mut d, current, &mut rows)?;
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Parse(format!("bad section header {line:?}")))?;
            current = Some(Face::parse(name)?);
        } else {
            rows.push(line.split_whitespace().map(Glyph::parse).collect::<Result<_>>()?);
        }
    }
    flush(&mut d, current, &mut rows)?;

    validate_continuity(&d)?;
    Ok(d)
}

/// Checks that strand ends meet across every tile edge.
fn validate_continuity(d: &TileDiagram) -> Result<()> {
    for (key, ents) in d.edge_map() {
        if ents.len() != 2 {
            return Err(Error::Internal(format!(
                "tile edge at {key:?} shared by {} tiles, expected 2",
                ents.len()
            )));
        }
        let occ = |&(f, u, v, s): &(Face, usize, usize, Side)| {
            d.glyph(f, u, v).occupied_sides().contains(&s)
        };
        if occ(&ents[0]) != occ(&ents[1]) {
            let (f, u, v, _) = ents[if occ(&ents[0]) { 0 } else { 1 }];
            return Err(Error::InvalidInput(format!(
                "dangling strand end at face {f:?}, tile ({u},{v})"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Complement faces: regions, checkerboard, red/green propagation
// ---------------------------------------------------------------------------

/// Coloring of the diagram's complement faces: every tile quadrant belongs to
/// a region, and every region is blue, green, or red.
#[derive(Clone, Debug)]
pub struct FaceColoring {
    /// Region id per quadrant node (cell index · 4 + quadrant).
    pub region: Vec<u32>,
    pub region_count: usize,
    /// Color per region.
    pub color: Vec<u8>,
    /// Side count parity per region (crossing corners).
    pub odd: Vec<bool>,
}

impl FaceColoring {
    /// Colors of a cell's four quadrants (SW, SE, NW, NE).
    fn quadrant_colors(&self, cell: usize) -> [u8; 4] {
        let mut out = [0u8; 4];
        for (q, o) in out.iter_mut().enumerate() {
            *o = self.color[self.region[cell * 4 + q] as usize];
        }
        out
    }
}

/// Pairs of quadrants joined within a tile (same complement region).
fn joined_quadrants(g: Glyph) -> &'static [(usize, usize)] {
    match g {
        Glyph::Empty => &[(QSW, QSE), (QSE, QNE), (QNE, QNW)],
        Glyph::V => &[(QSW, QNW), (QSE, QNE)],
        Glyph::H => &[(QSW, QSE), (QNW, QNE)],
        Glyph::ArcSW => &[(QSE, QNE), (QNE, QNW)],
        Glyph::ArcSE => &[(QSW, QNW), (QNW, QNE)],
        Glyph::ArcNE => &[(QSW, QSE), (QSW, QNW)],
        Glyph::ArcNW => &[(QSW, QSE), (QSE, QNE)],
        Glyph::CrossOverU | Glyph::CrossOverV => &[],
    }
}

/// Pairs of quadrants separated by a strand within a tile (checkerboard
/// adjacency).
fn separated_quadrants(g: Glyph) -> &'static [(usize, usize)] {
    match g {
        Glyph::Empty => &[],
        Glyph::V => &[(QSW, QSE), (QNW, QNE)],
        Glyph::H => &[(QSW, QNW), (QSE, QNE)],
        Glyph::ArcSW => &[(QSW, QSE), (QSW, QNW)],
        Glyph::ArcSE => &[(QSE, QSW), (QSE, QNE)],
        Glyph::ArcNE => &[(QNE, QNW), (QNE, QSE)],
        Glyph::ArcNW => &[(QNW, QNE), (QNW, QSW)],
        Glyph::CrossOverU | Glyph::CrossOverV => {
            &[(QSW, QSE), (QSW, QNW), (QSE, QNE), (QNW, QNE)]
        }
    }
}

/// Computes the complement regions and colors them: a checkerboard class
/// (containing no odd-sided region) becomes blue, and the remaining regions
/// are 2-colored green/red so that every crossing touches one of each.
pub fn checkerboard_faces(d: &TileDiagram) -> Result<FaceColoring> {
    let cells = d.cells();
    let nq = d.cell_count() * 4;
    let mut uf = UnionFind::new(nq);
    for (i, &(f, u, v)) in cells.iter().enumerate() {
        debug_assert_eq!(i, d.cell_index(f, u, v));
        for &(a, b) in joined_quadrants(d.glyph(f, u, v)) {
            uf.union((i * 4 + a) as u32, (i * 4 + b) as u32);
        }
    }
    // Joins across tile edges, via the geometric half-edge midpoints.
    let mut halves: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    for &(f, u, v) in &cells {
        let i = d.cell_index(f, u, v);
        for &s in &SIDES {
            for (p, q) in d.half_side_points(f, u, v, s) {
                halves.entry(p).or_default().push((i * 4 + q) as u32);
            }
        }
    }
    for (key, nodes) in &halves {
        if nodes.len() != 2 {
            return Err(Error::Internal(format!(
                "half edge at {key:?} bounds {} quadrants, expected 2",
                nodes.len()
            )));
        }
        uf.union(nodes[0], nodes[1]);
    }
    let (region, region_count) = uf.labels();

    // Side parity: each crossing corner contributes one side to its region.
    let mut sides = vec![0usize; region_count];
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); region_count];
    for &(f, u, v) in &cells {
        let i = d.cell_index(f, u, v);
        let g = d.glyph(f, u, v);
        if g.is_crossing() {
            for q in 0..4 {
                sides[region[i * 4 + q] as usize] += 1;
            }
        }
        for &(a, b) in separated_quadrants(g) {
            let (ra, rb) = (region[i * 4 + a], region[i * 4 + b]);
            if ra == rb {
                return Err(Error::InvalidInput(
                    "a strand has the same complement face on both sides".into(),
                ));
            }
            adj[ra as usize].push(rb);
            adj[rb as usize].push(ra);
        }
    }
    let odd: Vec<bool> = sides.iter().map(|&s| s % 2 == 1).collect();
    if odd.iter().filter(|&&o| o).count() > 2 {
        return Err(Error::InvalidInput(
            "diagram has more than two odd-sided complement faces; redraw the diagram".into(),
        ));
    }

    // Checkerboard bipartition, one parity choice per connected component of
    // the region-adjacency graph; odd regions must avoid the blue class.
    let mut parity = vec![u8::MAX; region_count];
    let mut color = vec![u8::MAX; region_count];
    for start in 0..region_count {
        if parity[start] != u8::MAX {
            continue;
        }
        let mut comp = vec![start as u32];
        parity[start] = 0;
        let mut head = 0;
        while head < comp.len() {
            let r = comp[head] as usize;
            head += 1;
            for &s in &adj[r] {
                if parity[s as usize] == u8::MAX {
                    parity[s as usize] = 1 - parity[r];
                    comp.push(s);
                } else if parity[s as usize] == parity[r] {
                    return Err(Error::InvalidInput(
                        "diagram complement is not checkerboard 2-colorable".into(),
                    ));
                }
            }
        }
        let odd_parities: Vec<u8> =
            comp.iter().filter(|&&r| odd[r as usize]).map(|&r| parity[r as usize]).collect();
        let blue_parity = if odd_parities.is_empty() {
            parity[start]
        } else if odd_parities.iter().all(|&p| p == odd_parities[0]) {
            1 - odd_parities[0]
        } else {
            return Err(Error::InvalidInput(
                "odd-sided faces fall in both checkerboard classes; redraw the diagram".into(),
            ));
        };
        for &r in &comp {
            if parity[r as usize] == blue_parity {
                color[r as usize] = BLUE;
            }
        }
    }

    // Green/red propagation over the non-blue regions: the two non-blue
    // quadrants of every crossing must receive different colors.
    let mut constraints: Vec<Vec<u32>> = vec![Vec::new(); region_count];
    for &(f, u, v) in &cells {
        if !d.glyph(f, u, v).is_crossing() {
            continue;
        }
        let i = d.cell_index(f, u, v);
        let rs = [region[i * 4], region[i * 4 + 1], region[i * 4 + 2], region[i * 4 + 3]];
        let blue = |r: u32| color[r as usize] == BLUE;
        let diag_ok = (blue(rs[QSW]) && blue(rs[QNE]) && !blue(rs[QSE]) && !blue(rs[QNW]))
            || (blue(rs[QSE]) && blue(rs[QNW]) && !blue(rs[QSW]) && !blue(rs[QNE]));
        if !diag_ok {
            return Err(Error::Internal(format!(
                "crossing at face {f:?} tile ({u},{v}) does not have a blue diagonal"
            )));
        }
        let others: Vec<u32> = rs.iter().copied().filter(|&r| !blue(r)).collect();
        if others[0] == others[1] {
            return Err(Error::InvalidInput(
                "the two colored faces of a crossing coincide; red/green split impossible".into(),
            ));
        }
        constraints[others[0] as usize].push(others[1]);
        constraints[others[1] as usize].push(others[0]);
    }
    for start in 0..region_count {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = GREEN;
        let mut stack = vec![start as u32];
        while let Some(r) = stack.pop() {
            for &s in &constraints[r as usize] {
                let want = if color[r as usize] == GREEN { RED } else { GREEN };
                if color[s as usize] == u8::MAX {
                    color[s as usize] = want;
                    stack.push(s);
                } else if color[s as usize] != want {
                    return Err(Error::InvalidInput(
                        "crossing constraints make the red/green coloring infeasible".into(),
                    ));
                }
            }
        }
    }
    Ok(FaceColoring { region, region_count, color, odd })
}

// ---------------------------------------------------------------------------
// Tile color blocks
// ---------------------------------------------------------------------------

/// A tile's 4×4×4 vertex colors, indexed `[w][v][u]`.
pub type TileBlock = [[[u8; 4]; 4]; 4];

fn other(c: u8) -> u8 {
    debug_assert!(c == RED || c == GREEN);
    RED + GREEN - c
}

/// Vertical color column over a face point of color `c`: blue caps at
/// w ∈ {0,3}; non-blue face colors switch to the opposite non-blue color at
/// w = 2 so that strands (blue/green/red junctions) run at heights 1–2.
fn stack_color(c: u8, w: usize) -> u8 {
    match w {
        0 | 3 => BLUE,
        1 => c,
        _ => {
            if c == BLUE {
                BLUE
            } else {
                other(c)
            }
        }
    }
}

/// Which quadrant's region a tile vertex (u,v) ∈ {0..3}² belongs to.
fn region_of(g: Glyph, u: usize, v: usize) -> usize {
    let lo = |t: usize| t <= 1;
    match g {
        Glyph::Empty => QSW,
        Glyph::V => {
            if lo(u) {
                QSW
            } else {
                QSE
            }
        }
        Glyph::H => {
            if lo(v) {
                QSW
            } else {
                QNW
            }
        }
        Glyph::ArcSW => {
            if u + v <= 1 {
                QSW
            } else {
                QNE
            }
        }
        Glyph::ArcSE => {
            if u >= 2 && v + 2 <= u {
                QSE
            } else {
                QNW
            }
        }
        Glyph::ArcNE => {
            if u + v >= 5 {
                QNE
            } else {
                QSW
            }
        }
        Glyph::ArcNW => {
            if v >= 2 && u + 2 <= v {
                QNW
            } else {
                QSE
            }
        }
        Glyph::CrossOverU | Glyph::CrossOverV => match (lo(u), lo(v)) {
            (true, true) => QSW,
            (false, true) => QSE,
            (true, false) => QNW,
            (false, false) => QNE,
        },
    }
}

/// Builds a tile's color block from its quadrant colors (SW, SE, NW, NE).
///
/// Non-crossing tiles lift each face vertex's region color into a
/// `stack_color` column. Crossing tiles additionally recolor the two center
/// vertices belonging to the blue quadrants with the color of the quadrant
/// across the over-strand, which pushes the over-strand to heights w ∈ [2,3]
/// and the under-strand to w ∈ [0,1].
pub fn tile_block(g: Glyph, q: [u8; 4]) -> TileBlock {
    let mut b = [[[0u8; 4]; 4]; 4];
    for w in 0..4 {
        for v in 0..4 {
            for u in 0..4 {
                b[w][v][u] = stack_color(q[region_of(g, u, v)], w);
            }
        }
    }
    if g.is_crossing() {
        let center = [(1usize, 1usize), (2, 1), (1, 2), (2, 2)]; // per quadrant
        let partner: [usize; 4] = if g == Glyph::CrossOverU {
            [QNW, QNE, QSW, QSE] // mirror across the horizontal over-strand
        } else {
            [QSE, QSW, QNE, QNW] // mirror across the vertical over-strand
        };
        for quad in 0..4 {
            if q[quad] == BLUE {
                let (cu, cv) = center[quad];
                b[1][cv][cu] = q[partner[quad]];
                b[2][cv][cu] = q[partner[quad]];
            }
        }
    }
    b
}

// ---------------------------------------------------------------------------
// Boundary coloring of the 4-box
// ---------------------------------------------------------------------------

/// A 3-coloring of the boundary 3-sphere of `[0,N]⁴` realizing a link as its
/// 3-color class.
#[derive(Clone, Debug)]
pub struct BoundaryColoring {
    pub complex: GridComplex,
    pub coloring: Coloring,
}

impl BoundaryColoring {
    pub fn n(&self) -> usize {
        self.complex.n
    }
}

/// Layer-duplication padding: maps `t ∈ [0, total]` onto `[0, old]` by
/// repeating layer 0.
fn pad(t: usize, old: usize, total: usize) -> usize {
    t.saturating_sub(total - old)
}

/// Substitutes every tile by its color block and assembles the coloring of
/// the boundary of `[0,N]⁴`, N = 3·max(nx,ny,nz): axes 0–2 carry the (padded)
/// scaled box surface, axis 3 the blue caps at w ∈ {0, N−3} plus the three
/// block layers. Shared block faces are checked to agree (a disagreement
/// indicates a broken tile table and reports an internal error).
pub fn emit_boundary_coloring(d: &TileDiagram, fc: &FaceColoring) -> Result<BoundaryColoring> {
    let cells = d.cells();
    let blocks: Vec<TileBlock> = cells
        .iter()
        .map(|&(f, u, v)| {
            let i = d.cell_index(f, u, v);
            tile_block(d.glyph(f, u, v), fc.quadrant_colors(i))
        })
        .collect();

    let n3 = [3 * d.nx, 3 * d.ny, 3 * d.nz];
    let n = *n3.iter().max().unwrap();
    let g = GridComplex::build(Family::Sphere, 3, n)?;
    let mut colors = vec![0u8; g.vertex_count()];
    for (vi, c) in colors.iter_mut().enumerate() {
        let coord = g.vertex_coord(vi as u32);
        let o: [usize; 3] = std::array::from_fn(|a| pad(coord[a] as usize, n3[a], n));
        let ow = pad(coord[3] as usize, 3, n);
        if ow == 0 || ow == 3 {
            *c = BLUE;
            continue;
        }
        let mut found: Option<u8> = None;
        for &f in &FACES {
            let (ua, va, fa) = f.axes();
            let fixed = if f.is_max() { n3[fa] } else { 0 };
            if o[fa] != fixed {
                continue;
            }
            let (du, dv) = d.dims(f);
            let cu = (o[ua] / 3).min(du - 1);
            let cv = (o[va] / 3).min(dv - 1);
            let (lu, lv) = (o[ua] - 3 * cu, o[va] - 3 * cv);
            let col = blocks[d.cell_index(f, cu, cv)][ow][lv][lu];
            match found {
                None => found = Some(col),
                Some(prev) if prev != col => {
                    return Err(Error::Internal(format!(
                        "tile blocks disagree at surface point {o:?} w={ow}"
                    )))
                }
                _ => {}
            }
        }
        *c = found.ok_or_else(|| {
            Error::Internal(format!("boundary vertex {coord:?} not on any box face"))
        })?;
    }
    let coloring = Coloring::new(&g, 3, colors)?;
    Ok(BoundaryColoring { complex: g, coloring })
}

/// Parses, face-colors, and emits in one step.
pub fn realize_diagram(d: &TileDiagram) -> Result<BoundaryColoring> {
    let fc = checkerboard_faces(d)?;
    emit_boundary_coloring(d, &fc)
}

/// m-refinement: duplicates every coordinate layer m times, yielding a
/// coloring of the boundary of `[0,mN]⁴` whose 3-color class is isotopic to
/// the original.
pub fn refine(bc: &BoundaryColoring, m: usize) -> Result<BoundaryColoring> {
    if m == 0 {
        return Err(Error::InvalidInput("refinement factor must be ≥ 1".into()));
    }
    if m == 1 {
        return Ok(bc.clone());
    }
    let n2 = m * bc.n();
    let g2 = GridComplex::build(Family::Sphere, 3, n2)?;
    let mut colors = vec![0u8; g2.vertex_count()];
    for (vi, c) in colors.iter_mut().enumerate() {
        let coord = g2.vertex_coord(vi as u32);
        let mut old = Coord::default();
        for a in 0..4 {
            old[a] = coord[a] / m as u16;
        }
        let ov = bc
            .complex
            .vertex_index(&old)
            .ok_or_else(|| Error::Internal(format!("refined vertex {coord:?} maps inside")))?;
        *c = bc.coloring.color(ov);
    }
    let coloring = Coloring::new(&g2, 3, colors)?;
    Ok(BoundaryColoring { complex: g2, coloring })
}

// ---------------------------------------------------------------------------
// Extraction and verification
// ---------------------------------------------------------------------------

/// Extracts the 3-color class of the boundary coloring as closed polylines
/// embedded in ℝ³ with integer coordinates, validating that it is a closed
/// 1-manifold.
///
/// The class's triangle barycenters carry coordinates (×3) `(s, s_w)` with
/// `s` on the scaled box surface and `0 < s_w < 3N`; the lateral shell embeds
/// star-shaped into ℝ³ by `p = (s_w + 9) · (2s − 3N·(1,1,1))`, preserving the
/// isotopy class.
pub fn extract_polylines(bc: &BoundaryColoring) -> Result<Vec<Vec<[i32; 3]>>> {
    let stratum = StratumComplex::build(&bc.complex, &bc.coloring, ColorSet::full(3))?;
    if stratum.is_empty() {
        return Ok(Vec::new());
    }
    let report = validate_manifold(&stratum);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "extracted class is not a closed 1-manifold: {:?}",
            report.offenders.first()
        )));
    }
    let nv = stratum.vertices.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for e in &stratum.simplices[1] {
        adj[e[0] as usize].push(e[1]);
        adj[e[1] as usize].push(e[0]);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return Err(Error::Internal("extracted curve has a vertex of degree ≠ 2".into()));
    }
    let n3 = 3 * bc.n() as i64;
    let mut seen = vec![false; nv];
    let mut out = Vec::new();
    for start in 0..nv {
        if seen[start] {
            continue;
        }
        let mut poly = Vec::new();
        let mut prev = u32::MAX;
        let mut cur = start as u32;
        loop {
            seen[cur as usize] = true;
            let face = &stratum.vertices[cur as usize];
            if face.vertex_count() == 3 {
                let mut lifted = [Coord::default(); crate::lattice::MAX_AXES + 1];
                let cnt = face.lifted_vertices(&mut lifted);
                let mut s = [0i64; 4];
                for vert in &lifted[..cnt] {
                    for a in 0..4 {
                        s[a] += vert[a] as i64;
                    }
                }
                let (sw, radial) = (s[3], s);
                debug_assert!(sw > 0 && sw < 3 * n3);
                let mut p = [0i32; 3];
                for a in 0..3 {
                    let val = (sw + 9) * (2 * radial[a] - n3);
                    p[a] = i32::try_from(val)
                        .map_err(|_| Error::Internal("embedding coordinate overflow".into()))?;
                }
                poly.push(p);
            }
            let nexts = &adj[cur as usize];
            let next = if nexts[0] != prev { nexts[0] } else { nexts[1] };
            prev = cur;
            cur = next;
            if cur as usize == start {
                break;
            }
        }
        out.push(poly);
    }
    Ok(out)
}

/// Expected invariants for a realized link.
#[derive(Clone, Debug)]
pub struct Expectation {
    pub components: usize,
    pub det: Option<u64>,
    pub alexander: Option<LaurentPoly>,
}

/// Outcome of an end-to-end realization check.
#[derive(Clone, Debug)]
pub struct RealizationReport {
    pub components: usize,
    pub det: Option<u64>,
    pub alexander: Option<LaurentPoly>,
    pub crossings_after_reduction: Option<usize>,
    pub matches: bool,
    pub mismatches: Vec<String>,
}

/// Extracts the 3-color class of the colored boundary sphere, validates it,
/// computes knot invariants (single-component case), and compares against
/// the expectation.
pub fn verify_realization(bc: &BoundaryColoring, expected: &Expectation) -> Result<RealizationReport> {
    let polys = extract_polylines(bc)?;
    let mut report = RealizationReport {
        components: polys.len(),
        det: None,
        alexander: None,
        crossings_after_reduction: None,
        matches: true,
        mismatches: Vec::new(),
    };
    if polys.len() == 1 {
        let kd = diagram::project_to_diagram(&polys[0])?;
        let reduced = diagram::reduce_diagram(&kd);
        report.crossings_after_reduction = Some(reduced.crossings());
        report.det = Some(diagram::determinant(&reduced)?);
        report.alexander = Some(diagram::alexander_polynomial(&reduced)?);
    }
    if expected.components != report.components {
        report.matches = false;
        report.mismatches.push(format!(
            "components: expected {}, extracted {}",
            expected.components, report.components
        ));
    }
    if let Some(want) = expected.det {
        if report.det != Some(want) {
            report.matches = false;
            report
                .mismatches
                .push(format!("determinant: expected {}, extracted {:?}", want, report.det));
        }
    }
    if let Some(want) = &expected.alexander {
        if report.alexander.as_ref() != Some(want) {
            report.matches = false;
            report.mismatches.push(format!(
                "alexander: expected {:?}, extracted {:?}",
                want, report.alexander
            ));
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Diagram-level oracle
// ---------------------------------------------------------------------------

/// Invariants computed directly from the tile diagram, independent of the
/// color-block construction.
#[derive(Clone, Debug)]
pub struct DiagramInvariants {
    pub components: usize,
    pub crossings: usize,
    /// Combinatorial diagram (single-component case).
    pub diagram: Option<KnotDiagram>,
    pub det: Option<u64>,
    pub alexander: Option<LaurentPoly>,
    /// Sum of crossing signs (single-component case).
    pub writhe: Option<i64>,
}

/// Traces the strands of the tile diagram over the box surface and computes
/// knot invariants combinatorially: crossings become diagram passages, and
/// signs are read from the 3D strand directions against the outward face
/// normal (a global mirror, which the invariants ignore, may occur).
pub fn diagram_invariants(d: &TileDiagram) -> Result<DiagramInvariants> {
    let cells = d.cells();
    let edges = d.edge_map();
    // Piece bookkeeping: (cell index, piece index) -> visited.
    let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
    for &(f, u, v) in &cells {
        let i = d.cell_index(f, u, v);
        for p in 0..d.glyph(f, u, v).pieces().len() {
            visited.insert((i, p), false);
        }
    }
    let piece_for_side = |g: Glyph, s: Side| -> usize {
        g.pieces()
            .iter()
            .position(|&(a, b)| a == s || b == s)
            .expect("side is occupied by some piece")
    };

    struct Passage {
        dir: [i64; 3],
        over: bool,
    }
    let mut passes: HashMap<usize, Vec<(usize, Passage)>> = HashMap::new(); // cell -> (cycle order slot)
    let mut cycles: Vec<Vec<(usize, bool)>> = Vec::new(); // (cell, over) passages per cycle
    let mut order = 0usize;

    let keys: Vec<(usize, usize)> = {
        let mut k: Vec<_> = visited.keys().copied().collect();
        k.sort_unstable();
        k
    };
    for &(start_cell, start_piece) in &keys {
        if visited[&(start_cell, start_piece)] {
            continue;
        }
        let mut cycle = Vec::new();
        let (mut f, mut u, mut v) = cells[start_cell];
        let mut piece = start_piece;
        let mut entry = d.glyph(f, u, v).pieces()[piece].0;
        loop {
            let i = d.cell_index(f, u, v);
            if *visited.get(&(i, piece)).unwrap() {
                break;
            }
            visited.insert((i, piece), true);
            let g = d.glyph(f, u, v);
            let (a, b) = g.pieces()[piece];
            let exit = if entry == a { b } else { a };
            if g.is_crossing() {
                let over = match g {
                    Glyph::CrossOverU => piece == 0,
                    Glyph::CrossOverV => piece == 1,
                    _ => unreachable!(),
                };
                let pin = d.side_point(f, u, v, entry);
                let pout = d.side_point(f, u, v, exit);
                let dir = [pout[0] - pin[0], pout[1] - pin[1], pout[2] - pin[2]];
                passes.entry(i).or_default().push((order, Passage { dir, over }));
                cycle.push((i, over));
                order += 1;
            }
            // Move to the neighbor across the exit side.
            let key = d.side_point(f, u, v, exit);
            let ents = &edges[&key];
            let (nf, nu, nv, ns) = ents
                .iter()
                .copied()
                .find(|&(ef, eu, ev, _)| (ef, eu, ev) != (f, u, v))
                .ok_or_else(|| Error::Internal("tile edge with a single incidence".into()))?;
            let ng = d.glyph(nf, nu, nv);
            piece = piece_for_side(ng, ns);
            entry = ns;
            (f, u, v) = (nf, nu, nv);
        }
        if !cycle.is_empty() || start_piece == 0 {
            cycles.push(cycle);
        }
    }
    // Empty diagrams: no pieces at all.
    let components = cycles.len();
    let crossings = d.crossings();
    let mut inv = DiagramInvariants {
        components,
        crossings,
        diagram: None,
        det: None,
        alexander: None,
        writhe: None,
    };
    if components == 1 {
        let cycle = &cycles[0];
        // Renumber crossings by first appearance.
        let mut ids: HashMap<usize, u32> = HashMap::new();
        let mut passages = Vec::with_capacity(cycle.len());
        for &(cell, over) in cycle {
            let next = ids.len() as u32;
            let id = *ids.entry(cell).or_insert(next);
            passages.push((id, over));
        }
        let mut signs = vec![0i8; ids.len()];
        for (&cell, ps) in &passes {
            if ps.len() != 2 {
                return Err(Error::Internal("crossing not traversed exactly twice".into()));
            }
            let (f, ..) = cells[cell];
            let nrm = f.normal();
            let (o, u_) = if ps[0].1.over { (&ps[0].1, &ps[1].1) } else { (&ps[1].1, &ps[0].1) };
            let cx = [
                o.dir[1] * u_.dir[2] - o.dir[2] * u_.dir[1],
                o.dir[2] * u_.dir[0] - o.dir[0] * u_.dir[2],
                o.dir[0] * u_.dir[1] - o.dir[1] * u_.dir[0],
            ];
            let dot = cx[0] * nrm[0] + cx[1] * nrm[1] + cx[2] * nrm[2];
            if dot == 0 {
                return Err(Error::Internal("degenerate crossing directions".into()));
            }
            signs[ids[&cell] as usize] = if dot > 0 { 1 } else { -1 };
        }
        let kd = KnotDiagram { passages, signs };
        kd.check()?;
        let reduced = diagram::reduce_diagram(&kd);
        inv.det = Some(diagram::determinant(&reduced)?);
        inv.alexander = Some(diagram::alexander_polynomial(&reduced)?);
        inv.writhe = Some(kd.signs.iter().map(|&s| s as i64).sum());
        inv.diagram = Some(kd);
    }
    Ok(inv)
}

// ---------------------------------------------------------------------------
// Fixture diagrams
// ---------------------------------------------------------------------------

/// Canonical test diagrams.
pub mod fixtures {
    use super::*;

    /// A round unknot: four arcs on one face of a 2×2×1 box.
    pub fn unknot() -> TileDiagram {
        parse_tile_diagram(
            "box 2 2 1\n\
             [face:-z]\n\
             b a\n\
             c d\n",
        )
        .expect("fixture parses")
    }

    /// Two disjoint round unknots on opposite faces of a 2×2×2 box.
    pub fn two_unknots() -> TileDiagram {
        parse_tile_diagram(
            "box 2 2 2\n\
             [face:-z]\n\
             b a\n\
             c d\n\
             [face:+z]\n\
             b a\n\
             c d\n",
        )
        .expect("fixture parses")
    }

    /// A trefoil: an alternating 3-crossing loop on the front face of a
    /// 3×3×3 box, closed over the top and left faces.
    pub fn trefoil() -> TileDiagram {
        parse_tile_diagram(
            "box 3 3 3\n\
             [face:-y]\n\
             b X+ a\n\
             X+ X- d\n\
             c d .\n\
             [face:+z]\n\
             . . .\n\
             . . .\n\
             - a .\n\
             [face:-x]\n\
             | . .\n\
             d . .\n\
             . . .\n",
        )
        .expect("fixture parses")
    }

    /// A square knot (trefoil # mirror trefoil): one 3-crossing loop on the
    /// front face, its mirror on the back face, spliced in series around the
    /// box.
    pub fn square_knot() -> TileDiagram {
        parse_tile_diagram(
            "box 3 3 3\n\
             [face:-y]\n\
             b X+ a\n\
             X+ X- d\n\
             c d .\n\
             [face:+y]\n\
             b X- a\n\
             c X+ X-\n\
             . c d\n\
             [face:+z]\n\
             - d .\n\
             . b -\n\
             . | .\n\
             [face:+x]\n\
             . c a\n\
             . . c\n\
             . . .\n\
             [face:-x]\n\
             . . |\n\
             - - d\n\
             . . .\n",
        )
        .expect("fixture parses")
    }

    /// The 7-crossing diagram of the knot 6₁ on a 2×2×2 box.
    pub fn six_one() -> TileDiagram {
        parse_tile_diagram(
            "box 2 2 2\n\
             [face:+z]\n\
             X+ a\n\
             | c\n\
             [face:-y]\n\
             | b\n\
             X- d\n\
             [face:-x]\n\
             b X+\n\
             X+ d\n\
             [face:+x]\n\
             X- -\n\
             c -\n\
             [face:+y]\n\
             d b\n\
             b X-\n\
             [face:-z]\n\
             | |\n\
             X- d\n",
        )
        .expect("fixture parses")
    }

    /// A figure-eight knot: the 5-crossing rational diagram with a
    /// 3-crossing twist region (right) spliced to a 2-crossing clasp (left),
    /// drawn on one face of a 7×7×1 box. This diagram, unlike the minimal
    /// 4-crossing one, has only two odd-sided complement faces.
    pub fn figure_eight() -> TileDiagram {
        parse_tile_diagram(
            "box 7 7 1\n\
             [face:-z]\n\
             . b - - - a .\n\
             . | . b a | .\n\
             . | b X+ X- X+ a\n\
             b X+ d | c d |\n\
             c X- a | . . |\n\
             . | c d . . |\n\
             . c - - - - d\n",
        )
        .expect("fixture parses")
    }
}

// ---------------------------------------------------------------------------
// Per-tile contract self-check
// ---------------------------------------------------------------------------

/// Braid-triangulates a 3×3×3 cube block of vertex colors and returns
/// the 3-color-class segments as pairs of triangle centers (×3), in
/// block coordinates (u,v,w).
fn block_segments(b: &TileBlock) -> Vec<([i64; 3], [i64; 3])> {
    use itertools::Itertools;

    let color = |p: [usize; 3]| b[p[2]][p[1]][p[0]];
    let mut segs = Vec::new();
    for (cx, cy, cz) in (0..3).cartesian_product(0..3).cartesian_product(0..3).map(|((a, b), c)| (a, b, c)) {
        for perm in (0..3).permutations(3) {
            let mut verts = [[cx, cy, cz]; 4];
            for j in 0..3 {
                verts[j + 1] = verts[j];
                verts[j + 1][perm[j]] += 1;
            }
            let tet_colors: Vec<u8> = verts.iter().map(|&p| color(p)).collect();
            let distinct = tet_colors.iter().unique().count();
            if distinct != 3 {
                continue;
            }
            // Tricolored faces of the tet.
            let mut centers = Vec::new();
            for omit in 0..4 {
                let face: Vec<usize> = (0..4).filter(|&i| i != omit).collect();
                let cs: Vec<u8> = face.iter().map(|&i| tet_colors[i]).collect();
                if cs.iter().unique().count() == 3 {
                    let mut c = [0i64; 3];
                    for &i in &face {
                        for a in 0..3 {
                            c[a] += verts[i][a] as i64;
                        }
                    }
                    centers.push(c);
                }
            }
            assert_eq!(centers.len(), 2, "3-colored tet must have 2 tricolored faces");
            segs.push((centers[0], centers[1]));
        }
    }
    segs
}

/// Splits segments into simple paths; panics on branching or loops.
fn block_paths(segs: &[([i64; 3], [i64; 3])]) -> Vec<Vec<[i64; 3]>> {
    let mut adj: HashMap<[i64; 3], Vec<[i64; 3]>> = HashMap::new();
    for &(a, b) in segs {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for (p, ns) in &adj {
        assert!(ns.len() <= 2, "branch point at {p:?}");
    }
    let mut seen: HashMap<[i64; 3], bool> = adj.keys().map(|&k| (k, false)).collect();
    let mut paths = Vec::new();
    let mut starts: Vec<[i64; 3]> = adj
        .iter()
        .filter(|(_, ns)| ns.len() == 1)
        .map(|(&p, _)| p)
        .collect();
    starts.sort_unstable();
    for s in starts {
        if seen[&s] {
            continue;
        }
        let mut path = vec![s];
        seen.insert(s, true);
        let mut prev: Option<[i64; 3]> = None;
        let mut cur = s;
        loop {
            let next = adj[&cur].iter().copied().find(|&n| Some(n) != prev && !seen[&n]);
            match next {
                Some(n) => {
                    seen.insert(n, true);
                    path.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => break,
            }
        }
        paths.push(path);
    }
    assert!(
        seen.values().all(|&v| v),
        "block contains a closed loop, not expected in any tile"
    );
    paths
}

/// Expected endpoint (center ×3) region for a tile side: the tricolored
/// square straddles heights w ∈ [1,2] at the side's midline.
fn is_side_endpoint(p: [i64; 3], s: Side) -> bool {
    let mid = |t: i64| t == 4 || t == 5;
    match s {
        Side::UMin => p[0] == 0 && mid(p[1]) && mid(p[2]),
        Side::UMax => p[0] == 9 && mid(p[1]) && mid(p[2]),
        Side::VMin => p[1] == 0 && mid(p[0]) && mid(p[2]),
        Side::VMax => p[1] == 9 && mid(p[0]) && mid(p[2]),
    }
}

fn check_tile_contract(g: Glyph, q: [u8; 4]) {
    let b = tile_block(g, q);
    let segs = block_segments(&b);
    // No strand may touch the w caps.
    for &(a, c) in &segs {
        for p in [a, c] {
            assert!(p[2] > 0 && p[2] < 9, "{g:?} {q:?}: strand touches a cap at {p:?}");
        }
    }
    let paths = block_paths(&segs);
    match g {
        Glyph::Empty => assert!(segs.is_empty(), "{q:?}: empty tile has strands"),
        Glyph::CrossOverU | Glyph::CrossOverV => {
            assert_eq!(paths.len(), 2, "{g:?} {q:?}: want 2 strands, got {paths:?}");
            let mut over_path = None;
            let mut under_path = None;
            for p in &paths {
                let (s, e) = (p[0], p[p.len() - 1]);
                let horizontal = is_side_endpoint(s, Side::UMin) && is_side_endpoint(e, Side::UMax)
                    || is_side_endpoint(s, Side::UMax) && is_side_endpoint(e, Side::UMin);
                let vertical = is_side_endpoint(s, Side::VMin) && is_side_endpoint(e, Side::VMax)
                    || is_side_endpoint(s, Side::VMax) && is_side_endpoint(e, Side::VMin);
                assert!(horizontal ^ vertical, "{g:?} {q:?}: bad strand {p:?}");
                let is_over = (g == Glyph::CrossOverU) == horizontal;
                if is_over {
                    over_path = Some(p.clone());
                } else {
                    under_path = Some(p.clone());
                }
            }
            let over_path = over_path.expect("over strand present");
            let under_path = under_path.expect("under strand present");
            let over_max = over_path.iter().map(|p| p[2]).max().unwrap();
            let under_min = under_path.iter().map(|p| p[2]).min().unwrap();
            assert!(over_max >= 7, "{g:?} {q:?}: over strand stays low ({over_max})");
            assert!(under_min <= 2, "{g:?} {q:?}: under strand stays high ({under_min})");
        }
        _ => {
            assert_eq!(paths.len(), 1, "{g:?} {q:?}: want 1 strand, got {paths:?}");
            let p = &paths[0];
            let sides = g.occupied_sides();
            let (s, e) = (p[0], p[p.len() - 1]);
            let ok = is_side_endpoint(s, sides[0]) && is_side_endpoint(e, sides[1])
                || is_side_endpoint(s, sides[1]) && is_side_endpoint(e, sides[0]);
            assert!(ok, "{g:?} {q:?}: endpoints {s:?} {e:?} do not match {sides:?}");
        }
    }
    // Adjacency contract: boundary columns depend only on the local
    // region color, so neighboring tiles agree on shared block faces.
    for u in 0..4usize {
        for v in 0..4usize {
            if u != 0 && u != 3 && v != 0 && v != 3 {
                continue;
            }
            let c = q[region_of(g, u, v)];
            for w in 0..4 {
                assert_eq!(
                    b[w][v][u],
                    stack_color(c, w),
                    "{g:?} {q:?}: boundary column ({u},{v}) deviates at w={w}"
                );
            }
        }
    }
}

/// Exhaustive self-check of every tile variant against the per-tile
/// contract: correct strand count and endpoints, over/under strands
/// resolved at separated heights, strands clear of the outer caps, and
/// boundary columns determined purely by the local region color (so
/// adjacent tile blocks always agree on shared faces). Panics with a
/// description of the first violation; used by the test suites.
pub fn check_tile_contracts() {
    let two: [(u8, u8); 4] = [(BLUE, GREEN), (BLUE, RED), (GREEN, BLUE), (RED, BLUE)];
    for c in [BLUE, GREEN, RED] {
        check_tile_contract(Glyph::Empty, [c; 4]);
    }
    for (left, right) in two {
        check_tile_contract(Glyph::V, [left, right, left, right]);
        check_tile_contract(Glyph::H, [left, left, right, right]);
    }
    for (corner, outer) in two {
        check_tile_contract(Glyph::ArcSW, [corner, outer, outer, outer]);
        check_tile_contract(Glyph::ArcSE, [outer, corner, outer, outer]);
        check_tile_contract(Glyph::ArcNW, [outer, outer, corner, outer]);
        check_tile_contract(Glyph::ArcNE, [outer, outer, outer, corner]);
    }
    for g in [Glyph::CrossOverU, Glyph::CrossOverV] {
        for (g1, g2) in [(GREEN, RED), (RED, GREEN)] {
            check_tile_contract(g, [BLUE, g1, g2, BLUE]);
            check_tile_contract(g, [g1, BLUE, BLUE, g2]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures;
    use super::*;

    // --- parsing ---------------------------------------------------------

    #[test]
    fn unknot_parses_as_one_loop() {
        let d = fixtures::unknot();
        assert_eq!(d.crossings(), 0);
        let inv = diagram_invariants(&d).unwrap();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.det, Some(1));
        assert_eq!(inv.alexander, Some(LaurentPoly::one()));
    }

    #[test]
    fn dangling_strand_is_rejected() {
        let err = parse_tile_diagram(
            "box 2 2 1\n\
             [face:-z]\n\
             . a\n\
             c d\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("dangling"));
    }

    #[test]
    fn six_one_has_seven_crossings() {
        let d = fixtures::six_one();
        assert_eq!(d.crossings(), 7);
    }

    // --- diagram oracle ---------------------------------------------------

    #[test]
    fn oracle_trefoil() {
        let inv = diagram_invariants(&fixtures::trefoil()).unwrap();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.crossings, 3);
        assert_eq!(inv.det, Some(3));
        assert_eq!(
            inv.alexander,
            Some(LaurentPoly { coeffs: vec![1, -1, 1], min_exp: -1 })
        );
        assert_eq!(inv.writhe.map(i64::abs), Some(3));
    }

    #[test]
    fn oracle_figure_eight() {
        let inv = diagram_invariants(&fixtures::figure_eight()).unwrap();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.crossings, 5);
        assert_eq!(inv.det, Some(5));
        assert_eq!(
            inv.alexander,
            Some(LaurentPoly { coeffs: vec![-1, 3, -1], min_exp: -1 })
        );
    }

    #[test]
    fn oracle_six_one() {
        let inv = diagram_invariants(&fixtures::six_one()).unwrap();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.det, Some(9));
        assert_eq!(
            inv.alexander,
            Some(LaurentPoly { coeffs: vec![-2, 5, -2], min_exp: -1 })
        );
    }

    #[test]
    fn oracle_square_knot() {
        let inv = diagram_invariants(&fixtures::square_knot()).unwrap();
        assert_eq!(inv.components, 1);
        assert_eq!(inv.crossings, 6);
        assert_eq!(inv.det, Some(9));
        assert_eq!(
            inv.alexander,
            Some(LaurentPoly { coeffs: vec![1, -2, 3, -2, 1], min_exp: -2 })
        );
        // Writhe 0 distinguishes the square knot from the granny knot, whose
        // Alexander polynomial is identical.
        assert_eq!(inv.writhe, Some(0));
    }

    #[test]
    fn oracle_two_components() {
        let inv = diagram_invariants(&fixtures::two_unknots()).unwrap();
        assert_eq!(inv.components, 2);
        assert!(inv.det.is_none());
    }

    // --- checkerboard -----------------------------------------------------

    #[test]
    fn checkerboard_round_unknot() {
        let d = fixtures::unknot();
        let fc = checkerboard_faces(&d).unwrap();
        assert_eq!(fc.region_count, 2);
        let blues = fc.color.iter().filter(|&&c| c == BLUE).count();
        assert_eq!(blues, 1);
        assert!(fc.odd.iter().all(|&o| !o));
    }

    #[test]
    fn checkerboard_crossing_diagrams() {
        for d in [
            fixtures::trefoil(),
            fixtures::figure_eight(),
            fixtures::six_one(),
            fixtures::square_knot(),
        ] {
            let fc = checkerboard_faces(&d).unwrap();
            assert!(fc.odd.iter().filter(|&&o| o).count() <= 2);
            // Odd faces never blue.
            for r in 0..fc.region_count {
                if fc.odd[r] {
                    assert_ne!(fc.color[r], BLUE);
                }
            }
            // Every crossing: blue diagonal plus one red and one green face.
            for (f, u, v) in d.cells() {
                if !d.glyph(f, u, v).is_crossing() {
                    continue;
                }
                let q = fc.quadrant_colors(d.cell_index(f, u, v));
                let mut counts = [0usize; 3];
                for &c in &q {
                    counts[c as usize] += 1;
                }
                assert_eq!(counts, [2, 1, 1], "face {f:?} tile ({u},{v}): {q:?}");
                assert_eq!(q[QSW] == BLUE, q[QNE] == BLUE);
                assert_eq!(q[QSE] == BLUE, q[QNW] == BLUE);
            }
        }
    }

    // --- per-tile contract -------------------------------------------------

    #[test]
    fn per_tile_contract_all_variants() {
        check_tile_contracts();
    }

    // --- end-to-end (small cases; larger ones live in the acceptance suite)

    #[test]
    fn realize_unknot_end_to_end() {
        let bc = realize_diagram(&fixtures::unknot()).unwrap();
        assert_eq!(bc.n(), 6);
        let report = verify_realization(
            &bc,
            &Expectation { components: 1, det: Some(1), alexander: Some(LaurentPoly::one()) },
        )
        .unwrap();
        assert!(report.matches, "{:?}", report.mismatches);
    }

    #[test]
    fn realize_two_unknots_end_to_end() {
        let bc = realize_diagram(&fixtures::two_unknots()).unwrap();
        let report = verify_realization(
            &bc,
            &Expectation { components: 2, det: None, alexander: None },
        )
        .unwrap();
        assert!(report.matches, "{:?}", report.mismatches);
    }

    #[test]
    fn empty_diagram_has_empty_class() {
        let d = parse_tile_diagram("box 2 2 1\n").unwrap();
        let bc = realize_diagram(&d).unwrap();
        assert!(extract_polylines(&bc).unwrap().is_empty());
    }

    #[test]
    fn realize_six_one_end_to_end() {
        let d = fixtures::six_one();
        let oracle = diagram_invariants(&d).unwrap();
        let bc = realize_diagram(&d).unwrap();
        let report = verify_realization(
            &bc,
            &Expectation {
                components: 1,
                det: oracle.det,
                alexander: oracle.alexander.clone(),
            },
        )
        .unwrap();
        assert!(report.matches, "{:?}", report.mismatches);
        assert_eq!(report.det, Some(9));
    }

    #[test]
    fn refine_identity_and_unknot_m2() {
        let bc = realize_diagram(&fixtures::unknot()).unwrap();
        let bc1 = refine(&bc, 1).unwrap();
        assert_eq!(bc1.coloring.colors, bc.coloring.colors);
        let bc2 = refine(&bc, 2).unwrap();
        assert_eq!(bc2.n(), 12);
        let report = verify_realization(
            &bc2,
            &Expectation { components: 1, det: Some(1), alexander: Some(LaurentPoly::one()) },
        )
        .unwrap();
        assert!(report.matches, "{:?}", report.mismatches);
    }
}
