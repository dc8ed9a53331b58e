//! Open-boundary square lattice of `lx * ly` plaquettes with gauge links on
//! the edges and one control per plaquette.
//!
//! Indexing is fixed so that register bit layouts are reproducible:
//!
//! * sites `(x, y)`, `0 <= x <= lx`, `0 <= y <= ly`, row-major:
//!   `y * (lx + 1) + x`;
//! * links are numbered by walking the sites row-major and emitting the
//!   direction-1 (horizontal) link before the direction-2 (vertical) link
//!   leaving each site;
//! * plaquettes and controls are row-major over lower-left corners:
//!   `y * lx + x`.
//!
//! Positions are in units of the lattice constant: sites on integer points,
//! links at edge midpoints, controls at plaquette centers.

use crate::error::{Error, Result};
use crate::statevec::{Axis, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// +x
    One,
    /// +y
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub x: usize,
    pub y: usize,
    pub dir: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangular Wilson-loop contour: lower-left plaquette `(x, y)` and its
/// size in plaquettes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LoopSpec {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl LoopSpec {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn unit(x: usize, y: usize) -> Self {
        Self::new(x, y, 1, 1)
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn perimeter(&self) -> usize {
        2 * (self.width + self.height)
    }
}

/// Loop links sharing one distance to a control.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceSet {
    pub distance: f64,
    pub links: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LatticeGeometry {
    lx: usize,
    ly: usize,
    links: Vec<Link>,
    /// `[dir1, dir2]` link index leaving each site, if it exists.
    site_links: Vec<[Option<usize>; 2]>,
    /// Plaquettes bordering each link (one or two).
    link_plaquettes: Vec<Vec<usize>>,
}

impl LatticeGeometry {
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx == 0 || ly == 0 {
            return Err(Error::InvalidInput(format!(
                "lattice dimensions must be positive, got {lx}x{ly}"
            )));
        }
        let mut links = Vec::new();
        let mut site_links = Vec::with_capacity((lx + 1) * (ly + 1));
        for y in 0..=ly {
            for x in 0..=lx {
                let mut entry = [None, None];
                if x < lx {
                    entry[0] = Some(links.len());
                    links.push(Link {
                        x,
                        y,
                        dir: Direction::One,
                    });
                }
                if y < ly {
                    entry[1] = Some(links.len());
                    links.push(Link {
                        x,
                        y,
                        dir: Direction::Two,
                    });
                }
                site_links.push(entry);
            }
        }
        let mut geom = Self {
            lx,
            ly,
            links,
            site_links,
            link_plaquettes: Vec::new(),
        };
        let mut link_plaquettes = vec![Vec::new(); geom.num_links()];
        for p in 0..geom.num_plaquettes() {
            for l in geom.plaquette_links(p)? {
                link_plaquettes[l].push(p);
            }
        }
        geom.link_plaquettes = link_plaquettes;
        Ok(geom)
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.lx * self.ly
    }

    pub fn num_controls(&self) -> usize {
        self.num_plaquettes()
    }

    pub fn num_sites(&self) -> usize {
        (self.lx + 1) * (self.ly + 1)
    }

    pub fn site_index(&self, x: usize, y: usize) -> usize {
        y * (self.lx + 1) + x
    }

    pub fn site_coords(&self, s: usize) -> (usize, usize) {
        (s % (self.lx + 1), s / (self.lx + 1))
    }

    pub fn plaquette_index(&self, x: usize, y: usize) -> usize {
        y * self.lx + x
    }

    pub fn plaquette_coords(&self, p: usize) -> (usize, usize) {
        (p % self.lx, p / self.lx)
    }

    pub fn link(&self, l: usize) -> Link {
        self.links[l]
    }

    pub fn link_index(&self, x: usize, y: usize, dir: Direction) -> Option<usize> {
        if x > self.lx || y > self.ly {
            return None;
        }
        let entry = self.site_links[self.site_index(x, y)];
        match dir {
            Direction::One => entry[0],
            Direction::Two => entry[1],
        }
    }

    fn check_plaquette(&self, p: usize) -> Result<()> {
        if p >= self.num_plaquettes() {
            return Err(Error::OutOfRange {
                what: "plaquette",
                index: p,
                size: self.num_plaquettes(),
            });
        }
        Ok(())
    }

    /// Links (x,1), (x+1,2), (x+2,1), (x,2) of the plaquette with lower-left
    /// corner x, counter-clockwise.
    pub fn plaquette_links(&self, p: usize) -> Result<[usize; 4]> {
        self.check_plaquette(p)?;
        let (x, y) = self.plaquette_coords(p);
        let get = |x, y, d| self.link_index(x, y, d).expect("plaquette link exists");
        Ok([
            get(x, y, Direction::One),
            get(x + 1, y, Direction::Two),
            get(x, y + 1, Direction::One),
            get(x, y, Direction::Two),
        ])
    }

    /// Links of the star at site `s`: (x,1), (x,2), (x-1,1), (x-2,2), omitting
    /// those outside the lattice.
    pub fn star_links(&self, s: usize) -> Result<Vec<usize>> {
        if s >= self.num_sites() {
            return Err(Error::OutOfRange {
                what: "site",
                index: s,
                size: self.num_sites(),
            });
        }
        let (x, y) = self.site_coords(s);
        let mut out = Vec::with_capacity(4);
        out.extend(self.link_index(x, y, Direction::One));
        out.extend(self.link_index(x, y, Direction::Two));
        if x > 0 {
            out.extend(self.link_index(x - 1, y, Direction::One));
        }
        if y > 0 {
            out.extend(self.link_index(x, y - 1, Direction::Two));
        }
        Ok(out)
    }

    pub fn link_plaquettes(&self, l: usize) -> &[usize] {
        &self.link_plaquettes[l]
    }

    pub fn is_boundary_link(&self, l: usize) -> bool {
        self.link_plaquettes[l].len() == 1
    }

    pub fn site_position(&self, s: usize) -> Point {
        let (x, y) = self.site_coords(s);
        Point {
            x: x as f64,
            y: y as f64,
        }
    }

    pub fn link_position(&self, l: usize) -> Point {
        let link = self.links[l];
        match link.dir {
            Direction::One => Point {
                x: link.x as f64 + 0.5,
                y: link.y as f64,
            },
            Direction::Two => Point {
                x: link.x as f64,
                y: link.y as f64 + 0.5,
            },
        }
    }

    pub fn control_position(&self, p: usize) -> Point {
        let (x, y) = self.plaquette_coords(p);
        Point {
            x: x as f64 + 0.5,
            y: y as f64 + 0.5,
        }
    }

    /// B(x) as a Pauli string over link indices.
    pub fn plaquette_operator(&self, p: usize) -> Result<PauliString> {
        PauliString::uniform(Axis::X, self.plaquette_links(p)?)
    }

    /// A(x) as a Pauli string over link indices.
    pub fn star_operator(&self, s: usize) -> Result<PauliString> {
        PauliString::uniform(Axis::Z, self.star_links(s)?)
    }

    /// Bit mask of a star's links, for parity reductions.
    pub fn star_mask(&self, s: usize) -> Result<u64> {
        Ok(self.star_links(s)?.iter().map(|&l| 1u64 << l).sum())
    }

    pub fn check_loop(&self, c: &LoopSpec) -> Result<()> {
        if c.width == 0 || c.height == 0 {
            return Err(Error::InvalidInput(format!(
                "loop must be at least 1x1, got {}x{}",
                c.width, c.height
            )));
        }
        if c.x + c.width > self.lx || c.y + c.height > self.ly {
            return Err(Error::InvalidInput(format!(
                "{}x{} loop at ({}, {}) exceeds the {}x{} lattice",
                c.width, c.height, c.x, c.y, self.lx, self.ly
            )));
        }
        Ok(())
    }

    /// Perimeter links in counter-clockwise order starting at the lower-left
    /// corner.
    pub fn loop_links(&self, c: &LoopSpec) -> Result<Vec<usize>> {
        self.check_loop(c)?;
        let get = |x, y, d| self.link_index(x, y, d).expect("loop link exists");
        let mut out = Vec::with_capacity(c.perimeter());
        for i in 0..c.width {
            out.push(get(c.x + i, c.y, Direction::One));
        }
        for j in 0..c.height {
            out.push(get(c.x + c.width, c.y + j, Direction::Two));
        }
        for i in (0..c.width).rev() {
            out.push(get(c.x + i, c.y + c.height, Direction::One));
        }
        for j in (0..c.height).rev() {
            out.push(get(c.x, c.y + j, Direction::Two));
        }
        Ok(out)
    }

    pub fn loop_enclosed_plaquettes(&self, c: &LoopSpec) -> Result<Vec<usize>> {
        self.check_loop(c)?;
        Ok((c.y..c.y + c.height)
            .flat_map(|y| (c.x..c.x + c.width).map(move |x| (x, y)))
            .map(|(x, y)| self.plaquette_index(x, y))
            .collect())
    }

    /// W(C) as a Pauli string over link indices.
    pub fn loop_operator(&self, c: &LoopSpec) -> Result<PauliString> {
        PauliString::uniform(Axis::X, self.loop_links(c)?)
    }

    /// Every rectangular loop that fits in the lattice.
    pub fn all_loops(&self) -> Vec<LoopSpec> {
        let mut out = Vec::new();
        for h in 1..=self.ly {
            for w in 1..=self.lx {
                for y in 0..=self.ly - h {
                    for x in 0..=self.lx - w {
                        out.push(LoopSpec::new(x, y, w, h));
                    }
                }
            }
        }
        out
    }

    /// The 1x1 loop closest to the lattice center (lower-left on ties).
    pub fn central_plaquette(&self) -> usize {
        self.plaquette_index((self.lx - 1) / 2, (self.ly - 1) / 2)
    }

    /// Partition of the loop links into sets of equal distance (within
    /// 1e-9) to `control`, sorted by increasing distance.
    pub fn distance_sets(&self, c: &LoopSpec, control: usize) -> Result<Vec<DistanceSet>> {
        self.check_plaquette(control)?;
        let center = self.control_position(control);
        let mut dl: Vec<(f64, usize)> = self
            .loop_links(c)?
            .into_iter()
            .map(|l| (self.link_position(l).distance(center), l))
            .collect();
        dl.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut sets: Vec<DistanceSet> = Vec::new();
        for (d, l) in dl {
            match sets.last_mut() {
                Some(s) if (d - s.distance).abs() <= 1e-9 => s.links.push(l),
                _ => sets.push(DistanceSet {
                    distance: d,
                    links: vec![l],
                }),
            }
        }
        Ok(sets)
    }

    /// Control at the center of an odd square loop, or the enclosed
    /// plaquette nearest the center otherwise.
    pub fn loop_center_control(&self, c: &LoopSpec) -> Result<usize> {
        self.check_loop(c)?;
        Ok(self.plaquette_index(c.x + (c.width - 1) / 2, c.y + (c.height - 1) / 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let g = LatticeGeometry::new(1, 1).unwrap();
        assert_eq!((g.num_links(), g.num_plaquettes(), g.num_sites()), (4, 1, 4));
        let g = LatticeGeometry::new(4, 4).unwrap();
        assert_eq!((g.num_links(), g.num_plaquettes(), g.num_sites()), (40, 16, 25));
        let g = LatticeGeometry::new(2, 2).unwrap();
        assert_eq!(g.num_links() + g.num_controls(), 16);
        let g = LatticeGeometry::new(3, 2).unwrap();
        assert_eq!(g.num_links(), 3 * 3 + 4 * 2);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(LatticeGeometry::new(0, 3).is_err());
        assert!(LatticeGeometry::new(2, 0).is_err());
    }

    #[test]
    fn link_order_is_row_major_dir1_first() {
        let g = LatticeGeometry::new(2, 1).unwrap();
        let expect = [
            (0, 0, Direction::One),
            (0, 0, Direction::Two),
            (1, 0, Direction::One),
            (1, 0, Direction::Two),
            (2, 0, Direction::Two),
            (0, 1, Direction::One),
            (1, 1, Direction::One),
        ];
        for (i, (x, y, d)) in expect.into_iter().enumerate() {
            assert_eq!(g.link(i), Link { x, y, dir: d });
            assert_eq!(g.link_index(x, y, d), Some(i));
        }
    }

    #[test]
    fn single_plaquette_links() {
        let g = LatticeGeometry::new(1, 1).unwrap();
        let mut ls = g.plaquette_links(0).unwrap().to_vec();
        ls.sort();
        assert_eq!(ls, vec![0, 1, 2, 3]);
        assert!(g.plaquette_links(1).is_err());
    }

    #[test]
    fn plaquette_incidence_two_by_two() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let mut count = vec![0; g.num_links()];
        for p in 0..4 {
            for l in g.plaquette_links(p).unwrap() {
                count[l] += 1;
            }
        }
        for l in 0..g.num_links() {
            let expected = if g.is_boundary_link(l) { 1 } else { 2 };
            assert_eq!(count[l], expected);
        }
        assert_eq!(count.iter().filter(|&&c| c == 2).count(), 4);
    }

    #[test]
    fn stars() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        assert_eq!(g.star_links(0).unwrap().len(), 2);
        assert_eq!(g.star_links(g.site_index(1, 1)).unwrap().len(), 4);
        assert_eq!(g.star_links(g.site_index(1, 0)).unwrap().len(), 3);
        assert!(g.star_links(9).is_err());
    }

    #[test]
    fn loop_sizes() {
        let g = LatticeGeometry::new(3, 3).unwrap();
        let one = g.loop_links(&LoopSpec::unit(1, 1)).unwrap();
        let mut plaq = g.plaquette_links(g.plaquette_index(1, 1)).unwrap().to_vec();
        let mut one_sorted = one.clone();
        one_sorted.sort();
        plaq.sort();
        assert_eq!(one_sorted, plaq);
        assert_eq!(g.loop_links(&LoopSpec::new(0, 0, 3, 3)).unwrap().len(), 12);
        assert_eq!(g.loop_links(&LoopSpec::new(0, 0, 2, 1)).unwrap().len(), 6);
        assert_eq!(g.loop_enclosed_plaquettes(&LoopSpec::new(0, 0, 3, 3)).unwrap().len(), 9);
        assert!(g.loop_links(&LoopSpec::new(2, 2, 2, 1)).is_err());
        assert!(g.loop_links(&LoopSpec::new(0, 0, 0, 1)).is_err());
    }

    #[test]
    fn three_by_three_distance_sets() {
        let g = LatticeGeometry::new(3, 3).unwrap();
        let c = LoopSpec::new(0, 0, 3, 3);
        let ctrl = g.loop_center_control(&c).unwrap();
        assert_eq!(ctrl, g.plaquette_index(1, 1));
        let sets = g.distance_sets(&c, ctrl).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].links.len(), 4);
        assert!((sets[0].distance - 1.5).abs() < 1e-12);
        assert_eq!(sets[1].links.len(), 8);
        assert!((sets[1].distance - 3.25f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unit_loop_single_set() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let sets = g.distance_sets(&LoopSpec::unit(1, 0), 1).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].links.len(), 4);
        assert!((sets[0].distance - 0.5).abs() < 1e-12);
    }

    #[test]
    fn all_loops_count() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        assert_eq!(g.all_loops().len(), 9);
        let g = LatticeGeometry::new(4, 4).unwrap();
        assert_eq!(g.all_loops().len(), 100);
    }

    #[test]
    fn central_plaquette_of_four_by_four_is_bulk() {
        let g = LatticeGeometry::new(4, 4).unwrap();
        let p = g.central_plaquette();
        assert!(g.plaquette_links(p).unwrap().iter().all(|&l| !g.is_boundary_link(l)));
        let g = LatticeGeometry::new(3, 3).unwrap();
        assert_eq!(g.central_plaquette(), 4);
    }
}
