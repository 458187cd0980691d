//! Uniform Cartesian meshes with face connectivity and boundary classification.
//!
//! Cells are numbered row-major (`cell = j * nx + i`). Faces with an x-normal
//! come first (`j * (nx + 1) + i`), followed by faces with a y-normal. Interior
//! faces point in +x/+y from the `minus` cell to the `plus` cell; boundary
//! faces carry the outward normal of their only cell.

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// One of the four sides of the domain (or of a single cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
            Side::Bottom => 2,
            Side::Top => 3,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Bottom => Side::Top,
            Side::Top => Side::Bottom,
        }
    }

    /// Axis of the outward normal.
    pub fn axis(self) -> Axis {
        match self {
            Side::Left | Side::Right => Axis::X,
            Side::Bottom | Side::Top => Axis::Y,
        }
    }

    pub fn outward_normal(self) -> Point {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }
}

/// Role of a face with respect to one scalar unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceKind {
    Interior,
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub axis: Axis,
    pub minus: usize,
    pub plus: Option<usize>,
    /// Side of the `minus` cell this face lies on; the `plus` cell sees the opposite side.
    pub minus_side: Side,
    /// Domain side for boundary faces.
    pub boundary: Option<Side>,
    pub normal: Point,
    pub length: f64,
    pub center: Point,
}

impl Face {
    pub fn is_interior(&self) -> bool {
        self.plus.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartesianMesh {
    pub nx: usize,
    pub ny: usize,
    pub origin: Point,
    pub extent: Point,
    pub hx: f64,
    pub hy: f64,
    faces: Vec<Face>,
    /// Face ids per cell, indexed by `Side::index`.
    cell_faces: Vec<[usize; 4]>,
}

impl CartesianMesh {
    pub fn new(nx: usize, ny: usize, origin: Point, extent: Point) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidMesh(format!("cell counts must be positive, got {nx}x{ny}")));
        }
        if !(extent[0] > 0.0 && extent[1] > 0.0) || !extent.iter().all(|e| e.is_finite()) {
            return Err(Error::InvalidMesh(format!("extent must be positive, got {extent:?}")));
        }
        let hx = extent[0] / nx as f64;
        let hy = extent[1] / ny as f64;
        let mut faces = Vec::with_capacity((nx + 1) * ny + nx * (ny + 1));
        let mut cell_faces = vec![[usize::MAX; 4]; nx * ny];

        for j in 0..ny {
            for i in 0..=nx {
                let id = faces.len();
                let center = [origin[0] + i as f64 * hx, origin[1] + (j as f64 + 0.5) * hy];
                let face = if i == 0 {
                    let c = j * nx;
                    cell_faces[c][Side::Left.index()] = id;
                    Face {
                        axis: Axis::X,
                        minus: c,
                        plus: None,
                        minus_side: Side::Left,
                        boundary: Some(Side::Left),
                        normal: [-1.0, 0.0],
                        length: hy,
                        center,
                    }
                } else if i == nx {
                    let c = j * nx + nx - 1;
                    cell_faces[c][Side::Right.index()] = id;
                    Face {
                        axis: Axis::X,
                        minus: c,
                        plus: None,
                        minus_side: Side::Right,
                        boundary: Some(Side::Right),
                        normal: [1.0, 0.0],
                        length: hy,
                        center,
                    }
                } else {
                    let m = j * nx + i - 1;
                    let p = j * nx + i;
                    cell_faces[m][Side::Right.index()] = id;
                    cell_faces[p][Side::Left.index()] = id;
                    Face {
                        axis: Axis::X,
                        minus: m,
                        plus: Some(p),
                        minus_side: Side::Right,
                        boundary: None,
                        normal: [1.0, 0.0],
                        length: hy,
                        center,
                    }
                };
                faces.push(face);
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                let id = faces.len();
                let center = [origin[0] + (i as f64 + 0.5) * hx, origin[1] + j as f64 * hy];
                let face = if j == 0 {
                    let c = i;
                    cell_faces[c][Side::Bottom.index()] = id;
                    Face {
                        axis: Axis::Y,
                        minus: c,
                        plus: None,
                        minus_side: Side::Bottom,
                        boundary: Some(Side::Bottom),
                        normal: [0.0, -1.0],
                        length: hx,
                        center,
                    }
                } else if j == ny {
                    let c = (ny - 1) * nx + i;
                    cell_faces[c][Side::Top.index()] = id;
                    Face {
                        axis: Axis::Y,
                        minus: c,
                        plus: None,
                        minus_side: Side::Top,
                        boundary: Some(Side::Top),
                        normal: [0.0, 1.0],
                        length: hx,
                        center,
                    }
                } else {
                    let m = (j - 1) * nx + i;
                    let p = j * nx + i;
                    cell_faces[m][Side::Top.index()] = id;
                    cell_faces[p][Side::Bottom.index()] = id;
                    Face {
                        axis: Axis::Y,
                        minus: m,
                        plus: Some(p),
                        minus_side: Side::Top,
                        boundary: None,
                        normal: [0.0, 1.0],
                        length: hx,
                        center,
                    }
                };
                faces.push(face);
            }
        }

        Ok(Self { nx, ny, origin, extent, hx, hy, faces, cell_faces })
    }

    pub fn num_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    pub fn cell_ij(&self, cell: usize) -> (usize, usize) {
        (cell % self.nx, cell / self.nx)
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn h_min(&self) -> f64 {
        self.hx.min(self.hy)
    }

    pub fn cell_center(&self, cell: usize) -> Point {
        let (i, j) = self.cell_ij(cell);
        [
            self.origin[0] + (i as f64 + 0.5) * self.hx,
            self.origin[1] + (j as f64 + 0.5) * self.hy,
        ]
    }

    /// Lower-left and upper-right corners of a cell.
    pub fn cell_bounds(&self, cell: usize) -> (Point, Point) {
        let (i, j) = self.cell_ij(cell);
        let lo = [self.origin[0] + i as f64 * self.hx, self.origin[1] + j as f64 * self.hy];
        (lo, [lo[0] + self.hx, lo[1] + self.hy])
    }

    /// Maps a physical point to reference coordinates of `cell` in [-1, 1]^2.
    pub fn to_reference(&self, cell: usize, x: Point) -> Point {
        let c = self.cell_center(cell);
        [2.0 * (x[0] - c[0]) / self.hx, 2.0 * (x[1] - c[1]) / self.hy]
    }

    pub fn to_physical(&self, cell: usize, xi: Point) -> Point {
        let c = self.cell_center(cell);
        [c[0] + 0.5 * self.hx * xi[0], c[1] + 0.5 * self.hy * xi[1]]
    }

    /// Cell containing a physical point (points on the domain boundary are clamped inward).
    pub fn locate(&self, x: Point) -> Option<usize> {
        let fx = (x[0] - self.origin[0]) / self.hx;
        let fy = (x[1] - self.origin[1]) / self.hy;
        if fx < 0.0 || fy < 0.0 || fx > self.nx as f64 || fy > self.ny as f64 {
            return None;
        }
        let i = (fx as usize).min(self.nx - 1);
        let j = (fy as usize).min(self.ny - 1);
        Some(self.cell_index(i, j))
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn cell_faces(&self, cell: usize) -> [usize; 4] {
        self.cell_faces[cell]
    }

    /// Face-adjacent neighbor of a cell, if any.
    pub fn neighbor(&self, cell: usize, side: Side) -> Option<usize> {
        let (i, j) = self.cell_ij(cell);
        match side {
            Side::Left => (i > 0).then(|| cell - 1),
            Side::Right => (i + 1 < self.nx).then(|| cell + 1),
            Side::Bottom => (j > 0).then(|| cell - self.nx),
            Side::Top => (j + 1 < self.ny).then(|| cell + self.nx),
        }
    }

    /// The cell itself followed by its face neighbors, in ascending order.
    pub fn stencil(&self, cell: usize) -> Vec<usize> {
        let mut cells = vec![cell];
        cells.extend(Side::ALL.iter().filter_map(|&s| self.neighbor(cell, s)));
        cells.sort_unstable();
        cells
    }

    pub fn num_interior_faces(&self) -> usize {
        self.faces.iter().filter(|f| f.is_interior()).count()
    }

    /// Vertical (x-normal) face id at grid column `i` (0..=nx) and row `j`.
    pub fn x_face(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    /// Horizontal (y-normal) face id at column `i` and grid row `j` (0..=ny).
    pub fn y_face(&self, i: usize, j: usize) -> usize {
        (self.nx + 1) * self.ny + j * self.nx + i
    }
}

/// Per-side boundary tag for one scalar unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideKinds(pub [FaceKind; 4]);

impl SideKinds {
    pub fn uniform(kind: FaceKind) -> Self {
        SideKinds([kind; 4])
    }

    pub fn get(&self, side: Side) -> FaceKind {
        self.0[side.index()]
    }
}

/// Assigns every face its kind: interior faces stay interior, boundary faces take their side's tag.
pub fn classify_boundary(mesh: &CartesianMesh, sides: SideKinds) -> Vec<FaceKind> {
    mesh.faces()
        .iter()
        .map(|f| match f.boundary {
            None => FaceKind::Interior,
            Some(side) => {
                let k = sides.get(side);
                assert!(k != FaceKind::Interior, "boundary side tagged as interior");
                k
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_mesh_dimensions() {
        let m = CartesianMesh::new(80, 160, [0.0, 0.0], [1.0, 2.0]).unwrap();
        assert_eq!(m.num_cells(), 12800);
        assert!((m.hx - 0.0125).abs() < 1e-15);
        assert!((m.hy - 0.0125).abs() < 1e-15);
    }

    #[test]
    fn single_cell_has_only_boundary_faces() {
        let m = CartesianMesh::new(1, 1, [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert_eq!(m.num_cells(), 1);
        assert_eq!(m.num_interior_faces(), 0);
        assert_eq!(m.faces().len(), 4);
    }

    #[test]
    fn interior_face_count_matches_brute_force() {
        for (nx, ny) in [(3, 2), (1, 5), (4, 4), (7, 3)] {
            let m = CartesianMesh::new(nx, ny, [0.0, 0.0], [nx as f64, ny as f64]).unwrap();
            let mut brute = 0;
            for a in 0..m.num_cells() {
                for b in (a + 1)..m.num_cells() {
                    let (ia, ja) = m.cell_ij(a);
                    let (ib, jb) = m.cell_ij(b);
                    if ia.abs_diff(ib) + ja.abs_diff(jb) == 1 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(m.num_interior_faces(), brute);
            assert_eq!(brute, nx * (ny - 1) + (nx - 1) * ny);
        }
        let m = CartesianMesh::new(3, 2, [0.0, 0.0], [3.0, 2.0]).unwrap();
        assert_eq!(m.num_interior_faces(), 7);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(CartesianMesh::new(0, 3, [0.0, 0.0], [1.0, 1.0]).is_err());
        assert!(CartesianMesh::new(2, 3, [0.0, 0.0], [0.0, 1.0]).is_err());
        assert!(CartesianMesh::new(2, 3, [0.0, 0.0], [1.0, -1.0]).is_err());
    }

    #[test]
    fn cell_boundary_normals_sum_to_zero() {
        let m = CartesianMesh::new(5, 3, [0.0, -1.0], [2.0, 1.5]).unwrap();
        for cell in 0..m.num_cells() {
            let mut s = [0.0; 2];
            for fid in m.cell_faces(cell) {
                let f = m.face(fid);
                let sign = if f.minus == cell { 1.0 } else { -1.0 };
                s[0] += sign * f.length * f.normal[0];
                s[1] += sign * f.length * f.normal[1];
            }
            assert!(s[0].abs() < 1e-14 && s[1].abs() < 1e-14);
        }
    }

    #[test]
    fn faces_are_unit_and_consistently_connected() {
        let m = CartesianMesh::new(4, 3, [0.0, 0.0], [1.0, 1.0]).unwrap();
        for f in m.faces() {
            let n = (f.normal[0].powi(2) + f.normal[1].powi(2)).sqrt();
            assert!((n - 1.0).abs() < 1e-15);
            if let Some(p) = f.plus {
                assert_eq!(m.neighbor(f.minus, f.minus_side), Some(p));
                assert!(f.normal[0] >= 0.0 && f.normal[1] >= 0.0);
            } else {
                assert_eq!(f.normal, f.minus_side.outward_normal());
            }
        }
        let again = CartesianMesh::new(4, 3, [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn benchmark_classification() {
        let m = CartesianMesh::new(80, 160, [0.0, 0.0], [1.0, 2.0]).unwrap();
        let sides = SideKinds([FaceKind::Neumann, FaceKind::Neumann, FaceKind::Dirichlet, FaceKind::Dirichlet]);
        let kinds = classify_boundary(&m, sides);
        for (f, k) in m.faces().iter().zip(&kinds) {
            match f.boundary {
                Some(Side::Top) | Some(Side::Bottom) => assert_eq!(*k, FaceKind::Dirichlet),
                Some(_) => assert_eq!(*k, FaceKind::Neumann),
                None => assert_eq!(*k, FaceKind::Interior),
            }
        }
        let all_d = classify_boundary(&m, SideKinds::uniform(FaceKind::Dirichlet));
        assert!(!all_d.contains(&FaceKind::Neumann));
        let all_n = classify_boundary(&m, SideKinds::uniform(FaceKind::Neumann));
        assert!(!all_n.contains(&FaceKind::Dirichlet));
    }
}
