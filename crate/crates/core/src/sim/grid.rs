use serde::{Deserialize, Serialize};

use super::SimError;

/// A grid cell addressed by row (0 = top) and column.
///
/// Ordering is lexicographic on `(row, col)`, which matches row-major index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Chebyshev (king-move) distance in cells.
    pub fn chebyshev(self, other: Cell) -> usize {
        self.row.abs_diff(other.row).max(self.col.abs_diff(other.col))
    }
}

/// Binary occupancy map stored row-major, row 0 at the top.
///
/// Cell `(r, c)` covers `x ∈ [c·res, (c+1)·res)` and `y ∈ [(H−1−r)·res, (H−r)·res)`,
/// so world `y` grows upward while rows grow downward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    resolution: f64,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(
        width: usize,
        height: usize,
        resolution: f64,
        cells: Vec<bool>,
    ) -> Result<Self, SimError> {
        if width == 0 || height == 0 {
            return Err(SimError::InvalidGrid(format!(
                "grid must be non-empty, got {width}x{height}"
            )));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(SimError::InvalidGrid(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        if cells.len() != width * height {
            return Err(SimError::InvalidGrid(format!(
                "expected {} cells for {width}x{height}, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(Self {
            width,
            height,
            resolution,
            cells,
        })
    }

    /// An all-free grid.
    pub fn open(width: usize, height: usize, resolution: f64) -> Result<Self, SimError> {
        Self::new(width, height, resolution, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Row-major occupancy flags, `true` = occupied.
    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index(&self, cell: Cell) -> usize {
        cell.row * self.width + cell.col
    }

    pub fn cell_of_index(&self, index: usize) -> Cell {
        Cell::new(index / self.width, index % self.width)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row < self.height && cell.col < self.width
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.cells[self.index(cell)]
    }

    pub fn set_occupied(&mut self, cell: Cell, occupied: bool) {
        let i = self.index(cell);
        self.cells[i] = occupied;
    }

    pub fn free_count(&self) -> usize {
        self.cells.iter().filter(|&&c| !c).count()
    }

    pub fn extent(&self) -> (f64, f64) {
        (
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        )
    }

    pub fn in_bounds(&self, x: f64, y: f64) -> bool {
        let (w, h) = self.extent();
        x >= 0.0 && y >= 0.0 && x < w && y < h
    }

    /// World coordinates of a cell center.
    pub fn cell_center(&self, cell: Cell) -> (f64, f64) {
        let x = (cell.col as f64 + 0.5) * self.resolution;
        let y = ((self.height - 1 - cell.row) as f64 + 0.5) * self.resolution;
        (x, y)
    }

    /// The cell containing a world point, or `None` outside the map.
    pub fn cell_at(&self, x: f64, y: f64) -> Option<Cell> {
        if !self.in_bounds(x, y) {
            return None;
        }
        let col = ((x / self.resolution).floor() as usize).min(self.width - 1);
        let from_bottom = ((y / self.resolution).floor() as usize).min(self.height - 1);
        Some(Cell::new(self.height - 1 - from_bottom, col))
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &occ)| occ)
            .map(|(i, _)| self.cell_of_index(i))
    }

    /// True when some occupied cell center lies within `radius` of `(x, y)`.
    pub fn occupied_within(&self, x: f64, y: f64, radius: f64) -> bool {
        let res = self.resolution;
        let reach = (radius / res).ceil() as i64 + 1;
        let col0 = (x / res).floor() as i64;
        let row0 = self.height as i64 - 1 - (y / res).floor() as i64;
        let r2 = radius * radius;
        for row in (row0 - reach).max(0)..=(row0 + reach).min(self.height as i64 - 1) {
            for col in (col0 - reach).max(0)..=(col0 + reach).min(self.width as i64 - 1) {
                let cell = Cell::new(row as usize, col as usize);
                if !self.is_occupied(cell) {
                    continue;
                }
                let (cx, cy) = self.cell_center(cell);
                let (dx, dy) = (cx - x, cy - y);
                if dx * dx + dy * dy <= r2 {
                    return true;
                }
            }
        }
        false
    }

    /// Cells blocked for a disc of `radius` centred on each cell center.
    pub fn inflate(&self, radius: f64) -> Vec<bool> {
        (0..self.cells.len())
            .map(|i| {
                let (x, y) = self.cell_center(self.cell_of_index(i));
                self.occupied_within(x, y, radius.max(0.0))
            })
            .collect()
    }

    /// 8-neighbours of a cell that lie on the map, in `(row, col)` order.
    pub fn neighbors8(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        let (r, c) = (cell.row as i64, cell.col as i64);
        (-1i64..=1)
            .flat_map(move |dr| (-1i64..=1).map(move |dc| (dr, dc)))
            .filter(|&(dr, dc)| dr != 0 || dc != 0)
            .filter_map(move |(dr, dc)| {
                let (nr, nc) = (r + dr, c + dc);
                (nr >= 0 && nc >= 0 && (nr as usize) < self.height && (nc as usize) < self.width)
                    .then(|| Cell::new(nr as usize, nc as usize))
            })
    }
}
