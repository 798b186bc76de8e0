//! Uniform cell-centred grid with ghost layers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ConservedState;

/// Minimum ghost depth: one neighbour for the slope plus one cell whose face
/// state feeds the first interior interface.
pub const MIN_GHOST: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryKind {
    /// Zeroth-order extrapolation of the edge cell.
    #[default]
    Outflow,
    Periodic,
}

impl FromStr for BoundaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outflow" => Ok(Self::Outflow),
            "periodic" => Ok(Self::Periodic),
            other => Err(Error::InvalidGrid(format!("unknown boundary kind `{other}`"))),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Outflow => "outflow",
            Self::Periodic => "periodic",
        })
    }
}

/// Fills the `n_ghost` layers on each side of `data` from its interior.
pub fn fill_ghosts<T: Copy>(data: &mut [T], n_ghost: usize, bc: BoundaryKind) {
    let n_cell = data.len() - 2 * n_ghost;
    match bc {
        BoundaryKind::Outflow => {
            let (lo, hi) = (data[n_ghost], data[n_ghost + n_cell - 1]);
            data[..n_ghost].fill(lo);
            data[n_ghost + n_cell..].fill(hi);
        }
        BoundaryKind::Periodic => {
            for j in 0..n_ghost {
                data[j] = data[n_ghost + (n_cell + j - n_ghost % n_cell) % n_cell];
                data[n_ghost + n_cell + j] = data[n_ghost + j % n_cell];
            }
        }
    }
}

/// Conserved state on `[x_min, x_max]` split into `n_cell` equal cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n_cell: usize,
    n_ghost: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    data: Vec<ConservedState>,
}

impl GridField {
    pub fn new(n_cell: usize, n_ghost: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_cell == 0 {
            return Err(Error::InvalidGrid("need at least one cell".into()));
        }
        if n_ghost < MIN_GHOST {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_GHOST} ghost layers, got {n_ghost}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidGrid(format!("bad domain [{x_min}, {x_max}]")));
        }
        Ok(Self {
            n_cell,
            n_ghost,
            x_min,
            x_max,
            dx: (x_max - x_min) / n_cell as f64,
            data: vec![ConservedState::ZERO; n_cell + 2 * n_ghost],
        })
    }

    /// Grid whose interior cell `i` holds `init(x_i)` at its centre.
    pub fn from_fn(
        n_cell: usize,
        n_ghost: usize,
        x_min: f64,
        x_max: f64,
        mut init: impl FnMut(f64) -> ConservedState,
    ) -> Result<Self> {
        let mut g = Self::new(n_cell, n_ghost, x_min, x_max)?;
        for i in 0..n_cell {
            let x = g.cell_center(i);
            g.data[n_ghost + i] = init(x);
        }
        Ok(g)
    }

    pub fn n_cell(&self) -> usize {
        self.n_cell
    }

    pub fn n_ghost(&self) -> usize {
        self.n_ghost
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cell).map(|i| self.cell_center(i))
    }

    /// Whole storage, ghosts included.
    pub fn data(&self) -> &[ConservedState] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [ConservedState] {
        &mut self.data
    }

    pub fn interior(&self) -> &[ConservedState] {
        &self.data[self.n_ghost..self.n_ghost + self.n_cell]
    }

    pub fn interior_mut(&mut self) -> &mut [ConservedState] {
        let (g, n) = (self.n_ghost, self.n_cell);
        &mut self.data[g..g + n]
    }

    pub fn fill_boundary(&mut self, bc: BoundaryKind) {
        fill_ghosts(&mut self.data, self.n_ghost, bc);
    }

    /// Same grid geometry carrying `cells` as its interior.
    pub fn with_interior(&self, cells: &[ConservedState]) -> Result<Self> {
        if cells.len() != self.n_cell {
            return Err(Error::LengthMismatch {
                expected: self.n_cell,
                got: cells.len(),
            });
        }
        let mut g = self.clone();
        g.interior_mut().copy_from_slice(cells);
        Ok(g)
    }
}
