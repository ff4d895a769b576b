//! Structured grid, 5-point Laplace operator and the non-overlapping coarse
//! partition.
//!
//! Node positions run from `0` to `nx + 1` in x (likewise in y). Positions `0`
//! and `nx + 1` carry Dirichlet data; the unknowns sit at positions
//! `1..=nx` and are numbered row-major, `index(i, j) = j * nx + i` with
//! `i = position - 1`. The `nx + 1` cells between consecutive positions are
//! what the partition splits, so cut lines always pass through node lines.

use serde::{Deserialize, Serialize};

use crate::band::BandedMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

pub fn build_grid(nx: usize, ny: usize) -> Result<GridSpec> {
    GridSpec::new(nx, ny, 1.0)
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, h: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid { nx, ny });
        }
        Ok(Self { nx, ny, h })
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node % self.nx, node / self.nx)
    }

    /// Semi-bandwidth of the row-major 5-point operator.
    pub fn semi_bandwidth(&self) -> usize {
        self.nx.min(self.n() - 1)
    }

    /// Physical coordinates of node `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        ((i + 1) as f64 * self.h, (j + 1) as f64 * self.h)
    }

    /// Samples `u` at every unknown.
    pub fn sample(&self, u: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.n())
            .map(|k| {
                let (i, j) = self.coords(k);
                let (x, y) = self.point(i, j);
                u(x, y)
            })
            .collect()
    }

    /// Load vector produced by moving Dirichlet data `g` to the right-hand side.
    pub fn boundary_lift(&self, g: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let h = self.h;
        let mut f = vec![0.0; self.n()];
        for j in 0..self.ny {
            let y = (j + 1) as f64 * h;
            f[self.index(0, j)] += g(0.0, y);
            f[self.index(self.nx - 1, j)] += g((self.nx + 1) as f64 * h, y);
        }
        for i in 0..self.nx {
            let x = (i + 1) as f64 * h;
            f[self.index(i, 0)] += g(x, 0.0);
            f[self.index(i, self.ny - 1)] += g(x, (self.ny + 1) as f64 * h);
        }
        f
    }
}

/// The 5-point operator with unit scaling: 4 on the diagonal, -1 per interior
/// neighbour; couplings to Dirichlet nodes are dropped.
pub fn assemble_monolithic(grid: &GridSpec) -> BandedMatrix {
    let b = grid.semi_bandwidth();
    let mut a = BandedMatrix::zeros(grid.n(), b, b).expect("grid has at least one node");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let k = grid.index(i, j);
            a.set(k, k, 4.0);
            if i + 1 < grid.nx {
                a.set(k, k + 1, -1.0);
                a.set(k + 1, k, -1.0);
            }
            if j + 1 < grid.ny {
                a.set(k, k + grid.nx, -1.0);
                a.set(k + grid.nx, k, -1.0);
            }
        }
    }
    a
}

/// Matrix-free product with the operator of [`assemble_monolithic`].
pub fn apply_operator(grid: &GridSpec, u: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = vec![0.0; grid.n()];
    for j in 0..ny {
        for i in 0..nx {
            let k = grid.index(i, j);
            let mut v = 4.0 * u[k];
            if i > 0 {
                v -= u[k - 1];
            }
            if i + 1 < nx {
                v -= u[k + 1];
            }
            if j > 0 {
                v -= u[k - nx];
            }
            if j + 1 < ny {
                v -= u[k + nx];
            }
            out[k] = v;
        }
    }
    out
}

/// A `px` x `py` split of the grid cells into near-equal rectangular blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub px: usize,
    pub py: usize,
    /// Block boundaries in node positions; `x_bounds[0] = 0`, `x_bounds[px] = nx + 1`.
    x_bounds: Vec<usize>,
    y_bounds: Vec<usize>,
}

/// The node-position rectangle `[x0, x1] x [y0, y1]` covered by one subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl Block {
    /// Internal nodes per row (those strictly inside the block).
    pub fn internal_width(&self) -> usize {
        self.x1 - self.x0 - 1
    }

    pub fn internal_height(&self) -> usize {
        self.y1 - self.y0 - 1
    }

    pub fn internal_count(&self) -> usize {
        self.internal_width() * self.internal_height()
    }
}

fn split_cells(cells: usize, parts: usize) -> Vec<usize> {
    let (base, rem) = (cells / parts, cells % parts);
    let mut bounds = Vec::with_capacity(parts + 1);
    bounds.push(0);
    for k in 0..parts {
        let size = base + usize::from(k < rem);
        bounds.push(bounds[k] + size);
    }
    bounds
}

pub fn make_partition(grid: &GridSpec, px: usize, py: usize) -> Result<Partition> {
    let (cells_x, cells_y) = (grid.nx + 1, grid.ny + 1);
    if px == 0 || py == 0 || px > cells_x || py > cells_y {
        return Err(Error::InvalidPartition {
            px,
            py,
            cells_x,
            cells_y,
        });
    }
    Ok(Partition {
        px,
        py,
        x_bounds: split_cells(cells_x, px),
        y_bounds: split_cells(cells_y, py),
    })
}

impl Partition {
    pub fn count(&self) -> usize {
        self.px * self.py
    }

    pub fn id(&self, a: usize, b: usize) -> usize {
        b * self.px + a
    }

    /// Grid x-indices of the vertical cut lines.
    pub fn x_cuts(&self) -> Vec<usize> {
        self.x_bounds[1..self.px].iter().map(|&x| x - 1).collect()
    }

    pub fn y_cuts(&self) -> Vec<usize> {
        self.y_bounds[1..self.py].iter().map(|&y| y - 1).collect()
    }

    pub fn block(&self, id: usize) -> Block {
        let (a, b) = (id % self.px, id / self.px);
        Block {
            x0: self.x_bounds[a],
            x1: self.x_bounds[a + 1],
            y0: self.y_bounds[b],
            y1: self.y_bounds[b + 1],
        }
    }

    /// Subdomain owning the cell whose lower-left corner is at position `(cx, cy)`.
    pub fn subdomain_of_cell(&self, cx: usize, cy: usize) -> usize {
        let find = |bounds: &[usize], c: usize| bounds.partition_point(|&b| b <= c) - 1;
        self.id(find(&self.x_bounds, cx), find(&self.y_bounds, cy))
    }

    /// The subdomain containing the centre cell of the grid.
    pub fn center_subdomain(&self) -> usize {
        let cx = self.x_bounds[self.px] / 2;
        let cy = self.y_bounds[self.py] / 2;
        self.subdomain_of_cell(cx, cy)
    }

    /// The block of internal nodes of subdomain `id`, viewed as a grid of its own
    /// together with the grid indices of its lower-left node. `None` when the
    /// subdomain has no internal nodes.
    pub fn local_grid(&self, grid: &GridSpec, id: usize) -> Option<(GridSpec, (usize, usize))> {
        let b = self.block(id);
        let (w, h) = (b.internal_width(), b.internal_height());
        if w == 0 || h == 0 {
            return None;
        }
        let local = GridSpec::new(w, h, grid.h).ok()?;
        Some((local, (b.x0, b.y0)))
    }

    /// Closure nodes of subdomain `id` (unknowns only), in global row-major order.
    pub fn closure_nodes(&self, grid: &GridSpec, id: usize) -> Vec<usize> {
        let b = self.block(id);
        let xs = b.x0.max(1)..=b.x1.min(grid.nx);
        let ys = b.y0.max(1)..=b.y1.min(grid.ny);
        let mut out = Vec::new();
        for y in ys {
            for x in xs.clone() {
                out.push(grid.index(x - 1, y - 1));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedNode {
    pub original_node: usize,
    pub subdomain: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SubdomainNodes {
    pub internal: Vec<usize>,
    pub interface: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeClassification {
    pub multiplicity: Vec<u8>,
    pub subdomains: Vec<SubdomainNodes>,
    /// Global interface nodes (multiplicity >= 2) in increasing order.
    pub interface: Vec<usize>,
}

pub fn classify_nodes(grid: &GridSpec, partition: &Partition) -> NodeClassification {
    let mut multiplicity = vec![0u8; grid.n()];
    let closures: Vec<Vec<usize>> = (0..partition.count())
        .map(|id| partition.closure_nodes(grid, id))
        .collect();
    for closure in &closures {
        for &node in closure {
            multiplicity[node] += 1;
        }
    }
    let subdomains = closures
        .into_iter()
        .map(|closure| {
            let (internal, interface) = closure.into_iter().partition(|&k| multiplicity[k] == 1);
            SubdomainNodes {
                internal,
                interface,
            }
        })
        .collect();
    let interface = (0..grid.n()).filter(|&k| multiplicity[k] >= 2).collect();
    NodeClassification {
        multiplicity,
        subdomains,
        interface,
    }
}

impl NodeClassification {
    /// Number of (node, subdomain) pairs, i.e. the sum of all multiplicities.
    pub fn derived_node_count(&self) -> usize {
        self.multiplicity.iter().map(|&m| m as usize).sum()
    }

    pub fn derived_nodes(&self) -> Vec<DerivedNode> {
        let mut out = Vec::with_capacity(self.derived_node_count());
        for (subdomain, nodes) in self.subdomains.iter().enumerate() {
            for &original_node in nodes.internal.iter().chain(&nodes.interface) {
                out.push(DerivedNode {
                    original_node,
                    subdomain,
                });
            }
        }
        out.sort_by_key(|d| (d.original_node, d.subdomain));
        out
    }
}
