//! Non-overlapping substructuring solver.
//!
//! Each subdomain owns the cells of its block. Its local matrix is assembled
//! cell by cell, every grid edge contributing half of its coupling to each of
//! the two cells it borders, so couplings along a cut line are split evenly
//! between the two closures sharing it and the local matrices sum back to the
//! monolithic operator. Internal unknowns appear in exactly one subdomain,
//! which makes the collection of internal blocks `A_II` block-diagonal; those
//! blocks are factored independently by banded LU. The assembled interface
//! problem `S u_G = g` is solved by Jacobi-preconditioned conjugate gradients.
//!
//! Per-subdomain work runs on a [`WorkerPool`]. Partial results are always
//! combined in subdomain order and all inner products are sequential over the
//! assembled interface vector, so solutions do not depend on the worker count.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{factor, BandedLu, BandedMatrix};
use crate::error::{Error, Result};
use crate::grid::{apply_operator, assemble_monolithic, GridSpec, NodeClassification, Partition};

const NOT_INTERFACE: usize = usize::MAX;

/// A fixed-size pool of worker threads shared by the per-subdomain kernels.
#[derive(Clone)]
pub struct WorkerPool {
    pool: Arc<rayon::ThreadPool>,
    workers: usize,
}

impl std::fmt::Debug for WorkerPool {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WorkerPool")
            .field("workers", &self.workers)
            .finish()
    }
}

impl WorkerPool {
    /// `workers = 0` selects the hardware parallelism.
    pub fn new(workers: usize) -> Result<Self> {
        let workers = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))?;
        Ok(Self {
            pool: Arc::new(pool),
            workers,
        })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    fn map_owned<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        self.pool.install(|| items.into_par_iter().map(f).collect())
    }
}

/// Sparse coupling `(row, col, value)` in local numbering.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Coupling {
    row: usize,
    col: usize,
    value: f64,
}

fn to_couplings(map: BTreeMap<(usize, usize), f64>) -> Vec<Coupling> {
    map.into_iter()
        .filter(|&(_, v)| v != 0.0)
        .map(|((row, col), value)| Coupling { row, col, value })
        .collect()
}

/// One subdomain's share of the derived system.
#[derive(Debug, Clone)]
struct LocalSystem {
    id: usize,
    /// Global node of each internal unknown, row-major within the block.
    internal: Vec<usize>,
    /// Global node of each closure interface unknown, increasing.
    interface: Vec<usize>,
    /// Assembled interface slot of each local interface unknown.
    slots: Vec<usize>,
    a_ii: Option<BandedMatrix>,
    /// `A_IG`: rows are internal, columns local interface indices.
    a_ig: Vec<Coupling>,
    /// `A_GG`: local interface by local interface.
    a_gg: Vec<Coupling>,
}

impl LocalSystem {
    fn gather(&self, x: &[f64]) -> Vec<f64> {
        self.slots.iter().map(|&s| x[s]).collect()
    }

    /// `A_IG x_G` as a vector over internal unknowns.
    fn couple_in(&self, xg: &[f64]) -> Vec<f64> {
        let mut t = vec![0.0; self.internal.len()];
        for c in &self.a_ig {
            t[c.row] += c.value * xg[c.col];
        }
        t
    }

    /// Adds `A_GI y_I` into `out` (local interface numbering).
    fn couple_out(&self, yi: &[f64], out: &mut [f64]) {
        for c in &self.a_ig {
            out[c.col] += c.value * yi[c.row];
        }
    }

    fn apply_gg(&self, xg: &[f64], out: &mut [f64]) {
        for c in &self.a_gg {
            out[c.row] += c.value * xg[c.col];
        }
    }
}

/// Block-diagonal derived system built from a partition.
#[derive(Debug, Clone)]
pub struct DerivedSystem {
    grid: GridSpec,
    partition: Partition,
    locals: Vec<LocalSystem>,
    interface: Vec<usize>,
    /// Assembled diagonal of `A_GG`, the Jacobi preconditioner.
    interface_diagonal: Vec<f64>,
}

pub fn decompose(
    grid: &GridSpec,
    partition: &Partition,
    classification: &NodeClassification,
) -> DerivedSystem {
    let mut slot_of = vec![NOT_INTERFACE; grid.n()];
    for (s, &node) in classification.interface.iter().enumerate() {
        slot_of[node] = s;
    }

    let locals: Vec<LocalSystem> = (0..partition.count())
        .map(|id| build_local(grid, partition, classification, &slot_of, id))
        .collect();

    let mut interface_diagonal = vec![0.0; classification.interface.len()];
    for local in &locals {
        for c in local.a_gg.iter().filter(|c| c.row == c.col) {
            interface_diagonal[local.slots[c.row]] += c.value;
        }
    }

    DerivedSystem {
        grid: *grid,
        partition: partition.clone(),
        locals,
        interface: classification.interface.clone(),
        interface_diagonal,
    }
}

enum Local {
    Internal(usize),
    Interface(usize),
    Dirichlet,
}

fn build_local(
    grid: &GridSpec,
    partition: &Partition,
    classification: &NodeClassification,
    slot_of: &[usize],
    id: usize,
) -> LocalSystem {
    let block = partition.block(id);
    let nodes = &classification.subdomains[id];
    let width = block.internal_width();
    let n_int = nodes.internal.len();
    debug_assert_eq!(n_int, block.internal_count());

    // position (x, y) -> local role
    let classify = |x: usize, y: usize| -> Local {
        if x == 0 || y == 0 || x > grid.nx || y > grid.ny {
            Local::Dirichlet
        } else if x > block.x0 && x < block.x1 && y > block.y0 && y < block.y1 {
            Local::Internal((y - block.y0 - 1) * width + (x - block.x0 - 1))
        } else {
            let node = grid.index(x - 1, y - 1);
            Local::Interface(
                nodes
                    .interface
                    .binary_search(&node)
                    .expect("closure node on block boundary is an interface node"),
            )
        }
    };

    let mut a_ii = (n_int > 0).then(|| {
        let b = width.min(n_int - 1);
        BandedMatrix::zeros(n_int, b, b).expect("non-empty internal block")
    });
    let mut a_ig = BTreeMap::new();
    let mut a_gg = BTreeMap::new();

    let mut add = |p: &Local, q: &Local, v: f64| match (p, q) {
        (Local::Internal(i), Local::Internal(j)) => {
            a_ii.as_mut().expect("internal block").add(*i, *j, v)
        }
        (Local::Internal(i), Local::Interface(g)) => *a_ig.entry((*i, *g)).or_insert(0.0) += v,
        (Local::Interface(g), Local::Interface(h)) => *a_gg.entry((*g, *h)).or_insert(0.0) += v,
        // A_GI is stored once, as the transpose of A_IG
        _ => {}
    };

    for cy in block.y0..block.y1 {
        for cx in block.x0..block.x1 {
            let edges = [
                ((cx, cy), (cx + 1, cy)),
                ((cx, cy + 1), (cx + 1, cy + 1)),
                ((cx, cy), (cx, cy + 1)),
                ((cx + 1, cy), (cx + 1, cy + 1)),
            ];
            for ((px, py), (qx, qy)) in edges {
                let (p, q) = (classify(px, py), classify(qx, qy));
                let p_known = !matches!(p, Local::Dirichlet);
                let q_known = !matches!(q, Local::Dirichlet);
                if p_known {
                    add(&p, &p, 0.5);
                }
                if q_known {
                    add(&q, &q, 0.5);
                }
                if p_known && q_known {
                    add(&p, &q, -0.5);
                    add(&q, &p, -0.5);
                }
            }
        }
    }

    LocalSystem {
        id,
        internal: nodes.internal.clone(),
        interface: nodes.interface.clone(),
        slots: nodes.interface.iter().map(|&k| slot_of[k]).collect(),
        a_ii,
        a_ig: to_couplings(a_ig),
        a_gg: to_couplings(a_gg),
    }
}

impl DerivedSystem {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn subdomain_count(&self) -> usize {
        self.locals.len()
    }

    pub fn interface_dim(&self) -> usize {
        self.interface.len()
    }

    /// Internal block `A_II` of subdomain `id`, if it has internal nodes.
    pub fn internal_block(&self, id: usize) -> Option<&BandedMatrix> {
        self.locals[id].a_ii.as_ref()
    }

    /// The local matrix of subdomain `id` over its closure nodes, densely, with
    /// the closure listed internal nodes first, then interface nodes.
    pub fn local_dense(&self, id: usize) -> (Vec<usize>, Vec<Vec<f64>>) {
        let loc = &self.locals[id];
        let ni = loc.internal.len();
        let nodes: Vec<usize> = loc.internal.iter().chain(&loc.interface).copied().collect();
        let m = nodes.len();
        let mut a = vec![vec![0.0; m]; m];
        if let Some(aii) = &loc.a_ii {
            for (i, row) in aii.to_dense().into_iter().enumerate() {
                a[i][..ni].copy_from_slice(&row);
            }
        }
        for c in &loc.a_ig {
            a[c.row][ni + c.col] += c.value;
            a[ni + c.col][c.row] += c.value;
        }
        for c in &loc.a_gg {
            a[ni + c.row][ni + c.col] += c.value;
        }
        (nodes, a)
    }

    /// Dense `sum_a R_a^T A(a) R_a`; equals the monolithic operator.
    pub fn reconstruct_dense(&self) -> Vec<Vec<f64>> {
        let n = self.grid.n();
        let mut out = vec![vec![0.0; n]; n];
        for id in 0..self.locals.len() {
            let (nodes, a) = self.local_dense(id);
            for (r, &gr) in nodes.iter().enumerate() {
                for (c, &gc) in nodes.iter().enumerate() {
                    out[gr][gc] += a[r][c];
                }
            }
        }
        out
    }

    /// Factors every internal block on `pool`.
    pub fn factor_internals(self, pool: &WorkerPool) -> Result<FactoredSystem> {
        let DerivedSystem {
            grid,
            partition,
            locals,
            interface,
            interface_diagonal,
        } = self;
        let results = pool.map_owned(locals, |mut local| {
            let lu = match local.a_ii.take() {
                Some(a) => Some(factor(a).map_err(|e| Error::Subdomain {
                    subdomain: local.id,
                    source: Box::new(e),
                })?),
                None => None,
            };
            Ok(FactoredLocal { local, lu })
        });
        let locals = results.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(FactoredSystem {
            grid,
            partition,
            locals,
            interface,
            inv_diagonal: interface_diagonal.iter().map(|d| 1.0 / d).collect(),
            pool: pool.clone(),
        })
    }
}

#[derive(Debug, Clone)]
struct FactoredLocal {
    local: LocalSystem,
    lu: Option<BandedLu>,
}

impl FactoredLocal {
    fn solve_internal(&self, rhs: &mut [f64]) {
        if let Some(lu) = &self.lu {
            lu.solve_in_place(rhs).expect("internal vector has the block size");
        }
    }

    /// Local Schur product `A_GG x - A_GI A_II^{-1} A_IG x`.
    fn schur(&self, xg: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; xg.len()];
        self.local.apply_gg(xg, &mut y);
        if self.lu.is_some() && !self.local.a_ig.is_empty() {
            let mut t = self.local.couple_in(xg);
            self.solve_internal(&mut t);
            let mut corr = vec![0.0; xg.len()];
            self.local.couple_out(&t, &mut corr);
            for (yi, ci) in y.iter_mut().zip(&corr) {
                *yi -= ci;
            }
        }
        y
    }
}

/// Statistics of one interface solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CgStats {
    pub iterations: usize,
    /// `||r_k|| / ||f||` after each iteration, starting with the initial residual.
    pub history: Vec<f64>,
}

/// Derived system with every internal block factored.
#[derive(Debug, Clone)]
pub struct FactoredSystem {
    grid: GridSpec,
    partition: Partition,
    locals: Vec<FactoredLocal>,
    interface: Vec<usize>,
    inv_diagonal: Vec<f64>,
    pool: WorkerPool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl FactoredSystem {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn interface_dim(&self) -> usize {
        self.interface.len()
    }

    pub fn interface_nodes(&self) -> &[usize] {
        &self.interface
    }

    pub fn workers(&self) -> usize {
        self.pool.workers()
    }

    /// Number of subdomains whose internal block was factored.
    pub fn factorization_count(&self) -> usize {
        self.locals.iter().filter(|l| l.lu.is_some()).count()
    }

    /// Flops recorded by all internal factorizations.
    pub fn factor_flops(&self) -> u64 {
        self.locals
            .iter()
            .filter_map(|l| l.lu.as_ref())
            .map(BandedLu::flop_count)
            .sum()
    }

    /// Default iteration cap `10 sqrt(dim) + 100`.
    pub fn default_max_iterations(&self) -> usize {
        (10.0 * (self.interface.len() as f64).sqrt()) as usize + 100
    }

    fn scatter_add(&self, parts: Vec<Vec<f64>>, out: &mut [f64]) {
        for (loc, part) in self.locals.iter().zip(parts) {
            for (&s, v) in loc.local.slots.iter().zip(part) {
                out[s] += v;
            }
        }
    }

    /// Applies the assembled Schur complement to an interface vector.
    pub fn schur_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.interface.len() {
            return Err(Error::DimensionMismatch {
                expected: self.interface.len(),
                got: x.len(),
            });
        }
        Ok(self.schur_unchecked(x))
    }

    fn schur_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let parts = self
            .pool
            .map(&self.locals, |loc| loc.schur(&loc.local.gather(x)));
        let mut out = vec![0.0; x.len()];
        self.scatter_add(parts, &mut out);
        out
    }

    /// Condensed right-hand side `g = f_G - sum_a R^T A_GI A_II^{-1} f_I`.
    pub fn interface_rhs(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_load(f)?;
        Ok(self.interface_rhs_unchecked(f))
    }

    fn interface_rhs_unchecked(&self, f: &[f64]) -> Vec<f64> {
        let parts = self.pool.map(&self.locals, |loc| {
            let mut z: Vec<f64> = loc.local.internal.iter().map(|&k| f[k]).collect();
            loc.solve_internal(&mut z);
            let mut y = vec![0.0; loc.local.interface.len()];
            loc.local.couple_out(&z, &mut y);
            y.iter_mut().for_each(|v| *v = -*v);
            y
        });
        let mut g: Vec<f64> = self.interface.iter().map(|&k| f[k]).collect();
        self.scatter_add(parts, &mut g);
        g
    }

    fn check_load(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.grid.n() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.n(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// Recovers every internal unknown from the interface solution.
    fn back_substitute(&self, f: &[f64], xg: &[f64]) -> Vec<f64> {
        let parts = self.pool.map(&self.locals, |loc| {
            let mut rhs: Vec<f64> = loc.local.internal.iter().map(|&k| f[k]).collect();
            let t = loc.local.couple_in(&loc.local.gather(xg));
            for (r, ti) in rhs.iter_mut().zip(&t) {
                *r -= ti;
            }
            loc.solve_internal(&mut rhs);
            rhs
        });
        let mut u = vec![0.0; self.grid.n()];
        for (&k, &v) in self.interface.iter().zip(xg) {
            u[k] = v;
        }
        for (loc, part) in self.locals.iter().zip(parts) {
            for (&k, v) in loc.local.internal.iter().zip(part) {
                u[k] = v;
            }
        }
        u
    }

    pub fn solve(&self, f: &[f64], tol: f64) -> Result<(Vec<f64>, CgStats)> {
        self.solve_observed(f, tol, None, |_, _| {})
    }

    /// Solves `A u = f` to `||A u - f|| <= tol ||f||`; `observer` sees the
    /// interface iterate after every CG step.
    pub fn solve_observed(
        &self,
        f: &[f64],
        tol: f64,
        max_iterations: Option<usize>,
        mut observer: impl FnMut(usize, &[f64]),
    ) -> Result<(Vec<f64>, CgStats)> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        self.check_load(f)?;
        let f_norm = norm(f);
        if f_norm == 0.0 {
            return Ok((
                vec![0.0; f.len()],
                CgStats {
                    iterations: 0,
                    history: vec![0.0],
                },
            ));
        }
        let max_iterations = max_iterations.unwrap_or_else(|| self.default_max_iterations());
        let target = tol * f_norm;

        let g = self.interface_rhs_unchecked(f);
        let dim = g.len();
        let mut x = vec![0.0; dim];
        let mut r = g.clone();
        let mut history = vec![norm(&r) / f_norm];
        let mut iterations = 0;

        'outer: while dim > 0 {
            let mut z: Vec<f64> = r.iter().zip(&self.inv_diagonal).map(|(a, b)| a * b).collect();
            let mut p = z.clone();
            let mut rz = dot(&r, &z);
            loop {
                if norm(&r) <= target {
                    // confirm against the true residual before stopping
                    let sx = self.schur_unchecked(&x);
                    let true_r: Vec<f64> = g.iter().zip(&sx).map(|(a, b)| a - b).collect();
                    if norm(&true_r) <= target {
                        break 'outer;
                    }
                    r = true_r;
                    continue 'outer;
                }
                if iterations >= max_iterations {
                    return Err(Error::NotConverged {
                        iterations,
                        history,
                    });
                }
                let q = self.schur_unchecked(&p);
                let alpha = rz / dot(&p, &q);
                for i in 0..dim {
                    x[i] += alpha * p[i];
                    r[i] -= alpha * q[i];
                }
                iterations += 1;
                history.push(norm(&r) / f_norm);
                observer(iterations, &x);

                for (zi, (ri, di)) in z.iter_mut().zip(r.iter().zip(&self.inv_diagonal)) {
                    *zi = ri * di;
                }
                let rz_next = dot(&r, &z);
                let beta = rz_next / rz;
                rz = rz_next;
                for (pi, zi) in p.iter_mut().zip(&z) {
                    *pi = zi + beta * *pi;
                }
            }
        }

        let u = self.back_substitute(f, &x);
        Ok((u, CgStats {
            iterations,
            history,
        }))
    }

    /// `||A u - f|| / ||f||` for the monolithic operator.
    pub fn relative_residual(&self, u: &[f64], f: &[f64]) -> f64 {
        relative_residual(&self.grid, u, f)
    }
}

fn relative_residual(grid: &GridSpec, u: &[f64], f: &[f64]) -> f64 {
    let au = apply_operator(grid, u);
    let r: Vec<f64> = au.iter().zip(f).map(|(a, b)| a - b).collect();
    let fn_ = norm(f);
    if fn_ == 0.0 {
        norm(&r)
    } else {
        norm(&r) / fn_
    }
}

/// Timings and convergence data of one solve. Grid construction and
/// decomposition are not timed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_relative_residual: f64,
    pub factor_seconds: f64,
    pub iterate_seconds: f64,
    pub total_seconds: f64,
    pub p_logical: usize,
    pub workers: usize,
    pub factor_flops: u64,
    pub residual_history: Vec<f64>,
}

/// Factors the internal blocks, solves the interface problem and
/// back-substitutes. The timed region starts at factorization.
pub fn solve_dd(
    ds: DerivedSystem,
    f: &[f64],
    tol: f64,
    pool: &WorkerPool,
) -> Result<(Vec<f64>, SolveReport)> {
    if f.len() != ds.grid.n() {
        return Err(Error::DimensionMismatch {
            expected: ds.grid.n(),
            got: f.len(),
        });
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let p_logical = ds.subdomain_count();
    let start = Instant::now();
    let fs = ds.factor_internals(pool)?;
    let factor_seconds = start.elapsed().as_secs_f64();
    let iterate_start = Instant::now();
    let (u, stats) = fs.solve(f, tol)?;
    let iterate_seconds = iterate_start.elapsed().as_secs_f64();
    let total_seconds = start.elapsed().as_secs_f64();

    let report = SolveReport {
        iterations: stats.iterations,
        final_relative_residual: fs.relative_residual(&u, f),
        factor_seconds,
        iterate_seconds,
        total_seconds,
        p_logical,
        workers: pool.workers(),
        factor_flops: fs.factor_flops(),
        residual_history: stats.history,
    };
    Ok((u, report))
}

/// Direct banded LU solve of the whole grid on one thread.
pub fn solve_monolithic(grid: &GridSpec, f: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
    if f.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: f.len(),
        });
    }
    let a = assemble_monolithic(grid);
    let start = Instant::now();
    let lu = factor(a)?;
    let factor_seconds = start.elapsed().as_secs_f64();
    let solve_start = Instant::now();
    let u = lu.solve(f)?;
    let iterate_seconds = solve_start.elapsed().as_secs_f64();
    let total_seconds = start.elapsed().as_secs_f64();
    let residual = relative_residual(grid, &u, f);
    Ok((
        u,
        SolveReport {
            iterations: 0,
            final_relative_residual: residual,
            factor_seconds,
            iterate_seconds,
            total_seconds,
            p_logical: 1,
            workers: 1,
            factor_flops: lu.flop_count(),
            residual_history: Vec::new(),
        },
    ))
}

/// Solves the Dirichlet problem on the internal nodes of one subdomain
/// sequentially: the `T(1, n/p)` measurement. `f_local` is ordered row-major
/// over the subdomain's internal block.
pub fn solve_single_local(
    grid: &GridSpec,
    partition: &Partition,
    subdomain: usize,
    f_local: &[f64],
) -> Result<(Vec<f64>, SolveReport)> {
    if subdomain >= partition.count() {
        return Err(Error::NoSuchSubdomain {
            id: subdomain,
            count: partition.count(),
        });
    }
    match partition.local_grid(grid, subdomain) {
        Some((local, _)) => solve_monolithic(&local, f_local),
        None if f_local.is_empty() => Ok((
            Vec::new(),
            SolveReport {
                iterations: 0,
                final_relative_residual: 0.0,
                factor_seconds: 0.0,
                iterate_seconds: 0.0,
                total_seconds: 0.0,
                p_logical: 1,
                workers: 1,
                factor_flops: 0,
                residual_history: Vec::new(),
            },
        )),
        None => Err(Error::DimensionMismatch {
            expected: 0,
            got: f_local.len(),
        }),
    }
}

/// Restricts a global load to the internal block of subdomain `id`, in the
/// ordering expected by [`solve_single_local`].
pub fn restrict_to_internal(grid: &GridSpec, partition: &Partition, id: usize, f: &[f64]) -> Vec<f64> {
    let b = partition.block(id);
    let mut out = Vec::with_capacity(b.internal_count());
    for y in b.y0 + 1..b.y1 {
        for x in b.x0 + 1..b.x1 {
            out.push(f[grid.index(x - 1, y - 1)]);
        }
    }
    out
}
