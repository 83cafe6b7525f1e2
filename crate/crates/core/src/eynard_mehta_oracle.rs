//! Brute-force discrete L-ensembles: Fredholm expansion, projected kernels,
//! the block kernel for products of transition determinants, and a
//! discretized space-like path with virtual particles whose kernel can be
//! compared against the analytic ones.

use crate::correlation::{determinant, subsets};
use crate::error::{Error, Result};
use crate::minor_kernels::SpaceTimePoint;
use crate::special_functions::{hermite_eval, transition_density, ScaleAlgebra};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub const FREDHOLM_MAX_SIZE: usize = 12;
pub const MAX_DIMENSION: usize = 2000;
pub const DEFAULT_VIRTUAL_POSITION: f64 = -8.0;
/// Condition numbers above this are reported as a conditioning failure.
pub const CONDITION_LIMIT: f64 = 1e14;

fn principal_minor(m: &DMatrix<f64>, idx: &[usize]) -> f64 {
    let k = idx.len();
    let mut s = vec![0.0; k * k];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            s[a * k + b] = m[(i, j)];
        }
    }
    determinant(&s, k)
}

/// det(I + M) and Σ_X det M_X over all index subsets.
pub fn fredholm_expansion_check(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::domain("M", "matrix must be square"));
    }
    if n > FREDHOLM_MAX_SIZE {
        return Err(Error::domain(
            "M",
            format!("subset enumeration is limited to size {FREDHOLM_MAX_SIZE}, got {n}"),
        ));
    }
    let shifted = DMatrix::identity(n, n) + m;
    let lhs = shifted.determinant();
    let mut rhs = 0.0;
    for k in 0..=n {
        for s in subsets(n, k) {
            rhs += principal_minor(m, &s);
        }
    }
    Ok((lhs, rhs))
}

/// Inverse together with the 1-norm condition estimate ‖A‖₁‖A⁻¹‖₁.
fn inverse_checked(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let norm1 = |m: &DMatrix<f64>| {
        m.column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let inv = match a.clone().lu().try_inverse() {
        Some(inv) => inv,
        None => {
            return Err(Error::Conditioning {
                condition: f64::INFINITY,
            })
        }
    };
    let cond = norm1(a) * norm1(&inv);
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::Conditioning { condition: cond });
    }
    Ok((inv, cond))
}

/// K* = 1_(N) − (1_(N) + L)⁻¹ restricted to N, where 1_(N) is the identity on
/// the retained indices only. Rows and columns follow the order of `retained`.
pub fn projected_kernel(l: &DMatrix<f64>, retained: &[usize]) -> Result<DMatrix<f64>> {
    Ok(projected_kernel_with_condition(l, retained)?.0)
}

fn projected_kernel_with_condition(
    l: &DMatrix<f64>,
    retained: &[usize],
) -> Result<(DMatrix<f64>, f64)> {
    let n = l.nrows();
    if l.ncols() != n {
        return Err(Error::domain("L", "matrix must be square"));
    }
    let mut seen = vec![false; n];
    for &i in retained {
        if i >= n || seen[i] {
            return Err(Error::domain(
                "retained",
                "indices must be distinct and in range",
            ));
        }
        seen[i] = true;
    }
    let mut a = l.clone();
    for &i in retained {
        a[(i, i)] += 1.0;
    }
    let (inv, cond) = inverse_checked(&a)?;
    let k = retained.len();
    let mut out = DMatrix::zeros(k, k);
    for (r, &i) in retained.iter().enumerate() {
        for (c, &j) in retained.iter().enumerate() {
            out[(r, c)] = if i == j { 1.0 } else { 0.0 } - inv[(i, j)];
        }
    }
    Ok((out, cond))
}

/// Probability under the L-measure of the configuration `x` (a subset of all
/// indices), det L_X / det(1 + L).
pub fn l_measure(l: &DMatrix<f64>, x: &[usize]) -> f64 {
    let n = l.nrows();
    principal_minor(l, x) / (DMatrix::identity(n, n) + l).determinant()
}

/// Block inverse of [[A, B], [C, D]] through M = B D⁻¹ C − A.
pub fn block_inverse(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let p = a.nrows();
    let q = d.nrows();
    if a.ncols() != p || d.ncols() != q || b.shape() != (p, q) || c.shape() != (q, p) {
        return Err(Error::domain("blocks", "blocks are not conformable"));
    }
    let (d_inv, _) = inverse_checked(d)?;
    let m = b * &d_inv * c - a;
    let (m_inv, _) = inverse_checked(&m)?;
    let bd = b * &d_inv;
    let dc = &d_inv * c;
    let mut out = DMatrix::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(&(-&m_inv));
    out.view_mut((0, p), (p, q)).copy_from(&(&m_inv * &bd));
    out.view_mut((p, 0), (q, p)).copy_from(&(&dc * &m_inv));
    out.view_mut((p, p), (q, q))
        .copy_from(&(&d_inv - &dc * &m_inv * &bd));
    Ok(out)
}

/// W_n ⋯ W_{m-1}; the empty product (n = m) is the identity.
fn chain(ws: &[DMatrix<f64>], sizes: &[usize], n: usize, m: usize) -> DMatrix<f64> {
    let mut acc = DMatrix::identity(sizes[n], sizes[n]);
    for w in &ws[n..m] {
        acc *= w;
    }
    acc
}

/// W_{[n,m)}: the product for n < m and the zero block otherwise.
pub fn transfer_range(ws: &[DMatrix<f64>], sizes: &[usize], n: usize, m: usize) -> DMatrix<f64> {
    if n >= m {
        DMatrix::zeros(sizes[n], sizes[m])
    } else {
        chain(ws, sizes, n, m)
    }
}

fn level_sizes(phi: &DMatrix<f64>, ws: &[DMatrix<f64>], psi: &DMatrix<f64>) -> Result<Vec<usize>> {
    let p = phi.nrows();
    if psi.ncols() != p {
        return Err(Error::domain(
            "psi",
            "Ψ must have as many columns as Φ has rows",
        ));
    }
    let mut sizes = vec![phi.ncols()];
    for (i, w) in ws.iter().enumerate() {
        if w.nrows() != *sizes.last().unwrap() {
            return Err(Error::domain(
                "W",
                format!("block W_{i} has the wrong number of rows"),
            ));
        }
        sizes.push(w.ncols());
    }
    if psi.nrows() != *sizes.last().unwrap() {
        return Err(Error::domain("psi", "Ψ rows must match the last level"));
    }
    Ok(sizes)
}

/// Block kernel K*_{n,m} = W_{[n,N)} Ψ M⁻¹ Φ W_{[0,m)} − W_{[n,m)} for levels
/// 0..=N, with M = Φ W_0 ⋯ W_{N-1} Ψ. Outer index is n, inner m.
pub fn em_block_kernel(
    phi: &DMatrix<f64>,
    ws: &[DMatrix<f64>],
    psi: &DMatrix<f64>,
) -> Result<Vec<Vec<DMatrix<f64>>>> {
    let sizes = level_sizes(phi, ws, psi)?;
    let top = ws.len();
    let m = phi * chain(ws, &sizes, 0, top) * psi;
    let (m_inv, _) = inverse_checked(&m)?;
    let left: Vec<DMatrix<f64>> = (0..=top)
        .map(|n| chain(ws, &sizes, n, top) * psi * &m_inv)
        .collect();
    let right: Vec<DMatrix<f64>> = (0..=top).map(|k| phi * chain(ws, &sizes, 0, k)).collect();
    Ok((0..=top)
        .map(|n| {
            (0..=top)
                .map(|k| &left[n] * &right[k] - transfer_range(ws, &sizes, n, k))
                .collect()
        })
        .collect())
}

/// Assembles the equal-count L-matrix over phantom ⊔ X^(0) ⊔ … ⊔ X^(N).
/// Phantom indices come first.
pub fn em_l_matrix(
    phi: &DMatrix<f64>,
    ws: &[DMatrix<f64>],
    psi: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let sizes = level_sizes(phi, ws, psi)?;
    let p = phi.nrows();
    let mut offsets = vec![p];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let dim = *offsets.last().unwrap();
    let mut l = DMatrix::zeros(dim, dim);
    l.view_mut((0, offsets[0]), phi.shape()).copy_from(phi);
    for (i, w) in ws.iter().enumerate() {
        l.view_mut((offsets[i], offsets[i + 1]), w.shape())
            .copy_from(&(-w));
    }
    let last = sizes.len() - 1;
    l.view_mut((offsets[last], 0), psi.shape()).copy_from(psi);
    Ok(l)
}

/// Uniform grid of sample positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
    cell_weight: f64,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("grid", "need at least 2 points"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("grid", "points must be finite"));
        }
        let h = points[1] - points[0];
        if !(h > 0.0) {
            return Err(Error::domain("grid", "points must be strictly increasing"));
        }
        let scale = points[0].abs().max(points[points.len() - 1].abs()).max(1.0);
        for w in points.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-12 * scale {
                return Err(Error::domain("grid", "spacing must be uniform"));
            }
        }
        Ok(Grid {
            points,
            cell_weight: h,
        })
    }

    /// `count` points from `lo` to `hi` inclusive.
    pub fn uniform(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(lo < hi) {
            return Err(Error::domain("grid", "need at least 2 points and lo < hi"));
        }
        let h = (hi - lo) / (count - 1) as f64;
        Grid::new((0..count).map(|i| lo + h * i as f64).collect())
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        let lo = self.points[0];
        let n = 2 * self.points.len() - 1;
        let h = 0.5 * self.cell_weight;
        Grid {
            points: (0..n).map(|i| lo + h * i as f64).collect(),
            cell_weight: h,
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cell_weight(&self) -> f64 {
        self.cell_weight
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index of the grid point nearest to x.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.min()) / self.cell_weight).round();
        i.clamp(0.0, (self.len() - 1) as f64) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Space,
    Time,
}

/// Nodes (n_m, t_m) of a space-like path ending at level 1, with the steps
/// between consecutive nodes and the indices of the down steps. The final
/// node always steps down to the empty level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDescriptor {
    levels: Vec<i64>,
    times: Vec<f64>,
    steps: Vec<StepKind>,
    down_steps: Vec<usize>,
}

impl PathDescriptor {
    pub fn new(nodes: &[(i64, f64)]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("path", "path needs at least one node"));
        }
        if nodes.iter().any(|&(_, t)| !t.is_finite()) {
            return Err(Error::domain("path", "times must be finite"));
        }
        if nodes[nodes.len() - 1].0 != 1 {
            return Err(Error::domain("path", "path must end at level 1"));
        }
        let mut steps = Vec::with_capacity(nodes.len());
        for w in nodes.windows(2) {
            let ((n, t), (n2, t2)) = (w[0], w[1]);
            if t2 < t {
                return Err(Error::domain("path", "times must be nondecreasing"));
            }
            match n - n2 {
                0 => steps.push(StepKind::Time),
                1 => {
                    if t2 != t {
                        return Err(Error::domain(
                            "path",
                            "a down step must keep the time fixed",
                        ));
                    }
                    steps.push(StepKind::Space);
                }
                _ => return Err(Error::domain("path", "levels must drop by 0 or 1 per step")),
            }
        }
        steps.push(StepKind::Space);
        let down_steps = steps
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == StepKind::Space)
            .map(|(i, _)| i)
            .collect();
        Ok(PathDescriptor {
            levels: nodes.iter().map(|p| p.0).collect(),
            times: nodes.iter().map(|p| p.1).collect(),
            steps,
            down_steps,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn steps(&self) -> &[StepKind] {
        &self.steps
    }

    pub fn top_level(&self) -> i64 {
        self.levels[0]
    }

    /// Node index of the k-th down step, k = 1..=n_0.
    pub fn down_step(&self, k: usize) -> usize {
        self.down_steps[k - 1]
    }

    /// Time of the k-th down step.
    pub fn down_step_time(&self, k: usize) -> f64 {
        self.times[self.down_step(k)]
    }

    /// First node with the given level and time.
    pub fn node_index(&self, level: i64, time: f64) -> Option<usize> {
        (0..self.len()).find(|&m| self.levels[m] == level && self.times[m] == time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleFamily {
    /// Stationary Dyson Brownian minor process.
    OU,
    /// Warren's process started from the origin.
    Warren,
}

impl OracleFamily {
    fn algebra(self) -> ScaleAlgebra {
        match self {
            OracleFamily::OU => ScaleAlgebra::Star,
            OracleFamily::Warren => ScaleAlgebra::Warren,
        }
    }
}

/// Discretized L-matrix over phantom ⊔ X^(0) ⊔ … ⊔ X^(N-1), one grid copy
/// per path node. The last level holds only the virtual particle and is
/// folded into the F columns.
#[derive(Debug, Clone)]
pub struct BlockLEnsemble {
    grid: Grid,
    path: PathDescriptor,
    u: f64,
    family: OracleFamily,
    l: DMatrix<f64>,
}

impl BlockLEnsemble {
    pub fn assemble(
        path: &PathDescriptor,
        grid: &Grid,
        u: f64,
        family: OracleFamily,
    ) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::domain("u", "virtual position must be finite"));
        }
        if u > grid.min() - 2.0 {
            return Err(Error::domain(
                "u",
                "virtual position must lie at least 2 below the grid",
            ));
        }
        let t0 = path.times[0];
        if family == OracleFamily::Warren && !(t0 > 0.0) {
            return Err(Error::domain("t", "Warren paths need positive times"));
        }
        let p = path.top_level() as usize;
        let g = grid.len();
        let nodes = path.len();
        let dim = p + nodes * g;
        if dim > MAX_DIMENSION {
            return Err(Error::domain(
                "grid",
                format!("assembled dimension {dim} exceeds the cap {MAX_DIMENSION}"),
            ));
        }
        let dx = grid.cell_weight();
        let xs = grid.points();
        let alg = family.algebra();
        let basis = alg.basis(p, t0)?;
        let block = |m: usize| p + m * g;
        let mut l = DMatrix::zeros(dim, dim);

        for row in 0..p {
            let degree = (p - 1 - row) as i64;
            for (j, &x) in xs.iter().enumerate() {
                l[(row, block(0) + j)] = hermite_eval(&basis, degree, x)? * basis.weight(x) * dx;
            }
        }

        for m in 0..nodes - 1 {
            let (r0, c0) = (block(m), block(m + 1));
            match path.steps[m] {
                StepKind::Space => {
                    for i in 0..g {
                        for j in 0..=i {
                            l[(r0 + i, c0 + j)] = -dx;
                        }
                    }
                }
                StepKind::Time => {
                    let dt = path.times[m + 1] - path.times[m];
                    if dt == 0.0 {
                        for i in 0..g {
                            l[(r0 + i, c0 + i)] = -1.0;
                        }
                    } else {
                        for (i, &x) in xs.iter().enumerate() {
                            for (j, &y) in xs.iter().enumerate() {
                                l[(r0 + i, c0 + j)] =
                                    -transition_density(alg.transition(), dt, x, y)? * dx;
                            }
                        }
                    }
                }
            }
        }

        // phantom column l (1-based) carries H(x − u) on the node of down step n_0 − l + 1
        for col in 0..p {
            let k = p - col;
            let m = path.down_step(k);
            for (i, &x) in xs.iter().enumerate() {
                l[(block(m) + i, col)] = if x >= u { 1.0 } else { 0.0 };
            }
        }

        Ok(BlockLEnsemble {
            grid: grid.clone(),
            path: path.clone(),
            u,
            family,
            l,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn dimension(&self) -> usize {
        self.l.nrows()
    }

    pub fn phantom_count(&self) -> usize {
        self.path.top_level() as usize
    }

    /// Indices of every grid copy, i.e. everything but the phantom block.
    pub fn retained(&self) -> Vec<usize> {
        (self.phantom_count()..self.dimension()).collect()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn path(&self) -> &PathDescriptor {
        &self.path
    }

    pub fn virtual_position(&self) -> f64 {
        self.u
    }

    pub fn family(&self) -> OracleFamily {
        self.family
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDiagnostics {
    pub family: OracleFamily,
    pub dimension: usize,
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    pub cell_weight: f64,
    pub virtual_position: f64,
    pub condition_estimate: f64,
    pub path: Vec<(i64, f64)>,
}

/// Projected kernel of a discretized path, divided by the cell weight so that
/// entries approximate the continuous kernel.
#[derive(Debug, Clone)]
pub struct DiscreteKernel {
    grid: Grid,
    path: PathDescriptor,
    kernel: DMatrix<f64>,
    diagnostics: OracleDiagnostics,
}

impl DiscreteKernel {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn path(&self) -> &PathDescriptor {
        &self.path
    }

    pub fn diagnostics(&self) -> &OracleDiagnostics {
        &self.diagnostics
    }

    /// Kernel between grid index i on node m and grid index j on node m2.
    pub fn entry(&self, m: usize, i: usize, m2: usize, j: usize) -> f64 {
        let g = self.grid.len();
        self.kernel[(m * g + i, m2 * g + j)]
    }

    /// One-point density on node m at every grid point.
    pub fn rho1(&self, m: usize) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| self.entry(m, i, m, i))
            .collect()
    }

    /// Two-point density between (m, i) and (m2, j).
    pub fn rho2(&self, m: usize, i: usize, m2: usize, j: usize) -> f64 {
        self.entry(m, i, m, i) * self.entry(m2, j, m2, j)
            - self.entry(m, i, m2, j) * self.entry(m2, j, m, i)
    }

    /// Kernel at two space-time points; positions snap to the nearest grid point.
    pub fn kernel_at(&self, p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Result<f64> {
        let locate = |q: &SpaceTimePoint, name: &str| -> Result<(usize, usize)> {
            let m = self
                .path
                .node_index(q.level, q.time)
                .ok_or_else(|| Error::domain(name, "level and time do not match a path node"))?;
            if q.position < self.grid.min() || q.position > self.grid.max() {
                return Err(Error::domain(name, "position lies outside the grid"));
            }
            Ok((m, self.grid.nearest(q.position)))
        };
        let (m, i) = locate(p, "p")?;
        let (m2, j) = locate(p2, "p'")?;
        Ok(self.entry(m, i, m2, j))
    }
}

/// Builds the discretized ensemble for the path, solves for its projected
/// kernel and rescales it to density units.
pub fn discretized_minor_kernel(
    path: &PathDescriptor,
    grid: &Grid,
    u: f64,
    family: OracleFamily,
) -> Result<DiscreteKernel> {
    let ens = BlockLEnsemble::assemble(path, grid, u, family)?;
    let (k, cond) = projected_kernel_with_condition(ens.matrix(), &ens.retained())?;
    let kernel = k / grid.cell_weight();
    let diagnostics = OracleDiagnostics {
        family,
        dimension: ens.dimension(),
        grid_points: grid.len(),
        grid_min: grid.min(),
        grid_max: grid.max(),
        cell_weight: grid.cell_weight(),
        virtual_position: u,
        condition_estimate: cond,
        path: path
            .levels
            .iter()
            .copied()
            .zip(path.times.iter().copied())
            .collect(),
    };
    Ok(DiscreteKernel {
        grid: grid.clone(),
        path: path.clone(),
        kernel,
        diagnostics,
    })
}
