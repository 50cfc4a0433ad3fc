//! Brute-force oracle in a truncated three-mode Fock space.
//!
//! Each mode keeps photon numbers `0..=cutoff`. The generator conserves the
//! charge `n_a + n_c − n_b`, so every operator here is stored as one block per
//! charge sector; at the default cutoff 20 the largest block has 331 states
//! instead of 9261. `X` is real antisymmetric, so all evolved amplitudes are
//! real.
//!
//! The Heisenberg map `A = e^X a e^{−X}` corresponds to states evolving as
//! `ψ ↦ e^{−X} ψ`, which is the evolution used throughout.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::blackhole::{bc_complement_covariance, extract_mode_channel, ModeTag};
use crate::capacity::{gaussian_entropy, LogBase};
use crate::channel::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::symplectic::{black_hole_symplectic, build_l, BlackHoleParams, RealMatrix};

/// Largest admissible three-mode dimension `d³`.
pub const MAX_DIM: usize = 1_000_000;
/// Largest squeezing accepted for a Fock-space input state.
pub const MAX_SQUEEZING: f64 = 0.5;

const MODES: usize = 3;

/// Basis bookkeeping for `(cutoff + 1)³` states, grouped by charge sector.
#[derive(Debug, Clone)]
pub struct FockSpace {
    cutoff: usize,
    d: usize,
    sectors: Vec<Vec<usize>>,
    slot: Vec<(usize, usize)>,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidArgument(format!("cutoff must be >= 2, got {cutoff}")));
        }
        let d = cutoff + 1;
        let dim = d.checked_pow(3).unwrap_or(usize::MAX);
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, limit: MAX_DIM });
        }
        let mut sectors = vec![Vec::new(); 3 * cutoff + 1];
        let mut slot = Vec::with_capacity(dim);
        for idx in 0..dim {
            let q = Self::sector_of_occupation(cutoff, occupation(d, idx));
            slot.push((q, sectors[q].len()));
            sectors[q].push(idx);
        }
        Ok(Self { cutoff, d, sectors, slot })
    }

    fn sector_of_occupation(cutoff: usize, n: [usize; 3]) -> usize {
        n[0] + n[2] + cutoff - n[1]
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Levels per mode, `cutoff + 1`.
    pub fn levels(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d * self.d * self.d
    }

    pub fn index(&self, n: [usize; 3]) -> usize {
        debug_assert!(n.iter().all(|&k| k < self.d));
        (n[0] * self.d + n[1]) * self.d + n[2]
    }

    pub fn occupation(&self, idx: usize) -> [usize; 3] {
        occupation(self.d, idx)
    }

    /// Charge `n_a + n_c − n_b` of a basis state.
    pub fn charge(&self, idx: usize) -> i64 {
        self.slot[idx].0 as i64 - self.cutoff as i64
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn largest_sector(&self) -> usize {
        self.sectors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn basis(&self, n: [usize; 3]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[self.index(n)] = 1.0;
        v
    }
}

fn occupation(d: usize, idx: usize) -> [usize; 3] {
    [idx / (d * d), (idx / d) % d, idx % d]
}

/// Stride of mode `m` in the flattened index.
fn stride(d: usize, mode: usize) -> usize {
    d.pow((MODES - 1 - mode) as u32)
}

/// Real operator on the truncated space, block diagonal in the charge sectors.
#[derive(Debug, Clone)]
pub struct TruncatedOp {
    space: FockSpace,
    blocks: Vec<RealMatrix>,
}

impl TruncatedOp {
    pub fn zeros(space: &FockSpace) -> Self {
        let blocks = space.sectors.iter().map(|s| RealMatrix::zeros(s.len(), s.len())).collect();
        Self { space: space.clone(), blocks }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn cutoff(&self) -> usize {
        self.space.cutoff
    }

    pub fn n_modes(&self) -> usize {
        MODES
    }

    /// `⟨row|op|col⟩`; zero across sectors.
    pub fn element(&self, row: [usize; 3], col: [usize; 3]) -> f64 {
        let (qr, ir) = self.space.slot[self.space.index(row)];
        let (qc, ic) = self.space.slot[self.space.index(col)];
        if qr == qc {
            self.blocks[qr][(ir, ic)]
        } else {
            0.0
        }
    }

    fn add(&mut self, row: usize, col: usize, value: f64) {
        let (qr, ir) = self.space.slot[row];
        let (qc, ic) = self.space.slot[col];
        assert_eq!(qr, qc, "operator must conserve charge");
        self.blocks[qr][(ir, ic)] += value;
    }

    /// Dense matrix on the full space in flattened-index order.
    pub fn to_dense(&self) -> RealMatrix {
        let n = self.space.dim();
        let mut m = RealMatrix::zeros(n, n);
        for (block, states) in self.blocks.iter().zip(&self.space.sectors) {
            for (i, &gi) in states.iter().enumerate() {
                for (j, &gj) in states.iter().enumerate() {
                    m[(gi, gj)] = block[(i, j)];
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.space.dim());
        let mut out = vec![0.0; v.len()];
        for (block, states) in self.blocks.iter().zip(&self.space.sectors) {
            let local = nalgebra::DVector::from_iterator(states.len(), states.iter().map(|&g| v[g]));
            let y = block * local;
            for (i, &g) in states.iter().enumerate() {
                out[g] = y[i];
            }
        }
        out
    }

    /// `max |X + Xᵀ|`; zero for a generator.
    pub fn antihermiticity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b + b.transpose()).amax())
            .fold(0.0, f64::max)
    }

    /// `max |UᵀU − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.transpose() * b - RealMatrix::identity(b.nrows(), b.ncols())).amax())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn amax(&self) -> f64 {
        self.blocks.iter().map(|b| b.amax()).fold(0.0, f64::max)
    }
}

/// `X = rκ(a†b† − ab) + s(a†c − ac†)` on the truncated space.
///
/// Each raising element is paired with its negated transpose, so `X` is
/// exactly antisymmetric, including at the truncation edge.
pub fn build_generator(p: &BlackHoleParams, cutoff: usize) -> Result<TruncatedOp> {
    let space = FockSpace::new(cutoff)?;
    let mut x = TruncatedOp::zeros(&space);
    let (rk, s) = (p.r_kappa(), p.s());
    for idx in 0..space.dim() {
        let [na, nb, nc] = space.occupation(idx);
        if rk != 0.0 && na < cutoff && nb < cutoff {
            let to = space.index([na + 1, nb + 1, nc]);
            let v = rk * (((na + 1) * (nb + 1)) as f64).sqrt();
            x.add(to, idx, v);
            x.add(idx, to, -v);
        }
        if s != 0.0 && na < cutoff && nc > 0 {
            let to = space.index([na + 1, nb, nc - 1]);
            let v = s * (((na + 1) * nc) as f64).sqrt();
            x.add(to, idx, v);
            x.add(idx, to, -v);
        }
    }
    Ok(x)
}

/// Dense `e^X`, block by block (scaling and squaring with Padé approximants).
///
/// Cost grows with the cube of the largest sector; use [`Propagator`] to
/// evolve individual states at large cutoffs.
pub fn exponentiate(x: &TruncatedOp) -> TruncatedOp {
    TruncatedOp {
        space: x.space.clone(),
        blocks: x.blocks.iter().map(|b| b.clone().exp()).collect(),
    }
}

#[derive(Debug, Clone)]
struct SparseBlock {
    rows: Vec<Vec<(usize, f64)>>,
    norm1: f64,
}

impl SparseBlock {
    fn from_dense(m: &RealMatrix) -> Self {
        let rows = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .filter(|&j| m[(i, j)] != 0.0)
                    .map(|j| (j, m[(i, j)]))
                    .collect()
            })
            .collect();
        let norm1 = (0..m.ncols())
            .map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        Self { rows, norm1 }
    }

    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }

    /// `e^{tB} v` by a Taylor series over steps of 1-norm at most one.
    fn exp_action(&self, t: f64, v: &[f64]) -> Vec<f64> {
        let steps = (self.norm1 * t.abs()).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let mut acc = v.to_vec();
        let mut term = vec![0.0; v.len()];
        let mut next = vec![0.0; v.len()];
        for _ in 0..steps {
            term.copy_from_slice(&acc);
            for k in 1..=80 {
                self.matvec(&term, &mut next);
                let scale = h / k as f64;
                let mut term_max = 0.0f64;
                for ((tm, nx), a) in term.iter_mut().zip(&next).zip(acc.iter_mut()) {
                    *tm = nx * scale;
                    *a += *tm;
                    term_max = term_max.max(tm.abs());
                }
                let acc_max = acc.iter().fold(0.0f64, |m, a| m.max(a.abs()));
                if term_max <= 1e-18 * acc_max.max(1e-300) {
                    break;
                }
            }
        }
        acc
    }
}

/// Action of `e^{tX}` on vectors, sector by sector.
#[derive(Debug, Clone)]
pub struct Propagator {
    space: FockSpace,
    blocks: Vec<SparseBlock>,
    t: f64,
}

impl Propagator {
    pub fn new(x: &TruncatedOp, t: f64) -> Self {
        Self {
            space: x.space.clone(),
            blocks: x.blocks.iter().map(SparseBlock::from_dense).collect(),
            t,
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.space.dim());
        let mut out = vec![0.0; v.len()];
        for (block, states) in self.blocks.iter().zip(&self.space.sectors) {
            let local: Vec<f64> = states.iter().map(|&g| v[g]).collect();
            if local.iter().all(|&a| a == 0.0) {
                continue;
            }
            for (&g, y) in states.iter().zip(block.exp_action(self.t, &local)) {
                out[g] = y;
            }
        }
        out
    }
}

/// Weighted mixture of real pure states on the truncated space.
#[derive(Debug, Clone)]
pub struct MixedState {
    d: usize,
    components: Vec<(f64, Vec<f64>)>,
}

impl MixedState {
    pub fn new(levels: usize, components: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let dim = levels.pow(MODES as u32);
        if components.iter().any(|(w, v)| !(*w >= 0.0) || v.len() != dim) {
            return Err(Error::InvalidArgument("malformed mixture component".into()));
        }
        Ok(Self { d: levels, components })
    }

    pub fn components(&self) -> &[(f64, Vec<f64>)] {
        &self.components
    }

    pub fn trace(&self) -> f64 {
        self.components.iter().map(|(w, v)| w * dot(v, v)).sum()
    }

    pub fn evolve(&self, u: &Propagator) -> Self {
        Self {
            d: self.d,
            components: self.components.iter().map(|(w, v)| (*w, u.apply(v))).collect(),
        }
    }

    /// Probability of any mode sitting at the top level.
    pub fn edge_population(&self) -> f64 {
        let top = self.d - 1;
        self.components
            .iter()
            .map(|(w, v)| {
                w * v
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| occupation(self.d, *idx).contains(&top))
                    .map(|(_, a)| a * a)
                    .sum::<f64>()
            })
            .sum()
    }

    fn lower(&self, mode: usize, v: &[f64]) -> Vec<f64> {
        let st = stride(self.d, mode);
        let mut out = vec![0.0; v.len()];
        for (idx, &a) in v.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let n = occupation(self.d, idx)[mode];
            if n > 0 {
                out[idx - st] += (n as f64).sqrt() * a;
            }
        }
        out
    }

    /// `(⟨a_i† a_j⟩, ⟨a_i a_j⟩)` over the three modes.
    pub fn second_moments(&self) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
        let mut n = [[0.0; 3]; 3];
        let mut m = [[0.0; 3]; 3];
        for (w, psi) in &self.components {
            let phi: Vec<Vec<f64>> = (0..MODES).map(|j| self.lower(j, psi)).collect();
            for i in 0..MODES {
                for j in 0..MODES {
                    n[i][j] += w * dot(&phi[i], &phi[j]);
                    m[i][j] += w * dot(psi, &self.lower(i, &phi[j]));
                }
            }
        }
        (n, m)
    }

    /// Mean photon number per mode.
    pub fn mean_photons(&self) -> [f64; 3] {
        let (n, _) = self.second_moments();
        [n[0][0], n[1][1], n[2][2]]
    }

    /// 6×6 covariance in `(q_a, p_a, q_b, p_b, q_c, p_c)` order, with
    /// `q = a + a†` and `p = −i(a − a†)`. First moments vanish for every state
    /// built here (each component has definite charge parity).
    pub fn covariance(&self) -> RealMatrix {
        let (n, m) = self.second_moments();
        let mut v = RealMatrix::zeros(2 * MODES, 2 * MODES);
        for i in 0..MODES {
            for j in 0..MODES {
                let sym = n[i][j] + n[j][i] + if i == j { 1.0 } else { 0.0 };
                let anti = m[i][j] + m[j][i];
                v[(2 * i, 2 * j)] = sym + anti;
                v[(2 * i + 1, 2 * j + 1)] = sym - anti;
            }
        }
        v
    }

    /// Reduced density matrix on `keep` (ascending mode order).
    pub fn reduced(&self, keep: &[ModeTag]) -> Result<FockDensity> {
        let keep: Vec<usize> = keep.iter().map(|m| m.index()).collect();
        if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("modes to keep must be ascending and distinct".into()));
        }
        let traced: Vec<usize> = (0..MODES).filter(|m| !keep.contains(m)).collect();
        let kd = self.d.pow(keep.len() as u32);
        let td = self.d.pow(traced.len() as u32);
        let combine = |n: &[usize; 3], modes: &[usize]| modes.iter().fold(0, |acc, &m| acc * self.d + n[m]);
        let mut rho = RealMatrix::zeros(kd, kd);
        let mut phi = RealMatrix::zeros(td, kd);
        for (w, psi) in &self.components {
            phi.fill(0.0);
            for (idx, &a) in psi.iter().enumerate() {
                let n = occupation(self.d, idx);
                phi[(combine(&n, &traced), combine(&n, &keep))] = a;
            }
            rho.gemm_tr(*w, &phi, &phi, 1.0);
        }
        FockDensity::new(rho)
    }

    /// von Neumann entropy of the full three-mode state, from the Gram
    /// matrix of the weighted components.
    pub fn global_entropy(&self, base: LogBase) -> f64 {
        let k = self.components.len();
        let gram = RealMatrix::from_fn(k, k, |i, j| {
            let (wi, vi) = &self.components[i];
            let (wj, vj) = &self.components[j];
            (wi * wj).sqrt() * dot(vi, vj)
        });
        entropy_of_spectrum(SymmetricEigen::new(gram).eigenvalues.iter().copied(), base)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn entropy_of_spectrum(eigs: impl Iterator<Item = f64>, base: LogBase) -> f64 {
    let nats: f64 = eigs.filter(|&l| l > 0.0).map(|l| -l * l.ln()).sum();
    base.from_nats(nats)
}

/// Real density matrix: symmetric, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct FockDensity {
    matrix: RealMatrix,
    eigenvalues: Vec<f64>,
}

impl FockDensity {
    pub fn new(matrix: RealMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument("density matrix must be square".into()));
        }
        if (&matrix - matrix.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidArgument("density matrix must be symmetric".into()));
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("density matrix trace {trace} != 1")));
        }
        let eigenvalues: Vec<f64> = SymmetricEigen::new(matrix.clone()).eigenvalues.iter().copied().collect();
        let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidArgument(format!("density matrix has eigenvalue {min}")));
        }
        Ok(Self { matrix, eigenvalues })
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        entropy_of_spectrum(self.eigenvalues.iter().copied(), base)
    }
}

/// Input state of mode `c`; `a` and `b` always start in the vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CodeState {
    /// Thermal state with the given mean photon number (0 is the vacuum).
    Thermal(f64),
    /// Squeezed vacuum `diag(e^{2ζ}, e^{−2ζ})`.
    Squeezed(f64),
}

impl CodeState {
    /// Recognize a supported one-mode covariance.
    pub fn from_covariance(v: &CovarianceMatrix, cutoff: usize) -> Result<Self> {
        if v.modes() != 1 {
            return Err(Error::InvalidArgument("input state must be one-mode".into()));
        }
        let m = v.matrix();
        let (e, f, g) = (m[(0, 0)], m[(1, 1)], m[(0, 1)]);
        let tol = 1e-12 * e.max(f).max(1.0);
        if g.abs() > tol {
            return Err(Error::InvalidArgument(
                "Fock oracle supports only states without q-p correlation".into(),
            ));
        }
        let state = if (e - f).abs() <= tol {
            Self::Thermal(((e - 1.0) / 2.0).max(0.0))
        } else if (e * f - 1.0).abs() <= 1e-10 {
            Self::Squeezed(0.25 * (e / f).ln())
        } else {
            return Err(Error::InvalidArgument(
                "Fock oracle supports vacuum, thermal or squeezed-vacuum inputs".into(),
            ));
        };
        state.check(cutoff)?;
        Ok(state)
    }

    fn check(self, cutoff: usize) -> Result<()> {
        match self {
            Self::Thermal(n) if !(n >= 0.0) || n > cutoff as f64 / 4.0 => Err(Error::InvalidArgument(
                format!("thermal photon number {n} exceeds cutoff/4 = {}", cutoff as f64 / 4.0),
            )),
            Self::Squeezed(z) if !(z.abs() <= MAX_SQUEEZING) => Err(Error::InvalidArgument(format!(
                "squeezing {z} exceeds {MAX_SQUEEZING}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Thermal(n) if *n == 0.0 => "vacuum".to_string(),
            Self::Thermal(n) => format!("thermal(n={n})"),
            Self::Squeezed(z) => format!("squeezed(zeta={z})"),
        }
    }

    /// Three-mode input `|0⟩|0⟩ ⊗ ρ_c`.
    pub fn prepare(&self, space: &FockSpace) -> Result<MixedState> {
        let d = space.levels();
        let components = match *self {
            Self::Thermal(n) => {
                let weights = thermal_weights(n, space.cutoff());
                weights
                    .into_iter()
                    .enumerate()
                    .filter(|(_, w)| *w > 0.0)
                    .map(|(k, w)| (w, space.basis([0, 0, k])))
                    .collect()
            }
            Self::Squeezed(z) => {
                let amps = squeezed_amplitudes(z, space.cutoff());
                let mut v = vec![0.0; space.dim()];
                for (k, a) in amps.into_iter().enumerate() {
                    v[space.index([0, 0, k])] = a;
                }
                vec![(1.0, v)]
            }
        };
        MixedState::new(d, components)
    }
}

/// Geometric photon distribution with mean `n`, truncated at `cutoff` and
/// renormalized.
pub fn thermal_weights(n: f64, cutoff: usize) -> Vec<f64> {
    if n == 0.0 {
        let mut w = vec![0.0; cutoff + 1];
        w[0] = 1.0;
        return w;
    }
    let ratio = n / (n + 1.0);
    let raw: Vec<f64> = (0..=cutoff).map(|k| ratio.powi(k as i32) / (n + 1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// `e^{(ζ/2)(a†² − a²)}|0⟩` on a single truncated mode.
pub fn squeezed_amplitudes(zeta: f64, cutoff: usize) -> Vec<f64> {
    let d = cutoff + 1;
    let mut g = RealMatrix::zeros(d, d);
    for n in 0..d.saturating_sub(2) {
        let v = 0.5 * zeta * (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = v;
        g[(n, n + 2)] = -v;
    }
    let mut vac = vec![0.0; d];
    vac[0] = 1.0;
    SparseBlock::from_dense(&g).exp_action(1.0, &vac)
}

/// Black hole evolution `ψ ↦ e^{−X}ψ` at a given cutoff.
#[derive(Debug, Clone)]
pub struct BlackHoleEvolution {
    params: BlackHoleParams,
    propagator: Propagator,
}

impl BlackHoleEvolution {
    pub fn new(p: &BlackHoleParams, cutoff: usize) -> Result<Self> {
        let x = build_generator(p, cutoff)?;
        Ok(Self { params: *p, propagator: Propagator::new(&x, -1.0) })
    }

    pub fn params(&self) -> &BlackHoleParams {
        &self.params
    }

    pub fn space(&self) -> &FockSpace {
        self.propagator.space()
    }

    pub fn evolve_vector(&self, v: &[f64]) -> Vec<f64> {
        self.propagator.apply(v)
    }

    pub fn evolve(&self, state: &MixedState) -> MixedState {
        state.evolve(&self.propagator)
    }
}

/// Bogoliubov coefficients recovered from `e^X a e^{−X}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovCheck {
    pub r: f64,
    pub s: f64,
    pub cutoff: usize,
    /// Numerical `L`, rows `(A, B†, C)` against columns `(a, b†, c)`.
    pub numeric_l: [[f64; 3]; 3],
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Largest deviation over all matrix elements between states with at
    /// most two photons in total.
    pub residual: f64,
    /// Largest deviation of the evolved basis vectors from unit norm.
    pub norm_defect: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Compare `e^X (a, b†, c) e^{−X}` with `L (a, b†, c)` on the low-photon subspace.
pub fn verify_bogoliubov(p: &BlackHoleParams, cutoff: usize, tol: f64) -> Result<BogoliubovCheck> {
    let evo = BlackHoleEvolution::new(p, cutoff)?;
    let space = evo.space();
    let low: Vec<[usize; 3]> = (0..space.dim())
        .map(|i| space.occupation(i))
        .filter(|n| n.iter().sum::<usize>() <= 2)
        .collect();
    let evolved: Vec<Vec<f64>> = low.iter().map(|&n| evo.evolve_vector(&space.basis(n))).collect();
    let norm_defect = evolved.iter().map(|v| (dot(v, v).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    let d = space.levels();
    let lowered: Vec<[Vec<f64>; 3]> = evolved
        .iter()
        .map(|v| {
            let st = MixedState { d, components: Vec::new() };
            [st.lower(0, v), st.lower(1, v), st.lower(2, v)]
        })
        .collect();
    // ⟨m| e^X a_k e^{−X} |n⟩ = ⟨ũ_m| a_k |ũ_n⟩.
    let heis = |k: usize, m: usize, n: usize| dot(&evolved[m], &lowered[n][k]);
    // Output operator rows: A and C are lowering, B† is the adjoint of B.
    let numeric = |row: usize, m: usize, n: usize| match row {
        1 => heis(1, n, m),
        k => heis(k, m, n),
    };
    let l = build_l(p);
    // ⟨m| (x a + y b† + z c) |n⟩ from the occupations.
    let predicted = |row: usize, m: &[usize; 3], n: &[usize; 3]| {
        let shift = |mode: usize, delta: i64| {
            (0..3).all(|j| {
                let want = n[j] as i64 + if j == mode { delta } else { 0 };
                m[j] as i64 == want
            })
        };
        let mut v = 0.0;
        if shift(0, -1) {
            v += l[(row, 0)] * (n[0] as f64).sqrt();
        }
        if shift(1, 1) {
            v += l[(row, 1)] * ((n[1] + 1) as f64).sqrt();
        }
        if shift(2, -1) {
            v += l[(row, 2)] * (n[2] as f64).sqrt();
        }
        v
    };
    let pos = |n: [usize; 3]| low.iter().position(|&x| x == n).expect("low-photon state");
    let (vac, one_a, one_b, one_c) = (pos([0, 0, 0]), pos([1, 0, 0]), pos([0, 1, 0]), pos([0, 0, 1]));
    let mut numeric_l = [[0.0; 3]; 3];
    for (row, out) in numeric_l.iter_mut().enumerate() {
        out[0] = numeric(row, vac, one_a);
        out[1] = numeric(row, one_b, vac);
        out[2] = numeric(row, vac, one_c);
    }
    let mut residual = 0.0f64;
    for row in 0..3 {
        for (mi, m) in low.iter().enumerate() {
            for (ni, n) in low.iter().enumerate() {
                residual = residual.max((numeric(row, mi, ni) - predicted(row, m, n)).abs());
            }
        }
    }
    Ok(BogoliubovCheck {
        r: p.r(),
        s: p.s(),
        cutoff,
        alpha: numeric_l[0][0],
        beta: -numeric_l[0][1],
        gamma: numeric_l[0][2],
        numeric_l,
        residual,
        norm_defect,
        tol,
        passed: residual <= tol,
    })
}

/// Fock-space covariances against the symplectic pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelCheck {
    pub r: f64,
    pub s: f64,
    pub cutoff: usize,
    pub input: CodeState,
    /// Largest entry deviation of the 2×2 output blocks of `a`, `b`, `c`.
    pub mode_residuals: [f64; 3],
    /// Largest entry deviation of the joint `(b, c)` block.
    pub bc_residual: f64,
    pub max_residual: f64,
    /// Deviation of the truncated input covariance from the nominal one;
    /// the comparison itself uses the truncated input.
    pub input_truncation: f64,
    pub edge_population: f64,
    /// `|S_Fock(ρ_a) − S_Gauss(V_a)|` in bits.
    pub a_entropy_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Evolve `|0⟩|0⟩ ⊗ ρ(V_in)` and compare output covariances per mode and for
/// the joint `(b, c)` complement.
pub fn verify_channel_action(
    p: &BlackHoleParams,
    v_in: &CovarianceMatrix,
    cutoff: usize,
    tol: f64,
) -> Result<ChannelCheck> {
    let input = CodeState::from_covariance(v_in, cutoff)?;
    let evo = BlackHoleEvolution::new(p, cutoff)?;
    check_channel_with(&evo, input, v_in, tol)
}

pub(crate) fn check_channel_with(
    evo: &BlackHoleEvolution,
    input: CodeState,
    v_in: &CovarianceMatrix,
    tol: f64,
) -> Result<ChannelCheck> {
    let p = evo.params();
    let state_in = input.prepare(evo.space())?;
    let v_eff_c = state_in.covariance().view((4, 4), (2, 2)).into_owned();
    let input_truncation = (&v_eff_c - v_in.matrix()).amax();
    let v_eff = CovarianceMatrix::new(v_eff_c)?;

    let state_out = evo.evolve(&state_in);
    let v_out = state_out.covariance();
    let s = black_hole_symplectic(p);
    let mut mode_residuals = [0.0; 3];
    for mode in [ModeTag::A, ModeTag::B, ModeTag::C] {
        let expected = extract_mode_channel(&s, mode)?.apply(&v_eff)?;
        let k = 2 * mode.index();
        mode_residuals[mode.index()] = (v_out.view((k, k), (2, 2)) - expected.matrix()).amax();
    }
    let bc = bc_complement_covariance(p, &v_eff)?;
    let bc_residual = (v_out.view((2, 2), (4, 4)) - bc.matrix()).amax();
    let max_residual = mode_residuals.iter().copied().fold(bc_residual, f64::max);

    let rho_a = state_out.reduced(&[ModeTag::A])?;
    let v_a = CovarianceMatrix::new(v_out.view((0, 0), (2, 2)).into_owned())?;
    let a_entropy_residual = (rho_a.entropy(LogBase::Two) - gaussian_entropy(&v_a, LogBase::Two)).abs();

    Ok(ChannelCheck {
        r: p.r(),
        s: p.s(),
        cutoff: evo.space().cutoff(),
        input,
        mode_residuals,
        bc_residual,
        max_residual,
        input_truncation,
        edge_population: state_out.edge_population(),
        a_entropy_residual,
        tol,
        passed: max_residual <= tol,
    })
}

/// `S(ρ_a) − S(ρ_bc)` for a thermal code with `N` photons on mode `c`.
pub fn fock_coherent_info(p: &BlackHoleParams, n: f64, cutoff: usize, base: LogBase) -> Result<f64> {
    let evo = BlackHoleEvolution::new(p, cutoff)?;
    fock_coherent_info_with(&evo, n, base)
}

pub(crate) fn fock_coherent_info_with(evo: &BlackHoleEvolution, n: f64, base: LogBase) -> Result<f64> {
    let cutoff = evo.space().cutoff();
    if !(n >= 0.0) || n > cutoff as f64 / 6.0 {
        return Err(Error::InvalidArgument(format!(
            "code photon number {n} must lie in [0, cutoff/6 = {}]",
            cutoff as f64 / 6.0
        )));
    }
    let out = evo.evolve(&CodeState::Thermal(n).prepare(evo.space())?);
    let s_a = out.reduced(&[ModeTag::A])?.entropy(base);
    let s_bc = out.reduced(&[ModeTag::B, ModeTag::C])?.entropy(base);
    Ok(s_a - s_bc)
}
