//! Two-site DMRG on a particle-number labelled matrix-product state.
//!
//! Site tensors are stored row-major as (χ_left, d, χ_right). Every bond
//! index carries the number of particles to its left, and all tensors are
//! kept block-diagonal in that label, so N is conserved exactly.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lanczos::{davidson_lowest, DavidsonOptions};
use super::linalg::{gemm, matmul, matmul_at, matmul_bt, svd};
use super::mpo::{Mpo, MpoTerm, CH_DONE, CH_START, OP_ID};
use super::model::LatticeModel;
use super::result::{GroundStateResult, SolverMethod};
use crate::error::{Error, Result};

pub const DEFAULT_DMRG_SEED: u64 = 0xd3_a6;

#[derive(Debug, Clone, PartialEq)]
pub struct DmrgOptions {
    pub chi_max: usize,
    pub n_sweeps: usize,
    /// Stop once the per-sweep energy change drops below this.
    pub tol: f64,
    pub seed: u64,
    /// Singular values below this fraction of the largest are dropped.
    pub svd_cutoff: f64,
    /// Local eigensolver (Davidson) settings.
    pub max_subspace: usize,
    pub max_matvecs: usize,
    pub eig_tol: f64,
}

impl DmrgOptions {
    pub fn new(chi_max: usize, n_sweeps: usize, tol: f64) -> Self {
        DmrgOptions {
            chi_max,
            n_sweeps,
            tol,
            seed: DEFAULT_DMRG_SEED,
            svd_cutoff: 1e-12,
            max_subspace: 12,
            max_matvecs: 24,
            eig_tol: 1e-10,
        }
    }
}

/// Matrix-product state in mixed canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsState {
    pub d: usize,
    pub tensors: Vec<Vec<f64>>,
    /// Bond dimensions, length n_sites + 1.
    pub dims: Vec<usize>,
    /// Particle number to the left of each bond index.
    pub labels: Vec<Vec<usize>>,
    /// Orthogonality center: sites left of it are left-canonical, sites
    /// right of it right-canonical.
    pub center: usize,
    /// Largest discarded weight per sweep.
    pub truncation_log: Vec<f64>,
}

struct Split {
    u: Vec<f64>,
    s: Vec<f64>,
    vt: Vec<f64>,
    labels: Vec<usize>,
    discarded: f64,
}

/// SVD of a rows×cols matrix that is block diagonal in the given labels.
/// Keeps at most `chi` triples above `cutoff`·σ_max.
#[allow(clippy::too_many_arguments)]
fn block_svd(
    m: &[f64],
    rows: usize,
    cols: usize,
    row_q: &[i64],
    col_q: &[i64],
    chi: usize,
    cutoff: f64,
    normalize: bool,
) -> Split {
    let mut row_groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut col_groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (r, &q) in row_q.iter().enumerate() {
        row_groups.entry(q).or_default().push(r);
    }
    for (c, &q) in col_q.iter().enumerate() {
        if q >= 0 {
            col_groups.entry(q).or_default().push(c);
        }
    }
    // (label, s, u over block rows, v over block cols)
    let mut cand: Vec<(i64, f64, Vec<f64>, Vec<f64>)> = Vec::new();
    for (&q, rs) in &row_groups {
        let Some(cs) = col_groups.get(&q) else { continue };
        let block = DMatrix::from_fn(rs.len(), cs.len(), |i, j| m[rs[i] * cols + cs[j]]);
        if block.iter().all(|&x| x == 0.0) {
            continue;
        }
        let svd = svd(block);
        let (u, vt) = (&svd.u, &svd.v_t);
        for k in 0..svd.s.len() {
            let s = svd.s[k];
            if s > 0.0 {
                cand.push((q, s, u.column(k).iter().copied().collect(), vt.row(k).iter().copied().collect()));
            }
        }
    }
    cand.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let total: f64 = cand.iter().map(|c| c.1 * c.1).sum();
    let smax = cand.first().map(|c| c.1).unwrap_or(0.0);
    let mut keep = cand.len().min(chi.max(1));
    while keep > 1 && cand[keep - 1].1 <= cutoff * smax {
        keep -= 1;
    }
    let lost: f64 = cand[keep..].iter().map(|c| c.1 * c.1).sum();
    let mut kept: Vec<_> = cand.into_iter().take(keep).collect();
    kept.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.partial_cmp(&a.1).unwrap()));
    let k = kept.len();
    let mut u = vec![0.0; rows * k];
    let mut vt = vec![0.0; k * cols];
    let mut s = Vec::with_capacity(k);
    let mut labels = Vec::with_capacity(k);
    for (j, (q, sv, uc, vr)) in kept.iter().enumerate() {
        for (i, &r) in row_groups[q].iter().enumerate() {
            u[r * k + j] = uc[i];
        }
        for (i, &c) in col_groups[q].iter().enumerate() {
            vt[j * cols + c] = vr[i];
        }
        s.push(*sv);
        labels.push(*q as usize);
    }
    if normalize {
        let n: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            s.iter_mut().for_each(|x| *x /= n);
        }
    }
    Split {
        u,
        s,
        vt,
        labels,
        discarded: if total > 0.0 { lost / total } else { 0.0 },
    }
}

/// y[p, s', q] += coeff·Σ_s op[s', s]·x[p, s, q].
fn apply_local(x: &[f64], pre: usize, d: usize, post: usize, op: &[f64], coeff: f64, y: &mut [f64]) {
    for p in 0..pre {
        for sp in 0..d {
            for s in 0..d {
                let o = op[sp * d + s];
                if o == 0.0 {
                    continue;
                }
                let c = coeff * o;
                let src = &x[(p * d + s) * post..(p * d + s + 1) * post];
                let dst = &mut y[(p * d + sp) * post..(p * d + sp + 1) * post];
                for (a, b) in dst.iter_mut().zip(src) {
                    *a += c * b;
                }
            }
        }
    }
}

fn accumulate(
    term: &MpoTerm,
    ops: &[Vec<f64>],
    x: &[f64],
    pre: usize,
    d: usize,
    post: usize,
    slot: &mut Option<Vec<f64>>,
) {
    let y = slot.get_or_insert_with(|| vec![0.0; x.len()]);
    if term.op == OP_ID {
        for (a, b) in y.iter_mut().zip(x) {
            *a += term.coeff * b;
        }
    } else {
        apply_local(x, pre, d, post, &ops[term.op], term.coeff, y);
    }
}

/// Environment matrix of one MPO channel with its non-zero label blocks
/// (row start, row end, col start, col end).
#[derive(Debug, Clone)]
struct EnvMat {
    m: Vec<f64>,
    blocks: Vec<(usize, usize, usize, usize)>,
}

type Env = Vec<Option<EnvMat>>;

/// Contiguous index ranges of equal labels (labels are sorted).
fn label_ranges(labels: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=labels.len() {
        if i == labels.len() || labels[i] != labels[start] {
            out.push((start, i));
            start = i;
        }
    }
    out
}

impl EnvMat {
    fn new(m: Vec<f64>, ranges: &[(usize, usize)], dim: usize) -> Self {
        let mut blocks = Vec::new();
        for &(r0, r1) in ranges {
            for &(c0, c1) in ranges {
                if (r0..r1).any(|r| m[r * dim + c0..r * dim + c1].iter().any(|&x| x != 0.0)) {
                    blocks.push((r0, r1, c0, c1));
                }
            }
        }
        EnvMat { m, blocks }
    }

    /// y = E·x with x of shape dim×ncols.
    fn mul_left(&self, dim: usize, x: &[f64], ncols: usize, y: &mut [f64]) {
        y.fill(0.0);
        for &(r0, r1, c0, c1) in &self.blocks {
            gemm(
                r1 - r0,
                c1 - c0,
                ncols,
                1.0,
                &self.m[r0 * dim + c0..],
                dim as isize,
                1,
                &x[c0 * ncols..],
                ncols as isize,
                1,
                1.0,
                &mut y[r0 * ncols..],
                ncols as isize,
                1,
            );
        }
    }

    /// out += q·Eᵀ with q of shape rows×dim.
    fn mul_right_t(&self, dim: usize, q: &[f64], rows: usize, out: &mut [f64]) {
        for &(r0, r1, c0, c1) in &self.blocks {
            gemm(
                rows,
                c1 - c0,
                r1 - r0,
                1.0,
                &q[c0..],
                dim as isize,
                1,
                &self.m[r0 * dim + c0..],
                1,
                dim as isize,
                1.0,
                &mut out[r0..],
                dim as isize,
                1,
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn left_step(env: &Env, a: &[f64], chil: usize, d: usize, chir: usize, right_labels: &[usize], terms: &[MpoTerm], ops: &[Vec<f64>], n_right: usize) -> Env {
    let mut acc: Vec<Option<Vec<f64>>> = vec![None; n_right];
    let mut x = vec![0.0; chil * d * chir];
    for (wl, e) in env.iter().enumerate() {
        let Some(e) = e else { continue };
        if !terms.iter().any(|t| t.wl == wl) {
            continue;
        }
        e.mul_left(chil, a, d * chir, &mut x);
        for t in terms.iter().filter(|t| t.wl == wl) {
            accumulate(t, ops, &x, chil, d, chir, &mut acc[t.wr]);
        }
    }
    let ranges = label_ranges(right_labels);
    acc.into_iter()
        .map(|y| {
            y.map(|y| {
                let mut out = vec![0.0; chir * chir];
                matmul_at(chir, chil * d, chir, 1.0, a, &y, 0.0, &mut out);
                EnvMat::new(out, &ranges, chir)
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn right_step(env: &Env, a: &[f64], chil: usize, d: usize, chir: usize, left_labels: &[usize], terms: &[MpoTerm], ops: &[Vec<f64>], n_left: usize) -> Env {
    let mut acc: Vec<Option<Vec<f64>>> = vec![None; n_left];
    let mut x = vec![0.0; chil * d * chir];
    for (wr, e) in env.iter().enumerate() {
        let Some(e) = e else { continue };
        if !terms.iter().any(|t| t.wr == wr) {
            continue;
        }
        x.fill(0.0);
        e.mul_right_t(chir, a, chil * d, &mut x);
        for t in terms.iter().filter(|t| t.wr == wr) {
            accumulate(t, ops, &x, chil, d, chir, &mut acc[t.wl]);
        }
    }
    let ranges = label_ranges(left_labels);
    acc.into_iter()
        .map(|y| {
            y.map(|y| {
                let mut out = vec![0.0; chil * chil];
                matmul_bt(chil, d * chir, chil, 1.0, a, &y, 0.0, &mut out);
                EnvMat::new(out, &ranges, chil)
            })
        })
        .collect()
}

/// Two-site effective Hamiltonian acting on θ[a, s1, s2, b].
struct TwoSite<'a> {
    left: &'a Env,
    right: &'a Env,
    t1: Vec<MpoTerm>,
    t2: Vec<MpoTerm>,
    ops: &'a [Vec<f64>],
    chil: usize,
    chir: usize,
    d: usize,
    y: Vec<f64>,
    z: Vec<Option<Vec<f64>>>,
    q: Vec<Option<Vec<f64>>>,
}

impl<'a> TwoSite<'a> {
    fn new(mpo: &'a Mpo, i: usize, left: &'a Env, right: &'a Env, chil: usize, chir: usize) -> Self {
        let n_mid = mpo.bond_dims[i + 1];
        // drop terms that cannot connect a live left channel to a live right one
        let t2: Vec<MpoTerm> = mpo.sites[i + 1].iter().filter(|t| right[t.wr].is_some()).copied().collect();
        let mut mid_live = vec![false; n_mid];
        for t in &t2 {
            mid_live[t.wl] = true;
        }
        let t1: Vec<MpoTerm> = mpo.sites[i]
            .iter()
            .filter(|t| left[t.wl].is_some() && mid_live[t.wr])
            .copied()
            .collect();
        let mut mid_reached = vec![false; n_mid];
        for t in &t1 {
            mid_reached[t.wr] = true;
        }
        let t2: Vec<MpoTerm> = t2.into_iter().filter(|t| mid_reached[t.wl]).collect();
        let d = mpo.d;
        let len = chil * d * d * chir;
        let z = (0..n_mid).map(|w| mid_reached[w].then(|| vec![0.0; len])).collect();
        let mut right_used = vec![false; right.len()];
        for t in &t2 {
            right_used[t.wr] = true;
        }
        let q = right_used.iter().map(|&u| u.then(|| vec![0.0; len])).collect();
        TwoSite {
            left,
            right,
            t1,
            t2,
            ops: &mpo.ops,
            chil,
            chir,
            d,
            y: vec![0.0; len],
            z,
            q,
        }
    }

    /// Diagonal of the effective Hamiltonian, for preconditioning.
    fn diagonal(&self) -> Vec<f64> {
        let (chil, chir, d) = (self.chil, self.chir, self.d);
        let n_mid = self.z.len();
        let mut lsum = vec![vec![0.0; chil * d]; n_mid];
        let mut rsum = vec![vec![0.0; d * chir]; n_mid];
        for t in &self.t1 {
            let e = self.left[t.wl].as_ref().unwrap();
            let op = &self.ops[t.op];
            for a in 0..chil {
                let ea = e.m[a * chil + a];
                for s in 0..d {
                    lsum[t.wr][a * d + s] += t.coeff * ea * op[s * d + s];
                }
            }
        }
        for t in &self.t2 {
            let e = self.right[t.wr].as_ref().unwrap();
            let op = &self.ops[t.op];
            for s in 0..d {
                for b in 0..chir {
                    rsum[t.wl][s * chir + b] += t.coeff * op[s * d + s] * e.m[b * chir + b];
                }
            }
        }
        let mut diag = vec![0.0; chil * d * d * chir];
        for (l, r) in lsum.iter().zip(&rsum) {
            if l.iter().all(|&x| x == 0.0) || r.iter().all(|&x| x == 0.0) {
                continue;
            }
            for (i, &lv) in l.iter().enumerate() {
                if lv == 0.0 {
                    continue;
                }
                for (j, &rv) in r.iter().enumerate() {
                    diag[i * d * chir + j] += lv * rv;
                }
            }
        }
        diag
    }

    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        let (chil, chir, d) = (self.chil, self.chir, self.d);
        for v in self.z.iter_mut().chain(self.q.iter_mut()).flatten() {
            v.fill(0.0);
        }
        for (wl, e) in self.left.iter().enumerate() {
            let Some(e) = e else { continue };
            if !self.t1.iter().any(|t| t.wl == wl) {
                continue;
            }
            e.mul_left(chil, x, d * d * chir, &mut self.y);
            for t in self.t1.iter().filter(|t| t.wl == wl) {
                accumulate(t, self.ops, &self.y, chil, d, d * chir, &mut self.z[t.wr]);
            }
        }
        for t in &self.t2 {
            if let Some(zm) = &self.z[t.wl] {
                accumulate(t, self.ops, zm, chil * d, d, chir, &mut self.q[t.wr]);
            }
        }
        out.fill(0.0);
        for (wr, qv) in self.q.iter().enumerate() {
            if let (Some(qv), Some(r)) = (qv, &self.right[wr]) {
                r.mul_right_t(chir, qv, chil * d * d, out);
            }
        }
    }
}

impl MpsState {
    /// Random state in the N-particle sector, right-canonical with the
    /// center on site 0.
    pub fn random(model: &LatticeModel, seed: u64) -> Self {
        let l = model.n_sites;
        let n = model.n_particles;
        let nmax = model.n_max;
        let d = nmax + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels: Vec<Vec<usize>> = (0..=l)
            .map(|c| {
                let lo = n.saturating_sub(nmax * (l - c));
                let hi = n.min(nmax * c);
                (lo..=hi).collect()
            })
            .collect();
        let dims: Vec<usize> = labels.iter().map(|q| q.len()).collect();
        let tensors: Vec<Vec<f64>> = (0..l)
            .map(|c| {
                let (cl, cr) = (dims[c], dims[c + 1]);
                let mut t = vec![0.0; cl * d * cr];
                for a in 0..cl {
                    for s in 0..d {
                        for b in 0..cr {
                            if labels[c][a] + s == labels[c + 1][b] {
                                t[(a * d + s) * cr + b] = rng.random_range(-1.0..1.0);
                            }
                        }
                    }
                }
                t
            })
            .collect();
        let mut mps = MpsState {
            d,
            tensors,
            dims,
            labels,
            center: l - 1,
            truncation_log: Vec::new(),
        };
        for c in (1..l).rev() {
            mps.shift_left(c);
        }
        let nrm = mps.norm();
        mps.tensors[0].iter_mut().for_each(|x| *x /= nrm);
        mps
    }

    /// Equal superposition of the evenly spaced particle configurations
    /// (all translations by less than one spacing), plus a small random
    /// admixture in the full sector. Right-canonical, center on site 0.
    pub fn crystal_start(model: &LatticeModel, seed: u64) -> Self {
        let random = Self::random(model, seed);
        let l = model.n_sites;
        let n = model.n_particles;
        if n == 0 {
            return random;
        }
        let d = random.d;
        let shifts = (l / n).max(1);
        let configs: Vec<Vec<usize>> = (0..shifts)
            .map(|r| {
                let mut occ = vec![0; l];
                for j in 0..n {
                    occ[(j * l / n + r) % l] += 1;
                }
                occ
            })
            .collect();
        let inner = |c: usize, part: usize| if c == 0 || c == l { 1 } else { part };
        let dims: Vec<usize> = (0..=l)
            .map(|c| if c == 0 || c == l { 1 } else { shifts + random.dims[c] })
            .collect();
        let labels: Vec<Vec<usize>> = (0..=l)
            .map(|c| {
                if c == 0 || c == l {
                    return random.labels[c].clone();
                }
                let mut q: Vec<usize> = configs.iter().map(|o| o[..c].iter().sum()).collect();
                q.extend(&random.labels[c]);
                q
            })
            .collect();
        let eps = 0.1;
        let tensors: Vec<Vec<f64>> = (0..l)
            .map(|c| {
                let (cl, cr) = (dims[c], dims[c + 1]);
                let mut t = vec![0.0; cl * d * cr];
                let w = if c == 0 { 1.0 / (shifts as f64).sqrt() } else { 1.0 };
                for (r, occ) in configs.iter().enumerate() {
                    let a = if c == 0 { 0 } else { r };
                    let b = if c + 1 == l { 0 } else { r };
                    t[(a * d + occ[c]) * cr + b] = w;
                }
                // random block sits after the crystal indices
                let (rl, rr) = (inner(c, random.dims[c]), inner(c + 1, random.dims[c + 1]));
                let (ol, or) = (if c == 0 { 0 } else { shifts }, if c + 1 == l { 0 } else { shifts });
                let scale = if c == 0 { eps } else { 1.0 };
                let src = &random.tensors[c];
                for a in 0..rl {
                    for s in 0..d {
                        for b in 0..rr {
                            t[((ol + a) * d + s) * cr + or + b] += scale * src[(a * d + s) * rr + b];
                        }
                    }
                }
                t
            })
            .collect();
        let mut mps = MpsState {
            d,
            tensors,
            dims,
            labels,
            center: l - 1,
            truncation_log: Vec::new(),
        };
        for c in (1..l).rev() {
            mps.shift_left(c);
        }
        let nrm = mps.norm();
        mps.tensors[0].iter_mut().for_each(|x| *x /= nrm);
        mps
    }

    pub fn n_sites(&self) -> usize {
        self.tensors.len()
    }

    /// Moves the center from site c to c − 1 without truncation.
    fn shift_left(&mut self, c: usize) {
        let d = self.d;
        let (cl, cr) = (self.dims[c], self.dims[c + 1]);
        let row_q: Vec<i64> = self.labels[c].iter().map(|&q| q as i64).collect();
        let col_q: Vec<i64> = (0..d)
            .flat_map(|s| self.labels[c + 1].iter().map(move |&q| q as i64 - s as i64))
            .collect();
        let split = block_svd(&self.tensors[c], cl, d * cr, &row_q, &col_q, usize::MAX, 0.0, false);
        let k = split.s.len();
        let mut us = split.u.clone();
        for r in 0..cl {
            for j in 0..k {
                us[r * k + j] *= split.s[j];
            }
        }
        let cll = self.dims[c - 1];
        let mut prev = vec![0.0; cll * d * k];
        matmul(cll * d, cl, k, 1.0, &self.tensors[c - 1], &us, 0.0, &mut prev);
        self.tensors[c - 1] = prev;
        self.tensors[c] = split.vt;
        self.dims[c] = k;
        self.labels[c] = split.labels;
        self.center = c - 1;
    }

    fn transfer(&self, e: &[f64], c: usize, weights: Option<&[f64]>) -> Vec<f64> {
        let d = self.d;
        let (cl, cr) = (self.dims[c], self.dims[c + 1]);
        let a = &self.tensors[c];
        let mut x = vec![0.0; cl * d * cr];
        matmul(cl, cl, d * cr, 1.0, e, a, 0.0, &mut x);
        if let Some(w) = weights {
            for (idx, v) in x.iter_mut().enumerate() {
                *v *= w[(idx / cr) % d];
            }
        }
        let mut out = vec![0.0; cr * cr];
        matmul_at(cr, cl * d, cr, 1.0, a, &x, 0.0, &mut out);
        out
    }

    /// ⟨ψ|ψ⟩ by full contraction.
    pub fn norm(&self) -> f64 {
        let mut e = vec![1.0];
        for c in 0..self.n_sites() {
            e = self.transfer(&e, c, None);
        }
        e[0].sqrt()
    }

    /// ⟨n_i⟩ and ⟨n_i n_j⟩ (normal-ordered on the diagonal). Requires the
    /// center on site 0.
    pub fn density_correlations(&self) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(self.center, 0, "measurements need the center on site 0");
        let l = self.n_sites();
        let d = self.d;
        let n_w: Vec<f64> = (0..d).map(|s| s as f64).collect();
        let nn_w: Vec<f64> = (0..d).map(|s| (s * s.saturating_sub(1)) as f64).collect();
        let trace = |m: &[f64], k: usize| (0..k).map(|i| m[i * k + i]).sum::<f64>();
        let mut density = vec![0.0; l];
        let mut dd = vec![0.0; l * l];
        let mut g = vec![1.0];
        for i in 0..l {
            let k = self.dims[i + 1];
            let diag = self.transfer(&g, i, Some(&nn_w));
            dd[i * l + i] = trace(&diag, k);
            let mut x = self.transfer(&g, i, Some(&n_w));
            density[i] = trace(&x, k);
            for j in i + 1..l {
                let kj = self.dims[j + 1];
                let v = trace(&self.transfer(&x, j, Some(&n_w)), kj);
                dd[i * l + j] = v;
                dd[j * l + i] = v;
                if j + 1 < l {
                    x = self.transfer(&x, j, None);
                }
            }
            g = self.transfer(&g, i, None);
        }
        (density, dd)
    }
}

/// Outcome of a DMRG run, including the final state.
#[derive(Debug, Clone)]
pub struct DmrgRun {
    pub result: GroundStateResult,
    pub state: MpsState,
    /// Largest MPO bond dimension used.
    pub mpo_bond_dim: usize,
}

pub fn ground_state_dmrg(model: &LatticeModel, chi_max: usize, n_sweeps: usize, tol: f64) -> Result<GroundStateResult> {
    Ok(run_dmrg(model, &DmrgOptions::new(chi_max, n_sweeps, tol))?.result)
}

pub fn run_dmrg(model: &LatticeModel, opts: &DmrgOptions) -> Result<DmrgRun> {
    let l = model.n_sites;
    if l < 2 {
        return Err(Error::InvalidParameter {
            field: "n_sites",
            reason: "DMRG needs at least two sites".into(),
        });
    }
    if opts.chi_max == 0 || opts.n_sweeps == 0 {
        return Err(Error::InvalidParameter {
            field: "chi_max",
            reason: "chi_max and n_sweeps must be positive".into(),
        });
    }
    let mpo = Mpo::new(model);
    let d = mpo.d;
    let mut mps = MpsState::crystal_start(model, opts.seed);

    let mut left: Vec<Env> = vec![Vec::new(); l + 1];
    let mut right: Vec<Env> = vec![Vec::new(); l + 1];
    left[0] = vec![None; mpo.bond_dims[0]];
    left[0][CH_START] = Some(EnvMat::new(vec![1.0], &[(0, 1)], 1));
    right[l] = vec![None; mpo.bond_dims[l]];
    right[l][CH_DONE] = Some(EnvMat::new(vec![1.0], &[(0, 1)], 1));
    for c in (1..l).rev() {
        right[c] = right_step(&right[c + 1], &mps.tensors[c], mps.dims[c], d, mps.dims[c + 1], &mps.labels[c], &mpo.sites[c], &mpo.ops, mpo.bond_dims[c]);
    }

    let mut energies = Vec::new();
    let mut converged = false;
    let mut last_delta = f64::INFINITY;
    let mut energy = f64::INFINITY;
    let mut prev_full: Option<f64> = None;
    for sweep in 0..opts.n_sweeps {
        let chi = opts.chi_max.min(8usize << sweep.min(20));
        let lopts = DavidsonOptions {
            tol: opts.eig_tol,
            max_subspace: opts.max_subspace,
            max_matvecs: opts.max_matvecs,
        };
        let mut worst: f64 = 0.0;
        let mut step = |i: usize, to_right: bool, mps: &mut MpsState, left: &mut Vec<Env>, right: &mut Vec<Env>| -> f64 {
            let (chil, chim, chir) = (mps.dims[i], mps.dims[i + 1], mps.dims[i + 2]);
            let mut theta = vec![0.0; chil * d * d * chir];
            matmul(chil * d, chim, d * chir, 1.0, &mps.tensors[i], &mps.tensors[i + 1], 0.0, &mut theta);
            let mut heff = TwoSite::new(&mpo, i, &left[i], &right[i + 2], chil, chir);
            let diag = heff.diagonal();
            let eig = davidson_lowest(|x, y| heff.apply(x, y), &diag, theta, lopts);
            let row_q: Vec<i64> = (0..chil)
                .flat_map(|a| (0..d).map(move |s| (a, s)))
                .map(|(a, s)| (mps.labels[i][a] + s) as i64)
                .collect();
            let col_q: Vec<i64> = (0..d)
                .flat_map(|s| mps.labels[i + 2].iter().map(move |&q| q as i64 - s as i64))
                .collect();
            let split = block_svd(&eig.vector, chil * d, d * chir, &row_q, &col_q, chi, opts.svd_cutoff, true);
            worst = worst.max(split.discarded);
            let k = split.s.len();
            if to_right {
                let mut sv = split.vt;
                for j in 0..k {
                    sv[j * d * chir..(j + 1) * d * chir].iter_mut().for_each(|x| *x *= split.s[j]);
                }
                mps.tensors[i] = split.u;
                mps.tensors[i + 1] = sv;
                mps.center = i + 1;
            } else {
                let mut us = split.u;
                for r in 0..chil * d {
                    for j in 0..k {
                        us[r * k + j] *= split.s[j];
                    }
                }
                mps.tensors[i] = us;
                mps.tensors[i + 1] = split.vt;
                mps.center = i;
            }
            mps.dims[i + 1] = k;
            mps.labels[i + 1] = split.labels;
            if to_right {
                left[i + 1] = left_step(&left[i], &mps.tensors[i], chil, d, k, &mps.labels[i + 1], &mpo.sites[i], &mpo.ops, mpo.bond_dims[i + 1]);
            } else {
                right[i + 1] = right_step(&right[i + 2], &mps.tensors[i + 1], k, d, chir, &mps.labels[i + 1], &mpo.sites[i + 1], &mpo.ops, mpo.bond_dims[i + 1]);
            }
            eig.value
        };
        for i in 0..l - 1 {
            energy = step(i, true, &mut mps, &mut left, &mut right);
        }
        for i in (0..l - 1).rev() {
            energy = step(i, false, &mut mps, &mut left, &mut right);
        }
        mps.truncation_log.push(worst);
        energies.push(energy);
        if chi == opts.chi_max {
            if let Some(p) = prev_full {
                last_delta = (p - energy).abs();
                if last_delta < opts.tol {
                    converged = true;
                    break;
                }
            }
            prev_full = Some(energy);
        }
    }

    let (density, dd) = mps.density_correlations();
    let trunc = mps.truncation_log.last().copied().unwrap_or(0.0);
    let result = GroundStateResult::new(model, energy, energies, SolverMethod::Dmrg, density, dd, trunc, converged, last_delta);
    Ok(DmrgRun {
        result,
        state: mps,
        mpo_bond_dim: mpo.max_bond_dim(),
    })
}
