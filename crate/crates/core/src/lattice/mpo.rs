//! Matrix-product operator of the lattice Hamiltonian.
//!
//! Channel layout on every bond: 0 = nothing placed yet, 1 = complete,
//! 2/3 = open hopping (b† / b placed), 4/5 = open wrap-around hopping,
//! 6.. = interaction channels. The pair interaction Σ_{i<j} V_ij n_i n_j is
//! routed through a per-bond SVD of the coupling block
//! M_c[i, j] = V_ij (i < c ≤ j), keeping singular values above
//! `svd_tol`·σ_max; consecutive bonds are linked by projecting the new left
//! vectors onto the previous ones.

use nalgebra::DMatrix;

use super::linalg::svd;
use super::model::{Boundary, LatticeModel};

pub const CH_START: usize = 0;
pub const CH_DONE: usize = 1;
const CH_HOP_CREATE: usize = 2;
const CH_HOP_ANNIHILATE: usize = 3;
const CH_WRAP_CREATE: usize = 4;
const CH_WRAP_ANNIHILATE: usize = 5;
const CH_INT: usize = 6;

pub const OP_ID: usize = 0;
pub const OP_N: usize = 1;
pub const OP_B: usize = 2;
pub const OP_BDAG: usize = 3;
pub const OP_LOCAL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpoTerm {
    pub wl: usize,
    pub wr: usize,
    pub op: usize,
    pub coeff: f64,
}

#[derive(Debug, Clone)]
pub struct Mpo {
    /// Local dimension n_max + 1.
    pub d: usize,
    /// Dense d×d local operators indexed by `OP_*`.
    pub ops: Vec<Vec<f64>>,
    /// Terms per site.
    pub sites: Vec<Vec<MpoTerm>>,
    /// Channel count per bond (length n_sites + 1).
    pub bond_dims: Vec<usize>,
    /// Largest discarded singular value relative to the kept maximum.
    pub discarded: f64,
}

pub const DEFAULT_SVD_TOL: f64 = 1e-14;

fn local_ops(model: &LatticeModel) -> Vec<Vec<f64>> {
    let d = model.n_max + 1;
    let mut id = vec![0.0; d * d];
    let mut n = vec![0.0; d * d];
    let mut b = vec![0.0; d * d];
    let mut bd = vec![0.0; d * d];
    let mut loc = vec![0.0; d * d];
    let v0 = model.onsite_interaction();
    for s in 0..d {
        let x = s as f64;
        id[s * d + s] = 1.0;
        n[s * d + s] = x;
        loc[s * d + s] = model.onsite * x + 0.5 * v0 * x * (x - 1.0);
        if s + 1 < d {
            // ⟨s|b|s+1⟩ = √(s+1)
            b[s * d + s + 1] = (x + 1.0).sqrt();
            bd[(s + 1) * d + s] = (x + 1.0).sqrt();
        }
    }
    vec![id, n, b, bd, loc]
}

struct BondSvd {
    // u[i][k] for i < c
    u: Vec<Vec<f64>>,
    // s_k·W[c][k], the weight of n_c in the channel-k completion
    first_col: Vec<f64>,
}

fn bond_svd(model: &LatticeModel, c: usize, tol: f64, discarded: &mut f64) -> BondSvd {
    let l = model.n_sites;
    if c == 0 || c == l {
        return BondSvd {
            u: vec![Vec::new(); c],
            first_col: Vec::new(),
        };
    }
    let m = DMatrix::from_fn(c, l - c, |i, j| model.pair(i, c + j));
    if m.iter().all(|&x| x == 0.0) {
        return BondSvd {
            u: vec![Vec::new(); c],
            first_col: Vec::new(),
        };
    }
    let svd = svd(m);
    let (u, vt) = (&svd.u, &svd.v_t);
    let mut order: Vec<usize> = (0..svd.s.len()).collect();
    order.sort_by(|&a, &b| svd.s[b].partial_cmp(&svd.s[a]).unwrap());
    let smax = svd.s[order[0]];
    let keep: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| svd.s[k] > tol * smax)
        .collect();
    for &k in &order {
        let s = svd.s[k];
        if s <= tol * smax {
            *discarded = discarded.max(s / smax);
        }
    }
    // fix the sign of each singular pair for reproducibility
    let mut uu = vec![vec![0.0; keep.len()]; c];
    let mut first = vec![0.0; keep.len()];
    for (kk, &k) in keep.iter().enumerate() {
        let mut piv = 0;
        for i in 0..c {
            if u[(i, k)].abs() > u[(piv, k)].abs() + 1e-12 {
                piv = i;
            }
        }
        let sign = if u[(piv, k)] < 0.0 { -1.0 } else { 1.0 };
        for (i, row) in uu.iter_mut().enumerate() {
            row[kk] = sign * u[(i, k)];
        }
        first[kk] = sign * svd.s[k] * vt[(k, 0)];
    }
    BondSvd { u: uu, first_col: first }
}

impl Mpo {
    pub fn new(model: &LatticeModel) -> Self {
        Self::with_tolerance(model, DEFAULT_SVD_TOL)
    }

    pub fn with_tolerance(model: &LatticeModel, tol: f64) -> Self {
        let l = model.n_sites;
        let t = model.hop;
        let periodic = model.boundary == Boundary::Periodic;
        let mut discarded: f64 = 0.0;
        let bonds: Vec<BondSvd> = (0..=l).map(|c| bond_svd(model, c, tol, &mut discarded)).collect();
        let kdim = |c: usize| bonds[c].first_col.len();
        let bond_dims: Vec<usize> = (0..=l).map(|c| CH_INT + kdim(c)).collect();
        let mut sites = Vec::with_capacity(l);
        for c in 0..l {
            let mut terms = vec![
                MpoTerm { wl: CH_START, wr: CH_START, op: OP_ID, coeff: 1.0 },
                MpoTerm { wl: CH_DONE, wr: CH_DONE, op: OP_ID, coeff: 1.0 },
                MpoTerm { wl: CH_START, wr: CH_DONE, op: OP_LOCAL, coeff: 1.0 },
            ];
            if c + 1 < l {
                terms.push(MpoTerm { wl: CH_START, wr: CH_HOP_CREATE, op: OP_BDAG, coeff: 1.0 });
                terms.push(MpoTerm { wl: CH_START, wr: CH_HOP_ANNIHILATE, op: OP_B, coeff: 1.0 });
            }
            if c > 0 {
                terms.push(MpoTerm { wl: CH_HOP_CREATE, wr: CH_DONE, op: OP_B, coeff: -t });
                terms.push(MpoTerm { wl: CH_HOP_ANNIHILATE, wr: CH_DONE, op: OP_BDAG, coeff: -t });
            }
            if periodic && l > 2 {
                if c == 0 {
                    terms.push(MpoTerm { wl: CH_START, wr: CH_WRAP_CREATE, op: OP_BDAG, coeff: 1.0 });
                    terms.push(MpoTerm { wl: CH_START, wr: CH_WRAP_ANNIHILATE, op: OP_B, coeff: 1.0 });
                } else if c + 1 < l {
                    terms.push(MpoTerm { wl: CH_WRAP_CREATE, wr: CH_WRAP_CREATE, op: OP_ID, coeff: 1.0 });
                    terms.push(MpoTerm { wl: CH_WRAP_ANNIHILATE, wr: CH_WRAP_ANNIHILATE, op: OP_ID, coeff: 1.0 });
                } else {
                    terms.push(MpoTerm { wl: CH_WRAP_CREATE, wr: CH_DONE, op: OP_B, coeff: -t });
                    terms.push(MpoTerm { wl: CH_WRAP_ANNIHILATE, wr: CH_DONE, op: OP_BDAG, coeff: -t });
                }
            }
            let (left, right) = (&bonds[c], &bonds[c + 1]);
            for (k, &w) in left.first_col.iter().enumerate() {
                if w != 0.0 {
                    terms.push(MpoTerm { wl: CH_INT + k, wr: CH_DONE, op: OP_N, coeff: w });
                }
            }
            for k2 in 0..kdim(c + 1) {
                let w = right.u[c][k2];
                if w != 0.0 {
                    terms.push(MpoTerm { wl: CH_START, wr: CH_INT + k2, op: OP_N, coeff: w });
                }
                for k1 in 0..kdim(c) {
                    let tr: f64 = (0..c).map(|i| left.u[i][k1] * right.u[i][k2]).sum();
                    if tr != 0.0 {
                        terms.push(MpoTerm { wl: CH_INT + k1, wr: CH_INT + k2, op: OP_ID, coeff: tr });
                    }
                }
            }
            sites.push(terms);
        }
        Mpo {
            d: model.n_max + 1,
            ops: local_ops(model),
            sites,
            bond_dims,
            discarded,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims.iter().copied().max().unwrap_or(0)
    }

    /// Full d^L matrix (row-major), for small-system checks.
    pub fn to_dense(&self) -> Vec<f64> {
        let l = self.n_sites();
        let d = self.d;
        let big = d.pow(l as u32);
        // state[w] is a big×big operator being accumulated per channel
        let mut cur: Vec<Option<Vec<f64>>> = vec![None; self.bond_dims[0]];
        cur[CH_START] = Some(vec![1.0]);
        let mut dim = 1;
        for site in 0..l {
            let nd = dim * d;
            let mut next: Vec<Option<Vec<f64>>> = vec![None; self.bond_dims[site + 1]];
            for t in &self.sites[site] {
                let Some(x) = &cur[t.wl] else { continue };
                let op = &self.ops[t.op];
                let acc = next[t.wr].get_or_insert_with(|| vec![0.0; nd * nd]);
                for r in 0..dim {
                    for cidx in 0..dim {
                        let v = x[r * dim + cidx];
                        if v == 0.0 {
                            continue;
                        }
                        for s1 in 0..d {
                            for s2 in 0..d {
                                let o = op[s1 * d + s2];
                                if o != 0.0 {
                                    acc[(r * d + s1) * nd + cidx * d + s2] += t.coeff * v * o;
                                }
                            }
                        }
                    }
                }
            }
            cur = next;
            dim = nd;
        }
        debug_assert_eq!(dim, big);
        cur[CH_DONE].take().unwrap_or_else(|| vec![0.0; big * big])
    }
}
