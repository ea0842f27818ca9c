//! Exact diagonalization in the fixed-particle-number sector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lanczos::{lowest_eigenpair, LanczosOptions};
use super::model::LatticeModel;
use super::result::{GroundStateResult, SolverMethod};
use crate::error::{Error, Result};

pub const ED_DIMENSION_LIMIT: usize = 2_000_000;
pub const DEFAULT_SEED: u64 = 0x005e_ed1d;
// Above this many stored non-zeros the matrix is applied on the fly.
const CSR_NNZ_LIMIT: usize = 40_000_000;

/// Occupation basis of `n_sites` sites, `n` particles and at most `cap`
/// per site, in lexicographic order.
#[derive(Debug, Clone)]
pub struct FockBasis {
    pub n_sites: usize,
    pub n_particles: usize,
    pub cap: usize,
    // ways[k][m]: configurations of m particles on k sites
    ways: Vec<Vec<u128>>,
    states: Vec<u8>,
}

fn ways_table(n_sites: usize, n: usize, cap: usize) -> Vec<Vec<u128>> {
    let mut w = vec![vec![0u128; n + 1]; n_sites + 1];
    w[0][0] = 1;
    for k in 1..=n_sites {
        for m in 0..=n {
            let mut s = 0u128;
            for v in 0..=cap.min(m) {
                s = s.saturating_add(w[k - 1][m - v]);
            }
            w[k][m] = s;
        }
    }
    w
}

/// Dimension of the fixed-N sector without building it.
pub fn sector_dimension(n_sites: usize, n: usize, cap: usize) -> u128 {
    ways_table(n_sites, n, cap)[n_sites][n]
}

impl FockBasis {
    pub fn new(n_sites: usize, n: usize, cap: usize, limit: usize) -> Result<Self> {
        let ways = ways_table(n_sites, n, cap);
        let dim = ways[n_sites][n];
        if dim > limit as u128 {
            return Err(Error::DimensionTooLarge { dim, limit });
        }
        let dim = dim as usize;
        let mut states = Vec::with_capacity(dim * n_sites);
        let mut cur = vec![0u8; n_sites];
        enumerate(&ways, &mut cur, 0, n, cap, &mut states);
        debug_assert_eq!(states.len(), dim * n_sites);
        Ok(FockBasis {
            n_sites,
            n_particles: n,
            cap,
            ways,
            states,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len() / self.n_sites
    }

    pub fn state(&self, r: usize) -> &[u8] {
        &self.states[r * self.n_sites..(r + 1) * self.n_sites]
    }

    pub fn rank(&self, occ: &[u8]) -> usize {
        let l = self.n_sites;
        let mut left = self.n_particles;
        let mut r: u128 = 0;
        for (i, &ni) in occ.iter().enumerate() {
            for v in 0..ni as usize {
                r += self.ways[l - i - 1][left - v];
            }
            left -= ni as usize;
        }
        r as usize
    }
}

fn enumerate(ways: &[Vec<u128>], cur: &mut [u8], site: usize, left: usize, cap: usize, out: &mut Vec<u8>) {
    let l = cur.len();
    if site == l {
        if left == 0 {
            out.extend_from_slice(cur);
        }
        return;
    }
    for v in 0..=cap.min(left) {
        if ways[l - site - 1][left - v] == 0 {
            continue;
        }
        cur[site] = v as u8;
        enumerate(ways, cur, site + 1, left - v, cap, out);
    }
    cur[site] = 0;
}

pub(crate) fn diagonal(model: &LatticeModel, occ: &[u8]) -> f64 {
    let v0 = model.onsite_interaction();
    let mut e = 0.0;
    for (i, &ni) in occ.iter().enumerate() {
        if ni == 0 {
            continue;
        }
        let n = ni as f64;
        e += model.onsite * n + 0.5 * v0 * n * (n - 1.0);
        for (j, &nj) in occ.iter().enumerate().skip(i + 1) {
            if nj > 0 {
                e += model.pair(i, j) * n * nj as f64;
            }
        }
    }
    e
}

enum Operator {
    Csr {
        diag: Vec<f64>,
        row_ptr: Vec<usize>,
        cols: Vec<u32>,
        vals: Vec<f64>,
    },
    OnTheFly {
        diag: Vec<f64>,
    },
}

struct Hamiltonian<'a> {
    model: &'a LatticeModel,
    basis: &'a FockBasis,
    bonds: Vec<(usize, usize)>,
    op: Operator,
}

impl<'a> Hamiltonian<'a> {
    fn new(model: &'a LatticeModel, basis: &'a FockBasis) -> Self {
        let bonds = model.bonds();
        let dim = basis.dim();
        let diag: Vec<f64> = (0..dim).map(|r| diagonal(model, basis.state(r))).collect();
        let est_nnz = dim * 2 * bonds.len().min(2 * model.n_particles.max(1));
        let mut h = Hamiltonian {
            model,
            basis,
            bonds,
            op: Operator::OnTheFly { diag },
        };
        if est_nnz <= CSR_NNZ_LIMIT {
            let mut row_ptr = Vec::with_capacity(dim + 1);
            let mut cols = Vec::new();
            let mut vals = Vec::new();
            row_ptr.push(0);
            for r in 0..dim {
                h.for_each_hop(r, |c, v| {
                    cols.push(c as u32);
                    vals.push(v);
                });
                row_ptr.push(cols.len());
            }
            let Operator::OnTheFly { diag } = std::mem::replace(&mut h.op, Operator::OnTheFly { diag: vec![] }) else {
                unreachable!()
            };
            h.op = Operator::Csr {
                diag,
                row_ptr,
                cols,
                vals,
            };
        }
        h
    }

    /// Calls `emit(column, value)` for each off-diagonal element in row `r`.
    fn for_each_hop(&self, r: usize, mut emit: impl FnMut(usize, f64)) {
        let occ = self.basis.state(r);
        let mut tmp = occ.to_vec();
        let cap = self.basis.cap as u8;
        let t = self.model.hop;
        for &(i, j) in &self.bonds {
            for (a, b) in [(i, j), (j, i)] {
                // b_a† b_b
                if occ[b] > 0 && occ[a] < cap {
                    let amp = -t * ((occ[a] as f64 + 1.0) * occ[b] as f64).sqrt();
                    tmp[a] += 1;
                    tmp[b] -= 1;
                    emit(self.basis.rank(&tmp), amp);
                    tmp[a] -= 1;
                    tmp[b] += 1;
                }
            }
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match &self.op {
            Operator::Csr {
                diag,
                row_ptr,
                cols,
                vals,
            } => {
                for r in 0..x.len() {
                    let mut s = diag[r] * x[r];
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        s += vals[k] * x[cols[k] as usize];
                    }
                    y[r] = s;
                }
            }
            Operator::OnTheFly { diag } => {
                for r in 0..x.len() {
                    let mut s = diag[r] * x[r];
                    self.for_each_hop(r, |c, v| s += v * x[c]);
                    y[r] = s;
                }
            }
        }
    }
}

/// Ground state by Lanczos in the fixed-N sector with the default seed.
pub fn ground_state_ed(model: &LatticeModel) -> Result<GroundStateResult> {
    ground_state_ed_seeded(model, DEFAULT_SEED)
}

pub fn ground_state_ed_seeded(model: &LatticeModel, seed: u64) -> Result<GroundStateResult> {
    let basis = FockBasis::new(model.n_sites, model.n_particles, model.n_max, ED_DIMENSION_LIMIT)?;
    let h = Hamiltonian::new(model, &basis);
    let dim = basis.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let krylov = (100_000_000 / dim.max(1)).clamp(20, 80);
    let opts = LanczosOptions {
        max_krylov: krylov,
        ..LanczosOptions::default()
    };
    let r = lowest_eigenpair(|x, y| h.apply(x, y), start, opts);
    if !r.converged {
        return Err(Error::EigenNotConverged {
            residual: r.residual,
            iterations: r.matvecs,
        });
    }
    let l = model.n_sites;
    let mut dens = vec![0.0; l];
    let mut corr = vec![0.0; l * l];
    for (idx, &amp) in r.vector.iter().enumerate() {
        let p = amp * amp;
        if p == 0.0 {
            continue;
        }
        let occ = basis.state(idx);
        for i in 0..l {
            let ni = occ[i] as f64;
            if ni == 0.0 {
                continue;
            }
            dens[i] += p * ni;
            corr[i * l + i] += p * ni * (ni - 1.0);
            for j in i + 1..l {
                let v = p * ni * occ[j] as f64;
                corr[i * l + j] += v;
                corr[j * l + i] += v;
            }
        }
    }
    Ok(GroundStateResult::new(
        model,
        r.value,
        vec![r.value],
        SolverMethod::Ed,
        dens,
        corr,
        0.0,
        true,
        r.residual,
    ))
}

/// Dense Hamiltonian of the sector, for small-dimension checks.
pub fn dense_hamiltonian(model: &LatticeModel) -> Result<(FockBasis, Vec<f64>)> {
    let basis = FockBasis::new(model.n_sites, model.n_particles, model.n_max, 4096)?;
    let h = Hamiltonian::new(model, &basis);
    let n = basis.dim();
    let mut m = vec![0.0; n * n];
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[c] = 1.0;
        h.apply(&e, &mut col);
        for r in 0..n {
            m[r * n + c] = col[r];
        }
    }
    Ok((basis, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::model::Boundary;

    #[test]
    fn rank_inverts_enumeration() {
        let b = FockBasis::new(6, 4, 2, 100_000).unwrap();
        assert_eq!(b.dim() as u128, sector_dimension(6, 4, 2));
        for r in 0..b.dim() {
            assert_eq!(b.rank(b.state(r)), r);
        }
    }

    #[test]
    fn two_site_single_particle() {
        let m = LatticeModel::from_parts(2, 1.0, 2.0, vec![0.0], Boundary::Open, 1, 1).unwrap();
        let g = ground_state_ed(&m).unwrap();
        assert!((g.energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_limit_reported() {
        let m = LatticeModel::from_parts(100, 1.0, 0.0, vec![0.0], Boundary::Open, 3, 10).unwrap();
        match ground_state_ed(&m) {
            Err(Error::DimensionTooLarge { dim, .. }) => assert_eq!(dim, sector_dimension(100, 10, 3)),
            other => panic!("{other:?}"),
        }
    }
}
