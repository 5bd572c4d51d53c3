//! Local unitaries that permute the seed parameters.
//!
//! The seed is `Σ_x p_x |B_x⟩|B_x⟩` over the four Bell states `B_x`, so a
//! product of Clifford gates can map it to a seed with permuted and
//! rephased parameters. We enumerate every such action reachable from
//! four-fold products of a small gate set and keep one representative per
//! distinct action.

use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;

use crate::qla::{c, LocalOperator, StateVector, C64, ONE};
use crate::states::{ProductOperator, SeedParams4};

/// `U e_x = phase[x] · e_{perm[x]}` for the unit seeds `e_x`.
#[derive(Debug, Clone)]
pub struct Relabel {
    pub unitary: ProductOperator,
    pub perm: [usize; 4],
    pub phase: [C64; 4],
}

impl Relabel {
    /// Parameters of `U|Ψ_p⟩` as a seed.
    pub fn apply(&self, p: &[C64; 4]) -> [C64; 4] {
        let mut out = [ONE; 4];
        for x in 0..4 {
            out[self.perm[x]] = self.phase[x] * p[x];
        }
        out
    }
}

fn unit_seeds() -> [StateVector; 4] {
    let z = C64::new(0.0, 0.0);
    let mk = |i: usize| {
        let mut p = [z; 4];
        p[i] = ONE;
        SeedParams4::from_array(p).vector()
    };
    [mk(0), mk(1), mk(2), mk(3)]
}

fn action(ops: &[LocalOperator], seeds: &[StateVector; 4]) -> Option<([usize; 4], [C64; 4])> {
    let mut perm = [0usize; 4];
    let mut phase = [ONE; 4];
    let mut used = [false; 4];
    for x in 0..4 {
        let v = seeds[x].apply_product(ops);
        let mut hit = None;
        for y in 0..4 {
            let m = seeds[y].inner(&v);
            if (m.norm() - 1.0).abs() < 1e-9 {
                hit = Some((y, m));
            } else if m.norm() > 1e-9 {
                return None;
            }
        }
        let (y, m) = hit?;
        if used[y] {
            return None;
        }
        used[y] = true;
        perm[x] = y;
        phase[x] = m;
    }
    Some((perm, phase))
}

type Key = ([usize; 4], [(i64, i64); 3]);

fn key(perm: &[usize; 4], phase: &[C64; 4]) -> Key {
    let r = |z: C64| {
        let w = z / phase[0];
        ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
    };
    (*perm, [r(phase[1]), r(phase[2]), r(phase[3])])
}

fn gates() -> [LocalOperator; 8] {
    let h = LocalOperator::hadamard();
    let s = LocalOperator::diag(ONE, c(0.0, 1.0));
    let sd = s.adjoint();
    [
        LocalOperator::identity(),
        LocalOperator::x(),
        LocalOperator::y(),
        LocalOperator::z(),
        h,
        s,
        h * s * h,
        sd,
    ]
}

fn build() -> Vec<Relabel> {
    let seeds = unit_seeds();
    let g = gates();
    let mut found: BTreeMap<Key, Relabel> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for i in 0..8usize.pow(4) {
        let ops = [g[i % 8], g[(i / 8) % 8], g[(i / 64) % 8], g[i / 512]];
        if let Some((perm, phase)) = action(&ops, &seeds) {
            let k = key(&perm, &phase);
            if let std::collections::btree_map::Entry::Vacant(e) = found.entry(k) {
                let r = Relabel {
                    unitary: ProductOperator(ops.to_vec()),
                    perm,
                    phase,
                };
                e.insert(r.clone());
                queue.push_back(r);
            }
        }
    }
    let gens: Vec<Relabel> = found.values().cloned().collect();
    while let Some(a) = queue.pop_front() {
        for b in &gens {
            let ops = a.unitary.compose(&b.unitary);
            if let Some((perm, phase)) = action(ops.ops(), &seeds) {
                let k = key(&perm, &phase);
                if let std::collections::btree_map::Entry::Vacant(e) = found.entry(k) {
                    let r = Relabel {
                        unitary: ops,
                        perm,
                        phase,
                    };
                    e.insert(r.clone());
                    queue.push_back(r);
                }
            }
        }
    }
    found.into_values().collect()
}

/// Every distinct relabelling action, computed once.
pub fn relabel_group() -> &'static [Relabel] {
    static GROUP: OnceLock<Vec<Relabel>> = OnceLock::new();
    GROUP.get_or_init(build)
}
