use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::matcore::random::haar_unitary;
use crate::matcore::{c64, ComplexMatrix};
use crate::rng::{rng_from_seed, trial_rng};

/// Largest dimension accepted by [`haar_sample`].
pub const MAX_HAAR_DIM: usize = 64;

/// Entries with modulus below this count as zero when choosing the phase anchor.
const ANCHOR_EPS: f64 = 1e-9;
/// Granularity of the rounded-entry keys used for deduplication.
const KEY_GRID: f64 = 1e9;

/// Rescales `u` by a unit phase so that its first nonzero entry in row-major
/// order is real and positive.
pub fn phase_canonicalize(u: &ComplexMatrix) -> ComplexMatrix {
    match u.data().iter().find(|z| z.norm() > ANCHOR_EPS) {
        Some(z) => u.scale(z.conj() / z.norm()),
        None => u.clone(),
    }
}

fn key(u: &ComplexMatrix) -> Vec<i64> {
    u.data().iter().flat_map(|z| [Float::round(z.re * KEY_GRID) as i64, Float::round(z.im * KEY_GRID) as i64]).collect()
}

/// Where the members of an ensemble come from.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleSource {
    /// A finite list, phase-canonical and duplicate-free.
    Explicit(Vec<ComplexMatrix>),
    /// `samples` Haar unitaries, member `i` drawn from the stream `(seed, i)`.
    Haar { seed: u64, samples: usize },
}

/// A finite unitary ensemble, either listed or drawn from the Haar measure.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryEnsemble {
    d: usize,
    source: EnsembleSource,
    design_order: Option<usize>,
    group: bool,
}

impl UnitaryEnsemble {
    /// Canonicalizes the phases of `elements`; duplicates (up to phase) are an error.
    pub fn explicit(elements: Vec<ComplexMatrix>, design_order: Option<usize>) -> Result<Self> {
        let d = elements.first().ok_or_else(|| domain("an ensemble needs at least one element"))?.rows();
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(elements.len());
        for u in &elements {
            if !u.is_square() || u.rows() != d {
                return Err(domain("ensemble elements must share one square dimension"));
            }
            u.ensure_unitary(1e-10)?;
            let c = phase_canonicalize(u);
            if !seen.insert(key(&c)) {
                return Err(domain("ensemble contains the same unitary twice up to phase"));
            }
            out.push(c);
        }
        Ok(Self { d, source: EnsembleSource::Explicit(out), design_order, group: false })
    }

    /// The group generated by `generators`, enumerated by breadth-first
    /// closure and deduplicated up to phase.
    ///
    /// Refuses to grow beyond `limit` elements.
    pub fn closure(generators: &[ComplexMatrix], design_order: Option<usize>, limit: usize) -> Result<Self> {
        let d = generators.first().ok_or_else(|| domain("need at least one generator"))?.rows();
        for g in generators {
            if !g.is_square() || g.rows() != d {
                return Err(domain("generators must share one square dimension"));
            }
            g.ensure_unitary(1e-10)?;
        }
        let id = ComplexMatrix::identity(d);
        let mut seen = BTreeSet::new();
        seen.insert(key(&id));
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(u) = queue.pop_front() {
            for g in generators {
                let v = phase_canonicalize(&(g * &u));
                if seen.insert(key(&v)) {
                    if elements.len() == limit {
                        return Err(Error::TooLarge { dim: limit + 1, limit });
                    }
                    elements.push(v.clone());
                    queue.push_back(v);
                }
            }
        }
        Ok(Self { d, source: EnsembleSource::Explicit(elements), design_order, group: true })
    }

    /// `samples` independent Haar unitaries of dimension `d`.
    pub fn haar(d: usize, seed: u64, samples: usize) -> Result<Self> {
        if d == 0 || d > MAX_HAAR_DIM || samples == 0 {
            return Err(domain("Haar ensembles need 1 ≤ d ≤ 64 and at least one sample"));
        }
        Ok(Self { d, source: EnsembleSource::Haar { seed, samples }, design_order: None, group: false })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        match &self.source {
            EnsembleSource::Explicit(v) => v.len(),
            EnsembleSource::Haar { samples, .. } => *samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source(&self) -> &EnsembleSource {
        &self.source
    }

    /// The listed elements, or `None` for a sampled ensemble.
    pub fn elements(&self) -> Option<&[ComplexMatrix]> {
        match &self.source {
            EnsembleSource::Explicit(v) => Some(v),
            EnsembleSource::Haar { .. } => None,
        }
    }

    /// Member `i`, generated on demand for sampled ensembles.
    pub fn member(&self, i: usize) -> ComplexMatrix {
        match &self.source {
            EnsembleSource::Explicit(v) => v[i].clone(),
            EnsembleSource::Haar { seed, .. } => haar_unitary(self.d, &mut trial_rng(*seed, i as u64)),
        }
    }

    /// All members in index order.
    pub fn members(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|i| self.member(i)).collect()
    }

    /// Claimed design order. It is metadata, checked only by the functions that
    /// depend on it.
    pub fn design_order(&self) -> Option<usize> {
        self.design_order
    }

    /// Whether the list is known to be closed under multiplication.
    pub fn is_group(&self) -> bool {
        self.group
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.source, EnsembleSource::Explicit(_))
    }

    /// Right-multiplies every element by `v` (the group flag is dropped).
    pub fn right_translate(&self, v: &ComplexMatrix) -> Result<Self> {
        let elems = self.elements().ok_or_else(|| domain("only explicit ensembles can be translated"))?;
        Self::explicit(elems.iter().map(|u| u * v).collect(), self.design_order)
    }
}

/// One Haar unitary from the seed `seed`.
pub fn haar_sample(d: usize, seed: u64) -> Result<ComplexMatrix> {
    if d == 0 || d > MAX_HAAR_DIM {
        return Err(domain("Haar sampling supports 1 ≤ d ≤ 64"));
    }
    Ok(haar_unitary(d, &mut rng_from_seed(seed)))
}

fn pauli_matrices() -> [ComplexMatrix; 4] {
    let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    let m = |a, b, c, d| ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("2x2");
    [m(l, o, o, l), m(o, l, l, o), m(o, -i, i, o), m(l, o, o, -l)]
}

fn embed(op: &ComplexMatrix, k: usize, n: usize) -> ComplexMatrix {
    let before = ComplexMatrix::identity(1 << k);
    let after = ComplexMatrix::identity(1 << (n - k - 1));
    before.kron(op).kron(&after)
}

/// The `4^n` Pauli strings on `n ≤ 2` qubits, an exact 1-design.
pub fn pauli_ensemble(n: usize) -> Result<UnitaryEnsemble> {
    if n == 0 || n > 2 {
        return Err(domain("Pauli ensembles are enumerated for n = 1, 2"));
    }
    let ps = pauli_matrices();
    let mut out = vec![ComplexMatrix::identity(1)];
    for _ in 0..n {
        out = out.iter().flat_map(|a| ps.iter().map(move |p| a.kron(p))).collect();
    }
    UnitaryEnsemble::explicit(out, Some(1))
}

/// The Clifford group on `n ≤ 2` qubits modulo phases (24 and 11520
/// elements), an exact 3-design.
pub fn clifford_ensemble(n: usize) -> Result<UnitaryEnsemble> {
    if n == 0 || n > 2 {
        return Err(domain("Clifford enumeration is limited to n = 1, 2"));
    }
    let s = Float::sqrt(0.5);
    let h = ComplexMatrix::from_real(2, 2, &[s, s, s, -s])?;
    let ph = ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.0, 1.0)]);
    let mut gens = Vec::new();
    for k in 0..n {
        gens.push(embed(&h, k, n));
        gens.push(embed(&ph, k, n));
    }
    if n == 2 {
        let swap_low = [0, 1, 3, 2];
        gens.push(ComplexMatrix::from_fn(4, 4, |r, c| c64(if swap_low[r] == c { 1.0 } else { 0.0 }, 0.0)));
    }
    UnitaryEnsemble::closure(&gens, Some(3), 11520)
}
