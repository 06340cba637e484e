use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::matcore::{op_norm, ComplexMatrix, DimSpec, C64};

const MEASUREMENT_TOL: f64 = 1e-10;
/// Largest Alice dimension a parallel repetition may reach.
pub const MAX_REPEATED_DIM: usize = 512;

/// Alice's side of a monogamy-of-entanglement game: for each question `θ`, a
/// projective measurement `{A^θ_x}` on a `dim_a`-dimensional register.
#[derive(Debug, Clone, PartialEq)]
pub struct MOEGame {
    dim_a: usize,
    measurements: Vec<Vec<ComplexMatrix>>,
}

pub(crate) fn check_projective(ms: &[ComplexMatrix], d: usize, what: &str) -> Result<()> {
    let mut sum = ComplexMatrix::zeros(d, d);
    for m in ms {
        if m.rows() != d || m.cols() != d {
            return Err(domain(format!("{what}: element is {}x{}, expected {d}x{d}", m.rows(), m.cols())));
        }
        if m.hermiticity_defect() > MEASUREMENT_TOL || (m * m).max_abs_diff(m) > MEASUREMENT_TOL {
            return Err(Error::Invariant(format!("{what}: element is not an orthogonal projector")));
        }
        sum = &sum + m;
    }
    if sum.max_abs_diff(&ComplexMatrix::identity(d)) > MEASUREMENT_TOL {
        return Err(Error::Invariant(format!("{what}: elements do not sum to the identity")));
    }
    Ok(())
}

impl MOEGame {
    /// Validates completeness and projectivity of every measurement.
    pub fn new(dim_a: usize, measurements: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        if measurements.is_empty() {
            return Err(domain("a game needs at least one question"));
        }
        let answers = measurements[0].len();
        for (theta, ms) in measurements.iter().enumerate() {
            if ms.len() != answers {
                return Err(domain("every question must have the same answer set"));
            }
            check_projective(ms, dim_a, &format!("question {theta}"))?;
        }
        Ok(Self { dim_a, measurements })
    }

    /// The game whose question `θ` measures in the orthonormal basis given by the
    /// columns of `bases[θ]`.
    pub fn from_bases(bases: &[ComplexMatrix]) -> Result<Self> {
        let d = bases.first().ok_or_else(|| domain("no bases given"))?.rows();
        let ms = bases
            .iter()
            .map(|v| {
                v.ensure_unitary(MEASUREMENT_TOL)?;
                Ok((0..d).map(|x| ComplexMatrix::projector(&v.col(x))).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, ms)
    }

    /// Computational and Hadamard basis on one qubit.
    pub fn bb84() -> Self {
        let h = Float::sqrt(0.5);
        let had = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("constant");
        Self::from_bases(&[ComplexMatrix::identity(2), had]).expect("constant")
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn questions(&self) -> usize {
        self.measurements.len()
    }

    pub fn answers(&self) -> usize {
        self.measurements[0].len()
    }

    /// `A^θ_x`.
    pub fn element(&self, theta: usize, x: usize) -> &ComplexMatrix {
        &self.measurements[theta][x]
    }

    pub fn measurements(&self) -> &[Vec<ComplexMatrix>] {
        &self.measurements
    }
}

/// `r`-fold parallel repetition: questions and answers are tuples read
/// big-endian, and `A^{(θ_1..θ_r)}_{(x_1..x_r)} = ⊗_k A^{θ_k}_{x_k}`.
pub fn parallel_repeat(g: &MOEGame, r: usize) -> Result<MOEGame> {
    if r == 0 {
        return Err(domain("repetition count must be at least 1"));
    }
    let dim = g.dim_a.checked_pow(r as u32).filter(|&d| d <= MAX_REPEATED_DIM);
    let dim = dim.ok_or(Error::TooLarge { dim: g.dim_a.saturating_pow(r as u32), limit: MAX_REPEATED_DIM })?;
    let (nq, na) = (g.questions(), g.answers());
    let qdims = DimSpec::uniform(nq, r);
    let adims = DimSpec::uniform(na, r);
    let measurements = (0..qdims.total())
        .map(|th| {
            let thetas = qdims.digits(th);
            (0..adims.total())
                .map(|x| {
                    let xs = adims.digits(x);
                    ComplexMatrix::kron_all(thetas.iter().zip(&xs).map(|(&t, &x)| g.element(t, x)))
                })
                .collect()
        })
        .collect();
    Ok(MOEGame { dim_a: dim, measurements })
}

/// `max_{θ≠θ', x, x'} ‖A^θ_x A^{θ'}_{x'}‖`.
pub fn pairwise_overlap(g: &MOEGame) -> Result<f64> {
    if g.questions() < 2 {
        return Err(domain("pairwise overlap needs at least two questions"));
    }
    let mut best: f64 = 0.0;
    for t1 in 0..g.questions() {
        for t2 in 0..g.questions() {
            if t1 == t2 {
                continue;
            }
            for a in &g.measurements[t1] {
                for b in &g.measurements[t2] {
                    best = best.max(op_norm(&(a * b))?);
                }
            }
        }
    }
    Ok(best)
}

/// `1/|Θ| + (|Θ|-1)/|Θ| · pairwise_overlap`, or `1` for a single question.
pub fn tfkw_bound(g: &MOEGame) -> Result<f64> {
    let q = g.questions() as f64;
    if g.questions() == 1 {
        return Ok(1.0);
    }
    Ok(1.0 / q + (q - 1.0) / q * pairwise_overlap(g)?)
}

/// A tripartite state on `A ⊗ B ⊗ C` with Bob's and Charlie's measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct MOEStrategy {
    pub rho: ComplexMatrix,
    pub dims: [usize; 3],
    pub bob: Vec<Vec<ComplexMatrix>>,
    pub charlie: Vec<Vec<ComplexMatrix>>,
}

impl MOEStrategy {
    pub fn validate(&self, g: &MOEGame) -> Result<()> {
        let [da, db, dc] = self.dims;
        if da != g.dim_a {
            return Err(domain("strategy's Alice register does not match the game"));
        }
        let d = da * db * dc;
        if !self.rho.is_square() || self.rho.rows() != d {
            return Err(domain("state dimension does not match the declared registers"));
        }
        if self.rho.hermiticity_defect() > MEASUREMENT_TOL || (self.rho.trace().re - 1.0).abs() > MEASUREMENT_TOL {
            return Err(Error::Invariant("state is not a unit-trace Hermitian operator".into()));
        }
        if crate::matcore::min_eigenvalue(&self.rho)? < -MEASUREMENT_TOL {
            return Err(Error::Invariant("state is not positive semidefinite".into()));
        }
        for (who, ms, dim) in [("Bob", &self.bob, db), ("Charlie", &self.charlie, dc)] {
            if ms.len() != g.questions() {
                return Err(domain(format!("{who} needs one measurement per question")));
            }
            for m in ms.iter() {
                if m.len() != g.answers() {
                    return Err(domain(format!("{who}'s measurement has the wrong number of outcomes")));
                }
                check_projective(m, dim, who)?;
            }
        }
        Ok(())
    }
}

/// `E_θ Σ_x Tr[(A^θ_x ⊗ B^θ_x ⊗ C^θ_x) ρ]`.
pub fn moe_value(g: &MOEGame, s: &MOEStrategy) -> Result<f64> {
    s.validate(g)?;
    let mut total = 0.0;
    for theta in 0..g.questions() {
        for x in 0..g.answers() {
            let op = ComplexMatrix::kron_all([g.element(theta, x), &s.bob[theta][x], &s.charlie[theta][x]]);
            total += op.trace_product(&s.rho).re;
        }
    }
    Ok(total / g.questions() as f64)
}

/// Uniform mixture helper: `Σ_k |ψ_k⟩⟨ψ_k|` from unnormalized components.
pub(crate) fn mixture(psis: &[Vec<C64>], d: usize) -> ComplexMatrix {
    let mut data = alloc::vec![C64::new(0.0, 0.0); d * d];
    for p in psis {
        for i in 0..d {
            if p[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..d {
                data[i * d + j] += p[i] * p[j].conj();
            }
        }
    }
    ComplexMatrix::new(d, d, data).expect("finite")
}
