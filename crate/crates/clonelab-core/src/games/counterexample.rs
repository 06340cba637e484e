use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, Result};
use crate::matcore::{op_norm, ComplexMatrix, C64};

/// What the deterministic-guess strategy achieves against a real ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub t: usize,
    pub answers: usize,
    /// `Tr[(A^θ_y)^{⊗t} ρ]` for each `θ`.
    pub per_theta_traces: Vec<f64>,
    /// `|𝒳|^{⌊t/2⌋ - t}`.
    pub expected_trace: f64,
    /// `|𝒳|^{t-1} ‖E_θ (A^θ_y)^{⊗t}‖`.
    pub norm_expression: f64,
    /// `|𝒳|^{⌊t/2⌋ - 1}`.
    pub norm_floor: f64,
    /// For `t = 1` the floor is below one and says nothing; reported only.
    pub informational: bool,
}

impl CounterexampleReport {
    pub fn max_trace_deviation(&self) -> f64 {
        self.per_theta_traces.iter().map(|v| (v - self.expected_trace).abs()).fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_trace_deviation() <= tol && self.norm_expression >= self.norm_floor - tol
    }
}

/// The reference state: `⌊t/2⌋` maximally entangled qudit pairs on
/// consecutive registers, plus a maximally mixed qudit when `t` is odd.
pub fn paired_reference_state(d: usize, t: usize) -> ComplexMatrix {
    let s = 1.0 / Float::sqrt(d as f64);
    let epr: Vec<C64> = (0..d * d).map(|k| C64::new(if k / d == k % d { s } else { 0.0 }, 0.0)).collect();
    let pair = ComplexMatrix::projector(&epr);
    let mut rho = ComplexMatrix::identity(1);
    for _ in 0..t / 2 {
        rho = rho.kron(&pair);
    }
    if t % 2 == 1 {
        rho = rho.kron(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64));
    }
    rho
}

/// Every player answers `y`; Alice's `t` registers hold [`paired_reference_state`].
pub fn counterexample_strategy(unitaries: &[ComplexMatrix], t: usize, y: usize) -> Result<CounterexampleReport> {
    let u0 = unitaries.first().ok_or_else(|| domain("empty ensemble"))?;
    let d = u0.rows();
    if t == 0 || y >= d {
        return Err(domain("need t ≥ 1 and y inside the answer set"));
    }
    if d.pow(t as u32) > 4096 {
        return Err(domain("the reference register is too large to materialize"));
    }
    for u in unitaries {
        u.ensure_unitary(1e-10)?;
        if u.data().iter().any(|z| z.im.abs() > 1e-12) {
            return Err(domain(
                "the construction needs real challenge unitaries: for complex ones the paired state \
                 picks up Tr[A Ā] instead of Tr[A²] and the trace identity no longer holds",
            ));
        }
    }
    let rho = paired_reference_state(d, t);
    let mut traces = Vec::new();
    let mut avg = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for u in unitaries {
        let a = ComplexMatrix::projector(&u.conj().col(y)).kron_power(t);
        traces.push(a.trace_product(&rho).re);
        avg = &avg + &a;
    }
    let avg = avg.scale_real(1.0 / unitaries.len() as f64);
    let df = d as f64;
    Ok(CounterexampleReport {
        t,
        answers: d,
        per_theta_traces: traces,
        expected_trace: df.powi((t / 2) as i32 - t as i32),
        norm_expression: df.powi(t as i32 - 1) * op_norm(&avg)?,
        norm_floor: df.powi((t / 2) as i32 - 1),
        informational: t == 1,
    })
}
