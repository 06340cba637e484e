use alloc::vec::Vec;

use num_traits::Float;

use crate::designs::UnitaryEnsemble;
use crate::error::{domain, Error, Result};
use crate::games::{cloning_value, Channel, CloningGame, CloningStrategy, RestrictedStrategy};
use crate::matcore::{ComplexMatrix, DimSpec, C64};

/// A strategy for an arbitrary challenge ensemble built from an average-case
/// strategy and a twirling ensemble `{U_a}`.
///
/// The cloner picks `a` uniformly, applies `U_a` to every copy, runs the
/// average-case channel and hands each player a classical copy of `a`. A
/// player answering with oracle `V` runs the average-case measurement for the
/// oracle `U_a V`: a query to `U` becomes `V` followed by `U_a`, a query to
/// `U†` becomes `U_a†` followed by `V†`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseStrategy {
    inner: RestrictedStrategy,
    twirl: Vec<ComplexMatrix>,
}

/// Design order needed for the transformed value to be independent of the
/// challenge ensemble: `t` copies plus every oracle call.
pub fn required_design_order(s: &RestrictedStrategy) -> usize {
    s.layout.t + s.query_count()
}

/// Builds the transformed strategy, refusing ensembles whose claimed design
/// order is below [`required_design_order`].
pub fn worst_to_average_transform(s_avg: &RestrictedStrategy, nu: &UnitaryEnsemble) -> Result<WorstCaseStrategy> {
    let required = required_design_order(s_avg);
    if nu.design_order().is_none_or(|o| o < required) {
        return Err(Error::DesignOrder { required, claimed: nu.design_order() });
    }
    transform_unchecked(s_avg, nu)
}

/// The same construction without the design-order check, for negative controls.
pub fn transform_unchecked(s_avg: &RestrictedStrategy, nu: &UnitaryEnsemble) -> Result<WorstCaseStrategy> {
    let twirl = nu.elements().ok_or_else(|| domain("the twirling ensemble must be listed explicitly"))?.to_vec();
    if nu.dim() != s_avg.layout.alphabet() {
        return Err(domain("twirling unitaries do not act on the challenge register"));
    }
    Ok(WorstCaseStrategy { inner: s_avg.clone(), twirl })
}

fn game_for(s: &RestrictedStrategy, unitaries: Vec<ComplexMatrix>) -> Result<CloningGame> {
    CloningGame::new(s.layout.n, s.layout.t, unitaries)
}

/// Value of `s` against the challenge ensemble `us`, each member equally likely.
pub fn average_case_value(s: &RestrictedStrategy, us: &[ComplexMatrix]) -> Result<f64> {
    let g = game_for(s, us.to_vec())?;
    cloning_value(&g, &s.to_cloning_strategy(&g)?)
}

impl WorstCaseStrategy {
    pub fn inner(&self) -> &RestrictedStrategy {
        &self.inner
    }

    pub fn twirl(&self) -> &[ComplexMatrix] {
        &self.twirl
    }

    /// Same as the average-case strategy: the twirl adds no oracle calls.
    pub fn query_count(&self) -> usize {
        self.inner.query_count()
    }

    /// `E_a ω(S_avg, {U_a V_w}_w)`, the value against the ensemble `vs`.
    pub fn value(&self, vs: &[ComplexMatrix]) -> Result<f64> {
        let mut total = 0.0;
        for ua in &self.twirl {
            total += average_case_value(&self.inner, &vs.iter().map(|v| ua * v).collect::<Vec<_>>())?;
        }
        Ok(total / self.twirl.len() as f64)
    }

    /// The strategy written out in full: player `i` holds `B_i ⊗ L_i` with
    /// `L_i` the label register of dimension `|ν|`.
    pub fn to_cloning_strategy(&self, g: &CloningGame) -> Result<CloningStrategy> {
        let layout = self.inner.layout;
        if g.n() != layout.n || g.t() != layout.t {
            return Err(domain("strategy and game disagree on n or t"));
        }
        let (m, pd, players) = (self.twirl.len(), layout.player_dim(), layout.t + 1);
        let out = DimSpec::uniform(pd * m, players);
        let inner_out = DimSpec::uniform(pd, players);
        let amp = 1.0 / Float::sqrt(m as f64);
        let mut kraus = Vec::new();
        for (a, ua) in self.twirl.iter().enumerate() {
            let ut = ua.kron_power(layout.t);
            for k in self.inner.channel.kraus() {
                let ku = k * &ut;
                kraus.push(ComplexMatrix::from_fn(out.total(), ku.cols(), |r, c| {
                    let digits = out.digits(r);
                    if digits.iter().any(|&dl| dl % m != a) {
                        return C64::new(0.0, 0.0);
                    }
                    let b: Vec<usize> = digits.iter().map(|&dl| dl / m).collect();
                    ku.get(inner_out.index(&b), c) * amp
                }));
            }
        }
        let labels: Vec<ComplexMatrix> = (0..m).map(|a| ComplexMatrix::unit(m, a, a)).collect();
        let measurements = g
            .unitaries()
            .iter()
            .map(|v| {
                let per_a: Vec<_> = self.twirl.iter().map(|ua| self.inner.measurements(&(ua * v))).collect();
                (0..players)
                    .map(|i| {
                        (0..g.answers())
                            .map(|x| {
                                let mut acc = ComplexMatrix::zeros(pd * m, pd * m);
                                for (a, ms) in per_a.iter().enumerate() {
                                    acc = &acc + &ms[i][x].kron(&labels[a]);
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CloningStrategy { channel: Channel::new(kraus)?, player_dims: alloc::vec![pd * m; players], measurements })
    }
}
