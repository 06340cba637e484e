use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::types::{type_projector, BinTypeVec, IndexPredicate, IndexSpace};
use crate::error::{domain, Result};

/// One position of a subtype string.
///
/// The derived order (all `Fixed` before all `Var`, indices ascending) is the
/// lexicographic order used for enumeration and for the greedy partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubtypeSymbol {
    /// A concrete alphabet letter from the type's support.
    Fixed(usize),
    /// The `j`-th variable symbol, `j ≥ 1`.
    Var(usize),
}

/// A canonical symbol string refining a binary type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subtype {
    symbols: Vec<SubtypeSymbol>,
}

impl Subtype {
    /// Validates `symbols` against the type `lambda`.
    pub fn new(symbols: Vec<SubtypeSymbol>, lambda: &BinTypeVec) -> Result<Self> {
        let mut fixed_counts = vec![0usize; lambda.alphabet()];
        let mut var_counts: Vec<usize> = Vec::new();
        for &s in &symbols {
            match s {
                SubtypeSymbol::Fixed(i) => {
                    if !lambda.contains(i) {
                        return Err(domain(format!("fixed symbol {i} is not in the type support")));
                    }
                    fixed_counts[i] += 1;
                }
                SubtypeSymbol::Var(j) => {
                    if j == 0 || j > var_counts.len() + 1 {
                        return Err(domain("variable symbols must first appear in order x1, x2, ..."));
                    }
                    if j == var_counts.len() + 1 {
                        var_counts.push(0);
                    }
                    var_counts[j - 1] += 1;
                }
            }
        }
        if lambda.support().iter().any(|&i| fixed_counts[i] % 2 == 0) {
            return Err(domain("every support letter must appear an odd number of times"));
        }
        if var_counts.iter().any(|c| c % 2 == 1) {
            return Err(domain("every variable symbol must appear an even number of times"));
        }
        Ok(Self { symbols })
    }

    pub(crate) fn from_symbols_unchecked(symbols: Vec<SubtypeSymbol>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[SubtypeSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of distinct variable symbols.
    pub fn num_vars(&self) -> usize {
        self.symbols
            .iter()
            .filter_map(|s| match s {
                SubtypeSymbol::Var(j) => Some(*j),
                SubtypeSymbol::Fixed(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Whether some assignment of the variables reproduces `x`.
    ///
    /// Distinct variables may coincide with each other or with fixed letters.
    pub fn matches(&self, x: &[usize]) -> bool {
        if x.len() != self.symbols.len() {
            return false;
        }
        let mut assigned: Vec<Option<usize>> = vec![None; self.num_vars()];
        for (&s, &v) in self.symbols.iter().zip(x) {
            match s {
                SubtypeSymbol::Fixed(i) if i != v => return false,
                SubtypeSymbol::Fixed(_) => {}
                SubtypeSymbol::Var(j) => match assigned[j - 1] {
                    Some(w) if w != v => return false,
                    Some(_) => {}
                    None => assigned[j - 1] = Some(v),
                },
            }
        }
        true
    }

    /// Membership of a full index `(x, aux)`; the auxiliary part is ignored.
    pub fn matches_with_aux(&self, x: &[usize], _aux: usize) -> bool {
        self.matches(x)
    }

    /// Replaces variable `x_j` by `values[j-1]`.
    pub fn reconstruct(&self, values: &[usize]) -> Result<Vec<usize>> {
        if values.len() != self.num_vars() {
            return Err(domain(format!("{} values for {} variable symbols", values.len(), self.num_vars())));
        }
        Ok(self
            .symbols
            .iter()
            .map(|s| match *s {
                SubtypeSymbol::Fixed(i) => i,
                SubtypeSymbol::Var(j) => values[j - 1],
            })
            .collect())
    }

    /// [`Subtype::reconstruct`] with the auxiliary index carried along.
    pub fn reconstruct_with_aux(&self, values: &[usize], z: usize) -> Result<(Vec<usize>, usize)> {
        Ok((self.reconstruct(values)?, z))
    }

    /// Parses the compact text form, e.g. `"F3 V1 V1 F3"`.
    pub fn parse(text: &str, lambda: &BinTypeVec) -> Result<Self> {
        let symbols = text
            .split_whitespace()
            .map(|tok| {
                let (kind, num) = tok.split_at(1);
                let v: usize = num.parse().map_err(|_| domain(format!("bad subtype token {tok:?}")))?;
                match kind {
                    "F" => Ok(SubtypeSymbol::Fixed(v)),
                    "V" => Ok(SubtypeSymbol::Var(v)),
                    _ => Err(domain(format!("bad subtype token {tok:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, lambda)
    }

    /// Compact text form.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.symbols.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match s {
                SubtypeSymbol::Fixed(i) => write!(f, "F{i}")?,
                SubtypeSymbol::Var(j) => write!(f, "V{j}")?,
            }
        }
        Ok(())
    }
}

/// All subtypes of `lambda` with `r` positions, in lexicographic order.
pub fn enumerate_subtypes(lambda: &BinTypeVec, r: usize) -> Vec<Subtype> {
    let support = lambda.support().to_vec();
    let mut out = Vec::new();
    if !lambda.is_realizable(r) {
        return out;
    }
    let mut fixed_counts = vec![0usize; support.len()];
    let mut var_counts: Vec<usize> = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn deficit(fixed: &[usize], vars: &[usize]) -> usize {
        fixed.iter().filter(|c| *c % 2 == 0).count() + vars.iter().filter(|c| *c % 2 == 1).count()
    }
    fn rec(
        r: usize,
        support: &[usize],
        fixed: &mut Vec<usize>,
        vars: &mut Vec<usize>,
        current: &mut Vec<SubtypeSymbol>,
        out: &mut Vec<Subtype>,
    ) {
        let remaining = r - current.len();
        let need = deficit(fixed, vars);
        if need > remaining || (remaining - need) % 2 == 1 {
            return;
        }
        if remaining == 0 {
            out.push(Subtype { symbols: current.clone() });
            return;
        }
        for (k, &letter) in support.iter().enumerate() {
            fixed[k] += 1;
            current.push(SubtypeSymbol::Fixed(letter));
            rec(r, support, fixed, vars, current, out);
            current.pop();
            fixed[k] -= 1;
        }
        for j in 1..=vars.len() + 1 {
            let fresh = j == vars.len() + 1;
            if fresh {
                vars.push(0);
            }
            vars[j - 1] += 1;
            current.push(SubtypeSymbol::Var(j));
            rec(r, support, fixed, vars, current, out);
            current.pop();
            vars[j - 1] -= 1;
            if fresh {
                vars.pop();
            }
        }
    }
    rec(r, &support, &mut fixed_counts, &mut var_counts, &mut current, &mut out);
    out
}

/// `(2r)^r`, the bound on the number of subtypes of any type.
pub fn subtype_count_bound(r: usize) -> f64 {
    num_traits::Float::powi(2.0 * r as f64, r as i32)
}

/// `S_μ`: all query tuples matching `μ`.
pub fn subtype_projector(mu: &Subtype, space: IndexSpace) -> Result<IndexPredicate> {
    if mu.len() != space.r {
        return Err(domain("subtype length differs from the number of query positions"));
    }
    Ok(IndexPredicate::from_fn(space, |x| mu.matches(x)))
}

/// Greedy disjoint refinement: in enumeration order, each subtype keeps the
/// matching tuples not already claimed by an earlier subtype.
pub fn greedy_subtype_partition(lambda: &BinTypeVec, space: IndexSpace) -> Result<Vec<(Subtype, IndexPredicate)>> {
    let mut claimed = IndexPredicate::empty(space);
    let mut out = Vec::new();
    for mu in enumerate_subtypes(lambda, space.r) {
        let s = subtype_projector(&mu, space)?;
        let piece = s.minus(&claimed)?;
        claimed = claimed.union(&piece)?;
        out.push((mu, piece));
    }
    Ok(out)
}

/// Outcome of auditing the subtype machinery for one type.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtypeAudit {
    pub lambda: BinTypeVec,
    pub subtype_count: usize,
    pub count_bound: f64,
    /// Every type-λ tuple matches at least one subtype and every match has type λ.
    pub coverage_exact: bool,
    /// The greedy pieces are pairwise disjoint and their union is the type-λ set.
    pub partition_exact: bool,
    /// Each greedy piece lies inside its subtype's match set.
    pub pieces_within: bool,
    /// `Σ_μ |P_μ|` against `rank(Π_λ)`.
    pub piece_rank_sum: usize,
    pub type_rank: usize,
}

impl SubtypeAudit {
    pub fn passed(&self) -> bool {
        self.coverage_exact
            && self.partition_exact
            && self.pieces_within
            && self.piece_rank_sum == self.type_rank
            && self.subtype_count as f64 <= self.count_bound
    }
}

/// Checks enumeration, coverage and the greedy partition for one type.
pub fn audit_type(lambda: &BinTypeVec, space: IndexSpace) -> Result<SubtypeAudit> {
    let pi = type_projector(lambda, space)?;
    let subtypes = enumerate_subtypes(lambda, space.r);
    let mut union = IndexPredicate::empty(space);
    for mu in &subtypes {
        union = union.union(&subtype_projector(mu, space)?)?;
    }
    let coverage_exact = union == pi;
    let parts = greedy_subtype_partition(lambda, space)?;
    let mut pieces_within = true;
    let mut disjoint = true;
    let mut acc = IndexPredicate::empty(space);
    let mut piece_rank_sum = 0;
    for (mu, piece) in &parts {
        pieces_within &= piece.is_subset_of(&subtype_projector(mu, space)?);
        disjoint &= piece.is_disjoint_from(&acc);
        acc = acc.union(piece)?;
        piece_rank_sum += piece.rank();
    }
    Ok(SubtypeAudit {
        lambda: lambda.clone(),
        subtype_count: subtypes.len(),
        count_bound: subtype_count_bound(space.r),
        coverage_exact,
        partition_exact: disjoint && acc == pi,
        pieces_within,
        piece_rank_sum,
        type_rank: pi.rank(),
    })
}
