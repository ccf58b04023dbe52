//! Cardinalities of the fiber `F -> B^2 C_p -> B^4 C_p` of the cup-square map.
//!
//! `F` has `π_2 F = π_3 F = C_p` with a nontrivial Postnikov invariant, so it
//! is outside the product grammar of [`crate::space`]. The nontrivial input
//! to `|F|_n` is the number of 2-forms on `F_p^n` whose wedge square
//! vanishes; that count is brute-forced here and checked against the
//! subspace count, while `|F|_n` itself is the closed form.

use num_bigint::BigInt;

use crate::arith::{binom_ext_i64, ExactRational, Prime};
use crate::error::{Error, Result};

pub const DEFAULT_FORM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormCountReport {
    pub prime: u64,
    pub dimension: u32,
    /// Forms `w` with `w ^ w = 0`.
    pub kernel_count: u64,
    /// All forms, `p^C(n,2)`.
    pub total: u64,
}

fn require_odd(p: Prime) -> Result<()> {
    if p.get() == 2 {
        Err(Error::Unsupported("the cup-square fiber is defined here for odd primes only".into()))
    } else {
        Ok(())
    }
}

/// Count 2-forms on `F_p^n` squaring to zero, by enumeration.
pub fn count_null_square_two_forms(p: Prime, n: u32) -> Result<FormCountReport> {
    count_null_square_two_forms_with_budget(p, n, DEFAULT_FORM_BUDGET)
}

pub fn count_null_square_two_forms_with_budget(p: Prime, n: u32, budget: u64) -> Result<FormCountReport> {
    require_odd(p)?;
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n as usize).flat_map(|i| (i + 1..n as usize).map(move |j| (i, j))).collect();
    let total = u32::try_from(pairs.len())
        .ok()
        .and_then(|e| p.get().checked_pow(e))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{} forms exceed the budget of {budget}", pairs.len())))?;

    let dim = n as usize;
    let coord = |i: usize, j: usize| pairs.iter().position(|&q| q == (i, j)).expect("i < j");
    // w ^ w has coordinate 2 (w_ij w_kl - w_ik w_jl + w_il w_jk) at i<j<k<l;
    // p is odd, so the factor 2 is dropped.
    let mut quadruples = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for k in j + 1..dim {
                for l in k + 1..dim {
                    quadruples.push([
                        (coord(i, j), coord(k, l)),
                        (coord(i, k), coord(j, l)),
                        (coord(i, l), coord(j, k)),
                    ]);
                }
            }
        }
    }

    let modulus = p.get();
    let mut form = vec![0u64; pairs.len()];
    let mut kernel = 0u64;
    for _ in 0..total {
        let null = quadruples.iter().all(|[(a, b), (c, d), (e, f)]| {
            let s = form[*a] * form[*b] + (modulus - form[*c]) * form[*d] + form[*e] * form[*f];
            s % modulus == 0
        });
        if null {
            kernel += 1;
        }
        // odometer step
        for x in form.iter_mut() {
            *x += 1;
            if *x < modulus {
                break;
            }
            *x = 0;
        }
    }
    Ok(FormCountReport { prime: modulus, dimension: n, kernel_count: kernel, total })
}

/// `|F|_n = p^C(n-1,3) (p^(3-n) + p^n - p - 1) / (p^2 - 1)`.
pub fn cup_square_fiber_cardinality(p: Prime, n: u32) -> Result<ExactRational> {
    require_odd(p)?;
    let pp = |e: i64| ExactRational::int_pow(p.get(), e).expect("p is nonzero");
    let lead = pp(binom_ext_i64(n as i64 - 1, 3)?);
    let numerator = pp(3 - n as i64) + pp(n as i64) - pp(1) - ExactRational::one();
    let denominator = pp(2) - ExactRational::one();
    Ok(lead * numerator.checked_div(&denominator).expect("p^2 - 1 is nonzero"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmenabilityFailure {
    pub prime: u64,
    /// `|F|_4 |B^4 C_p|_4`.
    pub lhs: ExactRational,
    /// `|B^2 C_p|_4`.
    pub rhs: ExactRational,
}

impl AmenabilityFailure {
    pub fn multiplicativity_fails(&self) -> bool {
        self.lhs != self.rhs
    }
}

/// Compare `|F|_4 |B^4 C_p|_4` with `|B^2 C_p|_4` for the cup-square fiber
/// sequence.
pub fn amenability_failure_report(p: Prime) -> Result<AmenabilityFailure> {
    use crate::space::{AbelianGroup, SpaceExpr};
    let fiber = cup_square_fiber_cardinality(p, 4)?;
    let base = SpaceExpr::EilenbergMacLane(AbelianGroup::cyclic(p.get()), 4).height_cardinality(p, 4);
    let total = SpaceExpr::EilenbergMacLane(AbelianGroup::cyclic(p.get()), 2).height_cardinality(p, 4);
    Ok(AmenabilityFailure { prime: p.get(), lhs: fiber * base, rhs: total })
}

/// Number of 2-dimensional subspaces of `F_p^n`.
pub fn planes_in(p: Prime, n: u32) -> BigInt {
    if n < 2 {
        return BigInt::from(0);
    }
    let q = BigInt::from(p.get());
    let num = (q.pow(n) - 1) * (q.pow(n - 1) - 1);
    let den = (q.pow(2) - 1) * (q.clone() - 1);
    num / den
}
