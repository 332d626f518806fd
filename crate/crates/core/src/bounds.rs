//! Derivation-size bound: a primitive recursive function `f(q, n)` bounding
//! the size of a derivation needed for a realizable profile with bound
//! state `q` and `n` ports, together with its helper recurrences `g` and
//! `h`. The values grow non-elementarily, so evaluation runs under an
//! explicit budget and reports overflow instead of crashing. Nothing in
//! the decision engine depends on these values; they exist to cap the
//! brute-force enumeration honestly and for documentation.

use num::BigUint;
use std::fmt;

use thiserror::Error;

/// Base-case constants, the state-count parameter, and the evaluation
/// budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub c1: u64,
    pub c2: u64,
    /// `|Q|` of the automaton the bound speaks about.
    pub size_q: u64,
    /// Budget: maximum number of recurrence steps across one evaluation,
    /// and maximum bit length of any intermediate value.
    pub max_steps: u64,
    pub max_bits: u64,
}

impl BoundParams {
    /// Defaults: `c1 = c2 = 8` and a budget of a million steps and a
    /// million bits.
    pub fn new(size_q: u64) -> Self {
        BoundParams {
            c1: 8,
            c2: 8,
            size_q,
            max_steps: 1 << 20,
            max_bits: 1 << 20,
        }
    }
}

/// Explicit overflow report: the budget was exhausted before the value was
/// computed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("the recurrence index must have q >= 1")]
    QMustBePositive,
    #[error("overflow: budget exhausted while computing {0}")]
    Overflow(String),
}

struct Budget {
    steps_left: u64,
    max_bits: u64,
}

impl Budget {
    fn step(&mut self, what: &dyn fmt::Display) -> Result<(), BoundError> {
        if self.steps_left == 0 {
            return Err(BoundError::Overflow(what.to_string()));
        }
        self.steps_left -= 1;
        Ok(())
    }

    fn check(&self, value: &BigUint, what: &dyn fmt::Display) -> Result<(), BoundError> {
        if value.bits() > self.max_bits {
            return Err(BoundError::Overflow(what.to_string()));
        }
        Ok(())
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// `h` for level `q` and port count `n`, iterated `k` times:
/// `h(0) = f(q-1, n)` and `h(i+1) = f(q-1, 2n) + h(i) * n + n^2`.
pub fn bound_h(params: &BoundParams, q: u64, n: u64, k: u64) -> Result<BigUint, BoundError> {
    let mut budget = Budget {
        steps_left: params.max_steps,
        max_bits: params.max_bits,
    };
    h_eval(params, &mut budget, q, n, k)
}

/// `g` for level `q` and port count `n`, iterated `k` times; like `h` but
/// every occurrence of `n` is widened to `n + |Q|`.
pub fn bound_g(params: &BoundParams, q: u64, n: u64, k: u64) -> Result<BigUint, BoundError> {
    let mut budget = Budget {
        steps_left: params.max_steps,
        max_bits: params.max_bits,
    };
    g_eval(params, &mut budget, q, n, k)
}

/// The size bound itself: `f(0, n) = c1*n + c2`, and for `q >= 1`
///
/// ```text
/// f(q, n) = K * (|Q| + 1) + |Q| * n
/// K = max( f(q-1, 2n) + h(2^n) * n + n^2,
///          f(q-1, 2n) * (2^n + 1) + n^2,
///          (3 f(q-1, 2) + 1) + f(q-1, 0) + 1,
///          f(q-1, 2n) + g(2^(n+|Q|)) * n + n^2 )
/// ```
///
/// with `h` and `g` the recurrences above at level `q`.
pub fn bound_f(params: &BoundParams, q: u64, n: u64) -> Result<BigUint, BoundError> {
    let mut budget = Budget {
        steps_left: params.max_steps,
        max_bits: params.max_bits,
    };
    f_eval(params, &mut budget, q, n)
}

fn f_eval(params: &BoundParams, budget: &mut Budget, q: u64, n: u64) -> Result<BigUint, BoundError> {
    let label = Label("f", q, n);
    budget.step(&label)?;
    if q == 0 {
        let value = big(params.c1) * big(n) + big(params.c2);
        budget.check(&value, &label)?;
        return Ok(value);
    }
    let n_sq = big(n) * big(n);
    let f_2n = f_eval(params, budget, q - 1, 2 * n)?;

    let pow = |exp: u64, budget: &Budget| -> Result<BigUint, BoundError> {
        if exp >= budget.max_bits {
            return Err(BoundError::Overflow(label.to_string()));
        }
        Ok(BigUint::from(1u32) << exp)
    };

    // Iteration counts 2^n and 2^(n+|Q|) must fit the step budget.
    let h_iters = check_iters(n, budget, &label)?;
    let b1 = f_2n.clone() + h_eval_iters(params, budget, q, n, h_iters)? * big(n) + n_sq.clone();
    budget.check(&b1, &label)?;

    let b2 = f_2n.clone() * (pow(n, budget)? + big(1)) + n_sq.clone();
    budget.check(&b2, &label)?;

    let b3 = big(3) * f_eval(params, budget, q - 1, 2)? + big(1)
        + f_eval(params, budget, q - 1, 0)?
        + big(1);
    budget.check(&b3, &label)?;

    let g_iters = check_iters(n + params.size_q, budget, &label)?;
    let b4 = f_2n + g_eval_iters(params, budget, q, n, g_iters)? * big(n) + n_sq;
    budget.check(&b4, &label)?;

    let k_value = b1.max(b2).max(b3).max(b4);
    let value = k_value * big(params.size_q + 1) + big(params.size_q) * big(n);
    budget.check(&value, &label)?;
    Ok(value)
}

/// `2^exp` as an iteration count, guarded by the step budget.
fn check_iters(exp: u64, budget: &Budget, label: &dyn fmt::Display) -> Result<u64, BoundError> {
    if exp >= 63 || (1u64 << exp) > budget.steps_left {
        return Err(BoundError::Overflow(label.to_string()));
    }
    Ok(1 << exp)
}

fn h_eval(
    params: &BoundParams,
    budget: &mut Budget,
    q: u64,
    n: u64,
    k: u64,
) -> Result<BigUint, BoundError> {
    if q == 0 {
        return Err(BoundError::QMustBePositive);
    }
    h_eval_iters(params, budget, q, n, k)
}

fn h_eval_iters(
    params: &BoundParams,
    budget: &mut Budget,
    q: u64,
    n: u64,
    k: u64,
) -> Result<BigUint, BoundError> {
    let label = Label("h", q, n);
    let start = f_eval(params, budget, q - 1, n)?;
    if k == 0 {
        return Ok(start);
    }
    let step_term = f_eval(params, budget, q - 1, 2 * n)? + big(n) * big(n);
    iterate_affine(budget, &label, start, n, &step_term, k)
}

/// Value after `k` steps of `v <- v * factor + step`, via the geometric
/// closed form `v0 * factor^k + step * (factor^k - 1) / (factor - 1)`.
fn iterate_affine(
    budget: &mut Budget,
    label: &Label,
    start: BigUint,
    factor: u64,
    step: &BigUint,
    k: u64,
) -> Result<BigUint, BoundError> {
    if k > budget.steps_left {
        return Err(BoundError::Overflow(label.to_string()));
    }
    budget.steps_left -= k;
    let value = match factor {
        0 => step.clone(),
        1 => start + step * big(k),
        _ => {
            // factor^k has at least k * floor(log2 factor) bits; refuse
            // hopeless sizes before computing anything.
            let flog = 63 - (factor.leading_zeros() as u64);
            if k.saturating_mul(flog) > budget.max_bits || k > u32::MAX as u64 {
                return Err(BoundError::Overflow(label.to_string()));
            }
            let pow = big(factor).pow(k as u32);
            let geometric = (&pow - BigUint::from(1u32)) / big(factor - 1);
            start * pow + step * geometric
        }
    };
    budget.check(&value, label)?;
    Ok(value)
}

fn g_eval(
    params: &BoundParams,
    budget: &mut Budget,
    q: u64,
    n: u64,
    k: u64,
) -> Result<BigUint, BoundError> {
    if q == 0 {
        return Err(BoundError::QMustBePositive);
    }
    g_eval_iters(params, budget, q, n, k)
}

fn g_eval_iters(
    params: &BoundParams,
    budget: &mut Budget,
    q: u64,
    n: u64,
    k: u64,
) -> Result<BigUint, BoundError> {
    let label = Label("g", q, n);
    let wide = n + params.size_q;
    let start = f_eval(params, budget, q - 1, wide)?;
    if k == 0 {
        return Ok(start);
    }
    let step_term = f_eval(params, budget, q - 1, 2 * wide)? + big(wide) * big(wide);
    iterate_affine(budget, &label, start, wide, &step_term, k)
}

struct Label(&'static str, u64, u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(q={}, n={})", self.0, self.1, self.2)
    }
}
