//! Lipschitz lower bounds on objectives and Lipschitz feasibility pruning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::SearchBox;
use crate::problem::Problem;
use crate::scalar::{distance, Scalar};

/// Safety factor applied to sampled Lipschitz estimates.
pub const LIPSCHITZ_SAFETY_FACTOR: f64 = 1.2;
/// Returned by [`estimate_lipschitz`] for functions that look constant.
pub const LIPSCHITZ_FLOOR: f64 = 1e-12;

/// Componentwise lower bound of `F` over one box.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound<T> {
    pub values: Vec<T>,
    pub box_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    ProvablyInfeasible,
    Undetermined,
}

/// `l_i = f_i(mid) - L_i / 2 * diam` from objective values already evaluated at the midpoint.
pub fn lower_bound_from_midpoint<T: Scalar>(
    midpoint_values: &[T],
    lipschitz: &[T],
    diameter: T,
) -> Vec<T> {
    let half = T::lit(0.5) * diameter;
    midpoint_values
        .iter()
        .zip(lipschitz)
        .map(|(&f, &l)| f - l * half)
        .collect()
}

/// Lipschitz lower bound of the objectives over `b`, one evaluation per objective.
pub fn lipschitz_lower_bound<T: Scalar>(
    p: &Problem<T>,
    b: &SearchBox<T>,
    box_id: usize,
) -> LowerBound<T> {
    let mid = b.midpoint();
    let values = lower_bound_from_midpoint(&p.objectives_at(&mid), p.lipschitz_obj(), b.diameter());
    LowerBound { values, box_id }
}

/// Decides from constraint values at the midpoint whether some `g_j` is provably
/// negative on the whole box.
pub fn feasibility_from_midpoint<T: Scalar>(
    constraint_values: &[T],
    lipschitz: &[T],
    diameter: T,
) -> FeasibilityStatus {
    let half = T::lit(0.5) * diameter;
    let infeasible = constraint_values
        .iter()
        .zip(lipschitz)
        .any(|(&g, &l)| g + l * half < T::zero());
    if infeasible {
        FeasibilityStatus::ProvablyInfeasible
    } else {
        FeasibilityStatus::Undetermined
    }
}

pub fn feasibility_test<T: Scalar>(p: &Problem<T>, b: &SearchBox<T>) -> FeasibilityStatus {
    if p.num_constraints() == 0 {
        return FeasibilityStatus::Undetermined;
    }
    let mid = b.midpoint();
    let values: Vec<T> = p.constraint_fns().iter().map(|g| g(&mid)).collect();
    feasibility_from_midpoint(&values, p.lipschitz_con(), b.diameter())
}

/// Sampled Lipschitz estimate: the largest difference quotient over `samples`
/// random pairs in `b`, inflated by [`LIPSCHITZ_SAFETY_FACTOR`].
///
/// This is a heuristic. It can under-estimate the true constant, in which case
/// the bounds built on it are no longer guaranteed.
pub fn estimate_lipschitz<T, F>(f: F, b: &SearchBox<T>, samples: usize, rng_seed: u64) -> Result<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<T> {
        let unit: Vec<T> = (0..b.dim()).map(|_| T::lit(rng.gen::<f64>())).collect();
        b.lerp(&unit)
    };
    let mut best = T::zero();
    for _ in 0..samples {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let d = distance(&x, &y);
        if d > T::zero() {
            let q = (f(&x) - f(&y)).abs() / d;
            if q > best {
                best = q;
            }
        }
    }
    if best > T::zero() {
        Ok(best * T::lit(LIPSCHITZ_SAFETY_FACTOR))
    } else {
        Ok(T::lit(LIPSCHITZ_FLOOR))
    }
}
