//! Cone dominance-based branch and bound.
//!
//! Every iteration processes the whole box collection breadth-first:
//!
//! 1. bisect every box along its widest coordinate;
//! 2. drop boxes on which some constraint is provably negative;
//! 3. bound each box from below with the Lipschitz bound at its midpoint;
//! 4. update the ideal/nadir surrogates and, if enabled, normalize;
//! 5. keep the boxes whose lower bounds are nondominated under the cone and
//!    sample feasible upper bounds inside them;
//! 6. discard every unprotected box whose lower bound is weakly dominated by an
//!    upper bound;
//! 7. measure the gap as the directed Hausdorff distance from the upper to the
//!    lower bound set.
//!
//! The loop stops once both the gap and the box diameter are within tolerance.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::archive::{directed_hausdorff, NondominatedSet, ReferencePoints};
use crate::bounding::{feasibility_from_midpoint, lower_bound_from_midpoint, FeasibilityStatus};
use crate::cones::OrderingCone;
use crate::error::Error;
use crate::geometry::SearchBox;
use crate::problem::Problem;
use crate::sampler::{sample_upper_bounds, stream_seed, Sample, SamplerConfig};
use crate::scalar::{norm, Scalar};

/// Gap value before the first iteration.
pub const GAP_SENTINEL: f64 = 1e6;
/// Random points tried per box when no midpoint is feasible.
pub const FALLBACK_SAMPLES_PER_BOX: usize = 10;

#[derive(Debug, Clone)]
pub struct SolverParams<T> {
    /// Termination threshold on the upper-to-lower bound gap.
    pub tol_gap: T,
    /// Termination threshold on the box diameter.
    pub tol_width: T,
    pub cone: OrderingCone<T>,
    pub sampler: SamplerConfig,
    pub normalize: bool,
    pub max_iterations: usize,
}

impl<T: Scalar> SolverParams<T> {
    pub fn new(cone: OrderingCone<T>, tol_gap: T, tol_width: T) -> Self {
        Self {
            tol_gap,
            tol_width,
            cone,
            sampler: SamplerConfig::default(),
            normalize: true,
            max_iterations: 1000,
        }
    }

    pub fn validate(&self, num_objectives: usize) -> Result<(), Error> {
        if !(self.tol_gap > T::zero()) || !(self.tol_width > T::zero()) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.sampler.population == 0 {
            return Err(Error::InvalidParameter("sampler population must be >= 1".into()));
        }
        if let Some(m) = self.cone.dim() {
            if m != num_objectives {
                return Err(Error::DimensionMismatch {
                    expected: num_objectives,
                    found: m,
                });
            }
        }
        if !self.cone.contains_nonneg_orthant(num_objectives) {
            return Err(Error::InvalidCone(
                "the cone must contain the nonnegative orthant".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<T> {
    pub k: usize,
    pub boxes_before: usize,
    pub boxes_after_feasibility: usize,
    pub boxes_retained: usize,
    /// Diameter of the boxes of this iteration.
    pub omega_k: T,
    /// Gap on the comparison scale (normalized when normalization is on).
    pub gap: T,
    /// Gap on the raw objective scale.
    pub raw_gap: T,
    pub elapsed: Duration,
}

/// Lower bound of one box, kept with the box it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerRecord<T> {
    /// Raw (unnormalized) lower bound values.
    pub values: Vec<T>,
    pub region: SearchBox<T>,
}

/// Snapshot handed to a [`TraceSink`] after each iteration.
#[derive(Debug)]
pub struct IterationView<'a, T> {
    /// Boxes retained after discarding.
    pub boxes: &'a [SearchBox<T>],
    /// Boxes removed by the feasibility test this iteration.
    pub infeasible: &'a [SearchBox<T>],
    pub upper_bounds: &'a NondominatedSet<T, Sample<T>>,
    pub lower_bounds: &'a NondominatedSet<T, LowerRecord<T>>,
    pub reference_points: &'a ReferencePoints<T>,
}

pub trait TraceSink<T> {
    fn record(&mut self, trace: &IterationTrace<T>, view: &IterationView<'_, T>);
}

impl<T, F> TraceSink<T> for F
where
    F: FnMut(&IterationTrace<T>, &IterationView<'_, T>),
{
    fn record(&mut self, trace: &IterationTrace<T>, view: &IterationView<'_, T>) {
        self(trace, view)
    }
}

/// Discards nothing and records nothing.
pub struct NoSink;

impl<T> TraceSink<T> for NoSink {
    fn record(&mut self, _: &IterationTrace<T>, _: &IterationView<'_, T>) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub boxes: Vec<SearchBox<T>>,
    /// `U_k(C)`: vectors on the comparison scale, payload holds the raw image and its preimage.
    pub upper_bounds: NondominatedSet<T, Sample<T>>,
    /// `L_k(C)`: vectors on the comparison scale.
    pub lower_bounds: NondominatedSet<T, LowerRecord<T>>,
    pub reference_points: Option<ReferencePoints<T>>,
    pub trace: Vec<IterationTrace<T>>,
    pub status: Termination,
    pub gap: T,
    pub omega: T,
    pub warnings: Vec<String>,
}

impl<T: Scalar> SolveResult<T> {
    /// Raw objective vectors of the upper bound set.
    pub fn front(&self) -> Vec<Vec<T>> {
        self.upper_bounds
            .entries()
            .iter()
            .map(|e| e.payload.objectives.clone())
            .collect()
    }

    /// Preimages of the upper bounds, in the same order as [`front`](Self::front).
    pub fn solutions(&self) -> Vec<Vec<T>> {
        self.upper_bounds
            .entries()
            .iter()
            .map(|e| e.payload.x.clone())
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum SolveError<T: std::fmt::Debug> {
    #[error(transparent)]
    Invalid(#[from] Error),

    #[error("every box was pruned at iteration {iteration}")]
    Exhausted {
        iteration: usize,
        trace: Vec<IterationTrace<T>>,
    },

    #[error("no feasible point found at iteration {iteration}")]
    NoFeasiblePoint {
        iteration: usize,
        trace: Vec<IterationTrace<T>>,
    },
}

/// Flag 1 (`true`) iff some upper bound weakly dominates `lower` under `cone`.
pub fn discarding_test<'a, T, I>(lower: &[T], uppers: I, cone: &OrderingCone<T>) -> bool
where
    T: Scalar,
    I: IntoIterator<Item = &'a [T]>,
{
    uppers
        .into_iter()
        .any(|u| cone.contains_difference(u, lower))
}

struct BoxRecord<T> {
    region: SearchBox<T>,
    image: Vec<T>,
    feasible: bool,
    lower: Vec<T>,
}

pub fn solve<T: Scalar>(p: &Problem<T>, params: &SolverParams<T>) -> Result<SolveResult<T>, SolveError<T>> {
    solve_with_sink(p, params, &mut NoSink)
}

pub fn solve_with_sink<T, S>(
    p: &Problem<T>,
    params: &SolverParams<T>,
    sink: &mut S,
) -> Result<SolveResult<T>, SolveError<T>>
where
    T: Scalar,
    S: TraceSink<T> + ?Sized,
{
    params.validate(p.num_objectives())?;
    let cone = &params.cone;
    let lipschitz = p.lipschitz_obj();
    let sentinel = T::lit(GAP_SENTINEL);

    let mut boxes = vec![p.domain().clone()];
    let mut omega_prev = p.domain().diameter();
    let mut gap = sentinel;
    let mut trace: Vec<IterationTrace<T>> = Vec::new();
    let mut upper = NondominatedSet::new(cone.clone());
    let mut lower = NondominatedSet::new(cone.clone());
    let mut reference = None;

    if params.max_iterations == 0 {
        let children = bisect_all(&boxes)?;
        let kept = children
            .into_iter()
            .filter(|b| crate::bounding::feasibility_test(p, b) == FeasibilityStatus::Undetermined)
            .collect();
        return Ok(SolveResult {
            boxes: kept,
            upper_bounds: upper,
            lower_bounds: lower,
            reference_points: None,
            trace,
            status: Termination::IterationLimit,
            gap,
            omega: omega_prev,
            warnings: Vec::new(),
        });
    }

    let mut k = 0usize;
    let status = loop {
        if !(gap > params.tol_gap || omega_prev > params.tol_width) {
            break Termination::Converged;
        }
        if k >= params.max_iterations {
            break Termination::IterationLimit;
        }
        k += 1;
        let started = Instant::now();

        let children = bisect_all(&boxes)?;
        let boxes_before = children.len();
        let omega = children
            .iter()
            .map(SearchBox::diameter)
            .fold(T::zero(), T::max);

        let evaluated: Vec<Result<BoxRecord<T>, SearchBox<T>>> = children
            .into_par_iter()
            .map(|region| {
                let mid = region.midpoint();
                let eval = p.eval_unchecked(&mid);
                let diameter = region.diameter();
                let status = feasibility_from_midpoint(&eval.constraints, p.lipschitz_con(), diameter);
                if status == FeasibilityStatus::ProvablyInfeasible {
                    return Err(region);
                }
                let feasible = eval.is_feasible();
                let lower = lower_bound_from_midpoint(&eval.objectives, lipschitz, diameter);
                Ok(BoxRecord {
                    region,
                    image: eval.objectives,
                    feasible,
                    lower,
                })
            })
            .collect();
        let mut records = Vec::with_capacity(evaluated.len());
        let mut infeasible = Vec::new();
        for e in evaluated {
            match e {
                Ok(r) => records.push(r),
                Err(b) => infeasible.push(b),
            }
        }
        let boxes_after_feasibility = records.len();
        if records.is_empty() {
            return Err(SolveError::Exhausted { iteration: k, trace });
        }

        let lowers: Vec<&[T]> = records.iter().map(|r| r.lower.as_slice()).collect();
        let images: Vec<Vec<T>> = records
            .iter()
            .filter(|r| r.feasible)
            .map(|r| r.image.clone())
            .collect();
        let rp = match ReferencePoints::compute(&lowers, &images, || {
            fallback_images(p, &records, params.sampler.seed, k)
        }) {
            Ok(rp) => rp,
            Err(_) => return Err(SolveError::NoFeasiblePoint { iteration: k, trace }),
        };
        let scale = |v: &[T]| -> Vec<T> {
            if params.normalize {
                rp.normalize(v)
            } else {
                v.to_vec()
            }
        };

        let scaled_lowers: Vec<Vec<T>> = records.par_iter().map(|r| scale(&r.lower)).collect();
        let index_set = NondominatedSet::from_candidates(
            cone.clone(),
            scaled_lowers.iter().cloned().zip(0..).collect(),
        );
        let mut selected: Vec<usize> = index_set.entries().iter().map(|e| e.payload).collect();
        selected.sort_unstable();
        lower = NondominatedSet::from_candidates(
            cone.clone(),
            index_set
                .into_entries()
                .into_iter()
                .map(|e| {
                    let r = &records[e.payload];
                    let rec = LowerRecord {
                        values: r.lower.clone(),
                        region: r.region.clone(),
                    };
                    (e.vector, rec)
                })
                .collect(),
        );

        let per_box: Vec<Vec<(Vec<T>, Sample<T>)>> = selected
            .par_iter()
            .map(|&i| {
                let samples = sample_upper_bounds(p, &records[i].region, &params.sampler, k as u64, i as u64);
                let scaled = samples.into_iter().map(|s| (scale(&s.objectives), s)).collect();
                NondominatedSet::from_candidates(cone.clone(), scaled)
                    .into_entries()
                    .into_iter()
                    .map(|e| (e.vector, e.payload))
                    .collect()
            })
            .collect();
        upper = NondominatedSet::from_candidates(cone.clone(), per_box.into_iter().flatten().collect());

        // Same flags as `discarding_test` against every upper bound, computed in bulk.
        let discard = upper.dominated_flags(&scaled_lowers);
        let keep: Vec<bool> = records
            .iter()
            .zip(discard)
            .map(|(r, flag)| {
                let protected = rp.is_protected(&r.lower, r.feasible.then_some(r.image.as_slice()));
                protected || !flag
            })
            .collect();
        boxes = records
            .into_iter()
            .zip(keep)
            .filter_map(|(r, keep)| keep.then_some(r.region))
            .collect();

        let (new_gap, raw_gap) = if upper.is_empty() || lower.is_empty() {
            (sentinel, sentinel)
        } else {
            let u: Vec<&[T]> = upper.vectors().collect();
            let l: Vec<&[T]> = lower.vectors().collect();
            let u_raw: Vec<&[T]> = upper.entries().iter().map(|e| e.payload.objectives.as_slice()).collect();
            let l_raw: Vec<&[T]> = lower.entries().iter().map(|e| e.payload.values.as_slice()).collect();
            (
                directed_hausdorff(&u, &l).map_err(SolveError::Invalid)?,
                directed_hausdorff(&u_raw, &l_raw).map_err(SolveError::Invalid)?,
            )
        };
        gap = new_gap;
        omega_prev = omega;

        let record = IterationTrace {
            k,
            boxes_before,
            boxes_after_feasibility,
            boxes_retained: boxes.len(),
            omega_k: omega,
            gap,
            raw_gap,
            elapsed: started.elapsed(),
        };
        sink.record(
            &record,
            &IterationView {
                boxes: &boxes,
                infeasible: &infeasible,
                upper_bounds: &upper,
                lower_bounds: &lower,
                reference_points: &rp,
            },
        );
        trace.push(record);
        reference = Some(rp);

        if boxes.is_empty() {
            return Err(SolveError::Exhausted { iteration: k, trace });
        }
    };

    let mut warnings = Vec::new();
    if status == Termination::Converged {
        // The epsilon-e efficiency guarantee needs tol_gap >= omega |L| / 2 on the raw scale.
        let needed = T::lit(0.5) * omega_prev * norm(lipschitz);
        if params.tol_gap < needed {
            warnings.push(format!(
                "tol_gap = {} is below omega * |L| / 2 = {}; the returned set is not guaranteed to be tol_gap-efficient",
                params.tol_gap, needed
            ));
        }
    }

    Ok(SolveResult {
        boxes,
        upper_bounds: upper,
        lower_bounds: lower,
        reference_points: reference,
        trace,
        status,
        gap,
        omega: omega_prev,
        warnings,
    })
}

fn bisect_all<T: Scalar>(boxes: &[SearchBox<T>]) -> Result<Vec<SearchBox<T>>, Error> {
    let halves: Result<Vec<(SearchBox<T>, SearchBox<T>)>, Error> =
        boxes.par_iter().map(SearchBox::bisect).collect();
    Ok(halves?.into_iter().flat_map(|(a, b)| [a, b]).collect())
}

/// Feasible images of random points, used when every midpoint is infeasible.
fn fallback_images<T: Scalar>(
    p: &Problem<T>,
    records: &[BoxRecord<T>],
    seed: u64,
    iteration: usize,
) -> Vec<Vec<T>> {
    let per_box: Vec<Vec<Vec<T>>> = records
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(
                seed ^ 0xFA11_BAC4,
                iteration as u64,
                i as u64,
            ));
            (0..FALLBACK_SAMPLES_PER_BOX)
                .filter_map(|_| {
                    let unit: Vec<T> = (0..r.region.dim()).map(|_| T::lit(rng.gen::<f64>())).collect();
                    let x = r.region.lerp(&unit);
                    let e = p.eval_unchecked(&x);
                    e.is_feasible().then_some(e.objectives)
                })
                .collect()
        })
        .collect();
    per_box.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    fn params(cone: OrderingCone<f64>, gap: f64, width: f64) -> SolverParams<f64> {
        let mut s = SolverParams::new(cone, gap, width);
        s.sampler.seed = 7;
        s
    }

    #[test]
    fn discarding_examples() {
        let c0 = OrderingCone::pareto();
        let c75 = OrderingCone::polyhedral(0.75).unwrap();
        let u = [vec![0.0, 0.0]];
        let us = || u.iter().map(Vec::as_slice);
        assert!(discarding_test(&[1.0, 1.0], us(), &c0));
        assert!(!discarding_test(&[1.0, -0.7], us(), &c0));
        assert!(discarding_test(&[1.0, -0.7], us(), &c75));
        assert!(!discarding_test(&[1.0, 1.0], std::iter::empty(), &c0));
        // Equality counts as weak dominance.
        assert!(discarding_test(&[0.0, 0.0], us(), &c0));
    }

    #[test]
    fn symmetric_single_minimum() {
        let p = Problem::builder("sq", SearchBox::cube(1, -1.0, 1.0).unwrap())
            .objective(2.0, |x: &[f64]| x[0] * x[0])
            .objective(2.0, |x: &[f64]| x[0] * x[0])
            .build()
            .unwrap();
        let mut prm = params(OrderingCone::pareto(), 0.05, 0.01);
        prm.normalize = false;
        let res = solve(&p, &prm).unwrap();
        assert_eq!(res.status, Termination::Converged);
        for b in &res.boxes {
            // A surviving box cannot have its lower bound above the best value 0.
            let nearest = if b.contains(&[0.0]) { 0.0 } else { b.lo()[0].abs().min(b.hi()[0].abs()) };
            assert!(nearest * nearest <= b.diameter() * 2.0 + 1e-12, "{b:?}");
            assert!(nearest <= 0.1, "{b:?}");
        }
        let lnorm = 8f64.sqrt();
        let best = res
            .front()
            .iter()
            .map(|f| (f[0] * f[0] + f[1] * f[1]).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(best <= res.omega * lnorm, "{best}");
    }

    #[test]
    fn zero_iterations_bisects_once() {
        let p = problems::build::<f64>("tp1").unwrap();
        let mut prm = params(OrderingCone::pareto(), 0.1, 0.1);
        prm.max_iterations = 0;
        let res = solve(&p, &prm).unwrap();
        assert_eq!(res.boxes.len(), 2);
        assert!(res.trace.is_empty());
        assert_eq!(res.gap, GAP_SENTINEL);
        assert_eq!(res.status, Termination::IterationLimit);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let p = problems::build::<f64>("tp1").unwrap();
        let mut prm = params(OrderingCone::pareto(), 1e-9, 1e-9);
        prm.max_iterations = 3;
        let res = solve(&p, &prm).unwrap();
        assert_eq!(res.status, Termination::IterationLimit);
        assert_eq!(res.trace.len(), 3);
    }

    #[test]
    fn rejects_cone_without_orthant() {
        let p = problems::build::<f64>("pe1").unwrap();
        let cone = OrderingCone::ice_cream(vec![1.0, 1.0, 1.0], 0.3).unwrap();
        assert!(matches!(
            solve(&p, &params(cone, 0.1, 0.1)),
            Err(SolveError::Invalid(Error::InvalidCone(_)))
        ));
        let wrong_dim = OrderingCone::ice_cream(vec![1.0, 1.0], 1.2).unwrap();
        assert!(solve(&p, &params(wrong_dim, 0.1, 0.1)).is_err());
        assert!(solve(&p, &params(OrderingCone::pareto(), 0.0, 0.1)).is_err());
    }

    #[test]
    fn infeasible_problem_is_reported() {
        let p = Problem::builder("none", SearchBox::cube(2, 0.0, 1.0).unwrap())
            .objective(1.0, |x: &[f64]| x[0])
            .objective(1.0, |x: &[f64]| x[1])
            .constraint(1.0, |x: &[f64]| -1.0 - x[0])
            .build()
            .unwrap();
        let err = solve(&p, &params(OrderingCone::pareto(), 0.1, 0.1)).unwrap_err();
        assert!(matches!(err, SolveError::Exhausted { iteration: 1, .. }));
    }

    #[test]
    fn invisible_feasible_region_is_reported() {
        // Feasible only on a sliver the midpoints and random points never hit,
        // while the Lipschitz test cannot rule it out.
        let p = Problem::builder("sliver", SearchBox::cube(1, 0.0, 1.0).unwrap())
            .objective(1.0, |x: &[f64]| x[0])
            .objective(1.0, |x: &[f64]| -x[0])
            .constraint(1e6, |x: &[f64]| -((x[0] - 0.123_456_789).abs()) + 1e-15)
            .build()
            .unwrap();
        let err = solve(&p, &params(OrderingCone::pareto(), 0.1, 0.1)).unwrap_err();
        assert!(matches!(err, SolveError::NoFeasiblePoint { .. }));
    }

    #[test]
    fn trace_counts_are_monotone() {
        let p = problems::build::<f64>("constr").unwrap();
        let mut seen = 0;
        let mut sink = |t: &IterationTrace<f64>, v: &IterationView<'_, f64>| {
            assert!(t.boxes_retained <= t.boxes_after_feasibility);
            assert!(t.boxes_after_feasibility <= t.boxes_before);
            assert_eq!(v.boxes.len(), t.boxes_retained);
            seen += 1;
        };
        let res = solve_with_sink(&p, &params(OrderingCone::polyhedral(0.75).unwrap(), 0.1, 0.2), &mut sink)
            .unwrap();
        assert_eq!(seen, res.trace.len());
        assert_eq!(res.front().len(), res.solutions().len());
        for x in res.solutions() {
            assert!(p.is_feasible(&x));
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let p = problems::build::<f64>("tp2").unwrap();
        let prm = params(OrderingCone::polyhedral(0.75).unwrap(), 0.05, 0.05);
        let a = solve(&p, &prm).unwrap();
        let b = solve(&p, &prm).unwrap();
        assert_eq!(a.front(), b.front());
        assert_eq!(a.boxes, b.boxes);
        let counts = |r: &SolveResult<f64>| r.trace.iter().map(|t| t.boxes_retained).collect::<Vec<_>>();
        assert_eq!(counts(&a), counts(&b));
    }

    #[test]
    fn single_precision_solve() {
        let p = problems::build::<f32>("tp1").unwrap();
        let mut prm = SolverParams::new(OrderingCone::<f32>::polyhedral(0.75).unwrap(), 0.1f32, 0.1f32);
        prm.sampler.seed = 3;
        let res = solve(&p, &prm).unwrap();
        assert_eq!(res.status, Termination::Converged);
        assert!(!res.front().is_empty());
    }

    #[test]
    fn warns_when_gap_tolerance_is_too_loose_for_guarantee() {
        let p = problems::build::<f64>("tp1").unwrap();
        let res = solve(&p, &params(OrderingCone::pareto(), 0.05, 0.05)).unwrap();
        assert_eq!(res.status, Termination::Converged);
        assert!(!res.warnings.is_empty());
    }
}
