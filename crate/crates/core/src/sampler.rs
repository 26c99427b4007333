//! Upper-bound generation inside a box.
//!
//! A small decomposition-style evolutionary loop: each individual owns a random
//! weight vector on the simplex and is replaced by a differential-variation child
//! when the child wins a feasibility-first comparison under that individual's
//! weighted Chebyshev scalarization. Every feasible point evaluated along the way
//! (the box midpoint first) is returned, so the set for `g` generations is a
//! prefix-superset of the set for fewer generations under the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::SearchBox;
use crate::problem::{Evaluation, Problem};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    /// Binomial crossover probability.
    pub crossover_rate: f64,
    /// Differential weight applied to difference vectors.
    pub mutation_scale: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            population: 10,
            generations: 20,
            seed: 0,
            crossover_rate: 0.9,
            mutation_scale: 0.5,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// A feasible point and its objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T> {
    pub x: Vec<T>,
    pub objectives: Vec<T>,
}

/// Derives an independent RNG stream per `(seed, iteration, box_index)` so that
/// results do not depend on the order in which boxes are processed.
pub fn stream_seed(seed: u64, iteration: u64, box_index: u64) -> u64 {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ iteration.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    splitmix64(h ^ box_index.wrapping_mul(0xC2B2_AE3D_27D4_EB4F))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Individual<T> {
    x: Vec<T>,
    eval: Evaluation<T>,
}

/// Feasible upper bounds found in `b`; empty when no feasible point was seen.
pub fn sample_upper_bounds<T: Scalar>(
    p: &Problem<T>,
    b: &SearchBox<T>,
    cfg: &SamplerConfig,
    iteration: u64,
    box_index: u64,
) -> Vec<Sample<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, iteration, box_index));
    let m = p.num_objectives();
    let n = b.dim();
    let mut out = Vec::new();

    let mid = b.midpoint();
    let mid_eval = p.eval_unchecked(&mid);
    if mid_eval.is_feasible() {
        out.push(Sample {
            x: mid.clone(),
            objectives: mid_eval.objectives.clone(),
        });
    }
    let pop_size = cfg.population.max(1);

    let weights: Vec<Vec<T>> = (0..pop_size)
        .map(|_| {
            if pop_size == 1 {
                return vec![T::one() / T::from_usize(m).unwrap(); m];
            }
            let raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| T::lit(v / total)).collect()
        })
        .collect();

    let mut pop: Vec<Individual<T>> = Vec::with_capacity(pop_size);
    for _ in 0..pop_size {
        let unit: Vec<T> = (0..n).map(|_| T::lit(rng.gen::<f64>())).collect();
        let x = b.lerp(&unit);
        let eval = p.eval_unchecked(&x);
        if eval.is_feasible() {
            out.push(Sample {
                x: x.clone(),
                objectives: eval.objectives.clone(),
            });
        }
        pop.push(Individual { x, eval });
    }

    // Scale objectives by the spread seen so far so that one badly scaled
    // objective does not swamp the scalarization.
    let mut ideal = mid_eval.objectives.clone();
    let mut worst = mid_eval.objectives.clone();
    for ind in &pop {
        for k in 0..m {
            ideal[k] = ideal[k].min(ind.eval.objectives[k]);
            worst[k] = worst[k].max(ind.eval.objectives[k]);
        }
    }
    let scale: Vec<T> = ideal
        .iter()
        .zip(&worst)
        .map(|(&lo, &hi)| if hi > lo { hi - lo } else { T::one() })
        .collect();

    let f = T::lit(cfg.mutation_scale);
    for _ in 0..cfg.generations {
        for i in 0..pop_size {
            let mut trial = pop[i].x.clone();
            let donor: Vec<T> = if pop_size >= 4 {
                let [r1, r2, r3] = distinct_three(&mut rng, pop_size, i);
                (0..n)
                    .map(|k| pop[r1].x[k] + f * (pop[r2].x[k] - pop[r3].x[k]))
                    .collect()
            } else {
                let u: Vec<T> = (0..n).map(|_| T::lit(rng.gen::<f64>())).collect();
                let v: Vec<T> = (0..n).map(|_| T::lit(rng.gen::<f64>())).collect();
                let (r, s) = (b.lerp(&u), b.lerp(&v));
                (0..n).map(|k| pop[i].x[k] + f * (r[k] - s[k])).collect()
            };
            let forced = rng.gen_range(0..n);
            for k in 0..n {
                if k == forced || rng.gen::<f64>() < cfg.crossover_rate {
                    trial[k] = donor[k];
                }
            }
            b.clamp(&mut trial);
            let eval = p.eval_unchecked(&trial);
            if eval.is_feasible() {
                for k in 0..m {
                    ideal[k] = ideal[k].min(eval.objectives[k]);
                }
                out.push(Sample {
                    x: trial.clone(),
                    objectives: eval.objectives.clone(),
                });
            }
            if better(&eval, &pop[i].eval, &weights[i], &ideal, &scale) {
                pop[i] = Individual { x: trial, eval };
            }
        }
    }
    out
}

fn distinct_three(rng: &mut ChaCha8Rng, n: usize, exclude: usize) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    let mut count = 0;
    while count < 3 {
        let r = rng.gen_range(0..n);
        if r != exclude && !picked[..count].contains(&r) {
            picked[count] = r;
            count += 1;
        }
    }
    picked
}

fn chebyshev<T: Scalar>(f: &[T], w: &[T], ideal: &[T], scale: &[T]) -> T {
    f.iter()
        .zip(w.iter().zip(ideal.iter().zip(scale)))
        .fold(T::neg_infinity(), |acc, (&v, (&wk, (&z, &s)))| {
            acc.max(wk * (v - z).abs() / s)
        })
}

/// Feasible beats infeasible; smaller violation among infeasible; smaller
/// scalarized value among feasible.
fn better<T: Scalar>(
    cand: &Evaluation<T>,
    cur: &Evaluation<T>,
    w: &[T],
    ideal: &[T],
    scale: &[T],
) -> bool {
    match (cand.is_feasible(), cur.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => cand.violation() < cur.violation(),
        (true, true) => {
            chebyshev(&cand.objectives, w, ideal, scale) < chebyshev(&cur.objectives, w, ideal, scale)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    fn cfg(gens: usize) -> SamplerConfig {
        SamplerConfig {
            generations: gens,
            ..SamplerConfig::with_seed(7)
        }
    }

    #[test]
    fn includes_midpoint_for_unconstrained() {
        let p = problems::tp1::<f64>(0.1, 10.0).unwrap();
        let b = SearchBox::new(vec![0.0, -1.0], vec![1.0, 0.5]).unwrap();
        let out = sample_upper_bounds(&p, &b, &cfg(20), 3, 4);
        assert_eq!(out[0].x, b.midpoint());
        assert_eq!(out[0].objectives, p.objectives_at(&b.midpoint()));
        assert_eq!(out.len(), 1 + 10 + 20 * 10);
    }

    #[test]
    fn zero_generations_is_midpoint_plus_initial_population() {
        let p = problems::tp1::<f64>(0.1, 10.0).unwrap();
        let b = p.domain().clone();
        let out = sample_upper_bounds(&p, &b, &cfg(0), 0, 0);
        assert_eq!(out.len(), 11);
        for s in &out {
            assert!(b.contains(&s.x));
            assert_eq!(s.objectives, p.objectives_at(&s.x));
        }
    }

    #[test]
    fn infeasible_box_gives_nothing() {
        let p = problems::build::<f64>("constr").unwrap();
        // Below the line 9 x1 + x2 = 6 everywhere: x1 <= 0.3, x2 <= 1.
        let b = SearchBox::new(vec![0.1, 0.0], vec![0.3, 1.0]).unwrap();
        let mut any_feasible = false;
        for i in 0..=200 {
            for j in 0..=200 {
                let x = [0.1 + 0.2 * i as f64 / 200.0, j as f64 / 200.0];
                any_feasible |= p.is_feasible(&x);
            }
        }
        assert!(!any_feasible);
        assert!(sample_upper_bounds(&p, &b, &cfg(20), 1, 1).is_empty());
    }

    #[test]
    fn containment_and_feasibility() {
        for name in ["srn", "constr", "kita", "pe2", "deb3dk"] {
            let p = problems::build::<f64>(name).unwrap();
            let mut b = p.domain().clone();
            for depth in 0..4 {
                let (l, r) = b.bisect().unwrap();
                b = if depth % 2 == 0 { l } else { r };
                for s in sample_upper_bounds(&p, &b, &cfg(5), depth, 2) {
                    assert!(b.contains(&s.x), "{name}");
                    assert!(p.is_feasible(&s.x), "{name}");
                }
            }
        }
    }

    #[test]
    fn deterministic_per_stream() {
        let p = problems::build::<f64>("pe1").unwrap();
        let b = p.domain().clone();
        let a = sample_upper_bounds(&p, &b, &cfg(20), 5, 9);
        let again = sample_upper_bounds(&p, &b, &cfg(20), 5, 9);
        assert_eq!(a, again);
        let other = sample_upper_bounds(&p, &b, &cfg(20), 5, 10);
        assert_ne!(a, other);
    }

    #[test]
    fn more_generations_never_worsen_weighted_sum() {
        let p = problems::tp1::<f64>(0.1, 10.0).unwrap();
        let b = SearchBox::new(vec![-1.5, -1.0], vec![0.5, 1.0]).unwrap();
        let score = |gens: usize| {
            sample_upper_bounds(&p, &b, &cfg(gens), 2, 3)
                .iter()
                .map(|s| 0.5 * s.objectives[0] / 0.1 + 0.5 * s.objectives[1] / 10.0)
                .fold(f64::INFINITY, f64::min)
        };
        let (s0, s5, s20) = (score(0), score(5), score(20));
        assert!(s5 <= s0 && s20 <= s5, "{s0} {s5} {s20}");
        assert!(s20 < s0);
    }

    #[test]
    fn tiny_populations_work() {
        let p = problems::tp1::<f64>(0.1, 10.0).unwrap();
        let b = p.domain().clone();
        for pop in 1..4 {
            let c = SamplerConfig {
                population: pop,
                ..cfg(3)
            };
            let out = sample_upper_bounds(&p, &b, &c, 0, 0);
            assert_eq!(out.len(), 1 + pop + 3 * pop);
            assert!(out.iter().all(|s| b.contains(&s.x)));
        }
    }

    #[test]
    fn stream_seeds_differ() {
        assert_ne!(stream_seed(7, 1, 2), stream_seed(7, 2, 1));
        assert_ne!(stream_seed(7, 0, 0), stream_seed(8, 0, 0));
        assert_eq!(stream_seed(7, 3, 4), stream_seed(7, 3, 4));
    }
}
