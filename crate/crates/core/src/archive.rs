//! Nondominated sets under a cone order, Hausdorff distances, and the ideal/nadir
//! surrogates used to normalize objective vectors.

use crate::cones::OrderingCone;
use crate::error::{Error, Result};
use crate::scalar::{sq_distance, Scalar};
use crate::sweep;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry<T, P> {
    pub vector: Vec<T>,
    pub payload: P,
}

/// Vectors that are pairwise incomparable under a fixed cone, each with a payload.
#[derive(Debug, Clone)]
pub struct NondominatedSet<T, P> {
    cone: OrderingCone<T>,
    entries: Vec<Entry<T, P>>,
}

impl<T: Scalar, P> NondominatedSet<T, P> {
    pub fn new(cone: OrderingCone<T>) -> Self {
        Self {
            cone,
            entries: Vec::new(),
        }
    }

    pub fn cone(&self) -> &OrderingCone<T> {
        &self.cone
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry<T, P>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Entry<T, P>> {
        self.entries
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[T]> {
        self.entries.iter().map(|e| e.vector.as_slice())
    }

    /// Inserts `v` unless a stored vector weakly dominates it (equal vectors
    /// included); evicts every stored vector that `v` weakly dominates.
    pub fn insert(&mut self, v: Vec<T>, payload: P) -> bool {
        if self
            .entries
            .iter()
            .any(|e| self.cone.contains_difference(&e.vector, &v))
        {
            return false;
        }
        let cone = &self.cone;
        self.entries
            .retain(|e| !cone.contains_difference(&v, &e.vector));
        self.entries.push(Entry { vector: v, payload });
        true
    }

    /// Checked variant of [`insert`](Self::insert).
    pub fn try_insert(&mut self, v: Vec<T>, payload: P) -> Result<bool> {
        if let Some(first) = self.entries.first() {
            if first.vector.len() != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.vector.len(),
                    found: v.len(),
                });
            }
        }
        if let Some(m) = self.cone.dim() {
            if m != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
        }
        Ok(self.insert(v, payload))
    }

    /// True iff some stored vector weakly dominates `v`.
    pub fn dominates(&self, v: &[T]) -> bool {
        self.entries
            .iter()
            .any(|e| self.cone.contains_difference(&e.vector, v))
    }

    /// Builds the set that inserting `items` one by one, in order, would produce.
    ///
    /// For exact polyhedral cones and up to three objectives this runs in
    /// `O(n log n)`; otherwise it falls back to repeated insertion.
    pub fn from_candidates(cone: OrderingCone<T>, items: Vec<(Vec<T>, P)>) -> Self {
        if let Some(images) = sweep_images(&cone, items.iter().map(|(v, _)| v.as_slice())) {
            if let Some(keep) = sweep::minimal_indices(&images) {
                let mut keep = keep.into_iter().peekable();
                let entries = items
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, (vector, payload))| {
                        (keep.next_if_eq(&i).is_some()).then_some(Entry { vector, payload })
                    })
                    .collect();
                return Self { cone, entries };
            }
        }
        let mut set = Self::new(cone);
        set.extend(items);
        set
    }

    /// [`dominates`](Self::dominates) for many queries at once.
    pub fn dominated_flags<Q: AsRef<[T]>>(&self, queries: &[Q]) -> Vec<bool> {
        let fast = sweep_images(&self.cone, self.vectors()).and_then(|stored| {
            let asked = sweep_images(&self.cone, queries.iter().map(AsRef::as_ref))?;
            sweep::dominated(&stored, &asked)
        });
        fast.unwrap_or_else(|| queries.iter().map(|q| self.dominates(q.as_ref())).collect())
    }
}

/// Order images as `f64` rows when the cone order is the componentwise order
/// of those images and the sweep kernels apply.
fn sweep_images<'a, T: Scalar>(
    cone: &OrderingCone<T>,
    vectors: impl Iterator<Item = &'a [T]>,
) -> Option<Vec<Vec<f64>>> {
    if cone.tolerance() != T::zero() {
        return None;
    }
    let mut rows = Vec::new();
    for v in vectors {
        if v.len() > sweep::MAX_DIM {
            return None;
        }
        // `+ 0.0` folds -0.0 into 0.0, which `<=` treats as equal anyway.
        let row: Vec<f64> = cone.order_image(v)?.into_iter().map(|x| x.as_f64() + 0.0).collect();
        if row.iter().any(|x| x.is_nan()) {
            return None;
        }
        rows.push(row);
    }
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return None;
    }
    Some(rows)
}

impl<T: Scalar, P> Extend<(Vec<T>, P)> for NondominatedSet<T, P> {
    fn extend<I: IntoIterator<Item = (Vec<T>, P)>>(&mut self, iter: I) {
        for (v, p) in iter {
            self.insert(v, p);
        }
    }
}

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff<T, A, B>(a: &[A], b: &[B]) -> Result<T>
where
    T: Scalar,
    A: AsRef<[T]>,
    B: AsRef<[T]>,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    // Scan B outward from each point's position in first-coordinate order; a
    // point whose first-coordinate gap alone exceeds the best so far cannot be nearer.
    let mut sorted: Vec<&[T]> = b.iter().map(AsRef::as_ref).collect();
    sorted.sort_by(|p, q| p[0].partial_cmp(&q[0]).unwrap_or(std::cmp::Ordering::Equal));
    let mut worst = T::zero();
    for x in a {
        let x = x.as_ref();
        let start = sorted.partition_point(|y| y[0] < x[0]);
        let mut nearest = T::infinity();
        for y in sorted[start..].iter() {
            let gap = y[0] - x[0];
            if gap * gap > nearest {
                break;
            }
            nearest = nearest.min(sq_distance(x, y));
        }
        for y in sorted[..start].iter().rev() {
            let gap = x[0] - y[0];
            if gap * gap > nearest {
                break;
            }
            nearest = nearest.min(sq_distance(x, y));
        }
        if nearest > worst {
            worst = nearest;
        }
    }
    Ok(worst.sqrt())
}

pub fn hausdorff<T, A, B>(a: &[A], b: &[B]) -> Result<T>
where
    T: Scalar,
    A: AsRef<[T]>,
    B: AsRef<[T]>,
{
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Ideal-point surrogate `l_star` and nadir-point surrogate `u_nad`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoints<T> {
    pub l_star: Vec<T>,
    pub u_nad: Vec<T>,
}

impl<T: Scalar> ReferencePoints<T> {
    /// `l_star` is the coordinatewise minimum of all lower bounds. `u_nad` is the
    /// coordinatewise maximum over the Pareto-nondominated subset of the feasible
    /// midpoint images; when there are none, `fallback` supplies other feasible
    /// images to use instead.
    pub fn compute<L, F>(lower_bounds: &[L], midpoint_images: &[Vec<T>], fallback: F) -> Result<Self>
    where
        L: AsRef<[T]>,
        F: FnOnce() -> Vec<Vec<T>>,
    {
        let first = lower_bounds.first().ok_or(Error::EmptySet)?.as_ref();
        let mut l_star = first.to_vec();
        for l in lower_bounds {
            for (s, &v) in l_star.iter_mut().zip(l.as_ref()) {
                *s = s.min(v);
            }
        }
        let fallback_images;
        let images = if midpoint_images.is_empty() {
            fallback_images = fallback();
            &fallback_images
        } else {
            midpoint_images
        };
        let u_nad = pareto_nadir(images).ok_or(Error::EmptySet)?;
        Ok(Self { l_star, u_nad })
    }

    /// Affine rescale `(v_i - l_star_i) / (u_nad_i - l_star_i)`; a nonpositive
    /// denominator is replaced by one.
    pub fn normalize(&self, v: &[T]) -> Vec<T> {
        v.iter()
            .zip(self.l_star.iter().zip(&self.u_nad))
            .map(|(&x, (&lo, &hi))| {
                let span = hi - lo;
                let span = if span > T::zero() { span } else { T::one() };
                (x - lo) / span
            })
            .collect()
    }

    /// Scales a per-objective Lipschitz vector to the normalized objective space.
    pub fn normalize_lipschitz(&self, lipschitz: &[T]) -> Vec<T> {
        lipschitz
            .iter()
            .zip(self.l_star.iter().zip(&self.u_nad))
            .map(|(&l, (&lo, &hi))| {
                let span = hi - lo;
                if span > T::zero() {
                    l / span
                } else {
                    l
                }
            })
            .collect()
    }

    /// Whether a box with this lower bound and (optional, feasible) midpoint
    /// image attains an extreme coordinate and must survive the iteration.
    pub fn is_protected(&self, lower: &[T], midpoint_image: Option<&[T]>) -> bool {
        lower.iter().zip(&self.l_star).any(|(&l, &s)| l == s)
            || midpoint_image
                .is_some_and(|img| img.iter().zip(&self.u_nad).any(|(&u, &n)| u == n))
    }
}

/// Coordinatewise maximum over the Pareto-nondominated subset of `images`.
fn pareto_nadir<T: Scalar>(images: &[Vec<T>]) -> Option<Vec<T>> {
    let mut front: NondominatedSet<T, ()> = NondominatedSet::new(OrderingCone::pareto());
    for img in images {
        front.insert(img.clone(), ());
    }
    let mut vecs = front.vectors();
    let mut nadir = vecs.next()?.to_vec();
    for v in vecs {
        for (n, &x) in nadir.iter_mut().zip(v) {
            *n = n.max(x);
        }
    }
    Some(nadir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pareto_set(points: &[[f64; 2]]) -> NondominatedSet<f64, usize> {
        let mut s = NondominatedSet::new(OrderingCone::pareto());
        for (i, p) in points.iter().enumerate() {
            s.insert(p.to_vec(), i);
        }
        s
    }

    #[test]
    fn insert_examples() {
        let mut s = pareto_set(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(!s.insert(vec![2.0, 2.0], 9));
        assert_eq!(s.len(), 2);

        let mut s = pareto_set(&[[2.0, 2.0]]);
        assert!(s.insert(vec![1.0, 1.0], 1));
        assert_eq!(s.vectors().collect::<Vec<_>>(), vec![&[1.0, 1.0][..]]);

        let mut blunt = NondominatedSet::new(OrderingCone::polyhedral(0.75).unwrap());
        blunt.insert(vec![0.0, 0.0], ());
        assert!(!blunt.insert(vec![1.0, -0.7], ()));
        let mut plain = pareto_set(&[[0.0, 0.0]]);
        assert!(plain.insert(vec![1.0, -0.7], 1));
    }

    #[test]
    fn duplicates_rejected() {
        let mut s = pareto_set(&[[1.0, 1.0]]);
        assert!(!s.insert(vec![1.0, 1.0], 7));
        assert_eq!(s.entries()[0].payload, 0);
    }

    #[test]
    fn try_insert_checks_dimensions() {
        let mut s = pareto_set(&[[1.0, 1.0]]);
        assert!(s.try_insert(vec![0.0, 0.0, 0.0], 1).is_err());
        let mut ice: NondominatedSet<f64, ()> =
            NondominatedSet::new(OrderingCone::ice_cream(vec![1.0, 1.0], 0.9).unwrap());
        assert!(ice.try_insert(vec![1.0], ()).is_err());
        assert!(ice.try_insert(vec![1.0, 0.0], ()).unwrap());
    }

    #[test]
    fn hausdorff_examples() {
        let a = vec![vec![0.0, 0.0]];
        assert_eq!(directed_hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let b = vec![vec![3.0, 4.0]];
        assert_eq!(directed_hausdorff(&a, &b).unwrap(), 5.0);
        assert_eq!(hausdorff(&a, &b).unwrap(), 5.0);
        let two = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(directed_hausdorff(&two, &a).unwrap(), 1.0);
        assert_eq!(directed_hausdorff(&a, &two).unwrap(), 0.0);
        assert_eq!(hausdorff(&two, &a).unwrap(), 1.0);
        let empty: Vec<Vec<f64>> = Vec::new();
        assert_eq!(directed_hausdorff(&empty, &a), Err(Error::EmptySet));
    }

    #[test]
    fn reference_point_examples() {
        let never = || -> Vec<Vec<f64>> { panic!("fallback not expected") };
        let rp = ReferencePoints::compute(
            &[vec![0.0, 3.0], vec![1.0, 1.0]],
            &[vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]],
            never,
        )
        .unwrap();
        assert_eq!(rp.l_star, vec![0.0, 1.0]);
        assert_eq!(rp.u_nad, vec![2.0, 2.0]);

        let rp = ReferencePoints::compute(&[vec![1.0, 1.0]], &[vec![5.0, 7.0]], never).unwrap();
        assert_eq!(rp.u_nad, vec![5.0, 7.0]);
    }

    #[test]
    fn reference_points_fall_back_when_midpoints_infeasible() {
        let rp =
            ReferencePoints::compute(&[vec![0.0, 0.0]], &[], || vec![vec![4.0, 1.0], vec![5.0, 5.0]])
                .unwrap();
        assert_eq!(rp.u_nad, vec![4.0, 1.0]);
        let err = ReferencePoints::<f64>::compute(&[vec![0.0, 0.0]], &[], Vec::new);
        assert_eq!(err, Err(Error::EmptySet));
        let none: Vec<Vec<f64>> = Vec::new();
        assert!(ReferencePoints::compute(&none, &[vec![1.0, 1.0]], Vec::new).is_err());
    }

    #[test]
    fn normalization_examples() {
        let rp = ReferencePoints {
            l_star: vec![0.0, 0.0],
            u_nad: vec![2.0, 4.0],
        };
        assert_eq!(rp.normalize(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(rp.normalize(&[2.0, 4.0]), vec![1.0, 1.0]);
        assert_eq!(rp.normalize(&[1.0, 1.0]), vec![0.5, 0.25]);
        let flat = ReferencePoints {
            l_star: vec![1.0, 3.0],
            u_nad: vec![1.0, 5.0],
        };
        assert_eq!(flat.normalize(&[2.0, 4.0]), vec![1.0, 0.5]);
    }

    #[test]
    fn protection_examples() {
        let rp = ReferencePoints {
            l_star: vec![0.0, 1.0],
            u_nad: vec![2.0, 2.0],
        };
        assert!(rp.is_protected(&[0.0, 5.0], None));
        // Ties on l_star: every tied box is protected.
        assert!(rp.is_protected(&[0.0, 3.0], Some(&[1.0, 1.5])));
        assert!(rp.is_protected(&[0.5, 1.5], Some(&[1.0, 2.0])));
        assert!(!rp.is_protected(&[0.5, 1.5], Some(&[1.0, 1.5])));
        assert!(!rp.is_protected(&[0.5, 1.5], None));
    }

    fn check_pairwise<P>(s: &NondominatedSet<f64, P>) -> bool {
        let v: Vec<&[f64]> = s.vectors().collect();
        (0..v.len()).all(|i| {
            (0..v.len()).all(|j| i == j || !s.cone().contains_difference(v[i], v[j]))
        })
    }

    #[test]
    fn insert_order_does_not_change_pareto_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
            .collect();
        let reference = {
            let mut s = NondominatedSet::new(OrderingCone::pareto());
            s.extend(pts.iter().cloned().map(|p| (p, ())));
            let mut v: Vec<Vec<f64>> = s.vectors().map(<[f64]>::to_vec).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        };
        for _ in 0..100 {
            let mut shuffled = pts.clone();
            shuffled.shuffle(&mut rng);
            let mut s = NondominatedSet::new(OrderingCone::pareto());
            s.extend(shuffled.into_iter().map(|p| (p, ())));
            let mut v: Vec<Vec<f64>> = s.vectors().map(<[f64]>::to_vec).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(v, reference);
        }
    }

    #[test]
    fn larger_cones_keep_fewer_points() {
        use crate::cones::{theta_circumscribed, theta_inscribed};
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in [2usize, 3] {
            let w = vec![0.5; m];
            let outer = OrderingCone::ice_cream(w.clone(), theta_circumscribed(0.75, m).unwrap()).unwrap();
            let middle = OrderingCone::polyhedral(0.75).unwrap();
            let inner = OrderingCone::ice_cream(w, theta_inscribed(0.75, m).unwrap()).unwrap();
            for _ in 0..20 {
                let pts: Vec<Vec<f64>> = (0..300)
                    .map(|_| (0..m).map(|_| rng.gen_range(0.0..1.0)).collect())
                    .collect();
                let count = |c: &OrderingCone<f64>| {
                    let mut s = NondominatedSet::new(c.clone());
                    s.extend(pts.iter().cloned().map(|p| (p, ())));
                    assert!(check_pairwise(&s));
                    s.len()
                };
                let (a, b, c) = (count(&outer), count(&middle), count(&inner));
                assert!(a <= b && b <= c, "m={m}: {a} {b} {c}");
            }
        }
    }

    proptest! {
        #[test]
        fn pairwise_incomparable_after_inserts(
            pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..300),
            eps in 0.0f64..0.95,
        ) {
            let mut s = NondominatedSet::new(OrderingCone::polyhedral(eps).unwrap());
            s.extend(pts.into_iter().map(|p| (p, ())));
            prop_assert!(check_pairwise(&s));
        }

        #[test]
        fn hausdorff_is_a_pseudometric(
            a in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..20),
            b in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..20),
            c in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..20),
        ) {
            let ab: f64 = hausdorff(&a, &b).unwrap();
            prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
            prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
            let ac: f64 = hausdorff(&a, &c).unwrap();
            let cb: f64 = hausdorff(&c, &b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
        }

        #[test]
        fn directed_zero_iff_subset(
            b in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..20),
            pick in prop::collection::vec(any::<prop::sample::Index>(), 1..10),
            extra in prop::collection::vec(-3.0f64..3.0, 2),
        ) {
            let a: Vec<Vec<f64>> = pick.iter().map(|i| b[i.index(b.len())].clone()).collect();
            prop_assert_eq!(directed_hausdorff(&a, &b).unwrap(), 0.0);
            let mut a2 = a.clone();
            let outside = !b.contains(&extra);
            a2.push(extra);
            prop_assert_eq!(directed_hausdorff(&a2, &b).unwrap() > 0.0, outside);
        }

        #[test]
        fn bulk_build_matches_sequential_inserts(
            m in 1usize..=4,
            cone_pick in 0usize..4,
            raw in prop::collection::vec(prop::collection::vec(0i32..5, 4), 0..40),
            queries in prop::collection::vec(prop::collection::vec(0i32..5, 4), 0..20),
        ) {
            // Coarse grid values so that ties and boundary cases are frequent.
            let rows: Vec<Vec<f64>> = raw.iter().map(|r| r[..m].iter().map(|&v| f64::from(v) * 0.5).collect()).collect();
            let cone = match cone_pick {
                0 => OrderingCone::pareto(),
                1 => OrderingCone::polyhedral(0.75).unwrap(),
                2 => OrderingCone::polyhedral(0.3).unwrap().with_tolerance(1e-9),
                _ => OrderingCone::ice_cream(vec![1.0; m], 1.2).unwrap(),
            };
            let items: Vec<(Vec<f64>, usize)> = rows.iter().cloned().zip(0..).collect();
            let mut seq = NondominatedSet::new(cone.clone());
            seq.extend(items.clone());
            let bulk = NondominatedSet::from_candidates(cone.clone(), items);
            prop_assert_eq!(seq.entries(), bulk.entries());

            let qs: Vec<Vec<f64>> = queries.iter().map(|r| r[..m].iter().map(|&v| f64::from(v) * 0.5).collect()).collect();
            let brute: Vec<bool> = qs
                .iter()
                .map(|q| seq.vectors().any(|u| cone.contains_difference(u, q)))
                .collect();
            prop_assert_eq!(seq.dominated_flags(&qs), brute);
        }

        #[test]
        fn pruned_hausdorff_matches_brute_force(
            a in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..30),
            b in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..30),
        ) {
            let brute = a
                .iter()
                .map(|x| b.iter().map(|y| crate::scalar::distance(x, y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            prop_assert_eq!(directed_hausdorff(&a, &b).unwrap(), brute);
        }
    }
}
