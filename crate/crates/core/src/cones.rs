//! Ordering cones and the partial orders they induce on objective space.
//!
//! Two families are supported:
//!
//! * the polyhedral cone `C_eps = { y : T_eps y >= 0 }`, where `T_eps` has a unit
//!   diagonal and `eps` everywhere else (`eps = 0` gives the nonnegative orthant);
//! * the ice cream (revolution) cone `C_(w, theta)` of half-angle `theta` around the
//!   axis `w`.
//!
//! `y1 <=_C y2` holds iff `y2 - y1` lies in `C`. Membership is tested with an
//! absolute tolerance that defaults to zero.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind<T> {
    PolyhedralEpsilon { epsilon: T },
    IceCream { w: Vec<T>, theta: T },
}

/// A pointed closed convex ordering cone.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCone<T> {
    kind: ConeKind<T>,
    tolerance: T,
    // Cached for the ice cream cone: unit axis and tan(theta).
    axis: Vec<T>,
    tan_theta: T,
}

impl<T: Scalar> OrderingCone<T> {
    /// The blunt polyhedral cone `C_eps`, `0 <= eps < 1`.
    pub fn polyhedral(epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon < T::one()) {
            return Err(Error::InvalidCone(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(Self {
            kind: ConeKind::PolyhedralEpsilon { epsilon },
            tolerance: T::zero(),
            axis: Vec::new(),
            tan_theta: T::zero(),
        })
    }

    /// The nonnegative orthant, i.e. ordinary Pareto dominance.
    pub fn pareto() -> Self {
        Self::polyhedral(T::zero()).expect("zero epsilon is valid")
    }

    /// Ice cream cone with axis `w` and half-angle `theta` in `(0, pi/2)`.
    pub fn ice_cream(w: Vec<T>, theta: T) -> Result<Self> {
        if w.is_empty() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCone("axis must be a finite nonempty vector".into()));
        }
        let len = w.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        if !(len > T::zero()) {
            return Err(Error::InvalidCone("axis must be nonzero".into()));
        }
        let half_pi = T::lit(std::f64::consts::FRAC_PI_2);
        if !(theta > T::zero() && theta < half_pi) {
            return Err(Error::InvalidCone(format!(
                "theta must lie in (0, pi/2), got {theta}"
            )));
        }
        let axis = w.iter().map(|&v| v / len).collect();
        Ok(Self {
            kind: ConeKind::IceCream { w, theta },
            tolerance: T::zero(),
            axis,
            tan_theta: theta.tan(),
        })
    }

    /// Relaxes boundary membership by an absolute tolerance.
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance.abs();
        self
    }

    pub fn kind(&self) -> &ConeKind<T> {
        &self.kind
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    /// Fixed objective dimension, if the cone has one (ice cream cones do).
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            ConeKind::PolyhedralEpsilon { .. } => None,
            ConeKind::IceCream { w, .. } => Some(w.len()),
        }
    }

    fn check_dims(&self, a: &[T], b: &[T]) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(m) = self.dim() {
            if a.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: a.len(),
                });
            }
        }
        Ok(())
    }

    /// Membership of the difference vector `y2 - y1` without dimension checks.
    #[inline]
    pub fn contains_difference(&self, y1: &[T], y2: &[T]) -> bool {
        let tol = self.tolerance;
        match &self.kind {
            // Compared as T_eps y1 <= T_eps y2 rather than T_eps (y2 - y1) >= 0:
            // the images are then plain numbers and the order is exactly transitive.
            ConeKind::PolyhedralEpsilon { epsilon } => {
                let eps = *epsilon;
                let diag = T::one() - eps;
                let (s1, s2) = (sum(y1), sum(y2));
                y1.iter()
                    .zip(y2)
                    .all(|(&a, &b)| t_row(diag, eps, b, s2) >= t_row(diag, eps, a, s1) - tol)
            }
            ConeKind::IceCream { .. } => {
                let (d1, d2) = axial_radial(&self.axis, y1, y2);
                d1 >= -tol && d2 <= d1 * self.tan_theta + tol
            }
        }
    }

    #[inline]
    pub fn contains(&self, y: &[T]) -> bool {
        let zero = vec![T::zero(); y.len()];
        self.contains_difference(&zero, y)
    }

    /// `y1 <=_C y2`: `y2 - y1` lies in the cone.
    pub fn weak_dominates(&self, y1: &[T], y2: &[T]) -> Result<bool> {
        self.check_dims(y1, y2)?;
        Ok(self.contains_difference(y1, y2))
    }

    /// `y1 <_C y2` in the strict sense: `y2 - y1` lies in the cone minus the origin.
    pub fn strict_dominates(&self, y1: &[T], y2: &[T]) -> Result<bool> {
        Ok(self.weak_dominates(y1, y2)? && y1 != y2)
    }

    /// Neither vector weakly dominates the other.
    pub fn incomparable(&self, y1: &[T], y2: &[T]) -> Result<bool> {
        Ok(!self.weak_dominates(y1, y2)? && !self.contains_difference(y2, y1))
    }

    /// For polyhedral cones, the image `T_eps y` under which the cone order is the
    /// componentwise order, bit for bit as compared by
    /// [`contains_difference`](Self::contains_difference). `None` for ice cream cones.
    pub fn order_image(&self, y: &[T]) -> Option<Vec<T>> {
        match &self.kind {
            ConeKind::PolyhedralEpsilon { epsilon } => {
                let eps = *epsilon;
                let diag = T::one() - eps;
                let s = sum(y);
                Some(y.iter().map(|&v| t_row(diag, eps, v, s)).collect())
            }
            ConeKind::IceCream { .. } => None,
        }
    }

    /// Whether every standard basis vector lies in the cone, which by convexity
    /// means the cone contains the nonnegative orthant.
    pub fn contains_nonneg_orthant(&self, m: usize) -> bool {
        if let Some(d) = self.dim() {
            if d != m {
                return false;
            }
        }
        (0..m).all(|i| {
            let mut e = vec![T::zero(); m];
            e[i] = T::one();
            self.contains(&e)
        })
    }
}

#[inline]
fn sum<T: Scalar>(y: &[T]) -> T {
    y.iter().fold(T::zero(), |acc, &v| acc + v)
}

/// One row of `T_eps y`, given the precomputed sum of `y`.
#[inline]
fn t_row<T: Scalar>(diag: T, eps: T, yi: T, total: T) -> T {
    diag * yi + eps * total
}

/// Axial projection and radial residual of `y2 - y1` with respect to a unit axis.
#[inline]
fn axial_radial<T: Scalar>(unit: &[T], y1: &[T], y2: &[T]) -> (T, T) {
    let d1 = unit
        .iter()
        .zip(y1.iter().zip(y2))
        .fold(T::zero(), |acc, (&u, (&a, &b))| acc + (b - a) * u);
    let d2 = unit
        .iter()
        .zip(y1.iter().zip(y2))
        .fold(T::zero(), |acc, (&u, (&a, &b))| {
            let r = (b - a) - d1 * u;
            acc + r * r
        })
        .sqrt();
    (d1, d2)
}

/// `T_eps y`: unit diagonal, `eps` off the diagonal.
pub fn t_epsilon_apply<T: Scalar>(epsilon: T, y: &[T]) -> Result<Vec<T>> {
    if !(epsilon >= T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidCone(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    let total = y.iter().fold(T::zero(), |a, &v| a + v);
    Ok(y
        .iter()
        .map(|&v| (T::one() - epsilon) * v + epsilon * total)
        .collect())
}

/// Axial component `d1` and radial component `d2` of `y2 - y1` relative to `w`.
pub fn ice_components<T: Scalar>(w: &[T], y1: &[T], y2: &[T]) -> Result<(T, T)> {
    if w.len() != y1.len() || y1.len() != y2.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: if w.len() != y1.len() { y1.len() } else { y2.len() },
        });
    }
    let len = w.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
    if !(len > T::zero()) {
        return Err(Error::InvalidCone("axis must be nonzero".into()));
    }
    let unit: Vec<T> = w.iter().map(|&v| v / len).collect();
    Ok(axial_radial(&unit, y1, y2))
}

fn check_angle_args<T: Scalar>(epsilon: T, m: usize) -> Result<()> {
    if !(epsilon >= T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2, got {m}")));
    }
    Ok(())
}

/// Half-angle of the ice cream cone around `(1, ..., 1)` whose cross section
/// circumscribes that of `C_eps` in `R^m`.
pub fn theta_circumscribed<T: Scalar>(epsilon: T, m: usize) -> Result<T> {
    check_angle_args(epsilon, m)?;
    let mf = T::from_usize(m).unwrap();
    let one = T::one();
    let two = T::lit(2.0);
    let denom = (mf * (mf - one) * epsilon * epsilon
        + mf * (one + (mf - two) * epsilon).powi(2))
    .sqrt();
    Ok(((one - epsilon) / denom).acos())
}

/// Half-angle of the ice cream cone around `(1, ..., 1)` whose cross section is
/// inscribed in that of `C_eps` in `R^m`.
pub fn theta_inscribed<T: Scalar>(epsilon: T, m: usize) -> Result<T> {
    check_angle_args(epsilon, m)?;
    let mf = T::from_usize(m).unwrap();
    let one = T::one();
    let denom = (mf * (mf - one) + mf * (mf - one).powi(2) * epsilon * epsilon).sqrt();
    Ok(((mf - one) * (one - epsilon) / denom).acos())
}
