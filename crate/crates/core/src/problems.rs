//! Test problem corpus.
//!
//! Every problem carries analytic Lipschitz constants: upper bounds of the
//! gradient norm over the whole domain, derived term by term in the builders.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::SearchBox;
use crate::problem::Problem;
use crate::scalar::Scalar;

/// Registered problem names.
pub const NAMES: [&str; 10] = [
    "tp1", "tp2", "pe1", "pe2", "pe3", "deb2dk", "deb3dk", "srn", "constr", "kita",
];

/// Anchors of PE1 (and PE2).
pub const PE1_ANCHORS: [[f64; 3]; 3] = [[1.0, 1.0, 1.0], [-1.0, -1.0, -1.0], [1.0, -1.0, 1.0]];
/// Anchors of PE3.
pub const PE3_ANCHORS: [[f64; 3]; 3] = [[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]];
/// Ice cream cone axes used for the PE3 direction sweep.
pub const PE3_DIRECTIONS: [[f64; 3]; 3] = [[0.1, 0.5, 0.5], [0.5, 0.1, 0.5], [0.5, 0.5, 0.1]];

/// Objective scale factors used for the scaled TP problems.
pub const TP_SCALES: (f64, f64) = (0.1, 10.0);

/// Problem name plus the builder parameters it takes.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Tp1 { k1: f64, k2: f64 },
    Tp2 { k1: f64, k2: f64 },
    Pe1 { anchors: [[f64; 3]; 3] },
    Pe2,
    Pe3,
    Deb2dk { knees: u32, n: usize },
    Deb3dk { knees: u32, n: usize },
    Srn,
    Constr,
    Kita,
}

impl ProblemSpec {
    /// Default parameterisation of a registered problem.
    pub fn by_name(name: &str) -> Result<Self> {
        let (k1, k2) = TP_SCALES;
        Ok(match name.to_ascii_lowercase().as_str() {
            "tp1" => Self::Tp1 { k1, k2 },
            "tp2" => Self::Tp2 { k1, k2 },
            "pe1" => Self::Pe1 {
                anchors: PE1_ANCHORS,
            },
            "pe2" => Self::Pe2,
            "pe3" => Self::Pe3,
            "deb2dk" => Self::Deb2dk { knees: 4, n: 5 },
            "deb3dk" => Self::Deb3dk { knees: 1, n: 3 },
            "srn" => Self::Srn,
            "constr" => Self::Constr,
            "kita" => Self::Kita,
            _ => return Err(Error::UnknownProblem(name.to_string())),
        })
    }

    pub fn build<T: Scalar>(&self) -> Result<Problem<T>> {
        match *self {
            Self::Tp1 { k1, k2 } => tp1(k1, k2),
            Self::Tp2 { k1, k2 } => tp2(k1, k2),
            Self::Pe1 { anchors } => pe1("pe1", anchors),
            Self::Pe2 => pe2(),
            Self::Pe3 => pe1("pe3", PE3_ANCHORS),
            Self::Deb2dk { knees, n } => deb2dk(knees, n),
            Self::Deb3dk { knees, n } => deb3dk(knees, n),
            Self::Srn => srn(),
            Self::Constr => constr(),
            Self::Kita => kita(),
        }
    }
}

pub fn build<T: Scalar>(name: &str) -> Result<Problem<T>> {
    ProblemSpec::by_name(name)?.build()
}

/// Solver tolerances registered for a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub tol_gap: f64,
    pub tol_width: f64,
    pub max_iterations: usize,
}

/// Presets for a problem; the first one is the default.
///
/// `default` presets are sized to finish in seconds. The `tight` presets for the
/// knee problems are far more expensive.
pub fn presets(name: &str) -> Result<Vec<Preset>> {
    let p = |name, tol_gap, tol_width, max_iterations| Preset {
        name,
        tol_gap,
        tol_width,
        max_iterations,
    };
    Ok(match name.to_ascii_lowercase().as_str() {
        "tp1" | "tp2" => vec![p("default", 0.05, 0.02, 200)],
        "pe1" | "pe3" => vec![p("default", 0.2, 0.1, 200)],
        "pe2" => vec![p("default", 0.45, 0.15, 200)],
        // Five variables: the box count roughly doubles per iteration, so the
        // desk preset stops long before the bounds are tight.
        "deb2dk" => vec![
            p("default", 1.0, 0.3, 300),
            p("tight", 0.0015, 0.00015, 500),
        ],
        "deb3dk" => vec![p("default", 0.5, 0.05, 300), p("tight", 0.006, 0.008, 500)],
        "srn" | "constr" | "kita" => vec![p("default", 0.1, 0.2, 200)],
        _ => return Err(Error::UnknownProblem(name.to_string())),
    })
}

pub fn preset(problem: &str, preset: Option<&str>) -> Result<Preset> {
    let all = presets(problem)?;
    match preset {
        None => Ok(all[0]),
        Some(want) => all
            .into_iter()
            .find(|p| p.name == want)
            .ok_or_else(|| Error::InvalidParameter(format!("no preset `{want}` for {problem}"))),
    }
}

fn lit<T: Scalar>(v: f64) -> T {
    T::lit(v)
}

/// `f_1 = k1 |x - (1,1)|^2`, `f_2 = k2 |x + (1,1)|^2` on `[-2, 2]^2`.
pub fn tp1<T: Scalar>(k1: f64, k2: f64) -> Result<Problem<T>> {
    // |grad f| = 2k |x - a| <= 2k * 3 sqrt(2) on the domain.
    let reach = 3.0 * 2f64.sqrt();
    let (a, b) = (lit::<T>(k1), lit::<T>(k2));
    Problem::builder("tp1", SearchBox::cube(2, lit(-2.0), lit(2.0))?)
        .objective(lit(2.0 * k1 * reach), move |x: &[T]| {
            let one = T::one();
            a * ((x[0] - one).powi(2) + (x[1] - one).powi(2))
        })
        .objective(lit(2.0 * k2 * reach), move |x: &[T]| {
            let one = T::one();
            b * ((x[0] + one).powi(2) + (x[1] + one).powi(2))
        })
        .build()
}

/// Scaled TP2 on `[-1.5, 1.5]^2`:
///
/// `f_1 = k1/2 (sqrt(1 + (x1+x2)^2) + sqrt(1 + (x1-x2)^2 + x1 - x2)) + k1 exp(-(x1-x2)^2)`,
/// `f_2 = k2/2 (sqrt(1 + (x1+x2)^2) + sqrt(1 + (x1-x2)^2 - x1 + x2)) + k2 exp(-(x1-x2)^2)`.
pub fn tp2<T: Scalar>(k1: f64, k2: f64) -> Result<Problem<T>> {
    // In s = x1 + x2, d = x1 - x2: |d/ds| <= 1/2, |d/dd| <= 1/2 + sqrt(2) e^{-1/2},
    // and |grad_x| = sqrt(2) |grad_(s,d)|.
    let ds = 0.5;
    let dd = 0.5 + 2f64.sqrt() * (-0.5f64).exp();
    let unit = 2f64.sqrt() * (ds * ds + dd * dd).sqrt();
    let make = |k: f64, sign: f64| {
        let (k, sign) = (lit::<T>(k), lit::<T>(sign));
        move |x: &[T]| {
            let one = T::one();
            let half = lit::<T>(0.5);
            let s = x[0] + x[1];
            let d = x[0] - x[1];
            half * k * ((one + s * s).sqrt() + (one + d * d + sign * d).sqrt())
                + k * (-(d * d)).exp()
        }
    };
    Problem::builder("tp2", SearchBox::cube(2, lit(-1.5), lit(1.5))?)
        .objective(lit(k1 * unit), make(k1, 1.0))
        .objective(lit(k2 * unit), make(k2, -1.0))
        .build()
}

fn sq_dist<T: Scalar>(x: &[T], a: &[T]) -> T {
    x.iter()
        .zip(a)
        .fold(T::zero(), |acc, (&v, &c)| acc + (v - c) * (v - c))
}

/// Largest distance from `a` to a point of `[-2, 2]^3`.
fn reach_in_cube(a: &[f64; 3]) -> f64 {
    a.iter()
        .map(|c| (2.0 + c.abs()).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `f_j = |x - a^(j)|^2` on `[-2, 2]^3`.
pub fn pe1<T: Scalar>(name: &str, anchors: [[f64; 3]; 3]) -> Result<Problem<T>> {
    let mut builder = Problem::builder(name, SearchBox::cube(3, lit(-2.0), lit(2.0))?);
    for a in anchors {
        let lip = 2.0 * reach_in_cube(&a);
        let anchor: Vec<T> = a.iter().map(|&v| lit(v)).collect();
        builder = builder.objective(lit(lip), move |x: &[T]| sq_dist(x, &anchor));
    }
    builder.build()
}

/// PE2: PE1 with the first two objectives penalised away from the sphere
/// `f_1 + f_2 = 12` by `|f_1 + f_2 - 12| / (2 sqrt 6) * |x + e_2|^2`.
pub fn pe2<T: Scalar>() -> Result<Problem<T>> {
    let [a1, a2, a3] = PE1_ANCHORS.map(|a| a.map(lit::<T>));
    // grad f1 + grad f2 = 4x, |f1 + f2 - 12| = |2|x|^2 - 6| <= 18, |x + e2|^2 <= 17.
    let base = 2.0 * reach_in_cube(&PE1_ANCHORS[0]);
    let lip12 = base + (8.0 * 3f64.sqrt() * 17.0 + 18.0 * 2.0 * 17f64.sqrt()) / (2.0 * 6f64.sqrt());
    let lip3 = 2.0 * reach_in_cube(&PE1_ANCHORS[2]);
    let penalty = move |x: &[T]| {
        let f1 = sq_dist(x, &a1);
        let f2 = sq_dist(x, &a2);
        let shifted = [x[0], x[1] + T::one(), x[2]];
        let q = shifted.iter().fold(T::zero(), |acc, &v| acc + v * v);
        (f1, f2, (f1 + f2 - lit(12.0)).abs() / (lit::<T>(2.0) * lit::<T>(6.0).sqrt()) * q)
    };
    Problem::builder("pe2", SearchBox::cube(3, lit(-2.0), lit(2.0))?)
        .objective(lit(lip12), move |x: &[T]| {
            let (f1, _, pen) = penalty(x);
            f1 + pen
        })
        .objective(lit(lip12), move |x: &[T]| {
            let (_, f2, pen) = penalty(x);
            f2 + pen
        })
        .objective(lit(lip3), move |x: &[T]| sq_dist(x, &a3))
        .build()
}

/// DEB2DK knee problem on `[0, 1]^n`:
///
/// `g = 1 + 9/(n-1) sum_{i>=2} x_i`, `r = 5 + 10 (x_1 - 1/2)^2 + cos(2 K pi x_1) / K`,
/// `f_1 = g r sin(pi x_1 / 2)`, `f_2 = g r cos(pi x_1 / 2)`.
pub fn deb2dk<T: Scalar>(knees: u32, n: usize) -> Result<Problem<T>> {
    if knees == 0 || n < 2 {
        return Err(Error::InvalidParameter("deb2dk needs K >= 1 and n >= 2".into()));
    }
    let kf = f64::from(knees);
    let tail = 9.0 / (n - 1) as f64;
    let r_max = 7.5 + 1.0 / kf;
    let dr_max = 10.0 + 2.0 * PI;
    let d1 = 10.0 * (dr_max * dr_max + (r_max * PI / 2.0).powi(2)).sqrt();
    let di = tail * r_max;
    let lip = (d1 * d1 + (n - 1) as f64 * di * di).sqrt();

    let parts = move |x: &[T]| {
        let g = T::one() + lit::<T>(tail) * x[1..].iter().fold(T::zero(), |a, &v| a + v);
        let k = lit::<T>(kf);
        let pi = lit::<T>(PI);
        let r = lit::<T>(5.0)
            + lit::<T>(10.0) * (x[0] - lit(0.5)).powi(2)
            + (lit::<T>(2.0) * k * pi * x[0]).cos() / k;
        (g * r, pi * x[0] / lit(2.0))
    };
    Problem::builder("deb2dk", SearchBox::cube(n, T::zero(), T::one())?)
        .objective(lit(lip), move |x: &[T]| {
            let (gr, phi) = parts(x);
            gr * phi.sin()
        })
        .objective(lit(lip), move |x: &[T]| {
            let (gr, phi) = parts(x);
            gr * phi.cos()
        })
        .build()
}

/// DEB3DK knee problem on `[0, 1]^n`, `n >= 3`:
///
/// `g = 1 + 9/(n-2) sum_{i>=3} x_i`, `r_i = 5 + 10 (x_i - 1/2)^2 + 2 cos(2 K pi x_i) / K`,
/// `r = (r_1 + r_2) / 2`, `f_1 = g r sin(a) sin(b)`, `f_2 = g r sin(a) cos(b)`,
/// `f_3 = g r cos(a)` with `a = pi x_1 / 2`, `b = pi x_2 / 2`.
pub fn deb3dk<T: Scalar>(knees: u32, n: usize) -> Result<Problem<T>> {
    if knees == 0 || n < 3 {
        return Err(Error::InvalidParameter("deb3dk needs K >= 1 and n >= 3".into()));
    }
    let kf = f64::from(knees);
    let tail = 9.0 / (n - 2) as f64;
    let r_max = 7.5 + 2.0 / kf;
    let dr_max = 10.0 + 4.0 * PI;
    let dang = 10.0 * ((dr_max / 2.0).powi(2) + (r_max * PI / 2.0).powi(2)).sqrt();
    let di = tail * r_max;
    let lip = (2.0 * dang * dang + (n - 2) as f64 * di * di).sqrt();

    let parts = move |x: &[T]| {
        let g = T::one() + lit::<T>(tail) * x[2..].iter().fold(T::zero(), |a, &v| a + v);
        let k = lit::<T>(kf);
        let pi = lit::<T>(PI);
        let ri = |v: T| {
            lit::<T>(5.0)
                + lit::<T>(10.0) * (v - lit(0.5)).powi(2)
                + lit::<T>(2.0) * (lit::<T>(2.0) * k * pi * v).cos() / k
        };
        let r = (ri(x[0]) + ri(x[1])) / lit(2.0);
        (g * r, pi * x[0] / lit(2.0), pi * x[1] / lit(2.0))
    };
    Problem::builder("deb3dk", SearchBox::cube(n, T::zero(), T::one())?)
        .objective(lit(lip), move |x: &[T]| {
            let (gr, a, b) = parts(x);
            gr * a.sin() * b.sin()
        })
        .objective(lit(lip), move |x: &[T]| {
            let (gr, a, b) = parts(x);
            gr * a.sin() * b.cos()
        })
        .objective(lit(lip), move |x: &[T]| {
            let (gr, a, _) = parts(x);
            gr * a.cos()
        })
        .build()
}

/// SRN on `[-20, 20]^2`: `f_1 = 2 + (x1-2)^2 + (x2-1)^2`, `f_2 = 9 x1 - (x2-1)^2`,
/// subject to `x1^2 + x2^2 <= 225` and `x1 - 3 x2 + 10 <= 0`.
pub fn srn<T: Scalar>() -> Result<Problem<T>> {
    Problem::builder("srn", SearchBox::cube(2, lit(-20.0), lit(20.0))?)
        .objective(lit((44f64.powi(2) + 42f64.powi(2)).sqrt()), |x: &[T]| {
            lit::<T>(2.0) + (x[0] - lit(2.0)).powi(2) + (x[1] - T::one()).powi(2)
        })
        .objective(lit((81.0 + 42f64.powi(2)).sqrt()), |x: &[T]| {
            lit::<T>(9.0) * x[0] - (x[1] - T::one()).powi(2)
        })
        .constraint(lit(40.0 * 2f64.sqrt()), |x: &[T]| {
            lit::<T>(225.0) - x[0] * x[0] - x[1] * x[1]
        })
        .constraint(lit(10f64.sqrt()), |x: &[T]| {
            lit::<T>(3.0) * x[1] - x[0] - lit(10.0)
        })
        .build()
}

/// CONSTR on `[0.1, 1] x [0, 5]`: `f_1 = x1`, `f_2 = (1 + x2) / x1`, subject to
/// `x2 + 9 x1 >= 6` and `-x2 + 9 x1 >= 1`.
pub fn constr<T: Scalar>() -> Result<Problem<T>> {
    let domain = SearchBox::new(vec![lit(0.1), T::zero()], vec![T::one(), lit(5.0)])?;
    Problem::builder("constr", domain)
        .objective(T::one(), |x: &[T]| x[0])
        // |grad f2| = sqrt((1+x2)^2 / x1^4 + 1 / x1^2), largest at (0.1, 5).
        .objective(lit((600f64.powi(2) + 100.0).sqrt()), |x: &[T]| {
            (T::one() + x[1]) / x[0]
        })
        .constraint(lit(82f64.sqrt()), |x: &[T]| x[1] + lit::<T>(9.0) * x[0] - lit(6.0))
        .constraint(lit(82f64.sqrt()), |x: &[T]| lit::<T>(9.0) * x[0] - x[1] - T::one())
        .build()
}

/// KITA on `[0, 7]^2`, written as minimisation of the negated objectives
/// `f_1 = x1^2 - x2`, `f_2 = -x1/2 - x2 - 1`, subject to `x1/6 + x2 <= 13/2`,
/// `x1/2 + x2 <= 15/2` and `5 x1 + x2 <= 30`.
pub fn kita<T: Scalar>() -> Result<Problem<T>> {
    Problem::builder("kita", SearchBox::cube(2, T::zero(), lit(7.0))?)
        .objective(lit(197f64.sqrt()), |x: &[T]| x[0] * x[0] - x[1])
        .objective(lit(1.25f64.sqrt()), |x: &[T]| -x[0] / lit(2.0) - x[1] - T::one())
        .constraint(lit((1.0 / 36.0 + 1.0f64).sqrt()), |x: &[T]| {
            lit::<T>(6.5) - x[0] / lit(6.0) - x[1]
        })
        .constraint(lit(1.25f64.sqrt()), |x: &[T]| lit::<T>(7.5) - x[0] / lit(2.0) - x[1])
        .constraint(lit(26f64.sqrt()), |x: &[T]| lit::<T>(30.0) - lit::<T>(5.0) * x[0] - x[1])
        .build()
}
