//! Problem description: objectives, inequality constraints and their Lipschitz constants.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::SearchBox;
use crate::scalar::Scalar;

/// A real-valued function on decision space.
pub type ScalarFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Objective and constraint values at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub objectives: Vec<T>,
    pub constraints: Vec<T>,
}

impl<T: Scalar> Evaluation<T> {
    /// Feasible iff every constraint value is nonnegative.
    pub fn is_feasible(&self) -> bool {
        self.constraints.iter().all(|&g| g >= T::zero())
    }

    /// Sum of constraint violations, zero when feasible.
    pub fn violation(&self) -> T {
        self.constraints
            .iter()
            .fold(T::zero(), |acc, &g| acc + (-g).max(T::zero()))
    }
}

/// Minimize `F(x) = (f_1(x), ..., f_m(x))` over a box subject to `g_j(x) >= 0`.
#[derive(Clone)]
pub struct Problem<T> {
    name: String,
    domain: SearchBox<T>,
    objectives: Vec<ScalarFn<T>>,
    constraints: Vec<ScalarFn<T>>,
    lipschitz_obj: Vec<T>,
    lipschitz_con: Vec<T>,
}

impl<T> fmt::Debug for Problem<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("objectives", &self.objectives.len())
            .field("constraints", &self.constraints.len())
            .field("lipschitz_obj", &self.lipschitz_obj)
            .field("lipschitz_con", &self.lipschitz_con)
            .finish()
    }
}

impl<T: Scalar> Problem<T> {
    pub fn builder(name: impl Into<String>, domain: SearchBox<T>) -> ProblemBuilder<T> {
        ProblemBuilder {
            name: name.into(),
            domain,
            objectives: Vec::new(),
            constraints: Vec::new(),
            lipschitz_obj: Vec::new(),
            lipschitz_con: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SearchBox<T> {
        &self.domain
    }

    pub fn num_vars(&self) -> usize {
        self.domain.dim()
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn lipschitz_obj(&self) -> &[T] {
        &self.lipschitz_obj
    }

    pub fn lipschitz_con(&self) -> &[T] {
        &self.lipschitz_con
    }

    pub fn constraint_fns(&self) -> &[ScalarFn<T>] {
        &self.constraints
    }

    pub fn objective_fns(&self) -> &[ScalarFn<T>] {
        &self.objectives
    }

    /// Evaluates without checking the domain; callers guarantee `x` is inside.
    pub fn eval_unchecked(&self, x: &[T]) -> Evaluation<T> {
        Evaluation {
            objectives: self.objectives.iter().map(|f| f(x)).collect(),
            constraints: self.constraints.iter().map(|g| g(x)).collect(),
        }
    }

    pub fn evaluate(&self, x: &[T]) -> Result<Evaluation<T>> {
        if x.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: x.len(),
            });
        }
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain);
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn objectives_at(&self, x: &[T]) -> Vec<T> {
        self.objectives.iter().map(|f| f(x)).collect()
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        self.constraints.iter().all(|g| g(x) >= T::zero())
    }

    /// Replaces the objective Lipschitz constants, e.g. with estimated ones.
    pub fn with_lipschitz_obj(mut self, lipschitz: Vec<T>) -> Result<Self> {
        check_constants("objective", &lipschitz, self.objectives.len())?;
        self.lipschitz_obj = lipschitz;
        Ok(self)
    }
}

pub struct ProblemBuilder<T> {
    name: String,
    domain: SearchBox<T>,
    objectives: Vec<ScalarFn<T>>,
    constraints: Vec<ScalarFn<T>>,
    lipschitz_obj: Vec<T>,
    lipschitz_con: Vec<T>,
}

impl<T: Scalar> ProblemBuilder<T> {
    /// Adds an objective `f` with Lipschitz constant `lipschitz` on the domain.
    pub fn objective<F>(mut self, lipschitz: T, f: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        self.objectives.push(Arc::new(f));
        self.lipschitz_obj.push(lipschitz);
        self
    }

    /// Adds a constraint `g(x) >= 0` with Lipschitz constant `lipschitz`.
    pub fn constraint<F>(mut self, lipschitz: T, g: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        self.constraints.push(Arc::new(g));
        self.lipschitz_con.push(lipschitz);
        self
    }

    pub fn build(self) -> Result<Problem<T>> {
        if self.objectives.is_empty() {
            return Err(Error::InvalidProblem("no objectives".into()));
        }
        if self.domain.width().iter().all(|&w| w <= T::zero()) {
            return Err(Error::InvalidProblem("degenerate domain".into()));
        }
        check_constants("objective", &self.lipschitz_obj, self.objectives.len())?;
        check_constants("constraint", &self.lipschitz_con, self.constraints.len())?;
        Ok(Problem {
            name: self.name,
            domain: self.domain,
            objectives: self.objectives,
            constraints: self.constraints,
            lipschitz_obj: self.lipschitz_obj,
            lipschitz_con: self.lipschitz_con,
        })
    }
}

fn check_constants<T: Scalar>(what: &str, values: &[T], expected: usize) -> Result<()> {
    if values.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: values.len(),
        });
    }
    if let Some(bad) = values.iter().position(|&l| !(l > T::zero()) || !l.is_finite()) {
        return Err(Error::InvalidProblem(format!(
            "{what} Lipschitz constant {bad} must be positive and finite"
        )));
    }
    Ok(())
}
