//! Flag parsing and translation into solver parameters.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use conebb::{problems, theta_circumscribed, theta_inscribed, OrderingCone64, Problem64, SolverParams64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    Poly,
    Icecream,
}

/// `--theta` accepts a half-angle in radians or a name mapping epsilon to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaArg {
    Radians(f64),
    Circumscribed,
    Inscribed,
}

impl FromStr for ThetaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circumscribed" => Ok(Self::Circumscribed),
            "inscribed" => Ok(Self::Inscribed),
            _ => s
                .parse::<f64>()
                .map(Self::Radians)
                .map_err(|_| format!("expected radians, `circumscribed` or `inscribed`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Problem name (tp1, tp2, pe1, pe2, pe3, deb2dk, deb3dk, srn, constr, kita).
    #[arg(long)]
    pub problem: String,
    /// Tolerance preset; the problem's first preset when omitted.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value = "poly")]
    pub cone: ConeArg,
    /// Polyhedral cone parameter, also the source of named ice cream angles.
    #[arg(long, default_value_t = 0.75, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Ice cream cone axis, comma separated; defaults to (0.5, ..., 0.5).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Option<Vec<f64>>,
    #[arg(long)]
    pub theta: Option<ThetaArg>,
    #[arg(long)]
    pub tol_gap: Option<f64>,
    #[arg(long)]
    pub tol_width: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub gens: Option<usize>,
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long, env = "CONEBB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

/// A validated run: everything the solver and the writers need.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Problem64,
    pub preset: String,
    pub params: SolverParams64,
    pub threads: Option<usize>,
    pub out: PathBuf,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let problem = problems::build::<f64>(&self.problem).map_err(|e| e.to_string())?;
        let preset = problems::preset(&self.problem, self.preset.as_deref()).map_err(|e| e.to_string())?;
        let m = problem.num_objectives();

        let cone = match self.cone {
            ConeArg::Poly => OrderingCone64::polyhedral(self.epsilon),
            ConeArg::Icecream => {
                let w = self.w.clone().unwrap_or_else(|| vec![0.5; m]);
                let theta = match self.theta {
                    None => return Err("--cone icecream needs --theta".into()),
                    Some(ThetaArg::Radians(t)) => Ok(t),
                    Some(ThetaArg::Circumscribed) => theta_circumscribed(self.epsilon, m),
                    Some(ThetaArg::Inscribed) => theta_inscribed(self.epsilon, m),
                }
                .map_err(|e| e.to_string())?;
                OrderingCone64::ice_cream(w, theta)
            }
        }
        .map_err(|e| e.to_string())?;

        let mut params = SolverParams64::new(
            cone,
            self.tol_gap.unwrap_or(preset.tol_gap),
            self.tol_width.unwrap_or(preset.tol_width),
        );
        params.max_iterations = self.max_iters.unwrap_or(preset.max_iterations);
        params.normalize = !self.no_normalize;
        params.sampler.seed = self.seed;
        if let Some(pop) = self.pop {
            params.sampler.population = pop;
        }
        if let Some(gens) = self.gens {
            params.sampler.generations = gens;
        }
        params.validate(m).map_err(|e| e.to_string())?;
        if self.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }

        Ok(RunConfig {
            problem,
            preset: preset.name.to_string(),
            params,
            threads: self.threads,
            out: self.out.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;
    use conebb::ConeKind;

    #[derive(Parser)]
    #[command(no_binary_name = true)]
    struct Wrap {
        #[command(flatten)]
        run: RunArgs,
    }

    fn resolve(flags: &str) -> Result<RunConfig, String> {
        Wrap::try_parse_from(flags.split_whitespace())
            .map_err(|e| e.to_string())?
            .run
            .resolve()
    }

    #[test]
    fn theta_names_and_radians() {
        assert_eq!("inscribed".parse::<ThetaArg>(), Ok(ThetaArg::Inscribed));
        assert_eq!("0.25".parse::<ThetaArg>(), Ok(ThetaArg::Radians(0.25)));
        assert!("wide".parse::<ThetaArg>().is_err());
    }

    #[test]
    fn preset_fills_unset_tolerances() {
        let cfg = resolve("--problem deb3dk --preset tight --tol-gap 0.3 --seed 9").unwrap();
        assert_eq!(cfg.preset, "tight");
        assert_eq!(cfg.params.tol_gap, 0.3);
        assert_eq!(cfg.params.tol_width, 0.008);
        assert_eq!(cfg.params.sampler.seed, 9);
        assert!(cfg.params.normalize);
        assert!(!resolve("--problem tp1 --no-normalize").unwrap().params.normalize);
    }

    #[test]
    fn ice_cream_axis_defaults_to_halves() {
        let cfg = resolve("--problem pe1 --cone icecream --theta circumscribed --epsilon 0.5").unwrap();
        match cfg.params.cone.kind() {
            ConeKind::IceCream { w, theta } => {
                assert_eq!(w, &vec![0.5; 3]);
                assert_eq!(*theta, theta_circumscribed(0.5, 3).unwrap());
            }
            other => panic!("unexpected cone {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_combinations() {
        assert!(resolve("--problem tp1 --cone icecream").is_err());
        assert!(resolve("--problem tp1 --threads 0").is_err());
        assert!(resolve("--problem tp1 --preset tight").is_err());
        assert!(resolve("--problem tp1 --pop 0").is_err());
    }
}
