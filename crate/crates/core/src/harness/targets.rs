//! Named targets used by the verify suite, the CLI and the examples.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adaptive::LogHolderTarget;
use crate::distributions::UniformBox;
use crate::error::{Error, Result};
use crate::mechanisms::{
    build_erm_target, gaussian_envelope, knorm_envelope, ErmSpec, KngTarget, StronglyConcaveTarget,
};
use crate::samplers::{Envelope, UnnormalizedTarget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinTarget {
    /// `g(x) = -x^2` on the line with declared `alpha = 1`, `L = 4`.
    GaussianDemo,
    /// KNG for `x1^2/2 + 3 x2^2/2` in the plane, `alpha = 1`, `L = 3`.
    KngDemo,
    /// `g(x) = -3|x - 1/2| + sin(20x)/5` on `[0, 1]`, 7-Lipschitz.
    Example4Lipschitz,
    /// Ridge regression over a fixed 20-record database.
    RidgeErm,
}

impl BuiltinTarget {
    pub const ALL: [BuiltinTarget; 4] = [
        BuiltinTarget::GaussianDemo,
        BuiltinTarget::KngDemo,
        BuiltinTarget::Example4Lipschitz,
        BuiltinTarget::RidgeErm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinTarget::GaussianDemo => "gaussian-demo",
            BuiltinTarget::KngDemo => "kng-demo",
            BuiltinTarget::Example4Lipschitz => "example4-lipschitz",
            BuiltinTarget::RidgeErm => "ridge-erm",
        }
    }

    pub fn prepare(self) -> Result<Prepared> {
        match self {
            BuiltinTarget::GaussianDemo => {
                let t = gaussian_demo()?;
                let mut p = Prepared::from_strongly_concave(&t)?;
                p.log_normalizer = Some(0.5 * std::f64::consts::PI.ln());
                Ok(p)
            }
            BuiltinTarget::KngDemo => {
                let t = kng_demo()?;
                Ok(Prepared {
                    envelope: knorm_envelope(&t)?,
                    target: t.target(),
                    log_normalizer: None,
                    holder: None,
                })
            }
            BuiltinTarget::Example4Lipschitz => {
                let holder = example4_target()?;
                let h = holder.clone();
                let target = UnnormalizedTarget::new(1, move |x| h.log_density(x)).with_support(
                    crate::samplers::Support::Box {
                        lower: vec![0.0],
                        upper: vec![1.0],
                    },
                );
                // -1.7 <= g <= 0.2 on [0, 1]
                let unif: Arc<UniformBox> = Arc::new(UniformBox::unit(1)?);
                let envelope = Envelope::new(unif.clone(), 0.2).with_squeeze_ratio(unif, -1.9);
                Ok(Prepared {
                    target,
                    envelope,
                    log_normalizer: None,
                    holder: Some(holder),
                })
            }
            BuiltinTarget::RidgeErm => Prepared::from_erm(&ridge_demo_spec(false)),
        }
    }
}

impl fmt::Display for BuiltinTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|t| t.name()).collect();
                Error::Config(format!("unknown target {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// A target with everything the samplers need.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub target: UnnormalizedTarget,
    pub envelope: Envelope,
    /// `log int exp(g)` when known in closed form.
    pub log_normalizer: Option<f64>,
    pub holder: Option<LogHolderTarget>,
}

impl Prepared {
    pub fn from_strongly_concave(t: &StronglyConcaveTarget) -> Result<Self> {
        Ok(Self {
            envelope: gaussian_envelope(t)?,
            target: t.target(),
            log_normalizer: None,
            holder: None,
        })
    }

    pub fn from_erm(spec: &ErmSpec) -> Result<Self> {
        Self::from_strongly_concave(&build_erm_target(spec)?)
    }

    /// `c_L / c_U`, also a lower bound on the plain acceptance probability.
    pub fn squeeze_ratio(&self) -> Result<f64> {
        self.envelope
            .squeeze_ratio()
            .ok_or_else(|| Error::Unsupported("target has no squeeze".into()))
    }
}

pub fn gaussian_demo() -> Result<StronglyConcaveTarget> {
    StronglyConcaveTarget::new(1.0, 4.0, vec![0.0], |x| -x[0] * x[0])
}

pub fn kng_demo() -> Result<KngTarget> {
    KngTarget::new(1.0, 3.0, vec![0.0, 0.0], |x| vec![x[0], 3.0 * x[1]])
}

pub fn example4_log_density(x: f64) -> f64 {
    -3.0 * (x - 0.5).abs() + 0.2 * (20.0 * x).sin()
}

pub fn example4_target() -> Result<LogHolderTarget> {
    LogHolderTarget::unit(1, 1.0, 7.0, |x| example4_log_density(x[0]))
}

/// Twenty records `(a_i, b_i)` in `[-1, 1]^2`; `adjacent` replaces the last one.
pub fn ridge_demo_spec(adjacent: bool) -> ErmSpec {
    let mut records: Vec<Vec<f64>> = (0..20)
        .map(|i| {
            let a = ((i as f64) * 0.37).sin();
            let b = (0.8 * a + 0.15 * ((i as f64) * 1.3).cos()).clamp(-1.0, 1.0);
            vec![a, b]
        })
        .collect();
    if adjacent {
        records[19] = vec![-0.9, 0.95];
    }
    ErmSpec::ridge(1, records, 1.0, 1.0, 1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_targets_prepare() {
        for t in BuiltinTarget::ALL {
            let p = t.prepare().unwrap();
            p.envelope.validate(&p.target, 2000).unwrap();
            assert_eq!(t.name().parse::<BuiltinTarget>().unwrap(), t);
        }
        assert!("nope".parse::<BuiltinTarget>().is_err());
    }

    #[test]
    fn demo_ratios() {
        assert_eq!(BuiltinTarget::GaussianDemo.prepare().unwrap().squeeze_ratio().unwrap(), 0.5);
        let k = BuiltinTarget::KngDemo.prepare().unwrap().squeeze_ratio().unwrap();
        assert!((k - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn adjacent_ridge_ratios_identical() {
        let a = Prepared::from_erm(&ridge_demo_spec(false)).unwrap();
        let b = Prepared::from_erm(&ridge_demo_spec(true)).unwrap();
        assert_eq!(
            a.squeeze_ratio().unwrap().to_bits(),
            b.squeeze_ratio().unwrap().to_bits()
        );
        assert_ne!(a.envelope.log_cu(), b.envelope.log_cu());
    }
}
