//! JSON run configuration and the named test-function presets.

use std::path::{Path, PathBuf};

use kasym_core::converge::Variant;
use kasym_core::kernel::FormMode;
use kasym_core::pairing::Profile1d;
use kasym_core::quad::{PrescriptionMode, QuadratureSpec};
use kasym_core::testfn::{make_bump_with_order, make_gaussian_hermite, Monomial, TestFunction, DEFAULT_BUMP_MAX_ORDER};
use kasym_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, FieldError};
use crate::report::Format;

pub const FUNCTION_PRESETS: [&str; 5] = ["gaussian", "xi1-gaussian", "shifted-gaussian", "xi2-gaussian", "bump"];
pub const PROFILE_PRESETS: [&str; 2] = ["gaussian", "shifted-gaussian"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SubcommandName {
    Tkn,
    Pair,
    Expand,
    Sweep,
    Lemma1,
    Discrepancy,
    Solve,
}

/// Every parameter a run can take. Command-line flags override these.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Option<SubcommandName>,
    pub test_function: Option<TestFunctionSpec>,
    pub quadrature: Option<QuadratureSpec>,
    /// A prescription for `pair` and `sweep`, a form mode for the others.
    pub mode: Option<String>,
    pub a: Option<f64>,
    pub a_values: Option<Vec<f64>>,
    pub orders: Option<Vec<usize>>,
    pub modes: Option<Vec<PrescriptionMode>>,
    pub order: Option<usize>,
    pub variant: Option<Variant>,
    pub coeff_mode: Option<FormMode>,
    pub k: Option<u32>,
    #[serde(rename = "N")]
    pub n_cut: Option<f64>,
    pub xi1: Option<f64>,
    pub fn1d: Option<ProfileSpec>,
    pub grid: Option<usize>,
    pub halfwidth: Option<f64>,
    pub nmax: Option<u32>,
    pub grid_file: Option<PathBuf>,
    pub fact: Option<FactorizationSpec>,
    pub rhs: Option<TestFunctionSpec>,
    pub points_file: Option<PathBuf>,
    pub s: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
    })
}

/// A preset name or an explicit description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TestFunctionSpec {
    Preset(String),
    Custom(CustomFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GaussianHermite,
    Bump,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomFunction {
    pub family: Family,
    #[serde(default)]
    pub center: Option<(f64, f64)>,
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub poly: Option<Vec<Monomial>>,
    #[serde(default)]
    pub support_radius: Option<f64>,
    #[serde(default)]
    pub max_order: Option<usize>,
}

impl TestFunctionSpec {
    pub fn build(&self, field: &str) -> Result<TestFunction, FieldError> {
        match self {
            TestFunctionSpec::Preset(name) => preset(name).ok_or_else(|| {
                FieldError::new(field, format!("unknown preset {name:?}; expected one of {}", FUNCTION_PRESETS.join(", ")))
            }),
            TestFunctionSpec::Custom(c) => {
                let built = match c.family {
                    Family::GaussianHermite => make_gaussian_hermite(
                        c.center.unwrap_or((0.0, 0.0)),
                        c.scale.unwrap_or(1.0),
                        c.poly.as_deref().unwrap_or(&[Monomial::new(0, 0, 1.0)]),
                    ),
                    Family::Bump => make_bump_with_order(
                        c.support_radius.unwrap_or(1.0),
                        c.max_order.unwrap_or(DEFAULT_BUMP_MAX_ORDER),
                    ),
                };
                built.map_err(|e| FieldError::new(field, e.to_string()))
            }
        }
    }
}

pub fn preset(name: &str) -> Option<TestFunction> {
    let gh = |center, poly: &[Monomial]| make_gaussian_hermite(center, 1.0, poly).expect("valid preset");
    let one = [Monomial::new(0, 0, 1.0)];
    Some(match name {
        "gaussian" => gh((0.0, 0.0), &one),
        "xi1-gaussian" => gh((0.0, 0.0), &[Monomial::new(1, 0, 1.0)]),
        "shifted-gaussian" => gh((1.0, 0.0), &one),
        "xi2-gaussian" => gh((0.0, 0.0), &[Monomial::new(0, 1, 1.0)]),
        "bump" => make_bump_with_order(1.0, DEFAULT_BUMP_MAX_ORDER).expect("valid preset"),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Preset(String),
    Custom(Profile1d),
}

impl ProfileSpec {
    pub fn build(&self, field: &str) -> Result<Profile1d, FieldError> {
        match self {
            ProfileSpec::Preset(name) => match name.as_str() {
                "gaussian" => Ok(Profile1d::gaussian(0.0, 1.0)),
                "shifted-gaussian" => Ok(Profile1d::gaussian(1.0, 1.0)),
                _ => Err(FieldError::new(
                    field,
                    format!("unknown profile {name:?}; expected one of {}", PROFILE_PRESETS.join(", ")),
                )),
            },
            ProfileSpec::Custom(p) => Ok(p.clone()),
        }
    }
}

/// A registered factorization name, optionally with parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorizationSpec {
    Name(String),
    Detailed(FactorizationParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationParams {
    pub name: String,
    #[serde(default, with = "opt_complex")]
    pub plus: Option<Complex64>,
    #[serde(default, with = "opt_complex")]
    pub minus: Option<Complex64>,
}

impl FactorizationSpec {
    pub fn params(&self) -> FactorizationParams {
        match self {
            FactorizationSpec::Name(name) => FactorizationParams {
                name: name.clone(),
                plus: None,
                minus: None,
            },
            FactorizationSpec::Detailed(p) => p.clone(),
        }
    }
}

mod opt_complex {
    use kasym_core::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| ReIm { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<ReIm>::deserialize(d)?.map(|z| Complex64::new(z.re, z.im)))
    }
}
