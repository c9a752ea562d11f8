//! Named wave factorizations available to `solve`.

use std::sync::Arc;

use kasym_core::wavesolve::{ConeSpec, ConstantFactors, SymbolFactorization};
use kasym_core::Complex64;

use crate::config::FactorizationParams;
use crate::error::FieldError;

pub const FACTORIZATIONS: [&str; 2] = ["identity", "constant"];

/// Builds the named factorization over the cone with parameter `a`.
///
/// `constant` takes `plus` and `minus` (both default to 1) and has order and
/// index zero.
pub fn factorization(params: &FactorizationParams, a: f64, field: &str) -> Result<SymbolFactorization, FieldError> {
    let bad = |reason: String| FieldError::new(field, reason);
    match params.name.as_str() {
        "identity" => {
            if params.plus.is_some() || params.minus.is_some() {
                return Err(bad("identity takes no parameters".into()));
            }
            SymbolFactorization::identity(a).map_err(|e| bad(e.to_string()))
        }
        "constant" => {
            let one = Complex64::new(1.0, 0.0);
            let plus = params.plus.unwrap_or(one);
            let minus = params.minus.unwrap_or(one);
            for (name, z) in [("plus", plus), ("minus", minus)] {
                if !(z.is_finite() && z.norm() > 0.0) {
                    return Err(bad(format!("{name} must be finite and nonzero")));
                }
            }
            Ok(SymbolFactorization {
                alpha: 0.0,
                kappa: 0.0,
                cone: ConeSpec::new(a).map_err(|e| bad(e.to_string()))?,
                factors: Arc::new(ConstantFactors { plus, minus }),
            })
        }
        other => Err(bad(format!(
            "unknown factorization {other:?}; expected one of {}",
            FACTORIZATIONS.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str) -> FactorizationParams {
        FactorizationParams {
            name: name.into(),
            plus: None,
            minus: None,
        }
    }

    #[test]
    fn lookup() {
        let id = factorization(&named("identity"), 10.0, "fact").unwrap();
        assert_eq!(id.symbol((0.3, 0.2)), Complex64::new(1.0, 0.0));
        let c = FactorizationParams {
            plus: Some(Complex64::new(2.0, 0.0)),
            ..named("constant")
        };
        let c = factorization(&c, 10.0, "fact").unwrap();
        assert_eq!(c.symbol((0.0, 0.0)), Complex64::new(2.0, 0.0));
        assert!(factorization(&named("nope"), 10.0, "fact").is_err());
        assert!(factorization(&named("identity"), -1.0, "fact").is_err());
    }
}
