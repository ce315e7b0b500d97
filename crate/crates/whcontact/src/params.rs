//! Conversion of raw physical constants into the model parameters of the
//! contact problem.
//!
//! The patch behaves as a rod in uniaxial stress with stretch stiffness
//! `E0 = E1*h1/(1 - nu1^2)`; the plate enters through the plane-strain
//! compliance `b = 2*(1 - nu2^2)/E2`; the glue line contributes the shear
//! compliance `k0 = h0/mu0`. The governing equation depends on the raw
//! constants only through
//!
//! ```text
//! lambda = b * E0            plate/patch interaction length
//! k      = k0 * E0           adhesive compliance parameter
//! ```
//!
//! `lambda` is a length; the combination `k/lambda^2` is the dimensionless
//! compliance the solver actually depends on once `x` is measured in units
//! of `lambda`.
//!
//! `k = 0` is the rigid-contact limit; the stress then develops a power
//! singularity at the patch end, while any `k > 0` keeps it bounded.

use crate::{Error, Result};

/// Raw physical constants of plate, patch, glue, and end load (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Patch Young modulus (Pa).
    pub e1: f64,
    /// Patch Poisson ratio.
    pub nu1: f64,
    /// Patch thickness (m).
    pub h1: f64,
    /// Plate Young modulus (Pa).
    pub e2: f64,
    /// Plate Poisson ratio.
    pub nu2: f64,
    /// Glue layer thickness (m). Zero means rigid contact.
    pub h0: f64,
    /// Glue shear modulus (Pa).
    pub mu0: f64,
    /// End load per unit width (N/m).
    pub t_load: f64,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.e1 > 0.0) || !self.e1.is_finite() {
            return Err(Error::InvalidMaterial("e1 must be positive and finite"));
        }
        if !(self.e2 > 0.0) || !self.e2.is_finite() {
            return Err(Error::InvalidMaterial("e2 must be positive and finite"));
        }
        if !(self.h1 > 0.0) || !self.h1.is_finite() {
            return Err(Error::InvalidMaterial("h1 must be positive and finite"));
        }
        if !(self.mu0 > 0.0) || !self.mu0.is_finite() {
            return Err(Error::InvalidMaterial("mu0 must be positive and finite"));
        }
        if !(self.h0 >= 0.0) || !self.h0.is_finite() {
            return Err(Error::InvalidMaterial("h0 must be nonnegative and finite"));
        }
        // nu1 = 0.5 is admissible: 1 - nu1^2 = 0.75 stays away from zero.
        if !(self.nu1.abs() < 1.0) {
            return Err(Error::InvalidMaterial("nu1 must satisfy |nu1| < 1"));
        }
        if !(self.nu2 >= 0.0 && self.nu2 < 0.5) {
            return Err(Error::InvalidMaterial("nu2 must satisfy 0 <= nu2 < 0.5"));
        }
        if !self.t_load.is_finite() {
            return Err(Error::InvalidMaterial("t_load must be finite"));
        }
        Ok(())
    }

    /// Patch stretch stiffness `E0 = E1*h1/(1 - nu1^2)` (Pa*m).
    pub fn stiffness_e0(&self) -> f64 {
        self.e1 * self.h1 / (1.0 - self.nu1 * self.nu1)
    }

    /// Plate surface compliance `b = 2*(1 - nu2^2)/E2` (1/Pa).
    pub fn plate_compliance_b(&self) -> f64 {
        2.0 * (1.0 - self.nu2 * self.nu2) / self.e2
    }

    /// Glue shear compliance `k0 = h0/mu0` (m/Pa).
    pub fn glue_compliance_k0(&self) -> f64 {
        self.h0 / self.mu0
    }
}

/// Which representation of the transform-domain solution to use.
///
/// `CaseA` and `CaseB` are two factorizations of the same coefficient and
/// must produce the same stress for `k > 0`; `RigidLimit` is the analytic
/// `k = 0` path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactCase {
    CaseA,
    CaseB,
    RigidLimit,
}

/// Derived model constants (`lambda` in m, load in N/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda: f64,
    pub k: f64,
    /// `k / lambda`, the length that pairs with the transform variable in
    /// the case-A rational factors.
    pub ktilde: f64,
    pub t_load: f64,
    pub case: ContactCase,
}

impl ModelParams {
    /// Dimensionless adhesive compliance `k / lambda^2` of the rescaled
    /// problem (`x` measured in units of `lambda`).
    pub fn kappa(&self) -> f64 {
        self.k / (self.lambda * self.lambda)
    }
}

impl ModelParams {
    /// Build model parameters directly from `lambda`, `k`, and the load,
    /// bypassing the material conversion. Used for normalized studies.
    pub fn from_raw(lambda: f64, k: f64, t_load: f64, case: ContactCase) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidMaterial("lambda must be positive and finite"));
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidMaterial("k must be nonnegative and finite"));
        }
        if !t_load.is_finite() {
            return Err(Error::InvalidMaterial("t_load must be finite"));
        }
        let case = reconcile_case(case, k)?;
        Ok(ModelParams {
            lambda,
            k,
            ktilde: k / lambda,
            t_load,
            case,
        })
    }
}

fn reconcile_case(requested: ContactCase, k: f64) -> Result<ContactCase> {
    if k == 0.0 {
        match requested {
            ContactCase::CaseB => Err(Error::CaseMismatch("case B requires k > 0")),
            // The k -> 0 limit of case A is the rigid path.
            _ => Ok(ContactCase::RigidLimit),
        }
    } else {
        match requested {
            ContactCase::RigidLimit => Err(Error::CaseMismatch(
                "rigid limit requires k = 0 (set h0 = 0)",
            )),
            other => Ok(other),
        }
    }
}

/// Derive `lambda = b*E0`, `k = k0*E0`, and `ktilde = k/lambda` from raw
/// material constants, validating every invariant.
pub fn derive_model_params(spec: &MaterialSpec, case: ContactCase) -> Result<ModelParams> {
    spec.validate()?;
    let e0 = spec.stiffness_e0();
    let lambda = spec.plate_compliance_b() * e0;
    let k = spec.glue_compliance_k0() * e0;
    let case = reconcile_case(case, k)?;
    Ok(ModelParams {
        lambda,
        k,
        ktilde: k / lambda,
        t_load: spec.t_load,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Physical constants used throughout: 120 GPa / nu 0.5 / 5 cm patch on a
    /// 95 GPa / nu 0.3 plate with a 0.5 mm, 0.117 GPa glue line.
    pub(crate) fn reference_spec() -> MaterialSpec {
        MaterialSpec {
            e1: 120e9,
            nu1: 0.5,
            h1: 5e-2,
            e2: 95e9,
            nu2: 0.3,
            h0: 5e-4,
            mu0: 0.117e9,
            t_load: 1.0,
        }
    }

    #[test]
    fn reference_material_constants() {
        let spec = reference_spec();
        let e0 = spec.stiffness_e0();
        let b = spec.plate_compliance_b();
        // Hand evaluation: E0 = 120e9*0.05/0.75, b = 2*0.91/95e9.
        assert!((e0 - 8.0e9).abs() < 1e-3 * 8.0e9);
        assert!((b - 1.915_789_473_684e-11).abs() < 1e-12 * b.abs());

        let p = derive_model_params(&spec, ContactCase::CaseB).unwrap();
        assert!((p.lambda - 0.153_263_157_894_7).abs() < 1e-9);
        // k = (h0/mu0)*E0 = 3.4188e-2 m; forward check against 3.4188e-2.
        assert!((p.k / 3.4188e-2 - 1.0).abs() < 1e-3);
        assert!((p.k - 3.42e-2).abs() < 5e-4 * 3.42e-2);
        assert_eq!(p.ktilde, p.k / p.lambda);
        assert_eq!(p.case, ContactCase::CaseB);
    }

    #[test]
    fn zero_glue_thickness_is_rigid() {
        let spec = MaterialSpec {
            h0: 0.0,
            ..reference_spec()
        };
        let p = derive_model_params(&spec, ContactCase::CaseA).unwrap();
        assert_eq!(p.k, 0.0);
        assert_eq!(p.case, ContactCase::RigidLimit);
        assert!(matches!(
            derive_model_params(&spec, ContactCase::CaseB),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn rigid_request_with_positive_k_is_rejected() {
        assert!(matches!(
            derive_model_params(&reference_spec(), ContactCase::RigidLimit),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn modulus_scaling() {
        // lambda is invariant under E1, E2 -> c*E1, c*E2; k scales with E1.
        let spec = reference_spec();
        let c = 3.7;
        let scaled = MaterialSpec {
            e1: c * spec.e1,
            e2: c * spec.e2,
            ..spec
        };
        let p0 = derive_model_params(&spec, ContactCase::CaseB).unwrap();
        let p1 = derive_model_params(&scaled, ContactCase::CaseB).unwrap();
        assert!((p1.lambda - p0.lambda).abs() < 1e-14 * p0.lambda);
        assert!((p1.k - c * p0.k).abs() < 1e-14 * c * p0.k);
    }

    #[test]
    fn invariant_violations_are_named() {
        let bad = MaterialSpec {
            nu2: 0.7,
            ..reference_spec()
        };
        match derive_model_params(&bad, ContactCase::CaseB) {
            Err(Error::InvalidMaterial(msg)) => assert!(msg.contains("nu2")),
            other => panic!("expected invalid-material error, got {other:?}"),
        }
        let bad = MaterialSpec {
            e1: -1.0,
            ..reference_spec()
        };
        assert!(matches!(
            derive_model_params(&bad, ContactCase::CaseB),
            Err(Error::InvalidMaterial(_))
        ));
        let bad = MaterialSpec {
            nu1: 1.0,
            ..reference_spec()
        };
        assert!(matches!(
            derive_model_params(&bad, ContactCase::CaseB),
            Err(Error::InvalidMaterial(_))
        ));
    }
}
