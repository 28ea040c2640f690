//! Exact invariants of isolated hypersurface singularities.
//!
//! The crate computes Milnor numbers `μ`, spectral genera `p̃_g`, geometric
//! genera `p_g` and spectra for quasi-homogeneous germs, the plane-curve
//! normal forms, irreducible plane curves given by Puiseux pairs and
//! convenient Newton-nondegenerate germs, and checks the inequality
//! `p̃_g < μ/(n+2)!` together with its strong form. All arithmetic is exact.
//!
//! ```
//! use spectral_genus::{dim1_family, judge, Dim1Kind, Rational};
//!
//! let cusp = dim1_family(Dim1Kind::Plain, 2, 3).unwrap();
//! assert_eq!(cusp.spectral_genus, Rational::frac(1, 6));
//! let report = judge("x^2+y^3", &cusp);
//! assert!(report.strong_ok && report.equality_attained);
//! ```

pub mod conjecture;
pub mod distribution;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod newton;
pub mod par;
pub mod parser;
pub mod rational;
pub mod spectrum;

/// Largest number of variables accepted anywhere.
pub const MAX_VARS: usize = 8;

pub use conjecture::{
    analyze_germ, homogeneous_sweep, judge, judge_total, scale_sweep, SingularityReport,
    SweepRecord,
};
pub use distribution::{
    family_diagnostics, hertling_gap, hertling_strong_criterion, measure_moments, saito_cdf,
    sup_cdf_distance, EmpiricalMeasure, SaitoDensity,
};
pub use error::{Error, Result};
pub use invariants::{
    dim1_family, homogeneous_closed, mordell_sum, newton_invariants, puiseux_invariants,
    quasihom_mu, quasihom_spectral_genus, quasihom_spectrum, suspend, Dim1Kind, InvariantBundle,
    Method, PuiseuxChain,
};
pub use newton::{build_diagram, NewtonDiagram};
pub use par::Strategy;
pub use parser::{
    parse_germ_spec, parse_polynomial, parse_polynomial_file, scale_support, GermSpec,
    MonomialSupport,
};
pub use rational::Rational;
pub use spectrum::{fractional_poly_divide, SpectralMultiset};
