//! Verdicts on the inequalities `p̃_g < μ/(n+2)!` (weak) and
//! `p̃_g <= (μ-1)/(n+2)!` (strong), and parameter sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{
    dim1_family, homogeneous_closed, newton_invariants_with,
    puiseux_invariants, quasihom_invariants, quasihom_spectral_genus, InvariantBundle, Method,
};
use crate::lattice::Boundary;
use crate::newton::build_diagram;
use crate::par::{self, Strategy};
use crate::parser::{GermSpec, MonomialSupport};
use crate::rational::{factorial, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub schema: u32,
    pub germ: String,
    pub n: usize,
    pub mu: Rational,
    pub spectral_genus: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometric_genus: Option<u64>,
    /// `μ/(n+2)! - p̃_g`.
    pub margin: Rational,
    pub weak_ok: bool,
    pub strong_ok: bool,
    pub equality_attained: bool,
    /// `2 (-1)^n margin`, the exponent of `|t|` in the torsion of the
    /// structure sheaf of a degenerating family, up to the omitted
    /// logarithmic terms.
    pub torsion_exponent: Rational,
    pub methods: Vec<String>,
}

fn verdict(n: usize, mu: &Rational, sg: &Rational) -> (Rational, bool, bool, bool, Rational) {
    let fact = factorial(n as u32 + 2);
    let margin = mu / &fact - sg;
    let strong_bound = (mu - &Rational::one()) / &fact;
    let sign = if n.is_multiple_of(2) {
        Rational::from(2)
    } else {
        Rational::from(-2)
    };
    (
        margin.clone(),
        margin.is_positive(),
        *sg <= strong_bound,
        *sg == strong_bound,
        sign * margin,
    )
}

/// Verdicts for a single germ.
pub fn judge(germ: &str, bundle: &InvariantBundle) -> SingularityReport {
    let (margin, weak_ok, strong_ok, equality_attained, torsion_exponent) =
        verdict(bundle.n, &bundle.mu, &bundle.spectral_genus);
    SingularityReport {
        schema: SCHEMA_VERSION,
        germ: germ.to_string(),
        n: bundle.n,
        mu: bundle.mu.clone(),
        spectral_genus: bundle.spectral_genus.clone(),
        geometric_genus: bundle.geometric_genus,
        margin,
        weak_ok,
        strong_ok,
        equality_attained,
        torsion_exponent,
        methods: vec![bundle.method.to_string()],
    }
}

/// Verdicts for a hypersurface with several isolated singular points: `μ`
/// and `p̃_g` are the sums over the points.
pub fn judge_total(germ: &str, bundles: &[InvariantBundle]) -> Result<SingularityReport> {
    let Some(first) = bundles.first() else {
        return Err(Error::Validation("no singular points given".into()));
    };
    let n = first.n;
    if let Some(b) = bundles.iter().find(|b| b.n != n) {
        return Err(Error::Dimension {
            expected: n,
            actual: b.n,
        });
    }
    let mu: Rational = bundles.iter().map(|b| &b.mu).sum();
    let sg: Rational = bundles.iter().map(|b| &b.spectral_genus).sum();
    let (margin, weak_ok, strong_ok, equality_attained, torsion_exponent) = verdict(n, &mu, &sg);
    let geometric_genus = bundles
        .iter()
        .map(|b| b.geometric_genus)
        .sum::<Option<u64>>();
    let mut methods: Vec<String> = bundles.iter().map(|b| b.method.to_string()).collect();
    methods.dedup();
    Ok(SingularityReport {
        schema: SCHEMA_VERSION,
        germ: germ.to_string(),
        n,
        mu,
        spectral_genus: sg,
        geometric_genus,
        margin,
        weak_ok,
        strong_ok,
        equality_attained,
        torsion_exponent,
        methods,
    })
}

/// Invariants of any supported germ description. With `oracle`, every
/// closed form is recomputed by lattice enumeration and compared.
pub fn analyze_germ(spec: &GermSpec, assume_nondegenerate: bool, oracle: bool) -> Result<InvariantBundle> {
    let bundle = match spec {
        GermSpec::Polynomial(support) => newton_invariants_with(
            &build_diagram(support),
            assume_nondegenerate,
            Strategy::default(),
        )?,
        GermSpec::QuasiHomogeneous(weights) => quasihom_invariants(weights)?,
        GermSpec::Homogeneous { n, d } => homogeneous_closed(*n, *d)?,
        GermSpec::PuiseuxCurve(chain) => puiseux_invariants(chain)?.bundle,
        GermSpec::Dim1Family { kind, a, b } => dim1_family(*kind, *a, *b)?,
    };
    if oracle {
        let check = oracle_bundle(spec)?;
        for (what, left, right) in [
            ("Milnor number", &bundle.mu, &check.mu),
            ("spectral genus", &bundle.spectral_genus, &check.spectral_genus),
        ] {
            if left != right {
                return Err(Error::MethodMismatch {
                    what: format!("{what} (oracle)"),
                    left: left.to_string(),
                    right: right.to_string(),
                });
            }
        }
    }
    Ok(bundle)
}

/// Independent recomputation by enumeration: Newton-diagram lattice sums
/// for germs with a diagram, weight lattice sums otherwise.
fn oracle_bundle(spec: &GermSpec) -> Result<InvariantBundle> {
    let (n, mu, sg) = match spec {
        GermSpec::Polynomial(support) => {
            let diagram = build_diagram(support);
            let mu = diagram.kouchnirenko_number()?;
            let sum = diagram.interior_sum(Strategy::Sequential, Boundary::Include)?;
            (support.dim(), mu, sum.sum)
        }
        GermSpec::Homogeneous { n, d } => {
            let support = MonomialSupport::homogeneous_diagonal(*n as usize + 1, *d)?;
            let diagram = build_diagram(&support);
            let sum = diagram.interior_sum(Strategy::Sequential, Boundary::Include)?;
            (*n as usize, diagram.kouchnirenko_number()?, sum.sum)
        }
        GermSpec::QuasiHomogeneous(weights) => {
            let mu = crate::invariants::quasihom_mu(weights)?;
            (weights.len() - 1, mu, quasihom_spectral_genus(weights)?)
        }
        GermSpec::Dim1Family { kind, a, b } => {
            let weights = kind.weights(*a, *b);
            let mu = crate::invariants::quasihom_mu(&weights)?;
            (1, mu, quasihom_spectral_genus(&weights)?)
        }
        GermSpec::PuiseuxCurve(chain) => {
            let mu = Rational::from(chain.mu() as i64);
            (1, mu, chain.spectral_genus_oracle())
        }
    };
    Ok(InvariantBundle::new(n, mu, sg, Method::BruteForceOracle))
}

/// One exact sweep record. The field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub param: u64,
    pub n: usize,
    pub mu: Rational,
    pub spectral_genus: Rational,
    pub margin: Rational,
    /// `p̃_g / μ`.
    pub ratio: Rational,
    pub weak: bool,
    pub strong: bool,
    pub equality: bool,
    pub torsion_exponent: Rational,
}

impl SweepRecord {
    pub fn from_bundle(param: u64, bundle: &InvariantBundle) -> Self {
        let (margin, weak, strong, equality, torsion_exponent) =
            verdict(bundle.n, &bundle.mu, &bundle.spectral_genus);
        SweepRecord {
            param,
            n: bundle.n,
            mu: bundle.mu.clone(),
            spectral_genus: bundle.spectral_genus.clone(),
            margin,
            ratio: &bundle.spectral_genus / &bundle.mu,
            weak,
            strong,
            equality,
            torsion_exponent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleRecord {
    #[serde(flatten)]
    pub record: SweepRecord,
    /// `margin / k^n`.
    pub scaled_margin: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleSweep {
    pub records: Vec<ScaleRecord>,
    /// `n vol_n / (2 (n+1) (n+2))`, the limit of `margin / k^n`.
    pub predicted_limit: Rational,
    pub first_strong_k: Option<u64>,
    /// Whether the strong form holds at every tested `k` from
    /// `first_strong_k` on.
    pub strong_thereafter: bool,
    pub all_margins_positive: bool,
}

/// Invariants of `f(x_0^k, ..., x_n^k)` for each `k`.
pub fn scale_sweep(support: &MonomialSupport, ks: &[u64], strategy: Strategy) -> Result<ScaleSweep> {
    if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) || ks[0] == 0 {
        return Err(Error::Validation("k values must be positive and increasing".into()));
    }
    let base = build_diagram(support);
    let vols = base.volumes()?;
    let n = support.dim();
    let predicted_limit = Rational::from(n as i64) * &vols[n - 1]
        / Rational::from(2 * (n as i64 + 1) * (n as i64 + 2));
    let results = par::map(strategy, ks.to_vec(), |k| -> Result<ScaleRecord> {
        let k32 = u32::try_from(k).map_err(|_| Error::Validation(format!("k = {k} is too large")))?;
        let diagram = build_diagram(&support.scale(k32)?);
        let bundle = newton_invariants_with(&diagram, true, Strategy::Sequential)?;
        let record = SweepRecord::from_bundle(k, &bundle);
        let scaled_margin = &record.margin / Rational::from(k as i64).pow(n as u32);
        Ok(ScaleRecord {
            record,
            scaled_margin,
        })
    });
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let first = records.iter().position(|r| r.record.strong);
    Ok(ScaleSweep {
        first_strong_k: first.map(|i| records[i].record.param),
        strong_thereafter: first.is_some_and(|i| records[i..].iter().all(|r| r.record.strong)),
        all_margins_positive: records.iter().all(|r| r.record.margin.is_positive()),
        predicted_limit,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneousSweep {
    pub records: Vec<SweepRecord>,
    pub ratio_nondecreasing: bool,
    pub ratio_below_bound: bool,
}

/// Closed-form records for homogeneous germs of each degree `d`.
pub fn homogeneous_sweep(n: u32, ds: &[u32]) -> Result<HomogeneousSweep> {
    if ds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation("degrees must be increasing".into()));
    }
    let records = ds
        .iter()
        .map(|&d| Ok(SweepRecord::from_bundle(d as u64, &homogeneous_closed(n, d)?)))
        .collect::<Result<Vec<_>>>()?;
    let bound = factorial(n + 2).recip().unwrap();
    Ok(HomogeneousSweep {
        ratio_nondecreasing: records.windows(2).all(|w| w[0].ratio <= w[1].ratio),
        ratio_below_bound: records.iter().all(|r| r.ratio < bound),
        records,
    })
}
