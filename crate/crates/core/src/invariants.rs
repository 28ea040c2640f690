//! Milnor numbers, spectral genera, geometric genera and spectra for the
//! supported singularity classes.
//!
//! Wherever two independent routes exist (a closed form and a lattice sum,
//! or a lattice sum and a spectral polynomial) both are computed and any
//! disagreement is an [`Error::MethodMismatch`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, Gauge, LatticeSum};
use crate::newton::NewtonDiagram;
use crate::par::Strategy;
use crate::parser::validate_weights;
use crate::rational::{common_denominator, factorial, Rational};
use crate::spectrum::{fractional_poly_divide, lcm_u64, FractionalPoly, SpectralMultiset};

/// Which computation produced a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    QuasiHomLattice,
    QuasiHomSpectralPoly,
    HomogeneousClosed,
    MordellClosed,
    NewtonLattice,
    KouchnirenkoOnly,
    PuiseuxClosed,
    BruteForceOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

/// The invariants of one germ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantBundle {
    /// Dimension `n` of the hypersurface (the germ has `n + 1` variables).
    pub n: usize,
    pub mu: Rational,
    pub spectral_genus: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectralMultiset>,
    pub method: Method,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl InvariantBundle {
    pub fn new(n: usize, mu: Rational, spectral_genus: Rational, method: Method) -> Self {
        InvariantBundle {
            n,
            mu,
            spectral_genus,
            geometric_genus: None,
            spectrum: None,
            method,
            warnings: Vec::new(),
        }
    }

    /// Reads `μ`, `p̃_g` and `p_g` off a full spectrum.
    pub fn from_spectrum(spectrum: SpectralMultiset, method: Method) -> Self {
        InvariantBundle {
            n: spectrum.vars().saturating_sub(1),
            mu: Rational::from(spectrum.total() as i64),
            spectral_genus: spectrum.spectral_genus(),
            geometric_genus: Some(spectrum.geometric_genus()),
            spectrum: Some(spectrum),
            method,
            warnings: Vec::new(),
        }
    }
}

fn agree(what: &str, left: &Rational, right: &Rational) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::MethodMismatch {
            what: what.to_string(),
            left: left.to_string(),
            right: right.to_string(),
        })
    }
}

// ---------------------------------------------------------------------------
// Quasi-homogeneous germs

/// `μ = Π (1/w_i - 1)`. The result need not be an integer for weights that
/// admit no isolated singularity; callers decide how to flag that.
pub fn quasihom_mu(weights: &[Rational]) -> Result<Rational> {
    validate_weights(weights)?;
    Ok(weights
        .iter()
        .map(|w| w.recip().unwrap() - Rational::one())
        .product())
}

/// The weight gauge `Σ k_i w_i` written over the common denominator.
fn weight_gauge(weights: &[Rational]) -> Gauge {
    let l = common_denominator(weights);
    let to_i64 = |x: num_bigint::BigInt| -> i64 {
        num_traits::ToPrimitive::to_i64(&x).expect("weight denominators fit in i64")
    };
    let coeffs = weights
        .iter()
        .map(|w| to_i64(w.numer() * (&l / w.denom())))
        .collect();
    Gauge::new(vec![(coeffs, to_i64(l))])
}

/// `Σ (1 - Σ k_i w_i)` over `k_i >= 1` with `Σ k_i w_i < 1` (or `<= 1`).
pub fn quasihom_lattice_sum(
    weights: &[Rational],
    strategy: Strategy,
    boundary: Boundary,
) -> Result<LatticeSum> {
    validate_weights(weights)?;
    Ok(weight_gauge(weights).interior_sum(strategy, boundary))
}

/// Spectral genus of a quasi-homogeneous germ by lattice enumeration.
pub fn quasihom_spectral_genus(weights: &[Rational]) -> Result<Rational> {
    Ok(quasihom_lattice_sum(weights, Strategy::default(), Boundary::Exclude)?.sum)
}

/// Full spectrum from the product `Π (T^{w_i} - T) / (1 - T^{w_i})`.
pub fn quasihom_spectrum(weights: &[Rational]) -> Result<SpectralMultiset> {
    validate_weights(weights)?;
    let t = FractionalPoly::monomial(Rational::one(), 1);
    let one = FractionalPoly::one();
    let mut num = FractionalPoly::one();
    let mut den = FractionalPoly::one();
    for w in weights {
        let tw = FractionalPoly::monomial(w.clone(), 1);
        num = num.mul(&tw.sub(&t));
        den = den.mul(&one.sub(&tw));
    }
    fractional_poly_divide(&num, &den)?.into_spectrum(weights.len())
}

/// Spectrum-based bundle, cross-checked against the lattice sum and the
/// product formula for `μ`. Weights whose product formula gives a
/// non-integer `μ` fall back to the lattice sum with a warning.
pub fn quasihom_invariants(weights: &[Rational]) -> Result<InvariantBundle> {
    let mu = quasihom_mu(weights)?;
    let sg = quasihom_spectral_genus(weights)?;
    if !mu.is_integer() {
        let mut b = InvariantBundle::new(weights.len() - 1, mu.clone(), sg, Method::QuasiHomLattice);
        b.warnings.push(format!(
            "Milnor number {mu} is not an integer; these weights admit no isolated singularity"
        ));
        return Ok(b);
    }
    let bundle = InvariantBundle::from_spectrum(quasihom_spectrum(weights)?, Method::QuasiHomSpectralPoly);
    agree("Milnor number", &bundle.mu, &mu)?;
    agree("spectral genus", &bundle.spectral_genus, &sg)?;
    Ok(bundle)
}

// ---------------------------------------------------------------------------
// Homogeneous germs

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed forms for a homogeneous germ of degree `d` in `n + 1` variables.
pub fn homogeneous_closed(n: u32, d: u32) -> Result<InvariantBundle> {
    if n < 1 || d < 2 {
        return Err(Error::Validation(format!(
            "homogeneous germs need n >= 1 and d >= 2, got n={n}, d={d}"
        )));
    }
    let dd = d as i64;
    let mu = Rational::from(dd - 1).pow(n + 1);
    let falling: Rational = (1..=n as i64 + 1).map(|j| Rational::from(dd - j)).product();
    let sg = falling / factorial(n + 2);
    let mut b = InvariantBundle::new(n as usize, mu, sg, Method::HomogeneousClosed);
    // #{k_i >= 1 : Σ k_i <= d}
    b.geometric_genus = Some(binomial(d as u64, n as u64 + 1));
    Ok(b)
}

pub fn homogeneous_weights(n: u32, d: u32) -> Vec<Rational> {
    vec![Rational::frac(1, d as i64); n as usize + 1]
}

// ---------------------------------------------------------------------------
// Curves: Mordell sums and the three normal forms

/// Closed form of `Σ (1 - x/a - y/b)` over lattice points `x, y >= 1`
/// strictly inside the triangle.
pub fn mordell_sum(a: u32, b: u32) -> Rational {
    let (a, b) = (a as i64, b as i64);
    let k = a.gcd(&b);
    let (a1, b1) = (a / k, b / k);
    Rational::frac((a - 1) * (b - 1), 6)
        - Rational::frac((a1 + b1) * (k - 1), 12)
        - Rational::frac((a1 - 1) * (b1 - 1) * (a1 + b1 + 1), 12 * a1 * b1)
}

/// The same sum by direct enumeration.
pub fn mordell_lattice(a: u32, b: u32) -> Rational {
    let (a, b) = (a as i64, b as i64);
    let mut acc = 0i64;
    for x in 1..a {
        for y in 1.. {
            let slack = a * b - x * b - y * a;
            if slack <= 0 {
                break;
            }
            acc += slack;
        }
    }
    Rational::frac(acc, a * b)
}

/// The dimension-one quasi-homogeneous normal forms
/// `x^a + y^b`, `x^a + x y^b` and `x^a y + x y^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim1Kind {
    Plain,
    XTimes,
    XyTimes,
}

impl Dim1Kind {
    pub const ALL: [Dim1Kind; 3] = [Dim1Kind::Plain, Dim1Kind::XTimes, Dim1Kind::XyTimes];

    /// Weights `(w_x, w_y)` of the normal form.
    pub fn weights(self, a: u32, b: u32) -> Vec<Rational> {
        let (a, b) = (a as i64, b as i64);
        match self {
            Dim1Kind::Plain => vec![Rational::frac(1, a), Rational::frac(1, b)],
            Dim1Kind::XTimes => vec![Rational::frac(1, a + 1), Rational::frac(a, (a + 1) * b)],
            Dim1Kind::XyTimes => {
                let d = (a + 1) * (b + 1) - 1;
                vec![Rational::frac(b, d), Rational::frac(a, d)]
            }
        }
    }

    pub fn mu(self, a: u32, b: u32) -> Rational {
        let (a, b) = (a as i64, b as i64);
        Rational::from(match self {
            Dim1Kind::Plain => (a - 1) * (b - 1),
            Dim1Kind::XTimes => (a + 1) * (b - 1) + 1,
            Dim1Kind::XyTimes => (a + 1) * (b + 1),
        })
    }

    /// Spectral genus via the translated-triangle closed forms.
    pub fn closed_spectral_genus(self, a: u32, b: u32) -> Rational {
        let m = mordell_sum(a, b);
        let (ai, bi) = (a as i64, b as i64);
        match self {
            Dim1Kind::Plain => m,
            Dim1Kind::XTimes => Rational::frac(ai, ai + 1) * (m + Rational::frac(bi - 1, 2)),
            Dim1Kind::XyTimes => {
                let d = ai * bi + ai + bi;
                Rational::frac(ai * bi, d) * (m + Rational::frac(ai + bi, 2))
            }
        }
    }
}

impl fmt::Display for Dim1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dim1Kind::Plain => "plain",
            Dim1Kind::XTimes => "x",
            Dim1Kind::XyTimes => "xy",
        })
    }
}

impl FromStr for Dim1Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(Dim1Kind::Plain),
            "x" | "x_times" => Ok(Dim1Kind::XTimes),
            "xy" | "xy_times" => Ok(Dim1Kind::XyTimes),
            other => Err(Error::Validation(format!(
                "unknown family {other:?}; expected plain, x or xy"
            ))),
        }
    }
}

/// Invariants of a dimension-one normal form: closed forms cross-checked
/// against the weight lattice sum and the spectral polynomial.
pub fn dim1_family(kind: Dim1Kind, a: u32, b: u32) -> Result<InvariantBundle> {
    if a < 2 || b < 2 {
        return Err(Error::Validation(format!(
            "family parameters need a, b >= 2, got a={a}, b={b}"
        )));
    }
    let weights = kind.weights(a, b);
    let mu = kind.mu(a, b);
    let sg = kind.closed_spectral_genus(a, b);
    agree("Milnor number", &mu, &quasihom_mu(&weights)?)?;
    agree("spectral genus", &sg, &quasihom_spectral_genus(&weights)?)?;
    let spectrum = quasihom_spectrum(&weights)?;
    let mut bundle = InvariantBundle::from_spectrum(spectrum, Method::MordellClosed);
    agree("Milnor number", &mu, &bundle.mu)?;
    agree("spectral genus", &sg, &bundle.spectral_genus)?;
    bundle.mu = mu;
    bundle.spectral_genus = sg;
    Ok(bundle)
}

// ---------------------------------------------------------------------------
// Newton-nondegenerate germs

/// Kouchnirenko's `μ` and the interior lattice sum for `p̃_g`.
pub fn newton_invariants(diagram: &NewtonDiagram, assume_nondegenerate: bool) -> Result<InvariantBundle> {
    newton_invariants_with(diagram, assume_nondegenerate, Strategy::default())
}

pub fn newton_invariants_with(
    diagram: &NewtonDiagram,
    assume_nondegenerate: bool,
    strategy: Strategy,
) -> Result<InvariantBundle> {
    if !assume_nondegenerate {
        return Err(Error::RefusedWithoutNondegeneracyFlag);
    }
    diagram.require_convenient()?;
    let mu = diagram.kouchnirenko_number()?;
    let sg = diagram.interior_sum(strategy, Boundary::Exclude)?.sum;
    Ok(InvariantBundle::new(diagram.dim(), mu, sg, Method::NewtonLattice))
}

// ---------------------------------------------------------------------------
// Irreducible plane curves

/// Puiseux pairs `(k_i, n_i)` of an irreducible plane curve branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuiseuxChain {
    pairs: Vec<(u64, u64)>,
    w: Vec<u64>,
}

impl PuiseuxChain {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Validation("at least one Puiseux pair is required".into()));
        }
        for (i, &(k, n)) in pairs.iter().enumerate() {
            let idx = i + 1;
            if n < 2 {
                return Err(Error::Validation(format!("n_{idx} = {n} must exceed 1")));
            }
            if k.gcd(&n) != 1 {
                return Err(Error::Validation(format!(
                    "k_{idx} = {k} and n_{idx} = {n} must be coprime"
                )));
            }
            if i == 0 && k <= n {
                return Err(Error::Validation(format!("k_1 = {k} must exceed n_1 = {n}")));
            }
            if i > 0 {
                let prev = pairs[i - 1].0;
                if k <= prev * n {
                    return Err(Error::Validation(format!(
                        "k_{idx} = {k} must exceed k_{i} * n_{idx} = {}",
                        prev * n
                    )));
                }
            }
        }
        let mut w = vec![pairs[0].0];
        for i in 1..pairs.len() {
            w.push(pairs[i - 1].1 * pairs[i].1 * w[i - 1] + pairs[i].0);
        }
        Ok(PuiseuxChain { pairs, w })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn w(&self) -> &[u64] {
        &self.w
    }

    fn n(&self, i: usize) -> u64 {
        self.pairs[i].1
    }

    /// `n_i' = n_{i+1} ... n_g` (zero-based `i`).
    pub fn n_prime(&self, i: usize) -> u64 {
        self.pairs[i + 1..].iter().map(|p| p.1).product()
    }

    pub fn mu(&self) -> u64 {
        (0..self.genus())
            .map(|i| (self.n(i) - 1) * (self.w[i] - 1) * self.n_prime(i))
            .sum()
    }

    /// `Σ_i Σ_{0 <= k < n_i'} Σ_{x/n_i + y/w_i < 1} (1 - (k + x/n_i + y/w_i)/n_i')`.
    pub fn spectral_genus(&self) -> Rational {
        (0..self.genus())
            .map(|i| {
                let (n, w, np) = (self.n(i) as i128, self.w[i] as i128, self.n_prime(i) as i128);
                let mut acc = 0i128;
                for k in 0..np {
                    for x in 1..n {
                        for y in 1.. {
                            if x * w + y * n >= n * w {
                                break;
                            }
                            acc += n * w * np - k * n * w - x * w - y * n;
                        }
                    }
                }
                Rational::new(acc, n * w * np).unwrap()
            })
            .sum()
    }

    /// The same sum evaluated term by term in rational arithmetic.
    pub fn spectral_genus_oracle(&self) -> Rational {
        let one = Rational::one();
        let mut acc = Rational::zero();
        for i in 0..self.genus() {
            let (n, w) = (self.n(i) as i64, self.w[i] as i64);
            let np = Rational::from(self.n_prime(i) as i64);
            for x in 1..n {
                for y in 1..w {
                    let s = Rational::frac(x, n) + Rational::frac(y, w);
                    if s >= one {
                        break;
                    }
                    for k in 0..self.n_prime(i) as i64 {
                        acc += &one - &((Rational::from(k) + &s) / &np);
                    }
                }
            }
        }
        acc
    }

    /// `S_i⁺ = (n_i-1)(w_i-1)(n_i+w_i+1)/(n_i w_i)`.
    pub fn s_plus(&self) -> Vec<Rational> {
        (0..self.genus())
            .map(|i| {
                let (n, w) = (self.n(i) as i64, self.w[i] as i64);
                Rational::frac((n - 1) * (w - 1) * (n + w + 1), n * w)
            })
            .collect()
    }

    /// `S_i⁻ = (n_i-1)(w_i-1)(n_i'-1)`.
    pub fn s_minus(&self) -> Vec<Rational> {
        (0..self.genus())
            .map(|i| {
                let (n, w, np) = (self.n(i) as i64, self.w[i] as i64, self.n_prime(i) as i64);
                Rational::from((n - 1) * (w - 1) * (np - 1))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuiseuxInvariants {
    pub bundle: InvariantBundle,
    pub w: Vec<u64>,
    pub s_plus: Vec<Rational>,
    pub s_minus: Vec<Rational>,
    /// `μ/6 - p̃_g`, verified equal to `(1/12) Σ (S_i⁺ - S_i⁻)`.
    pub margin: Rational,
}

pub fn puiseux_invariants(chain: &PuiseuxChain) -> Result<PuiseuxInvariants> {
    let mu = Rational::from(chain.mu() as i64);
    let sg = chain.spectral_genus();
    let s_plus = chain.s_plus();
    let s_minus = chain.s_minus();
    let margin = &mu / Rational::from(6) - &sg;
    let predicted = (s_plus.iter().sum::<Rational>() - s_minus.iter().sum::<Rational>())
        / Rational::from(12);
    agree("margin against the S_i decomposition", &margin, &predicted)?;
    Ok(PuiseuxInvariants {
        bundle: InvariantBundle::new(1, mu, sg, Method::PuiseuxClosed),
        w: chain.w().to_vec(),
        s_plus,
        s_minus,
        margin,
    })
}

// ---------------------------------------------------------------------------
// Suspension

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suspension {
    pub k: u64,
    /// Invariants of `h = f + z^{k+1}`.
    pub bundle: InvariantBundle,
    pub base_spectral_genus: Rational,
}

/// The smallest admissible default: the lcm of all exponent denominators.
pub fn default_suspension_order(spectrum: &SpectralMultiset) -> u64 {
    spectrum
        .entries()
        .iter()
        .map(|(e, _)| num_traits::ToPrimitive::to_u64(e.denom()).expect("denominator fits in u64"))
        .fold(1, lcm_u64)
}

/// Spectrum and genera of `f + z^{k+1}`, checking `p_{g,h} = k · p̃_{g,f}`.
pub fn suspend(spectrum: &SpectralMultiset, k: Option<u64>) -> Result<Suspension> {
    let k = k.unwrap_or_else(|| default_suspension_order(spectrum));
    if k == 0 {
        return Err(Error::Validation("suspension order k must be positive".into()));
    }
    let one = Rational::one();
    let kr = Rational::from(k as i64);
    for (e, _) in spectrum.entries() {
        if *e < one && !((&one - e) * &kr).is_integer() {
            return Err(Error::MonodromyOrder {
                k,
                exponent: e.to_string(),
            });
        }
    }
    let h = spectrum.sum_product(&SpectralMultiset::power_germ(k));
    let bundle = InvariantBundle::from_spectrum(h, Method::QuasiHomSpectralPoly);
    let base = spectrum.spectral_genus();
    let pg = Rational::from(bundle.geometric_genus.unwrap() as i64);
    agree("suspension geometric genus", &pg, &(&kr * &base))?;
    Ok(Suspension {
        k,
        bundle,
        base_spectral_genus: base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::build_diagram;
    use crate::parser::{parse_polynomial, MonomialSupport};

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn w(list: &[(i64, i64)]) -> Vec<Rational> {
        list.iter().map(|&(p, q)| r(p, q)).collect()
    }

    #[test]
    fn quasihom_examples() {
        assert_eq!(quasihom_mu(&w(&[(1, 2), (1, 3)])).unwrap(), r(2, 1));
        assert_eq!(quasihom_mu(&w(&[(1, 2), (1, 2)])).unwrap(), r(1, 1));
        assert_eq!(quasihom_mu(&homogeneous_weights(2, 5)).unwrap(), r(64, 1));
        assert_eq!(quasihom_spectral_genus(&w(&[(1, 2), (1, 3)])).unwrap(), r(1, 6));
        assert_eq!(quasihom_spectral_genus(&w(&[(1, 2), (1, 2)])).unwrap(), r(0, 1));
        assert_eq!(quasihom_spectral_genus(&homogeneous_weights(2, 5)).unwrap(), r(1, 1));
        assert_eq!(
            quasihom_mu(&w(&[(1, 2), (1, 1)])),
            Err(Error::InvalidWeight("1".into()))
        );
    }

    #[test]
    fn quasihom_spectra() {
        let s = quasihom_spectrum(&w(&[(1, 3), (1, 3)])).unwrap();
        assert_eq!(s.entries(), &[(r(2, 3), 1), (r(1, 1), 2), (r(4, 3), 1)]);
        let cusp = quasihom_spectrum(&w(&[(1, 2), (1, 3)])).unwrap();
        assert_eq!(cusp.entries(), &[(r(5, 6), 1), (r(7, 6), 1)]);
    }

    #[test]
    fn non_integral_weights_warn() {
        let b = quasihom_invariants(&w(&[(2, 7), (2, 5)])).unwrap();
        assert_eq!(b.mu, r(15, 4));
        assert!(!b.mu.is_integer());
        assert_eq!(b.method, Method::QuasiHomLattice);
        assert_eq!(b.warnings.len(), 1);
        assert!(b.spectrum.is_none());
    }

    #[test]
    fn homogeneous_examples() {
        let b = homogeneous_closed(1, 4).unwrap();
        assert_eq!((b.mu.clone(), b.spectral_genus.clone()), (r(9, 1), r(1, 1)));
        // Σ (d - Σ k_i) = d p̃_g equals 1 at d = n + 2.
        for n in 1..6 {
            let d = n + 2;
            let sg = homogeneous_closed(n, d).unwrap().spectral_genus;
            assert_eq!(sg * Rational::from(d as i64), r(1, 1));
        }
        let odp = homogeneous_closed(2, 2).unwrap();
        assert_eq!((odp.mu, odp.spectral_genus), (r(1, 1), r(0, 1)));
        let b = homogeneous_closed(3, 5).unwrap();
        assert_eq!((b.mu, b.spectral_genus), (r(256, 1), r(1, 5)));
        assert!(homogeneous_closed(0, 3).is_err());
    }

    #[test]
    fn homogeneous_geometric_genus_matches_spectrum() {
        for n in 1..4 {
            for d in 2..9 {
                let closed = homogeneous_closed(n, d).unwrap();
                let spec = quasihom_invariants(&homogeneous_weights(n, d)).unwrap();
                assert_eq!(closed.geometric_genus, spec.geometric_genus);
            }
        }
    }

    #[test]
    fn mordell_examples() {
        assert_eq!(mordell_sum(2, 3), r(1, 6));
        assert_eq!(mordell_sum(2, 2), r(0, 1));
        assert_eq!(mordell_sum(3, 4), r(2, 3));
        assert_eq!(mordell_lattice(3, 4), r(5, 12) + r(1, 6) + r(1, 12));
    }

    #[test]
    fn family_examples() {
        let cusp = dim1_family(Dim1Kind::Plain, 2, 3).unwrap();
        assert_eq!(cusp.mu, r(2, 1));
        assert_eq!(cusp.spectral_genus, r(1, 6));
        let xy = dim1_family(Dim1Kind::XyTimes, 2, 2).unwrap();
        assert_eq!(xy.mu, r(9, 1));
        assert_eq!(xy.spectral_genus, r(1, 1));
        let x = dim1_family(Dim1Kind::XTimes, 2, 3).unwrap();
        assert_eq!((x.mu, x.spectral_genus), (r(7, 1), r(7, 9)));
        let xy = dim1_family(Dim1Kind::XyTimes, 2, 3).unwrap();
        assert_eq!((xy.mu, xy.spectral_genus), (r(12, 1), r(16, 11)));
        assert!(dim1_family(Dim1Kind::Plain, 1, 3).is_err());
    }

    #[test]
    fn coprime_plain_margin() {
        for (a, b) in [(2i64, 3i64), (3, 5), (4, 7), (5, 9)] {
            let bundle = dim1_family(Dim1Kind::Plain, a as u32, b as u32).unwrap();
            let margin = bundle.mu / Rational::from(6) - bundle.spectral_genus;
            assert_eq!(margin, r((a - 1) * (b - 1) * (a + b + 1), 12 * a * b));
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("plain".parse::<Dim1Kind>().unwrap(), Dim1Kind::Plain);
        assert_eq!("x".parse::<Dim1Kind>().unwrap(), Dim1Kind::XTimes);
        assert_eq!("xy_times".parse::<Dim1Kind>().unwrap(), Dim1Kind::XyTimes);
        assert!("yx".parse::<Dim1Kind>().is_err());
        for k in Dim1Kind::ALL {
            assert_eq!(k.to_string().parse::<Dim1Kind>().unwrap(), k);
        }
    }

    #[test]
    fn newton_examples() {
        let d3 = build_diagram(&MonomialSupport::homogeneous_diagonal(2, 3).unwrap());
        let b = newton_invariants(&d3, true).unwrap();
        assert_eq!((b.mu, b.spectral_genus), (r(4, 1), r(1, 3)));
        let a22 = build_diagram(&parse_polynomial("(x^2+y^3)*(y^2+x^3)", None).unwrap());
        let b = newton_invariants(&a22, true).unwrap();
        assert_eq!((b.mu, b.spectral_genus), (r(11, 1), r(13, 10)));
        let odp = build_diagram(&parse_polynomial("x^2+y^2+z^2", None).unwrap());
        let b = newton_invariants(&odp, true).unwrap();
        assert_eq!((b.mu, b.spectral_genus), (r(1, 1), r(0, 1)));
        assert_eq!(
            newton_invariants(&odp, false),
            Err(Error::RefusedWithoutNondegeneracyFlag)
        );
        let monomial = build_diagram(&parse_polynomial("x*y", None).unwrap());
        assert_eq!(
            newton_invariants(&monomial, true),
            Err(Error::NotConvenient { axis: 0 })
        );
    }

    #[test]
    fn puiseux_examples() {
        let cusp = puiseux_invariants(&PuiseuxChain::new(vec![(3, 2)]).unwrap()).unwrap();
        assert_eq!(cusp.bundle.mu, r(2, 1));
        assert_eq!(cusp.bundle.spectral_genus, r(1, 6));
        assert_eq!(cusp.s_plus, vec![r(2, 1)]);
        assert_eq!(cusp.s_minus, vec![r(0, 1)]);
        let two = puiseux_invariants(&PuiseuxChain::new(vec![(3, 2), (7, 2)]).unwrap()).unwrap();
        assert_eq!(two.w, vec![3, 19]);
        assert_eq!(two.bundle.mu, r(22, 1));
        assert!(two.margin > &two.s_plus[0] / &r(12, 1));
    }

    #[test]
    fn puiseux_triple_sum_oracle() {
        for pairs in [vec![(3, 2)], vec![(3, 2), (7, 2)], vec![(5, 3), (16, 3)], vec![(3, 2), (7, 2), (15, 2)]] {
            let chain = PuiseuxChain::new(pairs).unwrap();
            assert_eq!(chain.spectral_genus(), chain.spectral_genus_oracle());
        }
    }

    #[test]
    fn puiseux_validation() {
        assert!(PuiseuxChain::new(vec![(3, 2), (5, 2)]).is_err());
        assert!(PuiseuxChain::new(vec![(4, 2)]).is_err());
        assert!(PuiseuxChain::new(vec![(2, 3)]).is_err());
        assert!(PuiseuxChain::new(vec![(3, 1)]).is_err());
        assert!(PuiseuxChain::new(vec![]).is_err());
    }

    #[test]
    fn suspension_examples() {
        let cusp = quasihom_spectrum(&w(&[(1, 2), (1, 3)])).unwrap();
        let s = suspend(&cusp, Some(6)).unwrap();
        assert_eq!(s.bundle.geometric_genus, Some(1));
        assert_eq!(s.bundle.mu, r(12, 1));
        assert_eq!(default_suspension_order(&cusp), 6);
        let odp = quasihom_spectrum(&w(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(suspend(&odp, Some(1)).unwrap().bundle.geometric_genus, Some(0));
        let d3 = quasihom_spectrum(&homogeneous_weights(1, 3)).unwrap();
        assert_eq!(suspend(&d3, Some(3)).unwrap().bundle.geometric_genus, Some(1));
        assert_eq!(
            suspend(&cusp, Some(4)),
            Err(Error::MonodromyOrder {
                k: 4,
                exponent: "5/6".into()
            })
        );
    }

    #[test]
    fn bundle_json() {
        let v = serde_json::to_value(dim1_family(Dim1Kind::Plain, 2, 3).unwrap()).unwrap();
        assert_eq!(v["method"], "mordell_closed");
        assert_eq!(v["spectral_genus"], "1/6");
        assert_eq!(v["spectrum"][0]["exponent"], "5/6");
        assert_eq!(Method::NewtonLattice.to_string(), "newton_lattice");
    }
}
