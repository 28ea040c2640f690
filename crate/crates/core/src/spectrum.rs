//! Spectral multisets and polynomials in `T^Q`.
//!
//! Spectra are stored in the shifted convention, exponents in `(0, n+1)` for
//! a germ in `n+1` variables. The unshifted value `α = α' - 1` is derived on
//! demand.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Multiset of rational spectral numbers with positive integer multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralMultiset {
    vars: usize,
    entries: Vec<(Rational, u64)>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    exponent: Rational,
    multiplicity: u64,
}

impl SpectralMultiset {
    /// Builds a multiset for a germ in `vars` variables, merging repeated
    /// exponents and dropping zero multiplicities.
    pub fn new<I: IntoIterator<Item = (Rational, u64)>>(vars: usize, entries: I) -> Self {
        let mut map: BTreeMap<Rational, u64> = BTreeMap::new();
        for (e, m) in entries {
            if m > 0 {
                *map.entry(e).or_insert(0) += m;
            }
        }
        SpectralMultiset {
            vars,
            entries: map.into_iter().collect(),
        }
    }

    /// The neutral element of [`SpectralMultiset::sum_product`]: a single
    /// exponent 0 in zero variables.
    pub fn unit() -> Self {
        SpectralMultiset {
            vars: 0,
            entries: vec![(Rational::zero(), 1)],
        }
    }

    /// Spectrum of `x^(k+1)` in one variable: `{j/(k+1) : 1 <= j <= k}`.
    pub fn power_germ(k: u64) -> Self {
        let top = k as i64 + 1;
        SpectralMultiset::new(1, (1..top).map(|j| (Rational::frac(j, top), 1)))
    }

    /// Number of variables of the germ, `n + 1`.
    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Dimension `n` of the hypersurface (`-1` for the unit).
    pub fn dim(&self) -> i64 {
        self.vars as i64 - 1
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    /// Total multiplicity; the Milnor number for a full spectrum.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Exponents with repetition, ascending.
    pub fn points(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.entries
            .iter()
            .flat_map(|(e, m)| std::iter::repeat_n(e, *m as usize))
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.entries.first().map(|(e, _)| e)
    }

    pub fn max_exponent(&self) -> Option<&Rational> {
        self.entries.last().map(|(e, _)| e)
    }

    /// `Σ_{α' < 1} (1 - α')` with multiplicity.
    pub fn spectral_genus(&self) -> Rational {
        let one = Rational::one();
        self.entries
            .iter()
            .take_while(|(e, _)| *e < one)
            .map(|(e, m)| (&one - e) * Rational::from(*m as i64))
            .sum()
    }

    /// `#{α' <= 1}` with multiplicity.
    pub fn geometric_genus(&self) -> u64 {
        let one = Rational::one();
        self.entries
            .iter()
            .take_while(|(e, _)| *e <= one)
            .map(|(_, m)| m)
            .sum()
    }

    /// Invariance under `α' ↦ (n+1) - α'`.
    pub fn is_symmetric(&self) -> bool {
        let center = Rational::from(self.vars as i64);
        self.entries
            .iter()
            .zip(self.entries.iter().rev())
            .all(|((a, ma), (b, mb))| ma == mb && (a + b) == center)
    }

    /// Whether all exponents lie in the open interval `(0, n+1)`.
    pub fn within_bounds(&self) -> bool {
        let top = Rational::from(self.vars as i64);
        self.entries
            .iter()
            .all(|(e, _)| e.is_positive() && *e < top)
    }

    /// Thom–Sebastiani: the spectrum of `f(x) + g(y)` from those of `f`, `g`.
    pub fn sum_product(&self, other: &SpectralMultiset) -> SpectralMultiset {
        let vars = self.vars + other.vars;
        let exps = || self.entries.iter().chain(&other.entries).map(|(e, _)| e);
        let scale = common_denominator(exps());
        let scaled = |es: &[(Rational, u64)]| -> Option<Vec<(i64, u64)>> {
            es.iter()
                .map(|(e, m)| Some(((e.numer() * (&scale / e.denom())).to_i64()?, *m)))
                .collect()
        };
        // Work on integer numerators over the common denominator when they
        // fit; the BTreeMap of rationals is far slower for large spectra.
        if let (Some(l), Some(a), Some(b)) = (scale.to_i64(), scaled(&self.entries), scaled(&other.entries)) {
            let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
            for (x, mx) in &a {
                for (y, my) in &b {
                    *acc.entry(x + y).or_insert(0) += mx * my;
                }
            }
            return SpectralMultiset {
                vars,
                entries: acc
                    .into_iter()
                    .map(|(e, m)| (Rational::frac(e, l), m))
                    .collect(),
            };
        }
        let pairs = self.entries.iter().flat_map(|(a, ma)| {
            other
                .entries
                .iter()
                .map(move |(b, mb)| (a + b, ma * mb))
        });
        SpectralMultiset::new(vars, pairs)
    }

    /// Parses the JSON array form written by `Serialize`.
    pub fn from_json(vars: usize, json: &str) -> Result<Self> {
        let raw: Vec<EntryJson> =
            serde_json::from_str(json).map_err(|e| Error::Validation(e.to_string()))?;
        Ok(SpectralMultiset::new(
            vars,
            raw.into_iter().map(|e| (e.exponent, e.multiplicity)),
        ))
    }
}

impl Serialize for SpectralMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (e, m) in &self.entries {
            seq.serialize_element(&EntryJson {
                exponent: e.clone(),
                multiplicity: *m,
            })?;
        }
        seq.end()
    }
}

/// Finite sum `Σ c_e T^e` with rational exponents and signed integer
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FractionalPoly {
    terms: BTreeMap<Rational, BigInt>,
}

impl FractionalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::zero(), 1)
    }

    pub fn monomial<C: Into<BigInt>>(exponent: Rational, coeff: C) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coeff.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exponent: Rational, coeff: BigInt) {
        let slot = self.terms.entry(exponent.clone()).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &FractionalPoly) -> FractionalPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FractionalPoly) -> FractionalPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &FractionalPoly) -> FractionalPoly {
        let mut out = FractionalPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }

    /// Converts to a spectrum; every coefficient must be positive.
    pub fn into_spectrum(self, vars: usize) -> Result<SpectralMultiset> {
        let mut entries = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms {
            match c.to_u64() {
                Some(m) if m > 0 => entries.push((e, m)),
                _ => {
                    return Err(Error::NegativeMultiplicity {
                        exponent: e.to_string(),
                        multiplicity: c.to_string(),
                    })
                }
            }
        }
        Ok(SpectralMultiset::new(vars, entries))
    }
}

/// Exact quotient `numerator / denominator` of polynomials in `T^Q`.
///
/// Both operands are rescaled by the lcm `L` of all exponent denominators,
/// which turns them into integer polynomials in `t = T^(1/L)`; the division
/// is carried out over the integers and the exponents are scaled back.
pub fn fractional_poly_divide(
    numerator: &FractionalPoly,
    denominator: &FractionalPoly,
) -> Result<FractionalPoly> {
    if denominator.is_zero() {
        return Err(Error::NonExactDivision("division by zero".into()));
    }
    if numerator.is_zero() {
        return Ok(FractionalPoly::zero());
    }
    let scale = common_denominator(numerator.terms.keys().chain(denominator.terms.keys()));
    let to_int = |e: &Rational| -> BigInt { e.numer() * (&scale / e.denom()) };

    // Shift both to start at t^0; the quotient picks up the difference.
    let num_low = to_int(numerator.terms.keys().next().unwrap());
    let den_low = to_int(denominator.terms.keys().next().unwrap());
    let dense = |p: &FractionalPoly, low: &BigInt| -> Vec<BigInt> {
        let high = (to_int(p.terms.keys().next_back().unwrap()) - low)
            .to_usize()
            .expect("degree fits in memory");
        let mut v = vec![BigInt::zero(); high + 1];
        for (e, c) in &p.terms {
            let i = (to_int(e) - low).to_usize().unwrap();
            v[i] = c.clone();
        }
        v
    };
    let num = dense(numerator, &num_low);
    let den = dense(denominator, &den_low);
    let quotient = int_poly_div_exact(&num, &den)?;
    let shift = num_low - den_low;
    let scale_r = Rational::from_int(scale);
    Ok(FractionalPoly::from_terms(
        quotient
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let e = Rational::from_int(BigInt::from(i) + &shift) / &scale_r;
                (e, c)
            }),
    ))
}

/// Long division of dense integer polynomials (ascending coefficients).
/// Fails unless the remainder is zero and every quotient coefficient is an
/// integer.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Result<Vec<BigInt>> {
    let den_deg = den.len() - 1;
    let lead = &den[den_deg];
    if num.len() < den.len() {
        return Err(Error::NonExactDivision(
            "numerator degree below denominator degree".into(),
        ));
    }
    let support: Vec<(usize, &BigInt)> =
        den.iter().enumerate().filter(|(_, d)| !d.is_zero()).collect();
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - den_deg];
    for i in (0..quot.len()).rev() {
        let top = &rem[i + den_deg];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return Err(Error::NonExactDivision(format!(
                "coefficient {top} not divisible by leading coefficient {lead}"
            )));
        }
        for &(j, d) in &support {
            rem[i + j] -= &q * d;
        }
        quot[i] = q;
    }
    if let Some(pos) = rem.iter().position(|c| !c.is_zero()) {
        return Err(Error::NonExactDivision(format!(
            "nonzero remainder at t^{pos}"
        )));
    }
    Ok(quot)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
