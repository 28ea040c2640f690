//! Spectral measures and their limiting density.
//!
//! The limit law is that of a sum of `n + 1` independent uniform variables
//! on `[0, 1]`; its CDF is piecewise polynomial with integer breakpoints and
//! is evaluated exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Strategy};
use crate::rational::{factorial, Rational};
use crate::spectrum::SpectralMultiset;

fn binomial(n: u32, k: u32) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `P(U_0 + ... + U_n <= s)` for independent uniforms on `[0, 1]`.
pub fn saito_cdf(n: u32, s: &Rational) -> Result<Rational> {
    let top = Rational::from(n as i64 + 1);
    if s.is_negative() || *s > top {
        return Err(Error::Domain(format!("s = {s} lies outside [0, {top}]")));
    }
    let m = n + 1;
    let last = s.floor();
    let mut acc = Rational::zero();
    for j in 0..=m {
        let jr = Rational::from(j as i64);
        if Rational::from_int(last.clone()) < jr {
            break;
        }
        let term = binomial(m, j) * (s - &jr).pow(m);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= &term;
        }
    }
    Ok(acc / factorial(m))
}

/// Dense polynomial with rational coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<Rational>);

impl Poly {
    /// `(s - a)^k`.
    fn shifted_power(a: i64, k: u32) -> Poly {
        Poly(
            (0..=k)
                .map(|i| binomial(k, i) * Rational::from(-a).pow(k - i))
                .collect(),
        )
    }

    fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), Rational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * c;
        }
    }

    /// `∫_lo^hi s^shift · p(s) ds`.
    fn integrate(&self, shift: u32, lo: &Rational, hi: &Rational) -> Rational {
        self.0
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = i as u32 + shift + 1;
                c * &(hi.pow(e) - lo.pow(e)) / Rational::from(e as i64)
            })
            .sum()
    }
}

/// The limiting density on `[0, n+1]` as polynomial pieces on `[j, j+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaitoDensity {
    n: u32,
    pieces: Vec<Poly>,
}

impl SaitoDensity {
    pub fn new(n: u32) -> Self {
        let m = n + 1;
        let scale = factorial(n).recip().unwrap();
        let mut pieces = Vec::with_capacity(m as usize);
        let mut running = Poly(vec![Rational::zero()]);
        for j in 0..m {
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            let c = sign * binomial(m, j) * &scale;
            running.add_scaled(&Poly::shifted_power(j as i64, n), &c);
            pieces.push(running.clone());
        }
        SaitoDensity { n, pieces }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cdf(&self, s: &Rational) -> Result<Rational> {
        saito_cdf(self.n, s)
    }

    /// `∫ s^k N(s) ds` by exact piecewise integration.
    pub fn raw_moment(&self, k: u32) -> Rational {
        self.pieces
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let lo = Rational::from(j as i64);
                let hi = Rational::from(j as i64 + 1);
                p.integrate(k, &lo, &hi)
            })
            .sum()
    }

    /// Mean and variance of the density.
    pub fn moments(&self) -> (Rational, Rational) {
        let mean = self.raw_moment(1);
        let var = self.raw_moment(2) - &mean * &mean;
        (mean, var)
    }
}

/// The probability measure putting mass `1/μ` on each spectral number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    base: SpectralMultiset,
    total: u64,
}

impl EmpiricalMeasure {
    pub fn new(base: SpectralMultiset) -> Result<Self> {
        let total = base.total();
        if total == 0 || base.vars() == 0 {
            return Err(Error::Validation("an empirical measure needs a nonempty spectrum".into()));
        }
        Ok(EmpiricalMeasure { base, total })
    }

    pub fn base(&self) -> &SpectralMultiset {
        &self.base
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Dimension `n` of the hypersurface.
    pub fn dim(&self) -> u32 {
        self.base.vars() as u32 - 1
    }

    /// Mass of `{α' <= s}`.
    pub fn cdf(&self, s: &Rational) -> Rational {
        let entries = self.base.entries();
        let idx = entries.partition_point(|(e, _)| e <= s);
        let count: u64 = entries[..idx].iter().map(|(_, m)| m).sum();
        Rational::frac(count as i64, self.total as i64)
    }

    fn unshifted_extremes(&self) -> (Rational, Rational) {
        let one = Rational::one();
        (
            self.base.min_exponent().unwrap() - &one,
            self.base.max_exponent().unwrap() - &one,
        )
    }
}

/// Mean and variance of the unshifted exponents `α = α' - 1`.
pub fn measure_moments(m: &EmpiricalMeasure) -> (Rational, Rational) {
    let mu = Rational::from(m.total as i64);
    let one = Rational::one();
    let (mut s1, mut s2) = (Rational::zero(), Rational::zero());
    for (e, k) in m.base.entries() {
        let a = e - &one;
        let kr = Rational::from(*k as i64);
        s2 += &a * &a * &kr;
        s1 += a * kr;
    }
    let mean = s1 / &mu;
    let var = s2 / &mu - &mean * &mean;
    (mean, var)
}

/// `(α_μ - α_1)/12 - variance`.
pub fn hertling_gap(m: &EmpiricalMeasure) -> Rational {
    let (lo, hi) = m.unshifted_extremes();
    (hi - lo) / Rational::from(12) - measure_moments(m).1
}

/// For curves: `α_μ <= (2/3) sqrt(1 - 1/μ)`, compared after squaring.
pub fn hertling_strong_criterion(m: &EmpiricalMeasure) -> Result<bool> {
    if m.base.vars() != 2 {
        return Err(Error::Dimension {
            expected: 1,
            actual: m.dim() as usize,
        });
    }
    let (lo, hi) = m.unshifted_extremes();
    if hi != -lo.clone() {
        return Err(Error::Validation(format!(
            "curve spectrum is not symmetric: α_1 = {lo}, α_μ = {hi}"
        )));
    }
    let mu = Rational::from(m.total as i64);
    let bound = Rational::frac(4, 9) * (Rational::one() - mu.recip().unwrap());
    Ok(&hi * &hi <= bound)
}

/// `max_j |F_emp(s_j) - F(s_j)|` over `s_j = j (n+1) / grid`, `j = 0..=grid`.
pub fn sup_cdf_distance(m: &EmpiricalMeasure, density: &SaitoDensity, grid: u32) -> Result<Rational> {
    if m.dim() != density.n() {
        return Err(Error::Dimension {
            expected: density.n() as usize,
            actual: m.dim() as usize,
        });
    }
    if grid == 0 {
        return Err(Error::Validation("grid must be positive".into()));
    }
    let top = density.n() as i64 + 1;
    let dists = par::map(Strategy::default(), (0..=grid).collect(), |j| {
        let s = Rational::frac(j as i64 * top, grid as i64);
        (m.cdf(&s) - density.cdf(&s).unwrap()).abs()
    });
    Ok(dists.into_iter().max().unwrap())
}

/// One CSV row of a family diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagnosticsRow {
    pub param: String,
    pub mu: u64,
    /// Smallest spectral number `α'_1`.
    pub min_alpha: Rational,
    pub ratio_pg: Rational,
    pub ratio_sg: Rational,
    pub cdf_distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyFlags {
    /// `α'_1` strictly decreasing along the family.
    pub min_alpha_decreasing: Option<bool>,
    /// `p̃_g/μ` nondecreasing and below `1/(n+2)!`.
    pub spectral_ratio_increasing_below_bound: Option<bool>,
    pub cdf_distance_nonincreasing: Option<bool>,
    /// `1/(n+2)! - p̃_g/μ` at the last member.
    pub final_spectral_gap: Rational,
    /// `1/(n+1)! - p_g/μ` at the last member.
    pub final_geometric_gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub n: u32,
    pub grid: u32,
    pub rows: Vec<DiagnosticsRow>,
    /// `p̃_g / p_g` per member, absent when `p_g = 0`.
    pub genus_ratios: Vec<Option<Rational>>,
    pub flags: FamilyFlags,
    pub note: &'static str,
}

fn pairwise<T>(v: &[T], ok: impl Fn(&T, &T) -> bool) -> Option<bool> {
    (v.len() > 1).then(|| v.windows(2).all(|w| ok(&w[0], &w[1])))
}

/// Per-member statistics of a family with strictly increasing `μ`.
pub fn family_diagnostics(
    family: &[(String, EmpiricalMeasure)],
    grid: u32,
) -> Result<FamilyReport> {
    let Some((_, first)) = family.first() else {
        return Err(Error::Validation("family is empty".into()));
    };
    let n = first.dim();
    for w in family.windows(2) {
        if w[1].1.dim() != n {
            return Err(Error::Dimension {
                expected: n as usize,
                actual: w[1].1.dim() as usize,
            });
        }
        if w[1].1.total <= w[0].1.total {
            return Err(Error::Validation(format!(
                "Milnor numbers must increase along the family ({} then {})",
                w[0].1.total, w[1].1.total
            )));
        }
    }
    let density = SaitoDensity::new(n);
    let mut rows = Vec::with_capacity(family.len());
    let mut genus_ratios = Vec::with_capacity(family.len());
    for (param, m) in family {
        let mu = Rational::from(m.total as i64);
        let sg = m.base.spectral_genus();
        let pg = m.base.geometric_genus();
        genus_ratios.push((pg > 0).then(|| &sg / Rational::from(pg as i64)));
        rows.push(DiagnosticsRow {
            param: param.clone(),
            mu: m.total,
            min_alpha: m.base.min_exponent().unwrap().clone(),
            ratio_pg: Rational::from(pg as i64) / &mu,
            ratio_sg: sg / &mu,
            cdf_distance: sup_cdf_distance(m, &density, grid)?,
        });
    }
    let sg_bound = factorial(n + 2).recip().unwrap();
    let pg_bound = factorial(n + 1).recip().unwrap();
    let last = rows.last().unwrap();
    let flags = FamilyFlags {
        min_alpha_decreasing: pairwise(&rows, |a, b| b.min_alpha < a.min_alpha),
        spectral_ratio_increasing_below_bound: pairwise(&rows, |a, b| a.ratio_sg <= b.ratio_sg)
            .map(|mono| mono && rows.iter().all(|r| r.ratio_sg < sg_bound)),
        cdf_distance_nonincreasing: pairwise(&rows, |a, b| b.cdf_distance <= a.cdf_distance),
        final_spectral_gap: &sg_bound - &last.ratio_sg,
        final_geometric_gap: &pg_bound - &last.ratio_pg,
    };
    Ok(FamilyReport {
        n,
        grid,
        rows,
        genus_ratios,
        flags,
        note: "grid CDF distance is a finite witness only; it is weaker than strong convergence",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{homogeneous_weights, quasihom_spectrum};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn measure(weights: &[Rational]) -> EmpiricalMeasure {
        EmpiricalMeasure::new(quasihom_spectrum(weights).unwrap()).unwrap()
    }

    #[test]
    fn cdf_values() {
        for n in 0..6 {
            assert_eq!(saito_cdf(n, &Rational::from(n as i64 + 1)).unwrap(), Rational::one());
            assert_eq!(saito_cdf(n, &Rational::zero()).unwrap(), Rational::zero());
            assert_eq!(
                saito_cdf(n, &Rational::one()).unwrap(),
                factorial(n + 1).recip().unwrap()
            );
        }
        assert_eq!(saito_cdf(1, &r(1, 1)).unwrap(), r(1, 2));
        assert_eq!(saito_cdf(1, &r(3, 2)).unwrap(), r(7, 8));
        assert!(saito_cdf(1, &r(5, 2)).is_err());
        assert!(saito_cdf(1, &r(-1, 2)).is_err());
    }

    #[test]
    fn density_moments() {
        for n in 0..5u32 {
            let (mean, var) = SaitoDensity::new(n).moments();
            assert_eq!(mean, r(n as i64 + 1, 2));
            assert_eq!(var, r(n as i64 + 1, 12));
            assert_eq!(SaitoDensity::new(n).raw_moment(0), Rational::one());
        }
    }

    #[test]
    fn moments_and_gap() {
        let cusp = measure(&[r(1, 2), r(1, 3)]);
        assert_eq!(measure_moments(&cusp), (r(0, 1), r(1, 36)));
        assert_eq!(hertling_gap(&cusp), Rational::zero());
        let odp = measure(&[r(1, 2), r(1, 2)]);
        assert_eq!(measure_moments(&odp), (r(0, 1), r(0, 1)));
        assert_eq!(hertling_gap(&odp), Rational::zero());
        let d3 = measure(&homogeneous_weights(1, 3));
        assert_eq!(measure_moments(&d3), (r(0, 1), r(1, 18)));
    }

    #[test]
    fn strong_criterion() {
        assert!(hertling_strong_criterion(&measure(&[r(1, 2), r(1, 3)])).unwrap());
        assert!(hertling_strong_criterion(&measure(&[r(1, 2), r(1, 2)])).unwrap());
        assert!(!hertling_strong_criterion(&measure(&homogeneous_weights(1, 12))).unwrap());
        assert_eq!(
            hertling_strong_criterion(&measure(&homogeneous_weights(2, 3))),
            Err(Error::Dimension {
                expected: 1,
                actual: 2
            })
        );
    }

    #[test]
    fn cdf_distances() {
        let density = SaitoDensity::new(1);
        let odp = measure(&[r(1, 2), r(1, 2)]);
        assert_eq!(sup_cdf_distance(&odp, &density, 1000).unwrap(), r(1, 2));
        let d40 = measure(&homogeneous_weights(1, 40));
        assert!(sup_cdf_distance(&d40, &density, 1000).unwrap() < r(1, 10));
        assert!(sup_cdf_distance(&d40, &SaitoDensity::new(2), 10).is_err());
    }

    #[test]
    fn quantile_atoms_are_close() {
        // Atoms at the density's quantiles j/grid, one per grid cell.
        let grid = 50i64;
        let s = SpectralMultiset::new(1, (1..grid).map(|j| (r(j, grid), 1)));
        let m = EmpiricalMeasure::new(s).unwrap();
        let d = sup_cdf_distance(&m, &SaitoDensity::new(0), grid as u32).unwrap();
        assert!(d <= r(1, grid));
    }

    #[test]
    fn homogeneous_family() {
        let family: Vec<(String, EmpiricalMeasure)> = (2..=12)
            .map(|d| (d.to_string(), measure(&homogeneous_weights(1, d))))
            .collect();
        let report = family_diagnostics(&family, 200).unwrap();
        assert_eq!(report.flags.min_alpha_decreasing, Some(true));
        assert_eq!(report.flags.spectral_ratio_increasing_below_bound, Some(true));
        assert_eq!(report.rows[0].ratio_sg, Rational::zero());
        assert_eq!(report.rows[1].ratio_sg, r(1, 12));
        assert_eq!(report.genus_ratios[0], Some(Rational::zero()));
        let single = family_diagnostics(&family[..1], 100).unwrap();
        assert_eq!(single.flags.min_alpha_decreasing, None);
        let mut reversed = family.clone();
        reversed.reverse();
        assert!(family_diagnostics(&reversed, 100).is_err());
        assert!(family_diagnostics(&[], 100).is_err());
    }

    proptest! {
        #[test]
        fn cdf_monotone_and_symmetric(n in 0u32..5, p in 0i64..1000, q in 1i64..200) {
            let top = Rational::from(n as i64 + 1);
            let s = Rational::frac(p, q);
            prop_assume!(s <= top);
            let f = saito_cdf(n, &s).unwrap();
            let g = saito_cdf(n, &(&top - &s)).unwrap();
            prop_assert_eq!(&f + &g, Rational::one());
            let t = (&s + &Rational::frac(1, q)).min(top);
            prop_assert!(saito_cdf(n, &t).unwrap() >= f);
        }
    }
}
