//! Newton diagrams: the compact boundary of the Newton polyhedron, its
//! gauge `φ`, interior lattice points, and coordinate-subspace volumes.
//!
//! Compact facets are found by exhaustive search: every `(n+1)`-subset of
//! (non-dominated) support points that spans a hyperplane `ℓ·x = 1` with all
//! coefficients of `ℓ` strictly positive and `ℓ(p) >= 1` on the whole support
//! is a compact facet. Supports are small, so this stays exact and simple.
//!
//! Volumes come from a simplicial decomposition: each facet's point set is
//! triangulated by pulling from a lexicographically extreme point, and every
//! simplex is coned from the origin.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, Gauge, LatticeSum};
use crate::linalg;
use crate::par::Strategy;
use crate::parser::MonomialSupport;
use crate::rational::{factorial, Rational};

/// A compact facet `{x : normal·x = level}` of the Newton boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Primitive, strictly positive integer normal.
    pub normal: Vec<i64>,
    pub level: i64,
    /// Indices into the support of the points lying on the facet.
    pub points: Vec<usize>,
}

impl Facet {
    /// The supporting form `ℓ = normal / level`, so that `ℓ = 1` on the facet.
    pub fn form(&self) -> Vec<Rational> {
        self.normal
            .iter()
            .map(|&c| Rational::frac(c, self.level))
            .collect()
    }

    fn eval(&self, x: &[Rational]) -> Rational {
        let s: Rational = self
            .normal
            .iter()
            .zip(x)
            .map(|(&c, v)| Rational::from(c) * v)
            .sum();
        s / Rational::from(self.level)
    }
}

/// Which lexicographically extreme point a pulling triangulation cones from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Apex {
    First,
    Last,
}

/// A full-dimensional simplex with the origin as one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCell {
    /// `n + 2` vertices; the first is the origin.
    pub vertices: Vec<Vec<i64>>,
}

impl LatticeCell {
    /// Euclidean volume `|det| / (n+1)!`.
    pub fn volume(&self) -> Rational {
        let rows: Vec<Vec<i64>> = self.vertices[1..].to_vec();
        let d = rows.len() as u32;
        Rational::from_int(linalg::det(&rows).abs()) / factorial(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonDiagram {
    support: MonomialSupport,
    facets: Vec<Facet>,
    intercepts: Vec<Option<u32>>,
}

impl NewtonDiagram {
    pub fn support(&self) -> &MonomialSupport {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Where the Newton boundary meets each coordinate axis, if it does.
    pub fn intercepts(&self) -> &[Option<u32>] {
        &self.intercepts
    }

    pub fn is_convenient(&self) -> bool {
        self.intercepts.iter().all(Option::is_some)
    }

    pub fn require_convenient(&self) -> Result<()> {
        match self.intercepts.iter().position(Option::is_none) {
            Some(axis) => Err(Error::NotConvenient { axis }),
            None => Ok(()),
        }
    }

    /// The gauge `φ` as a minimum of integer forms.
    pub fn gauge(&self) -> Result<Gauge> {
        self.require_convenient()?;
        Ok(Gauge::new(
            self.facets
                .iter()
                .map(|f| (f.normal.clone(), f.level))
                .collect(),
        ))
    }

    /// `φ(x) = min_F ℓ_F(x)` at a point of the positive orthant.
    pub fn phi(&self, point: &[Rational]) -> Result<Rational> {
        self.require_convenient()?;
        if point.len() != self.support.vars() {
            return Err(Error::Dimension {
                expected: self.support.vars(),
                actual: point.len(),
            });
        }
        if point.iter().any(Rational::is_negative) {
            return Err(Error::Domain("φ is defined on the nonnegative orthant".into()));
        }
        Ok(self
            .facets
            .iter()
            .map(|f| f.eval(point))
            .min()
            .expect("a convenient diagram has a facet"))
    }

    /// Lattice points with all coordinates `>= 1` and `φ < 1`, lexicographic.
    pub fn interior_lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        Ok(self
            .gauge()?
            .interior_points(Strategy::default(), Boundary::Exclude))
    }

    /// `Σ (1 - φ(x))` over the interior lattice points.
    pub fn interior_sum(&self, strategy: Strategy, boundary: Boundary) -> Result<LatticeSum> {
        Ok(self.gauge()?.interior_sum(strategy, boundary))
    }

    /// Simplicial decomposition of `Γ₋` into cells coned from the origin.
    pub fn cells(&self, apex: Apex) -> Result<Vec<LatticeCell>> {
        self.require_convenient()?;
        let vars = self.support.vars();
        let mut cells = Vec::new();
        for f in &self.facets {
            let pts: Vec<Vec<i64>> = f
                .points
                .iter()
                .map(|&i| self.support.points()[i].iter().map(|&c| c as i64).collect())
                .collect();
            for simplex in triangulate(&pts, apex) {
                let mut vertices = vec![vec![0i64; vars]];
                vertices.extend(simplex.into_iter().map(|i| pts[i].clone()));
                cells.push(LatticeCell { vertices });
            }
        }
        Ok(cells)
    }

    /// Volume of `Γ₋` from the decomposition with the given apex choice.
    pub fn volume_with(&self, apex: Apex) -> Result<Rational> {
        Ok(self.cells(apex)?.iter().map(LatticeCell::volume).sum())
    }

    /// `vol_k` for `k = 1..=n+1`: the sum over all `k`-element coordinate
    /// subsets `S` of the `k`-dimensional volume of `Γ₋ ∩ R^S`.
    ///
    /// `Γ₊ ∩ R^S` is the Newton polyhedron of the support points lying in
    /// `R^S`, so each slice is the full volume of a smaller diagram.
    pub fn volumes(&self) -> Result<Vec<Rational>> {
        self.require_convenient()?;
        let vars = self.support.vars();
        let mut vols = vec![Rational::zero(); vars];
        for k in 1..=vars {
            for subset in (0..vars).combinations(k) {
                vols[k - 1] += self.slice_volume(&subset)?;
            }
        }
        Ok(vols)
    }

    fn slice_volume(&self, subset: &[usize]) -> Result<Rational> {
        if subset.len() == self.support.vars() {
            return self.volume_with(Apex::First);
        }
        let pts: Vec<Vec<u32>> = self
            .support
            .points()
            .iter()
            .filter(|p| {
                p.iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || subset.contains(&i))
            })
            .map(|p| subset.iter().map(|&i| p[i]).collect())
            .collect();
        let sub = build_diagram(&MonomialSupport::new(subset.len(), pts)?);
        sub.volume_with(Apex::First)
    }

    /// Kouchnirenko's alternating volume sum, which is the Milnor number of
    /// a convenient non-degenerate germ with this diagram.
    pub fn kouchnirenko_number(&self) -> Result<Rational> {
        let vols = self.volumes()?;
        let top = vols.len();
        let mut mu = if top % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        for (i, v) in vols.iter().enumerate() {
            let k = i + 1;
            let term = factorial(k as u32) * v;
            if (top - k) % 2 == 0 {
                mu += term;
            } else {
                mu -= &term;
            }
        }
        Ok(mu)
    }

    /// JSON debug dump of the diagram.
    pub fn dump(&self) -> DiagramDump {
        DiagramDump {
            vars: self.support.vars(),
            convenient: self.is_convenient(),
            intercepts: self.intercepts.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetDump {
                    form: f.form(),
                    points: f
                        .points
                        .iter()
                        .map(|&i| self.support.points()[i].clone())
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramDump {
    pub vars: usize,
    pub convenient: bool,
    pub intercepts: Vec<Option<u32>>,
    pub facets: Vec<FacetDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetDump {
    pub form: Vec<Rational>,
    pub points: Vec<Vec<u32>>,
}

/// Builds the Newton diagram of a support. Non-convenient supports still
/// yield a diagram; downstream operations reject them.
pub fn build_diagram(support: &MonomialSupport) -> NewtonDiagram {
    let vars = support.vars();
    let all = support.points();
    // A point dominating another can never lie on a compact face.
    let candidates: Vec<&Vec<u32>> = all
        .iter()
        .filter(|p| {
            !all.iter()
                .any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b))
        })
        .collect();

    let mut facets: Vec<Facet> = Vec::new();
    let ones = vec![Rational::one(); vars];
    for combo in candidates.iter().combinations(vars) {
        let rows: Vec<Vec<Rational>> = combo
            .iter()
            .map(|p| p.iter().map(|&c| Rational::from(c as i64)).collect())
            .collect();
        let Some(form) = linalg::solve(&rows, &ones) else {
            continue;
        };
        if !form.iter().all(Rational::is_positive) {
            continue;
        }
        let (normal, level) = integer_form(&form);
        let value = |p: &Vec<u32>| -> i128 {
            normal
                .iter()
                .zip(p)
                .map(|(&c, &x)| c as i128 * x as i128)
                .sum()
        };
        if candidates.iter().any(|p| value(p) < level as i128) {
            continue;
        }
        if facets.iter().any(|f| f.normal == normal && f.level == level) {
            continue;
        }
        let points = all
            .iter()
            .enumerate()
            .filter(|(_, p)| value(p) == level as i128)
            .map(|(i, _)| i)
            .collect();
        facets.push(Facet {
            normal,
            level,
            points,
        });
    }
    facets.sort_by(|a, b| a.points.cmp(&b.points));

    let intercepts = (0..vars)
        .map(|axis| {
            all.iter()
                .filter(|p| p.iter().enumerate().all(|(i, &c)| (i == axis) == (c > 0)))
                .map(|p| p[axis])
                .min()
        })
        .collect();

    NewtonDiagram {
        support: support.clone(),
        facets,
        intercepts,
    }
}

/// Writes a positive rational form as `normal / level` with `gcd = 1`.
fn integer_form(form: &[Rational]) -> (Vec<i64>, i64) {
    let level = form
        .iter()
        .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let normal: Vec<BigInt> = form
        .iter()
        .map(|r| r.numer() * (&level / r.denom()))
        .collect();
    let g = normal.iter().fold(level.clone(), |acc, c| acc.gcd(c));
    let to_i64 = |x: BigInt| x.to_i64().expect("facet normal fits in i64");
    (
        normal.into_iter().map(|c| to_i64(c / &g)).collect(),
        to_i64(level / g),
    )
}

/// Pulling triangulation of the convex hull of `points` (distinct integer
/// points of any affine dimension). Returns simplices as index lists.
pub fn triangulate(points: &[Vec<i64>], apex: Apex) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..points.len()).collect();
    let dim = affine_dim(points, &idx);
    pull(points, idx, dim, apex)
}

fn affine_dim(points: &[Vec<i64>], idx: &[usize]) -> usize {
    projection_axes(points, idx).len()
}

/// Coordinates onto which the affine hull of `idx` projects isomorphically.
fn projection_axes(points: &[Vec<i64>], idx: &[usize]) -> Vec<usize> {
    let base = &points[idx[0]];
    let diffs: Vec<Vec<i64>> = idx[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::pivot_columns(&diffs)
}

fn pull(points: &[Vec<i64>], idx: Vec<usize>, dim: usize, apex: Apex) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![idx[0]]];
    }
    let chosen = match apex {
        Apex::First => *idx.iter().min_by(|&&a, &&b| points[a].cmp(&points[b])).unwrap(),
        Apex::Last => *idx.iter().max_by(|&&a, &&b| points[a].cmp(&points[b])).unwrap(),
    };
    let mut out = Vec::new();
    for facet in hull_facets(points, &idx, dim) {
        if facet.contains(&chosen) {
            continue;
        }
        for mut simplex in pull(points, facet, dim - 1, apex) {
            simplex.push(chosen);
            out.push(simplex);
        }
    }
    out
}

/// Facets (as point-index sets) of the hull of `idx`, an affinely
/// `dim`-dimensional set, found by brute-force orientation tests.
fn hull_facets(points: &[Vec<i64>], idx: &[usize], dim: usize) -> Vec<Vec<usize>> {
    let axes = projection_axes(points, idx);
    debug_assert_eq!(axes.len(), dim);
    let proj = |i: usize| -> Vec<i64> { axes.iter().map(|&a| points[i][a]).collect() };
    let local: Vec<Vec<i64>> = idx.iter().map(|&i| proj(i)).collect();

    let mut facets: Vec<Vec<usize>> = Vec::new();
    for combo in (0..idx.len()).combinations(dim) {
        let g0 = &local[combo[0]];
        let mut rows: Vec<Vec<i64>> = combo[1..]
            .iter()
            .map(|&j| local[j].iter().zip(g0).map(|(a, b)| a - b).collect())
            .collect();
        let mut signs = Vec::with_capacity(idx.len());
        for q in &local {
            rows.push(q.iter().zip(g0).map(|(a, b)| a - b).collect());
            signs.push(linalg::det(&rows));
            rows.pop();
        }
        if signs.iter().all(Zero::is_zero) {
            continue;
        }
        let nonneg = signs.iter().all(|s| !s.is_negative());
        let nonpos = signs.iter().all(|s| !s.is_positive());
        if !(nonneg || nonpos) {
            continue;
        }
        let facet: Vec<usize> = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_zero())
            .map(|(j, _)| idx[j])
            .collect();
        if !facets.contains(&facet) {
            facets.push(facet);
        }
    }
    facets
}
