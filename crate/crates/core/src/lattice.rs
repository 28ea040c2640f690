//! Lattice sums under a concave piecewise-linear gauge.
//!
//! A [`Gauge`] is `φ(x) = min_F (c_F · x) / m_F` with positive integer
//! normals `c_F` and levels `m_F`. The region `{φ < 1}` intersected with the
//! strictly positive orthant is enumerated slab by slab along the first
//! coordinate; slabs may run in parallel and are merged in order, so the
//! result never depends on the execution strategy.

use num_bigint::BigInt;

use crate::par::{self, Strategy};
use crate::rational::Rational;

/// Whether points with `φ = 1` are included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Exclude,
    Include,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauge {
    forms: Vec<(Vec<i64>, i64)>,
    dim: usize,
}

/// Result of a lattice sum: `Σ (1 - φ(x))` and the number of points visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSum {
    pub sum: Rational,
    pub count: u64,
}

impl Gauge {
    /// Panics if a form has a nonpositive coefficient or level, or if the
    /// forms disagree on dimension.
    pub fn new(forms: Vec<(Vec<i64>, i64)>) -> Self {
        assert!(!forms.is_empty(), "gauge needs at least one form");
        let dim = forms[0].0.len();
        for (c, m) in &forms {
            assert_eq!(c.len(), dim, "forms must share a dimension");
            assert!(*m > 0 && c.iter().all(|&x| x > 0), "forms must be positive");
        }
        Gauge { forms, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[(Vec<i64>, i64)] {
        &self.forms
    }

    /// `φ(x)` for a lattice point.
    pub fn value(&self, x: &[i64]) -> Rational {
        self.forms
            .iter()
            .map(|(c, m)| {
                let s: i128 = c.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                Rational::new(BigInt::from(s), BigInt::from(*m)).unwrap()
            })
            .min()
            .unwrap()
    }

    /// Largest coordinate value `t` along axis `i` with `φ(t e_i) <= 1`.
    fn axis_limit(&self, i: usize) -> i64 {
        self.forms
            .iter()
            .map(|(c, m)| m / c[i])
            .max()
            .unwrap()
    }

    /// All points with coordinates `>= 1` and `φ < 1` (or `<= 1`), in
    /// lexicographic order.
    pub fn interior_points(&self, strategy: Strategy, boundary: Boundary) -> Vec<Vec<i64>> {
        let slabs: Vec<i64> = (1..=self.axis_limit(0)).collect();
        par::map(strategy, slabs, |x0| {
            let mut out = Vec::new();
            self.walk(x0, boundary, &mut |x, _| out.push(x.to_vec()));
            out
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// `Σ (1 - φ(x))` over the same points as [`Gauge::interior_points`].
    pub fn interior_sum(&self, strategy: Strategy, boundary: Boundary) -> LatticeSum {
        let slabs: Vec<i64> = (1..=self.axis_limit(0)).collect();
        let k = self.forms.len();
        let partials = par::map(strategy, slabs, |x0| {
            // Per-form integer accumulators of (m_F - c_F·x) where F attains
            // the minimum of φ; divided by m_F only once at the end.
            let mut acc = vec![0i128; k];
            let mut count = 0u64;
            self.walk(x0, boundary, &mut |_, best| {
                let (f, slack) = best;
                acc[f] += slack;
                count += 1;
            });
            (acc, count)
        });
        let mut acc = vec![0i128; k];
        let mut count = 0;
        for (a, c) in partials {
            for (t, v) in acc.iter_mut().zip(a) {
                *t += v;
            }
            count += c;
        }
        let sum = acc
            .iter()
            .zip(&self.forms)
            .map(|(&a, (_, m))| Rational::new(BigInt::from(a), BigInt::from(*m)).unwrap())
            .sum();
        LatticeSum { sum, count }
    }

    /// Depth-first walk of one slab `x_0 = x0`. The visitor receives the
    /// point and `(F, m_F - c_F·x)` for the form attaining the minimum.
    fn walk(&self, x0: i64, boundary: Boundary, visit: &mut dyn FnMut(&[i64], (usize, i128))) {
        let k = self.forms.len();
        // rest[i][F] = Σ_{j >= i} c_F[j], the cheapest completion from axis i.
        let mut rest = vec![vec![0i128; k]; self.dim + 1];
        for i in (0..self.dim).rev() {
            for (f, (c, _)) in self.forms.iter().enumerate() {
                rest[i][f] = rest[i + 1][f] + c[i] as i128;
            }
        }
        let mut x = vec![0i64; self.dim];
        let mut partial = vec![0i128; k];
        x[0] = x0;
        for (f, (c, _)) in self.forms.iter().enumerate() {
            partial[f] = c[0] as i128 * x0 as i128;
        }
        if !self.feasible(&partial, &rest[1], boundary) {
            return;
        }
        self.descend(1, &mut x, &mut partial, &rest, boundary, visit);
    }

    fn feasible(&self, partial: &[i128], rest: &[i128], boundary: Boundary) -> bool {
        self.forms
            .iter()
            .zip(partial.iter().zip(rest))
            .any(|((_, m), (p, r))| match boundary {
                Boundary::Exclude => p + r < *m as i128,
                Boundary::Include => p + r <= *m as i128,
            })
    }

    fn descend(
        &self,
        axis: usize,
        x: &mut [i64],
        partial: &mut [i128],
        rest: &[Vec<i128>],
        boundary: Boundary,
        visit: &mut dyn FnMut(&[i64], (usize, i128)),
    ) {
        if axis == self.dim {
            visit(x, self.best_slack(partial));
            return;
        }
        let mut t = 1i64;
        loop {
            for (f, (c, _)) in self.forms.iter().enumerate() {
                partial[f] += c[axis] as i128;
            }
            x[axis] = t;
            if !self.feasible(partial, &rest[axis + 1], boundary) {
                break;
            }
            self.descend(axis + 1, x, partial, rest, boundary, visit);
            t += 1;
        }
        for (f, (c, _)) in self.forms.iter().enumerate() {
            partial[f] -= c[axis] as i128 * t as i128;
        }
        x[axis] = 0;
    }

    /// The form maximizing `(m_F - s_F) / m_F`, with its slack `m_F - s_F`.
    fn best_slack(&self, partial: &[i128]) -> (usize, i128) {
        let mut best = (0usize, self.forms[0].1 as i128 - partial[0]);
        for (f, (_, m)) in self.forms.iter().enumerate().skip(1) {
            let slack = *m as i128 - partial[f];
            let (bf, bs) = best;
            // slack / m > bs / m_bf
            if slack * self.forms[bf].1 as i128 > bs * *m as i128 {
                best = (f, slack);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Gauge, bound: i64, boundary: Boundary) -> (Vec<Vec<i64>>, Rational) {
        // Oracle: scan the full box and evaluate φ with rationals.
        let one = Rational::one();
        let mut pts = Vec::new();
        let mut sum = Rational::zero();
        let mut x = vec![1i64; g.dim()];
        loop {
            let v = g.value(&x);
            let inside = match boundary {
                Boundary::Exclude => v < one,
                Boundary::Include => v <= one,
            };
            if inside {
                pts.push(x.clone());
                sum += &one - &v;
            }
            let mut i = g.dim();
            loop {
                if i == 0 {
                    return (pts, sum);
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    for y in x.iter_mut().skip(i + 1) {
                        *y = 1;
                    }
                    break;
                }
            }
        }
    }

    fn two_edge() -> Gauge {
        Gauge::new(vec![(vec![3, 2], 10), (vec![2, 3], 10)])
    }

    #[test]
    fn matches_box_scan() {
        let gauges = [
            two_edge(),
            Gauge::new(vec![(vec![3, 2], 6)]),
            Gauge::new(vec![(vec![1, 1, 1], 7)]),
            Gauge::new(vec![(vec![2, 1, 1], 9), (vec![1, 3, 1], 11), (vec![1, 1, 4], 13)]),
        ];
        for g in &gauges {
            for boundary in [Boundary::Exclude, Boundary::Include] {
                let (pts, sum) = brute(g, 14, boundary);
                for s in [Strategy::Sequential, Strategy::Parallel] {
                    assert_eq!(g.interior_points(s, boundary), pts);
                    let ls = g.interior_sum(s, boundary);
                    assert_eq!(ls.sum, sum);
                    assert_eq!(ls.count as usize, pts.len());
                }
            }
        }
    }

    #[test]
    fn two_edge_points() {
        let g = two_edge();
        let pts = g.interior_points(Strategy::Sequential, Boundary::Exclude);
        assert_eq!(
            pts,
            vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 1], vec![3, 1]]
        );
        let sum = g.interior_sum(Strategy::Sequential, Boundary::Exclude);
        assert_eq!(sum.sum, Rational::frac(13, 10));
        // (2,2) sits on the boundary and contributes nothing.
        let incl = g.interior_sum(Strategy::Sequential, Boundary::Include);
        assert_eq!(incl.sum, sum.sum);
        assert_eq!(incl.count, sum.count + 1);
    }

    #[test]
    fn empty_region() {
        let g = Gauge::new(vec![(vec![1, 1], 2)]);
        assert!(g.interior_points(Strategy::Parallel, Boundary::Exclude).is_empty());
        assert_eq!(
            g.interior_sum(Strategy::Parallel, Boundary::Exclude).sum,
            Rational::zero()
        );
    }
}
