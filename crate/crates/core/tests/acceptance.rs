//! Acceptance suite. Run with
//! `cargo test -p spectral-genus --test acceptance -- --nocapture`
//! to see one line per criterion.

use std::time::Instant;

use spectral_genus::invariants::{homogeneous_weights, mordell_lattice, quasihom_invariants};
use spectral_genus::par;
use spectral_genus::rational::factorial;
use spectral_genus::{
    build_diagram, dim1_family, hertling_gap, homogeneous_closed, homogeneous_sweep,
    newton_invariants, parse_polynomial, puiseux_invariants, quasihom_mu,
    quasihom_spectral_genus, quasihom_spectrum, scale_sweep, suspend, Dim1Kind, EmpiricalMeasure,
    MonomialSupport, PuiseuxChain, Rational, SaitoDensity, SpectralMultiset, Strategy,
};

type Check = Result<String, String>;

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Quasi-homogeneous weight vectors with a genuine isolated singularity.
fn quasihom_corpus() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for d in 2..=12 {
            out.push(homogeneous_weights(n, d));
        }
    }
    for kind in Dim1Kind::ALL {
        for a in 2..=12 {
            for b in 2..=12 {
                out.push(kind.weights(a, b));
            }
        }
    }
    // Brieskorn-Pham germs x^a + y^b + z^c (+ w^e).
    for (a, b, c) in [(2, 3, 5), (2, 3, 7), (2, 4, 5), (3, 3, 4), (3, 4, 5), (2, 5, 9)] {
        out.push(vec![r(1, a), r(1, b), r(1, c)]);
    }
    out.push(vec![r(1, 2), r(1, 3), r(1, 5), r(1, 7)]);
    out
}

fn puiseux_corpus() -> Vec<PuiseuxChain> {
    fn extend(chain: &[(u64, u64)], out: &mut Vec<PuiseuxChain>) {
        if chain.len() == 3 {
            return;
        }
        let lower = chain.last().map(|&(k, _)| k);
        for n in 2..=4u64 {
            let first_k = match lower {
                Some(k) => k * n + 1,
                None => n + 1,
            };
            for k in first_k..=60 {
                let mut next = chain.to_vec();
                next.push((k, n));
                if let Ok(c) = PuiseuxChain::new(next.clone()) {
                    out.push(c);
                    extend(&next, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    extend(&[], &mut out);
    out
}

fn criterion_1() -> Check {
    let mut count = 0;
    for n in 1..=3u32 {
        for d in 2..=12u32 {
            let closed = homogeneous_closed(n, d).map_err(|e| e.to_string())?;
            let expected_mu = Rational::from(d as i64 - 1).pow(n + 1);
            let falling: Rational = (1..=n as i64 + 1).map(|j| Rational::from(d as i64 - j)).product();
            let expected_sg = falling / factorial(n + 2);
            let weights = homogeneous_weights(n, d);
            let lattice = quasihom_spectral_genus(&weights).map_err(|e| e.to_string())?;
            let spectrum = quasihom_spectrum(&weights).map_err(|e| e.to_string())?;
            let support = MonomialSupport::homogeneous_diagonal(n as usize + 1, d).unwrap();
            let newton = newton_invariants(&build_diagram(&support), true).map_err(|e| e.to_string())?;
            let mus = [
                closed.mu.clone(),
                quasihom_mu(&weights).unwrap(),
                Rational::from(spectrum.total() as i64),
                newton.mu.clone(),
            ];
            let sgs = [
                closed.spectral_genus.clone(),
                lattice,
                spectrum.spectral_genus(),
                newton.spectral_genus.clone(),
            ];
            ensure(mus.iter().all(|m| *m == expected_mu), || format!("n={n} d={d}: mu {mus:?}"))?;
            ensure(sgs.iter().all(|s| *s == expected_sg), || format!("n={n} d={d}: p~g {sgs:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} homogeneous germs agree across four methods"))
}

fn criterion_2() -> Check {
    let mut count = 0;
    for a in 2..=40 {
        for b in 2..=40 {
            let closed = spectral_genus::mordell_sum(a, b);
            let brute = mordell_lattice(a, b);
            ensure(closed == brute, || format!("a={a} b={b}: {closed} vs {brute}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} cases"))
}

fn criterion_3() -> Check {
    let params: Vec<(Dim1Kind, u32, u32)> = Dim1Kind::ALL
        .iter()
        .flat_map(|&k| (2..=25).flat_map(move |a| (2..=25).map(move |b| (k, a, b))))
        .collect();
    let count = params.len();
    let results = par::map(Strategy::default(), params, |(kind, a, b)| -> Result<(), String> {
        let bundle = dim1_family(kind, a, b).map_err(|e| e.to_string())?;
        let margin = &bundle.mu / Rational::from(6) - &bundle.spectral_genus;
        ensure(margin >= r(1, 6), || format!("{kind} a={a} b={b}: margin {margin}"))
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{count} germs with margin >= 1/6"))
}

fn criterion_4() -> Check {
    let corpus = puiseux_corpus();
    let count = corpus.len();
    let max_genus = corpus.iter().map(PuiseuxChain::genus).max().unwrap_or(0);
    let results = par::map(Strategy::default(), corpus, |chain| -> Result<(), String> {
        // puiseux_invariants itself enforces μ/6 - p̃_g = Σ S_i / 12.
        let inv = puiseux_invariants(&chain).map_err(|e| format!("{:?}: {e}", chain.pairs()))?;
        let first = &inv.s_plus[0] / &r(12, 1);
        ensure(first >= r(1, 6), || format!("{:?}: S_1+/12 = {first}", chain.pairs()))?;
        if chain.genus() >= 2 {
            ensure(inv.margin > first, || format!("{:?}: not strict", chain.pairs()))
        } else {
            ensure(inv.margin >= first, || format!("{:?}: below S_1+/12", chain.pairs()))
        }
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{count} chains up to genus {max_genus}"))
}

fn criterion_5() -> Check {
    let support = parse_polynomial("(x^2+y^3)*(y^2+x^3)", None).map_err(|e| e.to_string())?;
    let diagram = build_diagram(&support);
    let bundle = newton_invariants(&diagram, true).map_err(|e| e.to_string())?;
    let margin = &bundle.mu / Rational::from(6) - &bundle.spectral_genus;
    ensure(bundle.mu == r(11, 1), || format!("mu = {}", bundle.mu))?;
    ensure(bundle.spectral_genus == r(13, 10), || format!("p~g = {}", bundle.spectral_genus))?;
    ensure(margin == r(8, 15), || format!("margin = {margin}"))?;
    // Closed form (n+2)^2/(2(2n+3)) + (m+2)^2/(2(2m+3)) - 1/2 at n = m = 1.
    ensure(bundle.spectral_genus == r(9, 10) + r(9, 10) - r(1, 2), || "closed form".into())?;
    Ok("mu = 11, p~g = 13/10, margin = 8/15".into())
}

fn criterion_6() -> Check {
    let mut count = 0;
    for weights in quasihom_corpus() {
        let spectrum = quasihom_spectrum(&weights).map_err(|e| e.to_string())?;
        // suspend() enforces p_{g,h} = k p̃_{g,f}.
        suspend(&spectrum, None).map_err(|e| format!("{weights:?}: {e}"))?;
        count += 1;
    }
    let cusp = quasihom_spectrum(&[r(1, 2), r(1, 3)]).unwrap();
    let s = suspend(&cusp, Some(6)).map_err(|e| e.to_string())?;
    ensure(s.bundle.geometric_genus == Some(1), || format!("{:?}", s.bundle.geometric_genus))?;
    Ok(format!("{count} spectra; x^2+y^3+z^7 has p_g = 1"))
}

fn criterion_7() -> Check {
    let cusp = parse_polynomial("x^2+y^3", None).map_err(|e| e.to_string())?;
    let ks: Vec<u64> = (1..=64).collect();
    let sweep = scale_sweep(&cusp, &ks, Strategy::default()).map_err(|e| e.to_string())?;
    ensure(sweep.predicted_limit == r(5, 12), || format!("limit {}", sweep.predicted_limit))?;
    ensure(sweep.all_margins_positive, || "nonpositive margin".into())?;
    let last = &sweep.records.last().unwrap().scaled_margin;
    let rel = ((last - &sweep.predicted_limit) / &sweep.predicted_limit).abs();
    ensure(rel < r(1, 10), || format!("margin(64)/64 = {last}"))?;
    Ok(format!("margin(64)/64 = {last} (~{:.4}), limit 5/12", last.to_f64()))
}

fn criterion_8() -> Check {
    let ds: Vec<u32> = (2..=40).collect();
    let sweep = homogeneous_sweep(1, &ds).map_err(|e| e.to_string())?;
    ensure(sweep.ratio_nondecreasing, || "ratio not monotone".into())?;
    ensure(sweep.ratio_below_bound, || "ratio reaches 1/6".into())?;
    let last = &sweep.records.last().unwrap().ratio;
    let gap = r(1, 6) - last;
    ensure(gap < r(1, 20), || format!("final gap {gap}"))?;
    let spectrum = quasihom_spectrum(&homogeneous_weights(1, 40)).map_err(|e| e.to_string())?;
    let pg_ratio = r(spectrum.geometric_genus() as i64, spectrum.total() as i64);
    let pg_gap = (&pg_ratio - &r(1, 2)).abs();
    ensure(pg_gap < r(1, 20), || format!("p_g/mu = {pg_ratio}"))?;
    Ok(format!("p~g/mu gap {gap}, p_g/mu = {pg_ratio} at d = 40"))
}

fn criterion_9() -> Check {
    let mut count = 0;
    for weights in quasihom_corpus() {
        let m = EmpiricalMeasure::new(quasihom_spectrum(&weights).unwrap()).unwrap();
        let gap = hertling_gap(&m);
        ensure(gap.is_zero(), || format!("{weights:?}: gap {gap}"))?;
        count += 1;
    }
    for n in 0..=4u32 {
        let (mean, var) = SaitoDensity::new(n).moments();
        ensure(mean == r(n as i64 + 1, 2) && var == r(n as i64 + 1, 12), || {
            format!("n={n}: mean {mean}, variance {var}")
        })?;
    }
    Ok(format!("{count} spectra with zero gap; density moments for n <= 4"))
}

fn criterion_10() -> Check {
    let mut spectra: Vec<(SpectralMultiset, Rational)> = Vec::new();
    for weights in quasihom_corpus() {
        let b = quasihom_invariants(&weights).map_err(|e| e.to_string())?;
        let s = b.spectrum.clone().unwrap();
        let susp = suspend(&s, None).map_err(|e| e.to_string())?;
        let k = Rational::from(susp.k as i64);
        spectra.push((susp.bundle.spectrum.unwrap(), &b.mu * &k));
        spectra.push((s, b.mu));
    }
    let cusp = quasihom_spectrum(&[r(1, 2), r(1, 3)]).unwrap();
    let e8 = quasihom_spectrum(&[r(1, 3), r(1, 5)]).unwrap();
    spectra.push((cusp.sum_product(&e8), r(16, 1)));
    let count = spectra.len();
    for (s, mu) in &spectra {
        ensure(s.is_symmetric(), || format!("asymmetric spectrum {s:?}"))?;
        ensure(s.within_bounds(), || format!("exponent outside (0, n+1) in {s:?}"))?;
        ensure(Rational::from(s.total() as i64) == *mu, || format!("mass {} vs {mu}", s.total()))?;
    }
    Ok(format!("{count} spectra symmetric with total multiplicity mu"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("homogeneous closed forms", criterion_1),
        ("Mordell sums", criterion_2),
        ("curve normal forms, strong form", criterion_3),
        ("irreducible curves", criterion_4),
        ("two-edge checkpoint", criterion_5),
        ("suspension identity", criterion_6),
        ("scale-sweep asymptotics", criterion_7),
        ("ratio limits", criterion_8),
        ("Hertling equality and density moments", criterion_9),
        ("spectral symmetry and mass", criterion_10),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.1} s", 10 - failures, start.elapsed().as_secs_f64());
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
