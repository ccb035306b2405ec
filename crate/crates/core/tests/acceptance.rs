//! Acceptance run: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::time::Instant;

use hypzero::curve::{branch_points, build_curve, discriminant, discriminant_zeros, verify_prop3};
use hypzero::experiments::{
    cauchy_convergence_with, conjecture2_report, default_epsilon, label_test_points, loop_around_one,
    zero_curve_distance, DistanceReport, Restriction,
};
use hypzero::hyp::{apply_hypergeometric_operator, build_polynomial};
use hypzero::measure::{find_roots, find_roots_adaptive, vieta_check, RootCountingMeasure};
use hypzero::mp::{pow2, BigComplex};
use hypzero::potential::{classify_regions, trace_level_curve, HarmonicSystem, Rect, TraceOptions};
use hypzero::{ComplexRational, Error, ParameterSchedule};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

type Check = std::result::Result<String, String>;

fn cr(s: &str) -> ComplexRational {
    s.parse().unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> ComplexRational {
    let den = |rng: &mut ChaCha8Rng| rng.gen_range(1..=6);
    ComplexRational::from_parts(
        (rng.gen_range(-span..=span), den(rng)),
        (rng.gen_range(-span..=span), den(rng)),
    )
}

fn random_schedule(rng: &mut ChaCha8Rng) -> ParameterSchedule {
    let b = rng.gen_range(0..=2);
    let mut alphas = vec![ComplexRational::from_int(-1)];
    let mut cs = vec![ComplexRational::zero()];
    for _ in 0..b {
        alphas.push(random_rational(rng, 4));
        cs.push(random_rational(rng, 4));
    }
    let betas = (0..b).map(|_| random_rational(rng, 4)).collect();
    let ds = (0..b).map(|_| random_rational(rng, 4)).collect();
    ParameterSchedule::new(alphas, cs, betas, ds).unwrap()
}

fn two_f_one() -> ParameterSchedule {
    // 2F1(−n, n + 1; n + 2; z)
    ParameterSchedule::lemniscate_family(cr("1"))
}

fn log2(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    e as f64 + m.abs().log2()
}

fn criterion1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut done = 0;
    while done < 20 {
        let s = random_schedule(&mut rng);
        let n = rng.gen_range(0..=20);
        let Ok(p) = build_polynomial(&s, n) else { continue };
        let r = apply_hypergeometric_operator(&p);
        if !r.is_empty() {
            return Err(format!("nonzero residual for n={n}, schedule hash {}", s.hash()));
        }
        done += 1;
    }
    Ok("20 random schedules annihilated exactly".into())
}

/// Term-by-term `Π (a_i)_k / Π (b_j)_k / k!` with Pochhammers multiplied out.
fn series_oracle(numer: &[ComplexRational], denom: &[ComplexRational], k: u32) -> ComplexRational {
    let rising = |a: &ComplexRational| {
        let mut acc = ComplexRational::one();
        for t in 0..k {
            acc = &acc * &(a + &ComplexRational::from_int(t as i64));
        }
        acc
    };
    let mut num = ComplexRational::one();
    for a in numer {
        num = &num * &rising(a);
    }
    let mut den = ComplexRational::from_int((1..=k as i64).product::<i64>().max(1));
    for b in denom {
        den = &den * &rising(b);
    }
    &num / &den
}

fn criterion2() -> Check {
    let s = ParameterSchedule::new(
        vec![cr("-1"), cr("0")],
        vec![cr("0"), cr("2")],
        vec![cr("0")],
        vec![cr("2")],
    )
    .unwrap();
    let p = build_polynomial(&s, 2).map_err(|e| e.to_string())?;
    let want = [cr("1"), cr("-4/3"), cr("1/2")];
    if p.coeffs != want {
        return Err(format!("2F1(-2,2;3) gave {:?}", p.coeffs));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 10 {
        let s = random_schedule(&mut rng);
        let n = rng.gen_range(1..=8);
        let Ok(p) = build_polynomial(&s, n) else { continue };
        if p.truncation.is_some() {
            continue;
        }
        let numer = s.numerator_params(n);
        let denom = s.denominator_params(n);
        for (k, c) in p.coeffs.iter().enumerate() {
            let o = series_oracle(&numer, &denom, k as u32);
            if *c != o {
                return Err(format!("coefficient {k} differs for schedule {}", s.hash()));
            }
        }
        done += 1;
    }
    Ok("(1, -4/3, 1/2) and 10 random cases match the series".into())
}

fn criterion3(measures: &[(u32, RootCountingMeasure)]) -> Check {
    let bound = -128.0;
    let mut parts = Vec::new();
    for (n, m) in measures {
        let p = build_polynomial(&two_f_one(), *n).unwrap();
        let worst = m.worst_residual_log2();
        let v = vieta_check(&p.coeffs, m).map_err(|e| e.to_string())?;
        let dev = log2(&v.max_deviation());
        if m.precision_bits != 512 || worst >= bound || dev >= bound {
            return Err(format!(
                "n={n}: precision {} residual 2^{worst:.0} vieta 2^{dev:.0}",
                m.precision_bits
            ));
        }
        parts.push(format!("n={n}: residual 2^{worst:.0}, vieta 2^{dev:.0}"));
    }
    Ok(parts.join("; "))
}

fn criterion4() -> Check {
    let s = ParameterSchedule::lemniscate_family(cr("1/2-i"));
    let p = build_polynomial(&s, 50).unwrap();
    let m = find_roots(&p, 256).map_err(|e| e.to_string())?;
    let qp = p.to_qpoly();
    let dq = qp.derivative();
    let nq = ComplexRational::from_int(50);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 100 {
        let z = ComplexRational::from_parts(
            (rng.gen_range(-3000..=3000), 1000),
            (rng.gen_range(-3000..=3000), 1000),
        );
        let zb = BigComplex::from_rational(256, &z);
        let c = match m.cauchy_transform_at(&zb) {
            Ok(c) => c,
            Err(Error::Pole { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let pz = qp.eval(&z);
        let exact = &dq.eval(&z) / &(&nq * &pz);
        let d = c.dist(&BigComplex::from_rational(256, &exact)).to_f64();
        worst = worst.max(d);
        tested += 1;
    }
    if worst < 1e-20 {
        Ok(format!("max difference {worst:.1e} over 100 points"))
    } else {
        Err(format!("max difference {worst:.1e}"))
    }
}

fn criterion5() -> Check {
    let tails: [&[&str]; 5] = [&["1"], &["1/2-i"], &["2+i"], &["i", "1+2i"], &["1-5i", "7+i"]];
    for t in tails {
        let tail: Vec<ComplexRational> = t.iter().map(|s| cr(s)).collect();
        let r = verify_prop3(&ParameterSchedule::degenerate_family(&tail)).map_err(|e| e.to_string())?;
        if !r.all_vanish() {
            return Err(format!("nonzero substitution for {t:?}"));
        }
    }
    Ok("rational branches annihilate A(z,w) for A = 2 and 3".into())
}

fn criterion6() -> Check {
    let prec = 256;
    let tol = pow2(prec, -200);
    let mut parts = Vec::new();
    for k in [1i64, 2] {
        let s = ParameterSchedule::lemniscate_family(ComplexRational::from_int(k));
        let curve = build_curve(&s).unwrap();
        let bp = branch_points(&curve, &s, prec).map_err(|e| e.to_string())?;
        let want = ComplexRational::from_ratio(k, k + 1);
        if bp.points.len() != 1 || bp.points[0].exact.as_ref() != Some(&want) {
            return Err(format!("k={k}: branch points {:?}", bp.values()));
        }
        let zeros = discriminant_zeros(&discriminant(&curve).unwrap(), prec).map_err(|e| e.to_string())?;
        let target = BigComplex::from_rational(prec, &want);
        if zeros.len() != 1 || zeros[0].dist(&target) >= tol {
            return Err(format!("k={k}: discriminant zeros {zeros:?}"));
        }
        parts.push(format!("k={k}: {}", want));
    }
    // |p^k (1 − p)| at p = 1/2, k = 1
    let p = ComplexRational::from_ratio(1, 2);
    let level = &p * &(&ComplexRational::one() - &p);
    if level != ComplexRational::from_ratio(1, 4) {
        return Err(format!("lemniscate constant {level}"));
    }
    parts.push("constant 1/4".into());
    Ok(parts.join(", "))
}

fn criterion7() -> Check {
    let sys = HarmonicSystem::new(&two_f_one()).map_err(|e| e.to_string())?;
    let opts = TraceOptions {
        step: 0.005,
        ..Default::default()
    };
    let c = trace_level_curve(&sys, (1, 2), Complex64::new(1.2, 0.0), &opts).map_err(|e| e.to_string())?;
    let worst = c
        .points
        .iter()
        .map(|z| ((z * (1.0 - z)).norm() - 0.25).abs())
        .fold(0.0, f64::max);
    if worst >= 1e-10 || !c.closed {
        return Err(format!("closed={} worst residual {worst:.1e}", c.closed));
    }
    match trace_level_curve(&sys, (1, 2), Complex64::new(0.5, 0.0), &opts) {
        Err(Error::CriticalSeed(cp)) if (cp.z - 0.5).norm() < 1e-12 => {}
        other => return Err(format!("seed at 1/2 gave {other:?}")),
    }
    let hits_saddle = c.saddles().iter().any(|s| (s - 0.5).norm() < 1e-12);
    if !hits_saddle {
        return Err("trace did not stop at the saddle 1/2".into());
    }
    Ok(format!(
        "{} points, worst residual {worst:.1e}, closed through the saddle 1/2",
        c.points.len()
    ))
}

fn fine_trace() -> TraceOptions {
    TraceOptions {
        step: 0.002,
        ..Default::default()
    }
}

fn distances_k1(measures: &[(u32, RootCountingMeasure)]) -> Result<Vec<DistanceReport>, String> {
    let sys = HarmonicSystem::new(&two_f_one()).map_err(|e| e.to_string())?;
    let lp = loop_around_one(&sys, &fine_trace()).map_err(|e| e.to_string())?;
    measures
        .iter()
        .map(|(_, m)| zero_curve_distance(m, &lp, Restriction::ReGreater(0.5)).map_err(|e| e.to_string()))
        .collect()
}

fn criterion8(measures: &[(u32, RootCountingMeasure)]) -> Check {
    let r = distances_k1(measures)?;
    let maxes: Vec<f64> = r.iter().map(|d| d.max).collect();
    let text = format!(
        "max distances {:.4} / {:.4} / {:.4}",
        maxes[0], maxes[1], maxes[2]
    );
    if maxes[1] < maxes[0] && maxes[2] < maxes[1] && maxes[2] <= 0.5 * maxes[0] {
        Ok(text)
    } else {
        Err(text)
    }
}

fn criterion9() -> Check {
    let mut parts = Vec::new();
    for a in ["1/2-i", "2+i"] {
        let s = ParameterSchedule::lemniscate_family(cr(a));
        let sys = HarmonicSystem::new(&s).map_err(|e| e.to_string())?;
        let lp = loop_around_one(&sys, &fine_trace()).map_err(|e| e.to_string())?;
        let restriction = Restriction::loop_half_plane(sys.alpha(2));
        let mut maxes = Vec::new();
        for n in [10, 50, 100] {
            let m = find_roots_adaptive(&build_polynomial(&s, n).unwrap(), 512).map_err(|e| e.to_string())?;
            maxes.push(
                zero_curve_distance(&m, &lp, restriction)
                    .map_err(|e| e.to_string())?
                    .max,
            );
        }
        let ok = maxes.windows(2).all(|w| w[1] < w[0]);
        let text = format!("alpha={a}: {:.4} / {:.4} / {:.4}", maxes[0], maxes[1], maxes[2]);
        if !ok {
            return Err(text);
        }
        parts.push(text);
    }
    Ok(parts.join("; "))
}

fn criterion10(measures: &[(u32, RootCountingMeasure)]) -> Check {
    let s = two_f_one();
    let sys = HarmonicSystem::new(&s).map_err(|e| e.to_string())?;
    let lp = loop_around_one(&sys, &fine_trace()).map_err(|e| e.to_string())?;
    let pts = label_test_points(&sys, &lp, &[Complex64::new(2.0, 0.0), Complex64::new(1.1, 0.0)])
        .map_err(|e| e.to_string())?;
    let refs: Vec<(u32, &RootCountingMeasure)> = measures.iter().map(|(n, m)| (*n, m)).collect();
    let r = cauchy_convergence_with(&s, &refs, &pts).map_err(|e| e.to_string())?;
    let fmt = |k: usize| {
        r.rows
            .iter()
            .map(|row| row.deviations[k].map_or("excluded".to_string(), |d| format!("{d:.2e}")))
            .collect::<Vec<_>>()
            .join(" / ")
    };
    let text = format!(
        "z=2 ({:?}): {}; z=1.1 ({:?}): {}",
        pts[0].side,
        fmt(0),
        pts[1].side,
        fmt(1)
    );
    let defined = r
        .rows
        .iter()
        .all(|row| row.deviations.iter().all(Option::is_some));
    if defined && r.strictly_decreasing() {
        Ok(text)
    } else {
        Err(text)
    }
}

fn criterion11() -> Check {
    let s = ParameterSchedule::degenerate_family(&[cr("i"), cr("1+2i")]);
    let m = find_roots_adaptive(&build_polynomial(&s, 100).unwrap(), 512).map_err(|e| e.to_string())?;
    let sys = HarmonicSystem::new(&s).map_err(|e| e.to_string())?;
    let grid = classify_regions(&sys, Rect::new(-1.0, 2.0, -1.5, 1.5), 400).map_err(|e| e.to_string())?;
    let r = conjecture2_report(&m, &grid, default_epsilon(&grid), 20_000, 11);
    let text = format!(
        "score {:.3} (K∩D {:.3}), null {:.4} ± {:.4}, ratio {:.1}",
        r.score, r.score_in_domain, r.null.fraction, r.null.sigma, r.ratio
    );
    if r.ratio >= 5.0 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn ladder() -> Result<Vec<(u32, RootCountingMeasure)>, String> {
    [25u32, 50, 100]
        .iter()
        .map(|&n| {
            let p = build_polynomial(&two_f_one(), n).map_err(|e| e.to_string())?;
            Ok((n, find_roots(&p, 512).map_err(|e| e.to_string())?))
        })
        .collect()
}

fn write_run(dir: &PathBuf, measures: &[(u32, RootCountingMeasure)]) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    for (n, m) in measures {
        std::fs::write(dir.join(format!("roots_n{n}.txt")), m.export()).map_err(|e| e.to_string())?;
    }
    for d in distances_k1(measures)? {
        let json = serde_json::to_string_pretty(&d).map_err(|e| e.to_string())?;
        std::fs::write(dir.join(format!("distance_n{}.json", d.n)), json).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn criterion12(first: &[(u32, RootCountingMeasure)]) -> Check {
    let base = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&base);
    let (a, b) = (base.join("run-a"), base.join("run-b"));
    write_run(&a, first)?;
    // second run from scratch on a single thread
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let second = pool.install(ladder)?;
    pool.install(|| write_run(&b, &second))?;
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(name)).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{} differs between runs", name.to_string_lossy()));
        }
    }
    Ok(format!(
        "{} data files byte-identical across thread counts",
        names.len()
    ))
}

fn main() {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, r: Check| {
        let (tag, detail) = match r {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {id:>2} {name}: {detail} [{:.1}s]",
            start.elapsed().as_secs_f64()
        );
    };

    report(1, "exactness gate", criterion1());
    report(2, "series oracle", criterion2());
    let measures = ladder();
    let measures_ok = measures.as_ref().map_err(Clone::clone);
    report(
        3,
        "root certification",
        measures_ok.clone().and_then(|m| criterion3(m)),
    );
    report(4, "Cauchy transform identity", criterion4());
    report(5, "rational branches", criterion5());
    report(6, "branch points", criterion6());
    report(7, "level tracer", criterion7());
    report(
        8,
        "clustering on the lemniscate",
        measures_ok.clone().and_then(|m| criterion8(m)),
    );
    report(9, "loop clustering for complex slopes", criterion9());
    report(
        10,
        "Cauchy transform convergence",
        measures_ok.clone().and_then(|m| criterion10(m)),
    );
    report(11, "concentration near K", criterion11());
    report(12, "determinism", measures_ok.and_then(|m| criterion12(m)));

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
