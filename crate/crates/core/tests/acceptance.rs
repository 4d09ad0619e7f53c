//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use deephole::corpus;
use deephole::counting::{bound_ht_count, enumerate_pq, enumerate_pq_serial, FieldSignature};
use deephole::isogeny::{isogeny_chain, j_invariant};
use deephole::sequence::{deep_hole_sequence, is_well_rounded, DeepHoleSequence};
use deephole::{ExactReal, Lattice2, Tau};

const SEED: u64 = 20240601;

const FIXED_POINT_BUDGET: Duration = Duration::from_millis(1);
const PROPERTY_COUNT: usize = 500;
const PROPERTY_BUDGET: Duration = Duration::from_secs(10);
const SEQUENCE_COUNT: usize = 1000;
const SEQUENCE_B_MAX: f64 = 1048576.0;
/// Terminal heights up to this many bits are also classified by reduction.
const REDUCTION_CHECK_BITS: u32 = 1 << 16;
const GEOMETRY_COUNT: usize = 500;
const RATIO_4000: (f64, f64) = (0.98, 1.02);
const RATIO_8000: (f64, f64) = (0.99, 1.01);
const COUNT_BUDGET: Duration = Duration::from_secs(30);
const J_TERMS: usize = 40;
const J_FIXED_TOL: f64 = 1e-3;
const J_IM_TOL: f64 = 1e-6;
const J_INTERVAL_TOL: f64 = 1e-6;
const J_SEQUENCES: usize = 200;
const J_B_MAX: f64 = 60.0;
const BOUND_REL_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn tau(s: &str) -> Tau {
    s.parse().expect("literal")
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn fixed_points() -> Outcome {
    // warm up allocator and lazy statics before timing
    for s in ["i", "1/2 + (1/2)*sqrt(3)i"] {
        let seq = deep_hole_sequence(&tau(s)).map_err(err)?;
        seq.terminal().lattice().f_representative().map_err(err)?;
    }
    let mut worst = Duration::ZERO;
    for (input, rep) in [("i", "i"), ("1/2 + (1/2)*sqrt(3)i", "1/2 + (1/2)*sqrt(3)i")] {
        let t0 = tau(input);
        let ((seq, f), dt) = timed(|| {
            let seq = deep_hole_sequence(&t0);
            let f = seq
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|s| s.terminal().lattice().f_representative().map_err(err));
            (seq, f)
        });
        let seq = seq.map_err(err)?;
        check(seq.n == 1, format!("{input}: n = {}", seq.n))?;
        check(f? == tau(rep), format!("{input}: representative differs from {rep}"))?;
        check(dt < FIXED_POINT_BUDGET, format!("{input}: took {dt:?}"))?;
        worst = worst.max(dt);
    }
    Ok(format!("n = 1 for i and the hexagonal class, slowest {worst:?}"))
}

fn desk_sequence() -> Outcome {
    let seq = deep_hole_sequence(&tau("1/2 + 2i")).map_err(err)?;
    check(seq.n == 2, format!("n = {}", seq.n))?;
    check(seq.taus[1] == tau("1/2 + 15/16 i"), "tau_1")?;
    check(seq.taus[2] == tau("1/2 + 161/480 i"), "tau_2")?;
    let steps = isogeny_chain(&seq).map_err(err)?;
    let s0 = &steps[0];
    check(
        s0.d_k == 2 && s0.ell == 64 && s0.delta == 1920,
        format!("step 0 = ({}, {}, {})", s0.d_k, s0.ell, s0.delta),
    )?;
    for (k, s) in steps.iter().enumerate() {
        // independent route: scan for the order and read the index off coordinates
        let lat_k = seq.taus[k].lattice();
        let next = &seq.taus[k + 1];
        let point = |l: u32| {
            let q = ExactReal::from(l as i64);
            [next.a().try_mul(&q).unwrap(), next.b().try_mul(&q).unwrap()]
        };
        let ell = (1..=1_000_000u32)
            .find(|&l| lat_k.contains(&point(l)).unwrap())
            .ok_or("no order found by scan")?;
        check(s.ell == ell, format!("step {k}: order {} vs scan {ell}", s.ell))?;
        let e = ExactReal::from(ell as i64);
        let c1 = lat_k.coordinates(&[e.clone(), ExactReal::zero()]).map_err(err)?;
        let c2 = lat_k.coordinates(&point(ell)).map_err(err)?;
        let det = c1[0].try_mul(&c2[1]).and_then(|x| x.try_sub(&c1[1].try_mul(&c2[0])?)).map_err(err)?;
        check(
            det.abs() == ExactReal::from(s.delta.clone()),
            format!("step {k}: delta {} vs index {det}", s.delta),
        )?;
        check(s.delta > 0, format!("step {k}: delta not positive"))?;
        let fits = ExactReal::from(s.delta.clone()).cmp_exact(&s.bound_exact).map_err(err)?;
        check(fits != Ordering::Greater, format!("step {k}: delta above bound"))?;
    }
    Ok(format!(
        "(d, l, delta) = (2, 64, 1920) <= {:.3}; delta_1 = {} <= {:.3}",
        steps[0].bound, steps[1].delta, steps[1].bound
    ))
}

fn structure_theorem() -> Outcome {
    let corpus = corpus::arithmetic_corpus(SEED, PROPERTY_COUNT);
    let (counts, dt) = timed(|| -> Result<[usize; 3], String> {
        let mut counts = [0usize; 3];
        for (i, (tau0, l)) in corpus.iter().enumerate() {
            let red = l.reduce().map_err(err)?;
            let label = red.classify().map_err(err)?;
            let h = red.deep_hole_lattice().map_err(err)?;
            let field = red.field();
            check(
                h.field() == 1 || field == 1 || h.field() == field,
                format!("#{i}: field {field} -> {}", h.field()),
            )?;
            check(label.arithmetic, format!("#{i}: not arithmetic"))?;
            let h_wr = h.reduce().map_err(err)?.classify().map_err(err)?.well_rounded;
            if label.satisfies_wr_criterion {
                counts[0] += 1;
                check(h_wr, format!("#{i}: criterion holds but H(L) is not WR"))?;
            }
            if label.semi_stable {
                counts[1] += 1;
                check(h_wr, format!("#{i}: semi-stable but H(L) is not WR"))?;
            }
            if label.well_rounded {
                counts[2] += 1;
                let (fl, fh) = (l.f_representative().map_err(err)?, h.f_representative().map_err(err)?);
                check(fl == fh && fl == *tau0, format!("#{i}: {fl} vs {fh}"))?;
            }
        }
        Ok(counts)
    });
    let counts = counts?;
    check(counts.iter().all(|&c| c > 0), format!("vacuous antecedent: {counts:?}"))?;
    check(dt < PROPERTY_BUDGET, format!("took {dt:?}"))?;
    Ok(format!(
        "{PROPERTY_COUNT} lattices: {} criterion, {} semi-stable, {} WR; {dt:?}",
        counts[0], counts[1], counts[2]
    ))
}

fn check_halving(seq: &DeepHoleSequence) -> Result<(), String> {
    check(seq.n as u32 <= seq.applied_bound, format!("n = {} > {}", seq.n, seq.applied_bound))?;
    for k in 2..=seq.n {
        let half = seq.taus[k - 1].b().mul_pow2(-1);
        let o = seq.taus[k].b().cmp_exact(&half).map_err(err)?;
        check(o == Ordering::Less, format!("b_{k} >= b_{} / 2", k - 1))?;
    }
    Ok(())
}

fn termination() -> Outcome {
    let corpus = corpus::tau_corpus(SEED, SEQUENCE_COUNT, SEQUENCE_B_MAX);
    let (res, dt) = timed(|| -> Result<(usize, usize, usize, usize), String> {
        let (mut max_n, mut above_float, mut tight, mut reduced) = (0, 0, 0, 0);
        for t0 in &corpus {
            let seq = deep_hole_sequence(t0).map_err(|e| format!("{t0}: {e}"))?;
            check_halving(&seq).map_err(|e| format!("{t0}: {e}"))?;
            let last = seq.terminal();
            if last.b().coef().denom().significant_bits() + last.b().rat().denom().significant_bits()
                <= REDUCTION_CHECK_BITS
            {
                reduced += 1;
                check(is_well_rounded(last).map_err(err)?, format!("{t0}: terminal not WR by reduction"))?;
            }
            max_n = max_n.max(seq.n);
            if seq.n as f64 > seq.stated_bound {
                above_float += 1;
            }
            if seq.n as u32 == seq.applied_bound {
                tight += 1;
            }
        }
        Ok((max_n, above_float, tight, reduced))
    });
    let (max_n, above_float, tight, reduced) = res?;
    Ok(format!(
        "{SEQUENCE_COUNT} sequences, max n = {max_n}, n at ceiling {tight}, n above unrounded log {above_float}, \
         {reduced} terminals also reduced; {dt:?}"
    ))
}

fn deep_hole_geometry() -> Outcome {
    let mut r = corpus::rng(SEED);
    for i in 0..GEOMETRY_COUNT {
        let l: Lattice2 = corpus::random_lattice(&mut r).reduce().map_err(err)?;
        let z = l.fundamental_deep_hole().map_err(err)?;
        let mu2 = l.covering_radius_sq().map_err(err)?;
        let dist = |v: &[ExactReal; 2]| -> Result<ExactReal, String> {
            let dx = v[0].try_sub(&z[0]).map_err(err)?;
            let dy = v[1].try_sub(&z[1]).map_err(err)?;
            dx.square().try_add(&dy.square()).map_err(err)
        };
        let origin = [ExactReal::zero(), ExactReal::zero()];
        for (name, v) in [("0", &origin), ("x1", l.x1()), ("x2", l.x2())] {
            check(dist(v)? == mu2, format!("#{i}: |z - {name}|^2 differs from mu^2"))?;
        }
        check(l.in_fundamental_triangle(&z).map_err(err)?, format!("#{i}: z outside triangle"))?;
    }
    Ok(format!("{GEOMETRY_COUNT} reduced lattices, exact equidistance"))
}

fn counting() -> Outcome {
    let t = ExactReal::ratio(1, 2);
    let rat = FieldSignature::rationals();
    for (tm, want) in [(1u64, 1u64), (3, 2)] {
        let c = enumerate_pq_serial(&t, tm, false).map_err(err)?.count;
        check(c == want, format!("T = {tm}: count {c}, want {want}"))?;
    }
    let c4 = enumerate_pq_serial(&t, 4000, false).map_err(err)?.count;
    let r4 = c4 as f64 / bound_ht_count(&rat, 0.5, 4000.0).map_err(err)?;
    check(
        (RATIO_4000.0..=RATIO_4000.1).contains(&r4),
        format!("T = 4000: ratio {r4}"),
    )?;
    let (c8, dt) = timed(|| enumerate_pq_serial(&t, 8000, false));
    let c8 = c8.map_err(err)?.count;
    let r8 = c8 as f64 / bound_ht_count(&rat, 0.5, 8000.0).map_err(err)?;
    check(
        (RATIO_8000.0..=RATIO_8000.1).contains(&r8),
        format!("T = 8000: ratio {r8}"),
    )?;
    check(dt < COUNT_BUDGET, format!("T = 8000 serial took {dt:?}"))?;
    let par = enumerate_pq(&t, 8000, false).map_err(err)?.count;
    check(par == c8, format!("parallel {par} vs serial {c8}"))?;
    Ok(format!(
        "counts 1, 2; ratio {r4:.6} at T = 4000, {r8:.6} at T = 8000 (serial {dt:?})"
    ))
}

fn j_oracle() -> Outcome {
    let j_i = j_invariant(&tau("i"), 8).map_err(err)?;
    check((j_i.re - 1728.0).abs() < J_FIXED_TOL && j_i.im.abs() < J_FIXED_TOL, format!("j(i) = {} + {}i", j_i.re, j_i.im))?;
    let j_rho = j_invariant(&tau("1/2 + (1/2)*sqrt(3)i"), 8).map_err(err)?;
    check(j_rho.value().norm() < J_FIXED_TOL, format!("j(rho) = {} + {}i", j_rho.re, j_rho.im))?;

    let mut r = corpus::rng(SEED);
    let mut starts = vec![tau("1/2 + 2i")];
    starts.extend((0..J_SEQUENCES).map(|_| corpus::random_tau(&mut r, 3f64.sqrt() / 2.0, J_B_MAX)));
    let (mut tested, mut interior) = (0, 0);
    for t0 in &starts {
        let seq = deep_hole_sequence(t0).map_err(err)?;
        if seq.n < 2 {
            continue;
        }
        tested += 1;
        for k in 1..seq.n {
            let j = j_invariant(&seq.taus[k], J_TERMS).map_err(err)?;
            check(!j.overflow, format!("{t0}: overflow at k = {k}"))?;
            check(j.im.abs() < J_IM_TOL && j.re < 0.0, format!("{t0}: j(tau_{k}) = {} + {}i", j.re, j.im))?;
            interior += 1;
        }
        let rep = seq.terminal().lattice().f_representative().map_err(err)?;
        let j = j_invariant(&rep, J_TERMS).map_err(err)?;
        let jn = j.normalized();
        check(
            j.im.abs() < J_IM_TOL && (-J_INTERVAL_TOL..=1.0 + J_INTERVAL_TOL).contains(&jn.re),
            format!("{t0}: j/1728 at {rep} = {} + {}i", jn.re, jn.im),
        )?;
    }
    check(tested > 0, "no sequence with n >= 2")?;
    Ok(format!(
        "j(i) = {:.6}, |j(rho)| = {:.2e}; {tested} sequences, {interior} interior points",
        j_i.re,
        j_rho.value().norm()
    ))
}

fn bound_fixtures() -> Outcome {
    // (n, r1, r2, |disc|, t, T, value from an independent 30-digit zeta)
    let fixtures = [
        (2, 2, 0, 5, 0.5, 10.0, 1530.8312691498396),
        (3, 1, 1, 23, 2.0, 3.0, 18.92691858185799),
        (3, 3, 0, 49, 0.5, 4.0, 272.2768652819846),
        (5, 5, 0, 14641, 1.0 / 3.0, 2.0, 4.786415398427917),
    ];
    let mut worst = 0f64;
    for (n, r1, r2, d, t, tm, want) in fixtures {
        let sig = FieldSignature::new(n, r1, r2, d).map_err(err)?;
        let got = bound_ht_count(&sig, t, tm).map_err(err)?;
        let rel = ((got - want) / want).abs();
        check(rel < BOUND_REL_TOL, format!("({n},{r1},{r2},{d}): {got} vs {want}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("{} signatures, worst relative error {worst:.1e}", fixtures.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("trivial fixed points", fixed_points),
        ("exact desk sequence and isogeny steps", desk_sequence),
        ("structure theorem over arithmetic lattices", structure_theorem),
        ("termination bound", termination),
        ("deep-hole geometry", deep_hole_geometry),
        ("counting at t = 1/2", counting),
        ("j-invariant oracle", j_oracle),
        ("bound evaluator fixtures", bound_fixtures),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
