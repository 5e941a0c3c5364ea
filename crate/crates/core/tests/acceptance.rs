//! Acceptance gate: one PASS/FAIL line per criterion. Every comparison is
//! exact (tolerance 0); the runtime limits are wall-clock bounds.

use mseqcorr::cyclo::CycInt;
use mseqcorr::families::{self, Params, Prediction};
use mseqcorr::gf::{Elem, FieldCtx};
use mseqcorr::{arith, codes, expsums, lfsr, niho, search, spectra};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<(bool, Vec<String>), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ctx(p: u32, n: u32) -> Result<FieldCtx, String> {
    FieldCtx::canonical(p, n).map_err(|e| e.to_string())
}

/// Collects sub-check results for one criterion.
#[derive(Default)]
struct Checks {
    pass: bool,
    notes: Vec<String>,
    failures: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            pass: true,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, label: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.failures.push(label.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn done(self) -> Outcome {
        let mut lines = self.notes;
        lines.extend(self.failures.into_iter().map(|f| format!("failed: {f}")));
        Ok((self.pass, lines))
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Verifies every admissible point of `id` at `(p, n)`, or only `params`.
fn family(c: &mut Checks, id: &str, p: u32, n: u32, params: Option<Params>) -> Result<(), String> {
    let f = families::find(id).map_err(err)?;
    let k = ctx(p, n)?;
    let verdicts = match params {
        Some(ps) => vec![families::verify_point(&k, f, &ps).map_err(err)?],
        None => families::verify_all(&k, &[f]).map_err(err)?,
    };
    c.check(!verdicts.is_empty(), format!("{id} has no admissible point at p={p} n={n}"));
    for v in verdicts {
        let ps: Vec<String> = v.params.iter().map(|(k, x)| format!("{k}={x}")).collect();
        c.check(v.pass, format!("{id} p={p} n={n} {} d={}: {:?}", ps.join(","), v.d, v.diff));
    }
    Ok(())
}

fn within(c: &mut Checks, start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    c.note(format!("{what}: {:.1}s (limit {}s)", t.as_secs_f64(), limit.as_secs()));
    c.check(t <= limit, format!("{what} took {:.1}s", t.as_secs_f64()));
}

/// One representative decimation per distinct m-sequence.
fn coset_leaders(k: &FieldCtx) -> Vec<u64> {
    let m = k.group_order() as u64;
    (1..m.max(2))
        .filter(|&d| arith::gcd(d, m) == 1)
        .filter(|&d| (1..k.n()).all(|j| arith::mul_mod(d, k.pow_p(j) as u64 % m, m) >= d))
        .collect()
}

fn golomb() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let grid = (2..=12).map(|n| (2, n)).chain((2..=7).map(|n| (3, n))).chain((2..=4).map(|n| (5, n)));
    let mut sequences = 0;
    for (p, n) in grid {
        let k = ctx(p, n)?;
        let base = lfsr::generate_trace(&k);
        for d in coset_leaders(&k) {
            let s = lfsr::decimate(&base, d).map_err(err)?;
            let r = lfsr::check_golomb(&s);
            c.check(r.all_hold(), format!("p={p} n={n} d={d}: {r:?}"));
            c.check((p == 2) == r.runs.is_some(), format!("run property scope p={p}"));
            sequences += 1;
        }
    }
    c.note(format!("{sequences} m-sequences"));
    within(&mut c, start, Duration::from_secs(60), "runtime");
    c.done()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let grid = (2..=10).map(|n| (2, n)).chain((2..=5).map(|n| (3, n))).chain((2..=3).map(|n| (5, n)));
    let mut count = 0;
    for (p, n) in grid {
        let k = ctx(p, n)?;
        let m = k.group_order() as u64;
        for d in (1..m).filter(|&d| arith::gcd(d, m) == 1) {
            let fast = spectra::spectrum_with(&k, d, spectra::Method::Fast).map_err(err)?;
            let naive = spectra::spectrum_with(&k, d, spectra::Method::Naive).map_err(err)?;
            c.check(fast.same_distribution(&naive), format!("p={p} n={n} d={d}"));
            count += 1;
        }
    }
    c.note(format!("{count} decimations"));
    within(&mut c, start, Duration::from_secs(600), "runtime");
    c.done()
}

fn three_valued() -> Outcome {
    let mut c = Checks::new();
    let k = |v: i64| Some(families::params(&[("k", v)]));
    family(&mut c, "gold", 2, 5, k(1))?;
    family(&mut c, "gold", 2, 9, k(3))?;
    family(&mut c, "kasami-welch", 2, 9, k(3))?;
    for n in [6, 10] {
        family(&mut c, "cusick-dobbertin-a", 2, n, None)?;
        family(&mut c, "cusick-dobbertin-b", 2, n, None)?;
    }
    for n in [5, 7, 9] {
        family(&mut c, "welch", 2, n, None)?;
    }
    for n in [3, 5] {
        family(&mut c, "ternary-welch", 3, n, None)?;
    }
    // smallest admissible n | 4k - 1 is n = 3, k = 1
    family(&mut c, "katz-langevin", 3, 3, k(1))?;
    family(&mut c, "katz-langevin", 3, 5, k(4))?;
    family(&mut c, "katz-langevin", 3, 7, k(2))?;
    for p in [3, 5] {
        family(&mut c, "trachtenberg-half", p, 3, None)?;
        family(&mut c, "trachtenberg-kw", p, 3, None)?;
    }
    c.done()
}

fn four_valued() -> Outcome {
    let mut c = Checks::new();
    let f = families::find("niho-4val-unified").map_err(err)?;
    for (n, r) in [(8, 1), (8, 2), (12, 1)] {
        for sign in [-1, 1] {
            let ps = families::params(&[("r", r), ("sign", sign)]);
            let inst = match f.instance(2, n, &ps) {
                Ok(i) => i,
                Err(e) => {
                    c.note(format!("n={n} r={r} sign={sign}: {e}"));
                    continue;
                }
            };
            if let Prediction::Distribution { entries } = &inst.prediction {
                let sum: i128 = entries.iter().map(|(&v, &k)| v as i128 * k as i128).sum();
                c.check(sum == 1, format!("normalized moment n={n} r={r}: {sum}"));
                c.note(format!("n={n} r={r} sign={sign} d={}: {entries:?}", inst.d));
            }
            family(&mut c, "niho-4val-unified", 2, n, Some(ps))?;
        }
    }
    family(&mut c, "helleseth-2pm", 7, 2, None)?;
    family(&mut c, "zhang-xia-ternary", 3, 3, None)?;
    c.done()
}

fn five_valued() -> Outcome {
    let mut c = Checks::new();
    for n in [8, 12] {
        family(&mut c, "helleseth-2m3", 2, n, None)?;
    }
    for n in [4, 12] {
        family(&mut c, "dobbertin-4r", 2, n, None)?;
    }
    for id in ["kasami-frac-2t", "kasami-frac-5t", "kasami-frac-5t-3t"] {
        for n in [5, 7, 9] {
            family(&mut c, id, 2, n, None)?;
        }
    }
    let tau4 = families::tau(4);
    c.check(
        tau4 == BigRational::new(BigInt::from(17), BigInt::from(16)),
        format!("tau_4 = {tau4}"),
    );
    let inst = families::find("xia-s3-even").map_err(err)?.instance(2, 8, &Params::new()).map_err(err)?;
    c.check(inst.d == 46, format!("xia s=3 m=4 d = {}", inst.d));
    family(&mut c, "xia-s3-even", 2, 8, None)?;
    for n in [4, 8] {
        family(&mut c, "hkl-s4", 2, n, None)?;
    }
    for m in [1, 3, 4] {
        family(&mut c, "xia-ternary-s3", 3, 2 * m, None)?;
    }
    family(&mut c, "helleseth-half", 5, 2, None)?;
    family(&mut c, "helleseth-half", 3, 4, None)?;
    c.done()
}

fn six_valued() -> Outcome {
    let mut c = Checks::new();
    family(&mut c, "helleseth-1978", 2, 8, None)?;
    let k8 = ctx(2, 8)?;
    let coset = families::coset_spectrum_method(&k8, 13, 5).map_err(err)?;
    let direct = spectra::spectrum(&k8, 13).map_err(err)?;
    c.check(coset.same_distribution(&direct), "coset method at n=8 d=13");

    for m in [3u32, 5] {
        family(&mut c, "dfhr-s3-odd", 2, 2 * m, None)?;
        let r = expsums::r_sum(&ctx(2, m)?).map_err(err)?;
        let computed = spectra::spectrum(&ctx(2, 2 * m)?, 3 * ((1 << m) - 1) + 1).map_err(err)?;
        let by_r = families::dfhr_r_table(m, r);
        let ok = match &by_r {
            Ok(t) => computed.int_entries() == Some(t.iter().map(|(&v, &k)| (v, k)).collect()),
            Err(_) => false,
        };
        c.check(ok, format!("R-form table at m={m} with direct R = {r}: {by_r:?}"));
    }
    for m in [3u32, 5, 7] {
        let r = expsums::r_sum(&ctx(2, m)?).map_err(err)?;
        let scaled = families::tau(m) * BigRational::from_integer(BigInt::from(1u64 << m));
        let link = -scaled + BigRational::from_integer(BigInt::from((2u64 << m) + 1));
        c.check(
            BigRational::from_integer(BigInt::from(r)) == link,
            format!("R-link at m={m}: direct R = {r}, -2^m tau_m + 2^(m+1) + 1 = {link}"),
        );
    }

    let f = families::find("helleseth-third").map_err(err)?;
    let mut branches = BTreeSet::new();
    // (2, 6) is the smallest point on the f = 0 branch
    for (p, n) in [(2u32, 4u32), (5, 2), (2, 6)] {
        for (ps, inst) in f.points(p, n) {
            let m = (p as u64).pow(n) - 1;
            let i = ps["i"] as u32;
            branches.insert((m / 3 % 3) * (p as u64).pow(i) % 3);
            c.note(format!("helleseth-third p={p} n={n} i={i} d={}", inst.d));
        }
        family(&mut c, "helleseth-third", p, n, None)?;
    }
    c.check(branches == BTreeSet::from([0, 1]), format!("f branches covered: {branches:?}"));
    family(&mut c, "helleseth-2003", 3, 4, None)?;
    c.done()
}

fn moments() -> Outcome {
    let mut c = Checks::new();
    let grid = (3..=8).map(|n| (2, n)).chain((2..=4).map(|n| (3, n)));
    for (p, n) in grid {
        let k = ctx(p, n)?;
        let q = BigInt::from(k.order());
        for class in search::canonical_classes(&k, None).map_err(err)? {
            let d = class.representative;
            c.check(
                class.spectrum.weighted_sum() == CycInt::one(p),
                format!("sum of C at p={p} n={n} d={d}"),
            );
            let r = spectra::moment_identity_check(&k, d, d ^ 0x5eed).map_err(err)?;
            c.check(r.all_hold(), format!("shift products p={p} n={n} d={d}"));
            for l in 1..=4u32 {
                let big_n = spectra::solution_count_n(&k, d, l).map_err(err)?;
                let lhs = spectra::moment(&class.spectrum, l).scale(&(&q - 1));
                let rhs = CycInt::from_int(p, &q * &q * big_n - q.pow(l));
                c.check(lhs == rhs, format!("power moment l={l} at p={p} n={n} d={d}"));
            }
        }
    }
    for m in [2u32, 3, 4] {
        let k = ctx(2, 2 * m)?;
        let d = (1u64 << m) + 3;
        let formula = (1i64 << m) + if m % 2 == 0 { -1 } else { 1 } + 1;
        let m1 = spectra::difference_count(&k, d, Elem::ONE) as i64;
        let b3 = spectra::b_l_count(&k, d, 3).map_err(err)? as i64;
        c.note(format!("m={m}: formula {formula}, M_1 {m1}, nonzero b_3 {b3}"));
        c.check(formula == m1 && formula == b3 + 2, format!("b_3 at m={m}"));
    }
    c.done()
}

fn niho_identity() -> Outcome {
    let mut c = Checks::new();
    let grid = [2u32, 3, 4, 5]
        .iter()
        .flat_map(|&m| [2i64, 3, 4].map(|s| (2u32, m, s)))
        .chain([1u32, 2].iter().flat_map(|&m| [2i64, 3].map(|s| (3u32, m, s))));
    for (p, m, s) in grid {
        let r = niho::check_identity(&ctx(p, 2 * m)?, s).map_err(err)?;
        c.check(r.holds(), format!("p={p} m={m} s={s}: {} mismatches", r.mismatches.len()));
    }
    c.done()
}

fn open_problems() -> Outcome {
    let mut c = Checks::new();
    let grid = (2..=14).map(|n| (2, n)).chain((2..=7).map(|n| (3, n)));
    for (p, n) in grid {
        let k = ctx(p, n)?;
        let classes = search::canonical_classes(&k, None).map_err(err)?;
        let r = search::check_minus_one(&k, &classes);
        c.check(r.holds(), format!("-1 missing at p={p} n={n}: {:?}", r.counterexamples));
        if p == 2 {
            let t = search::three_valued_completeness(&k, &classes);
            c.check(t.exact(), format!("completeness n={n}: {:?} {:?}", t.unexplained, t.missing));
        }
        if [(2, 4), (2, 8), (3, 4)].contains(&(p, n)) {
            let three = classes.iter().filter(|x| x.value_count() == 3).count();
            c.check(three == 0, format!("{three} three-valued classes at p={p} n={n}"));
        }
    }
    for (n, k) in [(5, 2), (7, 2), (7, 3), (9, 2), (11, 3), (13, 5)] {
        let r = expsums::op6_check(&ctx(2, n)?, k).map_err(err)?;
        c.check(r.holds(), format!("op6 n={n} k={k}: {r:?}"));
    }
    c.done()
}

fn code_weights() -> Outcome {
    let mut c = Checks::new();
    for (p, n, d) in [(2, 5, 3), (2, 6, 5), (3, 3, 7)] {
        let k = ctx(p, n)?;
        let fast = codes::weight_distribution_via_walsh(&k, d).map_err(err)?;
        let brute = codes::weight_distribution_brute(&k, d);
        c.check(fast == brute, format!("weights p={p} n={n} d={d}"));
    }
    for m in 2..=10 {
        let r = expsums::kloosterman_check(&ctx(2, m)?);
        c.check(r.not_divisible.is_empty(), format!("K mod 4 at m={m}: {:?}", r.not_divisible));
    }
    for m in 1..=6 {
        let r = expsums::kloosterman_check(&ctx(3, m)?);
        c.check(r.not_divisible.is_empty(), format!("K mod 3 at m={m}: {:?}", r.not_divisible));
    }
    c.done()
}

fn performance() -> Outcome {
    let mut c = Checks::new();
    let start = Instant::now();
    let k = ctx(2, 20)?;
    let t = spectra::spectrum_with(&k, 7, spectra::Method::Fast).map_err(err)?;
    c.check(t.total() == (1 << 20) - 1, "n=20 total");
    within(&mut c, start, Duration::from_secs(300), "n=20 d=7");

    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().map_err(err)?;
    let start = Instant::now();
    let t = pool.install(|| -> Result<_, String> {
        let k = ctx(2, 24)?;
        spectra::spectrum_with(&k, 11, spectra::Method::Fast).map_err(err)
    })?;
    c.check(t.total() == (1 << 24) - 1, "n=24 total");
    c.check(t.weighted_sum() == CycInt::one(2), "n=24 sum of C");
    within(&mut c, start, Duration::from_secs(3600), "n=24 d=11, 8 threads");
    c.done()
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Golomb properties of every m-sequence on the grid", golomb),
        ("fast transform equals naive sum", oracle_equivalence),
        ("three-valued families", three_valued),
        ("four-valued families", four_valued),
        ("five-valued families", five_valued),
        ("six-valued families", six_valued),
        ("moment identities", moments),
        ("Niho root-count identity", niho_identity),
        ("open-problem evidence", open_problems),
        ("code weights and Kloosterman divisibility", code_weights),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, lines) = f().unwrap_or_else(|e| (false, vec![format!("error: {e}")]));
        println!(
            "criterion {:>2} {} {name} [tolerance 0, exact] ({:.1}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for l in lines {
            println!("    {l}");
        }
        failed += usize::from(!pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
