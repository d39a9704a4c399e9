//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! A criterion may fail only with exactly the discrepancy recorded in
//! `KNOWN_FAILURES`; anything else makes the run exit nonzero.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclolab::arith::{divisors, inverse_phi, moebius, profile};
use cyclolab::ball::round_significant;
use cyclolab::bounds::{check_complex_bounds, real_bounds_grid, GaussianPoint};
use cyclolab::nearmiss::{limit_constants, limit_family_root, near_miss_root, alpha_root, table_row, Family, TABLE1_ROWS};
use cyclolab::ordering::{certify_consecutive, compare_large, gap, q_part};
use cyclolab::par::{self, Mode};
use cyclolab::poly::{CyclotomicTable, IntPoly, Rational};
use cyclolab::rationalcheck::{negation_index, value_at, verify_integer_coincidences, verify_rational_coincidences, Coincidence};
use cyclolab::roots::{quarter_lift_check, scan_complex, scan_real};

/// Significant digits to which the near-miss gap columns must agree.
const GAP_SIG_DIGITS: u32 = 12;
/// Decimal places of the printed β and α columns.
const TABLE_PLACES: u32 = 14;
/// Working precision for the complex scan, in bits.
const COMPLEX_BITS: u32 = 256;
const COMPLEX_SAMPLES: usize = 500;
const SAMPLE_SEED: u64 = 0x5eed_c1c1;

/// Criteria allowed to fail, with the exact mismatch they must report.
const KNOWN_FAILURES: &[(u32, &str)] = &[
    (
        3,
        "beta(5,19) printed 1.9835169859533 computed 1.98358169859533; \
         inv_gap(5,19) printed 873492.901563983 computed 873492.901538466; \
         scaled_gap(5,19) printed 1.66605549156949 computed 1.66605549152082; \
         inv_gap(7,13) printed 15799.3712194387 computed 15799.3712194799; \
         scaled_gap(7,13) printed 1.92863418206039 computed 1.92863418206542; \
         inv_gap(7,19) printed 999614.177077968 computed 999614.177208405; \
         scaled_gap(7,19) printed 1.90661273398964 computed 1.90661273423844",
    ),
    (9, "modulus sqrt(2) also attained at {1,6}"),
];

type Verdict = Result<String, String>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn decimal(s: &str) -> Rational {
    let (sign, body) = s.strip_prefix('-').map_or((1, s), |b| (-1, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    Rational::new(digits * sign, num_traits::pow(BigInt::from(10), frac.len()))
}

fn sig(s: &str, digits: u32) -> String {
    let r = decimal(s);
    round_significant(&r, &r, digits).unwrap()
}

fn criterion_1() -> Verdict {
    let got = (1..=6).map(|m| value_at(m, 2)).collect::<cyclolab::Result<Vec<_>>>().map_err(|e| e.to_string())?;
    if got == [1, 3, 7, 5, 31, 3] {
        Ok(format!("Φ_1..Φ_6 at 2 = {got:?}"))
    } else {
        Err(format!("Φ_1..Φ_6 at 2 = {got:?}"))
    }
}

fn criterion_2(mode: Mode) -> Verdict {
    let rep = scan_real(120, 6, mode).map_err(|e| e.to_string())?;
    let expected_pairs = 120 * 119 / 2;
    let exceptions: Vec<_> = rep
        .records
        .iter()
        .filter(|r| r.certificate.as_ref().is_some_and(|c| c.sanctioned))
        .map(|r| (r.m, r.n))
        .collect();
    let ok = rep.holds
        && rep.pairs == expected_pairs
        && rep.certified == expected_pairs
        && rep.violations.is_empty()
        && exceptions == [(2, 6)];
    let line = format!(
        "{} pairs certified, exceptions {exceptions:?}, largest |x| {:?}, smallest nonzero |x| {:?}",
        rep.certified, rep.max_abs_nonzero, rep.min_abs_nonzero
    );
    if ok { Ok(line) } else { Err(format!("{line}, violations {:?}", rep.violations)) }
}

const PRINTED_TABLE: [(u64, u64, &str, &str, &str, &str); 10] = [
    (3, 5, "1.90040519768798", "1.92756197548293", "36.8232198808926", "1.15072562127789"),
    (3, 7, "1.92172452309274", "1.92756197548293", "171.307607010499", "1.33834067976952"),
    (3, 11, "1.92717413781454", "1.92756197548293", "2578.39833911685", "1.25898356402190"),
    (3, 13, "1.92745816209718", "1.92756197548293", "9632.66916662882", "1.17586293537949"),
    (5, 7, "1.97926028654319", "1.98358284342433", "231.344555433128", "1.80737933932131"),
    (5, 13, "1.98351307615232", "1.98358284342433", "14333.3682296163", "1.74967873896684"),
    (5, 19, "1.9835169859533", "1.98358284342433", "873492.901563983", "1.66605549156949"),
    (7, 11, "1.99577873757697", "1.99603117973541", "3961.30347707098", "1.93423021341356"),
    (7, 13, "1.99596788607732", "1.99603117973541", "15799.3712194387", "1.92863418206039"),
    (7, 19, "1.99603017934944", "1.99603117973541", "999614.177077968", "1.90661273398964"),
];

fn criterion_3(mode: Mode) -> Verdict {
    assert_eq!(PRINTED_TABLE.map(|r| (r.0, r.1)), TABLE1_ROWS);
    let rows = par::map(mode, &PRINTED_TABLE, |&(p, q, ..)| -> cyclolab::Result<_> {
        Ok((table_row(p, q, TABLE_PLACES)?, table_row(p, q, GAP_SIG_DIGITS - 1)?))
    });
    let mut mismatches = Vec::new();
    let mut alpha_index_note = Vec::new();
    for (printed, row) in PRINTED_TABLE.iter().zip(rows) {
        let (p, q, beta, alpha, inv, scaled) = *printed;
        let (full, short) = row.map_err(|e| e.to_string())?;
        if full.beta != beta {
            mismatches.push(format!("beta({p},{q}) printed {beta} computed {}", full.beta));
        }
        if full.alpha != alpha {
            mismatches.push(format!("alpha({p},{q}) printed {alpha} computed {}", full.alpha));
        }
        for (name, printed, computed, long) in [
            ("inv_gap", inv, &short.inv_gap, &full.inv_gap),
            ("scaled_gap", scaled, &short.scaled_gap, &full.scaled_gap),
        ] {
            if &sig(printed, GAP_SIG_DIGITS) != computed {
                mismatches.push(format!("{name}({p},{q}) printed {printed} computed {long}"));
            }
        }
        let doubled = alpha_root(2 * (p as usize - 1), TABLE_PLACES).map_err(|e| e.to_string())?.decimal;
        if doubled != alpha && !alpha_index_note.contains(&p) {
            alpha_index_note.push(p);
        }
    }
    let note = format!("printed alpha is the root of psi_(p+1); psi_(2(p-1)) differs for p in {alpha_index_note:?}");
    if mismatches.is_empty() { Ok(format!("all ten rows match; {note}")) } else { Err(mismatches.join("; ")) }
}

fn criterion_4() -> Verdict {
    let printed = [
        (11, 19, 209, 179, "1.99975454398254"),
        (11, 37, 407, 359, "1.99975550093366"),
        (13, 17, 221, 191, "1.99993512065828"),
        (17, 31, 527, 479, "1.99999618493891"),
    ];
    let mut bad = Vec::new();
    for (p, q, m, n, want) in printed {
        assert_eq!(p * q - p - q, n);
        assert_eq!(p * q, m);
        let got = near_miss_root(p, q, TABLE_PLACES).map_err(|e| e.to_string())?.decimal;
        if got != want {
            bad.push(format!("Φ_{m} − Φ_{n}: printed {want} computed {got}"));
        }
    }
    if bad.is_empty() { Ok("four largest roots match to 14 places".into()) } else { Err(bad.join("; ")) }
}

/// Printed constants end in "…"; the computed value, cut to the printed
/// length, must equal them either truncated or correctly rounded.
fn matches_printed(computed_more: &str, rounded: &str, printed: &str) -> bool {
    computed_more.starts_with(printed) || rounded == printed
}

fn criterion_5() -> Verdict {
    let places = |s: &str| s.split_once('.').unwrap().1.len() as u32;
    let (rho_p, sigma_p, prim_p) = ("-0.569840290998", "0.5284555592772", "0.51976982658213");
    let (rho, sigma) = limit_constants(places(rho_p) + 4).map_err(|e| e.to_string())?;
    let (rho_r, _) = limit_constants(places(rho_p)).map_err(|e| e.to_string())?;
    let (_, sigma_r) = limit_constants(places(sigma_p)).map_err(|e| e.to_string())?;
    let prim = limit_family_root(Family::Primorial(5), places(prim_p)).map_err(|e| e.to_string())?;
    let checks = [
        ("rho", &rho.decimal, &rho_r.decimal, rho_p),
        ("sigma", &sigma.decimal, &sigma_r.decimal, sigma_p),
        ("primorial k=5", &prim.decimal, &prim.decimal, prim_p),
    ];
    let bad: Vec<_> = checks
        .iter()
        .filter(|(_, more, r, p)| !matches_printed(more, r, p))
        .map(|(name, more, _, p)| format!("{name}: printed {p} computed {more}"))
        .collect();
    if bad.is_empty() {
        Ok(format!("rho {}, sigma {}, primorial {}", rho.decimal, sigma.decimal, prim.decimal))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_6(mode: Mode) -> Verdict {
    let xs = [rat(2, 1), rat(5, 2), rat(3, 1), rat(4, 1), rat(10, 1)];
    let reports = real_bounds_grid(2000, &xs, mode).map_err(|e| e.to_string())?;
    let failures: Vec<_> = reports.iter().filter(|r| !r.holds).map(|r| (r.n, r.point.clone())).collect();
    let equal: Vec<_> = reports.iter().filter(|r| r.equality).map(|r| (r.n, r.point.clone())).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut samples = Vec::with_capacity(COMPLEX_SAMPLES);
    while samples.len() < COMPLEX_SAMPLES {
        let re = rng.gen_range(-4096i64..=4096);
        let im = rng.gen_range(-4096i64..=4096);
        let norm = re * re + im * im;
        if (4 << 20..=16 << 20).contains(&norm) {
            samples.push((rng.gen_range(1u64..=300), GaussianPoint::new(rat(re, 1024), rat(im, 1024))));
        }
    }
    samples.push((1, GaussianPoint::real(2)));
    samples.push((2, GaussianPoint::real(-2)));
    let complex = par::map(mode, &samples, |(n, z)| check_complex_bounds(*n, z))
        .into_iter()
        .collect::<cyclolab::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let c_fail: Vec<_> = complex.iter().filter(|r| !r.holds).map(|r| (r.n, r.point.clone())).collect();
    let c_equal: Vec<_> = complex.iter().filter(|r| r.equality).map(|r| (r.n, r.point.clone())).collect();

    let ok = failures.is_empty()
        && equal == [(1, "2".to_string())]
        && c_fail.is_empty()
        && c_equal == [(1, "2".to_string()), (2, "-2".to_string())];
    let line = format!(
        "{} real points, equality at {equal:?}; {} complex points, equality at {c_equal:?}",
        reports.len(),
        complex.len()
    );
    if ok { Ok(line) } else { Err(format!("{line}; real failures {failures:?}; complex failures {c_fail:?}")) }
}

fn criterion_7(mode: Mode) -> Verdict {
    let ns: Vec<u64> = (2..=5000).collect();
    let gaps = par::map(mode, &ns, |&n| Ok::<_, cyclolab::Error>((n, gap(n)?, q_part(n)?)));
    let mut bad_gap = Vec::new();
    for g in gaps {
        let (n, g, q) = g.map_err(|e| e.to_string())?;
        if g != q {
            bad_gap.push(n);
        }
    }

    let mut indices = Vec::new();
    for k in 1..=48 {
        indices.extend(inverse_phi(k).map_err(|e| e.to_string())?);
    }
    indices.sort_unstable();
    let table = CyclotomicTable::for_indices(indices.iter().copied()).map_err(|e| e.to_string())?;
    let values = |x: i64| -> Vec<BigInt> { indices.iter().map(|&n| table.get(n).unwrap().eval_int(&BigInt::from(x))).collect() };
    let (at3, at1000) = (values(3), values(1000));
    let mut pairs = 0usize;
    let mut bad_order = Vec::new();
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            pairs += 1;
            let c = compare_large(indices[i], indices[j]).map_err(|e| e.to_string())?;
            if c != at3[i].cmp(&at3[j]) || c != at1000[i].cmp(&at1000[j]) {
                bad_order.push((indices[i], indices[j]));
            }
        }
    }

    let mut bad_adjacent = Vec::new();
    for p in [3u64, 5, 7, 11] {
        for i in [2u32, 3] {
            let pi = p.pow(i);
            let cert = certify_consecutive(2 * pi, pi).map_err(|e| e.to_string())?;
            let first = compare_large(2 * pi, pi).map_err(|e| e.to_string())?;
            if !cert.consecutive || cert.lower != 2 * pi || first != Ordering::Less {
                bad_adjacent.push((2 * pi, pi));
            }
        }
    }

    let class = |k| -> Result<Vec<u64>, String> {
        let mut c = inverse_phi(k).map_err(|e| e.to_string())?;
        c.sort_by(|&a, &b| compare_large(a, b).unwrap());
        Ok(c)
    };
    let classes_ok = class(2)? == [6, 4, 3] && class(6)? == [14, 18, 9, 7];

    let ok = bad_gap.is_empty() && bad_order.is_empty() && bad_adjacent.is_empty() && classes_ok;
    let line = format!("gamma = q for n ≤ 5000, {pairs} pairs agree at x = 3 and 1000, 8 adjacent pairs, classes φ=2 and φ=6");
    if ok {
        Ok(line)
    } else {
        Err(format!("gap {bad_gap:?}; order {bad_order:?}; adjacency {bad_adjacent:?}; classes ok {classes_ok}"))
    }
}

fn criterion_8(mode: Mode) -> Verdict {
    let ints = verify_integer_coincidences(10, 50, mode).map_err(|e| e.to_string())?;
    let fracs = verify_rational_coincidences(5, 50, mode).map_err(|e| e.to_string())?;
    let expected = [Coincidence { point: "2".into(), m: 2, n: 6 }];
    let line = format!(
        "integers: {} comparisons, found {:?}; fractions: {} comparisons, found {}",
        ints.pairs_checked,
        ints.coincidences.iter().map(|c| (c.point.as_str(), c.m, c.n)).collect::<Vec<_>>(),
        fracs.pairs_checked,
        fracs.coincidences.len()
    );
    if ints.coincidences == expected && fracs.coincidences.is_empty() { Ok(line) } else { Err(line) }
}

const QUARTER_PAIRS: [(u64, u64); 10] =
    [(7, 15), (11, 21), (19, 33), (23, 39), (23, 35), (47, 65), (71, 95), (59, 77), (71, 91), (107, 133)];

fn criterion_9(mode: Mode) -> Verdict {
    let rep = scan_complex(50, true, COMPLEX_BITS, mode).map_err(|e| e.to_string())?;
    let sqrt2: BTreeSet<(u64, u64)> = rep.sqrt2_pairs.iter().copied().collect();
    let printed: BTreeSet<(u64, u64)> = [(1, 3), (1, 4), (1, 5)].into();
    let verified: BTreeSet<(u64, u64)> = [(1, 3), (1, 4), (1, 5), (1, 6)].into();

    let lifts = par::map(mode, &QUARTER_PAIRS, |&(m, n)| quarter_lift_check(m, n, 20));
    let mut lifted = 0;
    let mut bad_lift = Vec::new();
    for (pair, l) in QUARTER_PAIRS.iter().zip(lifts) {
        let l = l.map_err(|e| e.to_string())?;
        if !l.holds || l.alphas.is_empty() {
            bad_lift.push(*pair);
        }
        lifted += l.alphas.len();
    }

    let range_ok = rep.outside.is_empty() && rep.undecided.is_empty() && rep.holds;
    let line = format!(
        "{} coprime pairs, moduli in [{}, {}], sqrt(2) at {sqrt2:?}; {lifted} lifted roots over 10 odd pairs",
        rep.records.len(),
        rep.min_modulus.as_ref().map_or("-".into(), |m| m.2.clone()),
        rep.max_modulus.as_ref().map_or("-".into(), |m| m.2.clone()),
    );
    if !range_ok || !bad_lift.is_empty() || sqrt2 != verified {
        return Err(format!("{line}; outside {:?}; undecided {:?}; lift failures {bad_lift:?}", rep.outside, rep.undecided));
    }
    if sqrt2 == printed {
        Ok(line)
    } else {
        Err("modulus sqrt(2) also attained at {1,6}".to_string())
    }
}

fn criterion_10(mode: Mode) -> Verdict {
    let table = CyclotomicTable::up_to(2000).map_err(|e| e.to_string())?;
    let phi_n = |n: u64| table.get(n).unwrap();
    let mut bad = Vec::new();

    for n in 1..=200u64 {
        let mut prod = IntPoly::one();
        for d in divisors(n).map_err(|e| e.to_string())? {
            prod = &prod * phi_n(d);
        }
        let mut target = vec![BigInt::zero(); n as usize + 1];
        target[0] = BigInt::from(-1);
        target[n as usize] = BigInt::one();
        if prod != IntPoly::new(target) {
            bad.push(format!("product {n}"));
        }
    }
    for n in 2..=500 {
        if !phi_n(n).is_palindromic() {
            bad.push(format!("palindrome {n}"));
        }
    }
    for k in 1..=400 {
        let (s, sign) = negation_index(k);
        let lhs = phi_n(k).negate_arg();
        let rhs = phi_n(s).scale(&BigInt::from(sign));
        if lhs != rhs {
            bad.push(format!("negation {k}"));
        }
    }
    let ns: Vec<u64> = (1..=2000).collect();
    let per_n = par::map(mode, &ns, |&n| -> cyclolab::Result<Vec<String>> {
        let pr = profile(n)?;
        let p = phi_n(n);
        let mut out = Vec::new();
        if n <= 1000 && pr.omega <= 2 && p.max_abs_coeff() > BigInt::one() {
            out.push(format!("flat {n}"));
        }
        let deg = p.degree().unwrap();
        let second = if deg == 0 { BigInt::zero() } else { p.coeff(deg - 1) };
        if second != BigInt::from(-moebius(n)?) {
            out.push(format!("second coefficient {n}"));
        }
        Ok(out)
    });
    for r in per_n {
        bad.extend(r.map_err(|e| e.to_string())?);
    }
    if bad.is_empty() {
        Ok("products n ≤ 200, palindromes n ≤ 500, negation n ≤ 400, flatness n ≤ 1000, second coefficients n ≤ 2000".into())
    } else {
        Err(bad.join(", "))
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar probes expect no output
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mode = Mode::default();
    let criteria: Vec<(u32, Box<dyn Fn() -> Verdict>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(move || criterion_2(mode))),
        (3, Box::new(move || criterion_3(mode))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(move || criterion_6(mode))),
        (7, Box::new(move || criterion_7(mode))),
        (8, Box::new(move || criterion_8(mode))),
        (9, Box::new(move || criterion_9(mode))),
        (10, Box::new(move || criterion_10(mode))),
    ];
    let mut unexpected = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id).map(|(_, m)| *m);
        match (&verdict, known) {
            (Ok(detail), None) => println!("criterion {id:>2}: PASS ({secs:.1} s) {detail}"),
            (Err(detail), Some(m)) if normalize(detail) == normalize(m) => {
                println!("criterion {id:>2}: FAIL ({secs:.1} s) known discrepancy: {detail}")
            }
            (Ok(detail), Some(_)) => {
                unexpected += 1;
                println!("criterion {id:>2}: PASS ({secs:.1} s) but a discrepancy was expected: {detail}");
            }
            (Err(detail), _) => {
                unexpected += 1;
                println!("criterion {id:>2}: FAIL ({secs:.1} s) {detail}");
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: every result as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected results");
        ExitCode::FAILURE
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
