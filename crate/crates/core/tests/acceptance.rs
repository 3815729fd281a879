//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use hpint::index::{Arity, IndexSpace};
use hpint::oracle::{quadrature_value_auto, relative_error, ExactOracle};
use hpint::recursion::{build_table, BuildOptions, ZeroReason};
use hpint::tableio;
use hpint::{build_u_table, build_w_table, ci, y_value, IndexTuple, IntegralKind, IntegralTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

fn golden() -> Vec<(IntegralKind, Vec<u32>, f64)> {
    use IntegralKind::{U, W, Y};
    let s3 = sqrt(3.0);
    let rows: Vec<(IntegralKind, &str, f64)> = vec![
        (U, "000000", 1.0 / (s3 * PI)),
        (U, "200000", -(1.0 / (3.0 * PI)) * sqrt(2.0 / 3.0)),
        (U, "110000", 1.0 / (3.0 * PI * s3)),
        (U, "400000", sqrt(2.0) / (9.0 * PI)),
        (U, "310000", -sqrt(2.0) / (9.0 * PI)),
        (U, "220000", -1.0 / (3.0 * PI * s3)),
        (U, "211000", 0.0),
        (U, "111100", 1.0 / (3.0 * PI * s3)),
        (U, "600000", -(2.0 / (27.0 * PI)) * sqrt(5.0 / 3.0)),
        (U, "510000", sqrt(10.0) / (27.0 * PI)),
        (U, "420000", -4.0 / (27.0 * PI)),
        (U, "411000", -sqrt(2.0) / (27.0 * PI)),
        (U, "330000", 7.0 / (27.0 * PI * s3)),
        (U, "321000", 1.0 / (27.0 * PI)),
        (U, "311100", -2.0 * sqrt(2.0) / (27.0 * PI)),
        (U, "222000", -(1.0 / (9.0 * PI)) * sqrt(2.0 / 3.0)),
        (U, "221100", -1.0 / (9.0 * PI * s3)),
        (U, "211110", (1.0 / (9.0 * PI)) * sqrt(2.0 / 3.0)),
        (U, "111111", 5.0 / (9.0 * PI * s3)),
        (W, "0000", 1.0 / sqrt(2.0 * PI)),
        (W, "2000", -1.0 / (4.0 * sqrt(PI))),
        (W, "1100", 1.0 / (2.0 * sqrt(2.0 * PI))),
        (W, "4000", (1.0 / 16.0) * sqrt(3.0 / PI)),
        (W, "3100", -(1.0 / 8.0) * sqrt(3.0 / PI)),
        (W, "2200", 3.0 / (8.0 * sqrt(2.0 * PI))),
        (W, "2110", 1.0 / (8.0 * sqrt(PI))),
        (W, "1111", 3.0 / (4.0 * sqrt(2.0 * PI))),
        (W, "6000", -(1.0 / 32.0) * sqrt(5.0 / (2.0 * PI))),
        (W, "5100", (1.0 / 32.0) * sqrt(15.0 / PI)),
        (W, "4200", -(5.0 / 32.0) * sqrt(3.0 / (2.0 * PI))),
        (W, "4110", -(3.0 / 32.0) * sqrt(3.0 / PI)),
        (W, "3300", (5.0 / 32.0) * sqrt(2.0 / PI)),
        (W, "3210", (1.0 / 16.0) * sqrt(3.0 / (2.0 * PI))),
        (W, "3111", -(1.0 / 16.0) * sqrt(3.0 / PI)),
        (W, "2220", 1.0 / (32.0 * sqrt(PI))),
        (W, "2211", (7.0 / 32.0) * sqrt(2.0 / PI)),
        (Y, "2110", 3.0 / (2.0 * sqrt(PI))),
        (Y, "4110", -(5.0 / 8.0) * sqrt(3.0 / PI)),
        (Y, "3210", (5.0 / 4.0) * sqrt(3.0 / (2.0 * PI))),
    ];
    rows.into_iter()
        .map(|(k, s, v)| (k, s.bytes().map(|b| u32::from(b - b'0')).collect(), v))
        .collect()
}

fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The Y symmetry orbit of `[i, j, k, l]` with the sign of each member.
fn y_orbit(t: &[u32]) -> Vec<([u32; 4], f64)> {
    let [i, j, k, l] = [t[0], t[1], t[2], t[3]];
    let mut out = Vec::new();
    for (a, b, c, d) in [(i, j, k, l), (k, l, i, j)] {
        out.push(([a, b, c, d], 1.0));
        out.push(([b, a, c, d], -1.0));
        out.push(([a, b, d, c], -1.0));
        out.push(([b, a, d, c], 1.0));
    }
    out
}

fn golden_table() -> Outcome {
    let start = Instant::now();
    let w = build_w_table(6).map_err(|e| e.to_string())?;
    let u = build_u_table(6).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut mismatches = Vec::new();
    for (kind, idx, want) in golden() {
        let cases: Vec<(Vec<u32>, f64)> = match kind {
            IntegralKind::Y => y_orbit(&idx).into_iter().map(|(t, s)| (t.to_vec(), s * want)).collect(),
            _ => permutations(&idx).into_iter().map(|p| (p, want)).collect(),
        };
        let mut bad = 0;
        let mut example = String::new();
        for (p, want) in cases {
            let t = IndexTuple::new(&p).unwrap();
            let got = match kind {
                IntegralKind::W => w.value(&t),
                IntegralKind::U => u.value(&t),
                IntegralKind::Y => y_value(&w, &t),
            }
            .map_err(|e| e.to_string())?
            .value;
            checked += 1;
            let ok = if want == 0.0 {
                got.abs() <= 1e-15
            } else {
                let err = relative_error(got, want);
                worst = worst.max(err);
                err <= 1e-13
            };
            if !ok {
                if bad == 0 {
                    example = format!("{kind}{t} = {got:.16e}, listed {want:.16e}");
                }
                bad += 1;
            }
        }
        if bad > 0 {
            mismatches.push(format!("{example} ({bad} permutations)"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{checked} entries incl. permutations, {secs:.3} s");
    if !mismatches.is_empty() {
        return Err(format!("{detail}; mismatches: {}", mismatches.join("; ")));
    }
    if secs >= 1.0 {
        return Err(format!("{detail}; over the 1 s budget"));
    }
    Ok(format!("{detail}, worst rel {worst:.1e}"))
}

fn all_canonical(arity: Arity, m: u32) -> Vec<IndexTuple> {
    let space = IndexSpace::new(arity, m);
    (0..=space.max_level())
        .flat_map(|s| space.enumerate_level(s).unwrap().keys)
        .map(|k| *k.sorted())
        .collect()
}

/// Largest relative error of `value` against `reference` over `tuples`.
fn worst_error(
    tuples: &[IndexTuple],
    value: impl Fn(&IndexTuple) -> f64 + Sync,
    reference: impl Fn(&IndexTuple) -> f64 + Sync,
) -> (f64, Option<IndexTuple>) {
    tuples
        .par_iter()
        .map(|t| (relative_error(value(t), reference(t)), Some(*t)))
        .reduce(|| (0.0, None), |a, b| if b.0 > a.0 { b } else { a })
}

fn oracle_w_y() -> Outcome {
    let m = 10;
    let w = build_w_table(m).map_err(|e| e.to_string())?;
    let oracle = ExactOracle::new(m);
    let w_tuples = all_canonical(Arity::Four, m);
    let (we, wt) = worst_error(
        &w_tuples,
        |t| w.value(t).unwrap().value,
        |t| oracle.exact(IntegralKind::W, t).unwrap().to_f64(),
    );
    let mut y_tuples = Vec::new();
    for i in 0..=m {
        for j in 0..=m {
            for k in 0..=m {
                for l in 0..=m {
                    y_tuples.push(IndexTuple::four([i, j, k, l]));
                }
            }
        }
    }
    let (ye, yt) = worst_error(
        &y_tuples,
        |t| y_value(&w, t).unwrap().value,
        |t| oracle.exact(IntegralKind::Y, t).unwrap().to_f64(),
    );
    let detail = format!(
        "W {} tuples worst {we:.1e} at {}, Y {} tuples worst {ye:.1e} at {}",
        w_tuples.len(),
        wt.map_or("-".into(), |t| t.to_string()),
        y_tuples.len(),
        yt.map_or("-".into(), |t| t.to_string())
    );
    if we <= 1e-10 && ye <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_u() -> Outcome {
    let m = 6;
    let u = build_u_table(m).map_err(|e| e.to_string())?;
    let oracle = ExactOracle::new(m);
    let tuples = all_canonical(Arity::Six, m);
    let (e, t) = worst_error(
        &tuples,
        |t| u.value(t).unwrap().value,
        |t| oracle.exact(IntegralKind::U, t).unwrap().to_f64(),
    );
    let detail = format!("U {} tuples worst {e:.1e} at {}", tuples.len(), t.map_or("-".into(), |t| t.to_string()));
    if e <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dual_oracle() -> Outcome {
    let max_level = 40;
    let oracle = ExactOracle::new(max_level);
    let w_tuples = all_canonical(Arity::Four, max_level)
        .into_iter()
        .filter(|t| t.level() <= max_level)
        .collect::<Vec<_>>();
    let u_tuples = all_canonical(Arity::Six, max_level)
        .into_iter()
        .filter(|t| t.level() <= max_level)
        .collect::<Vec<_>>();
    let mut y_tuples = Vec::new();
    for i in 0..=max_level {
        for j in 0..i {
            for k in 0..=max_level {
                for l in 0..k {
                    if (i, j) >= (k, l) && i + j + k + l <= max_level {
                        y_tuples.push(IndexTuple::four([i, j, k, l]));
                    }
                }
            }
        }
    }
    let mut parts = Vec::new();
    let mut ok = true;
    for (kind, tuples) in [
        (IntegralKind::W, &w_tuples),
        (IntegralKind::Y, &y_tuples),
        (IntegralKind::U, &u_tuples),
    ] {
        let (e, t) = worst_error(
            tuples,
            |t| quadrature_value_auto(kind, t).unwrap(),
            |t| oracle.exact(kind, t).unwrap().to_f64(),
        );
        ok &= e <= 1e-12;
        parts.push(format!(
            "{kind} {} tuples worst {e:.1e}{}",
            tuples.len(),
            t.map_or(String::new(), |t| format!(" at {t}"))
        ));
    }
    let detail = parts.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    f64::from_bits(a.to_bits() + 1) - a
}

fn within_ulp(a: f64, b: f64) -> bool {
    (a - b).abs() <= ulp(a.abs().max(b.abs()))
}

fn properties() -> Outcome {
    const SAMPLES: usize = 100_000;
    let (mw, mu) = (24, 10);
    let w = build_w_table(mw).map_err(|e| e.to_string())?;
    let u = build_u_table(mu).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x4845_524d);
    let mut counts = [0usize; 3];
    for n in 0..SAMPLES {
        let kind = [IntegralKind::W, IntegralKind::Y, IntegralKind::U][rng.gen_range(0..3)];
        let (len, m) = if kind == IntegralKind::U { (6, mu) } else { (4, mw) };
        let mut idx: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=m)).collect();
        // bias half the Y draws toward a repeated pair
        if kind == IntegralKind::Y && n % 4 == 0 {
            idx[1] = idx[0];
        }
        let t = IndexTuple::new(&idx).unwrap();
        let fail = |what: &str| Err(format!("{kind}{t}: {what}"));
        match kind {
            IntegralKind::W | IntegralKind::U => {
                counts[if kind == IntegralKind::W { 0 } else { 2 }] += 1;
                let table = if kind == IntegralKind::W { &w } else { &u };
                let r = table.value(&t).unwrap();
                if t.level() % 2 == 1 && (r.value != 0.0 || r.zero_reason != Some(ZeroReason::OddParity)) {
                    return fail("odd level is not exactly 0");
                }
                let mut p = idx.clone();
                p.shuffle(&mut rng);
                let q = table.value(&IndexTuple::new(&p).unwrap()).unwrap();
                if q.value.to_bits() != r.value.to_bits() {
                    return fail("permutation changed the value");
                }
            }
            IntegralKind::Y => {
                counts[1] += 1;
                let [i, j, k, l] = [idx[0], idx[1], idx[2], idx[3]];
                let y = |a, b, c, d| y_value(&w, &IndexTuple::four([a, b, c, d])).unwrap().value;
                let v = y(i, j, k, l);
                if (i == j || k == l) && v != 0.0 {
                    return fail("equal pair is not exactly 0");
                }
                if t.level() % 2 == 1 && v != 0.0 {
                    return fail("odd level is not exactly 0");
                }
                if !within_ulp(y(j, i, k, l), -v) || !within_ulp(y(i, j, l, k), -v) || !within_ulp(y(k, l, i, j), v) {
                    return fail("antisymmetry broken");
                }
            }
        }
    }
    Ok(format!(
        "{SAMPLES} seeded tuples (W {}, Y {}, U {})",
        counts[0], counts[1], counts[2]
    ))
}

fn brute_even_canonical(len: usize, m: u32) -> u64 {
    fn go(left: usize, cap: u32, sum: u32) -> u64 {
        if left == 0 {
            return u64::from(sum % 2 == 0);
        }
        (0..=cap).map(|v| go(left - 1, v, sum + v)).sum()
    }
    go(len, m, 0)
}

fn bits_equal(a: &IntegralTable, b: &IntegralTable) -> bool {
    a.records().zip(b.records()).all(|((ta, va), (tb, vb))| ta == tb && va.to_bits() == vb.to_bits())
        && a.record_count() == b.record_count()
}

fn serialization() -> Outcome {
    let mut parts = Vec::new();
    for (kind, m) in [(IntegralKind::W, 20), (IntegralKind::U, 8)] {
        let table = build_table(kind, m, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let mut bytes = Vec::new();
        tableio::write_binary(&table, &mut bytes).map_err(|e| e.to_string())?;
        let back = tableio::read_binary(bytes.as_slice()).map_err(|e| e.to_string())?;
        let mut again = Vec::new();
        tableio::write_binary(&back, &mut again).map_err(|e| e.to_string())?;
        if !bits_equal(&table, &back) || again != bytes {
            return Err(format!("{kind} M={m} binary round trip differs"));
        }
        let mut csv = Vec::new();
        tableio::write_csv(&table, &mut csv).map_err(|e| e.to_string())?;
        let rows = csv.iter().filter(|&&b| b == b'\n').count() as u64 - 1;
        let want = brute_even_canonical(kind.arity().len(), m);
        if rows != want || table.record_count() != want {
            return Err(format!("{kind} M={m}: {rows} CSV rows, enumeration gives {want}"));
        }
        let from_csv = tableio::read_csv(csv.as_slice()).map_err(|e| e.to_string())?;
        if !bits_equal(&table, &from_csv) {
            return Err(format!("{kind} M={m} CSV round trip differs"));
        }
        parts.push(format!("{kind} M={m}: {} bytes, {rows} rows", bytes.len()));
    }
    Ok(parts.join(", "))
}

fn scale() -> Outcome {
    let opts = BuildOptions::from_env().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (kind, m) in [(IntegralKind::W, 60), (IntegralKind::U, 20)] {
        let start = Instant::now();
        let table = build_table(kind, m, &opts).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        ok &= secs <= 5.0;
        parts.push(format!("{kind} M={m}: {} entries in {secs:.3} s", table.record_count()));
    }
    let detail = parts.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ci_demo() -> Outcome {
    let w = build_w_table(30).map_err(|e| e.to_string())?;
    let energy = |m: u32, g: f64| -> Result<f64, String> {
        let h = ci::build_hamiltonian(m, g, &w).map_err(|e| e.to_string())?;
        ci::ground_state_energy(&h).map_err(|e| e.to_string())
    };
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    let free_worst = [0, 5, 10, 20, 30]
        .iter()
        .map(|&m| energy(m, 0.0).map(|e| (e - 1.0).abs()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    notes.push(format!("g=0 |E-1| {free_worst:.1e}"));
    if free_worst > 1e-12 {
        failures.push("g=0 energy");
    }

    let g = 1e-3;
    let slope = (energy(20, g)? - energy(20, 0.0)?) / g;
    let w0 = 1.0 / sqrt(2.0 * PI);
    let slope_err = relative_error(slope, w0);
    notes.push(format!("slope rel err {slope_err:.1e}"));
    if slope_err > 1e-3 {
        failures.push("perturbative slope");
    }

    let strong = [10, 20, 30]
        .iter()
        .map(|&m| energy(m, 20.0))
        .collect::<Result<Vec<_>, _>>()?;
    notes.push(format!(
        "g=20 E(10,20,30) = {:.6}, {:.6}, {:.6}",
        strong[0], strong[1], strong[2]
    ));
    if strong.windows(2).any(|p| p[1] > p[0] + 1e-12) {
        failures.push("monotonicity");
    }
    if strong.iter().any(|&e| e <= 2.0) {
        failures.push("lower bound 2");
    }

    let detail = notes.join("; ");
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failed: {}", failures.join(", ")))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden table values", golden_table),
        ("oracle equivalence W and Y, M=10", oracle_w_y),
        ("oracle equivalence U, M=6", oracle_u),
        ("exact vs quadrature, level <= 40", dual_oracle),
        ("parity and symmetry properties", properties),
        ("serialization round trips and counts", serialization),
        ("scale: W M=60 and U M=20 within 5 s", scale),
        ("two-boson CI demo", ci_demo),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} [{secs:.2} s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} [{secs:.2} s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
