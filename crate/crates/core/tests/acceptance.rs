//! Acceptance suite: runs each criterion at its stated scale and prints one
//! pass/fail line per criterion.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use hodge_fans::casebook::{run_casebook_1111, CasebookOptions, Verdict};
use hodge_fans::cli::run_cli;
use hodge_fans::fans::{
    build_sigma_s, in_sigma0, is_unimodular, reduce_binary_form, standard_sigma0, validate_fan,
    Fan,
};
use hodge_fans::hodge::{
    breve_lift, check_mhs, check_nilpotent_orbit, classify_cone, cone_weight_filtration,
    deligne_splitting, same_orbit, splitting_parity, tilde_map, tilde_map_odd, BoundaryPoint,
    ConeType, HodgeError, HodgeNumbers,
};
use hodge_fans::linalg::RatMatrix;
use hodge_fans::symplectic::{image_subspace, in_eta_plus, IsotropicSubspace, SymplecticSpace};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let sigma0 = standard_sigma0(2).map_err(|e| e.to_string())?;
    let faces = sigma0.faces();
    ensure(faces.len() == 8, || format!("faces(sigma_0) has {} faces", faces.len()))?;
    ensure(validate_fan(&Fan::from_faces(&sigma0)).is_valid(), || "faces of sigma_0 rejected".into())?;
    let mut rng = common::rng(11);
    let sp = SymplecticSpace::new(2);
    let gamma = common::random_sp_z(&mut rng, 2);
    let subspaces = [
        IsotropicSubspace::standard(sp, 1),
        IsotropicSubspace::standard(sp, 2),
        IsotropicSubspace::standard(sp, 2).transform(&gamma).map_err(|e| e.to_string())?,
        IsotropicSubspace::standard(SymplecticSpace::new(3), 2),
    ];
    let mut checked = 0;
    for s in &subspaces {
        for b in 0..=3 {
            let fan = build_sigma_s(s, b).map_err(|e| e.to_string())?;
            let v = validate_fan(&fan);
            ensure(v.is_valid(), || format!("dim S = {}, word bound {b}: {:?}", s.dim(), v.violation))?;
            checked += 1;
        }
    }
    Ok(format!("8 faces; {checked} truncations (word bound <= 3, m in {{1,2}}) validate"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for a in 1..=20i64 {
        for c in 1..=20i64 {
            for b in -20..=20i64 {
                if b * b >= a * c {
                    continue;
                }
                let x = RatMatrix::from_i64(2, 2, &[a, b, b, c]);
                let r = reduce_binary_form(&x).map_err(|e| format!("{a} {b} {c}: {e}"))?;
                // Independent check of the certificate and of the σ₀ inequalities.
                let lhs = r.gamma.mul(&x).unwrap().mul(&r.gamma.transpose()).unwrap();
                ensure(lhs == r.reduced, || format!("certificate fails for ({a}, {b}, {c})"))?;
                ensure(is_unimodular(&r.gamma), || format!("gamma not in GL(2,Z) for ({a}, {b}, {c})"))?;
                let (p, q, s) = (&r.reduced[(0, 0)], &r.reduced[(0, 1)], &r.reduced[(1, 1)]);
                let zero = hodge_fans::linalg::rat(0);
                let inside = *q <= zero && p + q >= zero && s + q >= zero;
                ensure(inside && in_sigma0(&r.reduced), || format!("({a}, {b}, {c}) lands outside sigma_0"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} forms reduce into sigma_0 with exact certificates, 0 failures"))
}

fn parity_check(pt: &BoundaryPoint) -> Result<ConeType, String> {
    let sigma = &pt.cone;
    let w = cone_weight_filtration(sigma).map_err(|e| e.to_string())?;
    let split = deligne_splitting(&w, &pt.filtration).map_err(|e| e.to_string())?;
    let parity = splitting_parity(&split);
    let n = sigma.interior_point().map_err(|e| e.to_string())?;
    let s = image_subspace(&n).map_err(|e| e.to_string())?;
    let even = in_eta_plus(&n, &s).map_err(|e| e.to_string())?;
    let odd = in_eta_plus(&n.neg(), &s).map_err(|e| e.to_string())?;
    ensure(parity.even == even && parity.odd == odd, || {
        format!("splitting says even={} odd={}, sign says even={even} odd={odd}", parity.even, parity.odd)
    })?;
    classify_cone(sigma, std::slice::from_ref(pt)).map_err(|e| e.to_string())
}

fn criterion_3(points: &[(BTreeMap<i32, usize>, BoundaryPoint)]) -> Outcome {
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_n: BTreeMap<usize, usize> = BTreeMap::new();
    for (wz, pt) in points {
        let t = parity_check(pt)?;
        let expected = if wz.keys().all(|p| p % 2 == 0) {
            ConeType::Even
        } else if wz.keys().all(|p| p % 2 != 0) {
            ConeType::Odd
        } else {
            ConeType::Neither
        };
        ensure(t == expected, || format!("pattern {wz:?} classified {t}"))?;
        *tally.entry(t.to_string()).or_default() += 1;
        *by_n.entry(pt.cone.space().n()).or_default() += 1;
    }
    ensure(tally.contains_key("even") && tally.contains_key("odd"), || "missing an orientation".into())?;
    Ok(format!(
        "{} points (n=2: {}, n=3: {}); splitting and sign criteria agree on all ({tally:?})",
        points.len(),
        by_n.get(&2).unwrap_or(&0),
        by_n.get(&3).unwrap_or(&0)
    ))
}

fn criterion_4() -> Result<(String, Vec<BoundaryPoint>), String> {
    let mut rng = common::rng(44);
    let weil = HodgeNumbers::weil_1111();
    let siegel = HodgeNumbers::siegel(2);
    let mut lifts = Vec::new();
    for i in 0..24 {
        let tor = common::random_spec(&mut rng, 2, &siegel, &[(0, 1)].into())
            .build()
            .map_err(|e| format!("case {i}: {e}"))?;
        let lift = breve_lift(&tor.cone, &tor.filtration, &weil).map_err(|e| format!("case {i}: {e}"))?;
        let rep = check_nilpotent_orbit(&lift.cone, &lift.filtration, &weil).map_err(|e| e.to_string())?;
        ensure(rep.passes(), || format!("case {i}: lift fails {}", rep.first_failure()))?;
        let w = cone_weight_filtration(&lift.cone).map_err(|e| e.to_string())?;
        let back = tilde_map(&w, &lift.filtration).map_err(|e| e.to_string())?;
        let z = same_orbit(&tor.cone, &back, &tor.filtration).map_err(|e| e.to_string())?;
        ensure(z.is_some(), || format!("case {i}: tilde map does not recover the input"))?;
        lifts.push(lift);
    }
    let mut obstructed = 0;
    for i in 0..20 {
        let tor = common::random_spec(&mut rng, 2, &siegel, &[(0, 2)].into())
            .build()
            .map_err(|e| format!("m=2 case {i}: {e}"))?;
        match breve_lift(&tor.cone, &tor.filtration, &weil) {
            Err(HodgeError::Obstruction { m: 2, h01: 1 }) => obstructed += 1,
            other => return Err(format!("m=2 case {i}: expected obstruction, got {:?}", other.map(|_| ()))),
        }
    }
    Ok((
        format!("24/24 lifts pass and round-trip exactly; {obstructed}/20 m=2 inputs obstructed"),
        lifts,
    ))
}

fn criterion_5() -> Outcome {
    let r = run_casebook_1111(&CasebookOptions::default()).map_err(|e| e.to_string())?;
    for c in &r.claims {
        ensure(c.verdict == Verdict::Pass, || {
            format!("claim {}: expected `{}`, computed `{}`", c.id, c.expected, c.computed)
        })?;
    }
    let find = |id: usize| r.claims.iter().find(|c| c.id == id).map(|c| c.computed.clone()).unwrap_or_default();
    ensure(find(3).contains("kept: 0 N_I N_I' N_I''"), || "Sigma_1 = Sigma_ev not witnessed".into())?;
    ensure(find(4).starts_with("dim eta(Im N) = 3"), || "dim eta(Im N) != 3".into())?;
    ensure(find(6) == "bound = 2, equality: true", || "dim bound mismatch".into())?;
    ensure(find(2).contains("(0,0)=1") && find(2).contains("(1,-1)=1"), || "diagram dims".into())?;
    Ok(format!("{}/7 claims pass", r.claims.len()))
}

fn criterion_6(points: &[BoundaryPoint]) -> Outcome {
    let allowed = [(0, 0), (-1, 0), (0, -1), (-1, -1)];
    let mut tilde_checked = 0;
    for pt in points {
        let w = cone_weight_filtration(&pt.cone).map_err(|e| e.to_string())?;
        let split = deligne_splitting(&w, &pt.filtration).map_err(|e| e.to_string())?;
        let inv = split.invariants(&w, &pt.filtration);
        ensure(inv.all(), || format!("splitting invariants fail: {inv:?}"))?;
        for f_t in [
            tilde_map(&w, &pt.filtration).map_err(|e| e.to_string())?,
            tilde_map_odd(&w, &pt.filtration).map_err(|e| e.to_string())?,
        ] {
            ensure(check_mhs(&w, &f_t), || "(W, F~) is not a mixed Hodge structure".into())?;
            let s = deligne_splitting(&w, &f_t).map_err(|e| e.to_string())?;
            ensure(s.invariants(&w, &f_t).all(), || "F~ splitting invariants fail".into())?;
            for (pq, d) in s.dims() {
                ensure(d == 0 || allowed.contains(&pq), || format!("F~ has a piece at {pq:?}"))?;
            }
            tilde_checked += 1;
        }
    }
    Ok(format!(
        "{} splittings satisfy all four invariants; {tilde_checked} tilde outputs supported on (0,0),(-1,0),(0,-1),(-1,-1)",
        points.len()
    ))
}

fn rust_files(dir: &Path, out: &mut Vec<std::path::PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            rust_files(&p, out);
        } else if p.extension().is_some_and(|e| e == "rs") {
            out.push(p);
        }
    }
}

fn cli_output(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(args.iter().copied(), &mut out, &mut err);
    (code, out)
}

fn criterion_7() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut files = Vec::new();
    rust_files(&root.join("src"), &mut files);
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        let hit = text
            .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .find(|t| matches!(*t, "f32" | "f64" | "powf" | "sqrt"));
        ensure(hit.is_none(), || format!("{} mentions {}", f.display(), hit.unwrap()))?;
    }
    let a = run_casebook_1111(&CasebookOptions::default()).map_err(|e| e.to_string())?.to_json();
    let b = run_casebook_1111(&CasebookOptions::default()).map_err(|e| e.to_string())?.to_json();
    ensure(a == b, || "casebook JSON differs between runs".into())?;
    let orbit = root.join("casebook/siegel_type_one.json");
    let orbit = orbit.to_str().unwrap();
    for args in [
        ["hodge-fans", "--format", "json", "casebook"].as_slice(),
        ["hodge-fans", "--format", "json", "lift", orbit].as_slice(),
        ["hodge-fans", "casebook"].as_slice(),
    ] {
        let first = cli_output(args);
        let second = cli_output(args);
        ensure(first == second && first.0 == 0, || format!("{args:?} is not reproducible"))?;
    }
    let p1: Vec<String> = common::generated_points(5, 6)
        .iter()
        .map(|(_, p)| format!("{:?}", p.filtration))
        .collect();
    let p2: Vec<String> = common::generated_points(5, 6)
        .iter()
        .map(|(_, p)| format!("{:?}", p.filtration))
        .collect();
    ensure(p1 == p2, || "seeded generation is not reproducible".into())?;
    Ok(format!(
        "no float types in {} library files; reports and CLI output byte-identical across runs",
        files.len()
    ))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, std::time::Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn main() {
    let start = Instant::now();
    let (points, gen_time) = timed(|| common::generated_points(2024, 120));
    let mut results: Vec<(usize, Outcome, std::time::Duration)> = Vec::new();
    let (r, t) = timed(criterion_1);
    results.push((1, r, t));
    let (r, t) = timed(criterion_2);
    results.push((2, r, t));
    let (r, t) = timed(|| criterion_3(&points));
    results.push((3, r, t + gen_time));
    let (c4, t) = timed(criterion_4);
    let (c4, lifts) = match c4 {
        Ok((msg, lifts)) => (Ok(msg), lifts),
        Err(e) => (Err(e), Vec::new()),
    };
    results.push((4, c4, t));
    let (r, t) = timed(criterion_5);
    results.push((5, r, t));
    let mut all: Vec<BoundaryPoint> = points.into_iter().map(|(_, p)| p).collect();
    all.extend(lifts);
    let (r, t) = timed(|| criterion_6(&all));
    results.push((6, r, t));
    let (r, t) = timed(criterion_7);
    results.push((7, r, t));
    let mut failed = 0;
    for (id, r, t) in &results {
        match r {
            Ok(msg) => println!("criterion {id}: PASS ({t:.1?}) - {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id}: FAIL ({t:.1?}) - {msg}");
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass in {:.1?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
