//! Acceptance suite. One line per check; exits nonzero if any check fails
//! that is not a known, recorded discrepancy.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use hermsrg::constructions::{
    build_gamma_u, build_nu, build_unital_bm, build_unital_bt, build_unital_classical, find_dual_onan,
    standard_plane, validate_unital, BmParams,
};
use hermsrg::graphcore::{
    check_srg, common_neighbors, decode_graph6, encode_graph6, is_isomorphic, maximal_cliques, triple_census,
    CliqueOptions, Graph, IsoOptions, IsoVerdict, SrgParams, TripleCensus, TripleSource,
};
use hermsrg::oracles::{verify_lemma, Certificate, FrameKind, LemmaId, LemmaStatus, VerifyOptions};
use hermsrg::switching::{
    apply_switch, build_switched, find_switch_triple, verify_wqh_hypotheses, Switched, Variant,
};

/// Checks whose stated target is known to be wrong. They still print FAIL.
const KNOWN: &[&str] = &["4.census_nu_5_4_stated", "9.cliques_nu_3_9_stated"];

struct Suite {
    results: Vec<(String, bool)>,
    start: Instant,
    /// graph6 round trips of every graph built along the way
    formats: Vec<bool>,
}

impl Suite {
    fn check(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        let tag = match (ok, KNOWN.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] {id}: {} ({:.1} s)", detail.as_ref(), self.start.elapsed().as_secs_f64());
        self.results.push((id.to_string(), ok));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, id: &str, observed: T, expected: T) {
        let ok = observed == expected;
        self.check(id, ok, format!("observed {observed:?}, expected {expected:?}"));
    }
}

/// (v, k, lambda, mu) by direct counting over an adjacency matrix, or None if
/// the graph is not strongly regular.
fn naive_srg(g: &Graph) -> Option<(u64, u64, u64, u64)> {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect();
    let k = adj[0].iter().filter(|&&x| x).count();
    let (mut lambda, mut mu) = (None, None);
    for i in 0..n {
        if adj[i].iter().filter(|&&x| x).count() != k {
            return None;
        }
        for j in i + 1..n {
            let c = (0..n).filter(|&x| adj[i][x] && adj[j][x]).count();
            let slot = if adj[i][j] { &mut lambda } else { &mut mu };
            if *slot.get_or_insert(c) != c {
                return None;
            }
        }
    }
    Some((n as u64, k as u64, lambda? as u64, mu? as u64))
}

fn params(p: SrgParams) -> (u64, u64, u64, u64) {
    (p.v, p.k, p.lambda, p.mu)
}

/// Maximal cliques by size, plain Bron-Kerbosch with pivoting on bool rows.
fn naive_cliques(g: &Graph) -> BTreeMap<usize, u64> {
    fn bk(adj: &[Vec<bool>], r: usize, p: Vec<usize>, mut x: Vec<usize>, out: &mut BTreeMap<usize, u64>) {
        if p.is_empty() && x.is_empty() {
            *out.entry(r).or_default() += 1;
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
        let mut p = p;
        for v in p.clone().into_iter().filter(|&v| !adj[pivot][v]) {
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            bk(adj, r + 1, np, nx, out);
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect();
    let mut out = BTreeMap::new();
    bk(&adj, 0, (0..n).collect(), Vec::new(), &mut out);
    out
}

/// Histogram of common-neighbour counts over all triangles, by brute force.
fn naive_triple_histogram(g: &Graph) -> BTreeMap<u64, u64> {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect();
    let mut h = BTreeMap::new();
    for a in 0..n {
        for b in (a + 1..n).filter(|&b| adj[a][b]) {
            for c in (b + 1..n).filter(|&c| adj[a][c] && adj[b][c]) {
                let v = (0..n).filter(|&x| adj[a][x] && adj[b][x] && adj[c][x]).count() as u64;
                *h.entry(v).or_default() += 1;
            }
        }
    }
    h
}

fn roundtrip(g: &Graph) -> bool {
    decode_graph6(&encode_graph6(g)).is_ok_and(|h| h.n() == g.n() && h.same_edges(g))
}

fn c1_parameters(s: &mut Suite) -> Graph {
    let cases = [(2, 2, (12, 9, 6, 9)), (2, 3, (63, 32, 16, 16)), (4, 2, (176, 135, 102, 108))];
    for (n, q, expected) in cases {
        let g = build_nu(n, q).unwrap();
        s.eq(&format!("1.nu_{}_{}_check_srg", n + 1, q * q), check_srg(&g).ok().map(params), Some(expected));
        s.eq(&format!("1.nu_{}_{}_direct_count", n + 1, q * q), naive_srg(&g), Some(expected));
        s.formats.push(roundtrip(&g));
    }
    let t = Instant::now();
    let g = build_nu(4, 3).unwrap();
    let p = check_srg(&g).ok().map(params);
    s.eq("1.nu_5_9_check_srg", p, Some((4941, 2240, 1024, 1008)));
    let feasible = p.is_some_and(|(v, k, l, m)| k * (k - l - 1) == (v - k - 1) * m);
    s.check(
        "1.nu_5_9_feasibility",
        feasible,
        format!("k(k - lambda - 1) = (v - k - 1) mu holds with mu = 1008, in {:.1} s", t.elapsed().as_secs_f64()),
    );
    s.formats.push(roundtrip(&g));
    g
}

fn expected_sets(q: usize, v: Variant) -> (usize, usize) {
    match v {
        Variant::Pencil => (q * q * (q + 1) * (q + 1), q * q * (q + 1) * (q * q - q - 2)),
        Variant::Line => (2 * q * q * (q * q - 1), q * q * q * (q * q - q - 1)),
    }
}

fn c2_c3_switching(s: &mut Suite) -> Vec<(u32, Variant, Switched)> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        for v in [Variant::Pencil, Variant::Line] {
            let tag = format!("q{q}_{}", if v == Variant::Pencil { "pencil" } else { "line" });
            let sw = build_switched(4, q, v).unwrap();
            let (a, a1) = expected_sets(q as usize, v);
            let sizes = (sw.sets.a.len(), sw.sets.a1.len(), sw.sets.a2.len());
            s.eq(&format!("2.sets_{tag}"), sizes, (a, a1, a1));

            let base = check_srg(&sw.base).ok().map(params);
            let switched = check_srg(&sw.graph).ok().map(params);
            s.check(
                &format!("3.srg_{tag}"),
                base.is_some() && base == switched,
                format!("base {base:?}, switched {switched:?}"),
            );
            if q == 2 {
                s.eq(&format!("3.direct_count_{tag}"), naive_srg(&sw.graph), base);
            }
            let once = apply_switch(&sw.base, &sw.sets).unwrap();
            let twice = apply_switch(&once, &sw.sets.exchanged()).unwrap();
            s.check(
                &format!("3.involution_{tag}"),
                once.same_edges(&sw.graph) && twice.same_edges(&sw.base),
                format!("{} edges toggled, switching twice restores the base", sw.base.edge_difference(&sw.graph).len()),
            );
            let wqh = verify_wqh_hypotheses(&sw.base, &sw.sets, q);
            let detail = match &wqh {
                Ok(r) => format!("line degree {}, union degree {}", r.line_degree, r.union_degree),
                Err(e) => e.to_string(),
            };
            s.check(&format!("3.hypotheses_{tag}"), wqh.is_ok(), detail);
            s.formats.push(roundtrip(&sw.graph));
            out.push((q, v, sw));
        }
    }
    out
}

fn switch_triple_value(sw: &Switched) -> Option<([usize; 3], u64)> {
    let h = sw.config.geometry().ok()?;
    let t = find_switch_triple(&sw.base, &h, &sw.config, &sw.sets).ok()??;
    let triple = [t.u, t.u1, t.u2];
    Some((triple, common_neighbors(&sw.graph, &triple).0 as u64))
}

fn c4_c5_triples(s: &mut Suite, nu59: &Graph, switched: &[(u32, Variant, Switched)]) {
    let nu54 = &switched.iter().find(|x| x.0 == 2).unwrap().2.base;
    let t = Instant::now();
    let census = triple_census(nu54, &TripleSource::AllAdjacent);
    let ms = t.elapsed().as_millis();
    s.eq("4.census_nu_5_4_direct", census.histogram.clone(), naive_triple_histogram(nu54));
    let values = census.value_set();
    s.eq("4.census_nu_5_4_values", values.iter().copied().collect::<Vec<_>>(), vec![69, 75, 77]);
    s.check(
        "4.census_nu_5_4_stated",
        values == BTreeSet::from([37, 69, 75, 77]),
        format!("observed {values:?} in {ms} ms; 37 needs T on a Baer subline of 3 points, impossible at q = 2"),
    );

    let opts = VerifyOptions::default();
    let r = verify_lemma(LemmaId::Char, 3, &opts).unwrap();
    let mut seen = BTreeMap::new();
    for (class, expected) in [("t_in_s", 294u64), ("t_not_in_s", 537), ("plane_line", 483), ("plane_curve", 462)] {
        for frame in [FrameKind::Standard, FrameKind::Random] {
            let obs = r.observed(frame, class).map(|m| m.keys().copied().collect::<Vec<_>>());
            let ok = obs.as_deref() == Some(&[expected][..]);
            seen.entry(class).and_modify(|x: &mut bool| *x &= ok).or_insert(ok);
        }
    }
    let values: Vec<u64> = seen.iter().filter(|x| *x.1).map(|(c, _)| match *c {
        "t_in_s" => 294,
        "t_not_in_s" => 537,
        "plane_line" => 483,
        _ => 462,
    }).collect();
    s.check("4.classes_nu_5_9", seen.values().all(|&x| x), format!("classes confirming their value: {values:?}"));

    for (q, v, sw) in switched {
        let tag = format!("q{q}_{}", if *v == Variant::Pencil { "pencil" } else { "line" });
        match (q, v) {
            (2, Variant::Pencil) => s.check(
                &format!("4.switch_triple_{tag}"),
                sw.graph.same_edges(&sw.base),
                "A1 and A2 are empty, the switch is the identity",
            ),
            _ => {
                let expected = if *q == 2 { 69 } else { 510 };
                let found = switch_triple_value(sw);
                s.eq(&format!("4.switch_triple_{tag}"), found.map(|f| f.1), Some(expected));
            }
        }
    }

    // one census of NU(5,9) backs the certificate for both variants
    let t = Instant::now();
    let census59 = triple_census(nu59, &TripleSource::AllAdjacent);
    s.eq(
        "5.census_nu_5_9",
        census59.value_set().into_iter().collect::<Vec<_>>(),
        vec![294, 462, 483, 537],
    );
    println!("       full census of NU(5,9): {} triangles in {:.1} s", census59.triples, t.elapsed().as_secs_f64());
    for (q, v, sw) in switched.iter().filter(|x| x.0 == 3) {
        let tag = format!("q{q}_{}", if *v == Variant::Pencil { "pencil" } else { "line" });
        let Some((triple, value)) = switch_triple_value(sw) else {
            s.check(&format!("5.certificate_{tag}"), false, "no switch triple");
            continue;
        };
        let cert = Certificate::TripleValue {
            graph: 1,
            triple,
            value,
            other_values: census59.value_set().into_iter().collect(),
            other_triangles: census59.triples,
        };
        let ok = valid_triple_certificate(&cert, &census59, &sw.graph);
        s.check(&format!("5.certificate_{tag}"), ok && value == 510, serde_json::to_string(&cert).unwrap());
    }
}

/// Re-checks a triple-value certificate against the switched graph and a
/// census of the base graph.
fn valid_triple_certificate(cert: &Certificate, base: &TripleCensus, g: &Graph) -> bool {
    let Certificate::TripleValue { triple, value, .. } = cert else { return false };
    let [a, b, c] = *triple;
    g.has_edge(a, b)
        && g.has_edge(a, c)
        && g.has_edge(b, c)
        && common_neighbors(g, triple).0 as u64 == *value
        && base.mode == "all_adjacent"
        && !base.histogram.contains_key(value)
}

/// Runs the command line tool; returns the exit code and stdout.
fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hermsrg")).args(args).output().expect("run hermsrg");
    if !out.stderr.is_empty() {
        print!("       stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn path_arg(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn first_bm(q: u32) -> BmParams {
    let plane = standard_plane(q).unwrap();
    let f = plane.space().field();
    BmParams::all_valid(f).into_iter().find(|p| !p.alpha.is_zero()).unwrap()
}

fn c5_cliques_certificate(s: &mut Suite, dir: &Path) {
    let bm = first_bm(3);
    let (nu, gu) = (path_arg(dir, "nu39.g6"), path_arg(dir, "bm3.g6"));
    let (a, b) = (bm.alpha.0.to_string(), bm.beta.0.to_string());
    cli(&["build", "--n", "2", "--q", "3", "--kind", "nu", "--out", &nu]);
    let (code, _) = cli(&["build", "--n", "2", "--q", "3", "--kind", "gamma-u", "--unital", "bm", "--alpha-idx", &a, "--beta-idx", &b, "--out", &gu]);
    s.eq("5.build_gamma_bm_q3", code, 0);
    let (code, out) = cli(&["compare", &nu, &gu, "--mode", "invariants", "--order", "cliques", "--validate"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    let cert = &report["invariants"]["certificates"][0];
    s.check(
        "5.cliques_nu_3_9_vs_bm",
        code == 0 && report["verdict"] == "non_isomorphic" && cert["invariant"] == "clique_count",
        format!("exit {code}, certificate {cert}"),
    );
}

fn c6_q2_iso(s: &mut Suite, dir: &Path) {
    let (nu, line, pencil) = (path_arg(dir, "nu54.g6"), path_arg(dir, "line2.g6"), path_arg(dir, "pencil2.g6"));
    cli(&["build", "--n", "4", "--q", "2", "--kind", "nu", "--out", &nu]);
    cli(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "line", "--out", &line]);
    cli(&["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "pencil", "--out", &pencil]);
    let t = Instant::now();
    let (code, out) = cli(&["compare", &nu, &line, "--mode", "iso"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    s.check(
        "6.iso_nu_5_4_vs_line",
        code == 0 && report["verdict"] == "non_isomorphic",
        format!("exit {code}, {} in {} ms", report["isomorphism"], t.elapsed().as_millis()),
    );
    let g1 = build_nu(4, 2).unwrap();
    let g2 = build_switched(4, 2, Variant::Line).unwrap().graph;
    let verdict = is_isomorphic(&g1, &g2, &IsoOptions::default());
    let checked = match verdict {
        IsoVerdict::NonIsomorphic { certificate } => Certificate::Refinement { certificate }.validate(&g1, &g2).is_ok(),
        _ => false,
    };
    s.check("6.iso_certificate_rechecked", checked, "certificate re-derived from both graphs");
    let (code, out) = cli(&["compare", &nu, &pencil, "--mode", "iso"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    s.check("6.iso_nu_5_4_vs_pencil", code == 0 && report["verdict"] == "isomorphic", format!("exit {code}, {}", report["verdict"]));
}

fn c7_lemmas(s: &mut Suite) {
    let opts = VerifyOptions::default();
    for q in [2u32, 3, 4, 5] {
        for id in LemmaId::ALL.iter().copied().filter(|id| q <= 3 || id.dimension() == 2) {
            if !id.supported_q().contains(&q) {
                s.check(&format!("7.{id}_q{q}"), false, "q not supported");
                continue;
            }
            let t = Instant::now();
            let r = verify_lemma(id, q, &opts).unwrap();
            let configs: u64 = r.frames.iter().map(|f| f.configurations).sum();
            s.check(
                &format!("7.{id}_q{q}"),
                r.status == LemmaStatus::Pass,
                format!("{:?}, {configs} configurations in {:.1} s", r.status, t.elapsed().as_secs_f64()),
            );
        }
    }
}

fn unital_counts(q: usize) -> (usize, usize) {
    (q * q * q + 1, q * q * q * q - q * q * q + q * q)
}

fn c8_unitals(s: &mut Suite) {
    for q in [2u32, 3, 4, 5] {
        let plane = standard_plane(q).unwrap();
        let u = build_unital_classical(Arc::clone(&plane)).unwrap();
        let stats = validate_unital(&plane, u.points()).ok().map(|x| (x.tangents, x.secants));
        s.eq(&format!("8.classical_q{q}_lines"), stats, Some(unital_counts(q as usize)));
        let gu = build_gamma_u(&u).unwrap();
        let nu = build_nu(2, q).unwrap();
        s.eq(&format!("8.classical_q{q}_graph"), check_srg(&gu).ok().map(params), check_srg(&nu).ok().map(params));
        s.formats.push(roundtrip(&gu));
        if q <= 3 {
            let search = find_dual_onan(&u).unwrap();
            s.check(&format!("8.classical_q{q}_no_onan"), search.config.is_none(), format!("route {:?}", search.route));
        }
    }
    for q in [3u32, 5] {
        let plane = standard_plane(q).unwrap();
        let all = BmParams::all_valid(plane.space().field());
        let stride = all.len().div_ceil(20);
        let picked: Vec<BmParams> = all.iter().copied().step_by(stride).collect();
        let expected = check_srg(&build_nu(2, q).unwrap()).ok().map(params);
        let mut bad = Vec::new();
        for p in &picked {
            let u = build_unital_bm(Arc::clone(&plane), *p).unwrap();
            let stats = validate_unital(&plane, u.points()).ok().map(|x| (x.tangents, x.secants));
            let gu = build_gamma_u(&u).unwrap();
            if stats != Some(unital_counts(q as usize)) || check_srg(&gu).ok().map(params) != expected {
                bad.push((p.alpha.0, p.beta.0));
            }
        }
        s.check(
            &format!("8.bm_q{q}"),
            bad.is_empty(),
            format!("{} of {} valid pairs checked, failures {bad:?}", picked.len(), all.len()),
        );
    }
    let u = build_unital_bm(standard_plane(3).unwrap(), first_bm(3)).unwrap();
    let search = find_dual_onan(&u).unwrap();
    let ok = search.config.as_ref().is_some_and(|c| hermsrg::constructions::OnanConfig::check(&u, c.points).is_some());
    s.check("8.bm_q3_onan_witness", ok, format!("{:?} via {:?}", search.config.map(|c| c.points), search.route));

    let t = Instant::now();
    let plane = standard_plane(8).unwrap();
    let u = build_unital_bt(Arc::clone(&plane)).unwrap();
    let stats = validate_unital(&plane, u.points()).ok().map(|x| (x.tangents, x.secants));
    s.eq("8.bt_q8_lines", stats, Some(unital_counts(8)));
    let gu = build_gamma_u(&u).unwrap();
    let p = check_srg(&gu).ok().map(params);
    s.check(
        "8.bt_q8_graph",
        p.is_some() && p == check_srg(&build_nu(2, 8).unwrap()).ok().map(params),
        format!("{p:?}, same as NU(3,64), in {:.1} s", t.elapsed().as_secs_f64()),
    );
}

fn c9_cliques(s: &mut Suite) {
    for q in [2u32, 3, 4] {
        let g = build_nu(2, q).unwrap();
        let c = maximal_cliques(&g, &CliqueOptions::default());
        let qq = q as u64;
        // q^3 + 1 cliques of size q^2 and (q^3 + 1)(q^4 - q^3) of size q + 2
        let mut derived = BTreeMap::new();
        *derived.entry((qq * qq) as usize).or_insert(0) += qq * qq * qq + 1;
        *derived.entry((qq + 2) as usize).or_insert(0) += (qq * qq * qq + 1) * (qq * qq * qq * qq - qq * qq * qq);
        s.eq(&format!("9.cliques_nu_3_{}", q * q), c.counts.clone(), derived);
        if q <= 3 {
            s.eq(&format!("9.cliques_nu_3_{}_direct", q * q), naive_cliques(&g), c.counts.clone());
        }
        if q == 3 {
            s.eq("9.cliques_nu_3_9_stated", c.counts.clone(), BTreeMap::from([(5, 1764), (9, 28)]));
        }
    }
}

fn c10_formats(s: &mut Suite, dir: &Path) {
    let n = s.formats.len();
    let ok = s.formats.iter().all(|&x| x);
    s.check("10.graph6_round_trip", ok, format!("{n} built graphs"));
    let runs: Vec<Vec<String>> = vec![
        vec!["build", "--n", "4", "--q", "2", "--kind", "switched", "--variant", "line", "--out", &path_arg(dir, "r/sw.g6")],
        vec!["census", "--graph", &path_arg(dir, "r/sw.g6"), "--what", "triples", "--scope", "sample", "--count", "5000", "--seed", "7", "--out", &path_arg(dir, "r/census.json")],
        vec!["verify", "lemma", "--id", "hermcurve2", "--q", "3", "--out", &path_arg(dir, "r/lemma.json")],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = args.iter().position(|&a| a == "--out").map(|i| args[i + 1]).unwrap();
        let (code, _) = cli(&args);
        let before = std::fs::read(out).unwrap_or_default();
        let manifest = format!("{out}.manifest.json");
        let (replay, report) = cli(&["replay", &manifest]);
        let after = std::fs::read(out).unwrap_or_default();
        s.check(
            &format!("10.replay_{}", Path::new(out).file_name().unwrap().to_string_lossy()),
            code == 0 && replay == 0 && before == after && report.contains("\"identical\": true"),
            format!("exit {code}, replay exit {replay}, {} bytes identical", after.len()),
        );
    }
}

fn main() {
    let mut s = Suite { results: Vec::new(), start: Instant::now(), formats: Vec::new() };
    let dir = tempfile::tempdir().unwrap();
    let nu59 = c1_parameters(&mut s);
    let switched = c2_c3_switching(&mut s);
    c4_c5_triples(&mut s, &nu59, &switched);
    drop((nu59, switched));
    c5_cliques_certificate(&mut s, dir.path());
    c6_q2_iso(&mut s, dir.path());
    c7_lemmas(&mut s);
    c8_unitals(&mut s);
    c9_cliques(&mut s);
    c10_formats(&mut s, dir.path());

    let failed: Vec<&str> = s.results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    let unexpected: Vec<&str> = failed.iter().copied().filter(|id| !KNOWN.contains(id)).collect();
    println!(
        "acceptance: {} checks, {} passed, {} failed ({} known), {:.1} s",
        s.results.len(),
        s.results.len() - failed.len(),
        failed.len(),
        failed.len() - unexpected.len(),
        s.start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
