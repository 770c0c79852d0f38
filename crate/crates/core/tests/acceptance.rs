//! Acceptance checks. Each prints one PASS/FAIL line; the process exits
//! nonzero if any check fails. Expected values come from oracles written
//! here (Hall's recursion, determinantal divisors, elimination mod p, walk
//! closures, orbit arithmetic), not from the library's own formulas.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankgrad::chains::{farber_chain, farber_defect, gradient_sequence, hnn_chain, lamplighter_chain, Chain, ChainCaps, GradientReport};
use rankgrad::coset::{counts_by_index, low_index, Provenance, DEFAULT_COSET_CAP, DEFAULT_NODE_CAP};
use rankgrad::graphings::{graphing_from_generators, is_l_graphing, rank_bound, Graphing};
use rankgrad::homology::{smith_normal_form, HomologyReport, Matrix};
use rankgrad::presets::{figure_eight, free_group, surface_genus2, symmetric3};
use rankgrad::subgroup::{rank_bounds, schreier_generators, stallings_fold, TietzeLevel};
use rankgrad::towers::{build_tower, finite_group, tower_report, DEFAULT_LIFT_ATTEMPTS};
use rankgrad::{CosetTable, Fraction, Letter, Presentation, Rational, SubgroupSpec, Word};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn words(p: &Presentation, ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|w| p.parse_word(w).unwrap()).collect()
}

/// Subgroups of index n in the free group of rank r:
/// a_n = n·(n!)^(r−1) − Σ_{k<n} ((n−k)!)^(r−1)·a_k.
fn hall(r: u32, nmax: usize) -> Vec<BigInt> {
    let fact = |n: usize| (1..=n).fold(BigInt::from(1), |acc, k| acc * k);
    let mut a: Vec<BigInt> = Vec::new();
    for n in 1..=nmax {
        let mut v = BigInt::from(n) * fact(n).pow(r - 1);
        for k in 1..n {
            v -= fact(n - k).pow(r - 1) * &a[k - 1];
        }
        a.push(v);
    }
    a
}

fn hall_counts() -> Check {
    let tables = low_index(&free_group(2), 5, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let counts: Vec<BigInt> = counts_by_index(&tables, 5).into_iter().map(BigInt::from).collect();
    let oracle = hall(2, 5);
    ensure(counts == oracle, || format!("counts {counts:?}, Hall {oracle:?}"))?;
    Ok(format!("F2 counts {}", counts.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
}

fn nielsen_schreier() -> Check {
    let mut checked = 0;
    for (r, nmax) in [(2usize, 4usize), (3, 3)] {
        let p = free_group(r);
        for t in low_index(&p, nmax, DEFAULT_NODE_CAP).map_err(|e| e.to_string())? {
            let n = t.index();
            let expect = 1 + n * (r - 1);
            let fold = stallings_fold(r, &SubgroupSpec::new(schreier_generators(&t).generators));
            ensure(fold.rank == expect && fold.index == Some(n), || format!("F{r} index {n}: folded rank {} index {:?}", fold.rank, fold.index))?;
            let b = rank_bounds(&p, &t, &[2, 3, 5], TietzeLevel::default()).map_err(|e| e.to_string())?;
            ensure(b.lower == expect && b.upper == expect, || format!("F{r} index {n}: interval [{}, {}], expected {expect}", b.lower, b.upper))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} subgroups, all rank 1 + n(r-1) with degenerate intervals"))
}

fn gradient(c: &Chain) -> GradientReport {
    gradient_sequence(c, &[2, 3, 5], TietzeLevel::default())
}

fn hnn_chain_check(corpus: &mut Vec<(String, GradientReport)>) -> Check {
    let c = hnn_chain(&figure_eight(), "t", 12, &ChainCaps::default()).map_err(|e| e.to_string())?;
    let g = gradient(&c);
    let levels: Vec<_> = g.reports().collect();
    ensure(levels.len() == 12, || format!("{} of 12 levels computed", levels.len()))?;
    for (k, l) in levels.iter().enumerate() {
        let n = k + 1;
        ensure(l.index == n, || format!("level {n}: index {}", l.index))?;
        ensure(l.rank_upper <= 3, || format!("level {n}: rank upper {}", l.rank_upper))?;
        ensure(l.ratio_rank_upper <= Fraction::new(2, n as i64), || format!("level {n}: ratio {}", l.ratio_rank_upper))?;
    }
    let uppers: Vec<usize> = levels.iter().map(|l| l.rank_upper).collect();
    corpus.push(("fig8 hnn 1..12".into(), g));
    Ok(format!("rank upper bounds {uppers:?}"))
}

fn lamplighter_check(corpus: &mut Vec<(String, GradientReport)>) -> Check {
    let c = lamplighter_chain(3, 2, &ChainCaps::default()).map_err(|e| e.to_string())?;
    let g = gradient_sequence(&c, &[2], TietzeLevel::default());
    let a = Word::generator(0);
    for l in g.reports().filter(|l| l.n >= 1) {
        let n = l.n as u32;
        ensure(l.index == 1 << n, || format!("level {n}: index {}", l.index))?;
        ensure(l.b1p[&2] == (1 << n) + 1, || format!("level {n}: b1,2 = {}", l.b1p[&2]))?;
        ensure(l.ratio_b1p[&2] == Fraction::from_integer(1), || format!("level {n}: ratio {}", l.ratio_b1p[&2]))?;
    }
    for l in &c.levels {
        let d = farber_defect(&c, &a, l.n).unwrap();
        ensure(d == Fraction::from_integer(1), || format!("level {}: defect of a is {d}", l.n))?;
    }
    corpus.push(("lamplighter W3 depth 2".into(), g));
    Ok("W3 levels 1, 2: b1,2 = 2^n + 1, ratio 1, a fixes every coset".into())
}

fn tower_check() -> Check {
    let a = finite_group(&symmetric3(), &[2]).map_err(|e| e.to_string())?;
    let mu = Rational::new(3.into(), 4.into());
    let tower = build_tower(&a, &mu, 3, 0, DEFAULT_LIFT_ATTEMPTS).map_err(|e| e.to_string())?;
    let deepest = tower.levels.last().unwrap().n;
    ensure(tower.levels.len() == 4 && deepest <= 2000, || format!("{} levels, deepest n = {deepest}", tower.levels.len()))?;
    let report = tower_report(&tower, &a, 2, TietzeLevel::default(), DEFAULT_COSET_CAP).map_err(|e| e.to_string())?;
    let limits = [Fraction::new(11, 9), Fraction::new(8, 9), Fraction::new(5, 9)];
    ensure(report.limits == limits, || format!("limits {:?}", report.limits))?;
    let b1p_a = a.b1p[&2];
    for (l, c) in report.levels.iter().zip(&tower.levels) {
        let n = c.n;
        let (fixed, regular) = c.layout(a.order).ok_or_else(|| format!("level {}: orbits not of size 1 or |A|", l.j))?;
        ensure(fixed + regular * a.order == n && l.orbit_sum, || format!("level {}: {fixed} + {regular}·6 != {n}", l.j))?;
        let p = fixed + regular;
        ensure(l.computed.index == n, || format!("level {}: index {}", l.j, l.computed.index))?;
        ensure(l.computed.b1p == n - p + fixed * b1p_a + 1, || format!("level {}: b1,2 = {}", l.j, l.computed.b1p))?;
        ensure(l.computed.beta1 == n - p + 1, || format!("level {}: beta1 = {}", l.j, l.computed.beta1))?;
        let rank = n - p + fixed * a.rank + 1;
        ensure(l.computed.rank_lower <= rank && rank <= l.computed.rank_upper, || {
            format!("level {}: rank {rank} outside [{}, {}]", l.j, l.computed.rank_lower, l.computed.rank_upper)
        })?;
        let alt = l.comparison("beta1 = n-np+1").ok_or("missing n-np+1 comparison")?;
        ensure(n == 1 || !alt.matches, || format!("level {}: n-np+1 unexpectedly matches", l.j))?;
        ensure(l.ratios_strictly_ordered, || format!("level {}: ratios {:?} not strictly ordered", l.j, l.ratios))?;
    }
    let last = report.levels.last().unwrap();
    let tol = Fraction::new(1, last.p as i64);
    for (r, lim) in last.ratios.iter().zip(&limits) {
        let gap = if r >= lim { Fraction(r.value() - lim.value()) } else { Fraction(lim.value() - r.value()) };
        ensure(gap <= tol, || format!("deepest ratio {r} is {gap} from {lim}"))?;
    }
    let ns: Vec<usize> = tower.levels.iter().map(|c| c.n).collect();
    Ok(format!("S3 mu 3/4 levels n = {ns:?}; b1,2 and beta1 = n-p+1 exact, n-np+1 flagged"))
}

fn graphing_check() -> Check {
    let p = free_group(2);
    let h = SubgroupSpec::new(words(&p, &["a^2", "b", "a b a^-1"]));
    let c = farber_chain(&p, &h, 2, &ChainCaps::default()).map_err(|e| e.to_string())?;
    let level = c.level(2).ok_or("no level 2")?;
    ensure(level.table.index() == 4, || format!("Δ2 index {}", level.table.index()))?;
    let gens = level.spec.generators.clone();
    ensure(gens.len() == 5, || format!("{} generators", gens.len()))?;
    let m = graphing_from_generators(&c, 2, &gens).map_err(|e| e.to_string())?;
    ensure(m.edge_measure() == Fraction::new(5 + 3, 4), || format!("e(M) = {}", m.edge_measure()))?;
    ensure(m.edge_measure() == Fraction::from_integer(2), || "e(M) != 2".into())?;
    let l = is_l_graphing(&m, &c, 2, DEFAULT_COSET_CAP).map_err(|e| e.to_string())?;
    ensure(l.is_true(), || format!("L-check {l:?}"))?;
    let bound = rank_bound(&m, &c, 2, DEFAULT_COSET_CAP).map_err(|e| e.to_string())?;
    let exact = rank_bounds(&p, &level.table, &[2], TietzeLevel::default()).map_err(|e| e.to_string())?;
    ensure(bound == 5 && exact.lower == 5 && exact.upper == 5, || format!("bound {bound}, rank [{}, {}]", exact.lower, exact.upper))?;

    let whole = SubgroupSpec::new(words(&p, &["a", "b"]));
    let c1 = farber_chain(&p, &whole, 1, &ChainCaps::default()).map_err(|e| e.to_string())?;
    let m1 = graphing_from_generators(&c1, 1, &c1.level(1).unwrap().spec.generators).map_err(|e| e.to_string())?;
    let b1 = rank_bound(&m1, &c1, 1, DEFAULT_COSET_CAP).map_err(|e| e.to_string())?;
    ensure(m1.index() == 1 && b1 == 2, || format!("index-1 bound {b1}"))?;
    Ok("Δ2: e(M) = 2, L-graphing, bound 5 = rank; index 1: bound 2 = d".into())
}

fn random_transitive(rng: &mut ChaCha8Rng, n: usize) -> CosetTable {
    loop {
        let perms: Vec<Vec<usize>> = (0..2)
            .map(|_| {
                let mut v: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    v.swap(i, rng.gen_range(0..=i));
                }
                v
            })
            .collect();
        if let Ok(t) = CosetTable::from_perms(perms, Provenance::Derived { tag: "random".into() }) {
            return t;
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    loop {
        let w = Word::from_letters((0..len).map(|_| Letter::from_column(rng.gen_range(0..4))));
        if w.len() == len {
            return w;
        }
    }
}

/// Pairs joined by a walk of at most `k` steps in `r` (which contains the
/// diagonal, so exactly `k` steps gives the same set).
fn walk_closure(r: &BTreeSet<(usize, usize)>, n: usize, k: usize) -> BTreeSet<(usize, usize)> {
    let mut reach: Vec<BTreeSet<usize>> = (0..n).map(|x| r.iter().filter(|e| e.0 == x).map(|e| e.1).collect()).collect();
    for _ in 1..k {
        reach = reach.iter().map(|set| set.iter().flat_map(|&y| r.iter().filter(move |e| e.0 == y).map(|e| e.1)).collect()).collect();
    }
    reach.into_iter().enumerate().flat_map(|(x, s)| s.into_iter().map(move |y| (x, y))).collect()
}

fn powering_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut largest = 0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=8);
        let t = random_transitive(&mut rng, n);
        let mut m = Graphing::empty(n);
        for _ in 0..rng.gen_range(1..=4) {
            let len = rng.gen_range(1..=2);
            m.insert(rng.gen_range(0..n), random_word(&mut rng, len)).unwrap();
        }
        let k = rng.gen_range(1..=5);
        let power = m.power(k, &t, 64).map_err(|e| format!("trial {trial}: {e}"))?;
        let lhs = power.projected(&t).unwrap();
        let rhs = walk_closure(&m.bar(&t).unwrap().projected(&t).unwrap(), n, k);
        ensure(lhs == rhs, || format!("trial {trial} (index {n}, k {k}): {} vs {} pairs", lhs.len(), rhs.len()))?;
        largest = largest.max(power.incidence_count());
    }
    Ok(format!("100 graphings, index <= 8, k <= 5 (largest power {largest} incidences)"))
}

fn monotonicity_check(corpus: &mut Vec<(String, GradientReport)>) -> Check {
    let caps = ChainCaps::default();
    let f2 = free_group(2);
    let extra = [
        ("F2 farber depth 3", farber_chain(&f2, &SubgroupSpec::new(words(&f2, &["a", "b"])), 3, &caps)),
        ("F2 farber from index 2, depth 3", farber_chain(&f2, &SubgroupSpec::new(words(&f2, &["a^2", "b", "a b a^-1"])), 3, &caps)),
        ("surface2 farber depth 2", farber_chain(&surface_genus2(), &SubgroupSpec::new((0..4).map(Word::generator).collect()), 2, &caps)),
        ("lamplighter W2 depth 2", lamplighter_chain(2, 2, &caps)),
    ];
    for (name, c) in extra {
        let c = c.map_err(|e| format!("{name}: {e}"))?;
        corpus.push((name.into(), gradient(&c)));
    }
    let a = finite_group(&symmetric3(), &[2]).map_err(|e| e.to_string())?;
    let tower = build_tower(&a, &Rational::new(1.into(), 2.into()), 2, 0, DEFAULT_LIFT_ATTEMPTS).map_err(|e| e.to_string())?;
    let c = tower.to_chain(&a).map_err(|e| e.to_string())?;
    corpus.push(("S3 tower mu 1/2 depth 2".into(), gradient(&c)));

    for (name, g) in corpus.iter() {
        let ratios: Vec<&Fraction> = g.reports().map(|l| &l.ratio_rank_upper).collect();
        ensure(g.reports().count() == g.levels.len(), || format!("{name}: some levels failed"))?;
        ensure(ratios.windows(2).all(|w| w[1] <= w[0]), || format!("{name}: ratios {ratios:?}"))?;
    }
    Ok(format!("{} chains non-increasing", corpus.len()))
}

fn farber_freeness() -> Check {
    let p = free_group(2);
    // Δ2 contains every square, so the starting subgroup must keep short
    // words out: the kernel of a ↦ 1, b ↦ 2 in ℤ/5 contains no nontrivial
    // reduced word of length ≤ 2.
    let h = SubgroupSpec::normal_closure(words(&p, &["a^5", "b a^-2"]));
    let c = farber_chain(&p, &h, 3, &ChainCaps::default()).map_err(|e| e.to_string())?;
    ensure(c.levels.len() == 3 && c.truncated.is_none(), || format!("chain stopped early: {:?}", c.truncated))?;
    let mut short: BTreeSet<Word> = BTreeSet::new();
    for x in 0..4 {
        short.insert(Word::from_letters([Letter::from_column(x)]));
        for y in 0..4 {
            short.insert(Word::from_letters([Letter::from_column(x), Letter::from_column(y)]));
        }
    }
    short.retain(|w| !w.is_identity());
    ensure(short.len() == 16, || format!("{} short words", short.len()))?;
    for l in c.levels.iter().filter(|l| l.n >= 2) {
        for w in &short {
            let d = farber_defect(&c, w, l.n).unwrap();
            ensure(d == Fraction::zero(), || format!("level {}: {} has defect {d}", l.n, p.display_word(w)))?;
        }
    }
    Ok(format!("indices {:?}; all {} nontrivial reduced words of length <= 2 act freely at n >= 2", c.indices(), short.len()))
}

fn det(m: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Invariant factors as quotients of consecutive determinantal divisors.
fn minor_gcd_diagonal(m: &[Vec<i64>], rows: usize, cols: usize) -> Vec<i128> {
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

fn rank_mod(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn snf_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let primes = [2u64, 3, 5];
    for trial in 0..500 {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let snf = smith_normal_form(&Matrix::from_rows(cols, m.clone())).map_err(|e| format!("trial {trial}: {e}"))?;
        let got: Vec<i128> = snf.diagonal.iter().map(|&d| d as i128).collect();
        let want = minor_gcd_diagonal(&m, rows, cols);
        ensure(got == want, || format!("trial {trial}: {got:?} vs {want:?} for {m:?}"))?;
        let report = HomologyReport::from_smith(cols, &snf.diagonal.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>(), &primes);
        for p in primes {
            let want = cols - rank_mod(&m, p as i64);
            ensure(report.b1p[&p] == want, || format!("trial {trial}: b1,{p} = {} vs {want}", report.b1p[&p]))?;
        }
    }
    Ok("500 matrices: diagonals match determinantal divisors, b1,p match elimination mod 2, 3, 5".into())
}

fn surface_check() -> Check {
    let p = surface_genus2();
    let tables = low_index(&p, 3, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let mut counts = [0usize; 2];
    for t in tables.iter().filter(|t| t.index() >= 2) {
        let n = t.index();
        let b = rank_bounds(&p, t, &[2], TietzeLevel::default()).map_err(|e| e.to_string())?;
        let beta1 = b.homology.beta1;
        ensure(beta1 == 2 * n + 2, || format!("index {n}: beta1 = {beta1}"))?;
        ensure(Fraction::new(beta1 as i64 - 1, n as i64) == Fraction::new(2 * n as i64 + 1, n as i64), || "ratio".into())?;
        counts[n - 2] += 1;
    }
    ensure(Fraction::new(5, 2) > Fraction::new(7, 3) && Fraction::new(7, 3) > Fraction::from_integer(2), || "ordering".into())?;
    Ok(format!("{} index-2 and {} index-3 subgroups, beta1 = 2n + 2, ratios 5/2 > 7/3", counts[0], counts[1]))
}

fn main() {
    let mut corpus = Vec::new();
    let checks: Vec<(&str, Duration, Box<dyn FnOnce(&mut Vec<(String, GradientReport)>) -> Check>)> = vec![
        ("Hall counts", Duration::from_secs(60), Box::new(|_| hall_counts())),
        ("Nielsen-Schreier exactness", Duration::from_secs(60), Box::new(|_| nielsen_schreier())),
        ("HNN chain", Duration::from_secs(120), Box::new(hnn_chain_check)),
        ("Lamplighter", Duration::from_secs(300), Box::new(lamplighter_check)),
        ("Tower formulas", Duration::from_secs(300), Box::new(|_| tower_check())),
        ("Graphing round trip", Duration::from_secs(10), Box::new(|_| graphing_check())),
        ("Powering identity", Duration::from_secs(60), Box::new(|_| powering_check())),
        ("Monotonicity", Duration::from_secs(300), Box::new(monotonicity_check)),
        ("Farber chain freeness", Duration::from_secs(30), Box::new(|_| farber_freeness())),
        ("SNF oracle", Duration::from_secs(60), Box::new(|_| snf_oracle())),
        ("Surface group", Duration::from_secs(120), Box::new(|_| surface_check())),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in checks.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check(&mut corpus);
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.1?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({took:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({took:.2?})", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
