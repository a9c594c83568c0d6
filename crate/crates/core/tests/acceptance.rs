//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bubbletree::algebra::{int, rational, EquivariantLaurent, GradedPolynomial, GradedSymbol, Monomial, Rational};
use bubbletree::flip::resolve;
use bubbletree::fm::{enumerate_fm_strata, limit_stratum, screen_center, stratum_format, FamilyJson};
use bubbletree::localization::{boundary_pairing, euler_invert, localize_sum, FixedLocusDatum};
use bubbletree::notation::{parse_config, parse_tree, parse_tree_with_charge, print_config, print_tree};
use bubbletree::tree::{enumerate_trees, AffineDim, BubbleTree, TreeNode};
use bubbletree::wallcross::{
    delta_assemble, enumerate_walls, is_p_type_wall, wall_invariants, DeltaParams, IntersectionForm, WallOptions,
};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let e = start.elapsed();
    check(e <= limit, || format!("took {e:?}, limit {limit:?}"))
}

fn census_k3() -> Outcome {
    let start = Instant::now();
    let trees = enumerate_trees(3);
    let ghosts = trees.iter().filter(|t| t.is_ghost_tree()).count();
    check(trees.len() == 20, || format!("{} strata", trees.len()))?;
    check(ghosts == 7, || format!("{ghosts} ghost trees"))?;
    let ghost_list = [
        "[0̄[0[0[1,1],1]]]",
        "[0̄[0[1,1[1]]]]",
        "[0̄[0[1,2]]]",
        "[0̄[0[1,1,1]]]",
        "[0̄[1[0[1,1]]]]",
        "[0̄[0[1,1],1]]",
        "[1[0[1,1]]]",
    ];
    let plain = ["[3]", "[2[1]]", "[1[1,1]]", "[1[2]]", "[1[1[1]]]"];
    let mut named: Vec<String> = ghost_list.iter().map(|s| s.to_string()).collect();
    named.extend(plain.iter().map(|s| s.to_string()));
    named.extend(plain.iter().map(|s| format!("[0̄[{s}]]")));
    named.extend(["[0̄[1,2]]", "[0̄[1,1[1]]]", "[0̄[1,1,1]]"].iter().map(|s| s.to_string()));
    let parsed: Vec<BubbleTree> = named
        .iter()
        .map(|s| parse_tree_with_charge(s, Some(3)).map_err(|e| format!("{s}: {e}")))
        .collect::<Result<_, _>>()?;
    let listed: BTreeSet<&BubbleTree> = parsed.iter().collect();
    let found: BTreeSet<&BubbleTree> = trees.iter().collect();
    check(listed.len() == 20 && listed == found, || "named lists differ from the census".into())?;
    let named_ghosts: BTreeSet<&BubbleTree> = parsed[..7].iter().collect();
    let census_ghosts: BTreeSet<&BubbleTree> = trees.iter().filter(|t| t.is_ghost_tree()).collect();
    check(named_ghosts == census_ghosts, || "ghost lists differ".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("20 strata, 7 ghost, bijective with the named lists".into())
}

fn codimension_law() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for k in 1..=6 {
        let top = AffineDim::top(k);
        for t in enumerate_trees(k) {
            let codim = top - t.dimension();
            let want = AffineDim {
                constant: 4 * t.edge_count() as i64 - 3 * t.ghost_count() as i64,
                chi_sigma_halves: 0,
            };
            check(codim == want, || format!("{t}: codimension {codim}, expected {want}"))?;
            n += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{n} trees with K ≤ 6, symbolic in χ+σ"))
}

fn ghost_anchor() -> Outcome {
    let t = parse_tree("[0[0[1,1]]]").map_err(|e| e.to_string())?;
    // root of weight 0 with one child contributes 4 − (3/2)(χ+σ); unit leaves contribute 0
    let root = AffineDim {
        constant: 4,
        chi_sigma_halves: -3,
    };
    let ghost = t.dimension() - root;
    check(
        ghost
            == AffineDim {
                constant: 3,
                chi_sigma_halves: 0,
            },
        || format!("ghost contribution {ghost}"),
    )?;
    Ok("ghost vertex with two children contributes 3".into())
}

fn flips() -> Outcome {
    let start = Instant::now();
    for k in 1..=6u64 {
        let res = resolve(k, 4, 0).map_err(|e| format!("K = {k}: {e}"))?;
        check(res.poset.active().all(|r| r.info.isotropy_dim == 0), || {
            format!("K = {k}: stabilizers remain")
        })?;
        check(res.poset.active().all(|r| !r.info.tree.is_ghost_tree()), || {
            format!("K = {k}: ghost strata remain")
        })?;
        for e in &res.events {
            for (end, a) in e.ends.iter().zip(&e.audits) {
                check(a.before == a.after && end.fiber_dim == end.sphere_dim - 3, || {
                    format!("K = {k}: audit {} at {}", e.tree, end.vertex)
                })?;
            }
        }
    }
    let two = resolve(2, 4, 0).map_err(|e| e.to_string())?;
    check(two.events.len() == 1, || format!("K = 2: {} events", two.events.len()))?;
    let end = &two.events[0].ends[0];
    check(end.sphere_dim == 11 && end.fiber_dim == 8, || {
        format!("K = 2: sphere {} fiber {}", end.sphere_dim, end.fiber_dim)
    })?;
    let three = resolve(3, 4, 0).map_err(|e| e.to_string())?;
    let round = |m: u64| -> BTreeSet<BubbleTree> {
        three
            .events
            .iter()
            .filter(|e| e.round == m)
            .flat_map(|e| e.sources.iter().cloned())
            .collect()
    };
    let set = |xs: &[&str]| -> BTreeSet<BubbleTree> {
        xs.iter().map(|s| parse_tree_with_charge(s, Some(3)).unwrap()).collect()
    };
    let first = set(&["[0̄[0[0[1,1],1]]]", "[0̄[1[0[1,1]]]]", "[0̄[0[1,1],1]]", "[1[0[1,1]]]"]);
    let second = set(&["[0̄[0[1,1[1]]]]", "[0̄[0[1,2]]]", "[0̄[0[1,1,1]]]"]);
    check(round(2) == first, || "K = 3, m = 2 processes the wrong trees".into())?;
    check(round(3) == second, || "K = 3, m = 3 processes the wrong trees".into())?;
    within(start, Duration::from_secs(60))?;
    Ok("K ≤ 6 resolved and audited; K = 2 gives S^11 with fiber 8; K = 3 rounds match".into())
}

/// Trees over a weight-0 root whose non-root vertices are leaves or ghosts
/// with at least two children, generated from set partitions by brute force.
fn brute_w_trees(n: usize) -> BTreeSet<BubbleTree> {
    fn assignments(n: usize) -> Vec<Vec<usize>> {
        // restricted growth strings: every set partition exactly once
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for b in 0..=max + 1 {
                cur[i] = b;
                go(i + 1, max.max(b), cur, out);
            }
        }
        if n == 0 {
            return vec![vec![]];
        }
        cur[0] = 0;
        go(1, 0, &mut cur, &mut out);
        out
    }
    fn forests(n: usize, min: usize) -> Vec<Vec<TreeNode>> {
        let mut out = Vec::new();
        for a in assignments(n) {
            let k = a.iter().max().map_or(0, |m| m + 1);
            if k < min {
                continue;
            }
            let sizes: Vec<usize> = (0..k).map(|b| a.iter().filter(|&&x| x == b).count()).collect();
            let mut acc: Vec<Vec<TreeNode>> = vec![vec![]];
            for s in sizes {
                let opts: Vec<TreeNode> = if s == 1 {
                    vec![TreeNode::leaf(1)]
                } else {
                    forests(s, 2).into_iter().map(|f| TreeNode::with_children(0, f)).collect()
                };
                acc = acc
                    .into_iter()
                    .flat_map(|p| {
                        opts.iter().map(move |o| {
                            let mut q = p.clone();
                            q.push(o.clone());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        out
    }
    forests(n, 1)
        .into_iter()
        .map(|f| BubbleTree::from_node(TreeNode::with_children(0, f)))
        .collect()
}

fn fm_counts() -> Outcome {
    let two = enumerate_fm_strata(&[1, 1]).map_err(|e| e.to_string())?.len();
    let three = enumerate_fm_strata(&[1, 1, 1]).map_err(|e| e.to_string())?.len();
    check(two == 2 && three == 4, || format!("counts {two}, {three}"))?;
    let mut sizes = Vec::new();
    for n in 1..=5 {
        let fast: BTreeSet<BubbleTree> = enumerate_fm_strata(&vec![1; n]).map_err(|e| e.to_string())?.into_iter().collect();
        let slow = brute_w_trees(n);
        check(fast == slow, || format!("n = {n}: {} vs {}", fast.len(), slow.len()))?;
        sizes.push(fast.len());
    }
    Ok(format!("2 and 4 strata; n ≤ 5 matches brute force ({sizes:?})"))
}

fn fm_limits() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let cases = [
        ("flat", "[x1,x2,x3,x4]"),
        ("triple", "[x1[y1,y2,y3]]"),
        ("nested", "[x1[y1[z1,z2],y2]]"),
    ];
    for (name, want) in cases {
        let text = std::fs::read_to_string(format!("{dir}/{name}.json")).map_err(|e| e.to_string())?;
        let fam: FamilyJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let lim = limit_stratum(&fam.to_family().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let got = stratum_format(&lim.tree).map_err(|e| e.to_string())?;
        check(got == want, || format!("{name}: {got}, expected {want}"))?;
        for s in &lim.screens {
            check(screen_center(s).iter().all(Zero::is_zero), || {
                format!("{name}: screen {} not balanced", s.vertex)
            })?;
        }
    }
    Ok("flat, triple and nested families give the expected formats with balanced screens".into())
}

fn scalar_u(k: i64, c: Rational) -> EquivariantLaurent {
    EquivariantLaurent::term(k, GradedPolynomial::constant(c))
}

/// `Σᵢ λᵢᵏ / ∏_{j≠i}(λᵢ − λⱼ) = h_{k−n}(λ)`, the complete homogeneous
/// symmetric polynomial, by direct enumeration of monomials.
fn complete_homogeneous(lams: &[i64], m: i64) -> Rational {
    if m < 0 {
        return Rational::zero();
    }
    fn go(lams: &[i64], m: i64) -> i64 {
        match lams.split_first() {
            None => i64::from(m == 0),
            Some((&l, rest)) => (0..=m).map(|e| l.pow(e as u32) * go(rest, m - e)).sum(),
        }
    }
    int(go(lams, m))
}

fn random_poly(rng: &mut StdRng, syms: &[GradedSymbol], max_deg: u32) -> GradedPolynomial {
    let mut p = GradedPolynomial::zero();
    for _ in 0..rng.gen_range(0..4) {
        let mut m = Monomial::one();
        for s in syms {
            let e = rng.gen_range(0..3);
            if e > 0 {
                m = m.mul(&Monomial::power(s, e));
            }
        }
        if m.is_one() || m.degree() > max_deg {
            continue;
        }
        p.add_term(m, rational(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
    }
    p
}

fn localization() -> Outcome {
    let start = Instant::now();
    for n in 1..=3i64 {
        let lams: Vec<i64> = (0..=n).collect();
        for k in 0..=n + 3 {
            let loci: Vec<FixedLocusDatum> = lams
                .iter()
                .map(|&l| {
                    let e: i64 = lams.iter().filter(|&&j| j != l).map(|&j| l - j).product();
                    FixedLocusDatum::point(
                        &format!("p{l}"),
                        scalar_u(k, int(l.pow(k as u32))),
                        scalar_u(n, int(e)),
                    )
                })
                .collect();
            let got = localize_sum(&loci).map_err(|e| e.to_string())?;
            check(!got.has_negative_powers(), || format!("CP^{n}, H^{k}: negative powers in {got}"))?;
            let want = if k >= n {
                scalar_u(k - n, complete_homogeneous(&lams, k - n))
            } else {
                EquivariantLaurent::zero()
            };
            check(got == want, || format!("CP^{n}, H^{k}: {got} vs {want}"))?;
        }
    }
    let syms = [GradedSymbol::new("a", 2).unwrap(), GradedSymbol::new("b", 4).unwrap()];
    let mut rng = StdRng::seed_from_u64(7);
    for i in 0..1000 {
        let k = rng.gen_range(-2..=4);
        let top = rng.gen_range(0..=10);
        let mut c = int(rng.gen_range(1..=7));
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let mut e = scalar_u(k, c / int(rng.gen_range(1..=4)));
        for j in k - 2..=k + 1 {
            e.add_coefficient(j, random_poly(&mut rng, &syms, 8));
        }
        let inv = euler_invert(&e, top).map_err(|err| format!("sample {i}: {err}"))?;
        let prod = e.mul_truncated(&inv, top);
        check(prod == EquivariantLaurent::one(), || format!("sample {i}: E·E⁻¹ = {prod} for E = {e}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("CP^1..CP^3 match the symmetric-function oracle; 1000 random inversions exact".into())
}

fn level_zero() -> Outcome {
    let a = GradedSymbol::new("Aalpha", 0).unwrap();
    for p1 in (-20..=-3).rev() {
        let inv = wall_invariants(p1, p1).map_err(|e| e.to_string())?;
        let d = inv.d as u32;
        let delta = delta_assemble(&inv, &DeltaParams::default()).map_err(|e| e.to_string())?;
        let closed = GradedPolynomial::symbol(&a).pow(d).scale(&rational(-1, 2).pow(d as i32));
        // weight-1 action on ℂ^N with N = d + 1: one fixed point, Euler u^N
        let origin = FixedLocusDatum::point("0", EquivariantLaurent::one(), EquivariantLaurent::u_pow(inv.n));
        let gamma = EquivariantLaurent::term(1, GradedPolynomial::symbol(&a).scale(&rational(-1, 2)));
        let oracle = boundary_pairing(&[origin], &gamma, d + 1).map_err(|e| e.to_string())?;
        check(inv.n == inv.d + 1, || format!("p1 = {p1}: N = {}, d = {}", inv.n, inv.d))?;
        check(delta.polynomial == closed && oracle == closed, || {
            format!("p1 = {p1}: {} / {} / {}", delta.polynomial, oracle, closed)
        })?;
    }
    Ok("(−1/2)^d·Aα^d for d = 0..17, equal to the ℂ^N residue".into())
}

fn km_structure() -> Outcome {
    let start = Instant::now();
    let odd = IntersectionForm::diagonal(&[1, -1, -1]);
    let mixed = IntersectionForm::new(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]).map_err(|e| e.to_string())?;
    check(odd.signature() == mixed.signature() && odd.rank() == mixed.rank(), || "forms differ in topology".into())?;
    let (chi, sigma) = (odd.euler_number(), odd.signature());
    // pairs (α on the first form, α on the second form) with equal squares
    let pairs: [(&[i64], &[i64]); 3] = [(&[0, 1, 1], &[1, -1, 0]), (&[1, 2, 0], &[1, -1, 1]), (&[0, 2, 0], &[1, -2, 0])];
    let mut checked = 0;
    for r in 0..=3i64 {
        for (a1, a2) in pairs {
            let sq = odd.square(a1);
            check(sq == mixed.square(a2), || format!("{a1:?} and {a2:?} have different squares"))?;
            let p1 = sq - 4 * r;
            if !is_p_type_wall(a1, a1, p1, &odd) || !is_p_type_wall(a2, a2, p1, &mixed) {
                return Err(format!("α² = {sq}, p1 = {p1} is not a wall"));
            }
            let i1 = wall_invariants(odd.square(a1), p1).map_err(|e| e.to_string())?;
            let i2 = wall_invariants(mixed.square(a2), p1).map_err(|e| e.to_string())?;
            if i1.d < 2 * i1.r {
                continue;
            }
            for params in [DeltaParams::default(), DeltaParams::with_topology(chi, sigma)] {
                let d1 = delta_assemble(&i1, &params).map_err(|e| format!("r = {r}: {e}"))?;
                let d2 = delta_assemble(&i2, &params).map_err(|e| format!("r = {r}: {e}"))?;
                check(d1.coefficients.len() == r as usize + 1, || format!("r = {r}: {} coefficients", d1.coefficients.len()))?;
                for (m, _) in d1.polynomial.terms() {
                    let j = m.exponent_of("Qsym") as i64;
                    let i = r - j;
                    check(
                        (0..=r).contains(&i) && m.exponent_of("Aalpha") as i64 == d1.alpha_exponent(i as u32),
                        || format!("r = {r}: term {m} off shape"),
                    )?;
                }
                check(d1.coefficients == d2.coefficients, || format!("r = {r}, α² = {sq}: coefficient lists differ"))?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{checked} comparisons for r ≤ 3 on two forms: shape holds, coefficients identical"))
}

/// Every P-type class in `|αᵢ| ≤ 12` that strictly separates the endpoints,
/// one of each ±α pair.
fn oracle_walls(q: &[Vec<i64>], c: &[i64], p1: i64, wm: &[i64], wp: &[i64]) -> BTreeSet<Vec<i64>> {
    let n = q.len();
    let pair = |x: &[i64], y: &[i64]| -> i64 { (0..n).map(|i| (0..n).map(|j| x[i] * q[i][j] * y[j]).sum::<i64>()).sum() };
    let mut out = BTreeSet::new();
    let mut x = vec![-12i64; n];
    loop {
        let sq = pair(&x, &x);
        let parity = x.iter().zip(c).all(|(a, b)| (a - b) % 2 == 0);
        let (a, b) = (pair(&x, wm), pair(&x, wp));
        if parity && sq < 0 && sq >= p1 && a < 0 && b > 0 {
            out.insert(x.clone());
        }
        let mut i = 0;
        while i < n && x[i] == 12 {
            x[i] = -12;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    out
}

fn wall_enumeration() -> Outcome {
    let forms: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 0], vec![0, -1]],
        vec![vec![1, 0], vec![0, -2]],
        vec![vec![2, 1], vec![1, -2]],
        vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]],
        vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]],
        vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]],
    ];
    let mut rng = StdRng::seed_from_u64(11);
    let (mut instances, mut walls, mut tries) = (0, 0, 0);
    while instances < 40 {
        tries += 1;
        if tries > 100_000 {
            return Err(format!("only {instances} admissible instances"));
        }
        let m = &forms[rng.gen_range(0..forms.len())];
        let q = IntersectionForm::new(m.clone()).map_err(|e| e.to_string())?;
        let n = q.rank();
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let p1 = -rng.gen_range(1..=8);
        let wm: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
        let wp: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
        if q.square(&wm) <= 0 || q.square(&wp) <= 0 || q.pair(&wm, &wp) <= 0 {
            continue;
        }
        let qm: Vec<Rational> = wm.iter().map(|&v| int(v)).collect();
        let qp: Vec<Rational> = wp.iter().map(|&v| int(v)).collect();
        let s = enumerate_walls(&q, &c, p1, &qm, &qp, WallOptions::default()).map_err(|e| e.to_string())?;
        if s.bounds.iter().any(|&b| b > 12) {
            continue;
        }
        let got: BTreeSet<Vec<i64>> = s.walls.iter().map(|w| w.alpha.clone()).collect();
        let want = oracle_walls(m, &c, p1, &wm, &wp);
        check(got == want, || format!("Q = {m:?}, c = {c:?}, p1 = {p1}, {wm:?} → {wp:?}: {got:?} vs {want:?}"))?;
        for w in &s.walls {
            let t = &w.t_star;
            check(t.is_positive() && *t < Rational::one(), || format!("t* = {t} out of range"))?;
        }
        walls += got.len();
        instances += 1;
    }
    Ok(format!("{instances} random instances on rank ≤ 3 forms, {walls} walls, all equal to the box oracle"))
}

fn round_trips() -> Outcome {
    let mut n = 0;
    for k in 1..=6 {
        for t in enumerate_trees(k) {
            let s = print_tree(&t);
            let back = parse_tree(&s).map_err(|e| format!("{s}: {e}"))?;
            check(back == t && print_tree(&back) == s, || format!("{s} does not round-trip"))?;
            n += 1;
        }
    }
    let mut m = 0;
    let weight_sets: Vec<Vec<u64>> = (1..=5).map(|n| vec![1; n]).chain([vec![1, 2], vec![1, 2, 3]]).collect();
    for w in weight_sets {
        for t in enumerate_fm_strata(&w).map_err(|e| e.to_string())? {
            let s = stratum_format(&t).map_err(|e| e.to_string())?;
            let c = parse_config(&s).map_err(|e| format!("{s}: {e}"))?;
            check(print_config(&c) == s, || format!("{s} prints as {}", print_config(&c)))?;
            check(c.to_tree(&|_| 1) == bubbletree::fm::unit_shape(&t), || format!("{s} has the wrong shape"))?;
            m += 1;
        }
    }
    Ok(format!("{n} trees and {m} stratum formats round-trip"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("charge-3 census", census_k3),
        ("codimension law", codimension_law),
        ("ghost dimension anchor", ghost_anchor),
        ("flip resolution", flips),
        ("configuration strata counts", fm_counts),
        ("configuration limits", fm_limits),
        ("localization oracles", localization),
        ("level-zero wall term", level_zero),
        ("wall term structure", km_structure),
        ("wall enumeration", wall_enumeration),
        ("parser round trip", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
