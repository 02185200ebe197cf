use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use svtab::biject::{alpha, alpha_inv, beta, beta_inv, compose_tableau, decompose_tableau, phi, phi_inv};
use svtab::closedform::{
    act_count, ballot_count, catalan, e_count, f_count, f_table_recursive, kreweras, more_shapes_counts, narayana,
    peaks_count, row_sums, row_sums_formula,
};
use svtab::enumerate::{
    count_svsyt, gen_avoid321, gen_ballot_tableaux, gen_ballotlike, gen_near_rectangle_union, gen_paths, gen_svsyt,
    gen_two_row_union,
};
use svtab::posets::{equidistribution_check, expected_ddeg, pi_perm, sum_identity_check, sv_routes_agree, vartheta, Poset, PosetSpec};
use svtab::series::{
    expected_columns_formula, expected_steps, expected_umber_formula, no_early_denim_series, peaks_genfun,
    step_polynomial, SeriesContext,
};
use svtab::stats::{dyck_type, inner_peaks, inner_valleys, q_catalan_tilde, q_narayana_tilde, rl_minima};
use svtab::{ColoredPath, Marker, MultiPoly, Partition, PathTag, QPoly, Rational, SkewShape, Step};

use crate::output::Sink;
use crate::{Budget, Failure, Format, Suite, VerifyArgs};

const CATALOG: &str = include_str!("../../core/tests/fixtures/poset_catalog.json");

/// `(n, i, e, f)` for the reference table of ballotlike path counts.
const EF_TABLE: &str = include_str!("../../core/tests/fixtures/ef_table.csv");
const Q_CATALAN: &str = include_str!("../../core/tests/fixtures/q_catalan.csv");
const Q_NARAYANA: &str = include_str!("../../core/tests/fixtures/q_narayana.csv");

#[derive(Debug, Serialize)]
struct Counterexample {
    instance: String,
    expected: String,
    actual: String,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    suite: &'static str,
    identity: &'static str,
    range: String,
    instances: usize,
    status: &'static str,
    /// The first failing instance, in the order instances grow.
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    suite: String,
    passed: bool,
    checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

struct Params {
    desk: bool,
    order: usize,
    max_elements: usize,
    max_k: usize,
    timings: bool,
}

impl Params {
    /// `desk` at full budget, `quick` otherwise.
    fn pick(&self, desk: usize, quick: usize) -> usize {
        if self.desk {
            desk
        } else {
            quick
        }
    }
}

type SuiteFn = fn(&mut Runner);

struct Runner<'a> {
    params: &'a Params,
    checks: Vec<CheckReport>,
}

impl Runner<'_> {
    /// Evaluates `f` on every instance in parallel; each returns
    /// `(expected, actual)` and the check passes when all agree.
    fn check<I, F>(&mut self, suite: &'static str, identity: &'static str, range: String, instances: Vec<I>, f: F)
    where
        I: Display + Sync,
        F: Fn(&I) -> (String, String) + Sync,
    {
        let start = Instant::now();
        let results: Vec<(String, String)> = instances.par_iter().map(&f).collect();
        let counterexample = instances.iter().zip(results).find(|(_, (e, a))| e != a).map(|(i, (expected, actual))| {
            Counterexample {
                instance: i.to_string(),
                expected,
                actual,
            }
        });
        self.checks.push(CheckReport {
            suite,
            identity,
            range,
            instances: instances.len(),
            status: if counterexample.is_none() { "pass" } else { "fail" },
            counterexample,
            wall_ms: self.params.timings.then(|| start.elapsed().as_millis()),
        });
    }
}

fn s(x: impl ToString) -> String {
    x.to_string()
}

/// `"ok"` when every object passes, otherwise the first offender.
fn all_ok<T>(items: impl IntoIterator<Item = T>, mut ok: impl FnMut(&T) -> Result<(), String>) -> (String, String) {
    let actual = items.into_iter().find_map(|x| ok(&x).err()).unwrap_or_else(|| "ok".into());
    ("ok".into(), actual)
}

#[derive(Clone, Copy)]
struct Pair(usize, usize);

impl Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

fn pairs(max_n: usize, lo: usize) -> Vec<Pair> {
    (lo..=max_n).flat_map(|n| (0..=n).map(move |i| Pair(n, i))).collect()
}

fn suite_catalan(r: &mut Runner) {
    let max = r.params.pick(12, 9);
    r.check("catalan", "two-row union with n entries has cat(n-1) members", format!("2 <= n <= {max}"), (2..=max).collect(), |&n| {
        (s(catalan(n - 1)), s(gen_two_row_union(n).count()))
    });
}

fn suite_ef(r: &mut Runner) {
    let rows: Vec<[usize; 4]> = EF_TABLE
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<usize> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    let recursive = f_table_recursive(8);
    let cells: Vec<Pair> = rows.iter().map(|r| Pair(r[0], r[1])).collect();
    r.check("ef", "e and f reproduce the reference table", "0 <= i <= n <= 8".into(), cells, |&Pair(n, i)| {
        let row = rows.iter().find(|r| r[0] == n && r[1] == i).unwrap();
        (format!("{},{}", row[2], row[3]), format!("{},{}", e_count(n, i), f_count(n, i)))
    });
    r.check("ef", "f recursion agrees with the closed form", "0 <= i <= n <= 8".into(), pairs(8, 0), |&Pair(n, i)| {
        (s(f_count(n, i)), s(&recursive[n][i]))
    });
    r.check("ef", "column sums are 2^(n-1) and C(2n-2,n-1) - 2^(n-2)", "2 <= n <= 8".into(), (2..=8).collect(), |&n| {
        (format!("{:?}", row_sums_formula(n).unwrap()), format!("{:?}", row_sums(n)))
    });
}

fn suite_ballot(r: &mut Runner) {
    let max = r.params.pick(8, 6);
    r.check("ballot", "ballot formula = e + f = paths = tableaux", format!("0 <= i <= n <= {max}"), pairs(max, 0), |&Pair(n, i)| {
        let f = ballot_count(n, i).unwrap();
        let counts = [e_count(n, i) + f_count(n, i), BigInt::from(gen_ballotlike(n, i).count()), BigInt::from(gen_ballot_tableaux(n, i).count())];
        (format!("{f} {f} {f}"), format!("{} {} {}", counts[0], counts[1], counts[2]))
    });
}

fn suite_closed_forms(r: &mut Runner) {
    let max = r.params.pick(12, 9);
    let bk: Vec<Pair> = (1..).take_while(|b| 2 * b <= max).flat_map(|b| (0..=max - 2 * b).map(move |k| Pair(b, k))).collect();
    let perms: Vec<Vec<_>> = (0..max).map(|m| gen_avoid321(m).collect()).collect();
    r.check("closed-forms", "act = peaks = |SYT+k(2 x b)| = 321-avoiders with b-1 valleys", format!("(b,k), 2b+k <= {max}"), bk, |&Pair(b, k)| {
        let shape = SkewShape::straight(Partition::new(vec![b, b]).unwrap());
        let oracle = count_svsyt(&shape, k);
        let valleys = perms[2 * b + k - 1].iter().filter(|p| inner_valleys(p).len() == b - 1).count();
        (
            format!("{oracle} {oracle} {oracle}"),
            format!("{} {} {valleys}", act_count(b, k).unwrap(), peaks_count(b, k).unwrap()),
        )
    });
    let max = r.params.pick(8, 7);
    r.check("closed-forms", "near-rectangle count is cat(n) - cat(n-1)", format!("3 <= n <= {max}"), (3..=max).collect(), |&n| {
        (s(more_shapes_counts(n).unwrap().0), s(gen_near_rectangle_union(n).count()))
    });
    r.check("closed-forms", "Narayana and Kreweras refinements of the two-row union", format!("2 <= n <= {}", max + 1), (2..=max + 1).collect(), |&n| {
        let mut tally: BTreeMap<(usize, BTreeMap<usize, usize>), usize> = BTreeMap::new();
        for t in gen_two_row_union(n) {
            let d = dyck_type(&t);
            *tally.entry((d.m, d.mu)).or_default() += 1;
        }
        let mut by_m: BTreeMap<usize, usize> = BTreeMap::new();
        for ((m, _), c) in &tally {
            *by_m.entry(*m).or_default() += c;
        }
        let expected: Vec<String> = tally.keys().map(|(m, mu)| s(kreweras(n - 1, *m, mu).unwrap()))
            .chain(by_m.keys().map(|&m| s(narayana(n - 1, m).unwrap()))).collect();
        let actual: Vec<String> = tally.values().chain(by_m.values()).map(s).collect();
        (expected.join(" "), actual.join(" "))
    });
}

fn suite_bijections(r: &mut Runner) {
    let max = r.params.pick(10, 8);
    r.check("bijections", "alpha roundtrip, right-to-left minima = top row, valleys = columns - 1", format!("2 <= n <= {max}"), (2..=max).collect(), |&n| {
        all_ok(gen_two_row_union(n), |t| {
            let p = alpha(t).map_err(|e| format!("{t}: {e}"))?;
            let ok = alpha_inv(&p).ok().as_ref() == Some(t)
                && rl_minima(&p) == t.row_entries(0)
                && inner_valleys(&p).len() + 1 == t.columns();
            if ok { Ok(()) } else { Err(format!("{t} -> {p}")) }
        })
    });
    r.check("bijections", "beta roundtrip", format!("2 <= n <= {max}"), (2..=max).collect(), |&n| {
        all_ok(gen_two_row_union(n), |t| {
            let p = beta(t).map_err(|e| format!("{t}: {e}"))?;
            if beta_inv(&p).ok().as_ref() == Some(t) { Ok(()) } else { Err(format!("{t} -> {p}")) }
        })
    });
    let max = r.params.pick(8, 6);
    r.check("bijections", "compose inverts decompose", format!("|shape| + k <= {max}, at most 3 rows"), (1..=max).collect(), |&size| {
        let tableaux = Partition::all(size)
            .into_iter()
            .filter(|p| p.len() <= 3)
            .flat_map(|shape| (0..=max - size).flat_map(move |k| gen_svsyt(&shape, k)));
        all_ok(tableaux, |t| {
            if compose_tableau(&decompose_tableau(t)).ok().as_ref() == Some(t) { Ok(()) } else { Err(t.to_string()) }
        })
    });
    let max = r.params.pick(9, 7);
    r.check("bijections", "phi roundtrip and U + u drops by one", format!("1 <= n <= {max}"), (1..=max).collect(), |&n| {
        all_ok(gen_paths(PathTag::MotzT, n), |p| {
            let image = phi(p).map_err(|e| format!("{p}: {e}"))?;
            let (a, b) = (p.step_counts(), image.step_counts());
            if phi_inv(&image).ok().as_ref() == Some(p) && a[0] + a[2] == b[0] + b[2] + 1 {
                Ok(())
            } else {
                Err(format!("{p} -> {image}"))
            }
        })
    });
}

fn suite_paths(r: &mut Runner) {
    let max = r.params.pick(10, 8);
    r.check("paths", "family sizes cat(n+1), cat(n), cat(n), cat(n-1)", format!("2 <= n <= {max}"), (2..=max).collect(), |&n| {
        let expected = [catalan(n + 1), catalan(n), catalan(n), catalan(n - 1)].map(s).join(" ");
        let actual = [PathTag::Motz, PathTag::MotzE, PathTag::MotzT, PathTag::MotzET].map(|t| s(gen_paths(t, n).count())).join(" ");
        (expected, actual)
    });
    let max = r.params.pick(9, 7);
    r.check("paths", "phi maps motzT(n) onto motz(n-1) and motzET(n) onto motzE(n-1)", format!("2 <= n <= {max}"), (2..=max).collect(), |&n| {
        let image = |tag| gen_paths(tag, n).map(|p| phi(&p).unwrap()).collect::<BTreeSet<ColoredPath>>();
        let target = |tag| gen_paths(tag, n - 1).collect::<BTreeSet<ColoredPath>>();
        let ok = |a: BTreeSet<ColoredPath>, b: BTreeSet<ColoredPath>| if a == b { "equal" } else { "different" };
        (
            "equal equal".into(),
            format!("{} {}", ok(image(PathTag::MotzT), target(PathTag::Motz)), ok(image(PathTag::MotzET), target(PathTag::MotzE))),
        )
    });
}

fn tally(tag: PathTag, n: usize, keep: impl Fn(&ColoredPath) -> bool) -> MultiPoly {
    let paths: Vec<ColoredPath> = gen_paths(tag, n).filter(keep).collect();
    step_polynomial(&paths)
}

fn suite_series(r: &mut Runner) {
    let order = r.params.order;
    let ctx = match SeriesContext::new(order) {
        Ok(c) => c,
        Err(e) => {
            r.check("series", "series construction", format!("order {order}"), vec![order], |_| ("ok".into(), e.to_string()));
            return;
        }
    };
    let names = ["E", "E1", "E2", "E12"];
    r.check("series", "functional equation residuals vanish", format!("through t^{order}"), (0..4).collect(), |&i| {
        ("0".into(), if ctx.residuals()[i].is_zero() { "0".into() } else { format!("nonzero for {}", names[i]) })
    });
    let displayed = ["0", "0", "U*D", "U*D*u + U*D*d", "U*D*d^2 + U*D*u*d + 2*U^2*D^2 + U*D*u^2"];
    r.check("series", "E12 low coefficients match the known expansion", "t^0..t^4".into(), (0..=4.min(order)).collect(), |&n| {
        (s(displayed[n].parse::<MultiPoly>().unwrap()), s(ctx.e12.coeff(n)))
    });
    let full = no_early_denim_series(&ctx.e2).unwrap();
    let max = 8.min(order);
    r.check("series", "coefficients match step tallies of the enumerated families", format!("1 <= n <= {max}"), (1..=max).collect(), |&n| {
        let expected = [
            tally(PathTag::Motz, n, |_| true),
            tally(PathTag::MotzE, n, |_| true),
            tally(PathTag::MotzT, n, |p| p.steps().first() == Some(&Step::Up)),
            tally(PathTag::MotzT, n, |_| true),
            tally(PathTag::MotzET, n, |_| true),
        ];
        let actual = [ctx.e.coeff(n), ctx.e1.coeff(n), ctx.e2.coeff(n), full.coeff(n), ctx.e12.coeff(n)];
        (expected.map(|p| p.to_string()).join(" ; "), actual.map(|p| p.to_string()).join(" ; "))
    });
}

fn suite_expect(r: &mut Runner) {
    let order = r.params.order.max(12);
    let Ok(ctx) = SeriesContext::new(order) else { return };
    r.check("expect", "E[U] and E[u] match their closed forms, 2E[U] + 2E[u] = n", format!("2 <= n <= {order}"), (2..=order).collect(), |&n| {
        let eu = expected_steps(&ctx.e12, n, Marker::U).unwrap();
        let em = expected_steps(&ctx.e12, n, Marker::Umber).unwrap();
        let sum = (&eu + &em) * BigInt::from(2);
        let (fu, fm) = if n == 2 {
            (Rational::from_integer(BigInt::from(1)), em.clone())
        } else {
            (expected_columns_formula(n), expected_umber_formula(n))
        };
        (format!("{fu} {fm} {n}"), format!("{eu} {em} {sum}"))
    });
}

fn suite_qtables(r: &mut Runner) {
    let cat: Vec<(usize, String)> = Q_CATALAN.lines().skip(1).map(|l| {
        let (n, c) = l.split_once(',').unwrap();
        (n.parse().unwrap(), c.to_string())
    }).collect();
    let golden = |c: &str| QPoly::from_coeffs(c.split_whitespace().map(|x| x.parse::<i64>().unwrap()));
    r.check("qtables", "q-Catalan rows match the reference polynomials", "1 <= n <= 5".into(), cat.iter().map(|(n, _)| *n).collect(), |&n| {
        let row = &cat.iter().find(|(m, _)| *m == n).unwrap().1;
        (s(golden(row)), s(q_catalan_tilde(n)))
    });
    let nar: Vec<(Pair, String)> = Q_NARAYANA.lines().skip(1).map(|l| {
        let f: Vec<&str> = l.splitn(3, ',').collect();
        (Pair(f[0].parse().unwrap(), f[1].parse().unwrap()), f[2].to_string())
    }).collect();
    r.check("qtables", "q-Narayana entries match the reference polynomials", "1 <= m <= n <= 4".into(), nar.iter().map(|(p, _)| *p).collect(), |&Pair(n, m)| {
        let row = &nar.iter().find(|(p, _)| p.0 == n && p.1 == m).unwrap().1;
        (s(golden(row)), s(q_narayana_tilde(n, m)))
    });
}

struct Named(String, Poset);

impl Display for Named {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn suite_posets(r: &mut Runner) {
    let specs: Vec<PosetSpec> = serde_json::from_str(CATALOG).expect("catalog parses");
    let (max_n, max_k) = (r.params.max_elements, r.params.max_k);
    let instances: Vec<Named> = specs
        .iter()
        .filter(|s| s.n <= max_n)
        .flat_map(|s| {
            let p = Poset::from_spec(s).expect("catalog posets are natural");
            (0..=max_k).map(move |k| Named(format!("{} k={k}", s.name), p.clone()))
        })
        .collect();
    let k_of = |name: &str| name.rsplit('=').next().unwrap().parse::<usize>().unwrap();
    let range = format!("catalog posets with <= {max_n} elements, k <= {max_k}");
    r.check("posets", "sum of vartheta = q^C(k,2) [n+k,k]_q sum q^comaj", range.clone(), instances.iter().collect(), |x| {
        let (lhs, rhs) = sum_identity_check(&x.1, k_of(&x.0), vartheta);
        (s(rhs), s(lhs))
    });
    r.check("posets", "expected product of down-degrees", range.clone(), instances.iter().collect(), |x| {
        let ex = expected_ddeg(&x.1, k_of(&x.0));
        ("holds".into(), if ex.holds() { "holds".into() } else { format!("{} / {} vs {} / {}", ex.lhs_num, ex.lhs_den, ex.rhs_num, ex.rhs_den) })
    });
    let small: Vec<&Named> = instances.iter().filter(|x| x.1.len() + k_of(&x.0) <= 8).collect();
    r.check("posets", "direct and triple-based generation agree", format!("{range}, n + k <= 8"), small, |x| {
        ("true".into(), s(sv_routes_agree(&x.1, k_of(&x.0))))
    });
}

fn suite_pi(r: &mut Runner) {
    r.check("pi", "pi(X, .) permutes {0..n}", "every X, n <= 8".into(), (0..=8).collect(), |&n| {
        all_ok(0u64..1 << (n + 1), |&x| {
            let seen: BTreeSet<usize> = (0..=n).map(|t| pi_perm(x, t, n)).collect();
            if seen.len() == n + 1 { Ok(()) } else { Err(format!("X = {x:#b}")) }
        })
    });
}

fn suite_equidistribution(r: &mut Runner) {
    let shapes: Vec<Pair> = (1..=5).flat_map(|n| (0..Partition::all(n).len()).map(move |j| Pair(n, j))).collect();
    r.check("equidistribution", "descent-set counts agree for a shape and its conjugate", "shapes of size <= 5, k <= 2".into(), shapes, |&Pair(n, j)| {
        let shape = &Partition::all(n)[j];
        let bad: Vec<String> = (0..=2).filter(|&k| !equidistribution_check(shape, k).0).map(|k| format!("{shape} k={k}")).collect();
        ("".into(), bad.join(" "))
    });
}

fn suite_peaks(r: &mut Runner) {
    let max = r.params.pick(8, 7);
    let rows = peaks_genfun(max).expect("series expands");
    r.check("peaks", "peaks series matches inner-peak tallies of 321-avoiders", format!("0 <= m <= {max}"), (0..=max).collect(), |&m| {
        let mut tally = QPoly::default();
        for p in gen_avoid321(m) {
            tally.add_monomial(inner_peaks(&p).len(), 1);
        }
        (s(tally), s(&rows[m]))
    });
}

pub fn run(a: &VerifyArgs, out: &mut Sink) -> Result<bool, Failure> {
    let desk = a.budget == Budget::Desk;
    let params = Params {
        desk,
        order: a.order.unwrap_or(if desk { 10 } else { 8 }),
        max_elements: a.max_elements.unwrap_or(if desk { 6 } else { 4 }),
        max_k: a.max_k.unwrap_or(if desk { 3 } else { 2 }),
        timings: a.timings,
    };
    if params.max_elements > 8 {
        return Err(Failure::Usage("--max-elements is limited to 8".into()));
    }
    let start = Instant::now();
    let mut runner = Runner { params: &params, checks: Vec::new() };
    let suites: [(Suite, SuiteFn); 13] = [
        (Suite::Catalan, suite_catalan),
        (Suite::Ef, suite_ef),
        (Suite::Ballot, suite_ballot),
        (Suite::ClosedForms, suite_closed_forms),
        (Suite::Bijections, suite_bijections),
        (Suite::Paths, suite_paths),
        (Suite::Series, suite_series),
        (Suite::Expect, suite_expect),
        (Suite::Qtables, suite_qtables),
        (Suite::Posets, suite_posets),
        (Suite::Pi, suite_pi),
        (Suite::Equidistribution, suite_equidistribution),
        (Suite::Peaks, suite_peaks),
    ];
    for (suite, run) in suites {
        if a.suite == Suite::All || a.suite == suite {
            run(&mut runner);
        }
    }
    let passed = runner.checks.iter().all(|c| c.counterexample.is_none());
    let suite_name = clap::ValueEnum::to_possible_value(&a.suite).map(|v| v.get_name().to_string()).unwrap_or_default();
    let report = VerifyReport {
        suite: suite_name,
        passed,
        checks: runner.checks,
        wall_ms: params.timings.then(|| start.elapsed().as_millis()),
    };
    match a.report.unwrap_or(out.format) {
        Format::Json => out.json(&serde_json::to_value(&report)?)?,
        Format::Csv => {
            out.row(["suite", "identity", "range", "instances", "status", "counterexample"])?;
            for c in &report.checks {
                let cx = c.counterexample.as_ref().map(|x| format!("{}: expected {} got {}", x.instance, x.expected, x.actual));
                out.row([c.suite.to_string(), c.identity.to_string(), c.range.clone(), c.instances.to_string(), c.status.to_string(), cx.unwrap_or_default()])?;
            }
        }
        Format::Text => {
            for c in &report.checks {
                let mut line = format!("{} [{}] {} ({}, {} instances)", c.status.to_uppercase(), c.suite, c.identity, c.range, c.instances);
                if let Some(ms) = c.wall_ms {
                    line.push_str(&format!(" {ms} ms"));
                }
                out.line(&line)?;
                if let Some(x) = &c.counterexample {
                    out.line(&format!("    at {}: expected {}, got {}", x.instance, x.expected, x.actual))?;
                }
            }
            out.line(if passed { "all checks passed" } else { "some checks failed" })?;
        }
    }
    Ok(passed)
}
