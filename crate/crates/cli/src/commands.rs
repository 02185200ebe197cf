use num_bigint::BigInt;
use serde_json::{json, Value};

use svtab::biject::{
    alpha, alpha_inv, beta, beta_ballot, beta_inv, beta_inv_ballot, decompose_tableau, phi, phi_inv,
    rotate_complement, rotate_complement_inv,
};
use svtab::closedform::{
    act_count, ballot_count, catalan, e_count, f_count, more_shapes_counts, narayana, peaks_count,
};
use svtab::enumerate::{
    count_svsyt, gen_avoid321, gen_ballotlike, gen_near_rectangle_union, gen_svsyt_skew, gen_two_row_union,
    FamilyItem, FamilySpec,
};
use svtab::series::{expected_columns_formula, expected_steps, expected_umber_formula, no_early_denim_series, SeriesContext};
use svtab::stats::two_row_comaj_by_top;
use svtab::{
    ColoredPath, Marker, Partition, PathTag, Permutation, QPoly, Rational, SetValuedTableau, SkewShape, Step,
};

use crate::output::Sink;
use crate::{
    BijectArgs, CountArgs, ExpectArgs, Failure, Family, FamilyArgs, Format, Formula, Map, QtableArgs, QtableKind,
    SeriesArgs, TableArgs, TableKind,
};

fn need<T: Copy>(value: Option<T>, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{name} is required here")))
}

fn family_spec(family: Family, shape: Option<&Partition>, k: usize, n: Option<usize>, i: Option<usize>, tag: Option<PathTag>) -> Result<FamilySpec, Failure> {
    let shape = || shape.cloned().ok_or_else(|| Failure::Usage("--shape is required here".into()));
    Ok(match family {
        Family::Svsyt => FamilySpec::Svsyt { shape: shape()?, k },
        Family::Syt => FamilySpec::Syt { shape: shape()? },
        Family::TwoRowUnion => FamilySpec::TwoRowUnion { n: need(n, "n")? },
        Family::Avoid321 => FamilySpec::Avoid321 { m: need(n, "n")? },
        Family::Path => {
            let family = need(tag, "tag")?;
            if family == PathTag::Ballotlike {
                return Err(Failure::Usage("use --family ballotlike with --n and --i".into()));
            }
            FamilySpec::Path { family, n: need(n, "n")? }
        }
        Family::Ballotlike => FamilySpec::PathEnd { n: need(n, "n")?, i: need(i, "i")? },
    })
}

fn item_text(item: &FamilyItem) -> String {
    match item {
        FamilyItem::Tableau(t) => t.to_string(),
        FamilyItem::Permutation(p) => p.to_string(),
        FamilyItem::Path(p) => p.to_string(),
    }
}

fn item_json(item: &FamilyItem) -> Value {
    match item {
        FamilyItem::Tableau(t) => t.to_json(),
        other => Value::String(item_text(other)),
    }
}

/// Header plus rows, laid out for the chosen format.
fn emit_table(out: &mut Sink, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    match out.format {
        Format::Csv => {
            out.row(header)?;
            for r in rows {
                out.row(r)?;
            }
        }
        Format::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
                .collect();
            let fmt = |cells: Vec<&str>| {
                cells.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
            };
            out.line(&fmt(header.to_vec()))?;
            for r in rows {
                out.line(&fmt(r.iter().map(String::as_str).collect()))?;
            }
        }
        Format::Json => {
            let objects: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(h, v)| (h.to_string(), json!(v))).collect()))
                .collect();
            out.json(&Value::Array(objects))?;
        }
    }
    Ok(())
}

pub fn enumerate(a: &FamilyArgs, out: &mut Sink) -> Result<bool, Failure> {
    let spec = family_spec(a.family, a.shape.as_ref(), a.k, a.n, a.i, a.tag)?;
    match out.format {
        Format::Json => {
            let items: Vec<Value> = spec.iter().map(|x| item_json(&x)).collect();
            out.json(&Value::Array(items))?;
        }
        Format::Csv => {
            out.row(["index", "object"])?;
            for (idx, x) in spec.iter().enumerate() {
                out.row([idx.to_string(), item_text(&x)])?;
            }
        }
        Format::Text => {
            for x in spec.iter() {
                out.line(&item_text(&x))?;
            }
        }
    }
    Ok(true)
}

fn rectangle(b: usize) -> Result<SkewShape, Failure> {
    Ok(SkewShape::straight(Partition::new(vec![b, b])?))
}

fn ballotlike_split(n: usize, i: usize) -> (usize, usize) {
    gen_ballotlike(n, i).fold((0, 0), |(e, f), p| {
        if p.steps().contains(&Step::Down) {
            (e, f + 1)
        } else {
            (e + 1, f)
        }
    })
}

/// Skew fillings of `(b+1,b+1)/(1)` with `n` entries whose last cell is `{n}`.
fn more_shapes_second_oracle(n: usize) -> Result<usize, Failure> {
    let mut total = 0;
    for b in (1..).take_while(|b| 2 * b < n) {
        let shape = SkewShape::new(Partition::new(vec![b + 1, b + 1])?, Partition::new(vec![1])?)?;
        total += gen_svsyt_skew(&shape, n - 2 * b - 1)
            .filter(|t| t.cell(1, b) == Some(&[n as u32][..]))
            .count();
    }
    Ok(total)
}

fn formula_value(f: Formula, a: &CountArgs) -> Result<(BigInt, Option<BigInt>), Failure> {
    let n = || need(a.n, "n");
    let oracle = a.oracle;
    let big = |x: usize| BigInt::from(x);
    Ok(match f {
        Formula::Catalan => {
            let n = n()?;
            (catalan(n), oracle.then(|| big(gen_avoid321(n).count())))
        }
        Formula::Narayana => {
            let (n, m) = (n()?, need(a.m, "m")?);
            let direct = oracle.then(|| {
                big(gen_two_row_union(n + 1).filter(|t| t.rows()[0].iter().map(Vec::len).sum::<usize>() == m).count())
            });
            (narayana(n, m)?, direct)
        }
        Formula::Ballot => {
            let (n, i) = (n()?, need(a.i, "i")?);
            (ballot_count(n, i)?, oracle.then(|| big(gen_ballotlike(n, i).count())))
        }
        Formula::E => {
            let (n, i) = (n()?, need(a.i, "i")?);
            (e_count(n, i), oracle.then(|| big(ballotlike_split(n, i).0)))
        }
        Formula::F => {
            let (n, i) = (n()?, need(a.i, "i")?);
            (f_count(n, i), oracle.then(|| big(ballotlike_split(n, i).1)))
        }
        Formula::Act | Formula::Peaks => {
            let (b, k) = (need(a.b, "b")?, need(a.k, "k")?);
            let value = if f == Formula::Act { act_count(b, k)? } else { peaks_count(b, k)? };
            let direct = if oracle { Some(BigInt::from(count_svsyt(&rectangle(b)?, k))) } else { None };
            (value, direct)
        }
        Formula::MoreShapesFirst => {
            let n = n()?;
            (more_shapes_counts(n)?.0, oracle.then(|| big(gen_near_rectangle_union(n).count())))
        }
        Formula::MoreShapesSecond => {
            let n = n()?;
            let direct = if oracle { Some(big(more_shapes_second_oracle(n)?)) } else { None };
            (more_shapes_counts(n)?.1, direct)
        }
    })
}

/// The closed form that a family count should match, where there is one.
fn family_formula(spec: &FamilySpec) -> Result<BigInt, Failure> {
    Ok(match spec {
        FamilySpec::TwoRowUnion { n } if *n >= 1 => catalan(n - 1),
        FamilySpec::Avoid321 { m } => catalan(*m),
        FamilySpec::Path { family, n } => match family {
            PathTag::Motz => catalan(n + 1),
            PathTag::MotzE | PathTag::MotzT => catalan(*n),
            PathTag::MotzET if *n >= 2 => catalan(n - 1),
            _ => return Err(Failure::Usage(format!("no closed form for {family} at length {n}"))),
        },
        FamilySpec::PathEnd { n, i } => ballot_count(*n, *i)?,
        FamilySpec::Svsyt { shape, k } if shape.len() == 2 && shape.part(0) == shape.part(1) => {
            act_count(shape.part(0), *k)?
        }
        _ => return Err(Failure::Usage("no closed form for this family".into())),
    })
}

pub fn count(a: &CountArgs, out: &mut Sink) -> Result<bool, Failure> {
    let (value, check) = match (a.family, a.formula) {
        (Some(family), None) => {
            let spec = family_spec(family, a.shape.as_ref(), a.k.unwrap_or(0), a.n.or(a.m), a.i, a.tag)?;
            let counted = BigInt::from(spec.count());
            let check = if a.oracle { Some(family_formula(&spec)?) } else { None };
            (counted, check)
        }
        (None, Some(f)) => formula_value(f, a)?,
        _ => return Err(Failure::Usage("give exactly one of --family or --formula".into())),
    };
    let matches_expect = a.expect.as_ref().is_none_or(|e| *e == value);
    let Some(other) = check else {
        match out.format {
            Format::Json => out.json(&json!({ "value": value.to_string() }))?,
            Format::Csv => {
                out.row(["value"])?;
                out.row([value.to_string()])?;
            }
            Format::Text => out.line(&value.to_string())?,
        }
        return Ok(matches_expect);
    };
    let agree = value == other;
    // Label the two numbers by where they came from.
    let (formula, oracle) = if a.family.is_some() { (other, value) } else { (value, other) };
    match out.format {
        Format::Json => out.json(&json!({
            "formula": formula.to_string(),
            "oracle": oracle.to_string(),
            "agree": agree,
        }))?,
        Format::Csv => {
            out.row(["formula", "oracle", "agree"])?;
            out.row([formula.to_string(), oracle.to_string(), agree.to_string()])?;
        }
        Format::Text => out.line(&format!("formula {formula}\noracle {oracle}\nagree {agree}"))?,
    }
    Ok(agree && matches_expect)
}

pub fn table(a: &TableArgs, out: &mut Sink) -> Result<bool, Failure> {
    let mut rows = Vec::new();
    let header: &[&str] = match a.kind {
        TableKind::Ef => {
            for n in 0..=a.max_n {
                for i in 0..=n {
                    rows.push(vec![n.to_string(), i.to_string(), e_count(n, i).to_string(), f_count(n, i).to_string()]);
                }
            }
            &["n", "i", "e", "f"]
        }
        TableKind::Act => {
            for b in (1..).take_while(|b| 2 * b <= a.max_n) {
                for k in 0..=a.max_n - 2 * b {
                    rows.push(vec![
                        b.to_string(),
                        k.to_string(),
                        act_count(b, k)?.to_string(),
                        peaks_count(b, k)?.to_string(),
                    ]);
                }
            }
            &["b", "k", "act", "peaks"]
        }
        TableKind::Narayana => {
            for n in 1..=a.max_n {
                for m in 1..=n {
                    rows.push(vec![n.to_string(), m.to_string(), narayana(n, m)?.to_string()]);
                }
            }
            &["n", "m", "count"]
        }
    };
    emit_table(out, header, &rows)?;
    Ok(true)
}

fn coefficient_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

pub fn qtable(a: &QtableArgs, out: &mut Sink) -> Result<bool, Failure> {
    let mut entries: Vec<(usize, Option<usize>, QPoly)> = Vec::new();
    for n in 1..=a.max_n {
        let by_top = two_row_comaj_by_top(n);
        match a.kind {
            QtableKind::Catalan => entries.push((n, None, by_top.into_values().sum())),
            QtableKind::Narayana => {
                for m in 1..=n {
                    entries.push((n, Some(m), by_top.get(&m).cloned().unwrap_or_default()));
                }
            }
        }
    }
    for (n, m, poly) in &entries {
        match out.format {
            Format::Csv => {
                let lead = m.map(|m| vec![n.to_string(), m.to_string()]).unwrap_or_default();
                out.row(lead.into_iter().chain(coefficient_strings(poly)))?;
            }
            Format::Text => match m {
                Some(m) => out.line(&format!("N({n},{m}) = {poly}"))?,
                None => out.line(&format!("Cat({n}) = {poly}"))?,
            },
            Format::Json => {}
        }
    }
    if out.format == Format::Json {
        let items: Vec<Value> = entries
            .iter()
            .map(|(n, m, p)| {
                let mut v = json!({ "n": n, "coefficients": p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>() });
                if let Some(m) = m {
                    v["m"] = json!(m);
                }
                v
            })
            .collect();
        out.json(&Value::Array(items))?;
    }
    Ok(true)
}

fn parse_tableau(input: &str) -> Result<SetValuedTableau, Failure> {
    let trimmed = input.trim();
    if trimmed.starts_with('[') || trimmed.starts_with('{') && trimmed.contains(':') {
        let value: Value = serde_json::from_str(trimmed)?;
        return Ok(match value {
            Value::Array(_) => SetValuedTableau::from_rows(serde_json::from_value(value)?)?,
            other => SetValuedTableau::from_json(&other)?,
        });
    }
    Ok(trimmed.parse()?)
}

enum Object {
    Tableau(SetValuedTableau),
    Permutation(Permutation),
    Path(ColoredPath),
    Triple(Value, String),
}

pub fn biject(a: &BijectArgs, out: &mut Sink) -> Result<bool, Failure> {
    let path = || a.input.trim().parse::<ColoredPath>();
    let result = match a.map {
        Map::Alpha => Object::Permutation(alpha(&parse_tableau(&a.input)?)?),
        Map::AlphaInv => Object::Tableau(alpha_inv(&a.input.trim().parse::<Permutation>()?)?),
        Map::Beta => Object::Path(beta(&parse_tableau(&a.input)?)?),
        Map::BetaInv => Object::Tableau(beta_inv(&path()?)?),
        Map::BetaBallot => Object::Path(beta_ballot(&parse_tableau(&a.input)?)?),
        Map::BetaInvBallot => Object::Tableau(beta_inv_ballot(&path()?)?),
        Map::Phi => Object::Path(phi(&path()?)?),
        Map::PhiInv => Object::Path(phi_inv(&path()?)?),
        Map::Rotate => Object::Tableau(rotate_complement(&parse_tableau(&a.input)?)?),
        Map::RotateInv => Object::Tableau(rotate_complement_inv(&parse_tableau(&a.input)?)?),
        Map::Decompose => {
            let tt = decompose_tableau(&parse_tableau(&a.input)?);
            let picks: Vec<String> = tt.picks.iter().map(|(r, c)| format!("({},{})", r + 1, c + 1)).collect();
            let text = format!("{} | cuts {:?} | picks {}", tt.standard, tt.cuts, picks.join(" "));
            let value = json!({
                "standard": tt.standard.to_json(),
                "cuts": tt.cuts,
                "picks": tt.picks.iter().map(|&(r, c)| [r + 1, c + 1]).collect::<Vec<_>>(),
            });
            Object::Triple(value, text)
        }
    };
    let (text, value) = match result {
        Object::Tableau(t) => (t.to_string(), t.to_json()),
        Object::Permutation(p) => (p.to_string(), json!(p.to_string())),
        Object::Path(p) => (p.to_string(), json!(p.to_string())),
        Object::Triple(v, t) => (t, v),
    };
    match out.format {
        Format::Json => out.json(&value)?,
        Format::Csv => {
            out.row(["output"])?;
            out.row([text])?;
        }
        Format::Text => out.line(&text)?,
    }
    Ok(true)
}

pub fn series(a: &SeriesArgs, out: &mut Sink) -> Result<bool, Failure> {
    let ctx = SeriesContext::new(a.order)?;
    let full;
    let s = match a.name.as_str() {
        "E2-full" => {
            full = no_early_denim_series(&ctx.e2)?;
            &full
        }
        name => ctx
            .get(name)
            .ok_or_else(|| Failure::Usage(format!("unknown series {name:?}; expected E, E1, E2, E12 or E2-full")))?,
    };
    let rows: Vec<Vec<String>> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| vec![n.to_string(), if a.at_ones { c.at_ones().to_string() } else { c.to_string() }])
        .collect();
    match out.format {
        Format::Text => {
            for r in &rows {
                out.line(&format!("t^{}: {}", r[0], r[1]))?;
            }
        }
        _ => emit_table(out, &["n", "coefficient"], &rows)?,
    }
    Ok(true)
}

fn marker_name(m: Marker) -> &'static str {
    match m {
        Marker::U => "U",
        Marker::D => "D",
        Marker::Umber => "u",
        Marker::Denim => "d",
    }
}

pub fn expect(a: &ExpectArgs, out: &mut Sink) -> Result<bool, Failure> {
    let ctx = SeriesContext::new(a.n.max(2))?;
    let value = expected_steps(&ctx.e12, a.n, a.marker)?;
    // Up and down steps pair off, so 2E[U] + E[u] + E[d] = n.
    let formula: Option<Rational> = (a.n >= 3).then(|| {
        let columns = expected_columns_formula(a.n);
        let umber = expected_umber_formula(a.n);
        match a.marker {
            Marker::U | Marker::D => columns,
            Marker::Umber => umber,
            Marker::Denim => Rational::from_integer(BigInt::from(a.n)) - columns * BigInt::from(2) - umber,
        }
    });
    let agree = formula.as_ref().is_none_or(|f| *f == value);
    let name = marker_name(a.marker);
    let formula_text = formula.as_ref().map(ToString::to_string).unwrap_or_default();
    match out.format {
        Format::Json => out.json(&json!({
            "n": a.n,
            "marker": name,
            "value": value.to_string(),
            "formula": formula.as_ref().map(ToString::to_string),
            "agree": agree,
        }))?,
        Format::Csv => {
            out.row(["n", "marker", "value", "formula", "agree"])?;
            out.row([a.n.to_string(), name.to_string(), value.to_string(), formula_text, agree.to_string()])?;
        }
        Format::Text => {
            out.line(&value.to_string())?;
            if formula.is_some() {
                out.line(&format!("formula {formula_text}\nagree {agree}"))?;
            }
        }
    }
    Ok(agree)
}
