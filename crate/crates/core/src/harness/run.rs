use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json as j, Value};

use super::config::{Command, InputSource, RunConfig};
use super::property::{property_suite, Bounds};
use super::report::{json, Provenance, ReportBundle, ReportRow};
use super::reproduce::{cone_base, cone_formula, enumerated_mezzoperversities, reproduce_paper, LAGRANGIAN_COUNT};
use crate::duality::{duality_pairing, duality_report, intersection_number, kunneth, stratumwise_duality, KunnethMode};
use crate::error::{Error, Result};
use crate::ic::mezzo::{link_form, local_contribution, parse_mezzo};
use crate::ic::{deligne_construction, refined_ic, stratified_de_rham, witt_check, ICResult, Mezzoperversity, Perversity};
use crate::linalg::{echelon, ExactMatrix, FGAbelianGroup, SparseVec};
use crate::sheaf::{constant_on_open, constant_sheaf, derived_pushforward, dump, sheaf_cohomology};
use crate::space::io::parse_json;
use crate::space::{example, factors, from_input, to_output, SpaceInput, StratifiedComplex};

fn bad(pointer: &str, message: impl Into<String>) -> Error {
    Error::BadInput { pointer: pointer.into(), message: message.into() }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| bad("", format!("{}: {e}", path.display())))
}

/// Resolved input: the space, a label, and the canonical text hashed into the digest.
struct Loaded {
    space: StratifiedComplex,
    label: String,
    source: Value,
}

fn load(input: &InputSource) -> Result<Loaded> {
    match input {
        InputSource::Example(name) => Ok(Loaded { space: example(name)?, label: name.clone(), source: j!({ "example": name }) }),
        InputSource::Path(p) => {
            let text = read(p)?;
            let parsed: SpaceInput = parse_json(&text)?;
            Ok(Loaded { space: from_input(&parsed)?, label: p.display().to_string(), source: j!({ "input": parsed }) })
        }
    }
}

fn perversity(c: &RunConfig) -> Result<Perversity> {
    c.perversity.as_deref().map_or_else(|| Ok(Perversity::lower_middle()), Perversity::parse)
}

fn mezzo(c: &RunConfig, s: &StratifiedComplex) -> Result<Option<(Mezzoperversity, Value)>> {
    let Some(path) = &c.mezzo else { return Ok(None) };
    let text = read(path)?;
    let raw: Value = parse_json(&text)?;
    Ok(Some((parse_mezzo(s, &text)?, raw)))
}

/// Deligne complex, or the refined complex when a mezzoperversity file is given.
fn intersection_complex(c: &RunConfig, s: &StratifiedComplex) -> Result<(ICResult, Option<Value>)> {
    let p = perversity(c)?;
    match mezzo(c, s)? {
        Some((m, raw)) => Ok((refined_ic(s, &p, &m)?, Some(raw))),
        None => Ok((deligne_construction(s, &p)?, None)),
    }
}

fn digest_input(c: &RunConfig, source: Value, extra: Value) -> Value {
    j!({
        "command": c.command.name(),
        "source": source,
        "perversity": c.perversity,
        "mode": c.mode,
        "seed": c.seed,
        "degree": c.degree,
        "table": c.table,
        "dump": c.dump,
        "mutate": c.mutate,
        "extra": extra,
    })
}

/// Executes one command. Output depends only on the configuration.
pub fn run(config: &RunConfig) -> Result<ReportBundle> {
    config.validate()?;
    match config.command {
        Command::Reproduce => {
            let suite = match &config.input {
                Some(InputSource::Example(name)) => name.clone(),
                Some(InputSource::Path(_)) => return Err(bad("/input", "reproduce takes a scenario id, not a file")),
                None => "all".into(),
            };
            reproduce_paper(&suite)
        }
        Command::Proptest => Ok(property_suite(config.seed, &Bounds::default(), config.mutate)),
        Command::Kunneth => run_kunneth(config),
        _ => {
            let loaded = load(config.input.as_ref().expect("validated"))?;
            match config.command {
                Command::Build => run_build(config, loaded),
                Command::Sheaf => run_sheaf(config, loaded),
                Command::Derham => run_derham(config, loaded),
                Command::Ih => run_ih(config, loaded),
                Command::Duality => run_duality(config, loaded),
                Command::Intersect => run_intersect(config, loaded),
                Command::Mezzo => run_mezzo(config, loaded),
                _ => unreachable!(),
            }
        }
    }
}

fn run_build(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let mut b = ReportBundle::new("build", &digest_input(c, l.source, Value::Null));
    b.result("label", &l.label);
    b.result("space", to_output(s));
    b.result("witt", witt_check(s));
    let cx = s.complex();
    let betti = cx.cochain_complex().cohomology_dims();
    let chi_betti: i64 = betti.iter().enumerate().map(|(k, x)| if k % 2 == 0 { *x as i64 } else { -(*x as i64) }).sum();
    b.result("betti", &betti);
    b.push(
        ReportRow::compare("euler", Provenance::Oracle, cx.euler_characteristic(), chi_betti)
            .note("f-vector alternating sum against Betti numbers"),
    );
    let complex = cx.cochain_complex();
    b.push(ReportRow::check("d-squared", Provenance::Computed, complex.check_square_zero().is_ok(), complex.dims()));
    Ok(b)
}

fn run_sheaf(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let mut b = ReportBundle::new("sheaf", &digest_input(c, l.source, Value::Null));
    let top = s.top_level();
    let r = s.coefficient(top).rational_rank();
    let constant = constant_sheaf(s, top, &FGAbelianGroup::free(r))?;
    let h = sheaf_cohomology(&constant)?.dims_from_zero(s.dim() as i32);
    let betti: Vec<usize> = {
        let mut v: Vec<usize> = s.complex().cochain_complex().cohomology_dims().iter().map(|x| x * r).collect();
        v.resize(s.dim() + 1, 0);
        v
    };
    b.result("label", &l.label);
    b.result("constant", &h);
    b.push(ReportRow::compare("constant-sheaf", Provenance::Oracle, &betti, &h).note("simplicial cohomology"));
    let open: std::collections::BTreeSet<usize> = s.stratum(top).into_iter().collect();
    let on_open = constant_on_open(s, &open, r)?;
    let all: std::collections::BTreeSet<usize> = (0..s.len()).collect();
    let pushed = derived_pushforward(&on_open, &all)?;
    let hp = sheaf_cohomology(&pushed)?.dims_from_zero(s.dim() as i32);
    let hu = sheaf_cohomology(&on_open)?.dims_from_zero(s.dim() as i32);
    b.result("regular-part", &hu);
    b.result("pushforward", &hp);
    b.push(ReportRow::compare("pushforward", Provenance::Oracle, &hu, &hp).note("hypercohomology is preserved by pushforward"));
    if c.dump {
        b.result("dump", dump(&pushed));
    }
    Ok(b)
}

fn run_derham(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let mut b = ReportBundle::new("derham", &digest_input(c, l.source, Value::Null));
    let r = stratified_de_rham(s)?;
    b.result("label", &l.label);
    let want = |t: &str| c.table.as_deref().is_none_or(|x| x == t);
    if want("stratumwise") {
        b.result("stratumwise", &r.table);
        b.push(ReportRow::computed("stratumwise", &r.table.total).mode("stratumwise"));
        match l.label.as_str() {
            "cone-s1" => {
                b.push(ReportRow::compare("stratumwise-target", Provenance::PaperTarget, [2, 1, 1], &r.table.total).mode("stratumwise"))
            }
            "genus2-cone" | "cone-genus2" => {
                b.push(ReportRow::compare("stratumwise-middle-target", Provenance::PaperTarget, 4, r.table.middle()[0]).mode("stratumwise"))
            }
            _ => {}
        }
    }
    if want("hypercohomology") {
        b.result("hypercohomology", &r.ic.ih);
        b.result("cutoffs", &r.ic.cutoffs);
        b.push(ReportRow::computed("hypercohomology", &r.ic.ih).mode("hypercohomology"));
        if witt_check(s).witt {
            if let Ok(ic) = deligne_construction(s, &Perversity::lower_middle()) {
                let mut row = ReportRow::compare("witt-equivalence", Provenance::PaperTarget, &ic.ih, &r.ic.ih).mode("hypercohomology");
                if !row.matches() {
                    row = row.flagged("stratum-dimension cutoff differs from the middle perversity here");
                }
                b.push(row);
            }
        }
        match stratumwise_duality(s) {
            Ok(d) => b.result("stratumwise-duality", d),
            Err(e) => b.result("stratumwise-duality", e.to_string()),
        }
    }
    Ok(b)
}

fn singular_stalks(s: &StratifiedComplex, ic: &ICResult) -> Value {
    let top = s.top_level();
    let stalks: Vec<Value> = s
        .stratum_levels()
        .into_iter()
        .filter(|p| *p != top)
        .filter_map(|p| s.stratum(p).first().map(|c| j!({ "level": p, "cell": s.complex().simplex(*c), "dims": ic.stalk_dims(*c) })))
        .collect();
    Value::Array(stalks)
}

fn run_ih(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let (ic, raw) = intersection_complex(c, s)?;
    let mut b = ReportBundle::new("ih", &digest_input(c, l.source, raw.unwrap_or(Value::Null)));
    b.result("label", &l.label);
    b.result("perversity", &ic.label);
    b.result("ih", &ic.ih);
    b.result("cutoffs", &ic.cutoffs);
    b.result("modified-levels", &ic.modified_levels);
    b.result("support", &ic.support);
    b.result("stalks", singular_stalks(s, &ic));
    b.push(ReportRow::check("support", Provenance::Computed, ic.support.holds, ic.support.holds));
    if let (Some(base), None) = (cone_base(&l.label), &c.mezzo) {
        let base = example(&base)?;
        let cutoff = ic.cutoffs.values().next().copied().unwrap_or(0);
        b.push(ReportRow::compare("cone-formula", Provenance::Oracle, cone_formula(&base, cutoff), &ic.ih));
    }
    if c.dump {
        b.result("dump", dump(&ic.complex));
    }
    Ok(b)
}

fn run_duality(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let (ic, raw) = intersection_complex(c, s)?;
    let mut b = ReportBundle::new("duality", &digest_input(c, l.source, raw.unwrap_or(Value::Null)));
    b.result("label", &l.label);
    b.result("ih", &ic.ih);
    let expect_dual = witt_check(s).witt || ic.mezzo.is_some();
    let gate = |row: ReportRow| if expect_dual { row } else { row.flagged("non-Witt space without a mezzoperversity") };
    if let Some(k) = c.degree {
        let m = duality_pairing(s, &ic, k)?;
        b.push(gate(ReportRow::check(format!("pairing-{k}"), Provenance::Computed, m.nondegenerate, m.nondegenerate)));
        b.result("pairing", m);
        return Ok(b);
    }
    let r = duality_report(s, &ic)?;
    b.push(gate(ReportRow::check("nondegenerate", Provenance::Computed, r.nondegenerate, r.nondegenerate)));
    b.push(gate(ReportRow::check("mirror", Provenance::Computed, r.mirror_dims, &r.ih)));
    b.push(ReportRow::compare("model", Provenance::Oracle, &r.ih, &r.model_dims).note("cochain model against the sheaf ladder"));
    b.result("report", r);
    Ok(b)
}

fn kunneth_factors(c: &RunConfig) -> Result<(StratifiedComplex, StratifiedComplex, Value)> {
    match c.input.as_ref().expect("validated") {
        InputSource::Example(name) => {
            let (a, b) = match name.as_str() {
                "s1xs1" => ("s1".to_string(), "s1".to_string()),
                "s1xs2" => ("s1".into(), "s2".into()),
                "product" | "cone-s1xs1" => ("cone-s1".into(), "s1".into()),
                "torus-interval" => ("torus".into(), "interval".into()),
                _ => match factors(name) {
                    Some(("product", args)) if args.len() == 2 => (args[0].to_string(), args[1].to_string()),
                    _ => return Err(bad("/input", format!("`{name}` is not a product; use product:A,B"))),
                },
            };
            Ok((example(&a)?, example(&b)?, j!({ "example": name })))
        }
        InputSource::Path(p) => {
            #[derive(Deserialize, serde::Serialize)]
            struct Pair {
                left: SpaceInput,
                right: SpaceInput,
            }
            let pair: Pair = parse_json(&read(p)?)?;
            Ok((from_input(&pair.left)?, from_input(&pair.right)?, j!({ "input": pair })))
        }
    }
}

fn run_kunneth(c: &RunConfig) -> Result<ReportBundle> {
    let (x, y, source) = kunneth_factors(c)?;
    let p = c.perversity.as_deref().map(Perversity::parse).transpose()?;
    let mode = KunnethMode::parse(c.mode.as_deref().unwrap_or("rational"), p.as_ref())?;
    let r = kunneth(&x, &y, &mode)?;
    let mut b = ReportBundle::new("kunneth", &digest_input(c, source, Value::Null));
    for row in &r.rows {
        let id = format!("degree-{}", row.degree);
        if mode == KunnethMode::Integral {
            b.push(
                ReportRow::compare(id, Provenance::Oracle, &row.direct_group, &row.convolution_group)
                    .note("Smith normal form of the resolved product"),
            );
        } else {
            b.push(ReportRow::compare(id, Provenance::Oracle, row.direct, row.convolution));
        }
    }
    b.push(ReportRow::compare("euler", Provenance::Oracle, r.euler.2, r.euler.0 * r.euler.1));
    b.result("dims", r.rows.iter().map(|x| x.direct).collect::<Vec<_>>());
    b.result("matches", r.matches);
    b.result("report", r);
    Ok(b)
}

#[derive(Debug, Clone, Deserialize, serde::Serialize)]
struct GradedCochain {
    degree: usize,
    cochain: SparseVec,
}

#[derive(Debug, Clone, Deserialize, serde::Serialize)]
struct Cycles {
    a: Vec<GradedCochain>,
    b: Vec<GradedCochain>,
}

fn run_intersect(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let cx = s.complex();
    let cycles: Option<Cycles> = c.cycles.as_ref().map(|p| read(p).and_then(|t| parse_json(&t))).transpose()?;
    let mut b = ReportBundle::new("intersect", &digest_input(c, l.source, json(&cycles)));
    b.result("label", &l.label);
    let flag_totals = |row: ReportRow| row.flagged("totals over i + j = 2m and i + j = 4m differ");
    if let Some(cy) = cycles {
        let graded = |v: &[GradedCochain]| v.iter().map(|g| (g.degree, g.cochain.clone())).collect::<Vec<_>>();
        let r = intersection_number(cx, &graded(&cy.a), &graded(&cy.b))?;
        b.push(ReportRow::computed("value", &r.value));
        b.push(flag_totals(ReportRow::compare("totals", Provenance::Computed, &r.value, &r.value_4m)));
        b.result("report", r);
        return Ok(b);
    }
    let n = cx.dim().max(0) as usize;
    let i = c.degree.unwrap_or(n / 2);
    if i > n {
        return Err(Error::DegreeOutOfRange(i as i64));
    }
    let complex = cx.cochain_complex();
    let (left, right) = (complex.cohomology_at(i as i32).representatives, complex.cohomology_at((n - i) as i32).representatives);
    let mut triples = Vec::new();
    let mut agree = true;
    for (r, x) in left.iter().enumerate() {
        for (col, y) in right.iter().enumerate() {
            let rep = intersection_number(cx, &[(i, x.clone())], &[(n - i, y.clone())])?;
            agree &= rep.totals_agree;
            triples.push((r, col, rep.value));
        }
    }
    let m = ExactMatrix::from_triples(left.len(), right.len(), triples);
    let rank = echelon::rank(&m);
    b.push(ReportRow::check("nondegenerate", Provenance::Computed, m.rows() == m.cols() && rank == m.rows(), rank));
    b.push(flag_totals(ReportRow::check("totals", Provenance::Computed, agree, agree)));
    b.result("degree", i);
    b.result("matrix", m);
    Ok(b)
}

fn run_mezzo(c: &RunConfig, l: Loaded) -> Result<ReportBundle> {
    let s = &l.space;
    let p = perversity(c)?;
    let given = mezzo(c, s)?;
    let mut b = ReportBundle::new("mezzo", &digest_input(c, l.source, given.as_ref().map_or(Value::Null, |x| x.1.clone())));
    b.result("label", &l.label);
    let levels = witt_check(s).non_witt_levels();
    let forms: Vec<Value> = levels.iter().map(|lv| link_form(s, *lv).map(|f| j!({ "level": lv, "form": f }))).collect::<Result<_>>()?;
    b.result("forms", forms);
    let choices = match given {
        Some((m, _)) => vec![m],
        None => enumerated_mezzoperversities(s, LAGRANGIAN_COUNT)?,
    };
    let closed = crate::space::cup::boundary_faces(s.complex()).is_empty();
    let mut out = Vec::new();
    for (i, m) in choices.iter().enumerate() {
        let id = format!("W{i}");
        let ok = m.sites.iter().all(|x| x.certificate.holds());
        b.push(ReportRow::check(
            format!("{id}/lagrangian"),
            Provenance::Computed,
            ok,
            m.sites.iter().map(|x| &x.certificate).collect::<Vec<_>>(),
        ));
        let mut contributions = Vec::new();
        for level in m.levels() {
            let dim_w: usize = m.sites.iter().filter(|x| x.level() == Some(level)).map(|x| x.basis.rows()).sum();
            let lc = local_contribution(m, level)?;
            b.push(ReportRow::compare(format!("{id}/local-contribution-{level}"), Provenance::Oracle, dim_w, lc));
            contributions.push(lc);
        }
        let ic = refined_ic(s, &p, m)?;
        if closed {
            let r = duality_report(s, &ic)?;
            b.push(ReportRow::check(format!("{id}/nondegenerate"), Provenance::Computed, r.nondegenerate, r.nondegenerate));
            b.push(ReportRow::check(format!("{id}/mirror"), Provenance::Computed, r.mirror_dims, &r.ih));
        }
        let bases: Vec<&ExactMatrix> = m.sites.iter().map(|x| &x.basis).collect();
        out.push(j!({ "bases": bases, "ih": ic.ih, "local_contribution": contributions }));
    }
    b.result("mezzoperversities", out);
    Ok(b)
}
