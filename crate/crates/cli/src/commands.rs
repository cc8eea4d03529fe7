//! One function per verb. Work items run in parallel; lines are emitted in order.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use squarish::closed_forms::{
    encoded_census_value, encoded_highdim_charpoly, eval_formula_with, exact_counterpart, FormulaId,
};
use squarish::decomposition::{certify, CertMode, Theorem};
use squarish::lattice::families::grid_d;
use squarish::lattice::{build_family, FamilyId, FamilyName, LatticeGraph};
use squarish::matching::{
    count_invariant_matchings, count_invariant_matchings_bruteforce, count_matchings,
    count_matchings_bruteforce, SymmetryGroup,
};
use squarish::trees::{
    count_invariant_trees, enumerate_trees, symmetry_class_count, tree_count, TreeCaps,
};
use squarish::Error;

use crate::report::{NRange, Report};

/// Brute-force oracles only run up to this many vertices.
const ORACLE_VERTICES: usize = 20;

pub enum Orders {
    Single(i64),
    Range(NRange),
}

pub struct Selector {
    pub name: FamilyName,
    pub orders: Orders,
    pub d: Option<usize>,
    pub q: Option<BigRational>,
    pub out: Option<PathBuf>,
}

impl Selector {
    fn orders(&self) -> Vec<i64> {
        match self.orders {
            Orders::Single(n) => vec![n],
            Orders::Range(r) => r.iter().collect(),
        }
    }

    fn graph(&self, n: i64) -> squarish::Result<LatticeGraph> {
        let mut id = FamilyId::new(self.name, n);
        if let Some(d) = self.d {
            id = id.with_d(d);
        }
        if let Some(q) = &self.q {
            id = id.with_q(q.clone());
        }
        build_family(&id)
    }

    /// A bare value for a single order, `FAMILY n value` rows for a range.
    fn label(&self, n: i64, value: &str) -> String {
        match self.orders {
            Orders::Single(_) => value.to_string(),
            Orders::Range(_) => format!("{} {n} {value}", self.name),
        }
    }
}

/// Runs `f` over the orders in parallel and keeps the results in order.
fn per_order<T: Send>(sel: &Selector, f: impl Fn(i64) -> T + Sync) -> Vec<(i64, T)> {
    sel.orders().into_par_iter().map(|n| (n, f(n))).collect()
}

fn rational_text(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn build(sel: &Selector) -> anyhow::Result<Report> {
    let mut report = Report::new(sel.out.clone(), None);
    for (_, g) in per_order(sel, |n| sel.graph(n)) {
        report.raw(&g?.serialize());
    }
    Ok(report)
}

pub fn charpoly(sel: &Selector) -> anyhow::Result<Report> {
    let mut report = Report::new(sel.out.clone(), Some("family,n,charpoly"));
    let rows = per_order(sel, |n| -> squarish::Result<String> {
        let a = sel.graph(n)?.adjacency_matrix();
        Ok(if a.is_integral() {
            a.charpoly_integer()?.to_compact_string()
        } else {
            a.charpoly()?.to_compact_string()
        })
    });
    for (n, p) in rows {
        let p = p?;
        report.line(&sel.label(n, &p), Some(&format!("{},{n},{p}", sel.name)));
    }
    Ok(report)
}

fn oracle_suffix(
    report: &mut Report,
    oracle: Option<squarish::Result<String>>,
    value: &str,
) -> String {
    match oracle {
        None => String::new(),
        Some(Ok(v)) => format!(" oracle {v} {}", report.check(v == value)),
        Some(Err(Error::CapExceeded { .. })) => " oracle skipped".to_string(),
        Some(Err(e)) => {
            eprintln!("oracle error: {e}");
            format!(" oracle error {}", report.check(false))
        }
    }
}

pub fn trees(sel: &Selector, oracle: bool) -> anyhow::Result<Report> {
    let mut report = Report::new(sel.out.clone(), Some("family,n,trees"));
    let rows = per_order(
        sel,
        |n| -> squarish::Result<(String, Option<squarish::Result<String>>)> {
            let g = sel.graph(n)?;
            let value = tree_count(&g)?.to_string();
            let check = oracle.then(|| {
                if g.vertex_count() > TreeCaps::default().max_vertices {
                    return Err(Error::CapExceeded {
                        what: "tree enumeration".into(),
                        cap: TreeCaps::default().max_vertices,
                    });
                }
                let all = enumerate_trees(&g, &TreeCaps::default())?;
                Ok(squarish::trees::weighted_tree_sum(&g, &all)
                    .numer()
                    .to_string())
            });
            Ok((value, check))
        },
    );
    for (n, row) in rows {
        let (value, check) = row?;
        let suffix = oracle_suffix(&mut report, check, &value);
        report.line(
            &sel.label(n, &format!("{value}{suffix}")),
            Some(&format!("{},{n},{value}", sel.name)),
        );
    }
    Ok(report)
}

pub fn matchings(sel: &Selector, oracle: bool) -> anyhow::Result<Report> {
    let mut report = Report::new(sel.out.clone(), Some("family,n,matchings"));
    let rows = per_order(
        sel,
        |n| -> squarish::Result<(String, Option<squarish::Result<String>>)> {
            let g = sel.graph(n)?;
            let value = rational_text(&count_matchings(&g)?);
            let check = oracle.then(|| count_matchings_bruteforce(&g).map(|v| rational_text(&v)));
            Ok((value, check))
        },
    );
    for (n, row) in rows {
        let (value, check) = row?;
        let suffix = oracle_suffix(&mut report, check, &value);
        report.line(
            &sel.label(n, &format!("{value}{suffix}")),
            Some(&format!("{},{n},{value}", sel.name)),
        );
    }
    Ok(report)
}

pub fn symmetry(sel: &Selector, group: &str, trees: bool, oracle: bool) -> anyhow::Result<Report> {
    let group: SymmetryGroup = group.parse()?;
    let what = if trees { "trees" } else { "matchings" };
    let mut report = Report::new(sel.out.clone(), Some(&format!("family,n,group,{what}")));
    let rows = per_order(
        sel,
        |n| -> squarish::Result<(String, Option<squarish::Result<String>>)> {
            let g = sel.graph(n)?;
            let caps = TreeCaps::default();
            let value = if trees {
                match symmetry_class_count(sel.name, n, group) {
                    Ok(c) => c.value,
                    Err(Error::NoClosedForm(_)) => {
                        count_invariant_trees(&g, &group.maps(&g)?, &caps)?
                    }
                    Err(e) => return Err(e),
                }
            } else {
                count_invariant_matchings(&g, group)?
            }
            .to_string();
            let check = oracle.then(|| {
                let gens = group.maps(&g)?;
                if trees {
                    count_invariant_trees(&g, &gens, &caps).map(|v| v.to_string())
                } else {
                    count_invariant_matchings_bruteforce(&g, &gens, ORACLE_VERTICES)
                        .map(|v| v.to_string())
                }
            });
            Ok((value, check))
        },
    );
    for (n, row) in rows {
        let (value, check) = row?;
        let suffix = oracle_suffix(&mut report, check, &value);
        let text = match sel.orders {
            Orders::Single(_) => format!("{value}{suffix}"),
            Orders::Range(_) => format!("{} {n} {group} {value}{suffix}", sel.name),
        };
        report.line(&text, Some(&format!("{},{n},{group},{value}", sel.name)));
    }
    Ok(report)
}

pub fn verify_theorem(
    theorem: &str,
    range: NRange,
    mode: Option<&str>,
    out: Option<PathBuf>,
) -> anyhow::Result<Report> {
    let theorem: Theorem = theorem.parse()?;
    let mode: CertMode = match mode {
        Some(m) => m.parse()?,
        None => theorem.default_mode(),
    };
    if range.lo < theorem.min_order() {
        bail!("{theorem} needs n >= {}", theorem.min_order());
    }
    let mut report = Report::new(out, Some("theorem,n,mode,status,detail"));
    let rows: Vec<_> = range
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| (n, certify(theorem, n, mode)))
        .collect();
    for (n, cert) in rows {
        match cert {
            Ok(c) => {
                report.check(c.pass);
                let row = format!(
                    "{theorem},{n},{mode},{},{}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.detail
                );
                report.line(&c.to_string(), Some(&row));
            }
            Err(e) => {
                report.check(false);
                let text = format!("CERT {theorem} {n} {mode} FAIL {e}");
                report.line(&text, Some(&format!("{theorem},{n},{mode},FAIL,{e}")));
            }
        }
    }
    Ok(report)
}

pub fn verify_formula(
    formula: &str,
    range: NRange,
    precision: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<Report> {
    let ids: Vec<FormulaId> = if formula.eq_ignore_ascii_case("all") {
        FormulaId::ALL.to_vec()
    } else {
        vec![formula.parse()?]
    };
    let items: Vec<(FormulaId, i64)> = ids
        .iter()
        .flat_map(|&id| {
            range
                .iter()
                .filter(move |&n| n >= id.min_n())
                .map(move |n| (id, n))
        })
        .collect();
    if items.is_empty() {
        bail!("no valid orders in {range}");
    }
    let rows: Vec<_> = items
        .into_par_iter()
        .map(|(id, n)| {
            let expected = exact_counterpart(id, n);
            let got = eval_formula_with(id, n, precision);
            (id, n, expected, got)
        })
        .collect();
    let mut report = Report::new(out, Some("formula,n,expected,got,status"));
    for (id, n, expected, got) in rows {
        let expected = expected
            .map(|v| v.to_string())
            .map_err(|e| anyhow!("{id} at n={n}: {e}"))?;
        let got = match got {
            Ok(ev) => ev.value.to_string(),
            Err(e) => {
                eprintln!("{id} at n={n}: {e}");
                "-".to_string()
            }
        };
        let status = report.check(expected == got);
        report.line(
            &format!("FORMULA {id} {n} expected {expected} got {got} {status}"),
            Some(&format!("{id},{n},{expected},{got},{status}")),
        );
    }
    Ok(report)
}

/// Writes `count = 2^n * m^2` when the count has that shape.
pub fn squares_form(count: &BigInt, n: i64) -> Option<String> {
    let two_n = BigInt::one() << n as usize;
    if count.is_zero() || !(count % &two_n).is_zero() {
        return None;
    }
    let rest = count / &two_n;
    let m = rest.sqrt();
    (&m * &m == rest).then(|| format!("2^{n}*{m}^2"))
}

pub fn census_holes(max_n: i64, out: Option<PathBuf>) -> anyhow::Result<Report> {
    if max_n < 1 {
        bail!("--max-n must be at least 1");
    }
    let mut report = Report::new(out, Some("n,count,form"));
    for n in 1..=max_n {
        // Sequential: the large frontiers need the whole machine each.
        let g = build_family(&FamilyId::new(FamilyName::HoledSquare, n))?;
        let count = count_matchings(&g)
            .with_context(|| format!("H_{n}"))?
            .to_integer();
        let form = squares_form(&count, n).unwrap_or_else(|| "-".into());
        let mut text = format!("H {n} {count} {form}");
        if let Ok(tabulated) = encoded_census_value(n) {
            if tabulated != count {
                report.fail();
                text.push_str(&format!(" FAIL tabulated {tabulated}"));
            }
        }
        report.line(&text, Some(&format!("{n},{count},{form}")));
    }
    Ok(report)
}

pub fn highdim_verify(d: usize, range: NRange, out: Option<PathBuf>) -> anyhow::Result<Report> {
    if range.lo < 1 {
        bail!("side must be at least 1");
    }
    let mut report = Report::new(out, Some("d,n,status,detail"));
    let rows: Vec<_> = range
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let computed = grid_d(d, n).adjacency_matrix().charpoly_integer();
            (n, computed, encoded_highdim_charpoly(d, n))
        })
        .collect();
    for (n, computed, encoded) in rows {
        let computed = computed?;
        let (ok, detail) = match encoded {
            Ok(e) if e == computed => (true, format!("degree {}", n.pow(d as u32))),
            Ok(e) => (
                false,
                format!(
                    "tabulated expansion has degree {} where {} is needed",
                    e.degree().unwrap_or(0),
                    computed.degree().unwrap_or(0)
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        let status = report.check(ok);
        report.line(
            &format!("HIGHDIM {d} {n} {status} {detail}"),
            Some(&format!("{d},{n},{status},{detail}")),
        );
    }
    Ok(report)
}
