//! Text renderings. These drop detail; JSON is the format to parse.

use std::fmt::Write;

use filterlab::checks::Certificate;
use filterlab::space::SpaceCatalogue;
use filterlab::theorem::{CheckMethod, ComfortReport, ConditionCheck, Cor22Report, Cor23Report, Cor54Report, Thm21Report};

pub fn certificate(i: usize, c: &Certificate) -> String {
    format!(
        "{} {} #{i} ({}, {} checked)",
        if c.value { "PASS" } else { "FAIL" },
        c.claim,
        c.method,
        c.checked
    )
}

pub fn catalogue(head: &str, cat: &SpaceCatalogue) -> String {
    let mut s = format!("{head}\n");
    for x in cat.iter() {
        let opens: Vec<Vec<usize>> = x.opens().iter().map(|o| o.to_vec()).collect();
        let _ = writeln!(s, "  n={} opens={opens:?}", x.len());
    }
    s
}

pub fn comfort(r: &ComfortReport) -> String {
    let mut s = String::new();
    for (i, c) in r.classes.iter().enumerate() {
        let cores: Vec<String> = c
            .iter()
            .map(|&f| format!("{{{}}}", r.filters[f].index().labels_of(r.filters[f].core()).join(",")))
            .collect();
        let mark = if r.minimum == Some(i) { " (minimum)" } else { "" };
        let _ = writeln!(s, "class {i}{mark}: {}", cores.join(" "));
    }
    let _ = writeln!(
        s,
        "core-size comparison: {}",
        if r.matches_core_size() {
            "matches".to_string()
        } else {
            format!("{} mismatched pairs", r.core_size_mismatches.len())
        }
    );
    s
}

fn condition(name: &str, c: &ConditionCheck) -> String {
    format!(
        "{name}: {} ({}, {} products, {} skipped)\n",
        if c.holds { "holds" } else { "fails" },
        method_name(c.method),
        c.products_checked,
        c.products_skipped
    )
}

pub fn thm21(r: &Thm21Report) -> String {
    let mut s = String::new();
    match &r.cond3 {
        Some(c) => {
            let _ = writeln!(s, "cond3: filter #{} equivalent on the catalogue", c.position);
        }
        None => s.push_str("cond3: fails\n"),
    }
    s.push_str(&condition("cond2", &r.cond2));
    s.push_str(&condition("cond1", &r.cond1));
    if let Some(u) = &r.ultrafilter_necessity {
        let _ = writeln!(s, "ultrafilter necessity: member {} -> {}", u.space, u.filter_is_ultrafilter);
    }
    if let Some(w) = &r.counterexample {
        let _ = writeln!(s, "diagonal: {:?}", w.diagonal_tuples);
    }
    let _ = writeln!(s, "consistent: {}", r.consistent);
    s
}

pub fn cor22(r: &Cor22Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "cond3: {}", r.cond3.as_ref().map_or("fails".into(), |c| format!("filter #{}", c.position)));
    s.push_str(&condition("cond2", &r.cond2));
    s.push_str(&condition("cond1", &r.cond1));
    let _ = writeln!(s, "consistent: {}", r.consistent);
    s
}

pub fn cor23(r: &Cor23Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "power compact: {}", r.power_compact);
    let _ = writeln!(s, "F-compact for: {}", r.filter.as_ref().map_or("none".into(), |c| format!("filter #{}", c.position)));
    s.push_str(&condition("powers", &r.powers));
    let _ = writeln!(s, "consistent: {}", r.consistent);
    s
}

pub fn cor54(r: &Cor54Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "(1) bounded: {}", r.cond1_bounded);
    let _ = writeln!(s, "(2) surrogate: {}", r.cond2_surrogate);
    let _ = writeln!(s, "(3): {}", r.cond3);
    let _ = writeln!(s, "(4) bounded: {}", r.cond4_bounded);
    if let Some(a) = &r.finite_scale_artifact {
        let _ = writeln!(s, "note: {a}");
    }
    let _ = writeln!(s, "consistent: {}", r.consistent);
    s
}

fn method_name(m: CheckMethod) -> String {
    serde_json::to_value(m)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
