//! Report-producing commands behind the `ncsurf` binary.

use std::fmt::{self, Write as _};

use ncsurf_core::construct::{duncehat_construct, Construct, Diagonal};
use ncsurf_core::delta::{disc, dunce_hat, torus, CollapseOutcome, DeltaComplex2, DeltaError};
use ncsurf_core::obstruction::{bezout_argument, case_valuations, limit_stratum, t_order, z_order, z_quadric, CaseId};
use ncsurf_core::Rational;
use serde::Serialize;

pub const EXAMPLES: [&str; 4] = ["duncehat-complex", "duncehat-construct", "disc", "torus"];

/// Bad input or usage; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub status: Status,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    fn push(&mut self, name: &str, status: Status, lines: Vec<String>) {
        self.sections.push(Section { name: name.into(), status, lines });
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.status != Status::Fail)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let _ = writeln!(out, "== {}: {} ==", s.name, s.status);
            for l in &s.lines {
                let _ = writeln!(out, "    {l}");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            status: Status,
            sections: &'a [Section],
        }
        let status = if self.passed() { Status::Pass } else { Status::Fail };
        let mut s = serde_json::to_string_pretty(&Out { status, sections: &self.sections }).expect("plain data");
        s.push('\n');
        s
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn cmd_dcx_check(text: &str, budget: u64) -> Result<Report, InputError> {
    let c = DeltaComplex2::from_json(text).map_err(|e| InputError(format!("malformed complex: {e}")))?;
    let mut r = Report::default();
    let validation = c.validate();
    if !validation.is_ok() {
        r.push("validation", Status::Fail, validation.violations.iter().map(ToString::to_string).collect());
        return Ok(r);
    }
    let (v, e, t) = c.counts();
    r.push("validation", Status::Pass, vec![format!("{v} vertices, {e} edges, {t} triangles")]);
    let chi = c.euler_characteristic().map_err(|e| InputError(e.to_string()))?;
    r.push("euler characteristic", Status::Info, vec![format!("χ = {chi}")]);
    let betti = c.betti_numbers().map_err(|e| InputError(e.to_string()))?;
    r.push("betti numbers", Status::Info, vec![format!("(b0, b1, b2) = {betti}")]);
    let free = c.free_faces().map_err(|e| InputError(e.to_string()))?;
    let mut lines = vec![format!("{} free faces", free.len())];
    lines.extend(free.iter().map(ToString::to_string));
    r.push("free faces", Status::Info, lines);

    let lines = match c.collapse_search(budget) {
        Ok(CollapseOutcome::Collapsible(cert)) => {
            let replay = match cert.replay(&c) {
                Ok(_) => "certificate replays to a point".to_string(),
                Err(e) => format!("certificate replay failed: {e}"),
            };
            let mut lines = vec![format!("Collapsible in {} steps", cert.len()), replay];
            lines.extend(cert.steps.iter().enumerate().map(|(i, s)| format!("{}. {s}", i + 1)));
            lines
        }
        Ok(CollapseOutcome::NotCollapsible(reason)) => vec![format!("NotCollapsible: {reason}")],
        Ok(CollapseOutcome::Unknown { explored }) => {
            vec![format!("Unknown: budget of {budget} exhausted after {explored} nodes")]
        }
        Err(e @ DeltaError::Disconnected { .. }) => vec![format!("not applicable: {e}")],
        Err(e) => return Err(InputError(e.to_string())),
    };
    r.push("collapsibility", Status::Info, lines);
    Ok(r)
}

fn matrix_string(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn cmd_construct_report(text: &str, diagonal: Diagonal) -> Result<Report, InputError> {
    let x = Construct::from_json(text).map_err(|e| InputError(format!("malformed construct: {e}")))?;
    let mut r = Report::default();
    let dual = x.dual_complex();
    let (v, e, t) = dual.counts();
    r.push("dual complex", Status::Info, vec![format!("V = {v}, E = {e}, T = {t}")]);

    let betti = dual.betti_numbers().map_err(|e| InputError(e.to_string()))?;
    let h = x.structure_sheaf_cohomology();
    r.push(
        "structure sheaf cohomology",
        pass_if(h.matches(&betti)),
        vec![format!("(h0, h1, h2) = {h}"), format!("dual complex Betti = {betti}")],
    );

    let tp = x.triple_point_check();
    let lines = tp
        .iter()
        .map(|c| {
            let verdict = if c.passed() { "ok" } else { "violated" };
            format!(
                "C{}: ({}) + ({}) + {} = {} {verdict}",
                c.gluing, c.from_degree, c.to_degree, c.triple_points, c.sum
            )
        })
        .collect();
    r.push("triple point formula", pass_if(tp.iter().all(|c| c.passed())), lines);

    let inertia = x.combinatorial_check(diagonal);
    let lines = inertia
        .iter()
        .map(|c| {
            format!(
                "{}: matrix {}, positive inertia {}",
                x.components()[c.component].name,
                matrix_string(&c.matrix),
                c.positive_inertia
            )
        })
        .collect();
    r.push(&format!("combinatorial inertia ({diagonal})"), pass_if(inertia.iter().all(|c| c.passed())), lines);

    let gl = x.gluing_unobstructed_check();
    let lines =
        gl.iter().map(|g| format!("C{}: {} triple points, degree {}", g.gluing, g.triple_points, g.degree)).collect();
    r.push("gluing unobstructedness", pass_if(gl.iter().all(|g| g.passed())), lines);

    match x.smoothing_euler() {
        Ok(e) => r.push("smoothing euler characteristic", Status::Info, vec![format!("χ = {e}")]),
        Err(e) => r.push("smoothing euler characteristic", Status::Info, vec![format!("not computed: {e}")]),
    }
    match x.h11() {
        Ok(h) => r.push("h11", Status::Info, vec![format!("h11 = {}", h.h11), format!("note: {}", h.assumption)]),
        Err(e) => r.push("h11", Status::Info, vec![format!("not computed: {e}")]),
    }
    let mut lines = Vec::new();
    match x.expected_moduli_dim() {
        Ok(d) => lines.push(format!("moduli: {d}")),
        Err(e) => lines.push(format!("moduli: not computed: {e}")),
    }
    lines.push(format!("obstruction moduli: {}", x.obstruction_moduli_dim()));
    match x.dsemistable_expected_dim() {
        Ok(d) => lines.push(format!("d-semistable: {d}")),
        Err(e) => lines.push(format!("d-semistable: not computed: {e}")),
    }
    r.push("expected dimensions", Status::Info, lines);
    Ok(r)
}

pub fn cmd_obstruction_cases() -> Report {
    let z = z_quadric::<Rational>();
    let mut lines = vec!["case\tarc\tlimit stratum\tt_order\tz_order".to_string()];
    for id in CaseId::ALL {
        match case_valuations(id) {
            Ok(arc) => {
                let s = limit_stratum(&arc);
                let zo = z_order(&arc, &z).map_or_else(|e| e.to_string(), |v| v.to_string());
                lines.push(format!("{id}\t{arc}\t{} {}\t{}\t{zo}", s.limit_string(), s.kind, t_order(&arc)));
            }
            Err(_) => lines.push(format!("{id}\t-\tno degeneration\t-\t-")),
        }
    }
    let mut r = Report::default();
    r.push("degeneration cases", Status::Info, lines);
    let v = bezout_argument(4, 9, 2, 3).expect("positive inputs");
    r.push("bezout", Status::Info, vec![v.trace.clone(), v.symbolic()]);
    r
}

pub fn cmd_examples(name: &str) -> Result<String, InputError> {
    match name {
        "duncehat-complex" => Ok(dunce_hat().to_json()),
        "duncehat-construct" => Ok(duncehat_construct().to_json()),
        "disc" => Ok(disc().to_json()),
        "torus" => Ok(torus().to_json()),
        other => Err(InputError(format!("unknown example `{other}`; valid names: {}", EXAMPLES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_fails_iff_a_section_fails() {
        let mut r = Report::default();
        assert!(r.passed());
        r.push("a", Status::Info, vec![]);
        r.push("b", Status::Pass, vec!["x".into()]);
        assert_eq!((r.passed(), r.exit_code()), (true, 0));
        r.push("c", Status::Fail, vec![]);
        assert_eq!((r.passed(), r.exit_code()), (false, 1));
        assert_eq!(r.to_text(), "== a: INFO ==\n== b: PASS ==\n    x\n== c: FAIL ==\n");
        assert!(r.to_json().starts_with("{\n  \"status\": \"FAIL\""));
    }
}
