//! Text rendering. Numbers use Rust's shortest round-trip formatting, so the
//! text form carries the same values as the JSON form.

use std::fmt::Write;

use netdiscern::discern::{EigenRow, Status, Verdict, WitnessPair};
use num_complex::Complex64;

use crate::document::Mode;
use crate::report::{AtlasReport, Report, SimulationReport, WitnessReport};

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else if z.im > 0.0 {
        format!("{}+{}i", num(z.re), num(z.im))
    } else {
        format!("{}-{}i", num(z.re), num(-z.im))
    }
}

fn lower<T: std::fmt::Debug>(v: T) -> String {
    format!("{v:?}").to_lowercase()
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn status_word(status: Status, mode: Mode) -> &'static str {
    match (status, mode) {
        (Status::Discernible, Mode::Network) => "Ψ-discernible",
        (Status::Indiscernible, Mode::Network) => "Ψ-indiscernible",
        (Status::Discernible, Mode::Multiagent) => "ensured",
        (Status::Indiscernible, Mode::Multiagent) => "not ensured",
        (Status::Inconclusive, _) => "inconclusive",
        (Status::NotRefuted, _) => "not refuted",
    }
}

fn spectrum(out: &mut String, name: &str, rows: &[EigenRow]) {
    let _ = writeln!(out, "spectrum of {name}:");
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<28} algebraic {:>2}  geometric {:>2}",
            complex(r.value),
            r.algebraic_multiplicity,
            r.geometric_multiplicity
        );
    }
}

fn witness_lines(out: &mut String, indent: &str, w: &WitnessPair) {
    let _ = writeln!(out, "{indent}witness at mu = {}", complex(w.mu));
    let _ = writeln!(out, "{indent}  x0     = {}", vector(&w.x0));
    let _ = writeln!(out, "{indent}  x0_bar = {}", vector(&w.x0_bar));
    let residual = w.residual.map_or("not simulated".to_string(), num);
    let _ = writeln!(
        out,
        "{indent}  residual {residual} over t in [0, {}], validated {}",
        num(w.horizon),
        w.validated
    );
}

fn verdict_line(out: &mut String, label: &str, v: &Verdict, mode: Mode) {
    let mut line = format!("  {label:<26} {}", status_word(v.status, mode));
    if let Some(mu) = v.failing_mu {
        let _ = write!(line, " at mu = {}", complex(mu));
    }
    if let Some(c) = v.failed_condition {
        let _ = write!(line, " ({c:?})");
    }
    let _ = writeln!(out, "{line}");
    for d in &v.diagnostics {
        let _ = writeln!(out, "      note: {d}");
    }
    if let Some(w) = &v.witness {
        witness_lines(out, "      ", w);
    }
}

pub fn report(r: &Report) -> String {
    let mut out = String::new();
    let s = &r.settings;
    let _ = writeln!(out, "mode: {}, N = {}, n = {}", lower(r.mode), r.nodes, r.state_dim);
    let _ = writeln!(
        out,
        "settings: tol {} ({}), t_final {} ({}), samples {} ({}), witness threshold {}",
        num(s.tol),
        lower(s.tol_source),
        num(s.t_final),
        lower(s.t_final_source),
        s.samples,
        lower(s.samples_source),
        num(s.threshold)
    );
    let _ = writeln!(out, "verdict: {}", status_word(r.verdict.status, r.mode));
    if let Some(a) = &r.network {
        let _ = writeln!(out, "method: {}", lower(a.method));
        spectrum(&mut out, "Phi", &a.spectrum);
        spectrum(&mut out, "Phi_bar", &a.spectrum_bar);
        let _ = writeln!(out, "checks:");
        verdict_line(&mut out, "combined", &a.verdict, r.mode);
        for (label, v) in [
            ("eigenspace conditions", &a.direct),
            ("lower-dimensional atlas", &a.lower_dimensional),
            ("dimension formula", &a.dimension_formula),
            ("augmented PBH", &a.augmented_pbh),
        ] {
            if let Some(v) = v {
                verdict_line(&mut out, label, v, r.mode);
            }
        }
        verdict_line(&mut out, "sensor bound", &a.sensor_bound, r.mode);
        verdict_line(&mut out, "reduced system", &a.reduced_system, r.mode);
        verdict_line(&mut out, "observability", &a.observability, r.mode);
        if let Some(k) = a.min_sensors_hint {
            let _ = writeln!(out, "minimum sensor count hint: {k}");
        }
    }
    if let Some(m) = &r.multiagent {
        spectrum(&mut out, "F", &m.spectrum);
        spectrum(&mut out, "F_bar", &m.spectrum_bar);
        let l = &m.legacy;
        let _ = writeln!(out, "legacy sufficient conditions:");
        for (label, ok) in [
            ("(Lap, Delta) observable", l.laplacian_observable),
            ("(Lap_bar, Delta) observable", l.laplacian_bar_observable),
            ("(A - lambda B, C) observable", l.node_pairs_observable),
            ("Delta ensures discernibility", l.delta_ensures),
            ("C ensures discernibility", l.c_ensures),
        ] {
            let _ = writeln!(out, "  {label:<32} {ok}");
        }
        let _ = writeln!(
            out,
            "  pair dimensions for Delta: outputs {}, states {}",
            l.delta_check.output_pairs_dim, l.delta_check.state_pairs_dim
        );
        for (mu, v) in &l.common_eigenpairs {
            let parts: Vec<String> = v.iter().map(|z| complex(*z)).collect();
            let _ = writeln!(out, "  common eigenpair {} : [{}]", complex(*mu), parts.join(", "));
        }
        for (a, b, p) in &l.c_pairs {
            let _ = writeln!(
                out,
                "  C check at ({}, {}): outputs {}, states {}, ensured {}",
                complex(*a),
                complex(*b),
                p.output_pairs_dim,
                p.state_pairs_dim,
                p.ensured
            );
        }
        let _ = writeln!(out, "  all legacy conditions hold: {}", l.all_hold);
        let _ = writeln!(out, "corrected criterion:");
        verdict_line(&mut out, "sum of eigenspaces", &l.corrected, r.mode);
        for n in &l.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    out
}

pub fn witness(w: &WitnessReport) -> String {
    let mut out = format!("{}\n", w.message);
    if let Some(p) = &w.witness {
        witness_lines(&mut out, "", p);
    }
    out
}

pub fn simulation(s: &SimulationReport) -> String {
    let c = &s.comparison;
    let mut out = String::from("t deviation\n");
    for (t, d) in c.t_grid.iter().zip(&c.deviations) {
        let _ = writeln!(out, "{} {}", num(*t), num(*d));
    }
    let _ = writeln!(out, "max_abs_dev {}", num(c.max_abs_dev));
    let _ = writeln!(out, "max_rel_dev {}", num(c.max_rel_dev));
    let _ = writeln!(
        out,
        "{} threshold {}",
        if s.below_threshold { "below" } else { "above" },
        num(s.threshold)
    );
    out
}

pub fn atlas(a: &AtlasReport) -> String {
    let mut out = String::new();
    for t in &a.tables {
        let _ = writeln!(out, "{} topology:", t.topology);
        let _ = writeln!(out, "  {:<20} {:>5} {:>5} {:<20} {:>5} {:>5}", "lambda", "chain", "alpha", "mu", "theta", "gamma");
        for r in &t.rows {
            let _ = writeln!(
                out,
                "  {:<20} {:>5} {:>5} {:<20} {:>5} {:>5}{}{}",
                complex(r.lambda),
                r.chain + 1,
                r.alpha,
                complex(r.mu),
                r.theta,
                r.gamma,
                if r.truncated { " truncated" } else { "" },
                if r.boundary { " boundary" } else { "" }
            );
            for (k, eta) in r.eta.iter().enumerate() {
                let parts: Vec<String> = eta.iter().map(|z| complex(*z)).collect();
                let _ = writeln!(out, "      eta{} = [{}]", k + 1, parts.join(", "));
            }
        }
        if t.degenerate {
            let _ = writeln!(out, "  note: atlas spans overlap at some mu");
        }
        for g in &t.agreement {
            let _ = writeln!(
                out,
                "  mu {:<20} direct dim {} atlas dim {} max angle {} {}",
                complex(g.mu),
                g.direct_dim,
                g.atlas_dim,
                num(g.max_angle),
                if g.agrees { "agrees" } else { "DISAGREES" }
            );
        }
        for mu in &t.unmatched {
            let _ = writeln!(out, "  atlas eigenvalue {} has no direct counterpart", complex(*mu));
        }
        let _ = writeln!(out, "  agreement: {}", if t.agrees { "yes" } else { "no" });
    }
    out
}
