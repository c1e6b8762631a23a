//! Deterministic verification suites behind `vss verify`.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use num_traits::Zero;
use serde::Serialize;

use crate::cohomology::{self, normalized_basis, normalized_quotient_dim, poincare_coefficient};
use crate::diagrams::{
    double_factorial_odd, enumerate_chord_diagrams, four_t_quotient_dim, stu_quotient_dim,
    weight_space, MAX_TRIVALENT_DEGREE,
};
use crate::knots::{chord_diagram_of, corpus, extend_invariant, symbol, Framing, V2};
use crate::spectral::{
    coface_pullback_full, d1_matrix, d1_matrix_full, four_term_row_pattern,
    homology_presentation_check, matching_transport, verify_prop_e2, verify_prop_e2_with,
    DiagonalReport, SignConvention, MAX_DIAGONAL_N,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(
        &mut self,
        suite: &str,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            suite: suite.to_string(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "{tag} {}/{}: {}", c.suite, c.name, c.detail).expect("string write");
        }
        writeln!(
            s,
            "{} checks, {} failed",
            self.checks.len(),
            self.failures()
        )
        .expect("string write");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "passed": self.passed(), "checks": self.checks }).to_string()
    }
}

/// Every suite, with diagram degrees bounded by `max_n`.
pub fn verify_all(max_n: usize, golden_dir: Option<&Path>) -> Report {
    let mut r = Report::default();
    poincare(&mut r);
    vanishing(&mut r);
    normalization(&mut r);
    differential(&mut r);
    homology_relations(&mut r);
    let diag_n = max_n.min(MAX_DIAGONAL_N);
    let reports = diagonal(&mut r, diag_n);
    four_term_rows(&mut r, diag_n);
    cotower(&mut r, &reports);
    bar_natan(&mut r, max_n.min(MAX_TRIVALENT_DEGREE));
    finite_type(&mut r);
    symbols(&mut r);
    if let Some(dir) = golden_dir {
        golden(&mut r, dir, &reports);
    }
    r
}

fn poincare(r: &mut Report) {
    for p in 1..=6 {
        let ok = (0..=2 * p).step_by(2).all(|q| {
            cohomology::basis(p, q).map(|b| b.len() as u64).ok() == Some(poincare_coefficient(p, q))
        });
        r.push(
            "poincare",
            format!("p={p}"),
            ok,
            format!("{:?}", cohomology::poincare_polynomial(p)),
        );
    }
}

fn vanishing(r: &mut Report) {
    let mut bad = Vec::new();
    for p in 1..=6 {
        for q in (0..p).step_by(2) {
            if normalized_basis(p, q).map(|b| b.dim()).unwrap_or(1) != 0 {
                bad.push((p, q));
            }
        }
    }
    r.push(
        "vanishing",
        "q<p,p<=6",
        bad.is_empty(),
        format!("nonzero entries {bad:?}"),
    );
}

fn normalization(r: &mut Report) {
    for p in 1..=5 {
        let ok = (0..=8).step_by(2).all(|q| {
            normalized_quotient_dim(p, q).ok() == normalized_basis(p, q).ok().map(|b| b.dim())
        });
        r.push(
            "normalization",
            format!("p={p},q<=8"),
            ok,
            "codegeneracy quotient = all-index basis",
        );
    }
}

fn differential(r: &mut Report) {
    let mut normalized_ok = true;
    for p in 2..=6 {
        for q in (2..=8).step_by(2) {
            normalized_ok &= d1_matrix(p - 1, q)
                .and_then(|a| Ok(a.mul(&d1_matrix(p, q)?).expect("shapes").is_zero()))
                .unwrap_or(false);
        }
    }
    r.push("d1", "d1d1 normalized p<=6,q<=8", normalized_ok, "");
    let mut full_ok = true;
    let mut coherence_ok = true;
    for p in 2..=5 {
        for q in (0..=6).step_by(2) {
            full_ok &= d1_matrix_full(p - 1, q)
                .and_then(|a| Ok(a.mul(&d1_matrix_full(p, q)?).expect("shapes").is_zero()))
                .unwrap_or(false);
            for j in 1..=p {
                for i in 0..j {
                    let ok = (|| -> Result<bool, crate::spectral::SpectralError> {
                        let lhs =
                            coface_pullback_full(i, p - 1, q)?.mul(&coface_pullback_full(j, p, q)?);
                        let rhs = coface_pullback_full(j - 1, p - 1, q)?
                            .mul(&coface_pullback_full(i, p, q)?);
                        Ok(lhs.expect("shapes") == rhs.expect("shapes"))
                    })()
                    .unwrap_or(false);
                    coherence_ok &= ok;
                }
            }
        }
    }
    r.push("d1", "d1d1 full p<=5,q<=6", full_ok, "");
    r.push("d1", "coface identities p<=5,q<=6", coherence_ok, "");
}

fn homology_relations(r: &mut Report) {
    for p in 2..=6 {
        for q in (p + p % 2..=8).step_by(2) {
            match homology_presentation_check(p, q) {
                Ok(h) => r.push(
                    "homology",
                    format!("p={p},q={q}"),
                    h.passed(),
                    format!(
                        "presentation {} vs normalized {}",
                        h.presentation_dim, h.normalized_dim
                    ),
                ),
                Err(e) => r.push("homology", format!("p={p},q={q}"), false, e.to_string()),
            }
        }
    }
}

fn diagonal(r: &mut Report, max_n: usize) -> Vec<DiagonalReport> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let bij = matching_transport(n)
            .map(|perm| {
                let mut seen = vec![false; perm.len()];
                perm.iter().for_each(|&i| seen[i] = true);
                perm.len() == enumerate_chord_diagrams(n).len() && seen.iter().all(|&b| b)
            })
            .unwrap_or(false);
        let dim = normalized_basis(2 * n, 2 * n).map(|b| b.dim() as u64).ok();
        r.push(
            "e1-diagonal",
            format!("n={n}"),
            bij && dim == Some(double_factorial_odd(n)),
            format!("dim E1 = {dim:?}, (2n-1)!! = {}", double_factorial_odd(n)),
        );
        match verify_prop_e2(n) {
            Ok(rep) => {
                r.push(
                    "e2-diagonal",
                    format!("n={n}"),
                    rep.iso && rep.dim_e2 == rep.dim_w,
                    format!("dim E2 = {}, dim W = {}", rep.dim_e2, rep.dim_w),
                );
                let negated = verify_prop_e2_with(n, SignConvention::Negated)
                    .map(|x| x.iso)
                    .unwrap_or(false);
                r.push("e2-diagonal", format!("n={n} negated signs"), negated, "");
                out.push(rep);
            }
            Err(e) => r.push("e2-diagonal", format!("n={n}"), false, e.to_string()),
        }
    }
    out
}

fn four_term_rows(r: &mut Report, max_n: usize) {
    for n in 2..=max_n {
        match four_term_row_pattern(n) {
            Ok(p) => r.push(
                "four-term",
                format!("n={n}"),
                p.bad_rows.is_empty() && p.max_nonzeros <= 4,
                format!("{} rows, {} full four-term", p.rows, p.four_term_rows),
            ),
            Err(e) => r.push("four-term", format!("n={n}"), false, e.to_string()),
        }
    }
}

fn cotower(r: &mut Report, reports: &[DiagonalReport]) {
    for rep in reports {
        let mut total = 0;
        let mut ok = rep.cotower.len() == rep.n + 1 && rep.cotower == rep.cotower_odd;
        for (k, &c) in rep.cotower.iter().enumerate() {
            total += if k == 0 { 1 } else { weight_space(k).dim() };
            ok &= c == total;
        }
        r.push(
            "cotower",
            format!("n={}", rep.n),
            ok,
            format!("{:?}", rep.cotower),
        );
    }
}

fn bar_natan(r: &mut Report, max_n: usize) {
    for n in 1..=max_n {
        let stu = stu_quotient_dim(n).ok();
        let four_t = four_t_quotient_dim(n);
        r.push(
            "stu",
            format!("n={n}"),
            stu == Some(four_t),
            format!("STU quotient {stu:?}, 4T quotient {four_t}"),
        );
    }
}

fn finite_type(r: &mut Report) {
    let knots = corpus();
    let by_n = |n: usize| knots.iter().filter(move |e| e.knot.n() == n);
    let v2_three = by_n(3).all(|e| extend_invariant(&V2, &e.knot).is_zero());
    r.push(
        "finite-type",
        "v2 vanishes on 3-singular",
        v2_three,
        format!("{} knots", by_n(3).count()),
    );
    let v2_two = by_n(2).any(|e| !extend_invariant(&V2, &e.knot).is_zero());
    r.push("finite-type", "v2 nonzero on some 2-singular", v2_two, "");
    let fr_two = by_n(2).all(|e| extend_invariant(&Framing, &e.knot).is_zero());
    r.push(
        "finite-type",
        "framing vanishes on 2-singular",
        fr_two,
        format!("{} knots", by_n(2).count()),
    );
    let fr_one = by_n(1).any(|e| !extend_invariant(&Framing, &e.knot).is_zero());
    r.push(
        "finite-type",
        "framing nonzero on some 1-singular",
        fr_one,
        "",
    );
    let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for e in by_n(2) {
        values
            .entry(chord_diagram_of(&e.knot).to_string())
            .or_default()
            .push(extend_invariant(&V2, &e.knot).to_string());
    }
    let consistent = values.values().all(|v| v.iter().all(|x| *x == v[0]));
    let summary: Vec<String> = values
        .iter()
        .map(|(d, v)| format!("{d}:{}", v[0]))
        .collect();
    r.push(
        "finite-type",
        "v2 depends only on chord diagram",
        consistent,
        summary.join(" "),
    );
}

fn symbols(r: &mut Report) {
    let s = symbol(&V2, 2);
    let vals: Vec<String> = s.values.iter().map(ToString::to_string).collect();
    r.push(
        "symbol",
        "v2 degree 2",
        s.is_weight_system(),
        vals.join(","),
    );
    let s = symbol(&Framing, 1);
    let vals: Vec<String> = s.values.iter().map(ToString::to_string).collect();
    r.push(
        "symbol",
        "framing degree 1",
        s.is_weight_system(),
        vals.join(","),
    );
}

pub fn golden_file_name(n: usize) -> String {
    format!("diagonal_n{n}.json")
}

fn golden(r: &mut Report, dir: &Path, reports: &[DiagonalReport]) {
    for rep in reports {
        let name = golden_file_name(rep.n);
        match std::fs::read_to_string(dir.join(&name)) {
            Ok(text) => {
                let ok = text.trim_end() == rep.to_json();
                r.push("golden", name, ok, if ok { "match" } else { "differs" });
            }
            Err(_) => r.push("golden", name, false, "missing"),
        }
    }
}

/// Writes the diagonal reports for `n = 1..=max_n` into `dir`.
pub fn bless(dir: &Path, max_n: usize) -> std::io::Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for n in 1..=max_n.min(MAX_DIAGONAL_N) {
        let rep = verify_prop_e2(n).map_err(|e| std::io::Error::other(e.to_string()))?;
        let name = golden_file_name(n);
        std::fs::write(dir.join(&name), format!("{}\n", rep.to_json()))?;
        written.push(name);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = verify_all(1, None);
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.to_text().ends_with(" 0 failed\n"));
    }
}
