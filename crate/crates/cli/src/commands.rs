//! Subcommand implementations: each renders one report to a string.

use anyhow::Result;
use serde_json::{json, Value};

use spline_affine_core::{
    build_spline, chaos_order, decimal_string, decompose, full_report, gamma, gram, haar_system,
    natural_index, paley_index, spline_system, FullReport, MultiIndex, Rational,
};

/// Significant digits for decimal rendering of exact values.
const DIGITS: usize = 30;

fn rational_pair(value: &Rational) -> Value {
    json!([value.numer().to_string(), value.denom().to_string()])
}

fn dyadic(i: u64, den: u64) -> Rational {
    Rational::new(i.into(), den.into())
}

/// `spline`: sampled values as CSV, or the full exact representation as JSON.
pub fn spline_report(m: u32, samples: u64, as_json: bool) -> Result<String> {
    let spec = build_spline(m)?;
    if as_json {
        let mut v = spec.to_json();
        v["values_at_quarters"] = json!([
            decimal_string(&spec.poly().eval(&dyadic(0, 4)), DIGITS),
            decimal_string(&spec.poly().eval(&dyadic(1, 4)), DIGITS),
            decimal_string(&spec.poly().eval(&dyadic(2, 4)), DIGITS),
            decimal_string(&spec.poly().eval(&dyadic(3, 4)), DIGITS),
        ]);
        return Ok(format!("{}\n", serde_json::to_string_pretty(&v)?));
    }
    let mut out = String::from("t,value\n");
    for i in 0..=samples {
        let t = dyadic(i, samples);
        let value = spec.poly().eval(&t);
        out.push_str(&format!(
            "{},{}\n",
            decimal_string(&t, DIGITS),
            decimal_string(&value, DIGITS)
        ));
    }
    Ok(out)
}

/// `enum`: index table for all words up to the given length.
pub fn enum_report(depth: u32) -> Result<String> {
    let mut out = String::from("alpha,paley_n,natural_n,chaos_order\n");
    for len in 0..=depth {
        for alpha in MultiIndex::all_of_length(len) {
            let paley = paley_index(&alpha);
            out.push_str(&format!(
                "{},{},{},{}\n",
                alpha.to_bit_string(),
                paley,
                natural_index(&alpha),
                chaos_order(paley)?
            ));
        }
    }
    Ok(out)
}

/// `chaos`: the nonzero coefficient table plus the exact summary block.
pub fn chaos_report(m: u32, max_index: u64, as_csv: bool) -> Result<String> {
    let d = decompose(m, max_index)?;
    let g = gamma(m);
    if as_csv {
        let mut out = String::from("n,alpha,order_d,coeff_num,coeff_den\n");
        for (n, c) in d.coeffs() {
            let alpha = spline_affine_core::paley_multiindex(*n)?;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                n,
                alpha.to_bit_string(),
                chaos_order(*n)?,
                c.numer(),
                c.denom()
            ));
        }
        out.push_str(&format!("# norm_sq,{},{}\n", d.norm_sq().numer(), d.norm_sq().denom()));
        for (order, p) in d.partial_sq_norms() {
            out.push_str(&format!("# partial_sq_norm_{order},{},{}\n", p.numer(), p.denom()));
        }
        out.push_str(&format!("# residual,{},{}\n", d.residual().numer(), d.residual().denom()));
        out.push_str(&format!("# gamma,{},{}\n", g.numer(), g.denom()));
        out.push_str(&format!("# order3_ok,{}\n", d.order3_matches_closed_form()));
        return Ok(out);
    }
    let rows: Vec<Value> = d
        .coeffs()
        .iter()
        .map(|(n, c)| {
            let alpha = spline_affine_core::paley_multiindex(*n).expect("n >= 1");
            json!({
                "n": n,
                "alpha": alpha.to_bit_string(),
                "order": chaos_order(*n).expect("n >= 1"),
                "coeff": rational_pair(c),
            })
        })
        .collect();
    let partials: Value = d
        .partial_sq_norms()
        .iter()
        .map(|(order, p)| (order.to_string(), rational_pair(p)))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    let v = json!({
        "m": m,
        "max_index": max_index,
        "rows": rows,
        "summary": {
            "norm_sq": rational_pair(d.norm_sq()),
            "partial_sq_norms": partials,
            "residual": rational_pair(d.residual()),
            "gamma": rational_pair(&g),
            "order3_ok": d.order3_matches_closed_form(),
        },
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

fn report_json(report: &FullReport) -> Value {
    let c = &report.certificate;
    json!({
        "m": c.m,
        "depth": c.depth,
        "lambda_min": c.lambda_min,
        "lambda_max": c.lambda_max,
        "A_est": c.a_est,
        "B_est": c.b_est,
        "deviation_norm": c.deviation_norm,
        "norm_sum": [c.norm_sum.0, c.norm_sum.1],
        "pass": report.all_pass(),
        "eig_residual": c.eig_residual,
    })
}

/// `riesz`: one certification run as JSON.
pub fn riesz_report(m: u32, depth: u32, max_index: u64, tol: f64) -> Result<String> {
    let report = full_report(m, depth, max_index, tol)?;
    Ok(format!("{}\n", serde_json::to_string_pretty(&report_json(&report))?))
}

/// `gram`: exact entries as `a+b*sqrt2` strings, one CSV row per matrix row.
/// m = 0 dumps the classical Haar section instead.
pub fn gram_report(m: u32, depth: u32) -> Result<String> {
    let count = 1u64 << depth;
    let system = if m == 0 { haar_system(count)? } else { spline_system(m, count)? };
    let g = gram(&system)?;
    let mut out = String::new();
    for i in 0..g.size() {
        let row: Vec<String> = (0..g.size()).map(|j| g.get(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// `verify`: pass/fail table over m = 1..=m_max; returns the rendered table
/// and whether every check passed.
pub fn verify_report(m_max: u32, depth: u32, max_index: u64, tol: f64) -> Result<(String, bool)> {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<3} {:<12} {:<12} {:<11} {:<22} {:<7} {:<7} {:<9} {:<10} {:<9} {:<5} {}\n",
        "m",
        "lambda_min",
        "lambda_max",
        "deviation",
        "norm_sum",
        "spline",
        "order3",
        "sections",
        "deviation",
        "norm_sum",
        "tail",
        "overall"
    ));
    let mut all = true;
    for m in 1..=m_max {
        let report = full_report(m, depth, max_index, tol)?;
        let c = &report.certificate;
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{:<3} {:<12.8} {:<12.8} {:<11.8} [{:.8}, {:.8}] {:<7} {:<7} {:<9} {:<10} {:<9} {:<5} {}\n",
            m,
            c.lambda_min,
            c.lambda_max,
            c.deviation_norm,
            c.norm_sum.0,
            c.norm_sum.1,
            verdict(report.spline_ok),
            verdict(report.order3_ok),
            verdict(report.containment_ok),
            verdict(report.deviation_ok),
            verdict(report.norm_sum_ok),
            verdict(report.tail_ok),
            verdict(report.all_pass()),
        ));
        all &= report.all_pass();
    }
    out.push_str(if all { "overall: PASS\n" } else { "overall: FAIL\n" });
    Ok((out, all))
}
