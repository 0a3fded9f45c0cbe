use std::fmt::Write;

use crate::glm::{FitResult, GoodnessOfFit};

/// R's significance codes with cut points 0.001, 0.01, 0.05 and 0.1.
pub fn significance_stars(p: f64) -> &'static str {
    if p <= 0.001 {
        "***"
    } else if p <= 0.01 {
        "**"
    } else if p <= 0.05 {
        "*"
    } else if p <= 0.1 {
        "."
    } else {
        ""
    }
}

/// At least five significant digits, never dropping integer digits.
pub fn format_deviance(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let int_digits = x.abs().log10().floor() as i64 + 1;
    let decimals = (5 - int_digits).max(0) as usize;
    format!("{x:.decimals$}")
}

fn format_p(p: f64) -> String {
    format!("{p:.4}")
}

/// Coefficient table in the layout of R's `summary.glm`.
pub fn render_summary(fit: &FitResult, precision: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "unifed GLM, {} link, {} classes\n",
        fit.link,
        fit.n_classes()
    );

    let header = ["", "Estimate", "Std. Error", "z value", "Pr(>|z|)", ""];
    let mut rows: Vec<[String; 6]> = Vec::with_capacity(fit.coefficients.len());
    for j in 0..fit.coefficients.len() {
        rows.push([
            fit.coefficient_names[j].clone(),
            format!("{:.precision$}", fit.coefficients[j]),
            format!("{:.precision$}", fit.standard_errors[j]),
            format!("{:.2}", fit.z_values[j]),
            format_p(fit.p_values[j]),
            significance_stars(fit.p_values[j]).to_string(),
        ]);
    }
    let mut widths = header.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }

    let _ = writeln!(out, "Coefficients:");
    let line = |cells: [&str; 6]| {
        let mut s = format!("{:<w$}", cells[0], w = widths[0]);
        for k in 1..5 {
            let _ = write!(s, " {:>w$}", cells[k], w = widths[k]);
        }
        if !cells[5].is_empty() {
            let _ = write!(s, " {}", cells[5]);
        }
        s
    };
    let _ = writeln!(out, "{}", line(header));
    for r in &rows {
        let _ = writeln!(out, "{}", line([&r[0], &r[1], &r[2], &r[3], &r[4], &r[5]]));
    }
    let _ = writeln!(out, "---");
    let _ = writeln!(
        out,
        "Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n"
    );
    let _ = writeln!(
        out,
        "(Dispersion parameter for unifed family taken to be 1)\n"
    );

    let null = format_deviance(fit.null_deviance);
    let resid = format_deviance(fit.residual_deviance);
    let w = null.len().max(resid.len());
    let _ = writeln!(
        out,
        "    Null deviance: {null:>w$}  on {} degrees of freedom",
        fit.null_df
    );
    let _ = writeln!(
        out,
        "Residual deviance: {resid:>w$}  on {} degrees of freedom\n",
        fit.residual_df
    );
    let _ = writeln!(out, "Number of IWLS iterations: {}", fit.iterations);
    out
}

pub fn render_gof(gof: &GoodnessOfFit, threshold: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Residual deviance {} on {} df, p-value {}",
        format_deviance(gof.statistic),
        gof.df,
        format_p(gof.p_value)
    );
    let _ = writeln!(out, "Smallest class weight: {}", gof.min_weight);
    if !gof.is_reliable(threshold) {
        let _ = writeln!(
            out,
            "Caution: the smallest class weight is below {threshold}; the chi-square reference is unreliable."
        );
    }
    out
}
