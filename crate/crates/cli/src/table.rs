use std::fmt::Write;

use ensemble_vol_core::geometry::DofEntry;

/// One `k n nu tau` line per entry.
pub fn rows_text(table: &[DofEntry]) -> String {
    let mut out = String::new();
    for e in table {
        writeln!(out, "{} {} {} {}", e.k, e.n, e.nu, e.tau).unwrap();
    }
    out
}

/// Rows by `k`, columns by `n`, cells `nu (tau)`.
pub fn grid_text(table: &[DofEntry]) -> String {
    let k_max = table.iter().map(|e| e.k).max().unwrap_or(0);
    let cell = |k: u32, n: u32| {
        table
            .iter()
            .find(|e| e.k == k && e.n == n)
            .map(|e| format!("{} ({})", e.nu, e.tau))
            .unwrap_or_default()
    };
    let width = table
        .iter()
        .map(|e| cell(e.k, e.n).len())
        .chain((2..=k_max).map(|n| format!("n={n}").len()))
        .max()
        .unwrap_or(0);
    let kw = k_max.to_string().len().max(1);
    let mut out = String::new();
    write!(out, "{:>kw$}", "k").unwrap();
    for n in 2..=k_max {
        write!(out, "  {:>width$}", format!("n={n}")).unwrap();
    }
    out.push('\n');
    for k in 2..=k_max {
        write!(out, "{k:>kw$}").unwrap();
        for n in 2..=k_max {
            write!(out, "  {:>width$}", cell(k, n)).unwrap();
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out.push('\n');
    }
    out
}
