use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::schemes1d::Semantics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn tag(self) -> &'static str {
        match self {
            Norm::L1 => "L1",
            Norm::L2 => "L2",
            Norm::Linf => "Linf",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" => Ok(Norm::L1),
            "L2" => Ok(Norm::L2),
            "Linf" => Ok(Norm::Linf),
            other => Err(Error::Config(format!("unknown norm '{other}'"))),
        }
    }
}

/// One grid of a study. `errors[norm][variable]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub h: f64,
    pub errors: Vec<Vec<f64>>,
    pub semantics: Semantics,
}

/// Pairwise observed orders; `None` where an error is zero, negative or not finite.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub pairs: Vec<Option<f64>>,
}

impl OrderFit {
    /// Order on the finest pair.
    pub fn summary(&self) -> Option<f64> {
        self.pairs.last().copied().flatten()
    }
}

/// `p = log(e₁/e₂) / log(h₁/h₂)` for each consecutive pair.
pub fn fit_order(h: &[f64], e: &[f64]) -> Result<OrderFit> {
    if h.len() != e.len() || h.len() < 2 {
        return Err(Error::Config(format!("order fit needs at least two grids, got {} h and {} errors", h.len(), e.len())));
    }
    let pairs = (1..h.len())
        .map(|i| {
            let ok = |x: f64| x > 0.0 && x.is_finite();
            (ok(e[i - 1]) && ok(e[i]) && ok(h[i - 1]) && ok(h[i]) && h[i] != h[i - 1])
                .then(|| (e[i - 1] / e[i]).ln() / (h[i - 1] / h[i]).ln())
        })
        .collect();
    Ok(OrderFit { pairs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub label: String,
    pub variables: Vec<String>,
    pub norms: Vec<Norm>,
    /// Variable used for the log-log data and the summary order.
    pub primary: usize,
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn new(label: impl Into<String>, variables: &[&str], norms: &[Norm], primary: usize) -> Self {
        Self {
            label: label.into(),
            variables: variables.iter().map(|s| s.to_string()).collect(),
            norms: norms.to_vec(),
            primary,
            rows: Vec::new(),
        }
    }

    /// Appends a row; every row of a report must use the same comparator semantics.
    pub fn push(&mut self, row: ReportRow) -> Result<()> {
        if let Some(first) = self.rows.first() {
            if first.semantics != row.semantics {
                return Err(Error::Config(format!(
                    "report '{}' mixes {} and {} norms",
                    self.label,
                    first.semantics.tag(),
                    row.semantics.tag()
                )));
            }
        }
        if row.errors.len() != self.norms.len() || row.errors.iter().any(|e| e.len() != self.variables.len()) {
            return Err(Error::Config("row shape does not match report columns".into()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn errors(&self, norm: Norm, var: usize) -> Vec<f64> {
        let k = self.norms.iter().position(|&m| m == norm).expect("norm present in report");
        self.rows.iter().map(|r| r.errors[k][var]).collect()
    }

    pub fn orders(&self, norm: Norm, var: usize) -> Result<OrderFit> {
        let h: Vec<f64> = self.rows.iter().map(|r| r.h).collect();
        fit_order(&h, &self.errors(norm, var))
    }

    /// Finest-pair order of the primary variable in the first norm.
    pub fn summary_order(&self) -> Option<f64> {
        self.orders(self.norms[0], self.primary).ok().and_then(|f| f.summary())
    }

    fn column_names(&self) -> Vec<String> {
        let single = self.variables.len() == 1;
        let mut cols = Vec::new();
        for norm in &self.norms {
            for var in &self.variables {
                cols.push(if single { format!("{}_error", norm.tag()) } else { format!("{}_{var}", norm.tag()) });
            }
        }
        cols
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut s = String::new();
        match format {
            ReportFormat::Csv => {
                let _ = writeln!(s, "n,h,{},norm-semantics", self.column_names().join(","));
                for r in &self.rows {
                    let errs: Vec<String> = r.errors.iter().flatten().map(|e| format!("{e:e}")).collect();
                    let _ = writeln!(s, "{},{},{},{}", r.n, r.h, errs.join(","), r.semantics.tag());
                }
            }
            ReportFormat::GnuplotDat => {
                let norm = self.norms[0];
                let _ = writeln!(s, "# {}", self.label);
                let _ = writeln!(s, "# h {}_{}", norm.tag(), self.variables[self.primary]);
                for (r, e) in self.rows.iter().zip(self.errors(norm, self.primary)) {
                    let _ = writeln!(s, "{} {e:e}", r.h);
                }
            }
            ReportFormat::Markdown => {
                let norm = self.norms[0];
                let var = &self.variables[self.primary];
                let orders = self.orders(norm, self.primary).map(|f| f.pairs).unwrap_or_default();
                let _ = writeln!(s, "| n | h | {} {var} | order | semantics |", norm.tag());
                let _ = writeln!(s, "|---|---|---|---|---|");
                for (i, (r, e)) in self.rows.iter().zip(self.errors(norm, self.primary)).enumerate() {
                    let p = match i.checked_sub(1).and_then(|k| orders.get(k)) {
                        Some(Some(p)) => format!("{p:.2}"),
                        Some(None) => "undefined".into(),
                        None => "-".into(),
                    };
                    let _ = writeln!(s, "| {} | {:.6} | {e:.4e} | {p} | {} |", r.n, r.h, r.semantics.tag());
                }
            }
        }
        s
    }

    /// Parses the CSV rendering back into a report.
    pub fn from_csv(label: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| Error::Config("empty csv".into()))?.split(',').collect();
        if header.len() < 4 || header[0] != "n" || header[1] != "h" || header[header.len() - 1] != "norm-semantics" {
            return Err(Error::Config(format!("unexpected csv header {header:?}")));
        }
        let mut norms: Vec<Norm> = Vec::new();
        let mut variables: Vec<String> = Vec::new();
        for col in &header[2..header.len() - 1] {
            let (norm, var) = col.split_once('_').ok_or_else(|| Error::Config(format!("bad column '{col}'")))?;
            let norm: Norm = norm.parse()?;
            let var = if var == "error" { "u".to_string() } else { var.to_string() };
            if !norms.contains(&norm) {
                norms.push(norm);
            }
            if !variables.contains(&var) {
                variables.push(var);
            }
        }
        let vars: Vec<&str> = variables.iter().map(String::as_str).collect();
        let mut report = Self::new(label, &vars, &norms, vars.len() - 1);
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != header.len() {
                return Err(Error::Config(format!("csv row has {} fields, expected {}", f.len(), header.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("bad number '{s}': {e}")));
            let flat: Vec<f64> = f[2..f.len() - 1].iter().map(|s| num(s)).collect::<Result<_>>()?;
            report.push(ReportRow {
                n: f[0].parse().map_err(|e| Error::Config(format!("bad n '{}': {e}", f[0])))?,
                h: num(f[1])?,
                errors: flat.chunks(vars.len()).map(<[f64]>::to_vec).collect(),
                semantics: f[f.len() - 1].parse()?,
            })?;
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    GnuplotDat,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "gnuplot-dat" | "dat" => Ok(ReportFormat::GnuplotDat),
            "markdown" | "md" | "markdown-table" => Ok(ReportFormat::Markdown),
            other => Err(Error::Config(format!("unknown report format '{other}'"))),
        }
    }
}

pub fn emit_report(report: &ConvergenceReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, report.render(format)).map_err(|source| Error::Write { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(p: f64) -> ConvergenceReport {
        let mut r = ConvergenceReport::new("sample", &["u"], &[Norm::L1, Norm::Linf], 0);
        for n in [16usize, 32, 64] {
            let h = 1.0 / n as f64;
            r.push(ReportRow { n, h, errors: vec![vec![h.powf(p)], vec![2.0 * h.powf(p)]], semantics: Semantics::PointValue })
                .unwrap();
        }
        r
    }

    #[test]
    fn exact_power_laws_give_their_order() {
        let h = [0.1, 0.05, 0.025];
        for p in [2.0, 3.0] {
            let e: Vec<f64> = h.iter().map(|x: &f64| x.powf(p)).collect();
            let fit = fit_order(&h, &e).unwrap();
            assert!(fit.pairs.iter().all(|o| (o.unwrap() - p).abs() < 1e-12));
        }
        let fit = fit_order(&h, &[1e-3, 0.0, 1e-5]).unwrap();
        assert_eq!(fit.pairs, vec![None, None]);
        assert!(fit_order(&[0.1], &[1.0]).is_err());
    }

    #[test]
    fn halving_h_quarters_a_second_order_error() {
        let r = sample(2.0);
        let e = r.errors(Norm::L1, 0);
        assert!((e[0] / e[1] - 4.0).abs() < 1e-12);
        assert!((r.summary_order().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_and_stable_rendering() {
        let r = sample(3.0);
        let csv = r.render(ReportFormat::Csv);
        assert!(csv.starts_with("n,h,L1_error,Linf_error,norm-semantics\n"));
        let back = ConvergenceReport::from_csv("sample", &csv).unwrap();
        assert_eq!(back.rows, r.rows);
        assert_eq!(back.render(ReportFormat::Csv), csv);
        assert_eq!(r.render(ReportFormat::Markdown), sample(3.0).render(ReportFormat::Markdown));
    }

    #[test]
    fn markdown_has_one_row_per_grid_and_dat_has_two_columns() {
        let r = sample(2.0);
        let md = r.render(ReportFormat::Markdown);
        assert_eq!(md.lines().count(), 2 + r.rows.len());
        let dat = r.render(ReportFormat::GnuplotDat);
        assert!(dat.lines().filter(|l| !l.starts_with('#')).all(|l| l.split_whitespace().count() == 2));
    }

    #[test]
    fn mixing_semantics_is_rejected() {
        let mut r = sample(2.0);
        let bad = ReportRow { n: 128, h: 1.0 / 128.0, errors: vec![vec![1e-5], vec![2e-5]], semantics: Semantics::CellAverage };
        assert!(matches!(r.push(bad), Err(Error::Config(_))));
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let r = sample(2.0);
        let err = emit_report(&r, ReportFormat::Csv, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Write { .. }));
    }
}
