//! Experimental orders of convergence.

use serde::{Deserialize, Serialize};

use super::errors::ErrorReport;

/// `log(e_prev / e) / log(h_prev / h)`
pub fn eoc(e_prev: f64, e: f64, h_prev: f64, h: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

/// Which H1 quantity fills the `h1` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H1Column {
    /// `sqrt(l2^2 + |grad e|^2)`
    Full,
    /// `|| kappa^1/2 grad e ||`
    Semi,
}

/// One mesh of a convergence study. Rows of failed solves carry NaN errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub dofs: usize,
    pub l2: f64,
    pub eoc_l2: Option<f64>,
    pub h1: f64,
    pub eoc_h1: Option<f64>,
    pub energy: f64,
    pub eoc_energy: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EocTable {
    pub rows: Vec<ConvergenceRow>,
    /// `(n, message)` for every failed mesh.
    pub failures: Vec<(usize, String)>,
}

impl EocTable {
    /// Build from per-mesh results in refinement order.
    pub fn from_results(results: Vec<(usize, Result<ErrorReport, String>)>, h1: H1Column) -> Self {
        let mut table = EocTable::default();
        for (n, r) in results {
            let row = match r {
                Ok(rep) => ConvergenceRow {
                    n,
                    h: rep.h,
                    dofs: rep.dofs,
                    l2: rep.l2,
                    eoc_l2: None,
                    h1: match h1 {
                        H1Column::Full => rep.h1_full,
                        H1Column::Semi => rep.h1_semi,
                    },
                    eoc_h1: None,
                    energy: rep.energy,
                    eoc_energy: None,
                },
                Err(msg) => {
                    table.failures.push((n, msg));
                    ConvergenceRow {
                        n,
                        h: f64::NAN,
                        dofs: 0,
                        l2: f64::NAN,
                        eoc_l2: None,
                        h1: f64::NAN,
                        eoc_h1: None,
                        energy: f64::NAN,
                        eoc_energy: None,
                    }
                }
            };
            table.push(row);
        }
        table
    }

    /// Append a row, filling its EOC columns from the previous row.
    pub fn push(&mut self, mut row: ConvergenceRow) {
        if let Some(prev) = self.rows.last() {
            let rate = |a: f64, b: f64| {
                let r = eoc(a, b, prev.h, row.h);
                r.is_finite().then_some(r)
            };
            row.eoc_l2 = rate(prev.l2, row.l2);
            row.eoc_h1 = rate(prev.h1, row.h1);
            row.eoc_energy = rate(prev.energy, row.energy);
        }
        self.rows.push(row);
    }

    pub fn eoc_l2(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.eoc_l2).collect()
    }

    pub fn eoc_h1(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.eoc_h1).collect()
    }

    /// Mean of the last `k` rates of a column; `None` if any is missing.
    pub fn mean_last(rates: &[Option<f64>], k: usize) -> Option<f64> {
        if rates.len() < k || k == 0 {
            return None;
        }
        let tail: Option<Vec<f64>> = rates[rates.len() - k..].iter().copied().collect();
        tail.map(|t| t.iter().sum::<f64>() / k as f64)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> csv::Result<Self> {
        let mut table = EocTable::default();
        for row in csv::Reader::from_reader(r).deserialize() {
            table.rows.push(row?);
        }
        Ok(table)
    }
}
