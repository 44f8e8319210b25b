//! CSV rows with a fixed number format: shortest round-trip decimal, `inf`
//! and `-inf` for the infinities.

use std::fmt::Write as _;

use fdiv_core::Extended;

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn ext(x: Extended<f64>) -> String {
    match x {
        Extended::Finite(v) => num(v),
        Extended::PosInf => "inf".into(),
        Extended::NegInf => "-inf".into(),
    }
}

/// Error estimates print as a bare `0` when there is none.
pub fn err(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        num(x)
    }
}

#[derive(Default)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Table::default();
        t.row(header.iter().map(|s| s.to_string()));
        t
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let line: Vec<String> = cells.into_iter().collect();
        let _ = writeln!(self.out, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.out
    }
}
