//! Locale-independent CSV text with a fixed float format.

use std::fmt::Write;

use cavity_array::ArrayParams;

pub const UNITS_LINE: &str = "# frequencies in units of J, times in units of 1/J";

/// 17 significant digits in scientific notation, identical on every platform.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comment line recording the parameters a file was produced with.
pub fn params_line(p: &ArrayParams) -> String {
    format!(
        "# N={} eta={} kappa={} omega_f={} delta={} J={}",
        p.n_cavities(),
        num(p.eta()),
        num(p.kappa()),
        num(p.omega_f()),
        num(p.delta()),
        num(p.coupling_j())
    )
}

#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(comments: &[String], header: &[&str]) -> Self {
        let mut text = String::new();
        text.push_str(UNITS_LINE);
        text.push('\n');
        for c in comments {
            text.push_str(c);
            text.push('\n');
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            let _ = write!(self.text, "{}", f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1000.0), "1.0000000000000000e3");
        assert_eq!(num(-0.25), "-2.5000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["# x".into()], &["a", "b"]);
        c.row(["1", "2"]);
        assert_eq!(c.finish(), format!("{UNITS_LINE}\n# x\na,b\n1,2\n"));
    }
}
