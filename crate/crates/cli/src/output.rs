use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;

/// Fixed-precision scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV sink writing to a file or standard output, with an optional trailing
/// block of `# key,value` summary lines.
pub struct CsvOut {
    writer: csv::Writer<Box<dyn Write>>,
}

impl CsvOut {
    pub fn create(path: Option<&Path>, header: &[&str]) -> anyhow::Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(self, summary: &[(&str, String)]) -> anyhow::Result<()> {
        let mut inner = self.writer.into_inner().map_err(|e| e.into_error())?;
        for (key, value) in summary {
            writeln!(inner, "# {key},{value}")?;
        }
        inner.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.75), "7.5000000000000000e-1");
        assert_eq!(num(-1.0 / 3.0), "-3.3333333333333331e-1");
        assert_eq!(num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}
