use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

/// A single table with one header row, plus free-form trailer lines shown in text mode.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub trailer: Vec<String>,
}

impl Report {
    pub fn new(headers: &[&str]) -> Self {
        Report { headers: headers.iter().map(|h| h.to_string()).collect(), ..Report::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn metric(&mut self, name: &str, value: impl ToString) {
        self.rows.push(vec![name.to_string(), value.to_string()]);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                for line in std::iter::once(&self.headers).chain(&self.rows) {
                    out.push_str(&line.join("\t"));
                    out.push('\n');
                }
            }
            Format::Text => {
                let widths: Vec<usize> = (0..self.headers.len())
                    .map(|i| {
                        std::iter::once(&self.headers)
                            .chain(&self.rows)
                            .map(|r| r.get(i).map_or(0, |c| c.chars().count()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for line in std::iter::once(&self.headers).chain(&self.rows) {
                    let cells: Vec<String> =
                        line.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                    out.push_str(cells.join("  ").trim_end());
                    out.push('\n');
                }
                for t in &self.trailer {
                    out.push_str(t);
                    out.push('\n');
                }
            }
        }
        out
    }
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_formats() {
        let mut r = Report::new(&["dim", "count"]);
        r.row(vec!["0".into(), "12".into()]);
        r.trailer.push("done".into());
        assert_eq!(r.render(Format::Tsv), "dim\tcount\n0\t12\n");
        assert_eq!(r.render(Format::Text), "dim  count\n0    12\ndone\n");
    }
}
