//! Text renderers shared by the commands.

use std::fmt::Write as _;

/// 17 significant digits, `.` decimal; round-trips every `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub struct MarkdownTable {
    out: String,
}

impl MarkdownTable {
    pub fn new(headers: &[&str]) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", headers.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(headers.len()));
        Self { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        let cells: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
        let _ = writeln!(self.out, "| {} |", cells.join(" | "));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(csv_line(&["a".into(), "b,c".into()]), "a,\"b,c\"\n");
        let mut t = MarkdownTable::new(&["x", "y"]);
        t.row(&["|a>".into(), "1".into()]);
        assert_eq!(t.finish(), "| x | y |\n|---|---|\n| \\|a> | 1 |\n");
    }
}
