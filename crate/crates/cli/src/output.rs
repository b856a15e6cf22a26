//! Small tabular renderer for the per-file commands (`ingest`, `score`).

use hazelkit::evaluation::ReportFormat;

pub fn render_table(header: &[&str], rows: &[Vec<String>], format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => {
            let mut s = format!("| {} |\n", header.join(" | "));
            let align: Vec<&str> = (0..header.len()).map(|i| if i == 0 { "---" } else { "---:" }).collect();
            s.push_str(&format!("|{}|\n", align.join("|")));
            for row in rows {
                s.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for row in rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        ReportFormat::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for row in rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut s = line(header.to_vec());
            s.push('\n');
            for row in rows {
                s.push_str(&line(row.iter().map(String::as_str).collect()));
                s.push('\n');
            }
            s
        }
    }
}
