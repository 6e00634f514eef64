use super::GcScheme;

/// How assigned cells are marked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderStyle {
    /// `1` for every assigned partition.
    #[default]
    Plain,
    /// `1v` when the worker also sends that gradient on its own (a singleton
    /// row), `1x` when it only reaches the master inside a sum.
    Transmission,
}

/// Workers as rows, partitions as columns, blank cells for unassigned.
pub fn render_table(scheme: &GcScheme, style: RenderStyle) -> String {
    let k = scheme.k();
    let mut grid: Vec<Vec<String>> = Vec::with_capacity(scheme.n() + 1);
    let mut header = vec!["Workers".to_string()];
    header.extend((1..=k).map(|j| format!("D{j}")));
    grid.push(header);
    for (w, assigned) in scheme.assignment().iter().enumerate() {
        let mut line = vec![format!("W{}", w + 1)];
        let mut cells = vec![String::new(); k];
        let singles: Vec<usize> = scheme.rows()[w].iter().filter_map(|r| r.as_singleton()).collect();
        for &j in assigned {
            cells[j] = match style {
                RenderStyle::Plain => "1".into(),
                RenderStyle::Transmission if singles.contains(&j) => "1v".into(),
                RenderStyle::Transmission => "1x".into(),
            };
        }
        line.extend(cells);
        grid.push(line);
    }
    let widths: Vec<usize> = (0..=k).map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
    }
    out
}

/// Reads a rendered table back into a 0/1 matrix (workers × partitions).
/// Used by tests comparing against transcribed reference tables.
pub fn parse_rendered(text: &str) -> Vec<Vec<bool>> {
    let cols = text.lines().next().map_or(0, |h| h.split('|').count().saturating_sub(1));
    text.lines()
        .filter(|l| l.starts_with('W') && !l.starts_with("Workers"))
        .map(|l| {
            let mut cells: Vec<bool> = l.split('|').skip(1).map(|c| !c.trim().is_empty()).collect();
            cells.resize(cols, false);
            cells
        })
        .collect()
}
