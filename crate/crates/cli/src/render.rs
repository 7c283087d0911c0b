//! Plain-text rendering for the query and freq subcommands.

use corq_engine::{FreqTable, KwicLine, GROUP_ALL};

/// Classic keyword-in-context layout: right-aligned left context, aligned
/// keyword column, metadata trailing each line.
pub fn render_kwic(lines: &[KwicLine], total_hits: usize, offset: usize) -> String {
    let mut out = format!(
        "total hits: {total_hits} (showing {} from offset {offset})\n",
        lines.len()
    );
    if lines.is_empty() {
        return out;
    }
    let left_strings: Vec<String> = lines.iter().map(|l| l.left.join(" ")).collect();
    let keyword_strings: Vec<String> = lines.iter().map(|l| l.keyword.join(" ")).collect();
    let position_width = lines.iter().map(|l| l.position.to_string().len()).max().unwrap_or(1);
    let left_width = left_strings.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let keyword_width = keyword_strings.iter().map(|s| s.chars().count()).max().unwrap_or(0);

    for ((line, left), keyword) in lines.iter().zip(&left_strings).zip(&keyword_strings) {
        let meta: Vec<String> = line.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "{:>position_width$}  {:>left_width$} [{:<keyword_width$}] {}",
            line.position,
            left,
            keyword,
            line.right.join(" "),
        ));
        if !meta.is_empty() {
            out.push_str(&format!("  ({})", meta.join(", ")));
        }
        out.push('\n');
    }
    out
}

/// Frequency table with a pmw column computed against each group's token
/// total (the whole corpus for the ungrouped `(all)` row).
pub fn render_freq(table: &FreqTable, corpus_tokens: usize, shown: usize) -> String {
    let rows: Vec<[String; 4]> = table
        .rows
        .iter()
        .take(shown)
        .map(|row| {
            let group_tokens = if row.group == GROUP_ALL {
                Some(corpus_tokens as u64)
            } else {
                table.group_token_totals.get(&row.group).copied()
            };
            let pmw = match group_tokens {
                Some(tokens) if tokens > 0 => {
                    format!("{:.1}", row.count as f64 / tokens as f64 * 1_000_000.0)
                }
                _ => "-".to_string(),
            };
            [row.group.clone(), row.counted.clone(), row.count.to_string(), pmw]
        })
        .collect();

    let headers = ["group", "counted", "count", "pmw"];
    let mut widths = headers.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }

    let mut out = format!("total hits: {}\n", table.total_hits);
    out.push_str(&format!(
        "{:<w0$}  {:<w1$}  {:>w2$}  {:>w3$}\n",
        headers[0],
        headers[1],
        headers[2],
        headers[3],
        w0 = widths[0],
        w1 = widths[1],
        w2 = widths[2],
        w3 = widths[3],
    ));
    for row in &rows {
        out.push_str(&format!(
            "{:<w0$}  {:<w1$}  {:>w2$}  {:>w3$}\n",
            row[0],
            row[1],
            row[2],
            row[3],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
        ));
    }
    if table.rows.len() > shown {
        out.push_str(&format!("... {} more rows\n", table.rows.len() - shown));
    }
    out
}
