use std::fmt::Write;

use crate::search::{CaseReport, SearchReport};

fn grouped(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn table(out: &mut String, title: &str, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{}", line(&mut header.iter().copied()));
    let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 3 * (widths.len() - 1)));
    for row in rows {
        let _ = writeln!(out, "{}", line(&mut row.iter().map(String::as_str)));
    }
    out.push('\n');
}

/// Plain-text tables for a search: per-case enumeration and PSD counts for
/// each side, then PAF-dedup and matching for the cases that survive.
pub fn render_tables(report: &SearchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} via {}\n", report.params, report.strategy);
    let row = |c: &CaseReport, total: u64, passed: u64| vec![c.case.to_string(), grouped(total), grouped(passed)];

    let a: Vec<_> = report.cases.iter().map(|c| row(c, c.a_enumerated, c.a_psd_passed)).collect();
    table(&mut out, "A-sequences", &["Case", "charmed bracelets", "passing PSD"], &a);
    let b: Vec<_> = report.cases.iter().map(|c| row(c, c.b_enumerated, c.b_psd_passed)).collect();
    table(&mut out, "B-sequences", &["Case", "bracelets", "passing PSD"], &b);

    let matched: Vec<_> = report
        .cases
        .iter()
        .filter(|c| c.a_psd_passed > 0 && c.b_psd_passed > 0)
        .map(|c| {
            vec![
                c.case.to_string(),
                format!("{} -> {}", grouped(c.a_psd_passed), grouped(c.a_deduped)),
                format!("{} -> {}", grouped(c.b_psd_passed), grouped(c.b_deduped)),
                grouped(c.matched_pairs),
            ]
        })
        .collect();
    if !matched.is_empty() {
        table(
            &mut out,
            "Matching (x -> y: after removing duplicate PAF)",
            &["Case", "A-sequences", "B-sequences", "# of pairs"],
            &matched,
        );
    }

    let lifted: u64 = report.cases.iter().map(|c| c.lifted_pairs).sum();
    let found: u64 = report.cases.iter().map(|c| c.lifted_witnesses).sum();
    let _ = writeln!(out, "lifted {lifted} sequence pairs, {found} verified block pairs");
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "elapsed {:.2}s", report.elapsed_secs);
    out
}
