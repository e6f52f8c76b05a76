//! Corpus statistics: per-kind counts and the per-paper count histograms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::records::{InducedLabel, Kind};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub paper_count: usize,
    pub figure_count: usize,
    pub table_count: usize,
    /// Figures per paper → fraction of papers with that many figures.
    pub figures_per_paper: BTreeMap<usize, f64>,
    pub tables_per_paper: BTreeMap<usize, f64>,
}

/// Groups records by paper. Papers that appear in the file with only one
/// kind contribute a zero count for the other kind.
pub fn corpus_stats(records: &[InducedLabel]) -> CorpusStats {
    let mut per_paper: BTreeMap<&str, [usize; 2]> = BTreeMap::new();
    for r in records {
        let counts = per_paper.entry(&r.paper_id).or_default();
        match r.kind {
            Kind::Figure => counts[0] += 1,
            Kind::Table => counts[1] += 1,
        }
    }
    let paper_count = per_paper.len();
    let histogram = |idx: usize| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for counts in per_paper.values() {
            *h.entry(counts[idx]).or_default() += 1;
        }
        h.into_iter()
            .map(|(k, n)| (k, n as f64 / paper_count as f64))
            .collect::<BTreeMap<_, _>>()
    };
    CorpusStats {
        paper_count,
        figure_count: per_paper.values().map(|c| c[0]).sum(),
        table_count: per_paper.values().map(|c| c[1]).sum(),
        figures_per_paper: histogram(0),
        tables_per_paper: histogram(1),
    }
}

impl CorpusStats {
    pub fn to_json(&self) -> String {
        let hist = |h: &BTreeMap<usize, f64>| {
            let body: Vec<String> = h.iter().map(|(k, v)| format!("\"{k}\":{v:.6}")).collect();
            format!("{{{}}}", body.join(","))
        };
        format!(
            "{{\"paper_count\":{},\"figure_count\":{},\"table_count\":{},\"figures_per_paper\":{},\"tables_per_paper\":{}}}\n",
            self.paper_count,
            self.figure_count,
            self.table_count,
            hist(&self.figures_per_paper),
            hist(&self.tables_per_paper)
        )
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "papers   {:>10}", self.paper_count);
        let _ = writeln!(s, "figures  {:>10}", self.figure_count);
        let _ = writeln!(s, "tables   {:>10}", self.table_count);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:>6}  {:>10}  {:>10}", "count", "figures", "tables");
        let keys: std::collections::BTreeSet<usize> = self
            .figures_per_paper
            .keys()
            .chain(self.tables_per_paper.keys())
            .copied()
            .collect();
        for k in keys {
            let f = self.figures_per_paper.get(&k).copied().unwrap_or(0.0);
            let t = self.tables_per_paper.get(&k).copied().unwrap_or(0.0);
            let _ = writeln!(s, "{k:>6}  {f:>10.4}  {t:>10.4}");
        }
        s
    }
}
