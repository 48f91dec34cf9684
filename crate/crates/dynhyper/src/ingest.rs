//! Data ingestion: temporal hyperedge CSV parsing, pairwise-contact clique
//! expansion, oversized-edge decomposition, and the canonical series format.
//!
//! Input records are `t,label1,label2,...` lines. Labels map to dense node
//! ids (first-seen or sorted order); snapshots cover t = 0..max(t) with
//! empty ones where no records fall. The canonical on-disk form is JSON
//! lines `{"t": ..., "edge": [...]}` sorted by (t, edge rank), with sidecar
//! JSON files for the label map and the universe metadata.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::hypercore::{Hyperedge, HyperedgeUniverse, HypergraphSeries, HypergraphSnapshot};

/// Label-to-id assignment order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelOrder {
    /// Ids in order of first appearance in the file.
    #[default]
    FirstSeen,
    /// Ids in sorted label order.
    Sorted,
}

/// Parser configuration.
#[derive(Debug, Clone)]
pub struct IngestConfig {
    /// Maximum hyperedge size K of the target universe.
    pub k_max: u32,
    /// Skip the first line.
    pub has_header: bool,
    /// Map raw timestamps to bins of this width (integer division).
    pub rebin: Option<u64>,
    /// Decompose records larger than K into all K-subsets instead of
    /// dropping them.
    pub decompose_oversize: bool,
    pub label_order: LabelOrder,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            k_max: 3,
            has_header: false,
            rebin: None,
            decompose_oversize: false,
            label_order: LabelOrder::FirstSeen,
        }
    }
}

/// Bijection between raw labels and node ids.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LabelMap {
    labels: Vec<String>,
}

impl LabelMap {
    pub fn node_count(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn label(&self, id: u32) -> &str {
        &self.labels[id as usize]
    }

    pub fn id(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Drop counters and bookkeeping from a parse.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub records: u64,
    pub dropped_singletons: u64,
    pub dropped_oversize: u64,
    pub decomposed_oversize: u64,
    pub duplicate_presences: u64,
    pub snapshots: u64,
}

/// One raw temporal record after label mapping.
#[derive(Debug, Clone)]
pub struct TemporalEdgeRecord {
    pub t: u64,
    pub nodes: Vec<u32>,
}

/// Parse a temporal hyperedge CSV from a reader.
pub fn parse_temporal_csv<R: BufRead>(
    reader: R,
    config: &IngestConfig,
) -> Result<(HypergraphSeries, LabelMap, IngestReport)> {
    let mut raw: Vec<(u64, Vec<String>)> = Vec::new();
    let mut report = IngestReport::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let human_line = lineno + 1;
        if config.has_header && lineno == 0 {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let t_raw = parts.next().ok_or_else(|| Error::ParseError {
            line: human_line,
            msg: "missing timestamp".into(),
        })?;
        let t: u64 = t_raw.trim().parse().map_err(|_| Error::ParseError {
            line: human_line,
            msg: format!("bad timestamp {t_raw:?}"),
        })?;
        let labels: Vec<String> = parts.map(|s| s.trim().to_string()).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::ParseError {
                line: human_line,
                msg: "empty node label".into(),
            });
        }
        let t = match config.rebin {
            Some(w) if w > 1 => t / w,
            _ => t,
        };
        raw.push((t, labels));
    }
    if raw.is_empty() {
        return Err(Error::EmptyFile);
    }
    report.records = raw.len() as u64;

    // label map
    let mut labels: Vec<String> = Vec::new();
    match config.label_order {
        LabelOrder::FirstSeen => {
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for (_, ls) in &raw {
                for l in ls {
                    if seen.insert(l) {
                        labels.push(l.clone());
                    }
                }
            }
        }
        LabelOrder::Sorted => {
            let set: BTreeSet<String> = raw.iter().flat_map(|(_, ls)| ls.iter().cloned()).collect();
            labels = set.into_iter().collect();
        }
    }
    let index: BTreeMap<&str, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let p = labels.len() as u32;
    if p < 2 {
        return Err(Error::InvalidConfig(
            "need at least two distinct node labels".into(),
        ));
    }
    let universe = HyperedgeUniverse::new(p, config.k_max.min(p))?;

    // snapshots
    let t_max = raw.iter().map(|(t, _)| *t).max().unwrap();
    let mut present: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); t_max as usize + 1];
    for (t, ls) in &raw {
        let mut ids: Vec<u32> = ls.iter().map(|l| index[l.as_str()]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() < 2 {
            report.dropped_singletons += 1;
            continue;
        }
        if ids.len() > universe.k_max() as usize {
            if config.decompose_oversize {
                let edge_like = ids;
                for sub in k_subsets(&edge_like, universe.k_max() as usize) {
                    let edge = universe.canonicalize(&sub)?;
                    if !present[*t as usize].insert(universe.rank(&edge)) {
                        report.duplicate_presences += 1;
                    }
                }
                report.decomposed_oversize += 1;
            } else {
                report.dropped_oversize += 1;
            }
            continue;
        }
        let edge = universe.canonicalize(&ids)?;
        if !present[*t as usize].insert(universe.rank(&edge)) {
            report.duplicate_presences += 1;
        }
    }
    report.snapshots = present.len() as u64;
    let snapshots: Vec<HypergraphSnapshot> = present
        .into_iter()
        .map(|ranks| HypergraphSnapshot::from_ranks(&universe, ranks.into_iter().collect()))
        .collect();
    let series = HypergraphSeries::new(universe, snapshots)?;
    Ok((series, LabelMap { labels }, report))
}

/// Parse from a file path.
pub fn parse_temporal_csv_path(
    path: &Path,
    config: &IngestConfig,
) -> Result<(HypergraphSeries, LabelMap, IngestReport)> {
    let file = std::fs::File::open(path)?;
    parse_temporal_csv(std::io::BufReader::new(file), config)
}

/// All size-k subsets of a sorted id list.
fn k_subsets(ids: &[u32], k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    for (i, slot) in pick.iter_mut().enumerate() {
        *slot = i;
    }
    loop {
        out.push(pick.iter().map(|&i| ids[i]).collect());
        // next combination of indices
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < ids.len() - (k - i) {
                pick[i] += 1;
                for j in i + 1..k {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Decompose an oversized edge into all subsets of size `target_k`.
pub fn decompose_large(edge: &Hyperedge, target_k: usize) -> Result<Vec<Vec<u32>>> {
    if target_k >= edge.size() {
        return Err(Error::TargetTooLarge {
            target: target_k,
            size: edge.size(),
        });
    }
    Ok(k_subsets(edge.nodes(), target_k))
}

/// Expansion settings for pairwise-contact snapshots.
#[derive(Debug, Clone)]
pub struct CliqueConfig {
    /// Largest hyperedge size to emit.
    pub k_max: u32,
    /// Keep pairs that belong to no larger output hyperedge.
    pub keep_isolated_pairs: bool,
    /// Abort if any node's degree within the snapshot exceeds this.
    pub degree_guard: u32,
}

impl Default for CliqueConfig {
    fn default() -> Self {
        CliqueConfig {
            k_max: 3,
            keep_isolated_pairs: true,
            degree_guard: 200,
        }
    }
}

/// Replace simultaneous pairwise contacts with hyperedges: every maximal
/// clique of size 3..=k_max becomes one hyperedge, larger maximal cliques
/// contribute all their k_max-subsets, and pairs covered by some output
/// hyperedge are removed.
pub fn clique_expand(
    snapshot: &HypergraphSnapshot,
    target: &HyperedgeUniverse,
    config: &CliqueConfig,
) -> Result<HypergraphSnapshot> {
    let source = snapshot.universe();
    // adjacency from the pair edges
    let mut adjacency: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for edge in snapshot.edges() {
        if edge.size() != 2 {
            return Err(Error::NonPairInput(edge.size()));
        }
        let (a, b) = (edge.nodes()[0], edge.nodes()[1]);
        adjacency.entry(a).or_default().insert(b);
        adjacency.entry(b).or_default().insert(a);
        pairs.push((a, b));
    }
    for (node, neighbors) in &adjacency {
        if neighbors.len() > config.degree_guard as usize {
            return Err(Error::InvalidConfig(format!(
                "node {node} has degree {} above the expansion guard {}",
                neighbors.len(),
                config.degree_guard
            )));
        }
    }

    let cliques = maximal_cliques(&adjacency);
    let mut out_ranks: BTreeSet<u64> = BTreeSet::new();
    let mut covered: BTreeSet<(u32, u32)> = BTreeSet::new();
    let k_cap = (config.k_max.min(target.k_max())) as usize;
    for clique in &cliques {
        if clique.len() < 3 {
            continue;
        }
        let members: Vec<Vec<u32>> = if clique.len() <= k_cap {
            vec![clique.clone()]
        } else {
            k_subsets(clique, k_cap)
        };
        for nodes in members {
            let edge = target.canonicalize(&nodes)?;
            for (i, &a) in edge.nodes().iter().enumerate() {
                for &b in &edge.nodes()[i + 1..] {
                    covered.insert((a, b));
                }
            }
            out_ranks.insert(target.rank(&edge));
        }
    }
    if config.keep_isolated_pairs {
        for &(a, b) in &pairs {
            if !covered.contains(&(a, b)) {
                let edge = target.canonicalize(&[a, b])?;
                out_ranks.insert(target.rank(&edge));
            }
        }
    }
    let _ = source;
    Ok(HypergraphSnapshot::from_ranks(
        target,
        out_ranks.into_iter().collect(),
    ))
}

/// Expand every snapshot of a pairwise series.
pub fn clique_expand_series(
    series: &HypergraphSeries,
    config: &CliqueConfig,
) -> Result<(HypergraphSeries, Vec<IngestReport>)> {
    let p = series.universe().node_count();
    let target = HyperedgeUniverse::new(p, config.k_max.min(p))?;
    let results: Vec<Result<HypergraphSnapshot>> = exec::map_indexed(series.len(), |t| {
        clique_expand(series.snapshot(t), &target, config)
    });
    let mut snapshots = Vec::with_capacity(results.len());
    for r in results {
        snapshots.push(r?);
    }
    let out = HypergraphSeries::new(target, snapshots)?;
    Ok((out, Vec::new()))
}

/// Bron-Kerbosch with pivoting over a sparse adjacency map.
fn maximal_cliques(adjacency: &BTreeMap<u32, BTreeSet<u32>>) -> Vec<Vec<u32>> {
    fn expand(
        adjacency: &BTreeMap<u32, BTreeSet<u32>>,
        r: &mut Vec<u32>,
        mut p: BTreeSet<u32>,
        mut x: BTreeSet<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if p.is_empty() && x.is_empty() {
            if r.len() >= 2 {
                out.push(r.clone());
            }
            return;
        }
        // pivot: vertex of P union X with most neighbors in P
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&&v| {
                adjacency
                    .get(&v)
                    .map_or(0, |ns| ns.intersection(&p).count())
            })
            .copied();
        let pivot_neighbors = pivot
            .and_then(|v| adjacency.get(&v).cloned())
            .unwrap_or_default();
        let candidates: Vec<u32> = p.difference(&pivot_neighbors).copied().collect();
        for v in candidates {
            let neighbors = adjacency.get(&v).cloned().unwrap_or_default();
            r.push(v);
            expand(
                adjacency,
                r,
                p.intersection(&neighbors).copied().collect(),
                x.intersection(&neighbors).copied().collect(),
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let vertices: BTreeSet<u32> = adjacency.keys().copied().collect();
    let mut out = Vec::new();
    expand(
        adjacency,
        &mut Vec::new(),
        vertices,
        BTreeSet::new(),
        &mut out,
    );
    out.sort();
    out
}

/// Universe metadata stored next to a canonical series file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesMeta {
    pub p: u32,
    pub k_max: u32,
    pub snapshots: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRecord {
    t: u64,
    edge: Vec<u32>,
}

/// Write a series in the canonical JSON-lines form (records sorted by
/// (t, edge rank)).
pub fn write_series_jsonl<W: Write>(series: &HypergraphSeries, mut writer: W) -> Result<()> {
    let universe = series.universe();
    for t in 0..series.len() {
        for &rank in series.snapshot(t).present_ranks() {
            let record = SeriesRecord {
                t: t as u64,
                edge: universe.unrank(rank).nodes().to_vec(),
            };
            serde_json::to_writer(&mut writer, &record)?;
            writer.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn series_meta(series: &HypergraphSeries) -> SeriesMeta {
    SeriesMeta {
        p: series.universe().node_count(),
        k_max: series.universe().k_max(),
        snapshots: series.len() as u64,
    }
}

/// Read a canonical JSON-lines series given its metadata.
pub fn read_series_jsonl<R: BufRead>(reader: R, meta: &SeriesMeta) -> Result<HypergraphSeries> {
    let universe = HyperedgeUniverse::new(meta.p, meta.k_max)?;
    let mut present: Vec<Vec<u64>> = vec![Vec::new(); meta.snapshots as usize];
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SeriesRecord =
            serde_json::from_str(&line).map_err(|e| Error::ParseError {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        if record.t >= meta.snapshots {
            return Err(Error::ParseError {
                line: lineno + 1,
                msg: format!("t={} beyond {} snapshots", record.t, meta.snapshots),
            });
        }
        let edge = universe.canonicalize(&record.edge)?;
        present[record.t as usize].push(universe.rank(&edge));
    }
    let snapshots = present
        .into_iter()
        .map(|ranks| HypergraphSnapshot::from_ranks(&universe, ranks))
        .collect();
    HypergraphSeries::new(universe, snapshots)
}

/// Write the full canonical set: series.jsonl, series.meta.json, and
/// optionally labels.json into a directory.
pub fn write_series_dir(
    dir: &Path,
    series: &HypergraphSeries,
    labels: Option<&LabelMap>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(dir.join("series.jsonl"))?);
    write_series_jsonl(series, &mut file)?;
    file.flush()?;
    let meta = series_meta(series);
    std::fs::write(
        dir.join("series.meta.json"),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;
    if let Some(labels) = labels {
        std::fs::write(
            dir.join("labels.json"),
            serde_json::to_string_pretty(labels)? + "\n",
        )?;
    }
    Ok(())
}

/// Read a canonical series directory.
pub fn read_series_dir(dir: &Path) -> Result<(HypergraphSeries, Option<LabelMap>)> {
    let meta: SeriesMeta =
        serde_json::from_str(&std::fs::read_to_string(dir.join("series.meta.json"))?)?;
    let file = std::fs::File::open(dir.join("series.jsonl"))?;
    let series = read_series_jsonl(std::io::BufReader::new(file), &meta)?;
    let labels_path = dir.join("labels.json");
    let labels = if labels_path.exists() {
        Some(serde_json::from_str(&std::fs::read_to_string(labels_path)?)?)
    } else {
        None
    };
    Ok((series, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn cfg(k: u32) -> IngestConfig {
        IngestConfig {
            k_max: k,
            ..Default::default()
        }
    }

    #[test]
    fn parse_basic_records() {
        let input = "0,a,b\n1,a,b,c\n";
        let (series, labels, report) =
            parse_temporal_csv(Cursor::new(input), &cfg(3)).unwrap();
        assert_eq!(labels.node_count(), 3);
        assert_eq!(series.len(), 2);
        assert_eq!(series.snapshot(0).len(), 1);
        assert_eq!(series.snapshot(1).len(), 1);
        let e = series.universe().canonicalize(&[0, 1]).unwrap();
        assert!(series.snapshot(0).contains(&e));
        assert_eq!(report.records, 2);
    }

    #[test]
    fn duplicates_collapse() {
        let input = "0,a,b\n0,b,a\n";
        let (series, _, report) = parse_temporal_csv(Cursor::new(input), &cfg(3)).unwrap();
        assert_eq!(series.snapshot(0).len(), 1);
        assert_eq!(report.duplicate_presences, 1);
    }

    #[test]
    fn singletons_dropped_and_counted() {
        let input = "0,a\n0,a,b\n1,c,c,c\n";
        let (series, _, report) = parse_temporal_csv(Cursor::new(input), &cfg(3)).unwrap();
        // "c,c,c" dedupes to a singleton: dropped
        assert_eq!(report.dropped_singletons, 2);
        assert_eq!(series.snapshot(1).len(), 0);
    }

    #[test]
    fn oversize_decomposition_counts() {
        // a 9-node record with K = 3 decomposes into C(9,3) = 84 triples
        let nodes: Vec<String> = (0..9).map(|i| format!("n{i}")).collect();
        let input = format!("0,{}\n", nodes.join(","));
        let mut config = cfg(3);
        config.decompose_oversize = true;
        let (series, _, report) = parse_temporal_csv(Cursor::new(input), &config).unwrap();
        assert_eq!(series.snapshot(0).len(), 84);
        assert_eq!(report.decomposed_oversize, 1);
    }

    #[test]
    fn oversize_dropped_without_flag() {
        let input = "0,a,b,c,d\n0,a,b\n";
        let (series, _, report) = parse_temporal_csv(Cursor::new(input), &cfg(3)).unwrap();
        assert_eq!(report.dropped_oversize, 1);
        assert_eq!(series.snapshot(0).len(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_temporal_csv(Cursor::new(""), &cfg(3)),
            Err(Error::EmptyFile)
        ));
        let bad = parse_temporal_csv(Cursor::new("zero,a,b\n"), &cfg(3));
        assert!(matches!(bad, Err(Error::ParseError { line: 1, .. })));
    }

    #[test]
    fn rebin_maps_timestamps() {
        let input = "0,a,b\n19,a,c\n20,b,c\n";
        let mut config = cfg(3);
        config.rebin = Some(20);
        let (series, _, _) = parse_temporal_csv(Cursor::new(input), &config).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.snapshot(0).len(), 2);
        assert_eq!(series.snapshot(1).len(), 1);
    }

    #[test]
    fn decompose_large_counts() {
        let u = HyperedgeUniverse::new(10, 5).unwrap();
        let e = u.canonicalize(&[1, 2, 3, 4]).unwrap();
        assert_eq!(decompose_large(&e, 3).unwrap().len(), 4);
        let e5 = u.canonicalize(&[0, 2, 4, 6, 8]).unwrap();
        assert_eq!(decompose_large(&e5, 3).unwrap().len(), 10);
        let e3 = u.canonicalize(&[1, 2, 3]).unwrap();
        assert!(matches!(
            decompose_large(&e3, 3),
            Err(Error::TargetTooLarge { .. })
        ));
    }

    #[test]
    fn triangle_becomes_hyperedge() {
        let pairs = HyperedgeUniverse::new(4, 2).unwrap();
        let snap = HypergraphSnapshot::from_edges(
            &pairs,
            &[
                pairs.canonicalize(&[0, 1]).unwrap(),
                pairs.canonicalize(&[1, 2]).unwrap(),
                pairs.canonicalize(&[0, 2]).unwrap(),
            ],
        );
        let target = HyperedgeUniverse::new(4, 3).unwrap();
        let out = clique_expand(&snap, &target, &CliqueConfig::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out.contains(&target.canonicalize(&[0, 1, 2]).unwrap()));
    }

    #[test]
    fn lone_pair_retained_or_dropped() {
        let pairs = HyperedgeUniverse::new(3, 2).unwrap();
        let snap =
            HypergraphSnapshot::from_edges(&pairs, &[pairs.canonicalize(&[0, 1]).unwrap()]);
        let target = HyperedgeUniverse::new(3, 3).unwrap();
        let kept = clique_expand(&snap, &target, &CliqueConfig::default()).unwrap();
        assert_eq!(kept.len(), 1);
        let config = CliqueConfig {
            keep_isolated_pairs: false,
            ..Default::default()
        };
        let dropped = clique_expand(&snap, &target, &config).unwrap();
        assert_eq!(dropped.len(), 0);
    }

    #[test]
    fn four_clique_capped_at_triangles() {
        let pairs = HyperedgeUniverse::new(4, 2).unwrap();
        let edges: Vec<Hyperedge> = (0..4u32)
            .flat_map(|a| ((a + 1)..4).map(move |b| (a, b)))
            .map(|(a, b)| pairs.canonicalize(&[a, b]).unwrap())
            .collect();
        let snap = HypergraphSnapshot::from_edges(&pairs, &edges);
        let target = HyperedgeUniverse::new(4, 3).unwrap();
        let out = clique_expand(&snap, &target, &CliqueConfig::default()).unwrap();
        // the four triangles, no pairs
        assert_eq!(out.len(), 4);
        for e in out.edges() {
            assert_eq!(e.size(), 3);
        }
    }

    #[test]
    fn clique_expansion_rejects_triples() {
        let u = HyperedgeUniverse::new(4, 3).unwrap();
        let snap =
            HypergraphSnapshot::from_edges(&u, &[u.canonicalize(&[0, 1, 2]).unwrap()]);
        assert!(matches!(
            clique_expand(&snap, &u, &CliqueConfig::default()),
            Err(Error::NonPairInput(3))
        ));
    }

    #[test]
    fn clique_expansion_input_order_invariant() {
        // same pair set in any insertion order gives the same output
        let pairs = HyperedgeUniverse::new(5, 2).unwrap();
        let list = [(0u32, 1u32), (1, 2), (0, 2), (2, 3), (3, 4)];
        let forward: Vec<Hyperedge> = list
            .iter()
            .map(|&(a, b)| pairs.canonicalize(&[a, b]).unwrap())
            .collect();
        let backward: Vec<Hyperedge> = list
            .iter()
            .rev()
            .map(|&(a, b)| pairs.canonicalize(&[a, b]).unwrap())
            .collect();
        let target = HyperedgeUniverse::new(5, 3).unwrap();
        let a = clique_expand(
            &HypergraphSnapshot::from_edges(&pairs, &forward),
            &target,
            &CliqueConfig::default(),
        )
        .unwrap();
        let b = clique_expand(
            &HypergraphSnapshot::from_edges(&pairs, &backward),
            &target,
            &CliqueConfig::default(),
        )
        .unwrap();
        assert_eq!(a.present_ranks(), b.present_ranks());
    }

    #[test]
    fn jsonl_round_trip() {
        let input = "0,a,b\n1,a,b,c\n3,b,c\n";
        let (series, labels, _) = parse_temporal_csv(Cursor::new(input), &cfg(3)).unwrap();
        let mut buf = Vec::new();
        write_series_jsonl(&series, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "{\"t\":0,\"edge\":[0,1]}\n{\"t\":1,\"edge\":[0,1,2]}\n{\"t\":3,\"edge\":[1,2]}\n"
        );
        let meta = series_meta(&series);
        let back = read_series_jsonl(Cursor::new(&buf), &meta).unwrap();
        for t in 0..series.len() {
            assert_eq!(
                back.snapshot(t).present_ranks(),
                series.snapshot(t).present_ranks()
            );
        }
        let _ = labels;
    }
}
