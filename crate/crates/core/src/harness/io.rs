use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::sweep::SweepRecord;
use super::validation::{CorrelationMatrix, MetricGetter};
use crate::error::Result;

pub fn write_records<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Replicate aggregate of one metric for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub config: String,
    pub d_frac: Option<f64>,
    pub metric: String,
    /// Replicates where the metric is present.
    pub count: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation.
    pub std: Option<f64>,
    /// Half-width `1.96 s / sqrt(count)`.
    pub ci95: Option<f64>,
}

const SUMMARY_METRICS: [(&str, MetricGetter); 14] = [
    ("efficiency_unweighted", |r| r.efficiency_unweighted),
    ("efficiency_weighted", |r| r.efficiency_weighted),
    ("lambda2_unweighted", |r| r.lambda2_unweighted),
    ("lambda2_weighted", |r| r.lambda2_weighted),
    ("avg_edp", |r| r.avg_edp),
    ("throughput_bps", |r| r.throughput_bps),
    ("delay_s", |r| r.delay_s),
    ("jitter_s", |r| r.jitter_s),
    ("pdr", |r| r.pdr),
    ("loss_ratio", |r| r.loss_ratio),
    ("cv_load", |r| r.cv_load),
    ("jain_index", |r| r.jain_index),
    ("n_edges", |r| r.n_edges.map(|v| v as f64)),
    ("dropped_unreachable", |r| r.dropped_unreachable.map(|v| v as f64)),
];

/// Mean and 95% normal-approximation interval per (configuration, metric),
/// configurations in order of first appearance.
pub fn summarize(records: &[SweepRecord]) -> Vec<SummaryRow> {
    let mut configs: Vec<(&str, Option<f64>)> = Vec::new();
    for r in records {
        if !configs.iter().any(|(c, _)| *c == r.config) {
            configs.push((&r.config, r.d_frac));
        }
    }
    let mut out = Vec::new();
    for (config, d_frac) in configs {
        for (metric, get) in SUMMARY_METRICS {
            let xs: Vec<f64> = records
                .iter()
                .filter(|r| r.config == config)
                .filter_map(get)
                .collect();
            let count = xs.len();
            let mean = (count > 0).then(|| xs.iter().sum::<f64>() / count as f64);
            let std = mean.filter(|_| count > 1).map(|m| {
                (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
            });
            out.push(SummaryRow {
                config: config.to_string(),
                d_frac,
                metric: metric.to_string(),
                count,
                mean,
                std,
                ci95: std.map(|s| 1.96 * s / (count as f64).sqrt()),
            });
        }
    }
    out
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Square matrix with a leading `metric` column.
pub fn write_correlation<W: Write>(out: W, m: &CorrelationMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("metric").chain(m.names.iter().map(String::as_str)))?;
    for (name, row) in m.names.iter().zip(&m.values) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        w.write_record(std::iter::once(name.as_str()).chain(cells.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(config: &str, pdr: Option<f64>) -> SweepRecord {
        let mut r: SweepRecord = read_records(
            "config,d_frac,replicate,seed,topology_seed,n_nodes,n_edges,efficiency_unweighted,efficiency_weighted,lambda2_unweighted,lambda2_weighted,avg_edp,throughput_bps,delay_s,jitter_s,pdr,loss_ratio,cv_load,jain_index,sent,delivered,dropped_queue,dropped_unreachable,in_flight,error\nx,,0,1,1,,,,,,,,,,,,,,,,,,,,\n"
                .as_bytes(),
        )
        .unwrap()
        .remove(0);
        r.config = config.into();
        r.pdr = pdr;
        r
    }

    #[test]
    fn csv_round_trip_keeps_absent_cells_empty() {
        let mut a = row("fractal:d=2", Some(0.25));
        a.error = Some("boom, with comma".into());
        let rows = vec![a, row("grid", None)];
        let mut buf = Vec::new();
        write_records(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(2).unwrap().starts_with("grid,,0,1,1,,,"));
        assert_eq!(read_records(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn summary_statistics() {
        let rows = vec![
            row("a", Some(1.0)),
            row("a", Some(3.0)),
            row("a", None),
            row("b", Some(2.0)),
        ];
        let s = summarize(&rows);
        let pdr_a = s.iter().find(|r| r.config == "a" && r.metric == "pdr").unwrap();
        assert_eq!(pdr_a.count, 2);
        assert_eq!(pdr_a.mean, Some(2.0));
        assert!((pdr_a.std.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((pdr_a.ci95.unwrap() - 1.96).abs() < 1e-12);
        let pdr_b = s.iter().find(|r| r.config == "b" && r.metric == "pdr").unwrap();
        assert_eq!(pdr_b.std, None);
        let delay_a = s.iter().find(|r| r.config == "a" && r.metric == "delay_s").unwrap();
        assert_eq!((delay_a.count, delay_a.mean), (0, None));
        assert_eq!(s[0].config, "a");
    }
}
