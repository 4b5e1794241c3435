use std::io::{Read, Write};
use std::path::Path;

use crate::error::{io_err, Error, Result};
use crate::eval::ConfusionCounts;
use crate::learn::Algorithm;
use crate::sem::Model;

use super::fmt_f64;

pub const RUNS_CSV_HEADER: &str = "topology,gamma,model,n_nodes,sigma,sample_size,algorithm,rep,run_seed,\
sensitivity,specificity,tp,fp,fn,tn,max_in_degree,n_ci_tests,runtime_ms,status";

/// One row of `runs.csv`.
///
/// A failed run keeps its coordinates and seed; the measured columns are
/// empty and `status` carries `failed: <reason>`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub topology: String,
    pub gamma: f64,
    pub model: Model,
    pub n_nodes: usize,
    pub sigma: f64,
    pub sample_size: usize,
    pub algorithm: Algorithm,
    pub rep: usize,
    pub run_seed: u64,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub counts: Option<ConfusionCounts>,
    pub max_in_degree: Option<usize>,
    pub n_ci_tests: Option<u64>,
    pub runtime_ms: Option<f64>,
    pub status: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn fields(&self) -> Vec<String> {
        fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
            v.map(f).unwrap_or_default()
        }
        let c = self.counts;
        vec![
            self.topology.clone(),
            fmt_f64(self.gamma),
            self.model.as_str().into(),
            self.n_nodes.to_string(),
            fmt_f64(self.sigma),
            self.sample_size.to_string(),
            self.algorithm.as_str().into(),
            self.rep.to_string(),
            self.run_seed.to_string(),
            opt(self.sensitivity, fmt_f64),
            opt(self.specificity, fmt_f64),
            opt(c, |c| c.tp.to_string()),
            opt(c, |c| c.fp.to_string()),
            opt(c, |c| c.fn_.to_string()),
            opt(c, |c| c.tn.to_string()),
            opt(self.max_in_degree, |d| d.to_string()),
            opt(self.n_ci_tests, |d| d.to_string()),
            opt(self.runtime_ms, fmt_f64),
            self.status.clone(),
        ]
    }

    fn from_fields(rec: &csv::StringRecord, line: usize) -> Result<Self> {
        let n_cols = RUNS_CSV_HEADER.split(',').count();
        if rec.len() != n_cols {
            return Err(Error::Parse { line, msg: format!("expected {n_cols} fields, found {}", rec.len()) });
        }
        let err = |col: &str, v: &str| Error::Parse { line, msg: format!("bad {col} `{v}`") };
        fn req<T: std::str::FromStr>(v: &str, e: impl Fn() -> Error) -> Result<T> {
            v.parse().map_err(|_| e())
        }
        fn opt<T: std::str::FromStr>(v: &str, e: impl Fn() -> Error) -> Result<Option<T>> {
            if v.is_empty() {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| e())
            }
        }
        let f = |i: usize| &rec[i];
        let counts: [Option<u64>; 4] = [
            opt(f(11), || err("tp", f(11)))?,
            opt(f(12), || err("fp", f(12)))?,
            opt(f(13), || err("fn", f(13)))?,
            opt(f(14), || err("tn", f(14)))?,
        ];
        let counts = match counts {
            [Some(tp), Some(fp), Some(fn_), Some(tn)] => Some(ConfusionCounts { tp, fp, fn_, tn }),
            [None, None, None, None] => None,
            _ => return Err(Error::Parse { line, msg: "confusion counts are partially missing".into() }),
        };
        Ok(Self {
            topology: f(0).to_string(),
            gamma: req(f(1), || err("gamma", f(1)))?,
            model: req(f(2), || err("model", f(2)))?,
            n_nodes: req(f(3), || err("n_nodes", f(3)))?,
            sigma: req(f(4), || err("sigma", f(4)))?,
            sample_size: req(f(5), || err("sample_size", f(5)))?,
            algorithm: req(f(6), || err("algorithm", f(6)))?,
            rep: req(f(7), || err("rep", f(7)))?,
            run_seed: req(f(8), || err("run_seed", f(8)))?,
            sensitivity: opt(f(9), || err("sensitivity", f(9)))?,
            specificity: opt(f(10), || err("specificity", f(10)))?,
            counts,
            max_in_degree: opt(f(15), || err("max_in_degree", f(15)))?,
            n_ci_tests: opt(f(16), || err("n_ci_tests", f(16)))?,
            runtime_ms: opt(f(17), || err("runtime_ms", f(17)))?,
            status: f(18).to_string(),
        })
    }
}

/// Writes the header and one line per record.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RUNS_CSV_HEADER.split(','))?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(io_err(path))?;
    write_csv(records, std::io::BufWriter::new(f)).map_err(|e| match e {
        Error::Csv(c) => Error::Io { path: path.to_path_buf(), source: c.into() },
        e => e,
    })
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut rows = r.records();
    let header = rows.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })??;
    if header.iter().collect::<Vec<_>>().join(",") != RUNS_CSV_HEADER {
        return Err(Error::Parse { line: 1, msg: "unexpected header".into() });
    }
    rows.enumerate().map(|(i, row)| RunRecord::from_fields(&row?, i + 2)).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let f = std::fs::File::open(path).map_err(io_err(path))?;
    parse_csv(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample(rep: usize) -> RunRecord {
        RunRecord {
            topology: "B".into(),
            gamma: 0.25,
            model: Model::Nonlinear,
            n_nodes: 48,
            sigma: 3.0,
            sample_size: 1024,
            algorithm: Algorithm::FastIamb,
            rep,
            run_seed: u64::MAX - rep as u64,
            sensitivity: Some(0.1 + rep as f64 / 3.0),
            specificity: Some(0.98),
            counts: Some(ConfusionCounts { tp: 10, fp: 3, fn_: 40, tn: 1075 }),
            max_in_degree: Some(7),
            n_ci_tests: Some(12345),
            runtime_ms: None,
            status: "ok".into(),
        }
    }

    fn emit(records: &[RunRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn header_is_pinned() {
        assert_eq!(
            RUNS_CSV_HEADER,
            "topology,gamma,model,n_nodes,sigma,sample_size,algorithm,rep,run_seed,sensitivity,specificity,\
             tp,fp,fn,tn,max_in_degree,n_ci_tests,runtime_ms,status"
                .replace(' ', "")
        );
        assert_eq!(emit(&[]), format!("{RUNS_CSV_HEADER}\n"));
    }

    #[test]
    fn line_counts() {
        assert_eq!(emit(&[sample(0), sample(1)]).lines().count(), 3);
    }

    #[test]
    fn round_trip_including_failures() {
        let mut failed = sample(2);
        failed.sensitivity = None;
        failed.specificity = None;
        failed.counts = None;
        failed.max_in_degree = None;
        failed.n_ci_tests = None;
        failed.status = "failed: bad thing, with a comma".into();
        let mut timed = sample(3);
        timed.runtime_ms = Some(12.5);
        let records = vec![sample(0), sample(1), failed, timed];
        let text = emit(&records);
        assert_eq!(parse_csv(text.as_bytes()).unwrap(), records);
    }

    #[test]
    fn rejects_wrong_header_and_short_rows() {
        assert!(parse_csv("a,b\n".as_bytes()).is_err());
        let text = format!("{RUNS_CSV_HEADER}\nB,0.25\n");
        assert!(matches!(parse_csv(text.as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("runs.csv");
        match emit_csv(&[], &path) {
            Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
            other => panic!("{other:?}"),
        }
    }
}
