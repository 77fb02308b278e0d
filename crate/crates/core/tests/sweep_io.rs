use std::f64::consts::LN_2;
use std::fs;
use std::path::Path;

use szilard_core::figures::{figure_dataset, figure_files, FigureId};
use szilard_core::sweep::{read_ledger_csv, run_sweep, Axis, LedgerRow, SweepSpec, LEDGER_COLUMNS};
use szilard_core::{PartitionModel, Stage};

fn spec(out: &Path, workers: Option<usize>) -> SweepSpec {
    SweepSpec {
        delta_axis: Axis::range(0.1, 0.9, 0.2),
        gamma_axis: "0.3,0.5".parse().unwrap(),
        lambda_axis: "0.05,0.4,2.0".parse().unwrap(),
        models: vec![PartitionModel::Exact, PartitionModel::Semiclassical],
        output_path: out.to_path_buf(),
        workers,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn singleton_sweep_has_five_rows_with_closed_totals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.csv");
    let spec = SweepSpec {
        delta_axis: Axis::single(0.3),
        gamma_axis: Axis::single(0.6),
        lambda_axis: Axis::single(1.0),
        models: vec![PartitionModel::Exact],
        output_path: out.clone(),
        workers: None,
    };
    let data = run_sweep(&spec).unwrap();
    assert_eq!(data.rows.len(), 5);
    let rows = read_ledger_csv(&out).unwrap();
    let stages: Vec<_> = rows.iter().map(|r| r.stage.unwrap()).collect();
    assert_eq!(stages, Stage::ALL.to_vec());
    for x in rows[4].ledger.unwrap().components() {
        assert!(x.abs() <= 1e-10);
    }
}

#[test]
fn output_is_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in [None, Some(1), Some(3), None].into_iter().enumerate() {
        let path = dir.path().join(format!("run{i}.csv"));
        run_sweep(&spec(&path, workers)).unwrap();
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn schema_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let data = run_sweep(&spec(&path, Some(2))).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, LEDGER_COLUMNS.join(","));
    assert!(text.starts_with('#'));

    let back = read_ledger_csv(&path).unwrap();
    assert_eq!(back.len(), data.rows.len());
    assert!(data.skipped() > 0);
    for (a, b) in data.rows.iter().zip(&back) {
        assert_eq!(a.point, b.point);
        assert_eq!(a.stage, b.stage);
        assert_eq!(a.skip_reason, b.skip_reason);
        if let (Some(x), Some(y)) = (a.ledger, b.ledger) {
            for (u, v) in x.components().into_iter().zip(y.components()) {
                assert!(close(v, u), "{u} vs {v}");
            }
            assert!(close(b.p_left.unwrap(), a.p_left.unwrap()));
        }
    }
    let skip_rows: Vec<&LedgerRow> = back.iter().filter(|r| r.stage.is_none()).collect();
    assert!(skip_rows
        .iter()
        .all(|r| r.point.model == PartitionModel::Semiclassical));
}

fn file<'a>(
    files: &'a [szilard_core::figures::FigureFile],
    name: &str,
) -> &'a szilard_core::figures::FigureFile {
    files
        .iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("missing {name}"))
}

fn records(bytes: &[u8]) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes)
        .records()
        .map(Result::unwrap)
        .collect()
}

fn column(bytes: &[u8], name: &str) -> usize {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes);
    reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .unwrap()
}

#[test]
fn fig4_symmetric_box_is_even_odds() {
    let files = figure_files(FigureId::Fig4ProbLambda, None).unwrap();
    let bytes = &file(&files, "fig4_prob_left.csv").bytes;
    let (d, p) = (column(bytes, "delta"), column(bytes, "p_left"));
    let mut seen = 0;
    for r in records(bytes) {
        if r[d].parse::<f64>().unwrap() == 0.5 {
            assert!((r[p].parse::<f64>().unwrap() - 0.5).abs() <= 1e-12);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn fig7_erasure_work_zero_at_symmetric_memory() {
    let dir = tempfile::tempdir().unwrap();
    let written = figure_dataset(FigureId::Fig7Erase, dir.path(), None).unwrap();
    let names: Vec<_> = written
        .iter()
        .map(|w| w.path.file_name().unwrap().to_str().unwrap().to_string())
        .collect();
    assert_eq!(
        names,
        [
            "fig7_erase_work_lambda0.25.csv",
            "fig7_erase_work_lambda2.csv"
        ]
    );
    for w in &written {
        let rows = read_ledger_csv(&w.path).unwrap();
        assert_eq!(rows.len(), w.rows);
        let half = rows.iter().find(|r| r.point.gamma == 0.5).unwrap();
        assert_eq!(half.stage, Some(Stage::Erasure));
        assert!(half.ledger.unwrap().work.abs() <= 1e-12);
    }
}

#[test]
fn fig9_high_temperature_dissipates_ln2() {
    let files = figure_files(FigureId::Fig9TradeoffVsGamma, None).unwrap();
    assert_eq!(files.len(), 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    fs::write(&path, &file(&files, "fig9_tradeoff_lambda0.001.csv").bytes).unwrap();
    let rows = read_ledger_csv(&path).unwrap();
    let heat = |stage| {
        rows.iter()
            .find(|r| r.point.gamma == 0.5 && r.stage == Some(stage))
            .map(|r| r.ledger.unwrap().heat * r.beta())
            .unwrap()
    };
    assert!((-(heat(Stage::Measurement) + heat(Stage::Erasure)) - LN_2).abs() <= 1e-9);
}

#[test]
fn fig3_writes_six_files() {
    let files = figure_files(FigureId::Fig3Insertion, None).unwrap();
    let mut names: Vec<_> = files.iter().map(|f| f.name.as_str()).collect();
    names.sort_unstable();
    assert_eq!(
        names,
        [
            "fig3_insertion_delta0.35_exact.csv",
            "fig3_insertion_delta0.35_ground.csv",
            "fig3_insertion_delta0.4_exact.csv",
            "fig3_insertion_delta0.4_ground.csv",
            "fig3_insertion_delta0.5_exact.csv",
            "fig3_insertion_delta0.5_ground.csv",
        ]
    );
}

#[test]
fn every_figure_reruns_identically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for id in FigureId::ALL {
        let first = figure_dataset(id, a.path(), Some(1)).unwrap();
        let second = figure_dataset(id, b.path(), Some(4)).unwrap();
        assert_eq!(first.len(), second.len());
        for (x, y) in first.iter().zip(&second) {
            assert_eq!(x.path.file_name(), y.path.file_name());
            assert_eq!(x.rows, y.rows);
            assert_eq!(
                fs::read(&x.path).unwrap(),
                fs::read(&y.path).unwrap(),
                "{id:?}"
            );
        }
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let err = run_sweep(&spec(&blocker.join("sub/out.csv"), None)).unwrap_err();
    assert!(matches!(err, szilard_core::Error::Io { .. }), "{err:?}");
}
