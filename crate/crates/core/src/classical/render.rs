//! Text and PBM rendering of configurations.

use super::{Config, Coord};

/// Space-time diagram of a 1-D trace, one row per time step. Finite configs
/// are cropped to `window` (inclusive), or to the union of their supports.
pub fn diagram_rows(trace: &[Config], window: Option<(i64, i64)>) -> Vec<Vec<bool>> {
    let window = window.or_else(|| {
        trace
            .iter()
            .filter_map(|c| c.as_finite().and_then(|f| f.hull()))
            .map(|(lo, hi)| (lo[0], hi[0]))
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    });
    trace
        .iter()
        .map(|c| match c {
            Config::Periodic(p) => p.cells.iter().map(|&s| s != 0).collect(),
            Config::Finite(f) => match window {
                Some((lo, hi)) => (lo..=hi).map(|i| f.get([i, 0]) != f.quiescent).collect(),
                None => Vec::new(),
            },
        })
        .collect()
}

/// Rows of a 2-D configuration, cropped to `window` or to the support hull.
pub fn snapshot_rows(config: &Config, window: Option<(Coord, Coord)>) -> Vec<Vec<bool>> {
    match config {
        Config::Periodic(p) if p.shape.len() == 2 => {
            p.cells.chunks(p.shape[1]).map(|row| row.iter().map(|&s| s != 0).collect()).collect()
        }
        Config::Periodic(p) => vec![p.cells.iter().map(|&s| s != 0).collect()],
        Config::Finite(f) => {
            let Some((lo, hi)) = window.or_else(|| f.hull()) else {
                return Vec::new();
            };
            (lo[0]..=hi[0]).map(|r| (lo[1]..=hi[1]).map(|c| f.get([r, c]) != f.quiescent).collect()).collect()
        }
    }
}

/// `'#'` for live cells, `'.'` for quiescent ones; one line per row.
pub fn text(rows: &[Vec<bool>]) -> String {
    let mut out = String::new();
    for row in rows {
        out.extend(row.iter().map(|&b| if b { '#' } else { '.' }));
        out.push('\n');
    }
    out
}

/// Plain PBM (`P1`) bitmap; live cells are black.
pub fn pbm(rows: &[Vec<bool>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("P1\n{} {}\n", width, rows.len());
    for row in rows {
        let line: Vec<&str> =
            (0..width).map(|i| if row.get(i).copied().unwrap_or(false) { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
