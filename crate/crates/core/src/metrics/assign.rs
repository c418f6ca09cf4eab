/// Row-major similarity scores; rows are predicted triples, columns are
/// reference triples. Entries are clamped to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(clamp01(f(i, j)));
            }
        }
        Self { rows, cols, values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged similarity matrix");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }
}

fn clamp01(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

const TIGHT_EPS: f64 = 1e-11;

/// Maximum-weight one-to-one assignment. The smaller side is padded with
/// zero-similarity slots, which are left out of the result. Among optimal
/// assignments the lexicographically smallest column sequence (by row) wins.
/// Returns `(row, col, similarity)` sorted by row.
pub fn optimal_match(sim: &SimilarityMatrix) -> Vec<(usize, usize, f64)> {
    let n = sim.rows.max(sim.cols);
    if sim.rows == 0 || sim.cols == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| -> f64 {
        if i < sim.rows && j < sim.cols {
            -sim.get(i, j)
        } else {
            0.0
        }
    };

    // potentials u (rows) and v (cols), 1-based with a virtual column 0
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_of = vec![0usize; n];
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        row_of[j - 1] = p[j] - 1;
        col_of[p[j] - 1] = j - 1;
    }
    // every optimal assignment lives on zero-reduced-cost edges
    let tight = |i: usize, j: usize| (cost(i, j) - u[i + 1] - v[j + 1]).abs() <= TIGHT_EPS;
    lexicographic_fix(n, &tight, &mut row_of, &mut col_of);

    (0..sim.rows)
        .filter(|&i| col_of[i] < sim.cols)
        .map(|i| (i, col_of[i], sim.get(i, col_of[i])))
        .collect()
}

/// Walks rows in order and moves each to the smallest tight column that
/// still admits a perfect tight matching of the unfixed rows.
fn lexicographic_fix(n: usize, tight: &dyn Fn(usize, usize) -> bool, row_of: &mut [usize], col_of: &mut [usize]) {
    for i in 0..n {
        for j in 0..col_of[i] {
            let r = row_of[j];
            if r < i || !tight(i, j) {
                continue;
            }
            // need an alternating path that rehomes row r and ends at col_of[i]
            let target = col_of[i];
            let mut visited = vec![false; n];
            visited[j] = true;
            let mut path = Vec::new();
            if rehome(r, target, i, n, tight, row_of, &mut visited, &mut path) {
                // path holds (row, new col) moves; apply them, then place row i
                for &(row, col) in &path {
                    col_of[row] = col;
                    row_of[col] = row;
                }
                col_of[i] = j;
                row_of[j] = i;
                break;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rehome(
    row: usize,
    target: usize,
    fixed_upto: usize,
    n: usize,
    tight: &dyn Fn(usize, usize) -> bool,
    row_of: &[usize],
    visited: &mut [bool],
    path: &mut Vec<(usize, usize)>,
) -> bool {
    for c in 0..n {
        if visited[c] || !tight(row, c) {
            continue;
        }
        visited[c] = true;
        if c == target {
            path.push((row, c));
            return true;
        }
        let next = row_of[c];
        if next <= fixed_upto {
            continue;
        }
        if rehome(next, target, fixed_upto, n, tight, row_of, visited, path) {
            path.push((row, c));
            return true;
        }
    }
    false
}
