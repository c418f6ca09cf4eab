/// 1-Wasserstein distance between two empirical distributions, computed
/// exactly as the integral of `|F_x - F_y|` over the merged support.
/// Returns `None` if either side is empty.
pub fn wasserstein1(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.is_empty() || ys.is_empty() {
        return None;
    }
    let mut x = xs.to_vec();
    let mut y = ys.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let mut points: Vec<f64> = x.iter().chain(&y).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();

    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut total = 0.0;
    for w in points.windows(2) {
        while i < x.len() && x[i] <= w[0] {
            i += 1;
        }
        while j < y.len() && y[j] <= w[0] {
            j += 1;
        }
        total += (i as f64 / nx - j as f64 / ny).abs() * (w[1] - w[0]);
    }
    Some(total)
}
