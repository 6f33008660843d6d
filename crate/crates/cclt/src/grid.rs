use crate::error::{CliError, CliResult};

/// Parses `start:stop:count` into `count` evenly spaced points, endpoints included.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = |msg: &str| CliError::Config(format!("t-grid '{text}': {msg}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad("expected start:stop:count"));
    };
    let start: f64 = start.trim().parse().map_err(|_| bad("start is not a number"))?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad("stop is not a number"))?;
    let count: usize = count.trim().parse().map_err(|_| bad("count is not a positive integer"))?;
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad("bounds must be finite"));
    }
    Ok(match count {
        0 => return Err(bad("count must be positive")),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    })
}
