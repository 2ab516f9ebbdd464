//! CSV dumps of window evaluations for external plotting.

use std::fmt::Write as _;

use crate::pou::Window;

/// Evaluates up to two windows on the uniform grid `from, from+step, ..`
/// up to and including `to`, and renders CSV with header `x,g` or `x,g,h`.
/// Windows are real-valued on ℝ, so only the real part is written, at full
/// double precision. An empty grid (`from > to`) yields just the header.
pub fn window_csv(windows: &[&Window], from: f64, to: f64, step: f64) -> String {
    assert!(step > 0.0, "step must be positive");
    assert!(
        matches!(windows.len(), 1 | 2),
        "expected one window or a pair"
    );
    let mut out = String::from(if windows.len() == 1 { "x,g\n" } else { "x,g,h\n" });
    let mut i = 0u64;
    loop {
        let x = from + i as f64 * step;
        if x > to + step * 1e-9 {
            break;
        }
        write!(out, "{x:.16e}").unwrap();
        for w in windows {
            write!(out, ",{:.16e}", w.evaluate(x).re).unwrap();
        }
        out.push('\n');
        i += 1;
    }
    out
}
