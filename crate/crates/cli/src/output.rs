use std::io::Write;
use std::path::Path;

use hosc_core::{Error, Result};

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Fixed-point rendering with 15 digits after the leading one.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    // Exponent after rounding, so 0.9999999999999998 counts as unit scale.
    let rounded = format!("{v:.14e}");
    let exponent: i64 = rounded.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (15 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_print_with_fifteen_decimals_at_unit_scale() {
        assert_eq!(format_value(1.0 - 2e-16), "1.000000000000000");
        assert_eq!(format_value(5.0), "5.000000000000000");
        assert_eq!(format_value(0.0), "0.000000000000000");
        assert_eq!(format_value(123.5), "123.5000000000000");
        assert_eq!(format_value(0.25), "0.2500000000000000");
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
