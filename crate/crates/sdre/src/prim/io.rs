//! Line-oriented box files: `1:l1:u1 2:l2:u2 ... val_mean`.

use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use std::io::{BufRead, Write};

/// Write one line per box, followed by its validation mean.
pub fn write_boxes<W: Write>(mut w: W, boxes: &[HyperBox], val_means: &[f64]) -> Result<()> {
    if boxes.len() != val_means.len() {
        return Err(Error::Shape { expected: boxes.len(), got: val_means.len() });
    }
    for (b, m) in boxes.iter().zip(val_means) {
        writeln!(w, "{b} {m}")?;
    }
    Ok(())
}

/// Parse a box file written by [`write_boxes`].
pub fn read_boxes<R: BufRead>(r: R) -> Result<Vec<(HyperBox, f64)>> {
    let mut out = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Data(format!("box file line {}: {what}", ln + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (mean, bounds) = fields.split_last().ok_or_else(|| bad("empty"))?;
        let mean: f64 = mean.parse().map_err(|_| bad("unparseable val_mean"))?;
        let b: HyperBox = bounds.join(" ").parse().map_err(|e: Error| bad(&e.to_string()))?;
        out.push((b, mean));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let boxes = vec![
            HyperBox::unit(3),
            HyperBox::from_bounds(&[(0.1, 0.9), (1.0 / 3.0, 1.0), (0.0, 0.123456789012345)]).unwrap(),
        ];
        let means = vec![0.082, f64::NAN];
        let mut buf = Vec::new();
        write_boxes(&mut buf, &boxes, &means).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("1:0:1 2:0:1 3:0:1 0.082\n"));
        let back = read_boxes(&buf[..]).unwrap();
        assert_eq!(back[0].0, boxes[0]);
        assert_eq!(back[1].0, boxes[1]);
        assert!(back[1].1.is_nan());
    }

    #[test]
    fn reports_line_numbers() {
        let err = read_boxes(&b"1:0:1 0.5\n1:0:x 0.5\n"[..]).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
