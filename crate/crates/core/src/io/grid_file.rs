//! Dense grid file format: a single-line JSON header terminated by a
//! newline, followed by raw little-endian IEEE-754 f32 values, row-major
//! and channel-fastest — exactly `h·w·c` of them.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{GridSpec, ScalarGrid, VectorGrid};
use crate::Result;

/// The one-line JSON header of a grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFileHeader {
    pub h: usize,
    pub w: usize,
    pub c: usize,
    pub dtype: String,
    pub cell_m: f64,
    pub origin: [f64; 2],
    pub z_range: [f64; 2],
}

impl GridFileHeader {
    fn from_spec(spec: &GridSpec, channels: usize) -> Self {
        GridFileHeader {
            h: spec.height_cells,
            w: spec.width_cells,
            c: channels,
            dtype: "f32".to_string(),
            cell_m: spec.cell_size_m,
            origin: spec.origin_world,
            z_range: [spec.z_min_m, spec.z_max_m],
        }
    }

    pub fn to_spec(&self) -> Result<GridSpec> {
        GridSpec::new(
            self.h,
            self.w,
            self.cell_m,
            self.origin,
            self.z_range[0],
            self.z_range[1],
        )
    }

    pub fn value_count(&self) -> usize {
        self.h * self.w * self.c
    }
}

/// Parsed grid file: header metadata plus the raw payload.
#[derive(Debug, Clone, PartialEq)]
pub struct GridData {
    pub header: GridFileHeader,
    pub values: Vec<f32>,
}

impl GridData {
    pub fn into_scalar(self) -> Result<ScalarGrid> {
        if self.header.c != 1 {
            return Err(Error::Format(format!(
                "expected 1 channel, file has {}",
                self.header.c
            )));
        }
        let spec = self.header.to_spec()?;
        ScalarGrid::new(spec, self.values.iter().map(|&v| v as f64).collect())
    }

    pub fn into_vector(self) -> Result<VectorGrid> {
        if self.header.c != 2 {
            return Err(Error::Format(format!(
                "expected 2 channels, file has {}",
                self.header.c
            )));
        }
        let spec = self.header.to_spec()?;
        let cells = self
            .values
            .chunks_exact(2)
            .map(|p| [p[0] as f64, p[1] as f64])
            .collect();
        VectorGrid::new(spec, cells)
    }
}

fn write_grid(
    path: &Path,
    header: &GridFileHeader,
    values: impl Iterator<Item = f32>,
) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    let header_json = serde_json::to_string(header)
        .map_err(|e| Error::Format(format!("header serialization failed: {e}")))?;
    out.write_all(header_json.as_bytes())?;
    out.write_all(b"\n")?;
    let mut written = 0usize;
    for v in values {
        out.write_all(&v.to_le_bytes())?;
        written += 1;
    }
    if written != header.value_count() {
        return Err(Error::Format(format!(
            "payload produced {written} values, header declares {}",
            header.value_count()
        )));
    }
    out.flush()?;
    Ok(())
}

/// Write a scalar grid (one channel).
pub fn write_scalar(path: &Path, grid: &ScalarGrid) -> Result<()> {
    let header = GridFileHeader::from_spec(grid.spec(), 1);
    write_grid(path, &header, grid.data().iter().map(|&v| v as f32))
}

/// Write a two-channel vector grid, channel-fastest.
pub fn write_vector(path: &Path, grid: &VectorGrid) -> Result<()> {
    let header = GridFileHeader::from_spec(grid.spec(), 2);
    write_grid(
        path,
        &header,
        grid.data().iter().flat_map(|v| [v[0] as f32, v[1] as f32]),
    )
}

/// Read a grid file. The header is parsed and validated before any payload
/// byte is interpreted; short or oversized payloads are rejected.
pub fn read_grid(path: &Path) -> Result<GridData> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);

    let mut header_bytes = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let n = reader.read(&mut byte)?;
        if n == 0 {
            return Err(Error::Format("missing newline after header".into()));
        }
        if byte[0] == b'\n' {
            break;
        }
        header_bytes.push(byte[0]);
        if header_bytes.len() > 4096 {
            return Err(Error::Format("header line exceeds 4 KiB".into()));
        }
    }
    let header_text = std::str::from_utf8(&header_bytes)
        .map_err(|_| Error::Format("header is not valid UTF-8".into()))?;
    let header: GridFileHeader = serde_json::from_str(header_text)
        .map_err(|e| Error::Format(format!("header parse failed: {e}")))?;
    if header.dtype != "f32" {
        return Err(Error::Format(format!(
            "unsupported dtype {:?}",
            header.dtype
        )));
    }
    if header.h == 0 || header.w == 0 || header.c == 0 || header.c > 2 {
        return Err(Error::Format("header dimensions out of range".into()));
    }

    let expected = header.value_count() * 4;
    let mut payload = Vec::with_capacity(expected);
    reader.read_to_end(&mut payload)?;
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "payload is {} bytes, header declares {expected}",
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    Ok(GridData { header, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn spec() -> GridSpec {
        GridSpec::new(6, 4, 0.5, [1.0, -2.0], -10.0, 10.0).unwrap()
    }

    #[test]
    fn scalar_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = ScalarGrid::zeros(spec());
        g.set(2, 3, 0.75);
        g.set(5, 0, 1.0);

        let p1 = dir.path().join("a.grid");
        let p2 = dir.path().join("b.grid");
        write_scalar(&p1, &g).unwrap();
        let data = read_grid(&p1).unwrap();
        let g2 = data.clone().into_scalar().unwrap();
        assert_eq!(g, g2);

        write_scalar(&p2, &g2).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    }

    #[test]
    fn vector_round_trip_preserves_channel_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = VectorGrid::zeros(spec());
        g.set(1, 2, [0.25, -0.5]);

        let p = dir.path().join("v.grid");
        write_vector(&p, &g).unwrap();
        let data = read_grid(&p).unwrap();
        assert_eq!(data.header.c, 2);
        // channel-fastest: cell (1,2) starts at (1·4 + 2)·2 values
        let base = (4 + 2) * 2;
        assert_eq!(data.values[base], 0.25);
        assert_eq!(data.values[base + 1], -0.5);
        assert_eq!(data.into_vector().unwrap(), g);
    }

    #[test]
    fn short_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("short.grid");
        let g = ScalarGrid::zeros(spec());
        write_scalar(&p, &g).unwrap();

        let bytes = fs::read(&p).unwrap();
        fs::write(&p, &bytes[..bytes.len() - 4]).unwrap();
        match read_grid(&p) {
            Err(Error::Format(msg)) => assert!(msg.contains("payload")),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn header_dims_must_match_grid_constructor() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.grid");
        // header claims 2×2×1 but carries 3 values
        let mut bytes = Vec::new();
        bytes.extend_from_slice(
            br#"{"h":2,"w":2,"c":1,"dtype":"f32","cell_m":0.5,"origin":[0.0,0.0],"z_range":[-10.0,10.0]}"#,
        );
        bytes.push(b'\n');
        for v in [1.0f32, 2.0, 3.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(&p, &bytes).unwrap();
        assert!(read_grid(&p).is_err());
    }

    #[test]
    fn wrong_channel_conversion_fails() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.grid");
        write_scalar(&p, &ScalarGrid::zeros(spec())).unwrap();
        assert!(read_grid(&p).unwrap().into_vector().is_err());
    }
}
