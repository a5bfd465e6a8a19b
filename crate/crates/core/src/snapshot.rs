//! Binary snapshots of a simulation state.
//!
//! Layout (little-endian): magic `AMHD`, `u16` version, `u32` Nx, `u32` Ny,
//! `f64` Ly, `f64` t, `u8` model tag, then the physical samples of `u1`,
//! `u2`, `w1`, `w2`, each `Nx * Ny` `f64` values with x as the slow index.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::{Model, ModelParams, SimState};
use crate::spectral::{make_grid, SpectralField, VectorField};

pub const MAGIC: &[u8; 4] = b"AMHD";
pub const VERSION: u16 = 1;

/// Contents of a snapshot file. Dissipation coefficients are not stored.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub model: Model,
    pub u: VectorField,
    pub w: VectorField,
}

impl Snapshot {
    pub fn into_state(self, nu: f64, eta: f64) -> Result<SimState> {
        let params = ModelParams::new(self.model, nu, eta)?;
        SimState::new(self.u, self.w, self.t, params)
    }
}

pub fn write_snapshot<W: Write>(mut out: W, state: &SimState) -> Result<()> {
    let g = state.grid();
    let dim = |n: usize| u32::try_from(n).map_err(|_| Error::Snapshot(format!("grid size {n} exceeds u32")));
    let mut buf = Vec::with_capacity(31 + 32 * g.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&dim(g.nx())?.to_le_bytes());
    buf.extend_from_slice(&dim(g.ny())?.to_le_bytes());
    buf.extend_from_slice(&g.ly().to_le_bytes());
    buf.extend_from_slice(&state.t.to_le_bytes());
    buf.push(state.params.model.tag());
    for f in [&state.u.x, &state.u.y, &state.w.x, &state.w.y] {
        for v in f.to_physical() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

fn take<const N: usize>(input: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    input
        .read_exact(&mut b)
        .map_err(|e| Error::Snapshot(format!("truncated header: {e}")))?;
    Ok(b)
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<Snapshot> {
    if &take::<4>(&mut input)? != MAGIC {
        return Err(Error::Snapshot("bad magic bytes".into()));
    }
    let version = u16::from_le_bytes(take(&mut input)?);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let nx = u32::from_le_bytes(take(&mut input)?) as usize;
    let ny = u32::from_le_bytes(take(&mut input)?) as usize;
    let ly = f64::from_le_bytes(take(&mut input)?);
    let t = f64::from_le_bytes(take(&mut input)?);
    let tag = take::<1>(&mut input)?[0];
    let model = Model::from_tag(tag).ok_or_else(|| Error::Snapshot(format!("unknown model tag {tag}")))?;
    let grid = make_grid(nx, ny, ly)?;

    let mut body = vec![0u8; 4 * 8 * grid.len()];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Snapshot(format!("truncated field data: {e}")))?;
    let mut fields = body.chunks_exact(8 * grid.len()).map(|chunk| {
        let samples: Vec<f64> = chunk
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
            .collect();
        SpectralField::from_physical(&grid, &samples)
    });
    let mut next = || fields.next().expect("four fields");
    let u = VectorField::new(next()?, next()?)?;
    let w = VectorField::new(next()?, next()?)?;
    Ok(Snapshot { t, model, u, w })
}

pub fn save_snapshot(path: impl AsRef<Path>, state: &SimState) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_snapshot(std::io::BufWriter::new(file), state)
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Snapshot> {
    let file = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(file))
}
