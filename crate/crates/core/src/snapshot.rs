//! Binary snapshot format: magic `CSGF`, version, grid header, then the
//! components as little-endian `(re, im)` pairs in row-major order.

use std::io::{Read, Write};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Representation, ScalarField};
use crate::grid::Grid2D;

const MAGIC: &[u8; 4] = b"CSGF";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: Grid2D,
    pub repr: Representation,
    pub fields: Vec<ScalarField>,
}

impl Snapshot {
    pub fn new(fields: Vec<ScalarField>) -> Result<Self> {
        let first = fields
            .first()
            .ok_or_else(|| Error::Format("snapshot needs at least one component".into()))?;
        let (grid, repr) = (first.grid(), first.repr());
        if fields.len() > u8::MAX as usize {
            return Err(Error::Format(format!(
                "{} components exceed 255",
                fields.len()
            )));
        }
        if fields.iter().any(|f| f.grid() != grid || f.repr() != repr) {
            return Err(Error::ShapeMismatch(
                "snapshot components differ in grid or representation".into(),
            ));
        }
        Ok(Self { grid, repr, fields })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.grid.n1() as u32).to_le_bytes())?;
        w.write_all(&(self.grid.n2() as u32).to_le_bytes())?;
        w.write_all(&self.grid.length().to_le_bytes())?;
        w.write_all(&[self.repr.code(), self.fields.len() as u8])?;
        let mut buf = Vec::with_capacity(16 * self.grid.len() * self.fields.len());
        for f in &self.fields {
            for z in f.values().iter() {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n1 = read_u32(&mut r)? as usize;
        let n2 = read_u32(&mut r)? as usize;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let length = f64::from_le_bytes(b8);
        let grid = Grid2D::new(n1, n2, length)?;
        let mut tail = [0u8; 2];
        r.read_exact(&mut tail)?;
        let repr = Representation::from_code(tail[0])
            .ok_or_else(|| Error::Format(format!("unknown representation code {}", tail[0])))?;
        let k = tail[1] as usize;
        let mut fields = Vec::with_capacity(k);
        let mut raw = vec![0u8; 16 * grid.len()];
        for _ in 0..k {
            r.read_exact(&mut raw)?;
            let vals: Vec<Complex64> = raw
                .chunks_exact(16)
                .map(|c| {
                    let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                    let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                    Complex64::new(re, im)
                })
                .collect();
            let arr = Array2::from_shape_vec(grid.shape(), vals)
                .map_err(|e| Error::Format(e.to_string()))?;
            fields.push(ScalarField::from_values(grid, repr, arr)?);
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after last component".into()));
        }
        Self::new(fields)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}
