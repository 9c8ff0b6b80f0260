//! JSON file format: `{"ambient", "t", "dims", "occupancy"}` with the
//! occupancy bit-packed LSB-first in cell-index order and base64 encoded.

use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::{Ambient, VoxelDomain};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct DomainFile {
    ambient: Ambient,
    t: Option<f64>,
    dims: [usize; 3],
    occupancy: String,
}

pub(crate) fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
        out[i / 8] |= 1 << (i % 8);
    }
    out
}

pub(crate) fn unpack_bits(bytes: &[u8], len: usize) -> Result<Vec<bool>> {
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Format(format!(
            "occupancy has {} bytes, expected {}",
            bytes.len(),
            len.div_ceil(8)
        )));
    }
    Ok((0..len).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect())
}

impl VoxelDomain {
    pub fn to_json(&self) -> Result<String> {
        let f = DomainFile {
            ambient: self.ambient,
            t: self.ambient.t(),
            dims: self.dims,
            occupancy: STANDARD.encode(pack_bits(&self.occupancy)),
        };
        Ok(serde_json::to_string_pretty(&f)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: DomainFile = serde_json::from_str(s)?;
        if f.t != f.ambient.t() {
            return Err(Error::Format(format!(
                "field t = {:?} disagrees with ambient {:?}",
                f.t, f.ambient
            )));
        }
        let bytes = STANDARD
            .decode(f.occupancy.as_bytes())
            .map_err(|e| Error::Format(format!("occupancy is not base64: {e}")))?;
        let len = f.dims.iter().product();
        VoxelDomain::new(f.ambient, f.dims, unpack_bits(&bytes, len)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::voxelize;

    #[test]
    fn bit_order_is_lsb_first() {
        assert_eq!(
            pack_bits(&[true, false, false, true, false, false, false, false, true]),
            vec![0b1001, 1]
        );
        assert_eq!(unpack_bits(&[0b10], 3).unwrap(), vec![false, true, false]);
        assert!(unpack_bits(&[0, 0], 3).is_err());
    }

    #[test]
    fn roundtrip() {
        let amb = Ambient::ZSlab { cut: [3, 0] };
        let d = voxelize(|p| p.z < p.x, amb, [8, 9, 10]).unwrap();
        let s = d.to_json().unwrap();
        assert!(s.contains("\"z_slab\""));
        assert_eq!(VoxelDomain::from_json(&s).unwrap(), d);
        assert!(VoxelDomain::from_json(&s.replace("\"t\": 1.0", "\"t\": 2.0")).is_err());
    }
}
