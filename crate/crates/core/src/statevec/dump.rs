//! Binary amplitude dumps: a 16-byte header (magic `Z2SV`, version, qubit
//! count, reserved; all u32 little-endian) followed by 2^n complex doubles as
//! (re, im) little-endian pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use super::register::QubitRegister;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"Z2SV";
pub const VERSION: u32 = 1;

pub fn write_amplitudes<W: Write>(reg: &QubitRegister, mut w: W) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(reg.num_qubits() as u32).to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    for a in reg.amplitudes() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_amplitudes<R: Read>(mut r: R) -> Result<QubitRegister> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if header[..4] != MAGIC {
        return Err(Error::InvalidInput("bad amplitude dump magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
    let version = word(4);
    if version != VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported amplitude dump version {version}"
        )));
    }
    let n = word(8) as usize;
    super::register::check_capacity(n)?;
    let mut amps = Vec::with_capacity(1 << n);
    let mut buf = [0u8; 16];
    for _ in 0..1usize << n {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
        amps.push(C64::new(re, im));
    }
    QubitRegister::from_amplitudes(amps)
}

pub fn save(reg: &QubitRegister, path: &Path) -> Result<()> {
    write_amplitudes(reg, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<QubitRegister> {
    read_amplitudes(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn header_layout() {
        let reg = QubitRegister::zero(2).unwrap();
        let mut bytes = Vec::new();
        write_amplitudes(&reg, &mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"Z2SV");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &2u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &[0, 0, 0, 0]);
        assert_eq!(bytes.len(), 16 + 4 * 16);
        assert_eq!(&bytes[16..24], &1.0f64.to_le_bytes());
    }

    #[test]
    fn round_trip_is_bitwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let reg = QubitRegister::random(4, &mut rng).unwrap();
        let mut bytes = Vec::new();
        write_amplitudes(&reg, &mut bytes).unwrap();
        let back = read_amplitudes(bytes.as_slice()).unwrap();
        assert_eq!(back, reg);
    }

    #[test]
    fn bad_magic_rejected() {
        let bytes = [0u8; 32];
        assert!(read_amplitudes(&bytes[..]).is_err());
    }
}
