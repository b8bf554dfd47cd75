//! Portable network checkpoint.
//!
//! Little-endian binary layout:
//!
//! | offset | size      | content                                   |
//! |--------|-----------|-------------------------------------------|
//! | 0      | 4         | magic `JQNN`                              |
//! | 4      | 4 (u32)   | format version, currently 1               |
//! | 8      | 1 (u8)    | hidden activation: 0 linear, 1 relu, 2 tanh |
//! | 9      | 3         | zero padding                              |
//! | 12     | 4 (u32)   | number of dims `n` (layers + 1)           |
//! | 16     | 4n (u32)  | dims, input first                         |
//! | ...    | 8 each    | per layer: weights `out x in` row-major (f64), then `out` biases (f64) |

use std::io::{Read, Write};

use super::dense::{Activation, DenseNet, Layer};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"JQNN";
pub const VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> Error {
    Error::Checkpoint(e.to_string())
}

pub fn write_net<W: Write>(net: &DenseNet, mut out: W) -> Result<()> {
    let dims = net.dims();
    let mut buf = Vec::with_capacity(16 + 4 * dims.len() + 8 * net.num_parameters());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&[net.hidden_activation().code(), 0, 0, 0]);
    buf.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for d in &dims {
        buf.extend_from_slice(&(*d as u32).to_le_bytes());
    }
    for p in net.parameters() {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    out.write_all(&buf).map_err(io_err)
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b).map_err(io_err)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64s<R: Read>(input: &mut R, n: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; n * 8];
    input.read_exact(&mut bytes).map_err(io_err)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn read_net<R: Read>(mut input: R) -> Result<DenseNet> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).map_err(io_err)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let mut tag = [0u8; 4];
    input.read_exact(&mut tag).map_err(io_err)?;
    let hidden = Activation::from_code(tag[0])
        .ok_or_else(|| Error::Checkpoint(format!("unknown activation code {}", tag[0])))?;
    let n = read_u32(&mut input)? as usize;
    if !(2..=64).contains(&n) {
        return Err(Error::Checkpoint(format!("implausible dim count {n}")));
    }
    let dims = (0..n)
        .map(|_| read_u32(&mut input).map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let mut layers = Vec::with_capacity(n - 1);
    for w in dims.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let weights = read_f64s(&mut input, fan_in * fan_out)?;
        let bias = read_f64s(&mut input, fan_out)?;
        layers.push(Layer {
            fan_in,
            fan_out,
            weights,
            bias,
        });
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing).map_err(io_err)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after parameters".into()));
    }
    DenseNet::from_layers(layers, hidden)
}

pub fn net_to_bytes(net: &DenseNet) -> Vec<u8> {
    let mut buf = Vec::new();
    write_net(net, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

pub fn net_from_bytes(bytes: &[u8]) -> Result<DenseNet> {
    read_net(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    #[test]
    fn header_layout() {
        let net = DenseNet::zeros(&[3, 2], Activation::Relu).unwrap();
        let bytes = net_to_bytes(&net);
        assert_eq!(&bytes[..4], b"JQNN");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(bytes[8], 1);
        assert_eq!(&bytes[12..16], &2u32.to_le_bytes());
        assert_eq!(&bytes[16..24], &[3, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(bytes.len(), 24 + 8 * (6 + 2));
    }

    #[test]
    fn corrupt_inputs_rejected() {
        let net = DenseNet::init(&[4, 5, 2], Activation::Tanh, &mut stream(1, Stream::Init, 0)).unwrap();
        let bytes = net_to_bytes(&net);
        assert_eq!(net_from_bytes(&bytes).unwrap(), net);
        assert!(net_from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(net_from_bytes(&extra).is_err());
        let mut bad = bytes;
        bad[0] = b'X';
        assert!(net_from_bytes(&bad).is_err());
    }
}
