//! MNIST-style IDX ingestion and per-node partitioning.
//!
//! The IDX container is parsed bit-exactly: big-endian 32-bit magic
//! (`0x00000803` for images, `0x00000801` for labels), dimension sizes, then
//! raw bytes. Pixels are scaled by 1/255 into `[0, 1]` with no centering.
//! The loader only ever reads local files.

use std::path::Path;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::costs::{CostError, LogisticData};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("wrong magic in {what} file: expected {expected:#010x}, found {found:#010x}")]
    WrongMagic {
        what: &'static str,
        expected: u32,
        found: u32,
    },
    #[error("{what} file truncated: need {needed} bytes, have {available}")]
    Truncated {
        what: &'static str,
        needed: usize,
        available: usize,
    },
    #[error("image count {images} does not match label count {labels}")]
    CountMismatch { images: usize, labels: usize },
    #[error("label {label} out of the 0-9 digit range at index {index}")]
    LabelOutOfRange { label: u8, index: usize },
    #[error("digit pair must be distinct digits 0-9, got ({0}, {1})")]
    BadDigitPair(u8, u8),
    #[error(
        "insufficient samples for digits ({d1}, {d2}): available {available1}+{available2}, requested {requested}"
    )]
    InsufficientSamples {
        d1: u8,
        d2: u8,
        available1: usize,
        available2: usize,
        requested: usize,
    },
    #[error("total {total} is not divisible by {nodes} nodes")]
    NotDivisible { total: usize, nodes: usize },
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Loaded image/label pair: `count x (rows*cols)` pixels in `[0, 1]` plus
/// digit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct IdxDataset {
    pub images: Array2<f64>,
    pub labels: Vec<u8>,
    pub rows: usize,
    pub cols: usize,
}

fn read_u32(bytes: &[u8], offset: usize, what: &'static str) -> Result<u32, DataError> {
    let end = offset + 4;
    if bytes.len() < end {
        return Err(DataError::Truncated {
            what,
            needed: end,
            available: bytes.len(),
        });
    }
    Ok(u32::from_be_bytes([
        bytes[offset],
        bytes[offset + 1],
        bytes[offset + 2],
        bytes[offset + 3],
    ]))
}

/// Parses raw IDX image bytes.
pub fn parse_idx_images(bytes: &[u8]) -> Result<(Array2<f64>, usize, usize), DataError> {
    let magic = read_u32(bytes, 0, "images")?;
    if magic != IMAGES_MAGIC {
        return Err(DataError::WrongMagic {
            what: "images",
            expected: IMAGES_MAGIC,
            found: magic,
        });
    }
    let count = read_u32(bytes, 4, "images")? as usize;
    let rows = read_u32(bytes, 8, "images")? as usize;
    let cols = read_u32(bytes, 12, "images")? as usize;
    let pixels = rows * cols;
    let needed = 16 + count * pixels;
    if bytes.len() < needed {
        return Err(DataError::Truncated {
            what: "images",
            needed,
            available: bytes.len(),
        });
    }
    let data: Vec<f64> = bytes[16..needed].iter().map(|&b| b as f64 / 255.0).collect();
    let images = Array2::from_shape_vec((count, pixels), data).expect("length checked");
    Ok((images, rows, cols))
}

/// Parses raw IDX label bytes.
pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>, DataError> {
    let magic = read_u32(bytes, 0, "labels")?;
    if magic != LABELS_MAGIC {
        return Err(DataError::WrongMagic {
            what: "labels",
            expected: LABELS_MAGIC,
            found: magic,
        });
    }
    let count = read_u32(bytes, 4, "labels")? as usize;
    let needed = 8 + count;
    if bytes.len() < needed {
        return Err(DataError::Truncated {
            what: "labels",
            needed,
            available: bytes.len(),
        });
    }
    let labels = bytes[8..needed].to_vec();
    for (index, &label) in labels.iter().enumerate() {
        if label > 9 {
            return Err(DataError::LabelOutOfRange { label, index });
        }
    }
    Ok(labels)
}

/// Loads an image/label file pair, rejecting count mismatches.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<IdxDataset, DataError> {
    let (images, rows, cols) = parse_idx_images(&std::fs::read(images_path)?)?;
    let labels = parse_idx_labels(&std::fs::read(labels_path)?)?;
    if images.nrows() != labels.len() {
        return Err(DataError::CountMismatch {
            images: images.nrows(),
            labels: labels.len(),
        });
    }
    Ok(IdxDataset {
        images,
        labels,
        rows,
        cols,
    })
}

/// Serializes images back into IDX bytes (fixture tooling; exact inverse of
/// the parser for byte-valued pixels).
pub fn encode_idx_images(pixel_rows: &[Vec<u8>], rows: usize, cols: usize) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(16 + pixel_rows.len() * rows * cols);
    bytes.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    bytes.extend_from_slice(&(pixel_rows.len() as u32).to_be_bytes());
    bytes.extend_from_slice(&(rows as u32).to_be_bytes());
    bytes.extend_from_slice(&(cols as u32).to_be_bytes());
    for r in pixel_rows {
        assert_eq!(r.len(), rows * cols, "pixel row length mismatch");
        bytes.extend_from_slice(r);
    }
    bytes
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(8 + labels.len());
    bytes.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    bytes.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    bytes.extend_from_slice(labels);
    bytes
}

/// Filters a two-digit subset, maps `d1 -> -1` and `d2 -> +1`, shuffles with
/// the seed, and splits into `nodes` contiguous equal batches of
/// `total / nodes` samples each.
pub fn select_and_partition(
    ds: &IdxDataset,
    digits: (u8, u8),
    total: usize,
    nodes: usize,
    seed: u64,
    lambda: f64,
) -> Result<LogisticData, DataError> {
    let (d1, d2) = digits;
    if d1 == d2 || d1 > 9 || d2 > 9 {
        return Err(DataError::BadDigitPair(d1, d2));
    }
    if nodes == 0 || total == 0 || !total.is_multiple_of(nodes) {
        return Err(DataError::NotDivisible { total, nodes });
    }
    let mut pool: Vec<usize> = Vec::new();
    let mut available = [0usize; 2];
    for (idx, &label) in ds.labels.iter().enumerate() {
        if label == d1 {
            available[0] += 1;
            pool.push(idx);
        } else if label == d2 {
            available[1] += 1;
            pool.push(idx);
        }
    }
    if pool.len() < total {
        return Err(DataError::InsufficientSamples {
            d1,
            d2,
            available1: available[0],
            available2: available[1],
            requested: total,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(total);

    let per_node = total / nodes;
    let dim = ds.images.ncols();
    let mut features = Vec::with_capacity(nodes);
    let mut labels = Vec::with_capacity(nodes);
    for chunk in pool.chunks(per_node) {
        let mut block = Array2::zeros((per_node, dim));
        let mut block_labels = Vec::with_capacity(per_node);
        for (row, &sample) in chunk.iter().enumerate() {
            block.row_mut(row).assign(&ds.images.row(sample));
            block_labels.push(if ds.labels[sample] == d1 { -1.0 } else { 1.0 });
        }
        features.push(block);
        labels.push(block_labels);
    }
    Ok(LogisticData::new(features, labels, lambda)?)
}
