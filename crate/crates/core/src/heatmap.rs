//! Detector heatmaps, thresholding and node-point extraction.
//!
//! The heatmap is the hand-off from the upstream keypoint detector. Pixel
//! `(c, r)` is sampled at image coordinate `(c, r)`; centroids use the same
//! convention, so rendered lattices and detected nodes share one frame.

use std::collections::VecDeque;

use thiserror::Error;

use crate::{Point2, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeatmapError {
    #[error("heatmap dimensions must be at least 1x1, got {0}x{1}")]
    EmptyDimensions(usize, usize),
    #[error("expected {expected} values for the given dimensions, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("heatmap value at index {0} is outside [0, 1]")]
    ValueOutOfRange(usize),
    #[error("mask is {mask_w}x{mask_h} but heatmap is {hm_w}x{hm_h}")]
    DimensionMismatch {
        mask_w: usize,
        mask_h: usize,
        hm_w: usize,
        hm_h: usize,
    },
}

/// Row-major grid of node likelihoods in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap<T> {
    width: usize,
    height: usize,
    values: Vec<T>,
}

impl<T: Scalar> Heatmap<T> {
    pub fn new(width: usize, height: usize, values: Vec<T>) -> Result<Self, HeatmapError> {
        if width == 0 || height == 0 {
            return Err(HeatmapError::EmptyDimensions(width, height));
        }
        if values.len() != width * height {
            return Err(HeatmapError::SizeMismatch {
                expected: width * height,
                got: values.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(*v >= T::zero() && *v <= T::one()))
        {
            return Err(HeatmapError::ValueOutOfRange(i));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, HeatmapError> {
        Self::new(width, height, vec![T::zero(); width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> T {
        self.values[row * self.width + col]
    }
}

/// Row-major boolean raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Option<Self> {
        (bits.len() == width * height).then_some(Self {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.bits[row * self.width + col]
    }

    /// Out-of-range coordinates read as clear.
    #[inline]
    pub fn get_signed(&self, col: i64, row: i64) -> bool {
        col >= 0
            && row >= 0
            && (col as usize) < self.width
            && (row as usize) < self.height
            && self.get(col as usize, row as usize)
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, v: bool) {
        self.bits[row * self.width + col] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// True when every set bit of `other` is also set here.
    pub fn contains(&self, other: &BinaryMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(a, b)| *a || !*b)
    }

    /// 8-connected components as lists of `(col, row)`, in scan order of their first pixel.
    pub fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen = vec![false; self.bits.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.bits.len() {
            if !self.bits[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(i) = queue.pop_front() {
                let (c, r) = (i % self.width, i / self.width);
                comp.push((c, r));
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        let (nc, nr) = (c as i64 + dc, r as i64 + dr);
                        if self.get_signed(nc, nr) {
                            let j = nr as usize * self.width + nc as usize;
                            if !seen[j] {
                                seen[j] = true;
                                queue.push_back(j);
                            }
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

/// A detected lattice node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePoint<T> {
    pub id: usize,
    pub position: Point2<T>,
    /// Peak heatmap value inside the blob.
    pub score: T,
}

/// Sets a bit wherever the heatmap strictly exceeds `tau`.
pub fn threshold_points<T: Scalar>(hm: &Heatmap<T>, tau: T) -> BinaryMask {
    BinaryMask {
        width: hm.width,
        height: hm.height,
        bits: hm.values.iter().map(|v| *v > tau).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CentroidWeighting {
    /// Mean of the blob's pixel positions.
    #[default]
    Unweighted,
    /// Heatmap-weighted mean.
    Intensity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentroidOptions {
    pub min_blob_area: usize,
    pub weighting: CentroidWeighting,
}

impl Default for CentroidOptions {
    fn default() -> Self {
        Self {
            min_blob_area: 2,
            weighting: CentroidWeighting::Unweighted,
        }
    }
}

/// One node per 8-connected blob with at least `min_blob_area` pixels, ids
/// assigned in `(y, x)` order of the centroids.
pub fn extract_centroids<T: Scalar>(
    mask: &BinaryMask,
    hm: &Heatmap<T>,
    opts: &CentroidOptions,
) -> Result<Vec<NodePoint<T>>, HeatmapError> {
    if mask.width != hm.width || mask.height != hm.height {
        return Err(HeatmapError::DimensionMismatch {
            mask_w: mask.width,
            mask_h: mask.height,
            hm_w: hm.width,
            hm_h: hm.height,
        });
    }
    let mut nodes: Vec<NodePoint<T>> = mask
        .components()
        .into_iter()
        .filter(|comp| comp.len() >= opts.min_blob_area)
        .map(|comp| {
            let mut peak = T::zero();
            let (mut sx, mut sy, mut sw) = (T::zero(), T::zero(), T::zero());
            for &(c, r) in &comp {
                let v = hm.get(c, r);
                peak = peak.max(v);
                let w = match opts.weighting {
                    CentroidWeighting::Unweighted => T::one(),
                    CentroidWeighting::Intensity => v,
                };
                sx = sx + w * T::from_index(c);
                sy = sy + w * T::from_index(r);
                sw = sw + w;
            }
            NodePoint {
                id: 0,
                position: Point2::new(sx / sw, sy / sw),
                score: peak,
            }
        })
        .collect();
    nodes.sort_by(|a, b| a.position.cmp_yx(&b.position));
    for (i, n) in nodes.iter_mut().enumerate() {
        n.id = i;
    }
    Ok(nodes)
}

/// Threshold and extract in one step.
pub fn detect_nodes<T: Scalar>(
    hm: &Heatmap<T>,
    tau: T,
    opts: &CentroidOptions,
) -> Vec<NodePoint<T>> {
    let mask = threshold_points(hm, tau);
    extract_centroids(&mask, hm, opts).expect("mask derived from heatmap has matching dimensions")
}
