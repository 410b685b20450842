use super::MaskError;
use crate::{BinaryMask, Scalar};

/// Squared Euclidean distance from each pixel center to the nearest set
/// pixel center; `f64::INFINITY` everywhere when the mask is empty.
///
/// Exact separable transform (lower envelope of parabolas, one pass over
/// columns then one over rows).
pub fn distance_transform_sq(mask: &BinaryMask) -> Vec<f64> {
    let (w, h) = (mask.width(), mask.height());
    let mut grid: Vec<f64> = mask
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { f64::INFINITY })
        .collect();
    let mut scratch = Envelope::with_capacity(w.max(h));
    let mut line = vec![0.0; h];
    for c in 0..w {
        for r in 0..h {
            line[r] = grid[r * w + c];
        }
        scratch.transform(&mut line);
        for r in 0..h {
            grid[r * w + c] = line[r];
        }
    }
    for r in 0..h {
        scratch.transform(&mut grid[r * w..(r + 1) * w]);
    }
    grid
}

struct Envelope {
    sites: Vec<usize>,
    bounds: Vec<f64>,
    out: Vec<f64>,
}

impl Envelope {
    fn with_capacity(n: usize) -> Self {
        Self {
            sites: Vec::with_capacity(n),
            bounds: Vec::with_capacity(n + 1),
            out: Vec::with_capacity(n),
        }
    }

    /// In-place 1D transform: `f[q] <- min_p (q - p)^2 + f[p]`.
    fn transform(&mut self, f: &mut [f64]) {
        self.sites.clear();
        self.bounds.clear();
        for (q, &fq) in f.iter().enumerate() {
            if !fq.is_finite() {
                continue;
            }
            let qf = q as f64;
            while let Some(&p) = self.sites.last() {
                let pf = p as f64;
                let s = ((fq + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf));
                if s <= *self.bounds.last().expect("one bound per site") {
                    self.sites.pop();
                    self.bounds.pop();
                } else {
                    self.sites.push(q);
                    self.bounds.push(s);
                    break;
                }
            }
            if self.sites.is_empty() {
                self.sites.push(q);
                self.bounds.push(f64::NEG_INFINITY);
            }
        }
        if self.sites.is_empty() {
            return;
        }
        self.out.clear();
        let mut k = 0;
        for q in 0..f.len() {
            let qf = q as f64;
            while k + 1 < self.sites.len() && self.bounds[k + 1] < qf {
                k += 1;
            }
            let p = self.sites[k];
            let d = qf - p as f64;
            self.out.push(d * d + f[p]);
        }
        f.copy_from_slice(&self.out);
    }
}

/// Disk dilation: a pixel is set iff some set pixel center lies within
/// `radius` mask pixels of it.
pub fn dilate<T: Scalar>(mask: &BinaryMask, radius: T) -> Result<BinaryMask, MaskError> {
    if !(radius >= T::zero()) {
        return Err(MaskError::NegativeRadius);
    }
    let r = radius.as_f64();
    let r2 = r * r;
    let bits = distance_transform_sq(mask)
        .into_iter()
        .map(|d2| d2 <= r2)
        .collect();
    Ok(BinaryMask::from_bits(mask.width(), mask.height(), bits).expect("same dimensions"))
}
