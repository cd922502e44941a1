//! Time-surface maps and the negated potential field sampled by the tracker.
//!
//! A time-surface map stores, per pixel, an exponential decay of the time
//! since the last event fired there: `value = 255 * exp(-(t_query - t_last) / tau)`.
//! Values live on the 0..255 scale in double precision; pixels that never
//! fired are exactly 0. Polarity plays no role in `t_last`.

use crate::error::{DevoError, Result};
use crate::event::{Event, EventStream};

/// Sentinel for pixels that never fired.
const NEVER_FIRED: u64 = u64::MAX;

/// Dense per-pixel recency image on the 0..255 scale.
#[derive(Debug, Clone)]
pub struct TimeSurfaceMap {
    width: u32,
    height: u32,
    values: Vec<f64>,
    last_timestamp: Vec<u64>,
    t_query: u64,
    tau_us: f64,
}

/// Build a time-surface map from every event in `stream` evaluated at `t_query`.
pub fn build_tsm(stream: &EventStream, t_query: u64, tau_us: f64) -> Result<TimeSurfaceMap> {
    build_tsm_from_events(
        stream.events(),
        stream.width(),
        stream.height(),
        t_query,
        tau_us,
    )
}

/// Build a time-surface map from an event slice (e.g. a sliding window).
///
/// Events must be within the sensor bounds and have `t_us <= t_query`.
pub fn build_tsm_from_events(
    events: &[Event],
    width: u32,
    height: u32,
    t_query: u64,
    tau_us: f64,
) -> Result<TimeSurfaceMap> {
    if !(tau_us > 0.0) {
        return Err(DevoError::InvalidParameter(format!(
            "tau must be positive, got {tau_us}"
        )));
    }
    let n = width as usize * height as usize;
    let mut last_timestamp = vec![NEVER_FIRED; n];
    for e in events {
        if e.t_us > t_query {
            return Err(DevoError::InvalidInput(format!(
                "event at t={} is later than the query time {t_query}",
                e.t_us
            )));
        }
        let idx = e.y as usize * width as usize + e.x as usize;
        // Streams are time-sorted, so the last write wins and equals t_last.
        last_timestamp[idx] = e.t_us;
    }
    let values = last_timestamp
        .iter()
        .map(|&t_last| {
            if t_last == NEVER_FIRED {
                0.0
            } else {
                let dt = (t_query - t_last) as f64;
                255.0 * (-dt / tau_us).exp()
            }
        })
        .collect();
    Ok(TimeSurfaceMap {
        width,
        height,
        values,
        last_timestamp,
        t_query,
        tau_us,
    })
}

impl TimeSurfaceMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn t_query(&self) -> u64 {
        self.t_query
    }

    pub fn tau_us(&self) -> f64 {
        self.tau_us
    }

    /// Decay value at a pixel, in `[0, 255]`.
    pub fn value(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    /// Timestamp of the last event at a pixel, `None` if it never fired.
    pub fn last_timestamp(&self, x: u32, y: u32) -> Option<u64> {
        match self.last_timestamp[y as usize * self.width as usize + x as usize] {
            NEVER_FIRED => None,
            t => Some(t),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pixels whose value strictly exceeds `delta`, in raster order.
    ///
    /// This is the semi-dense region handed to the mapping module.
    pub fn threshold_mask(&self, delta: f64) -> Result<Vec<(u32, u32)>> {
        if !(0.0..=255.0).contains(&delta) {
            return Err(DevoError::InvalidParameter(format!(
                "threshold must be in [0, 255], got {delta}"
            )));
        }
        let mut mask = Vec::new();
        for y in 0..self.height {
            let row = y as usize * self.width as usize;
            for x in 0..self.width {
                if self.values[row + x as usize] > delta {
                    mask.push((x, y));
                }
            }
        }
        Ok(mask)
    }

    /// Negate into the potential field sampled by the tracker:
    /// `field = 255 - value`, minima on recently active edges.
    pub fn negate(&self) -> PotentialField {
        let values: Vec<f64> = self.values.iter().map(|v| 255.0 - v).collect();
        PotentialField::from_values(self.width, self.height, values)
    }
}

/// Negated time-surface map with precomputed central-difference gradients.
///
/// Supports continuous sub-pixel lookups via bilinear interpolation; both the
/// field and its gradient are immutable after construction and safe to share.
#[derive(Debug, Clone)]
pub struct PotentialField {
    width: u32,
    height: u32,
    values: Vec<f64>,
    grad_x: Vec<f64>,
    grad_y: Vec<f64>,
}

impl PotentialField {
    /// Wrap a raw grid of field values. The gradient is computed once with
    /// central differences (one-sided at the borders).
    pub fn from_values(width: u32, height: u32, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), width as usize * height as usize);
        let w = width as usize;
        let h = height as usize;
        let mut grad_x = vec![0.0; values.len()];
        let mut grad_y = vec![0.0; values.len()];
        for y in 0..h {
            for x in 0..w {
                let xm = x.saturating_sub(1);
                let xp = (x + 1).min(w - 1);
                let ym = y.saturating_sub(1);
                let yp = (y + 1).min(h - 1);
                let idx = y * w + x;
                grad_x[idx] = (values[y * w + xp] - values[y * w + xm]) / (xp - xm).max(1) as f64;
                grad_y[idx] = (values[yp * w + x] - values[ym * w + x]) / (yp - ym).max(1) as f64;
            }
        }
        PotentialField {
            width,
            height,
            values,
            grad_x,
            grad_y,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn value(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    /// True when `(u, v)` lies in the bilinear-samplable domain
    /// `[0, w-1] x [0, h-1]`.
    pub fn in_bounds(&self, u: f64, v: f64) -> bool {
        u >= 0.0 && v >= 0.0 && u <= (self.width - 1) as f64 && v <= (self.height - 1) as f64
    }

    /// Bilinear sample of the field; coordinates are clamped to the border.
    pub fn sample(&self, u: f64, v: f64) -> f64 {
        bilinear(&self.values, self.width, self.height, u, v)
    }

    /// Bilinear sample of the precomputed gradient, `(d/du, d/dv)`.
    pub fn sample_gradient(&self, u: f64, v: f64) -> (f64, f64) {
        (
            bilinear(&self.grad_x, self.width, self.height, u, v),
            bilinear(&self.grad_y, self.width, self.height, u, v),
        )
    }
}

fn bilinear(values: &[f64], width: u32, height: u32, u: f64, v: f64) -> f64 {
    let w = width as usize;
    let h = height as usize;
    let u = u.clamp(0.0, (w - 1) as f64);
    let v = v.clamp(0.0, (h - 1) as f64);
    let x0 = (u.floor() as usize).min(w.saturating_sub(2));
    let y0 = (v.floor() as usize).min(h.saturating_sub(2));
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fu = u - x0 as f64;
    let fv = v - y0 as f64;
    let v00 = values[y0 * w + x0];
    let v10 = values[y0 * w + x1];
    let v01 = values[y1 * w + x0];
    let v11 = values[y1 * w + x1];
    v00 * (1.0 - fu) * (1.0 - fv) + v10 * fu * (1.0 - fv) + v01 * (1.0 - fu) * fv + v11 * fu * fv
}
