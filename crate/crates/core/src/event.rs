//! Event stream representation.
//!
//! A single event is an asynchronous per-pixel brightness-change measurement
//! `(x, y, t, polarity)`. Streams are kept sorted by timestamp with stable
//! order for equal timestamps so that downstream consumers can window them
//! with binary searches.

use crate::error::{DevoError, Result};

/// Sign of the brightness change that triggered an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    /// Map the on-disk encoding (`0` / `1`) to a polarity.
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Polarity::Negative),
            1 => Some(Polarity::Positive),
            _ => None,
        }
    }

    pub fn to_bit(self) -> u8 {
        match self {
            Polarity::Negative => 0,
            Polarity::Positive => 1,
        }
    }

    /// Signed value, `-1` or `+1`.
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Negative => -1,
            Polarity::Positive => 1,
        }
    }
}

/// A single brightness-change event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    /// Pixel column.
    pub x: u16,
    /// Pixel row.
    pub y: u16,
    /// Timestamp in microseconds, monotone within a stream.
    pub t_us: u64,
    /// Brightness-change sign.
    pub polarity: Polarity,
}

impl Event {
    pub fn new(x: u16, y: u16, t_us: u64, polarity: Polarity) -> Self {
        Event { x, y, t_us, polarity }
    }
}

/// An ordered sequence of events with the sensor geometry they came from.
#[derive(Debug, Clone)]
pub struct EventStream {
    events: Vec<Event>,
    width: u32,
    height: u32,
}

impl EventStream {
    /// Build a stream from events already sorted by timestamp.
    ///
    /// Rejects out-of-bounds pixels and timestamp regressions.
    pub fn new(events: Vec<Event>, width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(DevoError::InvalidParameter(format!(
                "sensor size must be positive, got {width}x{height}"
            )));
        }
        let mut last_t = 0u64;
        for (i, e) in events.iter().enumerate() {
            if u32::from(e.x) >= width || u32::from(e.y) >= height {
                return Err(DevoError::InvalidInput(format!(
                    "event {i} at ({}, {}) outside {width}x{height} sensor",
                    e.x, e.y
                )));
            }
            if e.t_us < last_t {
                return Err(DevoError::InvalidInput(format!(
                    "event {i} timestamp {} decreases below {}",
                    e.t_us, last_t
                )));
            }
            last_t = e.t_us;
        }
        Ok(EventStream { events, width, height })
    }

    /// Build a stream from unsorted events; sorting is stable so equal
    /// timestamps preserve input order.
    pub fn from_unsorted(mut events: Vec<Event>, width: u32, height: u32) -> Result<Self> {
        events.sort_by_key(|e| e.t_us);
        EventStream::new(events, width, height)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Index of the first event with `t_us > t`, i.e. events `[0, idx)` have
    /// timestamps `<= t`.
    pub fn partition_at(&self, t: u64) -> usize {
        self.events.partition_point(|e| e.t_us <= t)
    }

    /// Events with timestamps in the inclusive window `[t0, t1]`.
    pub fn window(&self, t0: u64, t1: u64) -> &[Event] {
        let start = self.events.partition_point(|e| e.t_us < t0);
        let end = self.events.partition_point(|e| e.t_us <= t1);
        &self.events[start..end.max(start)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(x: u16, y: u16, t: u64) -> Event {
        Event::new(x, y, t, Polarity::Positive)
    }

    #[test]
    fn rejects_out_of_bounds() {
        let err = EventStream::new(vec![ev(4, 0, 0)], 4, 4);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_timestamp_regression() {
        let err = EventStream::new(vec![ev(0, 0, 10), ev(0, 0, 5)], 4, 4);
        assert!(err.is_err());
    }

    #[test]
    fn stable_sort_preserves_equal_timestamp_order() {
        let events = vec![
            Event::new(1, 1, 50, Polarity::Positive),
            Event::new(2, 2, 50, Polarity::Negative),
            Event::new(0, 0, 10, Polarity::Positive),
        ];
        let stream = EventStream::from_unsorted(events, 4, 4).unwrap();
        let ts: Vec<_> = stream.events().iter().map(|e| (e.t_us, e.x)).collect();
        assert_eq!(ts, vec![(10, 0), (50, 1), (50, 2)]);
    }

    #[test]
    fn window_is_inclusive() {
        let stream =
            EventStream::new(vec![ev(0, 0, 10), ev(1, 0, 20), ev(2, 0, 30)], 4, 4).unwrap();
        let w = stream.window(10, 20);
        assert_eq!(w.len(), 2);
        assert_eq!(stream.window(11, 19).len(), 0);
        assert_eq!(stream.partition_at(20), 2);
    }
}
