use std::fmt;

use num_traits::Zero;

use super::Series;
use crate::error::{Error, Result};
use crate::rational::Q;

/// `λ·ln t + s`, the shape taken by logarithms of `t^λ·(1 + w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    ln_t: Q,
    series: Series,
}

impl LogSeries {
    pub fn new(ln_t: Q, series: Series) -> LogSeries {
        LogSeries { ln_t, series }
    }

    pub fn ln_t(&self) -> &Q {
        &self.ln_t
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn add(&self, other: &LogSeries) -> LogSeries {
        LogSeries { ln_t: &self.ln_t + &other.ln_t, series: self.series.add_ref(&other.series) }
    }

    pub fn sub(&self, other: &LogSeries) -> LogSeries {
        LogSeries { ln_t: &self.ln_t - &other.ln_t, series: self.series.sub_ref(&other.series) }
    }

    pub fn scale(&self, c: &Q) -> LogSeries {
        LogSeries { ln_t: &self.ln_t * c, series: self.series.scale(c) }
    }

    /// ∂/∂t; the `ln t` part contributes `λ/t`.
    pub fn derive_t(&self) -> Series {
        let d = self.series.derive_t();
        if self.ln_t.is_zero() {
            return d;
        }
        let g = self.series.grading();
        d.add_ref(&Series::t_pow2(g, -2).scale(&self.ln_t))
    }

    pub fn derive_face(&self, k: u16) -> Series {
        self.series.derive_face(k)
    }

    /// Drop the log marker; fails unless it cancelled to zero.
    pub fn into_series(self) -> Result<Series> {
        if self.ln_t.is_zero() {
            Ok(self.series)
        } else {
            Err(Error::LogMarkerNotCancelled(format!("{}·ln t", self.ln_t)))
        }
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ln_t.is_zero() {
            write!(f, "{}", self.series)
        } else {
            write!(f, "{}*ln(t) + {}", self.ln_t, self.series)
        }
    }
}
