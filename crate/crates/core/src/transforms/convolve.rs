//! One-dimensional line convolutions applied separably over a 2D grid.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::real::Real;

/// `ln(1e16)`: Gaussian taps are cut where they fall below 1e-16 of the peak.
const TRUNCATION_LOG: f64 = 36.841_361_487_904_734;

/// Symmetric taps `exp(-(jΔ)²/width)`, `j = -h..=h`, normalized to unit sum.
///
/// `width` is `R - S`, i.e. twice the per-axis variance. The half-length is
/// capped at `max_half` because taps reaching further than the window span
/// never touch a sample.
pub(crate) fn gaussian_taps<T: Real>(width: T, spacing: T, max_half: usize) -> Vec<T> {
    let radius = (width * T::lit(TRUNCATION_LOG)).sqrt();
    let half = (radius / spacing)
        .ceil()
        .to_usize()
        .unwrap_or(max_half)
        .min(max_half);
    let mut taps: Vec<T> = (0..=2 * half)
        .map(|k| {
            let d = T::lit(k as f64 - half as f64) * spacing;
            (-(d * d) / width).exp()
        })
        .collect();
    let total: T = crate::real::compensated_sum(taps.iter().copied());
    for t in &mut taps {
        *t = *t / total;
    }
    taps
}

/// Convolution engine for the smoothing transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Zero-padded FFT convolution.
    #[default]
    Spectral,
    /// Direct truncated sum.
    Direct,
}

/// Convolves every length-`n` line of `data` with `taps` (zero outside the
/// line), writing into a new buffer.
pub(crate) fn convolve_lines<T: Real>(
    data: &[T],
    n: usize,
    taps: &[T],
    backend: Backend,
) -> Vec<T> {
    if taps.len() == 1 {
        return data.iter().map(|&v| v * taps[0]).collect();
    }
    match backend {
        Backend::Direct => direct_lines(data, n, taps),
        Backend::Spectral => spectral_lines(data, n, taps),
    }
}

fn direct_lines<T: Real>(data: &[T], n: usize, taps: &[T]) -> Vec<T> {
    let half = taps.len() / 2;
    let mut out = vec![T::zero(); data.len()];
    out.par_chunks_mut(n)
        .zip(data.par_chunks(n))
        .for_each(|(dst, src)| {
            for (i, d) in dst.iter_mut().enumerate() {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(n - 1);
                let mut acc = T::zero();
                for (k, &s) in src[lo..=hi].iter().enumerate() {
                    acc = acc + taps[lo + k + half - i] * s;
                }
                *d = acc;
            }
        });
    out
}

/// Smallest `m ≥ n` whose only prime factors are 2, 3 and 5.
fn fast_length(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for f in [2, 3, 5] {
            while r.is_multiple_of(f) {
                r /= f;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

fn spectral_lines<T: Real>(data: &[T], n: usize, taps: &[T]) -> Vec<T> {
    let half = taps.len() / 2;
    let m = fast_length(n + half);
    let mut planner = FftPlanner::<T>::new();
    let forward: Arc<dyn Fft<T>> = planner.plan_fft_forward(m);
    let inverse: Arc<dyn Fft<T>> = planner.plan_fft_inverse(m);

    // Kernel spectrum. The taps are symmetric, so the spectrum is real.
    let mut kernel = vec![Complex::new(T::zero(), T::zero()); m];
    for (k, &t) in taps.iter().enumerate() {
        let offset = (k as isize - half as isize).rem_euclid(m as isize) as usize;
        kernel[offset].re = kernel[offset].re + t;
    }
    forward.process(&mut kernel);
    let scale = T::lit(1.0 / m as f64);
    let kernel: Vec<T> = kernel.iter().map(|c| c.re * scale).collect();
    let scratch_len = forward
        .get_inplace_scratch_len()
        .max(inverse.get_inplace_scratch_len());

    let mut out = vec![T::zero(); data.len()];
    // Two real lines ride in one complex transform (real and imaginary part).
    out.par_chunks_mut(2 * n)
        .zip(data.par_chunks(2 * n))
        .for_each_init(
            || {
                (
                    vec![Complex::new(T::zero(), T::zero()); m],
                    vec![Complex::new(T::zero(), T::zero()); scratch_len],
                )
            },
            |(buf, scratch), (dst, src)| {
                let pair = src.len() == 2 * n;
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = if i < n {
                        Complex::new(src[i], if pair { src[n + i] } else { T::zero() })
                    } else {
                        Complex::new(T::zero(), T::zero())
                    };
                }
                forward.process_with_scratch(buf, scratch);
                for (b, &k) in buf.iter_mut().zip(&kernel) {
                    *b = *b * k;
                }
                inverse.process_with_scratch(buf, scratch);
                for i in 0..n {
                    dst[i] = buf[i].re;
                    if pair {
                        dst[n + i] = buf[i].im;
                    }
                }
            },
        );
    out
}

/// Row-major `rows × cols` to `cols × rows`.
pub(crate) fn transpose<T: Real>(data: &[T], rows: usize, cols: usize) -> Vec<T> {
    const BLOCK: usize = 32;
    let mut out = vec![T::zero(); data.len()];
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    out[c * rows + r] = data[r * cols + c];
                }
            }
        }
    }
    out
}
