//! Exact evaluation of the discrete memory term
//! `Hₙ = Σ_{k<n} g_{n-k} uᵏ` for every step `n` of a march.
//!
//! Summing the history directly costs `O(N²)` vector operations over a run.
//! Instead each pair `(k, n)` with `k < n` is assigned to the unique aligned
//! dyadic block `[a, a + 2B)` in which `k` lies in the left half and `n` in
//! the right half. As soon as a left half is complete its contribution to the
//! whole right half is added at once, as a Toeplitz product evaluated by FFT
//! for large blocks and directly for small ones. Nothing is approximated; the
//! total cost is `O(N log² N)` per spatial unknown.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Blocks up to this size are convolved directly.
const DIRECT_MAX: usize = 32;
/// Spatial unknowns gathered together when transposing a block.
const CHUNK: usize = 8;

struct Level {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel_hat: Vec<Complex<f64>>,
}

pub(crate) struct MemoryConvolution {
    dim: usize,
    capacity: usize,
    kernel: Vec<f64>,
    acc: Vec<f64>,
    pushed: usize,
    levels: Vec<Option<Level>>,
    planner: FftPlanner<f64>,
    buf: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl MemoryConvolution {
    /// `kernel(j)` supplies `g_j` for `j ≥ 1`; outputs are kept for
    /// `n < capacity`.
    pub(crate) fn new(dim: usize, capacity: usize, kernel: impl Fn(usize) -> f64) -> Self {
        let len = 2 * capacity.next_power_of_two().max(1);
        let kernel = (0..len).map(|j| if j == 0 { 0.0 } else { kernel(j) }).collect();
        Self {
            dim,
            capacity,
            kernel,
            acc: vec![0.0; capacity * dim],
            pushed: 0,
            levels: Vec::new(),
            planner: FftPlanner::new(),
            buf: Vec::new(),
            scratch: Vec::new(),
        }
    }

    /// Memory term for step `n`; complete once frames `0..n` were pushed.
    pub(crate) fn term(&self, n: usize) -> &[f64] {
        debug_assert!(n <= self.pushed);
        &self.acc[n * self.dim..(n + 1) * self.dim]
    }

    /// Registers frame `k = frames.len() - 1`.
    pub(crate) fn push<S: AsRef<[f64]>>(&mut self, frames: &[S]) {
        let k = frames.len() - 1;
        debug_assert_eq!(k, self.pushed);
        self.pushed += 1;
        let done = k + 1;
        let mut level = 0;
        let mut block = 1usize;
        while block <= done {
            if done.is_multiple_of(block) && (done / block) % 2 == 1 {
                let a = done - block;
                if a + block < self.capacity {
                    if block <= DIRECT_MAX {
                        self.direct(frames, a, block);
                    } else {
                        self.via_fft(frames, a, block, level);
                    }
                }
            }
            level += 1;
            block <<= 1;
        }
    }

    fn direct<S: AsRef<[f64]>>(&mut self, frames: &[S], a: usize, block: usize) {
        let dim = self.dim;
        let end = (a + 2 * block).min(self.capacity);
        for n in a + block..end {
            let row = &mut self.acc[n * dim..(n + 1) * dim];
            for (k, frame) in frames.iter().enumerate().take(a + block).skip(a) {
                let g = self.kernel[n - k];
                for (r, u) in row.iter_mut().zip(frame.as_ref()) {
                    *r += g * u;
                }
            }
        }
    }

    fn ensure_level(&mut self, level: usize, block: usize) {
        if self.levels.len() <= level {
            self.levels.resize_with(level + 1, || None);
        }
        if self.levels[level].is_none() {
            let len = 2 * block;
            let forward = self.planner.plan_fft_forward(len);
            let inverse = self.planner.plan_fft_inverse(len);
            let mut kernel_hat: Vec<Complex<f64>> =
                self.kernel[..len].iter().map(|&g| Complex::new(g, 0.0)).collect();
            let mut scratch = vec![Complex::new(0.0, 0.0); forward.get_inplace_scratch_len()];
            forward.process_with_scratch(&mut kernel_hat, &mut scratch);
            let scale = 1.0 / len as f64;
            kernel_hat.iter_mut().for_each(|c| *c *= scale);
            self.levels[level] = Some(Level {
                len,
                forward,
                inverse,
                kernel_hat,
            });
        }
    }

    fn via_fft<S: AsRef<[f64]>>(&mut self, frames: &[S], a: usize, block: usize, level: usize) {
        let dim = self.dim;
        let capacity = self.capacity;
        self.ensure_level(level, block);
        let lvl = self.levels[level].take().expect("level initialised");
        let (len, forward, inverse, kernel_hat) = (lvl.len, &lvl.forward, &lvl.inverse, &lvl.kernel_hat);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        self.scratch.resize(scratch_len, Complex::new(0.0, 0.0));
        self.buf.resize(len, Complex::new(0.0, 0.0));
        let end = (a + 2 * block).min(capacity);
        let mut gathered = vec![0.0; CHUNK * block];
        let mut results = vec![0.0; CHUNK * block];

        let mut start = 0;
        while start < dim {
            let width = CHUNK.min(dim - start);
            for j in 0..block {
                let src = &frames[a + j].as_ref()[start..start + width];
                for (c, v) in src.iter().enumerate() {
                    gathered[c * block + j] = *v;
                }
            }
            // two real sequences share one complex transform
            let mut c = 0;
            while c < width {
                let pair = c + 1 < width;
                for j in 0..block {
                    let im = if pair { gathered[(c + 1) * block + j] } else { 0.0 };
                    self.buf[j] = Complex::new(gathered[c * block + j], im);
                }
                self.buf[block..].iter_mut().for_each(|z| *z = Complex::new(0.0, 0.0));
                forward.process_with_scratch(&mut self.buf, &mut self.scratch);
                for (z, k) in self.buf.iter_mut().zip(kernel_hat) {
                    *z *= k;
                }
                inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
                for j in 0..block {
                    let z = self.buf[block + j];
                    results[c * block + j] = z.re;
                    if pair {
                        results[(c + 1) * block + j] = z.im;
                    }
                }
                c += 2;
            }
            for n in a + block..end {
                let j = n - a - block;
                let row = &mut self.acc[n * dim + start..n * dim + start + width];
                for (cc, r) in row.iter_mut().enumerate() {
                    *r += results[cc * block + j];
                }
            }
            start += width;
        }
        self.levels[level] = Some(lvl);
    }
}
