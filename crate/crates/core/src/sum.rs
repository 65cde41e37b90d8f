//! Order-independent-ish accumulation for quadrature sums.
//!
//! Neumaier's variant of compensated summation. Parallel loops in this crate
//! only ever parallelize over *outputs*; each output is reduced sequentially in
//! node order, so results are bit-for-bit reproducible across thread counts.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_f64<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = NeumaierSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

pub fn sum_c64<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    let mut s = ComplexSum::new();
    for z in it {
        s.add(z);
    }
    s.value()
}
