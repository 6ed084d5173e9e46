/// Continuous extension of one accepted step on `[t0, t0 + h]`.
#[derive(Clone, Debug)]
pub struct DenseSegment {
    t0: f64,
    h: f64,
    // Five coefficients per component, component-major.
    coeffs: Vec<f64>,
}

impl DenseSegment {
    pub(crate) fn new(t0: f64, h: f64, coeffs: Vec<f64>) -> Self {
        DenseSegment { t0, h, coeffs }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let s = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        let s1 = 1.0 - s;
        for (i, y) in out.iter_mut().enumerate() {
            let c = &self.coeffs[5 * i..5 * i + 5];
            *y = c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * c[4])));
        }
    }

    /// State at the end of the segment.
    pub fn end_state(&self, out: &mut [f64]) {
        for (i, y) in out.iter_mut().enumerate() {
            *y = self.coeffs[5 * i] + self.coeffs[5 * i + 1];
        }
    }
}

/// Piecewise dense output over a sequence of contiguous accepted steps.
#[derive(Clone, Debug)]
pub struct DenseOutput {
    dim: usize,
    t_start: f64,
    y_start: Vec<f64>,
    segments: Vec<DenseSegment>,
}

impl DenseOutput {
    pub fn new(dim: usize, t_start: f64, y_start: &[f64]) -> Self {
        DenseOutput {
            dim,
            t_start,
            y_start: y_start.to_vec(),
            segments: Vec::new(),
        }
    }

    pub fn push(&mut self, segment: DenseSegment) {
        self.segments.push(segment);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.segments.last().map_or(self.t_start, |s| s.t1())
    }

    pub fn segments(&self) -> &[DenseSegment] {
        &self.segments
    }

    /// Step boundaries `t_0 < t_1 < ...` including the start time.
    pub fn step_times(&self) -> Vec<f64> {
        std::iter::once(self.t_start)
            .chain(self.segments.iter().map(|s| s.t1()))
            .collect()
    }

    /// Evaluates the interpolant; `t` is clamped to the covered interval.
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        if self.segments.is_empty() || t <= self.t_start {
            out.copy_from_slice(&self.y_start);
            return;
        }
        let idx = self
            .segments
            .partition_point(|s| s.t1() < t)
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        if t >= seg.t1() {
            seg.end_state(out);
        } else {
            seg.eval(t, out);
        }
    }

    pub fn eval_vec(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval(t, &mut out);
        out
    }
}
