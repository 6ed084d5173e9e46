use super::{DenseSegment, IntegratorStats, OdeError, OdeSystem, Tolerances};

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// Step-size controller.
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Summary of one accepted step.
#[derive(Clone, Debug)]
pub struct StepInfo {
    pub t_old: f64,
    pub t_new: f64,
    pub segment: DenseSegment,
}

/// A Dormand–Prince stepper driven one accepted step at a time, so callers
/// can inspect the state between steps (e.g. to stop on blow-up).
pub struct Dopri5<'a, S: OdeSystem> {
    sys: &'a S,
    tol: Tolerances,
    t: f64,
    t_end: f64,
    y: Vec<f64>,
    k: [Vec<f64>; 7],
    y_stage: Vec<f64>,
    y_new: Vec<f64>,
    h: f64,
    h_min: f64,
    max_steps: usize,
    fac_old: f64,
    last_rejected: bool,
    stats: IntegratorStats,
}

impl<'a, S: OdeSystem> Dopri5<'a, S> {
    pub fn new(sys: &'a S, t0: f64, y0: &[f64], t_end: f64, tol: Tolerances) -> Self {
        let n = sys.dim();
        assert_eq!(y0.len(), n, "initial state has wrong length");
        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        sys.eval(t0, y0, &mut k[0]);
        let mut stepper = Dopri5 {
            sys,
            tol,
            t: t0,
            t_end,
            y: y0.to_vec(),
            k,
            y_stage: vec![0.0; n],
            y_new: vec![0.0; n],
            h: 0.0,
            h_min: 1e-14 * (t_end - t0).abs(),
            max_steps: 10_000_000,
            fac_old: 1e-4,
            last_rejected: false,
            stats: IntegratorStats {
                evaluations: 1,
                ..Default::default()
            },
        };
        stepper.h = stepper.initial_step();
        stepper
    }

    /// Accepted steps smaller than this abort with [`OdeError::StepSizeTooSmall`].
    pub fn with_min_step(mut self, h_min: f64) -> Self {
        self.h_min = h_min;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn stats(&self) -> IntegratorStats {
        self.stats
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.tol.atol + self.tol.rtol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self) -> f64 {
        let n = self.y.len().max(1) as f64;
        let span = (self.t_end - self.t).abs();
        let f0 = &self.k[0];
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for (yi, fi) in self.y.iter().zip(f0) {
            let sk = self.tol.atol + self.tol.rtol * yi.abs();
            dnf += (fi / sk).powi(2);
            dny += (yi / sk).powi(2);
        }
        dnf = (dnf / n).sqrt();
        dny = (dny / n).sqrt();
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            0.01 * dny / dnf
        };
        h = h.min(span);
        for (i, yi) in self.y.iter().enumerate() {
            self.y_stage[i] = yi + h * f0[i];
        }
        let mut f1 = vec![0.0; self.y.len()];
        self.sys.eval(self.t + h, &self.y_stage, &mut f1);
        self.stats.evaluations += 1;
        let mut der2 = 0.0;
        for (i, yi) in self.y.iter().enumerate() {
            let sk = self.tol.atol + self.tol.rtol * yi.abs();
            der2 += ((f1[i] - f0[i]) / sk).powi(2);
        }
        der2 = (der2 / n).sqrt() / h;
        let der12 = der2.abs().max(dnf);
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(0.2)
        };
        (100.0 * h).min(h1).min(span).max(self.h_min.max(f64::MIN_POSITIVE))
    }

    fn stage(&mut self, coeffs: &[(usize, f64)], h: f64) {
        let n = self.y.len();
        for i in 0..n {
            let mut acc = 0.0;
            for &(j, a) in coeffs {
                acc += a * self.k[j][i];
            }
            self.y_stage[i] = self.y[i] + h * acc;
        }
    }

    /// Performs one accepted step (retrying rejected attempts) and returns its
    /// dense-output segment.
    pub fn step(&mut self) -> Result<StepInfo, OdeError> {
        let n = self.y.len();
        loop {
            if self.stats.accepted + self.stats.rejected >= self.max_steps {
                return Err(OdeError::TooManySteps(self.max_steps));
            }
            let remaining = self.t_end - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < self.h_min && !last {
                return Err(OdeError::StepSizeTooSmall { t: self.t, h });
            }
            let t = self.t;

            self.stage(&[(0, A21)], h);
            self.sys.eval(t + C2 * h, &self.y_stage, &mut self.k[1]);
            self.stage(&[(0, A31), (1, A32)], h);
            self.sys.eval(t + C3 * h, &self.y_stage, &mut self.k[2]);
            self.stage(&[(0, A41), (1, A42), (2, A43)], h);
            self.sys.eval(t + C4 * h, &self.y_stage, &mut self.k[3]);
            self.stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], h);
            self.sys.eval(t + C5 * h, &self.y_stage, &mut self.k[4]);
            self.stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], h);
            self.sys.eval(t + h, &self.y_stage, &mut self.k[5]);
            for i in 0..n {
                self.y_new[i] = self.y[i]
                    + h * (A71 * self.k[0][i]
                        + A73 * self.k[2][i]
                        + A74 * self.k[3][i]
                        + A75 * self.k[4][i]
                        + A76 * self.k[5][i]);
            }
            self.sys.eval(t + h, &self.y_new, &mut self.k[6]);
            self.stats.evaluations += 6;

            let mut err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * self.k[0][i]
                        + E3 * self.k[2][i]
                        + E4 * self.k[3][i]
                        + E5 * self.k[4][i]
                        + E6 * self.k[5][i]
                        + E7 * self.k[6][i]);
                let sk = self.scale(self.y[i], self.y_new[i]);
                err += (e / sk).powi(2);
            }
            err = (err / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                self.stats.rejected += 1;
                self.last_rejected = true;
                self.h = h * FAC_MIN;
                if self.h < self.h_min {
                    return Err(OdeError::NonFinite(t));
                }
                continue;
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                let mut fac = fac11 / self.fac_old.powf(BETA);
                fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h / fac;
                if self.last_rejected {
                    h_new = h_new.min(h);
                }
                self.fac_old = err.max(1e-4);
                self.last_rejected = false;
                self.stats.accepted += 1;

                let segment = self.dense_segment(t, h);
                let t_new = if last { self.t_end } else { t + h };
                std::mem::swap(&mut self.y, &mut self.y_new);
                let (first, rest) = self.k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
                self.t = t_new;
                self.h = h_new;
                return Ok(StepInfo {
                    t_old: t,
                    t_new,
                    segment,
                });
            }
            self.stats.rejected += 1;
            self.last_rejected = true;
            self.h = h / (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }

    fn dense_segment(&self, t: f64, h: f64) -> DenseSegment {
        let n = self.y.len();
        let mut coeffs = vec![0.0; 5 * n];
        for i in 0..n {
            let y0 = self.y[i];
            let y1 = self.y_new[i];
            let ydiff = y1 - y0;
            let bspl = h * self.k[0][i] - ydiff;
            coeffs[5 * i] = y0;
            coeffs[5 * i + 1] = ydiff;
            coeffs[5 * i + 2] = bspl;
            coeffs[5 * i + 3] = ydiff - h * self.k[6][i] - bspl;
            coeffs[5 * i + 4] = h
                * (D1 * self.k[0][i]
                    + D3 * self.k[2][i]
                    + D4 * self.k[3][i]
                    + D5 * self.k[4][i]
                    + D6 * self.k[5][i]
                    + D7 * self.k[6][i]);
        }
        DenseSegment::new(t, h, coeffs)
    }
}
