// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Dormand-Prince 5(4) stepping for complex linear ODEs.

use crate::error::{Error, Result};
use crate::fock::C64;

pub(crate) trait OdeSystem {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]);
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct Dopri5 {
    rel_tol: f64,
    abs_tol: f64,
    k: [Vec<C64>; 7],
    stage: Vec<C64>,
}

impl Dopri5 {
    pub fn new(dim: usize, rel_tol: f64, abs_tol: f64) -> Self {
        let zero = vec![C64::new(0.0, 0.0); dim];
        Self {
            rel_tol,
            abs_tol,
            k: std::array::from_fn(|_| zero.clone()),
            stage: zero,
        }
    }

    /// One step of size `h`; writes the 5th-order solution and returns the
    /// RMS error norm scaled by the tolerances.
    pub fn step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &[C64], h: f64, y_new: &mut [C64]) -> f64 {
        let n = y.len();
        sys.rhs(t, y, &mut self.k[0]);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &a) in A[s][..s].iter().enumerate() {
                    if a != 0.0 {
                        acc += self.k[j][i] * a;
                    }
                }
                self.stage[i] = y[i] + acc * h;
            }
            let (_, rest) = self.k.split_at_mut(s);
            sys.rhs(t + C[s] * h, &self.stage, &mut rest[0]);
        }
        let mut sum = 0.0;
        for i in 0..n {
            let mut inc = C64::new(0.0, 0.0);
            let mut err = C64::new(0.0, 0.0);
            for s in 0..7 {
                if B[s] != 0.0 {
                    inc += self.k[s][i] * B[s];
                }
                err += self.k[s][i] * E[s];
            }
            y_new[i] = y[i] + inc * h;
            let scale = self.abs_tol + self.rel_tol * y[i].norm().max(y_new[i].norm());
            let e = (err * h).norm() / scale;
            sum += e * e;
        }
        let norm = (sum / n.max(1) as f64).sqrt();
        if norm.is_finite() {
            norm
        } else {
            f64::INFINITY
        }
    }
}

/// Step-size controller around [`Dopri5`].
pub(crate) struct Stepper {
    dp: Dopri5,
    h: f64,
    max_step: f64,
    y_new: Vec<C64>,
}

impl Stepper {
    pub fn new(dim: usize, rel_tol: f64, abs_tol: f64, max_step: f64) -> Self {
        Self {
            dp: Dopri5::new(dim, rel_tol, abs_tol),
            h: max_step,
            max_step,
            y_new: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Takes one accepted step from `t` no further than `t_limit`, updating
    /// `y` in place, and returns the new time.
    pub fn advance<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &mut Vec<C64>, t_limit: f64) -> Result<f64> {
        loop {
            let proposed = self.h.min(self.max_step);
            let remaining = t_limit - t;
            let clipped = remaining <= proposed;
            let h = if clipped { remaining } else { proposed };
            let err = self.dp.step(sys, t, y, h, &mut self.y_new);
            if err <= 1.0 {
                std::mem::swap(y, &mut self.y_new);
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !clipped {
                    self.h = h * factor;
                }
                return Ok(if clipped { t_limit } else { t + h });
            }
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if !(self.h > f64::EPSILON * t.abs().max(t_limit.abs())) {
                return Err(Error::Integration {
                    time: t,
                    reason: format!("step size underflow (h = {:e})", self.h),
                });
            }
        }
    }

    /// A single uncontrolled step of size `h`.
    pub fn fixed_step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &[C64], h: f64, out: &mut [C64]) {
        self.dp.step(sys, t, y, h, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rotation {
        omega: f64,
        gamma: f64,
    }

    impl OdeSystem for Rotation {
        fn rhs(&self, _t: f64, y: &[C64], dy: &mut [C64]) {
            for (d, v) in dy.iter_mut().zip(y) {
                *d = v * C64::new(-0.5 * self.gamma, -self.omega);
            }
        }
    }

    struct Forced;

    impl OdeSystem for Forced {
        fn rhs(&self, t: f64, _y: &[C64], dy: &mut [C64]) {
            dy[0] = C64::new(t.cos(), 0.0);
        }
    }

    fn integrate<S: OdeSystem>(sys: &S, y0: Vec<C64>, t_end: f64, rtol: f64, max_step: f64) -> Vec<C64> {
        let mut stepper = Stepper::new(y0.len(), rtol, rtol * 1e-2, max_step);
        let mut y = y0;
        let mut t = 0.0;
        while t < t_end {
            t = stepper.advance(sys, t, &mut y, t_end).unwrap();
        }
        y
    }

    #[test]
    fn damped_rotation_matches_closed_form() {
        let sys = Rotation { omega: 3.0, gamma: 0.4 };
        let y = integrate(&sys, vec![C64::new(1.0, 0.0)], 10.0, 1e-10, 1.0);
        let exact = (C64::new(-0.2, -3.0) * 10.0).exp();
        assert!((y[0] - exact).norm() < 1e-8);
    }

    #[test]
    fn time_dependent_forcing() {
        let y = integrate(&Forced, vec![C64::new(0.0, 0.0)], 4.0, 1e-10, 0.5);
        assert!((y[0].re - 4f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn tolerance_controls_accuracy() {
        let sys = Rotation { omega: 50.0, gamma: 0.0 };
        let exact = (C64::new(0.0, -50.0) * 2.0).exp();
        let loose = (integrate(&sys, vec![C64::new(1.0, 0.0)], 2.0, 1e-5, 1.0)[0] - exact).norm();
        let tight = (integrate(&sys, vec![C64::new(1.0, 0.0)], 2.0, 1e-10, 1.0)[0] - exact).norm();
        assert!(tight < loose);
        assert!(tight < 1e-7);
    }

    #[test]
    fn underflow_is_reported() {
        struct Blowup;
        impl OdeSystem for Blowup {
            fn rhs(&self, _t: f64, _y: &[C64], dy: &mut [C64]) {
                dy[0] = C64::new(f64::NAN, 0.0);
            }
        }
        let mut stepper = Stepper::new(1, 1e-8, 1e-10, 1.0);
        let mut y = vec![C64::new(1.0, 0.0)];
        assert!(matches!(
            stepper.advance(&Blowup, 0.0, &mut y, 1.0),
            Err(Error::Integration { .. })
        ));
    }
}
