//! Closed-form and semi-analytic reference solutions.

use crate::geom::Vec2;

/// Steady vortex: returns `(v, h)` at `p` for background depth `h0`.
pub fn vortex_exact(p: Vec2, h0: f64, g: f64) -> (Vec2, f64) {
    let r2 = p.norm_sq();
    let e = (-0.5 * (r2 - 1.0)).exp();
    // v_phi = r e, so v = v_phi (-sin, cos) = e (-y, x).
    let v = Vec2::new(-p.y * e, p.x * e);
    (v, h0 - e * e / (2.0 * g))
}

/// Potential flow past a cylinder of radius `r_c` centred at the origin,
/// free stream `(v_m, 0)`: returns `(v, eta)`.
pub fn cylinder_potential_exact(p: Vec2, v_m: f64, r_c: f64, eta0: f64, g: f64) -> (Vec2, f64) {
    let r2 = p.norm_sq();
    let phi = p.y.atan2(p.x);
    let (s, c) = phi.sin_cos();
    let a = r_c * r_c / r2;
    let v_r = v_m * (1.0 - a) * c;
    let v_t = -v_m * (1.0 + a) * s;
    let v = Vec2::new(v_r * c - v_t * s, v_r * s + v_t * c);
    let eta = eta0 + v_m * v_m / (2.0 * g) * (2.0 * a * (2.0 * phi).cos() - a * a);
    (v, eta)
}

/// Depth below which a Riemann state counts as dry.
pub const DRY_DEPTH: f64 = 1e-12;

/// Exact solution of the flat-bottom shallow water Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub h_l: f64,
    pub u_l: f64,
    pub h_r: f64,
    pub u_r: f64,
    pub g: f64,
    /// Star-region depth and velocity (both zero when one side is dry).
    pub h_star: f64,
    pub u_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiemannError {
    BothDry,
    /// The data open a vacuum between two rarefactions.
    Vacuum,
}

impl std::fmt::Display for RiemannError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RiemannError::BothDry => f.write_str("both Riemann states are dry"),
            RiemannError::Vacuum => f.write_str("Riemann data generate a vacuum"),
        }
    }
}

impl std::error::Error for RiemannError {}

/// Wave curve through state `(h_k, c_k)`: rarefaction or shock branch.
fn depth_function(h: f64, h_k: f64, g: f64) -> (f64, f64) {
    if h > h_k {
        let s = (g * (h + h_k) / (2.0 * h * h_k)).sqrt();
        // s^2 = (g/2)(1/h + 1/h_k), so ds/dh = -g / (4 h^2 s).
        let ds = -g / (4.0 * h * h * s);
        ((h - h_k) * s, s + (h - h_k) * ds)
    } else {
        let c = (g * h).sqrt();
        let c_k = (g * h_k).sqrt();
        (2.0 * (c - c_k), if h > 0.0 { g / c } else { f64::INFINITY })
    }
}

impl RiemannSolution {
    pub fn new(h_l: f64, u_l: f64, h_r: f64, u_r: f64, g: f64) -> Result<Self, RiemannError> {
        let dry_l = h_l <= DRY_DEPTH;
        let dry_r = h_r <= DRY_DEPTH;
        let mut s = RiemannSolution {
            h_l: if dry_l { 0.0 } else { h_l },
            u_l: if dry_l { 0.0 } else { u_l },
            h_r: if dry_r { 0.0 } else { h_r },
            u_r: if dry_r { 0.0 } else { u_r },
            g,
            h_star: 0.0,
            u_star: 0.0,
        };
        if dry_l && dry_r {
            return Err(RiemannError::BothDry);
        }
        if dry_l || dry_r {
            return Ok(s);
        }
        let (c_l, c_r) = ((g * h_l).sqrt(), (g * h_r).sqrt());
        let du = u_r - u_l;
        if du >= 2.0 * (c_l + c_r) {
            return Err(RiemannError::Vacuum);
        }
        let f = |h: f64| {
            let (fl, dl) = depth_function(h, h_l, g);
            let (fr, dr) = depth_function(h, h_r, g);
            (fl + fr + du, dl + dr)
        };
        let mut lo = 0.0;
        let mut hi = h_l.max(h_r);
        while f(hi).0 < 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        // Two-rarefaction guess, kept inside the bracket.
        let guess = (0.5 * (c_l + c_r) - 0.25 * du).powi(2) / g;
        let mut h = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..200 {
            let (fv, dv) = f(h);
            if fv < 0.0 {
                lo = h;
            } else {
                hi = h;
            }
            let newton = h - fv / dv;
            let next = if newton > lo && newton < hi && dv.is_finite() {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let done = (next - h).abs() <= 1e-14 * h.max(1e-300) || hi - lo <= 1e-14 * hi;
            h = next;
            if done {
                break;
            }
        }
        s.h_star = h;
        let (fl, _) = depth_function(h, h_l, g);
        let (fr, _) = depth_function(h, h_r, g);
        s.u_star = 0.5 * (u_l + u_r) + 0.5 * (fr - fl);
        Ok(s)
    }

    /// Shock speeds `(left, right)`; `None` where the wave is a rarefaction.
    pub fn shock_speeds(&self) -> (Option<f64>, Option<f64>) {
        let g = self.g;
        if self.h_l == 0.0 || self.h_r == 0.0 {
            return (None, None);
        }
        let hs = self.h_star;
        let left = (hs > self.h_l).then(|| {
            self.u_l - (g * self.h_l).sqrt() * ((hs + self.h_l) * hs / (2.0 * self.h_l * self.h_l)).sqrt()
        });
        let right = (hs > self.h_r).then(|| {
            self.u_r + (g * self.h_r).sqrt() * ((hs + self.h_r) * hs / (2.0 * self.h_r * self.h_r)).sqrt()
        });
        (left, right)
    }

    /// `(h, u)` at similarity coordinate `xi = (x - x_c) / t`.
    pub fn sample(&self, xi: f64) -> (f64, f64) {
        let g = self.g;
        let (h_l, u_l, h_r, u_r) = (self.h_l, self.u_l, self.h_r, self.u_r);
        let c_l = (g * h_l).sqrt();
        let c_r = (g * h_r).sqrt();
        let fan_l = |xi: f64| {
            let c = (u_l + 2.0 * c_l - xi) / 3.0;
            (c * c / g, (u_l + 2.0 * c_l + 2.0 * xi) / 3.0)
        };
        let fan_r = |xi: f64| {
            let c = (-u_r + 2.0 * c_r + xi) / 3.0;
            (c * c / g, (u_r - 2.0 * c_r + 2.0 * xi) / 3.0)
        };
        if h_r == 0.0 {
            return if xi <= u_l - c_l {
                (h_l, u_l)
            } else if xi < u_l + 2.0 * c_l {
                fan_l(xi)
            } else {
                (0.0, 0.0)
            };
        }
        if h_l == 0.0 {
            return if xi <= u_r - 2.0 * c_r {
                (0.0, 0.0)
            } else if xi < u_r + c_r {
                fan_r(xi)
            } else {
                (h_r, u_r)
            };
        }
        let (hs, us) = (self.h_star, self.u_star);
        let cs = (g * hs).sqrt();
        let (shock_l, shock_r) = self.shock_speeds();
        if xi <= us {
            match shock_l {
                Some(s) => {
                    if xi <= s {
                        (h_l, u_l)
                    } else {
                        (hs, us)
                    }
                }
                None => {
                    if xi <= u_l - c_l {
                        (h_l, u_l)
                    } else if xi >= us - cs {
                        (hs, us)
                    } else {
                        fan_l(xi)
                    }
                }
            }
        } else {
            match shock_r {
                Some(s) => {
                    if xi >= s {
                        (h_r, u_r)
                    } else {
                        (hs, us)
                    }
                }
                None => {
                    if xi >= u_r + c_r {
                        (h_r, u_r)
                    } else if xi <= us + cs {
                        (hs, us)
                    } else {
                        fan_r(xi)
                    }
                }
            }
        }
    }

    /// `(h, u)` at position `x` and time `t` for a jump initially at `x_c`.
    pub fn at(&self, x: f64, t: f64, x_c: f64) -> (f64, f64) {
        if t <= 0.0 {
            return if x <= x_c {
                (self.h_l, self.u_l)
            } else {
                (self.h_r, self.u_r)
            };
        }
        self.sample((x - x_c) / t)
    }
}

/// Riemann problem over a bottom step at the initial jump, restricted to the
/// pattern with a left-going wave, a stationary contact on the step and a
/// right-going wave. Mass flux and energy are continuous across the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRiemannSolution {
    left: RiemannSolution,
    right: RiemannSolution,
}

impl StepRiemannSolution {
    /// `None` when the data do not produce the supported wave pattern.
    pub fn new(h_l: f64, u_l: f64, h_r: f64, u_r: f64, db: f64, g: f64) -> Option<Self> {
        if h_l <= DRY_DEPTH || h_r <= DRY_DEPTH {
            return None;
        }
        let sides = |x: [f64; 2]| {
            let (fl, dl) = depth_function(x[0], h_l, g);
            let (fr, dr) = depth_function(x[1], h_r, g);
            (u_l - fl, -dl, u_r + fr, dr)
        };
        let residual = |x: [f64; 2]| {
            let (u1, du1, u2, du2) = sides(x);
            let r = [
                x[0] * u1 - x[1] * u2,
                0.5 * u1 * u1 + g * x[0] - 0.5 * u2 * u2 - g * (x[1] + db),
            ];
            let jac = [[u1 + x[0] * du1, -u2 - x[1] * du2], [u1 * du1 + g, -u2 * du2 - g]];
            (r, jac)
        };
        let flat = RiemannSolution::new(h_l, u_l, h_r, u_r, g).ok()?;
        // Start the left depth on the subcritical side of the critical depth
        // reached through a left rarefaction.
        let h_crit = (u_l + 2.0 * (g * h_l).sqrt()).max(0.0).powi(2) / (9.0 * g);
        let mut x = [flat.h_star.max(0.5 * (h_crit + h_l)), flat.h_star];
        let mut converged = false;
        for _ in 0..100 {
            let (r, j) = residual(x);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !(det.is_finite() && det != 0.0) {
                return None;
            }
            let dx = [(r[0] * j[1][1] - r[1] * j[0][1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
            // Damp steps that would leave the positive quadrant.
            let mut lambda = 1.0;
            while x[0] - lambda * dx[0] <= 0.0 || x[1] - lambda * dx[1] <= 0.0 {
                lambda *= 0.5;
            }
            x = [x[0] - lambda * dx[0], x[1] - lambda * dx[1]];
            if dx[0].abs().max(dx[1].abs()) <= 1e-14 * x[0].max(x[1]) {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        let (u1, _, u2, _) = sides(x);
        let left = RiemannSolution {
            h_l,
            u_l,
            h_r: x[0],
            u_r: u1,
            g,
            h_star: x[0],
            u_star: u1,
        };
        let right = RiemannSolution {
            h_l: x[1],
            u_l: u2,
            h_r,
            u_r,
            g,
            h_star: x[1],
            u_star: u2,
        };
        // Trailing edge of the left wave and leading edge of the right wave.
        let (c1, c2) = ((g * x[0]).sqrt(), (g * x[1]).sqrt());
        let left_edge = left.shock_speeds().0.unwrap_or(u1 - c1);
        let right_edge = right.shock_speeds().1.unwrap_or(u2 + c2);
        (left_edge < 0.0 && right_edge > 0.0 && u1 < c1).then_some(StepRiemannSolution { left, right })
    }

    /// Depths and velocities on the two sides of the step.
    pub fn step_states(&self) -> ((f64, f64), (f64, f64)) {
        ((self.left.h_star, self.left.u_star), (self.right.h_star, self.right.u_star))
    }

    pub fn sample(&self, xi: f64) -> (f64, f64) {
        if xi <= 0.0 {
            self.left.sample(xi)
        } else {
            self.right.sample(xi)
        }
    }

    pub fn at(&self, x: f64, t: f64, x_c: f64) -> (f64, f64) {
        if t <= 0.0 {
            return if x <= x_c {
                (self.left.h_l, self.left.u_l)
            } else {
                (self.right.h_r, self.right.u_r)
            };
        }
        self.sample((x - x_c) / t)
    }
}

/// Convenience form of [`RiemannSolution::sample`].
pub fn exact_riemann_flat(h_l: f64, u_l: f64, h_r: f64, u_r: f64, g: f64, xi: f64) -> Result<(f64, f64), RiemannError> {
    Ok(RiemannSolution::new(h_l, u_l, h_r, u_r, g)?.sample(xi))
}
