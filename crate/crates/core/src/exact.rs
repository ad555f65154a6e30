//! Exact solutions used for verification, found by the method of
//! characteristics where nontrivial.

use crate::error::{Result, SolverError};
use crate::grid::{Point, SpaceFn};
use crate::scalar::Scalar;

/// A registered closed-form (or characteristic-solved) solution.
#[derive(Clone)]
pub enum ExactSolution<T: Scalar> {
    /// Initial data advected at constant speed with periodic wrap (1D).
    AdvectedPeriodic {
        speed: T,
        lo: T,
        length: T,
        ic: SpaceFn<T>,
    },
    /// Burgers with `u(x,0) = sin(2 pi x)` on the unit interval,
    /// periodic. Pre-shock the characteristic equation is solved by
    /// safeguarded Newton; after shock formation (`t >= 1/(2 pi)`) the
    /// standing shock sits at `x = 1/2` by odd symmetry and each side is
    /// solved on its own branch.
    BurgersSine,
    /// Burgers square wave `1` on `|x| <= 1/3`, `0` outside: rarefaction
    /// from the left edge, shock of speed `1/2` from the right edge.
    /// Valid until the fan head meets the shock at `t = 4/3`.
    BurgersSquare,
    /// Burgers square wave `1` inside, `-1` outside: a sonic expansion
    /// fan from the left edge and a stationary shock at `x = 1/3`.
    /// Valid until `t = 2/3`.
    BurgersSquareSonic,
    /// Steady linear discontinuity along `b x1 - a x2 = 0`:
    /// `u = 1` where `b x1 - a x2 < 0`, else `0`.
    AngledLine { a: T, b: T },
    /// Steady semicircular annulus: `u = 1` for
    /// `0.35 <= sqrt(x1^2 + x2^2) <= 0.65`, else `0`.
    SemicircleAnnulus,
}

impl<T: Scalar> std::fmt::Debug for ExactSolution<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ExactSolution::AdvectedPeriodic { .. } => "AdvectedPeriodic",
            ExactSolution::BurgersSine => "BurgersSine",
            ExactSolution::BurgersSquare => "BurgersSquare",
            ExactSolution::BurgersSquareSonic => "BurgersSquareSonic",
            ExactSolution::AngledLine { .. } => "AngledLine",
            ExactSolution::SemicircleAnnulus => "SemicircleAnnulus",
        };
        write!(f, "{name}")
    }
}

impl<T: Scalar> ExactSolution<T> {
    pub fn eval(&self, x: Point<T>, t: T) -> T {
        match self {
            ExactSolution::AdvectedPeriodic {
                speed,
                lo,
                length,
                ic,
            } => {
                let shifted = x[0] - *speed * t;
                let mut rel = (shifted - *lo) / *length;
                rel = rel - rel.floor();
                ic([*lo + rel * *length, T::zero()])
            }
            ExactSolution::BurgersSine => burgers_sine(x[0], t),
            ExactSolution::BurgersSquare => burgers_square(x[0], t),
            ExactSolution::BurgersSquareSonic => burgers_square_sonic(x[0], t),
            ExactSolution::AngledLine { a, b } => {
                if *b * x[0] - *a * x[1] < T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            ExactSolution::SemicircleAnnulus => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                if r >= T::real(0.35) && r <= T::real(0.65) {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }
}

/// Characteristic solution of Burgers with `sin(2 pi x)` data.
fn burgers_sine<T: Scalar>(x: T, t: T) -> T {
    let two_pi = T::real(2.0 * std::f64::consts::PI);
    // wrap into the unit period
    let x = x - x.floor();
    // odd symmetry pins the profile at the node and the shock position
    if x == T::zero() || x == T::real(0.5) {
        return T::zero();
    }
    let residual = |u: T| u - (two_pi * (x - u * t)).sin();
    let t_shock = (two_pi).recip();
    if t < t_shock {
        // pre-shock: the implicit equation has a unique root; Newton
        // from the initial profile, bisection safeguard
        let mut u = (two_pi * x).sin();
        for _ in 0..100 {
            let r = residual(u);
            if r.abs() < T::real(1e-14) {
                return u;
            }
            let slope = T::one() + two_pi * t * (two_pi * (x - u * t)).cos();
            if slope.abs() < T::real(1e-12) {
                break;
            }
            u = u - r / slope;
        }
        if residual(u).abs() < T::real(1e-12) {
            return u;
        }
        return bisect_smallest_root(&residual, T::real(-1.0001), T::real(1.0001));
    }
    // post-shock: standing shock at x = 1/2 by odd symmetry
    let half = T::real(0.5);
    if x < half {
        // positive branch: smallest non-negative root (the outermost
        // characteristic survives; folded ones fell into the shock)
        bisect_smallest_root(&residual, T::zero(), T::one() + T::real(1e-12))
    } else {
        -burgers_sine(T::one() - x, t)
    }
}

/// Scan upward for the first sign change of `f`, then bisect it.
fn bisect_smallest_root<T: Scalar>(f: &impl Fn(T) -> T, lo: T, hi: T) -> T {
    let scan = 2000;
    let step = (hi - lo) / T::from_usize(scan).unwrap();
    let mut a = lo;
    let mut fa = f(a);
    let mut bracket = None;
    for k in 1..=scan {
        let b = lo + step * T::from_usize(k).unwrap();
        let fb = f(b);
        if fa == T::zero() {
            return a;
        }
        if fa.signum() != fb.signum() {
            bracket = Some((a, b, fa));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut a, mut b, fa) = bracket.unwrap_or((lo, hi, f(lo)));
    let sign_a = fa.signum();
    for _ in 0..200 {
        let mid = (a + b) * T::real(0.5);
        if mid == a || mid == b {
            break;
        }
        if f(mid).signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b) * T::real(0.5)
}

/// Rarefaction + moving shock of the 1/0 square wave.
fn burgers_square<T: Scalar>(x: T, t: T) -> T {
    let third = T::one() / T::real(3.0);
    debug_assert!(
        t < T::real(4.0) / T::real(3.0),
        "fan reaches the shock at t = 4/3"
    );
    if t == T::zero() {
        return if x.abs() <= third {
            T::one()
        } else {
            T::zero()
        };
    }
    let shock = third + t * T::real(0.5);
    if x <= -third {
        T::zero()
    } else if x < -third + t {
        (x + third) / t
    } else if x < shock {
        T::one()
    } else {
        T::zero()
    }
}

/// Sonic fan + stationary shock of the 1/-1 square wave.
fn burgers_square_sonic<T: Scalar>(x: T, t: T) -> T {
    let third = T::one() / T::real(3.0);
    debug_assert!(
        t < T::real(2.0) / T::real(3.0),
        "fan reaches the shock at t = 2/3"
    );
    if t == T::zero() {
        return if x.abs() <= third {
            T::one()
        } else {
            -T::one()
        };
    }
    if x <= -third - t {
        -T::one()
    } else if x < -third + t {
        (x + third) / t
    } else if x < third {
        T::one()
    } else {
        -T::one()
    }
}

/// Evaluate the exact solution registered for a catalog problem.
pub fn exact_solution<T: Scalar>(problem_id: &str, x: Point<T>, t: T) -> Result<T> {
    let problem = crate::problems::by_id::<T>(problem_id)?;
    let exact = problem
        .exact
        .ok_or_else(|| SolverError::NoExactSolution(problem_id.into()))?;
    Ok(exact.eval(x, t))
}
