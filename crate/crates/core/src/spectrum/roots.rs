//! Zeros of `j_l`, `(x j_l)'` and `j_l'` below a cutoff, for every `l`.
//!
//! Completeness rests on three facts about `u = x j_l(x)`, which solves
//! `u'' + (1 − l(l+1)/x²) u = 0`:
//!
//! * zeros of `j_l` and `j_{l−1}` interlace, with `j_{l−1}` first, so each
//!   interval between consecutive zeros of `j_{l−1}` holds exactly one zero
//!   of `j_l`;
//! * consecutive zeros of `j_l` (l ≥ 1) are more than `π` apart, so an
//!   interval shorter than `π` holds at most one of them;
//! * `(x j_l)'` and `j_l'` are positive on `(0, √(l(l+1))]` and have
//!   exactly one zero between `√(l(l+1))` and the first zero of `j_l`, and
//!   exactly one between consecutive zeros of `j_l`.
//!
//! The sign of the target function at the left end of every bracket is
//! therefore known in advance. Roots are polished with Halley steps that
//! fall back to bisection whenever a step would leave the bracket, so the
//! bracket is never lost. Initial guesses come from the WKB phase
//! `√(x²−ν²) − ν arccos(ν/x)`, `ν = l + ½`.

use super::bessel::{spherical_jn_pair, upward_batch};
use super::modes::Family;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// `j_l`
    Value,
    /// `(x j_l)'`
    Riccati,
    /// `j_l'`
    Slope,
}

impl Target {
    fn label(self) -> &'static str {
        match self {
            Target::Value => "zeros of j_l",
            Target::Riccati => "zeros of (x j_l)'",
            Target::Slope => "zeros of j_l'",
        }
    }

    /// `(f, f', f'')` from `j_l(x)` and `j_{l−1}(x)`.
    #[inline]
    fn eval<T: Real>(self, ll: T, lp1: T, x: T, j: T, jm1: T) -> (T, T, T) {
        let inv = x.recip();
        let two = T::lit(2.0);
        let q = T::one() - ll * inv * inv;
        let d1 = jm1 - lp1 * j * inv;
        let d2 = -two * inv * d1 - q * j;
        match self {
            Target::Value => (j, d1, d2),
            Target::Riccati => {
                let d3 = -two * inv * d2 + two * inv * inv * d1 - q * d1 - two * ll * inv * inv * inv * j;
                (j + x * d1, two * d1 + x * d2, T::lit(3.0) * d2 + x * d3)
            }
            Target::Slope => {
                let d3 = -two * inv * d2 + two * inv * inv * d1 - q * d1 - two * ll * inv * inv * inv * j;
                (d1, d2, d3)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bracket<T> {
    a: T,
    b: T,
    /// Sign of the target function just right of `a`.
    a_positive: bool,
    guess: T,
}

#[derive(Default)]
struct Scratch<T> {
    xs: Vec<T>,
    j: Vec<T>,
    jm1: Vec<T>,
    active: Vec<usize>,
    next: Vec<usize>,
}

const MAX_ITERATIONS: usize = 200;

/// Which families to enumerate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Wanted {
    pub dirichlet: bool,
    pub neumann: bool,
    pub te: bool,
    pub tm: bool,
}

/// Roots `x ≤ xmax` for every requested family, grouped by `(family, l)`.
pub(crate) fn enumerate<T: Real>(xmax: T, wanted: Wanted) -> Result<Vec<(Family, u32, Vec<T>)>> {
    if !(xmax > T::zero()) || !xmax.is_finite() {
        return Err(Error::InvalidInput(format!("cutoff must be positive and finite, got {xmax}")));
    }
    let pi = T::PI();
    let mut out = Vec::new();
    let mut scratch = Scratch::default();

    let mut zeros = Vec::new();
    let mut k = 1usize;
    while zeros.iter().filter(|&&z| z > xmax).count() < 2 {
        zeros.push(T::from_usize_lossy(k) * pi);
        k += 1;
    }
    if wanted.dirichlet {
        out.push((Family::Dirichlet, 0, below(&zeros, xmax)));
    }

    for l in 1usize.. {
        let ll = T::from_usize_lossy(l * (l + 1));
        if ll.sqrt() >= xmax {
            break;
        }
        zeros = level_zeros(l, &zeros, xmax, &mut scratch)?;
        let mine = below(&zeros, xmax);
        if l == 1 && wanted.neumann {
            out.push((Family::Neumann, 0, mine.clone()));
        }
        if wanted.dirichlet {
            out.push((Family::Dirichlet, l as u32, mine.clone()));
        }
        if wanted.te {
            out.push((Family::Te, l as u32, mine));
        }
        if wanted.tm {
            out.push((Family::Tm, l as u32, derivative_zeros(l, Target::Riccati, &zeros, xmax, &mut scratch)?));
        }
        if wanted.neumann {
            out.push((Family::Neumann, l as u32, derivative_zeros(l, Target::Slope, &zeros, xmax, &mut scratch)?));
        }
    }
    Ok(out)
}

fn below<T: Real>(xs: &[T], xmax: T) -> Vec<T> {
    xs.iter().copied().take_while(|&x| x <= xmax).collect()
}

/// Zeros of `j_l` from the zeros of `j_{l−1}`, continued until two lie
/// beyond `xmax`.
fn level_zeros<T: Real>(l: usize, prev: &[T], xmax: T, scratch: &mut Scratch<T>) -> Result<Vec<T>> {
    let nu = T::from_usize_lossy(l) + T::lit(0.5);
    let pi = T::PI();
    let brackets: Vec<Bracket<T>> = prev
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let target = (T::from_usize_lossy(k + 1) - T::lit(0.25)) * pi;
            Bracket { a: w[0], b: w[1], a_positive: k % 2 == 0, guess: phase_inverse(nu, target, w[0], w[1]) }
        })
        .collect();
    let mut zeros = solve(l, Target::Value, &brackets, scratch)?;
    if zeros.is_empty() {
        return Err(Error::Bracketing { family: Target::Value.label(), l, detail: "no interlacing brackets".into() });
    }
    while zeros.iter().rev().take_while(|&&z| z > xmax).count() < 2 {
        let next = next_zero(l, &zeros, scratch)?;
        zeros.push(next);
    }
    Ok(zeros)
}

/// Zero of `j_l` following the last one in `zeros`, found by scanning in
/// steps shorter than the minimal zero spacing.
fn next_zero<T: Real>(l: usize, zeros: &[T], scratch: &mut Scratch<T>) -> Result<T> {
    let pi = T::PI();
    let n = zeros.len();
    let last = zeros[n - 1];
    let positive = n % 2 == 0;
    let mut a = last + pi;
    let fa = spherical_jn_pair(l, a).0;
    if fa != T::zero() && (fa > T::zero()) != positive {
        return Err(Error::Bracketing {
            family: Target::Value.label(),
            l,
            detail: format!("sign of j_l after its zero at {last} contradicts the zero count {n}"),
        });
    }
    let step = T::lit(0.99) * pi;
    for _ in 0..10_000 {
        let b = a + step;
        let fb = spherical_jn_pair(l, b).0;
        if fb == T::zero() {
            return Ok(b);
        }
        if (fb > T::zero()) != positive {
            let nu = T::from_usize_lossy(l) + T::lit(0.5);
            let target = (T::from_usize_lossy(n + 1) - T::lit(0.25)) * pi;
            let bracket = Bracket { a, b, a_positive: positive, guess: phase_inverse(nu, target, a, b) };
            return Ok(solve(l, Target::Value, &[bracket], scratch)?[0]);
        }
        a = b;
    }
    Err(Error::Bracketing { family: Target::Value.label(), l, detail: format!("no sign change after {last}") })
}

/// Zeros of `(x j_l)'` or `j_l'` up to `xmax`, bracketed by `√(l(l+1))`
/// and the zeros of `j_l`.
fn derivative_zeros<T: Real>(l: usize, target: Target, zeros: &[T], xmax: T, scratch: &mut Scratch<T>) -> Result<Vec<T>> {
    let nu = T::from_usize_lossy(l) + T::lit(0.5);
    let pi = T::PI();
    let start = T::from_usize_lossy(l * (l + 1)).sqrt();
    let mut brackets = Vec::new();
    let mut a = start;
    for (k, &b) in zeros.iter().enumerate() {
        if a > xmax {
            break;
        }
        let phase = (T::from_usize_lossy(k) + T::lit(0.25)) * pi;
        brackets.push(Bracket { a, b, a_positive: k % 2 == 0, guess: phase_inverse(nu, phase, a, b) });
        a = b;
    }
    let mut roots = solve(l, target, &brackets, scratch)?;
    roots.retain(|&x| x <= xmax);
    Ok(roots)
}

/// Solves `Φ(x) = target` for the WKB phase, clamped to the interior of
/// `[a, b]`. `Φ` is convex and increasing, so Newton from the right end
/// approaches the root monotonically.
fn phase_inverse<T: Real>(nu: T, target: T, a: T, b: T) -> T {
    let phase = |x: T| {
        let r = (x * x - nu * nu).max(T::zero()).sqrt();
        (r - nu * (nu / x).min(T::one()).acos(), r / x)
    };
    let mut x = b;
    for _ in 0..30 {
        let (p, dp) = phase(x);
        if !(p > target) || dp <= T::zero() {
            break;
        }
        let step = (p - target) / dp;
        x = x - step;
        if x <= nu || step.abs() <= T::lit(1e-10) * x {
            break;
        }
    }
    let margin = T::lit(1e-3) * (b - a);
    x.max(a + margin).min(b - margin)
}

/// Safeguarded Halley iteration on all brackets at once. Every bracket must
/// contain exactly one simple root with the stated sign pattern.
fn solve<T: Real>(l: usize, target: Target, brackets: &[Bracket<T>], s: &mut Scratch<T>) -> Result<Vec<T>> {
    let n = brackets.len();
    let mut x: Vec<T> = brackets.iter().map(|b| b.guess).collect();
    let mut lo: Vec<T> = brackets.iter().map(|b| b.a).collect();
    let mut hi: Vec<T> = brackets.iter().map(|b| b.b).collect();
    let ll = T::from_usize_lossy(l * (l + 1));
    let lp1 = T::from_usize_lossy(l + 1);
    let step_tol = T::lit(0.5) * T::epsilon().cbrt();
    let eps4 = T::lit(4.0) * T::epsilon();

    s.active.clear();
    s.active.extend(0..n);
    for _ in 0..MAX_ITERATIONS {
        if s.active.is_empty() {
            return Ok(x);
        }
        s.xs.clear();
        s.xs.extend(s.active.iter().map(|&i| x[i]));
        upward_batch(l, &s.xs, &mut s.j, &mut s.jm1);
        s.next.clear();
        for (k, &i) in s.active.iter().enumerate() {
            let xi = s.xs[k];
            let (f, f1, f2) = target.eval(ll, lp1, xi, s.j[k], s.jm1[k]);
            if f == T::zero() {
                continue;
            }
            if (f > T::zero()) == brackets[i].a_positive {
                lo[i] = xi;
            } else {
                hi[i] = xi;
            }
            let step = T::lit(2.0) * f * f1 / (T::lit(2.0) * f1 * f1 - f * f2);
            let cand = xi - step;
            if step.is_finite() && cand > lo[i] && cand < hi[i] {
                x[i] = cand;
                if step.abs() <= step_tol {
                    continue;
                }
            } else {
                x[i] = (lo[i] + hi[i]) * T::lit(0.5);
                if hi[i] - lo[i] <= eps4 * x[i] {
                    continue;
                }
            }
            s.next.push(i);
        }
        std::mem::swap(&mut s.active, &mut s.next);
    }
    let i = s.active[0];
    Err(Error::Bracketing {
        family: target.label(),
        l,
        detail: format!("no convergence in [{}, {}] after {MAX_ITERATIONS} steps", lo[i], hi[i]),
    })
}
