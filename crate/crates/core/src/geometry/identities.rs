//! Trace identities for the normal projection `P = n ⊗ n`, the boundary
//! endomorphisms `S` of the 1- and 2-form problems, and the Codazzi and
//! Gauss relations for covariant derivatives of `L`.
//!
//! Each identity is evaluated as `lhs − rhs`. The left sides are traces of
//! 3×3 matrices; the right sides are polynomials in the frame components
//! `L_ab`, `L_ab:c` and `L_ab:cd`. Two independent sources for the left
//! sides exist: finite differences of fields built from the embedding
//! ([`boundary_identity_residuals`]) and closed-form derivatives in an
//! adapted frame ([`adapted_frame_inputs`]), which also runs in exact
//! rational arithmetic.

use num_traits::Num;
use serde::Serialize;

use super::chart::SurfaceChart;
use super::curvature::curvature_at;
use crate::error::{Error, Result};
use crate::Real;

pub type M3<F> = [[F; 3]; 3];

/// Identity names in report order.
pub const IDENTITY_NAMES: [&str; 17] = [
    "tr(P:a P:b) = 2(L^2)_ab",
    "tr(P:a P:a P:b P:b) = (L^4)_aa + (L^2)_aa (L^2)_bb",
    "tr(P:a P:b P:a P:b) = 2(L^4)_aa",
    "tr(P:aa P:bb) = 2 L_ac:a L_bc:b + 4(L^4)_aa + 4(L^2)_aa (L^2)_bb",
    "tr(P:ab P:ab) = 2 L_ab:c L_ab:c + 6(L^4)_aa + 2(L^2)_aa (L^2)_bb",
    "p=1 tr S:a = -L_bb:a",
    "p=1 tr S:ab = -L_cc:ab",
    "p=2 tr S:a = -L_bb:a",
    "p=2 tr S:ab = -L_cc:ab",
    "p=1 tr(S:a S:a) = L_bb:a L_cc:a + 2 L_bb L_cc (L^2)_aa",
    "p=1 tr(P:a S:b) = -2(L^2)_ab L_cc",
    "p=1 tr(P S:a S:a) = L_bb:a L_cc:a + L_bb L_cc (L^2)_aa",
    "p=2 tr(S:a S:a) = L_ab:c L_ab:c + 2(L^4)_aa",
    "p=2 tr(P:a S:a) = 2(L^3)_aa",
    "p=2 tr(P S:a S:a) = (L^4)_aa",
    "Codazzi L_ab:c = L_ac:b",
    "Gauss L_ab:ca - L_ab:ac = L_aa (L^2)_bc - (L^2)_aa L_bc",
];

/// Matrix-valued boundary fields and their frame derivatives at a point.
///
/// Index conventions: `x_a[a] = x:a`, `x_ab[a][b] = x:ab = ∇_b ∇_a x`,
/// `dl[a][b][c] = L_ab:c`, `ddl[a][b][c][d] = L_ab:cd = ∇_d ∇_c L_ab`.
#[derive(Debug, Clone, Copy)]
pub struct IdentityInputs<F> {
    pub p: M3<F>,
    pub p_a: [M3<F>; 2],
    pub p_ab: [[M3<F>; 2]; 2],
    pub s1_a: [M3<F>; 2],
    pub s1_ab: [[M3<F>; 2]; 2],
    pub s2_a: [M3<F>; 2],
    pub s2_ab: [[M3<F>; 2]; 2],
    pub l: [[F; 2]; 2],
    pub dl: [[[F; 2]; 2]; 2],
    pub ddl: [[[[F; 2]; 2]; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual<F> {
    pub name: &'static str,
    /// Largest `|lhs − rhs|` over free frame indices.
    pub residual: F,
}

fn zero3<F: Copy + Num>() -> M3<F> {
    [[F::zero(); 3]; 3]
}

fn mul<F: Copy + Num>(a: &M3<F>, b: &M3<F>) -> M3<F> {
    let mut c = zero3();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] = c[i][j] + a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn add<F: Copy + Num>(a: &M3<F>, b: &M3<F>) -> M3<F> {
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = c[i][j] + b[i][j];
        }
    }
    c
}

fn scale<F: Copy + Num>(a: &M3<F>, s: F) -> M3<F> {
    a.map(|r| r.map(|x| x * s))
}

fn tr<F: Copy + Num>(a: &M3<F>) -> F {
    a[0][0] + a[1][1] + a[2][2]
}

fn outer<F: Copy + Num>(x: &[F; 3], y: &[F; 3]) -> M3<F> {
    let mut c = zero3();
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = x[i] * y[j];
        }
    }
    c
}

fn abs<F: Copy + Num + PartialOrd>(x: F) -> F {
    if x < F::zero() {
        F::zero() - x
    } else {
        x
    }
}

fn lpow<F: Copy + Num>(l: &[[F; 2]; 2], k: usize) -> [[F; 2]; 2] {
    let mut r = [[F::one(), F::zero()], [F::zero(), F::one()]];
    for _ in 0..k {
        let mut n = [[F::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                n[i][j] = r[i][0] * l[0][j] + r[i][1] * l[1][j];
            }
        }
        r = n;
    }
    r
}

/// Evaluates all identities on the given inputs.
pub fn evaluate_identities<F: Copy + Num + PartialOrd>(x: &IdentityInputs<F>) -> Vec<IdentityResidual<F>> {
    let two = F::one() + F::one();
    let four = two * two;
    let six = four + two;
    let l = &x.l;
    let l2 = lpow(l, 2);
    let l3 = lpow(l, 3);
    let l4 = lpow(l, 4);
    let t = l[0][0] + l[1][1];
    let t2 = l2[0][0] + l2[1][1];
    let t3 = l3[0][0] + l3[1][1];
    let t4 = l4[0][0] + l4[1][1];
    let dt = |a: usize| x.dl[0][0][a] + x.dl[1][1][a];
    let ddt = |a: usize, b: usize| x.ddl[0][0][a][b] + x.ddl[1][1][a][b];
    let mut dl_sq = F::zero();
    let mut div_sq = F::zero();
    let mut grad_t_sq = F::zero();
    for a in 0..2 {
        grad_t_sq = grad_t_sq + dt(a) * dt(a);
        for b in 0..2 {
            for c in 0..2 {
                dl_sq = dl_sq + x.dl[a][b][c] * x.dl[a][b][c];
            }
        }
    }
    for c in 0..2 {
        let div = x.dl[0][c][0] + x.dl[1][c][1];
        div_sq = div_sq + div * div;
    }

    let mut out = Vec::with_capacity(IDENTITY_NAMES.len());
    let mut push = |k: usize, r: F| out.push(IdentityResidual { name: IDENTITY_NAMES[k], residual: r });
    let max_over = |f: &dyn Fn(usize, usize) -> F| {
        let mut m = F::zero();
        for a in 0..2 {
            for b in 0..2 {
                let r = abs(f(a, b));
                if r > m {
                    m = r;
                }
            }
        }
        m
    };

    push(0, max_over(&|a, b| tr(&mul(&x.p_a[a], &x.p_a[b])) - two * l2[a][b]));

    let mut s4a = F::zero();
    let mut s4b = F::zero();
    let mut s_ab = F::zero();
    for a in 0..2 {
        for b in 0..2 {
            let (pa, pb) = (&x.p_a[a], &x.p_a[b]);
            s4a = s4a + tr(&mul(&mul(pa, pa), &mul(pb, pb)));
            s4b = s4b + tr(&mul(&mul(pa, pb), &mul(pa, pb)));
            s_ab = s_ab + tr(&mul(&x.p_ab[a][b], &x.p_ab[a][b]));
        }
    }
    push(1, abs(s4a - (t4 + t2 * t2)));
    push(2, abs(s4b - two * t4));
    let lap_p = add(&x.p_ab[0][0], &x.p_ab[1][1]);
    push(3, abs(tr(&mul(&lap_p, &lap_p)) - (two * div_sq + four * t4 + four * t2 * t2)));
    push(4, abs(s_ab - (two * dl_sq + six * t4 + two * t2 * t2)));

    push(5, max_over(&|a, _| tr(&x.s1_a[a]) + dt(a)));
    push(6, max_over(&|a, b| tr(&x.s1_ab[a][b]) + ddt(a, b)));
    push(7, max_over(&|a, _| tr(&x.s2_a[a]) + dt(a)));
    push(8, max_over(&|a, b| tr(&x.s2_ab[a][b]) + ddt(a, b)));

    let sum_a = |f: &dyn Fn(usize) -> F| f(0) + f(1);
    let s1sq = sum_a(&|a| tr(&mul(&x.s1_a[a], &x.s1_a[a])));
    push(9, abs(s1sq - (grad_t_sq + two * t * t * t2)));
    push(10, max_over(&|a, b| tr(&mul(&x.p_a[a], &x.s1_a[b])) + two * l2[a][b] * t));
    let ps1 = sum_a(&|a| tr(&mul(&x.p, &mul(&x.s1_a[a], &x.s1_a[a]))));
    push(11, abs(ps1 - (grad_t_sq + t * t * t2)));

    let s2sq = sum_a(&|a| tr(&mul(&x.s2_a[a], &x.s2_a[a])));
    push(12, abs(s2sq - (dl_sq + two * t4)));
    let ps2 = sum_a(&|a| tr(&mul(&x.p_a[a], &x.s2_a[a])));
    push(13, abs(ps2 - two * t3));
    let pss2 = sum_a(&|a| tr(&mul(&x.p, &mul(&x.s2_a[a], &x.s2_a[a]))));
    push(14, abs(pss2 - t4));

    let mut cod = F::zero();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let r = abs(x.dl[a][b][c] - x.dl[a][c][b]);
                if r > cod {
                    cod = r;
                }
            }
        }
    }
    push(15, cod);
    push(
        16,
        max_over(&|b, c| {
            let lhs = sum_a(&|a| x.ddl[a][b][c][a] - x.ddl[a][b][a][c]);
            lhs - (t * l2[b][c] - t2 * l[b][c])
        }),
    );
    out
}

/// Builds the inputs in the adapted frame `{e₁, e₂, n}` (the standard basis)
/// from frame components of `L` and its covariant derivatives, using
/// `∇_a n = −L_ab e_b` and `∇_a e_b = L_ab n` at the point.
pub fn adapted_frame_inputs<F: Copy + Num + PartialOrd>(
    l: [[F; 2]; 2],
    dl: [[[F; 2]; 2]; 2],
    ddl: [[[[F; 2]; 2]; 2]; 2],
) -> IdentityInputs<F> {
    let (o, z) = (F::one(), F::zero());
    let e = [[o, z, z], [z, o, z]];
    let n = [z, z, o];
    let two = o + o;
    let l2 = lpow(&l, 2);
    let en = |c: usize| add(&outer(&e[c], &n), &outer(&n, &e[c]));
    let ee = |c: usize, d: usize| outer(&e[c], &e[d]);
    let nn = outer(&n, &n);
    let neg = |m: &M3<F>| scale(m, z - o);

    let p = nn;
    let p_a: [M3<F>; 2] = std::array::from_fn(|a| {
        let mut m = zero3();
        for c in 0..2 {
            m = add(&m, &scale(&en(c), z - l[a][c]));
        }
        m
    });
    let p_ab: [[M3<F>; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut m = scale(&p, z - two * l2[a][b]);
            for c in 0..2 {
                m = add(&m, &scale(&en(c), z - dl[a][c][b]));
                for d in 0..2 {
                    m = add(&m, &scale(&ee(c, d), l[a][c] * l[b][d] + l[a][d] * l[b][c]));
                }
            }
            m
        })
    });

    let t = l[0][0] + l[1][1];
    let dt = |a: usize| dl[0][0][a] + dl[1][1][a];
    let ddt = |a: usize, b: usize| ddl[0][0][a][b] + ddl[1][1][a][b];
    let s1_a: [M3<F>; 2] = std::array::from_fn(|a| neg(&add(&scale(&p, dt(a)), &scale(&p_a[a], t))));
    let s1_ab: [[M3<F>; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let m = add(
                &add(&scale(&p, ddt(a, b)), &scale(&p_a[b], dt(a))),
                &add(&scale(&p_a[a], dt(b)), &scale(&p_ab[a][b], t)),
            );
            neg(&m)
        })
    });

    // S = −L_cd e_c ⊗ e_d.
    let de = |a: usize, c: usize| n.map(|x| x * l[a][c]);
    let dn = |a: usize| {
        let mut v = [z; 3];
        for m in 0..2 {
            for k in 0..3 {
                v[k] = v[k] - l[a][m] * e[m][k];
            }
        }
        v
    };
    let vscale = |v: [F; 3], s: F| v.map(|x| x * s);
    let vadd = |a: [F; 3], b: [F; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    // ∇_b ∇_a e_c = L_ac:b n + L_ac ∇_b n
    let dde = |a: usize, b: usize, c: usize| vadd(vscale(n, dl[a][c][b]), vscale(dn(b), l[a][c]));
    let s2_a: [M3<F>; 2] = std::array::from_fn(|a| {
        let mut m = zero3();
        for c in 0..2 {
            for d in 0..2 {
                m = add(&m, &scale(&ee(c, d), dl[c][d][a]));
                let de_cd = add(&outer(&de(a, c), &e[d]), &outer(&e[c], &de(a, d)));
                m = add(&m, &scale(&de_cd, l[c][d]));
            }
        }
        neg(&m)
    });
    let s2_ab: [[M3<F>; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut m = zero3();
            for c in 0..2 {
                for d in 0..2 {
                    m = add(&m, &scale(&ee(c, d), ddl[c][d][a][b]));
                    let da = add(&outer(&de(a, c), &e[d]), &outer(&e[c], &de(a, d)));
                    let db = add(&outer(&de(b, c), &e[d]), &outer(&e[c], &de(b, d)));
                    m = add(&m, &scale(&da, dl[c][d][b]));
                    m = add(&m, &scale(&db, dl[c][d][a]));
                    let dab = add(
                        &add(&outer(&dde(a, b, c), &e[d]), &outer(&de(a, c), &de(b, d))),
                        &add(&outer(&de(b, c), &de(a, d)), &outer(&e[c], &dde(a, b, d))),
                    );
                    m = add(&m, &scale(&dab, l[c][d]));
                }
            }
            neg(&m)
        })
    });

    IdentityInputs { p, p_a, p_ab, s1_a, s1_ab, s2_a, s2_ab, l, dl, ddl }
}

/// Residuals with the finite-difference tolerance they were judged against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub point: [f64; 2],
    pub fd_step: f64,
    pub tolerance: f64,
    pub entries: Vec<IdentityResidual<f64>>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// Fails on the first identity whose residual exceeds the tolerance.
    pub fn check(&self) -> Result<()> {
        match self.entries.iter().find(|e| !(e.residual <= self.tolerance)) {
            Some(e) => Err(Error::IdentityViolation {
                name: e.name,
                residual: e.residual,
                tolerance: self.tolerance,
            }),
            None => Ok(()),
        }
    }
}

/// Number of scalars per sampled point: P, S₁, S₂ (27), II (4), Γ (8).
const FIELD_LEN: usize = 39;

fn fields<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C, u: T, v: T) -> [T; FIELD_LEN] {
    let r = [chart.partial(1, 0, u, v), chart.partial(0, 1, u, v)];
    let rr = [
        [chart.partial(2, 0, u, v), chart.partial(1, 1, u, v)],
        [chart.partial(1, 1, u, v), chart.partial(0, 2, u, v)],
    ];
    let g = [[r[0].dot(r[0]), r[0].dot(r[1])], [r[1].dot(r[0]), r[1].dot(r[1])]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let gi = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    let nvec = r[0].cross(r[1]).normalized().scale(chart.orientation().sign::<T>());
    let nn = nvec.to_array();
    let mut out = [T::zero(); FIELD_LEN];
    let mut ii = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ii[i][j] = rr[i][j].dot(nvec);
        }
    }
    let h = gi[0][0] * ii[0][0] + gi[0][1] * ii[0][1] + gi[1][0] * ii[1][0] + gi[1][1] * ii[1][1];
    // Shape operator raised on both indices: L^{kl} = g^{ki} II_ij g^{jl}.
    let mut lup = [[T::zero(); 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    lup[k][l] = lup[k][l] + gi[k][i] * ii[i][j] * gi[j][l];
                }
            }
        }
    }
    let ra = [r[0].to_array(), r[1].to_array()];
    for i in 0..3 {
        for j in 0..3 {
            let p = nn[i] * nn[j];
            out[3 * i + j] = p;
            out[9 + 3 * i + j] = -h * p;
            let mut s2 = T::zero();
            for k in 0..2 {
                for l in 0..2 {
                    s2 = s2 + lup[k][l] * ra[k][i] * ra[l][j];
                }
            }
            out[18 + 3 * i + j] = -s2;
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            out[27 + 2 * i + j] = ii[i][j];
            for k in 0..2 {
                // Γ^k_ij = g^{km} (r_ij · r_m)
                out[31 + 4 * k + 2 * i + j] = gi[k][0] * rr[i][j].dot(r[0]) + gi[k][1] * rr[i][j].dot(r[1]);
            }
        }
    }
    out
}

struct Derivatives<T> {
    f0: [T; FIELD_LEN],
    d: [[T; FIELD_LEN]; 2],
    dd: [[[T; FIELD_LEN]; 2]; 2],
    /// Largest |Richardson − plain| over second derivatives.
    spread: T,
}

fn differentiate<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C, u: T, v: T, h1: T, h2: T) -> Derivatives<T> {
    let z = T::zero();
    let at = |du: T, dv: T| fields(chart, u + du, v + dv);
    let f0 = at(z, z);
    let rich = |coarse: T, fine: T| (T::lit(4.0) * fine - coarse) / T::lit(3.0);
    let mut d = [[z; FIELD_LEN]; 2];
    let mut dd = [[[z; FIELD_LEN]; 2]; 2];
    let mut spread = z;
    let dir = |k: usize, h: T| if k == 0 { (h, z) } else { (z, h) };
    for k in 0..2 {
        let first = |h: T| {
            let (a, b) = dir(k, h);
            let (p, m) = (at(a, b), at(-a, -b));
            std::array::from_fn::<T, FIELD_LEN, _>(|i| (p[i] - m[i]) / (h + h))
        };
        let (c, f) = (first(h1), first(h1 / T::lit(2.0)));
        for i in 0..FIELD_LEN {
            d[k][i] = rich(c[i], f[i]);
        }
        let second = |h: T| {
            let (a, b) = dir(k, h);
            let (p, m) = (at(a, b), at(-a, -b));
            std::array::from_fn::<T, FIELD_LEN, _>(|i| (p[i] - f0[i] - f0[i] + m[i]) / (h * h))
        };
        let (c, f) = (second(h2), second(h2 / T::lit(2.0)));
        for i in 0..FIELD_LEN {
            dd[k][k][i] = rich(c[i], f[i]);
            spread = spread.max((dd[k][k][i] - f[i]).abs());
        }
    }
    let mixed = |h: T| {
        let (pp, pm, mp, mm) = (at(h, h), at(h, -h), at(-h, h), at(-h, -h));
        std::array::from_fn::<T, FIELD_LEN, _>(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (T::lit(4.0) * h * h))
    };
    let (c, f) = (mixed(h2), mixed(h2 / T::lit(2.0)));
    for i in 0..FIELD_LEN {
        let x = rich(c[i], f[i]);
        dd[0][1][i] = x;
        dd[1][0][i] = x;
        spread = spread.max((x - f[i]).abs());
    }
    Derivatives { f0, d, dd, spread }
}

/// Finite-difference evaluation of every identity at `(u, v)`.
///
/// `fd_step` is the step for first differences; second differences use the
/// geometric mean of `fd_step` and the chart scale. Both are Richardson
/// extrapolated.
pub fn boundary_identity_residuals<T: Real, C: SurfaceChart<T> + ?Sized>(
    chart: &C,
    u: T,
    v: T,
    fd_step: T,
) -> Result<IdentityReport> {
    let (inputs, tolerance) = finite_difference_inputs(chart, u, v, fd_step)?;
    let entries = evaluate_identities(&inputs)
        .into_iter()
        .map(|e| IdentityResidual { name: e.name, residual: e.residual.to_f64_lossy() })
        .collect();
    Ok(IdentityReport {
        point: [u.to_f64_lossy(), v.to_f64_lossy()],
        fd_step: fd_step.to_f64_lossy(),
        tolerance,
        entries,
    })
}

/// Identity inputs from Richardson-extrapolated differences of the
/// embedding fields, in the frame of [`curvature_at`], together with the
/// tolerance implied by the difference error estimate.
pub fn finite_difference_inputs<T: Real, C: SurfaceChart<T> + ?Sized>(
    chart: &C,
    u: T,
    v: T,
    fd_step: T,
) -> Result<(IdentityInputs<T>, f64)> {
    let chart_scale = chart.parameter_scale();
    if !(fd_step > T::zero() && fd_step < chart_scale / T::lit(10.0)) {
        return Err(Error::InvalidInput(format!(
            "fd_step {} outside (0, {})",
            fd_step.to_f64_lossy(),
            (chart_scale / T::lit(10.0)).to_f64_lossy()
        )));
    }
    let sample = curvature_at(chart, u, v)?;
    let h2 = (fd_step * chart_scale).sqrt();
    let dom = chart.domain();
    let reach = h2 + h2;
    if !dom.contains(u - reach, v - reach) || !dom.contains(u + reach, v + reach) {
        return Err(Error::InvalidInput("difference stencil leaves the chart domain".into()));
    }
    let der = differentiate(chart, u, v, fd_step, h2);
    let f = &der.f0;
    let ii = |i: usize, j: usize| f[27 + 2 * i + j];
    let gam = |k: usize, i: usize, j: usize| f[31 + 4 * k + 2 * i + j];
    let dii = |i: usize, j: usize, m: usize| der.d[m][27 + 2 * i + j];
    let ddii = |i: usize, j: usize, k: usize, m: usize| der.dd[k][m][27 + 2 * i + j];
    let dgam = |k: usize, i: usize, j: usize, m: usize| der.d[m][31 + 4 * k + 2 * i + j];

    // ∇II_ijk and ∇∇II_ijkm = ∇_m ∇_k II_ij in coordinates.
    let mut cov = [[[T::zero(); 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut x = dii(i, j, k);
                for p in 0..2 {
                    x = x - gam(p, k, i) * ii(p, j) - gam(p, k, j) * ii(i, p);
                }
                cov[i][j][k] = x;
            }
        }
    }
    let mut cov2 = [[[[T::zero(); 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    let mut x = ddii(i, j, k, m);
                    for p in 0..2 {
                        x = x - dgam(p, k, i, m) * ii(p, j) - gam(p, k, i) * dii(p, j, m);
                        x = x - dgam(p, k, j, m) * ii(i, p) - gam(p, k, j) * dii(i, p, m);
                        x = x - gam(p, m, i) * cov[p][j][k] - gam(p, m, j) * cov[i][p][k] - gam(p, m, k) * cov[i][j][p];
                    }
                    cov2[i][j][k][m] = x;
                }
            }
        }
    }

    // Frame coefficients e_a = A[a][i] r_i, recovered from the sample frame.
    let r = [chart.partial(1, 0, u, v), chart.partial(0, 1, u, v)];
    let a = frame_coefficients(&r, &sample.frame);

    let field_mat = |src: &[T; FIELD_LEN], off: usize| -> M3<T> {
        std::array::from_fn(|i| std::array::from_fn(|j| src[off + 3 * i + j]))
    };
    let frame_d = |off: usize| -> [M3<T>; 2] {
        std::array::from_fn(|p| {
            let mut m = [[T::zero(); 3]; 3];
            for i in 0..2 {
                let di = field_mat(&der.d[i], off);
                m = add(&m, &scale(&di, a[p][i]));
            }
            m
        })
    };
    let frame_dd = |off: usize| -> [[M3<T>; 2]; 2] {
        std::array::from_fn(|p| {
            std::array::from_fn(|q| {
                let mut m = [[T::zero(); 3]; 3];
                for i in 0..2 {
                    for j in 0..2 {
                        let mut hij = field_mat(&der.dd[i][j], off);
                        for k in 0..2 {
                            hij = add(&hij, &scale(&field_mat(&der.d[k], off), -gam(k, i, j)));
                        }
                        m = add(&m, &scale(&hij, a[p][i] * a[q][j]));
                    }
                }
                m
            })
        })
    };

    let mut dl = [[[T::zero(); 2]; 2]; 2];
    let mut ddl = [[[[T::zero(); 2]; 2]; 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            for s in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            let w = a[p][i] * a[q][j] * a[s][k];
                            dl[p][q][s] = dl[p][q][s] + w * cov[i][j][k];
                        }
                    }
                }
                for t in 0..2 {
                    let mut acc = T::zero();
                    for i in 0..2 {
                        for j in 0..2 {
                            for k in 0..2 {
                                for m in 0..2 {
                                    acc = acc + a[p][i] * a[q][j] * a[s][k] * a[t][m] * cov2[i][j][k][m];
                                }
                            }
                        }
                    }
                    ddl[p][q][s][t] = acc;
                }
            }
        }
    }

    let inputs = IdentityInputs {
        p: field_mat(f, 0),
        p_a: frame_d(0),
        p_ab: frame_dd(0),
        s1_a: frame_d(9),
        s1_ab: frame_dd(9),
        s2_a: frame_d(18),
        s2_ab: frame_dd(18),
        l: sample.l,
        dl,
        ddl,
    };
    let kmax = sample.kappa[0].abs().max(sample.kappa[1].abs());
    let curv = (T::one() + kmax).powi(4);
    // The plain-difference error shrinks by (h/scale)² under extrapolation;
    // roundoff grows like ε/h².
    let ratio = (h2 / chart_scale).powi(2);
    let fmax = der.f0.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let est = der.spread * ratio + T::epsilon() * fmax / ratio;
    let tolerance = 1e-6_f64.max(10.0 * (est * curv).to_f64_lossy());
    Ok((inputs, tolerance))
}

/// Solves `e_a = A[a][0] r_u + A[a][1] r_v` for the tangent frame.
fn frame_coefficients<T: Real>(r: &[super::vec3::Vec3<T>; 2], frame: &[super::vec3::Vec3<T>; 2]) -> [[T; 2]; 2] {
    let g = [[r[0].dot(r[0]), r[0].dot(r[1])], [r[1].dot(r[0]), r[1].dot(r[1])]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let gi = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    std::array::from_fn(|a| {
        let b = [frame[a].dot(r[0]), frame[a].dot(r[1])];
        [gi[0][0] * b[0] + gi[0][1] * b[1], gi[1][0] * b[0] + gi[1][1] * b[1]]
    })
}

/// Default first-difference step for a chart: `ε^{1/3}` times its scale.
pub fn default_fd_step<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C) -> T {
    T::epsilon().cbrt() * chart.parameter_scale()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::{EllipsoidChart, PlanePatch, TorusChart};
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn sphere_reduction_is_exact() {
        let l = [[q(1), q(0)], [q(0), q(1)]];
        let x = adapted_frame_inputs(l, [[[q(0); 2]; 2]; 2], [[[[q(0); 2]; 2]; 2]; 2]);
        for e in evaluate_identities(&x) {
            assert_eq!(e.residual, q(0), "{}", e.name);
        }
        let lap = add(&x.p_ab[0][0], &x.p_ab[1][1]);
        assert_eq!(tr(&mul(&lap, &lap)), q(24));
        let mut s = q(0);
        for a in 0..2 {
            for b in 0..2 {
                s += tr(&mul(&x.p_ab[a][b], &x.p_ab[a][b]));
            }
        }
        assert_eq!(s, q(20));
    }

    #[test]
    fn plane_reduction_is_exact() {
        let z = [[q(0); 2]; 2];
        let x = adapted_frame_inputs(z, [[[q(0); 2]; 2]; 2], [[[[q(0); 2]; 2]; 2]; 2]);
        assert!(evaluate_identities(&x).iter().all(|e| e.residual == q(0)));
    }

    #[test]
    fn sphere_and_plane_numerically() {
        let c = EllipsoidChart::sphere(1.0_f64);
        let rep = boundary_identity_residuals(&c, 1.0, 2.0, default_fd_step(&c)).unwrap();
        assert!(rep.max_residual() < 1e-7, "{rep:?}");
        let rep = boundary_identity_residuals(&PlanePatch, 0.0, 0.0, 1e-5_f64).unwrap();
        assert!(rep.max_residual() < 1e-9, "{rep:?}");
    }

    #[test]
    fn ellipsoid_and_torus_points() {
        let e = EllipsoidChart::new(1.0_f64, 1.3, 1.7);
        for (u, v) in [(0.7, 0.3), (1.4, 2.2), (2.3, 5.0)] {
            let rep = boundary_identity_residuals(&e, u, v, default_fd_step(&e)).unwrap();
            assert!(rep.max_residual() < 1e-6, "{:#?}", rep);
            rep.check().unwrap();
        }
        let t = TorusChart { major: 2.0_f64, minor: 0.5 };
        let rep = boundary_identity_residuals(&t, 2.0, 1.0, default_fd_step(&t)).unwrap();
        assert!(rep.max_residual() < 1e-6, "{:#?}", rep);
    }

    #[test]
    fn adapted_frame_matches_finite_differences() {
        let e = EllipsoidChart::new(1.0_f64, 1.3, 1.7);
        let (fd, _) = finite_difference_inputs(&e, 1.0, 1.0, default_fd_step(&e)).unwrap();
        let ad = adapted_frame_inputs(fd.l, fd.dl, fd.ddl);
        for a in 0..2 {
            for b in 0..2 {
                let pairs = [
                    (tr(&mul(&fd.p_ab[a][b], &fd.p_ab[a][b])), tr(&mul(&ad.p_ab[a][b], &ad.p_ab[a][b]))),
                    (tr(&mul(&fd.s2_ab[a][b], &fd.p)), tr(&mul(&ad.s2_ab[a][b], &ad.p))),
                    (tr(&mul(&fd.s1_ab[a][b], &fd.s1_ab[a][b])), tr(&mul(&ad.s1_ab[a][b], &ad.s1_ab[a][b]))),
                    (tr(&mul(&fd.s2_a[a], &fd.p_a[b])), tr(&mul(&ad.s2_a[a], &ad.p_a[b]))),
                ];
                for (x, y) in pairs {
                    assert!((x - y).abs() < 1e-6, "{a}{b}: {x} vs {y}");
                }
            }
        }
        let rep = boundary_identity_residuals(&e, 1.0, 1.0, default_fd_step(&e)).unwrap();
        assert_eq!(rep.entries.len(), 17);
    }

    #[test]
    fn rejects_oversized_step() {
        let e = EllipsoidChart::sphere(1.0_f64);
        assert!(boundary_identity_residuals(&e, 1.0, 1.0, 0.5).is_err());
    }
}
