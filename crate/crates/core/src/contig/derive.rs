use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, RatF, Var, NVARS};
use crate::hyper::ParamsF1;

use super::{ContigRel, ShiftVec};

type Row = [RatF; 3];
type Mat = [[RatF; 3]; 3];

/// Rows are the coefficients of `F1(α+k+e10)`, `F1(α+k+e01)` and `F1(α+k)`
/// in the basis `F1(α+e10), F1(α+e01), F1(α)`.
pub type TransferMatrix = Mat;

/// Order in which the integral exponents `(p, q, r, s)` are stepped, given as
/// a permutation of `0..4`.
pub type AxisOrder = [usize; 4];

/// Exponent order q, p, r, s: the `m` axis first, then `k`, `l1`, `l2`.
const DEFAULT_ORDER: AxisOrder = [1, 0, 2, 3];

/// Point `(α; β1, β2; γ; x, y)` at which a relation is derived. Components
/// are either the free symbols (generic frame) or expressions in `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub alpha: RatF,
    pub beta1: RatF,
    pub beta2: RatF,
    pub gamma: RatF,
    pub x: RatF,
    pub y: RatF,
}

impl Frame {
    /// Symbols `a, b1, b2, c, x, y` standing for `α, β1, β2, γ, x, y`.
    pub fn generic() -> Frame {
        Frame {
            alpha: RatF::var(Var::A),
            beta1: RatF::var(Var::B1),
            beta2: RatF::var(Var::B2),
            gamma: RatF::var(Var::C),
            x: RatF::var(Var::X),
            y: RatF::var(Var::Y),
        }
    }

    pub fn new(alpha: RatF, beta1: RatF, beta2: RatF, gamma: RatF, x: RatF, y: RatF) -> Frame {
        Frame {
            alpha,
            beta1,
            beta2,
            gamma,
            x,
            y,
        }
    }

    /// Constant frame at an exact numeric point.
    pub fn numeric(p: &ParamsF1, x: &Rat, y: &Rat) -> Frame {
        let c = |r: &Rat| RatF::constant(r.clone());
        Frame::new(
            c(&p.alpha),
            c(&p.beta1),
            c(&p.beta2),
            c(&p.gamma),
            c(x),
            c(y),
        )
    }

    pub fn is_generic(&self) -> bool {
        *self == Frame::generic()
    }

    pub fn shifted(&self, k: &ShiftVec) -> Frame {
        let add = |f: &RatF, n: i64| f + &RatF::constant(Rat::from_integer(n.into()));
        Frame {
            alpha: add(&self.alpha, k.k),
            beta1: add(&self.beta1, k.l1),
            beta2: add(&self.beta2, k.l2),
            gamma: add(&self.gamma, k.m),
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }

    /// Evaluates the frame at a point, giving numeric parameters and arguments.
    pub fn eval(&self, pt: &[Option<Rat>; NVARS]) -> Result<(ParamsF1, Rat, Rat)> {
        Ok((
            ParamsF1::new(
                self.alpha.eval_point(pt)?,
                self.beta1.eval_point(pt)?,
                self.beta2.eval_point(pt)?,
                self.gamma.eval_point(pt)?,
            ),
            self.x.eval_point(pt)?,
            self.y.eval_point(pt)?,
        ))
    }

    fn components(&self) -> [&RatF; 6] {
        [
            &self.alpha,
            &self.beta1,
            &self.beta2,
            &self.gamma,
            &self.x,
            &self.y,
        ]
    }

    /// Polynomial images of the generic symbols, if every component is a
    /// polynomial.
    fn as_substitution(&self) -> Option<[Option<Poly>; NVARS]> {
        let mut subs: [Option<Poly>; NVARS] = Default::default();
        let vars = [Var::A, Var::B1, Var::B2, Var::C, Var::X, Var::Y];
        for (v, f) in vars.iter().zip(self.components()) {
            let d = f.den().constant_value()?;
            subs[v.index()] = Some(f.num().scale(&d.recip()));
        }
        Some(subs)
    }
}

fn int(n: i64) -> RatF {
    RatF::constant(Rat::from_integer(n.into()))
}

fn zero_row() -> Row {
    [RatF::zero(), RatF::zero(), RatF::zero()]
}

fn unit_row(i: usize) -> Row {
    let mut r = zero_row();
    r[i] = RatF::one();
    r
}

fn identity() -> Mat {
    [unit_row(0), unit_row(1), unit_row(2)]
}

fn row_times(w: &Row, m: &Mat) -> Row {
    let mut out = zero_row();
    for (i, wi) in w.iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        for j in 0..3 {
            if !m[i][j].is_zero() {
                out[j] = &out[j] + &(wi * &m[i][j]);
            }
        }
    }
    out
}

fn inverse(m: &Mat) -> Result<Mat> {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
    };
    let cof: Vec<Vec<RatF>> = (0..3).map(|i| (0..3).map(|j| c(i, j)).collect()).collect();
    let mut det = RatF::zero();
    for j in 0..3 {
        det = &det + &(&m[0][j] * &cof[0][j]);
    }
    if det.is_zero() {
        return Err(Error::Degenerate("singular step matrix".into()));
    }
    let inv_det = det.inv()?;
    let mut out = identity();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = &cof[j][i] * &inv_det;
        }
    }
    Ok(out)
}

/// Product of polynomials in the integration variable `t`, coefficient lists.
fn tmul(a: &[RatF], b: &[RatF]) -> Vec<RatF> {
    let mut out = vec![RatF::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn tscale(a: &[RatF], c: &RatF) -> Vec<RatF> {
    a.iter().map(|e| e * c).collect()
}

/// Step machinery over the integrals
/// `J(p,q,r,s) = ∫₀¹ t^p (1-t)^q (1-xt)^r (1-yt)^s dt`
/// with state vector `(J(p), J(p+1), J(p+2))` at fixed `(q, r, s)`.
struct Stepper {
    base: [RatF; 4],
    x: RatF,
    y: RatF,
    up: HashMap<(usize, [i64; 4]), Mat>,
    down: HashMap<(usize, [i64; 4]), Mat>,
}

impl Stepper {
    fn new(frame: &Frame) -> Stepper {
        let one = RatF::one();
        Stepper {
            base: [
                &frame.alpha - &one,
                &(&frame.gamma - &frame.alpha) - &one,
                -&frame.beta1,
                -&frame.beta2,
            ],
            x: frame.x.clone(),
            y: frame.y.clone(),
            up: HashMap::new(),
            down: HashMap::new(),
        }
    }

    fn point(&self, o: &[i64; 4]) -> [RatF; 4] {
        let mut out = self.base.clone();
        for (e, d) in out.iter_mut().zip(o.iter()) {
            if *d != 0 {
                *e = &*e + &int(*d);
            }
        }
        out
    }

    /// Coefficients `c_j` of `Σ c_j J(p+j) = 0`, from the vanishing integral
    /// of `d/dt [t^{p+1}(1-t)^{q+1}(1-xt)^{r+1}(1-yt)^{s+1}]`.
    fn ibp(&self, o: &[i64; 4]) -> [RatF; 4] {
        let [p, q, r, s] = self.point(o);
        let one = RatF::one();
        let lin = |c: &RatF| vec![RatF::one(), -c];
        let t = vec![RatF::zero(), RatF::one()];
        let omt = lin(&one);
        let omx = lin(&self.x);
        let omy = lin(&self.y);
        let t1 = tscale(&tmul(&tmul(&omt, &omx), &omy), &(&p + &one));
        let t2 = tscale(&tmul(&tmul(&t, &omx), &omy), &-&(&q + &one));
        let t3 = tscale(&tmul(&tmul(&t, &omt), &omy), &-&(&(&r + &one) * &self.x));
        let t4 = tscale(&tmul(&tmul(&t, &omt), &omx), &-&(&(&s + &one) * &self.y));
        let mut c: [RatF; 4] = Default::default();
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = &(&(&t1[i] + &t2[i]) + &t3[i]) + &t4[i];
        }
        c
    }

    /// Matrix of the unit step along `axis` starting from offset `o`.
    fn up_step(&mut self, axis: usize, o: [i64; 4]) -> Result<Mat> {
        if let Some(m) = self.up.get(&(axis, o)) {
            return Ok(m.clone());
        }
        let c = self.ibp(&o);
        if c[3].is_zero() {
            return Err(Error::Degenerate(
                "leading recurrence coefficient vanishes identically".into(),
            ));
        }
        let lead = c[3].inv()?;
        let sp: Mat = [
            unit_row(1),
            unit_row(2),
            [-&(&c[0] * &lead), -&(&c[1] * &lead), -&(&c[2] * &lead)],
        ];
        let m = match axis {
            0 => sp,
            _ => {
                let w = match axis {
                    1 => RatF::one(),
                    2 => self.x.clone(),
                    _ => self.y.clone(),
                };
                let mut m = identity();
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] = &m[i][j] - &(&w * &sp[i][j]);
                    }
                }
                m
            }
        };
        self.up.insert((axis, o), m.clone());
        Ok(m)
    }

    /// Matrix of the unit step down along `axis`, landing on offset `o`.
    fn down_step(&mut self, axis: usize, o: [i64; 4]) -> Result<Mat> {
        if let Some(m) = self.down.get(&(axis, o)) {
            return Ok(m.clone());
        }
        let m = inverse(&self.up_step(axis, o)?)?;
        self.down.insert((axis, o), m.clone());
        Ok(m)
    }

    /// Row `w` with `J(base + target) = w · (J(p), J(p+1), J(p+2))` at the base.
    fn j_row(&mut self, target: [i64; 4], order: &AxisOrder) -> Result<Row> {
        let mut cur = [0i64; 4];
        let mut steps = Vec::new();
        for &axis in order {
            while cur[axis] < target[axis] {
                steps.push(self.up_step(axis, cur)?);
                cur[axis] += 1;
            }
            while cur[axis] > target[axis] {
                cur[axis] -= 1;
                steps.push(self.down_step(axis, cur)?);
            }
        }
        let mut w = unit_row(0);
        for s in steps.iter().rev() {
            w = row_times(&w, s);
        }
        Ok(w)
    }
}

fn j_offset(k: &ShiftVec) -> [i64; 4] {
    [k.k, k.m - k.k, -k.l1, -k.l2]
}

/// Rising factorial `(z)_n` for any integer `n`, as a rational function.
fn pochhammer(z: &RatF, n: i64) -> Result<RatF> {
    let mut acc = RatF::one();
    if n >= 0 {
        for i in 0..n {
            acc = &acc * &(z + &int(i));
        }
        Ok(acc)
    } else {
        for i in 1..=-n {
            acc = &acc * &(z - &int(i));
        }
        acc.inv()
    }
}

/// Solves the 2×2 system `m · (u, v) = rhs`, pivoting on the nonzero entry of
/// smallest numerator degree.
fn solve2(m: [[RatF; 2]; 2], rhs: [RatF; 2]) -> Result<[RatF; 2]> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in 0..2 {
        for j in 0..2 {
            if m[i][j].is_zero() {
                continue;
            }
            let d = m[i][j].num().total_degree() + m[i][j].den().total_degree();
            if best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((i, j, d));
            }
        }
    }
    let (i, j, _) = best.ok_or_else(|| Error::Degenerate("zero basis system".into()))?;
    let (oi, oj) = (1 - i, 1 - j);
    let f = m[oi][j].checked_div(&m[i][j])?;
    let a = &m[oi][oj] - &(&f * &m[i][oj]);
    let b = &rhs[oi] - &(&f * &rhs[i]);
    if a.is_zero() {
        return Err(Error::Degenerate("basis relations are dependent".into()));
    }
    let second = b.checked_div(&a)?;
    let first = (&rhs[i] - &(&m[i][oj] * &second)).checked_div(&m[i][j])?;
    let mut out = [RatF::zero(), RatF::zero()];
    out[j] = first;
    out[oj] = second;
    Ok(out)
}

fn derive_in(frame: &Frame, k: &ShiftVec, order: &AxisOrder) -> Result<ContigRel> {
    let mut st = Stepper::new(frame);
    let wt = st.j_row(j_offset(k), order)?;
    let w10 = st.j_row(j_offset(&ShiftVec::e10()), order)?;
    let w01 = st.j_row(j_offset(&ShiftVec::e01()), order)?;
    let [a10, a01] = solve2(
        [
            [w10[1].clone(), w01[1].clone()],
            [w10[2].clone(), w01[2].clone()],
        ],
        [wt[1].clone(), wt[2].clone()],
    )?;
    let a00 = &(&wt[0] - &(&a10 * &w10[0])) - &(&a01 * &w01[0]);
    // F1 = Γ(γ)/(Γ(α)Γ(γ-α)) · J, so switching normalization multiplies by
    // ratios of Pochhammer symbols.
    let g_minus_a = &frame.gamma - &frame.alpha;
    let nt = pochhammer(&frame.gamma, k.m)?
        .checked_div(&(&pochhammer(&frame.alpha, k.k)? * &pochhammer(&g_minus_a, k.m - k.k)?))?;
    let basis = frame.alpha.checked_div(&frame.gamma)?;
    let nb = &nt * &basis;
    Ok(ContigRel {
        shift: *k,
        frame: frame.clone(),
        q10: &a10 * &nb,
        q01: &a01 * &nb,
        q00: &a00 * &nt,
    })
}

/// Four-term relation for the shift `k` with coefficients in the generic
/// symbols `a, b1, b2, c, x, y` (standing for `α, β1, β2, γ, x, y`).
pub fn derive_contiguity(k: &ShiftVec) -> Result<ContigRel> {
    derive_in(&Frame::generic(), k, &DEFAULT_ORDER)
}

/// Same as [`derive_contiguity`] with an explicit stepping order.
pub fn derive_contiguity_ordered(
    frame: &Frame,
    k: &ShiftVec,
    order: &AxisOrder,
) -> Result<ContigRel> {
    let mut seen = [false; 4];
    for &a in order {
        if a >= 4 || seen[a] {
            return Err(Error::Domain(format!("not an axis permutation: {order:?}")));
        }
        seen[a] = true;
    }
    derive_in(frame, k, order)
}

/// Relation derived directly in a specialized frame. If the specialization
/// makes a pivot vanish, the generic relation is derived and substituted
/// instead.
pub fn derive_contiguity_at(frame: &Frame, k: &ShiftVec) -> Result<ContigRel> {
    match derive_in(frame, k, &DEFAULT_ORDER) {
        Err(Error::Degenerate(_)) | Err(Error::DivisionByZero) if !frame.is_generic() => {
            let subs = frame.as_substitution().ok_or_else(|| {
                Error::Degenerate(
                    "specialized pivot vanished and the frame is not polynomial".into(),
                )
            })?;
            let g = derive_contiguity(k)?;
            let sub = |f: &RatF| {
                f.substitute(&subs).map_err(|_| {
                    Error::Degenerate(format!("relation for {k} has a pole on this frame"))
                })
            };
            Ok(ContigRel {
                shift: *k,
                frame: frame.clone(),
                q10: sub(&g.q10)?,
                q01: sub(&g.q01)?,
                q00: sub(&g.q00)?,
            })
        }
        r => r,
    }
}

/// Transfer matrix from the basis at `α` to the basis at `α + k`.
pub fn transfer_matrix(frame: &Frame, k: &ShiftVec) -> Result<TransferMatrix> {
    let row = |s: ShiftVec| -> Result<Row> {
        let r = derive_contiguity_at(frame, &s)?;
        Ok([r.q10, r.q01, r.q00])
    };
    Ok([
        row(*k + ShiftVec::e10())?,
        row(*k + ShiftVec::e01())?,
        row(*k)?,
    ])
}

/// Product `a · b` of transfer matrices.
pub fn compose_transfer(a: &TransferMatrix, b: &TransferMatrix) -> TransferMatrix {
    [
        row_times(&a[0], b),
        row_times(&a[1], b),
        row_times(&a[2], b),
    ]
}
