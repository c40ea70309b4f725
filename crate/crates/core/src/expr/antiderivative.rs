use std::fmt;
use std::sync::Mutex;

use super::{BinOp, ExprError, Func, RateExpr};

/// Absolute tolerance of the quadrature fallback per unit length.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Frequencies below this are integrated numerically; the closed forms
/// divide by the frequency and lose all digits as it goes to zero.
const MIN_FREQUENCY: f64 = 1e-6;

/// Width of the panels an interval is split into before adaptive Simpson
/// refinement starts, so oscillatory integrands are not under-sampled.
const PANEL_WIDTH: f64 = 0.25;
const MAX_DEPTH: u32 = 48;

/// F(t) = ∫₀ᵗ f(τ) dτ, exact when the integrand is in the supported table.
#[derive(Debug, Clone)]
pub enum Antiderivative {
    Closed(RateExpr),
    Quadrature(Quadrature),
}

impl Antiderivative {
    pub fn value(&self, t: f64) -> Result<f64, ExprError> {
        match self {
            Antiderivative::Closed(f) => f.eval(t),
            Antiderivative::Quadrature(q) => q.value(t),
        }
    }

    pub fn closed_form(&self) -> Option<&RateExpr> {
        match self {
            Antiderivative::Closed(f) => Some(f),
            Antiderivative::Quadrature(_) => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Antiderivative::Closed(_))
    }
}

/// Cumulative adaptive-Simpson integral from 0 with a checkpoint cache.
///
/// Each query integrates only from the nearest cached checkpoint below it,
/// so sweeping an increasing grid costs O(1) integrand panels per point.
pub struct Quadrature {
    integrand: RateExpr,
    checkpoints: Mutex<Vec<(f64, f64)>>,
}

impl Quadrature {
    pub fn new(integrand: RateExpr) -> Self {
        Quadrature {
            integrand,
            checkpoints: Mutex::new(vec![(0.0, 0.0)]),
        }
    }

    pub fn integrand(&self) -> &RateExpr {
        &self.integrand
    }

    pub fn value(&self, t: f64) -> Result<f64, ExprError> {
        if t == 0.0 {
            return Ok(0.0);
        }
        if !t.is_finite() {
            return Err(ExprError::NonFinite { t });
        }
        if t < 0.0 {
            return Ok(-self.integrate(t, 0.0)?);
        }
        let (start, base) = {
            let cache = self.checkpoints.lock().expect("quadrature cache poisoned");
            let idx = cache.partition_point(|(s, _)| *s <= t);
            cache[idx - 1]
        };
        if start == t {
            return Ok(base);
        }
        let value = base + self.integrate(start, t)?;
        let mut cache = self.checkpoints.lock().expect("quadrature cache poisoned");
        let idx = cache.partition_point(|(s, _)| *s < t);
        if cache.get(idx).is_none_or(|(s, _)| *s != t) {
            cache.insert(idx, (t, value));
        }
        Ok(value)
    }

    fn integrate(&self, a: f64, b: f64) -> Result<f64, ExprError> {
        let f = |x: f64| self.integrand.eval(x);
        let len = b - a;
        let panels = (len / PANEL_WIDTH).ceil().max(1.0) as usize;
        let h = len / panels as f64;
        let eps = QUADRATURE_TOL * 0.05 * h;
        let mut total = 0.0;
        for k in 0..panels {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            let (flo, fhi) = (f(lo)?, f(hi)?);
            let mid = 0.5 * (lo + hi);
            let fmid = f(mid)?;
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            total += simpson(&f, lo, hi, flo, fmid, fhi, whole, eps, MAX_DEPTH)?;
        }
        Ok(total)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64, ExprError>
where
    F: Fn(f64) -> Result<f64, ExprError>,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // at least two levels of refinement before trusting the error estimate
    if depth == 0 || (depth + 2 <= MAX_DEPTH && delta.abs() <= 15.0 * eps) {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?)
}

impl Clone for Quadrature {
    fn clone(&self) -> Self {
        let cache = self.checkpoints.lock().expect("quadrature cache poisoned");
        Quadrature {
            integrand: self.integrand.clone(),
            checkpoints: Mutex::new(cache.clone()),
        }
    }
}

impl fmt::Debug for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quadrature")
            .field("integrand", &self.integrand.to_string())
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    One,
    Monomial(i32),
    Sin(f64, f64),
    Cos(f64, f64),
    SinSquared(f64, f64),
    CosSquared(f64, f64),
    Exp(f64, f64),
}

/// Splits `a*t + b` into `(a, b)`.
fn linear(e: &RateExpr) -> Option<(f64, f64)> {
    match e {
        RateExpr::T => Some((1.0, 0.0)),
        RateExpr::Num(c) => Some((0.0, *c)),
        RateExpr::Neg(x) => linear(x).map(|(a, b)| (-a, -b)),
        RateExpr::Binary(op, x, y) => {
            let (p, q) = (linear(x)?, linear(y)?);
            match op {
                BinOp::Add => Some((p.0 + q.0, p.1 + q.1)),
                BinOp::Sub => Some((p.0 - q.0, p.1 - q.1)),
                BinOp::Mul if p.0 == 0.0 => Some((p.1 * q.0, p.1 * q.1)),
                BinOp::Mul if q.0 == 0.0 => Some((q.1 * p.0, q.1 * p.1)),
                BinOp::Div if q.0 == 0.0 && q.1 != 0.0 => Some((p.0 / q.1, p.1 / q.1)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Decomposes `e` into a weighted sum of table shapes.
fn collect(e: &RateExpr, scale: f64, out: &mut Vec<(f64, Shape)>) -> bool {
    use RateExpr::*;
    match e {
        Num(c) => {
            out.push((scale * c, Shape::One));
            true
        }
        T => {
            out.push((scale, Shape::Monomial(1)));
            true
        }
        Neg(x) => collect(x, -scale, out),
        Binary(BinOp::Add, x, y) => collect(x, scale, out) && collect(y, scale, out),
        Binary(BinOp::Sub, x, y) => collect(x, scale, out) && collect(y, -scale, out),
        Binary(BinOp::Mul, x, y) => match (x.as_constant(), y.as_constant()) {
            (Some(c), _) => collect(y, scale * c, out),
            (_, Some(c)) => collect(x, scale * c, out),
            _ => false,
        },
        Binary(BinOp::Div, x, y) => match y.as_constant() {
            Some(c) if c != 0.0 => collect(x, scale / c, out),
            _ => false,
        },
        Pow(x, n) => {
            let shape = match (x.as_ref(), *n) {
                (T, n) if n >= 0 => Some(Shape::Monomial(n)),
                (Call(Func::Sin, arg), 2) => linear(arg).map(|(a, b)| Shape::SinSquared(a, b)),
                (Call(Func::Cos, arg), 2) => linear(arg).map(|(a, b)| Shape::CosSquared(a, b)),
                _ => None,
            };
            shape.map(|s| out.push((scale, s))).is_some()
        }
        Call(func, arg) => {
            let Some((a, b)) = linear(arg) else {
                return false;
            };
            let shape = match func {
                Func::Sin => Shape::Sin(a, b),
                Func::Cos => Shape::Cos(a, b),
                Func::Exp => Shape::Exp(a, b),
            };
            out.push((scale, shape));
            true
        }
    }
}

fn lin(a: f64, b: f64) -> RateExpr {
    RateExpr::num(a).mul(RateExpr::T).add(RateExpr::num(b))
}

/// Closed-form ∫₀ᵗ of one shape, written so that the value at t = 0 is an
/// exact floating-point zero (each periodic term is `g(a·t+b) − g(b)`).
fn integrate_shape(shape: Shape) -> Option<RateExpr> {
    use RateExpr as E;
    let small = |a: f64| a != 0.0 && a.abs() < MIN_FREQUENCY;
    Some(match shape {
        Shape::One => E::T,
        Shape::Monomial(n) => {
            let m = n.checked_add(1)?;
            E::T.powi(m).div(E::num(m as f64))
        }
        Shape::Sin(a, b) | Shape::Cos(a, b) | Shape::Exp(a, b) if a == 0.0 => {
            let c = match shape {
                Shape::Sin(..) => b.sin(),
                Shape::Cos(..) => b.cos(),
                _ => b.exp(),
            };
            E::num(c).mul(E::T)
        }
        Shape::SinSquared(a, b) | Shape::CosSquared(a, b) if a == 0.0 => {
            let c = match shape {
                Shape::SinSquared(..) => b.sin().powi(2),
                _ => b.cos().powi(2),
            };
            E::num(c).mul(E::T)
        }
        Shape::Sin(a, _) | Shape::Cos(a, _) | Shape::Exp(a, _) if small(a) => return None,
        Shape::SinSquared(a, _) | Shape::CosSquared(a, _) if small(a) => return None,
        Shape::Sin(a, b) => E::num(b.cos()).sub(E::cos(lin(a, b))).div(E::num(a)),
        Shape::Cos(a, b) => E::sin(lin(a, b)).sub(E::num(b.sin())).div(E::num(a)),
        Shape::Exp(a, b) => E::num(b.exp())
            .mul(E::exp(lin(a, 0.0)).sub(E::num(1.0)))
            .div(E::num(a)),
        Shape::SinSquared(a, b) | Shape::CosSquared(a, b) => {
            let wobble = E::sin(lin(2.0 * a, 2.0 * b))
                .sub(E::num((2.0 * b).sin()))
                .div(E::num(4.0 * a));
            let half_t = E::T.div(E::num(2.0));
            if matches!(shape, Shape::SinSquared(..)) {
                half_t.sub(wobble)
            } else {
                half_t.add(wobble)
            }
        }
    })
}

/// Antiderivative normalized to F(0) = 0. Integrands that are sums of
/// constant multiples of c, tⁿ, sin(at+b), cos(at+b), sin²(at+b), cos²(at+b)
/// and exp(at+b) get a closed form; anything else falls back to quadrature.
pub fn antiderivative(f: &RateExpr) -> Antiderivative {
    let f = f.folded();
    let mut terms = Vec::new();
    if collect(&f, 1.0, &mut terms) {
        let mut total: Option<RateExpr> = None;
        let mut closed = true;
        for (weight, shape) in terms {
            if weight == 0.0 {
                continue;
            }
            let Some(piece) = integrate_shape(shape) else {
                closed = false;
                break;
            };
            let piece = RateExpr::num(weight).mul(piece);
            total = Some(match total {
                None => piece,
                Some(acc) => acc.add(piece),
            });
        }
        if closed {
            let closed_form = total.unwrap_or(RateExpr::Num(0.0)).folded();
            if closed_form.eval(0.0) == Ok(0.0) {
                return Antiderivative::Closed(closed_form);
            }
        }
    }
    Antiderivative::Quadrature(Quadrature::new(f))
}
