//! Piecewise-analytic warping functions with exact first and second
//! derivatives, evaluated through order-2 jets. No finite differencing:
//! downstream inequality checks are derivative-sign conditions and would
//! drown in truncation noise otherwise.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Value, first and second derivative of a scalar function at a point.
#[derive(Clone, Copy, Debug)]
pub struct Jet<S> {
    pub f: S,
    pub df: S,
    pub ddf: S,
}

impl<S: Real> Jet<S> {
    pub fn constant(v: S) -> Self {
        Jet { f: v, df: S::zero(), ddf: S::zero() }
    }

    /// The identity jet at t.
    pub fn var(t: S) -> Self {
        Jet { f: t, df: S::one(), ddf: S::zero() }
    }

    pub fn add(self, o: Jet<S>) -> Jet<S> {
        Jet { f: self.f + o.f, df: self.df + o.df, ddf: self.ddf + o.ddf }
    }

    pub fn sub(self, o: Jet<S>) -> Jet<S> {
        Jet { f: self.f - o.f, df: self.df - o.df, ddf: self.ddf - o.ddf }
    }

    pub fn mul(self, o: Jet<S>) -> Jet<S> {
        Jet {
            f: self.f * o.f,
            df: self.df * o.f + self.f * o.df,
            ddf: self.ddf * o.f + S::of(2.0) * self.df * o.df + self.f * o.ddf,
        }
    }

    pub fn div(self, o: Jet<S>) -> Jet<S> {
        let f = self.f / o.f;
        let df = (self.df - f * o.df) / o.f;
        let ddf = (self.ddf - S::of(2.0) * df * o.df - f * o.ddf) / o.f;
        Jet { f, df, ddf }
    }

    pub fn scale(self, k: S) -> Jet<S> {
        Jet { f: k * self.f, df: k * self.df, ddf: k * self.ddf }
    }

    pub fn sqrt(self) -> Jet<S> {
        let r = self.f.sqrt();
        let df = self.df / (S::of(2.0) * r);
        let ddf = self.ddf / (S::of(2.0) * r) - self.df * self.df / (S::of(4.0) * r * r * r);
        Jet { f: r, df, ddf }
    }

    pub fn powf(self, alpha: S) -> Jet<S> {
        let f = self.f.powf(alpha);
        let fm1 = self.f.powf(alpha - S::one());
        let fm2 = self.f.powf(alpha - S::of(2.0));
        Jet {
            f,
            df: alpha * fm1 * self.df,
            ddf: alpha * fm1 * self.ddf + alpha * (alpha - S::one()) * fm2 * self.df * self.df,
        }
    }

    pub fn sin(self) -> Jet<S> {
        let (s, c) = (self.f.sin(), self.f.cos());
        Jet {
            f: s,
            df: c * self.df,
            ddf: c * self.ddf - s * self.df * self.df,
        }
    }
}

/// Analytic form of one profile piece.
#[derive(Clone, Debug)]
pub enum Form<S> {
    /// f = v
    Constant(S),
    /// f = sum_k coeffs[k] (t - center)^k
    Poly { coeffs: Vec<S>, center: S },
    /// f0(t) = c0 t / sqrt(1 + c0^2 t^2), the Cheeger-deformed cone scale
    CheegerCone { c0: S },
    /// f = p(t)^alpha with p the polynomial above
    PowerOfPoly { coeffs: Vec<S>, center: S, alpha: S },
    /// f = amplitude * sin(frequency * t)
    Sine { amplitude: S, frequency: S },
    /// f^2 = lambda mu rho / (lambda rho + (1 - lambda) mu)
    BallWarp { mu: S, rho: S, lambda: Box<Form<S>> },
    /// f^2 = delta g^2 / (g^2 + delta) with g the inner form
    CheegerDeformed { delta: S, inner: Box<Form<S>> },
    /// f(t) = factor * inner(t)
    Scaled { factor: S, inner: Box<Form<S>> },
    /// f(t) = offset + inner(t)
    Offset { offset: S, inner: Box<Form<S>> },
    /// f(t) = inner(t - offset)
    Shifted { offset: S, inner: Box<Form<S>> },
    /// f(t) = inner(2 about - t), mirror image
    Reflected { about: S, inner: Box<Form<S>> },
    /// Quintic-smoothstep mix: (1 - B) left + B right with B ramping on [from, to]
    Blend { from: S, to: S, left: Box<Form<S>>, right: Box<Form<S>> },
    /// constant + sum of coeff * form
    LinComb { constant: S, terms: Vec<(S, Form<S>)> },
    /// f(t) = plateau - drop * exp(-rate (t - center)): increasing, strictly
    /// concave, asymptotically flat
    ExpDecay { plateau: S, drop: S, rate: S, center: S },
}

/// Quintic smoothstep 6u^5 - 15u^4 + 10u^3 clamped to [0, 1], as a jet in t.
fn smoothstep<S: Real>(t: S, from: S, to: S) -> Jet<S> {
    if t <= from {
        return Jet::constant(S::zero());
    }
    if t >= to {
        return Jet::constant(S::one());
    }
    let w = to - from;
    let u = (t - from) / w;
    let b = u * u * u * (S::of(10.0) + u * (S::of(-15.0) + S::of(6.0) * u));
    let db = S::of(30.0) * u * u * (S::one() - u) * (S::one() - u) / w;
    let ddb = S::of(60.0) * u * (S::one() - u) * (S::one() - S::of(2.0) * u) / (w * w);
    Jet { f: b, df: db, ddf: ddb }
}

impl<S: Real> Form<S> {
    pub fn eval(&self, t: S) -> Jet<S> {
        match self {
            Form::Constant(v) => Jet::constant(*v),
            Form::Poly { coeffs, center } => {
                let x = t - *center;
                // Horner for f, f', f''.
                let mut f = S::zero();
                let mut df = S::zero();
                let mut ddf = S::zero();
                for &a in coeffs.iter().rev() {
                    ddf = ddf * x + S::of(2.0) * df;
                    df = df * x + f;
                    f = f * x + a;
                }
                Jet { f, df, ddf }
            }
            Form::CheegerCone { c0 } => {
                let tt = Jet::var(t);
                let c0t = tt.scale(*c0);
                let denom = c0t.mul(c0t).add(Jet::constant(S::one())).sqrt();
                c0t.div(denom)
            }
            Form::PowerOfPoly { coeffs, center, alpha } => {
                let p = Form::Poly { coeffs: coeffs.clone(), center: *center }.eval(t);
                p.powf(*alpha)
            }
            Form::Sine { amplitude, frequency } => {
                Jet::var(t).scale(*frequency).sin().scale(*amplitude)
            }
            Form::BallWarp { mu, rho, lambda } => {
                let lam = lambda.eval(t);
                let num = lam.scale(*mu * *rho);
                let den = lam.scale(*rho - *mu).add(Jet::constant(*mu));
                num.div(den).sqrt()
            }
            Form::CheegerDeformed { delta, inner } => {
                let g = inner.eval(t);
                let g2 = g.mul(g);
                let num = g2.scale(*delta);
                let den = g2.add(Jet::constant(*delta));
                num.div(den).sqrt()
            }
            Form::Scaled { factor, inner } => inner.eval(t).scale(*factor),
            Form::Offset { offset, inner } => {
                inner.eval(t).add(Jet::constant(*offset))
            }
            Form::Shifted { offset, inner } => inner.eval(t - *offset),
            Form::Reflected { about, inner } => {
                let j = inner.eval(S::of(2.0) * *about - t);
                Jet { f: j.f, df: -j.df, ddf: j.ddf }
            }
            Form::Blend { from, to, left, right } => {
                let b = smoothstep(t, *from, *to);
                let one_minus = Jet::constant(S::one()).sub(b);
                left.eval(t).mul(one_minus).add(right.eval(t).mul(b))
            }
            Form::LinComb { constant, terms } => {
                let mut acc = Jet::constant(*constant);
                for (coef, form) in terms {
                    acc = acc.add(form.eval(t).scale(*coef));
                }
                acc
            }
            Form::ExpDecay { plateau, drop, rate, center } => {
                let e = (-(*rate) * (t - *center)).exp();
                Jet {
                    f: *plateau - *drop * e,
                    df: *drop * *rate * e,
                    ddf: -*drop * *rate * *rate * e,
                }
            }
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let num = |v: &S| serde_json::Value::String(format!("{v}"));
        let nums = |vs: &[S]| {
            serde_json::Value::Array(vs.iter().map(|v| num(v)).collect())
        };
        match self {
            Form::Constant(v) => serde_json::json!({"form": "constant", "value": num(v)}),
            Form::Poly { coeffs, center } => {
                serde_json::json!({"form": "poly", "coeffs": nums(coeffs), "center": num(center)})
            }
            Form::CheegerCone { c0 } => serde_json::json!({"form": "cheegerCone", "c0": num(c0)}),
            Form::PowerOfPoly { coeffs, center, alpha } => serde_json::json!({
                "form": "powerOfPoly", "coeffs": nums(coeffs), "center": num(center),
                "alpha": num(alpha)
            }),
            Form::Sine { amplitude, frequency } => serde_json::json!({
                "form": "sine", "amplitude": num(amplitude), "frequency": num(frequency)
            }),
            Form::BallWarp { mu, rho, lambda } => serde_json::json!({
                "form": "ballWarp", "mu": num(mu), "rho": num(rho), "lambda": lambda.to_json()
            }),
            Form::CheegerDeformed { delta, inner } => serde_json::json!({
                "form": "cheegerDeformed", "delta": num(delta), "inner": inner.to_json()
            }),
            Form::Scaled { factor, inner } => serde_json::json!({
                "form": "scaled", "factor": num(factor), "inner": inner.to_json()
            }),
            Form::Offset { offset, inner } => serde_json::json!({
                "form": "offset", "offset": num(offset), "inner": inner.to_json()
            }),
            Form::Shifted { offset, inner } => serde_json::json!({
                "form": "shifted", "offset": num(offset), "inner": inner.to_json()
            }),
            Form::Reflected { about, inner } => serde_json::json!({
                "form": "reflected", "about": num(about), "inner": inner.to_json()
            }),
            Form::Blend { from, to, left, right } => serde_json::json!({
                "form": "blend", "from": num(from), "to": num(to),
                "left": left.to_json(), "right": right.to_json()
            }),
            Form::LinComb { constant, terms } => serde_json::json!({
                "form": "linComb",
                "constant": num(constant),
                "terms": terms
                    .iter()
                    .map(|(c, f)| serde_json::json!({"coeff": num(c), "inner": f.to_json()}))
                    .collect::<Vec<_>>(),
            }),
            Form::ExpDecay { plateau, drop, rate, center } => serde_json::json!({
                "form": "expDecay", "plateau": num(plateau), "drop": num(drop),
                "rate": num(rate), "center": num(center)
            }),
        }
    }

    fn from_json(doc: &serde_json::Value) -> Result<Form<S>> {
        let bad = |m: &str| Error::Serialization(format!("profile form: {m}"));
        let num = |v: &serde_json::Value| -> Result<S> {
            match v {
                serde_json::Value::String(s) => {
                    S::parse_decimal(s).ok_or_else(|| bad(&format!("bad decimal `{s}`")))
                }
                serde_json::Value::Number(n) => {
                    n.as_f64().map(S::of).ok_or_else(|| bad("non-finite number"))
                }
                _ => Err(bad("expected number")),
            }
        };
        let nums = |v: &serde_json::Value| -> Result<Vec<S>> {
            v.as_array().ok_or_else(|| bad("expected array"))?.iter().map(num).collect()
        };
        let field = |k: &str| doc.get(k).ok_or_else(|| bad(&format!("missing `{k}`")));
        let kind = field("form")?.as_str().ok_or_else(|| bad("`form` must be a string"))?;
        Ok(match kind {
            "constant" => Form::Constant(num(field("value")?)?),
            "poly" => Form::Poly { coeffs: nums(field("coeffs")?)?, center: num(field("center")?)? },
            "cheegerCone" => Form::CheegerCone { c0: num(field("c0")?)? },
            "powerOfPoly" => Form::PowerOfPoly {
                coeffs: nums(field("coeffs")?)?,
                center: num(field("center")?)?,
                alpha: num(field("alpha")?)?,
            },
            "sine" => Form::Sine {
                amplitude: num(field("amplitude")?)?,
                frequency: num(field("frequency")?)?,
            },
            "ballWarp" => Form::BallWarp {
                mu: num(field("mu")?)?,
                rho: num(field("rho")?)?,
                lambda: Box::new(Form::from_json(field("lambda")?)?),
            },
            "cheegerDeformed" => Form::CheegerDeformed {
                delta: num(field("delta")?)?,
                inner: Box::new(Form::from_json(field("inner")?)?),
            },
            "scaled" => Form::Scaled {
                factor: num(field("factor")?)?,
                inner: Box::new(Form::from_json(field("inner")?)?),
            },
            "offset" => Form::Offset {
                offset: num(field("offset")?)?,
                inner: Box::new(Form::from_json(field("inner")?)?),
            },
            "shifted" => Form::Shifted {
                offset: num(field("offset")?)?,
                inner: Box::new(Form::from_json(field("inner")?)?),
            },
            "reflected" => Form::Reflected {
                about: num(field("about")?)?,
                inner: Box::new(Form::from_json(field("inner")?)?),
            },
            "blend" => Form::Blend {
                from: num(field("from")?)?,
                to: num(field("to")?)?,
                left: Box::new(Form::from_json(field("left")?)?),
                right: Box::new(Form::from_json(field("right")?)?),
            },
            "linComb" => {
                let terms = field("terms")?
                    .as_array()
                    .ok_or_else(|| bad("terms must be an array"))?
                    .iter()
                    .map(|t| {
                        Ok((
                            num(t.get("coeff").ok_or_else(|| bad("missing coeff"))?)?,
                            Form::from_json(t.get("inner").ok_or_else(|| bad("missing inner"))?)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Form::LinComb { constant: num(field("constant")?)?, terms }
            }
            "expDecay" => Form::ExpDecay {
                plateau: num(field("plateau")?)?,
                drop: num(field("drop")?)?,
                rate: num(field("rate")?)?,
                center: num(field("center")?)?,
            },
            other => return Err(bad(&format!("unknown form `{other}`"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Piece<S> {
    pub lo: S,
    pub hi: S,
    pub form: Form<S>,
}

/// Piecewise-analytic positive function on an interval.
#[derive(Clone, Debug)]
pub struct WarpProfile<S> {
    pieces: Vec<Piece<S>>,
}

impl<S: Real> WarpProfile<S> {
    pub fn single(lo: S, hi: S, form: Form<S>) -> Result<Self> {
        Self::from_pieces(vec![Piece { lo, hi, form }])
    }

    pub fn constant(lo: S, hi: S, v: S) -> Result<Self> {
        Self::single(lo, hi, Form::Constant(v))
    }

    pub fn from_pieces(pieces: Vec<Piece<S>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidProfile("no pieces".into()));
        }
        for p in &pieces {
            if !(p.lo < p.hi) {
                return Err(Error::InvalidProfile("empty or inverted piece interval".into()));
            }
        }
        for w in pieces.windows(2) {
            if (w[0].hi - w[1].lo).abs() > S::of(1e-12) * (S::one() + w[0].hi.abs()) {
                return Err(Error::InvalidProfile("pieces are not contiguous".into()));
            }
        }
        Ok(WarpProfile { pieces })
    }

    pub fn domain(&self) -> (S, S) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    /// Interior piece boundaries, where f'' may be less regular.
    pub fn breakpoints(&self) -> Vec<S> {
        self.pieces[1..].iter().map(|p| p.lo).collect()
    }

    pub fn is_breakpoint(&self, t: S, tol: S) -> bool {
        self.breakpoints().iter().any(|&b| (t - b).abs() <= tol)
    }

    pub fn eval(&self, t: S) -> Result<Jet<S>> {
        let (lo, hi) = self.domain();
        let slack = S::of(1e-9) * (S::one() + hi.abs() + lo.abs());
        if t < lo - slack || t > hi + slack {
            return Err(Error::Precondition(format!(
                "t = {} outside profile domain [{}, {}]",
                t.to_f64_lossy(),
                lo.to_f64_lossy(),
                hi.to_f64_lossy()
            )));
        }
        let idx = self
            .pieces
            .iter()
            .position(|p| t < p.hi)
            .unwrap_or(self.pieces.len() - 1);
        Ok(self.pieces[idx].form.eval(t))
    }

    pub fn value(&self, t: S) -> Result<S> {
        Ok(self.eval(t)?.f)
    }

    /// Apply a pointwise-in-t Cheeger deformation: f -> sqrt(delta f^2 / (f^2 + delta)).
    pub fn cheeger_deformed(&self, delta: S) -> WarpProfile<S> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo,
                hi: p.hi,
                form: Form::CheegerDeformed { delta, inner: Box::new(p.form.clone()) },
            })
            .collect();
        WarpProfile { pieces }
    }

    /// Check C^2 joins: f and f' continuous to `tol_c1`, f'' to `tol_c2`,
    /// relative to the local scale. Returns the worst (c1, c2) residuals.
    pub fn join_residuals(&self) -> (S, S) {
        let mut worst_c1 = S::zero();
        let mut worst_c2 = S::zero();
        for w in self.pieces.windows(2) {
            let t = w[1].lo;
            let a = w[0].form.eval(t);
            let b = w[1].form.eval(t);
            let scale = S::one() + a.f.abs() + a.df.abs();
            worst_c1 = worst_c1.max((a.f - b.f).abs() / scale);
            worst_c1 = worst_c1.max((a.df - b.df).abs() / scale);
            let scale2 = S::one() + a.ddf.abs();
            worst_c2 = worst_c2.max((a.ddf - b.ddf).abs() / scale2);
        }
        (worst_c1, worst_c2)
    }

    pub fn check_joins(&self) -> Result<()> {
        let (c1, c2) = self.join_residuals();
        if c1 > S::of(1e-12) || c2 > S::of(1e-9) {
            return Err(Error::InvalidProfile(format!(
                "joins not C^2: c1 residual {:e}, c2 residual {:e}",
                c1.to_f64_lossy(),
                c2.to_f64_lossy()
            )));
        }
        Ok(())
    }

    /// Minimum of f over an n-point interior grid.
    pub fn min_on_grid(&self, n: usize) -> S {
        self.grid(n)
            .into_iter()
            .map(|t| self.eval(t).expect("grid point in domain").f)
            .fold(S::infinity(), |m, v| m.min(v))
    }

    pub fn max_on_grid(&self, n: usize) -> S {
        self.grid(n)
            .into_iter()
            .map(|t| self.eval(t).expect("grid point in domain").f)
            .fold(S::neg_infinity(), |m, v| m.max(v))
    }

    /// Uniform interior grid with endpoints pulled in by a relative 1e-6 margin.
    pub fn grid(&self, n: usize) -> Vec<S> {
        let (lo, hi) = self.domain();
        interior_grid(lo, hi, n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pieces: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|p| {
                serde_json::json!({
                    "lo": format!("{}", p.lo),
                    "hi": format!("{}", p.hi),
                    "form": p.form.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "pieces": pieces })
    }

    pub fn from_json(doc: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("profile: {m}"));
        let arr = doc
            .get("pieces")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing `pieces`"))?;
        let num = |v: &serde_json::Value| -> Result<S> {
            match v {
                serde_json::Value::String(s) => {
                    S::parse_decimal(s).ok_or_else(|| bad(&format!("bad decimal `{s}`")))
                }
                serde_json::Value::Number(n) => {
                    n.as_f64().map(S::of).ok_or_else(|| bad("non-finite number"))
                }
                _ => Err(bad("expected number")),
            }
        };
        let mut pieces = Vec::new();
        for p in arr {
            pieces.push(Piece {
                lo: num(p.get("lo").ok_or_else(|| bad("missing lo"))?)?,
                hi: num(p.get("hi").ok_or_else(|| bad("missing hi"))?)?,
                form: Form::from_json(p.get("form").ok_or_else(|| bad("missing form"))?)?,
            });
        }
        Self::from_pieces(pieces)
    }
}

/// n uniform points on (lo, hi), endpoints excluded by a relative 1e-6 margin.
pub fn interior_grid<S: Real>(lo: S, hi: S, n: usize) -> Vec<S> {
    let margin = S::of(1e-6) * (hi - lo);
    let a = lo + margin;
    let b = hi - margin;
    if n == 1 {
        return vec![(a + b) * S::of(0.5)];
    }
    let step = (b - a) / S::from_usize(n - 1).unwrap();
    (0..n).map(|i| a + step * S::from_usize(i).unwrap()).collect()
}
