use quantinv_core::exactnum::{make_algebraic, IntPolynomial, Interval, Rational};
use quantinv_core::invertibility::Tau;
use quantinv_core::sysmodel::Coefficient;

/// `3/2`, `-4`, or `alg:c0,c1,...@lo,hi` (coefficients in increasing degree).
pub fn coefficient(s: &str) -> Result<Coefficient, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("alg:") {
        let (coeffs, bounds) = rest.split_once('@').ok_or("expected alg:c0,c1,...@lo,hi")?;
        let p = polynomial(coeffs)?;
        let b = rationals(bounds)?;
        let [lo, hi] = <[Rational; 2]>::try_from(b).map_err(|_| "isolating interval needs two bounds")?;
        let iv = Interval::closed(lo, hi).map_err(|e| e.to_string())?;
        return make_algebraic(&p, &iv).map(Into::into).map_err(|e| e.to_string());
    }
    rational(s).map(Into::into)
}

pub fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("invalid rational {s:?}: {e}"))
}

pub fn rationals(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(rational).collect()
}

pub fn polynomial(s: &str) -> Result<IntPolynomial, String> {
    let coeffs = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("invalid integer {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPolynomial::new(coeffs))
}

pub fn interval(s: &str) -> Result<Interval, String> {
    s.trim().parse().map_err(|e| format!("invalid interval {s:?}: {e}"))
}

/// Exact rational (decimals included), or a float approximation when prefixed with `~`.
pub fn tau(s: &str) -> Result<Tau, String> {
    let s = s.trim();
    if let Some(f) = s.strip_prefix('~') {
        return f.trim().parse::<f64>().map(Tau::Approx).map_err(|_| format!("invalid tau {s:?}"));
    }
    rational(s).map(Tau::Exact)
}

pub fn floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number {t:?}"))).collect()
}
