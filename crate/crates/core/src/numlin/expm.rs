use super::RMat;
use crate::error::{Error, Result};

// Padé degree selection bounds on ||A||_1 (Higham 2005).
const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Squarings beyond this mean `||A t||` is far outside any meaningful range.
const MAX_SQUARINGS: i32 = 64;

fn norm1(m: &RMat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `(U, V)` for a low-degree diagonal Padé approximant.
fn pade_low(a: &RMat, b: &[f64]) -> (RMat, RMat) {
    let n = a.nrows();
    let a2 = a * a;
    let mut power = RMat::identity(n, n);
    let mut odd = RMat::zeros(n, n);
    let mut even = RMat::zeros(n, n);
    for k in 0..b.len() / 2 {
        even += &power * b[2 * k];
        odd += &power * b[2 * k + 1];
        power = &power * &a2;
    }
    (a * odd, even)
}

fn pade13(a: &RMat) -> (RMat, RMat) {
    let n = a.nrows();
    let id = RMat::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &B13;
    let inner_u = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = a * (inner_u + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1]);
    let inner_v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = inner_v + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    (u, v)
}

/// `e^{m t}` by scaling and squaring around a diagonal Padé approximant.
pub fn expm(m: &RMat, t: f64) -> Result<RMat> {
    if m.nrows() != m.ncols() {
        return Err(crate::error::mismatch(
            "expm",
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    if !t.is_finite() {
        return Err(Error::Range(format!("non-finite time {t}")));
    }
    let n = m.nrows();
    if n == 0 || t == 0.0 {
        return Ok(RMat::identity(n, n));
    }
    let a = m * t;
    let norm = norm1(&a);
    if !norm.is_finite() {
        return Err(Error::Range("non-finite matrix entries".into()));
    }

    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade_low(&a, &B3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = pade_low(&a, &B5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade_low(&a, &B7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade_low(&a, &B9);
        (u, v, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        if s > MAX_SQUARINGS {
            return Err(Error::Range(format!("||M t||_1 = {norm:e} is too large")));
        }
        let scaled = &a / 2f64.powi(s);
        let (u, v) = pade13(&scaled);
        (u, v, s)
    };

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Range("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::Range(format!(
            "overflow while squaring (||M t||_1 = {norm:e})"
        )));
    }
    Ok(r)
}
